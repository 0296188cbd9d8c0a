//! Agent checkpoints: per-agent layer dimensions plus row-major weight
//! values, bit-exact. Replay buffers are not persisted.

use super::Agent;
use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 4] = b"HDQC";
const VERSION: u32 = 1;

/// Write all agents' online networks.
pub fn save_agents<P: AsRef<Path>>(path: P, agents: &[Agent]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(agents.len() as u32).to_le_bytes())?;
    for agent in agents {
        out.write_all(&agent.node.to_le_bytes())?;
        let net = agent.qnet();
        out.write_all(&(net.layers.len() as u32).to_le_bytes())?;
        for layer in &net.layers {
            out.write_all(&(layer.in_dim as u32).to_le_bytes())?;
            out.write_all(&(layer.out_dim as u32).to_le_bytes())?;
        }
        for layer in &net.layers {
            for w in &layer.w {
                out.write_all(&w.to_bits().to_le_bytes())?;
            }
            for b in &layer.b {
                out.write_all(&b.to_bits().to_le_bytes())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Restore weights into existing agents (same count, nodes and shapes).
/// Forward passes after loading are bit-identical to the saved network.
pub fn load_agents<P: AsRef<Path>>(path: P, agents: &mut [Agent]) -> Result<()> {
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    file.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    if read_u32(&mut file)? != VERSION {
        return Err(Error::Checkpoint("unsupported version".into()));
    }
    let count = read_u32(&mut file)? as usize;
    if count != agents.len() {
        return Err(Error::Checkpoint(format!(
            "agent count mismatch: file has {count}, expected {}",
            agents.len()
        )));
    }
    for agent in agents.iter_mut() {
        let node = read_u32(&mut file)?;
        if node != agent.node {
            return Err(Error::Checkpoint(format!(
                "node mismatch: file has {node}, agent is {}",
                agent.node
            )));
        }
        let n_layers = read_u32(&mut file)? as usize;
        if n_layers != agent.qnet().layers.len() {
            return Err(Error::Checkpoint("layer count mismatch".into()));
        }
        let mut dims = Vec::with_capacity(n_layers);
        for _ in 0..n_layers {
            dims.push((read_u32(&mut file)? as usize, read_u32(&mut file)? as usize));
        }
        for (li, &(in_dim, out_dim)) in dims.iter().enumerate() {
            let layer = &agent.qnet().layers[li];
            if layer.in_dim != in_dim || layer.out_dim != out_dim {
                return Err(Error::Checkpoint(format!(
                    "layer {li} shape mismatch: file {in_dim}x{out_dim}, agent {}x{}",
                    layer.in_dim, layer.out_dim
                )));
            }
        }
        for li in 0..n_layers {
            let (w_len, b_len) = {
                let l = &agent.qnet().layers[li];
                (l.w.len(), l.b.len())
            };
            let layer = &mut agent.qnet_mut().layers[li];
            for i in 0..w_len {
                layer.w[i] = f64::from_bits(read_u64(&mut file)?);
            }
            for i in 0..b_len {
                layer.b[i] = f64::from_bits(read_u64(&mut file)?);
            }
        }
        agent.sync_target();
    }
    Ok(())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::AgentConfig;

    #[test]
    fn round_trip_restores_forward_bits() {
        let cfg = AgentConfig::default();
        let agents: Vec<Agent> = (0..3)
            .map(|i| Agent::new(i * 7, 1, 7, cfg.clone(), 42))
            .collect();
        let state = vec![0.37];
        let before: Vec<Vec<f64>> = agents.iter().map(|a| a.q_values(&state)).collect();

        let file = tempfile::NamedTempFile::new().unwrap();
        save_agents(file.path(), &agents).unwrap();

        // fresh agents with different seed -> different weights, then load
        let mut restored: Vec<Agent> = (0..3)
            .map(|i| Agent::new(i * 7, 1, 7, cfg.clone(), 999))
            .collect();
        assert_ne!(before[0], restored[0].q_values(&state));
        load_agents(file.path(), &mut restored).unwrap();
        for (a, b) in before.iter().zip(&restored) {
            let after = b.q_values(&state);
            assert_eq!(a.len(), after.len());
            for (x, y) in a.iter().zip(after) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn mismatched_agents_are_rejected() {
        let cfg = AgentConfig::default();
        let agents: Vec<Agent> = (0..2).map(|i| Agent::new(i, 1, 7, cfg.clone(), 1)).collect();
        let file = tempfile::NamedTempFile::new().unwrap();
        save_agents(file.path(), &agents).unwrap();

        let mut wrong_count: Vec<Agent> = (0..3).map(|i| Agent::new(i, 1, 7, cfg.clone(), 1)).collect();
        assert!(load_agents(file.path(), &mut wrong_count).is_err());

        let mut wrong_node: Vec<Agent> = vec![
            Agent::new(5, 1, 7, cfg.clone(), 1),
            Agent::new(1, 1, 7, cfg.clone(), 1),
        ];
        assert!(load_agents(file.path(), &mut wrong_node).is_err());
    }
}
