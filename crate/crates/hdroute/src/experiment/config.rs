//! Scenario configuration: a flat TOML file of key/value pairs (lists
//! allowed), every key overridable from the command line. Unknown keys are
//! rejected.

use crate::agent::AgentConfig;
use crate::error::{Error, Result};
use crate::graph::{generate, CeSpec, load_edge_list, Network, TopologySpec};
use crate::traffic::{RemovalMode, Strategy};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: Option<String>,
    network: Option<String>,
    n: Option<usize>,
    ba_m: Option<usize>,
    ce_tiers: Option<u32>,
    ce_a: Option<f64>,
    ce_lambda: Option<f64>,
    er_mean_degree: Option<f64>,
    edge_list: Option<String>,
    strategies: Option<Vec<String>>,
    k_list: Option<Vec<usize>>,
    r_over_n: Option<Vec<f64>>,
    seeds: Option<Vec<u64>>,
    seed: Option<u64>,
    episodes: Option<usize>,
    mis_per_episode: Option<usize>,
    mi_len: Option<usize>,
    buffer: Option<usize>,
    warmup: Option<usize>,
    window: Option<usize>,
    eta_threshold: Option<f64>,
    eta_fit_max: Option<f64>,
    removal_mode: Option<String>,
    removal_fraction: Option<f64>,
    removal_at_episode: Option<usize>,
    snapshot_time: Option<u64>,
    last_n_episodes: Option<usize>,
    out_dir: Option<String>,
    generate_first: Option<bool>,
    gamma: Option<f64>,
    lr: Option<f64>,
    replay_capacity: Option<usize>,
    batch: Option<usize>,
    eps_start: Option<f64>,
    eps_floor: Option<f64>,
    eps_decay_episodes: Option<usize>,
    target_sync: Option<u64>,
    train_start: Option<usize>,
    hidden: Option<usize>,
    peer_queues: Option<bool>,
}

/// Which topology the scenario runs on.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkChoice {
    Generated(TopologySpec),
    EdgeList(PathBuf),
}

/// Fully resolved scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub name: String,
    pub network: NetworkChoice,
    pub n: usize,
    pub strategies: Vec<Strategy>,
    pub k_list: Vec<usize>,
    pub r_over_n: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Master seed mixed into every derived stream.
    pub seed: u64,
    pub episodes: usize,
    pub mis_per_episode: usize,
    pub mi_len: usize,
    pub buffer: usize,
    pub warmup: usize,
    pub window: usize,
    pub eta_threshold: f64,
    pub eta_fit_max: f64,
    pub removal_mode: Option<RemovalMode>,
    pub removal_fraction: f64,
    pub removal_at_episode: usize,
    pub snapshot_time: u64,
    pub last_n_episodes: usize,
    pub out_dir: PathBuf,
    pub generate_first: bool,
    pub agent: AgentConfig,
}

impl Default for ScenarioConfig {
    fn default() -> ScenarioConfig {
        ScenarioConfig {
            name: "scenario".into(),
            network: NetworkChoice::Generated(TopologySpec::Ba { m: 3 }),
            n: 1000,
            strategies: vec![Strategy::Sp, Strategy::Hd],
            k_list: vec![10],
            r_over_n: vec![0.002],
            seeds: vec![1, 2, 3],
            seed: 0,
            episodes: 60,
            mis_per_episode: 50,
            mi_len: 10,
            buffer: 40,
            warmup: 500,
            window: 1500,
            eta_threshold: 0.02,
            eta_fit_max: 0.6,
            removal_mode: None,
            removal_fraction: 0.02,
            removal_at_episode: 20,
            snapshot_time: 500,
            last_n_episodes: 30,
            out_dir: PathBuf::from("out"),
            generate_first: true,
            agent: AgentConfig::default(),
        }
    }
}

fn parse_strategy(s: &str) -> Result<Strategy> {
    match s.to_ascii_lowercase().as_str() {
        "sp" => Ok(Strategy::Sp),
        "ld" => Ok(Strategy::Ld),
        "hd" => Ok(Strategy::Hd),
        other => Err(Error::Config(format!("unknown strategy '{other}'"))),
    }
}

fn parse_removal(s: &str) -> Result<Option<RemovalMode>> {
    match s.to_ascii_lowercase().as_str() {
        "none" => Ok(None),
        "random" => Ok(Some(RemovalMode::Random)),
        "bc" => Ok(Some(RemovalMode::Bc)),
        other => Err(Error::Config(format!("unknown removal mode '{other}'"))),
    }
}

impl ScenarioConfig {
    /// Load a scenario file, then apply `key=value` overrides in order.
    pub fn load(path: &Path, overrides: &[String]) -> Result<ScenarioConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<ScenarioConfig> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        for ov in overrides {
            let (key, value) = ov
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override '{ov}' is not key=value")))?;
            let key = key.trim();
            let value = value.trim();
            let parsed: toml::Table = format!("{key} = {value}")
                .parse()
                .or_else(|_| format!("{key} = \"{value}\"").parse::<toml::Table>())
                .map_err(|e| Error::Config(format!("override '{ov}': {e}")))?;
            for (k, v) in parsed {
                table.insert(k, v);
            }
        }
        let raw: RawScenario = toml::Value::Table(table)
            .try_into()
            .map_err(|e| Error::Config(format!("config error: {e}")))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawScenario) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::default();
        if let Some(v) = raw.name {
            cfg.name = v;
        }
        if let Some(v) = raw.n {
            cfg.n = v;
        }
        let kind = raw.network.unwrap_or_else(|| "ba".into());
        cfg.network = match kind.to_ascii_lowercase().as_str() {
            "ba" => NetworkChoice::Generated(TopologySpec::Ba {
                m: raw.ba_m.unwrap_or(3),
            }),
            "ce" => {
                let tiers = raw.ce_tiers.unwrap_or(3);
                let base = if tiers >= 7 {
                    CeSpec::calibrated_j7()
                } else {
                    CeSpec::calibrated_j3()
                };
                NetworkChoice::Generated(TopologySpec::Ce(CeSpec {
                    tiers,
                    weight_base: raw.ce_a.unwrap_or(base.weight_base),
                    rate_base: raw.ce_lambda.unwrap_or(base.rate_base),
                }))
            }
            "er" => NetworkChoice::Generated(TopologySpec::Er {
                mean_degree: raw.er_mean_degree.unwrap_or(6.0),
            }),
            "edge-list" | "edge_list" => {
                let p = raw
                    .edge_list
                    .ok_or_else(|| Error::Config("network = \"edge-list\" needs edge_list = \"<path>\"".into()))?;
                NetworkChoice::EdgeList(PathBuf::from(p))
            }
            other => return Err(Error::Config(format!("unknown network '{other}'"))),
        };
        if let Some(v) = raw.strategies {
            cfg.strategies = v.iter().map(|s| parse_strategy(s)).collect::<Result<_>>()?;
        }
        if let Some(v) = raw.k_list {
            cfg.k_list = v;
        }
        if let Some(v) = raw.r_over_n {
            cfg.r_over_n = v;
        }
        if let Some(v) = raw.seeds {
            cfg.seeds = v;
        }
        if let Some(v) = raw.seed {
            cfg.seed = v;
        }
        if let Some(v) = raw.episodes {
            cfg.episodes = v;
        }
        if let Some(v) = raw.mis_per_episode {
            cfg.mis_per_episode = v;
        }
        if let Some(v) = raw.mi_len {
            cfg.mi_len = v;
        }
        if let Some(v) = raw.buffer {
            cfg.buffer = v;
        }
        if let Some(v) = raw.warmup {
            cfg.warmup = v;
        }
        if let Some(v) = raw.window {
            cfg.window = v;
        }
        if let Some(v) = raw.eta_threshold {
            cfg.eta_threshold = v;
        }
        if let Some(v) = raw.eta_fit_max {
            cfg.eta_fit_max = v;
        }
        if let Some(v) = raw.removal_mode {
            cfg.removal_mode = parse_removal(&v)?;
        }
        if let Some(v) = raw.removal_fraction {
            cfg.removal_fraction = v;
        }
        if let Some(v) = raw.removal_at_episode {
            cfg.removal_at_episode = v;
        }
        if let Some(v) = raw.snapshot_time {
            cfg.snapshot_time = v;
        }
        if let Some(v) = raw.last_n_episodes {
            cfg.last_n_episodes = v;
        }
        if let Some(v) = raw.out_dir {
            cfg.out_dir = PathBuf::from(v);
        }
        if let Some(v) = raw.generate_first {
            cfg.generate_first = v;
        }
        if let Some(v) = raw.gamma {
            cfg.agent.gamma = v;
        }
        if let Some(v) = raw.lr {
            cfg.agent.lr = v;
        }
        if let Some(v) = raw.replay_capacity {
            cfg.agent.replay_capacity = v;
        }
        if let Some(v) = raw.batch {
            cfg.agent.batch = v;
        }
        if let Some(v) = raw.eps_start {
            cfg.agent.eps_start = v;
        }
        if let Some(v) = raw.eps_floor {
            cfg.agent.eps_floor = v;
        }
        if let Some(v) = raw.eps_decay_episodes {
            cfg.agent.eps_decay_episodes = v;
        }
        if let Some(v) = raw.target_sync {
            cfg.agent.target_sync = v;
        }
        if let Some(v) = raw.train_start {
            cfg.agent.train_start = v;
        }
        if let Some(v) = raw.hidden {
            cfg.agent.hidden = v;
        }
        if let Some(v) = raw.peer_queues {
            cfg.agent.peer_queues = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let NetworkChoice::EdgeList(p) = &self.network {
            if !p.exists() {
                return Err(Error::Config(format!(
                    "edge list file {} does not exist",
                    p.display()
                )));
            }
        }
        if self.n < 2 {
            return Err(Error::Config(format!("n = {} too small", self.n)));
        }
        for &k in &self.k_list {
            if k > self.n / 10 {
                return Err(Error::Config(format!(
                    "K = {k} exceeds N/10 = {}",
                    self.n / 10
                )));
            }
        }
        if self.r_over_n.is_empty() || self.seeds.is_empty() || self.strategies.is_empty() {
            return Err(Error::Config(
                "r_over_n, seeds and strategies must be nonempty".into(),
            ));
        }
        if self.r_over_n.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::Config("r_over_n entries must be positive".into()));
        }
        if !(self.removal_fraction > 0.0 && self.removal_fraction < 1.0) {
            return Err(Error::Config(format!(
                "removal_fraction {} outside (0, 1)",
                self.removal_fraction
            )));
        }
        Ok(())
    }

    /// Build the topology instance for one generation seed.
    pub fn build_network(&self, gen_seed: u64) -> Result<Network> {
        match &self.network {
            NetworkChoice::Generated(spec) => {
                generate(self.n, spec, crate::rng::derive(self.seed, "network", gen_seed))
            }
            NetworkChoice::EdgeList(path) => load_edge_list(path),
        }
    }

    /// Stream seed for one sweep cell, independent of execution order. A
    /// hierarchical cell with K = 0 maps onto the shortest-path stream: with
    /// no agents the dynamics are the same process, so the rows coincide
    /// exactly.
    pub fn cell_seed(&self, strategy: Strategy, k: usize, r_over_n: f64, gen_seed: u64) -> u64 {
        let name = if strategy == Strategy::Hd && k == 0 {
            Strategy::Sp.name()
        } else {
            strategy.name()
        };
        let label = format!("{name}-{k}");
        let s1 = crate::rng::derive(self.seed, "cell", gen_seed);
        let s2 = crate::rng::derive(s1, &label, r_over_n.to_bits());
        s2
    }

    /// Canonical one-line-per-key rendering, hashed into CSV headers so
    /// reruns are verifiable.
    pub fn canonical_string(&self) -> String {
        let mut s = String::new();
        use std::fmt::Write;
        let _ = write!(s, "name={};", self.name);
        match &self.network {
            NetworkChoice::Generated(TopologySpec::Ba { m }) => {
                let _ = write!(s, "network=ba;ba_m={m};");
            }
            NetworkChoice::Generated(TopologySpec::Ce(ce)) => {
                let _ = write!(
                    s,
                    "network=ce;ce_tiers={};ce_a={};ce_lambda={};",
                    ce.tiers, ce.weight_base, ce.rate_base
                );
            }
            NetworkChoice::Generated(TopologySpec::Er { mean_degree }) => {
                let _ = write!(s, "network=er;er_mean_degree={mean_degree};");
            }
            NetworkChoice::EdgeList(p) => {
                let _ = write!(s, "network=edge-list;edge_list={};", p.display());
            }
        }
        let _ = write!(s, "n={};", self.n);
        let _ = write!(
            s,
            "strategies={};",
            self.strategies
                .iter()
                .map(|st| st.name())
                .collect::<Vec<_>>()
                .join(",")
        );
        let _ = write!(
            s,
            "k_list={:?};r_over_n={:?};seeds={:?};seed={};",
            self.k_list, self.r_over_n, self.seeds, self.seed
        );
        let _ = write!(
            s,
            "episodes={};mis_per_episode={};mi_len={};buffer={};warmup={};window={};",
            self.episodes, self.mis_per_episode, self.mi_len, self.buffer, self.warmup, self.window
        );
        let _ = write!(
            s,
            "eta_threshold={};eta_fit_max={};removal_mode={};removal_fraction={};removal_at_episode={};",
            self.eta_threshold,
            self.eta_fit_max,
            self.removal_mode.map_or("none", |m| m.name()),
            self.removal_fraction,
            self.removal_at_episode
        );
        let _ = write!(
            s,
            "snapshot_time={};last_n_episodes={};generate_first={};",
            self.snapshot_time, self.last_n_episodes, self.generate_first
        );
        let a = &self.agent;
        let _ = write!(
            s,
            "gamma={};lr={};replay_capacity={};batch={};eps_start={};eps_floor={};eps_decay_episodes={};target_sync={};train_start={};hidden={};peer_queues={}",
            a.gamma, a.lr, a.replay_capacity, a.batch, a.eps_start, a.eps_floor,
            a.eps_decay_episodes, a.target_sync, a.train_start, a.hidden, a.peer_queues
        );
        s
    }

    pub fn config_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.canonical_string().as_bytes() {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ScenarioConfig::from_toml_str("n = 200\n", &[]).unwrap();
        assert_eq!(cfg.n, 200);
        assert_eq!(cfg.buffer, 40);
        assert_eq!(cfg.agent.gamma, 0.9);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ScenarioConfig::from_toml_str("bogus_key = 3\n", &[]).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{err}");
    }

    #[test]
    fn overrides_apply_after_file() {
        let cfg = ScenarioConfig::from_toml_str(
            "n = 200\nbuffer = 10\n",
            &["buffer=20".into(), "strategies=[\"ld\"]".into()],
        )
        .unwrap();
        assert_eq!(cfg.buffer, 20);
        assert_eq!(cfg.strategies, vec![Strategy::Ld]);
    }

    #[test]
    fn k_above_n_tenth_is_rejected() {
        let err = ScenarioConfig::from_toml_str("n = 50\nk_list = [6]\n", &[]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn missing_edge_list_file_is_rejected() {
        let err = ScenarioConfig::from_toml_str(
            "network = \"edge-list\"\nedge_list = \"/nonexistent/file.txt\"\n",
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn hd_k0_shares_the_sp_cell_stream() {
        let cfg = ScenarioConfig::default();
        assert_eq!(
            cfg.cell_seed(Strategy::Hd, 0, 0.01, 1),
            cfg.cell_seed(Strategy::Sp, 0, 0.01, 1)
        );
        assert_ne!(
            cfg.cell_seed(Strategy::Hd, 3, 0.01, 1),
            cfg.cell_seed(Strategy::Sp, 0, 0.01, 1)
        );
    }

    #[test]
    fn config_hash_is_stable_and_sensitive() {
        let a = ScenarioConfig::from_toml_str("n = 200\n", &[]).unwrap();
        let b = ScenarioConfig::from_toml_str("n = 200\n", &[]).unwrap();
        let c = ScenarioConfig::from_toml_str("n = 201\n", &[]).unwrap();
        assert_eq!(a.config_hash(), b.config_hash());
        assert_ne!(a.config_hash(), c.config_hash());
    }
}
