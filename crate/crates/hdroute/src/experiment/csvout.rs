//! CSV emission with a reproducibility header: every file starts with a
//! comment carrying the config hash and master seed, then the schema row.
//! Identical config and seed produce byte-identical files.

use super::config::ScenarioConfig;
use crate::error::Result;
use std::io::Write;
use std::path::Path;

pub fn write_csv(
    path: &Path,
    cfg: &ScenarioConfig,
    schema: &str,
    rows: &[String],
) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        out,
        "# config_hash={:016x} seed={}",
        cfg.config_hash(),
        cfg.seed
    )?;
    writeln!(out, "{schema}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}
