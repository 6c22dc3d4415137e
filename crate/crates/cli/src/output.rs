//! Output assembly. Every command builds its full output in memory and
//! writes it in one shot, so a failing run never leaves partial data
//! behind.

use std::io::Write;
use std::path::Path;

use crate::cli_error::CliResult;

/// Write to the path (via a temp file and rename) or to stdout.
pub fn emit(out: Option<&Path>, payload: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            let tmp = path.with_extension("tmp");
            std::fs::write(&tmp, payload)?;
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(payload.as_bytes())?;
            Ok(())
        }
    }
}

/// Shortest round-trip decimal form of a float (17 significant digits when
/// needed), the stable representation the golden files pin down.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
