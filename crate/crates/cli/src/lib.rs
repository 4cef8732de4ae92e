pub mod config;
pub mod emit;
pub mod error;
pub mod run;

use std::io::Write;

use config::{Format, RunConfig};
use error::{CliError, CliResult};

/// Run a validated config and return the rendered document.
pub fn render(cfg: &RunConfig) -> CliResult<String> {
    let out = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| run::run(cfg))?,
        None => run::run(cfg)?,
    };
    match cfg.format {
        Format::Json => Ok(emit::json_document(&out.document)),
        Format::Csv => emit::csv_document(&out.table),
    }
}

/// Render and write; nothing is written unless the whole run succeeds.
pub fn execute(cfg: &RunConfig) -> CliResult<()> {
    let text = render(cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
