//! Command-line front end: configuration, CSV emission, SVG plots, and
//! experiment dispatch.

pub mod config;
pub mod csvio;
pub mod plot;
pub mod run;

pub use config::{parse_config, CliArgs, Experiment, RunConfig, OUT_DIR_ENV};
pub use csvio::{emit_csv, parse_csv, write_atomic, CsvSchema};
pub use plot::{emit_plot, PlotKind};
pub use run::run_cli;

use clap::Parser;
use std::ffi::OsString;

/// Full CLI entry: parse, resolve, run. Returns the process exit status
/// (0 success, 1 runtime failure, 2 usage error).
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match CliArgs::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with success status.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match parse_config(&cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("qal: {e}");
            return 2;
        }
    };
    match run_cli(&config) {
        Ok(files) => {
            for f in files {
                println!("wrote {f}");
            }
            0
        }
        Err(e) => {
            eprintln!("qal: {e}");
            1
        }
    }
}
