//! A full run from a TOML config: evolve, write the trace, summarize it.

use hermion::cli_io::{run_evolve, run_report, RunConfig};

const CONFIG: &str = r#"
dimension = 1
[basis]
cutoff = 16
[solver]
horizon = 1.0
dt = 0.01
[solver.nonlinearity]
kind = "hartree"
kernel = { kind = "hartree", lambda = 1.0, gamma = 0.4 }
[datum]
kind = "gaussian"
center = 0.5
width = 1.2
momentum = 0.3
"#;

fn main() -> hermion::Result<()> {
    let dir = std::env::temp_dir().join("hermion-config-run");
    let mut cfg = RunConfig::parse(CONFIG)?;
    cfg.output_dir = dir.clone();
    println!("config hash {}", cfg.hash()?);
    let summary = run_evolve(&cfg)?;
    println!("{} snapshots in {}", summary.snapshots, summary.output_dir.display());
    print!("{}", run_report(&dir)?);
    Ok(())
}
