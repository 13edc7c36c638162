//! Driving the command layer from code: a small zero-temperature sweep written as CSV.
use dicke_overlap::cli::{execute, Command, Config, Settings};

fn main() -> dicke_overlap::Result<()> {
    let mut config = Config::default();
    for kv in ["model.n_atoms=8,16", "grid.lambda_steps=7", "grid.lambda_max=1.2"] {
        config.apply_override(kv)?;
    }
    let settings = Settings::from_config(config)?;
    let out = execute(Command::SweepZeroT, &settings)?;
    out.table.write_to(std::io::stdout().lock())?;
    Ok(())
}
