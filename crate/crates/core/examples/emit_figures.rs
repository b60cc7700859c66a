//! Write the figure CSVs into a directory (default `figures/`).
//!
//! `cargo run --release --example emit_figures -- out 200` writes with 200
//! trials per point instead of the default.

use std::path::PathBuf;

use clusterjs::sim::{emit_figure_data, FigureId, FigureOverrides};

fn main() -> clusterjs::Result<()> {
    let mut args = std::env::args().skip(1);
    let out_dir = PathBuf::from(args.next().unwrap_or_else(|| "figures".into()));
    let trials = args.next().and_then(|t| t.parse().ok());
    let overrides = FigureOverrides { trials, ..FigureOverrides::default() };
    for id in FigureId::ALL {
        for path in emit_figure_data(id, &overrides, &out_dir)? {
            println!("{}", path.display());
        }
    }
    Ok(())
}
