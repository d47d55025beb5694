//! Run all five named demo trajectories and render them as SVG.
//!
//! Writes CSV and SVG files under `target/example-output/`. The five demos
//! cover the qualitative regimes of the dynamics:
//!
//! * 1a — first-order training that converges to the target,
//! * 1b — means oscillate, then merge (mode collapse),
//! * 1c — the same game under the optimal discriminator: reliable recovery,
//! * 1d — thin initial intervals die and the generator gradient vanishes,
//! * 3  — two-interval discriminator collapse with a larger step size.

use std::fs;
use std::path::PathBuf;

use ganmix::harness::{
    parse_csv, render_trajectory_svg, reproduce_trajectory, write_trajectory_csv, FigureId,
    FigureOverrides, ParsedCsv,
};

fn main() {
    let out_dir = PathBuf::from("target/example-output");
    fs::create_dir_all(&out_dir).unwrap();

    for figure in [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig1c,
        FigureId::Fig1d,
        FigureId::Fig3,
    ] {
        let run = reproduce_trajectory(figure, &FigureOverrides::default()).unwrap();

        let mut csv = Vec::new();
        write_trajectory_csv(&mut csv, &run).unwrap();
        let csv_path = out_dir.join(format!("trajectory_{figure}.csv"));
        fs::write(&csv_path, &csv).unwrap();

        let parsed = match parse_csv(std::str::from_utf8(&csv).unwrap()).unwrap() {
            ParsedCsv::Trajectory(t) => t,
            _ => unreachable!(),
        };
        let svg_path = out_dir.join(format!("trajectory_{figure}.svg"));
        fs::write(&svg_path, render_trajectory_svg(&parsed)).unwrap();

        let last = run.trajectory.final_record();
        println!(
            "{figure}: variant {:<12} status {:<22} iterates {:>5}  final means ({:+.4}, {:+.4})  tv {:.4}",
            run.config.variant.to_string(),
            run.trajectory.status.to_string(),
            run.trajectory.records.len(),
            last.mu[0],
            last.mu[1],
            last.tv,
        );
    }
    println!();
    println!("wrote CSV + SVG pairs to {}", out_dir.display());
}
