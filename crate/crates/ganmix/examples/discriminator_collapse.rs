//! Watch the first-order discriminator destroy its own intervals.
//!
//! With target modes at -2 and 2, a model mean sitting on each target mode
//! is a bad equilibrium: the discriminator's intervals shrink every step
//! (each endpoint moves toward where the density difference vanishes), and
//! once an interval's width hits zero the indicator is empty — the
//! generator's gradient is exactly zero and training is dead, even though
//! the model is still far from the target in total variation. Larger step
//! sizes only kill the intervals faster.

use ganmix::dynamics::Status;
use ganmix::harness::{reproduce_trajectory, FigureId, FigureOverrides};
use ganmix::loss::grad_generator;

fn main() {
    println!("step size | collapse iter | final widths | generator grad | final tv");
    println!("----------+---------------+--------------+----------------+---------");
    for eta in [0.03, 0.1, 0.3] {
        let run = reproduce_trajectory(
            FigureId::Fig3,
            &FigureOverrides {
                eta: Some(eta),
                iterations: None,
            },
        )
        .unwrap();

        let records = &run.trajectory.records;
        let collapse_iter = records
            .iter()
            .find(|r| r.endpoints.widths() == [0.0, 0.0])
            .map(|r| r.iter);
        let last = records.last().unwrap();
        let g = grad_generator(last.mu, last.endpoints);
        let grad_norm = (g[0] * g[0] + g[1] * g[1]).sqrt();

        println!(
            "   {eta:<6} | {:>13} | {:?} | {grad_norm:>14} | {:.4}",
            collapse_iter.map_or("never".to_string(), |i| i.to_string()),
            last.endpoints.widths(),
            last.tv,
        );
        assert_eq!(run.trajectory.status, Status::DiscriminatorCollapsed);
    }

    println!();
    println!("every run ends with status disc-collapsed: both intervals at zero");
    println!("width, a bitwise-zero generator gradient, and tv still near 0.47.");
}
