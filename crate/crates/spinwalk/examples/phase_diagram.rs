//! Coarse (θ, J) phase map from a parallel sweep.
//!
//! Classifies each cell by the KS distance of its long-time averaged density
//! (threshold 1.5/100) and prints the map; the full long-form table lands in
//! phase_diagram.csv. Uses |V| = 11 and short runs to stay interactive —
//! the CLI `sweep` subcommand scales this up.

use spinwalk::config::WalkConfig;
use spinwalk::io::write_sweep_csv;
use spinwalk::sweep::{run_sweep, SweepGrid};

fn main() {
    let resolution = 8;
    let mut template = WalkConfig::uniform(11, 0.0, 0.0, "z", 800);
    template.sample_stride = Some(4);
    let grid = SweepGrid::over_unit_box(resolution, template);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    println!(
        "sweeping {}×{} cells on {workers} workers…",
        grid.theta_values.len(),
        grid.j_values.len()
    );
    let result = run_sweep(&grid, workers, 2 << 30).unwrap();

    println!("\nlocalization map ('#' = localized, D_KS > 1.5/100; '.' = propagating):");
    print!("        ");
    for theta in &grid.theta_values {
        print!("θ={theta:4.2} ");
    }
    println!();
    for (ij, j) in grid.j_values.iter().enumerate() {
        print!("J = {j:4.2} ");
        for it in 0..grid.theta_values.len() {
            match result.cell(it, ij) {
                Ok(m) => print!("  {}    ", if m.d_ks > 1.5 / 100.0 { '#' } else { '.' }),
                Err(_) => print!("  ?    "),
            }
        }
        println!();
    }

    let path = std::path::Path::new("phase_diagram.csv");
    write_sweep_csv(path, &result).unwrap();
    println!("\nwrote {}", path.display());
}
