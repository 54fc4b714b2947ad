//! Trajectory driver: evolve a configured walk and record the requested
//! observables into a time-indexed series.

use crate::config::{Observable, ResolvedConfig};
use crate::error::{Error, Result};
use crate::hilbert::build_initial_state;
use crate::observables::{
    all_spin_expectations, concurrence, mean_spin, particle_density, partition_entropy,
    spin_set_entropy, PartitionLabel, SpinExpectation,
};

/// Time-indexed records of one trajectory. `density` is always recorded; the
/// other columns follow the requested observable set.
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub times: Vec<usize>,
    pub density: Vec<Vec<f64>>,
    pub spin: Option<Vec<Vec<SpinExpectation>>>,
    pub mean_spin: Option<Vec<SpinExpectation>>,
    /// (S_x, S_c, S_s) per sample.
    pub entropies: Option<Vec<[f64; 3]>>,
    pub spin_set_entropy: Option<Vec<f64>>,
    /// Pairwise concurrence matrix per sample, row-major |E|×|E|.
    pub concurrence: Option<Vec<Vec<f64>>>,
    pub num_edges: usize,
}

impl ObservableSeries {
    /// Mean density over samples with time in [window.0, window.1).
    pub fn time_averaged_density(&self, window: (usize, usize)) -> Result<Vec<f64>> {
        let rows: Vec<Vec<f64>> = self
            .times
            .iter()
            .zip(&self.density)
            .filter(|(t, _)| (window.0..window.1).contains(*t))
            .map(|(_, row)| row.clone())
            .collect();
        if rows.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "no samples inside averaging window [{}, {})",
                window.0, window.1
            )));
        }
        crate::observables::average_rows(&rows)
    }
}

/// Evolve `config` for its configured number of steps, sampling observables
/// every `sample_stride` steps (plus t = 0 and the final step).
pub fn run_walk(config: &ResolvedConfig, memory_cap: usize) -> Result<ObservableSeries> {
    let basis = config.basis(memory_cap)?;
    let op = config.step_operator();
    let mut state = build_initial_state(&config.initial, basis)?;
    let num_edges = config.lattice.num_edges();

    let want = |o: Observable| config.observables.contains(&o);
    let mut series = ObservableSeries {
        times: Vec::new(),
        density: Vec::new(),
        spin: want(Observable::Spin).then(Vec::new),
        mean_spin: want(Observable::MeanSpin).then(Vec::new),
        entropies: want(Observable::Entropy).then(Vec::new),
        spin_set_entropy: want(Observable::SpinSetEntropy).then(Vec::new),
        concurrence: want(Observable::Concurrence).then(Vec::new),
        num_edges,
    };

    let record = |series: &mut ObservableSeries,
                  t: usize,
                  state: &crate::hilbert::StateVector|
     -> Result<()> {
        series.times.push(t);
        series.density.push(particle_density(state));
        if let Some(col) = &mut series.spin {
            col.push(all_spin_expectations(state));
        }
        if let Some(col) = &mut series.mean_spin {
            col.push(mean_spin(state));
        }
        if let Some(col) = &mut series.entropies {
            col.push([
                partition_entropy(state, PartitionLabel::Positions),
                partition_entropy(state, PartitionLabel::Colors),
                partition_entropy(state, PartitionLabel::Spins),
            ]);
        }
        if let Some(col) = &mut series.spin_set_entropy {
            let set = config.spin_set.as_deref().expect("validated by resolve()");
            col.push(spin_set_entropy(state, set)?);
        }
        if let Some(col) = &mut series.concurrence {
            let mut matrix = vec![0.0; num_edges * num_edges];
            for e1 in 0..num_edges {
                for e2 in (e1 + 1)..num_edges {
                    let c = concurrence(state, e1, e2)?;
                    matrix[e1 * num_edges + e2] = c;
                    matrix[e2 * num_edges + e1] = c;
                }
            }
            col.push(matrix);
        }
        Ok(())
    };

    record(&mut series, 0, &state)?;
    for t in 1..=config.steps {
        op.step(&mut state);
        if t % config.sample_stride == 0 || t == config.steps {
            record(&mut series, t, &state)?;
        }
    }
    Ok(series)
}
