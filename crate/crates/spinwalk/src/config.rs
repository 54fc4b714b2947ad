//! Experiment configuration: the JSON document consumed by the CLI and the
//! sweep template, using the conventional short labels ('p'/'b' boundaries,
//! 'z'/'x'/'zx'/'e' initial states, 'i' prefix via `uniform`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{CoinField, Coupling, StepOperator};
use crate::hilbert::{BasisIndex, Boundary, InitialStateKind, InitialStateSpec, Lattice};

/// Default memory cap for state allocations: 2 GiB, enough for |V| = 19
/// periodic (≈ 320 MB per buffer) with slack.
pub const DEFAULT_MEMORY_CAP: usize = 2 << 30;

/// Observables that can be recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Density,
    Spin,
    MeanSpin,
    Entropy,
    SpinSetEntropy,
    Concurrence,
}

impl Observable {
    fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "p" => Observable::Density,
            "spin" => Observable::Spin,
            "mean_spin" => Observable::MeanSpin,
            "entropy" => Observable::Entropy,
            "spin_set_entropy" => Observable::SpinSetEntropy,
            "concurrence" => Observable::Concurrence,
            other => {
                return Err(Error::config(
                    "observables",
                    format!(
                        "unknown observable `{other}` (expected p, spin, mean_spin, entropy, \
                         spin_set_entropy, concurrence)"
                    ),
                ))
            }
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Observable::Density => "p",
            Observable::Spin => "spin",
            Observable::MeanSpin => "mean_spin",
            Observable::Entropy => "entropy",
            Observable::SpinSetEntropy => "spin_set_entropy",
            Observable::Concurrence => "concurrence",
        }
    }
}

/// Full experiment description as found in a config file.
///
/// Either `theta` (uniform coin) or the pair `theta_minus`/`theta_plus` with
/// an optional `interface` (piecewise coin, default |V|/2) must be present.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub nodes: usize,
    /// "p" (periodic) or "b" (reflective).
    #[serde(default = "default_boundary")]
    pub boundary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_plus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interface: Option<usize>,
    #[serde(rename = "J")]
    pub j: f64,
    /// "z", "x", "zx" or "e".
    pub initial: String,
    /// The 'i' prefix: uniform particle position.
    #[serde(default)]
    pub uniform: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<usize>,
    pub steps: usize,
    #[serde(default)]
    pub observables: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_stride: Option<usize>,
    /// [start, end) in steps; default is the second half of the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average_window: Option<(usize, usize)>,
    /// Grid axes for the sweep subcommand; other commands ignore them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_values: Option<Vec<f64>>,
    #[serde(rename = "J_values", skip_serializing_if = "Option::is_none")]
    pub j_values: Option<Vec<f64>>,
}

fn default_boundary() -> String {
    "p".to_string()
}

/// A validated configuration, ready to drive the engine.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    pub lattice: Lattice,
    pub coin: CoinField,
    pub coupling: Coupling,
    pub initial: InitialStateSpec,
    pub steps: usize,
    pub observables: Vec<Observable>,
    pub spin_set: Option<Vec<usize>>,
    pub sample_stride: usize,
    pub average_window: (usize, usize),
}

impl WalkConfig {
    /// A uniform-coin template with the default observable set.
    pub fn uniform(nodes: usize, theta: f64, j: f64, initial: &str, steps: usize) -> Self {
        WalkConfig {
            nodes,
            boundary: default_boundary(),
            theta: Some(theta),
            theta_minus: None,
            theta_plus: None,
            interface: None,
            j,
            initial: initial.to_string(),
            uniform: false,
            x0: None,
            steps,
            observables: Vec::new(),
            spin_set: None,
            sample_stride: None,
            average_window: None,
            theta_values: None,
            j_values: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let boundary = match self.boundary.as_str() {
            "p" => Boundary::Periodic,
            "b" => Boundary::Reflective,
            other => {
                return Err(Error::config(
                    "boundary",
                    format!("expected \"p\" or \"b\", got \"{other}\""),
                ))
            }
        };
        let lattice = Lattice::new(self.nodes, boundary)
            .map_err(|e| Error::config("nodes", e.to_string()))?;

        let coin = match (self.theta, self.theta_minus, self.theta_plus) {
            (Some(t), None, None) => CoinField::uniform(&lattice, t),
            (None, Some(tm), Some(tp)) => {
                let interface = self.interface.unwrap_or(self.nodes / 2);
                if interface >= self.nodes {
                    return Err(Error::config(
                        "interface",
                        format!("interface {interface} outside {} nodes", self.nodes),
                    ));
                }
                CoinField::piecewise(&lattice, tm, tp, interface)
            }
            (Some(_), _, _) => {
                return Err(Error::config(
                    "theta",
                    "give either `theta` or the pair `theta_minus`/`theta_plus`, not both",
                ))
            }
            _ => {
                return Err(Error::config(
                    "theta",
                    "missing coin angle: set `theta` or both `theta_minus` and `theta_plus`",
                ))
            }
        };

        if !self.j.is_finite() {
            return Err(Error::config("J", "coupling must be finite"));
        }

        let kind = match self.initial.as_str() {
            "z" => InitialStateKind::Z,
            "x" => InitialStateKind::X,
            "zx" => InitialStateKind::Zx,
            "e" => InitialStateKind::E,
            other => {
                return Err(Error::config(
                    "initial",
                    format!("expected \"z\", \"x\", \"zx\" or \"e\", got \"{other}\""),
                ))
            }
        };
        let x0 = self.x0.unwrap_or(self.nodes / 2);
        if x0 >= self.nodes {
            return Err(Error::config(
                "x0",
                format!("x0={x0} outside {} nodes", self.nodes),
            ));
        }
        let mut initial = InitialStateSpec::new(kind, x0);
        if self.uniform {
            initial = initial.uniform();
        }
        if kind == InitialStateKind::Zx && x0 >= lattice.num_edges() {
            return Err(Error::config(
                "x0",
                format!(
                    "'zx' needs edge (x0, x0+1): x0={x0} but |E|={}",
                    lattice.num_edges()
                ),
            ));
        }

        if self.steps == 0 {
            return Err(Error::config("steps", "need at least one step"));
        }

        let observables = if self.observables.is_empty() {
            vec![
                Observable::Density,
                Observable::MeanSpin,
                Observable::Entropy,
            ]
        } else {
            let mut parsed = Vec::new();
            for name in &self.observables {
                let obs = Observable::parse(name)?;
                if !parsed.contains(&obs) {
                    parsed.push(obs);
                }
            }
            parsed
        };

        if let Some(set) = &self.spin_set {
            let mut seen = vec![false; lattice.num_edges()];
            if set.is_empty() {
                return Err(Error::config("spin_set", "must list at least one edge"));
            }
            for &e in set {
                if e >= lattice.num_edges() {
                    return Err(Error::config(
                        "spin_set",
                        format!("edge {e} outside |E| = {}", lattice.num_edges()),
                    ));
                }
                if seen[e] {
                    return Err(Error::config("spin_set", format!("edge {e} listed twice")));
                }
                seen[e] = true;
            }
        } else if observables.contains(&Observable::SpinSetEntropy) {
            return Err(Error::config(
                "spin_set",
                "observable `spin_set_entropy` needs a `spin_set` list",
            ));
        }

        // S_A dominates runtime; sample sparsely on large registers.
        let sample_stride = match self.sample_stride {
            Some(0) => return Err(Error::config("sample_stride", "stride must be ≥ 1")),
            Some(s) => s,
            None => {
                if self.nodes <= 13 {
                    1
                } else {
                    4
                }
            }
        };

        let average_window = match self.average_window {
            Some((a, b)) => {
                if a >= b || b > self.steps {
                    return Err(Error::config(
                        "average_window",
                        format!(
                            "window [{a}, {b}) must be nonempty and within {} steps",
                            self.steps
                        ),
                    ));
                }
                (a, b)
            }
            None => (self.steps / 2, self.steps),
        };

        Ok(ResolvedConfig {
            lattice,
            coin,
            coupling: Coupling::new(self.j),
            initial,
            steps: self.steps,
            observables,
            spin_set: self.spin_set.clone(),
            sample_stride,
            average_window,
        })
    }
}

impl ResolvedConfig {
    /// A basis for this lattice, subject to `memory_cap` bytes.
    pub fn basis(&self, memory_cap: usize) -> Result<BasisIndex> {
        BasisIndex::with_memory_cap(self.lattice, memory_cap)
    }

    pub fn step_operator(&self) -> StepOperator {
        StepOperator::new(self.lattice, self.coin.clone(), self.coupling)
            .expect("resolved coin matches the lattice")
    }
}
