//! Hilbert-space layout for a walker on a 1D lattice with one spin-1/2 per edge.
//!
//! A basis ket |x c s⟩ holds the walker position x ∈ [0,|V|), its two-valued
//! color c, and the spin word s whose bit e is the spin at edge e = (x_e, x_e+1)
//! (bit 0 ≡ |0⟩ ≡ up). The total dimension is |V|·2·2^|E| with |E| = |V| on a
//! ring and |V|−1 on an open chain.
//!
//! Flat layout: `i = (2x + c)·2^|E| + s`. Keeping the spin word in the low bits
//! means every edge-local 4×4 operation touches indices at fixed strides, so the
//! evolution sweeps run in place.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Boundary condition of the chain: the 'p' and 'b' run labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Reflective,
}

/// A 1D lattice of `num_nodes` sites; edges connect neighbors (x, x+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    num_nodes: usize,
    boundary: Boundary,
}

impl Lattice {
    pub fn new(num_nodes: usize, boundary: Boundary) -> Result<Self> {
        if num_nodes < 2 {
            return Err(Error::InvalidArgument(format!(
                "lattice needs at least 2 nodes, got {num_nodes}"
            )));
        }
        Ok(Lattice {
            num_nodes,
            boundary,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    /// |E| = |V| on a ring, |V|−1 on an open chain.
    pub fn num_edges(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.num_nodes,
            Boundary::Reflective => self.num_nodes - 1,
        }
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// The two nodes of edge `e`, in (left, right) order. On a ring the last
    /// edge wraps: (|V|−1, 0).
    pub fn edge_nodes(&self, e: usize) -> (usize, usize) {
        (e, (e + 1) % self.num_nodes)
    }
}

/// Bijection between basis labels (x, c, s) and flat amplitude indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndex {
    lattice: Lattice,
    spin_configs: usize,
    dim: usize,
}

impl BasisIndex {
    pub fn new(lattice: Lattice) -> Self {
        let spin_configs = 1usize << lattice.num_edges();
        let dim = lattice.num_nodes() * 2 * spin_configs;
        BasisIndex {
            lattice,
            spin_configs,
            dim,
        }
    }

    /// Like [`BasisIndex::new`] but refuses layouts whose state vector (plus
    /// the one scratch buffer the shift sweep needs) would not fit in
    /// `cap_bytes`.
    pub fn with_memory_cap(lattice: Lattice, cap_bytes: usize) -> Result<Self> {
        let basis = Self::new(lattice);
        let needed = basis.dim * 2 * std::mem::size_of::<Complex64>();
        if needed > cap_bytes {
            return Err(Error::MemoryCap {
                needed,
                cap: cap_bytes,
            });
        }
        Ok(basis)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of spin configurations 2^|E|.
    pub fn spin_configs(&self) -> usize {
        self.spin_configs
    }

    /// Flat index of |x c s⟩.
    pub fn encode(&self, x: usize, c: usize, s: usize) -> Result<usize> {
        if x >= self.lattice.num_nodes() || c > 1 || s >= self.spin_configs {
            return Err(Error::IndexOutOfRange(format!(
                "(x={x}, c={c}, s={s}) outside |V|={}, |E|={}",
                self.lattice.num_nodes(),
                self.lattice.num_edges()
            )));
        }
        Ok(self.index_unchecked(x, c, s))
    }

    /// Basis labels of flat index `i`.
    pub fn decode(&self, i: usize) -> Result<(usize, usize, usize)> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange(format!(
                "flat index {i} ≥ dim {}",
                self.dim
            )));
        }
        let s = i & (self.spin_configs - 1);
        let xc = i >> self.lattice.num_edges();
        Ok((xc >> 1, xc & 1, s))
    }

    #[inline(always)]
    pub(crate) fn index_unchecked(&self, x: usize, c: usize, s: usize) -> usize {
        ((2 * x + c) << self.lattice.num_edges()) | s
    }
}

/// Dense complex state over a [`BasisIndex`].
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: BasisIndex,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The zero-filled state (not normalized; fill before use).
    pub fn zeros(basis: BasisIndex) -> Self {
        StateVector {
            basis,
            amps: vec![Complex64::ZERO; basis.dim()],
        }
    }

    pub fn basis(&self) -> &BasisIndex {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amps {
                *a *= inv;
            }
        }
    }

    /// Largest |ψ_i − φ_i| over the basis.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Which initial-state family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialStateKind {
    /// 'z': all spins up.
    Z,
    /// 'x': all spins |+⟩.
    X,
    /// 'zx': spin up at edge (x0, x0+1), |+⟩ elsewhere.
    Zx,
    /// 'e': entangled spins, (|0…0⟩ + |1…1⟩)/√2.
    E,
}

/// Full initial-state label: kind, optional 'i' prefix (uniform position), x0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitialStateSpec {
    pub kind: InitialStateKind,
    /// The 'i' prefix: spread the particle uniformly over all nodes.
    pub uniform_position: bool,
    pub x0: usize,
}

impl InitialStateSpec {
    pub fn new(kind: InitialStateKind, x0: usize) -> Self {
        InitialStateSpec {
            kind,
            uniform_position: false,
            x0,
        }
    }

    pub fn uniform(mut self) -> Self {
        self.uniform_position = true;
        self
    }

    fn validate(&self, basis: &BasisIndex) -> Result<()> {
        let lat = basis.lattice();
        if self.x0 >= lat.num_nodes() {
            return Err(Error::InvalidArgument(format!(
                "x0={} outside lattice of {} nodes",
                self.x0,
                lat.num_nodes()
            )));
        }
        if self.kind == InitialStateKind::Zx && self.x0 >= lat.num_edges() {
            return Err(Error::InvalidArgument(format!(
                "'zx' needs edge (x0, x0+1) to exist; x0={} but |E|={}",
                self.x0,
                lat.num_edges()
            )));
        }
        Ok(())
    }
}

/// Build one of the named initial states. The walker color is |0⟩ in every
/// kind; with `uniform_position` the same color/spin pattern is spread equally
/// over all nodes.
pub fn build_initial_state(spec: &InitialStateSpec, basis: BasisIndex) -> Result<StateVector> {
    spec.validate(&basis)?;
    let spin_configs = basis.spin_configs();
    let mut state = StateVector::zeros(basis);

    // Spin pattern amplitudes, indexed by spin word.
    let fill = |state: &mut StateVector, x: usize, scale: f64| match spec.kind {
        InitialStateKind::Z => {
            state.amps[basis.index_unchecked(x, 0, 0)] = Complex64::new(scale, 0.0);
        }
        InitialStateKind::X => {
            let a = Complex64::new(scale / (spin_configs as f64).sqrt(), 0.0);
            for s in 0..spin_configs {
                state.amps[basis.index_unchecked(x, 0, s)] = a;
            }
        }
        InitialStateKind::Zx => {
            let a = Complex64::new(scale / ((spin_configs / 2) as f64).sqrt(), 0.0);
            let e_bit = 1usize << spec.x0;
            for s in 0..spin_configs {
                if s & e_bit == 0 {
                    state.amps[basis.index_unchecked(x, 0, s)] = a;
                }
            }
        }
        InitialStateKind::E => {
            // All-up plus all-down superposition. The per-edge marginals are
            // maximally mixed, so the mean spin vanishes at t = 0.
            let a = Complex64::new(scale / 2f64.sqrt(), 0.0);
            state.amps[basis.index_unchecked(x, 0, 0)] = a;
            state.amps[basis.index_unchecked(x, 0, spin_configs - 1)] = a;
        }
    };

    if spec.uniform_position {
        let scale = 1.0 / (basis.lattice().num_nodes() as f64).sqrt();
        for x in 0..basis.lattice().num_nodes() {
            fill(&mut state, x, scale);
        }
    } else {
        fill(&mut state, spec.x0, 1.0);
    }
    Ok(state)
}

/// Grover coin G(d) = (2/d)·J_d − I_d.
pub fn grover_coin(d: usize) -> Result<DMatrix<Complex64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("coin degree must be ≥ 1".into()));
    }
    let off = 2.0 / d as f64;
    Ok(DMatrix::from_fn(d, d, |j, k| {
        Complex64::new(if j == k { off - 1.0 } else { off }, 0.0)
    }))
}

/// Fourier coin F\[j,k\] = e^{2πi jk/d}/√d.
pub fn fourier_coin(d: usize) -> Result<DMatrix<Complex64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("coin degree must be ≥ 1".into()));
    }
    let norm = 1.0 / (d as f64).sqrt();
    Ok(DMatrix::from_fn(d, d, |j, k| {
        let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64;
        Complex64::from_polar(norm, phase)
    }))
}
