//! One-step evolution U(J, θ) = V(J)·M·R(θ) applied in place.
//!
//! The coin R(θ) rotates the color pair at each node, the shift M is a
//! permutation of (x, c) blocks, and the interaction V(J) applies a 4×4
//! unitary to every edge quadruple
//! (ψ_{x,0,s_e=0}, ψ_{x,0,s_e=1}, ψ_{x+1,1,s_e=0}, ψ_{x+1,1,s_e=1}).
//! Nothing larger than a 4×4 is ever materialized, so one step costs
//! O(|E|·dim) regardless of lattice size.
//!
//! [`step_edge_basis`] is an independent stepper built from the three-term
//! edge recurrence ψ_{e_x}(t+1) = A ψ_{e_{x−1}} + B ψ_{e_x} + C ψ_{e_{x+1}};
//! it shares nothing with [`StepOperator::step`] beyond the index layout and
//! serves as a cross-check oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisIndex, Boundary, Lattice, StateVector};

/// Default dimension cap for [`materialize_operator`].
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Per-node coin angles θ(x), radians.
#[derive(Debug, Clone)]
pub struct CoinField {
    theta: Vec<f64>,
    uniform: Option<f64>,
}

impl CoinField {
    /// The same angle at every node.
    pub fn uniform(lattice: &Lattice, theta: f64) -> Self {
        CoinField {
            theta: vec![theta; lattice.num_nodes()],
            uniform: Some(theta),
        }
    }

    /// Two-angle profile for topology runs: θ₋ for x < interface, θ₊ for
    /// x ≥ interface. On a ring this creates a second interface at x = 0.
    pub fn piecewise(
        lattice: &Lattice,
        theta_minus: f64,
        theta_plus: f64,
        interface: usize,
    ) -> Self {
        let theta: Vec<f64> = (0..lattice.num_nodes())
            .map(|x| {
                if x < interface {
                    theta_minus
                } else {
                    theta_plus
                }
            })
            .collect();
        CoinField::from_profile(theta)
    }

    pub fn from_profile(theta: Vec<f64>) -> Self {
        let uniform = if theta.windows(2).all(|w| w[0] == w[1]) {
            theta.first().copied()
        } else {
            None
        };
        CoinField { theta, uniform }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// `Some(θ)` when every node carries the same angle.
    pub fn uniform_angle(&self) -> Option<f64> {
        self.uniform
    }
}

/// Color-spin coupling constant J with the cached entries of the edge
/// unitary V_xy(J) = e^{−iJ/4}·diag-plus-swap form.
#[derive(Debug, Clone, Copy)]
pub struct Coupling {
    j: f64,
    diag: Complex64,  // e^{−iJ/4}·e^{iJ/2}
    mix_c: Complex64, // e^{−iJ/4}·cos(J/2)
    mix_s: Complex64, // e^{−iJ/4}·i·sin(J/2)
}

impl Coupling {
    pub fn new(j: f64) -> Self {
        let pref = Complex64::from_polar(1.0, -j / 4.0);
        Coupling {
            j,
            diag: pref * Complex64::from_polar(1.0, j / 2.0),
            mix_c: pref * (j / 2.0).cos(),
            mix_s: pref * Complex64::new(0.0, (j / 2.0).sin()),
        }
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    /// The 4×4 edge matrix in the quadruple basis.
    pub fn edge_matrix(&self) -> DMatrix<Complex64> {
        let z = Complex64::ZERO;
        DMatrix::from_row_slice(
            4,
            4,
            &[
                self.diag, z, z, z, z, self.mix_c, self.mix_s, z, z, self.mix_s, self.mix_c, z, z,
                z, z, self.diag,
            ],
        )
    }
}

/// One-step operator U(J, θ) over a fixed lattice.
#[derive(Debug, Clone)]
pub struct StepOperator {
    lattice: Lattice,
    coin: CoinField,
    coupling: Coupling,
    bounce_phase: Complex64,
}

impl StepOperator {
    pub fn new(lattice: Lattice, coin: CoinField, coupling: Coupling) -> Result<Self> {
        if coin.theta().len() != lattice.num_nodes() {
            return Err(Error::InvalidArgument(format!(
                "coin field has {} angles for {} nodes",
                coin.theta().len(),
                lattice.num_nodes()
            )));
        }
        Ok(StepOperator {
            lattice,
            coin,
            coupling,
            bounce_phase: Complex64::ONE,
        })
    }

    pub fn uniform(lattice: Lattice, theta: f64, j: f64) -> Self {
        let coin = CoinField::uniform(&lattice, theta);
        StepOperator::new(lattice, coin, Coupling::new(j))
            .expect("uniform coin fits by construction")
    }

    /// Phase picked up by the walker on a reflective bounce. Any unit phase
    /// keeps the step unitary; +1 unless set.
    pub fn with_bounce_phase(mut self, phase: Complex64) -> Self {
        self.bounce_phase = phase;
        self
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coin(&self) -> &CoinField {
        &self.coin
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    /// Advance the state by one step: coin, then shift, then interaction.
    pub fn step(&self, state: &mut StateVector) {
        assert_eq!(
            state.basis().lattice(),
            &self.lattice,
            "state and operator live on different lattices"
        );
        apply_coin(state, &self.coin);
        apply_shift_with_phase(state, self.bounce_phase);
        apply_interaction(state, &self.coupling);
    }
}

/// Return the two (x, c) blocks `b1 < b2` of the amplitude array as disjoint
/// mutable slices of length 2^|E|.
fn two_blocks_mut(
    amps: &mut [Complex64],
    block_len: usize,
    b1: usize,
    b2: usize,
) -> (&mut [Complex64], &mut [Complex64]) {
    debug_assert!(b1 < b2);
    let (head, tail) = amps.split_at_mut(b2 * block_len);
    (
        &mut head[b1 * block_len..(b1 + 1) * block_len],
        &mut tail[..block_len],
    )
}

/// Rotate every on-node color pair by R(θ(x)) = [[cos, −sin], [sin, cos]].
pub fn apply_coin(state: &mut StateVector, coin: &CoinField) {
    let num_nodes = state.basis().lattice().num_nodes();
    assert_eq!(
        coin.theta().len(),
        num_nodes,
        "coin field does not match the lattice"
    );
    let block = state.basis().spin_configs();
    let amps = state.amplitudes_mut();
    for x in 0..num_nodes {
        let (cos_t, sin_t) = (coin.theta()[x].cos(), coin.theta()[x].sin());
        if cos_t == 1.0 && sin_t == 0.0 {
            continue;
        }
        let pair = &mut amps[2 * x * block..(2 * x + 2) * block];
        let (c0, c1) = pair.split_at_mut(block);
        for (a0, a1) in c0.iter_mut().zip(c1.iter_mut()) {
            let new0 = *a0 * cos_t - *a1 * sin_t;
            let new1 = *a0 * sin_t + *a1 * cos_t;
            *a0 = new0;
            *a1 = new1;
        }
    }
}

/// The motion step M: color 0 hops right flipping to 1, color 1 hops left
/// flipping to 0. On a reflective lattice the outward-moving boundary
/// amplitudes stay in place (no color flip, optional phase).
pub fn apply_shift(state: &mut StateVector) {
    apply_shift_with_phase(state, Complex64::ONE);
}

pub fn apply_shift_with_phase(state: &mut StateVector, bounce_phase: Complex64) {
    let lattice = *state.basis().lattice();
    let num_nodes = lattice.num_nodes();
    let block = state.basis().spin_configs();
    let num_blocks = 2 * num_nodes;

    // source(target block) — the shift is a permutation of (x, c) blocks.
    let source = |tb: usize| -> usize {
        let (x, c) = (tb >> 1, tb & 1);
        match lattice.boundary() {
            Boundary::Periodic => {
                if c == 1 {
                    2 * ((x + num_nodes - 1) % num_nodes) // (x,1) <- (x-1,0)
                } else {
                    2 * ((x + 1) % num_nodes) + 1 // (x,0) <- (x+1,1)
                }
            }
            Boundary::Reflective => {
                if c == 1 {
                    if x == 0 {
                        tb
                    } else {
                        2 * (x - 1)
                    }
                } else if x == num_nodes - 1 {
                    tb
                } else {
                    2 * (x + 1) + 1
                }
            }
        }
    };

    let amps = state.amplitudes_mut();
    let mut tmp = vec![Complex64::ZERO; block];
    let mut visited = vec![false; num_blocks];
    for start in 0..num_blocks {
        if visited[start] {
            continue;
        }
        if source(start) == start {
            visited[start] = true;
            // boundary bounce-in-place
            if bounce_phase != Complex64::ONE {
                for a in &mut amps[start * block..(start + 1) * block] {
                    *a *= bounce_phase;
                }
            }
            continue;
        }
        // follow the cycle target <- source
        tmp.copy_from_slice(&amps[start * block..(start + 1) * block]);
        let mut cur = start;
        loop {
            visited[cur] = true;
            let src = source(cur);
            if src == start {
                amps[cur * block..(cur + 1) * block].copy_from_slice(&tmp);
                break;
            }
            amps.copy_within(src * block..(src + 1) * block, cur * block);
            cur = src;
        }
    }
}

/// Apply V_xy(J) to every edge quadruple. Dangling colors on a reflective
/// lattice — (0, c=1) and (|V|−1, c=0) — have no edge spin and are untouched.
pub fn apply_interaction(state: &mut StateVector, coupling: &Coupling) {
    if coupling.j == 0.0 {
        return;
    }
    let lattice = *state.basis().lattice();
    let num_edges = lattice.num_edges();
    let spin_configs = state.basis().spin_configs();
    let (diag, mix_c, mix_s) = (coupling.diag, coupling.mix_c, coupling.mix_s);
    let amps = state.amplitudes_mut();
    for e in 0..num_edges {
        let (left, right) = lattice.edge_nodes(e);
        let (bl, br) = (2 * left, 2 * right + 1);
        let (lo_blk, hi_blk) = (bl.min(br), bl.max(br));
        let (first, second) = two_blocks_mut(amps, spin_configs, lo_blk, hi_blk);
        let (side0, side1) = if bl < br {
            (first, second)
        } else {
            (second, first)
        };

        let bit = 1usize << e;
        let hi_count = spin_configs >> (e + 1);
        for hi in 0..hi_count {
            let base = hi << (e + 1);
            for lo in 0..bit {
                let s0 = base | lo;
                let s1 = s0 | bit;
                let a = side0[s0];
                let b = side0[s1];
                let c = side1[s0];
                let d = side1[s1];
                side0[s0] = diag * a;
                side0[s1] = mix_c * b + mix_s * c;
                side1[s0] = mix_s * b + mix_c * c;
                side1[s1] = diag * d;
            }
        }
    }
}

/// A 4×4 block of the edge recurrence.
pub type EdgeBlock = [[Complex64; 4]; 4];

/// The three 4×4 matrices of the edge recurrence, in the quadruple slot order
/// (x,0,s_x=0), (x,0,s_x=1), (x+1,1,s_x=0), (x+1,1,s_x=1).
///
/// A couples to the left neighbor's node pair, C to the right one; the spin
/// slot stays the local bit s_x in all three.
pub fn edge_basis_matrices(theta: f64, j: f64) -> (EdgeBlock, EdgeBlock, EdgeBlock) {
    let z = Complex64::ZERO;
    let pref = Complex64::from_polar(1.0, -j / 4.0);
    let e2 = Complex64::from_polar(1.0, j / 2.0);
    let cj = Complex64::new((j / 2.0).cos(), 0.0);
    let isj = Complex64::new(0.0, (j / 2.0).sin());
    let (ct, st) = (theta.cos(), theta.sin());

    let a = [
        [z, z, z, z],
        [z, z, pref * -isj * st, z],
        [z, z, pref * -cj * st, z],
        [z, z, z, pref * -e2 * st],
    ];
    let b = [
        [z, z, pref * e2 * ct, z],
        [pref * isj * ct, z, z, pref * cj * ct],
        [pref * cj * ct, z, z, pref * isj * ct],
        [z, pref * e2 * ct, z, z],
    ];
    let c = [
        [pref * e2 * st, z, z, z],
        [z, pref * cj * st, z, z],
        [z, pref * isj * st, z, z],
        [z, z, z, z],
    ];
    (a, b, c)
}

fn matvec4(m: &[[Complex64; 4]; 4], v: [Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::ZERO; 4];
    for (row, o) in m.iter().zip(out.iter_mut()) {
        *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
    }
    out
}

/// One step through the three-term edge recurrence. Independent of
/// [`StepOperator::step`]; only uniform coins on a ring are expressible.
pub fn step_edge_basis(state: &StateVector, op: &StepOperator) -> Result<StateVector> {
    let lattice = *op.lattice();
    if lattice.boundary() != Boundary::Periodic {
        return Err(Error::Unsupported(
            "edge-basis stepper needs a periodic lattice".into(),
        ));
    }
    let theta = op
        .coin()
        .uniform_angle()
        .ok_or_else(|| Error::Unsupported("edge-basis stepper needs a uniform coin".into()))?;
    let basis = *state.basis();
    assert_eq!(
        basis.lattice(),
        &lattice,
        "state and operator live on different lattices"
    );

    let (ma, mb, mc) = edge_basis_matrices(theta, op.coupling().j());
    let num_nodes = lattice.num_nodes();
    let spin_configs = basis.spin_configs();
    let amps = state.amplitudes();
    let mut out = StateVector::zeros(basis);

    for ex in 0..num_nodes {
        let xm = (ex + num_nodes - 1) % num_nodes;
        let xp = (ex + 1) % num_nodes;
        let xpp = (ex + 2) % num_nodes;
        let bit = 1usize << ex;
        let hi_count = spin_configs >> (ex + 1);
        for hi in 0..hi_count {
            let base = hi << (ex + 1);
            for lo in 0..bit {
                let s0 = base | lo;
                let s1 = s0 | bit;
                let quad = |x: usize, c0x: usize, y: usize| -> [Complex64; 4] {
                    [
                        amps[basis.index_unchecked(x, c0x, s0)],
                        amps[basis.index_unchecked(x, c0x, s1)],
                        amps[basis.index_unchecked(y, 1, s0)],
                        amps[basis.index_unchecked(y, 1, s1)],
                    ]
                };
                let va = quad(xm, 0, ex); // left pair, local spin slot
                let vb = quad(ex, 0, xp);
                let vc = quad(xp, 0, xpp);
                let mut q = matvec4(&ma, va);
                let qb = matvec4(&mb, vb);
                let qc = matvec4(&mc, vc);
                for i in 0..4 {
                    q[i] += qb[i] + qc[i];
                }
                out.amplitudes_mut()[basis.index_unchecked(ex, 0, s0)] = q[0];
                out.amplitudes_mut()[basis.index_unchecked(ex, 0, s1)] = q[1];
                out.amplitudes_mut()[basis.index_unchecked(xp, 1, s0)] = q[2];
                out.amplitudes_mut()[basis.index_unchecked(xp, 1, s1)] = q[3];
            }
        }
    }
    Ok(out)
}

/// Apply `op` to every basis vector and collect the columns. Refused above
/// `cap` (default [`DEFAULT_DENSE_CAP`]) — dense matrices are for spectra and
/// small-system tests only.
pub fn materialize_operator(op: &StepOperator, cap: Option<usize>) -> Result<DMatrix<Complex64>> {
    let cap = cap.unwrap_or(DEFAULT_DENSE_CAP);
    let basis = BasisIndex::new(*op.lattice());
    let dim = basis.dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let mut u = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut state = StateVector::zeros(basis);
        state.amplitudes_mut()[col] = Complex64::ONE;
        op.step(&mut state);
        for (row, amp) in state.amplitudes().iter().enumerate() {
            u[(row, col)] = *amp;
        }
    }
    Ok(u)
}

/// ‖U†U − I‖_max of a dense matrix.
pub fn unitarity_error(u: &DMatrix<Complex64>) -> f64 {
    let dim = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let expect = if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            worst = worst.max((prod[(i, j)] - expect).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{build_initial_state, InitialStateKind, InitialStateSpec};
    use rand::prelude::*;
    use std::f64::consts::PI;

    fn random_state(basis: BasisIndex, rng: &mut StdRng) -> StateVector {
        let mut st = StateVector::zeros(basis);
        for a in st.amplitudes_mut() {
            *a = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        st.normalize();
        st
    }

    fn basis(num_nodes: usize, boundary: Boundary) -> BasisIndex {
        BasisIndex::new(Lattice::new(num_nodes, boundary).unwrap())
    }

    #[test]
    fn coin_identity_at_zero_angle() {
        let b = basis(3, Boundary::Periodic);
        let mut rng = StdRng::seed_from_u64(1);
        let st = random_state(b, &mut rng);
        let mut moved = st.clone();
        apply_coin(&mut moved, &CoinField::uniform(b.lattice(), 0.0));
        assert_eq!(moved.max_deviation(&st), 0.0);
    }

    #[test]
    fn coin_at_half_pi_moves_color() {
        let b = basis(3, Boundary::Periodic);
        let mut st = StateVector::zeros(b);
        let i = b.encode(1, 0, 5).unwrap();
        st.amplitudes_mut()[i] = Complex64::ONE;
        apply_coin(&mut st, &CoinField::uniform(b.lattice(), PI / 2.0));
        let j = b.encode(1, 1, 5).unwrap();
        assert!((st.amplitudes()[j] - Complex64::ONE).norm() < 1e-15);
        assert!(st.amplitudes()[i].norm() < 1e-15);
    }

    #[test]
    fn coin_preserves_norm() {
        let b = basis(4, Boundary::Reflective);
        let mut rng = StdRng::seed_from_u64(2);
        let mut st = random_state(b, &mut rng);
        apply_coin(&mut st, &CoinField::uniform(b.lattice(), 0.83));
        assert!((st.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shift_moves_color_zero_right() {
        let b = basis(2, Boundary::Periodic);
        for s in 0..4 {
            let mut st = StateVector::zeros(b);
            st.amplitudes_mut()[b.encode(0, 0, s).unwrap()] = Complex64::ONE;
            apply_shift(&mut st);
            assert!((st.amplitudes()[b.encode(1, 1, s).unwrap()] - Complex64::ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn shift_is_an_involution() {
        // M maps (x,0)→(x+1,1)→(x,0) again: enumerating the permutation for
        // |V| = 3 shows two applications restore every basis state.
        let b = basis(3, Boundary::Periodic);
        for x in 0..3 {
            for c in 0..2 {
                let mut st = StateVector::zeros(b);
                let i = b.encode(x, c, 2).unwrap();
                st.amplitudes_mut()[i] = Complex64::ONE;
                apply_shift(&mut st);
                apply_shift(&mut st);
                assert!(
                    (st.amplitudes()[i] - Complex64::ONE).norm() < 1e-15,
                    "x={x} c={c}"
                );
            }
        }
    }

    #[test]
    fn shift_is_a_permutation_both_boundaries() {
        for num_nodes in 2..=6 {
            for boundary in [Boundary::Periodic, Boundary::Reflective] {
                let b = basis(num_nodes, boundary);
                let mut hits = vec![0usize; b.dim()];
                for i in 0..b.dim() {
                    let mut st = StateVector::zeros(b);
                    st.amplitudes_mut()[i] = Complex64::ONE;
                    apply_shift(&mut st);
                    let nonzero: Vec<usize> = (0..b.dim())
                        .filter(|&k| st.amplitudes()[k].norm() > 0.5)
                        .collect();
                    assert_eq!(nonzero.len(), 1);
                    hits[nonzero[0]] += 1;
                }
                assert!(hits.iter().all(|&h| h == 1), "|V|={num_nodes} {boundary:?}");
            }
        }
    }

    #[test]
    fn reflective_boundary_bounces_in_place() {
        let b = basis(3, Boundary::Reflective);
        let mut st = StateVector::zeros(b);
        let i = b.encode(2, 0, 1).unwrap();
        st.amplitudes_mut()[i] = Complex64::ONE;
        apply_shift(&mut st);
        assert!((st.amplitudes()[i] - Complex64::ONE).norm() < 1e-15);

        let mut st = StateVector::zeros(b);
        let j = b.encode(0, 1, 1).unwrap();
        st.amplitudes_mut()[j] = Complex64::ONE;
        apply_shift_with_phase(&mut st, Complex64::new(-1.0, 0.0));
        assert!((st.amplitudes()[j] + Complex64::ONE).norm() < 1e-15);
    }

    #[test]
    fn interaction_identity_at_zero_coupling() {
        let b = basis(3, Boundary::Periodic);
        let mut rng = StdRng::seed_from_u64(3);
        let st = random_state(b, &mut rng);
        let mut moved = st.clone();
        apply_interaction(&mut moved, &Coupling::new(0.0));
        assert_eq!(moved.max_deviation(&st), 0.0);
    }

    #[test]
    fn interaction_at_pi_swaps_middle_slots() {
        // Quadruple (0,1,0,0) at J=π: the middle block is [[0,i],[i,0]], so
        // the amplitude lands on slot 3 (1-based) with factor i·e^{−iπ/4}.
        let b = basis(2, Boundary::Periodic);
        let mut st = StateVector::zeros(b);
        // edge 0 quadruple slot 1: (x=0, c=0, s_0=1), other bit 0
        st.amplitudes_mut()[b.encode(0, 0, 1).unwrap()] = Complex64::ONE;
        apply_interaction(&mut st, &Coupling::new(PI));
        let want = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -PI / 4.0);
        let got = st.amplitudes()[b.encode(1, 1, 0).unwrap()];
        assert!((got - want).norm() < 1e-14);
        assert!(st.amplitudes()[b.encode(0, 0, 1).unwrap()].norm() < 1e-14);
    }

    #[test]
    fn interaction_preserves_norm() {
        let b = basis(4, Boundary::Periodic);
        let mut rng = StdRng::seed_from_u64(4);
        for j in [0.3, 1.2, 2.9] {
            let mut st = random_state(b, &mut rng);
            apply_interaction(&mut st, &Coupling::new(j));
            assert!((st.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn edge_matrix_unitary() {
        for j in [0.0, 0.4, 1.3, PI, 2.9] {
            assert!(unitarity_error(&Coupling::new(j).edge_matrix()) < 1e-12);
        }
    }

    #[test]
    fn step_is_the_three_sweeps_in_order() {
        let b = basis(3, Boundary::Periodic);
        let op = StepOperator::uniform(*b.lattice(), 0.9, 1.4);
        let mut rng = StdRng::seed_from_u64(5);
        let st = random_state(b, &mut rng);
        let mut by_step = st.clone();
        op.step(&mut by_step);
        let mut by_sweeps = st;
        apply_coin(&mut by_sweeps, op.coin());
        apply_shift(&mut by_sweeps);
        apply_interaction(&mut by_sweeps, op.coupling());
        assert!(by_step.max_deviation(&by_sweeps) < 1e-15);
    }

    #[test]
    fn z_state_translates_at_half_pi_coin() {
        // 'z' is a proper state of U(J, π/2): a delta hopping one node left
        // per step, picking up only a phase.
        let b = basis(5, Boundary::Periodic);
        let op = StepOperator::uniform(*b.lattice(), PI / 2.0, 0.7);
        let mut st =
            build_initial_state(&InitialStateSpec::new(InitialStateKind::Z, 2), b).unwrap();
        for t in 1..=10 {
            op.step(&mut st);
            let x = (2 + 5 * 10 - t) % 5;
            let amp = st.amplitudes()[b.encode(x, 0, 0).unwrap()];
            assert!((amp.norm() - 1.0).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn ballistic_spread_at_zero_coupling() {
        // J=0, θ=π/4: the Dirac walk spreads ballistically. Doubling the
        // elapsed time before any wrap-around roughly doubles the width.
        let b = basis(13, Boundary::Periodic);
        let op = StepOperator::uniform(*b.lattice(), PI / 4.0, 0.0);
        let mut st =
            build_initial_state(&InitialStateSpec::new(InitialStateKind::Z, 6), b).unwrap();
        let sigma = |st: &StateVector| -> f64 {
            let p = crate::observables::particle_density(st);
            let mean: f64 = p.iter().enumerate().map(|(x, w)| x as f64 * w).sum();
            let var: f64 = p
                .iter()
                .enumerate()
                .map(|(x, w)| (x as f64 - mean).powi(2) * w)
                .sum();
            var.sqrt()
        };
        let mut sig = std::collections::HashMap::new();
        for t in 1..=6 {
            op.step(&mut st);
            sig.insert(t, sigma(&st));
        }
        let ratio = sig[&6] / sig[&3];
        assert!((1.7..2.1).contains(&ratio), "σ(6)/σ(3) = {ratio}");
    }

    #[test]
    fn edge_basis_oracle_matches_step() {
        let mut rng = StdRng::seed_from_u64(6);
        for num_nodes in 2..=6 {
            let b = basis(num_nodes, Boundary::Periodic);
            for _ in 0..20 {
                let theta = rng.gen::<f64>() * PI;
                let j = rng.gen::<f64>() * PI;
                let op = StepOperator::uniform(*b.lattice(), theta, j);
                let st = random_state(b, &mut rng);
                let mut direct = st.clone();
                op.step(&mut direct);
                let recur = step_edge_basis(&st, &op).unwrap();
                assert!(
                    direct.max_deviation(&recur) < 1e-12,
                    "|V|={num_nodes} θ={theta} J={j}"
                );
            }
        }
    }

    #[test]
    fn edge_basis_oracle_at_degenerate_angle() {
        let b = basis(4, Boundary::Periodic);
        let mut rng = StdRng::seed_from_u64(7);
        let op = StepOperator::uniform(*b.lattice(), 0.0, 1.1);
        let st = random_state(b, &mut rng);
        let mut direct = st.clone();
        op.step(&mut direct);
        assert!(direct.max_deviation(&step_edge_basis(&st, &op).unwrap()) < 1e-12);
    }

    #[test]
    fn edge_basis_matrices_at_zero_coupling() {
        // J=0: A and C carry only sinθ shift entries, B only cosθ entries.
        let (a, b, c) = edge_basis_matrices(0.9, 0.0);
        let (ct, st) = (0.9f64.cos(), 0.9f64.sin());
        assert!((a[2][2] + Complex64::new(st, 0.0)).norm() < 1e-15);
        assert!((a[3][3] + Complex64::new(st, 0.0)).norm() < 1e-15);
        assert!(a[1][2].norm() < 1e-15); // sin(J/2) factor gone
        assert!((c[0][0] - Complex64::new(st, 0.0)).norm() < 1e-15);
        assert!((c[1][1] - Complex64::new(st, 0.0)).norm() < 1e-15);
        assert!(c[2][1].norm() < 1e-15);
        for row in &b {
            for entry in row {
                if entry.norm() > 0.0 {
                    assert!((entry.norm() - ct.abs()).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn edge_basis_rejects_unsupported_setups() {
        let b = basis(3, Boundary::Reflective);
        let op = StepOperator::uniform(*b.lattice(), 1.0, 1.0);
        let st = StateVector::zeros(b);
        assert!(matches!(
            step_edge_basis(&st, &op),
            Err(Error::Unsupported(_))
        ));

        let bp = basis(3, Boundary::Periodic);
        let coin = CoinField::from_profile(vec![0.5, 0.6, 0.7]);
        let op = StepOperator::new(*bp.lattice(), coin, Coupling::new(1.0)).unwrap();
        let st = StateVector::zeros(bp);
        assert!(matches!(
            step_edge_basis(&st, &op),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn materialized_operator_is_unitary() {
        for (theta, j) in [(1.0, 1.0), (0.3, 2.6), (2.0, 0.2)] {
            let lat = Lattice::new(3, Boundary::Periodic).unwrap();
            let u = materialize_operator(&StepOperator::uniform(lat, theta, j), None).unwrap();
            assert!(unitarity_error(&u) < 1e-12, "θ={theta} J={j}");
        }
    }

    #[test]
    fn materialize_respects_dimension_cap() {
        let lat = Lattice::new(3, Boundary::Periodic).unwrap();
        let op = StepOperator::uniform(lat, 1.0, 1.0);
        assert!(matches!(
            materialize_operator(&op, Some(16)),
            Err(Error::DimensionCap { dim: 48, cap: 16 })
        ));
    }

    #[test]
    fn sweeps_materialize_as_permutation_rotation_and_block_unitary() {
        // shift: permutation matrix; coin: orthogonal, block-diagonal over
        // nodes; interaction: block-diagonal unitary over edge quadruples.
        let b = basis(3, Boundary::Periodic);
        let dim = b.dim();
        let mat_of = |f: &dyn Fn(&mut StateVector)| -> DMatrix<Complex64> {
            let mut m = DMatrix::zeros(dim, dim);
            for col in 0..dim {
                let mut st = StateVector::zeros(b);
                st.amplitudes_mut()[col] = Complex64::ONE;
                f(&mut st);
                for row in 0..dim {
                    m[(row, col)] = st.amplitudes()[row];
                }
            }
            m
        };
        let shift = mat_of(&|st| apply_shift(st));
        for col in 0..dim {
            let ones = (0..dim)
                .filter(|&r| (shift[(r, col)] - Complex64::ONE).norm() < 1e-15)
                .count();
            let zeros = (0..dim).filter(|&r| shift[(r, col)].norm() < 1e-15).count();
            assert_eq!((ones, zeros), (1, dim - 1));
        }

        let coin_field = CoinField::uniform(b.lattice(), 0.77);
        let coin = mat_of(&|st| apply_coin(st, &coin_field));
        assert!(unitarity_error(&coin) < 1e-12);
        assert!(coin.iter().all(|z| z.im == 0.0));
        for row in 0..dim {
            for col in 0..dim {
                let (x1, _, s1) = b.decode(row).unwrap();
                let (x2, _, s2) = b.decode(col).unwrap();
                if (x1 != x2 || s1 != s2) && coin[(row, col)].norm() > 0.0 {
                    panic!("coin couples across nodes or spins");
                }
            }
        }

        let coupling = Coupling::new(1.9);
        let inter = mat_of(&|st| apply_interaction(st, &coupling));
        assert!(unitarity_error(&inter) < 1e-12);
        // block structure: an entry may only couple basis states inside one
        // edge quadruple — same rest-of-spin word, and the (x, c) slots and
        // flipped bit both belonging to that edge
        for row in 0..dim {
            for col in 0..dim {
                if inter[(row, col)].norm() < 1e-15 || row == col {
                    continue;
                }
                let (x1, c1, s1) = b.decode(row).unwrap();
                let (x2, c2, s2) = b.decode(col).unwrap();
                let edge_of = |x: usize, c: usize| if c == 0 { x } else { (x + 2) % 3 };
                assert_eq!(edge_of(x1, c1), edge_of(x2, c2), "cross-edge coupling");
                let bit = 1usize << edge_of(x1, c1);
                assert_eq!(s1 & !bit, s2 & !bit, "spectator spin flipped");
            }
        }

        let op = StepOperator::new(*b.lattice(), coin_field, coupling).unwrap();
        let u = materialize_operator(&op, None).unwrap();
        let composed = &inter * &shift * &coin;
        assert!((u - composed).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn norm_drift_stays_tiny_over_many_steps() {
        let b = basis(7, Boundary::Periodic);
        let op = StepOperator::uniform(*b.lattice(), 1.1, 0.9);
        let mut rng = StdRng::seed_from_u64(8);
        let mut st = random_state(b, &mut rng);
        for _ in 0..2000 {
            op.step(&mut st);
        }
        assert!((st.norm() - 1.0).abs() < 1e-10);
    }
}
