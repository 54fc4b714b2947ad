//! Diagnostics of the walk state: densities, spin expectations, von Neumann
//! entropies, two-spin entanglement, and the localization classifier.
//!
//! Every entropy is evaluated on the smaller Schmidt side of its bipartition
//! through the Gram matrix of the reshaped amplitude array. For a pure global
//! state both sides share the nonzero spectrum, so S_spins comes from the
//! 2|V|-dimensional particle side instead of the 2^|E| spin matrix, and a
//! spin-set entropy costs O(dim·m) with m the smaller side. Base-2 logarithms
//! throughout.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::StateVector;

/// Eigenvalues below this are treated as exact zeros inside x·log x.
const EIGENVALUE_FLOOR: f64 = 1e-12;

/// Expectation of the three Pauli components of one edge spin; |0⟩ has sz = +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinExpectation {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl SpinExpectation {
    pub fn norm(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }
}

/// Which label set a partition entropy traces down to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionLabel {
    Positions,
    Colors,
    Spins,
}

/// p(x) = Σ_{c,s} |ψ_{xcs}|².
pub fn particle_density(state: &StateVector) -> Vec<f64> {
    let basis = state.basis();
    let block = 2 * basis.spin_configs();
    state
        .amplitudes()
        .chunks_exact(block)
        .map(|node| node.iter().map(|a| a.norm_sqr()).sum())
        .collect()
}

/// Spin expectation of every edge in one pass.
pub fn all_spin_expectations(state: &StateVector) -> Vec<SpinExpectation> {
    let basis = state.basis();
    let num_edges = basis.lattice().num_edges();
    let spin_configs = basis.spin_configs();
    let amps = state.amplitudes();
    let mut out = Vec::with_capacity(num_edges);
    for e in 0..num_edges {
        let bit = 1usize << e;
        let mut rho01 = Complex64::ZERO;
        let mut up = 0.0;
        let mut down = 0.0;
        for blk in amps.chunks_exact(spin_configs) {
            let hi_count = spin_configs >> (e + 1);
            for hi in 0..hi_count {
                let base = hi << (e + 1);
                for lo in 0..bit {
                    let s0 = base | lo;
                    let a0 = blk[s0];
                    let a1 = blk[s0 | bit];
                    rho01 += a0 * a1.conj();
                    up += a0.norm_sqr();
                    down += a1.norm_sqr();
                }
            }
        }
        out.push(SpinExpectation {
            sx: 2.0 * rho01.re,
            sy: -2.0 * rho01.im,
            sz: up - down,
        });
    }
    out
}

/// Spin expectation at a single edge.
pub fn spin_expectation(state: &StateVector, edge: usize) -> Result<SpinExpectation> {
    let num_edges = state.basis().lattice().num_edges();
    if edge >= num_edges {
        return Err(Error::IndexOutOfRange(format!(
            "edge {edge} ≥ |E| = {num_edges}"
        )));
    }
    Ok(all_spin_expectations(state)[edge])
}

/// Average of [`spin_expectation`] over all edges: the mean magnetization s̄(t).
pub fn mean_spin(state: &StateVector) -> SpinExpectation {
    let per_edge = all_spin_expectations(state);
    let n = per_edge.len() as f64;
    let mut acc = SpinExpectation {
        sx: 0.0,
        sy: 0.0,
        sz: 0.0,
    };
    for s in &per_edge {
        acc.sx += s.sx;
        acc.sy += s.sy;
        acc.sz += s.sz;
    }
    SpinExpectation {
        sx: acc.sx / n,
        sy: acc.sy / n,
        sz: acc.sz / n,
    }
}

fn entropy_from_eigenvalues(eigs: &[f64]) -> f64 {
    let mut s = 0.0;
    for &w in eigs {
        if w > EIGENVALUE_FLOOR {
            s -= w * w.log2();
        }
    }
    s
}

/// G[i,j] = row_i · conj(row_j) over contiguous rows of length `row_len`.
fn gram_from_rows(rows: &[Complex64], num_rows: usize, row_len: usize) -> DMatrix<Complex64> {
    let mut g = DMatrix::zeros(num_rows, num_rows);
    for i in 0..num_rows {
        let ri = &rows[i * row_len..(i + 1) * row_len];
        for j in 0..=i {
            let rj = &rows[j * row_len..(j + 1) * row_len];
            let mut acc = Complex64::ZERO;
            for (a, b) in ri.iter().zip(rj) {
                acc += a * b.conj();
            }
            g[(i, j)] = acc;
            if i != j {
                g[(j, i)] = acc.conj();
            }
        }
    }
    g
}

fn gram_eigenvalues(g: DMatrix<Complex64>) -> Vec<f64> {
    g.symmetric_eigen().eigenvalues.iter().copied().collect()
}

/// S_l = −Tr ρ(l) log₂ ρ(l) for l ∈ {positions, colors, spins}. The spins
/// entropy is computed on the complement (x, c) side, which carries the same
/// spectrum for a pure global state.
pub fn partition_entropy(state: &StateVector, label: PartitionLabel) -> f64 {
    let basis = state.basis();
    let spin_configs = basis.spin_configs();
    let num_nodes = basis.lattice().num_nodes();
    let amps = state.amplitudes();
    let eigs = match label {
        PartitionLabel::Positions => {
            gram_eigenvalues(gram_from_rows(amps, num_nodes, 2 * spin_configs))
        }
        PartitionLabel::Spins => {
            gram_eigenvalues(gram_from_rows(amps, 2 * num_nodes, spin_configs))
        }
        PartitionLabel::Colors => {
            let mut g: DMatrix<Complex64> = DMatrix::zeros(2, 2);
            for x in 0..num_nodes {
                let b0 = &amps[2 * x * spin_configs..(2 * x + 1) * spin_configs];
                let b1 = &amps[(2 * x + 1) * spin_configs..(2 * x + 2) * spin_configs];
                for (a0, a1) in b0.iter().zip(b1) {
                    g[(0, 0)] += a0 * a0.conj();
                    g[(1, 1)] += a1 * a1.conj();
                    g[(0, 1)] += a0 * a1.conj();
                }
            }
            g[(1, 0)] = g[(0, 1)].conj();
            gram_eigenvalues(g)
        }
    };
    entropy_from_eigenvalues(&eigs)
}

fn validate_edge_set(state: &StateVector, edges: &[usize]) -> Result<()> {
    let num_edges = state.basis().lattice().num_edges();
    if edges.is_empty() {
        return Err(Error::InvalidArgument("spin set must not be empty".into()));
    }
    let mut seen = vec![false; num_edges];
    for &e in edges {
        if e >= num_edges {
            return Err(Error::IndexOutOfRange(format!(
                "edge {e} ≥ |E| = {num_edges}"
            )));
        }
        if seen[e] {
            return Err(Error::InvalidArgument(format!("edge {e} listed twice")));
        }
        seen[e] = true;
    }
    Ok(())
}

/// Reshape ψ into rows indexed by one side of the (A spins | rest)
/// bipartition. Returns (rows, num_rows, row_len).
fn reshape_spin_set(
    state: &StateVector,
    edges: &[usize],
    rows_are_set_side: bool,
) -> (Vec<Complex64>, usize, usize) {
    let basis = state.basis();
    let num_edges = basis.lattice().num_edges();
    let spin_configs = basis.spin_configs();
    let dim = basis.dim();
    let set_dim = 1usize << edges.len();
    let rest_dim = dim / set_dim;

    // bit-gather tables: spin word -> (A word, rest-spin word)
    let mut in_set = vec![usize::MAX; num_edges];
    for (i, &e) in edges.iter().enumerate() {
        in_set[e] = i;
    }
    let rest_edges: Vec<usize> = (0..num_edges)
        .filter(|e| in_set[*e] == usize::MAX)
        .collect();
    let mut a_of = vec![0usize; spin_configs];
    let mut r_of = vec![0usize; spin_configs];
    for s in 0..spin_configs {
        let mut a = 0;
        for (i, &e) in edges.iter().enumerate() {
            a |= ((s >> e) & 1) << i;
        }
        let mut r = 0;
        for (i, &e) in rest_edges.iter().enumerate() {
            r |= ((s >> e) & 1) << i;
        }
        a_of[s] = a;
        r_of[s] = r;
    }

    let rest_spin = spin_configs >> edges.len();
    let amps = state.amplitudes();
    let (num_rows, row_len) = if rows_are_set_side {
        (set_dim, rest_dim)
    } else {
        (rest_dim, set_dim)
    };
    let mut rows = vec![Complex64::ZERO; dim];
    for (i, &amp) in amps.iter().enumerate() {
        let s = i & (spin_configs - 1);
        let xc = i >> num_edges;
        let a = a_of[s];
        let b = xc * rest_spin + r_of[s];
        let pos = if rows_are_set_side {
            a * row_len + b
        } else {
            b * row_len + a
        };
        rows[pos] = amp;
    }
    (rows, num_rows, row_len)
}

fn spin_set_entropy_on_side(state: &StateVector, edges: &[usize], set_side: bool) -> f64 {
    let (rows, num_rows, row_len) = reshape_spin_set(state, edges, set_side);
    entropy_from_eigenvalues(&gram_eigenvalues(gram_from_rows(&rows, num_rows, row_len)))
}

/// S_A = −Tr ρ_A log₂ ρ_A for a set A of edge spins.
pub fn spin_set_entropy(state: &StateVector, edges: &[usize]) -> Result<f64> {
    validate_edge_set(state, edges)?;
    let set_dim = 1usize << edges.len();
    let rest_dim = state.basis().dim() / set_dim;
    Ok(spin_set_entropy_on_side(state, edges, set_dim <= rest_dim))
}

/// A reduced density matrix over a named subsystem.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    matrix: DMatrix<Complex64>,
}

impl ReducedDensity {
    /// ρ over positions, |V|×|V|.
    pub fn of_positions(state: &StateVector) -> Self {
        let basis = state.basis();
        let m = gram_from_rows(
            state.amplitudes(),
            basis.lattice().num_nodes(),
            2 * basis.spin_configs(),
        );
        ReducedDensity { matrix: m }
    }

    /// ρ over the color qubit, 2×2.
    pub fn of_colors(state: &StateVector) -> Self {
        let basis = state.basis();
        let spin_configs = basis.spin_configs();
        let amps = state.amplitudes();
        let mut g: DMatrix<Complex64> = DMatrix::zeros(2, 2);
        for x in 0..basis.lattice().num_nodes() {
            let b0 = &amps[2 * x * spin_configs..(2 * x + 1) * spin_configs];
            let b1 = &amps[(2 * x + 1) * spin_configs..(2 * x + 2) * spin_configs];
            for (a0, a1) in b0.iter().zip(b1) {
                g[(0, 0)] += a0 * a0.conj();
                g[(1, 1)] += a1 * a1.conj();
                g[(0, 1)] += a0 * a1.conj();
            }
        }
        g[(1, 0)] = g[(0, 1)].conj();
        ReducedDensity { matrix: g }
    }

    /// ρ_A over a set of edge spins, 2^|A|-dimensional with bit i of the row
    /// index carrying edge `edges[i]`.
    pub fn of_spin_set(state: &StateVector, edges: &[usize]) -> Result<Self> {
        validate_edge_set(state, edges)?;
        let basis = state.basis();
        let set_dim = 1usize << edges.len();
        if set_dim > crate::evolution::DEFAULT_DENSE_CAP {
            return Err(Error::DimensionCap {
                dim: set_dim,
                cap: crate::evolution::DEFAULT_DENSE_CAP,
            });
        }
        let spin_configs = basis.spin_configs();
        let mut rho = DMatrix::zeros(set_dim, set_dim);
        let mask: usize = edges.iter().map(|e| 1usize << e).sum();
        let amps = state.amplitudes();
        let spread = |a: usize| -> usize {
            let mut s = 0;
            for (i, &e) in edges.iter().enumerate() {
                s |= ((a >> i) & 1) << e;
            }
            s
        };
        let spread_tbl: Vec<usize> = (0..set_dim).map(spread).collect();
        for xc in 0..2 * basis.lattice().num_nodes() {
            let blk = &amps[xc * spin_configs..(xc + 1) * spin_configs];
            for base in 0..spin_configs {
                if base & mask != 0 {
                    continue;
                }
                for ai in 0..set_dim {
                    let vi = blk[base | spread_tbl[ai]];
                    if vi == Complex64::ZERO {
                        continue;
                    }
                    for aj in 0..set_dim {
                        rho[(ai, aj)] += vi * blk[base | spread_tbl[aj]].conj();
                    }
                }
            }
        }
        Ok(ReducedDensity { matrix: rho })
    }

    /// Two-spin reduced matrix with row index 2·s_{e1} + s_{e2}.
    pub fn of_spin_pair(state: &StateVector, e1: usize, e2: usize) -> Result<Self> {
        if e1 == e2 {
            return Err(Error::InvalidArgument(
                "spin pair needs two distinct edges".into(),
            ));
        }
        Self::of_spin_set(state, &[e1, e2]).map(|rd| {
            // of_spin_set puts edges[0] in bit 0; reorder to 2·s_{e1} + s_{e2}.
            let perm = [0usize, 2, 1, 3];
            let mut m = DMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    m[(perm[i], perm[j])] = rd.matrix[(i, j)];
                }
            }
            ReducedDensity { matrix: m }
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut e = gram_eigenvalues(self.matrix.clone());
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    pub fn entropy_bits(&self) -> f64 {
        entropy_from_eigenvalues(&self.eigenvalues())
    }
}

/// Wootters concurrence of the spins at edges e1, e2, in [0, 1].
pub fn concurrence(state: &StateVector, e1: usize, e2: usize) -> Result<f64> {
    let rho = ReducedDensity::of_spin_pair(state, e1, e2)?;
    concurrence_of_matrix(rho.matrix())
}

/// Concurrence from a 4×4 two-qubit density matrix in the canonical basis.
pub fn concurrence_of_matrix(rho: &DMatrix<Complex64>) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::InvalidArgument(
            "concurrence needs a 4×4 matrix".into(),
        ));
    }
    // (Y⊗Y) ρ* (Y⊗Y); the spin-flipped matrix is PSD Hermitian, so the
    // spectrum of ρρ̃ can be taken from the Hermitian √ρ̃ ρ √ρ̃.
    let yy = {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 3)] = Complex64::new(-1.0, 0.0);
        m[(1, 2)] = Complex64::ONE;
        m[(2, 1)] = Complex64::ONE;
        m[(3, 0)] = Complex64::new(-1.0, 0.0);
        m
    };
    let rho_tilde = &yy * rho.map(|z| z.conj()) * &yy;
    let eig = rho_tilde.symmetric_eigen();
    let mut sqrt_tilde = DMatrix::zeros(4, 4);
    for k in 0..4 {
        let w = eig.eigenvalues[k].max(0.0).sqrt();
        let v = eig.eigenvectors.column(k);
        for i in 0..4 {
            for j in 0..4 {
                sqrt_tilde[(i, j)] += v[i] * v[j].conj() * w;
            }
        }
    }
    let h = &sqrt_tilde * rho * &sqrt_tilde;
    let mut lams: Vec<f64> = h
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|w| w.max(0.0).sqrt())
        .collect();
    lams.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((lams[0] - lams[1] - lams[2] - lams[3]).max(0.0))
}

/// Connected spin-spin correlation ⟨σ₁·σ₂⟩ − ⟨σ₁⟩·⟨σ₂⟩ of two edge spins.
pub fn spin_correlation(state: &StateVector, e1: usize, e2: usize) -> Result<f64> {
    let rho = ReducedDensity::of_spin_pair(state, e1, e2)?;
    let m = rho.matrix();
    // one-spin Bloch vectors from the pair matrix
    let tr = |f: &dyn Fn(usize, usize) -> Complex64| -> f64 {
        let mut acc = Complex64::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                acc += f(i, j) * m[(j, i)];
            }
        }
        acc.re
    };
    let pauli = |p: usize, a: usize, b: usize| -> Complex64 {
        match p {
            0 => {
                if a == b {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            }
            1 => {
                if a != b {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            }
            2 => match (a, b) {
                (0, 1) => Complex64::new(0.0, -1.0),
                (1, 0) => Complex64::new(0.0, 1.0),
                _ => Complex64::ZERO,
            },
            _ => {
                if a == b {
                    Complex64::new(if a == 0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    Complex64::ZERO
                }
            }
        }
    };
    let mut dot = 0.0;
    let mut s1 = [0.0; 3];
    let mut s2 = [0.0; 3];
    for p in 1..=3 {
        dot += tr(&|i, j| pauli(p, i >> 1, j >> 1) * pauli(p, i & 1, j & 1));
        s1[p - 1] = tr(&|i, j| pauli(p, i >> 1, j >> 1) * pauli(0, i & 1, j & 1));
        s2[p - 1] = tr(&|i, j| pauli(0, i >> 1, j >> 1) * pauli(p, i & 1, j & 1));
    }
    Ok(dot - (s1[0] * s2[0] + s1[1] * s2[1] + s1[2] * s2[2]))
}

/// Kolmogorov–Smirnov distance of a (time-averaged) position distribution to
/// the uniform one: max_x |F_x − (x+1)/|V||.
pub fn ks_distance(p_avg: &[f64]) -> Result<f64> {
    let total: f64 = p_avg.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidArgument(format!(
            "density must sum to 1 (got {total:.8})"
        )));
    }
    let n = p_avg.len() as f64;
    let mut cum = 0.0;
    let mut worst = 0.0f64;
    for (x, &p) in p_avg.iter().enumerate() {
        cum += p;
        worst = worst.max((cum - (x as f64 + 1.0) / n).abs());
    }
    Ok(worst)
}

/// Don Page's average entanglement entropy of an |A|-spin subsystem of a
/// random pure state: S_R = log₂ D_A − D_A²/(2 D_V ln 2), D_V = 2|V|·2^|V|.
pub fn page_entropy(a_size: usize, num_nodes: usize) -> f64 {
    let d_a = (a_size as f64).exp2();
    let d_v = 2.0 * num_nodes as f64 * (num_nodes as f64).exp2();
    a_size as f64 - d_a * d_a / (2.0 * d_v * std::f64::consts::LN_2)
}

/// Arithmetic mean of a stack of per-step records.
pub fn average_rows(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("empty averaging window".into()));
    }
    let len = rows[0].len();
    let mut acc = vec![0.0; len];
    for row in rows {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    let n = rows.len() as f64;
    for a in &mut acc {
        *a /= n;
    }
    Ok(acc)
}
