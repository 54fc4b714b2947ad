//! Closed-form oracles: the J = 0 walk diagonalized in Fourier space, and the
//! exactly solvable two-node ring.
//!
//! At J = 0 the edge spins are spectators, so the particle sector evolves
//! under the 2×2 momentum blocks W(k, θ) = M(k)R(θ) with
//! M(k) = [[0, e^{−ik}], [e^{ik}, 0]] at the |V| discrete momenta. These
//! routes share no code with the evolution sweeps and pin them down to
//! rounding error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{InitialStateSpec, Lattice};

type Mat2 = [[Complex64; 2]; 2];

fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// The momentum-space walk block W(k, θ).
pub fn walk_block(k: f64, theta: f64) -> Mat2 {
    let (ct, st) = (theta.cos(), theta.sin());
    let em = Complex64::from_polar(1.0, -k);
    let ep = Complex64::from_polar(1.0, k);
    [[em * st, em * ct], [ep * ct, -ep * st]]
}

/// Particle density after `t` free (J = 0) steps on a ring, resummed from the
/// Fourier diagonalization. The initial particle state is the given position
/// pattern with color |0⟩; the spin pattern factors out at J = 0.
pub fn free_walk_density(
    theta: f64,
    num_nodes: usize,
    initial: &InitialStateSpec,
    t: usize,
) -> Result<Vec<f64>> {
    let lattice = Lattice::new(num_nodes, crate::hilbert::Boundary::Periodic)?;
    if initial.x0 >= lattice.num_nodes() {
        return Err(Error::InvalidArgument(format!(
            "x0={} outside the lattice",
            initial.x0
        )));
    }
    let n = num_nodes as f64;

    // position wavefunction (color 0 everywhere initially)
    let psi0: Vec<Complex64> = (0..num_nodes)
        .map(|x| {
            if initial.uniform_position {
                Complex64::new(1.0 / n.sqrt(), 0.0)
            } else if x == initial.x0 {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
        .collect();

    // φ_c(k) = (1/√|V|) Σ_x e^{ikx} ψ_c(x), evolved by W(k)^t per momentum
    let mut density = vec![0.0; num_nodes];
    let mut psi_t = vec![[Complex64::ZERO; 2]; num_nodes];
    for m in 0..num_nodes {
        let k = 2.0 * std::f64::consts::PI * m as f64 / n;
        let mut phi = [Complex64::ZERO, Complex64::ZERO];
        for (x, amp) in psi0.iter().enumerate() {
            phi[0] += Complex64::from_polar(1.0, k * x as f64) * amp / n.sqrt();
        }
        let w = walk_block(k, theta);
        let mut wt = [
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, Complex64::ONE],
        ];
        for _ in 0..t {
            wt = mul2(&w, &wt);
        }
        let evolved = [
            wt[0][0] * phi[0] + wt[0][1] * phi[1],
            wt[1][0] * phi[0] + wt[1][1] * phi[1],
        ];
        // back-transform ψ_c(x) = (1/√|V|) Σ_k e^{−ikx} φ_c(k)
        for (x, slot) in psi_t.iter_mut().enumerate() {
            let phase = Complex64::from_polar(1.0 / n.sqrt(), -k * x as f64);
            slot[0] += phase * evolved[0];
            slot[1] += phase * evolved[1];
        }
    }
    for (x, slot) in psi_t.iter().enumerate() {
        density[x] = slot[0].norm_sqr() + slot[1].norm_sqr();
    }
    Ok(density)
}

/// The 16 eigenvalues of the two-node step operator: λ_± = ±e^{iJ/4}, each
/// fourfold, and four λ_n, each twofold, built from the closed-form radicals.
pub fn two_node_spectrum(theta: f64, j: f64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(16);
    let lam_plus = Complex64::from_polar(1.0, j / 4.0);
    for _ in 0..4 {
        out.push(lam_plus);
    }
    for _ in 0..4 {
        out.push(-lam_plus);
    }
    let u = ((j / 2.0).sin() * theta.sin()).powi(2);
    let root = (4.0 - u).sqrt() * ((j / 2.0).sin() * theta.sin()).abs();
    let pref = Complex64::from_polar(1.0 / 2f64.sqrt(), -j / 4.0);
    for inner in [1.0, -1.0] {
        let z = (Complex64::new(2.0 - u, inner * root)).sqrt();
        for outer in [1.0, -1.0] {
            let lam = pref * z * outer;
            out.push(lam);
            out.push(lam);
        }
    }
    out
}

/// Closed-form connected spin correlation after one step from 'x' on the
/// two-node ring: C₁(θ, J) = sin²(2θ)·sin²(J)/16.
pub fn two_node_correlation_t1(theta: f64, j: f64) -> f64 {
    (2.0 * theta).sin().powi(2) / 16.0 * j.sin().powi(2)
}

/// Greedy multiset distance between two spectra: the largest gap after
/// matching each left value with its nearest unused right value.
pub fn spectrum_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for za in a {
        let mut best = f64::INFINITY;
        let mut best_i = 0;
        for (i, zb) in b.iter().enumerate() {
            if !used[i] {
                let d = (za - zb).norm();
                if d < best {
                    best = d;
                    best_i = i;
                }
            }
        }
        used[best_i] = true;
        worst = worst.max(best);
    }
    worst
}
