//! Continuum-limit machinery: free-walk bands, group velocity, Dirac
//! coefficient fields, and the mean-field Landau–Lifshitz integrators.
//!
//! The quasienergy bands satisfy cos E(k, θ) = −sin k sin θ; around a
//! reference momentum p = k − π/2 the effective Hamiltonian is a Dirac form
//! with mass coefficient d₀ and kinetic coefficient d₁. The spin density
//! obeys ṡ = −(J/2|V|)·s × d̂ at lowest order, with an O(J³) damping torque
//! and O(J²) gradient torques at the next orders. All integrators are
//! classical RK4; the walk step sets the unit of time and the damping
//! coefficients carry one explicit factor of it.

use crate::error::{Error, Result};

/// Walk step Δt entering the damping coefficients (one step of U).
const WALK_STEP: f64 = 1.0;

pub type Vec3 = [f64; 3];

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn axpy(y: Vec3, a: f64, x: Vec3) -> Vec3 {
    [y[0] + a * x[0], y[1] + a * x[1], y[2] + a * x[2]]
}

fn scale(a: f64, x: Vec3) -> Vec3 {
    [a * x[0], a * x[1], a * x[2]]
}

pub fn norm(x: Vec3) -> f64 {
    dot(x, x).sqrt()
}

/// Quasienergy pair ±E at momentum k and the unit vector d̂(k, θ), undefined
/// where the gap closes (sin E = 0).
#[derive(Debug, Clone, Copy)]
pub struct Quasienergy {
    pub e_plus: f64,
    pub e_minus: f64,
    pub d_hat: Option<Vec3>,
}

/// Solve cos E = −sin k sin θ with E ∈ [0, π].
pub fn quasienergy(k: f64, theta: f64) -> Quasienergy {
    let cos_e = (-k.sin() * theta.sin()).clamp(-1.0, 1.0);
    let e = cos_e.acos();
    let sin_e = e.sin();
    let d_hat = if sin_e.abs() < 1e-12 {
        None
    } else {
        Some([
            k.cos() * theta.cos() / sin_e,
            k.sin() * theta.cos() / sin_e,
            k.cos() * theta.sin() / sin_e,
        ])
    };
    Quasienergy {
        e_plus: e,
        e_minus: -e,
        d_hat,
    }
}

/// Group velocity v_g(p, θ) = sin p sin θ / √(1 − cos²p sin²θ) of the band at
/// shifted wavenumber p = k − π/2. Errors at the cone tip where the
/// denominator vanishes.
pub fn group_velocity(p: f64, theta: f64) -> Result<f64> {
    let denom_sq = 1.0 - (p.cos() * theta.sin()).powi(2);
    if denom_sq <= 1e-14 {
        return Err(Error::InvalidArgument(format!(
            "group velocity singular at (p={p}, θ={theta})"
        )));
    }
    Ok(p.sin() * theta.sin() / denom_sq.sqrt())
}

/// Mass and kinetic coefficient vectors of the Dirac form around momentum p.
#[derive(Debug, Clone, Copy)]
pub struct DiracCoefficients {
    pub p: f64,
    pub theta: f64,
    /// Band energy with cos E = cos p sin θ.
    pub energy: f64,
    /// Mass-term unit vector d₀.
    pub d0: Vec3,
    /// Kinetic-term vector d₁.
    pub d1: Vec3,
}

pub fn dirac_coefficients(p: f64, theta: f64) -> Result<DiracCoefficients> {
    let cos_e = (p.cos() * theta.sin()).clamp(-1.0, 1.0);
    let energy = cos_e.acos();
    let sin_e = energy.sin();
    if sin_e.abs() < 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "Dirac coefficients undefined at gap closing (p={p}, θ={theta})"
        )));
    }
    let d0 = [
        -p.sin() * theta.cos() / sin_e,
        p.cos() * theta.cos() / sin_e,
        -p.sin() * theta.sin() / sin_e,
    ];
    let d1 = [
        -energy * p.cos() * theta.cos() / sin_e,
        -energy * p.sin() * theta.cos() / sin_e,
        -energy * p.cos() * theta.sin() / sin_e,
    ];
    Ok(DiracCoefficients {
        p,
        theta,
        energy,
        d0,
        d1,
    })
}

impl DiracCoefficients {
    /// v_g in terms of the stored (p, θ); equals −d₀_z.
    pub fn group_velocity(&self) -> f64 {
        -self.d0[2]
    }
}

/// Reference momentum for comparing the mean-field integrators against a
/// homogeneous exact run: the discrete ring momentum p = 2πm/|V| whose band
/// energy is closest to the energy of the uniform color-|0⟩ initial state,
/// ⟨H₀⟩ = (π/2)·sin θ. For |V| = 13, θ = 1 this picks p = 6π/13.
pub fn reference_momentum(theta: f64, num_nodes: usize) -> f64 {
    let target = std::f64::consts::FRAC_PI_2 * theta.sin();
    let mut best = (f64::INFINITY, 0.0);
    for m in 0..num_nodes {
        let mut p = 2.0 * std::f64::consts::PI * m as f64 / num_nodes as f64;
        if p > std::f64::consts::PI {
            p -= 2.0 * std::f64::consts::PI;
        }
        let energy = (p.cos() * theta.sin()).clamp(-1.0, 1.0).acos();
        let miss = (energy - target).abs();
        // prefer the positive-momentum representative on ties
        if miss < best.0 - 1e-12 || (miss < best.0 + 1e-12 && p > best.1) {
            best = (miss, p);
        }
    }
    best.1
}

fn rk4<F: Fn(Vec3) -> Vec3>(s: Vec3, dt: f64, f: F) -> Vec3 {
    let k1 = f(s);
    let k2 = f(axpy(s, dt / 2.0, k1));
    let k3 = f(axpy(s, dt / 2.0, k2));
    let k4 = f(axpy(s, dt, k3));
    let mut out = s;
    out = axpy(out, dt / 6.0, k1);
    out = axpy(out, dt / 3.0, k2);
    out = axpy(out, dt / 3.0, k3);
    out = axpy(out, dt / 6.0, k4);
    out
}

/// One RK4 substep of the precession equation ṡ = −(J/2|V|)·s × d̂.
pub fn ll_precession_step(s: Vec3, d_hat: Vec3, j: f64, num_nodes: usize, dt: f64) -> Vec3 {
    let rate = -j / (2.0 * num_nodes as f64);
    rk4(s, dt, |s| scale(rate, cross(s, d_hat)))
}

/// One RK4 substep of the damped equation
/// ṡ = −(J/2|V|)·s × d̂ + (J³Δt/16|V|v_g)·|s|²·d̂ × (d̂ × s).
pub fn ll_dissipative_step(
    s: Vec3,
    d_hat: Vec3,
    j: f64,
    num_nodes: usize,
    v_g: f64,
    dt: f64,
) -> Result<Vec3> {
    if v_g == 0.0 {
        return Err(Error::InvalidArgument(
            "dissipative integrator needs v_g ≠ 0 (localized regime excluded)".into(),
        ));
    }
    let prec = -j / (2.0 * num_nodes as f64);
    let damp = j.powi(3) * WALK_STEP / (16.0 * num_nodes as f64 * v_g);
    Ok(rk4(s, dt, |s| {
        let mut ds = scale(prec, cross(s, d_hat));
        ds = axpy(ds, damp * dot(s, s), cross(d_hat, cross(d_hat, s)));
        ds
    }))
}

/// Real 3-vector spin density s(x), one entry per lattice node.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinField {
    pub values: Vec<Vec3>,
}

impl SpinField {
    pub fn uniform(num_nodes: usize, s: Vec3) -> Self {
        SpinField {
            values: vec![s; num_nodes],
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.values.len()
    }

    pub fn max_deviation(&self, other: &SpinField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| norm([a[0] - b[0], a[1] - b[1], a[2] - b[2]]))
            .fold(0.0, f64::max)
    }

    /// Central difference ∂ₓs with Δx = 1 and periodic wrap.
    fn gradient(&self) -> Vec<Vec3> {
        let n = self.values.len();
        (0..n)
            .map(|x| {
                let right = self.values[(x + 1) % n];
                let left = self.values[(x + n - 1) % n];
                scale(
                    0.5,
                    [right[0] - left[0], right[1] - left[1], right[2] - left[2]],
                )
            })
            .collect()
    }
}

/// Gradient torque of the modified equation at every node (the O(J²) terms):
///
/// (J²Δt/8|V|)·[(d₀×d₁) + d₀×(d₀×d₁)] × (s × ∂ₓs)
/// + (J²Δt/16|V|²)·[(d₁·∂ₓs) + d₀·(d₁×∂ₓs)]·d₀ × (d₀ × s)
fn gradient_torque(field: &[Vec3], grad: &[Vec3], coeffs: &DiracCoefficients, j: f64) -> Vec<Vec3> {
    let n = field.len() as f64;
    let k_vec = {
        let dd = cross(coeffs.d0, coeffs.d1);
        axpy(dd, 1.0, cross(coeffs.d0, dd))
    };
    let c_field = j * j * WALK_STEP / (8.0 * n);
    let c_damp = j * j * WALK_STEP / (16.0 * n * n);
    field
        .iter()
        .zip(grad)
        .map(|(&s, &ds)| {
            let mut t = scale(c_field, cross(k_vec, cross(s, ds)));
            let response = dot(coeffs.d1, ds) + dot(coeffs.d0, cross(coeffs.d1, ds));
            t = axpy(t, c_damp * response, cross(coeffs.d0, cross(coeffs.d0, s)));
            t
        })
        .collect()
}

fn field_rhs(field: &[Vec3], coeffs: &DiracCoefficients, j: f64) -> Vec<Vec3> {
    let n = field.len() as f64;
    let prec = -j / (2.0 * n);
    let v_g = coeffs.group_velocity();
    let damp = if v_g.abs() > 1e-12 {
        j.powi(3) * WALK_STEP / (16.0 * n * v_g)
    } else {
        0.0
    };
    let sf = SpinField {
        values: field.to_vec(),
    };
    let grad = sf.gradient();
    let torque = gradient_torque(field, &grad, coeffs, j);
    field
        .iter()
        .zip(&torque)
        .map(|(&s, &t)| {
            let mut ds = scale(prec, cross(s, coeffs.d0));
            ds = axpy(ds, damp * dot(s, s), cross(coeffs.d0, cross(coeffs.d0, s)));
            [ds[0] + t[0], ds[1] + t[1], ds[2] + t[2]]
        })
        .collect()
}

/// One RK4 step of the gradient-corrected Landau–Lifshitz equation over the
/// whole field; reduces to the homogeneous damped dynamics when ∂ₓs = 0.
pub fn ll_gradient_step(
    field: &SpinField,
    coeffs: &DiracCoefficients,
    j: f64,
    dt: f64,
) -> Result<SpinField> {
    if field.num_nodes() < 4 {
        return Err(Error::InvalidArgument(
            "the field integrator needs |V| ≥ 4".into(),
        ));
    }
    let advance = |base: &[Vec3], k: &[Vec3], h: f64| -> Vec<Vec3> {
        base.iter().zip(k).map(|(&s, &d)| axpy(s, h, d)).collect()
    };
    let s0 = &field.values;
    let k1 = field_rhs(s0, coeffs, j);
    let k2 = field_rhs(&advance(s0, &k1, dt / 2.0), coeffs, j);
    let k3 = field_rhs(&advance(s0, &k2, dt / 2.0), coeffs, j);
    let k4 = field_rhs(&advance(s0, &k3, dt), coeffs, j);
    let values = (0..s0.len())
        .map(|i| {
            let mut out = s0[i];
            out = axpy(out, dt / 6.0, k1[i]);
            out = axpy(out, dt / 3.0, k2[i]);
            out = axpy(out, dt / 3.0, k3[i]);
            out = axpy(out, dt / 6.0, k4[i]);
            out
        })
        .collect();
    Ok(SpinField { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn quasienergy_special_points() {
        let q = quasienergy(PI / 2.0, PI / 2.0);
        assert!((q.e_plus - PI).abs() < 1e-12);
        assert!(q.d_hat.is_none()); // band edge, gap closing
        for k in [-2.0, 0.0, 0.7, 3.0] {
            let q = quasienergy(k, 0.0);
            assert!((q.e_plus - PI / 2.0).abs() < 1e-12, "flat band at θ=0");
        }
    }

    #[test]
    fn d_hat_is_a_unit_vector_away_from_closings() {
        let mut rng = StdRng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 100 {
            let k = (rng.gen::<f64>() - 0.5) * 2.0 * PI;
            let theta = rng.gen::<f64>() * PI;
            if let Some(d) = quasienergy(k, theta).d_hat {
                assert!((norm(d) - 1.0).abs() < 1e-10, "k={k} θ={theta}");
                checked += 1;
            }
        }
    }

    #[test]
    fn group_velocity_limits() {
        for p in [-1.0, 0.4, 1.2] {
            assert_eq!(group_velocity(p, 0.0).unwrap(), 0.0);
        }
        for p in [0.3, 1.0, -0.8] {
            let v = group_velocity(p, PI / 2.0).unwrap();
            assert!((v.abs() - 1.0).abs() < 1e-12, "p={p}: {v}");
            assert_eq!(v.signum(), p.signum());
        }
        assert!(group_velocity(0.0, PI / 2.0).is_err());
    }

    #[test]
    fn group_velocity_monotone_in_theta_and_odd_in_p() {
        let p = 0.9;
        let mut prev = 0.0;
        for i in 1..20 {
            let theta = i as f64 * (PI / 2.0) / 20.0;
            let v = group_velocity(p, theta).unwrap();
            assert!(v >= prev, "θ={theta}");
            assert!(v.abs() <= 1.0 + 1e-12);
            prev = v;
        }
        let mut rng = StdRng::seed_from_u64(32);
        for _ in 0..20 {
            let p = (rng.gen::<f64>() - 0.5) * 3.0;
            let theta = rng.gen::<f64>() * 1.4;
            let v1 = group_velocity(p, theta).unwrap();
            let v2 = group_velocity(-p, theta).unwrap();
            assert!((v1 + v2).abs() < 1e-12);
        }
    }

    #[test]
    fn dirac_coefficients_special_points() {
        // θ=π/2: d₀ loses its x and y components — the z-locked anisotropy.
        let c = dirac_coefficients(0.9, PI / 2.0).unwrap();
        assert!(c.d0[0].abs() < 1e-12 && c.d0[1].abs() < 1e-12);
        // p=0: d₀ = (0, cosθ, 0)/sin E with cos E = sin θ
        let c = dirac_coefficients(0.0, 1.1).unwrap();
        assert!((c.energy.cos() - 1.1f64.sin()).abs() < 1e-12);
        assert!(c.d0[0].abs() < 1e-12 && c.d0[2].abs() < 1e-12);
        assert!((c.d0[1] - 1.1f64.cos() / c.energy.sin()).abs() < 1e-12);
        assert!(dirac_coefficients(0.0, PI / 2.0).is_err());
    }

    #[test]
    fn reference_momentum_matches_the_quoted_value() {
        let p = reference_momentum(1.0, 13);
        assert!((p - 6.0 * PI / 13.0).abs() < 1e-12, "{p}");
    }

    #[test]
    fn d0_is_a_unit_vector() {
        let mut rng = StdRng::seed_from_u64(33);
        for _ in 0..50 {
            let p = (rng.gen::<f64>() - 0.5) * 2.0 * PI;
            let theta = rng.gen::<f64>() * PI;
            if let Ok(c) = dirac_coefficients(p, theta) {
                assert!((norm(c.d0) - 1.0).abs() < 1e-10, "p={p} θ={theta}");
                assert!((c.group_velocity() - group_velocity(p, theta).unwrap()).abs() < 1e-12);
            }
        }
    }

    fn rotate_about(axis: Vec3, angle: f64, v: Vec3) -> Vec3 {
        // Rodrigues rotation, for the analytic precession solution
        let (s, c) = angle.sin_cos();
        let k = axis;
        let kxv = cross(k, v);
        let kdotv = dot(k, v);
        [
            v[0] * c + kxv[0] * s + k[0] * kdotv * (1.0 - c),
            v[1] * c + kxv[1] * s + k[1] * kdotv * (1.0 - c),
            v[2] * c + kxv[2] * s + k[2] * kdotv * (1.0 - c),
        ]
    }

    #[test]
    fn precession_period_is_4pi_v_over_j() {
        // |V| = 13, J = 0.2 → T = 4π·13/0.2 ≈ 817 steps. Measure the first
        // return of s toward its start and compare with the formula.
        let d_hat = [0.0, 0.0, 1.0];
        let (j, num_nodes, dt) = (0.2, 13, 0.1);
        let period = 4.0 * PI * num_nodes as f64 / j;
        assert!((period - 816.81).abs() < 0.5);
        let s0 = [1.0, 0.0, 0.0];
        let mut s = s0;
        let mut best = (0.0f64, -2.0f64); // (time, overlap)
        let steps = (1.1 * period / dt) as usize;
        for i in 1..=steps {
            s = ll_precession_step(s, d_hat, j, num_nodes, dt);
            let t = i as f64 * dt;
            let overlap = dot(s, s0);
            if t > 0.5 * period && overlap > best.1 {
                best = (t, overlap);
            }
        }
        assert!(
            (best.0 - period).abs() < 0.15,
            "measured {} vs {period}",
            best.0
        );
        assert!((norm(s) - 1.0).abs() < 1e-9);
        assert!((dot(s, d_hat) - dot(s0, d_hat)).abs() < 1e-9);
    }

    #[test]
    fn precession_fixed_point_along_d_hat() {
        let d_hat = [0.6, 0.0, 0.8];
        let mut s = d_hat;
        for _ in 0..100 {
            s = ll_precession_step(s, d_hat, 1.0, 5, 0.1);
        }
        assert!(norm([s[0] - d_hat[0], s[1] - d_hat[1], s[2] - d_hat[2]]) < 1e-12);
    }

    #[test]
    fn rk4_is_fourth_order_on_the_precession_problem() {
        let d_hat = [0.0, 1.0, 0.0];
        let (j, num_nodes) = (1.0, 4);
        let omega = j / (2.0 * num_nodes as f64);
        let s0 = [1.0, 0.0, 0.0];
        let t_end = 2.0 * PI / omega; // one period
        let error_at = |dt: f64| -> f64 {
            let steps = (t_end / dt).round() as usize;
            let mut s = s0;
            for _ in 0..steps {
                s = ll_precession_step(s, d_hat, j, num_nodes, dt);
            }
            // ṡ = −ω s×d̂ = +ω d̂×s: rotation about +d̂ at rate ω
            let exact = rotate_about(d_hat, omega * steps as f64 * dt, s0);
            norm([s[0] - exact[0], s[1] - exact[1], s[2] - exact[2]])
        };
        let ratio = error_at(0.8) / error_at(0.4);
        assert!((10.0..25.0).contains(&ratio), "error ratio {ratio}");
    }

    #[test]
    fn damping_vanishes_when_aligned() {
        let d_hat = [0.0, 0.0, 1.0];
        let s = [0.0, 0.0, 0.7];
        let out = ll_dissipative_step(s, d_hat, 0.8, 7, 0.9, 0.1).unwrap();
        assert!(norm([out[0] - s[0], out[1] - s[1], out[2] - s[2]]) < 1e-12);
    }

    #[test]
    fn dissipative_norm_decays_monotonically_toward_alignment() {
        let d_hat = [0.0, 0.0, 1.0];
        let (j, num_nodes, v_g) = (0.8, 7, 0.6);
        let mut s = [0.9, 0.0, 0.43];
        let mut prev = norm(s);
        for _ in 0..2000 {
            s = ll_dissipative_step(s, d_hat, j, num_nodes, v_g, 0.1).unwrap();
            let n = norm(s);
            assert!(n <= prev + 1e-12);
            prev = n;
        }
        assert!(ll_dissipative_step(s, d_hat, j, num_nodes, 0.0, 0.1).is_err());
    }

    #[test]
    fn damping_rate_scales_as_j_cubed() {
        // halving J cuts the initial norm-decay rate by ≈8× (precession does
        // not move |s|, so the decay isolates the J³ term)
        let d_hat = [0.0, 0.0, 1.0];
        let s0 = [0.8, 0.0, 0.3];
        let decay = |j: f64| -> f64 {
            let mut s = s0;
            for _ in 0..100 {
                s = ll_dissipative_step(s, d_hat, j, 9, 0.7, 0.05).unwrap();
            }
            norm(s0) - norm(s)
        };
        let ratio = decay(0.4) / decay(0.2);
        assert!((ratio - 8.0).abs() < 0.5, "ratio {ratio}");
    }

    #[test]
    fn uniform_field_follows_the_homogeneous_integrator() {
        let coeffs = dirac_coefficients(6.0 * PI / 13.0, 1.0).unwrap();
        let (j, num_nodes, dt) = (0.4, 13, 0.1);
        let s0 = [0.3, -0.2, 0.9];
        let mut field = SpinField::uniform(num_nodes, s0);
        let mut s = s0;
        let v_g = coeffs.group_velocity();
        for _ in 0..500 {
            field = ll_gradient_step(&field, &coeffs, j, dt).unwrap();
            s = ll_dissipative_step(s, coeffs.d0, j, num_nodes, v_g, dt).unwrap();
        }
        let reference = SpinField::uniform(num_nodes, s);
        assert!(field.max_deviation(&reference) < 1e-10);
    }

    #[test]
    fn gradient_torque_scales_as_j_squared() {
        let coeffs = dirac_coefficients(1.2, 0.9).unwrap();
        let num_nodes = 8;
        let field: Vec<Vec3> = (0..num_nodes)
            .map(|x| {
                let phase = 2.0 * PI * x as f64 / num_nodes as f64;
                [phase.cos() * 0.3, 0.1, 0.9 + 0.05 * phase.sin()]
            })
            .collect();
        let sf = SpinField {
            values: field.clone(),
        };
        let grad = sf.gradient();
        let t1 = gradient_torque(&field, &grad, &coeffs, 0.3);
        let t2 = gradient_torque(&field, &grad, &coeffs, 0.6);
        for (a, b) in t1.iter().zip(&t2) {
            for i in 0..3 {
                assert!((b[i] - 4.0 * a[i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sinusoidal_perturbation_shifts_the_local_frequency() {
        // Tilt the field away from d₀, modulate the tilt phase sinusoidally,
        // and read the per-node precession rate off the instantaneous RHS.
        // The shift must be linear in the perturbation amplitude and track
        // the d₁·∂ₓs pattern along the chain.
        let coeffs = dirac_coefficients(1.9, 0.8).unwrap();
        let num_nodes = 32;
        let j = 0.3;
        // orthonormal frame (u, w, d0)
        let d0 = coeffs.d0;
        let mut u = cross(d0, [0.0, 0.0, 1.0]);
        u = scale(1.0 / norm(u), u);
        let w = cross(d0, u);
        let tilt = 0.9f64;
        let build = |eps: f64| -> SpinField {
            let values = (0..num_nodes)
                .map(|x| {
                    let phi = eps * (2.0 * PI * x as f64 / num_nodes as f64).sin();
                    axpy(
                        scale(tilt.cos(), d0),
                        tilt.sin(),
                        axpy(scale(phi.cos(), u), phi.sin(), w),
                    )
                })
                .collect();
            SpinField { values }
        };
        let rate_shift = |eps: f64| -> Vec<f64> {
            let field = build(eps);
            let rhs = field_rhs(&field.values, &coeffs, j);
            field
                .values
                .iter()
                .zip(&rhs)
                .map(|(&s, &ds)| {
                    let s_perp = axpy(s, -dot(s, d0), d0);
                    dot(d0, cross(s, ds)) / dot(s_perp, s_perp) - j / (2.0 * num_nodes as f64)
                })
                .collect()
        };
        let shift1 = rate_shift(0.02);
        let shift2 = rate_shift(0.04);
        // linear response: doubling the perturbation doubles the shift
        let amp1: f64 = shift1.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(amp1 > 0.0, "perturbation must move the rate");
        for (a, b) in shift1.iter().zip(&shift2) {
            assert!((b - 2.0 * a).abs() < 0.05 * amp1.max(1e-30), "{a} vs {b}");
        }
        // and the spatial pattern follows d₁·∂ₓs
        let field = build(0.02);
        let grad = field.gradient();
        let pattern: Vec<f64> = grad.iter().map(|&g| dot(coeffs.d1, g)).collect();
        let corr = {
            let mean_a = shift1.iter().sum::<f64>() / num_nodes as f64;
            let mean_b = pattern.iter().sum::<f64>() / num_nodes as f64;
            let mut num = 0.0;
            let mut da = 0.0;
            let mut db = 0.0;
            for (a, b) in shift1.iter().zip(&pattern) {
                num += (a - mean_a) * (b - mean_b);
                da += (a - mean_a).powi(2);
                db += (b - mean_b).powi(2);
            }
            num / (da * db).sqrt()
        };
        assert!(
            corr.abs() > 0.9,
            "frequency shift decorrelated from d₁·∂ₓs: r={corr}"
        );
    }
}
