//! The fiber inner product: a sinc–Gaussian kernel integrated over the
//! fundamental domain.
//!
//! For states written as δ-combs the integral collapses to a double sum of
//! kernel values over pairs of comb points,
//!
//! ```text
//!   (s₁, s₂) = Σ_{x ∈ s₁ ∩ [0,1)} Σ_y conj(w₁(x)) · w₂(y) · K(x, y),
//!   K(x, y)  = sin(πN(x−y))/(π(x−y)) · e^{−(πN/2)((x−y)² + i(x−y))},
//! ```
//!
//! with the y-sum truncated once the Gaussian factor drops below
//! `kernel_tol`. On a fiber basis the sinc zeros kill every pair separated by
//! a nonzero multiple of 1/N, which is what makes the δ-comb basis
//! orthonormal; those zeros are detected exactly from the rational geometry.
//!
//! [`kernel_form`] is the fundamental-domain form. [`kernel_form_periodized`]
//! extends the same double sum to arbitrary finite comb pairs by averaging
//! the x-sum over a full period of the state instead of `[0,1)`; the two
//! agree on fiber states, and the periodized form is a true nonnegative
//! quadratic form on every comb state, which makes it the right residual
//! gauge for states that leak out of all fibers. The extension is a
//! diagnostic choice of this crate, not part of the fiber construction.

use crate::comb::{CombState, Rep};
use crate::error::{BakerError, Result};
use crate::rational::{ext_gcd, mod_one, rat_gcd, rat_to_f64, Rat};
use crate::{amplitude::unit_phase, params::ModelParams};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use std::f64::consts::PI;

/// Kernel `K(x, y)` with the removable singularity filled: `K(x, x) = N`.
pub fn eval_kernel(x: f64, y: f64, n: u32) -> Complex64 {
    let u = x - y;
    if u == 0.0 {
        return Complex64::new(n as f64, 0.0);
    }
    let nf = n as f64;
    let sinc = (PI * nf * u).sin() / (PI * u);
    let gauss = (-(PI * nf / 2.0) * u * u).exp();
    let arg = -(PI * nf / 2.0) * u;
    sinc * gauss * Complex64::new(arg.cos(), arg.sin())
}

/// Kernel on an exact rational separation. Lattice-aligned separations
/// (`N·Δ ∈ ℤ`) are sinc zeros or the diagonal and are returned exactly.
pub fn kernel_delta(delta: Rat, n: u32) -> Complex64 {
    if delta.is_zero() {
        return Complex64::new(n as f64, 0.0);
    }
    if (delta * Rat::from_integer(n as i64)).is_integer() {
        return Complex64::ZERO;
    }
    eval_kernel(rat_to_f64(delta), 0.0, n)
}

fn ensure_position_pair(s1: &CombState, s2: &CombState) -> Result<ModelParams> {
    for s in [s1, s2] {
        if s.rep() != Rep::Position {
            return Err(BakerError::RepMismatch { expected: Rep::Position, got: s.rep() });
        }
    }
    if s1.params().n != s2.params().n {
        return Err(BakerError::ParamsMismatch(s1.params().n, s2.params().n));
    }
    Ok(s1.params())
}

/// The inner product over the fundamental domain `[0, 1)`.
pub fn kernel_form(s1: &CombState, s2: &CombState) -> Result<Complex64> {
    let params = ensure_position_pair(s1, s2)?;
    let radius = Rat::from_integer(params.truncation_radius());
    let xs = s1.points_in(Rat::zero(), Rat::from_integer(1));
    let ys = s2.points_in(-radius, Rat::from_integer(1) + radius);
    let mut acc = Complex64::ZERO;
    for (x, wx) in &xs {
        let mut inner = Complex64::ZERO;
        for (y, wy) in &ys {
            let delta = *x - *y;
            if delta.abs() > radius {
                continue;
            }
            let k = kernel_delta(delta, params.n);
            if k != Complex64::ZERO {
                inner += wy * k;
            }
        }
        acc += wx.conj() * inner;
    }
    Ok(acc)
}

/// Period-averaged extension of [`kernel_form`]: the x-sum runs over one full
/// period `T` of the pair and is divided by `T`, evaluated in closed form so
/// `T` never appears explicitly. Coincides with [`kernel_form`] on states
/// whose weights have period 1 (in particular on every fiber state).
pub fn kernel_form_periodized(s1: &CombState, s2: &CombState) -> Result<Complex64> {
    let params = ensure_position_pair(s1, s2)?;
    let n = params.n;
    let radius = Rat::from_integer(params.truncation_radius());
    let mut acc = Complex64::ZERO;
    for ti in s1.terms() {
        for tj in s2.terms() {
            let g = rat_gcd(ti.spacing, tj.spacing);
            // pairs of lattices interfere only when their step phases are
            // commensurate; otherwise the phase average over a full period
            // vanishes identically
            let beta = (tj.step_phase * ti.spacing - ti.step_phase * tj.spacing) / g;
            if !beta.is_integer() {
                continue;
            }
            let qd = ti.spacing.denom() / crate::rational::gcd_i64(*ti.spacing.denom(), *tj.spacing.denom())
                * tj.spacing.denom();
            let p_i = (ti.spacing * Rat::from_integer(qd)).to_integer();
            let p_j = (tj.spacing * Rat::from_integer(qd)).to_integer();
            let (_, u, v) = ext_gcd(p_i, p_j);
            let delta0 = ti.offset - tj.offset;
            // separations Δ₀ + g·t within the truncation radius
            let t_min = ((-radius - delta0) / g).ceil().to_integer();
            let t_max = ((radius - delta0) / g).floor().to_integer();
            let phase_step = -(ti.step_phase * Rat::from_integer(u)
                + tj.step_phase * Rat::from_integer(v));
            let mut inner = Complex64::ZERO;
            for t in t_min..=t_max {
                let k = kernel_delta(delta0 + g * Rat::from_integer(t), n);
                if k != Complex64::ZERO {
                    inner += unit_phase(mod_one(phase_step * Rat::from_integer(t))) * k;
                }
            }
            if inner != Complex64::ZERO {
                let pref = ti.amp.value().conj()
                    * tj.amp.value()
                    * rat_to_f64(g / (ti.spacing * tj.spacing));
                acc += pref * inner;
            }
        }
    }
    Ok(acc)
}

/// Norm from the fundamental-domain form (tiny negative rounding clamped).
pub fn norm(s: &CombState) -> Result<f64> {
    Ok(kernel_form(s, s)?.re.max(0.0).sqrt())
}

/// Norm from the period-averaged form.
pub fn norm_periodized(s: &CombState) -> Result<f64> {
    Ok(kernel_form_periodized(s, s)?.re.max(0.0).sqrt())
}
