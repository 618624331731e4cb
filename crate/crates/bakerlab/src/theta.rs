//! Fibers of the θ-torus.
//!
//! For h = 1/N the center of the quantum torus algebra is generated by
//! `X = e^{ix̂/ħ}` and `Y = e^{ip̂/ħ}`; the joint eigenspace `H(θ)` with
//! eigenvalues `e^{2πiθ₁}`, `e^{2πiθ₂}` is N-dimensional and spanned by the
//! δ-comb basis
//!
//! ```text
//!   Φ_m = N^{−1/2} e^{2πiθ₂m/N} Σ_k e^{2πiθ₂k} |(θ₁+m)/N + k⟩_x .
//! ```
//!
//! This module builds those bases (and the dual momentum-comb basis), their
//! Gram matrices under the kernel form, projections onto a fiber, and the
//! X/Y eigen-residuals used to decide whether a state still lives in `H(θ)`.

use crate::amplitude::Amplitude;
use crate::comb::{Comb, CombState, Rep};
use crate::error::{BakerError, Result};
use crate::kernel::{kernel_form, kernel_form_periodized, norm_periodized};
use crate::params::ModelParams;
use crate::propagator::UnitaryMatrix;
use crate::rational::{mod_one, parse_rat, rat, rat_to_string, Rat};
use num_complex::Complex64;

/// A point (θ₁, θ₂) of the θ-torus, both coordinates rational turns in `[0,1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Theta {
    theta1: Rat,
    theta2: Rat,
}

impl Theta {
    pub fn new(theta1: Rat, theta2: Rat) -> Self {
        Self { theta1: mod_one(theta1), theta2: mod_one(theta2) }
    }

    pub fn zero() -> Self {
        Self::new(rat(0, 1), rat(0, 1))
    }

    pub fn theta1(&self) -> Rat {
        self.theta1
    }

    pub fn theta2(&self) -> Rat {
        self.theta2
    }

    /// Parse `"p/q,p/q"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| BakerError::Parse(format!("expected \"t1,t2\", got {s:?}")))?;
        Ok(Self::new(parse_rat(a)?, parse_rat(b)?))
    }
}

impl std::fmt::Display for Theta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", rat_to_string(self.theta1), rat_to_string(self.theta2))
    }
}

/// The m-th position δ-comb basis vector of `H(θ)`: a single comb of
/// spacing 1 anchored at `(θ₁+m)/N` with step phase θ₂ and amplitude
/// `e^{2πiθ₂m/N}/√N`.
pub fn position_basis(params: ModelParams, theta: Theta, m: usize) -> Result<CombState> {
    let n = params.n as usize;
    if m >= n {
        return Err(BakerError::IndexOutOfRange { index: m, dim: n });
    }
    let n_rat = Rat::from_integer(params.n as i64);
    let m_rat = Rat::from_integer(m as i64);
    let amp = Amplitude::exact(rat(1, 1), rat(1, params.n as i64), theta.theta2 * m_rat / n_rat);
    Ok(CombState::single(
        params,
        Rep::Position,
        Comb::new(rat(1, 1), (theta.theta1 + m_rat) / n_rat, theta.theta2, amp),
    ))
}

/// The n-th momentum δ-comb basis vector of the same fiber:
/// `Φ̃_n = N^{−1/2} e^{−2πinθ₁/N} Σ_k e^{−2πiθ₁k} |(θ₂+n)/N + k⟩_p`.
/// The 1/√N prefactor matches the position basis so both are orthonormal.
pub fn momentum_basis(params: ModelParams, theta: Theta, idx: usize) -> Result<CombState> {
    let n = params.n as usize;
    if idx >= n {
        return Err(BakerError::IndexOutOfRange { index: idx, dim: n });
    }
    let n_rat = Rat::from_integer(params.n as i64);
    let idx_rat = Rat::from_integer(idx as i64);
    let amp = Amplitude::exact(
        rat(1, 1),
        rat(1, params.n as i64),
        -(theta.theta1 * idx_rat / n_rat),
    );
    Ok(CombState::single(
        params,
        Rep::Momentum,
        Comb::new(
            rat(1, 1),
            (theta.theta2 + idx_rat) / n_rat,
            mod_one(-theta.theta1),
            amp,
        ),
    ))
}

/// The N position-basis vectors of one fiber.
#[derive(Clone, Debug)]
pub struct FiberBasis {
    params: ModelParams,
    theta: Theta,
    basis: Vec<CombState>,
}

impl FiberBasis {
    pub fn new(params: ModelParams, theta: Theta) -> Result<Self> {
        let basis = (0..params.n as usize)
            .map(|m| position_basis(params, theta, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, theta, basis })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn theta(&self) -> Theta {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn state(&self, m: usize) -> &CombState {
        &self.basis[m]
    }

    pub fn states(&self) -> &[CombState] {
        &self.basis
    }

    /// `G[m][n] = (Φ_m, Φ_n)` under the kernel form; expected ≈ identity.
    pub fn gram_matrix(&self) -> Result<UnitaryMatrix> {
        let n = self.dim();
        let mut g = UnitaryMatrix::zeros(n);
        for m in 0..n {
            for l in 0..n {
                g.set(m, l, kernel_form(&self.basis[m], &self.basis[l])?);
            }
        }
        Ok(g)
    }
}

/// Decompose `s` against a fiber basis: coefficients `(Φ_m, s)` and the
/// leakage residual `(‖s‖² − Σ|c_m|²)^{1/2}`, clamped at zero for rounding
/// noise below 1e−12 and reported as an error beyond that.
pub fn fiber_project(s: &CombState, fb: &FiberBasis) -> Result<(Vec<Complex64>, f64)> {
    let coeffs = fb
        .states()
        .iter()
        .map(|phi| kernel_form(phi, s))
        .collect::<Result<Vec<_>>>()?;
    let total = kernel_form_periodized(s, s)?.re;
    let captured: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let mut residual_sq = total - captured;
    if residual_sq < 0.0 {
        if residual_sq < -1e-12 {
            return Err(BakerError::NegativeResidual(residual_sq));
        }
        residual_sq = 0.0;
    }
    Ok((coeffs, residual_sq.sqrt()))
}

/// Relative X/Y eigen-residuals of `s` against the fiber at `theta`:
/// `rx = ‖Xs − e^{2πiθ₁}s‖/‖s‖`, `ry = ‖Ys − e^{2πiθ₂}s‖/‖s‖`, norms from
/// the period-averaged kernel form. Both vanish iff `s` lies in the joint
/// eigenspace.
pub fn xy_residual(s: &CombState, theta: Theta) -> Result<(f64, f64)> {
    let n = s.params().n as i64;
    let denom = norm_periodized(s)?;
    if denom == 0.0 {
        return Err(BakerError::ZeroNorm);
    }
    let xs = s.phase_mult(Rat::from_integer(n))?;
    let dx = xs.sub(&s.rotate(theta.theta1))?;
    let ys = s.translate(rat(-1, 1))?;
    let dy = ys.sub(&s.rotate(theta.theta2))?;
    Ok((norm_periodized(&dx)? / denom, norm_periodized(&dy)? / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(n: u32) -> ModelParams {
        ModelParams::new(n).unwrap()
    }

    #[test]
    fn position_basis_shape() {
        // N=2, θ=(0,0), m=1: comb at offsets 1/2 + k, amplitude 1/√2, φ=0
        let p = params(2);
        let s = position_basis(p, Theta::zero(), 1).unwrap();
        let t = &s.terms()[0];
        assert_eq!(t.spacing, rat(1, 1));
        assert_eq!(t.offset, rat(1, 2));
        assert_eq!(t.step_phase, rat(0, 1));
        assert_abs_diff_eq!(t.amp.value().re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(t.amp.value().im, 0.0, epsilon = 1e-15);
        assert!(position_basis(p, Theta::zero(), 2).is_err());
    }

    #[test]
    fn basis_is_exact_joint_eigenvector() {
        let p = params(3);
        let theta = Theta::new(rat(1, 3), rat(2, 5));
        for m in 0..3 {
            let s = position_basis(p, theta, m).unwrap();
            // X Φ = e^{2πiθ₁} Φ and Y Φ = e^{2πiθ₂} Φ exactly at term level
            let xs = s.phase_mult(rat(3, 1)).unwrap();
            assert!(xs.exact_eq(&s.rotate(theta.theta1())));
            let ys = s.translate(rat(-1, 1)).unwrap();
            assert!(ys.exact_eq(&s.rotate(theta.theta2())));
            // and the residual diagnostic agrees
            let (rx, ry) = xy_residual(&s, theta).unwrap();
            assert_eq!(rx, 0.0);
            assert_eq!(ry, 0.0);
        }
    }

    #[test]
    fn periodic_fiber_is_plain_comb() {
        let p = params(4);
        for m in 0..4 {
            let s = position_basis(p, Theta::zero(), m).unwrap();
            assert_eq!(s.terms()[0].step_phase, rat(0, 1));
        }
    }

    #[test]
    fn gram_is_identity() {
        for (n, theta) in [
            (4, Theta::zero()),
            (1, Theta::new(rat(1, 3), rat(1, 7))),
            (6, Theta::new(rat(1, 3), rat(1, 5))),
        ] {
            let p = params(n);
            let fb = FiberBasis::new(p, theta).unwrap();
            let g = fb.gram_matrix().unwrap();
            assert!(g.max_deviation_from_identity() < 1e-8, "N={n} θ={theta}");
        }
    }

    #[test]
    fn momentum_basis_center_and_eigenvalues() {
        let p = params(2);
        let theta = Theta::new(rat(1, 2), rat(1, 2));
        let s = momentum_basis(p, theta, 0).unwrap();
        assert_eq!(s.rep(), Rep::Momentum);
        // centered at p = θ₂/N + k = 1/4 + k
        assert_eq!(s.terms()[0].offset, rat(1, 4));
        // eigen-residuals vanish exactly after moving to the position rep
        let pos = s.to_position();
        let (rx, ry) = xy_residual(&pos, theta).unwrap();
        assert_eq!((rx, ry), (0.0, 0.0));
    }

    #[test]
    fn momentum_basis_spans_the_fiber() {
        let p = params(4);
        let theta = Theta::new(rat(1, 3), rat(1, 5));
        let fb = FiberBasis::new(p, theta).unwrap();
        for idx in 0..4 {
            let s = momentum_basis(p, theta, idx).unwrap().to_position();
            let (_, residual) = fiber_project(&s, &fb).unwrap();
            assert!(residual < 1e-8, "idx={idx} residual={residual}");
        }
    }

    #[test]
    fn momentum_position_change_of_basis_is_unitary() {
        for n in [2u32, 4, 8] {
            let p = params(n);
            let theta = Theta::new(rat(1, 3), rat(1, 5));
            let dim = n as usize;
            let mut u = UnitaryMatrix::zeros(dim);
            for col in 0..dim {
                let mom = momentum_basis(p, theta, col).unwrap().to_position();
                for row in 0..dim {
                    let phi = position_basis(p, theta, row).unwrap();
                    u.set(row, col, kernel_form(&phi, &mom).unwrap());
                }
            }
            assert!(u.unitarity_deviation() < 1e-8, "N={n}");
        }
    }

    #[test]
    fn project_basis_member() {
        let p = params(4);
        let theta = Theta::new(rat(1, 7), rat(3, 8));
        let fb = FiberBasis::new(p, theta).unwrap();
        let (coeffs, residual) = fiber_project(fb.state(2), &fb).unwrap();
        for (m, c) in coeffs.iter().enumerate() {
            let expect = if m == 2 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(c.norm(), expect, epsilon = 1e-8);
        }
        assert!(residual < 1e-8);
    }

    #[test]
    fn projection_reconstructs_in_fiber_states() {
        let p = params(4);
        let theta = Theta::new(rat(1, 5), rat(2, 7));
        let fb = FiberBasis::new(p, theta).unwrap();
        let mut s = CombState::empty(p, crate::comb::Rep::Position);
        for (m, w) in [(0usize, Complex64::new(0.4, -0.2)), (2, Complex64::new(-0.7, 0.5))] {
            s = s
                .add(&fb.state(m).scale(crate::amplitude::Amplitude::from_complex(w)))
                .unwrap();
        }
        let (coeffs, residual) = fiber_project(&s, &fb).unwrap();
        assert!(residual < 1e-8, "in-fiber state must project fully: {residual}");
        let mut recon = CombState::empty(p, crate::comb::Rep::Position);
        for (m, c) in coeffs.iter().enumerate() {
            recon = recon
                .add(&fb.state(m).scale(crate::amplitude::Amplitude::from_complex(*c)))
                .unwrap();
        }
        let diff = recon.sub(&s).unwrap();
        assert!(crate::kernel::norm_periodized(&diff).unwrap() < 1e-8);
    }

    #[test]
    fn leaky_state_has_large_residual() {
        // FΦ₀ at θ=(1/2,1/2), N=4 leaks far out of the fiber, while at
        // θ=(0,0) it projects back without loss
        let p = params(4);
        let theta = Theta::new(rat(1, 2), rat(1, 2));
        let fb = FiberBasis::new(p, theta).unwrap();
        let image = crate::propagator::apply_f(fb.state(0)).unwrap();
        let (_, residual) = fiber_project(&image, &fb).unwrap();
        assert!(residual > 0.1, "expected strong leakage, got {residual}");

        let fb0 = FiberBasis::new(p, Theta::zero()).unwrap();
        let image0 = crate::propagator::apply_f(fb0.state(0)).unwrap();
        let (_, residual0) = fiber_project(&image0, &fb0).unwrap();
        assert!(residual0 < 1e-8, "periodic fiber maps onto itself: {residual0}");
    }

    #[test]
    fn zero_norm_is_an_error() {
        let p = params(2);
        let empty = CombState::empty(p, Rep::Position);
        assert!(matches!(xy_residual(&empty, Theta::zero()), Err(BakerError::ZeroNorm)));
    }

    #[test]
    fn theta_parsing() {
        let t = Theta::parse("1/2,3/4").unwrap();
        assert_eq!(t.theta1(), rat(1, 2));
        assert_eq!(t.theta2(), rat(3, 4));
        assert_eq!(Theta::parse("5/4,-1/4").unwrap(), Theta::new(rat(1, 4), rat(3, 4)));
        assert!(Theta::parse("1/2").is_err());
    }
}
