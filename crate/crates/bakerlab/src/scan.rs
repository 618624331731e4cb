//! The theorem harness: sweep (N, θ), push every fiber basis vector through
//! the propagator, measure X/Y eigen-residuals, and render the verdict. A
//! point θ is declared invariant for a given N only when every basis index m
//! passes, and the expected answer over any grid is exactly
//! `{(N, (0,0)) : N even}`.

use crate::error::Result;
use crate::propagator::apply_f;
use crate::rational::{rat, rat_to_string, Rat};
use crate::theta::{position_basis, xy_residual, Theta};
use crate::{kernel::norm_periodized, params::ModelParams};
use rayon::prelude::*;
use serde::Serialize;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Residuals of one (N, θ, m) probe.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub n: u32,
    pub theta1: String,
    pub theta2: String,
    pub m: usize,
    pub rx: f64,
    pub ry: f64,
    pub invariant: bool,
    pub tol: f64,
    #[serde(skip)]
    pub theta: Theta,
}

impl ScanRecord {
    fn new(n: u32, theta: Theta, m: usize, rx: f64, ry: f64, tol: f64) -> Self {
        Self {
            n,
            theta1: rat_to_string(theta.theta1()),
            theta2: rat_to_string(theta.theta2()),
            m,
            rx,
            ry,
            invariant: rx.max(ry) < tol,
            tol,
            theta,
        }
    }
}

/// All reduced fractions in `[0, 1)` with denominator at most `max_denom`.
pub fn farey(max_denom: i64) -> Vec<Rat> {
    let mut out = vec![rat(0, 1)];
    for d in 2..=max_denom {
        for n in 1..d {
            if crate::rational::gcd_i64(n, d) == 1 {
                out.push(rat(n, d));
            }
        }
    }
    out.sort();
    out
}

/// The default θ grid: the Farey fractions of denominator ≤ `max_denom` on
/// both axes.
pub fn theta_grid(max_denom: i64) -> Vec<Theta> {
    let axis = farey(max_denom);
    let mut grid = Vec::with_capacity(axis.len() * axis.len());
    for t1 in &axis {
        for t2 in &axis {
            grid.push(Theta::new(*t1, *t2));
        }
    }
    grid
}

/// Residual records for every m of one (N, θ) pair.
pub fn scan_point(n: u32, theta: Theta, tol: f64) -> Result<Vec<ScanRecord>> {
    let params = ModelParams::new(n)?;
    (0..n as usize)
        .map(|m| {
            let image = apply_f(&position_basis(params, theta, m)?)?;
            let (rx, ry) = xy_residual(&image, theta)?;
            Ok(ScanRecord::new(n, theta, m, rx, ry, tol))
        })
        .collect()
}

/// Sweep the grid. Records come back in deterministic (N, θ, m) order
/// regardless of how the work is distributed.
pub fn scan_theta(n_set: &[u32], thetas: &[Theta], tol: f64) -> Result<Vec<ScanRecord>> {
    let jobs: Vec<(u32, Theta)> = n_set
        .iter()
        .flat_map(|n| thetas.iter().map(move |t| (*n, *t)))
        .collect();
    let nested: Vec<Vec<ScanRecord>> = jobs
        .par_iter()
        .map(|(n, theta)| scan_point(*n, *theta, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(nested.into_iter().flatten().collect())
}

/// `‖X(FΦ_m) − e^{2πi·2θ₁}·FΦ_m‖ / ‖FΦ_m‖`: the θ₁-doubling identity, an
/// unconditional consequence of `XF = FX²`. Any violation is an engine bug,
/// not physics, which makes this the scan's self-test.
pub fn doubling_check(n: u32, theta: Theta, m: usize) -> Result<f64> {
    let params = ModelParams::new(n)?;
    let image = apply_f(&position_basis(params, theta, m)?)?;
    let denom = norm_periodized(&image)?;
    if denom == 0.0 {
        return Err(crate::error::BakerError::ZeroNorm);
    }
    let xs = image.phase_mult(Rat::from_integer(n as i64))?;
    let d = xs.sub(&image.rotate(theta.theta1() * 2))?;
    Ok(norm_periodized(&d)? / denom)
}

/// Per-(N, θ) aggregation of the scan records.
#[derive(Clone, Debug, Serialize)]
pub struct PointSummary {
    pub n: u32,
    pub theta1: String,
    pub theta2: String,
    pub max_rx: f64,
    pub max_ry: f64,
    pub invariant: bool,
    #[serde(skip)]
    pub theta: Theta,
}

pub fn summarize(records: &[ScanRecord]) -> Vec<PointSummary> {
    let mut out: Vec<PointSummary> = Vec::new();
    for r in records {
        match out.last_mut() {
            Some(s) if s.n == r.n && s.theta == r.theta => {
                s.max_rx = s.max_rx.max(r.rx);
                s.max_ry = s.max_ry.max(r.ry);
                s.invariant = s.invariant && r.invariant;
            }
            _ => out.push(PointSummary {
                n: r.n,
                theta1: r.theta1.clone(),
                theta2: r.theta2.clone(),
                max_rx: r.rx,
                max_ry: r.ry,
                invariant: r.invariant,
                theta: r.theta,
            }),
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub pass: bool,
    /// (N, θ) pairs observed invariant.
    pub invariant_points: Vec<(u32, String, String)>,
    /// Human-readable discrepancies against the expected set.
    pub violations: Vec<String>,
}

/// PASS iff the set of invariant (N, θ) pairs over the scanned grid is
/// exactly `{(N, (0,0)) : N even}`.
pub fn theorem_verdict(records: &[ScanRecord]) -> Verdict {
    let summaries = summarize(records);
    let mut invariant_points = Vec::new();
    let mut violations = Vec::new();
    for s in &summaries {
        let expected = s.n % 2 == 0 && s.theta == Theta::zero();
        if s.invariant {
            invariant_points.push((s.n, s.theta1.clone(), s.theta2.clone()));
        }
        if s.invariant && !expected {
            violations.push(format!(
                "unexpected invariant point: N={} θ=({},{}) max_rx={:e} max_ry={:e}",
                s.n, s.theta1, s.theta2, s.max_rx, s.max_ry
            ));
        }
        if !s.invariant && expected {
            violations.push(format!(
                "expected invariant point failed: N={} θ=({},{}) max_rx={:e} max_ry={:e}",
                s.n, s.theta1, s.theta2, s.max_rx, s.max_ry
            ));
        }
    }
    Verdict { pass: violations.is_empty(), invariant_points, violations }
}
