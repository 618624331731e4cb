//! The classical covering dynamics on ℝ² behind the quantization, its torus
//! reduction, and the momentum-center escape argument for antiperiodic
//! boundary conditions. Everything runs in exact rationals; floats appear
//! only when orbits are dumped for plotting.
//!
//! The covering map acts branch-wise on half-open regions:
//!
//! ```text
//!   (2x,   p/2)        x mod 1 ∈ [0,1/2), p mod 2 ∈ [0,1)
//!   (2x−1, p/2 + 1/2)  x mod 1 ∈ [1/2,1), p mod 2 ∈ [0,1)
//!   (2x+1, p/2 + 1/2)  x mod 1 ∈ [0,1/2), p mod 2 ∈ [1,2)
//!   (2x,   p/2)        x mod 1 ∈ [1/2,1), p mod 2 ∈ [1,2)
//! ```

use crate::rational::{mod_one, rat, rat_mod, Rat};
use serde::Serialize;

/// A point of the covering plane, exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhasePoint {
    pub x: Rat,
    pub p: Rat,
}

impl PhasePoint {
    pub fn new(x: Rat, p: Rat) -> Self {
        Self { x, p }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum XRegion {
    #[serde(rename = "l")]
    L,
    #[serde(rename = "r")]
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PRegion {
    #[serde(rename = "e_p")]
    Ep,
    #[serde(rename = "o_p")]
    Op,
}

/// Region membership with strictly half-open boundaries:
/// `l` is `x mod 1 ∈ [0, 1/2)`, `e_p` is `p mod 2 ∈ [0, 1)`.
pub fn region_of(pt: PhasePoint) -> (XRegion, PRegion) {
    let xr = if mod_one(pt.x) < rat(1, 2) { XRegion::L } else { XRegion::R };
    let pr = if rat_mod(pt.p, rat(2, 1)) < rat(1, 1) { PRegion::Ep } else { PRegion::Op };
    (xr, pr)
}

/// One step of the four-branch covering map.
pub fn cover_map(pt: PhasePoint) -> PhasePoint {
    let two = rat(2, 1);
    let half = rat(1, 2);
    match region_of(pt) {
        (XRegion::L, PRegion::Ep) => PhasePoint::new(two * pt.x, pt.p / 2),
        (XRegion::R, PRegion::Ep) => PhasePoint::new(two * pt.x - 1, pt.p / 2 + half),
        (XRegion::L, PRegion::Op) => PhasePoint::new(two * pt.x + 1, pt.p / 2 + half),
        (XRegion::R, PRegion::Op) => PhasePoint::new(two * pt.x, pt.p / 2),
    }
}

/// The induced baker transformation on the unit torus: the covering map
/// followed by reduction mod 1 in both coordinates.
///
/// Denominators in p double on every step, so long exact orbits grow without
/// bound; use [`torus_baker_f64`] for plotting-length iterations.
pub fn torus_baker(pt: PhasePoint) -> PhasePoint {
    debug_assert!(
        mod_one(pt.x) == pt.x && mod_one(pt.p) == pt.p,
        "torus_baker expects a point of [0,1)²"
    );
    let image = cover_map(pt);
    PhasePoint::new(mod_one(image.x), mod_one(image.p))
}

/// Float-mode torus baker step for orbit plotting output.
pub fn torus_baker_f64(x: f64, p: f64) -> (f64, f64) {
    let xm = x.rem_euclid(1.0);
    let pm = p.rem_euclid(1.0);
    let shift = if xm < 0.5 { 0.0 } else { 1.0 };
    ((2.0 * xm).rem_euclid(1.0), (pm + shift) / 2.0)
}

/// Region classification of a float point, same half-open convention.
pub fn region_of_f64(x: f64, p: f64) -> (XRegion, PRegion) {
    let xr = if x.rem_euclid(1.0) < 0.5 { XRegion::L } else { XRegion::R };
    let pr = if p.rem_euclid(2.0) < 1.0 { PRegion::Ep } else { PRegion::Op };
    (xr, pr)
}

/// Image of the momentum-lattice center `p = (θ₂+n)/N + k` under the
/// momentum half of the covering map (`p/2` on the even cells, `p/2 + 1/2`
/// on the odd ones). On the even branch with `n = 0` this is the quoted
/// `θ₂/(2N) + k/2`.
pub fn momentum_center_image(n: u32, theta2: Rat, band: u32, k: i64) -> Rat {
    let p = center(n, theta2, band, k);
    let on_even_cells = rat_mod(p, rat(2, 1)) < rat(1, 1);
    if on_even_cells {
        p / 2
    } else {
        p / 2 + rat(1, 2)
    }
}

fn center(n: u32, theta2: Rat, band: u32, k: i64) -> Rat {
    (theta2 + Rat::from_integer(band as i64)) / Rat::from_integer(n as i64)
        + Rat::from_integer(k)
}

/// Whether `p` lies on the momentum lattice `{(θ₂+n')/N + k'}`, i.e. whether
/// `N·p − θ₂` is an integer.
pub fn on_momentum_lattice(n: u32, theta2: Rat, p: Rat) -> bool {
    (p * Rat::from_integer(n as i64) - theta2).is_integer()
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyEscape {
    /// Band index n of the family `p = (θ₂+n)/N + k`.
    pub band: u32,
    pub total: usize,
    pub escaped: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeReport {
    pub n: u32,
    pub theta2: String,
    pub k_min: i64,
    pub k_max: i64,
    /// Escape fraction of the n = 0 family, the paper's statement.
    pub n0_fraction: f64,
    pub families: Vec<FamilyEscape>,
}

/// For each lattice center `p = (θ₂+n)/N + k`, test whether its image under
/// the covering map still lies on the momentum lattice. The headline
/// fraction is the `n = 0` family; the per-band table is reported without
/// asserting anything beyond it.
pub fn escape_check(n: u32, theta2: Rat, k_min: i64, k_max: i64) -> EscapeReport {
    let mut families = Vec::new();
    for band in 0..n {
        let mut escaped = 0usize;
        let mut total = 0usize;
        for k in k_min..=k_max {
            total += 1;
            let image = momentum_center_image(n, theta2, band, k);
            if !on_momentum_lattice(n, theta2, image) {
                escaped += 1;
            }
        }
        families.push(FamilyEscape {
            band,
            total,
            escaped,
            fraction: escaped as f64 / total.max(1) as f64,
        });
    }
    EscapeReport {
        n,
        theta2: crate::rational::rat_to_string(theta2),
        k_min,
        k_max,
        n0_fraction: families.first().map(|f| f.fraction).unwrap_or(0.0),
        families,
    }
}
