//! Dirac-comb states and the operator calculus that is closed over them.
//!
//! A term is one quasi-periodic δ-comb
//!
//! ```text
//!   A · Σ_k e^{2πi·φ·k} δ(x − x₀ − P·k)
//! ```
//!
//! with exact rational spacing `P`, anchor `x₀ ∈ [0, P)` and step phase
//! `φ ∈ [0, 1)` (turns of phase per lattice step). A [`CombState`] is a finite
//! sum of terms in one representation (position or momentum), kept in a
//! canonical form: terms are atomized on the common support lattice, merged,
//! pruned, and re-grouped into the coarsest comb decomposition. Two states
//! describe the same distribution iff their canonical term lists agree.
//!
//! The operators implemented here are everything the baker propagator
//! `F = S(L + e^{−ix̂/ħ}R)(E_p + e^{−ip̂/2ħ}O_p)` is built from:
//! multiplication phases `e^{2πi·a·x}`, lattice translations, the dyadic
//! squeeze `S`, half-open indicator windows in x and p, and the exact
//! Poisson-summation Fourier transform between the two representations.

use crate::amplitude::{unit_phase, Amplitude};
use crate::error::{BakerError, Result};
use crate::params::ModelParams;
use crate::rational::{divisors, mod_one, rat, rat_gcd, rat_mod, Rat};
use num_complex::Complex64;
use num_traits::Signed;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rep {
    Position,
    Momentum,
}

impl Rep {
    fn dual(self) -> Rep {
        match self {
            Rep::Position => Rep::Momentum,
            Rep::Momentum => Rep::Position,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rep::Position => "x",
            Rep::Momentum => "p",
        }
    }
}

/// One elementary δ-comb. The point at `offset + spacing·k` carries the
/// weight `amp · e^{2πi·step_phase·k}`.
#[derive(Clone, Copy, Debug)]
pub struct Comb {
    pub spacing: Rat,
    pub offset: Rat,
    pub step_phase: Rat,
    pub amp: Amplitude,
}

impl Comb {
    pub fn new(spacing: Rat, offset: Rat, step_phase: Rat, amp: Amplitude) -> Self {
        assert!(spacing.is_positive(), "comb spacing must be positive");
        Self {
            spacing,
            offset: rat_mod(offset, spacing),
            step_phase: mod_one(step_phase),
            amp,
        }
    }

    fn geometry(&self) -> (Rat, Rat, Rat) {
        (self.spacing, self.offset, self.step_phase)
    }

    /// Pointwise weight at lattice index `k`.
    pub fn weight_at(&self, k: i64) -> Complex64 {
        self.amp.value() * unit_phase(self.step_phase * Rat::from_integer(k))
    }
}

/// A finite sum of combs in one representation, in canonical form.
#[derive(Clone, Debug)]
pub struct CombState {
    params: ModelParams,
    rep: Rep,
    terms: Vec<Comb>,
}

/// Half-open window `[lo, hi)` used by the indicator operators.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    pub lo: Rat,
    pub hi: Rat,
}

impl Window {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo < hi, "empty window");
        Self { lo, hi }
    }

    fn contains(&self, x: Rat) -> bool {
        self.lo <= x && x < self.hi
    }
}

/// The left half `[0, 1/2)` of the unit cell.
pub fn window_l() -> Window {
    Window::new(rat(0, 1), rat(1, 2))
}

/// The right half `[1/2, 1)` of the unit cell.
pub fn window_r() -> Window {
    Window::new(rat(1, 2), rat(1, 1))
}

/// Even momentum cells `[0, 1) mod 2`.
pub fn window_ep() -> Window {
    Window::new(rat(0, 1), rat(1, 1))
}

/// Odd momentum cells `[1, 2) mod 2`.
pub fn window_op() -> Window {
    Window::new(rat(1, 1), rat(2, 1))
}

impl CombState {
    pub fn empty(params: ModelParams, rep: Rep) -> Self {
        Self { params, rep, terms: Vec::new() }
    }

    /// Build a state from raw terms; the result is canonicalized.
    pub fn from_terms(params: ModelParams, rep: Rep, terms: Vec<Comb>) -> Self {
        let terms = canonical_terms(&params, terms);
        Self { params, rep, terms }
    }

    pub fn single(params: ModelParams, rep: Rep, comb: Comb) -> Self {
        Self::from_terms(params, rep, vec![comb])
    }

    /// Internal constructor for operators that map canonical term lists to
    /// canonical term lists one term at a time (translations, phases,
    /// dilations, uniform scalings): geometry stays pairwise distinct and
    /// complete progressions map to complete progressions, so only ordering
    /// and pruning need refreshing.
    fn from_mapped_terms(params: ModelParams, rep: Rep, mut terms: Vec<Comb>) -> Self {
        terms.retain(|t| !t.amp.is_zero() && t.amp.abs() >= params.amp_epsilon);
        terms.sort_by_key(|t| t.geometry());
        Self { params, rep, terms }
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn terms(&self) -> &[Comb] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-run canonicalization (a no-op on already canonical states).
    pub fn canonicalize(&self) -> Self {
        Self::from_terms(self.params, self.rep, self.terms.clone())
    }

    fn ensure_rep(&self, expected: Rep) -> Result<()> {
        if self.rep != expected {
            return Err(BakerError::RepMismatch { expected, got: self.rep });
        }
        Ok(())
    }

    fn ensure_same(&self, other: &CombState) -> Result<()> {
        if self.rep != other.rep {
            return Err(BakerError::MixedRep);
        }
        if self.params.n != other.params.n {
            return Err(BakerError::ParamsMismatch(self.params.n, other.params.n));
        }
        Ok(())
    }

    /// Multiply by `e^{2πi·a·x}` (position representation only).
    ///
    /// Each term keeps its support; the anchor picks up the phase
    /// `e^{2πi·a·x₀}` and the step phase advances by `a·P` per lattice step.
    pub fn phase_mult(&self, a: Rat) -> Result<CombState> {
        self.ensure_rep(Rep::Position)?;
        let terms = self
            .terms
            .iter()
            .map(|t| Comb {
                spacing: t.spacing,
                offset: t.offset,
                step_phase: mod_one(t.step_phase + a * t.spacing),
                amp: t.amp.rotate(a * t.offset),
            })
            .collect();
        Ok(Self::from_mapped_terms(self.params, self.rep, terms))
    }

    /// Shift every support point by `a`: `x ↦ x + a` (position rep only).
    ///
    /// Re-anchoring into `[0, P)` shifts the lattice index by
    /// `j = ⌊(x₀ + a)/P⌋`, so the amplitude picks up `e^{−2πi·φ·j}` to keep
    /// the pointwise values identical.
    pub fn translate(&self, a: Rat) -> Result<CombState> {
        self.ensure_rep(Rep::Position)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let shifted = t.offset + a;
                let j = (shifted / t.spacing).floor().to_integer();
                Comb {
                    spacing: t.spacing,
                    offset: shifted - t.spacing * Rat::from_integer(j),
                    step_phase: t.step_phase,
                    amp: t.amp.rotate(-t.step_phase * Rat::from_integer(j)),
                }
            })
            .collect();
        Ok(Self::from_mapped_terms(self.params, self.rep, terms))
    }

    /// The stretching operator `S` with `S†x̂S = 2x̂`: support maps `x ↦ 2x`
    /// and each amplitude is scaled by √2, the constant that makes `S`
    /// unitary for the fiber kernel form.
    pub fn squeeze(&self) -> CombState {
        let terms = self
            .terms
            .iter()
            .map(|t| Comb {
                spacing: t.spacing * 2,
                offset: t.offset * 2,
                step_phase: t.step_phase,
                amp: t.amp.mul_root(rat(2, 1)),
            })
            .collect();
        Self::from_mapped_terms(self.params, self.rep, terms)
    }

    /// Inverse of [`CombState::squeeze`].
    pub fn unsqueeze(&self) -> CombState {
        let terms = self
            .terms
            .iter()
            .map(|t| Comb {
                spacing: t.spacing / 2,
                offset: t.offset / 2,
                step_phase: t.step_phase,
                amp: t.amp.mul_root(rat(1, 2)),
            })
            .collect();
        Self::from_mapped_terms(self.params, self.rep, terms)
    }

    /// Keep only support points with `x mod modulus ∈ window`.
    ///
    /// Every term splits into `M = denom(P/modulus)` sub-combs of spacing
    /// `M·P`, one per residue class; classes outside the window are dropped.
    /// Amplitudes are preserved pointwise.
    pub fn indicator_x(&self, window: Window, modulus: Rat) -> Result<CombState> {
        self.ensure_rep(Rep::Position)?;
        Ok(self.indicator_raw(window, modulus))
    }

    #[doc(hidden)]
    pub fn indicator_x_unchecked_for_debug(&self, window: Window, modulus: Rat) -> CombState {
        self.indicator_raw(window, modulus)
    }

    fn indicator_raw(&self, window: Window, modulus: Rat) -> CombState {
        assert!(modulus.is_positive());
        assert!(
            !window.lo.is_negative() && window.hi <= modulus,
            "window must be contained in [0, modulus)"
        );
        let mut terms = Vec::new();
        for t in &self.terms {
            let m = *(t.spacing / modulus).denom();
            for j in 0..m {
                let sub_offset = t.offset + t.spacing * Rat::from_integer(j);
                if window.contains(rat_mod(sub_offset, modulus)) {
                    terms.push(Comb {
                        spacing: t.spacing * Rat::from_integer(m),
                        offset: sub_offset,
                        step_phase: mod_one(t.step_phase * Rat::from_integer(m)),
                        amp: t.amp.rotate(t.step_phase * Rat::from_integer(j)),
                    });
                }
            }
        }
        Self::from_terms(self.params, self.rep, terms)
    }

    /// Exact Poisson-summation Fourier transform, toggling the
    /// representation. With `⟨x|p⟩ = √N e^{2πiNpx}` a single comb maps to a
    /// single comb in the dual variable:
    ///
    /// ```text
    ///   (P, x₀, φ, A) ↦ (1/(NP), φ/(NP), −x₀/P mod 1, A·(√N·P)⁻¹·e^{−2πi·φ·x₀/P})
    /// ```
    ///
    /// Applying it twice is the parity `x ↦ −x`; four times is the exact
    /// identity on terms.
    pub fn fourier(&self) -> CombState {
        let n = Rat::from_integer(self.params.n as i64);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let q = rat(1, 1) / (n * t.spacing);
                Comb {
                    spacing: q,
                    offset: t.step_phase * q,
                    step_phase: mod_one(-(t.offset / t.spacing)),
                    amp: t
                        .amp
                        .mul_rat(rat(1, 1) / t.spacing)
                        .mul_root(rat(1, 1) / n)
                        .rotate(-(t.step_phase * t.offset / t.spacing)),
                }
            })
            .collect();
        Self::from_terms(self.params, self.rep.dual(), terms)
    }

    /// Inverse of [`CombState::fourier`] (exact on terms).
    pub fn inverse_fourier(&self) -> CombState {
        let n = Rat::from_integer(self.params.n as i64);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let p = rat(1, 1) / (n * t.spacing);
                let offset = mod_one(-t.step_phase) * p;
                let step_phase = t.offset / t.spacing;
                Comb {
                    spacing: p,
                    offset,
                    step_phase,
                    amp: t
                        .amp
                        .mul_rat(p)
                        .mul_root(n)
                        .rotate(step_phase * offset / p),
                }
            })
            .collect();
        Self::from_terms(self.params, self.rep.dual(), terms)
    }

    /// Position representation of this state (identity if already there).
    pub fn to_position(&self) -> CombState {
        match self.rep {
            Rep::Position => self.clone(),
            Rep::Momentum => self.inverse_fourier(),
        }
    }

    /// Restrict momentum support to `window mod 2` (position rep in and out):
    /// transform, select residues, transform back.
    pub fn indicator_p(&self, window: Window) -> Result<CombState> {
        self.ensure_rep(Rep::Position)?;
        let selected = self.fourier().indicator_raw(window, rat(2, 1));
        Ok(selected.inverse_fourier())
    }

    /// `L`: keep `x mod 1 ∈ [0, 1/2)`.
    pub fn left(&self) -> Result<CombState> {
        self.indicator_x(window_l(), rat(1, 1))
    }

    /// `R`: keep `x mod 1 ∈ [1/2, 1)`.
    pub fn right(&self) -> Result<CombState> {
        self.indicator_x(window_r(), rat(1, 1))
    }

    /// `E_p`: keep `p mod 2 ∈ [0, 1)`.
    pub fn even_p(&self) -> Result<CombState> {
        self.indicator_p(window_ep())
    }

    /// `O_p`: keep `p mod 2 ∈ [1, 2)`.
    pub fn odd_p(&self) -> Result<CombState> {
        self.indicator_p(window_op())
    }

    pub fn add(&self, other: &CombState) -> Result<CombState> {
        self.ensure_same(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        Ok(Self::from_terms(self.params, self.rep, terms))
    }

    pub fn sub(&self, other: &CombState) -> Result<CombState> {
        self.add(&other.scale(Amplitude::one().neg()))
    }

    pub fn scale(&self, factor: Amplitude) -> CombState {
        let terms = self
            .terms
            .iter()
            .map(|t| Comb { amp: t.amp.mul(factor), ..*t })
            .collect();
        Self::from_mapped_terms(self.params, self.rep, terms)
    }

    /// Multiply by the global phase `e^{2πi·t}` exactly.
    pub fn rotate(&self, turns: Rat) -> CombState {
        let terms = self
            .terms
            .iter()
            .map(|t| Comb { amp: t.amp.rotate(turns), ..*t })
            .collect();
        Self::from_mapped_terms(self.params, self.rep, terms)
    }

    /// All support points in `[lo, hi)` with their summed weights, merged by
    /// exact position.
    pub fn points_in(&self, lo: Rat, hi: Rat) -> Vec<(Rat, Complex64)> {
        let mut map: BTreeMap<Rat, Complex64> = BTreeMap::new();
        for t in &self.terms {
            let k_min = ((lo - t.offset) / t.spacing).ceil().to_integer();
            // largest k with offset + k·P < hi
            let k_end = ((hi - t.offset) / t.spacing).ceil().to_integer();
            for k in k_min..k_end {
                let x = t.offset + t.spacing * Rat::from_integer(k);
                if x < lo || x >= hi {
                    continue;
                }
                *map.entry(x).or_insert(Complex64::ZERO) += t.weight_at(k);
            }
        }
        map.into_iter().collect()
    }

    /// Term lists identical including the exact amplitude representation.
    pub fn exact_eq(&self, other: &CombState) -> bool {
        self.rep == other.rep
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| a.geometry() == b.geometry() && a.amp.exact_eq(&b.amp))
    }

    /// Largest pointwise amplitude difference over matched geometries;
    /// `None` if the geometries differ.
    pub fn term_amp_distance(&self, other: &CombState) -> Option<f64> {
        if self.rep != other.rep || self.terms.len() != other.terms.len() {
            return None;
        }
        let mut max = 0.0f64;
        for (a, b) in self.terms.iter().zip(&other.terms) {
            if a.geometry() != b.geometry() {
                return None;
            }
            max = max.max((a.amp.value() - b.amp.value()).norm());
        }
        Some(max)
    }
}

/// Canonical form: atomize all terms as pure exponentials on the common
/// support lattice, merge and prune, then re-group complete progressions into
/// the coarsest comb terms. The output depends only on the distribution the
/// input represents.
fn canonical_terms(params: &ModelParams, terms: Vec<Comb>) -> Vec<Comb> {
    let terms: Vec<Comb> = terms.into_iter().filter(|t| !t.amp.is_zero()).collect();
    if terms.is_empty() {
        return Vec::new();
    }

    // Common lattice: gcd of all spacings and anchor differences.
    let mut p_star = terms[0].spacing;
    for t in &terms[1..] {
        p_star = rat_gcd(p_star, t.spacing);
        p_star = rat_gcd(p_star, t.offset - terms[0].offset);
    }
    let anchor = rat_mod(terms[0].offset, p_star);

    // Expand every term into pure exponentials e^{2πi·ρ·k} on the lattice
    // anchor + p_star·ℤ.
    let mut atoms: BTreeMap<Rat, Amplitude> = BTreeMap::new();
    for t in &terms {
        let m = (t.spacing / p_star).to_integer();
        debug_assert!((t.spacing / p_star).is_integer() && m >= 1);
        let k = ((t.offset - anchor) / p_star).to_integer();
        let m_rat = Rat::from_integer(m);
        for j in 0..m {
            let rho = (t.step_phase + Rat::from_integer(j)) / m_rat;
            let contrib = t
                .amp
                .mul_rat(rat(1, m))
                .rotate(-(rho * Rat::from_integer(k)));
            match atoms.entry(rho) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = e.get().add(contrib);
                    *e.get_mut() = sum;
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(contrib);
                }
            }
        }
    }
    atoms.retain(|_, a| !a.is_zero() && a.abs() >= params.amp_epsilon);
    if atoms.is_empty() {
        return Vec::new();
    }

    // Re-synthesize sparse combs: a complete progression {(φ+j)/M} whose
    // coefficients follow c_j = (A/M)·e^{−2πi·ρ_j·k₀} is one comb of spacing
    // M·p_star anchored k₀ lattice steps in. Larger M first keeps the
    // decomposition coarsest.
    let d_all = atoms.keys().fold(1i64, |acc, rho| {
        let d = *rho.denom();
        acc / crate::rational::gcd_i64(acc, d) * d
    });
    let mut out: Vec<Comb> = Vec::new();
    for m in divisors(d_all).into_iter().rev() {
        if m < 2 || (m as usize) > atoms.len() {
            continue;
        }
        let mut groups: BTreeMap<Rat, Vec<Rat>> = BTreeMap::new();
        for rho in atoms.keys() {
            groups
                .entry(mod_one(*rho * Rat::from_integer(m)))
                .or_default()
                .push(*rho);
        }
        for (phi, rhos) in groups {
            if rhos.len() != m as usize {
                continue;
            }
            if let Some((k0, amp)) = extract_family(&atoms, &rhos, m) {
                if !amp.is_zero() && amp.abs() >= params.amp_epsilon {
                    out.push(Comb {
                        spacing: p_star * Rat::from_integer(m),
                        offset: anchor + p_star * Rat::from_integer(k0),
                        step_phase: phi,
                        amp,
                    });
                }
                for rho in &rhos {
                    atoms.remove(rho);
                }
            }
        }
    }
    for (rho, amp) in atoms {
        out.push(Comb { spacing: p_star, offset: anchor, step_phase: rho, amp });
    }

    out.retain(|t| t.amp.abs() >= params.amp_epsilon);
    out.sort_by_key(|t| t.geometry());
    out
}

/// Check whether the atoms at the complete progression `rhos` carry the
/// coefficient pattern of a single comb, and if so return `(k₀, amplitude)`.
fn extract_family(
    atoms: &BTreeMap<Rat, Amplitude>,
    rhos: &[Rat],
    m: i64,
) -> Option<(i64, Amplitude)> {
    // Exact route: constant q-ratio 1 and constant turn step between
    // consecutive atoms.
    let mut delta: Option<Rat> = None;
    let mut exact = true;
    for w in rhos.windows(2) {
        match atoms[&w[1]].exact_ratio(&atoms[&w[0]]) {
            Some((qr, dt)) if qr == rat(1, 1) => match delta {
                None => delta = Some(dt),
                Some(d) if d == dt => {}
                _ => {
                    exact = false;
                    break;
                }
            },
            _ => {
                exact = false;
                break;
            }
        }
    }
    if exact {
        let delta = delta.expect("progressions have at least two atoms");
        let k0_rat = mod_one(-delta) * Rat::from_integer(m);
        if k0_rat.is_integer() {
            let k0 = k0_rat.to_integer() % m;
            let amp = atoms[&rhos[0]]
                .mul_rat(Rat::from_integer(m))
                .rotate(rhos[0] * Rat::from_integer(k0));
            return Some((k0, amp));
        }
        return None;
    }

    // Float route, kept tight so canonicalization never moves the
    // distribution by more than rounding noise.
    const REL_TOL: f64 = 5e-13;
    let vals: Vec<Complex64> = rhos.iter().map(|r| atoms[r].value()).collect();
    let v0 = vals[0];
    if v0.norm() == 0.0 {
        return None;
    }
    let ratio = vals[1] / v0;
    if (ratio.norm() - 1.0).abs() > REL_TOL {
        return None;
    }
    let k0 = (-(ratio.arg()) / (2.0 * std::f64::consts::PI) * m as f64).round() as i64;
    let k0 = k0.rem_euclid(m);
    let a_val = v0 * m as f64 * unit_phase(rhos[0] * Rat::from_integer(k0));
    let scale = a_val.norm();
    for (rho, v) in rhos.iter().zip(&vals) {
        let recon = v * m as f64 * unit_phase(*rho * Rat::from_integer(k0));
        if (recon - a_val).norm() > REL_TOL * scale {
            return None;
        }
    }
    Some((k0, Amplitude::from_complex(a_val)))
}
