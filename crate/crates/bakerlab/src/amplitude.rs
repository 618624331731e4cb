//! Exact comb amplitudes.
//!
//! Every scalar that the comb operators multiply into an amplitude is of the
//! form `q·√r·e^{2πi·t}` with `q, r, t` rational: basis normalizations 1/√N,
//! the Poisson constant 1/(√N·P) of the comb Fourier transform, the squeeze
//! constant √2, and unit phases with a rational number of turns. An
//! [`Amplitude`] keeps those factors exact next to an ordinary complex
//! coefficient, so operator identities that hold term-by-term (eigenvalue
//! relations, the fourfold Fourier identity, partition-of-unity reassembly)
//! come out bit-exact instead of merely close. The float coefficient only
//! changes when two amplitudes with incompatible exact parts are genuinely
//! summed.

use crate::rational::{mod_one, rat, Rat};
use num_complex::Complex64;
use num_traits::{Signed, Zero};

/// `coeff · q · √root · e^{2πi·turns}` with `q > 0`, `root > 0`, `turns ∈ [0,1)`.
///
/// The zero amplitude is represented canonically by `q = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude {
    coeff: Complex64,
    q: Rat,
    root: Rat,
    turns: Rat,
}

/// `e^{2πi·t}` with the quarter turns evaluated exactly.
pub fn unit_phase(t: Rat) -> Complex64 {
    let t = mod_one(t);
    match (*t.numer(), *t.denom()) {
        (0, 1) => Complex64::new(1.0, 0.0),
        (1, 4) => Complex64::new(0.0, 1.0),
        (1, 2) => Complex64::new(-1.0, 0.0),
        (3, 4) => Complex64::new(0.0, -1.0),
        _ => {
            let a = 2.0 * std::f64::consts::PI * (*t.numer() as f64 / *t.denom() as f64);
            Complex64::new(a.cos(), a.sin())
        }
    }
}

/// Pull perfect-square factors out of `n`, returning `(square_root, rest)`
/// with `n = square_root² · rest` and `rest` squarefree.
fn extract_square(n: i64) -> (i64, i64) {
    debug_assert!(n > 0);
    let mut rest = n;
    let mut root = 1i64;
    let mut d = 2i64;
    while d * d <= rest {
        while rest % (d * d) == 0 {
            rest /= d * d;
            root *= d;
        }
        d += 1;
    }
    (root, rest)
}

#[allow(clippy::should_implement_trait)]
impl Amplitude {
    pub fn zero() -> Self {
        Self { coeff: Complex64::ZERO, q: Rat::zero(), root: rat(1, 1), turns: Rat::zero() }
    }

    pub fn one() -> Self {
        Self { coeff: Complex64::new(1.0, 0.0), q: rat(1, 1), root: rat(1, 1), turns: Rat::zero() }
    }

    /// Exact rational amplitude (sign folded into a half turn).
    pub fn from_rat(q: Rat) -> Self {
        Self::one().mul_rat(q)
    }

    /// Plain complex amplitude with trivial exact part.
    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::ZERO {
            return Self::zero();
        }
        Self { coeff: z, q: rat(1, 1), root: rat(1, 1), turns: Rat::zero() }
    }

    /// `q·√r·e^{2πi·t}` with unit coefficient.
    pub fn exact(q: Rat, root: Rat, turns: Rat) -> Self {
        assert!(root.is_positive(), "root factor must be positive");
        Self::one().mul_rat(q).mul_root(root).rotate(turns)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero() || self.coeff == Complex64::ZERO
    }

    /// Multiply by an exact rational factor.
    pub fn mul_rat(mut self, c: Rat) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_negative() {
            self.turns = mod_one(self.turns + rat(1, 2));
        }
        self.q *= c.abs();
        self
    }

    /// Multiply by `√r` for rational `r > 0`.
    pub fn mul_root(mut self, r: Rat) -> Self {
        assert!(r.is_positive(), "root factor must be positive");
        if self.is_zero() {
            return Self::zero();
        }
        self.root *= r;
        let (sn, rn) = extract_square(*self.root.numer());
        let (sd, rd) = extract_square(*self.root.denom());
        self.q *= Rat::new(sn, sd);
        self.root = Rat::new(rn, rd);
        self
    }

    /// Multiply by `e^{2πi·t}` exactly.
    pub fn rotate(mut self, t: Rat) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.turns = mod_one(self.turns + t);
        self
    }

    /// Multiply by an arbitrary complex factor (degrades exactness).
    pub fn mul_complex(mut self, z: Complex64) -> Self {
        if self.is_zero() || z == Complex64::ZERO {
            return Self::zero();
        }
        self.coeff *= z;
        self
    }

    pub fn mul(self, other: Amplitude) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        self.mul_complex(other.coeff)
            .mul_rat(other.q)
            .mul_root(other.root)
            .rotate(other.turns)
    }

    pub fn neg(self) -> Self {
        self.rotate(rat(1, 2))
    }

    pub fn conj(mut self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.coeff = self.coeff.conj();
        self.turns = mod_one(-self.turns);
        self
    }

    /// Sum, staying exact whenever the two exact parts are compatible:
    /// identical `(coeff, root, turns)` add on `q`; a half-turn offset
    /// subtracts on `q`; anything else falls back to complex floats.
    pub fn add(self, other: Amplitude) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        if self.coeff == other.coeff && self.root == other.root {
            let delta = mod_one(other.turns - self.turns);
            if delta.is_zero() {
                let q = self.q + other.q;
                return Self { coeff: self.coeff, q, root: self.root, turns: self.turns }
                    .normalized();
            }
            if delta == rat(1, 2) {
                let q = self.q - other.q;
                if q.is_zero() {
                    return Self::zero();
                }
                let mut out = Self { coeff: self.coeff, q, root: self.root, turns: self.turns };
                if out.q.is_negative() {
                    out.q = -out.q;
                    out.turns = mod_one(out.turns + rat(1, 2));
                }
                return out;
            }
        }
        Self::from_complex(self.value() + other.value())
    }

    fn normalized(mut self) -> Self {
        if self.q.is_zero() {
            return Self::zero();
        }
        if self.q.is_negative() {
            self.q = -self.q;
            self.turns = mod_one(self.turns + rat(1, 2));
        }
        self
    }

    pub fn value(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::ZERO;
        }
        let scale = (*self.q.numer() as f64 / *self.q.denom() as f64)
            * (*self.root.numer() as f64 / *self.root.denom() as f64).sqrt();
        self.coeff * scale * unit_phase(self.turns)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }

    /// Bitwise equality of the full representation (used by the exact
    /// term-level tests).
    pub fn exact_eq(&self, other: &Amplitude) -> bool {
        if self.is_zero() && other.is_zero() {
            return true;
        }
        self.coeff == other.coeff
            && self.q == other.q
            && self.root == other.root
            && self.turns == other.turns
    }

    /// Exact ratio against `other` when both have bit-equal coefficients and
    /// equal root parts: returns `(q_ratio, turn_difference)`.
    pub fn exact_ratio(&self, other: &Amplitude) -> Option<(Rat, Rat)> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        if self.coeff == other.coeff && self.root == other.root {
            Some((self.q / other.q, mod_one(self.turns - other.turns)))
        } else {
            None
        }
    }
}
