//! Eigenvalues of small dense complex matrices: Householder reduction to
//! Hessenberg form followed by the shifted QR iteration with Givens
//! rotations. Sized for the unitary propagator matrices this crate emits.

use crate::propagator::UnitaryMatrix;
use num_complex::Complex64;

pub fn eigenvalues(m: &UnitaryMatrix) -> Vec<Complex64> {
    let n = m.dim();
    if n == 0 {
        return Vec::new();
    }
    let mut h: Vec<Vec<Complex64>> =
        (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    hessenberg(&mut h);
    qr_eigenvalues(h)
}

#[allow(clippy::needless_range_loop)]
fn hessenberg(a: &mut [Vec<Complex64>]) {
    let n = a.len();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[i][k]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let alpha = if v[0] == Complex64::ZERO {
            Complex64::new(-xnorm, 0.0)
        } else {
            -(v[0] / v[0].norm()) * xnorm
        };
        v[0] -= alpha;
        let vnorm_sq = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vnorm_sq == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sq;
        // left: A ← (I − βvv†) A on rows k+1..n
        for j in k..n {
            let mut s = Complex64::ZERO;
            for (idx, vi) in v.iter().enumerate() {
                s += vi.conj() * a[k + 1 + idx][j];
            }
            s *= beta;
            for (idx, vi) in v.iter().enumerate() {
                a[k + 1 + idx][j] -= vi * s;
            }
        }
        // right: A ← A (I − βvv†) on columns k+1..n
        for row in a.iter_mut().take(n) {
            let mut s = Complex64::ZERO;
            for (idx, vi) in v.iter().enumerate() {
                s += row[k + 1 + idx] * vi;
            }
            s *= beta;
            for (idx, vi) in v.iter().enumerate() {
                row[k + 1 + idx] -= s * vi.conj();
            }
        }
        for i in k + 2..n {
            a[i][k] = Complex64::ZERO;
        }
        a[k + 1][k] = alpha;
    }
}

/// Complex Givens pair `(c, s)` with real `c ≥ 0` and `c² + |s|² = 1` such
/// that `[c s; −s̄ c]·[f g]ᵀ` has zero second component.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g == Complex64::ZERO {
        return (1.0, Complex64::ZERO);
    }
    if f == Complex64::ZERO {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let t = g / f;
    let c = 1.0 / (1.0 + t.norm_sqr()).sqrt();
    (c, t.conj() * c)
}

#[allow(clippy::needless_range_loop)]
fn qr_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let n = h.len();
    let mut eigs = vec![Complex64::ZERO; n];
    let mut hi = n - 1;
    let mut iters_left = 200 * n.max(1);
    loop {
        // deflate converged subdiagonals
        for i in 1..=hi {
            let scale = h[i - 1][i - 1].norm() + h[i][i].norm();
            if h[i][i - 1].norm() <= f64::EPSILON * scale {
                h[i][i - 1] = Complex64::ZERO;
            }
        }
        if hi == 0 || h[hi][hi - 1] == Complex64::ZERO {
            eigs[hi] = h[hi][hi];
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        let mut lo = hi;
        while lo > 0 && h[lo][lo - 1] != Complex64::ZERO {
            lo -= 1;
        }
        iters_left -= 1;
        assert!(iters_left > 0, "QR iteration failed to converge");

        // Wilkinson shift from the trailing 2×2 block
        let a = h[hi - 1][hi - 1];
        let b = h[hi - 1][hi];
        let c = h[hi][hi - 1];
        let d = h[hi][hi];
        let tr = a + d;
        let det = a * d - b * c;
        let disc = (tr * tr * 0.25 - det).sqrt();
        let mu1 = tr * 0.5 + disc;
        let mu2 = tr * 0.5 - disc;
        let mu = if (mu1 - d).norm() <= (mu2 - d).norm() { mu1 } else { mu2 };

        for i in lo..=hi {
            h[i][i] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (cc, ss) = givens(h[i][i], h[i + 1][i]);
            for j in i..=hi {
                let x = h[i][j];
                let y = h[i + 1][j];
                h[i][j] = cc * x + ss * y;
                h[i + 1][j] = -ss.conj() * x + cc * y;
            }
            rotations.push((i, cc, ss));
        }
        for (i, cc, ss) in rotations {
            for r in lo..=(i + 1).min(hi) {
                let x = h[r][i];
                let y = h[r][i + 1];
                h[r][i] = cc * x + ss.conj() * y;
                h[r][i + 1] = -ss * x + cc * y;
            }
        }
        for i in lo..=hi {
            h[i][i] += mu;
        }
    }
    eigs
}
