//! Kazhdan constants for the regular representation: closed forms for the
//! rank-one deformation families, rescaled Chebyshev bounds, and numerical
//! validation through truncated convolution operators.

use crate::error::{Error, Result};
use crate::metric::fmt_sig;
use crate::qarith::{qnum, QContext};

/// The two rank-one families with banded regular representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Su,
    So,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "su" => Some(Family::Su),
            "so" => Some(Family::So),
            _ => None,
        }
    }

    /// Dimension of the m-th generator.
    pub fn dim(&self, m: u32, ctx: &QContext) -> f64 {
        match self {
            Family::Su => qnum(m as f64 + 1.0, ctx),
            Family::So => qnum(2.0 * m as f64 + 1.0, ctx),
        }
    }

    /// Classical dimension, which is also the spectral radius of the full
    /// convolution operator of the m-th generator.
    pub fn classical_dim(&self, m: u32) -> f64 {
        match self {
            Family::Su => m as f64 + 1.0,
            Family::So => 2.0 * m as f64 + 1.0,
        }
    }
}

/// Rescaled Chebyshev polynomial of the second kind:
/// `P_0 = 1`, `P_1(x) = x`, `x P_n = P_{n+1} + P_{n-1}`.
/// On `[-2, 2]` it is bounded by `m + 1`, attained at `x = 2`.
pub fn chebyshev_p(m: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = x;
    for _ in 1..m {
        (prev, cur) = (cur, x * cur - prev);
    }
    cur
}

/// Uniform Kazhdan constant of the regular representation:
/// `1 - 2/[2]_q` for the SU family and `1 - 3/[3]_q` for the SO family
/// (zero at `q = 1`).
pub fn kazhdan_closed_form(family: Family, q: f64) -> Result<f64> {
    kazhdan_generator_bound(family, 1, q)
}

/// Spectral lower bound contributed by the m-th generator:
/// `1 - (m+1)/[m+1]_q` (SU) or `1 - (2m+1)/[2m+1]_q` (SO).
/// Strictly increasing in `m` for fixed `q < 1`.
pub fn kazhdan_generator_bound(family: Family, m: u32, q: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("the trivial generator bounds nothing".into()));
    }
    let ctx = QContext::new(q)?;
    Ok(1.0 - family.classical_dim(m) / family.dim(m, &ctx))
}

/// Symmetric banded truncation of the right convolution operator of the
/// m-th generator, on the span of the first `n` basis vectors.
///
/// The 0/1 band pattern comes from the fusion coefficients: for the SU family
/// entry `(i, j)` is set when `|i-j| <= m`, `i+j >= m` and `i+j-m` is even;
/// the SO family drops the parity constraint.
#[derive(Debug, Clone)]
pub struct TruncatedRegularOp {
    pub family: Family,
    pub generator: u32,
    pub n: usize,
    bandwidth: usize,
}

impl TruncatedRegularOp {
    pub fn new(family: Family, generator: u32, n: usize) -> Result<Self> {
        if generator == 0 {
            return Err(Error::Domain("the unit generates nothing".into()));
        }
        if n < 10 {
            return Err(Error::Domain(format!("truncation size {n} is too small")));
        }
        Ok(Self {
            family,
            generator,
            n,
            bandwidth: generator as usize,
        })
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let m = self.generator as usize;
        let within = i.abs_diff(j) <= m && i + j >= m;
        let set = match self.family {
            Family::Su => within && (i + j - m) % 2 == 0,
            Family::So => within,
        };
        if set {
            1.0
        } else {
            0.0
        }
    }

    /// Number of eigenvalues strictly below `s`: negative pivots of the
    /// banded LDL^T factorisation of `T - s I` (zero pivots are nudged,
    /// the usual spectrum-slicing safeguard).
    fn eigenvalues_below(&self, s: f64) -> usize {
        let n = self.n;
        let w = self.bandwidth;
        // Lower band of A = T - s I: band[r][j] = A[j + r][j], plus the
        // diagonal D of the factorisation in place of band[0].
        let mut band = vec![vec![0.0f64; n]; w + 1];
        for j in 0..n {
            for r in 0..=w {
                if j + r < n {
                    let t = self.entry(j + r, j);
                    band[r][j] = if r == 0 { t - s } else { t };
                }
            }
        }
        let tiny = 1e-300;
        let mut negatives = 0;
        // Row i of L is built against the pivots d_k for k in the band.
        // l[r][j] holds L[j + r][j].
        let mut l = vec![vec![0.0f64; n]; w + 1];
        for j in 0..n {
            let mut d = band[0][j];
            for k in j.saturating_sub(w)..j {
                d -= l[j - k][k] * l[j - k][k] * band[0][k];
            }
            if d == 0.0 {
                d = tiny;
            }
            band[0][j] = d;
            if d < 0.0 {
                negatives += 1;
            }
            for i in j + 1..(j + w + 1).min(n) {
                let mut sum = band[i - j][j];
                for k in i.saturating_sub(w)..j {
                    if j - k <= w && i - k <= w {
                        sum -= l[i - k][k] * l[j - k][k] * band[0][k];
                    }
                }
                l[i - j][j] = sum / d;
            }
        }
        negatives
    }

    /// Gershgorin bound on the truncated spectrum.
    fn norm_bound(&self) -> f64 {
        self.family.classical_dim(self.generator)
    }

    /// Largest eigenvalue of the truncation, located by spectrum-slicing
    /// bisection to machine precision.
    pub fn top_eigenvalue(&self) -> f64 {
        let bound = self.norm_bound();
        let n = self.n;
        let mut lo = -bound - 1.0;
        let mut hi = bound + 1.0;
        // Invariant: some eigenvalue >= lo, none >= hi.
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.eigenvalues_below(mid) == n {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-13 * bound.max(1.0) {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Smallest singular value of `T - shift I`, i.e. the distance from the
    /// truncated spectrum to `shift`.
    pub fn min_singular_shifted(&self, shift: f64) -> Result<f64> {
        let n = self.n;
        let below = self.eigenvalues_below(shift);
        let bound = self.norm_bound();
        let mut dist = f64::INFINITY;
        if below > 0 {
            // Largest eigenvalue under the shift: where the count reaches `below`.
            let (mut lo, mut hi) = (-bound - 1.0, shift);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if self.eigenvalues_below(mid) >= below {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            dist = dist.min(shift - 0.5 * (lo + hi));
        }
        if below < n {
            let (mut lo, mut hi) = (shift, bound + 1.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if self.eigenvalues_below(mid) >= below + 1 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            dist = dist.min(0.5 * (lo + hi) - shift);
        }
        if !dist.is_finite() {
            return Err(Error::Domain("empty spectrum".into()));
        }
        Ok(dist)
    }
}

/// Kazhdan data for one family, generator and truncation size.
#[derive(Debug, Clone)]
pub struct KazhdanResult {
    pub family: Family,
    pub q: f64,
    pub generator: u32,
    /// The uniform constant (the first-generator bound).
    pub closed_form: f64,
    /// The bound contributed by this generator.
    pub generator_bound: f64,
    pub truncation: usize,
    /// `sigma_min(T - d I) / d` at the largest truncation.
    pub estimate: f64,
    /// `(n, estimate)` along a doubling schedule of truncation sizes.
    pub trace: Vec<(usize, f64)>,
    /// Set when the largest truncation still sits far above the bound.
    pub flagged: bool,
}

impl KazhdanResult {
    /// CSV rows `(N, estimate, closed_form, gap)` along the trace.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("N,estimate,closed_form,gap\n");
        for &(n, est) in &self.trace {
            out.push_str(&format!(
                "{},{},{},{}\n",
                n,
                fmt_sig(est),
                fmt_sig(self.generator_bound),
                fmt_sig(est - self.generator_bound),
            ));
        }
        out
    }
}

/// Numerical Kazhdan estimate from the truncated regular representation:
/// the distance from the truncated spectrum of the generator to its quantum
/// dimension, normalised by the dimension. Converges to the generator bound
/// from above as the truncation grows.
pub fn truncated_kazhdan_estimate(
    family: Family,
    generator: u32,
    q: f64,
    n: usize,
) -> Result<KazhdanResult> {
    let ctx = QContext::new(q)?;
    let d = family.dim(generator, &ctx);
    let mut trace = Vec::new();
    let mut sizes = vec![n];
    let mut cur = n;
    while cur / 2 >= 10 && sizes.len() < 3 {
        cur /= 2;
        sizes.push(cur);
    }
    sizes.reverse();
    for &size in &sizes {
        let op = TruncatedRegularOp::new(family, generator, size)?;
        let sigma = op.min_singular_shifted(d)?;
        trace.push((size, sigma / d));
    }
    let estimate = trace.last().expect("at least one size").1;
    let generator_bound = kazhdan_generator_bound(family, generator, q)?;
    Ok(KazhdanResult {
        family,
        q,
        generator,
        closed_form: kazhdan_closed_form(family, q)?,
        generator_bound,
        truncation: n,
        estimate,
        trace,
        flagged: estimate > generator_bound + 0.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_examples() {
        for &x in &[-1.7, 0.0, 0.4, 2.0] {
            assert_eq!(chebyshev_p(0, x), 1.0);
        }
        assert!((chebyshev_p(1, 1.3) - 1.3).abs() < 1e-15);
        assert_eq!(chebyshev_p(3, 2.0), 4.0);
        for m in 0..=12u32 {
            assert!((chebyshev_p(m, 2.0) - (m as f64 + 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn chebyshev_bounded_on_interval() {
        for m in 0..=12u32 {
            for k in 0..=1000 {
                let x = -2.0 + 4.0 * k as f64 / 1000.0;
                assert!(
                    chebyshev_p(m, x).abs() <= m as f64 + 1.0 + 1e-9,
                    "m={m} x={x}"
                );
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(kazhdan_closed_form(Family::Su, 1.0).unwrap(), 0.0);
        assert!((kazhdan_closed_form(Family::Su, 0.5).unwrap() - 0.2).abs() < 1e-14);
        let so = kazhdan_closed_form(Family::So, 0.5).unwrap();
        assert!((so - (1.0 - 3.0 / 5.25)).abs() < 1e-14);
        // (1 - q)^2 / (q^2 + 1) alternative form.
        for &q in &[0.3, 0.5, 0.8] {
            let a = kazhdan_closed_form(Family::Su, q).unwrap();
            let b = (1.0 - q).powi(2) / (q * q + 1.0);
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn generator_bound_examples() {
        assert!((kazhdan_generator_bound(Family::Su, 1, 0.5).unwrap() - 0.2).abs() < 1e-14);
        let b3 = kazhdan_generator_bound(Family::Su, 3, 0.5).unwrap();
        assert!((b3 - (1.0 - 4.0 / 10.625)).abs() < 1e-12);
        assert!(kazhdan_generator_bound(Family::Su, 0, 0.5).is_err());
        // Monotone increasing in the generator index.
        for family in [Family::Su, Family::So] {
            for &q in &[0.3, 0.6, 0.9] {
                let mut prev = -1.0;
                for m in 1..=10 {
                    let b = kazhdan_generator_bound(family, m, q).unwrap();
                    assert!(b > prev, "family {family:?} m={m} q={q}");
                    prev = b;
                }
            }
        }
    }

    #[test]
    fn tridiagonal_truncation_matches_cosine_spectrum() {
        // For the first SU generator the truncation is the 0/1 tridiagonal
        // matrix with top eigenvalue 2 cos(pi / (n+1)).
        let n = 400;
        let op = TruncatedRegularOp::new(Family::Su, 1, n).unwrap();
        let d = 2.5;
        let sigma = op.min_singular_shifted(d).unwrap();
        let top = 2.0 * (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((sigma - (d - top)).abs() < 1e-10, "{sigma} vs {}", d - top);
    }

    #[test]
    fn estimates_converge_to_closed_forms() {
        let r = truncated_kazhdan_estimate(Family::Su, 1, 0.5, 2000).unwrap();
        assert!((r.estimate - 0.2).abs() < 1e-3, "{}", r.estimate);
        assert!(!r.flagged);
        let r = truncated_kazhdan_estimate(Family::Su, 1, 1.0, 2000).unwrap();
        assert!(r.estimate.abs() < 2e-3);
        let r = truncated_kazhdan_estimate(Family::So, 1, 0.5, 2000).unwrap();
        assert!((r.estimate - 0.4285714285).abs() < 2e-3, "{}", r.estimate);
    }

    #[test]
    fn estimates_decrease_with_truncation() {
        for family in [Family::Su, Family::So] {
            let mut prev = f64::INFINITY;
            for n in [50, 100, 200, 400] {
                let op = TruncatedRegularOp::new(family, 2, n).unwrap();
                let ctx = QContext::new(0.6).unwrap();
                let d = family.dim(2, &ctx);
                let est = op.min_singular_shifted(d).unwrap() / d;
                assert!(est <= prev + 1e-12);
                let bound = kazhdan_generator_bound(family, 2, 0.6).unwrap();
                assert!(
                    est >= bound - 1e-6,
                    "family {family:?} n={n}: {est} < {bound}"
                );
                prev = est;
            }
        }
    }

    #[test]
    fn so_band_is_even_compression_of_su_polynomial() {
        // The SO generator m acts like the degree-2m rescaled Chebyshev
        // polynomial of the SU tridiagonal, compressed to even indices.
        let n = 12;
        for m in 1..=2u32 {
            let big = 2 * n;
            let mut j = vec![vec![0.0f64; big]; big];
            for i in 0..big {
                for k in 0..big {
                    let su = TruncatedRegularOp::new(Family::Su, 1, big).unwrap();
                    j[i][k] = su.entry(i, k);
                }
            }
            // Matrix polynomial by the recurrence x P_k = P_{k+1} + P_{k-1}.
            let mut prev = identity(big);
            let mut cur = j.clone();
            for _ in 1..(2 * m) {
                let next = sub(&matmul(&j, &cur), &prev);
                prev = cur;
                cur = next;
            }
            let so = TruncatedRegularOp::new(Family::So, m, n).unwrap();
            // Entries are exact away from the truncation edge, where lost
            // walks make the two routes differ.
            let interior = n - m as usize;
            for a in 0..interior {
                for b in 0..interior {
                    assert!(
                        (cur[2 * a][2 * b] - so.entry(a, b)).abs() < 1e-12,
                        "m={m} ({a},{b}): {} vs {}",
                        cur[2 * a][2 * b],
                        so.entry(a, b)
                    );
                }
            }
        }
    }

    fn identity(n: usize) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        m
    }

    fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    }

    fn sub(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        a.iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
            .collect()
    }
}
