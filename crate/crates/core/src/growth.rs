//! Exponential growth rates: generic estimation from ball tables, the free
//! unitary closed form through its cubic, the product rule, and spectral-gap
//! style lower bounds.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fusion::{product_algebra, FusionModel};
use crate::metric::{build_balls, fmt_sig, BallTable, GeneratingSet};
use crate::qarith::{qint_exact, qnum, LaurentPoly};

/// How the final growth estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthMethod {
    /// Limit of the sphere-size ratio (primary estimator).
    SphereRatio,
    /// Limit of `|B(n)|^(1/n)`.
    NthRoot,
    /// A closed form, no table involved.
    ClosedForm,
    /// Spheres became empty: the model is finite, growth is 1.
    Finite,
    /// Sub-exponential (polynomial) growth detected, growth is 1.
    Polynomial,
}

impl GrowthMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            GrowthMethod::SphereRatio => "ratio",
            GrowthMethod::NthRoot => "nth-root",
            GrowthMethod::ClosedForm => "closed-form",
            GrowthMethod::Finite => "finite",
            GrowthMethod::Polynomial => "polynomial",
        }
    }
}

/// Growth-rate estimate with its diagnostic sequences.
#[derive(Debug, Clone)]
pub struct GrowthEstimate {
    /// `|B(n)|^(1/n)` for n >= 1.
    pub ball_roots: Vec<f64>,
    /// `|S(n)|^(1/n)` for n >= 1.
    pub sphere_roots: Vec<f64>,
    /// `|S(n+1)| / |S(n)|` for n >= 0.
    pub ratios: Vec<f64>,
    pub estimate: f64,
    pub method: GrowthMethod,
    /// Error bar: tail variation of the ratios plus the gap to the
    /// extrapolated nth-root guard.
    pub spread: f64,
    /// Tail minimum and maximum of the ball-size ratio `|B(n+1)|/|B(n)|`,
    /// reported separately because the limit need not exist.
    pub ball_ratio_liminf: f64,
    pub ball_ratio_limsup: f64,
    /// Set when ratio and nth-root estimators disagree beyond 5 percent.
    pub flagged: bool,
}

const GUARD_RTOL: f64 = 0.05;

/// Estimate the exponential growth rate from a ball table:
/// `max(1, lim |S(n)|^(1/n))`, with the sphere ratio as the primary
/// estimator and a Richardson-extrapolated nth root as a guard.
pub fn growth_from_balls(table: &BallTable) -> Result<GrowthEstimate> {
    let depth = table.radius();
    if depth < 10 {
        return Err(Error::Domain(format!(
            "growth estimation needs depth >= 10, got {depth}"
        )));
    }

    let mut ball_roots = Vec::with_capacity(depth);
    let mut sphere_roots = Vec::with_capacity(depth);
    let mut ratios = Vec::with_capacity(depth);
    let mut finite_at = None;
    for n in 1..=depth {
        if table.sphere_count(n) == 0 {
            finite_at = Some(n);
            break;
        }
        ball_roots.push((table.ln_ball_size(n) / n as f64).exp());
        sphere_roots.push((table.ln_sphere_size(n) / n as f64).exp());
        ratios.push((table.ln_sphere_size(n) - table.ln_sphere_size(n - 1)).exp());
    }

    let mut ball_ratios = Vec::with_capacity(depth);
    let last = finite_at.unwrap_or(depth);
    for n in 1..=last {
        ball_ratios.push((table.ln_ball_size(n) - table.ln_ball_size(n - 1)).exp());
    }
    let tail = &ball_ratios[ball_ratios.len().saturating_sub(5)..];
    let ball_ratio_liminf = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let ball_ratio_limsup = tail.iter().cloned().fold(0.0, f64::max);

    if finite_at.is_some() {
        return Ok(GrowthEstimate {
            ball_roots,
            sphere_roots,
            ratios,
            estimate: 1.0,
            method: GrowthMethod::Finite,
            spread: 0.0,
            ball_ratio_liminf,
            ball_ratio_limsup,
            flagged: false,
        });
    }

    // Sub-exponential detection: for |S(n)| ~ n^k the quantity n (r_n - 1)
    // stays near k, while for genuine exponential growth it rises linearly.
    let r_full = ratios[ratios.len() - 1];
    let r_half = ratios[ratios.len() / 2 - 1];
    let u_full = depth as f64 * (r_full - 1.0);
    let u_half = (ratios.len() / 2) as f64 * (r_half - 1.0);
    if u_full <= 0.0 || (u_half > 0.0 && u_full / u_half < 1.5) {
        return Ok(GrowthEstimate {
            ball_roots,
            sphere_roots,
            ratios,
            estimate: 1.0,
            method: GrowthMethod::Polynomial,
            spread: 0.0,
            ball_ratio_liminf,
            ball_ratio_limsup,
            flagged: false,
        });
    }

    let ratio_est = r_full;
    // Cross-check against the ball-root limit, with one Richardson step on
    // ln |B(n)|^(1/n) = ln w + c/n.
    let guard = {
        let full = table.ln_ball_size(depth) / depth as f64;
        let half_n = depth / 2;
        let half = table.ln_ball_size(half_n) / half_n as f64;
        (2.0 * full - half).exp()
    };
    let tail = &ratios[ratios.len().saturating_sub(5)..];
    let tail_var = tail.iter().cloned().fold(0.0, f64::max)
        - tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = tail_var + (ratio_est - guard).abs();
    let flagged = (ratio_est - guard).abs() > GUARD_RTOL * ratio_est;

    Ok(GrowthEstimate {
        ball_roots,
        sphere_roots,
        ratios,
        estimate: ratio_est.max(1.0),
        method: GrowthMethod::SphereRatio,
        spread,
        ball_ratio_liminf,
        ball_ratio_limsup,
        flagged,
    })
}

/// CSV rendering of the growth diagnostics of a ball table.
pub fn growth_csv(table: &BallTable, estimate: &GrowthEstimate) -> String {
    let mut out = String::from("n,ball_size,sphere_size,nth_root,ratio\n");
    for n in 1..=estimate.ball_roots.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            n,
            fmt_sig(table.ball_size(n)),
            fmt_sig(table.sphere_size(n)),
            fmt_sig(estimate.ball_roots[n - 1]),
            fmt_sig(estimate.ratios[n - 1]),
        ));
    }
    out
}

const UF_DEPTH_CAP: usize = 200;

/// Weighted sphere sizes of the free unitary model over its canonical
/// generating set, by dynamic programming over leading-block lengths:
/// `f(0) = 1`, `f(n) = sum_k [k+1]^2 f(n-k)`, `|S(n)| = 2 f(n)` for n >= 1.
pub fn uf_sphere_sizes(q: f64, depth: usize) -> Result<Vec<f64>> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Domain(format!("q must lie in (0, 1], got {q}")));
    }
    if depth > UF_DEPTH_CAP {
        return Err(Error::Domain(format!(
            "depth {depth} exceeds the cap {UF_DEPTH_CAP}"
        )));
    }
    let ctx = crate::qarith::QContext::new(q)?;
    let sq: Vec<f64> = (1..=depth + 1)
        .map(|k| qnum(k as f64, &ctx).powi(2))
        .collect();
    let mut f = vec![0.0; depth + 1];
    f[0] = 1.0;
    for n in 1..=depth {
        f[n] = (1..=n).map(|k| sq[k] * f[n - k]).sum();
    }
    Ok(std::iter::once(1.0)
        .chain((1..=depth).map(|n| 2.0 * f[n]))
        .collect())
}

/// Exact version of [`uf_sphere_sizes`], symbolic in q.
pub fn uf_sphere_sizes_exact(depth: usize) -> Result<Vec<LaurentPoly>> {
    if depth > UF_DEPTH_CAP {
        return Err(Error::Domain(format!(
            "depth {depth} exceeds the cap {UF_DEPTH_CAP}"
        )));
    }
    let sq: Vec<LaurentPoly> = (1..=depth + 1)
        .map(|k| {
            let p = qint_exact(k as u32).expect("k >= 1");
            &p * &p
        })
        .collect();
    let mut f = vec![LaurentPoly::zero(); depth + 1];
    f[0] = LaurentPoly::one();
    for n in 1..=depth {
        let mut acc = LaurentPoly::zero();
        for k in 1..=n {
            acc += &(&sq[k] * &f[n - k]);
        }
        f[n] = acc;
    }
    let two = LaurentPoly::constant(2);
    Ok(std::iter::once(LaurentPoly::one())
        .chain((1..=depth).map(|n| &two * &f[n]))
        .collect())
}

/// The cubic whose largest real root is the uniform growth rate of the free
/// unitary fusion algebra, together with that root.
#[derive(Debug, Clone)]
pub struct CubicSpec {
    pub q: f64,
    /// `P(z) = z^3 + c2 z^2 + c1 z + c0`.
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub root: f64,
    pub residual: f64,
    /// Sandwich bounds on the root, available for q < 1.
    pub lower_bound: f64,
    pub upper_bound: Option<f64>,
}

impl CubicSpec {
    pub fn eval(&self, z: f64) -> f64 {
        ((z + self.c2) * z + self.c1) * z + self.c0
    }
}

/// Largest real root of `z^3 - (2q^-2+3+2q^2) z^2 + 2(q^-2+1+q^2) z - 2`
/// by bisection. `P(1) = -2 < 0` and the Cauchy bound give a bracket that
/// contains exactly the largest root.
pub fn uf_rate(q: f64) -> Result<CubicSpec> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Domain(format!("q must lie in (0, 1], got {q}")));
    }
    let qi2 = q.powi(-2);
    let q2 = q * q;
    let c2 = -(2.0 * qi2 + 3.0 + 2.0 * q2);
    let c1 = 2.0 * (qi2 + 1.0 + q2);
    let c0 = -2.0;
    let eval = |z: f64| ((z + c2) * z + c1) * z + c0;

    let mut lo = 1.0 + 1e-9;
    let mut hi = 1.0 - c2;
    debug_assert!(eval(lo) < 0.0 && eval(hi) > 0.0);
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if eval(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let residual = eval(root).abs();

    let lower_bound = 2.0 * qi2 + 2.0 + q2;
    let upper_bound = if q < 1.0 {
        Some(2.0 * qi2 + 2.0 + q2 * (3.0 - 2.0 * q2) / (1.0 - q2).powi(2))
    } else {
        None
    };
    if q < 1.0 {
        let ub = upper_bound.unwrap();
        if root < lower_bound - 1e-9 || root > ub + 1e-9 {
            return Err(Error::Domain(format!(
                "root {root} escaped its sandwich [{lower_bound}, {ub}] at q = {q}"
            )));
        }
    }
    Ok(CubicSpec {
        q,
        c2,
        c1,
        c0,
        root,
        residual,
        lower_bound,
        upper_bound,
    })
}

/// Report of the product-algebra growth rule: the product rate against the
/// maximum of the factor rates.
#[derive(Debug, Clone)]
pub struct ProductGrowthReport {
    pub product: GrowthEstimate,
    pub left: GrowthEstimate,
    pub right: GrowthEstimate,
    pub expected: f64,
    pub relative_gap: f64,
}

/// Estimate the growth of the product algebra over `{x (x) e} U {e (x) y}`
/// and compare with the maximum of the factor estimates.
pub fn product_growth_check(
    left: Arc<dyn FusionModel>,
    x_left: &GeneratingSet,
    right: Arc<dyn FusionModel>,
    x_right: &GeneratingSet,
    depth: usize,
) -> Result<ProductGrowthReport> {
    let left_table = build_balls(&*left, x_left, depth, false)?;
    let right_table = build_balls(&*right, x_right, depth, false)?;
    let left_est = growth_from_balls(&left_table)?;
    let right_est = growth_from_balls(&right_table)?;

    let product = product_algebra(left.clone(), right.clone());
    let gens = product.side_generators(x_left.elements(), x_right.elements());
    let x = GeneratingSet::new(&product, gens)?;
    let table = build_balls(&product, &x, depth, false)?;
    let product_est = growth_from_balls(&table)?;

    let expected = left_est.estimate.max(right_est.estimate);
    let relative_gap = (product_est.estimate - expected).abs() / expected;
    Ok(ProductGrowthReport {
        product: product_est,
        left: left_est,
        right: right_est,
        expected,
        relative_gap,
    })
}

/// Lower bound on the uniform growth rate from modular eigenvalue data:
/// `C^2` where `C` is the smallest listed value strictly greater than 1,
/// or 1 when every value is 1.
pub fn gamma_lower_bound(gammas: &[f64]) -> Result<f64> {
    if gammas.is_empty() {
        return Err(Error::Domain("need at least one eigenvalue bound".into()));
    }
    let c = gammas
        .iter()
        .copied()
        .filter(|&g| g > 1.0)
        .fold(f64::INFINITY, f64::min);
    Ok(if c.is_finite() { c * c } else { 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::Label;
    use crate::metric::GeneratingSet;
    use crate::models::{SoModel, SuModel};
    use crate::qarith::QContext;

    fn su_table(q: f64, depth: usize) -> BallTable {
        let m = SuModel::new(QContext::new(q).unwrap());
        let x = GeneratingSet::new(&m, vec![Label::Int(1)]).unwrap();
        build_balls(&m, &x, depth, false).unwrap()
    }

    #[test]
    fn su_growth_near_closed_form() {
        let est = growth_from_balls(&su_table(0.5, 60)).unwrap();
        assert_eq!(est.method, GrowthMethod::SphereRatio);
        assert!((est.estimate - 4.0).abs() < 0.04, "{}", est.estimate);
        assert!(!est.flagged);
    }

    #[test]
    fn so_growth_near_closed_form() {
        let m = SoModel::new(QContext::new(0.5).unwrap());
        let x = GeneratingSet::new(&m, vec![Label::Int(1)]).unwrap();
        let t = build_balls(&m, &x, 60, false).unwrap();
        let est = growth_from_balls(&t).unwrap();
        assert!((est.estimate - 16.0).abs() < 0.16, "{}", est.estimate);
    }

    #[test]
    fn classical_case_is_polynomial() {
        let est = growth_from_balls(&su_table(1.0, 60)).unwrap();
        assert_eq!(est.method, GrowthMethod::Polynomial);
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn depth_precondition() {
        assert!(growth_from_balls(&su_table(0.5, 9)).is_err());
    }

    #[test]
    fn uf_sphere_size_examples() {
        let s = uf_sphere_sizes(0.5, 5).unwrap();
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 12.5).abs() < 1e-12);
        assert!((s[2] - 133.25).abs() < 1e-10);
        // Brute force over all 4 words of length 2: aa, aA, Aa, AA.
        // d(aa) = [2]^2, d(aA) = [3], d(Aa) = [3], d(AA) = [2]^2.
        let two = 2.5f64;
        let three = 5.25f64;
        let brute = 2.0 * (two * two).powi(2) + 2.0 * three * three;
        assert!((s[2] - brute).abs() < 1e-10);
    }

    #[test]
    fn uf_exact_matches_float() {
        let exact = uf_sphere_sizes_exact(10).unwrap();
        for &q in &[0.3, 0.5, 0.9] {
            let float = uf_sphere_sizes(q, 10).unwrap();
            for n in 0..=10 {
                let e = exact[n].eval(q).unwrap();
                assert!((e - float[n]).abs() <= 1e-9 * e.max(1.0), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn uf_rate_examples() {
        let spec = uf_rate(0.5).unwrap();
        assert!((spec.c2 + 11.5).abs() < 1e-12);
        assert!((spec.c1 - 10.5).abs() < 1e-12);
        assert_eq!(spec.c0, -2.0);
        assert!(spec.residual < 1e-9);
        assert!(spec.root > 10.25 && spec.root < 11.112, "{}", spec.root);
        assert!((spec.root - 10.52).abs() < 0.01);

        // P(1) = -2 for every q.
        for &q in &[0.1, 0.5, 0.9, 1.0] {
            let s = uf_rate(q).unwrap();
            assert!((s.eval(1.0) + 2.0).abs() < 1e-9);
            assert!(s.root > 1.0);
        }

        let one = uf_rate(1.0).unwrap();
        assert!((one.eval(one.root)).abs() < 1e-9);
        assert!((one.root - 6.065).abs() < 5e-3);
    }

    #[test]
    fn uf_ratio_approaches_root() {
        for &q in &[0.3, 0.5, 0.9] {
            let spec = uf_rate(q).unwrap();
            let s = uf_sphere_sizes(q, 30).unwrap();
            let ratio = s[30] / s[29];
            assert!(
                (ratio - spec.root).abs() < 1e-3,
                "q={q}: {ratio} vs {}",
                spec.root
            );
        }
    }

    #[test]
    fn product_growth_takes_max() {
        let a: Arc<dyn FusionModel> = Arc::new(SuModel::new(QContext::new(0.5).unwrap()));
        let b: Arc<dyn FusionModel> = Arc::new(SuModel::new(QContext::new(0.8).unwrap()));
        let xa = GeneratingSet::new(&*a, vec![Label::Int(1)]).unwrap();
        let xb = GeneratingSet::new(&*b, vec![Label::Int(1)]).unwrap();
        let report = product_growth_check(a, &xa, b, &xb, 40).unwrap();
        assert!((report.expected - 4.0).abs() < 0.05);
        assert!(report.relative_gap < 0.02, "gap {}", report.relative_gap);
    }

    #[test]
    fn product_with_trivial_factor_keeps_the_rate() {
        let trivial_doc = r#"{
            "irreducibles": ["e"],
            "unit": "e",
            "conjugate": {"e": "e"},
            "dim": {"e": "1"},
            "product": {"e,e": {"e": 1}}
        }"#;
        let trivial: Arc<dyn FusionModel> =
            Arc::new(crate::fusion::load_custom(trivial_doc).unwrap());
        let e = trivial.unit();
        let xt = GeneratingSet::new(&*trivial, vec![e]).unwrap();

        // A finite model on its own: spheres empty out and the rate is 1.
        let t = build_balls(&*trivial, &xt, 12, false).unwrap();
        let est = growth_from_balls(&t).unwrap();
        assert_eq!(est.method, GrowthMethod::Finite);
        assert_eq!(est.estimate, 1.0);

        let su: Arc<dyn FusionModel> = Arc::new(SuModel::new(QContext::new(0.5).unwrap()));
        let xs = GeneratingSet::new(&*su, vec![Label::Int(1)]).unwrap();
        let report = product_growth_check(su, &xs, trivial, &xt, 40).unwrap();
        assert!(
            (report.product.estimate - 4.0).abs() < 0.08,
            "{}",
            report.product.estimate
        );
        assert_eq!(report.expected, report.left.estimate);
    }

    #[test]
    fn gamma_bound_examples() {
        assert_eq!(gamma_lower_bound(&[2.0]).unwrap(), 4.0);
        assert_eq!(gamma_lower_bound(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(gamma_lower_bound(&[4.0, 1.0, 2.0]).unwrap(), 4.0);
        assert!(gamma_lower_bound(&[]).is_err());
    }

    #[test]
    fn csv_shape() {
        let t = su_table(0.5, 12);
        let est = growth_from_balls(&t).unwrap();
        let csv = growth_csv(&t, &est);
        assert!(csv.starts_with("n,ball_size,sphere_size,nth_root,ratio\n"));
        assert_eq!(csv.lines().count(), 13);
    }
}
