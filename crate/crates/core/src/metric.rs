//! Length functions, balls, spheres, boundaries and Folner-ratio scans for
//! any enumerable fusion model with a finite generating set.
//!
//! Sizes are always weighted: `|A| = sum_{a in A} d(a)^2`.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fusion::{FormalSum, FusionModel, Label};
use crate::qarith::{HugeSum, LaurentPoly};

/// A finite symmetric generating set.
#[derive(Debug, Clone)]
pub struct GeneratingSet {
    elements: Vec<Label>,
    symmetric: bool,
}

impl GeneratingSet {
    /// Deduplicates, sorts, and records whether conjugation maps the set onto
    /// itself.
    pub fn new(model: &dyn FusionModel, elements: Vec<Label>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Domain("generating set must be non-empty".into()));
        }
        let set: BTreeSet<Label> = elements.into_iter().collect();
        let mut symmetric = true;
        for x in &set {
            symmetric &= set.contains(&model.conj(x)?);
        }
        Ok(Self {
            elements: set.into_iter().collect(),
            symmetric,
        })
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Weighted size `sum_{x in X} d(x)^2`.
    pub fn weight(&self, model: &dyn FusionModel) -> Result<f64> {
        let mut w = 0.0;
        for x in &self.elements {
            w += model.dim(x)?.powi(2);
        }
        Ok(w)
    }
}

/// Balls and spheres of a model with respect to a generating set, with both
/// weighted sizes and cardinalities per radius.
#[derive(Debug, Clone)]
pub struct BallTable {
    spheres: Vec<Vec<Label>>,
    sphere_sizes: Vec<f64>,
    ln_sphere_sizes: Vec<f64>,
    ball_sizes: Vec<f64>,
    ln_ball_sizes: Vec<f64>,
    exact_ball_sizes: Option<Vec<LaurentPoly>>,
    lengths: HashMap<Label, u32>,
}

impl BallTable {
    pub fn radius(&self) -> usize {
        self.spheres.len() - 1
    }

    /// Labels at distance exactly `n`, sorted.
    pub fn sphere(&self, n: usize) -> &[Label] {
        &self.spheres[n]
    }

    /// Labels at distance at most `n`, sorted.
    pub fn ball(&self, n: usize) -> Vec<Label> {
        let mut out: Vec<Label> = self.spheres[..=n].iter().flatten().cloned().collect();
        out.sort();
        out
    }

    pub fn length(&self, l: &Label) -> Option<u32> {
        self.lengths.get(l).copied()
    }

    /// `|S_X(n)|`.
    pub fn sphere_size(&self, n: usize) -> f64 {
        self.sphere_sizes[n]
    }

    pub fn ln_sphere_size(&self, n: usize) -> f64 {
        self.ln_sphere_sizes[n]
    }

    /// `|B_X(n)|`.
    pub fn ball_size(&self, n: usize) -> f64 {
        self.ball_sizes[n]
    }

    pub fn ln_ball_size(&self, n: usize) -> f64 {
        self.ln_ball_sizes[n]
    }

    /// `#S_X(n)`.
    pub fn sphere_count(&self, n: usize) -> usize {
        self.spheres[n].len()
    }

    /// `#B_X(n)`.
    pub fn ball_count(&self, n: usize) -> usize {
        self.spheres[..=n].iter().map(Vec::len).sum()
    }

    /// Exact `|B_X(n)|` when the table was built in exact mode.
    pub fn exact_ball_size(&self, n: usize) -> Option<&LaurentPoly> {
        self.exact_ball_sizes.as_ref().map(|v| &v[n])
    }
}

/// Breadth-first closure of the unit under right multiplication by `X`.
///
/// The frontier at step `n+1` consists of the supports of `v * x` for `v` in
/// sphere `n` and `x` in `X`, minus everything already seen. Per-radius
/// ordering is label-lexicographic so output is reproducible.
pub fn build_balls(
    model: &dyn FusionModel,
    x: &GeneratingSet,
    radius: usize,
    exact: bool,
) -> Result<BallTable> {
    if !model.enumerable() {
        return Err(Error::Unsupported(format!(
            "{} cannot enumerate balls: products may leave the known fragment",
            model.describe()
        )));
    }
    let mut spheres: Vec<Vec<Label>> = vec![vec![model.unit()]];
    let mut lengths: HashMap<Label, u32> = HashMap::new();
    lengths.insert(model.unit(), 0);

    for n in 0..radius {
        let frontier = &spheres[n];
        // Pure per-element expansion; safe to fan out.
        let produced: Vec<Result<Vec<Label>>> = frontier
            .par_iter()
            .map(|v| {
                let mut out = Vec::new();
                for g in x.elements() {
                    let p = model.product(v, g)?;
                    out.extend(p.support().cloned());
                }
                Ok(out)
            })
            .collect();
        let mut next: BTreeSet<Label> = BTreeSet::new();
        for batch in produced {
            for l in batch? {
                if !lengths.contains_key(&l) {
                    next.insert(l);
                }
            }
        }
        let next: Vec<Label> = next.into_iter().collect();
        for l in &next {
            lengths.insert(l.clone(), (n + 1) as u32);
        }
        spheres.push(next);
    }

    let mut sphere_sizes = Vec::with_capacity(spheres.len());
    let mut ln_sphere_sizes = Vec::with_capacity(spheres.len());
    let mut ball_sizes = Vec::with_capacity(spheres.len());
    let mut ln_ball_sizes = Vec::with_capacity(spheres.len());
    let mut ball_acc = HugeSum::new();
    for sphere in &spheres {
        let mut acc = HugeSum::new();
        for l in sphere {
            let d = model.dim(l)?;
            let ln_d = model.ln_dim(l)?;
            acc.add(d * d, 2.0 * ln_d);
            ball_acc.add(d * d, 2.0 * ln_d);
        }
        sphere_sizes.push(acc.value());
        ln_sphere_sizes.push(acc.ln());
        ball_sizes.push(ball_acc.value());
        ln_ball_sizes.push(ball_acc.ln());
    }

    let exact_ball_sizes = if exact {
        let mut acc = LaurentPoly::zero();
        let mut out = Vec::with_capacity(spheres.len());
        for sphere in &spheres {
            for l in sphere {
                let d = model.dim_exact(l).ok_or_else(|| {
                    Error::Unsupported(format!("{} has no exact dimensions", model.describe()))
                })?;
                acc += &(&d * &d);
            }
            out.push(acc.clone());
        }
        Some(out)
    } else {
        None
    };

    Ok(BallTable {
        spheres,
        sphere_sizes,
        ln_sphere_sizes,
        ball_sizes,
        ln_ball_sizes,
        exact_ball_sizes,
        lengths,
    })
}

/// Inner boundary: elements of `A` with a neighbour outside `A`.
pub fn inner_boundary(
    model: &dyn FusionModel,
    x: &GeneratingSet,
    a: &BTreeSet<Label>,
) -> Result<BTreeSet<Label>> {
    let mut out = BTreeSet::new();
    for v in a {
        'gen: for g in x.elements() {
            let p = model.product(v, g)?;
            for l in p.support() {
                if !a.contains(l) {
                    out.insert(v.clone());
                    break 'gen;
                }
            }
        }
    }
    Ok(out)
}

/// Full boundary: the inner boundary together with the elements of the
/// complement that see `A` in one step.
///
/// The complement is infinite, so its boundary part is found by scanning the
/// one-step neighbourhood of `A` under `X` and `conj(X)` (reciprocity
/// guarantees every outer boundary point is such a neighbour) and verifying
/// each candidate directly.
pub fn boundary(
    model: &dyn FusionModel,
    x: &GeneratingSet,
    a: &BTreeSet<Label>,
) -> Result<BTreeSet<Label>> {
    let mut out = inner_boundary(model, x, a)?;
    let mut candidates: BTreeSet<Label> = BTreeSet::new();
    for v in a {
        for g in x.elements() {
            let gbar = model.conj(g)?;
            for h in [g.clone(), gbar] {
                let p = model.product(v, &h)?;
                candidates.extend(p.support().filter(|l| !a.contains(l)).cloned());
            }
        }
    }
    for c in candidates {
        'gen: for g in x.elements() {
            let p = model.product(&c, g)?;
            for l in p.support() {
                if a.contains(l) {
                    out.insert(c.clone());
                    break 'gen;
                }
            }
        }
    }
    Ok(out)
}

/// Weighted size of a finite label set; the log shadow survives overflow.
pub fn set_size(model: &dyn FusionModel, a: &BTreeSet<Label>) -> Result<(f64, f64)> {
    let mut acc = HugeSum::new();
    for l in a {
        let d = model.dim(l)?;
        acc.add(d * d, 2.0 * model.ln_dim(l)?);
    }
    Ok((acc.value(), acc.ln()))
}

/// How candidate sets for a Folner scan are generated.
#[derive(Debug, Clone)]
pub enum ScanStrategy {
    /// `A = B_X(n)` for `n = 1..=max_steps`.
    Balls,
    /// `A = {0, ..., M}` for `M = 1..=max_steps`; integer-labelled models only.
    Intervals,
    /// Every non-empty subset of the given fragment (capped at 20 elements).
    Exhaustive { fragment: Vec<Label> },
}

/// One candidate set of a scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub descriptor: String,
    pub set_size: f64,
    pub boundary_size: f64,
    pub inner_boundary_size: f64,
    pub outer_ratio: f64,
    pub inner_ratio: f64,
}

/// Folner-ratio scan: per-candidate boundary ratios and their running infima.
#[derive(Debug, Clone)]
pub struct FolnerScan {
    pub rows: Vec<ScanRow>,
    pub inf_outer: f64,
    pub inf_inner: f64,
    pub argmin_inner: Option<String>,
    /// Aitken extrapolation of the inner/outer ratio sequences, assuming
    /// geometric convergence. The raw last row stays authoritative.
    pub extrapolated_inner: Option<f64>,
    pub extrapolated_outer: Option<f64>,
}

impl FolnerScan {
    pub fn last(&self) -> &ScanRow {
        self.rows.last().expect("scan produced no rows")
    }

    /// Canonical CSV rendering: one row per candidate set.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("radius,size,boundary_size,inner_boundary_size,outer_ratio,inner_ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.descriptor,
                fmt_sig(r.set_size),
                fmt_sig(r.boundary_size),
                fmt_sig(r.inner_boundary_size),
                fmt_sig(r.outer_ratio),
                fmt_sig(r.inner_ratio)
            ));
        }
        out
    }
}

/// Fixed 12-significant-digit rendering used by every CSV surface.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.11e}")
}

fn aitken(rows: &[f64]) -> Option<f64> {
    let n = rows.len();
    if n < 3 {
        return None;
    }
    let (x0, x1, x2) = (rows[n - 3], rows[n - 2], rows[n - 1]);
    let denom = x2 - 2.0 * x1 + x0;
    if denom.abs() < 1e-300 {
        return Some(x2);
    }
    Some(x2 - (x2 - x1).powi(2) / denom)
}

const EXHAUSTIVE_CAP: usize = 20;

/// Run a Folner scan with the given strategy.
pub fn folner_scan(
    model: &dyn FusionModel,
    x: &GeneratingSet,
    strategy: &ScanStrategy,
    max_steps: usize,
) -> Result<FolnerScan> {
    let mut candidates: Vec<(String, BTreeSet<Label>)> = Vec::new();
    match strategy {
        ScanStrategy::Balls => {
            let table = build_balls(model, x, max_steps, false)?;
            for n in 1..=max_steps {
                candidates.push((n.to_string(), table.ball(n).into_iter().collect()));
            }
        }
        ScanStrategy::Intervals => {
            for m in 1..=max_steps {
                let a: BTreeSet<Label> = (0..=m as u32).map(Label::Int).collect();
                // Fail early on models without integer labels.
                model.dim(a.iter().next().unwrap())?;
                candidates.push((m.to_string(), a));
            }
        }
        ScanStrategy::Exhaustive { fragment } => {
            if fragment.len() > EXHAUSTIVE_CAP {
                return Err(Error::Unsupported(format!(
                    "exhaustive scan over {} elements exceeds the 2^{EXHAUSTIVE_CAP} cap",
                    fragment.len()
                )));
            }
            for mask in 1u32..(1u32 << fragment.len()) {
                let a: BTreeSet<Label> = fragment
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, l)| l.clone())
                    .collect();
                let descriptor = a
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                candidates.push((format!("{{{descriptor}}}"), a));
            }
        }
    }

    let mut rows = Vec::with_capacity(candidates.len());
    let mut inf_outer = f64::INFINITY;
    let mut inf_inner = f64::INFINITY;
    let mut argmin_inner = None;
    for (descriptor, a) in candidates {
        let (size, ln_size) = set_size(model, &a)?;
        let inner = inner_boundary(model, x, &a)?;
        let outer = boundary(model, x, &a)?;
        debug_assert!(inner.is_subset(&outer));
        let (inner_size, ln_inner) = set_size(model, &inner)?;
        let (outer_size, ln_outer) = set_size(model, &outer)?;
        let inner_ratio = ratio(inner_size, size, ln_inner, ln_size);
        let outer_ratio = ratio(outer_size, size, ln_outer, ln_size);
        if inner_ratio < inf_inner {
            inf_inner = inner_ratio;
            argmin_inner = Some(descriptor.clone());
        }
        inf_outer = inf_outer.min(outer_ratio);
        rows.push(ScanRow {
            descriptor,
            set_size: size,
            boundary_size: outer_size,
            inner_boundary_size: inner_size,
            outer_ratio,
            inner_ratio,
        });
    }

    let inner_seq: Vec<f64> = rows.iter().map(|r| r.inner_ratio).collect();
    let outer_seq: Vec<f64> = rows.iter().map(|r| r.outer_ratio).collect();
    let serial = !matches!(strategy, ScanStrategy::Exhaustive { .. });
    Ok(FolnerScan {
        rows,
        inf_outer,
        inf_inner,
        argmin_inner,
        extrapolated_inner: if serial { aitken(&inner_seq) } else { None },
        extrapolated_outer: if serial { aitken(&outer_seq) } else { None },
    })
}

fn ratio(num: f64, den: f64, ln_num: f64, ln_den: f64) -> f64 {
    if num == 0.0 {
        return 0.0;
    }
    if num.is_finite() && den.is_finite() && den < 1e300 {
        num / den
    } else {
        (ln_num - ln_den).exp()
    }
}

/// Report on the comparison constant between full and inner boundary sizes.
#[derive(Debug, Clone)]
pub struct CxReport {
    /// Largest observed support count of `v * x` over the sampled ball.
    pub m_x: usize,
    /// Weighted size of the generating set.
    pub x_weight: f64,
    /// The constant `1 + M_X * |X|`.
    pub c_x: f64,
    /// Radii whose balls satisfied `|bd A| <= C_X |bd_inn A|`.
    pub verified_radii: usize,
    pub violations: Vec<String>,
}

/// Estimate the boundary-comparison constant `C_X = 1 + M_X |X|` by sampling
/// supports over a ball, then verify the inequality on the sampled balls.
pub fn c_x_constant(
    model: &dyn FusionModel,
    x: &GeneratingSet,
    sample_radius: usize,
) -> Result<CxReport> {
    if !x.is_symmetric() {
        return Err(Error::Domain("C_X needs a symmetric generating set".into()));
    }
    let table = build_balls(model, x, sample_radius + 1, false)?;
    let mut m_x = 0usize;
    for n in 0..=sample_radius {
        for v in table.sphere(n) {
            for g in x.elements() {
                let p: FormalSum = model.product(v, g)?;
                m_x = m_x.max(p.support_len());
            }
        }
    }
    let x_weight = x.weight(model)?;
    let c_x = 1.0 + m_x as f64 * x_weight;

    let mut verified = 0usize;
    let mut violations = Vec::new();
    for n in 1..=sample_radius {
        let a: BTreeSet<Label> = table.ball(n).into_iter().collect();
        let (outer, _) = set_size(model, &boundary(model, x, &a)?)?;
        let (inner, _) = set_size(model, &inner_boundary(model, x, &a)?)?;
        if outer <= c_x * inner * (1.0 + 1e-12) {
            verified += 1;
        } else {
            violations.push(format!(
                "ball {n}: |bd| = {outer} > C_X |bd_inn| = {}",
                c_x * inner
            ));
        }
    }
    Ok(CxReport {
        m_x,
        x_weight,
        c_x,
        verified_radii: verified,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{SoModel, SuModel, UfModel};
    use crate::qarith::QContext;

    fn su(q: f64) -> SuModel {
        SuModel::new(QContext::new(q).unwrap())
    }

    fn gen1(model: &dyn FusionModel) -> GeneratingSet {
        GeneratingSet::new(model, vec![Label::Int(1)]).unwrap()
    }

    #[test]
    fn su_spheres_are_singletons() {
        let m = su(0.5);
        let x = gen1(&m);
        let t = build_balls(&m, &x, 12, false).unwrap();
        for n in 0..=12 {
            assert_eq!(t.sphere(n), &[Label::Int(n as u32)]);
            assert_eq!(t.length(&Label::Int(n as u32)), Some(n as u32));
        }
        assert_eq!(t.ball_size(0), 1.0);
    }

    #[test]
    fn uf_sphere_counts_are_powers_of_two() {
        let m = UfModel::new(QContext::new(0.5).unwrap());
        let x = GeneratingSet::new(&m, UfModel::canonical_generators()).unwrap();
        assert!(x.is_symmetric());
        let t = build_balls(&m, &x, 8, false).unwrap();
        for n in 1..=8 {
            assert_eq!(t.sphere_count(n), 1 << n, "sphere {n}");
        }
    }

    #[test]
    fn exact_ball_sizes_match_floats() {
        let m = su(0.5);
        let x = gen1(&m);
        let t = build_balls(&m, &x, 10, true).unwrap();
        for n in 0..=10 {
            let exact = t.exact_ball_size(n).unwrap().eval(0.5).unwrap();
            assert!((exact - t.ball_size(n)).abs() <= 1e-9 * exact);
        }
    }

    #[test]
    fn su_interval_boundaries() {
        let m = su(0.5);
        let x = gen1(&m);
        for big_m in 1u32..=6 {
            let a: BTreeSet<Label> = (0..=big_m).map(Label::Int).collect();
            let inner = inner_boundary(&m, &x, &a).unwrap();
            assert_eq!(inner, BTreeSet::from([Label::Int(big_m)]));
            let outer = boundary(&m, &x, &a).unwrap();
            assert_eq!(
                outer,
                BTreeSet::from([Label::Int(big_m), Label::Int(big_m + 1)])
            );
        }
        // The empty set has empty boundary.
        let empty = BTreeSet::new();
        assert!(boundary(&m, &x, &empty).unwrap().is_empty());
    }

    #[test]
    fn so_interval_boundaries() {
        let m = SoModel::new(QContext::new(0.5).unwrap());
        let x = gen1(&m);
        let a: BTreeSet<Label> = (0..=5u32).map(Label::Int).collect();
        assert_eq!(
            inner_boundary(&m, &x, &a).unwrap(),
            BTreeSet::from([Label::Int(5)])
        );
        assert_eq!(
            boundary(&m, &x, &a).unwrap(),
            BTreeSet::from([Label::Int(5), Label::Int(6)])
        );
    }

    #[test]
    fn closed_fragment_has_empty_inner_boundary() {
        let doc = r#"{
            "irreducibles": ["e", "g"],
            "unit": "e",
            "conjugate": {"e": "e", "g": "g"},
            "dim": {"e": "1", "g": "1"},
            "product": {
                "e,e": {"e": 1}, "e,g": {"g": 1},
                "g,e": {"g": 1}, "g,g": {"e": 1}
            }
        }"#;
        let m = crate::fusion::load_custom(doc).unwrap();
        let x = GeneratingSet::new(&m, vec![Label::name("g")]).unwrap();
        let a: BTreeSet<Label> = [Label::name("e"), Label::name("g")].into();
        assert!(inner_boundary(&m, &x, &a).unwrap().is_empty());
        // A complete table is closed under products, so balls enumerate and
        // the spheres empty out.
        let t = build_balls(&m, &x, 3, false).unwrap();
        assert_eq!(t.ball_count(3), 2);
        assert_eq!(t.sphere_count(2), 0);

        // A genuine fragment refuses enumeration.
        let fragment = doc.replace(r#""g,g": {"e": 1}"#, r#""g,g": null"#);
        let m = crate::fusion::load_custom(&fragment).unwrap();
        let x = GeneratingSet::new(&m, vec![Label::name("g")]).unwrap();
        assert!(build_balls(&m, &x, 3, false).is_err());
    }

    #[test]
    fn uf_inner_boundary_of_ball_is_sphere() {
        let m = UfModel::new(QContext::new(0.5).unwrap());
        let x = GeneratingSet::new(&m, UfModel::canonical_generators()).unwrap();
        let t = build_balls(&m, &x, 3, false).unwrap();
        let a: BTreeSet<Label> = t.ball(2).into_iter().collect();
        let inner = inner_boundary(&m, &x, &a).unwrap();
        let sphere: BTreeSet<Label> = t.sphere(2).iter().cloned().collect();
        assert_eq!(inner, sphere);
    }

    #[test]
    fn interval_scan_approaches_closed_forms() {
        let m = su(0.5);
        let x = gen1(&m);
        let scan = folner_scan(&m, &x, &ScanStrategy::Intervals, 40).unwrap();
        let last = scan.last();
        assert!(
            (last.inner_ratio - 0.75).abs() < 1e-9,
            "{}",
            last.inner_ratio
        );
        assert!(
            (last.outer_ratio - 3.75).abs() < 1e-9,
            "{}",
            last.outer_ratio
        );
        // Inner interval ratios decrease: strictly while f64 can resolve the
        // difference, never increasing after that.
        for (i, w) in scan.rows.windows(2).enumerate() {
            if i < 10 {
                assert!(w[1].inner_ratio < w[0].inner_ratio);
            }
            assert!(w[1].inner_ratio <= w[0].inner_ratio + 1e-15);
            assert!(w[1].inner_ratio <= w[1].outer_ratio);
        }
        // Extrapolation should not be worse than the raw tail.
        let extra = scan.extrapolated_inner.unwrap();
        assert!((extra - 0.75).abs() <= (last.inner_ratio - 0.75).abs() + 1e-12);
    }

    #[test]
    fn amenable_scan_ratios_fall() {
        let m = su(1.0);
        let x = gen1(&m);
        let scan = folner_scan(&m, &x, &ScanStrategy::Intervals, 30).unwrap();
        assert!(scan.rows[19].inner_ratio < 0.2);
        assert!(scan.last().inner_ratio < 0.2);
        assert!(scan.last().outer_ratio < 0.2);
        // Both sequences head to zero.
        assert!(scan.last().outer_ratio < scan.rows[9].outer_ratio);
    }

    #[test]
    fn exhaustive_scan_small_su_fragment() {
        let m = su(0.5);
        let x = gen1(&m);
        let fragment: Vec<Label> = (0..=4u32).map(Label::Int).collect();
        let scan = folner_scan(&m, &x, &ScanStrategy::Exhaustive { fragment }, 0).unwrap();
        assert_eq!(scan.rows.len(), 31);
        // The full interval wins.
        assert_eq!(scan.argmin_inner.as_deref(), Some("{0 1 2 3 4}"));
    }

    #[test]
    fn exhaustive_cap_enforced() {
        let m = su(0.5);
        let x = gen1(&m);
        let fragment: Vec<Label> = (0..=21u32).map(Label::Int).collect();
        assert!(folner_scan(&m, &x, &ScanStrategy::Exhaustive { fragment }, 0).is_err());
    }

    #[test]
    fn cx_constants_match_formula() {
        let m = su(0.5);
        let x = gen1(&m);
        let r = c_x_constant(&m, &x, 15).unwrap();
        assert_eq!(r.m_x, 2);
        assert!((r.x_weight - 6.25).abs() < 1e-12);
        assert!((r.c_x - 13.5).abs() < 1e-12);
        assert_eq!(r.verified_radii, 15);
        assert!(r.violations.is_empty());

        let m = SoModel::new(QContext::new(0.5).unwrap());
        let x = gen1(&m);
        let r = c_x_constant(&m, &x, 10).unwrap();
        assert_eq!(r.m_x, 3);
        assert!((r.x_weight - 27.5625).abs() < 1e-10);
        assert!((r.c_x - 83.6875).abs() < 1e-10);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn deep_scans_survive_f64_overflow() {
        // At q = 0.02 the interval sizes pass 1e300 around M = 45; ratios must
        // keep coming from the log-domain shadow.
        let m = SoModel::new(QContext::new(0.02).unwrap());
        let x = gen1(&m);
        let scan = folner_scan(&m, &x, &ScanStrategy::Intervals, 60).unwrap();
        let last = scan.last();
        assert!(last.set_size.is_infinite());
        let expect = 1.0 - 0.02f64.powi(4);
        assert!(
            (last.inner_ratio - expect).abs() < 1e-9,
            "{} vs {expect}",
            last.inner_ratio
        );
        let t = build_balls(&m, &x, 60, false).unwrap();
        assert!(t.ball_size(60).is_infinite());
        assert!(t.ln_ball_size(60).is_finite());
    }

    #[test]
    fn csv_has_fixed_header() {
        let m = su(0.5);
        let x = gen1(&m);
        let scan = folner_scan(&m, &x, &ScanStrategy::Intervals, 3).unwrap();
        let csv = scan.to_csv();
        assert!(csv.starts_with(
            "radius,size,boundary_size,inner_boundary_size,outer_ratio,inner_ratio\n"
        ));
        assert_eq!(csv.lines().count(), 4);
    }
}
