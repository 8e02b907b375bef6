//! The fusion-algebra abstraction: labels, formal sums, the model trait,
//! axiom validation, product algebras and user-supplied finite fragments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::models::UfWord;
use crate::qarith::LaurentPoly;

/// Canonical label of an irreducible object.
///
/// Non-negative integers label the rank-one deformation models, words label
/// the free unitary model, interned names label custom fragments and pairs
/// label product algebras.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Int(u32),
    Word(UfWord),
    Name(Arc<str>),
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn name(s: &str) -> Self {
        Label::Name(Arc::from(s))
    }

    pub fn pair(a: Label, b: Label) -> Self {
        Label::Pair(Box::new(a), Box::new(b))
    }

    pub fn as_int(&self) -> Option<u32> {
        match self {
            Label::Int(n) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(n) => write!(f, "{n}"),
            Label::Word(w) => write!(f, "{w}"),
            Label::Name(s) => write!(f, "{s}"),
            Label::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Finite multiset of irreducibles with positive integer multiplicities:
/// the decomposition of a product into irreducibles.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FormalSum {
    terms: BTreeMap<Label, u64>,
}

impl FormalSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(l: Label) -> Self {
        let mut s = Self::new();
        s.add(l, 1);
        s
    }

    pub fn add(&mut self, l: Label, mult: u64) {
        if mult == 0 {
            return;
        }
        *self.terms.entry(l).or_insert(0) += mult;
    }

    pub fn multiplicity(&self, l: &Label) -> u64 {
        self.terms.get(l).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Label> {
        self.terms.keys()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, u64)> {
        self.terms.iter().map(|(l, &m)| (l, m))
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.terms.contains_key(l)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total dimension `sum_a N^a * d(a)` of the decomposition.
    pub fn total_dim(&self, model: &dyn FusionModel) -> Result<f64> {
        let mut t = 0.0;
        for (l, m) in self.iter() {
            t += m as f64 * model.dim(l)?;
        }
        Ok(t)
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, m) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m != 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<(Label, u64)> for FormalSum {
    fn from_iter<T: IntoIterator<Item = (Label, u64)>>(iter: T) -> Self {
        let mut s = Self::new();
        for (l, m) in iter {
            s.add(l, m);
        }
        s
    }
}

/// Behavioural interface of a fusion algebra with dimension function.
///
/// Implementations must be pure and immutable after construction, so models
/// can be shared across worker threads.
pub trait FusionModel: Send + Sync {
    fn unit(&self) -> Label;

    fn conj(&self, x: &Label) -> Result<Label>;

    /// Decomposition of `x * y` into irreducibles with multiplicities.
    fn product(&self, x: &Label, y: &Label) -> Result<FormalSum>;

    fn dim(&self, x: &Label) -> Result<f64>;

    /// `ln d(x)`, overridden where the naive `dim` would overflow.
    fn ln_dim(&self, x: &Label) -> Result<f64> {
        Ok(self.dim(x)?.ln())
    }

    /// Exact quantum dimension when the model supports it.
    fn dim_exact(&self, _x: &Label) -> Option<LaurentPoly> {
        None
    }

    /// Exact rational dimension, for models whose dimensions are rational
    /// constants rather than q-polynomials.
    fn dim_rational(&self, _x: &Label) -> Option<BigRational> {
        None
    }

    /// Whether the set of irreducibles can be lazily generated from a finite
    /// generating set (finite fragments cannot: their products may leave the
    /// known table).
    fn enumerable(&self) -> bool {
        true
    }

    fn describe(&self) -> String;
}

/// Convenience: the product of `x` and `y` in `model`.
pub fn product(model: &dyn FusionModel, x: &Label, y: &Label) -> Result<FormalSum> {
    model.product(x, y)
}

/// Outcome of sampling the fusion axioms over a finite set of labels.
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub checked_triples: usize,
    /// Triples `(xi, eta, alpha)` where the three reciprocity numbers differ.
    pub frobenius_failures: Vec<(Label, Label, Label)>,
    /// Pairs `(xi, eta)` where `sum N d(alpha)` strays from `d(xi) d(eta)`.
    pub dim_failures: Vec<(Label, Label)>,
    /// Labels where `d(conj x) != d(x)` or `conj(conj x) != x`.
    pub involution_failures: Vec<Label>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.frobenius_failures.is_empty()
            && self.dim_failures.is_empty()
            && self.involution_failures.is_empty()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "checked {} triples", self.checked_triples)?;
        for (a, b, c) in &self.frobenius_failures {
            writeln!(f, "  reciprocity broken at ({a}, {b}, {c})")?;
        }
        for (a, b) in &self.dim_failures {
            writeln!(f, "  dimension multiplicativity broken at ({a}, {b})")?;
        }
        for a in &self.involution_failures {
            writeln!(f, "  involution broken at {a}")?;
        }
        Ok(())
    }
}

const DIM_MULT_RTOL: f64 = 1e-9;

/// Check Frobenius reciprocity, involution compatibility and dimension
/// multiplicativity over the closure of pairwise products of `sample`.
///
/// Products are computed for every pair meeting the sample (or its
/// conjugates), so each sampled triple can be compared against both of its
/// reciprocity partners. Failures are reported as data, not errors; products
/// a finite fragment cannot answer are skipped.
pub fn validate_axioms(model: &dyn FusionModel, sample: &[Label]) -> Result<AxiomReport> {
    let mut report = AxiomReport::default();

    // Closure: sample, unit, conjugates, and everything in pairwise products.
    let mut core: BTreeSet<Label> = sample.iter().cloned().collect();
    core.insert(model.unit());
    for x in sample {
        core.insert(model.conj(x)?);
    }
    let mut closure = core.clone();
    for x in &core {
        for y in &core {
            match model.product(x, y) {
                Ok(p) => closure.extend(p.support().cloned()),
                Err(Error::OutOfFragment(..)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let labels: Vec<Label> = closure.iter().cloned().collect();
    let index: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let core_idx: Vec<bool> = labels.iter().map(|l| core.contains(l)).collect();
    let n_elems = labels.len();

    // Conjugates of non-core closure elements may leave the closure; such
    // reciprocity partners are simply unknown.
    let mut conj_idx: Vec<Option<usize>> = Vec::with_capacity(n_elems);
    for x in &labels {
        let xbar = model.conj(x)?;
        let mut ok = model.conj(&xbar)? == *x;
        ok &= (model.dim(&xbar)? - model.dim(x)?).abs() <= DIM_MULT_RTOL * model.dim(x)?.abs();
        if let (Some(ex), Some(exbar)) = (model.dim_exact(x), model.dim_exact(&xbar)) {
            ok &= ex == exbar;
        }
        if !ok {
            report.involution_failures.push(x.clone());
        }
        conj_idx.push(index.get(&xbar).copied());
    }

    // Sparse structure-constant tensor over pairs meeting the core.
    let mut known = vec![false; n_elems * n_elems];
    let mut tensor: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
    let mut products: Vec<((usize, usize), FormalSum)> = Vec::new();
    for i in 0..n_elems {
        for j in 0..n_elems {
            if !core_idx[i] && !core_idx[j] {
                continue;
            }
            let p = match model.product(&labels[i], &labels[j]) {
                Ok(p) => p,
                Err(Error::OutOfFragment(..)) => continue,
                Err(e) => return Err(e),
            };
            known[i * n_elems + j] = true;
            for (alpha, m) in p.iter() {
                if let Some(&a) = index.get(alpha) {
                    tensor.insert((i, j, a), m);
                }
            }
            if core_idx[i] && core_idx[j] {
                products.push(((i, j), p));
            }
        }
    }

    // d(xi) d(eta) = sum_alpha N d(alpha) on core pairs, exactly when the
    // model supports it; dimensions are memoised per label.
    let mut exact_cache: BTreeMap<Label, Option<LaurentPoly>> = BTreeMap::new();
    let mut exact_dim = |l: &Label| -> Option<LaurentPoly> {
        exact_cache
            .entry(l.clone())
            .or_insert_with(|| model.dim_exact(l))
            .clone()
    };
    for ((i, j), p) in &products {
        let (xi, eta) = (&labels[*i], &labels[*j]);
        let mut ok = true;
        if let (Some(ex), Some(ee)) = (exact_dim(xi), exact_dim(eta)) {
            let mut sum = LaurentPoly::zero();
            let mut complete = true;
            for (alpha, m) in p.iter() {
                match exact_dim(alpha) {
                    Some(ea) => sum += &(&ea * &LaurentPoly::constant(BigInt::from(m))),
                    None => complete = false,
                }
            }
            if complete {
                ok = sum == &ex * &ee;
            }
        } else if let (Some(rx), Some(re)) = (model.dim_rational(xi), model.dim_rational(eta)) {
            let mut sum = BigRational::zero();
            let mut complete = true;
            for (alpha, m) in p.iter() {
                match model.dim_rational(alpha) {
                    Some(ra) => sum += ra * BigRational::from_integer(BigInt::from(m)),
                    None => complete = false,
                }
            }
            if complete {
                ok = sum == rx * re;
            }
        } else {
            let expect = model.dim(xi)? * model.dim(eta)?;
            let mut sum = 0.0;
            for (alpha, m) in p.iter() {
                sum += m as f64 * model.dim(alpha)?;
            }
            ok = (sum - expect).abs() <= DIM_MULT_RTOL * expect.abs();
        }
        if !ok {
            report.dim_failures.push((xi.clone(), eta.clone()));
        }
    }

    // N^alpha_{xi,eta} = N^xi_{alpha,conj(eta)} = N^eta_{conj(xi),alpha}:
    // compare every recorded entry against its two permutation partners.
    // A missing entry of a known pair counts as zero; triples whose partner
    // pair is unknown are skipped.
    let mut frobenius: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let lookup = |tensor: &BTreeMap<(usize, usize, usize), u64>,
                  known: &[bool],
                  key: (usize, usize, usize)|
     -> Option<u64> {
        if known[key.0 * n_elems + key.1] {
            Some(tensor.get(&key).copied().unwrap_or(0))
        } else {
            None
        }
    };
    for (&(i, j, a), &n1) in &tensor {
        let partners = [
            conj_idx[j].map(|jb| (a, jb, i)),
            conj_idx[i].map(|ib| (ib, a, j)),
        ];
        for partner in partners.into_iter().flatten() {
            report.checked_triples += 1;
            if let Some(n2) = lookup(&tensor, &known, partner) {
                if n2 != n1 {
                    frobenius.insert((i, j, a));
                }
            }
        }
    }
    report.frobenius_failures.extend(
        frobenius
            .into_iter()
            .map(|(i, j, a)| (labels[i].clone(), labels[j].clone(), labels[a].clone())),
    );
    Ok(report)
}

/// Product fusion algebra: irreducibles are pairs, structure constants
/// multiply componentwise and dimensions multiply.
pub struct ProductModel {
    left: Arc<dyn FusionModel>,
    right: Arc<dyn FusionModel>,
}

/// Build the product of two fusion algebras.
pub fn product_algebra(left: Arc<dyn FusionModel>, right: Arc<dyn FusionModel>) -> ProductModel {
    ProductModel { left, right }
}

impl ProductModel {
    fn split<'l>(&self, x: &'l Label) -> Result<(&'l Label, &'l Label)> {
        match x {
            Label::Pair(a, b) => Ok((a, b)),
            _ => Err(Error::MalformedLabel(x.clone())),
        }
    }

    /// The generating set `{x (x) e} U {e (x) y}` induced by factor sets.
    pub fn side_generators(&self, left: &[Label], right: &[Label]) -> Vec<Label> {
        let mut out: Vec<Label> = left
            .iter()
            .map(|x| Label::pair(x.clone(), self.right.unit()))
            .collect();
        out.extend(
            right
                .iter()
                .map(|y| Label::pair(self.left.unit(), y.clone())),
        );
        out
    }
}

impl FusionModel for ProductModel {
    fn unit(&self) -> Label {
        Label::pair(self.left.unit(), self.right.unit())
    }

    fn conj(&self, x: &Label) -> Result<Label> {
        let (a, b) = self.split(x)?;
        Ok(Label::pair(self.left.conj(a)?, self.right.conj(b)?))
    }

    fn product(&self, x: &Label, y: &Label) -> Result<FormalSum> {
        let (a, b) = self.split(x)?;
        let (c, d) = self.split(y)?;
        let p = self.left.product(a, c)?;
        let q = self.right.product(b, d)?;
        let mut out = FormalSum::new();
        for (l, m) in p.iter() {
            for (r, n) in q.iter() {
                out.add(Label::pair(l.clone(), r.clone()), m * n);
            }
        }
        Ok(out)
    }

    fn dim(&self, x: &Label) -> Result<f64> {
        let (a, b) = self.split(x)?;
        Ok(self.left.dim(a)? * self.right.dim(b)?)
    }

    fn ln_dim(&self, x: &Label) -> Result<f64> {
        let (a, b) = self.split(x)?;
        Ok(self.left.ln_dim(a)? + self.right.ln_dim(b)?)
    }

    fn dim_exact(&self, x: &Label) -> Option<LaurentPoly> {
        let (a, b) = self.split(x).ok()?;
        Some(&self.left.dim_exact(a)? * &self.right.dim_exact(b)?)
    }

    fn enumerable(&self) -> bool {
        self.left.enumerable() && self.right.enumerable()
    }

    fn describe(&self) -> String {
        format!("{} x {}", self.left.describe(), self.right.describe())
    }
}

/// A fusion algebra given by an explicit finite table.
///
/// Products whose decomposition the table does not know (marked `null` in the
/// document) produce [`Error::OutOfFragment`] instead of being truncated.
/// Sparse product table of a finite fragment: `None` marks a pair whose
/// decomposition leaves the fragment.
type FragmentTable = BTreeMap<(usize, usize), Option<Vec<(usize, u64)>>>;

#[derive(Debug)]
pub struct CustomModel {
    names: Vec<Arc<str>>,
    unit: usize,
    conj: Vec<usize>,
    dims: Vec<BigRational>,
    table: FragmentTable,
}

impl CustomModel {
    fn index(&self, x: &Label) -> Result<usize> {
        let Label::Name(s) = x else {
            return Err(Error::MalformedLabel(x.clone()));
        };
        self.names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Error::MalformedLabel(x.clone()))
    }

    pub fn irreducibles(&self) -> Vec<Label> {
        self.names.iter().map(|n| Label::Name(n.clone())).collect()
    }
}

impl FusionModel for CustomModel {
    fn unit(&self) -> Label {
        Label::Name(self.names[self.unit].clone())
    }

    fn conj(&self, x: &Label) -> Result<Label> {
        let i = self.index(x)?;
        Ok(Label::Name(self.names[self.conj[i]].clone()))
    }

    fn product(&self, x: &Label, y: &Label) -> Result<FormalSum> {
        let i = self.index(x)?;
        let j = self.index(y)?;
        match self.table.get(&(i, j)) {
            Some(Some(entries)) => Ok(entries
                .iter()
                .map(|&(k, m)| (Label::Name(self.names[k].clone()), m))
                .collect()),
            Some(None) | None => Err(Error::OutOfFragment(x.clone(), y.clone())),
        }
    }

    fn dim(&self, x: &Label) -> Result<f64> {
        let i = self.index(x)?;
        Ok(rational_to_f64(&self.dims[i]))
    }

    fn dim_rational(&self, x: &Label) -> Option<BigRational> {
        self.index(x).ok().map(|i| self.dims[i].clone())
    }

    fn enumerable(&self) -> bool {
        // A table with unknown entries is a fragment of something larger;
        // a complete table is closed under products.
        self.table.values().all(Option::is_some)
    }

    fn describe(&self) -> String {
        format!("custom fusion model ({} irreducibles)", self.names.len())
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// Parse a decimal string such as "2", "2.5" or "-0.75" into an exact rational.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut num: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().ok()?
    };
    let mut den = BigInt::one();
    for c in frac_part.chars() {
        num = num * 10 + (c as u8 - b'0');
        den *= 10;
    }
    Some(BigRational::new(num * sign, den))
}

/// Load a fusion algebra from its JSON document.
///
/// Expected shape:
///
/// ```json
/// {
///   "irreducibles": ["e", "g"],
///   "unit": "e",
///   "conjugate": {"e": "e", "g": "g"},
///   "dim": {"e": "1", "g": "1"},
///   "product": {"e,e": {"e": 1}, "e,g": {"g": 1}, "g,e": {"g": 1}, "g,g": {"e": 1}}
/// }
/// ```
///
/// Every ordered pair must appear as a key of `product`; a pair whose true
/// decomposition leaves the listed fragment carries the value `null`.
/// The axioms are validated on the full fragment before the model is returned.
pub fn load_custom(document: &str) -> Result<CustomModel> {
    let doc: serde_json::Value = serde_json::from_str(document)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::InvalidDocument("top level must be an object".into()))?;

    let irr = obj
        .get("irreducibles")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::InvalidDocument("missing `irreducibles` list".into()))?;
    let mut names: Vec<Arc<str>> = Vec::new();
    for v in irr {
        let s = v
            .as_str()
            .ok_or_else(|| Error::InvalidDocument("irreducible names must be strings".into()))?;
        if names.iter().any(|n| &**n == s) {
            return Err(Error::InvalidDocument(format!(
                "duplicate irreducible `{s}`"
            )));
        }
        names.push(Arc::from(s));
    }
    if names.is_empty() {
        return Err(Error::InvalidDocument("no irreducibles listed".into()));
    }
    let find = |s: &str| -> Result<usize> {
        names
            .iter()
            .position(|n| &**n == s)
            .ok_or_else(|| Error::InvalidDocument(format!("unknown irreducible `{s}`")))
    };

    let unit_name = obj
        .get("unit")
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::InvalidDocument("missing `unit`".into()))?;
    let unit = find(unit_name)?;

    let conj_map = obj
        .get("conjugate")
        .and_then(|v| v.as_object())
        .ok_or_else(|| Error::InvalidDocument("missing `conjugate` map".into()))?;
    let mut conj = vec![usize::MAX; names.len()];
    for (k, v) in conj_map {
        let s = v
            .as_str()
            .ok_or_else(|| Error::InvalidDocument("conjugate values must be names".into()))?;
        conj[find(k)?] = find(s)?;
    }
    if conj.iter().any(|&c| c == usize::MAX) {
        return Err(Error::InvalidDocument(
            "conjugate map must cover every irreducible".into(),
        ));
    }
    for (i, &c) in conj.iter().enumerate() {
        if conj[c] != i {
            return Err(Error::InvalidDocument(format!(
                "conjugation is not involutive at `{}`",
                names[i]
            )));
        }
    }
    if conj[unit] != unit {
        return Err(Error::InvalidDocument(
            "conjugate of the unit must be the unit".into(),
        ));
    }

    let dim_map = obj
        .get("dim")
        .and_then(|v| v.as_object())
        .ok_or_else(|| Error::InvalidDocument("missing `dim` map".into()))?;
    let mut dims = vec![BigRational::zero(); names.len()];
    let mut seen = vec![false; names.len()];
    for (k, v) in dim_map {
        let r = match v {
            serde_json::Value::String(s) => parse_decimal(s),
            serde_json::Value::Number(n) => n.as_f64().and_then(|x| {
                // Only accept numbers with a short exact decimal form.
                parse_decimal(&format!("{x}"))
            }),
            _ => None,
        }
        .ok_or_else(|| Error::InvalidDocument(format!("dimension of `{k}` is not a decimal")))?;
        let i = find(k)?;
        dims[i] = r;
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::InvalidDocument(
            "dim map must cover every irreducible".into(),
        ));
    }
    for (i, d) in dims.iter().enumerate() {
        if *d < BigRational::one() {
            return Err(Error::InvalidDocument(format!(
                "dimension of `{}` is {} < 1",
                names[i], d
            )));
        }
    }
    if !dims[unit].is_one() {
        return Err(Error::InvalidDocument(
            "the unit must have dimension 1".into(),
        ));
    }

    let prod_map = obj
        .get("product")
        .and_then(|v| v.as_object())
        .ok_or_else(|| Error::InvalidDocument("missing `product` table".into()))?;
    let mut table = FragmentTable::new();
    for (k, v) in prod_map {
        let (a, b) = k
            .split_once(',')
            .ok_or_else(|| Error::InvalidDocument(format!("product key `{k}` is not `a,b`")))?;
        let key = (find(a.trim())?, find(b.trim())?);
        let entry = match v {
            serde_json::Value::Null => None,
            serde_json::Value::Object(m) => {
                let mut decomposition = Vec::new();
                for (name, mult) in m {
                    let mult = mult.as_u64().filter(|&m| m >= 1).ok_or_else(|| {
                        Error::InvalidDocument(format!(
                            "multiplicity of `{name}` in `{k}` must be a positive integer"
                        ))
                    })?;
                    decomposition.push((find(name)?, mult));
                }
                Some(decomposition)
            }
            _ => {
                return Err(Error::InvalidDocument(format!(
                    "product entry `{k}` must be an object or null"
                )))
            }
        };
        table.insert(key, entry);
    }
    for i in 0..names.len() {
        for j in 0..names.len() {
            if !table.contains_key(&(i, j)) {
                return Err(Error::InvalidDocument(format!(
                    "product table is incomplete: missing `{},{}`",
                    names[i], names[j]
                )));
            }
        }
    }

    let model = CustomModel {
        names,
        unit,
        conj,
        dims,
        table,
    };

    // Unit axiom on known rows, then the sampled axioms on the whole fragment.
    let e = model.unit();
    for x in model.irreducibles() {
        for (a, b) in [(&e, &x), (&x, &e)] {
            if let Ok(p) = model.product(a, b) {
                if p != FormalSum::singleton(x.clone()) {
                    return Err(Error::InvalidDocument(format!(
                        "unit is not an identity at `{x}`"
                    )));
                }
            }
        }
    }
    let report = validate_axioms(&model, &model.irreducibles())?;
    if !report.is_clean() {
        return Err(Error::AxiomsViolated(report.to_string()));
    }
    Ok(model)
}
