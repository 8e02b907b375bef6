//! Root-system data for the simple types in exact rational arithmetic:
//! Cartan matrices, positive-root closures, weight/Weyl-vector pairings,
//! quantum Weyl dimensions and the per-type uniform growth rates.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qarith::{qint_exact, qnum, LaurentPoly, QContext};

/// The simple types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl LieType {
    pub fn parse(s: &str) -> Option<LieType> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Some(LieType::A),
            "B" => Some(LieType::B),
            "C" => Some(LieType::C),
            "D" => Some(LieType::D),
            "E" => Some(LieType::E),
            "F" => Some(LieType::F),
            "G" => Some(LieType::G),
            _ => None,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::C => 'C',
            LieType::D => 'D',
            LieType::E => 'E',
            LieType::F => 'F',
            LieType::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A dominant weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DominantWeight(pub Vec<u32>);

impl DominantWeight {
    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    /// The i-th fundamental weight, 1-indexed.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= rank, "fundamental weight index out of range");
        let mut v = vec![0; rank];
        v[i - 1] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Exact root-system data of a simple type.
///
/// The inner product is normalised so short roots have square-length 2;
/// `sym[i] = <a_i|a_i>/2` are the symmetrizers, and the Gram matrix holds
/// `<w_i|w_j>` for the fundamental weights.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub lie_type: LieType,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub sym: Vec<i64>,
    /// Positive roots in simple-root coordinates, by increasing height.
    pub positive_roots: Vec<Vec<i64>>,
    pub gram: Vec<Vec<Rational64>>,
    /// `<w_i|rho>` for each fundamental weight.
    pub weight_rho: Vec<Rational64>,
    /// `<rho|rho>`.
    pub rho_rho: Rational64,
}

fn chain_cartan(rank: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        a[i][i] = 2;
        if i + 1 < rank {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

fn cartan_data(t: LieType, rank: usize) -> Result<(Vec<Vec<i64>>, Vec<i64>)> {
    let bad = |msg: &str| {
        Err(Error::Domain(format!(
            "invalid rank {rank} for type {t}: {msg}"
        )))
    };
    match t {
        LieType::A => {
            if rank < 1 {
                return bad("need rank >= 1");
            }
            Ok((chain_cartan(rank), vec![1; rank]))
        }
        LieType::B => {
            if rank < 2 {
                return bad("need rank >= 2");
            }
            let mut a = chain_cartan(rank);
            a[rank - 1][rank - 2] = -2;
            let mut d = vec![2; rank];
            d[rank - 1] = 1;
            Ok((a, d))
        }
        LieType::C => {
            if rank < 3 {
                return bad("need rank >= 3");
            }
            let mut a = chain_cartan(rank);
            a[rank - 2][rank - 1] = -2;
            let mut d = vec![1; rank];
            d[rank - 1] = 2;
            Ok((a, d))
        }
        LieType::D => {
            if rank < 4 {
                return bad("need rank >= 4");
            }
            let mut a = chain_cartan(rank);
            // Detach the last chain link and fork both end nodes off rank-3.
            a[rank - 1][rank - 2] = 0;
            a[rank - 2][rank - 1] = 0;
            a[rank - 3][rank - 1] = -1;
            a[rank - 1][rank - 3] = -1;
            Ok((a, vec![1; rank]))
        }
        LieType::E => {
            if !(6..=8).contains(&rank) {
                return bad("need rank in {6, 7, 8}");
            }
            let mut a = vec![vec![0i64; rank]; rank];
            for (i, row) in a.iter_mut().enumerate() {
                row[i] = 2;
            }
            let mut edges = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
            if rank >= 7 {
                edges.push((5, 6));
            }
            if rank == 8 {
                edges.push((6, 7));
            }
            for (i, j) in edges {
                a[i][j] = -1;
                a[j][i] = -1;
            }
            Ok((a, vec![1; rank]))
        }
        LieType::F => {
            if rank != 4 {
                return bad("need rank 4");
            }
            let mut a = chain_cartan(4);
            a[2][1] = -2;
            Ok((a, vec![2, 2, 1, 1]))
        }
        LieType::G => {
            if rank != 2 {
                return bad("need rank 2");
            }
            Ok((vec![vec![2, -3], vec![-1, 2]], vec![1, 3]))
        }
    }
}

fn classical_positive_root_count(t: LieType, n: usize) -> usize {
    match t {
        LieType::A => n * (n + 1) / 2,
        LieType::B | LieType::C => n * n,
        LieType::D => n * (n - 1),
        LieType::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        LieType::F => 24,
        LieType::G => 6,
    }
}

/// Exact inverse of an integer matrix by Gauss-Jordan over rationals.
fn invert_rational(a: &[Vec<i64>]) -> Option<Vec<Vec<Rational64>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let mut inv: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rational64::from_integer(i64::from(i == j)))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col];
            for j in 0..n {
                let (mc, ic) = (m[col][j], inv[col][j]);
                m[r][j] -= f * mc;
                inv[r][j] -= f * ic;
            }
        }
    }
    Some(inv)
}

/// Build the full root-system data for a valid `(type, rank)` pair.
///
/// Positive roots are generated by closing the simple roots under root
/// strings; Gram and Weyl-vector pairings are solved exactly from
/// `<w_i|a_j> = delta_ij d_j`.
pub fn build_root_system(t: LieType, rank: usize) -> Result<RootSystem> {
    let (cartan, sym) = cartan_data(t, rank)?;
    for i in 0..rank {
        for j in 0..rank {
            debug_assert_eq!(sym[i] * cartan[i][j], sym[j] * cartan[j][i]);
        }
    }

    // Closure under adding simple roots; the string condition
    // q = p - <b, a_i^v> > 0 decides whether b + a_i is a root.
    let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        roots.insert(e);
    }
    let mut frontier: Vec<Vec<i64>> = roots.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..rank {
                let pairing: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
                let mut p = 0i64;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if down[i] < 0 || !roots.contains(&down) {
                        break;
                    }
                    p += 1;
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if roots.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut positive_roots: Vec<Vec<i64>> = roots.into_iter().collect();
    positive_roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
    let expected = classical_positive_root_count(t, rank);
    if positive_roots.len() != expected {
        return Err(Error::Domain(format!(
            "root closure of {t}{rank} produced {} positive roots, expected {expected}",
            positive_roots.len()
        )));
    }

    let inv = invert_rational(&cartan)
        .ok_or_else(|| Error::Domain(format!("Cartan matrix of {t}{rank} is singular")))?;
    // <w_i|w_j> = d_i (A^-1)_ij.
    let gram: Vec<Vec<Rational64>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| Rational64::from_integer(sym[i]) * inv[i][j])
                .collect()
        })
        .collect();
    for i in 0..rank {
        for j in 0..rank {
            debug_assert_eq!(gram[i][j], gram[j][i]);
        }
    }
    let weight_rho: Vec<Rational64> = gram.iter().map(|row| row.iter().sum()).collect();
    if weight_rho.iter().any(|p| !p.is_positive()) {
        return Err(Error::Domain(format!(
            "non-positive Weyl pairing in {t}{rank}"
        )));
    }
    let rho_rho: Rational64 = weight_rho.iter().sum();

    let rs = RootSystem {
        lie_type: t,
        rank,
        cartan,
        sym,
        positive_roots,
        gram,
        weight_rho,
        rho_rho,
    };
    // <rho|a> >= 1 for every positive root.
    debug_assert!(rs
        .positive_roots
        .iter()
        .all(|r| rs.rho_root_pairing(r) >= 1));
    Ok(rs)
}

impl RootSystem {
    pub fn check_weight(&self, w: &DominantWeight) -> Result<()> {
        if w.0.len() != self.rank {
            return Err(Error::Domain(format!(
                "weight {w} has {} coordinates but the rank is {}",
                w.0.len(),
                self.rank
            )));
        }
        Ok(())
    }

    /// Number of roots `s = 2 #Phi+`.
    pub fn root_count(&self) -> usize {
        2 * self.positive_roots.len()
    }

    /// `<lam + rho | a>` for a positive root `a` in simple-root coordinates:
    /// always a positive integer.
    fn shifted_pairing(&self, lam: &DominantWeight, root: &[i64]) -> i64 {
        (0..self.rank)
            .map(|i| (i64::from(lam.0[i]) + 1) * root[i] * self.sym[i])
            .sum()
    }

    fn rho_root_pairing(&self, root: &[i64]) -> i64 {
        (0..self.rank).map(|i| root[i] * self.sym[i]).sum()
    }

    /// `<lam|rho>` as an exact rational.
    pub fn weight_rho_pairing(&self, lam: &DominantWeight) -> Result<Rational64> {
        self.check_weight(lam)?;
        Ok((0..self.rank)
            .map(|i| Rational64::from_integer(i64::from(lam.0[i])) * self.weight_rho[i])
            .sum())
    }
}

/// Quantum Weyl dimension `prod_a [<lam+rho|a>]_q / [<rho|a>]_q` over the
/// positive roots.
pub fn quantum_dim(rs: &RootSystem, lam: &DominantWeight, q: f64) -> Result<f64> {
    rs.check_weight(lam)?;
    let ctx = QContext::new(q)?;
    let mut d = 1.0;
    for root in &rs.positive_roots {
        let a = rs.shifted_pairing(lam, root);
        let b = rs.rho_root_pairing(root);
        d *= qnum(a as f64, &ctx) / qnum(b as f64, &ctx);
    }
    Ok(d)
}

/// Exact quantum Weyl dimension as a Laurent polynomial.
pub fn quantum_dim_exact(rs: &RootSystem, lam: &DominantWeight) -> Result<LaurentPoly> {
    rs.check_weight(lam)?;
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for root in &rs.positive_roots {
        let a = rs.shifted_pairing(lam, root);
        let b = rs.rho_root_pairing(root);
        let a = u32::try_from(a).map_err(|_| Error::Domain(format!("pairing {a} overflows")))?;
        let b = u32::try_from(b).map_err(|_| Error::Domain(format!("pairing {b} overflows")))?;
        num = &num * &qint_exact(a)?;
        den = &den * &qint_exact(b)?;
    }
    num.div_exact(&den)
}

/// Classical Weyl dimension, exactly.
pub fn classical_dim(rs: &RootSystem, lam: &DominantWeight) -> Result<BigInt> {
    rs.check_weight(lam)?;
    let mut d = BigRational::one();
    for root in &rs.positive_roots {
        let a = rs.shifted_pairing(lam, root);
        let b = rs.rho_root_pairing(root);
        d *= BigRational::new(BigInt::from(a), BigInt::from(b));
    }
    if !d.is_integer() {
        return Err(Error::Domain(format!(
            "classical dimension of {lam} is not integral: {d}"
        )));
    }
    Ok(d.to_integer())
}

/// Largest modular eigenvalue `q^(-<lam|2 rho>)`.
pub fn gamma(rs: &RootSystem, lam: &DominantWeight, q: f64) -> Result<f64> {
    QContext::new(q)?;
    let pairing = rs.weight_rho_pairing(lam)?;
    Ok(q.powf(-2.0 * rational_to_f64(&pairing)))
}

/// Growth rate over a generating set of dominant weights:
/// `max_lam q^(-4 <lam|rho>)`. The caller asserts the set generates.
pub fn growth_for_set(rs: &RootSystem, set: &[DominantWeight], q: f64) -> Result<f64> {
    QContext::new(q)?;
    if set.is_empty() {
        return Err(Error::Domain(
            "generating set of weights must be non-empty".into(),
        ));
    }
    let mut best = f64::NEG_INFINITY;
    for lam in set {
        let p = rational_to_f64(&rs.weight_rho_pairing(lam)?);
        best = best.max(p);
    }
    Ok(q.powf(-4.0 * best))
}

/// The per-type uniform growth rate with its canonical generating set.
#[derive(Debug, Clone)]
pub struct UniformGrowth {
    pub rate: f64,
    /// `rate = q^(-exponent)`.
    pub exponent: i64,
    pub canonical_set: Vec<DominantWeight>,
    /// Set when `q = 1`: the rate degenerates to 1.
    pub amenable: bool,
}

/// Closed-form uniform growth rate for a simple type, reported together with
/// the canonical generating set that attains it. Exponents:
/// A: 2N, B: 2N^2, C: 4N, D: N(N-1), E6: 32, E7: 54, E8: 116, F4: 44, G2: 20.
pub fn uniform_growth(rs: &RootSystem, q: f64) -> Result<UniformGrowth> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::Domain(format!("q must lie in (0, 1], got {q}")));
    }
    let n = rs.rank;
    let ni = n as i64;
    let (exponent, set): (i64, Vec<DominantWeight>) = match rs.lie_type {
        LieType::A => {
            let mut set = vec![DominantWeight::fundamental(n, 1)];
            if n > 1 {
                set.push(DominantWeight::fundamental(n, n));
            }
            (2 * ni, set)
        }
        LieType::B => (2 * ni * ni, vec![DominantWeight::fundamental(n, n)]),
        LieType::C => (4 * ni, vec![DominantWeight::fundamental(n, 1)]),
        LieType::D => (
            ni * (ni - 1),
            vec![
                DominantWeight::fundamental(n, 1),
                DominantWeight::fundamental(n, n - 1),
                DominantWeight::fundamental(n, n),
            ],
        ),
        LieType::E => {
            let (e, set) = match n {
                6 => (
                    32,
                    vec![
                        DominantWeight::fundamental(6, 1),
                        DominantWeight::fundamental(6, 6),
                    ],
                ),
                7 => (54, vec![DominantWeight::fundamental(7, 7)]),
                _ => (116, vec![DominantWeight::fundamental(8, 8)]),
            };
            (e, set)
        }
        LieType::F => (44, vec![DominantWeight::fundamental(4, 4)]),
        LieType::G => (20, vec![DominantWeight::fundamental(2, 1)]),
    };

    // The closed form must agree with the generic rate over the canonical set.
    let mut max_pairing = Rational64::zero();
    for lam in &set {
        let p = rs.weight_rho_pairing(lam)?;
        if p > max_pairing {
            max_pairing = p;
        }
    }
    if max_pairing * 4 != Rational64::from_integer(exponent) {
        return Err(Error::Domain(format!(
            "canonical-set pairing {} disagrees with the closed-form exponent {exponent} for {}{}",
            max_pairing, rs.lie_type, rs.rank
        )));
    }

    if q == 1.0 {
        return Ok(UniformGrowth {
            rate: 1.0,
            exponent,
            canonical_set: set,
            amenable: true,
        });
    }
    Ok(UniformGrowth {
        rate: q
            .powi(i32::try_from(-exponent).map_err(|_| Error::Domain("exponent overflow".into()))?),
        exponent,
        canonical_set: set,
        amenable: false,
    })
}

/// The three quantities of the dimension sandwich
/// `q^(-<lam|2rho>) <= d(lam) <= (q^-1 - q)^(-s/2) q^(-<rho|2rho>) q^(-<lam|2rho>)`.
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub lower: f64,
    pub dim: f64,
    pub upper: f64,
    pub ok: bool,
}

/// Evaluate the dimension sandwich for `q` in `(0, 1)`.
pub fn dim_sandwich_check(rs: &RootSystem, lam: &DominantWeight, q: f64) -> Result<SandwichReport> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain(format!(
            "the sandwich needs q in (0, 1), got {q}"
        )));
    }
    let lower = gamma(rs, lam, q)?;
    let dim = quantum_dim(rs, lam, q)?;
    let s = rs.root_count() as i32;
    let upper = (q.recip() - q).powi(-s / 2) * q.powf(-2.0 * rational_to_f64(&rs.rho_rho)) * lower;
    let ok = lower <= dim * (1.0 + 1e-9) && dim <= upper * (1.0 + 1e-9);
    Ok(SandwichReport {
        lower,
        dim,
        upper,
        ok,
    })
}

fn rational_to_f64(r: &Rational64) -> f64 {
    r.to_f64().expect("rational fits in f64")
}

/// Render the pairing list as exact fractions, for the CLI table.
pub fn pairing_strings(rs: &RootSystem) -> Vec<String> {
    rs.weight_rho.iter().map(|r| r.to_string()).collect()
}
