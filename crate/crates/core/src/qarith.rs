//! Exact and floating arithmetic for q-numbers.
//!
//! Everything downstream is expressed through the q-integers
//! `[n]_q = (q^-n - q^n) / (q^-1 - q)`. Exact computations live in
//! [`LaurentPoly`], the ring of Laurent polynomials in `s = q^(1/2)` with
//! arbitrary-precision integer coefficients. The half-integer grid is needed
//! because weight/Weyl-vector pairings of the Lie layer take values in (1/2)Z.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Deformation parameter and arithmetic mode shared by the builtin models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext {
    q: f64,
    exact_mode: bool,
}

impl QContext {
    /// A context for `q` in `(0, 1]`.
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain(format!("q must lie in (0, 1], got {q}")));
        }
        Ok(Self {
            q,
            exact_mode: false,
        })
    }

    /// Same as [`QContext::new`] but downstream consumers should carry exact
    /// Laurent data alongside floats where they support it.
    pub fn exact(q: f64) -> Result<Self> {
        let mut ctx = Self::new(q)?;
        ctx.exact_mode = true;
        Ok(ctx)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_exact(&self) -> bool {
        self.exact_mode
    }

    pub fn is_classical(&self) -> bool {
        self.q == 1.0
    }
}

/// Element of `Z[s, s^-1]` with `s = q^(1/2)`; exponents are stored as the
/// integer power of `s`, so `q^k` sits at exponent `2k`.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// The monomial `c * s^s_exp`.
    pub fn monomial(c: impl Into<BigInt>, s_exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(s_exp, c);
        }
        Self { terms }
    }

    /// The monomial `q^k` (i.e. `s^(2k)`).
    pub fn q_power(k: i64) -> Self {
        Self::monomial(1, 2 * k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0) == BigInt::from(1)
    }

    /// Coefficient at `s^s_exp` (zero when absent).
    pub fn coeff(&self, s_exp: i64) -> BigInt {
        self.terms.get(&s_exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterator over `(s_exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, s_exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s_exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Evaluate at `q` in `(0, 1]`. Terms are summed in increasing order of
    /// magnitude; at `q = 1` the result is the coefficient sum.
    pub fn eval(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain(format!(
                "evaluation point must lie in (0, 1], got {q}"
            )));
        }
        let s = q.sqrt();
        let mut vals: Vec<f64> = self
            .terms
            .iter()
            .map(|(&e, c)| big_to_f64(c) * s.powi_checked(e))
            .collect();
        vals.sort_by(|a, b| {
            a.abs()
                .partial_cmp(&b.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        Ok(vals.iter().sum())
    }

    /// Exact division; errors when `rhs` does not divide `self` in `Z[s, s^-1]`.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Domain(
                "division by the zero Laurent polynomial".into(),
            ));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // Shift both to honest polynomials; units s^k are invertible.
        let lo_num = *self.terms.keys().next().unwrap();
        let lo_den = *rhs.terms.keys().next().unwrap();
        let mut rem: BTreeMap<i64, BigInt> = self
            .terms
            .iter()
            .map(|(&e, c)| (e - lo_num, c.clone()))
            .collect();
        let den: Vec<(i64, BigInt)> = rhs
            .terms
            .iter()
            .map(|(&e, c)| (e - lo_den, c.clone()))
            .collect();
        let (den_deg, den_lead) = den.last().map(|(e, c)| (*e, c.clone())).unwrap();
        let mut quot = LaurentPoly::zero();
        while let Some((&deg, _)) = rem.iter().next_back() {
            if deg < den_deg {
                break;
            }
            let lead = rem.get(&deg).unwrap().clone();
            if (&lead % &den_lead) != BigInt::zero() {
                return Err(Error::Domain("inexact Laurent division".into()));
            }
            let f = &lead / &den_lead;
            let shift = deg - den_deg;
            for (e, c) in &den {
                let entry = rem.entry(e + shift).or_insert_with(BigInt::zero);
                *entry -= &f * c;
                if entry.is_zero() {
                    rem.remove(&(e + shift));
                }
            }
            quot.insert(shift + lo_num - lo_den, f);
        }
        if !rem.is_empty() {
            return Err(Error::Domain("inexact Laurent division".into()));
        }
        Ok(quot)
    }
}

/// `f32::powi`-style integer power that survives negative exponents.
trait PowiChecked {
    fn powi_checked(self, e: i64) -> f64;
}

impl PowiChecked for f64 {
    fn powi_checked(self, e: i64) -> f64 {
        if e >= i32::MIN as i64 && e <= i32::MAX as i64 {
            self.powi(e as i32)
        } else {
            self.powf(e as f64)
        }
    }
}

fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            if first {
                first = false;
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            let a = c.abs();
            let one = a == BigInt::from(1);
            match (e, one) {
                (0, _) => write!(f, "{a}")?,
                (_, false) => write!(f, "{a}*")?,
                _ => {}
            }
            if e != 0 {
                // Render on the q grid when the exponent is even.
                if e % 2 == 0 {
                    let k = e / 2;
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                } else {
                    write!(f, "q^({e}/2)")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.insert(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.insert(e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.insert(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::zero() - self
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.insert(e, c.clone());
        }
    }
}

/// Exact q-integer `[n]_q` as a Laurent polynomial: the sum
/// `q^(n-1) + q^(n-3) + ... + q^(1-n)`.
pub fn qint_exact(n: u32) -> Result<LaurentPoly> {
    if n == 0 {
        return Err(Error::Domain("q-integer index must be >= 1".into()));
    }
    let n = i64::from(n);
    let mut p = LaurentPoly::zero();
    for j in 0..n {
        p.insert(2 * (n - 1 - 2 * j), BigInt::from(1));
    }
    Ok(p)
}

/// Floating `[x]_q` for real `x`: `(q^-x - q^x) / (q^-1 - q)` when `q < 1`
/// and `x` itself when `q = 1`.
pub fn qnum(x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    if ctx.is_classical() {
        x
    } else {
        (q.powf(-x) - q.powf(x)) / (q.recip() - q)
    }
}

/// `ln [x]_q`, stable for large `x` where `[x]_q` itself overflows.
///
/// Uses `[x]_q = q^(1-x) (1 - q^(2x)) / (1 - q^2)`.
pub fn qnum_ln(x: f64, ctx: &QContext) -> f64 {
    let q = ctx.q();
    if ctx.is_classical() {
        x.ln()
    } else {
        (1.0 - x) * q.ln() + (-(q.powf(2.0 * x))).ln_1p() - (-(q * q)).ln_1p()
    }
}

/// Stable evaluation of a Laurent polynomial at `q`.
pub fn laurent_eval(p: &LaurentPoly, q: f64) -> Result<f64> {
    p.eval(q)
}

/// Accumulates a sum of non-negative sizes, keeping a log-domain shadow so
/// quantities like `|B_X(n)| ~ q^(-c n)` remain usable past f64 overflow.
#[derive(Debug, Clone, Copy)]
pub struct HugeSum {
    value: f64,
    ln: f64,
}

impl Default for HugeSum {
    fn default() -> Self {
        Self {
            value: 0.0,
            ln: f64::NEG_INFINITY,
        }
    }
}

impl HugeSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a term given both linearly and as its natural log.
    pub fn add(&mut self, x: f64, ln_x: f64) {
        if x == 0.0 && ln_x == f64::NEG_INFINITY {
            return;
        }
        self.value += x;
        if self.ln == f64::NEG_INFINITY {
            self.ln = ln_x;
        } else {
            let m = self.ln.max(ln_x);
            self.ln = m + ((self.ln - m).exp() + (ln_x - m).exp()).ln();
        }
    }

    pub fn add_value(&mut self, x: f64) {
        self.add(x, x.ln());
    }

    /// Linear value; `+inf` once past the f64 range.
    pub fn value(&self) -> f64 {
        if self.value.is_finite() && self.value < 1e300 {
            self.value
        } else {
            self.ln.exp()
        }
    }

    /// Natural log of the accumulated sum (finite whenever the sum is positive).
    pub fn ln(&self) -> f64 {
        if self.value.is_finite() && self.value < 1e300 && self.value > 0.0 {
            self.value.ln()
        } else {
            self.ln
        }
    }
}
