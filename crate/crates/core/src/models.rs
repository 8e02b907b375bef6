//! Built-in fusion models: the rank-one deformation families SU_q(2) and
//! SO_q(3), the free unitary word model U_F+, and the parameter maps that
//! translate O_N+/S_N+/matrix data into the deformation parameter q.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fusion::{FormalSum, FusionModel, Label};
use crate::qarith::{qint_exact, qnum, qnum_ln, LaurentPoly, QContext};

/// Fusion algebra with irreducibles 0, 1, 2, ... and the rule
/// `m (x) n = |m-n| (+) (|m-n|+2) (+) ... (+) (m+n)`.
///
/// Dimensions are `d(n) = [n+1]_q`.
#[derive(Debug, Clone, Copy)]
pub struct SuModel {
    ctx: QContext,
}

impl SuModel {
    pub fn new(ctx: QContext) -> Self {
        Self { ctx }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }
}

/// Decomposition of `m (x) n` for the SU family: steps of two.
pub fn su_product(m: u32, n: u32) -> FormalSum {
    let lo = m.abs_diff(n);
    let hi = m + n;
    (lo..=hi).step_by(2).map(|k| (Label::Int(k), 1)).collect()
}

/// Decomposition of `m (x) n` for the SO family: every level in between.
pub fn so_product(m: u32, n: u32) -> FormalSum {
    let lo = m.abs_diff(n);
    let hi = m + n;
    (lo..=hi).map(|k| (Label::Int(k), 1)).collect()
}

impl FusionModel for SuModel {
    fn unit(&self) -> Label {
        Label::Int(0)
    }

    fn conj(&self, x: &Label) -> Result<Label> {
        x.as_int()
            .map(Label::Int)
            .ok_or_else(|| Error::MalformedLabel(x.clone()))
    }

    fn product(&self, x: &Label, y: &Label) -> Result<FormalSum> {
        let (m, n) = int_pair(x, y)?;
        Ok(su_product(m, n))
    }

    fn dim(&self, x: &Label) -> Result<f64> {
        let n = int_of(x)?;
        Ok(qnum(n as f64 + 1.0, &self.ctx))
    }

    fn ln_dim(&self, x: &Label) -> Result<f64> {
        let n = int_of(x)?;
        Ok(qnum_ln(n as f64 + 1.0, &self.ctx))
    }

    fn dim_exact(&self, x: &Label) -> Option<LaurentPoly> {
        x.as_int().map(|n| qint_exact(n + 1).expect("n + 1 >= 1"))
    }

    fn describe(&self) -> String {
        format!("SU_q(2), q = {}", self.ctx.q())
    }
}

/// Fusion algebra with irreducibles 0, 1, 2, ... and dimensions
/// `d(n) = [2n+1]_q`; also the fusion algebra of the quantum permutation
/// groups under the parameter map of [`so_param_from_n`].
#[derive(Debug, Clone, Copy)]
pub struct SoModel {
    ctx: QContext,
}

impl SoModel {
    pub fn new(ctx: QContext) -> Self {
        Self { ctx }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }
}

impl FusionModel for SoModel {
    fn unit(&self) -> Label {
        Label::Int(0)
    }

    fn conj(&self, x: &Label) -> Result<Label> {
        x.as_int()
            .map(Label::Int)
            .ok_or_else(|| Error::MalformedLabel(x.clone()))
    }

    fn product(&self, x: &Label, y: &Label) -> Result<FormalSum> {
        let (m, n) = int_pair(x, y)?;
        Ok(so_product(m, n))
    }

    fn dim(&self, x: &Label) -> Result<f64> {
        let n = int_of(x)?;
        Ok(qnum(2.0 * n as f64 + 1.0, &self.ctx))
    }

    fn ln_dim(&self, x: &Label) -> Result<f64> {
        let n = int_of(x)?;
        Ok(qnum_ln(2.0 * n as f64 + 1.0, &self.ctx))
    }

    fn dim_exact(&self, x: &Label) -> Option<LaurentPoly> {
        x.as_int()
            .map(|n| qint_exact(2 * n + 1).expect("2n + 1 >= 1"))
    }

    fn describe(&self) -> String {
        format!("SO_q(3), q = {}", self.ctx.q())
    }
}

fn int_of(x: &Label) -> Result<u32> {
    x.as_int().ok_or_else(|| Error::MalformedLabel(x.clone()))
}

fn int_pair(x: &Label, y: &Label) -> Result<(u32, u32)> {
    Ok((int_of(x)?, int_of(y)?))
}

/// One letter of the free unitary word monoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UfLetter {
    /// The fundamental generator `a`.
    A,
    /// Its conjugate, rendered `A`.
    ABar,
}

impl UfLetter {
    pub fn flip(self) -> Self {
        match self {
            UfLetter::A => UfLetter::ABar,
            UfLetter::ABar => UfLetter::A,
        }
    }
}

/// A word over `{a, A}`. Words are their own canonical form; the block
/// decomposition into maximal alternating runs is derived on demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UfWord {
    letters: Vec<UfLetter>,
}

impl UfWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<UfLetter>) -> Self {
        Self { letters }
    }

    /// The single letter `a` (`bar = false`) or `A` (`bar = true`).
    pub fn letter(bar: bool) -> Self {
        Self {
            letters: vec![if bar { UfLetter::ABar } else { UfLetter::A }],
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[UfLetter] {
        &self.letters
    }

    /// Reverse the word and flip every letter.
    pub fn conj(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.flip()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// Maximal alternating blocks as `(length, leading sign)` pairs, where the
    /// sign is `+1` for a leading `a`. Adjacent blocks meet in equal letters.
    pub fn blocks(&self) -> Vec<(usize, i8)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let start = i;
            while i + 1 < self.letters.len() && self.letters[i + 1] == self.letters[i].flip() {
                i += 1;
            }
            i += 1;
            let sign = if self.letters[start] == UfLetter::A {
                1
            } else {
                -1
            };
            out.push((i - start, sign));
        }
        out
    }
}

impl PartialOrd for UfWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UfWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for UfWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "{}", if *l == UfLetter::A { 'a' } else { 'A' })?;
        }
        Ok(())
    }
}

/// Decomposition of `x (x) y` in the word monoid: one summand `a.b` for every
/// splitting `x = a.c` with `conj(c)` a prefix of `y = conj(c).b`. Distinct
/// splittings give summands of distinct lengths, so each witness is counted
/// once.
pub fn uf_product(x: &UfWord, y: &UfWord) -> FormalSum {
    let mut out = FormalSum::new();
    let max_cut = x.len().min(y.len());
    for cut in 0..=max_cut {
        let c = &x.letters[x.len() - cut..];
        let matches = (0..cut).all(|i| y.letters[i] == c[cut - 1 - i].flip());
        if matches {
            let mut letters = x.letters[..x.len() - cut].to_vec();
            letters.extend_from_slice(&y.letters[cut..]);
            out.add(Label::Word(UfWord::from_letters(letters)), 1);
        }
    }
    out
}

/// `d(word)` as the product of block q-integers `[k_i + 1]_q`.
pub fn uf_dim(x: &UfWord, ctx: &QContext) -> f64 {
    x.blocks()
        .iter()
        .map(|&(k, _)| qnum(k as f64 + 1.0, ctx))
        .product()
}

/// Exact version of [`uf_dim`].
pub fn uf_dim_exact(x: &UfWord) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for (k, _) in x.blocks() {
        p = &p * &qint_exact(k as u32 + 1).expect("block length >= 1");
    }
    p
}

/// The free unitary fusion model on words over `{a, A}`.
#[derive(Debug, Clone, Copy)]
pub struct UfModel {
    ctx: QContext,
}

impl UfModel {
    pub fn new(ctx: QContext) -> Self {
        Self { ctx }
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    /// The canonical generating set `{a, conj(a)}`.
    pub fn canonical_generators() -> Vec<Label> {
        vec![
            Label::Word(UfWord::letter(false)),
            Label::Word(UfWord::letter(true)),
        ]
    }
}

impl FusionModel for UfModel {
    fn unit(&self) -> Label {
        Label::Word(UfWord::empty())
    }

    fn conj(&self, x: &Label) -> Result<Label> {
        match x {
            Label::Word(w) => Ok(Label::Word(w.conj())),
            _ => Err(Error::MalformedLabel(x.clone())),
        }
    }

    fn product(&self, x: &Label, y: &Label) -> Result<FormalSum> {
        match (x, y) {
            (Label::Word(a), Label::Word(b)) => Ok(uf_product(a, b)),
            _ => Err(Error::MalformedLabel(x.clone())),
        }
    }

    fn dim(&self, x: &Label) -> Result<f64> {
        match x {
            Label::Word(w) => Ok(uf_dim(w, &self.ctx)),
            _ => Err(Error::MalformedLabel(x.clone())),
        }
    }

    fn ln_dim(&self, x: &Label) -> Result<f64> {
        match x {
            Label::Word(w) => Ok(w
                .blocks()
                .iter()
                .map(|&(k, _)| qnum_ln(k as f64 + 1.0, &self.ctx))
                .sum()),
            _ => Err(Error::MalformedLabel(x.clone())),
        }
    }

    fn dim_exact(&self, x: &Label) -> Option<LaurentPoly> {
        match x {
            Label::Word(w) => Some(uf_dim_exact(w)),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        format!("U_F+, q = {}", self.ctx.q())
    }
}

/// Solve `q + 1/q = t` for `q` in `(0, 1]`.
pub fn q_from_trace(t: f64) -> Result<f64> {
    if !(t >= 2.0) {
        return Err(Error::Domain(format!("trace must be >= 2, got {t}")));
    }
    Ok((t - (t * t - 4.0).sqrt()) / 2.0)
}

/// Parameter of the dimension-(N-1) quantum permutation model:
/// solves `q^2 + q^-2 = N - 2` for `q` in `(0, 1]`.
pub fn so_param_from_n(n: u32) -> Result<f64> {
    if n < 4 {
        return Err(Error::Domain(format!("need N >= 4, got {n}")));
    }
    // u = q^2 solves u + 1/u = N - 2.
    let u = q_from_trace((n - 2) as f64)?;
    Ok(u.sqrt())
}

const F_NORMALISATION_RTOL: f64 = 1e-8;

/// Derive `q` from a matrix `F`: computes `t = Tr(F*F)` and checks the
/// normalisation `Tr(F*F) = Tr((F*F)^-1)` before solving `q + 1/q = t`.
pub fn q_from_f(f: &[Vec<Complex64>]) -> Result<f64> {
    let n = f.len();
    if n < 2 || f.iter().any(|row| row.len() != n) {
        return Err(Error::Domain("F must be square of size >= 2".into()));
    }
    // G = F* F, positive semidefinite.
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..n).map(|k| f[k][i].conj() * f[k][j]).sum();
        }
    }
    let trace: Complex64 = (0..n).map(|i| g[i][i]).sum();
    let inv = invert(&g).ok_or_else(|| Error::Domain("F is singular".into()))?;
    let trace_inv: Complex64 = (0..n).map(|i| inv[i][i]).sum();
    let (t, ti) = (trace.re, trace_inv.re);
    if (t - ti).abs() > F_NORMALISATION_RTOL * t.abs().max(ti.abs()) {
        return Err(Error::Domain(format!(
            "unnormalised F: Tr(F*F) = {t} but Tr((F*F)^-1) = {ti}; rescale F so the traces agree"
        )));
    }
    q_from_trace(t)
}

/// Gauss-Jordan inverse with partial pivoting.
fn invert(a: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut inv = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())?;
        if m[pivot][col].norm() < 1e-14 {
            return None;
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        for j in 0..n {
            m[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = m[i][col];
            for j in 0..n {
                let (mc, ic) = (m[col][j], inv[col][j]);
                m[i][j] -= factor * mc;
                inv[i][j] -= factor * ic;
            }
        }
    }
    Some(inv)
}
