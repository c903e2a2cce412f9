//! Exact Laurent polynomials in `(z_1, ..., z_d, λ)` with coefficients in
//! `Z[parameters]`.
//!
//! Exponent keys are vectors of length `d + 1`; the last entry is the power
//! of `λ` and is always nonnegative. Terms are kept in a `BTreeMap`, so the
//! term order is lexicographic on `(α, j)` and rendering is canonical.
//!
//! Derivatives are the logarithmic operators `z_i ∂/∂z_i` and `λ ∂/∂λ`,
//! which just scale each term by one of its exponents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exponent = Vec<i64>;
pub type Params = BTreeMap<String, BigRational>;

/// Names reserved for the torus coordinates and the spectral variable.
pub const VARIABLE_NAMES: [&str; 3] = ["x", "y", "z"];
pub const LAMBDA: &str = "lambda";

pub fn is_reserved_name(s: &str) -> bool {
    s == LAMBDA || VARIABLE_NAMES.contains(&s)
}

/// A monomial in the graph parameters, e.g. `a*b^2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamMonomial(BTreeMap<String, u32>);

impl ParamMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(name: &str) -> Self {
        Self(BTreeMap::from([(name.to_string(), 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<String, u32> {
        &self.0
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (k, e) in &other.0 {
            *out.entry(k.clone()).or_insert(0) += e;
        }
        Self(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    fn eval(&self, params: &Params) -> Result<BigRational> {
        let mut acc = BigRational::one();
        for (k, &e) in &self.0 {
            let v = params
                .get(k)
                .ok_or_else(|| Error::MissingParameter(k.clone()))?;
            acc *= num_traits::pow(v.clone(), e as usize);
        }
        Ok(acc)
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, &e)| {
                if e == 1 {
                    k.clone()
                } else {
                    format!("{k}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// An integer polynomial in the graph parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamPoly(BTreeMap<ParamMonomial, BigInt>);

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(ParamMonomial::one(), c);
        }
        Self(m)
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn var(name: &str) -> Self {
        Self(BTreeMap::from([(ParamMonomial::var(name), BigInt::one())]))
    }

    pub fn from_term(m: ParamMonomial, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &BigInt)> {
        self.0.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.0.len()
    }

    fn add_term(&mut self, m: ParamMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn eval(&self, params: &Params) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.0 {
            acc += m.eval(params)? * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.0.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    /// `Some(sign)` when every coefficient has the same sign.
    pub fn uniform_sign(&self) -> Option<i8> {
        let pos = self.0.values().all(|c| c.is_positive());
        let neg = self.0.values().all(|c| c.is_negative());
        match (pos, neg) {
            (true, _) => Some(1),
            (_, true) => Some(-1),
            _ => None,
        }
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (m.is_one(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{mag}*{m}")?,
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial in `(z, λ)` over `Z[parameters]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    d: usize,
    terms: BTreeMap<Exponent, ParamPoly>,
}

impl LaurentPoly {
    pub fn zero(d: usize) -> Self {
        Self {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: usize) -> Self {
        Self::monomial(d, vec![0; d + 1], ParamPoly::one())
    }

    /// `c · z^α λ^j` where `exp = (α, j)`.
    pub fn monomial(d: usize, exp: Exponent, c: ParamPoly) -> Self {
        assert_eq!(exp.len(), d + 1, "exponent length must be d + 1");
        assert!(exp[d] >= 0, "negative power of lambda");
        let mut p = Self::zero(d);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn lambda(d: usize) -> Self {
        let mut e = vec![0; d + 1];
        e[d] = 1;
        Self::monomial(d, e, ParamPoly::one())
    }

    pub fn param(d: usize, name: &str) -> Self {
        Self::monomial(d, vec![0; d + 1], ParamPoly::var(name))
    }

    /// `c · z^α` (no λ).
    pub fn hop(name: &str, alpha: &[i64]) -> Self {
        let d = alpha.len();
        let mut e = alpha.to_vec();
        e.push(0);
        Self::monomial(d, e, ParamPoly::var(name))
    }

    pub fn from_terms(d: usize, terms: impl IntoIterator<Item = (Exponent, ParamPoly)>) -> Self {
        let mut p = Self::zero(d);
        for (e, c) in terms {
            p.add_assign_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Number of terms counted with parameter-monomial multiplicity.
    pub fn num_expanded_terms(&self) -> usize {
        self.terms.values().map(ParamPoly::num_terms).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: &[i64]) -> Option<&ParamPoly> {
        self.terms.get(exp)
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: other.d,
            });
        }
        Ok(())
    }

    fn add_assign_term(&mut self, e: Exponent, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.len(), self.d + 1);
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_assign_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.d);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_assign_term(e, c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// Panicking convenience wrapper; dimensions are checked.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("dimension mismatch in add")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("dimension mismatch in mul")
    }

    pub fn neg(&self) -> Self {
        Self {
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        Self::from_terms(
            self.d,
            self.terms.iter().map(|(e, c)| (e.clone(), c.scale(k))),
        )
    }

    /// Multiplies every exponent by `w·exp` (a weighted Euler operator).
    fn weighted(&self, weight: impl Fn(&Exponent) -> i64) -> Self {
        Self::from_terms(
            self.d,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.scale(&BigInt::from(weight(e))))),
        )
    }

    /// `z_i ∂f/∂z_i` for `i < d`, or `λ ∂f/∂λ` for `i = d`.
    pub fn log_derivative(&self, i: usize) -> Self {
        assert!(i <= self.d);
        self.weighted(|e| e[i])
    }

    fn min_weight(&self, eta: &[i64]) -> Result<i64> {
        if eta.len() != self.d + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.d + 1,
                got: eta.len(),
            });
        }
        self.terms
            .keys()
            .map(|e| crate::lattice::dot(e, eta))
            .min()
            .ok_or(Error::ZeroPolynomial)
    }

    /// The initial form `in_η f` and the minimum value `r` of `η` on the support.
    pub fn initial_form(&self, eta: &[i64]) -> Result<(Self, i64)> {
        let r = self.min_weight(eta)?;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| crate::lattice::dot(e, eta) == r)
            .map(|(e, c)| (e.clone(), c.clone()));
        Ok((Self::from_terms(self.d, terms), r))
    }

    /// Restriction to the terms whose exponents lie in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Exponent>) -> Self {
        Self::from_terms(
            self.d,
            self.terms
                .iter()
                .filter(|(e, _)| keep.contains(*e))
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// `Σ η_i z_i ∂f/∂z_i + a λ ∂f/∂λ − r f`, with `r` the minimum of `(η, a)`
    /// on the support. Vanishes exactly when `f` is quasi-homogeneous.
    pub fn euler_pairing(&self, eta: &[i64]) -> Result<Self> {
        let r = self.min_weight(eta)?;
        Ok(self.weighted(|e| crate::lattice::dot(e, eta) - r))
    }

    /// `f(z^{-1}, λ)`.
    pub fn reciprocal(&self) -> Self {
        let d = self.d;
        Self::from_terms(
            d,
            self.terms.iter().map(|(e, c)| {
                let mut e2: Exponent = e.iter().map(|x| -x).collect();
                e2[d] = e[d];
                (e2, c.clone())
            }),
        )
    }

    pub fn lambda_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e[self.d]).max()
    }

    /// The coefficient of `λ^k` as a Laurent polynomial in `z` (λ-free).
    pub fn lambda_coefficient(&self, k: i64) -> Self {
        let d = self.d;
        Self::from_terms(
            d,
            self.terms.iter().filter(|(e, _)| e[d] == k).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[d] = 0;
                (e2, c.clone())
            }),
        )
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.terms.values().flat_map(ParamPoly::symbols).collect()
    }

    /// Substitutes rational values for every parameter.
    pub fn specialize(&self, params: &Params) -> Result<RatLaurent> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = c.eval(params)?;
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        Ok(RatLaurent { d: self.d, terms })
    }

    /// Numeric value at `point = (z_1, ..., z_d, λ)`.
    pub fn evaluate(&self, params: &Params, point: &[Complex64]) -> Result<Complex64> {
        self.specialize(params)?.evaluate(point)
    }

    /// Parses the textual form produced by `Display` (and hand-written
    /// variants): sums of products of integers, parameters, `x`, `y`, `z`,
    /// `lambda`, powers `^k` (negative allowed on variables) and parentheses.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        parse::Parser::new(text, d).parse()
    }
}

fn var_name(i: usize, d: usize) -> &'static str {
    if i == d {
        LAMBDA
    } else {
        VARIABLE_NAMES[i]
    }
}

pub(crate) fn render_monomial(e: &[i64], d: usize) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(var_name(i, d).to_string()),
            _ => parts.push(format!("{}^{}", var_name(i, d), k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono = render_monomial(e, self.d);
            let (neg, body) = if c.num_terms() == 1 {
                let (m, k) = c.terms().next().unwrap();
                let mag = k.abs();
                let coef = match (m.is_one(), mag.is_one()) {
                    (true, _) => mag.to_string(),
                    (false, true) => m.to_string(),
                    (false, false) => format!("{mag}*{m}"),
                };
                let body = match (mono.is_empty(), coef == "1") {
                    (true, _) => coef,
                    (false, true) => mono,
                    (false, false) => format!("{coef}*{mono}"),
                };
                (k.is_negative(), body)
            } else if mono.is_empty() {
                (false, format!("({c})"))
            } else {
                (false, format!("({c})*{mono}"))
            };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial with rational coefficients (parameters substituted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatLaurent {
    pub d: usize,
    pub terms: BTreeMap<Exponent, BigRational>,
}

impl RatLaurent {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.d + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.d + 1,
                got: point.len(),
            });
        }
        if let Some(i) = point[..self.d].iter().position(|z| z.norm() == 0.0) {
            return Err(Error::ZeroCoordinate(i));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| rat_to_f64(c) * power_product(point, e))
            .sum())
    }

    /// Sum of absolute values of the terms at `point`; the natural scale for
    /// relative residuals.
    pub fn magnitude(&self, point: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| rat_to_f64(c).abs() * power_product(point, e).norm())
            .sum()
    }

    pub fn log_derivative(&self, i: usize) -> Self {
        Self {
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[i] != 0)
                .map(|(e, c)| (e.clone(), c * BigRational::from_integer(e[i].into())))
                .collect(),
        }
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn power_product(point: &[Complex64], e: &[i64]) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for (z, &k) in point.iter().zip(e) {
        if k != 0 {
            acc *= z.powi(k as i32);
        }
    }
    acc
}

/// A square matrix of Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMatrix {
    d: usize,
    entries: Vec<Vec<LaurentPoly>>,
}

pub const LEIBNIZ_LIMIT: usize = 8;

impl SymbolicMatrix {
    pub fn zeros(n: usize, d: usize) -> Self {
        Self {
            d,
            entries: vec![vec![LaurentPoly::zero(d); n]; n],
        }
    }

    pub fn from_rows(d: usize, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = rows.len();
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
            for e in r {
                if e.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: e.dim(),
                    });
                }
            }
        }
        Ok(Self { d, entries: rows })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i][j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &LaurentPoly) {
        self.entries[i][j] = self.entries[i][j].add(v);
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        Self {
            d: self.d,
            entries: (0..n)
                .map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        Self {
            d: self.d,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    /// The nonzero products `sgn(w) Π M_{i,w(i)}`, one per permutation.
    pub fn leibniz_terms(&self) -> Result<Vec<(Vec<usize>, LaurentPoly)>> {
        let n = self.size();
        if n > LEIBNIZ_LIMIT {
            return Err(Error::SizeGuard {
                what: "matrix size for Leibniz expansion",
                got: n,
                limit: LEIBNIZ_LIMIT,
            });
        }
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.leibniz_rec(&mut perm, &mut used, LaurentPoly::one(self.d), &mut out);
        Ok(out)
    }

    fn leibniz_rec(
        &self,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        acc: LaurentPoly,
        out: &mut Vec<(Vec<usize>, LaurentPoly)>,
    ) {
        let n = self.size();
        let i = perm.len();
        if i == n {
            let term = if permutation_sign(perm) < 0 {
                acc.neg()
            } else {
                acc
            };
            out.push((perm.clone(), term));
            return;
        }
        for j in 0..n {
            if used[j] || self.entries[i][j].is_zero() {
                continue;
            }
            used[j] = true;
            perm.push(j);
            let next = acc.mul(&self.entries[i][j]);
            self.leibniz_rec(perm, used, next, out);
            perm.pop();
            used[j] = false;
        }
    }

    /// Determinant by the Leibniz formula.
    pub fn leibniz_det(&self) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(self.d);
        for (_, t) in self.leibniz_terms()? {
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Principal submatrix on the given row/column indices.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        Self {
            d: self.d,
            entries: idx
                .iter()
                .map(|&i| idx.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }
}

impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inv = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

mod parse {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(BigInt),
        Ident(String),
        Op(char),
    }

    pub(super) struct Parser {
        toks: Vec<(Tok, usize)>,
        pos: usize,
        d: usize,
    }

    fn err(col: usize, msg: impl Into<String>) -> Error {
        Error::Syntax {
            line: 1,
            column: col + 1,
            message: msg.into(),
        }
    }

    impl Parser {
        pub(super) fn new(text: &str, d: usize) -> Self {
            let mut toks = Vec::new();
            let chars: Vec<char> = text.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let c = chars[i];
                if c.is_whitespace() {
                    i += 1;
                } else if c.is_ascii_digit() {
                    let s = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let n: String = chars[s..i].iter().collect();
                    toks.push((Tok::Num(n.parse().unwrap()), s));
                } else if c.is_alphabetic() || c == '_' {
                    let s = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    toks.push((Tok::Ident(chars[s..i].iter().collect()), s));
                } else {
                    toks.push((Tok::Op(c), i));
                    i += 1;
                }
            }
            Self { toks, pos: 0, d }
        }

        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos).map(|(t, _)| t)
        }

        fn col(&self) -> usize {
            self.toks.get(self.pos).map_or(usize::MAX - 1, |(_, c)| *c)
        }

        fn eat(&mut self, c: char) -> bool {
            if self.peek() == Some(&Tok::Op(c)) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        pub(super) fn parse(mut self) -> Result<LaurentPoly> {
            let p = self.sum()?;
            if self.pos != self.toks.len() {
                return Err(err(self.col(), "unexpected trailing input"));
            }
            Ok(p)
        }

        fn sum(&mut self) -> Result<LaurentPoly> {
            let mut neg = false;
            if self.eat('-') {
                neg = true;
            } else {
                self.eat('+');
            }
            let mut acc = self.product()?;
            if neg {
                acc = acc.neg();
            }
            loop {
                if self.eat('+') {
                    acc = acc.add(&self.product()?);
                } else if self.eat('-') {
                    acc = acc.sub(&self.product()?);
                } else {
                    return Ok(acc);
                }
            }
        }

        fn product(&mut self) -> Result<LaurentPoly> {
            let mut acc = self.power()?;
            loop {
                if self.eat('*') {
                    acc = acc.mul(&self.power()?);
                } else if matches!(
                    self.peek(),
                    Some(Tok::Ident(_) | Tok::Num(_)) | Some(Tok::Op('('))
                ) {
                    // juxtaposition is multiplication
                    acc = acc.mul(&self.power()?);
                } else {
                    return Ok(acc);
                }
            }
        }

        fn exponent(&mut self) -> Result<i64> {
            let neg = self.eat('-');
            let paren = self.eat('(');
            let neg = neg || (paren && self.eat('-'));
            let col = self.col();
            let k = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    n.to_i64().ok_or_else(|| err(col, "exponent too large"))?
                }
                _ => return Err(err(col, "expected an integer exponent")),
            };
            if paren && !self.eat(')') {
                return Err(err(self.col(), "expected `)`"));
            }
            Ok(if neg { -k } else { k })
        }

        fn power(&mut self) -> Result<LaurentPoly> {
            let col = self.col();
            let d = self.d;
            let (base, var) = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    (
                        LaurentPoly::monomial(d, vec![0; d + 1], ParamPoly::constant(n)),
                        None,
                    )
                }
                Some(Tok::Ident(s)) => {
                    self.pos += 1;
                    let idx = if s == LAMBDA {
                        Some(d)
                    } else {
                        VARIABLE_NAMES.iter().position(|v| *v == s)
                    };
                    match idx {
                        Some(i) if i <= d && (i < d || s == LAMBDA) => {
                            let mut e = vec![0; d + 1];
                            e[i] = 1;
                            (LaurentPoly::monomial(d, e, ParamPoly::one()), Some(i))
                        }
                        Some(_) => {
                            return Err(err(col, format!("variable `{s}` exceeds dimension {d}")))
                        }
                        None => (LaurentPoly::param(d, &s), None),
                    }
                }
                Some(Tok::Op('(')) => {
                    self.pos += 1;
                    let inner = self.sum()?;
                    if !self.eat(')') {
                        return Err(err(self.col(), "expected `)`"));
                    }
                    (inner, None)
                }
                _ => return Err(err(col, "expected a term")),
            };
            if !self.eat('^') {
                return Ok(base);
            }
            let k = self.exponent()?;
            if k < 0 {
                match var {
                    Some(i) if i < d => {
                        let mut e = vec![0; d + 1];
                        e[i] = k;
                        return Ok(LaurentPoly::monomial(d, e, ParamPoly::one()));
                    }
                    _ => return Err(err(col, "negative exponent only allowed on x, y, z")),
                }
            }
            let mut acc = LaurentPoly::one(d);
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, d: usize) -> LaurentPoly {
        LaurentPoly::parse(s, d).unwrap()
    }

    #[test]
    fn binomial_square() {
        let f = p("x + x^-1", 1);
        assert_eq!(f.mul(&f), p("x^2 + 2 + x^-2", 1));
    }

    #[test]
    fn additive_inverse_is_empty() {
        let f = p("a*x - b*lambda + 3", 1);
        assert!(f.add(&f.neg()).is_zero());
        assert!(f.add(&f.neg()).support().is_empty());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let e = LaurentPoly::one(1)
            .try_add(&LaurentPoly::one(2))
            .unwrap_err();
        assert_eq!(
            e,
            Error::DimensionMismatch {
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn display_round_trips() {
        let f = p(
            "lambda^2 - lambda*(V_u + V_v) + V_u*V_v - a^2 - a*b*(x + x^-1)",
            2,
        );
        let text = f.to_string();
        assert_eq!(p(&text, 2), f);
        assert_eq!(p("-3*a*x^-1*lambda", 1).to_string(), "-3*a*x^-1*lambda");
    }

    #[test]
    fn initial_forms() {
        let f = p("lambda^2 + x*lambda + x^-1 + 1", 1);
        let (g, r) = f.initial_form(&[0, 1]).unwrap();
        assert_eq!(r, 0);
        assert_eq!(g, p("x^-1 + 1", 1));
        let (g, _) = f.initial_form(&[0, 0]).unwrap();
        assert_eq!(g, f);
        assert_eq!(
            LaurentPoly::zero(1).initial_form(&[0, 1]),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn euler_pairing_kills_initial_forms() {
        let f = p("lambda^2 + a*x*lambda + b*x^-1 + c*y", 2);
        for eta in [[1, 0, 0], [0, -1, 1], [-1, -1, 0], [2, 3, -1]] {
            let (g, _) = f.initial_form(&eta).unwrap();
            assert!(g.euler_pairing(&eta).unwrap().is_zero());
        }
        assert!(!f.euler_pairing(&[-1, -1, 0]).unwrap().is_zero());
        let m = p("a*x^2*lambda", 1);
        assert!(m.euler_pairing(&[5, -3]).unwrap().is_zero());
    }

    #[test]
    fn leibniz_small_cases() {
        let d = 1;
        let l = LaurentPoly::lambda(d);
        let z = LaurentPoly::zero(d);
        let m = SymbolicMatrix::from_rows(
            d,
            vec![
                vec![l.clone(), z.clone(), z.clone()],
                vec![z.clone(), l.clone(), z.clone()],
                vec![z.clone(), z.clone(), l.clone()],
            ],
        )
        .unwrap();
        assert_eq!(m.leibniz_det().unwrap(), p("lambda^3", 1));
        let big = SymbolicMatrix::zeros(9, 1);
        assert!(matches!(big.leibniz_det(), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn evaluation() {
        let f = p("lambda^2 - a*b*(x + x^-1)", 1);
        let params: Params = [("a", 1), ("b", 2)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), BigRational::from_integer(v.into())))
            .collect();
        let v = f
            .evaluate(
                &params,
                &[Complex64::new(1.0, 0.0), Complex64::new(3.0, 0.0)],
            )
            .unwrap();
        assert!((v - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        let missing = f.evaluate(&Params::new(), &[Complex64::new(1.0, 0.0); 2]);
        assert_eq!(missing, Err(Error::MissingParameter("a".into())));
        let zero = f.evaluate(
            &params,
            &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        );
        assert_eq!(zero, Err(Error::ZeroCoordinate(0)));
    }

    #[test]
    fn parse_errors_carry_columns() {
        match LaurentPoly::parse("x + * y", 2) {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(LaurentPoly::parse("lambda^-1", 1).is_err());
        assert!(LaurentPoly::parse("y", 1).is_err());
    }
}
