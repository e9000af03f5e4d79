//! Exact multivariate integer polynomials, Laurent monomials and the tropical semifield.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors ordered graded
//! lexicographically, so iteration order is canonical and the last entry is the
//! leading term.

use crate::linalg::{Mat, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("the zero polynomial has no tropical image")]
    EmptyPolynomial,
    #[error("division is not exact")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent where a polynomial was expected")]
    NegativeExponent,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A Laurent monomial, stored as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Componentwise minimum of exponent vectors.
pub fn tropical_add(a: &Monomial, b: &Monomial) -> Result<Monomial, PolyError> {
    if a.len() != b.len() {
        return Err(PolyError::LengthMismatch(a.len(), b.len()));
    }
    Ok(Monomial(a.0.iter().zip(&b.0).map(|(x, y)| *x.min(y)).collect()))
}

/// Polynomial with integer coefficients in `nvars` variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let nvars = m.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        IntPolynomial { nvars, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(nvars: usize, it: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in it {
            assert_eq!(m.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> i64 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        IntPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        IntPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Renames variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; self.nvars];
                for (i, &x) in m.0.iter().enumerate() {
                    e[perm[i]] = x;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        IntPolynomial { nvars: self.nvars, terms }
    }

    /// Largest monomial dividing every term (componentwise minimum of exponents).
    pub fn monomial_gcd(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one(self.nvars);
        };
        it.fold(first.clone(), |acc, m| tropical_add(&acc, m).expect("same length"))
    }

    /// Gcd of the integer coefficients, nonnegative.
    pub fn integer_content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Evaluates at integer values of the variables.
    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                assert!(e >= 0);
                t *= num_traits::pow(x.clone(), e as usize);
            }
            acc += t;
        }
        acc
    }

    /// The multidegree: componentwise maximum of exponents.
    pub fn multidegree(&self) -> Vec<i64> {
        let mut out = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (o, &e) in out.iter_mut().zip(&m.0) {
                *o = (*o).max(e);
            }
        }
        out
    }

    /// Formats using the given variable prefix, highest term first.
    pub fn format_with(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("{}{}", var, i + 1)),
                    _ => factors.push(format!("{}{}^{}", var, i + 1, e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the text form `c*u1^a1*...*un^an + ...` over `nvars` variables.
    pub fn parse(s: &str, nvars: usize) -> Result<Self, PolyError> {
        parse_poly(s, nvars, 'u')
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with("u"))
    }
}

fn parse_poly(s: &str, nvars: usize, var: char) -> Result<IntPolynomial, PolyError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(PolyError::Parse("empty input".into()));
    }
    let chars: Vec<char> = s.chars().collect();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, &ch) in chars.iter().enumerate() {
        let after_caret = i > 0 && chars[i - 1] == '^';
        if (ch == '+' || ch == '-') && !after_caret {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if i > 0 {
                return Err(PolyError::Parse(format!("dangling sign at {}", i)));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(PolyError::Parse("trailing sign".into()));
    }
    terms.push((neg, cur));
    let mut p = IntPolynomial::zero(nvars);
    for (neg, t) in terms {
        let mut coeff = BigInt::one();
        let mut exps = vec![0i64; nvars];
        for factor in t.split('*') {
            if factor.is_empty() {
                return Err(PolyError::Parse(format!("empty factor in '{}'", t)));
            }
            if let Some(rest) = factor.strip_prefix(var) {
                let (idx, e) = match rest.split_once('^') {
                    Some((a, b)) => (a, b.parse::<i64>().map_err(|_| PolyError::Parse(format!("bad exponent '{}'", b)))?),
                    None => (rest, 1),
                };
                let idx: usize = idx.parse().map_err(|_| PolyError::Parse(format!("bad variable '{}'", factor)))?;
                if idx == 0 || idx > nvars {
                    return Err(PolyError::Parse(format!("variable index {} out of range", idx)));
                }
                exps[idx - 1] += e;
            } else {
                let c: BigInt = factor.parse().map_err(|_| PolyError::Parse(format!("bad coefficient '{}'", factor)))?;
                coeff *= c;
            }
        }
        if neg {
            coeff = -coeff;
        }
        p.add_term(Monomial(exps), coeff);
    }
    Ok(p)
}

/// Exact quotient `num / den`, or an error if `den` does not divide `num`.
pub fn exact_divide(num: &IntPolynomial, den: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    if den.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    if !num.is_polynomial() || !den.is_polynomial() {
        return Err(PolyError::NegativeExponent);
    }
    let (lm, lc) = den.leading().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
    let mut rem = num.clone();
    let mut quo = IntPolynomial::zero(num.nvars);
    while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
        if !lm.divides(&m) {
            return Err(PolyError::InexactDivision);
        }
        let (qc, r) = c.div_rem(&lc);
        if !r.is_zero() {
            return Err(PolyError::InexactDivision);
        }
        let qm = Monomial(m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect());
        let t = IntPolynomial::term(qm, qc);
        rem = rem.sub(&t.mul(den));
        quo = quo.add(&t);
    }
    Ok(quo)
}

fn max_var(a: &IntPolynomial) -> Option<usize> {
    a.terms.keys().flat_map(|m| m.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, _)| i)).max()
}

fn to_univ(p: &IntPolynomial, v: usize) -> Vec<IntPolynomial> {
    let deg = p.degree_in(v).max(0) as usize;
    let mut out = vec![IntPolynomial::zero(p.nvars); deg + 1];
    for (m, c) in &p.terms {
        let mut e = m.0.clone();
        let d = e[v] as usize;
        e[v] = 0;
        out[d].add_term(Monomial(e), c.clone());
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn from_univ(c: &[IntPolynomial], v: usize, nvars: usize) -> IntPolynomial {
    let mut out = IntPolynomial::zero(nvars);
    for (d, coeff) in c.iter().enumerate() {
        let mut shift = vec![0; nvars];
        shift[v] = d as i64;
        out = out.add(&coeff.mul_monomial(&Monomial(shift)));
    }
    out
}

fn content_in(p: &IntPolynomial, v: usize) -> IntPolynomial {
    to_univ(p, v).iter().fold(IntPolynomial::zero(p.nvars), |acc, c| poly_gcd(&acc, c))
}

fn normalize_sign(p: IntPolynomial) -> IntPolynomial {
    match p.leading() {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p,
    }
}

fn prem(a: &[IntPolynomial], b: &[IntPolynomial]) -> Vec<IntPolynomial> {
    let nv = b[0].nvars;
    let db = b.len() - 1;
    let lcb = b[db].clone();
    let mut r: Vec<IntPolynomial> = a.to_vec();
    loop {
        while r.len() > 1 && r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        if r.len() - 1 < db || (r.len() == 1 && r[0].is_zero()) {
            break;
        }
        let dr = r.len() - 1;
        let lt = r[dr].clone();
        let shift = dr - db;
        let mut next: Vec<IntPolynomial> = r.iter().map(|c| c.mul(&lcb)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&bc.mul(&lt));
        }
        debug_assert!(next[dr].is_zero());
        next.pop();
        if next.is_empty() {
            next.push(IntPolynomial::zero(nv));
        }
        r = next;
    }
    r
}

/// Greatest common divisor of two polynomials over the integers, with positive
/// leading coefficient; computed by primitive pseudo-remainder sequences.
pub fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let nv = a.nvars;
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let v = match (max_var(a), max_var(b)) {
        (None, None) => return IntPolynomial::constant(nv, a.constant_term().gcd(&b.constant_term())),
        (x, y) => x.max(y).expect("some variable"),
    };
    if a.degree_in(v) == 0 {
        return poly_gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return poly_gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = poly_gcd(&ca, &cb);
    let mut pa = to_univ(&exact_divide(a, &ca).expect("content divides"), v);
    let mut pb = to_univ(&exact_divide(b, &cb).expect("content divides"), v);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        let r = prem(&pa, &pb);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        if r.len() == 1 {
            return normalize_sign(c);
        }
        let rp = from_univ(&r, v, nv);
        let rc = content_in(&rp, v);
        pa = pb;
        pb = to_univ(&exact_divide(&rp, &rc).expect("content divides"), v);
    }
    let g = from_univ(&pb, v, nv);
    let gc = content_in(&g, v);
    let g = exact_divide(&g, &gc).expect("content divides");
    normalize_sign(c.mul(&g))
}

/// Tropical evaluation: each variable is replaced by a Laurent monomial, sums
/// become componentwise minima and coefficients are dropped.
pub fn tropical_eval(f: &IntPolynomial, assignment: &[Monomial]) -> Result<Monomial, PolyError> {
    if f.is_zero() {
        return Err(PolyError::EmptyPolynomial);
    }
    if assignment.len() != f.nvars {
        return Err(PolyError::LengthMismatch(assignment.len(), f.nvars));
    }
    let m = assignment.first().map_or(0, Monomial::len);
    if let Some(bad) = assignment.iter().find(|a| a.len() != m) {
        return Err(PolyError::LengthMismatch(bad.len(), m));
    }
    let mut acc: Option<Monomial> = None;
    for e in f.terms.keys() {
        let mut img = Monomial::one(m);
        for (a, &k) in assignment.iter().zip(&e.0) {
            img = img.mul(&a.pow(k));
        }
        acc = Some(match acc {
            None => img,
            Some(prev) => tropical_add(&prev, &img)?,
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Feasibility of `A x = b, x >= 0` by an exact two-phase simplex with Bland's rule.
fn lp_feasible(a: &Mat, b: &[Q]) -> bool {
    let m = a.rows;
    let k = a.cols;
    let width = k + m + 1;
    let mut t = Mat::zeros(m + 1, width);
    for i in 0..m {
        let flip = b[i] < Q::zero();
        for j in 0..k {
            t[(i, j)] = if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() };
        }
        t[(i, k + i)] = Q::one();
        t[(i, width - 1)] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    for j in 0..k {
        let s = (0..m).fold(Q::zero(), |acc, i| acc + &t[(i, j)]);
        t[(m, j)] = -s;
    }
    let s = (0..m).fold(Q::zero(), |acc, i| acc + &t[(i, width - 1)]);
    t[(m, width - 1)] = -s;
    let mut basis: Vec<usize> = (k..k + m).collect();
    loop {
        let Some(enter) = (0..k + m).find(|&j| t[(m, j)] < Q::zero()) else {
            break;
        };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[(i, enter)] > Q::zero() {
                let ratio = &t[(i, width - 1)] / &t[(i, enter)];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            break;
        };
        let inv = t[(r, enter)].recip();
        for j in 0..width {
            let v = &t[(r, j)] * &inv;
            t[(r, j)] = v;
        }
        for i in 0..=m {
            if i != r && !t[(i, enter)].is_zero() {
                let f = t[(i, enter)].clone();
                for j in 0..width {
                    if !t[(r, j)].is_zero() {
                        let d = &t[(r, j)] * &f;
                        t[(i, j)] -= d;
                    }
                }
            }
        }
        basis[r] = enter;
    }
    t[(m, width - 1)].is_zero()
}

/// Sum, with coefficient 1, of the monomials at vertices of the Newton polytope.
pub fn newton_vertex_filter(f: &IntPolynomial) -> IntPolynomial {
    let pts: Vec<&Monomial> = f.terms.keys().collect();
    let n = f.nvars;
    let mut out = IntPolynomial::zero(n);
    for (i, p) in pts.iter().enumerate() {
        let others: Vec<&&Monomial> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, m)| m).collect();
        let is_vertex = if others.is_empty() {
            true
        } else {
            let mut a = Mat::zeros(n + 1, others.len());
            for (j, o) in others.iter().enumerate() {
                for r in 0..n {
                    a[(r, j)] = crate::linalg::q(o.0[r]);
                }
                a[(n, j)] = Q::one();
            }
            let mut b: Vec<Q> = p.0.iter().map(|&e| crate::linalg::q(e)).collect();
            b.push(Q::one());
            !lp_feasible(&a, &b)
        };
        if is_vertex {
            out.add_term((*p).clone(), BigInt::one());
        }
    }
    out
}

/// A Laurent polynomial written as a polynomial over a monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentExpr {
    pub numerator: IntPolynomial,
    pub denominator: Monomial,
}

impl LaurentExpr {
    /// Builds the reduced form from arbitrary Laurent terms.
    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, BigInt)>>(nvars: usize, it: I) -> Self {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (e, c) in it {
            *acc.entry(Monomial(e)).or_insert_with(BigInt::zero) += c;
        }
        acc.retain(|_, c| !c.is_zero());
        let mut den = vec![0i64; nvars];
        for m in acc.keys() {
            for (d, &e) in den.iter_mut().zip(&m.0) {
                *d = (*d).max(-e);
            }
        }
        let shift = Monomial(den.clone());
        let numerator = IntPolynomial::from_terms(nvars, acc.into_iter().map(|(m, c)| (m.mul(&shift), c)));
        LaurentExpr { numerator, denominator: shift }
    }

    pub fn from_polynomial(p: &IntPolynomial) -> Self {
        Self::from_terms(p.nvars, p.terms().map(|(m, c)| (m.0.clone(), c.clone())))
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars
    }

    /// Laurent terms with the denominator folded back in.
    pub fn laurent_terms(&self) -> Vec<(Vec<i64>, BigInt)> {
        let inv = self.denominator.pow(-1);
        self.numerator.terms().map(|(m, c)| (m.mul(&inv).0, c.clone())).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.nvars();
        let mut out = Vec::new();
        for (a, ca) in self.laurent_terms() {
            for (b, cb) in other.laurent_terms() {
                out.push((a.iter().zip(&b).map(|(x, y)| x + y).collect(), &ca * &cb));
            }
        }
        Self::from_terms(n, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.laurent_terms();
        t.extend(other.laurent_terms());
        Self::from_terms(self.nvars(), t)
    }

    /// Exact quotient of Laurent polynomials, if it is again a Laurent polynomial.
    pub fn divide(&self, other: &Self) -> Result<Self, PolyError> {
        let g = other.numerator.monomial_gcd();
        let den_poly = exact_divide(&other.numerator, &IntPolynomial::term(g.clone(), BigInt::one()))?;
        let quo = exact_divide(&self.numerator, &den_poly)?;
        let shift = other.denominator.mul(&self.denominator.pow(-1)).mul(&g.pow(-1));
        Ok(Self::from_terms(
            self.nvars(),
            quo.terms().map(|(m, c)| (m.mul(&shift).0, c.clone())),
        ))
    }

    /// Exponents of the denominator, i.e. the denominator vector.
    pub fn denominator_vector(&self) -> Vec<i64> {
        self.denominator.0.clone()
    }
}

impl fmt::Display for LaurentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator.format_with("x");
        if self.denominator.is_one() {
            return write!(f, "{}", num);
        }
        let den = IntPolynomial::term(self.denominator.clone(), BigInt::one()).format_with("x");
        if self.numerator.len() > 1 {
            write!(f, "({})/({})", num, den)
        } else {
            write!(f, "{}/({})", num, den)
        }
    }
}

/// Parses a Laurent expression of the form `(poly)/(monomial)` or `poly` in variables x1..xn.
pub fn parse_laurent(s: &str, nvars: usize) -> Result<LaurentExpr, PolyError> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let strip = |t: &str| t.trim_start_matches('(').trim_end_matches(')').to_string();
    let (num, den) = match s.rfind(")/(") {
        Some(i) => (strip(&s[..=i]), Some(strip(&s[i + 2..]))),
        None => match s.rfind("/(") {
            Some(i) => (s[..i].to_string(), Some(strip(&s[i + 1..]))),
            None => (s.clone(), None),
        },
    };
    let num = parse_poly(&num, nvars, 'x')?;
    let den = match den {
        Some(d) => {
            let p = parse_poly(&d, nvars, 'x')?;
            if p.len() != 1 {
                return Err(PolyError::Parse("denominator must be a monomial".into()));
            }
            let (m, c) = p.leading().expect("one term");
            if !c.is_one() {
                return Err(PolyError::Parse("denominator must be monic".into()));
            }
            m.clone()
        }
        None => Monomial::one(nvars),
    };
    let inv = den.pow(-1);
    Ok(LaurentExpr::from_terms(nvars, num.terms().map(|(m, c)| (m.mul(&inv).0, c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> IntPolynomial {
        IntPolynomial::parse(s, n).unwrap()
    }

    #[test]
    fn tropical_add_examples() {
        assert_eq!(tropical_add(&Monomial(vec![2]), &Monomial(vec![3])).unwrap(), Monomial(vec![2]));
        let m = Monomial(vec![4, -1]);
        assert_eq!(tropical_add(&m, &m).unwrap(), m);
        assert_eq!(
            tropical_add(&Monomial(vec![-1, 1]), &Monomial(vec![0, -1])).unwrap(),
            Monomial(vec![-1, -1])
        );
        assert!(tropical_add(&Monomial(vec![1]), &Monomial(vec![1, 2])).is_err());
    }

    #[test]
    fn tropical_eval_a2() {
        let assign = [Monomial(vec![-1, 1]), Monomial(vec![0, -1])];
        assert_eq!(tropical_eval(&p("u1*u2+u1+1", 2), &assign).unwrap(), Monomial(vec![-1, 0]));
        assert_eq!(tropical_eval(&p("1", 2), &assign).unwrap(), Monomial(vec![0, 0]));
        assert_eq!(tropical_eval(&p("u2+1", 2), &assign).unwrap(), Monomial(vec![0, -1]));
        assert_eq!(tropical_eval(&IntPolynomial::zero(2), &assign), Err(PolyError::EmptyPolynomial));
    }

    #[test]
    fn newton_filter_examples() {
        assert_eq!(newton_vertex_filter(&p("u1*u2+u1+1", 2)), p("u1*u2+u1+1", 2));
        assert_eq!(newton_vertex_filter(&p("u1^2+2*u1+1", 1)), p("u1^2+1", 1));
        assert_eq!(newton_vertex_filter(&p("7*u1*u2^3", 2)), p("u1*u2^3", 2));
        assert_eq!(newton_vertex_filter(&p("u1^2*u2^2+u1*u2+1+u1^2+u2^2", 2)), p("u1^2*u2^2+u1^2+u2^2+1", 2));
    }

    #[test]
    fn exact_divide_examples() {
        let a = p("u2+1", 2).mul(&p("u1+1", 2));
        assert_eq!(exact_divide(&a, &p("u2+1", 2)).unwrap(), p("u1+1", 2));
        let f = p("3*u1^2*u2+u2-4", 2);
        assert_eq!(exact_divide(&f, &IntPolynomial::one(2)).unwrap(), f);
        assert_eq!(exact_divide(&p("u1*u2+u1+u2+1", 2), &p("u1+1", 2)).unwrap(), p("u2+1", 2));
        assert_eq!(exact_divide(&p("u1+2", 2), &p("u1+1", 2)), Err(PolyError::InexactDivision));
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in ["u1*u2+u1+1", "u2+1", "-3*u1^2*u3+2*u2-1", "0", "u1^4"] {
            let x = p(s, 3);
            assert_eq!(x.to_string(), s);
            assert_eq!(p(&x.to_string(), 3), x);
        }
        assert!(IntPolynomial::parse("u4", 3).is_err());
        assert!(IntPolynomial::parse("u1+", 3).is_err());
    }

    #[test]
    fn gcd_examples() {
        let a = p("u1+1", 2).mul(&p("u2+u1", 2));
        let b = p("u1+1", 2).mul(&p("u2-1", 2));
        assert_eq!(poly_gcd(&a, &b), p("u1+1", 2));
        assert_eq!(poly_gcd(&p("6*u1+4", 2), &p("9*u1+6", 2)), p("3*u1+2", 2));
        assert_eq!(poly_gcd(&p("u1^2-1", 1), &p("u1^2+2*u1+1", 1)), p("u1+1", 1));
        assert!(poly_gcd(&p("u1+u2", 2), &p("u1+2", 2)).is_one());
    }

    #[test]
    fn laurent_display_and_parse() {
        let e = LaurentExpr::from_terms(2, vec![(vec![0, -1], BigInt::one()), (vec![-1, -1], BigInt::one()), (vec![1, -1], BigInt::one())]);
        assert_eq!(e.to_string(), "(x1^2+x1+1)/(x1*x2)");
        assert_eq!(parse_laurent(&e.to_string(), 2).unwrap(), e);
        let single = parse_laurent("x1", 2).unwrap();
        assert_eq!(single.to_string(), "x1");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly(n: usize, max_terms: usize) -> impl Strategy<Value = IntPolynomial> {
        proptest::collection::vec((proptest::collection::vec(0i64..4, n), -5i64..6), 1..max_terms)
            .prop_map(move |ts| IntPolynomial::from_terms(n, ts.into_iter().map(|(e, c)| (Monomial(e), BigInt::from(c)))))
            .prop_filter("nonzero", |p| !p.is_zero())
    }

    fn positive_poly(n: usize) -> impl Strategy<Value = IntPolynomial> {
        proptest::collection::vec((proptest::collection::vec(0i64..4, n), 1i64..6), 1..6)
            .prop_map(move |ts| IntPolynomial::from_terms(n, ts.into_iter().map(|(e, c)| (Monomial(e), BigInt::from(c)))))
    }

    fn mono(n: usize) -> impl Strategy<Value = Monomial> {
        proptest::collection::vec(-4i64..5, n).prop_map(Monomial)
    }

    proptest! {
        #[test]
        fn tropical_add_laws(a in mono(3), b in mono(3), c in mono(3)) {
            let ab = tropical_add(&a, &b).unwrap();
            prop_assert_eq!(&ab, &tropical_add(&b, &a).unwrap());
            prop_assert_eq!(tropical_add(&ab, &c).unwrap(), tropical_add(&a, &tropical_add(&b, &c).unwrap()).unwrap());
            prop_assert_eq!(tropical_add(&a, &a).unwrap(), a);
        }

        #[test]
        fn tropical_eval_is_multiplicative(f in positive_poly(3), g in positive_poly(3), asg in proptest::collection::vec(mono(2), 3)) {
            let lhs = tropical_eval(&f.mul(&g), &asg).unwrap();
            let rhs = tropical_eval(&f, &asg).unwrap().mul(&tropical_eval(&g, &asg).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn newton_filter_preserves_tropical_values(f in positive_poly(2), asg in proptest::collection::vec(mono(3), 2)) {
            let v = newton_vertex_filter(&f);
            prop_assert_eq!(newton_vertex_filter(&v), v.clone());
            prop_assert_eq!(tropical_eval(&f, &asg).unwrap(), tropical_eval(&v, &asg).unwrap());
        }

        #[test]
        fn exact_divide_inverts_multiplication(a in poly(3, 6), b in poly(3, 5)) {
            prop_assert_eq!(exact_divide(&a.mul(&b), &b).unwrap(), a);
        }

        #[test]
        fn gcd_divides_both(a in poly(2, 4), b in poly(2, 4), c in poly(2, 3)) {
            let (x, y) = (a.mul(&c), b.mul(&c));
            let g = poly_gcd(&x, &y);
            prop_assert!(exact_divide(&x, &g).is_ok());
            prop_assert!(exact_divide(&y, &g).is_ok());
            prop_assert!(exact_divide(&g, &normalize_sign(c.clone())).is_ok());
        }

        #[test]
        fn print_parse_roundtrip_random(a in poly(3, 6)) {
            prop_assert_eq!(IntPolynomial::parse(&a.to_string(), 3).unwrap(), a);
        }
    }
}
