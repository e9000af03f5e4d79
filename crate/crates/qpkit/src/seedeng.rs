//! Exchange matrices, Y-seeds and the g / F / h recurrences along the n-regular tree.

use crate::linalg::Mat;
use crate::polycore::{
    exact_divide, poly_gcd, tropical_eval, IntPolynomial, LaurentExpr, Monomial, PolyError,
};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeedError {
    #[error("direction {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("principal part is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("matrix shape {0}x{1} is not n x n or 2n x n")]
    BadShape(usize, usize),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("polynomial size guard exceeded ({0} terms)")]
    TooLarge(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub fn pos(x: i64) -> i64 {
    x.max(0)
}

/// An m x n integer matrix whose top n x n block is skew-symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedExchangeMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

impl ExtendedExchangeMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, SeedError> {
        let m = entries.len();
        let n = entries.first().map_or(0, |r| r.len());
        if entries.iter().any(|r| r.len() != n) || !(m == n || m == 2 * n) {
            return Err(SeedError::BadShape(m, n));
        }
        for i in 0..n {
            for j in 0..n {
                if entries[i][j] != -entries[j][i] {
                    return Err(SeedError::NotSkewSymmetric);
                }
            }
        }
        Ok(ExtendedExchangeMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn principal(&self) -> Vec<Vec<i64>> {
        self.entries[..self.n].to_vec()
    }

    /// Rows `n..2n`, when present.
    pub fn coefficient_rows(&self) -> Option<Vec<Vec<i64>>> {
        (self.m() == 2 * self.n).then(|| self.entries[self.n..].to_vec())
    }
}

impl fmt::Display for ExtendedExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

pub fn mutate_entries(b: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let m = b.len();
    let n = b.first().map_or(0, |r| r.len());
    let mut out = b.to_vec();
    for i in 0..m {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else {
                b[i][j] + pos(b[i][k]) * pos(b[k][j]) - pos(-b[i][k]) * pos(-b[k][j])
            };
        }
    }
    out
}

/// Matrix mutation at direction `k` (0-based).
pub fn mutate_matrix(bt: &ExtendedExchangeMatrix, k: usize) -> Result<ExtendedExchangeMatrix, SeedError> {
    if k >= bt.n {
        return Err(SeedError::IndexOutOfRange(k + 1, bt.n));
    }
    Ok(ExtendedExchangeMatrix { n: bt.n, entries: mutate_entries(&bt.entries, k) })
}

pub fn check_skew(b: &[Vec<i64>]) -> Result<usize, SeedError> {
    let n = b.len();
    if b.iter().any(|r| r.len() != n) {
        return Err(SeedError::BadShape(n, b.first().map_or(0, |r| r.len())));
    }
    for i in 0..n {
        for j in 0..n {
            if b[i][j] != -b[j][i] {
                return Err(SeedError::NotSkewSymmetric);
            }
        }
    }
    Ok(n)
}

/// Stacks the identity below `b`.
pub fn principal_extension(b: &[Vec<i64>]) -> Result<ExtendedExchangeMatrix, SeedError> {
    let n = check_skew(b)?;
    let mut entries = b.to_vec();
    for i in 0..n {
        let mut row = vec![0; n];
        row[i] = 1;
        entries.push(row);
    }
    Ok(ExtendedExchangeMatrix { n, entries })
}

/// A walk from the root of the n-regular tree; labels are 0-based internally and
/// 1-based in text.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TreeWord(pub Vec<usize>);

impl TreeWord {
    pub fn new(labels: Vec<usize>, n: usize) -> Result<Self, SeedError> {
        let w = TreeWord(labels);
        w.validate(n)?;
        Ok(w)
    }

    pub fn validate(&self, n: usize) -> Result<(), SeedError> {
        for (i, &k) in self.0.iter().enumerate() {
            if k >= n {
                return Err(SeedError::IndexOutOfRange(k + 1, n));
            }
            if i > 0 && self.0[i - 1] == k {
                return Err(SeedError::InvalidWord(format!("repeated label {} at position {}", k + 1, i + 1)));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `2,1,2` (1-based labels); the empty string is the empty word.
    pub fn parse(s: &str, n: usize) -> Result<Self, SeedError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(TreeWord(Vec::new()));
        }
        let labels = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k >= 1)
                    .map(|k| k - 1)
                    .ok_or_else(|| SeedError::Parse(format!("bad label '{}'", t)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(labels, n)
    }

    /// The same tree vertex seen from the neighbour of the root along `k`.
    pub fn reroot(&self, k: usize) -> TreeWord {
        if self.0.first() == Some(&k) {
            TreeWord(self.0[1..].to_vec())
        } else {
            let mut v = vec![k];
            v.extend(&self.0);
            TreeWord(v)
        }
    }
}

impl fmt::Display for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedInvariants {
    pub g: Vec<Vec<i64>>,
    pub f: Vec<IntPolynomial>,
    pub h: Vec<Vec<i64>>,
}

impl SeedInvariants {
    pub fn initial(n: usize) -> Self {
        SeedInvariants {
            g: (0..n).map(|l| unit(n, l)).collect(),
            f: vec![IntPolynomial::one(n); n],
            h: vec![vec![0; n]; n],
        }
    }
}

pub fn unit(n: usize, l: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[l] = 1;
    e
}

/// Default guard on the number of terms of an F-polynomial.
pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Seeds and invariants at every vertex of the walk, starting with the root.
pub fn invariants_along(
    b: &[Vec<i64>],
    word: &TreeWord,
) -> Result<Vec<(ExtendedExchangeMatrix, SeedInvariants)>, SeedError> {
    invariants_along_limited(b, word, DEFAULT_MAX_TERMS)
}

/// Like [`invariants_along`], with `TooLarge` once an F-polynomial has more than
/// `max_terms` terms or its exchange numerator outgrows a box of `16 * max_terms` monomials.
pub fn invariants_along_limited(
    b: &[Vec<i64>],
    word: &TreeWord,
    max_terms: usize,
) -> Result<Vec<(ExtendedExchangeMatrix, SeedInvariants)>, SeedError> {
    let bt0 = principal_extension(b)?;
    let n = bt0.n;
    word.validate(n)?;
    let mut cur = (bt0, SeedInvariants::initial(n));
    let mut out = vec![cur.clone()];
    for &k in &word.0 {
        let (bt, inv) = &cur;
        let e = bt.entries();
        let mut g = inv.g.clone();
        let mut gk: Vec<i64> = inv.g[k].iter().map(|x| -x).collect();
        for i in 0..n {
            let c = pos(e[i][k]);
            if c != 0 {
                for (a, x) in gk.iter_mut().zip(&inv.g[i]) {
                    *a += c * x;
                }
            }
            let c = pos(e[n + i][k]);
            if c != 0 {
                for (r, a) in gk.iter_mut().enumerate() {
                    *a -= c * b[r][i];
                }
            }
        }
        g[k] = gk;
        // both exchange terms fit in a box of this multidegree
        let mut dp = vec![0i64; n];
        let mut dm = vec![0i64; n];
        for i in 0..n {
            dp[i] += pos(e[n + i][k]);
            dm[i] += pos(-e[n + i][k]);
            let (bp, bm) = (pos(e[i][k]), pos(-e[i][k]));
            if bp + bm > 0 {
                for v in 0..n {
                    let d = inv.f[i].degree_in(v);
                    dp[v] += bp * d;
                    dm[v] += bm * d;
                }
            }
        }
        let boxed = dp.iter().zip(&dm).fold(1usize, |acc, (a, b)| acc.saturating_mul(*a.max(b) as usize + 1));
        if boxed > max_terms.saturating_mul(16) {
            return Err(SeedError::TooLarge(boxed));
        }
        let mut plus = IntPolynomial::one(n);
        let mut minus = IntPolynomial::one(n);
        let mut up = vec![0i64; n];
        let mut um = vec![0i64; n];
        for i in 0..n {
            up[i] = pos(e[n + i][k]);
            um[i] = pos(-e[n + i][k]);
            let bp = pos(e[i][k]);
            let bm = pos(-e[i][k]);
            if bp > 0 {
                plus = plus.mul(&inv.f[i].pow(bp as u32));
            }
            if bm > 0 {
                minus = minus.mul(&inv.f[i].pow(bm as u32));
            }
        }
        let num = plus.mul_monomial(&Monomial(up)).add(&minus.mul_monomial(&Monomial(um)));
        let fk = exact_divide(&num, &inv.f[k])?;
        if fk.len() > max_terms {
            return Err(SeedError::TooLarge(fk.len()));
        }
        let mut f = inv.f.clone();
        f[k] = fk;
        let mut h = inv.h.clone();
        h[k] = h_vector_of(&f[k], b)?;
        let next = (mutate_matrix(bt, k)?, SeedInvariants { g, f, h });
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

/// Invariants at the end of the walk.
pub fn invariants_at(b: &[Vec<i64>], word: &TreeWord) -> Result<(ExtendedExchangeMatrix, SeedInvariants), SeedError> {
    Ok(invariants_along(b, word)?.pop().expect("root is always present"))
}

/// Tropical image of `f` under `u_i <- x_i^{-1} prod_{j != i} x_j^{[-b_ji]_+}`.
pub fn h_vector_of(f: &IntPolynomial, b: &[Vec<i64>]) -> Result<Vec<i64>, SeedError> {
    let n = b.len();
    let assignment: Vec<Monomial> = (0..n)
        .map(|i| Monomial((0..n).map(|j| if j == i { -1 } else { pos(-b[j][i]) }).collect()))
        .collect();
    Ok(tropical_eval(f, &assignment)?.0)
}

/// A rational function stored as a reduced pair of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: IntPolynomial,
    pub den: IntPolynomial,
}

impl Fraction {
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Self {
        let g = poly_gcd(&num, &den);
        let mut num = exact_divide(&num, &g).expect("gcd divides");
        let mut den = exact_divide(&den, &g).expect("gcd divides");
        if den.leading().is_some_and(|(_, c)| c.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Fraction { num, den }
    }

    pub fn from_poly(p: IntPolynomial) -> Self {
        let n = p.nvars();
        Fraction { num: p, den: IntPolynomial::one(n) }
    }

    pub fn mul(&self, o: &Fraction) -> Fraction {
        Fraction::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn add(&self, o: &Fraction) -> Fraction {
        Fraction::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Fraction {
        Fraction::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, e: i64) -> Fraction {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Fraction { num: base.num.pow(k), den: base.den.pow(k) }
    }

    pub fn has_positive_coefficients(&self) -> bool {
        self.num.has_nonnegative_coefficients() && self.den.has_nonnegative_coefficients()
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num.format_with("y"))
        } else {
            write!(f, "({})/({})", self.num.format_with("y"), self.den.format_with("y"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YSeed {
    pub y: Vec<Fraction>,
    pub b: Vec<Vec<i64>>,
}

impl YSeed {
    pub fn initial(b: &[Vec<i64>]) -> Result<Self, SeedError> {
        let n = check_skew(b)?;
        Ok(YSeed { y: (0..n).map(|i| Fraction::from_poly(IntPolynomial::var(n, i))).collect(), b: b.to_vec() })
    }
}

pub fn mutate_y_seed(seed: &YSeed, k: usize) -> Result<YSeed, SeedError> {
    let n = seed.b.len();
    if k >= n {
        return Err(SeedError::IndexOutOfRange(k + 1, n));
    }
    let yk = &seed.y[k];
    let (p, q) = (&yk.num, &yk.den);
    let p_plus_q = p.add(q);
    let y = (0..n)
        .map(|i| {
            if i == k {
                return yk.inv();
            }
            let bki = seed.b[k][i];
            let yi = &seed.y[i];
            let e = bki.unsigned_abs() as u32;
            if bki >= 0 {
                Fraction::new(yi.num.mul(&p.pow(e)), yi.den.mul(&p_plus_q.pow(e)))
            } else {
                Fraction::new(yi.num.mul(&p_plus_q.pow(e)), yi.den.mul(&q.pow(e)))
            }
        })
        .collect();
    Ok(YSeed { y, b: mutate_entries(&seed.b, k) })
}

/// Substitutes rational functions into a polynomial.
pub fn eval_fraction(f: &IntPolynomial, vals: &[Fraction]) -> Fraction {
    let nv = vals.first().map_or(0, |v| v.num.nvars());
    let mut acc = Fraction::from_poly(IntPolynomial::zero(nv));
    for (m, c) in f.terms() {
        let mut t = Fraction::from_poly(IntPolynomial::constant(nv, c.clone()));
        for (v, &e) in vals.iter().zip(&m.0) {
            if e != 0 {
                t = t.mul(&v.powi(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionReport {
    pub ok: bool,
    pub diffs: Vec<String>,
}

/// Checks the g-vector transition rule between the roots `t0` and `t1 = mu_k(t0)`
/// for one target: `g`, `h` are taken with root `t0` and matrix `b`; `g1`, `h1`
/// with root `t1` and matrix `mu_k(b)`.
pub fn check_transition(
    g: &[i64],
    g1: &[i64],
    h: &[i64],
    h1: &[i64],
    b: &[Vec<i64>],
    k: usize,
) -> TransitionReport {
    let n = b.len();
    let mut diffs = Vec::new();
    for j in 0..n {
        let expect = if j == k { -g[k] } else { g[j] + pos(b[j][k]) * g[k] - b[j][k] * h[k] };
        if g1[j] != expect {
            diffs.push(format!("g'_{} = {} but rule gives {}", j + 1, g1[j], expect));
        }
    }
    if g[k] != h[k] - h1[k] {
        diffs.push(format!("g_{} = {} but h_k - h'_k = {}", k + 1, g[k], h[k] - h1[k]));
    }
    TransitionReport { ok: diffs.is_empty(), diffs }
}

/// Checks `(y_k+1)^{h_k} F(y) = (y'_k+1)^{h'_k} F'(y')` with `y'` the mutated Y-seed.
pub fn check_f_transition(
    f: &IntPolynomial,
    f1: &IntPolynomial,
    hk: i64,
    h1k: i64,
    b: &[Vec<i64>],
    k: usize,
) -> Result<bool, SeedError> {
    let n = check_skew(b)?;
    if k >= n {
        return Err(SeedError::IndexOutOfRange(k + 1, n));
    }
    // y'_i = y_i y_k^{[b_ki]+} (1+y_k)^{-b_ki}, y'_k = 1/y_k; each side becomes
    // a sum of y^e (1+y_k)^c, scaled by y_k^{-a0} (1+y_k)^{-c0} to clear denominators
    let mut rhs: BTreeMap<i64, Vec<(Vec<i64>, BigInt)>> = BTreeMap::new();
    for (m, c) in f1.terms() {
        let mut e = m.0.clone();
        let mut gamma = h1k;
        e[k] = -m.0[k] - h1k;
        for i in (0..n).filter(|&i| i != k) {
            e[k] += m.0[i] * pos(b[k][i]);
            gamma -= m.0[i] * b[k][i];
        }
        rhs.entry(gamma).or_default().push((e, c.clone()));
    }
    let a0 = rhs.values().flatten().map(|(e, _)| e[k]).min().unwrap_or(0).min(0);
    let c0 = rhs.keys().next().copied().unwrap_or(hk).min(hk);
    let one_plus = IntPolynomial::one(n).add(&IntPolynomial::var(n, k));
    let mut shift = vec![0i64; n];
    shift[k] = -a0;
    let lhs = f.mul_monomial(&Monomial(shift)).mul(&one_plus.pow((hk - c0) as u32));
    let mut right = IntPolynomial::zero(n);
    for (gamma, terms) in rhs {
        let part = IntPolynomial::from_terms(
            n,
            terms.into_iter().map(|(mut e, c)| {
                e[k] -= a0;
                (Monomial(e), c)
            }),
        );
        right = right.add(&part.mul(&one_plus.pow((gamma - c0) as u32)));
    }
    Ok(lhs == right)
}

/// Coefficient-free cluster variable `F(y_hat) x^g` with `y_hat_j = prod_i x_i^{b_ij}`.
pub fn cluster_variable_expr(f: &IntPolynomial, g: &[i64], b: &[Vec<i64>]) -> LaurentExpr {
    let n = b.len();
    let terms = f.terms().map(|(m, c)| {
        let mut e = g.to_vec();
        for (j, &a) in m.0.iter().enumerate() {
            if a != 0 {
                for (i, x) in e.iter_mut().enumerate() {
                    *x += a * b[i][j];
                }
            }
        }
        (e, c.clone())
    });
    LaurentExpr::from_terms(n, terms.collect::<Vec<_>>())
}

/// Constant term 1 and a unique maximal monomial of coefficient 1 divisible by all others.
pub fn check_f_shape(f: &IntPolynomial) -> bool {
    if !f.constant_term().is_one() {
        return false;
    }
    let top = Monomial(f.multidegree());
    f.coeff(&top).is_one() && f.terms().all(|(m, _)| m.divides(&top))
}

/// Every coordinate has a consistent sign across the vectors.
pub fn sign_coherent(vs: &[Vec<i64>]) -> bool {
    let n = vs.first().map_or(0, |v| v.len());
    (0..n).all(|i| !(vs.iter().any(|v| v[i] > 0) && vs.iter().any(|v| v[i] < 0)))
}

pub fn integer_det(vs: &[Vec<i64>]) -> BigInt {
    let d = Mat::from_i64(vs).determinant();
    assert!(d.is_integer());
    d.to_integer()
}

/// Parses `m n` followed by m rows of integers.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, SeedError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head = lines.next().ok_or_else(|| SeedError::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = head
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| SeedError::Parse(format!("bad dimension '{}'", t))))
        .collect::<Result<_, _>>()?;
    let [m, n] = dims[..] else {
        return Err(SeedError::Parse("first line must be 'm n'".into()));
    };
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines.next().ok_or_else(|| SeedError::Parse("missing row".into()))?;
        let row: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| SeedError::Parse(format!("bad entry '{}'", t))))
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(SeedError::BadShape(m, row.len()));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn format_matrix(b: &[Vec<i64>]) -> String {
    let mut s = format!("{} {}\n", b.len(), b.first().map_or(0, |r| r.len()));
    for r in b {
        s.push_str(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    s
}

/// Random skew-symmetric matrix with entries in `-bound..=bound`.
pub fn random_skew<R: Rng>(n: usize, bound: i64, rng: &mut R) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(-bound..=bound);
            b[i][j] = x;
            b[j][i] = -x;
        }
    }
    b
}

/// Random reduced word of the given length.
/// With one vertex the length is capped at 1.
pub fn random_word<R: Rng>(n: usize, len: usize, rng: &mut R) -> TreeWord {
    let len = if n == 1 { len.min(1) } else { len };
    let mut w: Vec<usize> = Vec::with_capacity(len);
    while w.len() < len {
        let k = rng.gen_range(0..n);
        if w.last() != Some(&k) {
            w.push(k);
        }
    }
    TreeWord(w)
}

/// All reduced words of length at most `max_len`.
pub fn all_words(n: usize, max_len: usize) -> Vec<TreeWord> {
    let mut out = vec![TreeWord::default()];
    let mut frontier = vec![Vec::<usize>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for k in 0..n {
                if w.last() != Some(&k) {
                    let mut v = w.clone();
                    v.push(k);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned().map(TreeWord));
        frontier = next;
    }
    out
}

pub fn a2() -> Vec<Vec<i64>> {
    vec![vec![0, 1], vec![-1, 0]]
}

/// Linear orientation 1 -> 2 -> 3.
pub fn a3_linear() -> Vec<Vec<i64>> {
    vec![vec![0, -1, 0], vec![1, 0, -1], vec![0, 1, 0]]
}

/// Oriented 3-cycle 1 -> 2 -> 3 -> 1.
pub fn three_cycle() -> Vec<Vec<i64>> {
    vec![vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]
}

/// Kronecker quiver with two arrows 1 -> 2.
pub fn kronecker() -> Vec<Vec<i64>> {
    vec![vec![0, -2], vec![2, 0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn p(s: &str, n: usize) -> IntPolynomial {
        IntPolynomial::parse(s, n).unwrap()
    }

    fn word(s: &str, n: usize) -> TreeWord {
        TreeWord::parse(s, n).unwrap()
    }

    #[test]
    fn mutate_matrix_table_rows() {
        let t0 = principal_extension(&a2()).unwrap();
        assert_eq!(t0.entries(), &[vec![0, 1], vec![-1, 0], vec![1, 0], vec![0, 1]]);
        let t1 = mutate_matrix(&t0, 1).unwrap();
        assert_eq!(t1.entries(), &[vec![0, -1], vec![1, 0], vec![1, 0], vec![0, -1]]);
        let t2 = mutate_matrix(&t1, 0).unwrap();
        assert_eq!(t2.entries(), &[vec![0, 1], vec![-1, 0], vec![-1, 0], vec![0, -1]]);
        assert_eq!(mutate_matrix(&t1, 1).unwrap(), t0);
        assert!(mutate_matrix(&t0, 2).is_err());
    }

    #[test]
    fn principal_extension_shapes() {
        let z = principal_extension(&vec![vec![0; 3]; 3]).unwrap();
        assert_eq!(z.m(), 6);
        assert_eq!(z.coefficient_rows().unwrap(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let c = principal_extension(&[vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]).unwrap();
        assert_eq!(c.principal(), vec![vec![0, 1, -1], vec![-1, 0, 1], vec![1, -1, 0]]);
        assert!(principal_extension(&[vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn a2_table() {
        let steps = invariants_along(&a2(), &word("2,1,2,1,2", 2)).unwrap();
        let g: Vec<Vec<Vec<i64>>> = steps.iter().map(|s| s.1.g.clone()).collect();
        let h: Vec<Vec<Vec<i64>>> = steps.iter().map(|s| s.1.h.clone()).collect();
        let f: Vec<Vec<String>> = steps.iter().map(|s| s.1.f.iter().map(|x| x.to_string()).collect()).collect();
        assert_eq!(
            g,
            vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![1, 0], vec![0, -1]],
                vec![vec![-1, 0], vec![0, -1]],
                vec![vec![-1, 0], vec![-1, 1]],
                vec![vec![0, 1], vec![-1, 1]],
                vec![vec![0, 1], vec![1, 0]],
            ]
        );
        assert_eq!(
            f,
            vec![
                vec!["1", "1"],
                vec!["1", "u2+1"],
                vec!["u1*u2+u1+1", "u2+1"],
                vec!["u1*u2+u1+1", "u1+1"],
                vec!["1", "u1+1"],
                vec!["1", "1"],
            ]
        );
        assert_eq!(
            h,
            vec![
                vec![vec![0, 0], vec![0, 0]],
                vec![vec![0, 0], vec![0, -1]],
                vec![vec![-1, 0], vec![0, -1]],
                vec![vec![-1, 0], vec![-1, 0]],
                vec![vec![0, 0], vec![-1, 0]],
                vec![vec![0, 0], vec![0, 0]],
            ]
        );
        assert_eq!(steps[5].0.entries(), &[vec![0, -1], vec![1, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn one_step_formula() {
        let b = three_cycle();
        for k in 0..3 {
            let (_, inv) = invariants_at(&b, &TreeWord(vec![k])).unwrap();
            let mut expect = vec![0; 3];
            expect[k] = -1;
            for (i, e) in expect.iter_mut().enumerate() {
                *e += pos(-b[i][k]);
            }
            assert_eq!(inv.g[k], expect);
            assert_eq!(inv.f[k], IntPolynomial::var(3, k).add(&IntPolynomial::one(3)));
        }
    }

    #[test]
    fn h_vector_examples() {
        assert_eq!(h_vector_of(&p("u1*u2+u1+1", 2), &a2()).unwrap(), vec![-1, 0]);
        assert_eq!(h_vector_of(&IntPolynomial::one(2), &a2()).unwrap(), vec![0, 0]);
        assert_eq!(h_vector_of(&p("u1+1", 2), &a2()).unwrap(), vec![-1, 0]);
    }

    #[test]
    fn y_seed_examples() {
        let s = YSeed::initial(&a2()).unwrap();
        let s2 = mutate_y_seed(&s, 1).unwrap();
        assert_eq!(s2.y[1], Fraction::new(IntPolynomial::one(2), IntPolynomial::var(2, 1)));
        // b_21 = -1, so y1' = y1 (y2 + 1)
        assert_eq!(s2.y[0], Fraction::from_poly(p("u1*u2+u1", 2)));
        assert_eq!(mutate_y_seed(&s2, 1).unwrap(), s);
        for k in 0..2 {
            assert_eq!(mutate_y_seed(&s, k).unwrap().y[k], s.y[k].inv());
        }
    }

    #[test]
    fn transition_across_first_edge() {
        let b = a2();
        let b1 = mutate_entries(&b, 1);
        for w in all_words(2, 5) {
            let (_, a) = invariants_at(&b, &w).unwrap();
            let (_, c) = invariants_at(&b1, &w.reroot(1)).unwrap();
            for l in 0..2 {
                let r = check_transition(&a.g[l], &c.g[l], &a.h[l], &c.h[l], &b, 1);
                assert!(r.ok, "{:?} {}", r.diffs, w);
                assert!(check_f_transition(&a.f[l], &c.f[l], a.h[l][1], c.h[l][1], &b, 1).unwrap());
            }
        }
        let base = check_transition(&[1, 0], &[1, 0], &[0, 0], &[0, 0], &b, 1);
        assert!(base.ok);
    }

    #[test]
    fn cluster_variables_match_exchange_recurrence() {
        let b = a2();
        let steps = invariants_along(&b, &word("2,1", 2)).unwrap();
        let inv = &steps[2].1;
        assert_eq!(cluster_variable_expr(&inv.f[0], &inv.g[0], &b).to_string(), "(x1+x2+1)/(x1*x2)");
        assert_eq!(cluster_variable_expr(&inv.f[1], &inv.g[1], &b).to_string(), "(x1+1)/(x2)");
        assert_eq!(cluster_variable_expr(&IntPolynomial::one(2), &[0, 1], &b).to_string(), "x2");
    }

    /// Iterates `x'_k x_k = prod x_i^{[b_ik]_+} + prod x_i^{[-b_ik]_+}` with exact division.
    fn exchange_oracle(b: &[Vec<i64>], w: &TreeWord) -> Vec<LaurentExpr> {
        let n = b.len();
        let mut x: Vec<LaurentExpr> =
            (0..n).map(|i| LaurentExpr::from_polynomial(&IntPolynomial::var(n, i))).collect();
        let mut bb = b.to_vec();
        for &k in &w.0 {
            let one = LaurentExpr::from_polynomial(&IntPolynomial::one(n));
            let (mut p1, mut p2) = (one.clone(), one);
            for i in 0..n {
                for _ in 0..pos(bb[i][k]) {
                    p1 = p1.mul(&x[i]);
                }
                for _ in 0..pos(-bb[i][k]) {
                    p2 = p2.mul(&x[i]);
                }
            }
            x[k] = p1.add(&p2).divide(&x[k]).unwrap();
            bb = mutate_entries(&bb, k);
        }
        x
    }

    #[test]
    fn laurent_phenomenon_small_types() {
        for b in [a2(), a3_linear(), three_cycle()] {
            let n = b.len();
            for w in all_words(n, 4) {
                let (_, inv) = invariants_at(&b, &w).unwrap();
                let oracle = exchange_oracle(&b, &w);
                for l in 0..n {
                    let e = cluster_variable_expr(&inv.f[l], &inv.g[l], &b);
                    assert_eq!(e, oracle[l], "{} {}", w, l);
                    assert!(e.numerator.has_nonnegative_coefficients());
                    for i in (0..n).filter(|&i| e.denominator.0[i] > 0) {
                        let xi = IntPolynomial::var(n, i);
                        assert!(exact_divide(&e.numerator, &xi).is_err());
                    }
                }
            }
        }
    }

    #[test]
    fn parse_matrix_and_word() {
        let b = parse_matrix("2 2\n0 1\n-1 0\n").unwrap();
        assert_eq!(b, a2());
        assert_eq!(parse_matrix(&format_matrix(&three_cycle())).unwrap(), three_cycle());
        assert!(TreeWord::parse("1,1", 2).is_err());
        assert!(TreeWord::parse("3", 2).is_err());
        assert_eq!(TreeWord::parse("2,1", 2).unwrap().to_string(), "2,1");
    }

    fn skew_strategy(n: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
        any::<u64>().prop_map(move |s| random_skew(n, bound, &mut rand_chacha::ChaCha8Rng::seed_from_u64(s)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matrix_mutation_is_involutive(b in skew_strategy(4, 3), k in 0usize..4) {
            let bt = principal_extension(&b).unwrap();
            let once = mutate_matrix(&bt, k).unwrap();
            prop_assert!(check_skew(&once.principal()).is_ok());
            prop_assert_eq!(mutate_matrix(&once, k).unwrap(), bt);
        }

        #[test]
        fn y_seed_mutation_is_involutive(b in skew_strategy(3, 2), k in 0usize..3, j in 0usize..3) {
            let s = YSeed::initial(&b).unwrap();
            let s1 = if j != k { mutate_y_seed(&s, j).unwrap() } else { s.clone() };
            let once = mutate_y_seed(&s1, k).unwrap();
            prop_assert!(once.y.iter().all(Fraction::has_positive_coefficients));
            prop_assert_eq!(mutate_y_seed(&once, k).unwrap(), s1);
        }

        #[test]
        fn recurrence_properties(b in skew_strategy(3, 1), seed in any::<u64>(), len in 0usize..6) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let w = random_word(3, len, &mut rng);
            let (_, inv) = invariants_at(&b, &w).unwrap();
            prop_assert!(inv.f.iter().all(check_f_shape));
            prop_assert!(sign_coherent(&inv.g));
            prop_assert_eq!(integer_det(&inv.g).abs(), BigInt::one());
        }

        #[test]
        fn transition_random(b in skew_strategy(3, 1), seed in any::<u64>(), len in 0usize..6, k in 0usize..3) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let w = random_word(3, len, &mut rng);
            let (_, a) = invariants_at(&b, &w).unwrap();
            let b1 = mutate_entries(&b, k);
            let (_, c) = invariants_at(&b1, &w.reroot(k)).unwrap();
            for l in 0..3 {
                let r = check_transition(&a.g[l], &c.g[l], &a.h[l], &c.h[l], &b, k);
                prop_assert!(r.ok, "{:?}", r.diffs);
                prop_assert!(a.h[l][k].max(c.h[l][k]) == 0);
            }
        }
    }
}
