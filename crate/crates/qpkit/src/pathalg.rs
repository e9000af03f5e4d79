//! Quivers, truncated path algebras, potentials and QP mutation.
//!
//! A path `a1 a2 ... ad` is stored left to right with `ad` applied first, so
//! `t(a_p) = h(a_{p+1})`. Every element is kept modulo paths of length `>= N`.

use crate::linalg::{fmt_q, parse_q, q, Mat, Q};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("vertex {0} lies on a 2-cycle; mutation is undefined")]
    TwoCycleAt(usize),
    #[error("arrows {0} and {1} do not meet at a common vertex")]
    NotComposable(String, String),
    #[error("elimination did not stabilize below truncation order {0}")]
    TruncationTooSmall(usize),
    #[error("unknown arrow '{0}'")]
    UnknownArrow(String),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// A quiver without loops; arrows are kept sorted by `(tail, head, id)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    pub n: usize,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    /// Sorts the arrows; returns the quiver and the new position of each input arrow.
    pub fn with_order(n: usize, arrows: Vec<Arrow>) -> (Quiver, Vec<usize>) {
        let mut idx: Vec<usize> = (0..arrows.len()).collect();
        idx.sort_by(|&x, &y| {
            let (a, b) = (&arrows[x], &arrows[y]);
            (a.tail, a.head, &a.id).cmp(&(b.tail, b.head, &b.id))
        });
        let mut pos = vec![0; arrows.len()];
        for (new, &old) in idx.iter().enumerate() {
            pos[old] = new;
        }
        let sorted = idx.iter().map(|&i| arrows[i].clone()).collect();
        (Quiver { n, arrows: sorted }, pos)
    }

    pub fn new(n: usize, arrows: Vec<Arrow>) -> Quiver {
        assert!(arrows.iter().all(|a| a.tail != a.head && a.tail < n && a.head < n));
        Self::with_order(n, arrows).0
    }

    pub fn head(&self, a: usize) -> usize {
        self.arrows[a].head
    }

    pub fn tail(&self, a: usize) -> usize {
        self.arrows[a].tail
    }

    pub fn id(&self, a: usize) -> &str {
        &self.arrows[a].id
    }

    pub fn find(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn incoming(&self, k: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].head == k).collect()
    }

    pub fn outgoing(&self, k: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].tail == k).collect()
    }

    pub fn arrows_between(&self, tail: usize, head: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].tail == tail && self.arrows[a].head == head).collect()
    }

    pub fn has_two_cycle_at(&self, k: usize) -> bool {
        self.incoming(k).iter().any(|&a| !self.arrows_between(k, self.tail(a)).is_empty())
    }

    pub fn has_two_cycles(&self) -> bool {
        (0..self.n).any(|k| self.has_two_cycle_at(k))
    }

    /// `b_ij = #(j -> i) - #(i -> j)`.
    pub fn to_matrix(&self) -> Vec<Vec<i64>> {
        let mut b = vec![vec![0; self.n]; self.n];
        for a in &self.arrows {
            b[a.head][a.tail] += 1;
            b[a.tail][a.head] -= 1;
        }
        b
    }

    pub fn opposite(&self) -> Quiver {
        Quiver {
            n: self.n,
            arrows: self.arrows.iter().map(|a| Arrow { id: a.id.clone(), tail: a.head, head: a.tail }).collect(),
        }
    }

    /// Text form: `n`, then `id tail head` per arrow with 1-based vertices.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for a in &self.arrows {
            s.push_str(&format!("{} {} {}\n", a.id, a.tail + 1, a.head + 1));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Quiver, PathError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| PathError::Parse("empty quiver file".into()))?
            .parse()
            .map_err(|_| PathError::Parse("first line must be the vertex count".into()))?;
        let mut arrows = Vec::new();
        for l in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let [id, t, h] = parts[..] else {
                return Err(PathError::Parse(format!("bad arrow line '{}'", l)));
            };
            let t: usize = t.parse().map_err(|_| PathError::Parse(format!("bad tail in '{}'", l)))?;
            let h: usize = h.parse().map_err(|_| PathError::Parse(format!("bad head in '{}'", l)))?;
            if t == 0 || h == 0 || t > n || h > n || t == h || id.contains('*') {
                return Err(PathError::Parse(format!("invalid arrow '{}'", l)));
            }
            arrows.push(Arrow { id: id.to_string(), tail: t - 1, head: h - 1 });
        }
        Ok(Quiver::new(n, arrows))
    }
}

fn letter_name(i: usize) -> String {
    let c = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        c.to_string()
    } else {
        format!("{}{}", c, i / 26)
    }
}

/// The quiver with `[b_ij]_+` arrows from `j` to `i`, named a, b, c, ... in
/// `(tail, head)` order.
pub fn quiver_from_matrix(b: &[Vec<i64>]) -> Result<Quiver, PathError> {
    let n = b.len();
    if b.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..n).any(|j| b[i][j] != -b[j][i])) {
        return Err(PathError::NotSkewSymmetric);
    }
    let mut arrows = Vec::new();
    for t in 0..n {
        for h in 0..n {
            for _ in 0..b[h][t].max(0) {
                arrows.push(Arrow { id: letter_name(arrows.len()), tail: t, head: h });
            }
        }
    }
    Ok(Quiver::new(n, arrows))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub head: usize,
    pub tail: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn idempotent(i: usize) -> Path {
        Path { head: i, tail: i, arrows: Vec::new() }
    }

    pub fn arrow(qv: &Quiver, a: usize) -> Path {
        Path { head: qv.head(a), tail: qv.tail(a), arrows: vec![a] }
    }

    /// The path with arrows `word` (leftmost applied last).
    pub fn from_word(qv: &Quiver, word: &[usize]) -> Option<Path> {
        let (first, last) = (word.first()?, word.last()?);
        if word.windows(2).any(|w| qv.tail(w[0]) != qv.head(w[1])) {
            return None;
        }
        Some(Path { head: qv.head(*first), tail: qv.tail(*last), arrows: word.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self * other`: `other` first, then `self`.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.tail != other.head {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(&other.arrows);
        Some(Path { head: self.head, tail: other.tail, arrows })
    }

    pub fn format(&self, qv: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e{}", self.head + 1)
        } else {
            self.arrows.iter().map(|&a| qv.id(a)).collect::<Vec<_>>().join("*")
        }
    }
}

/// A linear combination of paths, truncated at length `n_trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathVector {
    pub n_trunc: usize,
    pub terms: BTreeMap<Path, Q>,
}

impl PathVector {
    pub fn zero(n_trunc: usize) -> Self {
        PathVector { n_trunc, terms: BTreeMap::new() }
    }

    pub fn from_path(p: Path, c: Q, n_trunc: usize) -> Self {
        let mut v = Self::zero(n_trunc);
        v.add_term(p, c);
        v
    }

    pub fn add_term(&mut self, p: Path, c: Q) {
        if c.is_zero() || p.len() >= self.n_trunc {
            return;
        }
        match self.terms.entry(p) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &PathVector) -> PathVector {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &PathVector) -> PathVector {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> PathVector {
        let mut out = PathVector::zero(self.n_trunc);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * s);
        }
        out
    }

    /// Product `self * o` (apply `o` first), dropping paths of length `>= N`.
    pub fn mul(&self, o: &PathVector) -> PathVector {
        let mut out = PathVector::zero(self.n_trunc.min(o.n_trunc));
        for (p1, c1) in &self.terms {
            for (p2, c2) in &o.terms {
                if p1.len() + p2.len() < out.n_trunc {
                    if let Some(p) = p1.concat(p2) {
                        out.add_term(p, c1 * c2);
                    }
                }
            }
        }
        out
    }

    pub fn min_len(&self) -> Option<usize> {
        self.terms.keys().map(Path::len).min()
    }

    pub fn format(&self, qv: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("{}*{}", fmt_q(c), p.format(qv)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Least rotation of a cyclic word.
pub fn cyclic_normal(w: &[usize]) -> Vec<usize> {
    let d = w.len();
    (0..d)
        .map(|r| w[r..].iter().chain(&w[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// A potential: cycles in least-rotation form with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Potential {
    pub terms: BTreeMap<Vec<usize>, Q>,
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    pub fn add_cycle(&mut self, w: &[usize], c: Q) {
        if c.is_zero() {
            return;
        }
        let key = cyclic_normal(w);
        match self.terms.entry(key) {
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

    pub fn from_cycles(cycles: &[(Vec<usize>, Q)]) -> Self {
        let mut s = Potential::zero();
        for (w, c) in cycles {
            s.add_cycle(w, c.clone());
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).min()
    }

    pub fn truncate(&mut self, n_trunc: usize) {
        self.terms.retain(|w, _| w.len() < n_trunc);
    }

    pub fn scale(&self, s: &Q) -> Potential {
        let mut out = Potential::zero();
        for (w, c) in &self.terms {
            out.add_cycle(w, c * s);
        }
        out
    }

    pub fn add(&self, o: &Potential) -> Potential {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_cycle(w, c.clone());
        }
        out
    }

    pub fn format(&self, qv: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(w, c)| format!("{}*{}", fmt_q(c), w.iter().map(|&a| qv.id(a)).collect::<Vec<_>>().join("*")))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Text form: one `coeff  path` line per cycle.
    pub fn to_text(&self, qv: &Quiver) -> String {
        let mut s = String::new();
        for (w, c) in &self.terms {
            s.push_str(&format!("{}  {}\n", fmt_q(c), w.iter().map(|&a| qv.id(a)).collect::<Vec<_>>().join("*")));
        }
        s
    }

    pub fn parse(text: &str, qv: &Quiver) -> Result<Potential, PathError> {
        let mut s = Potential::zero();
        for l in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let mut parts = l.split_whitespace();
            let (Some(c), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(PathError::Parse(format!("bad potential line '{}'", l)));
            };
            let c = parse_q(c).ok_or_else(|| PathError::Parse(format!("bad coefficient '{}'", c)))?;
            let word = p
                .split('*')
                .map(|id| qv.find(id).ok_or_else(|| PathError::UnknownArrow(id.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let path = Path::from_word(qv, &word).ok_or_else(|| PathError::Parse(format!("'{}' is not a path", p)))?;
            if path.head != path.tail {
                return Err(PathError::Parse(format!("'{}' is not a cycle", p)));
            }
            s.add_cycle(&word, c);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPData {
    pub quiver: Quiver,
    pub potential: Potential,
    pub n_trunc: usize,
}

impl QPData {
    pub fn new(quiver: Quiver, mut potential: Potential, n_trunc: usize) -> Self {
        potential.truncate(n_trunc);
        QPData { quiver, potential, n_trunc }
    }

    pub fn is_reduced(&self) -> bool {
        self.potential.min_degree().is_none_or(|d| d >= 3)
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.quiver.to_matrix()
    }

    /// Opposite quiver with every cycle of the potential reversed, and the new
    /// position of each arrow.
    pub fn opposite(&self) -> (QPData, Vec<usize>) {
        let (quiver, pos) = Quiver::with_order(self.quiver.n, self.quiver.opposite().arrows);
        let mut s = Potential::zero();
        for (w, c) in &self.potential.terms {
            let r: Vec<usize> = w.iter().rev().map(|&a| pos[a]).collect();
            s.add_cycle(&r, c.clone());
        }
        (QPData { quiver, potential: s, n_trunc: self.n_trunc }, pos)
    }
}

/// Cyclic derivative `∂_a S`, a combination of paths from `h(a)` to `t(a)`.
pub fn cyclic_derivative(qp: &QPData, a: usize) -> PathVector {
    let qv = &qp.quiver;
    let mut out = PathVector::zero(qp.n_trunc);
    for (w, c) in &qp.potential.terms {
        let d = w.len();
        for p in 0..d {
            if w[p] == a {
                let rest: Vec<usize> = (1..d).map(|i| w[(p + i) % d]).collect();
                let path = Path::from_word(qv, &rest).expect("rotation of a cycle is a path");
                out.add_term(path, c.clone());
            }
        }
    }
    out
}

/// `∂_{ba} S`: for each cyclic occurrence of `b a`, the rest of the cycle, a path
/// from `h(b)` to `t(a)`.
pub fn second_derivative(qp: &QPData, b: usize, a: usize) -> Result<PathVector, PathError> {
    let qv = &qp.quiver;
    if qv.head(a) != qv.tail(b) {
        return Err(PathError::NotComposable(qv.id(b).into(), qv.id(a).into()));
    }
    let mut out = PathVector::zero(qp.n_trunc);
    for (w, c) in &qp.potential.terms {
        let d = w.len();
        for nu in 0..d {
            if w[nu] == b && w[(nu + 1) % d] == a {
                let rest: Vec<usize> = (2..d).map(|i| w[(nu + i) % d]).collect();
                let path = if rest.is_empty() {
                    Path::idempotent(qv.head(b))
                } else {
                    Path::from_word(qv, &rest).expect("subword of a cycle")
                };
                out.add_term(path, c.clone());
            }
        }
    }
    Ok(out)
}

/// Rows: arrows into `k`; columns: arrows out of `k`; entry `∂_{b_q a_p} S`.
pub fn h_matrix(qp: &QPData, k: usize) -> Vec<Vec<PathVector>> {
    let ins = qp.quiver.incoming(k);
    let outs = qp.quiver.outgoing(k);
    ins.iter()
        .map(|&a| outs.iter().map(|&b| second_derivative(qp, b, a).expect("meet at k")).collect())
        .collect()
}

/// One substitution of arrows by path vectors; `None` keeps the arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub images: Vec<Option<PathVector>>,
}

/// A composite of substitutions, applied first to last.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RightEquivalence {
    pub steps: Vec<Substitution>,
}

impl RightEquivalence {
    pub fn identity() -> Self {
        RightEquivalence::default()
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &RightEquivalence) -> RightEquivalence {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        RightEquivalence { steps }
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }
}

fn expand_word(qv: &Quiver, word: &[usize], sub: &Substitution, n_trunc: usize) -> PathVector {
    let mut acc: Option<PathVector> = None;
    for &a in word.iter().rev() {
        let img = match &sub.images[a] {
            Some(v) => v.clone(),
            None => PathVector::from_path(Path::arrow(qv, a), Q::one(), n_trunc),
        };
        acc = Some(match acc {
            None => img,
            Some(prev) => img.mul(&prev),
        });
    }
    acc.unwrap_or_else(|| PathVector::zero(n_trunc))
}

fn apply_sub_vector(qv: &Quiver, sub: &Substitution, v: &PathVector) -> PathVector {
    let mut out = PathVector::zero(v.n_trunc);
    for (p, c) in &v.terms {
        if p.arrows.is_empty() {
            out.add_term(p.clone(), c.clone());
            continue;
        }
        if p.arrows.iter().all(|&a| sub.images[a].is_none()) {
            out.add_term(p.clone(), c.clone());
            continue;
        }
        out = out.add(&expand_word(qv, &p.arrows, sub, v.n_trunc).scale(c));
    }
    out
}

fn apply_sub_potential(qv: &Quiver, sub: &Substitution, s: &Potential, n_trunc: usize) -> Potential {
    let mut out = Potential::zero();
    for (w, c) in &s.terms {
        if w.iter().all(|&a| sub.images[a].is_none()) {
            out.add_cycle(w, c.clone());
            continue;
        }
        for (p, c2) in expand_word(qv, w, sub, n_trunc).terms {
            out.add_cycle(&p.arrows, c * c2);
        }
    }
    out.truncate(n_trunc);
    out
}

/// Substitutes every arrow by its image and expands, modulo paths of length `>= N`.
pub fn apply_equivalence(qv: &Quiver, phi: &RightEquivalence, v: &PathVector) -> PathVector {
    phi.steps.iter().fold(v.clone(), |acc, s| apply_sub_vector(qv, s, &acc))
}

pub fn apply_equivalence_potential(qv: &Quiver, phi: &RightEquivalence, s: &Potential, n_trunc: usize) -> Potential {
    phi.steps.iter().fold(s.clone(), |acc, st| apply_sub_potential(qv, st, &acc, n_trunc))
}

fn toggle_star(id: &str) -> String {
    match id.strip_suffix('\'') {
        Some(base) => base.to_string(),
        None => format!("{}'", id),
    }
}

fn fresh(id: String, used: &mut BTreeSet<String>) -> String {
    let mut cand = id.clone();
    let mut i = 1;
    while used.contains(&cand) {
        cand = format!("{}~{}", id, i);
        i += 1;
    }
    used.insert(cand.clone());
    cand
}

/// Composite and reversed arrows of a premutation, as indices into the new quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premutation {
    pub qp: QPData,
    /// Old arrow index to new index, for arrows not incident to `k`.
    pub kept: Vec<Option<usize>>,
    /// `composite[p][q]` is `[b_q a_p]` for `a_p` into `k` and `b_q` out of `k`.
    pub composite: Vec<Vec<usize>>,
    /// `a_p^*` for each arrow into `k`.
    pub in_star: Vec<usize>,
    /// `b_q^*` for each arrow out of `k`.
    pub out_star: Vec<usize>,
}

/// Composite arrows, arrow reversal at `k`, and `S~ = [S] + Σ [ba] a* b*`.
pub fn premutate(qp: &QPData, k: usize) -> Result<Premutation, PathError> {
    let qv = &qp.quiver;
    if k >= qv.n {
        return Err(PathError::BadVertex(k + 1));
    }
    if qv.has_two_cycle_at(k) {
        return Err(PathError::TwoCycleAt(k + 1));
    }
    let ins = qv.incoming(k);
    let outs = qv.outgoing(k);
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut kept_raw = vec![None; qv.arrows.len()];
    for (i, a) in qv.arrows.iter().enumerate() {
        if a.head != k && a.tail != k {
            used.insert(a.id.clone());
            kept_raw[i] = Some(arrows.len());
            arrows.push(a.clone());
        }
    }
    let mut comp_raw = vec![vec![0; outs.len()]; ins.len()];
    for (p, &a) in ins.iter().enumerate() {
        for (qi, &b) in outs.iter().enumerate() {
            let id = fresh(format!("[{}.{}]", qv.id(b), qv.id(a)), &mut used);
            comp_raw[p][qi] = arrows.len();
            arrows.push(Arrow { id, tail: qv.tail(a), head: qv.head(b) });
        }
    }
    let mut in_raw = Vec::new();
    for &a in &ins {
        let id = fresh(toggle_star(qv.id(a)), &mut used);
        in_raw.push(arrows.len());
        arrows.push(Arrow { id, tail: k, head: qv.tail(a) });
    }
    let mut out_raw = Vec::new();
    for &b in &outs {
        let id = fresh(toggle_star(qv.id(b)), &mut used);
        out_raw.push(arrows.len());
        arrows.push(Arrow { id, tail: qv.head(b), head: k });
    }
    let (nq, pos) = Quiver::with_order(qv.n, arrows);
    let kept: Vec<Option<usize>> = kept_raw.iter().map(|o| o.map(|i| pos[i])).collect();
    let composite: Vec<Vec<usize>> = comp_raw.iter().map(|r| r.iter().map(|&i| pos[i]).collect()).collect();
    let in_star: Vec<usize> = in_raw.iter().map(|&i| pos[i]).collect();
    let out_star: Vec<usize> = out_raw.iter().map(|&i| pos[i]).collect();
    let in_pos: HashMap<usize, usize> = ins.iter().enumerate().map(|(p, &a)| (a, p)).collect();
    let out_pos: HashMap<usize, usize> = outs.iter().enumerate().map(|(p, &b)| (b, p)).collect();

    let mut s = Potential::zero();
    for (w, c) in &qp.potential.terms {
        let d = w.len();
        let r = (0..d).find(|&r| qv.head(w[r]) != k).expect("cycle leaves k");
        let rot: Vec<usize> = (0..d).map(|i| w[(r + i) % d]).collect();
        let mut out = Vec::with_capacity(d);
        let mut i = 0;
        while i < d {
            let x = rot[i];
            if qv.tail(x) == k {
                let a = rot[i + 1];
                out.push(composite[in_pos[&a]][out_pos[&x]]);
                i += 2;
            } else {
                out.push(kept[x].expect("arrow away from k"));
                i += 1;
            }
        }
        s.add_cycle(&out, c.clone());
    }
    for p in 0..ins.len() {
        for qi in 0..outs.len() {
            s.add_cycle(&[composite[p][qi], in_star[p], out_star[qi]], Q::one());
        }
    }
    Ok(Premutation { qp: QPData::new(nq, s, qp.n_trunc), kept, composite, in_star, out_star })
}

/// The result of splitting off the trivial part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub reduced: QPData,
    pub triv_cycle_count: usize,
    pub phi: RightEquivalence,
    /// Reduced arrow index to arrow index in the input quiver.
    pub kept: Vec<usize>,
    /// Trivial pairs `(p, q)` in the input quiver with `p q` in the split potential.
    pub pairs: Vec<(usize, usize)>,
}

fn linear_step(qp: &QPData) -> (Option<Substitution>, Vec<(usize, usize)>) {
    let qv = &qp.quiver;
    let nt = qp.n_trunc;
    let mut images: Vec<Option<PathVector>> = vec![None; qv.arrows.len()];
    let mut pairs = Vec::new();
    let mut changed = false;
    for i in 0..qv.n {
        for j in i + 1..qv.n {
            let ps = qv.arrows_between(i, j);
            let qs = qv.arrows_between(j, i);
            if ps.is_empty() || qs.is_empty() {
                continue;
            }
            let mut c = Mat::zeros(ps.len(), qs.len());
            for (x, &p) in ps.iter().enumerate() {
                for (y, &qq) in qs.iter().enumerate() {
                    if let Some(v) = qp.potential.terms.get(&cyclic_normal(&[p, qq])) {
                        c[(x, y)] = v.clone();
                    }
                }
            }
            if c.is_zero() {
                continue;
            }
            let aug = Mat::hstack(&[&c, &Mat::identity(ps.len())], ps.len());
            let (red, pivots) = aug.rref();
            let pivots: Vec<usize> = pivots.into_iter().filter(|&x| x < qs.len()).collect();
            let r = pivots.len();
            let l = red.block(0, ps.len(), qs.len(), qs.len() + ps.len());
            let e = red.block(0, ps.len(), 0, qs.len());
            let nonpiv: Vec<usize> = (0..qs.len()).filter(|x| !pivots.contains(x)).collect();
            let mut rr = Mat::zeros(qs.len(), qs.len());
            for (nu, &cp) in pivots.iter().enumerate() {
                rr[(cp, nu)] = Q::one();
            }
            for (off, &jj) in nonpiv.iter().enumerate() {
                let col = r + off;
                rr[(jj, col)] = Q::one();
                for (nu, &cp) in pivots.iter().enumerate() {
                    rr[(cp, col)] -= &e[(nu, jj)];
                }
            }
            debug_assert_eq!(l.mul(&c).mul(&rr), {
                let mut d = Mat::zeros(ps.len(), qs.len());
                for nu in 0..r {
                    d[(nu, nu)] = Q::one();
                }
                d
            });
            for (x, &p) in ps.iter().enumerate() {
                let mut v = PathVector::zero(nt);
                for (y, &p2) in ps.iter().enumerate() {
                    v.add_term(Path::arrow(qv, p2), l[(y, x)].clone());
                }
                images[p] = Some(v);
            }
            for (x, &qq) in qs.iter().enumerate() {
                let mut v = PathVector::zero(nt);
                for (y, &q2) in qs.iter().enumerate() {
                    v.add_term(Path::arrow(qv, q2), rr[(x, y)].clone());
                }
                images[qq] = Some(v);
            }
            changed = true;
            for nu in 0..r {
                pairs.push((ps[nu], qs[nu]));
            }
        }
    }
    (changed.then_some(Substitution { images }), pairs)
}

/// Splits `qp` into a trivial part and a reduced part by a right-equivalence.
pub fn split_reduce(qp: &QPData) -> Result<Splitting, PathError> {
    let qv = &qp.quiver;
    let nt = qp.n_trunc;
    let mut phi = RightEquivalence::identity();
    let (lin, pairs) = linear_step(qp);
    let mut s = qp.potential.clone();
    if let Some(sub) = lin {
        s = apply_sub_potential(qv, &sub, &s, nt);
        phi.steps.push(sub);
    }
    let mut partner: Vec<Option<usize>> = vec![None; qv.arrows.len()];
    for &(p, qq) in &pairs {
        partner[p] = Some(qq);
        partner[qq] = Some(p);
    }
    let mut last_min = 2;
    loop {
        let mut corr: Vec<Option<PathVector>> = vec![None; qv.arrows.len()];
        let mut any = false;
        let mut min_bad = usize::MAX;
        for (w, c) in &s.terms {
            if w.len() < 3 {
                continue;
            }
            let Some(i) = w.iter().position(|&a| partner[a].is_some()) else {
                continue;
            };
            any = true;
            min_bad = min_bad.min(w.len());
            let d = w.len();
            let x = w[i];
            let u: Vec<usize> = (1..d).map(|j| w[(i + j) % d]).collect();
            let path = Path::from_word(qv, &u).expect("rest of a cycle");
            let y = partner[x].expect("trivial");
            corr[y].get_or_insert_with(|| PathVector::zero(nt)).add_term(path, c.clone());
        }
        if !any {
            break;
        }
        if min_bad <= last_min || min_bad >= nt {
            return Err(PathError::TruncationTooSmall(nt));
        }
        last_min = min_bad;
        let images: Vec<Option<PathVector>> = corr
            .into_iter()
            .enumerate()
            .map(|(a, cv)| {
                cv.map(|v| PathVector::from_path(Path::arrow(qv, a), Q::one(), nt).sub(&v))
            })
            .collect();
        let sub = Substitution { images };
        s = apply_sub_potential(qv, &sub, &s, nt);
        phi.steps.push(sub);
    }
    for &(p, qq) in &pairs {
        let key = cyclic_normal(&[p, qq]);
        debug_assert_eq!(s.terms.get(&key), Some(&Q::one()));
        s.terms.remove(&key);
    }
    debug_assert!(s.terms.keys().all(|w| w.iter().all(|&a| partner[a].is_none())));
    let kept_raw: Vec<usize> = (0..qv.arrows.len()).filter(|&a| partner[a].is_none()).collect();
    let arrows: Vec<Arrow> = kept_raw.iter().map(|&a| qv.arrows[a].clone()).collect();
    let (rq, pos) = Quiver::with_order(qv.n, arrows);
    let mut kept = vec![0; kept_raw.len()];
    let mut old_to_new = vec![usize::MAX; qv.arrows.len()];
    for (i, &a) in kept_raw.iter().enumerate() {
        kept[pos[i]] = a;
        old_to_new[a] = pos[i];
    }
    let mut rs = Potential::zero();
    for (w, c) in &s.terms {
        let nw: Vec<usize> = w.iter().map(|&a| old_to_new[a]).collect();
        rs.add_cycle(&nw, c.clone());
    }
    Ok(Splitting { reduced: QPData::new(rq, rs, nt), triv_cycle_count: pairs.len(), phi, kept, pairs })
}

/// Premutation followed by reduction, with all the intermediate data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mutation {
    pub k: usize,
    pub premutation: Premutation,
    pub splitting: Splitting,
}

impl Mutation {
    pub fn result(&self) -> &QPData {
        &self.splitting.reduced
    }

    /// The mutated quiver has no 2-cycles.
    pub fn is_nondegenerate(&self) -> bool {
        !self.result().quiver.has_two_cycles()
    }
}

pub fn mutation_data(qp: &QPData, k: usize) -> Result<Mutation, PathError> {
    let premutation = premutate(qp, k)?;
    let splitting = split_reduce(&premutation.qp)?;
    Ok(Mutation { k, premutation, splitting })
}

pub fn premutate_qp(qp: &QPData, k: usize) -> Result<QPData, PathError> {
    Ok(premutate(qp, k)?.qp)
}

pub fn mutate_qp(qp: &QPData, k: usize) -> Result<(QPData, RightEquivalence), PathError> {
    let m = mutation_data(qp, k)?;
    Ok((m.splitting.reduced, m.splitting.phi))
}

/// Every closed path of length `min_len..=max_len`, up to rotation.
pub fn cycle_classes(qv: &Quiver, min_len: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<usize>)> = (0..qv.n).map(|v| (v, Vec::new())).collect();
    while let Some((start, word)) = stack.pop() {
        let cur = word.first().map_or(start, |&a| qv.head(a));
        if !word.is_empty() && cur == start && word.len() >= min_len {
            out.insert(cyclic_normal(&word));
        }
        if word.len() == max_len {
            continue;
        }
        for a in qv.outgoing(cur) {
            let mut w = vec![a];
            w.extend(&word);
            stack.push((start, w));
        }
    }
    out.into_iter().collect()
}

/// One term per cycle class of length `3..=max_degree`, each with a nonzero
/// coefficient in `-5..=5`.
pub fn random_potential(qv: &Quiver, max_degree: usize, rng_seed: u64) -> Potential {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(rng_seed);
    let mut s = Potential::zero();
    for w in cycle_classes(qv, 3, max_degree) {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-5i64..=5);
        }
        s.add_cycle(&w, q(c));
    }
    s
}

/// A basis of the Jacobian algebra truncated at `N`, made of paths.
#[derive(Clone, Debug)]
pub struct JacobianBasis {
    pub basis: Vec<Path>,
    pub certificate: bool,
    columns: Vec<Path>,
    col_index: HashMap<Path, usize>,
    rows: Mat,
    pivots: Vec<usize>,
    basis_pos: HashMap<usize, usize>,
    n_trunc: usize,
}

impl JacobianBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `v` in the basis, modulo the ideal.
    pub fn normal_form(&self, v: &PathVector) -> Vec<Q> {
        let mut x = vec![Q::zero(); self.columns.len()];
        for (p, c) in &v.terms {
            if p.len() < self.n_trunc {
                x[self.col_index[p]] += c;
            }
        }
        for (r, &pc) in self.pivots.iter().enumerate() {
            if x[pc].is_zero() {
                continue;
            }
            let f = x[pc].clone();
            for j in 0..self.columns.len() {
                if !self.rows[(r, j)].is_zero() {
                    let d = &self.rows[(r, j)] * &f;
                    x[j] -= d;
                }
            }
        }
        let mut out = vec![Q::zero(); self.basis.len()];
        for (j, val) in x.into_iter().enumerate() {
            if !val.is_zero() {
                out[self.basis_pos[&j]] = val;
            }
        }
        out
    }

    /// `mult[i][j]` = coordinates of `basis[i] * basis[j]`.
    pub fn multiplication_table(&self) -> Vec<Vec<Vec<Q>>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| match self.basis[i].concat(&self.basis[j]) {
                        Some(p) if p.len() < self.n_trunc => {
                            self.normal_form(&PathVector::from_path(p, Q::one(), self.n_trunc))
                        }
                        _ => vec![Q::zero(); d],
                    })
                    .collect()
            })
            .collect()
    }
}

fn all_paths(qv: &Quiver, max_len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = (0..qv.n).map(Path::idempotent).collect();
    let mut frontier: Vec<Path> = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for a in qv.incoming(p.tail) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path { head: p.head, tail: qv.tail(a), arrows });
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Row-reduces the span of `p ∂_a S q` among paths of length `< N`.
pub fn jacobian_quotient_basis(qp: &QPData) -> JacobianBasis {
    let qv = &qp.quiver;
    let nt = qp.n_trunc;
    let mut columns = all_paths(qv, nt.saturating_sub(1));
    columns.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let col_index: HashMap<Path, usize> = columns.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut gens: Vec<Vec<Q>> = Vec::new();
    for a in 0..qv.arrows.len() {
        let d = cyclic_derivative(qp, a);
        if d.is_zero() {
            continue;
        }
        let dmin = d.min_len().unwrap_or(0);
        for p in columns.iter().filter(|p| p.tail == qv.tail(a)) {
            for r in columns.iter().filter(|r| r.head == qv.head(a)) {
                if p.len() + r.len() + dmin >= nt {
                    continue;
                }
                let mut row = vec![Q::zero(); columns.len()];
                let mut nz = false;
                for (path, c) in &d.terms {
                    if p.len() + path.len() + r.len() < nt {
                        let full = p.concat(path).and_then(|x| x.concat(r)).expect("endpoints match");
                        row[col_index[&full]] += c;
                        nz = true;
                    }
                }
                if nz {
                    gens.push(row);
                }
            }
        }
    }
    let rows_mat = if gens.is_empty() { Mat::zeros(0, columns.len()) } else { Mat::from_rows(gens) };
    let (red, pivots) = rows_mat.rref();
    let rows = red.block(0, pivots.len(), 0, columns.len());
    let free: Vec<usize> = (0..columns.len()).filter(|c| !pivots.contains(c)).collect();
    let mut basis_with_col: Vec<(Path, usize)> = free.iter().map(|&c| (columns[c].clone(), c)).collect();
    basis_with_col.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let basis: Vec<Path> = basis_with_col.iter().map(|x| x.0.clone()).collect();
    let basis_pos: HashMap<usize, usize> = basis_with_col.iter().enumerate().map(|(i, x)| (x.1, i)).collect();
    let no_long_paths = all_paths(qv, nt).iter().all(|p| p.len() < nt);
    let top_killed = basis.iter().all(|p| p.len() + 1 < nt);
    JacobianBasis {
        basis,
        certificate: no_long_paths || (nt >= 1 && top_killed),
        columns,
        col_index,
        rows,
        pivots,
        basis_pos,
        n_trunc: nt,
    }
}

pub fn arrow_matrix_display(qv: &Quiver) -> String {
    qv.arrows
        .iter()
        .map(|a| format!("{}:{}->{}", a.id, a.tail + 1, a.head + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for QPData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}] S = {} (N = {})", arrow_matrix_display(&self.quiver), self.potential.format(&self.quiver), self.n_trunc)
    }
}
