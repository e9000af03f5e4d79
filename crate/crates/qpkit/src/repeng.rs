//! Decorated representations of quivers with potentials: triangle maps,
//! mutation, homomorphism spaces and the E-invariant.

use crate::linalg::{block_diag, complement_in, fmt_q, intersection_dim, parse_q, q, Mat, Q};
use crate::pathalg::{
    h_matrix, mutation_data, quiver_from_matrix, Mutation, Path, PathError, PathVector, Potential, QPData,
    Quiver, Substitution,
};
use crate::seedeng::{mutate_entries, TreeWord};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("relations fail: {0}")]
    RelationViolation(String),
    #[error("quivers differ")]
    QuiverMismatch,
    #[error("mutation postcondition failed: {0}")]
    Postcondition(String),
    #[error("degenerate potential after prefix {prefix}: {reason}")]
    Degenerate { prefix: String, reason: String },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A representation `M` together with decoration dimensions `V`.
#[derive(Clone, Debug)]
pub struct DecoratedRep {
    pub qp: Arc<QPData>,
    pub dims: Vec<usize>,
    pub maps: Vec<Mat>,
    pub dec: Vec<usize>,
}

impl PartialEq for DecoratedRep {
    fn eq(&self, o: &Self) -> bool {
        self.dims == o.dims && self.dec == o.dec && self.maps == o.maps && *self.qp == *o.qp
    }
}

impl DecoratedRep {
    pub fn new(qp: Arc<QPData>, dims: Vec<usize>, maps: Vec<Mat>, dec: Vec<usize>) -> Result<Self, RepError> {
        let qv = &qp.quiver;
        if dims.len() != qv.n || dec.len() != qv.n || maps.len() != qv.arrows.len() {
            return Err(RepError::DimensionMismatch("vertex or arrow count".into()));
        }
        for (a, m) in maps.iter().enumerate() {
            if m.rows != dims[qv.head(a)] || m.cols != dims[qv.tail(a)] {
                return Err(RepError::DimensionMismatch(format!("arrow {}", qv.id(a))));
            }
        }
        Ok(DecoratedRep { qp, dims, maps, dec })
    }

    pub fn zero(qp: Arc<QPData>) -> Self {
        let n = qp.quiver.n;
        let maps = vec![Mat::zeros(0, 0); qp.quiver.arrows.len()];
        DecoratedRep { qp, dims: vec![0; n], maps, dec: vec![0; n] }
    }

    /// Negative simple `S_l^-`: `M = 0`, `V` one-dimensional at `l`.
    pub fn negative_simple(qp: Arc<QPData>, l: usize) -> Self {
        let mut r = Self::zero(qp);
        r.dec[l] = 1;
        r
    }

    pub fn simple(qp: Arc<QPData>, l: usize) -> Self {
        let qv = qp.quiver.clone();
        let mut dims = vec![0; qv.n];
        dims[l] = 1;
        let maps = (0..qv.arrows.len()).map(|a| Mat::zeros(dims[qv.head(a)], dims[qv.tail(a)])).collect();
        DecoratedRep { qp, dims, maps, dec: vec![0; qv.n] }
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn quiver(&self) -> &Quiver {
        &self.qp.quiver
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_negative(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Evaluates a path as a linear map `M(tail) -> M(head)`.
    pub fn eval_path(&self, p: &Path) -> Mat {
        let mut acc = Mat::identity(self.dims[p.tail]);
        for &a in p.arrows.iter().rev() {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    pub fn eval(&self, v: &PathVector, head: usize, tail: usize) -> Mat {
        let mut out = Mat::zeros(self.dims[head], self.dims[tail]);
        for (p, c) in &v.terms {
            debug_assert!(p.head == head && p.tail == tail);
            out.add_assign_scaled(&self.eval_path(p), c);
        }
        out
    }

    pub fn direct_sum(&self, o: &DecoratedRep) -> Result<DecoratedRep, RepError> {
        if !same_shape(self.quiver(), o.quiver()) {
            return Err(RepError::QuiverMismatch);
        }
        let dims = self.dims.iter().zip(&o.dims).map(|(a, b)| a + b).collect();
        let dec = self.dec.iter().zip(&o.dec).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&o.maps).map(|(a, b)| block_diag(&[a, b])).collect();
        Ok(DecoratedRep { qp: self.qp.clone(), dims, maps, dec })
    }

    /// The same data over another QP with an identically shaped quiver.
    pub fn relabel(&self, qp: Arc<QPData>) -> Result<DecoratedRep, RepError> {
        if !same_shape(self.quiver(), &qp.quiver) {
            return Err(RepError::QuiverMismatch);
        }
        Ok(DecoratedRep { qp, dims: self.dims.clone(), maps: self.maps.clone(), dec: self.dec.clone() })
    }

    /// Text form: `dims`, `dec`, then each arrow's matrix rows.
    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = format!("dims {}\ndec {}\n", join(&self.dims), join(&self.dec));
        for (a, m) in self.maps.iter().enumerate() {
            s.push_str(&format!("arrow {}\n", self.quiver().id(a)));
            for r in 0..m.rows {
                let row: Vec<String> = (0..m.cols).map(|c| fmt_q(&m[(r, c)])).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
        }
        s
    }

    pub fn parse(text: &str, qp: Arc<QPData>) -> Result<DecoratedRep, RepError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).peekable();
        let nums = |l: Option<&str>, tag: &str| -> Result<Vec<usize>, RepError> {
            let l = l.ok_or_else(|| RepError::Parse(format!("missing '{}' line", tag)))?;
            let rest = l.strip_prefix(tag).ok_or_else(|| RepError::Parse(format!("expected '{}'", tag)))?;
            rest.split_whitespace()
                .map(|t| t.parse().map_err(|_| RepError::Parse(format!("bad number '{}'", t))))
                .collect()
        };
        let dims = nums(lines.next(), "dims")?;
        let dec = nums(lines.next(), "dec")?;
        let qv = qp.quiver.clone();
        if dims.len() != qv.n || dec.len() != qv.n {
            return Err(RepError::Parse("vertex count does not match the quiver".into()));
        }
        let mut maps: Vec<Option<Mat>> = vec![None; qv.arrows.len()];
        while let Some(l) = lines.next() {
            let id = l.strip_prefix("arrow").map(str::trim).ok_or_else(|| RepError::Parse(format!("expected arrow, got '{}'", l)))?;
            let a = qv.find(id).ok_or_else(|| RepError::Parse(format!("unknown arrow '{}'", id)))?;
            let (r, c) = (dims[qv.head(a)], dims[qv.tail(a)]);
            let mut m = Mat::zeros(r, c);
            for i in 0..r {
                let row = lines.next().ok_or_else(|| RepError::Parse(format!("missing rows for '{}'", id)))?;
                let vals: Vec<Q> = row
                    .split_whitespace()
                    .map(|t| parse_q(t).ok_or_else(|| RepError::Parse(format!("bad entry '{}'", t))))
                    .collect::<Result<_, _>>()?;
                if vals.len() != c {
                    return Err(RepError::Parse(format!("row length for '{}'", id)));
                }
                for (j, v) in vals.into_iter().enumerate() {
                    m[(i, j)] = v;
                }
            }
            maps[a] = Some(m);
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(a, m)| m.unwrap_or_else(|| Mat::zeros(dims[qv.head(a)], dims[qv.tail(a)])))
            .collect();
        DecoratedRep::new(qp, dims, maps, dec)
    }
}

/// Same vertex count and the same `(tail, head)` sequence of arrows.
pub fn same_shape(a: &Quiver, b: &Quiver) -> bool {
    a.n == b.n
        && a.arrows.len() == b.arrows.len()
        && a.arrows.iter().zip(&b.arrows).all(|(x, y)| x.tail == y.tail && x.head == y.head)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleMaps {
    pub alpha: Vec<Mat>,
    pub beta: Vec<Mat>,
    pub gamma: Vec<Mat>,
}

pub fn alpha_at(rep: &DecoratedRep, k: usize) -> Mat {
    let ins = rep.quiver().incoming(k);
    let parts: Vec<&Mat> = ins.iter().map(|&a| &rep.maps[a]).collect();
    Mat::hstack(&parts, rep.dims[k])
}

pub fn beta_at(rep: &DecoratedRep, k: usize) -> Mat {
    let outs = rep.quiver().outgoing(k);
    let parts: Vec<&Mat> = outs.iter().map(|&b| &rep.maps[b]).collect();
    Mat::vstack(&parts, rep.dims[k])
}

pub fn gamma_at(rep: &DecoratedRep, k: usize) -> Mat {
    let qv = rep.quiver();
    let ins = qv.incoming(k);
    let outs = qv.outgoing(k);
    let din: usize = ins.iter().map(|&a| rep.dims[qv.tail(a)]).sum();
    let dout: usize = outs.iter().map(|&b| rep.dims[qv.head(b)]).sum();
    let mut g = Mat::zeros(din, dout);
    if din == 0 || dout == 0 {
        return g;
    }
    let h = h_matrix(&rep.qp, k);
    let mut r0 = 0;
    for (p, &a) in ins.iter().enumerate() {
        let mut c0 = 0;
        for (qi, &b) in outs.iter().enumerate() {
            let blk = rep.eval(&h[p][qi], qv.tail(a), qv.head(b));
            g.set_block(r0, c0, &blk);
            c0 += rep.dims[qv.head(b)];
        }
        r0 += rep.dims[qv.tail(a)];
    }
    g
}

pub fn triangle_maps(rep: &DecoratedRep) -> TriangleMaps {
    let n = rep.n();
    TriangleMaps {
        alpha: (0..n).map(|k| alpha_at(rep, k)).collect(),
        beta: (0..n).map(|k| beta_at(rep, k)).collect(),
        gamma: (0..n).map(|k| gamma_at(rep, k)).collect(),
    }
}

/// Every path of length `>= N` acts as zero.
pub fn is_nilpotent(rep: &DecoratedRep) -> bool {
    let qv = rep.quiver();
    let mut w: Vec<Mat> = rep.dims.iter().map(|&d| Mat::identity(d)).collect();
    for _ in 0..rep.qp.n_trunc {
        if w.iter().all(|m| m.cols == 0) {
            return true;
        }
        let mut next: Vec<Mat> = rep.dims.iter().map(|&d| Mat::zeros(d, 0)).collect();
        for a in 0..qv.arrows.len() {
            let img = rep.maps[a].mul(&w[qv.tail(a)]);
            let h = qv.head(a);
            next[h] = Mat::hstack(&[&next[h], &img], rep.dims[h]);
        }
        w = next.into_iter().map(|m| m.image()).collect();
    }
    w.iter().all(|m| m.cols == 0)
}

/// `α_k γ_k = 0`, `γ_k β_k = 0` at every vertex, and nilpotency.
pub fn check_relations(rep: &DecoratedRep) -> bool {
    relation_report(rep).is_ok()
}

pub fn relation_report(rep: &DecoratedRep) -> Result<(), RepError> {
    for k in 0..rep.n() {
        let (a, b, g) = (alpha_at(rep, k), beta_at(rep, k), gamma_at(rep, k));
        if !a.mul(&g).is_zero() {
            return Err(RepError::RelationViolation(format!("alpha*gamma at vertex {}", k + 1)));
        }
        if !g.mul(&b).is_zero() {
            return Err(RepError::RelationViolation(format!("gamma*beta at vertex {}", k + 1)));
        }
    }
    if !is_nilpotent(rep) {
        return Err(RepError::RelationViolation("not nilpotent".into()));
    }
    Ok(())
}

/// `g_k = dim ker γ_k - dim M(k) + dim V(k)`.
pub fn rep_g_vector(rep: &DecoratedRep) -> Vec<i64> {
    (0..rep.n())
        .map(|k| gamma_at(rep, k).nullity() as i64 - rep.dims[k] as i64 + rep.dec[k] as i64)
        .collect()
}

/// `h_k = -dim ker β_k`.
pub fn rep_h_vector(rep: &DecoratedRep) -> Vec<i64> {
    (0..rep.n()).map(|k| -(beta_at(rep, k).nullity() as i64)).collect()
}

/// The premutation of a QP and its reduction, shared by every representation
/// mutated at the same vertex of the same QP.
#[derive(Clone, Debug)]
pub struct QPMutation {
    pub k: usize,
    pub source: Arc<QPData>,
    pub premutated: Arc<QPData>,
    pub target: Arc<QPData>,
    pub data: Mutation,
}

impl QPMutation {
    pub fn new(source: Arc<QPData>, k: usize) -> Result<Self, RepError> {
        let data = mutation_data(&source, k)?;
        Ok(QPMutation {
            k,
            premutated: Arc::new(data.premutation.qp.clone()),
            target: Arc::new(data.splitting.reduced.clone()),
            source,
            data,
        })
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.data.is_nondegenerate()
    }
}

fn units(n: usize, idx: impl Iterator<Item = usize>) -> Mat {
    let idx: Vec<usize> = idx.collect();
    let mut m = Mat::zeros(n, idx.len());
    for (j, &i) in idx.iter().enumerate() {
        m[(i, j)] = Q::one();
    }
    m
}

/// Premutation of a representation over the premutated QP.
pub fn premutate_rep_with(rep: &DecoratedRep, mq: &QPMutation, rng: &mut ChaCha8Rng) -> Result<DecoratedRep, RepError> {
    if !Arc::ptr_eq(&rep.qp, &mq.source) && *rep.qp != *mq.source {
        return Err(RepError::QuiverMismatch);
    }
    let k = mq.k;
    let qv = rep.quiver();
    let pm = &mq.data.premutation;
    let ins = qv.incoming(k);
    let outs = qv.outgoing(k);
    let alpha = alpha_at(rep, k);
    let beta = beta_at(rep, k);
    let gamma = gamma_at(rep, k);
    let din = alpha.cols;
    let dout = beta.rows;

    let kg = gamma.kernel();
    let ib = beta.image();
    let c1 = complement_in(&ib, &kg, Some(&mut *rng));
    let w = complement_in(&kg, &Mat::identity(dout), Some(&mut *rng));
    let t = Mat::hstack(&[&ib, &c1, &w], dout);
    let tinv = t.inverse().ok_or_else(|| RepError::Postcondition("splitting basis not invertible".into()))?;
    let pi_rho = tinv.block(ib.cols, ib.cols + c1.cols, 0, dout);

    let ig = gamma.image();
    let gcoords = if ig.cols == 0 {
        Mat::zeros(0, dout)
    } else {
        ig.solve(&gamma).ok_or_else(|| RepError::Postcondition("gamma outside its image".into()))?
    };
    let ka = alpha.kernel();
    let c2 = complement_in(&ig, &ka, Some(&mut *rng));
    let (d1, d2, d3, d4) = (c1.cols, ig.cols, c2.cols, rep.dec[k]);
    let dk = d1 + d2 + d3 + d4;

    let alpha_bar = Mat::vstack(&[&pi_rho.neg(), &gcoords.neg(), &Mat::zeros(d3 + d4, dout)], dout);
    let beta_bar = Mat::hstack(&[&Mat::zeros(din, d1), &ig, &c2, &Mat::zeros(din, d4)], din);
    let vbar = beta.nullity() - intersection_dim(&beta.kernel(), &alpha.image());

    if !alpha_bar.kernel().same_column_space(&ib) {
        return Err(RepError::Postcondition("ker alpha-bar != im beta".into()));
    }
    if !alpha_bar.image().same_column_space(&units(dk, 0..d1 + d2)) {
        return Err(RepError::Postcondition("im alpha-bar".into()));
    }
    if !beta_bar.kernel().same_column_space(&units(dk, (0..d1).chain(d1 + d2 + d3..dk))) {
        return Err(RepError::Postcondition("ker beta-bar".into()));
    }
    if !beta_bar.image().same_column_space(&ka) {
        return Err(RepError::Postcondition("im beta-bar != ker alpha".into()));
    }

    let nq = &mq.premutated.quiver;
    let mut dims = rep.dims.clone();
    dims[k] = dk;
    let mut dec = rep.dec.clone();
    dec[k] = vbar;
    let mut maps: Vec<Option<Mat>> = vec![None; nq.arrows.len()];
    for (a, img) in pm.kept.iter().enumerate() {
        if let Some(na) = img {
            maps[*na] = Some(rep.maps[a].clone());
        }
    }
    for (p, &a) in ins.iter().enumerate() {
        for (qi, &b) in outs.iter().enumerate() {
            maps[pm.composite[p][qi]] = Some(rep.maps[b].mul(&rep.maps[a]));
        }
    }
    let mut r0 = 0;
    for (p, &a) in ins.iter().enumerate() {
        let d = rep.dims[qv.tail(a)];
        maps[pm.in_star[p]] = Some(beta_bar.block(r0, r0 + d, 0, dk));
        r0 += d;
    }
    let mut c0 = 0;
    for (qi, &b) in outs.iter().enumerate() {
        let d = rep.dims[qv.head(b)];
        maps[pm.out_star[qi]] = Some(alpha_bar.block(0, dk, c0, c0 + d));
        c0 += d;
    }
    let maps: Vec<Mat> = maps.into_iter().map(|m| m.expect("every new arrow assigned")).collect();
    let out = DecoratedRep::new(mq.premutated.clone(), dims, maps, dec)?;

    let gbar = gamma_at(&out, k);
    let ba = beta.mul(&alpha);
    let nins = nq.incoming(k);
    let nouts = nq.outgoing(k);
    let mut r0 = 0;
    for &bs in &nins {
        let hb = nq.tail(bs);
        let qi = pm.out_star.iter().position(|&x| x == bs).expect("b* arrow");
        let off_b: usize = outs[..qi].iter().map(|&b| rep.dims[qv.head(b)]).sum();
        let mut c0 = 0;
        for &as_ in &nouts {
            let ta = nq.head(as_);
            let p = pm.in_star.iter().position(|&x| x == as_).expect("a* arrow");
            let off_a: usize = ins[..p].iter().map(|&a| rep.dims[qv.tail(a)]).sum();
            let lhs = gbar.block(r0, r0 + rep.dims[hb], c0, c0 + rep.dims[ta]);
            let rhs = ba.block(off_b, off_b + rep.dims[hb], off_a, off_a + rep.dims[ta]);
            if lhs != rhs {
                return Err(RepError::Postcondition("gamma-bar != beta*alpha".into()));
            }
            c0 += rep.dims[ta];
        }
        r0 += rep.dims[hb];
    }
    Ok(out)
}

pub fn premutate_rep(rep: &DecoratedRep, k: usize, rng_seed: u64) -> Result<DecoratedRep, RepError> {
    let mq = QPMutation::new(rep.qp.clone(), k)?;
    premutate_rep_with(rep, &mq, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

/// Twists the arrow action through one substitution step `φ` so that
/// `φ(a)` acts on the result as `a` acts on the input.
fn twist_step(rep: &DecoratedRep, sub: &Substitution) -> Result<DecoratedRep, RepError> {
    let qv = rep.quiver().clone();
    let na = qv.arrows.len();
    let mut lin = Mat::identity(na);
    let mut high: Vec<Option<PathVector>> = vec![None; na];
    for (a, img) in sub.images.iter().enumerate() {
        let Some(v) = img else { continue };
        lin[(a, a)] = Q::zero();
        let mut h = PathVector::zero(v.n_trunc);
        for (p, c) in &v.terms {
            if p.len() == 1 {
                lin[(a, p.arrows[0])] = c.clone();
            } else {
                h.add_term(p.clone(), c.clone());
            }
        }
        if !h.is_zero() {
            high[a] = Some(h);
        }
    }
    let linv = lin.inverse().ok_or_else(|| RepError::Postcondition("substitution not invertible".into()))?;
    let solve = |target: &[Mat]| -> Vec<Mat> {
        (0..na)
            .map(|x| {
                let mut m = Mat::zeros(rep.dims[qv.head(x)], rep.dims[qv.tail(x)]);
                for (a, t) in target.iter().enumerate() {
                    if !linv[(x, a)].is_zero() {
                        m.add_assign_scaled(t, &linv[(x, a)]);
                    }
                }
                m
            })
            .collect()
    };
    let mut cur = rep.clone();
    cur.maps = solve(&rep.maps);
    if high.iter().all(Option::is_none) {
        return Ok(cur);
    }
    for _ in 0..=rep.qp.n_trunc + 1 {
        let target: Vec<Mat> = (0..na)
            .map(|a| match &high[a] {
                Some(h) => rep.maps[a].sub(&cur.eval(h, qv.head(a), qv.tail(a))),
                None => rep.maps[a].clone(),
            })
            .collect();
        let next = solve(&target);
        if next == cur.maps {
            return Ok(cur);
        }
        cur.maps = next;
    }
    Err(RepError::Postcondition("twisting did not stabilize".into()))
}

/// Mutation through shared QP data: premutation, twisting by the splitting
/// equivalence, restriction to the reduced arrows.
pub fn mutate_rep_with(rep: &DecoratedRep, mq: &QPMutation, rng: &mut ChaCha8Rng) -> Result<DecoratedRep, RepError> {
    let pre = premutate_rep_with(rep, mq, rng)?;
    let mut tw = pre;
    for step in &mq.data.splitting.phi.steps {
        tw = twist_step(&tw, step)?;
    }
    for &(p, qq) in &mq.data.splitting.pairs {
        if !tw.maps[p].is_zero() || !tw.maps[qq].is_zero() {
            return Err(RepError::Postcondition("trivial arrow acts nontrivially".into()));
        }
    }
    let maps = mq.data.splitting.kept.iter().map(|&a| tw.maps[a].clone()).collect();
    DecoratedRep::new(mq.target.clone(), tw.dims, maps, tw.dec)
}

pub fn mutate_rep(rep: &DecoratedRep, k: usize, rng_seed: u64) -> Result<DecoratedRep, RepError> {
    let mq = QPMutation::new(rep.qp.clone(), k)?;
    mutate_rep_with(rep, &mq, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

/// A basis of `Hom(M, N)`; each element is one matrix per vertex.
pub fn hom_space(m: &DecoratedRep, n: &DecoratedRep) -> Result<Vec<Vec<Mat>>, RepError> {
    if !same_shape(m.quiver(), n.quiver()) {
        return Err(RepError::QuiverMismatch);
    }
    let qv = m.quiver();
    let nv = m.n();
    let mut off = vec![0; nv + 1];
    for v in 0..nv {
        off[v + 1] = off[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = off[nv];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let var = |v: usize, i: usize, l: usize| off[v] + i * m.dims[v] + l;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for a in 0..qv.arrows.len() {
        let (h, t) = (qv.head(a), qv.tail(a));
        let (am, an) = (&m.maps[a], &n.maps[a]);
        for i in 0..n.dims[h] {
            for j in 0..m.dims[t] {
                let mut row = vec![Q::zero(); unknowns];
                for l in 0..m.dims[h] {
                    if !am[(l, j)].is_zero() {
                        row[var(h, i, l)] += &am[(l, j)];
                    }
                }
                for l in 0..n.dims[t] {
                    if !an[(i, l)].is_zero() {
                        row[var(t, l, j)] -= &an[(i, l)];
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let sys = if rows.is_empty() { Mat::zeros(0, unknowns) } else { Mat::from_rows(rows) };
    let ker = sys.kernel();
    Ok((0..ker.cols)
        .map(|c| {
            (0..nv)
                .map(|v| {
                    let mut f = Mat::zeros(n.dims[v], m.dims[v]);
                    for i in 0..n.dims[v] {
                        for l in 0..m.dims[v] {
                            f[(i, l)] = ker[(var(v, i, l), c)].clone();
                        }
                    }
                    f
                })
                .collect()
        })
        .collect())
}

pub fn hom_dim(m: &DecoratedRep, n: &DecoratedRep) -> Result<usize, RepError> {
    if !same_shape(m.quiver(), n.quiver()) {
        return Err(RepError::QuiverMismatch);
    }
    Ok(hom_space(m, n)?.len())
}

/// `E^inj(M, N) = <M, N> + Σ d_i(M) g_i(N)`.
pub fn e_inj(m: &DecoratedRep, n: &DecoratedRep) -> Result<i64, RepError> {
    let gn = rep_g_vector(n);
    Ok(hom_dim(m, n)? as i64 + m.dims.iter().zip(&gn).map(|(&d, &g)| d as i64 * g).sum::<i64>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EInvariants {
    pub e_inj: i64,
    pub e_inj_swapped: i64,
    pub e_sym: i64,
}

pub fn e_invariants(m: &DecoratedRep, n: &DecoratedRep) -> Result<EInvariants, RepError> {
    let a = e_inj(m, n)?;
    let b = e_inj(n, m)?;
    Ok(EInvariants { e_inj: a, e_inj_swapped: b, e_sym: a + b })
}

pub fn e_invariant(m: &DecoratedRep) -> Result<i64, RepError> {
    let e = e_inj(m, m)?;
    debug_assert_eq!(2 * e, e_invariants(m, m)?.e_sym);
    Ok(e)
}

/// Transposed maps over the opposite QP.
pub fn dual_rep(rep: &DecoratedRep) -> DecoratedRep {
    let (op, pos) = rep.qp.opposite();
    let mut maps = vec![Mat::zeros(0, 0); rep.maps.len()];
    for (a, m) in rep.maps.iter().enumerate() {
        maps[pos[a]] = m.transpose();
    }
    DecoratedRep { qp: Arc::new(op), dims: rep.dims.clone(), maps, dec: rep.dec.clone() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub e: i64,
    pub bound: i64,
    pub slack: i64,
    /// When `E = 0`: `M(k) = 0` or `V(k) = 0`, and `ker β_k = 0` or `im β_k = ker γ_k`, at every vertex.
    pub vanishing_properties: Option<bool>,
}

pub fn lower_bound_check(rep: &DecoratedRep) -> Result<LowerBound, RepError> {
    let e = e_invariant(rep)?;
    let mut bound = 0i64;
    let mut props = true;
    for k in 0..rep.n() {
        let b = beta_at(rep, k);
        let g = gamma_at(rep, k);
        let kb = b.nullity() as i64;
        let quot = g.nullity() as i64 - b.rank() as i64;
        bound += kb * quot + rep.dims[k] as i64 * rep.dec[k] as i64;
        if rep.dims[k] != 0 && rep.dec[k] != 0 {
            props = false;
        }
        if kb != 0 && quot != 0 {
            props = false;
        }
    }
    if e < bound {
        return Err(RepError::Postcondition(format!("E = {} below bound {}", e, bound)));
    }
    Ok(LowerBound { e, bound, slack: e - bound, vanishing_properties: (e == 0).then_some(props) })
}

pub fn coker_alpha_dim(rep: &DecoratedRep, k: usize) -> i64 {
    rep.dims[k] as i64 - alpha_at(rep, k).rank() as i64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomMutationReport {
    pub ok: bool,
    pub diffs: Vec<String>,
}

/// Checks the Hom-count identity across a mutation at `k` and the numeric
/// identity for `E^inj`; `mb`, `nb` are the mutations of `m`, `n` at `k`.
pub fn hom_mutation_identity(
    m: &DecoratedRep,
    n: &DecoratedRep,
    mb: &DecoratedRep,
    nb: &DecoratedRep,
    k: usize,
) -> Result<HomMutationReport, RepError> {
    let mut diffs = Vec::new();
    let hk = |r: &DecoratedRep| -(beta_at(r, k).nullity() as i64);
    let lhs = hom_dim(m, n)? as i64 + coker_alpha_dim(m, k) * hk(n);
    let rhs = hom_dim(mb, nb)? as i64 + coker_alpha_dim(mb, k) * hk(nb);
    if lhs != rhs {
        diffs.push(format!("hom identity {} != {}", lhs, rhs));
    }
    let d = e_inj(mb, nb)? - e_inj(m, n)?;
    let expect = hk(mb) * hk(n) - hk(m) * hk(nb);
    if d != expect {
        diffs.push(format!("E^inj difference {} != {}", d, expect));
    }
    let s0 = e_invariants(m, n)?.e_sym;
    let s1 = e_invariants(mb, nb)?.e_sym;
    if s0 != s1 {
        diffs.push(format!("E^sym {} != {}", s0, s1));
    }
    Ok(HomMutationReport { ok: diffs.is_empty(), diffs })
}

/// The QP `(Q(B), S)` and its mutations along `word`.
pub fn qp_chain(qp0: Arc<QPData>, b: &[Vec<i64>], word: &TreeWord) -> Result<Vec<QPMutation>, RepError> {
    let mut chain = Vec::with_capacity(word.len());
    let mut cur = qp0;
    let mut bb = b.to_vec();
    for (i, &k) in word.0.iter().enumerate() {
        let prefix = TreeWord(word.0[..=i].to_vec()).to_string();
        let mq = QPMutation::new(cur.clone(), k).map_err(|e| RepError::Degenerate { prefix: prefix.clone(), reason: e.to_string() })?;
        bb = mutate_entries(&bb, k);
        if mq.target.quiver.to_matrix() != bb {
            return Err(RepError::Degenerate { prefix, reason: "mutated quiver differs from Q(mu_k(B))".into() });
        }
        cur = mq.target.clone();
        chain.push(mq);
    }
    Ok(chain)
}

/// `μ_{k_1} ... μ_{k_p}(S_l^-)` planted over the far end of the walk.
pub fn build_cluster_rep(qp0: Arc<QPData>, word: &TreeWord, ell: usize, rng_seed: u64) -> Result<DecoratedRep, RepError> {
    let b = qp0.quiver.to_matrix();
    let chain = qp_chain(qp0.clone(), &b, word)?;
    let far = chain.last().map_or(qp0.clone(), |m| m.target.clone());
    let mut rep = DecoratedRep::negative_simple(far, ell);
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for &k in word.0.iter().rev() {
        let mq = QPMutation::new(rep.qp.clone(), k)?;
        rep = mutate_rep_with(&rep, &mq, &mut rng)?;
    }
    Ok(rep)
}

pub fn build_cluster_rep_from_matrix(b: &[Vec<i64>], s: Potential, n_trunc: usize, word: &TreeWord, ell: usize, rng_seed: u64) -> Result<DecoratedRep, RepError> {
    let qv = quiver_from_matrix(b)?;
    build_cluster_rep(Arc::new(QPData::new(qv, s, n_trunc)), word, ell, rng_seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic,
    NotIsomorphic,
    Inconclusive,
}

/// Random search for an invertible element of `Hom(M, N)`.
pub fn iso_probe(m: &DecoratedRep, n: &DecoratedRep, trials: usize, rng_seed: u64) -> Result<IsoVerdict, RepError> {
    if !same_shape(m.quiver(), n.quiver()) {
        return Err(RepError::QuiverMismatch);
    }
    if m.dims != n.dims || m.dec != n.dec {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let mn = hom_space(m, n)?;
    let nm = hom_space(n, m)?;
    if mn.len() != nm.len() || hom_dim(m, m)? != mn.len() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    if m.total_dim() == 0 {
        return Ok(IsoVerdict::Isomorphic);
    }
    if mn.is_empty() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..trials {
        let coeffs: Vec<Q> = (0..mn.len()).map(|_| q(rng.gen_range(-20..=20))).collect();
        let ok = (0..m.n()).all(|v| {
            let mut f = Mat::zeros(n.dims[v], m.dims[v]);
            for (c, basis) in coeffs.iter().zip(&mn) {
                f.add_assign_scaled(&basis[v], c);
            }
            f.is_invertible()
        });
        if ok {
            return Ok(IsoVerdict::Isomorphic);
        }
    }
    Ok(IsoVerdict::Inconclusive)
}

/// `dim Hom(M,M)` followed by `dim Hom(S_i, M)` and `dim Hom(M, S_i)` for every simple.
pub fn hom_profile(rep: &DecoratedRep) -> Result<Vec<usize>, RepError> {
    let mut out = vec![hom_dim(rep, rep)?];
    for i in 0..rep.n() {
        let s = DecoratedRep::simple(rep.qp.clone(), i);
        out.push(hom_dim(&s, rep)?);
        out.push(hom_dim(rep, &s)?);
    }
    Ok(out)
}

/// Kronecker representation `M_n`: `a = I`, `b = J` (nilpotent Jordan block).
pub fn kronecker_rep(n: usize) -> DecoratedRep {
    let qv = quiver_from_matrix(&crate::seedeng::kronecker()).expect("skew");
    let qp = Arc::new(QPData::new(qv, Potential::zero(), 2 * n + 4));
    let mut j = Mat::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        j[(i + 1, i)] = Q::one();
    }
    DecoratedRep::new(qp, vec![n, n], vec![Mat::identity(n), j], vec![0, 0]).expect("shapes")
}

/// Indecomposables of the oriented 3-cycle with potential `cba` and dimension
/// vectors `(0,1,1)`, `(1,0,1)`, `(1,1,0)`.
pub fn three_cycle_modules(qp: Arc<QPData>) -> [DecoratedRep; 3] {
    let qv = qp.quiver.clone();
    let mk = |dims: [usize; 3], live: usize| {
        let maps = (0..3)
            .map(|a| {
                let mut m = Mat::zeros(dims[qv.head(a)], dims[qv.tail(a)]);
                if a == live {
                    m[(0, 0)] = Q::one();
                }
                m
            })
            .collect();
        DecoratedRep::new(qp.clone(), dims.to_vec(), maps, vec![0; 3]).expect("shapes")
    };
    let a = qv.find("a").expect("arrow a");
    let b = qv.find("b").expect("arrow b");
    let c = qv.find("c").expect("arrow c");
    [mk([0, 1, 1], b), mk([1, 0, 1], c), mk([1, 1, 0], a)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seedeng::{a2, a3_linear, invariants_at, three_cycle};
    use proptest::prelude::*;

    fn cycle_qp() -> Arc<QPData> {
        let qv = quiver_from_matrix(&three_cycle()).unwrap();
        let s = Potential::parse("1 c*b*a", &qv).unwrap();
        Arc::new(QPData::new(qv, s, 8))
    }

    fn a2_qp() -> Arc<QPData> {
        Arc::new(QPData::new(quiver_from_matrix(&a2()).unwrap(), Potential::zero(), 6))
    }

    #[test]
    fn triangle_maps_examples() {
        let neg = DecoratedRep::negative_simple(cycle_qp(), 0);
        let t = triangle_maps(&neg);
        assert!(t.alpha.iter().chain(&t.beta).chain(&t.gamma).all(Mat::is_empty));
        let qp = cycle_qp();
        let [m1, m2, m3] = three_cycle_modules(qp.clone());
        let m = m1.direct_sum(&m2).unwrap().direct_sum(&m3).unwrap();
        let c = qp.quiver.find("c").unwrap();
        assert_eq!(gamma_at(&m, 1), m.maps[c]);
        let k = kronecker_rep(3);
        assert_eq!(beta_at(&k, 0), Mat::vstack(&[&k.maps[0], &k.maps[1]], 3));
        assert!(gamma_at(&k, 0).is_zero());
    }

    #[test]
    fn relations_examples() {
        let qp = cycle_qp();
        let [m1, m2, m3] = three_cycle_modules(qp.clone());
        assert!(check_relations(&m1.direct_sum(&m2).unwrap().direct_sum(&m3).unwrap()));
        assert!(check_relations(&kronecker_rep(4)));
        let ones = DecoratedRep::new(qp, vec![1, 1, 1], vec![Mat::identity(1); 3], vec![0; 3]).unwrap();
        assert!(!check_relations(&ones));
        assert!(!is_nilpotent(&ones));
    }

    #[test]
    fn g_and_h_vectors() {
        let neg = DecoratedRep::negative_simple(cycle_qp(), 2);
        assert_eq!(rep_g_vector(&neg), vec![0, 0, 1]);
        assert_eq!(rep_h_vector(&neg), vec![0, 0, 0]);
        for n in 1..=5 {
            let k = kronecker_rep(n);
            assert_eq!(rep_g_vector(&k), vec![n as i64, -(n as i64)]);
            assert_eq!(rep_h_vector(&k), vec![0, -(n as i64)]);
        }
        // M with dims (1,1) and an isomorphism along a: 2 -> 1
        let qp = a2_qp();
        let m = DecoratedRep::new(qp, vec![1, 1], vec![Mat::identity(1)], vec![0, 0]).unwrap();
        assert_eq!(rep_h_vector(&m), vec![-1, 0]);
        assert_eq!(rep_g_vector(&m), vec![-1, 0]);
    }

    #[test]
    fn tree_module_g_vector() {
        // path 1 -> 2 -> 3, full support: g_i = #{j in T : i -> j} - 1
        let qv = quiver_from_matrix(&a3_linear()).unwrap();
        let qp = Arc::new(QPData::new(qv, Potential::zero(), 6));
        let m = DecoratedRep::new(qp, vec![1, 1, 1], vec![Mat::identity(1), Mat::identity(1)], vec![0; 3]).unwrap();
        assert_eq!(rep_g_vector(&m), vec![0, 0, -1]);
    }

    #[test]
    fn premutation_of_simples() {
        let qp = a2_qp();
        let s1 = DecoratedRep::simple(qp.clone(), 0);
        let m = mutate_rep(&s1, 0, 1).unwrap();
        assert_eq!(m.dims, vec![0, 0]);
        assert_eq!(m.dec, vec![1, 0]);
        let neg = DecoratedRep::negative_simple(qp.clone(), 0);
        let p = mutate_rep(&neg, 0, 1).unwrap();
        assert_eq!(p.dims, vec![1, 0]);
        assert_eq!(p.dec, vec![0, 0]);
        assert!(check_relations(&p));
    }

    #[test]
    fn tree_module_leaf_removal() {
        // 1 <- 2 (a2 quiver), M_T full support; mutating at the sink 1 drops it
        let qp = a2_qp();
        let m = DecoratedRep::new(qp, vec![1, 1], vec![Mat::identity(1)], vec![0, 0]).unwrap();
        let mb = mutate_rep(&m, 0, 3).unwrap();
        assert_eq!(mb.dims, vec![0, 1]);
        assert_eq!(mb.dec, vec![0, 0]);
    }

    #[test]
    fn hom_examples() {
        let qp = cycle_qp();
        let [m1, _, _] = three_cycle_modules(qp);
        assert_eq!(hom_dim(&m1, &m1).unwrap(), 1);
        let qp = a2_qp();
        assert_eq!(hom_dim(&DecoratedRep::simple(qp.clone(), 0), &DecoratedRep::simple(qp, 1)).unwrap(), 0);
        for n in 1..=5 {
            let k = kronecker_rep(n);
            assert_eq!(hom_dim(&k, &k).unwrap(), n);
            assert_eq!(e_invariant(&k).unwrap(), n as i64);
            assert_eq!(e_invariant(&dual_rep(&k)).unwrap(), n as i64);
            let lb = lower_bound_check(&k).unwrap();
            assert_eq!((lb.bound, lb.slack), (0, n as i64));
        }
    }

    #[test]
    fn e_invariant_of_negative_reps() {
        let mut v = DecoratedRep::zero(cycle_qp());
        v.dec = vec![2, 0, 1];
        assert_eq!(e_invariant(&v).unwrap(), 0);
        let lb = lower_bound_check(&v).unwrap();
        assert_eq!((lb.e, lb.bound), (0, 0));
    }

    #[test]
    fn dual_examples() {
        let k = kronecker_rep(3);
        let dd = dual_rep(&dual_rep(&k));
        assert_eq!(dd.dims, k.dims);
        assert_eq!(dd.maps, k.maps);
        let s1 = DecoratedRep::simple(a2_qp(), 0);
        assert_eq!(rep_g_vector(&dual_rep(&s1)), vec![-1, 0]);
    }

    #[test]
    fn hom_mutation_identity_simple() {
        let qp = a2_qp();
        let s1 = DecoratedRep::simple(qp.clone(), 0);
        let mq = QPMutation::new(qp, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let sb = mutate_rep_with(&s1, &mq, &mut rng).unwrap();
        let r = hom_mutation_identity(&s1, &s1, &sb, &sb, 0).unwrap();
        assert!(r.ok, "{:?}", r.diffs);
    }

    #[test]
    fn cluster_reps_in_a2() {
        let qp = a2_qp();
        let w = TreeWord(vec![]);
        assert_eq!(build_cluster_rep(qp.clone(), &w, 0, 1).unwrap(), DecoratedRep::negative_simple(qp.clone(), 0));
        let m = build_cluster_rep(qp.clone(), &TreeWord(vec![1]), 1, 1).unwrap();
        assert_eq!((m.dims.clone(), m.dec.clone()), (vec![0, 1], vec![0, 0]));
        assert_eq!(rep_g_vector(&m), vec![0, -1]);
        let m = build_cluster_rep(qp, &TreeWord(vec![1, 0]), 0, 1).unwrap();
        assert_eq!(m.dims, vec![1, 1]);
        assert_eq!(rep_g_vector(&m), vec![-1, 0]);
    }

    #[test]
    fn iso_probe_examples() {
        let qp = cycle_qp();
        let [m1, _, _] = three_cycle_modules(qp.clone());
        assert_eq!(iso_probe(&m1, &m1, 20, 1).unwrap(), IsoVerdict::Isomorphic);
        let s1 = DecoratedRep::simple(qp.clone(), 0);
        let s2 = DecoratedRep::simple(qp, 1);
        assert_eq!(iso_probe(&s1, &s2, 20, 1).unwrap(), IsoVerdict::NotIsomorphic);
    }

    #[test]
    fn text_roundtrip() {
        let k = kronecker_rep(3);
        assert_eq!(DecoratedRep::parse(&k.to_text(), k.qp.clone()).unwrap(), k);
    }

    #[test]
    fn cluster_reps_match_recurrence_small() {
        for b in [a2(), a3_linear(), three_cycle()] {
            let qv = quiver_from_matrix(&b).unwrap();
            let s = if b == three_cycle() { Potential::parse("1 c*b*a", &qv).unwrap() } else { Potential::zero() };
            let qp = Arc::new(QPData::new(qv, s, 10));
            for w in crate::seedeng::all_words(b.len(), 4) {
                let (_, inv) = invariants_at(&b, &w).unwrap();
                for l in 0..b.len() {
                    let m = build_cluster_rep(qp.clone(), &w, l, 7).unwrap();
                    assert!(check_relations(&m));
                    assert_eq!(rep_g_vector(&m), inv.g[l], "{} {}", w, l);
                    assert_eq!(e_invariant(&m).unwrap(), 0);
                }
            }
        }
    }

    fn twice(rep: &DecoratedRep, k: usize, seed: u64) -> DecoratedRep {
        let once = mutate_rep(rep, k, seed).unwrap();
        mutate_rep(&once, k, seed + 1).unwrap().relabel(rep.qp.clone()).unwrap()
    }

    #[test]
    fn mutation_is_involutive_up_to_iso() {
        let qp = cycle_qp();
        let [m1, m2, m3] = three_cycle_modules(qp.clone());
        let reps = [m1.clone(), m2, m3, m1.direct_sum(&DecoratedRep::negative_simple(qp.clone(), 1)).unwrap()];
        for m in &reps {
            for k in 0..3 {
                let mm = twice(m, k, 11);
                assert_eq!((mm.dims.clone(), mm.dec.clone()), (m.dims.clone(), m.dec.clone()));
                assert_eq!(rep_g_vector(&mm), rep_g_vector(m));
                assert_eq!(rep_h_vector(&mm), rep_h_vector(m));
                assert_eq!(e_invariant(&mm).unwrap(), e_invariant(m).unwrap());
                assert_eq!(hom_profile(&mm).unwrap(), hom_profile(m).unwrap());
                assert_eq!(iso_probe(&mm, m, 30, 3).unwrap(), IsoVerdict::Isomorphic);
            }
        }
    }

    #[test]
    fn indecomposables_stay_indecomposable() {
        let qp = cycle_qp();
        for m in three_cycle_modules(qp.clone()) {
            for k in 0..3 {
                let mb = mutate_rep(&m, k, 2).unwrap();
                if mb.total_dim() > 0 {
                    assert_eq!(hom_dim(&mb, &mb).unwrap(), 1);
                    assert_eq!(mb.dec.iter().sum::<usize>(), 0);
                } else {
                    assert_eq!(mb.dec.iter().sum::<usize>(), 1);
                }
            }
        }
    }

    #[test]
    fn transition_and_sign_rules_for_cluster_reps() {
        let qp = cycle_qp();
        for w in crate::seedeng::all_words(3, 3) {
            for l in 0..3 {
                let m = build_cluster_rep(qp.clone(), &w, l, 9).unwrap();
                for k in 0..3 {
                    let mb = mutate_rep(&m, k, 4).unwrap();
                    let (h, h1) = (rep_h_vector(&m)[k], rep_h_vector(&mb)[k]);
                    assert_eq!(rep_g_vector(&m)[k], h - h1);
                    assert_eq!(h.max(h1), 0);
                    let lb = lower_bound_check(&m).unwrap();
                    assert_eq!((lb.e, lb.bound, lb.vanishing_properties), (0, 0, Some(true)));
                }
            }
        }
    }

    #[test]
    fn nonnegative_g_forces_negative_rep() {
        let qp = cycle_qp();
        for w in crate::seedeng::all_words(3, 3) {
            for l in 0..3 {
                let m = build_cluster_rep(qp.clone(), &w, l, 9).unwrap();
                let g = rep_g_vector(&m);
                if g.iter().all(|&x| x >= 0) {
                    assert!(m.is_negative());
                    assert_eq!(m.dec.iter().map(|&d| d as i64).collect::<Vec<_>>(), g);
                }
            }
        }
    }

    #[test]
    fn equal_g_vectors_give_isomorphic_cluster_reps() {
        let qp = cycle_qp();
        let mut seen: Vec<DecoratedRep> = Vec::new();
        for w in crate::seedeng::all_words(3, 3) {
            for l in 0..3 {
                let m = build_cluster_rep(qp.clone(), &w, l, 9).unwrap();
                for o in &seen {
                    if rep_g_vector(o) == rep_g_vector(&m) {
                        let m2 = m.relabel(o.qp.clone()).unwrap();
                        assert_eq!(iso_probe(o, &m2, 30, 1).unwrap(), IsoVerdict::Isomorphic);
                    }
                }
                seen.push(m);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn splitting_data_independence(seed1 in any::<u64>(), seed2 in any::<u64>(), k in 0usize..3) {
            let qp = cycle_qp();
            let [m1, m2, m3] = three_cycle_modules(qp.clone());
            let m = m1.direct_sum(&m2).unwrap().direct_sum(&m3).unwrap();
            let mq = QPMutation::new(qp, k).unwrap();
            let x = mutate_rep_with(&m, &mq, &mut ChaCha8Rng::seed_from_u64(seed1)).unwrap();
            let y = mutate_rep_with(&m, &mq, &mut ChaCha8Rng::seed_from_u64(seed2)).unwrap();
            prop_assert!(check_relations(&x));
            prop_assert_ne!(iso_probe(&x, &y, 20, seed1).unwrap(), IsoVerdict::NotIsomorphic);
            prop_assert_eq!(rep_g_vector(&x), rep_g_vector(&y));
        }

        #[test]
        fn g_is_additive(l1 in 0usize..3, l2 in 0usize..3, seed in any::<u64>()) {
            let qp = cycle_qp();
            let w = TreeWord(vec![(seed % 3) as usize]);
            let a = build_cluster_rep(qp.clone(), &w, l1, seed).unwrap();
            let b = build_cluster_rep(qp.clone(), &w, l2, seed).unwrap();
            let b = b.relabel(a.qp.clone()).unwrap();
            let s = a.direct_sum(&b).unwrap();
            let ga = rep_g_vector(&a);
            let gb = rep_g_vector(&b);
            let sum: Vec<i64> = ga.iter().zip(&gb).map(|(x, y)| x + y).collect();
            prop_assert_eq!(rep_g_vector(&s), sum);
            let e = e_inj(&s, &s).unwrap();
            let parts = e_inj(&a, &a).unwrap() + e_inj(&a, &b).unwrap() + e_inj(&b, &a).unwrap() + e_inj(&b, &b).unwrap();
            prop_assert_eq!(e, parts);
        }
    }
}
