//! Dense matrices over the rationals with exact Gaussian elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Builds a matrix with the given shape from integer entries in row-major order.
    pub fn from_flat(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Mat { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn column(v: &[Q]) -> Self {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Q) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Mat {
        self.scale(&q(-1))
    }

    pub fn add_assign_scaled(&mut self, other: &Mat, s: &Q) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    pub fn hstack(parts: &[&Mat], rows: usize) -> Mat {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            out.set_block(0, c0, p);
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Mat], cols: usize) -> Mat {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            out.set_block(r0, 0, p);
            r0 += p.rows;
        }
        out
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        let mut out = Mat::zeros(r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                out[(r - r0, c - c0)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    pub fn col(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let mut out = Mat::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                out[(i, c)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, c)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = self[(row, c)].recip();
            for j in c..self.cols {
                if !self[(row, j)].is_zero() {
                    let v = &self[(row, j)] * &inv;
                    self[(row, j)] = v;
                }
            }
            let pivot_row: Vec<(usize, Q)> = (c..self.cols)
                .filter(|&j| !self[(row, j)].is_zero())
                .map(|j| (j, self[(row, j)].clone()))
                .collect();
            for r in 0..self.rows {
                if r == row || self[(r, c)].is_zero() {
                    continue;
                }
                let f = self[(r, c)].clone();
                for (j, v) in &pivot_row {
                    let d = v * &f;
                    self[(r, *j)] -= d;
                }
            }
            pivots.push(c);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.rref().1.len()
        } else {
            self.transpose().rref().1.len()
        }
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the null space, as the columns of the returned matrix.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Mat::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k[(f, j)] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                k[(p, j)] = -r[(i, f)].clone();
            }
        }
        k
    }

    /// A basis of the column space made of columns of `self`.
    pub fn image(&self) -> Mat {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }

    /// Solves `self * X = rhs`, returning `None` if inconsistent.
    pub fn solve(&self, rhs: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, rhs.rows);
        let aug = Mat::hstack(&[self, rhs], self.rows);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x[(p, c)] = r[(i, self.cols + c)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Mat::identity(self.rows))?;
        if self.mul(&x) == Mat::identity(self.rows) {
            Some(x)
        } else {
            None
        }
    }

    pub fn determinant(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for r in c + 1..n {
                if m[(r, c)].is_zero() {
                    continue;
                }
                let f = &m[(r, c)] / &piv;
                for j in c..n {
                    let d = &m[(c, j)] * &f;
                    m[(r, j)] -= d;
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// True when the column spaces of `self` and `other` coincide.
    pub fn same_column_space(&self, other: &Mat) -> bool {
        assert_eq!(self.rows, other.rows);
        let a = self.rank();
        let b = other.rank();
        a == b && Mat::hstack(&[self, other], self.rows).rank() == a
    }

    /// True when every column of `self` lies in the column space of `other`.
    pub fn column_space_within(&self, other: &Mat) -> bool {
        assert_eq!(self.rows, other.rows);
        Mat::hstack(&[self, other], self.rows).rank() == other.rank()
    }

    pub fn max_abs_num_bits(&self) -> u64 {
        self.data.iter().map(|x| x.numer().bits().max(x.denom().bits())).max().unwrap_or(0)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn any_negative(&self) -> bool {
        self.data.iter().any(|x| x.is_negative())
    }
}

/// Dimension of the intersection of two column spaces in a common ambient space.
pub fn intersection_dim(a: &Mat, b: &Mat) -> usize {
    let ra = a.rank();
    let rb = b.rank();
    let rs = Mat::hstack(&[a, b], a.rows).rank();
    ra + rb - rs
}

/// Extends a basis of `sub` (columns, assumed independent) by columns drawn from
/// random integer combinations of `sup`'s columns until the column space of `sup`
/// is reached; returns only the added columns.
pub fn complement_in<R: Rng>(sub: &Mat, sup: &Mat, rng: Option<&mut R>) -> Mat {
    let n = sup.rows;
    let target = Mat::hstack(&[sub, sup], n).rank();
    let mut have = sub.image();
    let mut added: Vec<Vec<Q>> = Vec::new();
    let mut candidates: Vec<Vec<Q>> = Vec::new();
    match rng {
        Some(rng) => {
            for _ in 0..(2 * sup.cols + 4) {
                let coeffs: Vec<i64> = (0..sup.cols).map(|_| rng.gen_range(-3..=3)).collect();
                let v: Vec<Q> = (0..n)
                    .map(|r| (0..sup.cols).fold(Q::zero(), |acc, c| acc + &sup[(r, c)] * q(coeffs[c])))
                    .collect();
                candidates.push(v);
            }
            for c in 0..sup.cols {
                candidates.push(sup.col(c));
            }
        }
        None => {
            for c in 0..sup.cols {
                candidates.push(sup.col(c));
            }
        }
    }
    let mut rank = have.cols;
    for v in candidates {
        if rank == target {
            break;
        }
        let vm = Mat::column(&v);
        let trial = Mat::hstack(&[&have, &vm], n);
        if trial.rank() > rank {
            rank += 1;
            have = trial;
            added.push(v);
        }
    }
    let mut out = Mat::zeros(n, added.len());
    for (j, v) in added.iter().enumerate() {
        for r in 0..n {
            out[(r, j)] = v[r].clone();
        }
    }
    out
}

pub fn block_diag(parts: &[&Mat]) -> Mat {
    let rows = parts.iter().map(|p| p.rows).sum();
    let cols = parts.iter().map(|p| p.cols).sum();
    let mut out = Mat::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for p in parts {
        out.set_block(r0, c0, p);
        r0 += p.rows;
        c0 += p.cols;
    }
    out
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().ok()?;
            let d: BigInt = b.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one() {
        let m = Mat::from_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.cols, 2);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_i64(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
        assert!(Mat::from_i64(&[vec![1, 1], vec![1, 1]]).inverse().is_none());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(Mat::from_i64(&[vec![0, 1], vec![1, 0]]).determinant(), q(-1));
        assert_eq!(Mat::from_i64(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, 3]]).determinant(), q(3));
    }

    #[test]
    fn solve_inconsistent() {
        let a = Mat::from_i64(&[vec![1, 0], vec![0, 0]]);
        let b = Mat::from_i64(&[vec![1], vec![1]]);
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn complement_spans() {
        let sub = Mat::from_i64(&[vec![1], vec![0], vec![0]]);
        let sup = Mat::identity(3);
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let c = complement_in(&sub, &sup, Some(&mut rng));
        assert_eq!(c.cols, 2);
        assert_eq!(Mat::hstack(&[&sub, &c], 3).rank(), 3);
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_q("3/6"), Some(qr(1, 2)));
        assert_eq!(fmt_q(&qr(-4, 2)), "-2");
        assert_eq!(parse_q("1/0"), None);
    }
}
