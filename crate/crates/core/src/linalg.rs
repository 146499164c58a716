//! Exact linear algebra over ℚ: sparse vectors keyed by arbitrary ordered
//! labels, an incremental echelon basis with combination tracking, and small
//! dense matrices.

use std::collections::BTreeMap;
use std::ops::Bound;

use num::{One, Zero};

use crate::scalar::Q;

pub type SparseVec<K> = BTreeMap<K, Q>;

pub fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, c: &Q, v: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        add_entry(acc, k.clone(), &(c * x));
    }
}

pub fn add_entry<K: Ord>(acc: &mut SparseVec<K>, k: K, x: &Q) {
    if x.is_zero() {
        return;
    }
    match acc.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(x.clone());
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += x;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn scaled<K: Ord + Clone>(c: &Q, v: &SparseVec<K>) -> SparseVec<K> {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (k.clone(), c * x)).collect()
}

pub fn sub<K: Ord + Clone>(a: &SparseVec<K>, b: &SparseVec<K>) -> SparseVec<K> {
    let mut out = a.clone();
    axpy(&mut out, &-Q::one(), b);
    out
}

pub fn add<K: Ord + Clone>(a: &SparseVec<K>, b: &SparseVec<K>) -> SparseVec<K> {
    let mut out = a.clone();
    axpy(&mut out, &Q::one(), b);
    out
}

pub fn unit<K: Ord>(k: K) -> SparseVec<K> {
    let mut v = SparseVec::new();
    v.insert(k, Q::one());
    v
}

/// Echelon basis of a subspace, grown one vector at a time.
///
/// Every stored row remembers which combination of the originally inserted
/// vectors produced it, so the same structure answers span membership,
/// coordinate solves and kernel relations.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone> {
    rows: Vec<(SparseVec<K>, SparseVec<usize>)>,
    pivots: BTreeMap<K, usize>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn from_vectors<'a, I>(vs: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec<K>>,
        K: 'a,
    {
        let mut e = Self::new();
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors inserted so far (independent or not).
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Returns `(remainder, combo)` with `v = remainder + Σ combo[i]·input_i`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut rem = v.clone();
        let mut used = SparseVec::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = {
                let range = match &cursor {
                    None => rem.range::<K, _>((Bound::<&K>::Unbounded, Bound::<&K>::Unbounded)),
                    Some(c) => rem.range::<K, _>((Bound::Excluded(c), Bound::Unbounded)),
                };
                range
                    .filter_map(|(k, x)| self.pivots.get(k).map(|&r| (k.clone(), x.clone(), r)))
                    .next()
            };
            let Some((k, coeff, r)) = next else { break };
            let (row, combo) = &self.rows[r];
            axpy(&mut rem, &-coeff.clone(), row);
            axpy(&mut used, &coeff, combo);
            cursor = Some(k);
        }
        (rem, used)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coefficients over the inserted vectors, if `v` lies in their span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (rem, combo) = self.reduce(v);
        rem.is_empty().then_some(combo)
    }

    /// Inserts `v`. Returns `None` when `v` was independent, otherwise the
    /// kernel relation `Σ c_i·input_i = 0` involving the new vector.
    pub fn insert(&mut self, v: SparseVec<K>) -> Option<SparseVec<usize>> {
        let idx = self.inserted;
        self.inserted += 1;
        let (rem, used) = self.reduce(&v);
        if rem.is_empty() {
            let mut rel = scaled(&-Q::one(), &used);
            add_entry(&mut rel, idx, &Q::one());
            return Some(rel);
        }
        let (pk, lead) = rem.iter().next().map(|(k, x)| (k.clone(), x.clone())).unwrap();
        let inv = lead.recip();
        let row = scaled(&inv, &rem);
        let mut combo = scaled(&-inv.clone(), &used);
        add_entry(&mut combo, idx, &inv);
        self.pivots.insert(pk, self.rows.len());
        self.rows.push((row, combo));
        None
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.iter().map(|(r, _)| r)
    }

    pub fn pivot_keys(&self) -> impl Iterator<Item = &K> {
        self.pivots.keys()
    }
}

/// Kernel of the linear map sending the i-th unit vector to `images[i]`.
pub fn kernel<K: Ord + Clone>(images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    let mut e = Echelon::new();
    images.iter().filter_map(|v| e.insert(v.clone())).collect()
}

/// Solves `Σ y_i·images[i] = target`; returns one solution if any.
pub fn solve<K: Ord + Clone>(images: &[SparseVec<K>], target: &SparseVec<K>) -> Option<Vec<Q>> {
    let e = Echelon::from_vectors(images.iter());
    let combo = e.express(target)?;
    let mut y = vec![Q::zero(); images.len()];
    for (i, c) in combo {
        y[i] = c;
    }
    Some(y)
}

/// Dense exact matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> =
                (0..self.cols).map(|j| crate::scalar::fmt_q(&self[(i, j)])).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
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

    /// Matrix unit with 1-based indices, matching the usual E_{i,j} notation.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i - 1, j - 1)] = Q::one();
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn scale(&self, c: &Q) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, o: &Mat) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, o: &Mat) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn to_sparse(&self) -> SparseVec<(usize, usize)> {
        let mut v = SparseVec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    v.insert((i, j), self[(i, j)].clone());
                }
            }
        }
        v
    }

    /// Determinant by Gaussian elimination over ℚ.
    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[(r, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                for j in 0..n {
                    let tmp = m[(p, j)].clone();
                    m[(p, j)] = m[(c, j)].clone();
                    m[(c, j)] = tmp;
                }
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for r in c + 1..n {
                let f = &m[(r, c)] / &piv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = &f * &m[(c, j)];
                    m[(r, j)] -= t;
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, x)| (k, qi(x))).filter(|(_, x)| !x.is_zero()).collect()
    }

    #[test]
    fn echelon_rank_and_kernel() {
        let vs = [v(&[(0, 1), (1, 2)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (1, 3), (2, 1)])];
        let ker = kernel(&vs);
        assert_eq!(ker.len(), 1);
        let rel = &ker[0];
        let mut acc = SparseVec::new();
        for (i, c) in rel {
            axpy(&mut acc, c, &vs[*i]);
        }
        assert!(acc.is_empty());
    }

    #[test]
    fn solve_recovers_coefficients() {
        let vs = [v(&[(0, 2)]), v(&[(0, 1), (1, 1)])];
        let y = solve(&vs, &v(&[(0, 3), (1, 1)])).unwrap();
        assert_eq!(y, vec![qi(1), qi(1)]);
        assert!(solve(&vs, &v(&[(2, 1)])).is_none());
    }

    #[test]
    fn determinant() {
        let mut m = Mat::zeros(2, 2);
        m[(0, 0)] = qi(1);
        m[(0, 1)] = qi(2);
        m[(1, 0)] = qi(3);
        m[(1, 1)] = qi(4);
        assert_eq!(m.det(), qi(-2));
        assert_eq!(Mat::identity(3).scale(&q(1, 2)).det(), q(1, 8));
    }
}
