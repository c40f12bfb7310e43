//! Exact row reduction over a [`Field`]: subspaces kept in reduced row
//! echelon form, dense matrices, and closure under a family of operators.

use num_traits::Zero;

use crate::scalar::Field;

/// Subspace of `F^n`, stored as the unique reduced row echelon basis.
///
/// Two subspaces are equal iff their stored bases are equal, so the derived
/// `PartialEq` is subspace equality.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for c in 0..ambient {
            s.insert(unit(ambient, c));
        }
        s
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<F>>>(ambient: usize, vs: I) -> Self {
        let mut s = Self::zero(ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    /// Span of the unit vectors at `cols`.
    pub fn coordinate(ambient: usize, cols: &[usize]) -> Self {
        Self::from_vectors(ambient, cols.iter().map(|&c| unit(ambient, c)))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }
    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns without a pivot; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x = x.clone() - c.clone() * r.clone();
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Zassenhaus intersection.
    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let n = self.ambient;
        let mut big = Subspace::zero(2 * n);
        for r in &self.rows {
            let mut v = r.clone();
            v.extend(r.iter().cloned());
            big.insert(v);
        }
        for r in &other.rows {
            let mut v = r.clone();
            v.extend(std::iter::repeat_with(F::zero).take(n));
            big.insert(v);
        }
        let vs = big.rows.iter().zip(&big.pivots).filter(|(_, &p)| p >= n).map(|(r, _)| r[n..].to_vec());
        Subspace::from_vectors(n, vs)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Intersection with the span of the unit vectors at `cols`.
    pub fn restrict_to(&self, cols: &[usize]) -> Self {
        self.intersection(&Subspace::coordinate(self.ambient, cols))
    }

    /// Smallest subspace containing `self` and stable under every operator.
    pub fn close_under(&self, ops: &[Matrix<F>]) -> Self {
        let mut s = self.clone();
        let mut queue: Vec<Vec<F>> = s.rows.clone();
        while let Some(v) = queue.pop() {
            for op in ops {
                let w = op.apply(&v);
                if s.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        s
    }
}

pub fn unit<F: Field>(n: usize, c: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[c] = F::one();
    v
}

pub fn add_scaled<F: Field>(acc: &mut [F], c: &F, v: &[F]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.clone() + c.clone() * x.clone();
        }
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for k in 0..n {
            m.set(k, k, F::one());
        }
        m
    }
    /// Matrix whose `c`-th column is `cols[c]`.
    pub fn from_columns(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }
    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, x: F) {
        self.data[r * self.cols + c] = x;
    }
    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "matrix-vector size mismatch");
        let mut out = vec![F::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let m = self.get(r, c);
                if !m.is_zero() {
                    *o = o.clone() + m.clone() * x.clone();
                }
            }
        }
        out
    }
    pub fn mul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows);
        let cols: Vec<Vec<F>> = (0..o.cols).map(|c| self.apply(&o.column(c))).collect();
        Matrix::from_columns(self.rows, &cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Gaussian, Rational};
    use num_traits::One;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let a = Subspace::from_vectors(3, [v(&[1, 2, 3]), v(&[2, 4, 7])]);
        let b = Subspace::from_vectors(3, [v(&[0, 0, 1]), v(&[3, 6, 0])]);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.free_columns(), vec![1]);
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::from_vectors(4, [v(&[1, 0, 0, 0]), v(&[0, 1, 1, 0])]);
        let b = Subspace::from_vectors(4, [v(&[1, 1, 1, 0]), v(&[0, 0, 0, 1])]);
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::from_vectors(4, [v(&[1, 1, 1, 0])]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        assert_eq!(a.restrict_to(&[0, 3]), Subspace::from_vectors(4, [v(&[1, 0, 0, 0])]));
    }

    #[test]
    fn closure_under_rotation() {
        let mut rot = Matrix::<Rational>::zeros(2, 2);
        rot.set(0, 1, rat(-1));
        rot.set(1, 0, rat(1));
        let s = Subspace::from_vectors(2, [v(&[1, 0])]).close_under(&[rot]);
        assert!(s.is_full());
    }

    #[test]
    fn gaussian_rows() {
        let i = Gaussian::i();
        let s = Subspace::from_vectors(2, [vec![Gaussian::one(), i.clone()]]);
        assert!(s.contains(&[i.clone(), -Gaussian::one()]));
        assert!(!s.contains(&[Gaussian::one(), -i]));
    }
}
