//! Dense matrices over any entry ring and exact elimination over the
//! Gaussian rationals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalarforms::{GaussianRational, OneForm, Polynomial};

type GR = GaussianRational;

/// What a matrix entry has to support: additive structure only.
pub trait Entry: Clone + PartialEq + Zero {
    fn add_to(&mut self, other: &Self);
    fn negated(&self) -> Self;
}

impl Entry for GaussianRational {
    fn add_to(&mut self, other: &Self) {
        *self += other;
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Entry for Polynomial {
    fn add_to(&mut self, other: &Self) {
        self.add_assign_ref(other);
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Entry for OneForm {
    fn add_to(&mut self, other: &Self) {
        self.add_assign_ref(other);
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Entries that also multiply. `max_degree` truncates polynomial products
/// and is ignored by scalars.
pub trait RingEntry: Entry + One {
    fn mul_trunc(&self, other: &Self, max_degree: Option<u32>) -> Self;
    fn scale(&self, c: &GaussianRational) -> Self;
}

impl RingEntry for GaussianRational {
    fn mul_trunc(&self, other: &Self, _max_degree: Option<u32>) -> Self {
        self * other
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c
    }
}

impl RingEntry for Polynomial {
    fn mul_trunc(&self, other: &Self, max_degree: Option<u32>) -> Self {
        Polynomial::mul_trunc(self, other, max_degree)
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        Polynomial::scale(self, c)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != nc) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<U: Entry>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        self.map(|x| x.negated())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_to(b);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negated())
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &Matrix<T>) {
        for r in 0..m.rows {
            for c in 0..m.cols {
                self.set(r0 + r, c0 + c, m.get(r, c).clone());
            }
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / cols, k % cols, v))
    }
}

impl<T: Entry + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows)
            .map(|r| &self.data[r * self.cols..(r + 1) * self.cols])
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

/// `Σ_k mul(a[r,k], b[k,c])`, skipping zero left factors.
pub fn product<A, B, C>(a: &Matrix<A>, b: &Matrix<B>, mul: impl Fn(&A, &B) -> C) -> Matrix<C>
where
    A: Entry,
    B: Entry,
    C: Entry,
{
    assert_eq!(a.cols, b.rows, "inner dimensions differ");
    let mut out = Matrix::<C>::zeros(a.rows, b.cols);
    for r in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(r, k);
            if x.is_zero() {
                continue;
            }
            for c in 0..b.cols {
                let y = b.get(k, c);
                if y.is_zero() {
                    continue;
                }
                let t = mul(x, y);
                out.get_mut(r, c).add_to(&t);
            }
        }
    }
    out
}

pub fn mul_scalar(a: &Matrix<GR>, b: &Matrix<GR>) -> Matrix<GR> {
    product(a, b, |x, y| x * y)
}

pub fn mul_ring<T: RingEntry>(a: &Matrix<T>, b: &Matrix<T>, max_degree: Option<u32>) -> Matrix<T> {
    product(a, b, |x, y| x.mul_trunc(y, max_degree))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix<GR>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..m.cols {
                m.data.swap(p * m.cols + c, row * m.cols + c);
            }
        }
        let inv = m.get(row, col).inv().expect("nonzero pivot");
        for c in col..m.cols {
            let v = m.get(row, c) * &inv;
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let factor = m.get(r, col).clone();
            if factor.is_zero() {
                continue;
            }
            for c in col..m.cols {
                let v = m.get(r, c) - &(&factor * m.get(row, c));
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &Matrix<GR>) -> usize {
    rref(&mut m.clone()).len()
}

/// Basis of `{x : m x = 0}`, one vector per free column, in column order.
pub fn nullspace(m: &Matrix<GR>) -> Vec<Vec<GR>> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![GR::zero(); m.cols];
            v[f] = GR::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f);
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Matrix<GR>) -> Option<Matrix<GR>> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
        if c < n {
            m.get(r, c).clone()
        } else if c - n == r {
            GR::one()
        } else {
            GR::zero()
        }
    });
    let pivots = rref(&mut aug);
    if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
        return None;
    }
    Some(aug.submatrix(0, n, n, n))
}

/// Incremental sparse row echelon form over the Gaussian rationals for
/// systems `Σ a_c x_c = b`.
///
/// Rows are reduced against existing pivots as they arrive, so redundant
/// equations cost one reduction and are then dropped.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    num_unknowns: usize,
    pivot_rows: Vec<(Vec<(usize, GR)>, GR)>,
    pivot_of_col: HashMap<usize, usize>,
    inconsistent: bool,
}

impl SparseSystem {
    pub fn new(num_unknowns: usize) -> Self {
        SparseSystem {
            num_unknowns,
            ..Default::default()
        }
    }

    pub fn num_unknowns(&self) -> usize {
        self.num_unknowns
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Adds `Σ coeffs = rhs`; coefficients may repeat columns.
    pub fn add_equation(&mut self, coeffs: impl IntoIterator<Item = (usize, GR)>, rhs: GR) {
        let mut acc: BTreeMap<usize, GR> = BTreeMap::new();
        for (c, v) in coeffs {
            debug_assert!(c < self.num_unknowns);
            *acc.entry(c).or_insert_with(GR::zero) += &v;
        }
        let mut row: Vec<(usize, GR)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let mut rhs = rhs;
        loop {
            let hit = row
                .iter()
                .position(|(c, _)| self.pivot_of_col.contains_key(c));
            let Some(pos) = hit else { break };
            let (col, factor) = row[pos].clone();
            let (prow, prhs) = &self.pivot_rows[self.pivot_of_col[&col]];
            // pivot rows are normalised to a leading 1
            row = axpy(&row, &-&factor, prow);
            rhs = &rhs - &(&factor * prhs);
        }
        if row.is_empty() {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        }
        let inv = row[0].1.inv().expect("nonzero leading coefficient");
        for (_, v) in row.iter_mut() {
            *v = &*v * &inv;
        }
        rhs = &rhs * &inv;
        let lead = row[0].0;
        self.pivot_of_col.insert(lead, self.pivot_rows.len());
        self.pivot_rows.push((row, rhs));
    }

    /// Unknowns that are not pivots, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.num_unknowns)
            .filter(|c| !self.pivot_of_col.contains_key(c))
            .collect()
    }

    /// The solution with every free unknown set to `free_values` (zero when
    /// absent).
    pub fn solve_with(&self, free_values: &HashMap<usize, GR>) -> Result<Vec<GR>> {
        if self.inconsistent {
            return Err(Error::Inconsistent { degree: 0 });
        }
        let mut x = vec![GR::zero(); self.num_unknowns];
        for (c, v) in free_values {
            if !self.pivot_of_col.contains_key(c) {
                x[*c] = v.clone();
            }
        }
        // A pivot row only mentions pivots created after it, so back
        // substitution runs in reverse insertion order.
        for (row, rhs) in self.pivot_rows.iter().rev() {
            let mut v = rhs.clone();
            for (c, a) in &row[1..] {
                v -= &(a * &x[*c]);
            }
            x[row[0].0] = v;
        }
        Ok(x)
    }

    pub fn solve(&self) -> Result<Vec<GR>> {
        self.solve_with(&HashMap::new())
    }
}

fn axpy(row: &[(usize, GR)], factor: &GR, other: &[(usize, GR)]) -> Vec<(usize, GR)> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_left = j == other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_right = i == row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_left {
            out.push(row[i].clone());
            i += 1;
        } else if take_right {
            out.push((other[j].0, factor * &other[j].1));
            j += 1;
        } else {
            let v = &row[i].1 + &(factor * &other[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> GR {
        GR::from_integer(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<GR> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        let v = Matrix::from_rows(ns[0].iter().map(|x| vec![x.clone()]).collect()).unwrap();
        assert!(mul_scalar(&m, &v).is_zero());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(mul_scalar(&m, &inv), Matrix::identity(2));
        assert!(inverse(&mat(&[&[1, 2], &[2, 4]])).is_none());
        assert_eq!(inverse(&Matrix::<GR>::zeros(0, 0)), Some(Matrix::zeros(0, 0)));
    }

    #[test]
    fn sparse_system_matches_dense() {
        // x0 + x1 = 3, x1 - x2 = 1, x0 + 2 x1 - x2 = 4 (dependent)
        let mut s = SparseSystem::new(3);
        s.add_equation([(0, q(1)), (1, q(1))], q(3));
        s.add_equation([(1, q(1)), (2, q(-1))], q(1));
        s.add_equation([(0, q(1)), (1, q(2)), (2, q(-1))], q(4));
        assert!(s.is_consistent());
        assert_eq!(s.rank(), 2);
        assert_eq!(s.free_columns(), vec![2]);
        let x = s.solve().unwrap();
        assert_eq!(x, vec![q(2), q(1), q(0)]);
        s.add_equation([(0, q(1)), (1, q(1))], q(4));
        assert!(!s.is_consistent());
    }
}
