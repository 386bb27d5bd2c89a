//! The graded nilpotent algebra `g⁻` and unipotent group `G⁻` in block form.

mod element;
pub(crate) mod json;

use std::fmt;

use crate::hodgedomain::{BlockShape, HodgeNumbers};
use crate::linalg::{mul_ring, Entry, Matrix, RingEntry};
use crate::scalarforms::GaussianRational;

pub use element::{
    basis_of_g11, basis_of_gminus, check_integral_element, AlgebraElement, GroupElement,
    HorizontalVector, IntegralElement,
};
pub use json::{BlocksJson, ElementJson};

/// A square matrix partitioned into `(w+1) × (w+1)` blocks.
///
/// Stored densely; zero blocks are simply zero. `nonzero_blocks` gives the
/// canonical sparse view.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BlockMatrix<T> {
    shape: BlockShape,
    m: Matrix<T>,
}

impl<T: Entry> BlockMatrix<T> {
    pub fn zeros(shape: BlockShape) -> Self {
        let n = shape.total();
        BlockMatrix {
            shape,
            m: Matrix::zeros(n, n),
        }
    }

    pub fn from_matrix(shape: BlockShape, m: Matrix<T>) -> Self {
        assert_eq!(m.rows(), shape.total());
        assert_eq!(m.cols(), shape.total());
        BlockMatrix { shape, m }
    }

    pub fn shape(&self) -> &BlockShape {
        &self.shape
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.m
    }

    pub fn block(&self, i: usize, j: usize) -> Matrix<T> {
        self.m.submatrix(
            self.shape.offset(i),
            self.shape.offset(j),
            self.shape.size(i),
            self.shape.size(j),
        )
    }

    /// Panics when `b` does not have the block's size.
    pub fn set_block(&mut self, i: usize, j: usize, b: &Matrix<T>) {
        assert_eq!((b.rows(), b.cols()), (self.shape.size(i), self.shape.size(j)));
        self.m.set_submatrix(self.shape.offset(i), self.shape.offset(j), b);
    }

    pub fn entry(&self, i: usize, j: usize, r: usize, c: usize) -> &T {
        self.m.get(self.shape.offset(i) + r, self.shape.offset(j) + c)
    }

    pub fn set_entry(&mut self, i: usize, j: usize, r: usize, c: usize, v: T) {
        self.m.set(self.shape.offset(i) + r, self.shape.offset(j) + c, v);
    }

    pub fn num_blocks(&self) -> usize {
        self.shape.num_blocks()
    }

    /// Blocks with a nonzero entry, in lexicographic order.
    pub fn nonzero_blocks(&self) -> Vec<(usize, usize)> {
        let n = self.num_blocks();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !self.block_is_zero(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn block_is_zero(&self, i: usize, j: usize) -> bool {
        let (oi, oj) = (self.shape.offset(i), self.shape.offset(j));
        (0..self.shape.size(i))
            .all(|r| (0..self.shape.size(j)).all(|c| self.m.get(oi + r, oj + c).is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Nonzero only in blocks `(i,j)` with `i > j`.
    pub fn is_strictly_lower(&self) -> bool {
        self.nonzero_blocks().iter().all(|&(i, j)| i > j)
    }

    pub fn transpose(&self) -> Self {
        BlockMatrix {
            shape: self.shape.clone(),
            m: self.m.transpose(),
        }
    }

    pub fn negated(&self) -> Self {
        BlockMatrix {
            shape: self.shape.clone(),
            m: self.m.negated(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        BlockMatrix {
            shape: self.shape.clone(),
            m: self.m.add(&other.m),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BlockMatrix {
            shape: self.shape.clone(),
            m: self.m.sub(&other.m),
        }
    }

    pub fn map<U: Entry>(&self, f: impl FnMut(&T) -> U) -> BlockMatrix<U> {
        BlockMatrix {
            shape: self.shape.clone(),
            m: self.m.map(f),
        }
    }
}

impl<T: RingEntry> BlockMatrix<T> {
    pub fn identity(shape: BlockShape) -> Self {
        let n = shape.total();
        BlockMatrix {
            shape,
            m: Matrix::identity(n),
        }
    }

    pub fn mul(&self, other: &Self, max_degree: Option<u32>) -> Self {
        BlockMatrix {
            shape: self.shape.clone(),
            m: mul_ring(&self.m, &other.m, max_degree),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|x| x.scale(c))
    }

    /// `Σ_{m=0}^{w} N^m / m!` for strictly lower `N`.
    pub fn exp_nilpotent(&self, max_degree: Option<u32>) -> Self {
        let mut out = Self::identity(self.shape.clone());
        let mut power = Self::identity(self.shape.clone());
        for m in 1..self.num_blocks() {
            power = power.mul(self, max_degree);
            if power.is_zero() {
                break;
            }
            let f = GaussianRational::from_ratio(1, factorial(m));
            out = out.add(&power.scale(&f));
        }
        out
    }

    /// `Σ_{m=1}^{w} (-1)^{m+1} N^m / m` for `Y = I + N` unipotent.
    pub fn log_unipotent(&self, max_degree: Option<u32>) -> Self {
        let n = self.sub(&Self::identity(self.shape.clone()));
        let mut out = BlockMatrix::zeros(self.shape.clone());
        let mut power = Self::identity(self.shape.clone());
        for m in 1..self.num_blocks() {
            power = power.mul(&n, max_degree);
            if power.is_zero() {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&GaussianRational::from_ratio(sign, m as i64)));
        }
        out
    }

    /// `Y^{-1}` by the terminating Neumann series, for unipotent `Y`.
    pub fn unipotent_inverse(&self, max_degree: Option<u32>) -> Self {
        let n = self.sub(&Self::identity(self.shape.clone()));
        let minus_n = n.negated();
        let mut out = Self::identity(self.shape.clone());
        let mut power = Self::identity(self.shape.clone());
        for _ in 1..self.num_blocks() {
            power = power.mul(&minus_n, max_degree);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        out
    }
}

fn factorial(m: usize) -> i64 {
    (1..=m as i64).product()
}

impl<T: fmt::Debug> fmt::Debug for BlockMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockMatrix{:?}", self.m)
    }
}

/// Fills every derived block of a strictly lower algebra element from its
/// canonical free entries: `X_{a,b} = s·X_{w-b,w-a}^t`, with self-paired
/// blocks completed to symmetric or antisymmetric.
pub fn complete_algebra<T: Entry>(h: &HodgeNumbers, x: &mut BlockMatrix<T>) {
    let w = h.weight();
    for a in 0..=w {
        for b in 0..a {
            let (pa, pb) = h.partner(a, b);
            let sign = HodgeNumbers::pair_sign(a, b);
            if (pa, pb) == (a, b) {
                let n = h.block_dim(a);
                for r in 0..n {
                    for c in 0..n {
                        if r > c {
                            let v = x.entry(a, b, c, r).clone();
                            let v = if sign == 1 { v } else { v.negated() };
                            x.set_entry(a, b, r, c, v);
                        } else if r == c && sign == -1 {
                            x.set_entry(a, b, r, c, T::zero());
                        }
                    }
                }
            } else if !h.is_canonical(a, b) {
                let src = x.block(pa, pb).transpose();
                let src = if sign == 1 { src } else { src.negated() };
                x.set_block(a, b, &src);
            }
        }
    }
}

/// Fills the derived entries of a unipotent group element from its
/// canonical free entries so that `Y^t Q Y = Q` (exactly for scalars, up to
/// `max_degree` for polynomials). Diagonal blocks are set to the identity.
///
/// Works through the pairs `(w-i, j) ↔ (w-j, i)` by increasing gap
/// `w-i-j`, using the `(i, j)` block of `Y^t Q Y = Q`:
/// `(-1)^i Y_{w-i,j} + (-1)^{w-j} Y_{w-j,i}^t + Σ_{i<k<w-j} (-1)^k Y_{k,i}^t Y_{w-k,j} = 0`.
pub fn complete_group<T: RingEntry>(h: &HodgeNumbers, y: &mut BlockMatrix<T>, max_degree: Option<u32>) {
    let w = h.weight();
    for i in 0..=w {
        y.set_block(i, i, &Matrix::identity(h.block_dim(i)));
    }
    for gap in 1..=w {
        for i in 0..=w {
            if i + gap > w {
                break;
            }
            let j = w - gap - i;
            if j < i {
                break;
            }
            let mut mid = Matrix::<T>::zeros(h.block_dim(i), h.block_dim(j));
            for k in i + 1..w - j {
                let term = mul_ring(&y.block(k, i).transpose(), &y.block(w - k, j), max_degree);
                let term = if k % 2 == 0 { term } else { term.negated() };
                mid = mid.add(&term);
            }
            if i < j {
                // Y_{w-i,j} = -(-1)^i [ (-1)^{w-j} Y_{w-j,i}^t + mid ]
                let partner = y.block(w - j, i).transpose();
                let partner = if (w - j).is_multiple_of(2) { partner } else { partner.negated() };
                let total = partner.add(&mid);
                let total = if i % 2 == 0 { total.negated() } else { total };
                y.set_block(w - i, j, &total);
            } else {
                // self-paired: Y + (-1)^w Y^t = R with R = -(-1)^i mid
                let r = if i % 2 == 0 { mid.negated() } else { mid };
                let n = h.block_dim(w - i);
                let half = GaussianRational::from_ratio(1, 2);
                for a in 0..n {
                    for b in 0..n {
                        if h.is_odd() {
                            if a > b {
                                let mut v = y.entry(w - i, i, b, a).clone();
                                v.add_to(&r.get(b, a).negated());
                                y.set_entry(w - i, i, a, b, v);
                            }
                        } else if a == b {
                            y.set_entry(w - i, i, a, a, r.get(a, a).scale(&half));
                        } else if a > b {
                            let mut v = r.get(b, a).clone();
                            v.add_to(&y.entry(w - i, i, b, a).negated());
                            y.set_entry(w - i, i, a, b, v);
                        }
                    }
                }
            }
        }
    }
}

/// `Y^t Q Y - Q`, truncated for polynomial entries.
pub fn group_defect<T: RingEntry>(h: &HodgeNumbers, y: &BlockMatrix<T>, max_degree: Option<u32>) -> BlockMatrix<T> {
    let q = crate::hodgedomain::polarization_matrix(h).map(|c| T::one().scale(c));
    y.transpose()
        .mul(&q, max_degree)
        .mul(y, max_degree)
        .sub(&q)
}

pub(crate) fn is_identity_on_diagonal<T: RingEntry>(y: &BlockMatrix<T>) -> bool {
    (0..y.num_blocks()).all(|i| y.block(i, i) == Matrix::identity(y.shape().size(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarforms::Polynomial;

    fn hodge(h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(h.len() - 1, h.to_vec()).unwrap()
    }

    #[test]
    fn group_completion_of_free_polynomials() {
        for hv in [&[1, 2, 2, 1][..], &[2, 1, 2], &[1, 1, 2, 1, 1], &[1, 1, 1, 1, 1, 1], &[2, 2]] {
            let h = hodge(hv);
            let mut y = BlockMatrix::<Polynomial>::zeros(h.shape());
            for v in h.free_variables() {
                let (a, b, r, c) = v.as_entry().unwrap();
                y.set_entry(a, b, r, c, Polynomial::var(v));
            }
            complete_group(&h, &mut y, None);
            assert!(group_defect(&h, &y, None).is_zero(), "{:?}", hv);
            assert!(is_identity_on_diagonal(&y));
        }
    }

    #[test]
    fn weight_two_symmetric_part() {
        let h = hodge(&[2, 3, 2]);
        let mut y = BlockMatrix::<Polynomial>::zeros(h.shape());
        for v in h.free_variables() {
            let (a, b, r, c) = v.as_entry().unwrap();
            y.set_entry(a, b, r, c, Polynomial::var(v));
        }
        complete_group(&h, &mut y, None);
        let b = y.block(1, 0);
        let m = y.block(2, 0);
        let btb = mul_ring(&b.transpose(), &b, None);
        assert_eq!(m.add(&m.transpose()), btb);
    }
}
