use std::collections::BTreeMap;
use std::ops::Deref;

use num_traits::Zero;

use super::{complete_algebra, group_defect, is_identity_on_diagonal, BlockMatrix};
use crate::error::{Error, Result};
use crate::hodgedomain::{polarization_matrix, HodgeNumbers};
use crate::linalg::{rank, Matrix};
use crate::scalarforms::{GaussianRational, Variable};

type GR = GaussianRational;

/// An element of `g⁻`: strictly block-lower-triangular with
/// `X^t Q + Q X = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement {
    hodge: HodgeNumbers,
    x: BlockMatrix<GR>,
}

impl AlgebraElement {
    pub fn zero(h: &HodgeNumbers) -> Self {
        AlgebraElement {
            hodge: h.clone(),
            x: BlockMatrix::zeros(h.shape()),
        }
    }

    pub fn from_matrix(h: &HodgeNumbers, x: BlockMatrix<GR>) -> Result<Self> {
        if x.shape() != &h.shape() {
            return Err(Error::ShapeMismatch(format!("matrix does not fit {}", h)));
        }
        if !x.is_strictly_lower() {
            return Err(Error::Invalid("algebra element must be strictly block-lower-triangular".into()));
        }
        let q = polarization_matrix(h);
        let defect = x.transpose().mul(&q, None).add(&q.mul(&x, None));
        if let Some(&(i, j)) = defect.nonzero_blocks().first() {
            return Err(Error::Orthogonality(format!(
                "X^tQ + QX has nonzero block ({},{})",
                i, j
            )));
        }
        Ok(AlgebraElement { hodge: h.clone(), x })
    }

    /// Builds the element from values of free coordinates; missing
    /// coordinates are zero.
    pub fn from_free(h: &HodgeNumbers, values: &BTreeMap<Variable, GR>) -> Result<Self> {
        let free = h.free_variables();
        let mut x = BlockMatrix::zeros(h.shape());
        for (v, c) in values {
            if free.binary_search(v).is_err() {
                return Err(Error::EntryOutOfRange {
                    name: v.to_string(),
                    reason: "not a free coordinate of g⁻".into(),
                });
            }
            let (a, b, r, col) = v.as_entry().unwrap();
            x.set_entry(a, b, r, col, c.clone());
        }
        complete_algebra(h, &mut x);
        Ok(AlgebraElement { hodge: h.clone(), x })
    }

    /// The basis vector dual to free coordinate `v`.
    pub fn coordinate_vector(h: &HodgeNumbers, v: Variable) -> Result<Self> {
        Self::from_free(h, &BTreeMap::from([(v, GR::from_integer(1))]))
    }

    pub fn hodge(&self) -> &HodgeNumbers {
        &self.hodge
    }

    pub fn matrix(&self) -> &BlockMatrix<GR> {
        &self.x
    }

    pub fn value(&self, v: Variable) -> GR {
        let (a, b, r, c) = v.as_entry().expect("entry variable");
        self.x.entry(a, b, r, c).clone()
    }

    /// Values of all free coordinates, in variable order.
    pub fn coordinates(&self) -> Vec<GR> {
        self.hodge.free_variables().into_iter().map(|v| self.value(v)).collect()
    }

    /// Nonzero free coordinates.
    pub fn free_values(&self) -> BTreeMap<Variable, GR> {
        self.hodge
            .free_variables()
            .into_iter()
            .map(|v| (v, self.value(v)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            hodge: self.hodge.clone(),
            x: self.x.add(&other.x),
        }
    }

    pub fn scale(&self, c: &GR) -> Self {
        AlgebraElement {
            hodge: self.hodge.clone(),
            x: self.x.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero()
    }

    /// `[X, X'] = XX' - X'X`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        if self.hodge != other.hodge {
            return Err(Error::ShapeMismatch(format!(
                "bracket of elements over {} and {}",
                self.hodge, other.hodge
            )));
        }
        let x = self.x.mul(&other.x, None).sub(&other.x.mul(&self.x, None));
        Ok(AlgebraElement {
            hodge: self.hodge.clone(),
            x,
        })
    }

    /// Supported on the first sub-diagonal, i.e. in `g^{-1,1}`.
    pub fn is_horizontal(&self) -> bool {
        self.x.nonzero_blocks().iter().all(|&(i, j)| i == j + 1)
    }

    pub fn exp(&self) -> GroupElement {
        GroupElement {
            hodge: self.hodge.clone(),
            y: self.x.exp_nilpotent(None),
        }
    }
}

/// An element of `G⁻`: unipotent block-lower-triangular with `Y^t Q Y = Q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupElement {
    hodge: HodgeNumbers,
    y: BlockMatrix<GR>,
}

impl GroupElement {
    pub fn from_matrix(h: &HodgeNumbers, y: BlockMatrix<GR>) -> Result<Self> {
        if y.shape() != &h.shape() {
            return Err(Error::ShapeMismatch(format!("matrix does not fit {}", h)));
        }
        let lower = y.nonzero_blocks().iter().all(|&(i, j)| i >= j);
        if !lower || !is_identity_on_diagonal(&y) {
            return Err(Error::Invalid("group element must be unipotent block-lower-triangular".into()));
        }
        if let Some(&(i, j)) = group_defect(h, &y, None).nonzero_blocks().first() {
            return Err(Error::Orthogonality(format!("Y^tQY - Q has nonzero block ({},{})", i, j)));
        }
        Ok(GroupElement { hodge: h.clone(), y })
    }

    pub fn matrix(&self) -> &BlockMatrix<GR> {
        &self.y
    }

    pub fn hodge(&self) -> &HodgeNumbers {
        &self.hodge
    }

    pub fn log(&self) -> AlgebraElement {
        AlgebraElement {
            hodge: self.hodge.clone(),
            x: self.y.log_unipotent(None),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GroupElement {
            hodge: self.hodge.clone(),
            y: self.y.mul(&other.y, None),
        }
    }
}

/// An element of `g^{-1,1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HorizontalVector(AlgebraElement);

impl HorizontalVector {
    pub fn new(x: AlgebraElement) -> Result<Self> {
        if !x.is_horizontal() {
            return Err(Error::Invalid(format!(
                "not horizontal: nonzero blocks {:?}",
                x.matrix().nonzero_blocks()
            )));
        }
        Ok(HorizontalVector(x))
    }

    pub fn into_inner(self) -> AlgebraElement {
        self.0
    }
}

impl Deref for HorizontalVector {
    type Target = AlgebraElement;
    fn deref(&self) -> &AlgebraElement {
        &self.0
    }
}

/// A linearly independent, pairwise commuting family of horizontal vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegralElement {
    hodge: HodgeNumbers,
    basis: Vec<AlgebraElement>,
}

impl IntegralElement {
    pub fn hodge(&self) -> &HodgeNumbers {
        &self.hodge
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of the basis in the free horizontal variables, one row
    /// per vector.
    pub fn coordinate_matrix(&self) -> Matrix<GR> {
        let vars = self.hodge.horizontal_variables();
        Matrix::from_fn(self.basis.len(), vars.len(), |r, c| self.basis[r].value(vars[c]))
    }
}

/// Validates a candidate integral element: horizontal, independent and
/// pairwise commuting. The error names the first offending vector or pair.
pub fn check_integral_element(h: &HodgeNumbers, basis: &[AlgebraElement]) -> Result<IntegralElement> {
    for (i, x) in basis.iter().enumerate() {
        if x.hodge() != h {
            return Err(Error::ShapeMismatch(format!(
                "vector {} is over {}, expected {}",
                i,
                x.hodge(),
                h
            )));
        }
        if !x.is_horizontal() {
            return Err(Error::Invalid(format!("vector {} is not in g^(-1,1)", i)));
        }
    }
    let vars = h.horizontal_variables();
    for i in 0..basis.len() {
        let m = Matrix::from_fn(i + 1, vars.len(), |r, c| basis[r].value(vars[c]));
        if rank(&m) < i + 1 {
            return Err(Error::DependentBasis { index: i });
        }
    }
    for a in 0..basis.len() {
        for b in a + 1..basis.len() {
            let br = basis[a].bracket(&basis[b])?;
            if let Some(&(i, j)) = br.matrix().nonzero_blocks().first() {
                let blk = br.matrix().block(i, j);
                let value = blk
                    .entries()
                    .find(|(_, _, v)| !v.is_zero())
                    .map(|(r, c, v)| format!("entry [{},{}] = {}", r + 1, c + 1, v))
                    .unwrap_or_default();
                return Err(Error::NonCommuting {
                    first: a,
                    second: b,
                    block_row: i,
                    block_col: j,
                    value,
                });
            }
        }
    }
    Ok(IntegralElement {
        hodge: h.clone(),
        basis: basis.to_vec(),
    })
}

/// Coordinate basis of `g⁻`, ordered by free variable.
pub fn basis_of_gminus(h: &HodgeNumbers) -> Vec<AlgebraElement> {
    h.free_variables()
        .into_iter()
        .map(|v| AlgebraElement::coordinate_vector(h, v).expect("free variable"))
        .collect()
}

/// Coordinate basis of `g^{-1,1}`.
pub fn basis_of_g11(h: &HodgeNumbers) -> Vec<AlgebraElement> {
    h.horizontal_variables()
        .into_iter()
        .map(|v| AlgebraElement::coordinate_vector(h, v).expect("free variable"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hodgedomain::dimension_of_domain;

    fn hodge(h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(h.len() - 1, h.to_vec()).unwrap()
    }

    fn g(n: i64) -> GR {
        GR::from_integer(n)
    }

    /// `w = 3`, `h = (1,1,1,1)` with `(X_{1,0}, X_{2,1})` given.
    fn quartic(x10: i64, x21: i64) -> AlgebraElement {
        let h = hodge(&[1, 1, 1, 1]);
        let mut m = BTreeMap::new();
        m.insert(Variable::entry(1, 0, 0, 0), g(x10));
        m.insert(Variable::entry(2, 1, 0, 0), g(x21));
        AlgebraElement::from_free(&h, &m).unwrap()
    }

    #[test]
    fn weight_three_bracket() {
        let x = quartic(1, 0);
        let y = quartic(0, 1);
        assert_eq!(x.value(Variable::entry(3, 2, 0, 0)), g(1));
        let b = x.bracket(&y).unwrap();
        assert_eq!(b.matrix().nonzero_blocks(), vec![(2, 0), (3, 1)]);
        assert_eq!(b.matrix().entry(2, 0, 0, 0), &g(-1));
        assert_eq!(b.matrix().entry(3, 1, 0, 0), &g(1));
        assert!(x.bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn non_commuting_pair_is_reported() {
        let h = hodge(&[1, 1, 1, 1]);
        match check_integral_element(&h, &[quartic(1, 0), quartic(0, 1)]) {
            Err(Error::NonCommuting { block_row, block_col, .. }) => {
                assert_eq!((block_row, block_col), (2, 0))
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn block_one_zero_is_abelian() {
        let h = hodge(&[3, 2, 2, 3]);
        let basis: Vec<_> = h
            .horizontal_variables()
            .into_iter()
            .filter(|v| v.as_entry().unwrap().0 == 1)
            .map(|v| AlgebraElement::coordinate_vector(&h, v).unwrap())
            .collect();
        assert_eq!(check_integral_element(&h, &basis).unwrap().dim(), 6);
        assert_eq!(check_integral_element(&h, &[]).unwrap().dim(), 0);
    }

    #[test]
    fn dependent_basis_is_reported() {
        let h = hodge(&[1, 1, 1, 1]);
        let x = quartic(1, 0);
        assert_eq!(
            check_integral_element(&h, &[x.clone(), x.scale(&g(2))]),
            Err(Error::DependentBasis { index: 1 })
        );
    }

    #[test]
    fn basis_lengths_match_dimension() {
        for hv in [&[2, 4, 2][..], &[2, 2], &[1, 2, 2, 1], &[0, 3, 0], &[1, 1, 2, 1, 1]] {
            let h = hodge(hv);
            let basis = basis_of_gminus(&h);
            assert_eq!(basis.len(), dimension_of_domain(&h));
            for x in &basis {
                AlgebraElement::from_matrix(&h, x.matrix().clone()).unwrap();
            }
        }
        assert_eq!(basis_of_gminus(&hodge(&[2, 2])).len(), 3);
    }

    #[test]
    fn exp_log_roundtrip() {
        let h = hodge(&[1, 2, 2, 1]);
        let mut m = BTreeMap::new();
        for (n, v) in h.free_variables().into_iter().enumerate() {
            m.insert(v, GR::from_parts((n as i64 + 1, 3), (1 - n as i64, 2)));
        }
        let x = AlgebraElement::from_free(&h, &m).unwrap();
        let y = x.exp();
        GroupElement::from_matrix(&h, y.matrix().clone()).unwrap();
        assert_eq!(y.log(), x);
    }
}
