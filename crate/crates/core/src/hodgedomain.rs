//! Hodge numbers and the block geometry they induce.
//!
//! Block row `i` of every matrix has `h[w-i]` scalar rows (the `(w-i, i)`
//! Hodge piece), so block `(i,j)` is `h[w-i] × h[w-j]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nilalgebra::BlockMatrix;
use crate::scalarforms::{GaussianRational, Variable};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawHodge")]
pub struct HodgeNumbers {
    weight: usize,
    h: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHodge {
    weight: usize,
    h: Vec<usize>,
}

impl TryFrom<RawHodge> for HodgeNumbers {
    type Error = Error;
    fn try_from(raw: RawHodge) -> Result<Self> {
        HodgeNumbers::new(raw.weight, raw.h)
    }
}

impl HodgeNumbers {
    pub fn new(weight: usize, h: Vec<usize>) -> Result<Self> {
        if h.len() != weight + 1 {
            return Err(Error::InvalidHodge(format!(
                "length: weight {} needs {} numbers, got {}",
                weight,
                weight + 1,
                h.len()
            )));
        }
        if weight > 40 {
            return Err(Error::InvalidHodge(format!("weight {} too large", weight)));
        }
        for l in 0..=weight {
            if h[l] != h[weight - l] {
                return Err(Error::InvalidHodge(format!(
                    "symmetry: h[{}] = {} but h[{}] = {}",
                    l,
                    h[l],
                    weight - l,
                    h[weight - l]
                )));
            }
        }
        Ok(HodgeNumbers { weight, h })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidHodge(e.to_string()))
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// `h^l = h^{l,w-l}`, zero outside `0..=w`.
    pub fn h(&self, l: usize) -> usize {
        self.h.get(l).copied().unwrap_or(0)
    }

    /// Same as [`h`](Self::h) but accepting out-of-range signed indices.
    pub fn hi(&self, l: i64) -> usize {
        if l < 0 {
            0
        } else {
            self.h(l as usize)
        }
    }

    pub fn values(&self) -> &[usize] {
        &self.h
    }

    /// `⌊w/2⌋`.
    pub fn k(&self) -> usize {
        self.weight / 2
    }

    pub fn is_odd(&self) -> bool {
        self.weight % 2 == 1
    }

    /// Rows of block row `i`.
    pub fn block_dim(&self, i: usize) -> usize {
        self.h[self.weight - i]
    }

    pub fn block_size(&self, i: usize, j: usize) -> (usize, usize) {
        (self.block_dim(i), self.block_dim(j))
    }

    pub fn shape(&self) -> BlockShape {
        BlockShape::new((0..=self.weight).map(|i| self.block_dim(i)).collect())
    }

    /// Orthogonality partner of block `(a,b)`: `(w-b, w-a)`.
    pub fn partner(&self, a: usize, b: usize) -> (usize, usize) {
        (self.weight - b, self.weight - a)
    }

    /// `s` in `X_{a,b} = s·X_{w-b,w-a}^t`: `+1` when `a-b` is odd.
    pub fn pair_sign(a: usize, b: usize) -> i64 {
        if (a + b) % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// Whether `(a,b)` carries free entries: it is the lexicographically
    /// smaller block of its pair (or self-paired).
    pub fn is_canonical(&self, a: usize, b: usize) -> bool {
        (a, b) <= self.partner(a, b)
    }

    /// Strictly lower blocks with free entries, in order.
    pub fn canonical_blocks(&self) -> Vec<(usize, usize)> {
        let w = self.weight;
        let mut out = Vec::new();
        for a in 0..=w {
            for b in 0..a {
                if self.is_canonical(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Free entry positions of canonical block `(a,b)`: all entries, or for
    /// a self-paired block the upper triangle (symmetric case, `a-b` odd)
    /// or strict upper triangle (antisymmetric case).
    pub fn free_positions(&self, a: usize, b: usize) -> Vec<(usize, usize)> {
        let (rows, cols) = self.block_size(a, b);
        let mut out = Vec::new();
        let self_paired = self.partner(a, b) == (a, b);
        for r in 0..rows {
            for c in 0..cols {
                let keep = if !self_paired {
                    true
                } else if Self::pair_sign(a, b) == 1 {
                    r <= c
                } else {
                    r < c
                };
                if keep {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Free coordinates of `g⁻` (equivalently of `G⁻`) in variable order.
    pub fn free_variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        for (a, b) in self.canonical_blocks() {
            for (r, c) in self.free_positions(a, b) {
                out.push(Variable::entry(a, b, r, c));
            }
        }
        out.sort();
        out
    }

    /// Free coordinates of the first sub-diagonal `g^{-1,1}`.
    pub fn horizontal_variables(&self) -> Vec<Variable> {
        self.free_variables()
            .into_iter()
            .filter(|v| matches!(v.as_entry(), Some((a, b, _, _)) if a == b + 1))
            .collect()
    }

    /// Free coordinates of blocks with `a - b ∈ {1, 2}`: the coordinates of
    /// the reduced coupled contact system.
    pub fn reduced_variables(&self) -> Vec<Variable> {
        self.free_variables()
            .into_iter()
            .filter(|v| matches!(v.as_entry(), Some((a, b, _, _)) if a - b <= 2))
            .collect()
    }
}

impl fmt::Display for HodgeNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.h.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Sizes and offsets of the block rows of a square block matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockShape {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockShape {
    pub fn new(sizes: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for s in &sizes {
            offsets.push(acc);
            acc += s;
        }
        BlockShape { sizes, offsets }
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Block index and local index of a global row.
    pub fn locate(&self, global: usize) -> (usize, usize) {
        for i in (0..self.sizes.len()).rev() {
            if self.offsets[i] <= global && self.sizes[i] > 0 {
                return (i, global - self.offsets[i]);
            }
        }
        panic!("index {} outside shape", global)
    }
}

/// `Q = Σ_k (-1)^k I[k, w-k]`.
pub fn polarization_matrix(h: &HodgeNumbers) -> BlockMatrix<GaussianRational> {
    let w = h.weight();
    let mut q = BlockMatrix::zeros(h.shape());
    for k in 0..=w {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for r in 0..h.block_dim(k) {
            q.set_entry(k, w - k, r, r, GaussianRational::from_integer(sign));
        }
    }
    q
}

/// Number of free entries of a general element of `g⁻`.
pub fn dimension_of_domain(h: &HodgeNumbers) -> usize {
    h.canonical_blocks()
        .into_iter()
        .map(|(a, b)| h.free_positions(a, b).len())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn hodge(h: &[usize]) -> HodgeNumbers {
        HodgeNumbers::new(h.len() - 1, h.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(HodgeNumbers::new(2, vec![1, 2, 3]).is_err());
        assert!(HodgeNumbers::new(2, vec![1, 2]).is_err());
        let h = HodgeNumbers::from_json(r#"{"weight": 3, "h": [1,2,2,1]}"#).unwrap();
        assert_eq!(h.values(), &[1, 2, 2, 1]);
        let err = HodgeNumbers::from_json(r#"{"weight": 2, "h": [1,2,3]}"#).unwrap_err();
        assert!(err.to_string().contains("symmetry"));
    }

    #[test]
    fn block_sizes() {
        let h = hodge(&[2, 4, 2]);
        assert_eq!(h.block_size(1, 0), (4, 2));
        assert_eq!(h.block_size(2, 1), (2, 4));
        assert_eq!(h.block_size(2, 0), (2, 2));
    }

    #[test]
    fn weight_two_polarization() {
        let h = hodge(&[2, 3, 2]);
        let q = polarization_matrix(&h);
        assert_eq!(q.nonzero_blocks(), vec![(0, 2), (1, 1), (2, 0)]);
        assert_eq!(q.entry(1, 1, 2, 2), &GaussianRational::from_integer(-1));
        assert_eq!(q.entry(0, 2, 1, 1), &GaussianRational::from_integer(1));
        assert!(q.entry(0, 2, 0, 1).is_zero());
    }

    #[test]
    fn weight_three_polarization_is_skew() {
        let h = hodge(&[1, 1, 1, 1]);
        let q = polarization_matrix(&h);
        assert_eq!(q.transpose(), q.negated());
        let signs: Vec<i64> = (0..4).map(|k| q.entry(k, 3 - k, 0, 0).to_i64().unwrap()).collect();
        assert_eq!(signs, vec![1, -1, 1, -1]);
    }

    #[test]
    fn weight_zero() {
        let h = hodge(&[3]);
        assert_eq!(polarization_matrix(&h).matrix(), &crate::linalg::Matrix::identity(3));
        assert_eq!(dimension_of_domain(&h), 0);
    }

    #[test]
    fn domain_dimensions() {
        assert_eq!(dimension_of_domain(&hodge(&[2, 4, 2])), 9);
        assert_eq!(dimension_of_domain(&hodge(&[0, 5, 0])), 0);
        assert_eq!(dimension_of_domain(&hodge(&[2, 2])), 3);
    }
}
