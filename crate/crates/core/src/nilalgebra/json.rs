//! `{"blocks": {"1,0": [["1","0"],["i","1/2"]]}}` block-matrix files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraElement, BlockMatrix};
use crate::error::{Error, Result};
use crate::hodgedomain::HodgeNumbers;
use crate::linalg::{Entry, Matrix};
use crate::scalarforms::{parse_polynomial, GaussianRational, ParseContext};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksJson {
    pub blocks: BTreeMap<String, Vec<Vec<String>>>,
}

/// An integral element candidate: a list of horizontal vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub hodge: HodgeNumbers,
    pub basis: Vec<BlocksJson>,
}

pub fn parse_block_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Invalid(format!("block key `{}` is not of the form \"i,j\"", key));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

impl BlocksJson {
    /// Parses every block with `parse`, checking sizes against `h`.
    pub fn parse_blocks<T: Entry>(
        &self,
        h: &HodgeNumbers,
        parse: impl Fn(&str) -> Result<T>,
    ) -> Result<BTreeMap<(usize, usize), Matrix<T>>> {
        let mut out = BTreeMap::new();
        for (key, rows) in &self.blocks {
            let (i, j) = parse_block_key(key)?;
            if i > h.weight() || j > h.weight() {
                return Err(Error::ShapeMismatch(format!("block ({},{}) beyond weight {}", i, j, h.weight())));
            }
            if i <= j {
                return Err(Error::ShapeMismatch(format!(
                    "block ({},{}) is not strictly lower",
                    i, j
                )));
            }
            let (nr, nc) = h.block_size(i, j);
            if rows.len() != nr || rows.iter().any(|r| r.len() != nc) {
                return Err(Error::ShapeMismatch(format!(
                    "block ({},{}) must be {}x{}",
                    i, j, nr, nc
                )));
            }
            let parsed: Result<Vec<Vec<T>>> = rows
                .iter()
                .map(|r| r.iter().map(|s| parse(s)).collect())
                .collect();
            out.insert((i, j), Matrix::from_rows(parsed?)?);
        }
        Ok(out)
    }

    /// Emits the canonical blocks of `x` that are nonzero.
    pub fn from_matrix<T: Entry + std::fmt::Display>(h: &HodgeNumbers, x: &BlockMatrix<T>) -> Self {
        let mut blocks = BTreeMap::new();
        for (a, b) in h.canonical_blocks() {
            if x.block_is_zero(a, b) {
                continue;
            }
            let m = x.block(a, b);
            let rows = (0..m.rows())
                .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
                .collect();
            blocks.insert(format!("{},{}", a, b), rows);
        }
        BlocksJson { blocks }
    }
}

pub(crate) fn parse_constant(s: &str) -> Result<GaussianRational> {
    let p = parse_polynomial(s, &ParseContext::default())?;
    p.as_constant()
        .ok_or_else(|| Error::Invalid(format!("`{}` is not a constant", s)))
}

/// Writes supplied canonical blocks into `target`, completes derived blocks
/// with `complete`, and checks every supplied derived block against the
/// completion.
pub(crate) fn assemble<T: Entry + std::fmt::Display>(
    h: &HodgeNumbers,
    supplied: &BTreeMap<(usize, usize), Matrix<T>>,
    complete: impl FnOnce(&mut BlockMatrix<T>),
    equal: impl Fn(&T, &T) -> bool,
) -> Result<BlockMatrix<T>> {
    let mut x = BlockMatrix::zeros(h.shape());
    for (&(i, j), m) in supplied {
        if h.is_canonical(i, j) {
            x.set_block(i, j, m);
        }
    }
    complete(&mut x);
    for (&(i, j), m) in supplied {
        let got = x.block(i, j);
        for (r, c, v) in m.entries() {
            if !equal(v, got.get(r, c)) {
                return Err(Error::Orthogonality(format!(
                    "block ({},{}) entry [{},{}] is {} but the free blocks force {}",
                    i,
                    j,
                    r + 1,
                    c + 1,
                    v,
                    got.get(r, c)
                )));
            }
        }
    }
    Ok(x)
}

impl AlgebraElement {
    pub fn from_json(h: &HodgeNumbers, json: &BlocksJson) -> Result<Self> {
        let supplied = json.parse_blocks(h, parse_constant)?;
        let x = assemble(h, &supplied, |x| super::complete_algebra(h, x), |a, b| a == b)?;
        AlgebraElement::from_matrix(h, x)
    }

    pub fn to_json(&self) -> BlocksJson {
        BlocksJson::from_matrix(self.hodge(), self.matrix())
    }
}
