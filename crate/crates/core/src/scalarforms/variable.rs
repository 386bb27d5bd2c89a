use std::fmt;

/// A named coordinate.
///
/// The derived order is the total order used everywhere: parameters first
/// (by index), then the contact duals `y<n>`, then the contact height `z`,
/// then block entries graded by `(block_row, block_col, row, col)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    /// Free parameter `x<n>`, `n ≥ 1`. Also the contact coordinate `x_n`.
    Param(u32),
    /// Contact coordinate `y<n>`, `n ≥ 1`.
    Dual(u32),
    /// Contact coordinate `z`.
    Height,
    /// Entry `(row, col)` (0-based) of block `(block_row, block_col)` of a
    /// unipotent block matrix; printed as `Y[i,j][r,c]` with 1-based entry
    /// indices.
    Entry {
        block_row: u8,
        block_col: u8,
        row: u16,
        col: u16,
    },
}

impl Variable {
    pub fn entry(block_row: usize, block_col: usize, row: usize, col: usize) -> Self {
        Variable::Entry {
            block_row: block_row as u8,
            block_col: block_col as u8,
            row: row as u16,
            col: col as u16,
        }
    }

    /// `(block_row, block_col, row, col)` for entry variables.
    pub fn as_entry(&self) -> Option<(usize, usize, usize, usize)> {
        match *self {
            Variable::Entry {
                block_row,
                block_col,
                row,
                col,
            } => Some((block_row as usize, block_col as usize, row as usize, col as usize)),
            _ => None,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Param(n) => write!(f, "x{}", n),
            Variable::Dual(n) => write!(f, "y{}", n),
            Variable::Height => write!(f, "z"),
            Variable::Entry {
                block_row,
                block_col,
                row,
                col,
            } => write!(f, "Y[{},{}][{},{}]", block_row, block_col, row + 1, col + 1),
        }
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
