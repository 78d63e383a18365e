//! The `mn × mn` rule matrix of a linear rule on an `m × n` grid.
//!
//! Row `i` is the target cell, column `j` the source cell: entry `(i, j)` is 1 when
//! the next state of cell `i` depends on the current state of cell `j`. Cells are
//! numbered row-major from 0, so evolving a grid is `matvec(M, flatten(grid))`.

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::grid::MAX_CELLS;
use crate::rules::{Fundamental, RuleNumber};

/// Largest rule matrix dimension built (a 16384² matrix is 32 MiB).
pub const MAX_MATRIX_DIM: usize = 1 << 14;

fn check_dims(rows: usize, cols: usize) -> Result<usize> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "grid dimensions must be positive, got {rows}x{cols}"
        )));
    }
    match rows.checked_mul(cols) {
        Some(dim) if dim <= MAX_MATRIX_DIM.min(MAX_CELLS) => Ok(dim),
        _ => Err(Error::Capacity(format!(
            "{rows}x{cols} grid needs a rule matrix beyond dim {MAX_MATRIX_DIM}"
        ))),
    }
}

pub fn build(rule: RuleNumber, rows: usize, cols: usize) -> Result<Gf2Matrix> {
    let dim = check_dims(rows, cols)?;
    let mut m = Gf2Matrix::zero(dim);
    for f in rule.fundamentals() {
        add_fundamental(&mut m, f, rows, cols);
    }
    Ok(m)
}

/// Toggles the support of fundamental `f` into `m`.
fn add_fundamental(m: &mut Gf2Matrix, f: Fundamental, rows: usize, cols: usize) {
    let o = f.offset();
    for r in 0..rows {
        let Some(sr) = r.checked_add_signed(o.dr as isize).filter(|&x| x < rows) else {
            continue;
        };
        for c in 0..cols {
            let Some(sc) = c.checked_add_signed(o.dc as isize).filter(|&x| x < cols) else {
                continue;
            };
            m.toggle(r * cols + c, sr * cols + sc);
        }
    }
}

/// Rule matrices of all nine fundamentals, in ascending weight order.
pub fn fundamental_matrices(rows: usize, cols: usize) -> Result<Vec<(Fundamental, Gf2Matrix)>> {
    Fundamental::ALL
        .into_iter()
        .map(|f| Ok((f, build(f.as_rule(), rows, cols)?)))
        .collect()
}

/// True when no two distinct fundamental matrices share a one entry, so joining
/// fundamentals never cancels an edge.
pub fn fundamental_supports_disjoint(rows: usize, cols: usize) -> Result<bool> {
    let mats = fundamental_matrices(rows, cols)?;
    for (a, (_, ma)) in mats.iter().enumerate() {
        for (_, mb) in &mats[a + 1..] {
            if !ma.and(mb)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
