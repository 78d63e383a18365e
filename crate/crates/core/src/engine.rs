//! Direct evolution of a grid under a linear rule with null boundary.
//!
//! Each output row is the XOR of up to nine source rows (the row above, the row
//! itself, the row below), each shifted by its column offset. Rows are packed
//! into words, so one shift-and-XOR handles 64 cells at once. Neighbors that fall
//! outside the grid read as 0.

use crate::grid::{last_word_mask, Grid};
use crate::rules::RuleNumber;

/// Boundary handling. Only the null boundary is modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryCondition {
    #[default]
    Null,
}

/// One generation of `rule` applied to every cell of `grid`.
pub fn step(grid: &Grid, rule: RuleNumber) -> Grid {
    let (rows, cols) = (grid.rows(), grid.cols());
    let mask = last_word_mask(cols);
    let mut out = Grid::new(rows, cols).expect("dimensions already validated");
    let taps: Vec<(i8, i8)> = rule
        .fundamentals()
        .map(|f| {
            let o = f.offset();
            (o.dr, o.dc)
        })
        .collect();

    for r in 0..rows {
        let dst = out.row_words_mut(r);
        for &(dr, dc) in &taps {
            let Some(sr) = r.checked_add_signed(dr as isize).filter(|&sr| sr < rows) else {
                continue;
            };
            xor_shifted(dst, grid.row_words(sr), dc);
        }
        if let Some(last) = dst.last_mut() {
            *last &= mask;
        }
    }
    out
}

/// `dst[c] ^= src[c + dc]` for every column `c`, with zeros shifted in at the
/// edges. May set padding bits of the last word when `dc < 0`; the caller masks.
fn xor_shifted(dst: &mut [u64], src: &[u64], dc: i8) {
    let n = src.len();
    match dc {
        0 => {
            for (d, s) in dst.iter_mut().zip(src) {
                *d ^= s;
            }
        }
        1 => {
            for w in 0..n {
                let carry = if w + 1 < n { src[w + 1] << 63 } else { 0 };
                dst[w] ^= (src[w] >> 1) | carry;
            }
        }
        -1 => {
            for w in 0..n {
                let carry = if w > 0 { src[w - 1] >> 63 } else { 0 };
                dst[w] ^= (src[w] << 1) | carry;
            }
        }
        _ => unreachable!("column offsets lie in -1..=1"),
    }
}

/// The trajectory `[g, step(g), step(step(g)), ...]` of length `steps + 1`.
pub fn evolve(grid: &Grid, rule: RuleNumber, steps: usize) -> Vec<Grid> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(grid.clone());
    for _ in 0..steps {
        let next = step(out.last().expect("non-empty"), rule);
        out.push(next);
    }
    out
}

/// Final grid after `steps` generations.
pub fn evolve_final(grid: &Grid, rule: RuleNumber, steps: usize) -> Grid {
    (0..steps).fold(grid.clone(), |g, _| step(&g, rule))
}
