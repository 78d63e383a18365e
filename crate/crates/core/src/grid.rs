//! Binary problem matrix (grid) and its row-major flattening.
//!
//! Rows are bit-packed into `u64` words, column `c` living at bit `c % 64` of word
//! `c / 64`. Padding bits past the last column are always zero, which lets the
//! stepping kernel shift whole words without masking reads.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::XorShift64Star;

/// Largest grid accepted, in cells.
pub const MAX_CELLS: usize = 1 << 20;

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Mask of the valid bits in the last word of a `bits`-long packed row.
pub(crate) fn last_word_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

/// Packed bit sequence, the flattened form of a grid.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 values; anything nonzero counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        bits.iter().map(|&b| b != 0).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(Error::Dimension(format!(
                "vector lengths {} and {} differ",
                self.len, other.len
            )));
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitVector {
            len: self.len,
            words,
        })
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut len = 0;
        let mut words = Vec::new();
        for bit in iter {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        BitVector { len, words }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridFormat {
    /// One line of `0`/`1` characters per row.
    #[default]
    Plain,
    /// Plain PBM (`P1`).
    Pbm,
}

impl FromStr for GridFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(GridFormat::Plain),
            "pbm" => Ok(GridFormat::Pbm),
            other => Err(Error::InvalidArgument(format!(
                "unknown grid format `{other}`"
            ))),
        }
    }
}

/// An `m × n` binary state matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl Grid {
    /// All-zero grid.
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut g = Grid::new(rows, cols)?;
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    g.set(r, c, true);
                }
            }
        }
        Ok(g)
    }

    /// Convenience constructor from rows of `0`/`1` characters.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let mut text = String::new();
        for r in rows {
            text.push_str(r.as_ref());
            text.push('\n');
        }
        parse_plain(&text)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(
            r < self.rows && c < self.cols,
            "cell ({r}, {c}) outside grid"
        );
        self.words[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(
            r < self.rows && c < self.cols,
            "cell ({r}, {c}) outside grid"
        );
        let w = &mut self.words[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Packed words of row `r`.
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Cellwise XOR.
    pub fn xor(&self, other: &Grid) -> Result<Grid> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension(format!(
                "grids {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(Grid {
            words,
            ..self.clone()
        })
    }

    /// Row-major flattening: bit `i` is cell `(i / n, i % n)`.
    pub fn flatten(&self) -> BitVector {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect()
    }

    pub fn unflatten(v: &BitVector, rows: usize, cols: usize) -> Result<Grid> {
        if rows.checked_mul(cols) != Some(v.len()) {
            return Err(Error::Dimension(format!(
                "vector of length {} cannot fill a {rows}x{cols} grid",
                v.len()
            )));
        }
        Grid::from_fn(rows, cols, |r, c| v.get(r * cols + c))
    }

    /// Deterministic pseudo-random grid: each cell in row-major order takes bit 63
    /// of one xorshift64* output.
    pub fn random(rows: usize, cols: usize, seed: u64) -> Result<Grid> {
        let mut rng = XorShift64Star::new(seed);
        Grid::from_fn(rows, cols, |_, _| rng.next_bit())
    }

    pub fn parse(text: &str) -> Result<Grid> {
        let first = text.split_whitespace().next();
        if first.is_some_and(|t| t.starts_with("P1")) {
            parse_pbm(text)
        } else {
            parse_plain(text)
        }
    }

    pub fn serialize(&self, format: GridFormat) -> String {
        let mut out = String::with_capacity(self.rows * (self.cols * 2 + 1) + 16);
        match format {
            GridFormat::Plain => {
                for r in 0..self.rows {
                    out.extend((0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }));
                    out.push('\n');
                }
            }
            GridFormat::Pbm => {
                out.push_str(&format!("P1\n{} {}\n", self.cols, self.rows));
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        if c > 0 {
                            out.push(' ');
                        }
                        out.push(if self.get(r, c) { '1' } else { '0' });
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "grid dimensions must be positive, got {rows}x{cols}"
        )));
    }
    match rows.checked_mul(cols) {
        Some(cells) if cells <= MAX_CELLS => Ok(()),
        _ => Err(Error::Capacity(format!(
            "{rows}x{cols} grid exceeds the {MAX_CELLS}-cell limit"
        ))),
    }
}

fn parse_plain(text: &str) -> Result<Grid> {
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let row = line.trim_end();
        if row.is_empty() {
            continue;
        }
        if let Some(bad) = row.chars().find(|ch| *ch != '0' && *ch != '1') {
            return Err(Error::parse(
                line_no,
                format!("unexpected character {bad:?}"),
            ));
        }
        if let Some(&(_, first)) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(
                    line_no,
                    format!("ragged row: {} cells, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push((line_no, row));
    }
    if rows.is_empty() {
        return Err(Error::parse(1, "empty grid"));
    }
    let mut g =
        Grid::new(rows.len(), rows[0].1.len()).map_err(|e| Error::parse(1, e.to_string()))?;
    for (r, (_, row)) in rows.iter().enumerate() {
        for (c, ch) in row.bytes().enumerate() {
            if ch == b'1' {
                g.set(r, c, true);
            }
        }
    }
    Ok(g)
}

/// Tokens of a plain PBM, with `#` comments stripped, tagged by 1-based line.
fn pbm_tokens(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(idx, line)| {
            let body = line.split('#').next().unwrap_or("");
            body.split_whitespace().map(move |t| (idx + 1, t))
        })
        .collect()
}

fn parse_pbm(text: &str) -> Result<Grid> {
    let tokens = pbm_tokens(text);
    let mut it = tokens.into_iter();
    let (magic_line, magic) = it.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    if magic != "P1" {
        return Err(Error::parse(magic_line, format!("bad magic `{magic}`")));
    }
    let mut dim = |what: &str| -> Result<usize> {
        let (line, tok) = it
            .next()
            .ok_or_else(|| Error::parse(magic_line, format!("missing {what}")))?;
        tok.parse::<usize>()
            .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
    };
    let cols = dim("width")?;
    let rows = dim("height")?;
    let mut g = Grid::new(rows, cols).map_err(|e| Error::parse(magic_line, e.to_string()))?;
    let expected = rows * cols;
    let mut filled = 0usize;
    let mut last_line = magic_line;
    for (line, tok) in it {
        last_line = line;
        for ch in tok.chars() {
            let bit = match ch {
                '0' => false,
                '1' => true,
                other => {
                    return Err(Error::parse(
                        line,
                        format!("unexpected character {other:?}"),
                    ))
                }
            };
            if filled == expected {
                return Err(Error::parse(
                    line,
                    format!("too many pixels, expected {expected}"),
                ));
            }
            if bit {
                g.set(filled / cols, filled % cols, true);
            }
            filled += 1;
        }
    }
    if filled != expected {
        return Err(Error::parse(
            last_line,
            format!("found {filled} pixels, expected {expected}"),
        ));
    }
    Ok(g)
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Grid::parse(s)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize(GridFormat::Plain))
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Grid {}x{}", self.rows, self.cols)?;
        f.write_str(&self.serialize(GridFormat::Plain))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::XorShift64Star;
    use proptest::prelude::*;

    fn sample_input() -> Grid {
        Grid::from_rows(&["0010", "1110", "1011"]).unwrap()
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(
            sample_input().flatten().to_bits(),
            vec![0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1]
        );
        assert_eq!(
            Grid::from_rows(&["1"]).unwrap().flatten().to_bits(),
            vec![1]
        );
        assert_eq!(Grid::new(2, 3).unwrap().flatten().to_bits(), vec![0; 6]);
    }

    #[test]
    fn unflatten_examples() {
        let v = BitVector::from_bits(&[0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 1]);
        assert_eq!(Grid::unflatten(&v, 3, 4).unwrap(), sample_input());
        let one = BitVector::from_bits(&[1]);
        assert_eq!(
            Grid::unflatten(&one, 1, 1).unwrap(),
            Grid::from_rows(&["1"]).unwrap()
        );
        let short = BitVector::from_bits(&[0, 1, 1, 0]);
        assert!(matches!(
            Grid::unflatten(&short, 4, 2),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(Grid::parse("0010\n1110\n1011\n").unwrap(), sample_input());
        assert_eq!(
            Grid::parse("P1\n# c\n1 1\n1\n").unwrap(),
            Grid::from_rows(&["1"]).unwrap()
        );
        match Grid::parse("01\n0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Grid::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(Grid::parse("\n\n"), Err(Error::Parse { .. })));
        match Grid::parse("01\n0x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        // token count mismatch
        assert!(matches!(
            Grid::parse("P1\n2 2\n1 0 1\n"),
            Err(Error::Parse { .. })
        ));
        match Grid::parse("P1\n2 1\n1 0\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Grid::parse("P1\n0 3\n"), Err(Error::Parse { .. })));
        assert!(matches!(Grid::parse("P1\nx 3\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            Grid::parse("P1\n2 2\n1 0 2 1\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn parse_tolerates_crlf_and_trailing_blank_lines() {
        assert_eq!(
            Grid::parse("0010\r\n1110\r\n1011\r\n\n").unwrap(),
            sample_input()
        );
    }

    #[test]
    fn serialize_examples() {
        let out = Grid::from_rows(&["1011", "0010", "1101"]).unwrap();
        assert_eq!(out.serialize(GridFormat::Plain), "1011\n0010\n1101\n");
        let zero = Grid::new(1, 1).unwrap();
        assert_eq!(zero.serialize(GridFormat::Plain), "0\n");
        assert_eq!(zero.serialize(GridFormat::Pbm), "P1\n1 1\n0\n");
        assert_eq!(
            sample_input().serialize(GridFormat::Pbm),
            "P1\n4 3\n0 0 1 0\n1 1 1 0\n1 0 1 1\n"
        );
    }

    #[test]
    fn capacity_and_zero_dims() {
        assert!(matches!(Grid::new(0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(Grid::new(1025, 1024), Err(Error::Capacity(_))));
        assert!(Grid::new(1024, 1024).is_ok());
        assert!(matches!(Grid::new(usize::MAX, 2), Err(Error::Capacity(_))));
    }

    #[test]
    fn random_grid_matches_generator() {
        // Seed 1 bit-63 sequence from the reference run: 0, 1, 1, 0.
        let g = Grid::random(2, 2, 1).unwrap();
        assert_eq!(g.flatten().to_bits(), vec![0, 1, 1, 0]);
        assert_eq!(Grid::random(2, 2, 1).unwrap(), g);
        for seed in [0u64, 1, 42, 7, u64::MAX] {
            let first = XorShift64Star::new(seed).next_u64() >> 63;
            assert_eq!(Grid::random(1, 1, seed).unwrap().get(0, 0) as u64, first);
        }
    }

    #[test]
    fn padding_stays_zero_across_words() {
        let g = Grid::random(3, 130, 9).unwrap();
        for r in 0..3 {
            assert_eq!(g.row_words(r)[2] & !last_word_mask(130), 0);
        }
        let rt = Grid::parse(&g.serialize(GridFormat::Plain)).unwrap();
        assert_eq!(rt, g);
    }

    #[test]
    fn exhaustive_roundtrip_3x3() {
        for bits in 0u32..512 {
            let g = Grid::from_fn(3, 3, |r, c| bits >> (r * 3 + c) & 1 == 1).unwrap();
            for fmt in [GridFormat::Plain, GridFormat::Pbm] {
                assert_eq!(Grid::parse(&g.serialize(fmt)).unwrap(), g);
            }
            assert_eq!(Grid::unflatten(&g.flatten(), 3, 3).unwrap(), g);
        }
    }

    proptest! {
        #[test]
        fn roundtrip_up_to_8x8(m in 1usize..=8, n in 1usize..=8, seed in any::<u64>()) {
            let g = Grid::random(m, n, seed).unwrap();
            prop_assert_eq!(&Grid::parse(&g.serialize(GridFormat::Plain)).unwrap(), &g);
            prop_assert_eq!(&Grid::parse(&g.serialize(GridFormat::Pbm)).unwrap(), &g);
            let v = g.flatten();
            prop_assert_eq!(v.len(), m * n);
            prop_assert_eq!(&Grid::unflatten(&v, m, n).unwrap(), &g);
        }
    }
}
