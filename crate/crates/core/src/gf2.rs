//! Dense square matrices over GF(2), rows bit-packed into `u64` words.
//!
//! Addition is entrywise XOR, which is also the join of two graphs: an edge
//! present in both operands cancels.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{words_for, BitVector, WORD_BITS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    dim: usize,
    stride: usize,
    words: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zero(dim: usize) -> Self {
        let stride = words_for(dim);
        Self {
            dim,
            stride,
            words: vec![0; dim * stride],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` characters.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zero(dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "unexpected matrix entry {other:?}"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.dim && j < self.dim,
            "entry ({i}, {j}) outside dim {}",
            self.dim
        );
        self.words[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.dim && j < self.dim,
            "entry ({i}, {j}) outside dim {}",
            self.dim
        );
        let w = &mut self.words[i * self.stride + j / WORD_BITS];
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        assert!(
            i < self.dim && j < self.dim,
            "entry ({i}, {j}) outside dim {}",
            self.dim
        );
        self.words[i * self.stride + j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    fn check_same_dim(&self, other: &Gf2Matrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "matrix dims {} and {} differ",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Entrywise XOR (join).
    pub fn xor(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &Gf2Matrix) -> Result<()> {
        self.check_same_dim(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// Entrywise AND, the common support of two matrices.
    pub fn and(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        self.check_same_dim(other)?;
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut out = Gf2Matrix::zero(self.dim);
        for (i, j) in self.ones() {
            out.set(j, i, true);
        }
        out
    }

    /// `self · v` over GF(2): bit `i` is the parity of `row_i AND v`.
    pub fn matvec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} against matrix of dim {}",
                v.len(),
                self.dim
            )));
        }
        let mut out = BitVector::zeros(self.dim);
        let vw = v.words();
        for i in 0..self.dim {
            let parity = self
                .row_words(i)
                .iter()
                .zip(vw)
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out.words_mut()[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
            }
        }
        Ok(out)
    }

    /// Matrix product over GF(2). Row `i` of the result is the XOR of the rows of
    /// `other` selected by the ones of row `i` of `self`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        self.check_same_dim(other)?;
        let mut out = Gf2Matrix::zero(self.dim);
        for i in 0..self.dim {
            for (wi, &word) in self.row_words(i).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let k = wi * WORD_BITS + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let (dst, src) = (i * out.stride, k * other.stride);
                    for x in 0..out.stride {
                        out.words[dst + x] ^= other.words[src + x];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self^t` by binary exponentiation; `t = 0` gives the identity.
    pub fn pow(&self, mut t: u64) -> Gf2Matrix {
        let mut result = Gf2Matrix::identity(self.dim);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = result.mul(&base).expect("same dim");
            }
            t >>= 1;
            if t > 0 {
                base = base.mul(&base).expect("same dim");
            }
        }
        result
    }

    /// Row rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.dim).map(|i| self.row_words(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.dim {
            let (w, mask) = (col / WORD_BITS, 1u64 << (col % WORD_BITS));
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            for row in tail.iter_mut().filter(|row| row[w] & mask != 0) {
                for (a, b) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                    *a ^= b;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim
    }

    /// Number of one entries.
    pub fn popcount(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_popcount(&self, i: usize) -> usize {
        self.row_words(i)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions of one entries in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim).flat_map(move |i| {
            self.row_words(i)
                .iter()
                .enumerate()
                .flat_map(move |(wi, &word)| BitIter(word).map(move |b| (i, wi * WORD_BITS + b)))
        })
    }

    pub fn to_text(&self, format: MatrixFormat, header: &MatrixHeader) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{header}");
        match format {
            MatrixFormat::Dense => {
                for i in 0..self.dim {
                    out.extend((0..self.dim).map(|j| if self.get(i, j) { '1' } else { '0' }));
                    out.push('\n');
                }
            }
            MatrixFormat::Coords => {
                for (i, j) in self.ones() {
                    let _ = writeln!(out, "{i} {j}");
                }
            }
        }
        out
    }

    /// Parses one matrix in the text format written by [`Gf2Matrix::to_text`].
    /// The format (dense or coords) is inferred from the body.
    pub fn parse_text(text: &str) -> Result<(MatrixHeader, Gf2Matrix)> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, htext) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty matrix text"))?;
        let header: MatrixHeader = htext.parse().map_err(|e: Error| match e {
            Error::Parse { message, .. } => Error::parse(hline, message),
            other => other,
        })?;
        let dim = header.dim();
        let mut m = Gf2Matrix::zero(dim);
        let body: Vec<(usize, &str)> = lines.collect();
        let coords = body.is_empty() || body.iter().any(|(_, l)| l.contains(char::is_whitespace));
        if coords {
            for (line, l) in body {
                let mut parts = l.split_whitespace().map(|t| t.parse::<usize>());
                match (parts.next(), parts.next(), parts.next()) {
                    (Some(Ok(i)), Some(Ok(j)), None) if i < dim && j < dim => m.set(i, j, true),
                    _ => return Err(Error::parse(line, format!("bad coordinate line `{l}`"))),
                }
            }
        } else {
            if body.len() != dim {
                return Err(Error::parse(
                    body.last().map_or(hline, |b| b.0),
                    format!("expected {dim} rows, found {}", body.len()),
                ));
            }
            for (i, (line, l)) in body.into_iter().enumerate() {
                if l.len() != dim {
                    return Err(Error::parse(
                        line,
                        format!("row has {} entries, expected {dim}", l.len()),
                    ));
                }
                for (j, ch) in l.chars().enumerate() {
                    match ch {
                        '0' => {}
                        '1' => m.set(i, j, true),
                        other => {
                            return Err(Error::parse(
                                line,
                                format!("unexpected character {other:?}"),
                            ))
                        }
                    }
                }
            }
        }
        Ok((header, m))
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix dim {}", self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// Padding bits must stay zero for popcount and equality to be meaningful.
#[cfg(test)]
impl Gf2Matrix {
    fn padding_is_clean(&self) -> bool {
        let mask = crate::grid::last_word_mask(self.dim);
        self.dim == 0 || (0..self.dim).all(|i| self.row_words(i)[self.stride - 1] & !mask == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixFormat {
    #[default]
    Dense,
    Coords,
}

impl FromStr for MatrixFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(MatrixFormat::Dense),
            "coords" => Ok(MatrixFormat::Coords),
            other => Err(Error::InvalidArgument(format!(
                "unknown matrix format `{other}`"
            ))),
        }
    }
}

/// First line of the matrix text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixHeader {
    /// `# rule <R> rows <m> cols <n> dim <mn>`
    Rule { rule: u16, rows: usize, cols: usize },
    /// `# dim <d>`
    Raw { dim: usize },
}

impl MatrixHeader {
    pub fn dim(&self) -> usize {
        match *self {
            MatrixHeader::Rule { rows, cols, .. } => rows * cols,
            MatrixHeader::Raw { dim } => dim,
        }
    }
}

impl fmt::Display for MatrixHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MatrixHeader::Rule { rule, rows, cols } => {
                write!(
                    f,
                    "# rule {rule} rows {rows} cols {cols} dim {}",
                    rows * cols
                )
            }
            MatrixHeader::Raw { dim } => write!(f, "# dim {dim}"),
        }
    }
}

impl FromStr for MatrixHeader {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(1, format!("bad matrix header `{s}`"));
        let toks: Vec<&str> = s.split_whitespace().collect();
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match toks.as_slice() {
            ["#", "dim", d] => Ok(MatrixHeader::Raw { dim: num(d)? }),
            ["#", "rule", r, "rows", m, "cols", n, "dim", d] => {
                let (rule, rows, cols, dim) = (num(r)?, num(m)?, num(n)?, num(d)?);
                if rule > 511 || rows.checked_mul(cols) != Some(dim) {
                    return Err(bad());
                }
                Ok(MatrixHeader::Rule {
                    rule: rule as u16,
                    rows,
                    cols,
                })
            }
            _ => Err(bad()),
        }
    }
}
