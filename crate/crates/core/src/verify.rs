//! Machine checks tying the three models together.
//!
//! Each suite returns a [`VerificationReport`]; a failing case is recorded as data
//! rather than returned as an error. Suites run sequentially in a fixed order, so
//! the same inputs always produce a byte-identical report.

use std::fmt;
use std::fmt::Write as _;

use crate::engine::step;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::graph::RuleGraph;
use crate::grid::Grid;
use crate::rulematrix::{build, fundamental_matrices, fundamental_supports_disjoint};
use crate::rules::{Fundamental, RuleNumber};

/// Printed matrices that the construction reproduces exactly.
const PRINTED: &str = include_str!("../golden/printed.txt");
/// Printed matrices known to contain transcription errors.
const ERRATA: &str = include_str!("../golden/errata.txt");

/// `(rule, rows, cols, entries)`: the entries `(i, j)` where an erratum differs
/// from the constructed matrix.
type Erratum = (u16, usize, usize, &'static [(usize, usize)]);

const DOCUMENTED_ERRATA: &[Erratum] = &[
    (
        4,
        3,
        4,
        &[
            (0, 5),
            (1, 6),
            (2, 5),
            (2, 7),
            (3, 6),
            (4, 7),
            (4, 9),
            (5, 10),
            (6, 9),
            (6, 11),
            (7, 10),
            (8, 11),
        ],
    ),
    (290, 2, 2, &[(2, 3)]),
];

/// Multiplier mixing the rule number into per-trial seeds.
const RULE_SEED_MIX: u64 = 0x0100_0193;

/// Largest grid the exhaustive equivalence suite enumerates, in cells.
pub const MAX_EXHAUSTIVE_CELLS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub case_id: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, got {}",
            self.case_id, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite_name: String,
    pub cases_run: usize,
    /// Unexpected mismatches. Empty iff the suite passed.
    pub failures: Vec<Failure>,
    /// Documented divergences that were observed exactly as documented.
    pub expected_divergences: Vec<Failure>,
    pub seed: u64,
    pub dims_tested: Vec<(usize, usize)>,
}

impl VerificationReport {
    fn new(suite_name: &str, seed: u64, dims_tested: Vec<(usize, usize)>) -> Self {
        Self {
            suite_name: suite_name.to_string(),
            cases_run: 0,
            failures: Vec::new(),
            expected_divergences: Vec::new(),
            seed,
            dims_tested,
        }
    }

    fn check(
        &mut self,
        ok: bool,
        case_id: impl FnOnce() -> String,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.cases_run += 1;
        if !ok {
            self.failures.push(Failure {
                case_id: case_id(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let dims: Vec<String> = self
            .dims_tested
            .iter()
            .map(|(m, n)| format!("{m}x{n}"))
            .collect();
        let _ = writeln!(out, "suite: {}", self.suite_name);
        let _ = writeln!(out, "dims: {}", dims.join(" "));
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "cases run: {}", self.cases_run);
        if !self.expected_divergences.is_empty() {
            let _ = writeln!(
                out,
                "expected divergences: {}",
                self.expected_divergences.len()
            );
            for d in &self.expected_divergences {
                let _ = writeln!(out, "  {d}");
            }
        }
        let _ = writeln!(out, "failures: {}", self.failures.len());
        for f in &self.failures {
            let _ = writeln!(out, "  FAIL {f}");
        }
        let _ = writeln!(
            out,
            "result: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn bits(v: &crate::grid::BitVector) -> String {
    v.to_bits().iter().map(|b| char::from(b'0' + b)).collect()
}

/// Seed of the random grid used for `rule` in trial `trial`.
pub fn trial_seed(seed: u64, trial: u64, rule: RuleNumber) -> u64 {
    seed ^ trial ^ (rule.value() as u64).wrapping_mul(RULE_SEED_MIX)
}

fn check_equivalence(
    report: &mut VerificationReport,
    matrix: &Gf2Matrix,
    grid: &Grid,
    rule: RuleNumber,
    case: impl FnOnce() -> String,
) {
    let direct = step(grid, rule).flatten();
    let via_matrix = matrix
        .matvec(&grid.flatten())
        .expect("matrix dim matches grid");
    let ok = direct == via_matrix;
    report.check(
        ok,
        case,
        format_args!("{}", bits(&direct)),
        format_args!("{}", bits(&via_matrix)),
    );
}

/// Matrix path against direct stepping on `trials` pseudo-random grids per rule.
pub fn verify_equivalence(
    rows: usize,
    cols: usize,
    rules: &[RuleNumber],
    trials: u64,
    seed: u64,
) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "at least one trial is required".into(),
        ));
    }
    let mut report = VerificationReport::new("equivalence", seed, vec![(rows, cols)]);
    for &rule in rules {
        let matrix = build(rule, rows, cols)?;
        for trial in 0..trials {
            let grid_seed = trial_seed(seed, trial, rule);
            let grid = Grid::random(rows, cols, grid_seed)?;
            check_equivalence(&mut report, &matrix, &grid, rule, || {
                format!("rule {rule} trial {trial} grid-seed {grid_seed:#x}")
            });
        }
    }
    Ok(report)
}

/// Matrix path against direct stepping on every grid of the given size.
pub fn verify_equivalence_exhaustive(
    rows: usize,
    cols: usize,
    rules: &[RuleNumber],
) -> Result<VerificationReport> {
    let cells = rows.saturating_mul(cols);
    if cells > MAX_EXHAUSTIVE_CELLS {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration limited to {MAX_EXHAUSTIVE_CELLS} cells, got {rows}x{cols}"
        )));
    }
    let mut report = VerificationReport::new("equivalence-exhaustive", 0, vec![(rows, cols)]);
    let grids: Vec<Grid> = (0u64..1 << cells)
        .map(|code| Grid::from_fn(rows, cols, |r, c| code >> (r * cols + c) & 1 == 1))
        .collect::<Result<_>>()?;
    for &rule in rules {
        let matrix = build(rule, rows, cols)?;
        for (code, grid) in grids.iter().enumerate() {
            check_equivalence(&mut report, &matrix, grid, rule, || {
                format!("rule {rule} grid {code:#x}")
            });
        }
    }
    Ok(report)
}

fn edge_list(pairs: &[(usize, usize)]) -> String {
    let items: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    format!("{{{}}}", items.join(", "))
}

fn expected_edges(
    rows: usize,
    cols: usize,
    keep: impl Fn(usize, usize) -> Option<(isize, isize)>,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if let Some((dr, dc)) = keep(r, c) {
                let (tr, tc) = ((r as isize + dr) as usize, (c as isize + dc) as usize);
                out.push((r * cols + c, tr * cols + tc));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Structural statements about the graphs of the basic rules, written out
/// independently of the offset table, plus the four transpose pairs.
pub fn verify_theorems(rows: usize, cols: usize) -> Result<VerificationReport> {
    let (m, n) = (rows, cols);
    let dim = m * n;
    let mut report = VerificationReport::new("theorems", 0, vec![(m, n)]);
    let graph = |w: u32| -> Result<RuleGraph> { RuleGraph::colored(RuleNumber::new(w)?, m, n) };

    // Rule 1: a self-loop at every vertex and nothing else.
    let g1 = graph(1)?;
    let s1 = g1.stats();
    let loops: Vec<(usize, usize)> = (0..dim).map(|i| (i, i)).collect();
    report.check(
        s1.self_loop_count == dim,
        || "rule 1 self-loop count".into(),
        dim,
        s1.self_loop_count,
    );
    report.check(
        g1.edge_pairs() == loops,
        || "rule 1 edges are exactly the self-loops".into(),
        edge_list(&loops),
        edge_list(&g1.edge_pairs()),
    );

    // Rule 2: i -> i+1 within a row; m weak components of n vertices.
    let g2 = graph(2)?;
    let e2 = expected_edges(m, n, |_, c| (c + 1 < n).then_some((0, 1)));
    report.check(
        g2.edge_pairs() == e2,
        || "rule 2 edge set".into(),
        edge_list(&e2),
        edge_list(&g2.edge_pairs()),
    );
    let sizes2 = g2.stats().component_sizes();
    report.check(
        sizes2 == vec![n; m],
        || "rule 2 components".into(),
        format!("{m} of size {n}"),
        format!("{sizes2:?}"),
    );

    // Rule 4: i -> i+n+1 off the last row and column.
    let g4 = graph(4)?;
    let e4 = expected_edges(m, n, |r, c| (r + 1 < m && c + 1 < n).then_some((1, 1)));
    report.check(
        g4.edge_pairs() == e4,
        || "rule 4 edge set".into(),
        edge_list(&e4),
        edge_list(&g4.edge_pairs()),
    );
    if m >= 2 && n >= 2 {
        let s4 = g4.stats();
        let iso = vec![n - 1, (m - 1) * n];
        report.check(
            s4.isolated == iso,
            || "rule 4 isolated vertices".into(),
            format!("{iso:?}"),
            format!("{:?}", s4.isolated),
        );
        let count = s4.weak_components.len();
        report.check(
            count == m + n - 1,
            || "rule 4 component count".into(),
            m + n - 1,
            count,
        );
    }

    // Rule 8: i -> i+n for every vertex above the last row; n components of m.
    let g8 = graph(8)?;
    let e8: Vec<(usize, usize)> = (0..n * (m - 1)).map(|i| (i, i + n)).collect();
    report.check(
        g8.edge_pairs() == e8,
        || "rule 8 edge set".into(),
        edge_list(&e8),
        edge_list(&g8.edge_pairs()),
    );
    let sizes8 = g8.stats().component_sizes();
    report.check(
        sizes8 == vec![m; n],
        || "rule 8 components".into(),
        format!("{n} of size {m}"),
        format!("{sizes8:?}"),
    );

    // Rule 16: i -> i+n-1 off the last row and first column.
    let g16 = graph(16)?;
    let e16 = expected_edges(m, n, |r, c| (r + 1 < m && c > 0).then_some((1, -1)));
    report.check(
        g16.edge_pairs() == e16,
        || "rule 16 edge set".into(),
        edge_list(&e16),
        edge_list(&g16.edge_pairs()),
    );
    if m >= 2 && n >= 2 {
        let iso = vec![0, dim - 1];
        let got = g16.stats().isolated;
        report.check(
            got == iso,
            || "rule 16 isolated vertices".into(),
            format!("{iso:?}"),
            format!("{got:?}"),
        );
    }

    // 32, 64, 128, 256 are 2, 4, 8, 16 with every edge reversed.
    for f in Fundamental::BASIC.into_iter().skip(1) {
        let p = f.transpose_partner();
        let a = build(f.as_rule(), m, n)?;
        let b = build(p.as_rule(), m, n)?;
        report.check(
            a.transpose() == b,
            || format!("rule {p} matrix is transpose of rule {f}"),
            "transpose",
            "mismatch",
        );
        let ga = graph(f.weight() as u32)?.uncolored().reversed();
        let gb = graph(p.weight() as u32)?.uncolored();
        report.check(
            ga == gb,
            || format!("rule {p} graph is rule {f} reversed"),
            edge_list(&ga.edge_pairs()),
            edge_list(&gb.edge_pairs()),
        );
    }
    Ok(report)
}

/// Decomposition, popcount additivity, disjoint supports and transpose pairs for
/// all 512 rules.
pub fn verify_join_laws(rows: usize, cols: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("join", 0, vec![(rows, cols)]);
    let funds = fundamental_matrices(rows, cols)?;
    let dim = rows * cols;
    for rule in RuleNumber::all() {
        let built = build(rule, rows, cols)?;
        let mut joined = Gf2Matrix::zero(dim);
        let mut pop_sum = 0;
        for (f, m) in &funds {
            if rule.contains(*f) {
                joined.xor_assign(m)?;
                pop_sum += m.popcount();
            }
        }
        report.check(
            built == joined,
            || format!("rule {rule} equals join of its fundamentals"),
            "equal",
            "different",
        );
        let pop = built.popcount();
        report.check(
            pop == pop_sum,
            || format!("rule {rule} popcount additivity"),
            pop_sum,
            pop,
        );
    }
    let disjoint = fundamental_supports_disjoint(rows, cols)?;
    report.check(
        disjoint,
        || "fundamental supports pairwise disjoint".into(),
        true,
        disjoint,
    );
    for f in Fundamental::BASIC.into_iter().skip(1) {
        let p = f.transpose_partner();
        let ok = funds[f.bit() as usize].1.transpose() == funds[p.bit() as usize].1;
        report.check(
            ok,
            || format!("rule {p} = transpose of rule {f}"),
            "transpose",
            "mismatch",
        );
    }
    Ok(report)
}

/// A printed matrix from the embedded corpus.
#[derive(Debug, Clone)]
pub struct GoldenMatrix {
    pub rule: RuleNumber,
    pub rows: usize,
    pub cols: usize,
    pub matrix: Gf2Matrix,
}

fn parse_corpus(text: &str) -> Result<Vec<GoldenMatrix>> {
    let mut blocks: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') {
            blocks.push(String::new());
        }
        if let Some(b) = blocks.last_mut() {
            b.push_str(line);
            b.push('\n');
        }
    }
    blocks
        .iter()
        .map(|b| {
            let (header, matrix) = Gf2Matrix::parse_text(b)?;
            match header {
                crate::gf2::MatrixHeader::Rule { rule, rows, cols } => Ok(GoldenMatrix {
                    rule: RuleNumber::new(rule as u32)?,
                    rows,
                    cols,
                    matrix,
                }),
                other => Err(Error::InvalidArgument(format!(
                    "golden entry without rule header: {other}"
                ))),
            }
        })
        .collect()
}

pub fn golden_corpus() -> Vec<GoldenMatrix> {
    parse_corpus(PRINTED).expect("embedded corpus parses")
}

pub fn golden_errata() -> Vec<GoldenMatrix> {
    parse_corpus(ERRATA).expect("embedded errata parse")
}

fn diff_entries(a: &Gf2Matrix, b: &Gf2Matrix) -> Vec<(usize, usize)> {
    let mut d: Vec<(usize, usize)> = a.xor(b).expect("same dim").ones().collect();
    d.sort_unstable();
    d
}

fn coord_list(entries: &[(usize, usize)]) -> String {
    let items: Vec<String> = entries.iter().map(|(i, j)| format!("({i},{j})")).collect();
    items.join(" ")
}

/// Compares the construction against every embedded printed matrix. Known
/// errata must differ in exactly their documented entries.
pub fn verify_golden_corpus() -> Result<VerificationReport> {
    let corpus = golden_corpus();
    let errata = golden_errata();
    let mut dims: Vec<(usize, usize)> = corpus
        .iter()
        .chain(&errata)
        .map(|g| (g.rows, g.cols))
        .collect();
    dims.sort_unstable();
    dims.dedup();
    let mut report = VerificationReport::new("golden", 0, dims);

    for g in &corpus {
        let built = build(g.rule, g.rows, g.cols)?;
        let diff = diff_entries(&built, &g.matrix);
        report.check(
            diff.is_empty(),
            || format!("rule {} at {}x{}", g.rule, g.rows, g.cols),
            "printed matrix",
            format_args!("differs at {}", coord_list(&diff)),
        );
    }

    for g in &errata {
        let built = build(g.rule, g.rows, g.cols)?;
        let diff = diff_entries(&built, &g.matrix);
        let documented = DOCUMENTED_ERRATA
            .iter()
            .find(|(r, m, n, _)| *r == g.rule.value() && (*m, *n) == (g.rows, g.cols))
            .map(|e| e.3.to_vec());
        let case = format!("rule {} at {}x{} (printed erratum)", g.rule, g.rows, g.cols);
        report.cases_run += 1;
        match documented {
            Some(expected) if expected == diff => report.expected_divergences.push(Failure {
                case_id: case,
                expected: format!("divergence at {}", coord_list(&expected)),
                actual: format!("divergence at {}", coord_list(&diff)),
            }),
            other => report.failures.push(Failure {
                case_id: case,
                expected: other.map_or("no documented divergence".into(), |e| {
                    format!("divergence at {}", coord_list(&e))
                }),
                actual: format!("divergence at {}", coord_list(&diff)),
            }),
        }
    }
    Ok(report)
}
