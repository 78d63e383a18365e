//! Rule matrices read as directed graphs.
//!
//! Vertex `i` is grid cell `i` (row-major, 0-based); edge `i -> j` means the next
//! state of cell `i` depends on cell `j`. In a colored graph each edge carries the
//! fundamental rule that produced it. Fundamental supports never overlap, so the
//! color of an edge is always unique.

use std::fmt;
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;

use crate::error::Result;
use crate::gf2::Gf2Matrix;
use crate::rulematrix;
use crate::rules::{Fundamental, RuleNumber};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeColor {
    Uncolored,
    Fundamental(Fundamental),
}

impl EdgeColor {
    /// DOT color name.
    pub fn dot_name(self) -> &'static str {
        match self {
            EdgeColor::Uncolored => "gray",
            EdgeColor::Fundamental(f) => match f.weight() {
                1 => "black",
                2 => "red",
                4 => "orange",
                8 => "gold",
                16 => "green",
                32 => "blue",
                64 => "purple",
                128 => "brown",
                _ => "cyan",
            },
        }
    }
}

impl fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeColor::Uncolored => f.write_str("uncolored"),
            EdgeColor::Fundamental(x) => write!(f, "rule {x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub color: EdgeColor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleGraph {
    vertex_count: usize,
    /// Sorted by `(source, target)`, no duplicate pairs.
    edges: Vec<Edge>,
    grid_dims: Option<(usize, usize)>,
}

impl RuleGraph {
    /// Uncolored graph with the matrix as adjacency matrix.
    pub fn from_matrix(m: &Gf2Matrix) -> RuleGraph {
        let edges = m
            .ones()
            .map(|(source, target)| Edge {
                source,
                target,
                color: EdgeColor::Uncolored,
            })
            .collect();
        RuleGraph {
            vertex_count: m.dim(),
            edges,
            grid_dims: None,
        }
    }

    /// Union of the fundamental graphs of `rule`, each edge colored by its fundamental.
    pub fn colored(rule: RuleNumber, rows: usize, cols: usize) -> Result<RuleGraph> {
        let mut edges = Vec::new();
        for f in rule.fundamentals() {
            let m = rulematrix::build(f.as_rule(), rows, cols)?;
            edges.extend(m.ones().map(|(source, target)| Edge {
                source,
                target,
                color: EdgeColor::Fundamental(f),
            }));
        }
        edges.sort_unstable_by_key(|e| (e.source, e.target));
        debug_assert!(edges
            .windows(2)
            .all(|w| (w[0].source, w[0].target) != (w[1].source, w[1].target)));
        Ok(RuleGraph {
            vertex_count: rows * cols,
            edges,
            grid_dims: Some((rows, cols)),
        })
    }

    pub fn with_grid_dims(mut self, rows: usize, cols: usize) -> Self {
        self.grid_dims = Some((rows, cols));
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn grid_dims(&self) -> Option<(usize, usize)> {
        self.grid_dims
    }

    /// Same edges with colors dropped.
    pub fn uncolored(&self) -> RuleGraph {
        RuleGraph {
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    color: EdgeColor::Uncolored,
                    ..*e
                })
                .collect(),
            ..self.clone()
        }
    }

    /// Every edge reversed, colors kept.
    pub fn reversed(&self) -> RuleGraph {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                source: e.target,
                target: e.source,
                color: e.color,
            })
            .collect();
        edges.sort_unstable_by_key(|e| (e.source, e.target));
        RuleGraph {
            edges,
            ..self.clone()
        }
    }

    /// `(source, target)` pairs in sorted order.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.source, e.target)).collect()
    }

    pub fn to_matrix(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zero(self.vertex_count);
        for e in &self.edges {
            m.set(e.source, e.target, true);
        }
        m
    }

    pub fn stats(&self) -> GraphStats {
        let n = self.vertex_count;
        let mut out_degrees = vec![0; n];
        let mut in_degrees = vec![0; n];
        let mut self_loop_count = 0;
        let mut uf = UnionFind::<usize>::new(n);
        for e in &self.edges {
            out_degrees[e.source] += 1;
            in_degrees[e.target] += 1;
            if e.source == e.target {
                self_loop_count += 1;
            } else {
                uf.union(e.source, e.target);
            }
        }
        let isolated = (0..n)
            .filter(|&v| out_degrees[v] + in_degrees[v] == 0)
            .collect();

        // Vertices are visited in ascending order, so components come out sorted
        // internally and ordered by their smallest member.
        let labels = uf.into_labeling();
        let mut slot = vec![usize::MAX; n];
        let mut weak_components: Vec<Vec<usize>> = Vec::new();
        for (v, &root) in labels.iter().enumerate() {
            if slot[root] == usize::MAX {
                slot[root] = weak_components.len();
                weak_components.push(Vec::new());
            }
            weak_components[slot[root]].push(v);
        }

        GraphStats {
            self_loop_count,
            isolated,
            weak_components,
            out_degrees,
            in_degrees,
        }
    }

    /// Deterministic DOT rendering: nodes ascending, edges sorted by (source, target).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph rule_graph {\n");
        if let Some((m, n)) = self.grid_dims {
            let _ = writeln!(out, "  label=\"{m}x{n} grid\";");
        }
        for v in 0..self.vertex_count {
            let _ = writeln!(out, "  v{v};");
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  v{} -> v{} [color={}];",
                e.source,
                e.target,
                e.color.dot_name()
            );
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphStats {
    pub self_loop_count: usize,
    /// Vertices with no incident edge at all (a self-loop counts as incident).
    pub isolated: Vec<usize>,
    /// Components of the underlying undirected graph, each sorted, ordered by
    /// smallest vertex.
    pub weak_components: Vec<Vec<usize>>,
    pub out_degrees: Vec<usize>,
    pub in_degrees: Vec<usize>,
}

impl GraphStats {
    pub fn component_sizes(&self) -> Vec<usize> {
        self.weak_components.iter().map(Vec::len).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(r: u32) -> RuleNumber {
        RuleNumber::new(r).unwrap()
    }

    fn fund(w: u32) -> EdgeColor {
        EdgeColor::Fundamental(Fundamental::from_weight(w).unwrap())
    }

    fn graph(r: u32, m: usize, n: usize) -> RuleGraph {
        RuleGraph::colored(rule(r), m, n).unwrap()
    }

    #[test]
    fn from_matrix_examples() {
        let g = RuleGraph::from_matrix(&rulematrix::build(rule(1), 2, 3).unwrap());
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.stats().self_loop_count, 6);
        assert_eq!(g.edges().len(), 6);

        let z = RuleGraph::from_matrix(&Gf2Matrix::zero(4));
        assert!(z.edges().is_empty());
        assert_eq!(z.stats().isolated, vec![0, 1, 2, 3]);

        let g2 = RuleGraph::from_matrix(&rulematrix::build(rule(2), 2, 3).unwrap());
        assert_eq!(g2.edge_pairs(), vec![(0, 1), (1, 2), (3, 4), (4, 5)]);
        assert!(g2.edges().iter().all(|e| e.color == EdgeColor::Uncolored));
    }

    #[test]
    fn colored_rule_7_on_2x2() {
        let g = graph(7, 2, 2);
        let got: Vec<(usize, usize, EdgeColor)> = g
            .edges()
            .iter()
            .map(|e| (e.source, e.target, e.color))
            .collect();
        let mut expected = vec![
            (0, 0, fund(1)),
            (1, 1, fund(1)),
            (2, 2, fund(1)),
            (3, 3, fund(1)),
            (0, 1, fund(2)),
            (2, 3, fund(2)),
            (0, 3, fund(4)),
        ];
        expected.sort_by_key(|e| (e.0, e.1));
        assert_eq!(got, expected);
    }

    #[test]
    fn colored_zero_rule_has_no_edges() {
        assert!(graph(0, 3, 5).edges().is_empty());
    }

    #[test]
    fn colored_170_agrees_with_matrix() {
        let g = graph(170, 3, 4);
        let m = rulematrix::build(rule(170), 3, 4).unwrap();
        assert_eq!(
            g.uncolored(),
            RuleGraph::from_matrix(&m).with_grid_dims(3, 4)
        );
        let colors: std::collections::BTreeSet<_> = g.edges().iter().map(|e| e.color).collect();
        assert_eq!(colors.len(), 4);
        for e in g.edges() {
            let EdgeColor::Fundamental(f) = e.color else {
                panic!()
            };
            assert!(rule(170).contains(f));
            assert!(rulematrix::build(f.as_rule(), 3, 4)
                .unwrap()
                .get(e.source, e.target));
        }
    }

    #[test]
    fn self_loops_only_colored_one() {
        for r in RuleNumber::all() {
            for e in graph(r.value() as u32, 3, 3).edges() {
                if e.source == e.target {
                    assert_eq!(e.color, fund(1));
                }
            }
        }
    }

    #[test]
    fn stats_examples() {
        let s2 = graph(2, 2, 3).stats();
        assert_eq!(s2.weak_components, vec![vec![0, 1, 2], vec![3, 4, 5]]);

        let s4 = graph(4, 3, 4).stats();
        assert_eq!(s4.isolated, vec![3, 8]);
        // Down-right diagonal chains.
        assert_eq!(
            s4.weak_components,
            vec![
                vec![0, 5, 10],
                vec![1, 6, 11],
                vec![2, 7],
                vec![3],
                vec![4, 9],
                vec![8]
            ]
        );

        let s16 = graph(16, 2, 3).stats();
        assert_eq!(s16.isolated, vec![0, 5]);
    }

    #[test]
    fn loop_vertex_is_not_isolated() {
        let s = graph(1, 2, 2).stats();
        assert!(s.isolated.is_empty());
        assert_eq!(s.weak_components.len(), 4);
        assert_eq!(s.out_degrees, vec![1; 4]);
        assert_eq!(s.in_degrees, vec![1; 4]);
    }

    #[test]
    fn reversed_fundamentals_are_partners() {
        for f in Fundamental::ALL {
            let g = graph(f.weight() as u32, 4, 5).uncolored();
            let p = graph(f.transpose_partner().weight() as u32, 4, 5).uncolored();
            assert_eq!(g.reversed(), p);
        }
    }

    #[test]
    fn interior_out_degree_is_bit_count() {
        let (m, n) = (4, 5);
        for r in RuleNumber::all() {
            let s = graph(r.value() as u32, m, n).stats();
            for row in 1..m - 1 {
                for col in 1..n - 1 {
                    assert_eq!(s.out_degrees[row * n + col], r.neighbor_count() as usize);
                }
            }
        }
    }

    #[test]
    fn dot_output() {
        let mut m = Gf2Matrix::zero(1);
        m.set(0, 0, true);
        let loop_graph = RuleGraph::colored(rule(1), 1, 1).unwrap();
        assert!(loop_graph.to_dot().contains("v0 -> v0 [color=black];"));
        assert!(RuleGraph::from_matrix(&m)
            .to_dot()
            .contains("v0 -> v0 [color=gray];"));

        let empty = RuleGraph::from_matrix(&Gf2Matrix::zero(2));
        assert_eq!(empty.to_dot(), "digraph rule_graph {\n  v0;\n  v1;\n}\n");

        let dot = graph(2, 2, 3).to_dot();
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(edges.len(), 4);
        assert!(edges.iter().all(|l| l.ends_with("[color=red];")));
        assert_eq!(edges[0], "  v0 -> v1 [color=red];");
    }

    #[test]
    fn palette_is_distinct() {
        let names: std::collections::HashSet<_> = Fundamental::ALL
            .iter()
            .map(|&f| EdgeColor::Fundamental(f).dot_name())
            .chain([EdgeColor::Uncolored.dot_name()])
            .collect();
        assert_eq!(names.len(), 10);
    }
}
