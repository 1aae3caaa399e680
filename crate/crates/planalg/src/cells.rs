//! Through-strand combinatorics: half-diagrams, simple-module labels and
//! dimensions, and the branching graphs of the tower of inclusions.
//!
//! A half-diagram is the top half of a basis diagram: a partial non-crossing
//! matching of the top row in which the unmatched ("through") points are
//! never enclosed by an arc. Grouping half-diagrams by the invariant of
//! their through points — the count for single-strand diagrams, the color
//! word for two-color ones — yields the simple-module dimensions at generic
//! parameters, and the way labels extend from one level to the next yields
//! the branching graph.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::diagram::{fc_color, Color, Family};
use crate::error::{Error, Result};

/// Label of a simple module: through-strand count, or through-color word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellLabel {
    Through(usize),
    Word(Vec<Color>),
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellLabel::Through(k) => write!(f, "{k}"),
            CellLabel::Word(w) if w.is_empty() => write!(f, "∅"),
            CellLabel::Word(w) => {
                for c in w {
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

/// A partial non-crossing matching of the top row; `None` marks a through
/// point. Through points are never enclosed by an arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfDiagram {
    family: Family,
    n: usize,
    pairing: Vec<Option<usize>>,
}

impl HalfDiagram {
    pub fn new(family: Family, n: usize, pairing: Vec<Option<usize>>) -> Result<Self> {
        let len = family.row_points(n);
        if pairing.len() != len {
            return Err(Error::InvalidDiagram(format!(
                "expected {len} points, got {}",
                pairing.len()
            )));
        }
        // Partial involution without fixed points, arcs color-equal.
        for (p, slot) in pairing.iter().enumerate() {
            if let Some(q) = *slot {
                if q >= len || q == p || pairing[q] != Some(p) {
                    return Err(Error::InvalidDiagram(format!(
                        "pairing is not a partial involution at point {p}"
                    )));
                }
                if family == Family::Fc && fc_color(p) != fc_color(q) {
                    return Err(Error::InvalidDiagram(format!(
                        "arc {{{p}, {q}}} joins different colors"
                    )));
                }
            }
        }
        // Non-crossing and through points never under an arc, via one stack
        // sweep: a through point is admissible only when no arc is open.
        let mut stack = Vec::new();
        for (p, slot) in pairing.iter().enumerate() {
            match *slot {
                None => {
                    if !stack.is_empty() {
                        return Err(Error::InvalidDiagram(format!(
                            "through point {p} lies under an arc"
                        )));
                    }
                }
                Some(q) if q > p => stack.push(p),
                Some(q) => {
                    if stack.pop() != Some(q) {
                        return Err(Error::InvalidDiagram(format!(
                            "arcs {{{q}, {p}}} cross"
                        )));
                    }
                }
            }
        }
        Ok(Self { family, n, pairing })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn pairing(&self) -> &[Option<usize>] {
        &self.pairing
    }

    /// Positions of the through points, left to right.
    pub fn through_points(&self) -> Vec<usize> {
        (0..self.pairing.len())
            .filter(|&p| self.pairing[p].is_none())
            .collect()
    }

    /// The simple-module label of this half-diagram.
    pub fn label(&self) -> CellLabel {
        let through = self.through_points();
        match self.family {
            Family::Tl => CellLabel::Through(through.len()),
            Family::Fc => CellLabel::Word(through.into_iter().map(fc_color).collect()),
        }
    }
}

/// Append every non-crossing color-equal perfect matching of
/// `points[lo..hi]` into `pairing`, calling `emit` for each completion.
fn fill_window(
    family: Family,
    pairing: &mut Vec<Option<usize>>,
    lo: usize,
    hi: usize,
    emit: &mut dyn FnMut(&mut Vec<Option<usize>>),
) {
    if lo == hi {
        emit(pairing);
        return;
    }
    // Match lo to a partner with an even gap, fill inside, then the rest.
    let mut q = lo + 1;
    while q < hi {
        if family != Family::Fc || fc_color(lo) == fc_color(q) {
            pairing[lo] = Some(q);
            pairing[q] = Some(lo);
            fill_window(family, pairing, lo + 1, q, &mut |pairing| {
                fill_window(family, pairing, q + 1, hi, emit);
            });
            pairing[lo] = None;
            pairing[q] = None;
        }
        q += 2;
    }
}

/// Recurse over the top-level structure: the first point is either through
/// or opens an arc whose interior is perfectly matched.
fn walk_half(
    family: Family,
    pairing: &mut Vec<Option<usize>>,
    start: usize,
    out: &mut Vec<HalfDiagram>,
    n: usize,
) {
    let len = pairing.len();
    if start == len {
        out.push(HalfDiagram {
            family,
            n,
            pairing: pairing.clone(),
        });
        return;
    }
    // through point
    walk_half(family, pairing, start + 1, out, n);
    // arc from start to q, interior perfectly matched
    let mut q = start + 1;
    while q < len {
        if family != Family::Fc || fc_color(start) == fc_color(q) {
            pairing[start] = Some(q);
            pairing[q] = Some(start);
            fill_window(family, pairing, start + 1, q, &mut |pairing| {
                walk_half(family, pairing, q + 1, out, n);
            });
            pairing[start] = None;
            pairing[q] = None;
        }
        q += 2;
    }
}

/// Enumerate every half-diagram at a level, grouped by label in label order.
pub fn half_diagrams(family: Family, n: usize) -> BTreeMap<CellLabel, Vec<HalfDiagram>> {
    let len = family.row_points(n);
    let mut all = Vec::new();
    walk_half(family, &mut vec![None; len], 0, &mut all, n);
    let mut grouped: BTreeMap<CellLabel, Vec<HalfDiagram>> = BTreeMap::new();
    for h in all {
        grouped.entry(h.label()).or_default().push(h);
    }
    grouped
}

/// Simple-module dimensions at a level: label -> number of half-diagrams.
pub fn cell_dimensions(family: Family, n: usize) -> BTreeMap<CellLabel, u64> {
    half_diagrams(family, n)
        .into_iter()
        .map(|(label, hs)| (label, hs.len() as u64))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphVertex {
    pub label: CellLabel,
    pub dim: u64,
}

/// One level of the branching graph; `edges` connect this level's vertices
/// (by index) to the next level's, with multiplicities. The last level has
/// no edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphLevel {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<(usize, usize, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalGraph {
    pub family: Family,
    pub levels: Vec<GraphLevel>,
}

#[derive(Serialize)]
struct RawVertex {
    label: String,
    dim: u64,
}

#[derive(Serialize)]
struct RawLevel {
    vertices: Vec<RawVertex>,
    edges: Vec<(usize, usize, u32)>,
}

#[derive(Serialize)]
struct RawGraph {
    levels: Vec<RawLevel>,
}

impl Serialize for PrincipalGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawGraph {
            levels: self
                .levels
                .iter()
                .map(|lvl| RawLevel {
                    vertices: lvl
                        .vertices
                        .iter()
                        .map(|v| RawVertex {
                            label: v.label.to_string(),
                            dim: v.dim,
                        })
                        .collect(),
                    edges: lvl.edges.clone(),
                })
                .collect(),
        };
        raw.serialize(serializer)
    }
}

/// The labels reachable from `label` one level up, each with multiplicity 1.
///
/// The new rightmost strand (cable) can be left through (append), matched
/// into the last through point (replace/shorten), or — in the two-color
/// case — have both of its points matched into the last two through points
/// (drop). The two-color cable added at level `n` carries colors `(a, b)`
/// for even `n` and `(b, a)` for odd `n`, matching the boundary pattern.
fn extensions(family: Family, n: usize, label: &CellLabel) -> Vec<CellLabel> {
    match (family, label) {
        (Family::Tl, CellLabel::Through(k)) => {
            let mut out = vec![CellLabel::Through(k + 1)];
            if *k >= 1 {
                out.push(CellLabel::Through(k - 1));
            }
            out
        }
        (Family::Fc, CellLabel::Word(w)) => {
            let (c1, c2) = if n % 2 == 0 {
                (Color::A, Color::B)
            } else {
                (Color::B, Color::A)
            };
            let mut out = Vec::new();
            let mut appended = w.clone();
            appended.extend([c1, c2]);
            out.push(CellLabel::Word(appended));
            if w.last() == Some(&c1) {
                let mut replaced = w[..w.len() - 1].to_vec();
                replaced.push(c2);
                out.push(CellLabel::Word(replaced));
            }
            if w.len() >= 2 && w[w.len() - 2..] == [c2, c1] {
                out.push(CellLabel::Word(w[..w.len() - 2].to_vec()));
            }
            out
        }
        _ => unreachable!("label kind always matches the family"),
    }
}

/// Build the branching graph for levels `0..=max_level`: vertices from the
/// half-diagram enumeration, edges from the extension rule.
pub fn bratteli(family: Family, max_level: usize) -> PrincipalGraph {
    let mut levels: Vec<GraphLevel> = (0..=max_level)
        .map(|n| GraphLevel {
            vertices: cell_dimensions(family, n)
                .into_iter()
                .map(|(label, dim)| GraphVertex { label, dim })
                .collect(),
            edges: Vec::new(),
        })
        .collect();
    for n in 0..max_level {
        let mut edges = Vec::new();
        for (u, vertex) in levels[n].vertices.iter().enumerate() {
            for target in extensions(family, n, &vertex.label) {
                let v = levels[n + 1]
                    .vertices
                    .iter()
                    .position(|w| w.label == target)
                    .expect("every extension target is realized one level up");
                edges.push((u, v, 1));
            }
        }
        edges.sort_unstable();
        levels[n].edges = edges;
    }
    PrincipalGraph { family, levels }
}

/// Count weighted paths from level 0 down to every vertex and check them
/// against the stored dimensions; the first discrepancy is an error.
pub fn path_counts(g: &PrincipalGraph) -> Result<Vec<Vec<u64>>> {
    let mut counts: Vec<Vec<u64>> = Vec::with_capacity(g.levels.len());
    for (n, level) in g.levels.iter().enumerate() {
        let row = if n == 0 {
            vec![1; level.vertices.len()]
        } else {
            let prev = &counts[n - 1];
            let mut row = vec![0u64; level.vertices.len()];
            for &(u, v, mult) in &g.levels[n - 1].edges {
                row[v] += prev[u] * mult as u64;
            }
            row
        };
        for (v, vertex) in level.vertices.iter().enumerate() {
            if row[v] != vertex.dim {
                return Err(Error::InconsistentGraph {
                    level: n,
                    label: vertex.label.to_string(),
                    stored: vertex.dim as usize,
                    computed: row[v],
                });
            }
        }
        counts.push(row);
    }
    Ok(counts)
}

/// Deterministic DOT rendering; vertices are named "level/label/dim" and
/// parallel edges are repeated per multiplicity.
pub fn export_dot(g: &PrincipalGraph) -> String {
    let name = |n: usize, v: &GraphVertex| format!("\"{}/{}/{}\"", n, v.label, v.dim);
    let mut out = String::from("graph tower {\n  node [shape=circle];\n");
    for (n, level) in g.levels.iter().enumerate() {
        for v in &level.vertices {
            out.push_str(&format!("  {};\n", name(n, v)));
        }
    }
    for (n, level) in g.levels.iter().enumerate() {
        for &(u, v, mult) in &level.edges {
            for _ in 0..mult {
                out.push_str(&format!(
                    "  {} -- {};\n",
                    name(n, &level.vertices[u]),
                    name(n + 1, &g.levels[n + 1].vertices[v])
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Σ dim² over the labels of a level — equals the algebra dimension at
/// generic parameters.
pub fn dimension_square_sum(family: Family, n: usize) -> u64 {
    cell_dimensions(family, n).values().map(|d| d * d).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::dimension;

    fn word(s: &str) -> CellLabel {
        CellLabel::Word(
            s.chars()
                .map(|c| if c == 'a' { Color::A } else { Color::B })
                .collect(),
        )
    }

    #[test]
    fn frozen_single_strand_cells_at_level_3() {
        let dims = cell_dimensions(Family::Tl, 3);
        let expected: BTreeMap<CellLabel, u64> =
            [(CellLabel::Through(1), 2), (CellLabel::Through(3), 1)].into();
        assert_eq!(dims, expected);
    }

    #[test]
    fn frozen_two_color_cells_at_levels_2_and_3() {
        let dims = cell_dimensions(Family::Fc, 2);
        let expected: BTreeMap<CellLabel, u64> =
            [(word(""), 1), (word("aa"), 1), (word("abba"), 1)].into();
        assert_eq!(dims, expected);

        let dims = cell_dimensions(Family::Fc, 3);
        let expected: BTreeMap<CellLabel, u64> = [
            (word("ab"), 3),
            (word("aaab"), 1),
            (word("abbb"), 1),
            (word("abbaab"), 1),
        ]
        .into();
        assert_eq!(dims, expected);
    }

    #[test]
    fn dimension_squares_sum_to_the_algebra_dimension() {
        for n in 0..=5 {
            assert_eq!(
                dimension_square_sum(Family::Tl, n),
                dimension(Family::Tl, n) as u64,
                "single-strand level {n}"
            );
        }
        for n in 0..=4 {
            assert_eq!(
                dimension_square_sum(Family::Fc, n),
                dimension(Family::Fc, n) as u64,
                "two-color level {n}"
            );
        }
    }

    #[test]
    fn half_diagram_validation_rejects_defects() {
        // through point under an arc
        assert!(HalfDiagram::new(Family::Tl, 3, vec![Some(2), None, Some(0)]).is_err());
        // crossing
        assert!(HalfDiagram::new(
            Family::Tl,
            4,
            vec![Some(2), Some(3), Some(0), Some(1)]
        )
        .is_err());
        // color clash
        assert!(HalfDiagram::new(Family::Fc, 1, vec![Some(1), Some(0)]).is_err());
        // valid nested matching
        assert!(HalfDiagram::new(
            Family::Tl,
            4,
            vec![Some(3), Some(2), Some(1), Some(0)]
        )
        .is_ok());
    }

    #[test]
    fn single_strand_graph_is_the_a_type_half_line() {
        let g = bratteli(Family::Tl, 6);
        for (n, level) in g.levels.iter().enumerate() {
            let labels: Vec<&CellLabel> = level.vertices.iter().map(|v| &v.label).collect();
            let expected: Vec<CellLabel> = (0..=n)
                .rev()
                .step_by(2)
                .map(CellLabel::Through)
                .collect::<Vec<_>>()
                .into_iter()
                .rev()
                .collect();
            assert_eq!(labels, expected.iter().collect::<Vec<_>>(), "level {n}");
            for &(u, v, mult) in &level.edges {
                assert_eq!(mult, 1);
                let CellLabel::Through(ku) = level.vertices[u].label else {
                    unreachable!()
                };
                let CellLabel::Through(kv) = g.levels[n + 1].vertices[v].label else {
                    unreachable!()
                };
                assert_eq!(ku.abs_diff(kv), 1);
            }
        }
        path_counts(&g).unwrap();
    }

    #[test]
    fn frozen_path_counts() {
        let g = bratteli(Family::Tl, 4);
        let counts = path_counts(&g).unwrap();
        let zero_idx = g.levels[4]
            .vertices
            .iter()
            .position(|v| v.label == CellLabel::Through(0))
            .unwrap();
        assert_eq!(counts[4][zero_idx], 2);

        let g = bratteli(Family::Fc, 3);
        let counts = path_counts(&g).unwrap();
        let ab_idx = g.levels[3]
            .vertices
            .iter()
            .position(|v| v.label == word("ab"))
            .unwrap();
        assert_eq!(counts[3][ab_idx], 3);
    }

    #[test]
    fn two_color_graph_levels_0_to_2_form_the_frozen_chain() {
        let g = bratteli(Family::Fc, 2);
        assert_eq!(g.levels[0].vertices.len(), 1);
        assert_eq!(g.levels[1].vertices.len(), 1);
        assert_eq!(g.levels[2].vertices.len(), 3);
        path_counts(&g).unwrap();
    }

    #[test]
    fn corrupted_graph_is_reported_with_its_vertex() {
        let mut g = bratteli(Family::Tl, 3);
        g.levels[3].vertices[0].dim += 1;
        let err = path_counts(&g).unwrap_err();
        match err {
            Error::InconsistentGraph { level, label, .. } => {
                assert_eq!(level, 3);
                assert_eq!(label, g.levels[3].vertices[0].label.to_string());
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dot_export_is_deterministic_and_well_formed() {
        let g = bratteli(Family::Fc, 2);
        let dot = export_dot(&g);
        assert!(dot.starts_with("graph tower {"));
        assert!(dot.contains("\"0/∅/1\""));
        assert!(dot.contains("\"2/abba/1\""));
        assert!(dot.contains(" -- "));
        assert_eq!(dot, export_dot(&g));
    }

    #[test]
    fn graph_json_has_the_documented_shape() {
        let g = bratteli(Family::Tl, 1);
        let json = serde_json::to_value(&g).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "levels": [
                    {"vertices": [{"label": "0", "dim": 1}], "edges": [[0, 0, 1]]},
                    {"vertices": [{"label": "1", "dim": 1}], "edges": []}
                ]
            })
        );
    }

    #[test]
    fn single_level_graph_path_counts_are_one() {
        let g = bratteli(Family::Tl, 0);
        assert_eq!(path_counts(&g).unwrap(), vec![vec![1]]);
    }
}
