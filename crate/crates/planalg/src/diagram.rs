//! Diagram bases: non-crossing perfect matchings of marked boundary points.
//!
//! A level-`n` diagram is stored as a fixed-point-free involution on its
//! boundary positions. Positions follow one cyclic traversal of the
//! rectangle: top row left to right, then bottom row right to left. The
//! single-strand family (`TL`) has `n` points per row; the two-color family
//! (`FC`) has `2n` points per row, colored with period four around the whole
//! cycle (`a b b a | a b b a | ...`), so strands join equal colors and every
//! pair of adjacent doubled strands meets in matching colors.

use std::fmt;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two diagram families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "TL")]
    Tl,
    #[serde(rename = "FC")]
    Fc,
}

impl Family {
    /// Number of boundary points of a level-`n` diagram.
    pub fn boundary_points(self, n: usize) -> usize {
        match self {
            Family::Tl => 2 * n,
            Family::Fc => 4 * n,
        }
    }

    /// Number of points on one row (top or bottom).
    pub fn row_points(self, n: usize) -> usize {
        self.boundary_points(n) / 2
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Tl => write!(f, "TL"),
            Family::Fc => write!(f, "FC"),
        }
    }
}

/// Strand colors of the two-color family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    A,
    B,
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::A => write!(f, "a"),
            Color::B => write!(f, "b"),
        }
    }
}

/// Color of a boundary position in the two-color family.
///
/// The period-four pattern holds uniformly around the whole cycle: with the
/// top row indexed left to right and the bottom row right to left, position
/// `p` carries color `a` exactly when `p mod 4` is 0 or 3.
pub fn fc_color(pos: usize) -> Color {
    match pos % 4 {
        0 | 3 => Color::A,
        _ => Color::B,
    }
}

/// Closed-loop counts by color, as extracted when strands are erased.
///
/// A single-strand loop counts once in each field, so the removed scalar is
/// always `a^a_loops * b^b_loops`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoopCount {
    pub a_loops: usize,
    pub b_loops: usize,
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    family: Family,
    n: usize,
    pairing: Vec<usize>,
}

/// A basis diagram: a non-crossing fixed-point-free involution of the
/// boundary positions (color-preserving in the two-color family).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram", into = "RawDiagram")]
pub struct Diagram {
    family: Family,
    n: usize,
    pairing: Vec<usize>,
}

impl From<Diagram> for RawDiagram {
    fn from(d: Diagram) -> Self {
        RawDiagram {
            family: d.family,
            n: d.n,
            pairing: d.pairing,
        }
    }
}

impl TryFrom<RawDiagram> for Diagram {
    type Error = Error;
    fn try_from(raw: RawDiagram) -> Result<Self> {
        Diagram::new(raw.family, raw.n, raw.pairing)
    }
}

fn validate_pairing(family: Family, n: usize, pairing: &[usize]) -> Result<()> {
    let len = family.boundary_points(n);
    if pairing.len() != len {
        return Err(Error::InvalidDiagram(format!(
            "level {n} {family} diagram needs {len} positions, got {}",
            pairing.len()
        )));
    }
    for (p, &q) in pairing.iter().enumerate() {
        if q >= len {
            return Err(Error::InvalidDiagram(format!(
                "position {p} pairs with out-of-range {q}"
            )));
        }
        if q == p {
            return Err(Error::InvalidDiagram(format!("position {p} pairs with itself")));
        }
        if pairing[q] != p {
            return Err(Error::InvalidDiagram(format!(
                "pairing is not an involution at positions {p}, {q}"
            )));
        }
        if family == Family::Fc && fc_color(p) != fc_color(q) {
            return Err(Error::InvalidDiagram(format!(
                "strand {p}-{q} joins different colors"
            )));
        }
    }
    // Non-crossing <=> every chord closes against the innermost open one.
    let mut stack = Vec::with_capacity(len / 2);
    for p in 0..len {
        let q = pairing[p];
        if q > p {
            stack.push(p);
        } else if stack.pop() != Some(q) {
            return Err(Error::InvalidDiagram(format!(
                "strand {q}-{p} crosses another strand"
            )));
        }
    }
    Ok(())
}

impl Diagram {
    /// Validate and build a diagram from its involution array.
    pub fn new(family: Family, n: usize, pairing: Vec<usize>) -> Result<Self> {
        validate_pairing(family, n, &pairing)?;
        Ok(Self { family, n, pairing })
    }

    /// The identity diagram: every top point joined straight down.
    pub fn identity(family: Family, n: usize) -> Self {
        let len = family.boundary_points(n);
        // Position len-1-p is the bottom point directly under top point p.
        let pairing = (0..len).map(|p| len - 1 - p).collect();
        Self { family, n, pairing }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Diagram level (number of strands; cables in the two-color family).
    pub fn level(&self) -> usize {
        self.n
    }

    /// The underlying involution array.
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// Partner of boundary position `p`.
    pub fn partner(&self, p: usize) -> usize {
        self.pairing[p]
    }

    /// Top-bottom reflection. An involution that preserves validity; on
    /// two-color diagrams it also preserves colors.
    pub fn involute(&self) -> Diagram {
        let len = self.pairing.len();
        let pairing = (0..len).map(|p| len - 1 - self.pairing[len - 1 - p]).collect();
        Diagram {
            family: self.family,
            n: self.n,
            pairing,
        }
    }

    /// Count the closed loops formed when each top point is joined to the
    /// bottom point at the same horizontal position.
    pub fn closure_loops(&self) -> LoopCount {
        let len = self.pairing.len();
        let mut seen = vec![false; len];
        let mut loops = LoopCount::default();
        for start in 0..len {
            if seen[start] {
                continue;
            }
            let mut cur = start;
            loop {
                seen[cur] = true;
                cur = self.pairing[cur];
                seen[cur] = true;
                cur = len - 1 - cur; // closure arc
                if cur == start {
                    break;
                }
            }
            match self.family {
                Family::Tl => {
                    loops.a_loops += 1;
                    loops.b_loops += 1;
                }
                Family::Fc => match fc_color(start) {
                    Color::A => loops.a_loops += 1,
                    Color::B => loops.b_loops += 1,
                },
            }
        }
        loops
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} {:?}", self.family, self.n, self.pairing)
    }
}

const UNSET: usize = usize::MAX;

/// Generate all non-crossing matchings of `len` points that satisfy
/// `admissible(p, q)` on every chord, in lexicographic order of the
/// involution array.
pub(crate) fn generate_noncrossing(
    len: usize,
    admissible: &dyn Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut pairing = vec![UNSET; len];
    fn rec(
        pairing: &mut Vec<usize>,
        len: usize,
        admissible: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(p) = pairing.iter().position(|&x| x == UNSET) else {
            out.push(pairing.clone());
            return;
        };
        // Chords already placed only start before p; the nearest right
        // endpoint jumping over p bounds the admissible partners, and every
        // position strictly inside (p, bound) is still unpaired.
        let mut bound = len;
        for r in 0..p {
            if pairing[r] > p && pairing[r] < bound {
                bound = pairing[r];
            }
        }
        let mut q = p + 1;
        while q < bound {
            if admissible(p, q) {
                pairing[p] = q;
                pairing[q] = p;
                rec(pairing, len, admissible, out);
                pairing[p] = UNSET;
                pairing[q] = UNSET;
            }
            q += 2; // an odd gap can never be fully matched
        }
    }
    rec(&mut pairing, len, admissible, &mut out);
    out
}

type BasisCache = DashMap<(Family, usize), Arc<Vec<Diagram>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

/// All level-`n` basis diagrams in lexicographic order of the involution
/// array. Results are cached per `(family, n)` and shared.
pub fn enumerate(family: Family, n: usize) -> Arc<Vec<Diagram>> {
    if let Some(hit) = basis_cache().get(&(family, n)) {
        return hit.clone();
    }
    let len = family.boundary_points(n);
    let raw = match family {
        Family::Tl => generate_noncrossing(len, &|_, _| true),
        Family::Fc => generate_noncrossing(len, &|p, q| fc_color(p) == fc_color(q)),
    };
    let mut diagrams: Vec<Diagram> = raw
        .into_iter()
        .map(|pairing| Diagram { family, n, pairing })
        .collect();
    diagrams.sort_unstable_by(|x, y| x.pairing.cmp(&y.pairing));
    let arc = Arc::new(diagrams);
    basis_cache().insert((family, n), arc.clone());
    arc
}

/// Basis size of the level-`n` algebra, by enumeration.
pub fn dimension(family: Family, n: usize) -> usize {
    enumerate(family, n).len()
}
