//! Planar tangles as combinatorial maps: validation by face tracing,
//! composition by gluing into holes, and evaluation as multilinear
//! operations on algebra elements.
//!
//! A tangle is stored purely combinatorially: every disk (the outer
//! boundary and each hole) carries marked points in cyclic order with a
//! distinguished first point, and the strings form an involution on the
//! marked points. Orbits of `p -> string_partner(next(p))` trace the faces,
//! so planarity is the Euler formula per connected component and the
//! checkerboard shading is the requirement that all boundary arcs of one
//! face carry the same shade. The outer boundary is traversed opposite to
//! the holes (both are counterclockwise seen from the region they bound),
//! which is why the outer index and shading formulas mirror the inner ones.
//!
//! Evaluation walks strands through the input diagrams sitting in the
//! holes. Point `i` of an input at level `m` sits at hole point
//! `first_point + i (mod 2m)`; output position `i` sits at outer point
//! `first_point - i (mod 2k)`. In the two-color family every tangle string
//! is a cable of two colored strands with the `a`-strand along the white
//! side, which the boundary color pattern reproduces automatically.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{random_element, AlgebraElement};
use crate::diagram::{fc_color, Color, Diagram, Family, LoopCount};
use crate::error::{Error, Result};
use crate::scalar::ParamScalar;

/// A marked point: `disk` is -1 for the outer boundary, otherwise the hole
/// index; `pos` counts around that disk from its first point.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(into = "(i64, usize)", from = "(i64, usize)")]
pub struct Point {
    pub disk: i64,
    pub pos: usize,
}

impl Point {
    pub fn outer(pos: usize) -> Self {
        Point { disk: -1, pos }
    }

    pub fn hole(disk: usize, pos: usize) -> Self {
        Point {
            disk: disk as i64,
            pos,
        }
    }
}

impl From<Point> for (i64, usize) {
    fn from(p: Point) -> Self {
        (p.disk, p.pos)
    }
}

impl From<(i64, usize)> for Point {
    fn from((disk, pos): (i64, usize)) -> Self {
        Point { disk, pos }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.disk < 0 {
            write!(f, "outer point {}", self.pos)
        } else {
            write!(f, "hole {} point {}", self.disk, self.pos)
        }
    }
}

/// An internal disk: arity (half the marked points) and the first point,
/// which fixes the marked white region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleSpec {
    pub arity: usize,
    pub first_point: usize,
}

/// A shaded planar tangle with `2k` outer points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTangle", into = "RawTangle")]
pub struct PlanarTangle {
    k: usize,
    holes: Vec<HoleSpec>,
    strings: Vec<(Point, Point)>,
    free_loops: usize,
    outer_first_point: usize,
}

#[derive(Serialize, Deserialize)]
struct RawTangle {
    k: usize,
    holes: Vec<HoleSpec>,
    strings: Vec<(Point, Point)>,
    free_loops: usize,
    outer_first_point: usize,
}

impl From<PlanarTangle> for RawTangle {
    fn from(t: PlanarTangle) -> Self {
        RawTangle {
            k: t.k,
            holes: t.holes,
            strings: t.strings,
            free_loops: t.free_loops,
            outer_first_point: t.outer_first_point,
        }
    }
}

impl TryFrom<RawTangle> for PlanarTangle {
    type Error = Error;
    fn try_from(raw: RawTangle) -> Result<Self> {
        PlanarTangle::new(
            raw.k,
            raw.holes,
            raw.strings,
            raw.free_loops,
            raw.outer_first_point,
        )
    }
}

/// A violated tangle invariant, with a witness point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TangleDiagnostic {
    /// The component containing the witness has Euler number != 2.
    NonPlanar { witness: Point, euler: i64 },
    /// The face through the witness borders arcs of both shades.
    ShadingMismatch { witness: Point },
}

impl fmt::Display for TangleDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangleDiagnostic::NonPlanar { witness, euler } => write!(
                f,
                "non-planar: the component through {witness} has Euler number {euler}, expected 2"
            ),
            TangleDiagnostic::ShadingMismatch { witness } => write!(
                f,
                "inconsistent shading: the face through {witness} borders both shades"
            ),
        }
    }
}

impl PlanarTangle {
    /// Build a tangle after checking the structural invariants: point
    /// references in range, strings a fixed-point-free involution covering
    /// every marked point exactly once, first points in range. Strings are
    /// stored in a canonical order.
    pub fn new(
        k: usize,
        holes: Vec<HoleSpec>,
        strings: Vec<(Point, Point)>,
        free_loops: usize,
        outer_first_point: usize,
    ) -> Result<Self> {
        let check_first = |count: usize, first: usize, what: &str| -> Result<()> {
            if count == 0 && first != 0 || count > 0 && first >= count {
                return Err(Error::InvalidTangle(format!(
                    "{what} first point {first} out of range for {count} points"
                )));
            }
            Ok(())
        };
        check_first(2 * k, outer_first_point, "outer")?;
        for (j, h) in holes.iter().enumerate() {
            check_first(2 * h.arity, h.first_point, &format!("hole {j}"))?;
        }

        let point_count = |disk: i64| -> Result<usize> {
            if disk == -1 {
                Ok(2 * k)
            } else if disk >= 0 && (disk as usize) < holes.len() {
                Ok(2 * holes[disk as usize].arity)
            } else {
                Err(Error::InvalidTangle(format!(
                    "string endpoint references disk {disk}, which does not exist"
                )))
            }
        };
        let total = 2 * k + holes.iter().map(|h| 2 * h.arity).sum::<usize>();
        if 2 * strings.len() != total {
            return Err(Error::InvalidTangle(format!(
                "{} strings cannot cover {total} marked points",
                strings.len()
            )));
        }
        let mut seen = HashSet::new();
        let mut canonical: Vec<(Point, Point)> = Vec::with_capacity(strings.len());
        for (p, q) in strings {
            for pt in [p, q] {
                if pt.pos >= point_count(pt.disk)? {
                    return Err(Error::InvalidTangle(format!(
                        "{pt} does not exist on its disk"
                    )));
                }
                if !seen.insert(pt) {
                    return Err(Error::InvalidTangle(format!(
                        "{pt} is an endpoint of more than one string"
                    )));
                }
            }
            if p == q {
                return Err(Error::InvalidTangle(format!("string joins {p} to itself")));
            }
            canonical.push(if p <= q { (p, q) } else { (q, p) });
        }
        canonical.sort_unstable();
        Ok(Self {
            k,
            holes,
            strings: canonical,
            free_loops,
            outer_first_point,
        })
    }

    pub fn output_arity(&self) -> usize {
        self.k
    }

    pub fn holes(&self) -> &[HoleSpec] {
        &self.holes
    }

    pub fn strings(&self) -> &[(Point, Point)] {
        &self.strings
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn outer_first_point(&self) -> usize {
        self.outer_first_point
    }

    fn disk_points(&self, disk: i64) -> usize {
        if disk < 0 {
            2 * self.k
        } else {
            2 * self.holes[disk as usize].arity
        }
    }

    /// All marked points in canonical order: outer first, then each hole.
    fn all_points(&self) -> Vec<Point> {
        let mut out: Vec<Point> = (0..2 * self.k).map(Point::outer).collect();
        for (j, h) in self.holes.iter().enumerate() {
            out.extend((0..2 * h.arity).map(|p| Point::hole(j, p)));
        }
        out
    }

    fn string_map(&self) -> HashMap<Point, Point> {
        let mut map = HashMap::with_capacity(2 * self.strings.len());
        for &(p, q) in &self.strings {
            map.insert(p, q);
            map.insert(q, p);
        }
        map
    }

    /// Successor of a point in its disk's cyclic order.
    fn next(&self, p: Point) -> Point {
        let count = self.disk_points(p.disk);
        Point {
            disk: p.disk,
            pos: (p.pos + 1) % count,
        }
    }

    /// Whether the boundary arc from `p` to the next point is white. The
    /// marked white region touches the arc starting at the outer first
    /// point, and the arc ending at each hole's first point — the same rule
    /// seen from the two sides of the sphere.
    fn arc_is_white(&self, p: Point) -> bool {
        if p.disk < 0 {
            (p.pos + self.outer_first_point) % 2 == 0
        } else {
            (p.pos + 1 + self.holes[p.disk as usize].first_point) % 2 == 0
        }
    }

    /// Check planarity (Euler formula per connected component) and shading
    /// consistency (each face borders a single shade). An empty result
    /// means the tangle is a valid shaded planar tangle.
    pub fn validate(&self) -> Vec<TangleDiagnostic> {
        let strings = self.string_map();
        let n_disks = self.holes.len() + 1;
        let disk_idx = |d: i64| -> usize { (d + 1) as usize };

        // Connected components of disks joined by strings.
        let mut parent: Vec<usize> = (0..n_disks).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        for &(p, q) in &self.strings {
            let (a, b) = (
                find(&mut parent, disk_idx(p.disk)),
                find(&mut parent, disk_idx(q.disk)),
            );
            parent[a] = b;
        }

        let mut vertices = vec![0i64; n_disks];
        let mut edges = vec![0i64; n_disks];
        let mut faces = vec![0i64; n_disks];
        let mut component_witness: Vec<Option<Point>> = vec![None; n_disks];
        for d in 0..n_disks {
            let root = find(&mut parent, d);
            vertices[root] += 1;
        }
        for &(p, _) in &self.strings {
            edges[find(&mut parent, disk_idx(p.disk))] += 1;
        }

        // Face tracing: orbits of p -> string_partner(next(p)).
        let mut diagnostics = Vec::new();
        let mut visited: HashSet<Point> = HashSet::new();
        for start in self.all_points() {
            if visited.contains(&start) {
                continue;
            }
            let root = find(&mut parent, disk_idx(start.disk));
            faces[root] += 1;
            component_witness[root].get_or_insert(start);
            let shade = self.arc_is_white(start);
            let mut consistent = true;
            let mut cur = start;
            loop {
                visited.insert(cur);
                if self.arc_is_white(cur) != shade {
                    consistent = false;
                }
                cur = strings[&self.next(cur)];
                if cur == start {
                    break;
                }
            }
            if !consistent {
                diagnostics.push(TangleDiagnostic::ShadingMismatch { witness: start });
            }
        }

        for d in 0..n_disks {
            if parent[d] != d {
                continue;
            }
            let Some(witness) = component_witness[d] else {
                // Component without marked points: one disk, one face.
                continue;
            };
            let euler = vertices[d] - edges[d] + faces[d];
            if euler != 2 {
                diagnostics.push(TangleDiagnostic::NonPlanar { witness, euler });
            }
        }
        diagnostics
    }

    /// Glue tangle `inner` into hole `j`: the hole disappears, `inner`'s
    /// holes are spliced in at position `j`, strings are joined across the
    /// erased boundary, and interface strands that close up become free
    /// loops. First points are aligned, which keeps the shadings matched.
    pub fn compose(&self, j: usize, inner: &PlanarTangle) -> Result<PlanarTangle> {
        if j >= self.holes.len() {
            return Err(Error::HoleIndex {
                index: j,
                holes: self.holes.len(),
            });
        }
        let m = self.holes[j].arity;
        if inner.k != m {
            return Err(Error::ArityMismatch {
                index: j,
                expected: m,
                got: inner.k,
            });
        }
        let pts = 2 * m;
        let f_h = self.holes[j].first_point;
        let f_s = inner.outer_first_point;
        // Hole point f_h + i meets inner outer point f_s - i.
        let hole_to_inner = |pos: usize| (f_s + pts - (pos + pts - f_h) % pts) % pts;
        let inner_to_hole = |pos: usize| (f_h + pts - (pos + pts - f_s) % pts) % pts;

        // Node space of the gluing walk: points of self and of inner.
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Node {
            Slf(Point),
            Inr(Point),
        }
        let self_map = self.string_map();
        let inner_map = inner.string_map();
        let partner = |n: Node| match n {
            Node::Slf(p) => Node::Slf(self_map[&p]),
            Node::Inr(p) => Node::Inr(inner_map[&p]),
        };
        let jump = |n: Node| match n {
            Node::Slf(p) if p.disk == j as i64 => {
                Some(Node::Inr(Point::outer(hole_to_inner(p.pos))))
            }
            Node::Inr(p) if p.disk < 0 => Some(Node::Slf(Point::hole(j, inner_to_hole(p.pos)))),
            _ => None,
        };
        let shift = inner.holes.len();
        let relabel = |n: Node| -> Point {
            match n {
                Node::Slf(p) if p.disk >= 0 && (p.disk as usize) > j => Point {
                    disk: p.disk + shift as i64 - 1,
                    pos: p.pos,
                },
                Node::Slf(p) => p,
                Node::Inr(p) => Point::hole(j + p.disk as usize, p.pos),
            }
        };

        let mut visited: HashSet<Node> = HashSet::new();
        let mut strings = Vec::new();
        let boundary: Vec<Node> = self
            .all_points()
            .into_iter()
            .filter(|p| p.disk != j as i64)
            .map(Node::Slf)
            .chain(
                inner
                    .all_points()
                    .into_iter()
                    .filter(|p| p.disk >= 0)
                    .map(Node::Inr),
            )
            .collect();
        for start in boundary {
            if visited.contains(&start) {
                continue;
            }
            visited.insert(start);
            let mut cur = partner(start);
            visited.insert(cur);
            while let Some(other) = jump(cur) {
                visited.insert(other);
                cur = partner(other);
                visited.insert(cur);
            }
            strings.push((relabel(start), relabel(cur)));
        }

        // Interface strands not reached from any boundary point close up.
        let mut free_loops = self.free_loops + inner.free_loops;
        for pos in 0..pts {
            let start = Node::Slf(Point::hole(j, pos));
            if visited.contains(&start) {
                continue;
            }
            free_loops += 1;
            let mut cur = start;
            loop {
                visited.insert(cur);
                let other = jump(cur).expect("loop stays on the interface");
                visited.insert(other);
                cur = partner(other);
                if cur == start {
                    break;
                }
            }
        }

        let mut holes = Vec::with_capacity(self.holes.len() + shift - 1);
        holes.extend_from_slice(&self.holes[..j]);
        holes.extend_from_slice(&inner.holes);
        holes.extend_from_slice(&self.holes[j + 1..]);
        PlanarTangle::new(self.k, holes, strings, free_loops, self.outer_first_point)
    }

    /// Reorder the holes: new hole `i` is old hole `perm[i]`. Evaluation is
    /// invariant under permuting the holes and the inputs together.
    pub fn permute_holes(&self, perm: &[usize]) -> Result<PlanarTangle> {
        let h = self.holes.len();
        if perm.len() != h || perm.iter().collect::<BTreeSet<_>>().len() != h
            || perm.iter().any(|&p| p >= h)
        {
            return Err(Error::InvalidTangle(format!(
                "{perm:?} is not a permutation of the {h} holes"
            )));
        }
        let mut old_to_new = vec![0usize; h];
        for (new, &old) in perm.iter().enumerate() {
            old_to_new[old] = new;
        }
        let relabel = |p: Point| {
            if p.disk < 0 {
                p
            } else {
                Point::hole(old_to_new[p.disk as usize], p.pos)
            }
        };
        let holes = perm.iter().map(|&old| self.holes[old]).collect();
        let strings = self
            .strings
            .iter()
            .map(|&(p, q)| (relabel(p), relabel(q)))
            .collect();
        PlanarTangle::new(self.k, holes, strings, self.free_loops, self.outer_first_point)
    }

    /// Evaluate the tangle as a multilinear map: one input per hole, output
    /// at level `k`. Each basis-diagram combination is glued, closed loops
    /// are converted to loop monomials, and the free loops contribute one
    /// `a*b` factor each.
    pub fn eval(&self, family: Family, inputs: &[AlgebraElement]) -> Result<AlgebraElement> {
        if inputs.len() != self.holes.len() {
            return Err(Error::InputCount {
                holes: self.holes.len(),
                inputs: inputs.len(),
            });
        }
        for (index, (x, h)) in inputs.iter().zip(&self.holes).enumerate() {
            if x.family() != family {
                return Err(Error::FamilyMismatch(x.family(), family));
            }
            if x.level() != h.arity {
                return Err(Error::ArityMismatch {
                    index,
                    expected: h.arity,
                    got: x.level(),
                });
            }
        }
        if let Some(diag) = self.validate().first() {
            return Err(Error::InvalidTangle(diag.to_string()));
        }

        let mut out = AlgebraElement::zero(family, self.k);
        let term_lists: Vec<Vec<(&Diagram, &ParamScalar)>> =
            inputs.iter().map(|x| x.terms().collect()).collect();
        if term_lists.iter().any(|l| l.is_empty()) {
            return Ok(out);
        }
        let strings = self.string_map();
        let free = self.free_loops as i32;
        let mut idx = vec![0usize; term_lists.len()];
        loop {
            let combo: Vec<&Diagram> = idx
                .iter()
                .zip(&term_lists)
                .map(|(&i, terms)| terms[i].0)
                .collect();
            let (d, loops) = match family {
                Family::Tl => self.eval_basis_single(&strings, &combo),
                Family::Fc => self.eval_basis_cabled(&strings, &combo),
            };
            let mut coeff = ParamScalar::int_monomial(
                1,
                loops.a_loops as i32 + free,
                loops.b_loops as i32 + free,
            );
            for (&i, terms) in idx.iter().zip(&term_lists) {
                coeff = &coeff * terms[i].1;
            }
            out.add_term(d, coeff);

            let mut pos = term_lists.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < term_lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    /// Glue one single-strand diagram per hole and read off the boundary.
    fn eval_basis_single(
        &self,
        strings: &HashMap<Point, Point>,
        diagrams: &[&Diagram],
    ) -> (Diagram, LoopCount) {
        let out_count = 2 * self.k;
        let hop = |p: Point| -> Point {
            let j = p.disk as usize;
            let count = 2 * self.holes[j].arity;
            let f = self.holes[j].first_point;
            let i = (p.pos + count - f) % count;
            Point::hole(j, (f + diagrams[j].partner(i)) % count)
        };
        let out_pos =
            |p: Point| (self.outer_first_point + out_count - p.pos) % out_count;

        let mut visited: HashSet<Point> = HashSet::new();
        let mut pairing = vec![usize::MAX; out_count];
        for start_pos in 0..out_count {
            let start = Point::outer(start_pos);
            if visited.contains(&start) {
                continue;
            }
            visited.insert(start);
            let mut cur = strings[&start];
            visited.insert(cur);
            while cur.disk >= 0 {
                cur = hop(cur);
                visited.insert(cur);
                cur = strings[&cur];
                visited.insert(cur);
            }
            let (x, y) = (out_pos(start), out_pos(cur));
            pairing[x] = y;
            pairing[y] = x;
        }

        let mut loops = LoopCount::default();
        for start in self.all_points() {
            if start.disk < 0 || visited.contains(&start) {
                continue;
            }
            loops.a_loops += 1;
            loops.b_loops += 1;
            let mut cur = start;
            loop {
                visited.insert(cur);
                let h = hop(cur);
                visited.insert(h);
                cur = strings[&h];
                if cur == start {
                    break;
                }
            }
        }
        let d = Diagram::new(Family::Tl, self.k, pairing)
            .expect("gluing a planar tangle yields a planar diagram");
        (d, loops)
    }

    /// Glue one two-color diagram per hole. Every tangle string becomes an
    /// `(a, b)` cable whose `a`-strand runs along the white side; the
    /// boundary color pattern makes this consistent at every disk.
    fn eval_basis_cabled(
        &self,
        strings: &HashMap<Point, Point>,
        diagrams: &[&Diagram],
    ) -> (Diagram, LoopCount) {
        // Sub-point s = 0 precedes the marked point in the disk order,
        // s = 1 follows it; the white side is determined per disk.
        let white_sub = |p: Point| -> u8 {
            if p.disk < 0 {
                u8::from((p.pos + self.outer_first_point) % 2 != 1)
            } else {
                u8::from((p.pos + self.holes[p.disk as usize].first_point) % 2 != 0)
            }
        };
        let mut sub_strings: HashMap<(Point, u8), (Point, u8)> =
            HashMap::with_capacity(4 * self.strings.len());
        for (&p, &q) in strings {
            let (wp, wq) = (white_sub(p), white_sub(q));
            sub_strings.insert((p, wp), (q, wq));
            sub_strings.insert((p, 1 - wp), (q, 1 - wq));
        }

        // Hole sub-point <-> position in the diagram filling the hole.
        let diagram_index = |p: Point, s: u8| -> usize {
            let j = p.disk as usize;
            let len = 4 * self.holes[j].arity;
            (2 * p.pos + s as usize + len - 2 * self.holes[j].first_point) % len
        };
        let hop = |p: Point, s: u8| -> (Point, u8) {
            let j = p.disk as usize;
            let len = 4 * self.holes[j].arity;
            let q = diagrams[j].partner(diagram_index(p, s));
            let sub = (q + 2 * self.holes[j].first_point) % len;
            (Point::hole(j, sub / 2), (sub % 2) as u8)
        };
        let out_count = 2 * self.k;
        let out_index = |p: Point, s: u8| -> usize {
            let i = (self.outer_first_point + out_count - p.pos) % out_count;
            2 * i + (1 - s as usize)
        };

        let mut visited: HashSet<(Point, u8)> = HashSet::new();
        let mut pairing = vec![usize::MAX; 4 * self.k];
        for start_pos in 0..out_count {
            for s in 0..2u8 {
                let start = (Point::outer(start_pos), s);
                if visited.contains(&start) {
                    continue;
                }
                visited.insert(start);
                let mut cur = sub_strings[&start];
                visited.insert(cur);
                while cur.0.disk >= 0 {
                    cur = hop(cur.0, cur.1);
                    visited.insert(cur);
                    cur = sub_strings[&cur];
                    visited.insert(cur);
                }
                let (x, y) = (out_index(start.0, start.1), out_index(cur.0, cur.1));
                pairing[x] = y;
                pairing[y] = x;
            }
        }

        let mut loops = LoopCount::default();
        for p in self.all_points() {
            if p.disk < 0 {
                continue;
            }
            for s in 0..2u8 {
                let start = (p, s);
                if visited.contains(&start) {
                    continue;
                }
                match fc_color(diagram_index(p, s)) {
                    Color::A => loops.a_loops += 1,
                    Color::B => loops.b_loops += 1,
                }
                let mut cur = start;
                loop {
                    visited.insert(cur);
                    let h = hop(cur.0, cur.1);
                    visited.insert(h);
                    cur = sub_strings[&h];
                    if cur == start {
                        break;
                    }
                }
            }
        }
        let d = Diagram::new(Family::Fc, self.k, pairing)
            .expect("gluing a planar tangle yields a planar diagram");
        (d, loops)
    }
}

/// Outer point carrying output position `i` when the first point is 0.
fn out(i: usize, k_out: usize) -> Point {
    Point::outer((2 * k_out - i) % (2 * k_out))
}

fn require_level(n: usize, least: usize) -> Result<()> {
    if n < least {
        return Err(Error::InvalidTangle(format!(
            "level must be at least {least}, got {n}"
        )));
    }
    Ok(())
}

/// The identity tangle at level `n`: one hole, straight-through strands.
pub fn identity_tangle(n: usize) -> Result<PlanarTangle> {
    require_level(n, 1)?;
    let strings = (0..2 * n).map(|i| (out(i, n), Point::hole(0, i))).collect();
    PlanarTangle::new(n, vec![HoleSpec { arity: n, first_point: 0 }], strings, 0, 0)
}

/// The stacking-product tangle: two holes of arity `n`, output `n`; the
/// first input's bottom row meets the second input's top row.
pub fn multiplication(n: usize) -> Result<PlanarTangle> {
    require_level(n, 1)?;
    let mut strings = Vec::with_capacity(3 * n);
    for p in 0..n {
        strings.push((out(p, n), Point::hole(0, p)));
    }
    for p in n..2 * n {
        strings.push((out(p, n), Point::hole(1, p)));
        strings.push((Point::hole(0, p), Point::hole(1, 2 * n - 1 - p)));
    }
    let hole = HoleSpec { arity: n, first_point: 0 };
    PlanarTangle::new(n, vec![hole, hole], strings, 0, 0)
}

/// The inclusion tangle: one hole of arity `n`, output `n + 1`, with a new
/// through strand on the right.
pub fn inclusion(n: usize) -> Result<PlanarTangle> {
    require_level(n, 1)?;
    let k = n + 1;
    let mut strings = Vec::with_capacity(2 * n + 1);
    for i in 0..n {
        strings.push((out(i, k), Point::hole(0, i)));
    }
    for q in n..2 * n {
        strings.push((out(q + 2, k), Point::hole(0, q)));
    }
    strings.push((out(n, k), out(n + 1, k)));
    PlanarTangle::new(k, vec![HoleSpec { arity: n, first_point: 0 }], strings, 0, 0)
}

/// The partial-trace tangle: one hole of arity `n`, output `n - 1`, the
/// rightmost strand capped off.
pub fn conditional_expectation(n: usize) -> Result<PlanarTangle> {
    require_level(n, 1)?;
    let k = n - 1;
    let mut strings = Vec::with_capacity(2 * n - 1);
    for i in 0..n - 1 {
        strings.push((out(i, k), Point::hole(0, i)));
    }
    strings.push((Point::hole(0, n - 1), Point::hole(0, n)));
    for q in n + 1..2 * n {
        strings.push((out(q - 2, k), Point::hole(0, q)));
    }
    PlanarTangle::new(k, vec![HoleSpec { arity: n, first_point: 0 }], strings, 0, 0)
}

/// The rotation tangle: boundary points shifted by one strand; period `n`.
pub fn rotation(n: usize) -> Result<PlanarTangle> {
    require_level(n, 1)?;
    let strings = (0..2 * n)
        .map(|i| (out(i, n), Point::hole(0, (i + 2) % (2 * n))))
        .collect();
    PlanarTangle::new(n, vec![HoleSpec { arity: n, first_point: 0 }], strings, 0, 0)
}

/// The cup-cap tangle over the last two strands: no holes, output `n`;
/// evaluates to the unnormalized cup-cap diagram.
pub fn jones_projection(n: usize) -> Result<PlanarTangle> {
    require_level(n, 2)?;
    let mut pairs: Vec<(usize, usize)> = vec![(n - 2, n - 1), (n, n + 1)];
    pairs.extend((0..n - 2).map(|i| (i, 2 * n - 1 - i)));
    let strings = pairs
        .into_iter()
        .map(|(x, y)| (out(x, n), out(y, n)))
        .collect();
    PlanarTangle::new(n, Vec::new(), strings, 0, 0)
}

/// The unit tangle: no holes; evaluates to the identity element.
pub fn unit(n: usize) -> Result<PlanarTangle> {
    require_level(n, 1)?;
    let strings = (0..n)
        .map(|i| (out(i, n), out(2 * n - 1 - i, n)))
        .collect();
    PlanarTangle::new(n, Vec::new(), strings, 0, 0)
}

/// An explicit composition tree over tangles. Flattening the tree and
/// evaluating once must agree with evaluating node by node — the executable
/// form of the naturality of the tangle action.
#[derive(Debug, Clone)]
pub enum TangleTree {
    Leaf(PlanarTangle),
    Compose {
        base: Box<TangleTree>,
        hole: usize,
        inner: Box<TangleTree>,
    },
}

impl TangleTree {
    /// Arities of the unfilled holes, in input order.
    pub fn hole_arities(&self) -> Vec<usize> {
        match self {
            TangleTree::Leaf(t) => t.holes.iter().map(|h| h.arity).collect(),
            TangleTree::Compose { base, hole, inner } => {
                let mut arities = base.hole_arities();
                let inner_arities = inner.hole_arities();
                arities.splice(hole..=hole, inner_arities);
                arities
            }
        }
    }

    pub fn output_arity(&self) -> usize {
        match self {
            TangleTree::Leaf(t) => t.k,
            TangleTree::Compose { base, .. } => base.output_arity(),
        }
    }

    /// Fold the whole tree into a single tangle.
    pub fn flatten(&self) -> Result<PlanarTangle> {
        match self {
            TangleTree::Leaf(t) => Ok(t.clone()),
            TangleTree::Compose { base, hole, inner } => {
                base.flatten()?.compose(*hole, &inner.flatten()?)
            }
        }
    }

    /// Evaluate bottom-up, node by node.
    pub fn eval_recursive(
        &self,
        family: Family,
        inputs: &[AlgebraElement],
    ) -> Result<AlgebraElement> {
        match self {
            TangleTree::Leaf(t) => t.eval(family, inputs),
            TangleTree::Compose { base, hole, inner } => {
                let base_arities = base.hole_arities();
                if *hole >= base_arities.len() {
                    return Err(Error::HoleIndex {
                        index: *hole,
                        holes: base_arities.len(),
                    });
                }
                let inner_count = inner.hole_arities().len();
                let expected = base_arities.len() + inner_count - 1;
                if inputs.len() != expected {
                    return Err(Error::InputCount {
                        holes: expected,
                        inputs: inputs.len(),
                    });
                }
                let y = inner.eval_recursive(family, &inputs[*hole..hole + inner_count])?;
                let mut base_inputs: Vec<AlgebraElement> = inputs[..*hole].to_vec();
                base_inputs.push(y);
                base_inputs.extend_from_slice(&inputs[hole + inner_count..]);
                base.eval_recursive(family, &base_inputs)
            }
        }
    }

    /// Flatten first, then evaluate the single resulting tangle.
    pub fn flatten_eval(
        &self,
        family: Family,
        inputs: &[AlgebraElement],
    ) -> Result<AlgebraElement> {
        self.flatten()?.eval(family, inputs)
    }
}

/// A random composition tree with the given output arity. Leaves are
/// elementary tangles; holes are wrapped with random sub-trees while the
/// depth budget lasts. Deterministic given the generator state.
pub fn random_tangle_tree<R: Rng>(target: usize, depth: usize, rng: &mut R) -> TangleTree {
    debug_assert!(target >= 1);
    let mut choices: Vec<PlanarTangle> = vec![
        multiplication(target).unwrap(),
        rotation(target).unwrap(),
        unit(target).unwrap(),
        identity_tangle(target).unwrap(),
        conditional_expectation(target + 1).unwrap(),
    ];
    if target >= 2 {
        choices.push(jones_projection(target).unwrap());
        choices.push(inclusion(target - 1).unwrap());
    }
    let leaf = choices.swap_remove(rng.gen_range(0..choices.len()));
    let mut tree = TangleTree::Leaf(leaf);
    if depth == 0 {
        return tree;
    }
    for _ in 0..2 {
        let arities = tree.hole_arities();
        if arities.is_empty() || !rng.gen_bool(0.7) {
            break;
        }
        let hole = rng.gen_range(0..arities.len());
        let inner = random_tangle_tree(arities[hole], depth - 1, rng);
        tree = TangleTree::Compose {
            base: Box::new(tree),
            hole,
            inner: Box::new(inner),
        };
    }
    tree
}

/// Random inputs matching a tree's holes.
pub fn random_inputs_for<R: Rng>(
    tree: &TangleTree,
    family: Family,
    rng: &mut R,
) -> Vec<AlgebraElement> {
    tree.hole_arities()
        .into_iter()
        .map(|arity| random_element(family, arity, rng))
        .collect()
}
