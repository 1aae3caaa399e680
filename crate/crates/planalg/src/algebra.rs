//! Finite-dimensional diagram algebras: exact linear combinations of basis
//! diagrams, multiplied by stacking.
//!
//! Stacking identifies the bottom row of the left factor with the top row of
//! the right factor, reads the surviving strands off the outer boundary, and
//! turns every closed middle loop into a factor of `a` or `b` (both for a
//! single-strand loop). Structure constants of a basis pair are cached
//! globally after first use.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use dashmap::DashMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{enumerate, fc_color, Color, Diagram, Family, LoopCount};
use crate::error::{Error, Result};
use crate::scalar::ParamScalar;

/// An element of the level-`n` diagram algebra: a finite sum of basis
/// diagrams with exact scalar coefficients. Zero coefficients are never
/// stored, so structural equality is algebra equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct AlgebraElement {
    family: Family,
    n: usize,
    terms: BTreeMap<Diagram, ParamScalar>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    diagram: Diagram,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    family: Family,
    n: usize,
    terms: Vec<RawTerm>,
}

impl From<AlgebraElement> for RawElement {
    fn from(x: AlgebraElement) -> Self {
        RawElement {
            family: x.family,
            n: x.n,
            terms: x
                .terms
                .into_iter()
                .map(|(diagram, coeff)| RawTerm {
                    diagram,
                    coeff: coeff.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<RawElement> for AlgebraElement {
    type Error = Error;
    fn try_from(raw: RawElement) -> Result<Self> {
        let mut out = AlgebraElement::zero(raw.family, raw.n);
        for term in raw.terms {
            if term.diagram.family() != raw.family {
                return Err(Error::FamilyMismatch(term.diagram.family(), raw.family));
            }
            if term.diagram.level() != raw.n {
                return Err(Error::LevelMismatch(term.diagram.level(), raw.n));
            }
            let coeff: ParamScalar = term.coeff.parse()?;
            out.add_term(term.diagram, coeff);
        }
        Ok(out)
    }
}

impl AlgebraElement {
    /// The zero element at the given level.
    pub fn zero(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The multiplicative identity: the identity diagram with coefficient 1.
    pub fn one(family: Family, n: usize) -> Self {
        Self::from_diagram(Diagram::identity(family, n))
    }

    /// A single basis diagram with coefficient 1.
    pub fn from_diagram(d: Diagram) -> Self {
        let mut terms = BTreeMap::new();
        let family = d.family();
        let n = d.level();
        terms.insert(d, ParamScalar::one());
        Self { family, n, terms }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (diagram) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &ParamScalar)> {
        self.terms.iter()
    }

    /// Add `coeff * d`, dropping the term if the total cancels.
    pub fn add_term(&mut self, d: Diagram, coeff: ParamScalar) {
        debug_assert_eq!(d.family(), self.family);
        debug_assert_eq!(d.level(), self.n);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(d) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Multiply every coefficient by `s`.
    pub fn scaled(&self, s: &ParamScalar) -> Self {
        let mut out = Self::zero(self.family, self.n);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), c * s);
        }
        out
    }

    fn check_compatible(&self, rhs: &Self) -> Result<()> {
        if self.family != rhs.family {
            return Err(Error::FamilyMismatch(self.family, rhs.family));
        }
        if self.n != rhs.n {
            return Err(Error::LevelMismatch(self.n, rhs.n));
        }
        Ok(())
    }

    /// Product by diagram stacking, bilinear over the stored terms.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let mut out = Self::zero(self.family, self.n);
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                let (d, loops) = stack_cached(d1, d2);
                let loop_scalar =
                    ParamScalar::int_monomial(1, loops.a_loops as i32, loops.b_loops as i32);
                out.add_term(d, &(c1 * c2) * &loop_scalar);
            }
        }
        Ok(out)
    }

    /// Top-bottom reflection extended coefficient-wise; an
    /// anti-automorphism of the algebra.
    pub fn involute(&self) -> Self {
        let mut out = Self::zero(self.family, self.n);
        for (d, c) in &self.terms {
            out.add_term(d.involute(), c.clone());
        }
        out
    }

    /// Unital inclusion into level `n + 1`: add one through strand (one
    /// through cable in the two-color family) on the right.
    pub fn include(&self) -> Self {
        let row = self.family.row_points(self.n);
        let step = self.family.row_points(1);
        let old_len = 2 * row;
        let new_len = old_len + 2 * step;
        let map = |p: usize| if p < row { p } else { p + 2 * step };
        let mut out = Self::zero(self.family, self.n + 1);
        for (d, c) in &self.terms {
            let mut pairing = vec![usize::MAX; new_len];
            for p in 0..old_len {
                pairing[map(p)] = map(d.partner(p));
            }
            for s in 0..step {
                let top = row + s;
                let bottom = new_len - 1 - top;
                pairing[top] = bottom;
                pairing[bottom] = top;
            }
            let d2 = Diagram::new(self.family, self.n + 1, pairing)
                .expect("inclusion preserves validity");
            out.add_term(d2, c.clone());
        }
        out
    }

    /// Double every strand into an `(a, b)` cable: the injective algebra
    /// homomorphism from the single-strand family into the two-color one.
    /// Coefficients carry over unchanged because a single-strand loop is
    /// already recorded as the monomial `a*b`.
    pub fn double(&self) -> Result<Self> {
        if self.family != Family::Tl {
            return Err(Error::WrongFamily {
                required: Family::Tl,
                got: self.family,
            });
        }
        let mut out = Self::zero(Family::Fc, self.n);
        for (d, c) in &self.terms {
            out.add_term(double_diagram(d), c.clone());
        }
        Ok(out)
    }
}

/// Double a single-strand diagram: chord `{j, j'}` with `j < j'` becomes the
/// parallel pair `{2j, 2j'+1}`, `{2j+1, 2j'}`. Chords join opposite parities,
/// so the doubled strands automatically join equal colors.
fn double_diagram(d: &Diagram) -> Diagram {
    let len = 2 * d.pairing().len();
    let mut pairing = vec![usize::MAX; len];
    for (j, &j2) in d.pairing().iter().enumerate() {
        if j2 < j {
            continue;
        }
        pairing[2 * j] = 2 * j2 + 1;
        pairing[2 * j2 + 1] = 2 * j;
        pairing[2 * j + 1] = 2 * j2;
        pairing[2 * j2] = 2 * j + 1;
    }
    Diagram::new(Family::Fc, d.level(), pairing).expect("doubling preserves validity")
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.check_compatible(rhs).expect("incompatible elements");
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &-rhs
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.family, self.n);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), -c);
        }
        out
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.multiply(rhs).expect("incompatible elements")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (d, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{:?}", d.pairing())?;
        }
        Ok(())
    }
}

type StackCache = DashMap<(Diagram, Diagram), (Diagram, LoopCount)>;

fn stack_cache() -> &'static StackCache {
    static CACHE: OnceLock<StackCache> = OnceLock::new();
    CACHE.get_or_init(DashMap::new)
}

pub(crate) fn stack_cached(d1: &Diagram, d2: &Diagram) -> (Diagram, LoopCount) {
    let key = (d1.clone(), d2.clone());
    if let Some(hit) = stack_cache().get(&key) {
        return hit.clone();
    }
    let value = stack(d1, d2);
    stack_cache().insert(key, value.clone());
    value
}

/// Stack `d1` on top of `d2`: glue the bottom row of `d1` to the top row of
/// `d2`, trace the surviving strands, and count the closed loops by color.
fn stack(d1: &Diagram, d2: &Diagram) -> (Diagram, LoopCount) {
    debug_assert_eq!(d1.family(), d2.family());
    debug_assert_eq!(d1.level(), d2.level());
    let family = d1.family();
    let n = d1.level();
    let row = family.row_points(n);
    let len = 2 * row;

    // Nodes 0..len belong to d1, nodes len..2*len to d2. The bottom row of
    // d1 (horizontal position u = len-1-p) meets the top row of d2 at its
    // position u, which works out to the involution node <-> 2*len-1-node on
    // the middle band [row, len+row).
    let pair = |node: usize| {
        if node < len {
            d1.partner(node)
        } else {
            len + d2.partner(node - len)
        }
    };
    let glue = |node: usize| {
        if (row..len + row).contains(&node) {
            Some(2 * len - 1 - node)
        } else {
            None
        }
    };

    let mut seen = vec![false; 2 * len];
    let mut pairing = vec![usize::MAX; len];
    // Boundary-to-boundary walks give the strands of the product: the top
    // row of d1 keeps its positions, the bottom row of d2 keeps its own.
    let result_pos = |node: usize| if node < row { node } else { node - len };
    for start in (0..row).chain(len + row..2 * len) {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut cur = pair(start);
        seen[cur] = true;
        while let Some(g) = glue(cur) {
            cur = g;
            seen[cur] = true;
            cur = pair(cur);
            seen[cur] = true;
        }
        let (x, y) = (result_pos(start), result_pos(cur));
        pairing[x] = y;
        pairing[y] = x;
    }

    // Everything not reached from the boundary closes up in the middle band.
    let mut loops = LoopCount::default();
    for start in 0..2 * len {
        if seen[start] {
            continue;
        }
        let mut cur = start;
        loop {
            seen[cur] = true;
            let p = pair(cur);
            seen[p] = true;
            cur = glue(p).expect("closed loop stays in the middle band");
            if cur == start {
                break;
            }
        }
        match family {
            Family::Tl => {
                loops.a_loops += 1;
                loops.b_loops += 1;
            }
            Family::Fc => {
                let pos = if start < len { start } else { start - len };
                match fc_color(pos) {
                    Color::A => loops.a_loops += 1,
                    Color::B => loops.b_loops += 1,
                }
            }
        }
    }

    let d = Diagram::new(family, n, pairing).expect("stacking preserves validity");
    (d, loops)
}

/// The unnormalized cup-cap diagram at strands `i, i+1` (1-indexed).
fn cup_cap_diagram(n: usize, i: usize) -> Diagram {
    let len = 2 * n;
    let mut pairing: Vec<usize> = (0..len).map(|p| len - 1 - p).collect();
    let (t1, t2) = (i - 1, i); // top cup
    let (b1, b2) = (len - 1 - i, len - i); // bottom cap
    pairing[t1] = t2;
    pairing[t2] = t1;
    pairing[b1] = b2;
    pairing[b2] = b1;
    Diagram::new(Family::Tl, n, pairing).expect("cup-cap diagram is valid")
}

/// The `i`-th normalized cup-cap idempotent at level `n`, `1 <= i <= n-1`.
/// In the two-color family it is the doubled single-strand generator.
pub fn jones_e(family: Family, n: usize, i: usize) -> Result<AlgebraElement> {
    if i < 1 || i + 1 > n {
        return Err(Error::GeneratorIndex { index: i, n });
    }
    let tl = AlgebraElement::from_diagram(cup_cap_diagram(n, i)).scaled(&ParamScalar::ab_power(-1));
    match family {
        Family::Tl => Ok(tl),
        Family::Fc => tl.double(),
    }
}

/// The `i`-th intermediate idempotent of the two-color family at level `n`,
/// `1 <= i <= n-1`: the two like-colored points between cables `i` and
/// `i + 1` are cupped on top and bottom, scaled by the inverse loop value of
/// that color (`b` for odd `i`, `a` for even `i`).
pub fn intermediate_p(family: Family, n: usize, i: usize) -> Result<AlgebraElement> {
    if family != Family::Fc {
        return Err(Error::WrongFamily {
            required: Family::Fc,
            got: family,
        });
    }
    if i < 1 || i + 1 > n {
        return Err(Error::GeneratorIndex { index: i, n });
    }
    let len = 4 * n;
    let mut pairing: Vec<usize> = (0..len).map(|p| len - 1 - p).collect();
    let (t1, t2) = (2 * i - 1, 2 * i);
    let (b1, b2) = (len - 1 - 2 * i, len - 2 * i);
    pairing[t1] = t2;
    pairing[t2] = t1;
    pairing[b1] = b2;
    pairing[b2] = b1;
    let d = Diagram::new(Family::Fc, n, pairing).expect("intermediate diagram is valid");
    let scale = if i % 2 == 1 {
        ParamScalar::int_monomial(1, 0, -1)
    } else {
        ParamScalar::int_monomial(1, -1, 0)
    };
    Ok(AlgebraElement::from_diagram(d).scaled(&scale))
}

/// A random element: a few random basis diagrams with small random
/// coefficients. Deterministic given the generator state.
pub fn random_element<R: Rng>(family: Family, n: usize, rng: &mut R) -> AlgebraElement {
    let basis = enumerate(family, n);
    let count = rng.gen_range(1..=basis.len().min(4));
    let picks = rand::seq::index::sample(rng, basis.len(), count);
    let mut out = AlgebraElement::zero(family, n);
    for idx in picks.iter() {
        out.add_term(basis[idx].clone(), ParamScalar::random(rng, 2, 2));
    }
    out
}

/// Outcome of one defining-relation check.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
    /// Rendered left- and right-hand sides when the relation fails.
    pub witness: Option<String>,
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            write!(f, "ok   {}", self.name)
        } else {
            write!(
                f,
                "FAIL {}: {}",
                self.name,
                self.witness.as_deref().unwrap_or("")
            )
        }
    }
}

/// Compare two elements exactly and record a witness on failure.
pub fn expect_equal(name: String, lhs: &AlgebraElement, rhs: &AlgebraElement) -> RelationCheck {
    let holds = lhs == rhs;
    RelationCheck {
        name,
        holds,
        witness: (!holds).then(|| format!("lhs = {lhs}, rhs = {rhs}")),
    }
}

/// Verify every defining relation among the level-`n` generators, exactly.
///
/// Single-strand family: `e_i` idempotent and self-adjoint,
/// `e_i e_{i±1} e_i = (a b)^-2 e_i`, and distant generators commute. The
/// two-color family additionally has the intermediate idempotents:
/// `p_i^2 = p_i = p_i^*`, `p_i e_i = e_i p_i = e_i`, all `p` commute with
/// each other, and `p_i` commutes with distant `e_j`.
pub fn check_relations(family: Family, n: usize) -> Result<Vec<RelationCheck>> {
    let inv_sq = ParamScalar::ab_power(-2);
    let e: Vec<AlgebraElement> = (1..n)
        .map(|i| jones_e(family, n, i))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    let el = |i: usize| &e[i - 1];

    for i in 1..n {
        checks.push(expect_equal(
            format!("e_{i}^2 = e_{i}"),
            &(el(i) * el(i)),
            el(i),
        ));
        checks.push(expect_equal(
            format!("e_{i}^* = e_{i}"),
            &el(i).involute(),
            el(i),
        ));
    }
    for i in 1..n.saturating_sub(1) {
        checks.push(expect_equal(
            format!("e_{i} e_{} e_{i} = (ab)^-2 e_{i}", i + 1),
            &(&(el(i) * el(i + 1)) * el(i)),
            &el(i).scaled(&inv_sq),
        ));
        checks.push(expect_equal(
            format!("e_{} e_{i} e_{} = (ab)^-2 e_{}", i + 1, i + 1, i + 1),
            &(&(el(i + 1) * el(i)) * el(i + 1)),
            &el(i + 1).scaled(&inv_sq),
        ));
    }
    for i in 1..n {
        for j in i + 2..n {
            checks.push(expect_equal(
                format!("e_{i} e_{j} = e_{j} e_{i}"),
                &(el(i) * el(j)),
                &(el(j) * el(i)),
            ));
        }
    }

    if family == Family::Fc {
        let p: Vec<AlgebraElement> = (1..n)
            .map(|i| intermediate_p(family, n, i))
            .collect::<Result<_>>()?;
        let pl = |i: usize| &p[i - 1];
        for i in 1..n {
            checks.push(expect_equal(
                format!("p_{i}^2 = p_{i}"),
                &(pl(i) * pl(i)),
                pl(i),
            ));
            checks.push(expect_equal(
                format!("p_{i}^* = p_{i}"),
                &pl(i).involute(),
                pl(i),
            ));
            checks.push(expect_equal(
                format!("p_{i} e_{i} = e_{i}"),
                &(pl(i) * el(i)),
                el(i),
            ));
            checks.push(expect_equal(
                format!("e_{i} p_{i} = e_{i}"),
                &(el(i) * pl(i)),
                el(i),
            ));
        }
        for i in 1..n {
            for j in i + 1..n {
                checks.push(expect_equal(
                    format!("p_{i} p_{j} = p_{j} p_{i}"),
                    &(pl(i) * pl(j)),
                    &(pl(j) * pl(i)),
                ));
            }
        }
        for i in 1..n {
            for j in 1..n {
                if i.abs_diff(j) >= 2 {
                    checks.push(expect_equal(
                        format!("p_{i} e_{j} = e_{j} p_{i}"),
                        &(pl(i) * el(j)),
                        &(el(j) * pl(i)),
                    ));
                }
            }
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for family in [Family::Tl, Family::Fc] {
            for n in 0..=3 {
                let one = AlgebraElement::one(family, n);
                for _ in 0..10 {
                    let x = random_element(family, n, &mut rng);
                    assert_eq!(&one * &x, x);
                    assert_eq!(&x * &one, x);
                }
            }
        }
    }

    #[test]
    fn cup_cap_squares_to_a_loop() {
        // Hand-traced: stacking the level-2 cup-cap on itself closes one loop.
        let e = AlgebraElement::from_diagram(cup_cap_diagram(2, 1));
        let expected = e.scaled(&ParamScalar::ab_power(1));
        assert_eq!(&e * &e, expected);
    }

    #[test]
    fn jones_generators_are_idempotent() {
        for family in [Family::Tl, Family::Fc] {
            for n in 2..=4 {
                for i in 1..n {
                    let e = jones_e(family, n, i).unwrap();
                    assert_eq!(&e * &e, e, "{family} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn doubling_the_cup_cap_gives_the_frozen_nested_pairing() {
        let e = cup_cap_diagram(2, 1);
        let doubled = double_diagram(&e);
        assert_eq!(doubled.pairing(), &[3, 2, 1, 0, 7, 6, 5, 4]);
    }

    #[test]
    fn double_is_multiplicative_smoke() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 0..=3 {
            for _ in 0..10 {
                let x = random_element(Family::Tl, n, &mut rng);
                let y = random_element(Family::Tl, n, &mut rng);
                let lhs = (&x * &y).double().unwrap();
                let rhs = &x.double().unwrap() * &y.double().unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(
            AlgebraElement::one(Family::Tl, 3).double().unwrap(),
            AlgebraElement::one(Family::Fc, 3)
        );
    }

    #[test]
    fn include_is_a_unital_homomorphism_smoke() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for family in [Family::Tl, Family::Fc] {
            assert_eq!(
                AlgebraElement::one(family, 2).include(),
                AlgebraElement::one(family, 3)
            );
            for n in 0..=3 {
                for _ in 0..10 {
                    let x = random_element(family, n, &mut rng);
                    let y = random_element(family, n, &mut rng);
                    assert_eq!((&x * &y).include(), &x.include() * &y.include());
                }
            }
        }
    }

    #[test]
    fn involute_is_anti_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for family in [Family::Tl, Family::Fc] {
            for _ in 0..20 {
                let x = random_element(family, 3, &mut rng);
                let y = random_element(family, 3, &mut rng);
                assert_eq!((&x * &y).involute(), &y.involute() * &x.involute());
            }
        }
    }

    #[test]
    fn braid_like_relation_frozen() {
        let e1 = jones_e(Family::Tl, 3, 1).unwrap();
        let e2 = jones_e(Family::Tl, 3, 2).unwrap();
        let lhs = &(&e1 * &e2) * &e1;
        assert_eq!(lhs, e1.scaled(&ParamScalar::ab_power(-2)));
    }

    #[test]
    fn intermediate_p_interacts_with_e_as_expected() {
        for n in 2..=4 {
            for i in 1..n {
                let p = intermediate_p(Family::Fc, n, i).unwrap();
                let e = jones_e(Family::Fc, n, i).unwrap();
                assert_eq!(&p * &p, p, "p_{i}^2 at n={n}");
                assert_eq!(&p * &e, e, "p_{i} e_{i} at n={n}");
                assert_eq!(&e * &p, e, "e_{i} p_{i} at n={n}");
            }
        }
    }

    #[test]
    fn generator_index_bounds_are_enforced() {
        assert!(matches!(
            jones_e(Family::Tl, 2, 0),
            Err(Error::GeneratorIndex { .. })
        ));
        assert!(matches!(
            jones_e(Family::Tl, 2, 2),
            Err(Error::GeneratorIndex { .. })
        ));
        assert!(matches!(
            intermediate_p(Family::Fc, 3, 3),
            Err(Error::GeneratorIndex { .. })
        ));
        assert!(matches!(
            intermediate_p(Family::Tl, 3, 1),
            Err(Error::WrongFamily { .. })
        ));
    }

    #[test]
    fn multiply_rejects_mismatched_operands() {
        let x = AlgebraElement::one(Family::Tl, 2);
        let y = AlgebraElement::one(Family::Tl, 3);
        assert!(matches!(x.multiply(&y), Err(Error::LevelMismatch(2, 3))));
        let z = AlgebraElement::one(Family::Fc, 2);
        assert!(matches!(x.multiply(&z), Err(Error::FamilyMismatch(..))));
    }

    #[test]
    fn all_defining_relations_hold() {
        for (family, n) in [(Family::Tl, 4), (Family::Fc, 3)] {
            for check in check_relations(family, n).unwrap() {
                assert!(check.holds, "{check}");
            }
        }
    }

    #[test]
    fn corrupted_generator_fails_with_witness() {
        // Unnormalized cup-cap: the idempotent relation must fail and report
        // both sides.
        let bad = AlgebraElement::from_diagram(cup_cap_diagram(2, 1));
        let check = expect_equal("bad^2 = bad".into(), &(&bad * &bad), &bad);
        assert!(!check.holds);
        let witness = check.witness.unwrap();
        assert!(witness.contains("lhs"), "{witness}");
    }

    #[test]
    fn element_json_roundtrip_and_shape() {
        let e = jones_e(Family::Tl, 2, 1).unwrap();
        let json = serde_json::to_value(&e).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "family": "TL",
                "n": 2,
                "terms": [{
                    "diagram": {"family": "TL", "n": 2, "pairing": [1, 0, 3, 2]},
                    "coeff": "a^-1*b^-1"
                }]
            })
        );
        let back: AlgebraElement = serde_json::from_value(json).unwrap();
        assert_eq!(back, e);
        // Terms at the wrong level are rejected.
        let bad = serde_json::json!({
            "family": "TL",
            "n": 3,
            "terms": [{
                "diagram": {"family": "TL", "n": 2, "pairing": [1, 0, 3, 2]},
                "coeff": "1"
            }]
        });
        assert!(serde_json::from_value::<AlgebraElement>(bad).is_err());
    }

    #[test]
    fn level_zero_multiplication_is_scalar_multiplication() {
        let x = AlgebraElement::one(Family::Tl, 0).scaled(&ParamScalar::from_int(3));
        let y = AlgebraElement::one(Family::Tl, 0).scaled(&ParamScalar::ab_power(-1));
        let xy = &x * &y;
        let expected =
            AlgebraElement::one(Family::Tl, 0).scaled(&ParamScalar::int_monomial(3, -1, -1));
        assert_eq!(xy, expected);
    }
}
