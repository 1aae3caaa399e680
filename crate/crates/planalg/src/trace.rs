//! The normalized trace, its Gram forms, and numeric positivity analysis.
//!
//! The trace closes a diagram by joining each top point to the bottom point
//! directly below it and evaluates the resulting loops, normalized by
//! `a^-n b^-n` so the identity has trace 1. The Gram form `tr(y^* x)` turns
//! each level into a metric space; evaluating it numerically over a range of
//! loop parameters exposes exactly where the form degenerates.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

use crate::algebra::{
    intermediate_p, jones_e, random_element, stack_cached, AlgebraElement, RelationCheck,
};
use crate::diagram::{enumerate, Diagram, Family};
use crate::error::{Error, Result};
use crate::scalar::ParamScalar;
use rand::Rng;

/// Largest basis size for which Gram matrices are computed.
pub const GRAM_DIMENSION_BOUND: usize = 2000;

/// The normalized trace: linear extension of
/// `tr(d) = a^(la - n) * b^(lb - n)` where `(la, lb)` counts the closure
/// loops of `d`.
pub fn markov_trace(x: &AlgebraElement) -> ParamScalar {
    let n = x.level() as i32;
    let mut out = ParamScalar::zero();
    for (d, c) in x.terms() {
        let loops = d.closure_loops();
        let monomial =
            ParamScalar::int_monomial(1, loops.a_loops as i32 - n, loops.b_loops as i32 - n);
        out += &(c * &monomial);
    }
    out
}

fn scalar_check(name: String, lhs: &ParamScalar, rhs: &ParamScalar) -> RelationCheck {
    let holds = lhs == rhs;
    RelationCheck {
        name,
        holds,
        witness: (!holds).then(|| format!("lhs = {lhs}, rhs = {rhs}")),
    }
}

/// Verify the compatibility of the trace with the tower, exactly: for the
/// identity and `samples` random elements `x` at level `n`,
/// `tr(include(x) * e_n) = (ab)^-2 * tr(x)`, and in the two-color family
/// additionally `tr(include(x) * p_n) = b^-2 * tr(x)` for odd `n`
/// (`a^-2` for even `n`).
pub fn markov_property_check<R: Rng>(
    family: Family,
    n: usize,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<RelationCheck>> {
    let e_n = jones_e(family, n + 1, n)?;
    let mut targets: Vec<(String, AlgebraElement, ParamScalar)> = vec![(
        format!("e_{n}"),
        e_n,
        ParamScalar::ab_power(-2),
    )];
    if family == Family::Fc {
        let ratio = if n % 2 == 1 {
            ParamScalar::int_monomial(1, 0, -2)
        } else {
            ParamScalar::int_monomial(1, -2, 0)
        };
        targets.push((format!("p_{n}"), intermediate_p(family, n + 1, n)?, ratio));
    }

    let mut xs = vec![("1".to_string(), AlgebraElement::one(family, n))];
    for idx in 0..samples {
        xs.push((format!("x_{idx}"), random_element(family, n, rng)));
    }

    let mut checks = Vec::new();
    for (gen_name, gen, ratio) in &targets {
        for (x_name, x) in &xs {
            let lhs = markov_trace(&x.include().multiply(gen)?);
            let rhs = &markov_trace(x) * ratio;
            checks.push(scalar_check(
                format!("tr(include({x_name})*{gen_name}) = ({ratio})*tr({x_name})"),
                &lhs,
                &rhs,
            ));
        }
    }
    Ok(checks)
}

/// The exact Gram matrix of a level: `entries[i][j] = tr(involute(d_j) * d_i)`
/// over the basis in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub family: Family,
    pub n: usize,
    pub basis: Arc<Vec<Diagram>>,
    pub entries: Vec<Vec<ParamScalar>>,
}

/// One Gram entry: the product of two basis diagrams is a loop monomial
/// times a basis diagram, so its trace is a single monomial.
fn gram_entry(d: &Diagram, e_involuted: &Diagram) -> ParamScalar {
    let n = d.level() as i32;
    let (prod, stacked) = stack_cached(e_involuted, d);
    let closed = prod.closure_loops();
    ParamScalar::int_monomial(
        1,
        (stacked.a_loops + closed.a_loops) as i32 - n,
        (stacked.b_loops + closed.b_loops) as i32 - n,
    )
}

/// Compute the full Gram matrix at a level, exactly. Entries are computed in
/// parallel over the upper triangle and mirrored (`tr(y^* x) = tr(x^* y)`
/// because the coefficients are rational).
pub fn gram_matrix(family: Family, n: usize) -> Result<GramMatrix> {
    let basis = enumerate(family, n);
    let dim = basis.len();
    if dim > GRAM_DIMENSION_BOUND {
        return Err(Error::DimensionGuard {
            dim,
            bound: GRAM_DIMENSION_BOUND,
        });
    }
    let involuted: Vec<Diagram> = basis.iter().map(Diagram::involute).collect();
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i..dim).map(move |j| (i, j)))
        .collect();
    let computed: Vec<ParamScalar> = pairs
        .par_iter()
        .map(|&(i, j)| gram_entry(&basis[i], &involuted[j]))
        .collect();
    let mut entries = vec![vec![ParamScalar::zero(); dim]; dim];
    for (&(i, j), s) in pairs.iter().zip(computed) {
        entries[i][j] = s.clone();
        entries[j][i] = s;
    }
    Ok(GramMatrix {
        family,
        n,
        basis,
        entries,
    })
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Evaluate every entry at a positive parameter point.
    pub fn eval(&self, a_val: f64, b_val: f64) -> Result<DMatrix<f64>> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = self.entries[i][j].eval(a_val, b_val)?;
            }
        }
        Ok(m)
    }
}

/// Numeric summary of the Gram form at one parameter value.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub delta: f64,
    pub det: f64,
    pub min_eig: f64,
    pub rank: usize,
    #[serde(skip)]
    pub max_eig: f64,
}

struct EigenSummary {
    det: f64,
    det_sign: f64,
    min_eig: f64,
    max_abs: f64,
    rank: usize,
    rcond: f64,
}

fn eigen_summary(m: DMatrix<f64>, tol: f64) -> EigenSummary {
    let eigenvalues = SymmetricEigen::new(m).eigenvalues;
    let mut det = 1.0;
    let mut det_sign = 1.0;
    let mut min_eig = f64::INFINITY;
    let mut max_abs: f64 = 0.0;
    let mut min_abs = f64::INFINITY;
    for &l in eigenvalues.iter() {
        det *= l;
        det_sign *= if l == 0.0 { 0.0 } else { l.signum() };
        min_eig = min_eig.min(l);
        max_abs = max_abs.max(l.abs());
        min_abs = min_abs.min(l.abs());
    }
    let rank = eigenvalues.iter().filter(|l| l.abs() > tol * max_abs).count();
    let rcond = if max_abs == 0.0 { 0.0 } else { min_abs / max_abs };
    EigenSummary {
        det,
        det_sign,
        min_eig,
        max_abs,
        rank,
        rcond,
    }
}

/// Evaluate the single-parameter Gram form at each `delta` (so the monomial
/// `ab` takes the value `delta`) and report determinant, smallest
/// eigenvalue, and numeric rank. Rank counts eigenvalues above
/// `tol * max |eigenvalue|`.
pub fn positivity_scan(
    family: Family,
    n: usize,
    deltas: &[f64],
    tol: f64,
) -> Result<Vec<ScanPoint>> {
    if family != Family::Tl {
        return Err(Error::WrongFamily {
            required: Family::Tl,
            got: family,
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    for &d in deltas {
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "loop values must be positive and finite, got {d}"
            )));
        }
    }
    let gram = gram_matrix(family, n)?;
    deltas
        .par_iter()
        .map(|&delta| {
            let s = eigen_summary(gram.eval(delta.sqrt(), delta.sqrt())?, tol);
            Ok(ScanPoint {
                delta,
                det: s.det,
                min_eig: s.min_eig,
                rank: s.rank,
                max_eig: s.max_abs,
            })
        })
        .collect()
}

/// Locate the parameter values in `(lo, hi]` where the single-parameter
/// level-`n` Gram form degenerates. Sign changes of the determinant are
/// refined by bisection; near-zero local minima of the relative conditioning
/// (which catch roots of even multiplicity, where the determinant touches
/// zero without changing sign) are refined by golden-section search.
/// Estimates closer than 1e-6 are merged.
pub fn quantization_detect(n: usize, lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if !lo.is_finite() || !hi.is_finite() || !(lo > 0.0) || !(hi > lo) || hi > 2.0 {
        return Err(Error::InvalidGrid(format!(
            "need 0 < lo < hi <= 2, got [{lo}, {hi}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 grid points, got {steps}"
        )));
    }
    let gram = gram_matrix(Family::Tl, n)?;
    let probe = |delta: f64| -> Result<(f64, f64)> {
        let s = eigen_summary(gram.eval(delta.sqrt(), delta.sqrt())?, 1e-9);
        Ok((s.det_sign, s.rcond))
    };

    let grid: Vec<f64> = (0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect();
    let stats: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&d| probe(d))
        .collect::<Result<Vec<_>>>()?;

    let mut candidates = Vec::new();
    for i in 0..steps {
        if stats[i].0 == 0.0 {
            candidates.push(grid[i]);
        }
    }
    for i in 0..steps - 1 {
        if stats[i].0 * stats[i + 1].0 < 0.0 {
            let (mut a, mut b) = (grid[i], grid[i + 1]);
            let sign_a = stats[i].0;
            while b - a > 1e-10 {
                let mid = 0.5 * (a + b);
                let sm = probe(mid)?.0;
                if sm == 0.0 {
                    a = mid;
                    b = mid;
                } else if sm == sign_a {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            candidates.push(0.5 * (a + b));
        }
    }
    for i in 1..steps.saturating_sub(1) {
        let r = stats[i].1;
        if r < 1e-3 && r <= stats[i - 1].1 && r <= stats[i + 1].1 {
            let x = golden_minimize(|d| Ok(probe(d)?.1), grid[i - 1], grid[i + 1])?;
            if probe(x)?.1 < 1e-7 {
                candidates.push(x);
            }
        }
    }

    candidates.sort_by(f64::total_cmp);
    let mut roots: Vec<f64> = Vec::new();
    for c in candidates {
        if roots.last().is_none_or(|&last| c - last > 1e-6) {
            roots.push(c);
        }
    }
    Ok(roots)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
fn golden_minimize(mut f: impl FnMut(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INVPHI * (b - a);
    let mut x2 = a + INVPHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > 1e-10 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INVPHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INVPHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(0.5 * (a + b))
}
