//! Exact scalars: Laurent polynomials in the two loop parameters `a` and `b`
//! with arbitrary-precision rational coefficients.
//!
//! The single-strand loop parameter is always represented as the product
//! `a*b`, so one scalar type serves both diagram families. Terms are stored
//! sparsely, keyed by the exponent pair `(i, j)` in lexicographic order, and
//! zero coefficients are never kept.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Sparse Laurent polynomial in `a` and `b` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParamScalar {
    /// Exponent pair `(i, j)` for `a^i * b^j` mapped to its coefficient.
    /// Invariant: no stored coefficient is zero.
    terms: BTreeMap<(i32, i32), BigRational>,
}

impl ParamScalar {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Constant polynomial with integer value `v`.
    pub fn from_int(v: i64) -> Self {
        Self::monomial(BigRational::from_integer(BigInt::from(v)), 0, 0)
    }

    /// The single term `coeff * a^i * b^j`.
    pub fn monomial(coeff: BigRational, i: i32, j: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((i, j), coeff);
        }
        Self { terms }
    }

    /// Integer-coefficient monomial `c * a^i * b^j`.
    pub fn int_monomial(c: i64, i: i32, j: i32) -> Self {
        Self::monomial(BigRational::from_integer(BigInt::from(c)), i, j)
    }

    /// `(a*b)^k`, the scalar of `k` single-strand loops.
    pub fn ab_power(k: i32) -> Self {
        Self::int_monomial(1, k, k)
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate terms in canonical (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &BigRational)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, key: (i32, i32), coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Evaluate at a positive point `(a_val, b_val)`.
    ///
    /// Terms are summed in canonical exponent order so the result is
    /// bit-reproducible. Non-positive or non-finite points are rejected
    /// because negative exponents and the positivity analyses downstream
    /// only make sense on the positive quadrant.
    pub fn eval(&self, a_val: f64, b_val: f64) -> Result<f64> {
        if !(a_val.is_finite() && b_val.is_finite() && a_val > 0.0 && b_val > 0.0) {
            return Err(Error::NonPositivePoint { a: a_val, b: b_val });
        }
        let mut acc = 0.0;
        for ((i, j), c) in &self.terms {
            let c = c.to_f64().expect("rational out of f64 range");
            acc += c * a_val.powi(*i) * b_val.powi(*j);
        }
        Ok(acc)
    }

    /// Random scalar with up to `max_terms` terms, exponents in
    /// `[-exp_bound, exp_bound]` and small rational coefficients. Intended
    /// for randomized identity checks.
    pub fn random<R: Rng>(rng: &mut R, max_terms: usize, exp_bound: i32) -> Self {
        let mut out = Self::zero();
        let terms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            let numer = rng.gen_range(-9i64..=9);
            let denom = rng.gen_range(1i64..=9);
            let coeff = BigRational::new(BigInt::from(numer), BigInt::from(denom));
            let i = rng.gen_range(-exp_bound..=exp_bound);
            let j = rng.gen_range(-exp_bound..=exp_bound);
            out.insert_term((i, j), coeff);
        }
        out
    }
}

impl AddAssign<&ParamScalar> for ParamScalar {
    fn add_assign(&mut self, rhs: &ParamScalar) {
        for (k, c) in &rhs.terms {
            self.insert_term(*k, c.clone());
        }
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_term(*k, -c.clone());
        }
        out
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        let mut out = ParamScalar::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &rhs.terms {
                out.insert_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

fn write_factors(f: &mut fmt::Formatter<'_>, i: i32, j: i32, lead_star: bool) -> fmt::Result {
    let mut star = lead_star;
    for (var, e) in [("a", i), ("b", j)] {
        if e == 0 {
            continue;
        }
        if star {
            write!(f, "*")?;
        }
        star = true;
        if e == 1 {
            write!(f, "{var}")?;
        } else {
            write!(f, "{var}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ParamScalar {
    /// Canonical text form: terms in exponent order, e.g.
    /// `-3/2*a^-1*b^2 + a*b + 1`. `Display` and `FromStr` round-trip.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, ((i, j), c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *i == 0 && *j == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write_factors(f, *i, *j, false)?;
            } else {
                write!(f, "{abs}")?;
                write_factors(f, *i, *j, true)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(input: &str) -> std::result::Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Num(digits.parse().expect("digits")));
            }
            'a' | 'b' => {
                out.push(Token::Var(ch));
                chars.next();
            }
            '+' => {
                out.push(Token::Plus);
                chars.next();
            }
            '-' => {
                out.push(Token::Minus);
                chars.next();
            }
            '*' => {
                out.push(Token::Star);
                chars.next();
            }
            '^' => {
                out.push(Token::Caret);
                chars.next();
            }
            '/' => {
                out.push(Token::Slash);
                chars.next();
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `int := ['-'] digits` (used after `^` and inside rationals).
    fn signed_int(&mut self) -> std::result::Result<BigInt, String> {
        let neg = self.eat(&Token::Minus);
        match self.bump() {
            Some(Token::Num(n)) => Ok(if neg { -n } else { n }),
            other => Err(format!("expected integer, found {other:?}")),
        }
    }

    /// One multiplicative factor: a rational or a variable power.
    fn factor(&mut self) -> std::result::Result<ParamScalar, String> {
        match self.bump() {
            Some(Token::Num(n)) => {
                let denom = if self.eat(&Token::Slash) {
                    match self.bump() {
                        Some(Token::Num(d)) if !d.is_zero() => d,
                        other => return Err(format!("expected nonzero denominator, found {other:?}")),
                    }
                } else {
                    BigInt::one()
                };
                Ok(ParamScalar::monomial(BigRational::new(n, denom), 0, 0))
            }
            Some(Token::Var(v)) => {
                let e = if self.eat(&Token::Caret) {
                    let e = self.signed_int()?;
                    e.to_i32().ok_or_else(|| "exponent out of range".to_string())?
                } else {
                    1
                };
                Ok(if v == 'a' {
                    ParamScalar::int_monomial(1, e, 0)
                } else {
                    ParamScalar::int_monomial(1, 0, e)
                })
            }
            other => Err(format!("expected coefficient or variable, found {other:?}")),
        }
    }

    /// `term := factor (['*'] factor)*`; adjacency means multiplication.
    fn term(&mut self) -> std::result::Result<ParamScalar, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(Token::Num(_)) | Some(Token::Var(_)) => {
                    acc = &acc * &self.factor()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn expr(&mut self) -> std::result::Result<ParamScalar, String> {
        let mut acc = ParamScalar::zero();
        let mut neg = self.eat(&Token::Minus);
        if !neg {
            self.eat(&Token::Plus);
        }
        loop {
            let t = self.term()?;
            if neg {
                acc = &acc - &t;
            } else {
                acc = &acc + &t;
            }
            match self.bump() {
                None => break,
                Some(Token::Plus) => neg = false,
                Some(Token::Minus) => neg = true,
                Some(other) => return Err(format!("expected '+' or '-', found {other:?}")),
            }
        }
        Ok(acc)
    }
}

impl FromStr for ParamScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: String| Error::ScalarParse {
            input: s.to_string(),
            reason,
        };
        let tokens = tokenize(s).map_err(fail)?;
        if tokens.is_empty() {
            return Err(fail("empty input".to_string()));
        }
        let mut parser = Parser { tokens, pos: 0 };
        parser.expr().map_err(fail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zero_is_normalized() {
        let x = ParamScalar::int_monomial(1, 2, -1);
        let y = ParamScalar::int_monomial(-1, 2, -1);
        assert!((&x + &y).is_zero());
        assert_eq!(&x + &y, ParamScalar::zero());
        assert_eq!(format!("{}", ParamScalar::zero()), "0");
    }

    #[test]
    fn display_canonical_forms() {
        assert_eq!(ParamScalar::one().to_string(), "1");
        assert_eq!(ParamScalar::from_int(-7).to_string(), "-7");
        assert_eq!(
            ParamScalar::monomial(rat(3, 2), 2, -1).to_string(),
            "3/2*a^2*b^-1"
        );
        assert_eq!(ParamScalar::int_monomial(-1, 1, 1).to_string(), "-a*b");
        assert_eq!(ParamScalar::ab_power(-2).to_string(), "a^-2*b^-2");
        let mixed = &(&ParamScalar::int_monomial(2, 0, 1) - &ParamScalar::one())
            + &ParamScalar::monomial(rat(-1, 3), 1, 0);
        assert_eq!(mixed.to_string(), "-1 + 2*b - 1/3*a");
    }

    #[test]
    fn parse_accepts_whitespace_and_implicit_products() {
        let canonical: ParamScalar = "3/2*a^2*b^-1 + 1".parse().unwrap();
        let sloppy: ParamScalar = "  3/2 a^2b^-1+1 ".parse().unwrap();
        assert_eq!(canonical, sloppy);
        assert_eq!(
            canonical,
            &ParamScalar::monomial(rat(3, 2), 2, -1) + &ParamScalar::one()
        );
        let neg: ParamScalar = "-a*b - 2".parse().unwrap();
        assert_eq!(
            neg,
            &ParamScalar::int_monomial(-1, 1, 1) - &ParamScalar::from_int(2)
        );
    }

    #[test]
    fn parse_rejects_malformed_input() {
        assert!("".parse::<ParamScalar>().is_err());
        assert!("a^".parse::<ParamScalar>().is_err());
        assert!("2**a".parse::<ParamScalar>().is_err());
        assert!("c".parse::<ParamScalar>().is_err());
        assert!("1/0".parse::<ParamScalar>().is_err());
        assert!("1 + ".parse::<ParamScalar>().is_err());
    }

    #[test]
    fn display_parse_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = ParamScalar::random(&mut rng, 4, 3);
            let back: ParamScalar = x.to_string().parse().unwrap();
            assert_eq!(x, back, "round-trip failed for {x}");
        }
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = ParamScalar::random(&mut rng, 3, 2);
            let y = ParamScalar::random(&mut rng, 3, 2);
            let z = ParamScalar::random(&mut rng, 3, 2);
            assert_eq!(&x + &y, &y + &x);
            assert_eq!(&x * &y, &y * &x);
            assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            assert_eq!(&x * &ParamScalar::one(), x);
            assert_eq!(&x - &x, ParamScalar::zero());
        }
    }

    #[test]
    fn eval_matches_hand_values() {
        let ab = ParamScalar::ab_power(1);
        assert_eq!(ab.eval(2.0, 3.0).unwrap(), 6.0);
        let inv = ParamScalar::ab_power(-1);
        let v = inv.eval(2f64.sqrt(), 2f64.sqrt()).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let mixed: ParamScalar = "a^2*b^-1 - 2".parse().unwrap();
        assert!((mixed.eval(3.0, 2.0).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn eval_rejects_non_positive_points() {
        let x = ParamScalar::one();
        assert!(matches!(
            x.eval(0.0, 1.0),
            Err(Error::NonPositivePoint { .. })
        ));
        assert!(x.eval(-1.0, 1.0).is_err());
        assert!(x.eval(1.0, f64::NAN).is_err());
    }

    #[test]
    fn eval_order_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let x = ParamScalar::random(&mut rng, 6, 3);
            let v1 = x.eval(1.37, 0.81).unwrap();
            let v2 = x.eval(1.37, 0.81).unwrap();
            assert_eq!(v1.to_bits(), v2.to_bits());
        }
    }
}
