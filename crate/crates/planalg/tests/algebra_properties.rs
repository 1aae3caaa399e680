//! Randomized algebraic laws: associativity, distributivity, the inclusion
//! homomorphism, the involution anti-automorphism, and trace symmetries.

use planalg::{markov_trace, random_element, AlgebraElement, Family, ParamScalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn multiplication_is_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut triples = 0;
    for family in [Family::Tl, Family::Fc] {
        for n in 1..=3 {
            for _ in 0..40 {
                let x = random_element(family, n, &mut rng);
                let y = random_element(family, n, &mut rng);
                let z = random_element(family, n, &mut rng);
                assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                triples += 1;
            }
        }
    }
    assert!(triples >= 200);
}

#[test]
fn multiplication_distributes_over_addition() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for family in [Family::Tl, Family::Fc] {
        for n in 1..=3 {
            for _ in 0..20 {
                let x = random_element(family, n, &mut rng);
                let y = random_element(family, n, &mut rng);
                let z = random_element(family, n, &mut rng);
                assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                assert_eq!(&(&y + &z) * &x, &(&y * &x) + &(&z * &x));
            }
        }
    }
}

#[test]
fn one_is_a_two_sided_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
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
fn inclusion_is_a_unital_algebra_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut pairs = 0;
    for family in [Family::Tl, Family::Fc] {
        for n in 1..=4 {
            assert_eq!(
                AlgebraElement::one(family, n).include(),
                AlgebraElement::one(family, n + 1)
            );
            for _ in 0..25 {
                let x = random_element(family, n, &mut rng);
                let y = random_element(family, n, &mut rng);
                assert_eq!((&x * &y).include(), &x.include() * &y.include());
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 200);
}

#[test]
fn involution_reverses_products_and_squares_to_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for family in [Family::Tl, Family::Fc] {
        for n in 1..=3 {
            for _ in 0..25 {
                let x = random_element(family, n, &mut rng);
                let y = random_element(family, n, &mut rng);
                assert_eq!((&x * &y).involute(), &y.involute() * &x.involute());
                assert_eq!(x.involute().involute(), x);
            }
        }
    }
}

#[test]
fn trace_is_involution_invariant_and_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for family in [Family::Tl, Family::Fc] {
        for n in 1..=4 {
            for _ in 0..20 {
                let x = random_element(family, n, &mut rng);
                let y = random_element(family, n, &mut rng);
                assert_eq!(markov_trace(&x.involute()), markov_trace(&x));
                let alpha = ParamScalar::random(&mut rng, 2, 2);
                let combo = &x.scaled(&alpha) + &y;
                let expected = &(&markov_trace(&x) * &alpha) + &markov_trace(&y);
                assert_eq!(markov_trace(&combo), expected);
            }
        }
    }
}

#[test]
fn scalar_multiplication_commutes_with_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for family in [Family::Tl, Family::Fc] {
        let n = rng.gen_range(1..=3);
        for _ in 0..20 {
            let x = random_element(family, n, &mut rng);
            let y = random_element(family, n, &mut rng);
            let alpha = ParamScalar::random(&mut rng, 2, 2);
            assert_eq!(&x.scaled(&alpha) * &y, (&x * &y).scaled(&alpha));
            assert_eq!(&x * &y.scaled(&alpha), (&x * &y).scaled(&alpha));
        }
    }
}
