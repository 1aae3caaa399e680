//! Randomized laws of the tangle action: operad units, permutation
//! equivariance, multilinearity, and agreement between flattened and
//! recursive evaluation on generated composition trees.

use planalg::{
    identity_tangle, random_element, random_inputs_for, random_tangle_tree, rotation,
    AlgebraElement, Family, ParamScalar, PlanarTangle,
};
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_flat_tangle(rng: &mut ChaCha8Rng) -> PlanarTangle {
    let target = rng.gen_range(1..=3);
    random_tangle_tree(target, 2, rng).flatten().unwrap()
}

#[test]
fn identity_tangle_is_a_two_sided_operad_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..30 {
        let t = random_flat_tangle(&mut rng);
        let outer = identity_tangle(t.output_arity()).unwrap();
        assert_eq!(outer.compose(0, &t).unwrap(), t);
        for (j, h) in t.holes().iter().enumerate() {
            if h.arity >= 1 {
                let inner = identity_tangle(h.arity).unwrap();
                assert_eq!(t.compose(j, &inner).unwrap(), t);
            }
        }
    }
}

#[test]
fn composing_all_rotation_steps_gives_the_identity_tangle() {
    for n in 1..=4 {
        let rho = rotation(n).unwrap();
        let mut t = rho.clone();
        for _ in 1..n {
            t = t.compose(0, &rho).unwrap();
        }
        assert_eq!(t, identity_tangle(n).unwrap());
    }
}

#[test]
fn evaluation_commutes_with_hole_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut permuted_cases = 0;
    while permuted_cases < 20 {
        let t = random_flat_tangle(&mut rng);
        let h = t.holes().len();
        if h < 2 {
            continue;
        }
        permuted_cases += 1;
        let mut perm: Vec<usize> = (0..h).collect();
        perm.shuffle(&mut rng);
        let s = t.permute_holes(&perm).unwrap();
        for family in [Family::Tl, Family::Fc] {
            let inputs: Vec<AlgebraElement> = t
                .holes()
                .iter()
                .map(|spec| random_element(family, spec.arity, &mut rng))
                .collect();
            let permuted_inputs: Vec<AlgebraElement> =
                perm.iter().map(|&old| inputs[old].clone()).collect();
            assert_eq!(
                t.eval(family, &inputs).unwrap(),
                s.eval(family, &permuted_inputs).unwrap()
            );
        }
    }
}

#[test]
fn evaluation_is_multilinear_in_every_hole() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let mut cases = 0;
    while cases < 20 {
        let t = random_flat_tangle(&mut rng);
        if t.holes().is_empty() {
            continue;
        }
        cases += 1;
        let family = if cases % 2 == 0 { Family::Tl } else { Family::Fc };
        let slot = rng.gen_range(0..t.holes().len());
        let arity = t.holes()[slot].arity;
        let base: Vec<AlgebraElement> = t
            .holes()
            .iter()
            .map(|spec| random_element(family, spec.arity, &mut rng))
            .collect();
        let y = random_element(family, arity, &mut rng);
        let alpha = ParamScalar::random(&mut rng, 2, 1);

        let mut combo_inputs = base.clone();
        combo_inputs[slot] = &base[slot].scaled(&alpha) + &y;
        let lhs = t.eval(family, &combo_inputs).unwrap();

        let mut y_inputs = base.clone();
        y_inputs[slot] = y;
        let rhs = &t.eval(family, &base).unwrap().scaled(&alpha)
            + &t.eval(family, &y_inputs).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn flattened_and_recursive_evaluation_agree_on_deep_trees() {
    let mut rng = ChaCha8Rng::seed_from_u64(204);
    for i in 0..60 {
        let family = if i % 2 == 0 { Family::Tl } else { Family::Fc };
        let target = rng.gen_range(1..=3);
        let tree = random_tangle_tree(target, 3, &mut rng);
        let inputs = random_inputs_for(&tree, family, &mut rng);
        let flat = tree.flatten_eval(family, &inputs).unwrap();
        let recursive = tree.eval_recursive(family, &inputs).unwrap();
        assert_eq!(flat, recursive, "tree {i} ({family})");
        assert_eq!(flat.level(), tree.output_arity());
    }
}

#[test]
fn composition_is_associative_on_nested_holes() {
    // Composing u into t, then s into the spliced hole, equals composing
    // s into u first.
    let mut rng = ChaCha8Rng::seed_from_u64(205);
    let mut cases = 0;
    while cases < 15 {
        let t = random_flat_tangle(&mut rng);
        if t.holes().is_empty() {
            continue;
        }
        let j = rng.gen_range(0..t.holes().len());
        let u = random_tangle_tree(t.holes()[j].arity, 1, &mut rng)
            .flatten()
            .unwrap();
        if u.holes().is_empty() {
            continue;
        }
        let i = rng.gen_range(0..u.holes().len());
        let s = random_tangle_tree(u.holes()[i].arity, 0, &mut rng)
            .flatten()
            .unwrap();
        cases += 1;
        let left = t.compose(j, &u).unwrap().compose(j + i, &s).unwrap();
        let right = t.compose(j, &u.compose(i, &s).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}
