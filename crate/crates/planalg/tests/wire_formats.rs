//! Frozen JSON wire formats: exact shapes for diagrams, elements, tangles,
//! tower graphs, and scan records, plus roundtrips and rejection of
//! malformed input.

use planalg::{
    bratteli, gram_matrix, inclusion, jones_e, multiplication, positivity_scan, random_element,
    AlgebraElement, Diagram, Family, PlanarTangle,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[test]
fn diagram_json_is_frozen() {
    let e = Diagram::new(Family::Tl, 2, vec![1, 0, 3, 2]).unwrap();
    assert_eq!(
        serde_json::to_value(&e).unwrap(),
        json!({"family": "TL", "n": 2, "pairing": [1, 0, 3, 2]})
    );
    let back: Diagram = serde_json::from_value(json!({
        "family": "TL", "n": 2, "pairing": [1, 0, 3, 2]
    }))
    .unwrap();
    assert_eq!(back, e);
}

#[test]
fn element_json_is_frozen() {
    let e1 = jones_e(Family::Tl, 2, 1).unwrap();
    assert_eq!(
        serde_json::to_value(&e1).unwrap(),
        json!({
            "family": "TL",
            "n": 2,
            "terms": [
                {"diagram": {"family": "TL", "n": 2, "pairing": [1, 0, 3, 2]},
                 "coeff": "a^-1*b^-1"}
            ]
        })
    );
}

#[test]
fn element_json_roundtrips_for_random_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for family in [Family::Tl, Family::Fc] {
        for n in 0..=3 {
            for _ in 0..10 {
                let x = random_element(family, n, &mut rng);
                let text = serde_json::to_string(&x).unwrap();
                let back: AlgebraElement = serde_json::from_str(&text).unwrap();
                assert_eq!(back, x);
            }
        }
    }
}

#[test]
fn malformed_diagram_json_is_rejected() {
    // A crossing.
    assert!(serde_json::from_value::<Diagram>(json!({
        "family": "TL", "n": 2, "pairing": [2, 3, 0, 1]
    }))
    .is_err());
    // Color-breaking chord in the two-color family.
    assert!(serde_json::from_value::<Diagram>(json!({
        "family": "FC", "n": 1, "pairing": [1, 0, 3, 2]
    }))
    .is_err());
    // Not an involution.
    assert!(serde_json::from_value::<Diagram>(json!({
        "family": "TL", "n": 1, "pairing": [0, 1]
    }))
    .is_err());
}

#[test]
fn malformed_element_json_is_rejected() {
    // Term level disagrees with the element level.
    assert!(serde_json::from_value::<AlgebraElement>(json!({
        "family": "TL", "n": 2,
        "terms": [{"diagram": {"family": "TL", "n": 1, "pairing": [1, 0]}, "coeff": "1"}]
    }))
    .is_err());
    // Unparsable coefficient.
    assert!(serde_json::from_value::<AlgebraElement>(json!({
        "family": "TL", "n": 1,
        "terms": [{"diagram": {"family": "TL", "n": 1, "pairing": [1, 0]}, "coeff": "a^^2"}]
    }))
    .is_err());
}

#[test]
fn duplicate_diagrams_in_element_json_accumulate() {
    let x: AlgebraElement = serde_json::from_value(json!({
        "family": "TL", "n": 1,
        "terms": [
            {"diagram": {"family": "TL", "n": 1, "pairing": [1, 0]}, "coeff": "a"},
            {"diagram": {"family": "TL", "n": 1, "pairing": [1, 0]}, "coeff": "-a"}
        ]
    }))
    .unwrap();
    assert!(x.is_zero());
}

#[test]
fn tangle_json_is_frozen_and_roundtrips() {
    let t = multiplication(1).unwrap();
    let value = serde_json::to_value(&t).unwrap();
    assert_eq!(
        value,
        json!({
            "k": 1,
            "holes": [
                {"arity": 1, "first_point": 0},
                {"arity": 1, "first_point": 0}
            ],
            "strings": [
                [[-1, 0], [0, 0]],
                [[-1, 1], [1, 1]],
                [[0, 1], [1, 0]]
            ],
            "free_loops": 0,
            "outer_first_point": 0
        })
    );
    let back: PlanarTangle = serde_json::from_value(value).unwrap();
    assert_eq!(back, t);

    let inc = inclusion(2).unwrap();
    let back: PlanarTangle =
        serde_json::from_str(&serde_json::to_string(&inc).unwrap()).unwrap();
    assert_eq!(back, inc);
}

#[test]
fn graph_json_is_frozen() {
    let g = bratteli(Family::Tl, 2);
    assert_eq!(
        serde_json::to_value(&g).unwrap(),
        json!({
            "levels": [
                {"vertices": [{"label": "0", "dim": 1}], "edges": [[0, 0, 1]]},
                {"vertices": [{"label": "1", "dim": 1}], "edges": [[0, 0, 1], [0, 1, 1]]},
                {"vertices": [{"label": "0", "dim": 1}, {"label": "2", "dim": 1}],
                 "edges": []}
            ]
        })
    );
}

#[test]
fn two_color_graph_labels_are_color_words() {
    let g = bratteli(Family::Fc, 2);
    let labels: Vec<String> = g.levels[2]
        .vertices
        .iter()
        .map(|v| v.label.to_string())
        .collect();
    assert_eq!(labels, ["∅", "aa", "abba"]);
}

#[test]
fn scan_record_json_has_the_documented_fields() {
    let points = positivity_scan(Family::Tl, 2, &[2.5], 1e-9).unwrap();
    let value = serde_json::to_value(&points).unwrap();
    let record = &value.as_array().unwrap()[0];
    let keys: Vec<&str> = record.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(keys, ["delta", "det", "min_eig", "rank"]);
    assert_eq!(record["rank"], json!(2));
}

#[test]
fn gram_entries_serialize_as_scalar_text() {
    let g = gram_matrix(Family::Tl, 2).unwrap();
    assert_eq!(g.entries[0][1].to_string(), "a^-1*b^-1");
    assert_eq!(g.entries[0][0].to_string(), "1");
}
