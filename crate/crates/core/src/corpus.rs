//! The built-in corpus: six small categories exercising every edge of the
//! library, their standard topologies, and an exhaustive audit suite.
//!
//! - `c2`, `c3`: chains, the simplest frames;
//! - `b2`: the diamond (the four-element Boolean algebra);
//! - `n5_poset`: the pentagon, the classical non-distributive lattice;
//! - `pp`: a parallel pair, the smallest category with no terminal object
//!   and a non-principal sieve union;
//! - `m1`: the two-element idempotent monoid as a one-object category;
//! - `pt`: two objects with two points, a retraction, and the associated
//!   idempotents; the richest covering structure in the corpus.

pub mod suite;

use crate::filters::SieveAssignment;
use crate::fincat::{self, CategorySpec, FiniteCategory};
use crate::frames::{self, Frame};
use crate::sieve::Sieve;
use crate::topology::GrothendieckTopology;

fn poset(elements: &[&str], strictly_below: &[(&str, &str)]) -> FiniteCategory {
    let elements: Vec<String> = elements.iter().map(|s| s.to_string()).collect();
    let relation = full_relation(&elements, strictly_below);
    fincat::from_poset(&elements, &relation).expect("corpus posets are valid")
}

fn full_relation(elements: &[String], strictly_below: &[(&str, &str)]) -> Vec<(String, String)> {
    let mut relation: Vec<(String, String)> =
        elements.iter().map(|e| (e.clone(), e.clone())).collect();
    for (x, y) in strictly_below {
        relation.push((x.to_string(), y.to_string()));
    }
    relation
}

/// The two-element chain 0 < 1.
pub fn c2() -> FiniteCategory {
    poset(&["0", "1"], &[("0", "1")])
}

/// The three-element chain 0 < m < 1.
pub fn c3() -> FiniteCategory {
    poset(&["0", "m", "1"], &[("0", "m"), ("0", "1"), ("m", "1")])
}

/// The diamond 0 < a, b < 1 with a, b incomparable.
pub fn b2() -> FiniteCategory {
    poset(
        &["0", "a", "b", "1"],
        &[("0", "a"), ("0", "b"), ("0", "1"), ("a", "1"), ("b", "1")],
    )
}

/// The pentagon as raw poset data: 0 < a < c < 1 and 0 < b < 1, with b
/// incomparable to both a and c. Fails distributivity, so it is corpus
/// material for the negative frame path only.
pub fn n5_poset() -> (Vec<String>, Vec<(String, String)>) {
    let elements: Vec<String> = ["0", "1", "a", "b", "c"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let relation = full_relation(
        &elements,
        &[
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("0", "1"),
            ("a", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
    );
    (elements, relation)
}

/// The parallel pair X ⇉ Y.
pub fn pp() -> FiniteCategory {
    let mut spec = CategorySpec {
        objects: vec!["X".into(), "Y".into()],
        ..CategorySpec::default()
    }
    .morphism("id_X", "X", "X")
    .morphism("id_Y", "Y", "Y")
    .morphism("f", "X", "Y")
    .morphism("g", "X", "Y");
    spec.identities.insert("X".into(), "id_X".into());
    spec.identities.insert("Y".into(), "id_Y".into());
    fincat::validate_category(&spec).expect("the parallel pair is a category")
}

/// The idempotent monoid {e, s} with s∘s = s, as a one-object category.
pub fn m1() -> FiniteCategory {
    let mut spec = CategorySpec {
        objects: vec!["*".into()],
        ..CategorySpec::default()
    }
    .morphism("e", "*", "*")
    .morphism("s", "*", "*")
    .compose("s", "s", "s");
    spec.identities.insert("*".into(), "e".into());
    fincat::validate_category(&spec).expect("the idempotent monoid is a category")
}

/// The pointed-two category: terminal T, an object C with points p0, p1, a
/// retraction c: C -> T, and the idempotents e0 = p0∘c, e1 = p1∘c.
pub fn pt() -> FiniteCategory {
    let mut spec = CategorySpec {
        objects: vec!["C".into(), "T".into()],
        ..CategorySpec::default()
    }
    .morphism("id_C", "C", "C")
    .morphism("id_T", "T", "T")
    .morphism("p0", "T", "C")
    .morphism("p1", "T", "C")
    .morphism("c", "C", "T")
    .morphism("e0", "C", "C")
    .morphism("e1", "C", "C")
    .compose("c", "p0", "id_T")
    .compose("c", "p1", "id_T")
    .compose("c", "e0", "c")
    .compose("c", "e1", "c")
    .compose("p0", "c", "e0")
    .compose("p1", "c", "e1")
    .compose("e0", "p0", "p0")
    .compose("e0", "p1", "p0")
    .compose("e0", "e0", "e0")
    .compose("e0", "e1", "e0")
    .compose("e1", "p0", "p1")
    .compose("e1", "p1", "p1")
    .compose("e1", "e0", "e1")
    .compose("e1", "e1", "e1");
    spec.identities.insert("C".into(), "id_C".into());
    spec.identities.insert("T".into(), "id_T".into());
    fincat::validate_category(&spec).expect("the pointed-two category is lawful")
}

/// The standard topology on `pt`: everything covers T, while C is covered by
/// the maximal sieve and by S1 = {e0, e1, p0, p1}.
pub fn pt_topology(cat: &FiniteCategory) -> GrothendieckTopology {
    let c = cat.object_by_name("C").expect("pt has object C");
    let s1 = Sieve::new(
        cat,
        c,
        fincat::morphisms_by_name(cat, &["e0", "e1", "p0", "p1"]),
    )
    .expect("S1 is a sieve");
    let mut assignment = SieveAssignment::new();
    let covers = [crate::sieve::maximal_sieve(cat, c), s1]
        .into_iter()
        .collect();
    assignment.insert(c, covers);
    GrothendieckTopology::new(cat, assignment)
}

pub fn c2_frame() -> Frame {
    let elements: Vec<String> = vec!["0".into(), "1".into()];
    let relation = full_relation(&elements, &[("0", "1")]);
    frames::frame_from_poset(&elements, &relation).expect("chains are frames")
}

pub fn c3_frame() -> Frame {
    let elements: Vec<String> = vec!["0".into(), "m".into(), "1".into()];
    let relation = full_relation(&elements, &[("0", "m"), ("0", "1"), ("m", "1")]);
    frames::frame_from_poset(&elements, &relation).expect("chains are frames")
}

pub fn b2_frame() -> Frame {
    let elements: Vec<String> = vec!["0".into(), "a".into(), "b".into(), "1".into()];
    let relation = full_relation(
        &elements,
        &[("0", "a"), ("0", "b"), ("0", "1"), ("a", "1"), ("b", "1")],
    );
    frames::frame_from_poset(&elements, &relation).expect("the diamond is a frame")
}

/// Every corpus category under a stable label, in report order.
pub fn categories() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("b2", b2()),
        ("c2", c2()),
        ("c3", c3()),
        ("m1", m1()),
        ("pp", pp()),
        ("pt", pt()),
    ]
}

/// Every corpus topology under a stable label: the trivial topology on each
/// category, the canonical topology on each frame, and the pt topology.
pub fn topologies() -> Vec<(String, FiniteCategory, GrothendieckTopology)> {
    let mut out = Vec::new();
    for (label, cat) in categories() {
        let trivial = GrothendieckTopology::trivial(&cat);
        out.push((format!("{label}/trivial"), cat, trivial));
    }
    for (label, frame) in [("b2", b2_frame()), ("c2", c2_frame()), ("c3", c3_frame())] {
        let j = frames::canonical_topology(&frame);
        out.push((format!("{label}/canonical"), frame.category().clone(), j));
    }
    let cat = pt();
    let j = pt_topology(&cat);
    out.push(("pt/standard".to_string(), cat, j));
    out
}
