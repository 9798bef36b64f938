//! Neighborhoods of points, convergence, closure, and cluster points, with
//! exhaustive audits of the equivalence theorems on small objects.
//!
//! A covering sieve is a neighborhood of a point when the point factors
//! through one of its morphisms; on finite categories this is equivalent to
//! plain membership of the point, and both routes are computed everywhere so
//! a divergence can never pass silently.

use crate::filters::{
    self, Filter, FilterBase, FilterError, FilterViolation, SieveAssignment, SieveSet,
};
use crate::fincat::{FiniteCategory, ObjId, Point};
use crate::sieve::{self, Sieve};
use crate::topology::GrothendieckTopology;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConvergenceError {
    #[error("sieve on `{sieve_object}` cannot be a neighborhood of a point of `{point_object}`")]
    ObjectMismatch {
        sieve_object: String,
        point_object: String,
    },
    #[error("`{point}` is not a cluster point, so the cluster base is undefined")]
    NotClusterPoint { point: String },
}

/// All sieves on one object containing some neighborhood of the point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodSystem {
    point: Point,
    members: SieveSet,
}

impl NeighborhoodSystem {
    pub fn point(&self) -> Point {
        self.point
    }

    pub fn object(&self) -> ObjId {
        self.point.target()
    }

    pub fn members(&self) -> &SieveSet {
        &self.members
    }
}

/// Definitional route: a cover through which the point factors, found by
/// searching all pairs of a member morphism and a point of its domain.
pub fn g_neighborhood_by_search(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    point: &Point,
    sieve: &Sieve,
) -> bool {
    if !topology.covers(sieve) {
        return false;
    }
    sieve.members().iter().any(|&phi| {
        cat.points(cat.dom(phi))
            .expect("a point exists, so a terminal object exists")
            .iter()
            .any(|q| cat.compose(phi, q.carrier()) == Some(point.carrier()))
    })
}

/// Derived route: a cover containing the point. Membership gives the factor
/// `phi = p, q = id`; conversely `phi∘q = p` forces `p` in by right-ideal
/// closure.
pub fn g_neighborhood_by_membership(
    topology: &GrothendieckTopology,
    point: &Point,
    sieve: &Sieve,
) -> bool {
    topology.covers(sieve) && sieve.contains(point.carrier())
}

/// Is `sieve` a neighborhood of `point`? Runs both routes; a disagreement is
/// an internal inconsistency and panics.
pub fn is_g_neighborhood(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    point: &Point,
    sieve: &Sieve,
) -> Result<bool, ConvergenceError> {
    if sieve.codomain() != point.target() {
        return Err(ConvergenceError::ObjectMismatch {
            sieve_object: cat.object_name(sieve.codomain()).to_string(),
            point_object: cat.object_name(point.target()).to_string(),
        });
    }
    let by_search = g_neighborhood_by_search(cat, topology, point, sieve);
    let by_membership = g_neighborhood_by_membership(topology, point, sieve);
    assert_eq!(
        by_search, by_membership,
        "the factoring search and the membership shortcut disagree on a neighborhood"
    );
    Ok(by_search)
}

/// The covers that are neighborhoods of `point`.
pub fn g_neighborhoods_of_point(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    point: &Point,
) -> SieveSet {
    topology
        .at(point.target())
        .iter()
        .filter(|v| is_g_neighborhood(cat, topology, point, v).expect("same object"))
        .cloned()
        .collect()
}

/// The covers containing a given sieve.
pub fn g_neighborhoods_of_sieve(topology: &GrothendieckTopology, sieve: &Sieve) -> SieveSet {
    topology
        .at(sieve.codomain())
        .iter()
        .filter(|v| sieve.is_subset(v))
        .cloned()
        .collect()
}

/// The largest cover-neighborhood system of a point: every sieve on its
/// object containing some neighborhood.
pub fn cover_neighborhoods(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    point: &Point,
) -> NeighborhoodSystem {
    let neighborhoods = g_neighborhoods_of_point(cat, topology, point);
    let members = sieve::enumerate_sieves(cat, point.target())
        .into_iter()
        .filter(|s| neighborhoods.iter().any(|v| v.is_subset(s)))
        .collect();
    NeighborhoodSystem {
        point: *point,
        members,
    }
}

/// Audit: the cover-neighborhood system of a point satisfies the filter
/// axioms at its object. `None` means it does.
pub fn neighborhood_filter_check(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    point: &Point,
) -> Option<FilterViolation> {
    let system = cover_neighborhoods(cat, topology, point);
    filters::object_filter_violation(cat, system.object(), system.members())
}

fn converges_set(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    sieves: &SieveSet,
    point: &Point,
) -> bool {
    cover_neighborhoods(cat, topology, point)
        .members()
        .is_subset(sieves)
}

/// A filter converges to a point when its assignment contains every
/// cover-neighborhood of the point.
pub fn converges(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    filter: &Filter,
    point: &Point,
) -> bool {
    converges_set(cat, topology, filter.at(point.target()), point)
}

/// Points all of whose cover-neighborhoods meet `sieve`. Computed both from
/// the neighborhood systems and from the covers-containing-the-point form;
/// the two must agree.
pub fn closure(cat: &FiniteCategory, topology: &GrothendieckTopology, sieve: &Sieve) -> Vec<Point> {
    let obj = sieve.codomain();
    let points = match cat.points(obj) {
        Ok(points) => points,
        // No terminal object means no points and an empty closure.
        Err(_) => return Vec::new(),
    };

    let meets = |s: &Sieve| s.members().iter().any(|m| sieve.contains(*m));
    let result: Vec<Point> = points
        .into_iter()
        .filter(|p| {
            cover_neighborhoods(cat, topology, p)
                .members()
                .iter()
                .all(meets)
        })
        .collect();

    let by_covers: Vec<Point> = match cat.points(obj) {
        Ok(points) => points
            .into_iter()
            .filter(|p| {
                topology
                    .at(obj)
                    .iter()
                    .filter(|v| v.contains(p.carrier()))
                    .all(meets)
            })
            .collect(),
        Err(_) => Vec::new(),
    };
    assert_eq!(
        result, by_covers,
        "the neighborhood-system and covering-sieve formulations of closure disagree"
    );
    result
}

fn is_cluster_point_of_set(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    sieves: &SieveSet,
    point: &Point,
) -> bool {
    sieves
        .iter()
        .all(|s| closure(cat, topology, s).contains(point))
}

/// The point lies in the closure of every sieve of the filter at its object.
pub fn is_cluster_point(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    filter: &Filter,
    point: &Point,
) -> bool {
    is_cluster_point_of_set(cat, topology, filter.at(point.target()), point)
}

/// Base form: the point lies in the closure of every base member.
pub fn is_cluster_point_of_base(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    base: &FilterBase,
    point: &Point,
) -> bool {
    is_cluster_point_of_set(cat, topology, base.at(point.target()), point)
}

/// Outcome of the cluster-base construction: either a base whose filter is
/// finer than the input and converges to the point, or the concrete reason
/// the family fails the base axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClusterBaseOutcome {
    Base(FilterBase),
    NotABase(filters::BaseViolation),
}

/// Build the family `{A ∩ V : A in the filter, V a neighborhood of the
/// point}` at the point's object (trivial elsewhere) and test it as a base.
pub fn cluster_base(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    filter: &Filter,
    point: &Point,
) -> Result<ClusterBaseOutcome, ConvergenceError> {
    if !is_cluster_point(cat, topology, filter, point) {
        return Err(ConvergenceError::NotClusterPoint {
            point: cat.morphism_name(point.carrier()).to_string(),
        });
    }
    let obj = point.target();
    let neighborhoods = g_neighborhoods_of_point(cat, topology, point);
    let mut family = SieveSet::new();
    for a in filter.at(obj) {
        for v in &neighborhoods {
            family.insert(sieve::sieve_intersection(cat, obj, [a, v]).expect("same object"));
        }
    }
    let mut assignment = SieveAssignment::new();
    assignment.insert(obj, family);
    match FilterBase::new(cat, assignment) {
        Ok(base) => Ok(ClusterBaseOutcome::Base(base)),
        Err(report) => {
            let (_, violation) = report
                .first_violation()
                .expect("invalid base has a witness");
            Ok(ClusterBaseOutcome::NotABase(violation.clone()))
        }
    }
}

/// One failed equivalence instance from a theorem audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterWitness {
    pub filter_at_object: SieveSet,
    pub point: Point,
    pub is_cluster: bool,
    pub has_finer_convergent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    pub sieve: Sieve,
    pub point: Point,
    pub in_closure: bool,
    pub has_convergent_containing: bool,
}

/// Result of an exhaustive equivalence audit at one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceAudit<W> {
    pub object: ObjId,
    pub cases: usize,
    pub counterexamples: Vec<W>,
}

impl<W> EquivalenceAudit<W> {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// For every enumerated filter and every point of `obj`: the point is a
/// cluster point iff some finer enumerated filter converges to it.
pub fn audit_theorem_cluster(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    obj: ObjId,
    guard: usize,
) -> Result<EquivalenceAudit<ClusterWitness>, FilterError> {
    let object_filters = filters::enumerate_object_filters(cat, obj, guard)?;
    let points = cat.points(obj).unwrap_or_default();
    let mut cases = 0;
    let mut counterexamples = Vec::new();
    for sieves in &object_filters {
        for point in &points {
            cases += 1;
            let is_cluster = is_cluster_point_of_set(cat, topology, sieves, point);
            let has_finer_convergent = object_filters
                .iter()
                .any(|finer| sieves.is_subset(finer) && converges_set(cat, topology, finer, point));
            if is_cluster != has_finer_convergent {
                counterexamples.push(ClusterWitness {
                    filter_at_object: sieves.clone(),
                    point: *point,
                    is_cluster,
                    has_finer_convergent,
                });
            }
        }
    }
    Ok(EquivalenceAudit {
        object: obj,
        cases,
        counterexamples,
    })
}

/// For every sieve and every point of `obj`: the point lies in the closure
/// iff some enumerated filter containing the sieve converges to it.
pub fn audit_theorem_closure(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    obj: ObjId,
    guard: usize,
) -> Result<EquivalenceAudit<ClosureWitness>, FilterError> {
    let object_filters = filters::enumerate_object_filters(cat, obj, guard)?;
    let sieves = sieve::enumerate_sieves(cat, obj);
    let points = cat.points(obj).unwrap_or_default();
    let mut cases = 0;
    let mut counterexamples = Vec::new();
    for a in &sieves {
        let closure_points = closure(cat, topology, a);
        for point in &points {
            cases += 1;
            let in_closure = closure_points.contains(point);
            let has_convergent_containing = object_filters.iter().any(|candidate| {
                candidate.contains(a) && converges_set(cat, topology, candidate, point)
            });
            if in_closure != has_convergent_containing {
                counterexamples.push(ClosureWitness {
                    sieve: a.clone(),
                    point: *point,
                    in_closure,
                    has_convergent_containing,
                });
            }
        }
    }
    Ok(EquivalenceAudit {
        object: obj,
        cases,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fincat::morphisms_by_name;

    fn pt_setup() -> (FiniteCategory, GrothendieckTopology) {
        let cat = corpus::pt();
        let j = corpus::pt_topology(&cat);
        (cat, j)
    }

    fn sieve_of(cat: &FiniteCategory, obj: &str, names: &[&str]) -> Sieve {
        let o = cat.object_by_name(obj).unwrap();
        Sieve::new(cat, o, morphisms_by_name(cat, names)).unwrap()
    }

    fn point_named(cat: &FiniteCategory, obj: &str, name: &str) -> Point {
        let o = cat.object_by_name(obj).unwrap();
        cat.points(o)
            .unwrap()
            .into_iter()
            .find(|p| cat.morphism_name(p.carrier()) == name)
            .unwrap()
    }

    #[test]
    fn s1_is_a_neighborhood_of_p0() {
        let (cat, j) = pt_setup();
        let p0 = point_named(&cat, "C", "p0");
        let s1 = sieve_of(&cat, "C", &["e0", "e1", "p0", "p1"]);
        assert!(is_g_neighborhood(&cat, &j, &p0, &s1).unwrap());

        let c = cat.object_by_name("C").unwrap();
        assert!(is_g_neighborhood(&cat, &j, &p0, &sieve::maximal_sieve(&cat, c)).unwrap());
    }

    #[test]
    fn sieve_missing_the_point_is_not_a_neighborhood() {
        // gen(p1) = {e1, p1}: p0 is absent and no (phi, q) composes to p0,
        // even when every sieve is made to cover.
        let cat = corpus::pt();
        let gen_p1 = sieve_of(&cat, "C", &["e1", "p1"]);
        let j = GrothendieckTopology::all_sieves(&cat);

        let p0 = point_named(&cat, "C", "p0");
        assert!(j.covers(&gen_p1));
        assert!(!is_g_neighborhood(&cat, &j, &p0, &gen_p1).unwrap());
        assert!(!g_neighborhood_by_search(&cat, &j, &p0, &gen_p1));
    }

    #[test]
    fn object_mismatch_is_an_error() {
        let (cat, j) = pt_setup();
        let t = cat.object_by_name("T").unwrap();
        let p0 = point_named(&cat, "C", "p0");
        let err = is_g_neighborhood(&cat, &j, &p0, &sieve::maximal_sieve(&cat, t)).unwrap_err();
        assert!(matches!(err, ConvergenceError::ObjectMismatch { .. }));
    }

    #[test]
    fn neighborhoods_of_a_sieve_are_containing_covers() {
        let (cat, j) = pt_setup();
        let c = cat.object_by_name("C").unwrap();

        let of_empty = g_neighborhoods_of_sieve(&j, &Sieve::empty(c));
        assert_eq!(
            of_empty.len(),
            j.at(c).len(),
            "every cover contains the empty sieve"
        );

        let gen_p0 = sieve_of(&cat, "C", &["e0", "p0"]);
        let of_gen = g_neighborhoods_of_sieve(&j, &gen_p0);
        assert_eq!(of_gen.len(), 2, "S1 and the maximal sieve");

        let max = sieve::maximal_sieve(&cat, c);
        assert_eq!(g_neighborhoods_of_sieve(&j, &max).len(), 1);
    }

    #[test]
    fn cover_neighborhood_systems() {
        let (cat, j) = pt_setup();
        let p0 = point_named(&cat, "C", "p0");
        let system = cover_neighborhoods(&cat, &j, &p0);
        let s1 = sieve_of(&cat, "C", &["e0", "e1", "p0", "p1"]);
        let c = cat.object_by_name("C").unwrap();
        let expected: SieveSet = [s1, sieve::maximal_sieve(&cat, c)].into_iter().collect();
        assert_eq!(*system.members(), expected);

        let id_t = point_named(&cat, "T", "id_T");
        let t = cat.object_by_name("T").unwrap();
        let at_terminal = cover_neighborhoods(&cat, &j, &id_t);
        let expected: SieveSet = [sieve::maximal_sieve(&cat, t)].into_iter().collect();
        assert_eq!(*at_terminal.members(), expected);

        let trivial = GrothendieckTopology::trivial(&cat);
        let under_trivial = cover_neighborhoods(&cat, &trivial, &p0);
        assert_eq!(under_trivial.members().len(), 1, "only the maximal sieve");
    }

    #[test]
    fn neighborhood_systems_are_filtered_objects() {
        let (cat, j) = pt_setup();
        for obj in cat.objects() {
            for p in cat.points(obj).unwrap() {
                assert_eq!(neighborhood_filter_check(&cat, &j, &p), None);
                assert_eq!(
                    neighborhood_filter_check(&cat, &GrothendieckTopology::trivial(&cat), &p),
                    None
                );
            }
        }
    }

    #[test]
    fn convergence_on_pointed_two() {
        let (cat, j) = pt_setup();
        let p0 = point_named(&cat, "C", "p0");
        let p1 = point_named(&cat, "C", "p1");

        let trivial = Filter::trivial(&cat);
        assert!(!converges(&cat, &j, &trivial, &p0), "S1 is missing");
        assert!(
            converges(&cat, &GrothendieckTopology::trivial(&cat), &trivial, &p0),
            "under the trivial topology every filter converges"
        );

        let s1 = sieve_of(&cat, "C", &["e0", "e1", "p0", "p1"]);
        let up_s1 = Filter::principal(&cat, &s1).unwrap();
        assert!(converges(&cat, &j, &up_s1, &p0));
        assert!(converges(&cat, &j, &up_s1, &p1));
    }

    #[test]
    fn closure_on_pointed_two() {
        let (cat, j) = pt_setup();
        let c = cat.object_by_name("C").unwrap();

        let all_points = closure(&cat, &j, &sieve::maximal_sieve(&cat, c));
        assert_eq!(all_points.len(), 2);

        // Both covers containing p1 (S1 and max) contain p0, hence meet gen(p0).
        let gen_p0 = sieve_of(&cat, "C", &["e0", "p0"]);
        let names: Vec<&str> = closure(&cat, &j, &gen_p0)
            .iter()
            .map(|p| cat.morphism_name(p.carrier()))
            .collect();
        assert_eq!(names, vec!["p0", "p1"]);

        assert!(closure(&cat, &j, &Sieve::empty(c)).is_empty());
    }

    #[test]
    fn closure_is_empty_without_points() {
        let frame = corpus::b2_frame();
        let cat = frame.category();
        let j = crate::frames::canonical_topology(&frame);
        let a = cat.object_by_name("a").unwrap();
        // `a` is not below the top element, so it has no points.
        assert!(closure(cat, &j, &sieve::maximal_sieve(cat, a)).is_empty());
    }

    #[test]
    fn limit_points_are_cluster_points() {
        let (cat, j) = pt_setup();
        let p0 = point_named(&cat, "C", "p0");
        let p1 = point_named(&cat, "C", "p1");

        let s1 = sieve_of(&cat, "C", &["e0", "e1", "p0", "p1"]);
        let up_s1 = Filter::principal(&cat, &s1).unwrap();
        assert!(is_cluster_point(&cat, &j, &up_s1, &p0));

        let gen_p0 = Filter::principal(&cat, &sieve_of(&cat, "C", &["e0", "p0"])).unwrap();
        assert!(is_cluster_point(&cat, &j, &gen_p0, &p1));

        let trivial_j = GrothendieckTopology::trivial(&cat);
        assert!(is_cluster_point(
            &cat,
            &trivial_j,
            &Filter::trivial(&cat),
            &p0
        ));
        assert!(is_cluster_point(
            &cat,
            &trivial_j,
            &Filter::trivial(&cat),
            &p1
        ));
    }

    #[test]
    fn cluster_base_generates_a_convergent_refinement() {
        let (cat, j) = pt_setup();
        let p1 = point_named(&cat, "C", "p1");
        let gen_p0 = sieve_of(&cat, "C", &["e0", "p0"]);
        let filter = Filter::principal(&cat, &gen_p0).unwrap();

        match cluster_base(&cat, &j, &filter, &p1).unwrap() {
            ClusterBaseOutcome::Base(base) => {
                let c = cat.object_by_name("C").unwrap();
                assert!(base.at(c).contains(&gen_p0));
                let refined = filters::filter_from_base(&cat, &base);
                assert!(refined.is_finer(&filter));
                assert!(converges(&cat, &j, &refined, &p1));
            }
            ClusterBaseOutcome::NotABase(v) => panic!("family should be a base, got {v:?}"),
        }
    }

    #[test]
    fn cluster_base_requires_a_cluster_point() {
        // Under the standard pt topology every point is a cluster point of
        // every filter, so the failing precondition needs the all-sieves
        // topology, where gen(p0) covers and misses gen(p1) entirely.
        let cat = corpus::pt();
        let j = GrothendieckTopology::all_sieves(&cat);
        let p0 = point_named(&cat, "C", "p0");
        let gen_p1 = Filter::principal(&cat, &sieve_of(&cat, "C", &["e1", "p1"])).unwrap();
        assert!(
            !is_cluster_point(&cat, &j, &gen_p1, &p0),
            "gen(p0) ∩ gen(p1) = ∅"
        );
        assert!(matches!(
            cluster_base(&cat, &j, &gen_p1, &p0),
            Err(ConvergenceError::NotClusterPoint { .. })
        ));
    }

    #[test]
    fn cluster_base_at_the_frame_top_is_the_filter_itself() {
        let frame = corpus::b2_frame();
        let cat = frame.category().clone();
        let j = crate::frames::canonical_topology(&frame);
        let one = cat.object_by_name("1").unwrap();
        let top_point = cat.points(one).unwrap()[0];

        let f = Filter::principal(&cat, &sieve_of(&cat, "1", &["0->1", "a->1", "b->1"])).unwrap();
        match cluster_base(&cat, &j, &f, &top_point).unwrap() {
            ClusterBaseOutcome::Base(base) => {
                // The only neighborhood of the top point is the maximal sieve,
                // so the family is F(1) itself.
                assert_eq!(base.at(one), f.at(one));
            }
            ClusterBaseOutcome::NotABase(v) => panic!("family should be a base, got {v:?}"),
        }
    }

    #[test]
    fn cluster_audit_holds_on_pointed_two() {
        let (cat, j) = pt_setup();
        let c = cat.object_by_name("C").unwrap();
        let audit = audit_theorem_cluster(&cat, &j, c, 20).unwrap();
        assert!(
            audit.holds(),
            "counterexamples: {:?}",
            audit.counterexamples
        );
        assert_eq!(audit.cases, 8, "4 filters x 2 points");
    }

    #[test]
    fn closure_audit_holds_on_pointed_two() {
        let (cat, j) = pt_setup();
        let c = cat.object_by_name("C").unwrap();
        let audit = audit_theorem_closure(&cat, &j, c, 20).unwrap();
        assert!(
            audit.holds(),
            "counterexamples: {:?}",
            audit.counterexamples
        );
        assert_eq!(audit.cases, 10, "5 sieves x 2 points");
    }

    #[test]
    fn audits_hold_on_the_diamond_frame() {
        let frame = corpus::b2_frame();
        let cat = frame.category().clone();
        let j = crate::frames::canonical_topology(&frame);
        let one = cat.object_by_name("1").unwrap();
        assert!(audit_theorem_cluster(&cat, &j, one, 20).unwrap().holds());
        assert!(audit_theorem_closure(&cat, &j, one, 20).unwrap().holds());
    }
}
