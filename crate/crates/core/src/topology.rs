//! Grothendieck topologies: validation against the covering axioms and the
//! construction of a filter by removing the empty sieve.

use std::collections::BTreeMap;

use crate::filters::{self, Filter, SieveAssignment, SieveSet};
use crate::fincat::{FiniteCategory, MorId, ObjId};
use crate::sieve::{self, Sieve};

/// Per-object sets of covering sieves. Objects left unmentioned at
/// construction default to `{maximal}`; no axiom is assumed until
/// [`validate_topology`] has run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrothendieckTopology {
    assignment: SieveAssignment,
}

impl GrothendieckTopology {
    pub fn new(cat: &FiniteCategory, assignment: SieveAssignment) -> Self {
        let mut total = SieveAssignment::new();
        for obj in cat.objects() {
            let covers = assignment.get(&obj).cloned().unwrap_or_else(|| {
                let mut set = SieveSet::new();
                set.insert(sieve::maximal_sieve(cat, obj));
                set
            });
            total.insert(obj, covers);
        }
        GrothendieckTopology { assignment: total }
    }

    /// The trivial topology: only the maximal sieve covers.
    pub fn trivial(cat: &FiniteCategory) -> Self {
        GrothendieckTopology::new(cat, SieveAssignment::new())
    }

    /// The topology in which every sieve covers, empty sieves included.
    pub fn all_sieves(cat: &FiniteCategory) -> Self {
        let mut assignment = SieveAssignment::new();
        for obj in cat.objects() {
            assignment.insert(obj, sieve::enumerate_sieves(cat, obj).into_iter().collect());
        }
        GrothendieckTopology::new(cat, assignment)
    }

    pub fn assignment(&self) -> &SieveAssignment {
        &self.assignment
    }

    pub fn at(&self, obj: ObjId) -> &SieveSet {
        &self.assignment[&obj]
    }

    /// Membership test: does `s` cover its object?
    pub fn covers(&self, s: &Sieve) -> bool {
        self.assignment[&s.codomain()].contains(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationLevel {
    /// Maximal-sieve membership, upward closure, pairwise intersections, stability.
    Basic,
    /// Basic plus transitivity.
    Full,
}

/// One violated topology axiom (or stated consequence), with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologyViolation {
    MissingMaximalSieve {
        object: ObjId,
    },
    NotUpwardClosed {
        object: ObjId,
        member: Sieve,
        superset: Sieve,
    },
    IntersectionEscapes {
        object: ObjId,
        left: Sieve,
        right: Sieve,
    },
    /// A cover whose pullback along some morphism fails to cover.
    UnstablePullback {
        object: ObjId,
        cover: Sieve,
        along: MorId,
        pullback: Sieve,
    },
    /// A sieve locally covering through every member of a cover, yet not a cover.
    TransitivityFailure {
        object: ObjId,
        cover: Sieve,
        candidate: Sieve,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyReport {
    pub level: ValidationLevel,
    pub violations: Vec<TopologyViolation>,
}

impl TopologyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the covering axioms, listing every violated instance.
pub fn validate_topology(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
    level: ValidationLevel,
) -> TopologyReport {
    let mut violations = Vec::new();

    for (&obj, covers) in topology.assignment() {
        let all = sieve::enumerate_sieves(cat, obj);

        if !covers.contains(&sieve::maximal_sieve(cat, obj)) {
            violations.push(TopologyViolation::MissingMaximalSieve { object: obj });
        }

        for member in covers {
            for candidate in &all {
                if member.is_subset(candidate) && !covers.contains(candidate) {
                    violations.push(TopologyViolation::NotUpwardClosed {
                        object: obj,
                        member: member.clone(),
                        superset: candidate.clone(),
                    });
                }
            }
        }

        for left in covers {
            for right in covers.iter().filter(|r| *r >= left) {
                let intersection = sieve::sieve_intersection(cat, obj, [left, right])
                    .expect("members share a codomain");
                if !covers.contains(&intersection) {
                    violations.push(TopologyViolation::IntersectionEscapes {
                        object: obj,
                        left: left.clone(),
                        right: right.clone(),
                    });
                }
            }
        }

        for cover in covers {
            for &h in cat.hom_into(obj) {
                let pulled = sieve::pullback_sieve(cat, h, cover).expect("cod(h) = obj");
                if !topology.covers(&pulled) {
                    violations.push(TopologyViolation::UnstablePullback {
                        object: obj,
                        cover: cover.clone(),
                        along: h,
                        pullback: pulled,
                    });
                }
            }
        }

        if level == ValidationLevel::Full {
            for cover in covers {
                for candidate in &all {
                    if covers.contains(candidate) {
                        continue;
                    }
                    let locally_covers = cover.members().iter().all(|&h| {
                        let pulled =
                            sieve::pullback_sieve(cat, h, candidate).expect("cod(h) = obj");
                        topology.covers(&pulled)
                    });
                    if locally_covers {
                        violations.push(TopologyViolation::TransitivityFailure {
                            object: obj,
                            cover: cover.clone(),
                            candidate: candidate.clone(),
                        });
                    }
                }
            }
        }
    }

    TopologyReport { level, violations }
}

/// The filter obtained from a topology, plus the objects where an empty
/// covering sieve had to be dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyFilter {
    pub filter: Filter,
    pub dropped_empty_at: Vec<ObjId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologyToFilterError {
    /// The topology fails basic validation, so no filter is defined.
    InvalidTopology(TopologyReport),
    /// Removing the empty sieve broke F2: two remaining covers intersect to
    /// the empty sieve. Only possible when the empty sieve covers `object`.
    F2Breakage {
        object: ObjId,
        left: Sieve,
        right: Sieve,
    },
}

/// Remove the empty sieve from every `J(C)`; report where that happened and
/// fail with the witnessing pair if the remainder is not a filter.
pub fn topology_to_filter(
    cat: &FiniteCategory,
    topology: &GrothendieckTopology,
) -> Result<TopologyFilter, TopologyToFilterError> {
    let basic = validate_topology(cat, topology, ValidationLevel::Basic);
    if !basic.is_valid() {
        return Err(TopologyToFilterError::InvalidTopology(basic));
    }

    let mut assignment: BTreeMap<ObjId, SieveSet> = BTreeMap::new();
    let mut dropped_empty_at = Vec::new();
    for (&obj, covers) in topology.assignment() {
        let empty = Sieve::empty(obj);
        let mut remaining = covers.clone();
        if remaining.remove(&empty) {
            dropped_empty_at.push(obj);
        }
        for left in &remaining {
            for right in remaining.iter().filter(|r| *r >= left) {
                let meet = sieve::sieve_intersection(cat, obj, [left, right])
                    .expect("members share a codomain");
                if meet.is_empty() {
                    return Err(TopologyToFilterError::F2Breakage {
                        object: obj,
                        left: left.clone(),
                        right: right.clone(),
                    });
                }
            }
        }
        assignment.insert(obj, remaining);
    }

    let report = filters::is_filter(cat, &assignment);
    assert!(
        report.is_valid(),
        "removing the empty sieve from a basically valid topology yields a filter: {:?}",
        report.first_violation()
    );
    Ok(TopologyFilter {
        filter: Filter::from_valid_assignment(assignment),
        dropped_empty_at,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fincat::morphisms_by_name;

    #[test]
    fn trivial_topology_is_fully_valid() {
        for cat in [
            corpus::c2(),
            corpus::b2(),
            corpus::pp(),
            corpus::m1(),
            corpus::pt(),
        ] {
            let j = GrothendieckTopology::trivial(&cat);
            assert!(validate_topology(&cat, &j, ValidationLevel::Full).is_valid());
        }
    }

    #[test]
    fn pointed_two_topology_is_fully_valid() {
        let cat = corpus::pt();
        let j = corpus::pt_topology(&cat);
        let report = validate_topology(&cat, &j, ValidationLevel::Full);
        assert!(report.is_valid(), "violations: {:?}", report.violations);
    }

    #[test]
    fn missing_maximal_sieve_is_a_basic_violation() {
        let cat = corpus::pt();
        let c = cat.object_by_name("C").unwrap();
        let s1 = Sieve::new(&cat, c, morphisms_by_name(&cat, &["e0", "e1", "p0", "p1"])).unwrap();
        let mut assignment = SieveAssignment::new();
        assignment.insert(c, [s1].into_iter().collect());
        let j = GrothendieckTopology::new(&cat, assignment);
        let report = validate_topology(&cat, &j, ValidationLevel::Basic);
        assert!(report.violations.iter().any(
            |v| matches!(v, TopologyViolation::MissingMaximalSieve { object } if *object == c)
        ));
    }

    #[test]
    fn covers_is_plain_membership() {
        let cat = corpus::pt();
        let c = cat.object_by_name("C").unwrap();
        let j = corpus::pt_topology(&cat);
        assert!(j.covers(&sieve::maximal_sieve(&cat, c)));

        let s1 = Sieve::new(&cat, c, morphisms_by_name(&cat, &["e0", "e1", "p0", "p1"])).unwrap();
        assert!(j.covers(&s1));

        let gen_p0 = Sieve::new(&cat, c, morphisms_by_name(&cat, &["e0", "p0"])).unwrap();
        assert!(!j.covers(&gen_p0));
    }

    #[test]
    fn pointed_two_filter() {
        let cat = corpus::pt();
        let c = cat.object_by_name("C").unwrap();
        let t = cat.object_by_name("T").unwrap();
        let j = corpus::pt_topology(&cat);
        let out = topology_to_filter(&cat, &j).unwrap();
        assert!(out.dropped_empty_at.is_empty());
        assert_eq!(out.filter.at(c).len(), 2);
        assert_eq!(out.filter.at(t).len(), 1);
    }

    #[test]
    fn trivial_topology_gives_the_trivial_filter() {
        let cat = corpus::b2();
        let j = GrothendieckTopology::trivial(&cat);
        let out = topology_to_filter(&cat, &j).unwrap();
        assert_eq!(out.filter, Filter::trivial(&cat));
    }

    #[test]
    fn all_sieves_topology_breaks_f2_on_parallel_pair() {
        // When every sieve covers Y, dropping the empty sieve leaves
        // {f} ∩ {g} = ∅ with no member below it.
        let cat = corpus::pp();
        let y = cat.object_by_name("Y").unwrap();
        let x = cat.object_by_name("X").unwrap();
        let mut assignment = SieveAssignment::new();
        assignment.insert(y, sieve::enumerate_sieves(&cat, y).into_iter().collect());
        assignment.insert(x, sieve::enumerate_sieves(&cat, x).into_iter().collect());
        let j = GrothendieckTopology::new(&cat, assignment);
        assert!(validate_topology(&cat, &j, ValidationLevel::Full).is_valid());

        match topology_to_filter(&cat, &j) {
            Err(TopologyToFilterError::F2Breakage {
                object,
                left,
                right,
            }) => {
                assert_eq!(object, y);
                assert!(sieve::sieve_intersection(&cat, y, [&left, &right])
                    .unwrap()
                    .is_empty());
            }
            other => panic!("expected F2 breakage, got {other:?}"),
        }
    }

    #[test]
    fn invalid_topology_is_rejected() {
        let cat = corpus::pt();
        let c = cat.object_by_name("C").unwrap();
        let s1 = Sieve::new(&cat, c, morphisms_by_name(&cat, &["e0", "e1", "p0", "p1"])).unwrap();
        let mut assignment = SieveAssignment::new();
        assignment.insert(c, [s1].into_iter().collect());
        let j = GrothendieckTopology::new(&cat, assignment);
        assert!(matches!(
            topology_to_filter(&cat, &j),
            Err(TopologyToFilterError::InvalidTopology(_))
        ));
    }

    #[test]
    fn stated_consequences_hold_on_valid_corpus_topologies() {
        // Upward closure and pairwise intersections are consequences of the
        // axiom set; assert them exhaustively on the corpus topologies.
        let pt = corpus::pt();
        let topologies = vec![
            (pt.clone(), corpus::pt_topology(&pt)),
            (corpus::b2(), GrothendieckTopology::trivial(&corpus::b2())),
        ];
        for (cat, j) in topologies {
            for (&obj, covers) in j.assignment() {
                let all = sieve::enumerate_sieves(&cat, obj);
                for s in covers {
                    for r in &all {
                        if s.is_subset(r) {
                            assert!(covers.contains(r), "upward closure");
                        }
                    }
                    for r in covers {
                        let meet = sieve::sieve_intersection(&cat, obj, [s, r]).unwrap();
                        assert!(covers.contains(&meet), "intersection closure");
                    }
                    for &h in cat.hom_into(obj) {
                        let pulled = sieve::pullback_sieve(&cat, h, s).unwrap();
                        assert!(j.covers(&pulled), "stability");
                    }
                }
            }
        }
    }
}
