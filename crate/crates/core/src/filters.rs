//! Filters, bases, and subbases of sieves; the filter order, meets, and
//! ultrafilters with the primality property.
//!
//! A filter assigns to each object an upward-closed, intersection-closed,
//! empty-free set of sieves. The nullary-intersection convention puts the
//! maximal sieve into every assignment, so assignments are total and nonempty.
//! On a finite sieve lattice every filter is the up-set of its minimum member,
//! which makes exhaustive enumeration and ultrafilter extension deterministic.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::fincat::{FiniteCategory, ObjId};
use crate::sieve::{self, Sieve};

/// Sieves on a single object.
pub type SieveSet = BTreeSet<Sieve>;
/// Per-object families of sieves; the shared raw form behind filters, bases,
/// subbases, and topologies.
pub type SieveAssignment = BTreeMap<ObjId, SieveSet>;

/// First violated filter axiom at one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterViolation {
    /// F1: a member has a superset sieve outside the family.
    NotUpwardClosed { member: Sieve, superset: Sieve },
    /// F2, nullary case: the maximal sieve is missing.
    MissingMaximalSieve,
    /// F2: a pairwise intersection escapes the family.
    IntersectionEscapes {
        left: Sieve,
        right: Sieve,
        intersection: Sieve,
    },
    /// F3: the empty sieve is present.
    ContainsEmptySieve,
}

/// First violated base axiom at one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseViolation {
    /// B1: an intersection of two members contains no member.
    IntersectionNotRefined { left: Sieve, right: Sieve },
    /// B2: the family is empty.
    Empty,
    /// B2: the empty sieve is a member.
    ContainsEmptySieve,
}

/// Violated subbase condition at one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubbaseViolation {
    /// A finite subcollection with empty intersection (minimal by greedy pruning).
    EmptyIntersection { witnesses: Vec<Sieve> },
}

/// Per-object verdicts; `None` means the object passes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport<V> {
    pub per_object: BTreeMap<ObjId, Option<V>>,
}

impl<V> AxiomReport<V> {
    pub fn is_valid(&self) -> bool {
        self.per_object.values().all(Option::is_none)
    }

    pub fn first_violation(&self) -> Option<(ObjId, &V)> {
        self.per_object
            .iter()
            .find_map(|(obj, v)| v.as_ref().map(|v| (*obj, v)))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("an empty family of filters has no meet")]
    EmptyFamily,
    #[error(
        "object `{object}` carries {count} sieves, exceeding the enumeration guard of {guard}"
    )]
    GuardExceeded {
        object: String,
        count: usize,
        guard: usize,
    },
    #[error("the empty sieve generates no filter (F3 would fail)")]
    EmptyPrincipal,
}

fn normalized(cat: &FiniteCategory, assignment: &SieveAssignment) -> SieveAssignment {
    let mut out = SieveAssignment::new();
    for obj in cat.objects() {
        let sieves = assignment.get(&obj).cloned().unwrap_or_else(|| {
            let mut set = SieveSet::new();
            set.insert(sieve::maximal_sieve(cat, obj));
            set
        });
        out.insert(obj, sieves);
    }
    out
}

/// Check the filter axioms at a single object. Used both for whole filters
/// and for single-object families such as neighborhood systems.
pub fn object_filter_violation(
    cat: &FiniteCategory,
    obj: ObjId,
    sieves: &SieveSet,
) -> Option<FilterViolation> {
    let all = sieve::enumerate_sieves(cat, obj);
    // F1
    for member in sieves {
        for candidate in &all {
            if member.is_subset(candidate) && !sieves.contains(candidate) {
                return Some(FilterViolation::NotUpwardClosed {
                    member: member.clone(),
                    superset: candidate.clone(),
                });
            }
        }
    }
    // F2, nullary then binary (finite intersections reduce to these).
    let max = sieve::maximal_sieve(cat, obj);
    if !sieves.contains(&max) {
        return Some(FilterViolation::MissingMaximalSieve);
    }
    for left in sieves {
        for right in sieves {
            let intersection = sieve::sieve_intersection(cat, obj, [left, right])
                .expect("members share a codomain");
            if !sieves.contains(&intersection) {
                return Some(FilterViolation::IntersectionEscapes {
                    left: left.clone(),
                    right: right.clone(),
                    intersection,
                });
            }
        }
    }
    // F3
    if sieves.contains(&Sieve::empty(obj)) {
        return Some(FilterViolation::ContainsEmptySieve);
    }
    None
}

fn object_base_violation(
    cat: &FiniteCategory,
    obj: ObjId,
    sieves: &SieveSet,
) -> Option<BaseViolation> {
    for left in sieves {
        for right in sieves {
            let intersection = sieve::sieve_intersection(cat, obj, [left, right])
                .expect("members share a codomain");
            if !sieves.iter().any(|r| r.is_subset(&intersection)) {
                return Some(BaseViolation::IntersectionNotRefined {
                    left: left.clone(),
                    right: right.clone(),
                });
            }
        }
    }
    if sieves.is_empty() {
        return Some(BaseViolation::Empty);
    }
    if sieves.contains(&Sieve::empty(obj)) {
        return Some(BaseViolation::ContainsEmptySieve);
    }
    None
}

fn object_subbase_violation(
    cat: &FiniteCategory,
    obj: ObjId,
    sieves: &SieveSet,
) -> Option<SubbaseViolation> {
    // The intersection map is monotone, so the finite-intersection condition
    // reduces to the intersection of the whole (finite) family.
    let total = sieve::sieve_intersection(cat, obj, sieves.iter()).expect("shared codomain");
    if !total.is_empty() {
        return None;
    }
    // Greedily prune to a minimal witnessing subcollection.
    let mut witnesses: Vec<Sieve> = sieves.iter().cloned().collect();
    let mut i = 0;
    while i < witnesses.len() {
        let mut pruned = witnesses.clone();
        pruned.remove(i);
        let meet = sieve::sieve_intersection(cat, obj, pruned.iter()).expect("shared codomain");
        if meet.is_empty() {
            witnesses = pruned;
        } else {
            i += 1;
        }
    }
    Some(SubbaseViolation::EmptyIntersection { witnesses })
}

/// Check F1-F3 at every object; absent objects count as `{maximal}`.
pub fn is_filter(
    cat: &FiniteCategory,
    assignment: &SieveAssignment,
) -> AxiomReport<FilterViolation> {
    let per_object = normalized(cat, assignment)
        .into_iter()
        .map(|(obj, sieves)| (obj, object_filter_violation(cat, obj, &sieves)))
        .collect();
    AxiomReport { per_object }
}

/// Check B1-B2 at every object.
pub fn is_base(cat: &FiniteCategory, assignment: &SieveAssignment) -> AxiomReport<BaseViolation> {
    let per_object = normalized(cat, assignment)
        .into_iter()
        .map(|(obj, sieves)| (obj, object_base_violation(cat, obj, &sieves)))
        .collect();
    AxiomReport { per_object }
}

/// Check the finite-intersection condition at every object.
pub fn is_subbase(
    cat: &FiniteCategory,
    assignment: &SieveAssignment,
) -> AxiomReport<SubbaseViolation> {
    let per_object = normalized(cat, assignment)
        .into_iter()
        .map(|(obj, sieves)| (obj, object_subbase_violation(cat, obj, &sieves)))
        .collect();
    AxiomReport { per_object }
}

/// A validated filter: total, upward closed, intersection closed, empty-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    assignment: SieveAssignment,
}

/// A validated filter base (B1-B2 at every object).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterBase {
    assignment: SieveAssignment,
}

/// A validated filter subbase (finite-intersection condition at every object).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterSubbase {
    assignment: SieveAssignment,
}

impl Filter {
    /// Validate a raw assignment; missing objects default to `{maximal}`.
    pub fn new(
        cat: &FiniteCategory,
        assignment: SieveAssignment,
    ) -> Result<Self, AxiomReport<FilterViolation>> {
        let assignment = normalized(cat, &assignment);
        let report = is_filter(cat, &assignment);
        if report.is_valid() {
            Ok(Filter { assignment })
        } else {
            Err(report)
        }
    }

    /// The coarsest filter: `{maximal}` at every object.
    pub fn trivial(cat: &FiniteCategory) -> Self {
        Filter {
            assignment: normalized(cat, &SieveAssignment::new()),
        }
    }

    /// Up-set of one nonempty sieve at its object, trivial elsewhere.
    pub fn principal(cat: &FiniteCategory, minimum: &Sieve) -> Result<Self, FilterError> {
        if minimum.is_empty() {
            return Err(FilterError::EmptyPrincipal);
        }
        let mut assignment = normalized(cat, &SieveAssignment::new());
        assignment.insert(minimum.codomain(), up_set(cat, minimum));
        Ok(Filter { assignment })
    }

    pub(crate) fn from_valid_assignment(assignment: SieveAssignment) -> Self {
        Filter { assignment }
    }

    pub fn assignment(&self) -> &SieveAssignment {
        &self.assignment
    }

    pub fn at(&self, obj: ObjId) -> &SieveSet {
        &self.assignment[&obj]
    }

    /// `self` is finer than `other` iff `self` contains `other` objectwise.
    pub fn is_finer(&self, other: &Filter) -> bool {
        other
            .assignment
            .iter()
            .all(|(obj, sieves)| sieves.is_subset(&self.assignment[obj]))
    }
}

impl FilterBase {
    pub fn new(
        cat: &FiniteCategory,
        assignment: SieveAssignment,
    ) -> Result<Self, AxiomReport<BaseViolation>> {
        let assignment = normalized(cat, &assignment);
        let report = is_base(cat, &assignment);
        if report.is_valid() {
            Ok(FilterBase { assignment })
        } else {
            Err(report)
        }
    }

    pub fn assignment(&self) -> &SieveAssignment {
        &self.assignment
    }

    pub fn at(&self, obj: ObjId) -> &SieveSet {
        &self.assignment[&obj]
    }
}

impl FilterSubbase {
    pub fn new(
        cat: &FiniteCategory,
        assignment: SieveAssignment,
    ) -> Result<Self, AxiomReport<SubbaseViolation>> {
        let assignment = normalized(cat, &assignment);
        let report = is_subbase(cat, &assignment);
        if report.is_valid() {
            Ok(FilterSubbase { assignment })
        } else {
            Err(report)
        }
    }

    pub fn assignment(&self) -> &SieveAssignment {
        &self.assignment
    }
}

fn up_set(cat: &FiniteCategory, minimum: &Sieve) -> SieveSet {
    sieve::enumerate_sieves(cat, minimum.codomain())
        .into_iter()
        .filter(|s| minimum.is_subset(s))
        .collect()
}

/// The filter generated by a base: all sieves containing some member.
pub fn filter_from_base(cat: &FiniteCategory, base: &FilterBase) -> Filter {
    let mut assignment = SieveAssignment::new();
    for (obj, members) in base.assignment() {
        let generated: SieveSet = sieve::enumerate_sieves(cat, *obj)
            .into_iter()
            .filter(|s| members.iter().any(|r| r.is_subset(s)))
            .collect();
        assignment.insert(*obj, generated);
    }
    let report = is_filter(cat, &assignment);
    assert!(
        report.is_valid(),
        "a valid base always generates a filter: {:?}",
        report.first_violation()
    );
    Filter { assignment }
}

/// The coarsest filter containing a subbase: close under finite
/// intersections (plus the nullary maximal sieve), then generate.
pub fn filter_from_subbase(cat: &FiniteCategory, subbase: &FilterSubbase) -> Filter {
    let mut base_assignment = SieveAssignment::new();
    for (obj, members) in subbase.assignment() {
        // Pairwise intersections to a fixpoint reach every finite
        // intersection of the (finite) member set.
        let mut closed: SieveSet = members.clone();
        closed.insert(sieve::maximal_sieve(cat, *obj));
        loop {
            let mut fresh = SieveSet::new();
            for left in &closed {
                for right in &closed {
                    let meet = sieve::sieve_intersection(cat, *obj, [left, right])
                        .expect("shared codomain");
                    if !closed.contains(&meet) {
                        fresh.insert(meet);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            closed.extend(fresh);
        }
        base_assignment.insert(*obj, closed);
    }
    let base = FilterBase::new(cat, base_assignment)
        .expect("finite intersections of a subbase form a base");
    filter_from_base(cat, &base)
}

/// Pointwise intersection: the greatest lower bound of a nonempty family.
pub fn meet_filters(cat: &FiniteCategory, family: &[Filter]) -> Result<Filter, FilterError> {
    let Some((first, rest)) = family.split_first() else {
        return Err(FilterError::EmptyFamily);
    };
    let mut assignment = first.assignment.clone();
    for filter in rest {
        for (obj, sieves) in &mut assignment {
            let other = &filter.assignment[obj];
            sieves.retain(|s| other.contains(s));
        }
    }
    let report = is_filter(cat, &assignment);
    debug_assert!(report.is_valid(), "intersections of filters are filters");
    Ok(Filter { assignment })
}

fn guard_check(
    cat: &FiniteCategory,
    obj: ObjId,
    count: usize,
    guard: usize,
) -> Result<(), FilterError> {
    if count > guard {
        Err(FilterError::GuardExceeded {
            object: cat.object_name(obj).to_string(),
            count,
            guard,
        })
    } else {
        Ok(())
    }
}

/// Every set of sieves on `obj` satisfying F1-F3, in canonical order.
///
/// On a finite lattice each filter is the up-set of its minimum member, so
/// the enumeration walks the nonempty sieves in canonical order.
pub fn enumerate_object_filters(
    cat: &FiniteCategory,
    obj: ObjId,
    guard: usize,
) -> Result<Vec<SieveSet>, FilterError> {
    let sieves = sieve::enumerate_sieves(cat, obj);
    guard_check(cat, obj, sieves.len(), guard)?;
    let filters: Vec<SieveSet> = sieves
        .iter()
        .filter(|s| !s.is_empty())
        .map(|minimum| up_set(cat, minimum))
        .collect();
    for f in &filters {
        debug_assert!(object_filter_violation(cat, obj, f).is_none());
    }
    Ok(filters)
}

/// Minimum member of a filter's assignment at one object: the intersection
/// of the (finite, intersection-closed) family.
pub fn minimum_sieve(cat: &FiniteCategory, sieves: &SieveSet) -> Sieve {
    let obj = sieves
        .iter()
        .next()
        .expect("filter assignments are nonempty")
        .codomain();
    sieve::sieve_intersection(cat, obj, sieves.iter()).expect("shared codomain")
}

/// Minimal nonempty sieves below `bound`, in canonical order.
fn atoms_below(cat: &FiniteCategory, bound: &Sieve) -> Vec<Sieve> {
    let below: Vec<Sieve> = sieve::enumerate_sieves(cat, bound.codomain())
        .into_iter()
        .filter(|s| !s.is_empty() && s.is_subset(bound))
        .collect();
    below
        .iter()
        .filter(|s| !below.iter().any(|t| t.is_subset(s) && t != *s))
        .cloned()
        .collect()
}

/// No filter is strictly finer: at every object the assignment is maximal
/// among the enumerated object filters.
pub fn is_ultrafilter(
    cat: &FiniteCategory,
    filter: &Filter,
    guard: usize,
) -> Result<bool, FilterError> {
    for (obj, sieves) in filter.assignment() {
        for candidate in enumerate_object_filters(cat, *obj, guard)? {
            if sieves.is_subset(&candidate) && candidate != *sieves {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Deterministic ultrafilter extension: at each object, refine the minimum
/// member to its canonically least atom and take the up-set.
pub fn extend_to_ultrafilter(
    cat: &FiniteCategory,
    filter: &Filter,
    guard: usize,
) -> Result<Filter, FilterError> {
    let mut assignment = SieveAssignment::new();
    for (obj, sieves) in filter.assignment() {
        guard_check(cat, *obj, sieve::enumerate_sieves(cat, *obj).len(), guard)?;
        let minimum = minimum_sieve(cat, sieves);
        let atom = atoms_below(cat, &minimum)
            .into_iter()
            .next()
            .expect("a nonempty sieve contains a minimal nonempty sieve");
        assignment.insert(*obj, up_set(cat, &atom));
    }
    let extended = Filter { assignment };
    debug_assert!(extended.is_finer(filter));
    Ok(extended)
}

/// Outcome of a primality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeVerdict {
    Holds { cases: usize },
    Counterexample { members: Vec<Sieve>, union: Sieve },
}

impl PrimeVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PrimeVerdict::Holds { .. })
    }
}

/// For all sieves S, T on `obj`: S∪T in the filter implies S or T is.
pub fn check_prime(cat: &FiniteCategory, filter: &Filter, obj: ObjId) -> PrimeVerdict {
    let sieves = sieve::enumerate_sieves(cat, obj);
    let at = filter.at(obj);
    let mut cases = 0;
    for (i, s) in sieves.iter().enumerate() {
        for t in &sieves[i..] {
            cases += 1;
            let union = sieve::sieve_union(cat, obj, [s, t]).expect("shared codomain");
            if at.contains(&union) && !at.contains(s) && !at.contains(t) {
                return PrimeVerdict::Counterexample {
                    members: vec![s.clone(), t.clone()],
                    union,
                };
            }
        }
    }
    PrimeVerdict::Holds { cases }
}

/// Primality for unions of up to `arity` sieves.
pub fn check_prime_finite_union(
    cat: &FiniteCategory,
    filter: &Filter,
    obj: ObjId,
    arity: usize,
) -> PrimeVerdict {
    let sieves = sieve::enumerate_sieves(cat, obj);
    let at = filter.at(obj);
    let mut cases = 0;
    let n = sieves.len();
    // Subsets of size 1..=arity; repeated members never change a union.
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(picked) = stack.pop() {
        cases += 1;
        let union = sieve::sieve_union(cat, obj, picked.iter().map(|&i| &sieves[i]))
            .expect("shared codomain");
        if at.contains(&union) && !picked.iter().any(|&i| at.contains(&sieves[i])) {
            return PrimeVerdict::Counterexample {
                members: picked.iter().map(|&i| sieves[i].clone()).collect(),
                union,
            };
        }
        if picked.len() < arity {
            let last = *picked.last().expect("nonempty by construction");
            for next in last + 1..n {
                let mut extended = picked.clone();
                extended.push(next);
                stack.push(extended);
            }
        }
    }
    PrimeVerdict::Holds { cases }
}
