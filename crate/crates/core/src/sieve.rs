//! Sieves on an object and their complete lattice.
//!
//! A sieve on `C` is a set of morphisms with codomain `C` closed under
//! precomposition (a right ideal). The sieves on a fixed object, ordered by
//! inclusion, form a complete lattice whose joins and meets are plain unions
//! and intersections.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fincat::{FiniteCategory, MorId, ObjId};

/// A right ideal of morphisms with a fixed codomain.
///
/// Ordering is canonical: by codomain, then cardinality, then member list.
/// Every constructor either validates or preserves the right-ideal invariant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sieve {
    codomain: ObjId,
    members: BTreeSet<MorId>,
}

impl PartialOrd for Sieve {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sieve {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.codomain, self.members.len(), &self.members).cmp(&(
            other.codomain,
            other.members.len(),
            &other.members,
        ))
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SieveError {
    #[error("morphism `{morphism}` has codomain `{actual}`, expected a sieve on `{expected}`")]
    WrongCodomain {
        morphism: String,
        expected: String,
        actual: String,
    },
    #[error("set is not a sieve: contains `{member}` but not `{member}`∘`{pre}` = `{missing}`")]
    NotRightIdeal {
        member: String,
        pre: String,
        missing: String,
    },
    #[error("cannot pull back along `{morphism}`: its codomain `{actual}` differs from the sieve's object `{expected}`")]
    PullbackMismatch {
        morphism: String,
        expected: String,
        actual: String,
    },
    #[error("sieves on `{left}` and `{right}` cannot be combined")]
    MixedCodomains { left: String, right: String },
}

impl Sieve {
    /// The empty sieve, a first-class value of the lattice.
    pub fn empty(codomain: ObjId) -> Self {
        Sieve {
            codomain,
            members: BTreeSet::new(),
        }
    }

    /// Validate an explicit member set as a sieve on `obj`.
    pub fn new(
        cat: &FiniteCategory,
        obj: ObjId,
        members: BTreeSet<MorId>,
    ) -> Result<Self, SieveError> {
        for &m in &members {
            if cat.cod(m) != obj {
                return Err(SieveError::WrongCodomain {
                    morphism: cat.morphism_name(m).to_string(),
                    expected: cat.object_name(obj).to_string(),
                    actual: cat.object_name(cat.cod(m)).to_string(),
                });
            }
            for g in cat.hom_into(cat.dom(m)) {
                let composite = cat
                    .compose(m, *g)
                    .expect("cod(g) = dom(m), so the composite exists");
                if !members.contains(&composite) {
                    return Err(SieveError::NotRightIdeal {
                        member: cat.morphism_name(m).to_string(),
                        pre: cat.morphism_name(*g).to_string(),
                        missing: cat.morphism_name(composite).to_string(),
                    });
                }
            }
        }
        Ok(Sieve {
            codomain: obj,
            members,
        })
    }

    pub fn codomain(&self) -> ObjId {
        self.codomain
    }

    pub fn members(&self) -> &BTreeSet<MorId> {
        &self.members
    }

    pub fn contains(&self, m: MorId) -> bool {
        self.members.contains(&m)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.codomain == other.codomain && self.members.is_subset(&other.members)
    }

    /// Member names in canonical order, for reports.
    pub fn member_names<'a>(&self, cat: &'a FiniteCategory) -> Vec<&'a str> {
        self.members.iter().map(|&m| cat.morphism_name(m)).collect()
    }
}

/// Does `members` satisfy both sieve invariants for codomain `obj`?
pub fn is_sieve(cat: &FiniteCategory, obj: ObjId, members: &BTreeSet<MorId>) -> bool {
    Sieve::new(cat, obj, members.clone()).is_ok()
}

/// All morphisms with codomain `obj`.
pub fn maximal_sieve(cat: &FiniteCategory, obj: ObjId) -> Sieve {
    Sieve {
        codomain: obj,
        members: cat.hom_into(obj).iter().copied().collect(),
    }
}

/// Least sieve containing the generators: the fixpoint of precomposition.
pub fn generate_sieve(
    cat: &FiniteCategory,
    obj: ObjId,
    generators: &BTreeSet<MorId>,
) -> Result<Sieve, SieveError> {
    for &m in generators {
        if cat.cod(m) != obj {
            return Err(SieveError::WrongCodomain {
                morphism: cat.morphism_name(m).to_string(),
                expected: cat.object_name(obj).to_string(),
                actual: cat.object_name(cat.cod(m)).to_string(),
            });
        }
    }
    let mut members = generators.clone();
    let mut queue: VecDeque<MorId> = generators.iter().copied().collect();
    while let Some(m) = queue.pop_front() {
        for g in cat.hom_into(cat.dom(m)) {
            let composite = cat.compose(m, *g).expect("composable by construction");
            if members.insert(composite) {
                queue.push_back(composite);
            }
        }
    }
    Ok(Sieve {
        codomain: obj,
        members,
    })
}

/// The restriction of `s` along `h: D -> C`: all `g` into `D` with `h∘g ∈ s`.
pub fn pullback_sieve(cat: &FiniteCategory, h: MorId, s: &Sieve) -> Result<Sieve, SieveError> {
    if cat.cod(h) != s.codomain {
        return Err(SieveError::PullbackMismatch {
            morphism: cat.morphism_name(h).to_string(),
            expected: cat.object_name(s.codomain).to_string(),
            actual: cat.object_name(cat.cod(h)).to_string(),
        });
    }
    let d = cat.dom(h);
    let members: BTreeSet<MorId> = cat
        .hom_into(d)
        .iter()
        .copied()
        .filter(|&g| s.contains(cat.compose(h, g).expect("cod(g) = dom(h)")))
        .collect();
    let result = Sieve {
        codomain: d,
        members,
    };
    assert!(
        is_sieve(cat, d, result.members()),
        "pullback of a sieve must be a sieve"
    );
    Ok(result)
}

fn combine<'a>(
    cat: &FiniteCategory,
    obj: ObjId,
    sieves: impl IntoIterator<Item = &'a Sieve>,
    union: bool,
) -> Result<Sieve, SieveError> {
    let mut members: Option<BTreeSet<MorId>> = None;
    for s in sieves {
        if s.codomain != obj {
            return Err(SieveError::MixedCodomains {
                left: cat.object_name(obj).to_string(),
                right: cat.object_name(s.codomain).to_string(),
            });
        }
        members = Some(match members {
            None => s.members.clone(),
            Some(acc) => {
                if union {
                    acc.union(&s.members).copied().collect()
                } else {
                    acc.intersection(&s.members).copied().collect()
                }
            }
        });
    }
    let members = members.unwrap_or_else(|| {
        if union {
            BTreeSet::new()
        } else {
            maximal_sieve(cat, obj).members
        }
    });
    let result = Sieve {
        codomain: obj,
        members,
    };
    debug_assert!(is_sieve(cat, obj, result.members()));
    Ok(result)
}

/// Union of a family of sieves on `obj`; the empty family yields the empty sieve.
pub fn sieve_union<'a>(
    cat: &FiniteCategory,
    obj: ObjId,
    sieves: impl IntoIterator<Item = &'a Sieve>,
) -> Result<Sieve, SieveError> {
    combine(cat, obj, sieves, true)
}

/// Intersection of a family of sieves on `obj`; the empty family yields the
/// maximal sieve.
pub fn sieve_intersection<'a>(
    cat: &FiniteCategory,
    obj: ObjId,
    sieves: impl IntoIterator<Item = &'a Sieve>,
) -> Result<Sieve, SieveError> {
    combine(cat, obj, sieves, false)
}

/// Every sieve on `obj`, in canonical order (cardinality, then member list).
///
/// Sieves are built by saturating under single-generator extensions starting
/// from the empty sieve, which reaches each right ideal exactly once and never
/// touches a non-ideal subset.
pub fn enumerate_sieves(cat: &FiniteCategory, obj: ObjId) -> Vec<Sieve> {
    let principal: BTreeMap<MorId, Sieve> = cat
        .hom_into(obj)
        .iter()
        .map(|&m| {
            let mut generator = BTreeSet::new();
            generator.insert(m);
            (
                m,
                generate_sieve(cat, obj, &generator).expect("codomain matches"),
            )
        })
        .collect();

    let mut seen: BTreeSet<BTreeSet<MorId>> = BTreeSet::new();
    let mut queue: VecDeque<BTreeSet<MorId>> = VecDeque::new();
    seen.insert(BTreeSet::new());
    queue.push_back(BTreeSet::new());
    while let Some(current) = queue.pop_front() {
        for (&m, base) in &principal {
            if current.contains(&m) {
                continue;
            }
            let extended: BTreeSet<MorId> = current.union(&base.members).copied().collect();
            if seen.insert(extended.clone()) {
                queue.push_back(extended);
            }
        }
    }

    let mut sieves: Vec<Sieve> = seen
        .into_iter()
        .map(|members| Sieve {
            codomain: obj,
            members,
        })
        .collect();
    sieves.sort();
    sieves
}

/// Witness for a failed lattice-closure check: a subfamily whose union or
/// intersection is not itself a sieve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeClosureWitness {
    pub subset: Vec<Sieve>,
    pub union_closed: bool,
    pub intersection_closed: bool,
}

/// Verify that the enumerated sieves on `obj` are closed under unions and
/// intersections of subfamilies: exhaustively when there are at most 64
/// subsets, otherwise over `samples` subsets drawn from a fixed-seed RNG.
pub fn check_lattice_closure(
    cat: &FiniteCategory,
    obj: ObjId,
    samples: usize,
    seed: u64,
) -> Result<usize, LatticeClosureWitness> {
    let sieves = enumerate_sieves(cat, obj);
    let universe: BTreeSet<&Sieve> = sieves.iter().collect();
    let n = sieves.len();

    let check_subset = |mask_members: &[usize]| -> Result<(), LatticeClosureWitness> {
        let subset: Vec<&Sieve> = mask_members.iter().map(|&i| &sieves[i]).collect();
        let union = sieve_union(cat, obj, subset.iter().copied()).expect("same codomain");
        let intersection =
            sieve_intersection(cat, obj, subset.iter().copied()).expect("same codomain");
        let union_closed = universe.contains(&union);
        let intersection_closed = universe.contains(&intersection);
        if union_closed && intersection_closed {
            Ok(())
        } else {
            Err(LatticeClosureWitness {
                subset: subset.into_iter().cloned().collect(),
                union_closed,
                intersection_closed,
            })
        }
    };

    if n <= 6 {
        // At most 64 subsets: exhaustive.
        let mut checked = 0;
        for mask in 0u64..(1 << n) {
            let picked: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            check_subset(&picked)?;
            checked += 1;
        }
        Ok(checked)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let picked: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            check_subset(&picked)?;
        }
        Ok(samples)
    }
}
