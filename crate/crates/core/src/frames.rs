//! Finite frames (complete Heyting algebras) and their canonical covering
//! topology: a sieve covers an element exactly when its join is that element.
//!
//! A finite frame is the same thing as a finite distributive lattice; the
//! implication table is forced by the adjunction `x <= (a => b)` iff
//! `x ∧ a <= b`. Frame elements double as the objects of the poset category,
//! and sieves on an element are exactly the down-closed subsets below it.

use thiserror::Error;

use crate::filters::Filter;
use crate::fincat::{self, FiniteCategory, ObjId};
use crate::sieve::{self, Sieve};
use crate::topology::{self, GrothendieckTopology, ValidationLevel};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error(transparent)]
    Poset(#[from] fincat::PosetError),
    #[error("elements `{0}` and `{1}` have no join")]
    MissingJoin(String, String),
    #[error("elements `{0}` and `{1}` have no meet")]
    MissingMeet(String, String),
    #[error("distributivity fails at ({a}, {b}, {c}): {a}∧({b}∨{c}) = {left} but ({a}∧{b})∨({a}∧{c}) = {right}")]
    NotDistributive {
        a: String,
        b: String,
        c: String,
        left: String,
        right: String,
    },
    #[error("covering member `{member}` is not below `{target}`")]
    MemberNotBelow { member: String, target: String },
}

/// A finite distributive lattice with implication, together with its poset
/// category. Elements are identified with the category's objects.
#[derive(Debug, Clone)]
pub struct Frame {
    category: FiniteCategory,
    le: Vec<Vec<bool>>,
    join_table: Vec<Vec<ObjId>>,
    meet_table: Vec<Vec<ObjId>>,
    implication_table: Vec<Vec<ObjId>>,
    top: ObjId,
    bottom: ObjId,
}

impl Frame {
    pub fn category(&self) -> &FiniteCategory {
        &self.category
    }

    pub fn elements(&self) -> impl Iterator<Item = ObjId> + '_ {
        self.category.objects()
    }

    pub fn name(&self, e: ObjId) -> &str {
        self.category.object_name(e)
    }

    pub fn element_by_name(&self, name: &str) -> Option<ObjId> {
        self.category.object_by_name(name)
    }

    pub fn le(&self, a: ObjId, b: ObjId) -> bool {
        self.le[a.index()][b.index()]
    }

    pub fn join(&self, a: ObjId, b: ObjId) -> ObjId {
        self.join_table[a.index()][b.index()]
    }

    pub fn meet(&self, a: ObjId, b: ObjId) -> ObjId {
        self.meet_table[a.index()][b.index()]
    }

    pub fn implies(&self, a: ObjId, b: ObjId) -> ObjId {
        self.implication_table[a.index()][b.index()]
    }

    pub fn top(&self) -> ObjId {
        self.top
    }

    pub fn bottom(&self) -> ObjId {
        self.bottom
    }

    /// Join of a finite family; the empty join is the bottom element.
    pub fn join_of(&self, elements: impl IntoIterator<Item = ObjId>) -> ObjId {
        elements
            .into_iter()
            .fold(self.bottom, |acc, e| self.join(acc, e))
    }

    /// The elements of a sieve on `c`: the domains of its morphisms.
    pub fn sieve_elements(&self, s: &Sieve) -> Vec<ObjId> {
        s.members().iter().map(|&m| self.category.dom(m)).collect()
    }
}

/// Build a frame from a poset: compute meet/join tables, check
/// distributivity on all triples, and derive the implication table.
pub fn frame_from_poset(
    elements: &[String],
    relation: &[(String, String)],
) -> Result<Frame, FrameError> {
    let category = fincat::from_poset(elements, relation)?;
    let k = category.object_count();
    let ids: Vec<ObjId> = category.objects().collect();

    let mut le = vec![vec![false; k]; k];
    for &x in &ids {
        for &y in &ids {
            le[x.index()][y.index()] = !category.hom(x, y).is_empty();
        }
    }

    let bound = |x: ObjId, y: ObjId, upper: bool| -> Option<ObjId> {
        let cmp = |a: ObjId, b: ObjId| {
            if upper {
                le[a.index()][b.index()]
            } else {
                le[b.index()][a.index()]
            }
        };
        let bounds: Vec<ObjId> = ids
            .iter()
            .copied()
            .filter(|&z| cmp(x, z) && cmp(y, z))
            .collect();
        bounds
            .iter()
            .copied()
            .find(|&z| bounds.iter().all(|&w| cmp(z, w)))
    };

    let mut join_table = vec![vec![ObjId(0); k]; k];
    let mut meet_table = vec![vec![ObjId(0); k]; k];
    for &x in &ids {
        for &y in &ids {
            join_table[x.index()][y.index()] = bound(x, y, true).ok_or_else(|| {
                FrameError::MissingJoin(
                    category.object_name(x).to_string(),
                    category.object_name(y).to_string(),
                )
            })?;
            meet_table[x.index()][y.index()] = bound(x, y, false).ok_or_else(|| {
                FrameError::MissingMeet(
                    category.object_name(x).to_string(),
                    category.object_name(y).to_string(),
                )
            })?;
        }
    }

    let meet = |x: ObjId, y: ObjId| meet_table[x.index()][y.index()];
    let join = |x: ObjId, y: ObjId| join_table[x.index()][y.index()];

    for &a in &ids {
        for &b in &ids {
            for &c in &ids {
                let left = meet(a, join(b, c));
                let right = join(meet(a, b), meet(a, c));
                if left != right {
                    return Err(FrameError::NotDistributive {
                        a: category.object_name(a).to_string(),
                        b: category.object_name(b).to_string(),
                        c: category.object_name(c).to_string(),
                        left: category.object_name(left).to_string(),
                        right: category.object_name(right).to_string(),
                    });
                }
            }
        }
    }

    let bottom = ids
        .iter()
        .copied()
        .find(|&z| ids.iter().all(|&w| le[z.index()][w.index()]))
        .expect("a finite lattice has a bottom");
    let top = ids
        .iter()
        .copied()
        .find(|&z| ids.iter().all(|&w| le[w.index()][z.index()]))
        .expect("a finite lattice has a top");

    // a => b is the join of every x with x ∧ a <= b; distributivity makes
    // that join itself satisfy the bound, giving the adjunction.
    let mut implication_table = vec![vec![ObjId(0); k]; k];
    for &a in &ids {
        for &b in &ids {
            let mut acc = bottom;
            for &x in &ids {
                if le[meet(x, a).index()][b.index()] {
                    acc = join(acc, x);
                }
            }
            implication_table[a.index()][b.index()] = acc;
        }
    }
    for &x in &ids {
        for &a in &ids {
            for &b in &ids {
                let lhs = le[x.index()][implication_table[a.index()][b.index()].index()];
                let rhs = le[meet(x, a).index()][b.index()];
                assert_eq!(lhs, rhs, "implication must satisfy the adjunction");
            }
        }
    }

    Ok(Frame {
        category,
        le,
        join_table,
        meet_table,
        implication_table,
        top,
        bottom,
    })
}

/// Does the family cover `c`, i.e. join to it? All members must lie below `c`.
pub fn base_covers(frame: &Frame, c: ObjId, family: &[ObjId]) -> Result<bool, FrameError> {
    for &member in family {
        if !frame.le(member, c) {
            return Err(FrameError::MemberNotBelow {
                member: frame.name(member).to_string(),
                target: frame.name(c).to_string(),
            });
        }
    }
    Ok(frame.join_of(family.iter().copied()) == c)
}

/// Does the sieve cover `c`? The empty sieve joins to bottom, so it covers
/// only the bottom element.
pub fn sieve_covers(frame: &Frame, c: ObjId, s: &Sieve) -> bool {
    assert_eq!(s.codomain(), c, "sieve must live on the covered element");
    frame.join_of(frame.sieve_elements(s)) == c
}

/// The canonical topology: `J(c)` holds the sieves whose join is `c`.
pub fn canonical_topology(frame: &Frame) -> GrothendieckTopology {
    let cat = frame.category();
    let mut assignment = crate::filters::SieveAssignment::new();
    for c in cat.objects() {
        let covers = sieve::enumerate_sieves(cat, c)
            .into_iter()
            .filter(|s| sieve_covers(frame, c, s))
            .collect();
        assignment.insert(c, covers);
    }
    let j = GrothendieckTopology::new(cat, assignment);
    let report = topology::validate_topology(cat, &j, ValidationLevel::Full);
    assert!(
        report.is_valid(),
        "the canonical topology of a frame satisfies all axioms: {:?}",
        report.violations
    );
    j
}

/// Object-level convergence from the worked example: every sieve of the
/// filter at `c` covers `c`, i.e. the assignment lands inside `J(c)`.
pub fn frame_cover_converges(frame: &Frame, filter: &Filter, c: ObjId) -> bool {
    filter.at(c).iter().all(|s| sieve_covers(frame, c, s))
}
