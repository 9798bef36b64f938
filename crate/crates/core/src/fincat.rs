//! Finite categories with explicit composition tables.
//!
//! A [`FiniteCategory`] is born from a [`CategorySpec`] via [`validate_category`],
//! which checks every law (typing, totality, identities, associativity) and
//! reports all violations with witnesses. Objects and morphisms are interned in
//! lexicographic name order, so every enumeration downstream is deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Index of an object in its category's name-sorted object list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjId(pub u32);

/// Index of a morphism in its category's name-sorted morphism list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Unvalidated description of a finite category, as read from a file or built
/// programmatically. Composition entries `(g, f, h)` mean `g∘f = h`, i.e. "g
/// after f". Identity composites may be omitted; validation infers them.
#[derive(Debug, Clone, Default)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpec>,
    /// object name -> name of its identity morphism
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<(String, String, String)>,
}

#[derive(Debug, Clone)]
pub struct MorphismSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

impl CategorySpec {
    pub fn morphism(mut self, name: &str, dom: &str, cod: &str) -> Self {
        self.morphisms.push(MorphismSpec {
            name: name.to_string(),
            dom: dom.to_string(),
            cod: cod.to_string(),
        });
        self
    }

    pub fn compose(mut self, g: &str, f: &str, h: &str) -> Self {
        self.composition
            .push((g.to_string(), f.to_string(), h.to_string()));
        self
    }
}

/// One violated category law, with the witnessing names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    DuplicateObject {
        name: String,
    },
    DuplicateMorphism {
        name: String,
    },
    /// A morphism, identity entry, or composition entry names something undeclared.
    DanglingReference {
        site: String,
        name: String,
    },
    MissingIdentity {
        object: String,
    },
    /// The declared identity of an object is not an endomorphism of it.
    IdentityNotEndo {
        object: String,
        morphism: String,
    },
    /// A composition entry pairs morphisms with cod(f) != dom(g).
    NonComposablePair {
        g: String,
        f: String,
    },
    /// Two table entries disagree about the same composite.
    ConflictingComposite {
        g: String,
        f: String,
        first: String,
        second: String,
    },
    /// dom/cod of a declared composite do not match dom(f)/cod(g).
    CompositeTypeMismatch {
        g: String,
        f: String,
        composite: String,
    },
    MissingComposite {
        g: String,
        f: String,
    },
    /// `id∘f` or `f∘id` differs from `f`.
    IdentityLawFailure {
        f: String,
        got: String,
    },
    /// `(h∘g)∘f != h∘(g∘f)`.
    AssociativityFailure {
        h: String,
        g: String,
        f: String,
        left: String,
        right: String,
    },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CategoryViolation::*;
        match self {
            DuplicateObject { name } => write!(out, "duplicate object `{name}`"),
            DuplicateMorphism { name } => write!(out, "duplicate morphism `{name}`"),
            DanglingReference { site, name } => {
                write!(out, "{site} references undeclared name `{name}`")
            }
            MissingIdentity { object } => write!(out, "object `{object}` has no identity"),
            IdentityNotEndo { object, morphism } => write!(
                out,
                "identity `{morphism}` of `{object}` is not an endomorphism of it"
            ),
            NonComposablePair { g, f } => write!(
                out,
                "composition entry ({g}, {f}) pairs non-composable morphisms"
            ),
            ConflictingComposite { g, f, first, second } => write!(
                out,
                "conflicting entries for {g}∘{f}: `{first}` and `{second}`"
            ),
            CompositeTypeMismatch { g, f, composite } => write!(
                out,
                "composite {g}∘{f} = `{composite}` has the wrong domain or codomain"
            ),
            MissingComposite { g, f } => write!(out, "no composite declared for {g}∘{f}"),
            IdentityLawFailure { f, got } => {
                write!(out, "identity law fails on `{f}`: composite is `{got}`")
            }
            AssociativityFailure { h, g, f, left, right } => write!(
                out,
                "associativity fails on ({h}, {g}, {f}): ({h}∘{g})∘{f} = `{left}` but {h}∘({g}∘{f}) = `{right}`"
            ),
        }
    }
}

/// Every law violation found while validating a [`CategorySpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<CategoryViolation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FincatError {
    #[error("category has no terminal object")]
    NoTerminalObject,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("relation references unknown element `{0}`")]
    UnknownElement(String),
    #[error("relation is not reflexive: missing ({0}, {0})")]
    NotReflexive(String),
    #[error("relation is not antisymmetric: both ({0}, {1}) and ({1}, {0}) hold")]
    NotAntisymmetric(String, String),
    #[error(
        "relation is not transitive: ({0}, {1}) and ({1}, {2}) hold but ({0}, {2}) is missing"
    )]
    NotTransitive(String, String, String),
}

/// A validated finite category. Objects and morphisms are indexed in
/// lexicographic name order; the composition table is total on composable
/// pairs. Immutable after validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    object_names: Vec<String>,
    morphism_names: Vec<String>,
    dom: Vec<ObjId>,
    cod: Vec<ObjId>,
    identities: Vec<MorId>,
    /// `table[g][f]` is `g∘f`, present exactly when cod(f) = dom(g).
    table: Vec<Vec<Option<MorId>>>,
    /// Morphisms with the given codomain, ascending.
    hom_into: Vec<Vec<MorId>>,
}

impl FiniteCategory {
    pub fn object_count(&self) -> usize {
        self.object_names.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphism_names.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.object_names.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphism_names.len() as u32).map(MorId)
    }

    pub fn object_name(&self, obj: ObjId) -> &str {
        &self.object_names[obj.index()]
    }

    pub fn morphism_name(&self, m: MorId) -> &str {
        &self.morphism_names[m.index()]
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.object_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| ObjId(i as u32))
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.morphism_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
            .map(|i| MorId(i as u32))
    }

    pub fn dom(&self, m: MorId) -> ObjId {
        self.dom[m.index()]
    }

    pub fn cod(&self, m: MorId) -> ObjId {
        self.cod[m.index()]
    }

    pub fn identity(&self, obj: ObjId) -> MorId {
        self.identities[obj.index()]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.dom(m).index()] == m
    }

    /// `g∘f` ("g after f"); `None` when cod(f) != dom(g).
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        self.table[g.index()][f.index()]
    }

    /// All morphisms with codomain `obj`, ascending by id (= by name).
    pub fn hom_into(&self, obj: ObjId) -> &[MorId] {
        &self.hom_into[obj.index()]
    }

    /// All morphisms from `x` to `y`, ascending.
    pub fn hom(&self, x: ObjId, y: ObjId) -> Vec<MorId> {
        self.hom_into[y.index()]
            .iter()
            .copied()
            .filter(|&m| self.dom(m) == x)
            .collect()
    }

    /// The canonically least object into which every object has exactly one
    /// morphism, if any.
    pub fn terminal_object(&self) -> Option<ObjId> {
        self.objects()
            .find(|&t| self.objects().all(|x| self.hom(x, t).len() == 1))
    }

    /// All points of `obj`: morphisms from the canonical terminal object.
    pub fn points(&self, obj: ObjId) -> Result<Vec<Point>, FincatError> {
        let terminal = self
            .terminal_object()
            .ok_or(FincatError::NoTerminalObject)?;
        Ok(self
            .hom(terminal, obj)
            .into_iter()
            .map(|carrier| Point {
                carrier,
                target: obj,
            })
            .collect())
    }
}

/// A morphism from the canonical terminal object. Only constructed by
/// [`FiniteCategory::points`], so the terminal-domain invariant always holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    carrier: MorId,
    target: ObjId,
}

impl Point {
    pub fn carrier(&self) -> MorId {
        self.carrier
    }

    pub fn target(&self) -> ObjId {
        self.target
    }
}

/// Check a raw description against every category law.
///
/// Structural problems (duplicate or dangling names, missing identities) abort
/// validation early because the composition table cannot even be indexed;
/// otherwise all law violations are collected, in deterministic order.
pub fn validate_category(spec: &CategorySpec) -> Result<FiniteCategory, ValidationReport> {
    let mut violations = Vec::new();

    let mut object_names: Vec<String> = spec.objects.clone();
    object_names.sort();
    for pair in object_names.windows(2) {
        if pair[0] == pair[1] {
            violations.push(CategoryViolation::DuplicateObject {
                name: pair[0].clone(),
            });
        }
    }

    let mut morphism_names: Vec<String> = spec.morphisms.iter().map(|m| m.name.clone()).collect();
    morphism_names.sort();
    for pair in morphism_names.windows(2) {
        if pair[0] == pair[1] {
            violations.push(CategoryViolation::DuplicateMorphism {
                name: pair[0].clone(),
            });
        }
    }

    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    let obj_index: BTreeMap<&str, ObjId> = object_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), ObjId(i as u32)))
        .collect();
    let mor_index: BTreeMap<&str, MorId> = morphism_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), MorId(i as u32)))
        .collect();

    let n = morphism_names.len();
    let mut dom = vec![ObjId(0); n];
    let mut cod = vec![ObjId(0); n];
    for m in &spec.morphisms {
        let id = mor_index[m.name.as_str()];
        match obj_index.get(m.dom.as_str()) {
            Some(&o) => dom[id.index()] = o,
            None => violations.push(CategoryViolation::DanglingReference {
                site: format!("morphism `{}` (dom)", m.name),
                name: m.dom.clone(),
            }),
        }
        match obj_index.get(m.cod.as_str()) {
            Some(&o) => cod[id.index()] = o,
            None => violations.push(CategoryViolation::DanglingReference {
                site: format!("morphism `{}` (cod)", m.name),
                name: m.cod.clone(),
            }),
        }
    }

    let mut identities: Vec<Option<MorId>> = vec![None; object_names.len()];
    for (obj_name, id_name) in &spec.identities {
        let Some(&obj) = obj_index.get(obj_name.as_str()) else {
            violations.push(CategoryViolation::DanglingReference {
                site: "identities".to_string(),
                name: obj_name.clone(),
            });
            continue;
        };
        let Some(&m) = mor_index.get(id_name.as_str()) else {
            violations.push(CategoryViolation::DanglingReference {
                site: format!("identity of `{obj_name}`"),
                name: id_name.clone(),
            });
            continue;
        };
        identities[obj.index()] = Some(m);
    }
    for (i, slot) in identities.iter().enumerate() {
        match slot {
            None => violations.push(CategoryViolation::MissingIdentity {
                object: object_names[i].clone(),
            }),
            Some(m) => {
                if dom[m.index()] != ObjId(i as u32) || cod[m.index()] != ObjId(i as u32) {
                    violations.push(CategoryViolation::IdentityNotEndo {
                        object: object_names[i].clone(),
                        morphism: morphism_names[m.index()].clone(),
                    });
                }
            }
        }
    }

    for (g, f, h) in &spec.composition {
        for name in [g, f, h] {
            if !mor_index.contains_key(name.as_str()) {
                violations.push(CategoryViolation::DanglingReference {
                    site: format!("composition entry ({g}, {f}, {h})"),
                    name: name.clone(),
                });
            }
        }
    }

    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }
    let identities: Vec<MorId> = identities.into_iter().map(|m| m.unwrap()).collect();

    // Fill the table from declared entries, then infer identity composites.
    let mut table: Vec<Vec<Option<MorId>>> = vec![vec![None; n]; n];
    for (g_name, f_name, h_name) in &spec.composition {
        let g = mor_index[g_name.as_str()];
        let f = mor_index[f_name.as_str()];
        let h = mor_index[h_name.as_str()];
        if cod[f.index()] != dom[g.index()] {
            violations.push(CategoryViolation::NonComposablePair {
                g: g_name.clone(),
                f: f_name.clone(),
            });
            continue;
        }
        match table[g.index()][f.index()] {
            Some(prev) if prev != h => violations.push(CategoryViolation::ConflictingComposite {
                g: g_name.clone(),
                f: f_name.clone(),
                first: morphism_names[prev.index()].clone(),
                second: h_name.clone(),
            }),
            _ => table[g.index()][f.index()] = Some(h),
        }
    }

    let mor_ids = || (0..n as u32).map(MorId);
    for f in mor_ids() {
        let id_cod = identities[cod[f.index()].index()];
        let id_dom = identities[dom[f.index()].index()];
        for (g, x) in [(id_cod, f), (f, id_dom)] {
            match table[g.index()][x.index()] {
                None => table[g.index()][x.index()] = Some(f),
                Some(h) if h != f => violations.push(CategoryViolation::IdentityLawFailure {
                    f: morphism_names[f.index()].clone(),
                    got: morphism_names[h.index()].clone(),
                }),
                Some(_) => {}
            }
        }
    }

    for g in mor_ids() {
        for f in mor_ids() {
            if cod[f.index()] != dom[g.index()] {
                continue;
            }
            match table[g.index()][f.index()] {
                None => violations.push(CategoryViolation::MissingComposite {
                    g: morphism_names[g.index()].clone(),
                    f: morphism_names[f.index()].clone(),
                }),
                Some(h) => {
                    if dom[h.index()] != dom[f.index()] || cod[h.index()] != cod[g.index()] {
                        violations.push(CategoryViolation::CompositeTypeMismatch {
                            g: morphism_names[g.index()].clone(),
                            f: morphism_names[f.index()].clone(),
                            composite: morphism_names[h.index()].clone(),
                        });
                    }
                }
            }
        }
    }

    // Associativity only makes sense once the table is total and well-typed.
    if violations.is_empty() {
        for h in mor_ids() {
            for g in mor_ids() {
                if cod[g.index()] != dom[h.index()] {
                    continue;
                }
                for f in mor_ids() {
                    if cod[f.index()] != dom[g.index()] {
                        continue;
                    }
                    let gf = table[g.index()][f.index()].unwrap();
                    let hg = table[h.index()][g.index()].unwrap();
                    let left = table[hg.index()][f.index()].unwrap();
                    let right = table[h.index()][gf.index()].unwrap();
                    if left != right {
                        violations.push(CategoryViolation::AssociativityFailure {
                            h: morphism_names[h.index()].clone(),
                            g: morphism_names[g.index()].clone(),
                            f: morphism_names[f.index()].clone(),
                            left: morphism_names[left.index()].clone(),
                            right: morphism_names[right.index()].clone(),
                        });
                    }
                }
            }
        }
    }

    if !violations.is_empty() {
        return Err(ValidationReport { violations });
    }

    let mut hom_into: Vec<Vec<MorId>> = vec![Vec::new(); object_names.len()];
    for m in mor_ids() {
        hom_into[cod[m.index()].index()].push(m);
    }

    Ok(FiniteCategory {
        object_names,
        morphism_names,
        dom,
        cod,
        identities,
        table,
        hom_into,
    })
}

/// Regard a poset as a category: one morphism `x->y` exactly when x <= y.
///
/// The relation must be given in full (reflexive pairs included); anything
/// short of a poset is rejected with the violating pair or triple.
#[allow(clippy::needless_range_loop)]
pub fn from_poset(
    elements: &[String],
    relation: &[(String, String)],
) -> Result<FiniteCategory, PosetError> {
    let mut sorted = elements.to_vec();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(PosetError::DuplicateElement(pair[0].clone()));
        }
    }
    let index: BTreeMap<&str, usize> = sorted
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();

    let k = sorted.len();
    let mut le = vec![vec![false; k]; k];
    for (x, y) in relation {
        let xi = *index
            .get(x.as_str())
            .ok_or_else(|| PosetError::UnknownElement(x.clone()))?;
        let yi = *index
            .get(y.as_str())
            .ok_or_else(|| PosetError::UnknownElement(y.clone()))?;
        le[xi][yi] = true;
    }

    for (i, name) in sorted.iter().enumerate() {
        if !le[i][i] {
            return Err(PosetError::NotReflexive(name.clone()));
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i != j && le[i][j] && le[j][i] {
                return Err(PosetError::NotAntisymmetric(
                    sorted[i].clone(),
                    sorted[j].clone(),
                ));
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            if !le[i][j] {
                continue;
            }
            for l in 0..k {
                if le[j][l] && !le[i][l] {
                    return Err(PosetError::NotTransitive(
                        sorted[i].clone(),
                        sorted[j].clone(),
                        sorted[l].clone(),
                    ));
                }
            }
        }
    }

    let arrow = |x: usize, y: usize| format!("{}->{}", sorted[x], sorted[y]);
    let mut spec = CategorySpec {
        objects: sorted.clone(),
        ..CategorySpec::default()
    };
    for x in 0..k {
        for y in 0..k {
            if le[x][y] {
                spec = spec.morphism(&arrow(x, y), &sorted[x], &sorted[y]);
            }
        }
    }
    for (i, name) in sorted.iter().enumerate() {
        spec.identities.insert(name.clone(), arrow(i, i));
    }
    for x in 0..k {
        for y in 0..k {
            if !le[x][y] {
                continue;
            }
            for z in 0..k {
                if le[y][z] {
                    spec = spec.compose(&arrow(y, z), &arrow(x, y), &arrow(x, z));
                }
            }
        }
    }

    Ok(validate_category(&spec).expect("a poset always induces a lawful category"))
}

/// Outcome of the brute-force finite-completeness search: a terminal object,
/// all binary products, and all equalizers. Diagnostic only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub terminal: Option<ObjId>,
    pub missing_products: Vec<(ObjId, ObjId)>,
    pub missing_equalizers: Vec<(MorId, MorId)>,
}

impl CompletenessReport {
    pub fn is_finitely_complete(&self) -> bool {
        self.terminal.is_some()
            && self.missing_products.is_empty()
            && self.missing_equalizers.is_empty()
    }
}

pub fn check_finite_completeness(cat: &FiniteCategory) -> CompletenessReport {
    let terminal = cat.terminal_object();

    let mut missing_products = Vec::new();
    for a in cat.objects() {
        for b in cat.objects().filter(|&b| b >= a) {
            if !has_product(cat, a, b) {
                missing_products.push((a, b));
            }
        }
    }

    let mut missing_equalizers = Vec::new();
    for f in cat.morphisms() {
        for g in cat.morphisms().filter(|&g| g >= f) {
            if cat.dom(f) == cat.dom(g) && cat.cod(f) == cat.cod(g) && !has_equalizer(cat, f, g) {
                missing_equalizers.push((f, g));
            }
        }
    }

    CompletenessReport {
        terminal,
        missing_products,
        missing_equalizers,
    }
}

fn has_product(cat: &FiniteCategory, a: ObjId, b: ObjId) -> bool {
    cat.objects().any(|p| {
        cat.hom(p, a).into_iter().any(|pr_a| {
            cat.hom(p, b).into_iter().any(|pr_b| {
                cat.objects().all(|x| {
                    cat.hom(x, a).into_iter().all(|f| {
                        cat.hom(x, b).into_iter().all(|g| {
                            let mediating = cat
                                .hom(x, p)
                                .into_iter()
                                .filter(|&m| {
                                    cat.compose(pr_a, m) == Some(f)
                                        && cat.compose(pr_b, m) == Some(g)
                                })
                                .count();
                            mediating == 1
                        })
                    })
                })
            })
        })
    })
}

fn has_equalizer(cat: &FiniteCategory, f: MorId, g: MorId) -> bool {
    let a = cat.dom(f);
    cat.objects().any(|e_obj| {
        cat.hom(e_obj, a).into_iter().any(|e| {
            if cat.compose(f, e) != cat.compose(g, e) {
                return false;
            }
            cat.objects().all(|x| {
                cat.hom(x, a)
                    .into_iter()
                    .filter(|&h| cat.compose(f, h) == cat.compose(g, h))
                    .all(|h| {
                        let mediating = cat
                            .hom(x, e_obj)
                            .into_iter()
                            .filter(|&u| cat.compose(e, u) == Some(h))
                            .count();
                        mediating == 1
                    })
            })
        })
    })
}

/// Convenience for tests and fixtures: look up a batch of morphism names.
pub fn morphisms_by_name(cat: &FiniteCategory, names: &[&str]) -> BTreeSet<MorId> {
    names
        .iter()
        .map(|n| {
            cat.morphism_by_name(n)
                .unwrap_or_else(|| panic!("unknown morphism `{n}`"))
        })
        .collect()
}
