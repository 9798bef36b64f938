//! The JSON workspace document: one category (inline or preset), named
//! topologies and filters, and an optional query list.
//!
//! Schema errors carry JSON-pointer-style locations and always exit with
//! code 2; mathematical findings are reports, never input errors.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use sievekit::filters::SieveAssignment;
use sievekit::fincat::{self, CategorySpec, FiniteCategory, MorphismSpec, ValidationReport};
use sievekit::frames;
use sievekit::sieve::Sieve;
use sievekit::topology::GrothendieckTopology;
use sievekit::{corpus, ObjId};

/// An input problem, located by a JSON-pointer-ish path into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}: {}", self.pointer, self.message)
    }
}

impl InputError {
    pub fn new(pointer: impl Into<String>, message: impl fmt::Display) -> Self {
        InputError {
            pointer: pointer.into(),
            message: message.to_string(),
        }
    }
}

pub type SieveNames = Vec<String>;
pub type AssignmentJson = BTreeMap<String, Vec<SieveNames>>;
type PosetData = (Vec<String>, Vec<(String, String)>);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentJson {
    pub category: CategorySource,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub topologies: BTreeMap<String, AssignmentJson>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub filters: BTreeMap<String, FilterJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<QueryJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategorySource {
    Preset(PresetJson),
    Inline(CategoryJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetJson {
    pub preset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub le: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismJson>,
    pub identities: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub composition: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FilterJson {
    FromBase {
        base: AssignmentJson,
        #[serde(default)]
        generate: bool,
    },
    FromSubbase {
        subbase: AssignmentJson,
        #[serde(default)]
        generate: bool,
    },
    Explicit(AssignmentJson),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum QueryJson {
    Validate,
    Sieves {
        object: String,
    },
    Pullback {
        along: String,
        sieve: SieveNames,
    },
    FilterGen {
        name: String,
    },
    Ultra {
        name: String,
    },
    Converge {
        filter: String,
        point: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        topology: Option<String>,
    },
    Closure {
        sieve: SieveNames,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        object: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        topology: Option<String>,
    },
    Cluster {
        filter: String,
        point: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        topology: Option<String>,
    },
    Audit {
        id: String,
        object: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        topology: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
}

pub fn parse_document(text: &str) -> Result<DocumentJson, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::new("/", e))
}

/// Canonical serialization: pretty JSON with sorted maps and a trailing
/// newline. `parse` then `canonical_json` is the identity on its own output.
pub fn canonical_json(doc: &DocumentJson) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

/// Role a named filter declaration plays before generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclRole {
    Filter,
    Base,
    Subbase,
}

impl DeclRole {
    pub fn as_str(self) -> &'static str {
        match self {
            DeclRole::Filter => "filter",
            DeclRole::Base => "base",
            DeclRole::Subbase => "subbase",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FilterDecl {
    pub role: DeclRole,
    pub assignment: SieveAssignment,
    pub generate: bool,
}

/// A fully resolved document: validated category, well-formed sieves
/// everywhere, names interned.
pub struct Workspace {
    pub cat: FiniteCategory,
    pub topologies: BTreeMap<String, GrothendieckTopology>,
    pub filters: BTreeMap<String, FilterDecl>,
    pub queries: Vec<QueryJson>,
}

/// Category construction can fail two ways: bad input (preset misuse,
/// dangling names) or a lawfully-described category that breaks the axioms.
/// The latter is a finding `validate` must be able to report.
pub enum LoadedCategory {
    Valid {
        cat: FiniteCategory,
        /// The canonical topology, when the category came from a frame preset.
        canonical_topology: Option<GrothendieckTopology>,
    },
    Lawless(ValidationReport),
}

pub fn load_category(source: &CategorySource) -> Result<LoadedCategory, InputError> {
    match source {
        CategorySource::Inline(json) => {
            let spec = CategorySpec {
                objects: json.objects.clone(),
                morphisms: json
                    .morphisms
                    .iter()
                    .map(|m| MorphismSpec {
                        name: m.name.clone(),
                        dom: m.dom.clone(),
                        cod: m.cod.clone(),
                    })
                    .collect(),
                identities: json.identities.clone(),
                composition: json.composition.clone(),
            };
            match fincat::validate_category(&spec) {
                Ok(cat) => Ok(LoadedCategory::Valid {
                    cat,
                    canonical_topology: None,
                }),
                Err(report) => Ok(LoadedCategory::Lawless(report)),
            }
        }
        CategorySource::Preset(preset) => load_preset(preset),
    }
}

fn poset_parameters(preset: &PresetJson) -> Result<PosetData, InputError> {
    let elements = preset
        .elements
        .clone()
        .ok_or_else(|| InputError::new("/category/elements", "preset requires `elements`"))?;
    let le = preset
        .le
        .clone()
        .ok_or_else(|| InputError::new("/category/le", "preset requires `le`"))?;
    Ok((elements, le))
}

fn reject_parameters(preset: &PresetJson) -> Result<(), InputError> {
    if preset.elements.is_some() || preset.le.is_some() {
        return Err(InputError::new(
            "/category",
            format!("preset `{}` takes no parameters", preset.preset),
        ));
    }
    Ok(())
}

fn load_preset(preset: &PresetJson) -> Result<LoadedCategory, InputError> {
    match preset.preset.as_str() {
        "poset" => {
            let (elements, le) = poset_parameters(preset)?;
            let cat = fincat::from_poset(&elements, &le)
                .map_err(|e| InputError::new("/category/le", e))?;
            Ok(LoadedCategory::Valid { cat, canonical_topology: None })
        }
        "frame" => {
            let (elements, le) = poset_parameters(preset)?;
            let frame = frames::frame_from_poset(&elements, &le)
                .map_err(|e| InputError::new("/category/le", e))?;
            let canonical = frames::canonical_topology(&frame);
            Ok(LoadedCategory::Valid {
                cat: frame.category().clone(),
                canonical_topology: Some(canonical),
            })
        }
        "monoid" => {
            reject_parameters(preset)?;
            Ok(LoadedCategory::Valid { cat: corpus::m1(), canonical_topology: None })
        }
        "parallel-pair" => {
            reject_parameters(preset)?;
            Ok(LoadedCategory::Valid { cat: corpus::pp(), canonical_topology: None })
        }
        "pointed-two" => {
            reject_parameters(preset)?;
            Ok(LoadedCategory::Valid { cat: corpus::pt(), canonical_topology: None })
        }
        other => Err(InputError::new(
            "/category/preset",
            format!("unknown preset `{other}` (expected poset, frame, monoid, parallel-pair, or pointed-two)"),
        )),
    }
}

fn resolve_object(cat: &FiniteCategory, pointer: &str, name: &str) -> Result<ObjId, InputError> {
    cat.object_by_name(name)
        .ok_or_else(|| InputError::new(pointer, format!("unknown object `{name}`")))
}

/// Resolve morphism names into a validated sieve; declared sieves must be
/// right-ideal closed as written.
pub fn resolve_sieve(
    cat: &FiniteCategory,
    pointer: &str,
    obj: ObjId,
    names: &[String],
) -> Result<Sieve, InputError> {
    let mut members = std::collections::BTreeSet::new();
    for (i, name) in names.iter().enumerate() {
        let m = cat.morphism_by_name(name).ok_or_else(|| {
            InputError::new(
                format!("{pointer}/{i}"),
                format!("unknown morphism `{name}`"),
            )
        })?;
        members.insert(m);
    }
    Sieve::new(cat, obj, members).map_err(|e| InputError::new(pointer, e))
}

fn resolve_assignment(
    cat: &FiniteCategory,
    pointer: &str,
    json: &AssignmentJson,
) -> Result<SieveAssignment, InputError> {
    let mut out = SieveAssignment::new();
    for (obj_name, sieves) in json {
        let obj_pointer = format!("{pointer}/{obj_name}");
        let obj = resolve_object(cat, &obj_pointer, obj_name)?;
        let mut set = std::collections::BTreeSet::new();
        for (i, names) in sieves.iter().enumerate() {
            set.insert(resolve_sieve(
                cat,
                &format!("{obj_pointer}/{i}"),
                obj,
                names,
            )?);
        }
        out.insert(obj, set);
    }
    Ok(out)
}

/// Resolve everything below the category. The category itself must already
/// be valid; `validate` handles the lawless case before calling this.
pub fn resolve_workspace(
    cat: FiniteCategory,
    canonical_topology: Option<GrothendieckTopology>,
    doc: &DocumentJson,
) -> Result<Workspace, InputError> {
    let mut topologies = BTreeMap::new();
    if let Some(j) = canonical_topology {
        topologies.insert("canonical".to_string(), j);
    }
    for (name, json) in &doc.topologies {
        if topologies.contains_key(name) {
            return Err(InputError::new(
                format!("/topologies/{name}"),
                "name clashes with the frame's canonical topology",
            ));
        }
        let assignment = resolve_assignment(&cat, &format!("/topologies/{name}"), json)?;
        topologies.insert(name.clone(), GrothendieckTopology::new(&cat, assignment));
    }

    let mut filters = BTreeMap::new();
    for (name, json) in &doc.filters {
        let pointer = format!("/filters/{name}");
        let decl = match json {
            FilterJson::Explicit(assignment) => FilterDecl {
                role: DeclRole::Filter,
                assignment: resolve_assignment(&cat, &pointer, assignment)?,
                generate: false,
            },
            FilterJson::FromBase { base, generate } => FilterDecl {
                role: DeclRole::Base,
                assignment: resolve_assignment(&cat, &format!("{pointer}/base"), base)?,
                generate: *generate,
            },
            FilterJson::FromSubbase { subbase, generate } => FilterDecl {
                role: DeclRole::Subbase,
                assignment: resolve_assignment(&cat, &format!("{pointer}/subbase"), subbase)?,
                generate: *generate,
            },
        };
        filters.insert(name.clone(), decl);
    }

    Ok(Workspace {
        cat,
        topologies,
        filters,
        queries: doc.queries.clone(),
    })
}
