//! Report items emitted by every command, in both JSON and text forms.
//!
//! Witnesses reuse the document vocabulary (sieves are arrays of morphism
//! names, points are morphism names), so a counterexample can be pasted back
//! into a document as a query. All collections are ordered; two runs over the
//! same input render byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use sievekit::convergence::{ClosureWitness, ClusterWitness};
use sievekit::corpus::suite::SuiteReport;
use sievekit::filters::{BaseViolation, FilterViolation, SubbaseViolation};
use sievekit::fincat::FiniteCategory;
use sievekit::sieve::Sieve;
use sievekit::topology::TopologyViolation;

pub fn sieve_names(cat: &FiniteCategory, s: &Sieve) -> Vec<String> {
    s.member_names(cat).into_iter().map(String::from).collect()
}

pub type FilterImage = BTreeMap<String, Vec<Vec<String>>>;

pub fn filter_image(
    cat: &FiniteCategory,
    assignment: &sievekit::filters::SieveAssignment,
) -> FilterImage {
    assignment
        .iter()
        .map(|(obj, sieves)| {
            (
                cat.object_name(*obj).to_string(),
                sieves.iter().map(|s| sieve_names(cat, s)).collect(),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub ok: bool,
    pub violations: Vec<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub ok: bool,
    pub category: CheckOutcome,
    pub topologies: BTreeMap<String, CheckOutcome>,
    pub filters: BTreeMap<String, CheckOutcome>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub id: String,
    pub topology: String,
    pub object: String,
    pub ok: bool,
    pub cases: usize,
    pub counterexamples: Vec<Value>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportItem {
    Validate(ValidateReport),
    Sieves {
        object: String,
        count: usize,
        sieves: Vec<Vec<String>>,
    },
    Pullback {
        along: String,
        sieve: Vec<String>,
        result: Vec<String>,
    },
    FilterGen {
        name: String,
        role: String,
        filter: FilterImage,
    },
    Ultra {
        name: String,
        filter: FilterImage,
    },
    Converge {
        filter: String,
        point: String,
        topology: String,
        converges: bool,
    },
    Closure {
        topology: String,
        object: String,
        sieve: Vec<String>,
        points: Vec<String>,
    },
    Cluster {
        filter: String,
        point: String,
        topology: String,
        cluster: bool,
    },
    Audit(AuditReport),
    Corpus {
        ok: bool,
        entries: Vec<SuiteEntryJson>,
    },
    Document {
        name: String,
        ok: bool,
        reports: Vec<ReportItem>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteEntryJson {
    pub id: String,
    pub ok: bool,
    pub detail: String,
}

impl ReportItem {
    /// Pure answers are always ok; checks carry their verdict.
    pub fn ok(&self) -> bool {
        match self {
            ReportItem::Validate(v) => v.ok,
            ReportItem::Audit(a) => a.ok,
            ReportItem::Corpus { ok, .. } => *ok,
            ReportItem::Document { ok, .. } => *ok,
            _ => true,
        }
    }

    pub fn corpus(report: &SuiteReport) -> Self {
        ReportItem::Corpus {
            ok: report.all_ok(),
            entries: report
                .entries
                .iter()
                .map(|e| SuiteEntryJson {
                    id: e.id.clone(),
                    ok: e.ok,
                    detail: e.detail.clone(),
                })
                .collect(),
        }
    }
}

pub fn topology_violation_json(cat: &FiniteCategory, v: &TopologyViolation) -> Value {
    match v {
        TopologyViolation::MissingMaximalSieve { object } => json!({
            "axiom": "maximality",
            "object": cat.object_name(*object),
        }),
        TopologyViolation::NotUpwardClosed {
            object,
            member,
            superset,
        } => json!({
            "axiom": "upward-closure",
            "object": cat.object_name(*object),
            "member": sieve_names(cat, member),
            "superset": sieve_names(cat, superset),
        }),
        TopologyViolation::IntersectionEscapes {
            object,
            left,
            right,
        } => json!({
            "axiom": "intersection",
            "object": cat.object_name(*object),
            "left": sieve_names(cat, left),
            "right": sieve_names(cat, right),
        }),
        TopologyViolation::UnstablePullback {
            object,
            cover,
            along,
            pullback,
        } => json!({
            "axiom": "stability",
            "object": cat.object_name(*object),
            "cover": sieve_names(cat, cover),
            "along": cat.morphism_name(*along),
            "pullback": sieve_names(cat, pullback),
        }),
        TopologyViolation::TransitivityFailure {
            object,
            cover,
            candidate,
        } => json!({
            "axiom": "transitivity",
            "object": cat.object_name(*object),
            "cover": sieve_names(cat, cover),
            "candidate": sieve_names(cat, candidate),
        }),
    }
}

pub fn filter_violation_json(cat: &FiniteCategory, object: &str, v: &FilterViolation) -> Value {
    match v {
        FilterViolation::NotUpwardClosed { member, superset } => json!({
            "axiom": "F1",
            "object": object,
            "member": sieve_names(cat, member),
            "superset": sieve_names(cat, superset),
        }),
        FilterViolation::MissingMaximalSieve => json!({
            "axiom": "F2",
            "object": object,
            "missing": "maximal sieve",
        }),
        FilterViolation::IntersectionEscapes {
            left,
            right,
            intersection,
        } => json!({
            "axiom": "F2",
            "object": object,
            "left": sieve_names(cat, left),
            "right": sieve_names(cat, right),
            "intersection": sieve_names(cat, intersection),
        }),
        FilterViolation::ContainsEmptySieve => json!({
            "axiom": "F3",
            "object": object,
        }),
    }
}

pub fn base_violation_json(cat: &FiniteCategory, object: &str, v: &BaseViolation) -> Value {
    match v {
        BaseViolation::IntersectionNotRefined { left, right } => json!({
            "axiom": "B1",
            "object": object,
            "left": sieve_names(cat, left),
            "right": sieve_names(cat, right),
        }),
        BaseViolation::Empty => json!({
            "axiom": "B2",
            "object": object,
            "missing": "any member",
        }),
        BaseViolation::ContainsEmptySieve => json!({
            "axiom": "B2",
            "object": object,
        }),
    }
}

pub fn subbase_violation_json(cat: &FiniteCategory, object: &str, v: &SubbaseViolation) -> Value {
    match v {
        SubbaseViolation::EmptyIntersection { witnesses } => json!({
            "axiom": "finite-intersection",
            "object": object,
            "witnesses": witnesses.iter().map(|s| sieve_names(cat, s)).collect::<Vec<_>>(),
        }),
    }
}

pub fn cluster_witness_json(cat: &FiniteCategory, w: &ClusterWitness) -> Value {
    json!({
        "filter": w.filter_at_object.iter().map(|s| sieve_names(cat, s)).collect::<Vec<_>>(),
        "point": cat.morphism_name(w.point.carrier()),
        "is-cluster": w.is_cluster,
        "has-finer-convergent": w.has_finer_convergent,
    })
}

pub fn closure_witness_json(cat: &FiniteCategory, w: &ClosureWitness) -> Value {
    json!({
        "sieve": sieve_names(cat, &w.sieve),
        "point": cat.morphism_name(w.point.carrier()),
        "in-closure": w.in_closure,
        "has-convergent-containing": w.has_convergent_containing,
    })
}

fn bracketed(names: &[String]) -> String {
    format!("[{}]", names.join(", "))
}

fn render_filter_image(out: &mut String, indent: &str, image: &FilterImage) {
    for (object, sieves) in image {
        let rendered: Vec<String> = sieves.iter().map(|s| bracketed(s)).collect();
        let _ = writeln!(out, "{indent}{object}: {{{}}}", rendered.join(", "));
    }
}

fn render_check(out: &mut String, label: &str, check: &CheckOutcome) {
    if check.ok {
        let _ = writeln!(out, "{label}: ok");
    } else {
        let _ = writeln!(out, "{label}: INVALID");
        for v in &check.violations {
            let _ = writeln!(out, "    {v}");
        }
    }
}

/// Deterministic line-oriented rendering of one report item.
pub fn render_text(item: &ReportItem) -> String {
    let mut out = String::new();
    match item {
        ReportItem::Validate(v) => {
            render_check(&mut out, "validate category", &v.category);
            for (name, check) in &v.topologies {
                render_check(&mut out, &format!("validate topology `{name}`"), check);
            }
            for (name, check) in &v.filters {
                render_check(&mut out, &format!("validate filter `{name}`"), check);
            }
        }
        ReportItem::Sieves {
            object,
            count,
            sieves,
        } => {
            let _ = writeln!(out, "sieves on {object}: {count}");
            for s in sieves {
                let _ = writeln!(out, "  {}", bracketed(s));
            }
        }
        ReportItem::Pullback {
            along,
            sieve,
            result,
        } => {
            let _ = writeln!(
                out,
                "pullback of {} along {along}: {}",
                bracketed(sieve),
                bracketed(result)
            );
        }
        ReportItem::FilterGen { name, role, filter } => {
            let _ = writeln!(out, "filter generated from {role} `{name}`:");
            render_filter_image(&mut out, "  ", filter);
        }
        ReportItem::Ultra { name, filter } => {
            let _ = writeln!(out, "ultrafilter extending `{name}`:");
            render_filter_image(&mut out, "  ", filter);
        }
        ReportItem::Converge {
            filter,
            point,
            topology,
            converges,
        } => {
            let verdict = if *converges {
                "converges"
            } else {
                "does not converge"
            };
            let _ = writeln!(
                out,
                "filter `{filter}` {verdict} to {point} under `{topology}`"
            );
        }
        ReportItem::Closure {
            topology,
            object,
            sieve,
            points,
        } => {
            let _ = writeln!(
                out,
                "closure of {} on {object} under `{topology}`: {{{}}}",
                bracketed(sieve),
                points.join(", ")
            );
        }
        ReportItem::Cluster {
            filter,
            point,
            topology,
            cluster,
        } => {
            let verdict = if *cluster { "is" } else { "is not" };
            let _ = writeln!(
                out,
                "{point} {verdict} a cluster point of `{filter}` under `{topology}`"
            );
        }
        ReportItem::Audit(a) => {
            let verdict = if a.ok { "pass" } else { "FAIL" };
            let scope = if a.topology.is_empty() {
                String::new()
            } else {
                format!(" under `{}`", a.topology)
            };
            let _ = writeln!(
                out,
                "audit {} on {}{scope}: {verdict} (cases: {})",
                a.id, a.object, a.cases
            );
            for c in &a.counterexamples {
                let _ = writeln!(out, "  counterexample: {c}");
            }
        }
        ReportItem::Corpus { ok, entries } => {
            for e in entries {
                let verdict = if e.ok { "ok  " } else { "FAIL" };
                let _ = writeln!(out, "{verdict} {} — {}", e.id, e.detail);
            }
            let _ = writeln!(
                out,
                "corpus: {}",
                if *ok { "all checks pass" } else { "FAILURES" }
            );
        }
        ReportItem::Document { name, ok, reports } => {
            let _ = writeln!(out, "document {name}: {}", if *ok { "ok" } else { "FAIL" });
            for r in reports {
                for line in render_text(r).lines() {
                    let _ = writeln!(out, "  {line}");
                }
            }
        }
    }
    out
}
