//! Batch interface over the sieve/filter/convergence library: load a JSON
//! workspace document, run one query or the whole built-in audit suite, and
//! emit deterministic reports.
//!
//! Exit codes: 0 all checks pass, 1 a counterexample or violation was found,
//! 2 the input was malformed.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sievekit::convergence;
use sievekit::filters::{self, Filter, FilterBase, FilterSubbase};
use sievekit::fincat::FiniteCategory;
use sievekit::sieve::{self, Sieve};
use sievekit::topology::{self, GrothendieckTopology, ValidationLevel};
use sievekit::{corpus, MorId, ObjId, Point};

use sievekit_cli::document::{
    self, load_category, parse_document, DeclRole, DocumentJson, FilterDecl, InputError,
    LoadedCategory, QueryJson, Workspace,
};
use sievekit_cli::report::{self, AuditReport, CheckOutcome, ReportItem, ValidateReport};

#[derive(Parser)]
#[command(
    name = "sievekit",
    version,
    about = "Sieves, topologies, filters, and convergence on finite categories"
)]
struct Cli {
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Topology validation level
    #[arg(long, value_enum, default_value_t = Level::Full, global = true)]
    level: Level,
    /// Enumeration size guard: maximum sieves per object
    #[arg(long, default_value_t = 20, global = true)]
    guard: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Basic,
    Full,
}

impl From<Level> for ValidationLevel {
    fn from(level: Level) -> Self {
        match level {
            Level::Basic => ValidationLevel::Basic,
            Level::Full => ValidationLevel::Full,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the category, every topology, and every filter against their axioms
    Validate { input: PathBuf },
    /// List every sieve on an object in canonical order
    Sieves { object: String, input: PathBuf },
    /// Pull a sieve back along a morphism (the sieve argument lists generators)
    Pullback {
        along: String,
        sieve: String,
        input: PathBuf,
    },
    /// Operations on declared filters
    Filter {
        #[command(subcommand)]
        command: FilterCommand,
    },
    /// Extend a declared filter to the canonical finer ultrafilter
    Ultra { name: String, input: PathBuf },
    /// Does the named filter converge to the point?
    Converge {
        filter: String,
        point: String,
        input: PathBuf,
    },
    /// Closure of a sieve: generators as `m1,m2` or `obj:` for the empty sieve
    Closure { sieve: String, input: PathBuf },
    /// Is the point a cluster point of the named filter or base?
    Cluster {
        filter: String,
        point: String,
        input: PathBuf,
    },
    /// Run a theorem audit (id: 4.3 | 4.5 | 4.6 | prime | corollary) on an object
    Audit {
        id: String,
        object: String,
        input: PathBuf,
    },
    /// Run every query recorded in the document
    Exec { input: PathBuf },
    /// Run the built-in audit suite, plus any seed documents
    Corpus {
        /// Directory of extra workspace documents to audit
        #[arg(long)]
        seed_corpus: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FilterCommand {
    /// Generate the filter of a declared base or subbase and print it
    Gen { name: String, input: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(reports) => {
            emit(format, &reports);
            if reports.iter().all(ReportItem::ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn emit(format: Format, reports: &[ReportItem]) {
    match format {
        Format::Text => {
            for item in reports {
                print!("{}", report::render_text(item));
            }
        }
        Format::Json => {
            let wrapped = json!({ "reports": reports });
            println!(
                "{}",
                serde_json::to_string_pretty(&wrapped).expect("reports serialize")
            );
        }
    }
}

fn run(cli: Cli) -> Result<Vec<ReportItem>, InputError> {
    let level = cli.level.into();
    let guard = cli.guard;
    match cli.command {
        Command::Validate { input } => {
            let doc = read_document(&input)?;
            match load_category(&doc.category)? {
                LoadedCategory::Lawless(report) => {
                    let violations = report
                        .violations
                        .iter()
                        .map(|v| json!(v.to_string()))
                        .collect();
                    Ok(vec![ReportItem::Validate(ValidateReport {
                        ok: false,
                        category: CheckOutcome {
                            ok: false,
                            violations,
                        },
                        topologies: Default::default(),
                        filters: Default::default(),
                    })])
                }
                LoadedCategory::Valid {
                    cat,
                    canonical_topology,
                } => {
                    let ws = document::resolve_workspace(cat, canonical_topology, &doc)?;
                    Ok(vec![exec_validate(&ws, level)])
                }
            }
        }
        Command::Sieves { object, input } => {
            let ws = load_workspace(&input)?;
            Ok(vec![exec_sieves(&ws, &object, guard)?])
        }
        Command::Pullback {
            along,
            sieve,
            input,
        } => {
            let ws = load_workspace(&input)?;
            let h = morphism_by_name(&ws.cat, "/", &along)?;
            let s = sieve_from_cli_arg(&ws.cat, &sieve, Some(ws.cat.cod(h)))?;
            Ok(vec![exec_pullback(&ws, h, &s)?])
        }
        Command::Filter { command } => match command {
            FilterCommand::Gen { name, input } => {
                let ws = load_workspace(&input)?;
                Ok(vec![exec_filter_gen(&ws, &name)?])
            }
        },
        Command::Ultra { name, input } => {
            let ws = load_workspace(&input)?;
            Ok(vec![exec_ultra(&ws, &name, guard)?])
        }
        Command::Converge {
            filter,
            point,
            input,
        } => {
            let ws = load_workspace(&input)?;
            Ok(vec![exec_converge(&ws, &filter, &point, None, guard)?])
        }
        Command::Closure { sieve, input } => {
            let ws = load_workspace(&input)?;
            let s = sieve_from_cli_arg(&ws.cat, &sieve, None)?;
            Ok(vec![exec_closure(&ws, &s, None, guard)?])
        }
        Command::Cluster {
            filter,
            point,
            input,
        } => {
            let ws = load_workspace(&input)?;
            Ok(vec![exec_cluster(&ws, &filter, &point, None, guard)?])
        }
        Command::Audit { id, object, input } => {
            let ws = load_workspace(&input)?;
            Ok(vec![exec_audit(&ws, &id, &object, None, None, guard)?])
        }
        Command::Exec { input } => {
            let ws = load_workspace(&input)?;
            let mut reports = Vec::new();
            for (index, query) in ws.queries.iter().enumerate() {
                let item = exec_query(&ws, query, level, guard)
                    .map_err(|e| InputError::new(format!("/queries/{index}"), e))?;
                reports.push(item);
            }
            Ok(reports)
        }
        Command::Corpus { seed_corpus } => {
            let mut reports = vec![ReportItem::corpus(&corpus::suite::run(guard))];
            if let Some(dir) = seed_corpus {
                reports.extend(run_seed_corpus(&dir, guard)?);
            }
            Ok(reports)
        }
    }
}

fn read_document(path: &Path) -> Result<DocumentJson, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new("/", format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text)
}

fn load_workspace(path: &Path) -> Result<Workspace, InputError> {
    let doc = read_document(path)?;
    workspace_from_doc(&doc)
}

fn workspace_from_doc(doc: &DocumentJson) -> Result<Workspace, InputError> {
    match load_category(&doc.category)? {
        LoadedCategory::Lawless(report) => {
            let first = report
                .violations
                .first()
                .map(|v| v.to_string())
                .unwrap_or_else(|| "invalid category".to_string());
            Err(InputError::new(
                "/category",
                format!(
                    "category violates the axioms ({first}); run `validate` for the full report"
                ),
            ))
        }
        LoadedCategory::Valid {
            cat,
            canonical_topology,
        } => document::resolve_workspace(cat, canonical_topology, doc),
    }
}

fn morphism_by_name(cat: &FiniteCategory, pointer: &str, name: &str) -> Result<MorId, InputError> {
    cat.morphism_by_name(name)
        .ok_or_else(|| InputError::new(pointer, format!("unknown morphism `{name}`")))
}

fn object_by_name(cat: &FiniteCategory, pointer: &str, name: &str) -> Result<ObjId, InputError> {
    cat.object_by_name(name)
        .ok_or_else(|| InputError::new(pointer, format!("unknown object `{name}`")))
}

/// Command-line sieve syntax: `m1,m2` lists generators (the right-ideal
/// closure is taken), `obj:` denotes the empty sieve on `obj`, and
/// `obj:m1,m2` pins the object explicitly.
fn sieve_from_cli_arg(
    cat: &FiniteCategory,
    arg: &str,
    expected: Option<ObjId>,
) -> Result<Sieve, InputError> {
    let (explicit_obj, list) = match arg.split_once(':') {
        Some((obj, rest)) => (Some(object_by_name(cat, "/", obj.trim())?), rest),
        None => (None, arg),
    };
    let names: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let mut generators = BTreeSet::new();
    for name in &names {
        generators.insert(morphism_by_name(cat, "/", name)?);
    }
    let obj = explicit_obj
        .or(expected)
        .or_else(|| generators.iter().next().map(|&m| cat.cod(m)))
        .ok_or_else(|| InputError::new("/", "empty sieve needs an explicit object: use `obj:`"))?;
    sieve::generate_sieve(cat, obj, &generators).map_err(|e| InputError::new("/", e))
}

/// Query sieves use the same generator semantics as the command line.
fn sieve_from_query(
    cat: &FiniteCategory,
    names: &[String],
    object: Option<&str>,
    expected: Option<ObjId>,
) -> Result<Sieve, InputError> {
    let explicit = match object {
        Some(name) => Some(object_by_name(cat, "/", name)?),
        None => None,
    };
    let mut generators = BTreeSet::new();
    for name in names {
        generators.insert(morphism_by_name(cat, "/", name)?);
    }
    let obj = explicit
        .or(expected)
        .or_else(|| generators.iter().next().map(|&m| cat.cod(m)))
        .ok_or_else(|| InputError::new("/", "empty sieve needs an explicit `object`"))?;
    sieve::generate_sieve(cat, obj, &generators).map_err(|e| InputError::new("/", e))
}

fn ensure_guard(cat: &FiniteCategory, obj: ObjId, guard: usize) -> Result<Vec<Sieve>, InputError> {
    let sieves = sieve::enumerate_sieves(cat, obj);
    if sieves.len() > guard {
        Err(InputError::new(
            "/",
            format!(
                "object `{}` carries {} sieves, exceeding the guard of {guard} (raise --guard)",
                cat.object_name(obj),
                sieves.len()
            ),
        ))
    } else {
        Ok(sieves)
    }
}

/// Pick the topology a convergence command should use: an explicit name, or
/// the document's only one.
fn the_topology<'a>(
    ws: &'a Workspace,
    requested: Option<&str>,
) -> Result<(String, &'a GrothendieckTopology), InputError> {
    match requested {
        Some(name) => ws
            .topologies
            .get(name)
            .map(|j| (name.to_string(), j))
            .ok_or_else(|| InputError::new("/topologies", format!("unknown topology `{name}`"))),
        None => {
            let mut iter = ws.topologies.iter();
            match (iter.next(), iter.next()) {
                (Some((name, j)), None) => Ok((name.clone(), j)),
                (None, _) => Err(InputError::new("/topologies", "no topology declared")),
                (Some(_), Some(_)) => Err(InputError::new(
                    "/topologies",
                    "several topologies declared; name one in a query record",
                )),
            }
        }
    }
}

fn decl(ws: &Workspace, name: &str) -> Result<FilterDecl, InputError> {
    ws.filters
        .get(name)
        .cloned()
        .ok_or_else(|| InputError::new("/filters", format!("unknown filter `{name}`")))
}

/// Realize a declaration as a filter, generating from bases and subbases
/// when the declaration asks for it.
fn filter_value(ws: &Workspace, name: &str) -> Result<Filter, InputError> {
    let decl = decl(ws, name)?;
    let pointer = format!("/filters/{name}");
    match decl.role {
        DeclRole::Filter => Filter::new(&ws.cat, decl.assignment).map_err(|report| {
            let (obj, violation) = report
                .first_violation()
                .expect("invalid filter has a witness");
            InputError::new(
                pointer,
                format!(
                    "not a filter at `{}`: {}",
                    ws.cat.object_name(obj),
                    report::filter_violation_json(&ws.cat, ws.cat.object_name(obj), violation)
                ),
            )
        }),
        DeclRole::Base => {
            if !decl.generate {
                return Err(InputError::new(
                    pointer,
                    "declared as a base; set `generate: true` to use it as a filter",
                ));
            }
            let base = base_from_decl(ws, name, &decl)?;
            Ok(filters::filter_from_base(&ws.cat, &base))
        }
        DeclRole::Subbase => {
            if !decl.generate {
                return Err(InputError::new(
                    pointer,
                    "declared as a subbase; set `generate: true` to use it as a filter",
                ));
            }
            let subbase = FilterSubbase::new(&ws.cat, decl.assignment).map_err(|report| {
                let (obj, violation) = report.first_violation().expect("witness");
                InputError::new(
                    format!("/filters/{name}/subbase"),
                    format!(
                        "not a subbase: {}",
                        report::subbase_violation_json(&ws.cat, ws.cat.object_name(obj), violation)
                    ),
                )
            })?;
            Ok(filters::filter_from_subbase(&ws.cat, &subbase))
        }
    }
}

fn base_from_decl(ws: &Workspace, name: &str, decl: &FilterDecl) -> Result<FilterBase, InputError> {
    FilterBase::new(&ws.cat, decl.assignment.clone()).map_err(|report| {
        let (obj, violation) = report
            .first_violation()
            .expect("invalid base has a witness");
        InputError::new(
            format!("/filters/{name}/base"),
            format!(
                "not a base: {}",
                report::base_violation_json(&ws.cat, ws.cat.object_name(obj), violation)
            ),
        )
    })
}

fn point_value(ws: &Workspace, name: &str) -> Result<Point, InputError> {
    let m = morphism_by_name(&ws.cat, "/", name)?;
    let target = ws.cat.cod(m);
    let points = ws.cat.points(target).map_err(|e| InputError::new("/", e))?;
    points
        .into_iter()
        .find(|p| p.carrier() == m)
        .ok_or_else(|| {
            InputError::new(
                "/",
                format!("`{name}` is not a point (its domain is not the terminal object)"),
            )
        })
}

fn exec_validate(ws: &Workspace, level: ValidationLevel) -> ReportItem {
    let cat = &ws.cat;
    let mut topologies = std::collections::BTreeMap::new();
    for (name, j) in &ws.topologies {
        let report = topology::validate_topology(cat, j, level);
        topologies.insert(
            name.clone(),
            CheckOutcome {
                ok: report.is_valid(),
                violations: report
                    .violations
                    .iter()
                    .map(|v| report::topology_violation_json(cat, v))
                    .collect(),
            },
        );
    }

    let mut filter_checks = std::collections::BTreeMap::new();
    for (name, decl) in &ws.filters {
        let violations: Vec<serde_json::Value> = match decl.role {
            DeclRole::Filter => filters::is_filter(cat, &decl.assignment)
                .per_object
                .iter()
                .filter_map(|(obj, v)| {
                    v.as_ref()
                        .map(|v| report::filter_violation_json(cat, cat.object_name(*obj), v))
                })
                .collect(),
            DeclRole::Base => filters::is_base(cat, &decl.assignment)
                .per_object
                .iter()
                .filter_map(|(obj, v)| {
                    v.as_ref()
                        .map(|v| report::base_violation_json(cat, cat.object_name(*obj), v))
                })
                .collect(),
            DeclRole::Subbase => filters::is_subbase(cat, &decl.assignment)
                .per_object
                .iter()
                .filter_map(|(obj, v)| {
                    v.as_ref()
                        .map(|v| report::subbase_violation_json(cat, cat.object_name(*obj), v))
                })
                .collect(),
        };
        filter_checks.insert(
            name.clone(),
            CheckOutcome {
                ok: violations.is_empty(),
                violations,
            },
        );
    }

    let ok = topologies.values().all(|c| c.ok) && filter_checks.values().all(|c| c.ok);
    ReportItem::Validate(ValidateReport {
        ok,
        category: CheckOutcome {
            ok: true,
            violations: Vec::new(),
        },
        topologies,
        filters: filter_checks,
    })
}

fn exec_sieves(ws: &Workspace, object: &str, guard: usize) -> Result<ReportItem, InputError> {
    let obj = object_by_name(&ws.cat, "/", object)?;
    let sieves = ensure_guard(&ws.cat, obj, guard)?;
    Ok(ReportItem::Sieves {
        object: object.to_string(),
        count: sieves.len(),
        sieves: sieves
            .iter()
            .map(|s| report::sieve_names(&ws.cat, s))
            .collect(),
    })
}

fn exec_pullback(ws: &Workspace, h: MorId, s: &Sieve) -> Result<ReportItem, InputError> {
    let result = sieve::pullback_sieve(&ws.cat, h, s).map_err(|e| InputError::new("/", e))?;
    Ok(ReportItem::Pullback {
        along: ws.cat.morphism_name(h).to_string(),
        sieve: report::sieve_names(&ws.cat, s),
        result: report::sieve_names(&ws.cat, &result),
    })
}

fn exec_filter_gen(ws: &Workspace, name: &str) -> Result<ReportItem, InputError> {
    let declared = decl(ws, name)?;
    let filter = match declared.role {
        DeclRole::Filter => {
            // Printing an explicit filter just validates it first.
            filter_value(ws, name)?
        }
        DeclRole::Base => {
            let base = base_from_decl(ws, name, &declared)?;
            filters::filter_from_base(&ws.cat, &base)
        }
        DeclRole::Subbase => {
            let subbase =
                FilterSubbase::new(&ws.cat, declared.assignment.clone()).map_err(|report| {
                    let (obj, violation) = report.first_violation().expect("witness");
                    InputError::new(
                        format!("/filters/{name}/subbase"),
                        format!(
                            "not a subbase: {}",
                            report::subbase_violation_json(
                                &ws.cat,
                                ws.cat.object_name(obj),
                                violation
                            )
                        ),
                    )
                })?;
            filters::filter_from_subbase(&ws.cat, &subbase)
        }
    };
    Ok(ReportItem::FilterGen {
        name: name.to_string(),
        role: declared.role.as_str().to_string(),
        filter: report::filter_image(&ws.cat, filter.assignment()),
    })
}

fn exec_ultra(ws: &Workspace, name: &str, guard: usize) -> Result<ReportItem, InputError> {
    let filter = filter_value(ws, name)?;
    let ultra = filters::extend_to_ultrafilter(&ws.cat, &filter, guard)
        .map_err(|e| InputError::new("/", e))?;
    Ok(ReportItem::Ultra {
        name: name.to_string(),
        filter: report::filter_image(&ws.cat, ultra.assignment()),
    })
}

fn exec_converge(
    ws: &Workspace,
    filter_name: &str,
    point_name: &str,
    topology: Option<&str>,
    guard: usize,
) -> Result<ReportItem, InputError> {
    let (topology_name, j) = the_topology(ws, topology)?;
    let filter = filter_value(ws, filter_name)?;
    let point = point_value(ws, point_name)?;
    ensure_guard(&ws.cat, point.target(), guard)?;
    Ok(ReportItem::Converge {
        filter: filter_name.to_string(),
        point: point_name.to_string(),
        topology: topology_name,
        converges: convergence::converges(&ws.cat, j, &filter, &point),
    })
}

fn exec_closure(
    ws: &Workspace,
    s: &Sieve,
    topology: Option<&str>,
    guard: usize,
) -> Result<ReportItem, InputError> {
    let (topology_name, j) = the_topology(ws, topology)?;
    ensure_guard(&ws.cat, s.codomain(), guard)?;
    let points = convergence::closure(&ws.cat, j, s);
    Ok(ReportItem::Closure {
        topology: topology_name,
        object: ws.cat.object_name(s.codomain()).to_string(),
        sieve: report::sieve_names(&ws.cat, s),
        points: points
            .iter()
            .map(|p| ws.cat.morphism_name(p.carrier()).to_string())
            .collect(),
    })
}

fn exec_cluster(
    ws: &Workspace,
    filter_name: &str,
    point_name: &str,
    topology: Option<&str>,
    guard: usize,
) -> Result<ReportItem, InputError> {
    let (topology_name, j) = the_topology(ws, topology)?;
    let point = point_value(ws, point_name)?;
    ensure_guard(&ws.cat, point.target(), guard)?;
    let declared = decl(ws, filter_name)?;
    let cluster = match declared.role {
        DeclRole::Base if !declared.generate => {
            let base = base_from_decl(ws, filter_name, &declared)?;
            convergence::is_cluster_point_of_base(&ws.cat, j, &base, &point)
        }
        _ => {
            let filter = filter_value(ws, filter_name)?;
            convergence::is_cluster_point(&ws.cat, j, &filter, &point)
        }
    };
    Ok(ReportItem::Cluster {
        filter: filter_name.to_string(),
        point: point_name.to_string(),
        topology: topology_name,
        cluster,
    })
}

/// Ultrafilters at one object: enumerated object filters whose deterministic
/// extension leaves them unchanged there.
fn object_ultrafilters(
    cat: &FiniteCategory,
    obj: ObjId,
    guard: usize,
) -> Result<Vec<Filter>, InputError> {
    let enumerated =
        filters::enumerate_object_filters(cat, obj, guard).map_err(|e| InputError::new("/", e))?;
    let mut out = Vec::new();
    for set in enumerated {
        let mut assignment = filters::SieveAssignment::new();
        assignment.insert(obj, set.clone());
        let lifted = Filter::new(cat, assignment).expect("object filters lift");
        let ultra = filters::extend_to_ultrafilter(cat, &lifted, guard)
            .map_err(|e| InputError::new("/", e))?;
        if *ultra.at(obj) == set {
            out.push(ultra);
        }
    }
    Ok(out)
}

fn exec_audit(
    ws: &Workspace,
    id: &str,
    object: &str,
    topology: Option<&str>,
    n: Option<usize>,
    guard: usize,
) -> Result<ReportItem, InputError> {
    let cat = &ws.cat;
    let obj = object_by_name(cat, "/", object)?;
    let report = match id {
        "4.3" => {
            let (topology_name, j) = the_topology(ws, topology)?;
            ensure_guard(cat, obj, guard)?;
            let points = cat.points(obj).unwrap_or_default();
            let mut counterexamples = Vec::new();
            for p in &points {
                if let Some(violation) = convergence::neighborhood_filter_check(cat, j, p) {
                    counterexamples.push(json!({
                        "point": cat.morphism_name(p.carrier()),
                        "violation": report::filter_violation_json(cat, object, &violation),
                    }));
                }
            }
            AuditReport {
                id: id.to_string(),
                topology: topology_name,
                object: object.to_string(),
                ok: counterexamples.is_empty(),
                cases: points.len(),
                counterexamples,
            }
        }
        "4.5" => {
            let (topology_name, j) = the_topology(ws, topology)?;
            let audit = convergence::audit_theorem_cluster(cat, j, obj, guard)
                .map_err(|e| InputError::new("/", e))?;
            AuditReport {
                id: id.to_string(),
                topology: topology_name,
                object: object.to_string(),
                ok: audit.holds(),
                cases: audit.cases,
                counterexamples: audit
                    .counterexamples
                    .iter()
                    .map(|w| report::cluster_witness_json(cat, w))
                    .collect(),
            }
        }
        "4.6" => {
            let (topology_name, j) = the_topology(ws, topology)?;
            let audit = convergence::audit_theorem_closure(cat, j, obj, guard)
                .map_err(|e| InputError::new("/", e))?;
            AuditReport {
                id: id.to_string(),
                topology: topology_name,
                object: object.to_string(),
                ok: audit.holds(),
                cases: audit.cases,
                counterexamples: audit
                    .counterexamples
                    .iter()
                    .map(|w| report::closure_witness_json(cat, w))
                    .collect(),
            }
        }
        "prime" | "corollary" => {
            let arity = if id == "prime" { 2 } else { n.unwrap_or(3) };
            let ultrafilters = object_ultrafilters(cat, obj, guard)?;
            let cases = ultrafilters.len();
            let mut counterexamples = Vec::new();
            for ultra in &ultrafilters {
                let verdict = if id == "prime" {
                    filters::check_prime(cat, ultra, obj)
                } else {
                    filters::check_prime_finite_union(cat, ultra, obj, arity)
                };
                if let filters::PrimeVerdict::Counterexample { members, union } = verdict {
                    counterexamples.push(json!({
                        "ultrafilter": report::filter_image(cat, ultra.assignment())
                            .get(object).cloned().unwrap_or_default(),
                        "members": members.iter().map(|s| report::sieve_names(cat, s)).collect::<Vec<_>>(),
                        "union": report::sieve_names(cat, &union),
                    }));
                }
            }
            AuditReport {
                id: id.to_string(),
                topology: String::new(),
                object: object.to_string(),
                ok: counterexamples.is_empty(),
                cases,
                counterexamples,
            }
        }
        other => {
            return Err(InputError::new(
                "/",
                format!("unknown audit `{other}` (expected 4.3, 4.5, 4.6, prime, or corollary)"),
            ))
        }
    };
    Ok(ReportItem::Audit(report))
}

fn exec_query(
    ws: &Workspace,
    query: &QueryJson,
    level: ValidationLevel,
    guard: usize,
) -> Result<ReportItem, InputError> {
    match query {
        QueryJson::Validate => Ok(exec_validate(ws, level)),
        QueryJson::Sieves { object } => exec_sieves(ws, object, guard),
        QueryJson::Pullback { along, sieve } => {
            let h = morphism_by_name(&ws.cat, "/along", along)?;
            let s = sieve_from_query(&ws.cat, sieve, None, Some(ws.cat.cod(h)))?;
            exec_pullback(ws, h, &s)
        }
        QueryJson::FilterGen { name } => exec_filter_gen(ws, name),
        QueryJson::Ultra { name } => exec_ultra(ws, name, guard),
        QueryJson::Converge {
            filter,
            point,
            topology,
        } => exec_converge(ws, filter, point, topology.as_deref(), guard),
        QueryJson::Closure {
            sieve,
            object,
            topology,
        } => {
            let s = sieve_from_query(&ws.cat, sieve, object.as_deref(), None)?;
            exec_closure(ws, &s, topology.as_deref(), guard)
        }
        QueryJson::Cluster {
            filter,
            point,
            topology,
        } => exec_cluster(ws, filter, point, topology.as_deref(), guard),
        QueryJson::Audit {
            id,
            object,
            topology,
            n,
        } => exec_audit(ws, id, object, topology.as_deref(), *n, guard),
    }
}

/// Audit every seed document: validate it, then run every audit on every
/// (topology, object) pair it declares.
fn run_seed_corpus(dir: &Path, guard: usize) -> Result<Vec<ReportItem>, InputError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| InputError::new("/", format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();

    let mut out = Vec::new();
    for path in paths {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().to_string())
            .unwrap_or_else(|| path.display().to_string());
        let located = |e: InputError| InputError::new(format!("{name}{}", e.pointer), e.message);
        let doc = read_document(&path).map_err(located)?;
        let ws = workspace_from_doc(&doc).map_err(located)?;

        let mut reports = vec![exec_validate(&ws, ValidationLevel::Full)];
        for topology_name in ws.topologies.keys() {
            for obj in ws.cat.objects() {
                let object = ws.cat.object_name(obj).to_string();
                for id in ["4.3", "4.5", "4.6"] {
                    reports.push(
                        exec_audit(&ws, id, &object, Some(topology_name), None, guard)
                            .map_err(located)?,
                    );
                }
            }
        }
        for obj in ws.cat.objects() {
            let object = ws.cat.object_name(obj).to_string();
            for id in ["prime", "corollary"] {
                reports.push(exec_audit(&ws, id, &object, None, None, guard).map_err(located)?);
            }
        }

        let ok = reports.iter().all(ReportItem::ok);
        out.push(ReportItem::Document { name, ok, reports });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_sieve_argument_forms() {
        let cat = corpus::pt();
        let c = cat.object_by_name("C").unwrap();

        let from_generators = sieve_from_cli_arg(&cat, "e0", None).unwrap();
        assert_eq!(from_generators.member_names(&cat), vec!["e0", "p0"]);

        let empty = sieve_from_cli_arg(&cat, "C:", None).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.codomain(), c);

        let pinned = sieve_from_cli_arg(&cat, "C:p0,p1", None).unwrap();
        assert_eq!(pinned.member_names(&cat), vec!["e0", "e1", "p0", "p1"]);

        assert!(sieve_from_cli_arg(&cat, "", None).is_err());
        assert!(sieve_from_cli_arg(&cat, "ghost", None).is_err());
    }
}
