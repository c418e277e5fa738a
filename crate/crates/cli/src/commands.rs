use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::json;

use frobscheme::algiso::{
    find_algebraic_isomorphisms, four_condition_frobenius_verdict, is_induced_at, schurity_via_base_triples, AlgIsoError,
    FrobeniusVerdict, InducedVerdict, SchurityResult,
};
use frobscheme::frobenius::{build_frobenius, invariant_lattice, thm2_profile, FrobeniusSpec, ProperVerdict};
use frobscheme::generators::{andre_spread, desarguesian_frobenius_spec, desarguesian_spread, frobenius_circulant, spread_scheme, CirculantSpec};
use frobscheme::numtheory::reduce;
use frobscheme::parabolic::{
    pseudofrobenius_profile, separability_verdict, separability_verdict_spec, ParabolicError, ParabolicLattice, SeparabilityVerdict,
};
use frobscheme::scheme::{compute_tensor_with, wl_closure_with, SchemeJson};
use frobscheme::tcond::{check_t_condition_with, FourConditionCertificate};
use frobscheme::verify::{run_criterion, CRITERIA};
use frobscheme::wl::{dimwl_verdict_with, WlOutcome};
use frobscheme::{Execution, Scheme};

use crate::report::{input_error, Output, Report, Status};
use crate::{CheckCommand, CirculantEmit, ClassifyCommand, Command, FrobeniusEmit, GenCommand, IsoCommand, SpecSource};

pub fn run(command: Command, exec: Execution) -> Result<Output> {
    match command {
        Command::Gen(c) => gen(c, exec),
        Command::Check(c) => check(c, exec).map(Output::Report),
        Command::Iso(c) => iso(c, exec).map(Output::Report),
        Command::Classify(c) => classify(c, exec).map(Output::Report),
        Command::VerifyPaper { only } => verify_paper(&only, exec).map(Output::Report),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn parse_scheme_json(path: &Path) -> Result<SchemeJson> {
    serde_json::from_str(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_scheme(path: &Path) -> Result<Scheme> {
    Scheme::from_json(parse_scheme_json(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<FrobeniusSpec> {
    FrobeniusSpec::from_json_str(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn spec_from(source: &SpecSource) -> Result<FrobeniusSpec> {
    match (&source.spec, source.cyclic) {
        (Some(path), _) => load_spec(path),
        (None, Some(m)) => FrobeniusSpec::cyclic(m, &source.units).map_err(|e| input_error(e.to_string())),
        (None, None) => Err(input_error("give --spec or --cyclic with --units")),
    }
}

fn circulant(n: u64, conn: &[i64], units: &[i64]) -> Result<CirculantSpec> {
    if n < 2 {
        return Err(input_error(format!("n = {n} must be at least 2")));
    }
    if units.is_empty() {
        let conn: Vec<usize> = conn.iter().map(|&s| reduce(s, n) as usize).collect();
        Ok(CirculantSpec::new(n as usize, &conn))
    } else {
        frobenius_circulant(n, units, conn).map_err(|e| input_error(e.to_string()))
    }
}

fn write_artifact(text: String, out: Option<PathBuf>) -> Result<Output> {
    match out {
        Some(path) => {
            fs::write(&path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
            Ok(Output::Report(Report::new("gen", Status::Pass, format!("wrote {}", path.display()), json!({ "path": path }))))
        }
        None => Ok(Output::Artifact(text)),
    }
}

fn gen(command: GenCommand, exec: Execution) -> Result<Output> {
    match command {
        GenCommand::Frobenius { source, emit, out } => {
            let spec = spec_from(&source)?;
            let group = build_frobenius(&spec).map_err(|e| input_error(e.to_string()))?;
            let text = match emit {
                FrobeniusEmit::Spec => spec.to_json_string(),
                FrobeniusEmit::Scheme => Scheme::from_orbitals(&group)?.to_json_string(),
            };
            write_artifact(text, out)
        }
        GenCommand::Spread { q, andre, delta, emit, out } => {
            if emit == FrobeniusEmit::Spec {
                let spec = desarguesian_frobenius_spec(q).map_err(|e| input_error(e.to_string()))?;
                return write_artifact(spec.to_json_string(), out);
            }
            let spread = if andre {
                let s = (1..=q).find(|s| s * s >= q).filter(|s| s * s == q).ok_or_else(|| input_error(format!("q = {q} is not a square")))?;
                andre_spread(s, delta)
            } else {
                desarguesian_spread(q)
            }
            .map_err(|e| input_error(e.to_string()))?;
            write_artifact(spread_scheme(&spread)?.to_json_string(), out)
        }
        GenCommand::Circulant { n, conn, units, emit, out } => {
            let c = circulant(n, &conn, &units)?;
            let text = match emit {
                CirculantEmit::Graph => {
                    serde_json::to_string(&json!({ "n": c.n, "connection": c.connection, "complement": c.complement }))?
                }
                CirculantEmit::Edges => c.edges().iter().map(|(a, b)| format!("{a} {b}")).collect::<Vec<_>>().join("\n"),
                CirculantEmit::Closure => wl_closure_with(c.n, &c.colors(), exec).into_scheme()?.to_json_string(),
            };
            write_artifact(text, out)
        }
    }
}

fn check(command: CheckCommand, exec: Execution) -> Result<Report> {
    match command {
        CheckCommand::Axioms { scheme } => {
            let json = parse_scheme_json(&scheme)?;
            let name = "check axioms";
            // C1 and C2 are checked on load, C3 while counting the tensor
            let s = match Scheme::from_json(json) {
                Ok(s) => s,
                Err(e) => return Ok(Report::new(name, Status::Failed, e.to_string(), json!({ "violation": e.to_string() }))),
            };
            let t = match compute_tensor_with(&s, exec) {
                Ok(t) => t,
                Err(e) => return Ok(Report::new(name, Status::Failed, e.to_string(), json!({ "violation": e.to_string() }))),
            };
            let body = json!({
                "n": s.n(),
                "rank": s.rank(),
                "valencies": t.valencies(),
                "triangle_violation": t.triangle_violation(),
                "row_sum_violation": t.row_sum_violation(),
            });
            Ok(match (t.triangle_violation(), t.row_sum_violation()) {
                (Some((r, s, u)), _) => Report::new(name, Status::Failed, format!("triangle identity fails at ({r},{s},{u})"), body),
                (_, Some((r, s))) => Report::new(name, Status::Failed, format!("row sum fails at ({r},{s})"), body),
                _ => Report::new(name, Status::Pass, format!("C1-C3 hold; n = {}, rank = {}", s.n(), s.rank()), body),
            })
        }
        CheckCommand::Tcond { scheme, t } => {
            let s = load_scheme(&scheme)?;
            let report = check_t_condition_with(&s, t, exec).map_err(|e| input_error(e.to_string()))?;
            let name = "check tcond";
            Ok(match &report.witness {
                None => Report::new(name, Status::Pass, format!("{t}-condition holds"), &report),
                Some(w) => Report::new(
                    name,
                    Status::Failed,
                    format!(
                        "{t}-condition fails on relation {}: {:?} has {} completions, {:?} has {}",
                        w.relation, w.pair1, w.count1, w.pair2, w.count2
                    ),
                    &report,
                ),
            })
        }
        CheckCommand::Parabolics { scheme } => {
            let s = load_scheme(&scheme)?;
            let t = compute_tensor_with(&s, exec)?;
            let profile = pseudofrobenius_profile(&t);
            let name = "check parabolics";
            let summary = format!(
                "{} parabolics, depth {}, valency {}, indistinguishing number {}",
                profile.parabolics.len(),
                profile.depth,
                profile.valency.map_or("not constant".to_string(), |k| k.to_string()),
                profile.indistinguishing_number
            );
            let status = if profile.divide_failures.is_empty() { Status::Pass } else { Status::Failed };
            Ok(Report::new(name, status, summary, &profile))
        }
        CheckCommand::Separability { scheme, spec } => {
            let verdict = match (scheme, spec) {
                (Some(path), _) => separability_verdict(&load_scheme(&path)?),
                (None, Some(path)) => separability_verdict_spec(&load_spec(&path)?),
                (None, None) => return Err(input_error("give --scheme or --spec")),
            };
            let name = "check separability";
            match verdict {
                Ok(v @ SeparabilityVerdict::Separable { .. }) => Ok(Report::new(name, Status::Pass, "separable", &v)),
                Ok(v @ SeparabilityVerdict::Undecided { .. }) => Ok(Report::new(name, Status::Unresolved, "undecided", &v)),
                Err(e @ (ParabolicError::Primitive | ParabolicError::NotEquivalenced(_))) => {
                    Ok(Report::new(name, Status::Unresolved, e.to_string(), json!({ "reason": e.to_string() })))
                }
                Err(e) => Err(input_error(e.to_string())),
            }
        }
        CheckCommand::Schurity { scheme } => {
            let s = load_scheme(&scheme)?;
            let name = "check schurity";
            let report = check_t_condition_with(&s, 4, exec).map_err(|e| input_error(e.to_string()))?;
            let Some(cert) = FourConditionCertificate::from_report(&report) else {
                return Ok(Report::new(name, Status::Failed, "not schurian: the 4-condition fails", json!({ "four_condition": report })));
            };
            match schurity_via_base_triples(&s, None, &cert) {
                Ok(r @ SchurityResult::Schurian { .. }) => {
                    let SchurityResult::Schurian { order, .. } = &r else { unreachable!() };
                    let summary = format!("schurian; constructed group of order {order}");
                    Ok(Report::new(name, Status::Pass, summary, &r))
                }
                Ok(r) => Ok(Report::new(name, Status::Unresolved, "constructed automorphisms are not transitive on every relation", &r)),
                Err(e @ (AlgIsoError::Primitive | AlgIsoError::NotEquivalenced | AlgIsoError::ParabolicImage)) => {
                    Ok(Report::new(name, Status::Unresolved, e.to_string(), json!({ "reason": e.to_string() })))
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn iso(command: IsoCommand, exec: Execution) -> Result<Report> {
    match command {
        IsoCommand::Alg { x, y, all, limit } => {
            let (sx, sy) = (load_scheme(&x)?, load_scheme(&y)?);
            let (tx, ty) = (compute_tensor_with(&sx, exec)?, compute_tensor_with(&sy, exec)?);
            let limit = if all { usize::MAX } else { limit.max(1) };
            let maps = find_algebraic_isomorphisms(&tx, &ty, limit);
            let name = "iso alg";
            Ok(if maps.is_empty() {
                Report::new(name, Status::Failed, "no algebraic isomorphism: the search was exhausted", json!({ "isomorphisms": [] }))
            } else {
                let summary = format!("{} algebraic isomorphism(s){}", maps.len(), if maps.len() == limit { ", limit reached" } else { "" });
                Report::new(name, Status::Pass, summary, json!({ "isomorphisms": maps }))
            })
        }
        IsoCommand::Induced { x, y, limit, seed } => {
            let (sx, sy) = (load_scheme(&x)?, load_scheme(&y)?);
            let (tx, ty) = (compute_tensor_with(&sx, exec)?, compute_tensor_with(&sy, exec)?);
            let name = "iso induced";
            let lattice = ParabolicLattice::from_tensor(&tx);
            let Some(&e) = lattice.nontrivial().first() else {
                return Ok(Report::new(name, Status::Unresolved, "primitive scheme: no base triples", json!({})));
            };
            let e = &lattice.parabolics()[e];
            let limit = limit.max(1);
            let phis = find_algebraic_isomorphisms(&tx, &ty, limit);
            if phis.is_empty() {
                return Ok(Report::new(name, Status::Failed, "not isomorphic: no algebraic isomorphism", json!({ "examined": [] })));
            }
            let mu = (seed % sx.n() as u64) as usize;
            let mut examined = Vec::new();
            for phi in &phis {
                let verdict = is_induced_at(&sx, &tx, &sy, &ty, phi, e, mu)?;
                if let InducedVerdict::Induced { .. } = verdict {
                    let body = json!({ "phi": phi, "parabolic": e, "verdict": verdict });
                    return Ok(Report::new(name, Status::Pass, "isomorphic: a point bijection induces an algebraic isomorphism", body));
                }
                examined.push(json!({ "phi": phi, "verdict": verdict }));
            }
            let body = json!({ "parabolic": e, "examined": examined });
            Ok(if phis.len() == limit {
                Report::new(name, Status::Unresolved, format!("none of the first {limit} algebraic isomorphisms is induced"), body)
            } else {
                Report::new(name, Status::Failed, format!("not isomorphic: none of the {} algebraic isomorphisms is induced", phis.len()), body)
            })
        }
    }
}

fn classify(command: ClassifyCommand, exec: Execution) -> Result<Report> {
    match command {
        ClassifyCommand::Thm2 { source } => {
            let spec = spec_from(&source)?;
            let profile = thm2_profile(&spec).map_err(|e| input_error(e.to_string()))?;
            let lattice = invariant_lattice(&spec).map_err(|e| input_error(e.to_string()))?;
            let separability = match separability_verdict_spec(&spec) {
                Ok(v) => Some(v),
                Err(ParabolicError::Primitive) => None,
                Err(e) => return Err(input_error(e.to_string())),
            };
            let body = json!({ "profile": profile, "invariant_subgroup_orders": lattice.orders(), "separability": separability });
            let name = "classify thm2";
            Ok(match profile.verdict {
                ProperVerdict::ProperExcluded => {
                    Report::new(name, Status::Pass, format!("d = {}: no proper pseudofrobenius scheme", profile.d), body)
                }
                ProperVerdict::NotExcluded => {
                    Report::new(name, Status::Unresolved, format!("d = {}: proper schemes are not excluded", profile.d), body)
                }
                ProperVerdict::Primitive => Report::new(name, Status::Unresolved, "primitive: d = 1", body),
            })
        }
        ClassifyCommand::Wl { n, conn, units } => {
            let c = circulant(n, &conn, &units)?;
            let verdict = dimwl_verdict_with(&c, exec);
            let name = "classify wl";
            let (status, summary) = match &verdict.outcome {
                WlOutcome::Exactly2 { .. } => (Status::Pass, "WL dimension is exactly 2".to_string()),
                WlOutcome::ExceptionUnresolved => (Status::Unresolved, format!("exception set: {}", verdict.exception.reason)),
                WlOutcome::NotFrobeniusCertified { reason } => (Status::Unresolved, format!("no Frobenius certificate: {reason}")),
                WlOutcome::Unknown { reason } => (Status::Unresolved, format!("unknown: {reason}")),
            };
            Ok(Report::new(name, status, summary, &verdict))
        }
        ClassifyCommand::Frobenius { scheme, reference } => {
            let s = load_scheme(&scheme)?;
            let reference = reference.as_deref().map(load_spec).transpose()?;
            let name = "classify frobenius";
            let verdict = match four_condition_frobenius_verdict(&s, reference.as_ref()) {
                Ok(v) => v,
                Err(AlgIsoError::Primitive) => {
                    return Ok(Report::new(name, Status::Unresolved, "primitive scheme", json!({ "reason": "primitive" })))
                }
                Err(e) => return Err(input_error(e.to_string())),
            };
            let (status, summary) = match &verdict {
                FrobeniusVerdict::Frobenius { .. } => (Status::Pass, "Frobenius: passes the 4-condition".to_string()),
                FrobeniusVerdict::Proper { .. } => (Status::Failed, "proper pseudofrobenius: fails the 4-condition".to_string()),
                FrobeniusVerdict::NotPseudofrobenius { reason } => (Status::Failed, format!("not pseudofrobenius: {reason}")),
                FrobeniusVerdict::Unknown { four_condition } => {
                    (Status::Unresolved, format!("no reference isomorphism; 4-condition {}", if *four_condition { "holds" } else { "fails" }))
                }
            };
            Ok(Report::new(name, status, summary, &verdict))
        }
    }
}

fn verify_paper(only: &[u8], exec: Execution) -> Result<Report> {
    if let Some(id) = only.iter().find(|id| !CRITERIA.iter().any(|c| c.0 == **id)) {
        return Err(input_error(format!("no criterion {id}; ids are 1..={}", CRITERIA.len())));
    }
    let results: Vec<_> =
        CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.0)).map(|c| run_criterion(c.0, exec)).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    let status = if passed == results.len() { Status::Pass } else { Status::Failed };
    let lines = results.iter().map(|r| r.to_string()).collect();
    Ok(Report::new("verify-paper", status, format!("{passed}/{} criteria pass", results.len()), &results).with_lines(lines))
}
