use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::Instant;

use ceinv_core::abelian::{hom_group, presentation_quotient, GroupElement, RelationMatrix};
use ceinv_core::geometry::{
    bifurcation_diagram, classify_diagram, int, lemma1_interior_check, oracle_disagreements, qq_relation_check,
    random_lemma1_input, random_quintuple, rat, PlaneQuintuple, QuintupleJson, RationalVec,
};
use ceinv_core::relations::{
    check_membership, crosscheck_gu as run_crosscheck, delta1_tables as make_tables, expected_universal_group,
    export_relations, hand_elimination, instance_spans_equal, raw_relation_instances, raw_relations_without,
    section_e_table, simplified_relation_instances, universal_group as compute_universal,
    ContextSelection, RelationTag,
};
use ceinv_core::seed::trial_seed;
use ceinv_core::{DegreeWindow, GroupSpec};
use serde::Serialize;
use serde_json::json;

use crate::report::{usage, CliError, Report};
use crate::TrialArgs;

/// Failures listed individually in trial reports; counts stay exact.
const MAX_LISTED: usize = 20;

fn window(m: i64) -> Result<DegreeWindow, CliError> {
    DegreeWindow::new(m).map_err(usage)
}

fn torsion_json(g: &GroupSpec) -> serde_json::Value {
    serde_json::to_value(g).expect("groups serialize")["torsion"].clone()
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn universal_group(m: i64, relations: Option<&Path>, export: Option<&Path>) -> Result<Report, CliError> {
    let started = Instant::now();
    if let Some(path) = relations {
        let rm = RelationMatrix::from_json(&read(path)?).map_err(usage)?;
        let matrix = rm.to_matrix().map_err(usage)?;
        let q = presentation_quotient(rm.cols.len(), &matrix);
        let images: BTreeMap<&str, GroupElement> =
            rm.cols.iter().enumerate().map(|(i, c)| (c.as_str(), q.generator_image(i))).collect();
        let results = json!({
            "generators": rm.cols.len(),
            "relations": rm.rows.len(),
            "free_rank": q.group().free_rank(),
            "torsion": torsion_json(q.group()),
            "group": q.group().to_string(),
            "images": images,
        });
        let config = json!({ "relations": path.display().to_string() });
        return Ok(Report::new("universal-group", config, results, true, started));
    }

    let w = window(m)?;
    if let Some(path) = export {
        let text = export_relations(&raw_relation_instances(&w), &w).to_json();
        std::fs::write(path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let ug = compute_universal(&w);
    let hand = hand_elimination(&w);
    let expected = expected_universal_group(&w);
    let named: BTreeMap<String, GroupElement> =
        ug.named_generators().into_iter().map(|(s, e)| (s.to_string(), e)).collect();
    let named_basis = ug.is_named_basis();
    let verdict = ug.group == expected && hand.group.as_ref() == Some(&ug.group) && named_basis;
    let results = json!({
        "window": m,
        "symbols": ug.symbols.len(),
        "relations": raw_relation_instances(&w).len(),
        "free_rank": ug.group.free_rank(),
        "torsion": torsion_json(&ug.group),
        "group": ug.group.to_string(),
        "expected": expected.to_string(),
        "named_generators": named,
        "named_generators_form_basis": named_basis,
        "hand_elimination": {
            "group": hand.group.as_ref().map(|g| g.to_string()),
            "eliminated": hand.eliminated,
            "survivors": hand.survivors.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "residual": hand.residual.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "agrees": hand.group.as_ref() == Some(&ug.group),
        },
    });
    let config = json!({ "window": m, "export_relations": export.map(|p| p.display().to_string()) });
    Ok(Report::new("universal-group", config, results, verdict, started))
}

pub fn spans_equal(m: i64, without: Option<&str>) -> Result<Report, CliError> {
    let started = Instant::now();
    let w = window(m)?;
    let dropped = without.map(|s| s.parse::<RelationTag>().map_err(usage)).transpose()?;
    let raw = match dropped {
        Some(tag) => raw_relations_without(&w, tag),
        None => raw_relation_instances(&w),
    };
    let simplified = simplified_relation_instances(&w);
    let equal = instance_spans_equal(&raw, &simplified, &w);
    let control = instance_spans_equal(&raw_relations_without(&w, RelationTag::QQ), &simplified, &w);
    let verdict = match dropped {
        Some(_) => equal,
        None => equal && !control,
    };
    let results = json!({
        "window": m,
        "raw_rows": raw.len(),
        "simplified_rows": simplified.len(),
        "dropped_family": dropped.map(|t| t.to_string()),
        "spans_equal": equal,
        "negative_control": { "dropped_family": "QQ", "spans_equal": control },
    });
    Ok(Report::new("spans-equal", json!({ "window": m, "without": without }), results, verdict, started))
}

pub fn crosscheck_gu(m: i64) -> Result<Report, CliError> {
    let started = Instant::now();
    let w = window(m)?;
    let report = run_crosscheck(&w);
    let verdict = report.passed();
    let results = json!({
        "window": m,
        "symbols_checked": report.symbols_checked,
        "relations_checked": report.relations_checked,
        "violation_count": report.violation_count(),
        "symbol_violations": report.symbol_violations,
        "relation_violations": report.relation_violations,
    });
    Ok(Report::new("crosscheck-gu", json!({ "window": m }), results, verdict, started))
}

pub fn delta1_tables(m: i64, group: &str, summary_only: bool) -> Result<Report, CliError> {
    let started = Instant::now();
    let w = window(m)?;
    let target: GroupSpec = group.parse().map_err(usage)?;
    if !target.is_finite() {
        return Err(usage(format!("target group {target} is infinite; tables cannot be enumerated")));
    }
    let tables = make_tables(&target, &w).map_err(usage)?;
    let ug = compute_universal(&w);
    let hom = hom_group(&ug.group, &target);
    let expected = hom.order().map(|o| o.to_string());
    let distinct: BTreeSet<&BTreeMap<_, _>> = tables.iter().map(|t| &t.values).collect();
    let failing: Vec<usize> = tables
        .iter()
        .enumerate()
        .filter(|(_, t)| !check_membership(t, ContextSelection::Full).passed())
        .map(|(i, _)| i)
        .collect();
    let verdict = Some(tables.len().to_string()) == expected && distinct.len() == tables.len() && failing.is_empty();
    let symbols: Vec<String> = w.symbols().iter().map(|s| s.to_string()).collect();
    let results = json!({
        "window": m,
        "group": target.to_string(),
        "universal_group": ug.group.to_string(),
        "hom_group": hom.to_string(),
        "expected_count": expected,
        "table_count": tables.len(),
        "distinct_count": distinct.len(),
        "non_member_count": failing.len(),
        "non_members": failing.iter().take(MAX_LISTED).collect::<Vec<_>>(),
        "symbols": symbols,
        "tables": if summary_only { serde_json::Value::Null } else { serde_json::to_value(&tables).expect("tables serialize") },
    });
    let config = json!({ "window": m, "group": group, "summary_only": summary_only });
    Ok(Report::new("delta1-tables", config, results, verdict, started))
}

fn check_trial_args(t: &TrialArgs) -> Result<(), CliError> {
    if t.bound < 1 {
        return Err(usage(format!("--bound must be at least 1, got {}", t.bound)));
    }
    Ok(())
}

fn trial_config(t: &TrialArgs) -> serde_json::Value {
    json!({ "trials": t.trials, "seed": t.seed, "bound": t.bound })
}

#[derive(Serialize)]
struct QqFailure {
    trial: u64,
    seed: u64,
    quintuple: Option<QuintupleJson>,
    problems: Vec<String>,
}

/// Everything checked for one quintuple, as a list of problems.
fn qq_problems(q: &PlaneQuintuple) -> (Vec<String>, Option<(String, String)>) {
    let mut problems = Vec::new();
    let d = match bifurcation_diagram(q) {
        Ok(d) => d,
        Err(e) => return (vec![e.to_string()], None),
    };
    problems.extend(d.structural_violations());
    match oracle_disagreements(q) {
        Ok(v) => problems.extend(
            v.into_iter().map(|(k, half, p, o)| format!("line {k} half {half}: sign count {p}, simplex count {o}")),
        ),
        Err(e) => problems.push(format!("oracle: {e}")),
    }
    let check = qq_relation_check(&d);
    if !check.verdict {
        problems.push(format!("crossing sum {} reduces to {}", check.sum, check.reduced));
    }
    (problems, Some((check.sum.to_string(), check.reduced.to_string())))
}

pub fn qq_verify(t: &TrialArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    check_trial_args(t)?;
    let mut failures = Vec::new();
    let mut failed = 0u64;
    let mut raw_sums: BTreeMap<String, u64> = BTreeMap::new();
    let mut reduced_sums: BTreeMap<String, u64> = BTreeMap::new();
    for i in 0..t.trials {
        let seed = trial_seed(t.seed, i);
        let (problems, quintuple) = match random_quintuple(seed, t.bound) {
            Ok(q) => {
                let (problems, sums) = qq_problems(&q);
                if let Some((raw, reduced)) = sums {
                    *raw_sums.entry(raw).or_default() += 1;
                    *reduced_sums.entry(reduced).or_default() += 1;
                }
                (problems, Some(q.to_json()))
            }
            Err(e) => (vec![e.to_string()], None),
        };
        if !problems.is_empty() {
            failed += 1;
            if failures.len() < MAX_LISTED {
                failures.push(QqFailure { trial: i, seed, quintuple, problems });
            }
        }
    }
    let results = json!({
        "trials": t.trials,
        "passed": t.trials - failed,
        "failed": failed,
        "halfline_checks_per_trial": 20,
        "reduced_sums": reduced_sums,
        "raw_sums": raw_sums,
        "failures": failures,
    });
    Ok(Report::new("qq-verify", trial_config(t), results, failed == 0, started))
}

pub fn qq_verify_file(path: &Path) -> Result<Report, CliError> {
    let started = Instant::now();
    let j: QuintupleJson = serde_json::from_str(&read(path)?).map_err(usage)?;
    let q = PlaneQuintuple::from_json(&j).map_err(usage)?;
    let (problems, _) = qq_problems(&q);
    let d = bifurcation_diagram(&q).map_err(usage)?;
    let check = qq_relation_check(&d);
    let results = json!({
        "quintuple": q.to_json(),
        "diagram": d,
        "class": classify_diagram(&d),
        "sum": check.sum.to_string(),
        "reduced": check.reduced.to_string(),
        "problems": problems,
    });
    let config = json!({ "quintuple": path.display().to_string() });
    Ok(Report::new("qq-verify", config, results, problems.is_empty(), started))
}

pub fn diagram_classes(t: &TrialArgs) -> Result<Report, CliError> {
    const EXPECTED: usize = 4;
    let started = Instant::now();
    check_trial_args(t)?;
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut witnesses: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    let mut errors = Vec::new();
    for i in 0..t.trials {
        let seed = trial_seed(t.seed, i);
        let d = random_quintuple(seed, t.bound).and_then(|q| bifurcation_diagram(&q).map(|d| (q, d)));
        match d {
            Ok((q, d)) => {
                let class = classify_diagram(&d).0;
                *counts.entry(class.clone()).or_default() += 1;
                witnesses.entry(class).or_insert_with(|| json!({ "trial": i, "seed": seed, "quintuple": q.to_json() }));
            }
            Err(e) => errors.push(json!({ "trial": i, "seed": seed, "error": e.to_string() })),
        }
    }
    let verdict = counts.len() == EXPECTED && errors.is_empty();
    let results = json!({
        "trials": t.trials,
        "class_count": counts.len(),
        "expected_class_count": EXPECTED,
        "classes": counts,
        "witnesses": if verdict { serde_json::Value::Null } else { json!(witnesses) },
        "errors": errors,
    });
    Ok(Report::new("diagram-classes", trial_config(t), results, verdict, started))
}

pub fn lemma1_verify(t: &TrialArgs) -> Result<Report, CliError> {
    let started = Instant::now();
    check_trial_args(t)?;
    let mut failed = Vec::new();
    let mut failed_count = 0u64;
    for i in 0..t.trials {
        let seed = trial_seed(t.seed, i);
        let outcome = random_lemma1_input(seed, t.bound)
            .map_err(|e| e.to_string())
            .and_then(|(v, mu)| lemma1_interior_check(&v, &mu).map_err(|e| e.to_string()));
        if outcome != Ok(true) {
            failed_count += 1;
            if failed.len() < MAX_LISTED {
                failed.push(json!({ "trial": i, "seed": seed, "outcome": format!("{outcome:?}") }));
            }
        }
    }

    let n = |v: &[i64]| RationalVec::from_ints(v);
    let ones = [int(1), int(1), int(1), int(1)];
    let fixtures = [
        ("sum_nonzero", [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, 0])], ones.clone(), "SumNonzero"),
        ("dependent_triple", [n(&[1, 0, 0]), n(&[-1, 0, 0]), n(&[0, 1, 0]), n(&[0, -1, 0])], ones.clone(), "DependentTriple"),
        (
            "non_positive_offset",
            [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, -1])],
            [int(1), int(0), int(1), int(1)],
            "NonPositiveOffset",
        ),
        ("symmetric", [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, -1])], ones.clone(), "true"),
        (
            "asymmetric_offsets",
            [n(&[1, 0, 0]), n(&[0, 1, 0]), n(&[0, 0, 1]), n(&[-1, -1, -1])],
            [int(1), int(2), int(3), rat(1, 2)],
            "true",
        ),
    ];
    let mut fixture_results = Vec::new();
    let mut fixtures_ok = true;
    for (name, v, mu, expected) in fixtures {
        let got = match lemma1_interior_check(&v, &mu) {
            Ok(b) => b.to_string(),
            Err(e) => format!("{e:?}").split('(').next().unwrap_or_default().to_string(),
        };
        let ok = got == expected;
        fixtures_ok &= ok;
        fixture_results.push(json!({ "name": name, "expected": expected, "got": got, "ok": ok }));
    }
    let results = json!({
        "trials": t.trials,
        "passed": t.trials - failed_count,
        "failed": failed_count,
        "failures": failed,
        "fixtures": fixture_results,
    });
    Ok(Report::new("lemma1-verify", trial_config(t), results, failed_count == 0 && fixtures_ok, started))
}

fn parse_contexts(s: &str, seed: u64) -> Result<ContextSelection, CliError> {
    if s == "full" {
        return Ok(ContextSelection::Full);
    }
    s.strip_prefix("sample:")
        .and_then(|n| n.parse::<usize>().ok())
        .map(|count| ContextSelection::Sample { count, seed })
        .ok_or_else(|| usage(format!("--contexts must be \"full\" or \"sample:N\", got {s:?}")))
}

pub fn section_e(m: i64, n: usize, contexts: &str, seed: u64) -> Result<Report, CliError> {
    let started = Instant::now();
    let w = window(m)?;
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let selection = parse_contexts(contexts, seed)?;
    let table = section_e_table(n, &w);
    let report = check_membership(&table, selection);
    let verdict = report.passed();
    let config = json!({ "window": m, "n": n, "contexts": contexts, "seed": seed });
    Ok(Report::new("section-e", config, &report, verdict, started))
}
