use std::collections::BTreeMap;

use contlog::expansion::{
    self, check_modulus, check_pseudometric, distance_table, met_axioms, synthesize_distance,
    DistanceSource, MetricSignature, Modulus,
};
use contlog::interp::{self, InterpError};
use contlog::kernel::parse_rational;
use contlog::semantics::{self, FamilyConfig, GeneralStructure};
use contlog::textio::{serialize, Report};
use contlog::ultra::{self, Ultrafilter};
use contlog::{gen, Formula, Schedule, Vocabulary};
use serde_json::json;

use crate::inputs::{invalid, Input, InputError};
use crate::{Common, StepSchedule};

pub fn run(name: &str, a: &Common) -> Input<Report> {
    let mut r = Report::new(name);
    match name {
        "eval" => eval(a, &mut r)?,
        "check-model" => check_model(a, &mut r)?,
        "reduce" => reduce(a, &mut r)?,
        "distinguish" => distinguish(a, &mut r)?,
        "ultraproduct" => ultraproduct(a, &mut r)?,
        "los-check" => los_check(a, &mut r)?,
        "expand" => expand(a, &mut r)?,
        "metric-check" => metric_check(a, &mut r)?,
        "force-converge" => force_converge(a, &mut r)?,
        "pseudometrize" => pseudometrize(a, &mut r)?,
        "morleyize" => morleyize(a, &mut r)?,
        "interpret-check" => interpret_check(a, &mut r)?,
        "interpret-upgrade" => interpret_upgrade(a, &mut r)?,
        _ => unreachable!("clap only yields known commands"),
    }
    Ok(r)
}

fn labels(m: &GeneralStructure, tuple: &[usize]) -> Vec<String> {
    tuple.iter().map(|&e| m.label(e).to_string()).collect()
}

/// Value of `f` under the assignment, or its full table over the unassigned
/// free variables keyed by comma-joined labels.
fn eval(a: &Common, r: &mut Report) -> Input<()> {
    let m = a.one_structure()?;
    let f = a.formula(m.vocab())?;
    let assigned = a.assignment(&m)?;
    let open: Vec<String> = f
        .free_vars()
        .iter()
        .filter(|v| !assigned.contains_key(*v))
        .cloned()
        .collect();
    let mut ev = semantics::Evaluator::new(&m);
    if open.is_empty() {
        r.value("value", ev.eval(&f, &assigned).map_err(invalid)?);
    } else {
        let mut table = BTreeMap::new();
        for t in semantics::tuples(m.size(), open.len()) {
            let mut env = assigned.clone();
            env.extend(open.iter().cloned().zip(t.iter().copied()));
            table.insert(
                labels(&m, &t).join(","),
                ev.eval(&f, &env).map_err(invalid)?,
            );
        }
        r.value("free", &open).value("table", table);
    }
    r.value("formula", serialize(&f));
    Ok(())
}

fn check_model(a: &Common, r: &mut Report) -> Input<()> {
    let ms = a.structures()?;
    let first = ms.first().ok_or(InputError::Missing("structure"))?;
    let theory = a.theory(first.vocab())?;
    let tol = a.tolerance()?;
    let mut all = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let check = semantics::is_model_within(m, &theory, &tol).map_err(invalid)?;
        if let Some((s, v)) = &check.first_failure {
            r.fail(json!({
                "structure": a.structure[i].display().to_string(),
                "sentence": serialize(&theory.sentences()[*s]),
                "index": s,
                "value": v,
            }));
        }
        all.push(check.values);
    }
    r.value("values", all).value("tolerance", tol);
    Ok(())
}

fn reduce(a: &Common, r: &mut Report) -> Input<()> {
    let m = a.one_structure()?;
    let red = semantics::reduce(&m);
    let text = serialize(&red.structure);
    a.write_out(&text)?;
    r.value("classes", red.partition.labelled(&m))
        .value("size", red.structure.size())
        .value("structure", text);
    Ok(())
}

/// Exit 1 with the separating sentence as witness; exit 0 when no formula of
/// the bounded family tells the two structures apart.
fn distinguish(a: &Common, r: &mut Report) -> Input<()> {
    let ms = a.structures()?;
    let [m, n] = ms.as_slice() else {
        return Err(invalid("distinguish takes exactly two --structure files"));
    };
    match semantics::distinguish(m, n, a.depth).map_err(invalid)? {
        Some(d) => {
            r.fail(json!({
                "sentence": serialize(&d.sentence),
                "left": d.left,
                "right": d.right,
                "gap": d.gap,
            }));
        }
        None => {
            r.value("separated", false);
        }
    }
    r.value("depth", a.depth);
    Ok(())
}

fn ultrafilters(a: &Common, family: usize) -> Input<Vec<Ultrafilter>> {
    match a.principal {
        Some(i) => Ok(vec![Ultrafilter::principal(family, i).map_err(invalid)?]),
        None => Ok(Ultrafilter::enumerate_all(family)),
    }
}

fn ultraproduct(a: &Common, r: &mut Report) -> Input<()> {
    let family = a.structures()?;
    let d = Ultrafilter::principal(family.len(), a.principal.unwrap_or(0)).map_err(invalid)?;
    let up = ultra::ultraproduct(&family, &d).map_err(invalid)?;
    let text = serialize(up.structure());
    a.write_out(&text)?;
    r.value("principal", d.principal_at())
        .value("factors", family.len())
        .value("size", up.structure().size())
        .value("structure", text);
    Ok(())
}

fn los_check(a: &Common, r: &mut Report) -> Input<()> {
    let family = a.structures()?;
    let first = family.first().ok_or(InputError::Missing("structure"))?;
    let formulas = semantics::generate_family(first.vocab(), &FamilyConfig::new(a.depth));
    let mut tuples = 0;
    let mut runs = Vec::new();
    for d in ultrafilters(a, family.len())? {
        let report = ultra::check_los(&family, &d, &formulas).map_err(invalid)?;
        tuples += report.tuples_checked;
        if let Some(v) = report.first_violation {
            r.fail(json!({ "principal": d.principal_at(), "violation": v }));
        }
        runs.push(d.principal_at());
    }
    r.value("formulas", formulas.len())
        .value("tuples", tuples)
        .value("ultrafilters", runs);
    Ok(())
}

fn signature_json(sig: &MetricSignature, distance: &Formula) -> serde_json::Value {
    json!({
        "distance_symbol": sig.distance_symbol,
        "distance": serialize(distance),
        "moduli": sig,
    })
}

fn expand(a: &Common, r: &mut Report) -> Input<()> {
    let vocab = a.vocabulary()?;
    let syn = synthesize_distance(&vocab).map_err(invalid)?;
    let d = syn.distance.formula();
    let sig = signature_json(&syn.signature, &d);
    if a.out.is_some() {
        a.write_out(&serde_json::to_string_pretty(&sig).expect("serializable"))?;
    }
    r.value("distance_symbol", &syn.signature.distance_symbol)
        .value("distance", serialize(&d))
        .value("moduli", &syn.signature)
        .value(
            "patterns",
            syn.patterns
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>(),
        )
        .value("sequence", serialize(&syn.sequence));
    Ok(())
}

/// Distance and signature for metric-check: `--signature` (with its stored
/// distance unless `--distance` overrides it), else `--distance` alone with
/// no moduli, else a fresh synthesis.
fn metric_setup(a: &Common, vocab: &Vocabulary) -> Input<(Formula, Option<MetricSignature>)> {
    let custom = a.distance(vocab)?;
    if let Some(raw) = a.signature_file()? {
        let symbol = raw["distance_symbol"].as_str().unwrap_or("D").to_string();
        let stored = raw["moduli"]
            .as_object()
            .ok_or_else(|| invalid("signature file needs a `moduli` object"))?;
        let mut moduli = Vec::new();
        for (name, c) in stored {
            let arity = vocab
                .predicates()
                .iter()
                .find(|p| &p.name == name)
                .map(|p| p.arity)
                .ok_or_else(|| invalid(format!("signature names unknown predicate `{name}`")))?;
            let coefficient = c
                .as_str()
                .ok_or_else(|| invalid("coefficients are p/q strings"))
                .and_then(|c| {
                    parse_rational(c).map_err(|e| invalid(format!("coefficient of {name}: {e}")))
                })?;
            moduli.push(Modulus {
                symbol: name.clone(),
                arity,
                coefficient,
            });
        }
        let d = match custom {
            Some(d) => d,
            None => {
                let text = raw["distance"]
                    .as_str()
                    .ok_or_else(|| invalid("signature file has no `distance`"))?;
                contlog::textio::parse_formula(text, vocab).map_err(invalid)?
            }
        };
        return Ok((
            d,
            Some(MetricSignature {
                distance_symbol: symbol,
                moduli,
            }),
        ));
    }
    match custom {
        Some(d) => Ok((d, None)),
        None => {
            let syn = synthesize_distance(vocab).map_err(invalid)?;
            Ok((syn.distance.formula(), Some(syn.signature)))
        }
    }
}

fn metric_check(a: &Common, r: &mut Report) -> Input<()> {
    let vocab = a.vocabulary()?;
    let (d, sig) = metric_setup(a, &vocab)?;
    let g = a.grid_exponent()?;
    let mut named: Vec<(String, GeneralStructure)> = a
        .structure
        .iter()
        .map(|p| Ok((p.display().to_string(), crate::inputs::structure_at(p)?)))
        .collect::<Input<_>>()?;
    let mut rng = gen::rng(a.seed);
    for i in 0..a.count {
        let size = 1 + i % a.size.max(1);
        named.push((
            format!("seed {} #{i}", a.seed),
            gen::random_structure(&mut rng, &vocab, size, 16),
        ));
    }
    let source = DistanceSource::Formula(d.clone());
    let axioms = sig.as_ref().map(|s| met_axioms(s, g));
    for (name, m) in &named {
        if m.vocab() != &vocab {
            return Err(invalid(format!(
                "{name}: vocabulary differs from the distance's"
            )));
        }
        let pm = check_pseudometric(m, &source).map_err(invalid)?;
        if let Some(v) = pm.violation {
            r.fail(json!({ "structure": name, "check": "pseudometric", "violation": v }));
            continue;
        }
        let Some(sig) = &sig else { continue };
        let table = distance_table(m, &source).map_err(invalid)?;
        for md in &sig.moduli {
            let rep = check_modulus(m, &md.symbol, &md.coefficient, &table).map_err(invalid)?;
            if !rep.passed {
                r.fail(json!({ "structure": name, "check": "modulus", "report": rep }));
            }
        }
        let expanded = if m.vocab().contains(&sig.distance_symbol) {
            m.clone()
        } else {
            m.with_predicate(&sig.distance_symbol, 2, table)
                .map_err(invalid)?
        };
        let check = semantics::is_model(&expanded, axioms.as_ref().unwrap()).map_err(invalid)?;
        if let Some((i, v)) = check.first_failure {
            r.fail(json!({
                "structure": name,
                "check": "met-axioms",
                "sentence": serialize(&axioms.as_ref().unwrap().sentences()[i]),
                "value": v,
            }));
        }
    }
    r.value("structures", named.len())
        .value("distance", serialize(&d))
        .value("grid", 1u64 << g);
    if let Some(s) = &sig {
        r.value("moduli", s);
    }
    Ok(())
}

fn schedule(a: &Common) -> Schedule {
    match a.schedule {
        Some(StepSchedule::Stability) => Schedule::Stability,
        _ => Schedule::Lemma,
    }
}

fn force_converge(a: &Common, r: &mut Report) -> Input<()> {
    let ms = a.structures()?;
    let vocab = a.vocabulary()?;
    let seq = a.sequence(&vocab)?;
    let s = schedule(a);
    let out = expansion::force_convergence(&seq, s);
    let text = serialize(&out);
    a.write_out(&text)?;
    for (i, m) in ms.iter().enumerate() {
        let rep = expansion::check_steps(&out, m, |k| s.bound(k)).map_err(invalid)?;
        if let Some((k, assignment, gap, bound)) = rep.violation {
            r.fail(json!({
                "structure": a.structure[i].display().to_string(),
                "m": k, "assignment": assignment, "gap": gap, "bound": bound,
            }));
        }
    }
    r.value("schedule", s).value("length", out.len());
    if a.out.is_none() {
        r.value("sequence", text);
    }
    Ok(())
}

fn pseudometrize(a: &Common, r: &mut Report) -> Input<()> {
    let ms = a.structures()?;
    let vocab = a.vocabulary()?;
    let seq = a.sequence(&vocab)?;
    let out = expansion::pseudometrize(&seq).map_err(invalid)?;
    let text = serialize(&out);
    a.write_out(&text)?;
    for (i, m) in ms.iter().enumerate() {
        for (k, e) in out.entries().iter().enumerate() {
            let rep =
                check_pseudometric(m, &DistanceSource::Formula(e.clone())).map_err(invalid)?;
            if let Some(v) = rep.violation {
                r.fail(json!({
                    "structure": a.structure[i].display().to_string(),
                    "entry": k,
                    "violation": v,
                }));
            }
        }
    }
    r.value("length", out.len()).value("sequence", text);
    Ok(())
}

fn morleyize(a: &Common, r: &mut Report) -> Input<()> {
    let vocab = a.vocabulary()?;
    let mv = expansion::MorleyVocabulary::new(&vocab, a.depth).map_err(invalid)?;
    let atoms: BTreeMap<&str, String> = mv.atoms().map(|(n, f)| (n, serialize(f))).collect();
    r.value("atoms", atoms)
        .value("vocabulary", serialize(mv.vocab()));
    if a.formula.is_some() {
        let f = a.formula(&vocab)?;
        r.value("formula", serialize(&mv.translate(&f).map_err(invalid)?));
    }
    if !a.structure.is_empty() {
        let m = a.one_structure()?;
        let text = serialize(&mv.interpret(&m).map_err(invalid)?);
        a.write_out(&text)?;
        r.value("structure", text);
    } else {
        a.write_out(&serialize(mv.vocab()))?;
    }
    Ok(())
}

fn interpretation_inputs(a: &Common) -> Input<(GeneralStructure, interp::Interpretation)> {
    let k = a.one_structure()?;
    let i = a.interpretation(k.vocab())?;
    Ok((k, i))
}

fn record_conditions(r: &mut Report, rep: &interp::ConditionsReport) {
    for (name, st) in [
        ("monotone", &rep.monotone),
        ("disjoint", &rep.disjoint),
        ("covering", &rep.covering),
    ] {
        if let Some(w) = &st.witness {
            r.fail(json!({ "condition": name, "witness": w }));
        }
        r.value(name, st.holds);
    }
}

fn interpret_check(a: &Common, r: &mut Report) -> Input<()> {
    let (k, i) = interpretation_inputs(a)?;
    let rep = interp::check_interpretation_conditions(&i, &k).map_err(invalid)?;
    record_conditions(r, &rep);
    r.value("grid", i.denominator());
    Ok(())
}

fn interpret_upgrade(a: &Common, r: &mut Report) -> Input<()> {
    let (k, i) = interpretation_inputs(a)?;
    let rep = interp::check_interpretation_conditions(&i, &k).map_err(invalid)?;
    record_conditions(r, &rep);
    if !rep.holds() {
        return Ok(());
    }
    match interp::upgrade(&i, &k) {
        Ok(m) => {
            let text = serialize(&m);
            a.write_out(&text)?;
            r.value("structure", text);
        }
        Err(InterpError::Inconsistent {
            predicate,
            tuple,
            sup,
            inf,
        }) => {
            r.fail(json!({ "predicate": predicate, "tuple": tuple, "sup": sup, "inf": inf }));
        }
        Err(e) => return Err(invalid(e)),
    }
    Ok(())
}
