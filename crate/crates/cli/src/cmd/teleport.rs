use std::path::Path;
use std::time::Instant;

use ghz_teleport_core::protocol::{receivers, Protocol};
use ghz_teleport_core::{ProtocolKind, RuleVariant, Transcript, UnknownCoeffs};
use num_complex::Complex64;

use crate::args::{coeffs, selector};
use crate::report::{
    amplitudes, pair, plan_entries, write_json, Aggregate, GateEntry, OutcomeRow, Parameters,
    RunReport, RunSummary, SCHEMA_VERSION,
};
use crate::{Failure, TeleportEprArgs, TeleportNpletArgs, FIDELITY_SLACK};

struct Request<'a> {
    command: &'static str,
    kind: ProtocolKind,
    alpha: Complex64,
    beta: Complex64,
    phi: f64,
    seed: Option<u64>,
    outcome: Option<usize>,
    variant: RuleVariant,
    variant_name: Option<&'static str>,
    json: Option<&'a Path>,
}

pub fn epr(a: &TeleportEprArgs) -> Result<(), Failure> {
    teleport(Request {
        command: "teleport-epr",
        kind: ProtocolKind::EprViaGhz,
        alpha: a.coeffs.alpha,
        beta: a.coeffs.beta,
        phi: a.phi,
        seed: a.seed,
        outcome: a.outcome,
        variant: a.variant.rule(),
        variant_name: Some(a.variant.name()),
        json: a.json.as_deref(),
    })
}

pub fn nplet(a: &TeleportNpletArgs) -> Result<(), Failure> {
    teleport(Request {
        command: "teleport-nplet",
        kind: ProtocolKind::Nplet(a.n.into()),
        alpha: a.coeffs.alpha,
        beta: a.coeffs.beta,
        phi: a.phi,
        seed: a.seed,
        outcome: a.outcome,
        variant: RuleVariant::Main,
        variant_name: None,
        json: a.json.as_deref(),
    })
}

fn teleport(req: Request<'_>) -> Result<(), Failure> {
    let c = coeffs(req.alpha, req.beta)?;
    if !req.phi.is_finite() {
        return Err(Failure::Usage(format!(
            "phi must be finite, got {}",
            req.phi
        )));
    }
    let start = Instant::now();
    let protocol = Protocol::new(req.kind, req.phi)?;
    let (sel, seed) = selector(req.seed, req.outcome, protocol.basis().len())?;
    let transcript = protocol.run(&c, sel, req.variant)?;
    let table = protocol.outcome_table(&c, req.variant)?;
    let elapsed = start.elapsed();

    let labels = protocol.basis().labels();
    let rows: Vec<OutcomeRow> = table
        .iter()
        .map(|r| OutcomeRow {
            k: r.outcome.k(),
            label: Some(labels[r.outcome.index()].clone()),
            probability: r.probability,
            state_dependent: false,
            corrections: Some(plan_entries(&r.plan)),
            fidelity: Some(r.fidelity),
        })
        .collect();
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: req.command.to_string(),
        parameters: Parameters {
            protocol: Some(req.kind.name().to_string()),
            n: match req.kind {
                ProtocolKind::Nplet(n) => Some(n),
                _ => None,
            },
            alpha: Some(pair(c.alpha())),
            beta: Some(pair(c.beta())),
            phi: req.phi,
            variant: req.variant_name.map(str::to_string),
            forced_outcome: req.outcome,
            ..Parameters::default()
        },
        seed,
        aggregate: Aggregate::of(&rows),
        rows,
        run: Some(summary(&transcript)),
        basis: None,
    };

    print_summary(
        &report,
        &transcript,
        &c,
        labels[transcript.outcome.index()].as_str(),
    );
    println!("runtime {:.3} ms", elapsed.as_secs_f64() * 1e3);
    if let Some(path) = req.json {
        write_json(&report, path)?;
    }
    check(&report)
}

fn summary(t: &Transcript) -> RunSummary {
    RunSummary {
        k: t.outcome.k(),
        probability: t.probability,
        operations: t
            .operations
            .iter()
            .map(|op| GateEntry {
                party: op.party.to_string(),
                qubits: op.qubits.clone(),
                gate: op.gate.clone(),
                matrix: None,
            })
            .collect(),
        messages: t.messages.len(),
        fidelity: t.fidelity,
        final_state: amplitudes(&t.final_state),
    }
}

fn print_summary(report: &RunReport, t: &Transcript, c: &UnknownCoeffs, label: &str) {
    println!("protocol {}  phi {}", t.protocol.name(), t.phi);
    println!("input alpha = {}  beta = {}", c.alpha(), c.beta());
    match report.seed {
        Some(s) => println!("seed {s}"),
        None => println!("outcome forced"),
    }
    println!(
        "outcome k={} {label}  p = {:.6}",
        t.outcome.k(),
        t.probability
    );
    println!(
        "messages {} (payload k={})",
        t.messages.len(),
        t.outcome.k()
    );
    for (party, qubit) in receivers(t.protocol) {
        let gates: Vec<&str> = t
            .operations
            .iter()
            .filter(|op| op.party == party)
            .map(|op| op.gate.as_str())
            .collect();
        let gates = if gates.is_empty() {
            String::from("I")
        } else {
            gates.join(" ")
        };
        println!("  {party} (qubit {qubit}): {gates}");
    }
    println!("fidelity {:.15}", t.fidelity);
    if let Some(min) = report.aggregate.min_fidelity {
        println!(
            "all {} outcomes: probability sum {:.12}, min fidelity {:.15}",
            report.aggregate.outcomes, report.aggregate.probability_sum, min
        );
    }
}

fn check(report: &RunReport) -> Result<(), Failure> {
    let run = report.run.as_ref().expect("teleport reports carry a run");
    if run.fidelity < 1.0 - FIDELITY_SLACK {
        return Err(Failure::Physics(format!(
            "fidelity {} below 1 - {FIDELITY_SLACK:e}",
            run.fidelity
        )));
    }
    let agg = &report.aggregate;
    if let Some(min) = agg.min_fidelity.filter(|&m| m < 1.0 - FIDELITY_SLACK) {
        return Err(Failure::Physics(format!(
            "an outcome reaches only fidelity {min}"
        )));
    }
    if (agg.probability_sum - 1.0).abs() > FIDELITY_SLACK {
        return Err(Failure::Physics(format!(
            "probabilities sum to {}",
            agg.probability_sum
        )));
    }
    Ok(())
}
