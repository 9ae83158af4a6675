use ghz_teleport_core::adequacy::{adequacy, Correction, InadequacyReason, InputForm};
use ghz_teleport_core::basis::{MeasurementBasis, SParameter};
use ghz_teleport_core::canonical::EprForm;
use ghz_teleport_core::entanglement::EntanglementClass;
use ghz_teleport_core::protocol::receivers;
use ghz_teleport_core::{Gate, ProtocolKind, Verdict};

use crate::report::{
    gate_entry, write_json, Aggregate, BasisSummary, GateEntry, OutcomeRow, Parameters, RunReport,
    SCHEMA_VERSION,
};
use crate::{CheckBasisArgs, Failure, Family, FIDELITY_SLACK};

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Pi123 => "pi123",
        Family::Pi1_23S2 => "pi1-23-s2",
        Family::Pi1_23S4 => "pi1-23-s4",
        Family::Pi13_2S4 => "pi13-2-s4",
        Family::GhzTriplet => "ghz-triplet",
        Family::General => "general",
    }
}

pub fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Adequate => "adequate",
        Verdict::Inadequate(InadequacyReason::StateDependent { .. }) => {
            "inadequate(state-dependent)"
        }
        Verdict::Inadequate(InadequacyReason::Incomplete { .. }) => "inadequate(incomplete)",
        Verdict::PartiallyUsable { .. } => "partially-usable",
    }
}

fn class_name(c: &EntanglementClass) -> String {
    match c {
        EntanglementClass::Product => String::from("product"),
        EntanglementClass::PairEntangled(i, j) => format!("pair({i},{j})"),
        EntanglementClass::GenuineTripartite => String::from("genuine-tripartite"),
    }
}

/// Gates the receivers apply to undo `c`, identities left out.
fn correction_entries(c: &Correction, kind: ProtocolKind) -> Result<Vec<GateEntry>, Failure> {
    let recv = receivers(kind);
    match c.local_factors() {
        Some(factors) => {
            let mut out = Vec::new();
            for ((party, qubit), f) in recv.iter().zip(factors) {
                let g = Gate::from_unitary(f.clone(), "U")?.adjoint();
                if !g.is_identity() {
                    out.push(gate_entry(party.to_string(), vec![*qubit], &g));
                }
            }
            Ok(out)
        }
        None => {
            let m = c.to_matrix().adjoint();
            Ok(vec![GateEntry {
                party: String::from("receivers"),
                qubits: recv.iter().map(|r| r.1).collect(),
                gate: String::from("dense"),
                matrix: Some(m.as_slice().iter().map(|z| [z.re, z.im]).collect()),
            }])
        }
    }
}

pub fn check(a: &CheckBasisArgs) -> Result<(), Failure> {
    if !a.phi.is_finite() {
        return Err(Failure::Usage(format!("phi must be finite, got {}", a.phi)));
    }
    let n = usize::from(a.n);
    let (basis, kind) = match a.family {
        Family::Pi123 => (MeasurementBasis::pi123(), ProtocolKind::EprViaGhz),
        Family::Pi1_23S2 => (MeasurementBasis::pi1_23_s2(), ProtocolKind::EprViaGhz),
        Family::Pi1_23S4 => (MeasurementBasis::pi1_23_s4(a.phi), ProtocolKind::EprViaGhz),
        Family::Pi13_2S4 => (MeasurementBasis::pi13_2_s4(a.phi), ProtocolKind::EprViaGhz),
        Family::GhzTriplet => (MeasurementBasis::triplet_mes(), ProtocolKind::EprViaGhz),
        Family::General => (MeasurementBasis::general(n, a.phi)?, ProtocolKind::Nplet(n)),
    };
    let (input, carrier) = match kind {
        ProtocolKind::Nplet(n) => (InputForm::Nplet(n), n + 1),
        _ => (InputForm::Epr(EprForm::AntiDiagonal), 3),
    };
    let classification = basis.classify();
    let report = adequacy(&basis, input, carrier)?;

    let mut rows = Vec::with_capacity(basis.len());
    for (i, prob) in report.probs.iter().enumerate() {
        let corrections = report.corrections[i]
            .as_ref()
            .map(|c| correction_entries(c, kind))
            .transpose()?;
        rows.push(OutcomeRow {
            k: i + 1,
            label: Some(basis.labels()[i].clone()),
            probability: prob.average(),
            state_dependent: prob.is_state_dependent(),
            corrections,
            fidelity: None,
        });
    }
    let summary = BasisSummary {
        tag: basis.family().tag().to_string(),
        vectors: basis.len(),
        s: match classification.s {
            SParameter::Defined(s) => Some(s),
            SParameter::Undefined => None,
        },
        classes: classification
            .per_vector_class
            .as_ref()
            .map(|cs| cs.iter().map(class_name).collect()),
        entangled_pair_count: classification.entangled_pair_count,
        gram_deviation: basis.gram_deviation(),
        verdict: verdict_name(&report.verdict).to_string(),
        zero_outcomes: report.zero_outcomes.iter().map(|o| o.k()).collect(),
        state_dependent_outcomes: match &report.verdict {
            Verdict::Inadequate(InadequacyReason::StateDependent { outcomes }) => {
                outcomes.iter().map(|o| o.k()).collect()
            }
            _ => Vec::new(),
        },
    };
    let uses_phi = matches!(
        a.family,
        Family::Pi1_23S4 | Family::Pi13_2S4 | Family::General
    );
    let out = RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: String::from("check-basis"),
        parameters: Parameters {
            family: Some(family_name(a.family).to_string()),
            n: (a.family == Family::General).then_some(n),
            phi: if uses_phi { a.phi } else { 0.0 },
            ..Parameters::default()
        },
        seed: None,
        aggregate: Aggregate::of(&rows),
        rows,
        run: None,
        basis: Some(summary),
    };
    print_report(&out);
    if let Some(path) = &a.json {
        write_json(&out, path)?;
    }
    let sum = out.aggregate.probability_sum;
    if (sum - 1.0).abs() > FIDELITY_SLACK {
        return Err(Failure::Physics(format!(
            "outcome probabilities sum to {sum}"
        )));
    }
    Ok(())
}

fn print_report(r: &RunReport) {
    let b = r.basis.as_ref().expect("basis report");
    println!(
        "family {}  ({} vectors, gram deviation {:.1e})",
        b.tag, b.vectors, b.gram_deviation
    );
    match b.s {
        Some(s) => println!("s = {s}"),
        None => println!("s undefined"),
    }
    if let Some(classes) = &b.classes {
        println!("classes {}", classes.join(" "));
    }
    println!("verdict {}", b.verdict);
    println!("zero outcomes {:?}", b.zero_outcomes);
    for row in &r.rows {
        let gates = match &row.corrections {
            None => String::from("-"),
            Some(g) if g.is_empty() => String::from("I"),
            Some(g) => g
                .iter()
                .map(|e| format!("{}:{}", e.party, e.gate))
                .collect::<Vec<_>>()
                .join(" "),
        };
        let dep = if row.state_dependent {
            " (state-dependent, average)"
        } else {
            ""
        };
        println!(
            "  k={:<3} {:<28} p = {:.6}{dep}  {gates}",
            row.k,
            row.label.as_deref().unwrap_or(""),
            row.probability
        );
    }
}
