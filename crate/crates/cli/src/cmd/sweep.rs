use std::f64::consts::TAU;
use std::io::Write;

use ghz_teleport_core::protocol::Protocol;
use ghz_teleport_core::{OutcomeSelector, ProtocolKind, RuleVariant, UnknownCoeffs};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::resolve_seed;
use crate::{Failure, SweepArgs, FIDELITY_SLACK};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub trial: u64,
    pub phi: f64,
    pub outcome: usize,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    pub runs: usize,
    pub min_fidelity: f64,
    pub counts: Vec<u64>,
    /// Pearson statistic of the outcome counts against the uniform law.
    pub chi_square: f64,
    pub dof: usize,
    /// Largest `|count - n p| / sqrt(n p (1 - p))` over outcomes.
    pub max_sigma: f64,
}

/// Run `index` draws its input and its measurement seed from its own
/// ChaCha stream, so rows do not depend on scheduling.
fn one_run(protocol: &Protocol, seed: u64, index: u64) -> Result<(usize, f64), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let c = UnknownCoeffs::haar(&mut rng);
    let t = protocol.run(&c, OutcomeSelector::Seeded(rng.random()), RuleVariant::Main)?;
    Ok((t.outcome.k(), t.fidelity))
}

pub fn collect(
    trials: u64,
    n: usize,
    phi_steps: u32,
    seed: u64,
) -> Result<(Vec<SweepRow>, SweepSummary), Failure> {
    if trials == 0 {
        return Err(Failure::Usage(String::from("--trials must be at least 1")));
    }
    let kind = if n == 2 {
        ProtocolKind::EprViaGhz
    } else {
        ProtocolKind::Nplet(n)
    };
    let mut rows = Vec::new();
    let mut outcomes = 0;
    for step in 0..phi_steps {
        let phi = TAU * f64::from(step) / f64::from(phi_steps);
        let protocol = Protocol::new(kind, phi)?;
        outcomes = protocol.basis().len();
        let base = u64::from(step) * trials;
        let results: Vec<Result<(usize, f64), Failure>> = (0..trials)
            .into_par_iter()
            .map(|t| one_run(&protocol, seed, base + t))
            .collect();
        for (trial, r) in (0..trials).zip(results) {
            let (outcome, fidelity) = r?;
            rows.push(SweepRow {
                trial,
                phi,
                outcome,
                fidelity,
            });
        }
    }
    let summary = summarize(&rows, outcomes);
    Ok((rows, summary))
}

fn summarize(rows: &[SweepRow], outcomes: usize) -> SweepSummary {
    let mut counts = vec![0u64; outcomes];
    for r in rows {
        counts[r.outcome - 1] += 1;
    }
    let total = rows.len() as f64;
    let p = 1.0 / outcomes as f64;
    let expected = total * p;
    let sd = (total * p * (1.0 - p)).sqrt();
    SweepSummary {
        runs: rows.len(),
        min_fidelity: rows
            .iter()
            .map(|r| r.fidelity)
            .fold(f64::INFINITY, f64::min),
        chi_square: counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum(),
        dof: outcomes - 1,
        max_sigma: counts
            .iter()
            .map(|&c| (c as f64 - expected).abs() / sd)
            .fold(0.0, f64::max),
        counts,
    }
}

impl SweepSummary {
    pub fn line(&self) -> String {
        format!(
            "summary runs={} min_fidelity={} chi_square={:.6} dof={} max_sigma={:.4}",
            self.runs, self.min_fidelity, self.chi_square, self.dof, self.max_sigma
        )
    }
}

fn csv_bytes(rows: &[SweepRow], summary: &SweepSummary) -> Result<Vec<u8>, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| e.to_string())?;
    }
    let mut bytes = w.into_inner().map_err(|e| e.to_string())?;
    writeln!(bytes, "# {}", summary.line()).map_err(|e| e.to_string())?;
    Ok(bytes)
}

pub fn sweep(a: &SweepArgs) -> Result<(), Failure> {
    let seed = resolve_seed(a.seed)?;
    let (rows, summary) = collect(a.trials, a.n.into(), a.phi_steps, seed)?;
    println!(
        "seed {seed}  n {}  phi steps {}  trials per step {}",
        a.n, a.phi_steps, a.trials
    );
    println!("counts {:?}", summary.counts);
    println!("{}", summary.line());
    if let Some(path) = &a.csv {
        let bytes = csv_bytes(&rows, &summary).map_err(Failure::Io)?;
        std::fs::write(path, bytes).map_err(|e| Failure::io(path, e))?;
    }
    if summary.min_fidelity < 1.0 - FIDELITY_SLACK {
        return Err(Failure::Physics(format!(
            "min fidelity {}",
            summary.min_fidelity
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_do_not_depend_on_thread_count() {
        let (a, _) = collect(50, 2, 2, 3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let (b, _) = pool.install(|| collect(50, 2, 2, 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
    }

    #[test]
    fn chi_square_of_exact_counts_is_zero() {
        let rows: Vec<SweepRow> = (0..16)
            .map(|i| SweepRow {
                trial: i,
                phi: 0.0,
                outcome: (i % 8 + 1) as usize,
                fidelity: 1.0,
            })
            .collect();
        let s = summarize(&rows, 8);
        assert_eq!(s.chi_square, 0.0);
        assert_eq!(s.counts, vec![2; 8]);
    }
}
