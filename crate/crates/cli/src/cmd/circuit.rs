use ghz_teleport_core::circuit::{
    branch_to_outcome, network_input, run_circuit, teleport_network, unmeasured_state,
    BranchSelector,
};
use ghz_teleport_core::protocol::target_state;
use ghz_teleport_core::ProtocolKind;

use crate::args::{coeffs, resolve_seed};
use crate::{CircuitArgs, Failure, FIDELITY_SLACK};

pub fn circuit(a: &CircuitArgs) -> Result<(), Failure> {
    let c = coeffs(a.coeffs.alpha, a.coeffs.beta)?;
    let selector = match (a.branch, a.seed) {
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(String::from(
                "--branch and --seed are mutually exclusive",
            )))
        }
        (Some(b), None) => BranchSelector::Forced(b.into()),
        (None, seed) => BranchSelector::Seeded(resolve_seed(seed)?),
    };
    let network = teleport_network(a.variant.rule())?;
    if let Some(path) = &a.emit_circuit {
        let text = if a.deferred {
            network.deferred()?.to_text()
        } else {
            network.to_text()
        };
        std::fs::write(path, text).map_err(|e| Failure::io(path, e))?;
    }
    let run = run_circuit(&network, &network_input(&c), selector)?;
    let held = unmeasured_state(&run.state, &[1, 2, 3], &run.bits)?;
    let fidelity = held.fidelity(&target_state(ProtocolKind::EprViaGhz, &c)?)?;
    let bits: String = run
        .bits
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    println!(
        "branch {} bits {bits} outcome k={} p = {:.6} fidelity {:.15}",
        run.branch(),
        branch_to_outcome(run.branch()).k(),
        run.probability,
        fidelity
    );
    if fidelity < 1.0 - FIDELITY_SLACK {
        return Err(Failure::Physics(format!(
            "fidelity {fidelity} on branch {}",
            run.branch()
        )));
    }
    Ok(())
}
