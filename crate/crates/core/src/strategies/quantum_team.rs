use rand::Rng;

use super::detector::DetectorModel;
use crate::error::{check_contestants, Error, Result};
use crate::game::{Parity, Response, RoundContext, TeamStrategy};
use crate::quantum::{apply_rotation, ghz_state, HalfInteger, StateVector};
use crate::rng::PartyRng;

/// The GHZ team. Each round the parties share a fresh GHZ state; party `j`
/// rotates her qubit by `R(n_j)` and measures it in the computational
/// basis if her detector fires. Without a detection she declines to play.
#[derive(Debug, Clone)]
pub struct QuantumTeam {
    detector: DetectorModel,
    ghz: StateVector,
}

pub fn quantum_team(c: usize, detector: DetectorModel) -> Result<QuantumTeam> {
    check_contestants(c)?;
    if detector.contestants() != c {
        return Err(Error::ArityMismatch { team: detector.contestants(), game: c });
    }
    Ok(QuantumTeam { detector, ghz: ghz_state(c)? })
}

impl QuantumTeam {
    pub fn detector(&self) -> &DetectorModel {
        &self.detector
    }
}

impl TeamStrategy for QuantumTeam {
    type Shared = StateVector;

    fn contestants(&self) -> usize {
        self.ghz.num_qubits()
    }

    fn prepare(&self, _: &mut PartyRng) -> StateVector {
        self.ghz.clone()
    }

    fn respond(
        &self,
        party: usize,
        apples: HalfInteger,
        _: &RoundContext,
        shared: &mut StateVector,
        rng: &mut PartyRng,
    ) -> Response {
        let rotated = apply_rotation(shared, party, apples).expect("party index within state");
        let fired = rng.random::<f64>() < self.detector.sigma();
        let u: f64 = rng.random();
        if fired {
            let (bit, collapsed) = rotated.measure_qubit(party, u).expect("party index within state");
            *shared = collapsed;
            Response { ready: true, bit }
        } else {
            // the photon is lost: the qubit stays unmeasured and any bit the
            // party is compelled to send is a coin flip
            *shared = rotated;
            Response { ready: false, bit: u < 0.5 }
        }
    }

    fn decide(
        &self,
        own: Response,
        _: HalfInteger,
        referee_sum: bool,
        _: &RoundContext,
        rng: &mut PartyRng,
    ) -> Parity {
        if own.ready {
            // GHZ outcomes have even weight, GHZ-perp outcomes odd weight
            Parity::from_bit(referee_sum ^ own.bit)
        } else {
            Parity::from_bit(rng.random::<bool>())
        }
    }
}
