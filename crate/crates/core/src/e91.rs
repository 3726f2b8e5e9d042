//! E91 over Bell pairs. A trusted source prepares `(|00⟩ + |11⟩)/√2`; Alice
//! holds qubit 0, Bob qubit 1, and each optionally applies its family gate
//! before measuring.

use rand::Rng;

use crate::channel::{BasisFamily, NoiseConfig};
use crate::error::Result;
use crate::protocol::{run_rounds, Protocol, ProtocolTranscript, RoundRecord};
use crate::qsim::{flip_readout, GateKind, Statevector};

pub type PairRound = RoundRecord;

pub const ALICE_QUBIT: usize = 0;
pub const BOB_QUBIT: usize = 1;

/// H on qubit 0, then CNOT 0 → 1.
pub fn make_bell_pair() -> Statevector {
    Statevector::new(2)
        .and_then(|s| s.apply_1q(GateKind::Hadamard, 0))
        .and_then(|s| s.apply_cnot(0, 1))
        .expect("fixed two-qubit circuit")
}

/// Applies the parties' gates to a pair.
pub fn apply_flags(
    pair: &Statevector,
    alice_flag: u8,
    bob_flag: u8,
    family: BasisFamily,
) -> Result<Statevector> {
    let mut s = *pair;
    if alice_flag == 1 {
        s = s.apply_1q(family.encode_gate(), ALICE_QUBIT)?;
    }
    if bob_flag == 1 {
        s = s.apply_1q(family.decode_gate(), BOB_QUBIT)?;
    }
    Ok(s)
}

/// Noiseless state right before the joint measurement.
pub fn ideal_pair_state(alice_flag: u8, bob_flag: u8, family: BasisFamily) -> Result<Statevector> {
    apply_flags(&make_bell_pair(), alice_flag, bob_flag, family)
}

/// One round with fixed flags; the record has index 0.
pub fn e91_round_with<R: Rng + ?Sized>(
    alice_flag: u8,
    bob_flag: u8,
    family: BasisFamily,
    noise: &NoiseConfig,
    rng: &mut R,
) -> Result<PairRound> {
    // distribution noise hits both halves before the parties act
    let pair = make_bell_pair()
        .apply_depolarizing(noise.depolarizing_p, ALICE_QUBIT, rng)?
        .apply_depolarizing(noise.depolarizing_p, BOB_QUBIT, rng)?;
    let outcome = apply_flags(&pair, alice_flag, bob_flag, family)?.measure_all(rng);
    let read = flip_readout(
        &[outcome.bit(ALICE_QUBIT), outcome.bit(BOB_QUBIT)],
        noise.readout_epsilon,
        rng,
    )?;
    Ok(PairRound {
        index: 0,
        alice_bit: read[0],
        alice_flag,
        bob_flag,
        bob_bit: read[1],
        sifted: alice_flag == bob_flag,
    })
}

pub fn e91_round<R: Rng + ?Sized>(
    family: BasisFamily,
    noise: &NoiseConfig,
    rng: &mut R,
) -> Result<PairRound> {
    let alice_flag = u8::from(rng.random_bool(0.5));
    let bob_flag = u8::from(rng.random_bool(0.5));
    e91_round_with(alice_flag, bob_flag, family, noise, rng)
}

pub fn e91_run(
    n_rounds: usize,
    family: BasisFamily,
    noise: &NoiseConfig,
    master_seed: u64,
) -> Result<ProtocolTranscript> {
    noise.validate()?;
    let rounds = run_rounds(n_rounds, master_seed, |rng| e91_round(family, noise, rng))?;
    ProtocolTranscript::assemble(Protocol::E91, family, master_seed, rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::qsim::{Complex, ALGEBRA_TOL};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn assert_probs(state: &Statevector, expected: [f64; 4]) {
        for (p, e) in state.probabilities().iter().zip(expected) {
            assert!(
                (p - e).abs() <= ALGEBRA_TOL,
                "{:?}",
                state.probability_map()
            );
        }
    }

    #[test]
    fn bell_pair_amplitudes() {
        let bell = make_bell_pair();
        let r = Complex::new(FRAC_1_SQRT_2, 0.0);
        let expected = [r, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), r];
        for (a, e) in bell.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() <= ALGEBRA_TOL);
        }
        assert_probs(&bell, [0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn covariance_restores_bell_state() {
        for family in BasisFamily::ALL {
            let s = ideal_pair_state(1, 1, family).unwrap();
            for (a, b) in s.amplitudes().iter().zip(make_bell_pair().amplitudes()) {
                assert!((a - b).norm() <= ALGEBRA_TOL, "{family}");
            }
        }
    }

    #[test]
    fn flag_cases() {
        for family in BasisFamily::ALL {
            assert_probs(
                &ideal_pair_state(0, 0, family).unwrap(),
                [0.5, 0.0, 0.0, 0.5],
            );
            assert_probs(
                &ideal_pair_state(1, 1, family).unwrap(),
                [0.5, 0.0, 0.0, 0.5],
            );
            assert_probs(&ideal_pair_state(1, 0, family).unwrap(), [0.25; 4]);
            assert_probs(&ideal_pair_state(0, 1, family).unwrap(), [0.25; 4]);
        }
    }

    #[test]
    fn noiseless_run() {
        for family in BasisFamily::ALL {
            let t = e91_run(10_000, family, &NoiseConfig::noiseless(), 3).unwrap();
            assert_eq!(t.qber(), Some(0.0));
            assert!((t.sift_fraction() - 0.5).abs() <= 0.02);
            assert_eq!(t.protocol, Protocol::E91);
        }
    }

    #[test]
    fn two_readouts_double_the_error() {
        let noise = NoiseConfig::new(0.05, 0.0).unwrap();
        let t = e91_run(10_000, BasisFamily::Sx, &noise, 21).unwrap();
        let q = t.qber().unwrap();
        assert!((q - 0.095).abs() <= 0.013, "{q}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            e91_run(0, BasisFamily::Sx, &NoiseConfig::noiseless(), 1),
            Err(Error::ZeroRounds)
        ));
        let bad = NoiseConfig {
            readout_epsilon: 2.0,
            depolarizing_p: 0.0,
        };
        assert!(e91_run(10, BasisFamily::Sx, &bad, 1).is_err());
    }
}
