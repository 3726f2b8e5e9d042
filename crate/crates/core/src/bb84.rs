//! BB84: Alice prepares and encodes single qubits, Bob decodes and measures,
//! and both keep the rounds where their control flags agree.

use rand::Rng;

use crate::channel::{transmit, BasisFamily, EveConfig, NoiseConfig};
use crate::error::Result;
use crate::protocol::{run_rounds, Protocol, ProtocolTranscript, RoundRecord};
use crate::qsim::{flip_readout, GateKind, Statevector};

/// The three private random choices of a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bb84Choices {
    pub alice_bit: u8,
    pub alice_flag: u8,
    pub bob_flag: u8,
}

impl Bb84Choices {
    /// Bit and both flags, each a fair coin, drawn in that order.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Bb84Choices {
            alice_bit: u8::from(rng.random_bool(0.5)),
            alice_flag: u8::from(rng.random_bool(0.5)),
            bob_flag: u8::from(rng.random_bool(0.5)),
        }
    }

    /// All eight combinations.
    pub fn all() -> impl Iterator<Item = Bb84Choices> {
        (0u8..8).map(|m| Bb84Choices {
            alice_bit: m & 1,
            alice_flag: (m >> 1) & 1,
            bob_flag: (m >> 2) & 1,
        })
    }
}

/// Alice's outgoing qubit.
pub fn prepare(alice_bit: u8, alice_flag: u8, family: BasisFamily) -> Result<Statevector> {
    let mut s = Statevector::new(1)?;
    if alice_bit == 1 {
        s = s.apply_1q(GateKind::NotX, 0)?;
    }
    if alice_flag == 1 {
        s = s.apply_1q(family.encode_gate(), 0)?;
    }
    Ok(s)
}

/// Bob's decoding step before measurement.
pub fn decode(state: &Statevector, bob_flag: u8, family: BasisFamily) -> Result<Statevector> {
    if bob_flag == 1 {
        state.apply_1q(family.decode_gate(), 0)
    } else {
        Ok(*state)
    }
}

/// The state Bob measures over an ideal channel.
pub fn ideal_bob_state(choices: Bb84Choices, family: BasisFamily) -> Result<Statevector> {
    let sent = prepare(choices.alice_bit, choices.alice_flag, family)?;
    decode(&sent, choices.bob_flag, family)
}

/// One round with the given choices; the returned record has index 0.
pub fn bb84_round_with<R: Rng + ?Sized>(
    choices: Bb84Choices,
    family: BasisFamily,
    noise: &NoiseConfig,
    eve: &EveConfig,
    rng: &mut R,
) -> Result<RoundRecord> {
    let sent = prepare(choices.alice_bit, choices.alice_flag, family)?;
    let received = transmit(&sent, 0, noise, eve, family, rng)?;
    let measured = decode(&received, choices.bob_flag, family)?.measure_all(rng);
    let bob_bit = flip_readout(&[measured.bit(0)], noise.readout_epsilon, rng)?[0];
    Ok(RoundRecord {
        index: 0,
        alice_bit: choices.alice_bit,
        alice_flag: choices.alice_flag,
        bob_flag: choices.bob_flag,
        bob_bit,
        sifted: choices.alice_flag == choices.bob_flag,
    })
}

pub fn bb84_round<R: Rng + ?Sized>(
    family: BasisFamily,
    noise: &NoiseConfig,
    eve: &EveConfig,
    rng: &mut R,
) -> Result<RoundRecord> {
    let choices = Bb84Choices::draw(rng);
    bb84_round_with(choices, family, noise, eve, rng)
}

pub fn bb84_run(
    n_rounds: usize,
    family: BasisFamily,
    noise: &NoiseConfig,
    eve: &EveConfig,
    master_seed: u64,
) -> Result<ProtocolTranscript> {
    noise.validate()?;
    let rounds = run_rounds(n_rounds, master_seed, |rng| {
        bb84_round(family, noise, eve, rng)
    })?;
    ProtocolTranscript::assemble(Protocol::Bb84, family, master_seed, rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::protocol::round_rng;
    use crate::qsim::ALGEBRA_TOL;

    #[test]
    fn matched_flags_reproduce_alice_bit_exactly() {
        for family in BasisFamily::ALL {
            for c in Bb84Choices::all().filter(|c| c.alice_flag == c.bob_flag) {
                let p = ideal_bob_state(c, family).unwrap().probabilities();
                assert!(
                    (p[usize::from(c.alice_bit)] - 1.0).abs() < ALGEBRA_TOL,
                    "{family} {c:?}"
                );
            }
        }
    }

    #[test]
    fn mismatched_flags_are_coin_flips() {
        for family in BasisFamily::ALL {
            for c in Bb84Choices::all().filter(|c| c.alice_flag != c.bob_flag) {
                let p = ideal_bob_state(c, family).unwrap().probabilities();
                assert!((p[0] - 0.5).abs() < ALGEBRA_TOL, "{family} {c:?}");
            }
        }
    }

    #[test]
    fn forced_one_one_one_round() {
        let forced = Bb84Choices {
            alice_bit: 1,
            alice_flag: 1,
            bob_flag: 1,
        };
        for family in BasisFamily::ALL {
            for seed in 0..64 {
                let mut rng = round_rng(seed, 0);
                let r = bb84_round_with(
                    forced,
                    family,
                    &NoiseConfig::noiseless(),
                    &EveConfig::disabled(),
                    &mut rng,
                )
                .unwrap();
                assert_eq!(r.bob_bit, 1);
                assert!(r.sifted);
            }
        }
    }

    #[test]
    fn noiseless_run_has_no_errors() {
        for family in BasisFamily::ALL {
            let t = bb84_run(
                10_000,
                family,
                &NoiseConfig::noiseless(),
                &EveConfig::disabled(),
                7,
            )
            .unwrap();
            assert_eq!(t.qber(), Some(0.0));
            assert!((t.sift_fraction() - 0.5).abs() <= 0.02);
            let ones = crate::bits::ones(&t.alice_key) as f64 / t.alice_key.len() as f64;
            assert!((ones - 0.5).abs() <= 0.02);
            for r in &t.rounds {
                assert_eq!(r.sifted, r.alice_flag == r.bob_flag);
            }
        }
    }

    #[test]
    fn readout_noise_sets_qber() {
        let noise = NoiseConfig::new(0.05, 0.0).unwrap();
        let t = bb84_run(10_000, BasisFamily::Sx, &noise, &EveConfig::disabled(), 11).unwrap();
        let q = t.qber().unwrap();
        assert!((q - 0.05).abs() <= 0.012, "{q}");
    }

    #[test]
    fn eve_shows_up_as_quarter_errors() {
        let t = bb84_run(
            10_000,
            BasisFamily::Hadamard,
            &NoiseConfig::noiseless(),
            &EveConfig::intercept_resend(),
            5,
        )
        .unwrap();
        let q = t.qber().unwrap();
        assert!((q - 0.25).abs() <= 0.02, "{q}");
    }

    #[test]
    fn deterministic_per_seed() {
        let run = |seed| {
            bb84_run(
                2_000,
                BasisFamily::Sx,
                &NoiseConfig::new(0.02, 0.01).unwrap(),
                &EveConfig::intercept_resend(),
                seed,
            )
            .unwrap()
        };
        let a = serde_json::to_vec(&run(99)).unwrap();
        assert_eq!(a, serde_json::to_vec(&run(99)).unwrap());
        assert_ne!(a, serde_json::to_vec(&run(100)).unwrap());
    }

    #[test]
    fn zero_rounds_rejected() {
        assert!(matches!(
            bb84_run(
                0,
                BasisFamily::Sx,
                &NoiseConfig::noiseless(),
                &EveConfig::disabled(),
                1
            ),
            Err(Error::ZeroRounds)
        ));
    }
}
