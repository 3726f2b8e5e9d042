//! Basis families, the noisy quantum channel, the classical channel and the
//! intercept-resend adversary.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{check_probability, Error, Result};
use crate::qsim::{GateKind, Statevector};

/// A pair of control-signal gates: the sender applies `encode_gate` when its
/// flag is 1, the receiver applies `decode_gate` when its flag is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisFamily {
    /// H on both sides.
    Hadamard,
    /// SX for the sender, SX† for the receiver.
    Sx,
}

impl BasisFamily {
    pub const ALL: [BasisFamily; 2] = [BasisFamily::Hadamard, BasisFamily::Sx];

    pub fn name(self) -> &'static str {
        match self {
            BasisFamily::Hadamard => "hadamard",
            BasisFamily::Sx => "sx",
        }
    }

    pub fn encode_gate(self) -> GateKind {
        match self {
            BasisFamily::Hadamard => GateKind::Hadamard,
            BasisFamily::Sx => GateKind::SqrtX,
        }
    }

    pub fn decode_gate(self) -> GateKind {
        match self {
            BasisFamily::Hadamard => GateKind::Hadamard,
            BasisFamily::Sx => GateKind::SqrtXInverse,
        }
    }
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hadamard" => Ok(BasisFamily::Hadamard),
            "sx" => Ok(BasisFamily::Sx),
            other => Err(Error::Config(format!("unknown basis family {other:?}"))),
        }
    }
}

/// Hardware-style error knobs. `depolarizing_p` acts once per transmitted
/// qubit, `readout_epsilon` once per measured qubit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub readout_epsilon: f64,
    pub depolarizing_p: f64,
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn new(readout_epsilon: f64, depolarizing_p: f64) -> Result<Self> {
        let cfg = NoiseConfig {
            readout_epsilon,
            depolarizing_p,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("readout_epsilon", self.readout_epsilon)?;
        check_probability("depolarizing_p", self.depolarizing_p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveStrategy {
    /// Measure in a guessed flag of the active family, re-prepare, forward.
    #[default]
    InterceptResend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EveConfig {
    pub enabled: bool,
    pub strategy: EveStrategy,
}

impl EveConfig {
    pub fn disabled() -> Self {
        Self::default()
    }

    pub fn intercept_resend() -> Self {
        EveConfig {
            enabled: true,
            strategy: EveStrategy::InterceptResend,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

/// Messages exchanged over the authenticated classical channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClassicalMessage {
    BasisSequence {
        sender: Party,
        #[serde(with = "bits::ascii_serde")]
        flags: Vec<u8>,
    },
    MatchIndices {
        indices: Vec<usize>,
    },
}

impl ClassicalMessage {
    /// Checks that `indices` are strictly increasing and below `round_count`.
    pub fn match_indices(indices: Vec<usize>, round_count: usize) -> Result<Self> {
        let increasing = indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = indices.last().is_none_or(|&i| i < round_count);
        if !(increasing && in_range) {
            return Err(Error::Config(
                "match indices must be strictly increasing and below the round count".into(),
            ));
        }
        Ok(ClassicalMessage::MatchIndices { indices })
    }
}

/// Eve's attack on one qubit with a known guess `eve_flag`: undo the encode
/// gate if she guessed 1, measure, re-prepare the observed bit, re-encode.
/// Returns Eve's observed bit and the forwarded state.
pub fn intercept_resend<R: Rng + ?Sized>(
    state: &Statevector,
    target: usize,
    family: BasisFamily,
    eve_flag: u8,
    rng: &mut R,
) -> Result<(u8, Statevector)> {
    let mut s = *state;
    if eve_flag == 1 {
        s = s.apply_1q(family.decode_gate(), target)?;
    }
    // the collapsed state is exactly the re-prepared |bit⟩ on target
    let (bit, mut s) = s.measure_qubit(target, rng)?;
    if eve_flag == 1 {
        s = s.apply_1q(family.encode_gate(), target)?;
    }
    Ok((bit, s))
}

/// Sends `target` through the quantum channel: adversary first (if enabled),
/// then depolarizing noise. Readout noise belongs to the receiver.
pub fn transmit<R: Rng + ?Sized>(
    state: &Statevector,
    target: usize,
    noise: &NoiseConfig,
    eve: &EveConfig,
    family: BasisFamily,
    rng: &mut R,
) -> Result<Statevector> {
    if target >= state.n_qubits() {
        return Err(Error::QubitOutOfRange {
            index: target,
            n_qubits: state.n_qubits(),
        });
    }
    let mut s = *state;
    if eve.enabled {
        let eve_flag = u8::from(rng.random_bool(0.5));
        s = intercept_resend(&s, target, family, eve_flag, rng)?.1;
    }
    s.apply_depolarizing(noise.depolarizing_p, target, rng)
}

/// Indices where both flag sequences agree, ascending.
pub fn sift(alice_flags: &[u8], bob_flags: &[u8]) -> Result<Vec<usize>> {
    if alice_flags.len() != bob_flags.len() {
        return Err(Error::LengthMismatch {
            left: alice_flags.len(),
            right: bob_flags.len(),
        });
    }
    Ok(alice_flags
        .iter()
        .zip(bob_flags)
        .enumerate()
        .filter_map(|(i, (a, b))| (a == b).then_some(i))
        .collect())
}

/// Fraction of positions where the sifted keys differ.
pub fn qber(alice_key: &[u8], bob_key: &[u8]) -> Result<f64> {
    if alice_key.len() != bob_key.len() {
        return Err(Error::LengthMismatch {
            left: alice_key.len(),
            right: bob_key.len(),
        });
    }
    if alice_key.is_empty() {
        return Err(Error::Empty);
    }
    let errors = alice_key
        .iter()
        .zip(bob_key)
        .filter(|(a, b)| a != b)
        .count();
    Ok(errors as f64 / alice_key.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{Complex, ALGEBRA_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn families_invert() {
        for fam in BasisFamily::ALL {
            let product = fam.decode_gate().matrix().mul(&fam.encode_gate().matrix());
            assert!(product.max_abs_diff(&GateKind::Identity.matrix()) <= ALGEBRA_TOL);
        }
        assert_eq!(BasisFamily::Hadamard.encode_gate(), GateKind::Hadamard);
        assert_eq!(BasisFamily::Hadamard.decode_gate(), GateKind::Hadamard);
        assert_eq!(BasisFamily::Sx.encode_gate(), GateKind::SqrtX);
        assert_eq!(BasisFamily::Sx.decode_gate(), GateKind::SqrtXInverse);
        assert_eq!("sx".parse::<BasisFamily>().unwrap(), BasisFamily::Sx);
        assert!("xs".parse::<BasisFamily>().is_err());
    }

    #[test]
    fn clean_channel_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = Statevector::from_amplitudes(&[Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)])
            .unwrap();
        let out = transmit(
            &s,
            0,
            &NoiseConfig::noiseless(),
            &EveConfig::disabled(),
            BasisFamily::Sx,
            &mut rng,
        )
        .unwrap();
        assert_eq!(out, s);
        assert!(transmit(
            &s,
            1,
            &NoiseConfig::noiseless(),
            &EveConfig::disabled(),
            BasisFamily::Sx,
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn matched_eve_guess_is_invisible() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for fam in BasisFamily::ALL {
            for bit in [0u8, 1] {
                for flag in [0u8, 1] {
                    let mut s = Statevector::basis(&[bit]).unwrap();
                    if flag == 1 {
                        s = s.apply_1q(fam.encode_gate(), 0).unwrap();
                    }
                    for _ in 0..50 {
                        let (_, fwd) = intercept_resend(&s, 0, fam, flag, &mut rng).unwrap();
                        let bob = if flag == 1 {
                            fwd.apply_1q(fam.decode_gate(), 0).unwrap()
                        } else {
                            fwd
                        };
                        assert!((bob.probabilities()[usize::from(bit)] - 1.0).abs() < ALGEBRA_TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn sift_cases() {
        assert_eq!(
            sift(&[0, 1, 0, 1], &[0, 1, 0, 1]).unwrap(),
            vec![0, 1, 2, 3]
        );
        assert!(sift(&[1, 0, 0, 1], &[0, 1, 1, 0]).unwrap().is_empty());
        // q3..q0 = 0011 vs 0101, stored q0 first
        assert_eq!(sift(&[1, 1, 0, 0], &[1, 0, 1, 0]).unwrap(), vec![0, 3]);
        assert!(matches!(
            sift(&[0], &[0, 1]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn qber_cases() {
        assert_eq!(qber(&[0, 1, 1], &[0, 1, 1]).unwrap(), 0.0);
        assert_eq!(qber(&[0, 1, 1], &[1, 0, 0]).unwrap(), 1.0);
        assert!(matches!(qber(&[], &[]), Err(Error::Empty)));
        assert!(qber(&[0], &[0, 0]).is_err());
    }

    #[test]
    fn noise_config_bounds() {
        assert!(NoiseConfig::new(0.05, 0.0).is_ok());
        assert!(NoiseConfig::new(-0.01, 0.0).is_err());
        assert!(NoiseConfig::new(0.0, 1.1).is_err());
    }

    #[test]
    fn message_serialization() {
        let msg = ClassicalMessage::BasisSequence {
            sender: Party::Alice,
            flags: vec![0, 1, 1],
        };
        let json = serde_json::to_string(&msg).unwrap();
        assert_eq!(
            json,
            r#"{"type":"basis_sequence","sender":"alice","flags":"011"}"#
        );
        assert_eq!(
            serde_json::from_str::<ClassicalMessage>(&json).unwrap(),
            msg
        );
        assert!(ClassicalMessage::match_indices(vec![0, 2, 2], 5).is_err());
        assert!(ClassicalMessage::match_indices(vec![0, 5], 5).is_err());
        let m = ClassicalMessage::match_indices(vec![1, 4], 5).unwrap();
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"type":"match_indices","indices":[1,4]}"#
        );
    }
}
