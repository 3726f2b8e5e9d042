//! Types and seeding shared by the BB84 and E91 engines.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::channel::{qber, sift, BasisFamily, ClassicalMessage, Party};
use crate::error::{Error, Result};

/// Per-round random stream.
pub type RoundRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Bb84,
    E91,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Bb84 => "bb84",
            Protocol::E91 => "e91",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bb84" => Ok(Protocol::Bb84),
            "e91" => Ok(Protocol::E91),
            other => Err(Error::Config(format!("unknown protocol {other:?}"))),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of round `index`: `splitmix64(splitmix64(master_seed) ^ index)`.
///
/// Each round owns its stream, so rounds can be evaluated in any order.
pub fn round_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ index)
}

/// ChaCha8 stream seeded from [`round_seed`].
pub fn round_rng(master_seed: u64, index: u64) -> RoundRng {
    ChaCha8Rng::seed_from_u64(round_seed(master_seed, index))
}

/// Transcript of one protocol round. Flags are 1 when the party applied its
/// family gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub index: usize,
    pub alice_bit: u8,
    pub alice_flag: u8,
    pub bob_flag: u8,
    pub bob_bit: u8,
    pub sifted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub protocol: Protocol,
    pub family: BasisFamily,
    pub master_seed: u64,
    pub rounds: Vec<RoundRecord>,
    #[serde(with = "bits::ascii_serde")]
    pub alice_key: Vec<u8>,
    #[serde(with = "bits::ascii_serde")]
    pub bob_key: Vec<u8>,
}

impl ProtocolTranscript {
    /// Sifts `rounds` by flag agreement and assembles both keys.
    pub(crate) fn assemble(
        protocol: Protocol,
        family: BasisFamily,
        master_seed: u64,
        rounds: Vec<RoundRecord>,
    ) -> Result<Self> {
        let alice_flags: Vec<u8> = rounds.iter().map(|r| r.alice_flag).collect();
        let bob_flags: Vec<u8> = rounds.iter().map(|r| r.bob_flag).collect();
        let kept = sift(&alice_flags, &bob_flags)?;
        let alice_key = kept.iter().map(|&i| rounds[i].alice_bit).collect();
        let bob_key = kept.iter().map(|&i| rounds[i].bob_bit).collect();
        Ok(ProtocolTranscript {
            protocol,
            family,
            master_seed,
            rounds,
            alice_key,
            bob_key,
        })
    }

    pub fn sift_fraction(&self) -> f64 {
        self.alice_key.len() as f64 / self.rounds.len() as f64
    }

    /// Sifted-key error rate, `None` when nothing survived sifting.
    pub fn qber(&self) -> Option<f64> {
        qber(&self.alice_key, &self.bob_key).ok()
    }

    pub fn error_count(&self) -> usize {
        self.alice_key
            .iter()
            .zip(&self.bob_key)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// The classical-channel exchange that produced the sifted keys.
    pub fn classical_messages(&self) -> Vec<ClassicalMessage> {
        let alice: Vec<u8> = self.rounds.iter().map(|r| r.alice_flag).collect();
        let bob: Vec<u8> = self.rounds.iter().map(|r| r.bob_flag).collect();
        let indices = self
            .rounds
            .iter()
            .filter(|r| r.sifted)
            .map(|r| r.index)
            .collect();
        vec![
            ClassicalMessage::BasisSequence {
                sender: Party::Alice,
                flags: alice,
            },
            ClassicalMessage::BasisSequence {
                sender: Party::Bob,
                flags: bob,
            },
            ClassicalMessage::MatchIndices { indices },
        ]
    }
}

/// Runs `n_rounds` rounds in parallel, each with its own stream, and returns
/// them in index order.
pub(crate) fn run_rounds<F>(n_rounds: usize, master_seed: u64, round: F) -> Result<Vec<RoundRecord>>
where
    F: Fn(&mut RoundRng) -> Result<RoundRecord> + Sync,
{
    if n_rounds == 0 {
        return Err(Error::ZeroRounds);
    }
    (0..n_rounds)
        .into_par_iter()
        .map(|i| {
            let mut rng = round_rng(master_seed, i as u64);
            round(&mut rng).map(|r| RoundRecord { index: i, ..r })
        })
        .collect()
}
