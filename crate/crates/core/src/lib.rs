//! Desk-scale quantum key distribution lab.
//!
//! Simulates BB84 and E91 rounds exactly at the statevector level under two
//! control-signal families (Hadamard, and SX with its inverse), with optional
//! depolarizing/readout noise and an intercept-resend eavesdropper, then
//! checks the sifted keys with entropy, IID and error-rate measures.

pub mod bb84;
pub mod bits;
pub mod channel;
pub mod e91;
mod error;
pub mod harness;
pub mod protocol;
pub mod qsim;
pub mod randtest;

pub use channel::{BasisFamily, EveConfig, NoiseConfig};
pub use error::{Error, Result};
pub use protocol::{Protocol, ProtocolTranscript, RoundRecord};
pub use qsim::{GateKind, Statevector};
