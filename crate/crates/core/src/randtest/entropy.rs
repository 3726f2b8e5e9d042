use statrs::function::gamma::ln_gamma;

use crate::bits;
use crate::error::{Error, Result};

/// z-value of the one-sided 99% upper bound.
const Z_99: f64 = 2.576;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MinEntropy {
    pub entropy_per_bit: f64,
    /// Upper confidence bound on the modal symbol's probability.
    pub p_upper: f64,
}

/// Most-common-value min-entropy estimate.
pub fn mcv_min_entropy(bits: &[u8]) -> Result<MinEntropy> {
    let len = bits.len();
    if len < 2 {
        return Err(Error::TooShort { len, min: 2 });
    }
    let ones = bits::ones(bits);
    let modal = ones.max(len - ones) as f64;
    let p_hat = modal / len as f64;
    let p_upper = (p_hat + Z_99 * (p_hat * (1.0 - p_hat) / (len - 1) as f64).sqrt()).min(1.0);
    Ok(MinEntropy {
        // max(0.0) turns -0.0 into 0.0
        entropy_per_bit: (-p_upper.log2()).max(0.0),
        p_upper,
    })
}

/// Two-sided exact binomial test of the ones count against Binomial(L, ½):
/// `min(1, 2·P(X ≥ max(k, L − k)))`.
pub fn binomial_balance_p(bits: &[u8]) -> Result<f64> {
    if bits.is_empty() {
        return Err(Error::Empty);
    }
    let ones = bits::ones(bits);
    Ok(binomial_two_sided(bits.len() as u64, ones as u64))
}

pub(crate) fn binomial_two_sided(n: u64, k: u64) -> f64 {
    let m = k.max(n - k);
    (2.0 * upper_tail_half(n, m)).min(1.0)
}

/// `P(X ≥ m)` for `X ~ Binomial(n, ½)` with `m ≥ n/2`, summed in log space.
fn upper_tail_half(n: u64, m: u64) -> f64 {
    let nf = n as f64;
    let log_pmf_m = ln_gamma(nf + 1.0)
        - ln_gamma(m as f64 + 1.0)
        - ln_gamma((n - m) as f64 + 1.0)
        - nf * std::f64::consts::LN_2;
    // terms are non-increasing from m upwards, so scale by the first one
    let mut rel = 1.0;
    let mut sum = 1.0;
    for j in m..n {
        rel *= (n - j) as f64 / (j + 1) as f64;
        sum += rel;
        if rel < sum * 1e-18 {
            break;
        }
    }
    (log_pmf_m + sum.ln()).exp()
}
