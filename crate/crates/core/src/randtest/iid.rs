//! Chi-square independence and goodness-of-fit tests, and the longest
//! repeated substring test, for binary data.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_ur;

use super::suffix::longest_repeat;
use crate::bits;
use crate::error::{Error, Result};

pub const IND_MIN_LEN: usize = 200;
pub const GOF_MIN_LEN: usize = 100;
pub const LRS_MIN_LEN: usize = 1_000;
const GOF_SEGMENTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestStat {
    pub p_value: f64,
    /// Chi-square value for IND/GOF, repeat length for LRS.
    pub statistic: f64,
    /// Set when expected counts vanish; `p_value` is then 0.
    pub degenerate: bool,
}

impl TestStat {
    fn degenerate() -> Self {
        TestStat {
            p_value: 0.0,
            statistic: f64::INFINITY,
            degenerate: true,
        }
    }
}

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi_square_sf(statistic: f64, df: f64) -> f64 {
    if statistic <= 0.0 {
        1.0
    } else if !statistic.is_finite() {
        0.0
    } else {
        gamma_ur(df / 2.0, statistic / 2.0)
    }
}

fn require(bits: &[u8], min: usize) -> Result<()> {
    if bits.len() < min {
        Err(Error::TooShort {
            len: bits.len(),
            min,
        })
    } else {
        Ok(())
    }
}

/// Independence of adjacent bits over non-overlapping pairs, 1 d.f.
pub fn ind_test(bits: &[u8]) -> Result<TestStat> {
    require(bits, IND_MIN_LEN)?;
    let p1 = bits::ones(bits) as f64 / bits.len() as f64;
    if p1 == 0.0 || p1 == 1.0 {
        return Ok(TestStat::degenerate());
    }
    let marginal = [1.0 - p1, p1];
    let mut observed = [[0usize; 2]; 2];
    for pair in bits.chunks_exact(2) {
        observed[usize::from(pair[0])][usize::from(pair[1])] += 1;
    }
    let pairs = (bits.len() / 2) as f64;
    let mut t = 0.0;
    for (a, row) in observed.iter().enumerate() {
        for (b, &o) in row.iter().enumerate() {
            let e = pairs * marginal[a] * marginal[b];
            t += (o as f64 - e).powi(2) / e;
        }
    }
    Ok(TestStat {
        p_value: chi_square_sf(t, 1.0),
        statistic: t,
        degenerate: false,
    })
}

/// Ones counts across ten equal segments, 9 d.f.
pub fn gof_test(bits: &[u8]) -> Result<TestStat> {
    require(bits, GOF_MIN_LEN)?;
    let m = bits.len() / GOF_SEGMENTS;
    let used = &bits[..m * GOF_SEGMENTS];
    let p1 = bits::ones(used) as f64 / used.len() as f64;
    if p1 == 0.0 || p1 == 1.0 {
        return Ok(TestStat::degenerate());
    }
    let expected = p1 * m as f64;
    let t: f64 = used
        .chunks_exact(m)
        .map(|seg| (bits::ones(seg) as f64 - expected).powi(2))
        .sum::<f64>()
        / (expected * (1.0 - p1));
    Ok(TestStat {
        p_value: chi_square_sf(t, (GOF_SEGMENTS - 1) as f64),
        statistic: t,
        degenerate: false,
    })
}

/// Probability of at least one repeat of the observed longest length `W`
/// under IID bits: `1 − (1 − p_col^W)^C(L−W+1, 2)`.
pub fn lrs_test(bits: &[u8]) -> Result<TestStat> {
    require(bits, LRS_MIN_LEN)?;
    let w = longest_repeat(bits);
    Ok(TestStat {
        p_value: lrs_p_value(bits, w),
        statistic: w as f64,
        degenerate: false,
    })
}

pub(crate) fn lrs_p_value(bits: &[u8], w: usize) -> f64 {
    let len = bits.len() as f64;
    let p1 = bits::ones(bits) as f64 / len;
    let p_col = p1 * p1 + (1.0 - p1) * (1.0 - p1);
    let starts = len - w as f64 + 1.0;
    let pairs = starts * (starts - 1.0) / 2.0;
    let p_w = p_col.powi(w as i32);
    (-(pairs * (-p_w).ln_1p()).exp_m1()).clamp(0.0, 1.0)
}
