use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use super::Rational;
use crate::error::{Error, Result};

// All B_j for j < len, with the B_1 = -1/2 convention the recurrence needs.
static CACHE: LazyLock<RwLock<Vec<Rational>>> = LazyLock::new(|| RwLock::new(vec![Rational::from_integer(1.into())]));

fn binomials(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

fn extend_to(values: &mut Vec<Rational>, k: usize) {
    while values.len() <= k {
        let m = values.len();
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let binom = binomials(m + 1);
        let mut acc = Rational::zero();
        for (j, b) in values.iter().enumerate() {
            if !b.is_zero() {
                acc += b * Rational::from_integer(binom[j].clone());
            }
        }
        values.push(-acc / Rational::from_integer(binom[m].clone()));
    }
}

/// Exact Bernoulli number `B_k` for even `k >= 2`.
pub fn bernoulli(k: u32) -> Result<Rational> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::invalid(format!("bernoulli index must be even and >= 2, got {k}")));
    }
    let k = k as usize;
    if let Some(b) = CACHE.read().expect("bernoulli cache poisoned").get(k) {
        return Ok(b.clone());
    }
    let mut values = CACHE.write().expect("bernoulli cache poisoned");
    extend_to(&mut values, k);
    Ok(values[k].clone())
}

/// `zeta(1 - k) = -B_k / k` for even `k >= 2`.
pub fn zeta_at_one_minus(k: u32) -> Result<Rational> {
    Ok(-bernoulli(k)? / Rational::from_integer(BigInt::from(k)))
}
