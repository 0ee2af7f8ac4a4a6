//! Dedekind eta products `prod_d eta(d tau)^(e_d)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::QSeries;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaProduct {
    factors: Vec<(u64, i64)>,
}

impl EtaProduct {
    /// Factors `(d, e_d)`; repeated dilations are merged and zero exponents dropped.
    pub fn new(factors: &[(u64, i64)]) -> Result<Self> {
        let mut merged: Vec<(u64, i64)> = Vec::new();
        for &(d, e) in factors {
            if d == 0 {
                return Err(Error::invalid("eta dilation must be positive"));
            }
            match merged.iter_mut().find(|(dd, _)| *dd == d) {
                Some(slot) => slot.1 += e,
                None => merged.push((d, e)),
            }
        }
        merged.retain(|&(_, e)| e != 0);
        merged.sort_unstable();
        Ok(EtaProduct { factors: merged })
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// Twice the weight, `sum e_d`.
    pub fn double_weight(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// `(sum d e_d, 24)`, the order of vanishing at infinity as a fraction.
    pub fn leading_exponent(&self) -> (i64, i64) {
        let s: i64 = self.factors.iter().map(|&(d, e)| d as i64 * e).sum();
        (s, 24)
    }
}

impl fmt::Display for EtaProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(d, e)| format!("{d}^{e}")).collect();
        write!(f, "eta[{}]", parts.join(","))
    }
}

/// `prod_{n >= 1} (1 - q^n)` to precision `p`, from the pentagonal number theorem.
pub(crate) fn euler_function(p: usize) -> Vec<(usize, i64)> {
    let mut terms = vec![(0usize, 1i64)];
    let mut k: usize = 1;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let a = k * (3 * k - 1) / 2;
        let b = k * (3 * k + 1) / 2;
        if a >= p {
            break;
        }
        terms.push((a, sign));
        if b < p {
            terms.push((b, sign));
        }
        k += 1;
    }
    terms.sort_unstable();
    terms
}

/// `f^e` for a sparse integer series with `f(0) = 1`, by the recurrence
/// `n g_n = sum_{k=1}^n ((e + 1) k - n) f_k g_{n-k}` (any sign of `e`).
fn sparse_power(f: &[(usize, i64)], e: i64, p: usize) -> Vec<BigInt> {
    debug_assert_eq!(f.first(), Some(&(0, 1)));
    let mut g = vec![BigInt::zero(); p];
    g[0] = BigInt::one();
    for n in 1..p {
        let mut acc = BigInt::zero();
        for &(k, fk) in &f[1..] {
            if k > n {
                break;
            }
            let gk = &g[n - k];
            if gk.is_zero() {
                continue;
            }
            let w = ((e + 1) * k as i64 - n as i64) * fk;
            if w != 0 {
                acc += gk * w;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(n));
        debug_assert!(r.is_zero(), "inexact division in eta power recurrence");
        g[n] = q;
    }
    g
}

/// Exact q-expansion of an eta product to precision `p`.
///
/// Fails when the leading exponent `sum d e_d / 24` is not a nonnegative integer.
pub fn eta_expand(product: &EtaProduct, p: usize) -> Result<QSeries<BigInt>> {
    if p == 0 {
        return Err(Error::invalid("precision must be positive"));
    }
    let (num, den) = product.leading_exponent();
    if num % den != 0 {
        let g = num.gcd(&den);
        return Err(Error::NonIntegralLeadingExponent { numerator: num / g, denominator: den / g });
    }
    if num < 0 {
        return Err(Error::invalid(format!("eta product {product} has a pole of order {} at infinity", -num / den)));
    }
    let shift = (num / den) as usize;
    if shift >= p {
        return Ok(QSeries::zero(p));
    }
    let inner = p - shift;
    let mut acc: Option<QSeries<BigInt>> = None;
    for &(d, e) in product.factors() {
        let d = d as usize;
        let reduced = inner.div_ceil(d);
        let euler = euler_function(reduced);
        let powered = QSeries::from_coeffs(sparse_power(&euler, e, reduced))?;
        let factor = powered.dilate(d, Some(inner));
        acc = Some(match acc {
            None => factor,
            Some(a) => a.mul(&factor),
        });
    }
    let body = acc.unwrap_or_else(|| QSeries::one(inner));
    let mut coeffs = vec![BigInt::zero(); shift];
    coeffs.extend(body.into_coeffs());
    QSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries<BigInt>) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    // O(P^2) oracle: multiply out (1 - q^n) for each n, then take powers by
    // repeated multiplication.
    fn naive_eta_power(d: usize, e: u32, p: usize) -> QSeries<BigInt> {
        let mut prod = QSeries::<BigInt>::one(p);
        let mut n = d;
        while n < p {
            let mut factor = QSeries::<BigInt>::one(p);
            factor.set_coeff(n, BigInt::from(-1));
            prod = prod.mul(&factor);
            n += d;
        }
        let mut out = QSeries::<BigInt>::one(p);
        for _ in 0..e {
            out = out.mul(&prod);
        }
        out
    }

    #[test]
    fn delta_leading_terms() {
        let delta = eta_expand(&EtaProduct::new(&[(1, 24)]).unwrap(), 4).unwrap();
        assert_eq!(ints(&delta), vec![0, 1, -24, 252]);
    }

    #[test]
    fn level_eleven_leading_terms() {
        let f = eta_expand(&EtaProduct::new(&[(1, 2), (11, 2)]).unwrap(), 4).unwrap();
        assert_eq!(ints(&f), vec![0, 1, -2, -1]);
    }

    #[test]
    fn rejects_fractional_leading_exponent() {
        let err = eta_expand(&EtaProduct::new(&[(1, 1)]).unwrap(), 4).unwrap_err();
        assert!(matches!(err, Error::NonIntegralLeadingExponent { numerator: 1, denominator: 24 }));
    }

    #[test]
    fn delta_matches_naive_product() {
        let p = 200;
        let fast = eta_expand(&EtaProduct::new(&[(1, 24)]).unwrap(), p).unwrap();
        let naive = naive_eta_power(1, 24, p);
        for n in 1..p {
            assert_eq!(fast.coeff(n), naive.coeff(n - 1), "n = {n}");
        }
    }

    #[test]
    fn negative_exponents_invert() {
        // eta(tau)^24 / eta(2 tau)^24 * eta(2 tau)^24 = eta(tau)^24
        let p = 80;
        let quotient = EtaProduct::new(&[(1, 48), (2, -24)]).unwrap();
        let q = eta_expand(&quotient, p).unwrap();
        let e2 = eta_expand(&EtaProduct::new(&[(2, 24)]).unwrap(), p).unwrap();
        let delta = eta_expand(&EtaProduct::new(&[(1, 24)]).unwrap(), p).unwrap();
        // q has leading exponent 0; shift e2 back into alignment
        let product = q.mul(&e2);
        assert_eq!(product, delta.mul(&delta).truncate(p));
    }

    #[test]
    fn pentagonal_signs() {
        let e = euler_function(30);
        assert_eq!(e, vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1), (22, 1), (26, 1)]);
    }
}
