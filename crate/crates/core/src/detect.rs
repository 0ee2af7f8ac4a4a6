//! MacMahon partition functions, the `G_k^(N)` and `f_{k,l}^(N)` families,
//! prime detection and the census of primes where a coefficient vanishes.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{gcd, prime_table};
use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};
use crate::qseries::QSeries;
use crate::scalar::Ring;

/// `M_a(n)` for `0 <= n < P`, the coefficients of `U_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacMahonTable {
    a: u32,
    values: Vec<BigInt>,
}

impl MacMahonTable {
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn precision(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, n: usize) -> &BigInt {
        &self.values[n]
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn series(&self) -> QSeries<BigInt> {
        QSeries::from_coeffs(self.values.clone()).expect("table is nonempty")
    }
}

/// Tables for `M_1, ..., M_a`, all from one pass.
///
/// Chains are built by increasing largest part `s`: after step `s`, `b[j]`
/// counts chains of length `j` with all parts `<= s`, and step `s` adds
/// `b[j-1] * q^s / (1 - q^s)^2` to `b[j]`.
pub fn macmahon_tables(a: u32, precision: usize) -> Result<Vec<MacMahonTable>> {
    if a == 0 || precision < 2 {
        return Err(Error::invalid("MacMahon tables need a >= 1 and precision >= 2"));
    }
    let a = a as usize;
    let mut b = vec![vec![BigInt::zero(); precision]; a + 1];
    b[0][0] = BigInt::one();
    let mut tmp = vec![BigInt::zero(); precision];
    for s in 1..precision {
        for j in (1..=a).rev() {
            // A chain of length j with largest part s needs n >= j(j+1)/2 - j + js.
            let start = j * (j - 1) / 2 + s;
            if start >= precision {
                continue;
            }
            for x in tmp.iter_mut() {
                x.set_zero();
            }
            let mut any = false;
            for n in start..precision {
                let src = &b[j - 1][n - s];
                if !src.is_zero() {
                    tmp[n].clone_from(src);
                    any = true;
                }
            }
            if !any {
                continue;
            }
            // Divide by (1 - q^s) twice.
            for _ in 0..2 {
                for n in start + s..precision {
                    let (lo, hi) = tmp.split_at_mut(n);
                    if !lo[n - s].is_zero() {
                        hi[0] += &lo[n - s];
                    }
                }
            }
            for (dst, x) in b[j][start..].iter_mut().zip(&tmp[start..]) {
                if !x.is_zero() {
                    *dst += x;
                }
            }
        }
    }
    Ok(b.into_iter().enumerate().skip(1).map(|(j, values)| MacMahonTable { a: j as u32, values }).collect())
}

pub fn macmahon(a: u32, precision: usize) -> Result<MacMahonTable> {
    Ok(macmahon_tables(a, precision)?.pop().expect("a >= 1"))
}

/// `v(n) = (n^2 - 3n + 2) M_1(n) - 8 M_2(n)`, which vanishes exactly at primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MacMahonVerdict {
    pub n: u64,
    pub value: BigInt,
    pub prime: bool,
}

pub fn macmahon_prime_test(n: u64) -> Result<MacMahonVerdict> {
    if n < 2 {
        return Err(Error::invalid("the MacMahon test needs n >= 2"));
    }
    let t = macmahon_tables(2, n as usize + 1)?;
    Ok(macmahon_verdict(&t[0], &t[1], n))
}

/// `v(n)` for every `2 <= n < nmax`, sharing one pair of tables.
pub fn macmahon_prime_tests(nmax: u64) -> Result<Vec<MacMahonVerdict>> {
    let t = macmahon_tables(2, (nmax as usize).max(2))?;
    Ok((2..nmax).map(|n| macmahon_verdict(&t[0], &t[1], n)).collect())
}

fn macmahon_verdict(m1: &MacMahonTable, m2: &MacMahonTable, n: u64) -> MacMahonVerdict {
    let c = BigInt::from(n) * BigInt::from(n) - BigInt::from(3 * n) + 2;
    let value: BigInt = c * m1.value(n as usize) - BigInt::from(8) * m2.value(n as usize);
    MacMahonVerdict { n, prime: value.is_zero(), value }
}

/// The operator form `(D^2 - 3D + 2) U_1 - 8 U_2`.
pub fn macmahon_detector(precision: usize) -> Result<QSeries<BigInt>> {
    let t = macmahon_tables(2, precision)?;
    let u1 = t[0].series();
    let mut f = u1.apply_d(2);
    f.add_scaled_assign(&BigInt::from(-3), &u1.apply_d(1));
    f.add_scaled_assign(&BigInt::from(2), &u1);
    f.add_scaled_assign(&BigInt::from(-8), &t[1].series());
    Ok(f)
}

/// `G_k^(N) = sum_n (sum_{d | n, gcd(n/d, N) = 1} d^(k-1)) q^n`.
pub fn g_series(k: u32, level: u64, precision: usize) -> Result<QSeries<BigInt>> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::invalid(format!("G_k needs even k >= 2, got {k}")));
    }
    if level == 0 {
        return Err(Error::invalid("level must be positive"));
    }
    let mut c = vec![BigInt::zero(); precision.max(1)];
    for d in 1..precision {
        let w = BigInt::from(d).pow(k - 1);
        for e in (1..).take_while(|e| d * e < precision) {
            if gcd(e as u64, level) == 1 {
                c[d * e] += &w;
            }
        }
    }
    QSeries::from_coeffs(c)
}

/// `(D^l + 1) G_{k+1}^(N) - (D^k + 1) G_{l+1}^(N)` for odd `l > k`.
pub fn f_kl(k: u32, l: u32, level: u64, precision: usize) -> Result<QSeries<BigInt>> {
    if k.is_multiple_of(2) || l.is_multiple_of(2) || l <= k {
        return Err(Error::invalid(format!("f_(k,l) needs odd k < l, got k = {k}, l = {l}")));
    }
    let gk = g_series(k + 1, level, precision)?;
    let gl = g_series(l + 1, level, precision)?;
    Ok(gk.apply_d(l).add(&gk).sub(&gl.apply_d(k)).sub(&gl))
}

/// Which `2 <= n <= X` break the rule "`a(n) = 0` iff `n` is a prime not dividing `N`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectVerdict {
    pub level: u64,
    pub bound: u64,
    /// Primes `p` not dividing `N` with `a(p) != 0`.
    pub nonvanishing_primes: Vec<u64>,
    /// Other `n >= 2` with `a(n) = 0`.
    pub vanishing_others: Vec<u64>,
}

impl DetectVerdict {
    pub fn prime_detecting(&self) -> bool {
        self.nonvanishing_primes.is_empty() && self.vanishing_others.is_empty()
    }
}

impl fmt::Display for DetectVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "X={} N={}", self.bound, self.level)?;
        writeln!(f, "prime_detecting: {}", self.prime_detecting())?;
        writeln!(f, "nonvanishing_primes: {}", join(&self.nonvanishing_primes))?;
        writeln!(f, "vanishing_others: {}", join(&self.vanishing_others))
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

pub fn prime_detect_verdict<T: Ring>(f: &QSeries<T>, level: u64, bound: u64) -> Result<DetectVerdict> {
    check_precision(f, bound)?;
    let primes = prime_table(bound as usize);
    let mut verdict = DetectVerdict { level, bound, nonvanishing_primes: Vec::new(), vanishing_others: Vec::new() };
    for n in 2..=bound {
        let zero = f.coeffs()[n as usize].is_zero();
        let good = primes[n as usize] && !level.is_multiple_of(n);
        match (good, zero) {
            (true, false) => verdict.nonvanishing_primes.push(n),
            (false, true) => verdict.vanishing_others.push(n),
            _ => {}
        }
    }
    Ok(verdict)
}

fn check_precision<T: Ring>(f: &QSeries<T>, bound: u64) -> Result<()> {
    if (f.precision() as u64) <= bound {
        return Err(Error::InsufficientPrecision { required: bound as usize + 1, available: f.precision() });
    }
    Ok(())
}

/// Listed zeros beyond this many are summarized by a count.
pub const ZERO_LIST_LIMIT: usize = 100;

/// Primes `p <= X`, `p` not dividing `N`, split by whether `a_f(p)` vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport {
    pub bound: u64,
    pub level: u64,
    pub delta: Rational,
    pub zero_primes: Vec<u64>,
    pub nonzero: usize,
    /// `(X / log X) / eps(X)^delta`, for display only.
    pub bound_value: f64,
}

impl CensusReport {
    pub fn considered(&self) -> usize {
        self.zero_primes.len() + self.nonzero
    }

    /// Unreduced, so both counts stay visible.
    pub fn nonzero_density(&self) -> (usize, usize) {
        (self.nonzero, self.considered())
    }

    /// Some prime not dividing `N` has `a_f(p) != 0`.
    pub fn has_nonvanishing_prime(&self) -> bool {
        self.nonzero > 0
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "X={} N={} delta={}", self.bound, self.level, format_rational(&self.delta))?;
        writeln!(f, "zeros: {}", self.zero_primes.len())?;
        let mut list = String::from("zero_list:");
        for p in self.zero_primes.iter().take(ZERO_LIST_LIMIT) {
            let _ = write!(list, " {p}");
        }
        if self.zero_primes.len() > ZERO_LIST_LIMIT {
            let _ = write!(list, " ... (+{} more)", self.zero_primes.len() - ZERO_LIST_LIMIT);
        }
        writeln!(f, "{list}")?;
        let (num, den) = self.nonzero_density();
        writeln!(f, "nonzero_density: {num}/{den}")?;
        writeln!(f, "bound: {:.6}", self.bound_value)
    }
}

/// `eps(X) = log X / ((log log X)^2 log log log X)`.
pub fn epsilon(x: f64) -> f64 {
    let l1 = x.ln();
    let l2 = l1.ln();
    l1 / (l2 * l2 * l2.ln())
}

pub fn census<T: Ring>(f: &QSeries<T>, level: u64, bound: u64, delta: &Rational) -> Result<CensusReport> {
    if bound < 100 {
        return Err(Error::invalid(format!("census needs X >= 100, got {bound}")));
    }
    if !delta.is_positive() {
        return Err(Error::invalid("delta must be positive"));
    }
    check_precision(f, bound)?;
    let primes = prime_table(bound as usize);
    let mut zero_primes = Vec::new();
    let mut nonzero = 0;
    for p in (2..=bound).filter(|&p| primes[p as usize] && !level.is_multiple_of(p)) {
        if f.coeffs()[p as usize].is_zero() {
            zero_primes.push(p);
        } else {
            nonzero += 1;
        }
    }
    let x = bound as f64;
    let d = delta.to_f64().unwrap_or(f64::INFINITY);
    let bound_value = x / x.ln() / epsilon(x).powf(d);
    Ok(CensusReport { bound, level, delta: delta.clone(), zero_primes, nonzero, bound_value })
}
