//! Truncated q-expansions over any coefficient [`Ring`].
//!
//! A series carries its precision `P`: coefficients of `q^0 .. q^(P-1)` are
//! known, nothing beyond. Binary operations never extend precision.

mod eta;
mod io;
mod mul;

pub use eta::{eta_expand, EtaProduct};
pub use io::{parse_series_file, write_series_file, SeriesFile};
pub use mul::KARATSUBA_THRESHOLD;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::CycNumber;
use crate::scalar::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> QSeries<T> {
    /// Dense coefficients; `coeffs.len()` is the precision.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("q-series precision must be positive"));
        }
        Ok(QSeries { coeffs })
    }

    pub fn zero(precision: usize) -> Self {
        assert!(precision > 0, "q-series precision must be positive");
        QSeries { coeffs: vec![T::zero(); precision] }
    }

    pub fn constant(c: T, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        s.coeffs[0] = c;
        s
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(T::one(), precision)
    }

    /// `c q^n`, or the zero series if `n` is beyond the precision.
    pub fn monomial(c: T, n: usize, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if n < precision {
            s.coeffs[n] = c;
        }
        s
    }

    /// Builds a series from `f(n)` for `n < precision`.
    pub fn from_fn(precision: usize, f: impl FnMut(usize) -> T) -> Self {
        assert!(precision > 0, "q-series precision must be positive");
        QSeries { coeffs: (0..precision).map(f).collect() }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `q^n`, `None` when `n` is not known.
    pub fn coeff(&self, n: usize) -> Option<&T> {
        self.coeffs.get(n)
    }

    pub fn set_coeff(&mut self, n: usize, c: T) {
        self.coeffs[n] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// lcm of the coefficient conductors.
    pub fn conductor(&self) -> u64 {
        self.coeffs.iter().filter(|c| !c.is_zero()).fold(1, |m, c| crate::arith::lcm(m, c.conductor()))
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let p = precision.min(self.precision()).max(1);
        QSeries { coeffs: self.coeffs[..p].to_vec() }
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> QSeries<U> {
        QSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        QSeries { coeffs: (0..p).map(|n| self.coeffs[n].add_ref(&other.coeffs[n])).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        QSeries { coeffs: (0..p).map(|n| self.coeffs[n].sub_ref(&other.coeffs[n])).collect() }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.precision());
        }
        self.map(|x| x.mul_ref(c))
    }

    /// `self += c * other` over the common precision.
    pub fn add_scaled_assign(&mut self, c: &T, other: &Self) {
        let p = self.precision().min(other.precision());
        self.coeffs.truncate(p);
        if c.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_mul_assign(c, b);
        }
    }

    /// Cauchy product truncated at the smaller precision.
    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        QSeries { coeffs: mul::truncated_product(&self.coeffs[..p], &other.coeffs[..p], p) }
    }

    /// `D^r f` with `D = q d/dq`: the coefficient of `q^n` becomes `n^r a(n)`.
    pub fn apply_d(&self, r: u32) -> Self {
        if r == 0 {
            return self.clone();
        }
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    if c.is_zero() {
                        T::zero()
                    } else {
                        c.scale_bigint(&num_traits::pow(BigInt::from(n), r as usize))
                    }
                })
                .collect(),
        }
    }

    /// `f(t tau)`: the coefficient of `q^(nt)` is `a(n)`, the rest vanish.
    ///
    /// The result has precision `P t`, capped at `cap` when given.
    pub fn dilate(&self, t: usize, cap: Option<usize>) -> Self {
        assert!(t >= 1, "dilation factor must be positive");
        let mut p = self.precision() * t;
        if let Some(cap) = cap {
            p = p.min(cap.max(1));
        }
        let mut coeffs = vec![T::zero(); p];
        for (n, c) in self.coeffs.iter().enumerate() {
            let m = n * t;
            if m >= p {
                break;
            }
            coeffs[m] = c.clone();
        }
        QSeries { coeffs }
    }

    /// Truncated power `self^e`.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.precision());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl QSeries<CycNumber> {
    /// Coefficients as rationals when every one of them is rational.
    pub fn to_rational(&self) -> Option<QSeries<crate::exact::Rational>> {
        let coeffs = self.coeffs.iter().map(CycNumber::to_rational).collect::<Option<Vec<_>>>()?;
        Some(QSeries { coeffs })
    }
}

impl QSeries<BigInt> {
    pub fn to_cyc(&self) -> QSeries<CycNumber> {
        self.map(CycNumber::from_bigint)
    }
}

impl QSeries<crate::exact::Rational> {
    pub fn to_cyc(&self) -> QSeries<CycNumber> {
        self.map(|c| CycNumber::from_rational(c.clone()))
    }
}
