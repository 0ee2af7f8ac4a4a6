//! Eisenstein series `E_k^{phi,t}` and the bases they form on `Gamma0(N)`.
//!
//! `E_k^phi = delta_{phi,1} zeta(1-k) + 2 sum sigma_{k-1}^phi(n) q^n` with
//! `sigma_{k-1}^phi(n) = sum_{d | n} phi(d) conj(phi)(n/d) d^(k-1)`, and
//! `E_k^{phi,t}(tau) = E_k^phi(t tau)`. In weight 2 the trivial character is
//! replaced by `E2(tau) - t E2(t tau)` with `E2 = 1 - 24 sum sigma_1(n) q^n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::divisors;
use crate::characters::{enumerate_primitive, DirichletCharacter};
use crate::error::{Error, Result};
use crate::exact::{zeta_at_one_minus, CycNumber, Rational};
use crate::qseries::QSeries;
use crate::scalar::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EisensteinKind {
    /// `k > 2`, any primitive `phi`.
    General,
    /// `k = 2` with nontrivial `phi`.
    Weight2Twisted,
    /// `E2(tau) - t E2(t tau)` for `t > 1`.
    Weight2Trivial,
    /// The quasimodular `E2` itself.
    RawE2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinAtom {
    weight: u32,
    character: DirichletCharacter,
    t: u64,
    kind: EisensteinKind,
}

impl EisensteinAtom {
    /// `E_k^{phi,t}` for a primitive `phi`; the kind follows from `(k, phi, t)`.
    pub fn new(weight: u32, character: DirichletCharacter, t: u64) -> Result<Self> {
        if weight < 2 || weight % 2 == 1 {
            return Err(Error::invalid(format!("Eisenstein weight must be even and >= 2, got {weight}")));
        }
        if t == 0 {
            return Err(Error::invalid("dilation must be positive"));
        }
        if !character.is_primitive() {
            return Err(Error::invalid(format!(
                "character mod {} is not primitive (conductor {})",
                character.modulus(),
                character.conductor()
            )));
        }
        let kind = match (weight, character.is_trivial()) {
            (2, true) if t == 1 => return Err(Error::invalid("E2(tau) - E2(tau) vanishes; the twist needs t > 1")),
            (2, true) => EisensteinKind::Weight2Trivial,
            (2, false) => EisensteinKind::Weight2Twisted,
            _ => EisensteinKind::General,
        };
        Ok(EisensteinAtom { weight, character, t, kind })
    }

    pub fn e2() -> Self {
        EisensteinAtom { weight: 2, character: DirichletCharacter::trivial(1), t: 1, kind: EisensteinKind::RawE2 }
    }

    pub fn e2_twist(t: u64) -> Result<Self> {
        Self::new(2, DirichletCharacter::trivial(1), t)
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.character
    }

    pub fn dilation(&self) -> u64 {
        self.t
    }

    pub fn kind(&self) -> EisensteinKind {
        self.kind
    }

    /// `t u^2`, which must divide the level.
    pub fn level_divisor(&self) -> u64 {
        let u = self.character.modulus();
        self.t * u * u
    }

    /// Conductor of the coefficient field, the order of `phi`.
    pub fn coefficient_conductor(&self) -> u64 {
        self.character.order()
    }

    pub fn expand(&self, precision: usize) -> QSeries<CycNumber> {
        eisenstein_expand(self, precision)
    }
}

impl fmt::Display for EisensteinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EisensteinKind::RawE2 => f.write_str("E2"),
            EisensteinKind::Weight2Trivial => write!(f, "E2twist[{}]", self.t),
            _ => write!(f, "E[{},{},{}]", self.weight, self.character, self.t),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DivisorSumSpec {
    pub exponent: u32,
    pub character: DirichletCharacter,
}

pub fn sigma_phi(spec: &DivisorSumSpec, n: u64) -> CycNumber {
    assert!(n >= 1, "divisor sums start at n = 1");
    let chi = &spec.character;
    let order = chi.order();
    let mut counts = vec![BigInt::zero(); order as usize];
    for d in divisors(n) {
        let (Some(a), Some(b)) = (chi.value_exponent(d as i64), chi.value_exponent((n / d) as i64)) else {
            continue;
        };
        let e = (a + order - b) % order;
        counts[e as usize] += num_traits::pow(BigInt::from(d), spec.exponent as usize);
    }
    CycNumber::from_zeta_counts(order, &counts)
}

/// Power table `d^e` for `d < p`.
fn powers(p: usize, e: u32) -> Vec<BigInt> {
    (0..p).map(|d| num_traits::pow(BigInt::from(d), e as usize)).collect()
}

/// `sigma_{e}(n)` for `n < p` by a divisor sieve.
fn sigma_table(p: usize, e: u32) -> Vec<BigInt> {
    let pw = powers(p, e);
    let mut out = vec![BigInt::zero(); p];
    for (d, w) in pw.iter().enumerate().skip(1) {
        for n in (d..p).step_by(d) {
            out[n] += w;
        }
    }
    out
}

/// Raw `E2 = 1 - 24 sum sigma_1(n) q^n`.
pub fn e2_series(precision: usize) -> QSeries<Rational> {
    let sigma = sigma_table(precision, 1);
    QSeries::from_fn(precision, |n| if n == 0 { Rational::one() } else { Rational::from_integer(&sigma[n] * -24) })
}

/// Undilated `E_k^phi`.
fn e_k_phi(k: u32, chi: &DirichletCharacter, p: usize) -> QSeries<CycNumber> {
    if chi.is_trivial() {
        let sigma = sigma_table(p, k - 1);
        let constant = zeta_at_one_minus(k).expect("weight is even and at least 2");
        return QSeries::from_fn(p, |n| {
            if n == 0 {
                CycNumber::from_rational(constant.clone())
            } else {
                CycNumber::from_bigint(&(&sigma[n] * 2))
            }
        });
    }
    let order = chi.order() as usize;
    let pw = powers(p, k - 1);
    let exps: Vec<Option<u64>> = (0..p).map(|n| chi.value_exponent(n as i64)).collect();
    let mut counts = vec![vec![BigInt::zero(); order]; p];
    for d in 1..p {
        let Some(a) = exps[d] else { continue };
        for m in 1..=(p - 1) / d {
            let Some(b) = exps[m] else { continue };
            let e = (a as usize + order - b as usize) % order;
            counts[d * m][e] += &pw[d];
        }
    }
    QSeries::from_fn(p, |n| {
        if n == 0 {
            return CycNumber::zero();
        }
        for c in counts[n].iter_mut() {
            *c *= 2;
        }
        CycNumber::from_zeta_counts(order as u64, &counts[n])
    })
}

pub fn eisenstein_expand(atom: &EisensteinAtom, precision: usize) -> QSeries<CycNumber> {
    assert!(precision > 0, "q-series precision must be positive");
    let t = atom.t as usize;
    match atom.kind {
        EisensteinKind::RawE2 => e2_series(precision).to_cyc(),
        EisensteinKind::Weight2Trivial => {
            let e2 = e2_series(precision);
            let dilated = e2_series(precision.div_ceil(t)).dilate(t, Some(precision));
            let mut out = e2;
            out.add_scaled_assign(&Rational::from_integer(-BigInt::from(atom.t)), &dilated);
            out.to_cyc()
        }
        EisensteinKind::General | EisensteinKind::Weight2Twisted => {
            e_k_phi(atom.weight, &atom.character, precision.div_ceil(t)).dilate(t, Some(precision))
        }
    }
}

/// Pairs `(phi, t)` with `phi` primitive mod `u` and `t u^2 | N`, ordered by
/// `u`, then character index, then `t`. Weight 2 omits `(1, 1)`.
pub fn enumerate_a(level: u64, weight: u32) -> Result<Vec<(DirichletCharacter, u64)>> {
    if level == 0 || weight < 2 || weight % 2 == 1 {
        return Err(Error::invalid(format!("need N >= 1 and even k >= 2, got N = {level}, k = {weight}")));
    }
    let mut out = Vec::new();
    for u in divisors(level) {
        if !level.is_multiple_of(u * u) {
            continue;
        }
        for chi in enumerate_primitive(u) {
            for t in divisors(level / (u * u)) {
                if weight == 2 && u == 1 && t == 1 {
                    continue;
                }
                out.push((chi.clone(), t));
            }
        }
    }
    Ok(out)
}

pub fn eisenstein_basis(level: u64, weight: u32) -> Result<Vec<EisensteinAtom>> {
    enumerate_a(level, weight)?.into_iter().map(|(chi, t)| EisensteinAtom::new(weight, chi, t)).collect()
}
