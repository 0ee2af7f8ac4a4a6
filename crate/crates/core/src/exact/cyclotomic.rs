//! Elements of `Q(zeta_M)` on the power basis `1, zeta, ..., zeta^(phi(M)-1)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{format_rational, parse_rational, Rational};
use crate::arith::{divisors, euler_phi, gcd, lcm};
use crate::error::{Error, Result};
use crate::scalar::{Field, Ring};

type Poly = Vec<i64>;

static CYCLOTOMIC: LazyLock<RwLock<HashMap<u64, Arc<Poly>>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

// z^e mod Phi_M for 0 <= e < M, each of length phi(M).
static POWER_TABLES: LazyLock<RwLock<HashMap<u64, Arc<Vec<Poly>>>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

/// Coefficients of the `m`-th cyclotomic polynomial, lowest degree first.
///
/// Computed as `(z^m - 1) / prod_{d | m, d < m} Phi_d` by exact division.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Poly> {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(p) = CYCLOTOMIC.read().expect("cyclotomic cache poisoned").get(&m) {
        return Arc::clone(p);
    }
    let mut num: Poly = vec![0; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d < m {
            let phi_d = cyclotomic_polynomial(d);
            num = divide_monic(&num, &phi_d);
        }
    }
    let result = Arc::new(num);
    CYCLOTOMIC.write().expect("cyclotomic cache poisoned").insert(m, Arc::clone(&result));
    result
}

fn divide_monic(num: &[i64], den: &[i64]) -> Poly {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

fn power_table(m: u64) -> Arc<Vec<Poly>> {
    if let Some(t) = POWER_TABLES.read().expect("power table poisoned").get(&m) {
        return Arc::clone(t);
    }
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    let mut rows = Vec::with_capacity(m as usize);
    let mut cur = vec![0i64; deg];
    cur[0] = 1;
    for _ in 0..m {
        rows.push(cur.clone());
        // multiply by z, then reduce the z^deg term
        let top = cur[deg - 1];
        for j in (1..deg).rev() {
            cur[j] = cur[j - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for j in 0..deg {
                cur[j] -= top * phi[j];
            }
        }
    }
    let table = Arc::new(rows);
    POWER_TABLES.write().expect("power table poisoned").insert(m, Arc::clone(&table));
    table
}

/// Reduces a polynomial in `zeta_m` (any length) modulo `Phi_m`.
fn reduce(mut poly: Vec<Rational>, m: u64) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    if poly.len() <= deg {
        poly.resize(deg, Rational::zero());
        return poly;
    }
    for i in (deg..poly.len()).rev() {
        if poly[i].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[i], Rational::zero());
        for (j, &coef) in phi[..deg].iter().enumerate() {
            if coef != 0 {
                poly[i - deg + j] -= &c * Rational::from_integer(BigInt::from(coef));
            }
        }
    }
    poly.truncate(deg);
    poly
}

/// Exact element of the cyclotomic field `Q(zeta_M)`.
///
/// Values that happen to be rational are always stored with conductor 1, so
/// rational arithmetic never pays for a larger field.
#[derive(Clone, Debug)]
pub struct CycNumber {
    conductor: u64,
    coords: Vec<Rational>,
}

impl CycNumber {
    pub fn from_rational(q: Rational) -> Self {
        CycNumber { conductor: 1, coords: vec![q] }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Builds an element from power-basis coordinates; the length must be `phi(M)`.
    pub fn from_coords(conductor: u64, coords: Vec<Rational>) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::invalid("conductor must be positive"));
        }
        let phi = euler_phi(conductor) as usize;
        if coords.len() != phi {
            return Err(Error::invalid(format!("Q(zeta_{conductor}) needs {phi} coordinates, got {}", coords.len())));
        }
        Ok(CycNumber { conductor, coords }.normalized())
    }

    /// `zeta_m^e`.
    pub fn zeta_power(m: u64, e: i64) -> Self {
        let e = e.rem_euclid(m as i64) as usize;
        let table = power_table(m);
        let coords = table[e].iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        CycNumber { conductor: m, coords }.normalized()
    }

    /// `sum_e counts[e] * zeta_m^e`, accumulated in integers.
    pub fn from_zeta_counts(m: u64, counts: &[BigInt]) -> Self {
        let table = power_table(m);
        let deg = table[0].len();
        let mut acc = vec![BigInt::zero(); deg];
        for (e, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (slot, &t) in acc.iter_mut().zip(&table[e % m as usize]) {
                if t != 0 {
                    *slot += c * t;
                }
            }
        }
        let coords = acc.into_iter().map(Rational::from_integer).collect();
        CycNumber { conductor: m, coords }.normalized()
    }

    pub fn field_conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    fn normalized(mut self) -> Self {
        if self.conductor != 1 && self.coords[1..].iter().all(Zero::is_zero) {
            self.coords.truncate(1);
            self.conductor = 1;
        }
        self
    }

    /// Same element written in `Q(zeta_target)`; `zeta_m -> zeta_target^(target/m)`.
    pub fn embed(&self, target: u64) -> Result<CycNumber> {
        if target == 0 || !target.is_multiple_of(self.conductor) {
            return Err(Error::ConductorMismatch { from: self.conductor, to: target });
        }
        Ok(self.embed_unchecked(target))
    }

    /// Full-length coordinates in `Q(zeta_target)`, without the rational shortcut.
    pub fn coords_in(&self, target: u64) -> Result<Vec<Rational>> {
        let e = self.embed(target)?;
        if e.conductor == target {
            return Ok(e.coords);
        }
        let mut coords = vec![Rational::zero(); euler_phi(target) as usize];
        coords[0] = e.coords[0].clone();
        Ok(coords)
    }

    fn embed_unchecked(&self, target: u64) -> CycNumber {
        if self.conductor == target || self.conductor == 1 {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); target as usize];
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                poly[(j * step) % target as usize] += c;
            }
        }
        CycNumber { conductor: target, coords: reduce(poly, target) }.normalized()
    }

    fn align(a: &CycNumber, b: &CycNumber) -> (CycNumber, CycNumber, u64) {
        let m = lcm(a.conductor, b.conductor);
        (a.embed_unchecked(m), b.embed_unchecked(m), m)
    }

    /// Image under the automorphism `zeta_M -> zeta_M^a` (gcd(a, M) = 1).
    pub fn galois(&self, a: i64) -> Result<CycNumber> {
        let m = self.conductor;
        let a = a.rem_euclid(m as i64) as u64;
        if gcd(a, m) != 1 {
            return Err(Error::invalid(format!("{a} is not a unit mod {m}")));
        }
        let mut poly = vec![Rational::zero(); m as usize];
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                poly[(j as u64 * a % m) as usize] += c;
            }
        }
        Ok(CycNumber { conductor: m, coords: reduce(poly, m) }.normalized())
    }

    pub fn conjugate(&self) -> CycNumber {
        self.galois(-1).expect("-1 is always a unit")
    }

    fn combine(&self, rhs: &CycNumber, sub: bool) -> CycNumber {
        if self.conductor == rhs.conductor {
            let coords = self.coords.iter().zip(&rhs.coords).map(|(a, b)| if sub { a - b } else { a + b }).collect();
            return CycNumber { conductor: self.conductor, coords }.normalized();
        }
        let (a, b, _) = Self::align(self, rhs);
        if a.conductor == b.conductor {
            return a.combine(&b, sub);
        }
        // one side collapsed to a rational during embedding
        let (big, small, flip) = if a.conductor == 1 { (b, a, true) } else { (a, b, false) };
        let mut coords = big.coords;
        let s = &small.coords[0];
        match (sub, flip) {
            (false, _) => coords[0] += s,
            (true, false) => coords[0] -= s,
            (true, true) => {
                for c in coords.iter_mut() {
                    *c = -std::mem::take(c);
                }
                coords[0] += s;
            }
        }
        CycNumber { conductor: big.conductor, coords }.normalized()
    }

    fn multiply(&self, rhs: &CycNumber) -> CycNumber {
        if self.is_zero() || rhs.is_zero() {
            return CycNumber::zero();
        }
        if self.conductor == 1 {
            return rhs.scale_rational(&self.coords[0]);
        }
        if rhs.conductor == 1 {
            return self.scale_rational(&rhs.coords[0]);
        }
        let (a, b, m) = if self.conductor == rhs.conductor {
            (self.clone(), rhs.clone(), self.conductor)
        } else {
            Self::align(self, rhs)
        };
        if a.conductor == 1 || b.conductor == 1 {
            return a.multiply(&b);
        }
        let n = a.coords.len();
        let mut poly = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        CycNumber { conductor: m, coords: reduce(poly, m) }.normalized()
    }

    pub fn scale_rational(&self, q: &Rational) -> CycNumber {
        if q.is_zero() {
            return CycNumber::zero();
        }
        CycNumber { conductor: self.conductor, coords: self.coords.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[z]`.
    pub fn inverse(&self) -> Option<CycNumber> {
        if self.is_zero() {
            return None;
        }
        if self.conductor == 1 {
            return Some(CycNumber::from_rational(self.coords[0].recip()));
        }
        let m = self.conductor;
        let modulus: Vec<Rational> =
            cyclotomic_polynomial(m).iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect();
        let (g, s) = poly_ext_gcd(trim(self.coords.clone()), modulus);
        // g is a nonzero constant because Phi_m is irreducible
        debug_assert_eq!(g.len(), 1);
        let inv_g = g[0].recip();
        let coords = s.into_iter().map(|c| c * &inv_g).collect();
        Some(CycNumber { conductor: m, coords: reduce(coords, m) }.normalized())
    }

    /// Space-separated coordinates in `Q(zeta_target)`.
    pub fn format_in(&self, target: u64) -> Result<String> {
        Ok(self.coords_in(target)?.iter().map(format_rational).collect::<Vec<_>>().join(" "))
    }

    /// Parses `phi(M)` whitespace-separated rationals as an element of `Q(zeta_M)`.
    pub fn parse(conductor: u64, text: &str) -> Result<CycNumber> {
        let coords = text.split_whitespace().map(parse_rational).collect::<Result<Vec<_>>>()?;
        CycNumber::from_coords(conductor, coords)
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![Rational::zero()], rem);
    }
    let lead_inv = b.last().expect("nonempty divisor").recip();
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + b.len() - 1] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    rem.truncate(b.len() - 1);
    if rem.is_empty() {
        rem.push(Rational::zero());
    }
    (quot, trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let zero = Rational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

/// Returns `(g, s)` with `s * a = g (mod m)` and `g = gcd(a, m)`.
fn poly_ext_gcd(a: Vec<Rational>, m: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (m, a);
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coords == other.coords;
        }
        let (a, b, _) = Self::align(self, other);
        a.conductor == b.conductor && a.coords == b.coords
    }
}

impl Eq for CycNumber {}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        if self.conductor == 1 {
            write!(f, "{}", parts[0])
        } else {
            write!(f, "[{}]_{}", parts.join(" "), self.conductor)
        }
    }
}

impl Zero for CycNumber {
    fn zero() -> Self {
        CycNumber::from_rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coords[0].is_zero()
    }
}

impl One for CycNumber {
    fn one() -> Self {
        CycNumber::from_rational(Rational::one())
    }
}

impl Add for CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: CycNumber) -> CycNumber {
        self.combine(&rhs, false)
    }
}

impl Sub for CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: CycNumber) -> CycNumber {
        self.combine(&rhs, true)
    }
}

impl Mul for CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: CycNumber) -> CycNumber {
        self.multiply(&rhs)
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { conductor: self.conductor, coords: self.coords.into_iter().map(|c| -c).collect() }
    }
}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        self.combine(rhs, false)
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self.combine(rhs, true)
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.multiply(rhs)
    }
}

impl Ring for CycNumber {
    fn from_bigint(n: &BigInt) -> Self {
        CycNumber::from_rational(Rational::from_integer(n.clone()))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.multiply(rhs)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        if self.conductor == rhs.conductor && self.conductor == 1 {
            self.coords[0] += &rhs.coords[0];
        } else {
            *self = self.combine(rhs, false);
        }
    }

    fn scale_bigint(&self, n: &BigInt) -> Self {
        self.scale_rational(&Rational::from_integer(n.clone()))
    }

    fn conductor(&self) -> u64 {
        self.conductor
    }
}

impl Field for CycNumber {
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }

    fn from_rational(q: &Rational) -> Self {
        CycNumber::from_rational(q.clone())
    }
}
