//! Multimodular solving of rational systems with exact verification.
//!
//! Columns are cleared of denominators, the system is solved modulo a
//! sequence of 62-bit primes, and the solution is lifted by CRT and rational
//! reconstruction. Nothing is returned without checking `A c = f` exactly
//! over the integers. Inconsistency modulo a prime at which the pivot block
//! is invertible proves that `f` is outside the span.

use std::sync::{LazyLock, Mutex};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

static PRIMES: LazyLock<Mutex<Vec<u64>>> = LazyLock::new(|| Mutex::new(Vec::new()));

/// The `i`-th prime below `2^62`, counting down.
fn prime(i: usize) -> u64 {
    let mut primes = PRIMES.lock().expect("prime list poisoned");
    let mut next = primes.last().map_or(1u64 << 62, |&p| p - 1);
    while primes.len() <= i {
        while !is_prime_u64(next) {
            next -= 1;
        }
        primes.push(next);
        next -= 1;
    }
    primes[i]
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.iter_u64_digits().next().unwrap_or(0)
}

/// Solutions modulo one prime: `A mod p` and the inverse of the pivot block.
struct PrimeData {
    p: u64,
    a: Vec<Vec<u64>>,
    binv: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModularOutcome {
    Unique(Vec<Rational>),
    NotInSpan,
}

/// A rational system with full column rank, ready for many right-hand sides.
pub struct ModularSystem {
    /// Integer matrix: column `j` is the original column times `scale[j]`.
    rows: Vec<Vec<BigInt>>,
    scale: Vec<BigInt>,
    pivots: Vec<usize>,
    /// `log2` of the Hadamard bound of the pivot block.
    hadamard_bits: f64,
    primes: Mutex<Vec<Option<PrimeData>>>,
}

fn norm_bits<'a>(entries: impl Iterator<Item = &'a BigInt>) -> f64 {
    let mut sq = BigInt::zero();
    for x in entries {
        sq += x * x;
    }
    if sq.is_zero() {
        return 0.0;
    }
    (sq.bits() as f64) / 2.0 + 0.5
}

/// Row-echelon pivot rows of `a` mod `p`, lowest rows first.
fn pivot_rows(a: &[Vec<u64>], m: usize, p: u64) -> Vec<usize> {
    let mut work: Vec<Vec<u64>> = a.to_vec();
    let mut used = vec![false; work.len()];
    let mut pivots = Vec::new();
    for col in 0..m {
        let Some(r) = (0..work.len()).find(|&r| !used[r] && work[r][col] != 0) else {
            continue;
        };
        used[r] = true;
        pivots.push(r);
        let inv = inv_mod(work[r][col], p);
        let pivot_row: Vec<u64> = work[r].iter().map(|&x| mul_mod(x, inv, p)).collect();
        for (i, row) in work.iter_mut().enumerate() {
            if used[i] || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for k in col..m {
                row[k] = (row[k] + p - mul_mod(f, pivot_row[k], p)) % p;
            }
        }
    }
    pivots
}

/// Inverse of a square matrix mod `p`, or `None` if singular.
fn invert_mod(b: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let m = b.len();
    let mut a: Vec<Vec<u64>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let inv = inv_mod(a[col][col], p);
        for x in a[col].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == col || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[m..].to_vec()).collect())
}

/// `n/d` with `|n|, d <= sqrt(M/2)` and `n = d x mod M`, if one exists.
fn rational_reconstruct(x: &BigInt, modulus: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (modulus / 2u32).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), x.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    (n.gcd(&d).is_one()).then_some((n, d))
}

impl ModularSystem {
    /// Prepares `rows` (`P` rows of `m` rationals). Returns `Err(rank)` when
    /// the columns are dependent modulo several primes.
    pub fn new(rows: &[Vec<Rational>]) -> Result<Self, usize> {
        let m = rows.first().map_or(0, Vec::len);
        let scale: Vec<BigInt> = (0..m).map(|j| rows.iter().fold(BigInt::one(), |l, r| l.lcm(r[j].denom()))).collect();
        let int_rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().zip(&scale).map(|(x, s)| x.numer() * (s / x.denom())).collect()).collect();
        let mut best = 0;
        for i in 0..3 {
            let p = prime(i);
            let a: Vec<Vec<u64>> = int_rows.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect();
            let pivots = pivot_rows(&a, m, p);
            if pivots.len() == m {
                let mut pivots = pivots;
                pivots.sort_unstable();
                let hadamard_bits = (0..m).map(|j| norm_bits(pivots.iter().map(|&r| &int_rows[r][j]))).sum();
                return Ok(ModularSystem {
                    rows: int_rows,
                    scale,
                    pivots,
                    hadamard_bits,
                    primes: Mutex::new(Vec::new()),
                });
            }
            best = best.max(pivots.len());
        }
        Err(best)
    }

    pub fn columns(&self) -> usize {
        self.scale.len()
    }

    /// Rows whose coefficients determine the solution.
    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivots
    }

    /// Runs `f` with data for the `i`-th prime, computing it on first use.
    /// Primes at which the pivot block is singular yield `None`.
    fn with_prime<R>(&self, i: usize, f: impl FnOnce(Option<&PrimeData>) -> R) -> R {
        let mut cache = self.primes.lock().expect("prime cache poisoned");
        while cache.len() <= i {
            let p = prime(cache.len());
            let a: Vec<Vec<u64>> = self.rows.iter().map(|r| r.iter().map(|x| reduce(x, p)).collect()).collect();
            let b: Vec<Vec<u64>> = self.pivots.iter().map(|&r| a[r].clone()).collect();
            cache.push(invert_mod(&b, p).map(|binv| PrimeData { p, a, binv }));
        }
        f(cache[i].as_ref())
    }

    pub fn solve(&self, rhs: &[Rational]) -> ModularOutcome {
        assert_eq!(rhs.len(), self.rows.len(), "one right-hand side entry per row");
        let m = self.columns();
        let den = rhs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let g: Vec<BigInt> = rhs.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        if m == 0 {
            return if g.iter().all(Zero::is_zero) {
                ModularOutcome::Unique(Vec::new())
            } else {
                ModularOutcome::NotInSpan
            };
        }
        let rhs_bits = norm_bits(self.pivots.iter().map(|&r| &g[r]));
        // Cramer numerators and denominators both stay below these bounds.
        let needed_bits = 2.0 * self.hadamard_bits + rhs_bits + 2.0;
        let mut modulus = BigInt::one();
        let mut residues = vec![BigInt::zero(); m];
        let mut previous: Option<Vec<(BigInt, BigInt)>> = None;
        let mut i = 0;
        loop {
            let step = self.with_prime(i, |data| {
                let data = data?;
                let p = data.p;
                let gp: Vec<u64> = g.iter().map(|x| reduce(x, p)).collect();
                let c: Vec<u64> = data
                    .binv
                    .iter()
                    .map(|row| {
                        row.iter().zip(&self.pivots).fold(0u64, |acc, (&b, &r)| (acc + mul_mod(b, gp[r], p)) % p)
                    })
                    .collect();
                let consistent = data.a.iter().zip(&gp).all(|(row, &target)| {
                    row.iter().zip(&c).fold(0u64, |acc, (&x, &y)| (acc + mul_mod(x, y, p)) % p) == target
                });
                Some((p, c, consistent))
            });
            i += 1;
            let Some((p, c, consistent)) = step else { continue };
            if !consistent {
                return ModularOutcome::NotInSpan;
            }
            let pb = BigInt::from(p);
            let m_inv = BigInt::from(inv_mod(reduce(&modulus, p), p));
            for (res, &cp) in residues.iter_mut().zip(&c) {
                let delta = ((BigInt::from(cp) - &*res) * &m_inv).mod_floor(&pb);
                *res += &modulus * delta;
            }
            modulus *= &pb;
            let exhausted = modulus.bits() as f64 > needed_bits;
            let lifted: Option<Vec<(BigInt, BigInt)>> =
                residues.iter().map(|r| rational_reconstruct(r, &modulus)).collect();
            let Some(lifted) = lifted else {
                if exhausted {
                    return ModularOutcome::NotInSpan;
                }
                continue;
            };
            if previous.as_ref() == Some(&lifted) || exhausted {
                if let Some(sol) = self.verify(&lifted, &g) {
                    return ModularOutcome::Unique(
                        sol.into_iter()
                            .zip(&self.scale)
                            .map(|(y, s)| y * Rational::new(s.clone(), den.clone()))
                            .collect(),
                    );
                }
                if exhausted {
                    return ModularOutcome::NotInSpan;
                }
            }
            previous = Some(lifted);
        }
    }

    /// Exact integer check of `A y = g` for `y_j = n_j / d_j`.
    fn verify(&self, y: &[(BigInt, BigInt)], g: &[BigInt]) -> Option<Vec<Rational>> {
        let common = y.iter().fold(BigInt::one(), |l, (_, d)| l.lcm(d));
        let nums: Vec<BigInt> = y.iter().map(|(n, d)| n * (&common / d)).collect();
        for (row, target) in self.rows.iter().zip(g) {
            let mut acc = BigInt::zero();
            for (a, n) in row.iter().zip(&nums) {
                if a.sign() != Sign::NoSign && n.sign() != Sign::NoSign {
                    acc += a * n;
                }
            }
            if acc != target * &common {
                return None;
            }
        }
        Some(y.iter().map(|(n, d)| Rational::new(n.clone(), d.clone())).collect())
    }
}
