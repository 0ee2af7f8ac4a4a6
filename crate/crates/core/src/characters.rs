//! Dirichlet characters mod `u`, addressed by exponents on canonical generators.
//!
//! `(Z/uZ)^x` is split by CRT over the prime powers of `u` in increasing order.
//! An odd `p^a` contributes its smallest primitive root, `4` contributes `-1`,
//! and `2^a` with `a >= 3` contributes `-1` and `5`. A character is the tuple of
//! exponents `e_i` with `chi(g_i) = zeta_{ord(g_i)}^(e_i)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use crate::arith::{divisors, euler_phi, factorize, gcd, lcm, pow_mod};
use crate::error::{Error, Result};
use crate::exact::CycNumber;

#[derive(Debug)]
struct Generator {
    /// The generator as a residue mod `u`.
    residue: u64,
    order: u64,
}

/// Generators plus a discrete-log table for every unit mod `u`.
#[derive(Debug)]
pub struct CharacterGroup {
    modulus: u64,
    generators: Vec<Generator>,
    /// `logs[n]` holds the exponent vector of `n`, empty for non-units.
    logs: Vec<Vec<u64>>,
    /// lcm of generator orders (the exponent of the group).
    exponent: u64,
}

fn smallest_primitive_root(pa: u64, p: u64) -> u64 {
    let phi = euler_phi(pa);
    let prime_factors: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..pa)
        .find(|&g| g % p != 0 && prime_factors.iter().all(|&q| pow_mod(g, phi / q, pa) != 1))
        .expect("odd prime powers are cyclic")
}

/// Lift `x mod m` to `u` so that it is 1 modulo the cofactor `u / m`.
fn crt_lift(x: u64, m: u64, u: u64) -> u64 {
    let rest = u / m;
    (0..m).map(|j| 1 + j * rest).find(|y| y % m == x % m).unwrap_or(1) % u.max(1)
}

impl CharacterGroup {
    fn build(u: u64) -> Self {
        let mut generators = Vec::new();
        for (p, a) in factorize(u) {
            let pa = p.pow(a);
            if p == 2 {
                if a >= 2 {
                    generators.push(Generator { residue: crt_lift(pa - 1, pa, u), order: 2 });
                }
                if a >= 3 {
                    generators.push(Generator { residue: crt_lift(5, pa, u), order: pa / 4 });
                }
            } else {
                let g = smallest_primitive_root(pa, p);
                generators.push(Generator { residue: crt_lift(g, pa, u), order: euler_phi(pa) });
            }
        }
        let exponent = generators.iter().fold(1, |m, g| lcm(m, g.order));
        let mut logs = vec![Vec::new(); u as usize];
        let um = u.max(1);
        // Walk the product of cyclic groups in mixed radix.
        let mut idx = vec![0u64; generators.len()];
        loop {
            let n = generators.iter().zip(&idx).fold(1 % um, |acc, (g, &e)| acc * pow_mod(g.residue, e, um) % um);
            logs[n as usize] = idx.clone();
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return CharacterGroup { modulus: u, generators, logs, exponent };
                }
                idx[i] += 1;
                if idx[i] < generators[i].order {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    fn log(&self, n: i64) -> Option<&[u64]> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        if self.modulus == 1 {
            return Some(&[]);
        }
        let l = &self.logs[r];
        (!l.is_empty() || gcd(r as u64, self.modulus) == 1).then_some(l.as_slice())
    }
}

#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<CharacterGroup>,
    exponents: Vec<u64>,
    order: u64,
    conductor: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}

impl Eq for DirichletCharacter {}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirichletCharacter")
            .field("modulus", &self.group.modulus)
            .field("exponents", &self.exponents)
            .field("order", &self.order)
            .field("conductor", &self.conductor)
            .finish()
    }
}

impl DirichletCharacter {
    fn new(group: Arc<CharacterGroup>, exponents: Vec<u64>) -> Self {
        let order = group.generators.iter().zip(&exponents).fold(1, |m, (g, &e)| lcm(m, g.order / gcd(e, g.order)));
        let mut chi = DirichletCharacter { group, exponents, order, conductor: 0 };
        chi.conductor = chi.compute_conductor();
        chi
    }

    pub fn trivial(u: u64) -> Self {
        let table = CharacterTable::get(u);
        table.characters[0].clone()
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    /// Images of the canonical generators as exponents of `zeta_{ord(g_i)}`.
    pub fn generator_images(&self) -> Vec<(u64, u64)> {
        self.group.generators.iter().zip(&self.exponents).map(|(g, &e)| (g.order, e)).collect()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.group.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `chi(n) = zeta_order^e`, as `Some(e)`, or `None` when `gcd(n, u) > 1`.
    pub fn value_exponent(&self, n: i64) -> Option<u64> {
        let logs = self.group.log(n)?;
        let big = self.group.exponent;
        let mut acc = 0u64;
        for ((g, &e), &l) in self.group.generators.iter().zip(&self.exponents).zip(logs) {
            acc = (acc + (e * l % g.order) * (big / g.order)) % big;
        }
        // acc is an exponent of zeta_big; the value lies in mu_order.
        Some(acc / (big / self.order))
    }

    pub fn evaluate(&self, n: i64) -> CycNumber {
        match self.value_exponent(n) {
            None => CycNumber::from_i64(0),
            Some(e) => CycNumber::zeta_power(self.order, e as i64),
        }
    }

    pub fn conjugate(&self) -> Self {
        let exponents =
            self.group.generators.iter().zip(&self.exponents).map(|(g, &e)| (g.order - e) % g.order).collect();
        DirichletCharacter::new(self.group.clone(), exponents)
    }

    // Smallest d | u with chi trivial on all units congruent to 1 mod d.
    fn compute_conductor(&self) -> u64 {
        let u = self.group.modulus;
        if self.order == 1 {
            return 1;
        }
        for d in divisors(u) {
            let trivial_on_kernel = (1..=u)
                .step_by(d as usize)
                .filter(|&n| gcd(n, u) == 1)
                .all(|n| self.value_exponent(n as i64) == Some(0));
            if trivial_on_kernel {
                return d;
            }
        }
        u
    }

    /// `u.j` when the character is primitive.
    pub fn label(&self) -> Option<String> {
        let j = CharacterTable::get(self.modulus()).primitive().iter().position(|c| c == self)?;
        Some(format!("{}.{}", self.modulus(), j + 1))
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Some(l) => f.write_str(&l),
            None => write!(f, "chi_{}{:?}", self.modulus(), self.exponents),
        }
    }
}

/// All characters mod `u`, lexicographic on exponent tuples.
#[derive(Debug)]
pub struct CharacterTable {
    modulus: u64,
    characters: Vec<DirichletCharacter>,
    primitive: Vec<DirichletCharacter>,
}

static TABLES: LazyLock<RwLock<HashMap<u64, Arc<CharacterTable>>>> = LazyLock::new(|| RwLock::new(HashMap::new()));

impl CharacterTable {
    pub fn get(u: u64) -> Arc<CharacterTable> {
        assert!(u >= 1, "character modulus must be positive");
        if let Some(t) = TABLES.read().expect("character cache poisoned").get(&u) {
            return t.clone();
        }
        let table = Arc::new(Self::build(u));
        TABLES.write().expect("character cache poisoned").entry(u).or_insert(table).clone()
    }

    fn build(u: u64) -> Self {
        let group = Arc::new(CharacterGroup::build(u));
        let orders: Vec<u64> = group.generators.iter().map(|g| g.order).collect();
        let mut characters = Vec::new();
        let mut idx = vec![0u64; orders.len()];
        'outer: loop {
            characters.push(DirichletCharacter::new(group.clone(), idx.clone()));
            // Lexicographic: the last coordinate varies fastest.
            let mut i = idx.len();
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < orders[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
        let primitive = characters.iter().filter(|c| c.is_primitive()).cloned().collect();
        CharacterTable { modulus: u, characters, primitive }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    pub fn primitive(&self) -> &[DirichletCharacter] {
        &self.primitive
    }
}

pub fn enumerate_primitive(u: u64) -> Vec<DirichletCharacter> {
    CharacterTable::get(u).primitive().to_vec()
}

pub fn conductor_of(chi: &DirichletCharacter) -> u64 {
    chi.conductor()
}

/// Looks up the character named `u.j`.
pub fn character_by_label(u: u64, j: usize) -> Result<DirichletCharacter> {
    let table = CharacterTable::get(u);
    j.checked_sub(1).and_then(|i| table.primitive().get(i)).cloned().ok_or_else(|| {
        Error::invalid(format!("no primitive character {u}.{j} (there are {})", table.primitive().len()))
    })
}
