//! Graded bases of quasimodular forms on `Gamma0(N)` and exact decomposition.
//!
//! In weight `2j >= 2` the basis consists of `D^(j-i) b` for every Eisenstein
//! or cusp basis element `b` of weight `2i <= 2j`, plus `D^(j-1) E2`. A basis of
//! "max weight `2k`" is the direct sum of these over `0 <= 2j <= 2k`, with the
//! constant `1` in weight 0.

mod decompose;

pub use decompose::{decompose, Decomposer, Decomposition};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, RwLock};

use num_traits::Zero;

use crate::arith::{lcm, primes_up_to, sturm_bound};
use crate::eisenstein::{eisenstein_basis, EisensteinAtom};
use crate::error::{Error, Result};
use crate::exact::CycNumber;
use crate::newforms::{cusp_basis, CuspAtom, NewformRegistry, NewformSource};
use crate::qseries::QSeries;
use crate::scalar::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Part {
    Eis,
    New,
    Old,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::Eis => "eis",
            Part::New => "new",
            Part::Old => "old",
        })
    }
}

/// Which parts of the basis to assemble.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartSet {
    pub eis: bool,
    pub new: bool,
    pub old: bool,
}

impl PartSet {
    pub const ALL: PartSet = PartSet { eis: true, new: true, old: true };

    pub fn only(part: Part) -> Self {
        PartSet { eis: part == Part::Eis, new: part == Part::New, old: part == Part::Old }
    }

    pub fn contains(&self, part: Part) -> bool {
        match part {
            Part::Eis => self.eis,
            Part::New => self.new,
            Part::Old => self.old,
        }
    }

    fn cusp(&self) -> bool {
        self.new || self.old
    }
}

impl std::str::FromStr for PartSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(PartSet::ALL),
            "eis" => Ok(PartSet::only(Part::Eis)),
            "new" => Ok(PartSet::only(Part::New)),
            "old" => Ok(PartSet::only(Part::Old)),
            other => Err(Error::invalid(format!("unknown part `{other}` (expected eis, new, old or all)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    One,
    Eisenstein(EisensteinAtom),
    Cusp(CuspAtom),
}

impl Payload {
    pub fn weight(&self) -> u32 {
        match self {
            Payload::One => 0,
            Payload::Eisenstein(e) => e.weight(),
            Payload::Cusp(c) => c.weight(),
        }
    }

    fn cacheable(&self) -> bool {
        match self {
            Payload::One => false,
            Payload::Eisenstein(_) => true,
            Payload::Cusp(c) => matches!(c.record.source(), NewformSource::Eta(_)),
        }
    }

    fn expand_uncached(&self, precision: usize) -> Result<QSeries<CycNumber>> {
        match self {
            Payload::One => Ok(QSeries::one(precision)),
            Payload::Eisenstein(e) => Ok(e.expand(precision)),
            Payload::Cusp(c) => c.expand(precision),
        }
    }

    /// Expansion of the underlying form, shared through a process-wide cache.
    pub fn expand(&self, precision: usize) -> Result<QSeries<CycNumber>> {
        if !self.cacheable() {
            return self.expand_uncached(precision);
        }
        let key = self.to_string();
        if let Some(s) = EXPANSIONS.read().expect("expansion cache poisoned").get(&key) {
            if s.precision() >= precision {
                return Ok(s.truncate(precision));
            }
        }
        let s = Arc::new(self.expand_uncached(precision)?);
        EXPANSIONS.write().expect("expansion cache poisoned").insert(key, s.clone());
        Ok(s.as_ref().clone())
    }

    fn max_precision(&self) -> Option<usize> {
        match self {
            Payload::Cusp(c) => c.max_precision(),
            _ => None,
        }
    }

    fn conductor(&self) -> u64 {
        match self {
            Payload::One => 1,
            Payload::Eisenstein(e) => e.coefficient_conductor(),
            Payload::Cusp(c) => c.record.conductor(),
        }
    }
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::One => f.write_str("1"),
            Payload::Eisenstein(e) => write!(f, "{e}"),
            Payload::Cusp(c) => write!(f, "{c}"),
        }
    }
}

static EXPANSIONS: LazyLock<RwLock<HashMap<String, Arc<QSeries<CycNumber>>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `D^r` applied to a basis payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisAtom {
    pub r: u32,
    pub payload: Payload,
}

impl BasisAtom {
    pub fn weight(&self) -> u32 {
        self.payload.weight() + 2 * self.r
    }

    pub fn part(&self) -> Part {
        match &self.payload {
            Payload::Cusp(c) if c.is_new() => Part::New,
            Payload::Cusp(_) => Part::Old,
            _ => Part::Eis,
        }
    }

    pub fn expand(&self, precision: usize) -> Result<QSeries<CycNumber>> {
        Ok(self.payload.expand(precision)?.apply_d(self.r))
    }

    /// Largest precision available, `None` when unbounded.
    pub fn max_precision(&self) -> Option<usize> {
        self.payload.max_precision()
    }

    /// Conductor of a field containing every coefficient.
    pub fn coefficient_conductor(&self) -> u64 {
        self.payload.conductor()
    }
}

/// Eisenstein atoms and the constant are written bare when `r = 0`; cusp
/// atoms always carry their `D^r`.
impl fmt::Display for BasisAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.payload, self.r) {
            (Payload::Cusp(_), r) => write!(f, "D^{r}({})", self.payload),
            (_, 0) => write!(f, "{}", self.payload),
            (_, r) => write!(f, "D^{r}({})", self.payload),
        }
    }
}

pub fn expand_atom(atom: &BasisAtom, precision: usize) -> Result<QSeries<CycNumber>> {
    atom.expand(precision)
}

fn check_weight(max_weight: u32) -> Result<()> {
    if max_weight % 2 == 1 {
        return Err(Error::invalid(format!("weights are even, got {max_weight}")));
    }
    Ok(())
}

/// Atoms of exactly weight `2j`, in canonical order.
pub fn weight_component(registry: &NewformRegistry, level: u64, weight: u32, parts: PartSet) -> Result<Vec<BasisAtom>> {
    check_weight(weight)?;
    if level == 0 {
        return Err(Error::invalid("level must be positive"));
    }
    let mut eis = Vec::new();
    let mut new = Vec::new();
    let mut old = Vec::new();
    if weight == 0 {
        if parts.eis {
            eis.push(BasisAtom { r: 0, payload: Payload::One });
        }
        return Ok(eis);
    }
    let j = weight / 2;
    for i in 1..=j {
        let r = j - i;
        if parts.eis {
            for e in eisenstein_basis(level, 2 * i)? {
                eis.push(BasisAtom { r, payload: Payload::Eisenstein(e) });
            }
            if i == 1 {
                eis.push(BasisAtom { r: j - 1, payload: Payload::Eisenstein(EisensteinAtom::e2()) });
            }
        }
        if parts.cusp() {
            for c in cusp_basis(registry, level, 2 * i)? {
                let atom = BasisAtom { r, payload: Payload::Cusp(c) };
                match atom.part() {
                    Part::New if parts.new => new.push(atom),
                    Part::Old if parts.old => old.push(atom),
                    _ => {}
                }
            }
        }
    }
    eis.extend(new);
    eis.extend(old);
    Ok(eis)
}

/// Every atom of weight `0 <= 2j <= 2k`, ordered by weight, then part
/// (eis, new, old), then the order of the underlying basis.
pub fn assemble_basis(
    registry: &NewformRegistry,
    level: u64,
    max_weight: u32,
    parts: PartSet,
) -> Result<Vec<BasisAtom>> {
    check_weight(max_weight)?;
    let mut atoms = Vec::new();
    for w in (0..=max_weight).step_by(2) {
        atoms.extend(weight_component(registry, level, w, parts)?);
    }
    Ok(atoms)
}

/// lcm of the atom coefficient conductors.
pub fn basis_conductor(atoms: &[BasisAtom]) -> u64 {
    atoms.iter().fold(1, |m, a| lcm(m, a.coefficient_conductor()))
}

/// Working precision for decomposing in a basis of `atoms` atoms of weight at most `2k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    pub level: u64,
    pub max_weight: u32,
    pub atoms: usize,
    pub required: usize,
}

impl PrecisionPolicy {
    /// Precision may grow to this multiple of the requirement when the
    /// truncated basis matrix is rank deficient.
    pub const ESCALATION_CAP: usize = 8;

    pub fn new(level: u64, max_weight: u32, atoms: usize) -> Self {
        let required = sturm_bound(max_weight, level) + atoms + 1;
        PrecisionPolicy { level, max_weight, atoms, required }
    }

    pub fn cap(&self) -> usize {
        self.required * Self::ESCALATION_CAP
    }
}

/// Whether `a_f(p) = 0` for all primes `p <= X` not dividing `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaVerdict {
    pub member: bool,
    /// Primes `p <= X`, `p` not dividing `N`, with `a_f(p) != 0`.
    pub violations: Vec<u64>,
}

pub fn omega_membership<T: Ring>(f: &QSeries<T>, level: u64, x: u64) -> Result<OmegaVerdict> {
    if f.precision() as u64 <= x {
        return Err(Error::InsufficientPrecision { required: x as usize + 1, available: f.precision() });
    }
    let violations: Vec<u64> = primes_up_to(x)
        .into_iter()
        .filter(|&p| !level.is_multiple_of(p) && !f.coeff(p as usize).expect("precision covers x").is_zero())
        .collect();
    Ok(OmegaVerdict { member: violations.is_empty(), violations })
}

/// One row of a D-closure check: `D b` written in the next weight's basis.
#[derive(Clone, Debug)]
pub struct ClosureRow {
    pub atom: BasisAtom,
    pub decomposition: Decomposition,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub level: u64,
    pub weight: u32,
    pub rows: Vec<ClosureRow>,
}

impl ClosureReport {
    /// Every `D b` decomposed with no residual and only weight `2k + 2` atoms.
    pub fn closed(&self) -> bool {
        self.rows.iter().all(|row| {
            row.decomposition.coordinates().is_some_and(|c| {
                row.decomposition.atoms().iter().zip(c).all(|(a, x)| x.is_zero() || a.weight() == self.weight + 2)
            })
        })
    }
}

/// Decomposes `D b` for every weight-`2k` atom `b` in the basis of max weight `2k + 2`.
pub fn d_closure_check(registry: &NewformRegistry, level: u64, weight: u32) -> Result<ClosureReport> {
    let atoms = weight_component(registry, level, weight, PartSet::ALL)?;
    let decomposer = Decomposer::new(registry, level, weight + 2, PartSet::ALL)?;
    let p = decomposer.precision();
    let rows = atoms
        .into_iter()
        .map(|atom| {
            let f = atom.expand(p)?.apply_d(1);
            let decomposition = decomposer.decompose(&f)?;
            Ok(ClosureRow { atom, decomposition })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClosureReport { level, weight, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(atoms: &[BasisAtom]) -> Vec<String> {
        atoms.iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn assembly_examples() {
        let reg = NewformRegistry::standard();
        let b = assemble_basis(&reg, 1, 2, PartSet::only(Part::Eis)).unwrap();
        assert_eq!(names(&b), ["1", "E2"]);
        let b = assemble_basis(&reg, 1, 12, PartSet::only(Part::New)).unwrap();
        assert_eq!(names(&b), ["D^0(newform[1,12,delta])"]);
        let b = assemble_basis(&reg, 2, 12, PartSet::only(Part::Old)).unwrap();
        assert_eq!(names(&b), ["D^0(dilate[2](newform[1,12,delta]))"]);
        let b = assemble_basis(&reg, 6, 2, PartSet::only(Part::Eis)).unwrap();
        assert_eq!(names(&b), ["1", "E2twist[2]", "E2twist[3]", "E2twist[6]", "E2"]);
        let b = assemble_basis(&reg, 1, 4, PartSet::ALL).unwrap();
        assert_eq!(names(&b), ["1", "E2", "D^1(E2)", "E[4,1.1,1]"]);
    }

    #[test]
    fn dimensions_of_graded_pieces() {
        // dim of the weight-2j piece is sum_{i <= j} dim M_{2i}(N) + 1.
        let reg = NewformRegistry::standard();
        for n in [1u64, 2, 6] {
            for j in 1..=6u32 {
                let got = weight_component(&reg, n, 2 * j, PartSet::ALL).unwrap().len() as u64;
                let want: u64 = (1..=j).map(|i| crate::newforms::dim_modular_forms(n, 2 * i)).sum::<u64>() + 1;
                assert_eq!(got, want, "N = {n}, weight {}", 2 * j);
            }
        }
        assert_eq!(assemble_basis(&reg, 6, 12, PartSet::ALL).unwrap().len(), 140);
        assert_eq!(PrecisionPolicy::new(6, 12, 140).required, 154);
    }

    #[test]
    fn omega_examples() {
        let reg = NewformRegistry::builtin();
        let delta = reg.get(1, 12, "delta").unwrap();
        let d2 = CuspAtom { record: delta.clone(), dilation: 2 }.expand(101).unwrap();
        assert!(omega_membership(&d2, 2, 100).unwrap().member);
        let d = delta.expand(101).unwrap();
        let v = omega_membership(&d, 1, 100).unwrap();
        assert!(!v.member);
        assert_eq!(v.violations[0], 2);
        assert!(omega_membership(&QSeries::<CycNumber>::zero(101), 1, 100).unwrap().member);
        assert!(omega_membership(&d, 1, 101).is_err());
    }

    #[test]
    fn atom_conductors_divide_character_orders() {
        let reg = NewformRegistry::standard();
        for n in [1u64, 5, 7, 9, 16, 25] {
            for atom in assemble_basis(&reg, n, 4, PartSet::only(Part::Eis)).unwrap() {
                let s = atom.expand(60).unwrap();
                let m = atom.coefficient_conductor();
                for c in s.coeffs() {
                    assert_eq!(m % c.field_conductor(), 0, "{atom}");
                }
            }
        }
    }
}
