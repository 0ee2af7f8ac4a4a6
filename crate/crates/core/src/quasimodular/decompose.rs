use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::{assemble_basis, basis_conductor, BasisAtom, Part, PartSet, PrecisionPolicy};
use crate::arith::{euler_phi, lcm};
use crate::error::{Error, Result};
use crate::exact::{CycNumber, Rational};
use crate::linalg::{ModularOutcome, ModularSystem};
use crate::newforms::NewformRegistry;
use crate::qseries::QSeries;
use crate::scalar::Ring;

/// Coordinates of a series in a basis, or a residual flag when it is not in the span.
#[derive(Clone, Debug)]
pub struct Decomposition {
    atoms: Vec<BasisAtom>,
    coordinates: Option<Vec<CycNumber>>,
    precision: usize,
}

impl Decomposition {
    pub fn atoms(&self) -> &[BasisAtom] {
        &self.atoms
    }

    /// `None` when the series has a residual outside the span.
    pub fn coordinates(&self) -> Option<&[CycNumber]> {
        self.coordinates.as_deref()
    }

    pub fn residual(&self) -> bool {
        self.coordinates.is_none()
    }

    /// Precision at which the decomposition was verified.
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn into_result(self) -> Result<Self> {
        if self.residual() {
            Err(Error::NotInSpan { precision: self.precision })
        } else {
            Ok(self)
        }
    }

    pub fn coordinate(&self, atom: &str) -> Option<&CycNumber> {
        let i = self.atoms.iter().position(|a| a.to_string() == atom)?;
        self.coordinates.as_ref().map(|c| &c[i])
    }

    /// Nonzero coordinates of one part.
    pub fn part(&self, part: Part) -> Vec<(&BasisAtom, &CycNumber)> {
        let Some(c) = &self.coordinates else { return Vec::new() };
        self.atoms.iter().zip(c).filter(|(a, x)| a.part() == part && !x.is_zero()).collect()
    }

    pub fn part_is_zero(&self, part: Part) -> bool {
        self.part(part).is_empty()
    }

    /// Sum of the coordinates times their atoms.
    pub fn reassemble(&self, precision: usize) -> Result<QSeries<CycNumber>> {
        let mut acc = QSeries::zero(precision);
        if let Some(c) = &self.coordinates {
            for (atom, x) in self.atoms.iter().zip(c) {
                if !x.is_zero() {
                    acc.add_scaled_assign(x, &atom.expand(precision)?);
                }
            }
        }
        Ok(acc)
    }

    /// `<part> <atom> : <coordinate>` per atom, then `residual: none|present`.
    pub fn report(&self) -> String {
        let mut out = String::new();
        if let Some(c) = &self.coordinates {
            for (atom, x) in self.atoms.iter().zip(c) {
                let _ = writeln!(out, "{} {} : {}", atom.part(), atom, x);
            }
        }
        let _ = writeln!(out, "residual: {}", if self.residual() { "present" } else { "none" });
        out
    }
}

/// A basis truncated at a precision where its columns are independent,
/// reusable for any number of right-hand sides.
pub struct Decomposer {
    atoms: Vec<BasisAtom>,
    policy: PrecisionPolicy,
    precision: usize,
    escalations: u32,
    conductor: u64,
    columns: Vec<QSeries<CycNumber>>,
    /// Rational systems keyed by the ambient conductor.
    systems: Mutex<HashMap<u64, Arc<ModularSystem>>>,
}

/// Rows of the rational system for coefficients in `Q(zeta_m)`: each entry
/// becomes the `phi(m) x phi(m)` matrix of multiplication by it.
fn rational_rows(columns: &[QSeries<CycNumber>], precision: usize, m: u64) -> Result<Vec<Vec<Rational>>> {
    let d = euler_phi(m) as usize;
    let basis: Vec<CycNumber> = (0..d).map(|s| CycNumber::zeta_power(m, s as i64)).collect();
    let mut rows = vec![vec![Rational::zero(); columns.len() * d]; precision * d];
    for (j, col) in columns.iter().enumerate() {
        for n in 0..precision {
            let a = &col.coeffs()[n];
            if a.is_zero() {
                continue;
            }
            for (s, z) in basis.iter().enumerate() {
                let coords = a.mul_ref(z).coords_in(m)?;
                for (t, x) in coords.into_iter().enumerate() {
                    rows[n * d + t][j * d + s] = x;
                }
            }
        }
    }
    Ok(rows)
}

impl Decomposer {
    /// Basis of max weight `2k` at the policy precision, escalating if needed.
    pub fn new(registry: &NewformRegistry, level: u64, max_weight: u32, parts: PartSet) -> Result<Self> {
        let atoms = assemble_basis(registry, level, max_weight, parts)?;
        let policy = PrecisionPolicy::new(level, max_weight, atoms.len());
        Self::from_atoms(atoms, policy, policy.required)
    }

    /// As [`Decomposer::new`] but starting the rank check at `start` instead
    /// of the policy precision.
    pub fn with_start_precision(
        registry: &NewformRegistry,
        level: u64,
        max_weight: u32,
        parts: PartSet,
        start: usize,
    ) -> Result<Self> {
        let atoms = assemble_basis(registry, level, max_weight, parts)?;
        let policy = PrecisionPolicy::new(level, max_weight, atoms.len());
        Self::from_atoms(atoms, policy, start)
    }

    pub fn from_atoms(atoms: Vec<BasisAtom>, policy: PrecisionPolicy, start: usize) -> Result<Self> {
        let conductor = basis_conductor(&atoms);
        let limit = atoms.iter().filter_map(BasisAtom::max_precision).min();
        let cap = policy.cap().max(start);
        let cap = limit.map_or(cap, |l| cap.min(l));
        let mut precision = start.max(1).min(cap);
        let mut escalations = 0;
        loop {
            let columns = atoms.iter().map(|a| a.expand(precision)).collect::<Result<Vec<_>>>()?;
            let rows = rational_rows(&columns, precision, conductor)?;
            match ModularSystem::new(&rows) {
                Ok(system) => {
                    let systems = Mutex::new(HashMap::from([(conductor, Arc::new(system))]));
                    return Ok(Decomposer { atoms, policy, precision, escalations, conductor, columns, systems });
                }
                Err(rank) if precision >= cap => {
                    let d = euler_phi(conductor) as usize;
                    return Err(Error::RankDeficient { rank: rank / d, atoms: atoms.len(), precision });
                }
                Err(_) => {
                    precision = (precision * 2).min(cap);
                    escalations += 1;
                }
            }
        }
    }

    pub fn atoms(&self) -> &[BasisAtom] {
        &self.atoms
    }

    pub fn policy(&self) -> &PrecisionPolicy {
        &self.policy
    }

    /// Precision at which the basis was found independent.
    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Number of precision doublings needed.
    pub fn escalations(&self) -> u32 {
        self.escalations
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    fn system(&self, m: u64) -> Result<Arc<ModularSystem>> {
        if let Some(s) = self.systems.lock().expect("system cache poisoned").get(&m) {
            return Ok(s.clone());
        }
        let rows = rational_rows(&self.columns, self.precision, m)?;
        let system = ModularSystem::new(&rows).map_err(|rank| Error::RankDeficient {
            rank,
            atoms: self.atoms.len(),
            precision: self.precision,
        })?;
        let system = Arc::new(system);
        self.systems.lock().expect("system cache poisoned").insert(m, system.clone());
        Ok(system)
    }

    fn withheld(&self, precision: usize) -> Decomposition {
        Decomposition { atoms: self.atoms.clone(), coordinates: None, precision }
    }

    /// Exact coordinates of `f`, checked against every coefficient `f` carries.
    pub fn decompose(&self, f: &QSeries<CycNumber>) -> Result<Decomposition> {
        if f.precision() < self.precision {
            return Err(Error::InsufficientPrecision { required: self.precision, available: f.precision() });
        }
        let truncated = f.truncate(self.precision);
        let mf = truncated.conductor();
        let coordinates = if self.conductor == 1 {
            // Rational basis: solve each coordinate of f separately.
            let system = self.system(1)?;
            let d = euler_phi(mf) as usize;
            let mut parts = vec![Vec::with_capacity(self.precision); d];
            for c in truncated.coeffs() {
                for (s, x) in c.coords_in(mf)?.into_iter().enumerate() {
                    parts[s].push(x);
                }
            }
            let mut acc = vec![CycNumber::zero(); self.atoms.len()];
            for (s, rhs) in parts.iter().enumerate() {
                let ModularOutcome::Unique(sol) = system.solve(rhs) else {
                    return Ok(self.withheld(f.precision()));
                };
                let z = CycNumber::zeta_power(mf, s as i64);
                for (a, x) in acc.iter_mut().zip(sol) {
                    if !x.is_zero() {
                        *a = a.add_ref(&z.scale_rational(&x));
                    }
                }
            }
            acc
        } else {
            let m = lcm(self.conductor, mf);
            let system = self.system(m)?;
            let d = euler_phi(m) as usize;
            let mut rhs = Vec::with_capacity(self.precision * d);
            for c in truncated.coeffs() {
                rhs.extend(c.coords_in(m)?);
            }
            let ModularOutcome::Unique(sol) = system.solve(&rhs) else {
                return Ok(self.withheld(f.precision()));
            };
            sol.chunks(d).map(|chunk| CycNumber::from_coords(m, chunk.to_vec())).collect::<Result<Vec<_>>>()?
        };
        let decomposition =
            Decomposition { atoms: self.atoms.clone(), coordinates: Some(coordinates), precision: f.precision() };
        if f.precision() > self.precision && decomposition.reassemble(f.precision())? != *f {
            return Ok(self.withheld(f.precision()));
        }
        Ok(decomposition)
    }
}

/// One-shot decomposition of `f` in the full basis of max weight `2k`.
pub fn decompose(
    registry: &NewformRegistry,
    f: &QSeries<CycNumber>,
    level: u64,
    max_weight: u32,
) -> Result<Decomposition> {
    Decomposer::new(registry, level, max_weight, PartSet::ALL)?.decompose(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::linalg::{exact_solve, SolveOutcome};
    use crate::quasimodular::weight_component;

    fn reg() -> NewformRegistry {
        NewformRegistry::standard()
    }

    #[test]
    fn e2_and_delta_round_trip() {
        let r = reg();
        let dec = Decomposer::new(&r, 1, 14, PartSet::ALL).unwrap();
        let p = dec.precision();
        let e2 = crate::eisenstein::EisensteinAtom::e2().expand(p);
        let delta = r.get(1, 12, "delta").unwrap().expand(p).unwrap();
        let mut f = e2.scale(&CycNumber::from_i64(5));
        f.add_scaled_assign(&CycNumber::from_i64(3), &delta.apply_d(1));
        let d = dec.decompose(&f).unwrap();
        assert_eq!(d.coordinate("E2"), Some(&CycNumber::from_i64(5)));
        assert_eq!(d.coordinate("D^1(newform[1,12,delta])"), Some(&CycNumber::from_i64(3)));
        assert_eq!(d.part(Part::Eis).len() + d.part(Part::New).len(), 2);
        assert!(d.part_is_zero(Part::Old));
    }

    #[test]
    fn not_in_span() {
        let r = reg();
        let dec = Decomposer::new(&r, 1, 2, PartSet::ALL).unwrap();
        let mut f = QSeries::<CycNumber>::zero(dec.precision());
        f.set_coeff(1, CycNumber::from_i64(1));
        f.set_coeff(2, CycNumber::from_i64(1));
        let d = dec.decompose(&f).unwrap();
        assert!(d.residual());
        assert_eq!(d.report(), "residual: present\n");
        assert!(matches!(d.into_result(), Err(Error::NotInSpan { .. })));
    }

    #[test]
    fn report_format() {
        let r = reg();
        let dec = Decomposer::new(&r, 1, 2, PartSet::ALL).unwrap();
        let f = crate::eisenstein::EisensteinAtom::e2().expand(dec.precision()).scale(&CycNumber::from_i64(5));
        let d = dec.decompose(&f).unwrap();
        assert_eq!(d.report(), "eis 1 : 0\neis E2 : 5\nresidual: none\n");
    }

    #[test]
    fn insufficient_precision() {
        let r = reg();
        let dec = Decomposer::new(&r, 2, 4, PartSet::ALL).unwrap();
        let f = QSeries::<CycNumber>::zero(dec.precision() - 1);
        assert!(matches!(dec.decompose(&f), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn escalation_from_low_start() {
        let r = reg();
        let dec = Decomposer::with_start_precision(&r, 6, 8, PartSet::ALL, 8).unwrap();
        assert!(dec.escalations() > 0);
        let plain = Decomposer::new(&r, 6, 6, PartSet::ALL).unwrap();
        assert_eq!(plain.escalations(), 0);
    }

    #[test]
    fn cyclotomic_coefficients_over_rational_basis() {
        let r = reg();
        let dec = Decomposer::new(&r, 2, 6, PartSet::ALL).unwrap();
        let p = dec.precision();
        let z = CycNumber::zeta_power(3, 1);
        let c: Vec<CycNumber> = (0..dec.atoms().len())
            .map(|j| z.scale_rational(&rat(j as i64 - 2, 3)).add_ref(&CycNumber::from_i64(j as i64 % 3)))
            .collect();
        let mut f = QSeries::zero(p);
        for (a, x) in dec.atoms().iter().zip(&c) {
            f.add_scaled_assign(x, &a.expand(p).unwrap());
        }
        assert_eq!(dec.decompose(&f).unwrap().coordinates().unwrap(), c.as_slice());
    }

    #[test]
    fn cyclotomic_basis_matches_gaussian_elimination() {
        let r = reg();
        let dec = Decomposer::new(&r, 25, 4, PartSet::only(Part::Eis)).unwrap();
        assert_eq!(dec.conductor(), 4);
        let p = dec.precision();
        let i = CycNumber::zeta_power(4, 1);
        let c: Vec<CycNumber> = (0..dec.atoms().len())
            .map(|j| i.scale_rational(&rat(j as i64 % 4, 2)).add_ref(&CycNumber::from_i64(1 - j as i64)))
            .collect();
        let mut f = QSeries::zero(p);
        for (a, x) in dec.atoms().iter().zip(&c) {
            f.add_scaled_assign(x, &a.expand(p).unwrap());
        }
        let got = dec.decompose(&f).unwrap();
        assert_eq!(got.coordinates().unwrap(), c.as_slice());
        // Independent path: plain elimination over Q(zeta_4).
        let rows: Vec<Vec<CycNumber>> =
            (0..p).map(|n| dec.columns.iter().map(|col| col.coeffs()[n].clone()).collect()).collect();
        assert_eq!(exact_solve(&rows, f.coeffs()), SolveOutcome::Unique(c));
    }

    #[test]
    fn closure_examples() {
        let r = reg();
        let dec = Decomposer::new(&r, 1, 4, PartSet::ALL).unwrap();
        let p = dec.precision();
        let de2 = crate::eisenstein::EisensteinAtom::e2().expand(p).apply_d(1);
        let d = dec.decompose(&de2).unwrap();
        assert_eq!(d.coordinate("D^1(E2)"), Some(&CycNumber::from_i64(1)));
        let one = weight_component(&r, 1, 0, PartSet::ALL).unwrap();
        let zero = one[0].expand(p).unwrap().apply_d(1);
        assert!(dec.decompose(&zero).unwrap().coordinates().unwrap().iter().all(Zero::is_zero));
        // E2^2 = E4 + 12 D(E2), and E4 = 120 E[4,1.1,1].
        let e2 = crate::eisenstein::EisensteinAtom::e2().expand(p);
        let sq = e2.mul(&e2);
        let d = dec.decompose(&sq).unwrap();
        assert_eq!(d.coordinate("E[4,1.1,1]"), Some(&CycNumber::from_i64(120)));
        assert_eq!(d.coordinate("D^1(E2)"), Some(&CycNumber::from_i64(12)));
    }
}
