//! Newforms of level `L` and weight `k`, and the cusp-form bases built from them.
//!
//! Coefficients come from eta products for the handful of forms that are eta
//! quotients, from the bundled rational data, or from files ingested at run
//! time. Every data file is checked against the Hecke relations before it is
//! accepted, and [`cusp_basis`] refuses to proceed unless the registry holds
//! as many newforms as the dimension formula predicts.

mod bundled;
pub mod dims;
mod elliptic;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{divisors, factorize, primes_up_to, sturm_bound};
use crate::error::{Error, HeckeRelation, Result};
use crate::exact::CycNumber;
use crate::qseries::{eta_expand, parse_series_file, write_series_file, EtaProduct, QSeries, SeriesFile};
use crate::scalar::Ring;

pub use dims::{dim_cusp_forms, dim_modular_forms, dim_new_cusp_forms};
pub use elliptic::count_points_11a;

/// Environment variable naming the newform cache directory.
pub const CACHE_ENV: &str = "QMF_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".qmf-cache";

#[derive(Clone, Debug)]
pub enum NewformSource {
    Eta(EtaProduct),
    Data(Arc<QSeries<CycNumber>>),
}

#[derive(Clone, Debug)]
pub struct NewformRecord {
    level: u64,
    weight: u32,
    label: String,
    source: NewformSource,
    conductor: u64,
}

impl NewformRecord {
    fn from_eta(level: u64, weight: u32, label: &str, factors: &[(u64, i64)]) -> Self {
        let eta = EtaProduct::new(factors).expect("catalog eta products are valid");
        debug_assert_eq!(eta.double_weight(), 2 * weight as i64);
        NewformRecord { level, weight, label: label.to_string(), source: NewformSource::Eta(eta), conductor: 1 }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &NewformSource {
        &self.source
    }

    /// Conductor of the coefficient field (1 for rational newforms).
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Largest precision available, `None` when unbounded.
    pub fn max_precision(&self) -> Option<usize> {
        match &self.source {
            NewformSource::Eta(_) => None,
            NewformSource::Data(s) => Some(s.precision()),
        }
    }

    pub fn expand(&self, precision: usize) -> Result<QSeries<CycNumber>> {
        match &self.source {
            NewformSource::Eta(eta) => Ok(eta_expand(eta, precision)?.to_cyc()),
            NewformSource::Data(s) => {
                if precision > s.precision() {
                    return Err(Error::InsufficientPrecision { required: precision, available: s.precision() });
                }
                Ok(s.truncate(precision))
            }
        }
    }

    /// `newform[L,k,label]`
    pub fn syntax(&self) -> String {
        format!("newform[{},{},{}]", self.level, self.weight, self.label)
    }
}

impl fmt::Display for NewformRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.syntax())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeReport {
    pub precision: usize,
    pub multiplicative_checks: usize,
    pub prime_power_checks: usize,
}

/// Checks the Hecke relations among `a(1) .. a(P-1)`.
///
/// Multiplicativity is tested by splitting each `n` into its smallest-prime
/// power part and the rest, which implies it for all coprime pairs. For `p`
/// not dividing the level, `a(p^(r+1)) = a(p) a(p^r) - p^(k-1) a(p^(r-1))`;
/// for `p | L` the relation degenerates to `a(p^(r+1)) = a(p) a(p^r)`.
pub fn verify_hecke(record: &NewformRecord, precision: usize) -> Result<HeckeReport> {
    let series = record.expand(precision)?;
    check_hecke(series.coeffs(), record.level, record.weight)
}

fn check_hecke(a: &[CycNumber], level: u64, weight: u32) -> Result<HeckeReport> {
    let p_max = a.len();
    let mut report = HeckeReport { precision: p_max, multiplicative_checks: 0, prime_power_checks: 0 };
    for n in 2..p_max as u64 {
        let f = factorize(n);
        let (p, e) = f[0];
        if f.len() > 1 {
            let m = p.pow(e);
            let r = n / m;
            if a[n as usize] != a[m as usize].mul_ref(&a[r as usize]) {
                return Err(Error::HeckeViolation(HeckeRelation::Multiplicative { m, n: r }));
            }
            report.multiplicative_checks += 1;
        } else if e >= 2 {
            let r = e - 1;
            let mut expected = a[p as usize].mul_ref(&a[p.pow(r) as usize]);
            if !level.is_multiple_of(p) {
                let pk = CycNumber::from_bigint(&num_traits::pow(BigInt::from(p), weight as usize - 1));
                expected = expected - pk * a[p.pow(r - 1) as usize].clone();
            }
            if a[n as usize] != expected {
                return Err(Error::HeckeViolation(HeckeRelation::PrimePower { p, r }));
            }
            report.prime_power_checks += 1;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    /// `(p, a(p), #E(F_p))` for every prime checked.
    pub rows: Vec<(u64, i64, u64)>,
}

/// Compares `a(p)` of the level 11 weight 2 newform with `p + 1 - #E(F_p)`
/// for the curve of conductor 11, for all primes `p <= p_max`, `p != 11`.
/// Also checks `a(p)^2 <= 4p`, the bound forced by a Frobenius of determinant `p`.
pub fn galois_trace_check_11(p_max: u64) -> Result<TraceReport> {
    if p_max < 2 {
        return Err(Error::invalid("prime bound must be at least 2"));
    }
    let record = NewformRegistry::builtin().get(11, 2, "a").expect("the level 11 newform is built in");
    let series = record.expand(p_max as usize + 1)?;
    let mut rows = Vec::new();
    for p in primes_up_to(p_max).into_iter().filter(|&p| p != 11) {
        let c = series.coeff(p as usize).expect("precision covers p");
        let count = count_points_11a(p);
        let trace = p as i64 + 1 - count as i64;
        let ap = c.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer());
        let ap = match ap.and_then(|z| i64::try_from(z).ok()) {
            Some(v) if v == trace => v,
            _ => return Err(Error::TraceMismatch { p, coefficient: c.to_string(), trace }),
        };
        if (ap * ap) as u64 > 4 * p {
            return Err(Error::TraceMismatch { p, coefficient: c.to_string(), trace });
        }
        rows.push((p, ap, count));
    }
    Ok(TraceReport { rows })
}

/// A newform dilated by `n`: `g(n tau)`, with `n L | N` at the enclosing level.
#[derive(Clone, Debug)]
pub struct CuspAtom {
    pub record: Arc<NewformRecord>,
    pub dilation: u64,
}

impl PartialEq for CuspAtom {
    fn eq(&self, other: &Self) -> bool {
        self.dilation == other.dilation
            && self.record.level == other.record.level
            && self.record.weight == other.record.weight
            && self.record.label == other.record.label
    }
}

impl Eq for CuspAtom {}

impl CuspAtom {
    pub fn is_new(&self) -> bool {
        self.dilation == 1
    }

    pub fn weight(&self) -> u32 {
        self.record.weight
    }

    pub fn expand(&self, precision: usize) -> Result<QSeries<CycNumber>> {
        let n = self.dilation as usize;
        Ok(self.record.expand(precision.div_ceil(n))?.dilate(n, Some(precision)))
    }

    /// Largest precision the atom can be expanded to, `None` when unbounded.
    pub fn max_precision(&self) -> Option<usize> {
        self.record.max_precision().map(|p| p * self.dilation as usize)
    }
}

impl fmt::Display for CuspAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dilation == 1 {
            write!(f, "{}", self.record)
        } else {
            write!(f, "dilate[{}]({})", self.dilation, self.record)
        }
    }
}

static BUILTIN: LazyLock<Vec<Arc<NewformRecord>>> = LazyLock::new(|| {
    vec![
        Arc::new(NewformRecord::from_eta(1, 12, "delta", &[(1, 24)])),
        Arc::new(NewformRecord::from_eta(2, 8, "a", &[(1, 8), (2, 8)])),
        Arc::new(NewformRecord::from_eta(3, 6, "a", &[(1, 6), (3, 6)])),
        Arc::new(NewformRecord::from_eta(4, 6, "a", &[(2, 12)])),
        Arc::new(NewformRecord::from_eta(5, 4, "a", &[(1, 4), (5, 4)])),
        Arc::new(NewformRecord::from_eta(6, 4, "a", &[(1, 2), (2, 2), (3, 2), (6, 2)])),
        Arc::new(NewformRecord::from_eta(11, 2, "a", &[(1, 2), (11, 2)])),
    ]
});

static BUNDLED: LazyLock<Vec<Arc<NewformRecord>>> = LazyLock::new(|| {
    bundled::BUNDLED
        .iter()
        .map(|(name, text)| {
            let record = parse_newform(text).unwrap_or_else(|e| panic!("bundled newform {name}: {e}"));
            Arc::new(record)
        })
        .collect()
});

/// Parses and fully verifies a newform file.
fn parse_newform(text: &str) -> Result<NewformRecord> {
    let file = parse_series_file(text)?;
    let missing = |key: &str| Error::parse(1, format!("newform file lacks `{key}` header"));
    let level = file.level.ok_or_else(|| missing("level"))?;
    let weight = file.weight.ok_or_else(|| missing("weight"))?;
    let label = file.label.clone().ok_or_else(|| missing("label"))?;
    if level == 0 || weight < 2 || weight % 2 == 1 {
        return Err(Error::invalid(format!("bad level/weight {level}/{weight}")));
    }
    if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::invalid(format!("bad newform label `{label}`")));
    }
    let series = file.series;
    let a1 = series.coeff(1).cloned().unwrap_or_else(CycNumber::zero);
    if !a1.is_one() {
        return Err(Error::NotNormalized { label, found: a1.to_string() });
    }
    if !series.coeff(0).is_some_and(Zero::is_zero) {
        return Err(Error::invalid(format!("newform {label} has a nonzero constant term")));
    }
    let need = sturm_bound(weight, level) + 1;
    if series.precision() < need {
        return Err(Error::InsufficientPrecision { required: need, available: series.precision() });
    }
    check_hecke(series.coeffs(), level, weight)?;
    Ok(NewformRecord { level, weight, label, conductor: file.conductor, source: NewformSource::Data(Arc::new(series)) })
}

/// Outcome of [`NewformRegistry::ingest`].
#[derive(Clone, Debug)]
pub enum Ingested {
    Added(Arc<NewformRecord>),
    /// The data matched a record that was already registered.
    Duplicate(Arc<NewformRecord>),
}

impl Ingested {
    pub fn record(&self) -> &Arc<NewformRecord> {
        match self {
            Ingested::Added(r) | Ingested::Duplicate(r) => r,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct NewformRegistry {
    records: Vec<Arc<NewformRecord>>,
    cache_dir: Option<PathBuf>,
}

impl NewformRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Only the eta-product catalog.
    pub fn builtin() -> Self {
        NewformRegistry { records: BUILTIN.clone(), cache_dir: None }
    }

    /// Adds the bundled rational newforms of level and weight at most 12.
    pub fn with_bundled(mut self) -> Self {
        for r in BUNDLED.iter() {
            self.insert(r.clone());
        }
        self
    }

    /// Catalog plus bundled data.
    pub fn standard() -> Self {
        Self::builtin().with_bundled()
    }

    /// Loads every `*.qs` file in `dir` and writes later ingests there.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        if dir.is_dir() {
            let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
                .map_err(|e| Error::Io { path: dir.clone(), source: e })?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| is_cache_name(p))
                .collect();
            paths.sort();
            for path in paths {
                let text = fs::read_to_string(&path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
                let record = parse_newform(&text)
                    .map_err(|e| Error::invalid(format!("cached newform {}: {e}", path.display())))?;
                self.register(record)?;
            }
        }
        self.cache_dir = Some(dir);
        Ok(self)
    }

    /// Standard registry plus the cache directory from `QMF_CACHE_DIR`
    /// (default `./.qmf-cache`).
    pub fn from_env() -> Result<Self> {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        Self::standard().with_cache_dir(dir)
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn records(&self) -> &[Arc<NewformRecord>] {
        &self.records
    }

    fn insert(&mut self, record: Arc<NewformRecord>) {
        let pos = self.records.partition_point(|r| {
            (r.level, r.weight, r.label.as_str()) < (record.level, record.weight, record.label.as_str())
        });
        self.records.insert(pos, record);
    }

    /// Records of level `L` and weight `k`, by label.
    pub fn lookup(&self, level: u64, weight: u32) -> Vec<Arc<NewformRecord>> {
        self.records.iter().filter(|r| r.level == level && r.weight == weight).cloned().collect()
    }

    pub fn get(&self, level: u64, weight: u32, label: &str) -> Result<Arc<NewformRecord>> {
        self.records
            .iter()
            .find(|r| r.level == level && r.weight == weight && r.label == label)
            .cloned()
            .ok_or_else(|| Error::UnknownNewform(format!("newform[{level},{weight},{label}]")))
    }

    // Registers a verified record, deduplicating against existing data.
    fn register(&mut self, record: NewformRecord) -> Result<Ingested> {
        let NewformSource::Data(series) = &record.source else {
            unreachable!("only data records are registered at run time")
        };
        for existing in self.lookup(record.level, record.weight) {
            let common = existing.max_precision().map_or(series.precision(), |p| p.min(series.precision()));
            let same = existing.expand(common)? == series.truncate(common);
            if same {
                return Ok(Ingested::Duplicate(existing));
            }
            if existing.label == record.label {
                return Err(Error::invalid(format!(
                    "{} is already registered with different coefficients",
                    existing.syntax()
                )));
            }
        }
        let record = Arc::new(record);
        self.insert(record.clone());
        Ok(Ingested::Added(record))
    }

    /// Verifies and registers a newform file, caching it on disk when a
    /// cache directory is configured.
    pub fn ingest(&mut self, text: &str) -> Result<Ingested> {
        let record = parse_newform(text)?;
        let outcome = self.register(record)?;
        if let (Ingested::Added(r), Some(dir)) = (&outcome, &self.cache_dir) {
            write_cached(dir, r)?;
        }
        Ok(outcome)
    }

    pub fn ingest_file(&mut self, path: &Path) -> Result<Ingested> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
        self.ingest(&text)
    }
}

/// Cache entries are named `L.k.label.qs`; anything else in the directory is ignored.
fn is_cache_name(path: &Path) -> bool {
    let Some(name) = path.file_name().and_then(|n| n.to_str()) else { return false };
    let Some(stem) = name.strip_suffix(".qs") else { return false };
    let parts: Vec<&str> = stem.splitn(3, '.').collect();
    parts.len() == 3
        && parts[..2].iter().all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
        && !parts[2].is_empty()
}

fn write_cached(dir: &Path, record: &NewformRecord) -> Result<()> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |e| Error::Io { path, source: e }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let NewformSource::Data(series) = &record.source else { return Ok(()) };
    let mut file = SeriesFile::new(series.as_ref().clone());
    file.conductor = record.conductor;
    file.level = Some(record.level);
    file.weight = Some(record.weight);
    file.label = Some(record.label.clone());
    let text = write_series_file(&file)?;
    let name = format!("{}.{}.{}.qs", record.level, record.weight, record.label);
    let target = dir.join(&name);
    // Write-then-rename keeps readers from seeing a partial file.
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, text).map_err(io(&tmp))?;
    fs::rename(&tmp, &target).map_err(io(&target))?;
    Ok(())
}

/// `B_k(N)`: every newform of level `L | N` dilated by each `n | N/L`,
/// ordered by `L`, label, then `n`.
///
/// Fails with [`Error::CatalogIncomplete`] at the first level whose newforms
/// are not all known.
pub fn cusp_basis(registry: &NewformRegistry, level: u64, weight: u32) -> Result<Vec<CuspAtom>> {
    if level == 0 || weight % 2 == 1 {
        return Err(Error::invalid(format!("need N >= 1 and even k, got N = {level}, k = {weight}")));
    }
    let mut atoms = Vec::new();
    for l in divisors(level) {
        let records = registry.lookup(l, weight);
        let need = dim_new_cusp_forms(l, weight) as usize;
        if records.len() != need {
            return Err(Error::CatalogIncomplete { level: l, weight, have: records.len(), need });
        }
        for record in records {
            for n in divisors(level / l) {
                atoms.push(CuspAtom { record: record.clone(), dilation: n });
            }
        }
    }
    Ok(atoms)
}

/// True when every `(L, k)` with `L | N` is fully covered.
pub fn coverage_complete(registry: &NewformRegistry, level: u64, weight: u32) -> bool {
    divisors(level).iter().all(|&l| registry.lookup(l, weight).len() == dim_new_cusp_forms(l, weight) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &QSeries<CycNumber>, n: usize) -> Vec<i64> {
        (0..n).map(|i| i64::try_from(s.coeff(i).unwrap().to_rational().unwrap().to_integer()).unwrap()).collect()
    }

    #[test]
    fn catalog_examples() {
        let reg = NewformRegistry::builtin();
        let delta = &reg.lookup(1, 12)[0];
        assert_eq!(ints(&delta.expand(3).unwrap(), 3), vec![0, 1, -24]);
        let e11 = &reg.lookup(11, 2)[0];
        assert_eq!(ints(&e11.expand(4).unwrap(), 4), vec![0, 1, -2, -1]);
        assert!(reg.lookup(1, 2).is_empty());
    }

    #[test]
    fn catalog_matches_reference_expansions() {
        let expected: &[(u64, u32, [i64; 11])] = &[
            (2, 8, [0, 1, -8, 12, 64, -210, -96, 1016, -512, -2043, 1680]),
            (3, 6, [0, 1, -6, 9, 4, 6, -54, -40, 168, 81, -36]),
            (4, 6, [0, 1, 0, -12, 0, 54, 0, -88, 0, -99, 0]),
            (5, 4, [0, 1, -4, 2, 8, -5, -8, 6, 0, -23, 20]),
            (6, 4, [0, 1, -2, -3, 4, 6, 6, -16, -8, 9, -12]),
        ];
        let reg = NewformRegistry::builtin();
        for (l, k, coeffs) in expected {
            let s = reg.lookup(*l, *k)[0].expand(11).unwrap();
            assert_eq!(ints(&s, 11), coeffs.to_vec(), "level {l}, weight {k}");
        }
    }

    #[test]
    fn hecke_examples() {
        let reg = NewformRegistry::standard();
        for r in reg.records() {
            let p = r.max_precision().unwrap_or(500).min(500);
            verify_hecke(r, p).unwrap_or_else(|e| panic!("{r}: {e}"));
        }
        let delta = reg.get(1, 12, "delta").unwrap().expand(7).unwrap();
        assert_eq!(delta.coeff(6).unwrap(), &CycNumber::from_i64(-6048));
        assert_eq!(delta.coeff(4).unwrap(), &CycNumber::from_i64(576 - 2048));
    }

    fn file(level: u64, weight: u32, label: &str, coeffs: &[i64]) -> String {
        let mut f =
            SeriesFile::new(QSeries::from_coeffs(coeffs.iter().map(|&c| CycNumber::from_i64(c)).collect()).unwrap());
        f.conductor = 1;
        f.level = Some(level);
        f.weight = Some(weight);
        f.label = Some(label.to_string());
        write_series_file(&f).unwrap()
    }

    fn delta_coeffs(p: usize) -> Vec<i64> {
        ints(&NewformRegistry::builtin().get(1, 12, "delta").unwrap().expand(p).unwrap(), p)
    }

    #[test]
    fn ingest_rejections() {
        let mut reg = NewformRegistry::builtin();
        let mut bad = delta_coeffs(10);
        bad[1] = 2;
        assert!(matches!(reg.ingest(&file(1, 12, "x", &bad)), Err(Error::NotNormalized { .. })));
        let mut bad = delta_coeffs(10);
        bad[6] += 1;
        assert!(matches!(
            reg.ingest(&file(1, 12, "x", &bad)),
            Err(Error::HeckeViolation(HeckeRelation::Multiplicative { m: 2, n: 3 }))
        ));
        let mut bad = delta_coeffs(10);
        bad[8] += 1;
        assert!(matches!(
            reg.ingest(&file(1, 12, "x", &bad)),
            Err(Error::HeckeViolation(HeckeRelation::PrimePower { p: 2, r: 2 }))
        ));
        // Sturm minimum for (11, 2) is 3; (23, 2) needs 5 coefficients.
        assert!(matches!(reg.ingest(&file(23, 2, "a", &[0, 1, -1, 0])), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn ingest_duplicate_and_cache() {
        let dir = tempfile::tempdir().unwrap();
        let mut reg = NewformRegistry::builtin().with_cache_dir(dir.path()).unwrap();
        let e11 = reg.get(11, 2, "a").unwrap().expand(60).unwrap();
        let coeffs = ints(&e11, 60);
        let dup = reg.ingest(&file(11, 2, "a", &coeffs)).unwrap();
        assert!(matches!(dup, Ingested::Duplicate(_)));
        assert_eq!(dup.record().expand(60).unwrap(), e11);
        // A fresh form: the level 2 weight 10 newform from the bundled data.
        let bundled = NewformRegistry::standard().get(2, 10, "a").unwrap().expand(200).unwrap();
        let added = reg.ingest(&file(2, 10, "a", &ints(&bundled, 200))).unwrap();
        assert!(matches!(added, Ingested::Added(_)));
        assert!(dir.path().join("2.10.a.qs").is_file());
        let reloaded = NewformRegistry::builtin().with_cache_dir(dir.path()).unwrap();
        assert_eq!(reloaded.get(2, 10, "a").unwrap().expand(200).unwrap(), bundled);
    }

    #[test]
    fn cusp_basis_examples() {
        let builtin = NewformRegistry::builtin();
        // S_12(2) is spanned by Delta and Delta(2 tau); there is no new part.
        let names: Vec<String> = cusp_basis(&builtin, 2, 12).unwrap().iter().map(|a| a.to_string()).collect();
        assert_eq!(names, ["newform[1,12,delta]", "dilate[2](newform[1,12,delta])"]);
        assert!(matches!(
            cusp_basis(&builtin, 2, 10),
            Err(Error::CatalogIncomplete { level: 2, weight: 10, have: 0, need: 1 })
        ));
        assert!(cusp_basis(&NewformRegistry::standard(), 2, 10).is_ok());
        let e11 = cusp_basis(&builtin, 11, 2).unwrap();
        assert_eq!(e11.len(), 1);
        assert!(e11[0].is_new());
        assert!(cusp_basis(&builtin, 1, 2).unwrap().is_empty());
    }

    #[test]
    fn basis_sizes_match_dimensions() {
        let reg = NewformRegistry::standard();
        for n in [1u64, 2, 3, 4, 5, 6] {
            for k in (2..=12u32).step_by(2) {
                if let Ok(b) = cusp_basis(&reg, n, k) {
                    assert_eq!(b.len() as u64, dim_cusp_forms(n, k), "N = {n}, k = {k}");
                }
            }
        }
        for n in [1u64, 2, 6] {
            for k in (2..=12u32).step_by(2) {
                assert!(coverage_complete(&reg, n, k), "N = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn trace_check_small() {
        let report = galois_trace_check_11(13).unwrap();
        assert_eq!(report.rows[0], (2, -2, 5));
        assert_eq!(report.rows[1], (3, -1, 5));
        assert_eq!(report.rows.len(), 5);
    }
}
