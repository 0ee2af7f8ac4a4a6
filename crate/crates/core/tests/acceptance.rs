//! End-to-end checks of the library's headline properties, one line per criterion.
//!
//! Runs with its own `main` so the verdicts print without `--nocapture`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use qmf::arith::{divisors, primes_up_to};
use qmf::detect::{census, f_kl, macmahon_detector, macmahon_tables, prime_detect_verdict};
use qmf::eisenstein::{eisenstein_basis, enumerate_a, EisensteinAtom};
use qmf::exact::rat;
use qmf::newforms::dims::cusp_count;
use qmf::newforms::{coverage_complete, cusp_basis, galois_trace_check_11, verify_hecke, NewformRegistry};
use qmf::qseries::eta_expand;
use qmf::quasimodular::{d_closure_check, Decomposer, Part, PartSet};
use qmf::{CycNumber, CycSeries, EtaProduct, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn is_prime_naive(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n).into_iter().map(|d| BigInt::from(d).pow(k)).sum()
}

fn macmahon_identity() -> Outcome {
    let t = macmahon_tables(2, 2001).map_err(|e| e.to_string())?;
    for n in 2..=2000u64 {
        let c = BigInt::from(n * n) - BigInt::from(3 * n) + 2;
        let v: BigInt = c * t[0].value(n as usize) - BigInt::from(8) * t[1].value(n as usize);
        ensure(v.is_zero() == is_prime_naive(n), || format!("v({n}) = {v}"))?;
    }
    let f = macmahon_detector(2001).map_err(|e| e.to_string())?;
    let verdict = prime_detect_verdict(&f, 1, 2000).map_err(|e| e.to_string())?;
    ensure(verdict.prime_detecting(), || "operator form disagrees".into())?;
    Ok("v(n) = 0 exactly at primes, 2 <= n <= 2000".into())
}

/// Sum over chains s_1 < ... < s_a and multiplicities m_i >= 1 with sum m_i s_i = n of prod m_i.
fn chains(a: u32, n: u64, min_part: u64) -> u64 {
    if a == 0 {
        return u64::from(n == 0);
    }
    (min_part..=n)
        .flat_map(|s| (1..=n / s).map(move |m| (s, m)))
        .map(|(s, m)| m * chains(a - 1, n - m * s, s + 1))
        .sum()
}

fn macmahon_oracles() -> Outcome {
    let t = macmahon_tables(3, 2001).map_err(|e| e.to_string())?;
    for n in 1..=2000u64 {
        ensure(*t[0].value(n as usize) == sigma(1, n), || format!("M_1({n}) != sigma_1({n})"))?;
    }
    for (a, table) in (1..=3).zip(&t) {
        for n in 0..=60u64 {
            let b = chains(a, n, 1);
            ensure(*table.value(n as usize) == BigInt::from(b), || {
                format!("M_{a}({n}): table {} vs {b}", table.value(n as usize))
            })?;
        }
    }
    Ok("M_1 = sigma_1 to 2000; chain enumeration agrees for a <= 3, n <= 60".into())
}

fn f13_prime_detecting() -> Outcome {
    for level in [1u64, 2, 6] {
        let f = f_kl(1, 3, level, 2001).map_err(|e| e.to_string())?;
        let v = prime_detect_verdict(&f, level, 2000).map_err(|e| e.to_string())?;
        ensure(v.prime_detecting(), || format!("N={level}: {:?} {:?}", v.nonvanishing_primes, v.vanishing_others))?;
    }
    Ok("f_{1,3}^(N) for N = 1, 2, 6 up to 2000".into())
}

fn f13_plus_old_decomposition() -> Outcome {
    let registry = NewformRegistry::standard();
    let dec = Decomposer::new(&registry, 2, 12, PartSet::ALL).map_err(|e| e.to_string())?;
    let p = dec.precision().max(2001);
    let delta = registry.get(1, 12, "delta").map_err(|e| e.to_string())?;
    let old = delta.expand(p).map_err(|e| e.to_string())?.dilate(2, None);
    let f = f_kl(1, 3, 2, p).map_err(|e| e.to_string())?.to_cyc().add(&old);
    let d = dec.decompose(&f).map_err(|e| e.to_string())?;
    ensure(!d.residual(), || "residual present".into())?;
    ensure(d.part_is_zero(Part::New), || "new part is nonzero".into())?;
    let old_part: Vec<String> = d.part(Part::Old).iter().map(|(a, c)| format!("{a} : {c}")).collect();
    ensure(old_part == ["D^0(dilate[2](newform[1,12,delta])) : 1"], || format!("old part {old_part:?}"))?;
    let v = prime_detect_verdict(&f, 2, 2000).map_err(|e| e.to_string())?;
    ensure(v.prime_detecting(), || "sum is not prime-detecting".into())?;
    Ok(format!("new part 0, old part {{Delta(2z) : 1}}, verified to precision {p}"))
}

fn old_atoms_vanish() -> Outcome {
    let registry = NewformRegistry::standard();
    let primes = primes_up_to(1000);
    let (mut atoms, mut skipped) = (0, Vec::new());
    for level in 1..=12u64 {
        for weight in (2..=12).step_by(2) {
            if !coverage_complete(&registry, level, weight) {
                skipped.push(format!("({level},{weight})"));
                continue;
            }
            for atom in cusp_basis(&registry, level, weight).map_err(|e| e.to_string())? {
                if atom.is_new() {
                    continue;
                }
                let g = atom.expand(1001).map_err(|e| e.to_string())?;
                for r in 0..=3 {
                    let h = g.apply_d(r);
                    for &p in primes.iter().filter(|&&p| level % p != 0) {
                        ensure(h.coeffs()[p as usize].is_zero(), || format!("D^{r}({atom}) at p = {p}, N = {level}"))?;
                    }
                    atoms += 1;
                }
            }
        }
    }
    ensure(atoms > 0, || "no old atoms checked".into())?;
    let skipped = if skipped.is_empty() { "none".to_string() } else { skipped.join(" ") };
    Ok(format!("{atoms} (atom, r) pairs for N <= 12, weight <= 12; spaces skipped: {skipped}"))
}

fn eisenstein_dilations() -> Outcome {
    let primes = primes_up_to(1000);
    let e2 = EisensteinAtom::e2().expand(1001);
    let mut checked = 0;
    for level in 1..=12u64 {
        let good: Vec<u64> = primes.iter().copied().filter(|p| level % p != 0).collect();
        for weight in (2..=12).step_by(2) {
            for atom in eisenstein_basis(level, weight).map_err(|e| e.to_string())? {
                if atom.dilation() <= 1 {
                    continue;
                }
                let trivial_weight2 = weight == 2 && atom.character().is_trivial();
                let f = atom.expand(1001);
                for r in 0..=3 {
                    let (g, e) = (f.apply_d(r), e2.apply_d(r));
                    for &p in &good {
                        let c = &g.coeffs()[p as usize];
                        if trivial_weight2 {
                            ensure(*c == e.coeffs()[p as usize], || format!("D^{r}({atom}) vs D^{r}(E2) at p = {p}"))?;
                        } else {
                            ensure(c.is_zero(), || format!("D^{r}({atom}) at p = {p}"))?;
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (atom, r) pairs for N <= 12, weight <= 12"))
}

fn prime_coefficient_formulas() -> Outcome {
    let primes = primes_up_to(500);
    let mut checked = 0;
    for level in [5u64, 25] {
        for weight in (2..=8).step_by(2) {
            for (chi, t) in enumerate_a(level, weight).map_err(|e| e.to_string())? {
                if t != 1 {
                    continue;
                }
                let atom = EisensteinAtom::new(weight, chi.clone(), 1).map_err(|e| e.to_string())?;
                let f = atom.expand(501);
                for r in 0..=3u32 {
                    let g = f.apply_d(r);
                    for &p in primes.iter().filter(|&&p| level % p != 0) {
                        let pk = CycNumber::from_bigint(&BigInt::from(p).pow(weight - 1));
                        let expected = chi
                            .conjugate()
                            .evaluate(p as i64)
                            .add_ref(&chi.evaluate(p as i64).mul_ref(&pk))
                            .mul_ref(&CycNumber::from_bigint(&(BigInt::from(2) * BigInt::from(p).pow(r))));
                        ensure(g.coeffs()[p as usize] == expected, || format!("D^{r}({atom}) at p = {p}"))?;
                    }
                    checked += 1;
                }
            }
        }
    }
    let e2 = EisensteinAtom::e2().expand(501);
    for k in 1..=6u32 {
        let g = e2.apply_d(k - 1);
        for &p in &primes {
            let expected = BigInt::from(-24) * (BigInt::from(p).pow(k - 1) + BigInt::from(p).pow(k));
            ensure(g.coeffs()[p as usize] == CycNumber::from_bigint(&expected), || {
                format!("D^{}(E2) at p = {p}", k - 1)
            })?;
        }
        checked += 1;
    }
    Ok(format!("{checked} series at N = 5, 25 up to p = 500"))
}

fn trace_at_11() -> Outcome {
    let report = galois_trace_check_11(199).map_err(|e| e.to_string())?;
    let registry = NewformRegistry::standard();
    let f = registry.get(11, 2, "a").map_err(|e| e.to_string())?.expand(200).map_err(|e| e.to_string())?;
    let mut rows = 0;
    for p in primes_up_to(199).into_iter().filter(|&p| p != 11) {
        // Affine solutions of y^2 + y = x^3 - x^2 - 10x - 20, plus the point at infinity.
        let count = 1
            + (0..p)
                .flat_map(|x| (0..p).map(move |y| (x, y)))
                .filter(|&(x, y)| {
                    let (x, y) = (x as i64, y as i64);
                    let lhs = y * y + y;
                    let rhs = x * x * x - x * x - 10 * x - 20;
                    (lhs - rhs).rem_euclid(p as i64) == 0
                })
                .count() as i64;
        let ap = CycNumber::from_i64(p as i64 + 1 - count);
        ensure(f.coeffs()[p as usize] == ap, || format!("a({p}) = {} but p + 1 - #E = {ap}", f.coeffs()[p as usize]))?;
        rows += 1;
    }
    ensure(report.rows.len() == rows, || "library trace report has a different row count".into())?;
    Ok(format!("a(p) = p + 1 - #E(F_p) for {rows} primes p <= 199"))
}

fn hecke_relations() -> Outcome {
    let registry = NewformRegistry::standard();
    let mut checks = 0;
    for rec in registry.records() {
        let r = verify_hecke(rec, 500).map_err(|e| format!("{}: {e}", rec.syntax()))?;
        checks += r.multiplicative_checks + r.prime_power_checks;
    }
    Ok(format!("{} newforms to precision 500, {checks} relations", registry.records().len()))
}

fn d_closure() -> Outcome {
    let registry = NewformRegistry::standard();
    let mut rows = 0;
    for level in [1u64, 2, 6] {
        for weight in (0..=8).step_by(2) {
            let report = d_closure_check(&registry, level, weight).map_err(|e| e.to_string())?;
            ensure(report.closed(), || format!("N = {level}, weight {weight}"))?;
            rows += report.rows.len();
        }
    }
    Ok(format!("{rows} atoms for N = 1, 2, 6 and weight <= 8"))
}

fn random_coordinate(rng: &mut ChaCha8Rng) -> CycNumber {
    if rng.gen_bool(0.2) {
        return CycNumber::from_i64(0);
    }
    let q = rat(rng.gen_range(-50..=50), rng.gen_range(1..=12));
    CycNumber::from_rational(q)
}

fn round_trip() -> Outcome {
    let registry = NewformRegistry::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(0x51ce);
    let (mut cases, mut escalated) = (0usize, 0usize);
    for level in [1u64, 2, 6] {
        for weight in (0..=12).step_by(2) {
            let dec = Decomposer::new(&registry, level, weight, PartSet::ALL).map_err(|e| e.to_string())?;
            let p = dec.precision();
            let columns: Vec<CycSeries> =
                dec.atoms().iter().map(|a| a.expand(p)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
            for _ in 0..100 {
                let coords: Vec<CycNumber> = (0..columns.len()).map(|_| random_coordinate(&mut rng)).collect();
                let mut f = CycSeries::zero(p);
                for (c, col) in coords.iter().zip(&columns) {
                    f.add_scaled_assign(c, col);
                }
                let d = dec.decompose(&f).map_err(|e| e.to_string())?;
                ensure(d.coordinates() == Some(coords.as_slice()), || {
                    format!("N = {level}, weight {weight}: coordinates differ")
                })?;
                cases += 1;
                if dec.escalations() > 0 {
                    escalated += 1;
                }
            }
        }
    }
    let clean = 100.0 * (cases - escalated) as f64 / cases as f64;
    ensure(clean >= 95.0, || format!("only {clean:.1}% of cases passed the rank check at P_req"))?;

    // A start precision far below the policy forces escalation.
    let forced = Decomposer::with_start_precision(&registry, 6, 8, PartSet::ALL, 8).map_err(|e| e.to_string())?;
    ensure(forced.escalations() > 0, || "escalation was not exercised".into())?;
    let p = forced.precision();
    let mut f = CycSeries::zero(p);
    let coords: Vec<CycNumber> = (0..forced.atoms().len()).map(|_| random_coordinate(&mut rng)).collect();
    for (c, a) in coords.iter().zip(forced.atoms()) {
        f.add_scaled_assign(c, &a.expand(p).map_err(|e| e.to_string())?);
    }
    let d = forced.decompose(&f).map_err(|e| e.to_string())?;
    ensure(d.coordinates() == Some(coords.as_slice()), || "escalated basis lost coordinates".into())?;
    Ok(format!(
        "{cases} combinations exact, {clean:.1}% without escalation, forced escalation to precision {p} ({} doublings)",
        forced.escalations()
    ))
}

fn census_runs() -> Outcome {
    let delta =
        eta_expand(&EtaProduct::new(&[(1, 24)]).map_err(|e| e.to_string())?, 100_001).map_err(|e| e.to_string())?;
    let r = census(&delta, 1, 100_000, &rat(1, 10)).map_err(|e| e.to_string())?;
    ensure(r.zero_primes.is_empty(), || format!("tau(p) = 0 at {:?}", r.zero_primes))?;
    let pi = (2..=100_000u64).filter(|&n| is_prime_naive(n)).count();
    ensure(r.considered() == pi, || format!("Delta: {} + {} != {pi}", r.zero_primes.len(), r.nonzero))?;

    let e4 = EisensteinAtom::new(4, qmf::characters::DirichletCharacter::trivial(1), 1)
        .map_err(|e| e.to_string())?
        .expand(10_001);
    let r = census(&e4, 1, 10_000, &rat(1, 10)).map_err(|e| e.to_string())?;
    ensure(r.zero_primes.is_empty(), || "E4 vanishes at a prime".into())?;
    ensure(r.considered() == 1229, || "E4 prime count".into())?;

    let r = census(&e4, 6, 10_000, &rat(1, 10)).map_err(|e| e.to_string())?;
    ensure(r.considered() == 1227, || "primes dividing N were not excluded".into())?;
    Ok("Delta to 1e5 and E4 to 1e4 without zeros; counts partition pi(X) - #{p | N}".into())
}

fn basis_sizes() -> Outcome {
    let a25 = eisenstein_basis(25, 4).map_err(|e| e.to_string())?.len();
    let a6 = eisenstein_basis(6, 2).map_err(|e| e.to_string())?.len();
    ensure(a25 == 6, || format!("|A(25,4)| = {a25}"))?;
    ensure(a6 == 3, || format!("|A(6,2)| = {a6}"))?;
    let cusps = cusp_count(6);
    ensure(a6 as u64 == cusps - 1, || format!("6 has {cusps} cusps"))?;
    Ok("|A(25,4)| = 6, |A(6,2)| = 3 = cusps(6) - 1".into())
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "MacMahon prime identity", limit: Some(Duration::from_secs(10)), run: macmahon_identity },
        Criterion { name: "MacMahon oracles", limit: None, run: macmahon_oracles },
        Criterion { name: "f_{1,3} prime detection", limit: None, run: f13_prime_detecting },
        Criterion {
            name: "decomposition with an old cusp part",
            limit: Some(Duration::from_secs(60)),
            run: f13_plus_old_decomposition,
        },
        Criterion { name: "old atoms vanish at good primes", limit: None, run: old_atoms_vanish },
        Criterion { name: "dilated Eisenstein atoms at good primes", limit: None, run: eisenstein_dilations },
        Criterion { name: "prime coefficient formulas", limit: None, run: prime_coefficient_formulas },
        Criterion { name: "level 11 traces", limit: Some(Duration::from_secs(5)), run: trace_at_11 },
        Criterion { name: "Hecke relations", limit: None, run: hecke_relations },
        Criterion { name: "D-closure", limit: None, run: d_closure },
        Criterion { name: "decomposition round trip", limit: None, run: round_trip },
        Criterion { name: "census", limit: Some(Duration::from_secs(180)), run: census_runs },
        Criterion { name: "basis sizes", limit: None, run: basis_sizes },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} pass [{elapsed:.2?}] {}: {detail}", i + 1, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{elapsed:.2?}] {}: {why}", i + 1, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
