//! Dimension formulas for cusp forms on `Gamma0(N)`, used to tell whether the
//! catalog holds every newform of a given level and weight.

use crate::arith::{divisors, euler_phi, factorize, gamma0_index, gcd};

fn kronecker_minus_four(p: u64) -> i64 {
    match p % 4 {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

fn kronecker_minus_three(p: u64) -> i64 {
    match p % 3 {
        1 => 1,
        2 => -1,
        _ => 0,
    }
}

/// Number of cusps of `Gamma0(N)`.
pub fn cusp_count(level: u64) -> u64 {
    divisors(level).iter().map(|&d| euler_phi(gcd(d, level / d))).sum()
}

fn elliptic_points(level: u64) -> (i64, i64) {
    let f = factorize(level);
    let e2 = if level.is_multiple_of(4) { 0 } else { f.iter().map(|&(p, _)| 1 + kronecker_minus_four(p)).product() };
    let e3 = if level.is_multiple_of(9) { 0 } else { f.iter().map(|&(p, _)| 1 + kronecker_minus_three(p)).product() };
    (e2, e3)
}

/// Genus of `X0(N)`.
pub fn genus(level: u64) -> i64 {
    let (e2, e3) = elliptic_points(level);
    let twelve_g = 12 + gamma0_index(level) as i64 - 3 * e2 - 4 * e3 - 6 * cusp_count(level) as i64;
    debug_assert_eq!(twelve_g % 12, 0);
    twelve_g / 12
}

/// `dim S_k(Gamma0(N))` for even `k >= 0`.
pub fn dim_cusp_forms(level: u64, weight: u32) -> u64 {
    let g = genus(level);
    match weight {
        0 => 0,
        2 => g as u64,
        k if k % 2 == 0 => {
            let k = k as i64;
            let (e2, e3) = elliptic_points(level);
            let c = cusp_count(level) as i64;
            ((k - 1) * (g - 1) + (k / 2 - 1) * c + e2 * (k / 4) + e3 * (k / 3)) as u64
        }
        _ => 0,
    }
}

/// `dim M_k(Gamma0(N))` for even `k >= 0`.
pub fn dim_modular_forms(level: u64, weight: u32) -> u64 {
    match weight {
        0 => 1,
        2 => dim_cusp_forms(level, 2) + cusp_count(level) - 1,
        k if k % 2 == 0 => dim_cusp_forms(level, k) + cusp_count(level),
        _ => 0,
    }
}

// beta(p) = -2, beta(p^2) = 1, beta(p^a) = 0 for a >= 3.
fn beta(n: u64) -> i64 {
    factorize(n)
        .into_iter()
        .map(|(_, a)| match a {
            1 => -2,
            2 => 1,
            _ => 0,
        })
        .product()
}

/// Dimension of the new subspace, by inverting `dim S_k(N) = sum_{M | N} d(N/M) dim S_k^new(M)`.
pub fn dim_new_cusp_forms(level: u64, weight: u32) -> u64 {
    let total: i64 = divisors(level).iter().map(|&m| beta(level / m) * dim_cusp_forms(m, weight) as i64).sum();
    debug_assert!(total >= 0);
    total as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::num_divisors;

    // Values from an independent computer algebra system, weights 2..12.
    const CUSP: [[u64; 6]; 12] = [
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 1, 2],
        [0, 0, 1, 1, 2, 3],
        [0, 0, 1, 2, 3, 4],
        [0, 1, 1, 3, 3, 5],
        [0, 1, 3, 5, 7, 9],
        [0, 1, 3, 3, 5, 7],
        [0, 1, 3, 5, 7, 9],
        [0, 1, 3, 5, 7, 9],
        [0, 3, 5, 9, 11, 15],
        [1, 2, 4, 6, 8, 10],
        [0, 3, 7, 11, 15, 19],
    ];
    const MODULAR: [[u64; 6]; 12] = [
        [0, 1, 1, 1, 1, 2],
        [1, 2, 2, 3, 3, 4],
        [1, 2, 3, 3, 4, 5],
        [2, 3, 4, 5, 6, 7],
        [1, 3, 3, 5, 5, 7],
        [3, 5, 7, 9, 11, 13],
        [1, 3, 5, 5, 7, 9],
        [3, 5, 7, 9, 11, 13],
        [3, 5, 7, 9, 11, 13],
        [3, 7, 9, 13, 15, 19],
        [2, 4, 6, 8, 10, 12],
        [5, 9, 13, 17, 21, 25],
    ];

    #[test]
    fn matches_reference_table() {
        for n in 1..=12u64 {
            for (i, k) in (2..=12u32).step_by(2).enumerate() {
                assert_eq!(dim_cusp_forms(n, k), CUSP[n as usize - 1][i], "S_{k}({n})");
                assert_eq!(dim_modular_forms(n, k), MODULAR[n as usize - 1][i], "M_{k}({n})");
            }
        }
    }

    #[test]
    fn new_dimensions() {
        assert_eq!(dim_new_cusp_forms(1, 12), 1);
        assert_eq!(dim_new_cusp_forms(2, 12), 0);
        assert_eq!(dim_new_cusp_forms(2, 10), 1);
        assert_eq!(dim_new_cusp_forms(11, 2), 1);
        assert_eq!(dim_new_cusp_forms(7, 10), 5);
        assert_eq!(dim_new_cusp_forms(12, 6), 0);
        for n in 1..=60u64 {
            for k in (2..=12u32).step_by(2) {
                let sum: u64 = divisors(n).iter().map(|&m| num_divisors(n / m) * dim_new_cusp_forms(m, k)).sum();
                assert_eq!(sum, dim_cusp_forms(n, k), "N = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn genus_values() {
        let g: Vec<i64> = [1, 11, 23, 37, 60].iter().map(|&n| genus(n)).collect();
        assert_eq!(g, vec![0, 1, 2, 2, 7]);
    }
}
