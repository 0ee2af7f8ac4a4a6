//! Exact linear systems `A c = f` where the columns of `A` are q-expansions.
//!
//! Rows are indexed by the exponent `n`; pivots are always taken from the
//! lowest available row so the choice is deterministic.

mod modular;

pub use modular::{ModularOutcome, ModularSystem};

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<T> {
    Unique(Vec<T>),
    NotInSpan,
    RankDeficient { rank: usize },
}

/// Row echelon form of `[A | f]` by Gaussian elimination over `T`.
///
/// `rows[n]` is row `n` of `A`; every row must have the same length.
pub fn exact_solve<T: Field>(rows: &[Vec<T>], rhs: &[T]) -> SolveOutcome<T> {
    assert_eq!(rows.len(), rhs.len(), "one right-hand side entry per row");
    let m = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<T>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, f)| {
            let mut row = r.clone();
            row.push(f.clone());
            row
        })
        .collect();
    let pivots = eliminate(&mut a, m);
    if pivots.len() < m {
        return SolveOutcome::RankDeficient { rank: pivots.len() };
    }
    if a[m..].iter().any(|row| !row[m].is_zero()) {
        return SolveOutcome::NotInSpan;
    }
    // Back substitution on the upper-triangular block with unit diagonal.
    let mut c: Vec<T> = vec![T::zero(); m];
    for j in (0..m).rev() {
        let mut v = a[j][m].clone();
        for k in j + 1..m {
            if !a[j][k].is_zero() {
                v.sub_assign_ref(&a[j][k].mul_ref(&c[k]));
            }
        }
        c[j] = v;
    }
    SolveOutcome::Unique(c)
}

pub fn exact_rank<T: Field>(rows: &[Vec<T>]) -> usize {
    let m = rows.first().map_or(0, Vec::len);
    let mut a = rows.to_vec();
    eliminate(&mut a, m).len()
}

/// Forward elimination on the first `m` columns. Pivot rows are moved to the
/// top in column order and scaled to 1; returns the pivot columns.
fn eliminate<T: Field>(a: &mut [Vec<T>], m: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..m {
        let Some(p) = (top..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a[top..=p].rotate_right(1);
        let inv = a[top][col].inv().expect("pivot is nonzero");
        for x in a[top][col..].iter_mut() {
            if !x.is_zero() {
                *x = x.mul_ref(&inv);
            }
        }
        let (head, tail) = a.split_at_mut(top + 1);
        let pivot_row = &head[top];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            if factor.is_zero() {
                continue;
            }
            for k in col..pivot_row.len() {
                if !pivot_row[k].is_zero() {
                    let d = factor.mul_ref(&pivot_row[k]);
                    row[k].sub_assign_ref(&d);
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    pivots
}
