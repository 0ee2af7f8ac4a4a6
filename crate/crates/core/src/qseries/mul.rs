use crate::scalar::Ring;

/// Above this precision products go through Karatsuba instead of schoolbook.
pub const KARATSUBA_THRESHOLD: usize = 4096;

// Base case size inside the Karatsuba recursion.
const KARATSUBA_LEAF: usize = 48;

pub(crate) fn truncated_product<T: Ring>(a: &[T], b: &[T], p: usize) -> Vec<T> {
    if p > KARATSUBA_THRESHOLD {
        let mut full = karatsuba(&a[..p], &b[..p]);
        full.truncate(p);
        return full;
    }
    schoolbook_truncated(a, b, p)
}

fn schoolbook_truncated<T: Ring>(a: &[T], b: &[T], p: usize) -> Vec<T> {
    let mut out = vec![T::zero(); p];
    for (i, x) in a.iter().enumerate().take(p) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(p - i) {
            out[i + j].add_mul_assign(x, y);
        }
    }
    out
}

fn schoolbook_full<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j].add_mul_assign(x, y);
        }
    }
    out
}

/// Full product `a * b` for equal-length inputs.
fn karatsuba<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n <= KARATSUBA_LEAF {
        return schoolbook_full(a, b);
    }
    let m = n / 2;
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sa = padded_sum(a0, a1);
    let sb = padded_sum(b0, b1);
    let mut z1 = karatsuba(&sa, &sb);
    for (i, c) in z0.iter().enumerate() {
        z1[i].sub_assign_ref(c);
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i].sub_assign_ref(c);
    }
    let mut out = vec![T::zero(); 2 * n - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] = c;
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * m].add_assign_ref(&c);
    }
    for (i, c) in z1.iter().enumerate() {
        if i + m < out.len() {
            out[i + m].add_assign_ref(c);
        }
    }
    out
}

fn padded_sum<T: Ring>(lo: &[T], hi: &[T]) -> Vec<T> {
    let len = lo.len().max(hi.len());
    (0..len)
        .map(|i| match (lo.get(i), hi.get(i)) {
            (Some(x), Some(y)) => x.add_ref(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => T::zero(),
        })
        .collect()
}
