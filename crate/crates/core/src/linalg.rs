//! Minimal dense linear algebra: LU with partial pivoting, enough for the
//! solver's Newton corrections.

use crate::err::{Error, Result};
use crate::num;
use alloc::vec::Vec;

/// Solves `A x = b` in place (`a` row-major `n×n`, overwritten by the
/// factorisation; `b` overwritten by the solution).
pub(crate) fn lu_solve(a: &mut [f64], n: usize, b: &mut [f64]) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let mut piv: Vec<usize> = (0..n).collect();
    for col in 0..n {
        // pivot
        let mut best = col;
        let mut best_val = num::abs(a[piv[col] * n + col]);
        for row in col + 1..n {
            let v = num::abs(a[piv[row] * n + col]);
            if v > best_val {
                best = row;
                best_val = v;
            }
        }
        if best_val == 0.0 {
            return Err(Error::Precondition("singular Jacobian in Newton correction"));
        }
        piv.swap(col, best);
        let prow = piv[col];
        let pivot = a[prow * n + col];
        for row in col + 1..n {
            let r = piv[row];
            let f = a[r * n + col] / pivot;
            a[r * n + col] = f;
            if f != 0.0 {
                for k in col + 1..n {
                    a[r * n + k] -= f * a[prow * n + k];
                }
            }
        }
    }
    // forward substitution on the permuted rows
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = b[piv[i]];
        for k in 0..i {
            acc -= a[piv[i] * n + k] * y[k];
        }
        y.push(acc);
    }
    // back substitution
    for i in (0..n).rev() {
        let mut acc = y[i];
        for k in i + 1..n {
            acc -= a[piv[i] * n + k] * b[k];
        }
        b[i] = acc / a[piv[i] * n + i];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // A = [[2,1,0],[1,3,1],[0,1,4]], x = [1,-2,3] → b = [0,-2,10]
        let mut a = alloc::vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0];
        let mut b = alloc::vec![0.0, -2.0, 10.0];
        lu_solve(&mut a, 3, &mut b).unwrap();
        assert!((b[0] - 1.0).abs() < 1e-13);
        assert!((b[1] + 2.0).abs() < 1e-13);
        assert!((b[2] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn detects_singularity() {
        let mut a = alloc::vec![1.0, 2.0, 2.0, 4.0];
        let mut b = alloc::vec![1.0, 2.0];
        assert!(lu_solve(&mut a, 2, &mut b).is_err());
    }

    #[test]
    fn random_ish_system_roundtrip() {
        let n = 40;
        let mut a = alloc::vec![0.0; n * n];
        // deterministic pseudo-random fill, diagonally dominated
        let mut state = 0x243f6a88u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = next() + if i == j { 8.0 } else { 0.0 };
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut b = alloc::vec![0.0; n];
        for i in 0..n {
            b[i] = (0..n).map(|j| a[i * n + j] * x_true[j]).sum();
        }
        let mut a2 = a.clone();
        lu_solve(&mut a2, n, &mut b).unwrap();
        for i in 0..n {
            assert!((b[i] - x_true[i]).abs() < 1e-10);
        }
    }
}
