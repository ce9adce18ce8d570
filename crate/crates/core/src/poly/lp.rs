//! Search for positive multipliers r with p·r having nonnegative coefficients.

use num_bigint::BigInt;
use num_traits::Signed;

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Every coefficient of r is positive and every coefficient of p·r is positive.
pub fn product_strictly_positive(p: &UniPoly, r: &UniPoly) -> bool {
    let prod = p * r;
    coefficients_positive(r) && coefficients_positive(&prod)
}

/// Acceptance rule for positivity on (0, ∞): r has positive coefficients and
/// p·r has nonnegative coefficients with positive constant and leading terms.
pub fn multiplier_certifies(p: &UniPoly, r: &UniPoly) -> bool {
    let prod = p * r;
    coefficients_positive(r)
        && prod.coeffs().iter().all(|c| !c.is_negative())
        && prod.coeff(0).is_positive()
        && prod.lead().is_positive()
}

fn coefficients_positive(p: &UniPoly) -> bool {
    !p.is_zero() && p.coeffs().iter().all(|c| c.is_positive())
}

/// Finds r of degree ≤ `degree` with integer coefficients certifying p > 0 on
/// (0, ∞): floating simplex, then scaling by powers of ten and rounding, then
/// exact verification. `None` means the search failed, not that p has a root.
pub fn positive_multiplier_lp(p: &UniPoly, degree: usize) -> Result<Option<UniPoly>> {
    if !p.coeff(0).is_positive() {
        return Err(Error::Polynomial("multiplier search needs p(0) > 0".into()));
    }
    for d in 0..=degree {
        if let Some(r) = search_degree(p, d)? {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn search_degree(p: &UniPoly, d: usize) -> Result<Option<UniPoly>> {
    let pc = p.coeffs_f64();
    let scale = pc.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let pc: Vec<f64> = pc.iter().map(|c| c / scale).collect();
    let n_r = d + 1;
    let n_prod = pc.len() + d;
    // Variables r_0..r_d, t. Maximise t subject to
    // t − (p·r)_j ≤ 0, t − r_i ≤ 0, Σ r_i ≤ 1.
    let n_vars = n_r + 1;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..n_prod {
        let mut row = vec![0.0; n_vars];
        for i in 0..n_r {
            if j >= i && j - i < pc.len() {
                row[i] = -pc[j - i];
            }
        }
        row[n_r] = 1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    for i in 0..n_r {
        let mut row = vec![0.0; n_vars];
        row[i] = -1.0;
        row[n_r] = 1.0;
        rows.push(row);
        rhs.push(0.0);
    }
    let mut row = vec![1.0; n_vars];
    row[n_r] = 0.0;
    rows.push(row);
    rhs.push(1.0);
    let mut objective = vec![0.0; n_vars];
    objective[n_r] = 1.0;
    let Some(solution) = simplex_max(&rows, &rhs, &objective) else {
        return Ok(None);
    };
    if solution[n_r] <= 0.0 {
        return Ok(None);
    }
    let r = &solution[..n_r];
    let top = r.iter().fold(0.0f64, |m, v| m.max(*v));
    for digits in 3..=30u32 {
        let factor = 10f64.powi(digits as i32) / top;
        let ints: Vec<BigInt> = r
            .iter()
            .map(|v| BigInt::from(((v * factor).round().max(0.0)) as i128))
            .collect();
        let cand = UniPoly::new(ints.into_iter().map(Rational::from_integer).collect());
        if multiplier_certifies(p, &cand) {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// Dense tableau simplex for max cᵀx, Ax ≤ b, x ≥ 0 with b ≥ 0 (Bland's rule).
fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t = vec![vec![0.0; width]; m + 1];
    for i in 0..m {
        t[i][..n].copy_from_slice(&a[i]);
        t[i][n + i] = 1.0;
        t[i][width - 1] = b[i];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let eps = 1e-12;
    for _ in 0..50_000 {
        let Some(col) = (0..n + m).find(|&j| t[m][j] < -eps) else {
            let mut x = vec![0.0; n];
            for (i, &bv) in basis.iter().enumerate() {
                if bv < n {
                    x[bv] = t[i][width - 1];
                }
            }
            return Some(x);
        };
        let mut pivot: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][col] > eps {
                let ratio = t[i][width - 1] / t[i][col];
                match pivot {
                    Some((r, best)) if ratio > best + eps || (ratio >= best - eps && basis[i] > basis[r]) => {}
                    _ => pivot = Some((i, ratio)),
                }
            }
        }
        let (row, _) = pivot?;
        let pv = t[row][col];
        for v in t[row].iter_mut() {
            *v /= pv;
        }
        let pivot_row = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != row && r[col].abs() > 0.0 {
                let f = r[col];
                for (v, pvv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pvv;
                }
            }
        }
        basis[row] = col;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_multiplier() {
        let p = UniPoly::from_ints(&[1, 1]);
        let r = positive_multiplier_lp(&p, 0).unwrap().unwrap();
        assert_eq!(r.degree(), Some(0));
    }

    #[test]
    fn acceptance_rule() {
        let p = UniPoly::from_ints(&[1, -1, 1]);
        let r1 = UniPoly::from_ints(&[1, 1]);
        assert!(multiplier_certifies(&p, &r1));
        assert!(!product_strictly_positive(&p, &r1));
        let found = positive_multiplier_lp(&p, 3).unwrap();
        assert!(found.is_some_and(|r| multiplier_certifies(&p, &r)));
        let q = UniPoly::from_ints(&[1, -3, 1]);
        assert!(positive_multiplier_lp(&q, 4).unwrap().is_none());
        assert!(positive_multiplier_lp(&UniPoly::from_ints(&[-1, 1]), 2).is_err());
    }
}
