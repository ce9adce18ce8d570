//! Exact branch-and-bound upper bounds for polynomials over boxes.
//!
//! Each box `c ± r` stores the integer coefficients of p(c + r·t) in the
//! normalised coordinates t ∈ [−1, 1]^d over a common denominator, so the
//! bound a₀ + Σ|a_α| is rigorous and subdivision is integer arithmetic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::multi::MultiPoly;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Linear constraint Σ coeffs·v ≤ bound.
#[derive(Debug, Clone)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub bound: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, bound: Rational) -> Self {
        LinearConstraint { coeffs, bound }
    }

    fn value(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().zip(point).map(|(a, v)| a * v).sum()
    }

    fn min_over(&self, lo: &[Rational], hi: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| if a.is_negative() { a * &hi[i] } else { a * &lo[i] })
            .sum()
    }
}

/// Axis-aligned box with rational bounds, one interval per variable.
#[derive(Debug, Clone)]
pub struct BoxDomain {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl BoxDomain {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::Polynomial("malformed box".into()));
        }
        Ok(BoxDomain { lo, hi })
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxBound {
    /// Certified upper bound on the maximum over the feasible region.
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
    /// Best exactly evaluated feasible sample, if any was found.
    #[serde(with = "rational::serde_str_opt")]
    pub lower: Option<Rational>,
    pub boxes: usize,
    /// `upper − lower ≤ tol` was reached within the budget.
    pub converged: bool,
}

/// Default number of box evaluations before giving up.
pub const DEFAULT_BOX_BUDGET: usize = 2_000_000;

struct Cell {
    lo: Vec<Rational>,
    hi: Vec<Rational>,
    /// Numerators of the Taylor coefficients in t, dense over the degree grid.
    coeffs: Vec<BigInt>,
    /// Common denominator is base_den · 2^shift.
    shift: u64,
    upper: Rational,
}

impl PartialEq for Cell {
    fn eq(&self, o: &Self) -> bool {
        self.upper == o.upper
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Cell {
    fn cmp(&self, o: &Self) -> Ordering {
        self.upper.cmp(&o.upper)
    }
}

struct Grid {
    dims: Vec<usize>,
    strides: Vec<usize>,
    base_den: BigInt,
}

impl Grid {
    fn len(&self) -> usize {
        self.dims.iter().product()
    }

    fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            out[i] = idx / self.strides[i];
            idx %= self.strides[i];
        }
        out
    }
}

/// Rigorous upper bound on max p over `domain ∩ {constraints}`, refined until
/// it is within `tol` of an exactly evaluated feasible value or the budget ends.
pub fn bb_max_bound(
    p: &MultiPoly,
    domain: &BoxDomain,
    constraints: &[LinearConstraint],
    tol: &Rational,
    budget: usize,
) -> Result<MaxBound> {
    let d = p.vars().len();
    if domain.lo.len() != d {
        return Err(Error::Polynomial(format!("box has {} dimensions for {d} variables", domain.lo.len())));
    }
    if constraints.iter().any(|c| c.coeffs.len() != d) {
        return Err(Error::Polynomial("constraint dimension mismatch".into()));
    }
    if !tol.is_positive() {
        return Err(Error::Polynomial("tolerance must be positive".into()));
    }
    let dims: Vec<usize> = (0..d).map(|i| p.degree_in(i) as usize + 1).collect();
    let mut strides = vec![1; d];
    for i in 1..d {
        strides[i] = strides[i - 1] * dims[i - 1];
    }
    let two = Rational::from_integer(2.into());
    // p(c + r t) as a rational polynomial in t.
    let vars = p.vars();
    let mut shifted = p.clone();
    for i in 0..d {
        let c = (&domain.lo[i] + &domain.hi[i]) / &two;
        let r = (&domain.hi[i] - &domain.lo[i]) / &two;
        let t = &MultiPoly::constant(&vars, c) + &MultiPoly::var(&vars, vars[i])?.scale(&r);
        shifted = shifted.substitute(i, &t);
    }
    let mut base_den = BigInt::one();
    for c in shifted.terms().values() {
        base_den = base_den.lcm(c.denom());
    }
    let mut grid = Grid { dims, strides, base_den };
    let mut coeffs = vec![BigInt::zero(); grid.len().max(1)];
    if grid.dims.is_empty() {
        grid.dims.push(1);
        grid.strides.push(1);
    }
    for (e, c) in shifted.terms() {
        let idx: usize = e.iter().zip(&grid.strides).map(|(&k, s)| k as usize * s).sum();
        coeffs[idx] = (c * Rational::from_integer(grid.base_den.clone())).to_integer();
    }
    let mut heap = BinaryHeap::new();
    let mut best: Option<Rational> = None;
    let root = make_cell(&grid, domain.lo.clone(), domain.hi.clone(), coeffs, 0);
    let mut boxes = 1;
    consider(&grid, &root, constraints, &mut best);
    if feasible(&root, constraints) {
        heap.push(root);
    }
    while let Some(cell) = heap.pop() {
        if let Some(b) = &best {
            if &cell.upper - b <= *tol {
                return Ok(MaxBound { upper: cell.upper, lower: best, boxes, converged: true });
            }
        }
        if boxes >= budget {
            return Ok(MaxBound { upper: cell.upper, lower: best, boxes, converged: false });
        }
        for child in split(&grid, &cell) {
            boxes += 1;
            if feasible(&child, constraints) {
                consider(&grid, &child, constraints, &mut best);
                heap.push(child);
            }
        }
    }
    // Empty feasible region: the maximum is vacuous.
    Ok(MaxBound { upper: best.clone().unwrap_or_else(Rational::zero), lower: best, boxes, converged: true })
}

fn make_cell(grid: &Grid, lo: Vec<Rational>, hi: Vec<Rational>, coeffs: Vec<BigInt>, shift: u64) -> Cell {
    let mut num = coeffs[0].clone();
    for c in &coeffs[1..] {
        num += c.abs();
    }
    let upper = Rational::new(num, &grid.base_den << shift);
    Cell { lo, hi, coeffs, shift, upper }
}

fn feasible(cell: &Cell, constraints: &[LinearConstraint]) -> bool {
    constraints.iter().all(|c| c.min_over(&cell.lo, &cell.hi) <= c.bound)
}

/// Updates the best feasible value with the centre and corners of the cell.
fn consider(grid: &Grid, cell: &Cell, constraints: &[LinearConstraint], best: &mut Option<Rational>) {
    let d = cell.lo.len();
    let den = &grid.base_den << cell.shift;
    let two = Rational::from_integer(2.into());
    let mut samples: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let centre: Vec<Rational> = (0..d).map(|i| (&cell.lo[i] + &cell.hi[i]) / &two).collect();
    samples.push((centre, Rational::new(cell.coeffs[0].clone(), den.clone())));
    for corner in 0..1usize << d {
        let point: Vec<Rational> =
            (0..d).map(|i| if corner >> i & 1 == 1 { cell.hi[i].clone() } else { cell.lo[i].clone() }).collect();
        let mut num = BigInt::zero();
        for (idx, c) in cell.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = grid.unflatten(idx);
            let odd: usize = (0..d).filter(|&i| corner >> i & 1 == 0 && e[i] % 2 == 1).count();
            if odd % 2 == 1 {
                num -= c;
            } else {
                num += c;
            }
        }
        samples.push((point, Rational::new(num, den.clone())));
    }
    for (point, value) in samples {
        if constraints.iter().all(|c| c.value(&point) <= c.bound) && best.as_ref().is_none_or(|b| value > *b) {
            *best = Some(value);
        }
    }
}

/// Halves the cell along its widest side.
fn split(grid: &Grid, cell: &Cell) -> [Cell; 2] {
    let d = cell.lo.len();
    let axis = (0..d)
        .max_by(|&a, &b| (&cell.hi[a] - &cell.lo[a]).cmp(&(&cell.hi[b] - &cell.lo[b])).then(b.cmp(&a)))
        .unwrap_or(0);
    let two = Rational::from_integer(2.into());
    let mid = (&cell.lo[axis] + &cell.hi[axis]) / &two;
    let deg = grid.dims[axis] - 1;
    let make = |sign: i64| {
        // t = (s + sign)/2: b_j = Σ_m a_m C(m,j) sign^{m−j} 2^{deg−m}.
        let mut out = vec![BigInt::zero(); cell.coeffs.len()];
        let stride = grid.strides[axis];
        for base in 0..cell.coeffs.len() {
            if !(base / stride).is_multiple_of(grid.dims[axis]) {
                continue;
            }
            for m in 0..=deg {
                let a = &cell.coeffs[base + m * stride];
                if a.is_zero() {
                    continue;
                }
                let scaled = a << (deg - m);
                for j in 0..=m {
                    let term = &scaled * BigInt::from(crate::rational::binomial(m as u64, j as u64));
                    if sign < 0 && (m - j) % 2 == 1 {
                        out[base + j * stride] -= term;
                    } else {
                        out[base + j * stride] += term;
                    }
                }
            }
        }
        out
    };
    let shift = cell.shift + deg as u64;
    let mut left_hi = cell.hi.clone();
    left_hi[axis] = mid.clone();
    let mut right_lo = cell.lo.clone();
    right_lo[axis] = mid;
    [
        make_cell(grid, cell.lo.clone(), left_hi, make(-1), shift),
        make_cell(grid, right_lo, cell.hi.clone(), make(1), shift),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn parabola() {
        let p = MultiPoly::parse(&["y"], "y - y^2").unwrap();
        let tol = rat(1, 1_000_000);
        let b = bb_max_bound(&p, &BoxDomain::interval(int(0), int(1)).unwrap(), &[], &tol, DEFAULT_BOX_BUDGET).unwrap();
        assert!(b.converged);
        assert!(b.upper >= rat(1, 4) && b.upper <= rat(1, 4) + tol);
    }

    #[test]
    fn two_variables_with_constraint() {
        let vars = ["y", "z"];
        let p = MultiPoly::parse(&vars, "z - y").unwrap();
        let dom = BoxDomain::new(vec![int(0), int(0)], vec![int(1), int(1)]).unwrap();
        let below = LinearConstraint::new(vec![int(-1), int(1)], int(0));
        let tol = rat(1, 1000);
        let b = bb_max_bound(&p, &dom, &[below], &tol, DEFAULT_BOX_BUDGET).unwrap();
        assert!(b.converged);
        assert!(b.upper >= int(0) && b.upper <= tol.clone());
        let free = bb_max_bound(&p, &dom, &[], &tol, DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(free.upper, int(1));
    }

    #[test]
    fn budget_exhaustion() {
        let p = MultiPoly::parse(&["y"], "y - y^2").unwrap();
        let b = bb_max_bound(&p, &BoxDomain::interval(int(0), int(1)).unwrap(), &[], &rat(1, 1 << 40), 3).unwrap();
        assert!(!b.converged);
        assert!(b.upper >= rat(1, 4));
    }
}
