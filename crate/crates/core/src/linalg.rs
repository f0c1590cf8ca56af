//! Small exact linear-algebra kernels over Q and Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::scalars::Rational;

/// Row echelon form (elimination below pivots only, rows kept unscaled).
/// Returns the nonzero echelon rows and their pivot columns.
pub fn echelon(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let Some(k) = m.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let pivot = m.remove(k);
        for r in m.iter_mut() {
            if !r[col].is_zero() {
                let f = &r[col] / &pivot[col];
                for (x, p) in r.iter_mut().zip(&pivot).skip(col) {
                    *x -= &f * p;
                }
            }
        }
        out.push(pivot);
        pivots.push(col);
    }
    (out, pivots)
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    echelon(rows).1.len()
}

/// Reduced row echelon form with unit pivots.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let (mut e, pivots) = echelon(rows);
    for k in (0..e.len()).rev() {
        let pc = pivots[k];
        let lead = e[k][pc].clone();
        for x in e[k].iter_mut() {
            *x /= &lead;
        }
        for j in 0..k {
            if !e[j][pc].is_zero() {
                let f = e[j][pc].clone();
                let row = e[k].clone();
                for (x, p) in e[j].iter_mut().zip(&row) {
                    *x -= &f * p;
                }
            }
        }
    }
    (e, pivots)
}

/// Reduces `v` modulo the row space of an rref basis, returning the
/// canonical representative with zeros at the pivot columns.
pub fn reduce_mod_span(basis: &(Vec<Vec<Rational>>, Vec<usize>), v: &[Rational]) -> Vec<Rational> {
    let mut out = v.to_vec();
    for (row, &pc) in basis.0.iter().zip(&basis.1) {
        if !out[pc].is_zero() {
            let f = out[pc].clone();
            for (x, p) in out.iter_mut().zip(row) {
                *x -= &f * p;
            }
        }
    }
    out
}

pub fn common_denominator(rows: &[Vec<Rational>]) -> BigInt {
    rows.iter()
        .flatten()
        .fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()))
}

pub fn scale_to_integers(rows: &[Vec<Rational>], d: &BigInt) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|q| (q * Rational::from_integer(d.clone())).to_integer()).collect())
        .collect()
}

/// Hermite-style integer echelon basis of the lattice spanned by `rows`:
/// nonzero rows with strictly increasing pivot columns and positive pivots.
pub fn integer_echelon(rows: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            let prow = m[best].clone();
            for &i in &nz {
                if i != best {
                    let f = m[i][col].div_floor(&prow[col]);
                    for (x, p) in m[i].iter_mut().zip(&prow) {
                        *x -= &f * p;
                    }
                }
            }
        }
        if let Some(k) = m.iter().position(|r| !r[col].is_zero()) {
            let mut pivot = m.remove(k);
            if pivot[col].is_negative() {
                for x in pivot.iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(pivot);
            pivots.push(col);
        }
        m.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    (out, pivots)
}

/// Membership of an integer vector in the lattice of an integer echelon basis.
pub fn in_lattice(basis: &(Vec<Vec<BigInt>>, Vec<usize>), v: &[BigInt]) -> bool {
    let mut w = v.to_vec();
    let mut k = 0;
    for col in 0..w.len() {
        if w[col].is_zero() {
            continue;
        }
        while k < basis.1.len() && basis.1[k] < col {
            k += 1;
        }
        if k >= basis.1.len() || basis.1[k] != col {
            return false;
        }
        let row = &basis.0[k];
        let (q, r) = w[col].div_rem(&row[col]);
        if !r.is_zero() {
            return false;
        }
        for (x, p) in w.iter_mut().zip(row) {
            *x -= &q * p;
        }
    }
    true
}
