//! The degree class group `Δ_X^0 = ℤ^γ_0 / Λ_X`.
//!
//! `Λ_X` is generated by the multidegrees `C̲_i` of the components: row `i`
//! carries `|C_i ∩ C_j|` at `j ≠ i` and `−Σ_{k≠i} |C_i ∩ C_k|` on the diagonal.
//! These rows sum to zero, span a lattice of rank `γ − 1`, and the quotient of
//! the zero-sum vectors by them is finite of order `c(X)`, the number of
//! spanning trees of the dual graph.
//!
//! All arithmetic is on arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::curve::CurveGraph;
use crate::error::{Error, Result};
use crate::stability::Multidegree;

type Matrix = Vec<Vec<BigInt>>;

/// Structure of `Δ_X^0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroup {
    generators: Vec<Vec<i64>>,
    invariant_factors: Vec<BigInt>,
    order: BigInt,
    echelon: Matrix,
}

impl ClassGroup {
    /// Rows `C̲_1, …, C̲_γ`.
    pub fn lattice_generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Invariant factors `d_1 | d_2 | …`, all greater than one.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// `c(X)`.
    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Canonical representative of `d + Λ_X`: every pivot coordinate of the
    /// echelon basis is brought into `[0, pivot)`. Two multidegrees of equal
    /// total are equivalent iff their reductions agree.
    pub fn reduce(&self, d: &Multidegree) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = d.values().iter().map(|&x| BigInt::from(x)).collect();
        for row in &self.echelon {
            let c = row.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero");
            let quot = v[c].div_floor(&row[c]);
            for (x, r) in v.iter_mut().zip(row) {
                *x -= &quot * r;
            }
        }
        v
    }

    /// Whether `v ∈ Λ_X`.
    pub fn contains(&self, v: &[i64]) -> bool {
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        if v.len() != self.generators.len() {
            return false;
        }
        let mut rows = self.echelon.iter().peekable();
        for c in 0..v.len() {
            match rows.peek() {
                Some(row) if !row[c].is_zero() => {
                    let (quot, rem) = v[c].div_rem(&row[c]);
                    if !rem.is_zero() {
                        return false;
                    }
                    for (x, r) in v.iter_mut().zip(row.iter()) {
                        *x -= &quot * r;
                    }
                    rows.next();
                }
                _ => {
                    if !v[c].is_zero() {
                        return false;
                    }
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }
}

/// `C̲_i` rows from the intersection matrix.
pub fn lattice_generators(g: &CurveGraph) -> Vec<Vec<i64>> {
    let n = g.num_components();
    (0..n)
        .map(|i| {
            let mut row: Vec<i64> = (0..n).map(|j| i64::from(g.intersection(i, j))).collect();
            row[i] = -row.iter().sum::<i64>();
            row
        })
        .collect()
}

/// Computes `Δ_X^0` through a Smith normal form of the generators restricted
/// to the zero-sum sublattice (last coordinate dropped).
pub fn build_class_group(g: &CurveGraph) -> ClassGroup {
    let generators = lattice_generators(g);
    let n = generators.len();
    let projected: Matrix = generators
        .iter()
        .map(|row| row[..n - 1].iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let diagonal = smith_diagonal(projected);
    let invariant_factors: Vec<BigInt> = diagonal.into_iter().filter(|d| !d.is_one()).collect();
    let order = invariant_factors.iter().product();
    let echelon = row_echelon(
        generators
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    );
    ClassGroup {
        generators,
        invariant_factors,
        order,
        echelon,
    }
}

/// `d1 ≡ d2` modulo `Λ_X`. Multidegrees of different totals are an error.
pub fn same_class(cg: &ClassGroup, d1: &Multidegree, d2: &Multidegree) -> Result<bool> {
    let n = cg.generators.len();
    for d in [d1, d2] {
        if d.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: d.len(),
            });
        }
    }
    if d1.total() != d2.total() {
        return Err(Error::DegreeMismatch {
            multidegree: d1.total(),
            polarization: d2.total(),
        });
    }
    Ok(cg.contains(d1.difference(d2).values()))
}

/// Number of spanning trees: the determinant of the Laplacian with its last
/// row and column removed.
pub fn spanning_tree_count(g: &CurveGraph) -> BigInt {
    let n = g.num_components();
    let laplacian: Matrix = lattice_generators(g)
        .iter()
        .take(n - 1)
        .map(|row| row[..n - 1].iter().map(|&x| BigInt::from(-x)).collect())
        .collect();
    determinant(laplacian)
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn determinant(mut m: Matrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Nonzero diagonal entries of the Smith normal form, each dividing the next.
pub(crate) fn smith_diagonal(mut m: Matrix) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for t in 0..rows.min(cols) {
        // pivot: smallest nonzero entry of the trailing block
        let Some((pr, pc)) = min_entry(&m, t) else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = m[r][t].div_floor(&m[t][t]);
                let pivot_row = m[t].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !m[r][t].is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = m[t][c].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let p = row[t].clone();
                    row[c] -= &q * p;
                }
                if !m[t][c].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility: fold any offending row into the pivot row
                let offender = (t + 1..rows)
                    .find(|&r| (t + 1..cols).any(|c| !(&m[r][c] % &m[t][t]).is_zero()));
                match offender {
                    Some(r) => {
                        let extra = m[r].clone();
                        for (x, e) in m[t].iter_mut().zip(&extra) {
                            *x += e;
                        }
                    }
                    None => break,
                }
            }
            let (pr, pc) = min_entry(&m, t).expect("pivot block is nonzero");
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
        }
        out.push(m[t][t].abs());
    }
    out
}

fn min_entry(m: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in m.iter().enumerate().skip(t) {
        for (c, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| x.abs() < m[br][bc].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Integer row echelon form with positive pivots; zero rows dropped.
pub(crate) fn row_echelon(mut m: Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    let mut out: Matrix = Vec::new();
    for c in 0..cols {
        loop {
            // Euclid on column c among the remaining rows
            let live: Vec<usize> = (0..m.len()).filter(|&r| !m[r][c].is_zero()).collect();
            if live.len() <= 1 {
                break;
            }
            let p = *live
                .iter()
                .min_by(|&&a, &&b| m[a][c].abs().cmp(&m[b][c].abs()))
                .unwrap();
            let pivot = m[p].clone();
            for &r in live.iter().filter(|&&r| r != p) {
                let q = m[r][c].div_floor(&pivot[c]);
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(r) = (0..m.len()).find(|&r| !m[r][c].is_zero()) {
            let mut row = m.swap_remove(r);
            if row[c].is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(row);
        }
    }
    out
}
