//! Stability of line-bundle multidegrees.
//!
//! A multidegree `d` with `|d| = |q|` is `q`-semistable when
//! `d_Y ≥ q_Y − δ_Y/2` for every proper subcurve `Y`, and stable when all of
//! these inequalities are strict. Both conditions only need checking on the
//! biconnected subcurves. For a general `q` the two notions agree, and the
//! stable multidegrees index the irreducible components of the fine
//! compactified Jacobian: there are exactly `c(X)` of them, one in every class
//! of the degree class group.

use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::curve::{CurveGraph, Subcurve};
use crate::error::{Error, Result};
use crate::polarization::{ceil_i64, floor_i64, generality_witness, threshold, Polarization};
use crate::search::BoxProblem;

/// Per-component degrees of a line bundle.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(Vec<i64>);

impl Multidegree {
    pub fn new(values: Vec<i64>) -> Self {
        Multidegree(values)
    }

    pub fn zero(len: usize) -> Self {
        Multidegree(vec![0; len])
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|d|`.
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `d_Y`.
    pub fn sum_over(&self, y: Subcurve) -> i64 {
        y.components().filter_map(|i| self.0.get(i)).sum()
    }

    pub fn translate(&self, shift: &[i64]) -> Multidegree {
        Multidegree(self.0.iter().zip(shift).map(|(a, b)| a + b).collect())
    }

    pub fn difference(&self, other: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for Multidegree {
    fn from(v: Vec<i64>) -> Self {
        Multidegree(v)
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn check_degree(g: &CurveGraph, q: &Polarization, d: &Multidegree) -> Result<()> {
    q.check_len(g.num_components())?;
    if d.len() != g.num_components() {
        return Err(Error::DimensionMismatch {
            expected: g.num_components(),
            actual: d.len(),
        });
    }
    let total = q.total_i64()?;
    if d.total() != total {
        return Err(Error::DegreeMismatch {
            multidegree: d.total(),
            polarization: total,
        });
    }
    Ok(())
}

fn compare_all(
    g: &CurveGraph,
    q: &Polarization,
    d: &Multidegree,
    ok: impl Fn(&BigRational, &BigRational) -> bool,
) -> Result<bool> {
    check_degree(g, q, d)?;
    Ok(g.cuts().iter().all(|cut| {
        let lhs = BigRational::from_integer(d.sum_over(cut.subcurve).into());
        ok(&lhs, &threshold(q, cut.subcurve, cut.delta))
    }))
}

/// `d_Y ≥ q_Y − δ_Y/2` on every biconnected subcurve.
pub fn is_semistable(g: &CurveGraph, q: &Polarization, d: &Multidegree) -> Result<bool> {
    compare_all(g, q, d, |lhs, rhs| lhs >= rhs)
}

/// `d_Y > q_Y − δ_Y/2` on every biconnected subcurve.
pub fn is_stable(g: &CurveGraph, q: &Polarization, d: &Multidegree) -> Result<bool> {
    compare_all(g, q, d, |lhs, rhs| lhs > rhs)
}

/// Per-component range `q_i − δ_i/2 < d_i < q_i + δ_i/2` containing every
/// stable multidegree, as inclusive integer bounds.
pub fn stability_bounds(g: &CurveGraph, q: &Polarization) -> Result<Vec<(i64, i64)>> {
    q.check_len(g.num_components())?;
    let n = g.num_components();
    if n == 1 {
        let t = q.total_i64()?;
        return Ok(vec![(t, t)]);
    }
    (0..n)
        .map(|i| {
            let y = Subcurve::singleton(i);
            let delta = g.delta_unchecked(y.mask());
            let below = threshold(q, y, delta);
            let above = q.sum_over(y) + BigRational::new(delta.into(), 2.into());
            Ok((floor_i64(&below)? + 1, ceil_i64(&above)? - 1))
        })
        .collect()
}

/// Every stable multidegree of total `|q|`, sorted lexicographically.
///
/// `q` must be general.
pub fn stable_multidegrees(g: &CurveGraph, q: &Polarization) -> Result<Vec<Multidegree>> {
    if let Some(witness) = generality_witness(g, q)? {
        return Err(Error::NotGeneral {
            witness: witness.components().collect(),
        });
    }
    let bounds = stability_bounds(g, q)?;
    let floors = g
        .cuts()
        .iter()
        .map(|cut| floor_i64(&threshold(q, cut.subcurve, cut.delta)))
        .collect::<Result<Vec<_>>>()?;
    Ok(enumerate_stable(g, q.total_i64()?, &bounds, &floors))
}

/// Multidegrees of total `total` inside `bounds` with `d_Y ≥ floors[k] + 1`
/// on the `k`-th cut, in lexicographic order. For a general `q` with
/// `floors[k] = ⌊q_Y − δ_Y/2⌋` these are exactly the stable ones.
pub(crate) fn enumerate_stable(
    g: &CurveGraph,
    total: i64,
    bounds: &[(i64, i64)],
    floors: &[i64],
) -> Vec<Multidegree> {
    let problem = BoxProblem {
        total,
        lower: bounds.iter().map(|b| b.0).collect(),
        upper: bounds.iter().map(|b| b.1).collect(),
        constraints: g
            .cuts()
            .iter()
            .zip(floors)
            .map(|(cut, f)| (cut.subcurve.mask(), f + 1))
            .collect(),
    };
    problem.all().into_iter().map(Multidegree).collect()
}
