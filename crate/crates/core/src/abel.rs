//! Abel maps into fine compactified Jacobians.
//!
//! `J̄_X(q)` admits an Abel map when some line bundle `L` of degree `|q| + 1`
//! makes every `m_p ⊗ L` `q`-stable. On a subcurve `Y`, the sheaf `m_p`
//! has degree `−1` when `p ∈ Y` and `0` otherwise, and every component carries
//! smooth points, so the worst case over `p` is
//!
//! ```text
//! d_Y − 1 > q_Y − δ_Y/2   for every biconnected Y,  where d = deg L.
//! ```
//!
//! On curves with separating points the question splits over the blocks once
//! `q` is replaced by the induced polarization of
//! [`induce_on_blocks`](crate::polarization::induce_on_blocks).

use num_rational::BigRational;

use crate::classification::JacobianClass;
use crate::curve::{CurveGraph, Subcurve};
#[cfg(test)]
use crate::curve::PointRecord;
use crate::error::{Error, Result};
use crate::polarization::{
    floor_i64, generality_witness, induce_on_blocks, perturb_to_general, threshold, Polarization,
};
use crate::search::BoxProblem;
use crate::stability::Multidegree;

/// Verdict of [`abel_admissible`]; `witness` is `Some` exactly when
/// `admissible` holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelVerdict {
    pub admissible: bool,
    pub witness: Option<Multidegree>,
}

impl AbelVerdict {
    fn from_witness(witness: Option<Multidegree>) -> Self {
        AbelVerdict {
            admissible: witness.is_some(),
            witness,
        }
    }
}

fn require_general(g: &CurveGraph, q: &Polarization) -> Result<()> {
    match generality_witness(g, q)? {
        Some(w) => Err(Error::NotGeneral {
            witness: w.components().collect(),
        }),
        None => Ok(()),
    }
}

/// Whether `J̄_X(q)` admits an Abel map, with the lexicographically smallest
/// twisting multidegree as witness.
///
/// On a curve without separating points the witness has total `|q| + 1`. On
/// a curve with separating points the witness is assembled from the block
/// witnesses and has total `|q| + b`, `b` the number of blocks.
pub fn abel_admissible(g: &CurveGraph, q: &Polarization) -> Result<AbelVerdict> {
    require_general(g, q)?;
    let g = g.with_nodal_points();
    if g.separating_points()?.is_empty() {
        return Ok(AbelVerdict::from_witness(direct_witness(&g, q)?));
    }
    let induced = induce_on_blocks(&g, q)?;
    let mut witness = vec![0i64; g.num_components()];
    for (block, qb) in induced.separation.blocks.iter().zip(&induced.blocks) {
        match direct_witness(&block.graph, qb)? {
            Some(d) => {
                for (&c, &v) in block.components.iter().zip(d.values()) {
                    witness[c] = v;
                }
            }
            None => return Ok(AbelVerdict::from_witness(None)),
        }
    }
    Ok(AbelVerdict::from_witness(Some(Multidegree::new(witness))))
}

/// `d_Y ≥ ⌊q_Y − δ_Y/2⌋ + 2` on every cut, `|d| = |q| + 1`.
fn direct_witness(g: &CurveGraph, q: &Polarization) -> Result<Option<Multidegree>> {
    let n = g.num_components();
    let total = q.total_i64()? + 1;
    if n == 1 {
        return Ok(Some(Multidegree::new(vec![total])));
    }
    let lower = (0..n)
        .map(|i| {
            let y = Subcurve::singleton(i);
            Ok(floor_i64(&threshold(q, y, g.delta_unchecked(y.mask())))? + 2)
        })
        .collect::<Result<Vec<i64>>>()?;
    let low_sum: i64 = lower.iter().sum();
    let upper = lower.iter().map(|l| total - (low_sum - l)).collect();
    let constraints = g
        .cuts()
        .iter()
        .map(|c| Ok((c.subcurve.mask(), floor_i64(&threshold(q, c.subcurve, c.delta))? + 2)))
        .collect::<Result<Vec<_>>>()?;
    let problem = BoxProblem {
        total,
        lower,
        upper,
        constraints,
    };
    Ok(problem.first().map(Multidegree::new))
}

fn twist_holds(g: &CurveGraph, q: &Polarization, d: &Multidegree) -> Result<bool> {
    if d.len() != g.num_components() {
        return Err(Error::DimensionMismatch {
            expected: g.num_components(),
            actual: d.len(),
        });
    }
    if d.total() != q.total_i64()? + 1 {
        return Ok(false);
    }
    Ok(g.cuts().iter().all(|c| {
        let lhs = BigRational::from_integer((d.sum_over(c.subcurve) - 1).into());
        lhs > threshold(q, c.subcurve, c.delta)
    }))
}

/// Whether `L` of multidegree `d` lands every `m_p ⊗ L` in `J̄_X(q)`, checked
/// on the blocks of the induced polarization when the curve has separating
/// points.
pub fn is_twist_witness(g: &CurveGraph, q: &Polarization, d: &Multidegree) -> Result<bool> {
    require_general(g, q)?;
    let g = g.with_nodal_points();
    if g.separating_points()?.is_empty() {
        return twist_holds(&g, q, d);
    }
    if d.len() != g.num_components() {
        return Err(Error::DimensionMismatch {
            expected: g.num_components(),
            actual: d.len(),
        });
    }
    let induced = induce_on_blocks(&g, q)?;
    for (block, qb) in induced.separation.blocks.iter().zip(&induced.blocks) {
        let db = Multidegree::new(block.components.iter().map(|&c| d.values()[c]).collect());
        if !twist_holds(&block.graph, qb, &db)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The same check as [`is_twist_witness`] on a curve without separating
/// points, done point by point: every recorded point and one smooth point per
/// component, with `deg_Y(m_p) = −1` iff `p` lies on a component of `Y`.
#[cfg(test)]
pub(crate) fn is_twist_witness_pointwise(g: &CurveGraph, q: &Polarization, d: &Multidegree) -> Result<bool> {
    let n = g.num_components();
    if d.total() != q.total_i64()? + 1 {
        return Ok(false);
    }
    let g = g.with_nodal_points();
    let smooth = (0..n).map(|i| PointRecord { on: vec![i] });
    let points: Vec<PointRecord> = g.points().unwrap_or_default().iter().cloned().chain(smooth).collect();
    Ok(points.iter().all(|p| {
        let support = p.support();
        g.cuts().iter().all(|c| {
            let m_p = if support & c.subcurve.mask() != 0 { 1 } else { 0 };
            let lhs = BigRational::from_integer((d.sum_over(c.subcurve) - m_p).into());
            lhs > threshold(q, c.subcurve, c.delta)
        })
    }))
}

/// A general polarization whose fine compactified Jacobian contains the
/// image of the Abel map twisted by a line bundle of multidegree `d`.
///
/// Without separating points this is `q_i = d_i − 1/γ` moved off the walls,
/// of total `|d| − 1`. With separating points the construction runs on each
/// block and the total is `|d| − b`, `b` the number of blocks.
pub fn polarization_for_twist(g: &CurveGraph, d: &Multidegree) -> Result<Polarization> {
    if d.len() != g.num_components() {
        return Err(Error::DimensionMismatch {
            expected: g.num_components(),
            actual: d.len(),
        });
    }
    let g = g.with_nodal_points();
    if g.separating_points()?.is_empty() {
        return direct_twist(&g, d);
    }
    let separation = g.separating_blocks()?;
    let mut values = vec![BigRational::from_integer(0.into()); g.num_components()];
    for block in &separation.blocks {
        let db = Multidegree::new(block.components.iter().map(|&c| d.values()[c]).collect());
        let qb = direct_twist(&block.graph, &db)?;
        for (&c, v) in block.components.iter().zip(qb.values()) {
            values[c] = v.clone();
        }
    }
    Polarization::new(values)
}

fn direct_twist(g: &CurveGraph, d: &Multidegree) -> Result<Polarization> {
    let n = g.num_components() as i64;
    let base = Polarization::new(
        d.values()
            .iter()
            .map(|&v| BigRational::new((v * n - 1).into(), n.into()))
            .collect(),
    )?;
    perturb_to_general(g, &base)
}

/// Annotates each class with the verdict for its representative.
pub fn admissible_classes(g: &CurveGraph, classes: Vec<JacobianClass>) -> Result<Vec<JacobianClass>> {
    classes
        .into_iter()
        .map(|mut class| {
            let verdict = abel_admissible(g, &class.representative)?;
            class.abel_admissible = Some(verdict.admissible);
            class.abel_witness = verdict.witness;
            Ok(class)
        })
        .collect()
}
