//! Fine compactified Jacobians of a fixed degree up to translation.
//!
//! `J̄_X(q)` depends only on the chamber of `q` in the arrangement of
//! hyperplanes `q_Y − δ_Y/2 ∈ ℤ`, and translating `q` by an integer vector
//! translates the stable set. A class is therefore recorded by its
//! *signature*, the stable set shifted so that its lexicographically smallest
//! element is zero.
//!
//! [`classify`] scans the polarizations `q_i = k_i/N` with `0 ≤ k_i < N` for
//! `i < γ`, the last coordinate being fixed by the total degree. Every class
//! has a representative in that cube; whether the grid meets every chamber is
//! checked empirically by refining it ([`classification_stabilizes`]).

use std::collections::{BTreeMap, HashSet};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::CurveGraph;
use crate::error::{Error, Result};
use crate::polarization::Polarization;
use crate::stability::{enumerate_stable, stable_multidegrees, Multidegree};

/// Normalized stable set `{d − d_min}`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature(Vec<Multidegree>);

impl Signature {
    pub fn degrees(&self) -> &[Multidegree] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One fine compactified Jacobian up to translation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianClass {
    pub representative: Polarization,
    pub signature: Signature,
    /// `None` until computed by [`admissible_classes`](crate::abel::admissible_classes).
    pub abel_admissible: Option<bool>,
    /// A twisting multidegree certifying admissibility of the representative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abel_witness: Option<Multidegree>,
}

/// Stable set of a general `q`, translated so that its smallest element is 0.
pub fn signature_of(g: &CurveGraph, q: &Polarization) -> Result<Signature> {
    Ok(normalize(stable_multidegrees(g, q)?))
}

fn normalize(stable: Vec<Multidegree>) -> Signature {
    let base = stable.first().cloned().expect("a general polarization has stable degrees");
    Signature(stable.iter().map(|d| d.difference(&base)).collect())
}

/// Largest number of grid points a single scan may visit in
/// [`classify_auto`].
pub const GRID_POINT_BUDGET: u64 = 1 << 23;

/// Per-cut integer data for the grid scan, all scaled by `2N`.
struct GridScan<'a> {
    g: &'a CurveGraph,
    den: i64,
    total: i64,
    /// `(mask, δ_Y · N)` per cut.
    cuts: Vec<(u32, i64)>,
    /// `δ_{C_i} · N` per component.
    singletons: Vec<i64>,
}

impl GridScan<'_> {
    /// Chamber key of the grid point with numerators `k`, or `None` if the
    /// point lies on a wall.
    fn key(&self, k: &[i64]) -> Option<Vec<i64>> {
        let two_n = 2 * self.den;
        self.cuts
            .iter()
            .map(|&(mask, delta_n)| {
                let q_n: i64 = (0..k.len()).filter(|&i| mask & (1 << i) != 0).map(|i| k[i]).sum();
                let value = 2 * q_n - delta_n;
                (value.rem_euclid(two_n) != 0).then(|| value.div_euclid(two_n))
            })
            .collect()
    }

    /// Signature of the chamber with key `key` containing the point `k`.
    fn signature(&self, key: &[i64], k: &[i64]) -> Signature {
        let two_n = 2 * self.den;
        let bounds: Vec<(i64, i64)> = k
            .iter()
            .zip(&self.singletons)
            .map(|(&ki, &dn)| {
                let below = (2 * ki - dn).div_euclid(two_n) + 1;
                let above = -(-(2 * ki + dn)).div_euclid(two_n) - 1;
                (below, above)
            })
            .collect();
        normalize(enumerate_stable(self.g, self.total, &bounds, key))
    }

    /// Numerators over `N` of the full polarization, last coordinate included.
    fn numerators(&self, head: &[i64]) -> Vec<i64> {
        let mut k = head.to_vec();
        k.push(self.total * self.den - head.iter().sum::<i64>());
        k
    }

    /// First grid point of every chamber met with leading numerator `k0`, in
    /// scan order.
    fn chambers_from(&self, k0: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
        let free = self.g.num_components() - 1;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut head = vec![0i64; free];
        head[0] = k0;
        loop {
            let k = self.numerators(&head);
            if let Some(key) = self.key(&k) {
                if seen.insert(key.clone()) {
                    out.push((key, k));
                }
            }
            // odometer over head[1..]
            let mut i = free;
            loop {
                i -= 1;
                if i == 0 {
                    return out;
                }
                head[i] += 1;
                if head[i] < self.den {
                    break;
                }
                head[i] = 0;
            }
        }
    }
}

/// All classes met by the grid of denominator `grid_denominator`, one
/// representative each (the first general grid point in scan order), sorted
/// by signature.
///
/// An empty result means the grid misses every chamber.
pub fn classify(g: &CurveGraph, total_degree: i64, grid_denominator: u64) -> Result<Vec<JacobianClass>> {
    if grid_denominator == 0 {
        return Err(Error::ZeroDenominator);
    }
    let n = g.num_components();
    if n == 1 {
        let q = Polarization::from_integers(&[total_degree]);
        let signature = signature_of(g, &q)?;
        return Ok(vec![JacobianClass {
            representative: q,
            signature,
            abel_admissible: None,
            abel_witness: None,
        }]);
    }
    let den = i64::try_from(grid_denominator)
        .ok()
        .filter(|d| d.checked_mul(4 * (n as i64 + 1)).is_some())
        .ok_or_else(|| Error::Overflow(format!("grid denominator {grid_denominator}")))?;
    total_degree
        .checked_mul(2 * den)
        .ok_or_else(|| Error::Overflow(format!("total degree {total_degree}")))?;
    let scan = GridScan {
        g,
        den,
        total: total_degree,
        cuts: g
            .cuts()
            .iter()
            .map(|c| (c.subcurve.mask(), i64::from(c.delta) * den))
            .collect(),
        singletons: (0..n)
            .map(|i| (0..n).map(|j| i64::from(g.intersection(i, j))).sum::<i64>() * den)
            .collect(),
    };

    let per_leading: Vec<Vec<(Vec<i64>, Vec<i64>)>> =
        (0..den).into_par_iter().map(|k0| scan.chambers_from(k0)).collect();

    let mut chambers = HashSet::new();
    let mut by_signature: BTreeMap<Signature, Polarization> = BTreeMap::new();
    for (key, k) in per_leading.into_iter().flatten() {
        if !chambers.insert(key.clone()) {
            continue;
        }
        let signature = scan.signature(&key, &k);
        if by_signature.contains_key(&signature) {
            continue;
        }
        let q = Polarization::new(
            k.iter()
                .map(|&v| BigRational::new(v.into(), den.into()))
                .collect(),
        )?;
        by_signature.insert(signature, q);
    }
    Ok(by_signature
        .into_iter()
        .map(|(signature, representative)| JacobianClass {
            representative,
            signature,
            abel_admissible: None,
            abel_witness: None,
        })
        .collect())
}

/// Whether grids of denominators `d1` and `d2` (with `d1 | d2`) yield the same
/// set of signatures.
pub fn classification_stabilizes(g: &CurveGraph, total_degree: i64, d1: u64, d2: u64) -> Result<bool> {
    let signatures = |d| -> Result<Vec<Signature>> {
        Ok(classify(g, total_degree, d)?
            .into_iter()
            .map(|c| c.signature)
            .collect())
    };
    Ok(signatures(d1)? == signatures(d2)?)
}

/// Starting denominator for [`classify_auto`]: `2γ`.
pub fn default_grid(g: &CurveGraph) -> u64 {
    2 * g.num_components() as u64
}

/// Number of points a scan with denominator `den` visits.
pub fn grid_points(g: &CurveGraph, den: u64) -> u64 {
    let free = g.num_components().saturating_sub(1) as u32;
    den.checked_pow(free).unwrap_or(u64::MAX)
}

/// Result of [`classify_auto`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoClassification {
    pub classes: Vec<JacobianClass>,
    /// Denominator the classes were computed with.
    pub grid_denominator: u64,
    /// Whether doubling `grid_denominator` gave the same signatures. `false`
    /// when the next refinement would exceed [`GRID_POINT_BUDGET`].
    pub stabilized: bool,
}

/// Classifies starting from `start` (or [`default_grid`]), doubling the
/// denominator until one doubling leaves the signatures unchanged.
pub fn classify_auto(g: &CurveGraph, total_degree: i64, start: Option<u64>) -> Result<AutoClassification> {
    let mut den = start.unwrap_or_else(|| default_grid(g)).max(1);
    let mut classes = classify(g, total_degree, den)?;
    loop {
        let finer = den * 2;
        if grid_points(g, finer) > GRID_POINT_BUDGET {
            return Ok(AutoClassification {
                classes,
                grid_denominator: den,
                stabilized: false,
            });
        }
        let refined = classify(g, total_degree, finer)?;
        let same = refined.len() == classes.len()
            && refined.iter().zip(&classes).all(|(a, b)| a.signature == b.signature);
        if same {
            return Ok(AutoClassification {
                classes,
                grid_denominator: den,
                stabilized: true,
            });
        }
        classes = refined;
        den = finer;
    }
}
