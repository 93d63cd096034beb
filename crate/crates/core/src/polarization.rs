//! Polarizations: rational weights on components with an integral total.
//!
//! For a proper subcurve `Y`, the quantity `q_Y − δ_Y/2` governs everything:
//! it is the lower bound that the degree of a sheaf on `Y` must beat, and `q`
//! is *general* when it is never an integer. It suffices to look at the
//! subcurves `Y` for which both `Y` and `Y^c` are connected (the
//! [`cuts`](crate::curve::CurveGraph::cuts) of the curve).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{CurveGraph, SeparatingBlocks, Subcurve};
use crate::error::{Error, Result};

/// A tuple of rationals, one per component, with integral sum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polarization(Vec<BigRational>);

impl Polarization {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        let total: BigRational = values.iter().sum();
        if !total.is_integer() {
            return Err(Error::NonIntegralTotal {
                total: format_rational(&total),
            });
        }
        Ok(Polarization(values))
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Polarization(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// Builds `(n_0/den, n_1/den, …)`.
    pub fn from_fractions(numerators: &[i64], den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Polarization::new(
            numerators
                .iter()
                .map(|&n| BigRational::new(n.into(), den.into()))
                .collect(),
        )
    }

    /// Parses integers or `"num/den"` strings.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        Polarization::new(
            items
                .iter()
                .map(|s| parse_rational(s.as_ref()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn values(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|q|`.
    pub fn total(&self) -> BigInt {
        self.0.iter().sum::<BigRational>().to_integer()
    }

    pub fn total_i64(&self) -> Result<i64> {
        self.total()
            .to_i64()
            .ok_or_else(|| Error::Overflow(format!("total degree {}", self.total())))
    }

    /// `q_Y`.
    pub fn sum_over(&self, y: Subcurve) -> BigRational {
        y.components()
            .filter_map(|i| self.0.get(i))
            .sum()
    }

    /// `q + e` for an integer vector `e`.
    pub fn translate(&self, shift: &[i64]) -> Result<Self> {
        self.check_len(shift.len())?;
        Ok(Polarization(
            self.0
                .iter()
                .zip(shift)
                .map(|(v, &e)| v + BigRational::from_integer(e.into()))
                .collect(),
        ))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: self.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Polarization {
    type Err = Error;

    /// Accepts a JSON array of strings or integers, e.g. `["1/3", "-2/3", 1]`.
    fn from_str(s: &str) -> Result<Self> {
        let items: Vec<serde_json::Value> =
            serde_json::from_str(s).map_err(|_| Error::ParseRational(s.to_string()))?;
        let strings = items
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Number(n) if n.is_i64() => Ok(n.to_string()),
                other => Err(Error::ParseRational(other.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Polarization::parse(&strings)
    }
}

impl Serialize for Polarization {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polarization {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        Polarization::parse(&items).map_err(serde::de::Error::custom)
    }
}

/// Parses `"n"` or `"n/d"` exactly. Decimal notation is rejected.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::ParseRational(s.to_string());
    let int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse().map_err(|_| err())
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(int(s)?)),
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(int(n)?, d))
        }
    }
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn half(delta: u32) -> BigRational {
    BigRational::new(delta.into(), 2.into())
}

/// `q_Y − δ_Y/2`.
pub(crate) fn threshold(q: &Polarization, y: Subcurve, delta: u32) -> BigRational {
    q.sum_over(y) - half(delta)
}

/// `q_Y` for a subcurve.
pub fn q_of(q: &Polarization, y: Subcurve) -> BigRational {
    q.sum_over(y)
}

/// A biconnected subcurve at which `q` is integral, if any.
pub fn generality_witness(g: &CurveGraph, q: &Polarization) -> Result<Option<Subcurve>> {
    q.check_len(g.num_components())?;
    Ok(g.cuts()
        .iter()
        .find(|cut| threshold(q, cut.subcurve, cut.delta).is_integer())
        .map(|cut| cut.subcurve))
}

/// Whether `q_Y − δ_Y/2` is non-integral at every biconnected subcurve.
pub fn is_general(g: &CurveGraph, q: &Polarization) -> Result<bool> {
    Ok(generality_witness(g, q)?.is_none())
}

/// Generality checked straight from the definition: `q` is integral at a
/// proper subcurve `Y` when `q_Z − δ_Z/2 ∈ ℤ` for every connected component
/// `Z` of `Y` and of `Y^c`, and general when it is integral at none of them.
///
/// This scans every proper subcurve and serves as a cross-check for
/// [`is_general`].
pub fn is_general_bruteforce(g: &CurveGraph, q: &Polarization) -> Result<bool> {
    q.check_len(g.num_components())?;
    let n = g.num_components();
    let full = g.full().mask();
    let integral_at = |mask: u32| {
        let y = Subcurve::new(mask, n).expect("proper nonempty mask");
        let yc = y.complement(n).expect("proper subcurve");
        g.connected_components(y)
            .into_iter()
            .chain(g.connected_components(yc))
            .all(|z| threshold(q, z, g.delta_unchecked(z.mask())).is_integer())
    };
    Ok(!(1..full).any(integral_at))
}

/// Moves `q` off the integrality hyperplanes along the fixed direction
/// `v = (1, 1/(γ+1), 1/(γ+1)², …, −Σ)`, halving the step until the result is
/// general.
///
/// The total degree is kept. Every non-integral `q_Y − δ_Y/2` keeps its floor,
/// and every value moves by less than `1/2`, so strict inequalities against
/// integers survive.
pub fn perturb_to_general(g: &CurveGraph, q: &Polarization) -> Result<Polarization> {
    if is_general(g, q)? {
        return Ok(q.clone());
    }
    let n = g.num_components();
    let base = BigRational::from_integer((n as i64 + 1).into());
    let mut direction: Vec<BigRational> = Vec::with_capacity(n);
    let mut step = BigRational::one();
    for _ in 0..n - 1 {
        direction.push(step.clone());
        step /= &base;
    }
    let rest: BigRational = direction.iter().sum();
    direction.push(-rest);

    let before: Vec<BigRational> = g
        .cuts()
        .iter()
        .map(|c| threshold(q, c.subcurve, c.delta))
        .collect();
    let limit = BigRational::new(1.into(), 2.into());
    let mut t = BigRational::new(1.into(), 2.into());
    loop {
        let candidate = Polarization(
            q.values()
                .iter()
                .zip(&direction)
                .map(|(a, v)| a + &t * v)
                .collect(),
        );
        let ok = g.cuts().iter().zip(&before).all(|(cut, old)| {
            let new = threshold(&candidate, cut.subcurve, cut.delta);
            !new.is_integer()
                && (&new - old).abs() < limit
                && (old.is_integer() || new.floor() == old.floor())
        });
        if ok {
            return Ok(candidate);
        }
        t /= BigRational::from_integer(2.into());
    }
}

/// Output of [`induce_on_blocks`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockInduction {
    /// `q′` on the whole curve, integral on every separating block.
    pub polarization: Polarization,
    /// The restriction of `q′` to each block, in block order.
    pub blocks: Vec<Polarization>,
    pub separation: SeparatingBlocks,
}

/// Replaces a general `q` by a general `q′` with the same total and the same
/// stable multidegrees whose restriction to every separating block has
/// integral total, so that `q′` is induced by polarizations on the blocks.
///
/// Separating nodes are processed by peeling leaves off the block tree. At a
/// node joining `C_a` (on side `S`) to `C_b`, write `q_S = m + r` with `m`
/// integral and `|r| < 1/2`, then move `r` from `C_a` to `C_b`.
///
/// Curves without point records are treated as nodal: every unit of
/// intersection is a node.
pub fn induce_on_blocks(g: &CurveGraph, q: &Polarization) -> Result<BlockInduction> {
    if let Some(witness) = generality_witness(g, q)? {
        return Err(Error::NotGeneral {
            witness: witness.components().collect(),
        });
    }
    let g = g.with_nodal_points();
    let separation = g.separating_blocks()?;
    let mut values = q.values().to_vec();
    let one_half = BigRational::new(1.into(), 2.into());

    for bridge in peel_order(&separation) {
        let (a, b) = bridge;
        let side = Subcurve::new(g.side_without_edge(a, b), g.num_components())?;
        let q_side: BigRational = side.components().map(|i| &values[i]).sum();
        let m = (&q_side + &one_half).floor();
        let r = q_side - m;
        values[a] -= &r;
        values[b] += &r;
    }

    let polarization = Polarization::new(values)?;
    let blocks = separation
        .blocks
        .iter()
        .map(|block| {
            Polarization::new(
                block
                    .components
                    .iter()
                    .map(|&c| polarization.values()[c].clone())
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockInduction {
        polarization,
        blocks,
        separation,
    })
}

/// Separating nodes as `(a, b)` with `C_a` on the peeled leaf side.
fn peel_order(sep: &SeparatingBlocks) -> Vec<(usize, usize)> {
    let mut remaining: Vec<bool> = vec![true; sep.bridges.len()];
    let mut alive = vec![true; sep.blocks.len()];
    let mut order = Vec::with_capacity(sep.bridges.len());
    while order.len() < sep.bridges.len() {
        let leaf = (0..sep.blocks.len())
            .filter(|&b| alive[b])
            .find(|&b| {
                sep.bridges
                    .iter()
                    .enumerate()
                    .filter(|(k, br)| {
                        remaining[*k]
                            && (sep.block_of[br.ends.0] == b || sep.block_of[br.ends.1] == b)
                    })
                    .count()
                    == 1
            })
            .expect("a block tree with edges has a leaf");
        let (k, br) = sep
            .bridges
            .iter()
            .enumerate()
            .find(|(k, br)| {
                remaining[*k] && (sep.block_of[br.ends.0] == leaf || sep.block_of[br.ends.1] == leaf)
            })
            .expect("leaf has one bridge");
        remaining[k] = false;
        alive[leaf] = false;
        let (x, y) = br.ends;
        order.push(if sep.block_of[x] == leaf { (x, y) } else { (y, x) });
    }
    order
}

/// Floor of `q_Y − δ_Y/2` as an integer, for bounds.
pub(crate) fn floor_i64(r: &BigRational) -> Result<i64> {
    r.floor()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Overflow(format_rational(r)))
}

pub(crate) fn ceil_i64(r: &BigRational) -> Result<i64> {
    r.ceil()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Overflow(format_rational(r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(items: &[&str]) -> Polarization {
        Polarization::parse(items).unwrap()
    }

    #[test]
    fn parses_and_formats() {
        let p = q(&["1/3", "1/3", "-2/3"]);
        assert_eq!(p.to_strings(), vec!["1/3", "1/3", "-2/3"]);
        assert_eq!(p.total(), BigInt::zero());
        assert_eq!(q(&["2/4", "-1/2"]).to_strings(), vec!["1/2", "-1/2"]);
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/-3").is_ok());
        assert!(matches!(
            Polarization::parse(&["1/3", "1/3"]),
            Err(Error::NonIntegralTotal { .. })
        ));
        let from_json: Polarization = r#"["1/3","2/3",-1]"#.parse().unwrap();
        assert_eq!(from_json.to_strings(), vec!["1/3", "2/3", "-1"]);
    }

    #[test]
    fn subcurve_sums() {
        let g = CurveGraph::cycle(3).unwrap();
        let p = q(&["1/3", "1/3", "-2/3"]);
        assert_eq!(
            q_of(&p, g.subcurve(&[0, 1]).unwrap()),
            parse_rational("2/3").unwrap()
        );
        assert_eq!(q_of(&p, g.full()), BigRational::zero());
        let p = q(&["2/3", "2/3", "-4/3"]);
        assert_eq!(q_of(&p, Subcurve::singleton(2)), parse_rational("-4/3").unwrap());
    }

    #[test]
    fn generality_examples() {
        let i3 = CurveGraph::cycle(3).unwrap();
        assert!(is_general(&i3, &q(&["1/3", "1/3", "-2/3"])).unwrap());
        assert!(is_general_bruteforce(&i3, &q(&["1/3", "1/3", "-2/3"])).unwrap());

        let i2 = CurveGraph::cycle(2).unwrap();
        let zero = q(&["0", "0"]);
        assert_eq!(
            generality_witness(&i2, &zero).unwrap(),
            Some(Subcurve::singleton(0))
        );
        assert!(!is_general_bruteforce(&i2, &zero).unwrap());

        let i1 = CurveGraph::cycle(1).unwrap();
        assert!(is_general(&i1, &q(&["7"])).unwrap());
        assert!(is_general_bruteforce(&i1, &q(&["7"])).unwrap());
    }

    #[test]
    fn perturbation() {
        let i3 = CurveGraph::cycle(3).unwrap();
        let general = q(&["2/3", "2/3", "-4/3"]);
        assert_eq!(perturb_to_general(&i3, &general).unwrap(), general);

        let i2 = CurveGraph::cycle(2).unwrap();
        let p = perturb_to_general(&i2, &q(&["0", "0"])).unwrap();
        assert!(is_general_bruteforce(&i2, &p).unwrap());
        assert_eq!(p.total(), BigInt::zero());
    }

    #[test]
    fn induction_on_two_smooth_blocks() {
        let g = CurveGraph::nodal(2, &[(0, 1, 1)]).unwrap();
        let out = induce_on_blocks(&g, &q(&["3/10", "7/10"])).unwrap();
        assert_eq!(out.polarization, q(&["0", "1"]));
        assert_eq!(out.blocks, vec![q(&["0"]), q(&["1"])]);
    }

    #[test]
    fn induction_without_separating_points_is_identity() {
        let g = CurveGraph::cycle(3).unwrap();
        let p = q(&["1/3", "1/3", "-2/3"]);
        let out = induce_on_blocks(&g, &p).unwrap();
        assert_eq!(out.polarization, p);
        assert_eq!(out.blocks, vec![p]);
    }

    #[test]
    fn induction_rejects_non_general() {
        let g = CurveGraph::cycle(2).unwrap();
        assert!(matches!(
            induce_on_blocks(&g, &q(&["0", "0"])),
            Err(Error::NotGeneral { .. })
        ));
    }
}
