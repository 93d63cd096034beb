//! Dual data of a reduced curve.
//!
//! A curve is recorded by its irreducible components, the symmetric matrix of
//! intersection lengths `|C_i ∩ C_j|`, and optionally a list of singular-point
//! records (the multiset of components passing through each point). Everything
//! downstream only ever looks at this combinatorial shadow.
//!
//! Subcurves are bitmasks over component indices, so the number of components
//! is capped at [`MAX_COMPONENTS`].

mod file;

use std::borrow::Cow;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use file::{CurveFile, CurveFileError, IntersectionEntry};

/// Largest number of components accepted by any subcurve enumeration.
pub const MAX_COMPONENTS: usize = 24;

/// An irreducible component. The genus is carried along as metadata only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
}

impl Component {
    pub fn named(name: impl Into<String>) -> Self {
        Component {
            name: name.into(),
            genus: None,
        }
    }
}

/// A singular point, recorded as the multiset of components through it.
///
/// A node joining `C_i` and `C_j` is `{i, j}`; a node on a single component
/// is `{i, i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointRecord {
    pub on: Vec<usize>,
}

impl PointRecord {
    pub fn node(i: usize, j: usize) -> Self {
        PointRecord { on: vec![i, j] }
    }

    /// Bitmask of the distinct components through the point.
    pub fn support(&self) -> u32 {
        self.on.iter().fold(0, |m, &i| m | (1 << i))
    }
}

/// A nonempty union of components.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subcurve(u32);

impl Subcurve {
    pub fn new(mask: u32, components: usize) -> Result<Self> {
        if mask == 0 || components > MAX_COMPONENTS || mask & !full_mask(components) != 0 {
            return Err(Error::InvalidSubcurve { mask, components });
        }
        Ok(Subcurve(mask))
    }

    pub fn from_components(indices: &[usize], components: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i >= components || i >= MAX_COMPONENTS {
                return Err(Error::InvalidSubcurve {
                    mask: u32::MAX,
                    components,
                });
            }
            mask |= 1 << i;
        }
        Subcurve::new(mask, components)
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_COMPONENTS);
        Subcurve(1 << i)
    }

    pub fn full(components: usize) -> Self {
        assert!((1..=MAX_COMPONENTS).contains(&components));
        Subcurve(full_mask(components))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn is_proper(self, components: usize) -> bool {
        self.0 != full_mask(components)
    }

    /// The complementary subcurve, or `None` for the whole curve.
    pub fn complement(self, components: usize) -> Option<Subcurve> {
        let rest = full_mask(components) & !self.0;
        (rest != 0).then_some(Subcurve(rest))
    }

    pub fn components(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |i| mask & (1 << i) != 0)
    }
}

impl fmt::Debug for Subcurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.components()).finish()
    }
}

pub(crate) fn full_mask(components: usize) -> u32 {
    if components >= 32 {
        u32::MAX
    } else {
        (1u32 << components) - 1
    }
}

/// A proper subcurve `Y` with `Y` and `Y^c` both connected, together with `δ_Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cut {
    pub subcurve: Subcurve,
    pub delta: u32,
}

/// Combinatorial dual data of a connected reduced curve.
#[derive(Clone)]
pub struct CurveGraph {
    components: Vec<Component>,
    intersection: Vec<Vec<u32>>,
    points: Option<Vec<PointRecord>>,
    adjacency: Vec<u32>,
    cuts: OnceLock<Vec<Cut>>,
}

impl fmt::Debug for CurveGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveGraph")
            .field("components", &self.components)
            .field("intersection", &self.intersection)
            .field("points", &self.points)
            .finish()
    }
}

impl PartialEq for CurveGraph {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
            && self.intersection == other.intersection
            && self.points == other.points
    }
}

impl Eq for CurveGraph {}

impl CurveGraph {
    /// Validates and builds a curve graph.
    pub fn new(
        components: Vec<Component>,
        intersection: Vec<Vec<u32>>,
        points: Option<Vec<PointRecord>>,
    ) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::NoComponents);
        }
        if n > MAX_COMPONENTS {
            return Err(Error::TooManyComponents(n));
        }
        if intersection.len() != n || intersection.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidIntersection(format!(
                "matrix must be {n}x{n}"
            )));
        }
        for i in 0..n {
            if intersection[i][i] != 0 {
                return Err(Error::InvalidIntersection(format!(
                    "diagonal entry ({i},{i}) must be zero"
                )));
            }
            for j in 0..i {
                if intersection[i][j] != intersection[j][i] {
                    return Err(Error::InvalidIntersection(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        if let Some(points) = &points {
            validate_points(points, &intersection)?;
        }
        let adjacency = adjacency_masks(&intersection);
        if !mask_connected(&adjacency, full_mask(n)) {
            return Err(Error::Disconnected);
        }
        Ok(CurveGraph {
            components,
            intersection,
            points,
            adjacency,
            cuts: OnceLock::new(),
        })
    }

    /// Builds a curve with components `C1, …, Cγ` from `(i, j, multiplicity)`
    /// triples, without point records.
    pub fn from_edges(components: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let matrix = edge_matrix(components, edges)?;
        CurveGraph::new(default_components(components), matrix, None)
    }

    /// Like [`CurveGraph::from_edges`], but every unit of intersection becomes
    /// a node record, so separating-point queries are available.
    pub fn nodal(components: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let matrix = edge_matrix(components, edges)?;
        let points = nodal_records(&matrix);
        CurveGraph::new(default_components(components), matrix, Some(points))
    }

    /// The Kodaira cycle `I_n`: components `C1, …, Cn` with `C_i` meeting
    /// `C_{i±1}` in one node each (cyclically). `I_1` is an irreducible curve
    /// with one node, `I_2` two components meeting in two nodes.
    pub fn cycle(n: usize) -> Result<Self> {
        match n {
            0 => Err(Error::NoComponents),
            1 => CurveGraph::new(
                default_components(1),
                vec![vec![0]],
                Some(vec![PointRecord::node(0, 0)]),
            ),
            _ => {
                let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1)).collect();
                let mut matrix = vec![vec![0u32; n]; n];
                for &(i, j, m) in &edges {
                    matrix[i][j] += m;
                    matrix[j][i] += m;
                }
                let points = edges
                    .iter()
                    .map(|&(i, j, _)| PointRecord::node(i.min(j), i.max(j)))
                    .collect();
                CurveGraph::new(default_components(n), matrix, Some(points))
            }
        }
    }

    /// Number of components `γ`.
    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn intersection(&self, i: usize, j: usize) -> u32 {
        self.intersection[i][j]
    }

    pub fn intersection_matrix(&self) -> &[Vec<u32>] {
        &self.intersection
    }

    pub fn points(&self) -> Option<&[PointRecord]> {
        self.points.as_deref()
    }

    /// Total intersection count between distinct components.
    pub fn edge_count(&self) -> u64 {
        let n = self.num_components();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| u64::from(self.intersection[i][j]))
            .sum()
    }

    pub fn full(&self) -> Subcurve {
        Subcurve::full(self.num_components())
    }

    pub fn subcurve(&self, indices: &[usize]) -> Result<Subcurve> {
        Subcurve::from_components(indices, self.num_components())
    }

    fn check(&self, y: Subcurve) -> Result<()> {
        if y.mask() & !full_mask(self.num_components()) != 0 {
            return Err(Error::InvalidSubcurve {
                mask: y.mask(),
                components: self.num_components(),
            });
        }
        Ok(())
    }

    /// `δ_Y = |Y ∩ Y^c|` for a proper subcurve `Y`.
    pub fn delta(&self, y: Subcurve) -> Result<u32> {
        self.check(y)?;
        if !y.is_proper(self.num_components()) {
            return Err(Error::InvalidSubcurve {
                mask: y.mask(),
                components: self.num_components(),
            });
        }
        Ok(self.delta_unchecked(y.mask()))
    }

    pub(crate) fn delta_unchecked(&self, mask: u32) -> u32 {
        let n = self.num_components();
        let mut total = 0;
        for i in (0..n).filter(|i| mask & (1 << i) != 0) {
            for j in (0..n).filter(|j| mask & (1 << j) == 0) {
                total += self.intersection[i][j];
            }
        }
        total
    }

    /// Whether the components of `y` span a connected subgraph.
    pub fn is_connected(&self, y: Subcurve) -> bool {
        mask_connected(&self.adjacency, y.mask() & full_mask(self.num_components()))
    }

    /// The connected components of `y`, ordered by lowest component index.
    pub fn connected_components(&self, y: Subcurve) -> Vec<Subcurve> {
        mask_components(&self.adjacency, y.mask())
            .into_iter()
            .map(Subcurve)
            .collect()
    }

    /// Every proper subcurve `Y` with `Y` and `Y^c` connected, in ascending
    /// mask order. The list is closed under complementation.
    pub fn biconnected_subcurves(&self) -> Vec<Subcurve> {
        self.cuts().iter().map(|c| c.subcurve).collect()
    }

    /// The biconnected subcurves together with their `δ`, computed once.
    pub fn cuts(&self) -> &[Cut] {
        self.cuts.get_or_init(|| {
            let full = full_mask(self.num_components());
            (1..full)
                .filter(|&m| {
                    mask_connected(&self.adjacency, m) && mask_connected(&self.adjacency, full ^ m)
                })
                .map(|m| Cut {
                    subcurve: Subcurve(m),
                    delta: self.delta_unchecked(m),
                })
                .collect()
        })
    }

    /// Indices of the point records whose removal disconnects the curve.
    pub fn separating_points(&self) -> Result<Vec<usize>> {
        let points = self.points.as_ref().ok_or(Error::MissingPoints)?;
        Ok(separating_indices(points, &self.intersection))
    }

    /// Normalizes the curve at all of its separating points.
    ///
    /// Every separating point must be a node joining two distinct components.
    pub fn separating_blocks(&self) -> Result<SeparatingBlocks> {
        let points = self.points.as_ref().ok_or(Error::MissingPoints)?;
        let separating = separating_indices(points, &self.intersection);
        let n = self.num_components();

        let mut bridges = Vec::with_capacity(separating.len());
        let mut reduced = self.intersection.clone();
        for &p in &separating {
            let on = &points[p].on;
            if on.len() != 2 {
                return Err(Error::DaggerViolation {
                    point: p,
                    incidences: on.len(),
                });
            }
            let (a, b) = (on[0], on[1]);
            reduced[a][b] -= 1;
            reduced[b][a] -= 1;
            bridges.push(Bridge { point: p, ends: (a, b) });
        }

        let pieces = mask_components(&adjacency_masks(&reduced), full_mask(n));
        let mut block_of = vec![0; n];
        let mut blocks = Vec::with_capacity(pieces.len());
        for (b, &mask) in pieces.iter().enumerate() {
            let members: Vec<usize> = Subcurve(mask).components().collect();
            for &c in &members {
                block_of[c] = b;
            }
            let local = |c: usize| members.iter().position(|&m| m == c);
            let matrix = members
                .iter()
                .map(|&i| members.iter().map(|&j| reduced[i][j]).collect())
                .collect();
            let block_points = points
                .iter()
                .enumerate()
                .filter(|(idx, rec)| !separating.contains(idx) && rec.support() & !mask == 0)
                .map(|(_, rec)| PointRecord {
                    on: rec.on.iter().map(|&c| local(c).unwrap()).collect(),
                })
                .collect();
            let graph = CurveGraph::new(
                members.iter().map(|&c| self.components[c].clone()).collect(),
                matrix,
                Some(block_points),
            )?;
            blocks.push(Block {
                components: members,
                graph,
            });
        }
        Ok(SeparatingBlocks {
            blocks,
            block_of,
            bridges,
        })
    }

    /// Components reachable from `a` once one unit of intersection between
    /// `a` and `b` is removed.
    pub(crate) fn side_without_edge(&self, a: usize, b: usize) -> u32 {
        let mut adjacency = self.adjacency.clone();
        if self.intersection[a][b] <= 1 {
            adjacency[a] &= !(1 << b);
            adjacency[b] &= !(1 << a);
        }
        reach(&adjacency, full_mask(self.num_components()), 1 << a)
    }

    /// Point records, synthesizing one node per unit of intersection when the
    /// curve carries none.
    pub fn with_nodal_points(&self) -> Cow<'_, CurveGraph> {
        if self.points.is_some() {
            Cow::Borrowed(self)
        } else {
            let mut g = self.clone();
            g.points = Some(nodal_records(&self.intersection));
            Cow::Owned(g)
        }
    }
}

/// A separating block: its components (as indices into the parent curve) and
/// its own curve graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub components: Vec<usize>,
    pub graph: CurveGraph,
}

/// A separating node and the two components it joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bridge {
    pub point: usize,
    pub ends: (usize, usize),
}

/// Result of normalizing a curve at its separating points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingBlocks {
    pub blocks: Vec<Block>,
    /// Block index of each component of the parent curve.
    pub block_of: Vec<usize>,
    pub bridges: Vec<Bridge>,
}

fn default_components(n: usize) -> Vec<Component> {
    (1..=n).map(|i| Component::named(format!("C{i}"))).collect()
}

fn edge_matrix(n: usize, edges: &[(usize, usize, u32)]) -> Result<Vec<Vec<u32>>> {
    if n == 0 {
        return Err(Error::NoComponents);
    }
    if n > MAX_COMPONENTS {
        return Err(Error::TooManyComponents(n));
    }
    let mut matrix = vec![vec![0u32; n]; n];
    for &(i, j, m) in edges {
        if i >= n || j >= n || i == j {
            return Err(Error::InvalidIntersection(format!(
                "bad component pair ({i},{j})"
            )));
        }
        matrix[i][j] += m;
        matrix[j][i] += m;
    }
    Ok(matrix)
}

fn nodal_records(matrix: &[Vec<u32>]) -> Vec<PointRecord> {
    let n = matrix.len();
    let mut points = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            points.extend((0..matrix[i][j]).map(|_| PointRecord::node(i, j)));
        }
    }
    points
}

fn validate_points(points: &[PointRecord], matrix: &[Vec<u32>]) -> Result<()> {
    let n = matrix.len();
    let mut counts = vec![vec![0u32; n]; n];
    for (index, rec) in points.iter().enumerate() {
        if rec.on.len() < 2 {
            return Err(Error::InvalidPoint {
                index,
                reason: "a singular point lies on at least two branches".into(),
            });
        }
        if let Some(&c) = rec.on.iter().find(|&&c| c >= n) {
            return Err(Error::InvalidPoint {
                index,
                reason: format!("component index {c} out of range"),
            });
        }
        let support = rec.support();
        for i in 0..n {
            for j in i + 1..n {
                if support & (1 << i) != 0 && support & (1 << j) != 0 {
                    counts[i][j] += 1;
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if counts[i][j] != matrix[i][j] {
                return Err(Error::PointMismatch {
                    i,
                    j,
                    records: counts[i][j],
                    matrix: matrix[i][j],
                });
            }
        }
    }
    Ok(())
}

fn separating_indices(points: &[PointRecord], matrix: &[Vec<u32>]) -> Vec<usize> {
    let n = matrix.len();
    let full = full_mask(n);
    points
        .iter()
        .enumerate()
        .filter(|(_, rec)| rec.support().count_ones() >= 2)
        .filter(|(_, rec)| {
            let support = rec.support();
            let mut reduced = matrix.to_vec();
            for i in 0..n {
                for j in 0..n {
                    if i != j && support & (1 << i) != 0 && support & (1 << j) != 0 {
                        reduced[i][j] -= 1;
                    }
                }
            }
            !mask_connected(&adjacency_masks(&reduced), full)
        })
        .map(|(idx, _)| idx)
        .collect()
}

fn adjacency_masks(matrix: &[Vec<u32>]) -> Vec<u32> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .fold(0u32, |acc, (j, _)| acc | (1 << j))
        })
        .collect()
}

fn reach(adjacency: &[u32], mask: u32, start: u32) -> u32 {
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let i = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let next = adjacency[i] & mask & !seen;
        seen |= next;
        frontier |= next;
    }
    seen
}

pub(crate) fn mask_connected(adjacency: &[u32], mask: u32) -> bool {
    if mask == 0 {
        return false;
    }
    reach(adjacency, mask, mask & mask.wrapping_neg()) == mask
}

fn mask_components(adjacency: &[u32], mask: u32) -> Vec<u32> {
    let mut rest = mask;
    let mut out = Vec::new();
    while rest != 0 {
        let piece = reach(adjacency, mask, rest & rest.wrapping_neg());
        out.push(piece);
        rest &= !piece;
    }
    out
}
