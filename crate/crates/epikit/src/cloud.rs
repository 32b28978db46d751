//! Finite point clouds, excess, and truncated Hausdorff distance.
//!
//! Clouds are the computational stand-in for sets: epigraphs, hypographs,
//! feasible sets, level sets. Distances between clouds are exact for the
//! clouds themselves; how well a cloud approximates the continuous set it
//! samples is the caller's concern and is reported separately as a grid
//! tolerance, never silently absorbed here.
//!
//! The excess of `C` over `D` is `sup_{p in C} inf_{q in D} |p - q|`, with
//! the conventions `exs(empty; D) = 0` and `exs(C; empty) = +inf` for
//! nonempty `C`. The truncated Hausdorff distance at radius `rho` intersects
//! only the source side of each excess with the ball of the chosen norm:
//!
//! ```text
//! dl_rho(C, D) = max{ exs(C ∩ B(rho); D), exs(D ∩ B(rho); C) }
//! ```
//!
//! Large target clouds are queried through a spatial index pruned by the
//! outer max-norm; results are identical to the quadratic scan.

use rayon::prelude::*;
use thiserror::Error;

use crate::extreal::ExtReal;
use crate::norm::{NormError, NormSpec};

/// Target-cloud size at which excess switches from the quadratic scan to
/// the spatial index. Small clouds are faster brute-force.
pub const INDEX_THRESHOLD: usize = 4096;

/// Source-point count at which excess parallelizes over sources.
const PAR_THRESHOLD: usize = 1024;

#[derive(Debug, Error)]
pub enum CloudError {
    #[error("point has {got} coordinates, cloud dimension is {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("coordinate {0} is not finite")]
    NonFiniteCoordinate(f64),
    #[error("clouds have dimensions {0} and {1}")]
    CloudDimensionMismatch(usize, usize),
    #[error("truncation radius must be nonnegative, got {0}")]
    NegativeRadius(f64),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// A finite set of points in a fixed dimension, stored row-major.
///
/// May be empty; an empty cloud represents the empty set. All coordinates
/// are finite. Clouds are immutable once built and safe to share across
/// threads.
#[derive(Clone, Debug)]
pub struct PointCloud {
    dim: usize,
    data: Vec<f64>,
    tag: String,
}

impl PointCloud {
    pub fn empty(dim: usize, tag: impl Into<String>) -> PointCloud {
        PointCloud {
            dim,
            data: Vec::new(),
            tag: tag.into(),
        }
    }

    /// Builds a cloud from flat row-major data.
    pub fn from_flat(
        dim: usize,
        data: Vec<f64>,
        tag: impl Into<String>,
    ) -> Result<PointCloud, CloudError> {
        assert!(dim > 0, "cloud dimension must be positive");
        if !data.len().is_multiple_of(dim) {
            return Err(CloudError::PointDimension {
                expected: dim,
                got: data.len() % dim,
            });
        }
        if let Some(&bad) = data.iter().find(|c| !c.is_finite()) {
            return Err(CloudError::NonFiniteCoordinate(bad));
        }
        Ok(PointCloud {
            dim,
            data,
            tag: tag.into(),
        })
    }

    pub fn from_points<I, P>(
        dim: usize,
        points: I,
        tag: impl Into<String>,
    ) -> Result<PointCloud, CloudError>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[f64]>,
    {
        let mut data = Vec::new();
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(CloudError::PointDimension {
                    expected: dim,
                    got: p.len(),
                });
            }
            data.extend_from_slice(p);
        }
        PointCloud::from_flat(dim, data, tag)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    /// Indices of the points inside the closed ball of radius `rho`.
    pub fn indices_within(&self, norm: &NormSpec, rho: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| norm.eval_unchecked(self.point(i)) <= rho)
            .collect()
    }
}

/// How excess resolves nearest neighbors. `Auto` picks the index once the
/// target cloud exceeds [`INDEX_THRESHOLD`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NnStrategy {
    Auto,
    Quadratic,
    Indexed,
}

/// Spatial index over a cloud for nearest-neighbor queries under a block
/// max-norm: a k-d tree with per-node bounding boxes, median-split on the
/// widest axis.
///
/// Pruning uses the coordinate gap from the query to a node's box: every
/// block inner norm dominates the per-coordinate absolute value, so the
/// true distance to any point inside the box is at least that gap. The
/// tree adapts to the data, so large empty regions — the common situation
/// when the nearest distance is much larger than the point spacing — are
/// discarded at coarse granularity instead of cell by cell.
pub struct SpatialIndex<'a> {
    cloud: &'a PointCloud,
    nodes: Vec<NodeKind>,
    /// Per-node bounding boxes, flat: `[lo_0.., hi_0.., lo_1.., ..]`.
    boxes: Vec<f64>,
    /// Coordinates permuted into leaf order, so leaf scans stream memory.
    coords: Vec<f64>,
}

const LEAF_SIZE: usize = 16;

#[derive(Clone, Copy)]
enum NodeKind {
    Leaf { start: u32, end: u32 },
    Split { left: u32, right: u32 },
}

impl<'a> SpatialIndex<'a> {
    pub fn build(cloud: &'a PointCloud) -> SpatialIndex<'a> {
        let mut order: Vec<u32> = (0..cloud.len() as u32).collect();
        let mut builder = Builder {
            cloud,
            nodes: Vec::new(),
            boxes: Vec::new(),
        };
        if !cloud.is_empty() {
            let len = order.len();
            build_node(&mut builder, &mut order, 0, len, 0);
        }
        let dim = cloud.dim();
        let mut coords = Vec::with_capacity(order.len() * dim);
        for &i in &order {
            coords.extend_from_slice(cloud.point(i as usize));
        }
        SpatialIndex {
            cloud,
            nodes: builder.nodes,
            boxes: builder.boxes,
            coords,
        }
    }

    /// Distance from `q` to its nearest point in the indexed cloud.
    ///
    /// Returns `+inf` for an empty cloud. Exact: agrees with the quadratic
    /// scan to the last bit because both evaluate the same norm.
    pub fn nearest_distance(&self, q: &[f64], norm: &NormSpec) -> f64 {
        if self.cloud.is_empty() {
            return f64::INFINITY;
        }
        let mut best = f64::INFINITY;
        self.descend(0, q, norm, &mut best);
        best
    }

    fn descend(&self, node: u32, q: &[f64], norm: &NormSpec, best: &mut f64) {
        match self.nodes[node as usize] {
            NodeKind::Leaf { start, end } => {
                let dim = q.len();
                for i in start as usize..end as usize {
                    let p = &self.coords[i * dim..(i + 1) * dim];
                    let d = norm.distance_under(q, p, *best);
                    if d < *best {
                        *best = d;
                    }
                }
            }
            NodeKind::Split { left, right } => {
                // Nearer child first: its result usually prunes the other.
                let gl = self.box_gap(left, q);
                let gr = self.box_gap(right, q);
                let (first, gap_first, second, gap_second) = if gl <= gr {
                    (left, gl, right, gr)
                } else {
                    (right, gr, left, gl)
                };
                if gap_first < *best {
                    self.descend(first, q, norm, best);
                }
                if gap_second < *best {
                    self.descend(second, q, norm, best);
                }
            }
        }
    }

    /// Max over axes of the coordinate gap from `q` to the node's box; a
    /// lower bound for any block max-norm distance into the box.
    #[inline]
    fn box_gap(&self, node: u32, q: &[f64]) -> f64 {
        let dim = q.len();
        let base = node as usize * 2 * dim;
        let lo = &self.boxes[base..base + dim];
        let hi = &self.boxes[base + dim..base + 2 * dim];
        let mut gap = 0.0f64;
        for ((&l, &h), &c) in lo.iter().zip(hi).zip(q) {
            let g = (l - c).max(c - h);
            if g > gap {
                gap = g;
            }
        }
        gap
    }
}

struct Builder<'a> {
    cloud: &'a PointCloud,
    nodes: Vec<NodeKind>,
    boxes: Vec<f64>,
}

/// Builds the subtree for `order[..len]`. Bounding boxes are exact: leaves
/// scan their few points and inner nodes take the union of their children,
/// so box construction costs O(n) overall.
fn build_node(
    builder: &mut Builder<'_>,
    order: &mut [u32],
    offset: usize,
    len: usize,
    spread_axis: usize,
) -> u32 {
    let dim = builder.cloud.dim();
    let id = builder.nodes.len() as u32;
    if len <= LEAF_SIZE {
        builder.nodes.push(NodeKind::Leaf {
            start: offset as u32,
            end: (offset + len) as u32,
        });
        builder
            .boxes
            .extend(std::iter::repeat_n(f64::INFINITY, dim));
        builder
            .boxes
            .extend(std::iter::repeat_n(f64::NEG_INFINITY, dim));
        let base = id as usize * 2 * dim;
        for &i in order[..len].iter() {
            let p = builder.cloud.point(i as usize);
            for (k, &c) in p.iter().enumerate() {
                builder.boxes[base + k] = builder.boxes[base + k].min(c);
                builder.boxes[base + dim + k] = builder.boxes[base + dim + k].max(c);
            }
        }
        return id;
    }
    let axis = spread_axis;
    let mid = len / 2;
    {
        let cloud = builder.cloud;
        order[..len].select_nth_unstable_by(mid, |&a, &b| {
            cloud.point(a as usize)[axis]
                .partial_cmp(&cloud.point(b as usize)[axis])
                .expect("finite coordinates")
        });
    }
    builder.nodes.push(NodeKind::Leaf { start: 0, end: 0 });
    builder.boxes.extend(std::iter::repeat_n(0.0, 2 * dim));
    let next_axis = (spread_axis + 1) % dim;
    let (left_slice, right_slice) = order[..len].split_at_mut(mid);
    let left = build_node(builder, left_slice, offset, mid, next_axis);
    let right = build_node(builder, right_slice, offset + mid, len - mid, next_axis);
    let base = id as usize * 2 * dim;
    for k in 0..dim {
        let l = left as usize * 2 * dim;
        let r = right as usize * 2 * dim;
        builder.boxes[base + k] = builder.boxes[l + k].min(builder.boxes[r + k]);
        builder.boxes[base + dim + k] = builder.boxes[l + dim + k].max(builder.boxes[r + dim + k]);
    }
    builder.nodes[id as usize] = NodeKind::Split { left, right };
    id
}

#[inline]
fn brute_nearest(q: &[f64], target: &PointCloud, norm: &NormSpec) -> f64 {
    let mut best = f64::INFINITY;
    for p in target.iter_points() {
        let d = norm.distance(q, p);
        if d < best {
            best = d;
        }
    }
    best
}

enum Resolver<'a> {
    Brute(&'a PointCloud),
    Indexed(SpatialIndex<'a>),
}

impl Resolver<'_> {
    fn nearest(&self, q: &[f64], norm: &NormSpec) -> f64 {
        match self {
            Resolver::Brute(cloud) => brute_nearest(q, cloud, norm),
            Resolver::Indexed(index) => index.nearest_distance(q, norm),
        }
    }
}

fn make_resolver<'a>(target: &'a PointCloud, strategy: NnStrategy) -> Resolver<'a> {
    match strategy {
        NnStrategy::Quadratic => Resolver::Brute(target),
        NnStrategy::Indexed => Resolver::Indexed(SpatialIndex::build(target)),
        NnStrategy::Auto => {
            if target.len() > INDEX_THRESHOLD {
                Resolver::Indexed(SpatialIndex::build(target))
            } else {
                Resolver::Brute(target)
            }
        }
    }
}

fn check_dims(c: &PointCloud, d: &PointCloud, norm: &NormSpec) -> Result<(), CloudError> {
    if !c.is_empty() && !d.is_empty() && c.dim() != d.dim() {
        return Err(CloudError::CloudDimensionMismatch(c.dim(), d.dim()));
    }
    for cloud in [c, d] {
        if !cloud.is_empty() && cloud.dim() != norm.total_dim() {
            return Err(NormError::DimensionMismatch {
                expected: norm.total_dim(),
                got: cloud.dim(),
            }
            .into());
        }
    }
    Ok(())
}

/// Excess of `c` over `d`: the worst-case distance from a point of `c` into
/// `d`. Empty `c` gives 0 regardless of `d`; nonempty `c` against empty `d`
/// gives `+inf`.
pub fn excess(c: &PointCloud, d: &PointCloud, norm: &NormSpec) -> Result<ExtReal, CloudError> {
    excess_with_strategy(c, d, norm, NnStrategy::Auto)
}

pub fn excess_with_strategy(
    c: &PointCloud,
    d: &PointCloud,
    norm: &NormSpec,
    strategy: NnStrategy,
) -> Result<ExtReal, CloudError> {
    check_dims(c, d, norm)?;
    if c.is_empty() {
        return Ok(ExtReal::ZERO);
    }
    if d.is_empty() {
        return Ok(ExtReal::PosInf);
    }
    let sources: Vec<usize> = (0..c.len()).collect();
    Ok(ExtReal::new(excess_over_sources(
        c, &sources, d, norm, strategy,
    )))
}

fn excess_over_sources(
    c: &PointCloud,
    sources: &[usize],
    d: &PointCloud,
    norm: &NormSpec,
    strategy: NnStrategy,
) -> f64 {
    let resolver = make_resolver(d, strategy);
    if sources.len() >= PAR_THRESHOLD && rayon::current_num_threads() > 1 {
        sources
            .par_iter()
            .map(|&i| resolver.nearest(c.point(i), norm))
            .reduce(|| 0.0, f64::max)
    } else {
        sources
            .iter()
            .map(|&i| resolver.nearest(c.point(i), norm))
            .fold(0.0, f64::max)
    }
}

/// One-sided truncated excess against a prebuilt index; lets sweeps that
/// compare many clouds to one fixed cloud reuse its index.
pub fn excess_truncated_into(
    src: &PointCloud,
    rho: f64,
    target: &SpatialIndex<'_>,
    norm: &NormSpec,
) -> Result<ExtReal, CloudError> {
    if !(rho >= 0.0) {
        return Err(CloudError::NegativeRadius(rho));
    }
    check_dims(src, target.cloud, norm)?;
    let sources = if src.is_empty() {
        Vec::new()
    } else {
        src.indices_within(norm, rho)
    };
    if sources.is_empty() {
        return Ok(ExtReal::ZERO);
    }
    if target.cloud.is_empty() {
        return Ok(ExtReal::PosInf);
    }
    let worst = if sources.len() >= PAR_THRESHOLD && rayon::current_num_threads() > 1 {
        sources
            .par_iter()
            .map(|&i| target.nearest_distance(src.point(i), norm))
            .reduce(|| 0.0, f64::max)
    } else {
        sources
            .iter()
            .map(|&i| target.nearest_distance(src.point(i), norm))
            .fold(0.0, f64::max)
    };
    Ok(ExtReal::new(worst))
}

/// Truncated Hausdorff distance at radius `rho`:
/// `max{ exs(c ∩ B(rho); d), exs(d ∩ B(rho); c) }`.
///
/// Only the source side of each excess is truncated; targets are taken from
/// the full clouds. Symmetric in `(c, d)` by construction.
pub fn truncated_hausdorff(
    c: &PointCloud,
    d: &PointCloud,
    rho: f64,
    norm: &NormSpec,
) -> Result<ExtReal, CloudError> {
    truncated_hausdorff_with_strategy(c, d, rho, norm, NnStrategy::Auto)
}

pub fn truncated_hausdorff_with_strategy(
    c: &PointCloud,
    d: &PointCloud,
    rho: f64,
    norm: &NormSpec,
    strategy: NnStrategy,
) -> Result<ExtReal, CloudError> {
    if !(rho >= 0.0) {
        return Err(CloudError::NegativeRadius(rho));
    }
    check_dims(c, d, norm)?;
    let one_sided = |src: &PointCloud, dst: &PointCloud| -> Result<ExtReal, CloudError> {
        let sources = if src.is_empty() {
            Vec::new()
        } else {
            src.indices_within(norm, rho)
        };
        if sources.is_empty() {
            return Ok(ExtReal::ZERO);
        }
        if dst.is_empty() {
            return Ok(ExtReal::PosInf);
        }
        Ok(ExtReal::new(excess_over_sources(
            src, &sources, dst, norm, strategy,
        )))
    };
    Ok(one_sided(c, d)?.max(one_sided(d, c)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud2(points: &[[f64; 2]]) -> PointCloud {
        PointCloud::from_points(2, points.iter(), "test").unwrap()
    }

    #[test]
    fn excess_of_empty_cloud_is_zero() {
        let c = PointCloud::empty(2, "empty");
        let d = cloud2(&[[1.0, 0.0]]);
        assert_eq!(excess(&c, &d, &NormSpec::l2(2)).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn excess_into_empty_cloud_is_infinite() {
        let c = cloud2(&[[0.0, 0.0]]);
        let d = PointCloud::empty(2, "empty");
        assert_eq!(excess(&c, &d, &NormSpec::l2(2)).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn excess_single_pair() {
        let c = cloud2(&[[0.0, 0.0]]);
        let d = cloud2(&[[1.0, 0.0]]);
        assert_eq!(
            excess(&c, &d, &NormSpec::l2(2)).unwrap(),
            ExtReal::Finite(1.0)
        );
    }

    #[test]
    fn hausdorff_of_identical_clouds_is_zero() {
        let c = cloud2(&[[0.0, 0.0], [0.5, 0.25], [-1.0, 2.0]]);
        for rho in [0.0, 0.5, 10.0] {
            assert_eq!(
                truncated_hausdorff(&c, &c, rho, &NormSpec::l2(2)).unwrap(),
                ExtReal::ZERO
            );
        }
    }

    #[test]
    fn truncation_keeps_only_in_ball_sources() {
        // The far-away source is outside B(1) and must not contribute.
        let c = cloud2(&[[0.0, 0.0], [5.0, 0.0]]);
        let d = cloud2(&[[0.0, 0.25]]);
        let dl = truncated_hausdorff(&c, &d, 1.0, &NormSpec::l2(2)).unwrap();
        assert_eq!(dl, ExtReal::Finite(0.25));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let c = cloud2(&[[0.0, 0.0]]);
        let d = PointCloud::from_points(3, [[0.0, 0.0, 0.0]].iter(), "d3").unwrap();
        assert!(excess(&c, &d, &NormSpec::l2(2)).is_err());
    }

    #[test]
    fn non_finite_coordinates_rejected() {
        assert!(PointCloud::from_flat(1, vec![f64::NAN], "bad").is_err());
        assert!(PointCloud::from_flat(1, vec![f64::INFINITY], "bad").is_err());
    }

    #[test]
    fn indexed_matches_brute_on_shifted_grid() {
        let mut pts = Vec::new();
        for i in 0..60 {
            for j in 0..60 {
                pts.push([i as f64 * 0.1, j as f64 * 0.1]);
            }
        }
        let c = cloud2(&pts);
        let shifted: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] + 0.03, p[1]]).collect();
        let d = cloud2(&shifted);
        let norm = NormSpec::l2(2);
        let a = excess_with_strategy(&c, &d, &norm, NnStrategy::Quadratic).unwrap();
        let b = excess_with_strategy(&c, &d, &norm, NnStrategy::Indexed).unwrap();
        assert_eq!(a, b);
    }
}
