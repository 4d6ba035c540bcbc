//! Masked uniform grids and the discrete Dirichlet operator.
//!
//! The mask holds every lattice point `j·h` strictly interior to the
//! region. The operator is assembled in dimensionless form: the
//! eigenvalue problem solved downstream is `K v = μ M v` where `K` is
//! the symmetric 5-point (2D) / 7-point (3D) stencil with cut-cell edge
//! weights `1/θ` towards the boundary, and `M` is the diagonal of
//! cut-cell volume fractions. The physical eigenvalue is `½·μ/h²`.
//! Because `K` and `M` depend only on the mask graph and the
//! dimensionless boundary fractions, a region and its `c`-scaled copy
//! on the `c·h` grid produce bit-identical pencils; eigenvalue
//! homogeneity `λ(cΩ) = λ(Ω)/c²` is then exact up to the final few
//! floating-point operations.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::fmath::F64Math;
use crate::geometry::{Region, Vector, MAX_DIM};
use super::SpectralError;

/// Fractional boundary gaps below this are clamped; a smaller gap means
/// the point is numerically on the boundary and the huge edge weight
/// would only poison conditioning.
const MIN_GAP: f64 = 1e-6;

/// Bisection steps when locating the boundary along a grid edge. Fixed
/// so the resolved gap is a deterministic function of the membership
/// predicate alone.
const GAP_BISECTIONS: usize = 60;

/// Hard cap on candidate lattice size, to fail loudly instead of
/// exhausting memory on absurd resolutions.
const MAX_CANDIDATES: usize = 200_000_000;

/// Interior lattice points of a region at spacing `h`.
#[derive(Clone, Debug)]
pub struct GridMask {
    pub dim: usize,
    pub h: f64,
    /// Inclusive lattice index range per axis (candidate box, one layer
    /// beyond the bounding box).
    lo_idx: [i64; MAX_DIM],
    shape: [usize; MAX_DIM],
    /// Lattice index (flattened, lexicographic) of each interior point.
    flat: Vec<u32>,
    /// Flat lattice index -> compact point index, `u32::MAX` outside.
    lookup: Vec<u32>,
}

impl GridMask {
    /// Number of interior points.
    #[inline]
    pub fn len(&self) -> usize {
        self.flat.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// Coordinates of the `k`-th interior point (lexicographic order).
    pub fn point(&self, k: usize) -> Vector {
        let mut rem = self.flat[k] as usize;
        let mut coords = [0.0; MAX_DIM];
        for d in (0..self.dim).rev() {
            let j = rem % self.shape[d];
            rem /= self.shape[d];
            coords[d] = (self.lo_idx[d] + j as i64) as f64 * self.h;
        }
        Vector::new(&coords[..self.dim])
    }

    fn unflatten(&self, flat: usize) -> [i64; MAX_DIM] {
        let mut rem = flat;
        let mut idx = [0i64; MAX_DIM];
        for d in (0..self.dim).rev() {
            idx[d] = self.lo_idx[d] + (rem % self.shape[d]) as i64;
            rem /= self.shape[d];
        }
        idx
    }

    fn compact_at(&self, idx: &[i64; MAX_DIM]) -> u32 {
        let mut flat = 0usize;
        for d in 0..self.dim {
            let j = idx[d] - self.lo_idx[d];
            if j < 0 || j as usize >= self.shape[d] {
                return u32::MAX;
            }
            flat = flat * self.shape[d] + j as usize;
        }
        self.lookup[flat]
    }
}

/// Build the interior mask of `region` at spacing `h`.
///
/// The candidate box is the cached bounding box dilated by one layer;
/// a lattice point is interior iff the region's strict-interior
/// predicate holds. Point order is lexicographic and deterministic.
pub fn build_mask(region: &Region, h: f64) -> Result<GridMask, SpectralError> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(SpectralError::EmptyMask);
    }
    let dim = region.dim();
    let bb = region.bbox();
    let mut lo_idx = [0i64; MAX_DIM];
    let mut shape = [1usize; MAX_DIM];
    let mut candidates = 1usize;
    for d in 0..dim {
        let lo = (bb.lo[d] / h).floor() as i64 - 1;
        let hi = (bb.hi[d] / h).ceil() as i64 + 1;
        lo_idx[d] = lo;
        shape[d] = (hi - lo + 1).max(0) as usize;
        candidates = candidates.saturating_mul(shape[d]);
    }
    if candidates == 0 {
        return Err(SpectralError::EmptyMask);
    }
    if candidates > MAX_CANDIDATES {
        return Err(SpectralError::MaskTooLarge { candidates });
    }

    let mut lookup = vec![u32::MAX; candidates];
    let mut flat_ids = Vec::new();
    let mut idx = [0usize; MAX_DIM];
    let mut coords = [0.0; MAX_DIM];
    for flat in 0..candidates {
        let mut rem = flat;
        for d in (0..dim).rev() {
            idx[d] = rem % shape[d];
            rem /= shape[d];
        }
        for d in 0..dim {
            coords[d] = (lo_idx[d] + idx[d] as i64) as f64 * h;
        }
        if region.interior(&Vector::new(&coords[..dim])) {
            lookup[flat] = flat_ids.len() as u32;
            flat_ids.push(flat as u32);
        }
    }
    if flat_ids.is_empty() {
        return Err(SpectralError::EmptyMask);
    }
    if flat_ids.len() >= u32::MAX as usize {
        return Err(SpectralError::MaskTooLarge { candidates });
    }
    Ok(GridMask {
        dim,
        h,
        lo_idx,
        shape,
        flat: flat_ids,
        lookup,
    })
}

/// The dimensionless generalized pencil `(K, M)` on a mask.
#[derive(Clone, Debug)]
pub struct StencilOperator {
    pub n: usize,
    dim: usize,
    /// Compact neighbor index per (point, direction); `u32::MAX` when
    /// the edge leaves the mask.
    nbr: Vec<[u32; 2 * MAX_DIM]>,
    /// Edge weight per (point, direction): 1 between interior points,
    /// `1/θ` towards the boundary.
    weight: Vec<[f64; 2 * MAX_DIM]>,
    diag: Vec<f64>,
    mass: Vec<f64>,
}

/// Assemble the stencil pencil for a mask over its region.
pub fn assemble(region: &Region, mask: &GridMask) -> StencilOperator {
    let n = mask.len();
    let dim = mask.dim;
    let h = mask.h;
    let mut nbr = vec![[u32::MAX; 2 * MAX_DIM]; n];
    let mut weight = vec![[0.0; 2 * MAX_DIM]; n];
    let mut diag = vec![0.0; n];
    let mut mass = vec![1.0; n];

    for k in 0..n {
        let idx = mask.unflatten(mask.flat[k] as usize);
        let x = mask.point(k);
        let mut m_k = 1.0;
        for d in 0..dim {
            let mut gap_sum = 0.0;
            for (slot, side) in [(2 * d, 1i64), (2 * d + 1, -1i64)] {
                let mut nb_idx = idx;
                nb_idx[d] += side;
                let nb = mask.compact_at(&nb_idx);
                nbr[k][slot] = nb;
                if nb != u32::MAX {
                    weight[k][slot] = 1.0;
                    diag[k] += 1.0;
                    gap_sum += 1.0;
                } else {
                    let theta = boundary_gap(region, &x, d, side as f64, h);
                    weight[k][slot] = 0.0; // no off-diagonal entry
                    diag[k] += 1.0 / theta;
                    gap_sum += theta;
                }
            }
            m_k *= 0.5 * gap_sum;
        }
        mass[k] = m_k;
    }
    StencilOperator {
        n,
        dim,
        nbr,
        weight,
        diag,
        mass,
    }
}

/// Fraction of `h` from interior point `x` to the boundary along
/// `side·e_d`, in `(MIN_GAP, 1]`, found by bisection on the region's
/// interior predicate.
fn boundary_gap(region: &Region, x: &Vector, d: usize, side: f64, h: f64) -> f64 {
    let mut probe = *x;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..GAP_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        probe[d] = x[d] + side * mid * h;
        if region.interior(&probe) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi.max(MIN_GAP)
}

impl StencilOperator {
    /// `y = K x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let dirs = 2 * self.dim;
        for k in 0..self.n {
            let mut acc = self.diag[k] * x[k];
            let nb = &self.nbr[k];
            let w = &self.weight[k];
            for s in 0..dirs {
                let j = nb[s];
                if j != u32::MAX {
                    acc -= w[s] * x[j as usize];
                }
            }
            y[k] = acc;
        }
    }

    #[inline]
    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BodySpec;
    use alloc::collections::BTreeSet;

    #[test]
    fn disk_mask_enumeration_at_half_spacing() {
        // Brute-force oracle: all multiples of 0.5 strictly inside the
        // unit circle.
        let mut expect = BTreeSet::new();
        for jx in -4i64..=4 {
            for jy in -4i64..=4 {
                let (x, y) = (jx as f64 * 0.5, jy as f64 * 0.5);
                if (x * x + y * y) < 1.0 - 1e-12 {
                    expect.insert((jx, jy));
                }
            }
        }
        assert_eq!(expect.len(), 9); // center, 4 axis points, 4 diagonal points
        let region = Region::body(BodySpec::ball(2, 1.0).unwrap());
        let mask = build_mask(&region, 0.5).unwrap();
        let got: BTreeSet<(i64, i64)> = (0..mask.len())
            .map(|k| {
                let p = mask.point(k);
                ((p[0] / 0.5).round() as i64, (p[1] / 0.5).round() as i64)
            })
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn square_mask_strict_interior() {
        // [-1,1]² at h = 0.5: points with |coord| = 1 are boundary, so
        // the interior lattice is 3×3.
        let region = Region::body(BodySpec::cube(2, 1.0).unwrap());
        let mask = build_mask(&region, 0.5).unwrap();
        assert_eq!(mask.len(), 9);
    }

    #[test]
    fn oversized_spacing_empties_the_mask() {
        // A small disk pushed between lattice points: no interior node.
        // (The lattice passes through the origin, so an origin-symmetric
        // region always contains at least that node.)
        let region = Region::translate(
            crate::geometry::Vector::new(&[0.5, 0.5]),
            Region::body(BodySpec::ball(2, 0.3).unwrap()),
        )
        .unwrap();
        assert!(matches!(
            build_mask(&region, 1.0),
            Err(SpectralError::EmptyMask)
        ));
    }

    #[test]
    fn every_mask_point_is_member() {
        let region = Region::intersection_of(
            &BodySpec::ball(2, 1.0).unwrap(),
            &BodySpec::cube(2, 0.8).unwrap(),
        )
        .unwrap();
        let mask = build_mask(&region, 0.07).unwrap();
        assert!(!mask.is_empty());
        for k in 0..mask.len() {
            assert!(region.membership(&mask.point(k)));
        }
    }

    #[test]
    fn square_boundary_gaps_are_unit() {
        // Axis-aligned square boundaries sit exactly on lattice lines,
        // so every gap is 1 and the pencil reduces to the classical
        // stencil with unit mass.
        let region = Region::body(BodySpec::cube(2, 1.0).unwrap());
        let mask = build_mask(&region, 0.25).unwrap();
        let op = assemble(&region, &mask);
        for k in 0..op.n {
            assert!((op.mass()[k] - 1.0).abs() < 1e-9);
            assert!(op.diagonal()[k] <= 4.0 + 1e-9);
        }
    }
}
