//! Centrally symmetric convex bodies given by their gauge.
//!
//! A body here is compact, convex, symmetric about the origin, and has
//! non-empty interior. Three primitive families cover the fixtures used
//! throughout: `p`-norm balls with per-axis scaling, ellipsoids given by
//! a positive-definite quadratic form, and symmetric polytopes given by
//! half-space normals. The gauge (Minkowski functional)
//! `ρ(x) = inf { t > 0 : x/t ∈ B }` is the membership test (`ρ ≤ 1`),
//! and the support function `h(u) = max_{x∈B} ⟨x,u⟩` drives Minkowski
//! combinations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::fmath::F64Math;
use super::vector::{Vector, MAX_DIM};
use super::GeometryError;

/// Relative tolerance for feasibility in polytope vertex enumeration.
const VERTEX_FEAS_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
enum BodyKind {
    /// `{ x : Σ |x_i / a_i|^p ≤ 1 }`, `p ∈ [1, ∞]`.
    PBall { p: f64, semi_axes: Vector },
    /// `{ x : x'Qx ≤ 1 }` with `Q` symmetric positive definite.
    /// `q` and `q_inv` are row-major `dim × dim`.
    Ellipsoid {
        dim: usize,
        q: [f64; MAX_DIM * MAX_DIM],
        q_inv: [f64; MAX_DIM * MAX_DIM],
    },
    /// `{ x : |⟨a_i, x⟩| ≤ 1 for all i }`; the normals must span.
    SymPolytope {
        normals: Vec<Vector>,
        /// Vertices, enumerated at construction for small facet counts.
        vertices: Option<Vec<Vector>>,
    },
}

/// A centrally symmetric convex body.
#[derive(Clone, Debug)]
pub struct BodySpec {
    kind: BodyKind,
    dim: usize,
    /// `max_{|u|=1} gauge(u)`; the Lipschitz constant of the gauge.
    lip: f64,
    /// Support function along the coordinate axes (bounding-box half widths).
    axis_support: Vector,
}

impl BodySpec {
    /// A `p`-norm ball with the given positive semi-axes.
    pub fn pball(p: f64, semi_axes: &[f64]) -> Result<Self, GeometryError> {
        if !(p >= 1.0) {
            return Err(GeometryError::InvalidBody("p-ball exponent must be ≥ 1"));
        }
        if semi_axes.is_empty() || semi_axes.len() > MAX_DIM {
            return Err(GeometryError::InvalidBody("dimension must be 1..=3"));
        }
        if semi_axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(GeometryError::InvalidBody(
                "semi-axes must be positive and finite",
            ));
        }
        let dim = semi_axes.len();
        let axes = Vector::new(semi_axes);
        let lip = pball_lipschitz(p, &axes);
        Ok(BodySpec {
            kind: BodyKind::PBall { p, semi_axes: axes },
            dim,
            lip,
            axis_support: pball_axis_support(&axes),
        })
    }

    /// The Euclidean ball of radius `r`.
    pub fn ball(dim: usize, r: f64) -> Result<Self, GeometryError> {
        let axes = [r; MAX_DIM];
        Self::pball(2.0, &axes[..dim])
    }

    /// The cube `[-half_side, half_side]^dim`.
    pub fn cube(dim: usize, half_side: f64) -> Result<Self, GeometryError> {
        let axes = [half_side; MAX_DIM];
        Self::pball(f64::INFINITY, &axes[..dim])
    }

    /// An ellipsoid `{ x : x'Qx ≤ 1 }` from a row-major `dim × dim` matrix.
    pub fn ellipsoid(dim: usize, q_rowmajor: &[f64]) -> Result<Self, GeometryError> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(GeometryError::InvalidBody("dimension must be 1..=3"));
        }
        if q_rowmajor.len() != dim * dim {
            return Err(GeometryError::InvalidBody("Q has the wrong shape"));
        }
        let mut q = [0.0; MAX_DIM * MAX_DIM];
        for i in 0..dim {
            for j in 0..dim {
                let v = q_rowmajor[i * dim + j];
                if !v.is_finite() {
                    return Err(GeometryError::InvalidBody("Q must be finite"));
                }
                q[i * MAX_DIM + j] = v;
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let (a, b) = (q[i * MAX_DIM + j], q[j * MAX_DIM + i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(GeometryError::InvalidBody("Q must be symmetric"));
                }
            }
        }
        let q_inv = invert_spd(dim, &q)
            .ok_or(GeometryError::InvalidBody("Q must be positive definite"))?;
        let lip = spd_max_eigenvalue(dim, &q).sqrt();
        let mut axis_support = Vector::zeros(dim);
        for i in 0..dim {
            // h(e_i) = sqrt((Q^{-1})_{ii})
            axis_support[i] = q_inv[i * MAX_DIM + i].sqrt();
        }
        Ok(BodySpec {
            kind: BodyKind::Ellipsoid { dim, q, q_inv },
            dim,
            lip,
            axis_support,
        })
    }

    /// A symmetric polytope `{ x : |⟨a_i, x⟩| ≤ 1 }`.
    ///
    /// The normals must span the ambient space; otherwise the set is
    /// unbounded and construction fails.
    pub fn sym_polytope(normals: Vec<Vector>) -> Result<Self, GeometryError> {
        let mut body = Self::polytope_unchecked(normals, None)?;
        // Enumerating vertices is O(m^dim · m); cache them only when cheap.
        let BodyKind::SymPolytope { normals, vertices } = &mut body.kind else {
            unreachable!()
        };
        if normals.len() <= 64 {
            let vs = enumerate_vertices(body.dim, normals);
            if vs.is_empty() {
                return Err(GeometryError::InvalidBody(
                    "polytope has no vertices (degenerate normals)",
                ));
            }
            let mut axis_support = Vector::zeros(body.dim);
            for v in &vs {
                for i in 0..body.dim {
                    axis_support[i] = axis_support[i].max(v[i].abs());
                }
            }
            *vertices = Some(vs);
            body.axis_support = axis_support;
        }
        Ok(body)
    }

    /// Polytope constructor used by Minkowski averaging, where the exact
    /// axis support offsets are already known and the facet count is
    /// large enough that vertex enumeration is not worth caching.
    pub(crate) fn polytope_with_axis_support(
        normals: Vec<Vector>,
        axis_support: Vector,
    ) -> Result<Self, GeometryError> {
        let mut body = Self::polytope_unchecked(normals, None)?;
        body.axis_support = axis_support;
        Ok(body)
    }

    fn polytope_unchecked(
        normals: Vec<Vector>,
        vertices: Option<Vec<Vector>>,
    ) -> Result<Self, GeometryError> {
        if normals.is_empty() {
            return Err(GeometryError::InvalidBody("polytope needs normals"));
        }
        let dim = normals[0].dim();
        if normals.iter().any(|n| n.dim() != dim) {
            return Err(GeometryError::InvalidBody("mixed normal dimensions"));
        }
        if normals.iter().any(|n| !n.is_finite() || n.norm() == 0.0) {
            return Err(GeometryError::InvalidBody("normals must be finite and nonzero"));
        }
        if rank(dim, &normals) < dim {
            return Err(GeometryError::InvalidBody(
                "polytope normals do not span the ambient space (unbounded set)",
            ));
        }
        let lip = normals.iter().map(|n| n.norm()).fold(0.0, f64::max);
        // Placeholder axis support; callers fill it in.
        let mut axis_support = Vector::zeros(dim);
        for i in 0..dim {
            axis_support[i] = f64::INFINITY;
        }
        Ok(BodySpec {
            kind: BodyKind::SymPolytope { normals, vertices },
            dim,
            lip,
            axis_support,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The Minkowski functional `inf { t > 0 : x/t ∈ B }`.
    ///
    /// Total, non-negative, positively 1-homogeneous, and symmetric;
    /// `gauge(x) ≤ 1` iff `x ∈ B`.
    pub fn gauge(&self, x: &Vector) -> f64 {
        debug_assert_eq!(x.dim(), self.dim);
        match &self.kind {
            BodyKind::PBall { p, semi_axes } => {
                let xs = x.as_slice();
                let axs = semi_axes.as_slice();
                if *p == f64::INFINITY {
                    let mut m = 0.0f64;
                    for i in 0..xs.len() {
                        m = m.max((xs[i] / axs[i]).abs());
                    }
                    m
                } else if *p == 2.0 {
                    let mut s = 0.0;
                    for i in 0..xs.len() {
                        let z = xs[i] / axs[i];
                        s += z * z;
                    }
                    s.sqrt()
                } else if *p == 1.0 {
                    let mut s = 0.0;
                    for i in 0..xs.len() {
                        s += (xs[i] / axs[i]).abs();
                    }
                    s
                } else {
                    let mut s = 0.0;
                    for i in 0..xs.len() {
                        s += (xs[i] / axs[i]).abs().powf(*p);
                    }
                    s.powf(1.0 / *p)
                }
            }
            BodyKind::Ellipsoid { dim, q, .. } => quad_form(*dim, q, x).max(0.0).sqrt(),
            BodyKind::SymPolytope { normals, .. } => {
                let mut m = 0.0f64;
                for n in normals {
                    m = m.max(n.dot(x).abs());
                }
                m
            }
        }
    }

    /// The support function `h(u) = max_{x∈B} ⟨x, u⟩`.
    pub fn support(&self, u: &Vector) -> f64 {
        debug_assert_eq!(u.dim(), self.dim);
        match &self.kind {
            BodyKind::PBall { p, semi_axes } => {
                // h(u) = dual-norm of (a_i u_i).
                let axs = semi_axes.as_slice();
                let us = u.as_slice();
                if *p == f64::INFINITY {
                    // dual exponent 1
                    let mut s = 0.0;
                    for i in 0..us.len() {
                        s += (axs[i] * us[i]).abs();
                    }
                    s
                } else if *p == 1.0 {
                    let mut m = 0.0f64;
                    for i in 0..us.len() {
                        m = m.max((axs[i] * us[i]).abs());
                    }
                    m
                } else if *p == 2.0 {
                    let mut s = 0.0;
                    for i in 0..us.len() {
                        let z = axs[i] * us[i];
                        s += z * z;
                    }
                    s.sqrt()
                } else {
                    let q = *p / (*p - 1.0);
                    let mut s = 0.0;
                    for i in 0..us.len() {
                        s += (axs[i] * us[i]).abs().powf(q);
                    }
                    s.powf(1.0 / q)
                }
            }
            BodyKind::Ellipsoid { dim, q_inv, .. } => quad_form(*dim, q_inv, u).max(0.0).sqrt(),
            BodyKind::SymPolytope { normals, vertices } => match vertices {
                Some(vs) => vs.iter().map(|v| v.dot(u)).fold(0.0, f64::max),
                None => enumerate_vertices(self.dim, normals)
                    .iter()
                    .map(|v| v.dot(u))
                    .fold(0.0, f64::max),
            },
        }
    }

    /// `max_{|u|=1} gauge(u)`: the gauge's Euclidean Lipschitz constant.
    #[inline]
    pub fn lipschitz(&self) -> f64 {
        self.lip
    }

    /// Support along the coordinate axes; half-widths of the bounding box.
    pub fn axis_support(&self) -> Vector {
        self.axis_support
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            BodyKind::PBall { p, semi_axes } => {
                if *p == f64::INFINITY {
                    format!("pball(p=inf, axes={:?})", semi_axes.as_slice())
                } else {
                    format!("pball(p={}, axes={:?})", p, semi_axes.as_slice())
                }
            }
            BodyKind::Ellipsoid { dim, q, .. } => {
                let mut rows = Vec::new();
                for i in 0..*dim {
                    rows.push(&q[i * MAX_DIM..i * MAX_DIM + dim]);
                }
                format!("ellipsoid(Q={:?})", rows)
            }
            BodyKind::SymPolytope { normals, .. } => {
                let ns: Vec<&[f64]> = normals.iter().map(|n| n.as_slice()).collect();
                format!("polytope(normals={:?})", ns)
            }
        }
    }

    /// Raw pieces for serialization in downstream crates.
    pub fn as_parts(&self) -> BodyParts<'_> {
        match &self.kind {
            BodyKind::PBall { p, semi_axes } => BodyParts::PBall {
                p: *p,
                semi_axes: semi_axes.as_slice(),
            },
            BodyKind::Ellipsoid { dim, q, .. } => BodyParts::Ellipsoid { dim: *dim, q },
            BodyKind::SymPolytope { normals, .. } => BodyParts::SymPolytope { normals },
        }
    }
}

/// Borrowed view of a body's defining data.
pub enum BodyParts<'a> {
    PBall { p: f64, semi_axes: &'a [f64] },
    Ellipsoid { dim: usize, q: &'a [f64; MAX_DIM * MAX_DIM] },
    SymPolytope { normals: &'a [Vector] },
}

fn pball_axis_support(axes: &Vector) -> Vector {
    // h(e_i) = a_i for every p.
    let mut v = Vector::zeros(axes.dim());
    for i in 0..axes.dim() {
        v[i] = axes[i];
    }
    v
}

/// `max_{|u|=1} ||(u_i / a_i)||_p`: the l2→lp operator norm of
/// `diag(1/a)`. For `p ≥ 2` the maximum sits on the stiffest axis; for
/// `p < 2` it is attained at an interior direction with closed form
/// `(Σ (1/a_i)^r)^(1/r)`, `r = 2p/(2-p)`.
fn pball_lipschitz(p: f64, axes: &Vector) -> f64 {
    let inv_min = axes
        .as_slice()
        .iter()
        .map(|a| 1.0 / a)
        .fold(0.0f64, f64::max);
    if p >= 2.0 {
        inv_min
    } else {
        let r = 2.0 * p / (2.0 - p);
        let mut s = 0.0;
        for a in axes.as_slice() {
            s += (1.0 / a).powf(r);
        }
        s.powf(1.0 / r)
    }
}

#[inline]
fn quad_form(dim: usize, m: &[f64; MAX_DIM * MAX_DIM], x: &Vector) -> f64 {
    let xs = x.as_slice();
    let mut acc = 0.0;
    for i in 0..dim {
        let mut row = 0.0;
        for j in 0..dim {
            row += m[i * MAX_DIM + j] * xs[j];
        }
        acc += xs[i] * row;
    }
    acc
}

/// Inverse of a symmetric positive-definite `dim × dim` matrix via
/// Cholesky; `None` if not positive definite.
fn invert_spd(dim: usize, q: &[f64; MAX_DIM * MAX_DIM]) -> Option<[f64; MAX_DIM * MAX_DIM]> {
    // Cholesky Q = L L'.
    let mut l = [0.0; MAX_DIM * MAX_DIM];
    for i in 0..dim {
        for j in 0..=i {
            let mut s = q[i * MAX_DIM + j];
            for k in 0..j {
                s -= l[i * MAX_DIM + k] * l[j * MAX_DIM + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * MAX_DIM + i] = s.sqrt();
            } else {
                l[i * MAX_DIM + j] = s / l[j * MAX_DIM + j];
            }
        }
    }
    // Solve Q X = I column by column.
    let mut inv = [0.0; MAX_DIM * MAX_DIM];
    for col in 0..dim {
        let mut y = [0.0; MAX_DIM];
        for i in 0..dim {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                s -= l[i * MAX_DIM + k] * y[k];
            }
            y[i] = s / l[i * MAX_DIM + i];
        }
        for i in (0..dim).rev() {
            let mut s = y[i];
            for k in (i + 1)..dim {
                s -= l[k * MAX_DIM + i] * inv[k * MAX_DIM + col];
            }
            inv[i * MAX_DIM + col] = s / l[i * MAX_DIM + i];
        }
    }
    Some(inv)
}

/// Largest eigenvalue of a symmetric positive-definite matrix by power
/// iteration with a fixed budget (deterministic).
fn spd_max_eigenvalue(dim: usize, q: &[f64; MAX_DIM * MAX_DIM]) -> f64 {
    let mut v = [1.0; MAX_DIM];
    let mut lambda = 0.0;
    for _ in 0..200 {
        let mut w = [0.0; MAX_DIM];
        for i in 0..dim {
            for j in 0..dim {
                w[i] += q[i * MAX_DIM + j] * v[j];
            }
        }
        let norm = w[..dim].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        for i in 0..dim {
            v[i] = w[i] / norm;
        }
    }
    lambda
}

/// Rank of a set of vectors, by Gaussian elimination with a relative
/// pivot tolerance.
fn rank(dim: usize, vectors: &[Vector]) -> usize {
    let mut rows: Vec<[f64; MAX_DIM]> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut row = [0.0; MAX_DIM];
        row[..dim].copy_from_slice(v.as_slice());
        rows.push(row);
    }
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, x| a.max(x.abs()))
        .max(1e-300);
    let mut r = 0;
    for col in 0..dim {
        let pivot = (r..rows.len()).max_by(|&a, &b| {
            rows[a][col]
                .abs()
                .partial_cmp(&rows[b][col].abs())
                .unwrap()
        });
        let Some(p) = pivot else { break };
        if rows[p][col].abs() <= 1e-12 * scale {
            continue;
        }
        rows.swap(r, p);
        for i in (r + 1)..rows.len() {
            let f = rows[i][col] / rows[r][col];
            for c in col..dim {
                rows[i][c] -= f * rows[r][c];
            }
        }
        r += 1;
        if r == dim {
            break;
        }
    }
    r
}

/// All vertices of `{ |⟨a_i, x⟩| ≤ 1 }` by brute-force intersection of
/// constraint tuples. Adequate for the facet counts bodies are built
/// with; Minkowski-average polytopes avoid it via precomputed supports.
fn enumerate_vertices(dim: usize, normals: &[Vector]) -> Vec<Vector> {
    let m = normals.len();
    let gauge = |x: &Vector| -> f64 {
        normals.iter().map(|n| n.dot(x).abs()).fold(0.0, f64::max)
    };
    let mut out: Vec<Vector> = Vec::new();
    let mut push = |x: Vector| {
        if gauge(&x) <= 1.0 + VERTEX_FEAS_TOL {
            out.push(x);
        }
    };
    match dim {
        1 => {
            let amax = normals.iter().map(|n| n[0].abs()).fold(0.0, f64::max);
            push(Vector::new(&[1.0 / amax]));
            push(Vector::new(&[-1.0 / amax]));
        }
        2 => {
            for i in 0..m {
                for j in (i + 1)..m {
                    for s in [1.0, -1.0] {
                        // ⟨a_i,x⟩ = 1, ⟨a_j,x⟩ = s
                        let (a, b) = (normals[i], normals[j]);
                        let det = a[0] * b[1] - a[1] * b[0];
                        if det.abs() < 1e-14 * a.norm() * b.norm() {
                            continue;
                        }
                        let x = (b[1] - s * a[1]) / det;
                        let y = (s * a[0] - b[0]) / det;
                        let v = Vector::new(&[x, y]);
                        push(v);
                        push(-v);
                    }
                }
            }
        }
        3 => {
            for i in 0..m {
                for j in (i + 1)..m {
                    for k in (j + 1)..m {
                        for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                            if let Some(v) =
                                solve3(&normals[i], &normals[j], &normals[k], 1.0, si, sj)
                            {
                                push(v);
                                push(-v);
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    out
}

fn solve3(a: &Vector, b: &Vector, c: &Vector, ra: f64, rb: f64, rc: f64) -> Option<Vector> {
    let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0]);
    let scale = a.norm() * b.norm() * c.norm();
    if det.abs() < 1e-14 * scale.max(1e-300) {
        return None;
    }
    // Cramer's rule.
    let dx = ra * (b[1] * c[2] - b[2] * c[1]) - a[1] * (rb * c[2] - b[2] * rc)
        + a[2] * (rb * c[1] - b[1] * rc);
    let dy = a[0] * (rb * c[2] - b[2] * rc) - ra * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * rc - rb * c[0]);
    let dz = a[0] * (b[1] * rc - rb * c[1]) - a[1] * (b[0] * rc - rb * c[0])
        + ra * (b[0] * c[1] - b[1] * c[0]);
    Some(Vector::new(&[dx / det, dy / det, dz / det]))
}
