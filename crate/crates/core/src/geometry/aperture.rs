//! Cone structure of the difference `B₁ \ B₂` in the plane.
//!
//! A direction `u(θ)` belongs to the cone over `B₁ \ B₂` exactly when
//! `B₁` reaches further than `B₂` along it, i.e. `gauge₂(u) > gauge₁(u)`.
//! The connected components of that direction set are arcs; their
//! angular widths are the apertures. Central symmetry makes the arc
//! family invariant under `θ ↦ θ + π`, which is enforced exactly by
//! scanning `[0, π)` and mirroring.

use alloc::vec::Vec;

#[allow(unused_imports)]
use crate::fmath::F64Math;
use super::body::BodySpec;
use super::vector::Vector;
use super::GeometryError;

/// Initial scan resolution over the half circle; endpoints are refined
/// by bisection afterwards. Arcs narrower than the scan step can be
/// missed — the report is resolution-qualified like every sampling
/// procedure in this crate.
const SCAN_POINTS: usize = 4096;

/// One cone component, an angular interval.
#[derive(Clone, Debug)]
pub struct Arc {
    /// Start angle in `[0, 2π)`.
    pub theta_lo: f64,
    /// End angle; may exceed `2π` when the arc wraps.
    pub theta_hi: f64,
    /// Unit direction of the component axis (the arc midpoint).
    pub axis: Vector,
}

impl Arc {
    pub fn aperture(&self) -> f64 {
        self.theta_hi - self.theta_lo
    }

    pub fn midpoint_angle(&self) -> f64 {
        0.5 * (self.theta_lo + self.theta_hi)
    }
}

/// Cone components of both set differences of a pair of plane bodies.
#[derive(Clone, Debug)]
pub struct ApertureReport {
    /// Components of `B₁ \ B₂` (directions with `gauge₂ > gauge₁`).
    pub b1_minus_b2: Vec<Arc>,
    /// Components of `B₂ \ B₁`.
    pub b2_minus_b1: Vec<Arc>,
    /// No direction with `gauge₂ > gauge₁` was found: `B₁ ⊂ B₂`.
    pub b1_subset_b2: bool,
    pub b2_subset_b1: bool,
    pub angular_resolution: f64,
}

impl ApertureReport {
    /// Largest aperture among the `B₁ \ B₂` components.
    pub fn max_aperture_b1(&self) -> f64 {
        self.b1_minus_b2.iter().map(Arc::aperture).fold(0.0, f64::max)
    }

    pub fn max_aperture_b2(&self) -> f64 {
        self.b2_minus_b1.iter().map(Arc::aperture).fold(0.0, f64::max)
    }
}

/// Numbers behind the boundary construction for one cone component:
/// the axis point on `∂B₂`, the two component endpoints on
/// `∂B₁ ∩ ∂B₂`, their gauges in the metric of `B₁`, and the two
/// displayed inequalities of the inclusion argument evaluated
/// numerically.
#[derive(Clone, Debug)]
pub struct ComponentDiagnostics {
    /// `x′`: intersection of the component axis ray with `∂B₂`.
    pub axis_point: Vector,
    /// `x₁♯`, `x₂♯`: component endpoints, on `∂B₁ ∩ ∂B₂` up to the
    /// angular resolution of the arc.
    pub endpoint_1: Vector,
    pub endpoint_2: Vector,
    /// `gauge₁(x′)`.
    pub axis_gauge: f64,
    /// `gauge₁((x₁♯ + x₂♯)/2)`.
    pub midpoint_gauge: f64,
    /// `gauge₁(x₁♯)` and `gauge₁(x₂♯)`; equal for a symmetric component.
    pub endpoint_gauge_1: f64,
    pub endpoint_gauge_2: f64,
    /// `√2·gauge₁(x′) ≥ √2·gauge₁((x₁♯+x₂♯)/2)`.
    pub axis_dominates_midpoint: bool,
    /// `√2·gauge₁((x₁♯+x₂♯)/2) ≥ gauge₁(x₁♯)`.
    pub midpoint_dominates_endpoint: bool,
}

/// Difference-cone arcs for a pair of origin-centred plane bodies, with
/// endpoints refined by bisection to `angular_resolution` radians.
pub fn component_apertures(
    b1: &BodySpec,
    b2: &BodySpec,
    angular_resolution: f64,
) -> Result<ApertureReport, GeometryError> {
    if b1.dim() != 2 || b2.dim() != 2 {
        return Err(GeometryError::DimensionError {
            expected: 2,
            got: if b1.dim() != 2 { b1.dim() } else { b2.dim() },
        });
    }
    if !(angular_resolution > 0.0) {
        return Err(GeometryError::DomainError(
            "angular resolution must be positive",
        ));
    }
    // f(θ) = gauge₂(u) - gauge₁(u); period π by central symmetry.
    let f = |theta: f64| -> f64 {
        let u = Vector::from_angle(theta);
        b2.gauge(&u) - b1.gauge(&u)
    };
    let step = core::f64::consts::PI / SCAN_POINTS as f64;
    let values: Vec<f64> = (0..SCAN_POINTS).map(|j| f(j as f64 * step)).collect();

    // B₁ ⊂ B₂ iff gauge₂ ≤ gauge₁ everywhere, i.e. no positive sample.
    let b1_subset_b2 = values.iter().all(|v| !(*v > 0.0));
    let b2_subset_b1 = values.iter().all(|v| !(*v < 0.0));
    let mut report = ApertureReport {
        b1_minus_b2: Vec::new(),
        b2_minus_b1: Vec::new(),
        b1_subset_b2,
        b2_subset_b1,
        angular_resolution,
    };
    if b1_subset_b2 || b2_subset_b1 {
        return Ok(report);
    }

    // Maximal cyclic runs of a predicate over the half circle, with the
    // entering/leaving crossings refined by bisection.
    let runs = |inside: &dyn Fn(f64) -> bool| -> Vec<(f64, f64)> {
        let flags: Vec<bool> = values.iter().map(|v| inside(*v)).collect();
        let crossing = |j: usize| -> f64 {
            // predicate changes between samples j and j+1
            let mut lo = j as f64 * step;
            let mut hi = lo + step;
            let lo_inside = flags[j];
            while hi - lo > angular_resolution {
                let mid = 0.5 * (lo + hi);
                if inside(f(mid)) == lo_inside {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let mut enters: Vec<usize> = Vec::new();
        let mut leaves: Vec<usize> = Vec::new();
        for j in 0..SCAN_POINTS {
            let next = (j + 1) % SCAN_POINTS;
            if !flags[j] && flags[next] {
                enters.push(j);
            } else if flags[j] && !flags[next] {
                leaves.push(j);
            }
        }
        debug_assert_eq!(enters.len(), leaves.len());
        let mut out = Vec::with_capacity(enters.len());
        for &e in &enters {
            // the matching leave is the first one cyclically after e
            let l = leaves
                .iter()
                .copied()
                .filter(|l| l > &e)
                .min()
                .or_else(|| leaves.iter().copied().min())
                .unwrap();
            let lo = crossing(e);
            let mut hi = crossing(l);
            if hi <= lo {
                hi += core::f64::consts::PI; // run wraps past π ≡ 0
            }
            out.push((lo, hi));
        }
        out
    };
    let arcs_pos = runs(&|v: f64| v > 0.0);
    let arcs_neg = runs(&|v: f64| v < 0.0);

    let build = |intervals: &[(f64, f64)]| -> Vec<Arc> {
        let mut arcs = Vec::with_capacity(intervals.len() * 2);
        for &(lo, hi) in intervals {
            for half in 0..2 {
                let shift = half as f64 * core::f64::consts::PI;
                let arc_lo = lo + shift;
                let arc_hi = hi + shift;
                arcs.push(Arc {
                    theta_lo: arc_lo,
                    theta_hi: arc_hi,
                    axis: Vector::from_angle(0.5 * (arc_lo + arc_hi)),
                });
            }
        }
        arcs.sort_by(|a, b| a.theta_lo.partial_cmp(&b.theta_lo).unwrap());
        arcs
    };
    report.b1_minus_b2 = build(&arcs_pos);
    report.b2_minus_b1 = build(&arcs_neg);
    Ok(report)
}

/// Boundary construction for one cone component of `B₁ \ B₂`.
pub fn component_diagnostics(
    b1: &BodySpec,
    b2: &BodySpec,
    component: &Arc,
) -> Result<ComponentDiagnostics, GeometryError> {
    if b1.dim() != 2 || b2.dim() != 2 {
        return Err(GeometryError::DimensionError {
            expected: 2,
            got: if b1.dim() != 2 { b1.dim() } else { b2.dim() },
        });
    }
    if !(component.aperture() > 1e-9) {
        return Err(GeometryError::DegenerateComponent);
    }
    let sqrt2 = core::f64::consts::SQRT_2;
    // x′ = axis ray ∩ ∂B₂.
    let axis_point = component.axis * (1.0 / b2.gauge(&component.axis));
    // Endpoints sit where gauge₁ = gauge₂; place them on ∂B₁.
    let endpoint = |theta: f64| -> Vector {
        let u = Vector::from_angle(theta);
        u * (1.0 / b1.gauge(&u))
    };
    let endpoint_1 = endpoint(component.theta_lo);
    let endpoint_2 = endpoint(component.theta_hi);
    let midpoint = (endpoint_1 + endpoint_2) * 0.5;
    let axis_gauge = b1.gauge(&axis_point);
    let midpoint_gauge = b1.gauge(&midpoint);
    let endpoint_gauge_1 = b1.gauge(&endpoint_1);
    let endpoint_gauge_2 = b1.gauge(&endpoint_2);
    Ok(ComponentDiagnostics {
        axis_point,
        endpoint_1,
        endpoint_2,
        axis_gauge,
        midpoint_gauge,
        endpoint_gauge_1,
        endpoint_gauge_2,
        axis_dominates_midpoint: sqrt2 * axis_gauge >= sqrt2 * midpoint_gauge,
        midpoint_dominates_endpoint: sqrt2 * midpoint_gauge >= endpoint_gauge_1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use crate::fmath::F64Math;

    fn square() -> BodySpec {
        BodySpec::cube(2, 1.0).unwrap()
    }
    fn disk12() -> BodySpec {
        BodySpec::ball(2, 1.2).unwrap()
    }

    #[test]
    fn square_vs_disk_apertures_match_closed_form() {
        // Solve 1.2·max(|cosθ|, |sinθ|) = 1: the square reaches beyond
        // the 1.2-disk on arcs of width 2(π/4 - arccos(5/6)) around the
        // diagonals, and the disk beyond the square on arcs of width
        // 2·arccos(5/6) around the axes.
        let acos56 = (5.0f64 / 6.0).acos();
        let width_sq = 2.0 * (core::f64::consts::FRAC_PI_4 - acos56);
        let width_disk = 2.0 * acos56;
        let rep = component_apertures(&square(), &disk12(), 1e-8).unwrap();
        assert!(!rep.b1_subset_b2 && !rep.b2_subset_b1);
        assert_eq!(rep.b1_minus_b2.len(), 4);
        assert_eq!(rep.b2_minus_b1.len(), 4);
        for arc in &rep.b1_minus_b2 {
            assert!(
                (arc.aperture() - width_sq).abs() < 1e-6,
                "aperture {} vs {}",
                arc.aperture(),
                width_sq
            );
        }
        for arc in &rep.b2_minus_b1 {
            assert!((arc.aperture() - width_disk).abs() < 1e-6);
        }
    }

    #[test]
    fn equal_bodies_flagged_as_mutual_subsets() {
        let rep = component_apertures(&disk12(), &disk12(), 1e-6).unwrap();
        assert!(rep.b1_subset_b2 && rep.b2_subset_b1);
        assert!(rep.b1_minus_b2.is_empty() && rep.b2_minus_b1.is_empty());
    }

    #[test]
    fn swapping_arguments_swaps_arc_lists() {
        let a = component_apertures(&square(), &disk12(), 1e-7).unwrap();
        let b = component_apertures(&disk12(), &square(), 1e-7).unwrap();
        assert_eq!(a.b1_minus_b2.len(), b.b2_minus_b1.len());
        for (x, y) in a.b1_minus_b2.iter().zip(&b.b2_minus_b1) {
            assert!((x.theta_lo - y.theta_lo).abs() < 1e-6);
            assert!((x.theta_hi - y.theta_hi).abs() < 1e-6);
        }
    }

    #[test]
    fn antipodal_copies_present() {
        let rep = component_apertures(&square(), &disk12(), 1e-7).unwrap();
        for arc in &rep.b1_minus_b2 {
            let mirrored = (arc.midpoint_angle() + core::f64::consts::PI)
                % core::f64::consts::TAU;
            assert!(
                rep.b1_minus_b2.iter().any(|other| {
                    let m = other.midpoint_angle() % core::f64::consts::TAU;
                    (m - mirrored).abs() < 1e-6
                }),
                "missing antipodal arc"
            );
        }
    }

    #[test]
    fn arcs_cover_the_circle() {
        // Arc families of (B₁,B₂) and (B₂,B₁) plus equality angles
        // partition the circle.
        let rep = component_apertures(&square(), &disk12(), 1e-7).unwrap();
        let total: f64 = rep
            .b1_minus_b2
            .iter()
            .chain(&rep.b2_minus_b1)
            .map(Arc::aperture)
            .sum();
        let slack = 1e-6 * (rep.b1_minus_b2.len() + rep.b2_minus_b1.len()) as f64;
        assert!(
            (total - core::f64::consts::TAU).abs() < slack + 1e-9,
            "total {total}"
        );
    }

    #[test]
    fn diagonal_component_diagnostics() {
        let rep = component_apertures(&square(), &disk12(), 1e-8).unwrap();
        // Find the component whose axis is the main diagonal.
        let diag = rep
            .b1_minus_b2
            .iter()
            .find(|a| (a.midpoint_angle() - core::f64::consts::FRAC_PI_4).abs() < 1e-3)
            .expect("diagonal component");
        let d = component_diagnostics(&square(), &disk12(), diag).unwrap();
        // x′ = 1.2·(1/√2, 1/√2); its square-gauge is 1.2/√2.
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        assert!((d.axis_point[0] - 1.2 * inv_sqrt2).abs() < 1e-6);
        assert!((d.axis_point[1] - 1.2 * inv_sqrt2).abs() < 1e-6);
        assert!((d.axis_gauge - 1.2 * inv_sqrt2).abs() < 1e-6);
        // Endpoints: x = (1, 1.2·sin(acos(5/6))) up to symmetry, with
        // equal gauges.
        assert!((d.endpoint_gauge_1 - 1.0).abs() < 1e-6);
        assert!((d.endpoint_gauge_2 - 1.0).abs() < 1e-6);
        let y = 1.2 * (1.0 - 25.0 / 36.0f64).sqrt();
        let e = if d.endpoint_1[0] > d.endpoint_1[1] {
            d.endpoint_1
        } else {
            d.endpoint_2
        };
        assert!((e[0] - 1.0).abs() < 1e-5, "{:?}", e);
        assert!((e[1] - y).abs() < 1e-5, "{:?} vs y={y}", e);
        // Both displayed inequalities hold on this fixture.
        assert!(d.axis_dominates_midpoint);
        assert!(d.midpoint_dominates_endpoint);
    }

    #[test]
    fn degenerate_component_rejected() {
        let arc = Arc {
            theta_lo: 0.3,
            theta_hi: 0.3 + 1e-12,
            axis: Vector::from_angle(0.3),
        };
        assert!(matches!(
            component_diagnostics(&square(), &disk12(), &arc),
            Err(GeometryError::DegenerateComponent)
        ));
    }

    #[test]
    fn dimension_error_for_3d() {
        let b3 = BodySpec::ball(3, 1.0).unwrap();
        assert!(matches!(
            component_apertures(&b3, &b3, 1e-6),
            Err(GeometryError::DimensionError { .. })
        ));
    }
}
