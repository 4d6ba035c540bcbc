//! Small fixed-capacity vectors for ambient dimensions 1 through 3.
//!
//! Stored inline and `Copy` so the Monte Carlo step loop never
//! allocates.

#[allow(unused_imports)]
use crate::fmath::F64Math;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

/// Maximum supported ambient dimension.
pub const MAX_DIM: usize = 3;

/// A point or direction in `R^n`, `n ∈ {1, 2, 3}`.
#[derive(Clone, Copy, PartialEq)]
pub struct Vector {
    dim: u8,
    xs: [f64; MAX_DIM],
}

impl Vector {
    /// Panics if `coords` is empty or longer than [`MAX_DIM`].
    pub fn new(coords: &[f64]) -> Self {
        assert!(
            !coords.is_empty() && coords.len() <= MAX_DIM,
            "vector dimension must be 1..=3, got {}",
            coords.len()
        );
        let mut xs = [0.0; MAX_DIM];
        xs[..coords.len()].copy_from_slice(coords);
        Vector {
            dim: coords.len() as u8,
            xs,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim));
        Vector {
            dim: dim as u8,
            xs: [0.0; MAX_DIM],
        }
    }

    /// Standard basis vector `e_axis`.
    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Vector::zeros(dim);
        v[axis] = 1.0;
        v
    }

    /// Unit vector at angle `theta` in the plane.
    pub fn from_angle(theta: f64) -> Self {
        Vector::new(&[theta.cos(), theta.sin()])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.xs[..self.dim as usize]
    }

    #[inline]
    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim as usize {
            acc += self.xs[i] * other.xs[i];
        }
        acc
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `self / |self|`; panics on the zero vector.
    pub fn normalized(&self) -> Vector {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        *self * (1.0 / n)
    }

    pub fn angle(&self) -> f64 {
        debug_assert_eq!(self.dim, 2);
        self.xs[1].atan2(self.xs[0])
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for Vector {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.xs[..self.dim as usize][i]
    }
}

impl Add for Vector {
    type Output = Vector;
    #[inline]
    fn add(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for i in 0..self.dim as usize {
            out.xs[i] += rhs.xs[i];
        }
        out
    }
}

impl Sub for Vector {
    type Output = Vector;
    #[inline]
    fn sub(self, rhs: Vector) -> Vector {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self;
        for i in 0..self.dim as usize {
            out.xs[i] -= rhs.xs[i];
        }
        out
    }
}

impl Mul<f64> for Vector {
    type Output = Vector;
    #[inline]
    fn mul(self, c: f64) -> Vector {
        let mut out = self;
        for i in 0..self.dim as usize {
            out.xs[i] *= c;
        }
        out
    }
}

impl Neg for Vector {
    type Output = Vector;
    #[inline]
    fn neg(self) -> Vector {
        self * -1.0
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Vector::new(&[1.0, 2.0]);
        let b = Vector::new(&[3.0, -1.0]);
        assert_eq!((a + b).as_slice(), &[4.0, 1.0]);
        assert_eq!((a - b).as_slice(), &[-2.0, 3.0]);
        assert_eq!((a * 2.0).as_slice(), &[2.0, 4.0]);
        assert_eq!(a.dot(&b), 1.0);
    }

    #[test]
    #[should_panic]
    fn rejects_dimension_zero() {
        Vector::new(&[]);
    }
}
