//! Odd-dimensional spheres inside complex coordinate space, the free cyclic
//! rotation action whose quotients are lens spaces, and the rotation paths
//! that the navigation planner mixes into measure-valued trajectories.
//!
//! A point of `S^(2n-1)` is stored as a real vector of even dimension `2n`;
//! consecutive coordinate pairs `(2i, 2i+1)` are read as one complex
//! coordinate. The cyclic action of order `p` multiplies every complex
//! coordinate by `exp(2*pi*i*j/p)`, i.e. all rotation weights equal one, so
//! the action is free and the quotient metric is a minimum over the orbit.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use thiserror::Error;

/// Tolerance for unit-norm and orthonormality validation.
pub const UNIT_TOL: f64 = 1e-12;

/// Below this rejection norm the target is treated as lying on the line
/// through the source and the complex-line plane convention applies.
const DEGENERATE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("sphere points need even dimension >= 2, got {0}")]
    OddDimension(usize),
    #[error("vector norm {norm} is not within tolerance of 1")]
    NotUnit { norm: f64 },
    #[error("dimension mismatch: {0} versus {1}")]
    DimensionMismatch(usize, usize),
    #[error("cyclic order must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("basis vectors are not orthonormal within tolerance")]
    NotOrthonormal,
}

/// Euclidean distance between coordinate vectors of equal length.
pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A unit vector of even dimension, read as a point of an odd sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Wraps coordinates that are already unit length within [`UNIT_TOL`].
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 2 || coords.len() % 2 != 0 {
            return Err(GeometryError::OddDimension(coords.len()));
        }
        let n = norm(&coords);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(GeometryError::NotUnit { norm: n });
        }
        Ok(SpherePoint { coords })
    }

    /// Scales an arbitrary nonzero vector onto the sphere.
    pub fn normalized(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.len() < 2 || coords.len() % 2 != 0 {
            return Err(GeometryError::OddDimension(coords.len()));
        }
        let n = norm(&coords);
        if n < 1e-14 {
            return Err(GeometryError::NotUnit { norm: n });
        }
        Ok(SpherePoint {
            coords: coords.into_iter().map(|x| x / n).collect(),
        })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn inner(&self, other: &SpherePoint) -> f64 {
        inner(&self.coords, &other.coords)
    }

    pub fn dist(&self, other: &SpherePoint) -> f64 {
        euclid(&self.coords, &other.coords)
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    /// Multiplication by the imaginary unit on every complex coordinate:
    /// `(x0, x1, x2, x3, ...) -> (-x1, x0, -x3, x2, ...)`.
    pub fn complex_i(&self) -> SpherePoint {
        let mut out = Vec::with_capacity(self.coords.len());
        for pair in self.coords.chunks_exact(2) {
            out.push(-pair[1]);
            out.push(pair[0]);
        }
        SpherePoint { coords: out }
    }
}

/// Spherical angle `arccos <x, y>` in `[0, pi]`, with the inner product
/// clamped so roundoff never escapes the domain of `arccos`.
pub fn angle(x: &SpherePoint, y: &SpherePoint) -> f64 {
    x.inner(y).clamp(-1.0, 1.0).acos()
}

/// Great-circle sweep `t -> cos(angle*t)*u + sin(angle*t)*v` for an
/// orthonormal pair `(u, v)`; `t` in `[0, 1]` traverses the stored angle.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationPath {
    u: Vec<f64>,
    v: Vec<f64>,
    angle: f64,
}

impl RotationPath {
    /// Builds a path from an orthonormal pair, validating the frame.
    pub fn new(u: Vec<f64>, v: Vec<f64>, angle: f64) -> Result<Self, GeometryError> {
        if u.len() != v.len() {
            return Err(GeometryError::DimensionMismatch(u.len(), v.len()));
        }
        let frame_ok = (norm(&u) - 1.0).abs() <= 1e-9
            && (norm(&v) - 1.0).abs() <= 1e-9
            && inner(&u, &v).abs() <= 1e-9;
        if !frame_ok {
            return Err(GeometryError::NotOrthonormal);
        }
        Ok(RotationPath { u, v, angle })
    }

    fn from_frame(u: Vec<f64>, v: Vec<f64>, angle: f64) -> Self {
        RotationPath { u, v, angle }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// The starting point of the sweep.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// The in-plane direction swept towards.
    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let (s, c) = (self.angle * t).sin_cos();
        self.u
            .iter()
            .zip(&self.v)
            .map(|(ui, vi)| c * ui + s * vi)
            .collect()
    }

    /// Samples the path on `count` uniform parameters covering `[0, 1]`.
    pub fn sample(&self, count: usize) -> Vec<Vec<f64>> {
        assert!(count >= 2);
        (0..count)
            .map(|i| self.eval(i as f64 / (count - 1) as f64))
            .collect()
    }
}

/// Returns the in-plane unit vector `v` pointing from `x` towards `y` (the
/// complex-line direction `i*x` when `y` is numerically collinear with `x`)
/// together with the sweep angle. The angle uses the `atan2` form, which is
/// well conditioned near `0` and `pi` where `arccos` loses eight digits.
fn plane_frame(x: &SpherePoint, y: &SpherePoint) -> (Vec<f64>, f64) {
    let proj = x.inner(y);
    let rej: Vec<f64> = y
        .coords()
        .iter()
        .zip(x.coords())
        .map(|(yi, xi)| yi - proj * xi)
        .collect();
    let rn = norm(&rej);
    let sweep = rn.atan2(proj);
    if rn < DEGENERATE_TOL {
        (x.complex_i().into_coords(), sweep)
    } else {
        (rej.into_iter().map(|r| r / rn).collect(), sweep)
    }
}

/// The complementary pair of rotation paths from `x` to `y`.
///
/// The first path sweeps the angle `a = angle(x, y)` towards `y`; the second
/// sweeps `2*pi - a` around the same great circle in the opposite direction.
/// Both reach `y` at `t = 1`. When `y = x` the short path is constant and the
/// long one is a full turn of the complex line through `x`; when `y = -x` the
/// two paths are the half-turns through `i*x` and `-i*x`.
pub fn rotation_paths(x: &SpherePoint, y: &SpherePoint) -> (RotationPath, RotationPath) {
    let (v, a) = plane_frame(x, y);
    let alpha = RotationPath::from_frame(x.coords().to_vec(), v.clone(), a);
    let beta = RotationPath::from_frame(
        x.coords().to_vec(),
        v.into_iter().map(|c| -c).collect(),
        TAU - a,
    );
    (alpha, beta)
}

/// Rotation paths between the lines spanned by `x` and `z`, for a target
/// representative with `<x, z> >= 0` so the line angle `a = angle(x, z)` lies
/// in `[0, pi/2]`. The first path reaches `z` sweeping `a`; the second
/// reaches the opposite representative `-z` sweeping `pi - a` the other way.
pub fn line_rotation_paths(x: &SpherePoint, z: &SpherePoint) -> (RotationPath, RotationPath) {
    debug_assert!(x.inner(z) >= -1e-12);
    let (v, a) = plane_frame(x, z);
    let alpha = RotationPath::from_frame(x.coords().to_vec(), v.clone(), a);
    let beta = RotationPath::from_frame(
        x.coords().to_vec(),
        v.into_iter().map(|c| -c).collect(),
        PI - a,
    );
    (alpha, beta)
}

/// The free cyclic action of order `p` on `S^(2n-1)` that multiplies every
/// complex coordinate by `exp(2*pi*i*j/p)`; its quotient is the lens space
/// with all rotation weights equal to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LensAction {
    p: u32,
    n: usize,
}

impl LensAction {
    pub fn new(p: u32, n: usize) -> Result<Self, GeometryError> {
        if p < 2 {
            return Err(GeometryError::OrderTooSmall(p));
        }
        if n < 1 {
            return Err(GeometryError::OddDimension(0));
        }
        Ok(LensAction { p, n })
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    /// Number of complex coordinates.
    pub fn complex_dim(&self) -> usize {
        self.n
    }

    /// Real dimension of the ambient space, `2n`.
    pub fn ambient_dim(&self) -> usize {
        2 * self.n
    }

    /// Dimension of the sphere and of the lens-space quotient, `2n - 1`.
    pub fn sphere_dim(&self) -> usize {
        2 * self.n - 1
    }

    pub fn is_even(&self) -> bool {
        self.p % 2 == 0
    }

    /// Applies the generator power `j` (taken modulo `p`); `j = 0` is the
    /// exact identity.
    pub fn act(&self, j: i64, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.ambient_dim());
        let j = j.rem_euclid(i64::from(self.p));
        if j == 0 {
            return x.to_vec();
        }
        let theta = TAU * j as f64 / f64::from(self.p);
        let (s, c) = theta.sin_cos();
        let mut out = Vec::with_capacity(x.len());
        for pair in x.chunks_exact(2) {
            out.push(c * pair[0] - s * pair[1]);
            out.push(s * pair[0] + c * pair[1]);
        }
        out
    }

    pub fn act_point(&self, j: i64, x: &SpherePoint) -> SpherePoint {
        SpherePoint {
            coords: self.act(j, x.coords()),
        }
    }

    /// The full orbit `x, g.x, ..., g^(p-1).x`.
    pub fn orbit(&self, x: &[f64]) -> Vec<Vec<f64>> {
        (0..i64::from(self.p)).map(|j| self.act(j, x)).collect()
    }

    /// Quotient metric of the lens space: the minimum Euclidean distance from
    /// `x` to the orbit of `y`. Arguments are canonically ordered first so the
    /// result is exactly symmetric in floating point.
    pub fn quotient_dist(&self, x: &[f64], y: &[f64]) -> f64 {
        let swap = lex_greater(x, y);
        let (a, b) = if swap { (y, x) } else { (x, y) };
        (0..i64::from(self.p))
            .map(|j| euclid(a, &self.act(j, b)))
            .fold(f64::INFINITY, f64::min)
    }
}

fn lex_greater(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return true;
        }
        if x < y {
            return false;
        }
    }
    false
}

/// Uniform random point on the sphere of the given even dimension, via
/// normalized Gaussian coordinates (Box-Muller, so only a `Rng` is needed).
pub fn random_sphere_point<R: Rng>(dim: usize, rng: &mut R) -> SpherePoint {
    assert!(dim >= 2 && dim % 2 == 0);
    loop {
        let mut coords = Vec::with_capacity(dim);
        while coords.len() < dim {
            let u: f64 = rng.gen_range(f64::EPSILON..1.0);
            let v: f64 = rng.gen_range(0.0..TAU);
            let r = (-2.0 * u.ln()).sqrt();
            coords.push(r * v.cos());
            if coords.len() < dim {
                coords.push(r * v.sin());
            }
        }
        if let Ok(point) = SpherePoint::normalized(coords) {
            return point;
        }
    }
}

/// Random unit tangent direction at `x` (orthogonal to `x`).
pub fn random_tangent<R: Rng>(x: &SpherePoint, rng: &mut R) -> Vec<f64> {
    loop {
        let g = random_sphere_point(x.dim(), rng);
        let proj = x.inner(&g);
        let rej: Vec<f64> = g
            .coords()
            .iter()
            .zip(x.coords())
            .map(|(gi, xi)| gi - proj * xi)
            .collect();
        let rn = norm(&rej);
        if rn > 1e-6 {
            return rej.into_iter().map(|r| r / rn).collect();
        }
    }
}

/// Moves `x` a geodesic-ish step of size `eps` in a random tangent direction
/// and renormalizes.
pub fn perturb<R: Rng>(x: &SpherePoint, eps: f64, rng: &mut R) -> SpherePoint {
    let dir = random_tangent(x, rng);
    let coords: Vec<f64> = x
        .coords()
        .iter()
        .zip(&dir)
        .map(|(xi, di)| xi + eps * di)
        .collect();
    SpherePoint::normalized(coords).expect("perturbed point stays near the sphere")
}
