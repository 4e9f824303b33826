//! Metric measure monoids.
//!
//! Everything downstream talks to a space only through [`Space::distance`],
//! [`Space::translate`], [`Space::ball_measure`], [`Space::enumerate_ball`] and
//! [`Space::sample_ball`]. Both shipped families use the `ℓ∞` metric, whose
//! balls are boxes: `B_h = [0, h)^m × (−h, h)^{d−m}` (the first `m`
//! coordinates are half lines).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{Error, Result};
use crate::math;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// `ℝ^m₊ × ℝ^{d−m}` with Lebesgue measure.
    Continuum,
    /// `ℤ^m₊ × ℤ^{d−m}` with counting measure.
    Lattice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    kind: SpaceKind,
    d: usize,
    m: usize,
}

/// A point of a [`Space`]. Lattice points carry integral coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// `ρ(x, θ)`.
    pub fn norm(&self) -> f64 {
        linf_norm(&self.0)
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

#[inline]
pub fn linf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |acc, v| acc.max(math::abs(*v)))
}

#[inline]
pub fn linf_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0, |acc, (a, b)| acc.max(math::abs(a - b)))
}

impl Space {
    pub fn new(kind: SpaceKind, d: usize, m: usize) -> Result<Self> {
        if d == 0 || m > d {
            return Err(Error::InvalidSpace { d, m });
        }
        Ok(Space { kind, d, m })
    }

    pub fn continuum(d: usize, m: usize) -> Result<Self> {
        Self::new(SpaceKind::Continuum, d, m)
    }

    pub fn lattice(d: usize, m: usize) -> Result<Self> {
        Self::new(SpaceKind::Lattice, d, m)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_lattice(&self) -> bool {
        self.kind == SpaceKind::Lattice
    }

    /// Is coordinate `i` a half-line factor?
    #[inline]
    pub fn is_half(&self, i: usize) -> bool {
        i < self.m
    }

    /// The neutral element `θ`.
    pub fn origin(&self) -> Point {
        Point(vec![0.0; self.d])
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.d
            && x.iter().enumerate().all(|(i, v)| {
                v.is_finite() && (!self.is_half(i) || *v >= 0.0) && (!self.is_lattice() || math::floor(*v) == *v)
            })
    }

    pub fn point(&self, coords: Vec<f64>) -> Result<Point> {
        self.check_dim(&coords)?;
        if !self.contains(&coords) {
            return Err(Error::OutsideDomain);
        }
        Ok(Point(coords))
    }

    pub fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: x.len() });
        }
        Ok(())
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        self.check_dim(x)?;
        if !self.contains(x) {
            return Err(Error::OutsideDomain);
        }
        Ok(())
    }

    /// Rejects radii for which `B_h` would be empty, infinite, or `{θ}`.
    pub fn check_radius(&self, h: f64) -> Result<()> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidRadius { h, reason: "radius must be positive and finite" });
        }
        if self.is_lattice() && h <= 1.0 {
            return Err(Error::InvalidRadius { h, reason: "lattice balls with h <= 1 reduce to the origin" });
        }
        Ok(())
    }

    /// Largest integer `n` with `n < h`.
    #[inline]
    pub(crate) fn lattice_reach(h: f64) -> i64 {
        math::ceil(h) as i64 - 1
    }

    /// Exact number of lattice points in `B_h`.
    pub fn lattice_ball_count(&self, h: f64) -> Result<u64> {
        if !self.is_lattice() {
            return Err(Error::Unsupported("lattice_ball_count on a continuum space"));
        }
        self.check_radius(h)?;
        let n = Self::lattice_reach(h) as u64;
        let half = (n + 1).pow(self.m as u32);
        let full = (2 * n + 1).pow((self.d - self.m) as u32);
        Ok(half * full)
    }

    /// `μ(B_h)`: `2^{d−m} h^d` on the continuum, the exact point count on a lattice.
    pub fn ball_measure(&self, h: f64) -> Result<f64> {
        self.check_radius(h)?;
        match self.kind {
            SpaceKind::Continuum => Ok(math::pow2(self.d - self.m) * math::powi(h, self.d as i32)),
            SpaceKind::Lattice => self.lattice_ball_count(h).map(|n| n as f64),
        }
    }

    /// `ρ(x, y) = max_i |x_i − y_i|`.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(linf_distance(x, y))
    }

    /// The monoid operation: coordinatewise sum.
    pub fn translate(&self, x: &Point, y: &Point) -> Result<Point> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(Point(x.iter().zip(y.iter()).map(|(a, b)| a + b).collect()))
    }

    /// Per-coordinate closure of `B_h` as `(lo, hi)` pairs.
    pub fn ball_box(&self, h: f64) -> Vec<(f64, f64)> {
        (0..self.d).map(|i| if self.is_half(i) { (0.0, h) } else { (-h, h) }).collect()
    }

    /// Per-coordinate inclusive integer ranges of the lattice ball `B_h`.
    pub(crate) fn lattice_ball_ranges(&self, h: f64) -> Vec<(i64, i64)> {
        let n = Self::lattice_reach(h);
        (0..self.d).map(|i| if self.is_half(i) { (0, n) } else { (-n, n) }).collect()
    }

    /// All points of the lattice ball `B_h` in lexicographic order.
    pub fn enumerate_ball(&self, h: f64) -> Result<Vec<Point>> {
        Ok(self.enumerate_ball_int(h)?.into_iter().map(|p| Point(p.into_iter().map(|c| c as f64).collect())).collect())
    }

    /// Integer coordinates of the lattice ball `B_h` in lexicographic order.
    pub fn enumerate_ball_int(&self, h: f64) -> Result<Vec<Vec<i64>>> {
        if !self.is_lattice() {
            return Err(Error::Unsupported("enumerate_ball on a continuum space; use sample_ball"));
        }
        self.check_radius(h)?;
        Ok(integer_box(&self.lattice_ball_ranges(h)))
    }

    /// Lattice points of `X` in the box `|x|_∞ ≤ radius`, lexicographic.
    pub fn lattice_window(&self, radius: i64) -> Result<Vec<Vec<i64>>> {
        if !self.is_lattice() {
            return Err(Error::Unsupported("lattice_window on a continuum space"));
        }
        let radius = radius.max(0);
        let ranges: Vec<(i64, i64)> =
            (0..self.d).map(|i| if self.is_half(i) { (0, radius) } else { (-radius, radius) }).collect();
        Ok(integer_box(&ranges))
    }

    /// `n` points uniformly distributed on the continuum ball `B_h`.
    ///
    /// Samples are produced in blocks of [`rng::BLOCK`], block `k` drawing from
    /// stream `k` of the seeded generator.
    pub fn sample_ball(&self, h: f64, n: usize, seed: u64) -> Result<Vec<Point>> {
        if self.is_lattice() {
            return Err(Error::Unsupported("sample_ball on a lattice space; use enumerate_ball"));
        }
        self.check_radius(h)?;
        if n == 0 {
            return Err(Error::InvalidParameter("sample count must be at least 1"));
        }
        let mut out = Vec::with_capacity(n);
        let mut block = 0u64;
        while out.len() < n {
            let mut r = rng::stream(seed, block);
            let take = (n - out.len()).min(rng::BLOCK);
            for _ in 0..take {
                out.push(Point(self.sample_one(h, &mut r)));
            }
            block += 1;
        }
        Ok(out)
    }

    pub(crate) fn sample_one<R: rand_core::RngCore>(&self, h: f64, r: &mut R) -> Vec<f64> {
        (0..self.d).map(|i| if self.is_half(i) { h * rng::open01(r) } else { rng::uniform(r, -h, h) }).collect()
    }
}

/// Cartesian product of inclusive integer ranges, lexicographic.
pub(crate) fn integer_box(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
        for prefix in &out {
            for v in lo..=hi {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_measure_examples() {
        assert_eq!(Space::continuum(2, 0).unwrap().ball_measure(1.0).unwrap(), 4.0);
        assert_eq!(Space::continuum(3, 3).unwrap().ball_measure(2.0).unwrap(), 8.0);
        assert_eq!(Space::lattice(1, 0).unwrap().ball_measure(1.5).unwrap(), 3.0);
        assert_eq!(Space::lattice(2, 1).unwrap().lattice_ball_count(2.5).unwrap(), 3 * 5);
    }

    #[test]
    fn radius_errors() {
        let c = Space::continuum(1, 0).unwrap();
        assert!(matches!(c.ball_measure(0.0), Err(Error::InvalidRadius { .. })));
        assert!(matches!(c.ball_measure(-1.0), Err(Error::InvalidRadius { .. })));
        let l = Space::lattice(1, 0).unwrap();
        assert!(matches!(l.ball_measure(1.0), Err(Error::InvalidRadius { .. })));
        assert!(l.ball_measure(1.0001).is_ok());
    }

    #[test]
    fn invalid_space() {
        assert!(Space::continuum(0, 0).is_err());
        assert!(Space::lattice(2, 3).is_err());
    }

    #[test]
    fn distance_examples() {
        let s = Space::continuum(2, 0).unwrap();
        let x = Point::new(vec![0.0, 0.0]);
        let y = Point::new(vec![1.0, -2.0]);
        assert_eq!(s.distance(&x, &y).unwrap(), 2.0);
        assert_eq!(s.distance(&y, &y).unwrap(), 0.0);
        let s1 = Space::continuum(1, 0).unwrap();
        assert_eq!(s1.distance(&Point::new(vec![3.0]), &Point::new(vec![0.5])).unwrap(), 2.5);
        assert!(matches!(
            s.distance(&x, &Point::new(vec![1.0])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn translate_examples() {
        let s = Space::continuum(2, 1).unwrap();
        let p = |v: [f64; 2]| Point::new(v.to_vec());
        assert_eq!(s.translate(&p([1.0, 2.0]), &p([0.0, 0.0])).unwrap(), p([1.0, 2.0]));
        assert_eq!(s.translate(&p([1.0, 0.0]), &p([2.0, 3.0])).unwrap(), p([3.0, 3.0]));
        let l = Space::lattice(2, 0).unwrap();
        assert_eq!(l.translate(&p([0.0, 1.0]), &p([1.0, 1.0])).unwrap(), p([1.0, 2.0]));
        assert_eq!(s.translate(&p([-1.0, 0.0]), &p([0.0, 0.0])), Err(Error::OutsideDomain));
        assert!(l.translate(&p([0.5, 0.0]), &p([0.0, 0.0])).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let l = Space::lattice(1, 0).unwrap();
        assert_eq!(l.enumerate_ball_int(1.5).unwrap(), vec![vec![-1], vec![0], vec![1]]);
        let h = Space::lattice(1, 1).unwrap();
        assert_eq!(h.enumerate_ball_int(2.5).unwrap(), vec![vec![0], vec![1], vec![2]]);
        let l2 = Space::lattice(2, 0).unwrap();
        let pts = l2.enumerate_ball_int(1.5).unwrap();
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().all(|p| p.iter().all(|c| c.abs() <= 1)));
        assert!(Space::continuum(1, 0).unwrap().enumerate_ball(1.5).is_err());
    }

    #[test]
    fn sample_ball_membership_and_errors() {
        let s = Space::continuum(3, 1).unwrap();
        assert!(s.sample_ball(1.0, 0, 7).is_err());
        let pts = s.sample_ball(0.7, 10_000, 7).unwrap();
        assert_eq!(pts.len(), 10_000);
        assert!(pts.iter().all(|p| p.norm() < 0.7 && p[0] >= 0.0));
        assert_eq!(pts, s.sample_ball(0.7, 10_000, 7).unwrap());
        assert!(Space::lattice(1, 0).unwrap().sample_ball(2.0, 1, 0).is_err());
    }
}
