use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// A point of R^2 or R^3. `coords[0]` is the normal coordinate `x_0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    c: [f64; 3],
    dim: usize,
}

impl Point {
    pub fn new2(x0: f64, x1: f64) -> Self {
        Point {
            c: [x0, x1, 0.0],
            dim: 2,
        }
    }

    pub fn new3(x0: f64, x1: f64, x2: f64) -> Self {
        Point {
            c: [x0, x1, x2],
            dim: 3,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(
            dim == 2 || dim == 3,
            "only dimensions 2 and 3 are supported"
        );
        Point { c: [0.0; 3], dim }
    }

    /// Unit basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut p = Point::zeros(dim);
        p.c[i] = 1.0;
        p
    }

    pub fn from_slice(xs: &[f64]) -> Result<Self, Error> {
        match xs.len() {
            2 => Ok(Point::new2(xs[0], xs[1])),
            3 => Ok(Point::new3(xs[0], xs[1], xs[2])),
            n => Err(Error::InvalidArgument(format!(
                "points must have 2 or 3 coordinates, got {n}"
            ))),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    #[inline]
    pub fn x0(&self) -> f64 {
        self.c[0]
    }

    /// Tangential part `x` of `(x_0, x)`.
    #[inline]
    pub fn tangential(&self) -> &[f64] {
        &self.c[1..self.dim]
    }

    #[inline]
    pub fn with(mut self, i: usize, v: f64) -> Self {
        self.c[i] = v;
        self
    }

    #[inline]
    pub fn dot(&self, o: &Point) -> f64 {
        self.c[0] * o.c[0] + self.c[1] * o.c[1] + self.c[2] * o.c[2]
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn dist(&self, o: &Point) -> f64 {
        (*self - *o).norm()
    }

    pub fn normalized(&self) -> Point {
        *self * (1.0 / self.norm())
    }

    #[inline]
    pub fn lerp(&self, o: &Point, t: f64) -> Point {
        *self + (*o - *self) * t
    }

    #[inline]
    pub fn midpoint(&self, o: &Point) -> Point {
        Point {
            c: [
                0.5 * (self.c[0] + o.c[0]),
                0.5 * (self.c[1] + o.c[1]),
                0.5 * (self.c[2] + o.c[2]),
            ],
            dim: self.dim,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|v| v.is_finite())
    }
}

impl Index<usize> for Point {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.c[..self.dim][i]
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point {
            c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2]],
            dim: self.dim,
        }
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point {
            c: [self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2]],
            dim: self.dim,
        }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point {
            c: [self.c[0] * s, self.c[1] * s, self.c[2] * s],
            dim: self.dim,
        }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}

/// Comma-separated coordinates, e.g. `1,0.5`.
impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let xs = s
            .split([',', ';'])
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coordinate {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Point::from_slice(&xs)
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: Point, max: Point) -> Self {
        debug_assert_eq!(min.dim(), max.dim());
        Aabb { min, max }
    }

    pub fn around(points: &[Point]) -> Self {
        let mut min = points[0];
        let mut max = points[0];
        for p in &points[1..] {
            for i in 0..p.dim() {
                min.c[i] = min.c[i].min(p.c[i]);
                max.c[i] = max.c[i].max(p.c[i]);
            }
        }
        Aabb { min, max }
    }

    pub fn dim(&self) -> usize {
        self.min.dim()
    }

    pub fn padded(&self, pad: f64) -> Self {
        let mut b = *self;
        for i in 0..self.dim() {
            b.min.c[i] -= pad;
            b.max.c[i] += pad;
        }
        b
    }

    pub fn intersect(&self, o: &Aabb) -> Self {
        let mut b = *self;
        for i in 0..self.dim() {
            b.min.c[i] = b.min.c[i].max(o.min.c[i]);
            b.max.c[i] = b.max.c[i].min(o.max.c[i]);
        }
        b
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|i| p.c[i] >= self.min.c[i] && p.c[i] <= self.max.c[i])
    }

    pub fn extent(&self, i: usize) -> f64 {
        self.max.c[i] - self.min.c[i]
    }

    pub fn diameter(&self) -> f64 {
        self.min.dist(&self.max)
    }

    pub fn is_empty(&self) -> bool {
        (0..self.dim()).any(|i| self.max.c[i] < self.min.c[i])
    }

    /// Smallest distance from `p` (inside) to a face of the box.
    pub fn face_clearance(&self, p: &Point) -> f64 {
        (0..self.dim())
            .map(|i| (p.c[i] - self.min.c[i]).min(self.max.c[i] - p.c[i]))
            .fold(f64::INFINITY, f64::min)
    }
}
