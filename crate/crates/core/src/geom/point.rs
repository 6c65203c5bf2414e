use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ambient dimension supported.
pub const MAX_DIM: usize = 4;

/// A point (or vector) in R^d, 2 <= d <= [`MAX_DIM`].
///
/// Unused trailing lanes are kept at zero so arithmetic can run over all lanes.
#[derive(Clone, Copy, PartialEq)]
pub struct Point {
    c: [f64; MAX_DIM],
    d: u8,
}

impl Point {
    pub fn try_new(coords: &[f64]) -> Result<Point> {
        let d = coords.len();
        if !(2..=MAX_DIM).contains(&d) {
            return Err(Error::Input(format!("dimension {d} not in 2..={MAX_DIM}")));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite coordinate".into()));
        }
        let mut c = [0.0; MAX_DIM];
        c[..d].copy_from_slice(coords);
        Ok(Point { c, d: d as u8 })
    }

    /// Panics on bad dimension or non-finite input.
    pub fn new(coords: &[f64]) -> Point {
        Point::try_new(coords).expect("invalid point")
    }

    pub fn xy(x: f64, y: f64) -> Point {
        Point { c: [x, y, 0.0, 0.0], d: 2 }
    }

    pub fn xyz(x: f64, y: f64, z: f64) -> Point {
        Point { c: [x, y, z, 0.0], d: 3 }
    }

    pub fn zero(d: usize) -> Point {
        assert!((2..=MAX_DIM).contains(&d));
        Point { c: [0.0; MAX_DIM], d: d as u8 }
    }

    /// Unit vector along axis `i`.
    pub fn axis(d: usize, i: usize) -> Point {
        let mut p = Point::zero(d);
        p.c[i] = 1.0;
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d as usize
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.d as usize]
    }

    #[inline]
    pub fn lanes(&self) -> &[f64; MAX_DIM] {
        &self.c
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.c[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: f64) {
        debug_assert!(i < self.dim());
        self.c[i] = v;
    }

    #[inline]
    pub fn dot(&self, o: &Point) -> f64 {
        self.c[0] * o.c[0] + self.c[1] * o.c[1] + self.c[2] * o.c[2] + self.c[3] * o.c[3]
    }

    #[inline]
    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    #[inline]
    pub fn dist2(&self, o: &Point) -> f64 {
        (*self - *o).norm2()
    }

    #[inline]
    pub fn dist(&self, o: &Point) -> f64 {
        self.dist2(o).sqrt()
    }

    #[inline]
    pub fn lerp(&self, o: &Point, t: f64) -> Point {
        *self + (*o - *self) * t
    }

    #[inline]
    pub fn midpoint(&self, o: &Point) -> Point {
        (*self + *o) * 0.5
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Point> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(*self / n)
        } else {
            None
        }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Lexicographic coordinate order, used for deterministic tie-breaks.
    pub fn lex_cmp(&self, o: &Point) -> Ordering {
        for i in 0..MAX_DIM {
            match self.c[i].total_cmp(&o.c[i]) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    /// Exact bit-level key for hashing coincident points.
    pub fn key(&self) -> [u64; MAX_DIM] {
        let mut k = [0u64; MAX_DIM];
        for i in 0..MAX_DIM {
            // fold -0.0 onto 0.0
            let v = if self.c[i] == 0.0 { 0.0 } else { self.c[i] };
            k[i] = v.to_bits();
        }
        k
    }

    /// An orthonormal basis of the orthogonal complement of the unit vector `self`.
    pub fn orthonormal_complement(&self) -> Vec<Point> {
        let d = self.dim();
        let mut basis: Vec<Point> = Vec::with_capacity(d - 1);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| self.c[a].abs().total_cmp(&self.c[b].abs()));
        for &i in &order {
            if basis.len() == d - 1 {
                break;
            }
            let mut v = Point::axis(d, i);
            v = v - *self * self.dot(&v);
            for b in &basis {
                v = v - *b * b.dot(&v);
            }
            if let Some(u) = v.normalized() {
                if v.norm() > 1e-6 {
                    basis.push(u);
                }
            }
        }
        basis
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        debug_assert_eq!(self.d, o.d);
        Point {
            c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2], self.c[3] + o.c[3]],
            d: self.d,
        }
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        debug_assert_eq!(self.d, o.d);
        Point {
            c: [self.c[0] - o.c[0], self.c[1] - o.c[1], self.c[2] - o.c[2], self.c[3] - o.c[3]],
            d: self.d,
        }
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point { c: [self.c[0] * s, self.c[1] * s, self.c[2] * s, self.c[3] * s], d: self.d }
    }
}

impl Div<f64> for Point {
    type Output = Point;
    #[inline]
    fn div(self, s: f64) -> Point {
        Point { c: [self.c[0] / s, self.c[1] / s, self.c[2] / s, self.c[3] / s], d: self.d }
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        self * -1.0
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Point, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Point::try_new(&v).map_err(serde::de::Error::custom)
    }
}
