use std::fmt;

use super::model::ModelError;
use super::{sign, Point, PolygonModel};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    MB,
    I1,
    I2,
    I3,
    I4,
    I5,
}

impl Sector {
    pub const ALL: [Sector; 6] = [
        Sector::MB,
        Sector::I1,
        Sector::I2,
        Sector::I3,
        Sector::I4,
        Sector::I5,
    ];
    pub const OPEN: [Sector; 5] = [Sector::I1, Sector::I2, Sector::I3, Sector::I4, Sector::I5];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::MB => "m_B",
            Sector::I1 => "I1",
            Sector::I2 => "I2",
            Sector::I3 => "I3",
            Sector::I4 => "I4",
            Sector::I5 => "I5",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorLocation {
    Inside(Sector),
    /// Index into [`SectorDecomposition::boundaries`], never 0 (that is `m_B`).
    Boundary(usize),
}

pub const BOUNDARY_NAMES: [&str; 5] = ["m_B", "A-D", "A-pair", "B-pair", "E-B"];

/// `boundaries[0]` is `m_B` (oriented `E → A`); the rest are forward
/// directions in clockwise order. `I1` lies between `boundaries[1]` and the
/// reversed `m_B`, `I5` between `boundaries[4]` and `m_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDecomposition<S> {
    pub m_b: Point<S>,
    pub boundaries: [Point<S>; 5],
}

fn forward<S: Scalar>(u: &Point<S>, v: Point<S>) -> Point<S> {
    if u.cross(&v) < S::zero() {
        v.neg()
    } else {
        v
    }
}

fn raw_boundaries<S: Scalar>(m: &PolygonModel<S>) -> [Point<S>; 5] {
    let v = &m.vertices;
    let u = m.boundary_vector();
    [
        u.clone(),
        forward(&u, &v[3] - &v[0]),
        forward(&u, m.edge(1)),
        forward(&u, m.edge(0)),
        forward(&u, &v[1] - &v[4]),
    ]
}

pub(crate) fn check_order<S: Scalar>(m: &PolygonModel<S>) -> Result<(), ModelError> {
    let b = raw_boundaries(m);
    let u = &b[0];
    let s = m.scale().powi(2);
    for (k, d) in b.iter().enumerate().skip(1) {
        if sign(&u.cross(d), s) == 0 {
            return Err(ModelError::SectorOrder(format!(
                "{} is parallel to the boundary edge",
                BOUNDARY_NAMES[k]
            )));
        }
    }
    for k in 1..4 {
        if sign(&b[k + 1].cross(&b[k]), s) <= 0 {
            return Err(ModelError::SectorOrder(format!(
                "{} does not lie clockwise of {}",
                BOUNDARY_NAMES[k + 1],
                BOUNDARY_NAMES[k]
            )));
        }
    }
    Ok(())
}

pub fn sector_decomposition<S: Scalar>(m: &PolygonModel<S>) -> SectorDecomposition<S> {
    let boundaries = raw_boundaries(m);
    SectorDecomposition {
        m_b: boundaries[0].clone(),
        boundaries,
    }
}

impl<S: Scalar> SectorDecomposition<S> {
    /// Locate a direction; backward directions are flipped first.
    pub fn locate(&self, v: &Point<S>) -> SectorLocation {
        let u = &self.m_b;
        let s = u.norm_f64() * v.norm_f64();
        let c = sign(&u.cross(v), s);
        if c == 0 {
            return SectorLocation::Inside(Sector::MB);
        }
        let v = if c < 0 { v.neg() } else { v.clone() };
        let sectors = [Sector::I1, Sector::I2, Sector::I3, Sector::I4];
        for k in 1..5 {
            let b = &self.boundaries[k];
            match sign(&b.cross(&v), b.norm_f64() * s / u.norm_f64()) {
                1 => return SectorLocation::Inside(sectors[k - 1]),
                0 => return SectorLocation::Boundary(k),
                _ => {}
            }
        }
        SectorLocation::Inside(Sector::I5)
    }

    /// Chart angle in `[0, π]` of each boundary (`m_B` at 0).
    pub fn angles(&self) -> [f64; 5] {
        let u = self.m_b.to_f64();
        let mut out = [0.0; 5];
        for (o, b) in out.iter_mut().zip(self.boundaries.iter()) {
            *o = angle_of(&u, &b.to_f64());
        }
        out
    }

    /// Open angle range of a sector in the chart; `m_B` returns `(0, 0)`.
    pub fn angle_range(&self, s: Sector) -> (f64, f64) {
        let a = self.angles();
        match s {
            Sector::MB => (0.0, 0.0),
            Sector::I1 => (a[1], std::f64::consts::PI),
            Sector::I2 => (a[2], a[1]),
            Sector::I3 => (a[3], a[2]),
            Sector::I4 => (a[4], a[3]),
            Sector::I5 => (0.0, a[4]),
        }
    }
}

fn angle_of(u: &Point<f64>, v: &Point<f64>) -> f64 {
    u.cross(v).atan2(u.dot(v))
}

/// Unit direction at chart angle `phi`, measured from `m_B` towards the
/// inward normal of the boundary edge.
pub fn direction_at_angle<S: Scalar>(m: &PolygonModel<S>, phi: f64) -> Point<f64> {
    let u = m.boundary_vector().to_f64();
    let l = u.x.hypot(u.y);
    let (ux, uy) = (u.x / l, u.y / l);
    let (nx, ny) = (-uy, ux);
    Point::new(
        phi.cos() * ux + phi.sin() * nx,
        phi.cos() * uy + phi.sin() * ny,
    )
}

/// Chart angle of a direction (flipped to forward first).
pub fn chart_angle<S: Scalar>(m: &PolygonModel<S>, v: &Point<S>) -> f64 {
    let u = m.boundary_vector().to_f64();
    let v = v.to_f64();
    let a = angle_of(&u, &v);
    if a < 0.0 {
        a + std::f64::consts::PI
    } else {
        a
    }
}
