//! Pentagon models of a one-holed dilation torus: validation, direction
//! sectors, geodesic tracing, first-return extraction and classification.

mod classify;
mod first_return;
mod model;
mod rotation;
mod sectors;
mod trace;

use std::fmt;
use std::ops::{Add, Sub};

use thiserror::Error;

use crate::aiet::AietError;
use crate::limitset::LimitError;
use crate::rauzy::RauzyError;
use crate::scalar::{Scalar, ScalarError};

pub use classify::{classify_direction, classify_grid, DirectionReport, DynamicsLabel, GridRow};
pub use first_return::{
    first_return_map, first_return_on, FirstReturn, FirstReturnOutcome, ReturnPiece,
};
pub use model::{
    validate_model, Glue, ModelError, PolygonModel, RawModel, RawPairing, Transversals,
};
pub use rotation::{rotation_number, RotationEstimate};
pub use sectors::{
    chart_angle, direction_at_angle, sector_decomposition, Sector, SectorDecomposition,
    SectorLocation,
};
pub use trace::{
    trace_geodesic, trace_geodesic_with, Crossing, GeodesicTrace, TraceEnd, TraceOptions,
    TransversalHit,
};

/// Cone-point and flushness tolerance on the float backend.
pub const GEOM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorusError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("trajectory hit the boundary edge at crossing {step}")]
    HitBoundary { step: usize },
    #[error("start point {0} lies outside the pentagon")]
    OutsidePolygon(String),
    #[error("direction is a sector boundary ({0}); classify it as a saddle connection")]
    SectorBoundaryDirection(String),
    #[error("tracing budget of {0} crossings exceeded")]
    TracingBudgetExceeded(usize),
    #[error("trajectory from the transversal ran into a cone point")]
    ConePoint,
    #[error("first return map has an unexpected shape: {0}")]
    ShapeMismatch(String),
    #[error("rotation number needs a bijective map")]
    NotBijective,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error(transparent)]
    Rauzy(#[from] RauzyError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Aiet(#[from] AietError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
    pub fn zero() -> Self {
        Point::new(S::zero(), S::zero())
    }
    pub fn cross(&self, o: &Self) -> S {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }
    pub fn dot(&self, o: &Self) -> S {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }
    pub fn scale(&self, k: &S) -> Self {
        Point::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }
    pub fn neg(&self) -> Self {
        Point::new(-self.x.clone(), -self.y.clone())
    }
    pub fn to_f64(&self) -> Point<f64> {
        Point::new(self.x.to_f64(), self.y.to_f64())
    }
    pub fn norm_f64(&self) -> f64 {
        let p = self.to_f64();
        p.x.hypot(p.y)
    }
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Point<T> {
        Point::new(f(&self.x), f(&self.y))
    }
}

impl<S: Scalar> Add for &Point<S> {
    type Output = Point<S>;
    fn add(self, o: Self) -> Point<S> {
        Point::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }
}

impl<S: Scalar> Sub for &Point<S> {
    type Output = Point<S>;
    fn sub(self, o: Self) -> Point<S> {
        Point::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x.to_literal(), self.y.to_literal())
    }
}

pub(crate) fn gtol<S: Scalar>() -> f64 {
    if S::tol() == 0.0 {
        0.0
    } else {
        GEOM_TOL
    }
}

/// Sign of `x` with float slack `gtol * scale`.
pub(crate) fn sign<S: Scalar>(x: &S, scale: f64) -> i8 {
    let t = gtol::<S>() * scale.max(1.0);
    if t == 0.0 {
        if *x > S::zero() {
            1
        } else if *x < S::zero() {
            -1
        } else {
            0
        }
    } else {
        let v = x.to_f64();
        if v > t {
            1
        } else if v < -t {
            -1
        } else {
            0
        }
    }
}

pub(crate) fn near<S: Scalar>(a: &S, b: &S, scale: f64) -> bool {
    sign(&(a.clone() - b.clone()), scale) == 0
}
