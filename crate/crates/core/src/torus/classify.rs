use std::fmt;

use rayon::prelude::*;

use super::sectors::{Sector, SectorLocation, BOUNDARY_NAMES};
use super::{
    direction_at_angle, first_return_map, rotation_number, sector_decomposition, FirstReturn,
    FirstReturnOutcome, Point, PolygonModel, RotationEstimate, TorusError,
};
use crate::limitset::{classify_tail, TailKind, TailReport};
use crate::rauzy::{induct_auto, terminal_orbit, RauzyError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynamicsLabel {
    AttractingPeriodic,
    SaddleConnection,
    CantorLamination { depth: usize },
    Minimal,
    CompletelyPeriodic,
    Unresolved { depth: usize },
}

impl DynamicsLabel {
    pub fn name(&self) -> &'static str {
        match self {
            DynamicsLabel::AttractingPeriodic => "attracting-periodic",
            DynamicsLabel::SaddleConnection => "saddle-connection",
            DynamicsLabel::CantorLamination { .. } => "cantor-lamination",
            DynamicsLabel::Minimal => "minimal",
            DynamicsLabel::CompletelyPeriodic => "completely-periodic",
            DynamicsLabel::Unresolved { .. } => "unresolved",
        }
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            DynamicsLabel::CantorLamination { depth } | DynamicsLabel::Unresolved { depth } => {
                Some(*depth)
            }
            _ => None,
        }
    }
}

impl fmt::Display for DynamicsLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.depth() {
            Some(d) => write!(f, "{}({d})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DirectionReport<S> {
    pub location: SectorLocation,
    pub label: DynamicsLabel,
    pub first_return: Option<FirstReturn<S>>,
    pub rotation: Option<RotationEstimate>,
    pub tail: Option<TailReport>,
}

fn label_rho_map<S: Scalar>(
    fr: &FirstReturn<S>,
    budget: usize,
) -> Result<(DynamicsLabel, TailReport), TorusError> {
    let map = fr.outcome.rho_map().ok_or_else(|| {
        TorusError::ShapeMismatch(format!("expected a rho map, got {}", fr.outcome.tag()))
    })?;
    let tail = classify_tail(map, budget)?;
    let label = match tail.kind {
        TailKind::Terminating => {
            let trace = induct_auto(map, budget)?;
            match terminal_orbit(&trace) {
                Ok(o) if o.critical => DynamicsLabel::SaddleConnection,
                Ok(_) | Err(RauzyError::PeriodTooLong(_)) => DynamicsLabel::AttractingPeriodic,
                Err(e) => return Err(e.into()),
            }
        }
        TailKind::OneSidedLeft | TailKind::OneSidedRight => DynamicsLabel::SaddleConnection,
        TailKind::InfiniteBoth => DynamicsLabel::CantorLamination { depth: tail.depth },
        TailKind::Undetermined => DynamicsLabel::Unresolved { depth: tail.depth },
    };
    Ok((label, tail))
}

/// Label the directional flow. `budget` bounds the induction steps.
pub fn classify_direction<S: Scalar>(
    m: &PolygonModel<S>,
    direction: &Point<S>,
    budget: usize,
) -> Result<DirectionReport<S>, TorusError> {
    let location = sector_decomposition(m).locate(direction);
    let mut report = DirectionReport {
        location,
        label: DynamicsLabel::SaddleConnection,
        first_return: None,
        rotation: None,
        tail: None,
    };
    let sector = match location {
        SectorLocation::Boundary(_) => return Ok(report),
        SectorLocation::Inside(s) => s,
    };
    let fr = first_return_map(m, direction)?;
    match sector {
        Sector::MB => {
            let map = match &fr.outcome {
                FirstReturnOutcome::Bijective(map) => map,
                other => {
                    return Err(TorusError::ShapeMismatch(format!(
                        "m_B gave {}",
                        other.tag()
                    )))
                }
            };
            let rot = rotation_number(map)?;
            report.label = match (rot.rational, rot.completely_periodic) {
                (None, _) => DynamicsLabel::Minimal,
                (Some(_), true) => DynamicsLabel::CompletelyPeriodic,
                (Some(_), false) => DynamicsLabel::AttractingPeriodic,
            };
            report.rotation = Some(rot);
        }
        Sector::I2 | Sector::I4 => {
            report.label = DynamicsLabel::AttractingPeriodic;
        }
        Sector::I1 | Sector::I3 | Sector::I5 => {
            let (label, tail) = label_rho_map(&fr, budget)?;
            report.label = label;
            report.tail = Some(tail);
        }
    }
    report.first_return = Some(fr);
    Ok(report)
}

/// One row of a direction-grid classification.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub index: usize,
    /// Chart angle in `(0, π)`.
    pub angle: f64,
    pub sector: String,
    pub label: String,
    pub depth: Option<usize>,
    pub error: Option<String>,
}

/// Classify `grid` directions at chart angles `π (i + 1/2) / grid`.
pub fn classify_grid(m: &PolygonModel<f64>, grid: usize, budget: usize) -> Vec<GridRow> {
    let dec = sector_decomposition(m);
    (0..grid)
        .into_par_iter()
        .map(|i| {
            let angle = std::f64::consts::PI * (i as f64 + 0.5) / grid as f64;
            let dir = direction_at_angle(m, angle);
            let sector = match dec.locate(&dir) {
                SectorLocation::Inside(s) => s.to_string(),
                SectorLocation::Boundary(k) => BOUNDARY_NAMES[k].to_string(),
            };
            match classify_direction(m, &dir, budget) {
                Ok(r) => GridRow {
                    index: i,
                    angle,
                    sector,
                    label: r.label.name().to_string(),
                    depth: r.label.depth(),
                    error: None,
                },
                Err(e) => GridRow {
                    index: i,
                    angle,
                    sector,
                    label: "error".to_string(),
                    depth: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
