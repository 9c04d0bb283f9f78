use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{near, sign, Point, TorusError};
use crate::scalar::Scalar;

const TEST_PENTAGON: &str = include_str!("../../data/test-pentagon.json");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("malformed model JSON: {0}")]
    Json(String),
    #[error("expected 5 vertices, got {0}")]
    VertexCount(usize),
    #[error("exactly one boundary edge required: {0}")]
    BoundaryEdge(String),
    #[error("pentagon is not convex: {0}")]
    NonConvex(String),
    #[error("paired edges {edge_a} and {edge_b} are not antiparallel")]
    NonParallelPair { edge_a: usize, edge_b: usize },
    #[error("bad identification: {0}")]
    BadIdentification(String),
    #[error("unexpected sector geometry: {0}")]
    SectorOrder(String),
    #[error("bad transversal {0}")]
    Transversal(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawPairing {
    pub edge_a: usize,
    pub edge_b: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<Value>,
}

/// Model JSON as read from disk. Scalars are strings (`"9/4"`, `"0.3"`) or numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawModel {
    pub vertices: Vec<[Value; 2]>,
    #[serde(default)]
    pub boundary_edge: Option<usize>,
    pub pairings: Vec<RawPairing>,
    /// Per-sector transversal diagonals as vertex-index pairs, keyed
    /// `m_b`, `i1` … `i5`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transversals: Option<std::collections::BTreeMap<String, [usize; 2]>>,
}

/// Affine gluing `z ↦ factor·z + shift` from an edge onto its partner.
#[derive(Debug, Clone, PartialEq)]
pub struct Glue<S> {
    pub partner: usize,
    pub factor: S,
    pub shift: Point<S>,
}

impl<S: Scalar> Glue<S> {
    pub fn apply(&self, p: &Point<S>) -> Point<S> {
        &p.scale(&self.factor) + &self.shift
    }
}

/// Transversal diagonals (canonical vertex indices) for `m_B` and `I_1..I_5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transversals(pub [(usize, usize); 6]);

impl Default for Transversals {
    fn default() -> Self {
        // m_B: A–C; I1, I2: E–C; I3: B–D; I4, I5 mirror I2, I1.
        Transversals([(0, 2), (4, 2), (4, 2), (1, 3), (0, 2), (0, 2)])
    }
}

/// A validated convex pentagon, relabelled so that the boundary edge is
/// edge 4 (from `V4` to `V0`). Edge `i` runs from `V_i` to `V_{i+1}`.
/// Edges 0 and 2 form the B-pair, edges 1 and 3 the A-pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonModel<S> {
    pub vertices: Vec<Point<S>>,
    pub glue: Vec<Option<Glue<S>>>,
    /// Index of `V0` in the input vertex list.
    pub offset: usize,
    pub transversals: Transversals,
}

fn scalar_from<S: Scalar>(v: &Value, what: &str) -> Result<S, ModelError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(ModelError::Json(format!(
                "{what}: expected a number, got {other}"
            )))
        }
    };
    S::parse_literal(&text).map_err(|e| ModelError::Json(format!("{what}: {e}")))
}

pub const SECTOR_KEYS: [&str; 6] = ["m_b", "i1", "i2", "i3", "i4", "i5"];

/// Validate a raw model into canonical form.
pub fn validate_model<S: Scalar>(raw: &RawModel) -> Result<PolygonModel<S>, ModelError> {
    let n = raw.vertices.len();
    let mut paired = vec![0usize; n.max(1)];
    for p in &raw.pairings {
        for e in [p.edge_a, p.edge_b] {
            if e >= n {
                return Err(ModelError::BadIdentification(format!(
                    "edge index {e} out of range"
                )));
            }
            paired[e] += 1;
        }
    }
    if let Some(e) = paired.iter().position(|&c| c > 1) {
        return Err(ModelError::BadIdentification(format!(
            "edge {e} is paired more than once"
        )));
    }
    let free: Vec<usize> = (0..n).filter(|&e| paired[e] == 0).collect();
    let boundary = match raw.boundary_edge {
        Some(b) if free == [b] => b,
        Some(b) => {
            return Err(ModelError::BoundaryEdge(format!(
                "boundary_edge = {b} but unpaired edges are {free:?}"
            )))
        }
        None if free.len() == 1 => free[0],
        None => {
            return Err(ModelError::BoundaryEdge(format!(
                "unpaired edges are {free:?}"
            )))
        }
    };
    if n != 5 {
        return Err(ModelError::VertexCount(n));
    }

    let mut input = Vec::with_capacity(5);
    for (i, [x, y]) in raw.vertices.iter().enumerate() {
        input.push(Point::new(
            scalar_from::<S>(x, &format!("vertex {i} x"))?,
            scalar_from::<S>(y, &format!("vertex {i} y"))?,
        ));
    }
    let scale = input.iter().map(|p| p.norm_f64()).fold(1.0, f64::max);
    for i in 0..5 {
        let e0 = &input[(i + 1) % 5] - &input[i];
        let e1 = &input[(i + 2) % 5] - &input[(i + 1) % 5];
        if sign(&e0.cross(&e1), scale * scale) <= 0 {
            return Err(ModelError::NonConvex(format!(
                "turn at vertex {} is not a strict left turn (vertices must be counterclockwise)",
                (i + 1) % 5
            )));
        }
    }

    let offset = (boundary + 1) % 5;
    let vertices: Vec<Point<S>> = (0..5).map(|k| input[(offset + k) % 5].clone()).collect();
    let canon = |e: usize| (e + 5 - offset) % 5;
    let edge = |i: usize| &vertices[(i + 1) % 5] - &vertices[i];

    let mut glue: Vec<Option<Glue<S>>> = vec![None; 5];
    for p in &raw.pairings {
        let (a, b) = (canon(p.edge_a), canon(p.edge_b));
        if (a + 2) % 5 != b && (b + 2) % 5 != a {
            return Err(ModelError::BadIdentification(format!(
                "edges {} and {} must be separated by exactly one edge",
                p.edge_a, p.edge_b
            )));
        }
        let (ea, eb) = (edge(a), edge(b));
        if sign(&ea.cross(&eb), scale * scale) != 0 || ea.dot(&eb) >= S::zero() {
            return Err(ModelError::NonParallelPair {
                edge_a: p.edge_a,
                edge_b: p.edge_b,
            });
        }
        let factor = if ea.x.abs().to_f64() >= ea.y.abs().to_f64() {
            -(eb.x.clone() / ea.x.clone())
        } else {
            -(eb.y.clone() / ea.y.clone())
        };
        if let Some(v) = &p.factor {
            let given: S = scalar_from(v, "pairing factor")?;
            if !near(&given, &factor, factor.to_f64().abs()) {
                return Err(ModelError::BadIdentification(format!(
                    "stored factor {} for edges {} and {} differs from edge ratio {}",
                    given.to_literal(),
                    p.edge_a,
                    p.edge_b,
                    factor.to_literal()
                )));
            }
        }
        for (from, to, f) in [(a, b, factor.clone()), (b, a, factor.recip())] {
            let shift = &vertices[(to + 1) % 5] - &vertices[from].scale(&f);
            let g = Glue {
                partner: to,
                factor: f,
                shift,
            };
            let end = g.apply(&vertices[(from + 1) % 5]);
            if !near(&end.x, &vertices[to].x, scale) || !near(&end.y, &vertices[to].y, scale) {
                return Err(ModelError::BadIdentification(format!(
                    "gluing of edge {} does not carry it onto edge {}",
                    (from + offset) % 5,
                    (to + offset) % 5
                )));
            }
            glue[from] = Some(g);
        }
    }

    let mut transversals = Transversals::default();
    if let Some(map) = &raw.transversals {
        for (key, [i, j]) in map {
            let slot = SECTOR_KEYS
                .iter()
                .position(|k| k == key)
                .ok_or_else(|| ModelError::Transversal(format!("unknown sector key {key:?}")))?;
            if *i >= 5 || *j >= 5 || (i + 5 - j) % 5 <= 1 || (j + 5 - i) % 5 <= 1 {
                return Err(ModelError::Transversal(format!(
                    "{key}: [{i}, {j}] is not a diagonal"
                )));
            }
            transversals.0[slot] = ((i + 5 - offset) % 5, (j + 5 - offset) % 5);
        }
    }

    let model = PolygonModel {
        vertices,
        glue,
        offset,
        transversals,
    };
    super::sectors::check_order(&model)?;
    Ok(model)
}

impl<S: Scalar> PolygonModel<S> {
    pub fn from_json(text: &str) -> Result<Self, TorusError> {
        let raw: RawModel =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        Ok(validate_model(&raw)?)
    }

    /// The built-in test pentagon.
    pub fn test_pentagon() -> Self {
        Self::from_json(TEST_PENTAGON).expect("built-in model is valid")
    }

    pub fn builtin_json() -> &'static str {
        TEST_PENTAGON
    }

    pub fn edge(&self, i: usize) -> Point<S> {
        &self.vertices[(i + 1) % 5] - &self.vertices[i % 5]
    }

    /// Boundary edge vector, `V0 - V4`.
    pub fn boundary_vector(&self) -> Point<S> {
        self.edge(4)
    }

    /// Scale used for float slack in geometric predicates.
    pub fn scale(&self) -> f64 {
        self.vertices
            .iter()
            .map(|p| p.norm_f64())
            .fold(1.0, f64::max)
    }

    /// Edge index in the caller's original numbering.
    pub fn input_edge(&self, i: usize) -> usize {
        (i + self.offset) % 5
    }

    /// Vertex label `A`..`E` in canonical order.
    pub fn label(i: usize) -> char {
        (b'A' + (i % 5) as u8) as char
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        let s = self.scale();
        (0..5).all(|i| sign(&self.edge(i).cross(&(p - &self.vertices[i])), s * s) >= 0)
    }

    pub fn to_f64(&self) -> PolygonModel<f64> {
        PolygonModel {
            vertices: self.vertices.iter().map(Point::to_f64).collect(),
            glue: self
                .glue
                .iter()
                .map(|g| {
                    g.as_ref().map(|g| Glue {
                        partner: g.partner,
                        factor: g.factor.to_f64(),
                        shift: g.shift.to_f64(),
                    })
                })
                .collect(),
            offset: self.offset,
            transversals: self.transversals,
        }
    }

    /// Serialize back to the input schema, in canonical vertex order.
    pub fn to_raw(&self) -> RawModel {
        let vertices = self
            .vertices
            .iter()
            .map(|p| {
                [
                    Value::String(p.x.to_literal()),
                    Value::String(p.y.to_literal()),
                ]
            })
            .collect();
        let pairings = [(3usize, 1usize), (0, 2)]
            .iter()
            .map(|&(a, b)| RawPairing {
                edge_a: a,
                edge_b: b,
                factor: self.glue[a]
                    .as_ref()
                    .map(|g| Value::String(g.factor.to_literal())),
            })
            .collect();
        let transversals = SECTOR_KEYS
            .iter()
            .zip(self.transversals.0.iter())
            .map(|(k, &(i, j))| (k.to_string(), [i, j]))
            .collect();
        RawModel {
            vertices,
            boundary_edge: Some(4),
            pairings,
            transversals: Some(transversals),
        }
    }
}
