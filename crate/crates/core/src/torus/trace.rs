use super::{near, sign, Point, PolygonModel, TorusError};
use crate::scalar::Scalar;

/// Where a straight ray leaves a convex counterclockwise polygon.
#[derive(Debug, Clone)]
pub(crate) struct Exit<S> {
    /// Ray parameter of the exit point.
    pub s: S,
    /// Index of the exit edge in the polygon's vertex list.
    pub edge: usize,
    /// Position along the exit edge, in `[0, 1]`.
    pub r: S,
    /// Set when the exit point is a polygon vertex.
    pub vertex: Option<usize>,
}

pub(crate) fn exit_polygon<S: Scalar>(
    poly: &[Point<S>],
    p: &Point<S>,
    v: &Point<S>,
    scale: f64,
) -> Option<Exit<S>> {
    let n = poly.len();
    let vs = v.norm_f64() * scale;
    let mut best: Option<Exit<S>> = None;
    for i in 0..n {
        let a = &poly[i];
        let e = &poly[(i + 1) % n] - a;
        let c = e.cross(v);
        if sign(&c, vs * scale) >= 0 {
            continue;
        }
        let s = (a - p).cross(&e) / -c.clone();
        let r = (p - a).cross(v) / c;
        if best.as_ref().map_or(true, |b| s < b.s) {
            best = Some(Exit {
                s,
                edge: i,
                r,
                vertex: None,
            });
        }
    }
    let mut ex = best?;
    if near(&ex.r, &S::zero(), 1.0) || ex.r < S::zero() {
        ex.vertex = Some(ex.edge);
    } else if near(&ex.r, &S::one(), 1.0) || ex.r > S::one() {
        ex.vertex = Some((ex.edge + 1) % n);
    }
    Some(ex)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Crossing<S> {
    pub exit_edge: usize,
    pub entry_edge: usize,
    pub exit: Point<S>,
    pub entry: Point<S>,
    pub factor: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransversalHit<S> {
    /// Edge crossings made before the hit.
    pub crossings: usize,
    /// Position along the transversal, `0` at its first vertex.
    pub param: S,
    pub point: Point<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEnd {
    Budget,
    ConePoint { vertex: usize },
    Returns,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicTrace<S> {
    pub direction: Point<S>,
    /// Straight pieces in pentagon coordinates.
    pub segments: Vec<(Point<S>, Point<S>)>,
    pub crossings: Vec<Crossing<S>>,
    pub hits: Vec<TransversalHit<S>>,
    pub end: TraceEnd,
}

impl<S: Scalar> GeodesicTrace<S> {
    /// Product of the gluing factors crossed so far.
    pub fn holonomy(&self) -> S {
        self.crossings
            .iter()
            .fold(S::one(), |acc, c| acc * c.factor.clone())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub max_crossings: usize,
    /// Diagonal `(i, j)` whose crossings are logged.
    pub transversal: Option<(usize, usize)>,
    /// Stop after this many transversal hits (0 = never).
    pub max_returns: usize,
}

pub fn trace_geodesic<S: Scalar>(
    m: &PolygonModel<S>,
    start: &Point<S>,
    direction: &Point<S>,
    max_crossings: usize,
) -> Result<GeodesicTrace<S>, TorusError> {
    trace_geodesic_with(
        m,
        start,
        direction,
        &TraceOptions {
            max_crossings,
            transversal: None,
            max_returns: 0,
        },
    )
}

pub fn trace_geodesic_with<S: Scalar>(
    m: &PolygonModel<S>,
    start: &Point<S>,
    direction: &Point<S>,
    opts: &TraceOptions,
) -> Result<GeodesicTrace<S>, TorusError> {
    let v = direction;
    if v.x.is_zero() && v.y.is_zero() {
        return Err(TorusError::ZeroDirection);
    }
    if !m.contains(start) {
        return Err(TorusError::OutsidePolygon(start.to_string()));
    }
    let scale = m.scale();
    let mut out = GeodesicTrace {
        direction: v.clone(),
        segments: Vec::new(),
        crossings: Vec::new(),
        hits: Vec::new(),
        end: TraceEnd::Budget,
    };
    let mut p = start.clone();
    loop {
        let ex = exit_polygon(&m.vertices, &p, v, scale).ok_or(TorusError::ZeroDirection)?;
        let q = &p + &v.scale(&ex.s);
        if let Some((i, j)) = opts.transversal {
            let t0 = &m.vertices[i];
            let d = &m.vertices[j] - t0;
            let c = d.cross(v);
            if sign(&c, scale * v.norm_f64() * scale) != 0 {
                let tau = (&p - t0).cross(v) / c.clone();
                let sigma = (t0 - &p).cross(&d) / -c;
                let vn = v.norm_f64();
                if sign(&sigma, scale / vn) > 0
                    && sign(&(ex.s.clone() - sigma.clone()), scale / vn) >= 0
                    && tau > S::zero()
                    && tau < S::one()
                {
                    let point = &p + &v.scale(&sigma);
                    out.hits.push(TransversalHit {
                        crossings: out.crossings.len(),
                        param: tau,
                        point: point.clone(),
                    });
                    if opts.max_returns > 0 && out.hits.len() >= opts.max_returns {
                        out.segments.push((p, point));
                        out.end = TraceEnd::Returns;
                        return Ok(out);
                    }
                }
            }
        }
        out.segments.push((p.clone(), q.clone()));
        if let Some(vertex) = ex.vertex {
            out.end = TraceEnd::ConePoint { vertex };
            return Ok(out);
        }
        let g = match &m.glue[ex.edge] {
            Some(g) => g,
            None => {
                return Err(TorusError::HitBoundary {
                    step: out.crossings.len(),
                })
            }
        };
        if out.crossings.len() >= opts.max_crossings {
            out.end = TraceEnd::Budget;
            return Ok(out);
        }
        let entry = g.apply(&q);
        out.crossings.push(Crossing {
            exit_edge: ex.edge,
            entry_edge: g.partner,
            exit: q,
            entry: entry.clone(),
            factor: g.factor.clone(),
        });
        p = entry;
    }
}
