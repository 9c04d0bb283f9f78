use super::sectors::{Sector, SectorLocation};
use super::trace::exit_polygon;
use super::{near, sector_decomposition, sign, Point, PolygonModel, TorusError};
use crate::aiet::RhoMap;
use crate::scalar::Scalar;

/// Crossings allowed for one strand before giving up.
pub const RETURN_CROSSING_BUDGET: usize = 256;
const MAX_RESTRICTIONS: usize = 4;

/// One continuity piece of the return map: `t ↦ alpha·t + beta` on `[t0, t1]`,
/// in transversal parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnPiece<S> {
    pub t0: S,
    pub t1: S,
    pub alpha: S,
    pub beta: S,
    /// Pentagon edges crossed on the way, in order.
    pub edges: Vec<usize>,
}

impl<S: Scalar> ReturnPiece<S> {
    pub fn apply(&self, t: &S) -> S {
        self.alpha.clone() * t.clone() + self.beta.clone()
    }
    pub fn image(&self) -> (S, S) {
        (self.apply(&self.t0), self.apply(&self.t1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FirstReturnOutcome<S> {
    Bijective(RhoMap<S>),
    /// `restrictions` counts how often the domain was cut down to the image hull.
    RhoMap {
        map: RhoMap<S>,
        restrictions: usize,
    },
    CylinderContraction {
        fixed_point: Point<S>,
        param: S,
        multiplier: S,
    },
}

impl<S: Scalar> FirstReturnOutcome<S> {
    pub fn tag(&self) -> &'static str {
        match self {
            FirstReturnOutcome::Bijective(_) => "bijective",
            FirstReturnOutcome::RhoMap { .. } => "rho_map",
            FirstReturnOutcome::CylinderContraction { .. } => "cylinder_contraction",
        }
    }
    pub fn rho_map(&self) -> Option<&RhoMap<S>> {
        match self {
            FirstReturnOutcome::Bijective(m) | FirstReturnOutcome::RhoMap { map: m, .. } => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstReturn<S> {
    pub sector: Option<Sector>,
    /// Transversal diagonal, canonical vertex indices, oriented first to second.
    pub transversal: (usize, usize),
    pub direction: Point<S>,
    pub pieces: Vec<ReturnPiece<S>>,
    pub outcome: FirstReturnOutcome<S>,
}

impl<S: Scalar> FirstReturn<S> {
    pub fn transversal_point(&self, m: &PolygonModel<S>, t: &S) -> Point<S> {
        let a = &m.vertices[self.transversal.0];
        let d = &m.vertices[self.transversal.1] - a;
        a + &d.scale(t)
    }
}

fn expected(sector: Sector) -> &'static str {
    match sector {
        Sector::MB => "bijective",
        Sector::I2 | Sector::I4 => "cylinder_contraction",
        _ => "rho_map",
    }
}

#[derive(Clone)]
struct Strand<S> {
    t0: S,
    t1: S,
    o: Point<S>,
    w: Point<S>,
    first_side: bool,
    edges: Vec<usize>,
}

/// Vertex indices of one side of the diagonal `(i, j)`, counterclockwise.
fn side(i: usize, j: usize, first: bool) -> Vec<usize> {
    let (a, b) = if first { (i, j) } else { (j, i) };
    let n = (b + 5 - a) % 5;
    (0..=n).map(|k| (a + k) % 5).collect()
}

/// Pieces of the first return map to the diagonal `(i, j)` along `v`.
pub(crate) fn return_pieces<S: Scalar>(
    m: &PolygonModel<S>,
    v: &Point<S>,
    (i, j): (usize, usize),
) -> Result<Vec<ReturnPiece<S>>, TorusError> {
    let scale = m.scale();
    let t0p = m.vertices[i].clone();
    let d = &m.vertices[j] - &t0p;
    let cdv = d.cross(v);
    if sign(&cdv, scale * scale * v.norm_f64()) == 0 {
        return Err(TorusError::ShapeMismatch(
            "flow is parallel to the transversal".into(),
        ));
    }
    let first_side = cdv < S::zero();
    let mut work = vec![Strand {
        t0: S::zero(),
        t1: S::one(),
        o: t0p.clone(),
        w: d.clone(),
        first_side,
        edges: Vec::new(),
    }];
    let mut pieces = Vec::new();
    while let Some(st) = work.pop() {
        if st.edges.len() > RETURN_CROSSING_BUDGET {
            return Err(TorusError::TracingBudgetExceeded(RETURN_CROSSING_BUDGET));
        }
        let idx = side(i, j, st.first_side);
        let poly: Vec<Point<S>> = idx.iter().map(|&k| m.vertices[k].clone()).collect();
        let cwv = st.w.cross(v);
        if cwv.is_zero() {
            return Err(TorusError::ShapeMismatch(
                "strand parallel to the flow".into(),
            ));
        }
        let span = st.t1.clone() - st.t0.clone();
        let mut cuts = vec![st.t0.clone()];
        for p in &poly {
            let t = (p - &st.o).cross(v) / cwv.clone();
            let foot = &st.o + &st.w.scale(&t);
            let ahead = (p - &foot).dot(v);
            if t > st.t0
                && t < st.t1
                && !near(&t, &st.t0, span.to_f64().abs())
                && !near(&t, &st.t1, span.to_f64().abs())
                && sign(&ahead, scale * v.norm_f64()) > 0
            {
                cuts.push(t);
            }
        }
        cuts.push(st.t1.clone());
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        cuts.dedup_by(|a, b| near(a, b, 1.0));
        for w in cuts.windows(2) {
            let (a, b) = (w[0].clone(), w[1].clone());
            let mid = (a.clone() + b.clone()) / S::from_i64(2);
            let pm = &st.o + &st.w.scale(&mid);
            let ex = exit_polygon(&poly, &pm, v, scale).ok_or(TorusError::ZeroDirection)?;
            let (va, vb) = (idx[ex.edge], idx[(ex.edge + 1) % idx.len()]);
            let is_diag = ex.edge == idx.len() - 1;
            if is_diag {
                let beta = (&st.o - &t0p).cross(v) / cdv.clone();
                let alpha = cwv.clone() / cdv.clone();
                pieces.push(ReturnPiece {
                    t0: a,
                    t1: b,
                    alpha,
                    beta,
                    edges: st.edges.clone(),
                });
                continue;
            }
            debug_assert_eq!((va + 1) % 5, vb);
            let p = &m.vertices[va];
            let e = &m.vertices[vb] - p;
            let c = e.cross(v);
            let r0 = (&st.o - p).cross(v) / c.clone();
            let r1 = cwv.clone() / c;
            let o1 = p + &e.scale(&r0);
            let w1 = e.scale(&r1);
            let g = match &m.glue[va] {
                Some(g) => g,
                None => {
                    return Err(TorusError::HitBoundary {
                        step: st.edges.len(),
                    })
                }
            };
            let partner_first = (g.partner + 5 - i) % 5 < (j + 5 - i) % 5;
            let mut edges = st.edges.clone();
            edges.push(va);
            work.push(Strand {
                t0: a,
                t1: b,
                o: g.apply(&o1),
                w: w1.scale(&g.factor),
                first_side: partner_first,
                edges,
            });
        }
    }
    pieces.sort_by(|a, b| a.t0.partial_cmp(&b.t0).expect("finite"));
    let mut merged: Vec<ReturnPiece<S>> = Vec::new();
    for p in pieces {
        if let Some(last) = merged.last_mut() {
            if near(&last.t1, &p.t0, 1.0)
                && near(&last.alpha, &p.alpha, 1.0)
                && near(&last.beta, &p.beta, 1.0)
            {
                last.t1 = p.t1;
                continue;
            }
        }
        merged.push(p);
    }
    Ok(merged)
}

fn clip<S: Scalar>(pieces: &[ReturnPiece<S>], lo: &S, hi: &S) -> Vec<ReturnPiece<S>> {
    pieces
        .iter()
        .filter_map(|p| {
            let a = S::max_of(&p.t0, lo);
            let b = S::min_of(&p.t1, hi);
            if a < b && !near(&a, &b, 1.0) {
                Some(ReturnPiece {
                    t0: a,
                    t1: b,
                    ..p.clone()
                })
            } else {
                None
            }
        })
        .collect()
}

fn shape<S: Scalar>(
    m: &PolygonModel<S>,
    (i, j): (usize, usize),
    pieces: &[ReturnPiece<S>],
) -> Result<FirstReturnOutcome<S>, TorusError> {
    let mut lo = S::zero();
    let mut hi = S::one();
    let mut cur = pieces.to_vec();
    for round in 0..=MAX_RESTRICTIONS {
        if cur.is_empty() {
            break;
        }
        if cur.len() == 2 {
            let (p, q) = (&cur[0], &cur[1]);
            let (_, ph) = p.image();
            let (ql, _) = q.image();
            if near(&p.t0, &lo, 1.0)
                && near(&q.t1, &hi, 1.0)
                && near(&p.t1, &q.t0, 1.0)
                && near(&ph, &hi, 1.0)
                && near(&ql, &lo, 1.0)
                && p.alpha > S::zero()
                && q.alpha > S::zero()
            {
                let map = RhoMap::new(
                    p.alpha.clone(),
                    q.alpha.clone(),
                    p.t1.clone(),
                    lo.clone(),
                    hi.clone(),
                )?;
                let len = hi.clone() - lo.clone();
                if round == 0 && near(&map.image_measure(), &len, 1.0) {
                    return Ok(FirstReturnOutcome::Bijective(map));
                }
                return Ok(FirstReturnOutcome::RhoMap {
                    map,
                    restrictions: round,
                });
            }
        }
        let images: Vec<(S, S)> = cur
            .iter()
            .map(|p| {
                let (a, b) = p.image();
                (S::min_of(&a, &b), S::max_of(&a, &b))
            })
            .collect();
        let ilo = images
            .iter()
            .map(|x| x.0.clone())
            .reduce(|a, b| S::min_of(&a, &b))
            .expect("nonempty");
        let ihi = images
            .iter()
            .map(|x| x.1.clone())
            .reduce(|a, b| S::max_of(&a, &b))
            .expect("nonempty");
        for p in &cur {
            let inside = sign(&(ilo.clone() - p.t0.clone()), 1.0) >= 0
                && sign(&(p.t1.clone() - ihi.clone()), 1.0) >= 0;
            if inside && p.alpha > S::zero() && p.alpha < S::one() {
                let param = p.beta.clone() / (S::one() - p.alpha.clone());
                let a = &m.vertices[i];
                let d = &m.vertices[j] - a;
                return Ok(FirstReturnOutcome::CylinderContraction {
                    fixed_point: a + &d.scale(&param),
                    param,
                    multiplier: p.alpha.clone(),
                });
            }
        }
        if near(&ilo, &lo, 1.0) && near(&ihi, &hi, 1.0) {
            break;
        }
        lo = S::max_of(&lo, &ilo);
        hi = S::min_of(&hi, &ihi);
        cur = clip(&cur, &lo, &hi);
    }
    let desc: Vec<String> = pieces
        .iter()
        .map(|p| {
            format!(
                "[{:.6}, {:.6}] -> {:.6} t + {:.6}",
                p.t0.to_f64(),
                p.t1.to_f64(),
                p.alpha.to_f64(),
                p.beta.to_f64()
            )
        })
        .collect();
    Err(TorusError::ShapeMismatch(format!(
        "{} pieces: {}",
        pieces.len(),
        desc.join("; ")
    )))
}

/// First return map to a given diagonal, with no sector expectation.
pub fn first_return_on<S: Scalar>(
    m: &PolygonModel<S>,
    direction: &Point<S>,
    transversal: (usize, usize),
) -> Result<FirstReturn<S>, TorusError> {
    let sector = match sector_decomposition(m).locate(direction) {
        SectorLocation::Inside(s) => Some(s),
        SectorLocation::Boundary(_) => None,
    };
    let v = flow_direction(m, direction);
    let pieces = return_pieces(m, &v, transversal)?;
    let outcome = shape(m, transversal, &pieces)?;
    Ok(FirstReturn {
        sector,
        transversal,
        direction: v,
        pieces,
        outcome,
    })
}

fn flow_direction<S: Scalar>(m: &PolygonModel<S>, v: &Point<S>) -> Point<S> {
    if m.boundary_vector().cross(v) < S::zero() {
        v.neg()
    } else {
        v.clone()
    }
}

/// First return map for a direction, on the transversal stored for its
/// sector. Falls back to the other diagonals when the stored one does not
/// produce the sector's outcome type.
pub fn first_return_map<S: Scalar>(
    m: &PolygonModel<S>,
    direction: &Point<S>,
) -> Result<FirstReturn<S>, TorusError> {
    if direction.x.is_zero() && direction.y.is_zero() {
        return Err(TorusError::ZeroDirection);
    }
    let dec = sector_decomposition(m);
    let sector = match dec.locate(direction) {
        SectorLocation::Inside(s) => s,
        SectorLocation::Boundary(k) => {
            return Err(TorusError::SectorBoundaryDirection(
                super::sectors::BOUNDARY_NAMES[k].to_string(),
            ))
        }
    };
    let preferred = m.transversals.0[sector.index()];
    let mut candidates = vec![preferred];
    for k in 0..5 {
        let d = (k, (k + 2) % 5);
        if d != preferred && (d.1, d.0) != preferred {
            candidates.push(d);
        }
    }
    let mut first_err = None;
    for t in candidates {
        match first_return_on(m, direction, t) {
            Ok(fr) if fr.outcome.tag() == expected(sector) => return Ok(fr),
            Ok(fr) => {
                first_err.get_or_insert(TorusError::ShapeMismatch(format!(
                    "sector {sector} expects {} but got {}",
                    expected(sector),
                    fr.outcome.tag()
                )));
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    Err(first_err.expect("at least one candidate"))
}
