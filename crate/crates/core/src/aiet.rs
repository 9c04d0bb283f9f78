//! (ρ_A, ρ_B)-maps: two-interval affine exchanges that push `A` to the right
//! end of the domain and `B` to the left end.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{eq_tol, lt_tol, Interval, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AietError {
    #[error("dilation factors must be positive (rho_a = {rho_a}, rho_b = {rho_b})")]
    NonPositiveFactor { rho_a: String, rho_b: String },
    #[error("empty domain [{lo}, {hi}]")]
    EmptyDomain { lo: String, hi: String },
    #[error("breakpoint x_t = {x_t} lies outside the domain {domain}")]
    BreakpointOutside { x_t: String, domain: String },
    #[error("x_t = {x_t} outside injectivity domain {allowed}")]
    NotInjective { x_t: String, allowed: String },
    #[error("critical point: x = {0} is the breakpoint")]
    CriticalPoint(String),
    #[error("x = {x} outside the domain {domain}")]
    OutOfDomain { x: String, domain: String },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Which affine branch a point follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    A,
    B,
}

/// A (ρ_A, ρ_B)-map on `[lo, hi]` with breakpoint `x_t`.
///
/// `A = [lo, x_t)` maps onto `[hi - ρ_A λ_A, hi)`, `B = (x_t, hi]` onto
/// `(lo, lo + ρ_B λ_B]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoMap<S> {
    pub rho_a: S,
    pub rho_b: S,
    pub x_t: S,
    pub domain: Interval<S>,
}

impl<S: Scalar> RhoMap<S> {
    pub fn new(rho_a: S, rho_b: S, x_t: S, lo: S, hi: S) -> Result<Self, AietError> {
        if rho_a <= S::zero() || rho_b <= S::zero() {
            return Err(AietError::NonPositiveFactor {
                rho_a: rho_a.to_literal(),
                rho_b: rho_b.to_literal(),
            });
        }
        if lo >= hi {
            return Err(AietError::EmptyDomain {
                lo: lo.to_literal(),
                hi: hi.to_literal(),
            });
        }
        let domain = Interval::closed(lo, hi);
        if x_t < domain.lo || x_t > domain.hi {
            return Err(AietError::BreakpointOutside {
                x_t: x_t.to_literal(),
                domain: domain.to_string(),
            });
        }
        let map = RhoMap {
            rho_a,
            rho_b,
            x_t,
            domain,
        };
        let len = map.len();
        if lt_tol(&len, &map.image_measure(), &len) {
            let allowed = match injectivity_domain(&map.rho_a, &map.rho_b) {
                Some(iv) => {
                    let scale = |v: &S| map.domain.lo.clone() + v.clone() * len.clone();
                    iv.map(scale).to_string()
                }
                None => "(empty)".to_string(),
            };
            return Err(AietError::NotInjective {
                x_t: map.x_t.to_literal(),
                allowed,
            });
        }
        Ok(map)
    }

    /// Map on the unit interval.
    pub fn unit(rho_a: S, rho_b: S, x_t: S) -> Result<Self, AietError> {
        Self::new(rho_a, rho_b, x_t, S::zero(), S::one())
    }

    /// Constructor for internal use where invariants are already known to hold.
    pub(crate) fn raw(rho_a: S, rho_b: S, x_t: S, lo: S, hi: S) -> Self {
        RhoMap {
            rho_a,
            rho_b,
            x_t,
            domain: Interval::closed(lo, hi),
        }
    }

    pub fn lo(&self) -> &S {
        &self.domain.lo
    }
    pub fn hi(&self) -> &S {
        &self.domain.hi
    }
    pub fn len(&self) -> S {
        self.domain.length()
    }
    pub fn lambda_a(&self) -> S {
        self.x_t.clone() - self.domain.lo.clone()
    }
    pub fn lambda_b(&self) -> S {
        self.domain.hi.clone() - self.x_t.clone()
    }

    /// ρ_A λ_A + ρ_B λ_B.
    pub fn image_measure(&self) -> S {
        self.rho_a.clone() * self.lambda_a() + self.rho_b.clone() * self.lambda_b()
    }

    /// Breakpoint sits on a domain endpoint.
    pub fn is_degenerate(&self) -> bool {
        self.lambda_a().is_zero() || self.lambda_b().is_zero()
    }

    pub fn is_contracting(&self) -> bool {
        self.rho_a < S::one() && self.rho_b < S::one()
    }

    /// Affine branch extended to its closure; no domain checks.
    pub fn eval_branch(&self, x: &S, branch: Branch) -> S {
        match branch {
            Branch::A => {
                self.domain.hi.clone() - self.rho_a.clone() * (self.x_t.clone() - x.clone())
            }
            Branch::B => {
                self.domain.lo.clone() + self.rho_b.clone() * (x.clone() - self.x_t.clone())
            }
        }
    }

    /// Branch of `x`, or `None` at the breakpoint (with float tolerance).
    pub fn branch_of(&self, x: &S) -> Option<Branch> {
        let len = self.len();
        if eq_tol(x, &self.x_t, &len) {
            None
        } else if *x < self.x_t {
            Some(Branch::A)
        } else {
            Some(Branch::B)
        }
    }

    pub fn eval(&self, x: &S) -> Result<S, AietError> {
        if !self.domain.contains(x) {
            return Err(AietError::OutOfDomain {
                x: x.to_literal(),
                domain: self.domain.to_string(),
            });
        }
        match self.branch_of(x) {
            Some(b) => Ok(self.eval_branch(x, b)),
            None => Err(AietError::CriticalPoint(x.to_literal())),
        }
    }

    /// `(T(A), T(B), I_∞)` with `I_∞` the open gap between the images.
    pub fn image_intervals(&self) -> (Interval<S>, Interval<S>, Interval<S>) {
        let lo = self.domain.lo.clone();
        let hi = self.domain.hi.clone();
        let ta_lo = hi.clone() - self.rho_a.clone() * self.lambda_a();
        let tb_hi = lo.clone() + self.rho_b.clone() * self.lambda_b();
        let gap = if tb_hi <= ta_lo {
            Interval::open(tb_hi.clone(), ta_lo.clone())
        } else {
            Interval::open(ta_lo.clone(), ta_lo.clone())
        };
        (
            Interval::closed(ta_lo, hi),
            Interval::closed(lo, tb_hi),
            gap,
        )
    }

    pub fn is_surjective(&self) -> bool {
        let len = self.len();
        eq_tol(&self.image_measure(), &len, &len)
    }

    /// Conjugate onto `[0, 1]`.
    pub fn rescale_to_unit(&self) -> Result<Self, AietError> {
        let len = self.len();
        if len <= S::zero() {
            return Err(AietError::EmptyDomain {
                lo: self.domain.lo.to_literal(),
                hi: self.domain.hi.to_literal(),
            });
        }
        Ok(RhoMap::raw(
            self.rho_a.clone(),
            self.rho_b.clone(),
            (self.x_t.clone() - self.domain.lo.clone()) / len,
            S::zero(),
            S::one(),
        ))
    }

    /// Position of `x` in unit coordinates of this map's domain.
    pub fn to_unit_coord(&self, x: &S) -> S {
        (x.clone() - self.domain.lo.clone()) / self.len()
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> RhoMap<T> {
        RhoMap {
            rho_a: f(&self.rho_a),
            rho_b: f(&self.rho_b),
            x_t: f(&self.x_t),
            domain: self.domain.map(&f),
        }
    }

    pub fn to_f64(&self) -> RhoMap<f64> {
        self.convert(|v| v.to_f64())
    }
}

impl<S: Scalar> fmt::Display for RhoMap<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rho_a={} rho_b={} x_t={} domain={}",
            self.rho_a.to_literal(),
            self.rho_b.to_literal(),
            self.x_t.to_literal(),
            self.domain
        )
    }
}

/// Allowed breakpoints on `[0, 1]` for injectivity. The endpoint where the map
/// becomes surjective is reported open. `None` when both factors exceed 1.
pub fn injectivity_domain<S: Scalar>(rho_a: &S, rho_b: &S) -> Option<Interval<S>> {
    let one = S::one();
    if *rho_a <= one && *rho_b <= one {
        return Some(Interval::closed(S::zero(), one));
    }
    if *rho_a > one && *rho_b > one {
        return None;
    }
    if rho_a > rho_b {
        let end = (one - rho_b.clone()) / (rho_a.clone() - rho_b.clone());
        Some(Interval::new(S::zero(), end, false, true).expect("ordered"))
    } else {
        let start = (rho_b.clone() - one.clone()) / (rho_b.clone() - rho_a.clone());
        Some(Interval::new(start, one, true, false).expect("ordered"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStatus {
    /// Step budget reached.
    Running,
    /// A periodic window repeated within tolerance; see `period`.
    Converged,
    HitBreakpoint,
    LeftDomain,
}

impl fmt::Display for OrbitStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitStatus::Running => "running",
            OrbitStatus::Converged => "converged",
            OrbitStatus::HitBreakpoint => "hit-breakpoint",
            OrbitStatus::LeftDomain => "left-domain",
        })
    }
}

#[derive(Debug, Clone)]
pub struct OrbitResult<S> {
    pub points: Vec<S>,
    pub status: OrbitStatus,
    pub period: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct OrbitOptions {
    /// Largest period scanned by convergence detection.
    pub max_period: usize,
    /// Window agreement threshold.
    pub window_tol: f64,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            max_period: 64,
            window_tol: 1e-13,
        }
    }
}

pub fn orbit<S: Scalar>(t: &RhoMap<S>, x0: &S, n: usize) -> OrbitResult<S> {
    orbit_with(t, x0, n, &OrbitOptions::default())
}

pub fn orbit_with<S: Scalar>(
    t: &RhoMap<S>,
    x0: &S,
    n: usize,
    opts: &OrbitOptions,
) -> OrbitResult<S> {
    let mut points = vec![x0.clone()];
    if !t.domain.contains(x0) {
        return OrbitResult {
            points,
            status: OrbitStatus::LeftDomain,
            period: None,
        };
    }
    for _ in 0..n {
        let x = points.last().expect("nonempty");
        let next = match t.eval(x) {
            Ok(v) => v,
            Err(AietError::CriticalPoint(_)) => {
                return OrbitResult {
                    points,
                    status: OrbitStatus::HitBreakpoint,
                    period: None,
                }
            }
            Err(_) => {
                return OrbitResult {
                    points,
                    status: OrbitStatus::LeftDomain,
                    period: None,
                }
            }
        };
        points.push(next);
        if let Some(p) = detect_period(&points, opts) {
            return OrbitResult {
                points,
                status: OrbitStatus::Converged,
                period: Some(p),
            };
        }
    }
    OrbitResult {
        points,
        status: OrbitStatus::Running,
        period: None,
    }
}

fn close<S: Scalar>(a: &S, b: &S, tol: f64) -> bool {
    a == b || (a.clone() - b.clone()).to_f64().abs() < tol
}

/// Smallest `p` such that the last `p` points repeat the `p` before them.
fn detect_period<S: Scalar>(points: &[S], opts: &OrbitOptions) -> Option<usize> {
    let k = points.len() - 1;
    for p in 1..=opts.max_period {
        if k + 1 < 2 * p {
            break;
        }
        if !close(&points[k], &points[k - p], opts.window_tol) {
            continue;
        }
        if (1..p).all(|i| close(&points[k - i], &points[k - i - p], opts.window_tol)) {
            return Some(p);
        }
    }
    None
}

#[derive(Serialize, Deserialize)]
struct RhoMapJson {
    rho_a: String,
    rho_b: String,
    x_t: String,
    domain: [String; 2],
}

impl<S: Scalar> Serialize for RhoMap<S> {
    fn serialize<Z: Serializer>(&self, ser: Z) -> Result<Z::Ok, Z::Error> {
        RhoMapJson {
            rho_a: self.rho_a.to_literal(),
            rho_b: self.rho_b.to_literal(),
            x_t: self.x_t.to_literal(),
            domain: [self.domain.lo.to_literal(), self.domain.hi.to_literal()],
        }
        .serialize(ser)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for RhoMap<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RhoMapJson::deserialize(de)?;
        let p = |s: &str| S::parse_literal(s).map_err(D::Error::custom);
        RhoMap::new(
            p(&raw.rho_a)?,
            p(&raw.rho_b)?,
            p(&raw.x_t)?,
            p(&raw.domain[0])?,
            p(&raw.domain[1])?,
        )
        .map_err(D::Error::custom)
    }
}
