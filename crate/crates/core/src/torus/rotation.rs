use super::TorusError;
use crate::aiet::RhoMap;
use crate::scalar::Scalar;

const MIN_ITERATES: usize = 1 << 10;
const MAX_ITERATES: usize = 1 << 22;
/// Iterates needed for the `1/N` bound to drop below `1e-6`.
const BOUND_ITERATES: usize = 1 << 20;
const STABLE: f64 = 1e-6;
const MAX_DENOMINATOR: u64 = 64;
const PERIOD_TOL: f64 = 1e-9;
const SAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct RotationEstimate {
    pub estimate: f64,
    /// `|estimate - true value| <= error_bound` (circle-homeomorphism bound `1/N`).
    pub error_bound: f64,
    pub iterations: usize,
    /// `(p, q)` when a periodic orbit of rotation number `p/q`, `q <= 64`, was found.
    pub rational: Option<(u64, u64)>,
    /// Every sample point is periodic with period `q`.
    pub completely_periodic: bool,
}

struct Circle {
    rho_a: f64,
    rho_b: f64,
    x_t: f64,
}

impl Circle {
    /// One step of the map on `[0, 1)`, returning the lift increment.
    fn step(&self, x: f64) -> (f64, u64) {
        let (mut y, mut wrap) = if x < self.x_t {
            (1.0 - self.rho_a * (self.x_t - x), 0)
        } else {
            (self.rho_b * (x - self.x_t), 1)
        };
        if y >= 1.0 {
            y -= 1.0;
            wrap += 1;
        }
        (y.max(0.0), wrap)
    }

    fn iterate(&self, mut x: f64, n: usize) -> (f64, u64) {
        let mut wraps = 0;
        for _ in 0..n {
            let (y, w) = self.step(x);
            x = y;
            wraps += w;
        }
        (x, wraps)
    }

    fn periodic(&self, x: f64, p: u64, q: u64) -> bool {
        let (y, w) = self.iterate(x, q as usize);
        let d = (y - x).abs();
        let circ = d.min(1.0 - d);
        let wraps_ok = if d <= 0.5 {
            w == p
        } else {
            w + 1 == p || w == p + 1
        };
        circ < PERIOD_TOL && wraps_ok
    }
}

fn convergents(x: f64, max_q: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > max_q {
            break;
        }
        out.push((p2, q2));
        let frac = r - r.floor();
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    out
}

/// Numerical rotation number of a bijective (surjective) map seen as a
/// circle homeomorphism of `[lo, hi)`.
pub fn rotation_number<S: Scalar>(map: &RhoMap<S>) -> Result<RotationEstimate, TorusError> {
    if !map.is_surjective() {
        return Err(TorusError::NotBijective);
    }
    let u = map.to_f64().rescale_to_unit()?;
    let c = Circle {
        rho_a: u.rho_a,
        rho_b: u.rho_b,
        x_t: u.x_t,
    };
    let x0 = c.x_t / 2.0;
    let mut x = x0;
    let mut wraps = 0u64;
    let mut done = 0usize;
    let mut n = MIN_ITERATES;
    let mut prev: Option<f64> = None;
    let estimate = loop {
        let (y, w) = c.iterate(x, n - done);
        x = y;
        wraps += w;
        done = n;
        let est = (x - x0 + wraps as f64) / n as f64;
        let stable = prev.map_or(false, |p| (p - est).abs() < STABLE);
        if (stable && n >= BOUND_ITERATES) || n >= MAX_ITERATES {
            break est;
        }
        prev = Some(est);
        n *= 2;
    };
    let error_bound = 1.0 / n as f64;
    let mut rational = None;
    for (p, q) in convergents(estimate, MAX_DENOMINATOR) {
        if (estimate - p as f64 / q as f64).abs() <= error_bound + PERIOD_TOL && c.periodic(x, p, q)
        {
            rational = Some((p, q));
            break;
        }
    }
    let completely_periodic = match rational {
        Some((p, q)) => (0..SAMPLES).all(|k| c.periodic((k as f64 + 0.5) / SAMPLES as f64, p, q)),
        None => false,
    };
    Ok(RotationEstimate {
        estimate: rational.map_or(estimate, |(p, q)| p as f64 / q as f64),
        error_bound,
        iterations: n,
        rational,
        completely_periodic,
    })
}
