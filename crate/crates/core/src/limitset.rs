//! Images of the gap `I_∞ = D \ T(D)`, the measures `f_n`, tail
//! classification of the induction word, and covers of ω-limit sets.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::aiet::{injectivity_domain, AietError, Branch, RhoMap};
use crate::rauzy::{induct_auto, Letter, RauzyError};
use crate::scalar::{eq_tol, Interval, Scalar};

/// Induction budget `omega_cover` uses to confirm the tail kind.
pub const TAIL_BUDGET: usize = 40;
/// Default depth for ω-covers.
pub const DEFAULT_COVER_DEPTH: usize = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("omega cover needs an infinite-both tail, found {0}")]
    WrongTailKind(TailKind),
    #[error(transparent)]
    Rauzy(#[from] RauzyError),
    #[error(transparent)]
    Aiet(#[from] AietError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lineage {
    Whole,
    /// Descends from the part of the split piece left of the breakpoint.
    FromI1,
    /// Descends from the part right of the breakpoint.
    FromI2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapPiece<S> {
    /// Open interval.
    pub interval: Interval<S>,
    pub lineage: Lineage,
    /// Image index: the piece lies in `T^k(I_∞)`.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapImages<S> {
    pub pieces: Vec<GapPiece<S>>,
    /// `j` with the breakpoint inside `T^j(I_∞)`.
    pub split_step: Option<usize>,
    /// `j + 2`.
    pub period: Option<usize>,
    /// The map had no gap.
    pub surjective: bool,
}

impl<S: Scalar> GapImages<S> {
    pub fn measure(&self) -> S {
        self.pieces
            .iter()
            .fold(S::zero(), |acc, p| acc + p.interval.length())
    }

    /// Union of the pieces as maximal open intervals, sorted.
    pub fn maximal_intervals(&self) -> Vec<(S, S)> {
        let mut spans: Vec<(S, S)> = self
            .pieces
            .iter()
            .map(|p| (p.interval.lo.clone(), p.interval.hi.clone()))
            .collect();
        spans.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("ordered"));
        let mut out: Vec<(S, S)> = Vec::new();
        for (lo, hi) in spans {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        out
    }
}

/// Track `T^k(I_∞)` for `k ≤ n`, splitting at the breakpoint, and return the
/// total measure `f_n` with the pieces. Surjective maps give `0`.
pub fn fn_value<S: Scalar>(t: &RhoMap<S>, n: usize) -> (S, GapImages<S>) {
    let (_, _, gap) = t.image_intervals();
    let mut images = GapImages {
        pieces: Vec::new(),
        split_step: None,
        period: None,
        surjective: false,
    };
    let len = t.len();
    if gap.lo >= gap.hi || eq_tol(&gap.lo, &gap.hi, &len) {
        images.surjective = true;
        return (S::zero(), images);
    }
    let mut current = vec![(gap.lo.clone(), gap.hi.clone(), Lineage::Whole)];
    for k in 0..=n {
        for (lo, hi, lineage) in &current {
            images.pieces.push(GapPiece {
                interval: Interval::open(lo.clone(), hi.clone()),
                lineage: *lineage,
                k,
            });
        }
        if k == n {
            break;
        }
        let mut next = Vec::with_capacity(current.len() + 1);
        for (lo, hi, lineage) in current {
            let x = &t.x_t;
            let straddles = lo < *x && hi > *x && !eq_tol(&lo, x, &len) && !eq_tol(&hi, x, &len);
            if straddles {
                images.split_step = Some(k);
                images.period = Some(k + 2);
                next.push((
                    t.eval_branch(&lo, Branch::A),
                    t.hi().clone(),
                    Lineage::FromI1,
                ));
                next.push((
                    t.lo().clone(),
                    t.eval_branch(&hi, Branch::B),
                    Lineage::FromI2,
                ));
            } else {
                let mid = (lo.clone() + hi.clone()) / S::from_i64(2);
                let b = if mid < *x { Branch::A } else { Branch::B };
                let (a2, b2) = (t.eval_branch(&lo, b), t.eval_branch(&hi, b));
                if a2 < b2 {
                    next.push((a2, b2, lineage));
                }
            }
        }
        current = next;
    }
    (images.measure(), images)
}

#[derive(Debug, Clone)]
pub struct FnProfile<S> {
    pub rho_a: S,
    pub rho_b: S,
    pub n: usize,
    pub grid: Vec<S>,
    pub values: Vec<S>,
}

/// Valid breakpoints on `[0, 1]`, closed at the surjective end.
pub fn breakpoint_range<S: Scalar>(rho_a: &S, rho_b: &S) -> Option<(S, S)> {
    injectivity_domain(rho_a, rho_b).map(|iv| (iv.lo, iv.hi))
}

/// `f_n` on `grid_size` evenly spaced breakpoints spanning the valid range.
pub fn fn_profile<S: Scalar>(
    rho_a: &S,
    rho_b: &S,
    n: usize,
    grid_size: usize,
) -> Result<FnProfile<S>, LimitError> {
    let (lo, hi) = breakpoint_range(rho_a, rho_b).ok_or_else(|| {
        LimitError::Aiet(AietError::NotInjective {
            x_t: "any".into(),
            allowed: "(empty)".into(),
        })
    })?;
    let grid: Vec<S> = (0..grid_size)
        .map(|i| {
            if grid_size == 1 {
                lo.clone()
            } else {
                lo.clone()
                    + (hi.clone() - lo.clone()) * S::from_i64(i as i64)
                        / S::from_i64(grid_size as i64 - 1)
            }
        })
        .collect();
    let values: Vec<S> = grid
        .par_iter()
        .map(|x| {
            let t = RhoMap::raw(rho_a.clone(), rho_b.clone(), x.clone(), S::zero(), S::one());
            fn_value(&t, n).0
        })
        .collect();
    Ok(FnProfile {
        rho_a: rho_a.clone(),
        rho_b: rho_b.clone(),
        n,
        grid,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailKind {
    Terminating,
    /// Only left steps from some point on (degenerate configuration).
    OneSidedLeft,
    OneSidedRight,
    InfiniteBoth,
    Undetermined,
}

impl fmt::Display for TailKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailKind::Terminating => "terminating",
            TailKind::OneSidedLeft => "one-sided-left",
            TailKind::OneSidedRight => "one-sided-right",
            TailKind::InfiniteBoth => "infinite-both",
            TailKind::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailReport {
    pub kind: TailKind,
    /// Induction steps taken.
    pub depth: usize,
}

/// Letters inspected at the end of a budget-exhausted word.
pub fn confirmation_window(max_steps: usize) -> usize {
    (max_steps / 2).max(2)
}

fn one_sided<S: Scalar>(t: &RhoMap<S>) -> Option<TailKind> {
    let len = t.len();
    let zero = S::zero();
    let one = S::one();
    let left = eq_tol(&t.lambda_a(), &zero, &len)
        || (t.rho_b > one && eq_tol(&(t.rho_b.clone() * t.lambda_b()), &len, &len));
    let right = eq_tol(&t.lambda_b(), &zero, &len)
        || (t.rho_a > one && eq_tol(&(t.rho_a.clone() * t.lambda_a()), &len, &len));
    match (left, right) {
        (true, _) => Some(TailKind::OneSidedLeft),
        (_, true) => Some(TailKind::OneSidedRight),
        _ => None,
    }
}

/// Classify the induction tail of `t` within `max_steps` steps.
///
/// A budget-exhausted word counts as infinite-both when both letters occur in
/// its last [`confirmation_window`] letters. Surjective maps are undetermined.
pub fn classify_tail<S: Scalar>(t: &RhoMap<S>, max_steps: usize) -> Result<TailReport, LimitError> {
    if let Some(kind) = one_sided(t) {
        return Ok(TailReport { kind, depth: 0 });
    }
    if t.is_surjective() {
        return Ok(TailReport {
            kind: TailKind::Undetermined,
            depth: 0,
        });
    }
    let trace = induct_auto(t, max_steps)?;
    let depth = trace.total_steps();
    if trace.terminated() {
        return Ok(TailReport {
            kind: TailKind::Terminating,
            depth,
        });
    }
    if let Some(kind) = one_sided(trace.final_map()) {
        return Ok(TailReport { kind, depth });
    }
    let word = trace.full_word().letters();
    let window = confirmation_window(max_steps).min(word.len());
    let tail = &word[word.len() - window..];
    let both = tail.contains(&Letter::L) && tail.contains(&Letter::R);
    Ok(TailReport {
        kind: if both {
            TailKind::InfiniteBoth
        } else {
            TailKind::Undetermined
        },
        depth,
    })
}

#[derive(Debug, Clone)]
pub struct OmegaCover<S> {
    /// Closed intervals left after removing the open gap images.
    pub cover: Vec<Interval<S>>,
    /// Endpoints of the gap images, sorted.
    pub boundary_cloud: Vec<S>,
    pub measure: S,
    pub depth: usize,
    /// Float run produced gap pieces shorter than [`ESCALATION_LENGTH`];
    /// rerun on the exact backend.
    pub escalate: bool,
}

/// Piece length below which float covers ask for the exact backend.
pub const ESCALATION_LENGTH: f64 = 1e-15;

impl<S: Scalar> OmegaCover<S> {
    pub fn contains(&self, x: &S) -> bool {
        let idx = self.cover.partition_point(|iv| iv.hi < *x);
        idx < self.cover.len() && self.cover[idx].contains(x)
    }
}

/// Cover of the ω-limit set of an infinite-both map: the domain minus
/// `∪_{k≤n} T^k(I_∞)`.
pub fn omega_cover<S: Scalar>(t: &RhoMap<S>, n: usize) -> Result<OmegaCover<S>, LimitError> {
    let tail = classify_tail(t, TAIL_BUDGET)?;
    if tail.kind != TailKind::InfiniteBoth {
        return Err(LimitError::WrongTailKind(tail.kind));
    }
    Ok(cover_from_gaps(t, n))
}

/// Complement of the gap images, without the tail check.
pub fn cover_from_gaps<S: Scalar>(t: &RhoMap<S>, n: usize) -> OmegaCover<S> {
    let (_, images) = fn_value(t, n);
    let gaps = images.maximal_intervals();
    let mut cover = Vec::with_capacity(gaps.len() + 1);
    let mut cursor = t.lo().clone();
    for (lo, hi) in &gaps {
        if *lo >= cursor {
            cover.push(Interval::closed(cursor.clone(), lo.clone()));
        }
        cursor = S::max_of(&cursor, hi);
    }
    if *t.hi() >= cursor {
        cover.push(Interval::closed(cursor, t.hi().clone()));
    }
    let mut cloud: Vec<S> = images
        .pieces
        .iter()
        .flat_map(|p| [p.interval.lo.clone(), p.interval.hi.clone()])
        .collect();
    cloud.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
    cloud.dedup();
    let measure = cover.iter().fold(S::zero(), |acc, iv| acc + iv.length());
    let escalate = S::tol() > 0.0
        && images
            .pieces
            .iter()
            .any(|p| p.interval.length().to_f64() < ESCALATION_LENGTH);
    OmegaCover {
        cover,
        boundary_cloud: cloud,
        measure,
        depth: n,
        escalate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    type Q = BigRational;

    fn q(s: &str) -> Q {
        Q::parse_literal(s).unwrap()
    }

    #[test]
    fn half_map_values() {
        let t = RhoMap::unit(q("1/2"), q("1/2"), q("1/2")).unwrap();
        let mut expected = q("1/2");
        for n in 0..=20 {
            let (f, _) = fn_value(&t, n);
            assert_eq!(f, expected, "n = {n}");
            expected = expected.clone() + (q("1") - expected) / q("2");
        }
        let (_, g) = fn_value(&t, 4);
        assert_eq!(g.split_step, Some(0));
        assert_eq!(g.period, Some(2));
        assert_eq!(g.maximal_intervals().len(), 3);
    }

    #[test]
    fn surjective_gives_zero() {
        let t = RhoMap::unit(q("2"), q("1/2"), q("1/3")).unwrap();
        let (f, g) = fn_value(&t, 5);
        assert_eq!(f, q("0"));
        assert!(g.pieces.is_empty() && g.surjective);
    }

    #[test]
    fn tails() {
        let t = RhoMap::unit(q("1/2"), q("1/2"), q("1/2")).unwrap();
        assert_eq!(classify_tail(&t, 40).unwrap().kind, TailKind::Terminating);
        let t = RhoMap::unit(q("0.9"), q("0.8"), q("0")).unwrap();
        assert_eq!(classify_tail(&t, 40).unwrap().kind, TailKind::OneSidedLeft);
        let t = RhoMap::unit(q("0.9"), q("0.8"), q("1")).unwrap();
        assert_eq!(classify_tail(&t, 40).unwrap().kind, TailKind::OneSidedRight);
        let t = RhoMap::unit(q("1/2"), q("1/2"), q("1/2")).unwrap();
        assert_eq!(
            omega_cover(&t, 5).unwrap_err(),
            LimitError::WrongTailKind(TailKind::Terminating)
        );
    }

    #[test]
    fn cover_matches_fn() {
        let t = RhoMap::unit(q("1/2"), q("1/3"), q("3/7")).unwrap();
        let (f, _) = fn_value(&t, 12);
        let c = cover_from_gaps(&t, 12);
        assert_eq!(c.measure, q("1") - f);
    }
}
