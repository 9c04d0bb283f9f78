//! Parameter space of breakpoints: the intervals I(w) of breakpoints whose
//! induction follows `w`, the termination intervals H(w), the Cantor
//! complement, and the expanding-case window partition.

use rayon::prelude::*;
use thiserror::Error;

use crate::rauzy::{ExponentState, LengthMatrix, Letter, Word};
use crate::scalar::{Interval, Scalar};

/// Default limit on `enumerate_cells` depth.
pub const DEFAULT_DEPTH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("depth {depth} exceeds the configured cap {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },
    #[error("contracting factors required (got {0}, {1})")]
    NotContracting(String, String),
    #[error("expanding factors required: one factor >= 1, the other < 1 (got {0}, {1})")]
    NotExpanding(String, String),
}

#[derive(Debug, Clone)]
pub struct WordCell<S> {
    pub word: Word,
    pub i_w: Interval<S>,
    pub h_w: Interval<S>,
    pub exponents: ExponentState,
    pub matrix: LengthMatrix<S>,
    /// Current factor on `A` after `word`.
    pub factor_a: S,
    /// Current factor on `B` after `word`.
    pub factor_b: S,
}

fn i_from_matrix<S: Scalar>(m: &LengthMatrix<S>) -> Interval<S> {
    let lo = -m.b.clone() / (m.a.clone() - m.b.clone());
    let hi = m.d.clone() / (m.d.clone() - m.c.clone());
    if lo < hi {
        Interval::closed(lo, hi)
    } else {
        Interval::open(lo.clone(), lo)
    }
}

/// Termination window after a word with matrix `m` and current factors.
///
/// Lower end from `λ_A ≥ f_B λ_B`, upper end from `λ_B ≥ f_A λ_A` with
/// `(λ_A, λ_B) = m (x, 1 - x)`.
fn h_from_matrix<S: Scalar>(m: &LengthMatrix<S>, fa: &S, fb: &S) -> Interval<S> {
    let alpha = m.a.clone() - m.b.clone();
    let beta = m.d.clone() - m.c.clone();
    let lo = (fb.clone() * m.d.clone() - m.b.clone()) / (alpha.clone() + fb.clone() * beta.clone());
    let hi = (m.d.clone() - fa.clone() * m.b.clone()) / (fa.clone() * alpha + beta);
    if lo <= hi {
        Interval::closed(lo, hi)
    } else {
        Interval::open(lo.clone(), lo)
    }
}

fn cell_for<S: Scalar>(
    word: Word,
    m: LengthMatrix<S>,
    e: ExponentState,
    fa: S,
    fb: S,
) -> WordCell<S> {
    WordCell {
        i_w: i_from_matrix(&m),
        h_w: h_from_matrix(&m, &fa, &fb),
        word,
        exponents: e,
        matrix: m,
        factor_a: fa,
        factor_b: fb,
    }
}

fn child<S: Scalar>(parent: &WordCell<S>, l: Letter) -> WordCell<S> {
    let step = LengthMatrix::step(l, &parent.factor_a, &parent.factor_b);
    let (fa, fb) = match l {
        Letter::R => (
            parent.factor_a.clone(),
            parent.factor_a.clone() * parent.factor_b.clone(),
        ),
        Letter::L => (
            parent.factor_a.clone() * parent.factor_b.clone(),
            parent.factor_b.clone(),
        ),
    };
    cell_for(
        parent.word.with(l),
        step.mul(&parent.matrix),
        parent.exponents.apply(l),
        fa,
        fb,
    )
}

/// Cell for an arbitrary word.
pub fn word_cell<S: Scalar>(word: &Word, rho_a: &S, rho_b: &S) -> WordCell<S> {
    let root = cell_for(
        Word::default(),
        LengthMatrix::identity(),
        ExponentState::initial(),
        rho_a.clone(),
        rho_b.clone(),
    );
    word.letters().iter().fold(root, |c, &l| child(&c, l))
}

/// `I(w) = [-b/(a-b), d/(d-c)]`; an empty open interval when the ends cross.
pub fn interval_i<S: Scalar>(word: &Word, rho_a: &S, rho_b: &S) -> Interval<S> {
    word_cell(word, rho_a, rho_b).i_w
}

/// Breakpoints that follow `word` and then terminate.
pub fn interval_h<S: Scalar>(word: &Word, rho_a: &S, rho_b: &S) -> Interval<S> {
    word_cell(word, rho_a, rho_b).h_w
}

#[derive(Debug, Clone)]
pub struct LevelSummary<S> {
    pub depth: usize,
    pub cells: usize,
    /// `|H_depth|`, all words of length ≤ depth.
    pub h_measure: S,
    pub complement_measure: S,
}

#[derive(Debug, Clone)]
pub struct CantorReport<S> {
    pub rho_a: S,
    pub rho_b: S,
    pub depth: usize,
    pub h_measure: S,
    pub complement_measure: S,
    /// Breadth-first, lexicographic within a level (`L < R`).
    pub cells: Vec<WordCell<S>>,
    pub levels: Vec<LevelSummary<S>>,
    /// Uniform lower bound on `|H(w)|/|I(w)|` for words longer than `n_threshold`.
    pub delta_bound: Option<S>,
    pub n_threshold: usize,
}

pub fn enumerate_cells<S: Scalar>(
    rho_a: &S,
    rho_b: &S,
    depth: usize,
) -> Result<CantorReport<S>, ParamError> {
    enumerate_cells_capped(rho_a, rho_b, depth, DEFAULT_DEPTH_CAP)
}

pub fn enumerate_cells_capped<S: Scalar>(
    rho_a: &S,
    rho_b: &S,
    depth: usize,
    cap: usize,
) -> Result<CantorReport<S>, ParamError> {
    if depth > cap {
        return Err(ParamError::DepthCapExceeded { depth, cap });
    }
    contracting(rho_a, rho_b)?;
    let root = word_cell(&Word::default(), rho_a, rho_b);
    let mut cells = vec![root];
    let mut level_start = 0;
    let mut h_total = S::zero();
    let mut levels = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let level = &cells[level_start..];
        let h_level = S::sum_all(level.par_iter().map(|c| c.h_w.length()).collect());
        h_total = h_total + h_level;
        levels.push(LevelSummary {
            depth: k,
            cells: level.len(),
            h_measure: h_total.clone(),
            complement_measure: S::one() - h_total.clone(),
        });
        if k == depth {
            break;
        }
        let next: Vec<WordCell<S>> = level
            .par_iter()
            .flat_map_iter(|c| {
                [Letter::L, Letter::R]
                    .into_iter()
                    .map(move |l| child(c, l))
                    .filter(|c| c.i_w.lo < c.i_w.hi)
            })
            .collect();
        level_start = cells.len();
        cells.extend(next);
    }
    let (n, delta) = uniform_delta(rho_a, rho_b);
    Ok(CantorReport {
        rho_a: rho_a.clone(),
        rho_b: rho_b.clone(),
        depth,
        h_measure: h_total.clone(),
        complement_measure: S::one() - h_total,
        cells,
        levels,
        delta_bound: (delta > S::zero()).then_some(delta),
        n_threshold: n,
    })
}

fn contracting<S: Scalar>(rho_a: &S, rho_b: &S) -> Result<(), ParamError> {
    let (zero, one) = (S::zero(), S::one());
    if *rho_a > zero && *rho_b > zero && *rho_a < one && *rho_b < one {
        Ok(())
    } else {
        Err(ParamError::NotContracting(
            rho_a.to_literal(),
            rho_b.to_literal(),
        ))
    }
}

/// `1/(s f_A + 1) - 1/(s/f_B + 1)` with `s = (a-b)/(d-c)`, equal to
/// `|H(w)|/|I(w)|`.
pub fn ratio_identity<S: Scalar>(cell: &WordCell<S>) -> S {
    let m = &cell.matrix;
    let s = (m.a.clone() - m.b.clone()) / (m.d.clone() - m.c.clone());
    let one = S::one();
    one.clone() / (s.clone() * cell.factor_a.clone() + one.clone())
        - one.clone() / (s / cell.factor_b.clone() + one)
}

/// Per-word lower bound on `|H(w)|/|I(w)|` from `1-ρ < s < 1/(1-ρ)`,
/// `ρ = max(ρ_A, ρ_B)`.
pub fn delta_lower_bound<S: Scalar>(rho_a: &S, rho_b: &S, word: &Word) -> S {
    let c = word_cell(word, rho_a, rho_b);
    delta_from_factors(&S::max_of(rho_a, rho_b), &c.factor_a, &c.factor_b)
}

fn delta_from_factors<S: Scalar>(rho: &S, fa: &S, fb: &S) -> S {
    let one = S::one();
    let q = one.clone() - rho.clone();
    q.clone() / (fa.clone() + q.clone()) - one.clone() / (q / fb.clone() + one)
}

/// Smallest integer strictly above `2 log(1-ρ) / log ρ`.
pub fn uniform_threshold(rho: f64) -> usize {
    let v = 2.0 * (1.0 - rho).ln() / rho.ln();
    if !v.is_finite() || v < 0.0 {
        return 0;
    }
    v.floor() as usize + 1
}

/// `(N, δ)`: δ is the minimum of the per-word bound over all nonnegative
/// exponent tuples summing to `N + 1`, with both factors replaced by powers
/// of `ρ = max(ρ_A, ρ_B)`.
pub fn uniform_delta<S: Scalar>(rho_a: &S, rho_b: &S) -> (usize, S) {
    let rho = S::max_of(rho_a, rho_b);
    let n = uniform_threshold(rho.to_f64());
    let total = n as i64 + 1;
    let mut best: Option<S> = None;
    for m in 0..=total {
        let fa = rho.pow_int(m);
        let fb = rho.pow_int(total - m);
        let d = delta_from_factors(&rho, &fa, &fb);
        if best.as_ref().map_or(true, |b| d < *b) {
            best = Some(d);
        }
    }
    (n, best.expect("at least one tuple"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowKind {
    /// Both factors contract after the step: Cantor-type behaviour follows.
    Cantor2a,
    Terminate2b,
    Continue2c,
}

impl std::fmt::Display for WindowKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WindowKind::Cantor2a => "2a-cantor",
            WindowKind::Terminate2b => "2b-terminate",
            WindowKind::Continue2c => "2c-continue",
        })
    }
}

#[derive(Debug, Clone)]
pub struct PartitionWindow<S> {
    pub round: usize,
    pub kind: WindowKind,
    pub interval: Interval<S>,
    /// Induction word shared by every breakpoint of the round's parent window.
    pub word: Word,
}

fn clip<S: Scalar>(a: &Interval<S>, w: &Interval<S>) -> Interval<S> {
    let lo = S::max_of(&a.lo, &w.lo);
    let hi = S::min_of(&a.hi, &w.hi);
    if lo < hi {
        let lo_open = if lo == w.lo { w.lo_open } else { a.lo_open };
        let hi_open = if hi == w.hi { w.hi_open } else { a.hi_open };
        Interval::new(lo, hi, lo_open, hi_open).expect("ordered")
    } else {
        Interval::open(lo.clone(), lo)
    }
}

/// Windows of the injectivity domain `J` for each case-2 round, in the
/// original `x_t` coordinate, left to right within a round.
pub fn expanding_partition<S: Scalar>(
    rho_a: &S,
    rho_b: &S,
    rounds: usize,
) -> Result<Vec<PartitionWindow<S>>, ParamError> {
    let one = S::one();
    let a_expands = *rho_a >= one && *rho_b < one;
    let b_expands = *rho_b >= one && *rho_a < one;
    if !(a_expands || b_expands) || *rho_a <= S::zero() || *rho_b <= S::zero() {
        return Err(ParamError::NotExpanding(
            rho_a.to_literal(),
            rho_b.to_literal(),
        ));
    }
    let (forced, other) = if a_expands {
        (Letter::L, Letter::R)
    } else {
        (Letter::R, Letter::L)
    };
    let mut window = crate::aiet::injectivity_domain(rho_a, rho_b).expect("one factor contracts");
    let mut cell = word_cell(&Word::default(), rho_a, rho_b);
    let mut out = Vec::new();
    for round in 1..=rounds {
        while cell.factor_a.clone() * cell.factor_b.clone() >= one {
            cell = child(&cell, forced);
            // guard against unbounded forced runs (cannot happen for ρ_B < 1)
            if cell.word.len() > 100_000 {
                return Err(ParamError::NotExpanding(
                    rho_a.to_literal(),
                    rho_b.to_literal(),
                ));
            }
        }
        let word = cell.word.clone();
        let to_contract = child(&cell, forced);
        let to_continue = child(&cell, other);
        let w2a = clip(&to_contract.i_w, &window);
        let w2b = clip(&cell.h_w, &window);
        let w2c = clip(&to_continue.i_w, &window);
        let mut these = vec![
            (WindowKind::Cantor2a, w2a),
            (WindowKind::Terminate2b, w2b),
            (WindowKind::Continue2c, w2c.clone()),
        ];
        these.sort_by(|x, y| x.1.lo.partial_cmp(&y.1.lo).expect("ordered"));
        out.extend(these.into_iter().map(|(kind, interval)| PartitionWindow {
            round,
            kind,
            interval,
            word: word.clone(),
        }));
        window = w2c;
        cell = to_continue;
        if window.lo >= window.hi {
            break;
        }
    }
    Ok(out)
}

/// Word made of `block` copies of `L` followed by `R`, repeated, truncated to
/// `length`.
pub fn block_word(block: usize, length: usize) -> Word {
    let unit: Vec<Letter> = std::iter::repeat(Letter::L)
        .take(block)
        .chain(std::iter::once(Letter::R))
        .collect();
    Word(unit.into_iter().cycle().take(length).collect())
}

/// Breakpoint whose induction follows `word`: the midpoint of the nested
/// interval `I(word)`.
pub fn witness_for_word<S: Scalar>(rho_a: &S, rho_b: &S, word: &Word) -> Option<S> {
    let iv = interval_i(word, rho_a, rho_b);
    (iv.lo < iv.hi).then(|| iv.midpoint())
}
