//! Rauzy induction for (ρ_A, ρ_B)-maps: step classification, the R/L length
//! matrices, the contracting and expanding-case algorithms, and unwinding of
//! the terminal fixed point into a periodic cycle of the original map.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};
use thiserror::Error;

use crate::aiet::{AietError, Branch, RhoMap};
use crate::scalar::{eq_tol, lt_tol, Interval, Scalar};

/// Step budget used when none is given, exact backend.
pub const DEFAULT_MAX_STEPS_EXACT: usize = 60;
/// Step budget used when none is given, float backend.
pub const DEFAULT_MAX_STEPS_F64: usize = 48;
/// Longest cycle `terminal_orbit` will list point by point.
pub const MAX_LISTED_PERIOD: u128 = 1 << 20;

pub fn default_max_steps<S: Scalar>() -> usize {
    match S::BACKEND {
        crate::scalar::Backend::Exact => DEFAULT_MAX_STEPS_EXACT,
        crate::scalar::Backend::F64 => DEFAULT_MAX_STEPS_F64,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RauzyError {
    #[error("degenerate input: breakpoint on the domain boundary (lambda_a * lambda_b = 0)")]
    DegenerateInput,
    #[error("contracting induction needs rho_a < 1 and rho_b < 1 (got {0}, {1})")]
    NotContracting(String, String),
    #[error("expanding induction needs exactly one factor >= 1 (got {0}, {1})")]
    NotExpanding(String, String),
    #[error("invalid step: requested {requested}, map admits {admitted}")]
    InvalidStep {
        requested: StepKind,
        admitted: StepKind,
    },
    #[error("induction did not terminate")]
    NotTerminated,
    #[error("periodic orbit has period {0}, above the listing cap")]
    PeriodTooLong(u128),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error(transparent)]
    Aiet(#[from] AietError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::L => 'L',
            Letter::R => 'R',
        }
    }
}

/// A word over `{L, R}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn push(&mut self, l: Letter) {
        self.0.push(l)
    }
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
    pub fn with(&self, l: Letter) -> Word {
        let mut w = self.clone();
        w.push(l);
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Letter::L),
                'R' | 'r' => Ok(Letter::R),
                other => Err(format!("invalid letter {other:?} in word {s:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Right,
    Left,
    Terminate,
}

impl StepKind {
    pub fn letter(self) -> Option<Letter> {
        match self {
            StepKind::Right => Some(Letter::R),
            StepKind::Left => Some(Letter::L),
            StepKind::Terminate => None,
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Right => "right",
            StepKind::Left => "left",
            StepKind::Terminate => "terminate",
        })
    }
}

/// Exponents `(m_A, m_B, n_A, n_B)`: the current factors are
/// `ρ_A^{m_A} ρ_B^{m_B}` on `A` and `ρ_A^{n_A} ρ_B^{n_B}` on `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExponentState {
    pub m_a: u128,
    pub m_b: u128,
    pub n_a: u128,
    pub n_b: u128,
}

impl Default for ExponentState {
    fn default() -> Self {
        Self::initial()
    }
}

impl ExponentState {
    pub fn initial() -> Self {
        ExponentState {
            m_a: 1,
            m_b: 0,
            n_a: 0,
            n_b: 1,
        }
    }

    pub fn apply(self, l: Letter) -> Self {
        match l {
            Letter::R => ExponentState {
                n_a: self.m_a.saturating_add(self.n_a),
                n_b: self.m_b.saturating_add(self.n_b),
                ..self
            },
            Letter::L => ExponentState {
                m_a: self.m_a.saturating_add(self.n_a),
                m_b: self.m_b.saturating_add(self.n_b),
                ..self
            },
        }
    }

    pub fn from_word(w: &Word) -> Self {
        w.letters().iter().fold(Self::initial(), |e, &l| e.apply(l))
    }

    pub fn sum(&self) -> u128 {
        self.m_a + self.m_b + self.n_a + self.n_b
    }

    /// `ρ_A^{m_A} ρ_B^{m_B}`.
    pub fn factor_a<S: Scalar>(&self, rho_a: &S, rho_b: &S) -> S {
        rho_a.pow_int(self.m_a as i64) * rho_b.pow_int(self.m_b as i64)
    }

    /// `ρ_A^{n_A} ρ_B^{n_B}`.
    pub fn factor_b<S: Scalar>(&self, rho_a: &S, rho_b: &S) -> S {
        rho_a.pow_int(self.n_a as i64) * rho_b.pow_int(self.n_b as i64)
    }
}

/// 2×2 matrix `(a b; c d)` acting on length vectors `(λ_A, λ_B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthMatrix<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Scalar> LengthMatrix<S> {
    pub fn identity() -> Self {
        LengthMatrix {
            a: S::one(),
            b: S::zero(),
            c: S::zero(),
            d: S::one(),
        }
    }

    /// Single-step matrix given the current factors.
    pub fn step(l: Letter, factor_a: &S, factor_b: &S) -> Self {
        match l {
            Letter::R => {
                let k = factor_a.recip();
                LengthMatrix {
                    a: S::one(),
                    b: -k.clone(),
                    c: S::zero(),
                    d: k,
                }
            }
            Letter::L => {
                let k = factor_b.recip();
                LengthMatrix {
                    a: k.clone(),
                    b: S::zero(),
                    c: -k,
                    d: S::one(),
                }
            }
        }
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let m = |x: &S, y: &S| x.clone() * y.clone();
        LengthMatrix {
            a: m(&self.a, &rhs.a) + m(&self.b, &rhs.c),
            b: m(&self.a, &rhs.b) + m(&self.b, &rhs.d),
            c: m(&self.c, &rhs.a) + m(&self.d, &rhs.c),
            d: m(&self.c, &rhs.b) + m(&self.d, &rhs.d),
        }
    }

    pub fn det(&self) -> S {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn apply(&self, la: &S, lb: &S) -> (S, S) {
        (
            self.a.clone() * la.clone() + self.b.clone() * lb.clone(),
            self.c.clone() * la.clone() + self.d.clone() * lb.clone(),
        )
    }

    /// The matrix after reading `w` from the start, at base factors `(ρ_A, ρ_B)`.
    pub fn for_word(w: &Word, rho_a: &S, rho_b: &S) -> (Self, ExponentState) {
        let mut m = Self::identity();
        let mut e = ExponentState::initial();
        let mut fa = rho_a.clone();
        let mut fb = rho_b.clone();
        for &l in w.letters() {
            m = Self::step(l, &fa, &fb).mul(&m);
            e = e.apply(l);
            match l {
                Letter::R => fb = fa.clone() * fb,
                Letter::L => fa = fa * fb.clone(),
            }
        }
        (m, e)
    }

    pub fn to_literals(&self) -> [String; 4] {
        [
            self.a.to_literal(),
            self.b.to_literal(),
            self.c.to_literal(),
            self.d.to_literal(),
        ]
    }
}

/// Classify the next step of a map whose own factors are the current ones.
///
/// Right iff `λ_B < ρ_A λ_A`, left iff `λ_A < ρ_B λ_B`, terminate otherwise.
pub fn classify_step<S: Scalar>(t: &RhoMap<S>) -> Result<StepKind, RauzyError> {
    let la = t.lambda_a();
    let lb = t.lambda_b();
    let len = t.len();
    let zero = S::zero();
    if eq_tol(&la, &zero, &len) || eq_tol(&lb, &zero, &len) {
        return Err(RauzyError::DegenerateInput);
    }
    let right = lt_tol(&lb, &(t.rho_a.clone() * la.clone()), &len);
    let left = lt_tol(&la, &(t.rho_b.clone() * lb), &len);
    match (right, left) {
        (true, false) => Ok(StepKind::Right),
        (false, true) => Ok(StepKind::Left),
        (false, false) => Ok(StepKind::Terminate),
        (true, true) => Err(RauzyError::InvariantViolated(
            "both right and left predicates hold (map not injective)".into(),
        )),
    }
}

/// Apply one induction step. Domains stay in the coordinates of `t`.
pub fn apply_step<S: Scalar>(
    t: &RhoMap<S>,
    exp: &ExponentState,
    kind: StepKind,
) -> Result<(RhoMap<S>, ExponentState), RauzyError> {
    let admitted = classify_step(t)?;
    if admitted != kind || kind == StepKind::Terminate {
        return Err(RauzyError::InvalidStep {
            requested: kind,
            admitted,
        });
    }
    Ok(step_unchecked(t, exp, kind))
}

fn step_unchecked<S: Scalar>(
    t: &RhoMap<S>,
    exp: &ExponentState,
    kind: StepKind,
) -> (RhoMap<S>, ExponentState) {
    let fa = t.rho_a.clone();
    let fb = t.rho_b.clone();
    match kind {
        StepKind::Right => {
            let x = t.x_t.clone() - t.lambda_b() / fa.clone();
            let m = RhoMap::raw(fa.clone(), fa * fb, x, t.lo().clone(), t.x_t.clone());
            (m, exp.apply(Letter::R))
        }
        StepKind::Left => {
            let x = t.x_t.clone() + t.lambda_a() / fb.clone();
            let m = RhoMap::raw(fa * fb.clone(), fb, x, t.x_t.clone(), t.hi().clone());
            (m, exp.apply(Letter::L))
        }
        StepKind::Terminate => unreachable!("terminate is not a cut"),
    }
}

/// Running state of an induction, always in the original coordinates.
#[derive(Debug, Clone)]
pub struct InductionState<S> {
    /// The map induction started from.
    pub origin: RhoMap<S>,
    /// Current first-return map with its own current factors.
    pub map: RhoMap<S>,
    pub exponents: ExponentState,
    pub matrix: LengthMatrix<S>,
    /// Every letter applied since `origin`.
    pub history: Word,
}

impl<S: Scalar> InductionState<S> {
    pub fn start(t: &RhoMap<S>) -> Self {
        InductionState {
            origin: t.clone(),
            map: t.clone(),
            exponents: ExponentState::initial(),
            matrix: LengthMatrix::identity(),
            history: Word::default(),
        }
    }

    fn advance(&mut self, kind: StepKind) {
        let l = kind.letter().expect("cut step");
        let step = LengthMatrix::step(l, &self.map.rho_a, &self.map.rho_b);
        let (map, exps) = step_unchecked(&self.map, &self.exponents, kind);
        self.matrix = step.mul(&self.matrix);
        self.map = map;
        self.exponents = exps;
        self.history.push(l);
    }

    /// Return times `(τ_A, τ_B)` of the current pieces, saturating.
    pub fn return_times(&self) -> (u128, u128) {
        self.history
            .letters()
            .iter()
            .fold((1u128, 1u128), |(a, b), &l| match l {
                Letter::R => (a, a.saturating_add(b)),
                Letter::L => (a.saturating_add(b), b),
            })
    }
}

/// Branch taken in a round of the expanding-case algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpandingCase {
    /// Product of factors ≥ 1: the step is forced.
    Case1,
    /// Step after which both factors contract.
    Case2a,
    /// Termination.
    Case2b,
    /// Step after which one factor still expands.
    Case2c,
}

impl fmt::Display for ExpandingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpandingCase::Case1 => "1",
            ExpandingCase::Case2a => "2a",
            ExpandingCase::Case2b => "2b",
            ExpandingCase::Case2c => "2c",
        })
    }
}

#[derive(Debug, Clone)]
pub struct InductionStep<S> {
    pub kind: StepKind,
    /// Exponents after the step.
    pub exponents: ExponentState,
    /// Cumulative length matrix after the step.
    pub matrix: LengthMatrix<S>,
    /// Domain the step cut from, in original coordinates.
    pub domain_before: Interval<S>,
    pub case: Option<ExpandingCase>,
}

#[derive(Debug, Clone)]
pub enum Outcome<S> {
    /// The final map admits no cut: its attracting cycle is available via
    /// [`terminal_orbit`].
    Terminated,
    BudgetExhausted,
    /// Expanding-case run that reached a contracting map; the contracting
    /// continuation is attached.
    EnteredContracting(Box<InductionTrace<S>>),
}

#[derive(Debug, Clone)]
pub struct InductionTrace<S> {
    pub initial: RhoMap<S>,
    /// Letters produced by this trace (without any parent prefix).
    pub word: Word,
    pub steps: Vec<InductionStep<S>>,
    pub outcome: Outcome<S>,
    pub state: InductionState<S>,
    /// Lengths of completed forced-step runs (expanding case only).
    pub case1_runs: Vec<usize>,
}

impl<S: Scalar> InductionTrace<S> {
    /// Last trace in the chain of contracting hand-offs.
    pub fn innermost(&self) -> &InductionTrace<S> {
        match &self.outcome {
            Outcome::EnteredContracting(sub) => sub.innermost(),
            _ => self,
        }
    }

    /// Every letter from the original map to the end of the chain.
    pub fn full_word(&self) -> &Word {
        &self.innermost().state.history
    }

    pub fn total_steps(&self) -> usize {
        self.full_word().len()
    }

    pub fn terminated(&self) -> bool {
        matches!(self.innermost().outcome, Outcome::Terminated)
    }

    pub fn final_map(&self) -> &RhoMap<S> {
        &self.innermost().state.map
    }

    pub fn outcome_tag(&self) -> &'static str {
        match &self.outcome {
            Outcome::Terminated => "terminated",
            Outcome::BudgetExhausted => "budget-exhausted",
            Outcome::EnteredContracting(_) => "entered-contracting",
        }
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                let e = s.exponents;
                json!({
                    "kind": s.kind.to_string(),
                    "case": s.case.map(|c| c.to_string()),
                    "exponents": [e.m_a.to_string(), e.m_b.to_string(), e.n_a.to_string(), e.n_b.to_string()],
                    "matrix": s.matrix.to_literals(),
                    "domain_before": [s.domain_before.lo.to_literal(), s.domain_before.hi.to_literal()],
                })
            })
            .collect();
        let mut v = json!({
            "initial": serde_json::to_value(&self.initial).unwrap_or(Value::Null),
            "word": self.word.to_string(),
            "steps": steps,
            "outcome": self.outcome_tag(),
            "final_map": serde_json::to_value(&self.state.map).unwrap_or(Value::Null),
        });
        if let Outcome::EnteredContracting(sub) = &self.outcome {
            v["sub_trace"] = sub.to_json();
        }
        v
    }
}

fn check_nondegenerate<S: Scalar>(t: &RhoMap<S>) -> Result<(), RauzyError> {
    let len = t.len();
    if eq_tol(&t.lambda_a(), &S::zero(), &len) || eq_tol(&t.lambda_b(), &S::zero(), &len) {
        Err(RauzyError::DegenerateInput)
    } else {
        Ok(())
    }
}

/// Contracting-case induction (`ρ_A < 1`, `ρ_B < 1`).
pub fn induct<S: Scalar>(t: &RhoMap<S>, max_steps: usize) -> Result<InductionTrace<S>, RauzyError> {
    check_nondegenerate(t)?;
    if !t.is_contracting() {
        return Err(RauzyError::NotContracting(
            t.rho_a.to_literal(),
            t.rho_b.to_literal(),
        ));
    }
    run_plain(InductionState::start(t), max_steps)
}

fn run_plain<S: Scalar>(
    mut state: InductionState<S>,
    max_steps: usize,
) -> Result<InductionTrace<S>, RauzyError> {
    let initial = state.map.clone();
    let mut steps = Vec::new();
    let mut word = Word::default();
    let outcome = loop {
        let kind = classify_step(&state.map)?;
        if kind == StepKind::Terminate {
            break Outcome::Terminated;
        }
        if steps.len() >= max_steps {
            break Outcome::BudgetExhausted;
        }
        let domain_before = state.map.domain.clone();
        state.advance(kind);
        word.push(kind.letter().expect("cut"));
        steps.push(InductionStep {
            kind,
            exponents: state.exponents,
            matrix: state.matrix.clone(),
            domain_before,
            case: None,
        });
    };
    Ok(InductionTrace {
        initial,
        word,
        steps,
        outcome,
        state,
        case1_runs: Vec::new(),
    })
}

/// Expanding-case induction: exactly one factor is ≥ 1.
///
/// Forced steps while the factor product is ≥ 1; otherwise terminate, hand
/// off to [`induct`] once both factors contract, or keep cutting.
pub fn modified_induct<S: Scalar>(
    t: &RhoMap<S>,
    max_rounds: usize,
) -> Result<InductionTrace<S>, RauzyError> {
    check_nondegenerate(t)?;
    let one = S::one();
    let a_expands = t.rho_a >= one && t.rho_b < one;
    let b_expands = t.rho_b >= one && t.rho_a < one;
    if !(a_expands || b_expands) {
        return Err(RauzyError::NotExpanding(
            t.rho_a.to_literal(),
            t.rho_b.to_literal(),
        ));
    }
    let forced = if a_expands {
        StepKind::Left
    } else {
        StepKind::Right
    };
    let expanding = |m: &RhoMap<S>| {
        if a_expands {
            m.rho_a.clone()
        } else {
            m.rho_b.clone()
        }
    };

    let mut state = InductionState::start(t);
    let initial = t.clone();
    let mut steps = Vec::new();
    let mut word = Word::default();
    let mut case1_runs = Vec::new();
    let mut run = 0usize;
    let mut run_bound = 0usize;

    let outcome = loop {
        let prod = state.map.rho_a.clone() * state.map.rho_b.clone();
        let kind = classify_step(&state.map)?;
        let in_case1 = prod >= one;
        if !in_case1 && run > 0 {
            case1_runs.push(run);
            run = 0;
        }
        if kind == StepKind::Terminate {
            if in_case1 {
                return Err(RauzyError::InvariantViolated(
                    "termination while the factor product is >= 1".into(),
                ));
            }
            break Outcome::Terminated;
        }
        if steps.len() >= max_rounds {
            break Outcome::BudgetExhausted;
        }
        let before = expanding(&state.map);
        let domain_before = state.map.domain.clone();
        let case = if in_case1 {
            if kind != forced {
                return Err(RauzyError::InvariantViolated(format!(
                    "factor product >= 1 but the map admits a {kind} step"
                )));
            }
            if run == 0 {
                run_bound = case1_bound(&state.map, a_expands);
            }
            run += 1;
            if run > run_bound {
                return Err(RauzyError::InvariantViolated(format!(
                    "forced-step run exceeded its bound {run_bound}"
                )));
            }
            ExpandingCase::Case1
        } else {
            ExpandingCase::Case2c
        };
        state.advance(kind);
        word.push(kind.letter().expect("cut"));
        let contracting = state.map.is_contracting();
        let case = if contracting {
            ExpandingCase::Case2a
        } else {
            case
        };
        if !contracting && expanding(&state.map) > before {
            return Err(RauzyError::InvariantViolated(
                "expanding factor increased".into(),
            ));
        }
        steps.push(InductionStep {
            kind,
            exponents: state.exponents,
            matrix: state.matrix.clone(),
            domain_before,
            case: Some(case),
        });
        if contracting {
            if run > 0 {
                case1_runs.push(run);
                run = 0;
            }
            let remaining = max_rounds - steps.len();
            let sub = run_plain(state.clone(), remaining)?;
            break Outcome::EnteredContracting(Box::new(sub));
        }
    };
    if run > 0 {
        case1_runs.push(run);
    }
    Ok(InductionTrace {
        initial,
        word,
        steps,
        outcome,
        state,
        case1_runs,
    })
}

/// Upper bound on the length of a forced-step run starting at `m`.
fn case1_bound<S: Scalar>(m: &RhoMap<S>, a_expands: bool) -> usize {
    let prod = m.rho_a.to_f64() * m.rho_b.to_f64();
    let shrink = if a_expands {
        m.rho_b.to_f64()
    } else {
        m.rho_a.to_f64()
    };
    if !(shrink > 0.0 && shrink < 1.0) || !prod.is_finite() {
        return usize::MAX;
    }
    (prod.ln() / -shrink.ln()).floor() as usize + 2
}

/// Dispatch on the factors: contracting, expanding, or (both ≥ 1) the plain
/// step loop, which never terminates for a translation.
pub fn induct_auto<S: Scalar>(
    t: &RhoMap<S>,
    max_steps: usize,
) -> Result<InductionTrace<S>, RauzyError> {
    let one = S::one();
    if t.is_contracting() {
        induct(t, max_steps)
    } else if (t.rho_a >= one) != (t.rho_b >= one) {
        modified_induct(t, max_steps)
    } else {
        check_nondegenerate(t)?;
        run_plain(InductionState::start(t), max_steps)
    }
}

/// Attracting cycle of the original map recovered from a terminated trace.
#[derive(Debug, Clone)]
pub struct PeriodicOrbit<S> {
    /// Cycle points starting at the fixed point of the terminal return map.
    pub points: Vec<S>,
    pub period: usize,
    /// Derivative of the first-return map around the cycle.
    pub multiplier: S,
    /// Some cycle point is the breakpoint (the orbit is critical).
    pub critical: bool,
    /// Exponent state at termination.
    pub exponents: ExponentState,
}

/// Visit the original-map branches along the itinerary of a current piece.
pub fn visit_itinerary(history: &Word, piece: Branch, mut visit: impl FnMut(Branch)) {
    let mut stack = vec![(history.len(), piece)];
    while let Some((level, p)) = stack.pop() {
        if level == 0 {
            visit(p);
            continue;
        }
        let below = level - 1;
        match (history.letters()[below], p) {
            (Letter::R, Branch::A) | (Letter::L, Branch::B) => stack.push((below, p)),
            (Letter::R, Branch::B) => {
                stack.push((below, Branch::B));
                stack.push((below, Branch::A));
            }
            (Letter::L, Branch::A) => {
                stack.push((below, Branch::A));
                stack.push((below, Branch::B));
            }
        }
    }
}

/// Unwind the terminal return map's fixed point into a cycle of the
/// original map.
pub fn terminal_orbit<S: Scalar>(
    trace: &InductionTrace<S>,
) -> Result<PeriodicOrbit<S>, RauzyError> {
    let inner = trace.innermost();
    if !matches!(inner.outcome, Outcome::Terminated) {
        return Err(RauzyError::NotTerminated);
    }
    let st = &inner.state;
    let m = &st.map;
    let fa = m.rho_a.clone();
    let fb = m.rho_b.clone();
    let prod = fa.clone() * fb.clone();
    if prod >= S::one() {
        // ties of a non-contracting map (e.g. a translation): no attracting cycle
        return Err(RauzyError::NotTerminated);
    }
    let (lo, hi, x) = (m.lo().clone(), m.hi().clone(), m.x_t.clone());
    let p = (lo + fb.clone() * (hi - x.clone()) - prod.clone() * x) / (S::one() - prod.clone());

    let (ta, tb) = st.return_times();
    let period = ta.saturating_add(tb);
    if period > MAX_LISTED_PERIOD {
        return Err(RauzyError::PeriodTooLong(period));
    }
    let origin = &st.origin;
    let len = origin.len();
    let mut points = Vec::with_capacity(period as usize);
    let mut y = p;
    let mut critical = false;
    let mut step = |b: Branch| {
        if eq_tol(&y, &origin.x_t, &len) {
            critical = true;
        }
        points.push(y.clone());
        y = origin.eval_branch(&y, b);
    };
    visit_itinerary(&st.history, Branch::A, &mut step);
    visit_itinerary(&st.history, Branch::B, &mut step);
    Ok(PeriodicOrbit {
        points,
        period: period as usize,
        multiplier: prod,
        critical,
        exponents: st.exponents,
    })
}
