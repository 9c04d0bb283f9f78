mod common;

use common::{q, rng, rq, Q};
use dilaflow::aiet::{orbit, RhoMap};
use dilaflow::paramspace::{block_word, interval_h, witness_for_word};
use dilaflow::rauzy::*;
use dilaflow::scalar::Scalar;
use rand::Rng;

fn unit(a: &str, b: &str, x: &str) -> RhoMap<Q> {
    RhoMap::unit(q(a), q(b), q(x)).unwrap()
}

/// First return of `x` to `[lo, hi]` under the original map.
fn first_return(t: &RhoMap<Q>, lo: &Q, hi: &Q, x: &Q) -> Q {
    let mut y = t.eval(x).unwrap();
    for _ in 0..100_000 {
        if *lo <= y && y <= *hi {
            return y;
        }
        y = t.eval(&y).unwrap();
    }
    panic!("no return within budget");
}

/// Read the return map on `[lo, hi]` off brute-force returns: the slope
/// on the left piece, the slope on the right piece, and the breakpoint
/// where the left piece reaches the right end.
fn literal_return_map(t: &RhoMap<Q>, lo: &Q, hi: &Q) -> (Q, Q, Q) {
    let len = hi.clone() - lo.clone();
    let eps = len.clone() / Q::from_i64(1 << 30);
    let two = Q::from_i64(2);
    let a1 = lo.clone() + eps.clone();
    let y1 = first_return(t, lo, hi, &a1);
    let y2 = first_return(t, lo, hi, &(lo.clone() + two.clone() * eps.clone()));
    let fa = (y2 - y1.clone()) / eps.clone();
    let x_t = a1 + (hi.clone() - y1) / fa.clone();
    let z1 = first_return(t, lo, hi, &(hi.clone() - eps.clone()));
    let z2 = first_return(t, lo, hi, &(hi.clone() - two * eps.clone()));
    let fb = (z1 - z2) / eps;
    (fa, fb, x_t)
}

/// Induction word built only from brute-force first returns.
fn literal_word(t: &RhoMap<Q>, depth: usize) -> String {
    let (mut lo, mut hi) = (t.lo().clone(), t.hi().clone());
    let mut w = String::new();
    let (mut fa, mut fb, mut x) = (t.rho_a.clone(), t.rho_b.clone(), t.x_t.clone());
    for _ in 0..depth {
        let la = x.clone() - lo.clone();
        let lb = hi.clone() - x.clone();
        if lb < fa.clone() * la.clone() {
            w.push('R');
            hi = x.clone();
        } else if la < fb.clone() * lb {
            w.push('L');
            lo = x.clone();
        } else {
            break;
        }
        (fa, fb, x) = literal_return_map(t, &lo, &hi);
    }
    w
}

#[test]
fn classify_step_examples() {
    assert_eq!(
        classify_step(&unit("1/2", "1/2", "4/5")).unwrap(),
        StepKind::Right
    );
    assert_eq!(
        classify_step(&unit("1/2", "1/2", "1/10")).unwrap(),
        StepKind::Left
    );
    assert_eq!(
        classify_step(&unit("1/2", "1/2", "1/2")).unwrap(),
        StepKind::Terminate
    );
    // picture check: B strictly inside T(A) for a right step
    let t = unit("1/2", "1/2", "4/5");
    let (ta, _, _) = t.image_intervals();
    assert!(ta.lo < t.x_t);
}

#[test]
fn apply_step_example() {
    let t = unit("1/2", "1/2", "4/5");
    let (m, e) = apply_step(&t, &ExponentState::initial(), StepKind::Right).unwrap();
    assert_eq!((m.lambda_a(), m.lambda_b()), (q("2/5"), q("2/5")));
    assert_eq!((m.rho_a.clone(), m.rho_b.clone()), (q("1/2"), q("1/4")));
    assert_eq!(m.rescale_to_unit().unwrap().x_t, q("1/2"));
    assert_eq!((e.m_a, e.m_b, e.n_a, e.n_b), (1, 0, 1, 1));
    assert!(matches!(
        apply_step(&t, &ExponentState::initial(), StepKind::Left),
        Err(RauzyError::InvalidStep { .. })
    ));
    // the literal return map on the cut domain agrees
    let (fa, fb, x) = literal_return_map(&t, &q("0"), &q("4/5"));
    assert_eq!((fa, fb, x), (m.rho_a, m.rho_b, m.x_t));
}

#[test]
fn matrices_and_exponents() {
    let h = q("1/2");
    let (m, _) = LengthMatrix::for_word(&"R".parse().unwrap(), &h, &h);
    assert_eq!((m.a, m.b, m.c, m.d), (q("1"), q("-2"), q("0"), q("2")));
    let e = ExponentState::from_word(&"RL".parse().unwrap());
    assert_eq!(((e.m_a, e.m_b), (e.n_a, e.n_b)), ((2, 1), (1, 1)));
}

#[test]
fn induct_examples() {
    let tr = induct(&unit("1/2", "1/2", "1/2"), 60).unwrap();
    assert!(tr.word.is_empty() && tr.terminated());

    let tr = induct(&unit("1/2", "1/2", "4/5"), 60).unwrap();
    assert!(tr.word.to_string().starts_with('R'));
    assert!(tr.terminated() && tr.word.len() <= 3);

    let w = block_word(19, 62);
    let x = witness_for_word(&q("1/2"), &q("1/2"), &w).unwrap();
    let tr = induct(&RhoMap::unit(q("1/2"), q("1/2"), x).unwrap(), 60).unwrap();
    assert_eq!(tr.outcome_tag(), "budget-exhausted");
    assert_eq!(tr.word.len(), 60);
    assert_eq!(tr.word.to_string(), w.to_string()[..60]);
}

#[test]
fn degenerate_and_wrong_regime() {
    assert_eq!(
        induct(&unit("9/10", "4/5", "0"), 10).unwrap_err(),
        RauzyError::DegenerateInput
    );
    assert!(matches!(
        induct(&unit("3/2", "1/2", "1/10"), 10),
        Err(RauzyError::NotContracting(..))
    ));
}

#[test]
fn domains_nest() {
    let mut r = rng(3);
    for _ in 0..200 {
        let t = RhoMap::unit(
            rq(&mut r, 20, 95, 100),
            rq(&mut r, 20, 95, 100),
            rq(&mut r, 1, 999, 1000),
        )
        .unwrap();
        let tr = induct(&t, 30).unwrap();
        let mut prev = t.domain.clone();
        for s in &tr.steps {
            assert!(s.domain_before.within(&prev));
            prev = s.domain_before.clone();
        }
        assert!(tr.final_map().domain.within(&prev));
        assert_eq!(tr.word.len(), tr.steps.len());
    }
}

#[test]
fn word_matches_literal_first_returns() {
    let mut r = rng(5);
    for _ in 0..40 {
        let t = RhoMap::unit(
            rq(&mut r, 30, 90, 100),
            rq(&mut r, 30, 90, 100),
            rq(&mut r, 1, 999, 1000),
        )
        .unwrap();
        let tr = induct(&t, 10).unwrap();
        assert_eq!(tr.word.to_string(), literal_word(&t, tr.word.len().min(10)));
    }
}

#[test]
fn step_conjugacy() {
    let mut r = rng(7);
    let mut points = 0;
    while points < 1000 {
        let t = RhoMap::unit(
            rq(&mut r, 30, 90, 100),
            rq(&mut r, 30, 90, 100),
            rq(&mut r, 1, 999, 1000),
        )
        .unwrap();
        let tr = induct(&t, 4).unwrap();
        if tr.word.is_empty() {
            continue;
        }
        let cur = tr.final_map();
        let (lo, hi) = (cur.lo().clone(), cur.hi().clone());
        for _ in 0..50 {
            let x =
                lo.clone() + (hi.clone() - lo.clone()) * Q::ratio(r.gen_range(1..10_000), 10_000);
            if x == cur.x_t {
                continue;
            }
            assert_eq!(first_return(&t, &lo, &hi, &x), cur.eval(&x).unwrap());
            points += 1;
        }
    }
}

#[test]
fn current_factors_follow_exponents() {
    let (a, b) = (q("3/5"), q("4/7"));
    let t = RhoMap::unit(a.clone(), b.clone(), q("5/11")).unwrap();
    let tr = induct(&t, 20).unwrap();
    let e = tr.state.exponents;
    assert_eq!(tr.final_map().rho_a, e.factor_a(&a, &b));
    assert_eq!(tr.final_map().rho_b, e.factor_b(&a, &b));
}

#[test]
fn terminal_orbit_examples() {
    let o = terminal_orbit(&induct(&unit("1/2", "1/2", "1/2"), 60).unwrap()).unwrap();
    let mut pts = o.points.clone();
    pts.sort();
    assert_eq!(pts, vec![q("1/6"), q("5/6")]);
    assert_eq!((o.period, o.multiplier.clone()), (2, q("1/4")));
    assert!(!o.critical);

    // brute force from 20 starts
    let tf = unit("1/2", "1/2", "1/2").to_f64();
    let mut r = rng(1);
    for _ in 0..20 {
        let x0: f64 = r.gen_range(0.0..1.0);
        let end = *orbit(&tf, &x0, 400).points.last().unwrap();
        assert!((end - 1.0 / 6.0).abs() < 1e-10 || (end - 5.0 / 6.0).abs() < 1e-10);
    }

    let t = unit("1/2", "1/2", "4/5");
    let tr = induct(&t, 60).unwrap();
    let o = terminal_orbit(&tr).unwrap();
    assert_eq!(o.points.len(), o.period);
    let e = o.exponents;
    let h = q("1/2");
    assert_eq!(
        o.multiplier,
        h.pow_int((e.m_a + e.n_a + e.m_b + e.n_b) as i64)
    );
    let mut y = o.points[0].clone();
    for _ in 0..o.period {
        y = t.eval(&y).unwrap();
    }
    assert_eq!(y, o.points[0]);
    let mut x = 0.05f64;
    let tf = t.to_f64();
    for _ in 0..2000 {
        x = tf.eval(&x).unwrap();
    }
    let d = o
        .points
        .iter()
        .map(|p| (p.to_f64() - x).abs())
        .fold(f64::MAX, f64::min);
    assert!(d < 1e-10);
}

#[test]
fn terminal_orbits_match_brute_force() {
    let mut r = rng(13);
    let mut done = 0;
    while done < 20 {
        let t = RhoMap::unit(
            rq(&mut r, 30, 90, 100),
            rq(&mut r, 30, 90, 100),
            rq(&mut r, 1, 999, 1000),
        )
        .unwrap();
        let Ok(o) = terminal_orbit(&induct(&t, 60).unwrap()) else {
            continue;
        };
        if o.period > 500 {
            continue;
        }
        let tf = t.to_f64();
        let mut x: f64 = r.gen_range(0.0..1.0);
        for _ in 0..20_000 {
            match tf.eval(&x) {
                Ok(y) => x = y,
                Err(_) => break,
            }
        }
        let d = o
            .points
            .iter()
            .map(|p| (p.to_f64() - x).abs())
            .fold(f64::MAX, f64::min);
        assert!(d < 1e-9, "{t}: distance {d}");
        done += 1;
    }
}

#[test]
fn translation_has_no_cycle() {
    let t = unit("1", "1", "1/3");
    let tr = induct_auto(&t, 20).unwrap();
    assert_eq!(terminal_orbit(&tr).unwrap_err(), RauzyError::NotTerminated);
}

#[test]
fn forced_left_run() {
    let t = unit("3", "1/2", "1/20");
    let tr = modified_induct(&t, 60).unwrap();
    // ρ_A(n) = 3·2^{-n}: forced left until the product drops below 1
    let letters = tr.word.to_string();
    assert!(letters.starts_with("LL"));
    let mut fa = q("3");
    for s in tr
        .steps
        .iter()
        .take_while(|s| s.case == Some(ExpandingCase::Case1))
    {
        assert_eq!(s.kind, StepKind::Left);
        fa = fa * q("1/2");
        assert_eq!(s.exponents.factor_a(&q("3"), &q("1/2")), fa);
    }
    assert!(!tr.case1_runs.is_empty());
}

#[test]
fn expanding_window_terminates() {
    // [ρ_B/(1+ρ_B), 1/(1+ρ_A)] = [1/3, 5/11]
    for x in ["1/3", "2/5", "5/11"] {
        let tr = modified_induct(&unit("6/5", "1/2", x), 40).unwrap();
        assert!(tr.terminated() && tr.word.is_empty(), "{x}");
    }
    assert_eq!(
        interval_h(&Default::default(), &q("6/5"), &q("1/2")),
        dilaflow::Interval::closed(q("1/3"), q("5/11"))
    );
    assert!(!modified_induct(&unit("6/5", "1/2", "3/10"), 40)
        .unwrap()
        .word
        .is_empty());
}

#[test]
fn modified_induct_factor_nonincreasing() {
    let mut r = rng(17);
    for _ in 0..300 {
        let a = rq(&mut r, 101, 400, 100);
        let b = rq(&mut r, 10, 90, 100);
        let end = (Q::one() - b.clone()) / (a.clone() - b.clone());
        let x = end * Q::ratio(r.gen_range(1..1000), 1000);
        let t = RhoMap::unit(a.clone(), b.clone(), x).unwrap();
        let tr = modified_induct(&t, 80).unwrap();
        let mut prev = a.clone();
        for s in &tr.steps {
            let fa = s.exponents.factor_a(&a, &b);
            assert!(fa <= prev);
            prev = fa;
        }
    }
}

#[test]
fn mirrored_expanding_case() {
    // ρ_B ≥ 1 mirrors ρ_A ≥ 1 under x ↦ 1 - x
    let t = unit("6/5", "1/2", "3/10");
    let m = unit("1/2", "6/5", "7/10");
    let a = modified_induct(&t, 30).unwrap();
    let b = modified_induct(&m, 30).unwrap();
    let flip: String = a
        .full_word()
        .to_string()
        .chars()
        .map(|c| if c == 'L' { 'R' } else { 'L' })
        .collect();
    assert_eq!(b.full_word().to_string(), flip);
}

#[test]
fn matrix_sign_and_ratio_bounds() {
    let mut r = rng(19);
    for _ in 0..100 {
        let (a, b) = (rq(&mut r, 5, 95, 100), rq(&mut r, 5, 95, 100));
        let rho = Q::max_of(&a, &b);
        let len = r.gen_range(1..=8);
        let w = Word(
            (0..len)
                .map(|_| if r.gen() { Letter::L } else { Letter::R })
                .collect(),
        );
        let mut cur = Word::default();
        for &l in w.letters() {
            cur.push(l);
            let (m, _) = LengthMatrix::for_word(&cur, &a, &b);
            let zero = Q::zero();
            assert!(m.a >= zero && m.d >= zero && m.b <= zero && m.c <= zero);
            assert!(m.det() >= zero);
            let s = (m.a.clone() - m.b.clone()) / (m.d.clone() - m.c.clone());
            assert!(Q::one() - rho.clone() < s && s < Q::one() / (Q::one() - rho.clone()));
        }
    }
}

#[test]
fn trace_json() {
    let tr = induct(&unit("1/2", "1/2", "4/5"), 60).unwrap();
    let v = tr.to_json();
    assert_eq!(v["outcome"], "terminated");
    assert_eq!(v["steps"][0]["kind"], "right");
    assert_eq!(v["steps"][0]["matrix"][1], "-2");
}
