//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero when a
//! criterion fails that is not listed in `KNOWN_FAILURES`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{q, rng, rq, Q};
use dilaflow::aiet::{injectivity_domain, RhoMap};
use dilaflow::limitset::{classify_tail, fn_profile, fn_value, omega_cover, TailKind};
use dilaflow::paramspace::*;
use dilaflow::rauzy::*;
use dilaflow::scalar::{Interval, Scalar};
use dilaflow::torus::*;
use rand::Rng;

/// Criteria that fail as specified; the reasons are in the README.
const KNOWN_FAILURES: &[usize] = &[5];

type Verdict = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let e = start.elapsed();
    check(e <= limit, || format!("runtime {e:.1?} over {limit:?}"))
}

fn half() -> Q {
    q("1/2")
}

fn c1() -> Verdict {
    let t0 = Instant::now();
    let h = half();
    check(
        interval_h(&Word::default(), &h, &h) == Interval::closed(q("1/3"), q("2/3")),
        || "H(empty)".into(),
    )?;
    check(
        interval_i(&"R".parse().unwrap(), &h, &h) == Interval::closed(q("2/3"), q("1")),
        || "I(R)".into(),
    )?;
    let t = RhoMap::unit(h.clone(), h.clone(), h.clone()).unwrap();
    let o =
        terminal_orbit(&induct(&t, 60).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mut pts = o.points.clone();
    pts.sort();
    check(
        pts == vec![q("1/6"), q("5/6")] && o.multiplier == q("1/4"),
        || "terminal orbit".into(),
    )?;
    for n in 0..=20 {
        let want = Q::one() - h.pow_int(n as i64 + 1);
        check(fn_value(&t, n).0 == want, || format!("f_{n}"))?;
    }
    within(Duration::from_secs(1), t0)?;
    Ok(format!("exact identities hold ({:.0?})", t0.elapsed()))
}

fn matrix_checks(m: &LengthMatrix<Q>, rho: &Q) -> bool {
    let zero = Q::zero();
    let s = (m.a.clone() - m.b.clone()) / (m.d.clone() - m.c.clone());
    m.a >= zero
        && m.d >= zero
        && m.b <= zero
        && m.c <= zero
        && m.det() >= zero
        && Q::one() - rho.clone() < s
        && s < Q::one() / (Q::one() - rho.clone())
}

fn c2() -> Verdict {
    let t0 = Instant::now();
    let h = half();
    // every word of length ≤ 12, walked depth-first
    let mut stack = vec![(
        Word::default(),
        LengthMatrix::<Q>::identity(),
        h.clone(),
        h.clone(),
    )];
    let mut words = 0usize;
    while let Some((w, m, fa, fb)) = stack.pop() {
        if !w.is_empty() {
            words += 1;
            check(matrix_checks(&m, &h), || format!("word {w}"))?;
        }
        if w.len() == 12 {
            continue;
        }
        for l in [Letter::L, Letter::R] {
            let next = LengthMatrix::step(l, &fa, &fb).mul(&m);
            let (na, nb) = match l {
                Letter::R => (fa.clone(), fa.clone() * fb.clone()),
                Letter::L => (fa.clone() * fb.clone(), fb.clone()),
            };
            stack.push((w.with(l), next, na, nb));
        }
    }
    let mut r = rng(101);
    for _ in 0..100 {
        let (a, b) = (rq(&mut r, 1, 99, 100), rq(&mut r, 1, 99, 100));
        let rho = Q::max_of(&a, &b);
        let len = r.gen_range(1..=8);
        let mut w = Word::default();
        for _ in 0..len {
            w.push(if r.gen() { Letter::L } else { Letter::R });
            let (m, _) = LengthMatrix::for_word(&w, &a, &b);
            check(matrix_checks(&m, &rho), || format!("({a}, {b}) word {w}"))?;
        }
    }
    within(Duration::from_secs(30), t0)?;
    Ok(format!(
        "{words} words at 1/2 plus 100 random pairs ({:.1?})",
        t0.elapsed()
    ))
}

const C3_DEPTH: usize = 12;

fn c3() -> Verdict {
    let t0 = Instant::now();
    let h = half();
    let rep = enumerate_cells_capped(&h, &h, C3_DEPTH, C3_DEPTH).map_err(|e| e.to_string())?;
    for p in rep.levels.windows(2) {
        check(p[1].complement_measure < p[0].complement_measure, || {
            format!("complement not decreasing at depth {}", p[1].depth)
        })?;
    }
    let below = rep
        .levels
        .iter()
        .find(|l| l.complement_measure < q("1/20"))
        .map(|l| l.depth)
        .ok_or("complement never below 0.05")?;
    let delta = rep.delta_bound.clone().ok_or("no delta bound")?;
    let mut checked = 0;
    for c in rep.cells.iter().filter(|c| c.word.len() > rep.n_threshold) {
        check(c.h_w.length() / c.i_w.length() >= delta, || {
            format!("ratio below delta at {}", c.word)
        })?;
        checked += 1;
    }
    within(Duration::from_secs(120), t0)?;
    Ok(format!(
        "complement < 0.05 from depth {below}; {checked} words beyond N = {} meet delta = {:.4} ({:.1?})",
        rep.n_threshold,
        delta.to_f64(),
        t0.elapsed()
    ))
}

/// Distance from `x` to the nearest point of a sorted cycle.
fn dist_to(sorted: &[f64], x: f64) -> f64 {
    let i = sorted.partition_point(|p| *p < x);
    let mut d = f64::MAX;
    if i < sorted.len() {
        d = d.min(sorted[i] - x);
    }
    if i > 0 {
        d = d.min(x - sorted[i - 1]);
    }
    d
}

fn c4() -> Verdict {
    let t0 = Instant::now();
    let mut r = rng(103);
    let (mut triples, mut draws, mut max_iter) = (0, 0, 0usize);
    while triples < 100 {
        draws += 1;
        let t = RhoMap::unit(
            rq(&mut r, 300, 900, 1000),
            rq(&mut r, 300, 900, 1000),
            rq(&mut r, 1, 999, 1000),
        )
        .unwrap();
        let tr = induct(&t, 60).map_err(|e| e.to_string())?;
        if !tr.terminated() {
            continue;
        }
        let o = terminal_orbit(&tr).map_err(|e| format!("{t}: {e}"))?;
        triples += 1;
        let mut cyc: Vec<f64> = o.points.iter().map(|p| p.to_f64()).collect();
        cyc.sort_by(f64::total_cmp);
        let tf = t.to_f64();
        for _ in 0..3 {
            let mut x: f64 = r.gen_range(0.0..1.0);
            let mut hit = None;
            for i in 0..100_000 {
                if dist_to(&cyc, x) < 1e-8 {
                    hit = Some(i);
                    break;
                }
                x = match tf.eval(&x) {
                    Ok(y) => y,
                    Err(_) if o.critical => {
                        hit = Some(i);
                        break;
                    }
                    Err(e) => return Err(format!("{t}: {e}")),
                };
            }
            let i = hit.ok_or_else(|| format!("{t}: no convergence from a random start"))?;
            // stays on the cycle for two more periods
            for _ in 0..2 * o.period {
                if o.critical {
                    break;
                }
                x = tf.eval(&x).map_err(|e| e.to_string())?;
                check(dist_to(&cyc, x) < 1e-8, || format!("{t}: left the cycle"))?;
            }
            max_iter = max_iter.max(i);
        }
    }
    within(Duration::from_secs(60), t0)?;
    Ok(format!(
        "100 terminating triples ({draws} draws), 300 starts, slowest convergence {max_iter} steps ({:.1?})",
        t0.elapsed()
    ))
}

fn c5() -> Verdict {
    let t0 = Instant::now();
    let p = fn_profile(&0.9f64, &0.8f64, 9, 2000).map_err(|e| e.to_string())?;
    let v = &p.values;
    check(v.iter().all(|x| (0.0..=1.0).contains(x)), || {
        "value outside [0, 1]".into()
    })?;
    for (i, w) in v.windows(2).enumerate() {
        check(w[1] <= w[0] + 1e-9, || {
            format!("increase at grid index {i}")
        })?;
    }
    let cells = v.len() - 1;
    let kinks = v
        .windows(3)
        .filter(|w| (w[2] - 2.0 * w[1] + w[0]).abs() > 1e-9)
        .count();
    let frac = kinks as f64 / cells as f64;
    within(Duration::from_secs(30), t0)?;
    let msg = format!(
        "nonincreasing, in [0, 1]; nonzero second differences at {kinks} of {cells} cells ({:.2}%) ({:.1?})",
        100.0 * frac,
        t0.elapsed()
    );
    if frac < 0.05 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c6() -> Verdict {
    let t0 = Instant::now();
    let (a, b) = (q("6/5"), half());
    let j = injectivity_domain(&a, &b).ok_or("no injectivity domain")?;
    check(
        j.lo == Q::zero() && j.hi == q("5/7") && !j.lo_open && j.hi_open,
        || format!("J = {j}"),
    )?;
    let ws = expanding_partition(&a, &b, 10).map_err(|e| e.to_string())?;
    let ratio = a.clone() / (Q::one() + a.clone());
    let mut rounds = 0;
    for n in 1..=10 {
        let Some(res) = ws
            .iter()
            .find(|w| w.round == n && w.kind == WindowKind::Continue2c)
        else {
            break;
        };
        check(
            res.interval.length() <= ratio.pow_int(n as i64) * j.length(),
            || format!("round {n} residual"),
        )?;
        rounds = n;
    }
    let mut r = rng(107);
    let mut runs = 0usize;
    let mut longest = 0usize;
    for i in 0..1000 {
        let big = rq(&mut r, 101, 400, 100);
        let small = rq(&mut r, 10, 95, 100);
        let (ra, rb) = if i % 2 == 0 {
            (big, small)
        } else {
            (small, big)
        };
        let dom = injectivity_domain(&ra, &rb).unwrap();
        let x = dom.lo.clone() + dom.length() * Q::ratio(r.gen_range(1..1000), 1000);
        let t = RhoMap::unit(ra, rb, x).unwrap();
        let tr = modified_induct(&t, 200).map_err(|e| format!("{t}: {e}"))?;
        let open_run = matches!(tr.outcome, Outcome::BudgetExhausted)
            && tr
                .steps
                .last()
                .map_or(false, |s| s.case == Some(ExpandingCase::Case1));
        check(!open_run, || {
            format!("{t}: forced run still open at the budget")
        })?;
        runs += tr.case1_runs.len();
        longest = longest.max(tr.case1_runs.iter().copied().max().unwrap_or(0));
    }
    within(Duration::from_secs(60), t0)?;
    Ok(format!(
        "J = [0, 5/7); residual bound holds for {rounds} rounds; {runs} forced runs, longest {longest} ({:.1?})",
        t0.elapsed()
    ))
}

fn c2_witness() -> RhoMap<Q> {
    let h = half();
    let x = witness_for_word(&h, &h, &block_word(19, 44)).expect("nonempty cell");
    RhoMap::unit(h.clone(), h, x).unwrap()
}

fn c7() -> Verdict {
    let t0 = Instant::now();
    let t = c2_witness();
    let tail = classify_tail(&t, 40).map_err(|e| e.to_string())?;
    check(
        tail.kind == TailKind::InfiniteBoth && tail.depth == 40,
        || format!("tail {} at {}", tail.kind, tail.depth),
    )?;
    let cover = omega_cover(&t, 30).map_err(|e| e.to_string())?;
    check(cover.measure < q("1/100"), || {
        format!("cover measure {}", cover.measure.to_f64())
    })?;
    let mut x = q("1/10");
    for _ in 0..100 {
        x = t.eval(&x).map_err(|e| e.to_string())?;
    }
    for i in 0..1000 {
        check(cover.contains(&x), || {
            format!("orbit point {i} outside the cover")
        })?;
        x = t.eval(&x).map_err(|e| e.to_string())?;
    }
    within(Duration::from_secs(60), t0)?;
    Ok(format!(
        "infinite-both at depth 40; cover measure {:.2e} over {} intervals ({:.1?})",
        cover.measure.to_f64(),
        cover.cover.len(),
        t0.elapsed()
    ))
}

const PENTAGON: [(&str, &str); 5] = [
    ("1", "0"),
    ("9/4", "0"),
    ("57/20", "2"),
    ("3/5", "2"),
    ("3/10", "1"),
];

fn same_direction(a: &Point<Q>, b: &Point<Q>) -> bool {
    a.cross(b).is_zero() && a.dot(b) > Q::zero()
}

fn unresolved(rows: &[GridRow]) -> usize {
    rows.iter()
        .filter(|r| r.label == "unresolved" || r.error.is_some())
        .count()
}

fn c8() -> Verdict {
    let t0 = Instant::now();
    let me: PolygonModel<Q> = PolygonModel::test_pentagon();
    let mf: PolygonModel<f64> = PolygonModel::test_pentagon();
    let raw: RawModel =
        serde_json::from_str(PolygonModel::<Q>::builtin_json()).map_err(|e| e.to_string())?;
    validate_model::<Q>(&raw).map_err(|e| e.to_string())?;

    let v: Vec<Point<Q>> = PENTAGON
        .iter()
        .map(|(x, y)| Point::new(q(x), q(y)))
        .collect();
    let expected = [
        &v[0] - &v[4],
        &v[3] - &v[0],
        &v[2] - &v[1],
        &v[1] - &v[0],
        &v[1] - &v[4],
    ];
    let dec = sector_decomposition(&me);
    check(same_direction(&dec.m_b, &expected[0]), || "m_B".into())?;
    for k in 1..5 {
        check(same_direction(&dec.boundaries[k], &expected[k]), || {
            format!("boundary {k}")
        })?;
    }

    let decf = sector_decomposition(&mf);
    let mut r = rng(109);
    let mut sampled = 0;
    match first_return_map(&me, &dec.m_b)
        .map_err(|e| e.to_string())?
        .outcome
    {
        FirstReturnOutcome::Bijective(_) => sampled += 1,
        o => return Err(format!("m_B gave {}", o.tag())),
    }
    for s in Sector::OPEN {
        let (lo, hi) = decf.angle_range(s);
        for _ in 0..200 {
            let phi = r.gen_range(lo..hi);
            let d = direction_at_angle(&mf, phi);
            let fr = first_return_map(&mf, &d).map_err(|e| format!("{s} at {phi}: {e}"))?;
            let ok = match (&s, &fr.outcome) {
                (
                    Sector::I2 | Sector::I4,
                    FirstReturnOutcome::CylinderContraction { multiplier, .. },
                ) => *multiplier > 0.0 && *multiplier < 1.0,
                (Sector::I3, FirstReturnOutcome::RhoMap { map, .. }) => {
                    map.rho_a < 1.0 && map.rho_b < 1.0
                }
                (Sector::I1 | Sector::I5, FirstReturnOutcome::RhoMap { .. }) => true,
                _ => false,
            };
            check(ok, || format!("{s} at {phi}: {}", fr.outcome.tag()))?;
            sampled += 1;
        }
    }

    let g40 = classify_grid(&mf, 10_000, 40);
    let g80 = classify_grid(&mf, 10_000, 80);
    let (u40, u80) = (unresolved(&g40), unresolved(&g80));
    check(u40 * 50 <= g40.len(), || {
        format!("{u40} unresolved at budget 40")
    })?;
    check(2 * u80 <= u40, || {
        format!("unresolved {u40} -> {u80} when the budget doubles")
    })?;

    // suspended periodic trajectories of terminating directions
    let mut worst = 0.0f64;
    let mut closed = 0;
    for (dx, dy) in [(1, 1), (2, 3), (3, 2), (4, 3), (5, 7), (3, 4)] {
        let de = Point::new(Q::from_i64(dx), Q::from_i64(dy));
        if dec.locate(&de) != SectorLocation::Inside(Sector::I3) {
            continue;
        }
        let fr =
            first_return_map(&mf, &Point::new(dx as f64, dy as f64)).map_err(|e| e.to_string())?;
        let map = fr.outcome.rho_map().ok_or("no rho map")?.clone();
        let trace = induct_auto(&map, 48).map_err(|e| e.to_string())?;
        if !trace.terminated() {
            continue;
        }
        let orbit = terminal_orbit(&trace).map_err(|e| e.to_string())?;
        let start = fr.transversal_point(&mf, &orbit.points[0]);
        let opts = TraceOptions {
            max_crossings: 10_000,
            transversal: Some(fr.transversal),
            max_returns: orbit.period,
        };
        let tr =
            trace_geodesic_with(&mf, &start, &fr.direction, &opts).map_err(|e| e.to_string())?;
        let end = tr.segments.last().ok_or("empty trace")?.1.clone();
        let d = (end.x - start.x).hypot(end.y - start.y);
        worst = worst.max(d);
        closed += 1;
    }
    check(closed > 0, || "no terminating direction found".into())?;
    check(worst < 1e-8, || {
        format!("suspended orbit misses by {worst:e}")
    })?;
    within(Duration::from_secs(300), t0)?;
    Ok(format!(
        "{sampled} sampled directions match; unresolved {u40} -> {u80} of 10000; {closed} suspended orbits close within {worst:.1e} ({:.1?})",
        t0.elapsed()
    ))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn c9() -> Verdict {
    let t0 = Instant::now();
    let mut compared = 0usize;
    // criterion 1 quantities
    let tq = RhoMap::unit(half(), half(), half()).unwrap();
    let tf = tq.to_f64();
    for n in 0..=20 {
        check(
            close(fn_value(&tq, n).0.to_f64(), fn_value(&tf, n).0),
            || format!("f_{n}"),
        )?;
        compared += 1;
    }
    for w in ["", "R", "L", "RL", "LLR"] {
        let w: Word = w.parse().unwrap();
        let (ce, cf) = (word_cell(&w, &half(), &half()), word_cell(&w, &0.5, &0.5));
        for (x, y) in [(&ce.i_w, &cf.i_w), (&ce.h_w, &cf.h_w)] {
            check(
                close(x.lo.to_f64(), y.lo) && close(x.hi.to_f64(), y.hi),
                || format!("cell {w}"),
            )?;
            compared += 2;
        }
    }
    // criterion 2: matrices of random words
    let mut r = rng(113);
    for _ in 0..200 {
        let (a, b) = (rq(&mut r, 30, 95, 100), rq(&mut r, 30, 95, 100));
        let len = r.gen_range(1..=12);
        let w = Word(
            (0..len)
                .map(|_| if r.gen() { Letter::L } else { Letter::R })
                .collect(),
        );
        let (me, _) = LengthMatrix::for_word(&w, &a, &b);
        let (mf, _) = LengthMatrix::for_word(&w, &a.to_f64(), &b.to_f64());
        let scale = me.a.to_f64().abs().max(me.d.to_f64().abs()).max(1.0);
        for (x, y) in [(&me.a, mf.a), (&me.b, mf.b), (&me.c, mf.c), (&me.d, mf.d)] {
            check((x.to_f64() - y).abs() <= 1e-9 * scale, || {
                format!("matrix of {w}")
            })?;
            compared += 1;
        }
    }
    // criterion 3: level measures through depth 12
    let re =
        enumerate_cells_capped(&half(), &half(), C3_DEPTH, C3_DEPTH).map_err(|e| e.to_string())?;
    let rf = enumerate_cells_capped(&0.5, &0.5, C3_DEPTH, C3_DEPTH).map_err(|e| e.to_string())?;
    for (le, lf) in re.levels.iter().zip(&rf.levels) {
        check(
            close(le.complement_measure.to_f64(), lf.complement_measure),
            || {
                format!(
                    "complement at depth {}: {} vs {}",
                    le.depth,
                    le.complement_measure.to_f64(),
                    lf.complement_measure
                )
            },
        )?;
        compared += 1;
    }
    // criterion 4: words and cycles
    let mut r = rng(127);
    for _ in 0..100 {
        let t = RhoMap::unit(
            rq(&mut r, 300, 900, 1000),
            rq(&mut r, 300, 900, 1000),
            rq(&mut r, 1, 999, 1000),
        )
        .unwrap();
        let (ae, af) = (induct(&t, 20).unwrap(), induct(&t.to_f64(), 20).unwrap());
        check(ae.word == af.word, || {
            format!("{t}: words {} vs {}", ae.word, af.word)
        })?;
        if let (Ok(oe), Ok(of)) = (terminal_orbit(&ae), terminal_orbit(&af)) {
            for (x, y) in oe.points.iter().zip(&of.points) {
                check(close(x.to_f64(), *y), || format!("{t}: cycle"))?;
            }
            compared += oe.points.len();
        }
        compared += 1;
    }
    // criterion 6: partition windows
    let we = expanding_partition(&q("6/5"), &half(), 10).unwrap();
    let wf = expanding_partition(&1.2, &0.5, 10).unwrap();
    check(we.len() == wf.len(), || "window counts".into())?;
    for (x, y) in we.iter().zip(&wf) {
        check(
            x.kind == y.kind && close(x.interval.lo.to_f64(), y.interval.lo),
            || "window".into(),
        )?;
        compared += 1;
    }
    // criterion 7: the witness tail and cover through depth 20
    let t = c2_witness();
    let tf = t.to_f64();
    // deepest budget whose next step is still decided by a margin above
    // float resolution
    let w = block_word(19, 44);
    let d = (1..=20)
        .rev()
        .find(|&d| {
            interval_i(&Word(w.0[..d + 1].to_vec()), &half(), &half())
                .length()
                .to_f64()
                > 1e-9
        })
        .unwrap_or(1);
    check(
        induct(&t, d).unwrap().word == induct(&tf, d).unwrap().word,
        || format!("words at depth {d}"),
    )?;
    let (ke, kf) = (
        classify_tail(&t, d).unwrap(),
        classify_tail(&tf, d).unwrap(),
    );
    check(ke == kf, || {
        format!("tail at depth {d}: {} vs {}", ke.kind, kf.kind)
    })?;
    check(
        close(fn_value(&tf, 20).0, fn_value(&t, 20).0.to_f64()),
        || "witness f_20".into(),
    )?;
    compared += 2;
    // criterion 8: first returns
    let me: PolygonModel<Q> = PolygonModel::test_pentagon();
    let mf: PolygonModel<f64> = PolygonModel::test_pentagon();
    for (dx, dy) in [(1, 1), (-1, 1), (2, 1), (1, 5), (-3, 1), (7, -10), (5, 2)] {
        let fe = first_return_map(&me, &Point::new(Q::from_i64(dx), Q::from_i64(dy)))
            .map_err(|e| e.to_string())?;
        let ff =
            first_return_map(&mf, &Point::new(dx as f64, dy as f64)).map_err(|e| e.to_string())?;
        check(
            fe.outcome.tag() == ff.outcome.tag() && fe.pieces.len() == ff.pieces.len(),
            || format!("first return ({dx}, {dy})"),
        )?;
        for (a, b) in fe.pieces.iter().zip(&ff.pieces) {
            check(
                close(a.alpha.to_f64(), b.alpha) && close(a.beta.to_f64(), b.beta),
                || format!("first return piece ({dx}, {dy})"),
            )?;
            compared += 1;
        }
    }
    Ok(format!(
        "{compared} quantities agree to 1e-9 ({:.1?})",
        t0.elapsed()
    ))
}

fn main() {
    let criteria: [(usize, fn() -> Verdict); 9] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
    ];
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let known = KNOWN_FAILURES.contains(&n);
        match &res {
            Ok(msg) => println!("criterion {n}: PASS  {msg}"),
            Err(msg) => println!(
                "criterion {n}: FAIL  {msg}{}",
                if known { "  [known]" } else { "" }
            ),
        }
        if res.is_err() != known {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
