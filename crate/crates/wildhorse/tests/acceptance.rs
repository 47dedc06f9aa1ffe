//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits non-zero only when a criterion fails that is not listed in
//! `KNOWN_INFEASIBLE` (those are explained in the README).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wildhorse::cantor::{gap_lemma_classify, interval_xi, linkage, thickness, GapStatus, LinkStatus};
use wildhorse::construction::*;
use wildhorse::core_map::{HorseshoeParams, Map, Point, TangencyParams};
use wildhorse::scalar::{rat, rat_to_f64, with_mp_precision, Mp, Rat, Scalar};
use wildhorse::statistics::*;
use wildhorse::symbolic::{decode_periodic, Affine, Bridge, Carrier, Interval, Kind, Word};

/// Double precision cannot carry a critical chain: see the README.
const KNOWN_INFEASIBLE: &[usize] = &[8];

/// Reference chain for the rectangle and statistics criteria.
const REF_FIRST: usize = 28;
const REF_WINDOW_EXP: usize = 2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn std_params() -> (HorseshoeParams, TangencyParams, Constants) {
    let hp = HorseshoeParams::standard();
    let c = Constants::new(&hp);
    (hp, TangencyParams::standard(), c)
}

fn build_chain(first: usize, points: usize, window_exp: usize, design: Option<&dyn Fn(&ChainSpec) -> CodeDesign>) -> CriticalChain {
    let (hp, tp, c) = std_params();
    let init = initial_linked_pair(&hp, &tp).expect("initial pair");
    let cfg = ChainConfig { first, points, window_exp, ..Default::default() };
    let g = linear_growth(&hp, &tp, &c, &init.pair, &rat(1, 1000), cfg.pairs_needed()).expect("growth");
    let mut spec = assemble_chain_spec(&hp, &tp, &c, &g, &cfg, &zero_design).expect("spec");
    if let Some(d) = design {
        spec = spec.with_vhats(&d(&spec).vhat).expect("design fits");
    }
    critical_chain(&hp, &tp, &c, &g, spec).expect("chain")
}

fn c1_thickness() -> Outcome {
    let t = Instant::now();
    let hp = HorseshoeParams::standard();
    let tp = TangencyParams::standard();
    let mr = Map::<Rat>::new(&hp, &tp);
    let mf = Map::<f64>::new(&hp, &tp);
    let mut ok = hp.tau_s() == rat(3, 4) && hp.tau_u() == rat(2, 1);
    for depth in 2..=10 {
        ok &= thickness(&mr, Kind::Stable, depth) == rat(3, 4);
        ok &= thickness(&mr, Kind::Unstable, depth) == rat(2, 1);
        ok &= (thickness(&mf, Kind::Stable, depth) - 0.75).abs() < 1e-9;
        ok &= (thickness(&mf, Kind::Unstable, depth) - 2.0).abs() < 1e-9;
    }
    let el = t.elapsed();
    outcome(ok && el < Duration::from_secs(1), format!("tau_s = 3/4, tau_u = 2 at depths 2..10 ({el:.2?})"))
}

fn c2_fixed_point() -> Outcome {
    let hp = HorseshoeParams::standard();
    let tp = TangencyParams::standard();
    let mr = Map::<Rat>::new(&hp, &tp);
    let p = Point::new(rat(-5, 6), rat(-5, 7));
    let exact = mr.eval_branch(&p) == Some(p.clone());
    let mf = Map::<f64>::new(&hp, &tp);
    let pf = p.to_f64();
    let f64_err = mf.eval_branch(&pf).map_or(f64::INFINITY, |q| q.dist(&pf));
    let mp_err = with_mp_precision(256, || {
        let mm = Map::<Mp>::new(&hp, &tp);
        let pm: Point<Mp> = p.to_backend();
        let q = mm.eval_branch(&pm).expect("in strip");
        ((q.x - pm.x.clone()).abs().to_f64()).max((q.y - pm.y).abs().to_f64())
    });
    let c = decode_periodic(&mf, &"01".parse().unwrap()).expect("decode");
    let back = mf.eval_branch(&c).and_then(|q| mf.eval_branch(&q)).map_or(f64::INFINITY, |q| q.dist(&c));
    let ok = exact && f64_err < 4.0 * f64::EPSILON && mp_err < 2f64.powi(-250) && back < 1e-12;
    outcome(ok, format!("exact={exact} f64 {f64_err:.1e} mp256 {mp_err:.1e}; period-2 round trip {back:.1e}"))
}

fn c3_distortion() -> Outcome {
    let t = Instant::now();
    let (hp, tp, c) = std_params();
    let mr = Map::<Rat>::new(&hp, &tp);
    let mf = Map::<f64>::new(&hp, &tp);
    let inv = |r: &Rat| Rat::ONE / r;
    let mut ok = true;
    let mut checked = 0usize;
    for (kind, carrier) in [
        (Kind::Stable, Carrier::Is),
        (Kind::Unstable, Carrier::Iu),
        (Kind::Stable, Carrier::L),
        (Kind::Unstable, Carrier::L),
    ] {
        let (lo, hi, exact) = match kind {
            Kind::Stable => (c.lambda_lo.clone(), c.lambda_hi.clone(), hp.lambda.clone()),
            Kind::Unstable => (inv(&c.sigma_hi), inv(&c.sigma_lo), inv(&hp.sigma)),
        };
        let (lo_f, hi_f) = (rat_to_f64(&lo), rat_to_f64(&hi));
        let mut level = vec![Bridge::new(&mr, kind, carrier, &Word::empty()).unwrap()];
        let mut level_f = vec![Bridge::new(&mf, kind, carrier, &Word::empty()).unwrap()];
        for _ in 0..12 {
            let mut next = Vec::with_capacity(2 * level.len());
            let mut next_f = Vec::with_capacity(2 * level.len());
            for (b, bf) in level.iter().zip(&level_f) {
                for (ch, chf) in b.children(&mr).into_iter().zip(bf.children(&mf)) {
                    let r = ch.len() / b.len();
                    let rf = chf.len() / bf.len();
                    ok &= r == exact && lo <= r && r <= hi && lo_f <= rf && rf <= hi_f;
                    checked += 1;
                    next.push(ch);
                    next_f.push(chf);
                }
            }
            level = next;
            level_f = next_f;
        }
    }
    let el = t.elapsed();
    outcome(ok && el < Duration::from_secs(5), format!("{checked} child/parent ratios to generation 12 ({el:.2?})"))
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    Word::new((0..n).map(|_| rng.gen_range(0..2u8)).collect())
}

fn leaves(map: &Map<Rat>, b: &Bridge<Rat>, depth: usize) -> Vec<Interval<Rat>> {
    let mut level = vec![b.clone()];
    for _ in 0..depth {
        level = level.iter().flat_map(|x| x.children(map)).collect();
    }
    level.into_iter().map(|x| x.interval).collect()
}

/// Oracle: hull(a) misses every depth-10 sub-bridge of b.
fn misses_all(hull: &Interval<Rat>, pieces: &[Interval<Rat>]) -> bool {
    pieces.iter().all(|p| !p.meets(hull))
}

fn any_pair_meets(a: &[Interval<Rat>], b: &[Interval<Rat>]) -> bool {
    // both lists are sorted left to right and disjoint internally
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i].meets(&b[j]) {
            return true;
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    false
}

fn c4_gap_lemma() -> Outcome {
    let t = Instant::now();
    let hp = HorseshoeParams::standard();
    let tp = TangencyParams::standard();
    let m = Map::<Rat>::new(&hp, &tp);
    let product = hp.tau_s() * hp.tau_u();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut counts = [0usize; 3];
    let mut disagree = 0usize;
    for _ in 0..1000 {
        let u = Bridge::new(&m, Kind::Unstable, Carrier::L, &random_word(&mut rng, 4)).unwrap();
        let mut s = Bridge::new(&m, Kind::Stable, Carrier::L, &random_word(&mut rng, 4)).unwrap();
        // move the stable set to a random spot over the unstable one
        let target = &u.interval.lo + &u.len() * rat(rng.gen_range(-200..=1200), 1000);
        let shift = Affine { a: Rat::ONE, b: target - s.interval.center() };
        s.aff = shift.after(&s.aff);
        s.interval = shift.image(&s.interval);
        let verdict = gap_lemma_classify(&m, &s, &u, 40);
        let (ls, lu) = (leaves(&m, &s, 10), leaves(&m, &u, 10));
        let first_in_gap = misses_all(&s.interval, &lu);
        let second_in_gap = misses_all(&u.interval, &ls);
        let meets = any_pair_meets(&ls, &lu);
        let agrees = match verdict {
            GapStatus::FirstInGapOfSecond => first_in_gap,
            GapStatus::SecondInGapOfFirst => second_in_gap && !first_in_gap,
            GapStatus::Intersect => !first_in_gap && !second_in_gap && meets,
            GapStatus::DepthExhausted => false,
        };
        match verdict {
            GapStatus::FirstInGapOfSecond => counts[0] += 1,
            GapStatus::SecondInGapOfFirst => counts[1] += 1,
            GapStatus::Intersect => counts[2] += 1,
            GapStatus::DepthExhausted => {}
        }
        if !agrees {
            disagree += 1;
        }
    }
    let el = t.elapsed();
    let ok = product > Rat::ONE && disagree == 0 && counts.iter().sum::<usize>() == 1000 && el < Duration::from_secs(30);
    outcome(ok, format!("counts (s in gap, u in gap, intersect) = {counts:?}, disagreements {disagree} ({el:.2?})"))
}

fn c5_initial_pair() -> Outcome {
    let t = Instant::now();
    let (hp, tp, _) = std_params();
    let Ok(init) = initial_linked_pair(&hp, &tp) else { return outcome(false, "no initial pair") };
    let el = t.elapsed();
    let ok = init.n0 == 5 && init.m0 == 4 && init.pair.is_linked() && init.pair.report.overlap > 0.0;
    outcome(
        ok && el < Duration::from_secs(1),
        format!("n0={} m0={} c={} overlap={:.3e} ({el:.2?})", init.n0, init.m0, rat_to_f64(&init.c), init.pair.report.overlap),
    )
}

fn c6_linking() -> Outcome {
    let t = Instant::now();
    let (hp, tp, c) = std_params();
    let init = initial_linked_pair(&hp, &tp).unwrap();
    let eps = rat(1, 1000);
    let st = match linking_step(&hp, &tp, &c, &init.pair, &eps) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let xi_floor = 0.133_665;
    let xis = [&st.pair1, &st.pair2].map(|p| interval_xi(&p.bs.interval, &p.bu.interval));
    let linked = [&st.pair1, &st.pair2].iter().all(|p| {
        let m = Map::new(&hp, &tp.with_delta(p.slide.clone()));
        linkage(&m, &p.bs, &p.bu).map(|r| r.status == LinkStatus::Linked).unwrap_or(false)
    });
    // Claim 5.2 from the returned bridges
    let m = Map::new(&hp, &tp.with_delta(st.slide_after.clone()));
    let (bs, bu) = (st.hat_s.len(), st.hat_u.len());
    let ll = &c.lambda_lo;
    let half = rat(1, 2);
    let (_, s0) = c.lambda0_sigma0(&eps);
    let window = ll * ll * ll * &eps * &half < bs && bs < ll * &eps * &half;
    let prop = bs <= bu && bu < &s0 * &bs;
    let gap = st.hat_u.gap(&m).len() < bs;
    let el = t.elapsed();
    let ok = xis.iter().all(|x| rat_to_f64(x) >= xi_floor)
        && linked
        && Scalar::abs(&st.delta) < eps
        && window
        && prop
        && gap
        && st.claim52.all()
        && el < Duration::from_secs(1);
    outcome(
        ok,
        format!(
            "xi = {:.5}, {:.5}; |delta| = {:.2e}; claim inequalities {window}/{prop}/{gap} ({el:.2?})",
            rat_to_f64(&xis[0]),
            rat_to_f64(&xis[1]),
            rat_to_f64(&st.delta).abs()
        ),
    )
}

fn c7_growth() -> Outcome {
    let t = Instant::now();
    let (hp, tp, c) = std_params();
    let init = initial_linked_pair(&hp, &tp).unwrap();
    let g = match linear_growth(&hp, &tp, &c, &init.pair, &rat(1, 1000), 8) {
        Ok(g) => g,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let half_xi = c.xi0_f64 / 2.0;
    let xi_ok = g.pairs.iter().all(|p| p.is_linked() && p.report.xi >= half_xi);
    let incr = |gens: Vec<usize>| gens.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect::<Vec<_>>();
    let (ds, du) = (incr(g.stable_generations()), incr(g.unstable_generations()));
    let gen_ok = ds.iter().all(|&d| d >= 0 && d as usize <= c.n_s) && du.iter().all(|&d| d >= 0 && d as usize <= c.n_u);
    let bound = rat(1, 1000);
    let delta_ok = g.schedule.partial.iter().all(|d| Scalar::abs(d) <= bound);
    let el = t.elapsed();
    let ok = g.pairs.len() == 8 && xi_ok && gen_ok && delta_ok && el < Duration::from_secs(10);
    outcome(
        ok,
        format!("8 pairs; N_s={} N_u={}; s-increments {ds:?} u-increments {du:?}; max |Delta| {:.2e} ({el:.2?})", c.n_s, c.n_u, g
            .schedule
            .partial
            .iter()
            .map(|d| rat_to_f64(d).abs())
            .fold(0.0, f64::max)),
    )
}

fn c8_critical_chain() -> Outcome {
    let t = Instant::now();
    let (hp, tp, _) = std_params();
    let chain = build_chain(1, 5, 10, None);
    let diam_q = 2.0 * std::f64::consts::SQRT_2;
    let tol = 1e-10 * diam_q;
    let growth = chain.spec.growth_bound_holds();
    let exact = chain.exact_links.iter().all(|&b| b);
    let mp = with_mp_precision(256, || verify_links::<Mp>(&hp, &tp, &chain, 5));
    let mp_ok = matches!(&mp, Ok(v) if v.len() == 5 && v.iter().all(|l| l.error < tol));
    let mp_max = mp.as_ref().map(|v| v.iter().map(|l| l.error).fold(0.0, f64::max)).unwrap_or(f64::NAN);
    let double = verify_links::<f64>(&hp, &tp, &chain, 3);
    let (double_ok, double_msg) = match &double {
        Ok(v) => {
            let worst = v.iter().map(|l| l.error).fold(0.0, f64::max);
            (v.len() == 3 && worst < tol, format!("double max error {worst:.1e}"))
        }
        Err(e) => (false, format!("double: {e}")),
    };
    let el = t.elapsed();
    let ok = growth && exact && mp_ok && double_ok && el < Duration::from_secs(60);
    outcome(
        ok,
        format!(
            "n = {:?}, C = {:.3}, exact links {exact}, 256-bit max error {mp_max:.1e}, {double_msg} ({el:.2?})",
            chain.spec.ns(),
            chain.spec.c_bound
        ),
    )
}

fn c9_cascade() -> Outcome {
    let t = Instant::now();
    let (hp, tp, _) = std_params();
    let chain = build_chain(REF_FIRST, 3, REF_WINDOW_EXP, None);
    let cas = match rectangle_cascade(&hp, &tp, &chain, &CascadeOptions::default()) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let direct = cas.direct.iter().map(|d| d.margin).fold(f64::INFINITY, f64::min);
    let el = t.elapsed();
    let ok = cas.min_margin() >= 0.25
        && direct >= 0.25
        && cas.pairwise_disjoint
        && cas.all_in_gaps()
        && cas.diam_decreasing
        && el < Duration::from_secs(120);
    outcome(
        ok,
        format!(
            "{} rectangles; min margin {:.6}, direct margin {direct:.6}; disjoint {}, in gaps {}, diam decreasing {} ({el:.2?})",
            cas.rectangles.len(),
            cas.min_margin(),
            cas.pairwise_disjoint,
            cas.all_in_gaps(),
            cas.diam_decreasing
        ),
    )
}

fn c10_deficit() -> Outcome {
    let t = Instant::now();
    let (hp, tp, _) = std_params();
    let target = random_stream(2024, 1 << 16);
    let design = |spec: &ChainSpec| design_target_code(&target, spec).expect("stream long enough");
    let chain = build_chain(REF_FIRST, 3, REF_WINDOW_EXP, Some(&design));
    let opts = CascadeOptions { direct_transitions: 0, ..Default::default() };
    let rep = rectangle_cascade(&hp, &tp, &chain, &opts)
        .and_then(|cas| deficit_experiment(&hp, &tp, &chain, &cas, &DeficitConfig { grid: 8, w1_stride: 8 }));
    let rep = match rep {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let el = t.elapsed();
    let last = rep.series.last();
    let ok = rep.samples == 64
        && last < 0.05
        && rep.trending_down
        && rep.w1_dominated()
        && el < Duration::from_secs(300);
    outcome(
        ok,
        format!(
            "64 samples, horizon {}: deficit {last:.2e}, checkpoints {:?}, last-era slope {:.1e}, W1 <= deficit at {} checks ({el:.2?})",
            rep.horizon,
            rep.at_checkpoints.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>(),
            rep.last_block_slope,
            rep.w1.len()
        ),
    )
}

fn strip_average(chain: &CriticalChain, branch: u8) -> wildhorse::Result<f64> {
    let (hp, tp, _) = std_params();
    let orbit = chain_orbit(&hp, &tp, chain, chain.transitions())?;
    let map = chain.map_in::<f64>(&hp, &tp);
    let r = birkhoff_oscillation(&map, &orbit, &Observable::smoothed_strip(branch), &[orbit.len()]);
    Ok(r.averages[0].1)
}

fn c11_dirac() -> Outcome {
    let dirac = |w: &'static str| move |spec: &ChainSpec| design_dirac_code(&w.parse().unwrap(), spec).unwrap();
    let c0 = build_chain(REF_FIRST, 3, REF_WINDOW_EXP, Some(&dirac("0")));
    let c01 = build_chain(REF_FIRST, 3, REF_WINDOW_EXP, Some(&dirac("01")));
    match (strip_average(&c0, 0), strip_average(&c01, 1)) {
        (Ok(a0), Ok(a1)) => outcome(
            a0 >= 0.9 && (a1 - 0.5).abs() <= 0.05,
            format!("period 1: S0 average {a0:.4}; period 2: S1 average {a1:.4}"),
        ),
        (a, b) => outcome(false, format!("{a:?} {b:?}")),
    }
}

fn c12_historic() -> Outcome {
    let t = Instant::now();
    let (hp, tp, _) = std_params();
    let eras = match EraSchedule::new(REF_FIRST, vec![REF_FIRST + 1, REF_FIRST + 6], MhatRule::Square) {
        Ok(e) => e,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let design = |spec: &ChainSpec| design_historic_code(&eras, spec).unwrap();
    let chain = build_chain(REF_FIRST, 6, REF_WINDOW_EXP, Some(&design));
    let orbit = match chain_orbit(&hp, &tp, &chain, chain.transitions()) {
        Ok(o) => o,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let land = chain.spec.landing_ticks();
    let ends: Vec<usize> = eras.ks.iter().map(|&k| land[k - REF_FIRST] + 1).collect();
    let map = chain.map_in::<f64>(&hp, &tp);
    let r = birkhoff_oscillation(&map, &orbit, &Observable::smoothed_strip(1), &ends);
    let diff = (r.averages[0].1 - r.averages[1].1).abs();
    let el = t.elapsed();
    outcome(
        eras.validate().is_ok() && diff >= 0.2 && el < Duration::from_secs(300),
        format!(
            "eras {:?}, dominance {:?}; S1 averages at era ends {:.4} -> {:.4}, difference {diff:.4} ({el:.2?})",
            eras.ks,
            eras.dominance_ratios(),
            r.averages[0].1,
            r.averages[1].1
        ),
    )
}

/// Min-cost integral plan by exhaustive enumeration (integral plans are optimal).
fn brute_transport(supply: &[u64], demand: &[u64], cost: &[Vec<f64>]) -> f64 {
    fn go(i: usize, j: usize, sup: &mut Vec<u64>, dem: &mut Vec<u64>, cost: &[Vec<f64>], acc: f64, best: &mut f64) {
        if i == sup.len() {
            if dem.iter().all(|&d| d == 0) {
                *best = best.min(acc);
            }
            return;
        }
        if j == dem.len() {
            if sup[i] == 0 {
                go(i + 1, 0, sup, dem, cost, acc, best);
            }
            return;
        }
        let top = sup[i].min(dem[j]);
        for q in 0..=top {
            sup[i] -= q;
            dem[j] -= q;
            go(i, j + 1, sup, dem, cost, acc + q as f64 * cost[i][j], best);
            sup[i] += q;
            dem[j] += q;
        }
    }
    let mut best = f64::INFINITY;
    go(0, 0, &mut supply.to_vec(), &mut demand.to_vec(), cost, 0.0, &mut best);
    best
}

fn random_measure(rng: &mut ChaCha8Rng, atoms: usize, total: u64) -> EmpiricalMeasure {
    let pts: Vec<Point<f64>> = (0..atoms).map(|_| Point::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))).collect();
    let mut mass = vec![1u64; atoms];
    for _ in atoms as u64..total {
        mass[rng.gen_range(0..atoms)] += 1;
    }
    EmpiricalMeasure::weighted(pts, mass).unwrap()
}

fn c13_w1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (a, b) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let total = rng.gen_range(6..=8u64);
        let mu = random_measure(&mut rng, a, total);
        let nu = random_measure(&mut rng, b, total);
        let cost: Vec<Vec<f64>> = mu.atoms.iter().map(|p| nu.atoms.iter().map(|q| ground(p, q)).collect()).collect();
        let brute = brute_transport(&mu.mass, &nu.mass, &cost) / total as f64;
        worst = worst.max((wasserstein1(&mu, &nu) - brute).abs());
    }
    let mut axioms = true;
    for _ in 0..100 {
        let ms: Vec<EmpiricalMeasure> = (0..3)
            .map(|_| {
                let n = rng.gen_range(1..=6);
                let total = rng.gen_range(n as u64..=12);
                random_measure(&mut rng, n, total)
            })
            .collect();
        let d = |i: usize, j: usize| wasserstein1(&ms[i], &ms[j]);
        for i in 0..3 {
            axioms &= d(i, i).abs() < 1e-9;
            for j in 0..3 {
                axioms &= (d(i, j) - d(j, i)).abs() < 1e-9 && d(i, j) >= 0.0 && d(i, j) <= 2.0 + 1e-12;
                for k in 0..3 {
                    axioms &= d(i, k) <= d(i, j) + d(j, k) + 1e-9;
                }
            }
        }
    }
    outcome(worst < 1e-9 && axioms, format!("max |W1 - brute force| = {worst:.1e} over 200 pairs; axioms on 100 triples {axioms}"))
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 13] = [
        (1, "closed-form thickness", c1_thickness),
        (2, "fixed point and coding", c2_fixed_point),
        (3, "bounded distortion", c3_distortion),
        (4, "gap lemma trichotomy", c4_gap_lemma),
        (5, "initial linked pair", c5_initial_pair),
        (6, "linking step", c6_linking),
        (7, "linear growth", c7_growth),
        (8, "critical chain links", c8_critical_chain),
        (9, "rectangle cascade", c9_cascade),
        (10, "pluripotency deficit", c10_deficit),
        (11, "dirac designs", c11_dirac),
        (12, "historic design", c12_historic),
        (13, "W1 exactness", c13_w1),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_INFEASIBLE.contains(&id) { " [known infeasible, see README]" } else { "" };
        println!("[{tag}] {id:>2} {name}: {}{note}", o.detail);
        if !o.pass && note.is_empty() {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
