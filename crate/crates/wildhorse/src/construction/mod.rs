//! Executable constructions: the initial linked pair on the tangency curve, the
//! linking step, linear growth, the critical chain and the wandering rectangles.
//!
//! Everything here runs in exact rationals. In the affine model stable bridges
//! on L translate rigidly with the slide and unstable ones do not move, so the
//! distortion constant of slid bridges is c = 0 and every alignment equation is
//! linear.

mod cascade;
mod chain;

pub use cascade::*;
pub use chain::*;

use serde::Serialize;

use crate::cantor::{linkage, refine_linked_child, LinkStatus, LinkageReport};
use crate::core_map::{HorseshoeParams, Map, TangencyParams};
use crate::error::{Error, Result};
use crate::scalar::{rat, rat_to_f64, Rat, Scalar};
use crate::symbolic::{Bridge, Carrier, Kind, Word};

/// Constants derived from the parameters that every construction step uses.
#[derive(Clone, Debug, Serialize)]
pub struct Constants {
    #[serde(skip)]
    pub lambda_lo: Rat,
    #[serde(skip)]
    pub lambda_hi: Rat,
    #[serde(skip)]
    pub sigma_lo: Rat,
    #[serde(skip)]
    pub sigma_hi: Rat,
    /// Distortion constant of slid bridges (exactly 0 in the affine model).
    #[serde(skip)]
    pub distortion_c: Rat,
    #[serde(skip)]
    pub kappa: Rat,
    #[serde(skip)]
    pub xi0: Rat,
    pub xi0_f64: f64,
    pub kappa_f64: f64,
    /// Measured displacement rate of bridge endpoints per unit slide.
    pub kappa_measured: f64,
    pub n_s: usize,
    pub n_u: usize,
    pub a_min: f64,
}

impl Constants {
    pub fn new(hp: &HorseshoeParams) -> Self {
        let s_hi = hp.sigma_hi();
        let xi0 = (&s_hi + Rat::from(2)) * (Rat::from(3) - &s_hi) / (Rat::from(3) * (&s_hi + Rat::from(3)));
        let kappa = rat(5, 2);
        let (l_lo, l_hi) = (rat_to_f64(&hp.lambda_lo()), rat_to_f64(&hp.lambda_hi()));
        let (s_lo, s_hi_f) = (rat_to_f64(&hp.sigma_lo()), rat_to_f64(&s_hi));
        let xi = rat_to_f64(&xi0);
        let k = rat_to_f64(&kappa);
        let n_s = ((l_lo.powi(5) * xi / (12.0 * (k + 1.0))).ln() / l_hi.ln()).ceil() as usize;
        // infimum of the admissible a in σ̄/(σ̄-2) < a·σ_lo
        let a_min = s_hi_f / ((s_hi_f - 2.0) * s_lo);
        let n_u = ((l_lo.powi(6) * xi / (36.0 * a_min * (k + 1.0))).ln() / -s_lo.ln()).ceil() as usize;
        Constants {
            lambda_lo: hp.lambda_lo(),
            lambda_hi: hp.lambda_hi(),
            sigma_lo: hp.sigma_lo(),
            sigma_hi: s_hi,
            distortion_c: Rat::ZERO,
            kappa,
            xi0,
            xi0_f64: xi,
            kappa_f64: k,
            kappa_measured: 1.0,
            n_s,
            n_u,
            a_min,
        }
    }

    /// λ₀ = λ_lo(1-cε)/(1+cε)² and σ₀ = σ̄((1+cε)/(1-cε))².
    pub fn lambda0_sigma0(&self, eps: &Rat) -> (Rat, Rat) {
        let ce = &self.distortion_c * eps;
        let p = Rat::ONE + &ce;
        let m = Rat::ONE - &ce;
        let l0 = &self.lambda_lo * &m / (&p * &p);
        let s0 = &self.sigma_hi * (&p * &p) / (&m * &m);
        (l0, s0)
    }
}

#[derive(Clone, Debug)]
pub struct LinkedPair {
    pub bs: Bridge<Rat>,
    pub bu: Bridge<Rat>,
    pub report: LinkageReport,
    pub slide: Rat,
}

impl LinkedPair {
    fn measure(map: &Map<Rat>, bs: Bridge<Rat>, bu: Bridge<Rat>) -> Result<Self> {
        let report = linkage(map, &bs, &bu)?;
        Ok(LinkedPair { bs, bu, report, slide: map.delta.clone() })
    }

    /// Same words re-measured under another slide.
    pub fn at_slide(&self, hp: &HorseshoeParams, tp: &TangencyParams, slide: &Rat) -> Result<Self> {
        let map = Map::new(hp, &tp.with_delta(slide.clone()));
        LinkedPair::measure(&map, self.bs.remeasure(&map), self.bu.remeasure(&map))
    }

    pub fn is_linked(&self) -> bool {
        self.report.status == LinkStatus::Linked
    }
}

#[derive(Clone, Debug)]
pub struct InitialPair {
    pub pair: LinkedPair,
    pub c: Rat,
    pub n0: usize,
    pub m0: usize,
}

/// Least n ≥ 0 with scale·rate^(n+1) ≤ bound.
fn least_exponent(scale: &Rat, rate: &Rat, bound: &Rat) -> usize {
    let mut v = scale * rate;
    let mut n = 0;
    while v > *bound {
        v *= rate;
        n += 1;
    }
    n
}

/// The starting linked pair on L: Bᵘ(n₀; 0…0) and Bˢ(m₀; 0…0), with the slide c
/// searched over a grid in |c| < μ/10 starting at 0.
pub fn initial_linked_pair(hp: &HorseshoeParams, tp: &TangencyParams) -> Result<InitialPair> {
    let two = Rat::from(2);
    let n0 = least_exponent(&(&two * hp.a_u()), &(Rat::ONE / &hp.sigma), &tp.mu);
    let m0 = least_exponent(&(&two * hp.a_s() * &tp.gamma), &hp.lambda, &tp.mu);
    let step = &tp.mu / Rat::from(1000);
    let mut candidates = vec![Rat::ZERO];
    for j in 1..100i64 {
        candidates.push(&step * Rat::from(j));
        candidates.push(-(&step * Rat::from(j)));
    }
    for c in candidates {
        let map = Map::new(hp, &tp.with_delta(&tp.delta + &c));
        let bu = Bridge::new(&map, Kind::Unstable, Carrier::L, &Word::repeat(0, n0))?;
        let bs = Bridge::new(&map, Kind::Stable, Carrier::L, &Word::repeat(0, m0))?;
        let pair = LinkedPair::measure(&map, bs, bu)?;
        if pair.is_linked() {
            return Ok(InitialPair { pair, c, n0, m0 });
        }
    }
    Err(Error::SearchFailed(format!("no linked pair with n0 = {n0}, m0 = {m0} for |c| < mu/10")))
}

/// Descends inside a linked pair until the stable bridge is no longer than
/// `s_max`, keeping every intermediate pair linked, then shortens the unstable
/// bridge until it is shorter than `u_ratio`·|stable| (or no longer than that,
/// with `inclusive`). Refines the unstable side first whenever it is at least
/// `u_ratio` times longer, so |stable| ≤ |unstable| is preserved.
pub(crate) fn descend_pair(
    map: &Map<Rat>,
    bs: &Bridge<Rat>,
    bu: &Bridge<Rat>,
    s_max: &Rat,
    u_ratio: &Rat,
    inclusive: bool,
) -> Result<(Bridge<Rat>, Bridge<Rat>)> {
    let too_long = |u: &Bridge<Rat>, s: &Bridge<Rat>| {
        let cap = u_ratio * s.len();
        if inclusive {
            u.len() > cap
        } else {
            u.len() >= cap
        }
    };
    let (mut s, mut u) = (bs.clone(), bu.clone());
    let fail = |what: &str, s: &Bridge<Rat>, u: &Bridge<Rat>| {
        Error::NoFundamentalBridge(format!("{what} (stable gen {}, unstable gen {})", s.generation(), u.generation()))
    };
    while s.len() > *s_max {
        if too_long(&u, &s) {
            u = refine_linked_child(map, &u, &s).ok_or_else(|| fail("no linked unstable child", &s, &u))?;
        } else {
            s = refine_linked_child(map, &s, &u).ok_or_else(|| fail("no linked stable child", &s, &u))?;
        }
    }
    while too_long(&u, &s) {
        u = refine_linked_child(map, &u, &s).ok_or_else(|| fail("no linked unstable child", &s, &u))?;
    }
    Ok((s, u))
}

#[derive(Clone, Debug, Serialize)]
pub struct Claim52 {
    pub stable_window: bool,
    pub proportional: bool,
    pub gap_shorter: bool,
}

impl Claim52 {
    pub fn all(&self) -> bool {
        self.stable_window && self.proportional && self.gap_shorter
    }
}

#[derive(Clone, Debug)]
pub struct LinkStep {
    pub delta: Rat,
    pub slide_after: Rat,
    pub hat_s: Bridge<Rat>,
    pub hat_u: Bridge<Rat>,
    pub pair1: LinkedPair,
    pub pair2: LinkedPair,
    pub claim52: Claim52,
    /// (1-cε)/(1+cε)² > λ_lo and ((1+cε)/(1-cε))² < 1/(σ̄-2).
    pub eq001: bool,
}

/// One application of the Linking Lemma: find B̂ˢ with |B̂ˢ| ∈ (λ₀²ε/2, λ₀ε/2) and a
/// linked B̂ᵘ with |B̂ˢ| ≤ |B̂ᵘ| < σ₀|B̂ˢ|, slide so their center gaps are concentric,
/// and return the two child pairs (left with left, right with right).
pub fn linking_step(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    consts: &Constants,
    pair: &LinkedPair,
    eps: &Rat,
) -> Result<LinkStep> {
    if !pair.is_linked() {
        return Err(Error::NoFundamentalBridge("input pair is not linked".into()));
    }
    let ce = &consts.distortion_c * eps;
    let (p, m) = (Rat::ONE + &ce, Rat::ONE - &ce);
    let eq001 = &m / (&p * &p) > consts.lambda_lo
        && (&p * &p) / (&m * &m) < Rat::ONE / (&consts.sigma_hi - Rat::from(2));
    if !eq001 {
        return Err(Error::BudgetTooLarge(format!("eps = {}", rat_to_f64(eps))));
    }
    let (l0, s0) = consts.lambda0_sigma0(eps);
    let half = rat(1, 2);
    let s_max = &l0 * eps * &half;
    let s_min = &l0 * &l0 * eps * &half;
    let map = Map::new(hp, &tp.with_delta(pair.slide.clone()));
    let (hs, hu) = descend_pair(&map, &pair.bs, &pair.bu, &s_max, &s0, false)?;
    if hs.len() <= s_min {
        return Err(Error::NoFundamentalBridge(format!(
            "stable bridge already below the window at generation {}",
            hs.generation()
        )));
    }
    // Gaps are centered in their parents, so align the bridge centers.
    let delta = hu.interval.center() - hs.interval.center();
    let slide_after = &pair.slide + &delta;
    let map2 = Map::new(hp, &tp.with_delta(slide_after.clone()));
    let hs = hs.remeasure(&map2);
    let hu = hu.remeasure(&map2);
    let [sl, sr] = hs.children(&map2);
    let [ul, ur] = hu.children(&map2);
    let pair1 = LinkedPair::measure(&map2, sl, ul)?;
    let pair2 = LinkedPair::measure(&map2, sr, ur)?;

    let ll = &consts.lambda_lo;
    let bs = hs.len();
    let bu = hu.len();
    let claim52 = Claim52 {
        stable_window: ll * ll * ll * eps * &half < bs && bs < ll * eps * &half,
        proportional: bs <= bu && bu < &s0 * &bs,
        gap_shorter: hu.gap(&map2).len() < bs,
    };
    Ok(LinkStep { delta, slide_after, hat_s: hs, hat_u: hu, pair1, pair2, claim52, eq001 })
}

#[derive(Clone, Debug)]
pub struct PerturbationSchedule {
    pub deltas: Vec<Rat>,
    /// Δ_k = δ₁ + … + δ_k.
    pub partial: Vec<Rat>,
    /// Budget for δ_{k+1}; the first entry is ε/2.
    pub budgets: Vec<Rat>,
    /// Σδ (not including the initial slide c).
    pub total: Rat,
}

#[derive(Clone, Debug)]
pub struct Growth {
    pub schedule: PerturbationSchedule,
    /// Pairs (Bˢ_k, Bᵘ_k), k = 1..K, re-measured at the final slide.
    pub pairs: Vec<LinkedPair>,
    pub steps: Vec<LinkStep>,
    /// Final slide including the initial c.
    pub slide: Rat,
    pub eps: Rat,
}

impl Growth {
    pub fn stable_generations(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.bs.generation()).collect()
    }
    pub fn unstable_generations(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.bu.generation()).collect()
    }
    pub fn abs_sum(&self) -> Rat {
        self.schedule.deltas.iter().map(Scalar::abs).fold(Rat::ZERO, |a, b| a + b)
    }
}

/// Iterates the linking step, keeping the first child pair and recursing on the
/// second, with budgets ε_k = λ̄ξ₀/(4(κ+1))·|Bˢ_k|.
pub fn linear_growth(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    consts: &Constants,
    start: &LinkedPair,
    eps: &Rat,
    k: usize,
) -> Result<Growth> {
    assert!(k >= 1);
    let coef = &consts.lambda_hi * &consts.xi0 / (Rat::from(4) * (&consts.kappa + Rat::ONE));
    let mut deltas = Vec::new();
    let mut partial = Vec::new();
    let mut budgets = vec![eps / Rat::from(2)];
    let mut steps = Vec::new();
    let mut kept = Vec::new();

    let first = linking_step(hp, tp, consts, start, eps)?;
    let mut sum = first.delta.clone();
    deltas.push(first.delta.clone());
    partial.push(sum.clone());
    kept.push(first.pair1.clone());
    let mut tilde = first.pair2.clone();
    steps.push(first);

    while kept.len() < k {
        let budget = &coef * kept.last().unwrap().bs.len();
        let st = linking_step(hp, tp, consts, &tilde, &budget)?;
        sum += &st.delta;
        deltas.push(st.delta.clone());
        partial.push(sum.clone());
        budgets.push(budget);
        kept.push(st.pair1.clone());
        tilde = st.pair2.clone();
        steps.push(st);
    }
    let slide = &start.slide + &sum;
    let pairs = kept
        .iter()
        .map(|p| p.at_slide(hp, tp, &slide))
        .collect::<Result<Vec<_>>>()?;
    Ok(Growth {
        schedule: PerturbationSchedule { deltas, partial, budgets, total: sum },
        pairs,
        steps,
        slide,
        eps: eps.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (HorseshoeParams, TangencyParams, Constants) {
        let hp = HorseshoeParams::standard();
        let c = Constants::new(&hp);
        (hp, TangencyParams::standard(), c)
    }

    #[test]
    fn closed_form_constants() {
        let (_, _, c) = setup();
        assert_eq!(c.n_s, 11);
        assert!((c.xi0_f64 - 0.133_690_260_133).abs() < 1e-9);
        assert!(c.n_u >= 1);
    }

    #[test]
    fn initial_pair_matches_claim() {
        let (hp, tp, _) = setup();
        let init = initial_linked_pair(&hp, &tp).unwrap();
        assert_eq!((init.n0, init.m0), (5, 4));
        assert_eq!(init.c, Rat::ZERO);
        assert!(init.pair.is_linked());
        let right = rat_to_f64(&init.pair.bu.interval.hi);
        assert!((right - (-5.0 / 6.0 + (5.0 / 3.0) * 2.5f64.powi(-5))).abs() < 1e-15);
        assert!(right > -5.0 / 6.0 + 0.01);
    }

    #[test]
    fn one_linking_step() {
        let (hp, tp, c) = setup();
        let init = initial_linked_pair(&hp, &tp).unwrap();
        let eps = rat(1, 1000);
        let st = linking_step(&hp, &tp, &c, &init.pair, &eps).unwrap();
        assert!(Scalar::abs(&st.delta) < eps);
        assert!(st.claim52.all(), "{:?}", st.claim52);
        assert!(st.pair1.report.xi >= c.xi0_f64 && st.pair2.report.xi >= c.xi0_f64);
        let m = Map::new(&hp, &tp.with_delta(st.slide_after.clone()));
        assert_eq!(st.hat_s.gap(&m).center(), st.hat_u.gap(&m).center());
    }
}
