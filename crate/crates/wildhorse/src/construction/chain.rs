//! Chain itineraries, the critical chain and its bump-rotation perturbation.

use serde::Serialize;

use super::{descend_pair, Constants, Growth};
use crate::core_map::{FieldEntry, HorseshoeParams, HorseshoeSystem, Map, PerturbationField, Point, TangencyParams};
use crate::error::{Error, Result};
use crate::scalar::{rat, rat_log2, rat_to_f64, Rat, Scalar};
use crate::symbolic::{Bridge, Carrier, Kind, Word};

/// Length of the free middle block v̂⁽ᵏ⁾.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MhatRule {
    Square,
    Constant(usize),
    Linear(usize),
}

impl MhatRule {
    pub fn eval(self, k: usize) -> usize {
        match self {
            MhatRule::Square => k * k,
            MhatRule::Constant(m) => m,
            MhatRule::Linear(c) => c * k,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainConfig {
    /// Index of the first chain point. Larger values start deeper in the
    /// linked pairs (the subscript translation of the growth lemma).
    pub first: usize,
    /// Number of transitions x_k → x_{k+1} to build.
    pub points: usize,
    /// Window exponent N: λ_lo^{kN+2} ≤ |B̂ˢ_k| ≤ λ_lo^{kN+1}.
    pub window_exp: usize,
    pub eta: f64,
    pub mhat: MhatRule,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig { first: 1, points: 3, window_exp: 10, eta: 0.08, mhat: MhatRule::Square }
    }
}

impl ChainConfig {
    /// Linear-growth pairs this configuration consumes.
    pub fn pairs_needed(&self) -> usize {
        self.points + 2
    }
}

/// λ̄σ̄^{(1+2η)/(1-η)} < 1.
pub fn eta_compatible(hp: &HorseshoeParams, eta: f64) -> bool {
    let e = (1.0 + 2.0 * eta) / (1.0 - eta);
    eta > 0.0 && eta < 1.0 && rat_to_f64(&hp.lambda_hi()) * rat_to_f64(&hp.sigma_hi()).powf(e) < 1.0
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRecord {
    pub k: usize,
    pub u_hat: usize,
    pub m_hat: usize,
    pub s_next: usize,
    pub zhat: Word,
    pub vhat: Word,
    pub what_next: Word,
    pub z: Word,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct HatPair {
    pub k: usize,
    pub bs: Bridge<Rat>,
    pub bu: Bridge<Rat>,
}

#[derive(Clone, Debug)]
pub struct ChainSpec {
    pub config: ChainConfig,
    pub slide: Rat,
    pub hats: Vec<HatPair>,
    pub records: Vec<ChainRecord>,
    /// max_k (U(k) + S(k+1))/k over the chain, from the length windows.
    pub c_bound: f64,
    /// Limit of the same ratio as k → ∞.
    pub c_asymptotic: f64,
    /// Least k from which n_{k+1} < (1+η)n_k holds along the rest of the chain.
    pub growth_threshold: Option<usize>,
    /// Index shift between growth pairs and chain indices.
    pub subscript_offset: usize,
}

impl ChainSpec {
    pub fn record(&self, k: usize) -> Option<&ChainRecord> {
        k.checked_sub(self.config.first).and_then(|i| self.records.get(i))
    }
    pub fn ns(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.n).collect()
    }
    /// Same hats with new middle words (one per record, lengths unchanged).
    pub fn with_vhats(&self, vhats: &[Word]) -> Result<ChainSpec> {
        if vhats.len() != self.records.len() {
            return Err(Error::LengthMismatch(format!("{} words for {} records", vhats.len(), self.records.len())));
        }
        let mut out = self.clone();
        for (r, v) in out.records.iter_mut().zip(vhats) {
            if v.len() != r.m_hat {
                return Err(Error::LengthMismatch(format!("v_hat at k = {} has length {}, m_hat = {}", r.k, v.len(), r.m_hat)));
            }
            r.vhat = v.clone();
            r.z = r.zhat.concat(v).concat(&r.what_next.reversed());
        }
        Ok(out)
    }

    /// Ticks at which the orbit of x_first reaches x_k, for every record.
    pub fn landing_ticks(&self) -> Vec<usize> {
        let mut t = 0;
        let mut out = vec![0];
        for r in &self.records {
            t += r.n + 2;
            out.push(t);
        }
        out
    }

    pub fn growth_bound_holds(&self) -> bool {
        self.records.iter().all(|r| (r.u_hat + r.s_next) as f64 <= self.c_bound * r.k as f64 + 1e-9)
    }
}

/// Free-block designer: returns v̂⁽ᵏ⁾ of the requested length.
pub type Design<'a> = &'a dyn Fn(usize, usize) -> Word;

pub fn zero_design(_k: usize, m: usize) -> Word {
    Word::repeat(0, m)
}

/// Finds the hat pairs inside the growth pairs and builds z⁽ᵏ⁾ = ẑ⁽ᵏ⁾·v̂⁽ᵏ⁾·reverse(ŵ⁽ᵏ⁺¹⁾).
pub fn assemble_chain_spec(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    consts: &Constants,
    growth: &Growth,
    cfg: &ChainConfig,
    design: Design,
) -> Result<ChainSpec> {
    if cfg.first == 0 || cfg.points == 0 || cfg.window_exp == 0 {
        return Err(Error::Config("chain needs first >= 1, points >= 1 and N >= 1".into()));
    }
    if !eta_compatible(hp, cfg.eta) {
        return Err(Error::Params(format!("eta = {} violates lambda_hi*sigma_hi^((1+2eta)/(1-eta)) < 1", cfg.eta)));
    }
    if growth.pairs.len() < cfg.pairs_needed() {
        return Err(Error::Config(format!(
            "chain with {} transitions needs {} linked pairs, growth produced {}",
            cfg.points,
            cfg.pairs_needed(),
            growth.pairs.len()
        )));
    }
    let map = Map::new(hp, &tp.with_delta(growth.slide.clone()));
    let ll = &consts.lambda_lo;
    let mut hats = Vec::new();
    for j in 0..cfg.pairs_needed() {
        let k = cfg.first + j;
        let p = &growth.pairs[j];
        let e = k * cfg.window_exp;
        let s_max = ll.pow((e + 1) as isize);
        let s_min = ll.pow((e + 2) as isize);
        if p.bs.len() <= s_max {
            return Err(Error::WindowEmpty {
                k,
                detail: format!("growth pair {} is already shorter than the window", j + 1),
            });
        }
        let (bs, bu) = descend_pair(&map, &p.bs, &p.bu, &s_max, &consts.sigma_hi, true)
            .map_err(|e| Error::WindowEmpty { k, detail: e.to_string() })?;
        if bs.len() < s_min || bu.len() < bs.len() || bu.len() > &consts.sigma_hi * bs.len() {
            return Err(Error::WindowEmpty { k, detail: "length window missed".into() });
        }
        hats.push(HatPair { k, bs, bu });
    }
    let mut records = Vec::new();
    for j in 0..=cfg.points {
        let k = cfg.first + j;
        let zhat = hats[j].bu.word.clone();
        let what_next = hats[j + 1].bs.word.clone();
        let m_hat = cfg.mhat.eval(k);
        let vhat = design(k, m_hat);
        if vhat.len() != m_hat {
            return Err(Error::Config(format!("design returned {} symbols for m_hat = {m_hat}", vhat.len())));
        }
        let z = zhat.concat(&vhat).concat(&what_next.reversed());
        let n = z.len();
        records.push(ChainRecord { k, u_hat: zhat.len(), m_hat, s_next: what_next.len(), zhat, vhat, what_next, z, n });
    }

    let n_exp = cfg.window_exp as f64;
    let l_lo = rat_to_f64(ll).ln();
    let ln_sigma = rat_to_f64(&hp.sigma).ln();
    let ln_inv_lambda = -rat_to_f64(&hp.lambda).ln();
    let u_of = |k: f64| ((2.0 * rat_to_f64(&hp.a_u())).ln() - (k * n_exp + 2.0) * l_lo) / ln_sigma;
    let s_of = |k: f64| ((2.0 * rat_to_f64(&hp.a_s()) * rat_to_f64(&tp.gamma)).ln() - (k * n_exp + 2.0) * l_lo) / ln_inv_lambda;
    let c_bound = records
        .iter()
        .map(|r| (u_of(r.k as f64) + s_of(r.k as f64 + 1.0)) / r.k as f64)
        .fold(f64::NEG_INFINITY, f64::max);
    let c_asymptotic = -n_exp * l_lo * (1.0 / ln_sigma + 1.0 / ln_inv_lambda);

    let ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    let ok: Vec<bool> = ns.windows(2).map(|w| (w[1] as f64) < (1.0 + cfg.eta) * w[0] as f64).collect();
    let growth_threshold = match ok.iter().rposition(|b| !b) {
        None => Some(cfg.first),
        Some(i) if i + 1 < ok.len() => Some(cfg.first + i + 1),
        Some(_) => None,
    };
    Ok(ChainSpec {
        config: cfg.clone(),
        slide: growth.slide.clone(),
        hats,
        records,
        c_bound,
        c_asymptotic,
        growth_threshold,
        subscript_offset: cfg.first - 1,
    })
}

#[derive(Clone, Debug)]
pub struct ChainPoint {
    pub k: usize,
    pub r: Point<Rat>,
    pub x: Point<Rat>,
    pub q: Point<Rat>,
    pub y: Point<Rat>,
}

#[derive(Clone, Debug)]
pub struct CriticalChain {
    pub spec: ChainSpec,
    pub points: Vec<ChainPoint>,
    pub field: PerturbationField<Rat>,
    pub map: Map<Rat>,
    /// max_k ‖ζ_k‖ / λ_lo^{kN}.
    pub zeta_constant: f64,
    /// Bound on the perturbation beyond the horizon, C₁Σ_{k>K} λ_lo^{kN}.
    pub tail_bound: f64,
    /// Exact check g^{n_k+2}(x_k) = x_{k+1} in rationals, one entry per transition.
    pub exact_links: Vec<bool>,
}

impl CriticalChain {
    pub fn point(&self, k: usize) -> Option<&ChainPoint> {
        k.checked_sub(self.spec.config.first).and_then(|i| self.points.get(i))
    }

    pub fn system(&self) -> HorseshoeSystem<Rat> {
        HorseshoeSystem::with_field(self.map.clone(), self.field.clone())
    }

    pub fn map_in<S: Scalar>(&self, hp: &HorseshoeParams, tp: &TangencyParams) -> Map<S> {
        Map::new(hp, &tp.with_delta(self.spec.slide.clone()))
    }

    /// The same perturbed system in another backend. Fails with SupportsOverlap
    /// when the backend cannot separate the bump supports.
    pub fn system_in<S: Scalar>(&self, hp: &HorseshoeParams, tp: &TangencyParams) -> Result<HorseshoeSystem<S>> {
        Ok(HorseshoeSystem::with_field(self.map_in(hp, tp), convert_field(&self.field)?))
    }

    pub fn transitions(&self) -> usize {
        self.spec.config.points
    }
}

pub fn convert_field<S: Scalar>(f: &PerturbationField<Rat>) -> Result<PerturbationField<S>> {
    let c = |r: &Rat| S::from_rat(r);
    let entries = f
        .entries()
        .iter()
        .map(|e| FieldEntry {
            anchor: e.anchor.to_backend(),
            zeta: [c(&e.zeta[0]), c(&e.zeta[1])],
            omega: e.omega,
            y_support: [c(&e.y_support[0]), c(&e.y_support[1])],
            x_half: c(&e.x_half),
            rho: c(&e.rho),
        })
        .collect();
    PerturbationField::new(entries)
}

/// Builds r_k, x_k, q_k, y_k and the perturbation that links y_k to x_{k+1}.
pub fn critical_chain(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    consts: &Constants,
    growth: &Growth,
    spec: ChainSpec,
) -> Result<CriticalChain> {
    let map = Map::<Rat>::new(hp, &tp.with_delta(spec.slide.clone()));
    let mut points = Vec::new();
    for r in &spec.records {
        let xu = Bridge::new(&map, Kind::Unstable, Carrier::Iu, &r.z)?;
        let ys = Bridge::new(&map, Kind::Stable, Carrier::Is, &r.z.reversed())?;
        let x = Point::new(xu.aff.b.clone(), Rat::ZERO);
        let q = Point::new(Rat::ZERO, ys.aff.b.clone());
        if !map.in_window(&q) {
            return Err(Error::IntersectionNotBracketed { k: r.k });
        }
        let y = map.tangency_raw(&q);
        let rp = Point::new(Rat::ZERO, map.apex_inverse(&x.x));
        if !map.in_window(&rp) {
            return Err(Error::IntersectionNotBracketed { k: r.k });
        }
        points.push(ChainPoint { k: r.k, r: rp, x, q, y });
    }

    let first = spec.config.first;
    let n_exp = spec.config.window_exp;
    let ll = rat_to_f64(&consts.lambda_lo).log2();
    let mut entries = Vec::new();
    let mut zeta_constant: f64 = 0.0;
    for i in 1..points.len() {
        let k = first + i;
        let anchor = points[i - 1].q.clone();
        let zeta = [&points[i].r.x - &anchor.x, &points[i].r.y - &anchor.y];
        let norm = 0.5 * rat_log2(&(&zeta[0] * &zeta[0] + &zeta[1] * &zeta[1]));
        zeta_constant = zeta_constant.max((norm - (k * n_exp) as f64 * ll).exp2());
        // the pair that contains ŵ⁽ᵏ⁾ and hence q_{k-1}
        let word = &growth.pairs[i].bs.word;
        let support = Bridge::new(&map, Kind::Stable, Carrier::Is, word)?.interval;
        if !support.contains_point(&anchor.y) {
            return Err(Error::IntersectionNotBracketed { k });
        }
        entries.push(FieldEntry {
            anchor,
            zeta,
            omega: 0.0,
            y_support: [support.lo, support.hi],
            x_half: map.window[0].clone(),
            rho: rat(1, 2),
        });
    }
    let field = PerturbationField::new(entries)?;
    let horizon = (first + spec.config.points) * n_exp;
    let ln = rat_to_f64(&consts.lambda_lo).powi(n_exp as i32);
    let tail_bound = zeta_constant * (horizon as f64 * ll).exp2() * ln / (1.0 - ln);

    let system = HorseshoeSystem::with_field(map.clone(), field.clone());
    let exact_links = (0..spec.config.points)
        .map(|i| {
            let orbit = system.iterate_orbit(&points[i].x, spec.records[i].n + 2);
            orbit.escaped_at().is_none() && *orbit.last_point() == points[i + 1].x
        })
        .collect();
    Ok(CriticalChain { spec, points, field, map, zeta_constant, tail_bound, exact_links })
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkCheck {
    pub k: usize,
    pub n: usize,
    pub error: f64,
}

/// Iterates g^{n_k+2}(x_k) in backend `S` and measures the distance to x_{k+1}.
pub fn verify_links<S: Scalar>(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    chain: &CriticalChain,
    transitions: usize,
) -> Result<Vec<LinkCheck>> {
    let sys = chain.system_in::<S>(hp, tp)?;
    Ok((0..transitions.min(chain.transitions()))
        .map(|i| {
            let rec = &chain.spec.records[i];
            let x0: Point<S> = chain.points[i].x.to_backend();
            let target: Point<S> = chain.points[i + 1].x.to_backend();
            let orbit = sys.iterate_orbit(&x0, rec.n + 2);
            let error = if orbit.escaped_at().is_some() {
                f64::INFINITY
            } else {
                let p = orbit.last_point();
                let dx = (p.x.clone() - target.x).to_f64();
                let dy = (p.y.clone() - target.y).to_f64();
                dx.hypot(dy)
            };
            LinkCheck { k: rec.k, n: rec.n, error }
        })
        .collect())
}
