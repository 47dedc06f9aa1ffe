//! The piecewise-affine horseshoe, its quadratic tangency return, the slide and
//! the localized bump perturbation, plus orbit iteration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{rat, rat_to_f64, Rat, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct HorseshoeParams {
    pub sigma: Rat,
    pub lambda: Rat,
    pub epsilon0: Rat,
}

impl HorseshoeParams {
    pub fn new(sigma: Rat, lambda: Rat, epsilon0: Rat) -> Result<Self> {
        let hp = HorseshoeParams { sigma, lambda, epsilon0 };
        hp.validate()?;
        Ok(hp)
    }

    /// σ = 5/2, λ = 3/10, ε₀ = 1/100.
    pub fn standard() -> Self {
        HorseshoeParams { sigma: rat(5, 2), lambda: rat(3, 10), epsilon0: rat(1, 100) }
    }

    pub fn validate(&self) -> Result<()> {
        let failed: Vec<String> = parameter_checks(self, None, None)
            .into_iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::Params(failed.join(", ")))
        }
    }

    pub fn a_u(&self) -> Rat {
        // 1 / (2 (1 - 1/σ))
        &self.sigma / (Rat::from(2) * (&self.sigma - Rat::ONE))
    }
    pub fn a_s(&self) -> Rat {
        Rat::ONE / (Rat::from(2) * (Rat::ONE - &self.lambda))
    }
    pub fn sigma_lo(&self) -> Rat {
        &self.sigma - &self.epsilon0
    }
    pub fn sigma_hi(&self) -> Rat {
        &self.sigma + &self.epsilon0
    }
    pub fn lambda_lo(&self) -> Rat {
        &self.lambda - &self.epsilon0
    }
    pub fn lambda_hi(&self) -> Rat {
        &self.lambda + &self.epsilon0
    }
    pub fn tau_s(&self) -> Rat {
        &self.lambda / (Rat::ONE - Rat::from(2) * &self.lambda)
    }
    pub fn tau_u(&self) -> Rat {
        let inv = Rat::ONE / &self.sigma;
        &inv / (Rat::ONE - Rat::from(2) * &inv)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TangencyParams {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    pub mu: Rat,
    pub delta: Rat,
    /// Half-widths of the window U around (0, -a_s), in x and y.
    pub window: [Rat; 2],
}

impl TangencyParams {
    pub fn standard() -> Self {
        TangencyParams {
            alpha: rat(2, 1),
            beta: rat(1, 1),
            gamma: rat(1, 1),
            mu: rat(1, 100),
            delta: Rat::ZERO,
            window: [rat(1, 20), rat(1, 20)],
        }
    }

    pub fn with_delta(&self, delta: Rat) -> Self {
        TangencyParams { delta, ..self.clone() }
    }

    pub fn validate(&self, hp: &HorseshoeParams) -> Result<()> {
        let mut bad = Vec::new();
        for (name, v) in [("alpha", &self.alpha), ("beta", &self.beta), ("gamma", &self.gamma), ("mu", &self.mu)] {
            if *v <= Rat::ZERO {
                bad.push(format!("{name} > 0"));
            }
        }
        if self.delta.clone().abs() >= self.mu {
            bad.push("|delta| < mu".into());
        }
        let [wx, wy] = &self.window;
        if *wx <= Rat::ZERO || *wy <= Rat::ZERO {
            bad.push("window half-widths > 0".into());
        }
        // strips start at x = 1/2 - 1/σ
        let strip_inner = rat(1, 2) - Rat::ONE / &hp.sigma;
        if *wx >= strip_inner {
            bad.push("window disjoint from the strips".into());
        }
        if *wy >= Rat::ONE - hp.a_s() {
            bad.push("window inside the square".into());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Params(bad.join(", ")))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamCheck {
    pub name: String,
    pub pass: bool,
    /// Positive when the inequality holds, in the units of the compared quantity.
    pub slack: f64,
}

fn check(name: &str, lhs: f64, rhs: f64) -> ParamCheck {
    // lhs < rhs
    ParamCheck { name: name.into(), pass: lhs < rhs, slack: rhs - lhs }
}

/// Every parameter inequality the constructions rely on.
///
/// `eta` enables the chain-growth compatibility test λ̄·σ̄^{(1+2η)/(1-η)} < 1.
pub fn parameter_checks(hp: &HorseshoeParams, tp: Option<&TangencyParams>, eta: Option<f64>) -> Vec<ParamCheck> {
    let s = rat_to_f64(&hp.sigma);
    let l = rat_to_f64(&hp.lambda);
    let (s_lo, s_hi) = (rat_to_f64(&hp.sigma_lo()), rat_to_f64(&hp.sigma_hi()));
    let (l_lo, l_hi) = (rat_to_f64(&hp.lambda_lo()), rat_to_f64(&hp.lambda_hi()));
    let mut out = vec![
        check("2 < sigma", 2.0, s),
        check("sigma < 3", s, 3.0),
        check("0 < lambda_lo", 0.0, l_lo),
        check("lambda*sigma < 1", l * s, 1.0),
        check("lambda < 1/2", l, 0.5),
        check("2 < sigma_lo", 2.0, s_lo),
        check("sigma_hi < 3", s_hi, 3.0),
        check("lambda_hi*sigma_hi < 1", l_hi * s_hi, 1.0),
        check("tau_s*tau_u > 1", 1.0, rat_to_f64(&(hp.tau_s() * hp.tau_u()))),
        check("lambda_hi*(1+sigma_hi) < 2", l_hi * (1.0 + s_hi), 2.0),
    ];
    if let Some(eta) = eta {
        let v = l_hi * s_hi.powf((1.0 + 2.0 * eta) / (1.0 - eta));
        out.push(check("lambda_hi*sigma_hi^((1+2eta)/(1-eta)) < 1", v, 1.0));
    }
    if let Some(tp) = tp {
        out.push(ParamCheck {
            name: "tangency parameters".into(),
            pass: tp.validate(hp).is_ok(),
            slack: rat_to_f64(&(&tp.mu - tp.delta.clone().abs())),
        });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

pub type PointQ<S> = Point<S>;

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }
    pub fn to_f64(&self) -> Point<f64> {
        Point { x: self.x.to_f64(), y: self.y.to_f64() }
    }
}

impl Point<Rat> {
    pub fn to_backend<T: Scalar>(&self) -> Point<T> {
        Point { x: T::from_rat(&self.x), y: T::from_rat(&self.y) }
    }
}

impl Point<f64> {
    pub fn dist(&self, o: &Point<f64>) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    S0,
    S1,
    TangencyWindow,
    TransitTick,
    Escaped,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::S0 => "S0",
            Region::S1 => "S1",
            Region::TangencyWindow => "TangencyWindow",
            Region::TransitTick => "TransitTick",
            Region::Escaped => "Escaped",
        }
    }
}

/// Model constants converted to one backend.
#[derive(Clone, Debug)]
pub struct Map<S> {
    pub sigma: S,
    pub lambda: S,
    pub a_u: S,
    pub a_s: S,
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub mu: S,
    pub delta: S,
    pub window: [S; 2],
    half: S,
    inv_sigma: S,
}

impl<S: Scalar> Map<S> {
    pub fn new(hp: &HorseshoeParams, tp: &TangencyParams) -> Self {
        let c = |r: &Rat| S::from_rat(r);
        Map {
            sigma: c(&hp.sigma),
            lambda: c(&hp.lambda),
            a_u: c(&hp.a_u()),
            a_s: c(&hp.a_s()),
            alpha: c(&tp.alpha),
            beta: c(&tp.beta),
            gamma: c(&tp.gamma),
            mu: c(&tp.mu),
            delta: c(&tp.delta),
            window: [c(&tp.window[0]), c(&tp.window[1])],
            half: c(&rat(1, 2)),
            inv_sigma: c(&(Rat::ONE / &hp.sigma)),
        }
    }

    /// Which strip contains `p`; S_i = {|x ∓ 1/2| ≤ 1/σ, |y| ≤ 1}.
    pub fn strip(&self, p: &Point<S>) -> Option<u8> {
        if p.y.abs() > S::one() {
            return None;
        }
        if (p.x.clone() + self.half.clone()).abs() <= self.inv_sigma {
            Some(0)
        } else if (p.x.clone() - self.half.clone()).abs() <= self.inv_sigma {
            Some(1)
        } else {
            None
        }
    }

    pub fn in_window(&self, p: &Point<S>) -> bool {
        p.x.abs() <= self.window[0] && (p.y.clone() + self.a_s.clone()).abs() <= self.window[1]
    }

    /// Region containing `p` (never TransitTick).
    pub fn locate(&self, p: &Point<S>) -> Region {
        match self.strip(p) {
            Some(0) => Region::S0,
            Some(_) => Region::S1,
            None if self.in_window(p) => Region::TangencyWindow,
            None => Region::Escaped,
        }
    }

    pub fn apply_branch(&self, b: u8, p: &Point<S>) -> Point<S> {
        if b == 0 {
            Point::new(
                self.sigma.clone() * (p.x.clone() + self.half.clone()),
                self.lambda.clone() * p.y.clone() - self.half.clone(),
            )
        } else {
            Point::new(
                -(self.sigma.clone() * (p.x.clone() - self.half.clone())),
                self.half.clone() - self.lambda.clone() * p.y.clone(),
            )
        }
    }

    /// One step of f on S₀ ∪ S₁; `None` means the point escaped.
    pub fn eval_branch(&self, p: &Point<S>) -> Option<Point<S>> {
        self.strip(p).map(|b| self.apply_branch(b, p))
    }

    pub fn eval_branch_inverse(&self, p: &Point<S>, branch: u8) -> Result<Point<S>> {
        // the image of S_i is the full-width horizontal strip |y ∓ 1/2| ≤ λ
        let centre = if branch == 0 { -self.half.clone() } else { self.half.clone() };
        let inside = p.x.abs() <= S::one() && (p.y.clone() - centre).abs() <= self.lambda;
        if !inside {
            return Err(Error::OutOfImage { branch });
        }
        Ok(if branch == 0 {
            Point::new(
                p.x.clone() / self.sigma.clone() - self.half.clone(),
                (p.y.clone() + self.half.clone()) / self.lambda.clone(),
            )
        } else {
            Point::new(
                self.half.clone() - p.x.clone() / self.sigma.clone(),
                (self.half.clone() - p.y.clone()) / self.lambda.clone(),
            )
        })
    }

    /// The apex abscissa on L of the stable leaf through height `y`:
    /// A(y) = -a_u + μ + δ + γ(y + a_s).
    pub fn apex(&self, y: &S) -> S {
        self.mu.clone() - self.a_u.clone() + self.delta.clone() + self.gamma.clone() * (y.clone() + self.a_s.clone())
    }

    pub fn apex_inverse(&self, x: &S) -> S {
        (x.clone() + self.a_u.clone() - self.mu.clone() - self.delta.clone()) / self.gamma.clone() - self.a_s.clone()
    }

    pub fn tangency_raw(&self, p: &Point<S>) -> Point<S> {
        let quad = self.beta.clone() * p.x.clone() * p.x.clone();
        Point::new(self.apex(&p.y) - quad, -(self.alpha.clone() * p.x.clone()))
    }

    /// The double step F² on the window.
    pub fn eval_tangency_step(&self, p: &Point<S>) -> Result<Point<S>> {
        if !self.in_window(p) {
            return Err(Error::OutsideWindow);
        }
        Ok(self.tangency_raw(p))
    }

    /// Jacobian rows of F² at `p`: [[-2βx, γ], [-α, 0]].
    pub fn tangency_jacobian(&self, p: &Point<S>) -> [[S; 2]; 2] {
        let two = S::from_i64(2);
        [
            [-(two * self.beta.clone() * p.x.clone()), self.gamma.clone()],
            [-self.alpha.clone(), S::zero()],
        ]
    }
}

/// The step function: 0 for t ≤ -1, 1 for t ≥ 0, and
/// e^{-1/(t+1)} / (e^{-1/(t+1)} + e^{1/t}) in between.
pub fn phi<S: Scalar>(t: &S) -> S {
    let one = S::one();
    if *t <= -one.clone() {
        return S::zero();
    }
    if *t >= S::zero() {
        return one;
    }
    let a = (-(one.clone() / (t.clone() + one.clone()))).exp();
    let b = (one / t.clone()).exp();
    a.clone() / (a + b)
}

/// φ_{ρ,[a,b]}(x) = φ((x-a)/(ρ(b-a))) + φ((b-x)/(ρ(b-a))) - 1.
pub fn eval_bump<S: Scalar>(x: &S, rho: &S, a: &S, b: &S) -> Result<S> {
    if a >= b {
        return Err(Error::DegenerateInterval);
    }
    if *x >= *a && *x <= *b {
        return Ok(S::one());
    }
    let w = rho.clone() * (b.clone() - a.clone());
    let left = phi(&((x.clone() - a.clone()) / w.clone()));
    let right = phi(&((b.clone() - x.clone()) / w));
    Ok(left + right - S::one())
}

#[derive(Clone, Debug)]
pub struct FieldEntry<S> {
    pub anchor: Point<S>,
    pub zeta: [S; 2],
    pub omega: f64,
    pub y_support: [S; 2],
    pub x_half: S,
    pub rho: S,
}

impl<S: Scalar> FieldEntry<S> {
    fn inflated(&self) -> [S; 2] {
        let [a, b] = &self.y_support;
        let m = self.rho.clone() / S::from_i64(10) * (b.clone() - a.clone());
        [a.clone() - m.clone(), b.clone() + m]
    }

    /// χ(x)·χ_k(y).
    pub fn weight(&self, p: &Point<S>) -> S {
        let xw = self.x_half.clone() * S::from_f64(1.5);
        if p.x.abs() > xw {
            return S::zero();
        }
        let [lo, hi] = self.inflated();
        if p.y < lo || p.y > hi {
            return S::zero();
        }
        let quarter = S::from_rat(&rat(1, 4));
        let chi_x = eval_bump(&p.x, &quarter, &-self.x_half.clone(), &self.x_half).unwrap_or_else(|_| S::zero());
        if chi_x == S::zero() {
            return chi_x;
        }
        let rho_y = self.rho.clone() / S::from_i64(10);
        let chi_y = eval_bump(&p.y, &rho_y, &self.y_support[0], &self.y_support[1]).unwrap_or_else(|_| S::zero());
        chi_x * chi_y
    }

    /// ξ_k(p) - p with ξ_k(p) = q + ζ + Rot(ω)(p - q).
    fn displacement(&self, p: &Point<S>) -> [S; 2] {
        if self.omega == 0.0 {
            return self.zeta.clone();
        }
        let (s, c) = self.omega.sin_cos();
        let (s, c) = (S::from_f64(s), S::from_f64(c));
        let dx = p.x.clone() - self.anchor.x.clone();
        let dy = p.y.clone() - self.anchor.y.clone();
        let rx = c.clone() * dx.clone() - s.clone() * dy.clone();
        let ry = s * dx.clone() + c * dy.clone();
        [self.zeta[0].clone() + rx - dx, self.zeta[1].clone() + ry - dy]
    }
}

/// Φ(p) = p + Σ_k Φ_k(p)(ξ_k(p) - p) with pairwise disjoint supports.
#[derive(Clone, Debug)]
pub struct PerturbationField<S> {
    entries: Vec<FieldEntry<S>>,
}

impl<S: Scalar> Default for PerturbationField<S> {
    fn default() -> Self {
        PerturbationField { entries: Vec::new() }
    }
}

impl<S: Scalar> PerturbationField<S> {
    pub fn new(entries: Vec<FieldEntry<S>>) -> Result<Self> {
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                let [a0, a1] = entries[i].inflated();
                let [b0, b1] = entries[j].inflated();
                if a0 <= b1 && b0 <= a1 {
                    return Err(Error::SupportsOverlap(i, j));
                }
            }
        }
        Ok(PerturbationField { entries })
    }

    pub fn entries(&self) -> &[FieldEntry<S>] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn eval(&self, p: &Point<S>) -> Point<S> {
        for e in &self.entries {
            let w = e.weight(p);
            if w != S::zero() {
                let [dx, dy] = e.displacement(p);
                return Point::new(p.x.clone() + w.clone() * dx, p.y.clone() + w * dy);
            }
        }
        p.clone()
    }
}

/// The perturbed map g = f ∘ Φ, where f is the horseshoe plus the tangency double step.
#[derive(Clone, Debug)]
pub struct HorseshoeSystem<S> {
    pub map: Map<S>,
    pub field: PerturbationField<S>,
}

#[derive(Clone, Debug)]
pub enum Step<S> {
    Branch(u8, Point<S>),
    /// Argument of F² (the perturbed point) and the landing point.
    Tangency(Point<S>, Point<S>),
    Escaped,
}

impl<S: Scalar> HorseshoeSystem<S> {
    pub fn new(hp: &HorseshoeParams, tp: &TangencyParams) -> Self {
        HorseshoeSystem { map: Map::new(hp, tp), field: PerturbationField::default() }
    }

    pub fn with_field(map: Map<S>, field: PerturbationField<S>) -> Self {
        HorseshoeSystem { map, field }
    }

    pub fn step(&self, p: &Point<S>) -> Step<S> {
        let p = if self.field.is_empty() { p.clone() } else { self.field.eval(p) };
        if let Some(b) = self.map.strip(&p) {
            Step::Branch(b, self.map.apply_branch(b, &p))
        } else if self.map.in_window(&p) {
            let land = self.map.tangency_raw(&p);
            Step::Tangency(p, land)
        } else {
            Step::Escaped
        }
    }

    pub fn iterate_orbit(&self, p0: &Point<S>, ticks: usize) -> OrbitSegment<S> {
        let mut samples = Vec::with_capacity(ticks);
        let mut cur = p0.clone();
        let mut tick = 0;
        while tick < ticks {
            match self.step(&cur) {
                Step::Branch(b, next) => {
                    tick += 1;
                    let region = if b == 0 { Region::S0 } else { Region::S1 };
                    samples.push(Sample { tick, point: next.clone(), region });
                    cur = next;
                }
                Step::Tangency(pre, land) => {
                    tick += 1;
                    samples.push(Sample { tick, point: pre, region: Region::TransitTick });
                    if tick == ticks {
                        break;
                    }
                    tick += 1;
                    samples.push(Sample { tick, point: land.clone(), region: Region::TangencyWindow });
                    cur = land;
                }
                Step::Escaped => {
                    tick += 1;
                    samples.push(Sample { tick, point: cur.clone(), region: Region::Escaped });
                    break;
                }
            }
        }
        OrbitSegment { seed: p0.clone(), samples }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample<S> {
    pub tick: usize,
    pub point: Point<S>,
    pub region: Region,
}

/// Orbit from `seed` (tick 0). Sample `t` holds the point at tick `t` and is
/// labelled by the piece of the map that produced it; a TransitTick carries the
/// argument of the double step, and Escaped repeats the last point.
#[derive(Clone, Debug)]
pub struct OrbitSegment<S> {
    pub seed: Point<S>,
    pub samples: Vec<Sample<S>>,
}

impl<S: Scalar> OrbitSegment<S> {
    pub fn escaped_at(&self) -> Option<usize> {
        self.samples.iter().find(|s| s.region == Region::Escaped).map(|s| s.tick)
    }

    pub fn last_point(&self) -> &Point<S> {
        self.samples.last().map(|s| &s.point).unwrap_or(&self.seed)
    }

    /// Points at ticks 0..n as doubles, with a transit flag.
    pub fn points_f64(&self, n: usize) -> Vec<(Point<f64>, bool)> {
        let mut out = Vec::with_capacity(n);
        if n > 0 {
            out.push((self.seed.to_f64(), false));
        }
        for s in self.samples.iter().take(n.saturating_sub(1)) {
            out.push((s.point.to_f64(), s.region == Region::TransitTick));
        }
        out
    }

    pub fn csv_rows(&self) -> Vec<(usize, f64, f64, &'static str)> {
        let seed = self.seed.to_f64();
        let mut rows = vec![(0, seed.x, seed.y, "seed")];
        for s in &self.samples {
            let p = s.point.to_f64();
            rows.push((s.tick, p.x, p.y, s.region.label()));
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_map<S: Scalar>() -> Map<S> {
        Map::new(&HorseshoeParams::standard(), &TangencyParams::standard())
    }

    fn p(x: Rat, y: Rat) -> Point<Rat> {
        Point::new(x, y)
    }

    #[test]
    fn derived_constants() {
        let hp = HorseshoeParams::standard();
        assert_eq!(hp.a_u(), rat(5, 6));
        assert_eq!(hp.a_s(), rat(5, 7));
        assert_eq!(hp.tau_s(), rat(3, 4));
        assert_eq!(hp.tau_u(), rat(2, 1));
        assert!(hp.validate().is_ok());
    }

    #[test]
    fn branch_examples() {
        let m = std_map::<Rat>();
        let fixed = p(rat(-5, 6), rat(-5, 7));
        assert_eq!(m.eval_branch(&fixed), Some(fixed.clone()));
        assert_eq!(m.eval_branch(&p(rat(-1, 2), Rat::ZERO)), Some(p(Rat::ZERO, rat(-1, 2))));
        assert_eq!(m.eval_branch(&p(Rat::ZERO, Rat::ZERO)), None);
    }

    #[test]
    fn inverse_examples() {
        let m = std_map::<Rat>();
        assert_eq!(m.eval_branch_inverse(&p(Rat::ZERO, rat(-1, 2)), 0).unwrap(), p(rat(-1, 2), Rat::ZERO));
        let fixed = p(rat(-5, 6), rat(-5, 7));
        assert_eq!(m.eval_branch_inverse(&fixed, 0).unwrap(), fixed);
        // solve -σ(x - 1/2) = 1/2, 1/2 - λy = 1/2
        assert_eq!(m.eval_branch_inverse(&p(rat(1, 2), rat(1, 2)), 1).unwrap(), p(rat(3, 10), Rat::ZERO));
        assert_eq!(m.eval_branch_inverse(&p(Rat::ZERO, rat(1, 2)), 0), Err(Error::OutOfImage { branch: 0 }));
    }

    #[test]
    fn tangency_examples() {
        let m = std_map::<Rat>();
        let apex = m.eval_tangency_step(&p(Rat::ZERO, rat(-5, 7))).unwrap();
        assert_eq!(apex, p(rat(-5, 6) + rat(1, 100), Rat::ZERO));
        // x = 1/10 sits on the strip edge, outside the default window: formula only
        let q = m.tangency_raw(&p(rat(1, 10), rat(-5, 7)));
        assert_eq!(q, p(rat(-5, 6), rat(-1, 5)));
        let tp = TangencyParams::standard().with_delta(rat(1, 1000));
        let m2: Map<Rat> = Map::new(&HorseshoeParams::standard(), &tp);
        let slid = m2.eval_tangency_step(&p(Rat::ZERO, rat(-5, 7))).unwrap();
        assert!((rat_to_f64(&slid.x) + 0.822_333_333_333).abs() < 1e-12);
        assert_eq!(m.eval_tangency_step(&p(Rat::ZERO, Rat::ZERO)), Err(Error::OutsideWindow));
    }

    #[test]
    fn bump_examples() {
        let (a, b) = (0.0, 1.0);
        assert_eq!(eval_bump(&0.5, &0.25, &a, &b).unwrap(), 1.0);
        assert_eq!(eval_bump(&(-0.5), &0.25, &a, &b).unwrap(), 0.0);
        // argument -1/2 of the step: both exponentials equal e^{-2}
        let v = eval_bump(&rat(-1, 8), &rat(1, 4), &Rat::ZERO, &Rat::ONE).unwrap();
        assert_eq!(v, rat(1, 2));
        assert!(eval_bump(&0.0, &0.25, &1.0, &1.0).is_err());
    }

    #[test]
    fn orbit_examples() {
        let sys: HorseshoeSystem<Rat> = HorseshoeSystem::new(&HorseshoeParams::standard(), &TangencyParams::standard());
        let fixed = p(rat(-5, 6), rat(-5, 7));
        let orb = sys.iterate_orbit(&fixed, 10);
        assert_eq!(orb.samples.len(), 10);
        assert!(orb.samples.iter().all(|s| s.point == fixed && s.region == Region::S0));

        let orb = sys.iterate_orbit(&p(rat(-1, 2), Rat::ZERO), 2);
        assert_eq!(orb.samples[0].point, p(Rat::ZERO, rat(-1, 2)));
        assert_eq!(orb.samples[1].region, Region::Escaped);
        assert_eq!(orb.escaped_at(), Some(2));
    }

    #[test]
    fn window_takes_two_ticks() {
        let sys: HorseshoeSystem<Rat> = HorseshoeSystem::new(&HorseshoeParams::standard(), &TangencyParams::standard());
        let orb = sys.iterate_orbit(&p(Rat::ZERO, rat(-5, 7)), 3);
        assert_eq!(orb.samples[0].region, Region::TransitTick);
        assert_eq!(orb.samples[1].region, Region::TangencyWindow);
        assert_eq!(orb.samples[1].point, p(rat(-5, 6) + rat(1, 100), Rat::ZERO));
        assert_eq!(orb.samples[2].region, Region::S0);
        let ticks: Vec<usize> = orb.samples.iter().map(|s| s.tick).collect();
        assert_eq!(ticks, vec![1, 2, 3]);
    }

    #[test]
    fn field_translates_anchor() {
        let entry = FieldEntry {
            anchor: p(Rat::ZERO, rat(-7, 10)),
            zeta: [Rat::ZERO, rat(1, 1000)],
            omega: 0.0,
            y_support: [rat(-71, 100), rat(-69, 100)],
            x_half: rat(1, 20),
            rho: rat(1, 2),
        };
        let field = PerturbationField::new(vec![entry]).unwrap();
        assert_eq!(field.eval(&p(Rat::ZERO, rat(-7, 10))), p(Rat::ZERO, rat(-7, 10) + rat(1, 1000)));
        let far = p(rat(1, 2), rat(1, 2));
        assert_eq!(field.eval(&far), far);
    }

    #[test]
    fn overlapping_supports_rejected() {
        let e = |lo: i64, hi: i64| FieldEntry {
            anchor: p(Rat::ZERO, Rat::ZERO),
            zeta: [Rat::ZERO, Rat::ZERO],
            omega: 0.0,
            y_support: [rat(lo, 100), rat(hi, 100)],
            x_half: rat(1, 20),
            rho: Rat::ONE,
        };
        assert_eq!(PerturbationField::new(vec![e(0, 10), e(10, 20)]).unwrap_err(), Error::SupportsOverlap(0, 1));
        assert!(PerturbationField::new(vec![e(0, 10), e(12, 20)]).is_ok());
    }

    #[test]
    fn parameter_check_examples() {
        let all = parameter_checks(&HorseshoeParams::standard(), None, None);
        assert!(all.iter().all(|c| c.pass));
        let tau = all.iter().find(|c| c.name.starts_with("tau")).unwrap();
        assert!((tau.slack - 0.5).abs() < 1e-12);
        let bad = HorseshoeParams { lambda: rat(45, 100), ..HorseshoeParams::standard() };
        let failed: Vec<_> = parameter_checks(&bad, None, None).into_iter().filter(|c| !c.pass).map(|c| c.name).collect();
        assert!(failed.contains(&"lambda*sigma < 1".to_string()));
        let bad = HorseshoeParams { sigma: rat(32, 10), lambda: rat(1, 10), ..HorseshoeParams::standard() };
        let failed: Vec<_> = parameter_checks(&bad, None, None).into_iter().filter(|c| !c.pass).map(|c| c.name).collect();
        assert!(failed.contains(&"sigma < 3".to_string()));
    }
}
