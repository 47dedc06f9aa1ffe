//! Itineraries and the bridge/gap geometry on the carriers Iˢ, Iᵘ, L and L̃.
//!
//! A bridge of word w = w₁…wₙ is T_{w₁}∘…∘T_{wₙ}(hull), where T is the inverse
//! branch in the relevant coordinate: h₀(x) = x/σ - 1/2, h₁(x) = 1/2 - x/σ on the
//! unstable side and g₀(y) = λy - 1/2, g₁(y) = 1/2 - λy on the stable side.
//! Unstable words read forward in time. Stable words read backward: w₁ is the
//! strip visited last, so the y-coordinate after visiting z₁…zₙ lies in the
//! stable bridge of reverse(z).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::core_map::{Map, Point};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        assert!(symbols.iter().all(|&s| s < 2), "binary symbols only");
        Word(symbols)
    }
    pub fn empty() -> Self {
        Word(Vec::new())
    }
    pub fn repeat(symbol: u8, n: usize) -> Self {
        Word::new(vec![symbol; n])
    }
    pub fn symbols(&self) -> &[u8] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
    pub fn pushed(&self, s: u8) -> Word {
        let mut v = self.0.clone();
        v.push(s);
        Word::new(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Config(format!("not a binary word: {s}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Carrier {
    Is,
    Iu,
    L,
    Ltilde,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(a: S, b: S) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
    pub fn len(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }
    pub fn center(&self) -> S {
        (self.lo.clone() + self.hi.clone()) / S::from_i64(2)
    }
    /// Closed intervals share a point.
    pub fn meets(&self, o: &Interval<S>) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }
    pub fn overlap(&self, o: &Interval<S>) -> S {
        let lo = S::max_of(self.lo.clone(), o.lo.clone());
        let hi = S::min_of(self.hi.clone(), o.hi.clone());
        if hi > lo {
            hi - lo
        } else {
            S::zero()
        }
    }
    pub fn contains(&self, o: &Interval<S>) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }
    /// `o` inside the open interval.
    pub fn contains_strictly(&self, o: &Interval<S>) -> bool {
        self.lo < o.lo && o.hi < self.hi
    }
    pub fn contains_point(&self, x: &S) -> bool {
        self.lo <= *x && *x <= self.hi
    }
    pub fn to_f64(&self) -> Interval<f64> {
        Interval { lo: self.lo.to_f64(), hi: self.hi.to_f64() }
    }
}

/// t ↦ a·t + b.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine<S> {
    pub a: S,
    pub b: S,
}

impl<S: Scalar> Affine<S> {
    pub fn identity() -> Self {
        Affine { a: S::one(), b: S::zero() }
    }
    pub fn apply(&self, t: &S) -> S {
        self.a.clone() * t.clone() + self.b.clone()
    }
    /// self ∘ inner.
    pub fn after(&self, inner: &Affine<S>) -> Affine<S> {
        Affine { a: self.a.clone() * inner.a.clone(), b: self.a.clone() * inner.b.clone() + self.b.clone() }
    }
    pub fn image(&self, i: &Interval<S>) -> Interval<S> {
        Interval::new(self.apply(&i.lo), self.apply(&i.hi))
    }
}

/// Inverse branch in the coordinate of `kind`.
pub fn inverse_branch<S: Scalar>(map: &Map<S>, kind: Kind, symbol: u8) -> Affine<S> {
    let half = S::one() / S::from_i64(2);
    let rate = match kind {
        Kind::Unstable => S::one() / map.sigma.clone(),
        Kind::Stable => map.lambda.clone(),
    };
    if symbol == 0 {
        Affine { a: rate, b: -half }
    } else {
        Affine { a: -rate, b: half }
    }
}

pub fn hull<S: Scalar>(map: &Map<S>, kind: Kind) -> Interval<S> {
    let a = match kind {
        Kind::Unstable => map.a_u.clone(),
        Kind::Stable => map.a_s.clone(),
    };
    Interval::new(-a.clone(), a)
}

/// Coordinate change from the native axis (x for unstable, y for stable) to the carrier.
fn carrier_map<S: Scalar>(map: &Map<S>, kind: Kind, carrier: Carrier) -> Result<Affine<S>> {
    match (kind, carrier) {
        (Kind::Unstable, Carrier::Iu | Carrier::L) | (Kind::Stable, Carrier::Is | Carrier::Ltilde) => {
            Ok(Affine::identity())
        }
        // apex map A(y) = -a_u + μ + δ + γ(y + a_s)
        (Kind::Stable, Carrier::L) => Ok(Affine { a: map.gamma.clone(), b: map.apex(&S::zero()) }),
        (Kind::Unstable, Carrier::Ltilde) => {
            let inv_g = S::one() / map.gamma.clone();
            Ok(Affine { a: inv_g, b: map.apex_inverse(&S::zero()) })
        }
        _ => Err(Error::CarrierMismatch),
    }
}

#[derive(Clone, Debug)]
pub struct Bridge<S> {
    pub kind: Kind,
    pub carrier: Carrier,
    pub word: Word,
    pub interval: Interval<S>,
    pub slide: S,
    /// Hull coordinate → carrier coordinate for this bridge.
    pub aff: Affine<S>,
}

impl<S: Scalar> Bridge<S> {
    pub fn new(map: &Map<S>, kind: Kind, carrier: Carrier, word: &Word) -> Result<Self> {
        let mut aff = carrier_map(map, kind, carrier)?;
        for &s in word.symbols() {
            aff = aff.after(&inverse_branch(map, kind, s));
        }
        Ok(Bridge {
            kind,
            carrier,
            word: word.clone(),
            interval: aff.image(&hull(map, kind)),
            slide: map.delta.clone(),
            aff,
        })
    }

    pub fn len(&self) -> S {
        self.interval.len()
    }

    pub fn generation(&self) -> usize {
        self.word.len()
    }

    pub fn child(&self, map: &Map<S>, symbol: u8) -> Bridge<S> {
        let aff = self.aff.after(&inverse_branch(map, self.kind, symbol));
        Bridge {
            kind: self.kind,
            carrier: self.carrier,
            word: self.word.pushed(symbol),
            interval: aff.image(&hull(map, self.kind)),
            slide: self.slide.clone(),
            aff,
        }
    }

    /// Children ordered left to right along the carrier.
    pub fn children(&self, map: &Map<S>) -> [Bridge<S>; 2] {
        let c0 = self.child(map, 0);
        let c1 = self.child(map, 1);
        if c0.interval.lo <= c1.interval.lo {
            [c0, c1]
        } else {
            [c1, c0]
        }
    }

    /// The open center gap between the two children.
    pub fn gap(&self, map: &Map<S>) -> Interval<S> {
        let [l, r] = self.children(map);
        Interval { lo: l.interval.hi, hi: r.interval.lo }
    }

    /// Same word and carrier under another map (another slide).
    pub fn remeasure(&self, map: &Map<S>) -> Bridge<S> {
        Bridge::new(map, self.kind, self.carrier, &self.word).expect("carrier already validated")
    }
}

pub fn bridge_interval<S: Scalar>(map: &Map<S>, kind: Kind, word: &Word) -> Interval<S> {
    let carrier = native_carrier(kind);
    Bridge::new(map, kind, carrier, word).expect("native carrier").interval
}

pub fn gap_interval<S: Scalar>(map: &Map<S>, kind: Kind, word: &Word) -> Interval<S> {
    let carrier = native_carrier(kind);
    Bridge::new(map, kind, carrier, word).expect("native carrier").gap(map)
}

pub fn native_carrier(kind: Kind) -> Carrier {
    match kind {
        Kind::Stable => Carrier::Is,
        Kind::Unstable => Carrier::Iu,
    }
}

/// Transfer a bridge from Iˢ/Iᵘ to L.
pub fn project_to_l<S: Scalar>(map: &Map<S>, b: &Bridge<S>) -> Result<Bridge<S>> {
    if b.carrier != native_carrier(b.kind) {
        return Err(Error::CarrierMismatch);
    }
    Bridge::new(map, b.kind, Carrier::L, &b.word)
}

/// Transfer a bridge from Iˢ/Iᵘ to L̃ (the segment x = 0, parameterized by y).
pub fn project_to_ltilde<S: Scalar>(map: &Map<S>, b: &Bridge<S>) -> Result<Bridge<S>> {
    if b.carrier != native_carrier(b.kind) {
        return Err(Error::CarrierMismatch);
    }
    Bridge::new(map, b.kind, Carrier::Ltilde, &b.word)
}

/// Strip labels of the first `depth` iterates of `p` (starting with p itself).
pub fn code_point<S: Scalar>(map: &Map<S>, p: &Point<S>, depth: usize) -> Result<Word> {
    let mut out = Vec::with_capacity(depth);
    let mut cur = p.clone();
    for tick in 0..depth {
        let b = map.strip(&cur).ok_or(Error::EscapedOrbit { tick })?;
        out.push(b);
        cur = map.apply_branch(b, &cur);
    }
    Ok(Word(out))
}

/// The point whose bi-infinite code is ...www.www...
///
/// Both coordinates are fixed points of affine contractions, solved in closed form
/// (exact in rational mode): x of h_{w₁}∘…∘h_{wₙ}, y of g_{wₙ}∘…∘g_{w₁}.
pub fn decode_periodic<S: Scalar>(map: &Map<S>, word: &Word) -> Result<Point<S>> {
    if word.is_empty() {
        return Err(Error::LengthMismatch("periodic word must be nonempty".into()));
    }
    let mut fx = Affine::identity();
    for &s in word.symbols() {
        fx = fx.after(&inverse_branch(map, Kind::Unstable, s));
    }
    let mut fy = Affine::identity();
    for &s in word.symbols().iter().rev() {
        fy = fy.after(&inverse_branch(map, Kind::Stable, s));
    }
    let fixed = |f: &Affine<S>| f.b.clone() / (S::one() - f.a.clone());
    Ok(Point::new(fixed(&fx), fixed(&fy)))
}

/// Horseshoe orbit with a prescribed itinerary.
///
/// `code[i]` is the strip at time i, `past` lists the strips before time 0, most
/// recent first. x is pulled back from the future symbols, y pushed forward from
/// the past ones, so both recursions contract and stay accurate in any backend.
/// Points near the end of `code` only know a truncated future.
pub fn orbit_from_code<S: Scalar>(map: &Map<S>, code: &[u8], past: &[u8]) -> Vec<Point<S>> {
    let n = code.len();
    let hs = [inverse_branch(map, Kind::Unstable, 0), inverse_branch(map, Kind::Unstable, 1)];
    let gs = [inverse_branch(map, Kind::Stable, 0), inverse_branch(map, Kind::Stable, 1)];
    let mut xs = vec![S::zero(); n];
    let mut x = S::zero();
    for i in (0..n).rev() {
        x = hs[code[i] as usize].apply(&x);
        xs[i] = x.clone();
    }
    let mut y = S::zero();
    for &s in past.iter().rev() {
        y = gs[s as usize].apply(&y);
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(Point::new(xs[i].clone(), y.clone()));
        y = gs[code[i] as usize].apply(&y);
    }
    out
}
