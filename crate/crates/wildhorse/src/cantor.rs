//! Thickness, denseness, the Gap Lemma trichotomy and linkage of bridges.

use serde::Serialize;

use crate::core_map::{HorseshoeParams, Map};
use crate::error::{Error, Result};
use crate::scalar::{rat_to_f64, Scalar};
use crate::symbolic::{Bridge, Carrier, Interval, Kind, Word};

/// Depth cap for gap descents; exact mode never comes close for desk-scale pairs.
pub const MAX_DEPTH: usize = 200;

fn extreme_ratio<S: Scalar>(map: &Map<S>, kind: Kind, depth: usize, take_min: bool) -> S {
    let root = Bridge::new(map, kind, crate::symbolic::native_carrier(kind), &Word::empty()).expect("native");
    let mut level = vec![root];
    let mut best: Option<S> = None;
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for b in &level {
            let [l, r] = b.children(map);
            let g = Interval { lo: l.interval.hi.clone(), hi: r.interval.lo.clone() }.len();
            let (ll, rl) = (l.len(), r.len());
            let side = if take_min { S::min_of(ll, rl) } else { S::max_of(ll, rl) };
            let ratio = side / g;
            best = Some(match best {
                None => ratio,
                Some(cur) if take_min => S::min_of(cur, ratio),
                Some(cur) => S::max_of(cur, ratio),
            });
            next.push(l);
            next.push(r);
        }
        level = next;
    }
    best.expect("depth >= 1")
}

/// Infimum over all gaps whose adjacent bridges have generation ≤ `depth`
/// of min(adjacent bridge lengths) / gap length.
pub fn thickness<S: Scalar>(map: &Map<S>, kind: Kind, depth: usize) -> S {
    extreme_ratio(map, kind, depth.max(1), true)
}

/// Same as [`thickness`] with max in place of min, and sup in place of inf.
pub fn denseness<S: Scalar>(map: &Map<S>, kind: Kind, depth: usize) -> S {
    extreme_ratio(map, kind, depth.max(1), false)
}

/// ξ₀ = (σ̄+2)(3-σ̄) / (3(σ̄+3)).
pub fn xi0(hp: &HorseshoeParams) -> f64 {
    let s = rat_to_f64(&hp.sigma_hi());
    (s + 2.0) * (3.0 - s) / (3.0 * (s + 3.0))
}

#[derive(Clone, Debug)]
pub struct CantorApprox<S> {
    pub kind: Kind,
    pub carrier: Carrier,
    pub depth: usize,
    pub bridges: Vec<Interval<S>>,
}

impl<S: Scalar> CantorApprox<S> {
    /// All generation-`depth` sub-bridges of `root`, left to right.
    pub fn of_bridge(map: &Map<S>, root: &Bridge<S>, depth: usize) -> Self {
        let mut level = vec![root.clone()];
        for _ in 0..depth {
            level = level.iter().flat_map(|b| b.children(map)).collect();
        }
        CantorApprox {
            kind: root.kind,
            carrier: root.carrier,
            depth,
            bridges: level.into_iter().map(|b| b.interval).collect(),
        }
    }
}

/// Is `inner` contained in a complementary gap (bounded or not) of the Cantor set
/// spanned by `outer`? `None` when the depth cap is hit.
pub fn in_gap<S: Scalar>(map: &Map<S>, inner: &Interval<S>, outer: &Bridge<S>) -> Option<bool> {
    let mut cur = outer.clone();
    for _ in 0..MAX_DEPTH {
        if !inner.meets(&cur.interval) {
            return Some(true);
        }
        if !cur.interval.contains(inner) {
            // inner covers an endpoint of cur, which is a point of the Cantor set
            return Some(false);
        }
        let [l, r] = cur.children(map);
        let (ml, mr) = (inner.meets(&l.interval), inner.meets(&r.interval));
        cur = match (ml, mr) {
            (false, false) => return Some(true),
            (true, true) => return Some(false),
            (true, false) => l,
            (false, true) => r,
        };
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GapStatus {
    FirstInGapOfSecond,
    SecondInGapOfFirst,
    Intersect,
    DepthExhausted,
}

/// Gap Lemma trichotomy for the Cantor portions spanned by two bridges on one carrier.
///
/// Containment is decided by descending the other set's bridge tree. When
/// neither set sits in a gap of the other, intersection is certified by a
/// descent through nested linked pairs down to `cert_depth` refinements.
pub fn gap_lemma_classify<S: Scalar>(map: &Map<S>, b1: &Bridge<S>, b2: &Bridge<S>, cert_depth: usize) -> GapStatus {
    match in_gap(map, &b1.interval, b2) {
        Some(true) => return GapStatus::FirstInGapOfSecond,
        None => return GapStatus::DepthExhausted,
        Some(false) => {}
    }
    match in_gap(map, &b2.interval, b1) {
        Some(true) => return GapStatus::SecondInGapOfFirst,
        None => return GapStatus::DepthExhausted,
        Some(false) => {}
    }
    match linked_descent(map, b1, b2, cert_depth) {
        Some(_) => GapStatus::Intersect,
        None => GapStatus::DepthExhausted,
    }
}

/// Overlapping, and neither inside a gap of the other.
pub fn is_linked<S: Scalar>(map: &Map<S>, a: &Bridge<S>, b: &Bridge<S>) -> bool {
    a.interval.overlap(&b.interval) > S::zero()
        && in_gap(map, &a.interval, b) == Some(false)
        && in_gap(map, &b.interval, a) == Some(false)
}

/// Refines the longer bridge `steps` times, each time keeping a child that is
/// still linked with the other bridge. Returns the final pair.
pub fn linked_descent<S: Scalar>(
    map: &Map<S>,
    a: &Bridge<S>,
    b: &Bridge<S>,
    steps: usize,
) -> Option<(Bridge<S>, Bridge<S>)> {
    if !is_linked(map, a, b) {
        return None;
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    for _ in 0..steps {
        let refine_a = a.len() >= b.len();
        let (big, small) = if refine_a { (&a, &b) } else { (&b, &a) };
        let child = refine_linked_child(map, big, small)?;
        if refine_a {
            a = child;
        } else {
            b = child;
        }
    }
    Some((a, b))
}

/// A child of `parent` still linked with `other`, nearest the parent's center first.
pub fn refine_linked_child<S: Scalar>(map: &Map<S>, parent: &Bridge<S>, other: &Bridge<S>) -> Option<Bridge<S>> {
    let mut kids = parent.children(map).to_vec();
    let c = parent.interval.center();
    kids.sort_by(|x, y| {
        let dx = (x.interval.center() - c.clone()).abs();
        let dy = (y.interval.center() - c.clone()).abs();
        // tie: left child first
        dx.partial_cmp(&dy).unwrap_or(std::cmp::Ordering::Equal)
    });
    kids.into_iter().find(|k| is_linked(map, k, other))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LinkStatus {
    Unlinked,
    ContainedInGapOfOther,
    Linked,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkageReport {
    pub status: LinkStatus,
    pub xi: f64,
    pub proportional_k: f64,
    pub overlap: f64,
}

pub fn linkage<S: Scalar>(map: &Map<S>, b1: &Bridge<S>, b2: &Bridge<S>) -> Result<LinkageReport> {
    if b1.carrier != b2.carrier {
        return Err(Error::CarrierMismatch);
    }
    let overlap = b1.interval.overlap(&b2.interval);
    let (l1, l2) = (b1.len(), b2.len());
    let shorter = S::min_of(l1.clone(), l2.clone());
    let longer = S::max_of(l1, l2);
    let xi = (overlap.clone() / shorter.clone()).to_f64();
    let proportional_k = (longer / shorter).to_f64();
    let status = if overlap <= S::zero() {
        LinkStatus::Unlinked
    } else if in_gap(map, &b1.interval, b2) != Some(false) || in_gap(map, &b2.interval, b1) != Some(false) {
        LinkStatus::ContainedInGapOfOther
    } else {
        LinkStatus::Linked
    };
    Ok(LinkageReport { status, xi, proportional_k, overlap: overlap.to_f64() })
}

/// Overlap ratio of two plain intervals.
pub fn interval_xi<S: Scalar>(a: &Interval<S>, b: &Interval<S>) -> S {
    a.overlap(b) / S::min_of(a.len(), b.len())
}
