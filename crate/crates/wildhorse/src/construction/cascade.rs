//! Wandering rectangles R_k around the chain points.
//!
//! Widths are far below double range for long chains, so everything is kept as
//! base-2 logarithms. In the affine model g^{n_k+2} maps x_k + (d_x, d_y) to
//! x_{k+1} + (γsλⁿd_y - βσ²ⁿd_x², -αsσⁿd_x) exactly (s = ±1 is the orientation
//! of the itinerary), so inclusion reduces to normalized coordinates.

use serde::Serialize;

use super::CriticalChain;
use crate::core_map::{HorseshoeParams, Point, TangencyParams};
use crate::error::{Error, Result};
use crate::scalar::{rat_log2, rat_to_f64, with_mp_precision, Mp, Rat, Scalar};
use crate::symbolic::{Bridge, Carrier, Kind};

/// log2(2^a + 2^b).
fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

#[derive(Clone, Debug, Serialize)]
pub struct Rectangle {
    pub k: usize,
    #[serde(skip)]
    pub center: Point<Rat>,
    pub center_x: f64,
    pub log2_width: f64,
    pub log2_height: f64,
    pub log2_diam: f64,
    /// Exponent Σ_{i≥0} n_{k+i}/2^i, truncated at the horizon.
    pub exponent: f64,
    pub eq029: bool,
    pub in_gap: bool,
    pub off_image_strips: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub k: usize,
    pub n: usize,
    /// 1 - max normalized coordinate over the worst case of the rectangle.
    pub margin: f64,
    /// Same quantity over the boundary samples.
    pub sampled_margin: f64,
    /// The image of R_k sits on the bump plateau at tick n_k.
    pub plateau: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectCheck {
    pub k: usize,
    pub bits: usize,
    pub samples: usize,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RectangleCascade {
    pub rho: f64,
    pub rectangles: Vec<Rectangle>,
    pub inclusions: Vec<InclusionReport>,
    pub pairwise_disjoint: bool,
    pub diam_decreasing: bool,
    pub direct: Vec<DirectCheck>,
}

impl RectangleCascade {
    pub fn min_margin(&self) -> f64 {
        self.inclusions.iter().map(|r| r.margin.min(r.sampled_margin)).fold(f64::INFINITY, f64::min)
    }
    pub fn all_in_gaps(&self) -> bool {
        self.rectangles.iter().all(|r| r.in_gap && r.off_image_strips)
    }
    pub fn all_plateau(&self) -> bool {
        self.inclusions.iter().all(|r| r.plateau)
    }
    pub fn eq029_all(&self) -> bool {
        self.rectangles.iter().all(|r| r.eq029)
    }
}

#[derive(Clone, Debug)]
pub struct CascadeOptions {
    pub rho: Rat,
    pub eta: f64,
    /// Boundary samples per edge.
    pub samples_per_edge: usize,
    /// Transitions also pushed through the perturbed system in [`Mp`].
    pub direct_transitions: usize,
    pub direct_samples: usize,
}

impl Default for CascadeOptions {
    fn default() -> Self {
        CascadeOptions {
            rho: Rat::ONE / Rat::from(1000),
            eta: 0.08,
            samples_per_edge: 16,
            direct_transitions: 2,
            direct_samples: 8,
        }
    }
}

fn boundary(samples_per_edge: usize) -> Vec<(f64, f64)> {
    let m = samples_per_edge.max(1);
    let mut pts = Vec::with_capacity(4 * m);
    for i in 0..m {
        let t = -1.0 + 2.0 * i as f64 / m as f64;
        pts.extend([(t, -1.0), (1.0, t), (-t, 1.0), (-1.0, -t)]);
    }
    pts
}

pub fn rectangle_cascade(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    chain: &CriticalChain,
    opts: &CascadeOptions,
) -> Result<RectangleCascade> {
    if opts.rho <= Rat::ZERO || opts.rho >= Rat::ONE {
        return Err(Error::Config("rho must lie in (0, 1)".into()));
    }
    let recs = &chain.spec.records;
    let m = &chain.map;
    let l2 = |r: &Rat| rat_to_f64(r).log2();
    let (ls, ls_hi, ll) = (l2(&hp.sigma), l2(&hp.sigma_hi()), l2(&hp.lambda));
    let (la, lb, lg) = (l2(&tp.alpha), l2(&tp.beta), l2(&tp.gamma));
    let lrho = l2(&opts.rho);

    // Past the horizon the series is closed with n held at its last value,
    // i.e. S_last = 2 n_last.
    let mut exps = vec![0.0; recs.len()];
    for i in (0..recs.len()).rev() {
        let tail = if i + 1 < recs.len() { exps[i + 1] / 2.0 } else { recs[i].n as f64 };
        exps[i] = recs[i].n as f64 + tail;
    }

    let mut rects = Vec::new();
    for (i, r) in recs.iter().enumerate() {
        let lw = lrho - lb - exps[i] * ls_hi;
        let lh = (20.0f64).log2() + la - lb / 2.0 + lw / 2.0;
        let ldiam = 0.5 * log2_add(2.0 * lw, 2.0 * lh);
        let n2 = 2.0 * r.n as f64;
        let eq029 = exps[i] >= n2 - 1e-9 && exps[i] <= n2 / (1.0 - opts.eta) + 1e-9;
        let bu = Bridge::new(m, Kind::Unstable, Carrier::Iu, &r.z)?;
        let gap = bu.gap(m);
        // the gap is centered at x_k
        let in_gap = lw < rat_log2(&gap.len());
        let off_image_strips = lh - 1.0 < (0.5 - rat_to_f64(&hp.lambda)).log2();
        let c = &chain.points[i].x;
        rects.push(Rectangle {
            k: r.k,
            center: c.clone(),
            center_x: rat_to_f64(&c.x),
            log2_width: lw,
            log2_height: lh,
            log2_diam: ldiam,
            exponent: exps[i],
            eq029,
            in_gap,
            off_image_strips,
        });
    }

    let mut inclusions = Vec::new();
    let bnd = boundary(opts.samples_per_edge);
    for i in 0..chain.transitions() {
        let (r, a, b) = (&recs[i], &rects[i], &rects[i + 1]);
        let n = r.n as f64;
        let (hw, hh) = (a.log2_width - 1.0, a.log2_height - 1.0);
        let (nw, nh) = (b.log2_width - 1.0, b.log2_height - 1.0);
        // |u'| ≤ 2^{t1}|e_y| + 2^{t2}e_x², |v'| = 2^{t3}|e_x| for e ∈ [-1,1]²
        let t1 = lg + n * ll + hh - nw;
        let t2 = lb + 2.0 * n * ls + 2.0 * hw - nw;
        let t3 = la + n * ls + hw - nh;
        let margin = 1.0 - log2_add(t1, t2).exp2().max(t3.exp2());
        let s = if r.z.symbols().iter().filter(|&&c| c == 1).count() % 2 == 0 { 1.0 } else { -1.0 };
        let sampled = bnd
            .iter()
            .map(|&(ex, ey)| {
                let u = s * ey * t1.exp2() - ex * ex * t2.exp2();
                let v = -s * ex * t3.exp2();
                1.0 - u.abs().max(v.abs())
            })
            .fold(f64::INFINITY, f64::min);
        // plateau: |x| ≤ σⁿ w/2 inside the window and y within the support
        let entry = &chain.field.entries()[i];
        let q = &chain.points[i].q;
        let room = Rat::min_of(&q.y - &entry.y_support[0], &entry.y_support[1] - &q.y);
        let plateau = hw + n * ls < l2(&m.window[0]) && hh + n * ll < rat_log2(&room);
        inclusions.push(InclusionReport { k: r.k, n: r.n, margin, sampled_margin: sampled, plateau });
    }

    let mut pairwise_disjoint = true;
    for i in 0..rects.len() {
        for j in i + 1..rects.len() {
            let d = rat_log2(&(&rects[i].center.x - &rects[j].center.x));
            let reach = log2_add(rects[i].log2_width, rects[j].log2_width) - 1.0;
            if d <= reach {
                pairwise_disjoint = false;
            }
        }
    }
    let diam_decreasing = rects.windows(2).all(|w| w[1].log2_diam < w[0].log2_diam);

    let mut direct = Vec::new();
    for i in 0..opts.direct_transitions.min(chain.transitions()) {
        direct.push(direct_check(hp, tp, chain, &rects, i, opts.direct_samples)?);
    }
    Ok(RectangleCascade {
        rho: rat_to_f64(&opts.rho),
        rectangles: rects,
        inclusions,
        pairwise_disjoint,
        diam_decreasing,
        direct,
    })
}

/// Pushes boundary samples of R_k through the perturbed system in [`Mp`] at a
/// precision that resolves R_{k+1} after the expansion.
fn direct_check(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    chain: &CriticalChain,
    rects: &[Rectangle],
    i: usize,
    samples: usize,
) -> Result<DirectCheck> {
    let (a, b) = (&rects[i], &rects[i + 1]);
    let n = chain.spec.records[i].n;
    let expand = n as f64 * rat_to_f64(&hp.sigma).log2();
    let bits = (expand - b.log2_width - a.log2_width.min(0.0) + 96.0).ceil() as usize;
    let per_edge = (samples / 4).max(1);
    let k = a.k;
    let margin = with_mp_precision(bits, || -> Result<f64> {
        let sys = chain.system_in::<Mp>(hp, tp)?;
        let c: Point<Mp> = a.center.to_backend();
        let target: Point<Mp> = b.center.to_backend();
        let (hw, hh) = (Mp::exp2(a.log2_width - 1.0), Mp::exp2(a.log2_height - 1.0));
        let (nw, nh) = (Mp::exp2(b.log2_width - 1.0), Mp::exp2(b.log2_height - 1.0));
        let mut worst = f64::INFINITY;
        for (ex, ey) in boundary(per_edge) {
            let p = Point::new(
                c.x.clone() + hw.clone() * Mp::from_f64(ex),
                c.y.clone() + hh.clone() * Mp::from_f64(ey),
            );
            let orbit = sys.iterate_orbit(&p, n + 2);
            if orbit.escaped_at().is_some() {
                return Err(Error::InclusionFailed { k, detail: format!("sample ({ex}, {ey}) escaped") });
            }
            let img = orbit.last_point();
            let u = ((img.x.clone() - target.x.clone()) / nw.clone()).to_f64();
            let v = ((img.y.clone() - target.y.clone()) / nh.clone()).to_f64();
            worst = worst.min(1.0 - u.abs().max(v.abs()));
        }
        Ok(worst)
    })?;
    Ok(DirectCheck { k, bits, samples: 4 * per_edge, margin })
}
