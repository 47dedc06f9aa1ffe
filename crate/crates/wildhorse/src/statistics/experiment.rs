//! End-to-end runs on a built chain: the designed orbit, and the deficit of
//! samples from the first rectangle against the shadow in the horseshoe.

use serde::Serialize;

use super::{deficit_series, sample_orbit, wasserstein1, DeficitSeries, EmpiricalMeasure};
use crate::construction::{CriticalChain, RectangleCascade};
use crate::core_map::{HorseshoeParams, Point, Region, TangencyParams};
use crate::error::{Error, Result};
use crate::scalar::{rat_to_f64, with_mp_precision, Mp, Scalar};
use crate::symbolic::orbit_from_code;

/// Orbit of x_first under g through the first `transitions` blocks (ticks
/// 0..=Σ(n_k+2)), as doubles with TransitTick flags.
///
/// Each block is iterated from the exact x_k at a precision that covers its
/// expansion; this is the true orbit because g^{n_k+2}(x_k) = x_{k+1} holds
/// exactly (checked in rationals when the chain is built).
pub fn chain_orbit(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    chain: &CriticalChain,
    transitions: usize,
) -> Result<Vec<(Point<f64>, bool)>> {
    let blocks = transitions.min(chain.transitions());
    if chain.exact_links.iter().take(blocks).any(|ok| !ok) {
        return Err(Error::PrecisionExhausted { achieved: 0 });
    }
    let ls = rat_to_f64(&hp.sigma).log2();
    let mut out = vec![(chain.points[0].x.to_f64(), false)];
    for i in 0..blocks {
        let n = chain.spec.records[i].n;
        let bits = (n as f64 * ls).ceil() as usize + 96;
        let block = with_mp_precision(bits, || -> Result<Vec<(Point<f64>, bool)>> {
            let sys = chain.system_in::<Mp>(hp, tp)?;
            let orbit = sys.iterate_orbit(&chain.points[i].x.to_backend(), n + 2);
            if let Some(t) = orbit.escaped_at() {
                return Err(Error::OrbitEscaped { tick: t });
            }
            let end = orbit.last_point().to_f64();
            if end.dist(&chain.points[i + 1].x.to_f64()) > 1e-12 {
                return Err(Error::PrecisionExhausted { achieved: i });
            }
            Ok(orbit.samples.iter().map(|s| (s.point.to_f64(), s.region == Region::TransitTick)).collect())
        })?;
        out.extend(block);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DeficitConfig {
    /// Samples form a grid × grid lattice on R_first, boundary included.
    pub grid: usize,
    /// W₁ is checked for every `w1_stride`-th sample.
    pub w1_stride: usize,
}

impl Default for DeficitConfig {
    fn default() -> Self {
        DeficitConfig { grid: 8, w1_stride: 8 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct W1Check {
    pub n: usize,
    pub sample: usize,
    pub w1: f64,
    pub deficit: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeficitReport {
    pub samples: usize,
    pub horizon: usize,
    pub bits: usize,
    /// Symbols given to the shadow at the window tick and the transit tick.
    pub filler: [u8; 2],
    pub series: DeficitSeries,
    pub checkpoints: Vec<usize>,
    pub at_checkpoints: Vec<f64>,
    /// Least-squares slope of the series over the last block.
    pub last_block_slope: f64,
    pub trending_down: bool,
    pub w1: Vec<W1Check>,
}

impl DeficitReport {
    pub fn w1_dominated(&self) -> bool {
        self.w1.iter().all(|c| c.w1 <= c.deficit + 1e-12)
    }
}

fn slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mx;
        num += dx * (y - my);
        den += dx * dx;
    }
    num / den
}

/// Samples R_first on a lattice, follows them under g in [`Mp`] and compares with
/// the horseshoe orbit whose code is the chain itinerary, with filler symbols at
/// the two ticks each transition spends off the strips.
pub fn deficit_experiment(
    hp: &HorseshoeParams,
    tp: &TangencyParams,
    chain: &CriticalChain,
    cascade: &RectangleCascade,
    cfg: &DeficitConfig,
) -> Result<DeficitReport> {
    let blocks = chain.transitions();
    let landing = chain.spec.landing_ticks();
    let horizon = landing[blocks];
    let ls = rat_to_f64(&hp.sigma).log2();
    let rects = &cascade.rectangles;
    let mut need = -rects[0].log2_width;
    for i in 0..blocks {
        need = need.max(chain.spec.records[i].n as f64 * ls - rects[i + 1].log2_width);
    }
    let bits = need.ceil() as usize + 64;

    let g = cfg.grid.max(2);
    let lattice: Vec<(f64, f64)> = (0..g)
        .flat_map(|i| (0..g).map(move |j| (i, j)))
        .map(|(i, j)| (-1.0 + 2.0 * i as f64 / (g - 1) as f64, -1.0 + 2.0 * j as f64 / (g - 1) as f64))
        .collect();
    let orbits = with_mp_precision(bits, || -> Result<Vec<Vec<(Point<f64>, bool)>>> {
        let sys = chain.system_in::<Mp>(hp, tp)?;
        let c: Point<Mp> = rects[0].center.to_backend();
        let hw = Mp::exp2(rects[0].log2_width - 1.0);
        let hh = Mp::exp2(rects[0].log2_height - 1.0);
        lattice
            .iter()
            .enumerate()
            .map(|(i, &(ex, ey))| {
                let p = Point::new(
                    c.x.clone() + hw.clone() * Mp::from_f64(ex),
                    c.y.clone() + hh.clone() * Mp::from_f64(ey),
                );
                sample_orbit(&sys, &p, horizon + 1, i)
            })
            .collect()
    })?;

    let mut best: Option<([u8; 2], DeficitSeries, Vec<Point<f64>>)> = None;
    for filler in [[0u8, 0], [0, 1], [1, 0], [1, 1]] {
        let mut code = Vec::with_capacity(horizon + 128);
        for r in chain.spec.records.iter().take(blocks) {
            code.extend_from_slice(r.z.symbols());
            code.extend_from_slice(&filler);
        }
        // future beyond the horizon: the next block, then the fixed point
        code.extend_from_slice(chain.spec.records[blocks].z.symbols());
        code.extend(std::iter::repeat_n(0, 64));
        let mut past = vec![filler[1], filler[0]];
        past.extend(std::iter::repeat_n(0, 62));
        let shadow: Vec<Point<f64>> = orbit_from_code(&chain.map_in::<f64>(hp, tp), &code, &past);
        let series = deficit_series(&orbits, &shadow[..horizon + 1])?;
        if best.as_ref().is_none_or(|b| series.last() < b.1.last()) {
            best = Some((filler, series, shadow));
        }
    }
    let (filler, series, shadow) = best.expect("four fillers tried");

    let checkpoints: Vec<usize> = landing[1..=blocks].iter().map(|t| t + 1).collect();
    let at_checkpoints: Vec<f64> = checkpoints.iter().map(|&n| series.at(n)).collect();
    let prev = if blocks >= 2 { checkpoints[blocks - 2] } else { 1 };
    let last_block_slope = slope(&series.values[prev..horizon + 1]);
    let trending_down = last_block_slope < 0.0
        && (blocks < 2 || at_checkpoints[blocks - 1] < at_checkpoints[blocks - 2]);

    let mut w1 = Vec::new();
    for &n in &checkpoints {
        let keep: Vec<usize> = (0..n).filter(|&t| !orbits[0][t].1).collect();
        let sh: Vec<Point<f64>> = keep.iter().map(|&t| shadow[t].clone()).collect();
        let nu = EmpiricalMeasure::from_points(&sh);
        for s in (0..orbits.len()).step_by(cfg.w1_stride.max(1)) {
            let pts: Vec<Point<f64>> = keep.iter().map(|&t| orbits[s][t].0.clone()).collect();
            let mu = EmpiricalMeasure::from_points(&pts);
            w1.push(W1Check { n, sample: s, w1: wasserstein1(&mu, &nu), deficit: series.at(n) });
        }
    }
    Ok(DeficitReport {
        samples: orbits.len(),
        horizon,
        bits,
        filler,
        series,
        checkpoints,
        at_checkpoints,
        last_block_slope,
        trending_down,
        w1,
    })
}
