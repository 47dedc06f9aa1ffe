//! Empirical measures, exact Wasserstein-1 distance, the pluripotency deficit,
//! Birkhoff averages and the itinerary designers.

mod design;
mod experiment;

pub use design::*;
pub use experiment::*;

use std::collections::HashMap;

use serde::Serialize;

use crate::core_map::{eval_bump, HorseshoeSystem, Map, OrbitSegment, Point};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite measure with integer masses, normalized by `total`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalMeasure {
    pub atoms: Vec<Point<f64>>,
    pub mass: Vec<u64>,
    pub total: u64,
}

impl EmpiricalMeasure {
    /// Uniform measure on the points, merging exact repeats.
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point<f64>>) -> Self {
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let (mut atoms, mut mass) = (Vec::new(), Vec::new());
        for p in points {
            // +0.0 and -0.0 are the same point
            let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
            match index.get(&key) {
                Some(&i) => mass[i] += 1,
                None => {
                    index.insert(key, atoms.len());
                    atoms.push(p.clone());
                    mass.push(1);
                }
            }
        }
        let total = mass.iter().sum();
        EmpiricalMeasure { atoms, mass, total }
    }

    pub fn weighted(atoms: Vec<Point<f64>>, mass: Vec<u64>) -> Result<Self> {
        if atoms.len() != mass.len() || atoms.is_empty() {
            return Err(Error::LengthMismatch(format!("{} atoms, {} masses", atoms.len(), mass.len())));
        }
        let total = mass.iter().sum();
        if total == 0 {
            return Err(Error::LengthMismatch("zero total mass".into()));
        }
        Ok(EmpiricalMeasure { atoms, mass, total })
    }

    pub fn dirac(p: Point<f64>) -> Self {
        EmpiricalMeasure { atoms: vec![p], mass: vec![1], total: 1 }
    }

    /// δⁿ of an orbit: the points at ticks 0..n. TransitTicks are dropped unless
    /// `include_transit`; returns the measure and the number dropped.
    pub fn from_orbit<S: Scalar>(orbit: &OrbitSegment<S>, n: usize, include_transit: bool) -> Result<(Self, usize)> {
        if n == 0 {
            return Err(Error::OrbitTooShort { have: 0, need: 1 });
        }
        if orbit.samples.len() + 1 < n {
            return Err(Error::OrbitTooShort { have: orbit.samples.len() + 1, need: n });
        }
        if let Some(t) = orbit.escaped_at() {
            if t < n {
                return Err(Error::OrbitEscaped { tick: t });
            }
        }
        let pts = orbit.points_f64(n);
        let dropped = if include_transit { 0 } else { pts.iter().filter(|(_, t)| *t).count() };
        let kept: Vec<Point<f64>> = pts.into_iter().filter(|(_, t)| include_transit || !t).map(|(p, _)| p).collect();
        if kept.is_empty() {
            return Err(Error::OrbitTooShort { have: 0, need: 1 });
        }
        Ok((Self::from_points(&kept), dropped))
    }

    pub fn weights(&self) -> Vec<f64> {
        self.mass.iter().map(|&m| m as f64 / self.total as f64).collect()
    }

    fn is_uniform(&self) -> bool {
        self.mass.iter().all(|&m| m == 1)
    }
}

/// Ground cost: Euclidean distance capped at 2.
pub fn ground(a: &Point<f64>, b: &Point<f64>) -> f64 {
    a.dist(b).min(2.0)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact W₁ between two empirical measures.
///
/// Equal-size uniform measures are an assignment problem (Hungarian method);
/// everything else goes through successive shortest paths on the integer
/// transportation problem scaled to a common denominator.
pub fn wasserstein1(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure) -> f64 {
    let cost = |i: usize, j: usize| ground(&mu.atoms[i], &nu.atoms[j]);
    if mu.is_uniform() && nu.is_uniform() && mu.atoms.len() == nu.atoms.len() {
        let n = mu.atoms.len();
        let c: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| cost(i, j)).collect()).collect();
        return hungarian(&c) / n as f64;
    }
    let g = gcd(mu.total, nu.total);
    let (sa, sb) = (nu.total / g, mu.total / g);
    let supply: Vec<u64> = mu.mass.iter().map(|&m| m * sa).collect();
    let demand: Vec<u64> = nu.mass.iter().map(|&m| m * sb).collect();
    let scale = (mu.total * sa) as f64;
    transport_ssp(&supply, &demand, &cost) / scale
}

/// Minimum-cost perfect assignment for a square cost matrix (O(n³)).
pub fn hungarian(cost: &[Vec<f64>]) -> f64 {
    let n = cost.len();
    if n == 0 {
        return 0.0;
    }
    let inf = f64::INFINITY;
    // 1-based potentials; column 0 is the virtual start
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| cost[p[j] - 1][j - 1]).sum()
}

/// Min-cost transportation with integer supplies and demands of equal total,
/// by successive shortest paths with potentials. Returns the total cost.
pub fn transport_ssp(supply: &[u64], demand: &[u64], cost: &dyn Fn(usize, usize) -> f64) -> f64 {
    let (n, m) = (supply.len(), demand.len());
    let c: Vec<Vec<f64>> = (0..n).map(|i| (0..m).map(|j| cost(i, j)).collect()).collect();
    let mut flow = vec![vec![0u64; m]; n];
    let mut sup = supply.to_vec();
    let mut dem = demand.to_vec();
    let mut pot = vec![0.0f64; n + m];
    let v = n + m;
    while sup.iter().any(|&s| s > 0) && dem.iter().any(|&d| d > 0) {
        let mut dist = vec![f64::INFINITY; v];
        let mut prev = vec![usize::MAX; v];
        let mut done = vec![false; v];
        for i in 0..n {
            if sup[i] > 0 {
                dist[i] = 0.0;
            }
        }
        loop {
            let mut best = usize::MAX;
            for x in 0..v {
                if !done[x] && dist[x].is_finite() && (best == usize::MAX || dist[x] < dist[best]) {
                    best = x;
                }
            }
            if best == usize::MAX {
                break;
            }
            done[best] = true;
            if best < n {
                let i = best;
                for j in 0..m {
                    let rc = c[i][j] + pot[i] - pot[n + j];
                    let nd = dist[i] + rc.max(0.0);
                    if nd < dist[n + j] {
                        dist[n + j] = nd;
                        prev[n + j] = i;
                    }
                }
            } else {
                let j = best - n;
                for i in 0..n {
                    if flow[i][j] > 0 {
                        let rc = -c[i][j] + pot[n + j] - pot[i];
                        let nd = dist[best] + rc.max(0.0);
                        if nd < dist[i] {
                            dist[i] = nd;
                            prev[i] = best;
                        }
                    }
                }
            }
        }
        let t = (0..m)
            .filter(|&j| dem[j] > 0 && dist[n + j].is_finite())
            .min_by(|&a, &b| dist[n + a].total_cmp(&dist[n + b]))
            .expect("balanced problem has an augmenting path");
        let d = dist[n + t];
        for x in 0..v {
            pot[x] += dist[x].min(d);
        }
        // walk back to a source with spare supply
        let mut amount = dem[t];
        let mut x = n + t;
        while prev[x] != usize::MAX {
            let p = prev[x];
            if x < n {
                amount = amount.min(flow[x][p - n]);
            }
            x = p;
        }
        amount = amount.min(sup[x]);
        let mut x = n + t;
        while prev[x] != usize::MAX {
            let p = prev[x];
            if x >= n {
                flow[p][x - n] += amount;
            } else {
                flow[x][p - n] -= amount;
            }
            x = p;
        }
        sup[x] -= amount;
        dem[t] -= amount;
    }
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..m {
            total += flow[i][j] as f64 * c[i][j];
        }
    }
    total
}

#[derive(Clone, Debug, Serialize)]
pub struct DeficitSeries {
    /// `values[m-1]` is the Cesàro average over the first m ticks.
    pub values: Vec<f64>,
    /// Ticks left out of the average (TransitTicks).
    pub excluded: usize,
}

impl DeficitSeries {
    pub fn at(&self, n: usize) -> f64 {
        self.values[n - 1]
    }
    pub fn last(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }
}

/// (1/n')Σ_{i<n} sup_y dist(g^i(y), shadow_i) over the ticks that are not
/// TransitTicks in the sample orbits (n' counts the kept ticks).
pub fn deficit_series(samples: &[Vec<(Point<f64>, bool)>], shadow: &[Point<f64>]) -> Result<DeficitSeries> {
    let n = samples.iter().map(|s| s.len()).min().unwrap_or(0).min(shadow.len());
    let mut values = Vec::with_capacity(n);
    let (mut sum, mut kept, mut excluded) = (0.0, 0usize, 0usize);
    for t in 0..n {
        if samples.iter().any(|s| s[t].1) {
            excluded += 1;
        } else {
            let sup = samples.iter().map(|s| s[t].0.dist(&shadow[t])).fold(0.0, f64::max);
            sum += sup;
            kept += 1;
        }
        values.push(if kept == 0 { 0.0 } else { sum / kept as f64 });
    }
    Ok(DeficitSeries { values, excluded })
}

/// Orbit points at ticks 0..n with TransitTick flags; SampleEscaped on escape.
pub fn sample_orbit<S: Scalar>(sys: &HorseshoeSystem<S>, p: &Point<S>, n: usize, sample: usize) -> Result<Vec<(Point<f64>, bool)>> {
    let orbit = sys.iterate_orbit(p, n.saturating_sub(1));
    if let Some(tick) = orbit.escaped_at() {
        return Err(Error::SampleEscaped { sample, tick });
    }
    Ok(orbit.points_f64(n))
}

/// Deficit of `samples` against the orbit of `shadow` under the same system.
pub fn pluripotency_deficit<S: Scalar>(
    sys: &HorseshoeSystem<S>,
    samples: &[Point<S>],
    shadow: &Point<S>,
    n: usize,
) -> Result<DeficitSeries> {
    let orbits = samples
        .iter()
        .enumerate()
        .map(|(i, p)| sample_orbit(sys, p, n, i))
        .collect::<Result<Vec<_>>>()?;
    let sh = sample_orbit(sys, shadow, n, samples.len())?;
    let sh: Vec<Point<f64>> = sh.into_iter().map(|(p, _)| p).collect();
    deficit_series(&orbits, &sh)
}

/// Bounded observables on the chart.
#[derive(Clone, Copy, Debug, Serialize)]
pub enum Observable {
    /// Indicator of the strip S_i, mollified inward over `margin` (0 = raw).
    Strip { branch: u8, margin: f64 },
}

impl Observable {
    pub fn smoothed_strip(branch: u8) -> Self {
        Observable::Strip { branch, margin: 0.01 }
    }

    pub fn eval(&self, map: &Map<f64>, p: &Point<f64>) -> f64 {
        match *self {
            Observable::Strip { branch, margin } => {
                let c = if branch == 0 { -0.5 } else { 0.5 };
                let w = 1.0 / map.sigma;
                if margin <= 0.0 {
                    return if (p.x - c).abs() <= w && p.y.abs() <= 1.0 { 1.0 } else { 0.0 };
                }
                let bump = |t: f64, lo: f64, hi: f64| {
                    let (a, b) = (lo + margin, hi - margin);
                    eval_bump(&t, &(margin / (b - a)), &a, &b).unwrap_or(0.0)
                };
                bump(p.x, c - w, c + w) * bump(p.y, -1.0, 1.0)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BirkhoffReport {
    /// (n, average over the first n kept ticks).
    pub averages: Vec<(usize, f64)>,
    /// max - min of the checkpoint averages.
    pub gap: f64,
}

/// Running Birkhoff averages of `obs` sampled at the given tick counts. TransitTicks
/// are skipped, matching the empirical measures.
pub fn birkhoff_oscillation(
    map: &Map<f64>,
    points: &[(Point<f64>, bool)],
    obs: &Observable,
    checkpoints: &[usize],
) -> BirkhoffReport {
    let mut averages = Vec::new();
    let (mut sum, mut kept) = (0.0, 0usize);
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    let mut next = 0;
    for (t, (p, transit)) in points.iter().enumerate() {
        if !transit {
            sum += obs.eval(map, p);
            kept += 1;
        }
        while next < cps.len() && cps[next] == t + 1 {
            averages.push((t + 1, if kept == 0 { 0.0 } else { sum / kept as f64 }));
            next += 1;
        }
    }
    let lo = averages.iter().map(|a| a.1).fold(f64::INFINITY, f64::min);
    let hi = averages.iter().map(|a| a.1).fold(f64::NEG_INFINITY, f64::max);
    let gap = if averages.is_empty() { 0.0 } else { hi - lo };
    BirkhoffReport { averages, gap }
}

/// Orbit points of a plain orbit segment, for the Birkhoff helpers.
pub fn orbit_points<S: Scalar>(orbit: &OrbitSegment<S>) -> Vec<(Point<f64>, bool)> {
    orbit.points_f64(orbit.samples.len() + 1)
}
