//! Designers for the free middle words v̂⁽ᵏ⁾ of a chain itinerary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construction::{ChainSpec, MhatRule};
use crate::error::{Error, Result};
use crate::symbolic::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DesignMode {
    TargetShadow,
    Dirac,
    Historic,
}

/// Middle words for chain indices `first, first+1, …` (one per chain record),
/// with α_k = Σ_{first≤i<k}(n_i+2) + û_k (0-indexed tick where v̂⁽ᵏ⁾ starts) and β_k = m̂_k.
#[derive(Clone, Debug, Serialize)]
pub struct CodeDesign {
    pub mode: DesignMode,
    pub first: usize,
    pub vhat: Vec<Word>,
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    /// Σβ_k / (α_K + β_K).
    pub coverage: f64,
}

impl CodeDesign {
    pub fn word(&self, k: usize) -> Option<&Word> {
        k.checked_sub(self.first).and_then(|i| self.vhat.get(i))
    }
}

fn bookkeeping(spec: &ChainSpec) -> (Vec<usize>, Vec<usize>) {
    let mut alpha = Vec::with_capacity(spec.records.len());
    let mut start = 0;
    for r in &spec.records {
        alpha.push(start + r.u_hat);
        start += r.n + 2;
    }
    (alpha, spec.records.iter().map(|r| r.m_hat).collect())
}

fn finish(mode: DesignMode, spec: &ChainSpec, vhat: Vec<Word>, alpha: Vec<usize>, beta: Vec<usize>) -> CodeDesign {
    let covered: usize = beta.iter().sum();
    let end = alpha.last().unwrap_or(&0) + beta.last().unwrap_or(&0);
    let coverage = if end == 0 { 0.0 } else { covered as f64 / end as f64 };
    CodeDesign { mode, first: spec.config.first, vhat, alpha, beta, coverage }
}

/// Splices a target symbol stream into the chain: v̂⁽ᵏ⁾ = v[α_k .. α_k+β_k).
pub fn design_target_code(target: &[u8], spec: &ChainSpec) -> Result<CodeDesign> {
    let (alpha, beta) = bookkeeping(spec);
    let need = alpha.last().unwrap_or(&0) + beta.last().unwrap_or(&0);
    if target.len() < need {
        return Err(Error::LengthMismatch(format!("target stream has {} symbols, splice needs {need}", target.len())));
    }
    if target.iter().any(|&s| s > 1) {
        return Err(Error::LengthMismatch("target symbols must be 0 or 1".into()));
    }
    let vhat = alpha.iter().zip(&beta).map(|(&a, &b)| Word::new(target[a..a + b].to_vec())).collect();
    Ok(finish(DesignMode::TargetShadow, spec, vhat, alpha, beta))
}

/// v̂⁽ᵏ⁾ = the first m̂_k symbols of `periodic`^∞, restarted at phase 0 for every k.
pub fn design_dirac_code(periodic: &Word, spec: &ChainSpec) -> Result<CodeDesign> {
    if periodic.is_empty() {
        return Err(Error::LengthMismatch("periodic word must be nonempty".into()));
    }
    let (alpha, beta) = bookkeeping(spec);
    let vhat = beta.iter().map(|&m| periodic_word(periodic, m)).collect();
    Ok(finish(DesignMode::Dirac, spec, vhat, alpha, beta))
}

pub fn periodic_word(periodic: &Word, len: usize) -> Word {
    Word::new(periodic.symbols().iter().copied().cycle().take(len).collect())
}

pub fn random_stream(seed: u64, len: usize) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..2u8)).collect()
}

/// Eras k_1 < k_2 < …: era 0 is [first, k_1) and era s is [k_s, k_{s+1}).
/// Required: Σ_{k_s ≤ k < k_{s+1}} m̂_k > s·Σ_{first ≤ k < k_s} m̂_k for every s
/// with a complete era.
#[derive(Clone, Debug, Serialize)]
pub struct EraSchedule {
    pub first: usize,
    pub ks: Vec<usize>,
    pub mhat: MhatRule,
}

impl EraSchedule {
    pub fn new(first: usize, ks: Vec<usize>, mhat: MhatRule) -> Result<Self> {
        let e = EraSchedule { first, ks, mhat };
        e.validate()?;
        Ok(e)
    }

    fn mass(&self, lo: usize, hi: usize) -> u128 {
        (lo..hi).map(|k| self.mhat.eval(k) as u128).sum()
    }

    /// Ratio Σ(era s) / Σ(before era s) for each complete era s ≥ 1.
    pub fn dominance_ratios(&self) -> Vec<f64> {
        self.ks
            .windows(2)
            .map(|w| self.mass(w[0], w[1]) as f64 / self.mass(self.first, w[0]).max(1) as f64)
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.ks.is_empty() || self.ks[0] <= self.first || self.ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::EraConditionViolated { s: 0 });
        }
        for (i, w) in self.ks.windows(2).enumerate() {
            let s = i as u128 + 1;
            if self.mass(w[0], w[1]) <= s * self.mass(self.first, w[0]) {
                return Err(Error::EraConditionViolated { s: i + 1 });
            }
        }
        Ok(())
    }

    /// Starting from k_1, each k_{s+1} is the least index passing the condition.
    pub fn minimal(first: usize, k1: usize, eras: usize, mhat: MhatRule) -> Result<Self> {
        let mut ks = vec![k1];
        let mut e = EraSchedule { first, ks: ks.clone(), mhat };
        for s in 1..eras {
            let ks_s = ks[s - 1];
            let before = e.mass(first, ks_s);
            let mut next = ks_s + 1;
            while e.mass(ks_s, next) <= s as u128 * before {
                next += 1;
            }
            ks.push(next);
            e.ks = ks.clone();
        }
        e.validate()?;
        Ok(e)
    }

    pub fn era_of(&self, k: usize) -> usize {
        self.ks.iter().take_while(|&&b| b <= k).count()
    }

    /// Last chain index of era s (inclusive), if the era is complete.
    pub fn era_end(&self, s: usize) -> Option<usize> {
        self.ks.get(s).map(|&b| b - 1)
    }
}

/// 0^{⌊m/3⌋}1^{⌈2m/3⌉} in even eras, 0^{⌊2m/3⌋}1^{⌈m/3⌉} in odd ones.
pub fn historic_word(m: usize, odd: bool) -> Word {
    let zeros = if odd { 2 * m / 3 } else { m / 3 };
    let mut w = vec![0u8; zeros];
    w.resize(m, 1);
    Word::new(w)
}

pub fn design_historic_code(eras: &EraSchedule, spec: &ChainSpec) -> Result<CodeDesign> {
    eras.validate()?;
    if eras.first != spec.config.first || eras.mhat != spec.config.mhat {
        return Err(Error::Config("era schedule and chain disagree on first index or m_hat rule".into()));
    }
    let (alpha, beta) = bookkeeping(spec);
    let vhat = spec
        .records
        .iter()
        .map(|r| historic_word(r.m_hat, eras.era_of(r.k) % 2 == 1))
        .collect();
    Ok(finish(DesignMode::Historic, spec, vhat, alpha, beta))
}

/// Σk² / Σ(k² + ck + 2) over k = 1..K: the coverage floor when û_k+ŝ_{k+1} ≤ ck.
pub fn coverage_lower_bound(k_max: usize, c: usize) -> f64 {
    let num: usize = (1..=k_max).map(|k| k * k).sum();
    let den: usize = (1..=k_max).map(|k| k * k + c * k + 2).sum();
    num as f64 / den as f64
}
