//! Per-lane queue under rhythmic control.
//!
//! A lane is served once per period `2 T1`. With `lambda_k` arrivals during
//! period `k`, the queue before slot `k + 1` is
//! `w_{k+1} = w_k + lambda_k - min(w_k, 1)`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Upper bound on the adaptive truncation of the steady-state distribution.
pub const MAX_TRUNCATION: usize = 100_000;

/// Distribution of the number of arrivals in one period `2 T1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalDistribution {
    /// Mean arrival rate, vehicles per second.
    pub theta: f64,
    pub t1: f64,
    /// `probs[i]` is the probability of `i` arrivals in one period.
    pub probs: Vec<f64>,
}

impl ArrivalDistribution {
    /// Poisson arrivals at rate `theta`, truncated once terms fall below 1e-18.
    pub fn poisson(theta: f64, t1: f64) -> Result<Self> {
        if !(theta > 0.0 && t1 > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidDistribution(format!(
                "theta = {theta}, T1 = {t1} must be positive"
            )));
        }
        let mean = 2.0 * theta * t1;
        let mut probs = vec![(-mean).exp()];
        let mut i = 1;
        loop {
            let next = probs[i - 1] * mean / i as f64;
            if i as f64 > mean && next < 1e-18 {
                break;
            }
            probs.push(next);
            i += 1;
        }
        Ok(Self { theta, t1, probs })
    }

    /// Arbitrary distribution; `theta` follows from its mean.
    pub fn from_probs(probs: Vec<f64>, t1: f64) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidDistribution(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        if !(t1 > 0.0) {
            return Err(Error::InvalidDistribution(format!("T1 = {t1}")));
        }
        let mean: f64 = probs.iter().enumerate().map(|(i, p)| i as f64 * p).sum();
        Ok(Self {
            theta: mean / (2.0 * t1),
            t1,
            probs,
        })
    }

    /// Mean arrivals per period, `2 theta T1`.
    pub fn load(&self) -> f64 {
        2.0 * self.theta * self.t1
    }

    pub fn p(&self, i: usize) -> f64 {
        self.probs.get(i).copied().unwrap_or(0.0)
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.probs.len() - 1
    }
}

/// Truncated stationary distribution of the queue length.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub probs: Vec<f64>,
    /// `|1 - sum(probs)|`.
    pub residual: f64,
    pub converged: bool,
}

impl SteadyState {
    pub fn p0(&self) -> f64 {
        self.probs[0]
    }

    /// Largest violation of the balance equations
    /// `p_i = p_0 P_i + sum_{j=1}^{i+1} p_j P_{i-j+1}` over `i < N - 1`.
    pub fn balance_residual(&self, a: &ArrivalDistribution) -> f64 {
        let p = &self.probs;
        (0..p.len() - 1)
            .map(|i| {
                let rhs = p[0] * a.p(i) + (1..=i + 1).map(|j| p[j] * a.p(i + 1 - j)).sum::<f64>();
                (p[i] - rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Stationary queue distribution from `p_0 = 1 - 2 theta T1` and the forward
/// recurrence. Starting from `n` terms, the truncation doubles until
/// `|1 - sum p_i| < tol` or [`MAX_TRUNCATION`] is reached; in the latter case
/// `converged` is false.
pub fn steady_state(a: &ArrivalDistribution, n: usize, tol: f64) -> Result<SteadyState> {
    let load = a.load();
    if load >= 1.0 {
        return Err(Error::UnstableQueue(load));
    }
    let big_p0 = a.p(0);
    if big_p0 <= 0.0 {
        return Err(Error::InvalidDistribution(
            "P0 must be positive for a stable queue".into(),
        ));
    }
    let p0 = 1.0 - load;
    let mut probs = vec![p0, (1.0 - big_p0) / big_p0 * p0];
    let mut target = n.max(3);
    loop {
        while probs.len() < target {
            let i = probs.len() - 1;
            let next = if i == 1 {
                (1.0 - big_p0 - a.p(1)) / (big_p0 * big_p0) * p0
            } else {
                let first = (i + 1).saturating_sub(a.probs.len() - 1).max(1);
                let conv: f64 = (first..i).map(|j| a.p(i + 1 - j) * probs[j]).sum();
                ((1.0 - a.p(1)) * probs[i] - conv - a.p(i) * p0) / big_p0
            };
            probs.push(next);
        }
        let residual = (1.0 - probs.iter().sum::<f64>()).abs();
        if residual < tol || target >= MAX_TRUNCATION {
            return Ok(SteadyState {
                probs,
                residual,
                converged: residual < tol,
            });
        }
        target = (target * 2).min(MAX_TRUNCATION);
    }
}

/// Mean queue and mean delay on one lane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimate {
    /// Time-averaged queue, counting half a step of the served vehicle.
    pub mean_queue: f64,
    /// `T1 + (1 / theta) sum_{n >= 1} (n - 1) p_n`.
    pub mean_delay: f64,
}

pub fn average_delay(s: &SteadyState, theta: f64, t1: f64) -> DelayEstimate {
    let waiting: f64 = s
        .probs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, p)| (n - 1) as f64 * p)
        .sum();
    let busy: f64 = s.probs.iter().skip(1).sum();
    DelayEstimate {
        mean_queue: 0.5 * busy + waiting,
        mean_delay: t1 + waiting / theta,
    }
}

/// Mean delay for Poisson arrivals, `T1 / (1 - 2 theta T1)`.
pub fn poisson_delay(theta: f64, t1: f64) -> Result<f64> {
    let load = 2.0 * theta * t1;
    if load >= 1.0 {
        return Err(Error::UnstableQueue(load));
    }
    Ok(t1 / (1.0 - load))
}

/// Upper bound `T1 + T1 / (1 - 2 theta T1)` on the mean delay when at most
/// two vehicles arrive per period.
pub fn delay_bound(theta: f64, t1: f64) -> Result<f64> {
    Ok(t1 + poisson_delay(theta, t1)?)
}

/// Largest stable per-lane rate, `1 / (2 T1)` vehicles per second.
pub fn admissible_rate(t1: f64) -> f64 {
    1.0 / (2.0 * t1)
}

/// Mean wait in an M/D/1 queue with service rate `mu` and server
/// vacations of fixed length `v`:
/// `W = (lambda / mu^2) / (2 (1 - lambda / mu)) + v / 2`.
///
/// Requires `lambda / mu < 1` and `lambda v < 1`.
pub fn lee_vacation_wait(lambda: f64, mu: f64, v: f64) -> Result<f64> {
    let rho = lambda / mu;
    if !(lambda >= 0.0 && mu > 0.0 && v >= 0.0) {
        return Err(Error::InvalidDistribution(format!(
            "lambda = {lambda}, mu = {mu}, v = {v}"
        )));
    }
    if rho >= 1.0 {
        return Err(Error::UnstableQueue(rho));
    }
    if lambda * v >= 1.0 {
        return Err(Error::UnstableQueue(lambda * v));
    }
    Ok((lambda / (mu * mu)) / (2.0 * (1.0 - rho)) + v / 2.0)
}

/// Monte-Carlo run of the queue chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStats {
    pub steps: usize,
    /// Visit frequency of each queue length.
    pub frequencies: Vec<f64>,
    pub mean_delay: f64,
    /// Batch-means standard error of `mean_delay`.
    pub delay_se: f64,
}

/// Simulates the chain for `steps` periods after a burn-in of `steps / 10`.
/// Delay per period follows the half-step queue average divided by `theta`.
pub fn simulate_chain(a: &ArrivalDistribution, steps: usize, seed: u64) -> ChainStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = 0usize;
    for _ in 0..steps / 10 {
        w = w + a.sample(&mut rng) - w.min(1);
    }
    let batches = 50;
    let per_batch = (steps / batches).max(1);
    let mut counts: Vec<u64> = Vec::new();
    let mut batch_means = Vec::with_capacity(batches);
    let mut batch_sum = 0.0;
    let mut total = 0.0;
    for step in 0..steps {
        if w >= counts.len() {
            counts.resize(w + 1, 0);
        }
        counts[w] += 1;
        let q = 0.5 * (w as f64 + w.saturating_sub(1) as f64);
        batch_sum += q;
        total += q;
        if (step + 1) % per_batch == 0 {
            batch_means.push(batch_sum / per_batch as f64 / a.theta);
            batch_sum = 0.0;
        }
        w = w + a.sample(&mut rng) - w.min(1);
    }
    let k = batch_means.len() as f64;
    let mean_b = batch_means.iter().sum::<f64>() / k;
    let var_b = batch_means
        .iter()
        .map(|x| (x - mean_b).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    ChainStats {
        steps,
        frequencies: counts.iter().map(|&c| c as f64 / steps as f64).collect(),
        mean_delay: total / steps as f64 / a.theta,
        delay_se: (var_b / k).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_distribution() {
        let a = ArrivalDistribution::from_probs(vec![0.5, 0.5], 1.0).unwrap();
        let s = steady_state(&a, 10, 1e-12).unwrap();
        assert!((s.probs[0] - 0.5).abs() < 1e-12);
        assert!((s.probs[1] - 0.5).abs() < 1e-12);
        assert!(s.probs[2..].iter().all(|p| p.abs() < 1e-12));
        let d = average_delay(&s, a.theta, 1.0);
        assert!((d.mean_delay - 1.0).abs() < 1e-12);
    }

    #[test]
    fn admissible_rate_default() {
        let t1 = (4.5 + 2.0 + std::f64::consts::SQRT_2) / 10.0;
        assert!((admissible_rate(t1) - 0.6318).abs() < 1e-4);
        assert!((admissible_rate(t1) * 3600.0 - 2274.0).abs() < 1.0);
    }

    #[test]
    fn unstable_inputs() {
        assert!(matches!(
            poisson_delay(0.5, 1.0),
            Err(Error::UnstableQueue(_))
        ));
        let a = ArrivalDistribution::from_probs(vec![0.0, 1.0], 0.5).unwrap();
        assert!(steady_state(&a, 10, 1e-10).is_err());
        assert!(lee_vacation_wait(0.5, 1.0, 2.0).is_err());
        assert!(lee_vacation_wait(0.5, 1.0, 1.0).is_ok());
    }
}
