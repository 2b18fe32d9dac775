//! Small statistics helpers for Monte-Carlo estimates.

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

/// Mean with a normal-approximation confidence half-width.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub n: u64,
    pub mean: f64,
    /// Sample standard deviation (0 for n < 2).
    pub sd: f64,
    /// Half-width of the 99% confidence interval for the mean.
    pub ci99: f64,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as u64;
        if n == 0 {
            return Estimate { n: 0, mean: 0.0, sd: 0.0, ci99: 0.0 };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            let ss: f64 = samples.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (n as f64 - 1.0)).sqrt()
        } else {
            0.0
        };
        let ci99 = Z99 * sd / (n as f64).sqrt();
        Estimate { n, mean, sd, ci99 }
    }

    pub fn lower99(&self) -> f64 {
        self.mean - self.ci99
    }

    pub fn upper99(&self) -> f64 {
        self.mean + self.ci99
    }
}

/// Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy)]
pub struct Wilson {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn wilson(successes: u64, trials: u64, z: f64) -> Wilson {
    if trials == 0 {
        return Wilson { successes, trials, estimate: 0.0, lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Wilson { successes, trials, estimate: p, lo: (center - half).max(0.0), hi: (center + half).min(1.0) }
}

/// Three-sigma half-width for a Bernoulli mean estimated over `n` trials.
pub fn three_sigma(p: f64, n: u64) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}
