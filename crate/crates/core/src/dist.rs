//! Poisson, exponential and uniform distributions, plus the chi-square and
//! Kolmogorov tail probabilities used for p-values.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean count per interval (goals per match, goals per minute, ...).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct PoissonParam(f64);

impl PoissonParam {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(PoissonParam(lambda))
        } else {
            Err(Error::Domain(format!(
                "Poisson rate must be positive and finite, got {lambda}"
            )))
        }
    }

    pub fn lambda(self) -> f64 {
        self.0
    }

    pub fn mean(self) -> f64 {
        self.0
    }

    pub fn variance(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for PoissonParam {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<PoissonParam> for f64 {
    fn from(p: PoissonParam) -> f64 {
        p.0
    }
}

/// Exponential waiting time, stored as a rate with its reciprocal mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialParam {
    rate: f64,
    beta: f64,
}

impl ExponentialParam {
    pub fn from_rate(rate: f64) -> Result<Self> {
        if rate.is_finite() && rate > 0.0 {
            Ok(ExponentialParam {
                rate,
                beta: 1.0 / rate,
            })
        } else {
            Err(Error::Domain(format!(
                "exponential rate must be positive, got {rate}"
            )))
        }
    }

    pub fn from_mean(beta: f64) -> Result<Self> {
        if beta.is_finite() && beta > 0.0 {
            Ok(ExponentialParam {
                rate: 1.0 / beta,
                beta,
            })
        } else {
            Err(Error::Domain(format!(
                "exponential mean must be positive, got {beta}"
            )))
        }
    }

    pub fn rate(self) -> f64 {
        self.rate
    }

    /// Mean waiting time.
    pub fn beta(self) -> f64 {
        self.beta
    }

    pub fn variance(self) -> f64 {
        self.beta * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformInterval {
    a: f64,
    b: f64,
}

impl UniformInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_finite() && b.is_finite() && a < b {
            Ok(UniformInterval { a, b })
        } else {
            Err(Error::Domain(format!(
                "uniform interval needs a < b, got [{a}, {b}]"
            )))
        }
    }

    pub fn unit() -> Self {
        UniformInterval { a: 0.0, b: 1.0 }
    }

    pub fn bounds(self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn mean(self) -> f64 {
        (self.a + self.b) / 2.0
    }

    pub fn variance(self) -> f64 {
        (self.b - self.a).powi(2) / 12.0
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const DIRECT_PMF_MAX: u32 = 20;

pub fn poisson_pmf(x: u32, p: PoissonParam) -> f64 {
    let lambda = p.lambda();
    let v = if x <= DIRECT_PMF_MAX {
        let fact: f64 = (1..=x).map(f64::from).product();
        (-lambda).exp() * lambda.powi(x as i32) / fact
    } else {
        let x = f64::from(x);
        (x * lambda.ln() - lambda - ln_gamma(x + 1.0)).exp()
    };
    v.clamp(0.0, 1.0)
}

/// P(X >= x_min).
pub fn poisson_tail(x_min: u32, p: PoissonParam) -> f64 {
    let below: f64 = (0..x_min).map(|k| poisson_pmf(k, p)).sum();
    (1.0 - below).clamp(0.0, 1.0)
}

pub fn exponential_cdf(t: f64, p: ExponentialParam) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!(
            "waiting time must be non-negative, got {t}"
        )));
    }
    Ok(-(-t / p.beta()).exp_m1())
}

pub fn uniform_cdf(x: f64, iv: UniformInterval) -> f64 {
    ((x - iv.a) / (iv.b - iv.a)).clamp(0.0, 1.0)
}

const GAMMA_EPS: f64 = 1e-15;
const GAMMA_MAX_ITER: usize = 10_000;

/// Regularized lower incomplete gamma by its power series; x < a + 1.
fn lower_gamma_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..GAMMA_MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    (sum.ln() - x + a * x.ln() - ln_gamma(a)).exp()
}

/// Regularized upper incomplete gamma by continued fraction (modified
/// Lentz); x >= a + 1.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Q(a, x) = 1 - P(a, x).
pub fn regularized_upper_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - lower_gamma_series(a, x)
    } else {
        upper_gamma_cf(a, x)
    }
}

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
pub fn chi_square_sf(x: f64, df: u32) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "chi-square statistic must be non-negative, got {x}"
        )));
    }
    if df == 0 {
        return Err(Error::Domain(
            "chi-square needs at least one degree of freedom".into(),
        ));
    }
    Ok(regularized_upper_gamma(f64::from(df) / 2.0, x / 2.0).clamp(0.0, 1.0))
}

const KS_TERM_EPS: f64 = 1e-12;
// below this the alternating series converges too slowly; use its theta-function dual
const KS_DUAL_CUTOVER: f64 = 0.8;

/// Limiting Kolmogorov tail Q(t) = 2 Σ (-1)^(k-1) exp(-2 k² t²).
pub fn kolmogorov_q(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < KS_DUAL_CUTOVER {
        let pi2 = std::f64::consts::PI.powi(2);
        let mut sum = 0.0;
        for k in 1.. {
            let j = f64::from(2 * k - 1);
            let term = (-j * j * pi2 / (8.0 * t * t)).exp();
            sum += term;
            if term < KS_TERM_EPS {
                break;
            }
        }
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / t * sum).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200u32 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * t * t).exp();
        sum += sign * term;
        if term < KS_TERM_EPS {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// p-value for a one-sample KS statistic `d` on `n` points, with the
/// small-sample scaling t = d (√n + 0.12 + 0.11/√n).
pub fn kolmogorov_sf(d: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::Domain(format!(
            "KS statistic must lie in [0, 1], got {d}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("KS needs at least one observation".into()));
    }
    let rn = (n as f64).sqrt();
    Ok(kolmogorov_q(d * (rn + 0.12 + 0.11 / rn)))
}

const KNUTH_MAX_LAMBDA: f64 = 10.0;
const INVERSION_CHUNK: f64 = 500.0;

/// Draw a Poisson variate.
///
/// For λ ≤ 10 this is Knuth's product method and consumes k + 1 uniforms
/// for a result of k. Larger rates use sequential-search inversion, one
/// uniform per chunk of at most 500 (the rate is split into equal chunks
/// and the draws summed so that e^-λ never underflows).
pub fn sample_poisson<R: Rng + ?Sized>(p: PoissonParam, rng: &mut R) -> u32 {
    let lambda = p.lambda();
    if lambda <= KNUTH_MAX_LAMBDA {
        let floor = (-lambda).exp();
        let mut k = 0;
        let mut prod: f64 = rng.random();
        while prod > floor {
            k += 1;
            prod *= rng.random::<f64>();
        }
        return k;
    }
    let chunks = (lambda / INVERSION_CHUNK).ceil();
    let part = lambda / chunks;
    (0..chunks as u32)
        .map(|_| invert_poisson(part, rng.random()))
        .sum()
}

fn invert_poisson(lambda: f64, u: f64) -> u32 {
    let mut k = 0u32;
    let mut pk = (-lambda).exp();
    let mut cdf = pk;
    // the cap guards against cdf stalling just below 1.0 from rounding
    let cap = (lambda + 40.0 * lambda.sqrt() + 40.0) as u32;
    while u >= cdf && k < cap {
        k += 1;
        pk *= lambda / f64::from(k);
        cdf += pk;
    }
    k
}
