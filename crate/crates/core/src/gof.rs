//! Goodness-of-fit checks for the Poisson-process picture of goal scoring:
//! binned chi-square for goals per match, one-sample Kolmogorov–Smirnov for
//! waiting times and within-match goal positions.

use serde::Serialize;

use crate::dist::{chi_square_sf, kolmogorov_sf, poisson_pmf, poisson_tail, PoissonParam};
use crate::error::{Error, Result};

pub const GOAL_BIN_LABELS: [&str; 5] = ["0", "1", "2", "3", "4+"];
const TAIL_BIN: u32 = 4;

/// Test statistic with its degrees of freedom (chi-square) or sample size (KS).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofResult {
    pub statistic: f64,
    pub df_or_n: usize,
    pub p_value: f64,
}

/// How bin probabilities are rounded before forming expected counts.
///
/// `Decimals(3)` reproduces hand-tabulated tests where probabilities are
/// read off a table to three places; the last bin always takes the
/// remainder so the probabilities still sum to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ProbRounding {
    #[default]
    Exact,
    Decimals(u32),
}

/// Observed and expected match counts per goal bin (0, 1, 2, 3, 4+).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoalBinning {
    pub labels: [&'static str; 5],
    pub observed: [u64; 5],
    pub probs: [f64; 5],
    pub expected: [f64; 5],
}

impl GoalBinning {
    /// Bin `goals` and compare against Poisson(`lambda`).
    pub fn fit(goals: &[u32], lambda: PoissonParam, rounding: ProbRounding) -> Result<Self> {
        let observed = bin_goals(goals)?;
        let (probs, expected) = expected_bins(lambda, goals.len() as u64, rounding)?;
        Ok(GoalBinning {
            labels: GOAL_BIN_LABELS,
            observed,
            probs,
            expected,
        })
    }

    pub fn n(&self) -> u64 {
        self.observed.iter().sum()
    }

    pub fn chi_square(&self) -> Result<GofResult> {
        let o = self.observed.map(|c| c as f64);
        chi_square_gof(&o, &self.expected)
    }
}

/// Count matches with 0, 1, 2, 3 and 4-or-more goals.
pub fn bin_goals(goals: &[u32]) -> Result<[u64; 5]> {
    if goals.is_empty() {
        return Err(Error::Empty("no goal counts to bin".into()));
    }
    let mut bins = [0u64; 5];
    for &g in goals {
        bins[g.min(TAIL_BIN) as usize] += 1;
    }
    Ok(bins)
}

/// Poisson probabilities per bin and expected counts `n * p` (unrounded).
pub fn expected_bins(
    lambda: PoissonParam,
    n: u64,
    rounding: ProbRounding,
) -> Result<([f64; 5], [f64; 5])> {
    if n == 0 {
        return Err(Error::Argument(
            "expected counts need at least one match".into(),
        ));
    }
    let mut probs = [0.0; 5];
    for k in 0..TAIL_BIN {
        probs[k as usize] = poisson_pmf(k, lambda);
    }
    probs[4] = poisson_tail(TAIL_BIN, lambda);
    if let ProbRounding::Decimals(d) = rounding {
        let scale = 10f64.powi(d as i32);
        for p in probs.iter_mut().take(4) {
            *p = (*p * scale).round() / scale;
        }
        probs[4] = ((1.0 - probs[..4].iter().sum::<f64>()) * scale).round() / scale;
    }
    let expected = probs.map(|p| n as f64 * p);
    Ok((probs, expected))
}

/// Pearson chi-square over aligned bins; df = bins - 1.
pub fn chi_square_gof(observed: &[f64], expected: &[f64]) -> Result<GofResult> {
    if observed.len() != expected.len() {
        return Err(Error::Argument(format!(
            "{} observed bins but {} expected",
            observed.len(),
            expected.len()
        )));
    }
    if observed.len() < 2 {
        return Err(Error::Argument("chi-square needs at least two bins".into()));
    }
    let mut stat = 0.0;
    for (i, (&o, &e)) in observed.iter().zip(expected).enumerate() {
        if e.is_nan() || e <= 0.0 {
            return Err(Error::ZeroExpected {
                bin: GOAL_BIN_LABELS
                    .get(i)
                    .map_or_else(|| i.to_string(), |s| s.to_string()),
            });
        }
        stat += (o - e).powi(2) / e;
    }
    let df = observed.len() - 1;
    Ok(GofResult {
        statistic: stat,
        df_or_n: df,
        p_value: chi_square_sf(stat, df as u32)?,
    })
}

fn sorted(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::Empty("empty sample".into()));
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain("sample contains NaN".into()));
    }
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

/// One-sample two-sided KS test of `sample` against `model_cdf`.
pub fn ks_test(sample: &[f64], model_cdf: impl Fn(f64) -> f64) -> Result<GofResult> {
    let xs = sorted(sample)?;
    let n = xs.len();
    let nf = n as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = model_cdf(x);
            let i = i as f64;
            ((i + 1.0) / nf - f).max(f - i / nf)
        })
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0);
    Ok(GofResult {
        statistic: d,
        df_or_n: n,
        p_value: kolmogorov_sf(d, n)?,
    })
}

/// Right-continuous empirical distribution function of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

pub fn empirical_cdf(sample: &[f64]) -> Result<EmpiricalCdf> {
    Ok(EmpiricalCdf {
        sorted: sorted(sample)?,
    })
}

impl EmpiricalCdf {
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Distinct sample values with the empirical CDF at each.
    pub fn steps(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, &x) in self.sorted.iter().enumerate() {
            let f = (i + 1) as f64 / self.sorted.len() as f64;
            match out.last_mut() {
                Some(last) if last.0 == x => last.1 = f,
                _ => out.push((x, f)),
            }
        }
        out
    }
}

/// Five-number summary plus mean, sample sd and count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DescriptiveStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub sd: f64,
    pub n: usize,
}

impl DescriptiveStats {
    /// Quartiles use linear interpolation between order statistics
    /// (h = (n - 1) p), the default of most statistics packages.
    pub fn of(sample: &[f64]) -> Result<Self> {
        let xs = sorted(sample)?;
        let n = xs.len();
        let quantile = |p: f64| {
            let h = (n - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            xs[lo] + (h - lo as f64) * (xs[hi] - xs[lo])
        };
        let mean = xs.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(DescriptiveStats {
            min: xs[0],
            q1: quantile(0.25),
            median: quantile(0.5),
            q3: quantile(0.75),
            max: xs[n - 1],
            mean,
            sd,
            n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{uniform_cdf, UniformInterval};

    #[test]
    fn bins_hand_count() {
        assert_eq!(bin_goals(&[0, 0, 4, 9]).unwrap(), [2, 0, 0, 0, 2]);
        assert!(bin_goals(&[]).is_err());
    }

    #[test]
    fn expected_side() {
        let lam = PoissonParam::new(1.916).unwrap();
        let (p, e) = expected_bins(lam, 1038, ProbRounding::Exact).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let shown: Vec<String> = p.iter().map(|v| format!("{v:.3}")).collect();
        assert_eq!(shown, ["0.147", "0.282", "0.270", "0.173", "0.128"]);
        for (pi, ei) in p.iter().zip(e) {
            assert_eq!(ei, 1038.0 * pi);
        }
        assert!(expected_bins(lam, 0, ProbRounding::Exact).is_err());
    }

    #[test]
    fn rounded_probabilities_sum_to_one() {
        let lam = PoissonParam::new(1.916).unwrap();
        let (p, e) = expected_bins(lam, 1038, ProbRounding::Decimals(3)).unwrap();
        assert_eq!(p, [0.147, 0.282, 0.270, 0.173, 0.128]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(e.map(f64::round), [153.0, 293.0, 280.0, 180.0, 133.0]);
    }

    #[test]
    fn chi_square_hand_values() {
        let r = chi_square_gof(&[5.0, 5.0], &[4.0, 6.0]).unwrap();
        assert!((r.statistic - (0.25 + 1.0 / 6.0)).abs() < 1e-15);
        assert_eq!(r.df_or_n, 1);
        let same = chi_square_gof(&[3.0, 7.0, 1.0], &[3.0, 7.0, 1.0]).unwrap();
        assert_eq!(same.statistic, 0.0);
        assert_eq!(same.p_value, 1.0);
        assert!(matches!(
            chi_square_gof(&[1.0, 1.0], &[2.0, 0.0]),
            Err(Error::ZeroExpected { .. })
        ));
        assert!(chi_square_gof(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ks_single_point() {
        let r = ks_test(&[0.5], |x| uniform_cdf(x, UniformInterval::unit())).unwrap();
        assert_eq!(r.statistic, 0.5);
        assert_eq!(r.df_or_n, 1);
        assert!(ks_test(&[], |x| x).is_err());
    }

    #[test]
    fn ecdf_definition() {
        let e = empirical_cdf(&[3.0, 1.0, 2.0]).unwrap();
        assert!((e.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(e.eval(3.0), 1.0);
        assert_eq!(e.eval(0.99), 0.0);
        let t = empirical_cdf(&[1.0, 1.0, 2.0, 5.0]).unwrap();
        assert_eq!(t.steps(), vec![(1.0, 0.5), (2.0, 0.75), (5.0, 1.0)]);
    }

    #[test]
    fn quartiles_interpolate() {
        let s = DescriptiveStats::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(
            (s.min, s.q1, s.median, s.q3, s.max),
            (1.0, 1.75, 2.5, 3.25, 4.0)
        );
        assert!((s.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(s.n, 4);
    }
}
