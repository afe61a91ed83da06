//! Ensemble-averaging engines: spectral averaging (SA), rescaled spectral
//! averaging (RSA) and parametric averaging (PA).
//!
//! All three reduce member values in fixed index order, so results are
//! bit-identical between the parallel and sequential builds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::exec;
use crate::spectrum::{
    enumerate_levels_with_budget, unfold, BilliardShape, UnfoldedSpectrum, DEFAULT_LEVEL_BUDGET,
};
use crate::statistics::{evaluate, StatKind};

/// Averaging method tag carried by result curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Sa,
    Rsa,
    Pa,
    Theory,
    Sample,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Sa => "sa",
            Method::Rsa => "rsa",
            Method::Pa => "pa",
            Method::Theory => "theory",
            Method::Sample => "sample",
        }
    }
}

/// A statistic evaluated on a grid, with the ensemble mean per point.
#[derive(Debug, Clone, PartialEq)]
pub struct StatisticCurve {
    pub abscissa: Vec<f64>,
    pub mean: Vec<f64>,
    pub n_members: usize,
    pub method: Method,
    pub kind: StatKind,
}

/// Uniform energy sampling in a range centered at a running energy.
#[derive(Debug, Clone)]
pub struct SAPlan {
    pub center: f64,
    pub range: f64,
    pub n_samples: usize,
}

impl SAPlan {
    pub fn new(center: f64, range: f64, n_samples: usize) -> Result<Self> {
        if n_samples < 2 {
            return Err(Error::Config(format!(
                "need at least 2 samples, got {n_samples}"
            )));
        }
        if !(range > 0.0) || !center.is_finite() {
            return Err(Error::Config(format!(
                "invalid SA plan: center {center}, range {range}"
            )));
        }
        Ok(Self {
            center,
            range,
            n_samples,
        })
    }

    /// Equally spaced sampled energies covering the range, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        let lo = self.center - self.range / 2.0;
        let step = self.range / (self.n_samples - 1) as f64;
        (0..self.n_samples).map(|i| lo + i as f64 * step).collect()
    }
}

/// Scale-covariant energy sampling: member `i` lives at energy `c_i * base`.
#[derive(Debug, Clone)]
pub struct RSAPlan {
    pub base_energy: f64,
    pub scale_ratios: Vec<f64>,
}

impl RSAPlan {
    pub fn new(base_energy: f64, scale_ratios: Vec<f64>) -> Result<Self> {
        if scale_ratios.is_empty() || scale_ratios.iter().any(|&c| c < 1.0) {
            return Err(Error::Config(
                "scale ratios must be nonempty and >= 1".into(),
            ));
        }
        if !(base_energy > 0.0) {
            return Err(Error::Config(format!("invalid base energy {base_energy}")));
        }
        Ok(Self {
            base_energy,
            scale_ratios,
        })
    }

    /// `n+1` ratios uniform on `[1, c_max]`, with `c_0 = 1` included.
    pub fn uniform(base_energy: f64, c_max: f64, n: usize) -> Result<Self> {
        if c_max < 1.0 || n == 0 {
            return Err(Error::Config(format!(
                "invalid RSA grid: c_max {c_max}, n {n}"
            )));
        }
        let ratios = (0..=n)
            .map(|i| 1.0 + (c_max - 1.0) * i as f64 / n as f64)
            .collect();
        Self::new(base_energy, ratios)
    }
}

/// Gaussian aspect-ratio ensemble at fixed running energy.
#[derive(Debug, Clone)]
pub struct PAPlan {
    pub mean_alpha: f64,
    pub std_alpha: f64,
    pub seed: u64,
    alphas: Vec<f64>,
}

impl PAPlan {
    /// Draw the member aspect ratios. Non-positive draws are rejected and
    /// redrawn; a rejection rate above 50% is treated as misconfiguration.
    pub fn draw(mean_alpha: f64, std_alpha: f64, n_members: usize, seed: u64) -> Result<Self> {
        if n_members == 0 {
            return Err(Error::Config(
                "PA ensemble needs at least one member".into(),
            ));
        }
        let normal = Normal::new(mean_alpha, std_alpha)
            .map_err(|e| Error::Config(format!("bad alpha distribution: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut alphas = Vec::with_capacity(n_members);
        let mut rejections = 0usize;
        while alphas.len() < n_members {
            let a: f64 = normal.sample(&mut rng);
            if a > 0.0 {
                alphas.push(a);
            } else {
                rejections += 1;
                if rejections > n_members {
                    return Err(Error::Config(format!(
                        "rejection rate above 50% drawing alphas (mean {mean_alpha}, std {std_alpha})"
                    )));
                }
            }
        }
        Ok(Self {
            mean_alpha,
            std_alpha,
            seed,
            alphas,
        })
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn n_members(&self) -> usize {
        self.alphas.len()
    }
}

/// What the grid of a PA curve enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    /// Grid entries are running energies; `fixed` is the interval width.
    RunningEnergy,
    /// Grid entries are interval widths; `fixed` is the running energy.
    IntervalWidth,
}

/// SA: for each width in `e_grid`, the mean of the statistic over the
/// plan's sampled energies.
pub fn sa_average(
    spec: &UnfoldedSpectrum,
    kind: StatKind,
    plan: &SAPlan,
    e_grid: &[f64],
) -> Result<StatisticCurve> {
    let energies = plan.grid();
    let results = exec::map_indexed(e_grid.len(), |j| {
        let e = e_grid[j];
        let mut acc = 0.0;
        for &x in &energies {
            match evaluate(spec, kind, x, e) {
                Ok(v) => acc += v,
                Err(err) => return Err(err),
            }
        }
        Ok(acc / energies.len() as f64)
    });
    let mean = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(StatisticCurve {
        abscissa: e_grid.to_vec(),
        mean,
        n_members: plan.n_samples,
        method: Method::Sa,
        kind,
    })
}

/// SA of a statistic as a function of the running energy: one plan is
/// centered on each grid point.
pub fn sa_curve_over_energies(
    spec: &UnfoldedSpectrum,
    kind: StatKind,
    range: f64,
    n_samples: usize,
    eps_grid: &[f64],
    width: f64,
) -> Result<StatisticCurve> {
    let results = exec::map_indexed(eps_grid.len(), |j| {
        let plan = SAPlan::new(eps_grid[j], range, n_samples)?;
        let mut acc = 0.0;
        for x in plan.grid() {
            acc += evaluate(spec, kind, x, width)?;
        }
        Ok(acc / n_samples as f64)
    });
    let mean = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(StatisticCurve {
        abscissa: eps_grid.to_vec(),
        mean,
        n_members: n_samples,
        method: Method::Sa,
        kind,
    })
}

/// RSA: member `i` is evaluated at `(c_i eps, sqrt(c_i) E)` and rescaled by
/// `1/sqrt(c_i)` before averaging. Defined for IV, CFSS and saturation SR;
/// GV has no rescaled form.
pub fn rsa_average(
    spec: &UnfoldedSpectrum,
    kind: StatKind,
    plan: &RSAPlan,
    e_grid: &[f64],
) -> Result<StatisticCurve> {
    match kind {
        StatKind::Iv | StatKind::Cfss | StatKind::SatSr => {}
        other => {
            return Err(Error::Unsupported(format!(
                "no rescaled spectral averaging for {}",
                other.name()
            )))
        }
    }
    let results = exec::map_indexed(e_grid.len(), |j| {
        let e = e_grid[j];
        let mut acc = 0.0;
        for &c in &plan.scale_ratios {
            let sq = c.sqrt();
            acc += evaluate(spec, kind, c * plan.base_energy, sq * e)? / sq;
        }
        Ok(acc / plan.scale_ratios.len() as f64)
    });
    let mean = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(StatisticCurve {
        abscissa: e_grid.to_vec(),
        mean,
        n_members: plan.scale_ratios.len(),
        method: Method::Rsa,
        kind,
    })
}

/// PA: one spectrum per drawn aspect ratio, regenerated up to `e_max`,
/// evaluated on the whole grid, and averaged member-wise in index order.
pub fn pa_average(
    plan: &PAPlan,
    kind: StatKind,
    grid: &[f64],
    mode: GridMode,
    fixed: f64,
    e_max: f64,
) -> Result<StatisticCurve> {
    pa_average_with_budget(plan, kind, grid, mode, fixed, e_max, DEFAULT_LEVEL_BUDGET)
}

pub fn pa_average_with_budget(
    plan: &PAPlan,
    kind: StatKind,
    grid: &[f64],
    mode: GridMode,
    fixed: f64,
    e_max: f64,
    budget: usize,
) -> Result<StatisticCurve> {
    let n = plan.n_members();
    let member_rows = exec::map_indexed(n, |i| -> Result<Vec<f64>> {
        let alpha = plan.alphas()[i];
        let shape = BilliardShape::new(alpha)?;
        let raw = enumerate_levels_with_budget(shape, e_max, budget)?;
        let spec = unfold(&raw);
        grid.iter()
            .map(|&g| {
                let (center, width) = match mode {
                    GridMode::RunningEnergy => (g, fixed),
                    GridMode::IntervalWidth => (fixed, g),
                };
                evaluate(&spec, kind, center, width)
            })
            .collect::<Result<Vec<f64>>>()
            .map_err(|e| Error::Range(format!("member {i} (alpha {alpha:.6}): {e}")))
    });
    let mut mean = vec![0.0; grid.len()];
    for row in member_rows {
        let row = row?;
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    Ok(StatisticCurve {
        abscissa: grid.to_vec(),
        mean,
        n_members: n,
        method: Method::Pa,
        kind,
    })
}
