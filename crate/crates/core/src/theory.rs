//! Periodic-orbit (diagonal-approximation) predictions for the
//! rectangular billiard, in unit-mean-spacing variables.
//!
//! A winding-number family `(M1, M2)` carries weight `delta_M`
//! (0 for (0,0), 1/2 on the axes, 1 otherwise) and scaled length
//! `R_M = sqrt(M1^2 alpha^{1/2} + M2^2 alpha^{-1/2})`. The two absolutely
//! convergent statistics are
//!
//!   sample IV:        4 sqrt(e/pi^5) sum delta^2/R^3 sin^2(sqrt(pi/e) R E)
//!   saturation SR:      sqrt(e/pi^5) sum delta^2/R^3
//!
//! and the staircase fluctuation is the (conditionally convergent) sum
//! `sum sqrt(2) delta (e/pi^5)^{1/4} R^{-3/2} sin(4 sqrt(pi e) R - pi/4)`.
//!
//! The `R^{-3}` sums are truncated at `r_max` and closed with an analytic
//! tail: interior lattice points have unit density in the scaled
//! `(M1 alpha^{1/4}, M2 alpha^{-1/4})` quarter plane, so the remainder is
//! the quarter-plane integral `(pi/2) int_{r_max}^inf R^{-2} dR` (with a
//! sine-integral factor when the `sin^2` modulation is present). Axis
//! families are summed separately to convergence. The residual error of
//! the tail replacement is O(1/r_max^2) and is checked against `tail_tol`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::exec;

const ZETA3: f64 = 1.202_056_903_159_594_3;

/// One periodic-orbit family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingMode {
    pub m1: u32,
    pub m2: u32,
    pub weight: f64,
    pub scaled_length: f64,
}

impl WindingMode {
    pub fn new(m1: u32, m2: u32, alpha: f64) -> Self {
        let weight = match (m1, m2) {
            (0, 0) => 0.0,
            (0, _) | (_, 0) => 0.5,
            _ => 1.0,
        };
        let sa = alpha.sqrt();
        let scaled_length = ((m1 as f64).powi(2) * sa + (m2 as f64).powi(2) / sa).sqrt();
        Self {
            m1,
            m2,
            weight,
            scaled_length,
        }
    }
}

/// Truncation policy for the periodic-orbit sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct POSumConfig {
    /// Truncation radius for the absolutely convergent `R^{-3}` sums.
    pub r_max: f64,
    /// Relative tolerance on the residual error after tail replacement.
    pub tail_tol: f64,
    /// Fixed cap for the staircase-fluctuation sum, which does not
    /// converge absolutely; plot-scale truncation.
    pub fluct_r_max: f64,
}

impl Default for POSumConfig {
    fn default() -> Self {
        Self {
            r_max: 2000.0,
            tail_tol: 1e-6,
            fluct_r_max: 12.0,
        }
    }
}

/// All families with `R_M <= r_max`, weights assigned, (0,0) excluded.
pub fn enumerate_modes(alpha: f64, config: &POSumConfig) -> Result<Vec<WindingMode>> {
    enumerate_modes_up_to(alpha, config.r_max)
}

fn enumerate_modes_up_to(alpha: f64, r_max: f64) -> Result<Vec<WindingMode>> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Config(format!(
            "aspect ratio must be positive, got {alpha}"
        )));
    }
    let sa = alpha.powf(0.25);
    let sb = alpha.powf(-0.25);
    let mut modes = Vec::new();
    let m1_cap = (r_max / sa).floor() as u32;
    let m2_cap = (r_max / sb).floor() as u32;
    for m1 in 0..=m1_cap {
        for m2 in 0..=m2_cap {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let mode = WindingMode::new(m1, m2, alpha);
            if mode.scaled_length <= r_max {
                modes.push(mode);
            }
        }
    }
    if modes.is_empty() {
        return Err(Error::Config(format!(
            "truncation radius {r_max} excludes every periodic-orbit family"
        )));
    }
    Ok(modes)
}

/// Sine integral Si(x) = int_0^x sin(t)/t dt.
pub fn sin_integral(x: f64) -> f64 {
    FRAC_PI_2 - si_complement(x)
}

/// pi/2 - Si(x) for x >= 0, computed without cancellation at large x.
fn si_complement(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= 2.0 {
        // power series for Si
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        let mut k = 1u32;
        loop {
            // t_{k} = t_{k-1} * (-x^2) * (2k-1) / ((2k)(2k+1)^2)
            term *= -x2 * (2 * k - 1) as f64
                / ((2 * k) as f64 * (2 * k + 1) as f64 * (2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-17 {
                break;
            }
            k += 1;
        }
        FRAC_PI_2 - sum
    } else {
        // pi/2 - Si(x) = f(x) cos(x) + g(x) sin(x) with the Laplace
        // integrals f = int e^{-xt}/(1+t^2), g = int t e^{-xt}/(1+t^2)
        let (f, g) = laplace_fg(x);
        f * x.cos() + g * x.sin()
    }
}

/// Composite-Simpson evaluation of the auxiliary integrals after the
/// substitution v = x t, which keeps the integrand O(1)-smooth for any x:
/// f = (1/x) int e^{-v}/(1+(v/x)^2) dv, g = (1/x^2) int v e^{-v}/(1+(v/x)^2) dv.
fn laplace_fg(x: f64) -> (f64, f64) {
    const N: usize = 4000; // even
    const V_MAX: f64 = 60.0;
    let h = V_MAX / N as f64;
    let (mut f, mut g) = (0.0, 0.0);
    for i in 0..=N {
        let v = i as f64 * h;
        let w = (-v).exp() / (1.0 + (v / x) * (v / x));
        let coeff = if i == 0 || i == N {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        f += coeff * w;
        g += coeff * w * v;
    }
    (f * h / 3.0 / x, g * h / 3.0 / (x * x))
}

/// int_a^inf cos(bR)/R^2 dR for a > 0, b >= 0.
fn cos_tail_integral(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        return 1.0 / a;
    }
    let x = a * b;
    (x).cos() / a - b * si_complement(x)
}

/// Cached mode table for one aspect ratio, shared by all theory curves.
#[derive(Debug, Clone)]
pub struct PoSumEngine {
    alpha: f64,
    config: POSumConfig,
    /// Scaled lengths of interior families (both winding numbers >= 1).
    interior_r: Vec<f64>,
    /// Interior partial sum of R^{-3} plus its quarter-plane tail.
    s_interior: f64,
    /// Exact axis contribution (1/4) zeta(3) (alpha^{3/4} + alpha^{-3/4}).
    s_axis: f64,
}

const CHUNK: usize = 16 * 1024;
/// Axis families are summed directly this far; the remainder is < 1e-11.
const AXIS_M_CUT: u32 = 200_000;

impl PoSumEngine {
    pub fn new(alpha: f64, config: POSumConfig) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Config(format!(
                "aspect ratio must be positive, got {alpha}"
            )));
        }
        if !(config.r_max > 0.0) {
            return Err(Error::Config(format!(
                "r_max must be positive, got {}",
                config.r_max
            )));
        }
        let sa = alpha.powf(0.25);
        let sb = alpha.powf(-0.25);
        let r_max = config.r_max;
        let mut interior_r = Vec::new();
        let mut m1 = 1u32;
        while (m1 as f64) * sa <= r_max {
            let u2 = ((m1 as f64) * sa).powi(2);
            let v_max = (r_max * r_max - u2).max(0.0).sqrt() / sb;
            let m2_max = v_max.floor() as u32;
            for m2 in 1..=m2_max {
                let r2 = u2 + ((m2 as f64) * sb).powi(2);
                interior_r.push(r2.sqrt());
            }
            m1 += 1;
        }
        if interior_r.is_empty() {
            return Err(Error::Config(format!(
                "truncation radius {r_max} excludes every interior family"
            )));
        }
        let n_chunks = interior_r.len().div_ceil(CHUNK);
        let partials = exec::map_indexed(n_chunks, |i| {
            interior_r[i * CHUNK..((i + 1) * CHUNK).min(interior_r.len())]
                .iter()
                .map(|r| r.powi(-3))
                .sum::<f64>()
        });
        let s_interior = partials.iter().sum::<f64>() + FRAC_PI_2 / r_max;
        let s_axis = 0.25 * ZETA3 * (alpha.powf(0.75) + alpha.powf(-0.75));
        let engine = Self {
            alpha,
            config,
            interior_r,
            s_interior,
            s_axis,
        };
        engine.check_converged()?;
        Ok(engine)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn config(&self) -> &POSumConfig {
        &self.config
    }

    /// Residual error of the tail replacement, O(1/r_max^2), against the
    /// configured tolerance.
    fn check_converged(&self) -> Result<()> {
        let err_est = 2.0 / (self.config.r_max * self.config.r_max);
        let total = self.s_interior + self.s_axis;
        if err_est > self.config.tail_tol * total {
            return Err(Error::Convergence(format!(
                "tail estimate {err_est:.3e} exceeds tolerance {:.3e} x sum {total:.6}; raise r_max",
                self.config.tail_tol
            )));
        }
        Ok(())
    }

    /// Converged value of `sum delta^2 / R^3`.
    pub fn length_sum(&self) -> f64 {
        self.s_interior + self.s_axis
    }

    /// `sum delta^2 sin^2(q R) / R^3` with its analytic tail.
    fn modulated_sum(&self, q: f64) -> f64 {
        if q == 0.0 {
            return 0.0;
        }
        let n = self.interior_r.len();
        let n_chunks = n.div_ceil(CHUNK);
        let partials = exec::map_indexed(n_chunks, |i| {
            self.interior_r[i * CHUNK..((i + 1) * CHUNK).min(n)]
                .iter()
                .map(|&r| {
                    let s = (q * r).sin();
                    s * s / (r * r * r)
                })
                .sum::<f64>()
        });
        let mut total: f64 = partials.iter().sum();
        // interior tail: (pi/2) int sin^2(qR)/R^2 = (pi/4)(1/a - T(a, 2q))
        let a = self.config.r_max;
        total += (PI / 4.0) * (1.0 / a - cos_tail_integral(a, 2.0 * q));
        // axis families, weight^2 = 1/4
        let sa = self.alpha.powf(0.25);
        let sb = self.alpha.powf(-0.25);
        for step in [sa, sb] {
            let mut axis = 0.0;
            for m in 1..=AXIS_M_CUT {
                let r = m as f64 * step;
                let s = (q * r).sin();
                axis += s * s / (r * r * r);
            }
            total += 0.25 * axis;
        }
        total
    }

    /// Theoretical sample IV at running energy `eps` and width `e`.
    pub fn sample_iv(&self, eps: f64, e: f64) -> f64 {
        let q = (PI / eps).sqrt() * e;
        4.0 * (eps / PI.powi(5)).sqrt() * self.modulated_sum(q)
    }

    /// Theoretical sample saturation SR at running energy `eps`.
    pub fn saturation_sr(&self, eps: f64) -> f64 {
        (eps / PI.powi(5)).sqrt() * self.length_sum()
    }

    /// Theoretical sample CFSS: saturation SR minus half the sample IV.
    pub fn cfss(&self, eps: f64, e: f64) -> f64 {
        self.saturation_sr(eps) - self.sample_iv(eps, e) / 2.0
    }
}

/// Amplitude and phase argument of one family's staircase-fluctuation term:
/// `amp sin(arg + phase_offset)` with `amp = sqrt(2) delta (eps/pi^5)^{1/4} R^{-3/2}`
/// and `arg = 4 sqrt(pi eps) R`.
pub fn fluct_term(mode: &WindingMode, eps: f64) -> (f64, f64) {
    let amp = 2.0_f64.sqrt()
        * mode.weight
        * (eps / PI.powi(5)).powf(0.25)
        * mode.scaled_length.powf(-1.5);
    let arg = 4.0 * (PI * eps).sqrt() * mode.scaled_length;
    (amp, arg)
}

/// Staircase-fluctuation sum with an explicit phase offset (the physical
/// value is -pi/4; 0 is kept around for comparison).
pub fn theory_staircase_fluct_with_phase(
    eps: f64,
    alpha: f64,
    config: &POSumConfig,
    phase_offset: f64,
) -> Result<f64> {
    let modes = enumerate_modes_up_to(alpha, config.fluct_r_max)?;
    let mut total = 0.0;
    for mode in &modes {
        let (amp, arg) = fluct_term(mode, eps);
        total += amp * (arg + phase_offset).sin();
    }
    Ok(total)
}

/// Staircase fluctuation from the periodic-orbit sum, with the -pi/4 phase.
pub fn theory_staircase_fluct(eps: f64, alpha: f64, config: &POSumConfig) -> Result<f64> {
    theory_staircase_fluct_with_phase(eps, alpha, config, -PI / 4.0)
}

/// Aspect-ratio average of the staircase fluctuation over a Gaussian
/// distribution, by a deterministic midpoint rule on mean +- 4 sigma.
pub fn pa_averaged_staircase_fluct(
    eps: f64,
    mean_alpha: f64,
    std_alpha: f64,
    n_nodes: usize,
    config: &POSumConfig,
    phase_offset: f64,
) -> Result<f64> {
    if n_nodes == 0 || std_alpha <= 0.0 {
        return Err(Error::Config(format!(
            "need positive node count and std, got {n_nodes}, {std_alpha}"
        )));
    }
    let lo = (mean_alpha - 4.0 * std_alpha).max(1e-3);
    let hi = mean_alpha + 4.0 * std_alpha;
    let h = (hi - lo) / n_nodes as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n_nodes {
        let a = lo + (i as f64 + 0.5) * h;
        let z = (a - mean_alpha) / std_alpha;
        let w = (-0.5 * z * z).exp();
        num += w * theory_staircase_fluct_with_phase(eps, a, config, phase_offset)?;
        den += w;
    }
    Ok(num / den)
}

/// Theoretical sample IV (one-shot; build a [`PoSumEngine`] for curves).
pub fn theory_sample_iv(eps: f64, e: f64, alpha: f64, config: &POSumConfig) -> Result<f64> {
    if !(eps > 0.0) || e < 0.0 {
        return Err(Error::Argument(format!(
            "need eps > 0 and E >= 0, got {eps}, {e}"
        )));
    }
    Ok(PoSumEngine::new(alpha, *config)?.sample_iv(eps, e))
}

/// Theoretical sample saturation SR (one-shot).
pub fn theory_saturation_sr(eps: f64, alpha: f64, config: &POSumConfig) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Argument(format!("need eps > 0, got {eps}")));
    }
    Ok(PoSumEngine::new(alpha, *config)?.saturation_sr(eps))
}

/// Theoretical sample CFSS (one-shot).
pub fn theory_cfss(eps: f64, e: f64, alpha: f64, config: &POSumConfig) -> Result<f64> {
    if !(eps > 0.0) || e < 0.0 {
        return Err(Error::Argument(format!(
            "need eps > 0 and E >= 0, got {eps}, {e}"
        )));
    }
    Ok(PoSumEngine::new(alpha, *config)?.cfss(eps, e))
}

/// Leftward shift of the fluctuation curve due to the perimeter term:
/// `r = sqrt(4 mean_energy / pi)`.
pub fn perimeter_shift(mean_energy: f64) -> f64 {
    (4.0 * mean_energy / PI).sqrt()
}

/// Sampling range beyond which spectral averaging wipes out IV
/// oscillations: `2 sqrt(pi) eps^{3/2} / (R_min E)` with `R_min` the
/// shortest family of nonzero weight.
pub fn sa_decay_threshold(eps: f64, e: f64, alpha: f64) -> f64 {
    let r_min = alpha.powf(0.25).min(alpha.powf(-0.25));
    2.0 * PI.sqrt() * eps.powf(1.5) / (r_min * e)
}
