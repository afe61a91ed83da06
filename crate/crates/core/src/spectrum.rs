//! Rectangular-billiard eigenvalues, Weyl unfolding and staircase queries.
//!
//! Everything is dimensionless: energies are measured in units of the mean
//! level spacing, so the only shape parameter left is the aspect ratio
//! `alpha = a^2/b^2`. In these units the eigenvalue with quantum numbers
//! `(n1, n2)` is `(pi/4) (n1^2 alpha^{-1/2} + n2^2 alpha^{1/2})` and the
//! smooth staircase is `e - c sqrt(e) + 1/4` with
//! `c = (alpha^{1/4} + alpha^{-1/4}) / sqrt(pi)`.

use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};

/// Default cap on the number of levels a single spectrum may hold.
pub const DEFAULT_LEVEL_BUDGET: usize = 50_000_000;

/// Rectangle geometry reduced to its aspect ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilliardShape {
    aspect_ratio: f64,
}

impl BilliardShape {
    /// The paper's default aspect ratio `1 - (sqrt(5)-1)/20`, chosen to
    /// avoid degeneracies.
    pub fn default_aspect_ratio() -> f64 {
        1.0 - (5.0_f64.sqrt() - 1.0) / 20.0
    }

    pub fn new(aspect_ratio: f64) -> Result<Self> {
        if !aspect_ratio.is_finite() || aspect_ratio <= 0.0 {
            return Err(Error::Config(format!(
                "aspect ratio must be positive and finite, got {aspect_ratio}"
            )));
        }
        Ok(Self { aspect_ratio })
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.aspect_ratio
    }

    /// Perimeter coefficient of the smooth staircase,
    /// `(alpha^{1/4} + alpha^{-1/4}) / sqrt(pi)`.
    pub fn perimeter_coeff(&self) -> f64 {
        let q = self.aspect_ratio.powf(0.25);
        (q + 1.0 / q) / PI.sqrt()
    }

    /// Eigenvalue in mean-spacing units.
    pub fn level(&self, n1: u32, n2: u32) -> f64 {
        let sa = self.aspect_ratio.sqrt();
        (PI / 4.0) * ((n1 as f64).powi(2) / sa + (n2 as f64).powi(2) * sa)
    }
}

/// Sorted eigenvalues up to a cutoff, before unfolding.
#[derive(Debug, Clone)]
pub struct RawSpectrum {
    shape: BilliardShape,
    levels: Vec<f64>,
    e_max: f64,
}

impl RawSpectrum {
    pub fn shape(&self) -> BilliardShape {
        self.shape
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn e_max(&self) -> f64 {
        self.e_max
    }

    pub fn count(&self) -> usize {
        self.levels.len()
    }
}

/// Enumerate all levels up to `e_max` with the default memory budget.
pub fn enumerate_levels(shape: BilliardShape, e_max: f64) -> Result<RawSpectrum> {
    enumerate_levels_with_budget(shape, e_max, DEFAULT_LEVEL_BUDGET)
}

/// Enumerate all levels up to `e_max`. Loops over `n1` and solves the `n2`
/// range in closed form, so the work is proportional to the level count.
pub fn enumerate_levels_with_budget(
    shape: BilliardShape,
    e_max: f64,
    budget: usize,
) -> Result<RawSpectrum> {
    if !e_max.is_finite() || e_max <= 0.0 {
        return Err(Error::Argument(format!(
            "e_max must be positive, got {e_max}"
        )));
    }
    let c = shape.perimeter_coeff();
    let weyl_estimate = e_max - c * e_max.sqrt() + 0.25;
    if weyl_estimate > budget as f64 {
        return Err(Error::Resource(format!(
            "cutoff {e_max} implies ~{weyl_estimate:.0} levels, exceeding the budget of {budget}"
        )));
    }

    let sa = shape.aspect_ratio().sqrt();
    let pre = PI / 4.0;
    let mut levels = Vec::with_capacity(weyl_estimate.max(0.0) as usize + 16);
    let n1_max = (4.0 * e_max * sa / PI).sqrt().floor() as u32 + 1;
    for n1 in 1..=n1_max {
        let e1 = pre * (n1 as f64).powi(2) / sa;
        if e1 > e_max {
            break;
        }
        let rem = (e_max - e1) * 4.0 / (PI * sa);
        let n2_max = rem.sqrt().floor() as u32;
        for n2 in 1..=n2_max {
            let e = e1 + pre * (n2 as f64).powi(2) * sa;
            if e <= e_max {
                levels.push(e);
            }
        }
    }
    levels.sort_by(|a, b| a.total_cmp(b));
    Ok(RawSpectrum {
        shape,
        levels,
        e_max,
    })
}

/// Unit-mean-spacing levels with the trustworthy query range attached.
#[derive(Debug, Clone)]
pub struct UnfoldedSpectrum {
    shape: BilliardShape,
    levels: Vec<f64>,
    perimeter_coeff: f64,
    x_min: f64,
    x_max: f64,
}

/// Fraction of `c^2/4` excluded at the bottom on top of the non-monotonic
/// region itself.
const LOW_END_MARGIN: f64 = 0.1;

/// Smooth staircase `e - c sqrt(e) + 1/4`.
pub fn weyl_staircase(e: f64, c: f64) -> f64 {
    e - c * e.sqrt() + 0.25
}

/// Map a raw spectrum to unit mean spacing via Weyl's formula.
///
/// The usable range excludes the raw region `e < c^2/4` where the map
/// decreases, and the top `2 sqrt(e_max)` of the raw range where levels
/// from above the cutoff could leak in.
pub fn unfold(raw: &RawSpectrum) -> UnfoldedSpectrum {
    let c = raw.shape.perimeter_coeff();
    let levels: Vec<f64> = raw.levels.iter().map(|&e| weyl_staircase(e, c)).collect();
    let e_low = (c * c / 4.0) * (1.0 + LOW_END_MARGIN);
    let x_min = weyl_staircase(e_low, c).max(1.0);
    let e_high = raw.e_max - 2.0 * raw.e_max.sqrt();
    let x_max = weyl_staircase(e_high.max(e_low), c);
    UnfoldedSpectrum {
        shape: raw.shape,
        levels,
        perimeter_coeff: c,
        x_min,
        x_max,
    }
}

impl UnfoldedSpectrum {
    /// Build directly from already-unfolded levels. Useful for synthetic
    /// spectra (picket fences, single steps) in analytic checks.
    pub fn from_levels(
        shape: BilliardShape,
        levels: Vec<f64>,
        usable_range: (f64, f64),
    ) -> Result<Self> {
        if levels.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Argument("levels must be nondecreasing".into()));
        }
        if usable_range.0 > usable_range.1 {
            return Err(Error::Argument("inverted usable range".into()));
        }
        let perimeter_coeff = shape.perimeter_coeff();
        Ok(Self {
            shape,
            levels,
            perimeter_coeff,
            x_min: usable_range.0,
            x_max: usable_range.1,
        })
    }

    pub fn shape(&self) -> BilliardShape {
        self.shape
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn perimeter_coeff(&self) -> f64 {
        self.perimeter_coeff
    }

    /// Interval of unfolded energies for which staircase queries are trusted.
    pub fn usable_range(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn check_in_range(&self, x: f64) -> Result<()> {
        if x < self.x_min || x > self.x_max {
            return Err(Error::Range(format!(
                "energy {x} outside usable range [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        Ok(())
    }

    /// Number of levels `<= x` (right-continuous staircase), by binary search.
    pub fn staircase(&self, x: f64) -> Result<usize> {
        self.check_in_range(x)?;
        Ok(self.levels.partition_point(|&l| l <= x))
    }

    /// Staircase deviation `N(x) - x`.
    pub fn staircase_fluct(&self, x: f64) -> Result<f64> {
        Ok(self.staircase(x)? as f64 - x)
    }

    /// Exact `(int N dx, int N^2 dx, int x N dx)` over `[x_lo, x_hi]`.
    ///
    /// The staircase is piecewise constant between consecutive levels, so
    /// every segment contributes in closed form.
    pub fn staircase_integrals(&self, x_lo: f64, x_hi: f64) -> Result<(f64, f64, f64)> {
        if x_lo > x_hi {
            return Err(Error::Argument(format!("inverted window [{x_lo}, {x_hi}]")));
        }
        self.check_in_range(x_lo)?;
        self.check_in_range(x_hi)?;
        let i0 = self.levels.partition_point(|&l| l <= x_lo);
        let i1 = self.levels.partition_point(|&l| l <= x_hi);
        let mut k = i0 as f64;
        let mut a = x_lo;
        let (mut i1_sum, mut i2_sum, mut ix_sum) = (0.0, 0.0, 0.0);
        for &l in &self.levels[i0..i1] {
            let b = l;
            let len = b - a;
            i1_sum += k * len;
            i2_sum += k * k * len;
            ix_sum += k * (b * b - a * a) / 2.0;
            k += 1.0;
            a = b;
        }
        let len = x_hi - a;
        i1_sum += k * len;
        i2_sum += k * k * len;
        ix_sum += k * (x_hi * x_hi - a * a) / 2.0;
        Ok((i1_sum, i2_sum, ix_sum))
    }
}

impl UnfoldedSpectrum {
    /// Exact `(int nr du, int nr^2 du, int u nr du)` over `u` in
    /// `[-width/2, width/2]`, where `nr(u) = N(center+u) - N(center-width/2)`
    /// is the staircase reduced to the window.
    ///
    /// Working with the reduced count and the centered abscissa keeps the
    /// rigidity formula well conditioned at large running energies, where
    /// the plain `int N^2 dx` would cancel ~10 digits against the mean.
    pub fn reduced_staircase_integrals(&self, center: f64, width: f64) -> Result<(f64, f64, f64)> {
        if width < 0.0 {
            return Err(Error::Argument(format!("negative width {width}")));
        }
        let x_lo = center - width / 2.0;
        let x_hi = center + width / 2.0;
        self.check_in_range(x_lo)?;
        self.check_in_range(x_hi)?;
        let i0 = self.levels.partition_point(|&l| l <= x_lo);
        let i1 = self.levels.partition_point(|&l| l <= x_hi);
        let mut k = 0.0_f64;
        let mut a = -width / 2.0;
        let (mut s1, mut s2, mut su) = (0.0, 0.0, 0.0);
        for &l in &self.levels[i0..i1] {
            let b = l - center;
            let len = b - a;
            s1 += k * len;
            s2 += k * k * len;
            su += k * (b * b - a * a) / 2.0;
            k += 1.0;
            a = b;
        }
        let b = width / 2.0;
        let len = b - a;
        s1 += k * len;
        s2 += k * k * len;
        su += k * (b * b - a * a) / 2.0;
        Ok((s1, s2, su))
    }
}

/// Dump `index,raw_e,unfolded_x` rows, LF line endings.
pub fn write_spectrum_csv<W: Write>(
    raw: &RawSpectrum,
    unfolded: &UnfoldedSpectrum,
    mut w: W,
) -> Result<()> {
    w.write_all(b"index,raw_e,unfolded_x\n")?;
    for (i, (&e, &x)) in raw.levels().iter().zip(unfolded.levels()).enumerate() {
        writeln!(w, "{i},{e:.15e},{x:.15e}")?;
    }
    Ok(())
}
