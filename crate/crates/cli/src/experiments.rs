//! The built-in experiments: each one assembles spectra, ensemble plans,
//! statistics and the matching mode-sum predictions, then writes a CSV
//! dataset. Every run is fully reproducible from (config, seed); the only
//! randomness is the parametric ensemble's aspect-ratio draw.

use crate::config::Config;
use crate::csv_out::{check_shared_abscissa, emit_csv, Column};
use billiard_core::averaging::{
    pa_average, rsa_average, sa_average, sa_curve_over_energies, GridMode, Method, PAPlan, RSAPlan,
    SAPlan, StatisticCurve,
};
use billiard_core::spectrum::{
    enumerate_levels, unfold, write_spectrum_csv, BilliardShape, UnfoldedSpectrum,
};
use billiard_core::statistics::{evaluate, StatKind};
use billiard_core::theory::{
    pa_averaged_staircase_fluct, theory_staircase_fluct, POSumConfig, PoSumEngine,
};
use billiard_core::{Error, Result};
use std::path::Path;

pub const EXPERIMENTS: &[&str] = &[
    "fluct_sa",
    "fluct_pa",
    "iv_sa",
    "iv_rsa_pa",
    "cfss_rsa_pa",
    "satsr_rsa_pa",
    "satsr_sa_pa",
    "gv_pa",
];

/// Config keys shared by every experiment.
const COMMON_KEYS: &[&str] = &["seed", "e_max", "r_max", "tail_tol"];

fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(hi > lo) {
        return Err(Error::Config(format!(
            "grid needs at least 2 points and max > min, got [{lo}, {hi}] with {n}"
        )));
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

fn spectrum_to(alpha: f64, e_max: f64) -> Result<UnfoldedSpectrum> {
    Ok(unfold(&enumerate_levels(
        BilliardShape::new(alpha)?,
        e_max,
    )?))
}

fn po_config(cfg: &Config) -> Result<POSumConfig> {
    let defaults = POSumConfig::default();
    Ok(POSumConfig {
        r_max: cfg.get_f64("r_max", defaults.r_max)?,
        tail_tol: cfg.get_f64("tail_tol", defaults.tail_tol)?,
        ..defaults
    })
}

/// Saturation window width: narrow at low running energy, wider above the
/// split so the rigidity is actually saturated.
fn sat_width(eps: f64, low: f64, high: f64, split: f64) -> f64 {
    if eps <= split {
        low
    } else {
        high
    }
}

fn curve(
    abscissa: &[f64],
    mean: Vec<f64>,
    n: usize,
    method: Method,
    kind: StatKind,
) -> StatisticCurve {
    StatisticCurve {
        abscissa: abscissa.to_vec(),
        mean,
        n_members: n,
        method,
        kind,
    }
}

/// Write the raw + unfolded spectrum of a single billiard.
pub fn run_spectrum(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&["alpha", "e_max", "seed"])?;
    let alpha = cfg.get_f64("alpha", BilliardShape::default_aspect_ratio())?;
    let e_max = cfg.get_f64("e_max", 1.0e4)?;
    let raw = enumerate_levels(BilliardShape::new(alpha)?, e_max)?;
    let unfolded = unfold(&raw);
    let file = std::fs::File::create(out)?;
    write_spectrum_csv(&raw, &unfolded, std::io::BufWriter::new(file))?;
    Ok(())
}

pub fn run(name: &str, cfg: &Config, out: &Path) -> Result<()> {
    match name {
        "fluct_sa" => fluct_sa(cfg, out),
        "fluct_pa" => fluct_pa(cfg, out),
        "iv_sa" => iv_sa(cfg, out),
        "iv_rsa_pa" => iv_rsa_pa(cfg, out),
        "cfss_rsa_pa" => cfss_rsa_pa(cfg, out),
        "satsr_rsa_pa" => satsr_rsa_pa(cfg, out),
        "satsr_sa_pa" => satsr_sa_pa(cfg, out),
        "gv_pa" => gv_pa(cfg, out),
        other => Err(Error::Config(format!(
            "unknown experiment `{other}`; valid experiments: {}",
            EXPERIMENTS.join(", ")
        ))),
    }
}

fn keys<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    let mut v: Vec<&'a str> = COMMON_KEYS.to_vec();
    v.extend_from_slice(extra);
    v
}

/// Spectrally averaged staircase fluctuation along a running-energy grid,
/// with the single-billiard mode-sum fluctuation for contrast.
fn fluct_sa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "alpha",
        "eps_min",
        "eps_max",
        "eps_count",
        "sa_range",
        "sa_samples",
    ]))?;
    let alpha = cfg.get_f64("alpha", BilliardShape::default_aspect_ratio())?;
    let eps_grid = linspace(
        cfg.get_f64("eps_min", 5.0e3)?,
        cfg.get_f64("eps_max", 2.0e4)?,
        cfg.get_usize("eps_count", 151)?,
    )?;
    let range = cfg.get_f64("sa_range", 1.0e3)?;
    let samples = cfg.get_usize("sa_samples", 500)?;
    let e_max = cfg.get_f64("e_max", eps_grid[eps_grid.len() - 1] + range / 2.0 + 1.0e3)?;
    let spec = spectrum_to(alpha, e_max)?;
    let sa = sa_curve_over_energies(&spec, StatKind::Fluct, range, samples, &eps_grid, 0.0)?;

    let po = po_config(cfg)?;
    let th: Vec<f64> = eps_grid
        .iter()
        .map(|&e| theory_staircase_fluct(e, alpha, &po))
        .collect::<Result<_>>()?;
    let th = curve(&eps_grid, th, 1, Method::Theory, StatKind::Fluct);

    emit_csv(
        out,
        &eps_grid,
        &[Column::from_curve(&sa), Column::from_curve(&th)],
    )
}

/// Parametrically averaged staircase fluctuation with the aspect-ratio
/// averaged mode-sum prediction.
fn fluct_pa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "mean_alpha",
        "std_alpha",
        "pa_members",
        "eps_min",
        "eps_max",
        "eps_count",
        "theory_nodes",
    ]))?;
    let mean_alpha = cfg.get_f64("mean_alpha", 1.0)?;
    let std_alpha = cfg.get_f64("std_alpha", 0.2)?;
    let members = cfg.get_usize("pa_members", 1000)?;
    let seed = cfg.get_u64("seed", 1)?;
    let eps_grid = linspace(
        cfg.get_f64("eps_min", 1.0e3)?,
        cfg.get_f64("eps_max", 2.0e4)?,
        cfg.get_usize("eps_count", 951)?,
    )?;
    let e_max = cfg.get_f64("e_max", eps_grid[eps_grid.len() - 1] + 1.5e3)?;
    let plan = PAPlan::draw(mean_alpha, std_alpha, members, seed)?;
    let pa = pa_average(
        &plan,
        StatKind::Fluct,
        &eps_grid,
        GridMode::RunningEnergy,
        0.0,
        e_max,
    )?;

    let po = po_config(cfg)?;
    let nodes = cfg.get_usize("theory_nodes", 81)?;
    let th: Vec<f64> = eps_grid
        .iter()
        .map(|&e| {
            pa_averaged_staircase_fluct(
                e,
                mean_alpha,
                std_alpha,
                nodes,
                &po,
                -std::f64::consts::FRAC_PI_4,
            )
        })
        .collect::<Result<_>>()?;
    let th = curve(&eps_grid, th, nodes, Method::Theory, StatKind::Fluct);

    emit_csv(
        out,
        &eps_grid,
        &[Column::from_curve(&pa), Column::from_curve(&th)],
    )
}

/// Spectrally averaged interval variance against interval width, with the
/// mode-sum prediction.
fn iv_sa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "alpha",
        "eps",
        "sa_range",
        "sa_samples",
        "width_min",
        "width_max",
        "width_count",
    ]))?;
    let alpha = cfg.get_f64("alpha", BilliardShape::default_aspect_ratio())?;
    let eps = cfg.get_f64("eps", 1.0e5)?;
    let range = cfg.get_f64("sa_range", 1.0e4)?;
    let samples = cfg.get_usize("sa_samples", 1000)?;
    let e_grid = linspace(
        cfg.get_f64("width_min", 10.0)?,
        cfg.get_f64("width_max", 3162.0)?,
        cfg.get_usize("width_count", 250)?,
    )?;
    let w_max = e_grid[e_grid.len() - 1];
    let e_max = cfg.get_f64("e_max", eps + range / 2.0 + w_max / 2.0 + 2.0e3)?;
    let spec = spectrum_to(alpha, e_max)?;
    let sa = sa_average(
        &spec,
        StatKind::Iv,
        &SAPlan::new(eps, range, samples)?,
        &e_grid,
    )?;

    let engine = PoSumEngine::new(alpha, po_config(cfg)?)?;
    let th: Vec<f64> = e_grid.iter().map(|&e| engine.sample_iv(eps, e)).collect();
    let th = curve(&e_grid, th, 1, Method::Theory, StatKind::Iv);

    emit_csv(
        out,
        &e_grid,
        &[Column::from_curve(&sa), Column::from_curve(&th)],
    )
}

/// Rescaled-spectral and parametric interval variance against interval
/// width at a fixed running energy, with the mode-sum prediction.
fn iv_rsa_pa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "alpha",
        "eps",
        "rsa_c_max",
        "rsa_samples",
        "mean_alpha",
        "std_alpha",
        "pa_members",
        "pa_e_max",
        "width_min",
        "width_max",
        "width_count",
    ]))?;
    let alpha = cfg.get_f64("alpha", BilliardShape::default_aspect_ratio())?;
    let eps = cfg.get_f64("eps", 1.0e5)?;
    let c_max = cfg.get_f64("rsa_c_max", 2.0)?;
    let n_rsa = cfg.get_usize("rsa_samples", 1000)?;
    let e_grid = linspace(
        cfg.get_f64("width_min", 10.0)?,
        cfg.get_f64("width_max", 3162.0)?,
        cfg.get_usize("width_count", 250)?,
    )?;
    let w_max = e_grid[e_grid.len() - 1];
    let e_max = cfg.get_f64("e_max", c_max * eps + c_max.sqrt() * w_max / 2.0 + 3.0e3)?;
    let spec = spectrum_to(alpha, e_max)?;
    let rsa = rsa_average(
        &spec,
        StatKind::Iv,
        &RSAPlan::uniform(eps, c_max, n_rsa)?,
        &e_grid,
    )?;

    let mean_alpha = cfg.get_f64("mean_alpha", BilliardShape::default_aspect_ratio())?;
    let std_alpha = cfg.get_f64("std_alpha", 0.2)?;
    let members = cfg.get_usize("pa_members", 400)?;
    let seed = cfg.get_u64("seed", 1)?;
    let pa_e_max = cfg.get_f64("pa_e_max", eps + w_max / 2.0 + 2.0e3)?;
    let plan = PAPlan::draw(mean_alpha, std_alpha, members, seed)?;
    let pa = pa_average(
        &plan,
        StatKind::Iv,
        &e_grid,
        GridMode::IntervalWidth,
        eps,
        pa_e_max,
    )?;

    let engine = PoSumEngine::new(alpha, po_config(cfg)?)?;
    let th: Vec<f64> = e_grid.iter().map(|&e| engine.sample_iv(eps, e)).collect();
    let th = curve(&e_grid, th, 1, Method::Theory, StatKind::Iv);

    check_shared_abscissa(&[&rsa, &pa, &th])?;
    emit_csv(
        out,
        &e_grid,
        &[
            Column::from_curve(&rsa),
            Column::from_curve(&pa),
            Column::from_curve(&th),
        ],
    )
}

/// Rescaled-spectral and parametric staircase correlation against
/// interval width, with the mode-sum prediction.
fn cfss_rsa_pa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "alpha",
        "eps",
        "rsa_c_max",
        "rsa_samples",
        "mean_alpha",
        "std_alpha",
        "pa_members",
        "pa_e_max",
        "width_min",
        "width_max",
        "width_count",
    ]))?;
    let alpha = cfg.get_f64("alpha", BilliardShape::default_aspect_ratio())?;
    let eps = cfg.get_f64("eps", 1.0e5)?;
    let c_max = cfg.get_f64("rsa_c_max", 2.0)?;
    let n_rsa = cfg.get_usize("rsa_samples", 1000)?;
    let e_grid = linspace(
        cfg.get_f64("width_min", 0.0)?,
        cfg.get_f64("width_max", 3162.0)?,
        cfg.get_usize("width_count", 200)?,
    )?;
    let w_max = e_grid[e_grid.len() - 1];
    let e_max = cfg.get_f64("e_max", c_max * eps + c_max.sqrt() * w_max / 2.0 + 3.0e3)?;
    let spec = spectrum_to(alpha, e_max)?;
    let rsa = rsa_average(
        &spec,
        StatKind::Cfss,
        &RSAPlan::uniform(eps, c_max, n_rsa)?,
        &e_grid,
    )?;

    let mean_alpha = cfg.get_f64("mean_alpha", BilliardShape::default_aspect_ratio())?;
    let std_alpha = cfg.get_f64("std_alpha", 0.2)?;
    let members = cfg.get_usize("pa_members", 400)?;
    let seed = cfg.get_u64("seed", 1)?;
    let pa_e_max = cfg.get_f64("pa_e_max", eps + w_max / 2.0 + 2.0e3)?;
    let plan = PAPlan::draw(mean_alpha, std_alpha, members, seed)?;
    let pa = pa_average(
        &plan,
        StatKind::Cfss,
        &e_grid,
        GridMode::IntervalWidth,
        eps,
        pa_e_max,
    )?;

    let engine = PoSumEngine::new(alpha, po_config(cfg)?)?;
    let th: Vec<f64> = e_grid.iter().map(|&e| engine.cfss(eps, e)).collect();
    let th = curve(&e_grid, th, 1, Method::Theory, StatKind::Cfss);

    check_shared_abscissa(&[&rsa, &pa, &th])?;
    emit_csv(
        out,
        &e_grid,
        &[
            Column::from_curve(&rsa),
            Column::from_curve(&pa),
            Column::from_curve(&th),
        ],
    )
}

fn sat_params(cfg: &Config) -> Result<(f64, f64, f64)> {
    Ok((
        cfg.get_f64("sat_width_low", 1.0e3)?,
        cfg.get_f64("sat_width_high", 5.0e3)?,
        cfg.get_f64("sat_split", 1.0e4)?,
    ))
}

/// Parametric saturation rigidity along a running-energy grid, split into
/// the low- and high-energy saturation windows.
fn pa_satsr_curve(
    plan: &PAPlan,
    eps_grid: &[f64],
    (low, high, split): (f64, f64, f64),
    e_max: f64,
) -> Result<StatisticCurve> {
    let cut = eps_grid.partition_point(|&e| e <= split);
    let mut mean = Vec::with_capacity(eps_grid.len());
    if cut > 0 {
        mean.extend(
            pa_average(
                plan,
                StatKind::SatSr,
                &eps_grid[..cut],
                GridMode::RunningEnergy,
                low,
                e_max,
            )?
            .mean,
        );
    }
    if cut < eps_grid.len() {
        mean.extend(
            pa_average(
                plan,
                StatKind::SatSr,
                &eps_grid[cut..],
                GridMode::RunningEnergy,
                high,
                e_max,
            )?
            .mean,
        );
    }
    Ok(StatisticCurve {
        abscissa: eps_grid.to_vec(),
        mean,
        n_members: plan.n_members(),
        method: Method::Pa,
        kind: StatKind::SatSr,
    })
}

/// Rescaled-spectral and parametric saturation rigidity against running
/// energy, with the mode-sum prediction.
fn satsr_rsa_pa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "alpha",
        "eps_min",
        "eps_max",
        "eps_count",
        "rsa_c_max",
        "rsa_samples",
        "mean_alpha",
        "std_alpha",
        "pa_members",
        "pa_e_max",
        "sat_width_low",
        "sat_width_high",
        "sat_split",
    ]))?;
    let alpha = cfg.get_f64("alpha", BilliardShape::default_aspect_ratio())?;
    let eps_grid = linspace(
        cfg.get_f64("eps_min", 1.0e3)?,
        cfg.get_f64("eps_max", 1.0e5)?,
        cfg.get_usize("eps_count", 34)?,
    )?;
    let sat = sat_params(cfg)?;
    let c_max = cfg.get_f64("rsa_c_max", 2.0)?;
    let n_rsa = cfg.get_usize("rsa_samples", 200)?;
    let eps_top = eps_grid[eps_grid.len() - 1];
    let e_max = cfg.get_f64(
        "e_max",
        c_max * eps_top + c_max.sqrt() * sat.1 / 2.0 + 3.0e3,
    )?;
    let spec = spectrum_to(alpha, e_max)?;
    let mut rsa_mean = Vec::with_capacity(eps_grid.len());
    for &eps in &eps_grid {
        let plan = RSAPlan::uniform(eps, c_max, n_rsa)?;
        let width = sat_width(eps, sat.0, sat.1, sat.2);
        rsa_mean.push(rsa_average(&spec, StatKind::SatSr, &plan, &[width])?.mean[0]);
    }
    let rsa = curve(&eps_grid, rsa_mean, n_rsa + 1, Method::Rsa, StatKind::SatSr);

    let mean_alpha = cfg.get_f64("mean_alpha", BilliardShape::default_aspect_ratio())?;
    let std_alpha = cfg.get_f64("std_alpha", 0.2)?;
    let members = cfg.get_usize("pa_members", 100)?;
    let seed = cfg.get_u64("seed", 1)?;
    let pa_e_max = cfg.get_f64("pa_e_max", eps_top + sat.1 / 2.0 + 3.0e3)?;
    let plan = PAPlan::draw(mean_alpha, std_alpha, members, seed)?;
    let pa = pa_satsr_curve(&plan, &eps_grid, sat, pa_e_max)?;

    let engine = PoSumEngine::new(alpha, po_config(cfg)?)?;
    let th: Vec<f64> = eps_grid.iter().map(|&e| engine.saturation_sr(e)).collect();
    let th = curve(&eps_grid, th, 1, Method::Theory, StatKind::SatSr);

    check_shared_abscissa(&[&rsa, &pa, &th])?;
    emit_csv(
        out,
        &eps_grid,
        &[
            Column::from_curve(&rsa),
            Column::from_curve(&pa),
            Column::from_curve(&th),
        ],
    )
}

/// Sample, spectrally averaged (two ranges) and parametric saturation
/// rigidity against running energy, with the mode-sum prediction.
fn satsr_sa_pa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "alpha",
        "eps_min",
        "eps_max",
        "eps_count",
        "sa_range_narrow",
        "sa_range_wide",
        "sa_samples",
        "mean_alpha",
        "std_alpha",
        "pa_members",
        "pa_e_max",
        "sat_width_low",
        "sat_width_high",
        "sat_split",
    ]))?;
    let alpha = cfg.get_f64("alpha", BilliardShape::default_aspect_ratio())?;
    let eps_grid = linspace(
        cfg.get_f64("eps_min", 3.0e4)?,
        cfg.get_f64("eps_max", 1.0e5)?,
        cfg.get_usize("eps_count", 29)?,
    )?;
    let sat = sat_params(cfg)?;
    let narrow = cfg.get_f64("sa_range_narrow", 1.0e4)?;
    let wide = cfg.get_f64("sa_range_wide", 5.0e4)?;
    let samples = cfg.get_usize("sa_samples", 500)?;
    let eps_top = eps_grid[eps_grid.len() - 1];
    let e_max = cfg.get_f64("e_max", eps_top + wide / 2.0 + sat.1 / 2.0 + 3.0e3)?;
    let spec = spectrum_to(alpha, e_max)?;

    let mut sample_mean = Vec::with_capacity(eps_grid.len());
    for &eps in &eps_grid {
        let width = sat_width(eps, sat.0, sat.1, sat.2);
        sample_mean.push(evaluate(&spec, StatKind::SatSr, eps, width)?);
    }
    let sample = curve(&eps_grid, sample_mean, 1, Method::Sample, StatKind::SatSr);

    let sa_of = |range: f64| -> Result<StatisticCurve> {
        let mut mean = Vec::with_capacity(eps_grid.len());
        for &eps in &eps_grid {
            let width = sat_width(eps, sat.0, sat.1, sat.2);
            let c = sa_average(
                &spec,
                StatKind::SatSr,
                &SAPlan::new(eps, range, samples)?,
                &[width],
            )?;
            mean.push(c.mean[0]);
        }
        Ok(curve(&eps_grid, mean, samples, Method::Sa, StatKind::SatSr))
    };
    let sa_narrow = sa_of(narrow)?;
    let sa_wide = sa_of(wide)?;

    let mean_alpha = cfg.get_f64("mean_alpha", BilliardShape::default_aspect_ratio())?;
    let std_alpha = cfg.get_f64("std_alpha", 0.2)?;
    let members = cfg.get_usize("pa_members", 100)?;
    let seed = cfg.get_u64("seed", 1)?;
    let pa_e_max = cfg.get_f64("pa_e_max", eps_top + sat.1 / 2.0 + 3.0e3)?;
    let plan = PAPlan::draw(mean_alpha, std_alpha, members, seed)?;
    let pa = pa_satsr_curve(&plan, &eps_grid, sat, pa_e_max)?;

    let engine = PoSumEngine::new(alpha, po_config(cfg)?)?;
    let th: Vec<f64> = eps_grid.iter().map(|&e| engine.saturation_sr(e)).collect();
    let th = curve(&eps_grid, th, 1, Method::Theory, StatKind::SatSr);

    check_shared_abscissa(&[&sample, &sa_narrow, &sa_wide, &pa, &th])?;
    emit_csv(
        out,
        &eps_grid,
        &[
            Column::from_curve(&sample),
            Column::from_curve_suffixed(&sa_narrow, "narrow"),
            Column::from_curve_suffixed(&sa_wide, "wide"),
            Column::from_curve(&pa),
            Column::from_curve(&th),
        ],
    )
}

/// Parametric global variance against running energy with its parametric
/// saturation-rigidity reference; no mode-sum column is defined for the
/// global variance.
fn gv_pa(cfg: &Config, out: &Path) -> Result<()> {
    cfg.check_keys(&keys(&[
        "mean_alpha",
        "std_alpha",
        "pa_members",
        "eps_min",
        "eps_max",
        "eps_count",
        "sat_width_low",
        "sat_width_high",
        "sat_split",
    ]))?;
    let mean_alpha = cfg.get_f64("mean_alpha", 1.0)?;
    let std_alpha = cfg.get_f64("std_alpha", 0.2)?;
    let members = cfg.get_usize("pa_members", 200)?;
    let seed = cfg.get_u64("seed", 1)?;
    let eps_grid = linspace(
        cfg.get_f64("eps_min", 1.0e3)?,
        cfg.get_f64("eps_max", 1.0e5)?,
        cfg.get_usize("eps_count", 397)?,
    )?;
    let sat = sat_params(cfg)?;
    let eps_top = eps_grid[eps_grid.len() - 1];
    let e_max = cfg.get_f64("e_max", eps_top + sat.1 / 2.0 + 3.0e3)?;
    let plan = PAPlan::draw(mean_alpha, std_alpha, members, seed)?;
    let gv = pa_average(
        &plan,
        StatKind::Gv,
        &eps_grid,
        GridMode::RunningEnergy,
        0.0,
        e_max,
    )?;
    let reference = pa_satsr_curve(&plan, &eps_grid, sat, e_max)?;

    check_shared_abscissa(&[&gv, &reference])?;
    emit_csv(
        out,
        &eps_grid,
        &[Column::from_curve(&gv), Column::from_curve(&reference)],
    )
}
