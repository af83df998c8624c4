//! Grid-convergence and uniform-elongation studies.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::scenario::Scenario;
use crate::solver::{check_sweep_lists, continuation_row, solve, IntegrationConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ds: f64,
    pub tip: Vec3,
    /// Distance to the finest-grid tip.
    pub error_vs_finest: f64,
    /// Distance to the Richardson-extrapolated tip from the two finest grids.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// `error[i] / error[i + 1]` for consecutive grids.
    pub ratios: Vec<f64>,
    /// Least-squares slope of `ln(error)` against `ln(ds)`; `None` when the
    /// errors are at round-off level.
    pub order: Option<f64>,
}

/// Error floor below which a grid is considered exact.
const EXACT_FLOOR: f64 = 1e-12;

/// Solves `scenario` on each grid in `grid` (ascending, at least three) and
/// measures tip error decay.
pub fn convergence_study(scenario: &Scenario, grid: &[usize]) -> Result<ConvergenceStudy> {
    if grid.len() < 3 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: grid.len() as f64,
        });
    }
    let length = scenario.material.length;
    let mut tips = Vec::with_capacity(grid.len());
    for &n in grid {
        let mut s = scenario.clone();
        s.integration = IntegrationConfig {
            n,
            ..scenario.integration
        };
        let res = solve(&s)?;
        if !res.converged {
            return Err(Error::SolverFailure {
                iterations: res.iterations,
                residual_norm: res.residual_norm,
                reason: "unconverged grid in convergence study",
            });
        }
        tips.push((n, s.integration.ds(length), res.tip_position));
    }

    let (_, h_f, x_f) = tips[tips.len() - 1];
    let (_, h_c, x_c) = tips[tips.len() - 2];
    let ratio = h_c / h_f;
    // first-order Richardson limit
    let limit = (x_f.scale(ratio) - x_c).scale(1.0 / (ratio - 1.0));

    let rows: Vec<ConvergenceRow> = tips
        .iter()
        .map(|&(n, ds, tip)| ConvergenceRow {
            n,
            ds,
            tip,
            error_vs_finest: (tip - x_f).norm(),
            error: (tip - limit).norm(),
        })
        .collect();
    let ratios = rows.windows(2).map(|w| w[0].error / w[1].error).collect();

    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error > EXACT_FLOOR)
        .map(|r| (libm::log(r.ds), libm::log(r.error)))
        .collect();
    let order = (pts.len() >= 2).then(|| slope(&pts));

    Ok(ConvergenceStudy {
        rows,
        ratios,
        order,
    })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Pressure values of the uniform extension protocol (Pa).
pub const ELONGATION_PRESET: [f64; 5] = [30e3, 60e3, 90e3, 120e3, 150e3];

fn sq(x: f64) -> f64 {
    x * x
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElongationRow {
    pub spine_length: f64,
    pub pressure: f64,
    /// Axial tip coordinate minus rest length (m).
    pub elongation: f64,
    pub tip: Vec3,
    pub converged: bool,
}

/// All nine chambers at equal pressure, for every spine length and pressure,
/// row-major in spine length with continuation in pressure.
pub fn elongation_study(
    base: &Scenario,
    pressures: &[f64],
    spine_lengths: &[f64],
) -> Result<Vec<ElongationRow>> {
    check_sweep_lists(pressures, spine_lengths)?;
    let length = base.material.length;
    let mut rows = Vec::with_capacity(pressures.len() * spine_lengths.len());
    for &l in spine_lengths {
        for cell in continuation_row(base, l, pressures, |s, p| s.with_uniform_pressure(p)) {
            let res = cell.outcome?;
            rows.push(ElongationRow {
                spine_length: l,
                pressure: cell.pressure,
                elongation: res.tip_position.z() - length,
                tip: res.tip_position,
                converged: res.converged,
            });
        }
    }
    Ok(rows)
}

/// Coefficient of determination of the least-squares line through `pts`.
pub fn linear_fit_r2(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let b = slope(pts);
    let ss_res: f64 = pts.iter().map(|p| sq(p.1 - (my + b * (p.0 - mx)))).sum();
    let ss_tot: f64 = pts.iter().map(|p| sq(p.1 - my)).sum();
    if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    }
}
