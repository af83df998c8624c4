//! The CLI commands, callable as library functions. Each returns `Ok(true)`
//! iff every requested solve converged.

use std::io::Write;
use std::path::Path;
use std::thread;

use anyhow::{bail, Context, Result};
use spinerod_core::solver::{check_sweep_lists, continuation_row};
use spinerod_core::study::{convergence_study, elongation_study};
use spinerod_core::{solve, Scenario, SweepCell};

use crate::format::parse_scenario;
use crate::output::{
    cell_stem, create, write_centerline, write_convergence_table, write_elongation_table,
    write_sweep_table, ResultRecord,
};

/// Command-line overrides applied on top of a scenario file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub no_gravity: bool,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub grid_n: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) {
        if self.no_gravity {
            s.gravity.enabled = false;
        }
        if let Some(t) = self.tol {
            s.solver.tol = t;
        }
        if let Some(m) = self.max_iter {
            s.solver.max_iter = m;
        }
        if let Some(n) = self.grid_n {
            s.integration.n = n;
        }
    }
}

pub fn load_scenario(path: &Path, ov: &Overrides) -> Result<Scenario> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut s = parse_scenario(&text).with_context(|| format!("parsing {}", path.display()))?;
    ov.apply(&mut s);
    s.validate().context("invalid override")?;
    Ok(s)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// Writes `<stem>.centerline.csv` and `<stem>.summary.txt`.
pub fn solve_file(path: &Path, out_dir: &Path, ov: &Overrides) -> Result<ResultRecord> {
    let scenario = load_scenario(path, ov)?;
    ensure_dir(out_dir)?;
    let stem = stem(path);
    let record = match solve(&scenario) {
        Ok(res) => {
            let (csv_path, mut w) = create(out_dir, &format!("{stem}.centerline.csv"))?;
            write_centerline(&mut w, &res.centerline)?;
            w.flush()?;
            ResultRecord::from_result(&scenario, &res, Some(csv_path))
        }
        Err(e) => ResultRecord::from_error(&scenario, &e),
    };
    let (_, mut w) = create(out_dir, &format!("{stem}.summary.txt"))?;
    record.write(&mut w)?;
    w.flush()?;
    Ok(record)
}

pub fn cmd_solve(path: &Path, out_dir: &Path, ov: &Overrides) -> Result<bool> {
    let record = solve_file(path, out_dir, ov)?;
    record.write(std::io::stdout().lock())?;
    if let Some(e) = record.error.as_deref().filter(|_| !record.converged) {
        eprintln!("solve did not converge: {e}");
    }
    Ok(record.converged)
}

/// Group-pressure sweep with one worker thread per spine length. Results
/// are identical to [`spinerod_core::pressure_sweep`].
pub fn parallel_sweep(
    base: &Scenario,
    pressures: &[f64],
    spines: &[f64],
) -> spinerod_core::Result<Vec<SweepCell>> {
    check_sweep_lists(pressures, spines)?;
    let rows: Vec<Vec<SweepCell>> = thread::scope(|scope| {
        let handles: Vec<_> = spines
            .iter()
            .map(|&l| {
                scope.spawn(move || {
                    continuation_row(base, l, pressures, |s, p| s.with_group_pressure(p))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

pub fn cmd_sweep(
    path: &Path,
    pressures: &[f64],
    spines: &[f64],
    out_dir: &Path,
    ov: &Overrides,
) -> Result<bool> {
    let base = load_scenario(path, ov)?;
    ensure_dir(out_dir)?;
    let stem = stem(path);
    let cells = parallel_sweep(&base, pressures, spines)?;

    for cell in &cells {
        let scenario = base
            .with_spine_length(cell.spine_length)
            .with_group_pressure(cell.pressure);
        let cstem = cell_stem(&stem, cell.spine_length, cell.pressure);
        let record = match &cell.outcome {
            Ok(res) => {
                let (csv_path, mut w) = create(out_dir, &format!("{cstem}.centerline.csv"))?;
                write_centerline(&mut w, &res.centerline)?;
                w.flush()?;
                ResultRecord::from_result(&scenario, res, Some(csv_path))
            }
            Err(e) => ResultRecord::from_error(&scenario, e),
        };
        let (_, mut w) = create(out_dir, &format!("{cstem}.summary.txt"))?;
        record.write(&mut w)?;
        w.flush()?;
    }

    let (table, mut w) = create(out_dir, &format!("{stem}.sweep.csv"))?;
    write_sweep_table(&mut w, &cells)?;
    w.flush()?;
    write_sweep_table(std::io::stdout().lock(), &cells)?;
    let failed = cells.iter().filter(|c| !c.converged()).count();
    eprintln!(
        "{} cells, {} unconverged; table at {}",
        cells.len(),
        failed,
        table.display()
    );
    Ok(failed == 0)
}

pub fn cmd_converge(path: &Path, grid: &[usize], out_dir: &Path, ov: &Overrides) -> Result<bool> {
    let scenario = load_scenario(path, ov)?;
    ensure_dir(out_dir)?;
    let study = match convergence_study(&scenario, grid) {
        Ok(s) => s,
        Err(e) => bail!("convergence study aborted: {e}"),
    };
    let (table, mut w) = create(out_dir, &format!("{}.convergence.csv", stem(path)))?;
    write_convergence_table(&mut w, &study)?;
    w.flush()?;
    write_convergence_table(std::io::stdout().lock(), &study)?;
    match study.order {
        Some(p) => println!("estimated order = {p:.4}"),
        None => println!("estimated order = n/a (errors at round-off level)"),
    }
    eprintln!("table at {}", table.display());
    Ok(true)
}

pub fn cmd_elongate(
    path: &Path,
    pressures: &[f64],
    spines: &[f64],
    out_dir: &Path,
    ov: &Overrides,
) -> Result<bool> {
    let base = load_scenario(path, ov)?;
    ensure_dir(out_dir)?;
    let rows = elongation_study(&base, pressures, spines)?;
    let (table, mut w) = create(out_dir, &format!("{}.elongation.csv", stem(path)))?;
    write_elongation_table(&mut w, &rows)?;
    w.flush()?;
    write_elongation_table(std::io::stdout().lock(), &rows)?;
    eprintln!("table at {}", table.display());
    Ok(rows.iter().all(|r| r.converged))
}
