//! CSV tables and run summaries.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use spinerod_core::study::{ConvergenceStudy, ElongationRow};
use spinerod_core::{Error as CoreError, RodState, Scenario, SolveResult, SweepCell};

pub const CENTERLINE_HEADER: &str = "s,px,py,pz,nx,ny,nz,mx,my,mz";
pub const SWEEP_HEADER: &str = "spine_length,pressure,tip_x,tip_y,tip_z,converged";
pub const CONVERGENCE_HEADER: &str = "n,ds,tip_x,tip_y,tip_z,error_vs_finest,error,ratio";
pub const ELONGATION_HEADER: &str = "spine_length,pressure,elongation,tip_x,tip_y,tip_z,converged";

/// One row per grid point, SI units.
pub fn write_centerline<W: Write>(mut w: W, states: &[RodState]) -> io::Result<()> {
    writeln!(w, "{CENTERLINE_HEADER}")?;
    for st in states {
        writeln!(
            w,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            st.s, st.p[0], st.p[1], st.p[2], st.n[0], st.n[1], st.n[2], st.m[0], st.m[1], st.m[2]
        )?;
    }
    Ok(())
}

/// Summary of one solve, mirroring its [`SolveResult`].
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRecord {
    pub spine_length: f64,
    pub pressure: f64,
    pub n: usize,
    pub tip_position: [f64; 3],
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub centerline: Option<PathBuf>,
    pub error: Option<String>,
}

impl ResultRecord {
    pub fn from_result(
        scenario: &Scenario,
        res: &SolveResult,
        centerline: Option<PathBuf>,
    ) -> Self {
        ResultRecord {
            spine_length: scenario.spine.length,
            pressure: scenario.nominal_pressure(),
            n: scenario.integration.n,
            tip_position: res.tip_position.0,
            residual_norm: res.residual_norm,
            iterations: res.iterations,
            converged: res.converged,
            centerline,
            error: res.note.map(str::to_string),
        }
    }

    pub fn from_error(scenario: &Scenario, err: &CoreError) -> Self {
        ResultRecord {
            spine_length: scenario.spine.length,
            pressure: scenario.nominal_pressure(),
            n: scenario.integration.n,
            tip_position: [f64::NAN; 3],
            residual_norm: f64::NAN,
            iterations: 0,
            converged: false,
            centerline: None,
            error: Some(err.to_string()),
        }
    }

    /// Structured `key = value` text.
    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "spine_length = {:?}", self.spine_length)?;
        writeln!(w, "pressure = {:?}", self.pressure)?;
        writeln!(w, "grid_n = {}", self.n)?;
        let [x, y, z] = self.tip_position;
        writeln!(w, "tip_position = [{x:?}, {y:?}, {z:?}]")?;
        writeln!(w, "residual_norm = {:e}", self.residual_norm)?;
        writeln!(w, "iterations = {}", self.iterations)?;
        writeln!(w, "converged = {}", self.converged)?;
        if let Some(p) = &self.centerline {
            writeln!(w, "centerline = {}", p.display())?;
        }
        if let Some(e) = &self.error {
            writeln!(w, "note = {e}")?;
        }
        Ok(())
    }
}

pub fn write_sweep_table<W: Write>(mut w: W, cells: &[SweepCell]) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for c in cells {
        let (tip, ok) = match &c.outcome {
            Ok(r) => (r.tip_position.0, r.converged),
            Err(_) => ([f64::NAN; 3], false),
        };
        writeln!(
            w,
            "{:?},{:?},{:e},{:e},{:e},{}",
            c.spine_length, c.pressure, tip[0], tip[1], tip[2], ok
        )?;
    }
    Ok(())
}

pub fn write_convergence_table<W: Write>(mut w: W, study: &ConvergenceStudy) -> io::Result<()> {
    writeln!(w, "{CONVERGENCE_HEADER}")?;
    for (i, r) in study.rows.iter().enumerate() {
        let ratio = study
            .ratios
            .get(i)
            .map_or(String::new(), |q| format!("{q:e}"));
        writeln!(
            w,
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{}",
            r.n, r.ds, r.tip[0], r.tip[1], r.tip[2], r.error_vs_finest, r.error, ratio
        )?;
    }
    Ok(())
}

pub fn write_elongation_table<W: Write>(mut w: W, rows: &[ElongationRow]) -> io::Result<()> {
    writeln!(w, "{ELONGATION_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{:?},{:?},{:e},{:e},{:e},{:e},{}",
            r.spine_length, r.pressure, r.elongation, r.tip[0], r.tip[1], r.tip[2], r.converged
        )?;
    }
    Ok(())
}

/// File stem for a sweep cell, e.g. `base_s0.150_p100000`.
pub fn cell_stem(stem: &str, spine_length: f64, pressure: f64) -> String {
    format!("{stem}_s{spine_length:.3}_p{pressure:.0}")
}

pub fn create(dir: &Path, name: &str) -> io::Result<(PathBuf, io::BufWriter<std::fs::File>)> {
    let path = dir.join(name);
    let file = std::fs::File::create(&path)?;
    Ok((path, io::BufWriter::new(file)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use spinerod_core::solve;

    #[test]
    fn centerline_rows_match_grid() {
        let mut s = Scenario::unloaded();
        s.integration.n = 25;
        let res = solve(&s).unwrap();
        let mut buf = Vec::new();
        write_centerline(&mut buf, &res.centerline).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CENTERLINE_HEADER));
        let rows: Vec<Vec<f64>> = lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 25);
        for r in rows {
            assert_eq!(r.len(), 10);
            assert_eq!((r[1], r[2]), (0.0, 0.0));
            assert!((r[3] - r[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn summary_is_key_value() {
        let s = Scenario::unloaded();
        let res = solve(&s).unwrap();
        let rec = ResultRecord::from_result(&s, &res, Some(PathBuf::from("x.csv")));
        let mut buf = Vec::new();
        rec.write(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("converged = true"));
        assert!(text.contains("centerline = x.csv"));
        assert!(text.lines().all(|l| l.contains(" = ")));
    }
}
