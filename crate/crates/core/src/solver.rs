//! Explicit Euler march along the rod and the shooting solve for the base
//! internal loads.

use alloc::vec::Vec;

use crate::actuation::{
    pneumatic_load, tip_boundary, ChamberLayout, ExternalLoad, PressureCommand,
};
use crate::error::{Error, Result};
use crate::math::{abs, solve6, sqrt, Mat3, Vec3};
use crate::rod::{ode_rhs, LoadModel, RodState};
use crate::scenario::Scenario;
use crate::spine::{StiffnessProfile, MAX_SPINE_LENGTH};

/// Line-search halvings allowed per Newton step.
const MAX_HALVINGS: usize = 8;
/// Diagonal added to a singular Jacobian before giving up.
const JACOBIAN_REGULARIZATION: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationConfig {
    /// Grid points including both ends.
    pub n: usize,
    pub reorthonormalize_every: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig {
            n: 100,
            reorthonormalize_every: 1,
        }
    }
}

impl IntegrationConfig {
    pub fn with_n(n: usize) -> Self {
        IntegrationConfig {
            n,
            ..IntegrationConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::InvalidParameter {
                name: "integration.n",
                value: self.n as f64,
            });
        }
        if self.reorthonormalize_every == 0 {
            return Err(Error::InvalidParameter {
                name: "integration.reorthonormalize_every",
                value: 0.0,
            });
        }
        Ok(())
    }

    pub fn ds(&self, length: f64) -> f64 {
        length / (self.n - 1) as f64
    }
}

/// Unknown base loads `[n(0), m(0)]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ShootGuess {
    pub n0: Vec3,
    pub m0: Vec3,
}

impl ShootGuess {
    pub fn zero() -> Self {
        ShootGuess::default()
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.n0[0], self.n0[1], self.n0[2], self.m0[0], self.m0[1], self.m0[2],
        ]
    }

    pub fn from_array(x: &[f64; 6]) -> Self {
        ShootGuess {
            n0: Vec3::new(x[0], x[1], x[2]),
            m0: Vec3::new(x[3], x[4], x[5]),
        }
    }
}

/// Free-end mismatch: integrated loads minus the boundary targets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual {
    pub ef: Vec3,
    pub em: Vec3,
}

impl Residual {
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.ef[0], self.ef[1], self.ef[2], self.em[0], self.em[1], self.em[2],
        ]
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.ef.dot(&self.ef) + self.em.dot(&self.em))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub centerline: Vec<RodState>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub tip_position: Vec3,
    /// Final base loads; reusable as a warm start.
    pub guess: ShootGuess,
    /// Residual evaluations spent, including Jacobian columns.
    pub evaluations: usize,
    /// Why the iteration stopped short, when it did.
    pub note: Option<&'static str>,
}

impl SolveResult {
    /// Polyline length of the centerline.
    pub fn arc_length(&self) -> f64 {
        self.centerline
            .windows(2)
            .map(|w| (w[1].p - w[0].p).norm())
            .sum()
    }
}

/// Scenario data resolved once per solve.
struct Problem {
    profile: StiffnessProfile,
    load: LoadModel,
    cmd: PressureCommand,
    layout: ChamberLayout,
    a_effect: f64,
    external: ExternalLoad,
    cfg: IntegrationConfig,
}

impl Problem {
    fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        Ok(Problem {
            profile: scenario.profile()?,
            load: scenario.load_model()?,
            cmd: scenario.command()?,
            layout: scenario.layout,
            a_effect: scenario.effective_area()?,
            external: scenario.external,
            cfg: scenario.integration,
        })
    }

    /// Base loads that balance the straight, undeformed rod.
    fn straight_guess(&self) -> Result<ShootGuess> {
        let len = self.profile.mat.length;
        let (n_p, m_p) = pneumatic_load(&self.cmd, &self.layout, self.a_effect, &Mat3::IDENTITY)?;
        let (n_l, m_l) = tip_boundary(n_p, m_p, &self.external);
        let split = self.load.spine_extent.clamp(0.0, len);
        let mut n0 = n_l;
        let mut first = Vec3::ZERO;
        for (a, b) in [(0.0, split), (split, len)] {
            let f = self.load.force_at(a);
            n0 += f.scale(b - a);
            first += f.scale(0.5 * (b * b - a * a));
        }
        let tip = Vec3::E3.scale(len);
        let m0 = m_l + tip.cross(&n_l) + Vec3::E3.cross(&first) + self.load.l.scale(len);
        Ok(ShootGuess { n0, m0 })
    }

    fn residual_at(&self, guess: &ShootGuess) -> Result<Residual> {
        let tip = march(guess, &self.profile, &self.load, &self.cfg, |_| ())?;
        self.residual_from_tip(&tip)
    }

    fn residual_from_tip(&self, tip: &RodState) -> Result<Residual> {
        let (n_p, m_p) = pneumatic_load(&self.cmd, &self.layout, self.a_effect, &tip.r)?;
        let (n_l, m_l) = tip_boundary(n_p, m_p, &self.external);
        Ok(Residual {
            ef: tip.n - n_l,
            em: tip.m - m_l,
        })
    }
}

/// Forward Euler over the grid; `visit` sees every state including the base.
fn march(
    guess: &ShootGuess,
    profile: &StiffnessProfile,
    load: &LoadModel,
    cfg: &IntegrationConfig,
    mut visit: impl FnMut(&RodState),
) -> Result<RodState> {
    cfg.validate()?;
    let length = profile.mat.length;
    let ds = cfg.ds(length);
    let last = cfg.n - 1;
    let mut state = RodState::base(guess.n0, guess.m0);
    if !state.is_finite() {
        return Err(Error::Divergence { index: 0 });
    }
    visit(&state);
    for i in 0..last {
        let sec = profile.section_unchecked(state.s);
        let d = ode_rhs(&state, &sec, load)?;
        let next = i + 1;
        let mut r = state.r + d.dr.scale(ds);
        if next % cfg.reorthonormalize_every == 0 || next == last {
            r = r
                .reorthonormalized()
                .ok_or(Error::Divergence { index: next })?;
        }
        state = RodState {
            s: if next == last {
                length
            } else {
                ds * next as f64
            },
            p: state.p + d.dp.scale(ds),
            r,
            n: state.n + d.dn.scale(ds),
            m: state.m + d.dm.scale(ds),
        };
        if !state.is_finite() {
            return Err(Error::Divergence { index: next });
        }
        visit(&state);
    }
    Ok(state)
}

/// Integrates from the clamped base with the given base loads and returns
/// all `n` grid states.
pub fn integrate_rod(
    guess: &ShootGuess,
    profile: &StiffnessProfile,
    load: &LoadModel,
    cfg: &IntegrationConfig,
) -> Result<Vec<RodState>> {
    let mut states = Vec::with_capacity(cfg.n);
    march(guess, profile, load, cfg, |s| states.push(*s))?;
    Ok(states)
}

/// Free-end residual of `guess` for `scenario`; the pneumatic target follows
/// the integrated tip frame.
pub fn residual(guess: &ShootGuess, scenario: &Scenario) -> Result<Residual> {
    Problem::new(scenario)?.residual_at(guess)
}

/// Base loads in equilibrium with the tip and distributed loads on the
/// straight reference configuration. This is the cold-start guess.
pub fn straight_guess(scenario: &Scenario) -> Result<ShootGuess> {
    Problem::new(scenario)?.straight_guess()
}

/// Solves with the scenario's own tolerance and iteration limit from
/// [`straight_guess`]. A zero guess can converge onto a folded branch under
/// large bending loads.
pub fn solve(scenario: &Scenario) -> Result<SolveResult> {
    shoot(
        scenario,
        &straight_guess(scenario)?,
        scenario.solver.tol,
        scenario.solver.max_iter,
    )
}

/// Damped Newton shooting on the six base loads with a forward-difference
/// Jacobian and step-halving line search. An iterate that fails to converge
/// within `max_iter` (or whose line search stalls) is returned with
/// `converged == false`.
pub fn shoot(
    scenario: &Scenario,
    init: &ShootGuess,
    tol: f64,
    max_iter: usize,
) -> Result<SolveResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
        });
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter {
            name: "max_iter",
            value: 0.0,
        });
    }
    let problem = Problem::new(scenario)?;
    let fd_step = scenario.solver.fd_step;

    let mut x = init.to_array();
    let mut r = problem.residual_at(init)?.to_array();
    let mut norm = norm6(&r);
    let mut evaluations = 1;
    let mut iterations = 0;
    let mut note = None;

    while norm >= tol {
        if iterations >= max_iter {
            note = Some("iteration limit reached");
            break;
        }

        let mut jac = [[0.0; 6]; 6];
        for j in 0..6 {
            let h = fd_step * abs(x[j]).max(1.0);
            let mut xp = x;
            xp[j] += h;
            let rp = problem
                .residual_at(&ShootGuess::from_array(&xp))?
                .to_array();
            evaluations += 1;
            for i in 0..6 {
                jac[i][j] = (rp[i] - r[i]) / h;
            }
        }

        let rhs = r.map(|v| -v);
        let step = match solve6(jac, rhs, 1e-14) {
            Some(dx) => dx,
            None => {
                let scale = jac.iter().flatten().fold(1.0_f64, |m, v| m.max(abs(*v)));
                let mut reg = jac;
                for (i, row) in reg.iter_mut().enumerate() {
                    row[i] += JACOBIAN_REGULARIZATION * scale;
                }
                solve6(reg, rhs, 1e-14).ok_or(Error::SolverFailure {
                    iterations,
                    residual_norm: norm,
                    reason: "singular Jacobian",
                })?
            }
        };

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = x;
            for k in 0..6 {
                trial[k] += alpha * step[k];
            }
            evaluations += 1;
            if let Ok(rt) = problem.residual_at(&ShootGuess::from_array(&trial)) {
                let rt = rt.to_array();
                let nt = norm6(&rt);
                if nt < norm {
                    accepted = Some((trial, rt, nt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((xt, rt, nt)) = accepted else {
            note = Some("line search stalled");
            break;
        };
        x = xt;
        r = rt;
        norm = nt;
        iterations += 1;
    }

    let guess = ShootGuess::from_array(&x);
    let centerline = integrate_rod(&guess, &problem.profile, &problem.load, &problem.cfg)?;
    let tip_position = centerline.last().map_or(Vec3::ZERO, |s| s.p);
    Ok(SolveResult {
        centerline,
        residual_norm: norm,
        iterations,
        converged: norm < tol,
        tip_position,
        guess,
        evaluations,
        note,
    })
}

fn norm6(r: &[f64; 6]) -> f64 {
    sqrt(r.iter().map(|v| v * v).sum())
}

/// One cell of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub spine_length: f64,
    pub pressure: f64,
    pub outcome: Result<SolveResult>,
}

impl SweepCell {
    pub fn converged(&self) -> bool {
        matches!(&self.outcome, Ok(r) if r.converged)
    }
}

/// Validates a sweep grid.
pub fn check_sweep_lists(pressures: &[f64], spine_lengths: &[f64]) -> Result<()> {
    if pressures.is_empty() || spine_lengths.is_empty() {
        return Err(Error::InvalidParameter {
            name: "sweep list",
            value: 0.0,
        });
    }
    for &p in pressures {
        if !(0.0..=crate::MAX_PRESSURE).contains(&p) {
            return Err(Error::InvalidCommand {
                chamber: 0,
                pressure: p,
            });
        }
    }
    for &l in spine_lengths {
        if !(0.0..=MAX_SPINE_LENGTH).contains(&l) {
            return Err(Error::OutOfEnvelope {
                length: l,
                max: MAX_SPINE_LENGTH,
            });
        }
    }
    Ok(())
}

/// Solves one spine length across `pressures`, warm-starting each pressure
/// from the previous converged solution. `configure` maps the base scenario
/// to the cell scenario.
pub fn continuation_row(
    base: &Scenario,
    spine_length: f64,
    pressures: &[f64],
    configure: impl Fn(&Scenario, f64) -> Scenario,
) -> Vec<SweepCell> {
    let row_base = base.with_spine_length(spine_length);
    let mut warm: Option<ShootGuess> = None;
    pressures
        .iter()
        .map(|&pressure| {
            let cell = configure(&row_base, pressure);
            let outcome = match warm {
                Some(g) => Ok(g),
                None => straight_guess(&cell),
            }
            .and_then(|g| shoot(&cell, &g, cell.solver.tol, cell.solver.max_iter));
            if let Ok(res) = &outcome {
                if res.converged {
                    warm = Some(res.guess);
                }
            }
            SweepCell {
                spine_length,
                pressure,
                outcome,
            }
        })
        .collect()
}

/// Group-pressure sweep over a (spine length × pressure) grid, row-major in
/// spine length. Failed cells are reported in place.
pub fn pressure_sweep(
    base: &Scenario,
    pressures: &[f64],
    spine_lengths: &[f64],
) -> Result<Vec<SweepCell>> {
    check_sweep_lists(pressures, spine_lengths)?;
    Ok(spine_lengths
        .iter()
        .flat_map(|&l| continuation_row(base, l, pressures, |s, p| s.with_group_pressure(p)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_rod_is_exact() {
        let s = Scenario::unloaded();
        let profile = s.profile().unwrap();
        let states = integrate_rod(
            &ShootGuess::zero(),
            &profile,
            &LoadModel::unloaded(),
            &s.integration,
        )
        .unwrap();
        assert_eq!(states.len(), 100);
        let tip = states.last().unwrap();
        assert_eq!(tip.s, 0.4);
        assert!((tip.p - Vec3::new(0.0, 0.0, 0.4)).norm() < 1e-12);
        assert_eq!(tip.r, Mat3::IDENTITY);
    }

    #[test]
    fn unloaded_residual_is_zero() {
        let r = residual(&ShootGuess::zero(), &Scenario::unloaded()).unwrap();
        assert_eq!(r.norm(), 0.0);
    }

    #[test]
    fn zero_load_converges_immediately() {
        let res = solve(&Scenario::unloaded()).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations, 0);
        assert!((res.tip_position - Vec3::new(0.0, 0.0, 0.4)).norm() < 1e-12);
    }

    #[test]
    fn diverging_guess_reports_index() {
        let guess = ShootGuess {
            n0: Vec3::new(f64::NAN, 0.0, 0.0),
            m0: Vec3::ZERO,
        };
        let s = Scenario::unloaded();
        let err = integrate_rod(
            &guess,
            &s.profile().unwrap(),
            &LoadModel::unloaded(),
            &s.integration,
        );
        assert_eq!(err, Err(Error::Divergence { index: 0 }));
    }

    #[test]
    fn grid_too_coarse_rejected() {
        let mut s = Scenario::unloaded();
        s.integration.n = 5;
        assert!(solve(&s).is_err());
    }

    #[test]
    fn invalid_solver_arguments() {
        let s = Scenario::unloaded();
        assert!(shoot(&s, &ShootGuess::zero(), 0.0, 10).is_err());
        assert!(shoot(&s, &ShootGuess::zero(), 1e-8, 0).is_err());
    }

    #[test]
    fn iteration_limit_flags_unconverged() {
        let s = Scenario::default().with_group_pressure(250e3);
        let res = shoot(&s, &ShootGuess::zero(), 1e-8, 1).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.note, Some("iteration limit reached"));
    }

    #[test]
    fn sweep_rejects_bad_lists() {
        let s = Scenario::default();
        assert!(pressure_sweep(&s, &[], &[0.0]).is_err());
        assert!(pressure_sweep(&s, &[1e5], &[0.4]).is_err());
    }
}
