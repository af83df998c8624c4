//! A complete solve specification.

use crate::actuation::{default_layout, ChamberLayout, ExternalLoad, PressureCommand, GROUP_COUNT};
use crate::error::{positive, Error, Result};
use crate::math::Vec3;
use crate::rod::{LoadModel, MaterialParams, GRAVITY};
use crate::solver::IntegrationConfig;
use crate::spine::{AEffectSchedule, SpineConfig, StiffnessProfile};

/// Chamber pressures, either per chamber or as a group shorthand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PressureSpec {
    /// `pressure` on the three chambers of one-based `group`.
    Group {
        group: usize,
        pressure: f64,
    },
    Chambers(PressureCommand),
}

impl Default for PressureSpec {
    fn default() -> Self {
        PressureSpec::Group {
            group: 1,
            pressure: 0.0,
        }
    }
}

impl PressureSpec {
    pub fn command(&self, layout: &ChamberLayout) -> Result<PressureCommand> {
        match *self {
            PressureSpec::Group { group, pressure } => {
                if !(1..=GROUP_COUNT).contains(&group) {
                    return Err(Error::InvalidParameter {
                        name: "group",
                        value: group as f64,
                    });
                }
                PressureCommand::group(layout, group - 1, pressure)
            }
            PressureSpec::Chambers(cmd) => {
                cmd.validate()?;
                Ok(cmd)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GravityConfig {
    pub enabled: bool,
    /// Base-frame direction; the default hangs the rod tip-down along +z.
    pub direction: Vec3,
    /// Adds the spine's own weight over its occupied length.
    pub include_spine_weight: bool,
    /// Bulk density of the jammed spine (kg/m³).
    pub spine_density: f64,
}

impl Default for GravityConfig {
    fn default() -> Self {
        GravityConfig {
            enabled: true,
            direction: Vec3::E3,
            include_spine_weight: false,
            spine_density: 125.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Relative forward-difference step for the Jacobian.
    pub fd_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-8,
            max_iter: 50,
            fd_step: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        positive("solver.tol", self.tol)?;
        positive("solver.fd_step", self.fd_step)?;
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter {
                name: "solver.max_iter",
                value: 0.0,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub material: MaterialParams,
    pub layout: ChamberLayout,
    pub spine: SpineConfig,
    pub a_effect: AEffectSchedule,
    /// Absolute effective chamber area (m²), bypassing the schedule.
    pub a_effect_override: Option<f64>,
    pub pressure: PressureSpec,
    pub external: ExternalLoad,
    pub gravity: GravityConfig,
    pub integration: IntegrationConfig,
    pub solver: SolverConfig,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario::with_material(MaterialParams::default())
    }
}

impl Scenario {
    /// Defaults for everything except the material.
    pub fn with_material(material: MaterialParams) -> Self {
        Scenario {
            layout: default_layout(&material),
            material,
            spine: SpineConfig::default(),
            a_effect: AEffectSchedule::default(),
            a_effect_override: None,
            pressure: PressureSpec::default(),
            external: ExternalLoad::default(),
            gravity: GravityConfig::default(),
            integration: IntegrationConfig::default(),
            solver: SolverConfig::default(),
        }
    }

    /// No pressure, no payload, no gravity.
    pub fn unloaded() -> Self {
        Scenario {
            external: ExternalLoad::none(),
            gravity: GravityConfig {
                enabled: false,
                ..GravityConfig::default()
            },
            ..Scenario::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.material.validate()?;
        self.spine.validate()?;
        self.a_effect.validate()?;
        if let Some(a) = self.a_effect_override {
            positive("a_effect.area", a)?;
        }
        self.command()?;
        if !(self.external.force.is_finite() && self.external.moment.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "external",
                value: f64::NAN,
            });
        }
        if self.gravity.direction.normalized().is_none() {
            return Err(Error::InvalidParameter {
                name: "gravity.direction",
                value: 0.0,
            });
        }
        if self.gravity.include_spine_weight {
            positive("spine.density", self.gravity.spine_density)?;
        }
        self.integration.validate()?;
        self.solver.validate()?;
        StiffnessProfile::new(&self.spine, &self.material)?;
        Ok(())
    }

    pub fn command(&self) -> Result<PressureCommand> {
        self.pressure.command(&self.layout)
    }

    pub fn profile(&self) -> Result<StiffnessProfile> {
        StiffnessProfile::new(&self.spine, &self.material)
    }

    pub fn effective_area(&self) -> Result<f64> {
        match self.a_effect_override {
            Some(a) => positive("a_effect.area", a),
            None => Ok(self.a_effect.coefficient(self.spine.length)? * self.layout.a_norm),
        }
    }

    pub fn load_model(&self) -> Result<LoadModel> {
        if !self.gravity.enabled {
            return Ok(LoadModel::unloaded());
        }
        let load = LoadModel::gravity(&self.material, self.gravity.direction)?;
        if self.gravity.include_spine_weight && self.spine.length > 0.0 {
            let area = core::f64::consts::PI * self.spine.radius * self.spine.radius;
            let weight = self.gravity.spine_density * area * GRAVITY;
            return Ok(load.with_spine_weight(weight, self.spine.length));
        }
        Ok(load)
    }

    pub fn with_spine_length(&self, length: f64) -> Self {
        let mut s = self.clone();
        s.spine.length = length;
        s
    }

    /// Keeps the configured group (group 1 if chambers were given explicitly).
    pub fn with_group_pressure(&self, pressure: f64) -> Self {
        let group = match self.pressure {
            PressureSpec::Group { group, .. } => group,
            PressureSpec::Chambers(_) => 1,
        };
        let mut s = self.clone();
        s.pressure = PressureSpec::Group { group, pressure };
        s
    }

    pub fn with_uniform_pressure(&self, pressure: f64) -> Self {
        let mut s = self.clone();
        s.pressure = PressureSpec::Chambers(PressureCommand {
            pressures: [pressure; crate::CHAMBER_COUNT],
        });
        s
    }

    /// Representative scalar group pressure: the maximum chamber pressure.
    pub fn nominal_pressure(&self) -> f64 {
        match self.pressure {
            PressureSpec::Group { pressure, .. } => pressure,
            PressureSpec::Chambers(cmd) => cmd.pressures.iter().fold(0.0, |a, &b| a.max(b)),
        }
    }
}
