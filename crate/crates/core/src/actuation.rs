//! Pneumatic chamber layout, chamber loads and the free-end boundary condition.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math::{hat, Mat3, Vec3};
use crate::rod::{MaterialParams, GRAVITY};

pub const CHAMBER_COUNT: usize = 9;
pub const GROUP_COUNT: usize = 3;
/// Safety ceiling on any chamber pressure (Pa).
pub const MAX_PRESSURE: f64 = 400e3;
/// Default tip payload mass (kg).
pub const DEFAULT_TIP_MASS: f64 = 0.053;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChamberLayout {
    /// Chamber centers in the local cross-section frame.
    pub positions: [Vec3; CHAMBER_COUNT],
    /// Geometric bore area `π r_c²`.
    pub a_norm: f64,
    /// Zero-based actuation group of each chamber.
    pub group_of: [usize; CHAMBER_COUNT],
}

impl ChamberLayout {
    pub fn count(&self) -> usize {
        CHAMBER_COUNT
    }

    /// Chambers (zero-based indices) belonging to zero-based `group`.
    pub fn group_members(&self, group: usize) -> impl Iterator<Item = usize> + '_ {
        (0..CHAMBER_COUNT).filter(move |&i| self.group_of[i] == group)
    }

    /// Unit direction of a group's centroid in the cross-section plane.
    pub fn group_centroid_dir(&self, group: usize) -> Option<Vec3> {
        self.group_members(group)
            .fold(Vec3::ZERO, |acc, i| acc + self.positions[i])
            .normalized()
    }
}

/// Nine chambers at 40° spacing on the path radius, grouped into contiguous
/// triplets {0,1,2}, {3,4,5}, {6,7,8}.
pub fn default_layout(mat: &MaterialParams) -> ChamberLayout {
    let step = 2.0 * PI / CHAMBER_COUNT as f64;
    let mut positions = [Vec3::ZERO; CHAMBER_COUNT];
    let mut group_of = [0; CHAMBER_COUNT];
    for i in 0..CHAMBER_COUNT {
        let theta = step * i as f64;
        positions[i] = Vec3::new(
            mat.r_path * libm::cos(theta),
            mat.r_path * libm::sin(theta),
            0.0,
        );
        group_of[i] = i / GROUP_COUNT;
    }
    ChamberLayout {
        positions,
        a_norm: PI * mat.r_chamber * mat.r_chamber,
        group_of,
    }
}

/// Per-chamber gauge pressures (Pa).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PressureCommand {
    pub pressures: [f64; CHAMBER_COUNT],
}

impl PressureCommand {
    pub fn new(pressures: [f64; CHAMBER_COUNT]) -> Result<Self> {
        let cmd = PressureCommand { pressures };
        cmd.validate()?;
        Ok(cmd)
    }

    pub fn zero() -> Self {
        PressureCommand::default()
    }

    pub fn uniform(pressure: f64) -> Result<Self> {
        PressureCommand::new([pressure; CHAMBER_COUNT])
    }

    /// `pressure` on the three chambers of zero-based `group`, zero elsewhere.
    pub fn group(layout: &ChamberLayout, group: usize, pressure: f64) -> Result<Self> {
        if group >= GROUP_COUNT {
            return Err(Error::InvalidParameter {
                name: "group",
                value: (group + 1) as f64,
            });
        }
        let mut pressures = [0.0; CHAMBER_COUNT];
        for i in layout.group_members(group) {
            pressures[i] = pressure;
        }
        PressureCommand::new(pressures)
    }

    pub fn validate(&self) -> Result<()> {
        for (chamber, &pressure) in self.pressures.iter().enumerate() {
            if !(0.0..=MAX_PRESSURE).contains(&pressure) {
                return Err(Error::InvalidCommand { chamber, pressure });
            }
        }
        Ok(())
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        let mut pressures = self.pressures;
        pressures.iter_mut().for_each(|p| *p *= k);
        PressureCommand::new(pressures)
    }

    pub fn total(&self) -> f64 {
        self.pressures.iter().sum()
    }
}

/// Tip force and moment, world frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExternalLoad {
    pub force: Vec3,
    pub moment: Vec3,
}

impl ExternalLoad {
    pub fn none() -> Self {
        ExternalLoad {
            force: Vec3::ZERO,
            moment: Vec3::ZERO,
        }
    }

    /// Hanging payload of `mass` kg along unit `g_dir`.
    pub fn payload(mass: f64, g_dir: Vec3) -> Self {
        ExternalLoad {
            force: g_dir.scale(mass * GRAVITY),
            moment: Vec3::ZERO,
        }
    }
}

impl Default for ExternalLoad {
    fn default() -> Self {
        ExternalLoad::payload(DEFAULT_TIP_MASS, Vec3::E3)
    }
}

/// Chamber force and moment at the tip:
/// `n_P = Σ P_i A R e3`, `m_P = Σ hat(path_i) P_i A R e3`.
pub fn pneumatic_load(
    cmd: &PressureCommand,
    layout: &ChamberLayout,
    a_effect: f64,
    r_tip: &Mat3,
) -> Result<(Vec3, Vec3)> {
    cmd.validate()?;
    if !(a_effect > 0.0 && a_effect.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "a_effect",
            value: a_effect,
        });
    }
    let axis = r_tip.col(2);
    let mut n_p = Vec3::ZERO;
    let mut m_p = Vec3::ZERO;
    for (path, &p) in layout.positions.iter().zip(cmd.pressures.iter()) {
        let force = axis.scale(p * a_effect);
        n_p += force;
        m_p += hat(*path).mul_vec(&force);
    }
    Ok((n_p, m_p))
}

/// Free-end boundary values `n(L) = n_P + F_ext`, `m(L) = m_P + L_ext`.
pub fn tip_boundary(n_p: Vec3, m_p: Vec3, ext: &ExternalLoad) -> (Vec3, Vec3) {
    (n_p + ext.force, m_p + ext.moment)
}
