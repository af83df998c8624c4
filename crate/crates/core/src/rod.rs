//! Static Cosserat rod: material, cross-section stiffness, constitutive law
//! and the right-hand side of the equilibrium ODEs.

use core::f64::consts::PI;

use crate::error::{positive, Error, Result};
use crate::math::{hat, Mat3, Vec3};

/// Standard gravity (m/s²).
pub const GRAVITY: f64 = 9.81;

/// Pose and internal loads at one arc-length station.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RodState {
    pub s: f64,
    pub p: Vec3,
    pub r: Mat3,
    pub n: Vec3,
    pub m: Vec3,
}

impl RodState {
    /// Clamped-base state: origin, identity frame, given base loads.
    pub fn base(n0: Vec3, m0: Vec3) -> Self {
        RodState {
            s: 0.0,
            p: Vec3::ZERO,
            r: Mat3::IDENTITY,
            n: n0,
            m: m0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite()
            && self.p.is_finite()
            && self.r.is_finite()
            && self.n.is_finite()
            && self.m.is_finite()
    }
}

/// Robot body material and geometry, SI units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialParams {
    /// Silicone Young's modulus (Pa).
    pub e_silicone: f64,
    /// Shear modulus (Pa).
    pub g: f64,
    /// Density (kg/m³).
    pub rho: f64,
    pub r_outer: f64,
    pub r_inner: f64,
    pub r_chamber: f64,
    pub r_path: f64,
    /// Rest length (m).
    pub length: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        let e = 0.507147e6;
        MaterialParams {
            e_silicone: e,
            g: e / 3.0,
            rho: 1300.0,
            r_outer: 0.05,
            r_inner: 0.029,
            r_chamber: 0.005,
            r_path: 0.04,
            length: 0.4,
        }
    }
}

impl MaterialParams {
    pub fn validate(&self) -> Result<()> {
        positive("material.E", self.e_silicone)?;
        positive("material.G", self.g)?;
        positive("material.rho", self.rho)?;
        positive("material.r_o", self.r_outer)?;
        positive("material.r_i", self.r_inner)?;
        positive("material.r_c", self.r_chamber)?;
        positive("material.r_path", self.r_path)?;
        positive("material.L", self.length)?;
        if self.r_inner >= self.r_outer {
            return Err(Error::InvalidParameter {
                name: "material.r_i",
                value: self.r_inner,
            });
        }
        if self.r_chamber >= self.r_path {
            return Err(Error::InvalidParameter {
                name: "material.r_c",
                value: self.r_chamber,
            });
        }
        if self.r_path >= self.r_outer {
            return Err(Error::InvalidParameter {
                name: "material.r_path",
                value: self.r_path,
            });
        }
        Ok(())
    }

    /// Annulus area `π(r_o² − r_i²)`; chamber bores are not subtracted.
    pub fn area(&self) -> f64 {
        PI * (self.r_outer * self.r_outer - self.r_inner * self.r_inner)
    }

    /// Annulus second moment about a diameter, `(π/4)(r_o⁴ − r_i⁴)`.
    pub fn second_moment(&self) -> f64 {
        PI / 4.0 * (pow4(self.r_outer) - pow4(self.r_inner))
    }
}

fn pow4(x: f64) -> f64 {
    let x2 = x * x;
    x2 * x2
}

/// Cross-section stiffness at one station.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectionProperties {
    pub area: f64,
    pub ixx: f64,
    pub iyy: f64,
    pub izz: f64,
    pub e: f64,
    pub g: f64,
    /// `diag(GA, GA, EA)`
    pub kse: Vec3,
    /// `diag(E·Ixx, E·Iyy, E·Izz)`
    pub kbt: Vec3,
    pub v_star: Vec3,
    pub u_star: Vec3,
}

impl SectionProperties {
    pub fn kse_matrix(&self) -> Mat3 {
        Mat3::diag(self.kse)
    }

    pub fn kbt_matrix(&self) -> Mat3 {
        Mat3::diag(self.kbt)
    }
}

/// Builds the annular section with modulus `e_effective`.
pub fn section_properties(mat: &MaterialParams, e_effective: f64) -> Result<SectionProperties> {
    positive("E_effective", e_effective)?;
    positive("material.G", mat.g)?;
    let area = mat.area();
    let i = mat.second_moment();
    Ok(section_from_geometry(area, i, i, e_effective, mat.g))
}

pub(crate) fn section_from_geometry(
    area: f64,
    ixx: f64,
    iyy: f64,
    e: f64,
    g: f64,
) -> SectionProperties {
    let izz = ixx + iyy;
    SectionProperties {
        area,
        ixx,
        iyy,
        izz,
        e,
        g,
        kse: Vec3::new(g * area, g * area, e * area),
        kbt: Vec3::new(e * ixx, e * iyy, e * izz),
        v_star: Vec3::E3,
        u_star: Vec3::ZERO,
    }
}

/// Distributed loads. `l` stays zero; `f` is the self-weight when gravity is
/// enabled, optionally plus the spine weight over `[0, spine_extent)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoadModel {
    pub f: Vec3,
    pub l: Vec3,
    pub g_dir: Vec3,
    pub gravity_enabled: bool,
    pub spine_f: Vec3,
    pub spine_extent: f64,
}

impl LoadModel {
    pub fn unloaded() -> Self {
        LoadModel {
            f: Vec3::ZERO,
            l: Vec3::ZERO,
            g_dir: Vec3::E3,
            gravity_enabled: false,
            spine_f: Vec3::ZERO,
            spine_extent: 0.0,
        }
    }

    /// Self-weight `rho·A·g·g_dir`. `g_dir` is normalized.
    pub fn gravity(mat: &MaterialParams, g_dir: Vec3) -> Result<Self> {
        let dir = g_dir.normalized().ok_or(Error::InvalidParameter {
            name: "gravity.direction",
            value: g_dir.norm(),
        })?;
        Ok(LoadModel {
            f: dir.scale(mat.rho * mat.area() * GRAVITY),
            g_dir: dir,
            gravity_enabled: true,
            ..LoadModel::unloaded()
        })
    }

    /// Adds a weight per unit length acting over `[0, extent)`.
    pub fn with_spine_weight(mut self, weight_per_length: f64, extent: f64) -> Self {
        self.spine_f = self.g_dir.scale(weight_per_length);
        self.spine_extent = extent;
        self
    }

    pub fn force_at(&self, s: f64) -> Vec3 {
        if s < self.spine_extent {
            self.f + self.spine_f
        } else {
            self.f
        }
    }
}

/// Arc-length derivatives of a [`RodState`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RodDerivative {
    pub dp: Vec3,
    pub dr: Mat3,
    pub dn: Vec3,
    pub dm: Vec3,
}

/// Linear constitutive law: `v = Kse⁻¹Rᵀn + v*`, `u = Kbt⁻¹Rᵀm + u*`.
pub fn constitutive_strains(state: &RodState, sec: &SectionProperties) -> Result<(Vec3, Vec3)> {
    let nonsingular = |k: &Vec3| k.0.iter().all(|d| *d != 0.0 && d.is_finite());
    if !nonsingular(&sec.kse) || !nonsingular(&sec.kbt) {
        return Err(Error::SingularStiffness);
    }
    let n_local = state.r.tmul_vec(&state.n);
    let m_local = state.r.tmul_vec(&state.m);
    let v = Vec3::new(
        n_local[0] / sec.kse[0],
        n_local[1] / sec.kse[1],
        n_local[2] / sec.kse[2],
    ) + sec.v_star;
    let u = Vec3::new(
        m_local[0] / sec.kbt[0],
        m_local[1] / sec.kbt[1],
        m_local[2] / sec.kbt[2],
    ) + sec.u_star;
    Ok((v, u))
}

/// Static equilibrium: `p' = Rv`, `R' = R·hat(u)`, `n' = −f`, `m' = −p'×n − l`.
pub fn ode_rhs(
    state: &RodState,
    sec: &SectionProperties,
    load: &LoadModel,
) -> Result<RodDerivative> {
    let (v, u) = constitutive_strains(state, sec)?;
    let dp = state.r.mul_vec(&v);
    let dr = state.r.mul_mat(&hat(u));
    let dn = -load.force_at(state.s);
    let dm = -(dp.cross(&state.n)) - load.l;
    Ok(RodDerivative { dp, dr, dn, dm })
}
