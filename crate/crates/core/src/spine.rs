//! Growing-spine stiffness: cantilever modulus identification, the measured
//! spine modulus table, volume-weighted combined modulus, the calibrated
//! effective chamber area and the piecewise stiffness profile along the rod.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{positive, Error, Result};
use crate::rod::{section_properties, MaterialParams, SectionProperties};

/// Longest characterized spine (m).
pub const MAX_SPINE_LENGTH: f64 = 0.30;

/// Jammed-spine modulus by spine length, (m, Pa).
pub const DEFAULT_MODULUS_TABLE: [(f64, f64); 6] = [
    (0.05, 0.318e6),
    (0.10, 1.323e6),
    (0.15, 2.032e6),
    (0.20, 3.069e6),
    (0.25, 3.763e6),
    (0.30, 4.389e6),
];

/// `A_effect / A_norm` by spine length, (m, -).
pub const DEFAULT_A_EFFECT_TABLE: [(f64, f64); 7] = [
    (0.00, 1.5),
    (0.05, 1.5),
    (0.10, 1.7),
    (0.15, 1.9),
    (0.20, 2.0),
    (0.25, 2.15),
    (0.30, 2.4),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Interpolation {
    #[default]
    Linear,
    /// Hold the value of the nearest tabulated entry at or below the query.
    Previous,
}

impl Interpolation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Interpolation::Linear => "linear",
            Interpolation::Previous => "previous",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpineConfig {
    /// Occupied length from the base (m).
    pub length: f64,
    pub radius: f64,
    pub modulus_table: Vec<(f64, f64)>,
    pub interpolation: Interpolation,
}

impl Default for SpineConfig {
    fn default() -> Self {
        SpineConfig {
            length: 0.0,
            radius: 0.029,
            modulus_table: DEFAULT_MODULUS_TABLE.to_vec(),
            interpolation: Interpolation::Linear,
        }
    }
}

impl SpineConfig {
    pub fn with_length(length: f64) -> Self {
        SpineConfig {
            length,
            ..SpineConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=MAX_SPINE_LENGTH).contains(&self.length) {
            return Err(Error::OutOfEnvelope {
                length: self.length,
                max: MAX_SPINE_LENGTH,
            });
        }
        positive("spine.radius", self.radius)?;
        if self.modulus_table.is_empty() {
            return Err(Error::InvalidParameter {
                name: "spine.modulus_table",
                value: 0.0,
            });
        }
        for &(l, e) in &self.modulus_table {
            positive("spine.modulus_table", l)?;
            positive("spine.modulus_table", e)?;
        }
        for w in self.modulus_table.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 > w[0].1) {
                return Err(Error::InvalidParameter {
                    name: "spine.modulus_table",
                    value: w[1].0,
                });
            }
        }
        Ok(())
    }
}

/// Effective chamber area coefficients as a function of spine length.
#[derive(Clone, Debug, PartialEq)]
pub struct AEffectSchedule {
    pub table: Vec<(f64, f64)>,
    pub interpolation: Interpolation,
}

impl Default for AEffectSchedule {
    fn default() -> Self {
        AEffectSchedule {
            table: DEFAULT_A_EFFECT_TABLE.to_vec(),
            interpolation: Interpolation::Linear,
        }
    }
}

impl AEffectSchedule {
    pub fn validate(&self) -> Result<()> {
        let Some(first) = self.table.first() else {
            return Err(Error::InvalidParameter {
                name: "a_effect.table",
                value: 0.0,
            });
        };
        if first.0 != 0.0 {
            return Err(Error::InvalidParameter {
                name: "a_effect.table",
                value: first.0,
            });
        }
        for &(_, c) in &self.table {
            positive("a_effect.table", c)?;
        }
        for w in self.table.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 >= w[0].1) {
                return Err(Error::InvalidParameter {
                    name: "a_effect.table",
                    value: w[1].0,
                });
            }
        }
        Ok(())
    }

    pub fn coefficient(&self, spine_length: f64) -> Result<f64> {
        let max = self.table.last().map_or(0.0, |e| e.0).min(MAX_SPINE_LENGTH);
        if !(0.0..=max).contains(&spine_length) {
            return Err(Error::OutOfEnvelope {
                length: spine_length,
                max,
            });
        }
        Ok(lookup(&self.table, spine_length, self.interpolation))
    }
}

/// Table lookup for `x` within `[table[0].0, table[last].0]`.
fn lookup(table: &[(f64, f64)], x: f64, mode: Interpolation) -> f64 {
    let idx = table.partition_point(|e| e.0 <= x);
    if idx == 0 {
        return table[0].1;
    }
    let (x0, y0) = table[idx - 1];
    if x0 == x || idx == table.len() || mode == Interpolation::Previous {
        return y0;
    }
    let (x1, y1) = table[idx];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Cantilever deflection at `x` under a point load at `x`:
/// `y = F(3L − x)x² / (6EI)`.
pub fn beam_deflection(force: f64, length: f64, x: f64, e: f64, i: f64) -> Result<f64> {
    positive("L", length)?;
    positive("E", e)?;
    positive("I", i)?;
    if !(0.0..=length).contains(&x) {
        return Err(Error::Domain {
            name: "x",
            value: x,
            min: 0.0,
            max: length,
        });
    }
    Ok(force * (3.0 * length - x) * x * x / (6.0 * e * i))
}

/// Modulus of a solid circular cantilever from its tip deflection:
/// `E = 4FL³ / (3πr⁴y)`.
pub fn modulus_from_tip_deflection(force: f64, length: f64, radius: f64, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Err(Error::RigidBody);
    }
    positive("F", force)?;
    positive("L", length)?;
    positive("r", radius)?;
    positive("y", y)?;
    let r2 = radius * radius;
    Ok(4.0 * force * length * length * length / (3.0 * PI * r2 * r2 * y))
}

/// Jammed-spine modulus at `length`. Below the first tabulated length the
/// value is interpolated from `(0, e_silicone)`.
pub fn spine_modulus(spine: &SpineConfig, length: f64, e_silicone: f64) -> Result<f64> {
    if !(length > 0.0) {
        return Err(Error::InvalidParameter {
            name: "spine length",
            value: length,
        });
    }
    let max = spine
        .modulus_table
        .last()
        .map_or(0.0, |e| e.0)
        .min(MAX_SPINE_LENGTH);
    if length > max {
        return Err(Error::OutOfEnvelope { length, max });
    }
    let (x0, y0) = spine.modulus_table[0];
    if length < x0 {
        return Ok(match spine.interpolation {
            Interpolation::Linear => e_silicone + (y0 - e_silicone) * length / x0,
            Interpolation::Previous => e_silicone,
        });
    }
    Ok(lookup(&spine.modulus_table, length, spine.interpolation))
}

/// Volume-weighted modulus `(V_c E_c + V_s E_s) / (V_c + V_s)`.
pub fn combined_modulus(e_c: f64, e_s: f64, v_c: f64, v_s: f64) -> Result<f64> {
    positive("E_c", e_c)?;
    positive("E_s", e_s)?;
    if !(v_c >= 0.0 && v_s >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "volume",
            value: v_c.min(v_s),
        });
    }
    let total = v_c + v_s;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "V_total",
            value: total,
        });
    }
    Ok(v_c / total * e_c + v_s / total * e_s)
}

/// Effective chamber area for the default calibration schedule.
pub fn a_effect(spine_length: f64, a_norm: f64) -> Result<f64> {
    positive("A_norm", a_norm)?;
    Ok(AEffectSchedule::default().coefficient(spine_length)? * a_norm)
}

/// Piecewise-constant stiffness along the rod: combined modulus on
/// `[0, boundary_s)`, silicone beyond.
#[derive(Clone, Debug, PartialEq)]
pub struct StiffnessProfile {
    pub spine: SpineConfig,
    pub mat: MaterialParams,
    pub e_combined: f64,
    pub boundary_s: f64,
    spine_section: SectionProperties,
    silicone_section: SectionProperties,
}

impl StiffnessProfile {
    pub fn new(spine: &SpineConfig, mat: &MaterialParams) -> Result<Self> {
        mat.validate()?;
        spine.validate()?;
        if spine.radius > mat.r_inner {
            return Err(Error::InvalidParameter {
                name: "spine.radius",
                value: spine.radius,
            });
        }
        let silicone_section = section_properties(mat, mat.e_silicone)?;
        let e_combined = if spine.length > 0.0 {
            let e_s = spine_modulus(spine, spine.length, mat.e_silicone)?;
            // equal lengths, so the volume ratio is the area ratio
            let a_spine = PI * spine.radius * spine.radius;
            combined_modulus(mat.e_silicone, e_s, mat.area(), a_spine)?
        } else {
            mat.e_silicone
        };
        Ok(StiffnessProfile {
            spine: spine.clone(),
            mat: *mat,
            e_combined,
            boundary_s: spine.length,
            spine_section: section_properties(mat, e_combined)?,
            silicone_section,
        })
    }

    /// Number of stiffness discontinuities along the rod.
    pub fn breakpoints(&self) -> usize {
        usize::from(self.boundary_s > 0.0)
    }

    /// Section at `s`; the boundary station itself belongs to the silicone side.
    pub fn stiffness_at(&self, s: f64) -> Result<SectionProperties> {
        if !(0.0..=self.mat.length).contains(&s) {
            return Err(Error::Domain {
                name: "s",
                value: s,
                min: 0.0,
                max: self.mat.length,
            });
        }
        Ok(self.section_unchecked(s))
    }

    #[inline]
    pub(crate) fn section_unchecked(&self, s: f64) -> SectionProperties {
        if s < self.boundary_s {
            self.spine_section
        } else {
            self.silicone_section
        }
    }
}
