//! Scenario files: flat `key = value` text with dotted keys.
//!
//! One or more assignments per line, separated by commas outside brackets.
//! `#` starts a comment. Lists are bracketed, `[a, b, c]`; tables are lists
//! of `x:y` pairs. Every omitted key takes its default.

use std::collections::HashMap;
use std::fmt::Write as _;

use spinerod_core::rod::GRAVITY;
use spinerod_core::{
    AEffectSchedule, Error as CoreError, ExternalLoad, Interpolation, MaterialParams,
    PressureCommand, PressureSpec, Scenario, Vec3, CHAMBER_COUNT,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{}key `{key}`: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
pub struct ParseError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

/// Every recognized key, in serialization order.
pub const KEYS: &[&str] = &[
    "material.E",
    "material.G",
    "material.rho",
    "material.r_o",
    "material.r_i",
    "material.r_c",
    "material.r_path",
    "material.L",
    "spine.length",
    "spine.radius",
    "spine.modulus_table",
    "spine.interpolation",
    "spine.density",
    "a_effect.table",
    "a_effect.interpolation",
    "a_effect.area",
    "group",
    "pressure",
    "pressures",
    "external.force",
    "external.moment",
    "external.mass",
    "gravity.enabled",
    "gravity.direction",
    "gravity.spine_weight",
    "integration.n",
    "integration.reorthonormalize_every",
    "solver.tol",
    "solver.max_iter",
    "solver.fd_step",
];

struct Entry {
    line: usize,
    value: String,
}

struct Entries {
    map: HashMap<&'static str, Entry>,
}

impl Entries {
    fn err(&self, key: &str, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.map.get(key).map(|e| e.line),
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|e| e.value.as_str())
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ParseError> {
        self.raw(key)
            .map(|v| parse_f64(v).map_err(|m| self.err(key, m)))
            .transpose()
    }

    fn usize(&self, key: &str) -> Result<Option<usize>, ParseError> {
        self.raw(key)
            .map(|v| {
                v.parse::<usize>().map_err(|_| {
                    self.err(key, format!("expected a non-negative integer, got `{v}`"))
                })
            })
            .transpose()
    }

    fn bool(&self, key: &str) -> Result<Option<bool>, ParseError> {
        self.raw(key)
            .map(|v| match v {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(self.err(key, format!("expected `true` or `false`, got `{v}`"))),
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, ParseError> {
        self.raw(key)
            .map(|v| {
                list_items(v)
                    .map_err(|m| self.err(key, m))?
                    .into_iter()
                    .map(|item| parse_f64(item).map_err(|m| self.err(key, m)))
                    .collect()
            })
            .transpose()
    }

    fn vec3(&self, key: &str) -> Result<Option<Vec3>, ParseError> {
        self.list(key)?
            .map(|v| match v.as_slice() {
                [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
                _ => Err(self.err(key, format!("expected 3 components, got {}", v.len()))),
            })
            .transpose()
    }

    fn table(&self, key: &str) -> Result<Option<Vec<(f64, f64)>>, ParseError> {
        self.raw(key)
            .map(|v| {
                list_items(v)
                    .map_err(|m| self.err(key, m))?
                    .into_iter()
                    .map(|item| {
                        let (a, b) = item.split_once(':').ok_or_else(|| {
                            self.err(key, format!("expected `x:y`, got `{item}`"))
                        })?;
                        Ok((
                            parse_f64(a.trim()).map_err(|m| self.err(key, m))?,
                            parse_f64(b.trim()).map_err(|m| self.err(key, m))?,
                        ))
                    })
                    .collect()
            })
            .transpose()
    }

    fn interpolation(&self, key: &str) -> Result<Option<Interpolation>, ParseError> {
        self.raw(key)
            .map(|v| match v {
                "linear" => Ok(Interpolation::Linear),
                "previous" => Ok(Interpolation::Previous),
                _ => Err(self.err(key, format!("expected `linear` or `previous`, got `{v}`"))),
            })
            .transpose()
    }
}

fn parse_f64(v: &str) -> Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => Err(format!("non-finite value `{v}`")),
        Err(_) => Err(format!("expected a number, got `{v}`")),
    }
}

fn list_items(v: &str) -> Result<Vec<&str>, String> {
    let inner = v
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| format!("expected a bracketed list, got `{v}`"))?
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(str::trim).collect())
}

/// Splits on commas that are not inside brackets.
fn split_assignments(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in line.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&line[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&line[start..]);
    out
}

fn collect(text: &str) -> Result<Entries, ParseError> {
    let mut map = HashMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        for part in split_assignments(line) {
            let part = part.trim();
            let (key, value) = part.split_once('=').ok_or_else(|| ParseError {
                line: Some(line_no),
                key: part.to_string(),
                message: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                return Err(ParseError {
                    line: Some(line_no),
                    key: key.into(),
                    message: "unknown key".into(),
                });
            };
            if map.contains_key(known) {
                return Err(ParseError {
                    line: Some(line_no),
                    key: key.into(),
                    message: "duplicate key".into(),
                });
            }
            map.insert(
                known,
                Entry {
                    line: line_no,
                    value: value.trim().to_string(),
                },
            );
        }
    }
    Ok(Entries { map })
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let e = collect(text)?;

    let mut material = MaterialParams::default();
    let fields: [(&str, &mut f64); 8] = [
        ("material.E", &mut material.e_silicone),
        ("material.G", &mut material.g),
        ("material.rho", &mut material.rho),
        ("material.r_o", &mut material.r_outer),
        ("material.r_i", &mut material.r_inner),
        ("material.r_c", &mut material.r_chamber),
        ("material.r_path", &mut material.r_path),
        ("material.L", &mut material.length),
    ];
    let mut g_given = false;
    for (key, slot) in fields {
        if let Some(v) = e.f64(key)? {
            *slot = v;
            g_given |= key == "material.G";
        }
    }
    if !g_given {
        material.g = material.e_silicone / 3.0;
    }

    let mut s = Scenario::with_material(material);

    if let Some(v) = e.f64("spine.length")? {
        s.spine.length = v;
    }
    if let Some(v) = e.f64("spine.radius")? {
        s.spine.radius = v;
    }
    if let Some(v) = e.table("spine.modulus_table")? {
        s.spine.modulus_table = v;
    }
    if let Some(v) = e.interpolation("spine.interpolation")? {
        s.spine.interpolation = v;
    }
    if let Some(v) = e.f64("spine.density")? {
        s.gravity.spine_density = v;
    }
    if let Some(v) = e.table("a_effect.table")? {
        s.a_effect = AEffectSchedule {
            table: v,
            ..s.a_effect
        };
    }
    if let Some(v) = e.interpolation("a_effect.interpolation")? {
        s.a_effect.interpolation = v;
    }
    s.a_effect_override = e.f64("a_effect.area")?;

    let group = e.usize("group")?;
    let pressure = e.f64("pressure")?;
    match (e.list("pressures")?, group, pressure) {
        (Some(_), Some(_), _) => {
            return Err(e.err("group", "cannot combine `group` with `pressures`"))
        }
        (Some(_), _, Some(_)) => {
            return Err(e.err("pressure", "cannot combine `pressure` with `pressures`"))
        }
        (Some(list), None, None) => {
            let arr: [f64; CHAMBER_COUNT] = list.as_slice().try_into().map_err(|_| {
                e.err(
                    "pressures",
                    format!("expected {CHAMBER_COUNT} values, got {}", list.len()),
                )
            })?;
            s.pressure = PressureSpec::Chambers(PressureCommand { pressures: arr });
        }
        (None, g, p) => {
            s.pressure = PressureSpec::Group {
                group: g.unwrap_or(1),
                pressure: p.unwrap_or(0.0),
            };
        }
    }

    if let Some(v) = e.bool("gravity.enabled")? {
        s.gravity.enabled = v;
    }
    if let Some(v) = e.vec3("gravity.direction")? {
        s.gravity.direction = v;
    }
    if let Some(v) = e.bool("gravity.spine_weight")? {
        s.gravity.include_spine_weight = v;
    }

    let dir = s
        .gravity
        .direction
        .normalized()
        .ok_or_else(|| e.err("gravity.direction", "zero vector"))?;
    match (e.vec3("external.force")?, e.f64("external.mass")?) {
        (Some(_), Some(_)) => {
            return Err(e.err(
                "external.mass",
                "cannot combine `external.mass` with `external.force`",
            ))
        }
        (Some(f), None) => s.external.force = f,
        (None, Some(m)) => {
            s.external = ExternalLoad {
                force: dir.scale(m * GRAVITY),
                ..s.external
            }
        }
        (None, None) => {
            s.external = ExternalLoad::payload(spinerod_core::actuation::DEFAULT_TIP_MASS, dir)
        }
    }
    if let Some(v) = e.vec3("external.moment")? {
        s.external.moment = v;
    }

    if let Some(v) = e.usize("integration.n")? {
        s.integration.n = v;
    }
    if let Some(v) = e.usize("integration.reorthonormalize_every")? {
        s.integration.reorthonormalize_every = v;
    }
    if let Some(v) = e.f64("solver.tol")? {
        s.solver.tol = v;
    }
    if let Some(v) = e.usize("solver.max_iter")? {
        s.solver.max_iter = v;
    }
    if let Some(v) = e.f64("solver.fd_step")? {
        s.solver.fd_step = v;
    }

    s.validate().map_err(|err| {
        let key = key_for(&err, &s);
        e.err(key, err.to_string())
    })?;
    Ok(s)
}

/// Best-effort mapping from a validation error to the offending key.
fn key_for(err: &CoreError, s: &Scenario) -> &'static str {
    match err {
        CoreError::InvalidParameter { name, .. } => match *name {
            "E_effective" | "E_s" | "E_c" => "material.E",
            "a_effect.area" => "a_effect.area",
            "external" => "external.force",
            n => KEYS
                .iter()
                .find(|k| **k == n)
                .copied()
                .unwrap_or("scenario"),
        },
        CoreError::OutOfEnvelope { .. } => "spine.length",
        CoreError::InvalidCommand { .. } => match s.pressure {
            PressureSpec::Group { .. } => "pressure",
            PressureSpec::Chambers(_) => "pressures",
        },
        _ => "scenario",
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
    format!("[{}]", items.join(", "))
}

fn fmt_table(t: &[(f64, f64)]) -> String {
    let items: Vec<String> = t.iter().map(|(a, b)| format!("{a:?}:{b:?}")).collect();
    format!("[{}]", items.join(", "))
}

/// Writes every field explicitly; `parse_scenario` of the output reproduces
/// the scenario exactly.
pub fn serialize_scenario(s: &Scenario) -> String {
    let m = &s.material;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("material.E", format!("{:?}", m.e_silicone));
    kv("material.G", format!("{:?}", m.g));
    kv("material.rho", format!("{:?}", m.rho));
    kv("material.r_o", format!("{:?}", m.r_outer));
    kv("material.r_i", format!("{:?}", m.r_inner));
    kv("material.r_c", format!("{:?}", m.r_chamber));
    kv("material.r_path", format!("{:?}", m.r_path));
    kv("material.L", format!("{:?}", m.length));
    kv("spine.length", format!("{:?}", s.spine.length));
    kv("spine.radius", format!("{:?}", s.spine.radius));
    kv("spine.modulus_table", fmt_table(&s.spine.modulus_table));
    kv("spine.interpolation", s.spine.interpolation.as_str().into());
    kv("spine.density", format!("{:?}", s.gravity.spine_density));
    kv("a_effect.table", fmt_table(&s.a_effect.table));
    kv(
        "a_effect.interpolation",
        s.a_effect.interpolation.as_str().into(),
    );
    if let Some(a) = s.a_effect_override {
        kv("a_effect.area", format!("{a:?}"));
    }
    match s.pressure {
        PressureSpec::Group { group, pressure } => {
            kv("group", group.to_string());
            kv("pressure", format!("{pressure:?}"));
        }
        PressureSpec::Chambers(cmd) => kv("pressures", fmt_vec(&cmd.pressures)),
    }
    kv("external.force", fmt_vec(&s.external.force.0));
    kv("external.moment", fmt_vec(&s.external.moment.0));
    kv("gravity.enabled", s.gravity.enabled.to_string());
    kv("gravity.direction", fmt_vec(&s.gravity.direction.0));
    kv(
        "gravity.spine_weight",
        s.gravity.include_spine_weight.to_string(),
    );
    kv("integration.n", s.integration.n.to_string());
    kv(
        "integration.reorthonormalize_every",
        s.integration.reorthonormalize_every.to_string(),
    );
    kv("solver.tol", format!("{:?}", s.solver.tol));
    kv("solver.max_iter", s.solver.max_iter.to_string());
    kv("solver.fd_step", format!("{:?}", s.solver.fd_step));
    out
}
