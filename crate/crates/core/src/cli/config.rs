//! Flat `key = value` run configuration.
//!
//! ```text
//! # Fig. 3 family
//! N = 100
//! state.kind = coherent
//! state.P0 = 1/3
//! state.theta = pi/2
//! scan.phi = 2*pi/3
//! ```
//!
//! Numbers accept products and quotients of literals and `pi`. Unknown keys,
//! duplicate keys and out-of-range values are rejected before anything runs.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::algebra::{MagneticParams, ModelParams};
use crate::error::{Error, Result};
use crate::evolve::TimeGrid;
use crate::fock::ModeOccupation;
use crate::ground::DEFAULT_FRAGMENT_FRACTION;
use crate::prepare::{AngularLabel, AngularMethod, CoherentSpec, GlmkMethod};
use crate::squeeze::{AngleScan, SqueezeSettings};

const KEYS: &[&str] = &[
    "N",
    "params.lambda_a",
    "params.lambda_s",
    "params.mu",
    "params.alpha",
    "params.beta",
    "params.gamma",
    "state.kind",
    "state.n_minus",
    "state.n_zero",
    "state.n_plus",
    "state.P0",
    "state.theta",
    "state.P_minus",
    "state.P_zero",
    "state.P_plus",
    "state.delta_minus",
    "state.delta_zero",
    "state.delta_plus",
    "state.l",
    "state.m",
    "state.method",
    "ground.m",
    "ground.fraction",
    "time.start",
    "time.stop",
    "time.steps",
    "scan.t",
    "scan.phi",
    "scan.alpha",
    "scan.phi_points",
    "scan.alpha_points",
    "validate.draws",
    "output.csv",
    "output.report",
    "output.plot_script",
];

/// Largest atom number the runner accepts.
pub const MAX_N: u32 = 5000;

#[derive(Debug, Clone, PartialEq)]
pub enum StateConfig {
    Fock(ModeOccupation),
    Coherent(CoherentSpec),
    Angular {
        label: AngularLabel,
        method: AngularMethod,
    },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outputs {
    pub csv: Option<String>,
    pub report: Option<String>,
    pub plot_script: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub total_n: u32,
    pub params: ModelParams,
    pub state: Option<StateConfig>,
    pub ground_m: i32,
    pub fraction: f64,
    pub grid: TimeGrid,
    pub squeeze: SqueezeSettings,
    /// Time at which the `scan` subcommand sweeps the angles; defaults to `time.start`.
    pub scan_t: f64,
    pub validate_draws: usize,
    pub outputs: Outputs,
}

/// Evaluates `a*b/c`-style expressions over numbers and `pi`.
pub fn parse_number(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(&s)),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut token = String::new();
    let apply = |value: f64, op: char, token: &str| -> Option<f64> {
        let x = match token {
            "pi" => PI,
            t => t.parse::<f64>().ok()?,
        };
        Some(if op == '*' { value * x } else { value / x })
    };
    for c in body.chars() {
        if c == '*' || c == '/' {
            value = apply(value, op, &token)?;
            token.clear();
            op = c;
        } else {
            token.push(c);
        }
    }
    value = apply(value, op, &token)?;
    value.is_finite().then_some(sign * value)
}

struct Table {
    entries: BTreeMap<String, (usize, String)>,
}

impl Table {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::config(key, "unknown key"));
            }
            if entries
                .insert(key.to_string(), (lineno + 1, value.to_string()))
                .is_some()
            {
                return Err(Error::config(key, "given more than once"));
            }
        }
        Ok(Self { entries })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| {
                parse_number(v).ok_or_else(|| Error::config(key, format!("`{v}` is not a number")))
            })
            .transpose()
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    fn int(&self, key: &str) -> Result<Option<i64>> {
        self.raw(key)
            .map(|v| {
                v.parse::<i64>()
                    .map_err(|_| Error::config(key, format!("`{v}` is not an integer")))
            })
            .transpose()
    }

    fn uint(&self, key: &str, max: i64) -> Result<Option<u32>> {
        match self.int(key)? {
            Some(v) if v < 0 || v > max => {
                Err(Error::config(key, format!("{v} outside 0..={max}")))
            }
            Some(v) => Ok(Some(v as u32)),
            None => Ok(None),
        }
    }

    fn require<T>(&self, key: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| Error::config(key, "required but missing"))
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        self.raw(key)
            .map(|v| match v {
                "true" | "yes" | "1" => Ok(true),
                "false" | "no" | "0" => Ok(false),
                _ => Err(Error::config(key, format!("`{v}` is not a boolean"))),
            })
            .transpose()
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::config("--config", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = Table::parse(text)?;
        let total_n = t.uint("N", MAX_N as i64)?;
        let total_n = t.require("N", total_n)?;
        if total_n == 0 {
            return Err(Error::config("N", "need at least one atom"));
        }

        let mut params = ModelParams {
            lambda_a: t.f64_or("params.lambda_a", -1.0)?,
            lambda_s: t.f64_or("params.lambda_s", 0.0)?,
            mu: t.f64_or("params.mu", 0.0)?,
            magnetic: None,
        };
        if params.lambda_a == 0.0 {
            return Err(Error::config(
                "params.lambda_a",
                "must be nonzero (it sets the time unit)",
            ));
        }
        if ["params.alpha", "params.beta", "params.gamma"]
            .iter()
            .any(|k| t.has(k))
        {
            params.magnetic = Some(MagneticParams {
                alpha: t.f64_or("params.alpha", 0.0)?,
                beta: t.f64_or("params.beta", 0.0)?,
                gamma: t.f64_or("params.gamma", 0.0)?,
            });
        }

        let state = Self::parse_state(&t, total_n)?;

        let ground_m = t.int("ground.m")?.unwrap_or(0);
        if ground_m.unsigned_abs() > total_n as u64 {
            return Err(Error::config(
                "ground.m",
                format!("|m| = {} exceeds N", ground_m.abs()),
            ));
        }
        let fraction = t.f64_or("ground.fraction", DEFAULT_FRAGMENT_FRACTION)?;
        if !(0.0..1.0).contains(&fraction) {
            return Err(Error::config("ground.fraction", "must lie in [0, 1)"));
        }

        let default_grid = TimeGrid::default();
        let steps = t
            .uint("time.steps", 1_000_000)?
            .map_or(default_grid.steps(), |s| s as usize);
        let grid = TimeGrid::new(
            t.f64_or("time.start", default_grid.t_start())?,
            t.f64_or("time.stop", default_grid.t_stop())?,
            steps,
        )
        .map_err(|e| Error::config("time", e.to_string()))?;

        let mut squeeze = SqueezeSettings::default();
        squeeze.phi = t.f64_or("scan.phi", squeeze.phi)?;
        squeeze.alpha = t.f64_or("scan.alpha", squeeze.alpha)?;
        for (key, scan) in [
            ("scan.phi_points", &mut squeeze.phi_scan),
            ("scan.alpha_points", &mut squeeze.alpha_scan),
        ] {
            if let Some(p) = t.uint(key, 100_000)? {
                if p < 3 {
                    return Err(Error::config(key, "need at least 3 grid points"));
                }
                *scan = AngleScan {
                    points: p as usize,
                    ..*scan
                };
            }
        }

        let scan_t = t.f64_or("scan.t", grid.t_start())?;
        let validate_draws = t.uint("validate.draws", 10_000)?.unwrap_or(20) as usize;
        if validate_draws == 0 {
            return Err(Error::config("validate.draws", "need at least one draw"));
        }
        let outputs = Outputs {
            csv: t.raw("output.csv").map(str::to_string),
            report: t.raw("output.report").map(str::to_string),
            plot_script: t.bool("output.plot_script")?.unwrap_or(false),
        };
        for (key, name) in [
            ("output.csv", &outputs.csv),
            ("output.report", &outputs.report),
        ] {
            if let Some(n) = name {
                if n.is_empty() || n.contains('/') || n.contains('\\') {
                    return Err(Error::config(
                        key,
                        "must be a plain file name inside the output directory",
                    ));
                }
            }
        }

        Ok(Self {
            total_n,
            params,
            state,
            ground_m: ground_m as i32,
            fraction,
            grid,
            squeeze,
            scan_t,
            validate_draws,
            outputs,
        })
    }

    fn parse_state(t: &Table, total_n: u32) -> Result<Option<StateConfig>> {
        let Some(kind) = t.raw("state.kind") else {
            return Ok(None);
        };
        let state = match kind {
            "fock" => {
                let n = total_n as i64;
                let occ = [
                    t.uint("state.n_minus", n)?,
                    t.uint("state.n_zero", n)?,
                    t.uint("state.n_plus", n)?,
                ];
                let occ = match occ {
                    [Some(a), Some(b), Some(c)] => ModeOccupation::new(a, b, c),
                    _ => {
                        return Err(Error::config(
                            "state.n_minus",
                            "fock states need state.n_minus, state.n_zero and state.n_plus",
                        ))
                    }
                };
                if occ.total() != total_n {
                    return Err(Error::config(
                        "state.n_zero",
                        format!("occupations add up to {}, not N = {total_n}", occ.total()),
                    ));
                }
                StateConfig::Fock(occ)
            }
            "coherent" => {
                let spec = if t.has("state.P0") || t.has("state.theta") {
                    let p0 = t.require("state.P0", t.f64("state.P0")?)?;
                    let theta = t.f64_or("state.theta", 0.0)?;
                    CoherentSpec::from_p0_theta(total_n, p0, theta)
                        .map_err(|e| Error::config("state.P0", e.to_string()))?
                } else {
                    let pops = [
                        t.require("state.P_minus", t.f64("state.P_minus")?)?,
                        t.require("state.P_zero", t.f64("state.P_zero")?)?,
                        t.require("state.P_plus", t.f64("state.P_plus")?)?,
                    ];
                    let phases = [
                        t.f64_or("state.delta_minus", 0.0)?,
                        t.f64_or("state.delta_zero", 0.0)?,
                        t.f64_or("state.delta_plus", 0.0)?,
                    ];
                    CoherentSpec::from_polar(total_n, pops, phases)
                        .map_err(|e| Error::config("state.P_zero", e.to_string()))?
                };
                StateConfig::Coherent(spec)
            }
            "angular" => {
                let l = t.uint("state.l", total_n as i64)?;
                let l = t.require("state.l", l)?;
                let m = t.require("state.m", t.int("state.m")?)?;
                let label =
                    AngularLabel::new(total_n, l, m.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
                        .map_err(|e| Error::config("state.l", e.to_string()))?;
                let method = match t.raw("state.method").unwrap_or("numeric") {
                    "numeric" => AngularMethod::Numeric,
                    "analytic" => AngularMethod::Analytic(GlmkMethod::Auto),
                    other => {
                        return Err(Error::config(
                            "state.method",
                            format!("`{other}` is not one of analytic, numeric"),
                        ))
                    }
                };
                StateConfig::Angular { label, method }
            }
            other => {
                return Err(Error::config(
                    "state.kind",
                    format!("`{other}` is not one of fock, coherent, angular"),
                ))
            }
        };
        Ok(Some(state))
    }
}
