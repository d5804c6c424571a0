//! Flat JSON config files.
//!
//! Keys are the flag names without the leading dashes (`"t-max"`,
//! `"quad-tol"`, ...). Dashes and underscores inside a key are ignored when
//! matching, so `"t_max"` and `"tmax"` are accepted too. Complex amplitudes
//! are strings in `re+imi` form; lists are JSON arrays.

use std::path::PathBuf;

use num_complex::Complex64 as C64;
use serde_json::{Map, Value};

use super::{
    format_complex, normalize_pair, parse_complex, parse_list, parse_psi0, Args, CliError, Command,
    InitialState, RunConfig,
};
use crate::hamiltonians::DriveParams;
use crate::linalg::{Complex2Vector, StateVector};
use crate::strong_coupling::FrameAmplitudes;

pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_G: f64 = 1.0;
pub const DEFAULT_OMEGA: f64 = 1.0;
pub const DEFAULT_HORIZON: f64 = 10.0;
pub const DEFAULT_SAMPLES: usize = 201;
pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_ORDER: usize = 1;
pub const DEFAULT_DELTAS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];
pub const DEFAULT_OMEGAS: [f64; 6] = [0.5, 0.75, 1.0, 1.25, 1.5, 2.0];

/// Initial-state keys; these are taken from a single source as a group.
#[derive(Clone, Debug, Default, PartialEq)]
struct InitialGroup {
    alpha: Option<C64>,
    beta: Option<C64>,
    psi0: Option<Complex2Vector>,
    equal_superposition: Option<bool>,
    theta: Option<f64>,
}

impl InitialGroup {
    fn is_empty(&self) -> bool {
        *self == InitialGroup::default()
    }

    fn resolve(&self) -> Result<InitialState, CliError> {
        let equal = self.equal_superposition.unwrap_or(false);
        let frame_given = self.alpha.is_some() || self.beta.is_some();
        if self.theta.is_some() && !equal {
            return Err(CliError::Usage(
                "--theta requires --equal-superposition".into(),
            ));
        }
        if self.psi0.is_some() && (frame_given || equal) {
            return Err(CliError::Usage(
                "--psi0 cannot be combined with --alpha/--beta/--equal-superposition".into(),
            ));
        }
        if equal && frame_given {
            return Err(CliError::Usage(
                "--equal-superposition cannot be combined with --alpha/--beta".into(),
            ));
        }
        if equal {
            let theta = self.theta.unwrap_or(0.0);
            if !theta.is_finite() {
                return Err(CliError::Usage(format!(
                    "theta must be finite, got {theta}"
                )));
            }
            return Ok(InitialState::EqualSuperposition { theta });
        }
        if let Some(psi) = self.psi0 {
            let v = normalize_pair(psi, "psi0")?;
            let state = StateVector::new(v.c0, v.c1).map_err(|e| CliError::Usage(e.to_string()))?;
            return Ok(InitialState::Amplitudes(state));
        }
        let zero = C64::new(0.0, 0.0);
        let (alpha, beta) = match (self.alpha, self.beta) {
            (None, None) => (C64::new(1.0, 0.0), zero),
            (a, b) => (a.unwrap_or(zero), b.unwrap_or(zero)),
        };
        let v = normalize_pair(Complex2Vector::new(alpha, beta), "alpha, beta")?;
        let amps = FrameAmplitudes::new(v.c0, v.c1).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(InitialState::Frame(amps))
    }
}

/// Partially specified settings from one source (file or flags).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub command: Option<Command>,
    pub delta: Option<f64>,
    pub g: Option<f64>,
    pub omega: Option<f64>,
    initial: InitialGroup,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub quad_tol: Option<f64>,
    pub order: Option<usize>,
    pub deltas: Option<Vec<f64>>,
    pub omegas: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
}

fn canonical_key(key: &str) -> String {
    key.chars()
        .filter(|c| *c != '-' && *c != '_')
        .flat_map(char::to_lowercase)
        .collect()
}

fn bad_value(key: &str, v: &Value, want: &str) -> CliError {
    CliError::Usage(format!("config key {key:?}: expected {want}, got {v}"))
}

fn as_f64(key: &str, v: &Value) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| bad_value(key, v, "a number"))
}

fn as_usize(key: &str, v: &Value) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| bad_value(key, v, "a non-negative integer"))
}

fn as_complex(key: &str, v: &Value) -> Result<C64, CliError> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::String(s) => parse_complex(s).map_err(CliError::Usage),
        _ => Err(bad_value(key, v, "a complex number string")),
    }
}

fn as_list(key: &str, v: &Value) -> Result<Vec<f64>, CliError> {
    match v {
        Value::Array(items) => items.iter().map(|x| as_f64(key, x)).collect(),
        Value::String(s) => parse_list(s, key),
        _ => Err(bad_value(key, v, "an array of numbers")),
    }
}

fn as_string<'a>(key: &str, v: &'a Value) -> Result<&'a str, CliError> {
    v.as_str().ok_or_else(|| bad_value(key, v, "a string"))
}

impl Settings {
    pub fn from_text(text: &str) -> Result<Settings, CliError> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("config file is not valid JSON: {e}")))?;
        let Value::Object(map) = root else {
            return Err(CliError::Usage("config file must be a JSON object".into()));
        };
        let mut s = Settings::default();
        for (key, v) in &map {
            match canonical_key(key).as_str() {
                "command" => {
                    let name = as_string(key, v)?;
                    s.command = Some(
                        <Command as clap::ValueEnum>::from_str(name, true)
                            .map_err(|_| CliError::Usage(format!("unknown command {name:?}")))?,
                    );
                }
                "delta" => s.delta = Some(as_f64(key, v)?),
                "g" => s.g = Some(as_f64(key, v)?),
                "omega" => s.omega = Some(as_f64(key, v)?),
                "alpha" => s.initial.alpha = Some(as_complex(key, v)?),
                "beta" => s.initial.beta = Some(as_complex(key, v)?),
                "psi0" => {
                    s.initial.psi0 = Some(match v {
                        Value::Array(items) if items.len() == 2 => Complex2Vector::new(
                            as_complex(key, &items[0])?,
                            as_complex(key, &items[1])?,
                        ),
                        Value::String(text) => parse_psi0(text)?,
                        _ => return Err(bad_value(key, v, "two complex amplitudes")),
                    })
                }
                "equalsuperposition" => {
                    s.initial.equal_superposition = Some(
                        v.as_bool()
                            .ok_or_else(|| bad_value(key, v, "true or false"))?,
                    )
                }
                "theta" => s.initial.theta = Some(as_f64(key, v)?),
                "tmax" => s.t_max = Some(as_f64(key, v)?),
                "samples" => s.samples = Some(as_usize(key, v)?),
                "reltol" => s.rel_tol = Some(as_f64(key, v)?),
                "abstol" => s.abs_tol = Some(as_f64(key, v)?),
                "maxstep" => s.max_step = Some(as_f64(key, v)?),
                "quadtol" => s.quad_tol = Some(as_f64(key, v)?),
                "order" => s.order = Some(as_usize(key, v)?),
                "deltas" => s.deltas = Some(as_list(key, v)?),
                "omegas" => s.omegas = Some(as_list(key, v)?),
                "out" => s.out = Some(PathBuf::from(as_string(key, v)?)),
                _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
            }
        }
        Ok(s)
    }

    pub(super) fn from_flags(a: &Args) -> Result<Settings, CliError> {
        Ok(Settings {
            command: Some(a.command),
            delta: a.delta,
            g: a.g,
            omega: a.omega,
            initial: InitialGroup {
                alpha: a.alpha,
                beta: a.beta,
                psi0: a.psi0.as_deref().map(parse_psi0).transpose()?,
                equal_superposition: a.equal_superposition.then_some(true),
                theta: a.theta,
            },
            t_max: a.t_max,
            samples: a.samples,
            rel_tol: a.rel_tol,
            abs_tol: a.abs_tol,
            max_step: a.max_step,
            quad_tol: a.quad_tol,
            order: a.order,
            deltas: a
                .deltas
                .as_deref()
                .map(|s| parse_list(s, "deltas"))
                .transpose()?,
            omegas: a
                .omegas
                .as_deref()
                .map(|s| parse_list(s, "omegas"))
                .transpose()?,
            out: a.out.clone(),
        })
    }

    /// Complete description of `cfg`.
    pub fn from_run_config(cfg: &RunConfig) -> Settings {
        let initial = match cfg.initial {
            InitialState::Amplitudes(psi) => InitialGroup {
                psi0: Some(psi.vector()),
                ..Default::default()
            },
            InitialState::Frame(a) => InitialGroup {
                alpha: Some(a.alpha()),
                beta: Some(a.beta()),
                ..Default::default()
            },
            InitialState::EqualSuperposition { theta } => InitialGroup {
                equal_superposition: Some(true),
                theta: Some(theta),
                ..Default::default()
            },
        };
        Settings {
            command: Some(cfg.command),
            delta: Some(cfg.params.delta()),
            g: Some(cfg.params.g()),
            omega: Some(cfg.params.omega()),
            initial,
            t_max: Some(cfg.horizon),
            samples: Some(cfg.samples),
            rel_tol: Some(cfg.rel_tol),
            abs_tol: Some(cfg.abs_tol),
            max_step: cfg.max_step,
            quad_tol: Some(cfg.quad_tol),
            order: Some(cfg.order),
            deltas: Some(cfg.deltas.clone()),
            omegas: Some(cfg.omegas.clone()),
            out: Some(cfg.out.clone()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        if let Some(c) = self.command {
            put("command", Value::from(c.name()));
        }
        let nums = [
            ("delta", self.delta),
            ("g", self.g),
            ("omega", self.omega),
            ("theta", self.initial.theta),
            ("t-max", self.t_max),
            ("rel-tol", self.rel_tol),
            ("abs-tol", self.abs_tol),
            ("max-step", self.max_step),
            ("quad-tol", self.quad_tol),
        ];
        for (k, v) in nums {
            if let Some(x) = v {
                put(k, Value::from(x));
            }
        }
        if let Some(a) = self.initial.alpha {
            put("alpha", Value::from(format_complex(a)));
        }
        if let Some(b) = self.initial.beta {
            put("beta", Value::from(format_complex(b)));
        }
        if let Some(psi) = self.initial.psi0 {
            put(
                "psi0",
                Value::from(vec![format_complex(psi.c0), format_complex(psi.c1)]),
            );
        }
        if let Some(e) = self.initial.equal_superposition {
            put("equal-superposition", Value::from(e));
        }
        if let Some(n) = self.samples {
            put("samples", Value::from(n));
        }
        if let Some(k) = self.order {
            put("order", Value::from(k));
        }
        if let Some(d) = &self.deltas {
            put("deltas", Value::from(d.clone()));
        }
        if let Some(w) = &self.omegas {
            put("omegas", Value::from(w.clone()));
        }
        if let Some(o) = &self.out {
            put("out", Value::from(o.to_string_lossy().into_owned()));
        }
        let mut text =
            serde_json::to_string_pretty(&Value::Object(m)).expect("JSON map serializes");
        text.push('\n');
        text
    }

    /// Layers `over` on top of `self` and validates the result.
    pub fn resolve(self, command: Command, over: Settings) -> Result<RunConfig, CliError> {
        let initial = if over.initial.is_empty() {
            self.initial
        } else {
            over.initial
        };
        let delta = over.delta.or(self.delta).unwrap_or(DEFAULT_DELTA);
        let g = over.g.or(self.g).unwrap_or(DEFAULT_G);
        let omega = over.omega.or(self.omega).unwrap_or(DEFAULT_OMEGA);
        let params =
            DriveParams::new(delta, g, omega).map_err(|e| CliError::Usage(e.to_string()))?;

        let horizon = over.t_max.or(self.t_max).unwrap_or(DEFAULT_HORIZON);
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(CliError::Usage(format!(
                "t-max must be positive and finite, got {horizon}"
            )));
        }
        let samples = over.samples.or(self.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(CliError::Usage(format!(
                "samples must be at least 2, got {samples}"
            )));
        }
        let quad_tol = over.quad_tol.or(self.quad_tol).unwrap_or(DEFAULT_QUAD_TOL);
        if !(quad_tol > 0.0 && quad_tol < 1.0) {
            return Err(CliError::Usage(format!(
                "quad-tol must lie in (0, 1), got {quad_tol}"
            )));
        }
        let max_step = over.max_step.or(self.max_step);
        if let Some(h) = max_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(CliError::Usage(format!(
                    "max-step must be positive, got {h}"
                )));
            }
        }
        let deltas = over
            .deltas
            .or(self.deltas)
            .unwrap_or_else(|| DEFAULT_DELTAS.to_vec());
        let omegas = over
            .omegas
            .or(self.omegas)
            .unwrap_or_else(|| DEFAULT_OMEGAS.to_vec());
        if deltas.is_empty() || deltas.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return Err(CliError::Usage(
                "deltas must be a non-empty list of values >= 0".into(),
            ));
        }
        if omegas.is_empty() || omegas.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(CliError::Usage(
                "omegas must be a non-empty list of positive values".into(),
            ));
        }

        let cfg = RunConfig {
            command,
            params,
            initial: initial.resolve()?,
            horizon,
            samples,
            rel_tol: over.rel_tol.or(self.rel_tol).unwrap_or(DEFAULT_REL_TOL),
            abs_tol: over.abs_tol.or(self.abs_tol).unwrap_or(DEFAULT_ABS_TOL),
            max_step,
            quad_tol,
            order: over.order.or(self.order).unwrap_or(DEFAULT_ORDER),
            deltas,
            omegas,
            out: over
                .out
                .or(self.out)
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", command.name()))),
        };
        cfg.integrator()
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_spellings_are_equivalent() {
        for key in ["t-max", "t_max", "tmax", "T-Max"] {
            let s = Settings::from_text(&format!("{{\"{key}\": 3.5}}")).unwrap();
            assert_eq!(s.t_max, Some(3.5), "{key}");
        }
    }

    #[test]
    fn unknown_keys_and_bad_values_are_usage_errors() {
        for text in [
            r#"{"speed": 1}"#,
            r#"{"delta": "x"}"#,
            r#"{"samples": -3}"#,
            r#"{"alpha": true}"#,
            r#"[1, 2]"#,
            "not json",
        ] {
            let err = Settings::from_text(text).unwrap_err();
            assert!(matches!(err, CliError::Usage(_)), "{text}");
        }
    }

    #[test]
    fn complex_and_list_values() {
        let s = Settings::from_text(
            r#"{"alpha": "0.6", "beta": "0.8i", "deltas": [0.4, 0.2], "omegas": "1,2"}"#,
        )
        .unwrap();
        assert_eq!(s.initial.alpha, Some(C64::new(0.6, 0.0)));
        assert_eq!(s.initial.beta, Some(C64::new(0.0, 0.8)));
        assert_eq!(s.deltas, Some(vec![0.4, 0.2]));
        assert_eq!(s.omegas, Some(vec![1.0, 2.0]));
    }

    #[test]
    fn initial_group_conflicts() {
        let conflicts = [
            InitialGroup {
                theta: Some(0.3),
                ..Default::default()
            },
            InitialGroup {
                equal_superposition: Some(true),
                alpha: Some(C64::new(1.0, 0.0)),
                ..Default::default()
            },
            InitialGroup {
                psi0: Some(Complex2Vector::basis0()),
                beta: Some(C64::new(1.0, 0.0)),
                ..Default::default()
            },
            InitialGroup {
                alpha: Some(C64::new(0.5, 0.0)),
                ..Default::default()
            },
        ];
        for g in conflicts {
            assert!(matches!(g.resolve(), Err(CliError::Usage(_))), "{g:?}");
        }
    }

    #[test]
    fn missing_amplitude_defaults_to_zero() {
        let g = InitialGroup {
            beta: Some(C64::new(0.0, 1.0)),
            ..Default::default()
        };
        match g.resolve().unwrap() {
            InitialState::Frame(a) => {
                assert_eq!(a.alpha(), C64::new(0.0, 0.0));
                assert_eq!(a.beta(), C64::new(0.0, 1.0));
            }
            other => panic!("{other:?}"),
        }
    }
}
