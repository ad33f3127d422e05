//! Flat `key = value` run configuration.
//!
//! Lists accept either comma-separated values or an inclusive range
//! `start..end` with an optional `:step`, so `d_values = 8..20:2` and
//! `deltas = -0.1..0.1:0.02` both work. `#` starts a comment.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::exchange::{DEFAULT_ONSITE_U_EV, PAPER_J1_EV};
use crate::lattice::DEFAULT_LEAD_LENGTH;
use crate::spinchain::Convention;
use crate::tightbinding::{DEFAULT_HALO, DEFAULT_THRESHOLD};
use crate::DEFAULT_TAU_EV;

/// Every knob of every subcommand. Unused keys are ignored by a command but
/// still echoed, so one file fully describes a run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub out: PathBuf,
    /// Worker threads; 0 lets the pool choose.
    pub workers: usize,
    pub seed: u64,
    pub svg: bool,

    pub tau: f64,
    pub lead_length: usize,
    pub threshold: f64,
    pub halo: usize,

    /// `spectrum` grid.
    pub n_values: Vec<usize>,
    pub l_values: Vec<usize>,

    /// Single device for `ldos` and `couplings`.
    pub width_n: usize,
    pub dot_length_l: usize,
    pub spacing_d: usize,
    pub n_dots: usize,
    /// LDOS energy in eV; `None` means the confined level `E0`.
    pub energy: Option<f64>,
    /// LDOS broadening in eV; `None` means `0.02 τ`.
    pub eta: Option<f64>,

    pub d_values: Vec<usize>,
    pub epsilon: f64,
    pub onsite_u: f64,
    pub calibrate: bool,
    pub target_j1: f64,

    pub j1: f64,
    pub convention: Convention,
    /// Target X̄ rotation angle θ in `exp(−iθX̄)`.
    pub angle: f64,
    pub deltas: Vec<f64>,
    /// Extra X̄ points with δ drawn uniformly from the `deltas` span.
    pub delta_samples: usize,
    pub zbar_field: f64,
    pub hadamard_field: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            out: PathBuf::from("out"),
            workers: 0,
            seed: 0,
            svg: false,
            tau: DEFAULT_TAU_EV,
            lead_length: DEFAULT_LEAD_LENGTH,
            threshold: DEFAULT_THRESHOLD,
            halo: DEFAULT_HALO,
            n_values: vec![5, 6, 7, 8, 9],
            l_values: vec![3, 4, 5, 6, 7],
            width_n: 7,
            dot_length_l: 6,
            spacing_d: 18,
            n_dots: 1,
            energy: None,
            eta: None,
            d_values: (8..=20).step_by(2).collect(),
            epsilon: 1.0,
            onsite_u: DEFAULT_ONSITE_U_EV,
            calibrate: false,
            target_j1: PAPER_J1_EV,
            j1: PAPER_J1_EV,
            convention: Convention::Sigma,
            angle: std::f64::consts::FRAC_PI_2,
            deltas: float_range(-0.1, 0.1, 0.02),
            delta_samples: 0,
            zbar_field: 0.02,
            hadamard_field: 0.1,
        }
    }
}

/// Keys in echo order.
pub const KEYS: &[&str] = &[
    "out",
    "workers",
    "seed",
    "svg",
    "tau",
    "lead_length",
    "threshold",
    "halo",
    "n_values",
    "l_values",
    "width_n",
    "dot_length_l",
    "spacing_d",
    "n_dots",
    "energy",
    "eta",
    "d_values",
    "epsilon",
    "onsite_u",
    "calibrate",
    "target_j1",
    "j1",
    "convention",
    "angle",
    "deltas",
    "delta_samples",
    "zbar_field",
    "hadamard_field",
];

impl ExperimentConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "out" => self.out = PathBuf::from(v),
            "workers" => self.workers = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "svg" => self.svg = parse_bool(key, v)?,
            "tau" => self.tau = parse_num(key, v)?,
            "lead_length" => self.lead_length = parse_num(key, v)?,
            "threshold" => self.threshold = parse_num(key, v)?,
            "halo" => self.halo = parse_num(key, v)?,
            "n_values" => self.n_values = parse_usize_list(key, v)?,
            "l_values" => self.l_values = parse_usize_list(key, v)?,
            "width_n" => self.width_n = parse_num(key, v)?,
            "dot_length_l" => self.dot_length_l = parse_num(key, v)?,
            "spacing_d" => self.spacing_d = parse_num(key, v)?,
            "n_dots" => self.n_dots = parse_num(key, v)?,
            "energy" => self.energy = parse_auto(key, v)?,
            "eta" => self.eta = parse_auto(key, v)?,
            "d_values" => self.d_values = parse_usize_list(key, v)?,
            "epsilon" => self.epsilon = parse_num(key, v)?,
            "onsite_u" => self.onsite_u = parse_num(key, v)?,
            "calibrate" => self.calibrate = parse_bool(key, v)?,
            "target_j1" => self.target_j1 = parse_num(key, v)?,
            "j1" => self.j1 = parse_num(key, v)?,
            "convention" => {
                self.convention = match v {
                    "sigma" => Convention::Sigma,
                    "spin" => Convention::Spin,
                    _ => return Err(bad(key, v, "expected sigma or spin")),
                }
            }
            "angle" => self.angle = parse_num(key, v)?,
            "deltas" => self.deltas = parse_float_list(key, v)?,
            "delta_samples" => self.delta_samples = parse_num(key, v)?,
            "zbar_field" => self.zbar_field = parse_num(key, v)?,
            "hadamard_field" => self.hadamard_field = parse_num(key, v)?,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown config key `{other}`"
                )))
            }
        }
        Ok(())
    }

    /// Applies `key=value` (or `key = value`).
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{pair}`")))?;
        self.set(k, v)
    }

    /// Applies every line of a config file on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.set_pair(line).map_err(|e| Error::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = ExperimentConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn get(&self, key: &str) -> Option<String> {
        let f = |x: f64| format!("{x:?}");
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let auto = |x: Option<f64>| x.map_or_else(|| "auto".to_string(), f);
        Some(match key {
            "out" => self.out.display().to_string(),
            "workers" => self.workers.to_string(),
            "seed" => self.seed.to_string(),
            "svg" => self.svg.to_string(),
            "tau" => f(self.tau),
            "lead_length" => self.lead_length.to_string(),
            "threshold" => f(self.threshold),
            "halo" => self.halo.to_string(),
            "n_values" => join(&self.n_values),
            "l_values" => join(&self.l_values),
            "width_n" => self.width_n.to_string(),
            "dot_length_l" => self.dot_length_l.to_string(),
            "spacing_d" => self.spacing_d.to_string(),
            "n_dots" => self.n_dots.to_string(),
            "energy" => auto(self.energy),
            "eta" => auto(self.eta),
            "d_values" => join(&self.d_values),
            "epsilon" => f(self.epsilon),
            "onsite_u" => f(self.onsite_u),
            "calibrate" => self.calibrate.to_string(),
            "target_j1" => f(self.target_j1),
            "j1" => f(self.j1),
            "convention" => self.convention.label().to_string(),
            "angle" => f(self.angle),
            "deltas" => self
                .deltas
                .iter()
                .map(|&x| f(x))
                .collect::<Vec<_>>()
                .join(","),
            "delta_samples" => self.delta_samples.to_string(),
            "zbar_field" => f(self.zbar_field),
            "hadamard_field" => f(self.hadamard_field),
            _ => return None,
        })
    }

    /// Every key, one per line. Round-trips through [`Self::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for k in KEYS {
            let _ = writeln!(out, "{k} = {}", self.get(k).expect("listed key"));
        }
        out
    }

    /// Output-independent echo: everything except `out` and `workers`, which
    /// must not change results.
    pub fn to_echo(&self) -> String {
        self.to_text()
            .lines()
            .filter(|l| !l.starts_with("out ") && !l.starts_with("workers "))
            .map(|l| format!("{l}\n"))
            .collect()
    }
}

fn bad(key: &str, value: &str, why: &str) -> Error {
    Error::InvalidParameter(format!("{key} = `{value}`: {why}"))
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| bad(key, v, "not a number"))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(bad(key, v, "expected true or false")),
    }
}

fn parse_auto(key: &str, v: &str) -> Result<Option<f64>> {
    if v == "auto" {
        Ok(None)
    } else {
        parse_num(key, v).map(Some)
    }
}

fn split_range(v: &str) -> Option<(&str, &str, Option<&str>)> {
    let (a, rest) = v.split_once("..")?;
    Some(match rest.split_once(':') {
        Some((b, s)) => (a, b, Some(s)),
        None => (a, rest, None),
    })
}

fn parse_usize_list(key: &str, v: &str) -> Result<Vec<usize>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b, s)) = split_range(v) {
        let a: usize = parse_num(key, a.trim())?;
        let b: usize = parse_num(key, b.trim())?;
        let s: usize = s.map_or(Ok(1), |s| parse_num(key, s.trim()))?;
        if s == 0 {
            return Err(bad(key, v, "step must be positive"));
        }
        return Ok((a..=b).step_by(s).collect());
    }
    v.split(',').map(|x| parse_num(key, x.trim())).collect()
}

fn parse_float_list(key: &str, v: &str) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b, s)) = split_range(v) {
        let a: f64 = parse_num(key, a.trim())?;
        let b: f64 = parse_num(key, b.trim())?;
        let s = s.ok_or_else(|| bad(key, v, "float ranges need a :step"))?;
        let s: f64 = parse_num(key, s.trim())?;
        if !(s > 0.0) {
            return Err(bad(key, v, "step must be positive"));
        }
        return Ok(float_range(a, b, s));
    }
    v.split(',').map(|x| parse_num(key, x.trim())).collect()
}

/// `a, a+s, …` up to `b`, with grid points snapped to the nearest multiple
/// of `1e-12` so `0.1 − 0.1` prints as zero.
pub fn float_range(a: f64, b: f64, s: f64) -> Vec<f64> {
    if b < a {
        return Vec::new();
    }
    let n = ((b - a) / s + 1e-9).floor() as usize + 1;
    (0..n)
        .map(|k| ((a + k as f64 * s) * 1e12).round() / 1e12)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = ExperimentConfig::default();
        c.set("convention", "spin").unwrap();
        c.set("energy", "0.15").unwrap();
        c.set("d_values", "8,12").unwrap();
        assert_eq!(ExperimentConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn ranges() {
        let c = ExperimentConfig::default();
        assert_eq!(c.deltas.len(), 11);
        assert_eq!(c.deltas[5], 0.0);
        assert_eq!(c.d_values, vec![8, 10, 12, 14, 16, 18, 20]);
        assert_eq!(parse_usize_list("k", "3..7").unwrap(), vec![3, 4, 5, 6, 7]);
        assert!(parse_usize_list("k", "").unwrap().is_empty());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match ExperimentConfig::from_text("# c\n\ntau = x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(ExperimentConfig::from_text("nope = 1").is_err());
    }
}
