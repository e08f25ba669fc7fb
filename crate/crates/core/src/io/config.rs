//! Run configuration: flat `[section]` blocks of `key = value` lines.
//!
//! ```text
//! [grid]
//! n = 32
//! box_length = 2pi
//!
//! [time]
//! dt = 2e-3
//! t_end = 0.5
//! output_every = 1
//! checkpoint_every = 0
//! viscosity = 1
//!
//! [initial_data]
//! kind = taylor_green
//! amplitude = 1
//!
//! [criteria]
//! q = 2, 3
//! alpha = 2.25
//! c_assumed = auto
//! c_assumed.q2 = 40
//! band_threshold = 1e-13
//!
//! [output]
//! dir = out
//! ```
//!
//! `#` starts a comment. Numbers accept a trailing `pi` (`2pi`, `0.5pi`) and
//! simple fractions (`-5/3`). Unknown sections and keys are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::criteria::{CriterionParams, DEFAULT_BAND_THRESHOLD};
use crate::error::{Error, Result};
use crate::initial::{InitialDataKind, InitialDataSpec};
use crate::solver::{ConstantChoice, IntegrationPlan};
use crate::spectral::Grid;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },

    #[error("line {line}: unknown key {key}")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: duplicate key {key}")]
    DuplicateKey { line: usize, key: String },

    #[error("line {line}: missing required key {key}")]
    MissingKey { line: usize, key: String },

    #[error("line {line}: {key} = {value} is out of range: {constraint}")]
    OutOfRange {
        line: usize,
        key: String,
        value: f64,
        constraint: String,
    },

    #[error("line {line}: invalid value for {key}: {message}")]
    InvalidValue {
        line: usize,
        key: String,
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: usize,
    pub box_length: f64,
    pub dt: f64,
    pub t_end: f64,
    pub output_every: usize,
    /// Steps between checkpoints; 0 disables.
    pub checkpoint_every: usize,
    pub viscosity: f64,
    pub initial_data: InitialDataSpec,
    pub criteria: Vec<CriterionParams>,
    /// Constant per criterion, same order as `criteria`.
    pub c_assumed: Vec<ConstantChoice>,
    /// Constant for the `L^2` deficit and band series.
    pub c_default: ConstantChoice,
    pub band_threshold: f64,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.box_length)
    }

    pub fn plan(&self) -> IntegrationPlan {
        IntegrationPlan {
            viscosity: self.viscosity,
            output_every: self.output_every,
            checkpoint_every: self.checkpoint_every,
            criteria: self.criteria.clone(),
            band_threshold: self.band_threshold,
            ..IntegrationPlan::new(self.dt, self.t_end)
        }
    }

    /// SHA-256 of the canonical JSON echo.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// Grid plus initial data, the input of `gen-ic`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldSpec {
    pub n: usize,
    pub box_length: f64,
    pub initial_data: InitialDataSpec,
}

impl FieldSpec {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.box_length)
    }
}

#[derive(Debug)]
struct Entry {
    line: usize,
    value: String,
    used: bool,
}

#[derive(Debug, Default)]
struct Sections {
    /// `section -> (header line, key -> entry)`
    map: BTreeMap<String, (usize, BTreeMap<String, Entry>)>,
    last_line: usize,
}

fn tokenize(text: &str, allowed: &[&str]) -> Result<Sections, ConfigError> {
    let mut out = Sections::default();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        out.last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    message: format!("unterminated section header {content:?}"),
                })?
                .trim()
                .to_string();
            if !allowed.contains(&name.as_str()) {
                return Err(ConfigError::UnknownSection { line, name });
            }
            if out.map.contains_key(&name) {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("section [{name}] appears twice"),
                });
            }
            out.map.insert(name.clone(), (line, BTreeMap::new()));
            current = Some(name);
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected key = value, found {content:?}"),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let section = current.as_ref().ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("key {key} appears before any section header"),
        })?;
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: "empty key".into(),
            });
        }
        let entries = &mut out.map.get_mut(section).unwrap().1;
        if entries.contains_key(&key) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: format!("{section}.{key}"),
            });
        }
        entries.insert(
            key,
            Entry {
                line,
                value,
                used: false,
            },
        );
    }
    Ok(out)
}

/// Parse a real number: decimal, `<x>pi`, `pi`, or `<a>/<b>`.
pub fn parse_real(text: &str) -> Option<f64> {
    let t = text.trim();
    if let Some(head) = t.strip_suffix("pi") {
        let head = head.trim().trim_end_matches('*').trim();
        let factor = match head {
            "" | "+" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().ok()?,
        };
        return Some(factor * std::f64::consts::PI);
    }
    if let Some((a, b)) = t.split_once('/') {
        let a: f64 = a.trim().parse().ok()?;
        let b: f64 = b.trim().parse().ok()?;
        return Some(a / b);
    }
    t.parse::<f64>().ok()
}

struct Reader {
    sections: Sections,
}

impl Reader {
    fn entry(&mut self, section: &str, key: &str) -> Option<(usize, String)> {
        let entries = &mut self.sections.map.get_mut(section)?.1;
        let e = entries.get_mut(key)?;
        e.used = true;
        Some((e.line, e.value.clone()))
    }

    fn missing(&self, section: &str, key: &str) -> ConfigError {
        let line = self
            .sections
            .map
            .get(section)
            .map_or(self.sections.last_line, |(l, _)| *l);
        ConfigError::MissingKey {
            line,
            key: format!("{section}.{key}"),
        }
    }

    fn real(&mut self, section: &str, key: &str) -> Result<Option<(usize, f64)>, ConfigError> {
        let Some((line, v)) = self.entry(section, key) else {
            return Ok(None);
        };
        let x = parse_real(&v).filter(|x| x.is_finite()).ok_or_else(|| ConfigError::InvalidValue {
            line,
            key: format!("{section}.{key}"),
            message: format!("{v:?} is not a finite number"),
        })?;
        Ok(Some((line, x)))
    }

    fn reals(&mut self, section: &str, key: &str) -> Result<Option<(usize, Vec<f64>)>, ConfigError> {
        let Some((line, v)) = self.entry(section, key) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for part in v.split(',') {
            let x = parse_real(part).filter(|x| x.is_finite()).ok_or_else(|| {
                ConfigError::InvalidValue {
                    line,
                    key: format!("{section}.{key}"),
                    message: format!("{:?} is not a finite number", part.trim()),
                }
            })?;
            out.push(x);
        }
        Ok(Some((line, out)))
    }

    fn fixed<const N: usize>(
        &mut self,
        section: &str,
        key: &str,
    ) -> Result<Option<(usize, [f64; N])>, ConfigError> {
        let Some((line, v)) = self.reals(section, key)? else {
            return Ok(None);
        };
        let arr: [f64; N] = v.try_into().map_err(|v: Vec<f64>| ConfigError::InvalidValue {
            line,
            key: format!("{section}.{key}"),
            message: format!("expected {N} values, found {}", v.len()),
        })?;
        Ok(Some((line, arr)))
    }

    fn integer(&mut self, section: &str, key: &str) -> Result<Option<(usize, i64)>, ConfigError> {
        let Some((line, v)) = self.entry(section, key) else {
            return Ok(None);
        };
        let x = v.trim().parse::<i64>().map_err(|_| ConfigError::InvalidValue {
            line,
            key: format!("{section}.{key}"),
            message: format!("{v:?} is not an integer"),
        })?;
        Ok(Some((line, x)))
    }

    fn count(&mut self, section: &str, key: &str, min: i64) -> Result<Option<usize>, ConfigError> {
        match self.integer(section, key)? {
            None => Ok(None),
            Some((line, x)) if x < min => Err(ConfigError::OutOfRange {
                line,
                key: format!("{section}.{key}"),
                value: x as f64,
                constraint: format!("{key} >= {min}"),
            }),
            Some((_, x)) => Ok(Some(x as usize)),
        }
    }

    /// Unread keys of `section` starting with `prefix`.
    fn keys_with_prefix(&self, section: &str, prefix: &str) -> Vec<(String, usize, String)> {
        self.sections
            .map
            .get(section)
            .map(|(_, entries)| {
                entries
                    .iter()
                    .filter(|(k, e)| !e.used && k.starts_with(prefix))
                    .map(|(k, e)| (k.clone(), e.line, e.value.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    fn mark_used(&mut self, section: &str, key: &str) {
        if let Some((_, entries)) = self.sections.map.get_mut(section) {
            if let Some(e) = entries.get_mut(key) {
                e.used = true;
            }
        }
    }

    fn reject_unused(&self) -> Result<(), ConfigError> {
        let mut first: Option<(usize, String)> = None;
        for (section, (_, entries)) in &self.sections.map {
            for (key, e) in entries {
                if !e.used && first.as_ref().is_none_or(|(l, _)| e.line < *l) {
                    first = Some((e.line, format!("{section}.{key}")));
                }
            }
        }
        match first {
            Some((line, key)) => Err(ConfigError::UnknownKey { line, key }),
            None => Ok(()),
        }
    }
}

fn out_of_range(line: usize, key: &str, err: Error) -> ConfigError {
    match err {
        Error::OutOfRange {
            value, constraint, ..
        } => ConfigError::OutOfRange {
            line,
            key: key.into(),
            value,
            constraint: constraint.into(),
        },
        other => ConfigError::InvalidValue {
            line,
            key: key.into(),
            message: other.to_string(),
        },
    }
}

fn read_grid(r: &mut Reader) -> Result<(usize, f64), ConfigError> {
    let (n_line, n) = r.integer("grid", "n")?.ok_or_else(|| r.missing("grid", "n"))?;
    let (l_line, l) = r.real("grid", "box_length")?.unwrap_or((0, 1.0));
    if n < 4 || n % 2 != 0 {
        return Err(ConfigError::OutOfRange {
            line: n_line,
            key: "grid.n".into(),
            value: n as f64,
            constraint: "n even and >= 4".into(),
        });
    }
    if l <= 0.0 {
        return Err(ConfigError::OutOfRange {
            line: l_line,
            key: "grid.box_length".into(),
            value: l,
            constraint: "box_length > 0".into(),
        });
    }
    Ok((n as usize, l))
}

fn read_initial_data(r: &mut Reader) -> Result<InitialDataSpec, ConfigError> {
    const S: &str = "initial_data";
    let (kind_line, kind) = r.entry(S, "kind").ok_or_else(|| r.missing(S, "kind"))?;
    let kind: InitialDataKind = kind.parse().map_err(|message| ConfigError::InvalidValue {
        line: kind_line,
        key: "initial_data.kind".into(),
        message,
    })?;
    let mut spec = InitialDataSpec {
        kind,
        ..InitialDataSpec::default()
    };
    if let Some((line, a)) = r.real(S, "amplitude")? {
        if a <= 0.0 {
            return Err(ConfigError::OutOfRange {
                line,
                key: "initial_data.amplitude".into(),
                value: a,
                constraint: "amplitude > 0".into(),
            });
        }
        spec.amplitude = a;
    }
    match r.fixed::<2>(S, "band")? {
        Some((_, band)) => spec.band = band,
        None if kind == InitialDataKind::RandomBand => return Err(r.missing(S, "band")),
        None => {}
    }
    if let Some((_, slope)) = r.real(S, "spectral_slope")? {
        spec.spectral_slope = slope;
    }
    if let Some((line, seed)) = r.integer(S, "seed")? {
        spec.seed = u64::try_from(seed).map_err(|_| ConfigError::OutOfRange {
            line,
            key: "initial_data.seed".into(),
            value: seed as f64,
            constraint: "seed >= 0".into(),
        })?;
    }
    match r.entry(S, "file") {
        Some((_, f)) => spec.file = Some(PathBuf::from(f)),
        None if kind == InitialDataKind::FromFile => return Err(r.missing(S, "file")),
        None => {}
    }
    if let Some((_, abc)) = r.fixed::<3>(S, "abc")? {
        spec.abc = abc;
    }
    if let Some((line, k0)) = r.fixed::<3>(S, "k0")? {
        if k0.iter().any(|k| k.fract() != 0.0) {
            return Err(ConfigError::InvalidValue {
                line,
                key: "initial_data.k0".into(),
                message: "wavevector components must be integers".into(),
            });
        }
        spec.k0 = k0.map(|k| k as i64);
    }
    if let Some((_, pol)) = r.fixed::<3>(S, "polarization")? {
        spec.polarization = pol;
    }
    Ok(spec)
}

fn read_constant(line: usize, key: &str, v: &str) -> Result<ConstantChoice, ConfigError> {
    if v.trim() == "auto" {
        return Ok(ConstantChoice::Auto);
    }
    match parse_real(v) {
        Some(c) if c.is_finite() && c >= 0.0 => Ok(ConstantChoice::Fixed(c)),
        Some(c) => Err(ConfigError::OutOfRange {
            line,
            key: key.into(),
            value: c,
            constraint: "c_assumed >= 0 or auto".into(),
        }),
        None => Err(ConfigError::InvalidValue {
            line,
            key: key.into(),
            message: format!("{v:?} is neither a number nor auto"),
        }),
    }
}

const RUN_SECTIONS: [&str; 5] = ["grid", "time", "initial_data", "criteria", "output"];

/// Parse and validate a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut r = Reader {
        sections: tokenize(text, &RUN_SECTIONS)?,
    };
    let (n, box_length) = read_grid(&mut r)?;

    let (dt_line, dt) = r.real("time", "dt")?.ok_or_else(|| r.missing("time", "dt"))?;
    if dt <= 0.0 {
        return Err(ConfigError::OutOfRange {
            line: dt_line,
            key: "time.dt".into(),
            value: dt,
            constraint: "dt > 0".into(),
        });
    }
    let (t_line, t_end) = r
        .real("time", "t_end")?
        .ok_or_else(|| r.missing("time", "t_end"))?;
    if t_end < 0.0 {
        return Err(ConfigError::OutOfRange {
            line: t_line,
            key: "time.t_end".into(),
            value: t_end,
            constraint: "t_end >= 0".into(),
        });
    }
    let output_every = r.count("time", "output_every", 1)?.unwrap_or(1);
    let checkpoint_every = r.count("time", "checkpoint_every", 0)?.unwrap_or(0);
    let viscosity = match r.real("time", "viscosity")? {
        Some((line, v)) if v < 0.0 => {
            return Err(ConfigError::OutOfRange {
                line,
                key: "time.viscosity".into(),
                value: v,
                constraint: "viscosity >= 0".into(),
            })
        }
        Some((_, v)) => v,
        None => 1.0,
    };

    let initial_data = read_initial_data(&mut r)?;

    let mut criteria = Vec::new();
    if let Some((line, qs)) = r.reals("criteria", "q")? {
        for q in qs {
            criteria.push(CriterionParams::from_q(q).map_err(|e| out_of_range(line, "criteria.q", e))?);
        }
    }
    if let Some((line, alphas)) = r.reals("criteria", "alpha")? {
        for a in alphas {
            criteria.push(
                CriterionParams::from_alpha(a).map_err(|e| out_of_range(line, "criteria.alpha", e))?,
            );
        }
    }
    let c_default = match r.entry("criteria", "c_assumed") {
        Some((line, v)) => read_constant(line, "criteria.c_assumed", &v)?,
        None => ConstantChoice::Auto,
    };
    let mut c_assumed = vec![c_default; criteria.len()];
    for (key, line, value) in r.keys_with_prefix("criteria", "c_assumed.") {
        let label = &key["c_assumed.".len()..];
        let Some(i) = criteria.iter().position(|c| c.label() == label) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: format!("criteria.{key}"),
            });
        };
        c_assumed[i] = read_constant(line, &format!("criteria.{key}"), &value)?;
        r.mark_used("criteria", &key);
    }
    let band_threshold = match r.real("criteria", "band_threshold")? {
        Some((line, v)) if v < 0.0 => {
            return Err(ConfigError::OutOfRange {
                line,
                key: "criteria.band_threshold".into(),
                value: v,
                constraint: "band_threshold >= 0".into(),
            })
        }
        Some((_, v)) => v,
        None => DEFAULT_BAND_THRESHOLD,
    };

    let output_dir = r
        .entry("output", "dir")
        .map_or_else(|| PathBuf::from("output"), |(_, d)| PathBuf::from(d));

    r.reject_unused()?;
    Ok(RunConfig {
        n,
        box_length,
        dt,
        t_end,
        output_every,
        checkpoint_every,
        viscosity,
        initial_data,
        criteria,
        c_assumed,
        c_default,
        band_threshold,
        output_dir,
    })
}

/// Parse a `[grid]` + `[initial_data]` field description.
pub fn parse_field_spec(text: &str) -> Result<FieldSpec, ConfigError> {
    let mut r = Reader {
        sections: tokenize(text, &["grid", "initial_data"])?,
    };
    let (n, box_length) = read_grid(&mut r)?;
    let initial_data = read_initial_data(&mut r)?;
    r.reject_unused()?;
    Ok(FieldSpec {
        n,
        box_length,
        initial_data,
    })
}

/// Resolve a relative `initial_data.file` against the directory of the file
/// it was read from.
pub fn resolve_relative(spec: &mut InitialDataSpec, base: &Path) {
    if let Some(f) = &spec.file {
        if f.is_relative() {
            spec.file = Some(base.join(f));
        }
    }
}

/// Read and parse a run configuration from disk.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = parse_config(&text)?;
    if let Some(dir) = path.parent() {
        resolve_relative(&mut cfg.initial_data, dir);
    }
    Ok(cfg)
}

/// Read and parse a field description from disk.
pub fn load_field_spec(path: &Path) -> Result<FieldSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut spec = parse_field_spec(&text)?;
    if let Some(dir) = path.parent() {
        resolve_relative(&mut spec.initial_data, dir);
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::Selection;

    const MINIMAL: &str = "[grid]\nn = 16\n[time]\ndt = 1e-3\nt_end = 0.1\n[initial_data]\nkind = taylor_green\n";

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.n, 16);
        assert_eq!(c.box_length, 1.0);
        assert_eq!(c.viscosity, 1.0);
        assert_eq!(c.band_threshold, 1e-13);
        assert_eq!(c.output_every, 1);
        assert_eq!(c.checkpoint_every, 0);
        assert!(c.criteria.is_empty());
        assert_eq!(c.c_default, ConstantChoice::Auto);
        assert_eq!(c.output_dir, PathBuf::from("output"));
    }

    #[test]
    fn q_below_range_cites_constraint() {
        let text = format!("{MINIMAL}[criteria]\nq = 1.1\n");
        let e = parse_config(&text).unwrap_err();
        assert!(matches!(e, ConfigError::OutOfRange { line: 9, .. }), "{e:?}");
        assert!(e.to_string().contains("6/5 < q <= 3"), "{e}");
    }

    #[test]
    fn alpha_five_halves_derives_p_one() {
        let text = format!("{MINIMAL}[criteria]\nalpha = 2.5\n");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.criteria.len(), 1);
        assert_eq!(c.criteria[0].selection, Selection::Alpha);
        assert_eq!(c.criteria[0].p, 1.0);
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = "[grid]\nn = 16\nbox_lenght = 1\n[time]\ndt = 1e-3\nt_end = 0.1\n[initial_data]\nkind = abc\n";
        let e = parse_config(text).unwrap_err();
        assert_eq!(
            e,
            ConfigError::UnknownKey {
                line: 3,
                key: "grid.box_lenght".into()
            }
        );
    }

    #[test]
    fn missing_key_reports_section_line() {
        let text = "[grid]\nn = 16\n[time]\nt_end = 0.1\n[initial_data]\nkind = abc\n";
        let e = parse_config(text).unwrap_err();
        assert_eq!(
            e,
            ConfigError::MissingKey {
                line: 3,
                key: "time.dt".into()
            }
        );
    }

    #[test]
    fn ranges_and_syntax() {
        let bad_dt = MINIMAL.replace("dt = 1e-3", "dt = 0");
        assert!(matches!(
            parse_config(&bad_dt),
            Err(ConfigError::OutOfRange { line: 4, .. })
        ));
        let bad_every = format!("{MINIMAL}[output]\n").replace("t_end = 0.1", "t_end = 0.1\noutput_every = 0");
        assert!(matches!(
            parse_config(&bad_every),
            Err(ConfigError::OutOfRange { line: 6, .. })
        ));
        let bad_section = format!("{MINIMAL}[solver]\n");
        assert!(matches!(
            parse_config(&bad_section),
            Err(ConfigError::UnknownSection { line: 8, .. })
        ));
        let dup = MINIMAL.replace("n = 16", "n = 16\nn = 8");
        assert!(matches!(parse_config(&dup), Err(ConfigError::DuplicateKey { line: 3, .. })));
        assert!(matches!(
            parse_config("n = 3\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn full_config_parses() {
        let text = "# comment\n[grid]\nn = 32\nbox_length = 2pi\n[time]\ndt = 2e-3\nt_end = 0.5\noutput_every = 5\ncheckpoint_every = 50\nviscosity = 0.5\n\
[initial_data]\nkind = random_band\nband = 2, 6\nspectral_slope = -5/3\nseed = 7\namplitude = 3\n\
[criteria]\nq = 2, 3\nalpha = 2.25\nc_assumed = 4\nc_assumed.q3 = auto\nband_threshold = 1e-10\n[output]\ndir = runs/a  # trailing\n";
        let c = parse_config(text).unwrap();
        assert!((c.box_length - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(c.initial_data.band, [2.0, 6.0]);
        assert!((c.initial_data.spectral_slope + 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.initial_data.seed, 7);
        assert_eq!(c.criteria.len(), 3);
        assert_eq!(
            c.c_assumed,
            vec![
                ConstantChoice::Fixed(4.0),
                ConstantChoice::Auto,
                ConstantChoice::Fixed(4.0)
            ]
        );
        assert_eq!(c.output_dir, PathBuf::from("runs/a"));
        let plan = c.plan();
        assert_eq!(plan.output_every, 5);
        assert_eq!(plan.viscosity, 0.5);
    }

    #[test]
    fn per_criterion_constant_needs_known_label() {
        let text = format!("{MINIMAL}[criteria]\nq = 2\nc_assumed.q3 = 1\n");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::UnknownKey { line: 10, .. })
        ));
    }

    #[test]
    fn kind_specific_keys_required() {
        let text = MINIMAL.replace("taylor_green", "random_band");
        assert!(matches!(parse_config(&text), Err(ConfigError::MissingKey { line: 6, .. })));
    }

    #[test]
    fn hash_tracks_content() {
        let a = parse_config(MINIMAL).unwrap();
        let b = parse_config(&MINIMAL.replace("t_end = 0.1", "t_end = 0.2")).unwrap();
        assert_eq!(a.hash(), parse_config(MINIMAL).unwrap().hash());
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn field_spec_rejects_run_sections() {
        let ok = "[grid]\nn = 8\n[initial_data]\nkind = single_mode\nk0 = 1, 0, 0\npolarization = 0, 0, 1\n";
        let s = parse_field_spec(ok).unwrap();
        assert_eq!(s.initial_data.k0, [1, 0, 0]);
        assert!(parse_field_spec(&format!("{ok}[time]\n")).is_err());
    }

    #[test]
    fn real_forms() {
        assert_eq!(parse_real("2"), Some(2.0));
        assert_eq!(parse_real("pi"), Some(std::f64::consts::PI));
        assert_eq!(parse_real("2*pi"), Some(std::f64::consts::TAU));
        assert_eq!(parse_real("-1/4"), Some(-0.25));
        assert_eq!(parse_real("x"), None);
    }
}
