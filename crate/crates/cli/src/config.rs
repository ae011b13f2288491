// SPDX-License-Identifier: Apache-2.0

//! Run configuration: defaults, flat `key = value` files and flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use omsqueeze::floquet::{FloquetOptions, InitialCondition};
use omsqueeze::optimize::{Backend, RatioSearch, SweepBase, ThirdTone};
use omsqueeze::rwa::optimal_ratio_analytic;
use omsqueeze::Params;

use crate::CliError;

pub const OUT_DIR_ENV: &str = "OMSQUEEZE_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "out";

/// Every accepted key with its default and help text. Rates are in units of κ.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("coop", "1e4", "cooperativity for single-point commands"),
    (
        "ratio",
        "auto",
        "G+/G- for single-point commands; `auto` uses the large-cooperativity optimum",
    ),
    ("nth", "10", "thermal occupancy of the mechanical bath"),
    ("gamma-ratio", "1e-4", "mechanical damping Γ_M/κ"),
    (
        "kappa-over-omega",
        "0",
        "κ/Ω; 0 selects the rotating-wave limit",
    ),
    ("third-tone", "off", "`off` or `match` (G3 = G+)"),
    ("backend", "rwa", "`rwa`, `lindblad` or `floquet`"),
    ("coop-start", "10", "first cooperativity of sweep grids"),
    ("coop-stop", "1e8", "last cooperativity of sweep grids"),
    ("coop-count", "29", "number of cooperativities"),
    ("coop-scale", "log", "`log` or `linear`"),
    ("ratio-start", "0", "first ratio of ratio scans"),
    ("ratio-stop", "0.999", "last ratio of ratio scans"),
    ("ratio-count", "1000", "number of ratios"),
    ("ratio-scale", "linear", "`log` or `linear`"),
    (
        "omega-start",
        "-4",
        "first frequency (units of κ) of spectra",
    ),
    ("omega-stop", "4", "last frequency of spectra"),
    ("omega-count", "801", "number of frequencies"),
    (
        "search-points",
        "200",
        "coarse ratio-scan points of the optimizer",
    ),
    (
        "search-lower",
        "1e-3",
        "smallest ratio the optimizer considers",
    ),
    (
        "search-upper",
        "0.9999999",
        "largest ratio the optimizer considers",
    ),
    ("search-tol", "1e-6", "final ratio bracket of the optimizer"),
    (
        "floquet-tol",
        "1e-8",
        "relative change of the period average at convergence",
    ),
    ("steps-per-period", "256", "RK4 steps per drive period π/Ω"),
    (
        "max-periods",
        "100000",
        "period budget of the periodic solver",
    ),
    (
        "initial",
        "shooting",
        "`shooting` or `rwa` start of the periodic solver",
    ),
    ("jobs", "1", "worker threads for sweeps; 0 uses every core"),
    (
        "out-dir",
        "",
        "output directory (defaults to $OMSQUEEZE_OUT_DIR, then `out`)",
    ),
];

pub fn is_known(key: &str) -> bool {
    KEYS.iter().any(|(k, _, _)| *k == key)
}

/// Accepts `snake_case` spellings in files.
fn normalize(key: &str) -> String {
    key.trim().replace('_', "-")
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::input(format!(
                "config line {}: expected `key = value`",
                lineno + 1
            )));
        };
        let key = normalize(k);
        if !is_known(&key) {
            return Err(CliError::input(format!(
                "config line {}: unknown key `{key}`",
                lineno + 1
            )));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::input(format!(
                "config line {}: duplicate key `{key}`",
                lineno + 1
            )));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    Linear,
    Log,
}

/// Resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: String,
    values: BTreeMap<String, String>,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Flags override file keys, which override defaults.
    pub fn resolve(
        subcommand: &str,
        file: Option<&Path>,
        flags: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<String, String> = KEYS
            .iter()
            .map(|(k, d, _)| (k.to_string(), d.to_string()))
            .collect();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::input(format!("cannot read config {}: {e}", path.display()))
            })?;
            values.extend(parse_config_text(&text)?);
        }
        values.extend(flags);
        let out_dir = match values.get("out-dir").map(String::as_str) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => std::env::var_os(OUT_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR)),
        };
        values.insert("out-dir".into(), out_dir.display().to_string());
        Ok(Self {
            subcommand: subcommand.to_string(),
            values,
            out_dir,
        })
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn text(&self, key: &str) -> &str {
        self.values
            .get(key)
            .map(String::as_str)
            .expect("key in table")
    }

    pub fn number(&self, key: &str) -> Result<f64, CliError> {
        let raw = self.text(key);
        raw.parse::<f64>()
            .ok()
            .filter(|x| !x.is_nan())
            .ok_or_else(|| CliError::input(format!("{key}: `{raw}` is not a number")))
    }

    pub fn count(&self, key: &str) -> Result<usize, CliError> {
        let raw = self.text(key);
        raw.parse::<usize>()
            .map_err(|_| CliError::input(format!("{key}: `{raw}` is not a non-negative integer")))
    }

    fn choice<'a>(&'a self, key: &str, allowed: &[&str]) -> Result<&'a str, CliError> {
        let raw = self.text(key);
        if allowed.contains(&raw) {
            Ok(raw)
        } else {
            Err(CliError::input(format!(
                "{key}: `{raw}` is not one of {}",
                allowed.join(", ")
            )))
        }
    }

    pub fn jobs(&self) -> Result<usize, CliError> {
        self.count("jobs")
    }

    /// `{prefix}-start`, `-stop`, `-count`, `-scale` as a list of nodes.
    pub fn grid(&self, prefix: &str) -> Result<Vec<f64>, CliError> {
        let start = self.number(&format!("{prefix}-start"))?;
        let stop = self.number(&format!("{prefix}-stop"))?;
        let n = self.count(&format!("{prefix}-count"))?;
        let scale = match self.choice(&format!("{prefix}-scale"), &["linear", "log"])? {
            "log" => Scale::Log,
            _ => Scale::Linear,
        };
        build_grid(prefix, start, stop, n, scale)
    }

    pub fn omega_grid(&self) -> Result<Vec<f64>, CliError> {
        let start = self.number("omega-start")?;
        let stop = self.number("omega-stop")?;
        let n = self.count("omega-count")?;
        build_grid("omega", start, stop, n, Scale::Linear)
    }

    pub fn base(&self) -> Result<SweepBase<f64>, CliError> {
        let gamma = self.number("gamma-ratio")?;
        let n_th = self.number("nth")?;
        let k_over_w = self.number("kappa-over-omega")?;
        if !(k_over_w >= 0.0) || !k_over_w.is_finite() {
            return Err(CliError::input(format!(
                "kappa-over-omega must be >= 0, got {k_over_w}"
            )));
        }
        let mut base = SweepBase::dimensionless(gamma, n_th, k_over_w);
        base.third_tone = match self.choice("third-tone", &["off", "match"])? {
            "match" => ThirdTone::MatchBlue,
            _ => ThirdTone::Off,
        };
        // Validates every rate through the model before any dispatch.
        base.params(1.0, 0.0)?;
        Ok(base)
    }

    pub fn is_bad_cavity(&self) -> Result<bool, CliError> {
        Ok(self.number("kappa-over-omega")? > 0.0)
    }

    /// Ratio for single-point commands.
    pub fn ratio(&self, coop: f64, n_th: f64) -> Result<f64, CliError> {
        if self.text("ratio") == "auto" {
            let q = optimal_ratio_analytic(coop, n_th).ratio;
            if !(q > 0.0) {
                return Err(CliError::input(format!(
                    "ratio=auto has no positive large-cooperativity optimum at coop={coop}; pass --ratio"
                )));
            }
            return Ok(q);
        }
        self.number("ratio")
    }

    pub fn point(&self) -> Result<(SweepBase<f64>, Params), CliError> {
        let base = self.base()?;
        let coop = self.number("coop")?;
        base.params(coop, 0.0)?;
        let p = base.params(coop, self.ratio(coop, base.n_th)?)?;
        Ok((base, p))
    }

    pub fn search(&self) -> Result<RatioSearch<f64>, CliError> {
        let search = RatioSearch {
            lower: self.number("search-lower")?,
            upper: self.number("search-upper")?,
            grid_points: self.count("search-points")?,
            tolerance: self.number("search-tol")?,
        };
        search.validate()?;
        Ok(search)
    }

    pub fn floquet_options(&self) -> Result<FloquetOptions<f64>, CliError> {
        let options = FloquetOptions {
            tolerance: self.number("floquet-tol")?,
            max_periods: self.count("max-periods")?,
            steps_per_period: self.count("steps-per-period")?,
            initial: match self.choice("initial", &["shooting", "rwa"])? {
                "rwa" => InitialCondition::Rwa,
                _ => InitialCondition::Shooting,
            },
            ..FloquetOptions::default()
        };
        if !(options.tolerance > 0.0) || options.max_periods == 0 || options.steps_per_period == 0 {
            return Err(CliError::input(
                "floquet-tol, max-periods and steps-per-period must be positive",
            ));
        }
        Ok(options)
    }

    pub fn backend(&self) -> Result<Backend<f64>, CliError> {
        Ok(
            match self.choice("backend", &["rwa", "lindblad", "floquet"])? {
                "lindblad" => Backend::Lindblad,
                "floquet" => Backend::Floquet(self.floquet_options()?),
                _ => Backend::Rwa,
            },
        )
    }
}

fn build_grid(
    name: &str,
    start: f64,
    stop: f64,
    n: usize,
    scale: Scale,
) -> Result<Vec<f64>, CliError> {
    if n == 0 || !start.is_finite() || !stop.is_finite() || start > stop || (n > 1 && start == stop)
    {
        return Err(CliError::input(format!(
            "{name} grid needs finite start < stop and count >= 1 (got {start}..{stop}, {n})"
        )));
    }
    if scale == Scale::Log && !(start > 0.0) {
        return Err(CliError::input(format!("{name} log grid needs start > 0")));
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|k| {
            let t = k as f64 / last;
            match scale {
                Scale::Linear => start + (stop - start) * t,
                Scale::Log => (start.ln() + (stop.ln() - start.ln()) * t).exp(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_and_comments() {
        let map = parse_config_text("# sweep\ncoop = 1e5\n gamma_ratio=1e-3 # inline\n\n").unwrap();
        assert_eq!(map["coop"], "1e5");
        assert_eq!(map["gamma-ratio"], "1e-3");
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        assert!(parse_config_text("cooperativity = 3").is_err());
        assert!(parse_config_text("coop = 1\ncoop = 2").is_err());
        assert!(parse_config_text("coop 1").is_err());
    }

    #[test]
    fn flags_beat_file_beat_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "nth = 3\ncoop = 1e5\n").unwrap();
        let flags = BTreeMap::from([("nth".to_string(), "7".to_string())]);
        let cfg = RunConfig::resolve("steady", Some(&path), flags).unwrap();
        assert_eq!(cfg.number("nth").unwrap(), 7.0);
        assert_eq!(cfg.number("coop").unwrap(), 1e5);
        assert_eq!(cfg.number("gamma-ratio").unwrap(), 1e-4);
    }

    #[test]
    fn log_grid_hits_endpoints() {
        let g = build_grid("coop", 10.0, 1e8, 29, Scale::Log).unwrap();
        assert_eq!(g.len(), 29);
        assert!((g[4] - 100.0).abs() < 1e-9);
        assert!((g[28] - 1e8).abs() < 1e-4);
        assert!(build_grid("coop", 0.0, 1.0, 3, Scale::Log).is_err());
        assert!(build_grid("x", 1.0, 0.0, 3, Scale::Linear).is_err());
    }
}
