//! Run configuration: command-line flags layered over a flat TOML or JSON file.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rosenmorse_core::classical::Integrator;
use rosenmorse_core::systems::{interior_grid, DEFAULT_CUTOFF};
use rosenmorse_core::{SystemParams, Variant};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Rmii,
    Rmi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorArg {
    Leapfrog,
    Yoshida4,
    Yoshida6,
    Yoshida8,
}

impl From<IntegratorArg> for Integrator {
    fn from(a: IntegratorArg) -> Self {
        match a {
            IntegratorArg::Leapfrog => Integrator::Leapfrog,
            IntegratorArg::Yoshida4 => Integrator::Yoshida4,
            IntegratorArg::Yoshida6 => Integrator::Yoshida6,
            IntegratorArg::Yoshida8 => Integrator::Yoshida8,
        }
    }
}

/// Every tunable, all optional so that flags and file values can be layered.
/// Grids are strings: `lo:hi:step` (inclusive) or a comma-separated list.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    #[arg(long, global = true, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Seed degree of the type III extension (RMII only).
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Excitation index (eigenstate) or number of levels (spectrum, RMI).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Half-width L of the RMII working domain.
    #[arg(long, global = true)]
    pub cutoff: Option<f64>,
    /// Highest derivative written by `eigenstate`.
    #[arg(long, global = true)]
    pub jet_order: Option<usize>,
    #[arg(long, global = true)]
    pub panels: Option<usize>,
    #[arg(long, global = true)]
    pub truncation_tol: Option<f64>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub t_end: Option<f64>,
    #[arg(long, global = true)]
    pub sample_every: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub integrator: Option<IntegratorArg>,
    /// Seed for the random test jets of `susy-verify`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

macro_rules! layer {
    ($dst:ident, $src:ident; $($f:ident),*) => { $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )* };
}

impl Settings {
    /// Fills every unset field from `lower`.
    pub fn over(mut self, lower: &Settings) -> Settings {
        layer!(self, lower; variant, lambda, s, k, n, w, t, x, cutoff, jet_order, panels,
               truncation_tol, dt, t_end, sample_every, integrator, seed, output, format);
        self
    }

    /// Reads a flat TOML or JSON document. A JSON run record is accepted as well;
    /// its `config` object is used.
    pub fn load(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        let bad = |e: &dyn fmt::Display| CliError::Validation(format!("{}: {e}", path.display()));
        let json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        if json {
            let mut v: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e))?;
            if let Some(inner) = v.get_mut("config") {
                v = inner.take();
            }
            serde_json::from_value(v).map_err(|e| bad(&e))
        } else {
            toml::from_str(&text).map_err(|e| bad(&e))
        }
    }
}

/// Parses `lo:hi:step` (inclusive, monotone) or `a,b,c` (strictly increasing).
pub fn parse_grid(name: &str, spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Validation(format!("--{name} {spec:?}: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.len() {
        1 => spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        3 => {
            let (lo, hi, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(step > 0.0) || !(hi >= lo) {
                return Err(bad("need lo <= hi and step > 0"));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            if count > 10_000_000 {
                return Err(bad("too many points"));
            }
            (0..count).map(|i| lo + i as f64 * step).collect()
        }
        _ => return Err(bad("expected lo:hi:step or a comma-separated list")),
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("empty or non-finite"));
    }
    if values.windows(2).any(|p| p[1] <= p[0]) {
        return Err(bad("values must increase"));
    }
    Ok(values)
}

/// Validated configuration for one command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: SystemParams,
    pub k: Option<usize>,
    pub n: usize,
    pub w: Vec<f64>,
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub domain: (f64, f64),
    pub jet_order: usize,
    pub panels: usize,
    pub truncation_tol: f64,
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
    pub integrator: Integrator,
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    /// The fully resolved settings, echoed into JSON output.
    pub settings: Settings,
}

/// Per-command defaults for the grids and the level count.
#[derive(Clone, Copy, Debug)]
pub struct Defaults {
    pub w: &'static str,
    pub t: &'static str,
    pub n: usize,
}

fn shortest(v: f64) -> String {
    format!("{v:?}")
}

impl RunConfig {
    pub fn resolve(s: &Settings, d: Defaults) -> Result<RunConfig, CliError> {
        let mut s = s.clone();
        let variant = *s.variant.get_or_insert(VariantArg::Rmii);
        let (l0, s0) = match variant {
            VariantArg::Rmii => (16.0, 20.0),
            VariantArg::Rmi => (20.0, 2.0),
        };
        let lambda = *s.lambda.get_or_insert(l0);
        let sv = *s.s.get_or_insert(s0);
        let params = match variant {
            VariantArg::Rmii => SystemParams::new(Variant::Rmii, lambda, sv),
            VariantArg::Rmi => SystemParams::new(Variant::Rmi, lambda, sv),
        }
        .map_err(|e| CliError::Validation(e.to_string()))?;
        if s.k.is_some() && variant == VariantArg::Rmi {
            return Err(CliError::Validation("--k (type III extension) requires --variant rmii".into()));
        }
        let cutoff = *s.cutoff.get_or_insert(DEFAULT_CUTOFF);
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(CliError::Validation(format!("--cutoff must be positive, got {cutoff}")));
        }
        let domain = match variant {
            VariantArg::Rmii => (-cutoff, cutoff),
            VariantArg::Rmi => params.domain(),
        };
        let n = *s.n.get_or_insert(d.n);
        let w = parse_grid("w", s.w.get_or_insert_with(|| d.w.to_string()))?;
        if w.iter().any(|&v| v < 0.0) {
            return Err(CliError::Validation("--w values must be nonnegative".into()));
        }
        let t = parse_grid("t", s.t.get_or_insert_with(|| d.t.to_string()))?;
        let default_x = || {
            let xs = interior_grid(domain.0, domain.1, 800);
            let step = (domain.1 - domain.0) / 800.0;
            format!("{}:{}:{}", shortest(xs[0]), shortest(xs[799]), shortest(step))
        };
        let x = parse_grid("x", s.x.get_or_insert_with(default_x))?;
        if variant == VariantArg::Rmi && x.iter().any(|&v| v <= domain.0 || v >= domain.1) {
            return Err(CliError::Validation("--x must lie strictly inside (0, pi) for rmi".into()));
        }
        let panels = *s.panels.get_or_insert(rosenmorse_core::numerics::quadrature::DEFAULT_PANELS);
        let truncation_tol = *s.truncation_tol.get_or_insert(rosenmorse_core::coherent::DEFAULT_TRUNCATION_TOL);
        let dt = *s.dt.get_or_insert(1e-4);
        let t_end = *s.t_end.get_or_insert(3.0);
        if panels == 0 || !(truncation_tol > 0.0) || !(dt > 0.0) || !(t_end >= 0.0) {
            return Err(CliError::Validation("panels, truncation_tol and dt must be positive".into()));
        }
        let cfg = RunConfig {
            params,
            k: s.k,
            n,
            w,
            t,
            x,
            domain,
            jet_order: *s.jet_order.get_or_insert(0),
            panels,
            truncation_tol,
            dt,
            t_end,
            sample_every: (*s.sample_every.get_or_insert(100)).max(1),
            integrator: (*s.integrator.get_or_insert(IntegratorArg::Yoshida8)).into(),
            seed: *s.seed.get_or_insert(1),
            format: *s.format.get_or_insert_with(|| match &s.output {
                Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
                _ => Format::Csv,
            }),
            output: s.output.clone(),
            settings: s,
        };
        Ok(cfg)
    }

    pub fn quadrature(&self) -> rosenmorse_core::QuadratureGrid {
        rosenmorse_core::QuadratureGrid::new(self.domain.0, self.domain.1, self.panels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(parse_grid("w", "0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("w", "0.5,1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_grid("w", "0:15:0.25").unwrap().len(), 61);
        for bad in ["1:0:0.1", "0:1:0", "2,1", "a", "0:1", ""] {
            assert!(parse_grid("w", bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn flags_override_file() {
        let flags = Settings { s: Some(3.0), ..Default::default() };
        let file = Settings { s: Some(5.0), lambda: Some(1.0), ..Default::default() };
        let m = flags.over(&file);
        assert_eq!((m.s, m.lambda), (Some(3.0), Some(1.0)));
    }

    #[test]
    fn resolution_rules() {
        let d = Defaults { w: "1", t: "0", n: 0 };
        let k_on_rmi = Settings { variant: Some(VariantArg::Rmi), k: Some(2), ..Default::default() };
        assert!(matches!(RunConfig::resolve(&k_on_rmi, d), Err(CliError::Validation(_))));
        let bad_lambda = Settings { lambda: Some(500.0), ..Default::default() };
        assert!(RunConfig::resolve(&bad_lambda, d).is_err());
        let cfg = RunConfig::resolve(&Settings::default(), d).unwrap();
        assert_eq!(cfg.x.len(), 800);
        let again = RunConfig::resolve(&cfg.settings, d).unwrap();
        assert_eq!(again.x, cfg.x);
        assert_eq!(again.settings, cfg.settings);
    }
}
