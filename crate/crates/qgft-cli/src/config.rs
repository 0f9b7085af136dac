//! Experiment configuration: a declarative JSON file plus flag overrides;
//! flags win. Unknown fields and out-of-range values are schema errors.

use std::path::PathBuf;

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qgft_core::finite_group::GroupBackend;
use qgft_core::suq2::{Suq2Backend, Suq2Params};
use qgft_core::HalfInt;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub orthogonality: f64,
    pub plancherel: f64,
    pub hausdorff_young: f64,
    pub convolution: f64,
    pub module_action: f64,
    /// Relative slope tolerance, as a fraction of |ln q|.
    pub zsweep_slope: f64,
    pub zsweep_const: f64,
    pub imz_invariance: f64,
    pub transport: f64,
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            orthogonality: 1e-8,
            plancherel: 1e-8,
            hausdorff_young: 1e-8,
            convolution: 1e-12,
            module_action: 1e-8,
            zsweep_slope: 0.01,
            zsweep_const: 1e-8,
            imz_invariance: 1e-10,
            transport: 1e-10,
            oracle: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// "suq2", "cyclic" or "s3".
    pub backend: String,
    pub cyclic_order: usize,
    pub q: f64,
    pub trunc_n: usize,
    /// Half-integer tower cutoff L (must be a multiple of 0.5).
    pub tower_l: f64,
    /// Complex grid entries like "-0.5", "0.25-1i", "0.7i".
    pub z_grid: Vec<String>,
    pub p_grid: Vec<f64>,
    pub n_range: Vec<u32>,
    pub seed: u64,
    pub samples: usize,
    pub out_dir: String,
    pub quadrature_points: usize,
    pub tolerances: Tolerances,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            backend: "suq2".into(),
            cyclic_order: 8,
            q: 0.5,
            trunc_n: 64,
            tower_l: 3.0,
            z_grid: vec![
                "-1".into(),
                "-0.75".into(),
                "-0.5".into(),
                "-0.25".into(),
                "0".into(),
                "0.5".into(),
            ],
            p_grid: vec![1.0, 4.0 / 3.0, 1.5, 2.0],
            n_range: vec![1, 2, 3, 4, 5],
            seed: 7,
            samples: 200,
            out_dir: "out".into(),
            quadrature_points: 64,
            tolerances: Tolerances::default(),
        }
    }
}

/// Parses "a", "bi", "a+bi", "a-bi" (also accepting "j" for the unit).
pub fn parse_complex(s: &str) -> anyhow::Result<Complex64> {
    let t = s.trim().replace(' ', "").replace('j', "i");
    if t.is_empty() {
        bail!("empty complex literal");
    }
    if let Some(body) = t.strip_suffix('i') {
        // Split the imaginary part off at the last sign that is not an
        // exponent sign and not the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && bytes[k - 1] as char != 'e' && bytes[k - 1] as char != 'E'
            {
                split = Some(k);
                break;
            }
        }
        match split {
            None => {
                let im = if body.is_empty() || body == "+" {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse::<f64>().with_context(|| format!("bad complex '{s}'"))?
                };
                Ok(Complex64::new(0.0, im))
            }
            Some(k) => {
                let re: f64 = body[..k].parse().with_context(|| format!("bad complex '{s}'"))?;
                let imtxt = &body[k..];
                let im = match imtxt {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => imtxt.parse().with_context(|| format!("bad complex '{s}'"))?,
                };
                Ok(Complex64::new(re, im))
            }
        }
    } else {
        Ok(Complex64::new(
            t.parse().with_context(|| format!("bad complex '{s}'"))?,
            0.0,
        ))
    }
}

/// Parses "1..5" (inclusive) or "1,2,3".
pub fn parse_n_range(s: &str) -> anyhow::Result<Vec<u32>> {
    let t = s.trim();
    if let Some((a, b)) = t.split_once("..") {
        let lo: u32 = a.trim().parse().context("bad n range")?;
        let hi: u32 = b.trim().trim_start_matches('=').parse().context("bad n range")?;
        if lo > hi {
            bail!("empty n range {s}");
        }
        Ok((lo..=hi).collect())
    } else {
        t.split(',')
            .map(|v| v.trim().parse::<u32>().context("bad n range"))
            .collect()
    }
}

pub fn parse_list_f64(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad number '{v}'")))
        .collect()
}

impl Config {
    pub fn load(path: Option<&PathBuf>) -> anyhow::Result<Self> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read config {}", p.display()))?;
                let cfg: Config = serde_json::from_str(&text)
                    .with_context(|| format!("config schema error in {}", p.display()))?;
                Ok(cfg)
            }
        }
    }

    pub fn z_values(&self) -> anyhow::Result<Vec<Complex64>> {
        self.z_grid.iter().map(|s| parse_complex(s)).collect()
    }

    pub fn tower_level(&self) -> anyhow::Result<HalfInt> {
        let twice = self.tower_l * 2.0;
        if twice < 0.0 || twice.fract() != 0.0 {
            bail!("tower_l = {} is not a nonnegative half-integer", self.tower_l);
        }
        Ok(HalfInt::from_twice(twice as i32))
    }

    /// Schema validation shared by all subcommands.
    pub fn validate(&self) -> anyhow::Result<()> {
        match self.backend.as_str() {
            "suq2" | "cyclic" | "s3" => {}
            other => bail!("unknown backend '{other}' (expected suq2, cyclic or s3)"),
        }
        if self.backend == "cyclic" && self.cyclic_order == 0 {
            bail!("cyclic_order must be positive");
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            bail!("q = {} outside (0,1)", self.q);
        }
        if self.z_grid.is_empty() {
            bail!("z_grid must not be empty");
        }
        self.z_values()?;
        if self.p_grid.is_empty() || self.p_grid.iter().any(|p| !(*p >= 1.0)) {
            bail!("p_grid must be nonempty with every p >= 1");
        }
        self.tower_level()?;
        // The upper bound n ≤ 2L is enforced by the z-sweep itself; other
        // subcommands ignore n_range.
        if self.n_range.is_empty() || self.n_range.contains(&0) {
            bail!("n_range must be nonempty with every n >= 1");
        }
        if self.samples == 0 {
            bail!("samples must be positive");
        }
        if self.quadrature_points < 16 {
            bail!("quadrature_points must be at least 16");
        }
        Ok(())
    }

    pub fn build_suq2(&self) -> anyhow::Result<Suq2Backend> {
        Ok(Suq2Backend::new(Suq2Params {
            q: self.q,
            trunc_n: self.trunc_n,
            tower_l: self.tower_level()?,
            quadrature_points: self.quadrature_points,
        })?)
    }

    pub fn build_group(&self) -> anyhow::Result<GroupBackend> {
        match self.backend.as_str() {
            "cyclic" => Ok(GroupBackend::cyclic(self.cyclic_order)?),
            "s3" => Ok(GroupBackend::s3()?),
            other => bail!("backend '{other}' is not a group backend"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("-0.5").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("-0.5+0i").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("0.25-1i").unwrap(), Complex64::new(0.25, -1.0));
        assert_eq!(parse_complex("0.7i").unwrap(), Complex64::new(0.0, 0.7));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-2+3e-1i").unwrap(), Complex64::new(0.01, 0.3));
        assert!(parse_complex("zebra").is_err());
    }

    #[test]
    fn n_ranges() {
        assert_eq!(parse_n_range("1..5").unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(parse_n_range("2,4").unwrap(), vec![2, 4]);
        assert!(parse_n_range("5..1").is_err());
    }

    #[test]
    fn empty_z_grid_is_schema_error() {
        let mut cfg = Config::default();
        cfg.z_grid.clear();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_field_is_schema_error() {
        let r: Result<Config, _> = serde_json::from_str(r#"{"zgrid": []}"#);
        assert!(r.is_err());
    }
}
