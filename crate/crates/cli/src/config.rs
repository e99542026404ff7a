use serde::{Deserialize, Serialize};
use weak_dirac::quadrature::VectorNorm;
use weak_dirac::QuadratureSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive grid `start, start + step, ..., stop`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl PGrid {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| {
                let p = self.start + k as f64 * self.step;
                (p * 1e12).round() / 1e12
            })
            .collect()
    }
}

impl std::str::FromStr for PGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected A:B:STEP, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let grid = PGrid {
            start: num(a)?,
            stop: num(b)?,
            step: num(c)?,
        };
        if !(grid.step > 0.0 && grid.stop >= grid.start) {
            return Err("need STEP > 0 and B >= A".into());
        }
        Ok(grid)
    }
}

impl std::fmt::Display for PGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

/// Everything needed to reproduce a report. Serialized field order is the
/// declaration order below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub m: Option<usize>,
    pub dim: Option<usize>,
    pub n_list: Option<Vec<f64>>,
    pub p_grid: Option<PGrid>,
    pub points: Option<usize>,
    pub trials: Option<u64>,
    pub quadrature: QuadratureSpec,
    pub output: Option<String>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn new(command: &str, quadrature: QuadratureSpec) -> Self {
        Self {
            command: command.to_owned(),
            m: None,
            dim: None,
            n_list: None,
            p_grid: None,
            points: None,
            trials: None,
            quadrature,
            output: None,
            format: None,
        }
    }

    /// Reads the configuration embedded in a CSV or JSON report.
    pub fn from_report(text: &str) -> Result<Self, String> {
        if let Some(line) = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix(CSV_META_PREFIX))
        {
            return serde_json::from_str(line).map_err(|e| e.to_string());
        }
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let cfg = value
            .get("run_config")
            .ok_or("report has no run_config entry")?;
        serde_json::from_value(cfg.clone()).map_err(|e| e.to_string())
    }

    /// Command-line arguments (without the program name) that rerun this
    /// configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec![self.command.clone()];
        let mut push = |flag: &str, value: String| {
            args.push(format!("--{flag}"));
            args.push(value);
        };
        if let Some(m) = self.m {
            push("m", m.to_string());
        }
        if let Some(d) = self.dim {
            push("dim", d.to_string());
        }
        if let Some(ns) = &self.n_list {
            let list: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
            push("n", list.join(","));
        }
        if let Some(g) = &self.p_grid {
            push("p-grid", g.to_string());
        }
        if let Some(k) = self.points {
            push("points", k.to_string());
        }
        if let Some(t) = self.trials {
            push("trials", t.to_string());
        }
        let q = &self.quadrature;
        push("panels", q.panels.to_string());
        push("r-max", q.r_max.to_string());
        push("angular-order", q.angular_order.to_string());
        push("mc-samples", q.mc_samples.to_string());
        push("seed", q.seed.to_string());
        push(
            "norm",
            match q.vector_norm {
                VectorNorm::L1 => "l1",
                VectorNorm::L2 => "l2",
            }
            .into(),
        );
        if let Some(path) = &self.output {
            let flag = if self.command == "gamma-check" {
                "dump"
            } else {
                "out"
            };
            push(flag, path.clone());
        }
        if let Some(f) = self.format {
            push(
                "format",
                match f {
                    Format::Csv => "csv",
                    Format::Json => "json",
                }
                .into(),
            );
        }
        args
    }
}

pub const CSV_META_PREFIX: &str = "# run_config: ";
