//! Line-based run configuration: `key: value` pairs, `#` comments.
//!
//! ```text
//! # two-generator run
//! generator: exp(z)
//! generator: 0.25*exp(z)
//! window: -2 2 -2 2
//! grid: 256 256
//! depth: 3
//! iters: 64
//! escape: 1e50
//! levels: 8
//! radius: auto
//! samples: 4096
//! seed: 42
//! margin: 2.0
//! ```
//!
//! `generator` is repeatable and required; everything else has the
//! defaults shown. `margin` is multiplicative (stored as its log).
//! Unknown keys are errors.

use crate::classify::ClassifierConfig;
use crate::expr::parse_function;
use crate::grid::Window;
use crate::maxmod::CircleSampling;
use crate::semigroup::Semigroup;
use crate::Complex;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    /// Problem at a specific line (1-based).
    Parse { line: usize, message: String },
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "cannot read config: {}", e),
            ConfigError::Parse { line, message } => {
                write!(f, "config error at line {}: {}", line, message)
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// Everything a run needs, decoded and validated.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub semigroup: Semigroup,
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub seed: u64,
    pub classifier: ClassifierConfig,
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut generators = Vec::new();
    let mut window = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
    let mut nx = 256usize;
    let mut ny = 256usize;
    let mut depth = 3usize;
    let mut iters = 64usize;
    let mut escape = 1e50f64;
    let mut levels = 8i64;
    let mut radius: Option<f64> = None;
    let mut samples = 4096usize;
    let mut seed = 42u64;
    let mut margin = 2.0f64;

    let err = |line: usize, message: String| ConfigError::Parse { line, message };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => return Err(err(lineno, "expected 'key: value'".into())),
        };
        match key {
            "generator" => {
                let f = parse_function(value)
                    .map_err(|e| err(lineno, format!("bad generator: {}", e)))?;
                generators.push(f);
            }
            "window" => {
                let parts: Vec<f64> = value
                    .split_whitespace()
                    .map(|p| p.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| err(lineno, "window needs 4 reals".into()))?;
                if parts.len() != 4 {
                    return Err(err(lineno, "window needs 4 reals".into()));
                }
                window = Window::new(parts[0], parts[1], parts[2], parts[3])
                    .ok_or_else(|| err(lineno, "window bounds out of order".into()))?;
            }
            "grid" => {
                let parts: Vec<usize> = value
                    .split_whitespace()
                    .map(|p| p.parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| err(lineno, "grid needs 2 positive integers".into()))?;
                if parts.len() != 2 || parts[0] == 0 || parts[1] == 0 {
                    return Err(err(lineno, "grid needs 2 positive integers".into()));
                }
                nx = parts[0];
                ny = parts[1];
            }
            "depth" => {
                depth = value
                    .parse()
                    .ok()
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| err(lineno, "depth must be an integer >= 1".into()))?;
            }
            "iters" => {
                iters = value
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| err(lineno, "iters must be an integer >= 1".into()))?;
            }
            "escape" => {
                escape = value
                    .parse()
                    .ok()
                    .filter(|&b: &f64| b > 1.0)
                    .ok_or_else(|| err(lineno, "escape must be a real > 1".into()))?;
            }
            "levels" => {
                levels = value
                    .parse()
                    .ok()
                    .filter(|&l| l >= 0)
                    .ok_or_else(|| err(lineno, "levels must be an integer >= 0".into()))?;
            }
            "radius" => {
                if value == "auto" {
                    radius = None;
                } else {
                    let r: f64 = value
                        .parse()
                        .ok()
                        .filter(|&r: &f64| r > 0.0)
                        .ok_or_else(|| err(lineno, "radius must be 'auto' or a real > 0".into()))?;
                    radius = Some(r);
                }
            }
            "samples" => {
                samples = value
                    .parse()
                    .ok()
                    .filter(|&c| c >= 64)
                    .ok_or_else(|| err(lineno, "samples must be an integer >= 64".into()))?;
            }
            "seed" => {
                seed = value
                    .parse()
                    .map_err(|_| err(lineno, "seed must be a nonnegative integer".into()))?;
            }
            "margin" => {
                margin = value
                    .parse()
                    .ok()
                    .filter(|&m: &f64| m >= 1.0)
                    .ok_or_else(|| err(lineno, "margin must be a real >= 1".into()))?;
            }
            other => {
                return Err(err(lineno, format!("unknown key '{}'", other)));
            }
        }
    }

    if generators.is_empty() {
        return Err(ConfigError::Parse {
            line: 0,
            message: "at least one 'generator' line is required".into(),
        });
    }
    let semigroup = Semigroup::new(generators).map_err(|e| ConfigError::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    let sampling = CircleSampling::new(samples, 32).expect("validated above");
    let classifier = ClassifierConfig {
        max_word_len: depth,
        max_iter: iters,
        escape_log: escape.ln(),
        level_bound: levels,
        margin_log: margin.ln(),
        sampling,
        r_override: radius,
    };
    Ok(RunConfig {
        semigroup,
        window,
        nx,
        ny,
        seed,
        classifier,
    })
}

/// Point syntax for the command line: `a`, `bi`, `a+bi`, `a-bi` with
/// decimal `a`, `b` (e.g. `1.5-0.25i`).
pub fn parse_point(text: &str) -> Result<Complex, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty point".into());
    }
    // split at the last +/- that is not the leading sign
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if bytes[i] == b'+' || bytes[i] == b'-' {
            split = Some(i);
            break;
        }
    }
    let parse_re = |s: &str| -> Result<f64, String> {
        s.parse::<f64>().map_err(|_| format!("bad real part '{}'", s))
    };
    let parse_im = |s: &str| -> Result<f64, String> {
        let body = s
            .strip_suffix('i')
            .ok_or_else(|| format!("imaginary part '{}' must end in 'i'", s))?;
        match body {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => body
                .parse::<f64>()
                .map_err(|_| format!("bad imaginary part '{}'", s)),
        }
    };
    if t.ends_with('i') {
        match split {
            Some(p) => {
                let re = parse_re(&t[..p])?;
                let im = parse_im(&t[p..])?;
                Ok(Complex::new(re, im))
            }
            None => Ok(Complex::new(0.0, parse_im(t)?)),
        }
    } else {
        Ok(Complex::new(parse_re(t)?, 0.0))
    }
}
