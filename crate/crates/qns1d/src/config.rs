//! Plain-text key=value run configuration: one key per line, `#` comments,
//! unknown keys rejected, every physical invariant validated with the
//! offending line number.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::LimitStudyConfig;
use crate::integrator::{Formulation, InitialData, SimConfig};
use crate::state::PhysicalParams;

/// Either a single run or an eps-sweep, decided by the presence of the
/// `eps_list` key.
#[derive(Debug, Clone)]
pub enum ParsedConfig {
    Sim(SimConfig),
    LimitStudy(LimitStudyConfig),
}

impl ParsedConfig {
    pub fn as_sim(&self) -> Result<&SimConfig> {
        match self {
            ParsedConfig::Sim(c) => Ok(c),
            ParsedConfig::LimitStudy(_) => Err(Error::Config {
                line: None,
                message: "this command needs a single-run config, got a limit-study one".into(),
            }),
        }
    }

    pub fn as_limit_study(&self) -> Result<&LimitStudyConfig> {
        match self {
            ParsedConfig::LimitStudy(c) => Ok(c),
            ParsedConfig::Sim(_) => Err(Error::Config {
                line: None,
                message: "this command needs a limit-study config (add eps_list=...)".into(),
            }),
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "nu",
    "eps",
    "gamma",
    "L",
    "N",
    "formulation",
    "family",
    "A",
    "B",
    "sigma",
    "center",
    "t_final",
    "cfl",
    "snapshot_interval",
    "positivity_floor",
    "boundary_tol",
    "eps_list",
    "t_star",
    "orders",
];

struct RawConfig {
    entries: HashMap<String, (String, usize)>,
}

impl RawConfig {
    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn require(&self, key: &str) -> Result<(&str, usize)> {
        self.get(key).ok_or_else(|| Error::Config {
            line: None,
            message: format!("missing required key '{key}'"),
        })
    }

    fn f64(&self, key: &str) -> Result<Option<(f64, usize)>> {
        match self.get(key) {
            None => Ok(None),
            Some((raw, line)) => raw
                .parse::<f64>()
                .map(|v| Some((v, line)))
                .map_err(|_| Error::Config {
                    line: Some(line),
                    message: format!("key '{key}' needs a number, got '{raw}'"),
                }),
        }
    }

    fn f64_required(&self, key: &str) -> Result<(f64, usize)> {
        self.require(key)?;
        Ok(self.f64(key)?.expect("present"))
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.map(|(v, _)| v).unwrap_or(default))
    }
}

fn parse_lines(text: &str) -> Result<RawConfig> {
    let mut entries = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(Error::Config {
                line: Some(lineno),
                message: format!("expected key=value, got '{body}'"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config {
                line: Some(lineno),
                message: format!("unknown key '{key}'"),
            });
        }
        if entries.contains_key(key) {
            return Err(Error::Config {
                line: Some(lineno),
                message: format!("duplicate key '{key}'"),
            });
        }
        entries.insert(key.to_string(), (value.to_string(), lineno));
    }
    Ok(RawConfig { entries })
}

fn build_sim(raw: &RawConfig) -> Result<SimConfig> {
    let (nu, nu_line) = raw.f64_required("nu")?;
    let (eps, eps_line) = raw.f64_required("eps")?;
    let (gamma, gamma_line) = raw.f64_required("gamma")?;
    if !(nu > 0.0) {
        return Err(Error::Config {
            line: Some(nu_line),
            message: format!("nu must be positive, got {nu}"),
        });
    }
    if !(eps >= 0.0) {
        return Err(Error::Config {
            line: Some(eps_line),
            message: format!("eps must be >= 0, got {eps}"),
        });
    }
    if !(gamma >= 1.0) {
        return Err(Error::Config {
            line: Some(gamma_line),
            message: format!("gamma must be >= 1, got {gamma}"),
        });
    }
    let params = PhysicalParams::new(nu, eps, gamma)?;

    let (half_width, l_line) = raw.f64_required("L")?;
    if !(half_width > 0.0) {
        return Err(Error::Config {
            line: Some(l_line),
            message: format!("L must be positive, got {half_width}"),
        });
    }
    let (n_raw, n_line) = raw.require("N")?;
    let n_cells: usize = n_raw.parse().map_err(|_| Error::Config {
        line: Some(n_line),
        message: format!("N needs a positive integer, got '{n_raw}'"),
    })?;
    if n_cells < 16 || n_cells % 2 != 0 {
        return Err(Error::Config {
            line: Some(n_line),
            message: format!("N must be even and >= 16, got {n_cells}"),
        });
    }

    let formulation = match raw.get("formulation") {
        None => Formulation::Primitive,
        Some((raw_f, line)) => raw_f.parse().map_err(|_| Error::Config {
            line: Some(line),
            message: format!(
                "formulation must be primitive, xi, or omega; got '{raw_f}'"
            ),
        })?,
    };
    if formulation == Formulation::Xi && eps > nu {
        return Err(Error::Config {
            line: Some(eps_line),
            message: format!(
                "formulation=xi needs eps <= nu (the transformed system turns \
                 complex otherwise); got eps = {eps}, nu = {nu}"
            ),
        });
    }

    let (family_raw, family_line) = raw.require("family")?;
    let (a, a_line) = raw.f64_required("A")?;
    let b = raw.f64_or("B", 0.0)?;
    let sigma = raw.f64_or("sigma", 1.0)?;
    if a <= -1.0 {
        return Err(Error::Config {
            line: Some(a_line),
            message: format!("A must exceed -1 to keep v0 positive, got {a}"),
        });
    }
    if !(sigma > 0.0) {
        return Err(Error::Config {
            line: None,
            message: format!("sigma must be positive, got {sigma}"),
        });
    }
    let initial = match family_raw {
        "gauss-bump" => InitialData::GaussBump { a, b, sigma },
        "double-bump" => InitialData::DoubleBump {
            a,
            b,
            sigma,
            center: raw.f64_or("center", 5.0)?,
        },
        other => {
            return Err(Error::Config {
                line: Some(family_line),
                message: format!(
                    "family must be gauss-bump or double-bump, got '{other}'"
                ),
            })
        }
    };

    let (t_final, t_line) = raw.f64_required("t_final")?;
    if !(t_final >= 0.0) {
        return Err(Error::Config {
            line: Some(t_line),
            message: format!("t_final must be >= 0, got {t_final}"),
        });
    }
    let cfl = raw.f64_or("cfl", 0.9)?;
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::Config {
            line: None,
            message: format!("cfl must lie in (0, 1], got {cfl}"),
        });
    }

    let config = SimConfig {
        params,
        half_width,
        n_cells,
        formulation,
        initial,
        t_final,
        cfl,
        snapshot_interval: raw.f64_or("snapshot_interval", t_final / 10.0)?,
        positivity_floor: raw.f64_or("positivity_floor", 1e-8)?,
        boundary_tol: raw.f64_or("boundary_tol", 1e-6)?,
        dt_eps: None,
    };
    config.validate()?;
    Ok(config)
}

fn build_limit_study(raw: &RawConfig, base: SimConfig) -> Result<LimitStudyConfig> {
    let (list_raw, list_line) = raw.require("eps_list")?;
    let mut eps_list = Vec::new();
    for part in list_raw.split(',') {
        let eps: f64 = part.trim().parse().map_err(|_| Error::Config {
            line: Some(list_line),
            message: format!("eps_list entry '{part}' is not a number"),
        })?;
        eps_list.push(eps);
    }
    let compare_time = raw.f64_or("t_star", base.t_final)?;
    let derivative_orders = match raw.get("orders") {
        None => vec![0, 1, 2, 3],
        Some((raw_o, line)) => raw_o
            .split(',')
            .map(|p| {
                p.trim().parse::<u8>().map_err(|_| Error::Config {
                    line: Some(line),
                    message: format!("orders entry '{p}' is not an integer"),
                })
            })
            .collect::<Result<_>>()?,
    };
    let cfg = LimitStudyConfig {
        base,
        eps_list,
        compare_time,
        derivative_orders,
        degenerate_zero_eps: false,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Parse a key=value config file into either a run or a sweep config.
pub fn parse_config(path: &Path) -> Result<ParsedConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: None,
        message: format!("cannot read '{}': {e}", path.display()),
    })?;
    parse_config_str(&text)
}

/// Parse config text (separated from file I/O for testability).
pub fn parse_config_str(text: &str) -> Result<ParsedConfig> {
    let raw = parse_lines(text)?;
    let sim = build_sim(&raw)?;
    if raw.get("eps_list").is_some() {
        Ok(ParsedConfig::LimitStudy(build_limit_study(&raw, sim)?))
    } else {
        for key in ["t_star", "orders"] {
            if let Some((_, line)) = raw.get(key) {
                return Err(Error::Config {
                    line: Some(line),
                    message: format!("key '{key}' only applies to limit-study configs (add eps_list=...)"),
                });
            }
        }
        Ok(ParsedConfig::Sim(sim))
    }
}
