//! Flat INI-style run configuration.
//!
//! Sections: `[grid]`, `[exponents]`, `[weight]`, `[nonlinearity]`,
//! `[solver]`, `[output]`, `[geometry]`, `[fibering]`, `[sweep]`. Field
//! values are expressions from the grammar in [`crate::expr`]. Every parse
//! failure carries the offending line number.

use std::collections::BTreeSet;
use std::fmt;

use double_phase_core::solver::Preconditioner;
use double_phase_core::*;

use crate::expr::FieldExpr;

#[derive(Debug, Clone)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    section: String,
    key: String,
    value: String,
}

#[derive(Debug, Clone)]
struct RawConfig {
    entries: Vec<Entry>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = Vec::new();
        let mut section = String::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(Some(line_no), "missing ']' in section header"))?;
                section = name.trim().to_string();
                if section.is_empty() {
                    return Err(err(Some(line_no), "empty section name"));
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(Some(line_no), format!("expected 'key = value', found '{line}'")))?;
            if section.is_empty() {
                return Err(err(Some(line_no), "key outside of any [section]"));
            }
            entries.push(Entry {
                line: line_no,
                section: section.clone(),
                key: key.trim().to_string(),
                value: value.trim().to_string(),
            });
        }
        Ok(RawConfig { entries })
    }

    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries
            .iter()
            .find(|e| e.section == section && e.key == key)
    }

    fn require(&self, section: &str, key: &str) -> Result<&Entry, ConfigError> {
        self.get(section, key)
            .ok_or_else(|| err(None, format!("missing required key '{key}' in [{section}]")))
    }
}

fn parse_f64(e: &Entry) -> Result<f64, ConfigError> {
    e.value
        .parse::<f64>()
        .map_err(|_| err(Some(e.line), format!("invalid number '{}'", e.value)))
}

fn parse_usize(e: &Entry) -> Result<usize, ConfigError> {
    e.value
        .parse::<usize>()
        .map_err(|_| err(Some(e.line), format!("invalid integer '{}'", e.value)))
}

fn parse_u64(e: &Entry) -> Result<u64, ConfigError> {
    e.value
        .parse::<u64>()
        .map_err(|_| err(Some(e.line), format!("invalid integer '{}'", e.value)))
}

fn parse_bool(e: &Entry) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(err(Some(e.line), format!("expected true/false, found '{other}'"))),
    }
}

fn parse_list_f64(e: &Entry) -> Result<Vec<f64>, ConfigError> {
    e.value
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| err(Some(e.line), format!("invalid number '{}'", part.trim())))
        })
        .collect()
}

fn parse_list_usize(e: &Entry) -> Result<Vec<usize>, ConfigError> {
    e.value
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| err(Some(e.line), format!("invalid integer '{}'", part.trim())))
        })
        .collect()
}

fn parse_expr(e: &Entry) -> Result<FieldExpr, ConfigError> {
    FieldExpr::parse(&e.value).map_err(|msg| err(Some(e.line), msg.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldFormat {
    None,
    Csv,
    CsvVtk,
}

#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub fields: FieldFormat,
}

#[derive(Debug, Clone)]
pub struct GeometryParams {
    pub deltas: Vec<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone)]
pub struct FiberingParams {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
    pub geometry: GeometryParams,
    pub fibering: FiberingParams,
    pub sweep: Option<SweepSpec>,
    /// Verbatim text of the parsed configuration, echoed into run
    /// directories for replay.
    pub echo: String,
}

const KNOWN_KEYS: &[(&str, &str)] = &[
    ("grid", "nodes"),
    ("grid", "extents"),
    ("exponents", "p"),
    ("exponents", "q"),
    ("exponents", "direction"),
    ("weight", "mu"),
    ("nonlinearity", "family"),
    ("nonlinearity", "r"),
    ("nonlinearity", "coeff"),
    ("nonlinearity", "r1"),
    ("nonlinearity", "r2"),
    ("nonlinearity", "a"),
    ("nonlinearity", "growth_margin"),
    ("nonlinearity", "c1"),
    ("nonlinearity", "c2"),
    ("solver", "max_iterations"),
    ("solver", "tolerance"),
    ("solver", "step0"),
    ("solver", "shrink"),
    ("solver", "armijo"),
    ("solver", "preconditioner"),
    ("solver", "guess"),
    ("solver", "guess_sign_changing"),
    ("solver", "seed"),
    ("solver", "max_restarts"),
    ("solver", "nodal_threshold"),
    ("solver", "regularized_step"),
    ("output", "fields"),
    ("geometry", "deltas"),
    ("geometry", "samples"),
    ("fibering", "t_min"),
    ("fibering", "t_max"),
    ("fibering", "points"),
    ("sweep", "parameter"),
    ("sweep", "values"),
];

fn exponent_field(
    grid: &Grid,
    expr: &FieldExpr,
    entry: &Entry,
) -> Result<ExponentField, ConfigError> {
    ExponentField::from_fn(grid, |x| expr.eval(x))
        .map_err(|e| err(Some(entry.line), format!("{}: {e}", entry.key)))
}

/// Parse a configuration text into a full run setup. `seed_override`
/// (from `--seed`) wins over the `[solver] seed` key.
pub fn parse_config(text: &str, seed_override: Option<u64>) -> Result<RunConfig, ConfigError> {
    let raw = RawConfig::parse(text)?;

    // reject unknown keys early, with their line
    let known: BTreeSet<(&str, &str)> = KNOWN_KEYS.iter().copied().collect();
    for e in &raw.entries {
        if !known.contains(&(e.section.as_str(), e.key.as_str())) {
            return Err(err(
                Some(e.line),
                format!("unknown key '{}' in [{}]", e.key, e.section),
            ));
        }
    }

    // grid
    let nodes_entry = raw.require("grid", "nodes")?;
    let mut nodes = parse_list_usize(nodes_entry)?;
    if nodes.len() == 1 {
        nodes = vec![nodes[0], nodes[0]];
    }
    let extents = match raw.get("grid", "extents") {
        Some(e) => parse_list_f64(e)?,
        None => vec![1.0; nodes.len()],
    };
    let grid = Grid::new(&extents, &nodes)
        .map_err(|e| err(Some(nodes_entry.line), format!("grid: {e}")))?;

    // exponents and weight
    let p_entry = raw.require("exponents", "p")?;
    let p = exponent_field(&grid, &parse_expr(p_entry)?, p_entry)?;
    let q_entry = raw.require("exponents", "q")?;
    let q = exponent_field(&grid, &parse_expr(q_entry)?, q_entry)?;
    let direction = match raw.get("exponents", "direction") {
        Some(e) => parse_list_f64(e)?,
        None => {
            let mut d = vec![0.0; grid.dim()];
            d[0] = 1.0;
            d
        }
    };
    let mu = match raw.get("weight", "mu") {
        Some(e) => {
            let expr = parse_expr(e)?;
            WeightField::from_fn(&grid, |x| expr.eval(x))
                .map_err(|we| err(Some(e.line), format!("mu: {we}")))?
        }
        None => WeightField::constant(&grid, 1.0).expect("constant weight"),
    };

    // nonlinearity
    let family_entry = raw.require("nonlinearity", "family")?;
    let nonlinearity = match family_entry.value.as_str() {
        "pure_power" => {
            let r_entry = raw.require("nonlinearity", "r")?;
            let r = exponent_field(&grid, &parse_expr(r_entry)?, r_entry)?;
            let coeff = match raw.get("nonlinearity", "coeff") {
                Some(e) => parse_f64(e)?,
                None => 1.0,
            };
            NonlinearitySpec::pure_power(r, coeff)
                .map_err(|e| err(Some(family_entry.line), format!("nonlinearity: {e}")))?
        }
        "log_power" => {
            let r1_entry = raw.require("nonlinearity", "r1")?;
            let r2_entry = raw.require("nonlinearity", "r2")?;
            let a_entry = raw.require("nonlinearity", "a")?;
            let margin = match raw.get("nonlinearity", "growth_margin") {
                Some(e) => parse_f64(e)?,
                None => 0.1,
            };
            NonlinearitySpec::log_power(
                exponent_field(&grid, &parse_expr(r1_entry)?, r1_entry)?,
                exponent_field(&grid, &parse_expr(r2_entry)?, r2_entry)?,
                exponent_field(&grid, &parse_expr(a_entry)?, a_entry)?,
                margin,
            )
            .map_err(|e| err(Some(family_entry.line), format!("nonlinearity: {e}")))?
        }
        "power_sum" => {
            let r1_entry = raw.require("nonlinearity", "r1")?;
            let r2_entry = raw.require("nonlinearity", "r2")?;
            let c1 = match raw.get("nonlinearity", "c1") {
                Some(e) => parse_f64(e)?,
                None => 1.0,
            };
            let c2 = match raw.get("nonlinearity", "c2") {
                Some(e) => parse_f64(e)?,
                None => 1.0,
            };
            NonlinearitySpec::power_sum(
                exponent_field(&grid, &parse_expr(r1_entry)?, r1_entry)?,
                exponent_field(&grid, &parse_expr(r2_entry)?, r2_entry)?,
                c1,
                c2,
            )
            .map_err(|e| err(Some(family_entry.line), format!("nonlinearity: {e}")))?
        }
        other => {
            return Err(err(
                Some(family_entry.line),
                format!("unknown nonlinearity family '{other}'"),
            ))
        }
    };

    let problem = ProblemConfig::new(grid.clone(), p, q, mu, direction, nonlinearity)
        .map_err(|e| err(None, format!("problem: {e}")))?;

    // solver
    let mut solver = SolverConfig::default();
    if let Some(e) = raw.get("solver", "max_iterations") {
        solver.max_iterations = parse_usize(e)?;
    }
    if let Some(e) = raw.get("solver", "tolerance") {
        solver.tolerance = parse_f64(e)?;
        if !(solver.tolerance > 0.0) {
            return Err(err(Some(e.line), "tolerance must be positive"));
        }
    }
    if let Some(e) = raw.get("solver", "step0") {
        solver.step0 = parse_f64(e)?;
    }
    if let Some(e) = raw.get("solver", "shrink") {
        solver.shrink = parse_f64(e)?;
        if !(solver.shrink > 0.0 && solver.shrink < 1.0) {
            return Err(err(Some(e.line), "shrink must lie in (0, 1)"));
        }
    }
    if let Some(e) = raw.get("solver", "armijo") {
        solver.armijo = parse_f64(e)?;
    }
    if let Some(e) = raw.get("solver", "preconditioner") {
        solver.preconditioner = match e.value.as_str() {
            "laplacian" => Preconditioner::InverseLaplacian,
            "identity" => Preconditioner::Identity,
            other => {
                return Err(err(
                    Some(e.line),
                    format!("unknown preconditioner '{other}' (laplacian | identity)"),
                ))
            }
        };
    }
    if let Some(e) = raw.get("solver", "seed") {
        solver.seed = parse_u64(e)?;
    }
    if let Some(seed) = seed_override {
        solver.seed = seed;
    }
    if let Some(e) = raw.get("solver", "max_restarts") {
        solver.max_restarts = parse_usize(e)?;
    }
    if let Some(e) = raw.get("solver", "nodal_threshold") {
        solver.nodal_threshold_factor = parse_f64(e)?;
    }
    if let Some(e) = raw.get("solver", "regularized_step") {
        solver.regularized_step = parse_bool(e)?;
    }
    if let Some(e) = raw.get("solver", "guess") {
        solver.guess = guess_field(&grid, e)?;
    }
    if let Some(e) = raw.get("solver", "guess_sign_changing") {
        solver.guess_sign_changing = guess_field(&grid, e)?;
    }

    // output
    let fields = match raw.get("output", "fields") {
        Some(e) => match e.value.as_str() {
            "none" => FieldFormat::None,
            "csv" => FieldFormat::Csv,
            "csv+vtk" => FieldFormat::CsvVtk,
            other => {
                return Err(err(
                    Some(e.line),
                    format!("unknown field format '{other}' (none | csv | csv+vtk)"),
                ))
            }
        },
        None => FieldFormat::Csv,
    };

    // geometry and fibering parameters
    let geometry = GeometryParams {
        deltas: match raw.get("geometry", "deltas") {
            Some(e) => parse_list_f64(e)?,
            None => vec![0.1],
        },
        samples: match raw.get("geometry", "samples") {
            Some(e) => parse_usize(e)?,
            None => 200,
        },
    };
    let fibering = FiberingParams {
        t_min: match raw.get("fibering", "t_min") {
            Some(e) => parse_f64(e)?,
            None => 0.01,
        },
        t_max: match raw.get("fibering", "t_max") {
            Some(e) => parse_f64(e)?,
            None => 100.0,
        },
        points: match raw.get("fibering", "points") {
            Some(e) => parse_usize(e)?,
            None => 50,
        },
    };

    // sweep
    let sweep = match (raw.get("sweep", "parameter"), raw.get("sweep", "values")) {
        (Some(p_e), Some(v_e)) => Some(SweepSpec {
            parameter: p_e.value.clone(),
            values: parse_list_f64(v_e)?,
        }),
        (Some(p_e), None) => {
            return Err(err(Some(p_e.line), "sweep needs both 'parameter' and 'values'"))
        }
        (None, Some(v_e)) => {
            return Err(err(Some(v_e.line), "sweep needs both 'parameter' and 'values'"))
        }
        (None, None) => None,
    };

    Ok(RunConfig {
        problem,
        solver,
        output: OutputConfig { fields },
        geometry,
        fibering,
        sweep,
        echo: text.to_string(),
    })
}

fn guess_field(grid: &Grid, e: &Entry) -> Result<Option<ScalarField>, ConfigError> {
    match e.value.as_str() {
        "bump" => Ok(Some(double_phase_core::solver::default_bump(grid))),
        "pair" => Ok(Some(double_phase_core::solver::default_pair_guess(grid))),
        expr_text => {
            let expr = FieldExpr::parse(expr_text).map_err(|m| err(Some(e.line), m.0))?;
            let mut field = ScalarField::from_fn(grid, |x| expr.eval(x));
            field.zero_boundary();
            Ok(Some(field))
        }
    }
}

/// Rewrite `section.key` to `value` in the raw config text, replacing the
/// existing line or inserting one into the section. Used by sweeps so each
/// point echoes its exact configuration.
pub fn apply_override(text: &str, parameter: &str, value: f64) -> Result<String, ConfigError> {
    let (section, key) = parameter
        .split_once('.')
        .ok_or_else(|| err(None, format!("sweep parameter '{parameter}' must be 'section.key'")))?;
    let mut out: Vec<String> = Vec::new();
    let mut in_section = false;
    let mut replaced = false;
    let mut section_seen = false;
    for raw_line in text.lines() {
        let stripped = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if let Some(name) = stripped.strip_prefix('[') {
            // leaving the target section without a hit: insert the key
            if in_section && !replaced {
                out.push(format!("{key} = {value}"));
                replaced = true;
            }
            in_section = name.strip_suffix(']').map(str::trim) == Some(section);
            section_seen |= in_section;
            out.push(raw_line.to_string());
            continue;
        }
        if in_section && !replaced {
            if let Some((k, _)) = stripped.split_once('=') {
                if k.trim() == key {
                    out.push(format!("{key} = {value}"));
                    replaced = true;
                    continue;
                }
            }
        }
        out.push(raw_line.to_string());
    }
    if in_section && !replaced {
        out.push(format!("{key} = {value}"));
        replaced = true;
    }
    if !section_seen {
        out.push(format!("[{section}]"));
        out.push(format!("{key} = {value}"));
        replaced = true;
    }
    debug_assert!(replaced);
    Ok(out.join("\n") + "\n")
}
