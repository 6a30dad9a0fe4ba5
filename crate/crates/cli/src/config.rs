//! Run configuration: a sectioned `key = value` text format.
//!
//! ```text
//! # comment
//! [model]
//! name = burgers
//!
//! [grid]
//! cells = 400
//! lower = -1
//! upper = 1
//! boundary = outflow
//!
//! [scheme]
//! lambda = 0.9
//! t_end = 0.4
//!
//! [initial]
//! profile = step
//! left = 1
//! right = 0
//!
//! [check.riemann]
//! ```
//!
//! Lists are comma separated. Unknown sections and keys are errors.

use std::fmt;
use std::path::PathBuf;

use symhyp::lxf::SchemeConfig;
use symhyp::Boundary;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

fn lex(text: &str) -> Result<Vec<Section>, Vec<ConfigError>> {
    let mut sections: Vec<Section> = Vec::new();
    let mut errors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            if let Some(prev) = sections.iter().find(|s| s.name == name) {
                errors.push(err(line, format!("section [{name}] already defined on line {}", prev.line)));
            }
            sections.push(Section {
                name,
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            errors.push(err(line, "expected `key = value` or `[section]`".into()));
            continue;
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        match sections.last_mut() {
            None => errors.push(err(line, format!("`{key}` appears before any section"))),
            Some(sec) => {
                if let Some(prev) = sec.entries.iter().find(|e| e.key == key) {
                    errors.push(err(line, format!("`{key}` already set on line {}", prev.line)));
                } else {
                    sec.entries.push(Entry { key, value, line });
                }
            }
        }
    }
    if errors.is_empty() {
        Ok(sections)
    } else {
        Err(errors)
    }
}

fn err(line: usize, message: String) -> ConfigError {
    ConfigError {
        line: Some(line),
        message,
    }
}

fn suggestion(word: &str, candidates: &[&str]) -> String {
    candidates
        .iter()
        .map(|c| (strsim::levenshtein(word, c), *c))
        .filter(|(d, _)| *d <= 2)
        .min()
        .map(|(_, c)| format!(" (did you mean `{c}`?)"))
        .unwrap_or_default()
}

/// Typed access to one section; collects errors instead of stopping at the first.
struct Reader<'a> {
    section: &'a Section,
    errors: &'a mut Vec<ConfigError>,
}

impl<'a> Reader<'a> {
    fn allow(&mut self, keys: &[&str]) {
        for e in &self.section.entries {
            if !keys.contains(&e.key.as_str()) {
                let hint = suggestion(&e.key, keys);
                self.errors
                    .push(err(e.line, format!("unknown key `{}` in [{}]{hint}", e.key, self.section.name)));
            }
        }
    }

    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.section.entries.iter().find(|e| e.key == key)
    }

    fn line_of(&self, key: &str) -> usize {
        self.entry(key).map_or(self.section.line, |e| e.line)
    }

    fn fail(&mut self, key: &str, message: String) {
        let line = self.line_of(key);
        self.errors.push(err(line, format!("`{key}`: {message}")));
    }

    fn missing(&mut self, key: &str) {
        let line = self.section.line;
        self.errors
            .push(err(line, format!("missing required key `{key}` in [{}]", self.section.name)));
    }

    fn string(&mut self, key: &str) -> Option<String> {
        self.entry(key).map(|e| e.value.clone())
    }

    fn required_string(&mut self, key: &str) -> Option<String> {
        let v = self.string(key);
        if v.is_none() {
            self.missing(key);
        }
        v
    }

    fn list(&mut self, key: &str) -> Option<Vec<f64>> {
        let e = self.entry(key)?;
        let mut out = Vec::new();
        for item in e.value.split(',') {
            match item.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => out.push(v),
                _ => {
                    self.fail(key, format!("expected a number or comma-separated numbers, got `{}`", e.value));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn number(&mut self, key: &str) -> Option<f64> {
        let list = self.list(key)?;
        if list.len() != 1 {
            self.fail(key, format!("expected a single number, got {} values", list.len()));
            return None;
        }
        Some(list[0])
    }

    fn number_or(&mut self, key: &str, default: f64) -> f64 {
        if self.entry(key).is_none() {
            default
        } else {
            self.number(key).unwrap_or(default)
        }
    }

    fn required_number(&mut self, key: &str) -> Option<f64> {
        if self.entry(key).is_none() {
            self.missing(key);
            return None;
        }
        self.number(key)
    }

    fn count(&mut self, key: &str) -> Option<usize> {
        let e = self.entry(key)?;
        match e.value.trim().parse::<usize>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(key, format!("expected a non-negative integer, got `{}`", e.value));
                None
            }
        }
    }

    fn counts(&mut self, key: &str) -> Option<Vec<usize>> {
        let e = self.entry(key)?;
        let parsed: Result<Vec<usize>, _> = e.value.split(',').map(|s| s.trim().parse::<usize>()).collect();
        match parsed {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(key, format!("expected comma-separated integers, got `{}`", e.value));
                None
            }
        }
    }

    /// A list of length `n`, a single value broadcast to `n`, or `default` when absent.
    fn vector(&mut self, key: &str, n: usize, default: Option<f64>) -> Option<Vec<f64>> {
        match self.list(key) {
            Some(v) if v.len() == n => Some(v),
            Some(v) if v.len() == 1 => Some(vec![v[0]; n]),
            Some(v) => {
                self.fail(key, format!("expected {n} values, got {}", v.len()));
                None
            }
            None if self.entry(key).is_some() => None,
            None => match default {
                Some(d) => Some(vec![d; n]),
                None => {
                    self.missing(key);
                    None
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Burgers { u_min: f64, u_max: f64 },
    Advection { speed: f64, u_min: f64, u_max: f64 },
    Scalar { flux_coeffs: Vec<f64>, u_min: f64, u_max: f64 },
    Wave { dim: usize, drift: Vec<f64>, metric_diag: Vec<f64> },
    Maxwell,
    EulerSh { dim: usize, gamma: f64 },
    EulerCons { gamma: f64 },
    Tricomi { lambda: f64, y_bound: f64 },
    Ck { a_re: f64, a_im: f64 },
}

pub struct ModelInfo {
    pub name: &'static str,
    pub keys: &'static [&'static str],
    pub summary: &'static str,
}

pub const MODELS: &[ModelInfo] = &[
    ModelInfo {
        name: "burgers",
        keys: &["u_min", "u_max"],
        summary: "u_t + (u^2/2)_x = 0 with entropy pair U = u^2, F = 2u^3/3",
    },
    ModelInfo {
        name: "advection",
        keys: &["speed", "u_min", "u_max"],
        summary: "u_t + a u_x = 0 in one dimension",
    },
    ModelInfo {
        name: "scalar",
        keys: &["flux_coeffs", "u_min", "u_max"],
        summary: "u_t + f(u)_x = 0 with polynomial flux f(u) = sum c_i u^i and U = u^2",
    },
    ModelInfo {
        name: "wave",
        keys: &["dim", "drift", "metric_diag"],
        summary: "first-order reduction of u_tt + 2a^j u_jt - a^jk u_jk = 0 (constant coefficients)",
    },
    ModelInfo {
        name: "maxwell",
        keys: &[],
        summary: "vacuum Maxwell equations in (E, B), 3D, with div E and div B monitors",
    },
    ModelInfo {
        name: "euler_sh",
        keys: &["dim", "gamma"],
        summary: "polytropic gas in the symmetric (p, v) form, p = rho^gamma",
    },
    ModelInfo {
        name: "euler_cons",
        keys: &["gamma"],
        summary: "1D conservative gas dynamics in (rho, rho v, E)",
    },
    ModelInfo {
        name: "tricomi",
        keys: &["lambda", "y_bound"],
        summary: "Tricomi equation as a symmetric positive system (positivity certificate only)",
    },
    ModelInfo {
        name: "ck",
        keys: &["a_re", "a_im"],
        summary: "realified u_t = a u_z for one complex unknown on a 2D grid",
    },
];

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Burgers { .. } => "burgers",
            ModelSpec::Advection { .. } => "advection",
            ModelSpec::Scalar { .. } => "scalar",
            ModelSpec::Wave { .. } => "wave",
            ModelSpec::Maxwell => "maxwell",
            ModelSpec::EulerSh { .. } => "euler_sh",
            ModelSpec::EulerCons { .. } => "euler_cons",
            ModelSpec::Tricomi { .. } => "tricomi",
            ModelSpec::Ck { .. } => "ck",
        }
    }

    /// `(space dimension, components)` of the evolved state; `None` for tricomi.
    pub fn layout(&self) -> Option<(usize, usize)> {
        match self {
            ModelSpec::Burgers { .. } | ModelSpec::Advection { .. } | ModelSpec::Scalar { .. } => Some((1, 1)),
            ModelSpec::Wave { dim, .. } => Some((*dim, dim + 2)),
            ModelSpec::Maxwell => Some((3, 6)),
            ModelSpec::EulerSh { dim, .. } => Some((*dim, dim + 1)),
            ModelSpec::EulerCons { .. } => Some((1, 3)),
            ModelSpec::Tricomi { .. } => None,
            ModelSpec::Ck { .. } => Some((2, 2)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub cells: Vec<usize>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub boundary: Vec<Boundary>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant { value: Vec<f64> },
    Step { left: Vec<f64>, right: Vec<f64>, position: f64, axis: usize },
    Bump { center: Vec<f64>, radius: f64, amplitude: Vec<f64>, background: Vec<f64> },
    PlaneWave { offset: Vec<f64>, amplitude: Vec<f64>, wavenumber: Vec<f64> },
    Tabulated { file: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialSpec {
    pub profile: Profile,
    /// Values are `(rho, v, p)` rather than conserved variables (euler_cons only).
    pub primitive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckSpec {
    IsSh { samples: usize },
    EntropyPair { samples: usize },
    Energy,
    Constraints,
    Support { radius: f64 },
    Rh { component: usize, threshold: f64, t_min: Option<f64> },
    Riemann { u_left: f64, u_right: f64 },
    ViscousLimit { eps: Vec<f64>, t: f64, u_left: f64, u_right: f64 },
    Certificate,
}

impl CheckSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CheckSpec::IsSh { .. } => "is_sh",
            CheckSpec::EntropyPair { .. } => "entropy_pair",
            CheckSpec::Energy => "energy",
            CheckSpec::Constraints => "constraints",
            CheckSpec::Support { .. } => "support",
            CheckSpec::Rh { .. } => "rh",
            CheckSpec::Riemann { .. } => "riemann",
            CheckSpec::ViscousLimit { .. } => "viscous_limit",
            CheckSpec::Certificate => "certificate",
        }
    }

    /// Needs a time integration (skipped by `check`).
    pub fn is_dynamic(&self) -> bool {
        matches!(
            self,
            CheckSpec::Energy | CheckSpec::Constraints | CheckSpec::Support { .. } | CheckSpec::Rh { .. } | CheckSpec::ViscousLimit { .. }
        )
    }
}

const CHECKS: &[&str] = &[
    "is_sh",
    "entropy_pair",
    "energy",
    "constraints",
    "support",
    "rh",
    "riemann",
    "viscous_limit",
    "certificate",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub grid: Option<GridSpec>,
    pub scheme: Option<SchemeConfig>,
    pub initial: Option<InitialSpec>,
    pub checks: Vec<CheckSpec>,
    pub output_dir: Option<PathBuf>,
    /// Every `(section, key, value)` in file order, echoed into the run log.
    pub echo: Vec<(String, String, String)>,
}

const SECTIONS: &[&str] = &["model", "grid", "scheme", "initial", "output"];

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let sections = lex(text).map_err(ConfigErrors)?;
    let mut errors = Vec::new();
    for s in &sections {
        let known = SECTIONS.contains(&s.name.as_str())
            || s.name.strip_prefix("check.").is_some_and(|c| CHECKS.contains(&c));
        if !known {
            let mut names: Vec<String> = SECTIONS.iter().map(|s| s.to_string()).collect();
            names.extend(CHECKS.iter().map(|c| format!("check.{c}")));
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let hint = suggestion(&s.name, &refs);
            errors.push(err(s.line, format!("unknown section [{}]{hint}", s.name)));
        }
    }
    let find = |name: &str| sections.iter().find(|s| s.name == name);

    let grid = find("grid").and_then(|s| parse_grid(s, &mut errors));
    let grid_dim = grid.as_ref().map(|g| g.cells.len());
    let model = match find("model") {
        Some(s) => parse_model(s, grid_dim, &mut errors),
        None => {
            errors.push(ConfigError {
                line: None,
                message: "missing required section [model]".into(),
            });
            None
        }
    };
    let layout = model.as_ref().and_then(ModelSpec::layout);
    if let (Some((n, _)), Some(g), Some(s)) = (layout, &grid, find("grid")) {
        if g.cells.len() != n {
            errors.push(err(
                s.line,
                format!("model has {n} space dimension(s) but the grid has {}", g.cells.len()),
            ));
        }
    }
    let scheme = find("scheme").and_then(|s| parse_scheme(s, &mut errors));
    let initial = find("initial").and_then(|s| parse_initial(s, layout, &model, &mut errors));
    if let Some(s) = find("scheme") {
        if grid.is_none() {
            errors.push(err(s.line, "[scheme] needs a [grid] section".into()));
        }
        if find("initial").is_none() {
            errors.push(err(s.line, "[scheme] needs an [initial] section".into()));
        }
        if layout.is_none() && model.is_some() {
            errors.push(err(s.line, "this model has no time evolution".into()));
        }
    }
    let mut checks = Vec::new();
    for s in sections.iter().filter(|s| s.name.starts_with("check.")) {
        if let Some(c) = parse_check(s, &scheme, &initial, &mut errors) {
            checks.push(c);
        }
    }
    let output_dir = find("output").and_then(|s| {
        let mut r = Reader {
            section: s,
            errors: &mut errors,
        };
        r.allow(&["dir"]);
        r.string("dir").map(PathBuf::from)
    });

    if !errors.is_empty() {
        errors.sort_by_key(|e| e.line);
        return Err(ConfigErrors(errors));
    }
    let echo = sections
        .iter()
        .flat_map(|s| s.entries.iter().map(move |e| (s.name.clone(), e.key.clone(), e.value.clone())))
        .collect();
    Ok(RunConfig {
        model: model.expect("no errors implies a model"),
        grid,
        scheme,
        initial,
        checks,
        output_dir,
        echo,
    })
}

fn parse_model(s: &Section, grid_dim: Option<usize>, errors: &mut Vec<ConfigError>) -> Option<ModelSpec> {
    let mut r = Reader { section: s, errors };
    let name = r.required_string("name")?;
    let Some(info) = MODELS.iter().find(|m| m.name == name) else {
        let names: Vec<&str> = MODELS.iter().map(|m| m.name).collect();
        let hint = suggestion(&name, &names);
        r.fail("name", format!("unknown model `{name}`{hint}"));
        return None;
    };
    let mut keys = vec!["name"];
    keys.extend_from_slice(info.keys);
    r.allow(&keys);
    let dim = match r.count("dim") {
        Some(d) if (1..=3).contains(&d) => d,
        Some(_) => {
            r.fail("dim", "must be 1, 2 or 3".into());
            1
        }
        None => grid_dim.unwrap_or(1),
    };
    let before = r.errors.len();
    let spec = match name.as_str() {
        "burgers" => ModelSpec::Burgers {
            u_min: r.number_or("u_min", -10.0),
            u_max: r.number_or("u_max", 10.0),
        },
        "advection" => ModelSpec::Advection {
            speed: r.number_or("speed", 1.0),
            u_min: r.number_or("u_min", -10.0),
            u_max: r.number_or("u_max", 10.0),
        },
        "scalar" => {
            let flux_coeffs = match r.list("flux_coeffs") {
                Some(c) => c,
                None => {
                    if r.entry("flux_coeffs").is_none() {
                        r.missing("flux_coeffs");
                    }
                    return None;
                }
            };
            ModelSpec::Scalar {
                flux_coeffs,
                u_min: r.number_or("u_min", -10.0),
                u_max: r.number_or("u_max", 10.0),
            }
        }
        "wave" => ModelSpec::Wave {
            dim,
            drift: r.vector("drift", dim, Some(0.0))?,
            metric_diag: r.vector("metric_diag", dim, Some(1.0))?,
        },
        "maxwell" => ModelSpec::Maxwell,
        "euler_sh" => ModelSpec::EulerSh {
            dim,
            gamma: r.number_or("gamma", 1.4),
        },
        "euler_cons" => ModelSpec::EulerCons {
            gamma: r.number_or("gamma", 1.4),
        },
        "tricomi" => {
            let lambda = r.required_number("lambda")?;
            if lambda < 0.0 {
                r.fail("lambda", "must be non-negative".into());
            }
            let y_bound = r.number_or("y_bound", 1.0);
            if y_bound < 0.0 {
                r.fail("y_bound", "must be non-negative".into());
            }
            ModelSpec::Tricomi { lambda, y_bound }
        }
        "ck" => ModelSpec::Ck {
            a_re: r.number_or("a_re", 1.0),
            a_im: r.number_or("a_im", 0.0),
        },
        _ => unreachable!("model names come from MODELS"),
    };
    match &spec {
        ModelSpec::EulerSh { gamma, .. } | ModelSpec::EulerCons { gamma } if *gamma <= 1.0 => {
            r.fail("gamma", "must exceed 1".into());
        }
        ModelSpec::Burgers { u_min, u_max }
        | ModelSpec::Advection { u_min, u_max, .. }
        | ModelSpec::Scalar { u_min, u_max, .. }
            if u_min > u_max =>
        {
            r.fail("u_max", "must not be below u_min".into());
        }
        ModelSpec::Wave { metric_diag, .. } if metric_diag.iter().any(|d| *d <= 0.0) => {
            r.fail("metric_diag", "entries must be positive".into());
        }
        _ => {}
    }
    (r.errors.len() == before).then_some(spec)
}

fn parse_boundary(word: &str) -> Option<Boundary> {
    match word.trim() {
        "periodic" => Some(Boundary::Periodic),
        "outflow" => Some(Boundary::Outflow),
        _ => None,
    }
}

fn parse_grid(s: &Section, errors: &mut Vec<ConfigError>) -> Option<GridSpec> {
    let mut r = Reader { section: s, errors };
    r.allow(&["cells", "lower", "upper", "boundary"]);
    let cells = match r.counts("cells") {
        Some(c) => c,
        None => {
            if r.entry("cells").is_none() {
                r.missing("cells");
            }
            return None;
        }
    };
    let n = cells.len();
    if !(1..=3).contains(&n) || cells.iter().any(|c| *c == 0) {
        r.fail("cells", "need 1 to 3 positive cell counts".into());
        return None;
    }
    let lower = r.vector("lower", n, None)?;
    let upper = r.vector("upper", n, None)?;
    if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
        r.fail("upper", "must exceed `lower` on every axis".into());
        return None;
    }
    let boundary = match r.string("boundary") {
        None => vec![Boundary::Periodic; n],
        Some(text) => {
            let parsed: Option<Vec<Boundary>> = text.split(',').map(parse_boundary).collect();
            match parsed {
                Some(b) if b.len() == n => b,
                Some(b) if b.len() == 1 => vec![b[0]; n],
                _ => {
                    r.fail("boundary", format!("expected `periodic` or `outflow` (one or {n} values), got `{text}`"));
                    return None;
                }
            }
        }
    };
    Some(GridSpec {
        cells,
        lower,
        upper,
        boundary,
    })
}

fn parse_scheme(s: &Section, errors: &mut Vec<ConfigError>) -> Option<SchemeConfig> {
    let mut r = Reader { section: s, errors };
    r.allow(&["lambda", "cfl_safety", "t_end", "output_stride", "snapshot_stride", "viscosity"]);
    let before = r.errors.len();
    let lambda = r.required_number("lambda");
    let t_end = r.required_number("t_end");
    let defaults = SchemeConfig::new(1.0, 0.0);
    let cfl_safety = r.number_or("cfl_safety", defaults.cfl_safety);
    let output_stride = r.count("output_stride").unwrap_or(defaults.output_stride);
    let snapshot_stride = r.count("snapshot_stride").unwrap_or(defaults.snapshot_stride);
    let viscosity = r.number_or("viscosity", 0.0);
    let (lambda, t_end) = (lambda?, t_end?);
    let config = SchemeConfig {
        lambda,
        cfl_safety,
        t_end,
        output_stride,
        snapshot_stride,
        viscosity,
    };
    if let Err(symhyp::Error::InvalidParameter { name, reason }) = config.validate() {
        r.fail(&name, reason);
    }
    (r.errors.len() == before).then_some(config)
}

fn parse_initial(s: &Section, layout: Option<(usize, usize)>, model: &Option<ModelSpec>, errors: &mut Vec<ConfigError>) -> Option<InitialSpec> {
    let mut r = Reader { section: s, errors };
    let profile = r.required_string("profile")?;
    let (n, m) = layout.unwrap_or((1, 1));
    let keys: &[&str] = match profile.as_str() {
        "constant" => &["value"],
        "step" => &["left", "right", "position", "axis"],
        "bump" => &["center", "radius", "amplitude", "background"],
        "plane-wave" => &["offset", "amplitude", "wavenumber"],
        "tabulated" => &["file"],
        other => {
            let hint = suggestion(other, &["constant", "step", "bump", "plane-wave", "tabulated"]);
            r.fail("profile", format!("unknown profile `{other}`{hint}"));
            return None;
        }
    };
    let mut allowed = vec!["profile", "variables"];
    allowed.extend_from_slice(keys);
    r.allow(&allowed);
    let primitive = match r.string("variables").as_deref() {
        None | Some("conserved") => false,
        Some("primitive") if matches!(model, Some(ModelSpec::EulerCons { .. })) => true,
        Some(other) => {
            r.fail("variables", format!("expected `conserved` (or `primitive` for euler_cons), got `{other}`"));
            return None;
        }
    };
    let profile = match profile.as_str() {
        "constant" => Profile::Constant {
            value: r.vector("value", m, None)?,
        },
        "step" => {
            let axis = r.count("axis").unwrap_or(0);
            if axis >= n {
                r.fail("axis", format!("must be below the space dimension {n}"));
                return None;
            }
            Profile::Step {
                left: r.vector("left", m, None)?,
                right: r.vector("right", m, None)?,
                position: r.number_or("position", 0.0),
                axis,
            }
        }
        "bump" => {
            let radius = r.required_number("radius")?;
            if radius <= 0.0 {
                r.fail("radius", "must be positive".into());
                return None;
            }
            Profile::Bump {
                center: r.vector("center", n, Some(0.0))?,
                radius,
                amplitude: r.vector("amplitude", m, None)?,
                background: r.vector("background", m, Some(0.0))?,
            }
        }
        "plane-wave" => Profile::PlaneWave {
            offset: r.vector("offset", m, Some(0.0))?,
            amplitude: r.vector("amplitude", m, None)?,
            wavenumber: r.vector("wavenumber", n, None)?,
        },
        "tabulated" => Profile::Tabulated {
            file: PathBuf::from(r.required_string("file")?),
        },
        _ => unreachable!(),
    };
    Some(InitialSpec { profile, primitive })
}

fn parse_check(s: &Section, scheme: &Option<SchemeConfig>, initial: &Option<InitialSpec>, errors: &mut Vec<ConfigError>) -> Option<CheckSpec> {
    let name = s.name.strip_prefix("check.")?;
    let mut r = Reader { section: s, errors };
    let step_states = match initial.as_ref().map(|i| &i.profile) {
        Some(Profile::Step { left, right, .. }) if left.len() == 1 => Some((left[0], right[0])),
        _ => None,
    };
    let states = |r: &mut Reader| -> Option<(f64, f64)> {
        match (r.number("u_left"), r.number("u_right"), step_states) {
            (Some(l), Some(rr), _) => Some((l, rr)),
            (None, None, Some(s)) if r.entry("u_left").is_none() && r.entry("u_right").is_none() => Some(s),
            _ => {
                r.fail("u_left", "give `u_left` and `u_right` (or scalar step initial data)".into());
                None
            }
        }
    };
    let check = match name {
        "is_sh" => {
            r.allow(&["samples"]);
            CheckSpec::IsSh {
                samples: r.count("samples").unwrap_or(5).max(2),
            }
        }
        "entropy_pair" => {
            r.allow(&["samples"]);
            CheckSpec::EntropyPair {
                samples: r.count("samples").unwrap_or(100).max(1),
            }
        }
        "energy" => {
            r.allow(&[]);
            CheckSpec::Energy
        }
        "constraints" => {
            r.allow(&[]);
            CheckSpec::Constraints
        }
        "certificate" => {
            r.allow(&[]);
            CheckSpec::Certificate
        }
        "support" => {
            r.allow(&["radius"]);
            CheckSpec::Support {
                radius: r.required_number("radius")?,
            }
        }
        "rh" => {
            r.allow(&["component", "threshold", "t_min"]);
            CheckSpec::Rh {
                component: r.count("component").unwrap_or(0),
                threshold: r.number_or("threshold", symhyp::shocks::DEFAULT_SHOCK_THRESHOLD),
                t_min: r.number("t_min"),
            }
        }
        "riemann" => {
            r.allow(&["u_left", "u_right"]);
            let (u_left, u_right) = states(&mut r)?;
            CheckSpec::Riemann { u_left, u_right }
        }
        "viscous_limit" => {
            r.allow(&["eps", "t", "u_left", "u_right"]);
            let eps = match r.list("eps") {
                Some(e) => e,
                None => {
                    if r.entry("eps").is_none() {
                        r.missing("eps");
                    }
                    return None;
                }
            };
            if eps.iter().any(|e| *e <= 0.0) {
                r.fail("eps", "viscosities must be positive".into());
                return None;
            }
            let t = match (r.number("t"), scheme) {
                (Some(t), _) => t,
                (None, Some(sc)) if r.entry("t").is_none() => sc.t_end,
                _ => {
                    r.fail("t", "give `t` or a [scheme] with t_end".into());
                    return None;
                }
            };
            let (u_left, u_right) = states(&mut r)?;
            CheckSpec::ViscousLimit { eps, t, u_left, u_right }
        }
        _ => return None,
    };
    Some(check)
}
