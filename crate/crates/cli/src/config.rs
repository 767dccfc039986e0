//! Experiment configuration: a flat `key = value` text format with
//! `[space]`, `[field]`, and `[run]` sections, parsed strictly. Every key
//! must be consumed by the requested experiment; anything left over is
//! rejected with its line number, as are malformed values, missing
//! sections, and schedules that violate their invariants.
//!
//! Value grammars (documented per key in the README):
//!
//! - points: comma-separated coordinates in Euclidean space (spatial
//!   coordinates in hyperbolic space, lifted onto the hyperboloid),
//!   `vertex:<name>` or `edge:<index>:<offset>` on trees, and
//!   `<left> | <right>` on products (parenthesize a factor to nest);
//! - convex sets: `ball(<point>; <radius>)`, `halfspace(<normal>; <offset>)`,
//!   `subtree(<vertex>, ...)`, `segment(<point>; <point>)`, and
//!   `product(<set> | <set>)`;
//! - maps: `identity`, `reflection`, `rotation(<angle>)`,
//!   `constant(<point>)`, `projection(<set>)`;
//! - schedules and lists: comma-separated numbers.

use std::fs;
use std::path::Path;

use catflow_core::catalog::{self, MapSpec};
use catflow_core::{ConvexSet, MonotoneField, Point, ResolventConfig, Space, SpaceKind, TreeSpec};
use sha2::{Digest, Sha256};

/// Everything that stops a run before any row is computed. These map to
/// exit code 1; numeric trouble inside a row never lands here.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("config error: {0}")]
    Invalid(String),
    #[error("tree file {path}: {source}")]
    TreeFile {
        path: String,
        #[source]
        source: catflow_core::Error,
    },
    #[error("config error: {0}")]
    Setup(#[from] catflow_core::Error),
}

fn cfg_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Config {
        line,
        msg: msg.into(),
    }
}

/// The eight experiment kinds, one per subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Axioms,
    Prox,
    Sweep,
    Yosida,
    Limits,
    ErrorTable,
    Trajectory,
    DoubleSeq,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Axioms => "axioms",
            Experiment::Prox => "prox",
            Experiment::Sweep => "sweep",
            Experiment::Yosida => "yosida",
            Experiment::Limits => "limits",
            Experiment::ErrorTable => "error-table",
            Experiment::Trajectory => "trajectory",
            Experiment::DoubleSeq => "double-seq",
        }
    }

    /// Fixed per-experiment stream tag, mixed into the seed so that the
    /// same config seed gives every experiment an independent sample
    /// stream.
    fn tag(self) -> u64 {
        match self {
            Experiment::Axioms => 0xA1,
            Experiment::Prox => 0xA2,
            Experiment::Sweep => 0xA3,
            Experiment::Yosida => 0xA4,
            Experiment::Limits => 0xA5,
            Experiment::ErrorTable => 0xA6,
            Experiment::Trajectory => 0xA7,
            Experiment::DoubleSeq => 0xA8,
        }
    }
}

/// SplitMix64 finalizer: the fixed splitting step behind every derived
/// sample stream.
pub fn split_seed(seed: u64, tag: u64) -> u64 {
    let mut z = (seed ^ tag).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Numeric payload for one experiment, validated against its invariants.
pub enum RunParams {
    Axioms {
        samples: u64,
    },
    Prox {
        samples: u64,
        lambda_min: f64,
        lambda_max: f64,
    },
    Sweep {
        x: Point,
        lambdas: Vec<f64>,
    },
    Yosida {
        x: Point,
        lambdas: Vec<f64>,
    },
    Limits {
        x: Point,
        lambdas: Vec<f64>,
        limit_tol: Option<f64>,
    },
    ErrorTable {
        x: Point,
        t: f64,
        ks: Vec<u64>,
        k_ref: u64,
    },
    Trajectory {
        x: Point,
        times: Vec<f64>,
        target_tol: f64,
    },
    DoubleSeq {
        x: Point,
        lambda: f64,
        mu: Vec<f64>,
        j_max: usize,
        k_max: usize,
    },
}

/// A fully validated run: geometry, field, seeds, budgets, and the
/// experiment payload, plus the hash that ties artifacts to their config.
pub struct Prepared {
    pub space: Space,
    pub field: Option<MonotoneField>,
    pub seed: u64,
    pub stream: u64,
    pub config_hash: String,
    pub base: ResolventConfig,
    pub tol: f64,
    pub params: RunParams,
}

// ---------------------------------------------------------------------
// Raw sectioned key-value parsing
// ---------------------------------------------------------------------

#[derive(Debug)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    used: bool,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

#[derive(Debug)]
struct RawConfig {
    sections: Vec<Section>,
}

const SECTION_NAMES: [&str; 3] = ["space", "field", "run"];

impl RawConfig {
    fn parse(text: &str) -> Result<RawConfig, CliError> {
        let mut sections: Vec<Section> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            if let Some(inner) = content.strip_prefix('[') {
                let Some(name) = inner.strip_suffix(']') else {
                    return Err(cfg_err(line, format!("unterminated section header `{content}`")));
                };
                let name = name.trim();
                if !SECTION_NAMES.contains(&name) {
                    return Err(cfg_err(
                        line,
                        format!("unknown section `[{name}]` (expected [space], [field], or [run])"),
                    ));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(cfg_err(line, format!("duplicate section `[{name}]`")));
                }
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let Some(eq) = content.find('=') else {
                return Err(cfg_err(line, format!("expected `key = value`, got `{content}`")));
            };
            let key = content[..eq].trim().to_string();
            let value = content[eq + 1..].trim().to_string();
            if key.is_empty() {
                return Err(cfg_err(line, "empty key before `=`"));
            }
            let Some(section) = sections.last_mut() else {
                return Err(cfg_err(
                    line,
                    format!("key `{key}` appears before any [section] header"),
                ));
            };
            if section.entries.iter().any(|e| e.key == key) {
                return Err(cfg_err(
                    line,
                    format!("duplicate key `{key}` in [{}]", section.name),
                ));
            }
            section.entries.push(Entry {
                key,
                value,
                line,
                used: false,
            });
        }
        Ok(RawConfig { sections })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<(String, usize)> {
        let sec = self.sections.iter_mut().find(|s| s.name == section)?;
        let entry = sec.entries.iter_mut().find(|e| e.key == key && !e.used)?;
        entry.used = true;
        Some((entry.value.clone(), entry.line))
    }

    fn section_line(&self, name: &str) -> Option<usize> {
        self.sections.iter().find(|s| s.name == name).map(|s| s.line)
    }

    /// Reject the first key no experiment step consumed.
    fn finish(&self, experiment: Experiment) -> Result<(), CliError> {
        let mut first: Option<(&Entry, &str)> = None;
        for sec in &self.sections {
            for entry in sec.entries.iter().filter(|e| !e.used) {
                if first.is_none_or(|(e, _)| entry.line < e.line) {
                    first = Some((entry, &sec.name));
                }
            }
        }
        match first {
            Some((entry, sec)) => Err(cfg_err(
                entry.line,
                format!(
                    "key `{}` in [{sec}] is not used by {}",
                    entry.key,
                    experiment.name()
                ),
            )),
            None => Ok(()),
        }
    }
}

// ---------------------------------------------------------------------
// Typed value parsing
// ---------------------------------------------------------------------

fn f64_value(v: &str, line: usize, key: &str) -> Result<f64, CliError> {
    v.trim()
        .parse::<f64>()
        .map_err(|_| cfg_err(line, format!("cannot parse `{v}` as a number for key `{key}`")))
}

fn u64_value(v: &str, line: usize, key: &str) -> Result<u64, CliError> {
    v.trim()
        .parse::<u64>()
        .map_err(|_| cfg_err(line, format!("cannot parse `{v}` as an integer for key `{key}`")))
}

fn usize_value(v: &str, line: usize, key: &str) -> Result<usize, CliError> {
    v.trim()
        .parse::<usize>()
        .map_err(|_| cfg_err(line, format!("cannot parse `{v}` as an integer for key `{key}`")))
}

fn f64_list(v: &str, line: usize, key: &str) -> Result<Vec<f64>, CliError> {
    v.split(',').map(|part| f64_value(part, line, key)).collect()
}

fn u64_list(v: &str, line: usize, key: &str) -> Result<Vec<u64>, CliError> {
    v.split(',').map(|part| u64_value(part, line, key)).collect()
}

/// Strict monotonicity direction of a schedule: ascending, descending, or
/// neither.
fn direction(xs: &[f64]) -> Option<bool> {
    if xs.windows(2).all(|w| w[0] < w[1]) {
        Some(true)
    } else if xs.windows(2).all(|w| w[0] > w[1]) {
        Some(false)
    } else {
        None
    }
}

fn positive_schedule(xs: &[f64], line: usize, key: &str) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(cfg_err(line, format!("`{key}` must list at least one step")));
    }
    if !xs.iter().all(|x| x.is_finite() && *x > 0.0) {
        return Err(cfg_err(line, format!("every `{key}` step must be positive")));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Point, set, and map grammars
// ---------------------------------------------------------------------

/// First occurrence of `sep` outside parentheses.
fn split_top(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Strip one outer pair of parentheses when it spans the whole string.
fn strip_parens(s: &str) -> &str {
    let mut s = s.trim();
    loop {
        if !(s.starts_with('(') && s.ends_with(')')) {
            return s;
        }
        let mut depth = 0usize;
        for (i, c) in s.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 && i + 1 < s.len() {
                        return s;
                    }
                }
                _ => {}
            }
        }
        s = s[1..s.len() - 1].trim();
    }
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse `{}` as a coordinate", part.trim()))
        })
        .collect()
}

fn parse_point(space: &Space, s: &str) -> Result<Point, String> {
    let s = strip_parens(s);
    match space.kind() {
        SpaceKind::Product(..) => {
            let (l, r) = split_top(s, '|')
                .ok_or_else(|| format!("product point needs `<left> | <right>`, got `{s}`"))?;
            let (lf, rf) = space.factors().expect("product space has factors");
            let pl = parse_point(lf, l)?;
            let pr = parse_point(rf, r)?;
            space.pair(&pl, &pr).map_err(|e| e.to_string())
        }
        SpaceKind::Euclidean(_) => {
            let v = parse_floats(s)?;
            space.point(&v).map_err(|e| e.to_string())
        }
        SpaceKind::Hyperbolic(_) => {
            let v = parse_floats(s)?;
            space.lift(&v).map_err(|e| e.to_string())
        }
        SpaceKind::Tree(_) => {
            if let Some(name) = s.strip_prefix("vertex:") {
                return space.vertex(name.trim()).map_err(|e| e.to_string());
            }
            if let Some(rest) = s.strip_prefix("edge:") {
                let (idx, off) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("edge point needs `edge:<index>:<offset>`, got `{s}`"))?;
                let idx: usize = idx
                    .trim()
                    .parse()
                    .map_err(|_| format!("cannot parse edge index `{}`", idx.trim()))?;
                let off: f64 = off
                    .trim()
                    .parse()
                    .map_err(|_| format!("cannot parse edge offset `{}`", off.trim()))?;
                return space.edge_point(idx, off).map_err(|e| e.to_string());
            }
            Err(format!(
                "tree point needs `vertex:<name>` or `edge:<index>:<offset>`, got `{s}`"
            ))
        }
    }
}

/// Split `head(body)` with the closing parenthesis at the end.
fn call_body<'a>(s: &'a str, head: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(head)?.trim_start();
    let inner = rest.strip_prefix('(')?;
    inner.strip_suffix(')')
}

fn parse_set(space: &Space, s: &str) -> Result<ConvexSet, String> {
    let s = s.trim();
    if let Some(body) = call_body(s, "ball") {
        let (p, r) = split_top(body, ';')
            .ok_or_else(|| "ball needs `ball(<center>; <radius>)`".to_string())?;
        let center = parse_point(space, p)?;
        let radius: f64 = r
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse ball radius `{}`", r.trim()))?;
        return ConvexSet::ball(center, radius).map_err(|e| e.to_string());
    }
    if let Some(body) = call_body(s, "halfspace") {
        let (n, o) = split_top(body, ';')
            .ok_or_else(|| "halfspace needs `halfspace(<normal>; <offset>)`".to_string())?;
        let normal = parse_floats(n)?;
        let offset: f64 = o
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse halfspace offset `{}`", o.trim()))?;
        return ConvexSet::halfspace(normal, offset).map_err(|e| e.to_string());
    }
    if let Some(body) = call_body(s, "subtree") {
        let names: Vec<&str> = body.split(',').map(str::trim).collect();
        return ConvexSet::subtree(space, &names).map_err(|e| e.to_string());
    }
    if let Some(body) = call_body(s, "segment") {
        let (a, b) = split_top(body, ';')
            .ok_or_else(|| "segment needs `segment(<point>; <point>)`".to_string())?;
        let pa = parse_point(space, a)?;
        let pb = parse_point(space, b)?;
        return Ok(ConvexSet::segment(pa, pb));
    }
    if let Some(body) = call_body(s, "product") {
        let (l, r) = split_top(body, '|')
            .ok_or_else(|| "product set needs `product(<set> | <set>)`".to_string())?;
        let (lf, rf) = space
            .factors()
            .ok_or_else(|| "product sets need a product space".to_string())?;
        let sl = parse_set(lf, strip_parens(l))?;
        let sr = parse_set(rf, strip_parens(r))?;
        return Ok(ConvexSet::product(sl, sr));
    }
    Err(format!(
        "unknown set `{s}` (expected ball, halfspace, subtree, segment, or product)"
    ))
}

fn parse_map(space: &Space, s: &str) -> Result<MapSpec, String> {
    let s = s.trim();
    match s {
        "identity" => return Ok(MapSpec::Identity),
        "reflection" => return Ok(MapSpec::Reflection),
        _ => {}
    }
    if let Some(body) = call_body(s, "rotation") {
        let theta: f64 = body
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse rotation angle `{}`", body.trim()))?;
        return Ok(MapSpec::Rotation(theta));
    }
    if let Some(body) = call_body(s, "constant") {
        return Ok(MapSpec::Constant(parse_point(space, body)?));
    }
    if let Some(body) = call_body(s, "projection") {
        return Ok(MapSpec::Projection(parse_set(space, body)?));
    }
    Err(format!(
        "unknown map `{s}` (expected identity, reflection, rotation(<angle>), constant(<point>), or projection(<set>))"
    ))
}

// ---------------------------------------------------------------------
// Space and field construction
// ---------------------------------------------------------------------

fn build_space(raw: &mut RawConfig, prefix: &str, dir: &Path) -> Result<Space, CliError> {
    let kind_key = format!("{prefix}kind");
    let Some((kind, line)) = raw.take("space", &kind_key) else {
        return Err(match raw.section_line("space") {
            Some(line) => cfg_err(line, format!("[space] is missing key `{kind_key}`")),
            None => CliError::Invalid("missing [space] section".to_string()),
        });
    };
    match kind.as_str() {
        "euclidean" | "hyperbolic" => {
            let dim_key = format!("{prefix}dim");
            let (v, dline) = raw
                .take("space", &dim_key)
                .ok_or_else(|| cfg_err(line, format!("space kind `{kind}` needs key `{dim_key}`")))?;
            let dim = usize_value(&v, dline, &dim_key)?;
            if kind == "euclidean" {
                Ok(Space::euclidean(dim)?)
            } else {
                Ok(Space::hyperbolic(dim)?)
            }
        }
        "tree" => {
            let file_key = format!("{prefix}tree_file");
            let (v, _) = raw.take("space", &file_key).ok_or_else(|| {
                cfg_err(line, format!("space kind `tree` needs key `{file_key}`"))
            })?;
            let path = dir.join(v.trim());
            let text = fs::read_to_string(&path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            let spec = TreeSpec::parse(&text).map_err(|e| CliError::TreeFile {
                path: path.display().to_string(),
                source: e,
            })?;
            Ok(Space::tree(&spec)?)
        }
        "product" => {
            let left = build_space(raw, &format!("{prefix}left."), dir)?;
            let right = build_space(raw, &format!("{prefix}right."), dir)?;
            Ok(Space::product(left, right))
        }
        other => Err(cfg_err(
            line,
            format!("unknown space kind `{other}` (expected euclidean, hyperbolic, tree, or product)"),
        )),
    }
}

fn point_key(raw: &mut RawConfig, section: &str, key: &str, space: &Space) -> Option<Result<Point, CliError>> {
    let (v, line) = raw.take(section, key)?;
    Some(parse_point(space, &v).map_err(|msg| cfg_err(line, format!("key `{key}`: {msg}"))))
}

fn build_field(raw: &mut RawConfig, space: &Space, experiment: Experiment) -> Result<MonotoneField, CliError> {
    let Some((name, line)) = raw.take("field", "name") else {
        return Err(match raw.section_line("field") {
            Some(line) => cfg_err(line, "[field] is missing key `name`".to_string()),
            None => CliError::Invalid(format!(
                "missing [field] section: {} needs a field",
                experiment.name()
            )),
        });
    };
    let req_point = |raw: &mut RawConfig, key: &str| -> Result<Point, CliError> {
        point_key(raw, "field", key, space)
            .ok_or_else(|| cfg_err(line, format!("field `{name}` needs key `{key}`")))?
    };
    match name.as_str() {
        "quadratic" => {
            let a = req_point(raw, "a")?;
            Ok(catalog::quadratic(space, &a)?)
        }
        "indicator" => {
            let (v, sline) = raw
                .take("field", "set")
                .ok_or_else(|| cfg_err(line, "field `indicator` needs key `set`"))?;
            let set = parse_set(space, &v).map_err(|msg| cfg_err(sline, format!("key `set`: {msg}")))?;
            Ok(catalog::indicator(space, set)?)
        }
        "quadratic_plus_indicator" => {
            let a = req_point(raw, "a")?;
            let (v, sline) = raw
                .take("field", "set")
                .ok_or_else(|| cfg_err(line, "field `quadratic_plus_indicator` needs key `set`"))?;
            let set = parse_set(space, &v).map_err(|msg| cfg_err(sline, format!("key `set`: {msg}")))?;
            Ok(catalog::quadratic_plus_indicator(space, &a, set)?)
        }
        "complementary" => {
            let (v, mline) = raw
                .take("field", "map")
                .ok_or_else(|| cfg_err(line, "field `complementary` needs key `map`"))?;
            let map = parse_map(space, &v).map_err(|msg| cfg_err(mline, format!("key `map`: {msg}")))?;
            Ok(catalog::complementary(space, map)?)
        }
        other => Err(cfg_err(
            line,
            format!(
                "unknown field `{other}` (expected quadratic, indicator, quadratic_plus_indicator, or complementary)"
            ),
        )),
    }
}

// ---------------------------------------------------------------------
// Load and validate a full run
// ---------------------------------------------------------------------

struct RunKeys<'a> {
    raw: &'a mut RawConfig,
    experiment: Experiment,
}

impl RunKeys<'_> {
    fn opt(&mut self, key: &str) -> Option<(String, usize)> {
        self.raw.take("run", key)
    }

    fn req(&mut self, key: &str) -> Result<(String, usize), CliError> {
        self.opt(key).ok_or_else(|| {
            let name = self.experiment.name();
            match self.raw.section_line("run") {
                Some(line) => cfg_err(line, format!("[run] is missing required key `{key}` for {name}")),
                None => CliError::Invalid(format!("missing [run] section with key `{key}` for {name}")),
            }
        })
    }

    fn opt_f64(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        match self.opt(key) {
            Some((v, line)) => f64_value(&v, line, key),
            None => Ok(default),
        }
    }

    fn opt_u64(&mut self, key: &str, default: u64) -> Result<u64, CliError> {
        match self.opt(key) {
            Some((v, line)) => u64_value(&v, line, key),
            None => Ok(default),
        }
    }
}

pub fn load(
    path: &Path,
    experiment: Experiment,
    seed_override: Option<u64>,
) -> Result<Prepared, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let config_hash = hex::encode(Sha256::digest(text.as_bytes()));
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut raw = RawConfig::parse(&text)?;

    let space = build_space(&mut raw, "", dir)?;
    let field = if experiment == Experiment::Axioms {
        if let Some(line) = raw.section_line("field") {
            return Err(cfg_err(line, "[field] section is not used by axioms"));
        }
        None
    } else {
        Some(build_field(&mut raw, &space, experiment)?)
    };

    let mut keys = RunKeys {
        raw: &mut raw,
        experiment,
    };

    if let Some((v, line)) = keys.opt("experiment") {
        if v != experiment.name() {
            return Err(cfg_err(
                line,
                format!(
                    "config declares experiment `{v}` but the `{}` subcommand was invoked",
                    experiment.name()
                ),
            ));
        }
    }

    let seed = keys.opt_u64("seed", 0)?;
    let seed = seed_override.unwrap_or(seed);

    let default_tol = if experiment == Experiment::Axioms { 1e-9 } else { 1e-8 };
    let tol = keys.opt_f64("tol", default_tol)?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Invalid("`tol` must be finite and >= 0".to_string()));
    }
    let prox_tol = keys.opt_f64("prox_tol", ResolventConfig::DEFAULT_TOL)?;
    if !(prox_tol.is_finite() && prox_tol > 0.0) {
        return Err(CliError::Invalid("`prox_tol` must be positive".to_string()));
    }
    let max_iter = keys.opt_u64("max_iter", 200_000)? as usize;
    if max_iter == 0 {
        return Err(CliError::Invalid("`max_iter` must be at least 1".to_string()));
    }
    let base = ResolventConfig::new(1.0).with_tol(prox_tol).with_max_iter(max_iter);

    let space_for_points = space.clone();
    let req_x = |keys: &mut RunKeys| -> Result<Point, CliError> {
        let (v, line) = keys.req("x")?;
        parse_point(&space_for_points, &v).map_err(|msg| cfg_err(line, format!("key `x`: {msg}")))
    };

    let params = match experiment {
        Experiment::Axioms => {
            let samples = keys.opt_u64("samples", 10_000)?;
            if samples == 0 {
                return Err(CliError::Invalid("`samples` must be at least 1".to_string()));
            }
            RunParams::Axioms { samples }
        }
        Experiment::Prox => {
            let samples = keys.opt_u64("samples", 500)?;
            if samples == 0 {
                return Err(CliError::Invalid("`samples` must be at least 1".to_string()));
            }
            let lambda_min = keys.opt_f64("lambda_min", 0.1)?;
            let lambda_max = keys.opt_f64("lambda_max", 10.0)?;
            if !(lambda_min.is_finite() && lambda_min > 0.0 && lambda_max >= lambda_min) {
                return Err(CliError::Invalid(
                    "`lambda_min` and `lambda_max` must satisfy 0 < lambda_min <= lambda_max".to_string(),
                ));
            }
            RunParams::Prox {
                samples,
                lambda_min,
                lambda_max,
            }
        }
        Experiment::Sweep => {
            let x = req_x(&mut keys)?;
            let (v, line) = keys.req("lambdas")?;
            let lambdas = f64_list(&v, line, "lambdas")?;
            positive_schedule(&lambdas, line, "lambdas")?;
            if lambdas.len() > 1 && direction(&lambdas).is_none() {
                return Err(cfg_err(line, "`lambdas` must be strictly monotone"));
            }
            RunParams::Sweep { x, lambdas }
        }
        Experiment::Yosida => {
            let x = req_x(&mut keys)?;
            let (v, line) = keys.req("lambdas")?;
            let lambdas = f64_list(&v, line, "lambdas")?;
            positive_schedule(&lambdas, line, "lambdas")?;
            if lambdas.len() > 1 && direction(&lambdas) != Some(true) {
                return Err(cfg_err(line, "`lambdas` must be strictly ascending"));
            }
            RunParams::Yosida { x, lambdas }
        }
        Experiment::Limits => {
            let x = req_x(&mut keys)?;
            let (v, line) = keys.req("lambdas")?;
            let lambdas = f64_list(&v, line, "lambdas")?;
            positive_schedule(&lambdas, line, "lambdas")?;
            if lambdas.len() > 1 && direction(&lambdas) != Some(true) {
                return Err(cfg_err(line, "`lambdas` must be strictly ascending"));
            }
            let limit_tol = match keys.opt("limit_tol") {
                Some((v, line)) => {
                    let lt = f64_value(&v, line, "limit_tol")?;
                    if !(lt.is_finite() && lt > 0.0) {
                        return Err(cfg_err(line, "`limit_tol` must be positive"));
                    }
                    Some(lt)
                }
                None => None,
            };
            RunParams::Limits { x, lambdas, limit_tol }
        }
        Experiment::ErrorTable => {
            let x = req_x(&mut keys)?;
            let (v, line) = keys.req("t")?;
            let t = f64_value(&v, line, "t")?;
            if !(t.is_finite() && t >= 0.0) {
                return Err(cfg_err(line, "`t` must be finite and >= 0"));
            }
            let (v, line) = keys.req("k")?;
            let ks = u64_list(&v, line, "k")?;
            if ks.is_empty() || ks.contains(&0) {
                return Err(cfg_err(line, "`k` must list positive step counts"));
            }
            let k_ref = keys.opt_u64("k_ref", 8192)?;
            if k_ref == 0 {
                return Err(CliError::Invalid("`k_ref` must be positive".to_string()));
            }
            RunParams::ErrorTable { x, t, ks, k_ref }
        }
        Experiment::Trajectory => {
            let x = req_x(&mut keys)?;
            let (v, line) = keys.req("times")?;
            let times = f64_list(&v, line, "times")?;
            if times.is_empty() {
                return Err(cfg_err(line, "`times` must list at least one time"));
            }
            if !times.iter().all(|t| t.is_finite() && *t >= 0.0) {
                return Err(cfg_err(line, "every time must be finite and >= 0"));
            }
            if !times.windows(2).all(|w| w[0] <= w[1]) {
                return Err(cfg_err(line, "`times` must be nondecreasing"));
            }
            let (v, line) = keys.req("target_tol")?;
            let target_tol = f64_value(&v, line, "target_tol")?;
            if !(target_tol.is_finite() && target_tol > 0.0) {
                return Err(cfg_err(line, "`target_tol` must be positive"));
            }
            RunParams::Trajectory { x, times, target_tol }
        }
        Experiment::DoubleSeq => {
            let x = req_x(&mut keys)?;
            let (v, line) = keys.req("lambda")?;
            let lambda = f64_value(&v, line, "lambda")?;
            if !(lambda.is_finite() && lambda > 0.0) {
                return Err(cfg_err(line, "`lambda` must be positive"));
            }
            let (v, mline) = keys.req("mu")?;
            let mu = f64_list(&v, mline, "mu")?;
            positive_schedule(&mu, mline, "mu")?;
            if !mu.iter().all(|m| *m <= lambda) {
                return Err(cfg_err(mline, "every `mu` step must lie in (0, lambda]"));
            }
            let j_max = match keys.opt("j_max") {
                Some((v, line)) => usize_value(&v, line, "j_max")?,
                None => mu.len(),
            };
            if j_max > mu.len() {
                return Err(cfg_err(mline, "`j_max` exceeds the length of `mu`"));
            }
            let k_max = match keys.opt("k_max") {
                Some((v, line)) => usize_value(&v, line, "k_max")?,
                None => 8,
            };
            RunParams::DoubleSeq {
                x,
                lambda,
                mu,
                j_max,
                k_max,
            }
        }
    };

    raw.finish(experiment)?;

    Ok(Prepared {
        space,
        field,
        seed,
        stream: split_seed(seed, experiment.tag()),
        config_hash,
        base,
        tol,
        params,
    })
}
