//! Job descriptions and their `key = value` text form.
//!
//! ```text
//! [job]
//! mode = sweep2d
//! outputs = m1_A, m1_B, p_max
//!
//! [system]
//! n_spins = 2
//! gamma = 1
//! omega = 0.1, 0
//! g = 0.15
//! ```
//!
//! `#` starts a comment. Lists are comma separated; a single value is
//! repeated for every spin (or every bond for `g`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use spinsync::analytics::{MomentSolver, RateUnits};
use spinsync::measures::MomentTarget;
use spinsync::perturbation::{Monomial, MAX_ORDER};
use spinsync::system::MAX_SPINS;
use spinsync::SystemConfig;

use crate::quantity::{chain_pairs, EntropyBase, Quantity};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if self.field.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "`{}`: {}", self.field, self.message)
        }
    }
}

fn fail<T>(line: Option<usize>, field: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError { line, field: field.to_string(), message: message.into() })
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name { $($variant),+ }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($name::$variant => $text),+ })
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!("expected one of {}, got `{s}`", [$($text),+].join(" | "))),
                }
            }
        }
    };
}

keyword_enum!(Mode {
    Steady => "steady",
    Dist => "dist",
    Sweep2d => "sweep2d",
    Locus => "locus",
    Perturb => "perturb",
    Entangle => "entangle",
});

keyword_enum!(Format { Csv => "csv", Json => "json" });

keyword_enum!(Scale { Log => "log", Linear => "linear" });

keyword_enum!(Param { GammaG => "gamma_g", GammaD => "gamma_d", Omega => "omega", G => "g" });

keyword_enum!(LocusKind { M1A => "m1A", M1AB => "m1AB", Width => "width" });

keyword_enum!(Units { GammaD => "gamma_d", Sum => "sum" });

keyword_enum!(Solver { Exact => "exact", Asymptotic => "asymptotic" });

impl From<Units> for RateUnits {
    fn from(u: Units) -> Self {
        match u {
            Units::GammaD => RateUnits::GammaD,
            Units::Sum => RateUnits::Sum,
        }
    }
}

impl From<Solver> for MomentSolver {
    fn from(s: Solver) -> Self {
        match s {
            Solver::Exact => MomentSolver::Exact,
            Solver::Asymptotic => MomentSolver::Asymptotic,
        }
    }
}

/// One entry of a parameter list, e.g. `omega.0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldRef {
    pub param: Param,
    pub index: usize,
}

impl fmt::Display for FieldRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.param, self.index)
    }
}

impl FieldRef {
    fn len_for(param: Param, n_spins: usize) -> usize {
        match param {
            Param::G => n_spins - 1,
            _ => n_spins,
        }
    }

    pub fn set(&self, config: &mut SystemConfig, value: f64) {
        let list = match self.param {
            Param::GammaG => &mut config.gamma_g,
            Param::GammaD => &mut config.gamma_d,
            Param::Omega => &mut config.omega,
            Param::G => &mut config.g,
        };
        list[self.index] = value;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    /// Every listed field takes the axis value.
    pub fields: Vec<FieldRef>,
    pub scale: Scale,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * t,
                    Scale::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }

    /// Column header: the tied fields joined by `+`.
    pub fn label(&self) -> String {
        self.fields.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("+")
    }

    pub fn apply(&self, config: &mut SystemConfig, value: f64) {
        for f in &self.fields {
            f.set(config, value);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x: Axis,
    pub y: Axis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistSpec {
    pub samples: usize,
    /// Also write the two-angle table.
    pub joint: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocusSpec {
    pub target: LocusKind,
    pub g: Vec<f64>,
    pub omega: f64,
    pub units: Units,
    pub bracket: Option<(f64, f64)>,
    pub scan_min: f64,
    pub scan_max: f64,
    pub scan_count: usize,
    pub solver: Solver,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbSpec {
    pub max_order: usize,
    pub target: MomentTarget,
    pub moment_order: u8,
    /// Empty: per-order series at the `[system]` point.
    pub monomials: Vec<Monomial>,
    pub drive: Option<Vec<f64>>,
    pub coupling: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub mode: Mode,
    pub system: SystemConfig,
    pub grid: GridSpec,
    /// Empty selects the mode's defaults.
    pub outputs: Vec<Quantity>,
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Zero uses every available core.
    pub workers: usize,
    pub entropy_base: EntropyBase,
    pub dist: DistSpec,
    pub locus: LocusSpec,
    pub perturb: PerturbSpec,
}

fn default_axis(param: Param) -> Axis {
    Axis {
        fields: vec![FieldRef { param, index: 0 }],
        scale: Scale::Log,
        min: 1e-2,
        max: 10.0,
        count: 50,
    }
}

impl Default for JobSpec {
    fn default() -> Self {
        Self {
            mode: Mode::Steady,
            system: SystemConfig::equal_rates(2, 1.0),
            grid: GridSpec { x: default_axis(Param::Omega), y: default_axis(Param::G) },
            outputs: vec![],
            out: None,
            format: Format::Csv,
            workers: 0,
            entropy_base: EntropyBase::E,
            dist: DistSpec { samples: 360, joint: true },
            locus: LocusSpec {
                target: LocusKind::M1AB,
                g: vec![0.05],
                omega: 1e-3,
                units: Units::Sum,
                bracket: None,
                scan_min: 1e-4,
                scan_max: 1e2,
                scan_count: 120,
                solver: Solver::Exact,
                tolerance: 1e-10,
            },
            perturb: PerturbSpec {
                max_order: 4,
                target: MomentTarget::Pair(0, 1),
                moment_order: 2,
                monomials: vec![],
                drive: None,
                coupling: None,
            },
        }
    }
}

impl JobSpec {
    /// Requested outputs, or the defaults of the mode.
    pub fn effective_outputs(&self) -> Vec<Quantity> {
        if !self.outputs.is_empty() {
            return self.outputs.clone();
        }
        let n = self.system.n_spins;
        let pairs = chain_pairs(n);
        match self.mode {
            Mode::Entangle => {
                let mut q = Vec::new();
                for &(i, j) in &pairs {
                    q.push(Quantity::MutualInformation(i, j));
                    q.push(Quantity::Negativity(i, j));
                    q.push(Quantity::Correlation { order: 1, i, j });
                    q.push(Quantity::Correlation { order: 2, i, j });
                }
                q.push(Quantity::PMax);
                q
            }
            _ => {
                let mut q = Vec::new();
                for order in [1, 2] {
                    q.extend((0..n).map(|j| Quantity::Moment { target: MomentTarget::Site(j), order }));
                    q.extend(pairs.iter().map(|&(i, j)| Quantity::Moment { target: MomentTarget::Pair(i, j), order }));
                }
                q.push(Quantity::PMax);
                q
            }
        }
    }

    /// Checks everything a text config could get wrong.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.system.n_spins;
        if n == 0 || n > MAX_SPINS {
            return fail(None, "system.n_spins", format!("must be 1..={MAX_SPINS}, got {n}"));
        }
        if let Err(e) = self.system.validate() {
            return match e {
                spinsync::Error::InvalidConfig { field, reason } => fail(None, &format!("system.{field}"), reason),
                other => fail(None, "system", other.to_string()),
            };
        }
        for q in &self.outputs {
            if let Err(m) = q.check(n) {
                return fail(None, "job.outputs", m);
            }
        }
        match self.mode {
            Mode::Sweep2d | Mode::Entangle => self.validate_grid(),
            Mode::Dist if self.dist.samples < 1 => fail(None, "dist.samples", "must be at least 1"),
            Mode::Locus => self.validate_locus(),
            Mode::Perturb => self.validate_perturb(),
            _ => Ok(()),
        }
    }

    fn validate_grid(&self) -> Result<(), ConfigError> {
        let n = self.system.n_spins;
        for (name, axis) in [("x", &self.grid.x), ("y", &self.grid.y)] {
            validate_axis(name, axis, n)?;
        }
        for a in &self.grid.x.fields {
            if self.grid.y.fields.contains(a) {
                return fail(None, "grid.y_field", format!("`{a}` is already swept by the x axis"));
            }
        }
        Ok(())
    }

    fn validate_locus(&self) -> Result<(), ConfigError> {
        let l = &self.locus;
        if l.g.is_empty() {
            return fail(None, "locus.g", "needs at least one coupling");
        }
        if let Some(g) = l.g.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            return fail(None, "locus.g", format!("couplings must be finite and > 0, got {g}"));
        }
        if !(l.omega.is_finite() && l.omega > 0.0) {
            return fail(None, "locus.omega", format!("must be finite and > 0, got {}", l.omega));
        }
        if let Some((lo, hi)) = l.bracket {
            if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
                return fail(None, "locus.bracket", format!("needs 0 < lower < upper, got {lo}, {hi}"));
            }
        }
        if !(l.scan_min.is_finite() && l.scan_min > 0.0) {
            return fail(None, "locus.scan_min", format!("must be finite and > 0, got {}", l.scan_min));
        }
        if !(l.scan_max.is_finite() && l.scan_max > l.scan_min) {
            return fail(None, "locus.scan_max", format!("must be finite and > scan_min, got {}", l.scan_max));
        }
        if l.scan_count < 1 {
            return fail(None, "locus.scan_count", "must be at least 1");
        }
        if !(l.tolerance.is_finite() && l.tolerance > 0.0) {
            return fail(None, "locus.tolerance", format!("must be finite and > 0, got {}", l.tolerance));
        }
        Ok(())
    }

    fn validate_perturb(&self) -> Result<(), ConfigError> {
        let n = self.system.n_spins;
        let p = &self.perturb;
        if !(1..=MAX_ORDER).contains(&p.max_order) {
            return fail(None, "perturb.max_order", format!("must be 1..={MAX_ORDER}, got {}", p.max_order));
        }
        let moment = Quantity::Moment { target: p.target, order: p.moment_order };
        if let Err(m) = moment.check(n) {
            return fail(None, "perturb.moment", m);
        }
        if let Some(&(a, b)) = p.monomials.iter().find(|(a, b)| (a + b) as usize > MAX_ORDER || a + b == 0) {
            return fail(None, "perturb.monomials", format!("degree of {a}:{b} must be 1..={MAX_ORDER}"));
        }
        if n == 1 && p.coupling.is_some() {
            return fail(None, "perturb.coupling", "a single spin has no couplings");
        }
        for (field, list, len) in [("perturb.drive", &p.drive, n), ("perturb.coupling", &p.coupling, n - 1)] {
            if let Some(list) = list {
                if list.len() != len {
                    return fail(None, field, format!("expected {len} values, got {}", list.len()));
                }
                if list.iter().any(|x| !x.is_finite()) {
                    return fail(None, field, "values must be finite");
                }
            }
        }
        Ok(())
    }
}

fn validate_axis(name: &str, axis: &Axis, n_spins: usize) -> Result<(), ConfigError> {
    let field = |k: &str| format!("grid.{name}_{k}");
    if axis.fields.is_empty() {
        return fail(None, &field("field"), "needs at least one parameter");
    }
    for (k, f) in axis.fields.iter().enumerate() {
        let len = FieldRef::len_for(f.param, n_spins);
        if f.index >= len {
            return fail(None, &field("field"), format!("`{f}` is out of range ({len} entries)"));
        }
        if axis.fields[..k].contains(f) {
            return fail(None, &field("field"), format!("`{f}` listed twice"));
        }
    }
    if axis.count < 1 {
        return fail(None, &field("count"), "must be at least 1");
    }
    if !(axis.min.is_finite() && axis.min >= 0.0) {
        return fail(None, &field("min"), format!("must be finite and >= 0, got {}", axis.min));
    }
    if !(axis.max.is_finite() && axis.max >= axis.min) {
        return fail(None, &field("max"), format!("must be finite and >= min, got {}", axis.max));
    }
    if axis.scale == Scale::Log && axis.min <= 0.0 {
        return fail(None, &field("min"), "a log axis needs min > 0");
    }
    Ok(())
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Floats are written in their shortest round-trip form.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for JobSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[job]")?;
        writeln!(f, "mode = {}", self.mode)?;
        if !self.outputs.is_empty() {
            writeln!(f, "outputs = {}", join(&self.outputs))?;
        }
        writeln!(f, "format = {}", self.format)?;
        writeln!(f, "workers = {}", self.workers)?;
        if let Some(out) = &self.out {
            writeln!(f, "out = {}", out.display())?;
        }
        writeln!(f, "entropy_base = {}", self.entropy_base)?;

        let s = &self.system;
        writeln!(f, "\n[system]")?;
        writeln!(f, "n_spins = {}", s.n_spins)?;
        writeln!(f, "gamma_g = {}", nums(&s.gamma_g))?;
        writeln!(f, "gamma_d = {}", nums(&s.gamma_d))?;
        writeln!(f, "omega = {}", nums(&s.omega))?;
        if !s.g.is_empty() {
            writeln!(f, "g = {}", nums(&s.g))?;
        }

        writeln!(f, "\n[grid]")?;
        for (name, a) in [("x", &self.grid.x), ("y", &self.grid.y)] {
            writeln!(f, "{name}_field = {}", join(&a.fields))?;
            writeln!(f, "{name}_scale = {}", a.scale)?;
            writeln!(f, "{name}_min = {}", num(a.min))?;
            writeln!(f, "{name}_max = {}", num(a.max))?;
            writeln!(f, "{name}_count = {}", a.count)?;
        }

        writeln!(f, "\n[dist]")?;
        writeln!(f, "samples = {}", self.dist.samples)?;
        writeln!(f, "joint = {}", self.dist.joint)?;

        let l = &self.locus;
        writeln!(f, "\n[locus]")?;
        writeln!(f, "target = {}", l.target)?;
        writeln!(f, "g = {}", nums(&l.g))?;
        writeln!(f, "omega = {}", num(l.omega))?;
        writeln!(f, "units = {}", l.units)?;
        if let Some((lo, hi)) = l.bracket {
            writeln!(f, "bracket = {}, {}", num(lo), num(hi))?;
        }
        writeln!(f, "scan_min = {}", num(l.scan_min))?;
        writeln!(f, "scan_max = {}", num(l.scan_max))?;
        writeln!(f, "scan_count = {}", l.scan_count)?;
        writeln!(f, "solver = {}", l.solver)?;
        writeln!(f, "tolerance = {}", num(l.tolerance))?;

        let p = &self.perturb;
        writeln!(f, "\n[perturb]")?;
        writeln!(f, "max_order = {}", p.max_order)?;
        writeln!(f, "moment = {}", Quantity::Moment { target: p.target, order: p.moment_order })?;
        if !p.monomials.is_empty() {
            let m: Vec<String> = p.monomials.iter().map(|(a, b)| format!("{a}:{b}")).collect();
            writeln!(f, "monomials = {}", m.join(", "))?;
        }
        if let Some(d) = &p.drive {
            writeln!(f, "drive = {}", nums(d))?;
        }
        if let Some(c) = &p.coupling {
            writeln!(f, "coupling = {}", nums(c))?;
        }
        Ok(())
    }
}

const SECTIONS: [&str; 6] = ["job", "system", "grid", "dist", "locus", "perturb"];

struct Entry {
    value: String,
    line: usize,
}

/// Raw `section.key → value` table, drained as keys are consumed.
struct Raw {
    entries: BTreeMap<String, Entry>,
}

impl Raw {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        let mut section: Option<String> = None;
        for (k, raw_line) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return fail(Some(line), "", "unterminated section header");
                };
                let name = name.trim();
                if !SECTIONS.contains(&name) {
                    return fail(Some(line), name, format!("unknown section; expected one of {}", SECTIONS.join(", ")));
                }
                section = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return fail(Some(line), "", format!("expected `key = value`, got `{content}`"));
            };
            let key = key.trim();
            let Some(sec) = &section else {
                return fail(Some(line), key, "key appears before any section header");
            };
            if key.is_empty() {
                return fail(Some(line), "", "empty key");
            }
            let full = format!("{sec}.{key}");
            if let Some(prev) = entries.get(&full) {
                let prev: &Entry = prev;
                return fail(Some(line), &full, format!("duplicate key (first set on line {})", prev.line));
            }
            entries.insert(full, Entry { value: value.trim().to_string(), line });
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn get<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .or_else(|err: T::Err| fail(Some(e.line), key, format!("{err}"))),
        }
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<(Vec<T>, usize)>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(e) => {
                let mut out = Vec::new();
                for item in e.value.split(',') {
                    let item = item.trim();
                    match item.parse() {
                        Ok(v) => out.push(v),
                        Err(err) => return fail(Some(e.line), key, format!("bad list item `{item}`: {err}")),
                    }
                }
                Ok(Some((out, e.line)))
            }
        }
    }

    /// A list broadcast to `len` entries when a single value is given.
    fn broadcast(&mut self, key: &str, len: usize) -> Result<Option<Vec<f64>>, ConfigError> {
        match self.list::<f64>(key)? {
            None => Ok(None),
            Some((v, _)) if v.len() == len => Ok(Some(v)),
            Some((v, _)) if v.len() == 1 => Ok(Some(vec![v[0]; len])),
            Some((v, line)) => fail(Some(line), key, format!("expected 1 or {len} values, got {}", v.len())),
        }
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_iter().min_by_key(|(_, e)| e.line) {
            None => Ok(()),
            Some((key, e)) => fail(Some(e.line), &key, "unknown key"),
        }
    }
}

fn parse_field_list(value: &str, line: usize, key: &str, n_spins: usize) -> Result<Vec<FieldRef>, ConfigError> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let item = item.trim();
        let (name, index) = match item.split_once('.') {
            Some((name, idx)) => match idx.parse::<usize>() {
                Ok(i) => (name, Some(i)),
                Err(_) => return fail(Some(line), key, format!("bad index in `{item}`")),
            },
            None => (item, None),
        };
        let param: Param = match name {
            // both rates of every spin
            "gamma" if index.is_none() => {
                for param in [Param::GammaG, Param::GammaD] {
                    out.extend((0..n_spins).map(|index| FieldRef { param, index }));
                }
                continue;
            }
            _ => name.parse().or_else(|e: String| fail(Some(line), key, e))?,
        };
        match index {
            Some(index) => out.push(FieldRef { param, index }),
            None => out.extend((0..FieldRef::len_for(param, n_spins)).map(|index| FieldRef { param, index })),
        }
    }
    if out.is_empty() {
        return fail(Some(line), key, format!("`{value}` selects no parameter"));
    }
    Ok(out)
}

fn parse_moment(value: &str, line: usize, key: &str) -> Result<(MomentTarget, u8), ConfigError> {
    match value.parse::<Quantity>() {
        Ok(Quantity::Moment { target, order }) => Ok((target, order)),
        _ => fail(Some(line), key, format!("expected a moment such as m2_AB, got `{value}`")),
    }
}

fn parse_monomials(value: &str, line: usize, key: &str) -> Result<Vec<Monomial>, ConfigError> {
    value
        .split(',')
        .map(|item| {
            let item = item.trim();
            let parsed = item
                .split_once(':')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
            parsed.map_or_else(|| fail(Some(line), key, format!("expected `a:b`, got `{item}`")), Ok)
        })
        .collect()
}

/// Parses and validates a job description; every omitted key takes its default.
pub fn parse_config(text: &str) -> Result<JobSpec, ConfigError> {
    let mut raw = Raw::parse(text)?;
    let mut spec = JobSpec::default();

    if let Some(m) = raw.get("job.mode")? {
        spec.mode = m;
    }
    if let Some((q, _)) = raw.list::<Quantity>("job.outputs")? {
        spec.outputs = q;
    }
    if let Some(v) = raw.get("job.format")? {
        spec.format = v;
    }
    if let Some(v) = raw.get("job.workers")? {
        spec.workers = v;
    }
    if let Some(e) = raw.take("job.out") {
        if e.value.is_empty() {
            return fail(Some(e.line), "job.out", "empty path");
        }
        spec.out = Some(PathBuf::from(e.value));
    }
    if let Some(v) = raw.get("job.entropy_base")? {
        spec.entropy_base = v;
    }

    let n: usize = raw.get("system.n_spins")?.unwrap_or(2);
    if n == 0 || n > MAX_SPINS {
        return fail(None, "system.n_spins", format!("must be 1..={MAX_SPINS}, got {n}"));
    }
    let gamma: f64 = raw.get("system.gamma")?.unwrap_or(1.0);
    let mut system = SystemConfig::equal_rates(n, gamma);
    if let Some(v) = raw.broadcast("system.gamma_g", n)? {
        system.gamma_g = v;
    }
    if let Some(v) = raw.broadcast("system.gamma_d", n)? {
        system.gamma_d = v;
    }
    if let Some(v) = raw.broadcast("system.omega", n)? {
        system.omega = v;
    }
    if n > 1 {
        if let Some(v) = raw.broadcast("system.g", n - 1)? {
            system.g = v;
        }
    } else if let Some(e) = raw.take("system.g") {
        return fail(Some(e.line), "system.g", "a single spin has no couplings");
    }
    spec.system = system;

    for (name, axis) in [("x", &mut spec.grid.x), ("y", &mut spec.grid.y)] {
        let key = format!("grid.{name}_field");
        if let Some(e) = raw.take(&key) {
            axis.fields = parse_field_list(&e.value, e.line, &key, n)?;
        }
        if let Some(v) = raw.get(&format!("grid.{name}_scale"))? {
            axis.scale = v;
        }
        if let Some(v) = raw.get(&format!("grid.{name}_min"))? {
            axis.min = v;
        }
        if let Some(v) = raw.get(&format!("grid.{name}_max"))? {
            axis.max = v;
        }
        if let Some(v) = raw.get(&format!("grid.{name}_count"))? {
            axis.count = v;
        }
    }

    if let Some(v) = raw.get("dist.samples")? {
        spec.dist.samples = v;
    }
    if let Some(v) = raw.get("dist.joint")? {
        spec.dist.joint = v;
    }

    let l = &mut spec.locus;
    if let Some(v) = raw.get("locus.target")? {
        l.target = v;
    }
    if let Some((v, _)) = raw.list("locus.g")? {
        l.g = v;
    }
    if let Some(v) = raw.get("locus.omega")? {
        l.omega = v;
    }
    if let Some(v) = raw.get("locus.units")? {
        l.units = v;
    }
    if let Some((v, line)) = raw.list::<f64>("locus.bracket")? {
        match v.as_slice() {
            &[lo, hi] => l.bracket = Some((lo, hi)),
            _ => return fail(Some(line), "locus.bracket", format!("expected 2 values, got {}", v.len())),
        }
    }
    if let Some(v) = raw.get("locus.scan_min")? {
        l.scan_min = v;
    }
    if let Some(v) = raw.get("locus.scan_max")? {
        l.scan_max = v;
    }
    if let Some(v) = raw.get("locus.scan_count")? {
        l.scan_count = v;
    }
    if let Some(v) = raw.get("locus.solver")? {
        l.solver = v;
    }
    if let Some(v) = raw.get("locus.tolerance")? {
        l.tolerance = v;
    }

    let p = &mut spec.perturb;
    if let Some(v) = raw.get("perturb.max_order")? {
        p.max_order = v;
    }
    if let Some(e) = raw.take("perturb.moment") {
        (p.target, p.moment_order) = parse_moment(&e.value, e.line, "perturb.moment")?;
    }
    if let Some(e) = raw.take("perturb.monomials") {
        p.monomials = parse_monomials(&e.value, e.line, "perturb.monomials")?;
    }
    if let Some((v, _)) = raw.list("perturb.drive")? {
        p.drive = Some(v);
    }
    if let Some((v, _)) = raw.list("perturb.coupling")? {
        p.coupling = Some(v);
    }

    raw.finish()?;
    check_finite(&spec)?;
    spec.validate()?;
    Ok(spec)
}

/// Every number of a spec must be finite, including those of sections the mode ignores.
fn check_finite(spec: &JobSpec) -> Result<(), ConfigError> {
    let s = &spec.system;
    let l = &spec.locus;
    let p = &spec.perturb;
    let mut fields: Vec<(&str, Vec<f64>)> = vec![
        ("system.gamma_g", s.gamma_g.clone()),
        ("system.gamma_d", s.gamma_d.clone()),
        ("system.omega", s.omega.clone()),
        ("system.g", s.g.clone()),
        ("grid.x_min", vec![spec.grid.x.min]),
        ("grid.x_max", vec![spec.grid.x.max]),
        ("grid.y_min", vec![spec.grid.y.min]),
        ("grid.y_max", vec![spec.grid.y.max]),
        ("locus.g", l.g.clone()),
        ("locus.omega", vec![l.omega]),
        ("locus.bracket", l.bracket.map_or(vec![], |(a, b)| vec![a, b])),
        ("locus.scan_min", vec![l.scan_min]),
        ("locus.scan_max", vec![l.scan_max]),
        ("locus.tolerance", vec![l.tolerance]),
    ];
    fields.push(("perturb.drive", p.drive.clone().unwrap_or_default()));
    fields.push(("perturb.coupling", p.coupling.clone().unwrap_or_default()));
    for (field, values) in fields {
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return fail(None, field, format!("must be finite, got {x}"));
        }
    }
    Ok(())
}
