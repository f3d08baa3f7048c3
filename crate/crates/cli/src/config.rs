//! Flat dotted-key configuration.
//!
//! Every key has a built-in default. A config file (TOML, either
//! `[section] key = v` or `section.key = v`) and repeated `--set key=value`
//! flags are applied on top, flags last. Unknown keys and type mismatches are
//! rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use eitkerr::qnd::MaterialParams;

use crate::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    FloatList(Vec<f64>),
    IntList(Vec<i64>),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Float(_) => "float",
            Value::Int(_) => "integer",
            Value::Bool(_) => "boolean",
            Value::Str(_) => "string",
            Value::FloatList(_) => "list of floats",
            Value::IntList(_) => "list of integers",
        }
    }

    /// Converts `v` to the same shape as `self`, widening integers to floats.
    fn coerce(&self, v: &toml::Value) -> Option<Value> {
        let as_f64 = |v: &toml::Value| match v {
            toml::Value::Float(x) => Some(*x),
            toml::Value::Integer(i) => Some(*i as f64),
            _ => None,
        };
        let as_list = |v: &toml::Value| match v {
            toml::Value::Array(a) => Some(a.clone()),
            other => Some(vec![other.clone()]),
        };
        match (self, v) {
            (Value::Float(_), v) => as_f64(v).map(Value::Float),
            (Value::Int(_), toml::Value::Integer(i)) => Some(Value::Int(*i)),
            (Value::Bool(_), toml::Value::Boolean(b)) => Some(Value::Bool(*b)),
            (Value::Str(_), toml::Value::String(s)) => Some(Value::Str(s.clone())),
            (Value::FloatList(_), v) => as_list(v)?
                .iter()
                .map(as_f64)
                .collect::<Option<Vec<_>>>()
                .map(Value::FloatList),
            (Value::IntList(_), v) => as_list(v)?
                .iter()
                .map(|x| x.as_integer())
                .collect::<Option<Vec<_>>>()
                .map(Value::IntList),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T: fmt::Debug>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
            let parts: Vec<String> = xs.iter().map(|x| format!("{x:?}")).collect();
            write!(f, "[{}]", parts.join(","))
        }
        match self {
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => write!(f, "{s}"),
            Value::FloatList(xs) => list(f, xs),
            Value::IntList(xs) => list(f, xs),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    values: BTreeMap<String, Value>,
}

fn axis(
    map: &mut BTreeMap<String, Value>,
    prefix: &str,
    start: f64,
    stop: f64,
    count: i64,
    scale: &str,
) {
    map.insert(format!("{prefix}.start"), Value::Float(start));
    map.insert(format!("{prefix}.stop"), Value::Float(stop));
    map.insert(format!("{prefix}.count"), Value::Int(count));
    map.insert(format!("{prefix}.scale"), Value::Str(scale.into()));
}

impl Default for Config {
    fn default() -> Self {
        let mut m = BTreeMap::new();
        let f = |x: f64| Value::Float(x);
        m.insert("lambda.omega1".into(), f(0.5));
        m.insert("lambda.omega2".into(), f(0.1));
        m.insert("lambda.delta".into(), f(0.0));
        m.insert("lambda.two_photon".into(), f(0.0));
        m.insert("line.gamma".into(), f(1.0));
        m.insert("line.nodes".into(), Value::Int(64));
        axis(&mut m, "spectrum.delta", -0.5, 0.5, 201, "linear");
        m.insert(
            "spectrum.mutual".into(),
            Value::FloatList(vec![0.0, 2.0, 4.0]),
        );
        m.insert("spectrum.ensemble".into(), Value::Bool(true));
        axis(&mut m, "map.omega1", 0.01, 2.0, 60, "log");
        axis(&mut m, "map.omega2", 0.01, 2.0, 60, "log");
        m.insert("bandwidth.absorption".into(), f(0.01));
        axis(&mut m, "bandwidth.omega1", 0.01, 1.0, 21, "log");
        axis(&mut m, "bandwidth.omega2", 0.01, 1.0, 21, "log");
        axis(&mut m, "jcurve.d", 0.0, 5.0, 501, "linear");
        m.insert("scalings.kappa".into(), f(0.02));
        axis(&mut m, "scalings.n1", 1.0, 1e6, 121, "log");
        m.insert("qnd.alpha".into(), Value::FloatList(vec![1.0, 25.0]));
        m.insert("qnd.n3".into(), Value::IntList(vec![0, 1, 2]));
        m.insert("qnd.time_model".into(), Value::Str("per-fock".into()));
        m.insert("qnd.coherence".into(), Value::Str("lossless".into()));
        m.insert("qnd.n_max".into(), Value::Int(0));
        m.insert("qnd.q_grids".into(), Value::Bool(true));
        m.insert("qnd.q_resolution".into(), Value::Int(0));
        let mut c = Config { values: m };
        c.apply_material(&MaterialParams::nv());
        c
    }
}

impl Config {
    /// Loads the material preset named `name` (only `nv`).
    pub fn apply_preset(&mut self, name: &str) -> Result<(), CliError> {
        match name {
            "nv" => {
                self.apply_material(&MaterialParams::nv());
                Ok(())
            }
            other => Err(CliError::Config(format!(
                "unknown preset `{other}` (available: nv)"
            ))),
        }
    }

    fn apply_material(&mut self, m: &MaterialParams) {
        let fields = [
            ("wavelength", m.wavelength),
            ("gamma_sp", m.gamma_sp),
            ("gamma_inh", m.gamma_inh),
            ("density", m.density),
            ("length", m.length),
            ("dipole", m.dipole),
            ("eps_r", m.eps_r),
            ("bulk_index", m.bulk_index),
            ("bandwidth", m.bandwidth),
            ("kappa", m.kappa),
            ("omega2", m.omega2),
            ("j_scaling", m.j_scaling),
            ("mean_detuning", m.mean_detuning),
        ];
        for (k, v) in fields {
            self.values.insert(format!("material.{k}"), Value::Float(v));
        }
    }

    pub fn material(&self) -> Result<MaterialParams, CliError> {
        let g = |k: &str| self.f64(&format!("material.{k}"));
        Ok(MaterialParams {
            wavelength: g("wavelength")?,
            gamma_sp: g("gamma_sp")?,
            gamma_inh: g("gamma_inh")?,
            density: g("density")?,
            length: g("length")?,
            dipole: g("dipole")?,
            eps_r: g("eps_r")?,
            bulk_index: g("bulk_index")?,
            bandwidth: g("bandwidth")?,
            kappa: g("kappa")?,
            omega2: g("omega2")?,
            j_scaling: g("j_scaling")?,
            mean_detuning: g("mean_detuning")?,
        })
    }

    pub fn set(&mut self, key: &str, value: &toml::Value) -> Result<(), CliError> {
        let slot = self
            .values
            .get_mut(key)
            .ok_or_else(|| CliError::Config(format!("unknown key `{key}`")))?;
        *slot = slot.coerce(value).ok_or_else(|| {
            CliError::Config(format!(
                "key `{key}` expects a {}, got `{value}`",
                slot.kind()
            ))
        })?;
        Ok(())
    }

    /// Applies one `key=value` override. The value is read as a TOML value,
    /// falling back to a bare string.
    pub fn set_str(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not key=value")))?;
        let (key, raw) = (key.trim(), raw.trim());
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        self.set(key, &value)
    }

    pub fn apply_toml(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        let table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::Config(format!("{origin}: {e}")))?;
        let mut flat = Vec::new();
        flatten("", &table, &mut flat);
        for (key, value) in flat {
            self.set(&key, &value)
                .map_err(|e| CliError::Config(format!("{origin}: {e}")))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_toml(&text, &path.display().to_string())
    }

    fn get(&self, key: &str) -> Result<&Value, CliError> {
        self.values
            .get(key)
            .ok_or_else(|| CliError::Config(format!("unknown key `{key}`")))
    }

    fn mismatch(&self, key: &str, want: &str) -> CliError {
        CliError::Config(format!("key `{key}` is not a {want}"))
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        match self.get(key)? {
            Value::Float(x) => Ok(*x),
            _ => Err(self.mismatch(key, "float")),
        }
    }

    pub fn int(&self, key: &str) -> Result<i64, CliError> {
        match self.get(key)? {
            Value::Int(i) => Ok(*i),
            _ => Err(self.mismatch(key, "integer")),
        }
    }

    /// Integer key that must be non-negative.
    pub fn count(&self, key: &str) -> Result<usize, CliError> {
        let i = self.int(key)?;
        usize::try_from(i)
            .map_err(|_| CliError::Config(format!("key `{key}` must be ≥ 0, got {i}")))
    }

    pub fn bool(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key)? {
            Value::Bool(b) => Ok(*b),
            _ => Err(self.mismatch(key, "boolean")),
        }
    }

    pub fn str(&self, key: &str) -> Result<&str, CliError> {
        match self.get(key)? {
            Value::Str(s) => Ok(s),
            _ => Err(self.mismatch(key, "string")),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<&[f64], CliError> {
        match self.get(key)? {
            Value::FloatList(xs) => Ok(xs),
            _ => Err(self.mismatch(key, "list of floats")),
        }
    }

    pub fn int_list(&self, key: &str) -> Result<&[i64], CliError> {
        match self.get(key)? {
            Value::IntList(xs) => Ok(xs),
            _ => Err(self.mismatch(key, "list of integers")),
        }
    }

    /// `key=value` pairs for every key starting with one of `prefixes`, in
    /// key order.
    pub fn describe(&self, prefixes: &[&str]) -> String {
        self.values
            .iter()
            .filter(|(k, _)| prefixes.iter().any(|p| k.starts_with(p)))
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut Vec<(String, toml::Value)>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            toml::Value::Table(t) => flatten(&key, t, out),
            other => out.push((key, other.clone())),
        }
    }
}
