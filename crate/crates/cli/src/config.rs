//! Run configuration files.
//!
//! ```text
//! # comment
//! [setup]
//! kind = hypertoric
//! matrix = [[1, 1]]
//! theta = [1]
//! c = [1/3]
//!
//! [truncation]
//! max_degree = 8
//! weights = auto
//!
//! [output]
//! format = json
//! ```
//!
//! Values are bare words, integers, rationals `p/q` or bracketed lists of
//! values. Unknown sections and keys are errors.

use std::collections::BTreeMap;
use std::fmt;

use brst_core::exact::{parse_rational, Rational};

/// Position of a token, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Word(String, Pos),
    List(Vec<Value>, Pos),
}

impl Value {
    pub fn pos(&self) -> Pos {
        match self {
            Value::Word(_, p) | Value::List(_, p) => *p,
        }
    }

    fn word(&self) -> Result<&str, ParseError> {
        match self {
            Value::Word(w, _) => Ok(w),
            Value::List(_, p) => err(*p, "expected a single value, found a list"),
        }
    }

    fn list(&self) -> Result<&[Value], ParseError> {
        match self {
            Value::List(v, _) => Ok(v),
            Value::Word(_, p) => err(*p, "expected a bracketed list"),
        }
    }

    pub fn as_i64(&self) -> Result<i64, ParseError> {
        let w = self.word()?;
        w.parse().or_else(|_| err(self.pos(), format!("expected an integer, found `{w}`")))
    }

    pub fn as_usize(&self) -> Result<usize, ParseError> {
        let w = self.word()?;
        w.parse().or_else(|_| err(self.pos(), format!("expected a nonnegative integer, found `{w}`")))
    }

    pub fn as_rational(&self) -> Result<Rational, ParseError> {
        let w = self.word()?;
        parse_rational(w).or_else(|e| err(self.pos(), format!("bad rational `{w}`: {e}")))
    }

    pub fn as_string(&self) -> Result<String, ParseError> {
        Ok(self.word()?.to_string())
    }

    pub fn as_i64_list(&self) -> Result<Vec<i64>, ParseError> {
        self.list()?.iter().map(Value::as_i64).collect()
    }

    pub fn as_rational_list(&self) -> Result<Vec<Rational>, ParseError> {
        self.list()?.iter().map(Value::as_rational).collect()
    }

    pub fn as_i64_matrix(&self) -> Result<Vec<Vec<i64>>, ParseError> {
        self.list()?.iter().map(Value::as_i64_list).collect()
    }
}

/// Parses a single value, e.g. a `--weights` argument.
pub fn parse_value(s: &str) -> Result<Value, ParseError> {
    let mut p = Cursor { chars: s.chars().collect(), i: 0, line: 1, col_base: 0 };
    let v = p.value()?;
    p.skip_ws();
    if p.i < p.chars.len() {
        return err(p.pos(), "unexpected trailing input");
    }
    Ok(v)
}

struct Cursor {
    chars: Vec<char>,
    i: usize,
    line: usize,
    col_base: usize,
}

impl Cursor {
    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col_base + self.i + 1 }
    }

    fn skip_ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].is_whitespace() {
            self.i += 1;
        }
    }

    fn value(&mut self) -> Result<Value, ParseError> {
        self.skip_ws();
        let start = self.pos();
        match self.chars.get(self.i) {
            None => err(start, "missing value"),
            Some('[') => {
                self.i += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.chars.get(self.i) {
                        Some(']') if items.is_empty() => {
                            self.i += 1;
                            break;
                        }
                        None => return err(self.pos(), "unclosed `[`"),
                        _ => {}
                    }
                    items.push(self.value()?);
                    self.skip_ws();
                    match self.chars.get(self.i) {
                        Some(',') => self.i += 1,
                        Some(']') => {
                            self.i += 1;
                            break;
                        }
                        None => return err(self.pos(), "unclosed `[`"),
                        Some(c) => return err(self.pos(), format!("expected `,` or `]`, found `{c}`")),
                    }
                }
                Ok(Value::List(items, start))
            }
            Some(c) if c.is_ascii_alphanumeric() || matches!(c, '-' | '+' | '/' | '_' | '.') => {
                let from = self.i;
                while self.i < self.chars.len()
                    && (self.chars[self.i].is_ascii_alphanumeric() || matches!(self.chars[self.i], '-' | '+' | '/' | '_' | '.'))
                {
                    self.i += 1;
                }
                Ok(Value::Word(self.chars[from..self.i].iter().collect(), start))
            }
            Some(c) => err(start, format!("unexpected character `{c}`")),
        }
    }
}

/// A parsed file: section → key → value, with positions kept for errors.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub sections: BTreeMap<String, BTreeMap<String, (Pos, Value)>>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    (
        "setup",
        &[
            "kind", "matrix", "theta", "c", "vertices", "arrows", "dims", "distinguished", "diagram", "n", "family",
            "l", "append_square",
        ],
    ),
    ("truncation", &["max_degree", "weights", "weight_radius", "flatness_degree", "samples", "seed"]),
    ("output", &["format", "path", "jobs"]),
];

pub fn parse_raw(text: &str) -> Result<RawConfig, ParseError> {
    let mut cfg = RawConfig::default();
    let mut current: Option<String> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        let indent = content.len() - trimmed.len();
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let at = |col: usize| Pos { line: line_no, col };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(at(indent + 1), "section header must end with `]`");
            };
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return err(at(indent + 2), format!("unknown section `[{name}]`"));
            }
            if cfg.sections.contains_key(name) {
                return err(at(indent + 2), format!("section `[{name}]` appears twice"));
            }
            cfg.sections.insert(name.to_string(), BTreeMap::new());
            current = Some(name.to_string());
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            return err(at(indent + 1), "expected `key = value`");
        };
        let key = trimmed[..eq].trim();
        let Some(section) = current.clone() else {
            return err(at(indent + 1), "key outside of any section");
        };
        let allowed = SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
        if !allowed.contains(&key) {
            return err(at(indent + 1), format!("unknown key `{key}` in [{section}]"));
        }
        let value_text = &trimmed[eq + 1..];
        let mut cur = Cursor { chars: value_text.chars().collect(), i: 0, line: line_no, col_base: indent + eq + 1 };
        let value = cur.value()?;
        cur.skip_ws();
        if cur.i < cur.chars.len() {
            return err(cur.pos(), "unexpected trailing input");
        }
        let entries = cfg.sections.get_mut(&section).expect("section exists");
        if entries.contains_key(key) {
            return err(at(indent + 1), format!("key `{key}` given twice"));
        }
        entries.insert(key.to_string(), (at(indent + 1), value));
    }
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetupSpec {
    Hypertoric { matrix: Vec<Vec<i64>>, theta: Vec<Rational>, c: Vec<Rational> },
    Quiver {
        vertices: usize,
        arrows: Vec<(usize, usize)>,
        dims: Vec<i64>,
        theta: Vec<Rational>,
        c: Vec<Rational>,
        distinguished: usize,
    },
    Preprojective { diagram: String, theta: Vec<Rational>, c: Vec<Rational> },
    CalogeroMoser { diagram: String, n: u32, theta: Vec<Rational>, c: Vec<Rational> },
    /// A named family without a concrete setup; only `predict` accepts it.
    Family { family: String, l: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSpec {
    Auto,
    List(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub setup: SetupSpec,
    /// 1-based index of a classical generator whose square is appended for
    /// the flatness certificate (a negative control).
    pub append_square: Option<usize>,
    pub max_degree: i64,
    pub weights: WeightSpec,
    pub weight_radius: i64,
    pub flatness_degree: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
    pub path: Option<String>,
    pub jobs: usize,
}

pub const DEFAULT_MAX_DEGREE: i64 = 4;
pub const DEFAULT_SAMPLES: usize = 50;
pub const DEFAULT_SEED: u64 = 20_240_601;

struct Section<'a> {
    name: &'a str,
    entries: Option<&'a BTreeMap<String, (Pos, Value)>>,
    header: Pos,
}

impl<'a> Section<'a> {
    fn get(&self, key: &str) -> Option<&'a Value> {
        self.entries.and_then(|e| e.get(key)).map(|(_, v)| v)
    }

    fn require(&self, key: &str) -> Result<&'a Value, ParseError> {
        self.get(key).ok_or_else(|| ParseError { pos: self.header, msg: format!("[{}] is missing `{key}`", self.name) })
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ParseError> {
    let raw = parse_raw(text)?;
    let section = |name: &'static str| {
        let entries = raw.sections.get(name);
        let header = entries
            .and_then(|e| e.values().map(|(p, _)| *p).min_by_key(|p| (p.line, p.col)))
            .unwrap_or(Pos { line: 1, col: 1 });
        Section { name, entries, header }
    };
    let setup = section("setup");
    if setup.entries.is_none() {
        return err(Pos { line: 1, col: 1 }, "missing [setup] section");
    }
    let kind_v = setup.require("kind")?;
    let kind = kind_v.as_string()?;
    let rationals = |k: &str| setup.require(k).and_then(Value::as_rational_list);
    let spec = match kind.as_str() {
        "hypertoric" => SetupSpec::Hypertoric {
            matrix: setup.require("matrix")?.as_i64_matrix()?,
            theta: rationals("theta")?,
            c: rationals("c")?,
        },
        "quiver" => {
            let arrows_v = setup.require("arrows")?;
            let mut arrows = Vec::new();
            for a in arrows_v.as_i64_matrix()? {
                if a.len() != 2 || a.iter().any(|&x| x < 0) {
                    return err(arrows_v.pos(), "arrows are pairs [out, in] of vertex ids");
                }
                arrows.push((a[0] as usize, a[1] as usize));
            }
            SetupSpec::Quiver {
                vertices: setup.require("vertices")?.as_usize()?,
                arrows,
                dims: setup.require("dims")?.as_i64_list()?,
                theta: rationals("theta")?,
                c: rationals("c")?,
                distinguished: setup.get("distinguished").map(Value::as_usize).transpose()?.unwrap_or(0),
            }
        }
        "preprojective" => SetupSpec::Preprojective {
            diagram: setup.require("diagram")?.as_string()?,
            theta: rationals("theta")?,
            c: rationals("c")?,
        },
        "calogero-moser" => {
            let nv = setup.require("n")?;
            let n = u32::try_from(nv.as_usize()?).or_else(|_| err(nv.pos(), "n is too large"))?;
            SetupSpec::CalogeroMoser {
                diagram: setup.require("diagram")?.as_string()?,
                n,
                theta: rationals("theta")?,
                c: rationals("c")?,
            }
        }
        "family" => SetupSpec::Family {
            family: setup.require("family")?.as_string()?,
            l: setup.require("l")?.as_usize()?,
            n: setup.get("n").map(Value::as_usize).transpose()?.unwrap_or(1),
        },
        other => return err(kind_v.pos(), format!("unknown setup kind `{other}`")),
    };
    let append_square = setup.get("append_square").map(Value::as_usize).transpose()?;

    let trunc = section("truncation");
    let max_degree = trunc.get("max_degree").map(Value::as_i64).transpose()?.unwrap_or(DEFAULT_MAX_DEGREE);
    let weights = match trunc.get("weights") {
        None => WeightSpec::Auto,
        Some(v) => parse_weight_value(v)?,
    };
    let weight_radius = trunc.get("weight_radius").map(Value::as_i64).transpose()?.unwrap_or(1);
    let flatness_degree = trunc.get("flatness_degree").map(Value::as_usize).transpose()?;
    let samples = trunc.get("samples").map(Value::as_usize).transpose()?.unwrap_or(DEFAULT_SAMPLES);
    let seed = match trunc.get("seed") {
        None => DEFAULT_SEED,
        Some(v) => v.word()?.parse().or_else(|_| err(v.pos(), "seed must be a nonnegative integer"))?,
    };

    let out = section("output");
    let format = match out.get("format") {
        None => Format::Text,
        Some(v) => parse_format(v)?,
    };
    let path = out.get("path").map(Value::as_string).transpose()?;
    let jobs = out.get("jobs").map(Value::as_usize).transpose()?.unwrap_or(1).max(1);

    Ok(RunConfig {
        setup: spec,
        append_square,
        max_degree,
        weights,
        weight_radius,
        flatness_degree,
        samples,
        seed,
        format,
        path,
        jobs,
    })
}

pub fn parse_weight_value(v: &Value) -> Result<WeightSpec, ParseError> {
    match v {
        Value::Word(w, _) if w == "auto" => Ok(WeightSpec::Auto),
        _ => Ok(WeightSpec::List(v.as_i64_matrix()?)),
    }
}

pub fn parse_format(v: &Value) -> Result<Format, ParseError> {
    match v.word()? {
        "text" => Ok(Format::Text),
        "json" => Ok(Format::Json),
        other => err(v.pos(), format!("format must be `text` or `json`, found `{other}`")),
    }
}
