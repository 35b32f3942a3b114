//! Plain-text `key = value` configuration with `[section]` headers.
//!
//! Numbers accept an SI prefix and unit suffix: `100MHz`, `27GHz`, `0.62deg`,
//! `45d`, `1000km`. Bare units without prefix (`K`, `m`, `s`) are never read
//! as prefixes, so `200K` is 200 kelvin and `1.25m` is 1.25 metres.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub section: String,
    pub key: String,
    pub value: String,
    pub line: usize,
}

impl Entry {
    pub fn number(&self) -> Result<f64> {
        parse_si(&self.value).map_err(|message| self.err(message))
    }

    pub fn count(&self) -> Result<usize> {
        let x = self.number()?;
        if x < 0.0 || x.fract() != 0.0 || !x.is_finite() {
            return Err(self.err(format!("expected a non-negative integer, got {}", self.value)));
        }
        Ok(x as usize)
    }

    pub fn list(&self) -> Vec<String> {
        self.value
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    }

    pub fn err(&self, message: impl Into<String>) -> Error {
        Error::Config {
            line: self.line,
            key: self.qualified(),
            message: message.into(),
        }
    }

    pub fn qualified(&self) -> String {
        if self.section.is_empty() {
            self.key.clone()
        } else {
            format!("{}.{}", self.section, self.key)
        }
    }
}

/// Parses a document into entries in file order. Duplicate keys are an error.
pub fn parse(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    let mut section = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = strip_comment(raw).trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| Error::Config {
                line,
                key: body.to_string(),
                message: "unterminated section header".into(),
            })?;
            section = name.trim().to_string();
            if section.is_empty() || !section.chars().all(is_ident) {
                return Err(Error::Config { line, key: body.into(), message: "invalid section name".into() });
            }
            continue;
        }
        let (k, v) = body.split_once('=').ok_or_else(|| Error::Config {
            line,
            key: body.to_string(),
            message: "expected `key = value`".into(),
        })?;
        let key = k.trim().to_string();
        if key.is_empty() || !key.chars().all(|c| is_ident(c) || c == '.') {
            return Err(Error::Config { line, key, message: "invalid key".into() });
        }
        let value = v.trim().trim_matches('"').to_string();
        if let Some(prev) = out.iter().find(|e| e.section == section && e.key == key) {
            return Err(Error::Config {
                line,
                key,
                message: format!("duplicate key (first set on line {})", prev.line),
            });
        }
        out.push(Entry { section: section.clone(), key, value, line });
    }
    Ok(out)
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn strip_comment(s: &str) -> &str {
    match s.find(['#', ';']) {
        Some(i) => &s[..i],
        None => s,
    }
}

const UNITS: &[(&str, f64)] = &[
    ("Hz", 1.0),
    ("W", 1.0),
    ("m", 1.0),
    ("s", 1.0),
    ("K", 1.0),
    ("rad", 1.0),
    ("deg", std::f64::consts::PI / 180.0),
    ("min", 60.0),
    ("h", 3600.0),
    ("d", 86400.0),
    ("bps", 1.0),
    ("dB", 1.0),
    ("%", 0.01),
];

const PREFIXES: &[(char, f64)] = &[
    ('f', 1e-15),
    ('p', 1e-12),
    ('n', 1e-9),
    ('u', 1e-6),
    ('µ', 1e-6),
    ('m', 1e-3),
    ('k', 1e3),
    ('M', 1e6),
    ('G', 1e9),
    ('T', 1e12),
];

/// Parses a number with an optional SI prefix and unit.
pub fn parse_si(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let split = s
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit() || c == '.' || c == '+' || c == '-' || c == '_'
                || ((c == 'e' || c == 'E') && exponent_follows(&s[i + 1..])))
        })
        .map(|(i, _)| i)
        .unwrap_or(s.len());
    let (num, suffix) = s.split_at(split);
    let num: String = num.chars().filter(|&c| c != '_').collect();
    let base: f64 = num.parse().map_err(|_| format!("not a number: `{s}`"))?;
    let suffix = suffix.trim();
    if suffix.is_empty() {
        return Ok(base);
    }
    if let Some(&(_, f)) = UNITS.iter().find(|(u, _)| *u == suffix) {
        return Ok(base * f);
    }
    let mut chars = suffix.chars();
    let p = chars.next().unwrap();
    let rest = chars.as_str();
    let pf = PREFIXES
        .iter()
        .find(|(c, _)| *c == p)
        .map(|&(_, f)| f)
        .ok_or_else(|| format!("unknown unit suffix `{suffix}`"))?;
    if rest.is_empty() {
        return Ok(base * pf);
    }
    let uf = UNITS
        .iter()
        .find(|(u, _)| *u == rest)
        .map(|&(_, f)| f)
        .ok_or_else(|| format!("unknown unit suffix `{suffix}`"))?;
    Ok(base * pf * uf)
}

fn exponent_follows(rest: &str) -> bool {
    let rest = rest.strip_prefix(['+', '-']).unwrap_or(rest);
    rest.chars().next().is_some_and(|c| c.is_ascii_digit())
}
