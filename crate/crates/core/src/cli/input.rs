use std::io::Read;
use std::path::Path;

use super::CliError;

/// One number per line. Blank lines and everything after `#` are ignored;
/// the decimal point is always `.`.
pub fn parse_values(text: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let value: f64 = content.parse().map_err(|_| {
            CliError::Input(format!(
                "line {}: cannot parse '{content}' as a number",
                idx + 1
            ))
        })?;
        if !value.is_finite() {
            return Err(CliError::Input(format!(
                "line {}: value '{content}' is not finite",
                idx + 1
            )));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::Input("input contains no values".into()));
    }
    Ok(values)
}

/// Reads `path`, or standard input for `-`.
pub fn read_values(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
    };
    parse_values(&text)
}

/// `a:b:step`, `a:b` or a single `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl KRange {
    /// The default sweep `2:floor(n/2):1`.
    pub fn default_for(n: usize) -> Self {
        Self {
            start: 2,
            end: (n / 2).max(2),
            step: 1,
        }
    }

    pub fn values(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.step)
    }
}

impl std::str::FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid k value '{p}'"))
        };
        let range = match parts.as_slice() {
            [k] => {
                let k = num(k)?;
                Self {
                    start: k,
                    end: k,
                    step: 1,
                }
            }
            [a, b] => Self {
                start: num(a)?,
                end: num(b)?,
                step: 1,
            },
            [a, b, step] => Self {
                start: num(a)?,
                end: num(b)?,
                step: num(step)?,
            },
            _ => return Err(format!("k range '{s}' is not of the form a:b:step")),
        };
        if range.start == 0 || range.step == 0 || range.start > range.end {
            return Err(format!("k range '{s}' needs 1 <= a <= b and step >= 1"));
        }
        Ok(range)
    }
}
