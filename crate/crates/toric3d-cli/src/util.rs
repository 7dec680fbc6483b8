//! Flag parsing and small report helpers shared by the subcommands.

use std::path::Path;

use crate::CliError;

/// Comma-separated positive integers, e.g. `4,6,8` or `3`.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || {
        CliError::Input(format!(
            "bad size list '{s}': expected comma-separated positive integers"
        ))
    };
    s.split(',')
        .map(|part| match part.trim().parse() {
            Ok(0) | Err(_) => Err(bad()),
            Ok(v) => Ok(v),
        })
        .collect()
}

/// Error rates: a comma list (`0.1,0.12`) or an inclusive range
/// (`start:end:step`).
pub fn parse_ps(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Input(format!("bad probability grid '{s}': {m}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("unparseable number"));
    let ps: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:end:step"));
        }
        let (start, end, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || end < start {
            return Err(bad("need step > 0 and end >= start"));
        }
        // k * step instead of repeated addition so the grid has no drift;
        // the tolerance keeps the endpoint inclusive.
        (0..)
            .map(|k| start + step * k as f64)
            .take_while(|&p| p <= end + step * 1e-9)
            .collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if ps.is_empty() {
        return Err(bad("empty grid"));
    }
    if ps.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(bad("rates must lie in [0, 1]"));
    }
    Ok(ps)
}

/// One id per line; `#` starts a comment; blank lines are skipped.
pub fn read_id_file(path: &Path, max: usize, what: &str) -> Result<Vec<usize>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut ids = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = || format!("{}:{}", path.display(), idx + 1);
        let id: usize = line
            .parse()
            .map_err(|_| CliError::Input(format!("{}: expected a {what} id, got '{line}'", at())))?;
        if id >= max {
            return Err(CliError::Input(format!(
                "{}: {what} id {id} out of range (lattice has {max})",
                at()
            )));
        }
        ids.push(id);
    }
    Ok(ids)
}

/// Quote and escape a JSON string; labels and paths never need more than
/// the control/quote/backslash escapes.
pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
