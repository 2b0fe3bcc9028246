//! Flat key=value config files with [section] headers.
//!
//! One section per subcommand plus an optional [global] section; keys mirror
//! the long flag names. Command-line flags override file values; unknown
//! sections or keys are rejected. Repeatable flags (t) accept
//! comma-separated values.

use std::collections::BTreeMap;

const GLOBAL_KEYS: &[&str] = &["threads", "out"];

fn allowed_keys(section: &str) -> Option<&'static [&'static str]> {
    match section {
        "global" => Some(GLOBAL_KEYS),
        "kernel" => Some(&["phase", "N", "n", "gamma", "j", "low", "t", "s-grid", "tol"]),
        "decay" => Some(&["phase", "N", "n", "gamma", "regime", "tol", "t-window"]),
        "evolve" => Some(&["phase", "N", "n", "gamma", "t", "data", "seed"]),
        "solve" => Some(&[
            "eq", "N", "n", "gamma", "alpha", "lambda", "delta", "T", "dt", "eps",
            "max-iter",
        ]),
        "selftest" => Some(&["seed"]),
        _ => None,
    }
}

const SUBCOMMANDS: &[&str] = &["kernel", "decay", "evolve", "solve", "selftest"];

type Sections = BTreeMap<String, Vec<(String, String)>>;

fn parse_file(text: &str) -> Result<Sections, String> {
    let mut sections: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let name = name.trim().to_string();
            if allowed_keys(&name).is_none() {
                return Err(format!("line {}: unknown section [{name}]", lineno + 1));
            }
            current = Some(name.clone());
            sections.entry(name).or_default();
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("line {}: expected key=value, got '{line}'", lineno + 1));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let Some(section) = &current else {
            return Err(format!("line {}: key outside any [section]", lineno + 1));
        };
        let allowed = allowed_keys(section).unwrap();
        if !allowed.contains(&key.as_str()) {
            return Err(format!(
                "line {}: unknown key '{key}' in [{section}] (allowed: {})",
                lineno + 1,
                allowed.join(", ")
            ));
        }
        sections.get_mut(section).unwrap().push((key, value));
    }
    Ok(sections)
}

fn flag_present(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let flag_eq = format!("--{key}=");
    args.iter().any(|a| a == &flag || a.starts_with(&flag_eq))
}

/// Splice config-file values into the argument list as flags, after the
/// subcommand, skipping keys the command line already sets.
pub fn merge_config_args(raw: Vec<String>) -> Result<Vec<String>, String> {
    let path = match find_config_path(&raw)? {
        Some(p) => p,
        None => return Ok(raw),
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config '{path}': {e}"))?;
    let sections = parse_file(&text)?;

    let sub_pos = raw
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .ok_or_else(|| "config given but no subcommand on the command line".to_string())?;
    let sub = raw[sub_pos].clone();

    let mut merged = raw.clone();
    let mut insert_at = sub_pos + 1;
    let splice = |entries: &[(String, String)], merged: &mut Vec<String>, at: &mut usize| {
        for (key, value) in entries {
            if flag_present(&raw, key) {
                continue;
            }
            if key == "low" {
                if value == "true" || value == "1" {
                    merged.insert(*at, "--low".into());
                    *at += 1;
                }
                continue;
            }
            let values: Vec<&str> = if key == "t" {
                value.split(',').map(str::trim).collect()
            } else {
                vec![value.as_str()]
            };
            for v in values {
                merged.insert(*at, format!("--{key}"));
                merged.insert(*at + 1, v.to_string());
                *at += 2;
            }
        }
    };

    if let Some(entries) = sections.get(&sub) {
        splice(entries, &mut merged, &mut insert_at);
    }
    if let Some(entries) = sections.get("global") {
        splice(entries, &mut merged, &mut insert_at);
    }
    Ok(merged)
}

fn find_config_path(raw: &[String]) -> Result<Option<String>, String> {
    for (i, a) in raw.iter().enumerate() {
        if a == "--config" {
            return raw
                .get(i + 1)
                .cloned()
                .map(Some)
                .ok_or_else(|| "--config needs a path".to_string());
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Ok(Some(p.to_string()));
        }
    }
    Ok(None)
}
