//! Flat `key = value` configuration files. A key is the long name of any
//! flag of the invoked subcommand; values fill in whatever was given
//! neither on the command line nor through an `MNS_` variable.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};

use super::error::{CliError, CliResult};

pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| {
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {line}: expected key = value")))?;
            let k = k.trim().replace('_', "-");
            if k.is_empty() {
                return Err(CliError::Usage(format!("config line {line}: empty key")));
            }
            Ok((k, v.trim().to_string()))
        })
        .collect()
}

fn explicit(m: &ArgMatches, id: &str) -> bool {
    matches!(
        m.value_source(id),
        Some(ValueSource::CommandLine) | Some(ValueSource::EnvVariable)
    )
}

/// Extra arguments that apply the config file at `path` beneath `matches`.
pub fn config_overrides(cmd: &Command, matches: &ArgMatches, path: &Path) -> CliResult<Vec<OsString>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let (mut leaf_cmd, mut leaf) = (cmd, matches);
    while let Some((name, sub)) = leaf.subcommand() {
        leaf_cmd = leaf_cmd.find_subcommand(name).expect("matched subcommand exists");
        leaf = sub;
    }
    let mut extra = Vec::new();
    for (key, value) in parse_config(&text)? {
        let arg = leaf_cmd
            .get_arguments()
            .chain(cmd.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()) && a.get_id() != "config")
            .ok_or_else(|| CliError::Usage(format!("config key '{key}' is not a flag of this command")))?;
        let id = arg.get_id().as_str();
        let global = cmd.get_arguments().any(|a| a.get_id() == id);
        if explicit(leaf, id) || (global && explicit(matches, id)) {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(OsString::from(format!("--{key}={value}")));
        } else {
            match value.as_str() {
                "true" => extra.push(OsString::from(format!("--{key}"))),
                "false" => {}
                _ => return Err(CliError::Usage(format!("config key '{key}' takes true or false"))),
            }
        }
    }
    Ok(extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c = parse_config("# run\nshots = 10\n\neta_values=0.1,0.2 # grid\n").unwrap();
        assert_eq!(c, vec![("shots".into(), "10".into()), ("eta-values".into(), "0.1,0.2".into())]);
        assert!(parse_config("shots 10").is_err());
    }
}
