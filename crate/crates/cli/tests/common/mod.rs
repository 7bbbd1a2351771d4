#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_flecklab")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("FLECKLAB_MAX_N")
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// A recorded invocation: `args:` line, `exit:` line, `---`, then the exact
/// stdout.
pub struct Golden {
    pub name: String,
    pub args: Vec<String>,
    pub exit: i32,
    pub stdout: String,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn load_goldens() -> Vec<Golden> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(golden_dir())
        .expect("golden dir")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "golden"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let (head, body) = text.split_once("---\n").expect("separator");
            let mut args = None;
            let mut exit = None;
            for line in head.lines() {
                if let Some(a) = line.strip_prefix("args: ") {
                    args = Some(a.split_whitespace().map(String::from).collect());
                } else if let Some(c) = line.strip_prefix("exit: ") {
                    exit = Some(c.trim().parse().unwrap());
                }
            }
            Golden {
                name: p.file_stem().unwrap().to_string_lossy().into_owned(),
                args: args.expect("args line"),
                exit: exit.expect("exit line"),
                stdout: body.to_string(),
            }
        })
        .collect()
}

/// Runs a golden invocation twice; `Err` describes the first mismatch.
pub fn check_golden(g: &Golden) -> Result<(), String> {
    let args: Vec<&str> = g.args.iter().map(String::as_str).collect();
    let first = run(&args);
    let second = run(&args);
    let code = first.status.code().unwrap_or(-1);
    if code != g.exit {
        return Err(format!("{}: exit {code}, expected {}", g.name, g.exit));
    }
    if stdout(&first) != g.stdout {
        return Err(format!("{}: stdout differs from the recording", g.name));
    }
    if first.stdout != second.stdout || second.status.code() != Some(code) {
        return Err(format!("{}: two identical runs disagree", g.name));
    }
    if code == 2 && first.stderr.is_empty() {
        return Err(format!("{}: usage error without a diagnostic", g.name));
    }
    Ok(())
}
