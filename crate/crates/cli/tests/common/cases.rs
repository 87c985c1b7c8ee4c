//! Golden-file cases shared by the CLI contract tests.

use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct Case {
    pub name: String,
    pub exit: i32,
    pub args: Vec<String>,
}

/// Reads `tests/golden/cases.txt` under the CLI crate root `root`.
pub fn load(root: &Path) -> Vec<Case> {
    let text = fs::read_to_string(root.join("tests/golden/cases.txt")).expect("cases.txt");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            let parts: Vec<&str> = line.splitn(3, '|').map(str::trim).collect();
            assert_eq!(parts.len(), 3, "malformed case line: {line}");
            Case {
                name: parts[0].to_string(),
                exit: parts[1].parse().expect("exit code"),
                args: parts[2].split_whitespace().map(String::from).collect(),
            }
        })
        .collect()
}

pub fn expected_path(root: &Path, case: &Case) -> PathBuf {
    root.join("tests/golden").join(format!("{}.out", case.name))
}
