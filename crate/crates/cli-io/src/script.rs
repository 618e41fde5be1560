//! Scripts: ordered command lines over declared seeds and paths.
//!
//! ```text
//! # comments and blank lines are ignored
//! seed k = kronecker.seed      # resolved relative to the script
//! path p = 1,2
//! expand $k --path $p
//! g2r $k --max-depth 4
//! ```
//!
//! Each command line is a `cluster` invocation; `$name` must refer to an
//! earlier declaration. Output is each command echoed after `> ` followed by
//! its output. The first failing command stops the script.

use std::collections::BTreeMap;
use std::path::Path;

use lattice_core::{Error, Result};

use crate::commands::{run, Outcome};

enum Binding {
    Seed(String),
    Path(String),
}

fn parse_line(line: &str, lineno: usize) -> Result<Vec<String>> {
    let mut words = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut any = false;
    for ch in line.chars() {
        match ch {
            '"' => {
                quoted = !quoted;
                any = true;
            }
            c if c.is_whitespace() && !quoted => {
                if any {
                    words.push(std::mem::take(&mut cur));
                    any = false;
                }
            }
            c => {
                cur.push(c);
                any = true;
            }
        }
    }
    if quoted {
        return Err(Error::Parse {
            line: lineno,
            msg: "unterminated quote".into(),
        });
    }
    if any {
        words.push(cur);
    }
    Ok(words)
}

fn strip_comment(line: &str) -> &str {
    let mut quoted = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => quoted = !quoted,
            '#' if !quoted => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Runs every command of `text`; seed files resolve against `dir`.
pub fn run_script(text: &str, dir: &Path) -> Result<(i32, String)> {
    let mut env: BTreeMap<String, Binding> = BTreeMap::new();
    let mut out = String::new();
    let mut code = 0;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let words = parse_line(line, lineno)?;
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        if let [kw @ ("seed" | "path"), name, eq, value] = refs[..] {
            if eq != "=" || name.starts_with('$') {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `{kw} NAME = VALUE`"),
                });
            }
            let b = if kw == "seed" {
                Binding::Seed(dir.join(value).to_string_lossy().into_owned())
            } else {
                Binding::Path(value.to_string())
            };
            env.insert(name.to_string(), b);
            continue;
        }
        let args = words
            .iter()
            .map(|w| match w.strip_prefix('$') {
                Some(name) => match env.get(name) {
                    Some(Binding::Seed(v) | Binding::Path(v)) => Ok(v.clone()),
                    None => Err(Error::Parse {
                        line: lineno,
                        msg: format!("${name} is not declared"),
                    }),
                },
                None => Ok(w.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        if args.first().is_some_and(|a| a == "script") {
            return Err(Error::Parse {
                line: lineno,
                msg: "scripts cannot run other scripts".into(),
            });
        }
        out.push_str("> ");
        out.push_str(line);
        out.push('\n');
        let Outcome { code: c, stdout, stderr } = run(&args);
        out.push_str(&stdout);
        if !stderr.is_empty() {
            let record: serde_json::Value =
                serde_json::from_str(stderr.trim()).unwrap_or(serde_json::Value::Null);
            let msg = record["message"].as_str().unwrap_or(stderr.trim()).to_string();
            return Err(Error::Parse {
                line: lineno,
                msg: format!("command failed: {msg}"),
            });
        }
        code = code.max(c);
    }
    Ok((code, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_and_comments() {
        assert_eq!(parse_line("decompose $k \"1 + x2\"", 1).unwrap(), vec!["decompose", "$k", "1 + x2"]);
        assert_eq!(strip_comment("g2r $k # note"), "g2r $k ");
        assert!(parse_line("a \"b", 3).is_err());
    }

    #[test]
    fn undeclared_names_are_rejected() {
        let e = run_script("path p = 1\nexpand $k --path $p\n", Path::new("")).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
    }
}
