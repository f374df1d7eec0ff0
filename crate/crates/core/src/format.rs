//! Line-oriented text format for instances.
//!
//! ```text
//! # comment
//! attrs: a b c d        (optional; fixes ids and declares unused attributes)
//! a b -> c d            (one dependency per line, `_` for an empty left side)
//! _ -> a
//! target: c d
//! rounds: 2             (optional, defaults to the number of attributes)
//! ```

use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::fd::{normalize, RawFd};
use crate::instance::{is_valid_name, max_rounds, Instance, Symbols};

enum Directive<'a> {
    Attrs(&'a str),
    Target(&'a str),
    Rounds(&'a str),
}

fn directive(line: &str) -> Option<Directive<'_>> {
    let (key, rest) = line.split_once(':')?;
    match key.trim() {
        "attrs" => Some(Directive::Attrs(rest)),
        "target" | "targets" => Some(Directive::Target(rest)),
        "rounds" => Some(Directive::Rounds(rest)),
        _ => None,
    }
}

fn check_name(line: usize, name: &str) -> Result<()> {
    if is_valid_name(name) {
        Ok(())
    } else {
        Err(Error::Syntax {
            line,
            message: format!("invalid attribute name `{name}`"),
        })
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut symbols = Symbols::default();
    let mut raw = Vec::new();
    let mut target_line: Option<(usize, Vec<&str>)> = None;
    let mut rounds: Option<(usize, usize)> = None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match directive(line) {
            Some(Directive::Attrs(rest)) => {
                for name in rest.split_whitespace() {
                    check_name(lineno, name)?;
                    symbols.intern(name);
                }
            }
            Some(Directive::Target(rest)) => {
                if target_line.is_some() {
                    return Err(Error::Syntax {
                        line: lineno,
                        message: "duplicate target line".into(),
                    });
                }
                target_line = Some((lineno, rest.split_whitespace().collect()));
            }
            Some(Directive::Rounds(rest)) => {
                if rounds.is_some() {
                    return Err(Error::Syntax {
                        line: lineno,
                        message: "duplicate rounds line".into(),
                    });
                }
                let d = rest.trim().parse::<usize>().map_err(|_| Error::Syntax {
                    line: lineno,
                    message: format!("invalid round count `{}`", rest.trim()),
                })?;
                rounds = Some((lineno, d));
            }
            None => {
                let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::Syntax {
                    line: lineno,
                    message: "expected `lhs -> rhs` or a `target:`/`rounds:`/`attrs:` line".into(),
                })?;
                let lhs_names: Vec<&str> = lhs.split_whitespace().collect();
                let rhs_names: Vec<&str> = rhs.split_whitespace().collect();
                if rhs_names.is_empty() {
                    return Err(Error::Syntax {
                        line: lineno,
                        message: "empty right side".into(),
                    });
                }
                let mut lhs_set = BitSet::new();
                match lhs_names.as_slice() {
                    [] => {
                        return Err(Error::Syntax {
                            line: lineno,
                            message: "empty left side must be written `_`".into(),
                        })
                    }
                    ["_"] => {}
                    names => {
                        for name in names {
                            check_name(lineno, name)?;
                            lhs_set.insert(symbols.intern(name));
                        }
                    }
                }
                let mut rhs_ids = Vec::with_capacity(rhs_names.len());
                for name in rhs_names {
                    check_name(lineno, name)?;
                    rhs_ids.push(symbols.intern(name));
                }
                raw.push(RawFd::new(lhs_set.iter(), rhs_ids));
            }
        }
    }

    let n = symbols.len();
    let mut targets = BitSet::with_capacity(n);
    if let Some((lineno, names)) = target_line {
        for name in names {
            let attr = symbols.get(name).ok_or_else(|| Error::UnknownAttribute {
                line: lineno,
                name: name.to_owned(),
            })?;
            targets.insert(attr.0);
        }
    }
    let rounds = match rounds {
        Some((lineno, d)) if d < 1 || d > max_rounds(n) => {
            return Err(Error::Syntax {
                line: lineno,
                message: Error::RoundsOutOfRange {
                    rounds: d,
                    max: max_rounds(n),
                }
                .to_string(),
            })
        }
        Some((_, d)) => d,
        None => max_rounds(n),
    };
    let fds = normalize(n, raw)?;
    Instance::with_symbols(fds, targets, rounds, symbols)
}

/// Writes `inst` so that [`parse_instance`] reproduces it with the same ids.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let names = inst.symbols().names();
    out.push_str("attrs:");
    for name in names {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for fd in inst.fds() {
        if fd.lhs.is_empty() {
            out.push('_');
        } else {
            let lhs: Vec<&str> = fd.lhs.iter().map(|a| names[a].as_str()).collect();
            out.push_str(&lhs.join(" "));
        }
        let _ = writeln!(out, " -> {}", names[fd.rhs.0]);
    }
    out.push_str("target:");
    for t in inst.targets() {
        out.push(' ');
        out.push_str(&names[t]);
    }
    out.push('\n');
    let _ = writeln!(out, "rounds: {}", inst.rounds());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::{Attr, Fd};

    #[test]
    fn parses_chain_with_target() {
        let inst = parse_instance("a -> b\nb -> c\n# comment\ntarget: c\n").unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.fds().len(), 2);
        assert_eq!(inst.targets().iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(inst.rounds(), 3);
        assert_eq!(inst.symbols().get("b"), Some(Attr(1)));
    }

    #[test]
    fn empty_document() {
        let inst = parse_instance("").unwrap();
        assert_eq!(inst.n(), 0);
        assert!(inst.fds().is_empty());
        assert!(inst.targets().is_empty());
    }

    #[test]
    fn multi_rhs_is_normalized() {
        let inst = parse_instance("a b -> c d\n").unwrap();
        assert_eq!(inst.fds().fds(), &[Fd::new([0, 1], 2), Fd::new([0, 1], 3)]);
    }

    #[test]
    fn empty_lhs_and_declared_attrs() {
        let inst = parse_instance("attrs: x y z\n_ -> y\ntargets: z y\nrounds: 1").unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.fds().fds(), &[Fd::new([], 1)]);
        assert_eq!(inst.rounds(), 1);
    }

    #[test]
    fn target_may_precede_dependencies() {
        let inst = parse_instance("target: c\na -> c\n").unwrap();
        assert_eq!(inst.targets().iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn reports_line_numbers() {
        assert_eq!(
            parse_instance("a -> b\nnonsense here\n").unwrap_err(),
            Error::Syntax {
                line: 2,
                message: "expected `lhs -> rhs` or a `target:`/`rounds:`/`attrs:` line".into()
            }
        );
        assert_eq!(
            parse_instance("a -> b\n\ntarget: q\n").unwrap_err(),
            Error::UnknownAttribute {
                line: 3,
                name: "q".into()
            }
        );
        assert!(matches!(
            parse_instance("a -> b\nrounds: 3\n").unwrap_err(),
            Error::Syntax { line: 2, .. }
        ));
        assert!(matches!(
            parse_instance("a ->\n").unwrap_err(),
            Error::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            parse_instance(" -> a\n").unwrap_err(),
            Error::Syntax { line: 1, .. }
        ));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let text = "attrs: p q r s\n_ -> q\np r -> s\ntarget: s\nrounds: 2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(write_instance(&inst), text);
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }
}
