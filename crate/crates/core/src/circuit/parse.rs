use std::collections::{BTreeMap, HashMap};

use super::{RawCircuit, RawGate, RawGateKind};
use crate::{Error, Result};

/// Maps lowercase gate tokens to gate kinds.
#[derive(Clone, Debug)]
pub struct TokenTable {
    map: HashMap<String, RawGateKind>,
}

impl Default for TokenTable {
    fn default() -> Self {
        let mut map = HashMap::new();
        for kind in RawGateKind::ALL {
            map.insert(kind.token().to_string(), kind);
        }
        TokenTable { map }
    }
}

impl TokenTable {
    /// Adds or overrides a token, e.g. `with_alias("p", RawGateKind::Peres)`.
    pub fn with_alias(mut self, token: &str, kind: RawGateKind) -> Self {
        self.map.insert(token.to_ascii_lowercase(), kind);
        self
    }

    pub fn lookup(&self, token: &str) -> Option<RawGateKind> {
        self.map.get(&token.to_ascii_lowercase()).copied()
    }
}

pub fn parse_real(text: &str) -> Result<RawCircuit> {
    parse_real_with(text, &TokenTable::default())
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_real_with(text: &str, tokens: &TokenTable) -> Result<RawCircuit> {
    let mut metadata = BTreeMap::new();
    let mut names: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut numvars: Option<(usize, usize)> = None;
    let mut gates = Vec::new();
    let (mut began, mut ended) = (false, false);
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().expect("non-empty line");
        let rest: Vec<&str> = words.collect();

        if let Some(directive) = head.strip_prefix('.') {
            let directive = directive.to_ascii_lowercase();
            match directive.as_str() {
                "begin" => {
                    if began {
                        return Err(err(line_no, "duplicate .begin"));
                    }
                    if names.is_none() {
                        return Err(err(line_no, ".begin before .variables"));
                    }
                    began = true;
                }
                "end" => {
                    if !began || ended {
                        return Err(err(line_no, ".end without matching .begin"));
                    }
                    ended = true;
                }
                "numvars" => {
                    let value = rest
                        .first()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| err(line_no, ".numvars needs a non-negative integer"))?;
                    numvars = Some((value, line_no));
                }
                "variables" => {
                    if names.is_some() {
                        return Err(err(line_no, "duplicate .variables"));
                    }
                    for (q, name) in rest.iter().enumerate() {
                        if index.insert(name.to_string(), q).is_some() {
                            return Err(err(line_no, format!("variable {name} declared twice")));
                        }
                    }
                    names = Some(rest.iter().map(|s| s.to_string()).collect());
                }
                _ => {
                    if began {
                        return Err(err(line_no, format!("directive .{directive} inside .begin/.end")));
                    }
                    metadata.insert(directive, rest.join(" "));
                }
            }
            continue;
        }

        if !began || ended {
            return Err(err(line_no, format!("gate {head} outside .begin/.end")));
        }
        let kind = tokens
            .lookup(head)
            .ok_or_else(|| err(line_no, format!("unknown gate token {head}")))?;
        if rest.len() != kind.arity() {
            return Err(err(
                line_no,
                format!("{head} expects {} operands, got {}", kind.arity(), rest.len()),
            ));
        }
        let qubits = rest
            .iter()
            .map(|name| {
                index
                    .get(*name)
                    .copied()
                    .ok_or_else(|| err(line_no, format!("undeclared variable {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let gate = RawGate::new(kind, qubits).map_err(|e| err(line_no, e.to_string()))?;
        gates.push(gate);
    }

    if began && !ended {
        return Err(err(last_line, "missing .end"));
    }
    let qubit_names = names.ok_or_else(|| err(last_line, "missing .variables"))?;
    if let Some((value, line_no)) = numvars {
        if value != qubit_names.len() {
            return Err(err(
                line_no,
                format!(".numvars {value} but {} variables declared", qubit_names.len()),
            ));
        }
        metadata.insert("numvars".into(), value.to_string());
    }
    metadata.insert("variables".into(), qubit_names.join(" "));
    Ok(RawCircuit {
        qubit_names,
        gates,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a small sample
.version 1.0
.numvars 4
.variables a b c d
.inputs a b c d
.outputs a b c d
.constants ----
.garbage ----
.BEGIN
t3 a b c   # toffoli
t1 d
v+ c d
p3 a b d
.End
";

    #[test]
    fn parses_sample() {
        let c = parse_real(SAMPLE).unwrap();
        assert_eq!(c.n(), 4);
        assert_eq!(c.gates.len(), 4);
        assert_eq!(c.gates[0].kind(), RawGateKind::Toffoli3);
        assert_eq!(c.gates[0].qubits(), &[0, 1, 2]);
        assert_eq!(c.gates[2].kind(), RawGateKind::CvDag);
        assert_eq!(c.gates[3].kind(), RawGateKind::Peres);
        assert_eq!(c.metadata.get("version").map(String::as_str), Some("1.0"));
        assert_eq!(c.metadata.get("constants").map(String::as_str), Some("----"));
    }

    #[test]
    fn round_trips_through_text() {
        let c = parse_real(SAMPLE).unwrap();
        let again = parse_real(&c.to_real()).unwrap();
        assert_eq!(c.gates, again.gates);
        assert_eq!(c.qubit_names, again.qubit_names);
    }

    fn line_of(text: &str) -> usize {
        match parse_real(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(line_of(".variables a b\nt2 a b\n.begin\n.end\n"), 2);
        assert_eq!(line_of(".variables a b\n.begin\nx9 a b\n.end\n"), 3);
        assert_eq!(line_of(".variables a b\n.begin\nt2 a z\n.end\n"), 3);
        assert_eq!(line_of(".variables a b c\n.begin\nt3 a b\n.end\n"), 3);
        assert_eq!(line_of(".numvars 3\n.variables a b\n.begin\n.end\n"), 1);
        assert_eq!(line_of(".variables a b\n.begin\nt2 a a\n.end\n"), 3);
        assert_eq!(line_of(".variables a b\n.begin\nt2 a b\n"), 3);
    }

    #[test]
    fn alias_table_is_configurable() {
        let text = ".variables a b c\n.begin\npg a b c\n.end\n";
        assert!(parse_real(text).is_err());
        let tokens = TokenTable::default().with_alias("PG", RawGateKind::Peres);
        let c = parse_real_with(text, &tokens).unwrap();
        assert_eq!(c.gates[0].kind(), RawGateKind::Peres);
    }
}
