//! Line-oriented circuit netlists.
//!
//! ```text
//! # two-mode splitter, then detect mode 0
//! modes 2
//! bs 0 1 theta=7.8539816339744828e-1
//! ps 1 phi=1.5707963267948966e0
//! det 0
//! ```
//!
//! `modes` must be the first directive. Elements apply in file order, angles
//! are radians, and `#` starts a comment. A `det` line places a vacuum
//! detector; no later line may act on a detected mode.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::circuit::{Circuit, Detector, Element};
use crate::error::{Diagnostic, Result};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    column: c + 1,
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &line[b..],
            column: c + 1,
        });
    }
    tokens
}

struct Parser {
    line: usize,
    num_modes: Option<usize>,
    elements: Vec<Element>,
    detectors: Vec<Detector>,
    detected: BTreeSet<usize>,
}

impl Parser {
    fn error(&self, column: usize, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.line, column, message)
    }

    fn arity(&self, directive: &Token, args: &[Token], expected: usize, usage: &str) -> Result<(), Diagnostic> {
        if args.len() != expected {
            let column = args.get(expected).map_or(directive.column, |t| t.column);
            return Err(self.error(column, format!("expected `{usage}`")));
        }
        Ok(())
    }

    fn mode(&self, tok: &Token) -> Result<usize, Diagnostic> {
        let num_modes = self.num_modes.expect("checked before elements");
        let mode: usize = tok
            .text
            .parse()
            .map_err(|_| self.error(tok.column, format!("malformed mode index `{}`", tok.text)))?;
        if mode >= num_modes {
            return Err(self.error(tok.column, format!("mode {mode} out of range for {num_modes} modes")));
        }
        if self.detected.contains(&mode) {
            return Err(self.error(tok.column, format!("mode {mode} is already detected")));
        }
        Ok(mode)
    }

    fn angle(&self, tok: &Token, key: &str) -> Result<f64, Diagnostic> {
        let value = tok
            .text
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| self.error(tok.column, format!("expected `{key}=<float>`")))?;
        let value_column = tok.column + key.chars().count() + 1;
        match value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(value_column, format!("malformed number `{value}`"))),
        }
    }

    fn directive(&mut self, tokens: &[Token]) -> Result<(), Diagnostic> {
        let (head, args) = tokens.split_first().expect("nonempty line");
        if head.text == "modes" {
            if self.num_modes.is_some() {
                return Err(self.error(head.column, "duplicate `modes` directive"));
            }
            self.arity(head, args, 1, "modes <int>")?;
            let n: usize = args[0]
                .text
                .parse()
                .map_err(|_| self.error(args[0].column, format!("malformed mode count `{}`", args[0].text)))?;
            if n < 2 {
                return Err(self.error(args[0].column, "a circuit needs at least 2 modes"));
            }
            self.num_modes = Some(n);
            return Ok(());
        }
        if !matches!(head.text, "bs" | "ps" | "det") {
            return Err(self.error(head.column, format!("unknown directive `{}`", head.text)));
        }
        if self.num_modes.is_none() {
            return Err(self.error(head.column, "missing `modes` directive before first element"));
        }
        match head.text {
            "bs" => {
                self.arity(head, args, 3, "bs <mode_a> <mode_b> theta=<float>")?;
                let a = self.mode(&args[0])?;
                let b = self.mode(&args[1])?;
                if a == b {
                    return Err(self.error(args[1].column, "beam splitter needs two distinct modes"));
                }
                let theta = self.angle(&args[2], "theta")?;
                self.elements.push(Element::beam_splitter(a, b, theta));
            }
            "ps" => {
                self.arity(head, args, 2, "ps <mode> phi=<float>")?;
                let m = self.mode(&args[0])?;
                let phi = self.angle(&args[1], "phi")?;
                self.elements.push(Element::phase_shift(m, phi));
            }
            _ => {
                self.arity(head, args, 1, "det <mode>")?;
                let m = self.mode(&args[0])?;
                self.detected.insert(m);
                self.detectors.push(Detector {
                    mode: m,
                    position: self.elements.len(),
                });
            }
        }
        Ok(())
    }
}

/// Parses a netlist, reporting the first problem with its line and column.
pub fn parse_netlist(text: &str) -> Result<Circuit> {
    let mut p = Parser {
        line: 0,
        num_modes: None,
        elements: Vec::new(),
        detectors: Vec::new(),
        detected: BTreeSet::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let code = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(code);
        if tokens.is_empty() {
            continue;
        }
        p.directive(&tokens)?;
    }
    let num_modes = p
        .num_modes
        .ok_or_else(|| Diagnostic::new(p.line.max(1), 1, "missing `modes` directive"))?;
    Circuit::new(num_modes, p.elements, p.detectors)
}

/// 17 significant digits: enough to read back the identical `f64`.
fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical text form: one directive per line, detectors where they were
/// declared, angles with 17 significant digits.
pub fn emit_netlist(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "modes {}", c.num_modes()).unwrap();
    let mut detectors = c.detectors().iter().peekable();
    for (i, e) in c.elements().iter().enumerate() {
        while let Some(d) = detectors.next_if(|d| d.position == i) {
            writeln!(out, "det {}", d.mode).unwrap();
        }
        match *e {
            Element::BeamSplitter { mode_a, mode_b, theta } => {
                writeln!(out, "bs {mode_a} {mode_b} theta={}", float(theta)).unwrap()
            }
            Element::PhaseShift { mode, phi } => writeln!(out, "ps {mode} phi={}", float(phi)).unwrap(),
        }
    }
    for d in detectors {
        writeln!(out, "det {}", d.mode).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::error::Error;

    fn diag(text: &str) -> Diagnostic {
        match parse_netlist(text) {
            Err(Error::Diagnostic(d)) => d,
            other => panic!("expected a diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn parses_minimal_netlist() {
        let c = parse_netlist("modes 2\nbs 0 1 theta=0.7853981633974483").unwrap();
        assert_eq!(c.num_modes(), 2);
        assert_eq!(
            c.elements(),
            &[Element::beam_splitter(0, 1, std::f64::consts::FRAC_PI_4)]
        );
        assert!(c.detectors().is_empty());
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\n  modes 3   # three modes\nps 2 phi=1.5\n\n# done\ndet 0\n";
        let c = parse_netlist(text).unwrap();
        assert_eq!(c.elements().len(), 1);
        assert_eq!(c.detectors(), &[Detector { mode: 0, position: 1 }]);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let d = diag("modes 2\nxx 0");
        assert_eq!((d.line, d.column), (2, 1));
        assert!(d.message.contains("unknown directive"));

        let d = diag("modes 2\n  bs 0 5 theta=1");
        assert_eq!((d.line, d.column), (2, 8));
        assert!(d.message.contains("out of range"));

        let d = diag("modes 2\nmodes 3");
        assert_eq!((d.line, d.column), (2, 1));
        assert!(d.message.contains("duplicate"));

        let d = diag("# nothing\nbs 0 1 theta=1");
        assert_eq!((d.line, d.column), (2, 1));
        assert!(d.message.contains("missing `modes`"));

        let d = diag("");
        assert_eq!(d.line, 1);
        assert!(d.message.contains("missing `modes`"));

        let d = diag("modes 2\nbs 0 1 theta=1.2.3");
        assert_eq!((d.line, d.column), (2, 14));
        assert!(d.message.contains("malformed number"));

        let d = diag("modes 2\nps 0 phi=nan");
        assert!(d.message.contains("malformed number"));

        let d = diag("modes 2\nps 0 theta=1");
        assert_eq!((d.line, d.column), (2, 6));

        let d = diag("modes two");
        assert_eq!((d.line, d.column), (1, 7));

        let d = diag("modes 3\ndet 1\nbs 0 1 theta=0.1");
        assert_eq!((d.line, d.column), (3, 6));
        assert!(d.message.contains("already detected"));

        let d = diag("modes 3\nbs 1 1 theta=0.1");
        assert_eq!(d.line, 2);

        let d = diag("modes 3\nps 1 phi=0.1 extra");
        assert_eq!((d.line, d.column), (2, 14));
    }

    #[test]
    fn emit_places_detectors_in_order() {
        let c = CircuitBuilder::new(3)
            .beam_splitter(0, 1, 0.25)
            .detect(0)
            .phase_shift(1, 0.5)
            .detect(2)
            .build()
            .unwrap();
        let text = emit_netlist(&c);
        assert_eq!(
            text,
            "modes 3\nbs 0 1 theta=2.5000000000000000e-1\ndet 0\nps 1 phi=5.0000000000000000e-1\ndet 2\n"
        );
        assert_eq!(parse_netlist(&text).unwrap(), c);
    }

    #[test]
    fn empty_circuit_emits_modes_and_detectors() {
        let c = CircuitBuilder::new(4).detect(3).detect(1).build().unwrap();
        assert_eq!(emit_netlist(&c), "modes 4\ndet 3\ndet 1\n");
    }

    #[test]
    fn tokenizer_counts_characters() {
        let toks = tokenize("  ab\tcd  é f");
        let cols: Vec<_> = toks.iter().map(|t| (t.text, t.column)).collect();
        assert_eq!(cols, vec![("ab", 3), ("cd", 6), ("é", 10), ("f", 12)]);
    }
}
