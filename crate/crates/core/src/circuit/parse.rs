use crate::optics::{BasisMode, CylindricalMode, ModeLabel};

use super::{CircuitSpec, Element, InputState, ParseError, ParseErrorKind, Wiring};

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Eq,
    Arrow,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    tok: Tok<'a>,
    col: usize,
}

struct Line<'a> {
    no: usize,
    tokens: Vec<Token<'a>>,
    /// Column just past the last token, for "missing argument" errors.
    end_col: usize,
}

impl<'a> Line<'a> {
    fn err(&self, col: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.no,
            column: col,
            kind,
            message: message.into(),
        }
    }

    fn col(&self, i: usize) -> usize {
        self.tokens.get(i).map_or(self.end_col, |t| t.col)
    }

    fn word(&self, i: usize, what: &str) -> Result<&'a str, ParseError> {
        match self.tokens.get(i) {
            Some(Token {
                tok: Tok::Word(w), ..
            }) => Ok(w),
            Some(t) => Err(self.err(t.col, ParseErrorKind::Syntax, format!("expected {what}"))),
            None => Err(self.err(
                self.end_col,
                ParseErrorKind::Syntax,
                format!("missing {what}"),
            )),
        }
    }

    fn name(&self, i: usize, what: &str) -> Result<&'a str, ParseError> {
        let w = self.word(i, what)?;
        if !is_identifier(w) {
            return Err(self.err(
                self.col(i),
                ParseErrorKind::Syntax,
                format!("invalid {what} `{w}`"),
            ));
        }
        Ok(w)
    }

    fn expect_end(&self, i: usize) -> Result<(), ParseError> {
        if i < self.tokens.len() {
            return Err(self.err(
                self.col(i),
                ParseErrorKind::Syntax,
                "unexpected trailing input",
            ));
        }
        Ok(())
    }

    /// Parses `key = number` starting at token `i`.
    fn keyed_number(&self, i: usize, key: &str) -> Result<f64, ParseError> {
        let k = self.word(i, &format!("`{key}=`"))?;
        if k != key {
            return Err(self.err(
                self.col(i),
                ParseErrorKind::Syntax,
                format!("expected `{key}=`, found `{k}`"),
            ));
        }
        if !matches!(self.tokens.get(i + 1), Some(Token { tok: Tok::Eq, .. })) {
            return Err(self.err(
                self.col(i + 1),
                ParseErrorKind::Syntax,
                format!("expected `=` after `{key}`"),
            ));
        }
        let v = match self.tokens.get(i + 2) {
            Some(Token {
                tok: Tok::Word(w), ..
            }) => *w,
            _ => {
                return Err(self.err(
                    self.col(i + 2),
                    ParseErrorKind::BadNumber,
                    format!("missing value for `{key}`"),
                ))
            }
        };
        parse_number(v).ok_or_else(|| {
            self.err(
                self.col(i + 2),
                ParseErrorKind::BadNumber,
                format!("`{v}` is not a number"),
            )
        })
    }

    fn mode_label(&self, i: usize) -> Result<ModeLabel, ParseError> {
        let w = self.word(i, "mode `<port>:<H10|V10|H01|V01>`")?;
        let (port, mode) = w.split_once(':').ok_or_else(|| {
            self.err(
                self.col(i),
                ParseErrorKind::Syntax,
                format!("expected `<port>:<mode>`, found `{w}`"),
            )
        })?;
        if !is_identifier(port) {
            return Err(self.err(
                self.col(i),
                ParseErrorKind::Syntax,
                format!("invalid port name `{port}`"),
            ));
        }
        let mode: BasisMode = mode.parse().map_err(|_| {
            self.err(
                self.col(i) + port.len() + 1,
                ParseErrorKind::Syntax,
                format!("unknown basis mode `{mode}`, expected H10, V10, H01 or V01"),
            )
        })?;
        Ok(ModeLabel::new(port, mode))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Decimal number with optional exponent; no `inf`, `nan` or hex.
fn parse_number(s: &str) -> Option<f64> {
    let b = s.as_bytes();
    let mut i = 0;
    if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
        i += 1;
    }
    let int_start = i;
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    let mut digits = i - int_start;
    if i < b.len() && b[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        digits += i - frac_start;
    }
    if digits == 0 {
        return None;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        let exp_start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        if i == exp_start {
            return None;
        }
    }
    if i != b.len() {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn tokenize(no: usize, text: &str) -> Line<'_> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut end_col = 1;
    // columns are 1-based character positions
    let col_of = |byte: usize| text[..byte].chars().count() + 1;
    while let Some(&(i, c)) = chars.peek() {
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '=' {
            chars.next();
            tokens.push(Token {
                tok: Tok::Eq,
                col: col_of(i),
            });
            end_col = col_of(i) + 1;
            continue;
        }
        if text[i..].starts_with("->") {
            chars.next();
            chars.next();
            tokens.push(Token {
                tok: Tok::Arrow,
                col: col_of(i),
            });
            end_col = col_of(i) + 2;
            continue;
        }
        let start = i;
        let mut end = i;
        while let Some(&(j, c)) = chars.peek() {
            if c.is_whitespace() || c == '=' || c == '#' || text[j..].starts_with("->") {
                break;
            }
            end = j + c.len_utf8();
            chars.next();
        }
        tokens.push(Token {
            tok: Tok::Word(&text[start..end]),
            col: col_of(start),
        });
        end_col = col_of(end);
    }
    Line {
        no,
        tokens,
        end_col,
    }
}

fn wiring<'l>(line: &'l Line<'_>, col: usize) -> impl FnOnce(String) -> ParseError + 'l {
    move |msg| line.err(col, ParseErrorKind::Wiring, msg)
}

/// Parses a netlist, returning the first error with its position.
pub fn parse_circuit(text: &str) -> Result<CircuitSpec, ParseError> {
    let mut w = Wiring::default();
    let mut ports: Vec<(String, InputState)> = Vec::new();
    let mut elements = Vec::new();
    let mut outputs: Option<Vec<ModeLabel>> = None;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let line = tokenize(idx + 1, raw);
        last_line = idx + 1;
        if line.tokens.is_empty() {
            continue;
        }
        let head = match &line.tokens[0].tok {
            Tok::Word(h) => *h,
            _ => {
                return Err(line.err(
                    line.col(0),
                    ParseErrorKind::Syntax,
                    "expected a statement keyword",
                ))
            }
        };
        if outputs.is_some() {
            return Err(line.err(
                line.col(0),
                ParseErrorKind::Wiring,
                "no statements may follow `outputs`",
            ));
        }
        match head {
            "port" => {
                let name = line.name(1, "port name")?;
                line.expect_end(2)?;
                w.declare_source(name).map_err(wiring(&line, line.col(1)))?;
                ports.push((name.to_string(), InputState::Vacuum));
            }
            "input" => {
                let name = line.name(1, "port name")?;
                let slot = w.set_input(name).map_err(wiring(&line, line.col(1)))?;
                let state = match line.word(2, "`vacuum` or `squeezed`")? {
                    "vacuum" => {
                        line.expect_end(3)?;
                        InputState::Vacuum
                    }
                    "squeezed" => {
                        let kind = match line.word(3, "cylindrical mode `R` or `A`")? {
                            "R" => CylindricalMode::RPlus,
                            "A" => CylindricalMode::APlus,
                            other => {
                                return Err(line.err(
                                    line.col(3),
                                    ParseErrorKind::Syntax,
                                    format!("expected `R` or `A`, found `{other}`"),
                                ))
                            }
                        };
                        let r = line.keyed_number(4, "r")?;
                        if r < 0.0 {
                            return Err(line.err(
                                line.col(6),
                                ParseErrorKind::BadNumber,
                                "squeeze magnitude must be non-negative",
                            ));
                        }
                        let theta = line.keyed_number(7, "theta")?;
                        let loss = if line.tokens.len() > 10 {
                            let t = line.keyed_number(10, "loss")?;
                            if !(0.0..=1.0).contains(&t) {
                                return Err(line.err(
                                    line.col(12),
                                    ParseErrorKind::BadNumber,
                                    "transmittance must lie in [0, 1]",
                                ));
                            }
                            line.expect_end(13)?;
                            Some(t)
                        } else {
                            line.expect_end(10)?;
                            None
                        };
                        InputState::Squeezed {
                            kind,
                            r,
                            theta,
                            loss,
                        }
                    }
                    other => {
                        return Err(line.err(
                            line.col(2),
                            ParseErrorKind::Syntax,
                            format!("expected `vacuum` or `squeezed`, found `{other}`"),
                        ))
                    }
                };
                ports[slot].1 = state;
            }
            "hwp" => {
                let port = line.name(1, "port name")?;
                let deg = line.keyed_number(2, "deg")?;
                line.expect_end(5)?;
                w.block(port, "hwp").map_err(wiring(&line, line.col(1)))?;
                elements.push(Element::Hwp {
                    port: port.to_string(),
                    deg,
                });
            }
            "pbs" => {
                let in_a = line.name(1, "input port")?;
                let in_b = line.name(2, "input port")?;
                if !matches!(
                    line.tokens.get(3),
                    Some(Token {
                        tok: Tok::Arrow,
                        ..
                    })
                ) {
                    return Err(line.err(line.col(3), ParseErrorKind::Syntax, "expected `->`"));
                }
                let out_t = line.name(4, "output port")?;
                let out_r = line.name(5, "output port")?;
                line.expect_end(6)?;
                // point at the offending port when the input side is at fault
                let col = match (w.block(in_a, "pbs"), w.block(in_b, "pbs")) {
                    (Err(_), _) => line.col(1),
                    (_, Err(_)) => line.col(2),
                    _ => line.col(4),
                };
                w.pbs(in_a, in_b, out_t, out_r)
                    .map_err(wiring(&line, col))?;
                elements.push(Element::Pbs {
                    in_a: in_a.to_string(),
                    in_b: in_b.to_string(),
                    out_t: out_t.to_string(),
                    out_r: out_r.to_string(),
                });
            }
            "squeeze" => {
                let target = line.mode_label(1)?;
                let r = line.keyed_number(2, "r")?;
                if r < 0.0 {
                    return Err(line.err(
                        line.col(4),
                        ParseErrorKind::BadNumber,
                        "squeeze magnitude must be non-negative",
                    ));
                }
                let theta = line.keyed_number(5, "theta")?;
                line.expect_end(8)?;
                w.block(&target.port, "squeeze")
                    .map_err(wiring(&line, line.col(1)))?;
                elements.push(Element::Squeeze { target, r, theta });
            }
            "outputs" => {
                if line.tokens.len() < 2 {
                    return Err(line.err(
                        line.end_col,
                        ParseErrorKind::Syntax,
                        "`outputs` needs at least one mode",
                    ));
                }
                let mut labels: Vec<ModeLabel> = Vec::new();
                for i in 1..line.tokens.len() {
                    let label = line.mode_label(i)?;
                    w.block(&label.port, "outputs")
                        .map_err(wiring(&line, line.col(i)))?;
                    if labels.contains(&label) {
                        return Err(line.err(
                            line.col(i),
                            ParseErrorKind::Wiring,
                            format!("output `{label}` listed twice"),
                        ));
                    }
                    labels.push(label);
                }
                outputs = Some(labels);
            }
            other => {
                return Err(line.err(
                    line.col(0),
                    ParseErrorKind::UnknownElement,
                    format!("unknown statement `{other}`"),
                ))
            }
        }
    }

    let outputs = outputs.ok_or(ParseError {
        line: last_line,
        column: 1,
        kind: ParseErrorKind::Wiring,
        message: "no outputs declared".into(),
    })?;
    Ok(CircuitSpec {
        ports,
        elements,
        outputs,
    })
}
