use std::collections::HashMap;
use std::fmt::Write;

use crate::error::{Error, Result, Span};
use crate::netcore::ReactionNetwork;

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        span: Span { line, column },
        message: message.into(),
    }
}

struct Cursor<'a> {
    chars: &'a [char],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        err(self.line, self.col(), message)
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        self.skip_ws();
        let n = lit.chars().count();
        let matches = self.pos + n <= self.chars.len() && self.chars[self.pos..self.pos + n].iter().copied().eq(lit.chars());
        if matches {
            self.pos += n;
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.error(format!("expected {what}"))),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn integer(&mut self) -> Option<(String, usize)> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| (self.chars[start..self.pos].iter().collect(), start + 1))
    }

    fn float(&mut self) -> Result<(f64, usize)> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            let sign_ok = (c == '+' || c == '-')
                && (self.pos == start || matches!(self.chars[self.pos - 1], 'e' | 'E'));
            if c.is_ascii_digit() || c == '.' || c == 'e' || c == 'E' || sign_ok {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((v, start + 1)),
            _ => Err(err(self.line, start + 1, format!("invalid number `{text}`"))),
        }
    }
}

/// Parses the line-oriented network format:
///
/// ```text
/// species X1 X2
/// reaction r1: 0 <-> X1 ; kf=1 kr=1
/// reaction r3: 2 X1 + X2 <-> 3 X1 ; kf=1 kr=0.1
/// ```
///
/// The left complex of a reaction is the head of its edge, so the forward
/// flux consumes it.
pub fn parse_network(text: &str) -> Result<ReactionNetwork> {
    let mut species: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut vertices: Vec<Vec<u32>> = Vec::new();
    let mut vertex_index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut kplus = Vec::new();
    let mut kminus = Vec::new();
    let mut n_lines = 0;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        n_lines = line;
        let body = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = body.chars().collect();
        let mut cur = Cursor { chars: &chars, pos: 0, line };
        if cur.at_end() {
            continue;
        }
        let (keyword, kcol) = cur.ident("`species` or `reaction`")?;
        match keyword.as_str() {
            "species" => {
                if cur.at_end() {
                    return Err(cur.error("expected at least one species name"));
                }
                while !cur.at_end() {
                    let (name, col) = cur.ident("species name")?;
                    if !matches!(cur.peek(), None | Some(' ' | '\t')) {
                        return Err(cur.error("unexpected character in species name"));
                    }
                    if index.contains_key(&name) {
                        return Err(err(line, col, format!("duplicate species `{name}`")));
                    }
                    index.insert(name.clone(), species.len());
                    species.push(name);
                }
            }
            "reaction" => {
                let (label, lcol) = cur.ident("reaction label")?;
                if labels.contains(&label) {
                    return Err(err(line, lcol, format!("duplicate reaction label `{label}`")));
                }
                cur.expect(":")?;
                cur.skip_ws();
                let hcol = cur.col();
                let head = complex(&mut cur, &index, species.len())?;
                cur.expect("<->")?;
                let tail = complex(&mut cur, &index, species.len())?;
                if head == tail {
                    return Err(err(line, hcol, "both sides of the reaction are the same complex"));
                }
                cur.expect(";")?;
                cur.expect("kf")?;
                cur.expect("=")?;
                let (kf, fcol) = cur.float()?;
                cur.expect("kr")?;
                cur.expect("=")?;
                let (kr, rcol) = cur.float()?;
                if !cur.at_end() {
                    return Err(cur.error("unexpected trailing input"));
                }
                for (k, col, which) in [(kf, fcol, "kf"), (kr, rcol, "kr")] {
                    if k <= 0.0 {
                        return Err(err(line, col, format!("rate {which} must be positive, got {k}")));
                    }
                }
                let mut id = |c: Vec<u32>| {
                    *vertex_index.entry(c.clone()).or_insert_with(|| {
                        vertices.push(c);
                        vertices.len() - 1
                    })
                };
                let h = id(head);
                let t = id(tail);
                edges.push((h, t));
                labels.push(label);
                kplus.push(kf);
                kminus.push(kr);
            }
            other => {
                return Err(err(line, kcol, format!("expected `species` or `reaction`, found `{other}`")));
            }
        }
    }
    if edges.is_empty() {
        return Err(err(n_lines + 1, 1, "network declares no reactions"));
    }
    ReactionNetwork::with_labels(species, vertices, edges, labels, kplus, kminus)
}

fn complex(cur: &mut Cursor, index: &HashMap<String, usize>, n: usize) -> Result<Vec<u32>> {
    let mut comp = vec![0u32; n];
    cur.skip_ws();
    if cur.peek() == Some('0') {
        let save = cur.pos;
        cur.pos += 1;
        if !matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            return Ok(comp);
        }
        cur.pos = save;
    }
    loop {
        cur.skip_ws();
        let coef = match cur.integer() {
            Some((digits, col)) => match digits.parse::<u32>() {
                Ok(0) | Err(_) => return Err(err(cur.line, col, format!("invalid coefficient `{digits}`"))),
                Ok(c) => c,
            },
            None => 1,
        };
        let (name, col) = cur.ident("species name")?;
        let Some(&i) = index.get(&name) else {
            return Err(err(cur.line, col, format!("unknown species `{name}`")));
        };
        comp[i] = comp[i]
            .checked_add(coef)
            .ok_or_else(|| err(cur.line, col, "coefficient overflow"))?;
        cur.skip_ws();
        if cur.peek() == Some('+') {
            cur.pos += 1;
        } else {
            return Ok(comp);
        }
    }
}

fn write_complex(out: &mut String, net: &ReactionNetwork, comp: &[u32]) {
    let mut first = true;
    for (name, &c) in net.species().iter().zip(comp) {
        if c == 0 {
            continue;
        }
        if !first {
            out.push_str(" + ");
        }
        first = false;
        if c > 1 {
            let _ = write!(out, "{c} ");
        }
        out.push_str(name);
    }
    if first {
        out.push('0');
    }
}

/// Canonical text form; parsing it yields the same network.
pub fn network_to_text(net: &ReactionNetwork) -> String {
    let mut out = String::from("species");
    for s in net.species() {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    for (e, &(h, t)) in net.edges().iter().enumerate() {
        let _ = write!(out, "reaction {}: ", net.labels()[e]);
        write_complex(&mut out, net, &net.hypervertices()[h]);
        out.push_str(" <-> ");
        write_complex(&mut out, net, &net.hypervertices()[t]);
        let _ = writeln!(out, " ; kf={:?} kr={:?}", net.kplus()[e], net.kminus()[e]);
    }
    out
}
