use super::{braid_closure, BraidWord, DiagramError, PlanarDiagram};

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DiagramError> {
        Err(DiagramError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), DiagramError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<i64, DiagramError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<i64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn label(&mut self) -> Result<u32, DiagramError> {
        let start = self.pos;
        let v = self.int()?;
        if v <= 0 || v > u32::MAX as i64 / 2 {
            self.pos = start;
            return self.err("arc labels must be positive integers");
        }
        Ok(v as u32)
    }
}

/// Parses PD text into a validated diagram.
///
/// Terms are separated by whitespace: `X[a,b,c,d]` crossings, `U` or `U[n]`
/// for a crossing-free circle, `base=n` for the basepoint, or a single braid
/// `B[s; l1,l2,...]` standing for its closure. `#` starts a comment.
pub fn parse_pd(text: &str) -> Result<PlanarDiagram, DiagramError> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut tuples = Vec::new();
    let mut free: Vec<u32> = Vec::new();
    let mut unlabeled_circles = 0usize;
    let mut base: Option<u32> = None;
    let mut braid: Option<BraidWord> = None;
    loop {
        lx.skip_ws();
        let Some(c) = lx.peek() else { break };
        match c {
            b'X' => {
                lx.pos += 1;
                lx.expect(b'[')?;
                let mut t = [0u32; 4];
                for (k, slot) in t.iter_mut().enumerate() {
                    if k > 0 {
                        lx.expect(b',')?;
                    }
                    *slot = lx.label()?;
                }
                lx.expect(b']')?;
                tuples.push(t);
            }
            b'U' => {
                lx.pos += 1;
                if lx.peek() == Some(b'[') {
                    lx.pos += 1;
                    free.push(lx.label()?);
                    lx.expect(b']')?;
                } else {
                    unlabeled_circles += 1;
                }
            }
            b'B' => {
                let at = lx.pos;
                lx.pos += 1;
                lx.expect(b'[')?;
                let s = lx.int()?;
                lx.expect(b';')?;
                let mut letters = Vec::new();
                lx.skip_ws();
                if lx.peek() != Some(b']') {
                    loop {
                        letters.push(lx.int()?);
                        lx.skip_ws();
                        if lx.peek() == Some(b',') {
                            lx.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                lx.expect(b']')?;
                if braid.is_some() {
                    lx.pos = at;
                    return lx.err("only one braid term is allowed");
                }
                let strands = usize::try_from(s).map_err(|_| DiagramError::Braid("strand count".into()))?;
                braid = Some(BraidWord::new(strands, letters)?);
            }
            b'b' => {
                let rest = &lx.src[lx.pos..];
                if !rest.starts_with(b"base") {
                    return lx.err("unexpected token");
                }
                lx.pos += 4;
                lx.expect(b'=')?;
                if base.is_some() {
                    return lx.err("basepoint given twice");
                }
                base = Some(lx.label()?);
            }
            _ => return lx.err(format!("unexpected character '{}'", c as char)),
        }
    }
    if let Some(w) = braid {
        if !tuples.is_empty() || !free.is_empty() || unlabeled_circles > 0 {
            return Err(DiagramError::Syntax {
                pos: 0,
                msg: "a braid term cannot be mixed with crossings or circles".into(),
            });
        }
        let d = braid_closure(&w);
        return match base {
            Some(b) => d.with_basepoint(b),
            None => Ok(d),
        };
    }
    let mut next = tuples
        .iter()
        .flat_map(|t| t.iter())
        .chain(free.iter())
        .copied()
        .max()
        .unwrap_or(0)
        + 1;
    for _ in 0..unlabeled_circles {
        free.push(next);
        next += 1;
    }
    PlanarDiagram::from_tuples(&tuples, &free, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Basepoint;

    #[test]
    fn round_trip() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
        assert_eq!(parse_pd(&d.to_pd_string()).unwrap(), d);
        assert_eq!(d.to_pd_string(), "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] base=1");
    }

    #[test]
    fn lone_circle() {
        let d = parse_pd("U").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.basepoint(), Basepoint::Circle(1));
    }

    #[test]
    fn missing_arcs_reported() {
        let e = parse_pd("X[1,4,2,3] X[3,6,4,5]").unwrap_err();
        assert!(matches!(e, DiagramError::LabelCount { count: 1, .. }), "{e}");
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_pd("X[1,4,2,5] X[3,6;4,1]").unwrap_err();
        assert_eq!(e, DiagramError::Syntax { pos: 16, msg: "expected ','".into() });
    }

    #[test]
    fn basepoint_annotation_and_braid_term() {
        let d = parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] base=3").unwrap();
        assert_eq!(d.basepoint(), Basepoint::Arc(3));
        let b = parse_pd("B[2; 1,1,1]").unwrap();
        assert_eq!(b.writhe(), 3);
        assert!(parse_pd("X[1,4,2,5] base=9").is_err());
    }
}
