use crate::error::SyntaxError;
use crate::predicate::{Comparator, Predicate, RenameSpec};
use crate::relation::SpecialCode;
use crate::value::{Attr, Header, ScalarValue};

use super::Expr;

/// Deepest tree the parser will build. Everything downstream recurses on
/// the tree, so this also bounds stack use there.
pub const MAX_DEPTH: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Number(String),
    Quoted(String),
    Star,
    Plus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Amp,
    Arrow,
    Cmp(Comparator),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::Quoted(_) => "quoted constant".into(),
            Tok::Star => "'*'".into(),
            Tok::Plus => "'+'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
            Tok::Amp => "'&'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Cmp(c) => format!("'{}'", c.symbol()),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_word_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn error_at(src: &str, offset: usize, expected: &[&str], found: String) -> SyntaxError {
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let col = before[line_start..].chars().count() + 1;
    SyntaxError {
        offset,
        line,
        col,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = bytes.get(i + 1).copied();
        let tok = match b {
            b'*' => Tok::Star,
            b'+' => Tok::Plus,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b',' => Tok::Comma,
            b'&' => Tok::Amp,
            b'=' => Tok::Cmp(Comparator::Eq),
            b'!' if two == Some(b'=') => {
                i += 1;
                Tok::Cmp(Comparator::Ne)
            }
            b'<' if two == Some(b'=') => {
                i += 1;
                Tok::Cmp(Comparator::Le)
            }
            b'>' if two == Some(b'=') => {
                i += 1;
                Tok::Cmp(Comparator::Ge)
            }
            b'<' => Tok::Cmp(Comparator::Lt),
            b'>' => Tok::Cmp(Comparator::Gt),
            b'-' if two == Some(b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'-' if two.is_some_and(|c| c.is_ascii_digit()) => {
                i += 1;
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < bytes.len() && is_word_byte(bytes[i + 1]) {
                    return Err(error_at(src, start, &["integer"], "malformed number".into()));
                }
                Tok::Number(src[start..=i].to_string())
            }
            b'\'' => {
                let mut text = String::new();
                let mut chars = src[i + 1..].char_indices();
                loop {
                    match chars.next() {
                        None => {
                            return Err(error_at(src, start, &["closing quote"], "end of input".into()))
                        }
                        Some((k, '\'')) => {
                            i += 1 + k;
                            break;
                        }
                        Some((_, '\\')) => match chars.next() {
                            Some((_, c @ ('\'' | '\\'))) => text.push(c),
                            Some((k, c)) => {
                                return Err(error_at(
                                    src,
                                    i + 1 + k,
                                    &["'\\''", "'\\\\'"],
                                    format!("escape `\\{c}`"),
                                ))
                            }
                            None => {
                                return Err(error_at(src, start, &["closing quote"], "end of input".into()))
                            }
                        },
                        Some((_, c)) => text.push(c),
                    }
                }
                if text.is_empty() {
                    return Err(error_at(src, start, &["non-empty constant"], "''".into()));
                }
                Tok::Quoted(text)
            }
            b if is_word_byte(b) => {
                while i + 1 < bytes.len() && is_word_byte(bytes[i + 1]) {
                    i += 1;
                }
                let w = &src[start..=i];
                if w.bytes().all(|c| c.is_ascii_digit()) {
                    Tok::Number(w.to_string())
                } else {
                    Tok::Word(w.to_string())
                }
            }
            _ => {
                let c = src[i..].chars().next().unwrap();
                return Err(error_at(src, start, &["token"], format!("`{c}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

const ATOM_START: &[&str] = &["relation name", "00", "01", "10", "11", "'['", "'('", "function call"];
const CONSTANT: &[&str] = &["attribute", "integer", "quoted constant"];

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    nesting: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let (tok, offset) = &self.toks[self.pos];
        Err(error_at(self.src, *offset, expected, tok.describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[&tok.describe()])
        }
    }

    fn guard_depth(&self, depth: usize) -> PResult<()> {
        if depth > MAX_DEPTH {
            self.fail(&["shallower nesting"])
        } else {
            Ok(())
        }
    }

    fn union(&mut self) -> PResult<(Expr, usize)> {
        let (mut left, mut depth) = self.join()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let (right, d) = self.join()?;
            depth = 1 + depth.max(d);
            self.guard_depth(depth)?;
            left = Expr::union(left, right);
        }
        Ok((left, depth))
    }

    fn join(&mut self) -> PResult<(Expr, usize)> {
        let (mut left, mut depth) = self.atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let (right, d) = self.atom()?;
            depth = 1 + depth.max(d);
            self.guard_depth(depth)?;
            left = Expr::join(left, right);
        }
        Ok((left, depth))
    }

    /// A full expression inside parentheses or call arguments. Nesting is
    /// bounded on its own so the parser's recursion stays shallow.
    fn nested(&mut self) -> PResult<(Expr, usize)> {
        self.nesting += 1;
        self.guard_depth(self.nesting)?;
        let out = self.union();
        self.nesting -= 1;
        out
    }

    fn atom(&mut self) -> PResult<(Expr, usize)> {
        match self.peek().clone() {
            Tok::Number(n) if !n.starts_with('-') => {
                self.bump();
                match SpecialCode::from_symbol(&n) {
                    Some(code) => Ok((Expr::Special(code), 1)),
                    None => Ok((Expr::Name(n), 1)),
                }
            }
            Tok::Word(w) if *self.peek_at(1) == Tok::LParen && is_function(&w) => {
                self.bump();
                self.bump();
                self.call(&w)
            }
            Tok::Word(w) => {
                self.bump();
                Ok((Expr::Name(w), 1))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.nested()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::LBracket => {
                self.bump();
                let e = if matches!(self.peek(), Tok::Word(_)) && matches!(self.peek_at(1), Tok::Cmp(_)) {
                    Expr::Pred(self.predicate()?)
                } else {
                    Expr::Empty(self.attr_list(Tok::RBracket)?)
                };
                self.expect(Tok::RBracket)?;
                Ok((e, 1))
            }
            _ => self.fail(ATOM_START),
        }
    }

    fn call(&mut self, f: &str) -> PResult<(Expr, usize)> {
        let (arg, d) = self.nested()?;
        self.expect(Tok::Comma)?;
        let (e, depth) = match f {
            "select" => (Expr::select(arg, self.predicate()?), d + 1),
            "project" => {
                let h = if *self.peek() == Tok::LBrace {
                    self.bump();
                    let h = self.attr_list(Tok::RBrace)?;
                    self.expect(Tok::RBrace)?;
                    h
                } else {
                    self.attr_list(Tok::RParen)?
                };
                (Expr::project(arg, h), d + 1)
            }
            "rename" => {
                let from = self.attr()?;
                self.expect(Tok::Arrow)?;
                let to_offset = self.toks[self.pos].1;
                let to = self.attr()?;
                let spec = RenameSpec::new(from, to).map_err(|_| {
                    error_at(self.src, to_offset, &["attribute other than the source"], "same attribute".into())
                })?;
                (Expr::rename(arg, spec), d + 1)
            }
            "divide" | "minus" => {
                let (right, d2) = self.nested()?;
                let e = if f == "divide" {
                    Expr::divide(arg, right)
                } else {
                    Expr::minus(arg, right)
                };
                (e, 1 + d.max(d2))
            }
            _ => unreachable!("checked by is_function"),
        };
        self.guard_depth(depth)?;
        self.expect(Tok::RParen)?;
        Ok((e, depth))
    }

    fn attr(&mut self) -> PResult<Attr> {
        match self.peek().clone() {
            Tok::Word(w) => {
                self.bump();
                Ok(Attr::new(w))
            }
            _ => self.fail(&["attribute"]),
        }
    }

    /// Space- or comma-separated attribute names up to `close`.
    fn attr_list(&mut self, close: Tok) -> PResult<Header> {
        let mut h = Header::empty();
        loop {
            match self.peek().clone() {
                Tok::Word(w) => {
                    self.bump();
                    h = h.with(Attr::new(w));
                }
                Tok::Comma if !h.is_empty() && matches!(self.peek_at(1), Tok::Word(_)) => {
                    self.bump();
                }
                t if t == close => return Ok(h),
                _ => return self.fail(&["attribute", &close.describe()]),
            }
        }
    }

    fn predicate(&mut self) -> PResult<Predicate> {
        let mut parts = vec![self.comparison()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.comparison()?);
        }
        Ok(Predicate::and(parts))
    }

    fn comparison(&mut self) -> PResult<Predicate> {
        let left = self.attr()?;
        let op = match self.peek() {
            Tok::Cmp(c) => *c,
            _ => return self.fail(&["comparator"]),
        };
        self.bump();
        match self.peek().clone() {
            Tok::Word(w) => {
                self.bump();
                Ok(Predicate::attr_attr(left, op, Attr::new(w)))
            }
            Tok::Number(n) | Tok::Quoted(n) => {
                self.bump();
                let v = ScalarValue::new(n).expect("lexer yields non-empty constants");
                Ok(Predicate::attr_const(left, op, v))
            }
            _ => self.fail(CONSTANT),
        }
    }
}

fn is_function(w: &str) -> bool {
    matches!(w, "select" | "project" | "rename" | "divide" | "minus")
}

pub fn parse(text: &str) -> Result<Expr, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { src: text, toks, pos: 0, nesting: 0 };
    let (e, _) = p.union()?;
    if *p.peek() != Tok::Eof {
        return p.fail(&["'*'", "'+'", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn examples() {
        let gt = Predicate::attr_attr("x", Comparator::Gt, "y");
        assert_eq!(p("A * [x>y]"), Expr::join(Expr::name("A"), Expr::Pred(gt)));
        let y: Header = ["y"].into_iter().collect();
        assert_eq!(p("A + [y]"), Expr::union(Expr::name("A"), Expr::Empty(y)));
        assert_eq!(
            p("A * B + C"),
            Expr::union(Expr::join(Expr::name("A"), Expr::name("B")), Expr::name("C"))
        );
    }

    #[test]
    fn specials_and_literals() {
        assert_eq!(p("10"), Expr::Special(SpecialCode::Top10));
        assert_eq!(p("[]"), Expr::Empty(Header::empty()));
        assert_eq!(p("[x, y]"), p("[y x]"));
        let e = p("[x='it s' & y<=-3]");
        assert!(matches!(e, Expr::Pred(Predicate::And(ref v)) if v.len() == 2), "{e:?}");
    }

    #[test]
    fn quoting() {
        let e = p(r"[y='it\'s']");
        assert_eq!(e.to_string(), r"[y='it\'s']");
        assert_eq!(p("[x='1']"), p("[x=1]"));
    }

    #[test]
    fn functions() {
        let e = p("select(project(A, {x,y}), x=1)");
        assert_eq!(e.to_string(), "select(project(A, {x, y}), x=1)");
        assert_eq!(p("project(A, x y)"), p("project(A,{y,x})"));
        assert_eq!(p("rename(A, y -> z)").to_string(), "rename(A, y -> z)");
        assert_eq!(p("divide(A*B, C)").to_string(), "divide(A * B, C)");
        // A function word without a call is a plain name.
        assert_eq!(p("select"), Expr::name("select"));
    }

    #[test]
    fn round_trip() {
        for s in [
            "A * (B + C)",
            "(A + B) * C",
            "A + (B + C)",
            "A * (B * C)",
            "minus(A, B + C) * 11",
            "[x y] + [x!=y & x>=2]",
            "((A))",
        ] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s}");
        }
    }

    #[test]
    fn errors_carry_position() {
        let err = parse("A *\n  + B").unwrap_err();
        assert_eq!((err.line, err.col, err.offset), (2, 3, 6));
        assert!(err.expected.contains(&"relation name".to_string()));
        assert_eq!(err.to_string().split(':').take(2).collect::<Vec<_>>(), ["2", "3"]);
        assert!(parse("A B").is_err());
        assert!(parse("[x='a]").is_err());
        assert!(parse("rename(A, x -> x)").is_err());
        assert!(parse("A # B").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn depth_is_bounded() {
        let deep = "(".repeat(5000) + "A" + &")".repeat(5000);
        assert!(parse(&deep).is_err());
        let long = vec!["A"; 5000].join(" * ");
        assert!(parse(&long).is_err());
        let ok = vec!["A"; 100].join(" + ");
        assert!(parse(&ok).is_ok());
    }
}
