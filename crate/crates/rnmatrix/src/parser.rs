//! Recursive-descent parser for the formula grammar.
//!
//! Variables match `[a-z][a-z0-9]*`. Connectives, tightest first: the unary
//! prefixes `~`, `#` (and `#1`/`#2` in the bimodal signature), then `&`, `|`,
//! `->`, `<->`. `&` and `|` associate to the left, `->` and `<->` to the
//! right. `&`, `|` and `<->` are abbreviations and are expanded eagerly:
//! `a & b` is `~(a -> ~b)`, `a | b` is `~a -> b`, and `a <-> b` is
//! `(a -> b) & (b -> a)`. The printer never reintroduces them.

use crate::error::ParseError;
use crate::formula::{Formula, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Var(String),
    Tilde,
    Hash,
    Hash2,
    Amp,
    Pipe,
    Arrow,
    Iff,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Var(v) => format!("variable `{v}`"),
            Token::Tilde => "`~`".into(),
            Token::Hash => "`#`".into(),
            Token::Hash2 => "`#2`".into(),
            Token::Amp => "`&`".into(),
            Token::Pipe => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::Iff => "`<->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '~' => {
                out.push((Token::Tilde, i));
                i += 1;
            }
            '&' => {
                out.push((Token::Amp, i));
                i += 1;
            }
            '|' => {
                out.push((Token::Pipe, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '#' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'2' {
                    out.push((Token::Hash2, i));
                    i += 2;
                } else if i + 1 < bytes.len() && bytes[i + 1] == b'1' {
                    out.push((Token::Hash, i));
                    i += 2;
                } else {
                    out.push((Token::Hash, i));
                    i += 1;
                }
            }
            '-' => {
                if i + 1 < bytes.len() && bytes[i + 1] == b'>' {
                    out.push((Token::Arrow, i));
                    i += 2;
                } else {
                    return Err(ParseError {
                        byte: i,
                        token: out.len() + 1,
                        message: "expected `->`".into(),
                    });
                }
            }
            '<' => {
                if i + 2 < bytes.len() && bytes[i + 1] == b'-' && bytes[i + 2] == b'>' {
                    out.push((Token::Iff, i));
                    i += 3;
                } else {
                    return Err(ParseError {
                        byte: i,
                        token: out.len() + 1,
                        message: "expected `<->`".into(),
                    });
                }
            }
            'a'..='z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && matches!(bytes[i] as char, 'a'..='z' | '0'..='9') {
                    i += 1;
                }
                out.push((Token::Var(input[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError {
                    byte: i,
                    token: out.len() + 1,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_byte: usize,
    signature: Signature,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let byte = self
            .tokens
            .get(self.pos)
            .map(|(_, b)| *b)
            .unwrap_or(self.end_byte);
        ParseError {
            byte,
            token: self.pos + 1,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error_here(format!(
                "expected {}, found {}",
                want.describe(),
                t.describe()
            ))),
            None => Err(self.error_here(format!("expected {}, found end of input", want.describe()))),
        }
    }

    // iff := imp (`<->` iff)?     desugared to (a -> b) & (b -> a)
    fn parse_iff(&mut self) -> Result<Formula, ParseError> {
        let a = self.parse_imp()?;
        if self.peek() == Some(&Token::Iff) {
            self.pos += 1;
            let b = self.parse_iff()?;
            let fwd = Formula::imp(a.clone(), b.clone());
            let back = Formula::imp(b, a);
            Ok(conj(fwd, back))
        } else {
            Ok(a)
        }
    }

    // imp := or (`->` imp)?
    fn parse_imp(&mut self) -> Result<Formula, ParseError> {
        let a = self.parse_or()?;
        if self.peek() == Some(&Token::Arrow) {
            self.pos += 1;
            let b = self.parse_imp()?;
            Ok(Formula::imp(a, b))
        } else {
            Ok(a)
        }
    }

    // or := and (`|` and)*        desugared to ~a -> b
    fn parse_or(&mut self) -> Result<Formula, ParseError> {
        let mut a = self.parse_and()?;
        while self.peek() == Some(&Token::Pipe) {
            self.pos += 1;
            let b = self.parse_and()?;
            a = Formula::imp(Formula::neg(a), b);
        }
        Ok(a)
    }

    // and := unary (`&` unary)*   desugared to ~(a -> ~b)
    fn parse_and(&mut self) -> Result<Formula, ParseError> {
        let mut a = self.parse_unary()?;
        while self.peek() == Some(&Token::Amp) {
            self.pos += 1;
            let b = self.parse_unary()?;
            a = conj(a, b);
        }
        Ok(a)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Tilde) => {
                self.pos += 1;
                Ok(Formula::neg(self.parse_unary()?))
            }
            Some(Token::Hash) => {
                self.pos += 1;
                Ok(Formula::mod1(self.parse_unary()?))
            }
            Some(Token::Hash2) => {
                if self.signature == Signature::Unimodal {
                    return Err(
                        self.error_here("modality index 2 is not available in the unimodal signature")
                    );
                }
                self.pos += 1;
                Ok(Formula::mod2(self.parse_unary()?))
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::Var(v)) => {
                self.pos += 1;
                Ok(Formula::var(v))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let f = self.parse_iff()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            Some(t) => Err(self.error_here(format!("expected a formula, found {}", t.describe()))),
            None => Err(self.error_here("expected a formula, found end of input")),
        }
    }
}

fn conj(a: Formula, b: Formula) -> Formula {
    Formula::neg(Formula::imp(a, Formula::neg(b)))
}

pub fn parse(input: &str, signature: Signature) -> Result<Formula, ParseError> {
    let tokens = lex(input)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end_byte: input.len(),
        signature,
    };
    let f = p.parse_iff()?;
    if let Some(t) = p.peek() {
        return Err(p.error_here(format!("unexpected trailing {}", t.describe())));
    }
    Ok(f)
}
