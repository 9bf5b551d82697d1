//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" impl)*              left-assoc
//! impl    := disj ("->" impl)?               right-assoc
//! disj    := conj ("or" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "not" unary | "forall" var "." formula | "exists" var "." formula
//!          | "(" formula ")" | "true" | "false" | atom
//! atom    := term ("=" | "<" | "divides") term | rel "(" term ("," term)* ")"
//! term    := factor ("mod" factor)*          left-assoc
//! factor  := var | natural | "(" term ")" | fun "(" term ("," term)* ")"
//! ```

use std::fmt;

use thiserror::Error;

use super::{Formula, Signature, Term, DIVIDES, LESS, MOD};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownSymbol(String),
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    LiteralNotAllowed(u64),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ParseErrorKind::Arity {
                symbol,
                expected,
                found,
            } => write!(f, "`{symbol}` expects {expected} arguments, got {found}"),
            ParseErrorKind::LiteralNotAllowed(n) => {
                write!(f, "literal {n} is not allowed in this signature")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(u64),
    LParen,
    RParen,
    Dot,
    Comma,
    Amp,
    Lt,
    Equals,
    Arrow,
    DoubleArrow,
    Forall,
    Exists,
    Not,
    Or,
    Mod,
    Divides,
    True,
    False,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) => return write!(f, "`{s}`"),
            Tok::Nat(n) => return write!(f, "`{n}`"),
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Dot => "`.`",
            Tok::Comma => "`,`",
            Tok::Amp => "`&`",
            Tok::Lt => "`<`",
            Tok::Equals => "`=`",
            Tok::Arrow => "`->`",
            Tok::DoubleArrow => "`<->`",
            Tok::Forall => "`forall`",
            Tok::Exists => "`exists`",
            Tok::Not => "`not`",
            Tok::Or => "`or`",
            Tok::Mod => "`mod`",
            Tok::Divides => "`divides`",
            Tok::True => "`true`",
            Tok::False => "`false`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |msg: String, line, column| ParseError {
        kind: ParseErrorKind::Syntax(msg),
        line,
        column,
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let (start_line, start_col) = (line, col);
        let starts = |s: &str| chars[i..].iter().take(s.len()).copied().eq(s.chars());
        let (tok, len) = if starts("<->") {
            (Tok::DoubleArrow, 3)
        } else if starts("->") {
            (Tok::Arrow, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '.' => (Tok::Dot, 1),
                ',' => (Tok::Comma, 1),
                '&' => (Tok::Amp, 1),
                '<' => (Tok::Lt, 1),
                '=' => (Tok::Equals, 1),
                c if c.is_ascii_digit() => {
                    let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                    let text: String = chars[i..i + len].iter().collect();
                    let n = text.parse::<u64>().map_err(|_| {
                        err(format!("literal {text} out of range"), start_line, start_col)
                    })?;
                    (Tok::Nat(n), len)
                }
                c if c.is_ascii_alphabetic() => {
                    let len = chars[i..]
                        .iter()
                        .take_while(|c| c.is_ascii_alphanumeric() || **c == '_' || **c == '\'')
                        .count();
                    let word: String = chars[i..i + len].iter().collect();
                    let tok = match word.as_str() {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        "not" => Tok::Not,
                        "or" => Tok::Or,
                        "mod" => Tok::Mod,
                        "divides" => Tok::Divides,
                        "true" => Tok::True,
                        "false" => Tok::False,
                        _ => Tok::Ident(word),
                    };
                    (tok, len)
                }
                other => {
                    return Err(err(
                        format!("unexpected character `{other}`"),
                        start_line,
                        start_col,
                    ))
                }
            }
        };
        out.push(Spanned {
            tok,
            line: start_line,
            column: start_col,
        });
        i += len;
        col += len;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

/// Parses `input` as a formula over `sig`.
pub fn parse(input: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0, sig };
    let f = p.formula()?;
    p.expect(Tok::Eof)?;
    Ok(f)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'a Signature,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            kind,
            line: s.line,
            column: s.column,
        }
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let s = &self.toks[pos];
        ParseError {
            kind,
            line: s.line,
            column: s.column,
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(ParseErrorKind::Syntax(format!(
            "expected {wanted}, found {}",
            self.peek()
        )))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DoubleArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> PResult<String> {
        let Tok::Ident(v) = self.peek().clone() else {
            return Err(self.unexpected("a variable"));
        };
        self.bump();
        self.expect(Tok::Dot)?;
        Ok(v)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall => {
                self.bump();
                let v = self.binder()?;
                Ok(Formula::forall(v, self.formula()?))
            }
            Tok::Exists => {
                self.bump();
                let v = self.binder()?;
                Ok(Formula::exists(v, self.formula()?))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                // `(` opens either a parenthesized formula or a parenthesized
                // term at the start of an atom; try the formula reading first.
                let start = self.pos;
                let as_formula = (|| {
                    self.bump();
                    let f = self.formula()?;
                    self.expect(Tok::RParen)?;
                    Ok(f)
                })();
                match as_formula {
                    Ok(f) if !starts_term_continuation(self.peek()) => Ok(f),
                    first => {
                        let formula_pos = self.pos;
                        self.pos = start;
                        match self.atom() {
                            Ok(a) => Ok(a),
                            Err(e) => match first {
                                Err(fe) if formula_pos >= self.pos => Err(fe),
                                _ => Err(e),
                            },
                        }
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        if let Tok::Ident(name) = self.peek().clone() {
            if *self.peek_at(1) == Tok::LParen {
                if let Some(arity) = self.sig.relation_arity(&name) {
                    let at = self.pos;
                    self.bump();
                    let args = self.arguments()?;
                    self.check_arity(at, &name, arity, args.len())?;
                    return Ok(Formula::Atom(name, args));
                }
            }
        }
        let lhs = self.term()?;
        let rel_pos = self.pos;
        match self.peek() {
            Tok::Equals => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::Lt => {
                self.bump();
                self.infix_relation(rel_pos, LESS)?;
                Ok(Formula::Atom(LESS.into(), vec![lhs, self.term()?]))
            }
            Tok::Divides => {
                self.bump();
                self.infix_relation(rel_pos, DIVIDES)?;
                Ok(Formula::Atom(DIVIDES.into(), vec![lhs, self.term()?]))
            }
            _ => Err(self.unexpected("`=`, `<` or `divides`")),
        }
    }

    fn infix_relation(&self, at: usize, name: &str) -> PResult<()> {
        match self.sig.relation_arity(name) {
            Some(2) => Ok(()),
            Some(n) => Err(self.error_at(
                at,
                ParseErrorKind::Arity {
                    symbol: name.into(),
                    expected: n,
                    found: 2,
                },
            )),
            None => Err(self.error_at(at, ParseErrorKind::UnknownSymbol(name.into()))),
        }
    }

    fn check_arity(&self, at: usize, name: &str, expected: usize, found: usize) -> PResult<()> {
        if expected == found {
            Ok(())
        } else {
            Err(self.error_at(
                at,
                ParseErrorKind::Arity {
                    symbol: name.into(),
                    expected,
                    found,
                },
            ))
        }
    }

    fn arguments(&mut self) -> PResult<Vec<Term>> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::Mod {
            let at = self.pos;
            self.bump();
            match self.sig.function_arity(MOD) {
                Some(2) => {}
                Some(n) => {
                    return Err(self.error_at(
                        at,
                        ParseErrorKind::Arity {
                            symbol: MOD.into(),
                            expected: n,
                            found: 2,
                        },
                    ))
                }
                None => return Err(self.error_at(at, ParseErrorKind::UnknownSymbol(MOD.into()))),
            }
            let rhs = self.factor()?;
            lhs = Term::modulo(lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let at = self.pos;
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Term::Var(name));
                }
                let Some(arity) = self.sig.function_arity(&name) else {
                    return Err(self.error_at(at, ParseErrorKind::UnknownSymbol(name)));
                };
                let args = self.arguments()?;
                self.check_arity(at, &name, arity, args.len())?;
                Ok(Term::App(name, args))
            }
            Tok::Nat(n) => {
                if !self.sig.allows_literals() {
                    return Err(self.error_here(ParseErrorKind::LiteralNotAllowed(n)));
                }
                self.bump();
                Ok(Term::Lit(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

fn starts_term_continuation(t: &Tok) -> bool {
    matches!(t, Tok::Mod | Tok::Equals | Tok::Lt | Tok::Divides)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m() -> Signature {
        Signature::modulo()
    }

    fn o() -> Signature {
        Signature::order_divisibility()
    }

    #[test]
    fn parses_lemma_zero_form() {
        let f = parse("exists y. y mod y = x", &m()).unwrap();
        assert_eq!(
            f,
            Formula::exists(
                "y",
                Formula::eq(Term::modulo("y".into(), "y".into()), "x")
            )
        );
    }

    #[test]
    fn parses_divides_atom() {
        assert_eq!(
            parse("x divides x", &o()).unwrap(),
            Formula::divides("x", "x")
        );
    }

    #[test]
    fn connective_on_term_is_syntax_error() {
        let e = parse("x < y & y", &o()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)), "{e}");
        assert_eq!((e.line, e.column), (1, 10));
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = o();
        let f = parse("x < y & y < z or z < x -> x = x -> y = y", &sig).unwrap();
        let expected = Formula::implies(
            Formula::or(
                Formula::and(Formula::less("x", "y"), Formula::less("y", "z")),
                Formula::less("z", "x"),
            ),
            Formula::implies(Formula::eq("x", "x"), Formula::eq("y", "y")),
        );
        assert_eq!(f, expected);
        let g = parse("x = x <-> y = y <-> z = z", &sig).unwrap();
        assert!(matches!(g, Formula::Iff(ref l, _) if matches!(**l, Formula::Iff(..))));
    }

    #[test]
    fn mod_is_left_associative_and_binds_tightest() {
        let f = parse("a mod b mod c = a", &m()).unwrap();
        let t = Term::modulo(Term::modulo("a".into(), "b".into()), "c".into());
        assert_eq!(f, Formula::eq(t, "a"));
        let g = parse("(a mod b) mod (a mod b) = a mod b", &m()).unwrap();
        let ab = Term::modulo("a".into(), "b".into());
        assert_eq!(g, Formula::eq(Term::modulo(ab.clone(), ab.clone()), ab));
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = parse("forall x. x < y & y < x", &o()).unwrap();
        assert!(matches!(f, Formula::Forall(_, ref b) if matches!(**b, Formula::And(..))));
    }

    #[test]
    fn parenthesized_formula_vs_term() {
        let sig = m();
        assert_eq!(
            parse("(x = y)", &sig).unwrap(),
            Formula::eq("x", "y")
        );
        assert_eq!(
            parse("(x) = y", &sig).unwrap(),
            Formula::eq("x", "y")
        );
        assert_eq!(
            parse("((x mod y)) = y", &sig).unwrap(),
            Formula::eq(Term::modulo("x".into(), "y".into()), "y")
        );
    }

    #[test]
    fn unknown_symbols_and_literals() {
        let e = parse("x < y", &m()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("<".into()));
        let e = parse("x mod y = y", &o()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("mod".into()));
        let e = parse("x = 0", &m()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::LiteralNotAllowed(0));
        assert_eq!(
            parse("x = 0", &m().with_literals()).unwrap(),
            Formula::eq("x", Term::Lit(0))
        );
        let e = parse("f(x) = x", &m()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("f".into()));
    }

    #[test]
    fn prefix_relations_and_arity() {
        let sig = Signature::natfull();
        assert_eq!(
            parse("succ(x, y)", &sig).unwrap(),
            Formula::atom("succ", vec!["x".into(), "y".into()])
        );
        let e = parse("succ(x)", &sig).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Arity { expected: 2, found: 1, .. }));
    }

    #[test]
    fn reports_line_and_column() {
        let e = parse("forall x.\n  x < ", &o()).unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        let e = parse("x # y", &o()).unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
    }

    #[test]
    fn keywords_cannot_be_bound() {
        assert!(parse("forall mod. x = x", &m()).is_err());
    }
}
