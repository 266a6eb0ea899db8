//! Expression parser and printer for the command-line surface.
//!
//! Grammar:
//!   expr   := term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := ['-'] (rational | symbol | '(' expr ')' | 'd(' expr ')'
//!             | '[' expr ',' expr ']' | 'cyc(' expr ')' | 'tr(' expr ')'
//!             | 'star(' expr ',' expr ')')
//! Juxtaposition is not multiplication; whitespace is insignificant.
//! Rationals are integers or integer/integer.  Symbols are resolved
//! against a declared environment; `d`, `cyc`, `tr` and `star` act as
//! operators only when directly followed by '(', so they remain legal
//! symbol names.

use crate::based::BasedAlgebra;
use crate::cyclic::{project_cyclic, NecklaceElement};
use crate::error::NcalcError;
use crate::forms::{de_rham_d, form_mul, NCForm};
use crate::scalar::{Rational, TPoly};
use crate::star::{moyal_star, phase_var_names, PhasePoly};
use crate::word::FreePoly;
use num::BigInt;
use num_traits::{One, Zero};
use std::rc::Rc;

/// Abstract syntax for command-line expressions.
#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Rat(Rational),
    /// Index into the environment symbol table.
    Sym(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Commutator [a, b].
    Comm(Box<Expr>, Box<Expr>),
    D(Box<Expr>),
    Cyc(Box<Expr>),
    Tr(Box<Expr>),
    Star(Box<Expr>, Box<Expr>),
}

/// Symbol declaration context for parsing and printing.
#[derive(Clone, Debug)]
pub struct ParseEnv {
    pub symbols: Vec<String>,
}

impl ParseEnv {
    pub fn new(symbols: Vec<String>) -> Self {
        ParseEnv { symbols }
    }

    /// x1..xg for a free algebra on g generators.
    pub fn free(generator_count: usize) -> Self {
        ParseEnv::new(crate::word::default_gen_names(generator_count))
    }

    /// Phase-space names x1, y1, .., plus the deformation parameter t.
    pub fn phase(pairs: usize) -> Self {
        let mut names = phase_var_names(pairs);
        names.push("t".into());
        ParseEnv::new(names)
    }

    fn lookup(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> NcalcError {
    NcalcError::ParseError {
        line,
        column,
        message: message.into(),
    }
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer {
            chars: input.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        match c {
            Some('\n') => {
                self.line += 1;
                self.column = 1;
            }
            Some(_) => self.column += 1,
            None => {}
        }
        c
    }

    /// Tokenizes the whole input, attaching (line, column) to each token.
    fn run(mut self) -> Result<Vec<(Tok, usize, usize)>, NcalcError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.column);
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                let n: BigInt = s
                    .parse()
                    .map_err(|_| err(line, col, format!("bad integer `{s}`")))?;
                out.push((Tok::Int(n), line, col));
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(&d) = self.chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '^' || d == '#' {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                out.push((Tok::Ident(s), line, col));
                continue;
            }
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                other => return Err(err(line, col, format!("unexpected character `{other}`"))),
            };
            self.bump();
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser<'e> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    env: &'e ParseEnv,
}

impl<'e> Parser<'e> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), NcalcError> {
        let (l, c) = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(err(l, c, format!("expected {what}, found {t:?}"))),
            None => Err(err(l, c, format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, NcalcError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, NcalcError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr, NcalcError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let inner = self.factor()?;
            return Ok(match inner {
                Expr::Rat(c) => Expr::Rat(-c),
                other => Expr::Mul(Box::new(Expr::Rat(-Rational::one())), Box::new(other)),
            });
        }
        let (l, c) = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => {
                // optional '/ denominator'
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let (dl, dc) = self.here();
                    match self.bump() {
                        Some(Tok::Int(d)) => {
                            if d.is_zero() {
                                return Err(err(dl, dc, "zero denominator"));
                            }
                            Ok(Expr::Rat(Rational::new(n, d)))
                        }
                        _ => Err(err(dl, dc, "expected denominator after `/`")),
                    }
                } else {
                    Ok(Expr::Rat(Rational::from(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                let is_call = self.peek() == Some(&Tok::LParen);
                match (name.as_str(), is_call) {
                    ("d", true) => {
                        self.bump();
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::D(Box::new(inner)))
                    }
                    ("cyc", true) => {
                        self.bump();
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Cyc(Box::new(inner)))
                    }
                    ("tr", true) => {
                        self.bump();
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Tr(Box::new(inner)))
                    }
                    ("star", true) => {
                        self.bump();
                        let a = self.expr()?;
                        self.expect(Tok::Comma, "`,`")?;
                        let b = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(Expr::Star(Box::new(a), Box::new(b)))
                    }
                    _ => match self.env.lookup(&name) {
                        Some(i) => Ok(Expr::Sym(i)),
                        None => Err(NcalcError::UnknownSymbol(name)),
                    },
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::LBracket) => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(Expr::Comm(Box::new(a), Box::new(b)))
            }
            Some(t) => Err(err(l, c, format!("unexpected token {t:?}"))),
            None => Err(err(l, c, "unexpected end of input")),
        }
    }
}

/// Parses an expression against the declared symbols.
pub fn parse(input: &str, env: &ParseEnv) -> Result<Expr, NcalcError> {
    let toks = Lexer::new(input).run()?;
    let mut p = Parser { toks, pos: 0, env };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        let (l, c) = p.here();
        return Err(err(l, c, "trailing input after expression"));
    }
    Ok(e)
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        _ => 3,
    }
}

fn print_at(e: &Expr, env: &ParseEnv, min: u8, out: &mut String) {
    let p = prec(e);
    let parens = p < min || matches!(e, Expr::Rat(c) if c < &Rational::zero() && min > 1);
    if parens {
        out.push('(');
    }
    match e {
        Expr::Rat(c) => out.push_str(&c.to_string()),
        Expr::Sym(i) => out.push_str(&env.symbols[*i]),
        Expr::Add(a, b) => {
            print_at(a, env, 1, out);
            out.push_str(" + ");
            print_at(b, env, 2, out);
        }
        Expr::Sub(a, b) => {
            print_at(a, env, 1, out);
            out.push_str(" - ");
            print_at(b, env, 2, out);
        }
        Expr::Mul(a, b) => {
            print_at(a, env, 2, out);
            out.push('*');
            print_at(b, env, 3, out);
        }
        Expr::Comm(a, b) => {
            out.push('[');
            print_at(a, env, 1, out);
            out.push_str(", ");
            print_at(b, env, 1, out);
            out.push(']');
        }
        Expr::D(a) => {
            out.push_str("d(");
            print_at(a, env, 1, out);
            out.push(')');
        }
        Expr::Cyc(a) => {
            out.push_str("cyc(");
            print_at(a, env, 1, out);
            out.push(')');
        }
        Expr::Tr(a) => {
            out.push_str("tr(");
            print_at(a, env, 1, out);
            out.push(')');
        }
        Expr::Star(a, b) => {
            out.push_str("star(");
            print_at(a, env, 1, out);
            out.push_str(", ");
            print_at(b, env, 1, out);
            out.push(')');
        }
    }
    if parens {
        out.push(')');
    }
}

/// Canonical printer; parse(print(e)) == e and print is idempotent on
/// its own output.
pub fn print(e: &Expr, env: &ParseEnv) -> String {
    let mut s = String::new();
    print_at(e, env, 1, &mut s);
    s
}

/// Evaluates an expression as a free noncommutative polynomial; the
/// environment symbols are the generators in order.  d, cyc, tr and
/// star are rejected.
pub fn eval_free(e: &Expr, env: &ParseEnv) -> Result<FreePoly, NcalcError> {
    let g = env.symbols.len();
    Ok(match e {
        Expr::Rat(c) => FreePoly::scalar(c.clone(), g),
        Expr::Sym(i) => {
            if *i >= g {
                return Err(NcalcError::IndexOutOfRange { index: *i, bound: g });
            }
            FreePoly::gen(*i, g)
        }
        Expr::Add(a, b) => eval_free(a, env)?.add(&eval_free(b, env)?)?,
        Expr::Sub(a, b) => eval_free(a, env)?.sub(&eval_free(b, env)?)?,
        Expr::Mul(a, b) => eval_free(a, env)?.mul(&eval_free(b, env)?)?,
        Expr::Comm(a, b) => eval_free(a, env)?.commutator(&eval_free(b, env)?)?,
        Expr::D(..) | Expr::Cyc(..) | Expr::Tr(..) | Expr::Star(..) => {
            return Err(NcalcError::InvalidInput(
                "d/cyc/tr/star do not evaluate to an algebra element".into(),
            ))
        }
    })
}

/// Evaluates an expression as a noncommutative form over the given
/// based algebra; d() is the de Rham differential.  The environment
/// must name the algebra's generators (free case) or non-unit basis
/// (finite-dimensional case), in order.
pub fn eval_form(
    e: &Expr,
    env: &ParseEnv,
    algebra: &Rc<BasedAlgebra>,
) -> Result<NCForm, NcalcError> {
    Ok(match e {
        Expr::Rat(c) => NCForm::one(algebra.clone()).scale(c),
        Expr::Sym(i) => {
            let atom = match &**algebra {
                BasedAlgebra::Free { generator_count } => {
                    if *i >= *generator_count {
                        return Err(NcalcError::IndexOutOfRange {
                            index: *i,
                            bound: *generator_count,
                        });
                    }
                    crate::based::Atom::W(crate::word::Word::gen(*i))
                }
                BasedAlgebra::FinDim(s) => {
                    if *i + 1 >= s.dim {
                        return Err(NcalcError::IndexOutOfRange {
                            index: *i,
                            bound: s.dim - 1,
                        });
                    }
                    crate::based::Atom::E(*i + 1)
                }
            };
            let mut f = NCForm::zero(algebra.clone(), 0);
            f.add_term(vec![atom], Rational::one());
            f
        }
        Expr::Add(a, b) => eval_form(a, env, algebra)?.add(&eval_form(b, env, algebra)?)?,
        Expr::Sub(a, b) => eval_form(a, env, algebra)?.sub(&eval_form(b, env, algebra)?)?,
        Expr::Mul(a, b) => form_mul(&eval_form(a, env, algebra)?, &eval_form(b, env, algebra)?)?,
        Expr::Comm(a, b) => {
            let fa = eval_form(a, env, algebra)?;
            let fb = eval_form(b, env, algebra)?;
            form_mul(&fa, &fb)?.sub(&form_mul(&fb, &fa)?)?
        }
        Expr::D(a) => de_rham_d(&eval_form(a, env, algebra)?),
        Expr::Cyc(..) | Expr::Tr(..) | Expr::Star(..) => {
            return Err(NcalcError::InvalidInput(
                "cyc/tr/star do not evaluate to a form".into(),
            ))
        }
    })
}

/// Evaluates an expression as a necklace element: a linear combination
/// of cyc(word) wrappers, with scalar coefficients.
pub fn eval_necklace(e: &Expr, env: &ParseEnv) -> Result<NecklaceElement, NcalcError> {
    let g = env.symbols.len();
    Ok(match e {
        Expr::Cyc(inner) => project_cyclic(&eval_free(inner, env)?),
        Expr::Add(a, b) => eval_necklace(a, env)?.add(&eval_necklace(b, env)?)?,
        Expr::Sub(a, b) => eval_necklace(a, env)?.sub(&eval_necklace(b, env)?)?,
        Expr::Mul(a, b) => match (&**a, &**b) {
            (Expr::Rat(c), _) => eval_necklace(b, env)?.scale(c),
            (_, Expr::Rat(c)) => eval_necklace(a, env)?.scale(c),
            _ => {
                return Err(NcalcError::InvalidInput(
                    "necklace elements only multiply by scalars".into(),
                ))
            }
        },
        Expr::Rat(c) if c.is_zero() => NecklaceElement::zero(g),
        _ => {
            return Err(NcalcError::InvalidInput(
                "expected a combination of cyc(..) terms".into(),
            ))
        }
    })
}

/// Evaluates an expression as a phase-space polynomial over Q[t];
/// star(,) is the Moyal product, plain * the commutative product.
/// The environment must be ParseEnv::phase(pairs).
pub fn eval_phase(e: &Expr, env: &ParseEnv, pairs: usize) -> Result<PhasePoly, NcalcError> {
    let nvars = 2 * pairs;
    Ok(match e {
        Expr::Rat(c) => {
            PhasePoly::one(nvars).scale(&TPoly::constant(c.clone()))
        }
        Expr::Sym(i) => {
            if *i == nvars {
                PhasePoly::one(nvars).scale(&TPoly::t())
            } else if *i < nvars {
                PhasePoly::var(*i, nvars)
            } else {
                return Err(NcalcError::IndexOutOfRange {
                    index: *i,
                    bound: nvars + 1,
                });
            }
        }
        Expr::Add(a, b) => eval_phase(a, env, pairs)?.add(&eval_phase(b, env, pairs)?)?,
        Expr::Sub(a, b) => eval_phase(a, env, pairs)?.sub(&eval_phase(b, env, pairs)?)?,
        Expr::Mul(a, b) => eval_phase(a, env, pairs)?.mul(&eval_phase(b, env, pairs)?)?,
        Expr::Star(a, b) => moyal_star(&eval_phase(a, env, pairs)?, &eval_phase(b, env, pairs)?)?,
        Expr::Comm(a, b) => {
            let fa = eval_phase(a, env, pairs)?;
            let fb = eval_phase(b, env, pairs)?;
            moyal_star(&fa, &fb)?.sub(&moyal_star(&fb, &fa)?)?
        }
        Expr::D(..) | Expr::Cyc(..) | Expr::Tr(..) => {
            return Err(NcalcError::InvalidInput(
                "d/cyc/tr do not evaluate to a phase-space polynomial".into(),
            ))
        }
    })
}
