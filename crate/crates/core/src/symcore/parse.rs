//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := rational | 'i' | ident | deriv | '(' expr ')'
//! deriv  := ident ('[' vars ']')? ( '^(' int (',' int)? ')' | "'"+ )
//! ```

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::dpoly::DPoly;
use super::gauss::GaussRat;
use super::symbol::{Deps, Jet, Symbol, Var};
use crate::error::{Error, Result};

const FIXED_PARAMS: &[&str] = &[
    "sigma", "Lambda", "lambda", "cgamma", "sgamma", "z0", "omega1", "omega2", "a", "b",
];
const FIXED_FUNCS: &[&str] = &["V1", "V2", "F", "G", "U", "P1", "Phi", "Psi"];

/// Names known to the parser beyond the built-in vocabulary.
#[derive(Clone, Debug, Default)]
pub struct Names {
    pub params: BTreeSet<String>,
    pub funcs: BTreeMap<String, Deps>,
}

impl Names {
    pub fn with_params<I: IntoIterator<Item = S>, S: Into<String>>(it: I) -> Self {
        Names {
            params: it.into_iter().map(Into::into).collect(),
            funcs: BTreeMap::new(),
        }
    }

    fn is_param(&self, s: &str) -> bool {
        if self.params.contains(s) || FIXED_PARAMS.contains(&s) {
            return true;
        }
        let indexed = |prefix: &str, parts: usize| -> bool {
            let Some(rest) = s.strip_prefix(prefix) else {
                return false;
            };
            let fields: Vec<&str> = rest.split('_').collect();
            fields.len() <= parts
                && !fields.is_empty()
                && fields
                    .iter()
                    .all(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
        };
        (s.starts_with("A_") && indexed("A_", 3) && s.matches('_').count() == 3)
            || indexed("a", 1)
            || indexed("b", 1)
            || indexed("c", 1)
            || indexed("k", 3)
            || indexed("sx", 2)
            || indexed("sy", 2)
            || indexed("res", 1)
    }

    fn func_deps(&self, s: &str) -> Option<Deps> {
        if let Some(d) = self.funcs.get(s) {
            return Some(*d);
        }
        if FIXED_FUNCS.contains(&s) {
            return Some(Deps::default_for(s));
        }
        let rest = s.strip_prefix("f_")?;
        let fields: Vec<&str> = rest.split('_').collect();
        if fields.len() == 2
            && fields
                .iter()
                .all(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
        {
            Some(Deps::XY)
        } else {
            None
        }
    }

    fn vocabulary(&self) -> Vec<String> {
        let mut v: Vec<String> = ["x", "y", "z", "hbar", "i"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        v.extend(FIXED_PARAMS.iter().map(|s| s.to_string()));
        v.extend(FIXED_FUNCS.iter().map(|s| s.to_string()));
        v.extend(
            ["A_0_3_0", "a0", "b0", "c1", "f_0_2"]
                .iter()
                .map(|s| s.to_string()),
        );
        v.extend(self.params.iter().cloned());
        v.extend(self.funcs.keys().cloned());
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Prime,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (sl, sc) = (line, col);
        if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '\'' => Some(Tok::Prime),
            _ => None,
        };
        if let Some(t) = single {
            out.push(Spanned {
                tok: t,
                line: sl,
                col: sc,
            });
            i += 1;
            col += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let num: String = chars[start..i].iter().collect();
            let mut value = BigRational::from_integer(num.parse::<BigInt>().unwrap());
            // `p/q` directly followed by digits is a rational literal,
            // except as an exponent where `h^2/2` means `(h^2)/2`
            let after_caret = matches!(
                out.last(),
                Some(Spanned {
                    tok: Tok::Caret,
                    ..
                })
            );
            if !after_caret
                && i + 1 < chars.len()
                && chars[i] == '/'
                && chars[i + 1].is_ascii_digit()
            {
                let s2 = i + 1;
                let mut j = s2;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let den: BigInt = chars[s2..j].iter().collect::<String>().parse().unwrap();
                if den == BigInt::from(0) {
                    return Err(Error::Syntax {
                        line: sl,
                        col: sc,
                        msg: "zero denominator".into(),
                    });
                }
                value /= BigRational::from_integer(den);
                i = j;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Num(value),
                line: sl,
                col: sc,
            });
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: sl,
                col: sc,
            });
            continue;
        }
        return Err(Error::Syntax {
            line: sl,
            col: sc,
            msg: format!("unexpected character `{ch}`"),
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    names: &'a Names,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        let found = match &t.tok {
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        };
        Err(Error::Syntax {
            line: t.line,
            col: t.col,
            msg: format!("{}, found {found}", msg.into()),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<DPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc += self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    self.bump();
                    let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
                    let d = self.factor()?;
                    let inv = d.inverse_term().ok_or(Error::Syntax {
                        line,
                        col,
                        msg: "division only by numbers, parameters or hbar".into(),
                    })?;
                    acc = &acc * &inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn int(&mut self) -> Result<i32> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(r) if r.is_integer() => {
                self.bump();
                let v: i32 = r.to_integer().try_into().map_err(|_| Error::Syntax {
                    line: self.toks[self.pos].line,
                    col: self.toks[self.pos].col,
                    msg: "integer too large".into(),
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected integer"),
        }
    }

    fn factor(&mut self) -> Result<DPoly> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.factor()?);
        }
        let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let e = if *self.peek() == Tok::LParen {
                self.bump();
                let e = self.int()?;
                self.expect(Tok::RParen, "`)`")?;
                e
            } else {
                self.int()?
            };
            return base.powi(e).ok_or(Error::Syntax {
                line,
                col,
                msg: "negative power of a non-invertible factor".into(),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<DPoly> {
        let start = self.pos;
        let t = self.bump();
        match t.tok {
            Tok::Num(r) => Ok(DPoly::constant(GaussRat::real(r))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.ident(name, t.line, t.col),
            _ => {
                self.pos = start;
                self.err("expected a number, identifier or `(`")
            }
        }
    }

    fn ident(&mut self, name: String, line: usize, col: usize) -> Result<DPoly> {
        match name.as_str() {
            "x" => return Ok(DPoly::x()),
            "y" => return Ok(DPoly::y()),
            "z" => return Ok(DPoly::z()),
            "hbar" => return Ok(DPoly::hbar()),
            "i" => return Ok(DPoly::i()),
            _ => {}
        }
        if let Some(default) = self.names.func_deps(&name) {
            return self.deriv(&name, default);
        }
        if self.names.is_param(&name) {
            return Ok(DPoly::param(&name));
        }
        let mut cands: Vec<(f64, String)> = self
            .names
            .vocabulary()
            .into_iter()
            .map(|c| (strsim::normalized_damerau_levenshtein(&name, &c), c))
            .filter(|(s, _)| *s >= 0.5)
            .collect();
        cands.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        cands.dedup_by(|a, b| a.1 == b.1);
        Err(Error::UnknownIdent {
            name,
            line,
            col,
            suggestions: cands.into_iter().take(3).map(|c| c.1).collect(),
        })
    }

    fn deriv(&mut self, name: &str, default: Deps) -> Result<DPoly> {
        let mut deps = default;
        if *self.peek() == Tok::LBracket {
            self.bump();
            let mut vars = Vec::new();
            loop {
                match self.peek().clone() {
                    Tok::Ident(v) if v == "x" || v == "y" || v == "z" => {
                        self.bump();
                        vars.push(v)
                    }
                    _ => return self.err("expected x, y or z"),
                }
                match self.peek() {
                    Tok::Comma => {
                        self.bump();
                    }
                    _ => break,
                }
            }
            self.expect(Tok::RBracket, "`]`")?;
            deps = match vars
                .iter()
                .map(String::as_str)
                .collect::<Vec<_>>()
                .as_slice()
            {
                ["x"] => Deps::X,
                ["y"] => Deps::Y,
                ["z"] => Deps::Z,
                ["x", "y"] => Deps::XY,
                _ => return self.err("unsupported dependency list"),
            };
        }
        let mut orders = [0i32; 2];
        if *self.peek() == Tok::Prime {
            if deps.arity() != 1 {
                return self.err("primes need a single-variable function");
            }
            while *self.peek() == Tok::Prime {
                self.bump();
                orders[0] += 1;
            }
        } else if *self.peek() == Tok::Caret && *self.peek2() == Tok::LParen {
            self.bump();
            self.bump();
            orders[0] = self.int()?;
            if deps.arity() == 2 {
                self.expect(Tok::Comma, "`,` in a two-variable derivative")?;
                orders[1] = self.int()?;
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(DPoly::from_jet(Jet::new(name, deps, orders)))
    }
}

/// Parse with the built-in vocabulary.
pub fn parse_expr(text: &str) -> Result<DPoly> {
    parse_with(text, &Names::default())
}

pub fn parse_with(text: &str, names: &Names) -> Result<DPoly> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        names,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.err("expected an operator or end of input");
    }
    Ok(e)
}

/// `x`, `y` or `z`.
pub fn parse_var(s: &str) -> Option<Var> {
    match s {
        "x" => Some(Var::X),
        "y" => Some(Var::Y),
        "z" => Some(Var::Z),
        _ => None,
    }
}

/// Symbol for a bare name, as the parser would resolve it.
pub fn parse_symbol(s: &str, names: &Names) -> Result<Symbol> {
    let p = parse_with(s, names)?;
    match p.as_term() {
        Some((m, c))
            if num_traits::One::is_one(c) && m.factors().len() == 1 && m.factors()[0].1 == 1 =>
        {
            Ok(m.factors()[0].0.clone())
        }
        _ => Err(Error::Invalid(format!("`{s}` is not a single symbol"))),
    }
}
