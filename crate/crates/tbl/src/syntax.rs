//! Polynomial and class-expression syntax.
//!
//! Boundary polynomials are infix: `x1^2 - 2`, `3*x1*(x2 + 1)`, `2x1 - p`.
//! Class expressions are s-expressions whose polynomial arguments are atoms
//! (`x1`, `p`, `-3`, `1/2`) or prefix forms `(+ ..)`, `(- ..)`, `(* ..)`,
//! `(^ a k)`:
//!
//! ```text
//! (quat p x1)
//! (cyclic x1 (+ x1 1) 3)
//! (cup-unram x1 7 1)
//! (const 1 2)
//! (prod (quat p x1) (const 1 3))
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use tbl_core::{BrauerInvariant, ClassExpr, Poly};

/// Context for reading variables and `p`.
#[derive(Debug, Clone, Copy)]
pub struct Vars {
    pub dim: usize,
    pub p: u64,
}

impl Vars {
    fn atom(&self, word: &str) -> Result<Poly, String> {
        if word == "p" {
            return Ok(Poly::int(self.dim, self.p as i64));
        }
        if let Some(idx) = word.strip_prefix('x') {
            let i: usize = idx
                .parse()
                .map_err(|_| format!("unknown variable `{word}`"))?;
            if i == 0 || i > self.dim {
                return Err(format!("variable `{word}` outside x1..x{}", self.dim));
            }
            return Ok(Poly::var(self.dim, i - 1));
        }
        let c = parse_rational(word)?;
        Ok(Poly::constant(self.dim, c))
    }
}

/// `a`, `-a` or `a/b` with integer `a, b`.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("not a number: `{text}`"))?;
    let den: BigInt = den.parse().map_err(|_| format!("not a number: `{text}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{text}`"));
    }
    Ok(BigRational::new(num, den))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize_infix(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character `{c}`"));
        }
    }
    Ok(out)
}

struct Infix<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a Vars,
}

impl Infix<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Op('(')) | Some(Tok::Num(_))
        )
    }

    fn term(&mut self) -> Result<Poly, String> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = d
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or("division only by nonzero constants")?;
                acc = acc.scale(&c.recip());
            } else if self.starts_factor() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly, String> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly, String> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| "exponent too large")?;
                    Ok(base.pow(k))
                }
                _ => Err("exponent must be a nonnegative integer".into()),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly, String> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(self.vars.dim, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(w)) => {
                self.pos += 1;
                self.vars.atom(&w)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err("missing `)`".into());
                }
                Ok(e)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of polynomial".into()),
        }
    }
}

pub fn parse_infix_poly(text: &str, vars: &Vars) -> Result<Poly, String> {
    let toks = tokenize_infix(text)?;
    if toks.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut parser = Infix { toks, pos: 0, vars };
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(format!("trailing input after token {}", parser.pos));
    }
    Ok(poly)
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn parse_sexp(text: &str) -> Result<Sexp, String> {
    let spaced = text.replace('(', " ( ").replace(')', " ) ");
    let words: Vec<&str> = spaced.split_whitespace().collect();
    let mut pos = 0;
    let sexp = read_sexp(&words, &mut pos)?;
    if pos != words.len() {
        return Err("trailing input after class expression".into());
    }
    Ok(sexp)
}

fn read_sexp(words: &[&str], pos: &mut usize) -> Result<Sexp, String> {
    let w = *words
        .get(*pos)
        .ok_or("unexpected end of class expression")?;
    *pos += 1;
    match w {
        "(" => {
            let mut items = Vec::new();
            loop {
                match words.get(*pos) {
                    Some(&")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_sexp(words, pos)?),
                    None => return Err("missing `)`".into()),
                }
            }
        }
        ")" => Err("unexpected `)`".into()),
        _ => Ok(Sexp::Atom(w.to_string())),
    }
}

fn sexp_poly(s: &Sexp, vars: &Vars) -> Result<Poly, String> {
    match s {
        Sexp::Atom(w) => vars.atom(w),
        Sexp::List(items) => {
            let (head, args) = match items.split_first() {
                Some((Sexp::Atom(h), args)) => (h.as_str(), args),
                _ => return Err("polynomial form needs an operator".into()),
            };
            let polys = args
                .iter()
                .map(|a| sexp_poly(a, vars))
                .collect::<Result<Vec<_>, _>>();
            match head {
                "+" => Ok(polys?
                    .iter()
                    .fold(Poly::zero(vars.dim), |acc, f| acc.add(f))),
                "*" => Ok(polys?
                    .iter()
                    .fold(Poly::int(vars.dim, 1), |acc, f| acc.mul(f))),
                "-" => {
                    let polys = polys?;
                    match polys.split_first() {
                        None => Err("`-` needs an argument".into()),
                        Some((f, [])) => Ok(f.neg()),
                        Some((f, rest)) => Ok(rest.iter().fold(f.clone(), |acc, g| acc.sub(g))),
                    }
                }
                "^" => match args {
                    [base, Sexp::Atom(k)] => {
                        let k: u32 = k.parse().map_err(|_| format!("bad exponent `{k}`"))?;
                        Ok(sexp_poly(base, vars)?.pow(k))
                    }
                    _ => Err("`^` takes a base and a nonnegative integer".into()),
                },
                other => Err(format!("unknown polynomial operator `{other}`")),
            }
        }
    }
}

fn sexp_uint(s: &Sexp, what: &str) -> Result<u64, String> {
    match s {
        Sexp::Atom(w) => w
            .parse()
            .map_err(|_| format!("{what} must be a nonnegative integer, got `{w}`")),
        _ => Err(format!("{what} must be a nonnegative integer")),
    }
}

fn sexp_int(s: &Sexp, what: &str) -> Result<i64, String> {
    match s {
        Sexp::Atom(w) => w
            .parse()
            .map_err(|_| format!("{what} must be an integer, got `{w}`")),
        _ => Err(format!("{what} must be an integer")),
    }
}

fn sexp_class(s: &Sexp, vars: &Vars) -> Result<ClassExpr, String> {
    let items = match s {
        Sexp::List(items) => items,
        Sexp::Atom(w) => return Err(format!("expected a class form, got `{w}`")),
    };
    let (head, args) = match items.split_first() {
        Some((Sexp::Atom(h), args)) => (h.as_str(), args),
        _ => return Err("class form needs a head".into()),
    };
    let arity = |k: usize| -> Result<(), String> {
        if args.len() == k {
            Ok(())
        } else {
            Err(format!("`{head}` takes {k} arguments, got {}", args.len()))
        }
    };
    match head {
        "quat" => {
            arity(2)?;
            Ok(ClassExpr::Quaternion(
                sexp_poly(&args[0], vars)?,
                sexp_poly(&args[1], vars)?,
            ))
        }
        "cyclic" => {
            arity(3)?;
            Ok(ClassExpr::Cyclic(
                sexp_poly(&args[0], vars)?,
                sexp_poly(&args[1], vars)?,
                sexp_uint(&args[2], "order")?,
            ))
        }
        "cup-unram" => {
            arity(3)?;
            let n = sexp_uint(&args[1], "order")?;
            if n == 0 {
                return Err("order must be positive".into());
            }
            let k = sexp_int(&args[2], "multiplier")?;
            Ok(ClassExpr::CupUnram(
                sexp_poly(&args[0], vars)?,
                n,
                k.rem_euclid(n as i64) as u64,
            ))
        }
        "const" => {
            arity(2)?;
            let num = sexp_int(&args[0], "numerator")?;
            let den = sexp_uint(&args[1], "denominator")?;
            if den == 0 {
                return Err("denominator must be positive".into());
            }
            Ok(ClassExpr::ConstantInv(BrauerInvariant::new(num, den)))
        }
        "prod" => {
            if args.is_empty() {
                return Err("`prod` needs at least one class".into());
            }
            Ok(ClassExpr::Product(
                args.iter()
                    .map(|a| sexp_class(a, vars))
                    .collect::<Result<_, _>>()?,
            ))
        }
        other => Err(format!("unknown class form `{other}`")),
    }
}

pub fn parse_class(text: &str, vars: &Vars) -> Result<ClassExpr, String> {
    sexp_class(&parse_sexp(text)?, vars)
}

/// Comma-separated rationals.
pub fn parse_point(text: &str) -> Result<Vec<BigRational>, String> {
    text.split(',').map(parse_rational).collect()
}

/// Comma-separated positive integers.
pub fn parse_uint_list(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(|w| {
            w.trim()
                .parse::<u64>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| format!("expected a positive integer, got `{}`", w.trim()))
        })
        .collect()
}
