//! Parsers for the text formats of terms, functions, sets and partitions.
//! Each is the inverse of the corresponding `Display`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::func::{Body, FnRep, Tail};
use crate::rank::{SetBody, SetFn, SetRep};
use crate::space::Space;
use crate::value::{Approach, Codomain, Sign, Value};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Parse { line, column, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{tok}`")))
        }
    }

    /// A run of characters allowed in numbers and words.
    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let r = self.rest();
        let n = r.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '/')).unwrap_or(r.len());
        self.pos += n;
        &r[..n]
    }

    fn number<T: FromStr>(&mut self) -> Result<T> {
        let start = self.pos;
        let w = self.word();
        w.parse().map_err(|_| {
            self.pos = start;
            self.skip_ws();
            self.error(format!("expected a number, found `{w}`"))
        })
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    /// Runs `item` over a `sep`-separated list ending at `close`.
    fn list(&mut self, close: &str, mut item: impl FnMut(&mut Self) -> Result<()>) -> Result<()> {
        if self.eat(close) {
            return Ok(());
        }
        loop {
            item(self)?;
            if self.eat(close) {
                return Ok(());
            }
            self.expect(",")?;
        }
    }
}

fn space(c: &mut Cursor) -> Result<Space> {
    c.skip_ws();
    let start = c.pos;
    let t = if c.eat("pairs+") {
        Space::PairsPlus
    } else {
        match c.word() {
            "pt" => Space::Pt,
            "omega" => Space::Omega,
            "fin" => {
                c.expect("(")?;
                let n = c.number()?;
                c.expect(")")?;
                Space::Fin(n)
            }
            "lim" => {
                c.expect("(")?;
                let t = space(c)?;
                c.expect(")")?;
                Space::lim(t)
            }
            "sum" => {
                c.expect("(")?;
                let mut ts = Vec::new();
                c.list(")", |c| {
                    ts.push(space(c)?);
                    Ok(())
                })?;
                Space::Sum(ts)
            }
            w => {
                c.pos = start;
                return Err(c.error(format!("unknown term `{w}`")));
            }
        }
    };
    t.validate().map_err(|e| {
        c.pos = start;
        c.error(e.to_string())
    })?;
    Ok(t)
}

fn codomain(c: &mut Cursor) -> Result<Codomain> {
    if c.eat("omega+1") {
        return Ok(Codomain::OmegaPlusOne);
    }
    c.skip_ws();
    let start = c.pos;
    match c.word() {
        "Q" => Ok(Codomain::Rationals),
        "nat" => Ok(Codomain::Nat),
        "fin" => {
            c.expect("(")?;
            let k = c.number()?;
            c.expect(")")?;
            Ok(Codomain::Fin(k))
        }
        w => {
            c.pos = start;
            Err(c.error(format!("unknown codomain `{w}`")))
        }
    }
}

fn rational(c: &mut Cursor) -> Result<BigRational> {
    c.skip_ws();
    let start = c.pos;
    let w = c.word();
    let parsed = match w.split_once('/') {
        Some((p, q)) => match (p.parse::<BigInt>(), q.parse::<BigInt>()) {
            (Ok(p), Ok(q)) if q != BigInt::from(0) => Some(BigRational::new(p, q)),
            _ => None,
        },
        None => w.parse::<BigInt>().ok().map(BigRational::from_integer),
    };
    parsed.ok_or_else(|| {
        c.pos = start;
        c.error(format!("expected a rational, found `{w}`"))
    })
}

fn value(c: &mut Cursor, cod: Codomain) -> Result<Value> {
    c.skip_ws();
    let start = c.pos;
    let v = if cod == Codomain::Rationals {
        Value::Rat(rational(c)?)
    } else if c.eat("w") && !c.rest().starts_with(|ch: char| ch.is_ascii_alphanumeric()) {
        Value::Omega
    } else {
        Value::Nat(c.number()?)
    };
    cod.check(&v).map_err(|e| {
        c.pos = start;
        c.error(e.to_string())
    })?;
    Ok(v)
}

fn tail(c: &mut Cursor, cod: Codomain) -> Result<Tail> {
    if c.eat("const") {
        c.expect("(")?;
        let v = value(c, cod)?;
        c.expect(")")?;
        return Ok(Tail::Const(v));
    }
    c.expect("approach")?;
    c.expect("(")?;
    c.expect("base")?;
    c.expect("=")?;
    let base = c.number()?;
    let a = if c.eat(",") {
        c.expect("sign")?;
        c.expect("=")?;
        let sign = if c.eat("+") {
            Sign::Plus
        } else if c.eat("-") {
            Sign::Minus
        } else {
            return Err(c.error("expected `+` or `-`"));
        };
        c.expect(",")?;
        c.expect("center")?;
        c.expect("=")?;
        Approach::Dyadic { center: rational(c)?, sign, base }
    } else {
        Approach::Up { base }
    };
    c.expect(")")?;
    Ok(Tail::Approach(a))
}

/// `exc: {k: item, ...},` if present.
fn exceptions<T>(c: &mut Cursor, mut item: impl FnMut(&mut Cursor) -> Result<T>) -> Result<BTreeMap<u64, T>> {
    let mut out = BTreeMap::new();
    if c.eat("exc") {
        c.expect(":")?;
        c.expect("{")?;
        c.list("}", |c| {
            let k: u64 = c.number()?;
            c.expect(":")?;
            let v = item(c)?;
            if out.insert(k, v).is_some() {
                return Err(c.error(format!("exception {k} given twice")));
            }
            Ok(())
        })?;
        c.expect(",")?;
    }
    Ok(out)
}

fn summands<T>(c: &mut Cursor, ts: &[Space], mut item: impl FnMut(&mut Cursor, &Space) -> Result<T>) -> Result<Vec<T>> {
    c.expect("{")?;
    let mut out = Vec::new();
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            c.expect(",")?;
        }
        c.expect(&format!("[{i}]"))?;
        c.expect(":")?;
        out.push(item(c, t)?);
    }
    c.expect("}")?;
    Ok(out)
}

fn body(c: &mut Cursor, t: &Space, cod: Codomain) -> Result<Body> {
    match t {
        Space::Pt => Ok(Body::Pt(value(c, cod)?)),
        Space::Fin(_) => {
            c.expect("[")?;
            let mut vs = Vec::new();
            c.list("]", |c| {
                vs.push(value(c, cod)?);
                Ok(())
            })?;
            Ok(Body::Fin(vs))
        }
        Space::Omega => {
            c.expect("{")?;
            let exc = exceptions(c, |c| value(c, cod))?;
            c.expect("tail")?;
            c.expect(":")?;
            let tail = tail(c, cod)?;
            c.expect("}")?;
            Ok(Body::Omega { exc, tail })
        }
        Space::Lim(u) => {
            c.expect("{")?;
            c.expect("inf")?;
            c.expect(":")?;
            let inf = value(c, cod)?;
            c.expect(",")?;
            let exc = exceptions(c, |c| body(c, u, cod))?;
            c.expect("tail")?;
            c.expect(":")?;
            let tail = tail(c, cod)?;
            c.expect("}")?;
            Ok(Body::Lim { inf, exc, tail })
        }
        Space::Sum(ts) => Ok(Body::Sum(summands(c, ts, |c, t| body(c, t, cod))?)),
        Space::PairsPlus | Space::Empty => Err(c.error(format!("no function bodies over {t}"))),
    }
}

fn boolean(c: &mut Cursor) -> Result<bool> {
    if c.eat("true") {
        Ok(true)
    } else if c.eat("false") {
        Ok(false)
    } else {
        Err(c.error("expected `true` or `false`"))
    }
}

fn set_body(c: &mut Cursor, t: &Space) -> Result<SetBody> {
    match t {
        Space::Pt => Ok(SetBody::Pt(boolean(c)?)),
        Space::Fin(_) => {
            c.expect("[")?;
            let mut bs = Vec::new();
            c.list("]", |c| {
                bs.push(boolean(c)?);
                Ok(())
            })?;
            Ok(SetBody::Fin(bs))
        }
        Space::Lim(u) => {
            c.expect("{")?;
            c.expect("inf")?;
            c.expect(":")?;
            let inf = boolean(c)?;
            c.expect(",")?;
            let exc = exceptions(c, |c| set_body(c, u))?;
            c.expect("tail")?;
            c.expect(":")?;
            let tail = if c.eat("parity") {
                c.expect("(")?;
                let even = if c.eat("even") {
                    true
                } else if c.eat("odd") {
                    false
                } else {
                    return Err(c.error("expected `even` or `odd`"));
                };
                c.expect(")")?;
                let all = SetRep::full(u)?.body;
                let none = SetRep::empty(u)?.body;
                if even {
                    vec![all, none]
                } else {
                    vec![none, all]
                }
            } else if c.eat("cycle") {
                c.expect("(")?;
                let mut ts = Vec::new();
                c.list(")", |c| {
                    ts.push(set_body(c, u)?);
                    Ok(())
                })?;
                if ts.is_empty() {
                    return Err(c.error("cycle needs at least one set"));
                }
                ts
            } else {
                vec![set_body(c, u)?]
            };
            c.expect("}")?;
            Ok(SetBody::Lim { inf, exc, tail })
        }
        Space::Sum(ts) => Ok(SetBody::Sum(summands(c, ts, set_body)?)),
        _ => Err(c.error(format!("sets are described over compact terms only, not {t}"))),
    }
}

fn located<T>(c: &Cursor, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        e => c.error(e.to_string()),
    })
}

pub fn parse_space(src: &str) -> Result<Space> {
    let mut c = Cursor::new(src);
    let t = space(&mut c)?;
    c.finish()?;
    Ok(t)
}

pub fn parse_codomain(src: &str) -> Result<Codomain> {
    let mut c = Cursor::new(src);
    let k = codomain(&mut c)?;
    c.finish()?;
    Ok(k)
}

pub fn parse_value(src: &str, cod: Codomain) -> Result<Value> {
    let mut c = Cursor::new(src);
    let v = value(&mut c, cod)?;
    c.finish()?;
    Ok(v)
}

/// `fn over T -> C BODY`.
pub fn parse_fn(src: &str) -> Result<FnRep> {
    let mut c = Cursor::new(src);
    c.expect("fn")?;
    c.expect("over")?;
    let t = space(&mut c)?;
    c.expect("->")?;
    let cod = codomain(&mut c)?;
    let b = body(&mut c, &t, cod)?;
    c.finish()?;
    located(&c, FnRep::new(t, cod, b))
}

/// `set over T BODY`.
pub fn parse_set(src: &str) -> Result<SetRep> {
    let mut c = Cursor::new(src);
    c.expect("set")?;
    c.expect("over")?;
    let t = space(&mut c)?;
    let b = set_body(&mut c, &t)?;
    c.finish()?;
    located(&c, SetRep::new(t, b))
}

/// `partition over T -> C { v: BODY, ... }`.
pub fn parse_partition(src: &str) -> Result<SetFn> {
    let mut c = Cursor::new(src);
    c.expect("partition")?;
    c.expect("over")?;
    let t = space(&mut c)?;
    c.expect("->")?;
    let cod = codomain(&mut c)?;
    c.expect("{")?;
    let mut pieces = Vec::new();
    c.list("}", |c| {
        let v = value(c, cod)?;
        c.expect(":")?;
        let b = set_body(c, &t)?;
        pieces.push((v, located(c, SetRep::new(t.clone(), b))?));
        Ok(())
    })?;
    c.finish()?;
    located(&c, SetFn::new(t, cod, pieces))
}

/// A finite-image function given either as `fn ...` or `partition ...`.
pub fn parse_set_fn(src: &str) -> Result<SetFn> {
    if src.trim_start().starts_with("partition") {
        parse_partition(src)
    } else {
        SetFn::from_fn(&parse_fn(src)?)
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Space> {
        parse_space(s)
    }
}

impl FromStr for FnRep {
    type Err = Error;

    fn from_str(s: &str) -> Result<FnRep> {
        parse_fn(s)
    }
}

impl FromStr for SetRep {
    type Err = Error;

    fn from_str(s: &str) -> Result<SetRep> {
        parse_set(s)
    }
}
