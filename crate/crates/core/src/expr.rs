//! Terms of the vector lattice generated by the evaluation functionals.
//!
//! `Gen(x)` is the evaluation `x* ↦ x*(x)`; the remaining nodes are the
//! pointwise vector-lattice operations. Every term evaluates to a positively
//! homogeneous piecewise-linear function on E*. The textual DSL
//! (`sup(abs(gen(1,0)),gen(0,1))`, rationals as `p/q`) and a JSON mirror of
//! the AST are provided for batch files.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::Error;
use crate::rat::{dot, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeExpr {
    Gen(Vec<Rat>),
    Add(Box<LatticeExpr>, Box<LatticeExpr>),
    Scale(Rat, Box<LatticeExpr>),
    Sup(Box<LatticeExpr>, Box<LatticeExpr>),
    Inf(Box<LatticeExpr>, Box<LatticeExpr>),
    Abs(Box<LatticeExpr>),
    Neg(Box<LatticeExpr>),
}

#[allow(clippy::should_implement_trait)] // builder names mirror the DSL
impl LatticeExpr {
    pub fn gen(coords: Vec<Rat>) -> Self {
        LatticeExpr::Gen(coords)
    }

    pub fn add(l: LatticeExpr, r: LatticeExpr) -> Self {
        LatticeExpr::Add(Box::new(l), Box::new(r))
    }

    pub fn scale(factor: Rat, e: LatticeExpr) -> Self {
        LatticeExpr::Scale(factor, Box::new(e))
    }

    pub fn sup(l: LatticeExpr, r: LatticeExpr) -> Self {
        LatticeExpr::Sup(Box::new(l), Box::new(r))
    }

    pub fn inf(l: LatticeExpr, r: LatticeExpr) -> Self {
        LatticeExpr::Inf(Box::new(l), Box::new(r))
    }

    pub fn abs(e: LatticeExpr) -> Self {
        LatticeExpr::Abs(Box::new(e))
    }

    pub fn neg(e: LatticeExpr) -> Self {
        LatticeExpr::Neg(Box::new(e))
    }

    /// The zero function in the given dimension.
    pub fn zero(dim: usize) -> Self {
        LatticeExpr::Gen(vec![Rat::zero(); dim])
    }

    /// Common length of all generator vectors; errors on any mismatch.
    pub fn dim(&self) -> Result<usize, Error> {
        fn walk(e: &LatticeExpr, found: &mut Option<usize>) -> Result<(), Error> {
            match e {
                LatticeExpr::Gen(v) => match *found {
                    None => {
                        *found = Some(v.len());
                        Ok(())
                    }
                    Some(d) if d == v.len() => Ok(()),
                    Some(d) => Err(Error::dim(d, v.len())),
                },
                LatticeExpr::Add(l, r)
                | LatticeExpr::Sup(l, r)
                | LatticeExpr::Inf(l, r) => {
                    walk(l, found)?;
                    walk(r, found)
                }
                LatticeExpr::Scale(_, c) | LatticeExpr::Abs(c) | LatticeExpr::Neg(c) => {
                    walk(c, found)
                }
            }
        }
        let mut found = None;
        walk(self, &mut found)?;
        found.ok_or_else(|| Error::Internal("expression has no generator".into()))
    }

    /// Exact pointwise evaluation at a functional.
    pub fn eval(&self, xstar: &[Rat]) -> Result<Rat, Error> {
        let dim = self.dim()?;
        if xstar.len() != dim {
            return Err(Error::dim(dim, xstar.len()));
        }
        Ok(self.eval_unchecked(xstar))
    }

    pub(crate) fn eval_unchecked(&self, xstar: &[Rat]) -> Rat {
        match self {
            LatticeExpr::Gen(v) => dot(v, xstar),
            LatticeExpr::Add(l, r) => l.eval_unchecked(xstar) + r.eval_unchecked(xstar),
            LatticeExpr::Scale(c, e) => c * &e.eval_unchecked(xstar),
            LatticeExpr::Sup(l, r) => {
                l.eval_unchecked(xstar).max(r.eval_unchecked(xstar))
            }
            LatticeExpr::Inf(l, r) => {
                l.eval_unchecked(xstar).min(r.eval_unchecked(xstar))
            }
            LatticeExpr::Abs(e) => e.eval_unchecked(xstar).abs(),
            LatticeExpr::Neg(e) => -e.eval_unchecked(xstar),
        }
    }

    /// Number of AST nodes.
    pub fn node_count(&self) -> usize {
        match self {
            LatticeExpr::Gen(_) => 1,
            LatticeExpr::Add(l, r) | LatticeExpr::Sup(l, r) | LatticeExpr::Inf(l, r) => {
                1 + l.node_count() + r.node_count()
            }
            LatticeExpr::Scale(_, c) | LatticeExpr::Abs(c) | LatticeExpr::Neg(c) => {
                1 + c.node_count()
            }
        }
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeExpr::Gen(v) => {
                write!(f, "gen(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            LatticeExpr::Add(l, r) => write!(f, "add({l},{r})"),
            LatticeExpr::Scale(c, e) => write!(f, "scale({c},{e})"),
            LatticeExpr::Sup(l, r) => write!(f, "sup({l},{r})"),
            LatticeExpr::Inf(l, r) => write!(f, "inf({l},{r})"),
            LatticeExpr::Abs(e) => write!(f, "abs({e})"),
            LatticeExpr::Neg(e) => write!(f, "neg({e})"),
        }
    }
}

/// Parses the expression DSL. Whitespace-insensitive; `add`, `sup` and `inf`
/// accept two or more arguments and fold left.
pub fn parse(input: &str) -> Result<LatticeExpr, Error> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!(
            "trailing input at byte {}: {:?}",
            p.pos,
            &input[p.pos..]
        )));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), Error> {
        self.skip_ws();
        if self.pos < self.src.len() && self.src[self.pos] == byte {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {:?} at byte {}",
                byte as char, self.pos
            )))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse(format!(
                "expected a function name at byte {start}"
            )));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn rational(&mut self) -> Result<Rat, Error> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'/')
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| Error::Parse("invalid utf8".into()))?;
        text.trim().parse()
    }

    fn expr(&mut self) -> Result<LatticeExpr, Error> {
        let name = self.ident()?;
        self.expect(b'(')?;
        let expr = match name.as_str() {
            "gen" => {
                let mut coords = vec![self.rational()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    coords.push(self.rational()?);
                }
                LatticeExpr::Gen(coords)
            }
            "add" | "sup" | "inf" => {
                let mut args = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                if args.len() < 2 {
                    return Err(Error::Parse(format!("{name} needs at least 2 arguments")));
                }
                let mut it = args.into_iter();
                let first = it.next().unwrap();
                it.fold(first, |acc, e| match name.as_str() {
                    "add" => LatticeExpr::add(acc, e),
                    "sup" => LatticeExpr::sup(acc, e),
                    _ => LatticeExpr::inf(acc, e),
                })
            }
            "scale" => {
                let c = self.rational()?;
                self.expect(b',')?;
                let e = self.expr()?;
                LatticeExpr::scale(c, e)
            }
            "abs" => LatticeExpr::abs(self.expr()?),
            "neg" => LatticeExpr::neg(self.expr()?),
            other => return Err(Error::Parse(format!("unknown function {other:?}"))),
        };
        self.expect(b')')?;
        Ok(expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn eval_generator() {
        let f = parse("gen(1,0)").unwrap();
        assert_eq!(f.eval(&[r(3, 1), r(5, 1)]).unwrap(), r(3, 1));
    }

    #[test]
    fn eval_sup_is_pointwise_max() {
        let f = parse("sup(gen(1,0),gen(0,1))").unwrap();
        assert_eq!(f.eval(&[r(2, 1), r(7, 1)]).unwrap(), r(7, 1));
    }

    #[test]
    fn eval_abs() {
        let f = parse("abs(gen(1))").unwrap();
        assert_eq!(f.eval(&[r(-4, 1)]).unwrap(), r(4, 1));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let f = parse("add(gen(1,0),gen(1))");
        assert!(f.is_ok());
        assert!(f.unwrap().eval(&[r(1, 1), r(1, 1)]).is_err());
        let f = parse("gen(1,0)").unwrap();
        assert!(f.eval(&[r(1, 1)]).is_err());
    }

    #[test]
    fn nary_sugar_folds_left() {
        let f = parse("sup(gen(1),gen(2),gen(3))").unwrap();
        let g = parse("sup(sup(gen(1),gen(2)),gen(3))").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn parser_rejects_garbage() {
        assert!(parse("sup(gen(1))").is_err());
        assert!(parse("gen(1,0) trailing").is_err());
        assert!(parse("frob(gen(1))").is_err());
        assert!(parse("scale(1/0,gen(1))").is_err());
    }

    #[test]
    fn display_roundtrips() {
        let cases = [
            "abs(gen(1,0))",
            "sup(gen(1,0),scale(-3/2,gen(0,1)))",
            "inf(add(gen(1),neg(gen(1))),abs(gen(2/3)))",
        ];
        for s in cases {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse(" sup ( gen( 1 , 0 ) , gen(0,1) ) ").unwrap();
        let b = parse("sup(gen(1,0),gen(0,1))").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn json_mirror_roundtrips() {
        let e = parse("sup(abs(gen(1,0)),scale(3/2,gen(0,1)))").unwrap();
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.contains("\"sup\""));
        assert!(json.contains("\"3/2\""));
        let back: LatticeExpr = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn positive_homogeneity_at_samples() {
        let exprs = [
            parse("sup(gen(1,2),abs(gen(-1,1)))").unwrap(),
            parse("inf(add(gen(1,0),gen(0,1)),scale(2,abs(gen(1,-1))))").unwrap(),
        ];
        let points = [
            vec![r(1, 2), r(-3, 4)],
            vec![r(-2, 1), r(5, 3)],
            vec![Rat::zero(), r(1, 7)],
        ];
        for f in &exprs {
            for x in &points {
                for scale in [r(1, 2), r(2, 1), r(7, 3)] {
                    let scaled: Vec<Rat> = x.iter().map(|c| c * &scale).collect();
                    assert_eq!(
                        f.eval(&scaled).unwrap(),
                        scale * f.eval(x).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn lattice_identities_pointwise() {
        let f = parse("sup(gen(1,0),abs(gen(0,1)))").unwrap();
        let g = parse("add(gen(1,1),neg(abs(gen(1,-1))))").unwrap();
        let points = [vec![r(1, 3), r(-2, 5)], vec![r(-1, 1), r(4, 1)]];
        for x in &points {
            let sup = LatticeExpr::sup(f.clone(), g.clone()).eval(x).unwrap();
            let inf = LatticeExpr::inf(f.clone(), g.clone()).eval(x).unwrap();
            assert_eq!(sup + inf, f.eval(x).unwrap() + g.eval(x).unwrap());
            let abs_abs = LatticeExpr::abs(LatticeExpr::abs(f.clone()))
                .eval(x)
                .unwrap();
            assert_eq!(abs_abs, LatticeExpr::abs(f.clone()).eval(x).unwrap());
        }
    }
}
