//! Text form of sequences.
//!
//! ```text
//! seq    := branch | masked | patch | start
//! branch := 'const' rat | 'ratfun(' rats ';' rats ')'
//! masked := 'masked(' int ';' branch ('|' branch)* ')'
//! patch  := 'patch(' seq ';' (int '=' rat (',' int '=' rat)*)? ')'
//! start  := 'start(' seq ';' int ')'
//! rats   := rat (',' rat)*          coefficients, lowest degree first
//! rat    := '-'? digits ('/' digits)?
//! ```
//!
//! Printing emits the canonical form, so `parse_seq(&s.to_string()) == s`.

use std::fmt;

use crate::error::{Error, Result, SyntaxError};
use crate::ratfun::RationalFunc;
use crate::scalar::{parse_scalar, Scalar};

use super::EventualSeq;

/// The literal grammar, for diagnostics.
pub const GRAMMAR: &str = "seq := branch | masked | patch | start\n\
                           branch := 'const' rat | 'ratfun(' rats ';' rats ')'\n\
                           masked := 'masked(' int ';' branch ('|' branch)* ')'\n\
                           patch := 'patch(' seq ';' int '=' rat (',' int '=' rat)* ')'\n\
                           start := 'start(' seq ';' int ')'\n\
                           rats := rat (',' rat)*\n\
                           rat := '-'? digits ('/' digits)?";

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error(&self, expected: &[&str]) -> Error {
        let found = match self.rest().chars().next() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        Error::Syntax(SyntaxError {
            position: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&[&format!("'{token}'")]))
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let len = rest.find(|c: char| !pred(c)).unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let at = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        digits.parse().map_err(|_| {
            self.pos = at;
            self.error(&["integer"])
        })
    }

    fn rational<T: Scalar>(&mut self) -> Result<T> {
        self.skip_ws();
        let at = self.pos;
        let text = self.take_while(|c| c.is_ascii_digit() || c == '/' || c == '-');
        parse_scalar(text).ok_or_else(|| {
            self.pos = at;
            self.error(&["rational"])
        })
    }

    fn rationals<T: Scalar>(&mut self) -> Result<Vec<T>> {
        let mut out = vec![self.rational()?];
        while self.eat(",") {
            out.push(self.rational()?);
        }
        Ok(out)
    }

    fn branch<T: Scalar>(&mut self) -> Result<RationalFunc<T>> {
        self.skip_ws();
        if self.eat("const") {
            return Ok(RationalFunc::constant(self.rational()?));
        }
        let at = self.pos;
        if !self.eat("ratfun(") {
            return Err(self.error(&["'const'", "'ratfun('"]));
        }
        let num = self.rationals()?;
        self.expect(";")?;
        let den = self.rationals()?;
        self.expect(")")?;
        RationalFunc::from_coeffs(num, den).map_err(|e| match e {
            Error::ZeroDenominatorPolynomial => Error::Syntax(SyntaxError {
                position: at,
                expected: vec!["nonzero denominator".to_string()],
                found: "zero polynomial".to_string(),
            }),
            other => other,
        })
    }

    fn seq<T: Scalar>(&mut self) -> Result<EventualSeq<T>> {
        self.skip_ws();
        if self.eat("masked(") {
            let at = self.pos;
            let modulus = self.integer()?;
            self.expect(";")?;
            let mut branches = vec![self.branch()?];
            while self.eat("|") {
                branches.push(self.branch()?);
            }
            self.expect(")")?;
            return EventualSeq::masked(modulus as usize, branches).map_err(|e| {
                Error::Syntax(SyntaxError {
                    position: at,
                    expected: vec![format!("modulus matching the branch count ({e})")],
                    found: modulus.to_string(),
                })
            });
        }
        if self.eat("patch(") {
            let inner = self.seq()?;
            self.expect(";")?;
            let mut values = Vec::new();
            self.skip_ws();
            if !self.rest().starts_with(')') {
                loop {
                    let k = self.integer()?;
                    self.expect("=")?;
                    values.push((k, self.rational()?));
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect(")")?;
            return Ok(inner.patched(values));
        }
        if self.eat("start(") {
            let inner: EventualSeq<T> = self.seq()?;
            self.expect(";")?;
            let at = self.pos;
            let k = self.integer()?;
            if k == 0 {
                self.pos = at;
                return Err(self.error(&["positive integer"]));
            }
            self.expect(")")?;
            return Ok(inner.with_start(k));
        }
        let f = self.branch().map_err(|e| match e {
            Error::Syntax(mut s) if s.expected == ["'const'", "'ratfun('"] => {
                s.expected = ["'const'", "'ratfun('", "'masked('", "'patch('", "'start('"].map(String::from).to_vec();
                Error::Syntax(s)
            }
            other => other,
        })?;
        Ok(EventualSeq::from_ratfunc(f))
    }
}

/// Parses the text form of a sequence.
pub fn parse_seq<T: Scalar>(text: &str) -> Result<EventualSeq<T>> {
    let mut cur = Cursor { src: text, pos: 0 };
    let s = cur.seq()?;
    cur.skip_ws();
    if !cur.rest().is_empty() {
        return Err(cur.error(&["end of input"]));
    }
    Ok(s)
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn write_branch<T: Scalar>(f: &RationalFunc<T>, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f.as_constant() {
        Some(c) => write!(out, "const {c}"),
        None => write!(out, "ratfun({}; {})", join(f.numerator().coeffs()), join(f.denominator().coeffs())),
    }
}

pub(super) fn write_seq<T: Scalar>(s: &EventualSeq<T>, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if s.start != 1 {
        out.write_str("start(")?;
    }
    if !s.patches.is_empty() {
        out.write_str("patch(")?;
    }
    if s.modulus == 1 {
        write_branch(&s.branches[0], out)?;
    } else {
        write!(out, "masked({}; ", s.modulus)?;
        for (r, b) in s.branches.iter().enumerate() {
            if r > 0 {
                out.write_str(" | ")?;
            }
            write_branch(b, out)?;
        }
        out.write_str(")")?;
    }
    if !s.patches.is_empty() {
        let items: Vec<String> = s.patches.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(out, "; {})", items.join(", "))?;
    }
    if s.start != 1 {
        write!(out, "; {})", s.start)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn parse(text: &str) -> Result<EventualSeq<Rational>> {
        parse_seq(text)
    }

    #[test]
    fn parses_each_form() {
        assert_eq!(parse("ratfun(1; 0,1)").unwrap(), EventualSeq::reciprocal_index());
        assert_eq!(parse("const 1000000").unwrap(), EventualSeq::constant(Rational::from_integer(1_000_000.into())));
        assert_eq!(parse("masked(2; const 1 | const 0)").unwrap(), EventualSeq::even_indicator());
        let p = parse("patch(ratfun(1; 0,1); 5=42, 3=-1/2)").unwrap();
        assert_eq!(p.eval_at(3).unwrap(), Rational::new((-1).into(), 2.into()));
        assert_eq!(p.eval_at(5).unwrap(), Rational::from_integer(42.into()));
        assert_eq!(parse("start(ratfun(1; -3,1); 4)").unwrap().start(), 4);
    }

    #[test]
    fn prints_canonical_text() {
        assert_eq!(parse("ratfun(2; 0,2)").unwrap().to_string(), "ratfun(1; 0,1)");
        assert_eq!(parse("ratfun(7; 1)").unwrap().to_string(), "const 7");
        assert_eq!(parse("masked(2; const 1 | const 1)").unwrap().to_string(), "const 1");
        assert_eq!(parse("ratfun(1; -3,1)").unwrap().to_string(), "patch(ratfun(1; -3,1); 3=0)");
        assert_eq!(
            parse("start(patch(masked(2; ratfun(0,1; 1) | const 0); 9=1/3); 2)").unwrap().to_string(),
            "start(patch(masked(2; ratfun(0,1; 1) | const 0); 9=1/3); 2)"
        );
    }

    #[test]
    fn reports_positions() {
        let Err(Error::Syntax(e)) = parse("ratfun(1; 0 1)") else { panic!("expected syntax error") };
        assert_eq!(e.position, 12);
        assert_eq!(e.expected, vec!["')'"]);
        let Err(Error::Syntax(e)) = parse("ratfun(1; 0)") else { panic!("expected syntax error") };
        assert_eq!(e.position, 0);
        let Err(Error::Syntax(e)) = parse("masked(3; const 1 | const 2)") else { panic!("expected syntax error") };
        assert_eq!(e.position, 7);
        assert!(matches!(parse("const 1 junk"), Err(Error::Syntax(_))));
        assert!(matches!(parse("wat"), Err(Error::Syntax(_))));
    }
}
