//! Bundle expressions on `P^2` and their text grammar.
//!
//! ```text
//! sum     := postfix ('+' postfix)*
//! postfix := primary ('(' int ')')*
//! primary := 'O(' int ')' | 'T' | 'Omega' | 'Ω' | 'End(' sum ')' | 'Dual(' sum ')'
//!          | 'abstract(' fields ')' | '(' sum ')'
//! ```

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::p2::chern::ChernCharacter;
use crate::rate::parse_rational;

/// Asserted stability of an abstract bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    /// Direct sum of `s` pairwise non-isomorphic stable bundles of equal slope.
    Polystable(u32),
    Unstable,
}

/// Rank and Chern classes of a bundle known only through them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernData {
    pub rank: u32,
    pub c1: i64,
    pub c2: BigRational,
    pub stability: Stability,
}

impl ChernData {
    pub fn new(rank: u32, c1: i64, c2: BigRational, stability: Stability) -> Result<Self> {
        if rank < 1 {
            return Err(Error::InconsistentInput("rank must be at least 1".into()));
        }
        if stability == Stability::Polystable(0) {
            return Err(Error::InconsistentInput(
                "a polystable bundle has at least one summand".into(),
            ));
        }
        Ok(ChernData {
            rank,
            c1,
            c2,
            stability,
        })
    }

    pub fn chern_character(&self) -> ChernCharacter {
        ChernCharacter::from_classes(i64::from(self.rank), self.c1, &self.c2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BundleExpr {
    /// `O(k)`.
    Line(i64),
    Tangent,
    Cotangent,
    Abstract(ChernData),
    Dual(Box<BundleExpr>),
    Twist(Box<BundleExpr>, i64),
    Sum(Vec<BundleExpr>),
    End(Box<BundleExpr>),
}

impl BundleExpr {
    pub fn end(e: BundleExpr) -> Self {
        BundleExpr::End(Box::new(e))
    }

    pub fn dual(e: BundleExpr) -> Self {
        BundleExpr::Dual(Box::new(e))
    }

    pub fn twist(self, k: i64) -> Self {
        BundleExpr::Twist(Box::new(self), k)
    }

    /// `(End E)(ℓ)`.
    pub fn end_twist(e: BundleExpr, l: i64) -> Self {
        BundleExpr::end(e).twist(l)
    }

    pub fn chern_character(&self) -> ChernCharacter {
        match self {
            BundleExpr::Line(k) => ChernCharacter::line(*k),
            // Euler sequence 0 -> O -> O(1)^3 -> T -> 0
            BundleExpr::Tangent => ChernCharacter::line(1)
                .scale(3)
                .add(&ChernCharacter::line(0).scale(-1)),
            BundleExpr::Cotangent => BundleExpr::Tangent.chern_character().dual(),
            BundleExpr::Abstract(d) => d.chern_character(),
            BundleExpr::Dual(e) => e.chern_character().dual(),
            BundleExpr::Twist(e, k) => e.chern_character().twist(*k),
            BundleExpr::Sum(items) => items.iter().fold(ChernCharacter::zero(), |acc, e| {
                acc.add(&e.chern_character())
            }),
            BundleExpr::End(e) => e.chern_character().end(),
        }
    }

    pub fn euler_characteristic(&self) -> Result<i64> {
        self.chern_character().euler_characteristic()
    }

    /// Whether the expression mentions an abstract bundle.
    pub fn has_abstract(&self) -> bool {
        match self {
            BundleExpr::Abstract(_) => true,
            BundleExpr::Line(_) | BundleExpr::Tangent | BundleExpr::Cotangent => false,
            BundleExpr::Dual(e) | BundleExpr::Twist(e, _) | BundleExpr::End(e) => e.has_abstract(),
            BundleExpr::Sum(items) => items.iter().any(BundleExpr::has_abstract),
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stability::Stable => f.write_str("stable"),
            Stability::Polystable(s) => write!(f, "polystable={s}"),
            Stability::Unstable => f.write_str("unstable"),
        }
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BundleExpr::Line(k) => write!(f, "O({k})"),
            BundleExpr::Tangent => f.write_str("T"),
            BundleExpr::Cotangent => f.write_str("Omega"),
            BundleExpr::Abstract(d) => write!(
                f,
                "abstract(r={},c1={},c2={},{})",
                d.rank, d.c1, d.c2, d.stability
            ),
            BundleExpr::Dual(e) => write!(f, "Dual({e})"),
            BundleExpr::End(e) => write!(f, "End({e})"),
            BundleExpr::Twist(e, k) => match e.as_ref() {
                BundleExpr::Sum(_) => write!(f, "({e})({k})"),
                _ => write!(f, "{e}({k})"),
            },
            BundleExpr::Sum(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    match e {
                        BundleExpr::Sum(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!(
            "bundle expression `{}`: {what} at offset {}",
            self.src, self.pos
        ))
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
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|(i, c)| c.is_ascii_digit() || (*i == 0 && (*c == '-' || *c == '+')))
            .count();
        let text = &rest[..len];
        let value = text
            .parse::<i64>()
            .map_err(|_| self.error("expected an integer"))?;
        self.pos += len;
        Ok(value)
    }

    /// Lookahead for a parenthesized integer, used for postfix twists.
    fn twist_suffix(&mut self) -> Option<i64> {
        let save = self.pos;
        if self.eat("(") {
            if let Ok(k) = self.integer() {
                if self.eat(")") {
                    return Some(k);
                }
            }
        }
        self.pos = save;
        None
    }

    fn sum(&mut self) -> Result<BundleExpr> {
        let mut items = vec![self.postfix()?];
        while self.eat("+") {
            items.push(self.postfix()?);
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            BundleExpr::Sum(items)
        })
    }

    fn postfix(&mut self) -> Result<BundleExpr> {
        let mut e = self.primary()?;
        while let Some(k) = self.twist_suffix() {
            e = e.twist(k);
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<BundleExpr> {
        self.skip_ws();
        if self.eat("O(") {
            let k = self.integer()?;
            self.expect(")")?;
            return Ok(BundleExpr::Line(k));
        }
        if self.eat("Omega") || self.eat("Ω") {
            return Ok(BundleExpr::Cotangent);
        }
        if self.eat("End(") {
            let e = self.sum()?;
            self.expect(")")?;
            return Ok(BundleExpr::end(e));
        }
        if self.eat("Dual(") {
            let e = self.sum()?;
            self.expect(")")?;
            return Ok(BundleExpr::dual(e));
        }
        if self.eat("abstract(") {
            return self.abstract_fields();
        }
        if self.eat("T") {
            return Ok(BundleExpr::Tangent);
        }
        if self.eat("(") {
            let e = self.sum()?;
            self.expect(")")?;
            return Ok(e);
        }
        Err(self.error("expected a bundle"))
    }

    fn abstract_fields(&mut self) -> Result<BundleExpr> {
        let close = self
            .rest()
            .find(')')
            .ok_or_else(|| self.error("unterminated abstract(...)"))?;
        let body = &self.rest()[..close];
        let mut rank = None;
        let mut c1 = None;
        let mut c2 = None;
        let mut stability = None;
        for field in body.split(',').map(str::trim) {
            let (key, value) = match field.split_once('=') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (field, None),
            };
            let bad = || Error::Parse(format!("bad abstract field `{field}`"));
            match (key, value) {
                ("r" | "rank", Some(v)) => rank = Some(v.parse::<u32>().map_err(|_| bad())?),
                ("c1", Some(v)) => c1 = Some(v.parse::<i64>().map_err(|_| bad())?),
                ("c2", Some(v)) => c2 = Some(parse_rational(v).map_err(|_| bad())?),
                ("stable", None) => stability = Some(Stability::Stable),
                ("unstable", None) => stability = Some(Stability::Unstable),
                ("polystable", Some(v)) => {
                    stability = Some(Stability::Polystable(v.parse().map_err(|_| bad())?))
                }
                _ => return Err(bad()),
            }
        }
        self.pos += close + 1;
        let missing = |name: &str| Error::Parse(format!("abstract bundle is missing `{name}`"));
        let data = ChernData::new(
            rank.ok_or_else(|| missing("r"))?,
            c1.ok_or_else(|| missing("c1"))?,
            c2.ok_or_else(|| missing("c2"))?,
            stability.ok_or_else(|| missing("stability"))?,
        )?;
        Ok(BundleExpr::Abstract(data))
    }
}

impl FromStr for BundleExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let e = p.sum()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl Serialize for BundleExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BundleExpr {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::rational;

    #[test]
    fn parses_grammar_examples() {
        assert_eq!("O(2)".parse::<BundleExpr>().unwrap(), BundleExpr::Line(2));
        assert_eq!("T".parse::<BundleExpr>().unwrap(), BundleExpr::Tangent);
        assert_eq!("Ω".parse::<BundleExpr>().unwrap(), BundleExpr::Cotangent);
        assert_eq!(
            "End(T)(-1)".parse::<BundleExpr>().unwrap(),
            BundleExpr::end_twist(BundleExpr::Tangent, -1)
        );
        assert_eq!(
            "O(1)+O(-1)".parse::<BundleExpr>().unwrap(),
            BundleExpr::Sum(vec![BundleExpr::Line(1), BundleExpr::Line(-1)])
        );
        let a = "abstract(r=2,c1=0,c2=2,stable)"
            .parse::<BundleExpr>()
            .unwrap();
        assert_eq!(
            a,
            BundleExpr::Abstract(ChernData::new(2, 0, rational(2, 1), Stability::Stable).unwrap())
        );
        let p = " End( abstract(r=2, c1=1, c2=3/2, polystable=2) )( -2 ) "
            .parse::<BundleExpr>()
            .unwrap();
        assert_eq!(
            p.to_string(),
            "End(abstract(r=2,c1=1,c2=3/2,polystable=2))(-2)"
        );
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "O(",
            "O(x)",
            "End(T",
            "T+",
            "abstract(r=2,c1=0)",
            "abstract(r=0,c1=0,c2=0,stable)",
            "Q",
            "T)",
        ] {
            assert!(bad.parse::<BundleExpr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "(O(1)+T)(-2)",
            "Dual(Omega(3))",
            "End(O(1)+O(-1))",
            "(O(1)+O(2))+T",
            "O(1)(2)",
        ] {
            let e: BundleExpr = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(e.to_string().parse::<BundleExpr>().unwrap(), e);
        }
    }

    #[test]
    fn chern_characters() {
        let ch = |s: &str| s.parse::<BundleExpr>().unwrap().chern_character();
        assert_eq!(ch("T"), ChernCharacter::new(2, 3, rational(3, 2)));
        assert_eq!(ch("Omega"), ChernCharacter::new(2, -3, rational(3, 2)));
        assert_eq!(ch("Omega(3)"), ch("T"));
        assert_eq!(ch("End(T)"), ChernCharacter::new(4, 0, rational(-3, 1)));
        assert_eq!(ch("O(5)"), ChernCharacter::new(1, 5, rational(25, 2)));
    }

    #[test]
    fn euler_characteristics() {
        let chi = |s: &str| {
            s.parse::<BundleExpr>()
                .unwrap()
                .euler_characteristic()
                .unwrap()
        };
        assert_eq!(chi("O(0)"), 1);
        assert_eq!(chi("O(-1)"), 0);
        assert_eq!(chi("End(T)(-1)"), -3);
        assert_eq!(chi("End(abstract(r=2,c1=0,c2=2,stable))(-1)"), -8);
        assert!("abstract(r=2,c1=0,c2=1/2,stable)"
            .parse::<BundleExpr>()
            .unwrap()
            .euler_characteristic()
            .is_err());
    }
}
