//! Univariate polynomials over the rationals with certified real-root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rate::{rational_to_f64, Rate};

/// Why a polynomial fails the simple-real-roots hypothesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootIssue {
    Repeated,
    NonReal { real_roots: usize, degree: usize },
}

impl fmt::Display for RootIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootIssue::Repeated => f.write_str("repeated root"),
            RootIssue::NonReal { real_roots, degree } => {
                write!(f, "only {real_roots} of {degree} roots are real")
            }
        }
    }
}

/// Coefficients in ascending powers of `z`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn derivative(&self) -> RationalPoly {
        RationalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn rem(&self, divisor: &RationalPoly) -> RationalPoly {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let d = divisor.degree();
        let lead = divisor.leading();
        while r.len() > d && !r.is_empty() {
            let top = r.len() - 1;
            let factor = &r[top] / &lead;
            if !factor.is_zero() {
                for (i, c) in divisor.coeffs.iter().enumerate() {
                    r[top - d + i] -= &factor * c;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        RationalPoly::new(r)
    }

    fn monic(&self) -> RationalPoly {
        let lead = self.leading();
        RationalPoly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn gcd(&self, other: &RationalPoly) -> RationalPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    fn sturm_chain(&self) -> Vec<RationalPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(RationalPoly::new(
                r.coeffs.into_iter().map(|c| -c).collect(),
            ));
        }
        chain
    }

    fn sign_changes(values: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut changes = 0;
        for s in values.filter(|s| *s != Ordering::Equal) {
            if last != Ordering::Equal && s != last {
                changes += 1;
            }
            last = s;
        }
        changes
    }

    fn changes_at(chain: &[RationalPoly], x: &BigRational) -> usize {
        Self::sign_changes(chain.iter().map(|p| p.eval(x).cmp(&BigRational::zero())))
    }

    fn changes_at_infinity(chain: &[RationalPoly], positive: bool) -> usize {
        Self::sign_changes(chain.iter().map(|p| {
            let s = p.leading().cmp(&BigRational::zero());
            if positive || p.degree() % 2 == 0 {
                s
            } else {
                s.reverse()
            }
        }))
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        Self::changes_at_infinity(&chain, false) - Self::changes_at_infinity(&chain, true)
    }

    /// Cauchy bound: every root lies in `(-B, B)`.
    fn root_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let max = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        max + BigRational::one()
    }

    /// All real roots, sorted, under the simple-real-roots hypothesis.
    ///
    /// Degrees one and two are solved in closed form (exact rationals or
    /// quadratic surds). Higher degrees are isolated with a Sturm chain,
    /// refined by exact bisection and snapped to an exact rational root when
    /// one exists.
    pub fn simple_real_roots(&self) -> Result<Vec<Rate>, RootIssue> {
        let degree = self.degree();
        if degree == 0 {
            return Ok(Vec::new());
        }
        if !self.is_squarefree() {
            return Err(RootIssue::Repeated);
        }
        match degree {
            1 => Ok(vec![Rate::Exact(-&self.coeffs[0] / &self.coeffs[1])]),
            2 => {
                let (c, b, a) = (&self.coeffs[0], &self.coeffs[1], &self.coeffs[2]);
                let disc = b * b - BigRational::from_integer(BigInt::from(4)) * a * c;
                if disc.is_negative() {
                    return Err(RootIssue::NonReal {
                        real_roots: 0,
                        degree,
                    });
                }
                let two_a = Rate::Exact(a * BigRational::from_integer(BigInt::from(2)));
                let root = Rate::sqrt_rational(&disc).expect("nonnegative discriminant");
                let minus_b = Rate::Exact(-b.clone());
                let mut roots = vec![
                    minus_b
                        .add(&root)
                        .div(&two_a)
                        .expect("nonzero leading coefficient"),
                    minus_b
                        .sub(&root)
                        .div(&two_a)
                        .expect("nonzero leading coefficient"),
                ];
                roots.sort_by(|x, y| x.cmp_tol(y));
                Ok(roots)
            }
            _ => {
                let chain = self.sturm_chain();
                let real = Self::changes_at_infinity(&chain, false)
                    - Self::changes_at_infinity(&chain, true);
                if real < degree {
                    return Err(RootIssue::NonReal {
                        real_roots: real,
                        degree,
                    });
                }
                let bound = self.root_bound();
                let mut intervals = Vec::new();
                self.isolate(&chain, -bound.clone(), bound, &mut intervals);
                let mut roots: Vec<Rate> = intervals
                    .into_iter()
                    .map(|(lo, hi)| self.refine(lo, hi))
                    .collect();
                roots.sort_by(|x, y| x.cmp_tol(y));
                Ok(roots)
            }
        }
    }

    /// Splits `(lo, hi]` until each piece holds exactly one root.
    fn isolate(
        &self,
        chain: &[RationalPoly],
        lo: BigRational,
        hi: BigRational,
        out: &mut Vec<(BigRational, BigRational)>,
    ) {
        let count = Self::changes_at(chain, &lo) - Self::changes_at(chain, &hi);
        match count {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
                self.isolate(chain, lo, mid.clone(), out);
                self.isolate(chain, mid, hi, out);
            }
        }
    }

    fn refine(&self, mut lo: BigRational, mut hi: BigRational) -> Rate {
        if self.eval(&hi).is_zero() {
            return Rate::Exact(hi);
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let tol = BigRational::new(BigInt::one(), BigInt::from(1u64 << 52));
        let mut s_lo = self.eval(&lo).cmp(&BigRational::zero());
        while &hi - &lo > tol {
            let mid = (&lo + &hi) / &two;
            let v = self.eval(&mid);
            if v.is_zero() {
                return Rate::Exact(mid);
            }
            let s = v.cmp(&BigRational::zero());
            if s == s_lo {
                lo = mid;
                s_lo = s;
            } else {
                hi = mid;
            }
        }
        let approx = rational_to_f64(&((&lo + &hi) / &two));
        match self.snap_rational(approx, &lo, &hi) {
            Some(q) => Rate::Exact(q),
            None => Rate::Float(approx),
        }
    }

    /// Looks for an exact rational root `p/q` near `approx`, with `q` dividing
    /// the leading coefficient of the integer-normalized polynomial.
    fn snap_rational(
        &self,
        approx: f64,
        lo: &BigRational,
        hi: &BigRational,
    ) -> Option<BigRational> {
        let denom_lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
        let lead = (self.leading() * BigRational::from_integer(denom_lcm))
            .to_integer()
            .abs();
        let lead = lead.to_u64()?;
        if lead > 1_000_000 {
            return None;
        }
        (1..=lead).filter(|q| lead % q == 0).find_map(|q| {
            let p = (approx * q as f64).round();
            if !p.is_finite() {
                return None;
            }
            let cand = BigRational::new(BigInt::from(p as i128), BigInt::from(q));
            (self.eval(&cand).is_zero() && &cand >= lo && &cand <= hi).then_some(cand)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate::rational;

    fn poly(cs: &[i64]) -> RationalPoly {
        RationalPoly::new(cs.iter().map(|&c| rational(c, 1)).collect())
    }

    #[test]
    fn closed_form_quadratics() {
        // -z^2 - 4z + 5 = -(z - 1)(z + 5)
        let roots = poly(&[5, -4, -1]).simple_real_roots().unwrap();
        assert_eq!(roots, vec![Rate::int(-5), Rate::int(1)]);
        // -z^2 - 4z + 2: -2 ± sqrt(6)
        let roots = poly(&[2, -4, -1]).simple_real_roots().unwrap();
        assert_eq!(roots[0].label(), "-sqrt(6)-2");
        assert_eq!(roots[1].label(), "sqrt(6)-2");
    }

    #[test]
    fn detects_assumption_failures() {
        assert_eq!(
            poly(&[4, -4, 1]).simple_real_roots(),
            Err(RootIssue::Repeated)
        );
        assert!(matches!(
            poly(&[1, 0, 1]).simple_real_roots(),
            Err(RootIssue::NonReal { .. })
        ));
        // z^3 - 1 has one real root
        assert_eq!(
            poly(&[-1, 0, 0, 1]).simple_real_roots(),
            Err(RootIssue::NonReal {
                real_roots: 1,
                degree: 3
            })
        );
    }

    #[test]
    fn sturm_isolation_of_cubic() {
        // (z - 1)(z + 2)(2z - 1) = 2z^3 + z^2 - 5z + 2
        let roots = poly(&[2, -5, 1, 2]).simple_real_roots().unwrap();
        assert_eq!(roots, vec![Rate::int(-2), Rate::ratio(1, 2), Rate::int(1)]);
        // z^3 - 3z + 1 has three irrational roots 2cos(2πk/9 ± ...)
        let roots = poly(&[1, -3, 0, 1]).simple_real_roots().unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            let x = r.to_f64();
            assert!((x * x * x - 3.0 * x + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gcd_and_rem() {
        let p = poly(&[-1, 0, 1]);
        let q = poly(&[1, 1]);
        assert!(p.rem(&q).is_zero());
        assert_eq!(p.gcd(&q), q);
        assert_eq!(p.count_real_roots(), 2);
    }
}
