//! Bott's formula for the twisted forms `Ω^p(k)` on `P^2`.

use num_traits::ToPrimitive;

use crate::p2::{Certainty, CohomologyVector};
use crate::rate::binomial;

fn h0(p: u32, k: i64) -> u64 {
    let p = i64::from(p);
    if k == 0 && p == 0 {
        return 1;
    }
    if k <= p {
        return 0;
    }
    (binomial(k + 2 - p, k) * binomial(k - 1, p))
        .to_u64()
        .expect("Bott dimension fits in u64")
}

/// `h^q(P^2, Ω^p(k))` for `q = 0, 1, 2`.
///
/// # Panics
/// If `p > 2`.
pub fn bott_cohomology(p: u32, k: i64) -> CohomologyVector {
    assert!(p <= 2, "Ω^{p} vanishes on P^2 for p > 2");
    let h1 = u64::from(p == 1 && k == 0);
    // Serre duality: H^2(Ω^p(k)) = H^0(Ω^{2-p}(-k))^*
    let h2 = h0(2 - p, -k);
    CohomologyVector {
        h0: h0(p, k),
        h1,
        h2,
        certainty: Certainty::Exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let v = |p, k| {
            let c = bott_cohomology(p, k);
            (c.h0, c.h1, c.h2)
        };
        assert_eq!(v(0, 0), (1, 0, 0));
        assert_eq!(v(0, 1), (3, 0, 0));
        assert_eq!(v(1, 0), (0, 1, 0));
        assert_eq!(v(2, 0), (0, 0, 1));
        // T = Ω(3) has eight sections
        assert_eq!(v(1, 3), (8, 0, 0));
        assert_eq!(v(0, -3), (0, 0, 1));
        assert_eq!(v(2, 3), (1, 0, 0));
    }
}
