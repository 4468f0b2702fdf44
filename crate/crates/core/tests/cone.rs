use proptest::prelude::*;

use conemod_core::cone::presets::{fubini_study, scalar_laplacian_s5};
use conemod_core::cone::{
    critical_rates, dualize_rate, homogeneous_kernel_dim, indicial_polynomial, ConeOperatorSpec,
    Coverage, CriticalRateSet, ModeBlock,
};
use conemod_core::fredholm::{index_change, laplacian_index, selfadjoint_index, WeightVector};
use conemod_core::rate::rational;
use conemod_core::{Error, Rate, Window};

fn spectrum() -> impl Strategy<Value = Vec<(i64, i64, u64)>> {
    prop::collection::btree_map((1i64..200, 1i64..9), 1u64..10, 1..6)
        .prop_map(|m| m.into_iter().map(|((n, d), mult)| (n, d, mult)).collect())
}

/// Self-adjoint first-order operator with roots `−5/2 ± n/d`.
fn operator(spec: &[(i64, i64, u64)]) -> ConeOperatorSpec {
    let mut modes = Vec::new();
    let mut seen = Vec::new();
    for &(n, d, m) in spec {
        let up = Rate::from(rational(-5, 2) + rational(n, d));
        if seen.iter().any(|r: &Rate| r.approx_eq(&up)) {
            continue;
        }
        seen.push(up.clone());
        modes.push(ModeBlock::first_order(dualize_rate(&up), m));
        modes.push(ModeBlock::first_order(up, m));
    }
    ConeOperatorSpec::new(1, true, modes, Coverage::Truncated).unwrap()
}

fn critical(op: &ConeOperatorSpec, x: f64) -> bool {
    (0..op.modes().len()).any(|j| {
        op.mode_roots(j)
            .unwrap()
            .iter()
            .any(|r| (r.to_f64() - x).abs() < 1e-6)
    })
}

proptest! {
    #[test]
    fn duality_is_an_involution(n in -400i64..400, d in 1i64..50) {
        let r = Rate::ratio(n, d);
        prop_assert_eq!(dualize_rate(&dualize_rate(&r)), r.clone());
        prop_assert_eq!(dualize_rate(&r).add(&r), Rate::int(-5));
    }

    #[test]
    fn laplacian_roots_are_zeros(num in 0i64..500, den in 1i64..7) {
        let block = ModeBlock::laplacian(rational(num, den), 1);
        let p = indicial_polynomial(&block, 2).unwrap();
        let op = ConeOperatorSpec::new(2, false, vec![block], Coverage::Truncated).unwrap();
        let roots = op.mode_roots(0).unwrap();
        prop_assert_eq!(roots.len(), 2);
        for root in &roots {
            prop_assert!(p.vanishes_at(root), "p({root}) != 0");
            let x = root.to_f64();
            prop_assert!((x * (x + 4.0) - num as f64 / den as f64).abs() < 1e-8 * (1.0 + num as f64));
        }
        prop_assert!(roots[0].add(&roots[1]).approx_eq(&Rate::int(-4)));
    }

    #[test]
    fn index_is_antisymmetric_and_monotone(spec in spectrum(), a in -30.0f64..25.0, b in -30.0f64..25.0) {
        let op = operator(&spec);
        prop_assume!(!critical(&op, a) && !critical(&op, b) && !critical(&op, -5.0 - a));
        prop_assume!((a + 2.5).abs() > 1e-6 && (b + 2.5).abs() > 1e-6);
        let ia = selfadjoint_index(&op, &WeightVector::single(Rate::float(a))).unwrap();
        let ib = selfadjoint_index(&op, &WeightVector::single(Rate::float(b))).unwrap();
        let dual = selfadjoint_index(&op, &WeightVector::single(Rate::float(-5.0 - a))).unwrap();
        prop_assert_eq!(ia + dual, 0);
        if a <= b {
            prop_assert!(ia >= ib);
        } else {
            prop_assert!(ib >= ia);
        }
    }

    #[test]
    fn index_change_is_additive(spec in spectrum(), mut w in prop::collection::vec(-12.0f64..7.0, 3)) {
        w.sort_by(f64::total_cmp);
        let op = operator(&spec);
        prop_assume!(w.iter().all(|&x| !critical(&op, x)));
        let window = Window::open(Rate::int(-13), Rate::int(8)).unwrap();
        let set = vec![critical_rates(&op, &window).unwrap()];
        let at = |x: f64| WeightVector::single(Rate::float(x));
        let ab = index_change(&set, &at(w[0]), &at(w[1])).unwrap();
        let bc = index_change(&set, &at(w[1]), &at(w[2])).unwrap();
        let ac = index_change(&set, &at(w[0]), &at(w[2])).unwrap();
        prop_assert_eq!(ab + bc, ac);
        let i0 = selfadjoint_index(&op, &at(w[0])).unwrap();
        let i2 = selfadjoint_index(&op, &at(w[2])).unwrap();
        prop_assert_eq!(i0 - ac, i2);
    }
}

#[test]
fn kernel_dims_are_dual_symmetric() {
    let op = fubini_study().unwrap();
    for r in [-3, -2] {
        let rate = Rate::int(r);
        assert_eq!(
            homogeneous_kernel_dim(&op, &rate),
            homogeneous_kernel_dim(&op, &dualize_rate(&rate))
        );
    }
}

#[test]
fn closed_endpoint_on_a_rate_collides() {
    let op = fubini_study().unwrap();
    let w = Window::closed(Rate::int(-3), Rate::int(-1)).unwrap();
    assert!(matches!(
        critical_rates(&op, &w),
        Err(Error::EndpointCollision { .. })
    ));
    let open = Window::open(Rate::int(-3), Rate::int(-1)).unwrap();
    assert_eq!(
        critical_rates(&op, &open).unwrap().rates(),
        vec![Rate::int(-2)]
    );
}

#[test]
fn laplacian_index_jumps_by_harmonic_dims() {
    let op = scalar_laplacian_s5(20).unwrap();
    let at = |x: f64| laplacian_index(&op, &WeightVector::single(Rate::float(x))).unwrap();
    assert_eq!(at(-1.0), 0);
    assert_eq!(at(0.5), -1);
    assert_eq!(at(1.5), -7);
    assert_eq!(at(-4.5), 1);
    assert_eq!(at(-5.5), 7);
}

#[test]
fn rate_sets_round_trip_through_json() {
    let op = fubini_study().unwrap();
    let set = critical_rates(&op, &Window::open(Rate::int(-5), Rate::int(0)).unwrap()).unwrap();
    let text = serde_json::to_string(&set).unwrap();
    let back: CriticalRateSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, set);
}

#[test]
fn operators_round_trip_through_json() {
    let op = fubini_study().unwrap();
    let text = serde_json::to_string(&op).unwrap();
    let back: ConeOperatorSpec = serde_json::from_str(&text).unwrap();
    assert_eq!(back, op);
}
