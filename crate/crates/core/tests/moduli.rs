use proptest::prelude::*;

use conemod_core::cone::critical_rates;
use conemod_core::cone::presets::fubini_study;
use conemod_core::moduli::{
    classify_rigidity, default_mu, obstruction_dims, virt_dim_general, virt_dim_pun,
    virtual_dimension_report, ModuliConfig, Obstruction, Rigidity, StructureGroup, TangentConeSpec,
};
use conemod_core::p2::expr::{ChernData, Stability};
use conemod_core::p2::BundleExpr;
use conemod_core::rate::rational;
use conemod_core::{Error, Rate, Window};

fn pu(points: Vec<TangentConeSpec>, n: u32) -> conemod_core::Result<ModuliConfig> {
    ModuliConfig::new(points, StructureGroup::Pu { n })
}

fn stable(rank: u32, c1: i64, c2: i64) -> BundleExpr {
    BundleExpr::Abstract(ChernData::new(rank, c1, rational(c2, 1), Stability::Stable).unwrap())
}

fn fs_rates_spec(mu: Rate) -> TangentConeSpec {
    let op = fubini_study().unwrap();
    let set = critical_rates(&op, &Window::open(Rate::int(-5), Rate::int(0)).unwrap()).unwrap();
    TangentConeSpec::rates(set, 8, mu)
}

proptest! {
    #[test]
    fn fs_dimension_is_independent_of_mu(n in 1usize..5, t in 0.01f64..0.99) {
        let mu_bar = 2.0 * 2f64.sqrt() - 3.0;
        let mu = Rate::float(-1.0 + t * (mu_bar + 1.0));
        let config = pu(vec![TangentConeSpec::fubini_study(mu); n], 2).unwrap();
        prop_assert_eq!(virt_dim_general(&config).unwrap(), 0);
        prop_assert_eq!(virt_dim_pun(&config).unwrap(), 0);
    }

    #[test]
    fn stable_rank_two_cones_are_strictly_negative(c2 in 2i64..15, stab in 0u32..=8, extra in 0usize..3) {
        let mu = Rate::ratio(-1, 2);
        let mut points = vec![TangentConeSpec::bundle(stable(2, 0, c2), stab, mu.clone())];
        points.extend(vec![TangentConeSpec::fubini_study(mu); extra]);
        let config = pu(points, 2).unwrap();
        let v = virt_dim_pun(&config).unwrap();
        prop_assert_eq!(v, 12 + 8 - i64::from(stab) - 4 * (4 * c2));
        prop_assert_eq!(virt_dim_general(&config).unwrap(), v);
        prop_assert_eq!(classify_rigidity(&config).unwrap(), Rigidity::StrictlyNegative { value: v });
        match obstruction_dims(&config, true).unwrap() {
            Obstruction::Available { coker_dim, ker_dim } => {
                prop_assert_eq!(ker_dim, 0);
                prop_assert_eq!(coker_dim as i64, -v);
            }
            Obstruction::Unavailable { reason } => prop_assert!(false, "{}", reason),
        }
    }
}

#[test]
fn three_sources_agree_on_fubini_study() {
    let mu = Rate::ratio(-1, 2);
    let preset = pu(vec![TangentConeSpec::fubini_study(mu.clone())], 2).unwrap();
    let bundle = pu(
        vec![TangentConeSpec::bundle(BundleExpr::Tangent, 8, mu.clone())],
        2,
    )
    .unwrap();
    let rates = pu(vec![fs_rates_spec(mu)], 2).unwrap();
    for c in [&preset, &bundle, &rates] {
        assert_eq!(virt_dim_general(c).unwrap(), 0);
    }
    assert_eq!(virt_dim_pun(&bundle).unwrap(), 0);
}

#[test]
fn report_cross_checks_and_flags_heuristics() {
    let mu = Rate::ratio(-1, 2);
    let config = pu(
        vec![
            TangentConeSpec::fubini_study(mu.clone()),
            TangentConeSpec::bundle(stable(2, 0, 2), 0, mu),
        ],
        2,
    )
    .unwrap();
    let report = virtual_dimension_report(&config, true).unwrap();
    assert_eq!(report.virt_dim, -12);
    assert_eq!(report.virt_dim_pun, Some(-12));
    assert_eq!(
        report.obstruction,
        Obstruction::Available {
            ker_dim: 0,
            coker_dim: 12
        }
    );
    assert!(report.caveats.iter().any(|c| c.contains("heuristic")));
    let without = virtual_dimension_report(&config, false).unwrap();
    assert!(matches!(
        without.obstruction,
        Obstruction::Unavailable { .. }
    ));
    assert_eq!(without.ker_dim, None);
}

#[test]
fn invalid_inputs_are_rejected() {
    let mu = Rate::ratio(-1, 2);
    assert!(pu(vec![], 2).is_err());
    assert!(pu(vec![TangentConeSpec::fubini_study(mu.clone())], 1).is_err());
    let outside = pu(vec![TangentConeSpec::fubini_study(Rate::ratio(-1, 10))], 2).unwrap();
    assert!(matches!(
        virt_dim_general(&outside),
        Err(Error::RateWindow(_))
    ));
    let too_small = pu(
        vec![TangentConeSpec::bundle(BundleExpr::Tangent, 0, mu.clone())],
        2,
    )
    .unwrap();
    assert!(matches!(
        virt_dim_general(&too_small),
        Err(Error::InconsistentInput(_))
    ));
    let wrong_rank = pu(vec![TangentConeSpec::bundle(stable(3, 0, 4), 8, mu)], 2).unwrap();
    assert!(virt_dim_general(&wrong_rank).is_err());
}

#[test]
fn generic_groups_have_no_pun_formula() {
    let mu = Rate::ratio(-1, 2);
    let config = ModuliConfig::new(
        vec![fs_rates_spec(mu)],
        StructureGroup::GenericCompact { center_dim: 0 },
    )
    .unwrap();
    assert_eq!(virt_dim_general(&config).unwrap(), 0);
    assert!(matches!(virt_dim_pun(&config), Err(Error::Precondition(_))));
    assert!(matches!(
        classify_rigidity(&config).unwrap(),
        Rigidity::NotApplicable { .. }
    ));
}

#[test]
fn default_mu_is_admissible() {
    assert_eq!(default_mu(&Rate::int(0)), Rate::ratio(-1, 2));
    let tight = Rate::ratio(-3, 4);
    let mu = default_mu(&tight);
    assert!(mu.to_f64() > -1.0 && mu.to_f64() < -0.75);
}
