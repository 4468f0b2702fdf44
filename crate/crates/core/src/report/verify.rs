//! Built-in property suites run by `conemod verify`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone::duality::{block_model, eigen_duality_check};
use crate::cone::presets::{fubini_study, scalar_laplacian_s5, LAPLACIAN_MAX_DEGREE};
use crate::cone::{
    critical_rates, homogeneous_kernel_dim, radial_residual, ConeOperatorSpec, Coverage, ModeBlock,
};
use crate::error::{Error, Result};
use crate::fredholm::{mu_bar, mu_bar_from_rates, selfadjoint_index, WeightVector};
use crate::moduli::{
    classify_rigidity, obstruction_dims, virt_dim_general, virt_dim_pun, ModuliConfig, Obstruction,
    Rigidity, StructureGroup, TangentConeSpec, SU3_DIM,
};
use crate::p2::{
    bott_cohomology, cohomology, kernel_dims_from_cohomology, BundleExpr, ChernData, Stability,
};
use crate::rate::{rational, Rate, Window};

/// Everything the suites depend on, so that corrupted inputs can be checked too.
#[derive(Clone, Debug)]
pub struct VerifyInputs {
    pub fs_operator: ConeOperatorSpec,
    pub laplacian: ConeOperatorSpec,
    pub duality_j: DMatrix<f64>,
    pub duality_m: DMatrix<f64>,
    pub tol: f64,
    pub seed: u64,
    pub spectra: usize,
    pub weights_per_spectrum: usize,
    pub chern_samples: usize,
}

impl VerifyInputs {
    pub fn standard() -> Result<Self> {
        Ok(VerifyInputs {
            fs_operator: fubini_study()?,
            laplacian: scalar_laplacian_s5(LAPLACIAN_MAX_DEGREE)?,
            duality_j: DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
            duality_m: DMatrix::from_row_slice(2, 2, &[-2.5, 0.5, 0.5, -2.5]),
            tol: super::DEFAULT_TOL,
            seed: 0x5eed,
            spectra: 200,
            weights_per_spectrum: 50,
            chern_samples: 100,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl VerifySummary {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// Accumulates checks for one suite; the first failed check is kept as the detail.
struct Suite {
    name: &'static str,
    checks: u64,
    failure: Option<String>,
    max_residual: Option<f64>,
    note: String,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: 0,
            failure: None,
            max_residual: None,
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn residual(&mut self, r: f64) {
        self.max_residual = Some(self.max_residual.map_or(r, |m| m.max(r)));
    }

    fn run(mut self, body: impl FnOnce(&mut Suite) -> Result<()>) -> SuiteResult {
        if let Err(e) = body(&mut self) {
            self.checks += 1;
            if self.failure.is_none() {
                self.failure = Some(e.to_string());
            }
        }
        let passed = self.failure.is_none();
        let detail = self.failure.unwrap_or_else(|| {
            if self.note.is_empty() {
                format!("{} checks passed", self.checks)
            } else {
                format!("{} checks passed; {}", self.checks, self.note)
            }
        });
        SuiteResult {
            name: self.name.into(),
            passed,
            checks: self.checks,
            detail,
            max_residual: self.max_residual,
        }
    }
}

/// Random formally self-adjoint first-order spectrum closed under `λ ↦ −5 − λ`.
pub fn random_self_adjoint_spectrum(rng: &mut impl Rng) -> Result<ConeOperatorSpec> {
    let pairs = rng.gen_range(1..=6);
    let mut rates: Vec<Rate> = Vec::new();
    let mut modes = Vec::new();
    let center = Rate::ratio(-5, 2);
    for _ in 0..pairs {
        let offset = if rng.gen_bool(0.2) {
            let d = [2u64, 3, 5][rng.gen_range(0..3)];
            Rate::surd(rational(0, 1), rational(1, rng.gen_range(1..=4)), d)
        } else {
            Rate::ratio(
                rng.gen_range(1..=28),
                [1, 2, 3, 4, 5, 7, 8][rng.gen_range(0..7)],
            )
        };
        let rate = center.add(&offset);
        if rates.iter().any(|r| r.approx_eq(&rate)) {
            continue;
        }
        let mult = rng.gen_range(1..=8);
        let dual = rate.dual();
        modes.push(ModeBlock::first_order(rate.clone(), mult));
        modes.push(ModeBlock::first_order(dual.clone(), mult));
        rates.push(rate);
        rates.push(dual);
    }
    ConeOperatorSpec::new(1, true, modes, Coverage::Truncated)
}

/// Random `(r, c1, c2)` with `h^1(End E) >= 0`, i.e. `2 r c2 − (r−1) c1^2 >= r^2 − 1`.
pub fn random_stable_chern(rng: &mut impl Rng, rank: u32) -> ChernData {
    let r = i64::from(rank);
    let c1 = rng.gen_range(-3..=3i64);
    let need = r * r - 1 + (r - 1) * c1 * c1;
    let min_c2 = (need + 2 * r - 1).div_euclid(2 * r);
    let c2 = min_c2 + rng.gen_range(0..=6);
    ChernData::new(rank, c1, rational(c2, 1), Stability::Stable).expect("rank is positive")
}

/// Admissible stabilizer dimensions `[max(0, 8 − 2h^1(End E)), 8]`.
pub fn stab_range(e: &BundleExpr) -> Result<(u32, u32)> {
    let k = kernel_dims_from_cohomology(e)?;
    let lo = (i64::from(SU3_DIM) - k.get(-1) as i64).max(0) as u32;
    Ok((lo, SU3_DIM))
}

fn catalog() -> Vec<BundleExpr> {
    let mut out = vec![BundleExpr::Tangent];
    for c2 in 1..=6 {
        out.push(BundleExpr::Abstract(
            ChernData::new(2, 0, rational(c2, 1), Stability::Stable).expect("rank 2"),
        ));
    }
    out
}

fn duality_involution(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("duality-involution").run(|s| {
        let mut rng = ChaCha8Rng::seed_from_u64(inputs.seed);
        for _ in 0..200 {
            let r = if rng.gen_bool(0.5) {
                Rate::ratio(rng.gen_range(-200..200), rng.gen_range(1..30))
            } else {
                Rate::surd(
                    rational(rng.gen_range(-20..20), 2),
                    rational(rng.gen_range(1..9), 3),
                    7,
                )
            };
            s.check(r.dual().dual() == r, || format!("dual(dual({r})) != {r}"));
            s.check(r.add(&r.dual()) == Rate::int(-5), || {
                format!("{r} + dual({r}) != -5")
            });
        }
        let set = critical_rates(
            &inputs.fs_operator,
            &Window::open(Rate::int(-5), Rate::int(0))?,
        )?;
        for e in set.entries() {
            let d = set.kernel_dim_at(&e.rate.dual());
            s.check(d == e.kernel_dim, || {
                format!(
                    "dim K at {} is {} but at its dual {d}",
                    e.rate, e.kernel_dim
                )
            });
        }
        for e in catalog() {
            let k = kernel_dims_from_cohomology(&e)?;
            for (a, b) in [(-4, -1), (-3, -2)] {
                s.check(k.get(a) == k.get(b), || {
                    format!("{e}: dim K_{a} != dim K_{b}")
                });
            }
        }
        Ok(())
    })
}

fn index_antisymmetry(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("index-antisymmetry").run(|s| {
        let mut rng = ChaCha8Rng::seed_from_u64(inputs.seed ^ 0xa5a5);
        let mut skipped = 0;
        for _ in 0..inputs.spectra {
            let op = random_self_adjoint_spectrum(&mut rng)?;
            let mut done = 0;
            while done < inputs.weights_per_spectrum {
                let lambda = Rate::ratio(rng.gen_range(-7 * 97..2 * 97), 97);
                if homogeneous_kernel_dim(&op, &lambda) > 0
                    || homogeneous_kernel_dim(&op, &lambda.dual()) > 0
                {
                    skipped += 1;
                    continue;
                }
                let a = selfadjoint_index(&op, &WeightVector::single(lambda.clone()))?;
                let b = selfadjoint_index(&op, &WeightVector::single(lambda.dual()))?;
                s.check(a + b == 0, || {
                    format!("index({lambda}) = {a} but index({}) = {b}", lambda.dual())
                });
                done += 1;
            }
        }
        s.note = format!("{skipped} critical weights resampled");
        Ok(())
    })
}

fn serre_symmetry() -> SuiteResult {
    Suite::new("serre-symmetry").run(|s| {
        for e in catalog() {
            for k in -3..=0 {
                let a = cohomology(&BundleExpr::end_twist(e.clone(), k))?;
                let b = cohomology(&BundleExpr::end_twist(e.clone(), -3 - k))?;
                s.check(a.h1 == b.h1, || {
                    format!(
                        "h1((End {e})({k})) = {} but h1((End {e})({})) = {}",
                        a.h1,
                        -3 - k,
                        b.h1
                    )
                });
            }
        }
        Ok(())
    })
}

/// Degree-`k` monomials in three variables, counted one by one.
fn monomial_count(k: i64) -> u64 {
    let mut n = 0;
    for a in 0..=k {
        for b in 0..=k - a {
            let c = k - a - b;
            if c >= 0 {
                n += 1;
            }
        }
    }
    n
}

fn bott_monomials() -> SuiteResult {
    Suite::new("bott-monomials").run(|s| {
        for k in 0..=10 {
            let h0 = bott_cohomology(0, k).h0;
            s.check(h0 == monomial_count(k), || {
                format!("h0(O({k})) = {h0}, expected {}", monomial_count(k))
            });
        }
        for k in -13..=-3 {
            let h2 = bott_cohomology(0, k).h2;
            let dual = bott_cohomology(0, -3 - k).h0;
            s.check(h2 == dual, || {
                format!("h2(O({k})) = {h2} but h0(O({})) = {dual}", -3 - k)
            });
        }
        for p in 0..=2u32 {
            for k in -8..=8 {
                let e = match p {
                    0 => BundleExpr::Line(k),
                    1 => BundleExpr::Cotangent.twist(k),
                    _ => BundleExpr::Line(k - 3),
                };
                let v = bott_cohomology(p, k);
                let chi = e.euler_characteristic()?;
                s.check(v.euler_characteristic() == chi, || {
                    format!("Bott and Riemann-Roch disagree on Ω^{p}({k})")
                });
            }
        }
        Ok(())
    })
}

fn radial_residuals(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("radial-residuals").run(|s| {
        let grid: Vec<f64> = (0..25)
            .map(|i| 10f64.powf(-2.0 + 4.0 * f64::from(i) / 24.0))
            .collect();
        for op in [&inputs.laplacian, &inputs.fs_operator] {
            for j in 0..op.modes().len() {
                for root in op.mode_roots(j)? {
                    let r = radial_residual(op, j, &root, &grid)?;
                    s.residual(r);
                    s.check(r < inputs.tol, || {
                        format!(
                            "mode {j}, rate {root}: residual {r:.3e} exceeds {:.1e}",
                            inputs.tol
                        )
                    });
                }
            }
        }
        Ok(())
    })
}

fn laplacian_gap(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("laplacian-gap").run(|s| {
        let set = critical_rates(
            &inputs.laplacian,
            &Window::open(Rate::int(-4), Rate::int(0))?,
        )?;
        s.check(set.is_empty(), || {
            format!("{} critical rates inside (-4, 0)", set.entries().len())
        });
        s.check(set.is_complete(), || {
            "the mode list does not certify (-4, 0)".into()
        });
        Ok(())
    })
}

fn fs_config(n: usize) -> Result<ModuliConfig> {
    ModuliConfig::new(
        vec![TangentConeSpec::fubini_study(Rate::ratio(-1, 2)); n],
        StructureGroup::Pu { n: 2 },
    )
}

fn fs_end_to_end(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("fs-end-to-end").run(|s| {
        let set = critical_rates(
            &inputs.fs_operator,
            &Window::closed(Rate::int(-4), Rate::int(-1))?,
        )?;
        let rates = set.rates();
        s.check(rates == [Rate::int(-3), Rate::int(-2)], || {
            format!("critical rates in [-4, -1] are {rates:?}")
        });
        let bar = mu_bar(&inputs.fs_operator)?;
        let err = (bar.value.to_f64() - (2.0 * 2f64.sqrt() - 3.0)).abs();
        s.residual(err);
        s.check(err < 1e-9, || {
            format!("mu_bar = {} is off by {err:.3e}", bar.value)
        });
        let v = cohomology(&"End(T)(-1)".parse()?)?;
        s.check((v.h0, v.h1, v.h2) == (0, 3, 0), || {
            format!("End(T)(-1) has cohomology {v:?}")
        });
        for n in 1..=3 {
            let c = fs_config(n)?;
            let g = virt_dim_general(&c)?;
            s.check(g == 0, || format!("N = {n}: virtual dimension {g}"));
            let r = classify_rigidity(&c)?;
            s.check(r == Rigidity::ZeroDimensionalFs, || {
                format!("N = {n}: rigidity {r:?}")
            });
        }
        let o = obstruction_dims(&fs_config(1)?, true)?;
        s.check(
            o == Obstruction::Available {
                ker_dim: 0,
                coker_dim: 0,
            },
            || format!("obstruction {o:?}"),
        );
        Ok(())
    })
}

fn cross_formula(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("cross-formula-agreement").run(|s| {
        let set = critical_rates(
            &inputs.fs_operator,
            &Window::open(Rate::int(-5), Rate::int(0))?,
        )?;
        let bar = mu_bar_from_rates(&set);
        s.check(bar.certified, || {
            "the FS rate data do not certify (-1, 0)".into()
        });
        for n in 1..=3 {
            let from_rates = ModuliConfig::new(
                vec![TangentConeSpec::rates(set.clone(), SU3_DIM, Rate::ratio(-1, 2)); n],
                StructureGroup::Pu { n: 2 },
            )?;
            let from_bundle = ModuliConfig::new(
                vec![TangentConeSpec::bundle(BundleExpr::Tangent, SU3_DIM, Rate::ratio(-1, 2)); n],
                StructureGroup::Pu { n: 2 },
            )?;
            let g = virt_dim_general(&from_rates)?;
            let p = virt_dim_pun(&from_bundle)?;
            s.check(g == p, || {
                format!("FS, N = {n}: general formula {g}, PU(n) formula {p}")
            });
        }
        for e in catalog() {
            let (lo, hi) = stab_range(&e)?;
            for stab in [lo, hi] {
                let c = ModuliConfig::new(
                    vec![TangentConeSpec::bundle(e.clone(), stab, Rate::ratio(-1, 2))],
                    StructureGroup::Pu { n: 2 },
                )?;
                let g = virt_dim_general(&c)?;
                let p = virt_dim_pun(&c)?;
                s.check(g == p, || {
                    format!("{e}, stab {stab}: general formula {g}, PU(n) formula {p}")
                });
            }
        }
        Ok(())
    })
}

fn matrix_duality(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("matrix-model-duality").run(|s| {
        let check = eigen_duality_check(&inputs.duality_j, &inputs.duality_m)?;
        s.residual(check.anticommutator_residual.max(check.map_residual));
        s.check(check.anticommutator_residual <= 1e-12, || {
            format!("JM + MJ + 5J = {:.3e}", check.anticommutator_residual)
        });
        for p in &check.pairs {
            s.check((p.lambda + p.dual + 5.0).abs() < inputs.tol, || {
                format!("pair ({}, {}) is not dual", p.lambda, p.dual)
            });
        }
        let (j, m) = block_model(&[-2.0, -1.5, -0.5]);
        let block = eigen_duality_check(&j, &m)?;
        s.check(block.pairs.len() == 3, || {
            format!("block model paired {} eigenvalues", block.pairs.len())
        });
        Ok(())
    })
}

fn non_positivity(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("non-positivity").run(|s| {
        let mut rng = ChaCha8Rng::seed_from_u64(inputs.seed ^ 0x7e57);
        let mut zeros = 0;
        for i in 0..inputs.chern_samples {
            let rank = [2u32, 2, 3, 4][rng.gen_range(0..4)];
            let n = rng.gen_range(1..=3);
            let mut points = Vec::new();
            let mut all_fs = true;
            for _ in 0..n {
                let e = if rank == 2 && rng.gen_bool(0.15) {
                    BundleExpr::Tangent
                } else {
                    BundleExpr::Abstract(random_stable_chern(&mut rng, rank))
                };
                let (lo, hi) = stab_range(&e)?;
                let stab = rng.gen_range(lo..=hi);
                let ch = e.chern_character();
                all_fs &= ch.rank == 2 && ch.discriminant() == rational(3, 1) && stab == SU3_DIM;
                points.push(TangentConeSpec::bundle(e, stab, Rate::ratio(-1, 2)));
            }
            let c = ModuliConfig::new(points, StructureGroup::Pu { n: rank })?;
            let v = virt_dim_pun(&c)?;
            s.check(v <= 0, || {
                format!("sample {i}: PU(n) virtual dimension {v} is positive")
            });
            s.check((v == 0) == all_fs, || {
                format!("sample {i}: virtual dimension {v}, Fubini-Study type {all_fs}")
            });
            zeros += u64::from(v == 0);
        }
        s.note = format!("{zeros} samples at equality");
        Ok(())
    })
}

fn obstruction_consistency(inputs: &VerifyInputs) -> SuiteResult {
    Suite::new("obstruction-consistency").run(|s| {
        let mut configs = vec![fs_config(1)?, fs_config(2)?];
        let mut rng = ChaCha8Rng::seed_from_u64(inputs.seed ^ 0x0b5);
        for _ in 0..20 {
            let e = BundleExpr::Abstract(random_stable_chern(&mut rng, 2));
            let (lo, hi) = stab_range(&e)?;
            let stab = rng.gen_range(lo..=hi);
            configs.push(ModuliConfig::new(
                vec![
                    TangentConeSpec::bundle(e, stab, Rate::ratio(-1, 2)),
                    TangentConeSpec::fubini_study(Rate::ratio(-1, 2)),
                ],
                StructureGroup::Pu { n: 2 },
            )?);
        }
        for c in &configs {
            let v = virt_dim_general(c)?;
            match obstruction_dims(c, true)? {
                Obstruction::Available { ker_dim, coker_dim } => {
                    s.check(ker_dim == 0 && coker_dim as i64 == -v, || {
                        format!("coker {coker_dim} vs virtual dimension {v}")
                    });
                }
                Obstruction::Unavailable { reason } => s.check(false, || reason),
            }
        }
        Ok(())
    })
}

pub fn verify(inputs: &VerifyInputs) -> VerifySummary {
    let suites = vec![
        duality_involution(inputs),
        index_antisymmetry(inputs),
        serre_symmetry(),
        bott_monomials(),
        radial_residuals(inputs),
        laplacian_gap(inputs),
        fs_end_to_end(inputs),
        cross_formula(inputs),
        matrix_duality(inputs),
        non_positivity(inputs),
        obstruction_consistency(inputs),
    ];
    let first_failure = suites
        .iter()
        .find(|s| !s.passed)
        .map(|s| format!("{}: {}", s.name, s.detail));
    VerifySummary {
        passed: first_failure.is_none(),
        suites,
        first_failure,
    }
}

/// FS operator with the kernel dimension at `rate` replaced by `dim`.
pub fn with_kernel_dim(op: &ConeOperatorSpec, rate: &Rate, dim: u64) -> Result<ConeOperatorSpec> {
    let mut found = false;
    let modes = op
        .modes()
        .iter()
        .map(|m| {
            let mut m = m.clone();
            if m.coefficients.len() == 2 && m.coefficients[0].neg().approx_eq(rate) {
                m.multiplicity = dim;
                found = true;
            }
            m
        })
        .collect();
    if !found {
        return Err(Error::Precondition(format!(
            "no first-order mode with root {rate}"
        )));
    }
    ConeOperatorSpec::new(op.order(), op.self_adjoint(), modes, op.coverage().clone())
}
