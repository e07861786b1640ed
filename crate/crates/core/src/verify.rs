//! Self-verification suite: every closed-form path in the crate replayed
//! against an independent route on randomized inputs.
//!
//! Rows are implementation-correctness claims for the given bundle, not
//! structural checks of the input (the Jacobi identity, positive
//! definiteness and friends are the `check` reports). A row that needs
//! hypotheses the bundle does not satisfy is skipped rather than failed:
//! the suite stays green on every admissible bundle.

use crate::alpha_beta::AlphaBetaMetric;
use crate::curvature::{
    check_biinvariance_lemma_with, flag_curvature_closed, flag_curvature_general,
    is_berwald_candidate, riemann_biinvariant,
};
use crate::error::Result;
use crate::geodesic::{
    check_conditional_equivalence, check_point_equivalence, is_geodesic_finsler,
    is_geodesic_riemannian, Quantifier,
};
use crate::lie::Vector;
use crate::metric::{check_ad_skew, IpDomain};
use crate::phi::PhiFunction;
use crate::sample;

/// One verification row, shaped for delimited emission.
#[derive(Debug, Clone)]
pub struct CheckRow {
    pub id: &'static str,
    pub inputs: String,
    /// Representative magnitude of the quantity under test.
    pub value: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    fn new(id: &'static str, inputs: String, value: f64, residual: f64, tol: f64) -> CheckRow {
        CheckRow {
            id,
            inputs,
            value,
            residual,
            tolerance: tol,
            pass: residual <= tol,
        }
    }
}

const ORACLE_TOL: f64 = 1e-6;
const IDENTITY_TOL: f64 = 1e-10;
const EXACT_TOL: f64 = 1e-12;
const CURVATURE_TOL: f64 = 1e-9;

/// Runs the randomized cross-checks on one metric bundle. Deterministic
/// given (samples, seed).
pub fn run_verification(
    metric: &AlphaBetaMetric,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckRow>> {
    let mut rng = sample::rng(seed);
    let alg = metric.algebra();
    let dec = metric.decomposition();
    let a = metric.inner_product();
    let inputs = format!("samples={samples} seed={seed}");
    let mut rows = Vec::new();

    // Closed-form fundamental tensor against the finite-difference route.
    {
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for _ in 0..samples {
            let y = sample::direction_in_m(dec, a, &mut rng)?;
            let u = sample::in_m(dec, &mut rng);
            let v = sample::in_m(dec, &mut rng);
            let closed = metric.fundamental_form(&y, &u, &v)?;
            let fd = metric.fundamental_form_fd(&y, &u, &v)?;
            worst = worst.max((closed - fd).abs() / (1.0 + closed.abs()));
            scale = scale.max(closed.abs());
        }
        rows.push(CheckRow::new(
            "tensor_oracle",
            inputs.clone(),
            scale,
            worst,
            ORACLE_TOL,
        ));
    }

    // Symmetry, bilinearity, positive 0-homogeneity in the base direction.
    {
        let mut sym = 0.0f64;
        let mut lin = 0.0f64;
        let mut hom = 0.0f64;
        for _ in 0..samples {
            let y = sample::direction_in_m(dec, a, &mut rng)?;
            let u = sample::in_m(dec, &mut rng);
            let v = sample::in_m(dec, &mut rng);
            let w = sample::in_m(dec, &mut rng);
            let guv = metric.fundamental_form(&y, &u, &v)?;
            sym = sym.max((guv - metric.fundamental_form(&y, &v, &u)?).abs());
            let c = 0.7;
            let combo = u.scale(c).add(&w);
            let lhs = metric.fundamental_form(&y, &combo, &v)?;
            let rhs = c * guv + metric.fundamental_form(&y, &w, &v)?;
            lin = lin.max((lhs - rhs).abs());
            for lambda in [0.5, 3.0] {
                let scaled = metric.fundamental_form(&y.scale(lambda), &u, &v)?;
                hom = hom.max((scaled - guv).abs());
            }
        }
        rows.push(CheckRow::new(
            "tensor_symmetry",
            inputs.clone(),
            0.0,
            sym,
            EXACT_TOL,
        ));
        rows.push(CheckRow::new(
            "tensor_bilinearity",
            inputs.clone(),
            0.0,
            lin,
            IDENTITY_TOL,
        ));
        rows.push(CheckRow::new(
            "tensor_homogeneity",
            inputs.clone(),
            0.0,
            hom,
            IDENTITY_TOL,
        ));
    }

    // g_y(y,y) recovers the squared norm.
    {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let y = sample::direction_in_m(dec, a, &mut rng)?;
            let g = metric.fundamental_form(&y, &y, &y)?;
            let f2 = metric.eval_f_squared(&y)?;
            worst = worst.max((g - f2).abs() / (1.0 + f2));
        }
        rows.push(CheckRow::new(
            "energy_identity",
            inputs.clone(),
            0.0,
            worst,
            IDENTITY_TOL,
        ));
    }

    // The bracket pairing g_y(y, [y,z]): closed shortcut against the
    // tensor on groups, the projected identity on proper quotients.
    {
        let mut worst = 0.0f64;
        if dec.is_trivial() {
            for _ in 0..samples {
                let y = sample::direction_in_m(dec, a, &mut rng)?;
                let z = sample::vector(alg.dim(), &mut rng);
                let shortcut = metric.g_y_y_bracket(&y, &z)?;
                let bracket = alg.bracket(&y, &z)?;
                let direct = metric.fundamental_form(&y, &y, &bracket)?;
                worst = worst.max((shortcut - direct).abs());
            }
        } else {
            for _ in 0..samples {
                let y = sample::direction_in_m(dec, a, &mut rng)?;
                let eq = check_conditional_equivalence(metric, &y, IDENTITY_TOL)?;
                worst = worst.max(eq.identity_residual);
            }
        }
        rows.push(CheckRow::new(
            "bracket_identity",
            inputs.clone(),
            0.0,
            worst,
            IDENTITY_TOL,
        ));
    }

    // Pointwise equivalence at the metric's own X.
    if metric.x_m().iter().any(|c| c.abs() > 0.0) {
        let eq = check_point_equivalence(metric, IDENTITY_TOL)?;
        let residual = if eq.verdicts_agree {
            eq.identity_residual
        } else {
            f64::INFINITY
        };
        rows.push(CheckRow::new(
            "point_equivalence",
            inputs.clone(),
            eq.riemannian.residual,
            residual,
            IDENTITY_TOL,
        ));
    }

    // phi == 1 collapses the tensor to a itself.
    {
        let twin = AlphaBetaMetric::new(
            alg,
            dec,
            a.clone(),
            metric.x().clone(),
            PhiFunction::riemannian(),
        )?;
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let y = sample::direction_in_m(dec, a, &mut rng)?;
            let u = sample::in_m(dec, &mut rng);
            let v = sample::in_m(dec, &mut rng);
            let g = twin.fundamental_form(&y, &u, &v)?;
            worst = worst.max((g - twin.inner_m(&u, &v)?).abs());
        }
        rows.push(CheckRow::new(
            "riemannian_collapse",
            inputs.clone(),
            0.0,
            worst,
            EXACT_TOL,
        ));
    }

    // Finsler criterion quantified over g versus over m. Meaningful when
    // the direction field descends to the quotient: trivial isotropy, or
    // X fixed by it ([h, X] back in h).
    let x_h_fixed = dec.is_trivial() || {
        let mut worst = 0.0f64;
        for h in dec.h_basis() {
            let bracket = alg.bracket(h, metric.x())?;
            let bm = dec.m_coords(&bracket)?;
            worst = worst.max(bm.iter().fold(0.0f64, |m, c| m.max(c.abs())));
        }
        worst <= EXACT_TOL
    };
    if x_h_fixed {
        let mut disagreements = 0usize;
        for _ in 0..samples {
            let y = sample::direction_in_m(dec, a, &mut rng)?;
            let over_g = is_geodesic_finsler(metric, &y, IDENTITY_TOL, Quantifier::OverG)?;
            let over_m = is_geodesic_finsler(metric, &y, IDENTITY_TOL, Quantifier::OverM)?;
            if over_g.verdict != over_m.verdict {
                disagreements += 1;
            }
        }
        rows.push(CheckRow::new(
            "quantifier_agreement",
            inputs.clone(),
            samples as f64,
            disagreements as f64,
            0.0,
        ));
    }

    // Bi-invariant consequences, where the bundle supplies the hypotheses.
    let ad_skew_pass = a.domain() == IpDomain::Ambient && check_ad_skew(alg, a)?.pass;
    if ad_skew_pass && dec.is_trivial() {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let x = sample::direction_in_m(dec, a, &mut rng)?;
            let outcome = is_geodesic_riemannian(alg, dec, a, &x, EXACT_TOL)?;
            worst = worst.max(outcome.residual);
        }
        rows.push(CheckRow::new(
            "biinvariant_geodesics",
            inputs.clone(),
            0.0,
            worst,
            EXACT_TOL,
        ));
    }
    if ad_skew_pass && is_berwald_candidate(alg, metric.x())? {
        let lemma = check_biinvariance_lemma_with(metric, samples, seed ^ 0x9e37, IDENTITY_TOL)?;
        rows.push(CheckRow::new(
            "biinvariance_lemma",
            inputs.clone(),
            0.0,
            lemma.max_residual,
            IDENTITY_TOL,
        ));

        if alg.dim() >= 2 {
            let mut worst = 0.0f64;
            let mut scale = 0.0f64;
            for _ in 0..samples {
                let flag = sample::orthonormal_flag(a, &mut rng)?;
                let closed = flag_curvature_closed(metric, &flag)?;
                let r: Vector = riemann_biinvariant(alg, flag.u(), flag.y())?;
                let general = flag_curvature_general(metric, &flag, &r)?;
                worst = worst.max((closed.value - general).abs());
                scale = scale.max(closed.value.abs());
            }
            rows.push(CheckRow::new(
                "curvature_agreement",
                inputs.clone(),
                scale,
                worst,
                CURVATURE_TOL,
            ));
        }
    }

    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;
    use crate::metric::InnerProduct;

    fn rows_for(name: &str, x: Vec<f64>, phi: PhiFunction, domain: IpDomain) -> Vec<CheckRow> {
        let (alg, dec) = catalog(name).unwrap();
        let fdim = match domain {
            IpDomain::Ambient => alg.dim(),
            IpDomain::MRestricted => dec.m_dim(),
        };
        let metric = AlphaBetaMetric::new(
            &alg,
            &dec,
            InnerProduct::identity(fdim, domain),
            Vector::new(x),
            phi,
        )
        .unwrap();
        run_verification(&metric, 60, 2024).unwrap()
    }

    fn assert_all_pass(rows: &[CheckRow]) {
        for row in rows {
            assert!(
                row.pass,
                "{} failed: residual {} > {}",
                row.id, row.residual, row.tolerance
            );
        }
    }

    #[test]
    fn full_suite_on_biinvariant_randers() {
        let rows = rows_for(
            "su2r",
            vec![0.0, 0.0, 0.0, 0.4],
            PhiFunction::randers(),
            IpDomain::Ambient,
        );
        assert_all_pass(&rows);
        // All hypothesis-gated rows are applicable here.
        for id in [
            "tensor_oracle",
            "point_equivalence",
            "quantifier_agreement",
            "biinvariant_geodesics",
            "biinvariance_lemma",
            "curvature_agreement",
        ] {
            assert!(rows.iter().any(|r| r.id == id), "missing row {id}");
        }
    }

    #[test]
    fn suite_skips_rows_without_hypotheses() {
        // heis3: identity form is not ad-skew, X not central; the
        // bi-invariant rows must be absent and everything else green.
        let rows = rows_for(
            "heis3",
            vec![0.3, 0.0, 0.0],
            PhiFunction::randers(),
            IpDomain::Ambient,
        );
        assert_all_pass(&rows);
        assert!(rows.iter().all(|r| r.id != "biinvariance_lemma"));
        assert!(rows.iter().all(|r| r.id != "curvature_agreement"));
        assert!(rows.iter().any(|r| r.id == "quantifier_agreement"));
    }

    #[test]
    fn suite_on_proper_quotient() {
        let rows = rows_for(
            "so3r_so2",
            vec![0.0, 0.0, 0.0, 0.3],
            PhiFunction::randers(),
            IpDomain::MRestricted,
        );
        assert_all_pass(&rows);
        // Central X descends, so the quantifier row applies even with
        // nontrivial isotropy.
        assert!(rows.iter().any(|r| r.id == "quantifier_agreement"));
        assert!(rows.iter().any(|r| r.id == "bracket_identity"));
    }

    #[test]
    fn quantifier_row_skipped_for_nondescending_x() {
        // X = 0.3 e1 on so3r_so2 is rotated by the isotropy, so over-g and
        // over-m genuinely differ; the row must be skipped, not failed.
        let rows = rows_for(
            "so3r_so2",
            vec![0.3, 0.0, 0.0, 0.0],
            PhiFunction::randers(),
            IpDomain::MRestricted,
        );
        assert_all_pass(&rows);
        assert!(rows.iter().all(|r| r.id != "quantifier_agreement"));
    }

    #[test]
    fn deterministic_given_seed() {
        let run = || {
            rows_for(
                "su2",
                vec![0.2, 0.1, 0.0],
                PhiFunction::randers(),
                IpDomain::Ambient,
            )
            .iter()
            .map(|r| (r.id, r.residual.to_bits()))
            .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}
