//! Command implementations. Every command reduces to a list of check rows;
//! main.rs picks the renderer and the exit code.

use finsler_core::{
    check_ad_skew, check_h_invariance, check_phi_condition, find_geodesic_vectors_finsler,
    find_geodesic_vectors_riemannian, flag_curvature_closed, flag_curvature_general,
    geodesic_report, riemann_biinvariant, run_verification, CheckRow, Flag, GeodesicVectorSet,
    IpDomain, Quantifier, SearchOptions, Vector, Verdict,
};

use crate::model::ModelBundle;

pub const FLAG_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Riemannian,
    Finsler,
}

impl SearchMode {
    fn name(self) -> &'static str {
        match self {
            SearchMode::Riemannian => "riemannian",
            SearchMode::Finsler => "finsler",
        }
    }
}

fn csv(coords: &[f64]) -> String {
    coords
        .iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Structural report: everything is informational, so a failing row does not
/// fail the command. A bundle that parses always produces all rows.
pub fn check(bundle: &ModelBundle) -> Result<Vec<CheckRow>, String> {
    let metric = bundle.build_metric().map_err(|e| e.to_string())?;
    let alg = &bundle.algebra;
    let mut rows = Vec::new();

    let jacobi = alg.check_jacobi();
    let (i, j, k) = jacobi.worst_triple;
    rows.push(CheckRow {
        id: "jacobi",
        inputs: format!("dim={}; worst=(e{}, e{}, e{})", alg.dim(), i + 1, j + 1, k + 1),
        value: jacobi.max_residual,
        residual: jacobi.max_residual,
        tolerance: jacobi.tolerance,
        pass: jacobi.pass,
    });

    let eigen = bundle.a.matrix().clone().symmetric_eigen();
    let min_eig = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    rows.push(CheckRow {
        id: "gram_pd",
        inputs: format!("size={}", bundle.a.dim()),
        value: min_eig,
        residual: (-min_eig).max(0.0),
        tolerance: 0.0,
        pass: min_eig > 0.0,
    });

    match bundle.a.domain() {
        IpDomain::Ambient => {
            let skew = check_ad_skew(alg, &bundle.a).map_err(|e| e.to_string())?;
            let (i, j, k) = skew.worst_triple;
            rows.push(CheckRow {
                id: "ad_skew",
                inputs: format!("worst=(e{}, e{}, e{})", i + 1, j + 1, k + 1),
                value: skew.max_residual,
                residual: skew.max_residual,
                tolerance: skew.tolerance,
                pass: skew.pass,
            });
        }
        IpDomain::MRestricted => {
            let inv =
                check_h_invariance(alg, &bundle.dec, &bundle.a).map_err(|e| e.to_string())?;
            let (w, x, y) = inv.worst;
            rows.push(CheckRow {
                id: "h_invariance",
                inputs: format!("worst=(h{}, m{}, m{})", w + 1, x + 1, y + 1),
                value: inv.max_residual,
                residual: inv.max_residual,
                tolerance: inv.tolerance,
                pass: inv.pass,
            });
        }
    }

    let condition = check_phi_condition(&bundle.phi, metric.b()).map_err(|e| e.to_string())?;
    rows.push(CheckRow {
        id: "phi_condition",
        inputs: format!(
            "phi={}; b={}; argmin={}",
            bundle.phi.kind_name(),
            condition.b,
            condition.argmin
        ),
        value: condition.min_value,
        residual: (-condition.min_value).max(0.0),
        tolerance: 0.0,
        pass: condition.pass,
    });

    Ok(rows)
}

/// Runs both geodesic criteria on one vector. The pass column records the
/// verdict, not a command failure.
pub fn gv_test(bundle: &ModelBundle, y: &Vector) -> Result<Vec<CheckRow>, String> {
    let metric = bundle.build_metric().map_err(|e| e.to_string())?;
    let report = geodesic_report(&metric, y, bundle.tol).map_err(|e| e.to_string())?;
    let row = |id: &'static str, outcome: &finsler_core::PredicateOutcome| CheckRow {
        id,
        inputs: format!("y={}; verdict={:?}", csv(y.coords()), outcome.verdict),
        value: outcome.residual,
        residual: outcome.residual,
        tolerance: outcome.tolerance,
        pass: outcome.verdict == Verdict::Geodesic,
    };
    Ok(vec![
        row("gv_riemannian", &report.riemannian),
        row("gv_finsler", &report.finsler),
    ])
}

pub fn gv_find(
    bundle: &ModelBundle,
    mode: SearchMode,
    resolution: usize,
    seed: u64,
) -> Result<Vec<CheckRow>, String> {
    let opts = SearchOptions {
        resolution,
        seed,
        ..SearchOptions::default()
    };
    let set = match mode {
        SearchMode::Riemannian => find_geodesic_vectors_riemannian(
            &bundle.algebra,
            &bundle.dec,
            &bundle.a,
            &opts,
        ),
        SearchMode::Finsler => {
            let metric = bundle.build_metric().map_err(|e| e.to_string())?;
            find_geodesic_vectors_finsler(&metric, Quantifier::OverG, &opts)
        }
    }
    .map_err(|e| e.to_string())?;

    let mut rows = Vec::new();
    match set {
        GeodesicVectorSet::All { passing_fraction } => rows.push(CheckRow {
            id: "all",
            inputs: format!("mode={}; resolution={resolution}", mode.name()),
            value: passing_fraction,
            residual: 0.0,
            tolerance: opts.tol,
            pass: true,
        }),
        GeodesicVectorSet::Representatives(points) => {
            rows.push(CheckRow {
                id: "count",
                inputs: format!("mode={}; resolution={resolution}", mode.name()),
                value: points.len() as f64,
                residual: 0.0,
                tolerance: opts.tol,
                pass: true,
            });
            for p in points {
                rows.push(CheckRow {
                    id: "representative",
                    inputs: format!(
                        "mode={}; direction={}; cluster={}",
                        mode.name(),
                        csv(p.direction.coords()),
                        p.cluster_size
                    ),
                    value: p.residual,
                    residual: p.residual,
                    tolerance: opts.tol,
                    pass: p.residual <= opts.tol,
                });
            }
        }
    }
    Ok(rows)
}

/// Flag curvature by the closed expression and by the direct quotient of
/// curvature against the fundamental tensor. Only defined for bi-invariant
/// ambient forms, so that is checked up front.
pub fn flag(bundle: &ModelBundle, y: &Vector, u: &Vector) -> Result<Vec<CheckRow>, String> {
    let metric = bundle.build_metric().map_err(|e| e.to_string())?;
    if bundle.a.domain() != IpDomain::Ambient {
        return Err(
            "flag curvature needs an ambient form on the whole algebra (no h/m split)"
                .to_string(),
        );
    }
    let skew = check_ad_skew(&bundle.algebra, &bundle.a).map_err(|e| e.to_string())?;
    if !skew.pass {
        return Err(format!(
            "the form is not bi-invariant (ad-skewness residual {:.3e}); flag curvature \
             only applies to bi-invariant forms",
            skew.max_residual
        ));
    }

    let flag = Flag::orthonormalize(y, u, &bundle.a).map_err(|e| e.to_string())?;
    let inputs = format!("y={}; u={}", csv(flag.y().coords()), csv(flag.u().coords()));

    let r = riemann_biinvariant(&bundle.algebra, flag.u(), flag.y()).map_err(|e| e.to_string())?;
    let general = flag_curvature_general(&metric, &flag, &r).map_err(|e| e.to_string())?;
    let closed = flag_curvature_closed(&metric, &flag).map_err(|e| e.to_string())?;
    let difference = (general - closed.value).abs();

    Ok(vec![
        CheckRow {
            id: "flag_general",
            inputs: inputs.clone(),
            value: general,
            residual: 0.0,
            tolerance: 0.0,
            pass: true,
        },
        CheckRow {
            id: "flag_closed",
            inputs: format!(
                "{inputs}; theta={}; berwald={}",
                closed.theta, closed.berwald_candidate
            ),
            value: closed.value,
            residual: 0.0,
            tolerance: 0.0,
            pass: true,
        },
        CheckRow {
            id: "flag_difference",
            inputs,
            value: difference,
            residual: difference,
            tolerance: FLAG_AGREEMENT_TOL,
            pass: difference <= FLAG_AGREEMENT_TOL,
        },
    ])
}

pub const VERIFY_SAMPLES: usize = 200;

pub fn verify(bundle: &ModelBundle, seed: u64) -> Result<Vec<CheckRow>, String> {
    let metric = bundle.build_metric().map_err(|e| e.to_string())?;
    run_verification(&metric, VERIFY_SAMPLES, seed).map_err(|e| e.to_string())
}
