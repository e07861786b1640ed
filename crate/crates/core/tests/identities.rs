//! Seeded sweeps of the equivalence identities across the whole catalog
//! and every built-in profile shape.

use finsler_core::sample;
use finsler_core::{
    catalog, check_conditional_equivalence, check_point_equivalence, run_verification,
    AlphaBetaMetric, InnerProduct, IpDomain, PhiFunction, Vector,
};

struct Case {
    name: &'static str,
    domain: IpDomain,
}

const CASES: [Case; 5] = [
    Case {
        name: "su2",
        domain: IpDomain::Ambient,
    },
    Case {
        name: "heis3",
        domain: IpDomain::Ambient,
    },
    Case {
        name: "su2r",
        domain: IpDomain::Ambient,
    },
    Case {
        name: "abelian(4)",
        domain: IpDomain::Ambient,
    },
    Case {
        name: "so3r_so2",
        domain: IpDomain::MRestricted,
    },
];

fn profiles() -> Vec<PhiFunction> {
    vec![
        PhiFunction::riemannian(),
        PhiFunction::randers(),
        PhiFunction::polynomial(vec![1.0, 1.0, 0.1], 1.0).unwrap(),
    ]
}

fn build(case: &Case, phi: PhiFunction, seed: u64) -> AlphaBetaMetric {
    let (alg, dec) = catalog(case.name).unwrap();
    let mut rng = sample::rng(seed);
    let fdim = match case.domain {
        IpDomain::Ambient => alg.dim(),
        IpDomain::MRestricted => dec.m_dim(),
    };
    let a = sample::spd(fdim, case.domain, &mut rng);
    // Stay well inside the convexity bound; profiles here are valid up to
    // b0 = 1 at least.
    let x = sample::x_with_norm(&dec, &a, 0.35, &mut rng).unwrap();
    AlphaBetaMetric::new(&alg, &dec, a, x, phi).unwrap()
}

#[test]
fn bracket_identities_hold_across_the_catalog() {
    for case in &CASES {
        for (k, phi) in profiles().into_iter().enumerate() {
            let metric = build(case, phi, 40 + k as u64);
            let dec = metric.decomposition();
            let a = metric.inner_product();
            let mut rng = sample::rng(7000 + k as u64);
            for _ in 0..40 {
                let y = sample::direction_in_m(dec, a, &mut rng).unwrap();
                let eq = check_conditional_equivalence(&metric, &y, 1e-10).unwrap();
                assert!(
                    eq.identity_residual <= 1e-10,
                    "{} profile {k}: identity residual {}",
                    case.name,
                    eq.identity_residual
                );
                if eq.hypotheses_hold {
                    assert!(eq.verdicts_agree, "{} profile {k}", case.name);
                    assert_eq!(eq.factor_positive, Some(true));
                    assert!(eq.reduced_residual.unwrap() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn point_equivalence_holds_across_the_catalog() {
    for case in &CASES {
        for (k, phi) in profiles().into_iter().enumerate() {
            let metric = build(case, phi, 80 + k as u64);
            let eq = check_point_equivalence(&metric, 1e-10).unwrap();
            assert!(
                eq.identity_residual <= 1e-10,
                "{} profile {k}: residual {}",
                case.name,
                eq.identity_residual
            );
            assert!(eq.verdicts_agree, "{} profile {k}", case.name);
        }
    }
}

#[test]
fn verification_suite_passes_on_catalog_bundles() {
    for case in &CASES {
        for (k, phi) in profiles().into_iter().enumerate() {
            let metric = build(case, phi, 120 + k as u64);
            let rows = run_verification(&metric, 40, 9 + k as u64).unwrap();
            for row in rows {
                assert!(
                    row.pass,
                    "{} profile {k}: row {} residual {} > {}",
                    case.name, row.id, row.residual, row.tolerance
                );
            }
        }
    }
}

#[test]
fn verification_suite_passes_on_identity_form_bundles() {
    // The hand catalogs with their natural forms, including central-X
    // bi-invariant setups that activate the lemma and curvature rows.
    let setups: [(&str, Vec<f64>, IpDomain); 4] = [
        ("su2", vec![0.0, 0.0, 0.0], IpDomain::Ambient),
        ("su2r", vec![0.0, 0.0, 0.0, 0.4], IpDomain::Ambient),
        ("heis3", vec![0.0, 0.0, 0.3], IpDomain::Ambient),
        ("so3r_so2", vec![0.0, 0.0, 0.0, 0.3], IpDomain::MRestricted),
    ];
    for (name, x, domain) in setups {
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
            PhiFunction::randers(),
        )
        .unwrap();
        let rows = run_verification(&metric, 50, 31).unwrap();
        assert!(!rows.is_empty());
        for row in rows {
            assert!(
                row.pass,
                "{name}: row {} residual {} > {}",
                row.id, row.residual, row.tolerance
            );
        }
    }
}
