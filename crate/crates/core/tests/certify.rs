mod common;

use common::{family, family_text, q, with_c};
use opnorm_core::scalar::unit;
use opnorm_core::{
    argmax_set, certify_equality, check_wx, default_t_probes, i1_i2_residuals, sup_norm, CertVerdict,
    CertificateReport64, Complex64, ConditionStatus, SpaceSpec64, SymbolFamily64, WxVerdict,
};
use proptest::prelude::*;

const SWEEP: [f64; 12] = [-1.5, -1.25, -1.0, -0.9, -0.75, -0.5, -0.25, -0.1, 0.0, 0.25, 0.3, 0.5];

fn h2() -> SpaceSpec64 {
    SpaceSpec64::hardy(2.0).unwrap()
}

fn check_soundness(r: &CertificateReport64) {
    let gap = r.gap.as_ref().unwrap().gap;
    match r.verdict {
        CertVerdict::EqualityCertified => assert!(gap.abs() < 1e-5, "{gap}"),
        CertVerdict::StrictInequalityEvidence => assert!(gap > 1e-4, "{gap}"),
        CertVerdict::Inconclusive => {}
    }
}

fn check_decomposition(f: &SymbolFamily64, r: &CertificateReport64) {
    for c in &r.candidates {
        let (r1, r2) = i1_i2_residuals(f, &h2(), c.xi, &q()).unwrap();
        assert!((r1 - c.i1_residual).abs() < 1e-12 && (r2 - c.i2_residual).abs() < 1e-12);
    }
}

#[test]
fn example_family_verdicts() {
    for c in SWEEP {
        let f = with_c("(c+t+z)", c);
        let r = certify_equality(&f, &h2(), &q()).unwrap();
        let expected = if c > -1.0 && c < 0.0 {
            CertVerdict::StrictInequalityEvidence
        } else {
            CertVerdict::EqualityCertified
        };
        assert_eq!(r.verdict, expected, "c={c}");
        check_soundness(&r);
        check_decomposition(&f, &r);

        let fb = f.times(family("blaschke([0.5, 0.9]; 0)").body().clone());
        let rb = certify_equality(&fb, &h2(), &q()).unwrap();
        assert_eq!(rb.verdict, r.verdict, "c={c} with Blaschke factor");
        assert_eq!(rb.candidates.len(), r.candidates.len());
        for (a, b) in r.candidates.iter().zip(&rb.candidates) {
            assert!((a.i2_residual - b.i2_residual).abs() < 1e-7);
        }
    }
}

#[test]
fn phase_defect_family() {
    let f = family("exp(i*pi*t)");
    let r = certify_equality(&f, &h2(), &q()).unwrap();
    assert_eq!(r.verdict, CertVerdict::StrictInequalityEvidence);
    let c = &r.candidates[0];
    assert!((c.i1_residual - (1.0 - 2.0 / std::f64::consts::PI)).abs() < 1e-8);
    assert!(c.i2_residual.abs() < 1e-12);
    assert!(c.phase_residual > 1.0);
}

#[test]
fn near_zero_symbols_are_wildcards() {
    // ‖g_t‖_∞ = 3 t^30 drops below tol for small t, where any ξ qualifies.
    let f = family("t^30 * (z + 2)");
    let r = certify_equality(&f, &h2(), &q()).unwrap();
    assert!(r.whole_circle_ts > 0 && r.whole_circle_ts < q().t_grid().len());
    assert_eq!(r.verdict, CertVerdict::EqualityCertified);
    assert!((r.candidates[0].xi - Complex64::new(1.0, 0.0)).norm() < 1e-6);
}

#[test]
fn wx_on_the_example_family() {
    let probes = default_t_probes(&q());
    for c in [-1.5, -0.5, 0.3] {
        let r = check_wx(&with_c("(c+t+z)", c), &h2(), &q(), &probes).unwrap();
        assert_eq!(r.verdict, WxVerdict::PassEvidence);
        assert_eq!(r.cond1.len(), probes.len());
        assert!(r.cond1.iter().all(|p| p.decreasing && p.distances.windows(2).all(|w| w[1].1 < w[0].1)));
    }
    let bergman = SpaceSpec64::bergman(2.0, 0.0).unwrap();
    let r = check_wx(&with_c("(c+t+z)", 0.3), &bergman, &q(), &probes).unwrap();
    assert_eq!(r.verdict, WxVerdict::PassEvidence);
}

#[test]
fn wx_on_singular_families() {
    let probes = default_t_probes(&q());
    let r = check_wx(&family("(t^(-1)) * z"), &h2(), &q(), &probes).unwrap();
    assert_eq!(r.cond3_status, ConditionStatus::Fail);
    assert_eq!(r.verdict, WxVerdict::FailWithWitness);
    let r = check_wx(&family("(t^(-1)) / 2 + t^(-1)*z/2"), &h2(), &q(), &probes).unwrap();
    assert_eq!(r.cond3_status, ConditionStatus::Fail);
    let r = check_wx(&family("(t^(-1) + (1-t)^(-1))*z"), &h2(), &q(), &probes).unwrap();
    assert_eq!(r.verdict, WxVerdict::FailWithWitness);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn verdicts_are_sound(text in family_text()) {
        let f = family(&text);
        let r = certify_equality(&f, &h2(), &q()).unwrap();
        check_soundness(&r);
        check_decomposition(&f, &r);
    }

    #[test]
    fn certificates_rotate_with_global_phase(c in -1.6..0.6f64, phi in 0.0..std::f64::consts::TAU) {
        let f = with_c("(c+t+z)", c);
        let g = f.scaled(unit(phi));
        let (a, b) = (certify_equality(&f, &h2(), &q()).unwrap(), certify_equality(&g, &h2(), &q()).unwrap());
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.candidates.len(), b.candidates.len());
        for (x, y) in a.candidates.iter().zip(&b.candidates) {
            prop_assert!((y.theta - x.theta * unit(-phi)).norm() < 1e-10);
            prop_assert!((x.i1_residual - y.i1_residual).abs() < 1e-10);
            prop_assert!((x.i2_residual - y.i2_residual).abs() < 1e-10);
        }
    }

    #[test]
    fn argmax_contains_the_sup_maximizer(text in family_text(), t in 0.01..0.99f64) {
        let f = family(&text);
        let s = sup_norm(&f.frozen(t), &q()).unwrap();
        let set = argmax_set(&f, t, &q(), 1e-7).unwrap();
        prop_assert!(set.contains(s.theta, 2.0 * std::f64::consts::PI / 1024.0));
    }
}

#[test]
fn residuals_reject_interior_points() {
    let f = with_c("(c+t+z)", 0.3);
    assert!(i1_i2_residuals(&f, &h2(), Complex64::new(0.0, 0.9), &q()).is_err());
    let (r1, r2) = i1_i2_residuals(&f, &h2(), Complex64::new(-1.0, 0.0), &q()).unwrap();
    // g_t(-1) = t - 0.7 changes sign, g_t(1) = t + 1.3 is the maximum.
    assert!((r1 - 0.09).abs() < 1e-3 && (r2 - 2.0).abs() < 0.05, "{r1} {r2}");
}
