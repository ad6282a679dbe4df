use std::f64::consts::PI;

use pathent::gravity::{
    gravity_coefficients, measure_closed_form, negativity_closed_form, phase_analytic, phase_numeric, Branch,
    InterferometerConfig, PhaseTable, DEFAULT_INTEGRATOR_EPS,
};
use pathent::random::rng_from_seed;
use pathent::separability::{entangling_audit, inseparability_measure};
use proptest::prelude::*;
use rand::Rng;

/// Fixed-grid composite Simpson over each trajectory segment, written
/// independently of the adaptive integrator.
fn composite_simpson_phase(c: &InterferometerConfig, a: Branch, b: Branch, panels: usize) -> f64 {
    let (t, tau) = (c.hold_time, c.ramp_time);
    let v = c.arm / (2.0 * tau);
    let (sa, sb) = (a.sign(), b.sign());
    let offset = |t_: f64| {
        if t_ <= tau {
            v * t_
        } else if t_ <= t + tau {
            v * tau
        } else {
            v * (t + 2.0 * tau - t_)
        }
    };
    let integrand = |t_: f64| c.coupling / (c.separation + (sb - sa) * offset(t_));
    let mut total = 0.0;
    for (lo, hi) in [(0.0, tau), (tau, t + tau), (t + tau, t + 2.0 * tau)] {
        let h = (hi - lo) / panels as f64;
        let mut s = integrand(lo) + integrand(hi);
        for k in 1..panels {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * integrand(lo + k as f64 * h);
        }
        total += s * h / 3.0;
    }
    total
}

#[test]
fn numeric_phase_matches_fixed_grid_oracle() {
    let c = InterferometerConfig::new(2.5, 3.0, 1.2, 4.0, 0.4).unwrap();
    let p = phase_numeric(&c, 1e-11).unwrap();
    for a in Branch::ALL {
        for b in Branch::ALL {
            let oracle = composite_simpson_phase(&c, a, b, 4000);
            let got = p.get(a, b);
            assert!((got - oracle).abs() < 1e-10 * oracle, "{a:?}{b:?}: {got} vs {oracle}");
        }
    }
}

#[test]
fn ramp_phase_has_logarithmic_closed_form() {
    // on a ramp the distance is linear in t, so ∫κ/(D ± 2vt) dt is a log
    let c = InterferometerConfig::new(1.0, 2.0, 1.0, 3.0, 0.5).unwrap();
    let p = phase_numeric(&c, 1e-12).unwrap();
    let (k, d, l, t, tau) = (1.0, 2.0, 1.0, 3.0, 0.5);
    let ramp = |sep_end: f64| 2.0 * k * tau * (sep_end / d).ln() / (sep_end - d);
    let lr = k * t / (d + l) + ramp(d + l);
    let rl = k * t / (d - l) + ramp(d - l);
    assert!((p.get(Branch::L, Branch::R) - lr).abs() < 1e-10 * lr);
    assert!((p.get(Branch::R, Branch::L) - rl).abs() < 1e-10 * rl);
}

#[test]
fn numeric_converges_monotonically_to_analytic() {
    for ratio in [0.1, 0.5, 0.9] {
        let mut last = f64::INFINITY;
        for t_over_tau in [10.0, 100.0, 1000.0] {
            let c = InterferometerConfig::from_dimensionless(1.3, ratio, 1.0 / t_over_tau).unwrap();
            let num = phase_numeric(&c, DEFAULT_INTEGRATOR_EPS).unwrap();
            let ana = phase_analytic(&c).unwrap();
            let gap = num.max_relative_discrepancy(&ana);
            assert!(gap <= last, "ratio {ratio}, T/tau {t_over_tau}: {gap} > {last}");
            last = gap;
        }
        assert!(last < 3e-3);
    }
}

#[test]
fn closed_form_agrees_with_pipeline_on_random_tables() {
    let mut rng = rng_from_seed(2024);
    for _ in 0..100 {
        let p = PhaseTable::new(
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
            rng.random_range(-10.0..10.0),
        );
        let e = gravity_coefficients(&p).unwrap();
        let audit = entangling_audit(&e, 1e-9).unwrap();
        assert!((audit.n_out - negativity_closed_form(&p)).abs() < 1e-10);
        assert!((audit.v - measure_closed_form(&p)).abs() < 1e-10);
        assert!(audit.consistent);
    }
}

#[test]
fn half_pi_substitution_peaks() {
    let l = 1.0;
    let c = InterferometerConfig::new(3.0 * PI * l, 2.0 * l, l, 1.0, 1e-3).unwrap();
    let p = phase_analytic(&c).unwrap();
    let v = inseparability_measure(&gravity_coefficients(&p).unwrap())
        .unwrap()
        .value;
    assert!((v - 2.0).abs() < 1e-10);
}

proptest! {
    #[test]
    fn only_entangling_phase_matters(
        ll in -5.0f64..5.0, lr in -5.0f64..5.0, rl in -5.0f64..5.0, rr in -5.0f64..5.0,
        alpha in -3.0f64..3.0, beta in -3.0f64..3.0,
    ) {
        let p = PhaseTable::new(ll, lr, rl, rr);
        // local phases on A's R branch and B's R branch
        let q = PhaseTable::new(ll, lr + beta, rl + alpha, rr + alpha + beta);
        prop_assert!((p.entangling_phase() - q.entangling_phase()).abs() < 1e-12);
        let vp = inseparability_measure(&gravity_coefficients(&p).unwrap()).unwrap().value;
        let vq = inseparability_measure(&gravity_coefficients(&q).unwrap()).unwrap().value;
        prop_assert!((vp - vq).abs() < 1e-10);
    }

    #[test]
    fn measure_is_periodic_in_entangling_phase(ll in -5.0f64..5.0, lr in -5.0f64..5.0, rl in -5.0f64..5.0, rr in -5.0f64..5.0) {
        let p = PhaseTable::new(ll, lr, rl, rr);
        let shifted = PhaseTable::new(ll, lr + 2.0 * PI, rl, rr);
        let v1 = inseparability_measure(&gravity_coefficients(&p).unwrap()).unwrap().value;
        let v2 = inseparability_measure(&gravity_coefficients(&shifted).unwrap()).unwrap().value;
        prop_assert!((v1 - v2).abs() < 1e-9);
        prop_assert!((v1 - measure_closed_form(&p)).abs() < 1e-10);
    }

    #[test]
    fn same_branch_phase_is_exact(k in 0.1f64..5.0, d in 1.5f64..5.0, r in 0.05f64..0.95, t in 0.5f64..5.0, tau in 0.01f64..1.0) {
        let c = InterferometerConfig::new(k, d, r * d, t, tau).unwrap();
        let p = phase_numeric(&c, DEFAULT_INTEGRATOR_EPS).unwrap();
        let exact = k * (t + 2.0 * tau) / d;
        for b in Branch::ALL {
            prop_assert!((p.get(b, b) - exact).abs() <= 1e-9 * exact);
        }
    }
}
