//! Closed forms against the brute-force propagator, and the propagator
//! against a generic matrix exponential.

use std::f64::consts::{FRAC_PI_2, PI};

use ico_cqed_core::analytic::{
    control_probability, general_postselect, overlap_orders, state_after_both, CavityOrder,
};
use ico_cqed_core::observables::{excitation_distribution, excitation_expectation};
use ico_cqed_core::oracle::{
    evolve, hadamard_control, jc_generator, jc_propagator, measure_control, schrodinger_phase,
    Cavity, TruncationWindow,
};
use ico_cqed_core::state::{inner_product, norm};
use ico_cqed_core::{AtomFieldKet, Complex64, Control, FullKet, PureState, SystemParams};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn expm_minus_i(h: &ico_cqed_core::oracle::DenseMatrix, t: f64) -> DMatrix<Complex64> {
    let n = h.dim();
    let m = DMatrix::from_row_slice(n, n, h.as_slice()) * Complex64::new(0.0, -t);
    m.exp()
}

#[test]
fn dressed_propagator_matches_matrix_exponential() {
    let w = TruncationWindow::new(4).unwrap();
    for cavity in [Cavity::Zero, Cavity::One] {
        for (g, t) in [(1.0, 0.3), (0.7, 2.9), (1.9, 6.1)] {
            let h = jc_generator(cavity, g, w);
            let reference = expm_minus_i(&h, t);
            let u = jc_propagator(cavity, t, g, w).unwrap();
            let n = w.dim();
            let mut worst: f64 = 0.0;
            for r in 0..n {
                for c in 0..n {
                    worst = worst.max((u.matrix().get(r, c) - reference[(r, c)]).norm());
                }
            }
            assert!(worst < 1e-10, "{cavity:?} g={g} t={t}: {worst:e}");
            assert!(u.unitarity_error() < 1e-10);
        }
    }
}

#[test]
fn lowest_doublet_eigenvalues_are_plus_minus_g() {
    let g = 1.7;
    let w = TruncationWindow::new(2).unwrap();
    let h = jc_generator(Cavity::Zero, g, w);
    let n = w.dim();
    let m = DMatrix::from_row_slice(n, n, h.as_slice());
    let i = w.index(&AtomFieldKet::excited(0, 0)).unwrap();
    let j = w.index(&AtomFieldKet::ground(1, 0)).unwrap();
    let block = nalgebra::Matrix2::new(m[(i, i)], m[(i, j)], m[(j, i)], m[(j, j)]);
    let mut ev: Vec<f64> = block
        .map(|z| z.re)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    assert!((ev[0] + g).abs() < 1e-14 && (ev[1] - g).abs() < 1e-14);
}

/// Strip the control label from the |j⟩ branch.
fn branch(s: &PureState<FullKet>, c: Control) -> PureState<AtomFieldKet> {
    s.filter_map_kets(|k| (k.control == c).then_some(k.rest))
}

#[test]
fn definite_order_after_exit_matches_closed_form() {
    for (n, m, gt) in [
        (0, 0, FRAC_PI_2),
        (0, 0, PI),
        (1, 2, 0.83),
        (4, 3, 7.21),
        (5, 5, 2.2),
    ] {
        let p = SystemParams::new(1.0, gt)
            .with_photons(n, m)
            .with_control(0.0, 0.0);
        let w = TruncationWindow::for_params(&p);
        let s = evolve(&p, p.schedule().exit() + 0.5, w).unwrap();
        let analytic = state_after_both(CavityOrder::C0ThenC1, &p, gt).unwrap();
        assert!(branch(&s, Control::Zero).max_abs_diff(&analytic) < 1e-10);
        assert!(branch(&s, Control::One).is_empty());
    }
}

#[test]
fn inside_second_cavity_matches_closed_form_at_tau() {
    let p = SystemParams::new(0.9, 2.0)
        .with_photons(2, 1)
        .with_atom(0.7, 2.2)
        .with_entries(0.5, 3.0);
    let w = TruncationWindow::for_params(&p);
    for tau in [0.0, 0.4, 1.3, 2.0] {
        let s = evolve(&p, 3.0 + tau, w).unwrap();
        for c in Control::BOTH {
            let a = state_after_both(CavityOrder::for_control(c), &p, tau).unwrap();
            assert!(
                branch(&s, c).normalized().unwrap().max_abs_diff(&a) < 1e-10,
                "tau={tau}"
            );
        }
    }
}

#[test]
fn mid_first_cavity_conserves_norm_and_excitations() {
    let p = SystemParams::new(1.0, 1.8).with_photons(0, 0);
    let w = TruncationWindow::for_params(&p);
    let s = evolve(&p, p.first_entry + p.transit_time / 2.0, w).unwrap();
    assert!((norm(&s) - 1.0).abs() < 1e-12);
    assert!((excitation_expectation(&s) - 1.0).abs() < 1e-12);
}

#[test]
fn quarter_period_vacuum_pipeline_gives_half() {
    let p = SystemParams::new(1.0, FRAC_PI_2);
    let w = TruncationWindow::for_params(&p);
    let s = hadamard_control(&evolve(&p, 10.0, w).unwrap());
    let (_, prob) = measure_control(&s, Control::Zero).unwrap();
    assert!((prob - control_probability(Control::Zero, &p).unwrap()).abs() < 1e-12);
    assert!((prob - 0.5).abs() < 1e-12);
}

#[test]
fn hadamard_on_switch_state_gives_sum_of_orders() {
    let p = SystemParams::new(1.0, 1.3).with_photons(1, 0);
    let w = TruncationWindow::for_params(&p);
    let s = hadamard_control(&evolve(&p, 5.0, w).unwrap());
    let a = state_after_both(CavityOrder::C0ThenC1, &p, 1.3).unwrap();
    let b = state_after_both(CavityOrder::C1ThenC0, &p, 1.3).unwrap();
    let expected = ico_cqed_core::state::scale_and_add(
        Complex64::new(0.5, 0.0),
        &a,
        Complex64::new(0.5, 0.0),
        &b,
    );
    assert!(branch(&s, Control::Zero).max_abs_diff(&expected) < 1e-10);
}

#[test]
fn overlap_formula_matches_inner_product_of_oracle_branches() {
    let p = SystemParams::new(1.2, 3.7)
        .with_photons(2, 3)
        .with_atom(1.1, 4.0);
    let s = evolve(&p, 100.0, TruncationWindow::for_params(&p)).unwrap();
    let a = branch(&s, Control::Zero).normalized().unwrap();
    let b = branch(&s, Control::One).normalized().unwrap();
    assert!((inner_product(&a, &b) - overlap_orders(&p).unwrap()).norm() < 1e-10);
}

fn any_params() -> impl Strategy<Value = SystemParams> {
    (
        0.2f64..2.0,
        0.0f64..10.0,
        0.0f64..=FRAC_PI_2,
        0.0f64..std::f64::consts::TAU,
        0.0f64..=FRAC_PI_2,
        0.0f64..std::f64::consts::TAU,
        0u32..=4,
        0u32..=4,
    )
        .prop_map(|(g, gt, th, ph, xi, chi, n, m)| {
            SystemParams::new(g, gt / g)
                .with_control(th, ph)
                .with_atom(xi, chi)
                .with_photons(n, m)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pipeline_matches_general_postselect(p in any_params(), omega in 0.1f64..3.0, extra in 0.0f64..2.0) {
        let t = p.schedule().exit() + extra;
        let s = hadamard_control(&evolve(&p, t, TruncationWindow::for_params(&p)).unwrap());
        for j in Control::BOTH {
            let analytic = general_postselect(j, &p, omega * t);
            match measure_control(&s, j) {
                Ok((state, prob)) => {
                    let state = schrodinger_phase(&state, omega, t);
                    let (a_state, a_prob) = analytic.unwrap();
                    prop_assert!((prob - a_prob).abs() < 1e-9);
                    prop_assert!(state.max_abs_diff(&a_state) < 1e-9);
                }
                Err(_) => prop_assert!(analytic.is_err()),
            }
        }
    }

    #[test]
    fn results_depend_only_on_durations(p in any_params(), t0 in 0.0f64..3.0, gap in 0.0f64..3.0) {
        let moved = p.with_entries(t0, t0 + p.transit_time + gap);
        let a = evolve(&p, p.schedule().exit(), TruncationWindow::for_params(&p)).unwrap();
        let b = evolve(&moved, moved.schedule().exit(), TruncationWindow::for_params(&moved)).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-10);
    }

    #[test]
    fn evolve_conserves_norm_and_excitation_distribution(p in any_params(), frac in 0.0f64..1.2) {
        let w = TruncationWindow::for_params(&p);
        let initial = evolve(&p, 0.0, w).unwrap();
        let dist0 = excitation_distribution(&initial);
        let t = frac * (p.schedule().exit() + 0.1);
        let s = evolve(&p, t, w).unwrap();
        prop_assert!((norm(&s) - 1.0).abs() < 1e-10);
        let dist = excitation_distribution(&s);
        for (k, v) in &dist0 {
            prop_assert!((dist.get(k).copied().unwrap_or(0.0) - v).abs() < 1e-10);
        }
        for k in dist.keys() {
            prop_assert!(dist0.contains_key(k));
        }
    }
}
