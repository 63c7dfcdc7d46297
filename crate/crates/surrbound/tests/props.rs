//! Property tests for the latent-table algebra.

use proptest::prelude::*;
use surrbound::law::{
    effects_from_qtable_nonstrong, QTableNonStrong, QTableStrong,
};

fn qtable_strong() -> impl Strategy<Value = QTableStrong> {
    prop::collection::vec(1e-9..1.0f64, 16).prop_map(|raw| {
        let sum: f64 = raw.iter().sum();
        let normalized: Vec<f64> = raw.iter().map(|v| v / sum).collect();
        QTableStrong::from_vector(&normalized).expect("normalized cells form a table")
    })
}

fn qtable_nonstrong() -> impl Strategy<Value = QTableNonStrong> {
    prop::collection::vec(1e-9..1.0f64, 64).prop_map(|raw| {
        let sum: f64 = raw.iter().sum();
        let normalized: Vec<f64> = raw.iter().map(|v| v / sum).collect();
        QTableNonStrong::from_vector(&normalized).expect("normalized cells form a table")
    })
}

proptest! {
    /// Forward-mapped observables of any valid table validate as a law, and
    /// the effect lands in its admissible range.
    #[test]
    fn roundtrip_observables_are_valid(q in qtable_strong()) {
        let (law, gamma) = q.observables();
        prop_assert!(law.validated().is_ok());
        prop_assert!((-1.0..=1.0).contains(&gamma));
        prop_assert!((-1.0..=1.0).contains(&q.ace_ty()));
    }

    /// Observables and the outcome effect are linear in the table.
    #[test]
    fn strong_maps_are_linear(
        qa in qtable_strong(),
        qb in qtable_strong(),
        lambda in 0.0..1.0f64,
    ) {
        let va = qa.to_vector();
        let vb = qb.to_vector();
        let mixed: Vec<f64> =
            va.iter().zip(&vb).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let qm = QTableStrong::from_vector(&mixed).unwrap();
        let (law_m, gamma_m) = qm.observables();
        let (law_a, gamma_a) = qa.observables();
        let (law_b, gamma_b) = qb.observables();
        let mix = |a: f64, b: f64| lambda * a + (1.0 - lambda) * b;
        prop_assert!((law_m.p00 - mix(law_a.p00, law_b.p00)).abs() < 1e-12);
        prop_assert!((law_m.p10 - mix(law_a.p10, law_b.p10)).abs() < 1e-12);
        prop_assert!((law_m.p01 - mix(law_a.p01, law_b.p01)).abs() < 1e-12);
        prop_assert!((law_m.p11 - mix(law_a.p11, law_b.p11)).abs() < 1e-12);
        prop_assert!((law_m.s1_treated - mix(law_a.s1_treated, law_b.s1_treated)).abs() < 1e-12);
        prop_assert!((gamma_m - mix(gamma_a, gamma_b)).abs() < 1e-12);
        prop_assert!((qm.ace_ty() - mix(qa.ace_ty(), qb.ace_ty())).abs() < 1e-12);
    }

    /// Mixture linearity for the non-strong maps.
    #[test]
    fn nonstrong_maps_are_linear(
        qa in qtable_nonstrong(),
        qb in qtable_nonstrong(),
        lambda in 0.0..1.0f64,
    ) {
        let va = qa.to_vector();
        let vb = qb.to_vector();
        let mixed: Vec<f64> =
            va.iter().zip(&vb).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let qm = QTableNonStrong::from_vector(&mixed).unwrap();
        let (ea, eb, em) = (
            effects_from_qtable_nonstrong(&qa),
            effects_from_qtable_nonstrong(&qb),
            effects_from_qtable_nonstrong(&qm),
        );
        let mix = |a: f64, b: f64| lambda * a + (1.0 - lambda) * b;
        prop_assert!((em.ace_ty - mix(ea.ace_ty, eb.ace_ty)).abs() < 1e-12);
        prop_assert!((em.gammas.gamma0 - mix(ea.gammas.gamma0, eb.gammas.gamma0)).abs() < 1e-12);
        prop_assert!((em.gammas.gamma1 - mix(ea.gammas.gamma1, eb.gammas.gamma1)).abs() < 1e-12);
        prop_assert!((em.observed.p11 - mix(ea.observed.p11, eb.observed.p11)).abs() < 1e-12);
    }

    /// The closed-form interval always contains the generating table's
    /// true outcome effect.
    #[test]
    fn bounds_contain_generating_effect(q in qtable_strong()) {
        let (law, gamma) = q.observables();
        let report = surrbound::bounds::strong_bounds(&law, gamma);
        prop_assert!(report.lower <= q.ace_ty() + 1e-9);
        prop_assert!(q.ace_ty() <= report.upper + 1e-9);
    }
}
