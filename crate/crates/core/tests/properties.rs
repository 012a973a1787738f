use nalgebra::DMatrix;
use proptest::prelude::*;
use qlbm::collision::{build_collision, decompose, gamma_window, GeneratorMatrix};
use qlbm::lbm::TransportModel;

fn symmetric(entries: Vec<f64>) -> DMatrix<f64> {
    let m = DMatrix::from_vec(4, 4, entries);
    (&m + m.transpose()) * 0.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_reconstructs_feasible_collisions(
        entries in prop::collection::vec(-0.4f64..0.4, 16),
        dt in 0.05f64..1.5,
    ) {
        let gen = GeneratorMatrix::new(symmetric(entries)).unwrap();
        let op = build_collision(&gen, dt).unwrap();
        let spectrum = op.real_spectrum().unwrap();
        if let Ok(window) = gamma_window(&spectrum) {
            for t in [0.0, 0.5, 1.0] {
                let gamma = window.lower() + t * (window.upper() - window.lower());
                let dec = decompose(&op, gamma).unwrap();
                prop_assert!(dec.reconstruction_residual() <= 1e-9);
                let (a, b) = dec.unitarity_residuals();
                prop_assert!(a <= 1e-10 && b <= 1e-10);
                prop_assert!(dec.commutator_residual() <= 1e-10);
            }
        }
    }

    #[test]
    fn equilibria_are_fixed_points(
        rho in 0.1f64..3.0,
        ux in -0.3f64..0.3,
        uy in -0.3f64..0.3,
        d in 0.01f64..0.5,
    ) {
        let model = TransportModel::<f64>::new(d).unwrap();
        let feq = model.equilibrium(rho, (ux, uy));
        prop_assert!((feq.sum() - rho).abs() <= 1e-12);
        let omega = model.omega_matrix((ux, uy));
        prop_assert!((omega * feq).amax() <= 1e-12);
        prop_assert!(omega.row_sum().amax() <= 1e-12);
    }
}
