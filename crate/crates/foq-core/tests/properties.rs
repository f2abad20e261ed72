//! Randomized invariants of the coefficient, error-norm, and quadrature
//! APIs.  Every property here is a mathematical identity of the closed
//! forms (symmetry, exactness, transport, optimality), so failures point
//! at implementation bugs rather than at loose tolerances.

use foq_core::oracle;
use foq_core::{
    apply, optimal_coefficients, optimal_coefficients_unit, norm_squared_closed,
    Complex64, FourierWeight, SampledFunction, UniformGrid,
};
use proptest::prelude::*;

fn weight(omega: f64) -> FourierWeight {
    FourierWeight::new(omega).expect("finite frequency")
}

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)),
        len,
    )
}

fn linearity_inputs() -> impl Strategy<Value = (usize, Vec<Complex64>, Vec<Complex64>)> {
    (1usize..40).prop_flat_map(|n| (Just(n), complex_vec(n + 1), complex_vec(n + 1)))
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    /// The defining exactness pair on the unit interval: the rule
    /// reproduces the weighted integrals of `e^{-x}` and `e^{x}` for
    /// arbitrary frequencies and node counts.  The tolerance allows for
    /// the conditioning of the check itself: the residual divides an
    /// alternating sum of ~n terms by a target whose magnitude shrinks
    /// like 1/omega, so pure rounding of correct coefficients reaches
    /// ~1e-12 near (|omega|, n) = (75, 600).
    #[test]
    fn unit_rules_integrate_the_exponential_pair_exactly(
        omega in -100.0f64..100.0,
        n in 1usize..1000,
    ) {
        let coeffs = optimal_coefficients_unit(weight(omega), n).unwrap();
        let decay = coeffs.decay_exactness_residual().unwrap();
        let growth = coeffs.growth_exactness_residual().unwrap();
        prop_assert!(decay <= 1e-11, "decay residual {decay:.3e}");
        prop_assert!(growth <= 1e-11, "growth residual {growth:.3e}");
    }

    /// Change of variables: on a general interval the rule reproduces the
    /// transported pair `e^{-+(x-a)/(b-a)}` (the residual helpers evaluate
    /// exactly that on non-unit grids).
    #[test]
    fn transported_rules_keep_the_exactness_pair(
        a in -5.0f64..5.0,
        len in 0.2f64..5.0,
        omega in -20.0f64..20.0,
        n in 1usize..200,
    ) {
        let grid = UniformGrid::new(a, a + len, n).unwrap();
        let coeffs = optimal_coefficients(weight(omega), grid).unwrap();
        let decay = coeffs.decay_exactness_residual().unwrap();
        let growth = coeffs.growth_exactness_residual().unwrap();
        prop_assert!(decay <= 1e-11, "decay residual {decay:.3e}");
        prop_assert!(growth <= 1e-11, "growth residual {growth:.3e}");
    }

    /// Negating the frequency conjugates every coefficient exactly (the
    /// integrand is conjugated, and the implementation is arranged so the
    /// symmetry survives rounding).
    #[test]
    fn negating_the_frequency_conjugates_every_coefficient(
        omega in 1e-3f64..100.0,
        n in 1usize..300,
    ) {
        let plus = optimal_coefficients_unit(weight(omega), n).unwrap();
        let minus = optimal_coefficients_unit(weight(-omega), n).unwrap();
        for (p, m) in plus.values().iter().zip(minus.values()) {
            prop_assert_eq!(p.re, m.re);
            prop_assert_eq!(p.im, -m.im);
        }
    }

    /// Interior coefficients are one constant rotated by the grid phase:
    /// `C_beta = C_1 e^{2 pi i omega h (beta - 1)}` for `1 <= beta <= n-1`.
    #[test]
    fn interior_coefficients_are_a_modulated_constant(
        omega in 1e-2f64..30.0,
        n in 3usize..200,
    ) {
        let coeffs = optimal_coefficients_unit(weight(omega), n).unwrap();
        let values = coeffs.values();
        let h = 1.0 / n as f64;
        let c1 = values[1];
        for (beta, value) in values.iter().enumerate().take(n).skip(2) {
            let turns = omega * h * (beta - 1) as f64;
            let phase = Complex64::new(
                (std::f64::consts::TAU * turns).cos(),
                (std::f64::consts::TAU * turns).sin(),
            );
            let predicted = c1 * phase;
            let deviation = (predicted - value).norm() / c1.norm();
            prop_assert!(
                deviation <= 1e-12,
                "beta {beta}: relative deviation {deviation:.3e}"
            );
        }
    }

    /// The squared error norm is an even function of the frequency, bit
    /// for bit: only `omega^2` and `sin^2` enter the closed form.
    #[test]
    fn squared_norm_is_even_in_the_frequency_bitwise(
        omega in 0.0f64..100.0,
        n in 1usize..500,
    ) {
        let plus = norm_squared_closed(weight(omega), n).unwrap();
        let minus = norm_squared_closed(weight(-omega), n).unwrap();
        prop_assert_eq!(plus.to_bits(), minus.to_bits());
    }

    /// Doubling the node count refines the grid in a nested way, so the
    /// optimal worst-case error cannot increase (the coarse rule is a
    /// feasible candidate on the fine grid).
    #[test]
    fn squared_norm_never_increases_under_grid_doubling(
        omega in -50.0f64..50.0,
        n in 1usize..400,
    ) {
        let coarse = norm_squared_closed(weight(omega), n).unwrap();
        let fine = norm_squared_closed(weight(omega), 2 * n).unwrap();
        prop_assert!(coarse >= 0.0);
        prop_assert!(fine >= 0.0);
        prop_assert!(
            fine <= coarse * (1.0 + 1e-12) + 1e-300,
            "norm^2 grew from {coarse:.17e} (n = {n}) to {fine:.17e} (2n)"
        );
    }

    /// The quadrature functional is linear in the sampled data.
    #[test]
    fn applying_the_rule_is_linear_in_the_samples(
        (n, f, g) in linearity_inputs(),
        omega in -10.0f64..10.0,
        alpha in (-2.0f64..2.0, -2.0f64..2.0),
        beta in (-2.0f64..2.0, -2.0f64..2.0),
    ) {
        let grid = UniformGrid::unit(n).unwrap();
        let coeffs = optimal_coefficients_unit(weight(omega), n).unwrap();
        let alpha = Complex64::new(alpha.0, alpha.1);
        let beta = Complex64::new(beta.0, beta.1);
        let combined: Vec<Complex64> = f
            .iter()
            .zip(&g)
            .map(|(fv, gv)| alpha * fv + beta * gv)
            .collect();
        let vf = apply(&coeffs, &SampledFunction::new(f, grid).unwrap()).unwrap().value;
        let vg = apply(&coeffs, &SampledFunction::new(g, grid).unwrap()).unwrap().value;
        let vc = apply(&coeffs, &SampledFunction::new(combined, grid).unwrap()).unwrap().value;
        let error = (vc - (alpha * vf + beta * vg)).norm();
        let scale = 1.0 + alpha.norm() + beta.norm();
        prop_assert!(
            error <= (n + 1) as f64 * 1e-14 * scale,
            "linearity defect {error:.3e} at n = {n}"
        );
    }

    /// The reproducing kernel of the problem is even, bit for bit.
    #[test]
    fn kernel_is_even_bitwise(x in -700.0f64..700.0) {
        prop_assert_eq!(oracle::kernel_g(-x).to_bits(), oracle::kernel_g(x).to_bits());
    }

    /// Random spot checks of the closed forms against the independently
    /// assembled linear system: coefficients agree, and the Lagrange-type
    /// multiplier confirming optimality vanishes.
    #[test]
    fn closed_forms_match_the_linear_system_oracle(
        omega in -10.0f64..10.0,
        n in 1usize..20,
    ) {
        let closed = optimal_coefficients_unit(weight(omega), n).unwrap();
        let solved = oracle::solve_optimality(weight(omega), n).unwrap();
        let max_dev = closed
            .values()
            .iter()
            .zip(solved.coefficients.values())
            .map(|(c, o)| (c - o).norm())
            .fold(0.0f64, f64::max);
        prop_assert!(max_dev <= 1e-10, "max coefficient deviation {max_dev:.3e}");
        prop_assert!(
            solved.lagrange_d.norm() <= 1e-10,
            "multiplier |d| = {:.3e}",
            solved.lagrange_d.norm()
        );
        prop_assert!(solved.residual_ratio() <= 1e-12);
    }
}
