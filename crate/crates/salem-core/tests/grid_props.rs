//! Property tests for the exact-arithmetic layer: Parseval, the convolution
//! theorem, total-mass powers, cube-query agreement with brute force and the
//! Hausdorff oracle on 𝕋².

use proptest::prelude::*;

use salem_core::grid::{
    convolve_measures, hausdorff_distance, measure_power, torus_distance, AtomicMeasure,
    TorusGrid,
};

fn arbitrary_atoms(n: usize, d: usize, count: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0..n, d), 1..=count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_for_atomic_measures(atoms in arbitrary_atoms(17, 1, 8)) {
        let grid = TorusGrid::new(1, 17).unwrap();
        let sigma = AtomicMeasure::from_atoms(grid, &atoms).unwrap();
        let spectrum = sigma.dft().unwrap();
        let lhs: f64 = spectrum.values().iter().map(|v| v.norm_sqr()).sum();
        let rhs = 17.0 * sigma.masses().iter().map(|m| m * m).sum::<f64>();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.max(1.0));
    }

    #[test]
    fn convolution_theorem(
        atoms_a in arbitrary_atoms(13, 1, 6),
        atoms_b in arbitrary_atoms(13, 1, 6),
    ) {
        let grid = TorusGrid::new(1, 13).unwrap();
        let a = AtomicMeasure::from_atoms(grid, &atoms_a).unwrap();
        let b = AtomicMeasure::from_atoms(grid, &atoms_b).unwrap();
        let conv = convolve_measures(&a, &b).unwrap();
        let lhs = conv.dft().unwrap();
        let rhs = a.dft().unwrap().pointwise_mul(&b.dft().unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9);
    }

    #[test]
    fn total_mass_of_powers_is_exact(
        atoms in arbitrary_atoms(19, 1, 7),
        ell in 0u32..5,
    ) {
        let grid = TorusGrid::new(1, 19).unwrap();
        let sigma = AtomicMeasure::from_atoms(grid, &atoms).unwrap();
        let power = measure_power(&sigma, ell).unwrap();
        prop_assert!(power.is_integer_mass());
        prop_assert_eq!(power.total_mass(), (atoms.len() as f64).powi(ell as i32));
    }

    #[test]
    fn max_cube_mass_agrees_with_enumeration(
        atoms in arbitrary_atoms(11, 2, 6),
        side in 1usize..=11,
    ) {
        let grid = TorusGrid::new(2, 11).unwrap();
        let sigma = AtomicMeasure::from_atoms(grid, &atoms).unwrap();
        let (fast, witness) = sigma.max_cube_mass(side).unwrap();
        // brute enumeration over all corners
        let mut brute = 0.0f64;
        for cx in 0..11 {
            for cy in 0..11 {
                let mut sum = 0.0;
                for ox in 0..side {
                    for oy in 0..side {
                        sum += sigma.mass_at(&[(cx + ox) % 11, (cy + oy) % 11]);
                    }
                }
                brute = brute.max(sum);
            }
        }
        prop_assert!((fast - brute).abs() <= 1e-9, "fast {} brute {}", fast, brute);
        // the witness cube must attain the maximum
        let witness_mass = sigma.cube_mass(&witness).unwrap();
        prop_assert!((witness_mass - fast).abs() <= 1e-9);
    }

    #[test]
    fn cube_mass_is_monotone_in_side(
        atoms in arbitrary_atoms(16, 1, 8),
        side in 1usize..16,
    ) {
        let grid = TorusGrid::new(1, 16).unwrap();
        let sigma = AtomicMeasure::from_atoms(grid, &atoms).unwrap();
        let (smaller, _) = sigma.max_cube_mass(side).unwrap();
        let (larger, _) = sigma.max_cube_mass(side + 1).unwrap();
        prop_assert!(larger >= smaller - 1e-12);
    }

    #[test]
    fn hausdorff_matches_pairwise_oracle_on_t2(
        xs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..10),
        ys in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..10),
    ) {
        let a: Vec<Vec<f64>> = xs.iter().map(|&(x, y)| vec![x, y]).collect();
        let b: Vec<Vec<f64>> = ys.iter().map(|&(x, y)| vec![x, y]).collect();
        let fast = hausdorff_distance(&a, &b).unwrap();
        // independent oracle: the sum of one-sided excesses via full scans
        let excess = |from: &[Vec<f64>], to: &[Vec<f64>]| -> f64 {
            from.iter()
                .map(|x| {
                    to.iter()
                        .map(|y| torus_distance(x, y))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        let oracle = excess(&a, &b) + excess(&b, &a);
        prop_assert!((fast - oracle).abs() <= 1e-12);
    }

    #[test]
    fn measure_json_roundtrip(atoms in arbitrary_atoms(9, 2, 6)) {
        let grid = TorusGrid::new(2, 9).unwrap();
        let sigma = AtomicMeasure::from_atoms(grid, &atoms).unwrap();
        let text = serde_json::to_string(&sigma.to_json()).unwrap();
        let parsed: salem_core::MeasureJson = serde_json::from_str(&text).unwrap();
        let back = AtomicMeasure::from_json(&parsed).unwrap();
        prop_assert_eq!(sigma, back);
    }
}

#[test]
fn dirac_spectrum_modulus_one_everywhere() {
    // δ_x for any x has |δ̂_x(r)| = 1 at every frequency
    let grid = TorusGrid::new(1, 23).unwrap();
    let delta = AtomicMeasure::dirac(grid, &[7]).unwrap();
    let spectrum = delta.dft().unwrap();
    for (_, value) in spectrum.iter_centered() {
        assert!((value.norm() - 1.0).abs() < 1e-12);
    }
}
