use std::sync::OnceLock;

use proptest::prelude::*;
use qeccf::codes::{self, MinDistance};
use qeccf::cxla::{CMat, Tol, C64};
use qeccf::errbasis::{self, NiceErrorBasis, PauliElem, StabilizerSpec};
use qeccf::fourier::{self, GroupAlgebraElem, TransformAssignment};
use qeccf::repn::{self, ConstituentSet};
use qeccf::tablegen::{
    self, Component, CsvTable, GroupSource, Prepared, Scenario, SubgroupRecipe, TABLE_ORDER,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Fx {
    basis: NiceErrorBasis,
    cs: ConstituentSet,
}

/// Centralizer of the repetition-code stabilizer in the three-qubit Pauli group.
fn fx() -> &'static Fx {
    static FX: OnceLock<Fx> = OnceLock::new();
    FX.get_or_init(|| {
        let basis = errbasis::pauli_group(3).unwrap();
        let spec = StabilizerSpec::parse("ZZI\nIZZ").unwrap();
        let sub = basis.pauli_commutant(spec.generators()).unwrap();
        let cs = repn::decompose_natural(&basis, &sub).unwrap();
        Fx { basis, cs }
    })
}

fn pauli_strategy(n: usize) -> impl Strategy<Value = PauliElem> {
    (0..1u64 << n, 0..1u64 << n, 0..4u8)
        .prop_map(move |(x, z, ph)| PauliElem::new(n, x, z, ph).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn symbolic_product_matches_matrices((a, b) in (1..=4usize).prop_flat_map(|n| (pauli_strategy(n), pauli_strategy(n)))) {
        let prod = &a.matrix() * &b.matrix();
        prop_assert!(a.mul(&b).matrix().approx_eq(&prod, 1e-12));
        let comm = prod.approx_eq(&(&b.matrix() * &a.matrix()), 1e-12);
        prop_assert_eq!(a.commutes(&b), comm);
    }

    #[test]
    fn hermitian_eigendecomposition_reconstructs(n in 1..12usize, seed in any::<u64>()) {
        let h = CMat::random_hermitian(n, &mut ChaCha8Rng::seed_from_u64(seed));
        let eig = h.eig_hermitian(Tol::default()).unwrap();
        let v = &eig.vectors;
        let d = CMat::diag(&eig.values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
        prop_assert!((&(v * &d) * &v.adjoint()).approx_eq(&h, 1e-9));
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn transform_round_trip_preserves_image(seed in any::<u64>()) {
        use rand::Rng;
        let f = fx();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = f.cs.sub().iter().map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let t = GroupAlgebraElem::new(f.cs.sub().to_vec(), coeffs).unwrap();
        let back = fourier::inverse_coefficients(&fourier::forward_transform(&t, &f.cs).unwrap(), &f.cs, f.basis.group()).unwrap();
        let g = f.basis.group();
        prop_assert!(back.matrix_image(g).approx_eq(&t.matrix_image(g), 1e-9));
        let again = fourier::forward_transform(&back, &f.cs).unwrap();
        let first = fourier::forward_transform(&t, &f.cs).unwrap();
        for (a, b) in again.iter().zip(&first) {
            prop_assert!(a.approx_eq(b, 1e-9));
        }
    }

    #[test]
    fn analysis_invariants(mask in 1u32..(1 << 8)) {
        let f = fx();
        let chosen: Vec<usize> = (0..f.cs.len()).filter(|k| mask >> k & 1 == 1).collect();
        prop_assume!(!chosen.is_empty());
        let vals = chosen.iter().map(|&k| (k, CMat::identity(f.cs.get(k).dim_irr))).collect();
        let a = codes::analyze(&TransformAssignment::new(vals), &f.cs, &f.basis).unwrap();
        let want: usize = chosen.iter().map(|&k| f.cs.get(k).dim_irr * f.cs.get(k).multiplicity).sum();
        prop_assert_eq!(a.dim_code, want);
        prop_assert!(a.detectable.binary_search(&0).is_ok());
        let MinDistance::Weight(d) = a.min_distance else { panic!("Pauli group has weights") };
        for (&w, c) in &a.wt_detect {
            if w < d {
                prop_assert_eq!(c.detected, c.total);
            }
        }
        if d <= 3 {
            prop_assert!(a.wt_detect[&d].detected < a.wt_detect[&d].total);
        }
    }

    #[test]
    fn row_count_law(slots in 1..=2usize, nvals in 1..=8usize) {
        let values = &TABLE_ORDER[..nvals];
        prop_assert_eq!(tablegen::assignments(values, slots).len(), nvals.pow(slots as u32) - 1);
    }
}

fn repetition_scenario(slots: Vec<usize>, values: Vec<Component>) -> (Scenario, Prepared) {
    let s = Scenario {
        name: "rep".into(),
        group: GroupSource::Pauli(3),
        subgroup: SubgroupRecipe::Generators(vec![]),
        slots,
        values,
        seed: repn::DEFAULT_SEED,
        golden: None,
    };
    let f = fx();
    let prep = Prepared {
        basis: f.basis.clone(),
        constituents: f.cs.clone(),
    };
    (s, prep)
}

#[test]
fn table_output_is_deterministic_and_round_trips() {
    let two: Vec<usize> = (0..fx().cs.len())
        .filter(|&k| fx().cs.get(k).dim_irr == 2)
        .take(2)
        .collect();
    assert_eq!(two.len(), 2);
    let (s, prep) = repetition_scenario(two, TABLE_ORDER.to_vec());
    let a = tablegen::run_prepared(&s, &prep).unwrap();
    let b = tablegen::run_prepared(&s, &prep).unwrap();
    assert_eq!(a.rows.len(), 63);
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.to_markdown(), b.to_markdown());
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| tablegen::run_prepared(&s, &prep).unwrap());
    assert_eq!(serial.to_csv(), a.to_csv());

    let back = CsvTable::parse(&a.to_csv(), std::path::Path::new("mem")).unwrap();
    let report = tablegen::golden_diff(&a.cells(), &back);
    assert_eq!(report.status(), tablegen::DiffStatus::Exact);
    for r in &a.rows {
        let trace: usize = r
            .labels
            .iter()
            .map(|c| c.matrix().trace().re.round() as usize)
            .sum();
        assert_eq!(r.dim, trace, "row {}", r.sl);
    }
}

#[test]
fn scenario_invariants_fail_before_computation() {
    let (s, _) = repetition_scenario(vec![0], vec![Component::I2]);
    let bad = Scenario {
        slots: vec![99],
        group: GroupSource::Pauli(2),
        subgroup: SubgroupRecipe::Generators(vec![2]),
        ..s
    };
    assert!(bad.prepare().is_err());
}
