mod common;

use common::*;
use holosim::algebra::{FracMatrix, MultiPoly, Scalar};
use holosim::cocycle::{
    assemble_global_similarity, verify_cocycle, verify_commutant_valued, verify_equivalence, CheckMode, MatrixCocycle, Splitting,
};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn assembly_recovers_the_global_similarity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let charts = r.gen_range(2..=3);
        let vars = r.gen_range(1..=2);
        let inst = cocycle_instance(&mut r, charts, vars);
        let split = Splitting::new(&inst.covering, inst.splitting.clone()).unwrap();
        for mode in [CheckMode::Symbolic, CheckMode::Sampled] {
            let global = assemble_global_similarity(&inst.covering, &inst.a, &inst.b, &inst.locals, &split, mode).unwrap();
            for i in 0..charts {
                let piece = global.piece(i);
                prop_assert!(piece.intertwines(&inst.a, &inst.b));
                prop_assert!(piece.equals(&FracMatrix::from_poly(&inst.g)));
            }
        }
    }

    #[test]
    fn coboundary_of_local_similarities_is_commutant_valued(seed in any::<u64>()) {
        let mut r = rng(seed);
        let charts = r.gen_range(2..=3);
        let inst = cocycle_instance(&mut r, charts, 1);
        let f = MatrixCocycle::coboundary(inst.covering.clone(), &inst.locals).unwrap();
        prop_assert!(verify_cocycle(&f, CheckMode::Auto));
        prop_assert!(verify_commutant_valued(&f, &inst.a, CheckMode::Auto).unwrap());
        prop_assert!(verify_commutant_valued(&f, &inst.a, CheckMode::Sampled).unwrap());
        // f_ij = h_i·h_j⁻¹, so the splitting makes f equivalent to the identity
        let split = Splitting::new(&inst.covering, inst.splitting.clone()).unwrap();
        let id = MatrixCocycle::identity(inst.covering.clone(), f.size());
        prop_assert!(verify_equivalence(&f, &id, &split, CheckMode::Auto).unwrap());
    }

    #[test]
    fn corrupted_splitting_names_the_pair(seed in any::<u64>()) {
        let mut r = rng(seed);
        let charts = r.gen_range(2..=3);
        let inst = cocycle_instance(&mut r, charts, 1);
        let bad = r.gen_range(0..charts);
        let mut h = inst.splitting.clone();
        let ctx = inst.covering.context().clone();
        h[bad] = h[bad].mul_poly(&holosim::algebra::MatrixFamily::poly_identity(&ctx, inst.a.rows()).scale(&MultiPoly::constant(&ctx, Scalar::from_int(2))));
        let split = Splitting::new(&inst.covering, h).unwrap();
        let err = assemble_global_similarity(&inst.covering, &inst.a, &inst.b, &inst.locals, &split, CheckMode::Auto).unwrap_err();
        let msg = err.to_string();
        let name = inst.covering.name(bad);
        prop_assert!(msg.contains("pair (") && msg.contains(name), "{}", msg);
    }
}
