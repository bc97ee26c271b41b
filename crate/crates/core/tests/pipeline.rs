use solvhull::hull::build_hull;
use solvhull::lie::{nilradical, semisimple_adjoint};
use solvhull::linalg::subspace_distance;
use solvhull::samples::random_solvable;
use solvhull::Tolerances;

#[test]
fn random_corpus_through_the_whole_hull() {
    let tol = Tolerances::default();
    for seed in 0..25u64 {
        let g = random_solvable(seed, 6);
        let hull = build_hull(&g, &tol, 0).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        let s = hull.split.residuals(&tol);
        assert!(s.nbar_class.is_some(), "seed {seed}");
        assert!(s.ideal < 1e-9 && s.derived_in_nbar < 1e-9 && s.closure < 1e-9, "seed {seed}: {s:?}");
        let ad_s = semisimple_adjoint(&g, &tol, 0).unwrap();
        assert!(ad_s.homomorphism_residual(&g) < 1e-9, "seed {seed}");
        assert!(ad_s.derivation_residual(&g) < 1e-9, "seed {seed}");
        let n = nilradical(&g, &tol, 0).unwrap();
        assert!(subspace_distance(ad_s.kernel(&tol).basis(), n.basis()) < 1e-8, "seed {seed}");
        let c = hull.connection.residuals(&g);
        assert!(c.flatness < 1e-9 && c.triangular < 1e-9 && c.closedness < 1e-9, "seed {seed}: {c:?}");
        assert_eq!(c.injective_rank, g.dim(), "seed {seed}");
        assert!(c.l_rounding < 1e-6, "seed {seed}");
        let e = hull.rep.residuals(&hull.split, &tol);
        assert_eq!(e.gbar_rank, hull.split.q() + hull.split.n(), "seed {seed}");
        println!("seed {seed}: dim {} q {} r {}", g.dim(), hull.split.q(), hull.connection.dim_rep);
    }
}
