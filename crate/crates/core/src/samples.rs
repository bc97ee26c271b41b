//! Seeded random solvable algebras whose adjoint matrices are upper
//! triangular in the given basis.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lie::LieAlgebra;
use crate::linalg::{c, CMat, C64, ONE, ZERO};

const WEIGHTS: [(f64, f64); 7] = [(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (2.0, 0.0), (0.0, 1.0), (0.5, -1.0), (-1.5, 0.5)];

fn weight(rng: &mut ChaCha8Rng) -> C64 {
    let (re, im) = *WEIGHTS.choose(rng).unwrap();
    c(re, im)
}

fn small(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `C^k ⋉ C^m` with `M_a` polynomials in one upper triangular matrix.
fn semidirect_abelian(rng: &mut ChaCha8Rng, max_dim: usize) -> LieAlgebra {
    let k = rng.gen_range(1..=2usize.min(max_dim - 1));
    let m = rng.gen_range(1..=(max_dim - k).min(4));
    let mut u = CMat::zeros(m, m);
    for i in 0..m {
        u[(i, i)] = weight(rng);
        for j in (i + 1)..m {
            if rng.gen_bool(0.6) {
                u[(i, j)] = small(rng);
            }
        }
    }
    let u2 = &u * &u;
    let mut entries = Vec::new();
    for a in 0..k {
        let (c0, c1, c2) = (weight(rng), if a == 0 { ONE } else { small(rng) }, if rng.gen_bool(0.3) { small(rng) } else { ZERO });
        let ma = CMat::identity(m, m) * c0 + &u * c1 + &u2 * c2;
        for j in 0..m {
            for i in 0..m {
                if ma[(i, j)].norm() > 0.0 {
                    entries.push((a, k + j, k + i, ma[(i, j)]));
                }
            }
        }
    }
    let mut names: Vec<String> = (0..k).map(|a| format!("t{a}")).collect();
    names.extend((0..m).map(|j| format!("z{j}")));
    LieAlgebra::from_entries(names, &entries).unwrap()
}

/// Heisenberg `[x, y] = z` extended by a diagonal torus (one or two elements).
fn heisenberg_torus(rng: &mut ChaCha8Rng, max_dim: usize) -> LieAlgebra {
    let k = if max_dim >= 5 { rng.gen_range(1..=2) } else { 1 };
    let (x, y, z) = (k, k + 1, k + 2);
    let mut entries = vec![(x, y, z, ONE)];
    for a in 0..k {
        let (p, q) = (weight(rng), weight(rng));
        entries.push((a, x, x, p));
        entries.push((a, y, y, q));
        entries.push((a, z, z, p + q));
    }
    let mut names: Vec<String> = (0..k).map(|a| format!("t{a}")).collect();
    names.extend(["x", "y", "z"].map(String::from));
    LieAlgebra::from_entries(names, &entries).unwrap()
}

/// 4-dimensional filiform `[e1,e2]=e3, [e1,e3]=e4` with a graded derivation.
fn filiform_torus(rng: &mut ChaCha8Rng) -> LieAlgebra {
    let (a, b) = (weight(rng), weight(rng));
    let entries = vec![
        (1, 2, 3, ONE),
        (1, 3, 4, ONE),
        (0, 1, 1, a),
        (0, 2, 2, b),
        (0, 3, 3, a + b),
        (0, 4, 4, a + a + b),
    ];
    LieAlgebra::from_entries(["t", "e1", "e2", "e3", "e4"].map(String::from).to_vec(), &entries).unwrap()
}

/// One random solvable algebra of dimension at most `max_dim` (at least 4).
pub fn random_solvable(seed: u64, max_dim: usize) -> LieAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = if max_dim >= 5 { rng.gen_range(0..3) } else { rng.gen_range(0..2) };
    match family {
        0 => semidirect_abelian(&mut rng, max_dim),
        1 => heisenberg_torus(&mut rng, max_dim),
        _ => filiform_torus(&mut rng),
    }
}
