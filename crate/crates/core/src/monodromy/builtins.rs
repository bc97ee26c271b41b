//! The two reference groups: Sol with a hyperbolic lattice, and
//! `R ⋉ C^2` with a Jordan-block action and lattice `2Z ⋉ (Z + iZ)^2`.

use std::f64::consts::PI;

use crate::lie::LieAlgebra;
use crate::linalg::{c, CMat, CVec, ONE, ZERO};
use crate::monodromy::lattice::Lattice;
use crate::monodromy::model::{GroupElement, SemidirectModel};
use crate::paths::{PathWord, Segment};

#[derive(Debug, Clone)]
pub struct Example {
    pub name: &'static str,
    pub algebra: LieAlgebra,
    pub model: SemidirectModel,
    pub lattice: Lattice,
    pub paths: Vec<(String, PathWord)>,
}

pub fn by_name(name: &str) -> Option<Example> {
    match name {
        "sol" => Some(sol()),
        "sect4" => Some(sect4()),
        _ => None,
    }
}

pub const NAMES: [&str; 2] = ["sol", "sect4"];

/// Larger eigenvalue of `[[2, 1], [1, 1]]`.
pub fn sol_lambda() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

pub fn sol() -> Example {
    let dphi = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
    let model = SemidirectModel::new(vec![dphi], Some(vec!["t".into(), "x".into(), "y".into()])).unwrap();
    let (lp, lm) = (sol_lambda(), (3.0 - 5f64.sqrt()) / 2.0);
    // columns are eigenvectors (1, lambda - 2); lattice is P^-1 Z^2
    let p = CMat::from_row_slice(2, 2, &[ONE, ONE, c(lp - 2.0, 0.0), c(lm - 2.0, 0.0)]);
    let p_inv = p.try_inverse().unwrap();
    let t0 = lp.ln();
    let gen = |t: f64, v: CVec| GroupElement { t: vec![t], v };
    let lattice = Lattice {
        generators: vec![
            ("a".into(), gen(t0, CVec::zeros(2))),
            ("b1".into(), gen(0.0, p_inv.column(0).into_owned())),
            ("b2".into(), gen(0.0, p_inv.column(1).into_owned())),
        ],
        relations: vec![
            "a b1 a^-1 b2^-1 b1^-2".into(),
            "a b2 a^-1 b2^-1 b1^-1".into(),
            "b1 b2 b1^-1 b2^-1".into(),
        ],
    };
    let paths = vec![
        ("t_loop".into(), PathWord::single(CVec::from_vec(vec![c(t0, 0.0), ZERO, ZERO]), 1.0)),
        (
            "square".into(),
            PathWord::new(vec![
                Segment::new(CVec::from_vec(vec![ONE, ZERO, ZERO]), 0.5),
                Segment::new(CVec::from_vec(vec![ZERO, ONE, ZERO]), 1.0),
                Segment::new(CVec::from_vec(vec![ONE, ZERO, ZERO]), -0.5),
                Segment::new(CVec::from_vec(vec![ZERO, ONE, ZERO]), -1.0),
            ]),
        ),
    ];
    Example { name: "sol", algebra: model.lie_algebra(), model, lattice, paths }
}

pub fn sect4() -> Example {
    let ipi = c(0.0, PI);
    let dphi = CMat::from_row_slice(2, 2, &[ipi, ONE, ZERO, ipi]);
    let model = SemidirectModel::new(vec![dphi], Some(vec!["t".into(), "z1".into(), "z2".into()])).unwrap();
    let gen = |t: f64, v: [crate::linalg::C64; 2]| GroupElement { t: vec![t], v: CVec::from_vec(v.to_vec()) };
    let i = c(0.0, 1.0);
    let lattice = Lattice {
        generators: vec![
            ("a".into(), gen(2.0, [ZERO, ZERO])),
            ("b1".into(), gen(0.0, [ONE, ZERO])),
            ("b2".into(), gen(0.0, [i, ZERO])),
            ("b3".into(), gen(0.0, [ZERO, ONE])),
            ("b4".into(), gen(0.0, [ZERO, i])),
        ],
        relations: vec![
            "a b1 a^-1 b1^-1".into(),
            "a b2 a^-1 b2^-1".into(),
            "a b3 a^-1 b3^-1 b1^-2".into(),
            "a b4 a^-1 b4^-1 b2^-2".into(),
            "b1 b2 b1^-1 b2^-1".into(),
            "b1 b3 b1^-1 b3^-1".into(),
            "b1 b4 b1^-1 b4^-1".into(),
            "b2 b3 b2^-1 b3^-1".into(),
            "b2 b4 b2^-1 b4^-1".into(),
            "b3 b4 b3^-1 b4^-1".into(),
        ],
    };
    let paths = vec![("t_loop".into(), PathWord::single(CVec::from_vec(vec![ONE, ZERO, ZERO]), 2.0))];
    Example { name: "sect4", algebra: model.lie_algebra(), model, lattice, paths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn algebras_have_the_expected_adjoint() {
        let s = sol();
        let ad_t = s.algebra.adjoint_basis(0);
        let want = CMat::from_diagonal(&CVec::from_vec(vec![ZERO, ONE, -ONE]));
        assert_eq!(ad_t, want);
        let e = sect4();
        let ad_t = e.algebra.adjoint_basis(0);
        let ipi = c(0.0, PI);
        let want = CMat::from_row_slice(3, 3, &[ZERO, ZERO, ZERO, ZERO, ipi, ONE, ZERO, ZERO, ipi]);
        assert_eq!(ad_t, want);
    }

    #[test]
    fn sect4_phi_at_two_is_unipotent() {
        let e = sect4();
        let want = CMat::from_row_slice(2, 2, &[ONE, c(2.0, 0.0), ZERO, ONE]);
        assert!(max_abs_diff(&e.model.phi(&[2.0]), &want) < 1e-12);
    }

    #[test]
    fn sect4_t_loop_ends_at_lattice_point() {
        let e = sect4();
        let end = e.model.endpoint(&e.paths[0].1).unwrap();
        assert!(end.distance(&e.lattice.generators[0].1) < 1e-15);
    }
}
