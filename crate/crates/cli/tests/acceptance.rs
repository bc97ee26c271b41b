//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solvhull::hull::build_hull;
use solvhull::lie::{nilradical, semisimple_adjoint, LieAlgebra};
use solvhull::linalg::{c, max_abs_vec, subspace_distance, CMat, CVec, ONE};
use solvhull::monodromy::{builtins, monodromy, separation_demo, verify_path_independence};
use solvhull::paths::{
    exp_iterated_integral, exp_iterated_integral_series, iterated_integral, iterated_integral_quadrature,
    shuffle_check, IntegralWord, PathWord, Segment,
};
use solvhull::samples::random_solvable;
use solvhull::Tolerances;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn corpus() -> Vec<(String, LieAlgebra)> {
    let mut out: Vec<(String, LieAlgebra)> =
        builtins::NAMES.iter().map(|n| (n.to_string(), builtins::by_name(n).unwrap().algebra)).collect();
    out.extend((0..25u64).map(|s| (format!("random/{s}"), random_solvable(s, 6))));
    out
}

fn random_cvec(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> CVec {
    CVec::from_fn(n, |_, _| c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
}

fn random_path(n: usize, rng: &mut ChaCha8Rng) -> PathWord {
    let len = rng.gen_range(1..=4);
    PathWord::new((0..len).map(|_| Segment::new(random_cvec(n, 1.0, rng), rng.gen_range(-1.0..1.0))).collect())
}

fn splitting_suite() -> Verdict {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    for (name, g) in corpus() {
        let h = match build_hull(&g, &tol, 0) {
            Ok(h) => h,
            Err(e) => return verdict(false, format!("{name}: {e}")),
        };
        let s = h.split.residuals(&tol);
        if s.nbar_class.is_none() {
            return verdict(false, format!("{name}: nbar not nilpotent"));
        }
        worst = worst.max(s.ideal).max(s.derived_in_nbar).max(s.closure);
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(worst < 1e-9 && secs < 30.0, format!("27 algebras, worst residual {worst:.2e}, {secs:.2} s"))
}

fn ad_s_kernel() -> Verdict {
    let tol = Tolerances::default();
    let (mut hom, mut dist) = (0.0f64, 0.0f64);
    for (name, g) in corpus() {
        let (ad_s, n) = match (semisimple_adjoint(&g, &tol, 0), nilradical(&g, &tol, 0)) {
            (Ok(a), Ok(n)) => (a, n),
            (Err(e), _) | (_, Err(e)) => return verdict(false, format!("{name}: {e}")),
        };
        hom = hom.max(ad_s.homomorphism_residual(&g));
        dist = dist.max(subspace_distance(ad_s.kernel(&tol).basis(), n.basis()));
    }
    verdict(hom < 1e-9 && dist < 1e-8, format!("homomorphism {hom:.2e}, kernel distance {dist:.2e}"))
}

fn flatness() -> Verdict {
    let tol = Tolerances::default();
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, r) in [("sol", 4), ("sect4", 10)] {
        let ex = builtins::by_name(name).unwrap();
        match build_hull(&ex.algebra, &tol, 0) {
            Ok(h) => {
                let f = h.connection.residuals(&ex.algebra).flatness;
                pass &= f < 1e-9 && h.connection.dim_rep == r;
                parts.push(format!("{name}: r={} flatness {f:.2e}", h.connection.dim_rep));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    verdict(pass, parts.join("; "))
}

fn diagonal_in_l() -> Verdict {
    let tol = Tolerances::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for name in builtins::NAMES {
        let ex = builtins::by_name(name).unwrap();
        let h = match build_hull(&ex.algebra, &tol, 0) {
            Ok(h) => h,
            Err(e) => return verdict(false, format!("{name}: {e}")),
        };
        let cf = &h.connection;
        let rounding = cf.residuals(&ex.algebra).l_rounding;
        pass &= rounding < 1e-6;
        parts.push(format!("{name}: rounding {rounding:.2e}"));
        if name == "sect4" {
            // L must be spanned by i*pi*dt, with coordinates in {0, 1, 2}
            if cf.l_basis.len() != 1 {
                return verdict(false, format!("sect4: L has rank {}", cf.l_basis.len()));
            }
            let mut ipi_dt = CVec::zeros(3);
            ipi_dt[0] = c(0.0, PI);
            let d_plus = max_abs_vec(&(&cf.l_basis[0] - &ipi_dt));
            let d_minus = max_abs_vec(&(&cf.l_basis[0] + &ipi_dt));
            let generator_ok = d_plus < 1e-9 || d_minus < 1e-9;
            let sign = if d_plus < 1e-9 { 1 } else { -1 };
            let mut set: Vec<i64> = cf.l_coords.iter().map(|v| sign * v[0]).collect();
            set.sort();
            set.dedup();
            pass &= generator_ok && set == vec![0, 1, 2];
            parts.push(format!("sect4 coefficient set over i*pi*dt {set:?}"));
        }
    }
    verdict(pass, parts.join("; "))
}

fn series_convergence() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst, mut cases) = (0.0f64, 0);
    let mut bound_ok = true;
    while cases < 50 {
        let n = rng.gen_range(1..=4);
        let path = random_path(n, &mut rng);
        let letters = rng.gen_range(1..=3);
        let exponents = (0..=letters).map(|_| random_cvec(n, 0.7, &mut rng)).collect();
        let word = IntegralWord::new(exponents, (0..letters).map(|_| random_cvec(n, 0.7, &mut rng)).collect())
            .expect("one more exponent than letters");
        let s = exp_iterated_integral_series(&word, &path, 25);
        if s.norm_a > 4.0 {
            continue;
        }
        cases += 1;
        let gap = (s.value - exp_iterated_integral(&word, &path)).norm();
        worst = worst.max(gap);
        bound_ok &= gap <= s.tail_bound + 1e-12;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst < 1e-8 && bound_ok && secs < 20.0,
        format!("50 cases, worst gap {worst:.2e}, tail bound valid {bound_ok}, {secs:.2} s"),
    )
}

fn monodromy_consistency() -> Verdict {
    let tol = Tolerances::default();
    let (mut hom, mut indep) = (0.0f64, 0.0f64);
    for name in builtins::NAMES {
        let ex = builtins::by_name(name).unwrap();
        let run = || -> solvhull::Result<(f64, f64)> {
            let h = build_hull(&ex.algebra, &tol, 0)?;
            let rho = monodromy(&h.connection, &ex.lattice, &ex.model, &tol)?;
            let mut worst = 0.0f64;
            for (i, (_, g)) in ex.lattice.generators.iter().enumerate() {
                worst = worst.max(verify_path_independence(&h.connection, &ex.model, g, 20, i as u64, &tol)?);
            }
            Ok((rho.homomorphism_residual, worst))
        };
        match run() {
            Ok((a, b)) => {
                hom = hom.max(a);
                indep = indep.max(b);
            }
            Err(e) => return verdict(false, format!("{name}: {e}")),
        }
    }
    verdict(hom < 1e-8 && indep < 1e-8, format!("pair residual {hom:.2e}, detour residual {indep:.2e}"))
}

fn sect4_unipotent() -> Verdict {
    let tol = Tolerances::default();
    let ex = builtins::sect4();
    let h = build_hull(&ex.algebra, &tol, 0).expect("sect4 hull");
    let rho = monodromy(&h.connection, &ex.lattice, &ex.model, &tol).expect("sect4 monodromy");
    let r = rho.rep_dim;
    let mut letters: Vec<CMat> = Vec::new();
    for (_, m) in &rho.images {
        letters.push(m.clone());
        letters.push(m.clone().try_inverse().expect("invertible image"));
    }
    let defect = |m: &CMat| (0..r).map(|k| (m[(k, k)] - ONE).norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    let mut frontier = vec![CMat::identity(r, r)];
    let mut count = 0usize;
    for _ in 0..4 {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                let m = w * l;
                worst = worst.max(defect(&m));
                next.push(m);
            }
        }
        count += next.len();
        frontier = next;
    }
    let t_loop = &ex.paths.iter().find(|(n, _)| n == "t_loop").expect("t_loop").1;
    let mut ipi_dt = CVec::zeros(3);
    ipi_dt[0] = c(0.0, PI);
    let word = IntegralWord::new(vec![ipi_dt], vec![]).expect("single exponent");
    let value = exp_iterated_integral(&word, t_loop);
    let gap = (value - ONE).norm();
    verdict(
        worst < 1e-9 && gap < 1e-12,
        format!("{count} words, worst diagonal defect {worst:.2e}; |int e^(i pi dt) - 1| = {gap:.2e}"),
    )
}

fn chen_separation() -> Verdict {
    let tol = Tolerances::default();
    let ex = builtins::sol();
    let h = build_hull(&ex.algebra, &tol, 0).expect("sol hull");
    match separation_demo(&h.connection, &ex.lattice, &ex.model, ("a", "b1"), ("b1", "b2"), &tol) {
        Ok(s) => verdict(
            s.chen_value.norm() < 1e-12 && s.rho_distance >= 0.1 && s.control_distance < 1e-10,
            format!(
                "|int dt| {:.2e}, |rho - I| {:.3}, control |rho - I| {:.2e}",
                s.chen_value.norm(),
                s.rho_distance,
                s.control_distance
            ),
        ),
        Err(e) => verdict(false, e.to_string()),
    }
}

fn oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut paths: Vec<PathWord> = builtins::NAMES
        .iter()
        .flat_map(|n| builtins::by_name(n).unwrap().paths.into_iter().map(|p| p.1))
        .filter(|p| p.segments[0].direction.len() == 3)
        .collect();
    paths.extend((0..10).map(|_| random_path(3, &mut rng)));
    let mut quad = 0.0f64;
    for p in &paths {
        for depth in 1..=3 {
            let forms: Vec<CVec> = (0..depth).map(|_| random_cvec(3, 1.0, &mut rng)).collect();
            quad = quad.max((iterated_integral(&forms, p) - iterated_integral_quadrature(&forms, p, 10_000)).norm());
        }
    }
    let mut shuffle = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let p = random_path(n, &mut rng);
        shuffle = shuffle.max(shuffle_check(&random_cvec(n, 1.0, &mut rng), &random_cvec(n, 1.0, &mut rng), &p));
    }
    verdict(
        quad < 1e-3 && shuffle < 1e-10,
        format!("{} paths, quadrature gap {quad:.2e}, shuffle residual {shuffle:.2e}", paths.len()),
    )
}

fn full_verify() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_solvhull");
    let mut parts = Vec::new();
    let mut pass = true;
    for name in builtins::NAMES {
        let start = Instant::now();
        let runs: Vec<_> = (0..2)
            .map(|_| Command::new(bin).args(["verify", "--example", name, "--seed", "7"]).output())
            .collect();
        let elapsed = start.elapsed() / 2;
        let outs: Vec<_> = match runs.into_iter().collect::<Result<Vec<_>, _>>() {
            Ok(o) => o,
            Err(e) => return verdict(false, format!("{name}: {e}")),
        };
        let ok = outs.iter().all(|o| o.status.code() == Some(0));
        let same = outs[0].stdout == outs[1].stdout && !outs[0].stdout.is_empty();
        pass &= ok && same && elapsed < Duration::from_secs(60);
        parts.push(format!("{name}: exit 0 {ok}, identical {same}, {:.2} s", elapsed.as_secs_f64()));
    }
    verdict(pass, parts.join("; "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("semisimple splitting", splitting_suite),
        ("ad_s homomorphism with nilradical kernel", ad_s_kernel),
        ("flatness of psi*", flatness),
        ("diagonal characters in L", diagonal_in_l),
        ("series convergence", series_convergence),
        ("monodromy homomorphism and path independence", monodromy_consistency),
        ("sect4 unipotent monodromy", sect4_unipotent),
        ("Chen vs exponential separation", chen_separation),
        ("oracle equivalence", oracle_equivalence),
        ("full verify", full_verify),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        println!("criterion {:>2} {}: {} ({})", i + 1, if v.pass { "PASS" } else { "FAIL" }, name, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
