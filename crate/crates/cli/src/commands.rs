use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use solvhull::hull::{build_hull, Hull};
use solvhull::lie::{jordan_decompose, semisimple_adjoint, LieAlgebra, Solvability, Subspace};
use solvhull::linalg::{c, is_nilpotent, max_abs, max_abs_diff, subspace_distance, CMat, CVec};
use solvhull::monodromy::{
    closedness_check, loop_of, monodromy, verify_path_independence, GroupElement, Lattice, SemidirectModel,
};
use solvhull::paths::{
    exp_iterated_integral, exp_iterated_integral_series, iterated_integral, iterated_integral_quadrature,
    shuffle_check, transport, IntegralWord, PathWord, Segment,
};
use solvhull::{Error, Tolerances};

use crate::dsl::parse_integral_word;
use crate::report::{self, complex, matrix, num, vector};
use crate::spec::{Inputs, SpecFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_ENDPOINT: i32 = 4;

/// Wall-clock budget for `verify`.
pub const VERIFY_BUDGET_SECS: f64 = 60.0;
pub const QUADRATURE_STEPS: usize = 10_000;

#[derive(Debug, Clone)]
pub enum Command {
    Analyze,
    Hull,
    Monodromy,
    Integrate { path: Option<String>, word: Option<String>, integral: String },
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Hull => "hull",
            Command::Monodromy => "monodromy",
            Command::Integrate { .. } => "integrate",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub tol_alg: Option<f64>,
    pub tol_num: Option<f64>,
    pub depth: Option<usize>,
}

pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
    /// Seconds spent, kept out of the report so that it stays reproducible.
    pub elapsed: f64,
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::IndexOutOfRange { .. }
        | Error::DimensionMismatch { .. }
        | Error::AntisymmetryViolation { .. }
        | Error::JacobiViolation { .. }
        | Error::NotSolvable { .. }
        | Error::InvalidModel(_)
        | Error::InvalidPath(_)
        | Error::MalformedWord(_)
        | Error::UnknownGenerator(_) => EXIT_VALIDATION,
        Error::TruncationOverflow { .. } => EXIT_RESOURCE,
        Error::EndpointMismatch { .. } => EXIT_ENDPOINT,
        Error::NotNilpotent { .. }
        | Error::EigenClusterAmbiguity { .. }
        | Error::DefectiveEigenbasis { .. }
        | Error::NotTriangular { .. }
        | Error::NotInLattice { .. } => EXIT_INVARIANT,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::IndexOutOfRange { .. } => "IndexOutOfRange",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::AntisymmetryViolation { .. } => "AntisymmetryViolation",
        Error::JacobiViolation { .. } => "JacobiViolation",
        Error::NotSolvable { .. } => "NotSolvable",
        Error::NotNilpotent { .. } => "NotNilpotent",
        Error::EigenClusterAmbiguity { .. } => "EigenClusterAmbiguity",
        Error::DefectiveEigenbasis { .. } => "DefectiveEigenbasis",
        Error::TruncationOverflow { .. } => "TruncationOverflow",
        Error::NotTriangular { .. } => "NotTriangular",
        Error::NotInLattice { .. } => "NotInLattice",
        Error::EndpointMismatch { .. } => "EndpointMismatch",
        Error::InvalidModel(_) => "InvalidModel",
        Error::InvalidPath(_) => "InvalidPath",
        Error::MalformedWord(_) => "MalformedWord",
        Error::UnknownGenerator(_) => "UnknownGenerator",
    }
}

pub fn error_body(e: &Error, names: Option<&[String]>) -> Value {
    let mut o = Map::new();
    o.insert("kind".into(), json!(error_kind(e)));
    o.insert("message".into(), json!(e.to_string()));
    if let Error::JacobiViolation { triple, residual } = e {
        o.insert("triple".into(), json!([triple.0, triple.1, triple.2]));
        if let Some(names) = names {
            o.insert("triple_names".into(), json!([names[triple.0], names[triple.1], names[triple.2]]));
        }
        o.insert("residual".into(), num(*residual));
    }
    Value::Object(o)
}

/// Pass/fail bookkeeping for residual checks.
#[derive(Default)]
struct Checks {
    items: Vec<(String, Value, bool)>,
}

impl Checks {
    fn below(&mut self, name: &str, value: f64, threshold: f64) {
        let pass = value.is_finite() && value < threshold;
        self.items.push((name.into(), json!({"value": num(value), "threshold": num(threshold), "pass": pass}), pass));
    }

    fn flag(&mut self, name: &str, pass: bool, detail: Value) {
        self.items.push((name.into(), json!({"detail": detail, "pass": pass}), pass));
    }

    fn pass(&self) -> bool {
        self.items.iter().all(|i| i.2)
    }

    fn worst(&self) -> f64 {
        self.items
            .iter()
            .filter_map(|(_, v, _)| v.get("threshold").and(v.get("value")).and_then(Value::as_f64))
            .fold(0.0, f64::max)
    }

    fn to_value(&self) -> Value {
        let mut o = Map::new();
        for (name, v, _) in &self.items {
            o.insert(name.clone(), v.clone());
        }
        json!({"checks": Value::Object(o), "pass": self.pass(), "worst_residual": num(self.worst())})
    }
}

fn tolerances(spec: &SpecFile, opts: &Options) -> Tolerances {
    let mut t = spec.tolerances();
    if let Some(a) = opts.tol_alg {
        t.alg = a;
    }
    if let Some(n) = opts.tol_num {
        t.num = n;
    }
    t
}

fn solvability_value(s: &Solvability) -> Value {
    match s {
        Solvability::Abelian => json!({"kind": "abelian"}),
        Solvability::Nilpotent { class } => json!({"kind": "nilpotent", "class": class}),
        Solvability::Solvable { derived_length } => json!({"kind": "solvable", "derived_length": derived_length}),
    }
}

fn sparse_structure(g: &LieAlgebra, tol: f64) -> Value {
    let n = g.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                let z = g.constant(i, j, k);
                if z.norm() > tol {
                    out.push(json!([i, j, k, num(z.re), num(z.im)]));
                }
            }
        }
    }
    Value::Array(out)
}

pub fn run(cmd: &Command, spec: &SpecFile, source: &str, opts: &Options) -> Outcome {
    let start = Instant::now();
    let tol = tolerances(spec, opts);
    let seed = opts.seed.or(spec.seed).unwrap_or(0);
    let mut envelope = Map::new();
    envelope.insert("command".into(), json!(cmd.name()));
    envelope.insert("source".into(), json!(source));
    envelope.insert("input_digest".into(), json!(report::digest(&spec.to_json())));
    envelope.insert("seed".into(), json!(seed));
    envelope.insert("tolerances".into(), report::tolerances(&tol));
    if let Command::Integrate { path, word, integral } = cmd {
        envelope.insert("arguments".into(), json!({"path": path, "word": word, "integral": integral}));
    }
    if let Some(d) = opts.depth {
        envelope.insert("depth".into(), json!(d));
    }

    let inputs = spec.inputs().map(|mut i| {
        i.tolerances = tol.clone();
        i.seed = seed;
        i
    });
    let result = match inputs {
        Err(e) => Err(e),
        Ok(inputs) => match cmd {
            Command::Analyze => analyze(&inputs),
            Command::Hull => hull(&inputs),
            Command::Monodromy => cmd_monodromy(&inputs),
            Command::Integrate { path, word, integral } => {
                integrate(&inputs, path.as_deref(), word.as_deref(), integral, opts.depth.unwrap_or(25))
            }
            Command::Verify => verify(&inputs, opts.depth.unwrap_or(25)),
        },
    };
    let exit_code = match result {
        Ok((results, pass)) => {
            envelope.insert("results".into(), results);
            envelope.insert("pass".into(), json!(pass));
            if pass {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            }
        }
        Err(e) => {
            envelope.insert("error".into(), error_body(&e, Some(&spec.algebra.basis)));
            envelope.insert("pass".into(), json!(false));
            exit_code_for(&e)
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    if matches!(cmd, Command::Verify) {
        envelope.insert("runtime_budget_seconds".into(), num(VERIFY_BUDGET_SECS));
        envelope.insert("runtime_budget_ok".into(), json!(elapsed < VERIFY_BUDGET_SECS));
    }
    envelope.insert("exit_code".into(), json!(exit_code));
    Outcome { report: Value::Object(envelope), exit_code, elapsed }
}

type CmdResult = solvhull::Result<(Value, bool)>;

fn analyze(inputs: &Inputs) -> CmdResult {
    let g = &inputs.algebra;
    let tol = &inputs.tolerances;
    let class = g.validate(tol.alg)?;
    let ad_s = semisimple_adjoint(g, tol, inputs.seed)?;
    let mut checks = Checks::default();
    let n = &ad_s.nilradical;
    checks.below("nilradical_ideal", g.ideal_residual(n), tol.alg);
    checks.below("derived_in_nilradical", n.containment_residual(&g.derived_algebra(tol.alg)), tol.alg);
    checks.below("ad_s_derivation", ad_s.derivation_residual(g), tol.alg);
    checks.below("ad_s_homomorphism", ad_s.homomorphism_residual(g), tol.alg);
    checks.below("kernel_vs_nilradical", subspace_distance(ad_s.kernel(tol).basis(), n.basis()), 1e-8);
    let mut jordan = Vec::new();
    let mut worst_jordan = 0.0f64;
    for i in 0..g.dim() {
        let jd = jordan_decompose(&g.adjoint_basis(i), tol)?;
        let r = jd.residuals(&g.adjoint_basis(i));
        worst_jordan = worst_jordan.max(r.worst());
        jordan.push(json!({
            "basis": g.names()[i],
            "sum": num(r.sum),
            "commutator": num(r.commutator),
            "nilpotency": num(r.nilpotency),
        }));
    }
    checks.below("jordan", worst_jordan, tol.alg);
    let results = json!({
        "dim": g.dim(),
        "basis": g.names(),
        "solvability": solvability_value(&class),
        "nilradical": {
            "dim": n.dim(),
            "basis": n.basis_vectors().iter().map(vector).collect::<Vec<_>>(),
        },
        "ad_s": g.names().iter().zip(&ad_s.per_basis).map(|(name, m)| json!({"basis": name, "matrix": matrix(m)})).collect::<Vec<_>>(),
        "jordan_residuals": jordan,
        "residuals": checks.to_value(),
    });
    Ok((results, checks.pass()))
}

fn hull_value(g: &LieAlgebra, h: &Hull, tol: &Tolerances) -> (Value, Checks) {
    let mut checks = Checks::default();
    let s = h.split.residuals(tol);
    checks.flag("nbar_nilpotent", s.nbar_class.is_some(), json!(s.nbar_class));
    checks.below("nbar_ideal", s.ideal, tol.alg);
    checks.below("derived_in_nbar", s.derived_in_nbar, tol.alg);
    checks.below("nbar_closure", s.closure, tol.alg);
    checks.below("gbar_jacobi", s.gbar_jacobi, tol.alg);
    checks.flag("direct_sum", s.direct_sum_rank == h.split.q() + h.split.n(), json!(s.direct_sum_rank));
    checks.flag("embedding_injective", s.embedding_rank == h.split.n(), json!(s.embedding_rank));
    let e = h.rep.residuals(&h.split, tol);
    checks.below("rep_homomorphism", e.homomorphism, tol.alg);
    checks.below("rep_derivation", e.derivation, tol.alg);
    checks.below("rep_faithful_on_unit", e.faithful_on_unit, tol.alg);
    checks.flag("rep_faithful_on_gbar", e.gbar_rank == h.split.q() + h.split.n(), json!(e.gbar_rank));
    let cf = &h.connection;
    let r = cf.residuals(g);
    checks.below("flatness", r.flatness, tol.alg);
    checks.below("triangular", r.triangular, tol.alg);
    checks.below("l_closed", r.closedness, tol.alg);
    checks.flag("psi_injective", r.injective_rank == g.dim(), json!(r.injective_rank));
    checks.below("l_integer_rounding", r.l_rounding, tol.int);
    let characters: Vec<Value> = cf
        .diag_characters
        .iter()
        .zip(&cf.l_coords)
        .zip(&cf.labels)
        .map(|((ch, coords), label)| json!({"monomial": label, "covector": vector(ch), "l_coordinates": coords}))
        .collect();
    let value = json!({
        "q": h.split.q(),
        "nbar": {
            "basis": h.split.nbar.names(),
            "structure": sparse_structure(&h.split.nbar, tol.alg),
            "class": s.nbar_class,
        },
        "grading": format!("{:?}", h.rep.grading).to_lowercase(),
        "r": cf.dim_rep,
        "monomials": cf.labels,
        "psi": g.names().iter().zip(&cf.psi).map(|(name, m)| json!({"basis": name, "matrix": matrix(m)})).collect::<Vec<_>>(),
        "diagonal_characters": characters,
        "l_basis": cf.l_basis.iter().map(vector).collect::<Vec<_>>(),
        "l_is_basis": cf.l_is_basis,
        "residuals": checks.to_value(),
    });
    (value, checks)
}

fn hull(inputs: &Inputs) -> CmdResult {
    let g = &inputs.algebra;
    g.validate(inputs.tolerances.alg)?;
    let h = build_hull(g, &inputs.tolerances, inputs.seed)?;
    let (value, checks) = hull_value(g, &h, &inputs.tolerances);
    Ok((value, checks.pass()))
}

fn model_and_lattice(inputs: &Inputs) -> solvhull::Result<(&SemidirectModel, &Lattice)> {
    let model = inputs.model.as_ref().ok_or_else(|| Error::InvalidModel("spec has no model".into()))?;
    let lattice = inputs.lattice.as_ref().ok_or_else(|| Error::InvalidModel("spec has no lattice".into()))?;
    let derived = model.validate(&inputs.tolerances)?;
    let gap = derived
        .table()
        .iter()
        .zip(inputs.algebra.table())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if gap >= inputs.tolerances.alg {
        return Err(Error::InvalidModel(format!("model algebra differs from the spec algebra by {gap:.3e}")));
    }
    Ok((model, lattice))
}

fn cmd_monodromy(inputs: &Inputs) -> CmdResult {
    let tol = &inputs.tolerances;
    inputs.algebra.validate(tol.alg)?;
    let (model, lattice) = model_and_lattice(inputs)?;
    let h = build_hull(&inputs.algebra, tol, inputs.seed)?;
    let rho = monodromy(&h.connection, lattice, model, tol)?;
    let mut checks = Checks::default();
    checks.below("group_relations", lattice.relation_residual(model)?, tol.num);
    checks.below("homomorphism", rho.homomorphism_residual, tol.num);
    checks.below("relations", rho.relation_residual, tol.num);
    checks.below("diagonal_characters", rho.diagonal_residual, tol.num);
    checks.below("triangular", rho.triangular_residual, tol.alg);
    let images: Vec<Value> = rho
        .images
        .iter()
        .map(|(name, m)| {
            let unipotent = (0..m.nrows()).map(|k| (m[(k, k)] - c(1.0, 0.0)).norm()).fold(0.0, f64::max);
            json!({
                "generator": name,
                "matrix": matrix(m),
                "distance_from_identity": num(max_abs(&(m - CMat::identity(m.nrows(), m.ncols())))),
                "unipotency_defect": num(unipotent),
            })
        })
        .collect();
    let results = json!({"r": rho.rep_dim, "images": images, "residuals": checks.to_value()});
    Ok((results, checks.pass()))
}

fn integrate(inputs: &Inputs, path: Option<&str>, word: Option<&str>, integral: &str, depth: usize) -> CmdResult {
    let tol = &inputs.tolerances;
    inputs.algebra.validate(tol.alg)?;
    let iw = parse_integral_word(integral, inputs.algebra.names())?;
    let p = match (path, word) {
        (Some(name), None) => inputs
            .paths
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| Error::InvalidPath(format!("no path named `{name}`")))?,
        (None, Some(w)) => {
            let (model, lattice) = model_and_lattice(inputs)?;
            lattice.word_path(model, &lattice.parse_word(w)?, tol.num)?
        }
        _ => return Err(Error::InvalidPath("give exactly one of --path or --word".into())),
    };
    let transport_value = exp_iterated_integral(&iw, &p);
    let series = exp_iterated_integral_series(&iw, &p, depth);
    let mut checks = Checks::default();
    let series_gap = (series.value - transport_value).norm();
    checks.below("series_vs_transport_within_tail_bound", series_gap, series.tail_bound.max(tol.num));
    let mut values = Map::new();
    values.insert("transport".into(), complex(transport_value));
    values.insert(
        "series".into(),
        json!({"value": complex(series.value), "depth": depth, "tail_bound": num(series.tail_bound), "norm_a": num(series.norm_a)}),
    );
    let ordinary = iw.exponents.iter().all(|e| e.iter().all(|z| z.norm() == 0.0));
    if ordinary {
        let exact = iterated_integral(&iw.letters, &p);
        let quad = iterated_integral_quadrature(&iw.letters, &p, QUADRATURE_STEPS);
        values.insert("chen_exact".into(), complex(exact));
        values.insert("quadrature".into(), json!({"value": complex(quad), "subdivisions": QUADRATURE_STEPS}));
        checks.below("exact_vs_transport", (exact - transport_value).norm(), tol.exact);
        checks.below("exact_vs_quadrature", (exact - quad).norm(), 1e-3);
    }
    let results = json!({
        "segments": p.len(),
        "values": Value::Object(values),
        "exponent_closedness_residual": num(iw.closedness_residual(&inputs.algebra)),
        "residuals": checks.to_value(),
    });
    Ok((results, checks.pass()))
}

fn random_cvec(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> CVec {
    CVec::from_fn(n, |_, _| c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
}

fn random_path(n: usize, rng: &mut ChaCha8Rng) -> PathWord {
    let len = rng.gen_range(1..=4);
    PathWord::new((0..len).map(|_| Segment::new(random_cvec(n, 1.0, rng), rng.gen_range(-1.0..1.0))).collect())
}

fn random_element(model: &SemidirectModel, rng: &mut ChaCha8Rng) -> GroupElement {
    GroupElement { t: (0..model.k).map(|_| rng.gen_range(-1.0..1.0)).collect(), v: random_cvec(model.m, 1.0, rng) }
}

fn verify_lie(g: &LieAlgebra, tol: &Tolerances, seed: u64, rng: &mut ChaCha8Rng) -> solvhull::Result<Checks> {
    let n = g.dim();
    let ad_s = semisimple_adjoint(g, tol, seed)?;
    let nil = &ad_s.nilradical;
    let mut checks = Checks::default();
    checks.below("nilradical_ideal", g.ideal_residual(nil), tol.alg);
    checks.below("derived_in_nilradical", nil.containment_residual(&g.derived_algebra(tol.alg)), tol.alg);
    let members_nilpotent = nil.basis_vectors().iter().all(|v| is_nilpotent(&g.adjoint(v), tol.alg));
    checks.flag("nilradical_members_nilpotent", members_nilpotent, json!(nil.dim()));
    // every enlargement by a basis vector outside the nilradical must contain non-nilpotent elements
    let mut maximal = true;
    for i in 0..n {
        let e = g.basis_vector(i);
        if nil.contains(&e, tol.alg) {
            continue;
        }
        let enlarged = nil.sum(&Subspace::from_vectors(n, &[e.clone()], tol.alg), tol.alg);
        for _ in 0..50 {
            let coeffs = random_cvec(enlarged.dim(), 1.0, rng);
            let x = enlarged.basis() * coeffs;
            if is_nilpotent(&g.adjoint(&x), tol.alg) {
                maximal = false;
            }
        }
    }
    checks.flag("nilradical_maximal", maximal, json!(50));
    checks.below("ad_s_derivation", ad_s.derivation_residual(g), tol.alg);
    checks.below("ad_s_homomorphism", ad_s.homomorphism_residual(g), tol.alg);
    checks.below("kernel_vs_nilradical", subspace_distance(ad_s.kernel(tol).basis(), nil.basis()), 1e-8);
    let mut linear = 0.0f64;
    for _ in 0..20 {
        let (x, y) = (random_cvec(n, 1.0, rng), random_cvec(n, 1.0, rng));
        let (a, b) = (c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), 0.0));
        let lhs = ad_s.apply(&(&x * a + &y * b));
        let rhs = ad_s.apply(&x) * a + ad_s.apply(&y) * b;
        linear = linear.max(max_abs_diff(&lhs, &rhs));
    }
    checks.below("ad_s_linear", linear, tol.alg);
    let mut jordan = 0.0f64;
    for i in 0..n {
        let ad = g.adjoint_basis(i);
        jordan = jordan.max(jordan_decompose(&ad, tol)?.residuals(&ad).worst());
    }
    checks.below("jordan_basis_adjoints", jordan, tol.alg);
    Ok(checks)
}

fn verify_paths(h: &Hull, n: usize, depth: usize, tol: &Tolerances, rng: &mut ChaCha8Rng) -> Checks {
    let cf = &h.connection;
    let mut checks = Checks::default();
    let (mut mult, mut shuffle, mut subdiv, mut series, mut quad) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut bound_ok = true;
    for _ in 0..20 {
        let p = random_path(n, rng);
        let k = rng.gen_range(0..=p.len());
        let (a, b) = (PathWord::new(p.segments[..k].to_vec()), PathWord::new(p.segments[k..].to_vec()));
        mult = mult.max(max_abs_diff(&transport(cf, &p), &(transport(cf, &a) * transport(cf, &b))));
        let (w1, w2) = (random_cvec(n, 1.0, rng), random_cvec(n, 1.0, rng));
        shuffle = shuffle.max(shuffle_check(&w1, &w2, &p));
        let q = p.subdivide(rng.gen_range(0..p.len()), rng.gen_range(0.1..0.9));
        let forms = vec![w1.clone(), w2.clone(), w1.clone()];
        subdiv = subdiv.max((iterated_integral(&forms, &p) - iterated_integral(&forms, &q)).norm());
        quad = quad.max((iterated_integral(&forms, &p) - iterated_integral_quadrature(&forms, &p, QUADRATURE_STEPS)).norm());
        let word = IntegralWord::new(vec![random_cvec(n, 0.5, rng), random_cvec(n, 0.5, rng)], vec![w2.clone()])
            .expect("two exponents and one letter");
        let s = exp_iterated_integral_series(&word, &p, depth);
        if s.norm_a <= 4.0 {
            let gap = (s.value - exp_iterated_integral(&word, &p)).norm();
            series = series.max(gap);
            bound_ok &= gap <= s.tail_bound + tol.exact;
        }
    }
    checks.below("transport_multiplicative", mult, tol.exact);
    checks.below("shuffle", shuffle, tol.exact);
    checks.below("subdivision_invariance", subdiv, 1e-12);
    checks.below("quadrature_vs_exact", quad, 1e-3);
    checks.below("series_vs_transport", series, tol.num);
    checks.flag("tail_bound_valid", bound_ok, json!(depth));
    checks
}

fn verify_monodromy(
    h: &Hull,
    model: &SemidirectModel,
    lattice: &Lattice,
    tol: &Tolerances,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> solvhull::Result<Checks> {
    let cf = &h.connection;
    let mut checks = Checks::default();
    let mut assoc = 0.0f64;
    for _ in 0..50 {
        let (x, y, z) = (random_element(model, rng), random_element(model, rng), random_element(model, rng));
        let l = model.mul(&model.mul(&x, &y), &z);
        let r = model.mul(&x, &model.mul(&y, &z));
        assoc = assoc.max(l.distance(&r)).max(model.mul(&x, &model.inverse(&x)).distance(&model.identity()));
    }
    checks.below("group_axioms", assoc, tol.exact);
    checks.below("group_relations", lattice.relation_residual(model)?, tol.num);
    let rho = monodromy(cf, lattice, model, tol)?;
    checks.below("rho_homomorphism", rho.homomorphism_residual, tol.num);
    checks.below("rho_relations", rho.relation_residual, tol.num);
    checks.below("diagonal_characters", rho.diagonal_residual, 1e-10);
    checks.below("rho_triangular", rho.triangular_residual, tol.alg);
    let mut indep = 0.0f64;
    let mut closed = 0.0f64;
    for (i, (_, g)) in lattice.generators.iter().enumerate() {
        let sub = seed.wrapping_mul(1000).wrapping_add(i as u64);
        indep = indep.max(verify_path_independence(cf, model, g, 20, sub, tol)?);
        loop_of(model, g, tol.num)?;
        for ch in &cf.diag_characters {
            let word = IntegralWord::new(vec![ch.clone()], vec![]).expect("single exponent");
            closed = closed.max(closedness_check(&word, g, model, 5, sub, tol)?.deviation);
        }
    }
    checks.below("path_independence", indep, tol.num);
    checks.below("diagonal_entries_closed", closed, 1e-10);
    Ok(checks)
}

fn verify(inputs: &Inputs, depth: usize) -> CmdResult {
    let g = &inputs.algebra;
    let tol = &inputs.tolerances;
    let mut groups = Map::new();
    let mut pass = true;
    let mut record = |name: &str, r: solvhull::Result<Checks>, groups: &mut Map<String, Value>| -> bool {
        match r {
            Ok(ch) => {
                pass &= ch.pass();
                groups.insert(name.into(), ch.to_value());
                true
            }
            Err(e) => {
                pass = false;
                groups.insert(name.into(), json!({"pass": false, "error": error_body(&e, Some(g.names()))}));
                false
            }
        }
    };
    // malformed input is a validation error, not a failed check
    let class = g.validate(tol.alg)?;
    let mut ch = Checks::default();
    ch.flag("solvable", true, solvability_value(&class));
    ch.below("jacobi", g.jacobi_residual().1, tol.alg);
    record("algebra", Ok(ch), &mut groups);
    let mut rng = ChaCha8Rng::seed_from_u64(inputs.seed);
    record("lie_core", verify_lie(g, tol, inputs.seed, &mut rng), &mut groups);
    let hull = build_hull(g, tol, inputs.seed);
    match hull {
        Err(e) => {
            record("splitting_hull", Err(e), &mut groups);
        }
        Ok(h) => {
            let (_, checks) = hull_value(g, &h, tol);
            record("splitting_hull", Ok(checks), &mut groups);
            record("paths", Ok(verify_paths(&h, g.dim(), depth, tol, &mut rng)), &mut groups);
            if inputs.model.is_some() || inputs.lattice.is_some() {
                let r = model_and_lattice(inputs)
                    .and_then(|(model, lattice)| verify_monodromy(&h, model, lattice, tol, inputs.seed, &mut rng));
                record("monodromy", r, &mut groups);
            }
        }
    }
    Ok((json!({"groups": Value::Object(groups)}), pass))
}

pub fn render(outcome: &Outcome) -> String {
    report::render(&outcome.report)
}
