//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p kql-cli --test acceptance`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{affine_dynkin, brute_force, quiver_edges, same_graph, tiny_corpus, Fp};
use kql_core::descent::{d_invariance_check, descend_ideal};
use kql_core::mckay::{character_table, mckay_quiver, GroupSpec, Vertex};
use kql_core::monad::{
    adhm_to_ideal, build_monad, ideal_to_adhm, invariant_sections_check, isotypic_decomposition, koszul_middle_check,
    monad_fiber_check, orbit_union_ideal, random_orbit_points, sample_points, tangent_dimension, witness_module,
    EquivariantIdeal,
};
use kql_core::pi_module::{quiver_to_adhm, AdhmDatum, QuiverModule};
use kql_core::poly::{Poly, Ring};
use kql_core::stability::{
    c_plus_representative, concentrate, dimension_bound_check, is_semistable, is_stable, theta_i, theta_zero_for,
};
use kql_core::{Complex, Rational, Scalar};

/// Outcome of one criterion: a detail line, or the reason it failed.
type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_s, || format!("took {:.2} s, limit {limit_s} s", elapsed.as_secs_f64()))
}

fn q(v: i64) -> Rational {
    Rational::integer(v)
}

fn mckay_correspondence() -> Check {
    let start = Instant::now();
    let mut groups: Vec<GroupSpec> = (1..=6).map(GroupSpec::A).collect();
    groups.extend([GroupSpec::D(4), GroupSpec::D(5), GroupSpec::E6, GroupSpec::E7, GroupSpec::E8]);
    for &g in &groups {
        let quiver = mckay_quiver(&character_table(g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let (n, edges) = affine_dynkin(g);
        ensure(same_graph((quiver.num_vertices(), &quiver_edges(&quiver)), (n, &edges)), || {
            format!("{g}: graph is not the affine diagram")
        })?;
        let delta: Vec<i64> = quiver.dims.iter().map(|&d| d as i64).collect();
        for i in 0..delta.len() {
            let row: i64 =
                (0..delta.len()).map(|j| (2 * (i == j) as i64 - quiver.multiplicity[i][j] as i64) * delta[j]).sum();
            ensure(row == 0, || format!("{g}: (C delta)_{i} = {row}"))?;
        }
    }
    within(start.elapsed(), 1.0)?;
    Ok(format!("{} groups", groups.len()))
}

fn moment_map() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for m in [2u32, 3] {
        for n in 1..=3 {
            for r in 1..=2 {
                let points = random_orbit_points(m as usize, n, 100 + n as u64);
                let exact = witness_module::<Rational>(GroupSpec::A(m), &points, r).map_err(|e| e.to_string())?;
                ensure(exact.is_pi_module(0.0), || format!("A{m}, n = {n}, r = {r}: nonzero exact residual"))?;
                let approx = witness_module::<Complex>(GroupSpec::A(m), &points, r).map_err(|e| e.to_string())?;
                let norm = approx.residual_norm();
                ensure(norm < 1e-9, || format!("A{m}, n = {n}, r = {r}: complex residual {norm:e}"))?;
                count += 2;
            }
        }
    }
    within(start.elapsed(), 5.0)?;
    Ok(format!("{count} witness modules"))
}

const CORPUS_SEED: u64 = 2024;
const CORPUS_SIZE: usize = 540;

fn criterion_thetas<S: Scalar>(m: &QuiverModule<S>) -> Vec<(&'static str, kql_core::stability::StabilityParameter)> {
    vec![
        ("C+", c_plus_representative(&m.dim.v)),
        ("theta0", theta_zero_for(m)),
        ("theta_{0}", theta_i(&[0], &m.dim.v).expect("vertex 0 exists")),
    ]
}

fn stability_oracle() -> Check {
    let start = Instant::now();
    let corpus = tiny_corpus::<Fp>(CORPUS_SEED, CORPUS_SIZE);
    let mut comparisons = 0;
    for (k, m) in corpus.iter().enumerate() {
        for (name, t) in criterion_thetas(m) {
            let got = (is_stable(m, &t).map_err(|e| e.to_string())?, is_semistable(m, &t).map_err(|e| e.to_string())?);
            let expected = brute_force(m, &t);
            ensure(got == expected, || format!("module {k}, {name}: got {got:?}, oracle {expected:?}"))?;
            comparisons += 1;
        }
    }
    within(start.elapsed(), 60.0)?;
    Ok(format!("{} modules, {comparisons} comparisons, 0 disagreements", corpus.len()))
}

fn concentrated_laws() -> Check {
    let corpus = tiny_corpus::<Fp>(CORPUS_SEED, CORPUS_SIZE);
    let mut checked = 0;
    for (k, m) in corpus.iter().enumerate() {
        if !is_semistable(m, &theta_zero_for(m)).map_err(|e| e.to_string())? {
            continue;
        }
        let c = concentrate(m).map_err(|e| format!("module {k}: {e}"))?;
        let again = concentrate(&c).map_err(|e| format!("module {k}: {e}"))?;
        ensure(again == c, || format!("module {k}: not idempotent"))?;
        ensure(is_stable(&c, &theta_zero_for(&c)).unwrap_or(false), || format!("module {k}: output not stable"))?;
        ensure(c.dim.v[0] == m.dim.v[0], || format!("module {k}: dim_0 changed"))?;
        ensure(dimension_bound_check(&c), || format!("module {k}: dimension {:?} exceeds (1, n delta)", c.dim))?;
        checked += 1;
    }
    ensure(checked > 0, || "no semistable modules in the corpus".into())?;
    Ok(format!("{checked} semistable modules"))
}

fn monad_property() -> Check {
    let start = Instant::now();
    let corpus = tiny_corpus::<Rational>(CORPUS_SEED, CORPUS_SIZE);
    let points = sample_points(5, 200, 20);
    let mut checked = 0;
    for (k, m) in corpus.iter().enumerate() {
        let mut stable = false;
        for (_, t) in criterion_thetas(m) {
            stable |= is_stable(m, &t).map_err(|e| e.to_string())?;
        }
        if !stable {
            continue;
        }
        let md = build_monad(&quiver_to_adhm(m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(md.composite_vanishes(0.0), || format!("module {k}: B A != 0"))?;
        for p in &points {
            let v = monad_fiber_check(&md, p, 1e-9).map_err(|e| e.to_string())?;
            ensure(v.a_injective && v.b_surjective, || format!("module {k}: fiber check fails at {p:?}"))?;
        }
        checked += 1;
    }
    ensure(checked > 0, || "no stable modules in the corpus".into())?;
    within(start.elapsed(), 30.0)?;
    Ok(format!("{checked} stable modules at {} points", points.len()))
}

/// Direct sums of vertex simples at nonzero weights, at most three summands.
fn simple_sums(m: usize) -> Vec<AdhmDatum<Rational>> {
    let mut out = Vec::new();
    let mut stack: Vec<(AdhmDatum<Rational>, usize, usize)> =
        (1..m).map(|i| (AdhmDatum::vertex_simple(m, i), i, 1)).collect();
    while let Some((d, last, size)) = stack.pop() {
        if size < 3 {
            for i in last..m {
                stack.push((d.direct_sum(&AdhmDatum::vertex_simple(m, i)).expect("r = 0 sums"), i, size + 1));
            }
        }
        out.push(d);
    }
    out
}

fn koszul_vanishing() -> Check {
    let points = sample_points(6, 50, 0);
    let mut data = 0;
    for m in [2, 3] {
        for d in simple_sums(m) {
            ensure(koszul_middle_check(&d, &points, 1e-9).map_err(|e| e.to_string())?, || {
                format!("A{m}, weights {:?}: middle cohomology", d.weights)
            })?;
            data += 1;
        }
        for i in 1..m {
            let ok =
                invariant_sections_check(&AdhmDatum::<Rational>::vertex_simple(m, i), 6).map_err(|e| e.to_string())?;
            ensure(ok, || format!("A{m}, simple at {i}: invariant sections"))?;
        }
    }
    Ok(format!("{data} data at {} points; sections to degree 6", points.len()))
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial_ideal(m: usize, lambda: &[usize]) -> EquivariantIdeal<Rational> {
    let ring = Ring::xy();
    let height = |a: usize| lambda.get(a).copied().unwrap_or(0) as u32;
    let gens = (0..=lambda.len())
        .filter(|&a| a == 0 || height(a - 1) > height(a))
        .map(|a| Poly::monomial(&ring, vec![a as u32, height(a)], Rational::one()))
        .collect();
    EquivariantIdeal::new(m, gens).expect("monomial ideals are invariant")
}

fn rank_one_roundtrip() -> Check {
    let mut ideals = 0;
    for m in 1..=3 {
        for n in 0..=6 {
            for lambda in partitions(n, n) {
                let ideal = monomial_ideal(m, &lambda);
                let back = adhm_to_ideal(&ideal_to_adhm(&ideal).map_err(|e| e.to_string())?, None)
                    .map_err(|e| e.to_string())?;
                ensure(back == ideal, || format!("A{m}, partition {lambda:?}"))?;
                ideals += 1;
            }
        }
    }
    for m in 1..=4 {
        for n in 1..=3 {
            let ideal = orbit_union_ideal::<Rational>(m, &random_orbit_points(m, n, 7 * n as u64))
                .map_err(|e| e.to_string())?;
            let iso = isotypic_decomposition(&ideal);
            ensure(iso.v == vec![n as i64; m], || format!("A{m}, {n} orbits: isotypic {:?}", iso.v))?;
        }
    }
    Ok(format!("{ideals} monomial ideals; isotypic n delta for n <= 3"))
}

fn dimension_formula() -> Check {
    let mut cases = Vec::new();
    for r in 1..=2 {
        for n in 1..=3 {
            cases.push((2u32, r, n));
        }
    }
    cases.extend([(3, 1, 1), (3, 1, 2)]);
    for &(m, r, n) in &cases {
        let module = witness_module::<Rational>(GroupSpec::A(m), &random_orbit_points(m as usize, n, 40 + n as u64), r)
            .map_err(|e| e.to_string())?;
        let k = tangent_dimension(&module).map_err(|e| e.to_string())?;
        ensure(k == (2 * r * n) as i64, || format!("A{m}, r = {r}, n = {n}: {k} != {}", 2 * r * n))?;
    }
    Ok(format!("{} cases", cases.len()))
}

fn d_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let pairs = 100;
    for k in 0..pairs {
        let n = 1 + k % 3;
        let module = witness_module::<Rational>(GroupSpec::A(2), &random_orbit_points(2, n, rng.random()), 1)
            .map_err(|e| e.to_string())?;
        let mut padded = module.clone();
        for _ in 0..rng.random_range(1..=2) {
            let simple = QuiverModule::vertex_simple(&module.quiver, Vertex::Node(1));
            padded = padded.direct_sum(&simple).map_err(|e| e.to_string())?;
        }
        ensure(d_invariance_check(&module, &padded, k as u64).map_err(|e| format!("pair {k}: {e}"))?, || {
            format!("pair {k}: descents differ")
        })?;
        let ideal = adhm_to_ideal(
            &quiver_to_adhm(&concentrate(&padded).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?,
            None,
        )
        .map_err(|e| e.to_string())?;
        let colength = descend_ideal(&ideal).map_err(|e| e.to_string())?.colength();
        ensure(colength == n, || format!("pair {k}: descended colength {colength} != {n}"))?;
    }
    Ok(format!("{pairs} pairs"))
}

struct Run {
    stdout: Vec<u8>,
    code: i32,
}

fn kql(args: &[&str], stdin: Option<&[u8]>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kql"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin is piped");
        if let Some(input) = stdin {
            pipe.write_all(input).expect("stdin accepts input");
        }
    }
    let out = child.wait_with_output().expect("binary finishes");
    Run { stdout: out.stdout, code: out.status.code().unwrap_or(-1) }
}

fn cli_determinism() -> Check {
    let witness = kql(&["witness", "--group", "A2", "--points", "(1,2);(3,1)", "--r", "1"], None);
    ensure(witness.code == 0, || "witness failed".into())?;
    let w = witness.stdout.clone();
    let padded_simple = {
        let module = witness_module::<Rational>(GroupSpec::A(2), &[(q(1), q(2)), (q(3), q(1))], 1).expect("witness");
        let padded = module.direct_sum(&QuiverModule::vertex_simple(&module.quiver, Vertex::Node(1))).expect("sum");
        kql_core::io::render(&kql_core::io::module_to_json(&padded)).into_bytes()
    };
    let ideal = kql(&["adhm2ideal"], Some(&w)).stdout;
    let simple = br#"{"schema":"kql/1","kind":"adhm","group":"A3","r":0,"weights":[1,2],"B1":[["0","0"],["0","0"]],"B2":[["0","0"],["0","0"]],"i":[[],[]],"j":[]}"#;
    let dir = std::env::temp_dir().join(format!("kql-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let (wa, wb) = (dir.join("w.json"), dir.join("p.json"));
    std::fs::write(&wa, &w).map_err(|e| e.to_string())?;
    std::fs::write(&wb, &padded_simple).map_err(|e| e.to_string())?;
    let (wa, wb) = (wa.to_string_lossy().into_owned(), wb.to_string_lossy().into_owned());

    let mut matrix: Vec<(Vec<String>, Option<Vec<u8>>, i32)> = Vec::new();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    for g in ["A1", "A2", "A3", "A4", "A5", "A6", "D4", "D5", "E6", "E7", "E8"] {
        matrix.push((s(&["mckay", "--group", g, "--r", "1"]), None, 0));
    }
    matrix.push((s(&["witness", "--group", "A3", "--n", "3", "--r", "2", "--seed", "4"]), None, 0));
    matrix.push((s(&["witness", "--group", "A2", "--points", "(1,2)", "--complex"]), None, 0));
    matrix.push((s(&["witness", "--group", "A2", "--points", "(0,0)"]), None, 2));
    matrix.push((s(&["check-module"]), Some(w.clone()), 0));
    for theta in ["zero", "cplus", "I=0"] {
        matrix.push((s(&["stability", "--theta", theta]), Some(w.clone()), 0));
    }
    matrix.push((s(&["stability", "--theta", "zero"]), Some(padded_simple.clone()), 1));
    matrix.push((s(&["concentrate"]), Some(padded_simple.clone()), 0));
    matrix.push((s(&["requiv", "--seed", "3", &wa, &wb]), None, 0));
    matrix.push((s(&["monad-check", "--seed", "5"]), Some(w.clone()), 0));
    matrix.push((s(&["monad-check", "--seed", "5", "--samples", "50"]), Some(simple.to_vec()), 0));
    matrix.push((s(&["adhm2ideal"]), Some(w.clone()), 0));
    matrix.push((s(&["ideal2adhm"]), Some(ideal.clone()), 0));
    matrix.push((s(&["ideal2adhm", "--module"]), Some(ideal.clone()), 0));
    matrix.push((s(&["descend"]), Some(ideal.clone()), 0));
    matrix.push((s(&["descend"]), Some(padded_simple.clone()), 0));
    matrix.push((s(&["tangent-dim"]), Some(w.clone()), 0));
    matrix.push((s(&["support"]), Some(w.clone()), 0));

    for (args, input, expected) in &matrix {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = kql(&argv, input.as_deref());
        let second = kql(&argv, input.as_deref());
        ensure(first.code == *expected, || format!("{args:?}: exit {} != {expected}", first.code))?;
        ensure(first.stdout == second.stdout && first.code == second.code, || format!("{args:?}: output differs"))?;
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{} commands run twice", matrix.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("McKay correspondence", mckay_correspondence),
        ("moment-map certification", moment_map),
        ("stability oracle agreement", stability_oracle),
        ("concentrated-module laws", concentrated_laws),
        ("monad property", monad_property),
        ("Koszul vanishing", koszul_vanishing),
        ("rank-one roundtrip", rank_one_roundtrip),
        ("dimension formula", dimension_formula),
        ("descent invariance", d_invariance),
        ("CLI determinism", cli_determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2} s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2} s)", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
