//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Runs without the libtest harness so the summary always prints.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::oracles::*;
use common::*;
use rand::Rng;
use thurston::cover::{OrbifoldKind, PLThurstonMap, Weight};
use thurston::decomposition::decide::{decide_equivalence, Certificate, Decision, Witness};
use thurston::decomposition::monodromy::{hurwitz_equivalent, Hurwitz};
use thurston::decomposition::twist::solve_twist_equation;
use thurston::mapfile::parse_map_file;
use thurston::obstruction::{
    detect_levy, is_simple_obstruction, search_obstruction, spectral_at_least_one, Budget, SearchResult,
};
use thurston::parabolic::{
    affine_equivalence, det2, find_levy_pair, gl2z_conjugacy, lattice_escape_time, same_nielsen_class, Escape,
    M2,
};

fn corpus() -> Vec<(String, PLThurstonMap)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths
        .into_iter()
        .filter_map(|p| {
            let doc = parse_map_file(&std::fs::read(&p).unwrap()).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            doc.map.map(|f| (name, f))
        })
        .collect()
}

fn within(start: Instant, limit: Duration, what: &str) {
    let t = start.elapsed();
    assert!(t < limit, "{what} took {t:?}, limit {limit:?}");
}

/// Orbifold suite.
fn criterion_1() -> String {
    let start = Instant::now();
    let maps = corpus();
    assert!(maps.len() >= 6);
    use Weight::*;
    let expected: BTreeMap<&str, Vec<Weight>> = [
        ("z2", vec![Infinite, Infinite]),
        ("lattes2", vec![Finite(2); 4]),
        ("basilica", vec![Infinite; 3]),
    ]
    .into_iter()
    .collect();
    for (name, f) in &maps {
        assert!((2..=4).contains(&f.degree()), "{name}");
        assert!(f.marked().len() <= 6, "{name}");
        let od = f.orbifold_data();
        if let Some(sig) = expected.get(name.as_str()) {
            assert_eq!(&od.signature, sig, "{name}");
        }
        if name == "basilica" {
            assert_eq!(od.kind, OrbifoldKind::Hyperbolic);
        }
        assert!(od.euler <= Rat::from(0), "{name}");
        // Riemann-Hurwitz, and every fiber has full degree.
        let dom = f.domain().vertex_count();
        let branching: usize = (0..dom).map(|y| f.local_degree(y) - 1).sum();
        assert_eq!(branching, 2 * f.degree() - 2, "{name}");
        for v in 0..f.codomain().vertex_count() {
            let fiber: usize = (0..dom)
                .filter(|&y| f.vertex_image()[y] == v)
                .map(|y| f.local_degree(y))
                .sum();
            assert_eq!(fiber, f.degree(), "{name}");
        }
    }
    within(start, Duration::from_secs(5), "orbifold suite");
    format!("{} corpus maps", maps.len())
}

fn random_matrix(g: &mut impl Rng) -> Vec<Vec<Rat>> {
    let entries = [r(0, 1), r(0, 1), r(0, 1), r(1, 2), r(1, 1), r(1, 3), r(2, 3), r(3, 2), r(1, 4), r(2, 1)];
    let n = g.gen_range(1..=4);
    (0..n)
        .map(|_| (0..n).map(|_| entries[g.gen_range(0..entries.len())]).collect())
        .collect()
}

/// Obstruction suite.
fn criterion_2() -> String {
    let start = Instant::now();
    let mut g = rng(101);
    let mut simple = 0;
    for _ in 0..500 {
        let m = random_matrix(&mut g);
        let s = is_simple_obstruction(&m);
        assert_eq!(s, simple_oracle(&m), "{m:?}");
        simple += s as usize;
        let rho = float_spectral_radius(&m);
        assert_eq!(spectral_at_least_one(&m), rho >= 1.0 - 1e-9, "{m:?} {rho}");
        assert_eq!(spectral_at_least_one(&m), perron_at_least_one(&m), "{m:?}");
    }
    within(start, Duration::from_secs(60), "obstruction suite");
    format!("500 matrices, {simple} simple obstructions")
}

/// Levy suite.
fn criterion_3() -> String {
    let start = Instant::now();
    let f = levy_disk();
    let SearchResult::Found(g, _) = search_obstruction(&f, &Budget::default()) else {
        panic!("inserted-disk example is not obstructed within budget");
    };
    let w = detect_levy(&f, &g.curves).expect("Levy cycle");
    assert!(w.degenerate);
    within(start, Duration::from_secs(30), "inserted-disk example");
    let mut checked = 0;
    for (name, f) in corpus() {
        if !f.is_topological_polynomial() {
            continue;
        }
        if let SearchResult::Found(g, _) = search_obstruction(&f, &Budget::default()) {
            let w = detect_levy(&f, &g.curves).unwrap_or_else(|| panic!("{name}: no Levy cycle"));
            assert!(w.degenerate, "{name}");
            checked += 1;
        }
    }
    format!("inserted disk degenerate; {checked} obstructed polynomials checked")
}

/// Nielsen and parabolic suite.
fn criterion_4() -> String {
    let start = Instant::now();
    let mut g = rng(102);
    let mut quotients = 0;
    let mut skipped = 0;
    let mut pairs = 0;
    while quotients < 200 {
        let base = random_quotient(&mut g, 8);
        let m = if quotients % 2 == 0 { doubled(&mut g, &base) } else { base.clone() };
        let periodic: Vec<usize> = (0..m.lifts.len()).filter(|&i| m.period(i).is_some()).collect();
        let mut results = Vec::new();
        for &i in &periodic {
            for &j in &periodic {
                results.push((i, j, brute_same_class(&m, i, j, 8)));
            }
        }
        if results.iter().any(|r| r.2.is_none()) {
            // The brute-force iterate overflowed 128 bits.
            skipped += 1;
            continue;
        }
        for (i, j, want) in results {
            assert_eq!(same_nielsen_class(&m, i, j).unwrap(), want.unwrap(), "{m:?} {i} {j}");
            pairs += 1;
        }
        assert_eq!(find_levy_pair(&base).unwrap(), None, "{base:?}");
        quotients += 1;
    }
    let mut escapes = 0;
    while escapes < 1000 {
        let a = random_hyperbolic(&mut g, 4);
        let b = random_half(&mut g);
        let q = [2i64, 4, 6, 8, 10][g.gen_range(0..5)];
        let v = (r(g.gen_range(-2 * q..=2 * q), q), r(g.gen_range(-2 * q..=2 * q), q));
        if affine(a, b, v) == v {
            continue;
        }
        let n = match lattice_escape_time(a, b, v, q, 64) {
            Ok(Escape::After(n)) => n,
            other => panic!("{a:?} {b:?} {v:?} {q}: {other:?}"),
        };
        assert!(n < 64);
        assert_eq!(Some(n), brute_escape(a, b, v, q, 64));
        escapes += 1;
    }
    within(start, Duration::from_secs(120), "Nielsen suite");
    format!("200 quotients ({pairs} pairs, {skipped} overflow redraws), 1000 escape points")
}

/// Conjugacy suite.
fn criterion_5() -> String {
    let start = Instant::now();
    let mut g = rng(103);
    let proper = unimodular_box(5, 1);
    let improper = unimodular_box(5, -1);
    // Matrices in the box by (trace, det), for non-constructed partners.
    let mut by_invariants: BTreeMap<(i64, i64), Vec<M2>> = BTreeMap::new();
    for a in -5..=5 {
        for b in -5..=5 {
            for c in -5..=5 {
                for d in -5..=5 {
                    let m = [[a, b], [c, d]];
                    by_invariants.entry((a + d, det2(m))).or_default().push(m);
                }
            }
        }
    }
    let mut refuted = 0;
    for k in 0..1000 {
        let a1: M2 = [
            [g.gen_range(-5..=5), g.gen_range(-5..=5)],
            [g.gen_range(-5..=5), g.gen_range(-5..=5)],
        ];
        let a2 = if k % 2 == 0 {
            let s = random_unimodular(&mut g, 5);
            let d = det2(s);
            let sinv = [[s[1][1] * d, -s[0][1] * d], [-s[1][0] * d, s[0][0] * d]];
            mul2(mul2(s, a1), sinv)
        } else {
            let same = &by_invariants[&(a1[0][0] + a1[1][1], det2(a1))];
            same[g.gen_range(0..same.len())]
        };
        let got = gl2z_conjugacy(a1, a2);
        if k % 2 == 0 {
            assert!(got.is_some(), "{a1:?} {a2:?}");
        }
        if let Some(c) = &got {
            for w in c.proper.iter().chain(&c.improper) {
                assert_eq!(mul2(*w, a1), mul2(a2, *w));
            }
            assert_eq!(c.proper.map_or(1, det2), 1);
            assert_eq!(c.improper.map_or(-1, det2), -1);
        }
        let brute_p = brute_conjugator(a1, a2, &proper);
        let brute_i = brute_conjugator(a1, a2, &improper);
        if brute_p.is_some() {
            assert!(got.as_ref().is_some_and(|c| c.proper.is_some()), "{a1:?} {a2:?}");
        }
        if brute_i.is_some() {
            assert!(got.as_ref().is_some_and(|c| c.improper.is_some()), "{a1:?} {a2:?}");
        }
        if got.is_none() {
            refuted += 1;
        }
    }
    for _ in 0..100 {
        let m = random_quotient(&mut g, 8);
        let p = random_unimodular(&mut g, 3);
        let t = random_half(&mut g);
        let m2 = conjugate_quotient(&m, p, t);
        let w = affine_equivalence(&m, &m2).unwrap().expect("conjugate by construction");
        check_witness(&m, &m2, &w);
    }
    within(start, Duration::from_secs(120), "conjugacy suite");
    format!("1000 pairs ({refuted} not conjugate), 100 affine round trips")
}

/// Decomposition and decider suite.
fn criterion_6() -> String {
    let start = Instant::now();
    let maps = corpus();
    for (name, f) in &maps {
        match decide_equivalence(f, f, &Budget::default()) {
            Decision::Equivalent(w) => assert!(w.is_identity(), "{name}"),
            other => panic!("{name}: {other:?}"),
        }
    }
    let mut g = rng(104);
    let bases = [levy_disk(), basilica_alpha(), lattes2(), levy_2cycle()];
    for k in 0..20 {
        let f = &bases[k % bases.len()];
        let len = g.gen_range(1..=4);
        let h = random_word(&mut g, f, len);
        let conj = f.with_words(h.compose(f.post()), f.pre().compose(&h.inverse()));
        match decide_equivalence(f, &conj, &Budget::default()) {
            Decision::Equivalent(Witness::MappingClass { phi0, phi1 }) => check_diagram(f, &conj, &phi0, &phi1),
            other => panic!("conjugator {k}: {other:?}"),
        }
    }
    let (f, h) = (levy_disk(), lattes_one_plus_i());
    assert!(matches!(
        decide_equivalence(&f, &h, &Budget::default()),
        Decision::NotEquivalent(Certificate::ObstructionMismatch { .. })
    ));
    for _ in 0..500 {
        let l = random_lattice(&mut g);
        let k = l.dim();
        let m: Vec<i64> = (0..k).map(|_| g.gen_range(-6..=6)).collect();
        let n: Vec<i64> = if g.gen_bool(0.5) {
            let x0: Vec<i64> = (0..k).map(|_| g.gen_range(-5..=5)).collect();
            let ax = apply(&l.operator(), &x0);
            m.iter().zip(&ax).map(|(a, b)| a - b).collect()
        } else {
            (0..k).map(|_| g.gen_range(-6..=6)).collect()
        };
        let rhs: Vec<i64> = m.iter().zip(&n).map(|(a, b)| a - b).collect();
        let got = solve_twist_equation(&l, &m, &n);
        if let Some(x) = &got {
            assert_eq!(apply(&l.operator(), x), rhs);
        }
        if brute_twist(&l, &rhs, 10).is_some() {
            assert!(got.is_some(), "{l:?} {rhs:?}");
        }
    }
    let mut compared = 0;
    for (d, n) in [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3)] {
        let tuples = all_tuples(d, n);
        let orbit = orbits(d, &tuples);
        let step = (tuples.len() / 40).max(1);
        for i in (0..tuples.len()).step_by(step) {
            for j in (0..tuples.len()).step_by(step) {
                let (a, b) = (tuple(&tuples[i]), tuple(&tuples[j]));
                let got = hurwitz_equivalent(&a, &b, None, 1_000_000);
                assert_eq!(got == Hurwitz::Equivalent(None), orbit[i] == orbit[j], "{a:?} {b:?}");
                compared += 1;
            }
        }
    }
    within(start, Duration::from_secs(600), "decider suite");
    format!("{} self-decisions, 20 conjugates, 500 twist equations, {compared} Hurwitz pairs", maps.len())
}

/// Determinism: every CLI command twice, byte for byte.
fn criterion_7() -> String {
    let bin = env!("CARGO_BIN_EXE_thurston");
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let file = |n: &str| dir.join(format!("{n}.map")).display().to_string();
    let mut runs: Vec<Vec<String>> = Vec::new();
    let maps = ["z2", "basilica", "lattes2", "lattes2_marked", "levy_disk", "levy_2cycle", "affine_third"];
    for cmd in ["validate", "orbifold", "obstruct", "levy", "classify-parabolic", "decompose"] {
        for m in maps {
            runs.push(vec![cmd.into(), file(m)]);
        }
    }
    runs.push(vec!["matrix-conjugacy".into(), "--a1".into(), "2 1 1 1".into(), "--a2".into(), "1 1 1 2".into()]);
    for (a, b) in [("z2", "z2"), ("lattes2", "lattes2_fine"), ("levy_disk", "lattes_one_plus_i"), ("z2", "z3")] {
        runs.push(vec!["decide".into(), file(a), file(b)]);
    }
    let with_json: Vec<Vec<String>> = runs
        .iter()
        .map(|r| std::iter::once("--json".to_string()).chain(r.iter().cloned()).collect())
        .collect();
    runs.extend(with_json);
    for args in &runs {
        let once = Command::new(bin).args(args).output().unwrap();
        let twice = Command::new(bin).args(args).output().unwrap();
        assert_eq!(once, twice, "{args:?}");
    }
    format!("{} invocations repeated", runs.len())
}

fn main() {
    let criteria: [(&str, fn() -> String); 7] = [
        ("orbifold", criterion_1),
        ("obstruction", criterion_2),
        ("Levy", criterion_3),
        ("Nielsen/parabolic", criterion_4),
        ("conjugacy", criterion_5),
        ("decomposition/decider", criterion_6),
        ("determinism", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(detail) => println!("criterion {} ({name}): PASS: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {} ({name}): FAIL: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
