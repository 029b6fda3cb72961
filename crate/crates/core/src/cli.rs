//! Command-line front end. Every report is assembled in a fixed order so
//! that identical inputs give identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::cover::{OrbifoldKind, PLThurstonMap};
use crate::curves::{sides, Curve, MappingClassWord};
use crate::decomposition::decide::{decide_equivalence, Certificate, Decision, Reason, Witness};
use crate::decomposition::{decompose, first_return_maps, standard_form, DecompositionError, Puncture, ReturnKind};
use crate::mapfile::{affine_json, canonical_text, parse_map_file, MapDocument};
use crate::obstruction::{
    canonical_obstruction, detect_levy, is_simple_obstruction, search_obstruction, spectral_at_least_one, Budget,
    CanonicalObstruction, LevyWitness, Rat, SearchResult, ThurstonMatrix,
};
use crate::parabolic::{
    det2, eigen_class, extract_affine_model, geometrize, gl2z_conjugacy, AffineQuotient, EigenClass, Geometrization,
    OrbifoldElement, ParabolicError, Pt, M2,
};

pub const EXIT_DECIDED: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "thurston", version, about = "Analyze piecewise-linear Thurston maps")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest curve weight enumerated.
    #[arg(long, global = true, default_value_t = 12)]
    max_weight: u32,
    /// Largest mapping-class word length enumerated.
    #[arg(long, global = true, default_value_t = 4)]
    max_word_length: usize,
    /// Wall-clock cap in seconds. Results under a cap may depend on timing.
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a map file.
    Validate { file: PathBuf },
    /// Orbifold signature and Euler characteristic.
    Orbifold { file: PathBuf },
    /// Search for a Thurston obstruction.
    Obstruct { file: PathBuf },
    /// Search for a Levy cycle.
    Levy { file: PathBuf },
    /// Geometrize a (2,2,2,2) map or an affine quotient.
    ClassifyParabolic { file: PathBuf },
    /// Conjugacy of two integer 2x2 matrices in GL2(Z).
    MatrixConjugacy {
        /// Entries in row order, e.g. "2 1 1 1".
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
    },
    /// Decompose along a stable multicurve: the named curves of the file,
    /// or the first obstruction found.
    Decompose {
        file: PathBuf,
        /// Name of a curve in the file; repeatable.
        #[arg(long = "curve")]
        curves: Vec<String>,
    },
    /// Decide Thurston equivalence of two maps.
    Decide { f: PathBuf, g: PathBuf },
}

struct Report {
    code: i32,
    text: String,
    result: Value,
}

fn decided(text: String, result: Value) -> Result<Report, String> {
    Ok(Report {
        code: EXIT_DECIDED,
        text,
        result,
    })
}

fn inconclusive(text: String, result: Value) -> Result<Report, String> {
    Ok(Report {
        code: EXIT_INCONCLUSIVE,
        text,
        result,
    })
}

/// What a run prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run with `args[0]` the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            return Output {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: e.render().to_string(),
            }
        }
        Err(e) => {
            return Output {
                code: EXIT_DECIDED,
                stdout: e.render().to_string(),
                stderr: String::new(),
            }
        }
    };
    let name = command_name(&cli.command);
    let budget = Budget {
        max_weight: cli.opts.max_weight,
        max_word_length: cli.opts.max_word_length,
        deadline: cli.opts.budget_seconds.map(|s| Instant::now() + Duration::from_secs(s)),
    };
    let out = execute(&cli.command, &budget);
    let code = out.as_ref().map_or(EXIT_INPUT, |r| r.code);
    if cli.opts.json {
        let v = match &out {
            Ok(r) => json!({
                "command": name,
                "status": if r.code == EXIT_DECIDED { "decided" } else { "inconclusive" },
                "result": r.result,
            }),
            Err(e) => json!({"command": name, "status": "error", "error": e}),
        };
        Output {
            code,
            stdout: canonical_text(&v),
            stderr: String::new(),
        }
    } else {
        match out {
            Ok(r) => Output {
                code,
                stdout: r.text,
                stderr: String::new(),
            },
            Err(e) => Output {
                code,
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
            },
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Orbifold { .. } => "orbifold",
        Command::Obstruct { .. } => "obstruct",
        Command::Levy { .. } => "levy",
        Command::ClassifyParabolic { .. } => "classify-parabolic",
        Command::MatrixConjugacy { .. } => "matrix-conjugacy",
        Command::Decompose { .. } => "decompose",
        Command::Decide { .. } => "decide",
    }
}

fn execute(c: &Command, budget: &Budget) -> Result<Report, String> {
    match c {
        Command::Validate { file } => validate(&load(file)?),
        Command::Orbifold { file } => orbifold(&map_of(file)?),
        Command::Obstruct { file } => obstruct(&map_of(file)?, budget),
        Command::Levy { file } => levy(&map_of(file)?, budget),
        Command::ClassifyParabolic { file } => classify_parabolic(&load(file)?),
        Command::MatrixConjugacy { a1, a2 } => matrix_conjugacy(&parse_matrix(a1)?, &parse_matrix(a2)?),
        Command::Decompose { file, curves } => decompose_cmd(&load(file)?, curves, budget),
        Command::Decide { f, g } => decide(&map_of(f)?, &map_of(g)?, budget),
    }
}

fn load(path: &Path) -> Result<MapDocument, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_map_file(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn map_of(path: &Path) -> Result<PLThurstonMap, String> {
    load(path)?
        .map
        .ok_or_else(|| format!("{}: file holds no PL map", path.display()))
}

fn parse_matrix(s: &str) -> Result<M2, String> {
    let xs: Vec<i64> = s
        .split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|e| format!("matrix entry {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match xs[..] {
        [a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(format!("expected four entries, got {}", xs.len())),
    }
}

// Formatting.

fn count_curves(n: usize) -> String {
    if n == 1 {
        "1 curve".into()
    } else {
        format!("{n} curves")
    }
}

fn fmt_set(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn fmt_m2(a: &M2) -> String {
    format!("[[{}, {}], [{}, {}]]", a[0][0], a[0][1], a[1][0], a[1][1])
}

fn fmt_pt(p: &Pt) -> String {
    format!("({}, {})", p.0, p.1)
}

fn curve_text(f: &PLThurstonMap, c: &Curve) -> String {
    let (a, b) = sides(f.spine(), c);
    format!("{}|{}", fmt_set(&a), fmt_set(&b))
}

fn curve_json(f: &PLThurstonMap, c: &Curve) -> Value {
    let (a, b) = sides(f.spine(), c);
    json!({"coordinates": c.coordinates(), "sides": [a, b]})
}

fn word_text(f: &PLThurstonMap, w: &MappingClassWord) -> String {
    if w.is_empty() {
        return "id".into();
    }
    let parts: Vec<String> = w
        .word
        .iter()
        .map(|(c, k)| format!("T{}^{k}", curve_text(f, c)))
        .collect();
    parts.join(" ")
}

fn word_json(f: &PLThurstonMap, w: &MappingClassWord) -> Value {
    Value::Array(
        w.word
            .iter()
            .map(|(c, k)| json!({"curve": curve_json(f, c), "power": k}))
            .collect(),
    )
}

fn rat_string(x: &Rat) -> String {
    x.to_string()
}

fn matrix_text(m: &ThurstonMatrix) -> String {
    let rows: Vec<String> = m
        .entries
        .iter()
        .map(|r| r.iter().map(rat_string).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn matrix_json(f: &PLThurstonMap, m: &ThurstonMatrix) -> Value {
    json!({
        "curves": m.curves.iter().map(|c| curve_json(f, c)).collect::<Vec<_>>(),
        "entries": m.entries.iter().map(|r| r.iter().map(rat_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn element_text(g: &OrbifoldElement) -> String {
    match g {
        OrbifoldElement::Translation([x, y]) => format!("z + ({x}, {y})"),
        OrbifoldElement::Symmetry([x, y]) => format!("({x}, {y}) - z"),
    }
}

fn element_json(g: &OrbifoldElement) -> Value {
    match g {
        OrbifoldElement::Translation(v) => json!({"translation": v}),
        OrbifoldElement::Symmetry(w) => json!({"symmetry": w}),
    }
}

fn rat_json(x: &Rat) -> Value {
    json!([x.numer(), x.denom()])
}

fn pt_json(p: &Pt) -> Value {
    json!([rat_json(&p.0), rat_json(&p.1)])
}

// Commands.

fn map_summary(f: &PLThurstonMap) -> Value {
    json!({
        "degree": f.degree(),
        "vertices": f.codomain().vertex_count(),
        "triangles": f.codomain().triangle_count(),
        "domain_triangles": f.domain().triangle_count(),
        "marked": f.marked().len(),
        "post": word_json(f, f.post()),
        "pre": word_json(f, f.pre()),
    })
}

fn validate(doc: &MapDocument) -> Result<Report, String> {
    let mut text = String::new();
    if let Some(f) = &doc.map {
        let _ = writeln!(
            text,
            "valid map: degree {}, {} vertices, {} triangles, {} marked points",
            f.degree(),
            f.codomain().vertex_count(),
            f.codomain().triangle_count(),
            f.marked().len()
        );
        if f.is_twisted() {
            let _ = writeln!(text, "post: {}", word_text(f, f.post()));
            let _ = writeln!(text, "pre: {}", word_text(f, f.pre()));
        }
    }
    if let Some(m) = &doc.affine {
        let _ = writeln!(
            text,
            "valid affine quotient: degree {}, {} marked points, q = {}",
            m.degree(),
            m.lifts.len(),
            m.q
        );
    }
    let names: Vec<&String> = doc.curves.keys().collect();
    if !names.is_empty() {
        let list: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(text, "curves: {}", list.join(", "));
    }
    decided(
        text,
        json!({
            "map": doc.map.as_ref().map(map_summary),
            "affine": doc.affine.as_ref().map(affine_json),
            "curves": names,
        }),
    )
}

fn orbifold(f: &PLThurstonMap) -> Result<Report, String> {
    let od = f.orbifold_data();
    let kind = match od.kind {
        OrbifoldKind::Hyperbolic => "hyperbolic",
        OrbifoldKind::Parabolic(_) => "parabolic",
    };
    let mut text = format!("signature {}, chi = {}, {kind}\n", od.signature_string(), od.euler);
    let weights: Vec<String> = od.weights.iter().map(|(v, w)| format!("{v}: {w}")).collect();
    let _ = writeln!(text, "weights: {}", weights.join(", "));
    let _ = writeln!(text, "postcritical: {}", fmt_set(f.postcritical()));
    decided(
        text,
        json!({
            "signature": od.signature.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "chi": rat_json(&od.euler),
            "kind": kind,
            "weights": od.weights.iter().map(|(v, w)| (v.to_string(), Value::String(w.to_string()))).collect::<serde_json::Map<_, _>>(),
            "postcritical": f.postcritical(),
        }),
    )
}

/// Whether the map is certified to have no obstruction.
fn certified_unobstructed(f: &PLThurstonMap, budget: &Budget) -> bool {
    matches!(canonical_obstruction(f, budget), CanonicalObstruction::Found(g, _) if g.is_empty())
}

fn obstruction_text(f: &PLThurstonMap, m: &ThurstonMatrix) -> String {
    let mut text = String::new();
    for (i, c) in m.curves.iter().enumerate() {
        let _ = writeln!(text, "  c{i}: {}", curve_text(f, c));
    }
    let _ = writeln!(text, "  matrix: {}", matrix_text(m));
    text
}

fn obstruct(f: &PLThurstonMap, budget: &Budget) -> Result<Report, String> {
    match search_obstruction(f, budget) {
        SearchResult::Found(_, m) => {
            let simple = is_simple_obstruction(&m.entries);
            let mut text = format!("obstructed: {}\n", count_curves(m.len()));
            text += &obstruction_text(f, &m);
            let _ = writeln!(text, "  simple: {}", if simple { "yes" } else { "no" });
            let pillow = f.orbifold_data().kind == OrbifoldKind::Parabolic(6);
            if pillow {
                text += "  (2,2,2,2) orbifold: use classify-parabolic for the affine model\n";
            }
            decided(
                text,
                json!({
                    "obstructed": true,
                    "obstruction": matrix_json(f, &m),
                    "leading_eigenvalue_at_least_one": spectral_at_least_one(&m.entries),
                    "simple": simple,
                    "pillowcase": pillow,
                }),
            )
        }
        SearchResult::NotFoundWithinBudget if certified_unobstructed(f, budget) => {
            decided("unobstructed\n".into(), json!({"obstructed": false}))
        }
        SearchResult::NotFoundWithinBudget => inconclusive(
            format!("inconclusive: no obstruction up to weight {}\n", budget.max_weight),
            json!({"obstructed": null, "max_weight": budget.max_weight}),
        ),
    }
}

fn levy_json(f: &PLThurstonMap, w: &LevyWitness) -> Value {
    json!({
        "cycle": w.cycle.iter().map(|c| curve_json(f, c)).collect::<Vec<_>>(),
        "degrees": w.degrees,
        "degenerate": w.degenerate,
        "disk_sides": w.disk_sides,
    })
}

fn levy(f: &PLThurstonMap, budget: &Budget) -> Result<Report, String> {
    match search_obstruction(f, budget) {
        SearchResult::Found(g, m) => match detect_levy(f, &g.curves) {
            Some(w) => {
                let kind = if w.degenerate { "degenerate Levy cycle" } else { "Levy cycle" };
                let mut text = format!("{kind} of length {}\n", w.cycle.len());
                for (i, c) in w.cycle.iter().enumerate() {
                    let _ = write!(text, "  {}: degree {}", curve_text(f, c), w.degrees[i]);
                    if let Some(d) = w.disk_sides.get(i) {
                        let _ = write!(text, ", disk {}", fmt_set(d));
                    }
                    text.push('\n');
                }
                decided(text, json!({"levy": levy_json(f, &w)}))
            }
            None => {
                let mut text = "no Levy cycle in the obstruction\n".to_string();
                text += &obstruction_text(f, &m);
                decided(text, json!({"levy": null, "obstruction": matrix_json(f, &m)}))
            }
        },
        SearchResult::NotFoundWithinBudget if certified_unobstructed(f, budget) => {
            decided("unobstructed: no Levy cycle\n".into(), json!({"levy": null}))
        }
        SearchResult::NotFoundWithinBudget => inconclusive(
            format!("inconclusive: no obstruction up to weight {}\n", budget.max_weight),
            json!({"levy": null, "max_weight": budget.max_weight}),
        ),
    }
}

fn eigen_name(a: M2) -> &'static str {
    match eigen_class(a).map(|e| e.class) {
        Ok(EigenClass::Expanding) => "expanding",
        Ok(EigenClass::HyperbolicNonexpanding) => "hyperbolic, not expanding",
        Ok(EigenClass::HasUnitEigenvalue) => "unit eigenvalue",
        Err(_) => "degenerate",
    }
}

fn parabolic_error(e: ParabolicError) -> Result<Report, String> {
    match e {
        ParabolicError::CapReached(_) | ParabolicError::Overflow | ParabolicError::Unsupported(_) => {
            inconclusive(format!("inconclusive: {e}\n"), json!({"reason": e.to_string()}))
        }
        e => Err(e.to_string()),
    }
}

fn classify_parabolic(doc: &MapDocument) -> Result<Report, String> {
    let model: AffineQuotient = match (&doc.affine, &doc.map) {
        (Some(m), _) => m.clone(),
        (None, Some(f)) => match extract_affine_model(f) {
            Ok(m) => m,
            Err(e) => return parabolic_error(e),
        },
        (None, None) => unreachable!("parser requires a map or a quotient"),
    };
    let mut text = format!(
        "affine model: A = {}, b = {}, q = {}\n",
        fmt_m2(&model.a),
        fmt_pt(&model.b),
        model.q
    );
    let _ = writeln!(text, "A is {}", eigen_name(model.a));
    let base = affine_json(&model);
    match geometrize(&model) {
        Ok(Geometrization::Obstructed(i, j)) => {
            let _ = writeln!(text, "obstructed: marked points {i} and {j} share a Nielsen class");
            decided(text, json!({"model": base, "obstructed": true, "levy_pair": [i, j]}))
        }
        Ok(Geometrization::Affine(_)) => {
            text += "unobstructed: equivalent to its affine model\n";
            decided(text, json!({"model": base, "obstructed": false, "levy_pair": null}))
        }
        Err(e) => parabolic_error(e),
    }
}

fn mul(a: &M2, b: &M2) -> M2 {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn matrix_conjugacy(a1: &M2, a2: &M2) -> Result<Report, String> {
    let Some(c) = gl2z_conjugacy(*a1, *a2) else {
        return decided("not conjugate\n".into(), json!({"conjugate": false}));
    };
    let mut text = "conjugate: S A1 S^-1 = A2\n".to_string();
    for (label, s) in [("proper", c.proper), ("improper", c.improper)] {
        match s {
            Some(s) => {
                // S A1 = A2 S, checked without inverting S.
                assert_eq!(mul(&s, a1), mul(a2, &s), "witness failed to verify");
                let _ = writeln!(text, "  {label}: S = {} (det {})", fmt_m2(&s), det2(s));
            }
            None => {
                let _ = writeln!(text, "  {label}: none");
            }
        }
    }
    decided(
        text,
        json!({"conjugate": true, "proper": c.proper, "improper": c.improper}),
    )
}

fn puncture_text(p: &Puncture) -> String {
    match p {
        Puncture::Marked(i) => format!("m{i}"),
        Puncture::Cap(j) => format!("c{j}"),
    }
}

fn decompose_cmd(doc: &MapDocument, names: &[String], budget: &Budget) -> Result<Report, String> {
    let f = doc.map.as_ref().ok_or("file holds no PL map")?;
    let curves: Vec<Curve> = if !names.is_empty() {
        names
            .iter()
            .map(|n| doc.curves.get(n).cloned().ok_or_else(|| format!("no curve named {n:?}")))
            .collect::<Result<_, _>>()?
    } else if !doc.curves.is_empty() {
        doc.curves.values().cloned().collect()
    } else {
        match search_obstruction(f, budget) {
            SearchResult::Found(g, _) => g.curves,
            SearchResult::NotFoundWithinBudget => {
                return inconclusive(
                    "inconclusive: no curves given and no obstruction found\n".into(),
                    json!({"reason": "no multicurve"}),
                )
            }
        }
    };
    let sf = match standard_form(f, &curves) {
        Ok(sf) => sf,
        Err(DecompositionError::Unsupported(s)) => {
            return inconclusive(format!("inconclusive: unsupported: {s}\n"), json!({"reason": s}))
        }
        Err(e) => return Err(e.to_string()),
    };
    let (glue, spheres) = match decompose(&sf) {
        Ok(x) => x,
        Err(DecompositionError::Unsupported(s)) => {
            return inconclusive(format!("inconclusive: unsupported: {s}\n"), json!({"reason": s}))
        }
        Err(e) => return Err(e.to_string()),
    };
    let returns = first_return_maps(&glue);
    let mut text = format!("decomposition along {}\n", count_curves(sf.curves.len()));
    text += &obstruction_text(f, &sf.matrix);
    for (i, part) in glue.parts.iter().enumerate() {
        let punctures: Vec<String> = spheres[i].punctures.iter().map(puncture_text).collect();
        let _ = writeln!(
            text,
            "  part {i}: punctures [{}], maps to part {} with degree {}",
            punctures.join(", "),
            glue.part_map[i],
            glue.degrees[i]
        );
        debug_assert_eq!(part.punctures(), punctures.len());
    }
    for r in &returns {
        let kind = match r.kind {
            ReturnKind::Homeomorphism => "homeomorphism",
            ReturnKind::ThurstonMap => "Thurston map",
        };
        let cyc: Vec<String> = r.cycle.iter().map(usize::to_string).collect();
        let _ = writeln!(text, "  cycle ({}): first return of degree {} ({kind})", cyc.join(" "), r.degree);
    }
    decided(
        text,
        json!({
            "multicurve": matrix_json(f, &sf.matrix),
            "gluing": serde_json::to_value(&glue).expect("values serialize"),
            "first_returns": serde_json::to_value(&returns).expect("values serialize"),
        }),
    )
}

fn reason_name(r: &Reason) -> &'static str {
    match r {
        Reason::Budget => "budget exhausted",
        Reason::CanonicalObstruction => "canonical obstruction not certified",
        Reason::DifferentCovers => "covers differ",
        Reason::HomeomorphismPiece => "homeomorphism piece",
        Reason::UnitEigenvalue => "unit eigenvalue",
        Reason::Deadline => "deadline reached",
    }
}

fn decide(f: &PLThurstonMap, g: &PLThurstonMap, budget: &Budget) -> Result<Report, String> {
    match decide_equivalence(f, g, budget) {
        Decision::Equivalent(w) if w.is_identity() => decided(
            "Equivalent (identity)\n".into(),
            json!({"decision": "equivalent", "witness": "identity"}),
        ),
        Decision::Equivalent(Witness::MappingClass { phi0, phi1 }) => decided(
            format!(
                "Equivalent\n  phi0 = {}\n  phi1 = {}\n",
                word_text(f, &phi0),
                word_text(f, &phi1)
            ),
            json!({
                "decision": "equivalent",
                "witness": {"phi0": word_json(f, &phi0), "phi1": word_json(f, &phi1)},
            }),
        ),
        Decision::Equivalent(Witness::Affine(c)) => decided(
            format!(
                "Equivalent (affine)\n  S(z) = {} z + {}\n  g(z) = {}\n",
                fmt_m2(&c.p),
                fmt_pt(&c.t),
                element_text(&c.g)
            ),
            json!({
                "decision": "equivalent",
                "witness": {"P": c.p, "t": pt_json(&c.t), "g": element_json(&c.g)},
            }),
        ),
        Decision::NotEquivalent(cert) => {
            let (text, detail) = certificate(f, g, &cert);
            decided(
                format!("Not equivalent: {text}"),
                json!({"decision": "not_equivalent", "certificate": detail}),
            )
        }
        Decision::Inconclusive(reasons) => {
            let names: Vec<&str> = reasons.iter().map(reason_name).collect();
            inconclusive(
                format!("Inconclusive: {}\n", names.join(", ")),
                json!({"decision": "inconclusive", "reasons": names}),
            )
        }
    }
}

fn certificate(f: &PLThurstonMap, g: &PLThurstonMap, c: &Certificate) -> (String, Value) {
    match c {
        Certificate::ObstructionMismatch { f: mf, g: mg } => (
            format!(
                "canonical obstructions differ\n  f: {}\n  g: {}\n",
                matrix_text(mf),
                matrix_text(mg)
            ),
            json!({"kind": "obstruction_mismatch", "f": matrix_json(f, mf), "g": matrix_json(g, mg)}),
        ),
        Certificate::Degree(a, b) => (
            format!("degrees {a} and {b}\n"),
            json!({"kind": "degree", "f": a, "g": b}),
        ),
        Certificate::MarkedCount(a, b) => (
            format!("{a} and {b} marked points\n"),
            json!({"kind": "marked_count", "f": a, "g": b}),
        ),
        Certificate::Orbifold(a, b) => (
            format!("orbifold signatures {a} and {b}\n"),
            json!({"kind": "orbifold", "f": a, "g": b}),
        ),
        Certificate::MarkedDynamics => (
            "marked dynamics are not conjugate\n".into(),
            json!({"kind": "marked_dynamics"}),
        ),
        Certificate::HurwitzClass => (
            "branched covers are not Hurwitz equivalent\n".into(),
            json!({"kind": "hurwitz_class"}),
        ),
        Certificate::AffineModels => (
            "affine models are not conjugate\n".into(),
            json!({"kind": "affine_models"}),
        ),
    }
}
