// Acceptance harness: one PASS/FAIL line per criterion.
//
// A criterion whose only failures are explained by a documented entry
// (ERRATA or UNLISTED in the golden module) still prints FAIL, followed by
// the explanation. The process exits nonzero only when some failure is not
// explained that way.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

use hamfix_core::classifier4::{classify4, enumerate_case3_tuples};
use hamfix_core::classifier6::golden::erratum;
use hamfix_core::classifier6::{
    classify_all_with, enumerate_tfd, equivalent, flip, golden_row, unlisted, verify, Classification, ExtremalProfile,
    SearchConfig, Tfd, DEFAULT_BOUND, GOLDEN6,
};
use hamfix_core::lattice::{exceptional_classes, make_blowup_lattice};
use hamfix_core::localization::{chern_number, integrate, Integrand};
use hamfix_core::rational::{q, show};
use hamfix_core::reduction::{check_dh_decrease, crossing_type, dh_jump, CrossingType};
use hamfix_core::toric::{
    chern_number_from_volume, default_corpus_dir, fixed_faces, is_semifree, level_profile, load_corpus,
    tfd_from_polytope, CircleDirection,
};

enum Outcome {
    Pass(String),
    /// Failures, each either documented (`Some(explanation)`) or not.
    Fail(Vec<(String, Option<String>)>),
}

impl Outcome {
    fn from(ok: String, failures: Vec<(String, Option<String>)>) -> Self {
        if failures.is_empty() {
            Outcome::Pass(ok)
        } else {
            Outcome::Fail(failures)
        }
    }
}

fn criterion1(c: &Classification) -> Outcome {
    let mut fails = Vec::new();
    for g in &GOLDEN6 {
        let Some(t) = c.rows.iter().find(|t| t.label.as_deref() == Some(g.label)) else {
            fails.push((format!("{} not produced", g.label), None));
            continue;
        };
        let counts = (t.count_at(-1), t.count_at(0), t.count_at(1));
        let expect_1 = g.k_plus + usize::from(g.max.level() == 1);
        let expect = (g.k_minus, g.surfaces.len(), expect_1);
        if counts != expect {
            fails.push((format!("{}: components at -1, 0, 1 are {counts:?}, expected {expect:?}", g.label), None));
        }
        if t.blueprint.as_ref().map(|b| b.canonical()) != Some(g.blueprint().canonical()) {
            fails.push((format!("{}: level-0 classes differ from the table", g.label), None));
        }
    }
    for extra in &c.extra {
        let bp = extra.blueprint.clone().expect("search output carries its blueprint");
        let note = unlisted(&bp).map(|u| format!("documented unlisted survivor, realized by {}: {}", u.witness, u.reason));
        fails.push((format!("additional survivor {extra}"), note));
    }
    for m in &c.missing {
        fails.push((format!("{m} missing"), None));
    }
    let sphere = ExtremalProfile::new(0, 2);
    for crit in [BTreeSet::from([-1]), BTreeSet::from([-1, 1])] {
        match enumerate_tfd(sphere, &crit) {
            Ok(v) if v.is_empty() => {}
            Ok(v) => fails.push((format!("sphere maximum with interior levels {crit:?} has {} survivors", v.len()), None)),
            Err(e) => fails.push((format!("sphere maximum with interior levels {crit:?}: {e}"), None)),
        }
    }
    let produced = c.rows.len() + c.extra.len();
    Outcome::from(format!("{produced} rows, all 18 table rows matched; the two empty cases are empty"), fails)
}

fn criterion2(rows: &[&Tfd]) -> Outcome {
    let mut fails = Vec::new();
    for t in rows {
        let label = t.label_or_default();
        let want = golden_row(&label).map(|g| g.chern).or_else(|| t.blueprint.as_ref().and_then(unlisted).map(|u| u.chern));
        match (chern_number(t), want) {
            (Ok(got), Some(w)) if got == w => {}
            (got, w) => fails.push((format!("{label}: c1^3 {got:?}, expected {w:?}"), None)),
        }
    }
    Outcome::from(format!("c1^3 matches for {} rows", rows.len()), fails)
}

fn criterion3(rows: &[&Tfd]) -> Outcome {
    let mut fails = Vec::new();
    for t in rows {
        for alpha in [Integrand::One, Integrand::C1] {
            match integrate(t, alpha) {
                Ok(p) if p.is_zero() => {}
                Ok(p) => fails.push((format!("{}: integral of {alpha:?} is {p:?}", t.label_or_default()), None)),
                Err(e) => fails.push((format!("{}: {e}", t.label_or_default()), None)),
            }
        }
    }
    Outcome::from(format!("integrals of 1 and c1 vanish for {} rows", rows.len()), fails)
}

fn criterion4(rows: &[&Tfd]) -> Outcome {
    let mut fails = Vec::new();
    for t in rows {
        let label = t.label_or_default();
        let (b2, b3) = match (golden_row(&label), t.blueprint.as_ref().and_then(unlisted)) {
            (Some(g), _) => (g.b2, g.b3),
            (None, Some(u)) => (u.b2, 0),
            (None, None) => {
                fails.push((format!("{label}: no expected Betti numbers"), None));
                continue;
            }
        };
        let want = [1, 0, b2, b3, b2, 0, 1];
        match verify(t) {
            Ok(d) if d.betti == want => {}
            Ok(d) => fails.push((format!("{label}: betti {:?}, expected {want:?}", d.betti), None)),
            Err(e) => fails.push((format!("{label}: {e}"), None)),
        }
    }
    Outcome::from(format!("Betti vectors match for {} rows", rows.len()), fails)
}

fn criterion5(c: &Classification) -> Outcome {
    let mut fails = Vec::new();
    for t in &c.rows {
        let label = t.label_or_default();
        let g = golden_row(&label).expect("rows are golden");
        let (wg, hz) = g.capacities();
        let got = match verify(t).map(|d| d.capacities) {
            Ok(Some(c)) => c,
            other => {
                fails.push((format!("{label}: no capacities ({other:?})"), None));
                continue;
            }
        };
        if got.1 != q(hz) {
            fails.push((format!("{label}: Hofer-Zehnder {} vs printed {hz}", show(&got.1)), None));
        }
        if got.0 != q(wg) {
            let note = erratum(&label, "gromov_width")
                .filter(|e| e.corrected == show(&got.0))
                .map(|e| format!("documented erratum: {}", e.reason));
            fails.push((format!("{label}: Gromov width {} vs printed {wg}", show(&got.0)), note));
        }
    }
    Outcome::from(format!("capacities match for {} rows", c.rows.len()), fails)
}

fn criterion6() -> Outcome {
    // (label, e_min, interior points, b2, c1^2)
    const EXPECT: [(&str, i64, usize, i64, i64); 8] = [
        ("I-1", -1, 2, 2, 8),
        ("II-1", -1, 0, 1, 9),
        ("II-2", -1, 1, 2, 8),
        ("II-3", -1, 2, 3, 7),
        ("III-1", 0, 0, 2, 8),
        ("III-2", -1, 0, 2, 8),
        ("III-3", 0, 1, 3, 7),
        ("III-4", -1, 2, 4, 6),
    ];
    let mut fails = Vec::new();
    let tuples = enumerate_case3_tuples();
    let want: BTreeSet<(i64, i64, i64)> =
        [(1, -1, 0), (1, -1, 1), (1, -1, 2), (2, 0, 0), (2, 0, 1), (3, 1, 0)].into();
    if tuples != want {
        fails.push((format!("case III tuples before dedupe {tuples:?}"), None));
    }
    match classify4() {
        Err(e) => fails.push((e.to_string(), None)),
        Ok(rows) => {
            if rows.len() != EXPECT.len() {
                fails.push((format!("{} rows, expected 8", rows.len()), None));
            }
            for ((label, e, k, b2, c1sq), t) in EXPECT.iter().zip(&rows) {
                let got = (t.label.as_deref().unwrap_or("?"), t.euler_at_min, t.k, t.betti()[2], t.c1_squared());
                if got != (*label, *e, *k, *b2, *c1sq) {
                    fails.push((format!("{t}: (label, e_min, k, b2, c1^2) = {got:?}"), None));
                }
                let ints = t.integrals();
                if ints[0] != q(0) || ints[1] != q(0) {
                    fails.push((format!("{label}: integrals of 1 and c1 do not vanish"), None));
                }
                if let Err(err) = t.check() {
                    fails.push((format!("{label}: {err}"), None));
                }
            }
        }
    }
    Outcome::from("8 rows with matching e_min; 6 case III tuples before the flip".into(), fails)
}

type Profile = &'static [((i64, usize), usize)];

const CORPUS: [(&str, &str, i64, Profile); 14] = [
    ("I-3", "I-3", 52, &[((-3, 0), 1), ((-1, 0), 1), ((0, 2), 2), ((1, 0), 1), ((3, 0), 1)]),
    ("II-3.1", "II-3.1", 62, &[((-3, 0), 1), ((-1, 0), 1), ((0, 2), 1), ((2, 2), 1)]),
    ("II-4.1", "II-4.1", 44, &[((-3, 0), 1), ((-1, 0), 2), ((0, 2), 2), ((1, 0), 1), ((2, 2), 1)]),
    ("II-4.2", "II-4.2", 42, &[((-3, 0), 1), ((-1, 0), 3), ((0, 2), 1), ((1, 0), 2), ((2, 2), 1)]),
    ("III-3.1", "III-3.1", 54, &[((-3, 0), 1), ((0, 2), 1), ((1, 4), 1)]),
    ("III-4.1", "III-4.1", 50, &[((-3, 0), 1), ((-1, 0), 1), ((0, 2), 1), ((1, 4), 1)]),
    ("III-4.2", "III-4.2", 50, &[((-3, 0), 1), ((-1, 0), 1), ((0, 2), 1), ((1, 4), 1)]),
    ("III-4.3", "III-4.3", 46, &[((-3, 0), 1), ((-1, 0), 1), ((0, 2), 1), ((1, 4), 1)]),
    ("III-4.5", "III-4.5", 46, &[((-3, 0), 1), ((-1, 0), 2), ((0, 2), 1), ((1, 4), 1)]),
    ("P1xF1", "unlisted-1", 48, &[((-3, 0), 1), ((-1, 0), 2), ((0, 2), 1), ((1, 0), 1), ((2, 2), 1)]),
    ("P1xP1xP1", "I-2", 48, &[((-3, 0), 1), ((-1, 0), 3), ((1, 0), 3), ((3, 0), 1)]),
    ("P1xP2", "II-3.2", 54, &[((-3, 0), 1), ((-1, 0), 1), ((0, 2), 1), ((2, 2), 1)]),
    ("P3", "III-1", 64, &[((-3, 0), 1), ((1, 4), 1)]),
    ("V7", "III-2", 56, &[((-3, 0), 1), ((-1, 0), 1), ((1, 4), 1)]),
];

fn criterion7(rows: &[Tfd]) -> Outcome {
    let mut fails = Vec::new();
    let corpus = match load_corpus(&default_corpus_dir()) {
        Ok(c) => c,
        Err(e) => return Outcome::Fail(vec![(e.to_string(), None)]),
    };
    let names: BTreeSet<&str> = corpus.iter().map(|p| p.name.as_str()).collect();
    let want_names: BTreeSet<&str> = CORPUS.iter().map(|c| c.0).collect();
    if names != want_names {
        fails.push((format!("corpus is {names:?}"), None));
    }
    for (name, row, chern, profile) in CORPUS {
        let Some(p) = corpus.iter().find(|p| p.name == name) else { continue };
        let Some(d) = p.xi.and_then(|xi| CircleDirection::new(xi).ok()) else {
            fails.push((format!("{name}: no primitive circle direction"), None));
            continue;
        };
        if !matches!(is_semifree(p, d), Ok(true)) {
            fails.push((format!("{name}: action is not semifree"), None));
            continue;
        }
        let want: BTreeMap<(i64, usize), usize> = profile.iter().copied().collect();
        match fixed_faces(p, d) {
            Ok(f) if level_profile(&f) == want => {}
            Ok(f) => fails.push((format!("{name}: fixed faces {:?}", level_profile(&f)), None)),
            Err(e) => fails.push((format!("{name}: {e}"), None)),
        }
        match chern_number_from_volume(p) {
            Ok(v) if v == chern => {}
            other => fails.push((format!("{name}: 6 Vol = {other:?}, expected {chern}"), None)),
        }
        match tfd_from_polytope(p, d, rows) {
            Ok(m) if m.label == row => {}
            Ok(m) => fails.push((format!("{name}: matched {}, expected {row}", m.label), None)),
            Err(e) => fails.push((format!("{name}: {e}"), None)),
        }
    }
    Outcome::from(format!("{} polytopes semifree, balanced, matched, 6 Vol = c1^3", CORPUS.len()), fails)
}

fn criterion8(c: &Classification) -> Outcome {
    let mut fails = Vec::new();
    let mut crossings = 0;
    for t in c.all_rows() {
        let label = t.label_or_default();
        if t.slices.len() + 1 != t.events.len() {
            fails.push((format!("{label}: {} slices for {} levels", t.slices.len(), t.events.len()), None));
            continue;
        }
        for (i, ev) in t.events.iter().enumerate().skip(1).take(t.events.len() - 2) {
            let (before, after) = (&t.slices[i - 1], &t.slices[i]);
            match dh_jump(before, after) {
                Ok(j) if j[0] == q(0) => {}
                other => fails.push((format!("{label}: DH discontinuous at {} ({other:?})", ev.level), None)),
            }
            if let Ok(CrossingType::BlowUp(k)) = crossing_type(ev) {
                crossings += 1;
                if !matches!(check_dh_decrease(before, after, k), Ok(true)) {
                    fails.push((format!("{label}: DH does not drop by {k} s^2 at {}", ev.level), None));
                }
            }
        }
        match flip(t).and_then(|f| flip(&f)) {
            Ok(ff) if equivalent(&ff, t) => {}
            _ => fails.push((format!("{label}: flip is not an involution"), None)),
        }
        match (flip(t).and_then(|f| chern_number(&f)), chern_number(t)) {
            (Ok(a), Ok(b)) if a == b => {}
            other => fails.push((format!("{label}: flip changes c1^3 ({other:?})"), None)),
        }
    }

    let listed: [Vec<Vec<i64>>; 4] = [
        vec![],
        vec![vec![0, 1]],
        vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, -1, -1]],
        vec![
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, -1, -1, 0],
            vec![1, -1, 0, -1],
            vec![1, 0, -1, -1],
        ],
    ];
    for (k, want) in listed.iter().enumerate() {
        let got: BTreeSet<Vec<i64>> = exceptional_classes(&make_blowup_lattice(k).unwrap(), 5)
            .unwrap()
            .iter()
            .map(|c| c.to_ints().unwrap())
            .collect();
        if got != want.iter().cloned().collect() {
            fails.push((format!("exceptional classes for k = {k}: {got:?}"), None));
        }
    }
    let four = exceptional_classes(&make_blowup_lattice(4).unwrap(), 5).unwrap().len();
    if four != 10 {
        fails.push((format!("{four} exceptional classes for k = 4, expected 10"), None));
    }

    if c.stats.max_abs_coeff >= DEFAULT_BOUND {
        fails.push((format!("a survivor reaches the box edge ({})", c.stats.max_abs_coeff), None));
    }
    Outcome::from(
        format!(
            "DH continuous, {crossings} index-2 crossings drop by k s^2, flip is an involution preserving c1^3, \
             exceptional classes listed, largest survivor coefficient {} < {DEFAULT_BOUND}",
            c.stats.max_abs_coeff
        ),
        fails,
    )
}

fn main() -> ExitCode {
    let classification = match classify_all_with(&SearchConfig::default()) {
        Ok(c) => c,
        Err(e) => {
            println!("classification failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let rows: Vec<&Tfd> = classification.all_rows().collect();
    let owned: Vec<Tfd> = rows.iter().map(|&t| t.clone()).collect();

    let results = [
        ("six-dimensional classification", criterion1(&classification)),
        ("Chern numbers", criterion2(&rows)),
        ("localization sanity", criterion3(&rows)),
        ("Betti numbers", criterion4(&rows)),
        ("capacities", criterion5(&classification)),
        ("four-dimensional classification", criterion6()),
        ("toric corpus", criterion7(&owned)),
        ("property suites", criterion8(&classification)),
    ];

    let mut undocumented = 0;
    for (n, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Outcome::Pass(msg) => println!("criterion {}: PASS  {name}: {msg}", n + 1),
            Outcome::Fail(fails) => {
                let open = fails.iter().filter(|(_, note)| note.is_none()).count();
                undocumented += open;
                let tag = if open == 0 { " (documented deviation)" } else { "" };
                println!("criterion {}: FAIL  {name}{tag}", n + 1);
                for (what, note) in fails {
                    match note {
                        Some(note) => println!("    {what}\n      {note}"),
                        None => println!("    {what}  [undocumented]"),
                    }
                }
            }
        }
    }
    if undocumented > 0 {
        println!("{undocumented} undocumented failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
