//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod support;

use std::time::{Duration, Instant};

use eqbase_core::assoc::{classify_all, enumerate_assoc_identities, GAMMA};
use eqbase_core::harness::{
    check_corpus, registry, run_base, verify_completeness, verify_spectrum, BaseStatus, CompletenessVerdict, Mode,
    ReplicateConfig,
};
use eqbase_core::kernel::check_script;
use eqbase_core::models::{search_models, SearchOptions};
use eqbase_core::prover::{prove, prove_staged, staged_script, ProverLimits};
use eqbase_core::syntax::AxiomFile;
use eqbase_core::term::Identity;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRunner};
use support::*;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn base_file(ids: &[Identity]) -> AxiomFile {
    AxiomFile { header: vec![], identities: ids.to_vec() }
}

fn corpus_replay() -> Outcome {
    let t = Instant::now();
    let r = check_corpus(None);
    let el = t.elapsed();
    let detail = format!("{} files, {} lemmas, {} steps, {}", r.files.len(), r.lemmas, r.steps, secs(el));
    check(r.pass && r.files.len() == 7 && r.steps >= 95 && el < Duration::from_secs(5), detail)
}

fn j3_redundant() -> Outcome {
    let ax = [
        id("J1", "x ^ y = y ^ x"),
        id("J2", "x ^ (y ^ z) = (x ^ y) ^ z"),
        id("J4", "x'' = x"),
        id("J5", "x' = (x ^ y)' ^ (x ^ y')'"),
    ];
    let t = Instant::now();
    let o = prove(&ax, &id("J3", "x ^ x = x"), &ProverLimits::default());
    let el = t.elapsed();
    let replay = o.script().map(|s| check_script(s, &base_file(&ax)));
    let ok = replay.as_ref().is_some_and(|v| v.all_pass());
    let steps = replay.map(|v| v.checked_steps()).unwrap_or(0);
    check(ok && el < Duration::from_secs(60), format!("{}, {} kernel steps, {}", o.kind(), steps, secs(el)))
}

fn commutativity_then_associativity() -> Outcome {
    let ax = [id("A9", "x ^ (y ^ z) = z ^ (y ^ x)"), id("J4", "x'' = x"), id("J5", "x' = (x ^ y)' ^ (x ^ y')'")];
    let comm = id("C", "x ^ y = y ^ x");
    let t = Instant::now();
    let c = prove(&ax, &comm, &ProverLimits::default());
    let el = t.elapsed();
    if !c.is_proved() || el >= Duration::from_secs(60) {
        return Err(format!("commutativity {} in {}", c.kind(), secs(el)));
    }
    let outs = prove_staged(&ax, &[comm, id("A", "x ^ (y ^ z) = (x ^ y) ^ z")], &ProverLimits::default());
    let total = t.elapsed();
    let replay = staged_script(&outs).map(|s| check_script(&s, &base_file(&ax)));
    let ok = replay.as_ref().is_some_and(|v| v.all_pass());
    check(
        ok && el < Duration::from_secs(60),
        format!(
            "commutativity {}, then associativity {}, kernel {}",
            secs(el),
            outs[1].kind(),
            if ok { "ok" } else { "FAIL" }
        ) + &format!(", {}", secs(total)),
    )
}

fn two_bases_staged() -> Outcome {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for name in ["{A6, J5'}", "{A8, J5'}", "{A5, J5'}", "{A13, J5'}"] {
        let b = registry().into_iter().find(|b| b.name == name).expect("registered");
        let s = Instant::now();
        let c = verify_completeness(&b, Mode::Staged, &ProverLimits::default(), 0);
        let proved = c.goals.iter().filter(|g| g.outcome == "proved").count();
        let good = c.verdict == CompletenessVerdict::Pass && proved == c.goals.len() && c.kernel_checked == Some(true);
        ok &= good;
        parts.push(format!("{name} {}/{} {}", proved, c.goals.len(), secs(s.elapsed())));
        for g in c.goals.iter().filter(|g| g.outcome != "proved") {
            parts.push(format!("{} {}", g.goal, g.outcome));
        }
    }
    let el = t.elapsed();
    check(ok && el < Duration::from_secs(600), format!("{}; total {}", parts.join(", "), secs(el)))
}

fn countermodels() -> Outcome {
    let cases = [
        (
            "{A9, J5} violating J4",
            vec![id("A9", "x ^ (y ^ z) = z ^ (y ^ x)"), id("J5", "x' = (x ^ y)' ^ (x ^ y')'")],
            id("J4", "x'' = x"),
            Tables::all_zero(),
        ),
        (
            "{A1, J5'} violating J1",
            vec![id("A1", "x ^ (y ^ z) = (x ^ y) ^ z"), id("J5'", "x = (x' ^ y)' ^ (x' ^ y')'")],
            id("J1", "x ^ y = y ^ x"),
            Tables::left_projection(),
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, satisfy, violate, expected) in cases {
        let t = Instant::now();
        // The first model in table order.
        let found = search_models(&SearchOptions::new(2, satisfy).violating(violate).limit(1));
        let el = t.elapsed();
        let models: Vec<Tables> = found.map(|o| o.models.iter().map(Tables::from_model).collect()).unwrap_or_default();
        let good = models == vec![expected] && el < Duration::from_secs(1);
        ok &= good;
        parts.push(format!("{label}: first model matches {}, {}", good, secs(el)));
    }
    check(ok, parts.join("; "))
}

/// Two identities are in one class when a renaming of x, y, z, possibly
/// with the sides exchanged, turns one into the other.
fn related(a: &Identity, b: &Identity) -> bool {
    let perms = [["x", "y", "z"], ["x", "z", "y"], ["y", "x", "z"], ["y", "z", "x"], ["z", "x", "y"], ["z", "y", "x"]];
    perms.iter().any(|p| {
        let f = |v: &str| ["x", "y", "z"].iter().position(|w| *w == v).map(|i| std::sync::Arc::from(p[i]));
        let (l, r) = (a.lhs.rename(&f), a.rhs.rename(&f));
        (l == b.lhs && r == b.rhs) || (l == b.rhs && r == b.lhs)
    })
}

fn classifier() -> Outcome {
    let t = Instant::now();
    let classes = classify_all();
    let el = t.elapsed();
    let all = enumerate_assoc_identities();
    let members: usize = classes.iter().map(|c| c.members.len()).sum();
    let gamma: Vec<Identity> = GAMMA.iter().map(|(n, s)| id(n, s)).collect();
    let one_rep = classes.iter().all(|c| {
        let reps: Vec<&Identity> = gamma.iter().filter(|g| c.members.iter().any(|m| related(m, g))).collect();
        reps.len() == 1 && reps[0].name == c.label
    });
    let closed = classes.iter().enumerate().all(|(i, c)| {
        c.members
            .iter()
            .all(|m| classes.iter().enumerate().all(|(j, d)| d.members.iter().all(|n| related(m, n) == (i == j))))
    });
    // Identities in one class have the same models among all binary
    // operations on two elements.
    let magmas: Vec<Tables> =
        (0..16).map(|k| Tables { n: 2, meet: (0..4).map(|b| (k >> b) & 1).collect(), comp: vec![0, 1] }).collect();
    let semantic = classes.iter().all(|c| {
        let sig = |i: &Identity| magmas.iter().map(|m| m.satisfies(i)).collect::<Vec<_>>();
        c.members.iter().all(|m| sig(m) == sig(&c.members[0]))
    });
    let detail = format!(
        "{} classes, {} of {} identities, one representative each {}, orbit check {}, semantic check {}, {}",
        classes.len(),
        members,
        all.len(),
        one_rep,
        closed,
        semantic,
        secs(el)
    );
    check(
        classes.len() == 14
            && members == 66
            && all.len() == 66
            && one_rep
            && closed
            && semantic
            && el < Duration::from_secs(1),
        detail,
    )
}

fn spectra() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for b in registry().into_iter().filter(|b| b.status == BaseStatus::ProvedInPaper) {
        let t = Instant::now();
        let s = verify_spectrum(&b, 3, 1);
        let small = t.elapsed();
        let t4 = Instant::now();
        let four = search_models(&SearchOptions::new(4, b.axioms.clone()).up_to_iso());
        let el4 = t4.elapsed();
        let counts = match four {
            Ok(f) if !s.exhausted => {
                let mut c = s.counts;
                c.push(f.models.len());
                c
            }
            _ => vec![],
        };
        let good = counts == [1, 1, 0, 1] && el4 < Duration::from_secs(60);
        ok &= good;
        parts.push(format!("{} {:?} n=4 {} (1-3 {})", b.name, counts, secs(el4), secs(small)));
    }
    check(ok, parts.join("; "))
}

fn search_matches_brute_force() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let set = proptest::collection::vec(small_identity(), 1..4);
    let case = (1usize..=3, set, proptest::option::of(small_identity()));
    let mut mismatches = Vec::new();
    let mut total = 0;
    for k in 0..20 {
        let (n, satisfy, violate) = case.new_tree(&mut runner).expect("generate").current();
        let oracle = brute_force(n, &satisfy, violate.as_ref());
        let mut opts = SearchOptions::new(n, satisfy.clone());
        if let Some(v) = &violate {
            opts = opts.violating(v.clone());
        }
        let found = search_models(&opts).map(|o| o.models.iter().map(Tables::from_model).collect::<Vec<_>>());
        let mut found = found.unwrap_or_default();
        found.sort();
        let iso = search_models(&opts.clone().up_to_iso()).map(|o| o.models.len()).unwrap_or(usize::MAX);
        total += oracle.len();
        if found != oracle || iso != iso_classes(&oracle) {
            mismatches.push(format!("case {k} (n={n})"));
        }
    }
    check(mismatches.is_empty(), format!("20 cases, {total} models, mismatches: {:?}", mismatches))
}

fn property_suites() -> Outcome {
    let cases = 1000;
    let mut parts = Vec::new();
    let mut ok = true;
    let mut run = |name: &str, f: &mut dyn FnMut(&mut TestRunner) -> Result<(), String>| {
        let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
        match f(&mut runner) {
            Ok(()) => parts.push(format!("{name} {cases}")),
            Err(e) => {
                ok = false;
                parts.push(format!("{name} FAILED: {e}"));
            }
        }
    };
    fn err<T: std::fmt::Debug>(e: proptest::test_runner::TestError<T>) -> String {
        format!("{e}")
    }
    run("match/substitute", &mut |r| {
        r.run(&(term(), substitution()), |(p, s)| prop_match_substitute(&p, &s)).map_err(err)
    });
    run("positions", &mut |r| r.run(&term(), |t| prop_positions(&t)).map_err(err));
    run("ordering", &mut |r| {
        r.run(&(term(), term(), term(), substitution()), |(a, b, c, s)| prop_kbo(&a, &b, &c, &s)).map_err(err)
    });
    run("syntax round trip", &mut |r| r.run(&term(), |t| prop_term_round_trip(&t)).map_err(err));
    run("kernel soundness", &mut |r| {
        r.run(&(0usize..3, plan()), |(k, (start, p))| prop_kernel_sound(&theories()[k], &start, &p)).map_err(err)
    });
    run("prover replay", &mut |r| {
        let strat = (0usize..3, plan(), term_over(&VARS, 3), proptest::bool::ANY);
        r.run(&strat, |(k, (start, p), other, derived)| {
            let th = &theories()[k];
            prop_prover_replay(th, &goal_for(th, &start, &p, &other, derived))
        })
        .map_err(err)
    });
    check(ok, parts.join(", "))
}

fn claimed_bases() -> Outcome {
    let config = ReplicateConfig::default();
    let t = Instant::now();
    let mut sound = 0;
    let mut complete = 0;
    let mut spectrum = 0;
    let mut failed = Vec::new();
    let claimed: Vec<_> = registry().into_iter().filter(|b| b.status == BaseStatus::ClaimedForSequel).collect();
    for b in &claimed {
        let r = run_base(b, &config);
        if r.soundness.pass {
            sound += 1;
        } else {
            failed.push(b.name.clone());
        }
        complete += usize::from(r.completeness.verdict == CompletenessVerdict::Pass);
        spectrum += usize::from(r.spectrum_pass && !r.spectrum_partial);
    }
    let detail = format!(
        "{} records, {} sound, findings: {} complete, {} with the Boolean spectrum, {}",
        claimed.len(),
        sound,
        complete,
        spectrum,
        secs(t.elapsed())
    );
    check(failed.is_empty() && sound == claimed.len(), detail)
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("corpus replay", corpus_replay),
        ("J3 is redundant", j3_redundant),
        ("3-base commutativity and associativity", commutativity_then_associativity),
        ("2-bases, staged", two_bases_staged),
        ("countermodels", countermodels),
        ("classifier", classifier),
        ("spectra", spectra),
        ("search vs brute force", search_matches_brute_force),
        ("property suites", property_suites),
        ("claimed bases", claimed_bases),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let line = match f() {
            Ok(d) => format!("PASS {:>2} {name}: {d}", k + 1),
            Err(d) => {
                failures += 1;
                format!("FAIL {:>2} {name}: {d}", k + 1)
            }
        };
        println!("{line}");
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
