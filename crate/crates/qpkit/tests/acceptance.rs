use qpkit::harness::{self, Config, VerificationReport};
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Line {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn counts(r: &VerificationReport, names: &[&str]) -> String {
    names.iter().map(|n| format!("{} {}/{}", n, r.count_passed(n), r.count(n))).collect::<Vec<_>>().join(", ")
}

fn all_present(r: &VerificationReport, names: &[&str]) -> bool {
    names.iter().all(|n| r.count(n) > 0 && r.count_passed(n) == r.count(n))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn show_failures(r: &VerificationReport) {
    for f in r.failures().iter().take(5) {
        println!("    failed {} [{}] {}", f.name, f.instance, f.witness);
    }
}

fn main() -> ExitCode {
    harness::init_threads();
    let cfg = Config::default();
    let mut lines = Vec::new();

    let (r, t) = timed(harness::reproduce_a2);
    let names = ["table-g", "table-f", "table-h"];
    lines.push(Line {
        id: 1,
        title: "A2 table at t0..t5",
        pass: all_present(&r, &names) && r.passed() && t < Duration::from_secs(1),
        detail: format!("{}; {:.3}s", counts(&r, &names), t.as_secs_f64()),
    });
    show_failures(&r);

    let r = harness::a2_periodicity();
    let names = ["period-g", "period-f", "period-matrix"];
    lines.push(Line { id: 2, title: "A2 periodicity", pass: all_present(&r, &names) && r.passed(), detail: counts(&r, &names) });
    show_failures(&r);

    let r = harness::cycle_module_polynomials();
    let names = ["module-f", "sum-f", "coefficient"];
    lines.push(Line { id: 3, title: "three-cycle modules", pass: all_present(&r, &names) && r.passed(), detail: counts(&r, &names) });
    show_failures(&r);

    let (r, t) = timed(|| harness::g_half(&cfg));
    let names = ["g-half", "cluster-rep-relations", "cluster-rep-e-zero"];
    lines.push(Line {
        id: 4,
        title: "g-vectors of cluster representations",
        pass: r.count("g-half") >= 200 && r.passed() && t < Duration::from_secs(600),
        detail: format!("{}; {} skipped; {:.1}s", counts(&r, &names), r.skipped.len(), t.as_secs_f64()),
    });
    show_failures(&r);

    let r = harness::f_half(5);
    let names = ["f-half", "f-half-coverage"];
    let coverage: Vec<String> = r.checks.iter().filter(|c| c.name == "f-half-coverage").map(|c| format!("{} {}", c.instance, c.witness)).collect();
    lines.push(Line {
        id: 5,
        title: "F-polynomials of cluster representations",
        pass: all_present(&r, &names) && r.passed(),
        detail: format!("{}; certified {}", counts(&r, &names), coverage.join(", ")),
    });
    show_failures(&r);

    let r = harness::pair_campaign(&cfg);
    lines.push(Line {
        id: 6,
        title: "E^sym and Hom identities under mutation",
        pass: r.count("pair") >= 100 && r.count_passed("pair") == r.count("pair"),
        detail: format!("{}; {} skipped", counts(&r, &["pair"]), r.skipped.len()),
    });
    let names = ["lower-bound", "cluster-e-zero", "kronecker"];
    lines.push(Line { id: 7, title: "lower bound for E", pass: all_present(&r, &names), detail: counts(&r, &names) });
    show_failures(&r);

    let r = harness::seed_properties(&cfg);
    let names = ["f-shape", "sign-coherence", "g-basis", "separation", "transition"];
    lines.push(Line {
        id: 8,
        title: "F-polynomial and g-vector properties",
        pass: all_present(&r, &names) && r.passed(),
        detail: format!("{}; {} skipped", counts(&r, &names), r.skipped.len()),
    });
    show_failures(&r);

    let r = harness::involutivity(&cfg);
    let names = ["matrix", "qp-matrix", "rep-invariants", "iso-rate"];
    let iso = counts(&r, &["iso-isomorphic", "iso-inconclusive", "iso-not-isomorphic"]);
    lines.push(Line {
        id: 9,
        title: "double mutation",
        pass: all_present(&r, &names) && r.passed() && r.count("iso-not-isomorphic") == 0,
        detail: format!("{}; {}", counts(&r, &names), iso),
    });
    show_failures(&r);

    let r = harness::homology_campaign();
    let names = ["certificate", "exact-sequence", "psi-phi", "minimal-presentation", "e-proj"];
    lines.push(Line {
        id: 10,
        title: "projective presentations",
        pass: all_present(&r, &names) && r.passed() && r.count("e-proj") >= 30,
        detail: counts(&r, &names),
    });
    show_failures(&r);

    let mut ok = true;
    for l in &lines {
        ok &= l.pass;
        println!("{} criterion {:>2}: {} ({})", if l.pass { "PASS" } else { "FAIL" }, l.id, l.title, l.detail);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
