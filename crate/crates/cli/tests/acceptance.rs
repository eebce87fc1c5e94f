//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use dfchar::characters::{Check, SpaceData};
use dfchar::complex::{build_standard, SimplicialComplex, DEFAULT_BUDGET};
use dfchar::morse::MorseMatching;
use dfchar::scalar::rat;
use dfchar_cli::{suite, RunReport};
use serde_json::Value;

const SEED: u64 = 20240917;
const TRIALS: usize = 100;
const HODGE_SAMPLES: usize = 100;
const HODGE_TOL: f64 = 1e-10;
const TABLES_BUDGET: Duration = Duration::from_secs(60);
const FIXTURES: [&str; 5] = ["sphere2", "torus", "rp2", "rp3", "cp2"];

fn fixture(name: &str) -> Arc<SimplicialComplex> {
    build_standard(name, DEFAULT_BUDGET).unwrap_or_else(|e| panic!("{name}: {e}")).into_arc()
}

/// Verdict and a one-line summary.
type Outcome = (bool, String);

fn summarize(checks: &[Check]) -> Outcome {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => (false, format!("{}: {}", c.name, c.detail)),
        None => (!checks.is_empty(), format!("{} checks", checks.len())),
    }
}

/// `(torus rank, free rank, torsion, exact part nonzero)` in degrees `-1..=n`.
type Row = (usize, usize, &'static [u64], bool);

const GENUS1: [Row; 4] = [(0, 1, &[], false), (1, 2, &[], true), (2, 1, &[], true), (1, 0, &[], false)];
const GENUS2: [Row; 4] = [(0, 1, &[], false), (1, 4, &[], true), (4, 1, &[], true), (1, 0, &[], false)];
const CP2: [Row; 6] =
    [(0, 1, &[], false), (1, 0, &[], true), (0, 1, &[], true), (1, 0, &[], true), (0, 1, &[], true), (1, 0, &[], false)];
const RP3: [Row; 5] = [(0, 1, &[], false), (1, 0, &[], true), (0, 0, &[2], true), (0, 1, &[], true), (1, 0, &[], false)];
const CP2_CP2: [Row; 10] = [
    (0, 1, &[], false),
    (1, 0, &[], true),
    (0, 2, &[], true),
    (2, 0, &[], true),
    (0, 3, &[], true),
    (3, 0, &[], true),
    (0, 2, &[], true),
    (2, 0, &[], true),
    (0, 1, &[], true),
    (1, 0, &[], false),
];

fn table_rows(space: &str) -> Result<Vec<(usize, usize, Vec<u64>, bool)>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_dfchar"))
        .args(["tables", "--space", space, "--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    let doc: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = doc["results"]["table"]["rows"].as_array().ok_or("no rows")?;
    rows.iter()
        .map(|r| {
            let n = |v: &Value| v.as_u64().map(|x| x as usize).ok_or_else(|| format!("bad row {r}"));
            let torsion = r["discrete"]["torsion"]
                .as_array()
                .ok_or("no torsion")?
                .iter()
                .map(|t| t.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| format!("bad torsion {t}")))
                .collect::<Result<Vec<u64>, String>>()?;
            Ok((n(&r["torus_rank"])?, n(&r["discrete"]["free_rank"])?, torsion, n(&r["exact_dim"])? > 0))
        })
        .collect()
}

fn golden_tables() -> Outcome {
    let start = Instant::now();
    let cases: [(&str, &[Row]); 5] =
        [("genus1", &GENUS1), ("genus2", &GENUS2), ("cp2", &CP2), ("rp3", &RP3), ("cp2*cp2", &CP2_CP2)];
    for (space, golden) in cases {
        let rows = match table_rows(space) {
            Ok(r) => r,
            Err(e) => return (false, format!("{space}: {e}")),
        };
        let want: Vec<_> = golden.iter().map(|&(t, f, tor, e)| (t, f, tor.to_vec(), e)).collect();
        if rows != want {
            return (false, format!("{space}: got {rows:?}, want {want:?}"));
        }
    }
    let elapsed = start.elapsed();
    (elapsed < TABLES_BUDGET, format!("5 tables in {:.1}s (limit {}s)", elapsed.as_secs_f64(), TABLES_BUDGET.as_secs()))
}

fn exact_sequences() -> Outcome {
    let mut checks = Vec::new();
    for name in FIXTURES {
        match suite::sequences(&fixture(name)) {
            Ok(c) => checks.extend(c.into_iter().map(|c| Check::new(format!("{name}: {}", c.name), c.passed, c.detail))),
            Err(e) => return (false, format!("{name}: {e}")),
        }
    }
    summarize(&checks)
}

fn duality() -> Outcome {
    let mut checks = Vec::new();
    for name in ["sphere2", "torus", "rp3", "cp2"] {
        let data = SpaceData::from_complex(name, &fixture(name));
        match suite::duality(&data) {
            Ok(c) => checks.extend(c.into_iter().map(|c| Check::new(format!("{name}: {}", c.name), c.passed, c.detail))),
            Err(e) => return (false, format!("{name}: {e}")),
        }
    }
    summarize(&checks)
}

fn linking() -> Outcome {
    match suite::linking(&fixture("rp3"), 1, SEED) {
        Ok((m, checks)) => {
            let want = vec![vec![rat(1, 2)]];
            if m != want {
                return (false, format!("matrix {m:?}"));
            }
            let (ok, detail) = summarize(&checks);
            (ok, format!("[[1/2]]; {detail}"))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn per_fixture(run: impl Fn(&Arc<SimplicialComplex>) -> dfchar::Result<Vec<Check>>) -> Outcome {
    let mut checks = Vec::new();
    for name in FIXTURES {
        match run(&fixture(name)) {
            Ok(c) => checks.extend(c.into_iter().map(|c| Check::new(format!("{name}: {}", c.name), c.passed, c.detail))),
            Err(e) => return (false, format!("{name}: {e}")),
        }
    }
    let (ok, detail) = summarize(&checks);
    (ok, format!("{detail}, {TRIALS} trials per fixture"))
}

fn hodge() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    let mut checks = Vec::new();
    for name in FIXTURES.iter().copied().chain(["genus2"]) {
        let mut report = RunReport::new("hodge");
        if let Err(e) = suite::hodge_residuals(&fixture(name), HODGE_SAMPLES, HODGE_TOL, SEED, &mut report) {
            return (false, format!("{name}: {e}"));
        }
        for (key, &v) in &report.residuals {
            if key.ends_with("iterative") {
                worst.0 = worst.0.max(v);
            } else {
                worst.1 = worst.1.max(v);
            }
        }
        checks.extend(report.checks.into_iter().map(|c| Check::new(format!("{name}: {}", c.name), c.passed, c.detail)));
    }
    let (ok, detail) = summarize(&checks);
    (ok, format!("{detail}; max iterative {:e} (≤ {HODGE_TOL:e}), max exact {:e}", worst.0, worst.1))
}

fn abel_jacobi() -> Outcome {
    let mut report = RunReport::new("aj");
    // Vertex (i, j) of the 3 × 3 grid is i + 3j.
    match suite::abel_jacobi_grid(3, 1 + 3 * 2, &[rat(1, 3), rat(2, 3)], 10, SEED, &mut report) {
        Ok(()) => summarize(&report.checks),
        Err(e) => (false, e.to_string()),
    }
}

fn morse() -> Outcome {
    let mut checks = Vec::new();
    for name in ["circle", "sphere2", "torus", "rp2"] {
        let k = fixture(name);
        let hand = match suite::hand_matching(name, k.clone()) {
            Ok(m) => m,
            Err(e) => return (false, format!("{name} hand matching: {e}")),
        };
        for (label, m) in [("greedy", MorseMatching::greedy(k.clone())), ("hand", hand)] {
            match suite::morse_checks(&m, &format!("{name} {label}")) {
                Ok(c) => checks.extend(c),
                Err(e) => return (false, format!("{name} {label}: {e}")),
            }
        }
    }
    for name in ["rp3", "cp2", "genus2"] {
        match suite::morse_checks(&MorseMatching::greedy(fixture(name)), &format!("{name} greedy")) {
            Ok(c) => checks.extend(c),
            Err(e) => return (false, format!("{name}: {e}")),
        }
    }
    summarize(&checks)
}

fn low_degree() -> Outcome {
    let mut report = RunReport::new("lowdeg");
    let run = |report: &mut RunReport| -> dfchar::Result<()> {
        report.check(suite::circle_round_trip(7, TRIALS, SEED)?);
        report.extend(suite::monopole_sections(TRIALS, SEED)?);
        suite::gerbe_holonomy(4, TRIALS, SEED, report)
    };
    match run(&mut report) {
        Ok(()) => summarize(&report.checks),
        Err(e) => (false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, &dyn Fn() -> Outcome); 10] = [
        ("golden character tables", &golden_tables),
        ("exact sequences", &exact_sequences),
        ("duality", &duality),
        ("torsion linking", &linking),
        ("spark products", &|| per_fixture(|k| suite::star_identities(k, TRIALS, SEED))),
        ("holonomy well-definedness", &|| per_fixture(|k| suite::holonomy_invariance(k, TRIALS, SEED))),
        ("Hodge identities", &hodge),
        ("Abel–Jacobi", &abel_jacobi),
        ("Morse identity and homology", &morse),
        ("low-degree bridges", &low_degree),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let mark = if ok { "PASS" } else { "FAIL" };
        println!("{mark} {:>2} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
