//! Acceptance criteria, one PASS/FAIL line each.

use std::process::{Command, ExitCode};
use std::time::Instant;

use bohrspec::verify::{self, Check};

fn determinism() -> Check {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_bohrspec"))
            .args(["verify", "--suite", "all"])
            .env("BOHRSPEC_THREADS", threads)
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run("1"), run("4"));
    let passed = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    Check {
        name: "determinism across thread counts".into(),
        passed,
        detail: format!(
            "exit {:?}/{:?}, {} and {} bytes, {}",
            a.status.code(),
            b.status.code(),
            a.stdout.len(),
            b.stdout.len(),
            if a.stdout == b.stdout { "identical" } else { "different" }
        ),
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, fn() -> Check)> = vec![
        (1, verify::axiom_audit),
        (2, verify::boolean_identification),
        (3, verify::gelfand_round_trip),
        (4, verify::regular_rounded_small_posets),
        (5, verify::two_context_example),
        (6, verify::bohr_three),
        (7, verify::geometricity),
        (8, verify::opfibration),
        (9, || verify::shrink_lemmas(0, 100)),
        (10, verify::aqft_equivalence),
        (11, determinism),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        let start = Instant::now();
        let c = f();
        let secs = start.elapsed().as_secs_f64();
        if !c.passed {
            failed += 1;
        }
        println!("{} criterion {n:>2} {}: {} ({secs:.2}s)", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
