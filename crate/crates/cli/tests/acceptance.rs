//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the verdicts print
//! in order and uncaptured.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use positroid::coline::{
    candidate_colines, last_consecutive_sink_pair, positive_coline, Candidate,
};
use positroid::enumerate::{verify, Failure, Suite, VerificationReport, VerifyOptions};
use positroid::fixtures;
use positroid::simplicity::{graph_loops_coloops, graph_parallel_pairs};
use positroid::structure::{components, has_spanning_circuit, is_connected, isolated_blocks};
use positroid::{build_le_graph, positroid, rank, GroundSubset};

const BIN: &str = env!("CARGO_BIN_EXE_positroid");

type Check = Result<String, String>;

fn set(labels: &[usize]) -> GroundSubset {
    labels.iter().copied().collect()
}

fn fixture_path(name: &str) -> String {
    format!("{}/../core/fixtures/{name}.led", env!("CARGO_MANIFEST_DIR"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn show(f: &Failure) -> String {
    let dots: Vec<String> = f
        .diagram
        .dots()
        .iter()
        .map(|(s, h)| format!("{s},{h}"))
        .collect();
    format!(
        "{} [{}]: {}",
        f.diagram.path_string(),
        dots.join(" "),
        f.detail
    )
}

fn no_failures(what: &str, list: &[Failure]) -> Result<(), String> {
    match list.first() {
        None => Ok(()),
        Some(first) => Err(format!("{} {what}, first: {}", list.len(), show(first))),
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!(
            "took {:.1} s, limit {:.0} s",
            elapsed.as_secs_f64(),
            limit.as_secs_f64()
        )
    })
}

fn fig2_bases() -> Check {
    let expected: Vec<GroundSubset> = [
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 5],
        [2, 4, 6],
        [2, 5, 6],
        [2, 5, 7],
        [2, 6, 7],
        [3, 5, 6],
        [3, 5, 7],
        [3, 6, 7],
        [4, 5, 6],
        [4, 5, 7],
        [4, 6, 7],
    ]
    .iter()
    .map(|b| set(b))
    .collect();
    let m = positroid(&fixtures::fig2());
    let mut bases = m.bases().to_vec();
    bases.sort_by(|a, b| a.lex_cmp(*b));
    ensure(bases == expected, || format!("library bases {bases:?}"))?;

    let out = Command::new(BIN)
        .args(["bases", &fixture_path("fig2")])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || "positroid bases failed".into())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let printed: Vec<&str> = text.lines().collect();
    let wanted: Vec<String> = expected.iter().map(|b| b.braced()).collect();
    ensure(printed == wanted, || format!("CLI printed {printed:?}"))?;
    Ok("13 bases from library and CLI".into())
}

fn fig3_loops_coloops() -> Check {
    let d = fixtures::fig3();
    let m = positroid(&d);
    let expected = (set(&[1, 4]), set(&[5]));
    ensure(m.loops_coloops() == expected, || {
        format!("matroid {:?}", m.loops_coloops())
    })?;
    ensure(graph_loops_coloops(&d) == expected, || {
        format!("graph {:?}", graph_loops_coloops(&d))
    })?;
    Ok("loops {1,4}, coloops {5}".into())
}

fn fig4_parallel() -> Check {
    let d = fixtures::fig4();
    let m = positroid(&d);
    let expected = vec![(3, 4), (6, 7)];
    ensure(m.parallel_pairs() == expected, || {
        format!("matroid {:?}", m.parallel_pairs())
    })?;
    ensure(graph_parallel_pairs(&d) == expected, || {
        format!("graph {:?}", graph_parallel_pairs(&d))
    })?;
    Ok("{3,4} and {6,7} from both detectors".into())
}

fn fig7_connectivity() -> Check {
    let d = fixtures::fig7();
    let m = positroid(&d);
    ensure(isolated_blocks(&d).is_connected(), || {
        "diagram has several blocks".into()
    })?;
    ensure(is_connected(&m), || "matroid is disconnected".into())?;
    let r = rank(&build_le_graph(&d), set(&[4, 5, 6, 7]));
    ensure(r == 3 && m.rank_of(set(&[4, 5, 6, 7])) == 3, || {
        format!("rank {{4,5,6,7}} = {r}")
    })?;
    ensure(!has_spanning_circuit(&m), || {
        "found a spanning circuit".into()
    })?;
    Ok("connected, rank {4,5,6,7} = 3, no spanning circuit".into())
}

fn blocks1_decomposition() -> Check {
    let d = fixtures::blocks1();
    let expected = vec![set(&[1, 2, 3, 8, 9]), set(&[4, 5, 6, 7])];
    let blocks = isolated_blocks(&d).blocks;
    ensure(blocks == expected, || format!("blocks {blocks:?}"))?;
    let comps = components(&positroid(&d));
    ensure(comps == expected, || format!("components {comps:?}"))?;
    Ok("{1,2,3,8,9} and {4,5,6,7}".into())
}

fn fig5_candidates() -> Check {
    let d = fixtures::fig5();
    let m = positroid(&d);
    let pair = last_consecutive_sink_pair(&d).map_err(|e| e.to_string())?;
    let (a, b) = candidate_colines(&m, pair, d.sinks()).map_err(|e| e.to_string())?;
    let b = b.ok_or("no candidate B")?;
    ensure(a.elements == set(&[4, 7]), || format!("A = {}", a.elements))?;
    ensure(b.elements == set(&[2, 7]), || format!("B = {}", b.elements))?;

    let ra = m.copoints_on(a.elements).map_err(|e| e.to_string())?;
    let simple: Vec<GroundSubset> = ra.simple().collect();
    let multiple: Vec<GroundSubset> = ra.multiple().collect();
    ensure(simple == vec![set(&[2, 4, 7])], || {
        format!("A simple {simple:?}")
    })?;
    ensure(
        multiple == vec![set(&[1, 4, 7, 8]), set(&[3, 4, 5, 6, 7])],
        || format!("A multiple {multiple:?}"),
    )?;
    ensure(!ra.positive, || "A is positive".into())?;

    let pc = positive_coline(&m, &d).map_err(|e| e.to_string())?;
    ensure(pc.candidate == Candidate::B, || {
        format!("returned {:?}", pc.candidate)
    })?;
    ensure(pc.report.coline.elements == b.elements, || {
        "wrong coline".into()
    })?;
    let census = (pc.report.simple_count(), pc.report.multiple_count());
    ensure(census == (3, 1), || format!("B census {census:?}"))?;
    Ok("A {4,7} 1/2 rejected, B {2,7} 3/1 returned".into())
}

fn run_verify(suites: Vec<Suite>, n: usize) -> Result<(VerificationReport, Duration), String> {
    let start = Instant::now();
    let report = verify(&VerifyOptions::new(suites).with_n(n)).map_err(|e| e.to_string())?;
    Ok((report, start.elapsed()))
}

struct Criterion {
    id: usize,
    name: &'static str,
    outcome: Check,
    elapsed: Duration,
}

fn timed(id: usize, name: &'static str, limit: Duration, f: fn() -> Check) -> Criterion {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let outcome = outcome.and_then(|msg| within(elapsed, limit).map(|_| msg));
    Criterion {
        id,
        name,
        outcome,
        elapsed,
    }
}

fn main() -> ExitCode {
    let second = Duration::from_secs(1);
    let mut results = vec![
        timed(1, "fig2 bases", second, fig2_bases),
        timed(2, "fig3 loops and coloops", second, fig3_loops_coloops),
        timed(3, "fig4 parallel pairs", second, fig4_parallel),
        timed(4, "fig7 connectivity", second, fig7_connectivity),
        timed(5, "blocks1 decomposition", second, blocks1_decomposition),
        timed(6, "fig5 candidates", second, fig5_candidates),
    ];

    // Criteria 7, 8 and 13 share one sweep over n <= 8.
    match run_verify(vec![Suite::Theorem, Suite::Corollary], 8) {
        Ok((report, elapsed)) => {
            let theorem = no_failures("theorem failures", &report.theorem_failures)
                .and_then(|_| no_failures("lift failures", &report.lift_failures))
                .and_then(|_| within(elapsed, Duration::from_secs(600)))
                .map(|_| {
                    format!(
                        "{} simple rank >= 3 positroids, {} needed the full coline search",
                        report.simple_rank3plus_count, report.theorem_search_fallbacks
                    )
                });
            let stats = report.corollary_branch_stats;
            let b8 = report
                .corollary_branch_stats_by_n
                .get(&8)
                .map_or(0, |s| s.b);
            let corollary = no_failures(
                "connected positroids with neither candidate positive",
                &report.corollary_failures,
            )
            .and_then(|_| ensure(b8 > 0, || "no branch B instance at n = 8".into()))
            .map(|_| {
                format!(
                    "branch A {}, branch B {} ({b8} at n = 8), both {}",
                    stats.a, stats.b, stats.both
                )
            });
            let witness = no_failures("witness failures", &report.witness_failures).map(|_| {
                format!(
                    "{} witnesses with |symdiff| = 2",
                    report.simple_rank3plus_count
                )
            });
            results.push(Criterion {
                id: 7,
                name: "positive coline, n <= 8",
                outcome: theorem,
                elapsed,
            });
            results.push(Criterion {
                id: 8,
                name: "sink-pair candidates, n <= 8",
                outcome: corollary,
                elapsed,
            });
            results.push(Criterion {
                id: 13,
                name: "cocircuit witnesses, n <= 8",
                outcome: witness,
                elapsed,
            });
        }
        Err(e) => {
            for (id, name) in [
                (7, "positive coline"),
                (8, "sink-pair candidates"),
                (13, "cocircuit witnesses"),
            ] {
                results.push(Criterion {
                    id,
                    name,
                    outcome: Err(e.clone()),
                    elapsed: Duration::ZERO,
                });
            }
        }
    }

    let sweeps: [(usize, &str, Suite, usize, Option<u64>); 4] = [
        (
            9,
            "block count vs circuits, n <= 7",
            Suite::Lemma,
            7,
            Some(300),
        ),
        (10, "rank oracles agree, n <= 7", Suite::RankOracle, 7, None),
        (11, "matroid axioms, n <= 7", Suite::Axioms, 7, None),
        (12, "duals in catalog, n <= 6", Suite::Duality, 6, None),
    ];
    for (id, name, suite, n, limit) in sweeps {
        let (outcome, elapsed) = match run_verify(vec![suite], n) {
            Ok((report, elapsed)) => {
                let checked = report.diagrams_checked;
                let outcome = match suite {
                    Suite::Lemma => no_failures("mismatches", &report.lemma_mismatches),
                    Suite::RankOracle => no_failures("mismatches", &report.rank_oracle_mismatches),
                    Suite::Axioms => no_failures("violations", &report.axiom_violations),
                    _ => no_failures("misses", &report.duality_misses),
                }
                .and_then(|_| match limit {
                    Some(secs) => within(elapsed, Duration::from_secs(secs)),
                    None => Ok(()),
                })
                .map(|_| format!("{checked} diagrams"));
                (outcome, elapsed)
            }
            Err(e) => (Err(e), Duration::ZERO),
        };
        results.push(Criterion {
            id,
            name,
            outcome,
            elapsed,
        });
    }

    results.sort_by_key(|c| c.id);
    let mut failed = 0;
    for c in &results {
        let (verdict, msg) = match &c.outcome {
            Ok(msg) => ("PASS", msg),
            Err(msg) => {
                failed += 1;
                ("FAIL", msg)
            }
        };
        println!(
            "{verdict} {:>2} {:<34} {:>8.2} s  {msg}",
            c.id,
            c.name,
            c.elapsed.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
