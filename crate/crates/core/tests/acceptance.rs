//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use sharpquad::verify::{self, Row, Suite, DEFAULT_SEED, INEQUALITY_CASES};

struct Outcome {
    pass: bool,
    note: String,
}

fn rows_of(rows: &[Row], criterion: u8) -> Vec<&Row> {
    rows.iter().filter(|r| r.criterion == criterion).collect()
}

/// Worst value per check, in the direction that matters for it.
fn summary(rows: &[&Row]) -> String {
    let mut worst: BTreeMap<&str, (f64, &str)> = BTreeMap::new();
    for r in rows {
        let e = worst
            .entry(r.check.as_str())
            .or_insert((r.value, r.comparison.as_str()));
        let better = if r.comparison == "<" { r.value > e.0 } else { r.value < e.0 };
        if better || r.value.is_nan() {
            e.0 = r.value;
        }
    }
    worst
        .iter()
        .map(|(k, (v, cmp))| format!("{k} {v:.2e} ({cmp})"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn judge(rows: &[&Row], structural: Result<(), String>) -> Outcome {
    let failing: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
    let mut note = format!("{} rows; {}", rows.len(), summary(rows));
    if let Some(f) = failing.first() {
        note.push_str(&format!(
            "; first failure {} case {} value {:e} {:?}",
            f.check, f.case, f.value, f.details
        ));
    }
    if let Err(e) = &structural {
        note.push_str(&format!("; {e}"));
    }
    Outcome {
        pass: !rows.is_empty() && failing.is_empty() && structural.is_ok(),
        note,
    }
}

fn count(rows: &[&Row], check: &str) -> usize {
    rows.iter().filter(|r| r.check == check).count()
}

fn expect(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn main() -> ExitCode {
    let seed = DEFAULT_SEED;
    let mut all = Vec::new();
    let mut exactness_time = 0.0;
    for suite in Suite::ALL {
        let start = Instant::now();
        all.extend(verify::run_suite(suite, seed));
        if suite == Suite::Exactness {
            exactness_time = start.elapsed().as_secs_f64();
        }
    }

    let mut outcomes: Vec<(u8, &str, Outcome)> = Vec::new();

    let c1 = rows_of(&all, 1);
    outcomes.push((
        1,
        "circle integral rule exact against the oracle",
        judge(
            &c1,
            expect(count(&c1, "eq3-vs-oracle") == 50, "expected 50 cases")
                .and(expect(exactness_time < 30.0, &format!("runtime {exactness_time:.1} s exceeds 30 s"))),
        ),
    ));

    let c2 = rows_of(&all, 2);
    let boundary = c2
        .iter()
        .filter(|r| {
            let s = r.details.get("s").and_then(|v| v.as_u64()).unwrap_or(0);
            let sum = r.details.get("mult0_plus_multinf").and_then(|v| v.as_u64()).unwrap_or(0);
            s > 0 && sum == 2 * s - 1
        })
        .count();
    let max_m = c2.iter().filter_map(|r| r.details.get("m").and_then(|v| v.as_u64())).max().unwrap_or(0);
    outcomes.push((
        2,
        "circle L2 and L2m rules exact against the oracle",
        judge(
            &c2,
            expect(count(&c2, "eq4-vs-oracle") > 0 && count(&c2, "eq6-vs-oracle") > 0, "both rules covered")
                .and(expect(boundary > 0, "no boundary case"))
                .and(expect(max_m == 3, "m = 3 not covered")),
        ),
    ));

    let c3 = rows_of(&all, 3);
    outcomes.push((
        3,
        "rules independent of phi over 25 values",
        judge(&c3, expect(count(&c3, "circle-phi-spread") == 100, "expected every case of criteria 1 and 2")),
    ));

    let c4 = rows_of(&all, 4);
    outcomes.push((4, "weight-sum and Laurent annihilation identities", judge(&c4, expect(c4.len() == 400, "expected 200 configurations"))));

    let c5 = rows_of(&all, 5);
    outcomes.push((
        5,
        "four-abscissa segment example against the oracle, s = 1..6",
        judge(&c5, expect(count(&c5, "segment-example-vs-oracle") == 6, "expected s = 1..6")),
    ));

    let c6 = rows_of(&all, 6);
    outcomes.push((
        6,
        "six-node half-plane example against the oracle",
        judge(&c6, expect(count(&c6, "halfplane-example-vs-oracle") == 3, "expected 3 functions")),
    ));

    let c7 = rows_of(&all, 7);
    outcomes.push((
        7,
        "Gauss-Chebyshev nodes and moments, s <= 8",
        judge(&c7, expect(count(&c7, "gauss-chebyshev-moments") == 8, "expected s = 1..8")),
    ));

    let c8 = rows_of(&all, 8);
    outcomes.push((
        8,
        "closed-form norms of mu and of simple partial fractions",
        judge(
            &c8,
            expect(count(&c8, "mu-l2-closed-vs-oracle") == 24 && count(&c8, "spf-l2-closed-vs-oracle") == 24, "expected n = 1..6")
                .and(expect(count(&c8, "eq5-rule-vs-closed") > 0, "self-consistency missing")),
        ),
    ));

    let c9 = rows_of(&all, 9);
    outcomes.push((
        9,
        "sharpness: extremal functions and equality cases",
        judge(
            &c9,
            expect(count(&c9, "eq11-extremal-ratio") == 24, "expected n <= 4, s <= 3")
                .and(expect(count(&c9, "eq32-chebyshev-u") == 8, "expected s = 1..8")),
        ),
    ));

    let c10 = rows_of(&all, 10);
    let names = [
        "eq11", "eq13", "eq27", "eq28", "eq29", "eq30", "eq31", "eq35-rational", "eq35-weight", "eq35-pointwise",
        "eq37", "eq40-quadratic", "eq40-log", "eq41-pointwise", "eq41",
    ];
    let short: Vec<_> = names
        .iter()
        .filter(|n| count(&c10, n) != INEQUALITY_CASES as usize)
        .collect();
    outcomes.push((
        10,
        "inequalities hold on 200 random inputs each",
        judge(&c10, expect(short.is_empty(), &format!("missing cases for {short:?}"))),
    ));

    let c11 = rows_of(&all, 11);
    outcomes.push((
        11,
        "negative controls: one excess multiplicity breaks exactness",
        judge(&c11, expect(count(&c11, "rule-oracle-gap") == 20, "expected 20 configurations")),
    ));

    let c12 = rows_of(&all, 12);
    outcomes.push((
        12,
        "simple partial fraction identities agree three ways",
        judge(&c12, expect(count(&c12, "spf-three-way") >= 5, "expected n = 1..5")),
    ));

    let mut ok = true;
    for (n, title, o) in &outcomes {
        println!("{} criterion {n:>2}: {title} [{}]", if o.pass { "PASS" } else { "FAIL" }, o.note);
        ok &= o.pass;
    }
    println!("exactness suite runtime {exactness_time:.2} s");
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
