use serde_json::{json, Value};

use kwclass_core::classes::theorem_report;
use kwclass_core::graphs::{is_bipartite_with, isomorphic_with};
use kwclass_core::spectra::size1_series_brute_with;
use kwclass_core::words::{commutes_brute_force_with, commutes_by_criterion};
use kwclass_core::{size1_series_gf, ClassPartition, Keyword, SubstitutionGraph};

use crate::commands::{dedupe_orbits, Ctx};
use crate::output::{csv, Format};
use crate::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Theorem,
    Bipartite,
    Iso,
    Commute,
    Gf,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Theorem,
        Suite::Bipartite,
        Suite::Iso,
        Suite::Commute,
        Suite::Gf,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Theorem => "theorem",
            Suite::Bipartite => "bipartite",
            Suite::Iso => "iso",
            Suite::Commute => "commute",
            Suite::Gf => "gf",
        }
    }
}

struct Outcome {
    suite: Suite,
    keywords: usize,
    checks: usize,
    failures: Vec<String>,
}

fn keywords(ctx: &Ctx, max_m: usize) -> anyhow::Result<Vec<Keyword>> {
    let mut all = Vec::new();
    for len in 2..=max_m + 1 {
        all.extend(Keyword::all_of_length(len)?);
    }
    Ok(if ctx.dedupe_orbit {
        dedupe_orbits(all)
    } else {
        all
    })
}

fn run_suite(ctx: &Ctx, suite: Suite, max_m: usize, max_n: usize) -> anyhow::Result<Outcome> {
    let keywords = keywords(ctx, max_m)?;
    let settings = &ctx.settings;
    let mut checks = 0;
    let mut failures = Vec::new();
    for a in &keywords {
        match suite {
            Suite::Theorem => {
                let report = theorem_report(a, max_n, settings)?;
                for row in &report.rows {
                    checks += 1;
                    if row.count != row.expected {
                        failures.push(format!(
                            "{a} n={}: {} classes, expected {}",
                            row.n, row.count, row.expected
                        ));
                    }
                }
                // |C_n| = 2|C_{n-1}| - |C_{n-m-1}|
                let c: Vec<_> = report.rows.iter().map(|r| &r.count).collect();
                for n in a.m() + 1..c.len() {
                    checks += 1;
                    if c[n] + c[n - a.m() - 1] != c[n - 1] * 2u32 {
                        failures.push(format!("{a} n={n}: recursion fails"));
                    }
                }
            }
            Suite::Bipartite => {
                for n in 0..=max_n {
                    checks += 1;
                    if !is_bipartite_with(a, n, settings)? {
                        failures.push(format!("{a} n={n}: not bipartite"));
                    }
                }
            }
            Suite::Iso => {
                for n in 0..=max_n {
                    for (label, b) in [("reverse", a.reverse()), ("seminegation", a.seminegate())] {
                        checks += 1;
                        if !isomorphic_with(a, &b, n, settings)? {
                            failures.push(format!("{a} n={n}: {label} {b} not isomorphic"));
                        }
                    }
                    checks += 1;
                    let g = SubstitutionGraph::build(a, n, settings)?;
                    let h = SubstitutionGraph::build(&a.negate(), n, settings)?;
                    if !g.same_adjacency(&h) {
                        failures.push(format!("{a} n={n}: negation changes the graph"));
                    }
                }
            }
            Suite::Commute => {
                for n in a.len() + 1..=max_n {
                    for i in 1..=n - a.m() {
                        for j in i + 1..=n - a.m() {
                            checks += 1;
                            let by_rule = commutes_by_criterion(a, (j - i) as i64)?;
                            let exhaustive = commutes_brute_force_with(a, i, j, n, settings)?;
                            if by_rule != exhaustive {
                                failures.push(format!(
                                    "{a} n={n} i={i} j={j}: criterion {by_rule}, exhaustive {exhaustive}"
                                ));
                            }
                        }
                    }
                }
            }
            Suite::Gf => {
                let gf = size1_series_gf(a, max_n);
                let brute = size1_series_brute_with(a, max_n, settings);
                for n in 0..=max_n {
                    checks += 1;
                    let singletons = ClassPartition::build(a, n, settings)?.histogram().get(1);
                    let (g, b) = (&gf.values()[n], &brute.values()[n]);
                    if g != b || *b != singletons.into() {
                        failures.push(format!(
                            "{a} n={n}: gf {g}, brute {b}, histogram {singletons}"
                        ));
                    }
                }
            }
        }
    }
    Ok(Outcome {
        suite,
        keywords: keywords.len(),
        checks,
        failures,
    })
}

pub fn run(ctx: &Ctx, suites: &[Suite], max_m: usize, max_n: usize) -> anyhow::Result<Report> {
    if max_m < 1 {
        return Err(crate::UsageError("--max-m must be at least 1".into()).into());
    }
    let outcomes = suites
        .iter()
        .map(|&s| run_suite(ctx, s, max_m, max_n))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let failed = outcomes.iter().any(|o| !o.failures.is_empty());
    let status = |o: &Outcome| {
        if o.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        }
    };
    let body = match ctx.format {
        Format::Text => {
            let mut out = String::new();
            for o in &outcomes {
                out.push_str(&format!(
                    "{:<10} keywords={} checks={} failures={} {}\n",
                    o.suite.name(),
                    o.keywords,
                    o.checks,
                    o.failures.len(),
                    status(o)
                ));
                for f in &o.failures {
                    out.push_str(&format!("  {f}\n"));
                }
            }
            out
        }
        Format::Csv => csv(
            &[
                "suite", "max_m", "max_n", "keywords", "checks", "failures", "status",
            ],
            outcomes.iter().map(|o| {
                vec![
                    o.suite.name().to_string(),
                    max_m.to_string(),
                    max_n.to_string(),
                    o.keywords.to_string(),
                    o.checks.to_string(),
                    o.failures.len().to_string(),
                    status(o).to_string(),
                ]
            }),
        ),
        Format::Json => {
            let list: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "suite": o.suite.name(),
                        "max_m": max_m,
                        "max_n": max_n,
                        "keywords": o.keywords,
                        "checks": o.checks,
                        "failures": o.failures,
                        "status": status(o),
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&Value::Array(list)).expect("serializable");
            s.push('\n');
            s
        }
    };
    Ok(Report { body, failed })
}
