use std::collections::BTreeSet;

use anyhow::bail;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use kwclass_core::classes::{class_of_with, histogram_with};
use kwclass_core::graphs::{distance_with, isomorphic_with};
use kwclass_core::spectra::{size1_series_brute_with, size1_series_gf, size1_series_transfer};
use kwclass_core::words::{commutes_brute_force_with, commutes_by_criterion};
use kwclass_core::{
    count_representations, fingerprint, keyword_orbit, max_representations, same_size1_counts,
    zeckendorf, ClassPartition, FibSequence, Keyword, PartialSums, Settings, SizeHistogram,
    SubstitutionGraph, Word,
};

use crate::output::{csv, group_digits, Format};
use crate::{Report, SeriesMethod, UsageError};

pub struct Ctx {
    pub format: Format,
    pub settings: Settings,
    pub dedupe_orbit: bool,
}

impl Ctx {
    pub fn keywords(&self, raw: &[String]) -> anyhow::Result<Vec<Keyword>> {
        let parsed = raw
            .iter()
            .map(|s| s.parse::<Keyword>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(if self.dedupe_orbit {
            dedupe_orbits(parsed)
        } else {
            parsed
        })
    }

    fn single_keyword(&self, raw: &[String]) -> anyhow::Result<Keyword> {
        match raw {
            [one] => Ok(one.parse()?),
            _ => Err(UsageError(format!("expected exactly one keyword, got {}", raw.len())).into()),
        }
    }
}

/// Keeps the first keyword seen from each orbit.
pub fn dedupe_orbits(keywords: impl IntoIterator<Item = Keyword>) -> Vec<Keyword> {
    let mut seen = BTreeSet::new();
    keywords
        .into_iter()
        .filter(|k| {
            let fresh = !seen.contains(k);
            if fresh {
                seen.extend(keyword_orbit(k));
            }
            fresh
        })
        .collect()
}

/// JSON number when it fits in a `u64`, decimal string otherwise.
pub fn big_json(x: &BigUint) -> Value {
    x.to_u64()
        .map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn count(ctx: &Ctx, raw: &[String], lengths: &[usize]) -> anyhow::Result<Report> {
    let keywords = ctx.keywords(raw)?;
    let mut rows = Vec::new();
    for a in &keywords {
        let sums = PartialSums::up_to(a.m(), *lengths.iter().max().unwrap_or(&0))?;
        for &n in lengths {
            let classes = ClassPartition::build(a, n, &ctx.settings)?.class_count();
            rows.push((*a, n, BigUint::from(classes), sums.sums()[n].clone()));
        }
    }
    let failed = rows.iter().any(|(_, _, got, want)| got != want);
    let body = match ctx.format {
        Format::Text => rows
            .iter()
            .map(|(a, n, got, want)| {
                let mark = if got == want { "" } else { "  MISMATCH" };
                format!("{a} n={n}: {} classes (expected {}){mark}\n", group_digits(got), group_digits(want))
            })
            .collect(),
        Format::Csv => csv(
            &["keyword", "n", "classes", "expected"],
            rows.iter().map(|(a, n, got, want)| vec![a.to_string(), n.to_string(), got.to_string(), want.to_string()]),
        ),
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(a, n, got, want)| {
                    json!({"keyword": a.to_string(), "n": n, "classes": big_json(got), "expected": big_json(want)})
                })
                .collect(),
        )),
    };
    Ok(Report { body, failed })
}

fn histograms(
    ctx: &Ctx,
    keywords: &[Keyword],
    lengths: &[usize],
) -> anyhow::Result<Vec<SizeHistogram>> {
    let mut out = Vec::new();
    for &n in lengths {
        for a in keywords {
            out.push(histogram_with(a, n, &ctx.settings)?);
        }
    }
    Ok(out)
}

/// Side-by-side columns per keyword, one block per length.
fn render_histograms(format: Format, hists: &[SizeHistogram]) -> String {
    match format {
        Format::Csv => csv(
            &["keyword", "n", "s", "count"],
            hists.iter().flat_map(|h| {
                h.counts().iter().map(|(s, c)| {
                    vec![
                        h.keyword().to_string(),
                        h.n().to_string(),
                        s.to_string(),
                        c.to_string(),
                    ]
                })
            }),
        ),
        Format::Json => pretty(&Value::Array(
            hists.iter().map(SizeHistogram::to_json_value).collect(),
        )),
        Format::Text => {
            let mut out = String::new();
            let mut lengths: Vec<usize> = hists.iter().map(SizeHistogram::n).collect();
            lengths.dedup();
            for (block, n) in lengths.into_iter().enumerate() {
                let group: Vec<&SizeHistogram> = hists.iter().filter(|h| h.n() == n).collect();
                let max_s = group.iter().map(|h| h.max_size()).max().unwrap_or(0);
                let mut lines: Vec<(String, Vec<String>)> = vec![(
                    format!("n = {n}"),
                    group.iter().map(|h| format!("a={}", h.keyword())).collect(),
                )];
                for s in 1..=max_s {
                    lines.push((
                        format!("s = {s}"),
                        group.iter().map(|h| group_digits(h.get(s))).collect(),
                    ));
                }
                lines.push((
                    "total".into(),
                    group
                        .iter()
                        .map(|h| group_digits(h.total_classes()))
                        .collect(),
                ));
                let label_w = lines.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
                let cell_w = lines
                    .iter()
                    .flat_map(|(_, c)| c.iter().map(String::len))
                    .max()
                    .unwrap_or(0);
                if block > 0 {
                    out.push('\n');
                }
                for (label, cells) in lines {
                    out.push_str(&format!("{label:<label_w$}"));
                    for c in cells {
                        out.push_str(&format!("  {c:>cell_w$}"));
                    }
                    out.push('\n');
                }
            }
            out
        }
    }
}

pub fn histogram(ctx: &Ctx, raw: &[String], lengths: &[usize]) -> anyhow::Result<Report> {
    let keywords = ctx.keywords(raw)?;
    Ok(Report::ok(render_histograms(
        ctx.format,
        &histograms(ctx, &keywords, lengths)?,
    )))
}

/// Keyword pairs and lengths of the reference tables.
pub fn table_layout(number: u8) -> (&'static [&'static str], &'static [usize]) {
    match number {
        1 => (&["110", "101"], &[4, 5, 6]),
        2 => (&["10001", "01001"], &[11, 12]),
        _ => (&["10000", "01000"], &[17]),
    }
}

pub fn table(ctx: &Ctx, number: u8) -> anyhow::Result<Report> {
    let (raw, lengths) = table_layout(number);
    let keywords = raw
        .iter()
        .map(|s| s.parse())
        .collect::<Result<Vec<Keyword>, _>>()?;
    Ok(Report::ok(render_histograms(
        ctx.format,
        &histograms(ctx, &keywords, lengths)?,
    )))
}

fn word_list(format: Format, words: &[Word]) -> String {
    match format {
        Format::Text => words.iter().map(|w| format!("{w}\n")).collect(),
        Format::Csv => csv(&["word"], words.iter().map(|w| vec![w.to_string()])),
        Format::Json => pretty(&json!(words
            .iter()
            .map(Word::to_string)
            .collect::<Vec<_>>())),
    }
}

pub fn classes(
    ctx: &Ctx,
    raw: &[String],
    n: Option<usize>,
    word: Option<&str>,
    dot: bool,
) -> anyhow::Result<Report> {
    let a = ctx.single_keyword(raw)?;
    if let Some(word) = word {
        let u: Word = word.parse()?;
        if n.is_some_and(|n| n != u.len()) {
            bail!(UsageError(format!(
                "-n {} disagrees with the length of {u}",
                n.unwrap()
            )));
        }
        let members = class_of_with(&a, &u, &ctx.settings)?;
        if dot {
            let graph = SubstitutionGraph::build(&a, u.len(), &ctx.settings)?;
            let ids: Vec<u32> = members.iter().map(|w| w.bits() as u32).collect();
            return Ok(Report::ok(graph.to_dot(&ids)));
        }
        return Ok(Report::ok(word_list(ctx.format, &members)));
    }
    let Some(n) = n else {
        bail!(UsageError("classes needs -n or --word".into()));
    };
    let partition = ClassPartition::build(&a, n, &ctx.settings)?;
    let rows: Vec<(Word, usize)> = partition.classes().collect();
    let body = match ctx.format {
        Format::Text => rows.iter().map(|(w, s)| format!("{w} {s}\n")).collect(),
        Format::Csv => csv(
            &["representative", "size"],
            rows.iter().map(|(w, s)| vec![w.to_string(), s.to_string()]),
        ),
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(w, s)| json!({"representative": w.to_string(), "size": s}))
                .collect(),
        )),
    };
    Ok(Report::ok(body))
}

pub fn distance(ctx: &Ctx, raw: &[String], u: &str, v: &str) -> anyhow::Result<Report> {
    let a = ctx.single_keyword(raw)?;
    let (u, v): (Word, Word) = (u.parse()?, v.parse()?);
    let d = distance_with(&a, &u, &v, &ctx.settings)?;
    let shown = d.map_or_else(|| "none".to_string(), |d| d.to_string());
    let body = match ctx.format {
        Format::Text => format!("{shown}\n"),
        Format::Csv => csv(
            &["keyword", "u", "v", "distance"],
            [vec![a.to_string(), u.to_string(), v.to_string(), shown]],
        ),
        Format::Json => pretty(
            &json!({"keyword": a.to_string(), "u": u.to_string(), "v": v.to_string(), "distance": d}),
        ),
    };
    Ok(Report::ok(body))
}

pub fn series(ctx: &Ctx, raw: &[String], n: usize, method: SeriesMethod) -> anyhow::Result<Report> {
    let a = ctx.single_keyword(raw)?;
    let coeffs = match method {
        SeriesMethod::Gf => size1_series_gf(&a, n),
        SeriesMethod::Transfer => size1_series_transfer(&a, n),
        SeriesMethod::Brute => size1_series_brute_with(&a, n, &ctx.settings),
    };
    let body = match ctx.format {
        Format::Text => coeffs
            .values()
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{k} {c}\n"))
            .collect(),
        Format::Csv => coeffs.to_csv(),
        Format::Json => {
            let mut s = coeffs.to_json();
            s.push('\n');
            s
        }
    };
    Ok(Report::ok(body))
}

pub fn fingerprint_cmd(ctx: &Ctx, raw: &[String]) -> anyhow::Result<Report> {
    let keywords = ctx.keywords(raw)?;
    let agree = match keywords.as_slice() {
        [a, b] => Some(same_size1_counts(a, b)?),
        _ => None,
    };
    let body = match ctx.format {
        Format::Text => {
            let mut out: String = keywords
                .iter()
                .map(|a| format!("{a} {}\n", fingerprint(a)))
                .collect();
            if let Some(agree) = agree {
                out.push_str(&format!(
                    "same singleton counts: {}\n",
                    if agree { "yes" } else { "no" }
                ));
            }
            out
        }
        Format::Csv => csv(
            &["keyword", "overlaps"],
            keywords.iter().map(|a| {
                let list: Vec<String> = fingerprint(a)
                    .overlaps()
                    .iter()
                    .map(usize::to_string)
                    .collect();
                vec![a.to_string(), list.join(" ")]
            }),
        ),
        Format::Json => {
            let list: Vec<Value> = keywords
                .iter()
                .map(|a| json!({"keyword": a.to_string(), "overlaps": fingerprint(a).overlaps()}))
                .collect();
            let mut obj = json!({"keywords": list});
            if let Some(agree) = agree {
                obj["same_size1_counts"] = json!(agree);
            }
            pretty(&obj)
        }
    };
    Ok(Report::ok(body))
}

pub fn commute(
    ctx: &Ctx,
    raw: &[String],
    delta: Option<i64>,
    brute: Option<(usize, usize, usize)>,
) -> anyhow::Result<Report> {
    let keywords = ctx.keywords(raw)?;
    // (keyword, delta, by criterion, exhaustive if requested)
    let mut rows: Vec<(Keyword, i64, bool, Option<bool>)> = Vec::new();
    for a in &keywords {
        match (delta, brute) {
            (Some(_), Some(_)) => bail!(UsageError(
                "give either --delta or -i/-j/-n, not both".into()
            )),
            (Some(d), None) => rows.push((*a, d, commutes_by_criterion(a, d)?, None)),
            (None, Some((i, j, n))) => {
                let exhaustive = commutes_brute_force_with(a, i, j, n, &ctx.settings)?;
                let d = j as i64 - i as i64;
                rows.push((*a, d, commutes_by_criterion(a, d)?, Some(exhaustive)));
            }
            (None, None) => bail!(UsageError("commute needs --delta or -i/-j/-n".into())),
        }
    }
    let failed = rows.iter().any(|&(_, _, c, b)| b.is_some_and(|b| b != c));
    let body = match ctx.format {
        Format::Text => rows
            .iter()
            .map(|&(a, d, c, b)| match b {
                None => format!("{a} delta={d}: {}\n", if c { "commute" } else { "do not commute" }),
                Some(b) => format!(
                    "{a} delta={d}: criterion={c} exhaustive={b}{}\n",
                    if b == c { "" } else { "  MISMATCH" }
                ),
            })
            .collect(),
        Format::Csv => csv(
            &["keyword", "delta", "criterion", "exhaustive"],
            rows.iter().map(|&(a, d, c, b)| {
                vec![a.to_string(), d.to_string(), c.to_string(), b.map_or_else(String::new, |b| b.to_string())]
            }),
        ),
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|&(a, d, c, b)| json!({"keyword": a.to_string(), "delta": d, "criterion": c, "exhaustive": b}))
                .collect(),
        )),
    };
    Ok(Report { body, failed })
}

pub fn orbit(ctx: &Ctx, raw: &[String]) -> anyhow::Result<Report> {
    let keywords = ctx.keywords(raw)?;
    let orbits: Vec<(Keyword, Vec<String>)> = keywords
        .iter()
        .map(|a| {
            (
                *a,
                keyword_orbit(a).iter().map(Keyword::to_string).collect(),
            )
        })
        .collect();
    let body = match ctx.format {
        Format::Text => orbits
            .iter()
            .map(|(a, o)| format!("{a}: {}\n", o.join(" ")))
            .collect(),
        Format::Csv => csv(
            &["keyword", "member"],
            orbits
                .iter()
                .flat_map(|(a, o)| o.iter().map(move |m| vec![a.to_string(), m.clone()])),
        ),
        Format::Json => pretty(&Value::Array(
            orbits
                .iter()
                .map(|(a, o)| json!({"keyword": a.to_string(), "orbit": o}))
                .collect(),
        )),
    };
    Ok(Report::ok(body))
}

pub fn iso(ctx: &Ctx, raw: &[String], lengths: &[usize]) -> anyhow::Result<Report> {
    let [a, b] = raw else {
        bail!(UsageError(format!(
            "iso needs exactly two keywords, got {}",
            raw.len()
        )));
    };
    let (a, b): (Keyword, Keyword) = (a.parse()?, b.parse()?);
    let rows = lengths
        .iter()
        .map(|&n| Ok((n, isomorphic_with(&a, &b, n, &ctx.settings)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let body = match ctx.format {
        Format::Text => rows
            .iter()
            .map(|(n, iso)| format!("{a} {b} n={n}: {}\n", if *iso { "isomorphic" } else { "not isomorphic" }))
            .collect(),
        Format::Csv => csv(
            &["a", "b", "n", "isomorphic"],
            rows.iter().map(|(n, iso)| vec![a.to_string(), b.to_string(), n.to_string(), iso.to_string()]),
        ),
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(n, iso)| json!({"a": a.to_string(), "b": b.to_string(), "n": n, "isomorphic": iso}))
                .collect(),
        )),
    };
    Ok(Report::ok(body))
}

fn parse_big(raw: &str) -> anyhow::Result<BigUint> {
    raw.parse()
        .map_err(|_| UsageError(format!("not a non-negative integer: {raw:?}")).into())
}

pub fn zeck(ctx: &Ctx, raw: &str) -> anyhow::Result<Report> {
    let n = parse_big(raw)?;
    let rep = zeckendorf(&n);
    let body = match ctx.format {
        Format::Text => {
            let parts: Vec<String> = rep.terms().iter().map(|(_, v)| v.to_string()).collect();
            let sum = if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            };
            format!("{n} = {sum}\nindices {:?}\n", rep.indices())
        }
        Format::Csv => csv(
            &["index", "value"],
            rep.terms()
                .iter()
                .map(|(i, v)| vec![i.to_string(), v.to_string()]),
        ),
        Format::Json => pretty(&json!({
            "n": big_json(&n),
            "terms": rep.terms().iter().map(|(i, v)| json!([i, big_json(v)])).collect::<Vec<_>>(),
        })),
    };
    Ok(Report::ok(body))
}

pub fn reps(ctx: &Ctx, m: usize, raw: &str, max_index: Option<usize>) -> anyhow::Result<Report> {
    let n = parse_big(raw)?;
    let max_index = match max_index {
        Some(k) => k,
        None => {
            // every term that could appear in a sum equal to n
            let mut fibs = FibSequence::new(m)?;
            let mut k = 1;
            while fibs.get(k + 1) <= &n {
                k += 1;
            }
            k
        }
    };
    let count = count_representations(m, &n, max_index)?;
    let body = match ctx.format {
        Format::Text => format!("{}\n", group_digits(&count)),
        Format::Csv => csv(
            &["m", "n", "max_index", "count"],
            [vec![
                m.to_string(),
                n.to_string(),
                max_index.to_string(),
                count.to_string(),
            ]],
        ),
        Format::Json => pretty(
            &json!({"m": m, "n": big_json(&n), "max_index": max_index, "count": big_json(&count)}),
        ),
    };
    Ok(Report::ok(body))
}

pub fn maxsize(ctx: &Ctx, m: usize, lengths: &[usize]) -> anyhow::Result<Report> {
    let rows = lengths
        .iter()
        .map(|&n| Ok((n, max_representations(m, n)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let body = match ctx.format {
        Format::Text => rows
            .iter()
            .map(|(n, v)| format!("n={n}: {}\n", group_digits(v)))
            .collect(),
        Format::Csv => csv(
            &["m", "n", "max"],
            rows.iter()
                .map(|(n, v)| vec![m.to_string(), n.to_string(), v.to_string()]),
        ),
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(n, v)| json!({"m": m, "n": n, "max": big_json(v)}))
                .collect(),
        )),
    };
    Ok(Report::ok(body))
}
