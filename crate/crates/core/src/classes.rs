//! The quotient `{0,1}^n / ~a` computed with union-find over all `2^n` word ids.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::sequences::PartialSums;
use crate::settings::Settings;
use crate::union_find::{ConcurrentUnionFind, UnionFind};
use crate::words::{Keyword, Word};

/// Below this length the sequential engine is always used.
const PARALLEL_THRESHOLD: usize = 12;

/// Equivalence classes of `{0,1}^n` under a keyword. The representative of a class is
/// its member with the smallest bitmask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    keyword: Keyword,
    n: usize,
    /// representative id of every word id
    labels: Vec<u32>,
    /// class size, indexed by representative id; zero elsewhere
    sizes: Vec<u32>,
    class_count: usize,
}

impl ClassPartition {
    pub fn build(keyword: &Keyword, n: usize, settings: &Settings) -> Result<Self> {
        settings.check_n(n)?;
        let rule = keyword.rule();
        let len = 1usize << n;

        let labels = if settings.workers <= 1 || n < PARALLEL_THRESHOLD {
            let mut uf = UnionFind::new(len);
            for u in 0..len as u64 {
                for v in rule.neighbors(u, n) {
                    if v > u {
                        uf.union(u as u32, v as u32);
                    }
                }
            }
            let mut labels = uf.into_roots();
            // relabel each root by the minimum member of its set
            let mut min_of_root = vec![u32::MAX; len];
            for (u, &r) in labels.iter().enumerate() {
                let slot = &mut min_of_root[r as usize];
                *slot = (*slot).min(u as u32);
            }
            for r in labels.iter_mut() {
                *r = min_of_root[*r as usize];
            }
            labels
        } else {
            let uf = ConcurrentUnionFind::new(len);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(settings.workers)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            pool.install(|| {
                (0..len)
                    .into_par_iter()
                    .with_min_len(1 << 10)
                    .for_each(|u| {
                        let u = u as u64;
                        for v in rule.neighbors(u, n) {
                            if v > u {
                                uf.union(u as u32, v as u32);
                            }
                        }
                    })
            });
            uf.into_roots()
        };

        let mut sizes = vec![0u32; len];
        for &l in &labels {
            sizes[l as usize] += 1;
        }
        let class_count = sizes.iter().filter(|&&s| s > 0).count();
        Ok(Self {
            keyword: *keyword,
            n,
            labels,
            sizes,
            class_count,
        })
    }

    pub fn keyword(&self) -> &Keyword {
        &self.keyword
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    fn id(&self, u: &Word) -> Result<usize> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch {
                left: u.len(),
                right: self.n,
            });
        }
        Ok(u.bits() as usize)
    }

    fn word(&self, id: u32) -> Word {
        Word::from_raw(self.n, id as u64)
    }

    pub fn representative(&self, u: &Word) -> Result<Word> {
        Ok(self.word(self.labels[self.id(u)?]))
    }

    pub fn class_size(&self, u: &Word) -> Result<usize> {
        let rep = self.labels[self.id(u)?];
        Ok(self.sizes[rep as usize] as usize)
    }

    pub fn same_class(&self, u: &Word, v: &Word) -> Result<bool> {
        Ok(self.labels[self.id(u)?] == self.labels[self.id(v)?])
    }

    /// Members of the class of `u` in increasing bitmask order.
    pub fn members(&self, u: &Word) -> Result<Vec<Word>> {
        let rep = self.labels[self.id(u)?];
        Ok(self
            .labels
            .iter()
            .enumerate()
            .skip(rep as usize)
            .filter(|(_, &l)| l == rep)
            .map(|(v, _)| self.word(v as u32))
            .collect())
    }

    /// Representative id of every word id.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// `(representative, size)` for every class, by increasing representative.
    pub fn classes(&self) -> impl Iterator<Item = (Word, usize)> + '_ {
        self.sizes
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .map(|(r, &s)| (self.word(r as u32), s as usize))
    }

    /// Word ids grouped by class, classes ordered by representative.
    pub fn member_ids(&self) -> Vec<Vec<u32>> {
        let mut slot = vec![u32::MAX; self.labels.len()];
        let mut groups: Vec<Vec<u32>> = Vec::with_capacity(self.class_count);
        for (r, &s) in self.sizes.iter().enumerate() {
            if s > 0 {
                slot[r] = groups.len() as u32;
                groups.push(Vec::with_capacity(s as usize));
            }
        }
        for (u, &l) in self.labels.iter().enumerate() {
            groups[slot[l as usize] as usize].push(u as u32);
        }
        groups
    }

    pub fn histogram(&self) -> SizeHistogram {
        let mut counts = BTreeMap::new();
        for &s in self.sizes.iter().filter(|&&s| s > 0) {
            *counts.entry(s as usize).or_insert(0u64) += 1;
        }
        SizeHistogram {
            keyword: self.keyword,
            n: self.n,
            counts,
        }
    }
}

/// Number of classes of each size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeHistogram {
    keyword: Keyword,
    n: usize,
    counts: BTreeMap<usize, u64>,
}

impl SizeHistogram {
    pub fn keyword(&self) -> &Keyword {
        &self.keyword
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    /// Number of classes of size `s`.
    pub fn get(&self, s: usize) -> u64 {
        self.counts.get(&s).copied().unwrap_or(0)
    }

    pub fn max_size(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn total_classes(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn total_words(&self) -> u64 {
        self.counts.iter().map(|(&s, &c)| s as u64 * c).sum()
    }

    /// `s,count` rows in ascending `s`, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,count\n");
        for (s, c) in &self.counts {
            out.push_str(&format!("{s},{c}\n"));
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let histogram: Map<String, Value> = self
            .counts
            .iter()
            .map(|(s, c)| (s.to_string(), json!(c)))
            .collect();
        json!({
            "keyword": self.keyword.to_string(),
            "n": self.n,
            "histogram": histogram,
            "total": self.total_classes(),
        })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }
}

impl fmt::Display for SizeHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (s, c)) in self.counts.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}:{c}")?;
        }
        f.write_str("}")
    }
}

pub fn partition(a: &Keyword, n: usize) -> Result<ClassPartition> {
    ClassPartition::build(a, n, &Settings::default())
}

pub fn count_classes(a: &Keyword, n: usize) -> Result<usize> {
    count_classes_with(a, n, &Settings::default())
}

pub fn count_classes_with(a: &Keyword, n: usize, settings: &Settings) -> Result<usize> {
    Ok(ClassPartition::build(a, n, settings)?.class_count())
}

pub fn histogram(a: &Keyword, n: usize) -> Result<SizeHistogram> {
    histogram_with(a, n, &Settings::default())
}

pub fn histogram_with(a: &Keyword, n: usize, settings: &Settings) -> Result<SizeHistogram> {
    Ok(ClassPartition::build(a, n, settings)?.histogram())
}

/// The class of `u`, found by breadth-first search over single substitutions.
pub fn class_of(a: &Keyword, u: &Word) -> Result<Vec<Word>> {
    class_of_with(a, u, &Settings::default())
}

pub fn class_of_with(a: &Keyword, u: &Word, settings: &Settings) -> Result<Vec<Word>> {
    settings.check_n(u.len())?;
    let n = u.len();
    let rule = a.rule();
    let mut seen = HashSet::from([u.bits()]);
    let mut queue = VecDeque::from([u.bits()]);
    while let Some(x) = queue.pop_front() {
        for y in rule.neighbors(x, n) {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut members: Vec<Word> = seen.into_iter().map(|b| Word::from_raw(n, b)).collect();
    members.sort();
    Ok(members)
}

/// Per-length comparison of the class count against the partial sum `S_n^(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremRow {
    pub n: usize,
    pub count: BigUint,
    pub expected: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub keyword: Keyword,
    pub rows: Vec<TheoremRow>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.count == r.expected)
    }

    pub fn first_mismatch(&self) -> Option<&TheoremRow> {
        self.rows.iter().find(|r| r.count != r.expected)
    }
}

/// Counts classes for `n = 0..=n_max` and compares with `F_0 + ... + F_n`.
///
/// The report is returned even on mismatch; use [`TheoremReport::passed`] or
/// [`verify_theorem`] for a hard failure.
pub fn theorem_report(a: &Keyword, n_max: usize, settings: &Settings) -> Result<TheoremReport> {
    settings.check_n(n_max)?;
    let sums = PartialSums::up_to(a.m(), n_max)?;
    let rows = (0..=n_max)
        .map(|n| {
            let count = count_classes_with(a, n, settings)?;
            Ok(TheoremRow {
                n,
                count: BigUint::from(count),
                expected: sums.sums()[n].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoremReport { keyword: *a, rows })
}

pub fn verify_theorem(a: &Keyword, n_max: usize) -> Result<TheoremReport> {
    verify_theorem_with(a, n_max, &Settings::default())
}

pub fn verify_theorem_with(
    a: &Keyword,
    n_max: usize,
    settings: &Settings,
) -> Result<TheoremReport> {
    let report = theorem_report(a, n_max, settings)?;
    if let Some(row) = report.first_mismatch() {
        return Err(Error::VerificationFailure {
            n: row.n,
            got: row.count.to_string(),
            expected: row.expected.to_string(),
        });
    }
    Ok(report)
}
