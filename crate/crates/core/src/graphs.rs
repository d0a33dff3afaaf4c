//! The substitution graph on `{0,1}^n`: an edge joins `u` and `v` when one simple map
//! takes `u` to `v != u`. Its connected components are exactly the equivalence classes.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::canon::{canonical_form, Certificate};
use crate::classes::ClassPartition;
use crate::error::{Error, Result};
use crate::settings::Settings;
use crate::words::{Keyword, Word};

const BLOCK: usize = 1 << 12;

/// Adjacency of the substitution graph in compressed sparse row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionGraph {
    keyword: Keyword,
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl SubstitutionGraph {
    pub fn build(keyword: &Keyword, n: usize, settings: &Settings) -> Result<Self> {
        settings.check_graph_n(n)?;
        let rule = keyword.rule();
        let len = 1usize << n;
        let blocks: Vec<(Vec<u32>, Vec<u32>)> = (0..len.div_ceil(BLOCK))
            .into_par_iter()
            .map(|b| {
                let mut degrees = Vec::with_capacity(BLOCK);
                let mut targets = Vec::new();
                for u in (b * BLOCK..((b + 1) * BLOCK).min(len)).map(|u| u as u64) {
                    let before = targets.len();
                    targets.extend(rule.neighbors(u, n).map(|v| v as u32));
                    degrees.push((targets.len() - before) as u32);
                }
                (degrees, targets)
            })
            .collect();
        let mut offsets = Vec::with_capacity(len + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(blocks.iter().map(|(_, t)| t.len()).sum());
        for (degrees, block_targets) in blocks {
            for d in degrees {
                offsets.push(offsets.last().unwrap() + d as usize);
            }
            targets.extend(block_targets);
        }
        Ok(Self {
            keyword: *keyword,
            n,
            offsets,
            targets,
        })
    }

    pub fn keyword(&self) -> &Keyword {
        &self.keyword
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, id: u32) -> &[u32] {
        &self.targets[self.offsets[id as usize]..self.offsets[id as usize + 1]]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).contains(&v)
    }

    /// Same vertex set and edge set, ignoring which keyword produced them.
    pub fn same_adjacency(&self, other: &SubstitutionGraph) -> bool {
        self.offsets == other.offsets && self.targets == other.targets
    }

    /// Connected components as sorted id lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for start in 0..self.vertex_count() as u32 {
            if seen[start as usize] {
                continue;
            }
            seen[start as usize] = true;
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in self.neighbors(x) {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        component.push(y);
                        queue.push_back(y);
                    }
                }
            }
            component.sort_unstable();
            out.push(component);
        }
        out
    }

    /// BFS distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: u32) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source as usize] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x as usize].unwrap();
            for &y in self.neighbors(x) {
                if dist[y as usize].is_none() {
                    dist[y as usize] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Induced subgraph on `vertices` (sorted) with local indices.
    pub fn induced(&self, vertices: &[u32]) -> Vec<Vec<u32>> {
        vertices
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter_map(|w| vertices.binary_search(w).ok().map(|i| i as u32))
                    .collect()
            })
            .collect()
    }

    /// Graphviz rendering of the subgraph induced on `vertices`, labelled by word.
    pub fn to_dot(&self, vertices: &[u32]) -> String {
        let label = |id: u32| Word::from_raw(self.n, id as u64).to_string();
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let mut out = format!("graph \"G_{}({})\" {{\n", self.n, self.keyword);
        for &v in &sorted {
            let _ = writeln!(out, "  \"{}\";", label(v));
        }
        for &v in &sorted {
            for &w in self.neighbors(v) {
                if v < w && sorted.binary_search(&w).is_ok() {
                    let _ = writeln!(out, "  \"{}\" -- \"{}\";", label(v), label(w));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_graph(a: &Keyword, n: usize) -> Result<SubstitutionGraph> {
    SubstitutionGraph::build(a, n, &Settings::default())
}

/// Graph distance between `u` and `v`; `None` when they lie in different classes.
pub fn distance(a: &Keyword, u: &Word, v: &Word) -> Result<Option<usize>> {
    distance_with(a, u, v, &Settings::default())
}

pub fn distance_with(
    a: &Keyword,
    u: &Word,
    v: &Word,
    settings: &Settings,
) -> Result<Option<usize>> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    let n = u.len();
    settings.check_graph_n(n)?;
    let rule = a.rule();
    let target = v.bits();
    let mut dist = HashMap::from([(u.bits(), 0usize)]);
    let mut queue = VecDeque::from([u.bits()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if x == target {
            return Ok(Some(d));
        }
        for y in rule.neighbors(x, n) {
            dist.entry(y).or_insert_with(|| {
                queue.push_back(y);
                d + 1
            });
        }
    }
    Ok(None)
}

/// Two-colours every component by BFS without materializing adjacency.
pub fn is_bipartite(a: &Keyword, n: usize) -> Result<bool> {
    is_bipartite_with(a, n, &Settings::default())
}

pub fn is_bipartite_with(a: &Keyword, n: usize, settings: &Settings) -> Result<bool> {
    settings.check_graph_n(n)?;
    const UNSEEN: u8 = 2;
    let rule = a.rule();
    let mut colour = vec![UNSEEN; 1 << n];
    let mut queue = VecDeque::new();
    for start in 0..1u64 << n {
        if colour[start as usize] != UNSEEN {
            continue;
        }
        colour[start as usize] = 0;
        queue.push_back(start);
        while let Some(x) = queue.pop_front() {
            let c = colour[x as usize];
            for y in rule.neighbors(x, n) {
                match colour[y as usize] {
                    UNSEEN => {
                        colour[y as usize] = 1 - c;
                        queue.push_back(y);
                    }
                    cy if cy == c => return Ok(false),
                    _ => {}
                }
            }
        }
    }
    Ok(true)
}

/// Multiset of component certificates.
pub type CertificateMultiset = BTreeMap<Certificate, usize>;

pub fn canonical_histogram(a: &Keyword, n: usize) -> Result<CertificateMultiset> {
    canonical_histogram_with(a, n, &Settings::default())
}

pub fn canonical_histogram_with(
    a: &Keyword,
    n: usize,
    settings: &Settings,
) -> Result<CertificateMultiset> {
    settings.check_graph_n(n)?;
    let partition = ClassPartition::build(a, n, settings)?;
    let groups = partition.member_ids();
    if let Some(largest) = groups.iter().map(Vec::len).max() {
        if largest > settings.component_cap {
            return Err(Error::ComponentTooLarge {
                size: largest,
                cap: settings.component_cap,
            });
        }
    }
    let rule = a.rule();
    let certificates: Vec<Certificate> = groups
        .par_iter()
        .map(|members| {
            let local: Vec<Vec<u32>> = members
                .iter()
                .map(|&u| {
                    rule.neighbors(u as u64, n)
                        .map(|v| {
                            members.binary_search(&(v as u32)).expect("class is closed") as u32
                        })
                        .collect()
                })
                .collect();
            canonical_form(&local)
        })
        .collect();
    let mut multiset = CertificateMultiset::new();
    for c in certificates {
        *multiset.entry(c).or_insert(0) += 1;
    }
    Ok(multiset)
}

/// Whether the substitution graphs of `a` and `b` on `{0,1}^n` are isomorphic.
pub fn isomorphic(a: &Keyword, b: &Keyword, n: usize) -> Result<bool> {
    isomorphic_with(a, b, n, &Settings::default())
}

pub fn isomorphic_with(a: &Keyword, b: &Keyword, n: usize, settings: &Settings) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a == b || *a == b.negate() {
        settings.check_graph_n(n)?;
        return Ok(true);
    }
    Ok(canonical_histogram_with(a, n, settings)? == canonical_histogram_with(b, n, settings)?)
}
