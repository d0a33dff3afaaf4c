//! Exact canonical labeling of small undirected graphs.
//!
//! Individualization and refinement: colour refinement to an equitable ordered
//! partition, branch on every vertex of the first smallest non-singleton cell, and keep
//! the lexicographically smallest adjacency matrix over all leaves. Automorphisms found
//! at equal leaves prune siblings lying in the same orbit of the pointwise stabilizer
//! of the current prefix.

use std::fmt;

use crate::union_find::UnionFind;

/// Isomorphism-invariant encoding of a graph: equal iff the graphs are isomorphic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    vertices: usize,
    matrix: Vec<u64>,
}

impl Certificate {
    pub fn vertices(&self) -> usize {
        self.vertices
    }

    /// Vertex count as 4 big-endian bytes, then the row-major adjacency bits packed
    /// most significant first.
    pub fn to_bytes(&self) -> Vec<u8> {
        let bit_len = self.vertices * self.vertices;
        let mut out = (self.vertices as u32).to_be_bytes().to_vec();
        let bytes = bit_len.div_ceil(8);
        out.extend(self.matrix.iter().flat_map(|w| w.to_be_bytes()).take(bytes));
        out
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn edge_count(&self) -> usize {
        self.matrix
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2
    }
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Certificate({}v, {})", self.vertices, self.to_hex())
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Canonical certificate of the graph given by symmetric adjacency lists.
pub fn canonical_form(adjacency: &[Vec<u32>]) -> Certificate {
    let n = adjacency.len();
    if n == 0 {
        return Certificate {
            vertices: 0,
            matrix: Vec::new(),
        };
    }
    let mut search = Search {
        adjacency,
        first: None,
        best: None,
        generators: Vec::new(),
        levels: Vec::new(),
        prefix: Vec::new(),
    };
    let root = refine(adjacency, vec![0; n]);
    search.visit(root);
    let (matrix, _) = search.best.expect("at least one leaf");
    Certificate {
        vertices: n,
        matrix,
    }
}

/// Rank-compress `keys` into colours `0..k`, preserving order. Returns the colour count.
fn compress<K: Ord + Clone>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let colours = keys
        .iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect();
    (colours, sorted.len())
}

fn colour_count(colours: &[u32]) -> usize {
    colours.iter().max().map_or(0, |&c| c as usize + 1)
}

/// Iterated colour refinement until the number of colours is stable. The ordering of
/// the result only depends on the isomorphism class of `(graph, colours)`.
fn refine(adjacency: &[Vec<u32>], mut colours: Vec<u32>) -> Vec<u32> {
    let mut count = colour_count(&colours);
    loop {
        let keys: Vec<(u32, Vec<u32>)> = adjacency
            .iter()
            .enumerate()
            .map(|(v, nbrs)| {
                let mut seen: Vec<u32> = nbrs.iter().map(|&w| colours[w as usize]).collect();
                seen.sort_unstable();
                (colours[v], seen)
            })
            .collect();
        let (next, next_count) = compress(&keys);
        colours = next;
        if next_count == count {
            return colours;
        }
        count = next_count;
    }
}

fn individualize(adjacency: &[Vec<u32>], colours: &[u32], v: u32) -> Vec<u32> {
    let keys: Vec<u32> = colours
        .iter()
        .enumerate()
        .map(|(w, &c)| 2 * c + u32::from(w as u32 != v))
        .collect();
    let (split, _) = compress(&keys);
    refine(adjacency, split)
}

fn encode(adjacency: &[Vec<u32>], position: &[u32]) -> Vec<u64> {
    let n = adjacency.len();
    let mut matrix = vec![0u64; (n * n).div_ceil(64)];
    for (v, nbrs) in adjacency.iter().enumerate() {
        let row = position[v] as usize * n;
        for &w in nbrs {
            let bit = row + position[w as usize] as usize;
            matrix[bit / 64] |= 1u64 << (63 - bit % 64);
        }
    }
    matrix
}

struct Level {
    explored: Vec<u32>,
    current: u32,
}

struct Search<'a> {
    adjacency: &'a [Vec<u32>],
    first: Option<(Vec<u64>, Vec<u32>)>,
    best: Option<(Vec<u64>, Vec<u32>)>,
    generators: Vec<Vec<u32>>,
    levels: Vec<Level>,
    prefix: Vec<u32>,
}

impl Search<'_> {
    /// Returns `Some(depth)` when the child being explored at `depth` turned out to be
    /// equivalent to an explored sibling, so the search should resume there.
    fn visit(&mut self, colours: Vec<u32>) -> Option<usize> {
        let n = self.adjacency.len();
        if colour_count(&colours) == n {
            return self.leaf(colours);
        }
        let target = target_cell(&colours);
        let depth = self.levels.len();
        let children: Vec<u32> = (0..n as u32)
            .filter(|&v| colours[v as usize] == target)
            .collect();
        self.levels.push(Level {
            explored: Vec::new(),
            current: u32::MAX,
        });
        for v in children {
            if self.equivalent_to_explored(depth, v) {
                continue;
            }
            self.levels[depth].current = v;
            self.prefix.push(v);
            let next = individualize(self.adjacency, &colours, v);
            let outcome = self.visit(next);
            self.prefix.pop();
            self.levels[depth].explored.push(v);
            if let Some(d) = outcome {
                if d < depth {
                    self.levels.pop();
                    return Some(d);
                }
            }
        }
        self.levels.pop();
        None
    }

    fn leaf(&mut self, position: Vec<u32>) -> Option<usize> {
        let matrix = encode(self.adjacency, &position);
        let Some((first_matrix, first_position)) = &self.first else {
            self.first = Some((matrix.clone(), position.clone()));
            self.best = Some((matrix, position));
            return None;
        };
        let reference = if *first_matrix == matrix {
            Some(first_position)
        } else {
            let (best_matrix, best_position) = self.best.as_ref().unwrap();
            match matrix.cmp(best_matrix) {
                std::cmp::Ordering::Equal => Some(best_position),
                std::cmp::Ordering::Less => {
                    self.best = Some((matrix, position));
                    return None;
                }
                std::cmp::Ordering::Greater => None,
            }
        };
        let reference = reference?;
        // gamma maps v to the vertex holding the same position in the reference leaf
        let mut vertex_at = vec![0u32; position.len()];
        for (v, &p) in reference.iter().enumerate() {
            vertex_at[p as usize] = v as u32;
        }
        let gamma: Vec<u32> = position.iter().map(|&p| vertex_at[p as usize]).collect();
        self.generators.push(gamma);
        (0..self.levels.len()).find(|&d| self.equivalent_to_explored(d, self.levels[d].current))
    }

    /// Whether `v` shares an orbit with an explored child at `depth` under the found
    /// automorphisms fixing the prefix above `depth` pointwise.
    fn equivalent_to_explored(&self, depth: usize, v: u32) -> bool {
        let explored = &self.levels[depth].explored;
        if explored.is_empty() || self.generators.is_empty() {
            return false;
        }
        let fixed = &self.prefix[..depth];
        let mut orbits = UnionFind::new(self.adjacency.len());
        let mut any = false;
        for gamma in &self.generators {
            if fixed.iter().all(|&x| gamma[x as usize] == x) {
                any = true;
                for (x, &y) in gamma.iter().enumerate() {
                    orbits.union(x as u32, y);
                }
            }
        }
        if !any {
            return false;
        }
        let root = orbits.find(v);
        explored.iter().any(|&e| orbits.find(e) == root)
    }
}

/// First colour among the smallest non-singleton cells.
fn target_cell(colours: &[u32]) -> u32 {
    let mut sizes = vec![0usize; colour_count(colours)];
    for &c in colours {
        sizes[c as usize] += 1;
    }
    let (colour, _) = sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|(c, &s)| (s, *c))
        .expect("partition is not discrete");
    colour as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }

    fn relabel(adj: &[Vec<u32>], perm: &[u32]) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); adj.len()];
        for (v, nbrs) in adj.iter().enumerate() {
            out[perm[v] as usize] = nbrs.iter().map(|&w| perm[w as usize]).collect();
        }
        out
    }

    fn hypercube(d: u32) -> Vec<Vec<u32>> {
        (0..1u32 << d)
            .map(|v| (0..d).map(|b| v ^ (1 << b)).collect())
            .collect()
    }

    /// Minimum adjacency encoding over all n! orderings.
    fn brute_force(adj: &[Vec<u32>]) -> Vec<u64> {
        fn permutations(n: usize) -> Vec<Vec<u32>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for slot in 0..n {
                    let mut q = p.clone();
                    q.insert(slot, (n - 1) as u32);
                    out.push(q);
                }
            }
            out
        }
        permutations(adj.len())
            .iter()
            .map(|p| encode(adj, p))
            .min()
            .unwrap()
    }

    #[test]
    fn certificates_separate_exactly_the_isomorphism_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=6usize {
            let mut rows = Vec::new();
            for _ in 0..60 {
                let mut edges = Vec::new();
                for a in 0..n as u32 {
                    for b in a + 1..n as u32 {
                        if rand::Rng::gen_bool(&mut rng, 0.4) {
                            edges.push((a, b));
                        }
                    }
                }
                let adj = graph(n, &edges);
                rows.push((brute_force(&adj), canonical_form(&adj)));
            }
            for (bx, cx) in &rows {
                for (by, cy) in &rows {
                    assert_eq!(bx == by, cx == cy);
                }
            }
        }
    }

    #[test]
    fn isomorphic_graphs_get_equal_certificates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = [
            hypercube(3),
            hypercube(5),
            graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]),
            graph(7, &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (5, 6)]),
            graph(5, &[]),
        ];
        for adj in samples {
            let cert = canonical_form(&adj);
            let mut perm: Vec<u32> = (0..adj.len() as u32).collect();
            for _ in 0..10 {
                perm.shuffle(&mut rng);
                assert_eq!(canonical_form(&relabel(&adj, &perm)), cert);
            }
        }
    }

    #[test]
    fn non_isomorphic_graphs_differ() {
        // same degree sequence, different structure: C6 vs two triangles
        let c6 = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let two_triangles = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(canonical_form(&c6), canonical_form(&two_triangles));
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_ne!(canonical_form(&path), canonical_form(&star));
    }

    #[test]
    fn symmetric_graphs_finish() {
        // the 6-cube has 46080 automorphisms, each a separate leaf without pruning
        let cert = canonical_form(&hypercube(6));
        assert_eq!(cert.vertices(), 64);
        assert_eq!(cert.edge_count(), 192);
        let cert = canonical_form(&graph(40, &[]));
        assert_eq!(cert.edge_count(), 0);
    }

    #[test]
    fn certificate_bytes() {
        let cert = canonical_form(&graph(2, &[(0, 1)]));
        assert_eq!(cert.to_hex(), "0000000260");
        assert_eq!(canonical_form(&[]).to_hex(), "00000000");
    }
}
