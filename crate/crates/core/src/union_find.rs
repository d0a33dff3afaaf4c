use std::sync::atomic::{AtomicU32, Ordering};

/// Disjoint sets over `0..len` with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while x != root {
            x = std::mem::replace(&mut self.parent[x as usize], root);
        }
        root
    }

    /// Returns `true` if the two sets were distinct.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    /// Root of every element.
    pub fn into_roots(mut self) -> Vec<u32> {
        (0..self.len() as u32).map(|x| self.find(x)).collect()
    }
}

/// Lock-free disjoint sets. Roots are always linked under the smaller index, so the
/// root of a finished set is its minimum element regardless of interleaving.
#[derive(Debug)]
pub struct ConcurrentUnionFind {
    parent: Vec<AtomicU32>,
}

impl ConcurrentUnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len as u32).map(AtomicU32::new).collect(),
        }
    }

    pub fn find(&self, mut x: u32) -> u32 {
        loop {
            let p = self.parent[x as usize].load(Ordering::Acquire);
            if p == x {
                return x;
            }
            let gp = self.parent[p as usize].load(Ordering::Acquire);
            if gp != p {
                // path halving; losing the race is harmless
                let _ = self.parent[x as usize].compare_exchange_weak(
                    p,
                    gp,
                    Ordering::AcqRel,
                    Ordering::Relaxed,
                );
            }
            x = gp;
        }
    }

    pub fn union(&self, a: u32, b: u32) {
        let (mut a, mut b) = (a, b);
        loop {
            a = self.find(a);
            b = self.find(b);
            if a == b {
                return;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if self.parent[hi as usize]
                .compare_exchange(hi, lo, Ordering::AcqRel, Ordering::Acquire)
                .is_ok()
            {
                return;
            }
        }
    }

    pub fn into_roots(self) -> Vec<u32> {
        let len = self.parent.len();
        (0..len as u32).map(|x| self.find(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;

    #[test]
    fn sequential_basics() {
        let mut uf = UnionFind::new(6);
        assert!(uf.union(0, 1));
        assert!(uf.union(4, 5));
        assert!(!uf.union(1, 0));
        assert!(uf.union(1, 5));
        assert_eq!(uf.find(4), uf.find(0));
        assert_ne!(uf.find(2), uf.find(3));
        let roots = uf.into_roots();
        assert_eq!(roots[0], roots[5]);
    }

    #[test]
    fn concurrent_roots_are_minimum_members() {
        let n = 1 << 14;
        let uf = ConcurrentUnionFind::new(n);
        // joining x with x + 5 leaves exactly the residue classes mod 5
        (0..n as u32).into_par_iter().for_each(|x| {
            let y = x + 5;
            if (y as usize) < n {
                uf.union(y, x);
            }
        });
        let roots = uf.into_roots();
        for (x, r) in roots.iter().enumerate() {
            assert_eq!(*r as usize, x % 5);
        }
    }
}
