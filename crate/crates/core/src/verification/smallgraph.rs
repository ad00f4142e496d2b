//! Explicit adjacency for small graphs, as bitset rows.

use rand::Rng;

use crate::geometry::Point;
use crate::rgg::Rgg;
use crate::seed::TrialRng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn from_rgg(g: &Rgg) -> Self {
        let mut out = Self::empty(g.n());
        for u in g.vertices() {
            for v in g.neighbors(u) {
                out.add_edge(u.index(), v.index());
            }
        }
        out
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.adjacent(u, v))
    }

    pub fn edge_count(&self) -> usize {
        self.rows
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == self.n
    }
}

/// A connected planar random geometric graph with between 1 and `max_n`
/// vertices, resampled until connected.
pub fn random_connected_rgg(rng: &mut TrialRng, max_n: usize) -> SmallGraph {
    loop {
        let n = rng.gen_range(1..=max_n.max(1));
        let r = rng.gen_range(0.25..0.7);
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(vec![rng.gen(), rng.gen()]))
            .collect();
        let g = SmallGraph::from_rgg(&Rgg::from_positions(&pts, r).expect("valid positions"));
        if g.is_connected() {
            return g;
        }
    }
}
