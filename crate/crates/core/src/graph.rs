//! Immutable compressed adjacency, BFS kernels and component extraction.

use crate::error::{Error, Result};

mod io;
pub use io::{load_edge_list, save_edge_list, write_edge_list};

/// Distance of a vertex the search never reached.
pub const UNREACHED: u32 = u32::MAX;

/// Marks an old vertex that has no image under a vertex map.
pub const NO_VERTEX: u32 = u32::MAX;

/// Simple undirected graph over vertices `0..n` in compressed sparse row form.
///
/// Neighbor lists are sorted ascending, symmetric, free of self-loops and
/// duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from arbitrary nonnegative ids.
    ///
    /// Distinct ids are relabelled to `0..n` in increasing order; the returned
    /// vector maps each new id back to its original. Self-loops still register
    /// their endpoint as a vertex.
    pub fn from_edges(pairs: &[(u64, u64)]) -> Result<(Graph, Vec<u64>)> {
        if pairs.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut ids: Vec<u64> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() > NO_VERTEX as usize {
            return Err(Error::param("more than 2^32 - 1 vertices"));
        }
        let contiguous = *ids.last().unwrap() as usize == ids.len() - 1;
        let index = |x: u64| -> u32 {
            if contiguous {
                x as u32
            } else {
                ids.binary_search(&x).unwrap() as u32
            }
        };
        let edges: Vec<(u32, u32)> = pairs.iter().map(|&(u, v)| (index(u), index(v))).collect();
        Ok((Graph::with_vertices(ids.len(), &edges), ids))
    }

    /// Builds a graph on exactly `n` vertices, dropping self-loops and repeats.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn with_vertices(n: usize, edges: &[(u32, u32)]) -> Graph {
        let mut degree = vec![0usize; n + 1];
        for &(u, v) in edges {
            assert!((u as usize) < n && (v as usize) < n, "edge ({u},{v}) outside 0..{n}");
            if u != v {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut raw = vec![0u32; offsets[n]];
        for &(u, v) in edges {
            if u != v {
                raw[fill[u as usize]] = v;
                fill[u as usize] += 1;
                raw[fill[v as usize]] = u;
                fill[v as usize] += 1;
            }
        }
        // Sort and deduplicate each list, compacting in place.
        let mut neighbors = Vec::with_capacity(raw.len());
        let mut compact = vec![0usize; n + 1];
        for v in 0..n {
            let list = &mut raw[offsets[v]..offsets[v + 1]];
            list.sort_unstable();
            let start = neighbors.len();
            for &w in list.iter() {
                if neighbors.len() == start || *neighbors.last().unwrap() != w {
                    neighbors.push(w);
                }
            }
            compact[v + 1] = neighbors.len();
        }
        neighbors.shrink_to_fit();
        Graph { offsets: compact, neighbors }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: u32) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Highest-degree vertex; ties go to the lowest id.
    pub fn max_degree_vertex(&self) -> u32 {
        let mut best = 0u32;
        for v in 1..self.n() as u32 {
            if self.degree(v) > self.degree(best) {
                best = v;
            }
        }
        best
    }

    /// Vertices by decreasing degree, ties by increasing id.
    pub fn degree_order(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.n() as u32).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        order
    }

    pub fn check_vertex(&self, v: u64) -> Result<u32> {
        if (v as usize) < self.n() {
            Ok(v as u32)
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Edges as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |u| {
            self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    /// Exact hop distances from `s`.
    pub fn bfs(&self, s: u32) -> Result<DistanceArray> {
        self.check_vertex(s as u64)?;
        let mut scratch = Bfs::new(self.n());
        scratch.run(self, s);
        Ok(DistanceArray { source: s, dist: scratch.dist.clone() })
    }

    /// Component label per vertex (labels ordered by smallest member) and component sizes.
    pub fn components(&self) -> (Vec<u32>, Vec<usize>) {
        let n = self.n();
        let mut label = vec![NO_VERTEX; n];
        let mut sizes = Vec::new();
        let mut queue = Vec::new();
        for root in 0..n as u32 {
            if label[root as usize] != NO_VERTEX {
                continue;
            }
            let c = sizes.len() as u32;
            label[root as usize] = c;
            queue.clear();
            queue.push(root);
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head];
                head += 1;
                for &w in self.neighbors(u) {
                    if label[w as usize] == NO_VERTEX {
                        label[w as usize] = c;
                        queue.push(w);
                    }
                }
            }
            sizes.push(queue.len());
        }
        (label, sizes)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1.len() <= 1
    }

    /// Largest connected component and the old-to-new vertex map.
    ///
    /// Ties go to the component containing the smallest id. Relabelling keeps
    /// the relative order of ids; vertices outside map to [`NO_VERTEX`].
    pub fn giant_component(&self) -> (Graph, Vec<u32>) {
        let (label, sizes) = self.components();
        let Some(best) = (0..sizes.len()).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))) else {
            return (self.clone(), Vec::new());
        };
        let keep: Vec<bool> = label.iter().map(|&l| l as usize == best).collect();
        self.induced(&keep)
    }

    /// Subgraph induced by the vertices flagged in `keep`, relabelled in id order.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<u32>) {
        let mut map = vec![NO_VERTEX; self.n()];
        let mut next = 0u32;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                map[v] = next;
                next += 1;
            }
        }
        let mut offsets = Vec::with_capacity(next as usize + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if !k {
                continue;
            }
            for &w in self.neighbors(v as u32) {
                if map[w as usize] != NO_VERTEX {
                    neighbors.push(map[w as usize]);
                }
            }
            offsets.push(neighbors.len());
        }
        (Graph { offsets, neighbors }, map)
    }

    /// Checks every structural invariant; used by tests and loaders.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n();
        if self.offsets[0] != 0 || self.offsets[n] != self.neighbors.len() {
            return Err("offset bounds".into());
        }
        if self.neighbors.len() % 2 != 0 {
            return Err("odd adjacency total".into());
        }
        for v in 0..n as u32 {
            if self.offsets[v as usize] > self.offsets[v as usize + 1] {
                return Err(format!("offsets decrease at {v}"));
            }
            let list = self.neighbors(v);
            for (i, &w) in list.iter().enumerate() {
                if w as usize >= n {
                    return Err(format!("neighbor {w} of {v} out of range"));
                }
                if w == v {
                    return Err(format!("self-loop at {v}"));
                }
                if i > 0 && list[i - 1] >= w {
                    return Err(format!("list of {v} not strictly increasing"));
                }
                if !self.has_edge(w, v) {
                    return Err(format!("asymmetric edge {v}-{w}"));
                }
            }
        }
        Ok(())
    }
}

/// Hop distances from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceArray {
    pub source: u32,
    pub dist: Vec<u32>,
}

impl DistanceArray {
    /// Largest finite distance.
    pub fn eccentricity(&self) -> u32 {
        self.dist.iter().copied().filter(|&d| d != UNREACHED).max().unwrap_or(0)
    }

    /// Sum of finite distances.
    pub fn farness(&self) -> u64 {
        self.dist.iter().filter(|&&d| d != UNREACHED).map(|&d| d as u64).sum()
    }

    pub fn reached(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHED).count()
    }

    /// γ_ℓ for ℓ = 0..=eccentricity.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut levels = vec![0usize; self.eccentricity() as usize + 1];
        for &d in &self.dist {
            if d != UNREACHED {
                levels[d as usize] += 1;
            }
        }
        levels
    }
}

/// Reusable BFS scratch space sized for one graph.
///
/// After [`Bfs::run`], `order()` lists the reached vertices level by level and
/// `dist()` holds their distances; all other entries are [`UNREACHED`].
#[derive(Debug, Clone)]
pub struct Bfs {
    dist: Vec<u32>,
    queue: Vec<u32>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs { dist: vec![UNREACHED; n], queue: Vec::with_capacity(n) }
    }

    fn reset(&mut self) {
        for &v in &self.queue {
            self.dist[v as usize] = UNREACHED;
        }
        self.queue.clear();
    }

    /// Full BFS from `s`.
    pub fn run(&mut self, g: &Graph, s: u32) -> &[u32] {
        self.reset();
        self.dist[s as usize] = 0;
        self.queue.push(s);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let du = self.dist[u as usize] + 1;
            for &w in g.neighbors(u) {
                if self.dist[w as usize] == UNREACHED {
                    self.dist[w as usize] = du;
                    self.queue.push(w);
                }
            }
        }
        &self.dist
    }

    /// τ_s(k): the first level holding more than `k` vertices, or `None`.
    ///
    /// Stops as soon as the answer is known.
    pub fn tau(&mut self, g: &Graph, s: u32, k: u64) -> Option<u32> {
        let mut levels = Vec::new();
        self.levels_until(g, s, k, &mut levels);
        tau_from_levels(&levels, k)
    }

    /// Level sizes from `s`, stopping once some level holds more than `k`
    /// vertices. The last entry may then be a partial count, still above `k`,
    /// so τ_s(j) is exact for every `j <= k`.
    pub fn levels_until(&mut self, g: &Graph, s: u32, k: u64, levels: &mut Vec<usize>) {
        self.reset();
        levels.clear();
        self.dist[s as usize] = 0;
        self.queue.push(s);
        levels.push(1);
        if k == 0 {
            return;
        }
        let mut head = 0;
        let mut level = 0u32;
        loop {
            let level_end = self.queue.len();
            if head == level_end {
                levels.pop();
                return;
            }
            while head < level_end {
                let u = self.queue[head];
                head += 1;
                for &w in g.neighbors(u) {
                    if self.dist[w as usize] == UNREACHED {
                        self.dist[w as usize] = level + 1;
                        self.queue.push(w);
                        if (self.queue.len() - level_end) as u64 > k {
                            levels.push(self.queue.len() - level_end);
                            return;
                        }
                    }
                }
            }
            levels.push(self.queue.len() - level_end);
            level += 1;
        }
    }

    pub fn dist(&self) -> &[u32] {
        &self.dist
    }

    pub fn order(&self) -> &[u32] {
        &self.queue
    }

    /// Eccentricity of the last full run's source.
    pub fn last_eccentricity(&self) -> u32 {
        self.queue.last().map_or(0, |&v| self.dist[v as usize])
    }

    /// Level sizes of the last full run.
    pub fn last_level_sizes(&self) -> Vec<usize> {
        let mut levels = vec![0usize; self.last_eccentricity() as usize + 1];
        for &v in &self.queue {
            levels[self.dist[v as usize] as usize] += 1;
        }
        levels
    }
}

/// First level whose size exceeds `k`.
pub fn tau_from_levels(levels: &[usize], k: u64) -> Option<u32> {
    levels.iter().position(|&c| c as u64 > k).map(|l| l as u32)
}

/// Scratch space for point-to-point distances by bidirectional BFS.
#[derive(Debug, Clone)]
pub struct PairDistance {
    fwd: Vec<u32>,
    bwd: Vec<u32>,
    seen_f: Vec<u32>,
    seen_b: Vec<u32>,
}

impl PairDistance {
    pub fn new(n: usize) -> Self {
        PairDistance {
            fwd: vec![UNREACHED; n],
            bwd: vec![UNREACHED; n],
            seen_f: Vec::new(),
            seen_b: Vec::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.seen_f {
            self.fwd[v as usize] = UNREACHED;
        }
        for &v in &self.seen_b {
            self.bwd[v as usize] = UNREACHED;
        }
        self.seen_f.clear();
        self.seen_b.clear();
    }

    /// dist(s, t), or `None` when they lie in different components.
    pub fn distance(&mut self, g: &Graph, s: u32, t: u32) -> Option<u32> {
        if s == t {
            return Some(0);
        }
        self.reset();
        self.fwd[s as usize] = 0;
        self.bwd[t as usize] = 0;
        self.seen_f.push(s);
        self.seen_b.push(t);
        let (mut head_f, mut head_b) = (0usize, 0usize);
        let (mut vol_f, mut vol_b) = (g.degree(s), g.degree(t));
        loop {
            // The two explored balls are disjoint here; expand the cheaper side by one level.
            let forward = vol_f <= vol_b;
            let (mine, other, seen, head, vol) = if forward {
                (&mut self.fwd, &self.bwd, &mut self.seen_f, &mut head_f, &mut vol_f)
            } else {
                (&mut self.bwd, &self.fwd, &mut self.seen_b, &mut head_b, &mut vol_b)
            };
            let end = seen.len();
            if *head == end {
                return None;
            }
            let mut next_vol = 0usize;
            while *head < end {
                let u = seen[*head];
                *head += 1;
                let du = mine[u as usize] + 1;
                for &w in g.neighbors(u) {
                    let o = other[w as usize];
                    if o != UNREACHED {
                        return Some(du + o);
                    }
                    if mine[w as usize] == UNREACHED {
                        mine[w as usize] = du;
                        seen.push(w);
                        next_vol += g.degree(w);
                    }
                }
            }
            *vol = next_vol;
        }
    }
}
