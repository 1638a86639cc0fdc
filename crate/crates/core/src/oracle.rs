//! Exact distance oracle by pruned landmark labeling.
//!
//! Roots are processed in a fixed order. The BFS from each root labels a
//! vertex only if the labels built so far overestimate its distance to the
//! root, which yields a 2-hop cover: for every connected pair some common hub
//! lies on a shortest path.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

pub const MAGIC: &[u8; 4] = b"PLL1";

/// On-disk bytes per label entry: a 32-bit hub id and a 16-bit distance.
pub const ENTRY_BYTES: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HubLabeling {
    /// Per vertex, `(hub, distance)` sorted by hub id.
    pub labels: Vec<Vec<(u32, u16)>>,
    /// Root order used by the build; empty for labels read from disk.
    pub order: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LabelStats {
    pub n: usize,
    pub avg_label_size: f64,
    pub max_label_size: usize,
    pub total_entries: u64,
    pub bytes: u64,
}

/// Incremental construction, one root per [`LabelBuilder::step`].
pub struct LabelBuilder<'g> {
    g: &'g Graph,
    order: Vec<u32>,
    next: usize,
    prune: bool,
    /// Per vertex, `(root rank, distance)` in rank order.
    labels: Vec<Vec<(u32, u16)>>,
    root_dist: Vec<u32>,
    dist: Vec<u32>,
    queue: Vec<u32>,
}

impl<'g> LabelBuilder<'g> {
    /// Default order: decreasing degree, ties by lowest id.
    pub fn new(g: &'g Graph, order: Option<&[u32]>) -> Result<Self> {
        let order = match order {
            Some(o) => {
                let mut seen = vec![false; g.n()];
                for &v in o {
                    g.check_vertex(v as u64)?;
                    if std::mem::replace(&mut seen[v as usize], true) {
                        return Err(Error::param(format!("vertex {v} repeated in build order")));
                    }
                }
                if o.len() != g.n() {
                    return Err(Error::param("build order must list every vertex once"));
                }
                o.to_vec()
            }
            None => g.degree_order(),
        };
        Ok(LabelBuilder {
            g,
            order,
            next: 0,
            prune: true,
            labels: vec![Vec::new(); g.n()],
            root_dist: vec![UNREACHED; g.n()],
            dist: vec![UNREACHED; g.n()],
            queue: Vec::new(),
        })
    }

    /// Disables pruning; every root then labels its whole component.
    pub fn unpruned(mut self) -> Self {
        self.prune = false;
        self
    }

    pub fn roots_done(&self) -> usize {
        self.next
    }

    /// Processes the next root; false when all roots are done.
    pub fn step(&mut self) -> bool {
        let Some(&root) = self.order.get(self.next) else {
            return false;
        };
        let rank = self.next as u32;
        self.next += 1;
        for &(h, d) in &self.labels[root as usize] {
            self.root_dist[h as usize] = d as u32;
        }
        self.dist[root as usize] = 0;
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            let d = self.dist[v as usize];
            if self.prune && self.covered(v, d) {
                continue;
            }
            let d16 = u16::try_from(d).expect("distance exceeds 16-bit label encoding");
            self.labels[v as usize].push((rank, d16));
            for &w in self.g.neighbors(v) {
                if self.dist[w as usize] == UNREACHED {
                    self.dist[w as usize] = d + 1;
                    self.queue.push(w);
                }
            }
        }
        for &v in &self.queue {
            self.dist[v as usize] = UNREACHED;
        }
        for &(h, _) in &self.labels[root as usize] {
            self.root_dist[h as usize] = UNREACHED;
        }
        true
    }

    /// Whether current labels already give a root–`v` path of length ≤ `d`.
    fn covered(&self, v: u32, d: u32) -> bool {
        self.labels[v as usize]
            .iter()
            .any(|&(h, dv)| self.root_dist[h as usize] != UNREACHED && self.root_dist[h as usize] + dv as u32 <= d)
    }

    /// Labels as built so far, with hubs translated to vertex ids.
    pub fn snapshot(&self) -> HubLabeling {
        let labels = self
            .labels
            .iter()
            .map(|l| {
                let mut l: Vec<(u32, u16)> = l.iter().map(|&(r, d)| (self.order[r as usize], d)).collect();
                l.sort_unstable();
                l
            })
            .collect();
        HubLabeling { labels, order: self.order.clone() }
    }

    pub fn finish(mut self) -> HubLabeling {
        while self.step() {}
        self.snapshot()
    }
}

pub fn build_labels(g: &Graph, order: Option<&[u32]>) -> Result<HubLabeling> {
    Ok(LabelBuilder::new(g, order)?.finish())
}

impl HubLabeling {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Exact distance, or [`UNREACHED`] across components.
    pub fn query(&self, s: u32, t: u32) -> Result<u32> {
        let n = self.n();
        for v in [s, t] {
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: v as u64, n });
            }
        }
        let (a, b) = (&self.labels[s as usize], &self.labels[t as usize]);
        let (mut i, mut j) = (0, 0);
        let mut best = UNREACHED;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    best = best.min(a[i].1 as u32 + b[j].1 as u32);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(best)
    }

    pub fn total_entries(&self) -> u64 {
        self.labels.iter().map(|l| l.len() as u64).sum()
    }

    pub fn stats(&self) -> LabelStats {
        let total = self.total_entries();
        LabelStats {
            n: self.n(),
            avg_label_size: if self.n() == 0 { 0.0 } else { total as f64 / self.n() as f64 },
            max_label_size: self.labels.iter().map(Vec::len).max().unwrap_or(0),
            total_entries: total,
            bytes: total * ENTRY_BYTES,
        }
    }

    /// Little-endian: magic, n (u32), total entries (u64), then per vertex
    /// its entry count (u32) and `(hub u32, distance u16)` pairs by ascending hub.
    pub fn write(&self, out: impl Write) -> std::io::Result<()> {
        let mut w = BufWriter::new(out);
        w.write_all(MAGIC)?;
        w.write_all(&(self.n() as u32).to_le_bytes())?;
        w.write_all(&self.total_entries().to_le_bytes())?;
        for l in &self.labels {
            w.write_all(&(l.len() as u32).to_le_bytes())?;
            for &(h, d) in l {
                w.write_all(&h.to_le_bytes())?;
                w.write_all(&d.to_le_bytes())?;
            }
        }
        w.flush()
    }

    pub fn read(input: impl Read) -> Result<Self> {
        let mut r = BufReader::new(input);
        let mut take = |buf: &mut [u8], what: &str| {
            r.read_exact(buf).map_err(|e| Error::LabelFormat(format!("truncated {what}: {e}")))
        };
        let mut magic = [0u8; 4];
        take(&mut magic, "header")?;
        if &magic != MAGIC {
            return Err(Error::LabelFormat("bad magic".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        let mut b2 = [0u8; 2];
        take(&mut b4, "header")?;
        let n = u32::from_le_bytes(b4) as usize;
        take(&mut b8, "header")?;
        let total = u64::from_le_bytes(b8);
        let mut labels = Vec::with_capacity(n);
        let mut seen = 0u64;
        for v in 0..n {
            take(&mut b4, "entry count")?;
            let c = u32::from_le_bytes(b4) as u64;
            seen += c;
            if seen > total {
                return Err(Error::LabelFormat(format!("vertex {v}: entries exceed header total {total}")));
            }
            let mut l = Vec::with_capacity(c as usize);
            for _ in 0..c {
                take(&mut b4, "entry")?;
                take(&mut b2, "entry")?;
                let h = u32::from_le_bytes(b4);
                if h as usize >= n {
                    return Err(Error::LabelFormat(format!("vertex {v}: hub {h} out of range")));
                }
                if l.last().is_some_and(|&(p, _)| p >= h) {
                    return Err(Error::LabelFormat(format!("vertex {v}: hubs not ascending")));
                }
                l.push((h, u16::from_le_bytes(b2)));
            }
            labels.push(l);
        }
        if seen != total {
            return Err(Error::LabelFormat(format!("header total {total}, found {seen}")));
        }
        let mut rest = [0u8; 1];
        if take(&mut rest, "trailer").is_ok() {
            return Err(Error::LabelFormat("trailing bytes".into()));
        }
        Ok(HubLabeling { labels, order: Vec::new() })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write(f).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::read(File::open(path).map_err(|e| Error::io(path, e))?)
    }
}

pub fn query(labels: &HubLabeling, s: u32, t: u32) -> Result<u32> {
    labels.query(s, t)
}

pub fn label_stats(labels: &HubLabeling) -> LabelStats {
    labels.stats()
}
