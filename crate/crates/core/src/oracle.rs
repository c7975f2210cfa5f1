//! Exact M(q): maximum cliques of the graph on F_q^* whose edges are the pairs
//! `{a, b}` with `ab + 1` a square.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diophantine::{certify, DiophantineTuple};
use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};

/// Default largest `q` the oracle accepts.
pub const DEFAULT_MAX_Q: u64 = 5000;

/// Fixed-width bit set over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

/// The Diophantine graph of F_q. Vertex `v` is the element with code `v + 1`.
#[derive(Clone, Debug)]
pub struct DiophantineGraph {
    field: String,
    q: u64,
    adjacency: Vec<Bits>,
}

impl DiophantineGraph {
    pub fn field(&self) -> &str {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Whether `ab + 1` is a square, for distinct nonzero codes `a`, `b`.
    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        a != b
            && (1..self.q).contains(&a)
            && (1..self.q).contains(&b)
            && self.adjacency[a as usize - 1].get(b as usize - 1)
    }

    pub fn degree(&self, a: u64) -> usize {
        self.adjacency[a as usize - 1].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bits::count).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            out.extend(row.iter().filter(|&j| j > i).map(|j| (i as u64 + 1, j as u64 + 1)));
        }
        out
    }
}

/// Builds the graph for `q <= max_q`.
pub fn build_graph(ctx: &FieldDescriptor, max_q: u64) -> Result<DiophantineGraph> {
    let q = ctx.order();
    if q > max_q {
        return Err(Error::SizePolicy(format!(
            "exact M(q) is limited to q <= {max_q} (got {q}); raise --max-q to override"
        )));
    }
    let n = (q - 1) as usize;
    let adjacency = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = FieldElement::new(i as u64 + 1);
            let mut row = Bits::new(n);
            for j in (0..n).filter(|&j| j != i) {
                let b = FieldElement::new(j as u64 + 1);
                if ctx.is_square(ctx.add(ctx.mul(a, b), FieldElement::ONE)) {
                    row.set(j);
                }
            }
            row
        })
        .collect();
    Ok(DiophantineGraph {
        field: ctx.id(),
        q,
        adjacency,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub size: usize,
    /// The lexicographically least maximum clique, by code.
    pub witness: Vec<u64>,
    /// Branch-and-bound nodes expanded, both passes.
    pub nodes_explored: u64,
}

/// Greedy sequential colouring of `p` (vertices in index order) within the
/// adjacency `adj`. Returns vertices in colour order with their colour (1-based).
fn colour_sort(adj: &[Bits], p: &Bits) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(p.count());
    let mut uncoloured = p.clone();
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut avail = uncoloured.clone();
        while let Some(v) = avail.first() {
            avail.clear(v);
            avail.and_not_assign(&adj[v]);
            uncoloured.clear(v);
            out.push((v, colour));
        }
    }
    out
}

fn colour_bound(adj: &[Bits], p: &Bits) -> usize {
    colour_sort(adj, p).last().map_or(0, |&(_, c)| c)
}

struct MaxSearch<'a> {
    adj: &'a [Bits],
    best: usize,
    nodes: u64,
}

impl MaxSearch<'_> {
    fn expand(&mut self, depth: usize, mut p: Bits) {
        self.nodes += 1;
        let order = colour_sort(self.adj, &p);
        for &(v, colour) in order.iter().rev() {
            if depth + colour <= self.best {
                return;
            }
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                self.best = self.best.max(depth + 1);
            } else {
                self.expand(depth + 1, next);
            }
            p.clear(v);
        }
    }
}

struct WitnessSearch<'a> {
    adj: &'a [Bits],
    target: usize,
    chosen: Vec<usize>,
    nodes: u64,
}

impl WitnessSearch<'_> {
    /// Depth-first over candidates in ascending index order; the first clique of
    /// the target size found is the lexicographically least.
    fn find(&mut self, p: &Bits) -> bool {
        self.nodes += 1;
        if self.chosen.len() == self.target {
            return true;
        }
        let need = self.target - self.chosen.len();
        let mut rest = p.clone();
        while let Some(v) = rest.first() {
            rest.clear(v);
            if rest.count() + 1 < need {
                return false;
            }
            let next = rest.and(&self.adj[v]);
            if next.count() + 1 < need || colour_bound(self.adj, &next) + 1 < need {
                continue;
            }
            self.chosen.push(v);
            if self.find(&next) {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Exact maximum clique: colour-bounded branch and bound over vertices sorted by
/// descending degree (ties by code), then a bounded search in code order for
/// the lexicographically least clique of that size.
pub fn max_clique(graph: &DiophantineGraph) -> CliqueResult {
    let n = graph.vertex_count();
    if n == 0 {
        return CliqueResult {
            size: 0,
            witness: vec![],
            nodes_explored: 0,
        };
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.adjacency[v].count()), v));
    let mut relabelled = vec![Bits::new(n); n];
    for (new_u, &u) in order.iter().enumerate() {
        for (new_v, &v) in order.iter().enumerate() {
            if graph.adjacency[u].get(v) {
                relabelled[new_u].set(new_v);
            }
        }
    }
    let mut all = Bits::new(n);
    (0..n).for_each(|v| all.set(v));

    let mut search = MaxSearch {
        adj: &relabelled,
        best: 1,
        nodes: 0,
    };
    search.expand(0, all.clone());

    let mut witness = WitnessSearch {
        adj: &graph.adjacency,
        target: search.best,
        chosen: vec![],
        nodes: 0,
    };
    let found = witness.find(&all);
    assert!(found, "a clique of the maximum size exists");
    CliqueResult {
        size: search.best,
        witness: witness.chosen.iter().map(|&v| v as u64 + 1).collect(),
        nodes_explored: search.nodes + witness.nodes,
    }
}

/// Every maximal clique, each as ascending codes, by Bron-Kerbosch with
/// pivoting. Output is sorted.
pub fn maximal_cliques(graph: &DiophantineGraph) -> Vec<Vec<u64>> {
    fn bk(adj: &[Bits], r: &mut Vec<usize>, mut p: Bits, mut x: Bits, out: &mut Vec<Vec<u64>>) {
        if p.is_empty() {
            if x.is_empty() {
                let mut c: Vec<u64> = r.iter().map(|&v| v as u64 + 1).collect();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .max_by_key(|&u| (p.and(&adj[u]).count(), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let mut candidates = p.clone();
        candidates.and_not_assign(&adj[pivot]);
        for v in candidates.iter().collect::<Vec<_>>() {
            r.push(v);
            bk(adj, r, p.and(&adj[v]), x.and(&adj[v]), out);
            r.pop();
            p.clear(v);
            x.set(v);
        }
    }
    let n = graph.vertex_count();
    let mut all = Bits::new(n);
    (0..n).for_each(|v| all.set(v));
    let mut out = Vec::new();
    bk(&graph.adjacency, &mut Vec::new(), all, Bits::new(n), &mut out);
    out.sort_unstable();
    out
}

/// One cached oracle result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub field: String,
    pub q: u64,
    #[serde(rename = "M")]
    pub m: usize,
    pub witness: Vec<u64>,
    pub nodes: u64,
}

impl OracleRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serialises")
    }
}

/// Oracle results kept as one JSON object per line, keyed by field id.
#[derive(Debug)]
pub struct OracleCache {
    path: PathBuf,
    entries: HashMap<String, OracleRecord>,
}

impl OracleCache {
    /// Loads `path` if it exists. Unparseable lines (a torn final write) are skipped.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                if let Ok(rec) = serde_json::from_str::<OracleRecord>(&line?) {
                    entries.insert(rec.field.clone(), rec);
                }
            }
        }
        Ok(OracleCache { path, entries })
    }

    pub fn get(&self, field: &str) -> Option<&OracleRecord> {
        self.entries.get(field)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, rec: OracleRecord) -> Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{}", rec.to_json())?;
        self.entries.insert(rec.field.clone(), rec);
        Ok(())
    }
}

/// `M(q)` with a verified witness. A cached entry is re-verified before use.
pub fn exact_m(
    ctx: &FieldDescriptor,
    max_q: u64,
    cache: Option<&mut OracleCache>,
) -> Result<(OracleRecord, DiophantineTuple)> {
    let witness_tuple = |codes: &[u64]| -> Result<DiophantineTuple> {
        let elements = codes
            .iter()
            .map(|&c| ctx.element(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(certify(ctx, &elements)?.0)
    };
    let id = ctx.id();
    if let Some(rec) = cache.as_ref().and_then(|c| c.get(&id)) {
        if rec.witness.len() == rec.m {
            if let Ok(t) = witness_tuple(&rec.witness) {
                return Ok((rec.clone(), t));
            }
        }
    }
    if ctx.order() > max_q {
        return Err(Error::SizePolicy(format!(
            "exact M(q) is limited to q <= {max_q} (got {}); raise --max-q to override",
            ctx.order()
        )));
    }
    let result = max_clique(&build_graph(ctx, max_q)?);
    let rec = OracleRecord {
        field: id,
        q: ctx.order(),
        m: result.size,
        witness: result.witness,
        nodes: result.nodes_explored,
    };
    let tuple = witness_tuple(&rec.witness)?;
    if let Some(cache) = cache {
        cache.insert(rec.clone())?;
    }
    Ok((rec, tuple))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(p: u64, n: u32) -> DiophantineGraph {
        build_graph(&FieldDescriptor::new(p, n).unwrap(), DEFAULT_MAX_Q).unwrap()
    }

    #[test]
    fn small_graphs() {
        assert_eq!(graph(5, 1).edges(), vec![(1, 3), (1, 4), (2, 4)]);
        assert_eq!(
            graph(7, 1).edges(),
            vec![(1, 3), (1, 6), (2, 3), (2, 4), (2, 5), (3, 5), (4, 5), (4, 6)]
        );
        let g = graph(3, 2);
        for a in 1..9 {
            for b in 1..9 {
                assert_eq!(g.has_edge(a, b), g.has_edge(b, a));
            }
            assert!(!g.has_edge(a, a));
        }
    }

    #[test]
    fn clique_examples() {
        let r = max_clique(&graph(5, 1));
        assert_eq!((r.size, r.witness), (2, vec![1, 3]));
        let r = max_clique(&graph(7, 1));
        assert_eq!((r.size, r.witness), (3, vec![2, 3, 5]));
    }

    #[test]
    fn edgeless_graph_has_clique_number_one() {
        let g = DiophantineGraph {
            field: "test".into(),
            q: 5,
            adjacency: vec![Bits::new(4); 4],
        };
        let r = max_clique(&g);
        assert_eq!((r.size, r.witness), (1, vec![1]));
        assert_eq!(maximal_cliques(&g), vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn maximal_cliques_of_f7() {
        assert_eq!(
            maximal_cliques(&graph(7, 1)),
            vec![vec![1, 3], vec![1, 6], vec![2, 3, 5], vec![2, 4, 5], vec![4, 6]]
        );
    }

    #[test]
    fn size_policy() {
        let ctx = FieldDescriptor::new(101, 1).unwrap();
        assert!(matches!(build_graph(&ctx, 100), Err(Error::SizePolicy(_))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.jsonl");
        let ctx = FieldDescriptor::new(3, 2).unwrap();
        let mut cache = OracleCache::open(&path).unwrap();
        let (first, _) = exact_m(&ctx, DEFAULT_MAX_Q, Some(&mut cache)).unwrap();
        let mut reopened = OracleCache::open(&path).unwrap();
        assert_eq!(reopened.len(), 1);
        let (second, _) = exact_m(&ctx, 1, Some(&mut reopened)).unwrap();
        assert_eq!(first, second);
    }
}
