//! Bipartite Tanner graphs: construction, structural analysis (girth,
//! diameter, degree profile), parity-check-matrix views, and the MacKay
//! alist interchange format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::GFMatrix;

/// A simple bipartite graph of variable and check nodes.
///
/// Adjacency is stored on both sides and kept transpose-consistent; node
/// indices are assigned by the constructions in a documented canonical order
/// so exported matrices are reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    var_adj: Vec<Vec<u32>>,
    chk_adj: Vec<Vec<u32>>,
    var_labels: Option<Vec<String>>,
    chk_labels: Option<Vec<String>>,
}

impl TannerGraph {
    pub fn n_var(&self) -> usize {
        self.var_adj.len()
    }

    pub fn n_chk(&self) -> usize {
        self.chk_adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.var_adj.iter().map(|a| a.len()).sum()
    }

    pub fn var_neighbors(&self, v: usize) -> &[u32] {
        &self.var_adj[v]
    }

    pub fn chk_neighbors(&self, c: usize) -> &[u32] {
        &self.chk_adj[c]
    }

    /// Edge list sorted by (variable, check).
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.n_edges());
        for (v, adj) in self.var_adj.iter().enumerate() {
            for &c in adj {
                out.push((v as u32, c));
            }
        }
        out
    }

    pub fn var_label(&self, v: usize) -> Option<&str> {
        self.var_labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn chk_label(&self, c: usize) -> Option<&str> {
        self.chk_labels.as_ref().map(|l| l[c].as_str())
    }

    pub fn find_var(&self, label: &str) -> Option<usize> {
        self.var_labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn find_chk(&self, label: &str) -> Option<usize> {
        self.chk_labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Length of the shortest cycle, or `None` for a forest.
    ///
    /// Breadth-first search from every variable node with parent-edge
    /// exclusion; every candidate closed walk bounds the girth from above and
    /// a start on a shortest cycle attains it exactly.
    pub fn girth(&self) -> Option<usize> {
        let nv = self.n_var();
        let total = nv + self.n_chk();
        if total == 0 {
            return None;
        }
        let neighbors = |u: usize| -> &[u32] {
            if u < nv {
                &self.var_adj[u]
            } else {
                &self.chk_adj[u - nv]
            }
        };
        let offset = |u: usize, w: u32| -> usize {
            if u < nv {
                nv + w as usize
            } else {
                w as usize
            }
        };
        let mut best = usize::MAX;
        let mut dist = vec![u32::MAX; total];
        let mut parent = vec![u32::MAX; total];
        let mut queue: Vec<u32> = Vec::with_capacity(total);
        for start in 0..nv {
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            queue.clear();
            dist[start] = 0;
            parent[start] = u32::MAX;
            queue.push(start as u32);
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head] as usize;
                head += 1;
                if best != usize::MAX && (dist[u] as usize) * 2 + 1 >= best {
                    continue;
                }
                for &w in neighbors(u) {
                    let w = offset(u, w);
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u as u32;
                        queue.push(w as u32);
                    } else if parent[u] != w as u32 {
                        let cand = (dist[u] + dist[w] + 1) as usize;
                        if cand < best {
                            best = cand;
                        }
                    }
                }
            }
        }
        if best == usize::MAX {
            None
        } else {
            Some(best)
        }
    }

    /// Maximum over all pairs of shortest-path lengths.
    pub fn diameter(&self) -> Result<usize> {
        let nv = self.n_var();
        let total = nv + self.n_chk();
        if total == 0 {
            return Ok(0);
        }
        let neighbors = |u: usize| -> &[u32] {
            if u < nv {
                &self.var_adj[u]
            } else {
                &self.chk_adj[u - nv]
            }
        };
        let offset = |u: usize, w: u32| -> usize {
            if u < nv {
                nv + w as usize
            } else {
                w as usize
            }
        };
        let mut max_dist = 0usize;
        let mut dist = vec![u32::MAX; total];
        let mut queue: Vec<u32> = Vec::with_capacity(total);
        for start in 0..total {
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            queue.clear();
            dist[start] = 0;
            queue.push(start as u32);
            let mut head = 0;
            let mut seen = 1usize;
            while head < queue.len() {
                let u = queue[head] as usize;
                head += 1;
                for &w in neighbors(u) {
                    let w = offset(u, w);
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        max_dist = max_dist.max(dist[w] as usize);
                        queue.push(w as u32);
                        seen += 1;
                    }
                }
            }
            if seen != total {
                return Err(Error::Disconnected);
            }
        }
        Ok(max_dist)
    }

    /// Degree multisets as degree -> count maps, variables then checks.
    pub fn degree_profile(&self) -> (BTreeMap<usize, usize>, BTreeMap<usize, usize>) {
        let mut vd = BTreeMap::new();
        for a in &self.var_adj {
            *vd.entry(a.len()).or_insert(0) += 1;
        }
        let mut cd = BTreeMap::new();
        for a in &self.chk_adj {
            *cd.entry(a.len()).or_insert(0) += 1;
        }
        (vd, cd)
    }

    /// The common degree if the graph is regular on both sides.
    pub fn regular_degree(&self) -> Option<usize> {
        let (vd, cd) = self.degree_profile();
        if vd.len() == 1 && cd.len() == 1 {
            let d = *vd.keys().next().unwrap();
            if cd.keys().next() == Some(&d) {
                return Some(d);
            }
        }
        None
    }

    pub fn min_var_degree(&self) -> usize {
        self.var_adj.iter().map(|a| a.len()).min().unwrap_or(0)
    }

    /// 0/1 parity-check matrix over GF(p): row i lists the neighbors of
    /// check i.
    pub fn to_matrix(&self, p: u32) -> GFMatrix {
        let mut m = GFMatrix::zero(p, self.n_chk(), self.n_var());
        for (c, adj) in self.chk_adj.iter().enumerate() {
            for &v in adj {
                m.set(c, v as usize, 1);
            }
        }
        m
    }

    /// Inverse of [`TannerGraph::to_matrix`]: nonzero entries must be 1.
    pub fn from_matrix(h: &GFMatrix) -> Result<TannerGraph> {
        let mut b = GraphBuilder::new();
        for v in 0..h.cols() {
            b.add_var(format!("v{v}"));
        }
        for c in 0..h.rows() {
            b.add_chk(format!("c{c}"));
        }
        for c in 0..h.rows() {
            for v in 0..h.cols() {
                match h.get(c, v) {
                    0 => {}
                    1 => b.connect(v, c)?,
                    e => {
                        return Err(Error::InvalidParams(format!(
                            "parity-check entry {e} at ({c},{v}) is not 0/1"
                        )))
                    }
                }
            }
        }
        Ok(b.build())
    }

    /// MacKay alist text: dimensions, max degrees, per-node degrees, then
    /// 1-based adjacency rows zero-padded to the max degree.
    pub fn to_alist(&self) -> String {
        let n = self.n_var();
        let m = self.n_chk();
        let max_vd = self.var_adj.iter().map(|a| a.len()).max().unwrap_or(0);
        let max_cd = self.chk_adj.iter().map(|a| a.len()).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", n, m);
        let _ = writeln!(out, "{} {}", max_vd, max_cd);
        let degrees = |adj: &[Vec<u32>]| {
            adj.iter()
                .map(|a| a.len().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "{}", degrees(&self.var_adj));
        let _ = writeln!(out, "{}", degrees(&self.chk_adj));
        let rows = |adj: &[Vec<u32>], width: usize, out: &mut String| {
            for a in adj {
                let mut items: Vec<String> = a.iter().map(|&x| (x + 1).to_string()).collect();
                while items.len() < width {
                    items.push("0".into());
                }
                let _ = writeln!(out, "{}", items.join(" "));
            }
        };
        rows(&self.var_adj, max_vd, &mut out);
        rows(&self.chk_adj, max_cd, &mut out);
        out
    }

    pub fn from_alist(text: &str) -> Result<TannerGraph> {
        let mut lines = text.lines().enumerate();
        let mut next_ints = |expect: usize| -> Result<(usize, Vec<usize>)> {
            for (i, line) in lines.by_ref() {
                if line.trim().is_empty() {
                    continue;
                }
                let vals: std::result::Result<Vec<usize>, _> = line
                    .split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect();
                let vals = vals.map_err(|e| Error::AlistParse {
                    line: i + 1,
                    msg: e.to_string(),
                })?;
                if expect != 0 && vals.len() != expect {
                    return Err(Error::AlistParse {
                        line: i + 1,
                        msg: format!("expected {} integers, found {}", expect, vals.len()),
                    });
                }
                return Ok((i + 1, vals));
            }
            Err(Error::AlistParse {
                line: 0,
                msg: "unexpected end of file".into(),
            })
        };
        let (_, dims) = next_ints(2)?;
        let (n, m) = (dims[0], dims[1]);
        let (_, maxes) = next_ints(2)?;
        let (max_vd, max_cd) = (maxes[0], maxes[1]);
        let (_, var_deg) = next_ints(n)?;
        let (_, chk_deg) = next_ints(m)?;
        let mut b = GraphBuilder::new();
        for v in 0..n {
            b.add_var(format!("v{v}"));
        }
        for c in 0..m {
            b.add_chk(format!("c{c}"));
        }
        for v in 0..n {
            let (lineno, row) = next_ints(max_vd)?;
            let nonzero: Vec<usize> = row.iter().copied().filter(|&x| x != 0).collect();
            if nonzero.len() != var_deg[v] {
                return Err(Error::AlistParse {
                    line: lineno,
                    msg: format!(
                        "variable {} lists {} checks, degree says {}",
                        v,
                        nonzero.len(),
                        var_deg[v]
                    ),
                });
            }
            for c in nonzero {
                if c > m {
                    return Err(Error::AlistParse {
                        line: lineno,
                        msg: format!("check index {c} out of range"),
                    });
                }
                b.connect(v, c - 1)?;
            }
        }
        // Check rows repeat the adjacency; only the degrees are validated.
        for c in 0..m {
            let (lineno, row) = next_ints(max_cd)?;
            let nonzero = row.iter().filter(|&&x| x != 0).count();
            if nonzero != chk_deg[c] {
                return Err(Error::AlistParse {
                    line: lineno,
                    msg: format!(
                        "check {} lists {} variables, degree says {}",
                        c, nonzero, chk_deg[c]
                    ),
                });
            }
        }
        Ok(b.build())
    }
}

/// Incremental builder enforcing the simple-graph invariant, with node
/// deletion for the constructions that materialize temporary nodes.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    var_labels: Vec<String>,
    chk_labels: Vec<String>,
    var_adj: Vec<Vec<u32>>,
    chk_adj: Vec<Vec<u32>>,
    var_dead: Vec<bool>,
    chk_dead: Vec<bool>,
}

impl GraphBuilder {
    pub fn new() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn add_var(&mut self, label: impl Into<String>) -> usize {
        self.var_labels.push(label.into());
        self.var_adj.push(Vec::new());
        self.var_dead.push(false);
        self.var_adj.len() - 1
    }

    pub fn add_chk(&mut self, label: impl Into<String>) -> usize {
        self.chk_labels.push(label.into());
        self.chk_adj.push(Vec::new());
        self.chk_dead.push(false);
        self.chk_adj.len() - 1
    }

    pub fn connect(&mut self, var: usize, chk: usize) -> Result<()> {
        if self.var_adj[var].contains(&(chk as u32)) {
            return Err(Error::DuplicateEdge { var, chk });
        }
        self.var_adj[var].push(chk as u32);
        self.chk_adj[chk].push(var as u32);
        Ok(())
    }

    pub fn disconnect(&mut self, var: usize, chk: usize) -> Result<()> {
        let pos = self.var_adj[var]
            .iter()
            .position(|&c| c == chk as u32)
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "no edge between variable {var} and check {chk} to delete"
                ))
            })?;
        self.var_adj[var].swap_remove(pos);
        let pos = self.chk_adj[chk]
            .iter()
            .position(|&v| v == var as u32)
            .expect("transpose consistency");
        self.chk_adj[chk].swap_remove(pos);
        Ok(())
    }

    /// Marks a variable node deleted along with its incident edges.
    pub fn remove_var(&mut self, var: usize) {
        for c in std::mem::take(&mut self.var_adj[var]) {
            let adj = &mut self.chk_adj[c as usize];
            let pos = adj
                .iter()
                .position(|&v| v == var as u32)
                .expect("transpose consistency");
            adj.swap_remove(pos);
        }
        self.var_dead[var] = true;
    }

    pub fn remove_chk(&mut self, chk: usize) {
        for v in std::mem::take(&mut self.chk_adj[chk]) {
            let adj = &mut self.var_adj[v as usize];
            let pos = adj
                .iter()
                .position(|&c| c == chk as u32)
                .expect("transpose consistency");
            adj.swap_remove(pos);
        }
        self.chk_dead[chk] = true;
    }

    pub fn chk_neighbors(&self, chk: usize) -> &[u32] {
        &self.chk_adj[chk]
    }

    /// Finalizes the graph, compacting deleted nodes while preserving the
    /// relative order of the survivors.
    pub fn build(self) -> TannerGraph {
        let var_map = compaction_map(&self.var_dead);
        let chk_map = compaction_map(&self.chk_dead);
        let mut var_adj = Vec::new();
        let mut var_labels = Vec::new();
        for (i, adj) in self.var_adj.into_iter().enumerate() {
            if self.var_dead[i] {
                continue;
            }
            let mut adj: Vec<u32> = adj.into_iter().map(|c| chk_map[c as usize]).collect();
            adj.sort_unstable();
            var_adj.push(adj);
            var_labels.push(self.var_labels[i].clone());
        }
        let mut chk_adj = Vec::new();
        let mut chk_labels = Vec::new();
        for (i, adj) in self.chk_adj.into_iter().enumerate() {
            if self.chk_dead[i] {
                continue;
            }
            let mut adj: Vec<u32> = adj.into_iter().map(|v| var_map[v as usize]).collect();
            adj.sort_unstable();
            chk_adj.push(adj);
            chk_labels.push(self.chk_labels[i].clone());
        }
        TannerGraph {
            var_adj,
            chk_adj,
            var_labels: Some(var_labels),
            chk_labels: Some(chk_labels),
        }
    }
}

fn compaction_map(dead: &[bool]) -> Vec<u32> {
    let mut map = vec![u32::MAX; dead.len()];
    let mut next = 0u32;
    for (i, &d) in dead.iter().enumerate() {
        if !d {
            map[i] = next;
            next += 1;
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(edges: &[(usize, usize)], nv: usize, nc: usize) -> TannerGraph {
        let mut b = GraphBuilder::new();
        for v in 0..nv {
            b.add_var(format!("v{v}"));
        }
        for c in 0..nc {
            b.add_chk(format!("c{c}"));
        }
        for &(v, c) in edges {
            b.connect(v, c).unwrap();
        }
        b.build()
    }

    fn cycle_graph(len: usize) -> TannerGraph {
        // A 2k-cycle alternating k variables and k checks.
        assert!(len.is_multiple_of(2));
        let k = len / 2;
        let mut b = GraphBuilder::new();
        for v in 0..k {
            b.add_var(format!("v{v}"));
        }
        for c in 0..k {
            b.add_chk(format!("c{c}"));
        }
        for i in 0..k {
            b.connect(i, i).unwrap();
            b.connect((i + 1) % k, i).unwrap();
        }
        b.build()
    }

    #[test]
    fn girth_of_tree_is_infinite() {
        let g = path_graph(&[(0, 0), (1, 0), (1, 1), (2, 1)], 3, 2);
        assert_eq!(g.girth(), None);
    }

    #[test]
    fn girth_of_even_cycles() {
        for len in [4, 6, 8, 10, 12] {
            assert_eq!(cycle_graph(len).girth(), Some(len));
        }
    }

    #[test]
    fn girth_finds_shortest_of_two_cycles() {
        // A 6-cycle plus an extra check that closes a 4-cycle.
        let mut b = GraphBuilder::new();
        for v in 0..3 {
            b.add_var(format!("v{v}"));
        }
        for c in 0..4 {
            b.add_chk(format!("c{c}"));
        }
        for (v, c) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)] {
            b.connect(v, c).unwrap();
        }
        b.connect(0, 3).unwrap();
        b.connect(1, 3).unwrap();
        let g = b.build();
        assert_eq!(g.girth(), Some(4));
    }

    #[test]
    fn diameter_of_single_edge() {
        let g = path_graph(&[(0, 0)], 1, 1);
        assert_eq!(g.diameter().unwrap(), 1);
    }

    #[test]
    fn diameter_rejects_disconnected() {
        let g = path_graph(&[(0, 0), (1, 1)], 2, 2);
        assert!(matches!(g.diameter(), Err(Error::Disconnected)));
    }

    #[test]
    fn degree_profile_counts() {
        let g = path_graph(&[(0, 0), (1, 0), (1, 1), (2, 1)], 3, 2);
        let (vd, cd) = g.degree_profile();
        assert_eq!(vd.get(&1), Some(&2));
        assert_eq!(vd.get(&2), Some(&1));
        assert_eq!(cd.get(&2), Some(&2));
        assert_eq!(g.regular_degree(), None);
        assert_eq!(cycle_graph(6).regular_degree(), Some(2));
        let empty = path_graph(&[], 0, 0);
        let (vd, cd) = empty.degree_profile();
        assert!(vd.is_empty() && cd.is_empty());
    }

    #[test]
    fn duplicate_edge_rejected() {
        let mut b = GraphBuilder::new();
        b.add_var("v0");
        b.add_chk("c0");
        b.connect(0, 0).unwrap();
        assert!(matches!(
            b.connect(0, 0),
            Err(Error::DuplicateEdge { var: 0, chk: 0 })
        ));
    }

    #[test]
    fn matrix_round_trip() {
        let g = cycle_graph(8);
        let h = g.to_matrix(2);
        let g2 = TannerGraph::from_matrix(&h).unwrap();
        assert_eq!(g.var_adj, g2.var_adj);
        assert_eq!(g.chk_adj, g2.chk_adj);
    }

    #[test]
    fn identity_matrix_gives_disjoint_edges() {
        let mut h = GFMatrix::zero(2, 2, 2);
        h.set(0, 0, 1);
        h.set(1, 1, 1);
        let g = TannerGraph::from_matrix(&h).unwrap();
        assert_eq!(g.n_edges(), 2);
        assert!(matches!(g.diameter(), Err(Error::Disconnected)));
    }

    #[test]
    fn node_deletion_compacts_in_order() {
        let mut b = GraphBuilder::new();
        for v in 0..4 {
            b.add_var(format!("v{v}"));
        }
        for c in 0..3 {
            b.add_chk(format!("c{c}"));
        }
        for (v, c) in [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2)] {
            b.connect(v, c).unwrap();
        }
        b.remove_var(1);
        b.remove_chk(0);
        let g = b.build();
        assert_eq!(g.n_var(), 3);
        assert_eq!(g.n_chk(), 2);
        assert_eq!(g.var_label(0), Some("v0"));
        assert_eq!(g.var_label(1), Some("v2"));
        assert_eq!(g.chk_label(0), Some("c1"));
        assert_eq!(g.var_neighbors(1), &[0, 1]);
    }

    #[test]
    fn alist_round_trip_and_format() {
        let g = cycle_graph(6);
        let text = g.to_alist();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "3 3");
        assert_eq!(lines[1], "2 2");
        assert_eq!(lines[2], "2 2 2");
        let g2 = TannerGraph::from_alist(&text).unwrap();
        assert_eq!(g.var_adj, g2.var_adj);
        assert_eq!(g.chk_adj, g2.chk_adj);
    }

    #[test]
    fn alist_zero_padding() {
        let g = path_graph(&[(0, 0), (1, 0), (1, 1), (2, 1)], 3, 2);
        let text = g.to_alist();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "3 2");
        assert_eq!(lines[1], "2 2");
        // Degree-1 variables pad with a trailing zero.
        assert_eq!(lines[4], "1 0");
        assert_eq!(lines[5], "1 2");
        assert_eq!(lines[6], "2 0");
        let g2 = TannerGraph::from_alist(&text).unwrap();
        assert_eq!(g.var_adj, g2.var_adj);
    }

    #[test]
    fn alist_parse_errors_carry_line_numbers() {
        // Variable 1 claims degree 2 but its row lists a single check.
        let bad = "2 2\n2 2\n2 2\n2 2\n1 2\n1 0\n1 2\n1 2\n";
        match TannerGraph::from_alist(bad) {
            Err(Error::AlistParse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected alist parse error, got {:?}", other),
        }
        // Non-numeric token.
        let bad = "2 2\nx 2\n";
        assert!(matches!(
            TannerGraph::from_alist(bad),
            Err(Error::AlistParse { line: 2, .. })
        ));
    }

    #[test]
    fn girth_invariant_under_relabeling() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let g = cycle_graph(10);
        let base_girth = g.girth();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..5 {
            let mut vperm: Vec<usize> = (0..g.n_var()).collect();
            let mut cperm: Vec<usize> = (0..g.n_chk()).collect();
            vperm.shuffle(&mut rng);
            cperm.shuffle(&mut rng);
            let mut b = GraphBuilder::new();
            for v in 0..g.n_var() {
                b.add_var(format!("v{v}"));
            }
            for c in 0..g.n_chk() {
                b.add_chk(format!("c{c}"));
            }
            for (v, c) in g.edges() {
                b.connect(vperm[v as usize], cperm[c as usize]).unwrap();
            }
            assert_eq!(b.build().girth(), base_girth);
        }
    }
}
