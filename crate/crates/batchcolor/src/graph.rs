//! Graph representation and baseline coloring operations.
//!
//! Vertices carry opaque string ids at the API boundary and are mapped to
//! dense indices internally. Colors are positive integers; a coloring is
//! proper when no edge joins two vertices of the same color.

use std::collections::{BTreeMap, BTreeSet};

/// Simple undirected graph over string-identified vertices.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vertex if absent; returns its dense index either way.
    pub fn add_vertex(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_string());
        self.index.insert(id.to_string(), i);
        self.adj.push(BTreeSet::new());
        i
    }

    /// Adds an undirected edge; both endpoints must already exist.
    /// Self-loops are rejected because no proper coloring could exist.
    pub fn add_edge(&mut self, a: &str, b: &str) -> Result<(), String> {
        let (Some(&ia), Some(&ib)) = (self.index.get(a), self.index.get(b)) else {
            return Err(format!("edge ({a}, {b}) references an unknown vertex"));
        };
        if ia == ib {
            return Err(format!("self-loop on vertex {a}"));
        }
        self.adj[ia].insert(ib);
        self.adj[ib].insert(ia);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id_of(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb.iter().filter(|&&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    /// Induced subgraph on the given vertex ids (edges among them only).
    pub fn induced(&self, keep: &[String]) -> Graph {
        let mut g = Graph::new();
        for id in keep {
            g.add_vertex(id);
        }
        for id in keep {
            let i = self.index[id];
            for &j in &self.adj[i] {
                let jid = &self.ids[j];
                if g.index.contains_key(jid) && id < jid {
                    g.add_edge(id, jid).unwrap();
                }
            }
        }
        g
    }

    /// True when the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n()).collect();
        fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in self.edges() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// Connected components as lists of dense indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A proper 2-coloring if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<u64>> {
        let mut color = vec![0u64; self.n()];
        for s in 0..self.n() {
            if color[s] != 0 {
                continue;
            }
            color[s] = 1;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if color[w] == 0 {
                        color[w] = 3 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }
}

/// Coloring keyed by vertex id. Colors are positive integers.
pub type Coloring = BTreeMap<String, u64>;

/// Everything that is wrong with a candidate coloring for a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColoringViolations {
    /// Vertices of the graph missing from the coloring, or colored 0.
    pub uncolored: Vec<String>,
    /// Colored ids that are not graph vertices.
    pub unknown: Vec<String>,
    /// Edges whose endpoints share a color.
    pub monochromatic_edges: Vec<(String, String)>,
}

impl ColoringViolations {
    pub fn is_clean(&self) -> bool {
        self.uncolored.is_empty() && self.unknown.is_empty() && self.monochromatic_edges.is_empty()
    }
}

/// Checks totality and properness of `coloring` on `g`.
pub fn validate_coloring(g: &Graph, coloring: &Coloring) -> ColoringViolations {
    let mut v = ColoringViolations::default();
    for id in g.ids() {
        match coloring.get(id) {
            Some(&c) if c >= 1 => {}
            _ => v.uncolored.push(id.clone()),
        }
    }
    for id in coloring.keys() {
        if g.index_of(id).is_none() {
            v.unknown.push(id.clone());
        }
    }
    for (a, b) in g.edges() {
        let (ia, ib) = (g.id_of(a), g.id_of(b));
        if let (Some(ca), Some(cb)) = (coloring.get(ia), coloring.get(ib)) {
            if ca == cb {
                v.monochromatic_edges.push((ia.to_string(), ib.to_string()));
            }
        }
    }
    v
}

/// First-Fit: scan `order` and give each vertex the least positive color
/// absent from its already-colored neighbors. `order` must enumerate every
/// vertex exactly once.
pub fn first_fit(g: &Graph, order: &[usize]) -> Vec<u64> {
    assert_eq!(order.len(), g.n(), "order must cover all vertices");
    let mut color = vec![0u64; g.n()];
    let mut used = Vec::new();
    for &v in order {
        assert_eq!(color[v], 0, "vertex repeated in first-fit order");
        used.clear();
        for &w in g.neighbors(v) {
            if color[w] != 0 {
                used.push(color[w]);
            }
        }
        used.sort_unstable();
        used.dedup();
        let mut c = 1u64;
        for &u in &used {
            if u == c {
                c += 1;
            } else if u > c {
                break;
            }
        }
        color[v] = c;
    }
    color
}

/// Sum of colors, the cost of a coloring under the sum objective.
pub fn color_sum(coloring: &Coloring) -> u64 {
    coloring.values().sum()
}

/// Largest color used, the cost under the classic objective (0 when empty).
pub fn max_color(coloring: &Coloring) -> u64 {
    coloring.values().copied().max().unwrap_or(0)
}

pub fn distinct_colors(coloring: &Coloring) -> usize {
    coloring.values().collect::<BTreeSet<_>>().len()
}
