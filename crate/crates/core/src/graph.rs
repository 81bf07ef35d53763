//! Weighted digraphs of the class `G_b`: arc weights in `(0, b]`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("arc ({from}, {to}) has weight {weight}, outside (0, {bound}]")]
    InvalidWeight {
        from: usize,
        to: usize,
        weight: f64,
        bound: f64,
    },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("vertex index {index} out of range for {n} vertices")]
    BadIndex { index: usize, n: usize },
    #[error("weight bound must be positive and finite, got {0}")]
    InvalidBound(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

/// A digraph on vertices `0..n` with positive arc weights bounded by `b`.
///
/// Arcs are kept sorted by `(source, target)` so every matrix built from the
/// graph is reproducible bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    n: usize,
    bound: f64,
    arcs: BTreeMap<(usize, usize), f64>,
}

impl WeightedDigraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize, f64)>, bound: f64) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::BadIndex { index: 0, n });
        }
        if !(bound.is_finite() && bound > 0.0) {
            return Err(GraphError::InvalidBound(bound));
        }
        let mut map = BTreeMap::new();
        for (source, target, weight) in arcs {
            for index in [source, target] {
                if index >= n {
                    return Err(GraphError::BadIndex { index, n });
                }
            }
            if source == target {
                return Err(GraphError::SelfLoop(source));
            }
            if !(weight > 0.0 && weight <= bound) {
                return Err(GraphError::InvalidWeight {
                    from: source,
                    to: target,
                    weight,
                    bound,
                });
            }
            if map.insert((source, target), weight).is_some() {
                return Err(GraphError::DuplicateArc(source, target));
            }
        }
        Ok(Self { n, bound, arcs: map })
    }

    pub fn empty(n: usize, bound: f64) -> Result<Self, GraphError> {
        Self::new(n, [], bound)
    }

    /// Every ordered pair joined with weight `w`, and `b = w`.
    pub fn complete(n: usize, w: f64) -> Result<Self, GraphError> {
        let arcs = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j, w)));
        Self::new(n, arcs, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn weight(&self, source: usize, target: usize) -> Option<f64> {
        self.arcs.get(&(source, target)).copied()
    }

    /// Arcs in `(source, target)` order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs
            .iter()
            .map(|(&(source, target), &weight)| Arc { source, target, weight })
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arcs.range((v, 0)..(v + 1, 0)).count()
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs.range((v, 0)..(v + 1, 0)).map(|(&(_, t), _)| t)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(s, t) in self.arcs.keys() {
            adj[s].push(t);
        }
        adj
    }

    /// Same graph with every weight and the bound multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self, GraphError> {
        Self::new(
            self.n,
            self.arcs().map(|a| (a.source, a.target, a.weight * c)),
            self.bound * c,
        )
    }
}

/// The complementary digraph: weight `b − w_ij` on every ordered pair, where
/// a missing arc counts as `w_ij = 0` and `w_ij = b` leaves no arc.
pub fn complement(g: &WeightedDigraph) -> WeightedDigraph {
    let b = g.bound;
    let mut arcs = BTreeMap::new();
    for i in 0..g.n {
        for j in 0..g.n {
            if i == j {
                continue;
            }
            match g.weight(i, j) {
                None => {
                    arcs.insert((i, j), b);
                }
                Some(w) if w == b => {}
                Some(w) => {
                    arcs.insert((i, j), b - w);
                }
            }
        }
    }
    WeightedDigraph { n: g.n, bound: b, arcs }
}

/// Directed cycle `i -> i + 1 (mod n)` with all weights `w`, in the class `G_w`.
pub fn cycle_digraph(n: usize, w: f64) -> Result<WeightedDigraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadIndex { index: n, n });
    }
    if !(w.is_finite() && w > 0.0) {
        return Err(GraphError::InvalidWeight {
            from: 0,
            to: 1 % n,
            weight: w,
            bound: w,
        });
    }
    WeightedDigraph::new(n, (0..n).map(|i| (i, (i + 1) % n, w)), w)
}

/// True iff the arc set is a single directed cycle through all vertices.
pub fn is_hamiltonian_cycle(g: &WeightedDigraph) -> bool {
    let n = g.n;
    if n < 2 || g.arc_count() != n || (0..n).any(|v| g.out_degree(v) != 1) {
        return false;
    }
    let mut seen = vec![false; n];
    let mut v = 0;
    for _ in 0..n {
        if seen[v] {
            return false;
        }
        seen[v] = true;
        v = g.successors(v).next().expect("out-degree is one");
    }
    v == 0 && seen.iter().all(|&s| s)
}

/// Strongly connected components and the acyclic graph between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condensation {
    /// Component of each vertex; components are numbered in increasing order
    /// of their smallest vertex.
    pub component: Vec<usize>,
    /// Sorted successor lists of the component DAG.
    pub dag: Vec<Vec<usize>>,
    /// Components without outgoing DAG edges, ascending.
    pub sinks: Vec<usize>,
}

impl Condensation {
    pub fn component_count(&self) -> usize {
        self.dag.len()
    }

    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.component.len()).filter(|&v| self.component[v] == c).collect()
    }
}

/// Tarjan's algorithm with an explicit call stack.
pub fn condensation(g: &WeightedDigraph) -> Condensation {
    let n = g.n;
    let adj = g.adjacency();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut raw = vec![UNVISITED; n];
    let mut raw_count = 0;
    let mut next_index = 0;
    // (vertex, position in its successor list)
    let mut calls: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        calls.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    raw[w] = raw_count;
                    if w == v {
                        break;
                    }
                }
                raw_count += 1;
            }
        }
    }

    // Renumber by smallest member vertex.
    let mut renumber = vec![UNVISITED; raw_count];
    let mut next = 0;
    for v in 0..n {
        if renumber[raw[v]] == UNVISITED {
            renumber[raw[v]] = next;
            next += 1;
        }
    }
    let component: Vec<usize> = raw.iter().map(|&r| renumber[r]).collect();
    let mut dag = vec![Vec::new(); raw_count];
    for (v, succ) in adj.iter().enumerate() {
        for &w in succ {
            let (cv, cw) = (component[v], component[w]);
            if cv != cw {
                dag[cv].push(cw);
            }
        }
    }
    for d in &mut dag {
        d.sort_unstable();
        d.dedup();
    }
    let sinks = (0..raw_count).filter(|&c| dag[c].is_empty()).collect();
    Condensation { component, dag, sinks }
}

/// Minimum number of trees in a spanning converging forest: one tree per
/// sink strong component.
pub fn in_forest_dimension(g: &WeightedDigraph) -> usize {
    condensation(g).sinks.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, arcs: &[(usize, usize)]) -> WeightedDigraph {
        WeightedDigraph::new(n, arcs.iter().map(|&(s, t)| (s, t, 1.0)), 1.0).unwrap()
    }

    /// Fewest trees over all spanning in-forests, by enumerating for every
    /// vertex either "root" or one of its out-arcs and keeping acyclic choices.
    fn brute_force_in_forest_dimension(g: &WeightedDigraph) -> usize {
        let n = g.n();
        let options: Vec<Vec<Option<usize>>> = (0..n)
            .map(|v| std::iter::once(None).chain(g.successors(v).map(Some)).collect())
            .collect();
        let mut best = n;
        let mut choice = vec![0usize; n];
        loop {
            let parent: Vec<Option<usize>> = (0..n).map(|v| options[v][choice[v]]).collect();
            let acyclic = (0..n).all(|start| {
                let mut v = start;
                for _ in 0..=n {
                    match parent[v] {
                        None => return true,
                        Some(p) => v = p,
                    }
                }
                false
            });
            if acyclic {
                best = best.min(parent.iter().filter(|p| p.is_none()).count());
            }
            let mut k = 0;
            loop {
                if k == n {
                    return best;
                }
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn construction_examples() {
        assert_eq!(WeightedDigraph::empty(1, 1.0).unwrap().n(), 1);
        assert!(matches!(
            WeightedDigraph::new(2, [(0, 1, 2.0)], 1.0),
            Err(GraphError::InvalidWeight { .. })
        ));
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(c3.arc_count(), 3);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            WeightedDigraph::new(2, [(1, 1, 1.0)], 1.0),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            WeightedDigraph::new(2, [(0, 1, 1.0), (0, 1, 0.5)], 1.0),
            Err(GraphError::DuplicateArc(0, 1))
        );
        assert_eq!(
            WeightedDigraph::new(2, [(0, 2, 1.0)], 1.0),
            Err(GraphError::BadIndex { index: 2, n: 2 })
        );
        assert!(matches!(
            WeightedDigraph::new(2, [(0, 1, 0.0)], 1.0),
            Err(GraphError::InvalidWeight { .. })
        ));
        assert!(matches!(
            WeightedDigraph::new(2, [(0, 1, f64::NAN)], 1.0),
            Err(GraphError::InvalidWeight { .. })
        ));
        assert_eq!(WeightedDigraph::empty(2, 0.0), Err(GraphError::InvalidBound(0.0)));
    }

    #[test]
    fn complement_examples() {
        let k = WeightedDigraph::complete(4, 2.0).unwrap();
        assert_eq!(complement(&k).arc_count(), 0);
        let e = WeightedDigraph::empty(3, 1.0).unwrap();
        let c = complement(&e);
        assert_eq!(c, WeightedDigraph::complete(3, 1.0).unwrap());
        let mixed = WeightedDigraph::new(3, [(0, 1, 0.25), (1, 2, 1.0)], 1.0).unwrap();
        let mc = complement(&mixed);
        assert_eq!(mc.weight(0, 1), Some(0.75));
        assert_eq!(mc.weight(1, 2), None);
        assert_eq!(mc.weight(2, 0), Some(1.0));
        assert_eq!(complement(&mc), mixed);
    }

    #[test]
    fn condensation_examples() {
        let c3 = condensation(&g(3, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(c3.component_count(), 1);
        assert_eq!(c3.sinks, vec![0]);

        let fork = condensation(&g(3, &[(0, 1), (0, 2)]));
        assert_eq!(fork.component, vec![0, 1, 2]);
        assert_eq!(fork.sinks, vec![1, 2]);
        assert_eq!(fork.dag[0], vec![1, 2]);

        let empty = condensation(&WeightedDigraph::empty(4, 1.0).unwrap());
        assert_eq!(empty.component_count(), 4);
        assert_eq!(empty.sinks.len(), 4);
    }

    #[test]
    fn condensation_numbering_follows_smallest_vertex() {
        // {1, 3} is a cycle feeding the sink {0, 2}.
        let c = condensation(&g(4, &[(3, 1), (1, 3), (1, 0), (0, 2), (2, 0)]));
        assert_eq!(c.component, vec![0, 1, 0, 1]);
        assert_eq!(c.sinks, vec![0]);
        assert_eq!(c.members(1), vec![1, 3]);
    }

    #[test]
    fn deep_path_does_not_recurse() {
        let n = 20_000;
        let path = WeightedDigraph::new(n, (0..n - 1).map(|i| (i, i + 1, 1.0)), 1.0).unwrap();
        assert_eq!(in_forest_dimension(&path), 1);
        let cyc = cycle_digraph(n, 1.0).unwrap();
        assert_eq!(condensation(&cyc).component_count(), 1);
    }

    #[test]
    fn in_forest_dimension_examples() {
        assert_eq!(in_forest_dimension(&WeightedDigraph::complete(5, 1.0).unwrap()), 1);
        assert_eq!(in_forest_dimension(&WeightedDigraph::empty(4, 1.0).unwrap()), 4);
        let path = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(brute_force_in_forest_dimension(&path), 1);
        assert_eq!(in_forest_dimension(&path), 1);
    }

    #[test]
    fn in_forest_dimension_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n = rng.gen_range(1..=6);
            let density = rng.gen::<f64>() * 0.6;
            let arcs: Vec<_> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j)
                .filter(|_| rng.gen::<f64>() < density)
                .collect();
            let gr = g(n, &arcs);
            assert_eq!(
                in_forest_dimension(&gr),
                brute_force_in_forest_dimension(&gr),
                "{arcs:?}"
            );
        }
    }

    #[test]
    fn hamiltonian_cycle_examples() {
        assert!(is_hamiltonian_cycle(&g(3, &[(0, 1), (1, 2), (2, 0)])));
        assert!(!is_hamiltonian_cycle(&WeightedDigraph::complete(3, 1.0).unwrap()));
        // cycle plus chord: vertex 0 has out-degree 2
        assert!(!is_hamiltonian_cycle(&g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])));
        // two disjoint 2-cycles have out-degree one everywhere but are not one cycle
        assert!(!is_hamiltonian_cycle(&g(4, &[(0, 1), (1, 0), (2, 3), (3, 2)])));
        assert!(is_hamiltonian_cycle(&g(4, &[(0, 2), (2, 1), (1, 3), (3, 0)])));
    }

    #[test]
    fn cycle_digraph_examples() {
        let c2 = cycle_digraph(2, 1.0).unwrap();
        assert_eq!(
            c2.arcs().map(|a| (a.source, a.target)).collect::<Vec<_>>(),
            vec![(0, 1), (1, 0)]
        );
        assert!(is_hamiltonian_cycle(&cycle_digraph(3, 1.0).unwrap()));
        assert!(cycle_digraph(1, 1.0).is_err());
        assert!(cycle_digraph(3, -1.0).is_err());
    }

    #[test]
    fn sinks_are_components_without_out_edges() {
        let gr = g(6, &[(0, 1), (1, 0), (1, 2), (3, 4), (4, 5), (5, 3), (2, 5)]);
        let c = condensation(&gr);
        for comp in 0..c.component_count() {
            assert_eq!(c.sinks.contains(&comp), c.dag[comp].is_empty());
        }
        assert_eq!(in_forest_dimension(&gr), 1);
    }
}
