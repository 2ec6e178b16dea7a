//! Hypergraphs, Berge girth via the incidence correspondence, the
//! kappa-sparsity condition, cycle-structure classification and the
//! re-wiring procedure that removes short Berge cycles.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graphs::BipartiteGraph;

/// Hypergraph with multiset edge semantics: the same vertex subset may
/// appear as an edge more than once. Vertices are `0..v_size`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    v_size: usize,
    edges: Vec<Vec<usize>>, // each sorted, no repeated vertex inside an edge
}

/// A Berge cycle: distinct edges `e_1..e_b` and distinct vertices
/// `v_1..v_b` with `v_i` in both `e_i` and `e_{i+1}` (cyclically).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BergeCycle {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

/// Classification of a Berge-connected hypergraph by its cycle content.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleClass {
    Tree,
    Unicyclic,
    Multicyclic,
}

/// Result of [`Hypergraph::classify_cycles`]; `slack` and
/// `cycle_space_dim` are computed along independent routes and must agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClassification {
    pub class: CycleClass,
    /// `sum(|e| - 1) - (|V| - 1)`.
    pub slack: i64,
    /// Non-tree edges of a DFS spanning forest of the incidence graph.
    pub cycle_space_dim: usize,
}

/// Outcome of the sparsity check, with the violating edge subset on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityCheck {
    pub holds: bool,
    pub violation: Option<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(v_size: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut sorted = edges;
        for e in &mut sorted {
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(
                    "edge contains a repeated vertex".into(),
                ));
            }
            if let Some(&max) = e.last() {
                if max >= v_size {
                    return Err(Error::IndexOutOfRange {
                        index: max,
                        bound: v_size,
                    });
                }
            }
        }
        Ok(Hypergraph {
            v_size,
            edges: sorted,
        })
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `Some(r)` when every edge has exactly `r` vertices (and there is at
    /// least one edge).
    pub fn uniformity(&self) -> Option<usize> {
        let r = self.edges.first()?.len();
        self.edges.iter().all(|e| e.len() == r).then_some(r)
    }

    /// Bipartite incidence graph: left part indexes edges, right part
    /// indexes vertices, joined by membership.
    pub fn incidence_graph(&self) -> BipartiteGraph {
        BipartiteGraph::new(self.edges.len(), self.v_size, self.edges.clone())
            .expect("edges validated at construction")
    }

    /// Inverse of [`Hypergraph::incidence_graph`]: each left vertex becomes
    /// the edge of its right neighbors.
    pub fn from_bipartite(g: &BipartiteGraph) -> Self {
        Hypergraph {
            v_size: g.b_size(),
            edges: g.adjacency().to_vec(),
        }
    }

    /// Fewest hyperedges in a Berge cycle, `None` when there is none.
    /// Computed as half the incidence-graph girth.
    pub fn berge_girth(&self) -> Option<usize> {
        self.incidence_graph().girth().map(|g| g / 2)
    }

    /// A shortest Berge cycle, via a shortest incidence-graph cycle.
    pub fn shortest_berge_cycle(&self) -> Option<BergeCycle> {
        let m = self.edges.len();
        let cycle = self.incidence_graph().to_graph().shortest_cycle()?;
        // Incidence cycles alternate edge-nodes and vertex-nodes; rotate so
        // the walk starts at an edge-node.
        let start = cycle.iter().position(|&x| x < m)?;
        let rotated: Vec<usize> = cycle[start..]
            .iter()
            .chain(&cycle[..start])
            .copied()
            .collect();
        let edges = rotated.iter().step_by(2).copied().collect();
        let vertices = rotated.iter().skip(1).step_by(2).map(|&x| x - m).collect();
        Some(BergeCycle { edges, vertices })
    }

    /// Berge-connectivity: the incidence graph is connected. Isolated
    /// vertices disconnect a hypergraph; a single vertex with no edges is
    /// trivially connected (there is no bipartition to violate).
    pub fn is_berge_connected(&self) -> bool {
        self.incidence_graph().to_graph().component_count() <= 1
    }

    /// Classifies a Berge-connected hypergraph on at least two vertices as
    /// a Berge tree, unicyclic or multicyclic, returning the slack
    /// `sum(|e|-1) - (|V|-1)` alongside the independently counted
    /// cycle-space dimension of the incidence graph.
    pub fn classify_cycles(&self) -> Result<CycleClassification> {
        if self.v_size < 2 {
            return Err(Error::InvalidInput(
                "classification needs at least two vertices".into(),
            ));
        }
        let inc = self.incidence_graph().to_graph();
        let components = inc.component_count();
        if components > 1 {
            return Err(Error::Disconnected);
        }
        let slack =
            self.edges.iter().map(|e| e.len() as i64 - 1).sum::<i64>() - (self.v_size as i64 - 1);
        // Independent route, measured on the incidence graph itself:
        // edges minus spanning-forest edges.
        let cycle_space_dim = inc.edge_count() + components - inc.n();
        let class = match cycle_space_dim {
            0 => CycleClass::Tree,
            1 => CycleClass::Unicyclic,
            _ => CycleClass::Multicyclic,
        };
        Ok(CycleClassification {
            class,
            slack,
            cycle_space_dim,
        })
    }

    /// The kappa-sparsity condition for an `r`-uniform hypergraph: every
    /// `kappa` hyperedges together span at least `kappa(r-1) + 1` vertices
    /// (equivalently, no `kappa*r - kappa` vertices contain `kappa` edges).
    pub fn satisfies_sparsity(&self, kappa: usize, subset_budget: u64) -> Result<SparsityCheck> {
        let r = self.uniformity().ok_or(Error::NotUniform)?;
        if kappa == 0 {
            return Err(Error::InvalidInput("kappa must be at least 1".into()));
        }
        let m = self.edges.len();
        if m < kappa {
            return Ok(SparsityCheck {
                holds: true,
                violation: None,
            });
        }
        let subsets = binomial(m, kappa);
        if subsets > subset_budget as u128 {
            return Err(Error::BudgetExceeded {
                context: format!("checking all {kappa}-subsets of {m} edges"),
                limit: subset_budget,
            });
        }
        let need = kappa * (r - 1) + 1;
        let masks: Vec<u128> = self.edges.iter().map(|e| vertex_mask(e)).collect();
        for subset in (0..m).combinations(kappa) {
            let mut union: u128 = 0;
            for &i in &subset {
                union |= masks[i];
            }
            if (union.count_ones() as usize) < need {
                return Ok(SparsityCheck {
                    holds: false,
                    violation: Some(subset),
                });
            }
        }
        Ok(SparsityCheck {
            holds: true,
            violation: None,
        })
    }

    /// Property-test driver: Berge girth at least `kappa + 1` must imply
    /// the sparsity condition. Vacuously true when the hypothesis fails.
    pub fn girth_implies_sparsity(&self, kappa: usize, subset_budget: u64) -> Result<bool> {
        let girth_ok = self.berge_girth().is_none_or(|g| g > kappa);
        if !girth_ok {
            return Ok(true);
        }
        Ok(self.satisfies_sparsity(kappa, subset_budget)?.holds)
    }

    /// Removes all Berge cycles on at most `kappa` edges by re-wiring,
    /// preserving the edge count and the sparsity condition.
    ///
    /// While a short cycle exists it lies in a Berge-connected component
    /// with fewer than `kappa` edges (otherwise the condition would fail);
    /// a vertex shared by two adjacent cycle edges is removed from the
    /// first of them and replaced by the lowest-index vertex outside the
    /// component that keeps the condition intact.
    pub fn rewire(&self, kappa: usize, subset_budget: u64) -> Result<Hypergraph> {
        let check = self.satisfies_sparsity(kappa, subset_budget)?;
        if !check.holds {
            return Err(Error::ConditionViolated {
                kappa,
                edges: check.violation.unwrap_or_default(),
            });
        }
        let mut current = self.clone();
        let cap = self.edges.len() * self.v_size + 8;
        for _ in 0..cap {
            let Some(cycle) = current.shortest_berge_cycle() else {
                return Ok(current);
            };
            if cycle.edges.len() > kappa {
                return Ok(current);
            }
            let shared_vertex = cycle.vertices[0];
            let edit_edge = cycle.edges[0];

            // Component (in the incidence graph) containing the cycle.
            let m = current.edges.len();
            let inc = current.incidence_graph().to_graph();
            let comp = inc.component_of(edit_edge);
            let comp_edges: Vec<usize> = comp.iter().copied().filter(|&x| x < m).collect();
            let comp_vertices: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&x| x >= m)
                .map(|x| x - m)
                .collect();
            if comp_edges.len() >= kappa {
                // The sparsity condition rules this out.
                return Err(Error::ConditionViolated {
                    kappa,
                    edges: comp_edges,
                });
            }

            let mut in_comp = vec![false; current.v_size];
            for &v in &comp_vertices {
                in_comp[v] = true;
            }
            let mut rewired = None;
            let candidates: Vec<usize> = (0..current.v_size).filter(|&w| !in_comp[w]).collect();
            for w in candidates {
                let mut edges = current.edges.clone();
                let e = &mut edges[edit_edge];
                e.retain(|&v| v != shared_vertex);
                e.push(w);
                e.sort_unstable();
                let trial = Hypergraph {
                    v_size: current.v_size,
                    edges,
                };
                if trial.satisfies_sparsity(kappa, subset_budget)?.holds {
                    rewired = Some(trial);
                    break;
                }
            }
            current = rewired.ok_or(Error::NoOutsideVertex)?;
        }
        Err(Error::RewireDiverged)
    }
}

fn vertex_mask(edge: &[usize]) -> u128 {
    let mut m = 0u128;
    for &v in edge {
        assert!(v < 128, "sparsity checks support up to 128 vertices");
        m |= 1 << v;
    }
    m
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return acc;
        }
    }
    acc
}

/// The standard seven-line Fano triple system used across tests.
#[cfg(test)]
pub(crate) fn fano() -> Hypergraph {
    Hypergraph::new(
        7,
        vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_of_single_edge_is_star() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let inc = h.incidence_graph();
        assert_eq!(inc.a_size(), 1);
        assert_eq!(inc.b_size(), 3);
        assert_eq!(inc.left_degree(0), 3);
        assert_eq!(inc.girth(), None);
    }

    #[test]
    fn fano_incidence_graph_shape_and_girth() {
        let inc = fano().incidence_graph();
        assert_eq!((inc.a_size(), inc.b_size()), (7, 7));
        assert_eq!(inc.edge_count(), 21);
        assert_eq!(inc.girth(), Some(6));
    }

    #[test]
    fn round_trip_through_incidence() {
        let h = fano();
        assert_eq!(Hypergraph::from_bipartite(&h.incidence_graph()), h);

        let empty = Hypergraph::new(4, vec![]).unwrap();
        assert_eq!(Hypergraph::from_bipartite(&empty.incidence_graph()), empty);
    }

    #[test]
    fn left_regular_degree_two_gives_multigraph() {
        let g = BipartiteGraph::new(3, 3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let h = Hypergraph::from_bipartite(&g);
        assert_eq!(h.uniformity(), Some(2));
    }

    #[test]
    fn berge_girth_values() {
        assert_eq!(fano().berge_girth(), Some(3));

        let h = Hypergraph::new(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
        assert_eq!(h.berge_girth(), Some(3));

        let single = Hypergraph::new(5, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(single.berge_girth(), None);

        // A duplicated edge of size >= 2 is a Berge 2-cycle.
        let dup = Hypergraph::new(4, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert_eq!(dup.berge_girth(), Some(2));
    }

    #[test]
    fn shortest_berge_cycle_structure() {
        let h = Hypergraph::new(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
        let c = h.shortest_berge_cycle().unwrap();
        assert_eq!(c.edges.len(), 3);
        assert_eq!(c.vertices.len(), 3);
        // v_i lies in e_i and e_{i+1}, cyclically; all distinct
        let b = c.edges.len();
        for i in 0..b {
            let v = c.vertices[i];
            assert!(h.edges()[c.edges[i]].contains(&v));
            assert!(h.edges()[c.edges[(i + 1) % b]].contains(&v));
        }
        let mut edges = c.edges.clone();
        edges.dedup();
        assert_eq!(edges.len(), b);
    }

    #[test]
    fn incidence_of_disjoint_edges_is_disconnected() {
        let h = Hypergraph::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let inc = h.incidence_graph();
        assert_eq!((inc.a_size(), inc.b_size()), (2, 4));
        assert!(inc.to_graph().component_count() > 1);
    }

    #[test]
    fn berge_connectivity() {
        assert!(fano().is_berge_connected());

        let two = Hypergraph::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!(!two.is_berge_connected());

        let lonely = Hypergraph::new(1, vec![]).unwrap();
        assert!(lonely.is_berge_connected());

        // an isolated vertex disconnects an otherwise connected hypergraph
        let isolated = Hypergraph::new(4, vec![vec![0, 1, 2]]).unwrap();
        assert!(!isolated.is_berge_connected());
    }

    #[test]
    fn classification_examples() {
        let path = Hypergraph::new(5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let c = path.classify_cycles().unwrap();
        assert_eq!(c.class, CycleClass::Tree);
        assert_eq!(c.slack, 0);
        assert_eq!(c.cycle_space_dim, 0);

        let tri = Hypergraph::new(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
        let c = tri.classify_cycles().unwrap();
        assert_eq!(c.class, CycleClass::Unicyclic);
        assert_eq!(c.slack, 1);

        let c = fano().classify_cycles().unwrap();
        assert_eq!(c.class, CycleClass::Multicyclic);
        assert_eq!(c.slack, 8);
        assert_eq!(c.cycle_space_dim, 8);

        let disc = Hypergraph::new(6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert!(matches!(disc.classify_cycles(), Err(Error::Disconnected)));

        let tiny = Hypergraph::new(1, vec![]).unwrap();
        assert!(matches!(
            tiny.classify_cycles(),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn sparsity_on_fano() {
        let h = fano();
        assert!(h.satisfies_sparsity(2, 1 << 20).unwrap().holds);
        let c = h.satisfies_sparsity(3, 1 << 20).unwrap();
        assert!(!c.holds);
        // The violating triple spans at most 3*3-3 = 6 vertices.
        let viol = c.violation.unwrap();
        let mut union: Vec<usize> = viol.iter().flat_map(|&i| h.edges()[i].clone()).collect();
        union.sort_unstable();
        union.dedup();
        assert!(union.len() <= 6);
    }

    #[test]
    fn sparsity_trivial_below_kappa_edges() {
        let h = Hypergraph::new(5, vec![vec![0, 1, 2]]).unwrap();
        assert!(h.satisfies_sparsity(2, 1 << 20).unwrap().holds);
    }

    #[test]
    fn girth_implication_driver() {
        assert!(fano().girth_implies_sparsity(2, 1 << 20).unwrap());
        // 2-uniform 5-cycle, kappa = 4: girth 5 >= 5 and the condition holds.
        let c5 = Hypergraph::new(
            5,
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
        )
        .unwrap();
        assert_eq!(c5.berge_girth(), Some(5));
        assert!(c5.girth_implies_sparsity(4, 1 << 20).unwrap());
    }

    #[test]
    fn rewire_keeps_good_input_unchanged() {
        let h = Hypergraph::new(7, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        assert_eq!(h.rewire(3, 1 << 20).unwrap(), h);
    }

    #[test]
    fn rewire_breaks_duplicate_pair() {
        // {1,2,3} and {1,2,4} share two vertices: a Berge 2-cycle.
        let h = Hypergraph::new(7, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        let r = h.rewire(3, 1 << 20).unwrap();
        assert_eq!(r.edge_count(), 2);
        assert!(r.berge_girth().is_none_or(|g| g >= 4));
        assert!(r.satisfies_sparsity(3, 1 << 20).unwrap().holds);
        // Deterministic output.
        assert_eq!(h.rewire(3, 1 << 20).unwrap(), r);
    }

    #[test]
    fn rewire_rejects_condition_violation() {
        // Two identical triples violate the condition for kappa = 2:
        // they span 3 < 2*2+1 vertices.
        let h = Hypergraph::new(6, vec![vec![0, 1, 2], vec![0, 1, 2]]).unwrap();
        assert!(matches!(
            h.rewire(2, 1 << 20),
            Err(Error::ConditionViolated { .. })
        ));
    }
}
