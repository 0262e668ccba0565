//! Finite binary relational structures: graphs, tournaments, ordered graphs.
//!
//! Vertices are dense indices `0..n`. Oracle-world identities are carried in
//! relabeling maps next to the structures, never inside them, so equal
//! structures serialize byte-identically.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite simple graph. Edges are stored normalized with the smaller
/// endpoint first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

/// A finite tournament. Each unordered pair is stored once, as the arc that
/// actually holds; the reverse is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    arcs: BTreeSet<(usize, usize)>,
}

/// A graph together with a strict partial order on its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    base: Graph,
    order: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StructureKind {
    #[serde(rename = "graph")]
    Graph,
    #[serde(rename = "tournament")]
    Tournament,
    #[serde(rename = "ordered-graph")]
    OrderedGraph,
}

impl std::fmt::Display for StructureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StructureKind::Graph => "graph",
            StructureKind::Tournament => "tournament",
            StructureKind::OrderedGraph => "ordered-graph",
        };
        f.write_str(s)
    }
}

/// A named invariant violation with a witness, returned by `validate` as a
/// value rather than an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: String,
    pub witness: String,
}

impl Violation {
    fn new(invariant: &str, witness: String) -> Self {
        Violation {
            invariant: invariant.to_string(),
            witness,
        }
    }
}

impl Graph {
    /// Builds a graph, normalizing edge endpoints. Out-of-range endpoints are
    /// rejected; loops are representable and reported by `validate`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n {
                return Err(Error::OutOfRange(a, n));
            }
            if b >= n {
                return Err(Error::OutOfRange(b, n));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Graph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        self.edges.contains(&(x.min(y), x.max(y)))
    }

    pub fn neighbors(&self, x: usize) -> Result<BTreeSet<usize>> {
        if x >= self.n {
            return Err(Error::OutOfRange(x, self.n));
        }
        Ok((0..self.n)
            .filter(|&y| y != x && self.adjacent(x, y))
            .collect())
    }

    pub fn validate(&self) -> Option<Violation> {
        for &(a, b) in &self.edges {
            if a == b {
                return Some(Violation::new("irreflexive", format!("loop at {a}")));
            }
            if b >= self.n {
                return Some(Violation::new("endpoints in range", format!("({a},{b})")));
            }
        }
        None
    }
}

impl Tournament {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in arcs {
            if a >= n {
                return Err(Error::OutOfRange(a, n));
            }
            if b >= n {
                return Err(Error::OutOfRange(b, n));
            }
            set.insert((a, b));
        }
        Ok(Tournament { n, arcs: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &BTreeSet<(usize, usize)> {
        &self.arcs
    }

    /// Is there an arc x -> y?
    pub fn arc(&self, x: usize, y: usize) -> bool {
        self.arcs.contains(&(x, y))
    }

    pub fn outneighbors(&self, x: usize) -> Result<BTreeSet<usize>> {
        if x >= self.n {
            return Err(Error::OutOfRange(x, self.n));
        }
        Ok((0..self.n).filter(|&y| self.arc(x, y)).collect())
    }

    pub fn validate(&self) -> Option<Violation> {
        for &(a, b) in &self.arcs {
            if a == b {
                return Some(Violation::new("irreflexive", format!("loop at {a}")));
            }
        }
        for x in 0..self.n {
            for y in (x + 1)..self.n {
                match (self.arc(x, y), self.arc(y, x)) {
                    (true, true) => {
                        return Some(Violation::new(
                            "exactly one arc per pair",
                            format!("both directions on {{{x},{y}}}"),
                        ))
                    }
                    (false, false) => {
                        return Some(Violation::new(
                            "exactly one arc per pair",
                            format!("no arc on {{{x},{y}}}"),
                        ))
                    }
                    _ => {}
                }
            }
        }
        None
    }
}

impl OrderedGraph {
    pub fn new(base: Graph, order: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = base.n();
        let mut set = BTreeSet::new();
        for (a, b) in order {
            if a >= n {
                return Err(Error::OutOfRange(a, n));
            }
            if b >= n {
                return Err(Error::OutOfRange(b, n));
            }
            set.insert((a, b));
        }
        Ok(OrderedGraph { base, order: set })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn order(&self) -> &BTreeSet<(usize, usize)> {
        &self.order
    }

    /// Is x strictly below y?
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.order.contains(&(x, y))
    }

    pub fn validate(&self) -> Option<Violation> {
        if let Some(v) = self.base.validate() {
            return Some(v);
        }
        for &(a, b) in &self.order {
            if a == b {
                return Some(Violation::new("order irreflexive", format!("({a},{a})")));
            }
            if self.order.contains(&(b, a)) {
                return Some(Violation::new(
                    "order antisymmetric",
                    format!("both ({a},{b}) and ({b},{a})"),
                ));
            }
        }
        for &(a, b) in &self.order {
            for &(c, d) in self.order.range((b, 0)..(b + 1, 0)) {
                debug_assert_eq!(c, b);
                if !self.order.contains(&(a, d)) {
                    return Some(Violation::new(
                        "order transitive",
                        format!("({a},{b}),({b},{d}) but not ({a},{d})"),
                    ));
                }
            }
        }
        None
    }
}

/// Any of the three structure kinds, as one serializable value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawStructure", into = "RawStructure")]
pub enum Structure {
    Graph(Graph),
    Tournament(Tournament),
    OrderedGraph(OrderedGraph),
}

#[derive(Serialize, Deserialize)]
struct RawStructure {
    kind: StructureKind,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    arcs: Option<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Vec<(usize, usize)>>,
}

impl TryFrom<RawStructure> for Structure {
    type Error = Error;

    fn try_from(raw: RawStructure) -> Result<Self> {
        match raw.kind {
            StructureKind::Graph => Ok(Structure::Graph(Graph::new(
                raw.n,
                raw.edges.unwrap_or_default(),
            )?)),
            StructureKind::Tournament => Ok(Structure::Tournament(Tournament::new(
                raw.n,
                raw.arcs.unwrap_or_default(),
            )?)),
            StructureKind::OrderedGraph => {
                let base = Graph::new(raw.n, raw.edges.unwrap_or_default())?;
                Ok(Structure::OrderedGraph(OrderedGraph::new(
                    base,
                    raw.order.unwrap_or_default(),
                )?))
            }
        }
    }
}

impl From<Structure> for RawStructure {
    fn from(s: Structure) -> Self {
        match s {
            Structure::Graph(g) => RawStructure {
                kind: StructureKind::Graph,
                n: g.n,
                edges: Some(g.edges.iter().copied().collect()),
                arcs: None,
                order: None,
            },
            Structure::Tournament(t) => RawStructure {
                kind: StructureKind::Tournament,
                n: t.n,
                edges: None,
                arcs: Some(t.arcs.iter().copied().collect()),
                order: None,
            },
            Structure::OrderedGraph(o) => RawStructure {
                kind: StructureKind::OrderedGraph,
                n: o.base.n,
                edges: Some(o.base.edges.iter().copied().collect()),
                arcs: None,
                order: Some(o.order.iter().copied().collect()),
            },
        }
    }
}

impl Structure {
    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::Graph(_) => StructureKind::Graph,
            Structure::Tournament(_) => StructureKind::Tournament,
            Structure::OrderedGraph(_) => StructureKind::OrderedGraph,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Structure::Graph(g) => g.n(),
            Structure::Tournament(t) => t.n(),
            Structure::OrderedGraph(o) => o.n(),
        }
    }

    pub fn validate(&self) -> Option<Violation> {
        match self {
            Structure::Graph(g) => g.validate(),
            Structure::Tournament(t) => t.validate(),
            Structure::OrderedGraph(o) => o.validate(),
        }
    }

    /// Code of the ordered pair (x, y), packing every binary relation the
    /// kind carries. Graph: adjacency bit. Tournament: 1 if x -> y else 2.
    /// Ordered graph: adjacency bit, plus order in bits 1-2
    /// (1 = x below y, 2 = y below x, 0 = incomparable).
    pub fn pair_code(&self, x: usize, y: usize) -> u8 {
        match self {
            Structure::Graph(g) => u8::from(g.adjacent(x, y)),
            Structure::Tournament(t) => {
                if t.arc(x, y) {
                    1
                } else if t.arc(y, x) {
                    2
                } else {
                    0
                }
            }
            Structure::OrderedGraph(o) => {
                let adj = u8::from(o.base().adjacent(x, y));
                let ord = if o.lt(x, y) {
                    1
                } else if o.lt(y, x) {
                    2
                } else {
                    0
                };
                adj | (ord << 1)
            }
        }
    }

    /// Induced substructure on `s`, reindexed `0..s.len()` in increasing
    /// original order. Returns the structure and the new -> old map.
    pub fn induced(&self, s: &BTreeSet<usize>) -> Result<(Structure, Vec<usize>)> {
        let n = self.n();
        if let Some(&bad) = s.iter().find(|&&v| v >= n) {
            return Err(Error::OutOfRange(bad, n));
        }
        let map: Vec<usize> = s.iter().copied().collect();
        let pos = |v: usize| map.binary_search(&v).expect("member of s");
        let result = match self {
            Structure::Graph(g) => {
                let edges = g
                    .edges
                    .iter()
                    .filter(|(a, b)| s.contains(a) && s.contains(b))
                    .map(|&(a, b)| (pos(a), pos(b)));
                Structure::Graph(Graph::new(map.len(), edges)?)
            }
            Structure::Tournament(t) => {
                let arcs = t
                    .arcs
                    .iter()
                    .filter(|(a, b)| s.contains(a) && s.contains(b))
                    .map(|&(a, b)| (pos(a), pos(b)));
                Structure::Tournament(Tournament::new(map.len(), arcs)?)
            }
            Structure::OrderedGraph(o) => {
                let edges = o
                    .base
                    .edges
                    .iter()
                    .filter(|(a, b)| s.contains(a) && s.contains(b))
                    .map(|&(a, b)| (pos(a), pos(b)));
                let base = Graph::new(map.len(), edges)?;
                let order = o
                    .order
                    .iter()
                    .filter(|(a, b)| s.contains(a) && s.contains(b))
                    .map(|&(a, b)| (pos(a), pos(b)));
                Structure::OrderedGraph(OrderedGraph::new(base, order)?)
            }
        };
        Ok((result, map))
    }
}

/// Default vertex cap for the exhaustive isomorphism search.
pub const ISO_CAP: usize = 12;

/// Searches for a relation-preserving bijection between two structures of the
/// same kind. Complete backtracking over vertex maps, pruned by pair-code
/// degree profiles; intended for small structures.
pub fn are_isomorphic(a: &Structure, b: &Structure, cap: usize) -> Result<Option<Vec<usize>>> {
    if a.kind() != b.kind() {
        return Err(Error::KindMismatch {
            op: "are_isomorphic",
            want: "matching structure",
            got: "mismatched kinds",
        });
    }
    if a.n() != b.n() {
        return Ok(None);
    }
    let n = a.n();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "isomorphism search on {n} vertices exceeds cap {cap}"
        )));
    }
    // Invariant per vertex: count of each pair code toward all others.
    let profile = |s: &Structure, v: usize| {
        let mut counts = [0usize; 8];
        for w in 0..n {
            if w != v {
                counts[s.pair_code(v, w) as usize] += 1;
            }
        }
        counts
    };
    let pa: Vec<_> = (0..n).map(|v| profile(a, v)).collect();
    let pb: Vec<_> = (0..n).map(|v| profile(b, v)).collect();
    {
        let mut sa = pa.clone();
        let mut sb = pb.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return Ok(None);
        }
    }

    let mut image: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    fn assign(
        a: &Structure,
        b: &Structure,
        pa: &[[usize; 8]],
        pb: &[[usize; 8]],
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        v: usize,
    ) -> bool {
        let n = a.n();
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] || pa[v] != pb[w] {
                continue;
            }
            let ok = (0..v).all(|u| {
                let iu = image[u].expect("assigned");
                a.pair_code(u, v) == b.pair_code(iu, w)
            });
            if ok {
                image[v] = Some(w);
                used[w] = true;
                if assign(a, b, pa, pb, image, used, v + 1) {
                    return true;
                }
                image[v] = None;
                used[w] = false;
            }
        }
        false
    }
    if assign(a, b, &pa, &pb, &mut image, &mut used, 0) {
        Ok(Some(image.into_iter().map(|x| x.expect("total")).collect()))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Structure {
        Structure::Graph(Graph::new(3, [(0, 1), (1, 2)]).unwrap())
    }

    #[test]
    fn tournament_validation() {
        let ok = Tournament::new(2, [(0, 1)]).unwrap();
        assert!(ok.validate().is_none());
        let bad = Tournament::new(2, [(0, 1), (1, 0)]).unwrap();
        let v = bad.validate().unwrap();
        assert!(v.witness.contains("both directions"));
    }

    #[test]
    fn order_transitivity_checked() {
        let base = Graph::new(3, []).unwrap();
        let o = OrderedGraph::new(base.clone(), [(0, 1), (1, 2)]).unwrap();
        let v = o.validate().unwrap();
        assert_eq!(v.invariant, "order transitive");
        let full = OrderedGraph::new(base, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(full.validate().is_none());
    }

    #[test]
    fn induced_path_endpoints() {
        let (sub, map) = path3().induced(&BTreeSet::from([0, 2])).unwrap();
        assert_eq!(map, vec![0, 2]);
        match sub {
            Structure::Graph(g) => assert!(g.edges().is_empty()),
            _ => panic!("kind"),
        }
    }

    #[test]
    fn induced_full_is_identity() {
        let s = path3();
        let (sub, map) = s.induced(&BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(sub, s);
        assert_eq!(map, vec![0, 1, 2]);
    }

    #[test]
    fn induced_tournament_restricts_arcs() {
        let t = Structure::Tournament(Tournament::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap());
        let (sub, _) = t.induced(&BTreeSet::from([0, 1])).unwrap();
        match sub {
            Structure::Tournament(t) => assert!(t.arc(0, 1)),
            _ => panic!("kind"),
        }
    }

    #[test]
    fn neighbors_of_path_center() {
        match path3() {
            Structure::Graph(g) => {
                assert_eq!(g.neighbors(1).unwrap(), BTreeSet::from([0, 2]));
                assert!(g.neighbors(3).is_err());
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn iso_three_cycles() {
        let a = Structure::Tournament(Tournament::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap());
        let b = Structure::Tournament(Tournament::new(3, [(1, 0), (0, 2), (2, 1)]).unwrap());
        let f = are_isomorphic(&a, &b, ISO_CAP).unwrap().unwrap();
        for x in 0..3 {
            for y in 0..3 {
                if x != y {
                    assert_eq!(a.pair_code(x, y), b.pair_code(f[x], f[y]));
                }
            }
        }
    }

    #[test]
    fn iso_cycle_vs_transitive() {
        let cyc = Structure::Tournament(Tournament::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap());
        let tr = Structure::Tournament(Tournament::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
        assert!(are_isomorphic(&cyc, &tr, ISO_CAP).unwrap().is_none());
    }

    #[test]
    fn iso_self_identity_exists() {
        let s = path3();
        assert!(are_isomorphic(&s, &s, ISO_CAP).unwrap().is_some());
    }

    #[test]
    fn json_round_trip_canonical() {
        let s = Structure::OrderedGraph(
            OrderedGraph::new(Graph::new(3, [(1, 2), (0, 1)]).unwrap(), [(0, 2)]).unwrap(),
        );
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"kind":"ordered-graph","n":3,"edges":[[0,1],[1,2]],"order":[[0,2]]}"#
        );
        let back: Structure = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
