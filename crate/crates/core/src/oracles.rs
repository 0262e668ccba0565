//! Adjacency oracles over the naturals, plus finite wrappers.
//!
//! An oracle answers pointwise relation queries about a fixed countable
//! structure. Everything downstream (difference enumeration, comparability
//! probing, sampling) is built from those single-pair queries, so a finite
//! wrapper behaves exactly like the infinite ones on its domain.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structures::{Graph, OrderedGraph, Structure, StructureKind, Tournament};
use crate::Nat;

/// Scan ceiling for difference enumeration when the caller does not pick one.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// Scan ceiling for comparability probing when the caller does not pick one.
pub const DEFAULT_PROBE: u64 = 1 << 21;

/// Oracle selector. Serializes with a `kind` tag so configs and reports can
/// name the oracle they were produced against.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OracleSpec {
    /// Graph on all naturals: `i < j` adjacent iff bit `i` of `j` is set.
    #[serde(rename = "rado")]
    Rado,
    /// Tournament on all naturals with arc directions drawn from a seeded
    /// pseudorandom bit per pair.
    #[serde(rename = "generic-tournament")]
    GenericTournament { seed: u64 },
    /// Graph interleaving the bit-rule graph on even ids with shadow
    /// vertices on odd ids whose neighborhoods are thinned copies.
    #[serde(rename = "layered-rado")]
    LayeredRado,
    /// A concrete finite structure, queried by its own vertex ids.
    #[serde(rename = "finite")]
    Finite { structure: Structure },
}

impl std::str::FromStr for OracleSpec {
    type Err = Error;

    /// Parses `kind[:seed]`. The finite kind needs a structure and cannot be
    /// built from a bare name.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, seed) = match s.split_once(':') {
            Some((k, v)) => (k, Some(v)),
            None => (s, None),
        };
        match (kind, seed) {
            ("rado", None) => Ok(OracleSpec::Rado),
            ("layered-rado", None) => Ok(OracleSpec::LayeredRado),
            ("generic-tournament", None) => Ok(OracleSpec::GenericTournament { seed: 0 }),
            ("generic-tournament", Some(v)) => {
                let seed = v
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad seed {v:?}")))?;
                Ok(OracleSpec::GenericTournament { seed })
            }
            _ => Err(Error::Parse(format!(
                "unknown oracle {s:?}; expected rado, layered-rado, or generic-tournament[:seed]"
            ))),
        }
    }
}

fn fold(x: Nat) -> u64 {
    (x as u64) ^ ((x >> 64) as u64)
}

/// Pair bit for the seeded tournament: a 64-bit mix of the seed with the
/// folded endpoints, finalized and reduced to parity.
pub fn prf(seed: u64, x: Nat, y: Nat) -> bool {
    let (mn, mx) = (x.min(y), x.max(y));
    let mut h = seed
        ^ fold(mn).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ fold(mx).rotate_left(17);
    h ^= h >> 30;
    h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^= h >> 31;
    h.count_ones() & 1 == 1
}

fn rado_adjacent(x: Nat, y: Nat) -> bool {
    if x == y {
        return false;
    }
    let (i, j) = (x.min(y), x.max(y));
    // Ids are 128-bit, so positions at or above 128 are never set.
    i < 128 && (j >> i) & 1 == 1
}

fn layered_adjacent(x: Nat, y: Nat) -> bool {
    if x == y {
        return false;
    }
    match (x & 1, y & 1) {
        // Base vertex 2k plays the role of k in the bit rule.
        (0, 0) => rado_adjacent(x >> 1, y >> 1),
        (1, 1) => false,
        _ => {
            let (shadow, base) = if x & 1 == 1 { (x, y) } else { (y, x) };
            let k = shadow >> 1;
            let m = base >> 1;
            // Shadow of 2k keeps only the even-half base neighbors of 2k, so
            // its neighborhood is a proper thinning of the base vertex's.
            m & 1 == 0 && rado_adjacent(m, k)
        }
    }
}

/// Verdict of a bounded comparability probe between two oracle vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparability {
    /// Evidence that the right neighborhood properly contains nothing the
    /// left misses: left sits below right.
    Less,
    Greater,
    Incomparable,
    /// The scan was too short to meet the evidence threshold either way.
    Unknown,
}

impl OracleSpec {
    pub fn kind(&self) -> StructureKind {
        match self {
            OracleSpec::Rado | OracleSpec::LayeredRado => StructureKind::Graph,
            OracleSpec::GenericTournament { .. } => StructureKind::Tournament,
            OracleSpec::Finite { structure } => structure.kind(),
        }
    }

    pub fn is_tournament(&self) -> bool {
        self.kind() == StructureKind::Tournament
    }

    /// Domain size, if the oracle is finite.
    pub fn domain(&self) -> Option<usize> {
        match self {
            OracleSpec::Finite { structure } => Some(structure.n()),
            _ => None,
        }
    }

    fn check_domain(&self, v: Nat) -> Result<()> {
        if let Some(n) = self.domain() {
            if v >= n as Nat {
                return Err(Error::OutOfRange(v as usize, n));
            }
        }
        Ok(())
    }

    /// Is `y` in the (out-)neighborhood of `x`? This is the primitive every
    /// scan is built on: symmetric adjacency for graph kinds, arc `x -> y`
    /// for tournaments.
    pub fn neighbor(&self, x: Nat, y: Nat) -> Result<bool> {
        self.check_domain(x)?;
        self.check_domain(y)?;
        Ok(match self {
            OracleSpec::Rado => rado_adjacent(x, y),
            OracleSpec::LayeredRado => layered_adjacent(x, y),
            OracleSpec::GenericTournament { seed } => {
                if x == y {
                    false
                } else {
                    // The pair bit orients min -> max when set.
                    prf(*seed, x, y) == (x < y)
                }
            }
            OracleSpec::Finite { structure } => match structure {
                Structure::Graph(g) => g.adjacent(x as usize, y as usize),
                Structure::OrderedGraph(o) => o.base().adjacent(x as usize, y as usize),
                Structure::Tournament(t) => t.arc(x as usize, y as usize),
            },
        })
    }

    /// Symmetric adjacency query. Rejected on tournament oracles, where
    /// `query_arc` is the honest question.
    pub fn query_edge(&self, x: Nat, y: Nat) -> Result<bool> {
        if self.is_tournament() {
            return Err(Error::KindMismatch {
                op: "query_edge",
                want: "graph oracle",
                got: "tournament",
            });
        }
        self.neighbor(x, y)
    }

    /// Arc query `x -> y`. Rejected on graph oracles.
    pub fn query_arc(&self, x: Nat, y: Nat) -> Result<bool> {
        if !self.is_tournament() {
            return Err(Error::KindMismatch {
                op: "query_arc",
                want: "tournament oracle",
                got: "graph",
            });
        }
        self.neighbor(x, y)
    }

    /// First `want` naturals lying in the neighborhood of `x` but not of
    /// `y`, in increasing order, never returning `x`, `y`, or anything in
    /// `exclude`. Scans ids below `budget` (clipped to the domain on finite
    /// oracles) and fails hard if the quota is not met in that window.
    pub fn enumerate_difference(
        &self,
        x: Nat,
        y: Nat,
        want: usize,
        exclude: &BTreeSet<Nat>,
        budget: u64,
    ) -> Result<Vec<Nat>> {
        self.check_domain(x)?;
        self.check_domain(y)?;
        let limit = match self.domain() {
            Some(n) => budget.min(n as u64),
            None => budget,
        };
        let mut out = Vec::with_capacity(want);
        for w in 0..limit as Nat {
            if out.len() == want {
                break;
            }
            if w == x || w == y || exclude.contains(&w) {
                continue;
            }
            if self.neighbor(x, w)? && !self.neighbor(y, w)? {
                out.push(w);
            }
        }
        if out.len() < want {
            return Err(Error::BudgetExhausted {
                budget,
                found: out.len(),
                want,
            });
        }
        Ok(out)
    }

    /// Bounded neighborhood-containment probe. Scanning ids below `probe`,
    /// let `a` count witnesses in the x-side difference and `b` in the
    /// y-side. A verdict needs the surviving side to clear `max(1, probe/8)`
    /// witnesses; anything thinner stays unknown rather than guessing.
    pub fn comparability(&self, x: Nat, y: Nat, probe: u64) -> Result<Comparability> {
        if self.is_tournament() {
            return Err(Error::KindMismatch {
                op: "comparability",
                want: "graph oracle",
                got: "tournament",
            });
        }
        self.check_domain(x)?;
        self.check_domain(y)?;
        if probe == 0 {
            return Ok(Comparability::Unknown);
        }
        let limit = match self.domain() {
            Some(n) => probe.min(n as u64),
            None => probe,
        };
        let threshold = (probe / 8).max(1) as usize;
        let (mut a, mut b) = (0usize, 0usize);
        for w in 0..limit as Nat {
            if w == x || w == y {
                continue;
            }
            let in_x = self.neighbor(x, w)?;
            let in_y = self.neighbor(y, w)?;
            match (in_x, in_y) {
                (true, false) => a += 1,
                (false, true) => b += 1,
                _ => {}
            }
        }
        Ok(match (a >= threshold, b >= threshold) {
            (true, true) => Comparability::Incomparable,
            (true, false) if b == 0 => Comparability::Less,
            (false, true) if a == 0 => Comparability::Greater,
            _ => Comparability::Unknown,
        })
    }

    /// Induced finite structure on the given oracle ids, reindexed densely in
    /// increasing id order. Returns the structure and the new -> old id map.
    ///
    /// Graph oracles yield a plain graph unless `probe` is given, in which
    /// case comparability verdicts between the sampled ids are attached as a
    /// strict order component (closed transitively; verdicts that cannot be
    /// completed to a strict order are a construction failure). A finite
    /// ordered-graph oracle keeps its real order instead.
    pub fn sample_structure(
        &self,
        ids: &BTreeSet<Nat>,
        probe: Option<u64>,
    ) -> Result<(Structure, Vec<Nat>)> {
        for &v in ids {
            self.check_domain(v)?;
        }
        if let OracleSpec::Finite { structure } = self {
            let dense: BTreeSet<usize> = ids.iter().map(|&v| v as usize).collect();
            let (sub, map) = structure.induced(&dense)?;
            return Ok((sub, map.into_iter().map(|v| v as Nat).collect()));
        }
        let map: Vec<Nat> = ids.iter().copied().collect();
        let n = map.len();
        if self.is_tournament() {
            let mut arcs = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if self.neighbor(map[i], map[j])? {
                        arcs.push((i, j));
                    } else {
                        arcs.push((j, i));
                    }
                }
            }
            return Ok((Structure::Tournament(Tournament::new(n, arcs)?), map));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.neighbor(map[i], map[j])? {
                    edges.push((i, j));
                }
            }
        }
        let graph = Graph::new(n, edges)?;
        let Some(probe) = probe else {
            return Ok((Structure::Graph(graph), map));
        };
        let mut below = BTreeSet::new();
        for i in 0..n {
            for j in (i + 1)..n {
                match self.comparability(map[i], map[j], probe)? {
                    Comparability::Less => {
                        below.insert((i, j));
                    }
                    Comparability::Greater => {
                        below.insert((j, i));
                    }
                    Comparability::Incomparable | Comparability::Unknown => {}
                }
            }
        }
        let closed = transitive_closure(n, &below);
        for &(i, j) in &closed {
            if closed.contains(&(j, i)) {
                return Err(Error::Construction(format!(
                    "probe verdicts are not a strict order: {} and {} each sit below the other",
                    map[i], map[j]
                )));
            }
        }
        let ordered = OrderedGraph::new(graph, closed)?;
        Ok((Structure::OrderedGraph(ordered), map))
    }
}

/// Transitive closure of a relation on `0..n`, as pairs.
pub fn transitive_closure(n: usize, pairs: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in pairs {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r && i != j {
                out.insert((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rado_small_edges() {
        let o = OracleSpec::Rado;
        assert!(o.query_edge(0, 1).unwrap());
        assert!(!o.query_edge(0, 2).unwrap());
        assert!(o.query_edge(2, 4).unwrap());
        assert!(!o.query_edge(3, 3).unwrap());
        // Symmetric regardless of argument order.
        assert_eq!(o.query_edge(1, 0).unwrap(), o.query_edge(0, 1).unwrap());
    }

    #[test]
    fn rado_first_difference_witnesses() {
        let o = OracleSpec::Rado;
        let got = o
            .enumerate_difference(0, 1, 3, &BTreeSet::new(), DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(got, vec![5, 9, 13]);
    }

    #[test]
    fn difference_honors_exclusions_and_budget() {
        let o = OracleSpec::Rado;
        let got = o
            .enumerate_difference(0, 1, 2, &BTreeSet::from([5]), DEFAULT_BUDGET)
            .unwrap();
        assert_eq!(got, vec![9, 13]);
        let err = o
            .enumerate_difference(0, 1, 3, &BTreeSet::new(), 6)
            .unwrap_err();
        match err {
            Error::BudgetExhausted { found, want, .. } => {
                assert_eq!((found, want), (1, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn layered_shadow_rules() {
        let o = OracleSpec::LayeredRado;
        // Shadow of 0 has an empty neighborhood.
        for w in 0..256u128 {
            assert!(!o.query_edge(1, w).unwrap(), "1 ~ {w}");
        }
        for k in 0..40u128 {
            let base = 2 * k;
            let shadow = base + 1;
            assert!(!o.query_edge(base, shadow).unwrap());
            for w in 0..256u128 {
                if w == base || w == shadow {
                    continue;
                }
                // Shadow neighborhoods never leave the base neighborhood.
                if o.query_edge(shadow, w).unwrap() {
                    assert!(o.query_edge(base, w).unwrap(), "shadow {shadow} ~ {w}");
                    assert_eq!(w & 1, 0);
                    assert_eq!((w >> 1) & 1, 0);
                }
            }
        }
        assert!(!o.query_edge(3, 5).unwrap());
        assert!(!o.query_edge(1, 7).unwrap());
    }

    #[test]
    fn layered_base_pair_sits_below_its_shadow() {
        let o = OracleSpec::LayeredRado;
        for k in [0u128, 1, 2, 5] {
            let c = o.comparability(2 * k, 2 * k + 1, 64).unwrap();
            assert_eq!(c, Comparability::Less, "pair ({}, {})", 2 * k, 2 * k + 1);
        }
        assert_eq!(
            o.comparability(0, 1, 0).unwrap(),
            Comparability::Unknown
        );
    }

    #[test]
    fn rado_pairs_probe_incomparable() {
        let o = OracleSpec::Rado;
        for (x, y) in [(0u128, 1u128), (7, 9), (3, 20)] {
            assert_eq!(
                o.comparability(x, y, 1 << 12).unwrap(),
                Comparability::Incomparable
            );
        }
    }

    #[test]
    fn tournament_orientation_total_and_seeded() {
        let a = OracleSpec::GenericTournament { seed: 0 };
        let b = OracleSpec::GenericTournament { seed: 1 };
        let mut diverged = false;
        for x in 0..30u128 {
            for y in 0..30u128 {
                if x == y {
                    assert!(!a.query_arc(x, y).unwrap());
                    continue;
                }
                assert_ne!(a.query_arc(x, y).unwrap(), a.query_arc(y, x).unwrap());
                if a.query_arc(x, y).unwrap() != b.query_arc(x, y).unwrap() {
                    diverged = true;
                }
            }
        }
        assert!(diverged, "seeds 0 and 1 agree on every pair below 30");
    }

    #[test]
    fn kind_mismatch_is_rejected() {
        let t = OracleSpec::GenericTournament { seed: 0 };
        assert!(matches!(
            t.query_edge(0, 1),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            t.comparability(0, 1, 64),
            Err(Error::KindMismatch { .. })
        ));
        assert!(matches!(
            OracleSpec::Rado.query_arc(0, 1),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn sample_rado_triangle_free_triple() {
        let (s, map) = OracleSpec::Rado
            .sample_structure(&BTreeSet::from([0, 1, 2]), None)
            .unwrap();
        assert_eq!(map, vec![0, 1, 2]);
        match s {
            Structure::Graph(g) => {
                assert_eq!(
                    g.edges().iter().copied().collect::<Vec<_>>(),
                    vec![(0, 1), (1, 2)]
                );
            }
            _ => panic!("kind"),
        }
    }

    #[test]
    fn sample_layered_with_probe_reports_order() {
        let (s, map) = OracleSpec::LayeredRado
            .sample_structure(&BTreeSet::from([0, 1, 2]), Some(256))
            .unwrap();
        assert_eq!(map, vec![0, 1, 2]);
        match s {
            Structure::OrderedGraph(o) => {
                assert!(o.lt(0, 1));
                assert!(!o.lt(1, 0));
                assert!(o.validate().is_none());
            }
            _ => panic!("kind"),
        }
    }

    #[test]
    fn finite_oracle_respects_domain() {
        let t = Tournament::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let o = OracleSpec::Finite {
            structure: Structure::Tournament(t),
        };
        assert!(o.query_arc(0, 1).unwrap());
        assert!(!o.query_arc(1, 0).unwrap());
        assert!(matches!(o.query_arc(0, 3), Err(Error::OutOfRange(3, 3))));
        // The scan clips to the domain and reports a shortfall.
        let err = o
            .enumerate_difference(0, 1, 5, &BTreeSet::new(), DEFAULT_BUDGET)
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { .. }));
    }

    #[test]
    fn oracle_spec_json_tags() {
        let j = serde_json::to_string(&OracleSpec::GenericTournament { seed: 7 }).unwrap();
        assert_eq!(j, r#"{"kind":"generic-tournament","seed":7}"#);
        let back: OracleSpec = serde_json::from_str(r#"{"kind":"rado"}"#).unwrap();
        assert_eq!(back, OracleSpec::Rado);
        let s: OracleSpec = "generic-tournament:9".parse().unwrap();
        assert_eq!(s, OracleSpec::GenericTournament { seed: 9 });
        assert!("finite".parse::<OracleSpec>().is_err());
    }
}
