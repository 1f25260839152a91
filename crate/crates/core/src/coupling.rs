//! Coupling graphs on locations `0..n` and their automorphism groups.
//!
//! Stars put the center at location 0; bicliques put the small side first;
//! cycles run `0, 1, …, n−1` in ring order. Star and biclique groups are
//! products of symmetric groups on location blocks and are never enumerated
//! unless small.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bigmath::factorial;
use crate::perm::{compose, Permutation, Transposition};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cycle,
    Star,
    /// Complete bipartite graph with `m` locations on the first side.
    Biclique {
        m: usize,
    },
    General,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cycle => write!(f, "cycle"),
            Family::Star => write!(f, "star"),
            Family::Biclique { m } => write!(f, "biclique:{m}"),
            Family::General => write!(f, "general"),
        }
    }
}

/// Limits on automorphism-group enumeration.
#[derive(Clone, Copy, Debug)]
pub struct AutCaps {
    pub max_general_n: usize,
    pub max_elements: usize,
}

impl Default for AutCaps {
    fn default() -> Self {
        AutCaps {
            max_general_n: 10,
            max_elements: 50_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CouplingGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    family: Family,
    edge_index: Vec<usize>,
}

const NO_EDGE: usize = usize::MAX;

impl CouplingGraph {
    /// Builds a simple connected graph; edges are normalized and sorted.
    pub fn new(n: usize, edges: &[(usize, usize)], family: Family) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidCoupling(format!("need at least 2 locations, got {n}")));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::InvalidCoupling(format!(
                    "bad edge ({}, {}) on {n} locations",
                    u + 1,
                    v + 1
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut edge_index = vec![NO_EDGE; n * n];
        for (i, &(u, v)) in norm.iter().enumerate() {
            edge_index[u * n + v] = i;
            edge_index[v * n + u] = i;
        }
        let g = CouplingGraph {
            n,
            edges: norm,
            family,
            edge_index,
        };
        if !g.is_connected() {
            return Err(Error::InvalidCoupling("graph is disconnected".into()));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        match self.edge_index[u * self.n + v] {
            NO_EDGE => None,
            i => Some(i),
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index[u * self.n + v] != NO_EDGE
    }

    /// One transposition per edge, in edge order.
    pub fn transpositions(&self) -> Vec<Transposition> {
        self.edges
            .iter()
            .map(|&(u, v)| Transposition::new(u, v).expect("simple graph"))
            .collect()
    }

    pub fn degree(&self, u: usize) -> usize {
        (0..self.n).filter(|&v| self.has_edge(u, v)).count()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for (v, s) in seen.iter_mut().enumerate() {
                if !*s && self.has_edge(u, v) {
                    *s = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True when `b` maps edges onto edges.
    pub fn preserves_edges(&self, b: &Permutation) -> bool {
        b.len() == self.n && self.edges.iter().all(|&(u, v)| self.has_edge(b.apply(u), b.apply(v)))
    }
}

/// Automorphism group of a coupling graph.
#[derive(Clone, Debug)]
pub struct AutGroup {
    order: BigUint,
    generators: Vec<Permutation>,
    elements: Option<Vec<Permutation>>,
    /// For star and biclique: the group is the full symmetric group on each
    /// block of locations.
    blocks: Option<Vec<Vec<usize>>>,
}

impl AutGroup {
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted, when the order is within the enumeration cap.
    pub fn elements(&self) -> Option<&[Permutation]> {
        self.elements.as_deref()
    }

    pub fn blocks(&self) -> Option<&[Vec<usize>]> {
        self.blocks.as_deref()
    }
}

/// A coupling graph together with its automorphism group.
#[derive(Clone, Debug)]
pub struct Coupling {
    pub graph: CouplingGraph,
    pub aut: AutGroup,
}

impl Coupling {
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidCoupling(format!("cycle needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let graph = CouplingGraph::new(n, &edges, Family::Cycle)?;
        let rotation = Permutation::from_vec_unchecked((0..n).map(|i| (i + 1) % n).collect());
        let reflection = Permutation::from_vec_unchecked((0..n).map(|i| (n - i) % n).collect());
        let mut elements: Vec<Permutation> = (0..n)
            .flat_map(|k| {
                [
                    Permutation::from_vec_unchecked((0..n).map(|i| (i + k) % n).collect()),
                    Permutation::from_vec_unchecked((0..n).map(|i| (k + n - i) % n).collect()),
                ]
            })
            .collect();
        elements.sort();
        elements.dedup();
        let aut = AutGroup {
            order: BigUint::from(elements.len()),
            generators: vec![rotation, reflection],
            elements: Some(elements),
            blocks: None,
        };
        Self::checked(graph, aut)
    }

    /// `K_{1,n−1}` with the center at location 0.
    pub fn star(n: usize) -> Result<Self> {
        Self::star_with_caps(n, AutCaps::default())
    }

    pub fn star_with_caps(n: usize, caps: AutCaps) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidCoupling(format!(
                "star needs at least 2 leaves, got n = {n}"
            )));
        }
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        let graph = CouplingGraph::new(n, &edges, Family::Star)?;
        let aut = block_group(n, vec![vec![0], (1..n).collect()], caps);
        Self::checked(graph, aut)
    }

    /// `K_{m,k}` with `m < k`; the first `m` locations form the small side.
    pub fn biclique(m: usize, k: usize) -> Result<Self> {
        Self::biclique_with_caps(m, k, AutCaps::default())
    }

    pub fn biclique_with_caps(m: usize, k: usize, caps: AutCaps) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::InvalidCoupling("biclique sides must be non-empty".into()));
        }
        if m == k {
            return Err(Error::InvalidCoupling(format!(
                "biclique with equal sides {m} = {k} has extra automorphisms and is not supported"
            )));
        }
        if m > k {
            return Err(Error::InvalidCoupling(format!(
                "biclique small side must come first, got {m} > {k}"
            )));
        }
        let n = m + k;
        let edges: Vec<_> = (0..m).cartesian_product(m..n).collect();
        let graph = CouplingGraph::new(n, &edges, Family::Biclique { m })?;
        let aut = block_group(n, vec![(0..m).collect(), (m..n).collect()], caps);
        Self::checked(graph, aut)
    }

    /// Arbitrary connected graph; the automorphism group is enumerated.
    pub fn general(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::general_with_caps(n, edges, AutCaps::default())
    }

    pub fn general_with_caps(n: usize, edges: &[(usize, usize)], caps: AutCaps) -> Result<Self> {
        if n > caps.max_general_n {
            return Err(Error::Cap(format!(
                "general coupling graphs are limited to n <= {}, got {n}",
                caps.max_general_n
            )));
        }
        let graph = CouplingGraph::new(n, edges, Family::General)?;
        let elements = enumerate_automorphisms(&graph, caps.max_elements)?;
        let aut = AutGroup {
            order: BigUint::from(elements.len()),
            generators: elements.iter().filter(|e| !e.is_identity()).cloned().collect(),
            elements: Some(elements),
            blocks: None,
        };
        Self::checked(graph, aut)
    }

    /// Parses a 1-based edge list, one `u v` pair per line; `#` starts a comment.
    pub fn parse_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("bad edge line: {e}"),
                })?;
            match nums.as_slice() {
                &[u, v] if u >= 1 && v >= 1 => {
                    n = n.max(u).max(v);
                    edges.push((u - 1, v - 1));
                }
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: "expected two 1-based location ids".into(),
                    })
                }
            }
        }
        Ok((n, edges))
    }

    /// Resolves `cycle`, `star`, `biclique:M` or `file:PATH` for `n` locations.
    pub fn from_descriptor(desc: &str, n: usize, caps: AutCaps) -> Result<Self> {
        let desc = desc.trim();
        if let Some(path) = desc.strip_prefix("file:") {
            let text = std::fs::read_to_string(Path::new(path))?;
            let (file_n, edges) = Self::parse_edge_list(&text)?;
            if file_n != n {
                return Err(Error::InvalidCoupling(format!(
                    "edge list covers {file_n} locations but the circuit has {n} qubits"
                )));
            }
            return Self::general_with_caps(n, &edges, caps);
        }
        if let Some(m) = desc.strip_prefix("biclique:") {
            let m: usize = m
                .parse()
                .map_err(|_| Error::InvalidCoupling(format!("bad biclique side {m:?}")))?;
            if m >= n {
                return Err(Error::InvalidCoupling(format!("biclique side {m} >= n = {n}")));
            }
            return Self::biclique_with_caps(m, n - m, caps);
        }
        match desc {
            "cycle" => Self::cycle(n),
            "star" => Self::star_with_caps(n, caps),
            other => Err(Error::InvalidCoupling(format!("unknown coupling descriptor {other:?}"))),
        }
    }

    fn checked(graph: CouplingGraph, aut: AutGroup) -> Result<Self> {
        if let Some(g) = aut.generators.iter().find(|g| !graph.preserves_edges(g)) {
            return Err(Error::InvalidCoupling(format!(
                "generator {} is not an automorphism",
                g.cycle_notation()
            )));
        }
        Ok(Coupling { graph, aut })
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn family(&self) -> Family {
        self.graph.family
    }

    /// Smallest element of the left coset `tau · Aut` and a witness `b` with
    /// `canonical = tau ∘ b⁻¹`.
    pub fn canonical_right(&self, tau: &Permutation) -> (Permutation, Permutation) {
        if let Some(blocks) = &self.aut.blocks {
            let mut out = tau.as_slice().to_vec();
            for block in blocks {
                let mut values: Vec<usize> = block.iter().map(|&x| tau.apply(x)).collect();
                values.sort_unstable();
                for (&x, v) in block.iter().zip(values) {
                    out[x] = v;
                }
            }
            let canon = Permutation::from_vec_unchecked(out);
            let b = compose(&canon.inverse(), tau).expect("same degree");
            return (canon, b);
        }
        let elements = self.aut.elements.as_ref().expect("non-block groups are enumerated");
        let (canon, e) = elements
            .iter()
            .map(|e| (compose(tau, e).expect("same degree"), e))
            .min_by(|x, y| x.0.cmp(&y.0))
            .expect("group is non-empty");
        (canon, e.inverse())
    }
}

fn block_group(n: usize, blocks: Vec<Vec<usize>>, caps: AutCaps) -> AutGroup {
    let order = blocks.iter().map(|b| factorial(b.len())).product::<BigUint>();
    let mut generators = Vec::new();
    for block in blocks.iter().filter(|b| b.len() >= 2) {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(block[0], block[1]);
        generators.push(Permutation::from_vec_unchecked(v));
        if block.len() >= 3 {
            let mut v: Vec<usize> = (0..n).collect();
            for (i, &x) in block.iter().enumerate() {
                v[x] = block[(i + 1) % block.len()];
            }
            generators.push(Permutation::from_vec_unchecked(v));
        }
    }
    let elements = match order.to_usize() {
        Some(k) if k <= caps.max_elements => Some(enumerate_block_group(n, &blocks)),
        _ => None,
    };
    AutGroup {
        order,
        generators,
        elements,
        blocks: Some(blocks),
    }
}

fn enumerate_block_group(n: usize, blocks: &[Vec<usize>]) -> Vec<Permutation> {
    let mut out = vec![(0..n).collect::<Vec<usize>>()];
    for block in blocks {
        let mut next = Vec::new();
        for base in &out {
            for images in block.iter().copied().permutations(block.len()) {
                let mut v = base.clone();
                for (&x, y) in block.iter().zip(images) {
                    v[x] = y;
                }
                next.push(v);
            }
        }
        out = next;
    }
    let mut perms: Vec<Permutation> = out.into_iter().map(Permutation::from_vec_unchecked).collect();
    perms.sort();
    perms
}

/// Backtracking over degree-respecting vertex maps.
fn enumerate_automorphisms(g: &CouplingGraph, cap: usize) -> Result<Vec<Permutation>> {
    let n = g.n;
    let degree: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found = Vec::new();

    fn extend(
        x: usize,
        g: &CouplingGraph,
        degree: &[usize],
        image: &mut [usize],
        used: &mut [bool],
        found: &mut Vec<Permutation>,
        cap: usize,
    ) -> Result<()> {
        let n = g.n;
        if x == n {
            if found.len() == cap {
                return Err(Error::Cap(format!("automorphism group has more than {cap} elements")));
            }
            found.push(Permutation::from_vec_unchecked(image.to_vec()));
            return Ok(());
        }
        for y in 0..n {
            if used[y] || degree[y] != degree[x] {
                continue;
            }
            if (0..x).any(|u| g.has_edge(u, x) != g.has_edge(image[u], y)) {
                continue;
            }
            image[x] = y;
            used[y] = true;
            extend(x + 1, g, degree, image, used, found, cap)?;
            used[y] = false;
        }
        Ok(())
    }

    extend(0, g, &degree, &mut image, &mut used, &mut found, cap)?;
    found.sort();
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::conjugate_transposition;

    /// Every permutation of `0..n` preserving the edge set.
    fn brute_aut(g: &CouplingGraph) -> Vec<Permutation> {
        (0..g.n())
            .permutations(g.n())
            .map(|v| Permutation::from_vec(v).unwrap())
            .filter(|b| g.preserves_edges(b))
            .collect()
    }

    #[test]
    fn group_orders() {
        assert_eq!(Coupling::cycle(5).unwrap().aut.order(), &BigUint::from(10u32));
        assert_eq!(Coupling::star(6).unwrap().aut.order(), &BigUint::from(120u32));
        assert_eq!(Coupling::biclique(2, 4).unwrap().aut.order(), &BigUint::from(48u32));
        let big = Coupling::star(100).unwrap();
        assert_eq!(big.aut.order(), &factorial(99));
        assert!(big.aut.elements().is_none());
    }

    #[test]
    fn enumerated_groups_match_brute_force() {
        for c in [
            Coupling::cycle(5).unwrap(),
            Coupling::cycle(6).unwrap(),
            Coupling::star(5).unwrap(),
            Coupling::biclique(2, 3).unwrap(),
            Coupling::general(5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap(),
        ] {
            let brute = brute_aut(&c.graph);
            assert_eq!(c.aut.elements().unwrap(), brute.as_slice(), "{}", c.family());
            assert_eq!(c.aut.order(), &BigUint::from(brute.len()));
        }
    }

    #[test]
    fn enumerated_groups_are_closed() {
        let c = Coupling::cycle(6).unwrap();
        let elements = c.aut.elements().unwrap();
        for a in elements {
            for b in elements {
                let ab = compose(a, b).unwrap();
                assert!(elements.binary_search(&ab).is_ok());
            }
        }
    }

    #[test]
    fn conjugates_of_edge_swaps_stay_edge_swaps() {
        let c = Coupling::cycle(5).unwrap();
        let ts = c.graph.transpositions();
        for b in brute_aut(&c.graph) {
            for &t in &ts {
                assert!(ts.contains(&conjugate_transposition(t, &b)));
            }
        }
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(
            CouplingGraph::new(4, &[(0, 1), (2, 3)], Family::General),
            Err(Error::InvalidCoupling(_))
        ));
        assert!(Coupling::biclique(3, 3).is_err());
        let caps = AutCaps {
            max_general_n: 10,
            max_elements: 100,
        };
        let complete: Vec<_> = (0..6).tuple_combinations().collect();
        assert!(matches!(
            Coupling::general_with_caps(6, &complete, caps),
            Err(Error::Cap(_))
        ));
        assert!(matches!(Coupling::general(11, &[]), Err(Error::Cap(_))));
    }

    #[test]
    fn star_canonical_sorts_leaves() {
        let c = Coupling::star(4).unwrap();
        let tau = Permutation::from_one_based(&[3, 2, 4, 1]).unwrap();
        let (canon, b) = c.canonical_right(&tau);
        assert_eq!(canon, Permutation::from_one_based(&[3, 1, 2, 4]).unwrap());
        assert_eq!(canon, compose(&tau, &b.inverse()).unwrap());
        assert!(c.graph.preserves_edges(&b));
    }

    #[test]
    fn cycle_canonical_is_coset_minimum() {
        let c = Coupling::cycle(5).unwrap();
        let elements = brute_aut(&c.graph);
        for v in (0..5).permutations(5) {
            let tau = Permutation::from_vec(v).unwrap();
            let (canon, b) = c.canonical_right(&tau);
            let brute = elements
                .iter()
                .map(|b| compose(&tau, &b.inverse()).unwrap())
                .min()
                .unwrap();
            assert_eq!(canon, brute);
            assert_eq!(canon, compose(&tau, &b.inverse()).unwrap());
        }
    }

    #[test]
    fn biclique_canonical_matches_enumeration() {
        let c = Coupling::biclique(2, 3).unwrap();
        let elements = c.aut.elements().unwrap();
        for v in (0..5).permutations(5) {
            let tau = Permutation::from_vec(v).unwrap();
            let brute = elements.iter().map(|b| compose(&tau, b).unwrap()).min().unwrap();
            assert_eq!(c.canonical_right(&tau).0, brute);
        }
    }

    #[test]
    fn descriptors() {
        let caps = AutCaps::default();
        assert_eq!(
            Coupling::from_descriptor("star", 5, caps).unwrap().family(),
            Family::Star
        );
        assert_eq!(
            Coupling::from_descriptor("biclique:2", 6, caps).unwrap().family(),
            Family::Biclique { m: 2 }
        );
        assert!(Coupling::from_descriptor("biclique:3", 6, caps).is_err());
        assert!(Coupling::from_descriptor("torus", 6, caps).is_err());
        let (n, edges) = Coupling::parse_edge_list("# path\n1 2\n2 3\n\n3 4\n").unwrap();
        assert_eq!((n, edges), (4, vec![(0, 1), (1, 2), (2, 3)]));
        assert!(Coupling::parse_edge_list("1 x\n").is_err());
    }
}
