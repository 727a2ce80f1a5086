//! Finite multigraphs, cochains with coefficients in an abelian group,
//! harmonic cochains and first cohomology.
//!
//! A 1-cochain is stored by its values on the chosen orientation (the listed
//! `tail -> head` direction); the value on `-e` is the group inverse, so
//! antisymmetry holds by construction.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Cohomology, IntMatrix};
use crate::padic::PadicNumber;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vindex: HashMap<String, usize>,
    eindex: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    tail: String,
    head: String,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, String, String)>) -> Result<Self> {
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i).is_some() {
                return Err(Error::Contract(format!("duplicate vertex {v:?}")));
            }
        }
        let mut eindex = HashMap::new();
        let mut es = Vec::with_capacity(edges.len());
        for (k, (id, t, h)) in edges.into_iter().enumerate() {
            let tail = *vindex
                .get(&t)
                .ok_or_else(|| Error::Contract(format!("edge {id:?}: unknown tail {t:?}")))?;
            let head = *vindex
                .get(&h)
                .ok_or_else(|| Error::Contract(format!("edge {id:?}: unknown head {h:?}")))?;
            if eindex.insert(id.clone(), k).is_some() {
                return Err(Error::Contract(format!("duplicate edge id {id:?}")));
            }
            es.push(Edge { id, tail, head });
        }
        Ok(Graph {
            vertices,
            edges: es,
            vindex,
            eindex,
        })
    }

    /// Graph on vertices `v0..v{n-1}` with edges `e0..` given by index pairs.
    pub fn from_indices(n: usize, edges: &[(usize, usize)]) -> Self {
        let vs = (0..n).map(|i| format!("v{i}")).collect();
        let es = edges
            .iter()
            .enumerate()
            .map(|(k, &(t, h))| (format!("e{k}"), format!("v{t}"), format!("v{h}")))
            .collect();
        Graph::new(vs, es).expect("indices in range")
    }

    pub fn from_json_str(text: &str, path: &str) -> Result<Self> {
        let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::parse(path, format!("line {}: {e}", e.line())))?;
        Graph::new(
            j.vertices,
            j.edges.into_iter().map(|e| (e.id, e.tail, e.head)).collect(),
        )
        .map_err(|e| Error::parse(path, e.to_string()))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let j = GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    tail: self.vertices[e.tail].clone(),
                    head: self.vertices[e.head].clone(),
                })
                .collect(),
        };
        serde_json::to_value(j).expect("serializable")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vindex.get(name).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.eindex.get(id).copied()
    }

    /// Coboundary matrix `Z^V -> Z^E`: row `e` is `[tail] - [head]`.
    pub fn d_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.num_edges(), self.num_vertices());
        for (k, e) in self.edges.iter().enumerate() {
            m[(k, e.tail)] += 1;
            m[(k, e.head)] -= 1;
        }
        m
    }

    /// Dual coboundary matrix `Z^E -> Z^V`, the transpose of [`Graph::d_matrix`].
    pub fn d_star_matrix(&self) -> IntMatrix {
        self.d_matrix().transpose()
    }

    /// Connected component label per vertex, labels in order of least vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.num_vertices()];
        let mut next = 0;
        for s in 0..self.num_vertices() {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &(_, w) in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        q.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn num_components(&self) -> usize {
        self.components().iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Cycle rank `|E| - |V| + #components`.
    pub fn cycle_rank(&self) -> usize {
        self.num_edges() + self.num_components() - self.num_vertices()
    }

    /// Per vertex, the incident `(edge, other end)` pairs in edge order.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.tail].push((k, e.head));
            if e.head != e.tail {
                adj[e.head].push((k, e.tail));
            }
        }
        adj
    }

    /// BFS spanning forest from the least vertex index of each component,
    /// scanning incident edges in edge order.
    pub fn spanning_forest(&self) -> SpanningForest {
        let adj = self.adjacency();
        let n = self.num_vertices();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut in_tree = vec![false; self.num_edges()];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                order.push(v);
                for &(k, w) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((v, k));
                        in_tree[k] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        let non_tree = (0..self.num_edges()).filter(|&k| !in_tree[k]).collect();
        SpanningForest {
            parent,
            order,
            in_tree,
            non_tree,
        }
    }

    pub fn subdivide(&self, edge: usize, new_vertex: &str) -> Result<(Graph, usize, usize)> {
        if edge >= self.num_edges() {
            return Err(Error::Contract(format!("no edge with index {edge}")));
        }
        if self.vindex.contains_key(new_vertex) {
            return Err(Error::Contract(format!("vertex {new_vertex:?} exists")));
        }
        let mut vs = self.vertices.clone();
        vs.push(new_vertex.to_string());
        let mut es = Vec::new();
        let (mut first, mut second) = (0, 0);
        for (k, e) in self.edges.iter().enumerate() {
            if k == edge {
                first = es.len();
                es.push((format!("{}a", e.id), self.vertices[e.tail].clone(), new_vertex.to_string()));
                second = es.len();
                es.push((format!("{}b", e.id), new_vertex.to_string(), self.vertices[e.head].clone()));
            } else {
                es.push((e.id.clone(), self.vertices[e.tail].clone(), self.vertices[e.head].clone()));
            }
        }
        Ok((Graph::new(vs, es)?, first, second))
    }
}

#[derive(Clone, Debug)]
pub struct SpanningForest {
    /// `(parent vertex, tree edge)` for every non-root vertex.
    pub parent: Vec<Option<(usize, usize)>>,
    /// Vertices in BFS order (roots before their descendants).
    pub order: Vec<usize>,
    pub in_tree: Vec<bool>,
    pub non_tree: Vec<usize>,
}

/// An abelian group of coefficients. Written additively; for `K^x` the
/// operations are multiplication and inversion.
pub trait CoeffGroup {
    type Elem: Clone + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `n * a`.
    fn scale(&self, a: &Self::Elem, n: i128) -> Self::Elem {
        let mut acc = self.zero();
        let base = if n < 0 { self.neg(a) } else { a.clone() };
        // binary method
        let mut m = n.unsigned_abs();
        let mut b = base;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &b);
            }
            b = self.add(&b, &b);
            m >>= 1;
        }
        acc
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, b))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IntegerGroup;

impl CoeffGroup for IntegerGroup {
    type Elem = i128;
    fn zero(&self) -> i128 {
        0
    }
    fn add(&self, a: &i128, b: &i128) -> i128 {
        a.checked_add(*b).expect("integer overflow")
    }
    fn neg(&self, a: &i128) -> i128 {
        -a
    }
    fn is_zero(&self, a: &i128) -> bool {
        *a == 0
    }
    fn scale(&self, a: &i128, n: i128) -> i128 {
        a.checked_mul(n).expect("integer overflow")
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RationalGroup;

impl CoeffGroup for RationalGroup {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn scale(&self, a: &BigRational, n: i128) -> BigRational {
        a * BigRational::from_integer(BigInt::from(n))
    }
}

/// `K^x`, written multiplicatively. Elements equal to one to `digits`
/// relative digits count as the identity.
#[derive(Clone, Copy, Debug)]
pub struct MultiplicativeGroup {
    pub prime: u32,
    pub precision: u32,
    pub digits: u32,
}

impl CoeffGroup for MultiplicativeGroup {
    type Elem = PadicNumber;
    fn zero(&self) -> PadicNumber {
        PadicNumber::one(self.prime, self.precision)
    }
    fn add(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a * b
    }
    fn neg(&self, a: &PadicNumber) -> PadicNumber {
        a.inverse().expect("K^x elements are nonzero")
    }
    fn is_zero(&self, a: &PadicNumber) -> bool {
        a.is_one_to(self.digits)
    }
    fn scale(&self, a: &PadicNumber, n: i128) -> PadicNumber {
        a.pow(n as i64).expect("K^x elements are nonzero")
    }
}

/// `K`, written additively.
#[derive(Clone, Copy, Debug)]
pub struct AdditiveGroup {
    pub prime: u32,
    pub precision: u32,
}

impl CoeffGroup for AdditiveGroup {
    type Elem = PadicNumber;
    fn zero(&self) -> PadicNumber {
        PadicNumber::exact_zero(self.prime)
    }
    fn add(&self, a: &PadicNumber, b: &PadicNumber) -> PadicNumber {
        a + b
    }
    fn neg(&self, a: &PadicNumber) -> PadicNumber {
        -a
    }
    fn is_zero(&self, a: &PadicNumber) -> bool {
        a.is_zero()
    }
    fn scale(&self, a: &PadicNumber, n: i128) -> PadicNumber {
        a * &PadicNumber::from_int(n as i64, self.prime, self.precision)
    }
}

/// `df(e) = f(tail) - f(head)`.
pub fn coboundary<G: CoeffGroup>(g: &Graph, grp: &G, f: &[G::Elem]) -> Vec<G::Elem> {
    assert_eq!(f.len(), g.num_vertices(), "0-cochain length");
    g.edges.iter().map(|e| grp.sub(&f[e.tail], &f[e.head])).collect()
}

/// `d*c(v) = sum of c(e) over oriented edges with tail v`.
pub fn dual_coboundary<G: CoeffGroup>(g: &Graph, grp: &G, c: &[G::Elem]) -> Vec<G::Elem> {
    assert_eq!(c.len(), g.num_edges(), "1-cochain length");
    let mut out = vec![grp.zero(); g.num_vertices()];
    for (k, e) in g.edges.iter().enumerate() {
        if e.tail == e.head {
            continue;
        }
        out[e.tail] = grp.add(&out[e.tail], &c[k]);
        out[e.head] = grp.sub(&out[e.head], &c[k]);
    }
    out
}

pub fn is_harmonic<G: CoeffGroup>(g: &Graph, grp: &G, c: &[G::Elem]) -> bool {
    dual_coboundary(g, grp, c).iter().all(|x| grp.is_zero(x))
}

/// Z-basis of the harmonic cochains `ker d*`, canonical for the given orientation.
pub fn harmonic_basis(g: &Graph) -> Vec<Vec<i128>> {
    let k = linalg::kernel_basis(&g.d_star_matrix());
    (0..k.cols()).map(|j| k.col(j)).collect()
}

/// A class in `H^1(G, A)`, normalized to vanish on the spanning forest.
#[derive(Clone, Debug)]
pub struct CohomologyClass<E> {
    pub representative: Vec<E>,
    /// `(edge index, value)` for every non-tree edge, in edge order.
    pub normal_form: Vec<(usize, E)>,
}

impl<E: Clone> CohomologyClass<E> {
    pub fn normal_values(&self) -> Vec<E> {
        self.normal_form.iter().map(|(_, v)| v.clone()).collect()
    }
}

/// Returns `(f, c - df)` where `c - df` vanishes on the spanning forest.
pub fn clear_on_forest<G: CoeffGroup>(g: &Graph, grp: &G, c: &[G::Elem]) -> (Vec<G::Elem>, Vec<G::Elem>) {
    assert_eq!(c.len(), g.num_edges(), "1-cochain length");
    let forest = g.spanning_forest();
    let mut f = vec![grp.zero(); g.num_vertices()];
    for &v in &forest.order {
        if let Some((par, k)) = forest.parent[v] {
            let e = &g.edges[k];
            // (c - df)(e) = c(e) - f(tail) + f(head) = 0
            f[v] = if e.tail == par {
                grp.sub(&f[par], &c[k])
            } else {
                grp.add(&c[k], &f[par])
            };
        }
    }
    let df = coboundary(g, grp, &f);
    let cleared = c.iter().zip(&df).map(|(a, b)| grp.sub(a, b)).collect();
    (f, cleared)
}

pub fn h1_class<G: CoeffGroup>(g: &Graph, grp: &G, c: &[G::Elem]) -> CohomologyClass<G::Elem> {
    let (_, cleared) = clear_on_forest(g, grp, c);
    let forest = g.spanning_forest();
    CohomologyClass {
        representative: c.to_vec(),
        normal_form: forest.non_tree.iter().map(|&k| (k, cleared[k].clone())).collect(),
    }
}

pub fn classes_equal<G: CoeffGroup>(grp: &G, a: &CohomologyClass<G::Elem>, b: &CohomologyClass<G::Elem>) -> bool {
    a.normal_form.len() == b.normal_form.len()
        && a.normal_form
            .iter()
            .zip(&b.normal_form)
            .all(|((i, x), (j, y))| i == j && grp.equal(x, y))
}

/// SNF presentation of `H^1(G, Z) = coker(d)`.
pub fn h1_presentation(g: &Graph) -> Result<Cohomology> {
    linalg::cohomology(&g.d_matrix(), &IntMatrix::zeros(0, g.num_edges()))
}

pub fn harmonic_to_h1<G: CoeffGroup>(g: &Graph, grp: &G, h: &[G::Elem]) -> Result<CohomologyClass<G::Elem>> {
    if !is_harmonic(g, grp, h) {
        return Err(Error::Contract("cochain is not harmonic".into()));
    }
    Ok(h1_class(g, grp, h))
}

/// `sum over unoriented edges of n(e) * c(e)`; for `K^x` this is `prod c(e)^n(e)`.
pub fn pair_with_integer<G: CoeffGroup>(grp: &G, n: &[i128], c: &[G::Elem]) -> G::Elem {
    assert_eq!(n.len(), c.len(), "cochain lengths");
    n.iter()
        .zip(c)
        .fold(grp.zero(), |acc, (&k, x)| grp.add(&acc, &grp.scale(x, k)))
}

pub fn cochain_pairing_int(a: &[i128], b: &[i128]) -> i128 {
    pair_with_integer(&IntegerGroup, a, b)
}

pub fn cochain_pairing_q(a: &[BigRational], b: &[BigRational]) -> BigRational {
    assert_eq!(a.len(), b.len(), "cochain lengths");
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// `<h, cls>` computed on the forest normal form; independent of the representative.
pub fn harmonic_h1_pairing<G: CoeffGroup>(
    g: &Graph,
    grp: &G,
    h: &[i128],
    cls: &CohomologyClass<G::Elem>,
) -> Result<G::Elem> {
    if !is_harmonic(g, &IntegerGroup, h) {
        return Err(Error::Contract("first argument is not harmonic".into()));
    }
    Ok(cls
        .normal_form
        .iter()
        .fold(grp.zero(), |acc, (k, x)| grp.add(&acc, &grp.scale(x, h[*k]))))
}

/// Matrix of `harmonic_to_h1` from `harmonic_basis` to the forest coordinates
/// of `H^1(G, Z)` (one coordinate per non-tree edge).
pub fn harmonic_to_h1_matrix(g: &Graph) -> IntMatrix {
    let basis = harmonic_basis(g);
    let forest = g.spanning_forest();
    let mut m = IntMatrix::zeros(forest.non_tree.len(), basis.len());
    for (j, h) in basis.iter().enumerate() {
        let cls = h1_class(g, &IntegerGroup, h);
        for (i, (_, v)) in cls.normal_form.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

/// Gram matrix `(h_i . h_j)` of a list of integer cochains.
pub fn cycle_pairing_matrix(basis: &[Vec<i128>]) -> IntMatrix {
    let n = basis.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = cochain_pairing_int(&basis[i], &basis[j]);
        }
    }
    m
}

/// Matrix of `harmonic_h1_pairing` between `harmonic_basis` and the forest
/// generators of `H^1` (indicator cochains of non-tree edges).
pub fn harmonic_h1_pairing_matrix(g: &Graph) -> IntMatrix {
    let basis = harmonic_basis(g);
    let forest = g.spanning_forest();
    let mut m = IntMatrix::zeros(basis.len(), forest.non_tree.len());
    for (i, h) in basis.iter().enumerate() {
        for (j, &k) in forest.non_tree.iter().enumerate() {
            m[(i, j)] = h[k];
        }
    }
    m
}

/// Parses a cochain JSON object mapping edge ids to values.
pub fn cochain_from_json<T>(
    g: &Graph,
    value: &serde_json::Value,
    default: T,
    parse: impl Fn(&serde_json::Value) -> Result<T>,
    path: &str,
) -> Result<Vec<T>>
where
    T: Clone,
{
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse(path, "cochain must be an object keyed by edge id"))?;
    let mut out = vec![default; g.num_edges()];
    let sorted: BTreeMap<_, _> = obj.iter().collect();
    for (id, v) in sorted {
        let k = g
            .edge_index(id)
            .ok_or_else(|| Error::parse(path, format!("unknown edge id {id:?}")))?;
        out[k] = parse(v).map_err(|e| Error::parse(format!("{path}/{id}"), e.to_string()))?;
    }
    Ok(out)
}

pub fn rational_from_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rational_one() -> BigRational {
    BigRational::one()
}

/// Small named graphs used by examples and checks.
pub mod named {
    use super::Graph;

    /// One vertex with one loop.
    pub fn loop_graph() -> Graph {
        Graph::from_indices(1, &[(0, 0)])
    }

    /// Consistently oriented cycle `v0 -> v1 -> ... -> v0`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 1);
        let edges: Vec<_> = (0..n).map(|k| (k, (k + 1) % n)).collect();
        Graph::from_indices(n, &edges)
    }

    /// Two vertices joined by three parallel edges `v0 -> v1`.
    pub fn theta() -> Graph {
        Graph::from_indices(2, &[(0, 1), (0, 1), (0, 1)])
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_indices(n, &edges)
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|k| (k, k + 1)).collect();
        Graph::from_indices(n, &edges)
    }

    /// Every edge of `g` doubled (second copy listed after the first).
    pub fn doubled(g: &Graph) -> Graph {
        let mut edges = Vec::new();
        for e in g.edges() {
            edges.push((e.tail, e.head));
            edges.push((e.tail, e.head));
        }
        Graph::from_indices(g.num_vertices(), &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coboundary_examples() {
        let g = path(2);
        assert_eq!(coboundary(&g, &IntegerGroup, &[1, 0]), vec![1]);
        let c3 = cycle(3);
        assert_eq!(coboundary(&c3, &IntegerGroup, &[5, 5, 5]), vec![0, 0, 0]);
        assert_eq!(coboundary(&c3, &IntegerGroup, &[0, 1, 2]), vec![-1, -1, 2]);
    }

    #[test]
    fn dual_coboundary_examples() {
        assert_eq!(dual_coboundary(&cycle(3), &IntegerGroup, &[1, 1, 1]), vec![0, 0, 0]);
        assert_eq!(dual_coboundary(&path(2), &IntegerGroup, &[1]), vec![1, -1]);
        assert_eq!(dual_coboundary(&theta(), &IntegerGroup, &[1, 2, -3]), vec![0, 0]);
        assert_eq!(dual_coboundary(&loop_graph(), &IntegerGroup, &[7]), vec![0]);
    }

    #[test]
    fn harmonic_bases() {
        assert_eq!(harmonic_basis(&cycle(3)), vec![vec![1, 1, 1]]);
        assert!(harmonic_basis(&path(4)).is_empty());
        let th = harmonic_basis(&theta());
        assert_eq!(th.len(), 2);
        for h in &th {
            assert!(is_harmonic(&theta(), &IntegerGroup, h));
        }
        // (1,-1,0) and (0,1,-1) span the same lattice
        let target = IntMatrix::from_rows(&[vec![1, 0], vec![-1, 1], vec![0, -1]], 2).unwrap();
        let got = IntMatrix::from_cols(&th, 3).unwrap();
        assert_eq!(linalg::lattice_basis(&target), linalg::lattice_basis(&got));
    }

    #[test]
    fn h1_classes_on_cycles() {
        let c3 = cycle(3);
        let df = coboundary(&c3, &IntegerGroup, &[4, -2, 9]);
        assert!(h1_class(&c3, &IntegerGroup, &df).normal_values().iter().all(|&x| x == 0));
        let single = h1_class(&c3, &IntegerGroup, &[0, 0, 1]);
        let all = h1_class(&c3, &IntegerGroup, &[1, 1, 1]);
        assert_eq!(single.normal_values().len(), 1);
        assert_eq!(all.normal_values()[0], 3 * single.normal_values()[0]);
        assert_eq!(single.normal_values()[0].abs(), 1);
    }

    #[test]
    fn harmonic_to_h1_rejects_nonharmonic() {
        assert!(harmonic_to_h1(&path(2), &IntegerGroup, &[1]).is_err());
        let z = harmonic_to_h1(&cycle(4), &IntegerGroup, &[0, 0, 0, 0]).unwrap();
        assert_eq!(z.normal_values(), vec![0]);
    }

    #[test]
    fn pairings() {
        assert_eq!(cochain_pairing_int(&[1, 1, 1], &[1, 1, 1]), 3);
        let c3 = cycle(3);
        let single = h1_class(&c3, &IntegerGroup, &[0, 0, 1]);
        assert_eq!(harmonic_h1_pairing(&c3, &IntegerGroup, &[1, 1, 1], &single).unwrap(), 1);
        let th = theta();
        let cls = h1_class(&th, &IntegerGroup, &[1, 0, 0]);
        assert_eq!(harmonic_h1_pairing(&th, &IntegerGroup, &[1, -1, 0], &cls).unwrap(), 1);
    }

    #[test]
    fn multiplicative_clearing_is_exact() {
        let grp = MultiplicativeGroup {
            prime: 5,
            precision: 10,
            digits: 10,
        };
        let c3 = cycle(3);
        let x = |n: i64| PadicNumber::from_int(n, 5, 10);
        let f = vec![x(2), x(15), x(-7)];
        let df = coboundary(&c3, &grp, &f);
        let cls = h1_class(&c3, &grp, &df);
        assert!(grp.is_zero(&cls.normal_values()[0]));
        let c = vec![x(3), x(4), x(6)];
        let cls = h1_class(&c3, &grp, &c);
        assert!(grp.equal(&cls.normal_values()[0], &x(72)));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let text = r#"{"vertices":["a","b"],"edges":[{"id":"e","tail":"a","head":"b"}]}"#;
        let g = Graph::from_json_str(text, "g.json").unwrap();
        assert_eq!(g.num_edges(), 1);
        let back = Graph::from_json_str(&g.to_json_value().to_string(), "g.json").unwrap();
        assert_eq!(back, g);
        let bad = r#"{"vertices":["a"],"edges":[{"id":"e","tail":"a","head":"z"}]}"#;
        let err = Graph::from_json_str(bad, "bad.json").unwrap_err().to_string();
        assert!(err.contains("bad.json") && err.contains("unknown head"));
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..7).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..10).prop_map(move |es| Graph::from_indices(n, &es))
        })
    }

    proptest! {
        #[test]
        fn h1_rank_is_cycle_rank(g in arb_graph()) {
            let h = h1_presentation(&g).unwrap();
            prop_assert_eq!(h.free_rank, g.cycle_rank());
            prop_assert!(h.torsion.is_empty());
            prop_assert_eq!(harmonic_basis(&g).len(), g.cycle_rank());
            let hd = h1_presentation(&doubled(&g)).unwrap();
            prop_assert!(hd.torsion.is_empty());
        }

        #[test]
        fn harmonic_to_h1_is_rational_iso(g in arb_graph()) {
            let m = harmonic_to_h1_matrix(&g);
            prop_assert_eq!(m.rows(), m.cols());
            prop_assert_eq!(linalg::rank(&m), m.cols());
        }

        #[test]
        fn harmonic_kills_coboundaries(g in arb_graph(), seed in proptest::collection::vec(-9i128..=9, 7)) {
            let f: Vec<i128> = (0..g.num_vertices()).map(|i| seed[i % seed.len()]).collect();
            let df = coboundary(&g, &IntegerGroup, &f);
            let cls = h1_class(&g, &IntegerGroup, &df);
            for h in harmonic_basis(&g) {
                prop_assert_eq!(harmonic_h1_pairing(&g, &IntegerGroup, &h, &cls).unwrap(), 0);
                prop_assert_eq!(cochain_pairing_int(&h, &df), 0);
            }
        }

        #[test]
        fn pairing_is_representative_independent(g in arb_graph(), seed in proptest::collection::vec(-9i128..=9, 17)) {
            let c: Vec<i128> = (0..g.num_edges()).map(|i| seed[i % seed.len()]).collect();
            let f: Vec<i128> = (0..g.num_vertices()).map(|i| seed[(i + 3) % seed.len()]).collect();
            let c2: Vec<i128> = c.iter().zip(coboundary(&g, &IntegerGroup, &f)).map(|(a, b)| a + b).collect();
            let a = h1_class(&g, &IntegerGroup, &c);
            let b = h1_class(&g, &IntegerGroup, &c2);
            prop_assert!(classes_equal(&IntegerGroup, &a, &b));
            for h in harmonic_basis(&g) {
                prop_assert_eq!(cochain_pairing_int(&h, &c), harmonic_h1_pairing(&g, &IntegerGroup, &h, &a).unwrap());
            }
        }
    }
}
