//! Integral GKM graphs, connections, and the K-class predicate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::lattice;
use crate::laurent::{ExponentVector, LaurentPolynomial};

/// A regular graph with oriented edges labelled by weights in `Z^m`.
///
/// Vertices are `1..=vertex_count`. Both orientations of every edge are
/// stored, each with its own weight; antisymmetry of the labelling is an
/// axiom that [`check_axial_axioms`] verifies rather than an enforced
/// invariant, so corrupted labellings can be represented and diagnosed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    m: usize,
    vertex_count: usize,
    out: Vec<Vec<(usize, ExponentVector)>>,
}

impl GkmGraph {
    pub fn new<I>(m: usize, vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, ExponentVector)>,
    {
        if vertex_count == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut map: BTreeMap<(usize, usize), ExponentVector> = BTreeMap::new();
        for (p, q, alpha) in edges {
            for v in [p, q] {
                if v == 0 || v > vertex_count {
                    return Err(Error::InvalidVertex {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if p == q {
                return Err(Error::InvalidGraph(format!("loop at vertex {p}")));
            }
            if alpha.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: alpha.len(),
                });
            }
            if map.insert((p, q), alpha).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge ({p},{q})")));
            }
        }
        if let Some(&(p, q)) = map.keys().find(|&&(p, q)| !map.contains_key(&(q, p))) {
            return Err(Error::InvalidGraph(format!(
                "edge ({p},{q}) has no reverse ({q},{p})"
            )));
        }
        let mut out = vec![Vec::new(); vertex_count];
        for ((p, q), alpha) in map {
            out[p - 1].push((q, alpha));
        }
        let degree = out[0].len();
        if let Some(p) = out.iter().position(|adj| adj.len() != degree) {
            return Err(Error::InvalidGraph(format!(
                "not regular: vertex {} has degree {}, vertex 1 has degree {degree}",
                p + 1,
                out[p].len()
            )));
        }
        Ok(GkmGraph {
            m,
            vertex_count,
            out,
        })
    }

    /// Rank of the weight lattice.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.vertex_count
    }

    pub fn degree(&self) -> usize {
        self.out[0].len()
    }

    /// Edges out of `p` as `(target, weight)`, sorted by target.
    pub fn neighbors(&self, p: usize) -> &[(usize, ExponentVector)] {
        &self.out[p - 1]
    }

    pub fn axial(&self, p: usize, q: usize) -> Option<&ExponentVector> {
        let adj = self.out.get(p.checked_sub(1)?)?;
        adj.binary_search_by_key(&q, |(t, _)| *t)
            .ok()
            .map(|i| &adj[i].1)
    }

    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        self.axial(p, q).is_some()
    }

    /// All oriented edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &ExponentVector)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, adj)| adj.iter().map(move |(q, a)| (i + 1, *q, a)))
    }

    /// A copy with the weight of the single oriented edge `(p, q)` replaced.
    pub fn with_axial(&self, p: usize, q: usize, alpha: ExponentVector) -> Result<Self> {
        if alpha.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: alpha.len(),
            });
        }
        let mut g = self.clone();
        let adj = &mut g.out[p - 1];
        let i = adj
            .binary_search_by_key(&q, |(t, _)| *t)
            .map_err(|_| Error::InvalidGraph(format!("no edge ({p},{q})")))?;
        adj[i].1 = alpha;
        Ok(g)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.vertex_count {
            Err(Error::InvalidVertex {
                vertex: v,
                count: self.vertex_count,
            })
        } else {
            Ok(())
        }
    }
}

/// Where `nabla_(p,q)` sends the edge `(p, source)`: to `(q, target)`, with
/// `alpha(q, target) - alpha(p, source) = multiple * alpha(p, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionImage {
    pub source: usize,
    pub target: usize,
    pub multiple: i64,
}

/// A connection: for every oriented edge `e = (p, q)` a map from the edges
/// out of `p` to the edges out of `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Connection {
    maps: BTreeMap<(usize, usize), Vec<ConnectionImage>>,
}

impl Connection {
    pub fn new(maps: BTreeMap<(usize, usize), Vec<ConnectionImage>>) -> Self {
        Connection { maps }
    }

    pub fn along(&self, p: usize, q: usize) -> Option<&[ConnectionImage]> {
        self.maps.get(&(p, q)).map(Vec::as_slice)
    }

    /// `nabla_(p,q)((p, k))` as `(target, multiple)`.
    pub fn image(&self, p: usize, q: usize, k: usize) -> Option<(usize, i64)> {
        self.along(p, q)?
            .iter()
            .find(|im| im.source == k)
            .map(|im| (im.target, im.multiple))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &[ConnectionImage])> {
        self.maps.iter().map(|(k, v)| (*k, v.as_slice()))
    }
}

/// One failed axiom of an integral axial function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum AxiomViolation {
    /// `alpha(q, p) != -alpha(p, q)`.
    Antisymmetry { from: usize, to: usize },
    /// Two edges at `vertex` carry parallel weights.
    PairwiseIndependence {
        vertex: usize,
        first: usize,
        second: usize,
    },
    /// `alpha(nabla_e(e')) - alpha(e')` is not an integer multiple of `alpha(e)`.
    Compatibility {
        edge: (usize, usize),
        source: usize,
        target: usize,
    },
    /// The connection itself is malformed along `edge`.
    Connection {
        edge: (usize, usize),
        reason: String,
    },
}

impl AxiomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::Antisymmetry { .. } => "antisymmetry",
            AxiomViolation::PairwiseIndependence { .. } => "pairwise-independence",
            AxiomViolation::Compatibility { .. } => "compatibility",
            AxiomViolation::Connection { .. } => "connection",
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Antisymmetry { from, to } => {
                write!(f, "antisymmetry fails on edge ({from},{to})")
            }
            AxiomViolation::PairwiseIndependence {
                vertex,
                first,
                second,
            } => write!(
                f,
                "edges ({vertex},{first}) and ({vertex},{second}) have parallel weights"
            ),
            AxiomViolation::Compatibility {
                edge,
                source,
                target,
            } => write!(
                f,
                "compatibility fails along ({},{}) for ({},{source}) -> ({},{target})",
                edge.0, edge.1, edge.0, edge.1
            ),
            AxiomViolation::Connection { edge, reason } => {
                write!(f, "connection along ({},{}): {reason}", edge.0, edge.1)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks antisymmetry, pairwise independence at each vertex, and integral
/// compatibility with `c`, together with the connection's own axioms
/// (`nabla_e` bijective, `nabla_e(e) = e-bar`, `nabla_{e-bar} = nabla_e^{-1}`).
/// All violations are collected.
pub fn check_axial_axioms(g: &GkmGraph, c: &Connection) -> AxiomReport {
    let mut violations = Vec::new();

    for (p, q, a) in g.edges() {
        if let Some(b) = g.axial(q, p) {
            if &(-a) != b {
                violations.push(AxiomViolation::Antisymmetry { from: p, to: q });
            }
        }
    }

    for p in g.vertices() {
        let adj = g.neighbors(p);
        for (i, (k1, a1)) in adj.iter().enumerate() {
            for (k2, a2) in &adj[i + 1..] {
                if lattice::parallel(a1, a2) {
                    violations.push(AxiomViolation::PairwiseIndependence {
                        vertex: p,
                        first: *k1,
                        second: *k2,
                    });
                }
            }
        }
    }

    for (p, q, alpha) in g.edges() {
        let edge = (p, q);
        let Some(images) = c.along(p, q) else {
            violations.push(AxiomViolation::Connection {
                edge,
                reason: "missing".into(),
            });
            continue;
        };
        let sources: BTreeSet<usize> = images.iter().map(|im| im.source).collect();
        let targets: BTreeSet<usize> = images.iter().map(|im| im.target).collect();
        let expected_sources: BTreeSet<usize> = g.neighbors(p).iter().map(|(k, _)| *k).collect();
        let expected_targets: BTreeSet<usize> = g.neighbors(q).iter().map(|(k, _)| *k).collect();
        if images.len() != expected_sources.len()
            || sources != expected_sources
            || targets != expected_targets
        {
            violations.push(AxiomViolation::Connection {
                edge,
                reason: "not a bijection between the edge stars".into(),
            });
            continue;
        }
        if c.image(p, q, q).map(|x| x.0) != Some(p) {
            violations.push(AxiomViolation::Connection {
                edge,
                reason: "does not send the edge to its reverse".into(),
            });
        }
        for im in images {
            if c.image(q, p, im.target).map(|x| x.0) != Some(im.source) {
                violations.push(AxiomViolation::Connection {
                    edge,
                    reason: format!(
                        "reverse connection does not invert ({p},{}) -> ({q},{})",
                        im.source, im.target
                    ),
                });
            }
            let (Some(src), Some(dst)) = (g.axial(p, im.source), g.axial(q, im.target)) else {
                continue;
            };
            match lattice::integer_multiple(&(dst - src), alpha) {
                Some(k) if k == im.multiple => {}
                Some(_) => violations.push(AxiomViolation::Connection {
                    edge,
                    reason: format!("stored multiple for ({p},{}) is wrong", im.source),
                }),
                None => violations.push(AxiomViolation::Compatibility {
                    edge,
                    source: im.source,
                    target: im.target,
                }),
            }
        }
    }
    violations.dedup();
    AxiomReport { violations }
}

/// First vertex and triple of neighbours whose weights have rank < 3.
pub fn three_independence_witness(g: &GkmGraph) -> Option<(usize, [usize; 3])> {
    for p in g.vertices() {
        let adj = g.neighbors(p);
        for i in 0..adj.len() {
            for j in (i + 1)..adj.len() {
                for k in (j + 1)..adj.len() {
                    let rows = [
                        adj[i].1.as_slice(),
                        adj[j].1.as_slice(),
                        adj[k].1.as_slice(),
                    ];
                    if lattice::rank(&rows) < 3 {
                        return Some((p, [adj[i].0, adj[j].0, adj[k].0]));
                    }
                }
            }
        }
    }
    None
}

/// Whether every three weights at every vertex are linearly independent.
/// Graphs of degree at most two pass vacuously.
pub fn check_three_independence(g: &GkmGraph) -> bool {
    three_independence_witness(g).is_none()
}

/// Derives the connection by compatibility: `nabla_(p,q)((p,k))` is the
/// unique `(q,k'')` with `alpha(q,k'') - alpha(p,k)` in `Z alpha(p,q)`.
pub fn derive_connection(g: &GkmGraph) -> Result<Connection> {
    let mut maps = BTreeMap::new();
    for (p, q, alpha) in g.edges() {
        let mut images = Vec::with_capacity(g.degree());
        for (k, a_src) in g.neighbors(p) {
            let candidates: Vec<(usize, i64)> = g
                .neighbors(q)
                .iter()
                .filter_map(|(t, a_dst)| {
                    lattice::integer_multiple(&(a_dst - a_src), alpha).map(|m| (*t, m))
                })
                .collect();
            match candidates.as_slice() {
                [] => return Err(Error::NotGkm { p, q, k: *k }),
                [(target, multiple)] => images.push(ConnectionImage {
                    source: *k,
                    target: *target,
                    multiple: *multiple,
                }),
                many => {
                    return Err(Error::ThreeIndependenceViolated {
                        p,
                        q,
                        k: *k,
                        count: many.len(),
                    })
                }
            }
        }
        let distinct: BTreeSet<usize> = images.iter().map(|im| im.target).collect();
        if distinct.len() != images.len() {
            return Err(Error::InvalidGraph(format!(
                "derived connection along ({p},{q}) is not injective"
            )));
        }
        maps.insert((p, q), images);
    }
    Ok(Connection { maps })
}

/// Whether `c` keeps the full subgraph on `vertices` closed: for every edge
/// `(p, q)` inside it, `nabla_(p,q)` sends each edge from `p` into the set to
/// an edge from `q` into the set.
pub fn is_connection_invariant(g: &GkmGraph, c: &Connection, vertices: &[usize]) -> bool {
    let inside: BTreeSet<usize> = vertices.iter().copied().collect();
    inside.iter().all(|&p| {
        g.neighbors(p)
            .iter()
            .filter(|(q, _)| inside.contains(q))
            .all(|(q, _)| {
                g.neighbors(p)
                    .iter()
                    .filter(|(k, _)| inside.contains(k))
                    .all(|(k, _)| c.image(p, *q, *k).is_some_and(|(t, _)| inside.contains(&t)))
            })
    })
}

/// A function from the vertex set to `R(T)`; vertex `v` is stored at `v - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexMap {
    m: usize,
    values: Vec<LaurentPolynomial>,
}

impl VertexMap {
    pub fn new(m: usize, values: Vec<LaurentPolynomial>) -> Result<Self> {
        if let Some(p) = values.iter().find(|p| p.m() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: p.m(),
            });
        }
        Ok(VertexMap { m, values })
    }

    pub fn constant(vertex_count: usize, value: LaurentPolynomial) -> Self {
        VertexMap {
            m: value.m(),
            values: vec![value; vertex_count],
        }
    }

    pub fn zero(vertex_count: usize, m: usize) -> Self {
        Self::constant(vertex_count, LaurentPolynomial::zero(m))
    }

    pub fn one(vertex_count: usize, m: usize) -> Self {
        Self::constant(vertex_count, LaurentPolynomial::one(m))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the 1-based vertex `v`.
    pub fn get(&self, v: usize) -> Option<&LaurentPolynomial> {
        self.values.get(v.checked_sub(1)?)
    }

    pub fn at(&self, v: usize) -> &LaurentPolynomial {
        &self.values[v - 1]
    }

    pub fn values(&self) -> &[LaurentPolynomial] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &LaurentPolynomial)> {
        self.values.iter().enumerate().map(|(i, p)| (i + 1, p))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LaurentPolynomial::is_zero)
    }

    pub fn with_value(&self, v: usize, value: LaurentPolynomial) -> Result<Self> {
        if value.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: value.m(),
            });
        }
        if v == 0 || v > self.len() {
            return Err(Error::InvalidVertex {
                vertex: v,
                count: self.len(),
            });
        }
        let mut out = self.clone();
        out.values[v - 1] = value;
        Ok(out)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&LaurentPolynomial, &LaurentPolynomial) -> LaurentPolynomial,
    ) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(VertexMap {
            m: self.m,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Scalar multiplication by `x` in `R(T)`, i.e. product with the constant map.
    pub fn scale(&self, x: &LaurentPolynomial) -> Result<Self> {
        if x.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: x.m(),
            });
        }
        Ok(VertexMap {
            m: self.m,
            values: self.values.iter().map(|p| p * x).collect(),
        })
    }

    /// Pointwise inverse; every value must be a unit `± y^e`.
    pub fn pointwise_inverse(&self) -> Result<Self> {
        Ok(VertexMap {
            m: self.m,
            values: self
                .values
                .iter()
                .map(LaurentPolynomial::inverse_monomial)
                .collect::<Result<_>>()?,
        })
    }

    /// Pointwise product of several maps. A vertex at which some factor
    /// vanishes gets 0 without multiplying out the others.
    pub fn product<'a, I>(vertex_count: usize, m: usize, factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a VertexMap>,
    {
        let factors: Vec<&VertexMap> = factors.into_iter().collect();
        for f in &factors {
            if f.m != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: f.m,
                });
            }
            if f.len() != vertex_count {
                return Err(Error::DimensionMismatch {
                    expected: vertex_count,
                    found: f.len(),
                });
            }
        }
        let values = (0..vertex_count)
            .map(|i| {
                if factors.iter().any(|f| f.values[i].is_zero()) {
                    return LaurentPolynomial::zero(m);
                }
                factors
                    .iter()
                    .fold(LaurentPolynomial::one(m), |acc, f| &acc * &f.values[i])
            })
            .collect();
        Ok(VertexMap { m, values })
    }
}

impl fmt::Debug for VertexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(v, p)| (v, p.to_string())))
            .finish()
    }
}

macro_rules! forward_vm_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &VertexMap {
            type Output = VertexMap;
            fn $method(self, rhs: &VertexMap) -> VertexMap {
                self.$checked(rhs)
                    .expect("vertex maps over different graphs")
            }
        }
    };
}

forward_vm_binop!(Add, add, checked_add);
forward_vm_binop!(Sub, sub, checked_sub);
forward_vm_binop!(Mul, mul, checked_mul);

impl Neg for &VertexMap {
    type Output = VertexMap;
    fn neg(self) -> VertexMap {
        VertexMap {
            m: self.m,
            values: self.values.iter().map(|p| -p).collect(),
        }
    }
}

/// Outcome of the K-class test; failing edges are unordered pairs `(a, b)`
/// with `a < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KClassReport {
    pub failing_edges: Vec<(usize, usize)>,
}

impl KClassReport {
    pub fn is_k_class(&self) -> bool {
        self.failing_edges.is_empty()
    }
}

pub fn is_k_class(g: &GkmGraph, f: &VertexMap) -> Result<KClassReport> {
    is_k_class_with(g, f, Strategy::default())
}

/// `f` is a K-class iff `f(x) - f(y)` is divisible by `1 - y^{alpha(x,y)}`
/// for every oriented edge `(x, y)`.
pub fn is_k_class_with(g: &GkmGraph, f: &VertexMap, strategy: Strategy) -> Result<KClassReport> {
    if f.m() != g.m() {
        return Err(Error::DimensionMismatch {
            expected: g.m(),
            found: f.m(),
        });
    }
    if f.len() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: g.vertex_count(),
            found: f.len(),
        });
    }
    let edges: Vec<(usize, usize, &ExponentVector)> = g.edges().collect();
    let outcomes = exec::map(strategy, &edges, |&(x, y, alpha)| {
        let diff = f.at(x) - f.at(y);
        diff.divisible_by_binomial(alpha).map(|ok| (x, y, ok))
    });
    let mut failing = BTreeSet::new();
    for outcome in outcomes {
        let (x, y, ok) = outcome?;
        if !ok {
            failing.insert((x.min(y), x.max(y)));
        }
    }
    Ok(KClassReport {
        failing_edges: failing.into_iter().collect(),
    })
}
