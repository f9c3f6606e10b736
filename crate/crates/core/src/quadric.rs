//! The GKM graph of `Q_{2n}` and its generator classes.
//!
//! Vertices are `1..=2n+2` with the pairing `bar(i) = 2n + 3 - i`; `i` and
//! `j` are joined unless `j` is `i` or `bar(i)`. Weights live in `Z^{n+1}`
//! with basis `x_1, ..., x_{n+1}`, and a weight vector doubles as the
//! exponent of the matching character `y^e` in `R(T^{n+1})`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gkm::{self, Connection, GkmGraph, VertexMap};
use crate::laurent::{ExponentVector, LaurentPolynomial};

/// `Q_{2n}` as an integral GKM graph, with its connection.
#[derive(Clone, Debug)]
pub struct QuadricContext {
    n: usize,
    graph: GkmGraph,
    connection: Connection,
    h: Vec<ExponentVector>,
}

impl QuadricContext {
    pub fn build(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidN(n));
        }
        let m = n + 1;
        let x = |i: usize| -> ExponentVector {
            // x_0 = 0
            if i == 0 {
                ExponentVector::zero(m)
            } else {
                ExponentVector::unit(m, i - 1)
            }
        };
        let h: Vec<ExponentVector> = (1..=2 * n + 2)
            .map(|j| {
                if j <= n + 2 {
                    &x(j - 1) - &x(n + 1)
                } else {
                    &x(n) - &x(2 * n + 2 - j)
                }
            })
            .collect();
        let count = 2 * n + 2;
        let bar = |i: usize| 2 * n + 3 - i;
        let mut edges = Vec::with_capacity(count * 2 * n);
        for i in 1..=count {
            for j in 1..=count {
                if j != i && j != bar(i) {
                    edges.push((i, j, &h[j - 1] - &h[i - 1]));
                }
            }
        }
        let graph = GkmGraph::new(m, count, edges)?;
        let connection = gkm::derive_connection(&graph)?;
        Ok(QuadricContext {
            n,
            graph,
            connection,
            h,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the torus, `n + 1`.
    pub fn m(&self) -> usize {
        self.n + 1
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n + 2
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.vertex_count()
    }

    pub fn bar(&self, v: usize) -> usize {
        2 * self.n + 3 - v
    }

    pub fn graph(&self) -> &GkmGraph {
        &self.graph
    }

    pub fn connection(&self) -> &Connection {
        &self.connection
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        self.graph.check_vertex(v)
    }

    /// The weight `h(v)`; `alpha(i, j) = h(j) - h(i)`.
    pub fn h(&self, v: usize) -> &ExponentVector {
        &self.h[v - 1]
    }

    /// `x_n - x_{n+1}`, the common value of `h(k) + h(bar(k))`.
    pub fn pair_weight(&self) -> ExponentVector {
        let m = self.m();
        &ExponentVector::unit(m, self.n - 1) - &ExponentVector::unit(m, self.n)
    }

    /// `f(v) = y^{h(v)}`.
    pub fn f_char(&self, v: usize) -> Result<LaurentPolynomial> {
        self.check_vertex(v)?;
        LaurentPolynomial::monomial(self.m(), self.h(v).clone())
    }

    /// Exponent of `M_v(l)`.
    pub fn m_exponent(&self, v: usize, l: usize) -> ExponentVector {
        if l == v {
            ExponentVector::zero(self.m())
        } else if l == self.bar(v) {
            &self.pair_weight() - &self.h(l).scaled(2)
        } else {
            self.h(v) - self.h(l)
        }
    }

    /// `alpha(bar(v), k) + alpha(bar(v), bar(k))`, read off the graph; this is
    /// the exponent of `M_v(bar(v))` for every `k` other than `v`, `bar(v)`.
    pub fn m_bar_exponent_via(&self, v: usize, k: usize) -> Result<ExponentVector> {
        let vb = self.bar(v);
        let a = self.graph.axial(vb, k);
        let b = self.graph.axial(vb, self.bar(k));
        match (a, b) {
            (Some(a), Some(b)) => Ok(a + b),
            _ => Err(Error::Precondition(format!(
                "k = {k} must differ from v = {v} and bar(v) = {vb}"
            ))),
        }
    }

    /// Weights `alpha(l, k) = h(k) - h(l)` of the binomial factors of
    /// `Delta_P(l)`, over `k` not in `P` and different from `bar(l)`.
    pub fn delta_factors(&self, p: &AdmissibleSubset, l: usize) -> Vec<ExponentVector> {
        self.vertices()
            .filter(|&k| !p.contains(k) && k != self.bar(l))
            .map(|k| self.h(k) - self.h(l))
            .collect()
    }
}

/// A nonempty vertex set containing no pair `{i, bar(i)}`; exactly the sets
/// spanning complete subgraphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleSubset {
    members: Vec<usize>,
}

impl AdmissibleSubset {
    pub fn new(ctx: &QuadricContext, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        let members: Vec<usize> = set.iter().copied().collect();
        if members.is_empty() {
            return Err(Error::Admissibility {
                members,
                reason: "empty".into(),
            });
        }
        for &v in &members {
            ctx.check_vertex(v)?;
        }
        if let Some(&v) = members.iter().find(|&&v| set.contains(&ctx.bar(v))) {
            return Err(Error::Admissibility {
                reason: format!("contains the pair {{{}, {}}}", v, ctx.bar(v)),
                members,
            });
        }
        Ok(AdmissibleSubset { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// All `3^{n+1} - 1` admissible subsets, by size and then lexicographically.
    pub fn enumerate(ctx: &QuadricContext) -> Vec<AdmissibleSubset> {
        let pairs = ctx.n + 1;
        let mut out = Vec::new();
        let total = 3usize.pow(pairs as u32);
        for code in 1..total {
            let mut c = code;
            let mut members = Vec::new();
            for i in 1..=pairs {
                match c % 3 {
                    1 => members.push(i),
                    2 => members.push(ctx.bar(i)),
                    _ => {}
                }
                c /= 3;
            }
            members.sort_unstable();
            out.push(AdmissibleSubset { members });
        }
        out.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.members.cmp(&b.members))
        });
        out
    }
}

impl fmt::Display for AdmissibleSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `M_v`, or `M_v^{-1}` when `inverted`.
pub fn make_m(ctx: &QuadricContext, v: usize, inverted: bool) -> Result<VertexMap> {
    ctx.check_vertex(v)?;
    let values = ctx
        .vertices()
        .map(|l| {
            let e = ctx.m_exponent(v, l);
            LaurentPolynomial::monomial(ctx.m(), if inverted { -&e } else { e })
        })
        .collect::<Result<Vec<_>>>()?;
    VertexMap::new(ctx.m(), values)
}

/// The Thom class `Delta_P`: supported on `P`, with
/// `Delta_P(l) = prod_{k not in P, k != bar(l)} (1 - f(k) f(l)^{-1})`.
pub fn make_delta(ctx: &QuadricContext, p: &AdmissibleSubset) -> VertexMap {
    let m = ctx.m();
    let values = ctx
        .vertices()
        .map(|l| {
            if !p.contains(l) {
                return LaurentPolynomial::zero(m);
            }
            ctx.delta_factors(p, l)
                .iter()
                .fold(LaurentPolynomial::one(m), |acc, a| {
                    &acc * &LaurentPolynomial::binomial(a)
                })
        })
        .collect();
    VertexMap::new(m, values).expect("uniform ring")
}

/// `X(k) = y_n y_{n+1}^{-1} f(k)^{-2}`.
pub fn make_x(ctx: &QuadricContext) -> VertexMap {
    let values = ctx
        .vertices()
        .map(|k| {
            LaurentPolynomial::monomial(ctx.m(), &ctx.pair_weight() - &ctx.h(k).scaled(2))
                .expect("uniform ring")
        })
        .collect();
    VertexMap::new(ctx.m(), values).expect("uniform ring")
}

/// The two shapes an index set `J` of `F_J` can take.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FIndex {
    /// `J = V \ {v}`, giving `1 - M_v`.
    Complement(usize),
    /// `J` admissible, giving `Delta_J`.
    Admissible(AdmissibleSubset),
}

impl FIndex {
    pub fn classify(ctx: &QuadricContext, j: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = j.iter().copied().collect();
        for &v in &set {
            ctx.check_vertex(v)?;
        }
        if set.len() + 1 == ctx.vertex_count() {
            let missing = ctx
                .vertices()
                .find(|v| !set.contains(v))
                .expect("one missing");
            return Ok(FIndex::Complement(missing));
        }
        AdmissibleSubset::new(ctx, set.iter().copied())
            .map(FIndex::Admissible)
            .map_err(|_| Error::InvalidFIndex(set.into_iter().collect()))
    }

    /// The vertex set `J` itself.
    pub fn members(&self, ctx: &QuadricContext) -> Vec<usize> {
        match self {
            FIndex::Complement(v) => ctx.vertices().filter(|l| l != v).collect(),
            FIndex::Admissible(p) => p.members().to_vec(),
        }
    }
}

/// `F_J`: `1 - M_v` if `J = V \ {v}`, `Delta_J` if `J` is admissible.
pub fn make_f(ctx: &QuadricContext, j: &[usize]) -> Result<VertexMap> {
    match FIndex::classify(ctx, j)? {
        FIndex::Complement(v) => {
            let one = VertexMap::one(ctx.vertex_count(), ctx.m());
            Ok(&one - &make_m(ctx, v, false)?)
        }
        FIndex::Admissible(p) => Ok(make_delta(ctx, &p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[i64]) -> ExponentVector {
        ExponentVector::from(v)
    }

    fn mono(m: usize, e: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::monomial(m, ev(e)).unwrap()
    }

    fn bin(e: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::binomial(&ev(e))
    }

    #[test]
    fn build_rejects_zero() {
        assert_eq!(QuadricContext::build(0).unwrap_err(), Error::InvalidN(0));
    }

    #[test]
    fn axial_values_at_vertex_one_for_n2() {
        let ctx = QuadricContext::build(2).unwrap();
        let g = ctx.graph();
        assert_eq!(g.degree(), 4);
        let got: Vec<_> = g
            .neighbors(1)
            .iter()
            .map(|(k, a)| (*k, a.to_vec()))
            .collect();
        assert_eq!(
            got,
            vec![
                (2, vec![1, 0, 0]),
                (3, vec![0, 1, 0]),
                (4, vec![0, 0, 1]),
                (5, vec![-1, 1, 1]),
            ]
        );
        assert_eq!(ctx.h(4), &ev(&[0, 0, 0]));
    }

    #[test]
    fn h_for_n1() {
        let ctx = QuadricContext::build(1).unwrap();
        let h: Vec<_> = ctx.vertices().map(|v| ctx.h(v).to_vec()).collect();
        assert_eq!(h, vec![vec![0, -1], vec![1, -1], vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn f_examples() {
        let ctx = QuadricContext::build(2).unwrap();
        assert_eq!(ctx.f_char(1).unwrap(), mono(3, &[0, 0, -1]));
        assert!(ctx.f_char(4).unwrap().is_one());
        let ctx1 = QuadricContext::build(1).unwrap();
        assert_eq!(ctx1.f_char(4).unwrap(), mono(2, &[1, 0]));
        assert!(ctx1.f_char(5).is_err());
        // f(j+1) f(1)^{-1} = y_j
        for n in 1..=4 {
            let ctx = QuadricContext::build(n).unwrap();
            for j in 1..=n + 1 {
                assert_eq!(ctx.h(j + 1) - ctx.h(1), ExponentVector::unit(n + 1, j - 1));
            }
        }
    }

    #[test]
    fn m1_on_q4_matches_example() {
        let ctx = QuadricContext::build(2).unwrap();
        let m1 = make_m(&ctx, 1, false).unwrap();
        let expect = [
            [0, 0, 0],
            [-1, 0, 0],
            [0, -1, 0],
            [0, 0, -1],
            [1, -1, -1],
            [0, -1, -1],
        ];
        for (v, e) in expect.iter().enumerate() {
            assert_eq!(m1.at(v + 1), &mono(3, e), "vertex {}", v + 1);
        }
    }

    #[test]
    fn m_examples() {
        for n in 1..=4 {
            let ctx = QuadricContext::build(n).unwrap();
            for v in ctx.vertices() {
                assert!(make_m(&ctx, v, false).unwrap().at(v).is_one());
                assert!(make_m(&ctx, v, true).unwrap().at(v).is_one());
            }
        }
        let ctx = QuadricContext::build(1).unwrap();
        assert_eq!(make_m(&ctx, 1, false).unwrap().at(4), &mono(2, &[-1, -1]));
        assert!(make_m(&ctx, 9, false).is_err());
    }

    #[test]
    fn delta_246_on_q4_matches_example() {
        let ctx = QuadricContext::build(2).unwrap();
        let p = AdmissibleSubset::new(&ctx, [2, 4, 6]).unwrap();
        let d = make_delta(&ctx, &p);
        assert_eq!(d.at(2), &(&bin(&[-1, 0, 0]) * &bin(&[-1, 1, 0])));
        assert_eq!(d.at(4), &(&bin(&[0, 0, -1]) * &bin(&[-1, 1, 0])));
        assert_eq!(d.at(6), &(&bin(&[0, 0, -1]) * &bin(&[-1, 0, 0])));
        for v in [1, 3, 5] {
            assert!(d.at(v).is_zero());
        }
    }

    #[test]
    fn delta_34_on_q2() {
        let ctx = QuadricContext::build(1).unwrap();
        let p = AdmissibleSubset::new(&ctx, [3, 4]).unwrap();
        let d = make_delta(&ctx, &p);
        assert!(d.at(1).is_zero() && d.at(2).is_zero());
        assert_eq!(d.at(3), &bin(&[0, -1]));
        assert_eq!(d.at(4), &bin(&[0, -1]));
    }

    #[test]
    fn admissibility_errors() {
        let ctx = QuadricContext::build(1).unwrap();
        assert!(matches!(
            AdmissibleSubset::new(&ctx, [1, 4]),
            Err(Error::Admissibility { .. })
        ));
        assert!(matches!(
            AdmissibleSubset::new(&ctx, []),
            Err(Error::Admissibility { .. })
        ));
        assert!(AdmissibleSubset::new(&ctx, [5]).is_err());
    }

    #[test]
    fn enumeration_count_and_order() {
        for n in 1..=4 {
            let ctx = QuadricContext::build(n).unwrap();
            let all = AdmissibleSubset::enumerate(&ctx);
            assert_eq!(all.len(), 3usize.pow(n as u32 + 1) - 1);
            let distinct: BTreeSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all
                .windows(2)
                .all(|w| (w[0].len(), &w[0].members) < (w[1].len(), &w[1].members)));
        }
        let ctx = QuadricContext::build(1).unwrap();
        let first: Vec<Vec<usize>> = AdmissibleSubset::enumerate(&ctx)
            .iter()
            .take(5)
            .map(|p| p.members().to_vec())
            .collect();
        assert_eq!(first, vec![vec![1], vec![2], vec![3], vec![4], vec![1, 2]]);
    }

    #[test]
    fn x_examples() {
        let ctx = QuadricContext::build(1).unwrap();
        let x = make_x(&ctx);
        assert_eq!(x.at(1), &mono(2, &[1, 1]));
        assert_eq!(x.at(3), &mono(2, &[1, -1]));
        for n in 1..=4 {
            let ctx = QuadricContext::build(n).unwrap();
            assert_eq!(
                make_x(&ctx).at(n + 2),
                &LaurentPolynomial::monomial(n + 1, ctx.pair_weight()).unwrap()
            );
        }
    }

    #[test]
    fn f_index_examples() {
        let ctx = QuadricContext::build(1).unwrap();
        let f = make_f(&ctx, &[2, 3, 4]).unwrap();
        assert!(f.at(1).is_zero());
        assert_eq!(f.at(2), &bin(&[-1, 0]));
        assert_eq!(f.at(3), &bin(&[0, -1]));
        assert_eq!(f.at(4), &bin(&[-1, -1]));
        let d = make_f(&ctx, &[3, 4]).unwrap();
        assert_eq!(
            d,
            make_delta(&ctx, &AdmissibleSubset::new(&ctx, [3, 4]).unwrap())
        );
        assert_eq!(make_f(&ctx, &[1, 4]), Err(Error::InvalidFIndex(vec![1, 4])));
    }

    #[test]
    fn pair_sums_and_mirror_symmetry() {
        for n in 1..=5 {
            let ctx = QuadricContext::build(n).unwrap();
            let g = ctx.graph();
            for k in ctx.vertices() {
                assert_eq!(ctx.h(k) + ctx.h(ctx.bar(k)), ctx.pair_weight());
                for (v, a) in g.neighbors(k) {
                    assert_eq!(g.axial(ctx.bar(*v), ctx.bar(k)), Some(a));
                }
            }
        }
    }

    #[test]
    fn m_bar_value_does_not_depend_on_k() {
        for n in 1..=4 {
            let ctx = QuadricContext::build(n).unwrap();
            for v in ctx.vertices() {
                let expect = ctx.m_exponent(v, ctx.bar(v));
                for k in ctx.vertices().filter(|&k| k != v && k != ctx.bar(v)) {
                    assert_eq!(ctx.m_bar_exponent_via(v, k).unwrap(), expect);
                }
                assert!(ctx.m_bar_exponent_via(v, v).is_err());
            }
        }
    }

    #[test]
    fn admissible_subsets_are_connection_invariant() {
        for n in 1..=4 {
            let ctx = QuadricContext::build(n).unwrap();
            for p in AdmissibleSubset::enumerate(&ctx) {
                assert!(
                    gkm::is_connection_invariant(ctx.graph(), ctx.connection(), p.members()),
                    "n = {n}, P = {p}"
                );
            }
        }
        let ctx = QuadricContext::build(1).unwrap();
        assert!(!gkm::is_connection_invariant(
            ctx.graph(),
            ctx.connection(),
            &[1, 2, 3]
        ));
    }

    #[test]
    fn connection_is_an_involution() {
        for n in 1..=3 {
            let ctx = QuadricContext::build(n).unwrap();
            let c = ctx.connection();
            for (p, q, _) in ctx.graph().edges() {
                for (k, _) in ctx.graph().neighbors(p) {
                    let (t, _) = c.image(p, q, *k).unwrap();
                    assert_eq!(c.image(q, p, t).unwrap().0, *k);
                }
            }
        }
    }

    #[test]
    fn m_times_inverse_is_one() {
        let ctx = QuadricContext::build(3).unwrap();
        let one = VertexMap::one(ctx.vertex_count(), ctx.m());
        for v in ctx.vertices() {
            let f = &make_m(&ctx, v, false).unwrap() * &make_m(&ctx, v, true).unwrap();
            assert_eq!(f, one);
        }
    }
}
