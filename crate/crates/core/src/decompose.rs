//! The free `R(T)`-basis of `K(Q_{2n})` and the triangular decomposition
//! over it.
//!
//! The basis is ordered
//! `1, (1 - M_1), ..., prod_{i <= n}(1 - M_i), Delta_{n+2..2n+2}, ..., Delta_{2n+2}`
//! and `B_k` vanishes at every vertex below `k`. Decomposition peels one
//! coefficient per vertex in the order `1, 2, ..., 2n + 2`; it depends on this
//! order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::gkm::VertexMap;
use crate::laurent::{ExponentVector, LaurentPolynomial};
use crate::quadric::{AdmissibleSubset, QuadricContext};
use crate::relations::GeneratorTable;

#[derive(Clone, Debug)]
pub struct CanonicalBasis {
    elements: Vec<VertexMap>,
    /// `B_k(k) = prod (1 - y^a)` over the weights `a` listed here.
    diagonal: Vec<Vec<ExponentVector>>,
    m: usize,
}

impl CanonicalBasis {
    pub fn new(ctx: &QuadricContext) -> Self {
        let n = ctx.n();
        let (count, m) = (ctx.vertex_count(), ctx.m());
        let one = VertexMap::one(count, m);
        let mut elements = Vec::with_capacity(count);
        let mut diagonal = Vec::with_capacity(count);
        let mut chain = one.clone();
        for k in 1..=n + 1 {
            elements.push(chain.clone());
            diagonal.push((1..k).map(|i| ctx.h(i) - ctx.h(k)).collect());
            let m_k = crate::quadric::make_m(ctx, k, false).expect("valid vertex");
            chain = &chain * &(&one - &m_k);
        }
        for k in n + 2..=2 * n + 2 {
            let p = AdmissibleSubset::new(ctx, k..=2 * n + 2).expect("tail is admissible");
            elements.push(crate::quadric::make_delta(ctx, &p));
            diagonal.push(ctx.delta_factors(&p, k));
        }
        CanonicalBasis {
            elements,
            diagonal,
            m,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `B_k`, 1-based.
    pub fn element(&self, k: usize) -> &VertexMap {
        &self.elements[k - 1]
    }

    pub fn elements(&self) -> &[VertexMap] {
        &self.elements
    }

    /// Weights of the binomial factors of `B_k(k)`.
    pub fn diagonal_factors(&self, k: usize) -> &[ExponentVector] {
        &self.diagonal[k - 1]
    }

    pub fn decompose(&self, f: &VertexMap) -> Result<Decomposition> {
        if f.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: f.len(),
            });
        }
        if f.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: f.m(),
            });
        }
        let mut rest = f.clone();
        let mut coeffs = Vec::with_capacity(self.len());
        for k in 1..=self.len() {
            if let Some(l) = (1..k).find(|&l| !rest.at(l).is_zero()) {
                return Err(Error::Internal(format!(
                    "residual nonzero at vertex {l} before step {k}"
                )));
            }
            let h = rest
                .at(k)
                .div_exact_product(&self.diagonal[k - 1])
                .map_err(|_| Error::NotAKClass { step: k })?;
            rest = &rest - &self.element(k).scale(&h)?;
            coeffs.push(h);
        }
        if !rest.is_zero() {
            return Err(Error::Internal("terminal remainder is nonzero".into()));
        }
        Ok(Decomposition { coeffs })
    }

    pub fn recompose(&self, d: &Decomposition) -> Result<VertexMap> {
        if d.coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: d.coeffs.len(),
            });
        }
        let mut acc = VertexMap::zero(self.len(), self.m);
        for (h, b) in d.coeffs.iter().zip(&self.elements) {
            if !h.is_zero() {
                acc = acc.checked_add(&b.scale(h)?)?;
            }
        }
        Ok(acc)
    }
}

/// Coefficients `h_1, ..., h_{2n+2}` over the canonical basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub coeffs: Vec<LaurentPolynomial>,
}

impl Decomposition {
    pub fn zero(len: usize, m: usize) -> Self {
        Decomposition {
            coeffs: vec![LaurentPolynomial::zero(m); len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPolynomial::is_zero)
    }
}

pub fn canonical_basis(ctx: &QuadricContext) -> CanonicalBasis {
    CanonicalBasis::new(ctx)
}

pub fn decompose(ctx: &QuadricContext, f: &VertexMap) -> Result<Decomposition> {
    CanonicalBasis::new(ctx).decompose(f)
}

pub fn recompose(ctx: &QuadricContext, d: &Decomposition) -> Result<VertexMap> {
    CanonicalBasis::new(ctx).recompose(d)
}

/// The `v`-th component of the localization embedding.
pub fn restrict_at(ctx: &QuadricContext, f: &VertexMap, v: usize) -> Result<LaurentPolynomial> {
    ctx.check_vertex(v)?;
    f.get(v).cloned().ok_or(Error::InvalidVertex {
        vertex: v,
        count: f.len(),
    })
}

/// `I_v`: the indices `i <= n + 2` whose `M_i` generate the restriction at `v`.
pub fn restriction_generators(ctx: &QuadricContext, v: usize) -> Result<Vec<usize>> {
    ctx.check_vertex(v)?;
    let skip = if v <= ctx.n() + 1 { v } else { ctx.bar(v) };
    Ok((1..=ctx.n() + 2).filter(|&i| i != skip).collect())
}

/// A random element of `R(T)` with up to `max_terms` terms, exponents in
/// `[-2, 2]` and coefficients in `[-3, 3] \ {0}`.
pub fn random_laurent<R: Rng>(rng: &mut R, m: usize, max_terms: usize) -> LaurentPolynomial {
    let count = rng.gen_range(0..=max_terms);
    let mut acc = LaurentPolynomial::zero(m);
    for _ in 0..count {
        let e: ExponentVector = (0..m).map(|_| rng.gen_range(-2..=2)).collect();
        let mut c = rng.gen_range(1..=3i64);
        if rng.gen_bool(0.5) {
            c = -c;
        }
        acc = &acc + &LaurentPolynomial::term(m, e, c).expect("length m");
    }
    acc
}

/// A random K-class: a sum of one to three terms `c * G_1 * ... * G_d`
/// with `d <= 3`, each `G` one of `M_v`, `M_v^{-1}`, `Delta_P`.
pub fn random_k_class<R: Rng>(t: &GeneratorTable, rng: &mut R) -> VertexMap {
    let ctx = t.ctx();
    let subsets: Vec<&AdmissibleSubset> = t.admissible().collect();
    let mut acc = VertexMap::zero(ctx.vertex_count(), ctx.m());
    for _ in 0..rng.gen_range(1..=3) {
        let mut c = random_laurent(rng, ctx.m(), 3);
        if c.is_zero() {
            c = LaurentPolynomial::one(ctx.m());
        }
        let mut term = VertexMap::constant(ctx.vertex_count(), c);
        for _ in 0..rng.gen_range(0..=3) {
            let v = rng.gen_range(1..=ctx.vertex_count());
            let g = match rng.gen_range(0..3) {
                0 => t.m(v),
                1 => t.m_inv(v),
                _ => t.delta(subsets[rng.gen_range(0..subsets.len())]),
            };
            term = &term * g;
        }
        acc = &acc + &term;
    }
    acc
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FreeModuleReport {
    pub n: usize,
    pub trials: usize,
    /// Trials where decompose(recompose(h)) returned `h`.
    pub coefficient_round_trips: usize,
    /// Trials where recompose(decompose(f)) returned `f`.
    pub class_round_trips: usize,
    pub zero_decomposes_to_zero: bool,
    pub failures: Vec<String>,
}

impl FreeModuleReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
            && self.zero_decomposes_to_zero
            && self.coefficient_round_trips == self.trials
            && self.class_round_trips == self.trials
    }
}

/// Round trips in both directions over seeded random inputs, plus the
/// decomposition of the zero map.
pub fn verify_free_module(
    t: &GeneratorTable,
    trials: usize,
    seed: u64,
    strategy: Strategy,
) -> FreeModuleReport {
    let ctx = t.ctx();
    let basis = CanonicalBasis::new(ctx);
    let outcomes = exec::map_range(strategy, trials, |trial| {
        let mut rng = trial_rng(seed, trial);
        let mut failures = Vec::new();
        let d = Decomposition {
            coeffs: (0..basis.len())
                .map(|_| random_laurent(&mut rng, ctx.m(), 3))
                .collect(),
        };
        let coeff_ok = match basis.recompose(&d).and_then(|f| basis.decompose(&f)) {
            Ok(back) if back == d => true,
            Ok(_) => {
                failures.push(format!("trial {trial}: coefficients changed on round trip"));
                false
            }
            Err(e) => {
                failures.push(format!("trial {trial}: coefficient round trip failed: {e}"));
                false
            }
        };
        let f = random_k_class(t, &mut rng);
        let class_ok = match basis.decompose(&f).and_then(|d| basis.recompose(&d)) {
            Ok(back) if back == f => true,
            Ok(_) => {
                failures.push(format!("trial {trial}: class changed on round trip"));
                false
            }
            Err(e) => {
                failures.push(format!("trial {trial}: class round trip failed: {e}"));
                false
            }
        };
        (coeff_ok, class_ok, failures)
    });
    let zero = VertexMap::zero(ctx.vertex_count(), ctx.m());
    let zero_ok = basis.decompose(&zero).is_ok_and(|d| d.is_zero());
    let mut report = FreeModuleReport {
        n: ctx.n(),
        trials,
        zero_decomposes_to_zero: zero_ok,
        ..FreeModuleReport::default()
    };
    if !zero_ok {
        report
            .failures
            .push("zero map has a nonzero decomposition".into());
    }
    for (a, b, f) in outcomes {
        report.coefficient_round_trips += usize::from(a);
        report.class_round_trips += usize::from(b);
        report.failures.extend(f);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::is_k_class;
    use crate::quadric::make_m;

    fn lp(m: usize, terms: &[(&[i64], i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(m, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn basis_is_triangular_k_classes() {
        for n in 1..=3 {
            let ctx = QuadricContext::build(n).unwrap();
            let b = CanonicalBasis::new(&ctx);
            assert_eq!(b.len(), 2 * n + 2);
            assert!(b.element(1).values().iter().all(LaurentPolynomial::is_one));
            for k in 1..=b.len() {
                assert!((1..k).all(|l| b.element(k).at(l).is_zero()));
                assert!(!b.element(k).at(k).is_zero());
                let expanded = b
                    .diagonal_factors(k)
                    .iter()
                    .fold(LaurentPolynomial::one(ctx.m()), |acc, a| {
                        &acc * &LaurentPolynomial::binomial(a)
                    });
                assert_eq!(&expanded, b.element(k).at(k));
                assert!(is_k_class(ctx.graph(), b.element(k)).unwrap().is_k_class());
            }
        }
    }

    #[test]
    fn n1_basis_shape() {
        let ctx = QuadricContext::build(1).unwrap();
        let b = CanonicalBasis::new(&ctx);
        let one = VertexMap::one(4, 2);
        assert_eq!(b.element(2), &(&one - &make_m(&ctx, 1, false).unwrap()));
        let d34 = crate::quadric::make_delta(&ctx, &AdmissibleSubset::new(&ctx, [3, 4]).unwrap());
        let d4 = crate::quadric::make_delta(&ctx, &AdmissibleSubset::new(&ctx, [4]).unwrap());
        assert_eq!(b.element(3), &d34);
        assert_eq!(b.element(4), &d4);
    }

    #[test]
    fn decompose_examples() {
        let ctx = QuadricContext::build(1).unwrap();
        let c = lp(2, &[(&[1, -1], 2), (&[0, 0], -1)]);
        let d = decompose(&ctx, &VertexMap::constant(4, c.clone())).unwrap();
        assert_eq!(d.coeffs[0], c);
        assert!(d.coeffs[1..].iter().all(LaurentPolynomial::is_zero));

        let d = decompose(&ctx, &make_m(&ctx, 1, false).unwrap()).unwrap();
        assert_eq!(d.coeffs[0], LaurentPolynomial::one(2));
        assert_eq!(d.coeffs[1], LaurentPolynomial::constant(2, -1));
        assert!(d.coeffs[2..].iter().all(LaurentPolynomial::is_zero));

        let y1y2 = lp(2, &[(&[1, 1], 1)]);
        let m4 = make_m(&ctx, 4, false).unwrap();
        let expect_values = [
            lp(2, &[(&[1, 1], 1)]),
            lp(2, &[(&[0, 1], 1)]),
            lp(2, &[(&[1, 0], 1)]),
            LaurentPolynomial::one(2),
        ];
        assert_eq!(m4.values(), &expect_values);
        let d = decompose(&ctx, &m4).unwrap();
        assert_eq!(
            d.coeffs,
            vec![
                y1y2.clone(),
                -&y1y2,
                LaurentPolynomial::zero(2),
                LaurentPolynomial::zero(2)
            ]
        );
    }

    #[test]
    fn recompose_unit_vectors() {
        let ctx = QuadricContext::build(2).unwrap();
        let b = CanonicalBasis::new(&ctx);
        for k in 1..=b.len() {
            let mut d = Decomposition::zero(b.len(), ctx.m());
            d.coeffs[k - 1] = LaurentPolynomial::one(ctx.m());
            assert_eq!(&b.recompose(&d).unwrap(), b.element(k));
        }
        assert!(b
            .recompose(&Decomposition::zero(b.len(), ctx.m()))
            .unwrap()
            .is_zero());
        assert!(b.recompose(&Decomposition::zero(3, ctx.m())).is_err());
    }

    #[test]
    fn non_class_fails_with_step() {
        let ctx = QuadricContext::build(2).unwrap();
        let mut values = vec![LaurentPolynomial::zero(3); 6];
        values[0] = LaurentPolynomial::one(3);
        let f = VertexMap::new(3, values).unwrap();
        assert!(matches!(
            decompose(&ctx, &f),
            Err(Error::NotAKClass { step: 2 })
        ));
    }

    #[test]
    fn product_example_round_trips() {
        let ctx = QuadricContext::build(2).unwrap();
        let t = GeneratorTable::new(&ctx);
        let p = AdmissibleSubset::new(&ctx, [6]).unwrap();
        let f = t.m(2) * t.delta(&p);
        let d = decompose(&ctx, &f).unwrap();
        assert_eq!(recompose(&ctx, &d).unwrap(), f);
    }

    #[test]
    fn restriction() {
        let ctx = QuadricContext::build(2).unwrap();
        let t = GeneratorTable::new(&ctx);
        assert!(restrict_at(&ctx, t.m(1), 1).unwrap().is_one());
        let ratio = t.m(2) * t.m_inv(1);
        let y1 = LaurentPolynomial::monomial(3, ExponentVector::unit(3, 0)).unwrap();
        for v in ctx.vertices() {
            assert_eq!(restrict_at(&ctx, &ratio, v).unwrap(), y1);
        }
        assert!(restrict_at(&ctx, &ratio, 7).is_err());
        assert_eq!(restriction_generators(&ctx, 1).unwrap(), vec![2, 3, 4]);
        assert_eq!(restriction_generators(&ctx, 6).unwrap(), vec![2, 3, 4]);
        assert_eq!(restriction_generators(&ctx, 4).unwrap(), vec![1, 2, 4]);
    }

    #[test]
    fn free_module_small() {
        let t = GeneratorTable::new(&QuadricContext::build(2).unwrap());
        let r = verify_free_module(&t, 20, 3, Strategy::default());
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r, verify_free_module(&t, 20, 3, Strategy::Sequential));
    }
}
