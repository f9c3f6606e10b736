//! The four relation families among `M_v` and `Delta_P`, plus the identity
//! `y_i = M_{i+1} M_1^{-1}`, checked as exact equalities of vertex maps.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::gkm::VertexMap;
use crate::laurent::{ExponentVector, LaurentPolynomial};
use crate::quadric::{self, AdmissibleSubset, FIndex, QuadricContext};

/// Every generator class of `K(Q_{2n})`, computed once.
///
/// Entries can be overridden to inject corrupted classes; all relation checks
/// read generators from the table only.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    ctx: QuadricContext,
    m: Vec<VertexMap>,
    m_inv: Vec<VertexMap>,
    delta: BTreeMap<AdmissibleSubset, VertexMap>,
    x: VertexMap,
}

impl GeneratorTable {
    pub fn new(ctx: &QuadricContext) -> Self {
        Self::with_strategy(ctx, Strategy::default())
    }

    pub fn with_strategy(ctx: &QuadricContext, strategy: Strategy) -> Self {
        let vertices: Vec<usize> = ctx.vertices().collect();
        let m = exec::map(strategy, &vertices, |&v| {
            quadric::make_m(ctx, v, false).expect("valid vertex")
        });
        let m_inv = exec::map(strategy, &vertices, |&v| {
            quadric::make_m(ctx, v, true).expect("valid vertex")
        });
        let subsets = AdmissibleSubset::enumerate(ctx);
        let deltas = exec::map(strategy, &subsets, |p| quadric::make_delta(ctx, p));
        GeneratorTable {
            ctx: ctx.clone(),
            m,
            m_inv,
            delta: subsets.into_iter().zip(deltas).collect(),
            x: quadric::make_x(ctx),
        }
    }

    pub fn ctx(&self) -> &QuadricContext {
        &self.ctx
    }

    pub fn m(&self, v: usize) -> &VertexMap {
        &self.m[v - 1]
    }

    pub fn m_inv(&self, v: usize) -> &VertexMap {
        &self.m_inv[v - 1]
    }

    pub fn delta(&self, p: &AdmissibleSubset) -> &VertexMap {
        &self.delta[p]
    }

    pub fn x(&self) -> &VertexMap {
        &self.x
    }

    pub fn one(&self) -> VertexMap {
        VertexMap::one(self.ctx.vertex_count(), self.ctx.m())
    }

    /// `1 - M_v`.
    pub fn one_minus_m(&self, v: usize) -> VertexMap {
        &self.one() - self.m(v)
    }

    pub fn admissible(&self) -> impl Iterator<Item = &AdmissibleSubset> {
        self.delta.keys()
    }

    pub fn f(&self, j: &FIndex) -> VertexMap {
        match j {
            FIndex::Complement(v) => self.one_minus_m(*v),
            FIndex::Admissible(p) => self.delta(p).clone(),
        }
    }

    pub fn override_m(&mut self, v: usize, map: VertexMap) {
        self.m[v - 1] = map;
    }

    pub fn override_m_inv(&mut self, v: usize, map: VertexMap) {
        self.m_inv[v - 1] = map;
    }

    pub fn override_delta(&mut self, p: &AdmissibleSubset, map: VertexMap) {
        self.delta.insert(p.clone(), map);
    }

    fn subset(&self, members: impl IntoIterator<Item = usize>) -> Result<AdmissibleSubset> {
        AdmissibleSubset::new(&self.ctx, members)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// Relation 1: `prod_{cap J = empty} F_J = 0`.
    ProductVanishing,
    /// Relation 2: `prod_{i in I}(1 - M_i) = Delta_{(I+b)^c} + M_b Delta_{(I+bar b)^c}`.
    CompleteSetSplit,
    /// Relation 3: `Delta_P (1 - M_i) = Delta_{P - i}`.
    DeltaPeel,
    /// Relation 4: `M_v M_{bar v} = M_w M_{bar w} = X`.
    XConstancy,
    /// `M_{i+1} M_1^{-1} = y_i`.
    GeneratorIdentity,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::GeneratorIdentity,
        RelationKind::XConstancy,
        RelationKind::DeltaPeel,
        RelationKind::CompleteSetSplit,
        RelationKind::ProductVanishing,
    ];

    /// The relation numbered 1-4 in the presentation of the ideal.
    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(RelationKind::ProductVanishing),
            2 => Some(RelationKind::CompleteSetSplit),
            3 => Some(RelationKind::DeltaPeel),
            4 => Some(RelationKind::XConstancy),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum RelationParams {
    Family {
        family: Vec<Vec<usize>>,
    },
    CompleteSet {
        #[serde(rename = "I")]
        subset: Vec<usize>,
        b: usize,
    },
    Peel {
        #[serde(rename = "P")]
        subset: Vec<usize>,
        i: usize,
    },
    Pair {
        v: usize,
        w: usize,
    },
    Index {
        i: usize,
    },
}

/// One relation, evaluated: it holds iff `lhs == rhs`.
#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub params: RelationParams,
    pub lhs: VertexMap,
    pub rhs: VertexMap,
}

impl RelationInstance {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn product_vanishing(t: &GeneratorTable, family: &[Vec<usize>]) -> Result<RelationInstance> {
    let ctx = t.ctx();
    let indices = family
        .iter()
        .map(|j| FIndex::classify(ctx, j))
        .collect::<Result<Vec<_>>>()?;
    let common = ctx
        .vertices()
        .filter(|&v| indices.iter().all(|j| j.members(ctx).contains(&v)))
        .collect::<Vec<_>>();
    if !common.is_empty() {
        return Err(Error::Precondition(format!(
            "family has nonempty intersection {common:?}"
        )));
    }
    let maps: Vec<VertexMap> = indices.iter().map(|j| t.f(j)).collect();
    Ok(RelationInstance {
        kind: RelationKind::ProductVanishing,
        params: RelationParams::Family {
            family: indices.iter().map(|j| j.members(ctx)).collect(),
        },
        lhs: VertexMap::product(ctx.vertex_count(), ctx.m(), &maps)?,
        rhs: VertexMap::zero(ctx.vertex_count(), ctx.m()),
    })
}

pub fn check_product_vanishing(t: &GeneratorTable, family: &[Vec<usize>]) -> Result<bool> {
    product_vanishing(t, family).map(|r| r.holds())
}

/// The unique pair `{b, bar(b)}` inside the complement of `I`, `b < bar(b)`.
pub fn find_b(ctx: &QuadricContext, subset: &[usize]) -> Result<(usize, usize)> {
    let i = AdmissibleSubset::new(ctx, subset.iter().copied())?;
    if i.len() != ctx.n() {
        return Err(Error::Precondition(format!(
            "|I| = {} but n = {}",
            i.len(),
            ctx.n()
        )));
    }
    let pairs: Vec<(usize, usize)> = (1..=ctx.n() + 1)
        .filter(|&b| !i.contains(b) && !i.contains(ctx.bar(b)))
        .map(|b| (b, ctx.bar(b)))
        .collect();
    match pairs.as_slice() {
        [pair] => Ok(*pair),
        _ => Err(Error::Internal(format!(
            "expected one bar pair outside {i}, found {pairs:?}"
        ))),
    }
}

pub fn complete_set_split(t: &GeneratorTable, subset: &[usize]) -> Result<RelationInstance> {
    let ctx = t.ctx();
    let (b, bb) = find_b(ctx, subset)?;
    let i = t.subset(subset.iter().copied())?;
    let complement_without =
        |x: usize| t.subset(ctx.vertices().filter(|&v| !i.contains(v) && v != x));
    let lhs = i
        .members()
        .iter()
        .fold(t.one(), |acc, &v| &acc * &t.one_minus_m(v));
    let rhs = t.delta(&complement_without(b)?) + &(t.m(b) * t.delta(&complement_without(bb)?));
    Ok(RelationInstance {
        kind: RelationKind::CompleteSetSplit,
        params: RelationParams::CompleteSet {
            subset: i.members().to_vec(),
            b,
        },
        lhs,
        rhs,
    })
}

pub fn check_complete_set_split(t: &GeneratorTable, subset: &[usize]) -> Result<bool> {
    complete_set_split(t, subset).map(|r| r.holds())
}

pub fn delta_peel(t: &GeneratorTable, subset: &[usize], i: usize) -> Result<RelationInstance> {
    let p = t.subset(subset.iter().copied())?;
    if !p.contains(i) {
        return Err(Error::Precondition(format!("{i} is not in {p}")));
    }
    if p.len() < 2 {
        return Err(Error::Precondition(format!(
            "{p} must have more than one element"
        )));
    }
    let rest = t.subset(p.members().iter().copied().filter(|&v| v != i))?;
    Ok(RelationInstance {
        kind: RelationKind::DeltaPeel,
        params: RelationParams::Peel {
            subset: p.members().to_vec(),
            i,
        },
        lhs: t.delta(&p) * &t.one_minus_m(i),
        rhs: t.delta(&rest).clone(),
    })
}

pub fn check_delta_peel(t: &GeneratorTable, subset: &[usize], i: usize) -> Result<bool> {
    delta_peel(t, subset, i).map(|r| r.holds())
}

pub fn x_constancy(t: &GeneratorTable, v: usize, w: usize) -> Result<RelationInstance> {
    let ctx = t.ctx();
    ctx.check_vertex(v)?;
    ctx.check_vertex(w)?;
    if v == w {
        return Err(Error::Precondition("v and w must be distinct".into()));
    }
    Ok(RelationInstance {
        kind: RelationKind::XConstancy,
        params: RelationParams::Pair { v, w },
        lhs: t.m(v) * t.m(ctx.bar(v)),
        rhs: t.m(w) * t.m(ctx.bar(w)),
    })
}

pub fn check_x_constancy(t: &GeneratorTable, v: usize, w: usize) -> Result<bool> {
    let r = x_constancy(t, v, w)?;
    Ok(r.holds() && &r.lhs == t.x())
}

pub fn generator_identity(t: &GeneratorTable, i: usize) -> Result<RelationInstance> {
    let ctx = t.ctx();
    if i == 0 || i > ctx.n() + 1 {
        return Err(Error::Precondition(format!(
            "generator index {i} outside 1..={}",
            ctx.n() + 1
        )));
    }
    let y = LaurentPolynomial::monomial(ctx.m(), ExponentVector::unit(ctx.m(), i - 1))?;
    Ok(RelationInstance {
        kind: RelationKind::GeneratorIdentity,
        params: RelationParams::Index { i },
        lhs: t.m(i + 1) * t.m_inv(1),
        rhs: VertexMap::constant(ctx.vertex_count(), y),
    })
}

pub fn check_generator_identity(t: &GeneratorTable, i: usize) -> Result<bool> {
    generator_identity(t, i).map(|r| r.holds())
}

/// Every index set `J` with a valid `F_J`: the vertex complements first, then
/// the admissible subsets in enumeration order.
pub fn f_indices(ctx: &QuadricContext) -> Vec<FIndex> {
    ctx.vertices()
        .map(FIndex::Complement)
        .chain(
            AdmissibleSubset::enumerate(ctx)
                .into_iter()
                .map(FIndex::Admissible),
        )
        .collect()
}

fn mask(ctx: &QuadricContext, j: &FIndex) -> u64 {
    j.members(ctx).iter().fold(0u64, |m, &v| m | (1 << (v - 1)))
}

/// All families of distinct `J`s, of size at most `bound`, whose
/// intersection is empty; each family is a sorted list of positions in
/// [`f_indices`].
pub fn empty_intersection_families(ctx: &QuadricContext, bound: usize) -> Vec<Vec<usize>> {
    let js = f_indices(ctx);
    let masks: Vec<u64> = js.iter().map(|j| mask(ctx, j)).collect();
    let full = (1u64 << ctx.vertex_count()) - 1;
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn go(
        start: usize,
        acc: u64,
        bound: usize,
        masks: &[u64],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for k in start..masks.len() {
            let next = acc & masks[k];
            stack.push(k);
            if next == 0 {
                out.push(stack.clone());
            }
            if stack.len() < bound {
                go(k + 1, next, bound, masks, stack, out);
            }
            stack.pop();
        }
    }
    if bound > 0 {
        go(0, full, bound, &masks, &mut stack, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `count` seeded random families with empty intersection and more than
/// `bound` members; repeats are allowed.
pub fn random_families(
    ctx: &QuadricContext,
    bound: usize,
    count: usize,
    seed: u64,
) -> Vec<Vec<usize>> {
    let js = f_indices(ctx);
    let masks: Vec<u64> = js.iter().map(|j| mask(ctx, j)).collect();
    let full = (1u64 << ctx.vertex_count()) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let target = rng.gen_range(bound + 1..=bound + 4);
            let mut family = Vec::new();
            let mut acc = full;
            while acc != 0 || family.len() < target {
                let k = rng.gen_range(0..js.len());
                acc &= masks[k];
                family.push(k);
            }
            family
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub family_size_bound: usize,
    pub random_families: usize,
    pub sample_seed: u64,
    pub kinds: Vec<RelationKind>,
    pub strategy: Strategy,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            family_size_bound: 3,
            random_families: 100,
            sample_seed: 0,
            kinds: RelationKind::ALL.to_vec(),
            strategy: Strategy::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub kind: RelationKind,
    pub params: RelationParams,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub checks: Vec<CheckOutcome>,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn count(&self, kind: RelationKind) -> usize {
        self.checks.iter().filter(|c| c.kind == kind).count()
    }
}

enum Job {
    Generator(usize),
    Pair(usize, usize),
    Peel(AdmissibleSubset, usize),
    Split(AdmissibleSubset),
    Family(Vec<usize>),
}

/// Runs every selected relation over its full parameter range. Product
/// vanishing covers all empty-intersection families up to the size bound and
/// a seeded sample of larger ones.
pub fn verify_all(t: &GeneratorTable, opts: &VerifyOptions) -> VerifyReport {
    let ctx = t.ctx();
    let n = ctx.n();
    let mut jobs = Vec::new();
    for kind in RelationKind::ALL {
        if !opts.kinds.contains(&kind) {
            continue;
        }
        match kind {
            RelationKind::GeneratorIdentity => jobs.extend((1..=n + 1).map(Job::Generator)),
            RelationKind::XConstancy => {
                for v in ctx.vertices() {
                    for w in ctx.vertices().filter(|&w| w > v) {
                        jobs.push(Job::Pair(v, w));
                    }
                }
            }
            RelationKind::DeltaPeel => {
                for p in t.admissible().filter(|p| p.len() > 1) {
                    jobs.extend(p.members().iter().map(|&i| Job::Peel(p.clone(), i)));
                }
            }
            RelationKind::CompleteSetSplit => {
                jobs.extend(
                    t.admissible()
                        .filter(|p| p.len() == n)
                        .cloned()
                        .map(Job::Split),
                );
            }
            RelationKind::ProductVanishing => {
                for fam in empty_intersection_families(ctx, opts.family_size_bound)
                    .into_iter()
                    .chain(random_families(
                        ctx,
                        opts.family_size_bound,
                        opts.random_families,
                        opts.sample_seed,
                    ))
                {
                    jobs.push(Job::Family(fam));
                }
            }
        }
    }
    let js = f_indices(ctx);
    let maps: Vec<VertexMap> = exec::map(opts.strategy, &js, |j| t.f(j));
    let checks = exec::map(opts.strategy, &jobs, |job| run_job(t, &js, &maps, job));
    let pass = checks.iter().filter(|c| c.pass).count();
    VerifyReport {
        n,
        summary: Summary {
            pass,
            fail: checks.len() - pass,
        },
        checks,
    }
}

fn run_job(t: &GeneratorTable, js: &[FIndex], maps: &[VertexMap], job: &Job) -> CheckOutcome {
    let ctx = t.ctx();
    let (kind, params, result) = match job {
        Job::Generator(i) => (
            RelationKind::GeneratorIdentity,
            RelationParams::Index { i: *i },
            check_generator_identity(t, *i),
        ),
        Job::Pair(v, w) => (
            RelationKind::XConstancy,
            RelationParams::Pair { v: *v, w: *w },
            check_x_constancy(t, *v, *w),
        ),
        Job::Peel(p, i) => (
            RelationKind::DeltaPeel,
            RelationParams::Peel {
                subset: p.members().to_vec(),
                i: *i,
            },
            check_delta_peel(t, p.members(), *i),
        ),
        Job::Split(i) => (
            RelationKind::CompleteSetSplit,
            RelationParams::CompleteSet {
                subset: i.members().to_vec(),
                b: find_b(ctx, i.members()).map_or(0, |p| p.0),
            },
            check_complete_set_split(t, i.members()),
        ),
        Job::Family(positions) => {
            let family: Vec<Vec<usize>> = positions.iter().map(|&k| js[k].members(ctx)).collect();
            let factors = positions.iter().map(|&k| &maps[k]);
            let result =
                VertexMap::product(ctx.vertex_count(), ctx.m(), factors).map(|p| p.is_zero());
            (
                RelationKind::ProductVanishing,
                RelationParams::Family { family },
                result,
            )
        }
    };
    match result {
        Ok(pass) => CheckOutcome {
            kind,
            params,
            pass,
            error: None,
        },
        Err(e) => CheckOutcome {
            kind,
            params,
            pass: false,
            error: Some(e.to_string()),
        },
    }
}
