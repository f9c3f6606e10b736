//! End-to-end verification over a range of `n`: graph structure, generator
//! K-class sweeps, the relation suite and the free-module round trips.

use serde::Serialize;

use crate::decompose::{self, FreeModuleReport};
use crate::error::Result;
use crate::exec::{self, Strategy};
use crate::gkm::{self, AxiomReport, Connection, GkmGraph, VertexMap};
use crate::lattice;
use crate::laurent::ExponentVector;
use crate::quadric::QuadricContext;
use crate::relations::{self, GeneratorTable, Summary, VerifyOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    pub three_independent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub three_independence_witness: Option<(usize, [usize; 3])>,
    pub connection_derived: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connection_error: Option<String>,
    pub axioms: AxiomReport,
    /// Vertices whose weights fail to span the full lattice.
    pub ineffective_vertices: Vec<usize>,
}

impl StructuralReport {
    pub fn is_ok(&self) -> bool {
        self.three_independent
            && self.connection_derived
            && self.axioms.is_ok()
            && self.ineffective_vertices.is_empty()
    }
}

/// Whether the weights at `p` span `Z^m`: `m` invariant factors, all 1.
pub fn effective_at(g: &GkmGraph, p: usize) -> bool {
    let rows: Vec<&[i64]> = g.neighbors(p).iter().map(|(_, a)| a.as_slice()).collect();
    let d = lattice::smith_invariants(&rows);
    d.len() == g.m() && d.iter().all(|&x| x == 1)
}

/// Three-independence, connection derivation, the axial axioms and
/// effectiveness. If no connection can be derived, the axioms are checked
/// against `fallback` so that the offending axiom is still named.
pub fn structural_check(g: &GkmGraph, fallback: Option<&Connection>) -> StructuralReport {
    let witness = gkm::three_independence_witness(g);
    let derived = gkm::derive_connection(g);
    let axioms = match (&derived, fallback) {
        (Ok(c), _) | (Err(_), Some(c)) => gkm::check_axial_axioms(g, c),
        (Err(_), None) => gkm::check_axial_axioms(g, &Connection::default()),
    };
    StructuralReport {
        three_independent: witness.is_none(),
        three_independence_witness: witness,
        connection_derived: derived.is_ok(),
        connection_error: derived.err().map(|e| e.to_string()),
        axioms,
        ineffective_vertices: g.vertices().filter(|&p| !effective_at(g, p)).collect(),
    }
}

/// Replaces the weight of one oriented edge of one quadric graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxialMutation {
    pub n: usize,
    pub from: usize,
    pub to: usize,
    pub alpha: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfcheckOptions {
    pub max_n: usize,
    pub trials: usize,
    pub seed: u64,
    pub strategy: Strategy,
    pub mutation: Option<AxialMutation>,
}

impl Default for SelfcheckOptions {
    fn default() -> Self {
        SelfcheckOptions {
            max_n: 3,
            trials: 100,
            seed: 0,
            strategy: Strategy::default(),
            mutation: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub checked: usize,
    pub failing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub n: usize,
    pub structural: StructuralReport,
    /// Admissible subsets whose full subgraph is not closed under the connection.
    pub non_invariant_subsets: Vec<Vec<usize>>,
    pub k_class_sweep: SweepReport,
    pub relations: Summary,
    pub free_module: FreeModuleReport,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfcheckReport {
    pub levels: Vec<LevelReport>,
    pub pass: bool,
}

impl SelfcheckReport {
    /// One line per failed check.
    pub fn failure_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for l in &self.levels {
            let n = l.n;
            let s = &l.structural;
            if let Some((p, t)) = s.three_independence_witness {
                out.push(format!(
                    "n={n}: three-independence fails at vertex {p} for {t:?}"
                ));
            }
            if let Some(e) = &s.connection_error {
                out.push(format!("n={n}: connection: {e}"));
            }
            for v in &s.axioms.violations {
                out.push(format!("n={n}: axiom {}: {v}", v.axiom()));
            }
            if !s.ineffective_vertices.is_empty() {
                out.push(format!(
                    "n={n}: ineffective at {:?}",
                    s.ineffective_vertices
                ));
            }
            for p in &l.non_invariant_subsets {
                out.push(format!("n={n}: subset {p:?} is not connection-invariant"));
            }
            for f in &l.k_class_sweep.failing {
                out.push(format!("n={n}: {f}"));
            }
            if l.relations.fail > 0 {
                out.push(format!(
                    "n={n}: {} relation checks failed",
                    l.relations.fail
                ));
            }
            for f in &l.free_module.failures {
                out.push(format!("n={n}: {f}"));
            }
        }
        out
    }
}

/// Runs `is_k_class` on every `M_v`, `M_v^{-1}` and `Delta_P` against `g`.
pub fn k_class_sweep(g: &GkmGraph, t: &GeneratorTable, strategy: Strategy) -> SweepReport {
    let ctx = t.ctx();
    let mut classes: Vec<(String, &VertexMap)> = Vec::new();
    for v in ctx.vertices() {
        classes.push((format!("M_{v}"), t.m(v)));
        classes.push((format!("M_{v}^-1"), t.m_inv(v)));
    }
    for p in t.admissible() {
        classes.push((format!("Delta_{p}"), t.delta(p)));
    }
    let results = exec::map(strategy, &classes, |(name, f)| {
        match gkm::is_k_class_with(g, f, Strategy::Sequential) {
            Ok(r) if r.is_k_class() => None,
            Ok(r) => Some(format!("{name} fails on edges {:?}", r.failing_edges)),
            Err(e) => Some(format!("{name}: {e}")),
        }
    });
    SweepReport {
        checked: classes.len(),
        failing: results.into_iter().flatten().collect(),
    }
}

pub fn run_level(n: usize, opts: &SelfcheckOptions) -> Result<LevelReport> {
    let ctx = QuadricContext::build(n)?;
    let graph = match opts.mutation.as_ref().filter(|mu| mu.n == n) {
        Some(mu) => {
            ctx.graph()
                .with_axial(mu.from, mu.to, ExponentVector::from(mu.alpha.clone()))?
        }
        None => ctx.graph().clone(),
    };
    let structural = structural_check(&graph, Some(ctx.connection()));
    let connection = gkm::derive_connection(&graph).unwrap_or_else(|_| ctx.connection().clone());
    let table = GeneratorTable::with_strategy(&ctx, opts.strategy);
    let non_invariant_subsets: Vec<Vec<usize>> = table
        .admissible()
        .filter(|p| !gkm::is_connection_invariant(&graph, &connection, p.members()))
        .map(|p| p.members().to_vec())
        .collect();
    let k_class_sweep = k_class_sweep(&graph, &table, opts.strategy);
    let relations = relations::verify_all(
        &table,
        &VerifyOptions {
            sample_seed: opts.seed,
            strategy: opts.strategy,
            ..VerifyOptions::default()
        },
    )
    .summary;
    let free_module = decompose::verify_free_module(&table, opts.trials, opts.seed, opts.strategy);
    let pass = structural.is_ok()
        && non_invariant_subsets.is_empty()
        && k_class_sweep.failing.is_empty()
        && relations.fail == 0
        && free_module.all_pass();
    Ok(LevelReport {
        n,
        structural,
        non_invariant_subsets,
        k_class_sweep,
        relations,
        free_module,
        pass,
    })
}

pub fn run(opts: &SelfcheckOptions) -> Result<SelfcheckReport> {
    let levels = (1..=opts.max_n)
        .map(|n| run_level(n, opts))
        .collect::<Result<Vec<_>>>()?;
    let pass = !levels.is_empty() && levels.iter().all(|l| l.pass);
    Ok(SelfcheckReport { levels, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadric_graphs_are_structurally_sound() {
        for n in 1..=4 {
            let ctx = QuadricContext::build(n).unwrap();
            let r = structural_check(ctx.graph(), None);
            assert!(r.is_ok(), "n = {n}: {r:?}");
        }
    }

    #[test]
    fn small_selfcheck_passes() {
        let r = run(&SelfcheckOptions {
            max_n: 2,
            trials: 10,
            seed: 7,
            ..SelfcheckOptions::default()
        })
        .unwrap();
        assert!(r.pass, "{:?}", r.failure_lines());
        assert!(r.failure_lines().is_empty());
    }

    #[test]
    fn mutated_axial_value_names_antisymmetry() {
        let ctx = QuadricContext::build(2).unwrap();
        let mut alpha = ctx.graph().axial(1, 2).unwrap().to_vec();
        alpha[0] += 1;
        let r = run(&SelfcheckOptions {
            max_n: 2,
            trials: 2,
            mutation: Some(AxialMutation {
                n: 2,
                from: 1,
                to: 2,
                alpha,
            }),
            ..SelfcheckOptions::default()
        })
        .unwrap();
        assert!(!r.pass);
        assert!(r.levels[0].pass);
        let lines = r.failure_lines();
        assert!(
            lines.iter().any(|l| l.contains("axiom antisymmetry")),
            "{lines:?}"
        );
    }

    #[test]
    fn non_spanning_weights_are_ineffective() {
        let g = GkmGraph::new(
            1,
            2,
            [
                (1, 2, ExponentVector::from(vec![2])),
                (2, 1, ExponentVector::from(vec![-2])),
            ],
        )
        .unwrap();
        assert!(!effective_at(&g, 1));
    }
}
