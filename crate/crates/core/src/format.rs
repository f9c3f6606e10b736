//! JSON documents for graphs, vertex maps and decompositions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decompose::{CanonicalBasis, Decomposition};
use crate::error::{Error, Result};
use crate::gkm::{GkmGraph, VertexMap};
use crate::laurent::{ExponentVector, LaurentPolynomial};
use crate::quadric::QuadricContext;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: usize,
    to: usize,
    alpha: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    m: usize,
    vertices: usize,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexMapDoc {
    n: usize,
    values: BTreeMap<usize, LaurentPolynomial>,
}

#[derive(Serialize)]
struct BasisDoc {
    n: usize,
    elements: Vec<BTreeMap<usize, LaurentPolynomial>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionDoc {
    n: usize,
    coeffs: Vec<LaurentPolynomial>,
}

/// Serializes a document, with indentation if `pretty`.
pub fn render<T: Serialize + ?Sized>(value: &T, pretty: bool) -> String {
    let out = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    };
    out.expect("documents serialize")
}

fn parse_doc<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn emit_graph(g: &GkmGraph, pretty: bool) -> String {
    let doc = GraphDoc {
        m: g.m(),
        vertices: g.vertex_count(),
        edges: g
            .edges()
            .map(|(p, q, a)| EdgeDoc {
                from: p,
                to: q,
                alpha: a.to_vec(),
            })
            .collect(),
    };
    render(&doc, pretty)
}

/// Parses a graph document; the edge list must contain both directions of
/// every edge.
pub fn graph_from_json(text: &str) -> Result<GkmGraph> {
    let doc: GraphDoc = parse_doc(text)?;
    GkmGraph::new(
        doc.m,
        doc.vertices,
        doc.edges
            .into_iter()
            .map(|e| (e.from, e.to, ExponentVector::from(e.alpha))),
    )
}

pub fn emit_vertex_map(n: usize, f: &VertexMap, pretty: bool) -> String {
    let doc = VertexMapDoc {
        n,
        values: values_doc(f),
    };
    render(&doc, pretty)
}

fn values_doc(f: &VertexMap) -> BTreeMap<usize, LaurentPolynomial> {
    f.iter().map(|(v, p)| (v, p.clone())).collect()
}

/// `{"n": n, "elements": [values of B_1, ..., values of B_{2n+2}]}`.
pub fn emit_basis(n: usize, basis: &CanonicalBasis, pretty: bool) -> String {
    let doc = BasisDoc {
        n,
        elements: basis.elements().iter().map(values_doc).collect(),
    };
    render(&doc, pretty)
}

/// Parses a vertex map for `ctx`: `n` must agree and every vertex must carry
/// a polynomial in `n + 1` variables.
pub fn vertex_map_from_json(ctx: &QuadricContext, text: &str) -> Result<VertexMap> {
    let doc: VertexMapDoc = parse_doc(text)?;
    if doc.n != ctx.n() {
        return Err(Error::Parse(format!(
            "document has n = {} but expected {}",
            doc.n,
            ctx.n()
        )));
    }
    let keys: Vec<usize> = doc.values.keys().copied().collect();
    let expected: Vec<usize> = ctx.vertices().collect();
    if keys != expected {
        return Err(Error::Parse(format!(
            "values must be given at exactly the vertices 1..={}, found {keys:?}",
            ctx.vertex_count()
        )));
    }
    for (v, p) in &doc.values {
        if p.m() != ctx.m() {
            return Err(Error::Parse(format!(
                "value at vertex {v} has m = {} but expected {}",
                p.m(),
                ctx.m()
            )));
        }
    }
    VertexMap::new(ctx.m(), doc.values.into_values().collect())
}

pub fn emit_decomposition(n: usize, d: &Decomposition, pretty: bool) -> String {
    let doc = DecompositionDoc {
        n,
        coeffs: d.coeffs.clone(),
    };
    render(&doc, pretty)
}

pub fn decomposition_from_json(ctx: &QuadricContext, text: &str) -> Result<Decomposition> {
    let doc: DecompositionDoc = parse_doc(text)?;
    if doc.n != ctx.n() {
        return Err(Error::Parse(format!(
            "document has n = {} but expected {}",
            doc.n,
            ctx.n()
        )));
    }
    if doc.coeffs.len() != ctx.vertex_count() {
        return Err(Error::Parse(format!(
            "expected {} coefficients, found {}",
            ctx.vertex_count(),
            doc.coeffs.len()
        )));
    }
    if let Some(k) = doc.coeffs.iter().position(|c| c.m() != ctx.m()) {
        return Err(Error::Parse(format!(
            "coefficient #{} has the wrong m",
            k + 1
        )));
    }
    Ok(Decomposition { coeffs: doc.coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadric::make_m;

    #[test]
    fn graph_round_trip() {
        let ctx = QuadricContext::build(2).unwrap();
        let text = emit_graph(ctx.graph(), false);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["m"], 3);
        assert_eq!(v["vertices"], 6);
        assert_eq!(v["edges"].as_array().unwrap().len(), 6 * 4);
        let back = graph_from_json(&text).unwrap();
        assert_eq!(emit_graph(&back, false), text);
    }

    #[test]
    fn vertex_map_round_trip() {
        let ctx = QuadricContext::build(2).unwrap();
        let f = make_m(&ctx, 1, false).unwrap();
        let text = emit_vertex_map(2, &f, false);
        assert!(text
            .starts_with(r#"{"n":2,"values":{"1":{"m":3,"terms":[{"exp":[0,0,0],"coef":"1"}]}"#));
        assert_eq!(vertex_map_from_json(&ctx, &text).unwrap(), f);
        assert_eq!(emit_vertex_map(2, &f, true).replace([' ', '\n'], ""), text);
    }

    #[test]
    fn vertex_map_validation() {
        let ctx = QuadricContext::build(1).unwrap();
        let one = r#"{"m":2,"terms":[{"exp":[0,0],"coef":"1"}]}"#;
        let full = format!(r#"{{"n":1,"values":{{"1":{one},"2":{one},"3":{one},"4":{one}}}}}"#);
        assert!(vertex_map_from_json(&ctx, &full).is_ok());
        let wrong_n = full.replacen(r#""n":1"#, r#""n":2"#, 1);
        assert!(vertex_map_from_json(&ctx, &wrong_n).is_err());
        let missing = format!(r#"{{"n":1,"values":{{"1":{one},"2":{one},"3":{one}}}}}"#);
        assert!(vertex_map_from_json(&ctx, &missing).is_err());
        let bad_m = r#"{"m":3,"terms":[]}"#;
        let wrong_m =
            format!(r#"{{"n":1,"values":{{"1":{bad_m},"2":{one},"3":{one},"4":{one}}}}}"#);
        assert!(vertex_map_from_json(&ctx, &wrong_m).is_err());
        assert!(vertex_map_from_json(&ctx, "[]").is_err());
    }

    #[test]
    fn decomposition_round_trip() {
        let ctx = QuadricContext::build(1).unwrap();
        let d = crate::decompose::decompose(&ctx, &make_m(&ctx, 4, false).unwrap()).unwrap();
        let text = emit_decomposition(1, &d, false);
        assert_eq!(decomposition_from_json(&ctx, &text).unwrap(), d);
        let short = r#"{"n":1,"coeffs":[]}"#;
        assert!(decomposition_from_json(&ctx, short).is_err());
    }
}
