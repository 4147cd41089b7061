//! Graph-spec file parsing and report serialization (JSON).
//!
//! A spec file is a UTF-8 JSON document:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "vertices": [{"id": "v1", "potential": 0.0}],
//!   "edges": [{"from": "v1", "to": "v1", "index": [1, 0]}]
//! }
//! ```
//!
//! Reports use a fixed key order and serialize floats losslessly, so a
//! report emitted twice from the same inputs is byte-identical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FundamentalEdge, PeriodicGraphSpec, VertexClass};
use crate::pipeline::Analysis;

#[derive(Debug, Serialize, Deserialize)]
struct SpecFile {
    dimension: usize,
    vertices: Vec<VertexEntry>,
    edges: Vec<EdgeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexEntry {
    id: String,
    potential: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeEntry {
    from: String,
    to: String,
    index: Vec<i64>,
}

/// Parses a spec file into the domain model without the connectivity check:
/// syntax, schema, id resolution, and index arity only.
pub fn parse_spec_structural(text: &str) -> Result<PeriodicGraphSpec<f64>> {
    let file: SpecFile = serde_json::from_str(text)?;
    if file.vertices.is_empty() {
        return Err(Error::EmptyClasses);
    }
    if file.edges.is_empty() {
        return Err(Error::EmptyEdges);
    }
    let mut classes: Vec<VertexClass<f64>> = Vec::with_capacity(file.vertices.len());
    for v in &file.vertices {
        if classes.iter().any(|c| c.id == v.id) {
            return Err(Error::DuplicateClass { id: v.id.clone() });
        }
        if !v.potential.is_finite() {
            return Err(Error::NonFinitePotential { id: v.id.clone() });
        }
        classes.push(VertexClass {
            id: v.id.clone(),
            potential: v.potential,
        });
    }
    let lookup = |edge: usize, id: &str| -> Result<usize> {
        classes
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::UnknownClass {
                edge,
                id: id.to_string(),
            })
    };
    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, e) in file.edges.iter().enumerate() {
        let from = lookup(i, &e.from)?;
        let to = lookup(i, &e.to)?;
        if e.index.len() != file.dimension {
            return Err(Error::IndexLength {
                edge: i,
                from: e.from.clone(),
                to: e.to.clone(),
                got: e.index.len(),
                expected: file.dimension,
            });
        }
        edges.push(FundamentalEdge::new(from, to, e.index.clone()));
    }
    Ok(PeriodicGraphSpec::new(file.dimension, classes, edges))
}

/// Parses a spec file and checks that it describes a connected periodic
/// graph; any failure carries the offending element or reason.
pub fn parse_spec(text: &str) -> Result<PeriodicGraphSpec<f64>> {
    let spec = parse_spec_structural(text)?;
    spec.require_valid()?;
    Ok(spec)
}

/// Serializes a spec back to its file form; `parse_spec` of the output
/// reproduces the domain model field for field.
pub fn spec_to_json(spec: &PeriodicGraphSpec<f64>) -> String {
    let file = SpecFile {
        dimension: spec.dimension,
        vertices: spec
            .classes
            .iter()
            .map(|c| VertexEntry {
                id: c.id.clone(),
                potential: c.potential,
            })
            .collect(),
        edges: spec
            .edges
            .iter()
            .map(|e| EdgeEntry {
                from: spec.classes[e.from_class].id.clone(),
                to: spec.classes[e.to_class].id.clone(),
                index: e.index.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("spec serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportSummary {
    pub nu: usize,
    #[serde(rename = "nu_D")]
    pub nu_d: usize,
    #[serde(rename = "nu_N")]
    pub nu_n: usize,
    pub beta: usize,
    pub kappa_plus: usize,
    #[serde(rename = "grid_N")]
    pub grid_n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BandEntry {
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub flat_candidate: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Estimates {
    pub est1: f64,
    pub est2: f64,
    pub total_band_length: f64,
}

/// Full analysis report in its file form.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportFile {
    pub summary: ReportSummary,
    pub bands: Vec<BandEntry>,
    pub gaps_observed: Vec<[f64; 2]>,
    #[serde(rename = "J")]
    pub j: Vec<[f64; 2]>,
    #[serde(rename = "J_tilde")]
    pub j_tilde: Vec<[f64; 2]>,
    #[serde(rename = "J_cap")]
    pub j_cap: Vec<Option<[f64; 2]>>,
    pub inclusion_ok: bool,
    pub certified_gaps: Vec<[f64; 2]>,
    pub estimates: Estimates,
}

impl ReportFile {
    pub fn from_analysis(analysis: &Analysis<f64>) -> Self {
        let report = &analysis.report;
        ReportFile {
            summary: ReportSummary {
                nu: analysis.nu,
                nu_d: analysis.neumann.nu_d,
                nu_n: analysis.neumann.nu_n,
                beta: analysis.neumann.beta,
                kappa_plus: analysis.kappa_plus,
                grid_n: analysis.grid_n,
            },
            bands: analysis
                .bands
                .bands
                .iter()
                .zip(&analysis.bands.flat_candidate)
                .enumerate()
                .map(|(i, (band, &flat))| BandEntry {
                    n: i + 1,
                    lo: band.lo,
                    hi: band.hi,
                    flat_candidate: flat,
                })
                .collect(),
            gaps_observed: analysis
                .bands
                .gaps
                .iter()
                .map(|g| [g.lo, g.hi])
                .collect(),
            j: report.j.iter().map(|iv| [iv.lo, iv.hi]).collect(),
            j_tilde: report.j_tilde.iter().map(|iv| [iv.lo, iv.hi]).collect(),
            j_cap: report
                .j_cap
                .iter()
                .map(|cap| cap.map(|iv| [iv.lo, iv.hi]))
                .collect(),
            inclusion_ok: report.inclusion_ok,
            certified_gaps: report
                .certified_gaps
                .iter()
                .map(|g| [g.lo, g.hi])
                .collect(),
            estimates: Estimates {
                est1: report.est1,
                est2: report.est2,
                total_band_length: report.total_band_length,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::pipeline::{analyze, AnalysisOptions};

    const SQUARE: &str = r#"{
        "dimension": 2,
        "vertices": [{"id": "v1", "potential": 0.0}],
        "edges": [
            {"from": "v1", "to": "v1", "index": [1, 0]},
            {"from": "v1", "to": "v1", "index": [0, 1]}
        ]
    }"#;

    #[test]
    fn parses_square_lattice() {
        let spec = parse_spec(SQUARE).unwrap();
        assert_eq!(spec.nu(), 1);
        assert_eq!(spec.edges.len(), 2);
        assert_eq!(spec, fixtures::square_lattice(0.0f64));
    }

    #[test]
    fn parses_fig1_fixture_text() {
        let text = spec_to_json(&fixtures::fig1_graph::<f64>());
        let spec = parse_spec(&text).unwrap();
        assert_eq!(spec.nu(), 3);
        assert_eq!(spec.degrees().kappa, vec![6, 4, 2]);
    }

    #[test]
    fn index_arity_error_names_the_edge() {
        let text = r#"{
            "dimension": 2,
            "vertices": [{"id": "a", "potential": 0.0}],
            "edges": [{"from": "a", "to": "a", "index": [1, 0, 0]}]
        }"#;
        match parse_spec(text) {
            Err(Error::IndexLength { edge: 0, got: 3, expected: 2, from, .. }) => {
                assert_eq!(from, "a");
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn unknown_class_and_duplicates() {
        let text = r#"{
            "dimension": 1,
            "vertices": [{"id": "a", "potential": 0.0}],
            "edges": [{"from": "a", "to": "b", "index": [1]}]
        }"#;
        match parse_spec(text) {
            Err(Error::UnknownClass { edge: 0, id }) => assert_eq!(id, "b"),
            other => panic!("unexpected: {other:?}"),
        }

        let text = r#"{
            "dimension": 1,
            "vertices": [{"id": "a", "potential": 0.0}, {"id": "a", "potential": 1.0}],
            "edges": [{"from": "a", "to": "a", "index": [1]}]
        }"#;
        assert!(matches!(
            parse_spec(text),
            Err(Error::DuplicateClass { .. })
        ));
    }

    #[test]
    fn malformed_json_reports_location() {
        let err = parse_spec("{\n  \"dimension\": 2,\n  oops\n}").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("line 3"), "{message}");
    }

    #[test]
    fn disconnected_spec_is_rejected_with_reason() {
        let text = r#"{
            "dimension": 2,
            "vertices": [{"id": "v1", "potential": 0.0}],
            "edges": [{"from": "v1", "to": "v1", "index": [2, 0]}]
        }"#;
        let err = parse_spec(text).unwrap_err();
        assert!(err.to_string().contains("cycle lattice index 2"));
        // The structural pass alone accepts it.
        assert!(parse_spec_structural(text).is_ok());
    }

    #[test]
    fn spec_round_trips_through_emit_and_parse() {
        for spec in [
            fixtures::square_lattice(0.5),
            fixtures::fig1_graph::<f64>(),
            fixtures::star_lattice::<f64>(3),
        ] {
            let text = spec_to_json(&spec);
            assert_eq!(parse_spec(&text).unwrap(), spec);
        }
    }

    #[test]
    fn report_round_trips_and_is_deterministic() {
        let spec = fixtures::fig1_graph::<f64>();
        let analysis = analyze(&spec, &AnalysisOptions::default()).unwrap();
        let report = ReportFile::from_analysis(&analysis);
        let a = report.to_json();
        let b = ReportFile::from_analysis(&analysis).to_json();
        assert_eq!(a, b);
        let parsed = ReportFile::parse(&a).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn empty_dirichlet_report_has_envelope_intervals() {
        let analysis = analyze(
            &fixtures::square_lattice(0.0f64),
            &AnalysisOptions::default(),
        )
        .unwrap();
        let report = ReportFile::from_analysis(&analysis);
        assert_eq!(report.summary.nu_d, 0);
        assert_eq!(report.j.len(), 1);
        assert!(report.j[0][0].abs() < 1e-12);
        assert_eq!(report.j[0][1], 8.0);
        assert_eq!(report.j_tilde.len(), 1);
        assert!((report.j_tilde[0][1] - 9.0).abs() < 1e-12);
    }
}
