//! JSON interchange formats for instances, solutions, reduction sources and
//! provenance maps.

use std::collections::BTreeMap;

use delaybetter_core::model::{
    Delaying, Demand, GraphBuilder, Instance, ModelError, NoReason, SolveResult, TemporalPath, Time,
};
use delaybetter_core::reductions::{
    Color, NaeFormula, Origin, PrecoloredCubicGraph, ReductionError, ReductionOutput, Source,
};
use serde::{Deserialize, Serialize};

/// Why an input document was rejected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    /// Not syntactically valid, or not shaped like the expected document.
    #[error("MALFORMED: line {line}, column {column}: {message}")]
    Malformed { line: usize, column: usize, message: String },
    /// Well-formed but violating an instance invariant.
    #[error("INVALID: {0}")]
    Invalid(String),
}

impl FormatError {
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Malformed { .. } => "MALFORMED",
            FormatError::Invalid(_) => "INVALID",
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Malformed {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl From<ModelError> for FormatError {
    fn from(e: ModelError) -> Self {
        FormatError::Invalid(e.to_string())
    }
}

impl From<ReductionError> for FormatError {
    fn from(e: ReductionError) -> Self {
        FormatError::Invalid(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub u: String,
    pub v: String,
    pub time: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandDoc {
    pub from: String,
    pub to: String,
    pub deadline: Time,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub directed: bool,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    pub demands: Vec<DemandDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Time>,
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

impl InstanceDoc {
    pub fn from_instance(instance: &Instance) -> Self {
        let g = instance.graph();
        let name = |v| g.name(v).to_string();
        let paths = instance.paths();
        Self {
            directed: g.is_directed(),
            vertices: g.vertex_names().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    u: name(e.u),
                    v: name(e.v),
                    time: e.time,
                })
                .collect(),
            demands: instance
                .demands()
                .iter()
                .enumerate()
                .map(|(i, d)| DemandDoc {
                    from: name(d.source),
                    to: name(d.target),
                    deadline: d.deadline,
                    path: paths.map(|ps| ps[i].steps().map(|(a, b, _)| (name(a), name(b))).collect()),
                })
                .collect(),
            delta: instance.delta(),
        }
    }

    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        let mut b = GraphBuilder::new(self.directed);
        for v in &self.vertices {
            b.add_vertex(v.as_str());
        }
        let lookup = |b: &GraphBuilder, name: &str, at: String| {
            b.vertex_id(name).ok_or_else(|| ModelError::UnknownVertex {
                at,
                name: name.to_string(),
            })
        };
        for (i, e) in self.edges.iter().enumerate() {
            let u = lookup(&b, &e.u, format!("edges[{i}].u"))?;
            let v = lookup(&b, &e.v, format!("edges[{i}].v"))?;
            b.add_edge(u, v, e.time);
        }
        let graph = b.build()?;
        let id = |name: &str, at: String| {
            graph.vertex_id(name).ok_or_else(|| ModelError::UnknownVertex {
                at,
                name: name.to_string(),
            })
        };
        let mut demands = Vec::with_capacity(self.demands.len());
        for (i, d) in self.demands.iter().enumerate() {
            demands.push(Demand::new(
                id(&d.from, format!("demands[{i}].from"))?,
                id(&d.to, format!("demands[{i}].to"))?,
                d.deadline,
            ));
        }
        let with_paths = self.demands.iter().filter(|d| d.path.is_some()).count();
        if with_paths == 0 {
            return Ok(match self.delta {
                Some(delta) => Instance::delta_delay_better(graph, demands, delta)?,
                None => Instance::delay_better(graph, demands)?,
            });
        }
        if with_paths < self.demands.len() {
            let at = self.demands.iter().position(|d| d.path.is_none()).unwrap_or(0);
            return Err(ModelError::MixedDemandKinds {
                at: format!("demands[{at}]"),
            }
            .into());
        }
        if self.delta.is_some() {
            return Err(ModelError::DeltaWithPaths.into());
        }
        let mut seqs = Vec::with_capacity(self.demands.len());
        for (i, d) in self.demands.iter().enumerate() {
            let pairs = d.path.as_deref().unwrap_or_default();
            let mut seq = vec![demands[i].source];
            for (k, (a, b)) in pairs.iter().enumerate() {
                let at = format!("demands[{i}].path[{k}]");
                let a = id(a, at.clone())?;
                let b = id(b, at.clone())?;
                if *seq.last().unwrap() != a {
                    return Err(if k == 0 {
                        ModelError::PathEndpoints {
                            at: format!("demands[{i}].path"),
                        }
                    } else {
                        ModelError::Discontiguous { at }
                    }
                    .into());
                }
                seq.push(b);
            }
            seqs.push(seq);
        }
        Ok(Instance::path_delay_better(graph, demands, seqs)?)
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    serde_json::from_str::<InstanceDoc>(text)?.to_instance()
}

pub fn serialize_instance(instance: &Instance) -> String {
    pretty(&InstanceDoc::from_instance(instance))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionDoc {
    pub answer: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<EdgeDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub routes: Option<Vec<Vec<EdgeDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

fn route_doc(instance: &Instance, route: &TemporalPath) -> Vec<EdgeDoc> {
    let g = instance.graph();
    route
        .iter()
        .map(|s| EdgeDoc {
            u: g.name(s.from).to_string(),
            v: g.name(s.to).to_string(),
            time: s.time,
        })
        .collect()
}

pub fn labels_doc(instance: &Instance, witness: &Delaying) -> Vec<EdgeDoc> {
    let g = instance.graph();
    g.edges()
        .iter()
        .zip(witness.labels())
        .map(|(e, &t)| EdgeDoc {
            u: g.name(e.u).to_string(),
            v: g.name(e.v).to_string(),
            time: t,
        })
        .collect()
}

impl SolutionDoc {
    pub fn from_result(instance: &Instance, result: &SolveResult) -> Self {
        match result {
            SolveResult::Yes { witness, routes } => Self {
                answer: "yes".into(),
                labels: Some(labels_doc(instance, witness)),
                routes: Some(routes.iter().map(|r| route_doc(instance, r)).collect()),
                reason: None,
            },
            SolveResult::No(reason) => Self {
                answer: "no".into(),
                labels: None,
                routes: None,
                reason: Some(reason.code().into()),
            },
        }
    }
}

pub fn serialize_solution(instance: &Instance, result: &SolveResult) -> String {
    pretty(&SolutionDoc::from_result(instance, result))
}

/// A solution document resolved against its instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedSolution {
    Yes(Delaying),
    No(NoReason),
}

/// Reads a solution for `instance`. Labels must name every edge exactly
/// once; undirected edges may be written in either order.
pub fn parse_solution(text: &str, instance: &Instance) -> Result<ParsedSolution, FormatError> {
    let doc: SolutionDoc = serde_json::from_str(text)?;
    let g = instance.graph();
    match doc.answer.as_str() {
        "no" => {
            let code = doc.reason.unwrap_or_default();
            NoReason::from_code(&code)
                .map(ParsedSolution::No)
                .ok_or_else(|| FormatError::Invalid(format!("reason: unknown code '{code}'")))
        }
        "yes" => {
            let labels = doc
                .labels
                .ok_or_else(|| FormatError::Invalid("labels: missing for a yes answer".into()))?;
            let mut out: Vec<Option<Time>> = vec![None; g.edge_count()];
            for (i, l) in labels.iter().enumerate() {
                let e = g.find_edge_by_name(&l.u, &l.v).ok_or_else(|| ModelError::MissingEdge {
                    at: format!("labels[{i}]"),
                    u: l.u.clone(),
                    v: l.v.clone(),
                })?;
                if out[e].replace(l.time).is_some() {
                    return Err(FormatError::Invalid(format!(
                        "labels[{i}]: edge ('{}', '{}') labelled twice",
                        l.u, l.v
                    )));
                }
            }
            let labels = out
                .into_iter()
                .enumerate()
                .map(|(e, t)| {
                    t.ok_or_else(|| {
                        let edge = g.edge(e);
                        FormatError::Invalid(format!(
                            "labels: no label for edge ('{}', '{}')",
                            g.name(edge.u),
                            g.name(edge.v)
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
            Ok(ParsedSolution::Yes(Delaying::new(labels)))
        }
        other => Err(FormatError::Invalid(format!("answer: expected \"yes\" or \"no\", found '{other}'"))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NaeDoc {
    pub n: usize,
    pub clauses: Vec<[usize; 3]>,
}

pub fn parse_nae(text: &str) -> Result<NaeFormula, FormatError> {
    let doc: NaeDoc = serde_json::from_str(text)?;
    Ok(NaeFormula::new(doc.n, doc.clauses)?)
}

pub fn serialize_nae(f: &NaeFormula) -> String {
    pretty(&NaeDoc {
        n: f.variable_count(),
        clauses: f.clauses().to_vec(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubicDoc {
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    pub adj: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub precolor: BTreeMap<String, String>,
}

/// Reads a precoloured cubic graph. Vertices are numbered A first, then B;
/// precolour keys are `"u-v"` and values one of `R`, `G`, `B`, `U`.
pub fn parse_cubic(text: &str) -> Result<PrecoloredCubicGraph, FormatError> {
    let doc: CubicDoc = serde_json::from_str(text)?;
    let names: Vec<String> = doc.a.iter().chain(&doc.b).cloned().collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() != names.len() {
        return Err(FormatError::Invalid("A, B: a vertex is listed twice".into()));
    }
    let id = |n: &str, at: &str| {
        index
            .get(n)
            .copied()
            .ok_or_else(|| FormatError::Invalid(format!("{at}: unknown vertex '{n}'")))
    };
    let mut adj = Vec::with_capacity(names.len());
    for n in &names {
        let row = doc
            .adj
            .get(n)
            .ok_or_else(|| FormatError::Invalid(format!("adj: no row for '{n}'")))?;
        let at = format!("adj.{n}");
        if row.len() != 3 {
            return Err(FormatError::Invalid(format!("{at}: {} neighbours, expected 3", row.len())));
        }
        adj.push([id(&row[0], &at)?, id(&row[1], &at)?, id(&row[2], &at)?]);
    }
    if let Some(extra) = doc.adj.keys().find(|k| !index.contains_key(k.as_str())) {
        return Err(FormatError::Invalid(format!("adj: unknown vertex '{extra}'")));
    }
    let mut precolor = BTreeMap::new();
    for (k, c) in &doc.precolor {
        let at = format!("precolor.{k}");
        let pair = k
            .match_indices('-')
            .map(|(p, _)| (&k[..p], &k[p + 1..]))
            .find(|(a, b)| index.contains_key(a) && index.contains_key(b))
            .ok_or_else(|| FormatError::Invalid(format!("{at}: not a pair of known vertices")))?;
        let (a, b) = (index[pair.0], index[pair.1]);
        let color = match c.as_str() {
            "U" => continue,
            s if s.len() == 1 => Color::from_letter(s.chars().next().unwrap()),
            _ => None,
        }
        .ok_or_else(|| FormatError::Invalid(format!("{at}: colour must be R, G, B or U")))?;
        precolor.insert((a, b), color);
    }
    let in_a = (0..names.len()).map(|i| i < doc.a.len()).collect();
    Ok(PrecoloredCubicGraph::new(names, in_a, adj, precolor)?)
}

pub fn serialize_cubic(g: &PrecoloredCubicGraph) -> String {
    let n = g.vertex_count();
    let side = |a: bool| (0..n).filter(|&v| g.in_a(v) == a).map(|v| g.name(v).to_string()).collect();
    pretty(&CubicDoc {
        a: side(true),
        b: side(false),
        adj: (0..n)
            .map(|v| (g.name(v).to_string(), g.neighbors(v).iter().map(|&w| g.name(w).to_string()).collect()))
            .collect(),
        precolor: g
            .precoloring()
            .iter()
            .map(|(&(a, b), c)| (format!("{}-{}", g.name(a), g.name(b)), c.letter().to_string()))
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginDoc {
    pub name: String,
    pub role: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackMapDoc {
    pub vertices: Vec<OriginDoc>,
    pub edges: Vec<OriginDoc>,
    pub demands: Vec<OriginDoc>,
}

fn source_text(s: Source) -> String {
    match s {
        Source::Global => "global".into(),
        Source::Vertex(i) => format!("vertex:{i}"),
        Source::Edge(i) => format!("edge:{i}"),
        Source::Demand(i) => format!("demand:{i}"),
        Source::Variable(i) => format!("variable:{i}"),
        Source::Clause(i) => format!("clause:{i}"),
    }
}

/// Provenance of every generated object, keyed by its name in the output.
pub fn serialize_back_map(out: &ReductionOutput) -> String {
    let g = out.instance.graph();
    let doc = |name: String, o: &Origin| OriginDoc {
        name,
        role: o.role.into(),
        source: source_text(o.source),
    };
    pretty(&BackMapDoc {
        vertices: out
            .vertices
            .iter()
            .enumerate()
            .map(|(v, o)| doc(g.name(v).into(), o))
            .collect(),
        edges: out
            .edges
            .iter()
            .enumerate()
            .map(|(e, o)| {
                let edge = g.edge(e);
                doc(format!("{}-{}", g.name(edge.u), g.name(edge.v)), o)
            })
            .collect(),
        demands: out
            .demands
            .iter()
            .zip(out.instance.demands())
            .map(|(o, d)| doc(format!("{}->{}", g.name(d.source), g.name(d.target)), o))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{"directed":true,"vertices":["u","v"],"edges":[{"u":"u","v":"v","time":1}],"demands":[{"from":"u","to":"v","deadline":1}]}"#;

    #[test]
    fn smallest_instance() {
        let i = parse_instance(SMALL).unwrap();
        assert_eq!((i.t_init(), i.t_max()), (1, 1));
    }

    #[test]
    fn zero_time_is_invalid() {
        let e = parse_instance(&SMALL.replace("\"time\":1", "\"time\":0")).unwrap_err();
        assert_eq!(e.code(), "INVALID");
        assert!(e.to_string().contains("edges[0]"));
    }

    #[test]
    fn syntax_errors_are_malformed_with_position() {
        let e = parse_instance("{\n \"directed\": tru }").unwrap_err();
        assert!(matches!(e, FormatError::Malformed { line: 2, .. }), "{e}");
    }

    #[test]
    fn repeating_path_is_invalid() {
        let text = r#"{"directed":false,"vertices":["a","b","c"],
            "edges":[{"u":"a","v":"b","time":1},{"u":"b","v":"c","time":1}],
            "demands":[{"from":"a","to":"b","deadline":5,"path":[["a","b"],["b","c"],["c","b"]]}]}"#;
        let e = parse_instance(text).unwrap_err();
        assert_eq!(e.code(), "INVALID");
    }

    #[test]
    fn round_trips() {
        let text = r#"{"directed":false,"vertices":["a","b","c"],
            "edges":[{"u":"b","v":"a","time":1},{"u":"b","v":"c","time":2}],
            "demands":[{"from":"a","to":"c","deadline":5,"path":[["a","b"],["b","c"]]}]}"#;
        let i = parse_instance(text).unwrap();
        assert_eq!(parse_instance(&serialize_instance(&i)).unwrap(), i);
    }

    #[test]
    fn no_solution_document() {
        let i = parse_instance(SMALL).unwrap();
        let s = serialize_solution(&i, &SolveResult::No(NoReason::PrecedenceCycle));
        assert!(s.contains("\"answer\": \"no\"") && s.contains("PRECEDENCE_CYCLE"));
        assert_eq!(parse_solution(&s, &i).unwrap(), ParsedSolution::No(NoReason::PrecedenceCycle));
    }

    #[test]
    fn cubic_round_trip() {
        let mut p = BTreeMap::new();
        p.insert((0, 1), Color::R);
        let g = delaybetter_core::reductions::cube_graph(p);
        let h = parse_cubic(&serialize_cubic(&g)).unwrap();
        assert_eq!(h.edges().len(), 12);
        assert_eq!(h.precoloring().len(), 1);
    }
}
