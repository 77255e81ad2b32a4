//! Command-line front-end for graph measures and graph integrals.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! together with everything that would be printed, so the binary is a thin
//! wrapper and tests can drive commands in-process.

pub mod expr;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_measure::rational::to_pq;
use graph_measure::{
    extended_integrate, integrate, measure_spaces_equivalent, neighborhood, parse_diagram_set, parse_graph, parse_word,
    subgraph_integrate, Breakdown, Diagram, DiagramMode, Error as CoreError, Graph, MeasureContext, MeasureOptions,
    NeighborhoodRule, SubgraphDegrees, SubgraphVariant, Weighting,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::expr::{evaluate, evaluate_extended, parse_expression, ParseError};

#[derive(Debug, Parser)]
#[command(name = "graph-measure", version, about = "Exact graph measures and graph integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List D(G), the diagrams of forward words.
    Diagrams(ListArgs),
    /// List D_r(G^), the reduced diagrams of the shadowed graph.
    ReducedDiagrams(ListArgs),
    /// Measure a set of diagrams.
    Measure(MeasureArgs),
    /// Integrate a function expression over the reduced diagrams.
    Integrate(IntegrateArgs),
    /// Integrate a function on words against the extended measure.
    ExtendedIntegrate(ExtendedArgs),
    /// Print the shadow (edge-reversed) graph.
    Shadow(ShadowArgs),
    /// Look for a measure-space equivalence between two graphs.
    Isocheck(IsocheckArgs),
    /// Measure a set inside a full subgraph.
    SubgraphMeasure(SubgraphArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[default]
    Full,
    Generator,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    #[default]
    Off,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum NeighborhoodArg {
    #[default]
    Adjacent,
    Cyclic,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    /// mu of the shadowed graph on D_r(G^).
    #[default]
    Reduced,
    /// mu_G on D(G).
    Forward,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// The graph measure restricted to D_r(H^).
    #[default]
    Restricted,
    /// Vertex part over |V(H)| with degrees in H^.
    DefinedSubgraph,
    /// Vertex part over |V(H)| with degrees in G^.
    DefinedGraph,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Graph description file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub mode: ModeArg,
    /// Multiply path lengths by edge weights.
    #[arg(long, value_enum, default_value_t)]
    pub weights: Switch,
    /// Neighborhood rule for `g[w]` and monomials.
    #[arg(long, value_enum, default_value_t)]
    pub neighborhood: NeighborhoodArg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit JSON with sorted keys.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Set literal such as "{v1,e1,e1^-1}" or "{v1 -> v1 : e1.e3^-1}".
    #[arg(long)]
    pub set: String,
    #[arg(long, value_enum, default_value_t)]
    pub space: SpaceArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Function expression, e.g. "1/3*ind{v1,e1} + g^2".
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExtendedArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Function expression built from ind{...}, g[w], sums and scalars.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: String,
    /// Longest word length summed for infinite supports.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_len: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ShadowArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IsocheckArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// The second graph file.
    #[arg(long)]
    pub other: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SubgraphArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Comma-separated vertex ids spanning the full subgraph.
    #[arg(long)]
    pub vertices: String,
    /// Set to measure; defaults to every reduced diagram of the subgraph.
    #[arg(long, conflicts_with = "word")]
    pub set: Option<String>,
    /// Integrate g[w] over the subgraph instead of measuring a set.
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    GraphFile { path: PathBuf, source: CoreError },
    #[error("expression: {0}")]
    Expression(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for malformed input, 1 for well-formed requests outside a domain.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::GraphFile { .. } | CliError::Expression(_) => 2,
            CliError::Core(e) if e.is_parse_error() => 2,
            CliError::Core(CoreError::UnknownVertex(_) | CoreError::UnknownEdge(_)) => 2,
            CliError::Core(_) | CliError::Csv(_) => 1,
        }
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() {
                (String::new(), text)
            } else {
                (text, String::new())
            };
            return Outcome {
                code: e.exit_code(),
                stdout,
                stderr,
            };
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Diagrams(a) => list(a, false),
        Command::ReducedDiagrams(a) => list(a, true),
        Command::Measure(a) => measure(a),
        Command::Integrate(a) => integrate_cmd(a),
        Command::ExtendedIntegrate(a) => extended(a),
        Command::Shadow(a) => shadow(a),
        Command::Isocheck(a) => isocheck(a),
        Command::SubgraphMeasure(a) => subgraph(a),
    }
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_graph(&text).map_err(|source| CliError::GraphFile {
        path: path.to_path_buf(),
        source,
    })
}

fn options(a: &GraphArgs) -> MeasureOptions {
    MeasureOptions {
        mode: match a.mode {
            ModeArg::Full => DiagramMode::Full,
            ModeArg::Generator => DiagramMode::Generator,
        },
        weighting: match a.weights {
            Switch::On => Weighting::Weighted,
            Switch::Off => Weighting::Unweighted,
        },
        neighborhood: match a.neighborhood {
            NeighborhoodArg::Adjacent => NeighborhoodRule::Adjacent,
            NeighborhoodArg::Cyclic => NeighborhoodRule::Cyclic,
        },
        ..Default::default()
    }
}

fn context(a: &GraphArgs) -> Result<MeasureContext, CliError> {
    Ok(MeasureContext::new(load_graph(&a.graph)?, options(a)))
}

fn to_json(v: &Value) -> String {
    // serde_json's default map is ordered, so keys come out sorted.
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn set_literal(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn literals(g: &Graph, set: &BTreeSet<Diagram>) -> Vec<String> {
    set.iter().map(|d| d.literal(g)).collect()
}

fn list(a: &ListArgs, reduced: bool) -> Result<String, CliError> {
    let ctx = context(&a.graph)?;
    let g = ctx.graph();
    let set = if reduced { ctx.reduced() } else { ctx.diagrams() };
    if a.output.json {
        return Ok(to_json(&set.to_json(g)));
    }
    if a.output.csv {
        let rows: Vec<Vec<String>> = set
            .iter()
            .map(|d| {
                let trace: Vec<String> = d.trace().iter().map(|x| x.literal(g)).collect();
                vec![
                    g.vertex_id(d.source()).to_string(),
                    g.vertex_id(d.range()).to_string(),
                    trace.join("."),
                    d.len().to_string(),
                    to_pq(&d.weight(g)),
                ]
            })
            .collect();
        return to_csv(&["source", "range", "trace", "length", "weight"], &rows);
    }
    let mut out = String::new();
    for d in set.iter() {
        out.push_str(&d.line(g));
        out.push('\n');
    }
    out.push_str(&format!("count: {}\n", set.len()));
    Ok(out)
}

fn breakdown_report(b: &Breakdown, set: &[String], output: &OutputArgs) -> Result<String, CliError> {
    if output.json {
        return Ok(to_json(&b.to_json(set)));
    }
    if output.csv {
        let row = vec![
            set_literal(set),
            to_pq(&b.vertex_part),
            to_pq(&b.path_part),
            to_pq(&b.total()),
        ];
        return to_csv(&["set", "vertex_part", "path_part", "total"], &[row]);
    }
    Ok(format!(
        "set: {}\nvertex_part: {}\npath_part: {}\ntotal: {}\n",
        set_literal(set),
        to_pq(&b.vertex_part),
        to_pq(&b.path_part),
        to_pq(&b.total())
    ))
}

fn measure(a: &MeasureArgs) -> Result<String, CliError> {
    let ctx = context(&a.graph)?;
    let set = parse_diagram_set(ctx.graph(), &a.set)?;
    let b = match a.space {
        SpaceArg::Reduced => ctx.mu_shadowed(&set)?,
        SpaceArg::Forward => ctx.mu_graph(&set)?,
    };
    breakdown_report(&b, &literals(ctx.graph(), &set), &a.output)
}

fn integrate_cmd(a: &IntegrateArgs) -> Result<String, CliError> {
    let e = parse_expression(&a.expr)?;
    let ctx = context(&a.graph)?;
    let f = evaluate(&ctx, &e)?;
    let total = integrate(&ctx, &f)?;
    let mut neighborhoods = Vec::new();
    for w in e.neighborhood_words() {
        let word = parse_word(ctx.graph(), w)?;
        neighborhoods.push((
            w.to_string(),
            literals(ctx.graph(), &neighborhood(&ctx, &word)?.union()),
        ));
    }
    if a.output.json {
        let nbs: serde_json::Map<String, Value> = neighborhoods.into_iter().map(|(w, s)| (w, json!(s))).collect();
        return Ok(to_json(&json!({
            "expression": e.to_string(),
            "neighborhoods": nbs,
            "total": to_pq(&total),
        })));
    }
    if a.output.csv {
        return to_csv(&["expression", "total"], &[vec![e.to_string(), to_pq(&total)]]);
    }
    let mut out = format!("expression: {e}\n");
    for (w, s) in &neighborhoods {
        out.push_str(&format!("neighborhood g[{w}]: {}\n", set_literal(s)));
    }
    out.push_str(&format!("total: {}\n", to_pq(&total)));
    Ok(out)
}

fn extended(a: &ExtendedArgs) -> Result<String, CliError> {
    let e = parse_expression(&a.expr)?;
    let ctx = context(&a.graph)?;
    let f = evaluate_extended(&ctx, &e)?;
    let report = extended_integrate(&ctx, &f, a.max_len as usize)?;
    let strata: Vec<String> = report.strata.iter().map(to_pq).collect();
    if a.output.json {
        return Ok(to_json(&report.to_json()));
    }
    if a.output.csv {
        let rows: Vec<Vec<String>> = strata
            .iter()
            .enumerate()
            .map(|(k, s)| vec![k.to_string(), s.clone()])
            .collect();
        return to_csv(&["length", "contribution"], &rows);
    }
    Ok(format!(
        "value: {}\npartial_sum: {}\nconvergence: {}\nstrata: {}\n",
        report.value,
        to_pq(&report.partial_sum),
        report.convergence,
        strata.join(" ")
    ))
}

fn graph_json(g: &Graph) -> Value {
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "source": g.vertex_id(e.source),
                "target": g.vertex_id(e.target),
                "weight": to_pq(&e.weight),
            })
        })
        .collect();
    json!({ "vertices": g.vertices(), "edges": edges })
}

fn shadow(a: &ShadowArgs) -> Result<String, CliError> {
    let s = load_graph(&a.graph)?.shadow();
    if a.output.json {
        return Ok(to_json(&graph_json(&s)));
    }
    if a.output.csv {
        let rows: Vec<Vec<String>> = s
            .edges()
            .iter()
            .map(|e| {
                vec![
                    e.id.clone(),
                    s.vertex_id(e.source).to_string(),
                    s.vertex_id(e.target).to_string(),
                    to_pq(&e.weight),
                ]
            })
            .collect();
        return to_csv(&["id", "source", "target", "weight"], &rows);
    }
    Ok(s.to_string())
}

fn isocheck(a: &IsocheckArgs) -> Result<String, CliError> {
    let g1 = load_graph(&a.graph.graph)?;
    let g2 = load_graph(&a.other)?;
    let cert = measure_spaces_equivalent(&g1, &g2, options(&a.graph));
    let Some(cert) = cert else {
        return Ok(if a.output.json {
            to_json(&json!({ "equivalent": false }))
        } else if a.output.csv {
            to_csv(&["equivalent"], &[vec!["false".into()]])?
        } else {
            "equivalent: no\n".to_string()
        });
    };
    let vertices: Vec<(String, String)> = cert
        .vertex_map
        .iter()
        .enumerate()
        .map(|(i, &j)| (g1.vertex_id(i).to_string(), g2.vertex_id(j).to_string()))
        .collect();
    let edges: Vec<(String, String)> = cert
        .edge_map
        .iter()
        .enumerate()
        .map(|(i, x)| (g1.edge(i).id.clone(), x.literal(&g2)))
        .collect();
    let orientation = if cert.reverses_orientation {
        "reversed"
    } else {
        "preserved"
    };
    if a.output.json {
        let map = |pairs: &[(String, String)]| -> serde_json::Map<String, Value> {
            pairs.iter().map(|(k, v)| (k.clone(), json!(v))).collect()
        };
        return Ok(to_json(&json!({
            "equivalent": true,
            "orientation": orientation,
            "vertex_map": map(&vertices),
            "edge_map": map(&edges),
            "diagrams": cert.diagram_map.len(),
            "measure_preserving": cert.measure_preserving,
        })));
    }
    if a.output.csv {
        let rows: Vec<Vec<String>> = vertices
            .iter()
            .map(|(k, v)| vec!["vertex".into(), k.clone(), v.clone()])
            .chain(edges.iter().map(|(k, v)| vec!["edge".into(), k.clone(), v.clone()]))
            .collect();
        return to_csv(&["kind", "from", "to"], &rows);
    }
    let mut out = format!("equivalent: yes\norientation: {orientation}\n");
    for (k, v) in &vertices {
        out.push_str(&format!("vertex {k} -> {v}\n"));
    }
    for (k, v) in &edges {
        out.push_str(&format!("edge {k} -> {v}\n"));
    }
    out.push_str(&format!(
        "diagrams: {}\nmeasure_preserving: {}\n",
        cert.diagram_map.len(),
        if cert.measure_preserving { "yes" } else { "no" }
    ));
    Ok(out)
}

fn subgraph(a: &SubgraphArgs) -> Result<String, CliError> {
    let ctx = context(&a.graph)?;
    let g = ctx.graph();
    let ids: Vec<&str> = a.vertices.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let h = g.full_subgraph(&ids)?;
    let variant = match a.variant {
        VariantArg::Restricted => SubgraphVariant::Restricted,
        VariantArg::DefinedSubgraph => SubgraphVariant::Defined(SubgraphDegrees::InSubgraph),
        VariantArg::DefinedGraph => SubgraphVariant::Defined(SubgraphDegrees::InGraph),
    };
    if let Some(w) = &a.word {
        let word = parse_word(g, w)?;
        let total = subgraph_integrate(&ctx, &h, &word, variant)?;
        return Ok(if a.output.json {
            to_json(&json!({ "word": w, "total": to_pq(&total) }))
        } else if a.output.csv {
            to_csv(&["word", "total"], &[vec![w.clone(), to_pq(&total)]])?
        } else {
            format!("word: {w}\ntotal: {}\n", to_pq(&total))
        });
    }
    let set = match &a.set {
        Some(text) => parse_diagram_set(g, text)?,
        None => ctx.subgraph_domain(&h)?.to_set(),
    };
    let b = ctx.subgraph_measure(&h, &set, variant)?;
    breakdown_report(&b, &literals(g, &set), &a.output)
}
