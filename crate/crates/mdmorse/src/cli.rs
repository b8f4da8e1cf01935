//! Command-line front end. Every command prints one deterministic JSON
//! document (or DOT / text when asked). Exit codes: 0 success, 1 domain
//! error, 2 parse or usage error.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::complex::{close, CellId, CellSet, SimplicialComplex};
use crate::components::{component_graph, component_inequalities};
use crate::dynamics::{flow_of, FlowGraph, MorseDecomposition};
use crate::error::{Error, Result};
use crate::field::DiscreteVectorField;
use crate::homology::{betti_of, conley_index, poly_of};
use crate::io::{self, Labels};
use crate::mdm::{field_to_mdm, MdmFunction, ValueVector};
use crate::morse::{collapse_sublevels, extended_decomposition, morse_report_decomposition, morse_report_points, MorseReport};

#[derive(Parser, Debug)]
#[command(name = "mdmorse", version, about = "Multiparameter discrete Morse theory on simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Function file (`verts | values`) or field file (`pair` / `fix` lines).
    input: PathBuf,
    /// Field file to use instead of the gradient of the function.
    #[arg(long)]
    field: Option<PathBuf>,
    /// Accept a `--field` that differs from the gradient.
    #[arg(long)]
    force_field: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the mdm conditions.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Check only coordinate i (1-based) as a scalar function.
        #[arg(long)]
        component: Option<usize>,
    },
    /// Gradient vector field.
    Gradient {
        #[command(flatten)]
        input: Input,
    },
    /// Critical simplices with their values.
    Critical {
        #[command(flatten)]
        input: Input,
    },
    /// Edges of the induced flow.
    Flow {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dot: bool,
    },
    /// Basic sets and their order.
    BasicSets {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dot: bool,
    },
    /// Conley index of a set of simplices.
    Conley {
        #[command(flatten)]
        input: Input,
        /// One simplex per line.
        #[arg(long)]
        set: PathBuf,
    },
    /// Finest Morse decomposition, or its coarsening by a partition.
    MorseDecomp {
        #[command(flatten)]
        input: Input,
        /// One block of basic-set indices per line.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        dot: bool,
    },
    /// Sublevel complex K(a).
    Sublevel {
        #[command(flatten)]
        input: Input,
        /// Value vector, comma separated (`1,-0.5,2/3`).
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Collapse K(b) onto K(a).
    Collapse {
        #[command(flatten)]
        input: Input,
        /// Lower value vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Upper value vector; must lie strictly above `--a`.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Print `collapse [σ] [τ]` lines instead of JSON.
        #[arg(long)]
        script: bool,
    },
    /// Split K(b) into K(a), A, M(I) and B.
    Extended {
        #[command(flatten)]
        input: Input,
        /// Lower value vector, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Upper value vector; must lie strictly above `--a`.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Critical components and the graph between them.
    Components {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        dot: bool,
    },
    /// Morse equation and inequalities.
    Inequalities {
        #[command(flatten)]
        input: Input,
        /// Count Conley coefficients of critical components.
        #[arg(long)]
        components: bool,
    },
    /// Build an mdm function whose gradient is the given field.
    MdmFromField {
        #[command(flatten)]
        input: Input,
        /// Number of coordinates in each value.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Print a function file instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Close a list of simplices under faces.
    Close {
        /// One simplex per line.
        input: PathBuf,
    },
}

/// Exit code plus everything written to standard output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

/// Complex plus optional function and field, as read from disk.
pub struct InputBundle {
    pub labels: Labels,
    pub complex: Arc<SimplicialComplex>,
    pub function: Option<MdmFunction>,
    pub field: Option<DiscreteVectorField>,
}

fn is_field_text(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("pair ") || l.starts_with("fix ") || l == "fix" || l == "pair")
}

/// Parses a function file or a field file, detected from its first line.
pub fn parse_input(text: &str) -> Result<InputBundle> {
    if is_field_text(text) {
        let file = io::parse_field_file(text)?;
        let complex = Arc::new(SimplicialComplex::new(file.simplices())?);
        let field = DiscreteVectorField::from_simplices(complex.clone(), &file.pairs, &file.fixed)?;
        return Ok(InputBundle { labels: file.labels, complex, function: None, field: Some(field) });
    }
    let file = io::parse_function_file(text)?;
    let complex = Arc::new(SimplicialComplex::new(file.entries.iter().map(|(s, _)| s.clone()))?);
    let mut values = vec![None; complex.len()];
    for (s, v) in file.entries {
        values[complex.require(&s)?] = Some(v);
    }
    let values = values.into_iter().map(|v| v.expect("every simplex has a line")).collect();
    let function = MdmFunction::new(complex.clone(), values)?;
    Ok(InputBundle { labels: file.labels, complex, function: Some(function), field: None })
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(0, format!("{}: {e}", path.display())))
}

impl InputBundle {
    fn load(input: &Input) -> Result<Self> {
        let mut bundle = parse_input(&read(&input.input)?)?;
        if let Some(path) = &input.field {
            let file = io::parse_field_file(&read(path)?)?;
            let mut labels = bundle.labels.clone();
            labels.freeze();
            let relabel = |s: &crate::complex::Simplex| -> Result<crate::complex::Simplex> {
                let text = file.labels.name(s);
                let parsed = io::parse_simplex_list(&text, &labels)?;
                Ok(parsed.into_iter().next().expect("one simplex"))
            };
            let pairs = file.pairs.iter().map(|(a, b)| Ok((relabel(a)?, relabel(b)?))).collect::<Result<Vec<_>>>()?;
            let fixed = file.fixed.iter().map(relabel).collect::<Result<Vec<_>>>()?;
            let field = DiscreteVectorField::from_simplices(bundle.complex.clone(), &pairs, &fixed)?;
            if let Some(f) = bundle.function.as_mut() {
                f.validate();
                if !input.force_field && !f.gradient().is_ok_and(|g| g.same_as(&field)) {
                    return Err(Error::InvalidInput("field differs from the gradient; pass --force-field".into()));
                }
            }
            bundle.field = Some(field);
        }
        Ok(bundle)
    }

    fn function(&mut self) -> Result<&MdmFunction> {
        let f = self.function.as_mut().ok_or_else(|| Error::InvalidInput("command needs a function file".into()))?;
        if !f.is_validated() && !f.validate().is_valid() {
            return Err(Error::NotValidated);
        }
        Ok(f)
    }

    fn field(&mut self) -> Result<DiscreteVectorField> {
        if let Some(v) = &self.field {
            return Ok(v.clone());
        }
        self.function()?.gradient()
    }

    fn name(&self, c: CellId) -> String {
        self.labels.name(self.complex.simplex(c))
    }

    fn names<'a>(&self, cells: impl IntoIterator<Item = &'a CellId>) -> Vec<String> {
        cells.into_iter().map(|&c| self.name(c)).collect()
    }

    fn vector(&self, text: &str) -> Result<ValueVector> {
        io::parse_vector(text)
    }
}

fn error_json(e: &Error) -> Value {
    let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
    match e {
        Error::CycleDetected(blocks) => err["witness"] = json!(blocks),
        Error::FCycle(cells) | Error::CyclicField(cells) => {
            err["witness"] = json!(cells.iter().map(|s| s.vertices().to_vec()).collect::<Vec<_>>())
        }
        Error::Parse { line, .. } => err["line"] = json!(line),
        _ => {}
    }
    json!({ "error": err })
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn report_json(r: &MorseReport) -> Value {
    json!({
        "m": r.m,
        "betti": r.betti,
        "euler_characteristic": r.euler_characteristic,
        "q": r.q.coeffs(),
        "q_text": r.q.to_string(),
        "q_nonnegative": r.q_nonnegative,
        "strong": r.strong,
        "weak": r.weak,
        "euler": r.euler,
    })
}

fn decomposition_json(b: &InputBundle, flow: &FlowGraph, m: &MorseDecomposition) -> Value {
    let sets: Vec<Value> = m
        .sets
        .iter()
        .enumerate()
        .map(|(i, s)| json!({ "index": i, "size": s.len(), "simplices": b.names(s) }))
        .collect();
    json!({
        "sets": sets,
        "flows_to": m.flows_to(),
        "hasse": m.hasse(),
        "is_morse_decomposition": flow.is_morse_decomposition(m),
    })
}

fn hasse_dot(b: &InputBundle, m: &MorseDecomposition) -> String {
    let mut out = String::from("digraph hasse {\n");
    for (i, s) in m.sets.iter().enumerate() {
        out.push_str(&format!("  {i} [label=\"{}\"];\n", b.names(s).join(", ")));
    }
    for (up, lo) in m.hasse() {
        out.push_str(&format!("  {up} -> {lo};\n"));
    }
    out.push_str("}\n");
    out
}

fn betti_json(k: &SimplicialComplex, set: &CellSet) -> Value {
    json!(betti_of(k, set).expect("subcomplex"))
}

enum Output {
    Json(Value),
    Text(String),
    /// Domain failure with a full report attached.
    Fail(Value),
}

fn dispatch(cmd: Command) -> Result<Output> {
    use Output::*;
    match cmd {
        Command::Validate { input, component } => {
            let mut b = InputBundle::load(&input)?;
            let f = b.function.as_ref().ok_or_else(|| Error::InvalidInput("command needs a function file".into()))?;
            let mut f = match component {
                None => f.clone(),
                Some(i) if (1..=f.arity()).contains(&i) => f.component(i - 1),
                Some(i) => return Err(Error::ArityMismatch { expected: f.arity(), found: i }),
            };
            let report = f.validate();
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| json!({ "simplex": b.name(v.simplex), "condition": v.condition, "others": b.names(&v.others) }))
                .collect();
            let mut out = json!({
                "valid": report.is_valid(),
                "arity": f.arity(),
                "simplices": b.complex.len(),
                "violations": violations,
            });
            if !report.is_valid() {
                out["error"] = error_json(&Error::NotValidated)["error"].clone();
                return Ok(Fail(out));
            }
            if component.is_none() {
                b.function = Some(f);
            }
            Ok(Json(out))
        }
        Command::Gradient { input } => {
            let mut b = InputBundle::load(&input)?;
            let v = b.function()?.gradient()?;
            let pairs: Vec<Value> = v.pairs().iter().map(|&(t, h)| json!([b.name(t), b.name(h)])).collect();
            Ok(Json(json!({ "pairs": pairs, "fixed": b.names(&v.fixed()), "acyclic": v.is_acyclic() })))
        }
        Command::Critical { input } => {
            let mut b = InputBundle::load(&input)?;
            let f = b.function()?.clone();
            let crit = f.critical_points()?;
            let list: Vec<Value> = crit
                .iter()
                .map(|&c| json!({ "simplex": b.name(c), "index": b.complex.dim_of(c), "value": f.value(c).strings() }))
                .collect();
            let counts = crate::morse::morse_counts(&f)?;
            Ok(Json(json!({ "critical": list, "counts": counts })))
        }
        Command::Flow { input, dot } => {
            let mut b = InputBundle::load(&input)?;
            let flow = flow_of(&b.field()?);
            if dot {
                let mut out = String::from("digraph flow {\n");
                for c in 0..b.complex.len() {
                    out.push_str(&format!("  {c} [label=\"{}\"];\n", b.name(c)));
                }
                for (x, y) in flow.edges() {
                    out.push_str(&format!("  {x} -> {y};\n"));
                }
                out.push_str("}\n");
                return Ok(Text(out));
            }
            let edges: Vec<Value> = flow.edges().map(|(x, y)| json!([b.name(x), b.name(y)])).collect();
            Ok(Json(json!({ "edges": edges, "acyclic": flow.is_acyclic() })))
        }
        Command::BasicSets { input, dot } => {
            let mut b = InputBundle::load(&input)?;
            let flow = flow_of(&b.field()?);
            let m = flow.basic_sets();
            if dot {
                return Ok(Text(hasse_dot(&b, &m)));
            }
            let mut out = decomposition_json(&b, &flow, &m);
            out["chain_recurrent"] = json!(b.names(&flow.chain_recurrent_set()));
            Ok(Json(out))
        }
        Command::Conley { input, set } => {
            let mut b = InputBundle::load(&input)?;
            let flow = flow_of(&b.field()?);
            let simplices = io::parse_simplex_list(&read(&set)?, &b.labels)?;
            let s = b.complex.set_of(&simplices)?;
            let index = conley_index(&flow, &s)?;
            Ok(Json(json!({
                "simplices": b.names(&s),
                "conley_index": index,
                "polynomial": poly_of(&index).to_string(),
            })))
        }
        Command::MorseDecomp { input, partition, dot } => {
            let mut b = InputBundle::load(&input)?;
            let flow = flow_of(&b.field()?);
            let finest = flow.basic_sets();
            let m = match &partition {
                None => finest,
                Some(path) => flow.coarsen(&finest, &io::parse_partition(&read(path)?)?)?,
            };
            if dot {
                return Ok(Text(hasse_dot(&b, &m)));
            }
            let mut out = decomposition_json(&b, &flow, &m);
            out["report"] = report_json(&morse_report_decomposition(&flow, &m)?);
            Ok(Json(out))
        }
        Command::Sublevel { input, at } => {
            let mut b = InputBundle::load(&input)?;
            let a = b.vector(&at)?;
            let set = b.function()?.sublevel(&a)?;
            Ok(Json(json!({
                "at": a.strings(),
                "simplices": b.names(&set),
                "is_subcomplex": b.complex.is_subcomplex(&set),
                "betti": betti_json(&b.complex, &set),
            })))
        }
        Command::Collapse { input, a, b: bv, script } => {
            let mut b = InputBundle::load(&input)?;
            let (av, bv) = (b.vector(&a)?, b.vector(&bv)?);
            let c = collapse_sublevels(b.function()?, &av, &bv)?;
            let text = io::format_collapse_script(&b.complex, &b.labels, &c.sequence.steps);
            if script {
                return Ok(Text(text));
            }
            let end = c.sequence.replay(&b.complex, &c.k_b)?;
            let steps: Vec<Value> = c.sequence.steps.iter().map(|&(x, y)| json!([b.name(x), b.name(y)])).collect();
            let cancelled: Vec<Value> = c.cancelled.iter().map(|&(x, y)| json!([b.name(x), b.name(y)])).collect();
            Ok(Json(json!({
                "steps": steps,
                "cancelled": cancelled,
                "removed": 2 * c.sequence.len(),
                "ends_at_k_a": end == c.k_a,
                "betti_before": betti_json(&b.complex, &c.k_a),
                "betti_after": betti_json(&b.complex, &c.k_b),
            })))
        }
        Command::Extended { input, a, b: bv } => {
            let mut b = InputBundle::load(&input)?;
            let (av, bv) = (b.vector(&a)?, b.vector(&bv)?);
            let f = b.function()?.clone();
            let d = extended_decomposition(&f, &av, &bv)?;
            let v = f.gradient()?;
            let flow = flow_of(&v);
            let steps = |s: &crate::morse::CollapseSequence| -> Vec<Value> {
                s.steps.iter().map(|&(x, y)| json!([b.name(x), b.name(y)])).collect()
            };
            Ok(Json(json!({
                "k_a": b.names(&d.k_a),
                "a": b.names(&d.a_part),
                "morse_set": b.names(&d.morse_set),
                "b": b.names(&d.b_part),
                "critical": b.names(&d.critical),
                "conley_index": conley_index(&flow, &d.morse_set)?,
                "upper_collapse": steps(&d.upper_collapse),
                "lower_collapse": steps(&d.lower_collapse),
                "betti_before": d.betti_before(&b.complex),
                "betti_after": d.betti_after(&b.complex),
                "betti_attached": betti_json(&b.complex, &d.attached()),
                "invariant_failures": d.invariant_failures(&v),
            })))
        }
        Command::Components { input, dot } => {
            let mut b = InputBundle::load(&input)?;
            let g = component_graph(b.function()?)?;
            let classes: Vec<Vec<String>> = g.components.classes.iter().map(|c| b.names(c)).collect();
            if dot {
                let mut out = String::from("digraph components {\n");
                for (i, c) in classes.iter().enumerate() {
                    out.push_str(&format!("  {i} [label=\"{}\"];\n", c.join(", ")));
                }
                for (x, y) in &g.edges {
                    out.push_str(&format!("  {x} -> {y};\n"));
                }
                out.push_str("}\n");
                return Ok(Text(out));
            }
            Ok(Json(json!({
                "components": classes,
                "edges": g.edges,
                "acyclic": g.f_cycle().is_none(),
                "f_cycle": g.f_cycle(),
            })))
        }
        Command::Inequalities { input, components } => {
            let mut b = InputBundle::load(&input)?;
            let f = b.function()?;
            let r = if components { component_inequalities(f)? } else { morse_report_points(f)? };
            Ok(Json(report_json(&r)))
        }
        Command::MdmFromField { input, k, text } => {
            let mut b = InputBundle::load(&input)?;
            let f = field_to_mdm(&b.field()?, k)?;
            if text {
                let body: String = (0..b.complex.len())
                    .map(|c| format!("{} | {}\n", b.name(c), f.value(c).strings().join(" ")))
                    .collect();
                return Ok(Text(body));
            }
            let values: Vec<Value> = (0..b.complex.len())
                .map(|c| json!({ "simplex": b.name(c), "value": f.value(c).strings() }))
                .collect();
            Ok(Json(json!({ "arity": k, "values": values })))
        }
        Command::Close { input } => {
            let (labels, simplices) = io::parse_complex_file(&read(&input)?)?;
            let body: String = close(simplices).iter().map(|s| format!("{}\n", labels.name(s))).collect();
            Ok(Text(body))
        }
    }
}

/// Runs one command line (program name first) and captures its output.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { code, stdout: e.to_string() };
        }
    };
    match dispatch(cli.command) {
        Ok(Output::Json(v)) => Outcome { code: 0, stdout: render(&v) },
        Ok(Output::Text(t)) => Outcome { code: 0, stdout: t },
        Ok(Output::Fail(v)) => Outcome { code: 1, stdout: render(&v) },
        Err(e) => {
            let code = if matches!(e, Error::Parse { .. }) { 2 } else { 1 };
            Outcome { code, stdout: render(&error_json(&e)) }
        }
    }
}
