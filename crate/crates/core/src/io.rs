//! Text formats: the front DSL, surface scripts, SVG rendering and JSON documents.

use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::classify::Classification;
use crate::cobordism::{apply_op, euler_number, CobordismError, Op, PieceName, SurfaceComplex};
use crate::front::{EventKind, FrontDiagram, FrontError, FrontEvent, Orientation};
use crate::numerics::VerificationReport;
use crate::planner::{witness_ops, DerivationGraph, Rule};
use crate::rewrite::MoveInstance;

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: expected {expected}, found `{found}`")]
    Syntax { line: usize, column: usize, expected: String, found: String },
    #[error("invalid front: {0}")]
    Semantic(#[from] FrontError),
}

fn syntax(line: usize, tok: Option<&(usize, String)>, eol_column: usize, expected: &str) -> ParseError {
    let (column, found) = match tok {
        Some((c, t)) => (*c, t.clone()),
        None => (eol_column, "end of line".to_string()),
    };
    ParseError::Syntax { line, column, expected: expected.to_string(), found }
}

/// Whitespace tokens of one line with 1-based columns, comments removed.
fn tokenize(line: &str) -> (Vec<(usize, String)>, usize) {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let chars: Vec<char> = code.chars().collect();
    for (i, ch) in chars.iter().enumerate() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, chars[s..i].iter().collect()));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, chars[s..].iter().collect()));
    }
    (out, chars.len() + 1)
}

struct Line {
    number: usize,
    tokens: Vec<(usize, String)>,
    end: usize,
}

impl Line {
    fn tok(&self, i: usize) -> Option<&(usize, String)> {
        self.tokens.get(i)
    }

    fn err(&self, i: usize, expected: &str) -> ParseError {
        syntax(self.number, self.tok(i), self.end, expected)
    }

    fn positive(&self, i: usize) -> Result<usize, ParseError> {
        match self.tok(i).map(|t| t.1.parse::<usize>()) {
            Some(Ok(v)) if v >= 1 => Ok(v),
            _ => Err(self.err(i, "positive integer")),
        }
    }

    fn index(&self, i: usize) -> Result<usize, ParseError> {
        match self.tok(i).map(|t| t.1.parse::<usize>()) {
            Some(Ok(v)) => Ok(v),
            _ => Err(self.err(i, "non-negative integer")),
        }
    }

    fn integer(&self, i: usize) -> Result<i64, ParseError> {
        match self.tok(i).map(|t| t.1.parse::<i64>()) {
            Some(Ok(v)) => Ok(v),
            _ => Err(self.err(i, "integer")),
        }
    }

    fn end_at(&self, i: usize) -> Result<(), ParseError> {
        if self.tokens.len() > i {
            Err(self.err(i, "end of line"))
        } else {
            Ok(())
        }
    }
}

/// Non-blank lines; a trailing `\` joins a line with the next one.
fn lines(text: &str) -> Vec<Line> {
    let mut out: Vec<Line> = Vec::new();
    let mut pending: Option<Line> = None;
    for (i, raw) in text.lines().enumerate() {
        let code = raw.split('#').next().unwrap_or("").trim_end();
        let (body, cont) = match code.strip_suffix('\\') {
            Some(b) => (b, true),
            None => (code, false),
        };
        let (tokens, end) = tokenize(body);
        let line = match pending.take() {
            Some(mut p) => {
                p.tokens.extend(tokens);
                p.end = end;
                p
            }
            None => Line { number: i + 1, tokens, end },
        };
        if cont {
            pending = Some(line);
        } else if !line.tokens.is_empty() {
            out.push(line);
        }
    }
    if let Some(p) = pending {
        if !p.tokens.is_empty() {
            out.push(p);
        }
    }
    out
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c))
}

/// A parsed front file: a name, the event word and explicit orientation lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontDocument {
    pub name: String,
    pub events: Vec<FrontEvent>,
    /// `(component, sign)` with 1-based components, in file order.
    pub orientations: Vec<(usize, Orientation)>,
}

pub const DEFAULT_NAME: &str = "front";

pub fn parse_front(text: &str) -> Result<FrontDocument, ParseError> {
    let mut doc = FrontDocument { name: DEFAULT_NAME.to_string(), events: Vec::new(), orientations: Vec::new() };
    let mut started = false;
    for line in lines(text) {
        let head = line.tokens[0].1.as_str();
        match head {
            "front" => {
                if started {
                    return Err(line.err(0, "event or orient line"));
                }
                match line.tok(1) {
                    Some((_, n)) if is_name(n) => doc.name = n.clone(),
                    _ => return Err(line.err(1, "front name")),
                }
                line.end_at(2)?;
            }
            "L" | "R" | "X" => {
                let p = line.positive(1)?;
                line.end_at(2)?;
                doc.events.push(match head {
                    "L" => FrontEvent::left(p),
                    "R" => FrontEvent::right(p),
                    _ => FrontEvent::cross(p),
                });
            }
            "orient" => {
                let c = line.positive(1)?;
                let sign = match line.tok(2).map(|t| t.1.as_str()) {
                    Some("+") => Orientation::Positive,
                    Some("-") => Orientation::Negative,
                    _ => return Err(line.err(2, "`+` or `-`")),
                };
                line.end_at(3)?;
                doc.orientations.push((c, sign));
            }
            _ => return Err(line.err(0, "`front`, `L`, `R`, `X` or `orient`")),
        }
        started = true;
    }
    Ok(doc)
}

impl FrontDocument {
    pub fn from_front(name: &str, f: &FrontDiagram) -> Self {
        FrontDocument {
            name: name.to_string(),
            events: f.events().to_vec(),
            orientations: f.orientations().iter().enumerate().map(|(c, o)| (c + 1, *o)).collect(),
        }
    }

    pub fn to_front(&self) -> Result<FrontDiagram, ParseError> {
        let mut f = FrontDiagram::new(self.events.clone())?;
        let mut orient = f.orientations().to_vec();
        for &(c, o) in &self.orientations {
            if c > orient.len() {
                return Err(FrontError::ComponentOutOfRange(c).into());
            }
            orient[c - 1] = o;
        }
        f.set_orientations(orient)?;
        Ok(f)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("front {}\n", self.name);
        for e in &self.events {
            let _ = writeln!(out, "{} {}", e.kind.symbol(), e.position);
        }
        for (c, o) in &self.orientations {
            let _ = writeln!(out, "orient {c} {}", o.symbol());
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Surface scripts

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expectation {
    Chi(i64),
    Euler(i64),
    Orientable(bool),
    Singularities(usize),
}

impl std::fmt::Display for Expectation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expectation::Chi(v) => write!(f, "expect chi {v}"),
            Expectation::Euler(v) => write!(f, "expect euler {v}"),
            Expectation::Orientable(v) => write!(f, "expect orientable {v}"),
            Expectation::Singularities(v) => write!(f, "expect singularities {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    Op(Op),
    Expect(Expectation),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurfaceScript {
    /// Steps with their source line numbers.
    pub steps: Vec<(usize, ScriptStep)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("script has no operations")]
    Empty,
    #[error("line {line}: {source}")]
    Step { line: usize, source: CobordismError },
    #[error("line {line}: expected {what} {expected}, got {got}")]
    Expectation { line: usize, what: String, expected: String, got: String },
}

fn compact_event(line: &Line, i: usize) -> Result<FrontEvent, ParseError> {
    let Some((_, t)) = line.tok(i) else { return Err(line.err(i, "event such as L1")) };
    let mut chars = t.chars();
    let kind = chars.next();
    let pos = chars.as_str().parse::<usize>().ok().filter(|p| *p >= 1);
    match (kind, pos) {
        (Some('L'), Some(p)) => Ok(FrontEvent::left(p)),
        (Some('R'), Some(p)) => Ok(FrontEvent::right(p)),
        (Some('X'), Some(p)) => Ok(FrontEvent::cross(p)),
        _ => Err(line.err(i, "event such as L1")),
    }
}

fn compact_word(line: &Line, from: usize) -> Result<Vec<FrontEvent>, ParseError> {
    if line.tokens.len() <= from {
        return Err(line.err(from, "event such as L1"));
    }
    (from..line.tokens.len()).map(|i| compact_event(line, i)).collect()
}

fn piece(line: &Line, i: usize) -> Result<PieceName, ParseError> {
    line.tok(i).and_then(|t| PieceName::from_letter(&t.1)).ok_or_else(|| line.err(i, "piece `a`, `b` or `c`"))
}

fn parse_step(line: &Line) -> Result<ScriptStep, ParseError> {
    let head = line.tokens[0].1.as_str();
    let op = match head {
        "klein_base" => Op::KleinBase,
        "torus" => Op::Torus,
        "remove_disk" => Op::RemoveDisk,
        "glue_mobius_three_umbrellas" => Op::GlueMobiusThreeUmbrellas,
        "genus_chain" => Op::GenusChain(line.index(1)?),
        "piece" => Op::Piece(piece(line, 1)?),
        "cone" => return Ok(ScriptStep::Op(Op::Cone(compact_word(line, 1)?))),
        "cone_cap" => {
            let boundary = line.index(1)?;
            return Ok(ScriptStep::Op(Op::ConeCap { boundary, model: compact_word(line, 2)? }));
        }
        "smooth_cap" => Op::SmoothCap { boundary: line.index(1)? },
        "split_cone" => Op::SplitCone { singularity: line.index(1)? },
        "one_handle" => Op::OneHandle { boundary: line.index(1)?, right: line.index(2)?, left: line.index(3)? },
        "isotopy" => {
            let boundary = line.index(1)?;
            let mut moves = Vec::new();
            for i in 2..line.tokens.len() {
                let m: MoveInstance = line.tokens[i].1.parse().map_err(|_| line.err(i, "move kind:site:position:f|b"))?;
                moves.push(m);
            }
            return Ok(ScriptStep::Op(Op::Isotopy { boundary, moves }));
        }
        "mobius_smoothing" => Op::MobiusSmoothing { singularity: line.index(1)? },
        "glue_piece" => {
            Op::GluePiece { boundary: line.index(1)?, piece: piece(line, 2)?, piece_boundary: line.index(3)? }
        }
        "relabel" => Op::Relabel { singularity: line.index(1)? },
        "expect" => {
            let e = match line.tok(1).map(|t| t.1.as_str()) {
                Some("chi") => Expectation::Chi(line.integer(2)?),
                Some("euler") => Expectation::Euler(line.integer(2)?),
                Some("singularities") => Expectation::Singularities(line.index(2)?),
                Some("orientable") => match line.tok(2).map(|t| t.1.as_str()) {
                    Some("true") => Expectation::Orientable(true),
                    Some("false") => Expectation::Orientable(false),
                    _ => return Err(line.err(2, "`true` or `false`")),
                },
                _ => return Err(line.err(1, "`chi`, `euler`, `orientable` or `singularities`")),
            };
            line.end_at(3)?;
            return Ok(ScriptStep::Expect(e));
        }
        _ => return Err(line.err(0, "surface operation or `expect`")),
    };
    let arity = match op {
        Op::KleinBase | Op::Torus | Op::RemoveDisk | Op::GlueMobiusThreeUmbrellas => 1,
        Op::OneHandle { .. } | Op::GluePiece { .. } => 4,
        _ => 2,
    };
    line.end_at(arity)?;
    Ok(ScriptStep::Op(op))
}

pub fn parse_script(text: &str) -> Result<SurfaceScript, ParseError> {
    let mut script = SurfaceScript::default();
    for line in lines(text) {
        script.steps.push((line.number, parse_step(&line)?));
    }
    Ok(script)
}

impl SurfaceScript {
    pub fn from_ops(ops: &[Op]) -> Self {
        SurfaceScript { steps: ops.iter().enumerate().map(|(i, op)| (i + 1, ScriptStep::Op(op.clone()))).collect() }
    }

    pub fn push_expect(&mut self, e: Expectation) {
        let n = self.steps.len() + 1;
        self.steps.push((n, ScriptStep::Expect(e)));
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (_, step) in &self.steps {
            match step {
                ScriptStep::Op(op) => {
                    let _ = writeln!(out, "{op}");
                }
                ScriptStep::Expect(e) => {
                    let _ = writeln!(out, "{e}");
                }
            }
        }
        out
    }
}

/// Runs a script, checking each `expect` line against the current complex.
pub fn run_script(script: &SurfaceScript) -> Result<SurfaceComplex, ScriptError> {
    let mut cur: Option<SurfaceComplex> = None;
    for (line, step) in &script.steps {
        let line = *line;
        match step {
            ScriptStep::Op(op) => {
                cur = Some(apply_op(cur.as_ref(), op).map_err(|source| ScriptError::Step { line, source })?);
            }
            ScriptStep::Expect(e) => {
                let s = cur.as_ref().ok_or(ScriptError::Step { line, source: CobordismError::OpenBoundary })?;
                let (what, expected, got) = match e {
                    Expectation::Chi(v) => ("chi", v.to_string(), s.chi.to_string()),
                    Expectation::Euler(v) => {
                        let got = euler_number(s).map_err(|source| ScriptError::Step { line, source })?;
                        ("euler", v.to_string(), got.to_string())
                    }
                    Expectation::Orientable(v) => ("orientable", v.to_string(), s.orientable.to_string()),
                    Expectation::Singularities(v) => ("singularities", v.to_string(), s.singularities.len().to_string()),
                };
                if expected != got {
                    return Err(ScriptError::Expectation { line, what: what.into(), expected, got });
                }
            }
        }
    }
    cur.ok_or(ScriptError::Empty)
}

/// Runnable script for a derivation-graph witness, with the node's data as expectations.
pub fn witness_script(node: (i64, i64), path: &[Rule]) -> SurfaceScript {
    let mut s = SurfaceScript::from_ops(&witness_ops(path));
    s.push_expect(Expectation::Chi(node.0));
    s.push_expect(Expectation::Euler(node.1));
    s.push_expect(Expectation::Orientable(false));
    s.push_expect(Expectation::Singularities((-node.0 - node.1) as usize));
    s
}

// ---------------------------------------------------------------------------
// SVG

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Width of one event column.
    pub column: f64,
    /// Vertical distance between strands.
    pub gap: f64,
    pub margin: f64,
    pub stroke: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { column: 40.0, gap: 24.0, margin: 20.0, stroke: 2.0 }
    }
}

const PALETTE: [&str; 6] = ["#1f4e79", "#a33b20", "#2e7d32", "#6a1b9a", "#b8860b", "#00838f"];

struct SvgPath {
    d: String,
}

impl SvgPath {
    fn start(x: f64, y: f64) -> Self {
        SvgPath { d: format!("M {x:.2} {y:.2}") }
    }

    /// Cubic with horizontal tangents at both ends.
    fn ease(&mut self, x0: f64, x1: f64, y0: f64, y1: f64) {
        let xm = 0.5 * (x0 + x1);
        let _ = write!(self.d, " C {xm:.2} {y0:.2} {xm:.2} {y1:.2} {x1:.2} {y1:.2}");
    }
}

/// Deterministic SVG drawing of a front. Cusps are horizontal tips; at a crossing the
/// strand moving down the stack is drawn unbroken over a white halo.
pub fn render_svg(f: &FrontDiagram, name: &str, opt: &SvgOptions) -> String {
    let events = f.events();
    let states = f.slice_arcs();
    let arcs = f.arcs();
    let (col, gap, m) = (opt.column, opt.gap, opt.margin);
    let half = col / 2.0;
    let x_of = |k: usize| m + k as f64 * col;
    let y_of = |level: f64| m + level * gap;
    let level = |k: usize, arc: usize| states[k].iter().position(|a| *a == arc).map(|i| i as f64);
    let width = 2.0 * m + events.len() as f64 * col;
    let height = 2.0 * m + (f.max_strands().max(1) - 1) as f64 * gap;

    let arc_path = |arc: usize| -> String {
        let a = &arcs[arc];
        let (il, ir) = (a.left_event, a.right_event);
        let tip_l = (events[il].position as f64 - 0.5, x_of(il) + half);
        let first = level(il + 1, arc).expect("arc exists after its left cusp");
        let mut p = SvgPath::start(tip_l.1, y_of(tip_l.0));
        p.ease(tip_l.1, x_of(il + 1), y_of(tip_l.0), y_of(first));
        for k in il + 1..ir {
            let (q0, q1) = (level(k, arc).expect("alive"), level(k + 1, arc).expect("alive"));
            let x0 = x_of(k);
            let mid = if events[k].kind == EventKind::RightCusp { q0 } else { q1 };
            p.ease(x0, x0 + half, y_of(q0), y_of(mid));
            p.ease(x0 + half, x0 + col, y_of(mid), y_of(q1));
        }
        let last = level(ir, arc).expect("arc exists before its right cusp");
        let tip_r = events[ir].position as f64 - 0.5;
        p.ease(x_of(ir), x_of(ir) + half, y_of(last), y_of(tip_r));
        p.d
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );
    let _ = writeln!(out, "<title>{}</title>", xml_escape(name));
    let _ = writeln!(out, "<rect width=\"{width:.2}\" height=\"{height:.2}\" fill=\"white\"/>");
    let _ = writeln!(out, "<g fill=\"none\" stroke-width=\"{:.2}\" stroke-linecap=\"round\">", opt.stroke);
    for (i, a) in arcs.iter().enumerate() {
        let color = PALETTE[a.component % PALETTE.len()];
        let _ = writeln!(out, "<path d=\"{}\" stroke=\"{color}\" data-arc=\"{i}\" data-component=\"{}\"/>", arc_path(i), a.component);
    }
    for (k, e) in events.iter().enumerate() {
        if e.kind != EventKind::Crossing {
            continue;
        }
        let over = f.event_arcs()[k].upper;
        let color = PALETTE[arcs[over].component % PALETTE.len()];
        let y0 = y_of((e.position - 1) as f64);
        let mut p = SvgPath::start(x_of(k), y0);
        p.ease(x_of(k), x_of(k) + half, y0, y0 + gap);
        let _ = writeln!(out, "<path d=\"{}\" stroke=\"white\" stroke-width=\"{:.2}\"/>", p.d, opt.stroke * 4.0);
        let _ = writeln!(out, "<path d=\"{}\" stroke=\"{color}\" data-over=\"{k}\"/>", p.d);
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

// ---------------------------------------------------------------------------
// JSON

fn event_json(e: &FrontEvent) -> Value {
    json!({ "kind": e.kind.symbol().to_string(), "position": e.position })
}

pub fn front_json(name: &str, f: &FrontDiagram) -> Value {
    let inv = f.invariants();
    json!({
        "schema": SCHEMA,
        "name": name,
        "word": f.word_string(),
        "events": f.events().iter().map(event_json).collect::<Vec<_>>(),
        "orientations": f.orientations().iter().map(|o| o.symbol().to_string()).collect::<Vec<_>>(),
        "invariants": {
            "writhe": inv.writhe,
            "cusp_count": inv.cusp_count,
            "tb": inv.tb,
            "rot": inv.rot,
            "component_count": inv.component_count,
            "components": inv.components.iter().map(|c| json!({
                "writhe": c.writhe, "cusp_count": c.cusp_count, "tb": c.tb, "rot": c.rot,
            })).collect::<Vec<_>>(),
            "linking": inv.linking,
        },
    })
}

pub fn moves_json(moves: &[MoveInstance]) -> Value {
    json!({ "schema": SCHEMA, "moves": moves.iter().map(|m| m.to_string()).collect::<Vec<_>>() })
}

pub fn surface_json(s: &SurfaceComplex) -> Value {
    let boundary: Vec<Value> = s
        .boundary
        .iter()
        .map(|f| {
            let inv = f.invariants();
            json!({ "word": f.word_string(), "tb": inv.tb, "rot": inv.rot[0] })
        })
        .collect();
    let linking: Vec<Value> = s.linking.iter().map(|((i, j), v)| json!([i, j, v])).collect();
    let sings: Vec<Value> = s
        .singularities
        .iter()
        .map(|x| json!({ "model_tb": x.model_tb, "model_rot": x.model_rot, "kind": "cone_over_unknot", "umbrella": x.umbrella }))
        .collect();
    json!({
        "schema": SCHEMA,
        "chi": s.chi,
        "orientable": s.orientable,
        "closed": s.is_closed(),
        "euler_number": euler_number(s).ok(),
        "boundary": boundary,
        "linking": linking,
        "singularities": sings,
        "witness": s.witness.iter().map(|op| op.to_string()).collect::<Vec<_>>(),
    })
}

pub fn classification_json(c: &Classification) -> Value {
    json!({
        "schema": SCHEMA,
        "chi": c.spec.chi,
        "euler": c.spec.euler,
        "orientable": c.spec.orientable,
        "smooth": c.smooth,
        "stein": c.stein,
        "rationally_convex": c.rationally_convex,
        "umbrellas": c.umbrellas,
    })
}

fn rule_name(r: Rule) -> &'static str {
    match r {
        Rule::Vertical => "vertical",
        Rule::Diagonal => "diagonal",
    }
}

pub fn graph_json(g: &DerivationGraph) -> Value {
    json!({
        "schema": SCHEMA,
        "min_chi": g.min_chi,
        "nodes": g.nodes.iter().map(|(c, e)| json!({ "chi": c, "euler": e, "umbrellas": -c - e })).collect::<Vec<_>>(),
        "edges": g.edges.iter().map(|e| json!({
            "from": [e.from.0, e.from.1], "to": [e.to.0, e.to.1], "rule": rule_name(e.rule),
        })).collect::<Vec<_>>(),
        "witnesses": g.witnesses.iter().map(|(n, path)| json!({
            "node": [n.0, n.1],
            "rules": path.iter().map(|r| rule_name(*r)).collect::<Vec<_>>(),
            "script": witness_script(*n, path).serialize(),
        })).collect::<Vec<_>>(),
    })
}

pub fn report_json(r: &VerificationReport) -> Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    v["schema"] = json!(SCHEMA);
    v["details"] = Value::Object(r.details.iter().map(|(k, x)| (k.clone(), json!(x))).collect());
    v
}
