use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use accessory::blanchfield::{pairing, PresentationMatrix};
use accessory::diagram::OrientedDiagram;
use accessory::laurent::{LaurentMatrix, LaurentPoly};
use accessory::omega::{arf_from_tower, assemble_omega, TowerData};
use accessory::oracle::{alexander_poly_oracle, arf_from_value, arf_levine};
use accessory::pipeline::{self, MarkedChoice, PipelineOptions, PipelineReport};
use accessory::Error;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{AutoUnknot, ChoiceArgs, Command, DiagramInput, OptionalDiagramInput};

/// Like `println!`, but a closed pipe (`accessory ... | head`) is not an error.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

pub const OK: u8 = 0;
pub const MISMATCH: u8 = 1;
pub const INPUT_ERROR: u8 = 2;
pub const PIPELINE_ERROR: u8 = 3;

/// A failure that ends a subcommand, with the stage it happened in.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: INPUT_ERROR, message: message.into() }
    }

    fn at(stage: &str, e: Error) -> Self {
        let code = if e.is_input_error() { INPUT_ERROR } else { PIPELINE_ERROR };
        Failure { code, message: format!("{stage}: {e}") }
    }
}

type Outcome = Result<u8, Failure>;

pub fn dispatch(command: Command) -> u8 {
    let outcome = match command {
        Command::Compute { input, choice, json } => compute(&input, &choice, json),
        Command::Oracle { input, json } => oracle(&input, json),
        Command::Compare { input, choice, trials, json } => compare(&input, &choice, trials, json),
        Command::Omega { tower, json } => omega(&tower, json),
        Command::Corpus { dir, jobs, trials, r3_budget, json } => corpus(&dir, jobs, trials, r3_budget, json),
        Command::Blanchfield { input, psi, choice, i, j, json } => blanchfield(&input, psi.as_deref(), &choice, i, j, json),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("reading {}: {e}", path.display())))
}

fn load_diagram(pd: Option<&Path>, gauss: Option<&Path>) -> Result<OrientedDiagram, Failure> {
    match (pd, gauss) {
        (Some(p), _) => OrientedDiagram::parse_pd(&read(p)?).map_err(|e| Failure::at("parsing PD code", e)),
        (None, Some(g)) => OrientedDiagram::parse_gauss(&read(g)?).map_err(|e| Failure::at("parsing Gauss code", e)),
        (None, None) => Err(Failure::input("no diagram given; use --pd or --gauss")),
    }
}

fn diagram(input: &DiagramInput) -> Result<OrientedDiagram, Failure> {
    load_diagram(input.pd.as_deref(), input.gauss.as_deref())
}

fn options(choice: &ChoiceArgs) -> PipelineOptions {
    let marked = match (&choice.marked, choice.auto_unknot) {
        (Some(ids), _) => MarkedChoice::Explicit(ids.clone()),
        (None, Some(AutoUnknot::Minimal)) => MarkedChoice::Minimal,
        (None, _) => MarkedChoice::Descending,
    };
    PipelineOptions { marked, r3_budget: choice.r3_budget, seed: choice.seed }
}

fn run(d: &OrientedDiagram, opts: &PipelineOptions) -> Result<PipelineReport, Failure> {
    pipeline::run(d, opts).map_err(|e| Failure::at("pipeline", e))
}

fn print_json(value: &impl Serialize) {
    out!("{}", serde_json::to_string_pretty(value).expect("reports serialise"));
}

fn print_matrix(name: &str, m: &LaurentMatrix) {
    if m.rows() == 0 {
        out!("{name}: (empty)");
        return;
    }
    out!("{name}:");
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        out!("  [ {} ]", cells.join(" | "));
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn compute(input: &DiagramInput, choice: &ChoiceArgs, json: bool) -> Outcome {
    let d = diagram(input)?;
    let report = run(&d, &options(choice))?;
    if json {
        print_json(&report);
    } else {
        out!("marked crossings: {:?}", report.marked);
        out!("epsilon: {:?}", report.epsilon);
        out!("tau: {:?}", report.tau);
        match report.seed {
            Some(s) => out!("seed: {s} (basepoint {}, rotations {:?})", report.basepoint, report.rotations),
            None => out!("seed: none"),
        }
        print_matrix("lambda", &report.lambda);
        print_matrix("psi", &report.psi);
        out!("delta: {}", report.delta);
        out!("arf: {}", report.arf);
        let v = &report.verdicts;
        out!("oracle agreement: {}", yes_no(v.determinant_matches_oracle && v.arf_matches_oracle));
        out!("blanchfield axioms: {}", yes_no(v.blanchfield_axioms && v.order_matches_oracle));
    }
    Ok(if report.verdicts.all_pass() { OK } else { MISMATCH })
}

fn oracle(input: &DiagramInput, json: bool) -> Outcome {
    let d = diagram(input)?;
    let delta = alexander_poly_oracle(&d).map_err(|e| Failure::at("Fox calculus", e))?;
    let arf = arf_levine(&delta).map_err(|e| Failure::at("Levine criterion", e))?;
    if json {
        print_json(&json!({ "delta": delta, "arf": arf }));
    } else {
        out!("delta: {delta}");
        out!("arf: {arf}");
    }
    Ok(OK)
}

fn compare(input: &DiagramInput, choice: &ChoiceArgs, trials: u64, json: bool) -> Outcome {
    let d = diagram(input)?;
    let oracle = alexander_poly_oracle(&d).map_err(|e| Failure::at("Fox calculus", e))?;
    let base = options(choice);
    let first = choice.seed.unwrap_or(0);
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for seed in first..first + trials {
        let report = run(&d, &PipelineOptions { seed: Some(seed), ..base.clone() })?;
        let agrees = report.delta.equal_up_to_unit(&oracle);
        if !agrees {
            mismatches += 1;
            if !json {
                out!("seed {seed}: MISMATCH pipeline {} versus oracle {oracle}", report.delta);
            }
        }
        rows.push(json!({ "seed": seed, "delta": report.delta, "agrees": agrees }));
    }
    if json {
        print_json(&json!({ "oracle": oracle, "trials": rows, "mismatches": mismatches }));
    } else {
        out!("oracle: {oracle}");
        out!("{} of {trials} seeds agree", trials - mismatches);
    }
    Ok(if mismatches == 0 { OK } else { MISMATCH })
}

fn omega(path: &Path, json: bool) -> Outcome {
    let data = TowerData::from_json(&read(path)?).map_err(|e| Failure::at("reading tower data", e))?;
    let m = assemble_omega(&data).map_err(|e| Failure::at("assembling omega", e))?;
    let det = m.det().clone();
    let at_minus_one = det.eval_int(-1).map_err(|e| Failure::at("evaluating det", e))?;
    let arf_det = arf_from_value(&at_minus_one).map_err(|e| Failure::at("Levine criterion", e))?;
    let arf_tower = arf_from_tower(&data);
    let consistent = arf_det == arf_tower;
    if json {
        print_json(&json!({
            "omega": m.matrix(),
            "det": det,
            "delta": det.normalize_unit(),
            "arf_levine": arf_det,
            "arf_tower": arf_tower,
            "consistent": consistent,
        }));
    } else {
        print_matrix("omega", m.matrix());
        out!("det: {det}");
        out!("arf (from det): {arf_det}");
        out!("arf (from twists): {arf_tower}");
        out!("consistent: {}", if consistent { "yes" } else { "no" });
    }
    Ok(if consistent { OK } else { MISMATCH })
}

#[derive(Deserialize)]
struct Sidecar {
    delta: LaurentPoly,
    arf: u8,
}

#[derive(Serialize)]
struct CorpusRow {
    knot: String,
    passed: bool,
    delta: Option<LaurentPoly>,
    arf: Option<u8>,
    detail: String,
}

fn check_knot(pd: &Path, trials: u64, r3_budget: usize) -> Result<CorpusRow, String> {
    let sidecar_path = pd.with_extension("json");
    let text = fs::read_to_string(pd).map_err(|e| format!("reading PD: {e}"))?;
    let d = OrientedDiagram::parse_pd(&text).map_err(|e| e.to_string())?;
    let sidecar_text = fs::read_to_string(&sidecar_path).map_err(|e| format!("reading sidecar: {e}"))?;
    let expected: Sidecar = serde_json::from_str(&sidecar_text).map_err(|e| format!("sidecar: {e}"))?;
    let mut problems = Vec::new();
    let mut first: Option<PipelineReport> = None;
    for seed in std::iter::once(None).chain((0..trials).map(Some)) {
        let opts = PipelineOptions { seed, r3_budget, ..Default::default() };
        let report = pipeline::run(&d, &opts).map_err(|e| format!("seed {seed:?}: {e}"))?;
        let tag = seed.map_or("unseeded".to_string(), |s| format!("seed {s}"));
        if !report.delta.equal_up_to_unit(&expected.delta) {
            problems.push(format!("{tag}: det Ψ = {} but expected {}", report.delta, expected.delta));
        }
        if report.arf != expected.arf {
            problems.push(format!("{tag}: Arf {} but expected {}", report.arf, expected.arf));
        }
        if !report.verdicts.all_pass() {
            problems.push(format!("{tag}: verdicts {:?}", report.verdicts));
        }
        first.get_or_insert(report);
    }
    let first = first.expect("at least one run");
    Ok(CorpusRow {
        knot: String::new(),
        passed: problems.is_empty(),
        delta: Some(first.delta),
        arf: Some(first.arf),
        detail: problems.join("; "),
    })
}

fn corpus(dir: &Path, jobs: Option<usize>, trials: u64, r3_budget: usize, json: bool) -> Outcome {
    let entries = fs::read_dir(dir).map_err(|e| Failure::input(format!("reading {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "pd"))
        .collect();
    files.sort();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    let rows: Vec<CorpusRow> = pool.install(|| {
        files
            .par_iter()
            .map(|p| {
                let knot = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                match check_knot(p, trials, r3_budget) {
                    Ok(row) => CorpusRow { knot, ..row },
                    Err(detail) => CorpusRow { knot, passed: false, delta: None, arf: None, detail },
                }
            })
            .collect()
    });
    let failures = rows.iter().filter(|r| !r.passed).count();
    if json {
        print_json(&json!({ "knots": rows, "failures": failures }));
    } else {
        for r in &rows {
            let delta = r.delta.as_ref().map_or("-".to_string(), |d| d.to_string());
            let arf = r.arf.map_or("-".to_string(), |a| a.to_string());
            out!("{:<12} {:<4} arf {:<2} {}", r.knot, yes_no(r.passed), arf, delta);
            if !r.passed {
                out!("    {}", r.detail);
            }
        }
        out!("{} knots, {} failures", rows.len(), failures);
    }
    Ok(if failures == 0 { OK } else { MISMATCH })
}

fn load_psi(path: &Path) -> Result<LaurentMatrix, Failure> {
    let value: serde_json::Value =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let matrix = value.get("psi").cloned().unwrap_or(value);
    serde_json::from_value(matrix).map_err(|e| Failure::input(format!("{}: not a matrix: {e}", path.display())))
}

fn blanchfield(
    input: &OptionalDiagramInput,
    psi: Option<&Path>,
    choice: &ChoiceArgs,
    i: usize,
    j: usize,
    json: bool,
) -> Outcome {
    let matrix = match psi {
        Some(p) => load_psi(p)?,
        None => {
            let d = load_diagram(input.pd.as_deref(), input.gauss.as_deref())?;
            run(&d, &options(choice))?.psi
        }
    };
    let a = PresentationMatrix::new(matrix).map_err(|e| Failure::at("presentation matrix", e))?;
    let class = pairing(&a, i, j).map_err(|e| Failure::at("pairing", e))?;
    if json {
        print_json(&json!({
            "i": i,
            "j": j,
            "num": class.rep.num(),
            "den": class.rep.den(),
            "zero": class.is_zero(),
        }));
    } else {
        out!("pairing(e_{i}, e_{j}) = {class} in Q(t)/Z[t,t^-1]");
        if class.is_zero() {
            out!("the class is zero");
        }
    }
    Ok(OK)
}
