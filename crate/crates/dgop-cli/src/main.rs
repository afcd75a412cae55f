//! Command-line front end. Every command prints one JSON document; the exit
//! code is 0 when all verifications pass, 1 when a check fails and 2 on
//! errors (which are printed as `{"error": {"kind", "message"}}`).

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use dgop::barratt_eccles::{self as be, BarrattEccles, Cohomology};
use dgop::coalgebra::{self, AInftyCoalgebra, QuasiFreeCoalgebra};
use dgop::complex;
use dgop::dual_schur;
use dgop::io;
use dgop::multilinear::Cooperation;
use dgop::operad::{AssociativeOperad, AxiomConfig, Operad, UnitOperad};
use dgop::report::Report;
use dgop::simplicial::{self, SimplicialSet};
use dgop::symseq::{self, SymmetricSequence};
use dgop::tree::{self, FreeBase, FreeOperad, Presentation};
use dgop::{ChainComplex, Error, Field, Result, Window};

pub const CONFIG_ENV: &str = "DGOP_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "dgop", version, about = "Exact computations with dg operads and their coalgebras")]
struct Cli {
    /// Ground field: Q, F2, F3, ... (default from the config file, else F2)
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true)]
    max_arity: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    deg_min: Option<i64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    deg_max: Option<i64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON file with defaults for the global flags.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers and cycle representatives of a simplicial set or complex.
    Homology { input: String },
    /// The E-coalgebra structure on normalized chains and its verification.
    EStructure {
        input: String,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long)]
        deg: Option<usize>,
    },
    /// Sq^i on cohomology classes over F2.
    Steenrod {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        /// Cocycle as a JSON list of basis labels or {"basis", "coeff"} objects.
        #[arg(long)]
        class: Option<String>,
    },
    /// Verifies a coalgebra over a quasi-free operad given by a presentation.
    VerifyCoalgebra { operad: String, coalgebra: String },
    /// Verifies the A∞ relations up to arity n.
    VerifyAinfty {
        coalgebra: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Lists the tree basis of a free operad.
    FreeOperad {
        generators: String,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// The composition product M∘N.
    ComposeProduct { left: String, right: String },
    /// The cofree coalgebra L(P)(V) on a degree window.
    Cofree {
        operad: String,
        carrier: String,
        /// Degree window lo:hi (overrides --deg-min/--deg-max).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
    },
    /// Attaches a cell to a presentation.
    AttachCell { presentation: String, cell: String },
    /// Lifts a cell structure along a quasi-isomorphism.
    Lift { input: String },
}

struct Config {
    field: Field,
    field_explicit: bool,
    max_arity: Option<usize>,
    deg_min: Option<i64>,
    deg_max: Option<i64>,
    seed: u64,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Config> {
        let file = match &cli.config {
            Some(p) => io::parse_text(&read_file(p)?, &p.display().to_string())?,
            None => json!({}),
        };
        let get = |k: &str| file.get(k).cloned();
        let (field, field_explicit) = match (&cli.field, get("field")) {
            (Some(s), _) => (Field::parse(s)?, true),
            (None, Some(Value::String(s))) => (Field::parse(&s)?, true),
            (None, Some(v)) => (io::field_from_json(&v, "$.field")?, true),
            (None, None) => (Field::f2(), false),
        };
        let num = |k: &str| get(k).and_then(|v| v.as_i64());
        Ok(Config {
            field,
            field_explicit,
            max_arity: cli.max_arity.or(num("max_arity").map(|x| x as usize)),
            deg_min: cli.deg_min.or(num("deg_min")),
            deg_max: cli.deg_max.or(num("deg_max")),
            seed: cli.seed.or(num("seed").map(|x| x as u64)).unwrap_or(0),
        })
    }

    fn window(&self, lo: i64, hi: i64) -> Result<Window> {
        let w = Window::new(self.deg_min.unwrap_or(lo), self.deg_max.unwrap_or(hi));
        if w.lo > w.hi {
            return Err(Error::InvalidInput(format!("empty degree window [{}, {}]", w.lo, w.hi)));
        }
        Ok(w)
    }

    fn optional_window(&self) -> Option<Window> {
        match (self.deg_min, self.deg_max) {
            (None, None) => None,
            (lo, hi) => Some(Window::new(lo.unwrap_or(i64::MIN / 4), hi.unwrap_or(i64::MAX / 4))),
        }
    }

    /// Rejects inputs whose declared field disagrees with an explicit --field.
    fn check_field(&self, f: Field) -> Result<()> {
        if self.field_explicit && f != self.field {
            return Err(Error::InvalidInput(format!("input is over {f} but --field is {}", self.field)));
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        json!({
            "field": io::field_to_json(self.field),
            "max_arity": self.max_arity,
            "deg_min": self.deg_min,
            "deg_max": self.deg_max,
            "seed": self.seed,
        })
    }
}

fn read_file(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", p.display())))
}

/// Inline JSON, or a path to a JSON file.
fn read_json(arg: &str) -> Result<Value> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return io::parse_text(arg, "<argument>");
    }
    io::parse_text(&read_file(Path::new(arg))?, arg)
}

fn is_json_source(arg: &str) -> bool {
    let t = arg.trim_start();
    t.starts_with('{') || t.starts_with('[') || Path::new(arg).is_file()
}

fn load_space(arg: &str) -> Result<SimplicialSet> {
    if is_json_source(arg) {
        io::simplicial_from_json(&read_json(arg)?, "$")
    } else {
        simplicial::builtin(arg)
    }
}

fn parse_arity_spec(s: &str) -> Option<(i64, usize)> {
    let (k, p) = s.split_once('(')?;
    Some((k.parse().ok()?, p.strip_suffix(')')?.parse().ok()?))
}

/// `I`, `S<k>(<p>)`, `D<k>(<p>)`, or a symmetric-sequence JSON.
fn load_sequence(arg: &str, cfg: &Config) -> Result<SymmetricSequence> {
    if is_json_source(arg) {
        let s = io::symseq_from_json(&read_json(arg)?, Some(cfg.field), "$")?;
        cfg.check_field(s.field)?;
        return Ok(s);
    }
    let f = cfg.field;
    if arg == "I" {
        return Ok(symseq::unit_sequence(f));
    }
    let bad = || Error::InvalidInput(format!("unknown symmetric sequence '{arg}' (try I, S0(2), D1(2) or a JSON file)"));
    let (kind, rest) = arg.split_at(1);
    let (k, p) = parse_arity_spec(rest).ok_or_else(bad)?;
    match kind {
        "S" => Ok(symseq::sphere_sequence(f, k, p)),
        "D" => Ok(symseq::disk_sequence(f, k, p)),
        _ => Err(bad()),
    }
}

/// `ainfty:<N>`, `disk:<p>:<k>`, or a presentation JSON.
fn load_presentation(arg: &str, cfg: &Config) -> Result<Presentation> {
    if is_json_source(arg) {
        let p = io::presentation_from_json(&read_json(arg)?, Some(cfg.field), "$")?;
        cfg.check_field(p.field)?;
        return Ok(p);
    }
    let parts: Vec<&str> = arg.split(':').collect();
    let bad = || Error::InvalidInput(format!("unknown presentation '{arg}' (try ainfty:4, disk:2:0 or a JSON file)"));
    match parts.as_slice() {
        ["ainfty", n] => Ok(tree::ainfty_presentation(cfg.field, n.parse().map_err(|_| bad())?)),
        ["disk", p, k] => Ok(tree::disk_presentation(cfg.field, p.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

/// `I`, `As`, `E`, `T(<sequence>)`, or a presentation.
fn load_operad(arg: &str, cfg: &Config, max: usize, window: Option<Window>) -> Result<Box<dyn Operad>> {
    match arg {
        "I" => return Ok(Box::new(UnitOperad::new(cfg.field))),
        "As" => return Ok(Box::new(AssociativeOperad::new(cfg.field, max))),
        "E" => return Ok(Box::new(BarrattEccles::new(cfg.field, max, be::VERIFY_MAX_DEGREE)?)),
        _ => {}
    }
    if let Some(inner) = arg.strip_prefix("T(").and_then(|s| s.strip_suffix(')')) {
        let m = load_sequence(inner, cfg)?;
        return Ok(Box::new(FreeOperad::new(FreeBase::new(m), max, window)?));
    }
    Ok(Box::new(load_presentation(arg, cfg)?.realize(max, window)?))
}

fn load_complex(arg: &str, cfg: &Config) -> Result<ChainComplex> {
    if arg == "k" {
        return Ok(ChainComplex::unit(cfg.field));
    }
    let c = io::complex_from_json(&read_json(arg)?, Some(cfg.field), "$")?;
    cfg.check_field(c.field)?;
    Ok(c)
}

fn report_json(r: &Report) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn dims_json(d: &std::collections::BTreeMap<i64, usize>) -> Value {
    Value::Object(d.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

/// (result, all checks passed)
fn run(cmd: &Command, cfg: &Config) -> Result<(Value, bool)> {
    match cmd {
        Command::Homology { input } => {
            let c = if is_json_source(input) && read_json(input)?.get("simplices").is_none() {
                load_complex(input, cfg)?
            } else {
                simplicial::normalized_chains(&load_space(input)?, cfg.field)
            };
            let h = complex::homology(&c);
            let mut reps = serde_json::Map::new();
            for (i, z) in h.representatives.iter().enumerate() {
                let d = h.space.degree(i).to_string();
                reps.entry(d).or_insert_with(|| json!([])).as_array_mut().unwrap().push(io::vector_to_json(&c.space, z));
            }
            let mut betti = h.betti();
            for d in c.dims().keys() {
                betti.entry(*d).or_insert(0);
            }
            let betti = dims_json(&betti);
            Ok((json!({ "betti": betti, "dims": dims_json(&c.dims()), "representatives": reps }), true))
        }
        Command::EStructure { input, arity, deg } => {
            let x = load_space(input)?;
            let a = arity.or(cfg.max_arity).unwrap_or(be::VERIFY_MAX_ARITY);
            let d = deg.or(cfg.deg_max.map(|x| x.max(0) as usize)).unwrap_or(be::VERIFY_MAX_DEGREE);
            let op = BarrattEccles::new(cfg.field, a, d)?;
            let c = be::e_coalgebra_structure(&x, &op);
            let rep = coalgebra::verify_pcoalgebra(&op, &c, &AxiomConfig::exhaustive());
            let mut tables = vec![];
            for n in 1..=a {
                for (b, d) in c.ops[n].iter().enumerate() {
                    if !d.is_zero() {
                        tables.push(io::cooperation_to_json(op.space(n).label(b), &c.carrier, d));
                    }
                }
            }
            let pass = rep.passed();
            Ok((
                json!({
                    "carrier": io::complex_to_json(&c.carrier),
                    "truncation": { "max_arity": a, "max_degree": d },
                    "cooperations": tables,
                    "report": report_json(&rep),
                }),
                pass,
            ))
        }
        Command::Steenrod { input, i, class } => {
            if cfg.field != Field::f2() {
                return Err(Error::InvalidInput("Steenrod squares are computed over F2".into()));
            }
            let x = load_space(input)?;
            let c = simplicial::normalized_chains(&x, cfg.field);
            let classes: Vec<dgop::Vector> = match class {
                Some(s) => vec![io::vector_from_json(cfg.field, &c.space, &read_json(s)?, "$")?],
                None => {
                    let top = x.dimension().unwrap_or(0) as i64;
                    (0..=top).flat_map(|n| Cohomology::new(&c, n).basis).collect()
                }
            };
            let mut out = vec![];
            for a in &classes {
                let sq = be::steenrod_square(&x, &c, *i, a)?;
                let n = c.space.degree_of(a).unwrap_or(0);
                let target = Cohomology::new(&c, n + i);
                out.push(json!({
                    "class": io::vector_to_json(&c.space, a),
                    "degree": n,
                    "square": io::vector_to_json(&c.space, &sq),
                    "square_degree": n + i,
                    "nonzero": !sq.is_empty() && !target.is_coboundary(&sq),
                    "coordinates": io::vector_to_json(&dgop::GradedSpace::from_pairs(
                        (0..target.basis.len()).map(|k| (n + i, format!("c{k}")))
                    )?, &target.class_of(&sq)),
                }));
            }
            Ok((json!({ "i": i, "results": out }), true))
        }
        Command::VerifyCoalgebra { operad, coalgebra: coal } => {
            let pres = load_presentation(operad, cfg)?;
            let expected: HashMap<String, (usize, i64)> = pres.cells.iter().map(|c| (c.name.clone(), (c.arity, c.degree))).collect();
            let data = io::coalgebra_from_json(&read_json(coal)?, Some(cfg.field), &expected, "$")?;
            cfg.check_field(data.carrier.field)?;
            // absent cells act by zero
            let gens: Vec<_> = pres
                .cells
                .iter()
                .map(|cell| data.get(&cell.name).cloned().unwrap_or_else(|| Cooperation::zero(&data.carrier, cell.arity, cell.degree)))
                .collect();
            for (name, _) in &data.cooperations {
                if !expected.contains_key(name) {
                    return Err(Error::InvalidInput(format!("'{name}' is not a cell of the presentation")));
                }
            }
            let max = cfg.max_arity.unwrap_or((pres.max_cell_arity() + 1).min(4));
            let mut rep = Report::new();
            match QuasiFreeCoalgebra::new(pres.clone(), data.carrier.clone(), gens) {
                Ok(q) => {
                    rep.check("boundary").ok();
                    let op = pres.realize(max, cfg.optional_window())?;
                    let pc = q.to_pcoalgebra(&op);
                    rep.merge("", coalgebra::verify_pcoalgebra(&op, &pc, &AxiomConfig::exhaustive()));
                }
                Err(Error::BoundaryViolation(w)) => rep.check("boundary").fail(w),
                Err(e) => return Err(e),
            }
            let rep = rep.finish();
            let pass = rep.passed();
            Ok((json!({ "max_arity": max, "report": report_json(&rep) }), pass))
        }
        Command::VerifyAinfty { coalgebra: coal, n } => {
            let expected: HashMap<String, (usize, i64)> = (2..=*n).map(|k| (format!("D{k}"), (k, k as i64 - 2))).collect();
            let data = io::coalgebra_from_json(&read_json(coal)?, Some(cfg.field), &expected, "$")?;
            cfg.check_field(data.carrier.field)?;
            for (name, _) in &data.cooperations {
                if !expected.contains_key(name) {
                    return Err(Error::InvalidInput(format!("unexpected cooperation '{name}' (use D2..D{n})")));
                }
            }
            let a = AInftyCoalgebra::new(data.carrier, data.cooperations.into_iter().map(|(_, d)| d).collect());
            let rep = coalgebra::verify_ainfty(&a, *n);
            let pass = rep.passed();
            Ok((json!({ "n": n, "report": report_json(&rep) }), pass))
        }
        Command::FreeOperad { generators, arity } => {
            let window = cfg.optional_window();
            let op = if is_json_source(generators) && read_json(generators)?.get("generators").is_some() {
                load_presentation(generators, cfg)?.realize(*arity, window)?
            } else {
                FreeOperad::new(FreeBase::new(load_sequence(generators, cfg)?), *arity, window)?
            };
            let mut ar = serde_json::Map::new();
            for n in 1..=*arity {
                let s = op.space(n);
                ar.insert(n.to_string(), json!({ "dim": s.dim(), "dims": dims_json(&s.dims()), "trees": s.labels() }));
            }
            Ok((json!({ "arities": ar }), true))
        }
        Command::ComposeProduct { left, right } => {
            let m = load_sequence(left, cfg)?;
            let n = load_sequence(right, cfg)?;
            let a = cfg.max_arity.unwrap_or(4);
            let p = symseq::compose_product(&m, &n, a, cfg.optional_window())?;
            let dims: serde_json::Map<String, Value> = p.seq.dims().iter().map(|(k, d)| (k.to_string(), dims_json(d))).collect();
            Ok((json!({ "max_arity": a, "dims": dims, "product": io::symseq_to_json(&p.seq) }), true))
        }
        Command::Cofree { operad, carrier, window } => {
            let v = load_complex(carrier, cfg)?;
            let w = match window {
                Some(s) => {
                    let (lo, hi) = s.split_once(':').ok_or_else(|| Error::InvalidInput("window is lo:hi".into()))?;
                    let p = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::InvalidInput(format!("bad window '{s}'")));
                    Window::new(p(lo)?, p(hi)?)
                }
                None => cfg.window(-5, 0)?,
            };
            let a = cfg.max_arity.unwrap_or(3);
            let op = load_operad(operad, cfg, a, Some(dual_schur::operad_window_for(&v, a, w)))?;
            let l = dual_schur::cofree_coalgebra(op.as_ref(), &v, a, w)?;
            let rep = coalgebra::verify_pcoalgebra_truncated(op.as_ref(), &l.coalgebra, &AxiomConfig::exhaustive(), &l.cut);
            let pass = rep.passed();
            Ok((
                json!({
                    "complex": io::complex_to_json(&l.coalgebra.carrier),
                    "dims": dims_json(&l.coalgebra.carrier.dims()),
                    "provenance": serde_json::to_value(&l.provenance).expect("provenance serializes"),
                    "report": report_json(&rep),
                }),
                pass,
            ))
        }
        Command::AttachCell { presentation, cell } => {
            let p = load_presentation(presentation, cfg)?;
            let c = io::cell_from_json(p.field, &read_json(cell)?, "$")?;
            let q = p.attach_cell(c)?;
            Ok((json!({ "presentation": io::presentation_to_json(&q) }), true))
        }
        Command::Lift { input } => run_lift(&read_json(input)?, cfg),
    }
}

/// Input: `{"cell": {"arity", "degree"}, "w": coalgebra with cooperations b
/// and a, "v": coalgebra with cooperation b, "f": map W → V}`.
fn run_lift(v: &Value, cfg: &Config) -> Result<(Value, bool)> {
    let loc = |k: &str| Error::Parse { location: format!("$.{k}"), message: format!("missing '{k}'") };
    let cell = v.get("cell").ok_or_else(|| loc("cell"))?;
    let p = cell.get("arity").and_then(|x| x.as_u64()).ok_or_else(|| loc("cell.arity"))? as usize;
    let k = cell.get("degree").and_then(|x| x.as_i64()).ok_or_else(|| loc("cell.degree"))?;
    let pres = tree::disk_presentation(cfg.field, p, k);
    let expected = HashMap::from([("b".to_string(), (p, k - 1)), ("a".to_string(), (p, k))]);
    let wd = io::coalgebra_from_json(v.get("w").ok_or_else(|| loc("w"))?, Some(cfg.field), &expected, "$.w")?;
    let vd = io::coalgebra_from_json(v.get("v").ok_or_else(|| loc("v"))?, Some(cfg.field), &expected, "$.v")?;
    for c in [&wd.carrier, &vd.carrier] {
        if c.field != cfg.field {
            return Err(Error::InvalidInput(format!("carrier over {} but the run is over {}", c.field, cfg.field)));
        }
    }
    let f = io::linear_map_from_json(cfg.field, &wd.carrier, &vd.carrier, v.get("f").ok_or_else(|| loc("f"))?, "$.f")?;
    let need = |d: &io::CoalgebraData, n: &str| d.get(n).cloned().ok_or_else(|| Error::InvalidInput(format!("missing cooperation '{n}'")));
    let w = QuasiFreeCoalgebra::new(pres.clone(), wd.carrier.clone(), vec![need(&wd, "b")?, need(&wd, "a")?])?;
    let vq = QuasiFreeCoalgebra::new(pres.without_last(), vd.carrier.clone(), vec![need(&vd, "b")?])?;
    let lift = coalgebra::lift_cell_structure(&w, &f, &vq)?;
    let checks = coalgebra::check_lift(&w, &f, &vq, &lift);
    let max = cfg.max_arity.unwrap_or(p.min(3));
    let op = pres.realize_weighted(max, None, Some(2))?;
    let rep = coalgebra::verify_pcoalgebra(&op, &lift.structure.to_pcoalgebra(&op), &AxiomConfig::exhaustive());
    let pass = rep.passed() && checks.restriction_strict && checks.homotopy_identity;
    let structure = io::CoalgebraData {
        carrier: lift.structure.carrier.clone(),
        cooperations: vec![("b".into(), lift.structure.generators[0].clone()), ("a".into(), lift.structure.generators[1].clone())],
    };
    Ok((
        json!({
            "structure": io::coalgebra_to_json(&structure),
            "homotopy": io::cooperation_to_json("H", &wd.carrier, &lift.homotopy),
            "homotopy_target": io::complex_to_json(&vd.carrier),
            "checks": serde_json::to_value(&checks).expect("checks serialize"),
            "report": report_json(&rep),
        }),
        pass,
    ))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Homology { .. } => "homology",
        Command::EStructure { .. } => "e-structure",
        Command::Steenrod { .. } => "steenrod",
        Command::VerifyCoalgebra { .. } => "verify-coalgebra",
        Command::VerifyAinfty { .. } => "verify-ainfty",
        Command::FreeOperad { .. } => "free-operad",
        Command::ComposeProduct { .. } => "compose-product",
        Command::Cofree { .. } => "cofree",
        Command::AttachCell { .. } => "attach-cell",
        Command::Lift { .. } => "lift",
    }
}

fn emit(out: &Option<PathBuf>, v: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("values serialize");
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let result = Config::from_cli(&cli).and_then(|cfg| {
        let (mut v, pass) = run(&cli.command, &cfg)?;
        let obj = v.as_object_mut().expect("results are objects");
        obj.insert("command".into(), json!(name));
        obj.insert("config".into(), cfg.to_json());
        obj.insert("status".into(), json!(if pass { "pass" } else { "fail" }));
        Ok((v, pass))
    });
    let (v, code) = match result {
        Ok((v, pass)) => (v, if pass { 0 } else { 1 }),
        Err(e) => {
            let mut err = json!({ "kind": e.kind(), "message": e.to_string() });
            if let Error::Parse { location, .. } = &e {
                err["location"] = json!(location);
            }
            (json!({ "command": name, "status": "error", "error": err }), 2)
        }
    };
    if let Err(e) = emit(&cli.out, &v) {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
