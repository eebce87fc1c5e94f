//! Subcommand implementations.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use dfchar::characters::{character_structure, character_table, dual_structure, Check, SpaceData};
use dfchar::cohomology::{betti_numbers, class_of, cohomology_z, cycle_lattice_basis, homology_z};
use dfchar::complex::{
    build_standard, cochain_from_json, cochain_to_json, complex_to_json, load_complex, torus_grid_loops, Chain, Cochain,
    SimplicialComplex,
};
use dfchar::hodge::{weights_from_json, HodgeContext, DEFAULT_TOL, EXACT_LIMIT};
use dfchar::lowdeg::gerbe::{random_gauge, random_integral_shift};
use dfchar::lowdeg::{
    circle_function_of_spark, fractional_gerbe, monopole, spark_of_circle_function, spark_of_connection, CircleFunction, Cover,
    GerbeConnection, LatticeConnection, PatchAssignment,
};
use dfchar::morse::{critical_periods, is_thom_form, morse_complex, morse_spark, MorseMatching};
use dfchar::scalar::{format_rational, parse_rational, rat, Field};
use dfchar::spark::{duality_pair, equivalent, random_spark, spark_from_cocycle, star, star_tilde, DiscreteSpark};
use dfchar::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde_json::{json, Value};

use crate::report::{sha256_hex, RunReport};
use crate::suite::{self, stream};
use crate::{Cli, Command, Format, HodgeCmd, LowdegCmd, MorseCmd, MorseOp, Options, Outcome, Solver, SparkCmd};
use crate::{EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_PASS, EXIT_USAGE};

/// Failure modes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Command-line state shared by every subcommand.
struct Ctx<'a> {
    opts: &'a Options,
    report: RunReport,
    /// Text replacing the report on standard output, for table formats.
    text: Option<String>,
}

impl<'a> Ctx<'a> {
    fn read(&mut self, flag: &str, path: &Path) -> Res<Value> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        self.report.input(flag, json!(sha256_hex(text.as_bytes())));
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn space_name(&self) -> Res<String> {
        match (&self.opts.space, &self.opts.input) {
            (Some(s), _) => Ok(s.trim().to_string()),
            (None, Some(p)) => Ok(p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "input".into())),
            (None, None) => Err(usage("one of --space or --input is required")),
        }
    }

    fn complex(&mut self) -> Res<Arc<SimplicialComplex>> {
        let k = match (&self.opts.space, &self.opts.input) {
            (Some(s), _) => build_standard(s, self.opts.budget)?,
            (None, Some(p)) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))?;
                self.report.input("input", json!(sha256_hex(text.as_bytes())));
                load_complex(&text, false)?
            }
            (None, None) => return Err(usage("one of --space or --input is required")),
        };
        Ok(k.into_arc())
    }

    fn degree(&self) -> Res<i64> {
        self.opts.k.ok_or_else(|| usage("--k is required"))
    }

    fn tol(&self) -> Res<f64> {
        match &self.opts.tol {
            None => Ok(DEFAULT_TOL),
            Some(s) => {
                let q = parse_rational(s)?;
                let t = q.to_f64().filter(|t| *t > 0.0).ok_or_else(|| usage("--tol must be a positive rational"))?;
                Ok(t)
            }
        }
    }

    fn spark(&mut self, flag: &str, k: &Arc<SimplicialComplex>, path: &Path) -> Res<DiscreteSpark> {
        let doc = self.read(flag, path)?;
        Ok(DiscreteSpark::from_json(k.clone(), &doc)?)
    }

    fn cochain(&mut self, flag: &str, path: &Path) -> Res<Cochain<BigRational>> {
        let doc = self.read(flag, path)?;
        Ok(cochain_from_json(&doc)?.0)
    }

    fn integral(&mut self, flag: &str, path: &Path) -> Res<Cochain<BigInt>> {
        let c = self.cochain(flag, path)?;
        if c.values.iter().any(|x| !x.is_integer()) {
            return Err(Failure::Input(format!("--{flag} must have integer entries")));
        }
        Ok(c.map(|x| x.to_integer()))
    }

    fn chain(&mut self, flag: &str, path: &Path) -> Res<Chain<BigInt>> {
        let c = self.integral(flag, path)?;
        Ok(Chain::new(c.degree, c.values))
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut ctx = Ctx { opts: &cli.opts, report: RunReport::new(command_name(&cli.command)), text: None };
    record_options(&mut ctx);
    let result = dispatch(&cli.command, &mut ctx);
    match result {
        Err(Failure::Usage(m)) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Input(m)) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {m}\n") },
        Ok(()) => {
            if cli.opts.timing {
                ctx.report.wall_time_ms = Some(start.elapsed().as_millis());
            }
            let body = match (ctx.text.take(), cli.opts.format) {
                (Some(t), Format::Md | Format::Csv) => t,
                (_, Format::Md) => ctx.report.to_markdown(),
                (_, Format::Csv) => ctx.report.to_csv(),
                (_, Format::Json) => {
                    let mut s = serde_json::to_string_pretty(&ctx.report.to_json()).expect("report serializes");
                    s.push('\n');
                    s
                }
            };
            let code = if ctx.report.passed() { EXIT_PASS } else { EXIT_CHECK_FAILED };
            match &cli.opts.output {
                Some(p) => match std::fs::write(p, &body) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {}: {e}\n", p.display()) },
                },
                None => Outcome { code, stdout: body, stderr: String::new() },
            }
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Build => "build".into(),
        Command::Cohomology => "cohomology".into(),
        Command::Characters => "characters".into(),
        Command::Dual => "dual".into(),
        Command::Tables => "tables".into(),
        Command::Verify => "verify".into(),
        Command::Spark(s) => format!(
            "spark {}",
            match s {
                SparkCmd::New { .. } => "new",
                SparkCmd::D1 { .. } => "d1",
                SparkCmd::D2 { .. } => "d2",
                SparkCmd::Equiv { .. } => "equiv",
                SparkCmd::Holonomy { .. } => "holonomy",
                SparkCmd::Star { .. } => "star",
                SparkCmd::Pair { .. } => "pair",
                SparkCmd::Link => "link",
            }
        ),
        Command::Hodge(h) => format!(
            "hodge {}",
            match h {
                HodgeCmd::Project { .. } => "project",
                HodgeCmd::Green { .. } => "green",
                HodgeCmd::Spark { .. } => "spark",
                HodgeCmd::Aj { .. } => "aj",
                HodgeCmd::Principal { .. } => "principal",
            }
        ),
        Command::Morse(m) => format!(
            "morse {}",
            match m.op {
                MorseOp::Match => "match",
                MorseOp::Complex => "complex",
                MorseOp::P { .. } => "P",
                MorseOp::T { .. } => "T",
                MorseOp::Spark { .. } => "spark",
            }
        ),
        Command::Lowdeg(l) => format!(
            "lowdeg {}",
            match l {
                LowdegCmd::Circle { .. } => "circle",
                LowdegCmd::Conn { .. } => "conn",
                LowdegCmd::Gerbe { .. } => "gerbe",
            }
        ),
    }
}

fn record_options(ctx: &mut Ctx) {
    let o = ctx.opts;
    if let Some(s) = &o.space {
        ctx.report.input("space", json!(s.trim()));
    }
    if let Some(k) = o.k {
        ctx.report.input("k", json!(k));
    }
    if let Some(t) = &o.tol {
        ctx.report.input("tol", json!(t));
    }
    ctx.report.input("seed", json!(o.seed));
    ctx.report.input("trials", json!(o.trials));
    ctx.report.input("budget", json!(o.budget));
}

fn dispatch(c: &Command, ctx: &mut Ctx) -> Res<()> {
    match c {
        Command::Build => build(ctx),
        Command::Cohomology => cohomology(ctx),
        Command::Characters => characters(ctx),
        Command::Dual => dual(ctx),
        Command::Tables => tables(ctx),
        Command::Verify => verify(ctx),
        Command::Spark(s) => spark(s, ctx),
        Command::Hodge(h) => hodge(h, ctx),
        Command::Morse(m) => morse(m, ctx),
        Command::Lowdeg(l) => lowdeg(l, ctx),
    }
}

fn degree_in(k: i64, lo: i64, hi: i64) -> Res<()> {
    if k < lo || k > hi {
        return Err(Failure::Input(Error::DegreeOutOfRange { degree: k, min: lo, max: hi }.to_string()));
    }
    Ok(())
}

fn build(ctx: &mut Ctx) -> Res<()> {
    let k = ctx.complex()?;
    let r = &mut ctx.report;
    r.result("complex", complex_to_json(&k));
    r.result("dimension", json!(k.dimension()));
    r.result("f_vector", json!(k.f_vector()));
    r.result("euler_characteristic", json!(k.euler_characteristic()));
    r.result("oriented", json!(k.is_oriented()));
    r.result("connected", json!(k.is_connected()));
    Ok(())
}

fn cohomology(ctx: &mut Ctx) -> Res<()> {
    let k = ctx.complex()?;
    let n = k.dimension() as i64;
    let degrees: Vec<i64> = match ctx.opts.k {
        Some(d) => {
            degree_in(d, 0, n)?;
            vec![d]
        }
        None => (0..=n).collect(),
    };
    let mut groups = Vec::new();
    for d in degrees {
        let h = cohomology_z(&k, d as usize)?;
        let mut doc = h.to_json();
        doc["degree"] = json!(d);
        doc["rendered"] = json!(h.structure().render());
        doc["homology"] = homology_z(&k, d as usize)?.to_json();
        groups.push(doc);
    }
    ctx.report.result("cohomology", json!(groups));
    ctx.report.result("betti", json!(betti_numbers(&k)));
    Ok(())
}

fn space_data(ctx: &mut Ctx, kunneth: bool) -> Res<SpaceData> {
    let name = ctx.space_name()?;
    if kunneth && ctx.opts.space.is_some() && name.contains('*') {
        let mut parts = name.split('*').map(|p| -> Res<SpaceData> {
            let k = build_standard(p, ctx.opts.budget)?;
            Ok(SpaceData::from_complex(p.trim(), &k))
        });
        let first = parts.next().expect("split yields one part")?;
        return parts.try_fold(first, |acc, p| Ok(SpaceData::kunneth(&acc, &p?)));
    }
    let k = ctx.complex()?;
    Ok(SpaceData::from_complex(&name, &k))
}

fn characters(ctx: &mut Ctx) -> Res<()> {
    let data = space_data(ctx, true)?;
    match ctx.opts.k {
        Some(d) => {
            degree_in(d, -1, data.dimension as i64)?;
            let c = character_structure(&data, d)?;
            ctx.report.result("character", c.to_json());
        }
        None => table_output(ctx, &data),
    }
    Ok(())
}

fn table_output(ctx: &mut Ctx, data: &SpaceData) {
    let t = character_table(data);
    ctx.text = match ctx.opts.format {
        Format::Md => Some(t.to_markdown()),
        Format::Csv => Some(t.to_csv()),
        Format::Json => None,
    };
    ctx.report.result("table", t.to_json());
}

fn tables(ctx: &mut Ctx) -> Res<()> {
    let data = space_data(ctx, true)?;
    table_output(ctx, &data);
    Ok(())
}

fn dual(ctx: &mut Ctx) -> Res<()> {
    let data = space_data(ctx, true)?;
    let n = data.dimension as i64;
    let degrees: Vec<i64> = match ctx.opts.k {
        Some(d) => {
            degree_in(d, -1, n)?;
            vec![d]
        }
        None => (-1..=n).collect(),
    };
    let mut rows = Vec::new();
    for d in degrees {
        let dual = dual_structure(&data, d)?;
        let ch = character_structure(&data, n - d - 1)?;
        rows.push(json!({"degree": d, "dual": dual.to_json(), "character": ch.to_json()}));
        ctx.report.check(Check::new(
            format!("duality in degree {d}"),
            dual.structure_equal(&ch),
            format!("{} vs {}", dual.render(), ch.render()),
        ));
    }
    ctx.report.result("dual", json!(rows));
    Ok(())
}

fn class_json(c: &dfchar::cohomology::ClassCoordinates) -> Value {
    json!({
        "free": c.free.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "torsion": c.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

fn rationals(v: &[BigRational]) -> Value {
    json!(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn spark(cmd: &SparkCmd, ctx: &mut Ctx) -> Res<()> {
    let k = ctx.complex()?;
    match cmd {
        SparkCmd::New { cocycle } => {
            let s = match cocycle {
                Some(p) => {
                    let r = ctx.integral("cocycle", p)?;
                    spark_from_cocycle(&k, &r)?
                }
                None => {
                    let d = ctx.degree()?;
                    degree_in(d, 0, k.dimension() as i64)?;
                    random_spark(&k, d as usize, &mut stream(ctx.opts.seed, "spark new"))?
                }
            };
            ctx.report.result("spark", s.to_json());
        }
        SparkCmd::D1 { spark } => {
            let s = ctx.spark("spark", &k, spark)?;
            ctx.report.result("d1", cochain_to_json(&s.phi(), false));
        }
        SparkCmd::D2 { spark } => {
            let s = ctx.spark("spark", &k, spark)?;
            ctx.report.result("d2", class_json(&s.d2()?));
            if s.degree() < k.dimension() {
                ctx.report.result("group", json!(cohomology_z(&k, s.degree() + 1)?.structure().render()));
            }
        }
        SparkCmd::Equiv { spark, other } => {
            let s = ctx.spark("spark", &k, spark)?;
            let t = ctx.spark("other", &k, other)?;
            ctx.report.result("equivalent", json!(equivalent(&s, &t)?));
        }
        SparkCmd::Holonomy { spark, cycle } => {
            let s = ctx.spark("spark", &k, spark)?;
            match cycle {
                Some(p) => {
                    let z = ctx.chain("cycle", p)?;
                    ctx.report.result("holonomy", json!(format_rational(&s.holonomy(&z)?)));
                }
                None => {
                    let values = cycle_lattice_basis(&k, s.degree())?
                        .iter()
                        .map(|z| s.holonomy(z))
                        .collect::<dfchar::Result<Vec<_>>>()?;
                    ctx.report.result("holonomy", rationals(&values));
                }
            }
        }
        SparkCmd::Star { spark, other } => {
            let s = ctx.spark("spark", &k, spark)?;
            let t = ctx.spark("other", &k, other)?;
            let p = star(&s, &t)?;
            ctx.report.result("star", p.to_json());
            let phi_psi = dfchar::spark::cup_or_empty(&k, &s.phi(), &t.phi())?;
            ctx.report.check(Check::new("curvature of product is φ∪ψ", p.phi() == phi_psi, ""));
            ctx.report.check(Check::new("second product formula is equivalent", equivalent(&star_tilde(&s, &t)?, &p)?, ""));
        }
        SparkCmd::Pair { spark, other } => {
            let s = ctx.spark("spark", &k, spark)?;
            let t = ctx.spark("other", &k, other)?;
            ctx.report.result("pairing", json!(format_rational(&duality_pair(&s, &t)?)));
        }
        SparkCmd::Link => {
            let n = k.dimension() as i64;
            let d = match ctx.opts.k {
                Some(d) => d,
                None => (n - 1) / 2,
            };
            degree_in(d, 0, n - 1)?;
            let (m, checks) = suite::linking(&k, d as usize, ctx.opts.seed)?;
            ctx.report.result("matrix", json!(m.iter().map(|r| rationals(r)).collect::<Vec<_>>()));
            ctx.report.extend(checks);
        }
    }
    Ok(())
}

fn use_exact(ctx: &Ctx, k: &SimplicialComplex) -> bool {
    match ctx.opts.solver {
        Solver::Exact => true,
        Solver::Iterative => false,
        Solver::Auto => k.total_simplices() < EXACT_LIMIT,
    }
}

fn field_values<F: Field>(x: &[F]) -> Value {
    if F::EXACT {
        json!(x.iter().map(|v| format_rational(&v.to_rational())).collect::<Vec<_>>())
    } else {
        json!(x.iter().map(|v| v.to_f64_lossy()).collect::<Vec<_>>())
    }
}

fn field_cochain<F: Field>(c: &Cochain<F>) -> Value {
    json!({"degree": c.degree, "values": field_values(&c.values)})
}

fn hodge(cmd: &HodgeCmd, ctx: &mut Ctx) -> Res<()> {
    let k = ctx.complex()?;
    let tol = ctx.tol()?;
    let weights = match &ctx.opts.weights {
        Some(p) => {
            let doc = ctx.read("weights", &p.clone())?;
            Some(weights_from_json(&k, &doc)?)
        }
        None => None,
    };
    let exact = use_exact(ctx, &k);
    ctx.report.input("solver", json!(if exact { "exact" } else { "iterative" }));
    if exact {
        hodge_with::<BigRational>(cmd, ctx, k, weights, tol)
    } else {
        hodge_with::<f64>(cmd, ctx, k, weights, tol)
    }
}

/// The grid loop basis when the space is a named torus grid.
fn grid_loops(ctx: &Ctx, k: &SimplicialComplex) -> Res<Option<Vec<Chain<BigInt>>>> {
    let m = ctx.opts.space.as_deref().and_then(|s| s.trim().strip_prefix("grid")).and_then(|m| m.parse::<usize>().ok());
    match m {
        Some(m) => Ok(Some(torus_grid_loops(k, m)?.iter().map(|l| Chain::from_i64(1, l)).collect())),
        None => Ok(None),
    }
}

fn hodge_with<F: Field>(
    cmd: &HodgeCmd,
    ctx: &mut Ctx,
    k: Arc<SimplicialComplex>,
    weights: Option<dfchar::hodge::Weights>,
    tol: f64,
) -> Res<()> {
    let mut h = HodgeContext::<F>::new(k.clone(), weights, tol)?;
    if let Some(loops) = grid_loops(ctx, &k)? {
        h = h.with_cycle_basis(1, loops)?;
    }
    match cmd {
        HodgeCmd::Project { cochain } => {
            let x = ctx.cochain("cochain", cochain)?;
            let xf = x.map(|q| F::from_rational(q));
            let d = h.decompose(&xf)?;
            ctx.report.result("harmonic", field_cochain(&d.harmonic));
            ctx.report.result("exact", field_cochain(&d.exact));
            ctx.report.result("coexact", field_cochain(&d.coexact));
            let res = h.decomposition_residual(&xf)?;
            ctx.report.residual("decomposition", res);
            ctx.report.check(residual_check("decomposition residual", res, F::EXACT, tol));
        }
        HodgeCmd::Green { cochain } => {
            let x = ctx.cochain("cochain", cochain)?;
            let g = h.green(&x.map(|q| F::from_rational(q)))?;
            ctx.report.result("green", field_cochain(&g));
        }
        HodgeCmd::Spark { cocycle } => {
            let r = ctx.integral("cocycle", cocycle)?;
            let res = h.spark_residual(&r)?;
            ctx.report.residual("spark equation", res);
            ctx.report.check(residual_check("spark equation residual", res, F::EXACT, tol));
            ctx.report.result("sigma", field_cochain(&h.sigma(&r)?));
            ctx.report.result("spark", h.hodge_spark(&r)?.to_json());
        }
        HodgeCmd::Aj { chain, from, to } => {
            let values = match (chain, from, to) {
                (Some(p), None, None) => {
                    let c = ctx.chain("chain", p)?;
                    h.abel_jacobi(&c)?
                }
                (None, Some(p), Some(q)) => {
                    ctx.report.input("from", json!(p));
                    ctx.report.input("to", json!(q));
                    h.point_aj(*p, *q)?
                }
                _ => return Err(usage("give either --chain or --from and --to")),
            };
            ctx.report.result("abel_jacobi", field_values(&values));
        }
        HodgeCmd::Principal { chain } => {
            let c = ctx.chain("chain", chain)?;
            ctx.report.result("abel_jacobi", field_values(&h.abel_jacobi(&c)?));
            ctx.report.result("principal", json!(h.is_principal(&c)?));
        }
    }
    Ok(())
}

fn residual_check(name: &str, res: f64, exact: bool, tol: f64) -> Check {
    if exact {
        Check::new(name, res == 0.0, format!("{res:e}"))
    } else {
        Check::new(name, res <= tol, format!("{res:e} ≤ {tol:e}"))
    }
}

fn morse(cmd: &MorseCmd, ctx: &mut Ctx) -> Res<()> {
    let k = ctx.complex()?;
    let m = match (&cmd.matching, cmd.empty) {
        (Some(p), _) => {
            let doc = ctx.read("matching", p)?;
            MorseMatching::from_json(k.clone(), &doc)?
        }
        (None, true) => MorseMatching::empty(k.clone()),
        (None, false) => MorseMatching::greedy(k.clone()),
    };
    ctx.report.input("matching", if cmd.matching.is_some() { json!("file") } else if cmd.empty { json!("empty") } else { json!("greedy") });
    match &cmd.op {
        MorseOp::Match => {
            ctx.report.result("matching", m.to_json());
            ctx.report.result("critical_counts", json!(m.critical_counts()));
            ctx.report.result("critical", json!(m.critical_cells()));
        }
        MorseOp::Complex => {
            ctx.report.result("morse_complex", morse_complex(&m).to_json(&k));
            ctx.report.extend(suite::morse_checks(&m, "matching")?);
        }
        MorseOp::P { cochain } => {
            let x = ctx.cochain("cochain", cochain)?;
            let p = m.project(&x)?;
            ctx.report.result("P", cochain_to_json(&p, false));
            ctx.report.check(identity_check(&m, x.degree));
        }
        MorseOp::T { cochain } => {
            let x = ctx.cochain("cochain", cochain)?;
            let t = m.homotopy(&x)?;
            ctx.report.result("T", cochain_to_json(&t, false));
            ctx.report.check(identity_check(&m, x.degree));
        }
        MorseOp::Spark { cochain } => {
            let phi = ctx.cochain("cochain", cochain)?;
            let periods = critical_periods(&m, &phi)?;
            ctx.report.result(
                "critical_periods",
                json!(periods.iter().map(|(c, v)| json!({"cell": c, "value": format_rational(v)})).collect::<Vec<_>>()),
            );
            let s = morse_spark(&m, &phi)?;
            ctx.report.result("spark", s.to_json());
            ctx.report.check(Check::new("curvature equals the input", s.phi() == phi, ""));
            ctx.report.check(Check::new("R = Pφ", is_thom_form(&m, &phi, s.r())?, ""));
        }
    }
    Ok(())
}

fn identity_check(m: &MorseMatching, d: usize) -> Check {
    Check::new(format!("δT + Tδ = 1 - P in degree {d}"), m.identity_holds(d), "")
}

fn lowdeg(cmd: &LowdegCmd, ctx: &mut Ctx) -> Res<()> {
    let k = ctx.complex()?;
    match cmd {
        LowdegCmd::Circle { function } => circle(ctx, k, function.as_deref()),
        LowdegCmd::Conn { connection, monopole: charge, section } => conn(ctx, k, connection.as_deref(), *charge, section.as_deref()),
        LowdegCmd::Gerbe { gerbe, fraction, cover } => gerbe_cmd(ctx, k, gerbe.as_deref(), fraction.as_deref(), cover.as_deref()),
    }
}

fn circle(ctx: &mut Ctx, k: Arc<SimplicialComplex>, function: Option<&Path>) -> Res<()> {
    let f = match function {
        Some(p) => {
            let doc = ctx.read("function", p)?;
            CircleFunction::from_json(k.clone(), &doc)?
        }
        None => {
            let mut rng = stream(ctx.opts.seed, "lowdeg circle");
            let spread = if k.dimension() >= 2 { 8 } else { 1 };
            let values = (0..k.vertex_count()).map(|_| rat(rng.gen_range(0..24), 24 * spread)).collect();
            CircleFunction::new(k.clone(), values)?
        }
    };
    let s = spark_of_circle_function(&f)?;
    ctx.report.result("function", f.to_json());
    ctx.report.result("spark", s.to_json());
    if k.dimension() >= 1 {
        let windings =
            cycle_lattice_basis(&k, 1)?.iter().map(|z| f.winding_number(z).map(|w| w.to_string())).collect::<dfchar::Result<Vec<_>>>()?;
        ctx.report.result("winding_numbers", json!(windings));
    }
    ctx.report.check(Check::new("circle function round trip", circle_function_of_spark(&s)? == f, ""));
    Ok(())
}

fn random_section(n: usize, rng: &mut impl Rng) -> Vec<BigRational> {
    (0..n).map(|_| rat(rng.gen_range(-20..=20), 2 * rng.gen_range(1..=6) + 1)).collect()
}

fn conn(ctx: &mut Ctx, k: Arc<SimplicialComplex>, file: Option<&Path>, charge: Option<i64>, section: Option<&Path>) -> Res<()> {
    let c = match (file, charge) {
        (Some(p), _) => {
            let doc = ctx.read("connection", p)?;
            LatticeConnection::from_json(k.clone(), &doc)?
        }
        (None, Some(q)) => {
            ctx.report.input("monopole", json!(q));
            monopole(k.clone(), q)?
        }
        (None, None) => return Err(usage("give --connection or --monopole")),
    };
    let p = match section {
        Some(path) => {
            let doc = ctx.read("section", path)?;
            CircleFunction::from_json(k.clone(), &doc).map(|f| f.values().to_vec())?
        }
        None => random_section(k.vertex_count(), &mut stream(ctx.opts.seed, "lowdeg conn")),
    };
    ctx.report.result("connection", c.to_json());
    ctx.report.result("section", rationals(&p));
    let holonomy = cycle_lattice_basis(&k, 1)?.iter().map(|z| c.holonomy(z)).collect::<dfchar::Result<Vec<_>>>()?;
    ctx.report.result("holonomy", rationals(&holonomy));
    if k.dimension() >= 2 {
        let (f, chern) = c.chern_cocycle()?;
        ctx.report.result("curvature", cochain_to_json(&f, false));
        ctx.report.result("chern_cocycle", cochain_to_json(&chern.to_rational(), true));
        if k.dimension() == 2 && k.is_oriented() {
            ctx.report.result("chern_number", json!(c.chern_number()?.to_string()));
        }
        let s0 = spark_of_connection(&c, None)?;
        let sp = spark_of_connection(&c, Some(&p))?;
        ctx.report.result("spark", sp.to_json());
        ctx.report.check(Check::new("curvature of spark is F", sp.phi() == f, ""));
        ctx.report.check(Check::new("sparks from different sections are equivalent", equivalent(&s0, &sp)?, ""));
    }
    Ok(())
}

fn gerbe_cmd(ctx: &mut Ctx, k: Arc<SimplicialComplex>, file: Option<&Path>, fraction: Option<&str>, cover: Option<&Path>) -> Res<()> {
    let g = match (file, fraction) {
        (Some(p), _) => {
            let doc = ctx.read("gerbe", p)?;
            GerbeConnection::from_json(k.clone(), &doc)?
        }
        (None, Some(v)) => {
            ctx.report.input("fraction", json!(v));
            let cover = match cover {
                Some(p) => {
                    let doc = ctx.read("cover", p)?;
                    Cover::from_json(k.clone(), &doc)?
                }
                None => Cover::vertex_stars(k.clone()),
            };
            fractional_gerbe(Arc::new(cover), &parse_rational(v)?)?
        }
        (None, None) => return Err(usage("give --gerbe or --fraction")),
    };
    let c = g.cover().clone();
    ctx.report.result("patches", json!(c.patch_count()));
    let defects: Vec<Value> = c.acyclicity_defects().into_iter().map(|(idx, degs)| json!({"overlap": idx, "degrees": degs})).collect();
    ctx.report.result("acyclicity_defects", json!(defects));
    let (phi, r) = g.total_differential()?;
    ctx.report.result("curvature", cochain_to_json(&phi, false));
    ctx.report.result("flat", json!(phi.is_zero()));
    ctx.report.result("cech_cocycle_zero", json!(r.is_zero()));
    if k.dimension() == 2 && k.is_oriented() {
        let h = g.holonomy()?;
        ctx.report.result("holonomy", json!(format_rational(&h)));
        let z = Chain::fundamental(&k).ok_or(Error::Unoriented)?;
        let mut rng = stream(ctx.opts.seed, "lowdeg gerbe");
        let mut ok = 0;
        for _ in 0..ctx.opts.trials {
            let (b0, b1) = random_gauge(&c, &mut rng);
            let s = random_integral_shift(&c, &mut rng);
            let asg = PatchAssignment::random(&c, &mut rng)?;
            if g.gauge(&b0, &b1, Some(&s))?.surface_holonomy(&z, Some(&asg))? == h {
                ok += 1;
            }
        }
        let n = ctx.opts.trials;
        ctx.report.check(Check::new("holonomy is gauge invariant", ok == n, format!("{ok}/{n}")));
    }
    Ok(())
}

fn verify(ctx: &mut Ctx) -> Res<()> {
    let k = ctx.complex()?;
    let name = ctx.space_name()?;
    let data = SpaceData::from_complex(&name, &k);
    let (seed, trials) = (ctx.opts.seed, ctx.opts.trials);
    let tol = ctx.tol()?;
    let r = &mut ctx.report;
    r.result("table", character_table(&data).to_json());
    r.extend(suite::sequences(&k)?);
    let n = k.dimension();
    if k.is_oriented() {
        r.extend(suite::duality(&data)?);
        for d in 0..n {
            if !data.group(d as i64 + 1).torsion.is_empty() {
                let (m, checks) = suite::linking(&k, d, seed)?;
                r.result(&format!("linking_{d}"), json!(m.iter().map(|row| rationals(row)).collect::<Vec<_>>()));
                r.extend(checks);
            }
        }
    }
    r.extend(suite::star_identities(&k, trials, seed)?);
    r.extend(suite::holonomy_invariance(&k, trials, seed)?);
    suite::hodge_residuals(&k, 2, tol, seed, r)?;
    r.extend(suite::morse_checks(&MorseMatching::greedy(k.clone()), "greedy matching")?);
    if let Ok(m) = suite::hand_matching(&name, k.clone()) {
        r.extend(suite::morse_checks(&m, "hand matching")?);
    }
    if n >= 1 {
        let cocycles = cohomology_z(&k, 1)?;
        for (i, g) in cocycles.free_generators().iter().enumerate() {
            let s = spark_from_cocycle(&k, g)?;
            let cls = class_of(&k, g)?;
            r.check(Check::new(format!("spark from generator {i} has that class"), s.d2()? == cls, ""));
        }
    }
    Ok(())
}
