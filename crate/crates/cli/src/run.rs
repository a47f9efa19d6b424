//! Command execution.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use ogpd::builders::fixtures::{fixture, Fixture};
use ogpd::builders::random::{random_instance, RandomParams};
use ogpd::dot::{factorization_dot, functor_dot, groupoid_dot};
use ogpd::enlargement::is_enlargement;
use ogpd::{
    factorize, fibration_theorem_pipeline, find_lift, maximum_enlargement, quotient, star_class,
    Budget, NormalSubgroupoid, OrderedGroupoid,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::format::{parse, Writer};
use crate::model::{check_all, Model};
use crate::report::{digest, RunReport};

#[derive(Debug, Parser)]
#[command(
    name = "ogpd",
    version,
    about = "Constructions on finite ordered groupoids"
)]
pub struct Cli {
    /// Search budget in partial assignments.
    #[arg(long, global = true, default_value_t = ogpd::search::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write a Graphviz diagram of the result.
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
    /// Print only the verdict block as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every declaration in a file against its axioms.
    Validate { file: PathBuf },
    /// Star class of a functor: fibration, immersion, covering or neither.
    Classify {
        file: PathBuf,
        #[arg(long)]
        functor: Option<String>,
    },
    /// Quotient by a normal subgroupoid.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        sub: Option<String>,
    },
    /// Factor a functor through the quotient by its kernel.
    Factorize {
        file: PathBuf,
        #[arg(long)]
        functor: Option<String>,
    },
    /// Maximum enlargement of a star-injective functor.
    Enlarge {
        file: PathBuf,
        #[arg(long)]
        functor: Option<String>,
    },
    /// Mapping cocylinder and the fibration factorization.
    Cocylinder {
        file: PathBuf,
        #[arg(long)]
        functor: Option<String>,
    },
    /// Search for a lift of a homotopy square.
    Lift {
        file: PathBuf,
        #[arg(long)]
        square: Option<String>,
    },
    /// Emit a built-in example as a file.
    Fixture {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a random instance as a file.
    Random {
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Classify { .. } => "classify",
            Command::Quotient { .. } => "quotient",
            Command::Factorize { .. } => "factorize",
            Command::Enlarge { .. } => "enlarge",
            Command::Cocylinder { .. } => "cocylinder",
            Command::Lift { .. } => "lift",
            Command::Fixture { .. } => "fixture",
            Command::Random { .. } => "random",
        }
    }
}

/// A finished run: the report, an optional diagram and, for `fixture` and
/// `random`, the generated file text.
pub struct Outcome {
    pub report: RunReport,
    pub dot: Option<String>,
    pub file_text: Option<String>,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load(path: &PathBuf) -> Result<(String, Model), CliError> {
    let text = read(path)?;
    let model = Model::build(parse(&text)?)?;
    Ok((digest(text.as_bytes()), model))
}

fn input_digest(cli: &Cli) -> String {
    let path = match &cli.command {
        Command::Validate { file }
        | Command::Classify { file, .. }
        | Command::Quotient { file, .. }
        | Command::Factorize { file, .. }
        | Command::Enlarge { file, .. }
        | Command::Cocylinder { file, .. }
        | Command::Lift { file, .. } => Some(file),
        _ => None,
    };
    match path.and_then(|p| std::fs::read(p).ok()) {
        Some(bytes) => digest(&bytes),
        None => digest(format!("{:?}", cli.command).as_bytes()),
    }
}

/// Runs a command. Errors become reports with status 2 or 3.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(out) => out,
        Err(e) => Outcome {
            report: RunReport::failure(cli.command.name(), input_digest(cli), &e),
            dot: None,
            file_text: None,
        },
    }
}

fn sizes(g: &OrderedGroupoid) -> String {
    format!("{} objects, {} arrows", g.num_objects(), g.num_arrows())
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let budget = Budget(cli.budget);
    let name = cli.command.name();
    let mut dot = None;
    let mut file_text = None;
    let report = match &cli.command {
        Command::Validate { file } => {
            let text = read(file)?;
            let parsed = parse(&text)?;
            let checks = check_all(&parsed);
            let ok = checks.iter().all(|c| c.passed);
            let failed = checks.iter().filter(|c| !c.passed).count();
            let mut r = RunReport::new(
                name,
                digest(text.as_bytes()),
                ok,
                if ok {
                    format!("{} declarations valid", checks.len())
                } else {
                    format!("{failed} of {} declarations invalid", checks.len())
                },
            );
            for c in &checks {
                r.line(format!("{} {}: {}", c.kind, c.name, c.detail));
                r.fact(&format!("{} {}", c.kind, c.name), c.passed);
            }
            if ok {
                if let Ok(model) = Model::build(parsed) {
                    if let Some(g) = model.groupoids.first() {
                        dot = Some(groupoid_dot(g, &model.file.groupoids[0].name));
                    }
                }
            }
            r
        }
        Command::Classify { file, functor } => {
            let (d, model) = load(file)?;
            let (fname, f) = model.functor(functor.as_deref())?;
            let class = star_class(f);
            let mut r = RunReport::new(name, d, true, format!("{fname} is {}", class.name()));
            r.fact("functor", fname)
                .fact("class", class.name())
                .fact("star_surjective", class.surjective)
                .fact("star_injective", class.injective);
            r.line(format!("star-surjective: {}", class.surjective));
            r.line(format!("star-injective: {}", class.injective));
            dot = Some(functor_dot(f, fname));
            r
        }
        Command::Quotient { file, sub } => {
            let (d, model) = load(file)?;
            let (sname, s) = model.subgroupoid(sub.as_deref())?;
            let normal = NormalSubgroupoid::new(s.clone()).map_err(|e| CliError::Invalid {
                name: sname.to_string(),
                at: model.location_of_subgroupoid(sname),
                message: format!("not normal: {e}"),
            })?;
            let q = quotient(&normal)?;
            let qg = q.groupoid();
            let inductive = qg.is_inductive();
            let mut r =
                RunReport::new(name, d, true, format!("quotient by {sname}: {}", sizes(qg)));
            r.fact("objects", qg.num_objects())
                .fact("arrows", qg.num_arrows())
                .fact("inductive", inductive)
                .fact("trivial", qg.is_trivial());
            r.line(format!("objects: {}", qg.num_objects()));
            r.line(format!("arrows: {}", qg.num_arrows()));
            r.line(format!("inductive: {inductive}"));
            for c in qg.arrows() {
                let members: Vec<&str> =
                    q.members(c).iter().map(|&a| s.parent().label(a)).collect();
                r.line(format!("  [{}] = {{{}}}", qg.label(c), members.join(", ")));
            }
            dot = Some(groupoid_dot(qg, &format!("quotient by {sname}")));
            r
        }
        Command::Factorize { file, functor } => {
            let (d, model) = load(file)?;
            let (fname, theta) = model.functor(functor.as_deref())?;
            let fact = factorize(theta)?;
            let recomposes = fact.varpi().then(&fact.psi)?.map() == theta.map();
            let psi = star_class(&fact.psi);
            let holds = recomposes && psi.injective;
            let mid = fact.varpi().target();
            let mut r = RunReport::new(
                name,
                d,
                holds,
                format!("{fname} = ϖψ through {}", sizes(mid)),
            );
            r.fact("quotient_objects", mid.num_objects())
                .fact("quotient_arrows", mid.num_arrows())
                .fact("recomposes", recomposes)
                .fact("psi_class", psi.name());
            r.line(format!("G ⫽ ker θ: {}", sizes(mid)));
            r.line(format!("ψ is {}", psi.name()));
            dot = Some(factorization_dot(&fact, fname));
            r
        }
        Command::Enlarge { file, functor } => {
            let (d, model) = load(file)?;
            let (fname, phi) = model.functor(functor.as_deref())?;
            let enl = maximum_enlargement(phi)?;
            let big = enl.groupoid();
            let enlargement = is_enlargement(&enl.i).is_ok();
            let embedding = enl.i.is_ordered_embedding();
            let covering = star_class(&enl.pi).is_covering();
            let recomposes = enl.i.then(&enl.pi)?.map() == phi.map();
            let holds = enlargement && embedding && covering && recomposes;
            let mut r = RunReport::new(
                name,
                d,
                holds,
                format!("maximum enlargement of {fname}: {}", sizes(big)),
            );
            r.fact("objects", big.num_objects())
                .fact("arrows", big.num_arrows())
                .fact("enlargement", enlargement)
                .fact("embedding", embedding)
                .fact("covering", covering)
                .fact("recomposes", recomposes);
            r.line(format!("i is an enlargement: {enlargement}"));
            r.line(format!("i is an ordered embedding: {embedding}"));
            r.line(format!("π is a covering: {covering}"));
            dot = Some(groupoid_dot(big, "maximum enlargement"));
            r
        }
        Command::Cocylinder { file, functor } => {
            let (d, model) = load(file)?;
            let (fname, phi) = model.functor(functor.as_deref())?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let pipe = fibration_theorem_pipeline(phi, 3, &mut rng, budget)?;
            let m = pipe.cocylinder.groupoid();
            let q_covering = star_class(&pipe.q_on_derived).is_covering();
            let mut r = RunReport::new(
                name,
                d,
                q_covering,
                format!("M^φ for {fname}: {}", sizes(m)),
            );
            r.fact("objects", m.num_objects())
                .fact("arrows", m.num_arrows())
                .fact("derived_arrows", pipe.derived.groupoid.num_arrows())
                .fact("lifted_squares", pipe.lifted_squares)
                .fact("q_covering", q_covering);
            r.line(format!("Der(φ): {}", sizes(&pipe.derived.groupoid)));
            r.line(format!(
                "p_φ is {}",
                star_class(pipe.cocylinder.p_phi()).name()
            ));
            r.line(format!("sampled squares lifted: {}", pipe.lifted_squares));
            dot = Some(groupoid_dot(m, "mapping cocylinder"));
            r
        }
        Command::Lift { file, square } => {
            let (d, model) = load(file)?;
            let (sname, sq) = model.square(square.as_deref())?;
            let found = find_lift(sq, budget)?;
            let mut r = match &found {
                Some(lift) => {
                    let mut r = RunReport::new(name, d, true, format!("square {sname} has a lift"));
                    let (src, tgt) = (lift.source(), lift.target());
                    for u in src.arrows() {
                        r.line(format!("  {} ↦ {}", src.label(u), tgt.label(lift.apply(u))));
                    }
                    dot = Some(functor_dot(lift, "lift"));
                    r
                }
                None => {
                    let mut r =
                        RunReport::new(name, d, false, format!("square {sname}: no lift exists"));
                    r.line("no lift exists");
                    dot = Some(functor_dot(sq.p(), "p"));
                    r
                }
            };
            r.fact("square", sname).fact("lift_exists", found.is_some());
            r
        }
        Command::Fixture {
            name: fname,
            output,
        } => {
            let mut w = Writer::new();
            match fixture(fname)? {
                Fixture::KleinHlp(k) => {
                    w.groupoid("E", &k.e)
                        .groupoid("G", &k.g)
                        .groupoid("H", &k.h);
                    w.functor("i", &k.i).functor("p", &k.p);
                    w.square("klein", "E", "p", "i", &k.square);
                    dot = Some(functor_dot(&k.p, "p"));
                }
                Fixture::PStar(p) => {
                    w.groupoid("E", &p.e)
                        .groupoid("G", &p.g)
                        .groupoid("H", &p.h);
                    w.functor("i", &p.i).functor("p", &p.p);
                    dot = Some(functor_dot(&p.p, "p"));
                }
                Fixture::ExampleVi(ex) => {
                    w.groupoid("S", &ex.s);
                    let all: Vec<_> = ex.s.arrows().collect();
                    w.subgroupoid("all", &ex.s, &all);
                    dot = Some(groupoid_dot(&ex.s, "S"));
                }
            }
            let text = w.finish();
            finish_file(&mut file_text, &text, output)?;
            let mut r = RunReport::new(
                name,
                digest(fname.as_bytes()),
                true,
                format!("fixture {fname}"),
            );
            r.fact("fixture", fname.as_str())
                .fact("file_digest", digest(text.as_bytes()));
            r
        }
        Command::Random { seed, output } => {
            let inst = random_instance(*seed, RandomParams::default())?;
            let g = inst.groupoid.clone();
            let mut w = Writer::new();
            w.groupoid("G", &g);
            if let Some(f) = &inst.functor {
                let other: &Arc<OrderedGroupoid> = if **f.source() == *g {
                    f.target()
                } else {
                    f.source()
                };
                w.groupoid("H", other);
                w.functor("theta", f);
            }
            if let Some(a) = &inst.normal {
                w.subgroupoid("A", &g, &a.subgroupoid().arrows());
            }
            let text = w.finish();
            finish_file(&mut file_text, &text, output)?;
            dot = Some(groupoid_dot(&g, "G"));
            let mut r = RunReport::new(
                name,
                digest(seed.to_string().as_bytes()),
                true,
                format!("random instance {seed}: {}", sizes(&g)),
            );
            r.fact("seed", *seed)
                .fact("file_digest", digest(text.as_bytes()));
            r
        }
    };
    Ok(Outcome {
        report,
        dot,
        file_text,
    })
}

fn finish_file(
    slot: &mut Option<String>,
    text: &str,
    output: &Option<PathBuf>,
) -> Result<(), CliError> {
    if let Some(path) = output {
        std::fs::write(path, text).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    }
    *slot = Some(text.to_string());
    Ok(())
}
