//! `ckz`: command-line front end for the verification suites.
//!
//! Every invocation prints one JSON report on standard output (or a plain
//! text rendering with `--human`). Exit status: 0 when every check passes,
//! 1 when a check fails, 2 on usage errors.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ckz::acceptance;
use ckz::classical::{oracle_compare_with, Reading};
use ckz::fock;
use ckz::hamiltonians::{
    compat_check, gaudin, h1_explicit, h2_explicit, quantize_oneform, Complement, Construction, Flow, H2Reading,
    HamiltonianSet,
};
use ckz::integrals::{lemma_check, theorem_check, IntFlow, Relation, ALL_RELATIONS};
use ckz::ncalg::{Algebra, NCPoly};
use ckz::rootsys::RootSystem;

mod report;
use report::{Check, Report, Status};

#[derive(Parser, Debug)]
#[command(name = "ckz", version, about = "Exact verification of the confluent KZ system for sl_N")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "CKZ_JOBS")]
    jobs: Option<usize>,
    /// Plain text instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ordered positive roots and the subsets J_p, R_p, C_p.
    Roots(RootsArgs),
    /// Print one operator of the system.
    Hamiltonian(HamiltonianArgs),
    /// Compatibility brackets between flows.
    Commute(CommuteArgs),
    /// Closed-form classical one-forms against the residue oracle.
    ClassicalCheck(ClassicalArgs),
    /// Apply an operator to a vector of the tensor module.
    VermaApply(VermaArgs),
    /// Integral relations in the symmetrized-integrand calculus.
    LemmaCheck(LemmaArgs),
    /// The integral solution against the system, N = 3 without sites.
    ThmCheck(ThmArgs),
    /// The full acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Serialize)]
struct RootsArgs {
    #[arg(long = "N")]
    n: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConstructionArg {
    /// Closed-form displays.
    Explicit,
    /// Quantized classical one-forms (half complement).
    Quantized,
    /// Quantized, complement term as written.
    QuantizedFull,
    /// Quantized, no complement term.
    QuantizedOmit,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum H2ReadingArg {
    Mirrored,
    Literal,
}

impl ConstructionArg {
    fn resolve(self, reading: H2ReadingArg) -> Construction {
        let r = match reading {
            H2ReadingArg::Mirrored => H2Reading::Mirrored,
            H2ReadingArg::Literal => H2Reading::Literal,
        };
        match self {
            ConstructionArg::Explicit => Construction::Explicit(r),
            ConstructionArg::Quantized => Construction::Quantized(Complement::Half),
            ConstructionArg::QuantizedFull => Construction::Quantized(Complement::Full),
            ConstructionArg::QuantizedOmit => Construction::Quantized(Complement::Omit),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SystemArgs {
    #[arg(long = "N")]
    n: usize,
    /// Number of regular singular points.
    #[arg(long, default_value_t = 0)]
    sites: usize,
    #[arg(long, value_enum, default_value = "explicit")]
    construction: ConstructionArg,
    /// Reading of the second-order display (explicit construction only).
    #[arg(long, value_enum, default_value = "mirrored")]
    reading: H2ReadingArg,
}

#[derive(Args, Debug, Serialize)]
struct HamiltonianArgs {
    #[command(flatten)]
    #[serde(flatten)]
    system: SystemArgs,
    /// Flow: z<i>, g<p> or mu<p>.
    #[arg(long, value_parser = parse_flow)]
    #[serde(serialize_with = "report::display")]
    flow: Flow,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PairSet {
    All,
    /// Pairs among the H1/H2 flows.
    Hamiltonian,
    /// Pairs with a Gaudin flow.
    Gaudin,
}

#[derive(Args, Debug, Serialize)]
struct CommuteArgs {
    #[command(flatten)]
    #[serde(flatten)]
    system: SystemArgs,
    #[arg(long, value_enum, default_value = "all")]
    pairs: PairSet,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ClassicalReadingArg {
    Amended,
    Literal,
}

#[derive(Args, Debug, Serialize)]
struct ClassicalArgs {
    #[arg(long = "N")]
    n: usize,
    /// Number of regular singular points.
    #[arg(long = "n", default_value_t = 0)]
    sites: usize,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum, default_value = "amended")]
    reading: ClassicalReadingArg,
}

#[derive(Args, Debug, Serialize)]
struct VermaArgs {
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 0)]
    sites: usize,
    /// A word (`e[inf,a1,1] h[1,1]`) or a `coefficient | word` table, `;`
    /// separating lines.
    #[arg(long)]
    op: String,
    /// Same syntax; the vector is the operator applied to the vacuum.
    #[arg(long, default_value = "1")]
    vector: String,
}

#[derive(Args, Debug, Serialize)]
struct LemmaArgs {
    #[arg(long)]
    m1: u32,
    #[arg(long)]
    m2: u32,
    /// One relation (default: all eight).
    #[arg(long, value_parser = parse_relation)]
    #[serde(serialize_with = "report::relation")]
    relation: Option<Relation>,
    /// One value of k (default: all admissible).
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args, Debug, Serialize)]
struct ThmArgs {
    #[arg(long)]
    m1: u32,
    #[arg(long)]
    m2: u32,
    /// g1, g2, mu1 or mu2 (default: all four).
    #[arg(long, value_parser = IntFlow::parse)]
    #[serde(serialize_with = "report::opt_display")]
    flow: Option<IntFlow>,
}

#[derive(Args, Debug, Serialize)]
struct SelftestArgs {
    /// Run only these criteria (1..=9).
    #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=9))]
    criteria: Vec<u8>,
}

fn parse_flow(s: &str) -> Result<Flow, String> {
    let num = |t: &str| t.parse::<usize>().map_err(|_| format!("bad flow {s:?} (z<i>, g<p>, mu<p>)"));
    if let Some(t) = s.strip_prefix("mu") {
        Ok(Flow::Mu(num(t)?))
    } else if let Some(t) = s.strip_prefix('g') {
        Ok(Flow::Gamma(num(t)?))
    } else if let Some(t) = s.strip_prefix('z') {
        Ok(Flow::Z(num(t)?))
    } else {
        Err(format!("bad flow {s:?} (z<i>, g<p>, mu<p>)"))
    }
}

fn parse_relation(s: &str) -> Result<Relation, String> {
    Relation::parse(s).map_err(|_| {
        let names: Vec<&str> = ALL_RELATIONS.iter().map(|r| r.name()).collect();
        format!("unknown relation {s:?} (one of {})", names.join(", "))
    })
}

/// Operator from a word or a `;`-separated table.
fn parse_operator(alg: &Algebra, s: &str) -> ckz::Result<NCPoly> {
    if s.contains('|') {
        alg.parse_table(&s.replace(';', "\n"))
    } else {
        Ok(alg.normal_order(&alg.parse_word(s)?))
    }
}

fn operator(alg: &Algebra, flow: Flow, c: Construction) -> ckz::Result<NCPoly> {
    let p = match flow {
        Flow::Z(i) => return gaudin(alg, i),
        Flow::Gamma(p) | Flow::Mu(p) => p,
    };
    if p == 0 || p >= alg.n() {
        return Err(ckz::Error::Invalid(format!("flow {flow} needs 1 <= p < N = {}", alg.n())));
    }
    let k = if matches!(flow, Flow::Gamma(_)) { 1 } else { 2 };
    match (c, k) {
        (Construction::Explicit(_), 1) => h1_explicit(alg, p),
        (Construction::Explicit(r), _) => h2_explicit(alg, p, r),
        (Construction::Quantized(comp), k) => quantize_oneform(alg, k, p, comp),
    }
}

fn roots(a: &RootsArgs, rep: &mut Report) -> ckz::Result<()> {
    let rs = RootSystem::new(a.n)?;
    let list = |rs: &[ckz::rootsys::Root]| rs.iter().map(|r| r.to_string()).collect::<Vec<_>>();
    let subsets: Vec<Value> = (1..a.n)
        .map(|p| json!({"p": p, "J": list(rs.j_set(p)), "R": list(rs.r_set(p)), "C": list(rs.c_set(p))}))
        .collect();
    rep.output = Some(json!({"positive_roots": list(rs.positive_roots()), "subsets": subsets}));
    Ok(())
}

fn hamiltonian(a: &HamiltonianArgs, rep: &mut Report) -> ckz::Result<()> {
    let alg = Algebra::new(a.system.n, a.system.sites)?;
    let op = operator(&alg, a.flow, a.system.construction.resolve(a.system.reading))?;
    rep.output = Some(json!({"flow": a.flow.to_string(), "terms": op.len(), "operator": alg.render(&op)}));
    Ok(())
}

fn commute(a: &CommuteArgs, rep: &mut Report) -> ckz::Result<()> {
    let alg = Algebra::new(a.system.n, a.system.sites)?;
    let set = HamiltonianSet::build(&alg, a.system.construction.resolve(a.system.reading))?;
    let pairs = match a.pairs {
        PairSet::All => set.all_pairs(),
        PairSet::Hamiltonian => set.hamiltonian_pairs(),
        PairSet::Gaudin => set.gaudin_pairs(),
    };
    for r in compat_check(&set, &pairs) {
        let pair = format!("[{}, {}]", r.pair.0, r.pair.1);
        let mut c = Check::new(pair.clone(), r.is_zero, r.witness, r.elapsed_ms);
        c.details = Some(json!({
            "pair": pair,
            "bracket_terms_before_cancel": r.bracket_terms_before_cancel,
            "is_zero": r.is_zero,
        }));
        rep.checks.push(c);
    }
    Ok(())
}

fn classical(a: &ClassicalArgs, rep: &mut Report) -> ckz::Result<()> {
    let reading = match a.reading {
        ClassicalReadingArg::Amended => Reading::Amended,
        ClassicalReadingArg::Literal => Reading::Literal,
    };
    rep.seed = Some(a.seed);
    let r = oracle_compare_with(a.trials, a.seed, a.n, a.sites, a.k, reading)?;
    let failures: Vec<Value> = r
        .failures
        .iter()
        .map(|f| {
            json!({"trial": f.trial, "component": f.component, "explicit": f.explicit,
                   "residue": f.residue, "instance": f.instance})
        })
        .collect();
    let witness = r.failures.iter().map(|f| format!("trial {}: {}", f.trial, f.instance)).collect::<Vec<_>>().join("\n");
    let mut c = Check::new(
        format!("{}/{} instances agree", r.passed(), r.trials),
        r.failures.is_empty(),
        witness,
        r.elapsed_ms,
    );
    c.details = Some(json!({"trials": r.trials, "passed": r.passed(), "failures": failures}));
    rep.checks.push(c);
    Ok(())
}

fn verma(a: &VermaArgs, rep: &mut Report) -> ckz::Result<()> {
    let alg = Algebra::new(a.n, a.sites)?;
    let op = parse_operator(&alg, &a.op)?;
    let v = fock::vector_from(&alg, &parse_operator(&alg, &a.vector)?);
    let out = fock::act(&alg, &op, &v);
    let text = if out.is_zero() { "0".to_string() } else { out.render(&alg) };
    rep.output = Some(json!({"input": v.render(&alg), "result": text, "terms": out.len()}));
    Ok(())
}

fn lemma(a: &LemmaArgs, rep: &mut Report) -> ckz::Result<()> {
    let relations: Vec<Relation> = match a.relation {
        Some(r) => vec![r],
        None => ALL_RELATIONS.to_vec(),
    };
    for rel in relations {
        let reports = lemma_check(a.m1, a.m2, rel, a.k)?;
        if reports.is_empty() {
            let mut c = Check::new(format!("{} (no admissible k, b)", rel.name()), true, String::new(), 0);
            c.status = Status::Skipped;
            rep.checks.push(c);
        }
        for r in reports {
            let name = format!("{} k={} b={}", rel.name(), r.k, r.b);
            let mut c = Check::new(name, r.holds, r.witness, r.elapsed_ms);
            c.details = Some(json!({"relation": rel.name(), "k": r.k, "b": r.b}));
            rep.checks.push(c);
        }
    }
    Ok(())
}

fn theorem(a: &ThmArgs, rep: &mut Report) -> ckz::Result<()> {
    let flows = match a.flow {
        Some(f) => vec![f],
        None => vec![IntFlow::Gamma(1), IntFlow::Gamma(2), IntFlow::Mu(1), IntFlow::Mu(2)],
    };
    for f in flows {
        let r = theorem_check(a.m1, a.m2, f)?;
        rep.checks.push(Check::new(format!("flow {f}"), r.holds, r.witness, r.elapsed_ms));
    }
    rep.assumptions = Some(vec![
        "the cycle carries no boundary terms: integrals of total t-derivatives vanish",
        "the cycle does not depend on the parameters: differentiation passes under the integral",
    ]);
    Ok(())
}

fn selftest(a: &SelftestArgs, rep: &mut Report) -> ckz::Result<()> {
    rep.seed = Some(acceptance::SEED);
    let ids: Vec<u8> = if a.criteria.is_empty() { (1..=9).collect() } else { a.criteria.clone() };
    for id in ids {
        let c = acceptance::run(id);
        for x in &c.checks {
            rep.checks.push(Check::new(format!("{}: {}", c.id, x.name), x.passed, x.witness.clone(), x.elapsed_ms));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // Fails only if the pool already exists, which it cannot here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }

    let argv: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let (name, params, result) = {
        let mut rep = Report::default();
        let (name, params, res) = match &cli.command {
            Command::Roots(a) => ("roots", report::params(a), roots(a, &mut rep)),
            Command::Hamiltonian(a) => ("hamiltonian", report::params(a), hamiltonian(a, &mut rep)),
            Command::Commute(a) => ("commute", report::params(a), commute(a, &mut rep)),
            Command::ClassicalCheck(a) => ("classical-check", report::params(a), classical(a, &mut rep)),
            Command::VermaApply(a) => ("verma-apply", report::params(a), verma(a, &mut rep)),
            Command::LemmaCheck(a) => ("lemma-check", report::params(a), lemma(a, &mut rep)),
            Command::ThmCheck(a) => ("thm-check", report::params(a), theorem(a, &mut rep)),
            Command::Selftest(a) => ("selftest", report::params(a), selftest(a, &mut rep)),
        };
        (name, params, res.map(|()| rep))
    };
    let mut rep = match result {
        Ok(r) => r,
        Err(e) => Report { error: Some(e.to_string()), ..Report::default() },
    };
    rep.command = name.to_string();
    rep.argv = argv;
    rep.parameters = params;
    rep.elapsed_ms = start.elapsed().as_millis();
    rep.finish();

    if cli.human {
        print!("{}", rep.human());
    } else {
        println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
    }
    ExitCode::from(match rep.status {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Error | Status::Skipped => 2,
    })
}
