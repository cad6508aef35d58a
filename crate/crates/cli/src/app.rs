//! Subcommands. Each returns the text to print and an exit status, so the
//! binary stays a thin wrapper and everything is testable in-process.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use apportion_core::multiwinner::elect;
use apportion_core::properties::{
    cambridge_bounds, check_pjr_with, lower_quota_bounds, penrose_bounds,
};
use apportion_core::reduction::{induce, Route};
use apportion_core::{
    divisor_apportion_with, largest_remainder_with, ApportionmentInstance, Committee, Grouping,
    Limits, Options, SeatDistribution,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::format::{
    committee_ids, ApportionmentFile, InstanceFile, OutcomeDocument, OutcomeKind, ProfileFile,
};
use crate::names::{parse_list, parse_method, parse_rule, parse_weights, Method};
use crate::sweep::{random_instance, verify_claim, Claim, Mode, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "apportion", version, about = "Exact apportionment and approval-based committee elections")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Output::Json)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an apportionment method.
    Apportion(ApportionArgs),
    /// Run a committee rule on an approval profile.
    Elect(ElectArgs),
    /// Run the apportionment method induced by a committee rule.
    Induce(InduceArgs),
    /// Check a representation property of an allocation.
    Check(CheckArgs),
    /// Verify a claim over a family of instances.
    Verify(VerifyArgs),
    /// Generate a random instance file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Votes per party, comma separated.
    #[arg(long)]
    pub votes: Option<String>,
    /// House size.
    #[arg(long)]
    pub seats: Option<usize>,
    /// Instance file with `votes` and `seats`.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApportionArgs {
    /// dhondt, sainte-lague, adams, largest-remainder or divisor:<divisors>.
    #[arg(long)]
    pub method: String,
    #[command(flatten)]
    pub instance: InstanceArgs,
}

#[derive(Debug, Args)]
pub struct ElectArgs {
    /// pav, cc, topk, seq-pav, owa:<weights>, seq-owa:<weights>, monroe,
    /// max-phragmen, var-phragmen, sav or mav.
    #[arg(long)]
    pub rule: String,
    /// Profile file.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Committee size; defaults to the file's `k`.
    #[arg(short)]
    pub k: Option<usize>,
    /// Search every candidate separately instead of merging clones.
    #[arg(long)]
    pub no_clones: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    ClosedForm,
    Committees,
    CommitteesPlain,
}

#[derive(Debug, Args)]
pub struct InduceArgs {
    #[arg(long)]
    pub rule: String,
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = RouteArg::ClosedForm)]
    pub route: RouteArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Property {
    LowerQuota,
    Quota,
    Penrose,
    Cambridge,
    Threshold,
    Pjr,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub property: Property,
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Seats per party, comma separated.
    #[arg(long)]
    pub alloc: Option<String>,
    /// Committee members (1-based), for pjr.
    #[arg(long)]
    pub committee: Option<String>,
    /// Threshold parameter t.
    #[arg(long)]
    pub t: Option<usize>,
    /// Base seats per party for cambridge.
    #[arg(long, default_value_t = 5)]
    pub base: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub claim: String,
    /// Enumerate the whole grid instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub min_parties: usize,
    #[arg(long, default_value_t = 3)]
    pub max_parties: usize,
    #[arg(long, default_value_t = 10)]
    pub max_votes: u64,
    #[arg(long, default_value_t = 5)]
    pub max_seats: usize,
    /// Keep only instances where the house size divides the total vote.
    #[arg(long)]
    pub divisible: bool,
    /// Weight sequences to use instead of the claim's own, `|`-separated.
    #[arg(long)]
    pub weights: Option<String>,
    /// Skip the committee-route cross-check.
    #[arg(long)]
    pub no_cross_check: bool,
    /// Print timing to stderr.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Apportionment,
    Profile,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Apportionment)]
    pub kind: GenKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub max_parties: usize,
    #[arg(long, default_value_t = 60)]
    pub max_votes: u64,
    #[arg(long, default_value_t = 8)]
    pub max_seats: usize,
    /// Profile candidates.
    #[arg(long, default_value_t = 6)]
    pub candidates: usize,
    /// Profile voters.
    #[arg(long, default_value_t = 8)]
    pub voters: usize,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn verdict(stdout: String, pass: bool) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: if pass { EXIT_OK } else { EXIT_FAILED },
        }
    }

    fn usage(message: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: EXIT_USAGE,
        }
    }
}

type Run<T> = Result<T, String>;

fn stringify<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run(cli: Cli) -> Outcome {
    let output = cli.output;
    let result = match cli.command {
        Command::Apportion(a) => apportion(a, output),
        Command::Elect(a) => elect_cmd(a, output),
        Command::Induce(a) => induce_cmd(a, output),
        Command::Check(a) => check(a, output),
        Command::Verify(a) => verify(a, output),
        Command::Gen(a) => gen(a),
    };
    result.unwrap_or_else(Outcome::usage)
}

fn read_file(path: &PathBuf) -> Run<InstanceFile> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_instance(args: &InstanceArgs) -> Run<ApportionmentInstance> {
    let file = match (&args.input, &args.votes, args.seats) {
        (Some(path), None, None) => match read_file(path)? {
            InstanceFile::Apportionment(f) => f,
            InstanceFile::Profile(_) => {
                return Err(format!("{} holds a profile, not votes and seats", path.display()))
            }
        },
        (None, Some(votes), Some(seats)) => ApportionmentFile {
            votes: parse_list(votes).map_err(stringify)?,
            seats,
        },
        _ => return Err("give either --input or both --votes and --seats".into()),
    };
    file.to_instance().map_err(stringify)
}

fn render(doc: &OutcomeDocument, output: Output, kind: OutcomeKind) -> String {
    match output {
        Output::Json => doc.to_json() + "\n",
        Output::Table => doc.to_table(kind),
    }
}

fn apportion(args: ApportionArgs, output: Output) -> Run<Outcome> {
    let method = parse_method(&args.method).map_err(stringify)?;
    let inst = load_instance(&args.instance)?;
    let limits = Limits::default();
    let outcomes = match &method {
        Method::Divisor { divisors, .. } => divisor_apportion_with(&inst, divisors, &limits),
        Method::LargestRemainder => largest_remainder_with(&inst, &limits),
    }
    .map_err(stringify)?;
    let doc = OutcomeDocument::from_distributions(method.name(), outcomes.iter());
    Ok(Outcome::ok(render(&doc, output, OutcomeKind::Seats)))
}

fn elect_cmd(args: ElectArgs, output: Output) -> Run<Outcome> {
    let rule = parse_rule(&args.rule).map_err(stringify)?;
    let file = match read_file(&args.input)? {
        InstanceFile::Profile(p) => p,
        InstanceFile::Apportionment(_) => {
            return Err(format!("{} holds votes and seats, not a profile", args.input.display()))
        }
    };
    let profile = file.to_profile().map_err(stringify)?;
    let k = args.k.unwrap_or(file.k);
    let options = Options {
        limits: Limits::default(),
        grouping: if args.no_clones { Grouping::Plain } else { Grouping::Clones },
    };
    let election = elect(&profile, k, &rule, &options).map_err(stringify)?;
    let committees = election
        .committees
        .to_committees(options.limits.outcome_cap)
        .map_err(stringify)?;
    let mut doc = OutcomeDocument::from_committees(rule.to_string(), committees.iter());
    if let Some(score) = &election.score {
        doc = doc.with_score("optimum", score);
    }
    Ok(Outcome::ok(render(&doc, output, OutcomeKind::Committee)))
}

fn induce_cmd(args: InduceArgs, output: Output) -> Run<Outcome> {
    let rule = parse_rule(&args.rule).map_err(stringify)?;
    let inst = load_instance(&args.instance)?;
    let route = match args.route {
        RouteArg::ClosedForm => Route::ClosedForm,
        RouteArg::Committees => Route::Committees(Grouping::Clones),
        RouteArg::CommitteesPlain => Route::Committees(Grouping::Plain),
    };
    let induced = induce(&rule, &inst, route, &Limits::default()).map_err(stringify)?;
    let mut doc = OutcomeDocument::from_distributions(rule.to_string(), induced.outcomes.iter());
    if let Some(score) = &induced.score {
        doc = doc.with_score("optimum", score);
    }
    Ok(Outcome::ok(render(&doc, output, OutcomeKind::Seats)))
}

fn check(args: CheckArgs, output: Output) -> Run<Outcome> {
    if args.property == Property::Pjr {
        return check_pjr_cmd(&args, output);
    }
    let inst = load_instance(&args.instance)?;
    let alloc = args.alloc.as_deref().ok_or("--alloc is required")?;
    let x = SeatDistribution(parse_list(alloc).map_err(stringify)?);
    inst.check_distribution(&x).map_err(stringify)?;
    let p = inst.parties();

    // (lower bound, upper bound) per party, or shares for the threshold
    let mut rows = Vec::with_capacity(p);
    let name;
    match args.property {
        Property::LowerQuota | Property::Quota | Property::Penrose | Property::Cambridge => {
            let (lower, upper): (Vec<usize>, Option<Vec<usize>>) = match args.property {
                Property::LowerQuota => (lower_quota_bounds(&inst), None),
                Property::Quota => (
                    lower_quota_bounds(&inst),
                    Some((0..p).map(|i| inst.quota_bounds(i).1).collect()),
                ),
                Property::Penrose => (penrose_bounds(&inst), None),
                _ => (cambridge_bounds(&inst, args.base).map_err(stringify)?, None),
            };
            name = match args.property {
                Property::LowerQuota => "lower-quota".to_string(),
                Property::Quota => "quota".to_string(),
                Property::Penrose => "penrose".to_string(),
                _ => format!("cambridge(base={})", args.base),
            };
            for i in 0..p {
                let upper_i = upper.as_ref().map(|u| u[i]);
                let pass = x[i] >= lower[i] && upper_i.is_none_or(|u| x[i] <= u);
                let mut row = json!({"party": i + 1, "seats": x[i], "lower": lower[i], "pass": pass});
                if let Some(u) = upper_i {
                    row["upper"] = json!(u);
                }
                rows.push(row);
            }
        }
        Property::Threshold => {
            let t = args.t.ok_or("--t is required for threshold")?;
            if t == 0 || t >= inst.seats() {
                return Err(format!("threshold t must lie in 1..{}", inst.seats()));
            }
            name = format!("threshold(t={t})");
            let seated: u64 = (0..p).filter(|&i| x[i] > 0).map(|i| inst.votes()[i]).sum();
            for i in 0..p {
                let mut row = json!({"party": i + 1, "seats": x[i]});
                let pass = if x[i] > 0 {
                    let share = apportion_core::Rational::new(inst.votes()[i].into(), seated.into());
                    row["share"] = json!(share.to_string());
                    u128::from(inst.votes()[i]) * inst.seats() as u128 > t as u128 * u128::from(seated)
                } else {
                    true
                };
                row["pass"] = json!(pass);
                rows.push(row);
            }
            rows.iter_mut().for_each(|r| {
                r["bound"] = json!(format!("{t}/{}", inst.seats()));
            });
        }
        Property::Pjr => unreachable!(),
    }
    let pass = rows.iter().all(|r| r["pass"] == json!(true));
    let doc = json!({"property": name, "pass": pass, "parties": rows});
    let text = match output {
        Output::Json => serde_json::to_string_pretty(&doc).expect("json") + "\n",
        Output::Table => {
            let mut s = format!("{name}: {}\n", if pass { "pass" } else { "fail" });
            for r in &rows {
                let bound = r
                    .get("lower")
                    .map(|l| format!(">= {l}"))
                    .or_else(|| r.get("share").map(|sh| format!("share {} > {}", sh.as_str().unwrap(), r["bound"].as_str().unwrap())))
                    .unwrap_or_else(|| "unseated".into());
                let upper = r.get("upper").map(|u| format!(", <= {u}")).unwrap_or_default();
                writeln!(
                    s,
                    "  party {}: {} seats ({bound}{upper}) {}",
                    r["party"],
                    r["seats"],
                    if r["pass"] == json!(true) { "pass" } else { "FAIL" }
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Outcome::verdict(text, pass))
}

fn check_pjr_cmd(args: &CheckArgs, output: Output) -> Run<Outcome> {
    let path = args.instance.input.as_ref().ok_or("pjr needs --input with a profile")?;
    let (profile, k) = match read_file(path)? {
        InstanceFile::Profile(p) => (p.to_profile().map_err(stringify)?, p.k),
        InstanceFile::Apportionment(a) => {
            let inst = a.to_instance().map_err(stringify)?;
            let (profile, k, _) = apportion_core::embed(&inst).map_err(stringify)?;
            (profile, k)
        }
    };
    let ids: Vec<usize> =
        parse_list(args.committee.as_deref().ok_or("--committee is required for pjr")?)
            .map_err(stringify)?;
    if ids.iter().any(|&c| c == 0 || c > profile.num_candidates()) {
        return Err(format!("committee ids must lie in 1..={}", profile.num_candidates()));
    }
    let committee = Committee::new(ids.iter().map(|c| c - 1).collect()).map_err(stringify)?;
    let pass = check_pjr_with(&profile, k, &committee, &Limits::default()).map_err(stringify)?;
    let text = match output {
        Output::Json => {
            let doc = json!({"property": "pjr", "pass": pass, "committee": committee_ids(&committee), "k": k});
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Output::Table => format!("pjr: {} for {committee}\n", if pass { "pass" } else { "fail" }),
    };
    Ok(Outcome::verdict(text, pass))
}

fn verify(args: VerifyArgs, output: Output) -> Run<Outcome> {
    let claim: Claim = args.claim.parse().map_err(stringify)?;
    let weights = match &args.weights {
        None => None,
        Some(s) => Some(
            s.split('|')
                .map(parse_weights)
                .collect::<Result<Vec<_>, _>>()
                .map_err(stringify)?,
        ),
    };
    let cfg = SweepConfig {
        min_parties: args.min_parties,
        max_parties: args.max_parties,
        max_votes: args.max_votes,
        max_seats: args.max_seats,
        mode: if args.exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Random {
                trials: args.trials,
                seed: args.seed,
            }
        },
        divisible_only: args.divisible,
        weights,
        cross_check: !args.no_cross_check,
        limits: Limits::default(),
    };
    let report = verify_claim(claim, &cfg).map_err(stringify)?;
    let text = match output {
        Output::Json => {
            let failures: Vec<_> = report
                .failures
                .iter()
                .map(|f| json!({"votes": f.votes, "seats": f.seats, "detail": f.detail}))
                .collect();
            let doc = json!({
                "claim": claim.id(),
                "instances": report.instances_tested,
                "skipped": report.skipped,
                "failures": failures,
                "holds": report.holds(),
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
        Output::Table => {
            let mut s = format!("{report}\n");
            for f in report.failures.iter().take(20) {
                writeln!(s, "  {f}").unwrap();
            }
            if report.failures.len() > 20 {
                writeln!(s, "  ... {} more", report.failures.len() - 20).unwrap();
            }
            s
        }
    };
    let mut outcome = Outcome::verdict(text, report.holds());
    if args.timing {
        outcome.stderr = format!("elapsed: {:.3}s\n", report.elapsed.as_secs_f64());
    }
    Ok(outcome)
}

fn gen(args: GenArgs) -> Run<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let file = match args.kind {
        GenKind::Apportionment => {
            if args.max_parties == 0 || args.max_votes == 0 || args.max_seats == 0 {
                return Err("bounds must be positive".into());
            }
            let inst = random_instance(&mut rng, 1..=args.max_parties, args.max_votes, args.max_seats);
            InstanceFile::Apportionment(ApportionmentFile::from_instance(&inst))
        }
        GenKind::Profile => {
            if args.candidates == 0 || args.voters == 0 {
                return Err("a profile needs candidates and voters".into());
            }
            let ballots = (0..args.voters)
                .map(|_| {
                    (1..=args.candidates)
                        .filter(|_| rng.gen_bool(0.4))
                        .collect()
                })
                .collect();
            let k = rng.gen_range(1..=args.candidates.min(4));
            InstanceFile::Profile(ProfileFile {
                candidates: args.candidates,
                ballots,
                k,
            })
        }
    };
    Ok(Outcome::ok(serde_json::to_string_pretty(&file).expect("json") + "\n"))
}
