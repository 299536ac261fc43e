use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

use scattered::func::{
    classify_discontinuous, continuity_check, fn_embeds, image_profile, postcompose, verify_fn_witness,
    CodomainEmbedding, Continuity, FnEmbWitness, FnRep, FnVerdict, Trichotomy,
};
use scattered::graph::{ihom_decide, FiniteGraph};
use scattered::label::{gamma_label, label_leq, lambda_label, witness_from_labels, LabelMap};
use scattered::rank::{
    escalate, fn_rank, high_rank_witness, inclusion_witness, rank_delta2, separator, set_closure, SetRep,
};
use scattered::reduction::{
    build_regular_pe, graph_to_fn_eval, omega_squared_plus_one, recover_graph, reduce_on_space, reduction_check,
};
use scattered::space::{
    canonical_form, cb_derivative, cb_rank, classify_single_limit, space_embeds, truncate, verify_space_witness, Addr,
    Space, SpaceVerdict,
};
use scattered::text::{parse_fn, parse_set, parse_set_fn, parse_space};
use scattered::Error;

/// Decision procedures for scattered spaces and functions on them.
#[derive(Parser)]
#[command(name = "scattered", version)]
struct Cli {
    /// Truncation depth used by verification and sampling.
    #[arg(long, global = true, default_value_t = 6)]
    depth: u64,
    /// Emit JSON (the only output format).
    #[arg(long, global = true, default_value_t = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Space terms.
    #[command(subcommand)]
    Space(SpaceCmd),
    /// Finite graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Functions on space terms.
    #[command(subcommand)]
    Fn(FnCmd),
    /// Labels of functions on `lim(pt)` and locally constant functions.
    #[command(subcommand)]
    Label(LabelCmd),
    /// The reduction from graphs to functions.
    #[command(subcommand)]
    Red(RedCmd),
    /// Difference and separation ranks.
    #[command(subcommand)]
    Rank(RankCmd),
    /// Decide and verify the witness at every depth up to `--depth`.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Subcommand)]
enum SpaceCmd {
    Rank {
        term: String,
    },
    Derive {
        term: String,
        #[arg(short, default_value_t = 1)]
        k: u32,
    },
    Canon {
        term: String,
    },
    Embed {
        source: String,
        target: String,
    },
    Classify {
        term: String,
    },
    Truncate {
        term: String,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Injective homomorphism between two JSON graphs.
    Ihom { source: String, target: String },
}

#[derive(Subcommand)]
enum FnCmd {
    Eval {
        function: String,
        addr: String,
    },
    Cont {
        function: String,
    },
    Image {
        function: String,
    },
    Embed {
        source: String,
        target: String,
    },
    Classify {
        function: String,
    },
    /// Postcompose with `omega1-to-q`, `fin-to-omega1` or `nat-to-q`.
    Post {
        embedding: String,
        function: String,
    },
}

#[derive(Subcommand)]
enum LabelCmd {
    Gamma { function: String },
    Lambda { function: String },
    Leq(LeqArgs),
}

#[derive(Args)]
struct LeqArgs {
    source: String,
    target: String,
    /// Use the Lambda labels instead of the Gamma labels.
    #[arg(long)]
    lambda: bool,
}

#[derive(Subcommand)]
enum RedCmd {
    Eval {
        graph: String,
        addr: String,
    },
    Recover {
        graph: String,
        #[arg(long, default_value_t = 5)]
        support: u32,
        #[arg(long)]
        space: Option<String>,
    },
    BuildPe {
        term: String,
    },
    Reduce {
        graph: String,
        term: String,
    },
    Check {
        source: String,
        target: String,
        term: Option<String>,
    },
}

#[derive(Subcommand)]
enum RankCmd {
    Closure { set: String },
    Set { set: String },
    Sep { a: String, b: String },
    Fn { function: String },
    Witness { k: u32 },
    Escalate { function: String },
}

#[derive(Subcommand)]
enum VerifyCmd {
    Space { source: String, target: String },
    Fn { source: String, target: String },
}

type Out = Result<Json, Error>;

fn read_input(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse {
            line: 0,
            column: 0,
            message: format!("cannot read {path}: {e}"),
        }),
        None => Ok(arg.to_string()),
    }
}

fn space_arg(arg: &str) -> Result<Space, Error> {
    parse_space(&read_input(arg)?)
}

fn fn_arg(arg: &str) -> Result<FnRep, Error> {
    parse_fn(&read_input(arg)?)
}

fn graph_arg(arg: &str) -> Result<FiniteGraph, Error> {
    let src = read_input(arg)?;
    serde_json::from_str(&src).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

fn addr_arg(arg: &str) -> Result<Addr, Error> {
    arg.parse()
}

fn to_json<T: Serialize>(x: &T) -> Json {
    serde_json::to_value(x).expect("library types serialize")
}

/// Depths in `1..=d` at which `check` reports no failures, plus the first
/// failure list if any.
fn checked_depths(d: u64, check: impl Fn(u64) -> Vec<String>) -> (Vec<u64>, Vec<String>) {
    let mut ok = Vec::new();
    for k in 1..=d {
        let failures = check(k);
        if !failures.is_empty() {
            return (ok, failures);
        }
        ok.push(k);
    }
    (ok, Vec::new())
}

fn space_verdict_json(v: SpaceVerdict, s: &Space, t: &Space, d: u64) -> Json {
    match v {
        SpaceVerdict::Yes(w) => {
            let (depths, failures) = checked_depths(d, |k| verify_space_witness(&w, s, t, k).failures);
            json!({ "verdict": "yes", "witness": to_json(&w), "checkedDepths": depths, "failures": failures })
        }
        SpaceVerdict::No(o) => json!({ "verdict": "no", "obstruction": to_json(&o) }),
    }
}

fn fn_witness_json(w: &FnEmbWitness, f: &FnRep, g: &FnRep, d: u64) -> Json {
    let (depths, failures) = checked_depths(d, |k| verify_fn_witness(w, f, g, k).failures);
    json!({ "verdict": "yes", "witness": to_json(w), "checkedDepths": depths, "failures": failures })
}

fn fn_verdict_json(v: FnVerdict, f: &FnRep, g: &FnRep, d: u64) -> Json {
    match v {
        FnVerdict::Yes(w) => fn_witness_json(&w, f, g, d),
        FnVerdict::No(o) => json!({ "verdict": "no", "obstruction": to_json(&o) }),
    }
}

fn label_json(l: &LabelMap) -> Json {
    json!({ "label": to_json(l), "text": l.to_string() })
}

fn run_space(cmd: SpaceCmd, d: u64) -> Out {
    Ok(match cmd {
        SpaceCmd::Rank { term } => {
            let t = space_arg(&term)?;
            json!({ "term": t.to_string(), "rank": cb_rank(&t) })
        }
        SpaceCmd::Derive { term, k } => {
            let t = space_arg(&term)?;
            json!({ "term": t.to_string(), "k": k, "derivative": cb_derivative(&t, k).to_string() })
        }
        SpaceCmd::Canon { term } => {
            let t = space_arg(&term)?;
            let c = canonical_form(&t);
            json!({ "term": t.to_string(), "canonical": c.to_space().to_string(), "parts": to_json(&c) })
        }
        SpaceCmd::Embed { source, target } => {
            let (s, t) = (space_arg(&source)?, space_arg(&target)?);
            space_verdict_json(space_embeds(&s, &t), &s, &t, d)
        }
        SpaceCmd::Classify { term } => {
            let t = space_arg(&term)?;
            json!({ "term": t.to_string(), "type": to_json(&classify_single_limit(&t)?) })
        }
        SpaceCmd::Truncate { term } => {
            let t = space_arg(&term)?;
            let tr = truncate(&t, d);
            let limits: Vec<Json> = tr
                .limits
                .iter()
                .map(|(x, seq)| json!({ "point": x.to_string(), "sequence": seq.iter().map(Addr::to_string).collect::<Vec<_>>() }))
                .collect();
            json!({
                "term": t.to_string(),
                "depth": d,
                "points": tr.points.iter().map(Addr::to_string).collect::<Vec<_>>(),
                "limits": limits,
            })
        }
    })
}

fn run_graph(cmd: GraphCmd) -> Out {
    let GraphCmd::Ihom { source, target } = cmd;
    let (g, h) = (graph_arg(&source)?, graph_arg(&target)?);
    Ok(match ihom_decide(&g, &h) {
        Some(m) => json!({ "verdict": "yes", "map": to_json(&m) }),
        None => json!({ "verdict": "no" }),
    })
}

fn run_fn(cmd: FnCmd, d: u64) -> Out {
    Ok(match cmd {
        FnCmd::Eval { function, addr } => {
            let f = fn_arg(&function)?;
            let a = addr_arg(&addr)?;
            json!({ "at": a.to_string(), "value": f.eval(&a)?.to_string() })
        }
        FnCmd::Cont { function } => match continuity_check(&fn_arg(&function)?) {
            Continuity::Continuous => json!({ "continuous": true }),
            Continuity::Discontinuous(x) => json!({
                "continuous": false,
                "at": x.at.to_string(),
                "value": x.value.to_string(),
                "tail": x.tail,
            }),
        },
        FnCmd::Image { function } => to_json(&image_profile(&fn_arg(&function)?)?),
        FnCmd::Embed { source, target } => {
            let (f, g) = (fn_arg(&source)?, fn_arg(&target)?);
            fn_verdict_json(fn_embeds(&f, &g)?, &f, &g, d)
        }
        FnCmd::Classify { function } => {
            let f = fn_arg(&function)?;
            let (class, pattern, w) = match classify_discontinuous(&f)? {
                Trichotomy::Continuous => return Ok(json!({ "class": "continuous" })),
                Trichotomy::D0(w) => ("d0", scattered::func::d0(), w),
                Trichotomy::D1(w) => ("d1", scattered::func::d1(), w),
            };
            let mut out = fn_witness_json(&w, &pattern, &f, d);
            out["class"] = json!(class);
            out
        }
        FnCmd::Post { embedding, function } => {
            let j: CodomainEmbedding = embedding.parse()?;
            let g = postcompose(j, &fn_arg(&function)?)?;
            json!({ "function": g.to_string() })
        }
    })
}

fn run_label(cmd: LabelCmd, d: u64) -> Out {
    Ok(match cmd {
        LabelCmd::Gamma { function } => label_json(&gamma_label(&fn_arg(&function)?)?),
        LabelCmd::Lambda { function } => label_json(&lambda_label(&fn_arg(&function)?)?),
        LabelCmd::Leq(a) => {
            let (f, g) = (fn_arg(&a.source)?, fn_arg(&a.target)?);
            let label = if a.lambda { lambda_label } else { gamma_label };
            let (lf, lg) = (label(&f)?, label(&g)?);
            match label_leq(&lf, &lg) {
                None => json!({ "verdict": "no" }),
                Some(tau) => {
                    let w = witness_from_labels(&f, &g, &tau)?;
                    let mut out = fn_witness_json(&w, &f, &g, d);
                    out["tau"] = to_json(&tau);
                    out
                }
            }
        }
    })
}

fn run_red(cmd: RedCmd, d: u64) -> Out {
    Ok(match cmd {
        RedCmd::Eval { graph, addr } => {
            let g = graph_arg(&graph)?;
            let a = addr_arg(&addr)?;
            json!({ "at": a.to_string(), "value": graph_to_fn_eval(&g, &a)?.to_string() })
        }
        RedCmd::Recover { graph, support, space } => {
            let g = graph_arg(&graph)?;
            let t = match space {
                Some(s) => space_arg(&s)?,
                None => omega_squared_plus_one(),
            };
            let r = recover_graph(&reduce_on_space(&g, &t)?, support)?;
            json!({ "graph": to_json(&r), "matches": r == g.restrict(support) })
        }
        RedCmd::BuildPe { term } => {
            let t = space_arg(&term)?;
            let pe = build_regular_pe(&t)?;
            json!({ "pe": to_json(&pe), "depth": d, "failures": pe.failures(d) })
        }
        RedCmd::Reduce { graph, term } => {
            let g = graph_arg(&graph)?;
            let t = space_arg(&term)?;
            let f = reduce_on_space(&g, &t)?;
            let mut values = serde_json::Map::new();
            for p in truncate(&t, d).points {
                values.insert(p.to_string(), json!(scattered::func::Evaluate::eval(&f, &p)?.to_string()));
            }
            json!({ "term": t.to_string(), "depth": d, "values": values })
        }
        RedCmd::Check { source, target, term } => {
            let (g, h) = (graph_arg(&source)?, graph_arg(&target)?);
            let t = match term {
                Some(s) => space_arg(&s)?,
                None => omega_squared_plus_one(),
            };
            to_json(&reduction_check(&g, &h, &t, d)?)
        }
    })
}

fn set_arg(arg: &str) -> Result<SetRep, Error> {
    parse_set(&read_input(arg)?)
}

fn run_rank(cmd: RankCmd, d: u64) -> Out {
    Ok(match cmd {
        RankCmd::Closure { set } => json!({ "closure": set_closure(&set_arg(&set)?).to_string() }),
        RankCmd::Set { set } => json!({ "rank": rank_delta2(&set_arg(&set)?) }),
        RankCmd::Sep { a, b } => {
            let (s, r) = separator(&set_arg(&a)?, &set_arg(&b)?)?;
            json!({ "rank": r, "separator": s.to_string() })
        }
        RankCmd::Fn { function } => json!({ "rank": fn_rank(&parse_set_fn(&read_input(&function)?)?)? }),
        RankCmd::Witness { k } => {
            let s = high_rank_witness(k)?;
            json!({ "set": s.to_string(), "rank": rank_delta2(&s) })
        }
        RankCmd::Escalate { function } => {
            let f = parse_set_fn(&read_input(&function)?)?;
            let g = escalate(&f)?;
            let w = inclusion_witness(&f);
            let (depths, failures) = checked_depths(d, |k| verify_fn_witness(&w, &f, &g, k).failures);
            json!({
                "function": g.to_string(),
                "sourceRank": fn_rank(&f)?,
                "rank": fn_rank(&g)?,
                "checkedDepths": depths,
                "failures": failures,
            })
        }
    })
}

fn run_verify(cmd: VerifyCmd, d: u64) -> Out {
    match cmd {
        VerifyCmd::Space { source, target } => run_space(SpaceCmd::Embed { source, target }, d),
        VerifyCmd::Fn { source, target } => run_fn(FnCmd::Embed { source, target }, d),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedDomain(_)
        | Error::UnsupportedFn(_)
        | Error::NotContinuous(_)
        | Error::NotLocallyConstant
        | Error::NotSingleLimit
        | Error::TooFewLimitPoints
        | Error::BoundExceeded(..)
        | Error::SearchBudget(_) => 3,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(['(', ' ', '{']).next().unwrap_or_default().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let d = cli.depth;
    let out = match cli.cmd {
        Cmd::Space(c) => run_space(c, d),
        Cmd::Graph(c) => run_graph(c),
        Cmd::Fn(c) => run_fn(c, d),
        Cmd::Label(c) => run_label(c, d),
        Cmd::Red(c) => run_red(c, d),
        Cmd::Rank(c) => run_rank(c, d),
        Cmd::Verify(c) => run_verify(c, d),
    };
    match out {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut v = json!({ "error": error_kind(&e), "message": e.to_string() });
            if let Error::Parse { line, column, .. } = &e {
                v["line"] = json!(line);
                v["column"] = json!(column);
            }
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::from(exit_code(&e))
        }
    }
}
