use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use wtcalc::braids::{braid_longitudes, parse_braid, realize_tree};
use wtcalc::exactalg::{GroupStructure, HomReport};
use wtcalc::homs::{classify_with_limits, eta_onto_kernel, eta_sum, eta_target, framed_vs_twisted_with_limits, verify_levine_with_limits};
use wtcalc::milnor::{artin_rep, milnor_numbers, sato_levine, total_milnor, StringLinkData};
use wtcalc::towergroups::{tower_group_with_limits, FormalSum, TowerFlavor};
use wtcalc::trees::{parse_tree, ParsedTree};
use wtcalc::{Error, Limits};

#[derive(Parser, Debug)]
#[command(name = "wtcalc", version, about = "Tree groups, Lie algebra maps and Milnor invariants")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of relator rows in any presentation.
    #[arg(long, global = true)]
    limit_rows: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[arg(long)]
    order: usize,
    #[arg(long)]
    labels: u32,
}

#[derive(Args, Debug)]
struct LinkArgs {
    /// Pure braid word, e.g. "[A(1,3),A(2,3)]".
    #[arg(long, conflicts_with = "longitudes")]
    braid: Option<String>,
    /// Explicit longitudes separated by ';', e.g. "x2; x2^-1 x1 x2".
    #[arg(long)]
    longitudes: Option<String>,
    #[arg(long)]
    strands: u32,
    #[arg(long)]
    order: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure of a tree group.
    Groups {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value = "plain")]
        flavor: TowerFlavor,
    },
    /// The map η, on one element (--tree) or as a homomorphism onto the bracket kernel.
    Eta {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value = "twisted")]
        flavor: TowerFlavor,
        /// Tree or formal sum such as "<(1,2),3> - 2*tw((1,2))".
        #[arg(long)]
        tree: Option<String>,
    },
    /// Checks that η': T_n → D'_n is an isomorphism.
    VerifyLevine {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Compares framed and twisted tree groups at an even order.
    FramedVsTwisted {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// One row of the classification table.
    Classify {
        #[command(flatten)]
        g: GroupArgs,
    },
    /// Total Milnor invariant and Milnor numbers.
    Milnor {
        #[command(flatten)]
        link: LinkArgs,
        /// Longest Milnor index listed (default order + 2).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Sato-Levine invariant of odd order 2n-1.
    Sl {
        #[command(flatten)]
        link: LinkArgs,
    },
    /// Artin representation modulo F_{order+2}.
    Artin {
        #[command(flatten)]
        link: LinkArgs,
    },
    /// Realizes a distinct-label tree by a commutator pure braid.
    Realize {
        #[arg(long)]
        tree: String,
        /// Defaults to the largest label.
        #[arg(long)]
        strands: Option<u32>,
    },
}

struct Output {
    text: String,
    json: Value,
}

fn limits(cli: &Cli) -> Result<Limits, Error> {
    let mut l = match std::env::var("WTCALC_LIMIT_MB") {
        Ok(v) => {
            let mb = v
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::IndexOutOfRange(format!("WTCALC_LIMIT_MB must be a number, got {:?}", v)))?;
            Limits::from_megabytes(mb)
        }
        Err(_) => Limits::default(),
    };
    if let Some(r) = cli.limit_rows {
        l.max_relators = r;
    }
    Ok(l)
}

fn report_text(r: &HomReport) -> String {
    let show = |g: &Option<GroupStructure>| g.as_ref().map_or("n/a".to_string(), |g| g.to_string());
    format!(
        "well_defined: {}\nkernel: {}\ncokernel: {}\nimage: {}\nis_isomorphism: {}\n",
        r.well_defined,
        show(&r.kernel),
        show(&r.cokernel),
        show(&r.image),
        r.is_isomorphism
    )
}

fn link_data(a: &LinkArgs) -> Result<StringLinkData, Error> {
    match (&a.braid, &a.longitudes) {
        (Some(b), None) => Ok(braid_longitudes(&parse_braid(b, a.strands)?)),
        (None, Some(l)) => StringLinkData::parse_explicit(a.strands, l),
        _ => Err(Error::InvalidLongitudes("give exactly one of --braid and --longitudes".into())),
    }
}

fn index_key(idx: &[u32]) -> String {
    if idx.iter().all(|&i| i < 10) {
        idx.iter().map(|i| i.to_string()).collect()
    } else {
        idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let lim = limits(cli)?;
    match &cli.command {
        Command::Groups { g, flavor } => {
            let grp = tower_group_with_limits(g.order, g.labels, *flavor, &lim)?;
            let s = grp.structure();
            Ok(Output {
                text: format!("T_{}(m={}, {}) = {}\n", g.order, g.labels, flavor, s),
                json: serde_json::to_value(s).expect("serializable"),
            })
        }
        Command::Eta { g, flavor, tree } => match tree {
            Some(text) => {
                let sum: FormalSum = text.parse()?;
                let grp = tower_group_with_limits(g.order, g.labels, *flavor, &lim)?;
                grp.to_vector(&sum)?;
                let img = eta_sum(&sum, g.order, g.labels, eta_target(*flavor))?;
                Ok(Output {
                    text: format!("eta({}) = {}\n", sum, img),
                    json: json!({"order": g.order, "labels": g.labels, "flavor": flavor, "input": sum.to_string(), "eta": img.to_string()}),
                })
            }
            None => {
                let (r, _, _) = eta_onto_kernel(g.order, g.labels, *flavor, &lim)?;
                Ok(Output { text: report_text(&r), json: serde_json::to_value(&r).expect("serializable") })
            }
        },
        Command::VerifyLevine { g } => {
            let r = verify_levine_with_limits(g.order, g.labels, &lim)?;
            Ok(Output { text: report_text(&r), json: serde_json::to_value(&r).expect("serializable") })
        }
        Command::FramedVsTwisted { g } => {
            let r = framed_vs_twisted_with_limits(g.order, g.labels, &lim)?;
            let text = format!(
                "cok: {}\nker: {}\nexpected: {}\nmatch: {}\n",
                r.cok,
                r.ker.as_ref().map_or("n/a".to_string(), |k| k.to_string()),
                r.expected,
                r.matches
            );
            Ok(Output { text, json: serde_json::to_value(&r).expect("serializable") })
        }
        Command::Classify { g } => {
            let r = classify_with_limits(g.order, g.labels, &lim)?;
            let j = serde_json::to_value(&r).expect("serializable");
            let text = serde_json::to_string_pretty(&j).expect("serializable") + "\n";
            Ok(Output { text, json: j })
        }
        Command::Milnor { link, max_degree } => {
            let s = link_data(link)?;
            let rep = total_milnor(&s, link.order)?;
            let top = max_degree.unwrap_or(link.order + 2);
            let mut text = format!("mu_{} = {}\nin_kernel: {}\n", link.order, rep.invariant, rep.in_kernel);
            let mut mus = serde_json::Map::new();
            let mut numbers: Vec<(Vec<u32>, BigInt)> = milnor_numbers(&s, top).into_iter().collect();
            numbers.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.0.cmp(&b.0)));
            for (idx, v) in numbers {
                writeln!(text, "mu({}) = {}", index_key(&idx), v).expect("string write");
                let value = v.to_i64().map_or_else(|| json!(v.to_string()), |x| json!(x));
                mus.insert(index_key(&idx), value);
            }
            Ok(Output {
                text,
                json: json!({"order": link.order, "strands": s.strands, "total": rep.invariant.to_string(), "in_kernel": rep.in_kernel, "mu": mus}),
            })
        }
        Command::Sl { link } => {
            let s = link_data(link)?;
            let v = sato_levine(&s, link.order)?;
            Ok(Output {
                text: format!("SL_{} = {} (mod 2)\n", link.order, v),
                json: json!({"order": link.order, "sl": v.to_string()}),
            })
        }
        Command::Artin { link } => {
            let s = link_data(link)?;
            let a = artin_rep(&s, link.order)?;
            let mut text = format!("modulo F_{}\n", a.depth);
            for (i, w) in a.images.iter().enumerate() {
                writeln!(text, "x{} -> {}", i + 1, w).expect("string write");
            }
            let images: Vec<String> = a.images.iter().map(|w| w.to_string()).collect();
            Ok(Output { text, json: json!({"depth": a.depth, "images": images, "fixes_product": a.fixes_product()}) })
        }
        Command::Realize { tree, strands } => {
            let t = match parse_tree(tree)? {
                ParsedTree::Unrooted(t) => t,
                other => return Err(Error::Parse { pos: 0, msg: format!("expected an unrooted tree, got {}", other) }),
            };
            let m = strands.unwrap_or_else(|| t.labels().into_iter().max().unwrap_or(1));
            let r = realize_tree(&t, m)?;
            Ok(Output {
                text: format!("{}\nsign: {}\n", r.braid, r.sign),
                json: json!({"tree": t.to_string(), "strands": m, "braid": r.braid.to_string(), "length": r.braid.len(), "sign": r.sign}),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                print!("{}", e);
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", json!({"error": "usage", "message": first}));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(if e.is_resource_limit() { 2 } else { 1 })
        }
    }
}
