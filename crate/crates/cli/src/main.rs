use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use prodint_core::algebra::{
    power, power_oracle, HReport, DEFAULT_TABLE_BUDGET, DEFAULT_TUPLE_BUDGET,
};
use prodint_core::gen::DEFAULT_SEED;
use prodint_core::natset::NatSet;
use prodint_core::realizer::{realize_hnstar, realize_hq, ExplicitBudget, Realization, TargetSpec};
use prodint_core::selftest::{self, Level};
use prodint_core::truncadd::TruncAdd;
use prodint_core::wordcap::{finite_instantiation, WordCap, WordCapParams, DEFAULT_ALPHABET};
use prodint_core::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_BUDGET: u8 = 5;

/// Product intersection sets of semigroup families.
#[derive(Debug, Parser)]
#[command(name = "prodint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Largest number of tuples a brute-force power may enumerate.
    #[arg(long, global = true, env = "PRODINT_BUDGET", default_value_t = DEFAULT_TUPLE_BUDGET,
          value_parser = parse_positive::<u128>)]
    tuple_budget: u128,

    /// Largest carrier for tabulated semigroups and explicit products.
    #[arg(long, global = true, default_value_t = DEFAULT_TABLE_BUDGET,
          value_parser = parse_positive::<usize>)]
    table_budget: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a block excludes exactly one exponent n.
    SingleExclusion {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=65536))]
        n: u64,
        /// Last exponent checked; defaults to n + 3.
        #[arg(long)]
        hmax: Option<usize>,
    },
    /// Build a semigroup and family realizing a target set.
    Realize {
        #[arg(long, value_enum)]
        setting: Setting,
        /// Target in set notation: "all", "none", "1,3", "all-except:2,4".
        #[arg(long)]
        target: NatSet,
        /// Size of the index set (hq only).
        #[arg(long, default_value_t = 2)]
        q_count: usize,
        #[arg(long)]
        hmax: Option<usize>,
        /// Also build the direct product when it is small.
        #[arg(long)]
        explicit: bool,
    },
    /// Run the property scoreboard.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Wordcap,
    Truncadd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Setting {
    Hnstar,
    Hq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn parse_positive<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr + Default + PartialEq,
    T::Err: std::fmt::Display,
{
    match s.parse::<T>() {
        Ok(v) if v == T::default() => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        _ if e.is_budget() => EXIT_BUDGET,
        Error::InvalidParameter(_) | Error::InvalidElement(_) | Error::NatSet(_) => EXIT_USAGE,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Verification(_) | Error::Algebra(_) => EXIT_MISMATCH,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::SingleExclusion { family, n, hmax } => {
            single_exclusion(&cli, family, n as usize, hmax.unwrap_or(n as usize + 3))
        }
        Command::Realize { setting, ref target, q_count, hmax, explicit } => {
            realize(&cli, setting, target, q_count, hmax, explicit)
        }
        Command::Selftest { level } => Ok(run_selftest(&cli, level)),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn describe(report: &HReport) -> String {
    let mut out = format!("  {}\n", report.render_marks());
    match report.tail() {
        Some(t) => out += &format!("  tail: {} from h = {}\n", if t.verdict { "in" } else { "out" }, t.from),
        None => out += "  tail: none (window only)\n",
    }
    match report.resolved() {
        Some(set) => out += &format!("  H = {set}"),
        None => out += &format!("  H ∩ [1, {}] = {}", report.hmax(), report.window_set()),
    }
    out
}

#[derive(Serialize)]
struct ExclusionRecord {
    family: &'static str,
    n: usize,
    report: HReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_alphabet: Option<u64>,
}

fn single_exclusion(cli: &Cli, family: Family, n: usize, hmax: usize) -> Result<u8, Error> {
    let (report, witness, model_alphabet) = match family {
        Family::Truncadd => {
            let block = TruncAdd::new(n)?;
            let pair = block.verify_pair_single_exclusion(hmax)?;
            // brute-force the powers as a cross-check
            let (b, c) = block.bc_sets();
            let meet = b.intersection(&c)?;
            for h in 1..=hmax {
                for set in [&b, &c, &meet] {
                    let brute = power_oracle(&block, set, h, cli.tuple_budget)?;
                    if brute != power(&block, set, h)? {
                        return Err(Error::Verification(format!("oracle disagrees at h = {h}")));
                    }
                }
            }
            (pair.report, Some(pair.witness), None)
        }
        Family::Wordcap => {
            let block = WordCap::new(n)?;
            let report = block.verify_single_exclusion(hmax)?;
            // largest alphabet whose bounded model fits the table budget
            let alphabet = (1..=DEFAULT_ALPHABET)
                .rev()
                .find(|&l| {
                    WordCapParams { n, alphabet: l }.carrier_size().is_some_and(|s| s <= cli.table_budget)
                })
                .unwrap_or(1);
            let model = finite_instantiation(WordCapParams { n, alphabet }, cli.table_budget)?;
            for q in 1..=alphabet {
                for h in 1..=hmax {
                    let expected = model.restrict(&block.closed_form_power(q, h)?);
                    if power(model.semigroup(), &model.family_member(q), h)? != expected {
                        return Err(Error::Verification(format!("model disagrees at q = {q}, h = {h}")));
                    }
                }
            }
            (report, None, Some(alphabet))
        }
    };
    let name = match family {
        Family::Wordcap => "wordcap",
        Family::Truncadd => "truncadd",
    };
    match cli.format {
        Format::Json => {
            let record = ExclusionRecord { family: name, n, report, witness, model_alphabet };
            println!("{}", serde_json::to_string(&record).expect("report serializes"));
        }
        Format::Text => {
            println!("{name} n = {n}");
            println!("{}", describe(&report));
            if let Some(w) = witness {
                println!("  witness {w} lies in Bⁿ ∩ Cⁿ but not in (B ∩ C)ⁿ");
            }
        }
    }
    Ok(0)
}

fn realize(
    cli: &Cli,
    setting: Setting,
    target: &NatSet,
    q_count: usize,
    hmax: Option<usize>,
    explicit: bool,
) -> Result<u8, Error> {
    let spec = TargetSpec::new(target.clone())?;
    let budget = explicit.then_some(ExplicitBudget { max_size: cli.table_budget, ..Default::default() });
    let r = match setting {
        Setting::Hnstar => realize_hnstar(&spec, hmax, budget)?,
        Setting::Hq => realize_hq(&spec, q_count, hmax, budget)?,
    };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string(&r).expect("realization serializes")),
        Format::Text => print_realization(&r),
    }
    Ok(if r.matches_target() { 0 } else { EXIT_MISMATCH })
}

fn print_realization(r: &Realization) {
    println!("target {}  mode {:?}  window [1, {}]", r.target, r.mode, r.window);
    if !r.components.is_empty() {
        let list: Vec<String> = r.components.iter().map(u64::to_string).collect();
        println!("  blocks excluding {}", list.join(", "));
    }
    if let Some(q) = r.q_count {
        println!("  index set of size {q}");
    }
    println!("{}", describe(&r.certificate));
    if let Some(e) = &r.explicit {
        println!("  explicit product of {} elements: {}", e.size, e.report.render_marks());
    }
}

fn run_selftest(cli: &Cli, level: LevelArg) -> u8 {
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let board = selftest::run(level, cli.seed);
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string(&board).expect("scoreboard serializes")),
        Format::Text => println!("{board}"),
    }
    match board.first_failure() {
        None => 0,
        Some(line) => {
            eprintln!("error: {} failed: {}", line.name, line.detail);
            if line.budget_exceeded { EXIT_BUDGET } else { EXIT_MISMATCH }
        }
    }
}
