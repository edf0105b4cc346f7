mod args;
mod render;

use anyhow::{anyhow, bail, Result};
use args::{
    parse_integer, parse_point, parse_schedule, Config, EquationArgs, Format, LimitArgs,
    OutputArgs, WordArgs,
};
use clap::{Parser, Subcommand};
use mh_core::*;
use render::{comparison_fracs, euclid_fracs, frac, point_json, print_csv, print_table, sig};

#[derive(Parser, Debug)]
#[command(
    name = "mh",
    version,
    about = "Generalized Markov-Hurwitz equations: mutation trees, Euclid dynamics, and logarithmic asymptotics",
    after_help = "All numeric inputs accept decimal strings of unbounded size.\n\
                  A key=value config file (--config) supplies defaults; flags win."
)]
struct Cli {
    /// Config file with key=value lines
    #[arg(long, global = true)]
    config: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply one Vieta mutation to a solution
    Mutate(MutateCmd),
    /// Apply a word of mutations and print the chain
    Apply(ApplyCmd),
    /// Descend a solution to the fundamental solution
    Descend(DescendCmd),
    /// Expand the mutation tree breadth-first under a bound
    Tree(TreeCmd),
    /// Enumerate all solutions with maximal coordinate <= bound
    Enumerate(EnumerateCmd),
    /// Run a classical or k-deformed Euclid chain
    Euclid(EuclidCmd),
    /// Trace a comparison chain between deformed and classical chains
    Compare(CompareCmd),
    /// Ratio numbers k_t along a word from the root
    Ratio(RatioCmd),
    /// Estimate the asymptotic scalar q at a depth
    Qestimate(QestimateCmd),
    /// Step-by-step convergence diagnostics
    Report(ReportCmd),
    /// Check the uniqueness conjecture up to a bound
    Conjecture(ConjectureCmd),
    /// Find fundamental solutions within a coordinate box
    Fundamentals(FundamentalsCmd),
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            if let Some(core) = err.downcast_ref::<Error>() {
                eprintln!("error[{}]: {err:#}", core.code());
                std::process::exit(1);
            }
            if err.downcast_ref::<std::io::Error>().is_some() {
                eprintln!("error[Io]: {err:#}");
                std::process::exit(1);
            }
            eprintln!("error[Usage]: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Mutate(cmd) => cmd.run(&config),
        Command::Apply(cmd) => cmd.run(&config),
        Command::Descend(cmd) => cmd.run(&config),
        Command::Tree(cmd) => cmd.run(&config),
        Command::Enumerate(cmd) => cmd.run(&config),
        Command::Euclid(cmd) => cmd.run(&config),
        Command::Compare(cmd) => cmd.run(&config),
        Command::Ratio(cmd) => cmd.run(&config),
        Command::Qestimate(cmd) => cmd.run(&config),
        Command::Report(cmd) => cmd.run(&config),
        Command::Conjecture(cmd) => cmd.run(&config),
        Command::Fundamentals(cmd) => cmd.run(&config),
    }
}

fn init_threads(threads: usize) -> Result<()> {
    if threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    Ok(())
}

fn get_point(flag: &Option<String>, config: &Config, key: &str) -> Result<Option<SolutionTuple>> {
    match flag.clone().or_else(|| config.get(key).map(str::to_string)) {
        Some(text) => Ok(Some(parse_point(&text)?)),
        None => Ok(None),
    }
}

#[derive(clap::Args, Debug)]
struct MutateCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// The solution to mutate, comma-separated
    #[arg(long)]
    point: Option<String>,
    /// Mutation direction (1-based)
    #[arg(long)]
    direction: usize,
    /// Skip the solution precondition (division exactness is still checked)
    #[arg(long)]
    unchecked: bool,
    #[command(flatten)]
    output: OutputArgs,
}

impl MutateCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let point = get_point(&self.point, config, "point")?
            .ok_or_else(|| anyhow!("--point is required"))?;
        let mutated = if self.unchecked {
            eq.mutate_unchecked(&point, self.direction)?
        } else {
            eq.mutate(&point, self.direction)?
        };
        match self.output.format(config, Format::Table)? {
            Format::Json => println!("{}", point_json(&mutated)),
            _ => println!("{mutated}"),
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct ApplyCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Start point (default: the all-ones root)
    #[arg(long)]
    point: Option<String>,
    #[command(flatten)]
    word: WordArgs,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl ApplyCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let start =
            get_point(&self.point, config, "point")?.unwrap_or_else(|| SolutionTuple::ones(eq.n()));
        let word = self.word.build(config, eq.n(), None)?;
        let limits = self.limits.build(config);
        let chain = eq.apply_word(&start, &word, &limits)?;
        let labels = word.labels();
        match self.output.format(config, Format::Table)? {
            Format::Json => {
                for point in &chain {
                    println!("{}", point_json(point));
                }
            }
            Format::Csv => {
                let rows: Vec<Vec<String>> = chain
                    .iter()
                    .enumerate()
                    .map(|(t, p)| {
                        let mut row = vec![
                            t.to_string(),
                            if t == 0 {
                                String::new()
                            } else {
                                labels[t - 1].to_string()
                            },
                        ];
                        row.extend(p.decimal_strings());
                        row
                    })
                    .collect();
                let mut header = vec!["step".to_string(), "direction".to_string()];
                header.extend((1..=eq.n()).map(|j| format!("x{j}")));
                let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
                print_csv(&header_refs, &rows);
            }
            _ => {
                let rows: Vec<Vec<String>> = chain
                    .iter()
                    .enumerate()
                    .map(|(t, p)| {
                        vec![
                            t.to_string(),
                            if t == 0 {
                                "-".to_string()
                            } else {
                                labels[t - 1].to_string()
                            },
                            p.to_string(),
                        ]
                    })
                    .collect();
                print_table(&["step", "direction", "point"], &rows);
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct DescendCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// The solution to descend from
    #[arg(long)]
    point: Option<String>,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl DescendCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let point = get_point(&self.point, config, "point")?
            .ok_or_else(|| anyhow!("--point is required"))?;
        let limits = self.limits.build(config);
        let descent = eq.descend(&point, &limits)?;
        match self.output.format(config, Format::Table)? {
            Format::Json => {
                let value = serde_json::json!({
                    "word": descent.word.labels(),
                    "terminal": descent.terminal(),
                    "chain": descent.chain,
                    "argmax_ties": descent.tie_count,
                });
                println!("{value}");
            }
            _ => {
                println!("word: {}", descent.word);
                println!("terminal: {}", descent.terminal());
                let rows: Vec<Vec<String>> = descent
                    .chain
                    .iter()
                    .enumerate()
                    .map(|(t, p)| vec![t.to_string(), p.to_string()])
                    .collect();
                print_table(&["step", "point"], &rows);
                if descent.tie_count > 0 {
                    eprintln!("warning: {} argmax tie(s) away from the root", descent.tie_count);
                }
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct TreeCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Root point (default: the all-ones root)
    #[arg(long)]
    root: Option<String>,
    /// Expand to this depth
    #[arg(long)]
    depth: Option<usize>,
    /// Prune children whose maximal coordinate exceeds this bound
    #[arg(long, name = "max-coordinate")]
    max_coordinate: Option<String>,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl TreeCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let root =
            get_point(&self.root, config, "point")?.unwrap_or_else(|| SolutionTuple::ones(eq.n()));
        let threads = self.output.threads(config);
        init_threads(threads)?;
        let depth = self.depth.or_else(|| config.get_parsed("depth"));
        let max_coordinate = match self
            .max_coordinate
            .clone()
            .or_else(|| config.get("bound").map(str::to_string))
        {
            Some(text) => Some(parse_integer(&text)?),
            None => None,
        };
        let bound = EnumerationBound {
            max_depth: depth,
            max_coordinate,
            max_bitlen: self.limits.build(config).max_coord_bits,
        };
        let nodes = expand_tree_with(&eq, &root, bound, threads > 1)?.collect_nodes()?;
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        match self.output.format(config, Format::Table)? {
            Format::Json => write_jsonl(&mut out, &nodes)?,
            Format::Csv => write_csv(&mut out, eq.n(), &nodes)?,
            Format::Dot => write_dot(&mut out, &nodes)?,
            Format::Table => {
                let rows: Vec<Vec<String>> = nodes
                    .iter()
                    .map(|node| {
                        vec![
                            node.depth.to_string(),
                            node.word.to_string(),
                            node.point.to_string(),
                        ]
                    })
                    .collect();
                print_table(&["depth", "word", "point"], &rows);
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct EnumerateCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Maximal-coordinate bound
    #[arg(long)]
    bound: Option<String>,
    /// Also run the exhaustive brute-force path and diff the results
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl EnumerateCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let bound_text = self
            .bound
            .clone()
            .or_else(|| config.get("bound").map(str::to_string))
            .ok_or_else(|| anyhow!("--bound is required"))?;
        let bound = parse_integer(&bound_text)?;
        let limits = self.limits.build(config);
        let solutions = solutions_upto(&eq, &bound, limits.max_coord_bits)?;
        if self.oracle {
            let small = bound
                .to_u64()
                .ok_or_else(|| anyhow!("--oracle needs a bound that fits in 64 bits"))?;
            let reference = brute_force_solutions(&eq, small)?;
            if reference != solutions {
                bail!(Error::ConsistencyCheck {
                    what: "enumeration vs brute force",
                    deviation: (solutions.len() as f64) - (reference.len() as f64),
                });
            }
            eprintln!("oracle: enumeration matches brute force ({} solutions)", solutions.len());
        }
        match self.output.format(config, Format::Table)? {
            Format::Json => {
                for point in &solutions {
                    println!("{}", point_json(point));
                }
            }
            _ => {
                for point in &solutions {
                    println!("{point}");
                }
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct EuclidCmd {
    /// Number of branches
    #[arg(long)]
    n: Option<usize>,
    /// Start point (default: all ones)
    #[arg(long)]
    start: Option<String>,
    /// Deformation: a rational `k`, or a comma-separated per-step schedule
    #[arg(long, default_value = "0")]
    k: String,
    #[command(flatten)]
    word: WordArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl EuclidCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let n = self
            .n
            .or_else(|| config.get_parsed("n"))
            .ok_or_else(|| anyhow!("--n is required"))?;
        let start = match self
            .start
            .clone()
            .or_else(|| config.get("start").map(str::to_string))
        {
            Some(text) => EuclidPoint::from_integers(&args::parse_integer_list(&text)?)?,
            None => EuclidPoint::ones(n),
        };
        let word = self.word.build(config, n, None)?;
        let schedule = parse_schedule(config.get("k").unwrap_or(&self.k))?;
        let chain = euclid_chain(&start, &word, &schedule)?;
        let labels = word.labels();
        match self.output.format(config, Format::Table)? {
            Format::Json => {
                for (t, point) in chain.points.iter().enumerate() {
                    let value = serde_json::json!({
                        "step": t,
                        "direction": if t == 0 { None } else { Some(labels[t - 1]) },
                        "point": euclid_fracs(point),
                    });
                    println!("{value}");
                }
            }
            Format::Csv => {
                let mut header = vec!["step".to_string(), "direction".to_string()];
                header.extend((1..=n).map(|j| format!("e{j}")));
                let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
                let rows: Vec<Vec<String>> = chain
                    .points
                    .iter()
                    .enumerate()
                    .map(|(t, p)| {
                        let mut row = vec![
                            t.to_string(),
                            if t == 0 {
                                String::new()
                            } else {
                                labels[t - 1].to_string()
                            },
                        ];
                        row.extend(euclid_fracs(p));
                        row
                    })
                    .collect();
                print_csv(&header_refs, &rows);
            }
            _ => {
                let rows: Vec<Vec<String>> = chain
                    .points
                    .iter()
                    .enumerate()
                    .map(|(t, p)| {
                        vec![
                            t.to_string(),
                            if t == 0 {
                                "-".to_string()
                            } else {
                                labels[t - 1].to_string()
                            },
                            p.to_string(),
                        ]
                    })
                    .collect();
                print_table(&["step", "direction", "point"], &rows);
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct CompareCmd {
    /// Number of branches
    #[arg(long)]
    n: Option<usize>,
    /// Classical-chain start (default: all ones)
    #[arg(long)]
    x0: Option<String>,
    /// Deformed-chain start
    #[arg(long)]
    y0: String,
    /// Deformation: a rational `k`, or a comma-separated per-step schedule
    #[arg(long, default_value = "0")]
    k: String,
    #[command(flatten)]
    word: WordArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl CompareCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let n = self
            .n
            .or_else(|| config.get_parsed("n"))
            .ok_or_else(|| anyhow!("--n is required"))?;
        let x0 = match &self.x0 {
            Some(text) => EuclidPoint::from_integers(&args::parse_integer_list(text)?)?,
            None => EuclidPoint::ones(n),
        };
        let y0 = EuclidPoint::from_integers(&args::parse_integer_list(&self.y0)?)?;
        let word = self.word.build(config, n, None)?;
        let schedule = parse_schedule(config.get("k").unwrap_or(&self.k))?;
        let digits = self.output.digits(config);

        let xs = euclid_chain(&x0, &word, &DeformationSchedule::classical())?;
        let mut l = comparison_tuple(&y0, &x0)?;
        let mut rows: Vec<Vec<String>> = Vec::with_capacity(word.len() + 1);
        let mut push_row = |t: usize, dir: Option<usize>, k: Option<&Rational>, l: &ComparisonTuple| {
            let interval = total_interval(l).length();
            let mut row = vec![
                t.to_string(),
                dir.map(|d| d.to_string()).unwrap_or_default(),
                k.map(frac).unwrap_or_default(),
            ];
            row.extend(comparison_fracs(l));
            row.push(frac(&interval));
            row.push(sig(interval.to_f64(), digits));
            rows.push(row);
        };
        push_row(0, None, None, &l);
        for (t, &dir) in word.labels().iter().enumerate() {
            let k_t = schedule.value_at(t)?;
            l = comparison_mutate(&l, &xs.points[t], dir, &k_t)?;
            push_row(t + 1, Some(dir), Some(&k_t), &l);
        }

        let mut header = vec!["step".to_string(), "direction".to_string(), "k".to_string()];
        header.extend((1..=n).map(|j| format!("l{j}")));
        header.push("interval".to_string());
        header.push("interval_decimal".to_string());
        let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
        match self.output.format(config, Format::Csv)? {
            Format::Json => {
                for row in &rows {
                    let value = serde_json::json!({
                        "step": row[0].parse::<usize>().unwrap(),
                        "direction": row[1],
                        "k": row[2],
                        "l": &row[3..3 + n],
                        "interval": row[3 + n],
                        "interval_decimal": row[4 + n],
                    });
                    println!("{value}");
                }
            }
            Format::Table => print_table(&header_refs, &rows),
            _ => print_csv(&header_refs, &rows),
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct RatioCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Number of steps (default: word length)
    #[arg(long)]
    depth: Option<usize>,
    #[command(flatten)]
    word: WordArgs,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl RatioCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let depth = self.depth.or_else(|| config.get_parsed("depth"));
        let word = self.word.build(config, eq.n(), depth)?;
        let depth = depth.unwrap_or(word.len());
        if depth > word.len() {
            bail!("--depth {depth} exceeds word length {}", word.len());
        }
        let limits = self.limits.build(config);
        let digits = self.output.digits(config);
        let seq = ratio_sequence(&eq, &word.prefix(depth), &limits)?;
        let k_lambda = Rational::from(seq.k_lambda.clone());
        let labels = word.labels();
        match self.output.format(config, Format::Table)? {
            Format::Json => {
                for (t, k) in seq.values.iter().enumerate() {
                    let gap = Rational::from(&k_lambda - k);
                    let value = serde_json::json!({
                        "step": t + 1,
                        "direction": labels[t],
                        "k": frac(k),
                        "k_decimal": k.to_f64(),
                        "gap": frac(&gap),
                        "gap_decimal": gap.to_f64(),
                    });
                    println!("{value}");
                }
            }
            format => {
                let rows: Vec<Vec<String>> = seq
                    .values
                    .iter()
                    .enumerate()
                    .map(|(t, k)| {
                        let gap = Rational::from(&k_lambda - k);
                        vec![
                            (t + 1).to_string(),
                            labels[t].to_string(),
                            frac(k),
                            sig(k.to_f64(), digits),
                            sig(gap.to_f64(), digits),
                        ]
                    })
                    .collect();
                let header = ["step", "direction", "k", "k_decimal", "gap_decimal"];
                if format == Format::Csv {
                    print_csv(&header, &rows);
                } else {
                    println!("k_lambda: {}", seq.k_lambda);
                    print_table(&header, &rows);
                }
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct QestimateCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Depth at which to take the quotient (default: word length)
    #[arg(long)]
    depth: Option<usize>,
    #[command(flatten)]
    word: WordArgs,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl QestimateCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let depth = self.depth.or_else(|| config.get_parsed("depth"));
        let word = self.word.build(config, eq.n(), depth)?;
        let depth = depth.unwrap_or(word.len());
        let limits = self.limits.build(config);
        let digits = self.output.digits(config);
        let estimate = q_estimate(&eq, &word, depth, &limits)?;
        if !estimate.generic_prefix {
            eprintln!("warning: word prefix is not generic (windowed test failed)");
        }
        match self.output.format(config, Format::Table)? {
            Format::Json => {
                let value = serde_json::json!({
                    "depth": estimate.depth,
                    "per_coordinate": estimate.per_coordinate,
                    "spread": estimate.spread,
                    "q_mid": estimate.q_mid,
                    "generic_prefix": estimate.generic_prefix,
                });
                println!("{value}");
            }
            _ => {
                let quotients: Vec<String> = estimate
                    .per_coordinate
                    .iter()
                    .map(|q| sig(*q, digits))
                    .collect();
                println!("depth: {}", estimate.depth);
                println!("quotients: ({})", quotients.join(","));
                println!("spread: {}", sig(estimate.spread, digits));
                println!("q_mid: {}", sig(estimate.q_mid, digits));
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct ReportCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Number of steps to report (default: word length)
    #[arg(long)]
    depth: Option<usize>,
    #[command(flatten)]
    word: WordArgs,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl ReportCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let depth = self.depth.or_else(|| config.get_parsed("depth"));
        let word = self.word.build(config, eq.n(), depth)?;
        let depth = depth.unwrap_or(word.len());
        let limits = self.limits.build(config);
        let digits = self.output.digits(config);
        let report = convergence_report(&eq, &word, depth, &limits)?;
        let header = [
            "step",
            "direction",
            "k",
            "gap",
            "interval_excl",
            "quotient_spread",
        ];
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|row| {
                vec![
                    row.step.to_string(),
                    row.direction.to_string(),
                    sig(row.ratio.to_f64(), digits),
                    sig(row.gap.to_f64(), digits),
                    sig(row.interval_excl, digits),
                    sig(row.quotient_spread, digits),
                ]
            })
            .collect();
        match self.output.format(config, Format::Table)? {
            Format::Json => {
                for row in &report.rows {
                    let value = serde_json::json!({
                        "step": row.step,
                        "direction": row.direction,
                        "k": frac(&row.ratio),
                        "gap": frac(&row.gap),
                        "interval_excl": row.interval_excl,
                        "quotient_spread": row.quotient_spread,
                    });
                    println!("{value}");
                }
            }
            Format::Csv => print_csv(&header, &rows),
            _ => {
                println!("k_lambda: {}", report.k_lambda);
                print_table(&header, &rows);
            }
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct ConjectureCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Maximal-coordinate bound for the sweep
    #[arg(long)]
    bound: Option<String>,
    /// Position of the fixed (maximal) component
    #[arg(long, name = "fixed-position", default_value_t = 1)]
    fixed_position: usize,
    /// Diff the enumeration against the brute-force path first
    #[arg(long)]
    oracle: bool,
    /// Include real elapsed time (off by default for reproducible output)
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl ConjectureCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let bound_text = self
            .bound
            .clone()
            .or_else(|| config.get("bound").map(str::to_string))
            .ok_or_else(|| anyhow!("--bound is required"))?;
        let bound = parse_integer(&bound_text)?;
        let limits = self.limits.build(config);
        if self.oracle {
            let small = bound
                .to_u64()
                .ok_or_else(|| anyhow!("--oracle needs a bound that fits in 64 bits"))?;
            let reference = brute_force_solutions(&eq, small)?;
            let fast = solutions_upto(&eq, &bound, limits.max_coord_bits)?;
            if reference != fast {
                bail!(Error::ConsistencyCheck {
                    what: "enumeration vs brute force",
                    deviation: (fast.len() as f64) - (reference.len() as f64),
                });
            }
            eprintln!("oracle: enumeration matches brute force ({} solutions)", fast.len());
        }
        let mut report = positional_uniqueness(&eq, &bound, self.fixed_position, &limits)?;
        if !self.timing {
            report.elapsed = std::time::Duration::ZERO;
        }
        match self.output.format(config, Format::Json)? {
            Format::Table => {
                println!("equation: {eq}");
                println!("bound: {bound}");
                println!("groups: {}", report.groups_checked);
                println!("counterexamples: {}", report.counterexamples.len());
                for ce in &report.counterexamples {
                    println!(
                        "  max {}: ({}) vs ({})",
                        ce.max_coordinate,
                        ce.tail_a
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        ce.tail_b
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                    );
                }
            }
            _ => println!("{}", report.to_json()),
        }
        Ok(())
    }
}

#[derive(clap::Args, Debug)]
struct FundamentalsCmd {
    #[command(flatten)]
    equation: EquationArgs,
    /// Scan every tuple with coordinates up to this bound
    #[arg(long, name = "box-bound")]
    box_bound: Option<u64>,
    /// Descent rule: `argmax` or `any-direction`
    #[arg(long, default_value = "argmax")]
    criterion: String,
    /// Report both descent rules when they disagree
    #[arg(long)]
    both: bool,
    #[command(flatten)]
    limits: LimitArgs,
    #[command(flatten)]
    output: OutputArgs,
}

impl FundamentalsCmd {
    fn run(&self, config: &Config) -> Result<()> {
        let eq = self.equation.build(config)?;
        let box_bound = self
            .box_bound
            .or_else(|| config.get_parsed("box-bound"))
            .ok_or_else(|| anyhow!("--box-bound is required"))?;
        let criterion = match self.criterion.as_str() {
            "argmax" => FundamentalCriterion::ArgmaxOnly,
            "any-direction" => FundamentalCriterion::AnyDirection,
            other => bail!("unknown criterion {other:?} (argmax | any-direction)"),
        };
        let limits = self.limits.build(config);
        let set = find_fundamentals(&eq, box_bound, criterion, &limits)?;
        let other_set = if self.both {
            let other = match criterion {
                FundamentalCriterion::ArgmaxOnly => FundamentalCriterion::AnyDirection,
                FundamentalCriterion::AnyDirection => FundamentalCriterion::ArgmaxOnly,
            };
            let alt = find_fundamentals(&eq, box_bound, other, &limits)?;
            if alt.solutions != set.solutions {
                Some(alt)
            } else {
                None
            }
        } else {
            None
        };
        match self.output.format(config, Format::Json)? {
            Format::Table => {
                println!("equation: {eq}");
                println!("box: {box_bound}  criterion: {}", set.criterion);
                for sol in &set.solutions {
                    println!("{sol}");
                }
                if let Some(alt) = &other_set {
                    println!("criterion {} differs:", alt.criterion);
                    for sol in &alt.solutions {
                        println!("{sol}");
                    }
                }
            }
            _ => {
                println!("{}", serde_json::to_string(&set)?);
                if let Some(alt) = &other_set {
                    println!("{}", serde_json::to_string(&alt)?);
                }
            }
        }
        Ok(())
    }
}
