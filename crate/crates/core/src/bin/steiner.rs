use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use steiner::search::{estimate_search_size, IsoClass};
use steiner::{
    are_isomorphic, automorphism_count, catalog, catalog_lookup, enumerate_designs, fingerprint, isomorphism_classes,
    verify_steiner, ActionScenario, BaseBlockSystem, Branch, Design, DesignFile, Error, GroupSpec, GroupTable,
    IsoOutcome, ParseMode, SearchConfig,
};

#[derive(Parser)]
#[command(name = "steiner", version, about = "Group-generated Steiner systems S(2,k,v)")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Accept spacing and typesetting noise in block lists.
    #[arg(long, global = true)]
    lenient: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build or validate Cayley tables.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Expand base blocks into a design file.
    Expand(ExpandArgs),
    /// Check the Steiner property of a design file.
    Verify { file: PathBuf },
    /// Print the pair-block census of a design.
    Fingerprint { file: PathBuf },
    /// Sort design files into isomorphism classes.
    Iso {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Count automorphisms of a design.
    Aut { file: PathBuf },
    /// Enumerate base-block systems for a scenario.
    Search(SearchArgs),
    /// Browse the built-in catalog.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Write the Cayley table of a group spec.
    Build {
        spec: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a table file against the group axioms.
    Validate { file: PathBuf },
}

#[derive(clap::Args)]
struct ExpandArgs {
    /// Scenario descriptor, e.g. `cyclic-two-orbit/cyclic(48)`.
    #[arg(long, required_unless_present = "catalog")]
    scenario: Option<String>,
    /// Base blocks in block-list notation.
    #[arg(long, conflicts_with_all = ["blocks_file", "catalog"])]
    blocks: Option<String>,
    #[arg(long, conflicts_with = "catalog")]
    blocks_file: Option<PathBuf>,
    /// Catalog id to expand instead of explicit blocks.
    #[arg(long, conflicts_with = "scenario")]
    catalog: Option<String>,
    /// Cayley table to use for import-required catalog entries.
    #[arg(long, requires = "catalog")]
    table: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    scenario: String,
    #[arg(short)]
    k: usize,
    /// Base blocks every result must contain.
    #[arg(long)]
    forced: Option<String>,
    /// Root-branch selector `i/N`.
    #[arg(long, default_value = "0/1")]
    branch: Branch,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    node_budget: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Group results into isomorphism classes.
    #[arg(long)]
    classes: bool,
    /// Fail unless exactly this many systems are found.
    #[arg(long)]
    expect: Option<usize>,
    /// Estimate the tree size with this many random probes instead of searching.
    #[arg(long)]
    estimate: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// List entries, optionally for one family.
    List {
        #[arg(long)]
        family: Option<String>,
    },
    /// Show one entry.
    Show {
        id: String,
        /// Expand and verify the entry.
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

enum Failure {
    /// Verification or search claim did not hold.
    Check(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("steiner: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("steiner: {e}");
            ExitCode::from(2)
        }
    }
}

fn mode(cli: &Cli) -> ParseMode {
    if cli.lenient {
        ParseMode::Lenient
    } else {
        ParseMode::Strict
    }
}

fn print_json(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("json values serialize"));
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Group(GroupCmd::Build { spec, output }) => {
            let spec: GroupSpec = spec.parse()?;
            let table = GroupTable::build(&spec)?;
            match output {
                Some(path) => table.write_table_file(path)?,
                None if cli.format == Format::Text => print!("{}", table.to_table_text()),
                None => {}
            }
            if cli.format == Format::Json {
                print_json(json!({
                    "spec": spec.to_string(),
                    "order": table.order(),
                    "abelian": table.is_abelian(),
                    "output": output,
                }));
            } else if output.is_some() {
                eprintln!("{spec}: order {}", table.order());
            }
            Ok(())
        }
        Command::Group(GroupCmd::Validate { file }) => match GroupTable::read_table_file(file) {
            Ok(table) => {
                if cli.format == Format::Json {
                    print_json(json!({ "valid": true, "order": table.order(), "abelian": table.is_abelian() }));
                } else {
                    println!("valid group of order {} ({})", table.order(), abelian_word(&table));
                }
                Ok(())
            }
            Err(Error::Table(d)) => {
                if cli.format == Format::Json {
                    print_json(json!({ "valid": false, "diagnostic": d.to_string() }));
                }
                Err(Failure::Check(format!("{}: {d}", file.display())))
            }
            Err(e) => Err(e.into()),
        },
        Command::Expand(args) => expand(cli, args),
        Command::Verify { file } => {
            let design = DesignFile::read(file)?.to_design()?;
            let report = verify_steiner(&design);
            if cli.format == Format::Json {
                print_json(serde_json::to_value(&report).expect("report serializes"));
            } else {
                print_report(&design, &report);
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Check(format!("{} is not a Steiner system", file.display())))
            }
        }
        Command::Fingerprint { file } => {
            let design = DesignFile::read(file)?.to_design()?;
            let f = fingerprint(&design)?;
            if cli.format == Format::Json {
                print_json(json!({
                    "fingerprint": f.to_string(),
                    "counts": f.counts(),
                    "total": f.total(),
                }));
            } else {
                println!("{f}");
            }
            Ok(())
        }
        Command::Iso { files } => iso(cli, files),
        Command::Aut { file } => {
            let design = DesignFile::read(file)?.to_design()?;
            let n = automorphism_count(&design)?;
            if cli.format == Format::Json {
                print_json(json!({ "automorphisms": n.to_string() }));
            } else {
                println!("{n}");
            }
            Ok(())
        }
        Command::Search(args) => search(cli, args),
        Command::Catalog(CatalogCmd::List { family }) => {
            let entries: Vec<_> =
                catalog().iter().filter(|e| family.as_deref().is_none_or(|f| e.family.id == f)).collect();
            if let Some(f) = family {
                if entries.is_empty() {
                    return Err(Failure::Input(Error::UnknownCatalogId(f.clone())));
                }
            }
            if cli.format == Format::Json {
                print_json(serde_json::to_value(&entries).expect("entries serialize"));
            } else {
                for e in entries {
                    let flag = if e.import_required() { "  (import required)" } else { "" };
                    println!("{}  S(2,{},{})  {}{flag}", e.id, e.family.k, e.family.v, e.family.kind);
                }
            }
            Ok(())
        }
        Command::Catalog(CatalogCmd::Show { id, expand, table }) => {
            let entry = catalog_lookup(id)?;
            let text = cli.format == Format::Text;
            if text {
                println!("id:          {}", entry.id);
                println!("family:      {} ({})", entry.family.id, entry.family.description);
                println!("scenario:    {}", entry.family.kind);
                println!("group:       {}", entry.family.group.unwrap_or("import required"));
                println!("parameters:  S(2,{},{})", entry.family.k, entry.family.v);
                println!("provenance:  {}", entry.family.provenance);
                println!("fingerprint: {}", entry.printed_fingerprint);
                println!("blocks:      {}", entry.blocks_text());
            }
            let mut record = serde_json::to_value(entry).expect("entry serializes");
            let mut result = Ok(());
            if *expand {
                let table = table.as_deref().map(GroupTable::read_table_file).transpose()?.map(Arc::new);
                let design = entry.expand(table)?;
                let report = verify_steiner(&design);
                if text {
                    println!("expanded:    b = {}, {}", report.b, if report.pass { "verified" } else { "FAILED" });
                }
                record["verification"] = serde_json::to_value(&report).expect("report serializes");
                if !report.pass {
                    result = Err(Failure::Check(format!("{id} does not expand to a Steiner system")));
                }
            }
            if !text {
                print_json(record);
            }
            result
        }
    }
}

fn abelian_word(table: &GroupTable) -> &'static str {
    if table.is_abelian() {
        "abelian"
    } else {
        "non-abelian"
    }
}

fn print_report(design: &Design, report: &steiner::VerificationReport) {
    let verdict = if report.pass { "Steiner system" } else { "NOT a Steiner system" };
    println!("S(2,{},{}) with b = {}: {verdict}", design.k(), design.v(), report.b);
    if let Some(r) = report.r {
        println!("replication r = {r}");
    }
    if !report.uncovered.is_empty() {
        println!("uncovered pairs: {}", report.uncovered.len());
    }
    if !report.multiply_covered.is_empty() {
        println!("multiply covered pairs: {}", report.multiply_covered.len());
    }
    if !report.irregular_points.is_empty() {
        println!("points with irregular replication: {}", report.irregular_points.len());
    }
}

fn expand(cli: &Cli, args: &ExpandArgs) -> Outcome {
    let system = if let Some(id) = &args.catalog {
        let entry = catalog_lookup(id)?;
        let table = args.table.as_deref().map(GroupTable::read_table_file).transpose()?.map(Arc::new);
        entry.system(table)?
    } else {
        let scenario = Arc::new(ActionScenario::from_descriptor(args.scenario.as_deref().unwrap_or_default())?);
        let text = match (&args.blocks, &args.blocks_file) {
            (Some(t), _) => t.clone(),
            (None, Some(p)) => fs::read_to_string(p)?,
            (None, None) => return Err(Failure::Input(Error::Config("--blocks or --blocks-file is required".into()))),
        };
        BaseBlockSystem::parse(scenario, &text, mode(cli))?
    };
    let design = system.expand()?;
    let report = verify_steiner(&design);
    let file = DesignFile::from_design(&design, Some(system.scenario()));
    if let Some(path) = &args.output {
        file.write(path)?;
    }
    if cli.format == Format::Json {
        print_json(json!({
            "v": design.v(),
            "k": design.k(),
            "b": design.b(),
            "pass": report.pass,
            "output": args.output,
        }));
    } else if args.output.is_some() {
        print_report(&design, &report);
    } else {
        print!("{}", file.to_toml());
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check("expansion is not a Steiner system".into()))
    }
}

fn iso(cli: &Cli, files: &[PathBuf]) -> Outcome {
    let designs = files.iter().map(|p| DesignFile::read(p)?.to_design()).collect::<steiner::Result<Vec<_>>>()?;
    if designs.len() == 2 {
        let outcome = are_isomorphic(&designs[0], &designs[1])?;
        if cli.format == Format::Json {
            print_json(serde_json::to_value(&outcome).expect("outcome serializes"));
        } else {
            match &outcome {
                IsoOutcome::Isomorphic(map) => {
                    println!("isomorphic");
                    let shown: Vec<String> = map.iter().enumerate().map(|(p, q)| format!("{p}->{q}")).collect();
                    println!("{}", shown.join(" "));
                }
                IsoOutcome::NonIsomorphic(reason) => println!("non-isomorphic: {reason}"),
            }
        }
        return Ok(());
    }
    let classes = isomorphism_classes(&designs)?;
    if cli.format == Format::Json {
        print_json(serde_json::to_value(&classes).expect("classes serialize"));
    } else {
        print_classes(&classes, |i| files[i].display().to_string());
    }
    Ok(())
}

fn print_classes(classes: &[IsoClass], name: impl Fn(usize) -> String) {
    println!("{} isomorphism classes", classes.len());
    for (n, c) in classes.iter().enumerate() {
        let members: Vec<String> = c.members.iter().map(|&i| name(i)).collect();
        println!("class {}: {}  {}", n + 1, members.join(" "), c.fingerprint);
    }
}

fn search(cli: &Cli, args: &SearchArgs) -> Outcome {
    let scenario = Arc::new(ActionScenario::from_descriptor(&args.scenario)?);
    let mut config = SearchConfig::new(scenario.clone(), args.k);
    if let Some(text) = &args.forced {
        config.forced = BaseBlockSystem::parse(scenario.clone(), text, mode(cli))?.base_blocks().to_vec();
    }
    config.branch = args.branch;
    config.checkpoint = args.checkpoint.clone();
    config.jobs = args.jobs.max(1);
    config.limit = args.limit;
    config.node_budget = args.node_budget;
    config.time_budget = args.time_budget.map(Duration::from_secs_f64);

    if let Some(probes) = args.estimate {
        let est = estimate_search_size(&config, probes, args.seed)?;
        if cli.format == Format::Json {
            print_json(serde_json::to_value(&est).expect("estimate serializes"));
        } else {
            println!("probes:        {}", est.probes);
            println!("nodes:         {:.3e} +- {:.1e}", est.nodes, est.nodes_std_error);
            println!("solutions:     {:.3e}", est.solutions);
            println!("root branches: {}", est.root_branches);
            println!("depth:         mean {:.1}, max {}", est.mean_depth, est.max_depth);
        }
        return Ok(());
    }

    let out = enumerate_designs(&config)?;
    let space = scenario.space();
    let classes = if args.classes {
        let designs = out.systems.iter().map(BaseBlockSystem::expand).collect::<steiner::Result<Vec<_>>>()?;
        Some(isomorphism_classes(&designs)?)
    } else {
        None
    };
    if cli.format == Format::Json {
        let systems: Vec<String> =
            out.systems.iter().map(|s| steiner::emit_blocks(s.base_blocks(), space)).collect();
        print_json(json!({
            "scenario": args.scenario,
            "k": args.k,
            "branch": args.branch.to_string(),
            "systems": systems,
            "exhaustive": out.exhaustive,
            "nodes": out.nodes,
            "root_branches": out.root_branches,
            "selected_branches": out.selected_branches,
            "resumed_prefixes": out.resumed_prefixes,
            "seconds": out.elapsed.as_secs_f64(),
            "classes": classes,
        }));
    } else {
        for s in &out.systems {
            println!("{}", steiner::emit_blocks(s.base_blocks(), space));
        }
        eprintln!(
            "{} systems, {} nodes, {} of {} root branches, {}{:.2?}",
            out.systems.len(),
            out.nodes,
            out.selected_branches,
            out.root_branches,
            if out.exhaustive { "" } else { "INCOMPLETE, " },
            out.elapsed
        );
        if let Some(c) = &classes {
            print_classes(c, |i| format!("#{}", i + 1));
        }
    }
    if let Some(expected) = args.expect {
        if !out.exhaustive {
            return Err(Failure::Check("search stopped before exhausting the tree".into()));
        }
        if out.systems.len() != expected {
            return Err(Failure::Check(format!("expected {expected} systems, found {}", out.systems.len())));
        }
    }
    Ok(())
}
