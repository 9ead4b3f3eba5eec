//! The `nmds` command line. Exit codes: 0 pass, 1 predicate false,
//! 2 usage or parse error, 3 budget hit before a verdict.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::branch::{self, NmdsVerdict};
use crate::catalog::{self, Catalog, Domain, Filter, Kind};
use crate::construct::{self, DlsSpec, GdlsSpec};
use crate::cost::{self, CostReport, Metric};
use crate::search::{
    self, existence_markdown, field_spec, Cell, Family, Mode, Outcome, Predicate, RunOptions,
    SearchCampaign, DEFAULT_FIELD, DEFAULT_SEED,
};
use crate::{canonical_json, BlockMatrix, Error, Field, FieldMatrix, Matrix, Result};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNRESOLVED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "nmds", version, about = "Near-MDS matrices: verify, cost, search, catalog")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Field as r:hexpoly, e.g. 4:0x13.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Block size m for ring inputs built from flags.
    #[arg(long, global = true)]
    pub ring: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Allow long-running search cells.
    #[arg(long, global = true)]
    pub long: bool,
    /// Canonical JSON instead of markdown.
    #[arg(long, global = true, conflicts_with = "md")]
    pub json: bool,
    #[arg(long, global = true)]
    pub md: bool,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field parameters and per-element costs.
    FieldInfo {
        /// Elements to describe; all of them for r ≤ 4 when omitted.
        #[arg(long, value_delimiter = ',')]
        element: Vec<String>,
    },
    /// NMDS verdict and XOR cost; exit 0 iff the (powered) matrix is NMDS.
    Verify {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        power: Option<u64>,
        #[arg(long)]
        metric: Option<Metric>,
    },
    /// Differential and linear branch numbers with witnesses.
    Branch {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        power: Option<u64>,
    },
    /// XOR cost report.
    Cost {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        metric: Option<Metric>,
    },
    /// Run a search campaign from a TOML file or flags.
    Search(SearchArgs),
    #[command(subcommand)]
    Catalog(CatalogCommand),
    #[command(subcommand)]
    Report(ReportCommand),
}

/// Exactly one matrix source.
#[derive(Args, Debug, Default)]
#[group(required = true, multiple = false)]
pub struct MatrixInput {
    /// First row of a circulant, e.g. 0x0,0x2,0x1,0x3.
    #[arg(long)]
    pub circ: Option<String>,
    /// e.g. "rho=[2,3,4,1];d1=1,1,1,1;d2=1,0,1,0".
    #[arg(long)]
    pub dls: Option<String>,
    /// e.g. "rho1=[4,1,2,3];rho2=[3,4,1,2];d1=..;d2=..".
    #[arg(long)]
    pub gdls: Option<String>,
    #[arg(long)]
    pub identity: Option<usize>,
    /// Catalog entry id.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Matrix JSON file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Campaign TOML file.
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u64>,
    /// Scan a structured family instead of running a campaign.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long, default_value = "involutory")]
    pub predicate: Predicate,
    /// Progress file for resumable runs.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    List(CatalogFilter),
    /// Rebuild and check entries; exit 0 iff all selected entries pass.
    Verify(CatalogFilter),
}

#[derive(Args, Debug)]
pub struct CatalogFilter {
    #[arg(long)]
    pub id: Option<String>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub kind: Option<Kind>,
    #[arg(long, value_parser = parse_domain)]
    pub domain: Option<Domain>,
    /// Use this catalog JSON instead of the built-in one.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ReportCommand {
    /// Existence grid of k-NMDS DLS matrices, k ∈ {n−1, n}.
    Existence {
        /// Comma-separated orders; empty gives a header-only table.
        #[arg(long, default_value = "4,5", value_parser = parse_list)]
        orders: OrderList,
        /// D2 sizes; 2..=⌈n/2⌉ per order when omitted.
        #[arg(long, value_delimiter = ',')]
        ls: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = DEFAULT_FIELD)]
        fields: Vec<String>,
    },
    /// Order, input size, type, iterations and XOR of the catalog matrices.
    CatalogSummary,
}

/// A whole comma list in one value, so an empty string is allowed.
type OrderList = Vec<usize>;

fn parse_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("not an order: {t:?}")))
        .collect()
}

fn parse_domain(s: &str) -> std::result::Result<Domain, String> {
    match s {
        "field" => Ok(Domain::Field),
        "ring" => Ok(Domain::Ring),
        _ => Err(format!("unknown domain {s:?}")),
    }
}

/// Rendered output plus exit code.
pub struct CmdOutput {
    pub text: String,
    pub code: u8,
}

impl Cli {
    fn field(&self) -> Result<Field> {
        self.field.as_deref().unwrap_or(DEFAULT_FIELD).parse()
    }

    fn render<T: Serialize>(&self, value: &T, markdown: impl FnOnce() -> String) -> Result<String> {
        if self.json {
            Ok(canonical_json(value)? + "\n")
        } else {
            Ok(markdown())
        }
    }
}

fn read_matrix(cli: &Cli, input: &MatrixInput) -> Result<(Matrix, Option<String>)> {
    if let Some(id) = &input.catalog {
        let cat = Catalog::builtin();
        let built = cat.build(cat.get(id)?)?;
        return Ok((built.matrix, Some(id.clone())));
    }
    if let Some(path) = &input.matrix {
        return Ok((Matrix::from_json_str(&std::fs::read_to_string(path)?)?, None));
    }
    if let Some(n) = input.identity {
        return Ok(match cli.ring {
            Some(m) if (1..=8).contains(&m) => (Matrix::Block(BlockMatrix::identity(n, m)), None),
            Some(m) => return Err(Error::InvalidSpec(format!("block size {m} outside 1..=8"))),
            None => (Matrix::Field(FieldMatrix::identity(&cli.field()?, n)), None),
        });
    }
    if cli.ring.is_some() {
        return Err(Error::InvalidSpec("--ring only applies to --identity; use --matrix for ring inputs".into()));
    }
    let f = cli.field()?;
    let m = if let Some(row) = &input.circ {
        construct::circulant(&f, &construct::parse_diag(&f, row)?)?
    } else if let Some(s) = &input.dls {
        construct::dls(&f, &DlsSpec::parse(&f, s)?)?
    } else if let Some(s) = &input.gdls {
        construct::gdls(&f, &GdlsSpec::parse(&f, s)?)?
    } else {
        return Err(Error::InvalidSpec("no matrix given".into()));
    };
    Ok((Matrix::Field(m), None))
}

fn verdict_markdown(v: &NmdsVerdict, k: u64) -> String {
    let mut s = format!("NMDS: {}\nMDS: {}\n", v.is_nmds, v.is_mds);
    if k > 1 {
        s = format!("power k = {k}\n{s}");
    }
    if let Some(c) = &v.certificate {
        s.push_str(&format!("certificate: {}\n", serde_json::to_string(c).unwrap_or_default()));
    }
    s
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<CmdOutput> {
    let (text, code) = match &cli.command {
        Command::FieldInfo { element } => field_info(cli, element)?,
        Command::Verify { input, power, metric } => {
            let (m, _) = read_matrix(cli, input)?;
            let k = power.unwrap_or(1);
            let v = branch::is_k_nmds(&m, k)?;
            let c: CostReport = cost::matrix_cost(&m, metric.unwrap_or(Metric::Default))?;
            let code = if v.is_nmds { EXIT_PASS } else { EXIT_FAIL };
            let value = json!({"k": k, "verdict": v, "cost": c, "matrix": m});
            let text = cli.render(&value, || format!("{}\n{}", verdict_markdown(&v, k), c.to_markdown()))?;
            (text, code)
        }
        Command::Branch { input, power } => {
            let (m, _) = read_matrix(cli, input)?;
            let m = m.pow(power.unwrap_or(1))?;
            let v = branch::verdict(&m)?;
            let text = cli.render(&v, || {
                format!(
                    "| β_d | β_l | MDS | NMDS |\n|---|---|---|---|\n| {} | {} | {} | {} |\n\ndifferential witness ({})\nlinear witness ({})\n",
                    v.beta_d,
                    v.beta_l,
                    v.mds,
                    v.nmds,
                    v.witness.differential.join(", "),
                    v.witness.linear.join(", ")
                )
            })?;
            (text, EXIT_PASS)
        }
        Command::Cost { input, metric } => {
            let (m, _) = read_matrix(cli, input)?;
            let c = cost::matrix_cost(&m, metric.unwrap_or(Metric::Default))?;
            (cli.render(&c, || c.to_markdown())?, EXIT_PASS)
        }
        Command::Search(args) => search_cmd(cli, args)?,
        Command::Catalog(cmd) => catalog_cmd(cli, cmd)?,
        Command::Report(ReportCommand::Existence { orders, ls, fields }) => existence(cli, orders, ls, fields)?,
        Command::Report(ReportCommand::CatalogSummary) => {
            let rows = Catalog::builtin().summary()?;
            (cli.render(&rows, || catalog::summary_markdown(&rows))?, EXIT_PASS)
        }
    };
    Ok(CmdOutput { text, code })
}

#[derive(Serialize)]
struct ElementInfo {
    value: String,
    log_alpha: Option<u32>,
    inverse: Option<String>,
    d_xor: Option<usize>,
    s_xor: Option<usize>,
}

fn field_info(cli: &Cli, elements: &[String]) -> Result<(String, u8)> {
    let f = cli.field()?;
    let values: Vec<u8> = if elements.is_empty() {
        if f.r() <= 4 {
            (0..f.size()).map(|v| v as u8).collect()
        } else {
            Vec::new()
        }
    } else {
        elements.iter().map(|e| f.parse_element(e)).collect::<Result<_>>()?
    };
    let infos: Vec<ElementInfo> = values
        .iter()
        .map(|&v| ElementInfo {
            value: f.format_element(v),
            log_alpha: f.log_alpha(v),
            inverse: f.inv(v).ok().map(|i| f.format_element(i)),
            d_xor: cost::d_xor(&f, v).ok(),
            s_xor: cost::s_xor(&f, v).ok(),
        })
        .collect();
    let value = json!({
        "field": field_spec(&f),
        "r": f.r(),
        "modulus": format!("{:#x}", f.modulus()),
        "size": f.size(),
        "alpha_primitive": f.alpha_is_primitive(),
        "elements": infos,
    });
    let text = cli.render(&value, || {
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        let mut s = format!(
            "GF(2^{}) modulo {:#x}, α {}primitive\n\n| element | log α | inverse | d-XOR | s-XOR |\n|---|---|---|---|---|\n",
            f.r(),
            f.modulus(),
            if f.alpha_is_primitive() { "" } else { "not " }
        );
        for e in &infos {
            s.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                e.value,
                e.log_alpha.map_or("-".to_string(), |v| v.to_string()),
                e.inverse.clone().unwrap_or_else(|| "-".into()),
                opt(e.d_xor),
                opt(e.s_xor)
            ));
        }
        s
    })?;
    Ok((text, EXIT_PASS))
}

fn search_cmd(cli: &Cli, args: &SearchArgs) -> Result<(String, u8)> {
    if let Some(family) = args.family {
        let n = args.n.ok_or_else(|| Error::InvalidSpec("--family needs --n".into()))?;
        let r = search::structured_family_scan(
            family,
            n,
            &cli.field()?,
            args.predicate,
            cli.budget,
            cli.seed.unwrap_or(DEFAULT_SEED),
        )?;
        let code = if r.exhaustive { EXIT_PASS } else { EXIT_UNRESOLVED };
        return Ok((cli.render(&r, || r.to_markdown())?, code));
    }
    let mut c = match &args.config {
        Some(path) => SearchCampaign::from_toml(&std::fs::read_to_string(path)?)?,
        None => {
            let mode = args.mode.ok_or_else(|| Error::InvalidSpec("give a campaign file or --mode".into()))?;
            let n = args.n.ok_or_else(|| Error::InvalidSpec("--n is required".into()))?;
            SearchCampaign::new(mode, n, args.l.unwrap_or(0), &cli.field()?)
        }
    };
    if args.config.is_some() {
        if let Some(f) = &cli.field {
            c.field = field_spec(&f.parse()?);
        }
    }
    if let Some(l) = args.l {
        c.l = l;
    }
    if !args.k.is_empty() {
        c.k_set = args.k.clone();
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if cli.budget.is_some() {
        c.budget = cli.budget;
    }
    if c.is_heavy() && !cli.long {
        return Err(Error::InvalidSpec(
            "this cell is long-running; pass --long to run it (progress is checkpointed)".into(),
        ));
    }
    let checkpoint = args.checkpoint.clone().or_else(|| {
        cli.long.then(|| {
            let r = c.field().map(|f| f.r()).unwrap_or(0);
            PathBuf::from(format!("nmds-checkpoint-n{}-l{}-r{}.json", c.n, c.l, r))
        })
    });
    let opts = RunOptions {
        jobs: cli.jobs,
        checkpoint: if c.mode == Mode::ReducedDls { checkpoint } else { None },
    };
    let r = search::run_campaign(&c, &opts)?;
    let code = if r.has_unresolved() { EXIT_UNRESOLVED } else { EXIT_PASS };
    Ok((cli.render(&r, || r.to_markdown())?, code))
}

fn load_catalog(f: &CatalogFilter) -> Result<Catalog> {
    match &f.file {
        Some(p) => Catalog::from_json_str(&std::fs::read_to_string(p)?),
        None => Ok(Catalog::builtin()),
    }
}

fn to_filter(f: &CatalogFilter) -> Filter {
    Filter {
        id: f.id.clone(),
        order: f.order,
        kind: f.kind,
        domain: f.domain,
    }
}

fn catalog_cmd(cli: &Cli, cmd: &CatalogCommand) -> Result<(String, u8)> {
    match cmd {
        CatalogCommand::List(f) => {
            let cat = load_catalog(f)?;
            let entries = cat.list(&to_filter(f))?;
            let text = cli.render(&entries, || {
                let mut s = String::from("| id | kind | n | field | k | XOR | source |\n|---|---|---|---|---|---|---|\n");
                for e in &entries {
                    let field = cat.field_of(e).map(|f| field_spec(&f)).unwrap_or_default();
                    let dom = match e.domain() {
                        Domain::Field => field,
                        Domain::Ring => format!("ring over {field}"),
                    };
                    s.push_str(&format!(
                        "| {} | {} | {} | {} | {} | {} | {} |\n",
                        e.id,
                        serde_json::to_value(e.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                        cat.order_of(e).unwrap_or(0),
                        dom,
                        e.expected.k.map_or("-".into(), |k| k.to_string()),
                        e.expected.cost.map_or("-".into(), |c| c.to_string()),
                        e.provenance
                    ));
                }
                s
            })?;
            Ok((text, EXIT_PASS))
        }
        CatalogCommand::Verify(f) => {
            let cat = load_catalog(f)?;
            let reports = cat.verify(&to_filter(f))?;
            if reports.is_empty() {
                return Err(Error::InvalidSpec("no catalog entries match".into()));
            }
            let code = if reports.iter().all(|r| r.pass) { EXIT_PASS } else { EXIT_FAIL };
            Ok((cli.render(&reports, || catalog::verify_markdown(&reports))?, code))
        }
    }
}

fn existence(cli: &Cli, orders: &[usize], ls: &[usize], fields: &[String]) -> Result<(String, u8)> {
    let mut cells: Vec<Cell> = Vec::new();
    for spec in fields {
        let field: Field = spec.parse()?;
        for &n in orders {
            let lvals: Vec<usize> = if ls.is_empty() { (2..=n.div_ceil(2)).collect() } else { ls.to_vec() };
            for l in lvals.into_iter().filter(|&l| l <= n) {
                let mut c = SearchCampaign::new(Mode::ReducedDls, n, l, &field);
                c.budget = cli.budget;
                if c.is_heavy() && !cli.long {
                    for k in c.k_values() {
                        cells.push(Cell {
                            n,
                            l,
                            k,
                            field: field_spec(&field),
                            outcome: Outcome::Unresolved,
                            reason: Some("long-running cell, pass --long".into()),
                            witness: None,
                        });
                    }
                    continue;
                }
                let opts = RunOptions {
                    jobs: cli.jobs,
                    checkpoint: None,
                };
                cells.extend(search::run_campaign(&c, &opts)?.cells);
            }
        }
    }
    let code = if cells.iter().any(|c| c.outcome == Outcome::Unresolved) {
        EXIT_UNRESOLVED
    } else {
        EXIT_PASS
    };
    Ok((cli.render(&cells, || existence_markdown(&cells))?, code))
}
