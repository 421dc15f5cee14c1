//! Command-line front end.
//!
//! Every flag may also come from a TOML file given by `--config`. Flags on
//! the command line win over the file. Exit codes: 0 when the run succeeds
//! or verifies, 1 when verification finds a defect, 2 on usage or
//! precondition errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::decoration::{full_decoration, partial_decoration, MatchingRule, PartialStrategy};
use crate::engine::{synthesize, verify, EngineOptions, SynthReport, DEFAULT_N_CAP};
use crate::error::{Error, Result};
use crate::group::{parse_window_spec, GroupCtx, Window};
use crate::heuristics::{
    estimate_density, hashmax_rule, multiround_greedy, rows_to_csv, DensityRow,
};
use crate::instances::{
    random_regular, schreier_graph, torus_instance, GraphInstance, Provenance, SchreierInstance,
};
use crate::local_rule::{
    is_independent, minimize_window, prune, ClopenSet, DEFAULT_ENUMERATION_LIMIT,
};
use crate::lp_oracle::{
    fractional_chromatic, independence_number, is_vertex_transitive, kfold_chromatic,
    DEFAULT_SIZE_CAP, TRANSITIVITY_CAP,
};
use crate::rational::Rational;
use crate::rng::{child_seed, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEFECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const SET_OUTPUT_LIMIT: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "fraccolor",
    version,
    about = "Exact k-fold colorings from clopen independent-set rules"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Synthesize a k-fold coloring from a rule and verify it.
    Synth,
    /// Exact χ*, α and χ^k of a small graph.
    Oracle,
    /// Schreier-decorate a regular graph.
    Decorate,
    /// Density estimates of local rules as CSV.
    Density,
    /// Drop window coordinates the rule ignores.
    MinimizeWindow,
    /// Remove every pattern that conflicts with a shifted copy.
    Prune,
    /// Write an instance file.
    Gen,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Matching {
    Maximum,
    Greedy,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Flags {
    /// TOML file supplying defaults for any of these flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// torus:D:M, random:N_GENS:V, file:PATH.json, graph:PATH.txt, cycle:N,
    /// complete:N, path:N, edgeless:N or petersen.
    #[arg(long, global = true)]
    pub instance: Option<String>,
    /// file:PATH.json, hashmax:R, cylinder or multiround:R. Repeatable.
    #[arg(long, global = true)]
    #[serde(default)]
    pub rule: Vec<String>,
    /// std, a list of signed generator indices like [1,-2], or a list of
    /// elements like [[1,0],[0,1]].
    #[arg(long = "F", global = true)]
    #[serde(rename = "F")]
    pub f: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub n_cap: Option<usize>,
    #[arg(long, global = true)]
    pub window_cap: Option<usize>,
    #[arg(long, global = true)]
    pub lp_cap: Option<usize>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    #[serde(default)]
    pub no_timestamp: bool,
    #[arg(long, global = true)]
    #[serde(default)]
    pub compact_colors: bool,
    /// Require a full decoration.
    #[arg(long, global = true)]
    #[serde(default)]
    pub full: bool,
    /// Prune the rule before synthesis.
    #[arg(long, global = true)]
    #[serde(default)]
    pub prune: bool,
    /// Accept an empty F.
    #[arg(long, global = true)]
    #[serde(default)]
    pub allow_empty_f: bool,
    /// Include the vertex sets in the synthesis report.
    #[arg(long, global = true)]
    #[serde(default)]
    pub emit_sets: bool,
    /// Largest k in the oracle's χ^k table.
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    /// Monte Carlo samples per clopen rule.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Independent runs per multiround rule.
    #[arg(long, global = true)]
    pub replicates: Option<u64>,
    /// Generators of a partial decoration.
    #[arg(long, global = true)]
    pub gens: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub matching: Option<Matching>,
}

impl Flags {
    /// Fills every unset flag from `base`.
    pub fn merged_over(self, base: Flags) -> Flags {
        Flags {
            config: self.config,
            instance: self.instance.or(base.instance),
            rule: if self.rule.is_empty() {
                base.rule
            } else {
                self.rule
            },
            f: self.f.or(base.f),
            seed: self.seed.or(base.seed),
            threads: self.threads.or(base.threads),
            n_cap: self.n_cap.or(base.n_cap),
            window_cap: self.window_cap.or(base.window_cap),
            lp_cap: self.lp_cap.or(base.lp_cap),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            no_timestamp: self.no_timestamp || base.no_timestamp,
            compact_colors: self.compact_colors || base.compact_colors,
            full: self.full || base.full,
            prune: self.prune || base.prune,
            allow_empty_f: self.allow_empty_f || base.allow_empty_f,
            emit_sets: self.emit_sets || base.emit_sets,
            k_max: self.k_max.or(base.k_max),
            samples: self.samples.or(base.samples),
            replicates: self.replicates.or(base.replicates),
            gens: self.gens.or(base.gens),
            matching: self.matching.or(base.matching),
        }
    }
}

/// Resolved settings for one command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub flags: Flags,
    pub seed: u64,
    pub n_cap: usize,
    pub window_cap: usize,
    pub lp_cap: usize,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let flags = match &cli.flags.config {
            Some(path) => {
                let text = read(path)?;
                let base: Flags = toml::from_str(&text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                cli.flags.merged_over(base)
            }
            None => cli.flags,
        };
        let positive = |name: &str, v: Option<usize>, default: usize| match v {
            Some(0) => Err(Error::InvalidParameters(format!(
                "--{name} must be positive"
            ))),
            Some(v) => Ok(v),
            None => Ok(default),
        };
        Ok(RunConfig {
            command: cli.command,
            seed: flags.seed.unwrap_or(DEFAULT_SEED),
            n_cap: positive("n-cap", flags.n_cap, DEFAULT_N_CAP)?,
            window_cap: positive("window-cap", flags.window_cap, DEFAULT_ENUMERATION_LIMIT)?,
            lp_cap: positive("lp-cap", flags.lp_cap, DEFAULT_SIZE_CAP)?,
            flags,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A parsed `--instance`.
pub enum Instance {
    Action(SchreierInstance),
    Graph(GraphInstance),
}

impl Instance {
    pub fn parse(spec: &str, seed: u64) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number `{s}` in instance `{spec}`")))
        };
        match parts.as_slice() {
            ["torus", d, m] => Ok(Instance::Action(torus_instance(
                num(d)? as u32,
                num(m)? as u32,
            )?)),
            ["random", n, v] => {
                let g = random_regular(num(n)?, num(v)?, seed)?;
                let dec = full_decoration(&g)?;
                let s = dec.to_instance()?;
                let provenance = Provenance {
                    construction: format!("random:{n}:{v}"),
                    seed: Some(seed),
                };
                Ok(Instance::Action(SchreierInstance::new(
                    s.ctx(),
                    s.vertex_count(),
                    s.gen_maps().to_vec(),
                    provenance,
                )?))
            }
            ["file", ..] => {
                let path = &spec["file:".len()..];
                let text = read(Path::new(path))?;
                SchreierInstance::from_json(&text)
                    .map(Instance::Action)
                    .map_err(|e| Error::Parse(format!("{path}: {e}")))
            }
            ["graph", ..] => {
                let path = &spec["graph:".len()..];
                GraphInstance::from_edge_list(&read(Path::new(path))?, true)
                    .map(Instance::Graph)
                    .map_err(|e| Error::Parse(format!("{path}: {e}")))
            }
            _ => GraphInstance::named(spec).map(Instance::Graph),
        }
    }

    /// The graph itself, or the Schreier graph of the standard generators.
    pub fn graph(&self) -> Result<GraphInstance> {
        match self {
            Instance::Action(s) => schreier_graph(s, &s.ctx().generators()),
            Instance::Graph(g) => Ok(g.clone()),
        }
    }

    /// The action itself, or a decoration of the graph.
    pub fn action(&self) -> Result<SchreierInstance> {
        match self {
            Instance::Action(s) => Ok(s.clone()),
            Instance::Graph(g) => {
                let n_gens = g.max_degree().div_ceil(2).max(1);
                let strategy = PartialStrategy {
                    n_gens,
                    matching: MatchingRule::Maximum,
                };
                partial_decoration(g, strategy)?.to_instance()
            }
        }
    }
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Error::InvalidParameters(format!("--{flag} is required")))
}

fn single_rule(flags: &Flags) -> Result<&str> {
    match flags.rule.as_slice() {
        [r] => Ok(r),
        [] => Err(Error::InvalidParameters("--rule is required".into())),
        _ => Err(Error::InvalidParameters(
            "this command takes one --rule".into(),
        )),
    }
}

/// Parses a clopen `--rule` in the context `ctx`.
pub fn parse_rule(spec: &str, ctx: GroupCtx, f: &Window, cap: usize) -> Result<ClopenSet> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = read(Path::new(path))?;
        return ClopenSet::from_json(&text, Some(ctx))
            .map_err(|e| Error::Parse(format!("{path}: {e}")));
    }
    if let Some(r) = spec.strip_prefix("hashmax:") {
        let r = r
            .parse()
            .map_err(|_| Error::Parse(format!("bad radius in rule `{spec}`")))?;
        return hashmax_rule(ctx, f, r, cap);
    }
    if spec == "cylinder" {
        return Ok(ClopenSet::cylinder(ctx.identity(), true));
    }
    Err(Error::Parse(format!("unknown rule `{spec}`")))
}

fn timestamp(flags: &Flags, report: &mut Map<String, Value>) {
    if !flags.no_timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        report.insert("timestamp".into(), json!(secs));
    }
}

fn emit(flags: &Flags, text: &str) -> Result<()> {
    match &flags.out {
        Some(path) => fs::write(path, text).map_err(Error::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(flags: &Flags, report: Map<String, Value>) -> Result<()> {
    if flags.format == Some(Format::Csv) {
        return Err(Error::InvalidParameters(
            "this command writes JSON only".into(),
        ));
    }
    emit(
        flags,
        &(serde_json::to_string_pretty(&Value::Object(report))? + "\n"),
    )
}

fn to_map(value: impl serde::Serialize) -> Result<Map<String, Value>> {
    match serde_json::to_value(value)? {
        Value::Object(m) => Ok(m),
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            Ok(m)
        }
    }
}

pub fn cmd_synth(cfg: &RunConfig) -> Result<i32> {
    let flags = &cfg.flags;
    let instance_spec = required(&flags.instance, "instance")?;
    let s = Instance::parse(instance_spec, cfg.seed)?.action()?;
    let ctx = s.ctx();
    let f_spec = flags.f.as_deref().unwrap_or("std");
    let f = parse_window_spec(ctx, f_spec)?;
    let rule_spec = single_rule(flags)?;
    let mut set = parse_rule(rule_spec, ctx, &f, cfg.window_cap)?;
    if flags.prune {
        set = prune(&set, &f, cfg.window_cap)?;
    }
    if !f.is_empty() {
        let check = is_independent(&set, &f, cfg.window_cap)?;
        if let Some(w) = check.witness {
            return Err(Error::NotIndependent {
                sigma: w.sigma,
                witness: format!("{} on {}", w.assignment, w.window.join(" ")),
            });
        }
    }
    let opts = EngineOptions {
        n_cap: cfg.n_cap,
        enumeration_limit: cfg.window_cap,
        compact_colors: flags.compact_colors,
        allow_empty_f: flags.allow_empty_f,
    };
    let syn = synthesize(&s, &set, &f, &opts)?;
    let g = schreier_graph(&s, &f)?;
    let check = verify(&syn.coloring, &g);
    let mut report = to_map(SynthReport::new(&syn, &set, &check))?;
    report.insert("instance".into(), json!(instance_spec));
    report.insert("rule".into(), json!(rule_spec));
    report.insert("F".into(), json!(f.to_string()));
    report.insert("seed".into(), json!(cfg.seed));
    if flags.emit_sets && syn.coloring.ell() <= SET_OUTPUT_LIMIT {
        let sets: Vec<Vec<usize>> = syn
            .coloring
            .sets()
            .iter()
            .map(|b| b.ones().collect())
            .collect();
        report.insert("sets".into(), json!(sets));
    }
    timestamp(flags, &mut report);
    emit_json(flags, report)?;
    Ok(if check.verified { EXIT_OK } else { EXIT_DEFECT })
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<i32> {
    let flags = &cfg.flags;
    let spec = required(&flags.instance, "instance")?;
    let g = Instance::parse(spec, cfg.seed)?.graph()?;
    let lp = fractional_chromatic(&g, cfg.lp_cap)?;
    let (alpha, witness) = independence_number(&g, cfg.lp_cap)?;
    let mut kfold = Vec::new();
    for k in 1..=flags.k_max.unwrap_or(2) {
        let r = kfold_chromatic(&g, k, cfg.lp_cap)?;
        kfold.push(json!({
            "k": k,
            "ell": r.ell,
            "ratio": Rational::new(r.ell as i64, k as i64).to_string(),
            "witness": r.witness,
        }));
    }
    let transitive = if g.vertex_count() <= TRANSITIVITY_CAP {
        json!(is_vertex_transitive(&g)?)
    } else {
        Value::Null
    };
    let mut report = Map::new();
    report.insert("instance".into(), json!(spec));
    report.insert("vertices".into(), json!(g.vertex_count()));
    report.insert("edges".into(), json!(g.edge_count()));
    report.insert("chi_star".into(), json!(lp.value.to_string()));
    report.insert("chi_star_decimal".into(), json!(lp.value.to_f64()));
    report.insert("alpha".into(), json!(alpha));
    report.insert("alpha_witness".into(), json!(witness));
    report.insert("kfold".into(), Value::Array(kfold));
    report.insert("vertex_transitive".into(), transitive);
    report.insert("lp".into(), serde_json::to_value(&lp)?);
    timestamp(flags, &mut report);
    emit_json(flags, report)?;
    Ok(EXIT_OK)
}

pub fn cmd_decorate(cfg: &RunConfig) -> Result<i32> {
    let flags = &cfg.flags;
    let g = Instance::parse(required(&flags.instance, "instance")?, cfg.seed)?.graph()?;
    let dec = if flags.full {
        full_decoration(&g)?
    } else {
        let n_gens = flags
            .gens
            .unwrap_or_else(|| g.max_degree().div_ceil(2).max(1));
        let matching = match flags.matching.unwrap_or(Matching::Maximum) {
            Matching::Maximum => MatchingRule::Maximum,
            Matching::Greedy => MatchingRule::Greedy,
        };
        partial_decoration(&g, PartialStrategy { n_gens, matching })?
    };
    let fraction = dec.certified_fraction();
    let mut report = to_map(dec.to_file(Some(cfg.seed))?)?;
    report.insert("certified_fraction".into(), json!(fraction.to_string()));
    timestamp(flags, &mut report);
    emit_json(flags, report)?;
    Ok(if flags.full && fraction != Rational::one() {
        EXIT_DEFECT
    } else {
        EXIT_OK
    })
}

pub fn cmd_density(cfg: &RunConfig) -> Result<i32> {
    let flags = &cfg.flags;
    let instance = flags
        .instance
        .as_deref()
        .map(|spec| Instance::parse(spec, cfg.seed).map(|i| (spec, i)))
        .transpose()?;
    let ctx = match &instance {
        Some((_, Instance::Action(s))) => s.ctx(),
        _ => GroupCtx::free(2)?,
    };
    let instance_id = instance
        .as_ref()
        .map_or_else(|| ctx.to_string(), |(spec, _)| spec.to_string());
    let f = parse_window_spec(ctx, flags.f.as_deref().unwrap_or("std"))?;
    let degree = f.union(&f.inverse())?.len();
    let samples = flags.samples.unwrap_or(100_000);
    let mut rows = Vec::new();
    for (i, spec) in flags.rule.iter().enumerate() {
        let seed = child_seed(cfg.seed, i as u64);
        if let Some(r) = spec.strip_prefix("multiround:") {
            let rounds = r
                .parse()
                .map_err(|_| Error::Parse(format!("bad round count in rule `{spec}`")))?;
            let (_, inst) = instance.as_ref().ok_or_else(|| {
                Error::InvalidParameters("multiround rules need --instance".into())
            })?;
            let g = inst.graph()?;
            for rep in 0..flags.replicates.unwrap_or(1) {
                let run = multiround_greedy(&g, rounds, child_seed(seed, rep))?;
                let est = run.estimate.with_ids(spec.as_str(), instance_id.as_str());
                rows.push(DensityRow::new(&est, g.max_degree(), None));
            }
        } else {
            let set = parse_rule(spec, ctx, &f, cfg.window_cap)?;
            let est = estimate_density(&set, samples, seed)?
                .with_ids(spec.as_str(), instance_id.as_str());
            rows.push(DensityRow::new(&est, degree, Some(set.density())));
        }
    }
    match flags.format.unwrap_or(Format::Csv) {
        Format::Csv => emit(flags, &rows_to_csv(&rows)?)?,
        Format::Json => emit(flags, &(serde_json::to_string_pretty(&rows)? + "\n"))?,
    }
    Ok(EXIT_OK)
}

fn rule_context(cfg: &RunConfig) -> Result<GroupCtx> {
    match cfg.flags.instance.as_deref() {
        Some(spec) => Ok(Instance::parse(spec, cfg.seed)?.action()?.ctx()),
        None => {
            let path = single_rule(&cfg.flags)?
                .strip_prefix("file:")
                .ok_or_else(|| {
                    Error::InvalidParameters("give --instance or a file: rule with a ctx".into())
                })?;
            let file: crate::local_rule::ClopenSetFile =
                serde_json::from_str(&read(Path::new(path))?)
                    .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            file.ctx.ok_or_else(|| {
                Error::InvalidParameters(format!("{path} has no ctx; pass --instance"))
            })
        }
    }
}

pub fn cmd_minimize_window(cfg: &RunConfig) -> Result<i32> {
    let ctx = rule_context(cfg)?;
    let f = parse_window_spec(ctx, cfg.flags.f.as_deref().unwrap_or("std"))?;
    let set = parse_rule(single_rule(&cfg.flags)?, ctx, &f, cfg.window_cap)?;
    emit(&cfg.flags, &(minimize_window(&set).to_json() + "\n"))?;
    Ok(EXIT_OK)
}

pub fn cmd_prune(cfg: &RunConfig) -> Result<i32> {
    let ctx = rule_context(cfg)?;
    let f = parse_window_spec(ctx, cfg.flags.f.as_deref().unwrap_or("std"))?;
    let set = parse_rule(single_rule(&cfg.flags)?, ctx, &f, cfg.window_cap)?;
    emit(
        &cfg.flags,
        &(prune(&set, &f, cfg.window_cap)?.to_json() + "\n"),
    )?;
    Ok(EXIT_OK)
}

pub fn cmd_gen(cfg: &RunConfig) -> Result<i32> {
    let spec = required(&cfg.flags.instance, "instance")?;
    let text = match Instance::parse(spec, cfg.seed)? {
        Instance::Action(s) => s.to_json() + "\n",
        Instance::Graph(g) => g.to_edge_list(),
    };
    emit(&cfg.flags, &text)?;
    Ok(EXIT_OK)
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    if let Some(n) = cfg.flags.threads {
        // a pool that is already installed keeps its size
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match cfg.command {
        Command::Synth => cmd_synth(cfg),
        Command::Oracle => cmd_oracle(cfg),
        Command::Decorate => cmd_decorate(cfg),
        Command::Density => cmd_density(cfg),
        Command::MinimizeWindow => cmd_minimize_window(cfg),
        Command::Prune => cmd_prune(cfg),
        Command::Gen => cmd_gen(cfg),
    }
}

/// Parses arguments, runs the command and maps errors to exit code 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match RunConfig::from_cli(cli).and_then(|cfg| run(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
