//! Command implementations for the `morse-merge` binary.
//!
//! Every command is a thin shell over library calls and reports through an
//! exit code: 0 on success, 1 on a domain failure, 2 on I/O or parse errors.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use morse_merge::io::{self as mio, Artifact, IoError};
use morse_merge::merge_tree::{validate_merge_tree, ChiralMergeTree};
use morse_merge::morse::{ChiralityMode, HomologicalSequence};
use morse_merge::oracle::{self, EnumerationOptions, OracleError};
use morse_merge::realize::{
    self, homological_order, j_sequence, RealizationResult, RealizeError, RealizeOptions,
};
use morse_merge::SimpleGraph;

pub const SEED_ENV: &str = "MORSE_MERGE_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "morse-merge",
    version,
    about = "Merge trees, homological sequences and discrete Morse functions on trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a merge-tree or function file (kind detected from its shape).
    Validate { path: PathBuf },
    /// Print the sublevel order, or the homological order for a sequence.
    Order {
        tree: PathBuf,
        #[arg(long)]
        homology: Option<PathBuf>,
    },
    /// Print the sequence induced by realizing a tree along its sublevel order.
    Jseq { tree: PathBuf },
    /// Realize a merge tree (and optionally a sequence) on a path.
    Realize {
        tree: PathBuf,
        #[arg(long)]
        homology: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Skip the dominance check and let the construction fail where it fails.
        #[arg(long)]
        no_dominance_check: bool,
    },
    /// Compute the homological sequence and merge tree induced by a function.
    Induce {
        dmf: PathBuf,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        seq: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Oriented)]
        mode: Mode,
    },
    /// Realize, induce and compare against the inputs.
    Roundtrip {
        tree: Option<PathBuf>,
        #[arg(long)]
        homology: Option<PathBuf>,
        /// Instead of a file, check this many random (tree, sequence) pairs.
        #[arg(long)]
        random: Option<usize>,
        /// Base seed for --random; defaults to $MORSE_MERGE_SEED or 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest node count for --random.
        #[arg(long, default_value_t = 31)]
        max_nodes: usize,
    },
    /// Enumerate every function on a small tree and tabulate the results.
    Enumerate {
        tree: Option<PathBuf>,
        /// Use the path with this many cells instead of a graph file.
        #[arg(long)]
        path_cells: Option<usize>,
        #[arg(long)]
        atlas: Option<PathBuf>,
        #[arg(long)]
        conjecture_report: Option<PathBuf>,
        #[arg(long, default_value_t = oracle::DEFAULT_MAX_CELLS)]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Oriented,
    Elder,
}

impl From<Mode> for ChiralityMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Oriented => ChiralityMode::Oriented,
            Mode::Elder => ChiralityMode::Elder,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Input(String),
    /// Exit code 1.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Json(_) | IoError::UnknownShape | IoError::Value(_) | IoError::CellKey(_) => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<RealizeError> for CliError {
    fn from(e: RealizeError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<morse_merge::morse::MorseError> for CliError {
    fn from(e: morse_merge::morse::MorseError) -> Self {
        CliError::Domain(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Input(format!("stdout: {e}")))
}

pub fn load_tree(path: &Path) -> Result<ChiralMergeTree, CliError> {
    Ok(mio::tree_from_json(&read(path)?)?)
}

pub fn load_sequence(path: &Path) -> Result<HomologicalSequence, CliError> {
    Ok(mio::sequence_from_json(&read(path)?)?)
}

/// Dispatches a parsed command line; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Validate { path } => cmd_validate(&path, out),
        Command::Order { tree, homology } => cmd_order(&tree, homology.as_deref(), out),
        Command::Jseq { tree } => cmd_jseq(&tree, out),
        Command::Realize {
            tree,
            homology,
            out: out_path,
            dot,
            no_dominance_check,
        } => cmd_realize(
            &tree,
            homology.as_deref(),
            out_path.as_deref(),
            dot.as_deref(),
            !no_dominance_check,
            out,
        ),
        Command::Induce {
            dmf,
            tree,
            seq,
            mode,
        } => cmd_induce(&dmf, tree.as_deref(), seq.as_deref(), mode.into(), out),
        Command::Roundtrip {
            tree,
            homology,
            random,
            seed,
            max_nodes,
        } => match (tree, random) {
            (Some(tree), None) => cmd_roundtrip(&tree, homology.as_deref(), out),
            (None, Some(count)) => {
                let seed = seed.or_else(seed_from_env).unwrap_or(0);
                cmd_roundtrip_random(count, seed, max_nodes, out)
            }
            _ => Err(CliError::Input(
                "roundtrip takes either a tree file or --random".into(),
            )),
        },
        Command::Enumerate {
            tree,
            path_cells,
            atlas,
            conjecture_report,
            bound,
            jobs,
        } => cmd_enumerate(
            tree.as_deref(),
            path_cells,
            atlas.as_deref(),
            conjecture_report.as_deref(),
            bound,
            jobs,
            out,
        ),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn seed_from_env() -> Option<u64> {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let violations: Vec<String> = match mio::parse_artifact(&read(path)?) {
        Ok(Artifact::MergeTree(raw)) => match validate_merge_tree(&raw) {
            Ok(()) => Vec::new(),
            Err(v) => v.iter().map(|x| x.to_string()).collect(),
        },
        Ok(Artifact::Dmf(f)) => match f.validate() {
            Ok(()) => Vec::new(),
            Err(v) => v.iter().map(|x| x.to_string()).collect(),
        },
        // Structurally broken functions (unknown cells, missing values) are invalid, not unparsable.
        Err(IoError::Morse(e)) => vec![e.to_string()],
        Err(IoError::Graph(e)) => vec![e.to_string()],
        Err(e) => return Err(e.into()),
    };
    if violations.is_empty() {
        emit(out, "ok\n")?;
        Ok(0)
    } else {
        for v in violations {
            emit(out, &format!("{v}\n"))?;
        }
        Ok(1)
    }
}

/// `position<TAB>node-id<TAB>leaf|inner` lines.
pub fn format_order(tree: &ChiralMergeTree, order: &morse_merge::NodeOrder) -> String {
    let mut s = String::new();
    for (p, &idx) in order.sequence().iter().enumerate() {
        let kind = if tree.is_leaf(idx) { "leaf" } else { "inner" };
        s.push_str(&format!("{p}\t{}\t{kind}\n", tree.id(idx)));
    }
    s
}

pub fn cmd_order(
    tree: &Path,
    homology: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let t = load_tree(tree)?;
    let order = match homology {
        None => t.sublevel_order(),
        Some(p) => homological_order(&t, &load_sequence(p)?)?.order,
    };
    emit(out, &format_order(&t, &order))?;
    Ok(0)
}

pub fn cmd_jseq(tree: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let t = load_tree(tree)?;
    emit(
        out,
        &format!("{}\n", mio::sequence_to_json(&j_sequence(&t))),
    )?;
    Ok(0)
}

pub fn realize_files(
    tree: &ChiralMergeTree,
    homology: Option<&HomologicalSequence>,
    check_dominance: bool,
) -> Result<RealizationResult, CliError> {
    Ok(match homology {
        None => realize::realize_path(tree),
        Some(b) => realize::realize_with_options(tree, b, RealizeOptions { check_dominance })?,
    })
}

pub fn cmd_realize(
    tree: &Path,
    homology: Option<&Path>,
    out_path: Option<&Path>,
    dot: Option<&Path>,
    check_dominance: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let t = load_tree(tree)?;
    let b = homology.map(load_sequence).transpose()?;
    let r = realize_files(&t, b.as_ref(), check_dominance)?;
    let json = mio::realization_to_json_pretty(&r) + "\n";
    match out_path {
        Some(p) => write_file(p, &json)?,
        None => emit(out, &json)?,
    }
    if let Some(p) = dot {
        write_file(p, &mio::dmf_to_dot(&r.dmf, Some(&r.path_order)))?;
    }
    Ok(0)
}

pub fn cmd_induce(
    dmf: &Path,
    tree_out: Option<&Path>,
    seq_out: Option<&Path>,
    mode: ChiralityMode,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let f = mio::dmf_from_json(&read(dmf)?)?;
    let seq = mio::sequence_to_json(&f.homological_sequence()?) + "\n";
    let tree = mio::tree_to_json(&f.induced_merge_tree(mode)?) + "\n";
    match seq_out {
        Some(p) => write_file(p, &seq)?,
        None => emit(out, &seq)?,
    }
    match tree_out {
        Some(p) => write_file(p, &tree)?,
        None => emit(out, &tree)?,
    }
    Ok(0)
}

/// Outcome of realizing and then inducing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundtripDiff {
    pub tree_expected: String,
    pub tree_induced: String,
    pub seq_expected: HomologicalSequence,
    pub seq_induced: HomologicalSequence,
}

impl RoundtripDiff {
    pub fn matches(&self) -> bool {
        self.tree_expected == self.tree_induced && self.seq_expected == self.seq_induced
    }
}

pub fn roundtrip(
    tree: &ChiralMergeTree,
    homology: Option<&HomologicalSequence>,
) -> Result<RoundtripDiff, CliError> {
    let expected = homology.cloned().unwrap_or_else(|| j_sequence(tree));
    let r = realize_files(tree, homology, true)?;
    let induced_tree = r.dmf.induced_merge_tree(ChiralityMode::Oriented)?;
    let induced_seq = r.dmf.homological_sequence()?;
    Ok(RoundtripDiff {
        tree_expected: tree.canonical_encoding(),
        tree_induced: induced_tree.canonical_encoding(),
        seq_expected: expected,
        seq_induced: induced_seq,
    })
}

fn report_diff(diff: &RoundtripDiff, out: &mut dyn Write) -> Result<(), CliError> {
    if diff.tree_expected != diff.tree_induced {
        emit(
            out,
            &format!(
                "tree: expected {} got {}\n",
                diff.tree_expected, diff.tree_induced
            ),
        )?;
    }
    if diff.seq_expected != diff.seq_induced {
        emit(
            out,
            &format!(
                "sequence: expected {} got {}\n",
                diff.seq_expected, diff.seq_induced
            ),
        )?;
    }
    Ok(())
}

pub fn cmd_roundtrip(
    tree: &Path,
    homology: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let t = load_tree(tree)?;
    let b = homology.map(load_sequence).transpose()?;
    let diff = roundtrip(&t, b.as_ref())?;
    if diff.matches() {
        emit(out, "ok\n")?;
        Ok(0)
    } else {
        report_diff(&diff, out)?;
        Ok(1)
    }
}

pub fn cmd_roundtrip_random(
    count: usize,
    seed: u64,
    max_nodes: usize,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let slots = max_nodes.max(1).div_ceil(2);
    let mut failures = 0;
    for i in 0..count as u64 {
        let s = seed.wrapping_add(i);
        let n = 2 * (s as usize % slots) + 1;
        let t = oracle::random_merge_tree(n, s)?;
        let b = oracle::random_dominating_sequence(&t, s)?;
        let diff = roundtrip(&t, Some(&b))?;
        if !diff.matches() {
            failures += 1;
            emit(out, &format!("seed {s} failed\n"))?;
            report_diff(&diff, out)?;
        }
    }
    emit(
        out,
        &format!("{count} pairs, {failures} failures (base seed {seed})\n"),
    )?;
    Ok(if failures == 0 { 0 } else { 1 })
}

pub fn cmd_enumerate(
    tree: Option<&Path>,
    path_cells: Option<usize>,
    atlas_out: Option<&Path>,
    report_out: Option<&Path>,
    bound: usize,
    jobs: usize,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let graph = match (tree, path_cells) {
        (Some(p), None) => mio::graph_from_json(&read(p)?)?,
        (None, Some(cells)) if cells % 2 == 1 => SimpleGraph::path(cells.div_ceil(2) as u32),
        (None, Some(cells)) => {
            return Err(CliError::Domain(format!(
                "a path has an odd number of cells, got {cells}"
            )))
        }
        _ => {
            return Err(CliError::Input(
                "enumerate takes either a graph file or --path-cells".into(),
            ))
        }
    };
    let options = EnumerationOptions {
        max_cells: bound,
        elder_chirality: false,
    };
    let atlas = oracle::realizable_atlas(&graph, options, jobs)?;
    let report = oracle::conjecture_report(&atlas);
    if let Some(p) = atlas_out {
        write_file(p, &mio::atlas_to_ndjson(&atlas))?;
    }
    if let Some(p) = report_out {
        write_file(p, &(mio::report_to_json(&report) + "\n"))?;
    }
    emit(
        out,
        &format!(
            "cells\t{}\nfunctions\t{}\nkeys\t{}\nviolations\t{}\nall_critical_violations\t{}\n",
            graph.cell_count(),
            atlas.total,
            atlas.entries.len(),
            report.violation_count,
            report.all_critical_violation_count
        ),
    )?;
    for (t, s) in report.counterexamples() {
        emit(
            out,
            &format!(
                "counterexample\t{}\t{}\tJ={}\n",
                t.tree, s.sequence, t.j_sequence
            ),
        )?;
    }
    Ok(0)
}
