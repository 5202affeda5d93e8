//! `exg`: trace kernels, build execution graphs, analyze and export them.
//!
//! Exit codes: 0 on success, 2 for usage and input errors, 1 when an
//! internal invariant is violated.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use exg_core::analysis::{analyze, read_report, write_report, AnalysisError, AnalysisReport};
use exg_core::builder::{build_eg, read_graph, write_graph, GraphFileError};
use exg_core::export::{graph_to_dot, quotient_to_dot};
use exg_core::trace::{read_trace, write_trace};
use exg_core::{BuildConfig, BuildError, DepPolicy, ExecutionGraph, Grain, Kernel, KernelError, KernelSpec, KindSet, TableMode, TraceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Trace { path: PathBuf, source: TraceError },
    #[error("{}: {source}", path.display())]
    Graph { path: PathBuf, source: GraphFileError },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Build(BuildError::SelfDependency(_)) | CliError::Analysis(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "exg", version, about = "Execution graphs of task-annotated kernels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an instrumented kernel and write its access trace
    Trace(TraceArgs),
    /// Build execution graphs from a trace file
    Build(BuildArgs),
    /// Analyze a graph file and write a report
    Analyze(AnalyzeArgs),
    /// Export a graph or report file
    Export(ExportArgs),
    /// Trace, build, analyze and export in one go
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, value_parser = Kernel::NAMES)]
    pub kernel: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long)]
    pub len1: Option<usize>,
    #[arg(long)]
    pub len2: Option<usize>,
    #[arg(long, value_enum)]
    pub grain: GrainArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GrainArg {
    Fine,
    Coarse,
}

impl From<GrainArg> for Grain {
    fn from(g: GrainArg) -> Self {
        match g {
            GrainArg::Fine => Grain::Fine,
            GrainArg::Coarse => Grain::Coarse,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(short = 'o', value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableArg {
    Strict,
    MultiReader,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DepArg {
    Plain,
    Ext,
}

#[derive(Debug, Clone, Args)]
pub struct BuildArgs {
    #[arg(short = 'i', value_name = "PATH")]
    pub input: PathBuf,
    #[arg(short = 'o', value_name = "PATH")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "multi-reader")]
    pub table: TableArg,
    #[arg(long, value_enum, default_value = "ext")]
    pub dep: DepArg,
    /// Comma separated subset of raw, war, waw
    #[arg(long, default_value = "raw", value_parser = parse_kinds)]
    pub kinds: KindSet,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(short = 'i', value_name = "PATH")]
    pub input: PathBuf,
    #[arg(short = 'o', value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Dot,
    Structured,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[arg(short = 'i', value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub format: Format,
    #[arg(short = 'o', value_name = "PATH")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(short = 'o', value_name = "DIR")]
    pub output: PathBuf,
}

fn parse_kinds(s: &str) -> Result<KindSet, String> {
    let kinds: KindSet = s.parse()?;
    if kinds.contains(exg_core::DependencyKind::EXT) {
        return Err("EXT edges are always kept and cannot be selected".into());
    }
    Ok(kinds)
}

impl KernelArgs {
    pub fn spec(&self) -> Result<KernelSpec, CliError> {
        let given = [
            ("n", self.n),
            ("nx", self.nx),
            ("nt", self.nt),
            ("len", self.len),
            ("len1", self.len1),
            ("len2", self.len2),
        ];
        let wanted: &[&str] = match self.kernel.as_str() {
            "madd" | "mmult" => &["n"],
            "heat" => &["nx", "nt"],
            "fft" => &["len"],
            "sw" => &["len1", "len2"],
            other => return Err(CliError::Usage(format!("unknown kernel {other}"))),
        };
        for (name, value) in given {
            match (wanted.contains(&name), value) {
                (true, None) => {
                    return Err(CliError::Usage(format!("--kernel {} requires --{name}", self.kernel)));
                }
                (false, Some(_)) => {
                    return Err(CliError::Usage(format!("--{name} does not apply to --kernel {}", self.kernel)));
                }
                _ => {}
            }
        }
        let get = |name: &str| given.iter().find(|(n, _)| *n == name).and_then(|(_, v)| *v).unwrap();
        let kernel = match self.kernel.as_str() {
            "madd" => Kernel::Madd { n: get("n") },
            "mmult" => Kernel::Mmult { n: get("n") },
            "heat" => Kernel::Heat {
                nx: get("nx"),
                nt: get("nt"),
            },
            "fft" => Kernel::Fft { len: get("len") },
            _ => Kernel::Sw {
                len1: get("len1"),
                len2: get("len2"),
            },
        };
        kernel.validate()?;
        Ok(KernelSpec::new(kernel, self.grain.into()))
    }
}

impl BuildArgs {
    pub fn config(&self) -> BuildConfig {
        let table = match self.table {
            TableArg::Strict => TableMode::StrictPaper,
            TableArg::MultiReader => TableMode::MultiReader,
        };
        let dep = match self.dep {
            DepArg::Plain => DepPolicy::Plain,
            DepArg::Ext => DepPolicy::Ext,
        };
        BuildConfig::new(table, dep, self.kinds)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_err(path))
}

/// `graph.json` becomes `graph.<trace_id>.json`.
pub fn suffixed_path(path: &Path, trace_id: u32) -> PathBuf {
    match (path.file_stem(), path.extension()) {
        (Some(stem), Some(ext)) => {
            let mut name = stem.to_os_string();
            name.push(format!(".{trace_id}."));
            name.push(ext);
            path.with_file_name(name)
        }
        _ => {
            let mut name = path.as_os_str().to_os_string();
            name.push(format!(".{trace_id}"));
            PathBuf::from(name)
        }
    }
}

pub fn cmd_trace(args: &TraceArgs) -> Result<(), CliError> {
    let trace = args.kernel.spec()?.run()?;
    let mut out = create(&args.output)?;
    write_trace(&trace, &mut out).map_err(io_err(&args.output))?;
    out.flush().map_err(io_err(&args.output))?;
    eprintln!("wrote {} records to {}", trace.len(), args.output.display());
    Ok(())
}

/// Returns the paths written, one per trace region.
pub fn cmd_build(args: &BuildArgs) -> Result<Vec<PathBuf>, CliError> {
    let trace = read_trace(open(&args.input)?).map_err(|source| CliError::Trace {
        path: args.input.clone(),
        source,
    })?;
    let graphs = build_eg(&trace, &args.config())?;
    if graphs.is_empty() {
        eprintln!("{}: trace has no records, nothing written", args.input.display());
    }
    let mut written = Vec::new();
    for (trace_id, g) in &graphs {
        let path = if graphs.len() == 1 {
            args.output.clone()
        } else {
            suffixed_path(&args.output, *trace_id)
        };
        let mut out = create(&path)?;
        write_graph(g, &mut out).map_err(|source| CliError::Graph {
            path: path.clone(),
            source,
        })?;
        out.flush().map_err(io_err(&path))?;
        eprintln!(
            "wrote graph {} ({} vertices, {} edges) to {}",
            trace_id,
            g.vertex_count(),
            g.edge_count(),
            path.display()
        );
        written.push(path);
    }
    Ok(written)
}

fn load_graph(path: &Path) -> Result<ExecutionGraph, CliError> {
    read_graph(open(path)?).map_err(|source| CliError::Graph {
        path: path.to_path_buf(),
        source,
    })
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalysisReport, CliError> {
    let g = load_graph(&args.input)?;
    let report = analyze(&g)?;
    let mut out = create(&args.output)?;
    write_report(&report, &mut out).map_err(io_err(&args.output))?;
    out.flush().map_err(io_err(&args.output))?;
    println!("{}", report.summary_line());
    Ok(report)
}

enum Document {
    Graph(ExecutionGraph),
    Report(AnalysisReport),
}

fn load_document(path: &Path) -> Result<Document, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Graph {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    if value.get("vertices").is_some() {
        return Ok(Document::Graph(load_graph(path)?));
    }
    if value.get("sym_explore").is_some() {
        let report = read_report(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("{}: malformed report: {e}", path.display())))?;
        return Ok(Document::Report(report));
    }
    Err(CliError::Usage(format!(
        "{}: neither a graph file nor an analysis report",
        path.display()
    )))
}

pub fn cmd_export(args: &ExportArgs) -> Result<(), CliError> {
    let text = match (load_document(&args.input)?, args.format) {
        (Document::Graph(g), Format::Dot) => graph_to_dot(&g),
        (Document::Report(r), Format::Dot) => quotient_to_dot(&r).ok_or_else(|| {
            CliError::Usage(format!("{}: report has no quotient to export", args.input.display()))
        })?,
        (Document::Graph(g), Format::Structured) => {
            let mut buf = Vec::new();
            write_graph(&g, &mut buf).map_err(|source| CliError::Graph {
                path: args.output.clone(),
                source,
            })?;
            String::from_utf8(buf).expect("JSON output is UTF-8")
        }
        (Document::Report(r), Format::Structured) => {
            let mut buf = Vec::new();
            write_report(&r, &mut buf).map_err(io_err(&args.output))?;
            String::from_utf8(buf).expect("JSON output is UTF-8")
        }
    };
    write_file(&args.output, &text)
}

pub const DEMO_FILES: [&str; 5] = ["trace.exg", "graph.json", "report.json", "graph.dot", "quotient.dot"];

/// Runs the individual commands on files inside the output directory.
pub fn cmd_demo(args: &DemoArgs) -> Result<(), CliError> {
    args.kernel.spec()?;
    fs::create_dir_all(&args.output).map_err(io_err(&args.output))?;
    let path = |name: &str| args.output.join(name);
    cmd_trace(&TraceArgs {
        kernel: args.kernel.clone(),
        output: path("trace.exg"),
    })?;
    let built = cmd_build(&BuildArgs {
        input: path("trace.exg"),
        output: path("graph.json"),
        table: TableArg::MultiReader,
        dep: DepArg::Ext,
        kinds: KindSet::raw(),
    })?;
    if built != [path("graph.json")] {
        return Err(CliError::Usage("kernel trace did not produce exactly one graph".into()));
    }
    cmd_analyze(&AnalyzeArgs {
        input: path("graph.json"),
        output: path("report.json"),
    })?;
    cmd_export(&ExportArgs {
        input: path("graph.json"),
        format: Format::Dot,
        output: path("graph.dot"),
    })?;
    cmd_export(&ExportArgs {
        input: path("report.json"),
        format: Format::Dot,
        output: path("quotient.dot"),
    })
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Trace(a) => cmd_trace(a),
        Command::Build(a) => cmd_build(a).map(drop),
        Command::Analyze(a) => cmd_analyze(a).map(drop),
        Command::Export(a) => cmd_export(a),
        Command::Demo(a) => cmd_demo(a),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("exg: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes() {
        assert_eq!(suffixed_path(Path::new("out/g.json"), 3), PathBuf::from("out/g.3.json"));
        assert_eq!(suffixed_path(Path::new("g"), 7), PathBuf::from("g.7"));
    }

    #[test]
    fn kernel_params_validated() {
        let parse = |args: &[&str]| {
            let mut full = vec!["exg", "trace"];
            full.extend_from_slice(args);
            full.extend_from_slice(&["-o", "x"]);
            match Cli::try_parse_from(full).unwrap().command {
                Command::Trace(t) => t.kernel.spec(),
                _ => unreachable!(),
            }
        };
        let ok = parse(&["--kernel", "heat", "--nx", "4", "--nt", "3", "--grain", "fine"]).unwrap();
        assert_eq!(ok.kernel, Kernel::Heat { nx: 4, nt: 3 });
        assert!(parse(&["--kernel", "heat", "--nx", "4", "--grain", "fine"]).is_err());
        assert!(parse(&["--kernel", "madd", "--n", "2", "--len", "4", "--grain", "fine"]).is_err());
        assert!(matches!(
            parse(&["--kernel", "fft", "--len", "6", "--grain", "coarse"]),
            Err(CliError::Kernel(KernelError::InvalidLength(6)))
        ));
    }

    #[test]
    fn kinds_flag() {
        assert_eq!(parse_kinds("raw,waw").unwrap().to_string(), "RAW,WAW");
        assert!(parse_kinds("").is_err());
        assert!(parse_kinds("ext").is_err());
        assert!(parse_kinds("raw,foo").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Analysis(AnalysisError::InvariantViolation(String::new())).exit_code(), EXIT_INTERNAL);
        assert_eq!(CliError::Usage(String::new()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Kernel(KernelError::InvalidLength(3)).exit_code(), EXIT_USAGE);
    }
}
