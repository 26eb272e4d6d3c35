//! The `defcol` command line.
//!
//! Exit codes: 0 colorable or verified, 1 not colorable or refuted, 2 usage
//! or I/O error, 3 timeout.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{degeneracy, girth, is_planar, mad, n3};
use crate::gadgets::{catalog, gadget_e_family, gadget_g4, gadget_g5, gadget_g7, gadget_h_kj, Gadget, GadgetError};
use crate::graph::{parse_graph, serialize_graph, Graph};
use crate::reductions::{
    build_e_ab, e_ab_manifest, reduce_11, reduce_3col, reduce_k0, reduce_kj, ForcingGadget, Mode, ReductionError,
    ReductionOutput,
};
use crate::solver::{
    forced_states, minimize_noncolorable, parse_assumptions, solve, Assumption, ColorSpec, MinimizeError, SolveError,
    SolveOptions, Verdict,
};
use crate::verify::{
    parse_manifest, parse_replay, replay_proof, verify_claim, Outcome, ReplayError, ReplayOutcome, VerifyError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "defcol", version, about = "Exact defective coloring workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct SolveFlags {
    /// Wall-clock budget in milliseconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Worker threads; certificates may then differ between runs.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

impl SolveFlags {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            budget: self.timeout.map(Duration::from_millis),
            threads: self.parallel,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Girth, maximum average degree, degeneracy, n3 and planarity.
    Analyze { file: PathBuf },
    /// Decides colorability, or lists the states of one vertex.
    Solve {
        #[arg(long)]
        spec: ColorSpec,
        /// `v=c[:b]`: vertex `v` gets color `c` with at most `b` neighbors
        /// of that color.
        #[arg(long)]
        assume: Vec<String>,
        /// Prints every `(color, defect)` state of this vertex instead.
        #[arg(long)]
        forced: Option<String>,
        #[command(flatten)]
        flags: SolveFlags,
        file: PathBuf,
    },
    /// Writes a gadget family's graphs and manifests.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Checks every claim of a manifest, then an optional replay script.
    Verify {
        graph: PathBuf,
        manifest: PathBuf,
        #[arg(long)]
        replay: Option<PathBuf>,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Applies a reduction to INPUT and prints the resulting graph.
    Reduce {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Gadget graph: terminal `x2` for k0; `u`, `v`, `u'`, `v'` for kj
        /// and for 11 (or `a`, `b` of a ready E_ab); `a`, `b` for 3col.
        #[arg(long)]
        gadget: PathBuf,
        /// Output graph file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Trace sidecar; defaults to OUT with extension `.trace`, or stderr
        /// without OUT.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        flags: SolveFlags,
        input: PathBuf,
    },
    /// Prints a minimal non-colorable subgraph.
    Minimize {
        #[arg(long)]
        spec: ColorSpec,
        #[command(flatten)]
        flags: SolveFlags,
        file: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    G4,
    G5,
    G7,
    #[value(name = "H")]
    H,
    #[value(name = "E")]
    E,
    #[value(name = "Eprime")]
    Eprime,
    #[value(name = "Epp")]
    Epp,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    K0,
    #[value(name = "11")]
    Eleven,
    Kj,
    #[value(name = "3col")]
    ThreeCol,
}

/// Failure of a command, mapped to an exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn solve_failure(e: &SolveError) -> Failure {
    match e {
        SolveError::Timeout { .. } => Failure {
            code: EXIT_TIMEOUT,
            message: e.to_string(),
        },
        _ => usage(e),
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        solve_failure(&e)
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Solve(s) => solve_failure(&s),
            other => usage(other),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Solve(s) => solve_failure(&s),
            ReductionError::Verify(v) => v.into(),
            other => usage(other),
        }
    }
}

impl From<GadgetError> for Failure {
    fn from(e: GadgetError) -> Self {
        usage(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        usage(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let bytes = fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_graph(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Analyze { file } => analyze(&read_graph(&file)?, out),
        Command::Solve {
            spec,
            assume,
            forced,
            flags,
            file,
        } => {
            let g = read_graph(&file)?;
            let mut named = Vec::new();
            for a in &assume {
                named.extend(parse_assumptions(a).map_err(usage)?);
            }
            let assumptions: Vec<Assumption> = named
                .iter()
                .map(|a| a.resolve(&g).map_err(usage))
                .collect::<Result<_, _>>()?;
            let opts = flags.options();
            if let Some(name) = forced {
                let v = g.resolve(&name).map_err(usage)?;
                let states = forced_states(&g, &spec, &assumptions, v, &opts)?;
                writeln!(out, "states {name} {}", states.len())?;
                for (c, d) in &states {
                    writeln!(out, "state {} {d}", c + 1)?;
                }
                return Ok(if states.is_empty() { EXIT_NO } else { EXIT_OK });
            }
            match solve(&g, &spec, &assumptions, &opts)? {
                Verdict::Sat(c) => {
                    writeln!(out, "sat")?;
                    out.write_all(c.certificate_lines(&g).as_bytes())?;
                    Ok(EXIT_OK)
                }
                Verdict::Unsat => {
                    writeln!(out, "unsat")?;
                    Ok(EXIT_NO)
                }
            }
        }
        Command::Gen { family, k, j, out: dir } => generate(family, k, j, &dir, out),
        Command::Verify {
            graph,
            manifest,
            replay,
            flags,
        } => verify(&graph, &manifest, replay.as_deref(), &flags.options(), out),
        Command::Reduce {
            which,
            k,
            j,
            gadget,
            out: out_path,
            trace,
            flags,
            input,
        } => {
            let instance = read_graph(&input)?;
            let g = read_graph(&gadget)?;
            let result = reduce(which, k, j, g, &instance, &flags.options())?;
            let text = serialize_graph(&result.graph);
            match &out_path {
                Some(p) => write_file(p, &text)?,
                None => out.write_all(text.as_bytes())?,
            }
            let trace_path = trace.or_else(|| out_path.as_ref().map(|p| p.with_extension("trace")));
            match trace_path {
                Some(p) => write_file(&p, &result.trace_text())?,
                None => err.write_all(result.trace_text().as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Minimize { spec, flags, file } => {
            let g = read_graph(&file)?;
            match minimize_noncolorable(&g, &spec, &flags.options()) {
                Ok(h) => {
                    out.write_all(serialize_graph(&h).as_bytes())?;
                    Ok(EXIT_OK)
                }
                Err(MinimizeError::Colorable(s)) => {
                    writeln!(out, "colorable {s}")?;
                    Ok(EXIT_NO)
                }
                Err(MinimizeError::Solve(e)) => Err(e.into()),
                Err(e) => Err(usage(e)),
            }
        }
    }
}

fn analyze(g: &Graph, out: &mut dyn Write) -> Result<i32, Failure> {
    writeln!(out, "vertices {}", g.vertex_count())?;
    writeln!(out, "edges {}", g.edge_count())?;
    match girth(g).length() {
        Some(l) => writeln!(out, "girth {l}")?,
        None => writeln!(out, "girth infinite")?,
    }
    if g.is_empty() {
        writeln!(out, "mad 0")?;
    } else {
        writeln!(out, "mad {}", mad(g).mad)?;
    }
    writeln!(out, "degeneracy {}", degeneracy(g).value)?;
    writeln!(out, "n3 {}", n3(g))?;
    writeln!(out, "planar {}", is_planar(g).is_planar())?;
    Ok(EXIT_OK)
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect::<String>()
        .trim_end_matches('_')
        .to_string()
}

fn generate(family: Family, k: u32, j: u32, dir: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let gadgets: Vec<Gadget> = match family {
        Family::H => vec![gadget_h_kj(k, j)],
        Family::G4 => vec![gadget_h_kj(k, j), gadget_g4(k, j)?],
        Family::G5 => {
            let (h, s, g) = gadget_g5()?;
            vec![h, s, g]
        }
        Family::G7 => {
            let (t, s, h, g) = gadget_g7()?;
            vec![t, s, h, g]
        }
        Family::E | Family::Eprime | Family::Epp => {
            let (e, ep, epp) = gadget_e_family(k)?;
            vec![match family {
                Family::E => e,
                Family::Eprime => ep,
                _ => epp,
            }]
        }
    };
    fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    for gd in &gadgets {
        let stem = file_stem(&gd.name);
        let gpath = dir.join(format!("{stem}.graph"));
        let mpath = dir.join(format!("{stem}.manifest"));
        let mut text = format!("# provenance: {}\n", gd.provenance);
        text.push_str(&serialize_graph(&gd.graph));
        write_file(&gpath, &text)?;
        write_file(&mpath, &gd.manifest.to_string())?;
        writeln!(out, "wrote {} {}", gpath.display(), mpath.display())?;
    }
    Ok(EXIT_OK)
}

fn verify(
    graph: &Path,
    manifest: &Path,
    replay: Option<&Path>,
    opts: &SolveOptions,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let g = read_graph(graph)?;
    let m = parse_manifest(&read(manifest)?).map_err(|e| usage(format!("{}: {e}", manifest.display())))?;
    m.bind(&g).map_err(usage)?;
    let mut refuted = false;
    let mut timed_out = false;
    for claim in &m.claims {
        match verify_claim(&g, claim, opts) {
            Ok(Outcome::Verified { .. }) => writeln!(out, "verified {claim}")?,
            Ok(Outcome::Refuted { reason, counterexample }) => {
                refuted = true;
                writeln!(out, "refuted {claim} -- {reason}")?;
                if let Some(c) = counterexample {
                    out.write_all(c.certificate_lines(&g).as_bytes())?;
                }
            }
            Err(VerifyError::Solve(SolveError::Timeout { .. })) => {
                timed_out = true;
                writeln!(out, "timeout {claim}")?;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(path) = replay {
        let script = parse_replay(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let name = script.name.as_deref().unwrap_or("script");
        let mut gadgets = catalog()?;
        if let Some(name) = &m.gadget {
            gadgets.insert(name.clone(), g.clone());
        }
        match replay_proof(&script, &gadgets, opts) {
            Ok(ReplayOutcome::Verified(steps)) => {
                for (label, _) in &steps {
                    writeln!(out, "step {label} verified")?;
                }
                writeln!(out, "replay {} verified", name)?;
            }
            Ok(ReplayOutcome::FailedStep { label, evidence, .. }) => {
                refuted = true;
                writeln!(out, "step {label} failed -- {evidence}")?;
                writeln!(out, "replay {} refuted", name)?;
            }
            Err(ReplayError::Verify {
                source: VerifyError::Solve(SolveError::Timeout { .. }),
                ..
            }) => {
                timed_out = true;
                writeln!(out, "replay {} timeout", name)?;
            }
            Err(e) => return Err(usage(e)),
        }
    }
    Ok(if refuted {
        EXIT_NO
    } else if timed_out {
        EXIT_TIMEOUT
    } else {
        EXIT_OK
    })
}

fn reduce(
    which: Which,
    k: u32,
    j: u32,
    gadget: Graph,
    instance: &Graph,
    opts: &SolveOptions,
) -> Result<ReductionOutput, Failure> {
    let spec = |d: Vec<u32>| ColorSpec::new(d).map_err(usage);
    Ok(match which {
        Which::K0 => {
            let fg = ForcingGadget::new(gadget, spec(vec![k, 0])?, Mode::Path, opts)?;
            reduce_k0(instance, k, &fg)?
        }
        Which::Kj => {
            let fg = ForcingGadget::new(gadget, spec(vec![k, j])?, Mode::Pendant, opts)?;
            reduce_kj(instance, k, j, &fg)?
        }
        Which::Eleven => {
            let e_ab = if gadget.terminal("a").is_some() && gadget.terminal("b").is_some() {
                Gadget::new("E_ab", gadget, e_ab_manifest(), "read from file")?
            } else {
                let fg = ForcingGadget::new(gadget, spec(vec![1, 1])?, Mode::Pendant, opts)?;
                build_e_ab(&fg, opts)?
            };
            reduce_11(instance, &e_ab, opts)?
        }
        Which::ThreeCol => {
            let manifest = format!("gadget Epp\nproperty forall {k},{k},1 pattern same(a,b) => false\n");
            let epp = Gadget::new("Epp", gadget, &manifest, "read from file")?;
            reduce_3col(instance, k, &epp, opts)?
        }
    })
}
