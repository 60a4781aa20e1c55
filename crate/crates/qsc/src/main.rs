//! Command-line surface for constructing Blokhuis-Haemers designs,
//! verifying designs and orbit-matrix equations, deriving codes from
//! incidence and orbit matrices, and reproducing the bundled workflows.
//!
//! Exit codes: 0 success, 1 mathematical verification failure, 2
//! input/usage error.

mod reproduce;
mod util;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qsc_core::design::{
    blokhuis_haemers, intersection_profile, read_inc, verify_design, write_inc,
};
use qsc_core::error::Error;
use qsc_core::f2code::{analyze, code_from_incidence, read_gen, write_gen, CodeReport};
use qsc_core::orbit::{
    dedup_by_fixed_structure, find_involutions, induced_action, nonfixed_code, orbit_matrix,
    read_om, read_perm, verify_om, write_om, Axis, QsDesignInfo, SemilinearMap,
};
use qsc_core::srg::{graph_to_symmetric_design, srg_from_code, write_graph};
use qsc_core::Result;

use util::{enum_guard, write_json, RunManifest};

#[derive(Parser)]
#[command(name = "qsc", version, about = "Quasi-symmetric designs of Blokhuis-Haemers type and their self-orthogonal codes")]
struct Cli {
    /// Worker threads for the parallel sweeps (0 = all cores).
    #[arg(long, global = true, env = "QSC_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a design and write it as a .inc file.
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
    },
    /// Design-level operations.
    Design {
        #[command(subcommand)]
        what: DesignCmd,
    },
    /// Code-level operations.
    Code {
        #[command(subcommand)]
        what: CodeCmd,
    },
    /// Enumerate the affine semilinear involutions preserving a design.
    Involutions {
        inc: PathBuf,
        /// Keep one representative per (fixed points, fixed blocks) class.
        #[arg(long)]
        dedup: bool,
        /// Write the listing as JSON.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compute an orbit matrix from a point permutation and verify its
    /// equations, or derive codes from a stored orbit matrix.
    Orbitmat(OrbitmatCmd),
    /// Build the strongly regular graph of a projective two-weight code.
    Srg {
        #[command(subcommand)]
        what: SrgCmd,
    },
    /// Construct the q=4 design and analyze its incidence codes.
    Example13 {
        #[arg(long, default_value_t = 4)]
        q: u16,
        /// Directory for the .inc file and JSON reports.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Full per-involution orbit-matrix study with a table-style summary.
    Example14 {
        inc: PathBuf,
        #[arg(long)]
        report_dir: PathBuf,
        /// Analyze one representative per (f, h) class instead of all.
        #[arg(long)]
        dedup: bool,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// The quasi-symmetric 2-(q^3, q^2(q-1)/2, q(q^3-q^2-2)/4) design.
    Bh {
        #[arg(long)]
        q: u16,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DesignCmd {
    /// Verify the t-design property and report parameters.
    Verify {
        inc: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Span the binary code of a block-by-point incidence matrix.
    FromIncidence {
        inc: PathBuf,
        /// Span the point-by-block matrix instead.
        #[arg(long)]
        transpose: bool,
        /// Write the JSON report here as well as to stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Write the generator matrix as a .gen file.
        #[arg(long)]
        gen_out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct OrbitmatCmd {
    #[command(subcommand)]
    sub: Option<OrbitmatSub>,
    /// Design file (.inc) for orbit-matrix computation.
    inc: Option<PathBuf>,
    /// Point permutation (.perm) generating the group.
    #[arg(long)]
    perm: Option<PathBuf>,
    /// Write the orbit matrix as a .om file.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OrbitmatSub {
    /// Span a code from the non-fixed part of a stored orbit matrix.
    Code {
        om: PathBuf,
        #[arg(long, value_parser = parse_axis)]
        axis: Axis,
        #[arg(long, default_value_t = 2)]
        p: u8,
        /// Keep coordinates at which every spanning vector vanishes.
        #[arg(long)]
        keep_zero_coords: bool,
        /// Design file supplying the divisibility-hypothesis numbers.
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        gen_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SrgCmd {
    /// Codewords as vertices, adjacent at distance w1.
    FromCode {
        gen: PathBuf,
        /// Write the graph in adjacency-list format.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// When lambda = mu, write the derived symmetric design.
        #[arg(long)]
        design_out: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn parse_axis(s: &str) -> std::result::Result<Axis, String> {
    match s {
        "columns" => Ok(Axis::Columns),
        "rows" => Ok(Axis::Rows),
        other => Err(format!("axis must be 'columns' or 'rows', got '{other}'")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Construct {
            what: ConstructCmd::Bh { q, out, manifest },
        } => construct_bh(q, &out, manifest.as_deref()),
        Command::Design {
            what: DesignCmd::Verify { inc, t },
        } => design_verify(&inc, t),
        Command::Code {
            what:
                CodeCmd::FromIncidence {
                    inc,
                    transpose,
                    out,
                    gen_out,
                },
        } => code_from_inc(&inc, transpose, out.as_deref(), gen_out.as_deref()),
        Command::Involutions { inc, dedup, out } => involutions(&inc, dedup, out.as_deref()),
        Command::Orbitmat(cmd) => orbitmat(cmd),
        Command::Srg {
            what:
                SrgCmd::FromCode {
                    gen,
                    graph,
                    design_out,
                    out,
                },
        } => srg_cmd(&gen, graph.as_deref(), design_out.as_deref(), out.as_deref()),
        Command::Example13 { q, dir } => reproduce::example13(q, dir.as_deref()).map(|_| ()),
        Command::Example14 {
            inc,
            report_dir,
            dedup,
        } => reproduce::example14(&inc, &report_dir, dedup).map(|_| ()),
    }
}

fn construct_bh(q: u16, out: &Path, manifest: Option<&Path>) -> Result<()> {
    let design = blokhuis_haemers(q)?;
    let params = verify_design(&design, 2)?;
    let profile = intersection_profile(&design)?;
    write_inc(&design, out)?;
    println!(
        "2-({},{},{}) design: b={} r={} intersection numbers {:?}",
        params.v, params.k, params.lambda, params.b, params.r, profile.numbers
    );
    println!("wrote {}", out.display());
    if let Some(mpath) = manifest {
        let mut m = RunManifest::new();
        m.record_output(out);
        m.write(mpath)?;
    }
    Ok(())
}

fn design_verify(inc_path: &Path, t: usize) -> Result<()> {
    let design = read_inc(inc_path)?;
    let params = verify_design(&design, t)?;
    println!(
        "{}-({},{},{}) design: b={} r={}",
        params.t, params.v, params.k, params.lambda, params.b, params.r
    );
    if design.b() >= 2 {
        let profile = intersection_profile(&design)?;
        match profile.qs_pair {
            Some((x, y)) => println!("quasi-symmetric with (x,y) = ({x},{y})"),
            None => println!("intersection numbers {:?}", profile.numbers),
        }
    }
    if design.has_repeated_blocks() {
        println!("note: the block multiset contains repeated blocks");
    }
    Ok(())
}

fn code_from_inc(
    inc_path: &Path,
    transpose: bool,
    out: Option<&Path>,
    gen_out: Option<&Path>,
) -> Result<()> {
    let design = read_inc(inc_path)?;
    let code = code_from_incidence(&design, transpose);
    let report = analyze(&code, enum_guard())?;
    let text = serde_json::to_string_pretty(&report).expect("report serialization");
    println!("{text}");
    if let Some(path) = out {
        write_json(path, &report)?;
    }
    if let Some(path) = gen_out {
        write_gen(&code, path)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct InvolutionLine {
    f: usize,
    h: usize,
    map: SemilinearMap,
}

fn involutions(inc_path: &Path, dedup: bool, out: Option<&Path>) -> Result<()> {
    let design = read_inc(inc_path)?;
    let q = match design.v() {
        64 => 4u16,
        512 => 8,
        v => {
            return Err(Error::UnsupportedParameter(format!(
                "v={v} is not q^3 for q in {{4, 8}}"
            )))
        }
    };
    let found = find_involutions(q, &design)?;
    let mut by_sig: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for inv in &found {
        *by_sig.entry((inv.fixed.f, inv.fixed.h)).or_default() += 1;
    }
    println!("involutions preserving the design: {}", found.len());
    for ((f, h), count) in &by_sig {
        println!("  f={f} h={h}: {count}");
    }
    let listing: Vec<InvolutionLine> = if dedup {
        dedup_by_fixed_structure(&found)
            .into_iter()
            .map(|inv| InvolutionLine {
                f: inv.fixed.f,
                h: inv.fixed.h,
                map: inv.map.clone(),
            })
            .collect()
    } else {
        found
            .iter()
            .map(|inv| InvolutionLine {
                f: inv.fixed.f,
                h: inv.fixed.h,
                map: inv.map.clone(),
            })
            .collect()
    };
    if let Some(path) = out {
        write_json(path, &listing)?;
    }
    Ok(())
}

fn orbitmat(cmd: OrbitmatCmd) -> Result<()> {
    match cmd.sub {
        Some(OrbitmatSub::Code {
            om,
            axis,
            p,
            keep_zero_coords,
            design,
            out,
            gen_out,
        }) => orbitmat_code(
            &om,
            axis,
            p,
            keep_zero_coords,
            design.as_deref(),
            out.as_deref(),
            gen_out.as_deref(),
        ),
        None => {
            let (Some(inc), Some(perm)) = (cmd.inc.as_deref(), cmd.perm.as_deref()) else {
                return Err(Error::UnsupportedParameter(
                    "orbitmat needs <INC> --perm <PERM>, or the 'code' subcommand".into(),
                ));
            };
            orbitmat_compute(inc, perm, cmd.out.as_deref())
        }
    }
}

fn orbitmat_compute(inc_path: &Path, perm_path: &Path, out: Option<&Path>) -> Result<()> {
    let design = read_inc(inc_path)?;
    let params = verify_design(&design, 2)?;
    let perm = read_perm(perm_path)?;
    let action = induced_action(&design, perm)?;
    let fixed = action.fixed_structure();
    let om = orbit_matrix(&design, &[action])?;
    println!(
        "orbit matrix: {} point orbits x {} block orbits, f={} h={}",
        om.m(),
        om.n(),
        fixed.f,
        fixed.h
    );
    let report = verify_om(&om, &params)?;
    if let Some(path) = out {
        write_om(&om, path)?;
        println!("wrote {}", path.display());
    }
    if report.all_pass() {
        println!("orbit-matrix equations: all pass");
        Ok(())
    } else {
        Err(Error::TheoremCheck(format!(
            "orbit-matrix equation violations: bounds {:?} row sums {:?} column sums {:?} quadratic {:?}",
            report.bound_violations,
            report.row_sum_violations,
            report.col_sum_violations,
            report.quadratic_violations
        )))
    }
}

#[derive(Serialize)]
struct OrbitmatCodeOut {
    axis: String,
    p: u8,
    ambient_length: usize,
    effective_length: usize,
    dropped_coords: Vec<usize>,
    hypothesis_notes: Vec<String>,
    report: CodeReport,
}

fn orbitmat_code(
    om_path: &Path,
    axis: Axis,
    p: u8,
    keep_zero_coords: bool,
    design_path: Option<&Path>,
    out: Option<&Path>,
    gen_out: Option<&Path>,
) -> Result<()> {
    let om = read_om(om_path)?;
    let info = match design_path {
        Some(path) => {
            let design = read_inc(path)?;
            let params = verify_design(&design, 2)?;
            let profile = intersection_profile(&design)?;
            let Some((x, y)) = profile.qs_pair else {
                return Err(Error::NotQuasiSymmetric(profile.numbers));
            };
            Some(QsDesignInfo { params, x, y })
        }
        None => None,
    };
    let result = nonfixed_code(&om, axis, p, !keep_zero_coords, info.as_ref())?;
    let report = analyze(&result.code, enum_guard())?;
    let output = OrbitmatCodeOut {
        axis: match axis {
            Axis::Columns => "columns".into(),
            Axis::Rows => "rows".into(),
        },
        p,
        ambient_length: result.ambient_len,
        effective_length: result.effective_len,
        dropped_coords: result.dropped_coords,
        hypothesis_notes: result.hypothesis_notes,
        report,
    };
    let text = serde_json::to_string_pretty(&output).expect("report serialization");
    println!("{text}");
    if let Some(path) = out {
        write_json(path, &output)?;
    }
    if let Some(path) = gen_out {
        write_gen(&result.code, path)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SrgOut {
    code: CodeReport,
    srg: qsc_core::srg::SrgParams,
    connected: bool,
    symmetric_design: Option<qsc_core::design::DesignParams>,
}

fn srg_cmd(
    gen_path: &Path,
    graph_out: Option<&Path>,
    design_out: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let code = read_gen(gen_path)?;
    let report = analyze(&code, enum_guard())?;
    let (graph, params) = srg_from_code(&code)?;
    println!(
        "SRG({},{},{},{}) from the [{},{}] code",
        params.v,
        params.k,
        params.lambda,
        params.mu,
        code.n(),
        code.k()
    );
    if let Some(path) = graph_out {
        write_graph(&graph, path)?;
        println!("wrote {}", path.display());
    }
    let mut design_params = None;
    if let Some(path) = design_out {
        let design = graph_to_symmetric_design(&graph, &params)?;
        let verified = verify_design(&design, 2)?;
        write_inc(&design, path)?;
        println!(
            "wrote symmetric 2-({},{},{}) design to {}",
            verified.v,
            verified.k,
            verified.lambda,
            path.display()
        );
        design_params = Some(verified);
    }
    if let Some(path) = out {
        let output = SrgOut {
            code: report,
            srg: params,
            connected: graph.is_connected(),
            symmetric_design: design_params,
        };
        write_json(path, &output)?;
    }
    Ok(())
}
