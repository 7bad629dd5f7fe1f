use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use uiscatter::blocks::{evaluate_spec, refractive_index};
use uiscatter::design::{
    assemble, conjugate_spec, default_r_script, design_singularity, plan_addendum, plan_six,
    verify, AssembleOptions, DesignTarget, VerifyReport,
};
use uiscatter::solver::{scan_spectrum, wavenumber_grid, SolverOptions};
use uiscatter::{Complex64, PotentialSpec};

use crate::complex::parse_complex;
use crate::specfile::{load_spec, save_spec};
use crate::table::{output_digits, OutputTable};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "uiscatter", version, about = "Design 1D complex potentials with prescribed scattering amplitudes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan and assemble a potential with the given amplitudes at k0.
    Design(DesignArgs),
    /// Two-block potential with a spectral singularity (or CPA) at k0.
    Singularity(SingularityArgs),
    /// Reflection and transmission coefficients over a wavenumber grid.
    Spectrum(SpectrumArgs),
    /// Potential and refractive index over a position grid.
    Profile(ProfileArgs),
    /// Compare a spec's numerical amplitudes with targets.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlanKind {
    Paper6,
    Addendum,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub rl: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub rr: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub t: Complex64,
    #[arg(long)]
    pub k0: f64,
    #[arg(long, value_enum, default_value = "paper6")]
    pub plan: PlanKind,
    /// Free parameter of the six-block plan.
    #[arg(long = "r-script", allow_hyphen_values = true, value_parser = parse_complex)]
    pub r_script: Option<Complex64>,
    /// Cells per block.
    #[arg(long, default_value_t = 300)]
    pub n: u32,
    /// Minimum gap between blocks (μm).
    #[arg(long, default_value_t = 0.0)]
    pub gap: f64,
    /// Leftmost position of the first block (μm).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub origin: f64,
    /// Shift integers, one per planned block, overriding automatic placement.
    #[arg(long = "m-list", value_delimiter = ',', allow_hyphen_values = true)]
    pub m_list: Option<Vec<i64>>,
    /// Tolerance for the numerical check of the design.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SingularityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 300)]
    pub n: u32,
    #[arg(long, default_value_t = 300)]
    pub m: u32,
    #[arg(long)]
    pub k0: f64,
    /// Write the complex-conjugate (coherent perfect absorber) instead.
    #[arg(long)]
    pub cpa: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub kmin: f64,
    #[arg(long)]
    pub kmax: f64,
    #[arg(long, default_value_t = 500)]
    pub points: usize,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub rl: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub rr: Complex64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub t: Complex64,
    /// Defaults to the spec's design wavenumber.
    #[arg(long)]
    pub k0: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

/// Text produced by a command. `passed` is false for a completed run whose
/// verification failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub passed: bool,
}

impl Outcome {
    fn new() -> Self {
        Self { stdout: String::new(), stderr: String::new(), passed: true }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Design(a) => cmd_design(a),
        Command::Singularity(a) => cmd_singularity(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn fmt_c(z: Complex64) -> String {
    // adding zero turns −0 into +0
    format!("{:.12e},{:.12e}", z.re + 0.0, z.im + 0.0)
}

fn write_residuals(out: &mut String, r: &VerifyReport) {
    let names = ["Rl", "Rr", "T"];
    let got = [r.achieved.rl, r.achieved.rr, r.achieved.t];
    let want = [r.target.rl, r.target.rr, r.target.t];
    writeln!(out, "amplitude,achieved_re,achieved_im,target_re,target_im,residual").unwrap();
    for i in 0..3 {
        writeln!(out, "{},{},{},{:.6e}", names[i], fmt_c(got[i]), fmt_c(want[i]), r.residuals[i]).unwrap();
    }
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "verify: max residual {:.6e}, tol {:e}: {verdict}", r.max_residual(), r.tol).unwrap();
}

fn write_table(table: &OutputTable, out: Option<&Path>, outcome: &mut Outcome) -> Result<(), CliError> {
    let csv = table.to_csv(output_digits());
    match out {
        Some(path) => fs::write(path, csv)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => {
            outcome.stdout.push_str(&csv);
            Ok(())
        }
    }
}

pub fn cmd_design(a: &DesignArgs) -> Result<Outcome, CliError> {
    let target = DesignTarget::new(a.rl, a.rr, a.t, a.k0)?;
    let plan = match a.plan {
        PlanKind::Paper6 => plan_six(&target, a.r_script.unwrap_or_else(|| default_r_script(&target)))?,
        PlanKind::Addendum => {
            if a.r_script.is_some() {
                return Err(CliError::io("--r-script applies to the paper6 plan only"));
            }
            plan_addendum(&target)?
        }
    };
    let opts = AssembleOptions { n: a.n, gap_min: a.gap, origin: a.origin, m_overrides: a.m_list.clone() };
    let assembly = assemble(&plan, a.k0, &opts)?;
    let label = match a.plan {
        PlanKind::Paper6 => "paper6",
        PlanKind::Addendum => "addendum",
    };
    let spec = assembly.spec.clone().with_metadata(format!(
        "{label} design for Rl = {}, Rr = {}, T = {}",
        fmt_c(a.rl),
        fmt_c(a.rr),
        fmt_c(a.t)
    ));

    let mut o = Outcome::new();
    if plan.is_empty() {
        writeln!(o.stderr, "warning: free potential (target needs no blocks)").unwrap();
    }
    let script = plan.r_script.map_or("none".to_owned(), fmt_c);
    writeln!(o.stdout, "plan: {label}, {} blocks, R-script {script}", plan.len()).unwrap();
    writeln!(o.stdout, "block,role,side,target_re,target_im,alpha,d,m,start,end").unwrap();
    for (i, p) in assembly.placements.iter().enumerate() {
        let s = p.block.support();
        writeln!(
            o.stdout,
            "{},{},{},{},{:.6e},{:.6},{},{:.6},{:.6}",
            i + 1,
            p.entry.role.label(),
            p.entry.side.label(),
            fmt_c(p.entry.target),
            p.block.alpha,
            p.block.d + 0.0,
            p.m,
            s.start + 0.0,
            s.end + 0.0
        )
        .unwrap();
    }
    if let Some(s) = spec.support() {
        writeln!(o.stdout, "extent: {:.6}", s.length()).unwrap();
    }
    let report = verify(&spec, &target, a.tol, &SolverOptions::default())?;
    write_residuals(&mut o.stdout, &report);
    save_spec(&a.out, &spec)?;
    writeln!(o.stdout, "wrote {}", a.out.display()).unwrap();
    o.passed = report.passed();
    Ok(o)
}

pub fn cmd_singularity(a: &SingularityArgs) -> Result<Outcome, CliError> {
    let d = design_singularity(a.alpha, a.n, a.m, a.k0)?;
    let mut o = Outcome::new();
    writeln!(o.stdout, "alpha: {:.12e}", d.alpha).unwrap();
    writeln!(o.stdout, "beta: {:.12e}", d.beta).unwrap();
    writeln!(o.stdout, "w+ (left block, alpha, n = {}): Rr = {}", a.n, fmt_c(d.rr_plus)).unwrap();
    writeln!(o.stdout, "w- (right block, beta, m = {}): Rl = {}", a.m, fmt_c(d.rl_minus)).unwrap();
    writeln!(o.stdout, "|Rl Rr - 1|: {:.6e}", (d.rl_minus * d.rr_plus - 1.0).norm()).unwrap();
    writeln!(o.stdout, "thickness: {:.6}", d.thickness()).unwrap();
    let (spec, kind) = if a.cpa {
        (conjugate_spec(&d.spec), "coherent perfect absorber")
    } else {
        (d.spec.clone(), "spectral singularity")
    };
    let spec = spec.with_metadata(format!(
        "{kind} at k0 = {}: alpha = {:e}, beta = {:e}, n = {}, m = {}",
        a.k0, d.alpha, d.beta, a.n, a.m
    ));
    save_spec(&a.out, &spec)?;
    writeln!(o.stdout, "wrote {} ({kind})", a.out.display()).unwrap();
    Ok(o)
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let spec = load_spec(&a.spec)?;
    let table = scan_spectrum(&spec, a.kmin, a.kmax, a.points, &SolverOptions::default())
        .map_err(|e| CliError::io(e.to_string()))?;
    let mut out = OutputTable::new(vec!["k", "k_over_k0", "Rl2", "Rr2", "T2", "argT", "capped"]);
    let mut o = Outcome::new();
    for r in &table.rows {
        if let Some(e) = &r.error {
            writeln!(o.stderr, "warning: k = {}: {e}", r.k).unwrap();
        }
        out.push(vec![r.k, r.k / spec.k0(), r.rl2, r.rr2, r.t2, r.arg_t, f64::from(u8::from(r.capped))]);
    }
    write_table(&out, a.out.as_deref(), &mut o)?;
    Ok(o)
}

fn profile_table(spec: &PotentialSpec, xs: &[f64], o: &mut Outcome) -> OutputTable {
    let mut out = OutputTable::new(vec!["x", "re_v", "im_v", "re_n_minus_1", "im_n"]);
    let mut branch_errors = 0;
    for &x in xs {
        let v = evaluate_spec(spec, x);
        let (dn, im) = match refractive_index(spec, x) {
            Ok(n) => (n.re - 1.0, n.im),
            Err(_) => {
                branch_errors += 1;
                (f64::NAN, f64::NAN)
            }
        };
        out.push(vec![x, v.re, v.im, dn, im]);
    }
    if branch_errors > 0 {
        writeln!(o.stderr, "warning: refractive index outside the modeled branch at {branch_errors} points").unwrap();
    }
    out
}

pub fn cmd_profile(a: &ProfileArgs) -> Result<Outcome, CliError> {
    let spec = load_spec(&a.spec)?;
    if !(a.xmin.is_finite() && a.xmax.is_finite() && a.xmax > a.xmin) || a.points < 2 {
        return Err(CliError::io("need xmin < xmax and at least 2 points"));
    }
    let mut o = Outcome::new();
    let table = profile_table(&spec, &wavenumber_grid(a.xmin, a.xmax, a.points), &mut o);
    write_table(&table, a.out.as_deref(), &mut o)?;
    Ok(o)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let spec = load_spec(&a.spec)?;
    let target = DesignTarget::new(a.rl, a.rr, a.t, a.k0.unwrap_or(spec.k0()))?;
    let report = verify(&spec, &target, a.tol, &SolverOptions::default())?;
    let mut o = Outcome::new();
    write_residuals(&mut o.stdout, &report);
    o.passed = report.passed();
    Ok(o)
}
