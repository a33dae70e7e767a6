//! `radosc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error, 3 non-convergence,
//! 4 when `algebra-check` finds a residual above tolerance.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coherent::{
    bg_wavefunction_closed, su11_perelomov_wavefunction_closed, transition_probability, xi_to_z, CoherentSpec, Family,
    Group, ZParam,
};
use crate::dynamics::{density_evolution, family_name, EvolutionSpec};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridResult, Table};
use crate::observables::{
    mean_energy, squeezing_map, su11_perelomov_variances_closed, su2_variances_closed, su2_variances_matrix,
    turning_points,
};
use crate::operators::{dicke_basis, relation_table, DickeCase};
use crate::par::Exec;
use crate::specfun::SeriesControl;
use crate::statespace::{evaluate_density, StateVector};
use crate::VERSION;

/// Exit code for a failed algebra verification.
pub const EXIT_VERIFY: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "radosc", version, about = "Radial oscillator ladder algebra, coherent states and squeezing")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Evaluate grids on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Series,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VarRoute {
    Closed,
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Su11,
    Su2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Bg,
    Su11p,
    Su2p,
}

/// An angle given as radians or a multiple of π ("0.5pi", "pi/2", "-pi").
#[derive(Clone, Debug, PartialEq)]
struct Angle {
    text: String,
    value: f64,
}

fn parse_angle(text: &str) -> std::result::Result<Angle, String> {
    let t = text.trim().to_ascii_lowercase();
    let bad = || format!("cannot read angle {text:?}; use radians or forms like 0.5pi, pi/4");
    let value = if let Some(pos) = t.find("pi") {
        let (pre, post) = (&t[..pos], &t[pos + 2..]);
        let coef = match pre.trim_end_matches('*') {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let div = match post {
            "" => 1.0,
            d => d.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
        };
        coef * PI / div
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(Angle {
        text: text.to_string(),
        value,
    })
}

#[derive(Args, Debug)]
struct ZArgs {
    /// |z|.
    #[arg(long = "mod", allow_negative_numbers = true)]
    modulus: f64,
    /// φ in z = |z|e^{−iφ}.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true, default_value = "0")]
    phase: Angle,
}

#[derive(Args, Debug)]
struct RadialGrid {
    #[arg(long, default_value_t = 0.0)]
    rmin: f64,
    #[arg(long, default_value_t = 8.0)]
    rmax: f64,
    #[arg(long, default_value_t = 400)]
    points: usize,
}

#[derive(Args, Debug)]
struct TimeArgs {
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Largest reduced time τ = 2λt.
    #[arg(long, value_parser = parse_angle, default_value = "2pi")]
    tau_max: Angle,
    #[arg(long, default_value_t = 101)]
    tpoints: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Residuals of every commutation relation on a lattice box.
    AlgebraCheck {
        #[arg(long, default_value_t = 0)]
        smin: u32,
        #[arg(long, default_value_t = 8)]
        smax: u32,
        #[arg(long, default_value_t = 0)]
        lmin: u32,
        #[arg(long, default_value_t = 8)]
        lmax: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Barut-Girardello radial density.
    BgDensity {
        #[arg(long)]
        ell: u32,
        #[command(flatten)]
        z: ZArgs,
        #[command(flatten)]
        grid: RadialGrid,
        #[arg(long, value_enum, default_value_t = Route::Series)]
        route: Route,
    },
    /// Barut-Girardello density on a τ × r grid.
    BgEvolve {
        #[arg(long)]
        ell: u32,
        #[command(flatten)]
        z: ZArgs,
        #[command(flatten)]
        grid: RadialGrid,
        #[command(flatten)]
        time: TimeArgs,
    },
    /// SU(1,1) Perelomov radial density.
    PerDensity {
        #[arg(long)]
        ell: u32,
        #[command(flatten)]
        z: ZArgs,
        /// Read --mod as |ξ| and map it through tanh.
        #[arg(long)]
        xi: bool,
        #[command(flatten)]
        grid: RadialGrid,
        #[arg(long, value_enum, default_value_t = Route::Series)]
        route: Route,
    },
    /// SU(1,1) Perelomov density on a τ × r grid.
    PerEvolve {
        #[arg(long)]
        ell: u32,
        #[command(flatten)]
        z: ZArgs,
        #[arg(long)]
        xi: bool,
        #[command(flatten)]
        grid: RadialGrid,
        #[command(flatten)]
        time: TimeArgs,
    },
    /// Squeezing classification over (|z|, φ): 0 NONE, 1 SQ1, 2 SQ2, 3 MINIMUM.
    SqueezeMap {
        #[arg(long, value_enum)]
        group: GroupArg,
        /// ℓ for su11.
        #[arg(long)]
        ell: Option<u32>,
        /// n for su2.
        #[arg(long)]
        n: Option<u32>,
        /// Defaults to 0.95 for su11 and 3 for su2.
        #[arg(long)]
        mod_max: Option<f64>,
        #[arg(long, default_value_t = 60)]
        mod_points: usize,
        /// Phases k·2π/phase_points, k = 0 … phase_points − 1.
        #[arg(long, default_value_t = 120)]
        phase_points: usize,
    },
    /// Quadrature report of one SU(2) Perelomov state.
    Su2Variances {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        z: ZArgs,
        /// Read --mod as |ξ| and map it through tan.
        #[arg(long)]
        xi: bool,
        #[arg(long, value_enum, default_value_t = VarRoute::Closed)]
        route: VarRoute,
    },
    /// Occupation of each ℓ = n − 2r in the SU(2) state.
    TransitionProb {
        #[arg(long)]
        n: u32,
        #[arg(long = "mod", allow_negative_numbers = true)]
        modulus: f64,
    },
    /// Classical turning points at a given or Perelomov mean energy.
    TurningPoints {
        #[arg(long)]
        ell: u32,
        #[arg(long, conflicts_with = "per_mod", required_unless_present = "per_mod")]
        energy: Option<f64>,
        /// Use the mean energy of the SU(1,1) Perelomov state with this |z|.
        #[arg(long)]
        per_mod: Option<f64>,
    },
    /// Dicke-like intermediary basis and its orthonormality.
    DickeInfo {
        #[arg(long = "case")]
        case_id: String,
        #[arg(long, value_parser = parse_angle, default_value = "0")]
        chi: Angle,
    },
    /// Coefficients of a coherent state.
    StateDump {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// ℓ for bg and su11p, n for su2p.
        #[arg(long)]
        label: u32,
        #[command(flatten)]
        z: ZArgs,
        /// Minimum number of kept terms for the series families.
        #[arg(long)]
        trunc: Option<u32>,
    },
}

/// JSON shape of `state-dump`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDump {
    pub metadata: BTreeMap<String, String>,
    pub terms: usize,
    pub state: StateVector,
}

enum Output {
    Grid(GridResult),
    Table(Table),
    State(StateDump),
}

impl Output {
    fn render(&self, format: Format) -> String {
        match (self, format) {
            (Output::Grid(g), Format::Csv) => g.to_csv(),
            (Output::Grid(g), Format::Json) => g.to_json() + "\n",
            (Output::Table(t), Format::Csv) => t.to_csv(),
            (Output::Table(t), Format::Json) => t.to_json() + "\n",
            (Output::State(d), Format::Csv) => {
                let mut t = Table::new(&["s", "ell", "n", "re", "im"]);
                t.metadata = d.metadata.clone();
                for (q, c) in d.state.iter() {
                    t.push(vec![q.s.into(), q.ell.into(), q.n().into(), c.re.into(), c.im.into()]);
                }
                t.to_csv()
            }
            (Output::State(d), Format::Json) => {
                serde_json::to_string_pretty(d).expect("state serialization cannot fail") + "\n"
            }
        }
    }

    fn metadata_mut(&mut self) -> &mut BTreeMap<String, String> {
        match self {
            Output::Grid(g) => &mut g.metadata,
            Output::Table(t) => &mut t.metadata,
            Output::State(d) => &mut d.metadata,
        }
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let (output, verify_failed) = match execute(&cli.command, exec) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "radosc: {e}");
            return e.exit_code();
        }
    };
    let text = output.render(cli.format);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(err, "radosc: {msg}");
        return 2;
    }
    if verify_failed {
        let _ = writeln!(err, "radosc: algebra check found residuals above tolerance");
        return EXIT_VERIFY;
    }
    0
}

fn linspace(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("grids need at least one finite point"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    if !(b > a) {
        return Err(Error::domain(format!("grid end {b} must exceed its start {a}")));
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

impl RadialGrid {
    fn values(&self) -> Result<Vec<f64>> {
        if self.rmin < 0.0 {
            return Err(Error::domain(format!("rmin must be non-negative, got {}", self.rmin)));
        }
        linspace(self.rmin, self.rmax, self.points)
    }

    fn record(&self, m: &mut BTreeMap<String, String>) {
        put(m, "rmin", self.rmin);
        put(m, "rmax", self.rmax);
        put(m, "points", self.points);
    }
}

impl ZArgs {
    fn zparam(&self) -> Result<ZParam> {
        ZParam::new(self.modulus, self.phase.value)
    }

    fn record(&self, m: &mut BTreeMap<String, String>) {
        put(m, "mod", self.modulus);
        put(m, "phase", &self.phase.text);
    }
}

/// z from (|·|, φ), reading the modulus as |ξ| when `xi` is set.
fn z_for(group: Group, z: &ZArgs, xi: bool) -> Result<ZParam> {
    let p = z.zparam()?;
    if !xi {
        return Ok(p);
    }
    Ok(ZParam::from_complex(xi_to_z(group, p.to_complex())?))
}

fn put(m: &mut BTreeMap<String, String>, key: &str, value: impl std::fmt::Display) {
    m.insert(key.to_string(), value.to_string());
}

fn record_ctl(m: &mut BTreeMap<String, String>, ctl: SeriesControl) {
    put(m, "rel_tol", ctl.rel_tol);
    put(m, "max_terms", ctl.max_terms);
}

fn execute(cmd: &Command, exec: Exec) -> Result<(Output, bool)> {
    let ctl = SeriesControl::from_env()?;
    let mut verify_failed = false;
    let mut meta = BTreeMap::new();
    let mut output = match cmd {
        Command::AlgebraCheck {
            smin,
            smax,
            lmin,
            lmax,
            tol,
        } => {
            if smin > smax || lmin > lmax {
                return Err(Error::domain("empty lattice box"));
            }
            put(&mut meta, "command", "algebra-check");
            put(&mut meta, "smin", smin);
            put(&mut meta, "smax", smax);
            put(&mut meta, "lmin", lmin);
            put(&mut meta, "lmax", lmax);
            put(&mut meta, "tol", tol);
            let rels = relation_table();
            let residuals = exec.try_map(&rels, |r| r.residual_on_box(*smin, *smax, *lmin, *lmax))?;
            let mut t = Table::new(&["group", "relation", "min_ell", "residual", "pass"]);
            for (r, res) in rels.iter().zip(residuals) {
                let pass = res < *tol;
                verify_failed |= !pass;
                t.push(vec![r.group.into(), r.label().into(), r.min_ell.into(), res.into(), pass.into()]);
            }
            Output::Table(t)
        }
        Command::BgDensity { ell, z, grid, route } => {
            put(&mut meta, "command", "bg-density");
            z.record(&mut meta);
            density_output(Family::BG, *ell, z.zparam()?, grid, *route, ctl, exec, &mut meta)?
        }
        Command::PerDensity {
            ell,
            z,
            xi,
            grid,
            route,
        } => {
            put(&mut meta, "command", "per-density");
            z.record(&mut meta);
            put(&mut meta, "xi", xi);
            density_output(Family::SU11P, *ell, z_for(Group::SU11, z, *xi)?, grid, *route, ctl, exec, &mut meta)?
        }
        Command::BgEvolve { ell, z, grid, time } => {
            put(&mut meta, "command", "bg-evolve");
            z.record(&mut meta);
            evolve_output(Family::BG, *ell, z.zparam()?, grid, time, ctl, exec, &mut meta)?
        }
        Command::PerEvolve {
            ell,
            z,
            xi,
            grid,
            time,
        } => {
            put(&mut meta, "command", "per-evolve");
            z.record(&mut meta);
            put(&mut meta, "xi", xi);
            evolve_output(Family::SU11P, *ell, z_for(Group::SU11, z, *xi)?, grid, time, ctl, exec, &mut meta)?
        }
        Command::SqueezeMap {
            group,
            ell,
            n,
            mod_max,
            mod_points,
            phase_points,
        } => {
            let (g, label, default_max) = match group {
                GroupArg::Su11 => (Group::SU11, ell.ok_or_else(|| Error::domain("su11 needs --ell"))?, 0.95),
                GroupArg::Su2 => (Group::SU2, n.ok_or_else(|| Error::domain("su2 needs --n"))?, 3.0),
            };
            let mod_max = mod_max.unwrap_or(default_max);
            if *phase_points == 0 {
                return Err(Error::domain("phase grid needs at least one point"));
            }
            let mods = linspace(0.0, mod_max, *mod_points)?;
            let phases: Vec<f64> = (0..*phase_points).map(|k| TAU * k as f64 / *phase_points as f64).collect();
            put(&mut meta, "command", "squeeze-map");
            put(&mut meta, "mod_max", mod_max);
            put(&mut meta, "mod_points", mod_points);
            put(&mut meta, "phase_points", phase_points);
            Output::Grid(squeezing_map(g, label, &mods, &phases, exec)?)
        }
        Command::Su2Variances { n, z, xi, route } => {
            let zc = z_for(Group::SU2, z, *xi)?.to_complex();
            let rep = match route {
                VarRoute::Closed => su2_variances_closed(*n, zc),
                VarRoute::Matrix => su2_variances_matrix(*n, zc),
            };
            put(&mut meta, "command", "su2-variances");
            put(&mut meta, "n", n);
            put(&mut meta, "xi", xi);
            put(&mut meta, "route", if *route == VarRoute::Closed { "closed" } else { "matrix" });
            z.record(&mut meta);
            let mut t = Table::new(&["mean_1", "mean_2", "mean_3", "var_1", "var_2", "bound", "class"]);
            t.push(vec![
                rep.mean_1.into(),
                rep.mean_2.into(),
                rep.mean_3.into(),
                rep.var_1.into(),
                rep.var_2.into(),
                rep.bound.into(),
                rep.class().name().into(),
            ]);
            Output::Table(t)
        }
        Command::TransitionProb { n, modulus } => {
            let two_j = crate::statespace::degeneracy(*n) - 1;
            let mut t = Table::new(&["r", "ell", "probability"]);
            for r in 0..=two_j {
                t.push(vec![r.into(), (n - 2 * r).into(), transition_probability(*n, r, *modulus)?.into()]);
            }
            put(&mut meta, "command", "transition-prob");
            put(&mut meta, "n", n);
            put(&mut meta, "mod", modulus);
            Output::Table(t)
        }
        Command::TurningPoints { ell, energy, per_mod } => {
            put(&mut meta, "command", "turning-points");
            put(&mut meta, "ell", ell);
            let e = match (energy, per_mod) {
                (Some(e), _) => *e,
                (None, Some(m)) => {
                    put(&mut meta, "per_mod", m);
                    mean_energy(&su11_perelomov_variances_closed(*ell, Complex64::new(*m, 0.0))?)
                }
                (None, None) => return Err(Error::domain("give --energy or --per-mod")),
            };
            let (inner, outer) = turning_points(e, *ell)?;
            let mut t = Table::new(&["energy", "r_inner", "r_outer"]);
            t.push(vec![e.into(), inner.into(), outer.into()]);
            Output::Table(t)
        }
        Command::DickeInfo { case_id, chi } => {
            let case: DickeCase = case_id.parse()?;
            let basis = dicke_basis(case, chi.value)?;
            let gram = basis.gram();
            let dim = basis.vectors.len();
            let dev = (0..dim)
                .flat_map(|i| (0..dim).map(move |j| (i, j)))
                .map(|(i, j)| (gram[(i, j)] - if i == j { 1.0 } else { 0.0 }).norm())
                .fold(0.0, f64::max);
            let j = basis.generators().j();
            let mut t = Table::new(&["index", "mu", "s", "ell", "n", "re", "im"]);
            for (k, v) in basis.vectors.iter().enumerate() {
                let mu = j - k as f64;
                for (q, c) in v.iter() {
                    t.push(vec![(k as u32).into(), mu.into(), q.s.into(), q.ell.into(), q.n().into(), c.re.into(), c.im.into()]);
                }
            }
            put(&mut meta, "command", "dicke-info");
            put(&mut meta, "case", case_id);
            put(&mut meta, "chi", &chi.text);
            put(&mut meta, "j", j);
            put(&mut meta, "gram_deviation", dev);
            Output::Table(t)
        }
        Command::StateDump { family, label, z, trunc } => {
            let fam = match family {
                FamilyArg::Bg => Family::BG,
                FamilyArg::Su11p => Family::SU11P,
                FamilyArg::Su2p => Family::SU2P,
            };
            let built = CoherentSpec::new(fam, *label, z.zparam()?, *trunc)?.build(ctl)?;
            put(&mut meta, "command", "state-dump");
            put(&mut meta, "family", family_name(fam));
            put(&mut meta, "label", label);
            if let Some(k) = trunc {
                put(&mut meta, "trunc", k);
            }
            z.record(&mut meta);
            record_ctl(&mut meta, ctl);
            Output::State(StateDump {
                metadata: BTreeMap::new(),
                terms: built.terms,
                state: built.state,
            })
        }
    };
    let m = output.metadata_mut();
    m.extend(meta);
    put(m, "version", VERSION);
    Ok((output, verify_failed))
}

#[allow(clippy::too_many_arguments)]
fn density_output(
    family: Family,
    ell: u32,
    z: ZParam,
    grid: &RadialGrid,
    route: Route,
    ctl: SeriesControl,
    exec: Exec,
    meta: &mut BTreeMap<String, String>,
) -> Result<Output> {
    let r = grid.values()?;
    grid.record(meta);
    let zc = z.to_complex();
    let density = match route {
        Route::Series => {
            let spec = CoherentSpec::new(family, ell, z, None)?;
            let built = spec.build(ctl)?;
            put(meta, "terms", built.terms);
            evaluate_density(&built.state, &r, exec)?
        }
        Route::Closed => exec.try_map(&r, |&x| {
            if x == 0.0 {
                return Ok(0.0);
            }
            let psi = match family {
                Family::BG => bg_wavefunction_closed(ell, zc, x, ctl)?,
                _ => su11_perelomov_wavefunction_closed(ell, zc, x)?,
            };
            Ok(psi.norm_sqr())
        })?,
    };
    let mut g = GridResult::new_1d(Axis::new("r", r), "density", density)?;
    put(meta, "family", family_name(family));
    put(meta, "ell", ell);
    put(meta, "route", if route == Route::Series { "series" } else { "closed" });
    put(meta, "z_modulus", z.modulus);
    put(meta, "z_phase", z.phase);
    record_ctl(meta, ctl);
    g.metadata.append(meta);
    Ok(Output::Grid(g))
}

#[allow(clippy::too_many_arguments)]
fn evolve_output(
    family: Family,
    ell: u32,
    z: ZParam,
    grid: &RadialGrid,
    time: &TimeArgs,
    ctl: SeriesControl,
    exec: Exec,
    meta: &mut BTreeMap<String, String>,
) -> Result<Output> {
    if !(time.lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be positive, got {}", time.lambda)));
    }
    let taus = linspace(0.0, time.tau_max.value, time.tpoints)?;
    let t: Vec<f64> = taus.iter().map(|tau| tau / (2.0 * time.lambda)).collect();
    let spec = EvolutionSpec::new(CoherentSpec::new(family, ell, z, None)?, time.lambda, t, grid.values()?)?;
    let mut g = density_evolution(&spec, ctl, exec)?;
    grid.record(meta);
    put(meta, "tau_max", &time.tau_max.text);
    put(meta, "tpoints", time.tpoints);
    record_ctl(meta, ctl);
    g.metadata.append(meta);
    Ok(Output::Grid(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("radosc").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap().value, PI);
        assert_eq!(parse_angle("0.5pi").unwrap().value, 0.5 * PI);
        assert_eq!(parse_angle("-pi/2").unwrap().value, -PI / 2.0);
        assert_eq!(parse_angle("3pi/4").unwrap().value, 3.0 * PI / 4.0);
        assert_eq!(parse_angle("1.25").unwrap().value, 1.25);
        assert_eq!(parse_angle("0.5pi").unwrap().text, "0.5pi");
        assert!(parse_angle("pix").is_err());
        assert!(parse_angle("abc").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, out, err) = run_capture(&["bg-density", "--bogus"]);
        assert_eq!(code, 1);
        assert!(out.is_empty() && !err.is_empty());
        assert_eq!(run_capture(&["nope"]).0, 1);
        assert_eq!(run_capture(&["--help"]).0, 0);
    }

    #[test]
    fn domain_errors_exit_two() {
        let (code, _, err) = run_capture(&["per-density", "--ell", "0", "--mod", "1.2"]);
        assert_eq!(code, 2);
        assert!(err.contains("|z| < 1"));
        assert_eq!(run_capture(&["dicke-info", "--case", "E4b"]).0, 2);
        assert_eq!(run_capture(&["transition-prob", "--n", "3", "--mod", "-1"]).0, 2);
    }

    #[test]
    fn phase_metadata_is_verbatim() {
        let (code, out, _) = run_capture(&["bg-density", "--ell", "0", "--mod", "1", "--phase", "0.5pi", "--points", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("# phase=0.5pi\n"));
        assert!(out.contains(&format!("# version={VERSION}\n")));
        assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 6);
    }

    #[test]
    fn failed_verification_exits_four() {
        let (code, out, _) = run_capture(&["algebra-check", "--smax", "2", "--lmax", "2", "--tol", "0"]);
        assert_eq!(code, EXIT_VERIFY);
        assert!(out.contains("false"));
    }

    #[test]
    fn turning_points_from_perelomov_energy() {
        let (code, out, _) = run_capture(&["turning-points", "--ell", "0", "--per-mod", "0"]);
        assert_eq!(code, 0);
        // E = 3 at z = 0: r_outer = √3
        let row: Vec<f64> = out.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert!((row[2] - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(run_capture(&["turning-points", "--ell", "0"]).0, 1);
    }
}
