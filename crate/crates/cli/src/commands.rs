//! The four subcommands. Each resolves its parameters, computes rows in
//! the rayon pool, then assembles CSV and SVG output in row order.

use std::path::PathBuf;

use rayon::prelude::*;
use specgeom::annulus::capacity_energy;
use specgeom::cylinder::{
    continuum_deficit, cylinder_deficit_with, cylinder_eigenvalue_exact, first_order_eigenvalue_shift,
    perturbed_ground_eigenvalue_with,
};
use specgeom::flow::{
    extinction_time, gap_report, verify_energy_velocities, verify_hadamard_velocities, verify_hadamard_with,
    verify_modulus_rate, verify_modulus_velocities, verify_topping_with, DEFAULT_SMALL_DEFICIT_THRESHOLD,
};
use specgeom::reference::{table_outer_radii, sweep_amplitudes, AnnulusRow, CylinderRow, ANNULUS_TABLE, CYLINDER_TABLE};
use specgeom::{
    AnnulusGeometry, ConformalPerturbation, CylinderError, CylinderGrid, DeficitRule, EigenOptions, FdEigenResult,
    FdScheme, FlowError, Identity, IdentityResidualReport, InnerSolver, SineCosineProfile, SpectralReport,
};

use crate::config::{
    ConfigError, ConfigFile, DeficitChoice, Effective, RealList, Resolver, SchemeChoice, SolverChoice, VelocityChoice,
};
use crate::format::{render_csv, write_file, Cell, Table};
use crate::svg::{Figure, Scale, Series, Style};
use crate::{AnnulusTableArgs, CylinderSweepArgs, GapArgs, SharedArgs, VerifyArgs};

const DEFAULT_SEED: u64 = 0x5eed_cafe;
const DEFAULT_PRECISION: usize = 6;

/// Worst outcome over all rows, ordered by exit-code precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    BandFailure,
    SolverFailure,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass => 0,
            Verdict::BandFailure => 1,
            Verdict::SolverFailure => 3,
        }
    }
}

pub struct Shared {
    out_dir: PathBuf,
    csv: bool,
    svg: bool,
    seed: u64,
    precision: usize,
}

fn resolve_shared(r: &mut Resolver, args: &SharedArgs) -> Result<Shared, ConfigError> {
    let out_dir: String = r.resolve("out-dir", args.out_dir.clone(), "out".to_string())?;
    let csv = r.resolve("csv", args.csv, true)?;
    let svg = r.resolve("svg", args.svg, false)?;
    let seed = r.resolve("seed", args.seed, DEFAULT_SEED)?;
    let precision = r.resolve("precision", args.precision, DEFAULT_PRECISION)?;
    if precision > 17 {
        return Err(ConfigError::Invalid(format!("precision must be at most 17, got {precision}")));
    }
    if out_dir.is_empty() {
        return Err(ConfigError::Invalid("out-dir must not be empty".into()));
    }
    Ok(Shared {
        out_dir: PathBuf::from(out_dir),
        csv,
        svg,
        seed,
        precision,
    })
}

fn load(path: &Option<PathBuf>) -> Result<ConfigFile, ConfigError> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::empty()),
    }
}

fn require(ok: bool, message: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Invalid(message()))
    }
}

fn positive(key: &str, v: f64) -> Result<(), ConfigError> {
    require(v > 0.0 && v.is_finite(), || format!("{key} must be positive and finite, got {v}"))
}

/// Per-row status: failed bands and flagged reference disagreements.
#[derive(Debug, Default)]
struct Status {
    failed: Vec<String>,
    flagged: Vec<String>,
    solver: Option<String>,
    unreferenced: bool,
}

impl Status {
    fn band(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failed.push(name.to_string());
        }
    }

    fn flag(&mut self, name: &str, ok: bool) {
        if !ok {
            self.flagged.push(name.to_string());
        }
    }

    fn verdict(&self) -> Verdict {
        if self.solver.is_some() {
            Verdict::SolverFailure
        } else if !self.failed.is_empty() {
            Verdict::BandFailure
        } else {
            Verdict::Pass
        }
    }

    fn text(&self) -> String {
        if let Some(e) = &self.solver {
            return format!("solver_error: {e}");
        }
        let mut parts = Vec::new();
        if !self.failed.is_empty() {
            parts.push(format!("fail:{}", self.failed.join("+")));
        }
        if !self.flagged.is_empty() {
            parts.push(format!("flagged:{}", self.flagged.join("+")));
        }
        if parts.is_empty() {
            if self.unreferenced { "no_reference" } else { "pass" }.to_string()
        } else {
            parts.join(";")
        }
    }
}

fn rel_close(x: f64, reference: f64, tol: f64) -> bool {
    ((x - reference) / reference).abs() <= tol
}

fn emit(
    command: &str,
    stem: &str,
    shared: &Shared,
    effective: &Effective,
    table: &Table,
    figures: Vec<(&str, Figure)>,
) -> Result<(), ConfigError> {
    let bytes = render_csv(command, effective, table, shared.precision);
    if !shared.csv && !shared.svg {
        print!("{}", String::from_utf8_lossy(&bytes));
        return Ok(());
    }
    std::fs::create_dir_all(&shared.out_dir).map_err(|source| ConfigError::Output {
        path: shared.out_dir.clone(),
        source,
    })?;
    if shared.csv {
        let path = shared.out_dir.join(format!("{stem}.csv"));
        write_file(&path, &bytes)?;
        eprintln!("wrote {}", path.display());
    }
    if shared.svg {
        for (name, mut fig) in figures {
            let meta: Vec<String> = effective.entries().iter().map(|(k, v)| format!("{k} = {v}")).collect();
            fig.note = format!("{} {}; {}", crate::format::banner(command), fig.note, meta.join("; "));
            let path = shared.out_dir.join(format!("{name}.svg"));
            write_file(&path, fig.render().as_bytes())?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn summarize(command: &str, statuses: &[Status]) -> Verdict {
    let verdict = statuses.iter().map(Status::verdict).max().unwrap_or(Verdict::Pass);
    let count = |v| statuses.iter().filter(|s| s.verdict() == v).count();
    eprintln!(
        "{command}: {} row(s), {} band failure(s), {} solver failure(s), {} flagged",
        statuses.len(),
        count(Verdict::BandFailure),
        count(Verdict::SolverFailure),
        statuses.iter().filter(|s| !s.flagged.is_empty()).count()
    );
    verdict
}

fn annulus_reference(a: f64, b: f64) -> Option<&'static AnnulusRow> {
    if a != 1.0 {
        return None;
    }
    ANNULUS_TABLE.iter().find(|r| r.b == b)
}

fn geometries(inner: f64, outer: &[f64]) -> Result<Vec<AnnulusGeometry>, ConfigError> {
    positive("inner", inner)?;
    require(!outer.is_empty(), || "outer radius list is empty".into())?;
    outer
        .iter()
        .map(|&b| {
            AnnulusGeometry::new(inner, b).map_err(|e| ConfigError::Invalid(format!("outer radius {b}: {e}")))
        })
        .collect()
}

fn scaled_figure(title: &str, x_label: &str, y_label: &str, series: Vec<Series>, note: &str) -> Figure {
    let x_scale = Scale::auto(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let y_scale = Scale::auto(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    Figure {
        title: title.into(),
        x_label: x_label.into(),
        y_label: y_label.into(),
        x_scale,
        y_scale,
        series,
        note: note.into(),
    }
}

pub fn annulus_table(args: &AnnulusTableArgs) -> Result<Verdict, ConfigError> {
    let file = load(&args.shared.config)?;
    let mut r = Resolver::new(&file);
    let shared = resolve_shared(&mut r, &args.shared)?;
    let inner = r.resolve("inner", args.inner, 1.0)?;
    let outer = r.resolve("outer", args.outer.clone(), RealList(table_outer_radii().to_vec()))?;
    file.check_unused("annulus-table")?;
    let geoms = geometries(inner, &outer.0)?;

    let reports: Vec<Result<SpectralReport, FlowError>> = geoms
        .par_iter()
        .map(|g| gap_report(g, DEFAULT_SMALL_DEFICIT_THRESHOLD))
        .collect();

    let mut table = Table::new(vec![
        "b",
        "E",
        "D",
        "sqrt_D",
        "lambda_ann",
        "lambda_cyl",
        "a",
        "gap",
        "mode_n",
        "mode_s",
        "ode_residual",
        "dirichlet_residual",
        "status",
    ]);
    let mut statuses = Vec::new();
    for (g, rep) in geoms.iter().zip(&reports) {
        let mut st = Status::default();
        let row = match rep {
            Ok(rep) => {
                match annulus_reference(g.inner(), g.outer()) {
                    Some(reference) => {
                        st.band("E", rel_close(rep.energy, reference.energy, 1e-5));
                        st.band("D", rel_close(rep.deficit, reference.deficit, 1e-5));
                        st.band("sqrt_D", (rep.sqrt_deficit - reference.sqrt_deficit).abs() <= 1e-4);
                        st.band("lambda_cyl", rel_close(rep.lambda_cyl, reference.lambda_cyl, 1e-4));
                        st.flag("lambda_ann", rel_close(rep.lambda_ann, reference.lambda_ann, 2e-3));
                    }
                    None => st.unreferenced = true,
                }
                vec![
                    Cell::Real(rep.b),
                    rep.energy.into(),
                    rep.deficit.into(),
                    rep.sqrt_deficit.into(),
                    rep.lambda_ann.into(),
                    rep.lambda_cyl.into(),
                    rep.a.into(),
                    rep.gap.into(),
                    rep.ground_order.into(),
                    rep.ground_branch.into(),
                    rep.ode_residual.into(),
                    rep.dirichlet_residual.into(),
                ]
            }
            Err(e) => {
                st.solver = Some(e.to_string());
                let p = specgeom::CapacityProfile::of(g);
                let nan = Cell::Real(f64::NAN);
                vec![
                    Cell::Real(g.outer()),
                    p.energy.into(),
                    p.deficit.into(),
                    p.deficit.sqrt().into(),
                    nan.clone(),
                    cylinder_eigenvalue_exact(p.modulus, 1, 0).into(),
                    g.inner().into(),
                    nan.clone(),
                    nan.clone(),
                    nan.clone(),
                    nan.clone(),
                    nan,
                ]
            }
        };
        let mut row = row;
        row.push(st.text().into());
        table.push(row);
        statuses.push(st);
    }

    let ok: Vec<&SpectralReport> = reports.iter().filter_map(|r| r.as_ref().ok()).collect();
    let vs = |f: fn(&SpectralReport) -> f64, g: fn(&SpectralReport) -> f64| -> Vec<(f64, f64)> {
        ok.iter().map(|r| (f(r), g(r))).collect()
    };
    let fig1 = scaled_figure(
        "First Dirichlet eigenvalue against capacity deficit",
        "capacity deficit D",
        "eigenvalue",
        vec![
            Series::new("annulus lambda_1", vs(|r| r.deficit, |r| r.lambda_ann), Style::LineMarkers),
            Series::new("cylinder (pi/h)^2", vs(|r| r.deficit, |r| r.lambda_cyl), Style::LineMarkers),
        ],
        "scales chosen logarithmic where the data spans a decade or more.",
    );
    let fig2 = scaled_figure(
        "First Dirichlet eigenvalue against outer radius",
        "outer radius b",
        "eigenvalue",
        vec![
            Series::new("annulus lambda_1", vs(|r| r.b, |r| r.lambda_ann), Style::LineMarkers),
            Series::new("cylinder (pi/h)^2", vs(|r| r.b, |r| r.lambda_cyl), Style::LineMarkers),
        ],
        "scales chosen logarithmic where the data spans a decade or more.",
    );
    emit(
        "annulus-table",
        "annulus_table",
        &shared,
        &r.effective,
        &table,
        vec![("fig1_eigenvalue_vs_deficit", fig1), ("fig2_eigenvalue_vs_outer_radius", fig2)],
    )?;
    Ok(summarize("annulus-table", &statuses))
}

struct SweepRow {
    epsilon: f64,
    solve: Result<FdEigenResult, CylinderError>,
    deficit: f64,
    deficit_continuum: f64,
    deficit_leading: f64,
    first_order: f64,
}

fn cylinder_reference(epsilon: f64) -> Option<&'static CylinderRow> {
    CYLINDER_TABLE.iter().find(|r| r.epsilon == epsilon)
}

pub fn cylinder_sweep(args: &CylinderSweepArgs) -> Result<Verdict, ConfigError> {
    let file = load(&args.shared.config)?;
    let mut r = Resolver::new(&file);
    let shared = resolve_shared(&mut r, &args.shared)?;
    let eps = r.resolve("epsilon", args.epsilon.clone(), RealList(sweep_amplitudes().to_vec()))?;
    let height = r.resolve("height", args.height, 1.0)?;
    let nx = r.resolve("nx", args.nx, specgeom::cylinder::CALIBRATED_NX)?;
    let ntheta = r.resolve("ntheta", args.ntheta, specgeom::cylinder::CALIBRATED_NTHETA)?;
    let k = r.resolve("k", args.k, 1u32)?;
    let tol = r.resolve("tol", args.tol, 1e-10)?;
    let rule = r.resolve("deficit-rule", args.deficit_rule, DeficitChoice::Nodes)?;
    let solver = r.resolve("solver", args.solver, SolverChoice::Cholesky)?;
    file.check_unused("cylinder-sweep")?;

    require(!eps.0.is_empty(), || "epsilon list is empty".into())?;
    for &e in &eps.0 {
        require(e >= 0.0 && e.is_finite(), || format!("epsilon must be finite and >= 0, got {e}"))?;
    }
    require(tol > 0.0 && tol <= 1e-3, || format!("tol must lie in (0, 1e-3], got {tol}"))?;
    let grid = CylinderGrid::new(height, nx, ntheta).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let rule = match rule {
        DeficitChoice::Nodes => DeficitRule::GridNodes,
        DeficitChoice::Midpoint => DeficitRule::CellMidpoints,
    };
    let opts = EigenOptions {
        seed: shared.seed,
        inner: match solver {
            SolverChoice::Cholesky => InnerSolver::Cholesky,
            SolverChoice::Cg => InnerSolver::ConjugateGradient,
        },
        ..EigenOptions::default()
    };
    let reference_setup = height == 1.0
        && nx == specgeom::cylinder::CALIBRATED_NX
        && ntheta == specgeom::cylinder::CALIBRATED_NTHETA
        && k == 1
        && rule == DeficitRule::GridNodes;

    let profile = SineCosineProfile::new(height, k);
    let mut amplitudes = vec![0.0];
    amplitudes.extend_from_slice(&eps.0);
    let rows: Vec<SweepRow> = amplitudes
        .par_iter()
        .map(|&epsilon| {
            let pert = ConformalPerturbation::new(epsilon, profile).expect("amplitude validated");
            SweepRow {
                epsilon,
                solve: perturbed_ground_eigenvalue_with(&grid, &pert, tol, &opts),
                deficit: cylinder_deficit_with(&grid, &pert, rule),
                deficit_continuum: continuum_deficit(height, &pert),
                deficit_leading: pert.leading_order_deficit(),
                first_order: first_order_eigenvalue_shift(&grid, &pert),
            }
        })
        .collect();
    let (baseline, rows) = rows.split_first().expect("baseline row present");
    let lambda_cyl = cylinder_eigenvalue_exact(height, 1, 0);

    let mut table = Table::new(vec![
        "epsilon",
        "lambda_num",
        "lambda_cont",
        "lambda_cyl",
        "offset",
        "D",
        "sqrt_D",
        "D_continuum",
        "D_leading",
        "first_order_shift",
        "shift_from_unperturbed",
        "residual",
        "status",
    ]);
    let mut statuses = Vec::new();
    let base_lambda = baseline.solve.as_ref().map(|s| s.lambda_cont).map_err(|e| e.to_string());
    let mut points = Vec::new();
    for row in rows {
        let mut st = Status::default();
        let (iota, lambda_cont, residual) = match (&row.solve, &base_lambda) {
            (Ok(s), Ok(_)) => (s.iota, s.lambda_cont, s.residual),
            (Err(e), _) => {
                st.solver = Some(e.to_string());
                (f64::NAN, f64::NAN, f64::NAN)
            }
            (Ok(s), Err(e)) => {
                st.solver = Some(format!("unperturbed solve: {e}"));
                (s.iota, s.lambda_cont, s.residual)
            }
        };
        let shift = lambda_cont - base_lambda.as_ref().copied().unwrap_or(f64::NAN);
        match cylinder_reference(row.epsilon).filter(|_| reference_setup) {
            Some(reference) if st.solver.is_none() => {
                st.band("lambda_cont", (lambda_cont - reference.lambda_cont).abs() <= 5e-4);
                st.band("D", rel_close(row.deficit, reference.deficit, 0.06));
                st.flag("lambda_num", (iota - reference.lambda_num).abs() * grid.cell_area() <= 5e-4);
            }
            Some(_) => {}
            None => st.unreferenced = true,
        }
        table.push(vec![
            row.epsilon.into(),
            iota.into(),
            lambda_cont.into(),
            lambda_cyl.into(),
            (lambda_cont - lambda_cyl).into(),
            row.deficit.into(),
            row.deficit.sqrt().into(),
            row.deficit_continuum.into(),
            row.deficit_leading.into(),
            row.first_order.into(),
            shift.into(),
            residual.into(),
            st.text().into(),
        ]);
        points.push((row.epsilon, row.deficit.sqrt(), lambda_cont, shift));
        statuses.push(st);
    }

    let fig3 = scaled_figure(
        "Eigenvalue offsets against square-root deficit",
        "sqrt(D)",
        "absolute eigenvalue offset",
        vec![
            Series::new(
                "|lambda_cont - lambda_cyl|",
                points.iter().map(|p| (p.1, (p.2 - lambda_cyl).abs())).collect(),
                Style::LineMarkers,
            ),
            Series::new(
                "|lambda_cont(eps) - lambda_cont(0)|",
                points.iter().map(|p| (p.1, p.3.abs())).collect(),
                Style::LineMarkers,
            ),
        ],
        "scales chosen logarithmic where the data spans a decade or more.",
    );
    let (e_lo, e_hi) = points
        .iter()
        .filter(|p| p.0 > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), p| (l.min(p.0), h.max(p.0)));
    let mut fig4 = scaled_figure(
        "Continuum-scaled eigenvalue against perturbation amplitude",
        "epsilon",
        "eigenvalue",
        vec![
            Series::new("lambda_cont", points.iter().map(|p| (p.0, p.2)).collect(), Style::LineMarkers),
            Series::new("(pi/h)^2", vec![(e_lo, lambda_cyl), (e_hi, lambda_cyl)], Style::Line),
        ],
        "x logarithmic where it spans a decade or more; y linear.",
    );
    fig4.y_scale = Scale::Linear;
    emit(
        "cylinder-sweep",
        "cylinder_sweep",
        &shared,
        &r.effective,
        &table,
        vec![("fig3_offset_vs_sqrt_deficit", fig3), ("fig4_eigenvalue_vs_amplitude", fig4)],
    )?;
    Ok(summarize("cylinder-sweep", &statuses))
}

fn band_of(identity: Identity) -> f64 {
    match identity {
        Identity::Topping | Identity::ModulusMonotonicity => 1e-8,
        Identity::Hadamard => 1e-4,
    }
}

/// Boundary speeds `(V_in, V_out)` of the non-flow motions.
fn motion_speeds(velocity: VelocityChoice, g: &AnnulusGeometry) -> (f64, f64) {
    match velocity {
        VelocityChoice::Csf => (1.0 / g.inner(), -1.0 / g.outer()),
        VelocityChoice::Frozen => (0.0, 0.0),
        VelocityChoice::Outer => (0.0, 1.0),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Verdict, ConfigError> {
    let file = load(&args.shared.config)?;
    let mut r = Resolver::new(&file);
    let shared = resolve_shared(&mut r, &args.shared)?;
    let inner = r.resolve("inner", args.inner, 1.0)?;
    let outer = r.resolve("outer", args.outer, 5.0)?;
    let t_end = r.resolve("t-end", args.t_end, 0.4)?;
    let samples = r.resolve("samples", args.samples, 5usize)?;
    let fd_step = r.resolve("fd-step", args.fd_step, 1e-5)?;
    let scheme = r.resolve("scheme", args.scheme, SchemeChoice::Central)?;
    let velocity = r.resolve("velocity", args.velocity, VelocityChoice::Csf)?;
    file.check_unused("verify")?;

    AnnulusGeometry::new(inner, outer).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    require(samples >= 1, || "samples must be at least 1".into())?;
    positive("fd-step", fd_step)?;
    let limit = extinction_time(inner);
    require(t_end >= 0.0 && t_end + fd_step < limit, || {
        format!("t-end + fd-step must stay below the inner extinction time {limit}, got t-end = {t_end}")
    })?;
    let scheme = match scheme {
        SchemeChoice::Central => FdScheme::Central,
        SchemeChoice::Richardson => FdScheme::Richardson,
    };
    let times: Vec<f64> = (0..samples)
        .map(|i| if samples == 1 { 0.0 } else { t_end * i as f64 / (samples - 1) as f64 })
        .collect();
    let jobs: Vec<(f64, Identity)> = times
        .iter()
        .flat_map(|&t| [Identity::Topping, Identity::Hadamard, Identity::ModulusMonotonicity].map(|id| (t, id)))
        .collect();

    let results: Vec<Result<IdentityResidualReport, FlowError>> = jobs
        .par_iter()
        .map(|&(t, id)| {
            if velocity == VelocityChoice::Csf {
                return match id {
                    Identity::Topping => verify_topping_with(inner, outer, t, fd_step, scheme),
                    Identity::Hadamard => verify_hadamard_with(inner, outer, t, fd_step, scheme),
                    Identity::ModulusMonotonicity => verify_modulus_rate(inner, outer, t, fd_step),
                };
            }
            let g = AnnulusGeometry::new(specgeom::flow::csf_radius(inner, t), specgeom::flow::csf_radius(outer, t))?;
            let (v_in, v_out) = motion_speeds(velocity, &g);
            let mut rep = match id {
                Identity::Topping => verify_energy_velocities(&g, v_in, v_out, fd_step),
                Identity::Hadamard => verify_hadamard_velocities(&g, v_in, v_out, fd_step),
                Identity::ModulusMonotonicity => verify_modulus_velocities(&g, v_in, v_out, fd_step),
            }?;
            rep.t = t;
            Ok(rep)
        })
        .collect();

    let mut table = Table::new(vec![
        "identity",
        "t",
        "left",
        "right",
        "abs_residual",
        "rel_residual",
        "step",
        "band",
        "status",
    ]);
    let mut statuses = Vec::new();
    for (&(t, id), res) in jobs.iter().zip(&results) {
        let mut st = Status::default();
        let band = band_of(id);
        let row = match res {
            Ok(rep) => {
                st.band("residual", rep.rel_residual <= band);
                if id == Identity::ModulusMonotonicity && velocity == VelocityChoice::Csf {
                    st.band("positive", rep.left > 0.0 && rep.right > 0.0);
                }
                vec![rep.left, rep.right, rep.abs_residual, rep.rel_residual]
            }
            Err(e) => {
                st.solver = Some(e.to_string());
                vec![f64::NAN; 4]
            }
        };
        let mut cells: Vec<Cell> = vec![id.name().into(), t.into()];
        cells.extend(row.into_iter().map(Cell::Real));
        cells.extend([fd_step.into(), band.into(), st.text().into()]);
        table.push(cells);
        statuses.push(st);
    }
    emit("verify", "verify", &shared, &r.effective, &table, Vec::new())?;
    Ok(summarize("verify", &statuses))
}

pub fn gap(args: &GapArgs) -> Result<Verdict, ConfigError> {
    let file = load(&args.shared.config)?;
    let mut r = Resolver::new(&file);
    let shared = resolve_shared(&mut r, &args.shared)?;
    let inner = r.resolve("inner", args.inner, 1.0)?;
    let outer = r.resolve("outer", args.outer.clone(), RealList(table_outer_radii().to_vec()))?;
    let threshold = r.resolve("threshold", args.threshold, DEFAULT_SMALL_DEFICIT_THRESHOLD)?;
    file.check_unused("gap")?;
    positive("threshold", threshold)?;
    let geoms = geometries(inner, &outer.0)?;

    let reports: Vec<Result<SpectralReport, FlowError>> =
        geoms.par_iter().map(|g| gap_report(g, threshold)).collect();
    let mut table = Table::new(vec![
        "a",
        "b",
        "E",
        "h",
        "D",
        "sqrt_D",
        "lambda_ann",
        "lambda_cyl",
        "gap",
        "regime",
        "threshold",
        "boundary_term",
        "weight_sup",
        "sqrt_E",
        "nondegeneracy",
        "dirichlet_residual",
        "ode_residual",
        "mode_n",
        "mode_s",
        "status",
    ]);
    let mut statuses = Vec::new();
    for (g, rep) in geoms.iter().zip(&reports) {
        let mut st = Status::default();
        let mut cells = match rep {
            Ok(rep) => {
                match annulus_reference(rep.a, rep.b) {
                    Some(reference) => st.band("sqrt_D", (rep.sqrt_deficit - reference.sqrt_deficit).abs() <= 1e-4),
                    None => st.unreferenced = true,
                }
                vec![
                    Cell::Real(rep.a),
                    rep.b.into(),
                    rep.energy.into(),
                    rep.modulus.into(),
                    rep.deficit.into(),
                    rep.sqrt_deficit.into(),
                    rep.lambda_ann.into(),
                    rep.lambda_cyl.into(),
                    rep.gap.into(),
                    rep.regime.label().into(),
                    rep.threshold.into(),
                    rep.boundary_term.into(),
                    rep.weight_sup.into(),
                    rep.sqrt_energy.into(),
                    rep.nondegeneracy.into(),
                    rep.dirichlet_residual.into(),
                    rep.ode_residual.into(),
                    rep.ground_order.into(),
                    rep.ground_branch.into(),
                ]
            }
            Err(e) => {
                st.solver = Some(e.to_string());
                let mut v = vec![Cell::Real(g.inner()), g.outer().into(), capacity_energy(g).into()];
                v.extend(std::iter::repeat_n(Cell::Real(f64::NAN), 16));
                v
            }
        };
        cells.push(st.text().into());
        table.push(cells);
        statuses.push(st);
    }
    emit("gap", "gap", &shared, &r.effective, &table, Vec::new())?;
    Ok(summarize("gap", &statuses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn status_text() {
        let mut s = Status::default();
        assert_eq!(s.text(), "pass");
        s.flag("lambda_ann", false);
        assert_eq!(s.text(), "flagged:lambda_ann");
        assert_eq!(s.verdict(), Verdict::Pass);
        s.band("D", false);
        s.band("E", false);
        assert_eq!(s.text(), "fail:D+E;flagged:lambda_ann");
        assert_eq!(s.verdict(), Verdict::BandFailure);
        s.solver = Some("no root".into());
        assert_eq!(s.verdict(), Verdict::SolverFailure);
    }

    #[test]
    fn verdict_precedence() {
        assert!(Verdict::SolverFailure > Verdict::BandFailure);
        assert_eq!([Verdict::Pass, Verdict::SolverFailure, Verdict::BandFailure].into_iter().max().unwrap().exit_code(), 3);
    }

    #[test]
    fn modulus_one_geometry() {
        let g = AnnulusGeometry::new(1.0, (2.0 * PI).exp()).unwrap();
        let p = specgeom::CapacityProfile::of(&g);
        assert!((p.modulus - 1.0).abs() < 1e-15);
        assert!((cylinder_eigenvalue_exact(p.modulus, 1, 0) - PI * PI).abs() < 1e-12);
    }
}
