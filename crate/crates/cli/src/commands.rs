use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use foursym::connection::{
    admissibility, coefficient_bookkeeping, curvature_real, default_lambdas, dual_path_agreement, grade_split,
    gridio, harmonicity_residuals, lambda_flatness, maurer_cartan, system_residuals, AdmissibilityReport,
    BookkeepingReport, DiscreteOneForm, DualPathReport, FrameGrid, Grid2D, HarmonicityReport, LambdaReport,
    McOptions, SplitTable, SystemResiduals, C_HARM, DUAL_PATH_FACTOR, MARGIN,
};
use foursym::fourbundle::{
    affine_spec, complex_grassmannian_spec, enumerate_complex_classes, enumerate_real_classes,
    real_grassmannian_spec, sphere_spec, FourSymmetricSpec,
};
use foursym::io::{load_spec, save_spec, AlgebraJson, AutomorphismJson};
use foursym::liecore::{check_grading, z4_decompose};
use foursym::linalg::standard_j;
use foursym::quatgeom::Chirality;
use foursym::report::{Order, ResidualReport, ROUND_OFF};
use foursym::surfaces::{
    clifford_torus_immersion, g0_geodesic_frames, geodesic_cylinder, rho_surface, LiftedImmersion, C_LAMBDA,
};
use foursym::Error;

use crate::args::{DecomposeArgs, ExampleArgs, ExampleName, FlatnessArgs, VharmonicArgs};

/// Failure classes, mapped one-to-one onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Io(String),
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Format(_) => Failure::Io(e.to_string()),
            Error::ZeroLambda => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

/// A finished command: the JSON report and whether every check passed.
pub struct Outcome {
    pub report: Value,
    pub pass: bool,
}

fn envelope<C: Serialize, R: Serialize>(command: &str, config: &C, tolerances: Value, result: &R, pass: bool) -> Outcome {
    let report = json!({
        "tool": "foursym",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "tolerances": tolerances,
        "result": result,
        "pass": pass,
    });
    Outcome { report, pass }
}

/// Eigenspace dimensions keyed by grade (`g1`, `g-1` complex).
fn dims_json(d: &[usize; 4]) -> Value {
    json!({ "g0": d[0], "g2": d[2], "g1": d[1], "g-1": d[3] })
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn schema<T: serde::de::DeserializeOwned>(v: Value, path: &Path) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

pub fn decompose(args: &DecomposeArgs) -> Result<Outcome, Failure> {
    let alg_json: AlgebraJson = schema(read_json(&args.algebra)?, &args.algebra)?;
    let mut tau_value = read_json(&args.tau)?;
    if let Some(t) = tau_value.get("tau") {
        tau_value = t.clone();
    }
    let tau_json: AutomorphismJson = schema(tau_value, &args.tau)?;
    let alg = alg_json.build::<f64>()?;
    let tau = tau_json.build(&alg)?;
    let tol = args.tol.unwrap_or(1e-9);
    let grading = z4_decompose(&alg, &tau)?;
    let recheck = check_grading(&alg, &grading);
    let g0_basis: Vec<Vec<Vec<f64>>> = (0..grading.g0.ncols())
        .map(|c| matrix_rows(&alg.element(&grading.g0.column(c).into_owned())))
        .collect();
    let pass = grading.closure_residual <= tol && recheck <= tol && alg.closure_residual <= tol && alg.jacobi_residual <= tol;
    let result = json!({
        "algebra_dim": alg.dim(),
        "dims": dims_json(&grading.dims()),
        "algebra_closure_residual": alg.closure_residual,
        "jacobi_residual": alg.jacobi_residual,
        "grading_closure_residual": grading.closure_residual,
        "grading_recheck_residual": recheck,
        "g0_basis": g0_basis,
    });
    Ok(envelope("decompose", args, json!({ "closure": tol }), &result, pass))
}

/// A grid file turned into a Maurer-Cartan form.
struct Level {
    file: PathBuf,
    source: &'static str,
    frames: Option<FrameGrid<f64>>,
    alpha: DiscreteOneForm<f64>,
}

fn load_level(path: &Path, spec: &FourSymmetricSpec<f64>, allow_form: bool) -> Result<Level, Failure> {
    let magic = gridio::sniff(path)?;
    let alg = &spec.algebra;
    if &magic == gridio::FORM_MAGIC && allow_form {
        let alpha = gridio::load_form::<f64>(path)?;
        if alpha.dim() != alg.dim() {
            return Err(Failure::Io(format!("{}: form has dimension {}, spec algebra {}", path.display(), alpha.dim(), alg.dim())));
        }
        Ok(Level { file: path.to_owned(), source: "form", frames: None, alpha })
    } else if &magic == gridio::FRAME_MAGIC {
        let frames = gridio::load_frames::<f64>(path)?;
        if frames.n != alg.n {
            return Err(Failure::Io(format!("{}: {n}x{n} frames, spec uses {m}x{m}", path.display(), n = frames.n, m = alg.n)));
        }
        let alpha = maurer_cartan(alg, &frames, McOptions::default())?;
        Ok(Level { file: path.to_owned(), source: "frames", frames: Some(frames), alpha })
    } else {
        Err(Failure::Io(format!("{}: not a {} file", path.display(), if allow_form { "form or frame grid" } else { "frame grid" })))
    }
}

fn load_levels(paths: &[PathBuf], spec: &FourSymmetricSpec<f64>, allow_form: bool) -> Result<Vec<Level>, Failure> {
    let levels: Vec<Level> = paths.par_iter().map(|p| load_level(p, spec, allow_form)).collect::<Result<_, _>>()?;
    for w in levels.windows(2) {
        if w[1].alpha.grid.h >= w[0].alpha.grid.h {
            return Err(Failure::Usage("grids must be listed coarse to fine (decreasing h)".into()));
        }
    }
    Ok(levels)
}

#[derive(Serialize)]
struct OrderRow {
    name: String,
    coarse: f64,
    fine: f64,
    order: Order,
    pass: bool,
}

fn order_rows(named: &[Vec<(String, f64)>], h: &[f64], min_order: f64) -> Vec<Vec<OrderRow>> {
    (1..named.len())
        .map(|l| {
            named[l]
                .iter()
                .zip(&named[l - 1])
                .map(|((name, fine), (_, coarse))| {
                    let order = Order::between(*coarse, *fine, h[l - 1] / h[l], ROUND_OFF);
                    OrderRow { name: name.clone(), coarse: *coarse, fine: *fine, order, pass: order.at_least(min_order) }
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct FlatnessLevel {
    file: String,
    source: &'static str,
    h: f64,
    nodes: [usize; 2],
    margin: usize,
    tol: f64,
    bookkeeping_tol: f64,
    plain_curvature: ResidualReport,
    lambda: LambdaReport,
    system: SystemResiduals,
    bookkeeping: BookkeepingReport,
    pass: bool,
}

pub fn flatness(args: &FlatnessArgs) -> Result<Outcome, Failure> {
    let spec = load_spec::<f64>(&args.spec)?;
    let lambdas: Vec<Complex64> = match &args.lambdas {
        Some(l) => l.0.clone(),
        None => default_lambdas(),
    };
    let levels = load_levels(&args.grids, &spec, true)?;
    let alg = &spec.algebra;
    let rows: Vec<FlatnessLevel> = levels
        .par_iter()
        .map(|lv| -> Result<FlatnessLevel, Failure> {
            let g = lv.alpha.grid;
            let gf = grade_split(&spec.grading, &lv.alpha);
            let tol = args.tol.unwrap_or(C_LAMBDA * lv.alpha.residual_scale(alg, MARGIN) + ROUND_OFF);
            let smax = lv.alpha.max_norm(alg, MARGIN);
            let bookkeeping_tol = 1e-8 * (1.0 + smax * smax);
            let plain: Vec<f64> = curvature_real(alg, &lv.alpha).iter().map(|x| alg.norm(x)).collect();
            let lambda = lambda_flatness(alg, &gf, &lambdas)?;
            let system = system_residuals(alg, &gf);
            let bookkeeping = coefficient_bookkeeping(alg, &spec.grading, &gf)?;
            let pass = lambda.curvature.iter().all(|r| r.max <= tol)
                && [&system.a, &system.b, &system.c].iter().all(|r| r.max <= tol)
                && bookkeeping.projection <= bookkeeping_tol
                && bookkeeping.grade <= bookkeeping_tol;
            Ok(FlatnessLevel {
                file: lv.file.display().to_string(),
                source: lv.source,
                h: g.h,
                nodes: [g.nu, g.nv],
                margin: MARGIN,
                tol,
                bookkeeping_tol,
                plain_curvature: ResidualReport::new(&g, MARGIN, plain),
                lambda,
                system,
                bookkeeping,
                pass,
            })
        })
        .collect::<Result<_, _>>()?;
    let named: Vec<Vec<(String, f64)>> = rows
        .iter()
        .map(|r| {
            let mut v: Vec<(String, f64)> =
                r.lambda.lambdas.iter().zip(&r.lambda.curvature).map(|(l, c)| (format!("curvature[{}{:+}i]", l.0, l.1), c.max)).collect();
            v.push(("system_a".into(), r.system.a.max));
            v.push(("system_b".into(), r.system.b.max));
            v.push(("system_c".into(), r.system.c.max));
            v
        })
        .collect();
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let orders = order_rows(&named, &h, args.min_order);
    let pass = rows.iter().all(|r| r.pass) && orders.iter().flatten().all(|o| o.pass);
    let tolerances = json!({
        "residual": args.tol.map_or_else(|| format!("{C_LAMBDA} h^2 s^4 + {ROUND_OFF:e}"), |t| t.to_string()),
        "bookkeeping": "1e-8 (1 + max|α|^2)",
        "min_order": args.min_order,
        "round_off": ROUND_OFF,
    });
    let result = json!({ "levels": rows, "orders": orders });
    Ok(envelope("flatness", args, tolerances, &result, pass))
}

#[derive(Serialize)]
struct VharmonicLevel {
    file: String,
    h: f64,
    nodes: [usize; 2],
    tol: f64,
    dual_tol: f64,
    admissibility: AdmissibilityReport,
    harmonicity: HarmonicityReport,
    split: SplitTable,
    split_holds: bool,
    dual_path: DualPathReport,
    vertically_harmonic: bool,
    pass: bool,
}

pub fn vharmonic(args: &VharmonicArgs) -> Result<Outcome, Failure> {
    let spec = load_spec::<f64>(&args.spec)?;
    let levels = load_levels(&args.frames, &spec, false)?;
    let alg = &spec.algebra;
    let rows: Vec<VharmonicLevel> = levels
        .par_iter()
        .map(|lv| -> Result<VharmonicLevel, Failure> {
            let g = lv.alpha.grid;
            let frames = lv.frames.as_ref().expect("frame input");
            let gf = grade_split(&spec.grading, &lv.alpha);
            let tol = args.tol.unwrap_or(C_HARM * lv.alpha.residual_scale(alg, MARGIN) + ROUND_OFF);
            let dual_tol = DUAL_PATH_FACTOR.abs() * tol;
            let adm = admissibility(alg, &gf, None);
            let harmonicity = harmonicity_residuals(alg, &spec.grading, &gf);
            let split = SplitTable::new(&harmonicity, tol);
            let dual_path = dual_path_agreement(&spec, frames, &gf)?;
            let vertically_harmonic = harmonicity.vertical.max <= tol;
            let pass = adm.pass && split.holds() && vertically_harmonic && dual_path.difference.max <= dual_tol;
            Ok(VharmonicLevel {
                file: lv.file.display().to_string(),
                h: g.h,
                nodes: [g.nu, g.nv],
                tol,
                dual_tol,
                admissibility: adm,
                split_holds: split.holds(),
                harmonicity,
                split,
                dual_path,
                vertically_harmonic,
                pass,
            })
        })
        .collect::<Result<_, _>>()?;
    let named: Vec<Vec<(String, f64)>> = rows
        .iter()
        .map(|r| vec![("vertical".to_string(), r.harmonicity.vertical.max), ("dual_path_difference".to_string(), r.dual_path.difference.max)])
        .collect();
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let orders = order_rows(&named, &h, args.min_order);
    let pass = rows.iter().all(|r| r.pass) && orders.iter().flatten().all(|o| o.pass);
    let tolerances = json!({
        "residual": args.tol.map_or_else(|| format!("{C_HARM} h^2 s^4 + {ROUND_OFF:e}"), |t| t.to_string()),
        "dual_path": format!("{} x residual", DUAL_PATH_FACTOR.abs()),
        "split_slack": foursym::connection::SPLIT_SLACK,
        "min_order": args.min_order,
        "round_off": ROUND_OFF,
    });
    let result = json!({ "levels": rows, "orders": orders });
    Ok(envelope("vharmonic", args, tolerances, &result, pass))
}

fn grid_for(nu: usize, nv: usize, h: f64) -> Result<Grid2D, Failure> {
    Ok(Grid2D::new(nu + 1, nv + 1, h, false, false)?)
}

fn write_spec_files(dir: &Path, spec: &FourSymmetricSpec<f64>) -> Result<Vec<String>, Failure> {
    save_spec(&dir.join("spec.json"), spec)?;
    let alg = serde_json::to_string_pretty(&AlgebraJson::from_algebra(&spec.algebra)).expect("serializable");
    let tau = serde_json::to_string_pretty(&AutomorphismJson::from_automorphism(&spec.grading.tau)).expect("serializable");
    for (name, text) in [("algebra.json", alg), ("tau.json", tau)] {
        std::fs::write(dir.join(name), text + "\n").map_err(|e| Failure::Io(format!("{name}: {e}")))?;
    }
    Ok(vec!["spec.json".into(), "algebra.json".into(), "tau.json".into()])
}

fn frame_name(level: usize, levels: usize) -> String {
    if levels == 1 {
        "frame.grid".into()
    } else {
        format!("frame.r{level}.grid")
    }
}

pub fn example(args: &ExampleArgs, out: &Path) -> Result<Outcome, Failure> {
    if args.refine == 0 {
        return Err(Failure::Usage("--refine must be at least 1".into()));
    }
    if args.nu < 2 || args.nv < 2 {
        return Err(Failure::Usage("--nu and --nv must be at least 2".into()));
    }
    if args.refine > 6 {
        return Err(Failure::Usage("--refine is capped at 6 levels".into()));
    }
    std::fs::create_dir_all(out).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    let scale = |k: usize| 1usize << k;
    let mut extra = json!({});
    let (spec, frames): (FourSymmetricSpec<f64>, Vec<FrameGrid<f64>>) = match args.name {
        ExampleName::CliffordTorus => {
            let tau = 2.0 * std::f64::consts::PI;
            let mut lifts = Vec::with_capacity(args.refine);
            for k in 0..args.refine {
                let (nu, nv) = (args.nu * scale(k), args.nv * scale(k));
                let x = clifford_torus_immersion::<f64>(nu + 1, nv + 1, tau / nu as f64)?;
                let rho = rho_surface(&x, Chirality::Plus)?;
                // One reference point for every level, so all grids share the spec.
                let e = lifts.first().map_or(rho[0], |l: &LiftedImmersion<f64>| l.e);
                lifts.push(LiftedImmersion::with_reference(x, &rho, e, &[1], Chirality::Plus)?);
            }
            extra = json!({ "hopf_residual": lifts.iter().map(|l| l.hopf_residual).collect::<Vec<_>>() });
            (lifts[0].spec()?, lifts.iter().map(|l| l.frames()).collect())
        }
        ExampleName::Sphere | ExampleName::RealGr | ExampleName::ComplexGr => {
            let spec = match args.name {
                ExampleName::Sphere => sphere_spec::<f64>(args.n, None)?,
                ExampleName::RealGr => {
                    if args.p % 2 == 1 {
                        return Err(Failure::Usage("real-gr uses J1 a complex structure: --p must be even".into()));
                    }
                    if args.r > args.q {
                        return Err(Failure::Usage("--r must not exceed --q".into()));
                    }
                    let j1 = standard_j::<f64>(args.p / 2);
                    let j2 = DMatrix::from_fn(args.q, args.q, |a, b| if a != b { 0.0 } else if a < args.r { 1.0 } else { -1.0 });
                    extra = json!({ "classes": enumerate_real_classes::<f64>(args.p, args.q, args.seed)? });
                    real_grassmannian_spec(args.p, args.q, &j1, &j2)?
                }
                _ => {
                    extra = json!({ "classes": enumerate_complex_classes::<f64>(args.p, args.q, args.seed)? });
                    complex_grassmannian_spec(args.p, args.q, args.l, args.r)?
                }
            };
            let frames = (0..args.refine)
                .map(|k| {
                    let (nu, nv) = (args.nu * scale(k), args.nv * scale(k));
                    grid_for(nu, nv, 1.0 / nu as f64).map(|g| g0_geodesic_frames(&spec, g, args.seed))
                })
                .collect::<Result<_, _>>()?;
            (spec, frames)
        }
        ExampleName::GeodesicCylinder => {
            let spec = affine_spec::<f64>(&[], Chirality::Plus, &nalgebra::Vector3::new(0.0, 0.0, 1.0))?;
            let frames = (0..args.refine)
                .map(|k| {
                    let (nu, nv) = (args.nu * scale(k), args.nv * scale(k));
                    grid_for(nu, nv, 1.0 / nu as f64).map(|g| geodesic_cylinder(&spec, g, args.seed))
                })
                .collect::<Result<_, _>>()?;
            (spec, frames)
        }
    };
    let mut files = write_spec_files(out, &spec)?;
    for (k, f) in frames.iter().enumerate() {
        let name = frame_name(k, frames.len());
        gridio::save_frames(&out.join(&name), f)?;
        files.push(name);
    }
    let result = json!({
        "family": spec.family.as_str(),
        "params": spec.params,
        "dims": dims_json(&spec.grading.dims()),
        "notes": spec.notes,
        "files": files,
        "details": extra,
    });
    Ok(envelope("example", args, json!({}), &result, true))
}
