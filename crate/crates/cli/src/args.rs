use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "foursym", version, about = "Zero-curvature and harmonicity checks for twistor lifts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for independent grids (0: rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Write the JSON report here instead of stdout (`example`: output directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Z4 eigenspace decomposition of an algebra under an order-4 automorphism.
    Decompose(DecomposeArgs),
    /// Curvature of the λ-family and the elliptic-system residuals.
    Flatness(FlatnessArgs),
    /// Vertical harmonicity, the harmonicity split and the dual-path check.
    Vharmonic(VharmonicArgs),
    /// Writes spec, algebra, automorphism and frame files for a named example.
    Example(ExampleArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct DecomposeArgs {
    /// Algebra JSON (`n`, `basis`); a spec file also works.
    pub algebra: PathBuf,
    /// Automorphism JSON (`matrix`, `order`); a spec file also works.
    pub tau: PathBuf,
    /// Closure tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct FlatnessArgs {
    /// `form.grid` or `frame.grid` files, coarse to fine.
    #[arg(required = true)]
    pub grids: Vec<PathBuf>,
    #[arg(long)]
    pub spec: PathBuf,
    /// Absolute tolerance overriding the `C h^2 s^4` default.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Comma separated spectral parameters, complex as `a+bi`.
    #[arg(long, value_parser = parse_lambdas)]
    pub lambdas: Option<Lambdas>,
    /// Minimum empirical order between consecutive grids.
    #[arg(long, default_value_t = 1.8)]
    pub min_order: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct VharmonicArgs {
    /// `frame.grid` files, coarse to fine.
    #[arg(required = true)]
    pub frames: Vec<PathBuf>,
    #[arg(long)]
    pub spec: PathBuf,
    /// Absolute tolerance overriding the `C h^2 s^4` default.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 1.8)]
    pub min_order: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleName {
    CliffordTorus,
    Sphere,
    RealGr,
    ComplexGr,
    GeodesicCylinder,
}

#[derive(Args, Debug, Serialize)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub name: ExampleName,
    /// Intervals along u.
    #[arg(long, default_value_t = 64)]
    pub nu: usize,
    /// Intervals along v.
    #[arg(long, default_value_t = 64)]
    pub nv: usize,
    /// Number of grids, each halving the step of the previous one.
    #[arg(long, default_value_t = 1)]
    pub refine: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Sphere `S^{2n}`.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Complex Grassmannian: `+i` eigenvalues of `J1`.
    #[arg(long, default_value_t = 1)]
    pub l: usize,
    /// Grassmannians: `+1` eigenvalues of `J2`.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Lambdas(#[serde(serialize_with = "ser_complex")] pub Vec<Complex64>);

fn ser_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

pub fn parse_lambdas(s: &str) -> Result<Lambdas, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let t = part.trim();
        let z: Complex64 = t.parse().map_err(|_| format!("cannot parse `{t}` as a complex number"))?;
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(format!("`{t}` is not finite"));
        }
        if z.norm() == 0.0 {
            return Err("λ must be non-zero".into());
        }
        out.push(z);
    }
    Ok(Lambdas(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambdas_parse_complex_forms() {
        let l = parse_lambdas("2, 0.5, 1+2i, -0.5-1.5i, 3i").unwrap().0;
        assert_eq!(l, vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, -1.5),
            Complex64::new(0.0, 3.0)
        ]);
    }

    #[test]
    fn zero_lambda_rejected() {
        assert!(parse_lambdas("1,0").is_err());
        assert!(parse_lambdas("0+0i").is_err());
        assert!(parse_lambdas("abc").is_err());
    }
}
