//! Command-line front end: parses comb expressions, dispatches to the
//! calculus, and emits deterministic JSON (or CSV where requested).

pub mod eval;
pub mod parser;

use clap::{Parser as ClapParser, Subcommand, ValueEnum};
use eigenmeasure::cutproject::{shadow_measure, Lattice2D, WeightedComb};
use eigenmeasure::dft;
use eigenmeasure::fourier;
use eigenmeasure::measure::{FourthRoot, MeasureExpr};
use eigenmeasure::schwartz::{default_probes, verify_transform, TestFunction};
use num_complex::Complex64;
use serde::Serialize;
use std::io::Read;

const DEFAULT_TOL: f64 = 1e-9;
const DEFAULT_WINDOW: f64 = 12.0;

#[derive(ClapParser)]
#[command(name = "eig", about = "Symbolic calculus for Fourier eigenmeasures", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the Fourier transform to EXPR
    Transform { expr: String },
    /// Report which fourth root of unity EXPR is an eigenmeasure for
    Classify {
        expr: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Project EXPR onto one eigenvalue component
    Project {
        #[arg(allow_hyphen_values = true)]
        root: String,
        expr: String,
    },
    /// Eigenvalue multiplicities (and optionally a basis) of the DFT matrix
    Dft {
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        eigenvalue: Option<String>,
    },
    /// Build a sqrt(N)-periodic eigenmeasure from a DFT eigenvector
    Periodic {
        n: usize,
        #[arg(allow_hyphen_values = true)]
        root: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        vector: Option<Vec<f64>>,
    },
    /// Check the symbolic transform of EXPR against test-function pairings
    Verify {
        expr: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        probes: Option<usize>,
    },
    /// Shadow of the rotated planar lattice under a window function
    Shadow {
        #[arg(long)]
        theta: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        window: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        prune: f64,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
    },
    /// List the weighted support of EXPR inside a window
    Sample {
        expr: String,
        #[arg(long)]
        window: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
    },
}

pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let argv = std::iter::once("eig".to_string()).chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                eprintln!("{}", first_line(&e.to_string()));
                return 2;
            }
            print!("{e}");
            return 0;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{}", first_line(&msg));
            2
        }
    }
}

fn first_line(s: &str) -> &str {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("error")
}

fn env_f64(name: &str, default: f64) -> f64 {
    std::env::var(name).ok().and_then(|v| v.parse().ok()).unwrap_or(default)
}

fn tol_or_default(tol: Option<f64>) -> f64 {
    tol.unwrap_or_else(|| env_f64("EIG_TOL", DEFAULT_TOL))
}

fn window_or_default(window: Option<f64>) -> f64 {
    window.unwrap_or_else(|| env_f64("EIG_WINDOW", DEFAULT_WINDOW))
}

fn read_expr(expr: &str) -> Result<String, String> {
    if expr == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("failed to read stdin: {e}"))?;
        Ok(buf.trim().to_string())
    } else {
        Ok(expr.to_string())
    }
}

fn parse_measure(expr: &str) -> Result<MeasureExpr, String> {
    let text = read_expr(expr)?;
    let ast = parser::parse(&text).map_err(|e| e.to_string())?;
    eval::evaluate(&ast).map_err(|e| e.to_string())
}

fn parse_root(root: &str) -> Result<FourthRoot, String> {
    FourthRoot::parse(root).ok_or_else(|| format!("invalid eigenvalue '{root}' (use 1, i, -1, -i)"))
}

fn parse_theta(theta: &str) -> Result<Lattice2D, String> {
    let t = theta.trim();
    if let Some(inner) = t.strip_prefix("atan(").and_then(|s| s.strip_suffix(')')) {
        let (p, q) = inner
            .split_once('/')
            .ok_or_else(|| format!("expected atan(p/q), got '{theta}'"))?;
        let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in '{theta}'"))?;
        let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in '{theta}'"))?;
        Lattice2D::from_rational(p, q).map_err(|e| e.to_string())
    } else {
        let angle: f64 = t.parse().map_err(|_| format!("bad angle '{theta}'"))?;
        Ok(Lattice2D::from_angle(angle))
    }
}

fn parse_window_fn(g: &str) -> Result<TestFunction, String> {
    if let Some(k) = g.strip_prefix("hermite:") {
        let k: usize = k.parse().map_err(|_| format!("bad degree in '{g}'"))?;
        eigenmeasure::schwartz::hermite(k, 0.0).map_err(|e| e.to_string())?;
        Ok(TestFunction::hermite_fn(k))
    } else {
        Err(format!("unsupported window '{g}' (use hermite:K)"))
    }
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

/// Renders a canonical measure back into the expression language, so
/// that parse -> evaluate -> format round-trips. Amplitudes are written
/// as exact dyadic rationals; fails on amplitudes too extreme for that.
pub fn format_measure(mu: &MeasureExpr) -> Result<String, String> {
    let mu = mu.canonicalize();
    let n = mu.ambient_n().ok_or("measure has a non-integer ambient")?;
    if mu.is_zero() {
        return Ok(format!("0*dirac_comb({n})"));
    }
    let mut terms = Vec::new();
    for atom in mu.atoms() {
        let re = dyadic(atom.amp.re).ok_or("amplitude not representable")?;
        let im = dyadic(atom.amp.im).ok_or("amplitude not representable")?;
        let amp = format!("({re}+{im}*i)");
        terms.push(format!(
            "{amp}*Z({}, {}, {n})",
            format_scalar(&atom.r)?,
            format_scalar(&atom.s)?
        ));
    }
    Ok(terms.join(" + "))
}

fn format_scalar(x: &eigenmeasure::QuadScalar) -> Result<String, String> {
    let a = x.rational_part();
    let rational = format!("{}/{}", a.numer(), a.denom());
    if x.is_rational() {
        return Ok(rational);
    }
    let b = x.surd_part();
    Ok(format!("{rational}+{}/{}*sqrt({})", b.numer(), b.denom(), x.radicand()))
}

/// Exact rational form of a float, when the denominator stays a power
/// of two below 2^62 and the numerator fits in i64.
fn dyadic(x: f64) -> Option<String> {
    if x == 0.0 {
        return Some("0".to_string());
    }
    if !x.is_finite() {
        return None;
    }
    let mut num = x;
    let mut den: i64 = 1;
    while num.fract() != 0.0 {
        if den > (1 << 61) || num.abs() > 9e15 {
            return None;
        }
        num *= 2.0;
        den *= 2;
    }
    if num.abs() > 9e18 {
        return None;
    }
    Some(format!("{}/{den}", num as i64))
}

#[derive(Serialize)]
struct ClassifyOut {
    eigenvalue: Option<String>,
}

#[derive(Serialize)]
struct DftOut {
    n: usize,
    multiplicities: [u64; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vectors: Option<Vec<Vec<eigenmeasure::measure::ComplexJson>>>,
}

#[derive(Serialize)]
struct CombAtomOut {
    position: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct ShadowOut {
    theta: String,
    window: String,
    atoms: Vec<CombAtomOut>,
}

fn comb_atoms(w: &WeightedComb) -> Vec<CombAtomOut> {
    w.atoms()
        .iter()
        .map(|&(x, amp)| CombAtomOut { position: x, re: amp.re, im: amp.im })
        .collect()
}

fn comb_csv(atoms: &[CombAtomOut]) -> String {
    let mut out = String::from("position,re,im\n");
    for a in atoms {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", a.position, a.re, a.im));
    }
    out
}

fn dispatch(command: Command) -> Result<i32, String> {
    match command {
        Command::Transform { expr } => {
            let mu = parse_measure(&expr)?;
            let ft = fourier::fourier(&mu).map_err(|e| e.to_string())?;
            emit(&ft.to_json().map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::Classify { expr, tol } => {
            let mu = parse_measure(&expr)?;
            let tol = tol_or_default(tol);
            let eigenvalue = fourier::classify(&mu, tol)
                .map_err(|e| e.to_string())?
                .map(|l| l.as_str().to_string());
            emit(&ClassifyOut { eigenvalue });
            Ok(0)
        }
        Command::Project { root, expr } => {
            let lambda = parse_root(&root)?;
            let mu = parse_measure(&expr)?;
            let p = fourier::project(&mu, lambda).map_err(|e| e.to_string())?;
            emit(&p.to_json().map_err(|e| e.to_string())?);
            Ok(0)
        }
        Command::Dft { n, eigenvalue } => {
            if n == 0 {
                return Err("n must be positive".to_string());
            }
            let (m1, mi, mm1, mmi) = dft::multiplicities(n as u64);
            let mut out = DftOut {
                n,
                multiplicities: [m1, mi, mm1, mmi],
                lambda: None,
                vectors: None,
            };
            if let Some(root) = eigenvalue {
                let lambda = parse_root(&root)?;
                let basis = dft::eigenbasis(n, lambda).map_err(|e| e.to_string())?;
                let json = basis.to_json(n);
                out.lambda = Some(json.lambda);
                out.vectors = Some(json.vectors);
            }
            emit(&out);
            Ok(0)
        }
        Command::Periodic { n, root, vector } => {
            if n == 0 {
                return Err("n must be positive".to_string());
            }
            let lambda = parse_root(&root)?;
            let c: Vec<Complex64> = match vector {
                Some(v) => v.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
                None => {
                    let basis = dft::eigenbasis(n, lambda).map_err(|e| e.to_string())?;
                    match basis.vectors.first() {
                        Some(v) => v.iter().copied().collect(),
                        None => {
                            eprintln!("eigenspace for {} is trivial at n = {n}", lambda.as_str());
                            return Ok(1);
                        }
                    }
                }
            };
            match dft::periodic_eigenmeasure(&c, lambda, n as u64) {
                Ok(mu) => {
                    emit(&mu.to_json().map_err(|e| e.to_string())?);
                    Ok(0)
                }
                Err(eigenmeasure::Error::NotEigenvector { residual, tol }) => {
                    eprintln!("vector is not a DFT eigenvector (residual {residual:.3e} > {tol:.3e})");
                    Ok(1)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Verify { expr, tol, probes } => {
            let mu = parse_measure(&expr)?;
            let tol = tol_or_default(tol);
            let mut probe_set = default_probes();
            if let Some(k) = probes {
                if k == 0 || k > probe_set.len() {
                    return Err(format!("--probes must be in 1..={}", probe_set.len()));
                }
                probe_set.truncate(k);
            }
            let report = verify_transform(&mu, &probe_set, tol).map_err(|e| e.to_string())?;
            let pass = report.pass;
            emit(&report);
            Ok(if pass { 0 } else { 1 })
        }
        Command::Shadow { theta, g, window, prune, out } => {
            let lattice = parse_theta(&theta)?;
            let gfn = parse_window_fn(&g)?;
            let radius = window_or_default(window);
            let w = shadow_measure(&lattice, &gfn, radius, prune).map_err(|e| e.to_string())?;
            let atoms = comb_atoms(&w);
            match out {
                OutFormat::Json => emit(&ShadowOut { theta, window: g, atoms }),
                OutFormat::Csv => print!("{}", comb_csv(&atoms)),
            }
            Ok(0)
        }
        Command::Sample { expr, window, out } => {
            let mu = parse_measure(&expr)?;
            let radius = window_or_default(window);
            match out {
                OutFormat::Json => {
                    let atoms: Vec<CombAtomOut> = mu
                        .support_atoms(radius)
                        .map_err(|e| e.to_string())?
                        .into_iter()
                        .map(|(x, amp)| CombAtomOut { position: x, re: amp.re, im: amp.im })
                        .collect();
                    emit(&atoms);
                }
                OutFormat::Csv => {
                    print!("{}", mu.support_csv(radius).map_err(|e| e.to_string())?);
                }
            }
            Ok(0)
        }
    }
}
