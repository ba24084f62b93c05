//! Command-line front end: `compute`, `heights`, `isogenous`, `eval`.

use crate::atkin::isogenous_from_u;
use crate::eisenval::{format_decimal, from_decimal, values_at_rho};
use crate::fricke_float::{compute_fricke_float, FloatParams};
use crate::fricke_series::{compute_fricke_exact, compute_fricke_polynomial, compute_numerators_series, compute_phi_exact, compute_phi_general, FormTag, DEFAULT_ORDER_GUARD};
use crate::ring::PrimeField;
use crate::volcano::{compute_family_mod, compute_volcano_exact, volcano_params, ClassPoly, VOLCANO_PRIME_START};
use crate::{Error, Family, TriPoly};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Exit status of `isogenous` when the curve has no rational root of U_l.
pub const EXIT_NO_ROOTS: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "fricke", version, about = "Modular polynomials U_l, V_l, W_l and l-isogenous curves")]
pub struct Cli {
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute one polynomial.
    Compute(ComputeArgs),
    /// Relative heights of U, V, W and the numerators.
    Heights(HeightsArgs),
    /// l-isogenous curves of y^2 = x^3 + a x + b over F_p from U_l.
    Isogenous(IsogenousArgs),
    /// E2, E4, E6, Delta and j at q = exp(-2 pi rho).
    Eval(EvalArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Series,
    Float,
    Volcano,
}

impl Method {
    fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Float => "float",
            Method::Volcano => "volcano",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// core JSON file with metadata
    Json,
    /// polynomial in X, E4, E6, D
    Text,
    /// polynomial in X, A, B
    Ab,
}

#[derive(Args, Debug, Clone)]
pub struct ComputeArgs {
    /// prime level l
    #[arg(long)]
    pub ell: Option<u64>,
    /// level N of Phi[f(N tau)]
    #[arg(long = "N", visible_alias = "level")]
    pub n: Option<u64>,
    /// form f for Phi[f(N tau)]: E4, E6 or D
    #[arg(long)]
    pub form: Option<String>,
    /// U, V, W, A or B
    #[arg(long, default_value = "U")]
    pub family: String,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    pub method: Method,
    /// CM discriminant for the volcano method
    #[arg(long, allow_hyphen_values = true)]
    pub disc: Option<i64>,
    /// work modulo this prime only
    #[arg(long)]
    pub prime: Option<u64>,
    /// class polynomial file (`D h` header, then coefficients, leading first)
    #[arg(long)]
    pub classpoly: Option<PathBuf>,
    /// initial guard bits for the float method
    #[arg(long)]
    pub prec_guard: Option<usize>,
    /// node spacing for the float method, as a decimal
    #[arg(long)]
    pub rho_step: Option<String>,
    /// extra q-series terms for the series method
    #[arg(long, default_value_t = DEFAULT_ORDER_GUARD)]
    pub order_guard: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// write here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct HeightsArgs {
    /// every prime 3 <= l <= ell-max
    #[arg(long, default_value_t = 13)]
    pub ell_max: u64,
    /// explicit comma-separated levels instead
    #[arg(long, value_delimiter = ',')]
    pub ell: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "U,V,W,A,B")]
    pub families: Vec<String>,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    pub method: Method,
    /// cache directory for computed polynomials
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct IsogenousArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    #[arg(long)]
    pub ell: u64,
    /// report only this root
    #[arg(long)]
    pub kappa: Option<u64>,
    /// U_l file (JSON); computed when absent
    #[arg(long)]
    pub upoly: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    #[arg(long, default_value = "1")]
    pub rho: String,
    /// working precision in bits
    #[arg(long, default_value_t = 256)]
    pub prec: usize,
    /// significant digits printed
    #[arg(long, default_value_t = 30)]
    pub digits: usize,
}

/// A resolved `compute` job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub target: Target,
    pub method: Method,
    pub disc: Option<i64>,
    pub prime: Option<u64>,
    pub classpoly: Option<PathBuf>,
    pub float: FloatParams,
    pub order_guard: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Fricke { ell: u64, family: Family },
    Phi { n: u64, form: FormTag },
}

impl JobConfig {
    pub fn from_args(a: &ComputeArgs) -> Result<JobConfig, Error> {
        let target = match (a.ell, a.n) {
            (Some(ell), None) => {
                let family = Family::parse(&a.family)?;
                if family == Family::Phi {
                    return Err(Error::Input("use --N and --form for Phi".into()));
                }
                if !crate::arith::is_prime(ell) {
                    return Err(Error::Input(format!("l = {ell} is not prime")));
                }
                Target::Fricke { ell, family }
            }
            (None, Some(n)) => {
                let form = FormTag::parse(a.form.as_deref().unwrap_or("E4"))?;
                Target::Phi { n, form }
            }
            _ => return Err(Error::Input("give exactly one of --ell and --N".into())),
        };
        let mut float = FloatParams::default();
        if let Some(g) = a.prec_guard {
            float.guard_bits = g;
        }
        if let Some(s) = &a.rho_step {
            float.rho_step = s.clone();
        }
        Ok(JobConfig {
            target,
            method: a.method,
            disc: a.disc,
            prime: a.prime,
            classpoly: a.classpoly.clone(),
            float,
            order_guard: a.order_guard,
            seed: a.seed,
        })
    }

    fn class_poly(&self, ell: u64) -> Result<ClassPoly, Error> {
        if let Some(path) = &self.classpoly {
            return ClassPoly::load(path);
        }
        match self.disc {
            Some(d) => ClassPoly::builtin(d).ok_or_else(|| Error::Input(format!("no shipped class polynomial for D = {d}; pass --classpoly"))),
            None => ClassPoly::builtin_for(ell),
        }
    }
}

/// Polynomial plus run metadata.
#[derive(Clone, Debug)]
pub struct Computed {
    pub poly: TriPoly,
    pub meta: serde_json::Value,
}

pub fn cmd_compute(cfg: &JobConfig) -> Result<Computed, Error> {
    let start = Instant::now();
    let mut meta = json!({ "method": cfg.method.as_str(), "seed": cfg.seed });
    let poly = match cfg.target {
        Target::Phi { n, form } => {
            if cfg.method != Method::Series {
                return Err(Error::Input("Phi is only available with the series method".into()));
            }
            match cfg.prime {
                Some(p) => compute_phi_general(n, form, checked_field(p)?, cfg.order_guard)?,
                None => compute_phi_exact(n, form, cfg.order_guard)?,
            }
        }
        Target::Fricke { ell, family } => match cfg.method {
            Method::Series => series(ell, family, cfg)?,
            Method::Float => {
                if cfg.prime.is_some() {
                    return Err(Error::Input("the float method gives integers; drop --prime".into()));
                }
                let run = compute_fricke_float(ell, family, &cfg.float)?;
                meta["precision_bits"] = json!(run.prec);
                meta["attempts"] = json!(run.attempts);
                meta["nodes"] = json!(run.nodes);
                run.poly
            }
            Method::Volcano => {
                let cp = cfg.class_poly(ell)?;
                meta["disc"] = json!(cp.disc);
                match cfg.prime {
                    Some(p) => {
                        let vp = volcano_params(ell, cp.disc, p)
                            .ok_or_else(|| Error::Input(format!("{p} is not a volcano prime for l = {ell}, D = {}", cp.disc)))?;
                        meta["primes"] = json!([p]);
                        compute_family_mod(&vp, &cp, family, cfg.seed)?
                    }
                    None => {
                        let run = compute_volcano_exact(ell, family, &cp, VOLCANO_PRIME_START, cfg.seed)?;
                        meta["primes"] = json!(run.primes);
                        run.poly
                    }
                }
            }
        },
    };
    meta["seconds"] = json!(start.elapsed().as_secs_f64());
    if poly.modulus.is_none() && poly.family != Family::Phi {
        if let Ok(ab) = poly.to_ab_form() {
            meta["log_height"] = json!(ab.log_height()?);
            meta["relative_height"] = json!(ab.relative_height()?);
        }
    }
    Ok(Computed { poly, meta })
}

fn checked_field(p: u64) -> Result<PrimeField, Error> {
    if !crate::arith::is_prime(p) || p <= 1728 || p >= 1 << 63 {
        return Err(Error::Input(format!("--prime must be a prime in (1728, 2^63), got {p}")));
    }
    Ok(PrimeField::new(p))
}

fn series(ell: u64, family: Family, cfg: &JobConfig) -> Result<TriPoly, Error> {
    match (family, cfg.prime) {
        (Family::U | Family::V | Family::W, None) => compute_fricke_exact(ell, family, cfg.order_guard),
        (Family::U | Family::V | Family::W, Some(p)) => compute_fricke_polynomial(ell, family, checked_field(p)?, cfg.order_guard),
        (Family::A | Family::B, None) => {
            let u = compute_fricke_exact(ell, Family::U, cfg.order_guard)?;
            let (a, b) = compute_numerators_series(ell, &u)?;
            Ok(if family == Family::A { a } else { b })
        }
        (Family::A | Family::B, Some(p)) => {
            let u = compute_fricke_polynomial(ell, Family::U, checked_field(p)?, cfg.order_guard)?;
            crate::fricke_series::compute_numerator_mod(ell, &u, family, p)
        }
        (Family::Phi, _) => Err(Error::Input("use --N and --form for Phi".into())),
    }
}

pub fn render(c: &Computed, format: Format) -> Result<String, Error> {
    Ok(match format {
        Format::Json => {
            let mut f = c.poly.to_file();
            f.meta = Some(c.meta.clone());
            serde_json::to_string_pretty(&f).map_err(|e| Error::Input(e.to_string()))? + "\n"
        }
        Format::Text => format!("{}\n", c.poly),
        Format::Ab => format!("{}\n", c.poly.to_ab_form()?),
    })
}

fn cache_path(dir: &Path, family: Family, ell: u64, method: Method) -> PathBuf {
    dir.join(format!("{}_{}_{}.json", family.as_str(), ell, method.as_str()))
}

/// One polynomial for the heights table, through the cache when given.
pub fn cached_poly(ell: u64, family: Family, method: Method, cache: Option<&Path>, seed: u64) -> Result<TriPoly, Error> {
    if let Some(dir) = cache {
        let path = cache_path(dir, family, ell, method);
        if path.exists() {
            return TriPoly::from_json(&std::fs::read_to_string(&path)?);
        }
    }
    let cfg = JobConfig {
        target: Target::Fricke { ell, family },
        method,
        disc: None,
        prime: None,
        classpoly: None,
        float: FloatParams::default(),
        order_guard: DEFAULT_ORDER_GUARD,
        seed,
    };
    let poly = cmd_compute(&cfg)?.poly;
    if let Some(dir) = cache {
        std::fs::create_dir_all(dir)?;
        std::fs::write(cache_path(dir, family, ell, method), poly.to_json())?;
    }
    Ok(poly)
}

/// Rows `(l, [H~ per family])`.
pub fn cmd_heights(levels: &[u64], families: &[Family], method: Method, cache: Option<&Path>, seed: u64) -> Result<Vec<(u64, Vec<f64>)>, Error> {
    let mut rows = Vec::new();
    for &ell in levels {
        let mut hs = Vec::new();
        for &fam in families {
            let p = cached_poly(ell, fam, method, cache, seed)?;
            hs.push(p.to_ab_form()?.relative_height()?);
        }
        rows.push((ell, hs));
    }
    Ok(rows)
}

/// Text rows `kappa A* B* kappa1`, plus diagnostics for failed roots.
pub struct IsogenousReport {
    pub lines: Vec<String>,
    pub diagnostics: Vec<String>,
}

pub fn cmd_isogenous(args: &IsogenousArgs) -> Result<IsogenousReport, Error> {
    let p = args.p;
    if !crate::arith::is_prime(p) || p < 5 {
        return Err(Error::Input(format!("--p must be a prime > 3, got {p}")));
    }
    let u = match &args.upoly {
        Some(path) => TriPoly::from_json(&std::fs::read_to_string(path)?)?,
        None => compute_fricke_exact(args.ell, Family::U, DEFAULT_ORDER_GUARD)?,
    };
    if u.family != Family::U {
        return Err(Error::Input(format!("{} is not a U polynomial", u.family.as_str())));
    }
    let a = crate::arith::from_i64(args.a, p);
    let b = crate::arith::from_i64(args.b, p);
    let mut found = isogenous_from_u(args.ell, a, b, &u, p)?;
    if let Some(k) = args.kappa {
        found.retain(|r| r.0 == k % p);
        if found.is_empty() {
            return Err(Error::Input(format!("{k} is not a root of U_{} for this curve", args.ell)));
        }
    }
    let mut rep = IsogenousReport { lines: Vec::new(), diagnostics: Vec::new() };
    for (k, r) in found {
        match r {
            Ok(c) => rep.lines.push(format!("{} {} {} {}", c.kappa, c.a_star, c.b_star, c.kappa1)),
            Err(e) => rep.diagnostics.push(format!("{k}: {e}")),
        }
    }
    Ok(rep)
}

fn levels(h: &HeightsArgs) -> Vec<u64> {
    if !h.ell.is_empty() {
        return h.ell.clone();
    }
    (3..=h.ell_max).filter(|&l| crate::arith::is_prime(l)).collect()
}

/// Run a parsed command line, writing results to `out`; returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    if let Some(j) = cli.jobs {
        // a second call in one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    match &cli.command {
        Command::Compute(a) => {
            let cfg = JobConfig::from_args(a)?;
            let text = render(&cmd_compute(&cfg)?, a.format)?;
            match &a.output {
                Some(path) => std::fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Heights(h) => {
            let fams: Vec<Family> = h.families.iter().map(|s| Family::parse(s.trim())).collect::<Result<_, _>>()?;
            let rows = cmd_heights(&levels(h), &fams, h.method, h.cache.as_deref(), h.seed)?;
            let head: Vec<&str> = fams.iter().map(|f| f.as_str()).collect();
            writeln!(out, "l\t{}", head.join("\t"))?;
            for (ell, hs) in rows {
                let cells: Vec<String> = hs.iter().map(|h| format!("{h:.3}")).collect();
                writeln!(out, "{ell}\t{}", cells.join("\t"))?;
            }
            Ok(0)
        }
        Command::Isogenous(a) => {
            let rep = cmd_isogenous(a)?;
            for l in &rep.lines {
                writeln!(out, "{l}")?;
            }
            for d in &rep.diagnostics {
                eprintln!("degenerate root {d}");
            }
            Ok(if !rep.diagnostics.is_empty() {
                4
            } else if rep.lines.is_empty() {
                EXIT_NO_ROOTS
            } else {
                0
            })
        }
        Command::Eval(e) => {
            let rho = from_decimal(&e.rho, e.prec + 32)?;
            let v = values_at_rho(&rho, e.prec)?;
            for (name, x) in [("E2", &v.e2), ("E4", &v.e4), ("E6", &v.e6), ("Delta", &v.delta), ("j", &v.j)] {
                writeln!(out, "{name}\t{}", format_decimal(x, e.digits))?;
            }
            Ok(0)
        }
    }
}
