//! `firstsign`: limiting averages, measures, eigenform censuses, experiments
//! and sieve evaluators from the command line.

mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use firstsign::arith::PrimePower;
use firstsign::averages::{average_nf, average_pf, MeasureAssignment};
use firstsign::experiments::{
    empirical_angle_distribution, empirical_average, empirical_sign_fraction, first_sign_structure,
    positive_pattern_count, trace_limit_experiment, ExperimentReport, FirstNegative, SignCensus, Value,
    WeightRange, DEFAULT_PREC,
};
use firstsign::forms::{eigenforms_from_basis, CoefficientCache, LevelOneRing};
use firstsign::measures::{measure_mass, measure_mass_quadrature, AngleInterval, MeasureSpec};
use firstsign::sieve::{
    complete_sieve_bound, curly_j_bound_grid, delta_bound, kloosterman_sum, petersson_ratio_check,
    petersson_tail, sieve_h, weil_bound, KloostermanTable, PrimeWeights, SieveParams, CURLY_J_CONSTANT,
};
use firstsign::signs::constraint_system;
use firstsign::Error;

use config::Config;
use output::{emit_reports, Format, Table};

/// Published values of the two limiting averages.
const PUBLISHED_AVG_PF: f64 = 3.674_643_966_011_328;
const PUBLISHED_AVG_NF: f64 = 2.942_340_300_053_148_3;

#[derive(Parser, Debug)]
#[command(name = "firstsign", version, about = "First sign changes of level-one Hecke eigenvalues")]
struct Cli {
    /// Emit one JSON object per result.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit tables as CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Settings file (defaults to $FIRSTSIGN_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for cached q-expansion coefficients.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Limiting averages of p_f and n_f with their tail bounds.
    Constants {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Mass of an angle interval under mu_ST or mu_p.
    Measure {
        #[arg(long, value_enum)]
        kind: MeasureKind,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true)]
        hi: f64,
    },
    /// Constraint intervals describing n_f = q^n.
    Intervals {
        /// Target prime power, as q^n or its value.
        #[arg(long)]
        target: PrimePower,
    },
    /// Hecke eigenforms of one weight.
    Forms {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        prec: Option<usize>,
    },
    /// First negative eigenvalues of every form up to a weight.
    Census {
        #[arg(long, default_value_t = 300)]
        kmax: u32,
        #[arg(long, default_value_t = 12)]
        kmin: u32,
        #[arg(long)]
        prec: Option<usize>,
        /// Show the signs of lambda(p) for primes up to this bound.
        #[arg(long, default_value_t = 13)]
        signs: u64,
    },
    /// Run one experiment and report its verdict.
    Experiment {
        #[command(subcommand)]
        id: Experiment,
    },
    /// Kloosterman sums, Petersson tails and sieve bounds.
    Sieve {
        #[command(subcommand)]
        op: SieveOp,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MeasureKind {
    St,
    Plancherel,
}

#[derive(Args, Debug, Clone)]
struct Weights {
    /// Even weights, e.g. 12..300.
    #[arg(long, default_value = "12..300")]
    weights: WeightRange,
    #[arg(long)]
    prec: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Fraction of forms with lambda_f(p) > 0.
    SignFraction {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[command(flatten)]
        w: Weights,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
    },
    /// Histogram of theta_f(p) against interval masses.
    AngleDistribution {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[command(flatten)]
        w: Weights,
        #[arg(long, default_value_t = 4)]
        bins: usize,
        /// Compare with mu_ST instead of mu_p.
        #[arg(long)]
        sato_tate: bool,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
    },
    /// Mean of p_f or n_f against its limit.
    Average {
        #[arg(long, default_value = "n_f")]
        kind: FirstNegative,
        #[command(flatten)]
        w: Weights,
        /// Sanity band; 0.35 for p_f and 0.25 for n_f when omitted.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Forms positive at every prime up to a bound.
    PositivePatterns {
        #[arg(long, default_value_t = 2)]
        bound: u64,
        #[command(flatten)]
        w: Weights,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Normalised traces of T_n against their limit.
    TraceLimit {
        #[arg(long, default_value_t = 4)]
        n: u64,
        #[arg(long, default_value = "12..300")]
        weights: WeightRange,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// n_f is a prime power and n_f <= p_f for every form.
    SignStructure {
        #[command(flatten)]
        w: Weights,
    },
    /// Harmonic-weight ratios from the Petersson formula against lambda(m) lambda(n).
    PeterssonRatio {
        #[arg(long, default_value_t = 12)]
        k: u32,
        #[arg(long, default_value_t = 10)]
        bound: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Squared Bessel sum against its bound on a grid.
    CurlyBound {
        #[arg(long, default_value_t = 40)]
        kmax: u32,
        #[arg(long, value_delimiter = ',', default_value = "0.55,0.6,0.75")]
        alphas: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Weil's bound for all m, n <= bound and c <= cmax.
    WeilBound {
        #[arg(long, default_value_t = 20)]
        bound: u64,
        #[arg(long, default_value_t = 500)]
        cmax: u64,
    },
}

#[derive(Subcommand, Debug)]
enum SieveOp {
    /// S(m, n; c) and Weil's bound.
    Kloosterman {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c: u64,
    },
    /// Kloosterman-Bessel tail of the Petersson formula.
    Tail {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long)]
        c_max: Option<u64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Delta(N, k, M) and the complete sieve bound.
    Bounds {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        level: u64,
        /// Sieve length M.
        #[arg(long)]
        length: f64,
        #[arg(long, default_value_t = 0.75)]
        alpha: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Amplifier sum H over squarefree smooth m.
    HSum {
        #[arg(long)]
        length: u64,
        /// Smoothness bound: only primes up to this divide m.
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        level: u64,
        #[arg(long, default_value_t = 0.25)]
        delta: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.25")]
        coefficients: Vec<f64>,
    },
}

struct Env {
    format: Format,
    prec: usize,
    cache: Option<CoefficientCache>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

fn constants(env: &Env, tol: f64) -> Outcome {
    let pf = average_pf(tol)?;
    let nf = average_nf(tol, MeasureAssignment::TargetPrime)?;
    let nf_product = average_nf(tol, MeasureAssignment::ConstrainedPrime)?;
    let report = |id: &str, s: firstsign::averages::SeriesResult, reference: Option<f64>, convention: &str| {
        let mut p = BTreeMap::new();
        p.insert("tol".to_string(), num(tol));
        p.insert("terms".to_string(), s.terms_used.to_string());
        p.insert("tail_bound".to_string(), num(s.tail_bound));
        if !convention.is_empty() {
            p.insert("measure".to_string(), convention.to_string());
        }
        let (expected, deviation, tolerance) = match reference {
            Some(r) => (r, (s.value - r).abs(), Some(tol)),
            None => (s.value, 0.0, None),
        };
        ExperimentReport::new(id, p, Value::Scalar(s.value), Value::Scalar(expected), deviation, tolerance)
    };
    let reports = vec![
        report("avg_pf", pf, Some(PUBLISHED_AVG_PF), ""),
        report("avg_nf", nf, Some(PUBLISHED_AVG_NF), "target-prime"),
        report("avg_nf_product", nf_product, None, "constrained-prime"),
    ];
    match env.format {
        Format::Text => {
            for r in &reports {
                let Value::Scalar(v) = r.observed else { unreachable!() };
                let reference = match r.tolerance {
                    Some(_) => format!(
                        "published {}, deviation {:.1e}, {}",
                        r.expected,
                        r.deviation,
                        r.verdict
                    ),
                    None => "no published value".to_string(),
                };
                println!(
                    "{} = {}  (terms {}, tail bound {:.1e}; {})",
                    r.id,
                    num(v),
                    r.params["terms"],
                    r.params["tail_bound"].parse::<f64>().unwrap_or(f64::NAN),
                    reference
                );
            }
        }
        f => emit_reports(&reports, f)?,
    }
    Ok(reports.iter().all(ExperimentReport::passed))
}

fn measure(env: &Env, kind: MeasureKind, p: Option<u64>, lo: f64, hi: f64) -> Outcome {
    let spec = match (kind, p) {
        (MeasureKind::St, None) => MeasureSpec::SatoTate,
        (MeasureKind::St, Some(_)) => return Err(Failure::Usage("--p only applies to --kind plancherel".into())),
        (MeasureKind::Plancherel, Some(p)) => MeasureSpec::plancherel(p)?,
        (MeasureKind::Plancherel, None) => return Err(Failure::Usage("--kind plancherel needs --p".into())),
    };
    let iv = AngleInterval::new(lo, hi)?;
    let mass = measure_mass(spec, iv);
    let quad = measure_mass_quadrature(spec, iv, 1e-13)?;
    let mut t = Table::new(&["measure", "lo", "hi", "mass", "quadrature"]);
    t.push(vec![spec.to_string(), num(lo), num(hi), num(mass), num(quad)]);
    t.emit(env.format)?;
    Ok(true)
}

fn intervals(env: &Env, target: PrimePower) -> Outcome {
    let system = constraint_system(target)?;
    let mut t = Table::new(&["prime", "constraint", "lo", "hi", "mass_mu_p", "mass_mu_q"]);
    let mu_q = MeasureSpec::plancherel(target.prime())?;
    for c in &system.constraints {
        let label = match c.exponent {
            Some(a) => format!("A*_{a}"),
            None => format!("B*_{}", target.exponent()),
        };
        t.push(vec![
            c.prime.to_string(),
            label,
            num(c.interval.lo()),
            num(c.interval.hi()),
            num(measure_mass(MeasureSpec::plancherel(c.prime)?, c.interval)),
            num(measure_mass(mu_q, c.interval)),
        ]);
    }
    t.emit(env.format)?;
    Ok(true)
}

fn forms(env: &Env, k: u32, prec: Option<usize>) -> Outcome {
    let prec = prec.unwrap_or(env.prec);
    let ring = LevelOneRing::new(prec, k);
    let basis = match &env.cache {
        Some(c) => c.basis(&ring, k)?,
        None => ring.cuspform_basis(k)?,
    };
    let records = eigenforms_from_basis(&basis)?;
    let mut t = Table::new(&["k", "index", "lambda(2)", "lambda(3)", "lambda(5)", "lambda(7)", "p_f", "n_f", "residual"]);
    for f in &records {
        let l = |n| opt(f.lambda(n).map(|x| format!("{x:.9}")));
        t.push(vec![
            f.weight.to_string(),
            f.index.to_string(),
            l(2),
            l(3),
            l(5),
            l(7),
            opt(f.p_f),
            opt(f.n_f),
            format!("{:.1e}", f.residual),
        ]);
    }
    t.emit(env.format)?;
    Ok(true)
}

fn load_census(env: &Env, weights: WeightRange, prec: Option<usize>) -> Result<SignCensus, Failure> {
    Ok(SignCensus::compute_cached(weights, prec.unwrap_or(env.prec), env.cache.as_ref())?)
}

fn census(env: &Env, kmin: u32, kmax: u32, prec: Option<usize>, signs: u64) -> Outcome {
    let census = load_census(env, WeightRange::new(kmin, kmax)?, prec)?;
    let mut t = Table::new(&["k", "index", "p_f", "n_f", "signs"]);
    for row in census.rows(signs) {
        let s: String = row.signs.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
        t.push(vec![row.k.to_string(), row.index.to_string(), opt(row.p_f), opt(row.n_f), s]);
    }
    t.emit(env.format)?;
    Ok(true)
}

fn experiment(env: &Env, id: Experiment) -> Outcome {
    let report = match id {
        Experiment::SignFraction { p, w, tol } => {
            let c = load_census(env, w.weights, w.prec)?;
            empirical_sign_fraction(&c, p, w.weights, Some(tol))?
        }
        Experiment::AngleDistribution {
            p,
            w,
            bins,
            sato_tate,
            tol,
        } => {
            let c = load_census(env, w.weights, w.prec)?;
            let reference = sato_tate.then_some(MeasureSpec::SatoTate);
            empirical_angle_distribution(&c, p, w.weights, bins, reference, Some(tol))?
        }
        Experiment::Average { kind, w, tol } => {
            let c = load_census(env, w.weights, w.prec)?;
            let band = tol.unwrap_or(match kind {
                FirstNegative::Prime => 0.35,
                FirstNegative::Integer => 0.25,
            });
            empirical_average(&c, kind, w.weights, Some(band))?
        }
        Experiment::PositivePatterns { bound, w, tol } => {
            let c = load_census(env, w.weights, w.prec)?;
            positive_pattern_count(&c, bound, w.weights, tol)?
        }
        Experiment::TraceLimit { n, weights, tol } => trace_limit_experiment(n, weights, Some(tol))?,
        Experiment::SignStructure { w } => {
            let c = load_census(env, w.weights, w.prec)?;
            first_sign_structure(&c, w.weights)?
        }
        Experiment::PeterssonRatio { k, bound, tol } => {
            let r = petersson_ratio_check(k, bound, tol)?;
            let mut p = BTreeMap::new();
            p.insert("k".into(), k.to_string());
            p.insert("bound".into(), bound.to_string());
            p.insert("harmonic_weight".into(), num(r.base));
            if let Some(e) = r.offenders.first() {
                p.insert("first_offender".into(), format!("({}, {})", e.m, e.n));
            }
            let observed = r.entries.iter().map(|e| e.ratio).collect();
            let expected = r.entries.iter().map(|e| e.expected).collect();
            ExperimentReport::new(
                "petersson-ratio",
                p,
                Value::Table(observed),
                Value::Table(expected),
                r.max_error,
                Some(tol),
            )
        }
        Experiment::CurlyBound { kmax, alphas, points } => {
            let ks: Vec<u32> = (4..=kmax).step_by(2).collect();
            let r = curly_j_bound_grid(&ks, &alphas, points, CURLY_J_CONSTANT)?;
            let mut p = BTreeMap::new();
            p.insert("kmax".into(), kmax.to_string());
            p.insert("alphas".into(), format!("{alphas:?}"));
            p.insert("points".into(), r.points.to_string());
            if let Some(w) = r.worst {
                p.insert("worst".into(), format!("k={} alpha={} x={}", w.k, w.alpha, w.x));
            }
            p.insert("offenders".into(), r.offenders.len().to_string());
            ExperimentReport::new(
                "curly-bound",
                p,
                Value::Scalar(r.max_ratio),
                Value::Scalar(r.constant),
                r.max_ratio,
                Some(r.constant),
            )
        }
        Experiment::WeilBound { bound, cmax } => {
            let mut worst: f64 = 0.0;
            let mut offenders = Vec::new();
            for c in 1..=cmax {
                let table = KloostermanTable::new(c)?;
                for m in 1..=bound {
                    for n in 1..=bound {
                        let ratio = table.sum(m, n).abs() / weil_bound(m, n, c);
                        worst = worst.max(ratio);
                        if ratio > 1.0 + 1e-9 {
                            offenders.push(format!("({m},{n},{c})"));
                        }
                    }
                }
            }
            let mut p = BTreeMap::new();
            p.insert("bound".into(), bound.to_string());
            p.insert("cmax".into(), cmax.to_string());
            p.insert("offenders".into(), offenders.join(" "));
            ExperimentReport::new(
                "weil-bound",
                p,
                Value::Scalar(worst),
                Value::Scalar(1.0),
                worst,
                Some(1.0 + 1e-9),
            )
        }
    };
    emit_reports(std::slice::from_ref(&report), env.format)?;
    Ok(report.passed())
}

fn sieve(env: &Env, op: SieveOp) -> Outcome {
    let mut t;
    match op {
        SieveOp::Kloosterman { m, n, c } => {
            let s = kloosterman_sum(m, n, c)?;
            t = Table::new(&["m", "n", "c", "S", "weil_bound"]);
            t.push(vec![m.to_string(), n.to_string(), c.to_string(), num(s), num(weil_bound(m, n, c))]);
        }
        SieveOp::Tail {
            m,
            n,
            k,
            level,
            c_max,
            tol,
        } => {
            let r = petersson_tail(m, n, k, level, c_max, tol)?;
            t = Table::new(&["m", "n", "k", "level", "c_max", "tail", "truncation", "within_tol"]);
            t.push(vec![
                m.to_string(),
                n.to_string(),
                k.to_string(),
                level.to_string(),
                r.c_max.to_string(),
                num(r.value),
                format!("{:.2e}", r.truncation_estimate),
                r.within_tolerance.to_string(),
            ]);
            if !r.within_tolerance {
                eprintln!("warning: truncation estimate {:e} exceeds {tol:e}", r.truncation_estimate);
            }
        }
        SieveOp::Bounds {
            k,
            level,
            length,
            alpha,
            epsilon,
        } => {
            let p = SieveParams::new(k, level, length, alpha)?;
            let delta = match delta_bound(&p) {
                Ok(v) => num(v),
                Err(e) => {
                    eprintln!("note: {e}");
                    "-".into()
                }
            };
            let complete = complete_sieve_bound(length, level, k, epsilon)?;
            t = Table::new(&["k", "level", "M", "alpha", "n", "eta", "constraint", "delta_bound", "complete_bound"]);
            t.push(vec![
                k.to_string(),
                level.to_string(),
                num(length),
                num(alpha),
                num(p.n_param),
                num(p.eta),
                p.constraint_holds.to_string(),
                delta,
                num(complete),
            ]);
        }
        SieveOp::HSum {
            length,
            beta,
            level,
            delta,
            coefficients,
        } => {
            let w = PrimeWeights::new(delta, coefficients)?;
            let h = sieve_h(length, beta, level, &BTreeMap::new(), Some(&w))?;
            t = Table::new(&["M", "beta", "level", "local_factor", "H"]);
            t.push(vec![length.to_string(), num(beta), level.to_string(), num(w.local_factor()), num(h)]);
        }
    }
    t.emit(env.format)?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    let cfg = Config::discover(cli.config.as_deref()).map_err(Failure::Usage)?;
    if let Some(n) = cli.threads.or(cfg.threads) {
        if n == 0 {
            return Err(Failure::Usage("--threads must be >= 1".into()));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cache = match cli.cache_dir.or(cfg.cache_dir) {
        Some(dir) => Some(CoefficientCache::new(dir)?),
        None => None,
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let env = Env {
        format,
        prec: cfg.precision.unwrap_or(DEFAULT_PREC),
        cache,
    };
    match cli.command {
        Command::Constants { tol } => constants(&env, tol),
        Command::Measure { kind, p, lo, hi } => measure(&env, kind, p, lo, hi),
        Command::Intervals { target } => intervals(&env, target),
        Command::Forms { k, prec } => forms(&env, k, prec),
        Command::Census {
            kmax,
            kmin,
            prec,
            signs,
        } => census(&env, kmin, kmax, prec, signs),
        Command::Experiment { id } => experiment(&env, id),
        Command::Sieve { op } => sieve(&env, op),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
