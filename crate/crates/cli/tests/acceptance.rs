//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use firstsign::arith::{primes_up_to, PrimePower};
use firstsign::experiments::{
    empirical_angle_distribution, empirical_sign_fraction, first_sign_structure, trace_limit_experiment, SignCensus,
    WeightRange,
};
use firstsign::forms::basis::cusp_dimension;
use firstsign::forms::{hecke_matrix_on, HeckeMatrix, LevelOneRing};
use firstsign::measures::{chebyshev_moment, measure_mass, measure_mass_quadrature, quadrature::integrate, AngleInterval, MeasureSpec};
use firstsign::sieve::{curly_j_bound_grid, petersson_ratio_check, weil_bound, KloostermanTable, CURLY_J_CONSTANT};
use firstsign::signs::chebyshev_u;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("took {elapsed:.1?}, limit {limit:?}"))
}

fn census() -> &'static SignCensus {
    static CENSUS: std::sync::OnceLock<SignCensus> = std::sync::OnceLock::new();
    CENSUS.get_or_init(|| SignCensus::compute(WeightRange::new(12, 300).unwrap(), 200).unwrap())
}

fn constants_reproduction() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_firstsign"))
        .args(["constants", "--tol", "1e-9"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let read = |key: &str| -> Result<f64, String> {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .and_then(|rest| rest.split_whitespace().next())
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| format!("no `{key} = ` line in output"))
    };
    let pf = read("avg_pf")?;
    let nf = read("avg_nf")?;
    let product = read("avg_nf_product")?;
    ensure((pf - 3.674643966011328).abs() <= 1e-9, || format!("avg_pf = {pf}"))?;
    ensure((nf - 2.9423403000531483).abs() <= 1e-9, || format!("avg_nf = {nf}"))?;
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "avg_pf = {pf}, avg_nf = {nf} (constrained-prime measures give {product}), {elapsed:.2?}"
    ))
}

fn measure_cross_validation() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(20);
    let primes = [2u64, 3, 5, 53];
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let p = primes[case % primes.len()];
        let spec = MeasureSpec::plancherel(p).map_err(|e| e.to_string())?;
        let (a, b): (f64, f64) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..PI));
        let iv = AngleInterval::new(a.min(b), a.max(b)).map_err(|e| e.to_string())?;
        let closed = measure_mass(spec, iv);
        let quad = measure_mass_quadrature(spec, iv, 1e-13).map_err(|e| e.to_string())?;
        worst = worst.max((closed - quad).abs());
        ensure((closed - quad).abs() <= 1e-10, || format!("p = {p} on {iv:?}: {closed} vs {quad}"))?;
    }
    let mut worst_moment: f64 = 0.0;
    for p in primes {
        let spec = MeasureSpec::plancherel(p).map_err(|e| e.to_string())?;
        for m in 0..=10 {
            let (q, _) = integrate(|t| chebyshev_u(m, t) * spec.density(t), 0.0, PI, 1e-13).map_err(|e| e.to_string())?;
            let d = (q - chebyshev_moment(m, p)).abs();
            worst_moment = worst_moment.max(d);
            ensure(d <= 1e-10, || format!("moment m = {m}, p = {p}: off by {d:e}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!(
        "200 intervals max diff {worst:.1e}, moments max diff {worst_moment:.1e}, {elapsed:.2?}"
    ))
}

fn eigenform_exactness() -> Check {
    let start = Instant::now();
    let ring = LevelOneRing::new(144 * 5, 60);
    let mut weights = 0;
    for k in (12..=60).step_by(2).filter(|&k| cusp_dimension(k) > 0) {
        weights += 1;
        let basis = ring.cuspform_basis(k).map_err(|e| e.to_string())?;
        let d = basis.dim();
        let t: Vec<HeckeMatrix> = (1..=144u64)
            .map(|n| hecke_matrix_on(&basis, n))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for m in 1..=12u64 {
            for n in 1..=12u64 {
                let mut sum = vec![vec![BigInt::zero(); d]; d];
                let g = m.gcd(&n);
                for e in (1..=g).filter(|e| g % e == 0) {
                    let scale = BigInt::from(e).pow(k - 1);
                    let tmn = &t[(m * n / (e * e)) as usize - 1];
                    for (i, row) in sum.iter_mut().enumerate() {
                        for (j, slot) in row.iter_mut().enumerate() {
                            *slot += &scale * tmn.entry(i, j);
                        }
                    }
                }
                let prod = t[m as usize - 1].compose(&t[n as usize - 1]);
                ensure(prod == sum, || format!("T_{m} T_{n} identity fails at k = {k}"))?;
            }
        }
    }
    let mut worst_lambda: f64 = 0.0;
    let mut worst_cheb: f64 = 0.0;
    for f in &census().forms {
        for p in primes_up_to(200) {
            let l = f.lambda(p).ok_or("lambda(p) missing")?;
            worst_lambda = worst_lambda.max(l.abs());
            ensure(l.abs() <= 2.0 + 1e-6, || format!("k = {} #{}: lambda({p}) = {l}", f.weight, f.index))?;
            let theta = f.theta(p).ok_or("theta(p) missing")?;
            let mut q = p * p;
            let mut e = 2;
            while q <= f.prec() as u64 {
                let d = (f.lambda(q).unwrap() - chebyshev_u(e, theta)).abs();
                worst_cheb = worst_cheb.max(d);
                ensure(d <= 1e-8, || format!("k = {} #{}: lambda({p}^{e}) off by {d:e}", f.weight, f.index))?;
                q *= p;
                e += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(300))?;
    Ok(format!(
        "multiplicativity exact on {weights} weights, max |lambda(p)| {worst_lambda:.6}, Chebyshev max diff {worst_cheb:.1e}, {elapsed:.2?}"
    ))
}

fn petersson_consistency() -> Check {
    let start = Instant::now();
    let r = petersson_ratio_check(12, 10, 1e-6).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.passed(), || {
        let list: Vec<String> = r.offenders.iter().map(|e| format!("({}, {})", e.m, e.n)).collect();
        format!("max error {:e}, offenders {}", r.max_error, list.join(" "))
    })?;
    within(elapsed, Duration::from_secs(120))?;
    Ok(format!("{} pairs, max error {:.1e}, {elapsed:.2?}", r.entries.len(), r.max_error))
}

fn equidistribution() -> Check {
    let weights = WeightRange::new(12, 300).unwrap();
    let angles = empirical_angle_distribution(census(), 2, weights, 4, None, Some(0.1)).map_err(|e| e.to_string())?;
    let signs = empirical_sign_fraction(census(), 2, weights, Some(0.1)).map_err(|e| e.to_string())?;
    ensure(angles.deviation < 0.1, || format!("angle discrepancy {}", angles.deviation))?;
    ensure(signs.passed(), || format!("sign fraction {}", signs.observed))?;
    Ok(format!(
        "angle discrepancy {:.4} vs mu_2, positive fraction {} over {} forms",
        angles.deviation,
        signs.observed,
        census().len()
    ))
}

fn sign_structure() -> Check {
    let weights = WeightRange::new(12, 300).unwrap();
    let r = first_sign_structure(census(), weights).map_err(|e| e.to_string())?;
    ensure(r.passed(), || format!("{} violations", r.deviation))?;
    for f in &census().forms {
        let (n, p) = (f.n_f.ok_or("n_f missing")?, f.p_f.ok_or("p_f missing")?);
        ensure(PrimePower::from_value(n).is_some() && n <= p, || format!("k = {}: n_f = {n}, p_f = {p}", f.weight))?;
    }
    let w20 = census().forms.iter().find(|f| f.weight == 20).ok_or("no weight 20 form")?;
    let (n, p) = (w20.n_f.unwrap(), w20.p_f.unwrap());
    ensure(n < p, || format!("weight 20: n_f = {n}, p_f = {p}"))?;
    let strict = census().forms.iter().filter(|f| f.n_f < f.p_f).count();
    Ok(format!("{} forms, {strict} with n_f < p_f; weight 20 has n_f = {n}, p_f = {p}", census().len()))
}

fn trace_limit() -> Check {
    let start = Instant::now();
    let weights = WeightRange::new(12, 300).unwrap();
    let four = trace_limit_experiment(4, weights, Some(0.05)).map_err(|e| e.to_string())?;
    let two = trace_limit_experiment(2, weights, Some(0.05)).map_err(|e| e.to_string())?;
    ensure(four.passed(), || format!("n = 4 deviation {}", four.deviation))?;
    ensure(two.passed(), || format!("n = 2 deviation {}", two.deviation))?;
    Ok(format!(
        "n = 4 off by {:.4}, n = 2 off by {:.4} at k = 300, {:.2?}",
        four.deviation,
        two.deviation,
        start.elapsed()
    ))
}

fn analytic_bounds() -> Check {
    let mut worst: f64 = 0.0;
    let mut offenders = Vec::new();
    for c in 1..=500u64 {
        let table = KloostermanTable::new(c).map_err(|e| e.to_string())?;
        for m in 1..=20 {
            for n in 1..=20 {
                let ratio = table.sum(m, n).abs() / weil_bound(m, n, c);
                worst = worst.max(ratio);
                if ratio > 1.0 + 1e-9 {
                    offenders.push(format!("({m}, {n}, {c})"));
                }
            }
        }
    }
    ensure(offenders.is_empty(), || format!("Weil bound fails at {}", offenders.join(" ")))?;
    let ks: Vec<u32> = (4..=40).step_by(2).collect();
    let r = curly_j_bound_grid(&ks, &[0.55, 0.6, 0.75], 50, CURLY_J_CONSTANT).map_err(|e| e.to_string())?;
    ensure(r.passed(), || {
        let list: Vec<String> = r.offenders.iter().map(|o| format!("(k={}, alpha={}, x={})", o.k, o.alpha, o.x)).collect();
        format!("curly bound ratio {} > {}: {}", r.max_ratio, r.constant, list.join(" "))
    })?;
    Ok(format!(
        "Weil worst ratio {worst:.6} over m, n <= 20, c <= 500; Bessel-square ratio {:.4} <= {} on {} points",
        r.max_ratio, r.constant, r.points
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 constants reproduction", constants_reproduction),
        ("2 measure cross-validation", measure_cross_validation),
        ("3 eigenform exactness", eigenform_exactness),
        ("4 Petersson consistency", petersson_consistency),
        ("5 equidistribution", equidistribution),
        ("6 first-sign-change structure", sign_structure),
        ("7 trace limit", trace_limit),
        ("8 analytic bounds", analytic_bounds),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
