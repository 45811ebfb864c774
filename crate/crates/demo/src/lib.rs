//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every function returns a JSON string; errors come back as
//! `{"error": "..."}` so the page never has to catch exceptions.

use firstsign::arith::PrimePower;
use firstsign::forms::eigenforms;
use firstsign::measures::{measure_mass, AngleInterval, MeasureSpec};
use firstsign::signs::constraint_system;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest weight the page may ask for; keeps the exact arithmetic quick.
pub const MAX_DEMO_WEIGHT: u32 = 120;

fn respond(r: firstsign::Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn spec(p: u32) -> firstsign::Result<MeasureSpec> {
    if p == 0 {
        Ok(MeasureSpec::SatoTate)
    } else {
        MeasureSpec::plancherel(p as u64)
    }
}

/// Mass of `[lo, hi]` and `samples` density values across `[0, pi]`.
/// `p = 0` selects the Sato-Tate measure.
#[wasm_bindgen]
pub fn measure(p: u32, lo: f64, hi: f64, samples: u32) -> String {
    respond((|| {
        let spec = spec(p)?;
        let mass = measure_mass(spec, AngleInterval::new(lo, hi)?);
        let n = samples.clamp(2, 2000);
        let density: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = std::f64::consts::PI * i as f64 / (n - 1) as f64;
                [t, spec.density(t)]
            })
            .collect();
        Ok(json!({ "measure": spec.to_string(), "mass": mass, "density": density }))
    })())
}

/// The constraint intervals that describe `n_f = q^n`, with their masses.
#[wasm_bindgen]
pub fn constraints(q: u32, n: u32) -> String {
    respond((|| {
        let target = PrimePower::new(q as u64, n)?;
        let system = constraint_system(target)?;
        let mut probability = 1.0;
        let mut rows = Vec::new();
        for c in &system.constraints {
            let mass = measure_mass(MeasureSpec::plancherel(c.prime)?, c.interval);
            probability *= mass;
            rows.push(json!({
                "prime": c.prime,
                "exponent": c.exponent,
                "lo": c.interval.lo(),
                "hi": c.interval.hi(),
                "mass": mass,
            }));
        }
        Ok(json!({ "target": target.value(), "constraints": rows, "product_of_masses": probability }))
    })())
}

/// Normalised eigenvalues at small primes, `p_f` and `n_f` for every
/// eigenform of weight `k`.
#[wasm_bindgen]
pub fn forms(k: u32) -> String {
    respond((|| {
        if k > MAX_DEMO_WEIGHT {
            return Err(firstsign::Error::Precondition(format!(
                "the demo stops at weight {MAX_DEMO_WEIGHT}"
            )));
        }
        let primes = [2u64, 3, 5, 7, 11, 13];
        let rows: Vec<Value> = eigenforms(k, 60)?
            .iter()
            .map(|f| {
                let lambdas: Vec<Option<f64>> = primes.iter().map(|&p| f.lambda(p)).collect();
                json!({ "index": f.index, "lambda": lambdas, "p_f": f.p_f, "n_f": f.n_f })
            })
            .collect();
        Ok(json!({ "k": k, "primes": primes, "forms": rows }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn full_interval_has_unit_mass() {
        let v = parse(measure(0, 0.0, std::f64::consts::PI, 5));
        assert!((v["mass"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(v["density"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn errors_are_reported_as_json() {
        assert!(parse(measure(4, 0.0, 1.0, 5))["error"].is_string());
        assert!(parse(constraints(6, 1))["error"].is_string());
        assert!(parse(forms(200))["error"].is_string());
    }

    #[test]
    fn four_needs_two_constraints() {
        let v = parse(constraints(2, 2));
        assert_eq!(v["constraints"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn weight_twenty_first_negatives() {
        let v = parse(forms(20));
        assert_eq!(v["forms"][0]["n_f"], 4);
        assert_eq!(v["forms"][0]["p_f"], 5);
    }
}
