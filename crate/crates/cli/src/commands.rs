use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use machin_core::arctan_eval::{convergence_benchmark, write_reports_csv};
use machin_core::formula_gen::{
    alt_chain, decompose_term, leading_integer, lehmer_measure, predicted_companion_digits,
    scaled_seed, split_chain, split_chain_from, verify_report,
};
use machin_core::pi_engine::{
    approximate_pi_alt_with, approximate_pi_with, digit_doubling_table, doubling_ratios_hold,
    lehmer_vs_m, write_lehmer_csv, write_table_csv, PiApproximation, STABILIZATION_STEP, TABLE1_K,
};
use machin_core::{ArctanTerm, BigInt, BigRational, Error, MachinFormula, Rounding, SeriesKernel};
use serde_json::json;

use crate::budget;
use crate::{
    Command, DecomposeArgs, Experiment, ExperimentArgs, Format, GenerateArgs, Mode, PiArgs,
    Variant, VerifyArgs,
};

/// Failure classes mapped to exit codes.
enum Failure {
    /// Bad flags or unreadable input: exit 2.
    Usage(String),
    /// Domain error, refused run, or an identity that does not hold: exit 1.
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cmd: Command) -> ExitCode {
    let result = match cmd {
        Command::Generate(a) => generate(a),
        Command::Pi(a) => pi(a),
        Command::Verify(a) => verify(a),
        Command::Decompose(a) => decompose(a),
        Command::Experiments(a) => experiments(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(output: Option<&Path>, text: &[u8]) -> Outcome {
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Domain(format!("stdout: {e}")))
        }
    }
}

fn rounding(mode: Option<Mode>) -> Rounding {
    match mode {
        Some(Mode::Ceiling) => Rounding::Ceiling,
        _ => Rounding::Floor,
    }
}

fn parse_rational(s: &str, what: &str) -> Result<BigRational, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("{what}: cannot parse {s:?} as p/q")))
}

fn check_budget(secs: f64, budget: f64, what: &str) -> Outcome {
    budget::check(secs, budget, what).map_err(Failure::Domain)
}

/// The seed quotient whose companion the command will form.
fn seed_for(k: u32, variant: Variant, ell: u32, lead: Option<&BigInt>, r: Rounding) -> Result<BigRational, Failure> {
    Ok(match (variant, lead) {
        (Variant::Alternative, _) => scaled_seed(k, ell)?,
        (_, Some(b)) => BigRational::from_integer(b.clone()),
        (_, None) => BigRational::from_integer(leading_integer(k, r)?),
    })
}

fn generate(a: GenerateArgs) -> Outcome {
    if a.variant == Variant::Standard && a.ell.is_some() {
        return Err(Failure::Usage("--ell needs --variant alternative".into()));
    }
    if a.variant == Variant::Alternative && (a.mode.is_some() || a.beta1.is_some()) {
        return Err(Failure::Usage(
            "--mode and --beta1 apply to the standard variant only".into(),
        ));
    }
    let lead = match &a.beta1 {
        Some(s) => {
            let q = parse_rational(s, "--beta1")?;
            if !q.is_integer() || q.is_zero() {
                return Err(Failure::Usage("--beta1 must be a non-zero integer".into()));
            }
            Some(q.numer().clone())
        }
        None => None,
    };
    let r = rounding(a.mode);
    let ell = a.ell.unwrap_or(0);
    let seed = seed_for(a.k, a.variant, ell, lead.as_ref(), r)?;
    check_budget(
        budget::companion_secs(predicted_companion_digits(&seed, a.k)),
        a.budget,
        "forming the companion constant",
    )?;
    let m = a.m as usize;
    let formula = match (a.variant, lead) {
        (Variant::Alternative, _) => alt_chain(a.k, ell, m)?.to_formula(),
        (_, Some(b)) => split_chain_from(a.k, b, m, r)?.to_formula(),
        (_, None) => split_chain(a.k, m, r)?.to_formula(),
    };
    let text = match a.format {
        Format::Text => format!("{formula}\n"),
        Format::Json => format!("{}\n", formula.to_json()),
    };
    emit(a.output.as_deref(), text.as_bytes())
}

fn pi(a: PiArgs) -> Outcome {
    let start = Instant::now();
    let variant = if a.ell.is_some() { Variant::Alternative } else { Variant::Standard };
    let seed = seed_for(a.k, variant, a.ell.unwrap_or(0), None, Rounding::Floor)?;
    let companion_cost = budget::companion_secs(predicted_companion_digits(&seed, a.k));
    check_budget(companion_cost, a.budget, "forming the companion constant")?;
    // With the first quotient in hand the digit count is predictable.
    let (b1, steps) = match a.ell {
        Some(ell) => (Some(alt_chain(a.k, ell, 0)?.companion), 0),
        None => (split_chain(a.k, 0, Rounding::Floor)?.terminal, a.m),
    };
    let precision = match &b1 {
        Some(b) => budget::working_precision(b, steps).max(a.digits as f64 + 10.0),
        None => a.digits as f64 + 10.0,
    };
    check_budget(
        companion_cost + budget::evaluation_secs(precision),
        a.budget,
        &format!("evaluating at about {precision:.0} digits"),
    )?;
    let approx = match a.ell {
        Some(ell) => approximate_pi_alt_with(a.k, ell, a.m as usize, a.digits + 10, a.kernel)?,
        None => approximate_pi_with(a.k, a.m as usize, a.digits + 10, a.kernel)?,
    };
    let digits = format!("{}\n", approx.digits(a.digits));
    let elapsed = start.elapsed().as_millis() as u64;
    let report = pi_report(&a, &approx, elapsed);
    match a.format {
        Format::Text => {
            emit(a.output.as_deref(), digits.as_bytes())?;
            eprintln!("k: {}", a.k);
            eprintln!("M: {}", a.m);
            eprintln!("correct_digits: {}", approx.correct_digits);
            eprintln!("correct_prefix: {}", approx.correct_prefix());
            eprintln!("exact_identity: {}", approx.exact);
            eprintln!("lehmer: {}", approx.lehmer.to_decimal_string(10));
            eprintln!("working_precision: {}", approx.precision);
            eprintln!("wall_time_ms: {elapsed}");
            Ok(())
        }
        Format::Json => {
            if let Some(p) = &a.output {
                emit(Some(p), digits.as_bytes())?;
                emit(None, format!("{report}\n").as_bytes())
            } else {
                let mut r = report;
                r["digits"] = json!(digits.trim_end());
                emit(None, format!("{r}\n").as_bytes())
            }
        }
    }
}

fn pi_report(a: &PiArgs, approx: &PiApproximation, elapsed: u64) -> serde_json::Value {
    json!({
        "k": a.k,
        "M": a.m,
        "ell": a.ell,
        "kernel": a.kernel.name(),
        "correct_digits": approx.correct_digits,
        "exact_identity": approx.exact,
        "lehmer": approx.lehmer.to_decimal_string(10),
        "working_precision": approx.precision,
        "wall_time_ms": elapsed,
    })
}

fn read_formula(path: &Path) -> Result<MachinFormula, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    MachinFormula::from_json(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn verify(a: VerifyArgs) -> Outcome {
    let formula = read_formula(&a.file)?;
    let r = verify_report(&formula)?;
    let text = match a.format {
        Format::Text => format!(
            "identity: {}\ngaussian product on the diagonal ray: {}\nwinding consistent with pi/4: {}\n",
            if r.holds() { "holds" } else { "fails" },
            r.on_diagonal,
            r.winding_ok
        ),
        Format::Json => format!(
            "{}\n",
            json!({"holds": r.holds(), "on_diagonal": r.on_diagonal, "winding_ok": r.winding_ok})
        ),
    };
    emit(None, text.as_bytes())?;
    if r.holds() {
        Ok(())
    } else {
        Err(Failure::Domain(String::new()))
    }
}

fn decompose(a: DecomposeArgs) -> Outcome {
    let z = parse_rational(&a.z, "--z")?;
    if z.is_zero() || (!z.is_negative() && z.numer() < z.denom()) {
        return Err(Failure::Domain(format!(
            "z = {z} lies in [0, 1): floor(z) = 0, so arctan(1/floor(z)) is undefined and the \
             splitting identity cannot be applied"
        )));
    }
    let term = ArctanTerm::new(1, z.clone())?;
    let terms = decompose_term(&term, a.max_steps)?;
    let exact = terms.last().is_none_or(|t| t.beta.is_integer());
    let mut text = String::new();
    match a.format {
        Format::Text => {
            text.push_str(&format!("z = {z}\n"));
            if z.is_integer() {
                text.push_str(&format!(
                    "already an integer reciprocal: atan(1/{})\n",
                    z.numer()
                ));
            } else {
                for t in &terms {
                    let zero = BigRational::zero();
                    let neg = (t.coefficient < BigInt::from(0)) != (t.beta < zero);
                    let sign = if neg { "-" } else { "+" };
                    let c = if t.coefficient < BigInt::from(0) { -t.coefficient.clone() } else { t.coefficient.clone() };
                    let b = if t.beta < zero { -t.beta.clone() } else { t.beta.clone() };
                    let c = if c == BigInt::from(1) { String::new() } else { format!("{c}*") };
                    text.push_str(&format!("{sign} {c}atan(1/{b})\n"));
                }
                text.push_str(&format!("exact: {exact}\n"));
            }
        }
        Format::Json => {
            let list: Vec<_> = terms
                .iter()
                .map(|t| json!({"coeff": t.coefficient.to_string(), "beta": t.beta.to_string()}))
                .collect();
            text.push_str(&format!("{}\n", json!({"z": z.to_string(), "terms": list, "exact": exact})));
        }
    }
    if let Some(path) = &a.formula {
        let f = read_formula(path)?;
        if !f.terms.iter().any(|t| t.beta == z) {
            return Err(Failure::Domain(format!(
                "{} has no term with beta = {z}",
                path.display()
            )));
        }
        let mut out = Vec::new();
        for t in &f.terms {
            if t.beta == z {
                out.extend(decompose_term(t, a.max_steps)?);
            } else {
                out.push(t.clone());
            }
        }
        let g = MachinFormula::new(out);
        let before = lehmer_measure(&f, &[])?;
        let after = lehmer_measure(&g, &[])?;
        text.push_str(&format!(
            "formula: {g}\nlehmer before: {}\nlehmer after: {}\n",
            before.to_decimal_string(6),
            after.to_decimal_string(6)
        ));
    }
    emit(None, text.as_bytes())
}

fn experiments(a: ExperimentArgs) -> Outcome {
    let mut buf = Vec::new();
    match a.name {
        Experiment::Table1 => {
            let k = a.k.unwrap_or(TABLE1_K);
            let m = a.m.unwrap_or(12) as usize;
            let rows = digit_doubling_table(k, m)?;
            write_table_csv(&rows, &mut buf)?;
            emit(a.output.as_deref(), &buf)?;
            let checked: Vec<_> = rows.iter().filter_map(|r| r.within(1)).collect();
            if !checked.is_empty() {
                let pass = checked.iter().filter(|x| **x).count();
                let verdict = if pass == checked.len() { "PASS" } else { "FAIL" };
                eprintln!("{verdict}: {pass}/{} rows within 1 digit of the published column", checked.len());
            }
            let ratios = if doubling_ratios_hold(&rows, 2, 1.9, 2.1) { "PASS" } else { "FAIL" };
            eprintln!("{ratios}: doubling ratio in [1.9, 2.1] for M >= 2");
        }
        Experiment::LehmerStabilization => {
            let k = a.k.unwrap_or(17);
            let m = a.m.unwrap_or(25) as usize;
            let table = lehmer_vs_m(k, m)?;
            write_lehmer_csv(&table, &mut buf)?;
            emit(a.output.as_deref(), &buf)?;
            match table.stabilization {
                Some(s) => eprintln!("stabilized at M = {s} (step below {STABILIZATION_STEP})"),
                None => eprintln!("no step below {STABILIZATION_STEP} up to M = {m}"),
            }
        }
        Experiment::SeriesBench => {
            let betas = match &a.betas {
                Some(list) => list
                    .iter()
                    .map(|s| parse_rational(s, "--betas"))
                    .collect::<Result<Vec<_>, _>>()?,
                None => [10, 40, 83443].map(BigRational::from_integer).to_vec(),
            };
            if a.k.is_some() || a.m.is_some() {
                return Err(Failure::Usage("series-bench takes --betas and --precision".into()));
            }
            let precision = a.precision.unwrap_or(1000);
            let entries = convergence_benchmark(&betas, precision);
            write_reports_csv(&entries, &mut buf, a.timing)?;
            emit(a.output.as_deref(), &buf)?;
            for b in &betas {
                let terms = |k: SeriesKernel| {
                    entries
                        .iter()
                        .find(|e| e.kernel == k && &e.beta == b)
                        .and_then(|e| e.outcome.as_ref().ok())
                        .map(|r| r.terms_used)
                };
                if let (Some(g), Some(e)) = (terms(SeriesKernel::IterativeGh), terms(SeriesKernel::Euler2F1)) {
                    let v = if g < e { "PASS" } else { "FAIL" };
                    eprintln!("{v}: beta = {b}: iterative_gh {g} terms, euler_2f1 {e} terms");
                }
            }
        }
    }
    Ok(())
}
