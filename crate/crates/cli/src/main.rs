mod args;
mod output;

use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use discrete_hardy::atoms::{
    hardy_quasinorm, nearest_moment_free, random_atom, validate_atom, AtomSpec,
};
use discrete_hardy::counterexample::{
    certify_unbounded, density_probe, epsilon_root, inequality_chain_check, second_difference,
    sign_scan, total_sum_enclosure,
};
use discrete_hardy::fastops::{
    hilbert_apply_fast, riesz_apply_fast, throughput_benchmark, WindowPlan,
};
use discrete_hardy::lab::{
    atom_image_sweep, hilbert_inequality_check, hlp_inequality_check, involution_check,
    pointwise_domination_sweep, unbounded_examples_demo, weak_type_check,
};
use discrete_hardy::operators::{
    fractional_apply, fractional_apply_window, hilbert_apply, hilbert_apply_window, riesz_apply,
    riesz_apply_window,
};
use discrete_hardy::report::json_f64;
use discrete_hardy::{Error, OperatorParams, Sequence};
use serde_json::{json, Value};

use args::{
    AtomArgs, AtomCmd, Cli, Command, CounterCmd, LabCmd, NormCmd, OperatorKind, SeqInput, Target,
};
use output::Outcome;

const EXIT_VERDICT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Tolerance for the exponent relation `1/q = 1/p - γ`.
const EXPONENT_TOL: f64 = 1e-12;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(verdict) => {
            if verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERDICT_FALSE)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<Error>() {
                Some(Error::Inconclusive { .. }) => ExitCode::from(EXIT_INCONCLUSIVE),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let outcome = dispatch(&cli.command)?;
    let verdict = outcome.verdict;
    let text = output::render(&outcome, cli.format, !cli.no_timestamp)?;
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(verdict)
}

fn dispatch(command: &Command) -> Result<Outcome> {
    match command {
        Command::Apply {
            operator,
            input,
            target,
            gamma,
            alpha,
            beta,
            fast,
        } => apply(
            *operator,
            &load_seq(input, None)?,
            target,
            *gamma,
            *alpha,
            *beta,
            *fast,
        ),
        Command::Norm { kind } => norm(kind),
        Command::Atom { action } => atom(action),
        Command::Counterexample { action } => counterexample(action),
        Command::Lab { action } => lab(action),
        Command::Bench { sizes, repeats } => Ok(Outcome::report(
            "bench",
            throughput_benchmark(sizes, *repeats)?,
        )),
    }
}

fn load_seq(input: &SeqInput, default: Option<Sequence>) -> Result<Sequence> {
    let (text, source) = match (&input.seq, &input.input) {
        (Some(s), _) => (s.clone(), "--seq".to_string()),
        (None, Some(path)) => (
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
            path.display().to_string(),
        ),
        (None, None) => match default {
            Some(b) => return Ok(b),
            None => bail!("a sequence is required: pass --seq JSON or --input FILE"),
        },
    };
    serde_json::from_str(&text).with_context(|| format!("malformed sequence in {source}"))
}

fn params(gamma: f64, alpha: Option<f64>, beta: Option<f64>) -> Result<OperatorParams> {
    let half = (1.0 - gamma) / 2.0;
    Ok(OperatorParams::new(
        gamma,
        alpha.unwrap_or(half),
        beta.unwrap_or(half),
    )?)
}

/// Checks `1/q = 1/p - γ` when `q` is supplied.
fn check_exponents(p: f64, gamma: f64, q: Option<f64>) -> Result<()> {
    if let Some(q) = q {
        let lhs = 1.0 / q;
        let rhs = 1.0 / p - gamma;
        if (lhs - rhs).abs() > EXPONENT_TOL * (1.0 + rhs.abs()) {
            bail!("constraint 1/q = 1/p - gamma violated: 1/q = {lhs}, 1/p - gamma = {rhs}");
        }
    }
    Ok(())
}

fn apply(
    op: OperatorKind,
    b: &Sequence,
    target: &Target,
    gamma: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    fast: bool,
) -> Result<Outcome> {
    let command = format!("apply {}", op.name());
    if let Some(j) = target.j {
        let value = match op {
            OperatorKind::Hilbert => hilbert_apply(b, j),
            OperatorKind::Maximal => b.maximal_apply(j),
            OperatorKind::Riesz => riesz_apply(b, gamma, j)?,
            OperatorKind::Frac => fractional_apply(b, &params(gamma, alpha, beta)?, j),
        };
        return Ok(Outcome::value(
            command,
            json!({ "operator": op.name(), "j": j, "value": value }),
        ));
    }
    let (Some(lo), Some(hi)) = (target.j_lo, target.j_hi) else {
        bail!("pass --j for a point or --j-lo/--j-hi for a window");
    };
    if lo > hi {
        bail!("empty window: --j-lo {lo} > --j-hi {hi}");
    }
    let values: Vec<f64> = match op {
        OperatorKind::Hilbert if fast => {
            let out = hilbert_apply_fast(b, &plan(b, lo, hi)?)?;
            (lo..=hi).map(|j| out.get(j)).collect()
        }
        OperatorKind::Riesz if fast => {
            let out = riesz_apply_fast(b, gamma, &plan(b, lo, hi)?)?;
            (lo..=hi).map(|j| out.get(j)).collect()
        }
        _ if fast => bail!("--fast is available for hilbert and riesz only"),
        OperatorKind::Hilbert => hilbert_apply_window(b, lo, hi),
        OperatorKind::Maximal => b.maximal_window(lo, hi),
        OperatorKind::Riesz => riesz_apply_window(b, gamma, lo, hi)?,
        OperatorKind::Frac => fractional_apply_window(b, &params(gamma, alpha, beta)?, lo, hi),
    };
    let rows: Vec<Value> = (lo..=hi)
        .zip(values)
        .map(|(j, v)| json!({ "j": j, "value": v }))
        .collect();
    Ok(Outcome::value(
        command,
        json!({ "operator": op.name(), "j_lo": lo, "j_hi": hi, "fast": fast, "rows": rows }),
    ))
}

fn plan(b: &Sequence, lo: i64, hi: i64) -> Result<WindowPlan> {
    if b.is_zero() {
        bail!("the fast path needs a nonzero sequence");
    }
    Ok(WindowPlan::for_sequence(b, lo, hi)?)
}

fn norm(kind: &NormCmd) -> Result<Outcome> {
    match kind {
        NormCmd::Lp { input, p } => {
            let b = load_seq(input, None)?;
            let value = b.lp_norm(*p)?;
            Ok(Outcome::value(
                "norm lp",
                json!({ "p": json_f64(*p), "value": value }),
            ))
        }
        NormCmd::Hardy { input, p, cutoff } => {
            let b = load_seq(input, None)?;
            let norm = hardy_quasinorm(&b, *p, *cutoff)?;
            Ok(Outcome::value(
                "norm hardy",
                json!({ "p": p, "cutoff": cutoff, "norm": norm }),
            ))
        }
    }
}

fn atom_spec(a: &AtomArgs) -> Result<AtomSpec> {
    let d = a.d.unwrap_or_else(|| AtomSpec::critical_degree(a.p));
    Ok(AtomSpec::new(a.p, a.q, d, a.center, a.half_width)?)
}

fn atom(action: &AtomCmd) -> Result<Outcome> {
    match action {
        AtomCmd::Validate { input, spec, tol } => {
            let a = load_seq(input, None)?;
            let spec = atom_spec(spec)?;
            let report = validate_atom(&a, &spec, *tol)?;
            let mut out = Outcome::value(
                "atom validate",
                json!({ "spec": spec, "report": report, "verdict": report.verdict() }),
            );
            out.verdict = report.verdict();
            Ok(out)
        }
        AtomCmd::Random { spec, seed } => {
            let spec = atom_spec(spec)?;
            let a = random_atom(&spec, *seed)?;
            Ok(Outcome::value(
                "atom random",
                json!({ "spec": spec, "seed": seed, "atom": a }),
            ))
        }
        AtomCmd::Project {
            input,
            degree,
            window_lo,
            window_hi,
        } => {
            let b = load_seq(input, None)?;
            let window = match (window_lo, window_hi) {
                (Some(lo), Some(hi)) => (*lo, *hi),
                _ => b
                    .support()
                    .context("cannot infer a window from the zero sequence")?,
            };
            let c = nearest_moment_free(&b, *degree, window)?;
            let distance = (&b - &c).lp_norm(2.0)?;
            Ok(Outcome::value(
                "atom project",
                json!({
                    "degree": degree,
                    "window": [window.0, window.1],
                    "l2_distance": distance,
                    "projection": c,
                }),
            ))
        }
    }
}

fn counterexample(action: &CounterCmd) -> Result<Outcome> {
    match action {
        CounterCmd::Sum { gamma, cutoff } => {
            let e = total_sum_enclosure(*gamma, *cutoff)?;
            if !e.excludes_zero() {
                return Err(Error::Inconclusive { lo: e.lo, hi: e.hi }.into());
            }
            let (lo, hi) = e.to_decimal_strings();
            Ok(Outcome::value(
                "counterexample sum",
                json!({
                    "gamma": gamma,
                    "cutoff": cutoff,
                    "enclosure": { "lo": lo, "hi": hi },
                    "sign": if e.is_negative() { "negative" } else { "positive" },
                }),
            ))
        }
        CounterCmd::Chain { gamma } => Ok(Outcome::report(
            "counterexample chain",
            inequality_chain_check(*gamma)?,
        )),
        CounterCmd::Epsilon { tol } => {
            let e = epsilon_root(*tol)?;
            let (lo, hi) = e.to_decimal_strings();
            Ok(Outcome::value(
                "counterexample epsilon",
                json!({ "tolerance": tol, "lo": lo, "hi": hi, "width": e.width() }),
            ))
        }
        CounterCmd::Certify {
            gamma,
            p,
            q,
            cutoff,
        } => {
            check_exponents(*p, *gamma, *q)?;
            let cert = certify_unbounded(*gamma, *p, *cutoff)?;
            let mut out = Outcome::value("counterexample certify", serde_json::to_value(&cert)?);
            out.verdict = cert.conclusion;
            Ok(out)
        }
        CounterCmd::Scan { grid, cutoff } => Ok(Outcome::report(
            "counterexample scan",
            sign_scan(grid, *cutoff)?,
        )),
        CounterCmd::Probe {
            gamma,
            half_widths,
            degree,
            cutoff,
        } => Ok(Outcome::report(
            "counterexample probe",
            density_probe(*gamma, half_widths, *degree, *cutoff)?,
        )),
    }
}

fn lab(action: &LabCmd) -> Result<Outcome> {
    let report = match action {
        LabCmd::HilbertIneq {
            trials,
            max_support,
            seed,
        } => hilbert_inequality_check(*trials, *max_support, *seed)?,
        LabCmd::Hlp { p, q, trials, seed } => hlp_inequality_check(*p, *q, *trials, *seed)?,
        LabCmd::Involution { input, cutoff } => {
            involution_check(&load_seq(input, Some(second_difference()))?, *cutoff)?
        }
        LabCmd::WeakType {
            input,
            alphas,
            window_lo,
            window_hi,
        } => weak_type_check(
            &load_seq(input, Some(second_difference()))?,
            alphas,
            (*window_lo, *window_hi),
        )?,
        LabCmd::Domination {
            samples,
            max_j0,
            alpha,
            beta,
            p,
            seed,
        } => {
            let params = OperatorParams::new(0.0, *alpha, *beta)?;
            pointwise_domination_sweep(*samples, *max_j0, &params, *p, *seed)?
        }
        LabCmd::AtomSweep {
            p,
            gamma,
            q,
            m_values,
            trials,
            seed,
        } => {
            check_exponents(*p, *gamma, *q)?;
            atom_image_sweep(*p, *gamma, m_values, *trials, *seed)?
        }
        LabCmd::UnboundedDemo { gamma, cutoffs } => unbounded_examples_demo(*gamma, cutoffs)?,
    };
    Ok(Outcome::report(format!("lab {}", report.name), report))
}
