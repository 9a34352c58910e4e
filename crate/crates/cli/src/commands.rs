//! Subcommand bodies. Each returns a [`Report`]; writing and checking
//! artifacts happens in the caller.

use std::fmt::Write as _;

use seqlab::hilbert::quadrature::QuadOptions;
use seqlab::hilbert::{
    best_constant_study, bilinear_fast, bilinear_naive, converse_explore, hilbert_ratio, sine_integral_check,
    DEFAULT_EXPLORE_SCHEDULE, DEFAULT_SCHEDULE,
};
use seqlab::holder::{converse_witness_finite, holder_finite, holder_infinite};
use seqlab::landau::{
    abel_dini_bound_convergence, abel_dini_certify_divergence, landau_witness, WitnessOptions, DEFAULT_BLOCKS,
};
use seqlab::{classify_membership, fmt17, Budget, ConjugateExponents, Membership, SequenceFamily};

use crate::config::{Command, ExperimentConfig, Method};
use crate::error::CliError;

/// What a finished command has to say.
#[derive(Debug, Default)]
pub struct Report {
    /// `key: value` lines for stdout.
    pub lines: Vec<(String, String)>,
    /// Contents for `--out` (and the subject of `--check`).
    pub artifact: String,
    /// The artifact is a divergence certificate.
    pub is_certificate: bool,
    /// Landau witnesses also emit a certificate for `--cert`.
    pub certificate: Option<String>,
}

impl Report {
    fn line(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn num(&mut self, key: &str, value: f64) {
        self.line(key, fmt17(value));
    }
}

fn need<T: Clone>(v: &Option<T>, key: &str, cmd: Command) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::Usage(format!("{} needs --{key}", cmd.name())))
}

fn exponents(cfg: &ExperimentConfig) -> Result<ConjugateExponents, CliError> {
    Ok(ConjugateExponents::new(need(&cfg.p, "p", cfg.command())?)?)
}

fn is_member(f: &SequenceFamily, p: f64) -> Result<bool, CliError> {
    Ok(classify_membership(f, p)? == Membership::Member)
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    match cfg.command() {
        Command::HolderCheck => holder_check(cfg),
        Command::HolderWitness => holder_witness(cfg),
        Command::AbelDini => abel_dini(cfg),
        Command::LandauWitness => landau(cfg),
        Command::HilbertEval => hilbert_eval(cfg),
        Command::HilbertConstant => hilbert_constant(cfg),
        Command::SineIntegral => sine_integral(cfg),
        Command::ConverseExplore => explore(cfg),
    }
}

fn holder_check(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let cmd = cfg.command();
    let (x, y, e) = (need(&cfg.x, "x", cmd)?, need(&cfg.y, "y", cmd)?, exponents(cfg)?);
    let r = if x.is_explicit() && y.is_explicit() {
        holder_finite(&x, &y, e)?
    } else {
        if !is_member(&x, e.p())? {
            return Err(CliError::precondition("x not in lp", format!("x = {x}, p = {}", e.p())));
        }
        if !is_member(&y, e.q())? {
            return Err(CliError::precondition("y not in lq", format!("y = {y}, q = {}", e.q())));
        }
        holder_infinite(&x, &y, e, Budget::new(cfg.n.unwrap_or(100_000)))?
    };
    let verdict = format!("{:?}", r.verdict);
    let mut rep = Report::default();
    rep.num("lhs", r.lhs.value);
    rep.num("lhs_error", r.lhs.error_bound);
    rep.num("rhs", r.rhs.value);
    rep.num("rhs_error", r.rhs.error_bound);
    rep.num("slack", r.slack);
    rep.line("verdict", &verdict);
    rep.line("equality", r.equality);
    rep.artifact = format!(
        "lhs,lhs_error,rhs,rhs_error,slack,verdict,equality\n{},{},{},{},{},{verdict},{}\n",
        fmt17(r.lhs.value),
        fmt17(r.lhs.error_bound),
        fmt17(r.rhs.value),
        fmt17(r.rhs.error_bound),
        fmt17(r.slack),
        r.equality
    );
    Ok(rep)
}

fn holder_witness(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let x = need(&cfg.x, "x", cfg.command())?;
    let e = exponents(cfg)?;
    let w = converse_witness_finite(&x, e)?;
    let mut rep = Report::default();
    rep.num("ratio", w.achieved_ratio);
    rep.num("norm_x", w.target);
    rep.num("gap", w.gap);
    let mut csv = String::from("i,x,y\n");
    let (xs, ys) = (x.as_explicit().unwrap_or_default(), w.witness.as_explicit().unwrap_or_default());
    for (i, (a, b)) in xs.iter().zip(ys).enumerate() {
        let _ = writeln!(csv, "{},{},{}", i + 1, fmt17(*a), fmt17(*b));
    }
    rep.artifact = csv;
    Ok(rep)
}

fn require_divergent(a: &SequenceFamily, power: f64) -> Result<(), CliError> {
    if a.is_explicit() || is_member(a, power)? {
        return Err(CliError::precondition("a convergent", format!("sum of ({a})^{power} is finite")));
    }
    Ok(())
}

fn abel_dini(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let cmd = cfg.command();
    let a = need(&cfg.a, "a", cmd)?;
    let alpha = need(&cfg.alpha, "alpha", cmd)?;
    let power = cfg.power.unwrap_or(1.0);
    require_divergent(&a, power)?;
    let mut rep = Report::default();
    if alpha <= 1.0 {
        let budget = Budget::new(cfg.n.unwrap_or(100_000_000));
        let cert = abel_dini_certify_divergence(&a, power, alpha, cfg.blocks.unwrap_or(DEFAULT_BLOCKS), budget)?;
        rep.line("branch", "divergent");
        rep.line("k0", cert.start_index);
        rep.line("blocks", format!("{}/{}", cert.blocks.len(), cert.requested_blocks));
        rep.line("complete", cert.is_complete());
        rep.line("scanned", cert.terms_scanned);
        rep.num("established", cert.total_established);
        rep.artifact = cert.to_text();
        rep.is_certificate = true;
    } else {
        let b = abel_dini_bound_convergence(&a, power, alpha, Budget::new(cfg.n.unwrap_or(1_000_000)))?;
        let opt = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
        rep.line("branch", "convergent");
        rep.num("delta", b.delta);
        rep.line("r", b.r);
        rep.num("telescoping_bound", b.telescoping_bound);
        rep.num("bound", b.bound);
        rep.line("N", b.computed_partial.terms_used);
        rep.num("partial", b.computed_partial.value);
        rep.line("telescoping_tail", opt(b.telescoping_tail));
        rep.num("series_lower", b.series.lower());
        rep.num("series_upper", b.series.upper());
        rep.artifact = format!(
            "delta,r,telescoping_bound,bound,N,partial,partial_error,s_N,telescoping_tail,integral_tail_lo,integral_tail_hi,series_lo,series_hi\n\
             {},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            fmt17(b.delta),
            b.r,
            fmt17(b.telescoping_bound),
            fmt17(b.bound),
            b.computed_partial.terms_used,
            fmt17(b.computed_partial.value),
            fmt17(b.computed_partial.error_bound),
            fmt17(b.s_n),
            opt(b.telescoping_tail),
            fmt17(b.integral_tail.0),
            fmt17(b.integral_tail.1),
            fmt17(b.series.lower()),
            fmt17(b.series.upper()),
        );
    }
    Ok(rep)
}

fn landau(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let x = need(&cfg.x, "x", cfg.command())?;
    let e = exponents(cfg)?;
    if x.is_explicit() || is_member(&x, e.p())? {
        return Err(CliError::precondition("x in lp", format!("x = {x}, p = {}", e.p())));
    }
    let opts = WitnessOptions {
        budget: Budget::new(cfg.n.unwrap_or(100_000)),
        blocks: cfg.blocks.unwrap_or(DEFAULT_BLOCKS),
        certificate_budget: Budget::new(cfg.cert_budget.unwrap_or(100_000_000)),
    };
    let w = landau_witness(&x, e, opts)?;
    let mut rep = Report::default();
    rep.num("lambda", w.lambda.lambda);
    rep.num("lambda_lower", w.lambda.lambda_lower);
    rep.num("lambda_upper", w.lambda.lambda_upper);
    rep.num("norm_q_lower", w.norm_check.lower());
    rep.num("norm_q_upper", w.norm_check.upper());
    rep.num("norm_q_width", w.norm_check.width());
    rep.line("norm_contains_one", w.norm_contains_one());
    rep.num("identity_max_rel_dev", w.identity_max_rel_dev);
    let d = &w.divergence;
    rep.line("certificate_blocks", format!("{}/{}", d.blocks.len(), d.requested_blocks));
    rep.line("certificate_scanned", d.terms_scanned);
    let mut csv = String::from("i,x,y,s\n");
    for i in 1..=cfg.rows.unwrap_or(1000).min(w.table.len()) {
        let _ = writeln!(csv, "{i},{},{},{}", fmt17(x.term(i)), fmt17(w.y(i)), fmt17(w.table.s(i)));
    }
    rep.artifact = csv;
    rep.certificate = Some(d.to_text());
    Ok(rep)
}

fn hilbert_eval(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let cmd = cfg.command();
    let (a, b) = (need(&cfg.a, "a", cmd)?, need(&cfg.b, "b", cmd)?);
    let n = cfg.n.unwrap_or(1000);
    let take = |f: &SequenceFamily| (1..=f.truncated_len(n)).map(|k| f.term(k)).collect::<Vec<f64>>();
    let (av, bv) = (take(&a), take(&b));
    let form = match cfg.method.unwrap_or(Method::Fast) {
        Method::Fast => bilinear_fast(&av, &bv)?,
        Method::Naive => bilinear_naive(&av, &bv)?,
    };
    let method = format!("{:?}", form.method);
    let mut rep = Report::default();
    rep.num("value", form.value);
    rep.line("method", &method);
    rep.line("m_terms", form.m_terms);
    rep.line("n_terms", form.n_terms);
    rep.num("roundoff_bound", form.roundoff_bound);
    let mut header = String::from("N,value,method,roundoff_bound");
    let mut row = format!("{n},{},{method},{}", fmt17(form.value), fmt17(form.roundoff_bound));
    if cfg.p.is_some() {
        let e = exponents(cfg)?;
        if !is_member(&a, e.p())? {
            return Err(CliError::precondition("a not in lp", format!("a = {a}, p = {}", e.p())));
        }
        if !is_member(&b, e.q())? {
            return Err(CliError::precondition("b not in lq", format!("b = {b}, q = {}", e.q())));
        }
        let r = hilbert_ratio(&a, &b, e, n)?;
        rep.num("ratio", r.ratio);
        rep.num("target", r.target);
        header.push_str(",ratio,target");
        let _ = write!(row, ",{},{}", fmt17(r.ratio), fmt17(r.target));
    }
    rep.artifact = format!("{header}\n{row}\n");
    Ok(rep)
}

fn hilbert_constant(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let e = ConjugateExponents::new(cfg.p.unwrap_or(2.0))?;
    let schedule = if cfg.eps_schedule.is_empty() { DEFAULT_SCHEDULE.to_vec() } else { cfg.eps_schedule.clone() };
    let st = best_constant_study(e, &schedule)?;
    let mut rep = Report::default();
    for (&(eps, n), r) in st.schedule.iter().zip(&st.ratios) {
        rep.num(&format!("ratio[eps={eps},N={n}]"), *r);
    }
    rep.num("target", st.target);
    if let Some(g) = st.final_gap() {
        rep.num("final_gap", g);
    }
    rep.line("monotone", st.is_monotone());
    rep.artifact = st.to_csv();
    Ok(rep)
}

fn sine_integral(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let opts = QuadOptions { rel_tol: cfg.rel_tol.unwrap_or(1e-13), ..QuadOptions::default() };
    let s_values = if cfg.s.is_empty() { vec![0.1, 0.25, 1.0 / 3.0, 0.5, 0.7, 0.9] } else { cfg.s.clone() };
    let mut rep = Report::default();
    let mut csv = String::from("s,numeric,closed_form,error_estimate,relative_error\n");
    for s in s_values {
        let c = sine_integral_check(s, opts)?;
        rep.num(&format!("relative_error[s={s}]"), c.relative_error());
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            fmt17(s),
            fmt17(c.numeric),
            fmt17(c.closed_form),
            fmt17(c.error_estimate),
            fmt17(c.relative_error())
        );
    }
    rep.artifact = csv;
    Ok(rep)
}

fn explore(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let a = need(&cfg.a, "a", cfg.command())?;
    let e = exponents(cfg)?;
    let sizes = if cfg.sizes.is_empty() { DEFAULT_EXPLORE_SCHEDULE.to_vec() } else { cfg.sizes.clone() };
    let report = converse_explore(&a, e, &sizes)?;
    let mut rep = Report::default();
    match &report {
        seqlab::hilbert::ExplorationReport::Growth { lambda, rows } => {
            rep.line("case", "growth");
            rep.num("lambda", *lambda);
            for (n, s) in rows {
                rep.num(&format!("S[N={n}]"), *s);
            }
        }
        seqlab::hilbert::ExplorationReport::Bounded { constant, norm_a } => {
            rep.line("case", "bounded");
            rep.num("constant", *constant);
            rep.num("norm_a", norm_a.value);
        }
    }
    rep.artifact = report.to_csv();
    Ok(rep)
}
