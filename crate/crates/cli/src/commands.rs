use num_traits::Signed;
use padic_spectrum::exactnum::{
    format_fraction, parse_rational, rational_to_f64, ten_pow_neg, Rounding,
};
use padic_spectrum::operators::{truncated_matrix, OperatorId, DEFAULT_DENSE_LIMIT};
use padic_spectrum::oracle::{
    fiber_predictions, tridiag_inverse_trace, truncated_d0_spectrum, truncated_tree_spectrum,
};
use padic_spectrum::spectrum::{
    check_c2_identity, dstar_d_spectrum, eigen_residual, eigenvalue_table,
    eigenvector_coefficients, refine_eigenvalue, synthesize_eigenvector, transported_bracket,
};
use padic_spectrum::tree::{fiber_multiplicity, to_prufer, tree_dot, vertices, weight, Prime};
use padic_spectrum::zeta::{
    pole_list, schatten_trace, zeta_d, zeta_d0, zeta_d0_continued, zeta_d_double_sum, ComplexS,
    PoleSource, PrefactorMode, ReferenceMode, ZetaResult,
};
use padic_spectrum::Rational;
use serde_json::{json, Value};

use crate::args::{Common, Format, Mode, PrefactorArg, ReferenceArg, ZetaKind};
use crate::error::CliError;
use crate::output::{float, lower, nearest, scientific, upper, Output};

/// Relative tolerance of the tree cluster check.
const CLUSTER_TOL: f64 = 1e-4;
/// Eigenvector and oracle tolerance.
const CHECK_TOL: f64 = 1e-10;
/// Tolerance for zeta agreement checks.
const ZETA_TOL: f64 = 1e-8;

pub struct Ctx {
    pub p: Prime,
    pub digits: u32,
    /// Significant digits printed for certified bounds.
    pub shown: u32,
}

impl Ctx {
    pub fn new(common: &Common) -> Result<Self, CliError> {
        if common.digits < 6 {
            return Err(CliError::Config(format!(
                "--digits must be at least 6, got {}",
                common.digits
            )));
        }
        if common.digits > 200 {
            return Err(CliError::Config(format!(
                "--digits must be at most 200, got {}",
                common.digits
            )));
        }
        let p = Prime::new(common.p)?;
        Ok(Self {
            p,
            digits: common.digits,
            shown: common.digits + 4,
        })
    }
}

fn positive(name: &str, value: u32) -> Result<(), CliError> {
    if value == 0 {
        return Err(CliError::Config(format!("--{name} must be positive")));
    }
    Ok(())
}

/// Digits of λ_n that keep the synthesized residual far below 1e-10; an
/// error in λ is amplified by about `p^{n(n-1)}` (measured up to p = 5, n = 5).
fn residual_digits(p: Prime, n: u32) -> u32 {
    24 + (1.5 * (n * (n - 1)) as f64 * (p.get() as f64).log10()).ceil() as u32
}

fn complex(s: ComplexS) -> Value {
    json!({ "re": float(s.re), "im": float(s.im) })
}

pub fn eigenvalues(ctx: &Ctx, count: u32) -> Result<Output, CliError> {
    positive("count", count)?;
    let table = eigenvalue_table(ctx.p, count, ctx.digits)?;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for r in &table.records {
        let (lo, hi) = (lower(&r.lo, ctx.shown), upper(&r.hi, ctx.shown));
        let ev = &r.sign_evidence;
        records.push(json!({
            "index": r.index,
            "lo": lo,
            "hi": hi,
            "lo_exact": format_fraction(&r.lo),
            "hi_exact": format_fraction(&r.hi),
            "digits": r.digits,
            "sign_evidence": {
                "sign_lo": ev.sign_lo,
                "sign_hi": ev.sign_hi,
                "terms_lo": ev.terms_lo,
                "terms_hi": ev.terms_hi,
            },
        }));
        rows.push(vec![
            r.index.to_string(),
            lo,
            hi,
            r.digits.to_string(),
            format!("{:+}", ev.sign_lo),
            format!("{:+}", ev.sign_hi),
        ]);
    }
    let doc = json!({
        "command": "eigenvalues",
        "p": ctx.p.get(),
        "digits": ctx.digits,
        "records": records,
    });
    let mut out = Output::new(
        doc,
        vec!["n", "lo", "hi", "digits", "sign_lo", "sign_hi"],
        rows,
    );
    out.summary
        .push(format!("eigenvalues of D0*D0, p = {}", ctx.p.get()));
    Ok(out)
}

pub fn eigenvector(ctx: &Ctx, n: u32, terms: u32, samples: usize) -> Result<Output, CliError> {
    positive("n", n)?;
    positive("terms", terms)?;
    if samples < 2 {
        return Err(CliError::Config("--samples must be at least 2".into()));
    }
    let rec = refine_eigenvalue(ctx.p, n, residual_digits(ctx.p, n).max(ctx.digits))?;
    let lambda = rec.midpoint();
    let exp = eigenvector_coefficients(&lambda, ctx.p, terms)?;
    let res = eigen_residual(&exp, samples)?;
    let vec = synthesize_eigenvector(&exp, samples)?;
    let c2 = check_c2_identity(&vec, &lambda, ctx.p);
    let norm = rational_to_f64(&res.norm_sq).sqrt();
    let ic = rational_to_f64(&res.initial_condition.abs()) / norm;

    let mut coeffs = Vec::new();
    let mut rows = Vec::new();
    for (i, c) in exp.coefficients.iter().enumerate() {
        let k = 2 * (i as u32 + 1);
        let v = nearest(c, ctx.shown);
        coeffs.push(json!({ "k": k, "value": v }));
        rows.push(vec![k.to_string(), v]);
    }
    let doc = json!({
        "command": "eigenvector",
        "p": ctx.p.get(),
        "n": n,
        "lambda": { "lo": lower(&rec.lo, ctx.shown), "hi": upper(&rec.hi, ctx.shown) },
        "terms": terms,
        "samples": samples,
        "coefficients": coeffs,
        "tail_bound": scientific(&exp.tail_bound, 6, Rounding::Ceil),
        "residual": {
            "relative": float(res.relative),
            "initial_condition_relative": float(ic),
            "c2_identity": scientific(&c2, 6, Rounding::Ceil),
        },
    });
    let mut out = Output::new(doc, vec!["k", "c(k)"], rows);
    out.summary = vec![
        format!("eigenvector for lambda_{n}, p = {}", ctx.p.get()),
        format!(
            "lambda in [{}, {}]",
            lower(&rec.lo, ctx.shown),
            upper(&rec.hi, ctx.shown)
        ),
        format!("relative residual {}", float(res.relative)),
        format!("initial condition (relative) {}", float(ic)),
        format!("c(2) identity gap {}", scientific(&c2, 6, Rounding::Ceil)),
        format!(
            "coefficient tail bound {}",
            scientific(&exp.tail_bound, 6, Rounding::Ceil)
        ),
    ];
    Ok(out)
}

pub fn spectrum(ctx: &Ctx, cutoff: &str) -> Result<Output, CliError> {
    let cut = parse_rational(cutoff)?;
    let entries = dstar_d_spectrum(ctx.p, &cut, ctx.digits)?;
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for e in &entries {
        let (lo, hi) = (
            lower(&e.value.lo(), ctx.shown),
            upper(&e.value.hi(), ctx.shown),
        );
        list.push(json!({
            "m": e.m,
            "n": e.n,
            "lo": lo,
            "hi": hi,
            "multiplicity": e.multiplicity.to_string(),
        }));
        rows.push(vec![
            e.m.to_string(),
            e.n.to_string(),
            lo,
            hi,
            e.multiplicity.to_string(),
        ]);
    }
    let doc = json!({
        "command": "spectrum",
        "p": ctx.p.get(),
        "cutoff": format_fraction(&cut),
        "entries": list,
    });
    let mut out = Output::new(doc, vec!["m", "n", "lo", "hi", "multiplicity"], rows);
    out.summary.push(format!(
        "eigenvalues of D*D up to {}, p = {}",
        format_fraction(&cut),
        ctx.p.get()
    ));
    Ok(out)
}

pub struct ZetaRequest {
    pub s: String,
    pub which: ZetaKind,
    pub eps: f64,
    pub mode: Mode,
    pub prefactor: Option<PrefactorArg>,
    pub reference: Option<ReferenceArg>,
    pub poles: Option<u32>,
}

fn prefactor_mode(req: &ZetaRequest) -> PrefactorMode {
    match (req.prefactor, req.mode) {
        (Some(PrefactorArg::Paper), _) | (None, Mode::Paper) => PrefactorMode::Paper,
        (Some(PrefactorArg::Totient), _) | (None, Mode::Verified) => PrefactorMode::Totient,
    }
}

fn reference_mode(req: &ZetaRequest) -> ReferenceMode {
    match (req.reference, req.mode) {
        (Some(ReferenceArg::Paper), _) | (None, Mode::Paper) => ReferenceMode::Paper,
        (Some(ReferenceArg::Asymptotic), _) | (None, Mode::Verified) => ReferenceMode::Asymptotic,
    }
}

fn prefactor_name(m: PrefactorMode) -> &'static str {
    match m {
        PrefactorMode::Paper => "paper",
        PrefactorMode::Totient => "totient",
    }
}

fn reference_name(m: ReferenceMode) -> &'static str {
    match m {
        ReferenceMode::Paper => "paper",
        ReferenceMode::Asymptotic => "asymptotic",
    }
}

fn source_name(s: PoleSource) -> &'static str {
    match s {
        PoleSource::Reference => "reference",
        PoleSource::Prefactor => "prefactor",
    }
}

pub fn zeta(ctx: &Ctx, req: &ZetaRequest) -> Result<Output, CliError> {
    if !(req.eps.is_finite() && req.eps > 0.0) {
        return Err(CliError::Config("--eps must be a positive number".into()));
    }
    let s = ComplexS::parse(&req.s)?;
    let pre = prefactor_mode(req);
    let refm = reference_mode(req);
    let p = ctx.p;
    let r: ZetaResult = match req.which {
        ZetaKind::D0 => zeta_d0(p, s, req.eps)?,
        ZetaKind::D => zeta_d(p, s, req.eps, pre)?,
        ZetaKind::Trace => {
            if s.im != 0.0 {
                return Err(CliError::Config("the trace takes a real s".into()));
            }
            schatten_trace(p, s.re, req.eps, pre)?
        }
        ZetaKind::Double => zeta_d_double_sum(p, s, req.eps)?,
        ZetaKind::Continued => zeta_d0_continued(p, s, refm, req.eps)?,
    };
    let which = match req.which {
        ZetaKind::D0 => "d0",
        ZetaKind::D => "d",
        ZetaKind::Trace => "trace",
        ZetaKind::Double => "double",
        ZetaKind::Continued => "continued",
    };
    let poles = req.poles.map(|k| pole_list(p, refm, k));
    let mut doc = json!({
        "command": "zeta",
        "p": p.get(),
        "which": which,
        "prefactor_mode": prefactor_name(pre),
        "reference_mode": reference_name(refm),
        "s": complex(r.s),
        "value": complex(r.value),
        "error": float(r.error),
        "terms_used": r.terms_used,
        "flags": r.flags,
    });
    let mut rows = Vec::new();
    if let Some(list) = &poles {
        let items: Vec<Value> = list
            .iter()
            .map(|pl| json!({ "k": pl.k, "s": complex(pl.s), "source": source_name(pl.source) }))
            .collect();
        doc["poles"] = Value::Array(items);
        for pl in list {
            rows.push(vec![
                source_name(pl.source).to_string(),
                pl.k.to_string(),
                float(pl.s.re),
                float(pl.s.im),
            ]);
        }
    }
    let mut out = if poles.is_some() {
        Output::new(doc, vec!["source", "k", "re", "im"], rows)
    } else {
        // without a pole list the CSV form carries the value itself
        let mut o = Output::new(
            doc,
            vec![
                "which",
                "s_re",
                "s_im",
                "re",
                "im",
                "error",
                "terms_used",
                "flags",
            ],
            Vec::new(),
        );
        o.text_table = false;
        o.rows = vec![vec![
            which.to_string(),
            float(r.s.re),
            float(r.s.im),
            float(r.value.re),
            float(r.value.im),
            float(r.error),
            r.terms_used.to_string(),
            r.flags.join(";"),
        ]];
        o
    };
    out.summary = vec![
        format!(
            "zeta ({which}), p = {}, s = {} + {}i",
            p.get(),
            float(r.s.re),
            float(r.s.im)
        ),
        format!("value {} + {}i", float(r.value.re), float(r.value.im)),
        format!("error bound {}", float(r.error)),
        format!("terms used {}", r.terms_used),
        format!(
            "flags {}",
            if r.flags.is_empty() {
                "none".into()
            } else {
                r.flags.join(", ")
            }
        ),
    ];
    Ok(out)
}

pub fn tree(ctx: &Ctx, depth: u32, format: Format) -> Result<Output, CliError> {
    let p = ctx.p;
    if format == Format::Dot {
        let mut out = Output::new(Value::Null, Vec::new(), Vec::new());
        out.dot = Some(tree_dot(p, depth)?);
        return Ok(out);
    }
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for v in vertices(p, depth)? {
        let pt = to_prufer(p, v);
        let w = format_fraction(&weight(p, v));
        let parent = if v.level == 0 {
            Value::Null
        } else {
            json!({ "level": v.level - 1, "index": v.index % p.pow(v.level - 1)? })
        };
        list.push(json!({
            "level": v.level,
            "index": v.index,
            "weight": w,
            "parent": parent,
            "prufer": { "r": pt.r, "m": pt.m, "l": pt.l },
        }));
        rows.push(vec![
            v.level.to_string(),
            v.index.to_string(),
            w,
            pt.r.to_string(),
            pt.m.to_string(),
            pt.l.to_string(),
        ]);
    }
    let doc = json!({
        "command": "tree",
        "p": p.get(),
        "depth": depth,
        "vertex_count": list.len(),
        "vertices": list,
    });
    let mut out = Output::new(doc, vec!["level", "index", "weight", "r", "m", "l"], rows);
    out.summary
        .push(format!("tree p = {}, depth {depth}", p.get()));
    out.dot = Some(tree_dot(p, depth)?);
    Ok(out)
}

struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn run_check(
    name: &'static str,
    f: impl FnOnce() -> Result<(bool, String), CliError>,
) -> Result<Check, CliError> {
    let (pass, detail) = f()?;
    Ok(Check { name, pass, detail })
}

pub struct VerifyRequest {
    pub n: u32,
    pub count: u32,
    pub depth: u32,
}

pub fn verify(ctx: &Ctx, req: &VerifyRequest) -> Result<Output, CliError> {
    positive("count", req.count)?;
    let p = ctx.p;
    let vcount = p.vertex_count(req.depth)?;
    if vcount > DEFAULT_DENSE_LIMIT {
        return Err(CliError::Config(format!(
            "--depth {} gives {vcount} vertices, above the dense limit {DEFAULT_DENSE_LIMIT}",
            req.depth
        )));
    }
    let mut checks = Vec::new();

    checks.push(run_check("oracle", || {
        let rep = truncated_d0_spectrum(p, req.n, req.count)?;
        let dev = rep.max_relative_deviation;
        Ok((
            dev <= CHECK_TOL,
            format!("max relative deviation {} at N = {}", float(dev), req.n),
        ))
    })?);

    checks.push(run_check("brackets", || {
        let mut prev_hi: Option<Rational> = None;
        let mut bad = Vec::new();
        for n in 1..=8u32 {
            let (lo, hi) = transported_bracket(p, n);
            let rec = refine_eigenvalue(p, n, ctx.digits)?;
            let inside = lo <= rec.lo
                && rec.hi <= hi
                && rec.sign_evidence.sign_lo != rec.sign_evidence.sign_hi;
            let disjoint = prev_hi.as_ref().is_none_or(|ph| ph < &lo);
            if !(inside && disjoint) {
                bad.push(n.to_string());
            }
            prev_hi = Some(hi);
        }
        let detail = if bad.is_empty() {
            "8 brackets hold, pairwise disjoint".into()
        } else {
            format!("failing n: {}", bad.join(", "))
        };
        Ok((bad.is_empty(), detail))
    })?);

    checks.push(run_check("eigenvectors", || {
        let tol = ten_pow_neg(10);
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for n in 1..=req.count.min(5) {
            let lam = refine_eigenvalue(p, n, residual_digits(p, n))?.midpoint();
            let exp = eigenvector_coefficients(&lam, p, 25)?;
            let res = eigen_residual(&exp, 60)?;
            let v = synthesize_eigenvector(&exp, 60)?;
            let ic = res.initial_condition.abs();
            ok &= res.relative <= CHECK_TOL;
            ok &= &ic * &ic <= &tol * &tol * &res.norm_sq;
            ok &= check_c2_identity(&v, &lam, p) <= tol;
            worst = worst.max(res.relative);
        }
        Ok((ok, format!("worst relative residual {}", float(worst))))
    })?);

    checks.push(run_check("tree_multiplicities", || {
        let rep = truncated_tree_spectrum(p, req.depth, CLUSTER_TOL)?;
        let max_m = req.depth.min(3);
        let preds = fiber_predictions(p, req.depth, max_m, 1)?;
        let mut counts = Vec::new();
        let mut ok = true;
        for pred in &preds {
            let target = rational_to_f64(&pred.value.center);
            let nearest = rep.clusters.iter().min_by(|a, b| {
                (a.center - target)
                    .abs()
                    .total_cmp(&(b.center - target).abs())
            });
            let Some(c) = nearest else {
                ok = false;
                continue;
            };
            ok &= c.count as u64 == fiber_multiplicity(p, pred.m);
            ok &= (c.center - target).abs() <= CHECK_TOL * target;
            counts.push(c.count.to_string());
        }
        Ok((
            ok,
            format!(
                "cluster counts {} at depth {}",
                counts.join(", "),
                req.depth
            ),
        ))
    })?);

    checks.push(run_check("zeta_consistency", || {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for s in [2.0, 3.0] {
            let s = ComplexS::real(s);
            let a = zeta_d(p, s, 1e-11, PrefactorMode::Totient)?;
            let b = zeta_d_double_sum(p, s, 1e-11)?;
            let err = a.error + b.error;
            ok &= (a.value.re - b.value.re).abs() <= err && err <= ZETA_TOL;
            worst = worst.max((a.value.re - b.value.re).abs());
        }
        let z1 = zeta_d0(p, ComplexS::real(1.0), 1e-12)?;
        let m = truncated_matrix::<Rational>(OperatorId::D0StarD0, p, req.n)?;
        let tr = rational_to_f64(&tridiag_inverse_trace(&m)?);
        let gap = (z1.value.re - tr).abs();
        ok &= gap <= ZETA_TOL;
        Ok((
            ok,
            format!(
                "factorized vs double sum {}, zeta(1) vs inverse trace {}",
                float(worst),
                float(gap)
            ),
        ))
    })?);

    checks.push(run_check("continuation", || {
        let s = ComplexS::real(1.0);
        let cont = zeta_d0_continued(p, s, ReferenceMode::Asymptotic, 1e-11)?;
        let direct = zeta_d0(p, s, 1e-11)?;
        let diff = (cont.value.re - direct.value.re).hypot(cont.value.im - direct.value.im);
        let err = cont.error + direct.error;
        let overlap = diff <= err && err <= ZETA_TOL && cont.flags.is_empty();
        let paper = zeta_d0_continued(p, s, ReferenceMode::Paper, 1e-10)?;
        let flagged = paper.flags.iter().any(|f| f == "correction_no_decay");
        Ok((
            overlap && flagged,
            format!(
                "overlap gap {} within {}; non-decay flag {}",
                float(diff),
                float(err),
                if flagged { "raised" } else { "missing" }
            ),
        ))
    })?);

    let pass = checks.iter().all(|c| c.pass);
    let items: Vec<Value> = checks
        .iter()
        .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
        .collect();
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                if c.pass { "pass" } else { "FAIL" }.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    let doc = json!({
        "command": "verify",
        "p": p.get(),
        "n": req.n,
        "count": req.count,
        "depth": req.depth,
        "checks": items,
        "pass": pass,
    });
    let mut out = Output::new(doc, vec!["check", "status", "detail"], rows);
    out.summary.push(format!(
        "verification for p = {}: {}",
        p.get(),
        if pass { "pass" } else { "FAIL" }
    ));
    out.failed = !pass;
    Ok(out)
}
