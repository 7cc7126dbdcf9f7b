//! ⋆-invertibility, the three-valued P⋆MD decision, theorem verifiers and the upper-to-zero
//! search.

use serde::Serialize;

use crate::domain::{Domain, Overring, PrimeIdeal};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::function_rings::{
    content, generators, na_eq_kr_probe, Poly, ProbeOutcome,
};
use crate::module::Module;
use crate::sample::{ideal_pool, pair_pool, rational_function_pool, triple_pool, RunConfig};
use crate::semistar::{
    compare_ops, eab_associated_exact, eab_falsifier, eab_search, is_stable, quasi_star_maximals, star_valuation_family,
    tilde, Comparison, EabVerdict, QuasiMaxStatus, SemistarOp, ValuationFamily,
};
use crate::tribool::TriBool;

// ---------------------------------------------------------------------------------------------
// invertibility

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Definition,
    Local,
    Nagata,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvertibleReport {
    pub invertible: bool,
    /// `None` where the route is unavailable
    pub routes: Vec<(Route, Option<bool>)>,
}

/// (I(D:I))^⋆ = D^⋆, decided three ways.
pub fn star_invertible(op: &SemistarOp, i: &Module) -> Result<InvertibleReport> {
    let d = op.domain();
    let top = op.closure_of_domain()?;
    let inv = d.ring().colon(i)?.ok_or(Error::ZeroModule)?;
    let prod = i.product(&inv)?;

    let def = op.closure(&prod)? == top;

    let rep = quasi_star_maximals(op)?;
    let local = match rep.status {
        QuasiMaxStatus::Enumerated => {
            let mut ok = true;
            for q in &rep.primes {
                if q.under.contains(&prod)? {
                    ok = false;
                    break;
                }
            }
            Some(ok)
        }
        QuasiMaxStatus::WitnessOnly => {
            let mut hit = false;
            for q in &rep.primes {
                hit |= q.under.contains(&prod)?;
            }
            if hit {
                Some(false)
            } else {
                None
            }
        }
        QuasiMaxStatus::Unsupported => None,
    };

    // c(fg) ⊆ c(f)c(g) = I(D:I) and the two agree up to ⋆-invertible factors
    let f = Poly::from_generators(&generators(i)?);
    let g = Poly::from_generators(&generators(&inv)?);
    let nagata = op.closure(&content(&f.mul(&g), d)?)? == top;

    let routes = vec![(Route::Definition, Some(def)), (Route::Local, local), (Route::Nagata, Some(nagata))];
    let mut seen = routes.iter().filter_map(|(_, v)| *v);
    let first = seen.next().ok_or(Error::NoRouteAvailable)?;
    if seen.any(|v| v != first) {
        return Err(Error::RoutesDisagree(format!("{i} under {op}: {routes:?}")));
    }
    Ok(InvertibleReport { invertible: first, routes })
}

// ---------------------------------------------------------------------------------------------
// P⋆MD decision

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PmdStatus {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct PmdVerdict {
    status: PmdStatus,
    pub certificate: Option<&'static str>,
    /// (Q, D_Q is a valuation domain) for every tested quasi-⋆-maximal
    pub evidence: Vec<(PrimeIdeal, bool)>,
    pub witness: Option<PrimeIdeal>,
    pub quasi_max: Option<QuasiMaxStatus>,
}

impl PmdVerdict {
    pub fn status(&self) -> PmdStatus {
        self.status
    }
}

pub fn pmd_decide(op: &SemistarOp) -> Result<PmdVerdict> {
    let d = op.domain();
    if d.certs().is_prufer.is_yes() {
        return Ok(PmdVerdict {
            status: PmdStatus::Yes,
            certificate: Some("a Prüfer domain is a P⋆MD for every ⋆"),
            evidence: Vec::new(),
            witness: None,
            quasi_max: None,
        });
    }
    let rep = quasi_star_maximals(op)?;
    let mut evidence = Vec::new();
    let mut witness = None;
    for q in &rep.primes {
        let val = d.is_valuation_at(q)?;
        evidence.push((q.clone(), val));
        if !val && witness.is_none() {
            witness = Some(q.clone());
        }
    }
    let status = match (rep.status, &witness) {
        (QuasiMaxStatus::Unsupported, _) => PmdStatus::Unknown,
        (_, Some(_)) => PmdStatus::No,
        (QuasiMaxStatus::Enumerated, None) if !rep.primes.is_empty() => PmdStatus::Yes,
        _ => PmdStatus::Unknown,
    };
    Ok(PmdVerdict { status, certificate: None, evidence, witness, quasi_max: Some(rep.status) })
}

// ---------------------------------------------------------------------------------------------
// upper to zero

#[derive(Clone, Debug)]
pub enum UpperToZero {
    Found { f: Poly, tried: usize },
    NotFound { tried: usize },
}

/// Searches f = (aX+b)·ℓ ∈ D[X] with c(f)^⋆ = D^⋆, ℓ with coefficients in {0, generators of
/// J = (D:(a,b)), their sum}, by increasing degree then lexicographically.
pub fn upper_to_zero_witness(op: &SemistarOp, a: &FieldElem, b: &FieldElem, degree_bound: usize) -> Result<UpperToZero> {
    let d = op.domain();
    if a.is_zero() || b.is_zero() {
        return Err(Error::PreconditionNotMet("a and b must be nonzero".into()));
    }
    let top = op.closure_of_domain()?;
    let ab = d.ideal(&[*a, *b])?;
    let j = d.ring().colon(&ab)?.ok_or(Error::ZeroModule)?;
    let gens = generators(&j)?;
    let mut choices = vec![FieldElem::zero(d.tag())];
    for g in &gens {
        if !choices.contains(g) {
            choices.push(*g);
        }
    }
    let sum = gens.iter().fold(FieldElem::zero(d.tag()), |acc, g| acc + *g);
    if !choices.contains(&sum) {
        choices.push(sum);
    }
    let lin = Poly::linear(*a, *b);
    let mut tried = 0;
    for deg_l in 0..degree_bound {
        let n = choices.len();
        let total = n.pow(deg_l as u32 + 1);
        for code in 0..total {
            let mut c = code;
            let mut coeffs = vec![FieldElem::zero(d.tag()); deg_l + 1];
            // lexicographic from the constant term
            for k in (0..=deg_l).rev() {
                coeffs[k] = choices[c % n];
                c /= n;
            }
            if coeffs[deg_l].is_zero() {
                continue;
            }
            tried += 1;
            let f = lin.mul(&Poly::new(d.tag(), coeffs));
            if !f.coeffs().iter().all(|x| d.ring().contains_elem(x)) {
                continue;
            }
            if op.closure(&content(&f, d)?)? == top {
                return Ok(UpperToZero::Found { f, tried });
            }
        }
    }
    Ok(UpperToZero::NotFound { tried })
}

// ---------------------------------------------------------------------------------------------
// theorem verifiers

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub claim: String,
    pub route: &'static str,
    pub quote: &'static str,
    pub verdict: CheckVerdict,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub instance: String,
    pub checks: Vec<Check>,
    pub seed: u64,
}

impl TheoremReport {
    pub fn overall(&self) -> CheckVerdict {
        if self.checks.iter().any(|c| c.verdict == CheckVerdict::Fail) {
            CheckVerdict::Fail
        } else if self.checks.iter().any(|c| c.verdict == CheckVerdict::Unknown) {
            CheckVerdict::Unknown
        } else {
            CheckVerdict::Pass
        }
    }
}

/// The data a verifier runs on: an operation, optionally an overring (whose role depends on
/// the theorem), and the run configuration.
#[derive(Clone, Debug)]
pub struct Instance {
    pub op: SemistarOp,
    pub overring: Option<Overring>,
    pub config: RunConfig,
}

pub const THEOREM_IDS: [&str; 11] = [
    "THM_PR3", "COR_CO7", "PROP_PR5", "PROP_PR8", "RE9", "PROP_CO11", "PROP_PR34", "COR_35", "EX_2_9", "LM_MSTAR",
    "RK_216",
];

/// Rational functions sampled for the Na/Kr comparison.
pub const NA_KR_SAMPLES: usize = 500;

fn check(claim: &str, route: &'static str, quote: &'static str, verdict: CheckVerdict, witness: Option<String>) -> Check {
    Check { claim: claim.to_string(), route, quote, verdict, witness }
}

fn pass_if(b: bool) -> CheckVerdict {
    if b {
        CheckVerdict::Pass
    } else {
        CheckVerdict::Fail
    }
}

fn status_str(s: PmdStatus) -> &'static str {
    match s {
        PmdStatus::Yes => "YES",
        PmdStatus::No => "NO",
        PmdStatus::Unknown => "UNKNOWN",
    }
}

fn verdict_witness(v: &PmdVerdict) -> Option<String> {
    v.witness.as_ref().map(|q| format!("{} = {}", q.label(), q.under))
}

/// Hypothesis checks pass when met and are unknown otherwise (the statement is then vacuous).
fn hypothesis(claim: &str, quote: &'static str, met: bool, note: String) -> Check {
    check(claim, "definition", quote, if met { CheckVerdict::Pass } else { CheckVerdict::Unknown }, Some(note))
}

pub fn verify_theorem(id: &str, inst: &Instance) -> Result<TheoremReport> {
    let checks = match id {
        "THM_PR3" => verify_pr3(inst)?,
        "COR_CO7" => verify_ascent(inst, true)?,
        "PROP_PR5" => verify_ascent(inst, false)?,
        "PROP_PR8" => verify_descent(inst)?,
        "RE9" => verify_re9(inst)?,
        "PROP_CO11" => verify_co11(inst)?,
        "PROP_PR34" => verify_pr34(inst)?,
        "COR_35" => verify_cor35(inst)?,
        "EX_2_9" => verify_ex29(inst)?,
        "LM_MSTAR" => verify_mstar(inst)?,
        "RK_216" => verify_rk216(inst)?,
        other => return Err(Error::UnknownTheoremId(other.to_string())),
    };
    let mut instance = inst.op.to_string();
    if let Some(t) = &inst.overring {
        instance.push_str(&format!("; overring {}", t.target));
    }
    Ok(TheoremReport { theorem_id: id.to_string(), instance, checks, seed: inst.config.seed })
}

struct Pools {
    ideals: Vec<Module>,
    pairs: Vec<(Module, Module)>,
    triples: Vec<(Module, Module, Module)>,
}

fn pools(d: &Domain, cfg: &RunConfig) -> Result<Pools> {
    let ideals = ideal_pool(d, cfg.pool_size, cfg.seed)?;
    let pairs = pair_pool(&ideals, cfg.pool_size, cfg.seed);
    let triples = triple_pool(d, &ideals, cfg.pool_size, cfg.seed)?;
    Ok(Pools { ideals, pairs, triples })
}

fn verify_pr3(inst: &Instance) -> Result<Vec<Check>> {
    let op = &inst.op;
    let d = op.domain();
    let cfg = &inst.config;
    let p = pools(d, cfg)?;
    let verdict = pmd_decide(op)?;
    let status = verdict.status();
    let mut out = Vec::new();

    // (i) through the definition
    let mut non_inv = None;
    for i in &p.ideals {
        if !star_invertible(op, i)?.invertible {
            non_inv = Some(i.clone());
            break;
        }
    }
    let v = match (status, &non_inv, &verdict.witness) {
        (PmdStatus::Yes, None, _) => CheckVerdict::Pass,
        (PmdStatus::Yes, Some(_), _) => CheckVerdict::Fail,
        (PmdStatus::No, _, Some(q)) => pass_if(!star_invertible(op, &q.under)?.invertible),
        _ => CheckVerdict::Unknown,
    };
    out.push(check(
        &format!("(i) D is a P⋆MD: decision {} against ⋆-invertibility of {} pool ideals", status_str(status), p.ideals.len()),
        "definition",
        "$D$ is a P$\\star$MD",
        v,
        non_inv.map(|i| i.to_string()).or_else(|| verdict_witness(&verdict)),
    ));

    // (ii)
    let rep = quasi_star_maximals(op)?;
    let mut all_val = true;
    let mut bad = None;
    for q in &rep.primes {
        if !d.is_valuation_at(q)? {
            all_val = false;
            bad.get_or_insert_with(|| q.clone());
        }
    }
    let v = match rep.status {
        QuasiMaxStatus::Enumerated => pass_if(all_val == (status == PmdStatus::Yes)),
        QuasiMaxStatus::WitnessOnly if !all_val => pass_if(status == PmdStatus::No),
        _ => CheckVerdict::Unknown,
    };
    out.push(check(
        "(ii) D_Q is a valuation domain for each Q in M(⋆_f)",
        "local",
        "$D_Q$ is a valuation domain, for each $Q\\in\\calM(\\star_f)$",
        v,
        bad.map(|q| q.label()),
    ));

    // (iv)
    let v_iv = match tilde(op) {
        Err(Error::TildeUnsupported) => (CheckVerdict::Unknown, Some("tilde unsupported".to_string())),
        Err(e) => return Err(e),
        Ok(t) => {
            let deg = cfg.degree_bound.min(3);
            let samples = rational_function_pool(d, NA_KR_SAMPLES, deg, cfg.seed);
            match na_eq_kr_probe(op, &t, &samples) {
                Err(Error::UnsupportedMode(m)) => (CheckVerdict::Unknown, Some(m)),
                Err(e) => return Err(e),
                Ok(r) => match (&r.outcome, status) {
                    (_, _) if r.unknown == r.samples => (CheckVerdict::Unknown, Some("all samples unknown".into())),
                    (ProbeOutcome::Agree, PmdStatus::Yes) => {
                        (CheckVerdict::Pass, Some(format!("{} samples agree", r.samples - r.unknown)))
                    }
                    (ProbeOutcome::Agree, _) => (CheckVerdict::Unknown, Some("no separating sample".into())),
                    (ProbeOutcome::Witness { u, na, kr }, s) => (
                        pass_if(s == PmdStatus::No),
                        Some(format!("{u}: Na {na}, Kr {kr}")),
                    ),
                },
            }
        }
    };
    out.push(check(
        "(iv) Na(D,⋆) = Kr(D,⋆̃) on sampled rational functions",
        "kronecker",
        "$\\Na(D,\\star)=\\Kr(D,\\tilde{\\star})$",
        v_iv.0,
        v_iv.1,
    ));

    // (v)
    let v_v = match tilde(op) {
        Err(Error::TildeUnsupported) => (CheckVerdict::Unknown, Some("tilde unsupported".to_string())),
        Err(e) => return Err(e),
        Ok(t) => match (eab_falsifier(&t, &p.triples)?, status) {
            (EabVerdict::NoCounterexample { .. }, PmdStatus::Yes) => (CheckVerdict::Pass, None),
            (EabVerdict::NoCounterexample { .. }, _) => (CheckVerdict::Unknown, None),
            (EabVerdict::Witness { e, f, g }, s) => (pass_if(s == PmdStatus::No), Some(format!("E={e}; F={f}; G={g}"))),
        },
    };
    out.push(check("(v) ⋆̃ is e.a.b.", "definition", "$\\tilde{\\star}$ is an e.a.b. semistar operation", v_v.0, v_v.1));

    // (vi)
    let st = is_stable(op, &p.pairs)?;
    let ab = eab_falsifier(op, &p.triples)?;
    let failed = st.verdict.is_no() || matches!(ab, EabVerdict::Witness { .. });
    let w = match (&st.witness, &ab) {
        (Some((e, f)), _) => Some(format!("unstable at E={e}; F={f}")),
        (_, EabVerdict::Witness { e, f, g }) => Some(format!("E={e}; F={f}; G={g}")),
        _ => None,
    };
    let v = match status {
        PmdStatus::Yes => pass_if(!failed),
        PmdStatus::No if failed => CheckVerdict::Pass,
        _ => CheckVerdict::Unknown,
    };
    out.push(check("(vi) ⋆_f is stable and e.a.b.", "definition", "$\\star_f$ is stable and e.a.b.", v, w));
    Ok(out)
}

fn verify_ascent(inst: &Instance, to_closure: bool) -> Result<Vec<Check>> {
    let op = &inst.op;
    let d = op.domain();
    let t = if to_closure {
        let t = d.overring_from_module(&op.closure_of_domain()?)?;
        Overring::new(d, &t)?
    } else {
        inst.overring.clone().ok_or_else(|| Error::PreconditionNotMet("an overring is required".into()))?
    };
    let base = pmd_decide(op)?;
    let dot = SemistarOp::induced(op, &t)?;
    let up = pmd_decide(&dot)?;
    let quote: &'static str = if to_closure {
        "Then $D^\\star$ is a P$\\dot{\\star}$MD"
    } else {
        "Assume that $D$ is a P$\\star$MD, then $T$ is a P$\\dot{\\star}$MD"
    };
    let hyp = base.status() == PmdStatus::Yes;
    let v = match (hyp, up.status()) {
        (_, PmdStatus::Yes) => CheckVerdict::Pass,
        (true, PmdStatus::No) => CheckVerdict::Fail,
        _ => CheckVerdict::Unknown,
    };
    Ok(vec![
        hypothesis("D is a P⋆MD", quote, hyp, format!("{} on {d}", status_str(base.status()))),
        check(
            &format!("{} is a P⋆̇MD", t.target),
            "local",
            quote,
            v,
            verdict_witness(&up).or(Some(status_str(up.status()).into())),
        ),
    ])
}

/// (T, verdict on T, verdict on D). The instance operation is either ⋆ on T (with the overring
/// supplied), or ⋆̣_D itself: a restricted operation or ⋆_{T} = d_T restricted.
fn descent_parts(inst: &Instance) -> Result<(Overring, PmdVerdict, PmdVerdict)> {
    let op = &inst.op;
    let (inner, t) = match (op.kind(), &inst.overring) {
        (_, Some(t)) if op.domain() == &t.target => (op.clone(), t.clone()),
        (crate::semistar::OpKind::Restricted { inner, overring }, _) => (inner.clone(), overring.clone()),
        (crate::semistar::OpKind::OverringFamily(ts), _) if ts.len() == 1 => {
            (SemistarOp::identity(&ts[0].target)?, ts[0].clone())
        }
        _ => {
            return Err(Error::PreconditionNotMet(
                "descent needs an operation on T with its overring, or a restricted operation on D".into(),
            ))
        }
    };
    let top = pmd_decide(&inner)?;
    let down = pmd_decide(&SemistarOp::restricted(&inner, &t)?)?;
    Ok((t, top, down))
}

fn verify_descent(inst: &Instance) -> Result<Vec<Check>> {
    let (t, top, down) = descent_parts(inst)?;
    let quote = "Let $T$ be a flat overring of an integral domain $D$";
    let hyp = t.flat.is_yes() && top.status() == PmdStatus::Yes;
    let v = match (hyp, down.status()) {
        (_, PmdStatus::Yes) => CheckVerdict::Pass,
        (true, PmdStatus::No) => CheckVerdict::Fail,
        _ => CheckVerdict::Unknown,
    };
    Ok(vec![
        hypothesis("T is D-flat", quote, t.flat.is_yes(), format!("flat = {}", t.flat)),
        hypothesis("T is a P⋆MD", quote, top.status() == PmdStatus::Yes, status_str(top.status()).into()),
        check(&format!("{} is a P⋆̣MD", t.base), "local", "Then $D$ is a P", v, verdict_witness(&down)),
    ])
}

fn verify_re9(inst: &Instance) -> Result<Vec<Check>> {
    let (t, top, down) = descent_parts(inst)?;
    let quote = "is $D$--flat is essential";
    Ok(vec![
        check(
            "T is not D-flat",
            "local",
            quote,
            pass_if(t.flat.is_no()),
            t.flat_witness.as_ref().map(|n| format!("{} = {}", n.label(), n.under)),
        ),
        check("T is a P⋆MD", "local", quote, pass_if(top.status() == PmdStatus::Yes), None),
        check(
            "D is not a P⋆̣MD",
            "local",
            quote,
            pass_if(down.status() == PmdStatus::No),
            verdict_witness(&down),
        ),
    ])
}

fn verify_co11(inst: &Instance) -> Result<Vec<Check>> {
    let op = &inst.op;
    let d = op.domain();
    let quote = "D \\, \\mbox{ \\it is a P$\\star$MD}";
    let a = pmd_decide(op)?.status();
    let (b, c) = match tilde(op) {
        Err(Error::TildeUnsupported) => (PmdStatus::Unknown, PmdStatus::Unknown),
        Err(e) => return Err(e),
        Ok(t) => {
            let dt = d.overring_from_module(&t.closure_of_domain()?)?;
            let dot = SemistarOp::induced(&t, &Overring::new(d, &dt)?)?;
            (pmd_decide(&t)?.status(), pmd_decide(&dot)?.status())
        }
    };
    let all = [a, b, c];
    let v = if all.contains(&PmdStatus::Unknown) {
        CheckVerdict::Unknown
    } else {
        pass_if(a == b && b == c)
    };
    Ok(vec![check(
        "P⋆MD ⇔ P⋆̃MD ⇔ D^⋆̃ is a P⋆̃̇MD",
        "local",
        quote,
        v,
        Some(format!("{} / {} / {}", status_str(a), status_str(b), status_str(c))),
    )])
}

fn verify_pr34(inst: &Instance) -> Result<Vec<Check>> {
    let op = &inst.op;
    if !op.meta().is_star.is_yes() {
        return Err(Error::PreconditionNotMet("a star operation is required".into()));
    }
    let d = op.domain();
    let pool = ideal_pool(d, inst.config.pool_size, inst.config.seed)?;
    let t = SemistarOp::t(d)?;
    let i = pmd_decide(op)?.status();
    let pvmd = pmd_decide(&SemistarOp::v(d)?)?.status();
    let f_eq_t = compare_ops(op, &t, &pool)?.verdict == Comparison::Eq;
    let tilde_eq_t = match tilde(op) {
        Ok(tl) => Some(compare_ops(&tl, &t, &pool)?.verdict == Comparison::Eq),
        Err(Error::TildeUnsupported) => None,
        Err(e) => return Err(e),
    };
    let tri = |s: PmdStatus| match s {
        PmdStatus::Yes => Some(true),
        PmdStatus::No => Some(false),
        PmdStatus::Unknown => None,
    };
    let compare = |lhs: Option<bool>, rhs: Option<bool>| match (lhs, rhs) {
        (Some(a), Some(b)) => pass_if(a == b),
        _ => CheckVerdict::Unknown,
    };
    // a P⋆MD that is not a PvMD settles (ii) and (iii) without the pool comparison
    let ii = match tri(pvmd) {
        Some(false) => Some(false),
        Some(true) => tilde_eq_t,
        None => None,
    };
    let iii = tri(pvmd).map(|p| p && f_eq_t);
    let q = "$\\, D\\, $ is a P$v$MD and $\\,\\tilde{\\star} = t\\,.$";
    Ok(vec![
        check("(i) ⇔ (ii): P⋆MD iff PvMD and ⋆̃ = t on the pool", "definition", q, compare(tri(i), ii), None),
        check("(i) ⇔ (iii): P⋆MD iff PvMD and ⋆_f = t on the pool", "definition", q, compare(tri(i), iii), None),
    ])
}

fn verify_cor35(inst: &Instance) -> Result<Vec<Check>> {
    let d = inst.op.domain();
    let pool = ideal_pool(d, inst.config.pool_size, inst.config.seed)?;
    let cmp = compare_ops(&SemistarOp::identity(d)?, &SemistarOp::t(d)?, &pool)?;
    let d_eq_t = cmp.verdict == Comparison::Eq;
    let certs = d.certs();
    let q = "$\\, D\\, $ is integrally closed and $\\,d = t\\,.$";
    let mut out = Vec::new();
    let v = match (certs.is_prufer, certs.is_integrally_closed) {
        (TriBool::Yes, _) => pass_if(d_eq_t && certs.is_integrally_closed.is_yes()),
        (TriBool::No, TriBool::No) => CheckVerdict::Pass,
        // integrally closed, not Prüfer: d ≠ t must show up somewhere
        (TriBool::No, TriBool::Yes) => {
            if d_eq_t {
                CheckVerdict::Unknown
            } else {
                CheckVerdict::Pass
            }
        }
        _ => CheckVerdict::Unknown,
    };
    out.push(check(
        &format!("Prüfer ⇔ integrally closed and d = t (d = t on {} samples: {d_eq_t})", pool.len()),
        "definition",
        q,
        v,
        cmp.ge_violation.map(|e| format!("E^t ≠ E at {e}")),
    ));
    Ok(out)
}

fn verify_ex29(inst: &Instance) -> Result<Vec<Check>> {
    let op = &inst.op;
    let d = op.domain();
    let q = "$\\,T\\,$ is integral over $\\,D\\,$ and that $\\,D \\neq T\\,,$ then $\\,D\\,$ is not a P$\\star$MD";
    let t = match op.kind() {
        crate::semistar::OpKind::OverringFamily(ts) if ts.len() == 1 => ts[0].clone(),
        _ => return Err(Error::PreconditionNotMet("the operation must be ⋆_{T} for one overring T".into())),
    };
    let closure = d.integral_closure()?;
    let integral = closure.ring().contains(t.target.ring())?;
    let proper = t.target != *d;
    let v = pmd_decide(op)?;
    Ok(vec![
        hypothesis("T is a proper integral overring", q, integral && proper, t.target.to_string()),
        check(
            "D is not a P⋆MD",
            "local",
            q,
            if integral && proper { pass_if(v.status() == PmdStatus::No) } else { CheckVerdict::Unknown },
            verdict_witness(&v),
        ),
    ])
}

fn verify_mstar(inst: &Instance) -> Result<Vec<Check>> {
    let op = &inst.op;
    let d = op.domain();
    let q = "there exists a $\\star$--valuation overring";
    let a = match eab_associated_exact(op) {
        Ok(a) => a,
        Err(Error::NotEab) => {
            return Ok(vec![check("M(⋆_a) is dominated by ⋆-valuation overrings", "kronecker", q, CheckVerdict::Unknown, Some("⋆_a unavailable".into()))])
        }
        Err(e) => return Err(e),
    };
    let rep = quasi_star_maximals(&a)?;
    if rep.status != QuasiMaxStatus::Enumerated {
        return Ok(vec![check("M(⋆_a) is dominated by ⋆-valuation overrings", "kronecker", q, CheckVerdict::Unknown, Some("M(⋆_a) not enumerated".into()))]);
    }
    let family = star_valuation_family(op)?;
    let mut out = Vec::new();
    for qm in &rep.primes {
        let w = match &family {
            ValuationFamily::Finite(ws) => ws.iter().find(|w| w.point == qm.point).cloned(),
            ValuationFamily::AllOf { .. } => Some(d.dvr_at(qm.point)?),
        };
        let dq = d.localize(std::slice::from_ref(qm))?;
        let ok = match &w {
            Some(w) => w.ring.contains(dq.ring())? && w.val_module(&qm.under).is_some_and(|v| v > 0),
            None => false,
        };
        out.push(check(
            &format!("{} is dominated by a ⋆-valuation overring", qm.label()),
            "kronecker",
            q,
            pass_if(ok),
            w.map(|w| w.label()),
        ));
    }
    Ok(out)
}

fn verify_rk216(inst: &Instance) -> Result<Vec<Check>> {
    let d = inst.op.domain();
    if !d.certs().is_prufer.is_yes() {
        return Err(Error::PreconditionNotMet("a Prüfer domain is required".into()));
    }
    let q = "each semistar operation on $D$ is a.b.";
    let p = pools(d, &inst.config)?;
    let mut battery = vec![inst.op.clone()];
    for pr in [2, 3, 5] {
        for m in d.primes_above(pr)? {
            let t = Overring::new(d, &d.localize(std::slice::from_ref(&m))?)?;
            battery.push(SemistarOp::overring_family(d, &[t])?);
        }
    }
    let mut out = Vec::new();
    for op in &battery {
        let r = eab_search(op, &p.triples)?;
        let w = match &r {
            EabVerdict::Witness { e, f, g } => Some(format!("E={e}; F={f}; G={g}")),
            _ => None,
        };
        out.push(check(
            &format!("{} is a.b. on {} triples", op.describe(), p.triples.len()),
            "definition",
            q,
            pass_if(w.is_none()),
            w,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3i() -> Domain {
        Domain::quadratic_order(-1, 3).unwrap()
    }

    #[test]
    fn invertibility_examples() {
        let z = Domain::integers();
        let d = SemistarOp::identity(&z).unwrap();
        assert!(star_invertible(&d, &z.principal(&FieldElem::int(z.tag(), 6)).unwrap()).unwrap().invertible);
        let r = z3i();
        let p3 = r.primes_above(3).unwrap()[0].clone();
        let v = SemistarOp::v(&r).unwrap();
        assert!(!star_invertible(&v, &p3.under).unwrap().invertible);
        let q5 = r.primes_above(5).unwrap()[0].clone();
        let s = SemistarOp::spectral(&r, std::slice::from_ref(&q5)).unwrap();
        let rep = star_invertible(&s, &q5.under).unwrap();
        assert!(rep.invertible);
        assert!(rep.routes.iter().all(|(_, v)| v.is_some()));
    }

    #[test]
    fn decisions() {
        let z = Domain::integers();
        assert_eq!(pmd_decide(&SemistarOp::identity(&z).unwrap()).unwrap().status(), PmdStatus::Yes);
        let r = z3i();
        let q5 = r.primes_above(5).unwrap()[0].clone();
        let s = SemistarOp::spectral(&r, &[q5]).unwrap();
        assert_eq!(pmd_decide(&s).unwrap().status(), PmdStatus::Yes);
        let v = pmd_decide(&SemistarOp::v(&r).unwrap()).unwrap();
        assert_eq!(v.status(), PmdStatus::No);
        assert_eq!(v.witness.unwrap().under.text(), "den=1; basis=[[3,0],[0,3]]");
    }

    #[test]
    fn upper_to_zero() {
        let zs = Domain::localized_integers(&[2, 3]).unwrap();
        let k = zs.tag();
        let d = SemistarOp::identity(&zs).unwrap();
        let r = upper_to_zero_witness(&d, &FieldElem::int(k, 2), &FieldElem::int(k, 3), 2).unwrap();
        assert!(matches!(r, UpperToZero::Found { .. }));
        let r = upper_to_zero_witness(&d, &FieldElem::int(k, 1), &FieldElem::int(k, 1), 2).unwrap();
        match r {
            UpperToZero::Found { f, .. } => assert_eq!(f, Poly::linear(FieldElem::int(k, 1), FieldElem::int(k, 1))),
            _ => panic!("X+1 expected"),
        }
        let r3 = z3i();
        let v = SemistarOp::v(&r3).unwrap();
        let r = upper_to_zero_witness(&v, &FieldElem::int(r3.tag(), 3), &FieldElem::ints(r3.tag(), 0, 3), 4).unwrap();
        assert!(matches!(r, UpperToZero::NotFound { .. }));
    }

    #[test]
    fn unknown_theorem_id() {
        let z = Domain::integers();
        let inst = Instance { op: SemistarOp::identity(&z).unwrap(), overring: None, config: RunConfig::default() };
        assert!(matches!(verify_theorem("THM_XX", &inst), Err(Error::UnknownTheoremId(_))));
    }
}
