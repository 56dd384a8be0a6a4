use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use kolrank_core::field_probe::{self, PrimeField, PrimeFieldConfig, SetSpec};
use kolrank_core::free_monoid::{self, Word, WordSet};
use kolrank_core::kolchin::{self, KolchinError};
use kolrank_core::lattice::{self, LeaderSet};
use kolrank_core::rank_engine::{self, ChainSpec, RankError};
use kolrank_core::verify::{self, Suite, ORACLE_WINDOW};
use kolrank_core::NumericalPolynomial;

use crate::request::*;
use crate::{CliError, Report, Shadow};

pub fn run(req: &Request) -> Result<Report, CliError> {
    let (shadow, result, notes) = match req.command {
        Command::Dimpoly => dimpoly(parse(&req.payload)?, &req.caps)?,
        Command::Decompose => decompose(parse(&req.payload)?)?,
        Command::Rank => rank(parse(&req.payload)?)?,
        Command::Chain => chain(parse(&req.payload)?, &req.caps)?,
        Command::Ncgrowth => ncgrowth(parse(&req.payload)?, &req.caps)?,
        Command::Probe => probe(parse(&req.payload)?, &req.caps)?,
        Command::Verify => verify_cmd(parse(&req.payload)?)?,
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        command: req.command,
        input: req.payload.clone(),
        shadow,
        result,
        notes,
    })
}

fn parse<T: DeserializeOwned>(payload: &Value) -> Result<T, CliError> {
    serde_json::from_value(payload.clone()).map_err(|e| CliError::Schema(e.to_string()))
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn cap_exceeded(what: String) -> CliError {
    CliError::domain("CapExceeded", format!("{what}; raise the cap or pass allow_large"))
}

fn kolchin_err(e: KolchinError) -> CliError {
    let kind = match e {
        KolchinError::NotInP { .. } => "NotInP",
        KolchinError::ZeroPolynomial => "ZeroPolynomial",
        KolchinError::TooLarge => "TooLarge",
    };
    CliError::domain(kind, e.to_string())
}

fn rank_err(e: RankError) -> CliError {
    match e {
        RankError::Kolchin(k) => kolchin_err(k),
        RankError::Ordinal(o) => CliError::domain("OutOfRange", o.to_string()),
        RankError::NotAnExtension { .. } => CliError::domain("NotAnExtension", e.to_string()),
        RankError::SampleAboveEta { .. } => CliError::domain("SampleAboveEta", e.to_string()),
        RankError::ZeroDimension => CliError::domain("ZeroDimension", e.to_string()),
    }
}

type Outcome = (Shadow, Value, Vec<String>);

/// Polynomial summary shared by several commands.
fn describe_polynomial(p: &NumericalPolynomial) -> Value {
    json!({
        "binomial_coeffs": to_value(p)["binomial_coeffs"],
        "display": p.to_string(),
        "degree": p.degree(),
    })
}

fn dimpoly(leaders: LeaderSet, caps: &Caps) -> Result<Outcome, CliError> {
    if leaders.m() > caps.max_letters && !caps.allow_large {
        return Err(cap_exceeded(format!("m = {} exceeds {}", leaders.m(), caps.max_letters)));
    }
    let canonical = leaders.canonicalize();
    if let Some(big) = canonical.coords().iter().map(Vec::len).max().filter(|&n| n > caps.max_leaders) {
        if !caps.allow_large {
            return Err(cap_exceeded(format!("{big} leaders in one coordinate exceeds {}", caps.max_leaders)));
        }
    }
    let dp = lattice::dimension_polynomial(&canonical);
    let decomposition = kolchin::decompose(&dp.polynomial).map_err(kolchin_err)?;
    let bounds = if dp.polynomial.is_zero() {
        None
    } else {
        Some(kolchin::check_rank_bounds(&dp.polynomial).map_err(kolchin_err)?)
    };

    let mut notes = Vec::new();
    let last_t = dp.threshold + ORACLE_WINDOW;
    let oracle = if last_t <= caps.max_oracle_t || caps.allow_large {
        let rows: Vec<Value> = (0..=last_t)
            .map(|t| {
                let count = lattice::count_free_points(&canonical, t);
                let value = dp.polynomial.evaluate(&BigInt::from(t));
                json!({
                    "t": t,
                    "count": count,
                    "polynomial": value.to_string(),
                    "at_or_above_threshold": t >= dp.threshold,
                    "agrees": value == BigInt::from(count),
                })
            })
            .collect();
        let agree_above = rows
            .iter()
            .filter(|r| r["at_or_above_threshold"] == true)
            .all(|r| r["agrees"] == true);
        json!({ "window": [dp.threshold, last_t], "agrees_from_threshold": agree_above, "rows": rows })
    } else {
        notes.push(format!("oracle skipped: t up to {last_t} exceeds max_oracle_t"));
        Value::Null
    };
    notes.push("below the threshold the count and the polynomial may differ; both are listed".into());

    let result = json!({
        "m": canonical.m(),
        "canonical_coords": to_value(&canonical)["coords"],
        "polynomial": describe_polynomial(&dp.polynomial),
        "threshold": dp.threshold,
        "exponents": decomposition.exponents(),
        "rank": to_value(decomposition.rank()),
        "rank_display": decomposition.rank().to_string(),
        "bounds": bounds,
        "delta_rank": lattice::delta_rank(&canonical),
        "oracle": oracle,
    });
    Ok((Shadow::KolchinPolynomial, result, notes))
}

fn decompose(p: NumericalPolynomial) -> Result<Outcome, CliError> {
    let d = kolchin::decompose(&p).map_err(kolchin_err)?;
    let result = json!({
        "exponents": d.exponents(),
        "rank": to_value(d.rank()),
        "rank_display": d.rank().to_string(),
        "polynomial": describe_polynomial(&p),
    });
    Ok((Shadow::BinomialDecomposition, result, Vec::new()))
}

fn rank(p: NumericalPolynomial) -> Result<Outcome, CliError> {
    let upper = rank_engine::u_rank_upper(&p).map_err(rank_err)?;
    let bounds = if p.is_zero() {
        None
    } else {
        Some(kolchin::check_rank_bounds(&p).map_err(kolchin_err)?)
    };
    let result = json!({
        "polynomial": describe_polynomial(&p),
        "rank": to_value(&upper),
        "rank_display": upper.to_string(),
        "u_rank_upper_bound": to_value(&upper),
        "bounds": bounds,
    });
    let notes = vec!["the rank is an upper bound on the U-rank of any type with this polynomial, not its value".into()];
    Ok((Shadow::RankUpperBound, result, notes))
}

fn chain(payload: ChainPayload, caps: &Caps) -> Result<Outcome, CliError> {
    let resolve = |o: &OrdinalInput| o.resolve().map_err(|e| CliError::Schema(e.to_string()));
    let eta = resolve(&payload.eta)?;
    let samples = payload.samples.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
    let spec = ChainSpec::new(payload.m, eta).map_err(rank_err)?;
    if payload.m > caps.max_letters && !caps.allow_large {
        return Err(cap_exceeded(format!("m = {} exceeds {}", payload.m, caps.max_letters)));
    }
    let top_t = spec.tuple().iter().sum::<u64>() + rank_engine::ORACLE_WINDOW;
    if top_t > caps.max_oracle_t && !caps.allow_large {
        return Err(cap_exceeded(format!("oracle would count up to t = {top_t}")));
    }
    let report = rank_engine::verify_chain(&spec, &samples).map_err(rank_err)?;
    let notes = vec![
        "each step is a lower-bound witness for the rank; equality of U-rank is not claimed".into(),
    ];
    let mut result = to_value(&report);
    result["passed"] = Value::Bool(report.passed());
    Ok((Shadow::UrankChain, result, notes))
}

fn parse_word(s: &str, m: usize) -> Result<Word, CliError> {
    let w: Word = s.parse().map_err(|e: free_monoid::WordError| CliError::Schema(e.to_string()))?;
    w.check_alphabet(m).map_err(|e| CliError::Schema(e.to_string()))?;
    Ok(w)
}

fn ncgrowth(payload: NcgrowthPayload, caps: &Caps) -> Result<Outcome, CliError> {
    if payload.m == 0 {
        return Err(CliError::domain("ZeroDimension", "m must be at least 1"));
    }
    if !caps.allow_large {
        if payload.m > caps.max_letters {
            return Err(cap_exceeded(format!("m = {} exceeds {}", payload.m, caps.max_letters)));
        }
        if payload.t_max > caps.t_max {
            return Err(cap_exceeded(format!("t_max = {} exceeds {}", payload.t_max, caps.t_max)));
        }
    }
    let words = payload
        .leaders
        .iter()
        .map(|s| parse_word(s, payload.m))
        .collect::<Result<Vec<_>, _>>()?;
    let leaders = WordSet::new(payload.m, words).map_err(|e| CliError::Schema(e.to_string()))?;
    let witness = free_monoid::non_polynomial_witness(&leaders, payload.t_max, payload.max_degree)
        .map_err(|e| CliError::domain("TooFewValues", e.to_string()))?;

    let mut result = to_value(&witness);
    result["no_fit"] = Value::Bool(witness.no_fit());
    result["leaders_pairwise_incomparable"] = Value::Bool(leaders.pairwise_incomparable());
    if let Some(check) = &payload.incomparable_check {
        let ws = check.iter().map(|s| parse_word(s, payload.m)).collect::<Result<Vec<_>, _>>()?;
        let set = WordSet::new(payload.m, ws).map_err(|e| CliError::Schema(e.to_string()))?;
        result["incomparable_check"] = Value::Bool(set.pairwise_incomparable());
    }
    let notes = vec![
        "counts free words only; the kernels of noncommuting derivations are not modelled".into(),
    ];
    Ok((Shadow::NonRankedness, result, notes))
}

fn probe_err(e: field_probe::ProbeError) -> CliError {
    use field_probe::ProbeError::*;
    let kind = match e {
        NotOddPrime(_) => "NotOddPrime",
        NotReduced { .. } => "NotReduced",
        NotInX(_) => "NotInX",
        EmptyX => "EmptyX",
        UnknownFamily(_) => "UnknownFamily",
        ParseSet { .. } => return CliError::Schema(e.to_string()),
        ZeroThreshold => "ZeroThreshold",
    };
    CliError::domain(kind, e.to_string())
}

fn probe(payload: ProbePayload, caps: &Caps) -> Result<Outcome, CliError> {
    let field = PrimeField::new(payload.p).map_err(probe_err)?;
    let x: BTreeSet<u64> = payload.set.parse::<SetSpec>().map_err(probe_err)?.resolve(&field);
    if x.len() > caps.max_set_size && !caps.allow_large {
        return Err(cap_exceeded(format!("|X| = {} exceeds {}", x.len(), caps.max_set_size)));
    }
    let families = payload
        .families
        .iter()
        .map(|(name, spec)| Ok((name.clone(), spec.parse::<SetSpec>().map_err(probe_err)?.resolve(&field))))
        .collect::<Result<BTreeMap<_, _>, CliError>>()?;
    let cfg = PrimeFieldConfig::new(payload.p, x, families).map_err(probe_err)?;

    let alphas: Vec<u64> = match &payload.alpha {
        AlphaInput::One(a) => vec![*a],
        AlphaInput::Text(s) if s == "all" => (1..payload.p).collect(),
        AlphaInput::Text(s) => vec![s.trim().parse().map_err(|_| CliError::Schema(format!("bad alpha {s:?}")))?],
    };
    let mut per_alpha = BTreeMap::new();
    let mut all_verified = true;
    for &alpha in &alphas {
        let inv = field_probe::inv_set(&cfg, alpha).map_err(probe_err)?;
        let verified = inv.iter().all(|q| field_probe::verify_inv_quadruple(&cfg, alpha, q));
        all_verified &= verified;
        let mut entry = json!({ "count": inv.len(), "all_reverified": verified });
        if payload.list_quadruples && alphas.len() == 1 {
            entry["quadruples"] = to_value(&inv);
        }
        per_alpha.insert(alpha.to_string(), entry);
    }
    let empty: Vec<u64> = alphas
        .iter()
        .copied()
        .filter(|a| per_alpha[&a.to_string()]["count"] == 0)
        .collect();

    let mut result = json!({
        "p": payload.p,
        "x": cfg.x(),
        "x_size": cfg.x().len(),
        "inv": per_alpha,
        "all_reverified": all_verified,
        "empty_alphas": empty,
        "nonempty_for_all_requested_alpha": empty.is_empty(),
    });
    if let Some(FiberQuery { a, b }) = payload.fiber {
        let alpha = *alphas.first().ok_or_else(|| CliError::Schema("no alpha".into()))?;
        if alphas.len() != 1 {
            return Err(CliError::Schema("fiber needs a single alpha".into()));
        }
        let fiber = field_probe::inv_fiber(&cfg, alpha, a, b).map_err(probe_err)?;
        let line = field_probe::inv_fiber_as_line(&cfg, alpha, a, b);
        result["fiber"] = json!({ "alpha": alpha, "a": a, "b": b, "pairs": fiber, "matches_line_form": fiber == line });
    }
    if let Some(q) = &payload.family_query {
        let set = field_probe::x_family_set(&cfg, q.a, q.b, &q.z, q.threshold).map_err(probe_err)?;
        result["family_set"] = json!({
            "a": q.a, "b": q.b, "z": q.z,
            "threshold": q.threshold,
            "threshold_replaces_infinite": true,
            "members": set,
        });
    }
    if let Some(limit) = payload.orbit_limit {
        let orbit = field_probe::aff_orbit(&cfg, limit);
        result["aff_orbit"] = json!({ "limit": limit, "size": orbit.len(), "sets": orbit });
    }
    let notes = vec![
        "finite-field observation; nonemptiness here is not a theorem about F_p".into(),
    ];
    Ok((Shadow::InvQuadruples, result, notes))
}

fn verify_cmd(payload: VerifyPayload) -> Result<Outcome, CliError> {
    let suites: Vec<Suite> = if payload.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![payload.suite.parse().map_err(CliError::Schema)?]
    };
    let reports: Vec<_> = suites
        .into_iter()
        .map(|s| verify::run_suite(s, payload.seed, payload.cases))
        .collect();
    let ok = reports.iter().all(|r| r.ok());
    let summary: Vec<String> = reports
        .iter()
        .map(|r| format!("{}: {}/{} checks", r.suite, r.passed, r.checks))
        .collect();
    let result = json!({ "ok": ok, "summary": summary, "suites": reports });
    Ok((Shadow::Plumbing, result, Vec::new()))
}
