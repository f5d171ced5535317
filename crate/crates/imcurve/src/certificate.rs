//! Certificate serialization (canonical JSON, SHA-256 digest) and independent
//! re-verification.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::gaussian::fmt_rational;
use crate::local::{self, SingularityKind, SingularityRecord};
use crate::pipeline::{
    self, CensusStatus, Check, CurveCertificate, OvalReport, OvalWitness, Stage,
};
use crate::poly::{parse_point, parse_ratio, PlanePoly};
use crate::real_solve::{self, Census, IsolatingBox};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u64 = 1;

fn rat(r: &BigRational) -> Value {
    Value::String(fmt_rational(r))
}

fn box_value(b: &IsolatingBox) -> Value {
    json!({ "chart": b.chart, "x": [rat(&b.x.0), rat(&b.x.1)], "y": [rat(&b.y.0), rat(&b.y.1)] })
}

fn record_value(r: &SingularityRecord) -> Value {
    let mut m = Map::new();
    m.insert("point".into(), Value::String(r.center.to_string()));
    m.insert("multiplicity".into(), json!(r.multiplicity));
    m.insert("certified".into(), json!(r.certified));
    match &r.kind {
        SingularityKind::Ordinary => {
            m.insert("kind".into(), json!("ordinary"));
        }
        SingularityKind::Tangential { branches, line } => {
            m.insert("kind".into(), json!("tangential"));
            m.insert("branches".into(), json!(branches));
            m.insert("line".into(), Value::String(line.to_string()));
        }
        SingularityKind::Other => {
            m.insert("kind".into(), json!("other"));
        }
    }
    Value::Object(m)
}

fn ovals_value(o: &OvalReport) -> Value {
    let ws: Vec<Value> = o
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "box": box_value(&w.point),
                "center": [rat(&w.center.0), rat(&w.center.1)],
                "center_bound": rat(&w.center_bound),
                "circle_bound": rat(&w.circle_bound),
            })
        })
        .collect();
    json!({ "eps": rat(&o.eps), "radius": rat(&o.radius), "arcs": o.arcs, "witnesses": ws })
}

/// Certificate as JSON without the digest field. Object keys are sorted, so the
/// compact serialization is canonical.
pub fn to_value(c: &CurveCertificate) -> Value {
    let log: Vec<Value> = c
        .log
        .iter()
        .map(|k| json!({ "name": k.name, "passed": k.passed, "detail": k.detail }))
        .collect();
    let params: Map<String, Value> = c
        .params
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "stage": c.stage.name(),
        "polynomial": c.poly.to_string(),
        "degree": c.degree,
        "census": {
            "status": c.census_status.name(),
            "count": c.census.count,
            "cap": c.census.cap,
            "boxes": c.census.boxes.iter().map(box_value).collect::<Vec<_>>(),
        },
        "singularities": c.singularities.iter().map(record_value).collect::<Vec<_>>(),
        "singular_locus_complete": c.singular_locus_complete,
        "imaginary": c.imaginary,
        "maximal": c.maximal,
        "parent": c.parent,
        "params": params,
        "ovals": c.ovals.as_ref().map(ovals_value),
        "log": log,
    })
}

pub fn canonical_string(c: &CurveCertificate) -> String {
    serde_json::to_string(&to_value(c)).expect("json values serialize")
}

pub fn digest(c: &CurveCertificate) -> String {
    hex::encode(Sha256::digest(canonical_string(c).as_bytes()))
}

/// Pretty JSON including the digest.
pub fn to_json(c: &CurveCertificate) -> String {
    let mut v = to_value(c);
    v.as_object_mut()
        .unwrap()
        .insert("digest".into(), Value::String(digest(c)));
    serde_json::to_string_pretty(&v).expect("json values serialize")
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Certificate(msg.into())
}

fn get<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| bad(format!("missing field `{k}`")))
}

fn get_str<'a>(v: &'a Value, k: &str) -> Result<&'a str> {
    get(v, k)?
        .as_str()
        .ok_or_else(|| bad(format!("field `{k}` is not a string")))
}

fn get_u64(v: &Value, k: &str) -> Result<u64> {
    get(v, k)?
        .as_u64()
        .ok_or_else(|| bad(format!("field `{k}` is not an integer")))
}

fn get_bool(v: &Value, k: &str) -> Result<bool> {
    get(v, k)?
        .as_bool()
        .ok_or_else(|| bad(format!("field `{k}` is not a boolean")))
}

fn get_arr<'a>(v: &'a Value, k: &str) -> Result<&'a Vec<Value>> {
    get(v, k)?
        .as_array()
        .ok_or_else(|| bad(format!("field `{k}` is not an array")))
}

fn parse_rat(v: &Value) -> Result<BigRational> {
    parse_ratio(
        v.as_str()
            .ok_or_else(|| bad("expected a rational string"))?,
    )
}

fn parse_pair(v: &Value) -> Result<(BigRational, BigRational)> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([a, b]) => Ok((parse_rat(a)?, parse_rat(b)?)),
        _ => Err(bad("expected a pair")),
    }
}

fn parse_box(v: &Value) -> Result<IsolatingBox> {
    let chart = get_u64(v, "chart")? as usize;
    if chart > 2 {
        return Err(bad("chart index out of range"));
    }
    let x = parse_pair(get(v, "x")?)?;
    let y = parse_pair(get(v, "y")?)?;
    if x.0 > x.1 || y.0 > y.1 {
        return Err(bad("inverted box"));
    }
    Ok(IsolatingBox { chart, x, y })
}

fn parse_record(v: &Value) -> Result<SingularityRecord> {
    let kind = match get_str(v, "kind")? {
        "ordinary" => SingularityKind::Ordinary,
        "other" => SingularityKind::Other,
        "tangential" => SingularityKind::Tangential {
            branches: get_u64(v, "branches")? as u32,
            line: PlanePoly::parse(get_str(v, "line")?)?,
        },
        k => return Err(bad(format!("unknown singularity kind {k}"))),
    };
    Ok(SingularityRecord {
        center: parse_point(get_str(v, "point")?)?,
        multiplicity: get_u64(v, "multiplicity")? as u32,
        kind,
        certified: get_bool(v, "certified")?,
    })
}

fn parse_ovals(v: &Value) -> Result<OvalReport> {
    let witnesses = get_arr(v, "witnesses")?
        .iter()
        .map(|w| {
            Ok(OvalWitness {
                point: parse_box(get(w, "box")?)?,
                center: parse_pair(get(w, "center")?)?,
                center_bound: parse_rat(get(w, "center_bound")?)?,
                circle_bound: parse_rat(get(w, "circle_bound")?)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OvalReport {
        eps: parse_rat(get(v, "eps")?)?,
        radius: parse_rat(get(v, "radius")?)?,
        arcs: get_u64(v, "arcs")? as usize,
        witnesses,
    })
}

/// Parses a certificate; returns it with the stored digest.
pub fn from_json(s: &str) -> Result<(CurveCertificate, String)> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    if get_u64(&v, "schema")? != SCHEMA_VERSION {
        return Err(bad("unsupported schema version"));
    }
    let stored = get_str(&v, "digest")?.to_string();
    let census_v = get(&v, "census")?;
    let boxes = get_arr(census_v, "boxes")?
        .iter()
        .map(parse_box)
        .collect::<Result<Vec<_>>>()?;
    let mut census = Census::new(boxes, get_u64(census_v, "cap")? as usize);
    if census.count as u64 != get_u64(census_v, "count")? {
        return Err(bad("census count disagrees with its boxes"));
    }
    census.maximal = census.count == census.cap;
    let params: BTreeMap<String, String> = get(&v, "params")?
        .as_object()
        .ok_or_else(|| bad("params is not an object"))?
        .iter()
        .map(|(k, x)| {
            Ok((
                k.clone(),
                x.as_str()
                    .ok_or_else(|| bad("param is not a string"))?
                    .to_string(),
            ))
        })
        .collect::<Result<_>>()?;
    let log = get_arr(&v, "log")?
        .iter()
        .map(|c| {
            Ok(Check {
                name: get_str(c, "name")?.into(),
                passed: get_bool(c, "passed")?,
                detail: get_str(c, "detail")?.into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ovals = match get(&v, "ovals")? {
        Value::Null => None,
        o => Some(parse_ovals(o)?),
    };
    let parent = match get(&v, "parent")? {
        Value::Null => None,
        p => Some(
            p.as_str()
                .ok_or_else(|| bad("parent is not a string"))?
                .to_string(),
        ),
    };
    let cert = CurveCertificate {
        stage: Stage::parse(get_str(&v, "stage")?)?,
        poly: PlanePoly::parse(get_str(&v, "polynomial")?)?,
        degree: get_u64(&v, "degree")? as u32,
        census,
        census_status: CensusStatus::parse(get_str(census_v, "status")?)?,
        singularities: get_arr(&v, "singularities")?
            .iter()
            .map(parse_record)
            .collect::<Result<_>>()?,
        singular_locus_complete: get_bool(&v, "singular_locus_complete")?,
        imaginary: get_bool(&v, "imaginary")?,
        maximal: get_bool(&v, "maximal")?,
        parent,
        params,
        ovals,
        log,
    };
    Ok((cert, stored))
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Certify deferred censuses too.
    pub deep: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Wall time of each check, parallel to `checks`.
    pub timings: Vec<std::time::Duration>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, run: impl FnOnce() -> Result<(bool, String)>) {
        let t = std::time::Instant::now();
        let r = run();
        self.timings.push(t.elapsed());
        let c = match r {
            Ok((ok, d)) => Check::new(name, ok, d),
            Err(e) => Check::new(name, false, e.to_string()),
        };
        self.checks.push(c);
    }
}

fn verify_census(c: &CurveCertificate, opts: &VerifyOptions) -> Result<(bool, String)> {
    let f = &c.poly;
    let cap = (c.degree * c.degree) as usize;
    if c.census_status != CensusStatus::NotApplicable && c.census.cap != cap {
        return Ok((
            false,
            format!("cap {} but degree {}", c.census.cap, c.degree),
        ));
    }
    match c.census_status {
        CensusStatus::Exact => {
            real_solve::revalidate_boxes(f, &c.census.boxes)?;
            let fresh = real_solve::real_points(f, real_solve::DEFAULT_REFINE_BITS)?;
            Ok((
                fresh.count == c.census.count,
                format!(
                    "{} stored, {} recomputed by resultants",
                    c.census.count, fresh.count
                ),
            ))
        }
        CensusStatus::Predicted => {
            real_solve::revalidate_boxes(f, &c.census.boxes)?;
            let mut bound = 0;
            for b in &c.census.boxes {
                bound += if b.is_point() {
                    real_solve::exact_point_weight(f, &b.center_point())?
                } else {
                    1
                };
            }
            let coprime = real_solve::real_parts_coprime(f)?;
            Ok((
                coprime && bound == cap && c.census.count <= cap,
                format!("{} boxes revalidated, intersection bound {bound} of {cap}, parts coprime: {coprime}", c.census.count),
            ))
        }
        CensusStatus::Deferred => {
            if !opts.deep {
                return Ok((
                    true,
                    format!(
                        "deferred: {} predicted points not certified",
                        c.census.count
                    ),
                ));
            }
            let preds: Vec<(f64, f64)> = c
                .census
                .boxes
                .iter()
                .filter(|b| !b.is_point())
                .map(|b| b.center_f64())
                .collect();
            let exact: Vec<_> = c
                .census
                .boxes
                .iter()
                .filter(|b| b.is_point())
                .map(|b| b.center_point())
                .collect();
            let pc = real_solve::census_from_predictions(f, &preds, &exact)?;
            Ok((
                pc.complete,
                format!(
                    "deep: {} certified points, bound {} of {cap}",
                    pc.census.count, pc.bound
                ),
            ))
        }
        CensusStatus::NotApplicable => Ok((
            c.census.boxes.is_empty(),
            "real curve, no finite census".into(),
        )),
    }
}

fn verify_singularities(c: &CurveCertificate) -> Result<(bool, String)> {
    for r in &c.singularities {
        if c.stage == Stage::Perturbed {
            let m = local::multiplicity_at(&c.poly, &r.center)?;
            if m != r.multiplicity {
                return Ok((
                    false,
                    format!(
                        "multiplicity {m} at {}, stored {}",
                        r.center, r.multiplicity
                    ),
                ));
            }
            continue;
        }
        let line = match &r.kind {
            SingularityKind::Tangential { branches, line } => Some((line, *branches)),
            _ => None,
        };
        let fresh = local::analyze(&c.poly, &r.center, line)?;
        if fresh.multiplicity != r.multiplicity
            || (r.kind != SingularityKind::Other && fresh.kind != r.kind)
        {
            return Ok((
                false,
                format!(
                    "{} at {}, stored {}",
                    fresh.kind_name(),
                    r.center,
                    r.kind_name()
                ),
            ));
        }
    }
    if c.singular_locus_complete {
        let pts: Vec<_> = c.singularities.iter().map(|r| r.center.clone()).collect();
        if !local::singular_points_confined(&c.poly, &pts)? {
            return Ok((false, "further singular points exist".into()));
        }
    }
    Ok((
        true,
        format!("{} singular points re-analyzed", c.singularities.len()),
    ))
}

fn verify_ovals(c: &CurveCertificate) -> Result<(bool, String)> {
    let Some(o) = &c.ovals else {
        return Ok((c.stage != Stage::Perturbed, "no oval report".into()));
    };
    if !c.poly.is_real() {
        return Ok((false, "perturbed polynomial is not real".into()));
    }
    let boxes: Vec<IsolatingBox> = o.witnesses.iter().map(|w| w.point.clone()).collect();
    for (k, a) in boxes.iter().enumerate() {
        for b in &boxes[k + 1..] {
            if a.chart != b.chart {
                continue;
            }
            let gx = (&b.x.0 - &a.x.1).max(&a.x.0 - &b.x.1);
            let gy = (&b.y.0 - &a.y.1).max(&a.y.0 - &b.y.1);
            if gx.max(gy) < &o.radius * BigRational::from_integer(2.into()) {
                return Ok((false, "oval circles may meet".into()));
            }
        }
    }
    match pipeline::oval_witnesses(&c.poly, &boxes, &o.radius)? {
        Some((ws, arcs)) => {
            let ok = ws.iter().all(|w| {
                w.center_bound.is_negative()
                    && w.circle_bound.is_positive()
                    && !w.circle_bound.is_zero()
            });
            Ok((
                ok && arcs == o.arcs,
                format!("{} disjoint ovals re-certified over {arcs} arcs", ws.len()),
            ))
        }
        None => Ok((false, "an oval witness fails".into())),
    }
}

/// Re-checks every claim of a certificate from its polynomial.
pub fn verify(
    c: &CurveCertificate,
    stored_digest: Option<&str>,
    opts: &VerifyOptions,
) -> VerifyReport {
    let mut rep = VerifyReport {
        checks: Vec::new(),
        timings: Vec::new(),
    };
    if let Some(d) = stored_digest {
        rep.push("digest", || {
            let fresh = digest(c);
            Ok((fresh == d, format!("sha256 {fresh}")))
        });
    }
    let f = &c.poly;
    rep.push("degree", || {
        Ok((
            f.is_homogeneous() && f.degree() == c.degree,
            format!("homogeneous of degree {}", f.degree()),
        ))
    });
    if c.stage != Stage::Perturbed {
        rep.push("imaginary", || {
            Ok((
                f.is_imaginary() == c.imaginary,
                format!("imaginary: {}", f.is_imaginary()),
            ))
        });
    }
    let maximal = matches!(
        c.census_status,
        CensusStatus::Exact | CensusStatus::Predicted
    ) && c.census.count == c.census.cap;
    rep.push("maximal flag", || {
        Ok((maximal == c.maximal, format!("maximal: {maximal}")))
    });
    rep.push("census", || verify_census(c, opts));
    rep.push("singularities", || verify_singularities(c));
    if c.stage == Stage::Perturbed || c.ovals.is_some() {
        rep.push("ovals", || verify_ovals(c));
    }
    rep
}

pub fn verify_json(s: &str, opts: &VerifyOptions) -> Result<(CurveCertificate, VerifyReport)> {
    let (c, d) = from_json(s)?;
    let rep = verify(&c, Some(&d), opts);
    Ok((c, rep))
}

/// A zero-valued rational, used when a report field is absent.
pub fn zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_tamper() {
        let c = pipeline::seed_nodal_cubic(42).unwrap();
        let s = to_json(&c);
        let (back, d) = from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(d, digest(&c));
        let rep = verify(&back, Some(&d), &VerifyOptions::default());
        assert!(rep.passed(), "{:?}", rep.checks);
        let tampered = s.replacen("\"maximal\": true", "\"maximal\": false", 1);
        let (t, d2) = from_json(&tampered).unwrap();
        assert!(!verify(&t, Some(&d2), &VerifyOptions::default()).passed());
    }
}
