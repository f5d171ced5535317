//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use imcurve::certificate::{self, VerifyOptions};
use imcurve::gaussian::GaussianRational as GR;
use imcurve::local::{self, SingularityKind};
use imcurve::patchwork::NewtonSubdivision;
use imcurve::pipeline::{self, CensusStatus, CurveCertificate, PipelineOptions};
use imcurve::poly::ProjectivePoint;
use imcurve::topology;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn log_detail(c: &CurveCertificate, name: &str) -> String {
    c.log
        .iter()
        .find(|k| k.name == name)
        .map(|k| k.detail.clone())
        .unwrap_or_default()
}

fn reverify(c: &CurveCertificate) -> Result<(), String> {
    let (_, rep) = certificate::verify_json(&certificate::to_json(c), &VerifyOptions::default())
        .map_err(|e| e.to_string())?;
    let failed: Vec<&str> = rep
        .checks
        .iter()
        .filter(|k| !k.passed)
        .map(|k| k.name.as_str())
        .collect();
    ensure(
        failed.is_empty(),
        format!("{} verify failed: {failed:?}", c.stage.name()),
    )
}

fn seed_stage(seed: &CurveCertificate) -> Outcome {
    let c = &seed.census;
    ensure(seed.degree == 3 && seed.imaginary, "not an imaginary cubic")?;
    ensure(
        c.count == 9 && c.cap == 9 && seed.maximal && seed.census_status == CensusStatus::Exact,
        "census",
    )?;
    ensure(
        seed.singular_locus_complete && seed.singularities.len() == 1,
        "singular locus",
    )?;
    let r = &seed.singularities[0];
    ensure(
        r.multiplicity == 2 && r.kind == SingularityKind::Ordinary && !r.center.is_real(),
        "node",
    )?;
    reverify(seed)?;
    Ok(format!(
        "9 of 9 real points (exact), one imaginary node at {}",
        r.center
    ))
}

fn squared_stage(sq: &CurveCertificate) -> Outcome {
    ensure(
        sq.degree == 6 && sq.census.count == 36 && sq.maximal,
        "census",
    )?;
    let mut n = 0;
    for r in &sq.singularities {
        if let SingularityKind::Tangential { branches: 2, line } = &r.kind {
            let ok = local::tangential_branch_profile(&sq.poly, &r.center, line, 2)
                .map_err(|e| e.to_string())?;
            ensure(ok && !r.center.is_real(), "tangential profile")?;
            n += 1;
        }
    }
    ensure(n == 2, format!("{n} tangential points"))?;
    reverify(sq)?;
    Ok("degree 6, 36 real points, two imaginary tangential points with m = 2".into())
}

fn cremona_stage(cr: &CurveCertificate) -> Outcome {
    ensure(cr.degree == 12, "degree")?;
    let mut vertices = 0;
    for k in 0..3 {
        let mut e = [GR::from_int(0), GR::from_int(0), GR::from_int(0)];
        e[k] = GR::from_int(1);
        let p = ProjectivePoint::new(e).unwrap();
        let m = local::multiplicity_at(&cr.poly, &p).map_err(|e| e.to_string())?;
        let ord = local::is_ordinary(&cr.poly, &p).map_err(|e| e.to_string())?;
        if m == 6 && ord {
            vertices += 1;
        }
    }
    ensure(
        vertices == 3,
        format!("{vertices} ordinary sextuple vertices"),
    )?;
    let smooth = cr.census.boxes.iter().filter(|b| !b.is_point()).count();
    ensure(smooth == 36, format!("{smooth} smooth real points"))?;
    let star = cr.singularities.iter().find_map(|r| match &r.kind {
        SingularityKind::Tangential { branches, line } if !r.center.is_real() => {
            Some((r, line, *branches))
        }
        _ => None,
    });
    let (r, line, m) = star.ok_or("no tangential point z1*")?;
    ensure(
        local::tangential_branch_profile(&cr.poly, &r.center, line, m)
            .map_err(|e| e.to_string())?,
        "profile at z1*",
    )?;
    reverify(cr)?;
    Ok(format!("degree 12, 3 ordinary points of multiplicity 6, 36 smooth real points, z1* tangential (m = {m})"))
}

fn patchwork_stage(pw: &CurveCertificate) -> Outcome {
    let pivots = pw
        .params
        .get("pivots")
        .map(|s| s.split(' ').count())
        .unwrap_or(0);
    ensure(pivots == 6, format!("{pivots} constraints"))?;
    let regions = log_detail(pw, "regions");
    let counts: Vec<usize> = regions
        .split(['[', ']'])
        .nth(1)
        .unwrap_or("")
        .split(", ")
        .filter_map(|s| s.parse().ok())
        .collect();
    ensure(
        counts.len() == 4 && counts.iter().all(|&c| c >= 36) && regions.contains("disjoint: true"),
        regions.clone(),
    )?;
    ensure(
        pw.census.count == 144 && pw.census.cap == 144 && pw.maximal,
        "census",
    )?;
    reverify(pw)?;
    Ok(format!(
        "6 constraints at t = {}, regions {counts:?} disjoint, 144 of 144",
        pw.params["t"]
    ))
}

fn doubled_stage(db: &CurveCertificate) -> Outcome {
    ensure(db.degree == 24 && db.imaginary, "degree")?;
    let ords = db
        .singularities
        .iter()
        .filter(|r| {
            r.multiplicity == 4 && r.kind == SingularityKind::Ordinary && !r.center.is_real()
        })
        .count();
    ensure(ords >= 2, format!("{ords} ordinary quadruple points"))?;
    reverify(db)?;
    Ok(format!(
        "degree 24, {ords} ordinary imaginary points of multiplicity 4, census {} ({} predicted, cap {})",
        db.census_status.name(),
        db.census.count,
        db.census.cap
    ))
}

fn perturbed(seed: &CurveCertificate) -> Outcome {
    let p = pipeline::perturb_stage(seed).map_err(|e| e.to_string())?;
    let o = p.ovals.as_ref().ok_or("no oval report")?;
    ensure(o.witnesses.len() == 9, "witness count")?;
    ensure(
        o.witnesses.iter().all(|w| {
            w.center_bound < BigRational::from_integer(0.into())
                && w.circle_bound > BigRational::from_integer(0.into())
        }),
        "signs",
    )?;
    for r in seed.tracked() {
        for z in [r.center.clone(), r.center.conj()] {
            let m = local::multiplicity_at(&p.poly, &z).map_err(|e| e.to_string())?;
            ensure(m == r.multiplicity, "node multiplicity")?;
        }
    }
    reverify(&p)?;
    Ok(format!(
        "9 oval witnesses at eps = {}, multiplicity 2 kept at z and conj(z)",
        p.params["eps"]
    ))
}

fn topology_sweep() -> Outcome {
    let t = Instant::now();
    for k in 1..=100 {
        ensure(common::topology_ok(k), format!("k = {k}"))?;
    }
    let r = topology::spin_report(1).map_err(|e| e.to_string())?;
    ensure(r.sigma_y == 16 && r.spin, "k = 1")?;
    let el = t.elapsed();
    ensure(el < Duration::from_secs(1), format!("took {el:?}"))?;
    Ok(format!(
        "sigma = 16k and w2 = 0 for 1 <= k <= 100 in {:.3} s",
        el.as_secs_f64()
    ))
}

fn property_suites(chain: &[CurveCertificate]) -> Outcome {
    let mut r = common::rng(2024);
    for _ in 0..100 {
        let d = r.gen_range(1..=5);
        let f = common::random_dense_form(&mut r, d);
        let g = common::random_dense_form(&mut r, 2);
        ensure(
            f.conj().conj() == f && f.mul(&g).conj() == f.conj().mul(&g.conj()),
            "conj involution",
        )?;
    }
    for _ in 0..100 {
        let d = r.gen_range(1..=4);
        let f = common::random_dense_form(&mut r, d);
        let pts: Vec<[BigRational; 3]> = (0..100)
            .map(|_| {
                std::array::from_fn(|_| {
                    BigRational::new(
                        BigInt::from(r.gen_range(-50..=50)),
                        BigInt::from(r.gen_range(1..=20)),
                    )
                })
            })
            .collect();
        ensure(common::norm_form_nonnegative(&f, &pts), "f conj(f) >= 0")?;
    }
    for _ in 0..100 {
        let d = r.gen_range(1..=5);
        ensure(
            common::cremona_involution_holds(&common::random_dense_form(&mut r, d)),
            "Cremona twice",
        )?;
    }
    for d in 1..=16 {
        ensure(
            common::lifting_convex(d) && NewtonSubdivision::new(d).verify_tiling(),
            format!("lifting d = {d}"),
        )?;
    }
    for m in 1..=64u32 {
        ensure(
            local::constraint_count(m) as u64 == common::enumerated_constraints(m as u64),
            format!("constraints m = {m}"),
        )?;
    }
    for _ in 0..1000 {
        let (p, roots) = common::constructed_poly(&mut r, 30);
        ensure(common::sturm_total(&p) == roots.len(), "Sturm")?;
    }
    for c in chain {
        let mut t = c.clone();
        let m = *t.poly.terms().next().unwrap().0;
        t.poly.add_term(m, GR::from_int(1));
        let rep = certificate::verify(&t, Some(&c.digest()), &VerifyOptions::default());
        ensure(
            !rep.passed(),
            format!("tampered {} certificate passed", c.stage.name()),
        )?;
    }
    Ok(format!("conj, norm form (10^4 points), Cremona (100), lifting (d <= 16), m(m+1) (m <= 64), Sturm (1000), tamper ({})", chain.len()))
}

fn main() {
    let mut failures = 0;
    let mut report = |n: usize, title: &str, t: Instant, r: Outcome| {
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(m) => println!("PASS [{n}] {title}: {m} ({secs:.1} s)"),
            Err(m) => {
                failures += 1;
                println!("FAIL [{n}] {title}: {m} ({secs:.1} s)");
            }
        }
    };
    let opts = PipelineOptions::default();
    let t = Instant::now();
    let seed = pipeline::seed_nodal_cubic(opts.seed);
    let seed = match seed {
        Ok(s) => s,
        Err(e) => {
            println!("FAIL [1] seed stage: {e}");
            std::process::exit(1);
        }
    };
    report(1, "seed stage", t, seed_stage(&seed));
    let t = Instant::now();
    let chain = pipeline::doubling_round_chain(&seed, &opts);
    let stage_time = t.elapsed();
    let mut all = vec![seed.clone()];
    match chain {
        Ok(ch) => {
            let titles = [
                "squaring stage",
                "Cremona stage",
                "patchwork stage",
                "doubled stage",
            ];
            let checks: [fn(&CurveCertificate) -> Outcome; 4] =
                [squared_stage, cremona_stage, patchwork_stage, doubled_stage];
            for (k, c) in ch.iter().enumerate() {
                let t = Instant::now();
                let r = checks[k](c);
                report(
                    k + 2,
                    titles[k],
                    t,
                    r.map(|m| {
                        format!(
                            "{m}; stage chain built in {:.1} s",
                            stage_time.as_secs_f64()
                        )
                    }),
                );
            }
            all.extend(ch);
        }
        Err(e) => {
            for (k, title) in [
                "squaring stage",
                "Cremona stage",
                "patchwork stage",
                "doubled stage",
            ]
            .iter()
            .enumerate()
            {
                report(k + 2, title, t, Err(e.to_string()));
            }
        }
    }
    let t = Instant::now();
    report(6, "perturbation", t, perturbed(&seed));
    let t = Instant::now();
    report(7, "topology", t, topology_sweep());
    let t = Instant::now();
    report(8, "property suites", t, property_suites(&all));
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
