use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use flopcheck::commalg::{buchberger, member, milnor, smoothness, tjurina, CommOrder, CommPoly, Smoothness, VDim};
use flopcheck::corpus;
use flopcheck::files::{parse_algebra_file, parse_poly_file, ChartFile};
use flopcheck::findim::abelianize;
use flopcheck::gvinv::gv_from_presentation;
use flopcheck::isotest::{decide_iso, IsoVerdict, NonIsoCertificate};
use flopcheck::matfac::{check_matrix_factorization, check_quiver_relation, MatrixFile};
use flopcheck::ncgb::{dimension, CapPolicy, Presentation};
use serde_json::{json, Value};

use crate::report::{digest, Outcome, Status};

const CAP_ENV: &str = "FLOPCHECK_DEGREE_CAP";

/// Degree-cap policy from the flag, then the environment, then the default.
pub fn cap_policy(flag: Option<usize>) -> Result<CapPolicy> {
    if let Some(cap) = flag {
        return Ok(CapPolicy::with_initial(cap));
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => {
            let cap: usize = v.trim().parse().with_context(|| format!("{CAP_ENV}={v} is not a number"))?;
            Ok(CapPolicy::with_initial(cap))
        }
        Err(_) => Ok(CapPolicy::default()),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Prefixes an error with `file:line:col` when it carries a location.
fn at_path(path: &Path, e: flopcheck::Error) -> anyhow::Error {
    let prefix = match &e {
        flopcheck::Error::Parse { location, .. } => {
            format!("{}:{}:{}", path.display(), location.line, location.column)
        }
        _ => path.display().to_string(),
    };
    anyhow::Error::new(e).context(prefix)
}

fn load_algebra(path: &Path) -> Result<(String, Presentation)> {
    let text = read(path)?;
    let file = parse_algebra_file(&text).map_err(|e| at_path(path, e))?;
    Ok((text, file.presentation))
}

fn load_chart(path: &Path) -> Result<(String, flopcheck::files::Chart)> {
    let text = read(path)?;
    let chart = ChartFile::from_json(&text)
        .and_then(|c| c.load())
        .map_err(|e| at_path(path, e))?;
    Ok((text, chart))
}

fn presentation_lines(pres: &Presentation) -> Vec<String> {
    pres.relations().iter().map(|r| pres.alphabet().format_poly(r)).collect()
}

pub fn nc_dim(path: &Path, policy: &CapPolicy) -> Result<Outcome> {
    let (text, pres) = load_algebra(path)?;
    let (gb, cert) = dimension(&pres, policy);
    let report = cert.report(pres.alphabet());
    let status = if cert.dimension.is_some() { Status::Ok } else { Status::Inconclusive };
    let human = match cert.dimension {
        Some(d) => format!("{d}\n"),
        None => format!(
            "dimension not certified ({} normal words up to the cap; caps tried {:?})\n",
            cert.normal_words.len(),
            cert.caps_tried
        ),
    };
    Ok(Outcome {
        status,
        digest: digest([text]),
        result: json!({
            "dimension": report.dimension,
            "status": report.status,
            "witness_degree": report.witness_degree,
            "caps_tried": cert.caps_tried,
        }),
        certificate: json!({
            "groebner_basis": gb.elements().iter().map(|p| pres.alphabet().format_poly(p)).collect::<Vec<_>>(),
            "normal_words": report.normal_words,
        }),
        human,
    })
}

pub fn nc_basis(path: &Path, policy: &CapPolicy) -> Result<Outcome> {
    let (text, pres) = load_algebra(path)?;
    let (gb, cert) = dimension(&pres, policy);
    let report = cert.report(pres.alphabet());
    let status = if cert.dimension.is_some() { Status::Ok } else { Status::Inconclusive };
    let mut human = String::new();
    for w in &report.normal_words {
        writeln!(human, "{w}")?;
    }
    Ok(Outcome {
        status,
        digest: digest([text]),
        result: json!({ "basis": report.normal_words, "dimension": report.dimension }),
        certificate: json!({
            "groebner_basis": gb.elements().iter().map(|p| pres.alphabet().format_poly(p)).collect::<Vec<_>>(),
            "status": report.status,
        }),
        human,
    })
}

pub fn nc_nf(path: &Path, expr: &str, policy: &CapPolicy) -> Result<Outcome> {
    let (text, pres) = load_algebra(path)?;
    let p = pres.alphabet().parse(expr).context("--expr")?;
    let (gb, _) = dimension(&pres, policy);
    let nf = gb.normal_form(&p);
    let shown = pres.alphabet().format_poly(&nf);
    let status = if gb.is_complete() { Status::Ok } else { Status::Inconclusive };
    Ok(Outcome {
        status,
        digest: digest([text.as_str(), expr]),
        result: json!({ "input": pres.alphabet().format_poly(&p), "normal_form": shown, "status": gb.status() }),
        certificate: json!({
            "groebner_basis": gb.elements().iter().map(|q| pres.alphabet().format_poly(q)).collect::<Vec<_>>(),
        }),
        human: format!("{shown}\n"),
    })
}

pub fn nc_abelianize(path: &Path, policy: &CapPolicy) -> Result<Outcome> {
    let (text, pres) = load_algebra(path)?;
    let ab = abelianize(&pres);
    let (_, cert) = dimension(&ab, policy);
    let relations = presentation_lines(&ab);
    let mut human = format!("generators: {}\n", ab.alphabet().generators().join(", "));
    for r in &relations {
        writeln!(human, "relation: {r}")?;
    }
    match cert.dimension {
        Some(d) => writeln!(human, "# dimension {d}")?,
        None => writeln!(human, "# dimension not certified")?,
    }
    Ok(Outcome {
        status: if cert.dimension.is_some() { Status::Ok } else { Status::Inconclusive },
        digest: digest([text]),
        result: json!({
            "generators": ab.alphabet().generators(),
            "relations": relations,
            "dimension": cert.dimension,
        }),
        certificate: json!({ "normal_words": cert.report(ab.alphabet()).normal_words }),
        human,
    })
}

pub fn isotest(a: &Path, b: &Path, policy: &CapPolicy) -> Result<Outcome> {
    let (ta, pa) = load_algebra(a)?;
    let (tb, pb) = load_algebra(b)?;
    let report = decide_iso(&pa, &pb, policy)?;
    let (status, certificate, human) = match &report.verdict {
        IsoVerdict::NotIsomorphic { certificate } => {
            let line = match certificate {
                NonIsoCertificate::Invariant(m) => {
                    format!("not isomorphic: {} differs ({} vs {})\n", m.invariant, m.left, m.right)
                }
                NonIsoCertificate::UnitIdeal(c) => format!(
                    "not isomorphic: the constraint ideal with t*det - 1 is the unit ideal ({} generators)\n",
                    c.generators.len()
                ),
            };
            (Status::Ok, serde_json::to_value(certificate)?, line)
        }
        IsoVerdict::Isomorphic { witness } => {
            let images: Vec<String> = witness.images.iter().map(|(k, v)| format!("{k} -> {v}")).collect();
            (
                Status::Ok,
                serde_json::to_value(witness)?,
                format!("isomorphic: {}\n", images.join(", ")),
            )
        }
        IsoVerdict::Inconclusive { reason } => (Status::Inconclusive, Value::Null, format!("inconclusive: {reason}\n")),
    };
    let mut result = serde_json::to_value(&report)?;
    if let Value::Object(map) = &mut result {
        map.remove("certificate");
        map.remove("witness");
    }
    Ok(Outcome {
        status,
        digest: digest([ta, tb]),
        result,
        certificate,
        human,
    })
}

pub fn gv(path: &Path, length: usize, policy: &CapPolicy) -> Result<Outcome> {
    let (text, pres) = load_algebra(path)?;
    let report = gv_from_presentation(&pres, length, policy)?;
    let mut human = format!("dim {}, dim_ab {}\n", report.dim, report.dim_ab);
    if report.tuples.is_empty() {
        writeln!(human, "no tuple of length {length} fits")?;
    }
    for t in &report.tuples {
        let parts: Vec<String> = t.n.iter().map(|n| n.to_string()).collect();
        writeln!(human, "({})", parts.join(", "))?;
    }
    if report.ambiguous {
        writeln!(human, "ambiguous: several tuples fit")?;
    }
    Ok(Outcome {
        status: Status::Ok,
        digest: digest([text.as_bytes(), &length.to_le_bytes()[..]]),
        result: serde_json::to_value(&report)?,
        certificate: json!({ "identity": "dim = n1 + sum j^2 n_j", "n1": "dim of the abelianization" }),
        human,
    })
}

pub fn comm_number(path: &Path, order: &str, is_milnor: bool) -> Result<Outcome> {
    let text = read(path)?;
    let file = parse_poly_file(&text).map_err(|e| at_path(path, e))?;
    let order: CommOrder = order.parse()?;
    let value = if is_milnor { milnor(&file.poly, order)? } else { tjurina(&file.poly, order)? };
    let mut gens = Vec::new();
    if !is_milnor {
        gens.push(file.poly.clone());
    }
    gens.extend(flopcheck::commalg::jacobian_ideal(&file.poly));
    let gb = buchberger(&gens, order);
    let shown = match value {
        VDim::Finite(n) => n.to_string(),
        VDim::Infinite => "infinite".into(),
    };
    Ok(Outcome {
        status: Status::Ok,
        digest: digest([text.as_str(), order_name(order)]),
        result: json!({
            "invariant": if is_milnor { "milnor" } else { "tjurina" },
            "order": order,
            "value": value,
        }),
        certificate: json!({
            "standard_basis": gb.elements().iter().map(|p| p.format(&file.vars)).collect::<Vec<_>>(),
        }),
        human: format!("{shown}\n"),
    })
}

fn order_name(o: CommOrder) -> &'static str {
    match o {
        CommOrder::Dp => "dp",
        CommOrder::Ds => "ds",
    }
}

pub fn comm_smooth(path: &Path, max_pairs: Option<usize>) -> Result<Outcome> {
    let (text, chart) = load_chart(path)?;
    let verdict = smoothness(&chart.relation, max_pairs);
    let (status, human) = match &verdict {
        Smoothness::Smooth => (Status::Ok, format!("{}: smooth (1 is in the singular-locus ideal)\n", chart.name)),
        Smoothness::Singular { vdim } => (
            Status::Ok,
            format!("{}: singular, singular-locus ideal has quotient dimension {vdim:?}\n", chart.name),
        ),
        Smoothness::Inconclusive { reason } => (Status::Inconclusive, format!("{}: inconclusive: {reason}\n", chart.name)),
    };
    let certificate = match verdict {
        Smoothness::Smooth => {
            let mut gens = vec![chart.relation.clone()];
            gens.extend(flopcheck::commalg::jacobian_ideal(&chart.relation));
            json!({
                "ideal": gens.iter().map(|p| p.format(&chart.vars)).collect::<Vec<_>>(),
                "groebner_basis": buchberger(&gens, CommOrder::Dp).elements().iter().map(|p| p.format(&chart.vars)).collect::<Vec<_>>(),
            })
        }
        _ => Value::Null,
    };
    Ok(Outcome {
        status,
        digest: digest([text]),
        result: serde_json::to_value(&verdict)?,
        certificate,
        human,
    })
}

pub fn comm_member(vars: &[String], ideal: &[String], element: &str) -> Result<Outcome> {
    if vars.is_empty() {
        bail!(flopcheck::Error::Invalid("--vars is empty".into()));
    }
    let gens = ideal
        .iter()
        .map(|s| CommPoly::parse(s, vars))
        .collect::<flopcheck::Result<Vec<_>>>()
        .context("--ideal")?;
    let p = CommPoly::parse(element, vars).context("--element")?;
    let gb = buchberger(&gens, CommOrder::Dp);
    let (inside, rem) = member(&p, &gb);
    let mut inputs: Vec<&str> = vars.iter().map(String::as_str).collect();
    inputs.extend(ideal.iter().map(String::as_str));
    inputs.push(element);
    Ok(Outcome {
        status: Status::Ok,
        digest: digest(inputs),
        result: json!({ "member": inside, "remainder": rem.format(vars), "unit_ideal": gb.contains_one() }),
        certificate: json!({
            "groebner_basis": gb.elements().iter().map(|q| q.format(vars)).collect::<Vec<_>>(),
        }),
        human: if inside {
            "member\n".to_string()
        } else {
            format!("not a member, remainder {}\n", rem.format(vars))
        },
    })
}

pub fn comm_subst(path: &Path) -> Result<Outcome> {
    let (text, chart) = load_chart(path)?;
    let pulled = chart.base.substitute(&chart.map)?;
    let gb = buchberger(std::slice::from_ref(&chart.relation), CommOrder::Dp);
    let (inside, rem) = member(&pulled, &gb);
    let fibre = chart.fibre.as_ref().map(|(zero, expected)| {
        let vals = zero.iter().map(|&i| (i, flopcheck::Q::from_integer(0.into()))).collect();
        let f = chart.relation.specialize(&vals);
        json!({ "relation": f.format(&chart.vars), "matches": &f == expected })
    });
    let fibre_ok = fibre.as_ref().is_none_or(|f| f["matches"] == json!(true));
    let mut human = format!(
        "{}: base pulls back to a multiple of the chart relation: {}\n",
        chart.name,
        if inside { "yes" } else { "no" }
    );
    if let Some(f) = &fibre {
        writeln!(human, "fibre relation: {}", f["relation"].as_str().unwrap_or(""))?;
    }
    Ok(Outcome {
        status: if inside && fibre_ok { Status::Ok } else { Status::Mismatch },
        digest: digest([text]),
        result: json!({
            "pulled_back": pulled.format(&chart.vars),
            "remainder": rem.format(&chart.vars),
            "in_ideal": inside,
            "fibre": fibre,
        }),
        certificate: json!({ "chart_relation": chart.relation.format(&chart.vars) }),
        human,
    })
}

fn load_matrices(path: &Path) -> Result<(String, flopcheck::matfac::MatrixData)> {
    let text = read(path)?;
    let data = MatrixFile::from_json(&text)
        .and_then(|m| m.load())
        .map_err(|e| at_path(path, e))?;
    Ok((text, data))
}

pub fn matfac_check(path: &Path) -> Result<Outcome> {
    let (text, data) = load_matrices(path)?;
    let check = check_matrix_factorization(&data.factorization)?;
    Ok(Outcome {
        status: if check.holds { Status::Ok } else { Status::Mismatch },
        digest: digest([text]),
        result: json!({ "holds": check.holds }),
        certificate: json!({
            "residual_phi_psi": check.residual_phi_psi.format(&data.vars),
            "residual_psi_phi": check.residual_psi_phi.format(&data.vars),
        }),
        human: if check.holds {
            "phi * psi = psi * phi = f * I\n".into()
        } else {
            "not a matrix factorization (see residuals with --json)\n".into()
        },
    })
}

pub fn matfac_relation(path: &Path, expr: &str) -> Result<Outcome> {
    let (text, data) = load_matrices(path)?;
    let check = check_quiver_relation(
        expr,
        &data.arrow_names,
        &data.arrows,
        &data.factorization.psi,
        &data.factorization.f,
    )?;
    let witness = check.membership.as_ref().and_then(|m| m.witness.as_ref());
    let bounds = check.membership.as_ref().map(|m| m.bounds_tried.clone()).unwrap_or_default();
    let (status, human) = if check.exactly_zero {
        (Status::Ok, "zero\n".to_string())
    } else if witness.is_some() {
        (Status::Ok, "in the column space of psi modulo f\n".to_string())
    } else {
        (
            Status::Inconclusive,
            format!("no column-space witness with degree bounds {bounds:?}\n"),
        )
    };
    Ok(Outcome {
        status,
        digest: digest([text.as_str(), expr]),
        result: json!({
            "value": check.value.format(&data.vars),
            "exactly_zero": check.exactly_zero,
            "in_column_space": check.holds(),
            "bounds_tried": bounds,
        }),
        certificate: match witness {
            Some(w) => json!({ "g": w.g.format(&data.vars), "h": w.h.format(&data.vars) }),
            None => Value::Null,
        },
        human,
    })
}

pub fn corpus_verify(policy: &CapPolicy) -> Outcome {
    let results = corpus::verify_all(policy);
    let mut human = String::new();
    for r in &results {
        let _ = writeln!(
            human,
            "{} {:>2} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.criterion,
            r.name,
            r.detail
        );
    }
    let all = results.iter().all(|r| r.passed);
    Outcome {
        status: if all { Status::Ok } else { Status::Mismatch },
        digest: digest(corpus::FILES.iter().map(|(_, text)| text.as_bytes())),
        result: serde_json::to_value(&results).unwrap_or(Value::Null),
        certificate: json!({ "files": corpus::FILES.iter().map(|(name, _)| name).collect::<Vec<_>>() }),
        human,
    }
}
