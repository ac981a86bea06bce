use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use latcert::energycert::{
    code_energy, energy_lower_bound, rel_close, EnergySetup, Potential, DEFAULT_TOLERANCE_DIGITS,
};
use latcert::exactmath::{int, parse_rational, PolynomialForm};
use latcert::gf2codes::{
    code_report, extended_quadratic_residue_32, load_generator_matrix, reed_muller_2_5, BinaryCode,
};
use latcert::lattice32::{
    build_shell, check_extremal, venkov_e22, venkov_sample, venkov_witness, Shell,
    EXPECTED_SHELL_SIZE,
};
use latcert::lpcert::{builtin, certify_max_code, certify_min_design};
use latcert::sphercode::{histogram, verify_code, IntegerCode, InvarianceScope, DEFAULT_SAMPLE};
use latcert::{FactoredPolynomial, IntervalRegion};

use crate::render::Outcome;
use crate::{
    BuildArgs, CertifyDesignArgs, CertifyMaxArgs, EnergyArgs, PolySource, VenkovArgs, VerifyArgs,
};

/// Largest `e₂,₂` value allowed for an extremal lattice.
const VENKOV_MAX: u32 = 60;

pub fn load_code(spec: &str) -> Result<BinaryCode> {
    Ok(match spec {
        "rm2_5" => reed_muller_2_5(),
        "xqr32" => extended_quadratic_residue_32(),
        path => load_generator_matrix(path).with_context(|| format!("loading code {path}"))?,
    })
}

fn load_shell(path: &Path) -> Result<Shell> {
    Shell::load(path).with_context(|| format!("loading shell {}", path.display()))
}

fn load_polynomial(spec: &str) -> Result<FactoredPolynomial> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return match builtin(name) {
            Some(b) => Ok(b.polynomial),
            None => bail!("unknown built-in polynomial {name:?}"),
        };
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {spec}"))?;
    match PolynomialForm::from_json(&value)? {
        PolynomialForm::Factored(p) => Ok(p),
        PolynomialForm::Dense(_) => {
            bail!("{spec}: sign analysis needs the factored form {{\"factored\": ...}}")
        }
    }
}

fn load_region(spec: &str) -> Result<IntervalRegion> {
    IntervalRegion::parse(spec).with_context(|| format!("parsing region {spec:?}"))
}

pub fn build(a: &BuildArgs) -> Result<Outcome> {
    let code = load_code(&a.code)?;
    let report = code_report(&code)?;
    let extremal = check_extremal(&code)?;
    let shell = build_shell(&code)?;
    shell.save(&a.out)?;
    let ok = extremal.extremal && shell.len() == EXPECTED_SHELL_SIZE;
    Ok(Outcome {
        record: json!({
            "code": a.code,
            "code_report": report,
            "extremal": extremal,
            "count": shell.len(),
            "families": shell.family_counts(),
            "antipodal": shell.is_antipodal(),
            "out": a.out.display().to_string(),
            "valid": ok,
        }),
        ok,
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let shell = load_shell(&a.shell)?;
    let code = IntegerCode::from(&shell);
    let scope = if a.full {
        InvarianceScope::All
    } else {
        InvarianceScope::Sample {
            count: a.sample.unwrap_or(DEFAULT_SAMPLE),
            seed: a.seed,
        }
    };
    let show = |done: usize, total: usize| eprintln!("invariance: {done}/{total} points");
    let progress: Option<&(dyn Fn(usize, usize) + Sync)> =
        if a.progress { Some(&show) } else { None };
    let (report, hist) = verify_code(&code, scope, a.cap, progress)?;
    let ok = report.invariant;
    let mut record = serde_json::to_value(&report)?;
    record["histogram"] = serde_json::to_value(&hist)?;
    record["scope"] = json!(if a.full { "all" } else { "sample" });
    record["valid"] = json!(ok);
    Ok(Outcome { record, ok })
}

pub fn certify_max(a: &CertifyMaxArgs) -> Result<Outcome> {
    let PolySource { poly, dim, avoided } = &a.source;
    let p = load_polynomial(poly)?;
    let s = parse_rational(&a.s).with_context(|| format!("parsing s = {:?}", a.s))?;
    let cert = certify_max_code(&p, *dim, &load_region(avoided)?, &s, a.strength)?;
    Ok(Outcome {
        record: cert.to_json(),
        ok: cert.valid,
    })
}

pub fn certify_design(a: &CertifyDesignArgs) -> Result<Outcome> {
    let PolySource { poly, dim, avoided } = &a.source;
    let p = load_polynomial(poly)?;
    let cert = certify_min_design(&p, *dim, &load_region(avoided)?, a.tau)?;
    Ok(Outcome {
        record: cert.to_json(),
        ok: cert.valid,
    })
}

pub fn energy(a: &EnergyArgs) -> Result<Outcome> {
    let h = Potential::parse(&a.potential)?;
    let mut cert = energy_lower_bound(&h, &EnergySetup::extremal32(), a.precision)?;
    if let Some(path) = &a.shell {
        let shell = load_shell(path)?;
        let hist = histogram(&IntegerCode::from(&shell));
        cert = cert.with_code_energy(code_energy(&hist, &h, a.precision)?);
    }
    // a measured energy must not fall below the bound
    let consistent = match (&cert.code_energy, &cert.gap) {
        (Some(e), Some(gap)) => {
            *gap >= int(0)
                || (!cert.exact && rel_close(e, &cert.lower_bound, DEFAULT_TOLERANCE_DIGITS))
        }
        _ => true,
    };
    let ok = cert.valid && consistent;
    let mut record = cert.to_json();
    record["bound_respected"] = json!(consistent);
    Ok(Outcome { record, ok })
}

pub fn venkov(a: &VenkovArgs) -> Result<Outcome> {
    let shell = load_shell(&a.shell)?;
    let mut record = json!({});
    let mut values = Vec::new();
    if a.witness || a.sample.is_none() {
        let (x, z) = venkov_witness();
        let e22 = venkov_e22(&shell, &x, &z)?;
        values.push(e22);
        record["witness"] = json!({ "x": x, "z": z, "e22": e22 });
    }
    if let Some(count) = a.sample {
        let samples = venkov_sample(&shell, count, a.seed)?;
        values.extend(samples.iter().map(|s| s.e22));
        record["seed"] = json!(a.seed);
        record["samples"] = serde_json::to_value(&samples)?;
    }
    let ok = values.iter().all(|v| v % 2 == 0 && *v <= VENKOV_MAX);
    record["distinct_values"] = json!(values
        .iter()
        .copied()
        .collect::<std::collections::BTreeSet<_>>());
    record["even_and_at_most_60"] = json!(ok);
    Ok(Outcome { record, ok })
}
