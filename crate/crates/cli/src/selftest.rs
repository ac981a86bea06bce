//! Regression suite over the reference fixtures for both built-in codes.

use anyhow::Result;
use serde_json::json;

use latcert::energycert::{
    code_energy, energy_lower_bound, error_sign_check, partial_products, EnergySetup, NodeMultiset,
    Potential, DEFAULT_PRECISION,
};
use latcert::exactmath::{format_rational, int, rat, Polynomial, Rational};
use latcert::gegenbauer::gegenbauer_expand;
use latcert::gf2codes::code_report;
use latcert::lattice32::{
    build_shell, check_extremal, venkov_e22, venkov_sample, venkov_witness, EXPECTED_SHELL_SIZE,
};
use latcert::lpcert::{
    builtin, certify_max_code, certify_min_design, max_code_avoided, min_design_avoided,
};
use latcert::sphercode::{
    check_distance_invariance, distribution_from_design, histogram, moments, quadrature_check,
    DistanceDistribution, IntegerCode, InvarianceScope, DEFAULT_SAMPLE,
};

use crate::commands::load_code;
use crate::render::Outcome;
use crate::SelftestArgs;

const VENKOV_SAMPLES: usize = 20;

struct Suite {
    checks: Vec<serde_json::Value>,
    failed: usize,
}

impl Suite {
    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        eprintln!("{} {name}", if passed { "pass" } else { "FAIL" });
        if !passed {
            self.failed += 1;
        }
        self.checks
            .push(json!({ "name": name, "passed": passed, "detail": detail.into() }));
    }
}

fn fixture_distribution() -> DistanceDistribution {
    EnergySetup::extremal32().distribution
}

fn invlin_bound() -> Rational {
    int(146880)
        * (rat(1, 4)
            + rat(1240, 3)
            + int(31744) * rat(2, 5)
            + rat(80910, 2)
            + int(31744) * rat(2, 3)
            + int(1240))
}

fn fmt_list(v: &[Rational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

fn static_checks(s: &mut Suite) -> Result<()> {
    for name in ["max-code-32", "p7"] {
        let b = builtin(name).expect("built-in exists");
        let e = gegenbauer_expand(32, &b.polynomial.expand())?;
        s.check(
            &format!("gegenbauer expansion of {}", b.name),
            e.coeffs == b.expected.coeffs,
            fmt_list(&e.coeffs),
        );
    }
    let e = gegenbauer_expand(
        32,
        &builtin("max-code-32")
            .expect("built-in")
            .polynomial
            .expand(),
    )?;
    s.check(
        "max-code polynomial: f_8 = 0, negatives exactly at 2, 3",
        e.coeff(8) == int(0) && e.negative_indices() == vec![2, 3],
        format!("{:?}", e.negative_indices()),
    );

    let pp = partial_products(&NodeMultiset::extremal32(), 32)?;
    s.check(
        "partial products P1..P7 positive definite, P7(1) = 45/8",
        pp.iter().all(|p| p.definiteness.holds())
            && pp.last().map(|p| p.polynomial.eval(&int(1))) == Some(rat(45, 8)),
        format!("{} products", pp.len()),
    );

    let p = builtin("max-code-32").expect("built-in").polynomial;
    let cert = certify_max_code(&p, 32, &max_code_avoided(), &rat(1, 2), 3)?;
    s.check(
        "max-code certificate: valid, bound 146880",
        cert.valid && cert.bound == int(146880),
        format_rational(&cert.bound),
    );
    let weak = certify_max_code(&p, 32, &max_code_avoided(), &rat(1, 2), 1)?;
    s.check(
        "max-code certificate needs strength 3",
        !weak.valid,
        format!("negative coefficients {:?}", weak.negative_coefficients),
    );
    let p = builtin("min-design-32").expect("built-in").polynomial;
    let cert = certify_min_design(&p, 32, &min_design_avoided(), 7)?;
    s.check(
        "design certificate: valid, bound 146880",
        cert.valid && cert.bound == int(146880),
        format_rational(&cert.bound),
    );

    let dist = fixture_distribution();
    let q = quadrature_check(&dist, &Polynomial::monomial(2), 32, 146880, 7)?;
    s.check(
        "quadrature for t^2: both sides 4590",
        q.holds && q.lhs == int(4590),
        format!("{} = {}", format_rational(&q.lhs), format_rational(&q.rhs)),
    );
    let inner: Vec<Rational> = dist.a.keys().filter(|t| **t != int(1)).cloned().collect();
    let recovered = distribution_from_design(&inner, 146880, 32, 7)?;
    s.check(
        "distance distribution recovered from the 7-design property",
        recovered == dist,
        format!("{:?}", recovered.values()),
    );

    let setup = EnergySetup::extremal32();
    s.check(
        "Hermite error sign nonnegative off T",
        error_sign_check(&setup.nodes, &setup.avoided)?.is_nonnegative(),
        setup.avoided.to_string(),
    );
    let cert = energy_lower_bound(&Potential::InvLin, &setup, DEFAULT_PRECISION)?;
    s.check(
        "invlin energy bound: quadrature and dual forms agree",
        cert.valid && cert.lower_bound == invlin_bound() && cert.dual_bound == invlin_bound(),
        format_rational(&cert.lower_bound),
    );
    Ok(())
}

fn code_checks(s: &mut Suite, name: &str) -> Result<()> {
    let code = load_code(name)?;
    let report = code_report(&code)?;
    s.check(
        &format!("{name}: self-dual, doubly even, d = 8"),
        report.self_dual && report.doubly_even && report.min_distance == Some(8),
        format!("k = {}, A_8 = {}", report.dimension, report.count(8)),
    );
    let extremal = check_extremal(&code)?;
    s.check(
        &format!("{name}: norm-2 layer empty"),
        extremal.extremal,
        format!("{} norm-2 vectors", extremal.norm2_count),
    );
    let shell = build_shell(&code)?;
    s.check(
        &format!("{name}: shell has 146880 vectors"),
        shell.len() == EXPECTED_SHELL_SIZE,
        shell.len().to_string(),
    );

    let ic = IntegerCode::from(&shell);
    let fixture = fixture_distribution();
    let inv = check_distance_invariance(
        &ic,
        InvarianceScope::Sample {
            count: DEFAULT_SAMPLE,
            seed: 0,
        },
        None,
    );
    s.check(
        &format!("{name}: sampled distance distributions match"),
        inv.invariant && inv.distribution == fixture,
        format!("{} points, {:?}", inv.checked, inv.distribution.values()),
    );

    let hist = histogram(&ic);
    let support: Vec<Rational> = fixture
        .a
        .keys()
        .filter(|t| **t != int(1))
        .cloned()
        .collect();
    s.check(
        &format!("{name}: inner products"),
        hist.support() == support,
        fmt_list(&hist.support()),
    );
    let m = moments(&hist, 10)?;
    let zero = |i: usize| m.get(i).is_some_and(|v| *v == int(0));
    s.check(
        &format!("{name}: M_1..M_7 = M_9 = M_10 = 0, M_8 != 0"),
        (1..=7).all(zero) && zero(9) && zero(10) && !zero(8),
        format!(
            "M_8 = {}",
            m.get(8).map(format_rational).unwrap_or_default()
        ),
    );

    let setup = EnergySetup::extremal32();
    for h in [Potential::InvLin, Potential::Exp] {
        let cert = energy_lower_bound(&h, &setup, DEFAULT_PRECISION)?
            .with_code_energy(code_energy(&hist, &h, DEFAULT_PRECISION)?);
        s.check(
            &format!("{name}: {h} energy attains the bound"),
            cert.valid && cert.attained() == Some(true),
            format!(
                "gap {}",
                cert.gap.as_ref().map(format_rational).unwrap_or_default()
            ),
        );
    }

    let (x, z) = venkov_witness();
    let e22 = venkov_e22(&shell, &x, &z)?;
    s.check(
        &format!("{name}: Venkov witness e22 = 60"),
        e22 == 60,
        e22.to_string(),
    );
    let samples = venkov_sample(&shell, VENKOV_SAMPLES, 0)?;
    s.check(
        &format!("{name}: sampled e22 values even in [0, 60]"),
        samples.iter().all(|v| v.e22 % 2 == 0 && v.e22 <= 60),
        format!("{:?}", samples.iter().map(|v| v.e22).collect::<Vec<_>>()),
    );
    Ok(())
}

pub fn run(a: &SelftestArgs) -> Result<Outcome> {
    let mut suite = Suite {
        checks: Vec::new(),
        failed: 0,
    };
    static_checks(&mut suite)?;
    let codes: Vec<&str> = match &a.code {
        Some(c) => vec![c.as_str()],
        None => vec!["rm2_5", "xqr32"],
    };
    for c in codes {
        code_checks(&mut suite, c)?;
    }
    let ok = suite.failed == 0;
    Ok(Outcome {
        record: json!({
            "checks": suite.checks,
            "failed": suite.failed,
            "valid": ok,
        }),
        ok,
    })
}
