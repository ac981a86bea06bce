//! Known closed forms and brute-force recomputations.

use latcert::energycert::{divided_differences, exp, NodeMultiset, Potential, DEFAULT_PRECISION};
use latcert::exactmath::{int, rat, Polynomial, Rational};
use latcert::gegenbauer::{gegenbauer_expand, gegenbauer_poly};
use latcert::gf2codes::{code_report, extended_quadratic_residue_32, reed_muller_2_5};
use latcert::lattice32::{build_shell, venkov_e22, venkov_witness, ShellVector};
use latcert::sphercode::{
    design_strength, distribution_from_design, histogram, moments, IntegerCode,
};

fn poly(c: &[Rational]) -> Polynomial {
    Polynomial::new(c.to_vec())
}

#[test]
fn dimension_three_gives_legendre() {
    assert_eq!(
        gegenbauer_poly(3, 2).unwrap(),
        poly(&[rat(-1, 2), int(0), rat(3, 2)])
    );
    assert_eq!(
        gegenbauer_poly(3, 3).unwrap(),
        poly(&[int(0), rat(-3, 2), int(0), rat(5, 2)])
    );
    // P_4 = (35t^4 - 30t^2 + 3)/8
    assert_eq!(
        gegenbauer_poly(3, 4).unwrap(),
        poly(&[rat(3, 8), int(0), rat(-30, 8), int(0), rat(35, 8)])
    );
}

#[test]
fn dimension_two_gives_chebyshev() {
    // T_4 = 8t^4 - 8t^2 + 1, T_5 = 16t^5 - 20t^3 + 5t
    assert_eq!(
        gegenbauer_poly(2, 4).unwrap(),
        poly(&[int(1), int(0), int(-8), int(0), int(8)])
    );
    assert_eq!(
        gegenbauer_poly(2, 5).unwrap(),
        poly(&[int(0), int(5), int(0), int(-20), int(0), int(16)])
    );
}

#[test]
fn dimension_four_gives_normalized_second_kind() {
    // U_3(t)/4 = (8t^3 - 4t)/4
    assert_eq!(
        gegenbauer_poly(4, 3).unwrap(),
        poly(&[int(0), int(-1), int(0), int(2)])
    );
}

#[test]
fn sphere_average_of_even_powers() {
    // mean of t^{2m} over S^{n-1} is Π_{j=1}^m (2j-1)/(2j+n-2)
    for n in [3u32, 8, 24, 32] {
        for m in 0..6usize {
            let expected: Rational = (1..=m as i64)
                .map(|j| rat(2 * j - 1, 2 * j + n as i64 - 2))
                .product();
            let f0 = gegenbauer_expand(n, &Polynomial::monomial(2 * m))
                .unwrap()
                .constant_term();
            assert_eq!(f0, expected, "n = {n}, m = {m}");
        }
    }
}

/// E8 roots in coordinates `2v`: `(±2,±2,0^6)` and `(±1)^8` with an even
/// number of minus signs.
fn e8_roots() -> IntegerCode {
    let mut pts = Vec::new();
    for i in 0..8 {
        for j in i + 1..8 {
            for (a, b) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                let mut v = vec![0i8; 8];
                v[i] = a;
                v[j] = b;
                pts.push(v);
            }
        }
    }
    for mask in 0u32..256 {
        if mask.count_ones() % 2 == 0 {
            pts.push(
                (0..8)
                    .map(|k| if mask >> k & 1 == 1 { -1 } else { 1 })
                    .collect(),
            );
        }
    }
    IntegerCode::new(8, &pts).unwrap()
}

#[test]
fn e8_is_a_tight_seven_design() {
    let code = e8_roots();
    assert_eq!(code.len(), 240);
    let hist = histogram(&code);
    assert_eq!(hist.support(), vec![int(-1), rat(-1, 2), int(0), rat(1, 2)]);
    assert_eq!(hist.count(&rat(1, 2)), 240 * 56);
    assert_eq!(hist.count(&int(0)), 240 * 126);
    assert_eq!(design_strength(&hist, 12).unwrap().tau, 7);
    let m = moments(&hist, 8).unwrap();
    assert_ne!(m.get(8), Some(&int(0)));
    let inner = [int(-1), rat(-1, 2), int(0), rat(1, 2)];
    let dist = distribution_from_design(&inner, 240, 8, 7).unwrap();
    assert_eq!(dist.values(), vec![1, 56, 126, 56, 1]);
}

#[test]
fn extremal_codes_share_the_weight_enumerator() {
    for code in [reed_muller_2_5(), extended_quadratic_residue_32()] {
        let r = code_report(&code).unwrap();
        assert_eq!(r.count(0), 1);
        assert_eq!(r.count(8), 620);
        assert_eq!(r.count(12), 13888);
        assert_eq!(r.count(16), 36518);
        assert_eq!(r.count(32), 1);
    }
    assert!(!reed_muller_2_5().same_code(&extended_quadratic_residue_32()));
}

fn naive_e22(vectors: &[ShellVector], x: &ShellVector, z: &ShellVector) -> u32 {
    let mut count = 0;
    for y in vectors {
        let xy: i32 =
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| *a as i32 * *b as i32)
                .sum();
        let zy: i32 =
            z.0.iter()
                .zip(&y.0)
                .map(|(a, b)| *a as i32 * *b as i32)
                .sum();
        if xy == 16 && zy == 16 {
            count += 1;
        }
    }
    count
}

#[test]
fn venkov_matches_brute_force() {
    let shell = build_shell(&reed_muller_2_5()).unwrap();
    let (x, z) = venkov_witness();
    assert_eq!(
        venkov_e22(&shell, &x, &z).unwrap(),
        naive_e22(shell.vectors(), &x, &z)
    );
    // a half-coset vector against an orthogonal integer one
    let h = shell
        .vectors()
        .iter()
        .find(|v| v.is_half_coset())
        .copied()
        .unwrap();
    let w = shell
        .vectors()
        .iter()
        .find(|v| v.is_integer_coset() && h.dot(v) == 0)
        .copied()
        .unwrap();
    let e = venkov_e22(&shell, &h, &w).unwrap();
    assert_eq!(e, naive_e22(shell.vectors(), &h, &w));
    assert!(e.is_multiple_of(2) && e <= 60);
}

#[test]
fn derivatives_match_central_differences() {
    // h'(t) against (h(t+e) - h(t-e))/2e, error O(e^2)
    let eps = rat(1, 10i64.pow(15));
    for h in [
        Potential::Exp,
        Potential::Gauss(rat(3, 2)),
        Potential::Riesz(3),
        Potential::InvLin,
    ] {
        for t in [rat(-1, 2), int(0), rat(1, 4)] {
            let d = h.derivative(&t, DEFAULT_PRECISION).unwrap();
            let fd = (h.value(&(&t + &eps), DEFAULT_PRECISION).unwrap()
                - h.value(&(&t - &eps), DEFAULT_PRECISION).unwrap())
                / (int(2) * &eps);
            let err = (&d - &fd) / &d;
            let bound = &eps * &eps * int(10i64.pow(10));
            assert!(err < bound && -err < bound, "{h} at {t}");
        }
    }
}

#[test]
fn exp_divided_differences_are_scaled_by_factorials() {
    // on repeated nodes only, e[t,…,t] (k+1 times) = e^t / k!; with two
    // copies the first difference is e^t itself
    let m = NodeMultiset::new(vec![int(0), int(0)]).unwrap();
    let dd = divided_differences(&Potential::Exp, &m, DEFAULT_PRECISION).unwrap();
    assert_eq!(dd[0], int(1));
    assert_eq!(dd[1], int(1));
    // on 0, 1: (e - 1)
    let m = NodeMultiset::new(vec![int(0), int(1)]).unwrap();
    let dd = divided_differences(&Potential::Exp, &m, DEFAULT_PRECISION).unwrap();
    assert_eq!(dd[1], exp(&int(1), DEFAULT_PRECISION) - int(1));
}
