use irrmoon::exact::{parse_cyc, CycNum};
use irrmoon::qseries::{
    build_eta_quotient, eta_numeric, j_series, parse_expr, EtaQuotientSpec, Expr, DEFAULT_TRUNC,
};
use num_complex::Complex64;

const B25: &str = "eta[0/5]*eta[2/5]*eta[3/5] / (eta[1/5]*eta[4/5]*eta(25)) + (1 - sqrt5)";
const A25: &str = "eta[0/5]*eta[1/5]*eta[4/5] / (eta[2/5]*eta[3/5]*eta(25)) + (1 + sqrt5)";
const A49: &str = "eta[0/7]*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4 + (1/2 - i*sqrt7/2)";
const B49: &str = "eta[0/7]*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4 + (1/2 + i*sqrt7/2)";
const Z77: &str = "eta[0/7]*eta[3/7]*eta[5/7]*eta[6/7] / eta(7)^4 \
    + i*sqrt7*eta(49)*eta[1/7]*eta[2/7]*eta[4/7] / eta(7)^4 + (1/2 - i*sqrt7/2)";

fn check(text: &str, want: &[&str]) {
    let s = parse_expr(text).unwrap().series(DEFAULT_TRUNC).unwrap();
    assert_eq!(s.coeff_int(-1), CycNum::one(), "{text}");
    assert!(s.coeff_int(0).is_zero(), "{text}");
    for (k, w) in want.iter().enumerate() {
        assert_eq!(
            s.coeff_int(k as i64 + 1),
            parse_cyc(w).unwrap(),
            "{text} q^{}",
            k + 1
        );
    }
}

#[test]
fn hn_order_five_series() {
    check(
        B25,
        &[
            "3/2 - 5/2*sqrt5",
            "-10",
            "5",
            "21 + 5*sqrt5",
            "-25/2 + 25/2*sqrt5",
        ],
    );
    let b = parse_expr(B25).unwrap().series(DEFAULT_TRUNC).unwrap();
    let a = parse_expr(A25).unwrap().series(DEFAULT_TRUNC).unwrap();
    assert_eq!(b.galois(2).unwrap(), a);
    for (_, c) in b.terms() {
        assert!(c.conductor() <= 5);
    }
}

#[test]
fn he_order_seven_series() {
    check(
        A49,
        &[
            "-3/2 + i*sqrt7/2",
            "-5/2 - 3*i*sqrt7/2",
            "2",
            "3 - i*sqrt7",
            "-3",
        ],
    );
    let a = parse_expr(A49).unwrap().series(DEFAULT_TRUNC).unwrap();
    let b = parse_expr(B49).unwrap().series(DEFAULT_TRUNC).unwrap();
    assert_eq!(a.galois(-1).unwrap(), b);
}

#[test]
fn seven_seven_plus_series() {
    check(
        Z77,
        &[
            "-3/2 + 3*i*sqrt7/2",
            "1 - i*sqrt7",
            "9",
            "3*(1 - i*sqrt7)",
            "4",
        ],
    );
}

#[test]
fn quotient_prefactors() {
    let b = EtaQuotientSpec::parse(B25).unwrap();
    assert!(b.literal_prefactor().is_one());
    let a = EtaQuotientSpec::parse(A49).unwrap();
    assert!(!a.literal_prefactor().is_one());
    assert_eq!(
        build_eta_quotient(&b, 6).unwrap(),
        parse_expr(B25).unwrap().series(6).unwrap()
    );
}

#[test]
fn series_matches_products_numerically() {
    let taus = [
        Complex64::new(0.1, 0.9),
        Complex64::new(-0.3, 1.0),
        Complex64::new(0.0, 1.5),
    ];
    for text in [B25, A25, A49, B49, Z77] {
        let e = parse_expr(text).unwrap();
        let s = e.series(30).unwrap();
        for &t in &taus {
            let d = (e.eval(t).unwrap() - s.eval(t).unwrap()).norm();
            assert!(d < 1e-6, "{text} at {t}: {d}");
        }
    }
}

#[test]
fn classical_values() {
    let eta_i = eta_numeric(Complex64::new(0.0, 1.0), 0, 1).unwrap();
    assert!((eta_i.re - 0.768_225_4).abs() < 1e-6);
    let j = Expr::j();
    let ji = j.eval(Complex64::new(0.0, 1.0)).unwrap();
    assert!((ji - Complex64::new(984.0, 0.0)).norm() < 1e-6);
    let rho = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    assert!((j.eval(rho).unwrap() - Complex64::new(-744.0, 0.0)).norm() < 1e-6);
    // the truncated series agrees at τ = i when carried far enough
    let js = j_series(12);
    assert!((js.eval(Complex64::new(0.0, 1.0)).unwrap().re - 984.0).abs() < 1e-3);
}
