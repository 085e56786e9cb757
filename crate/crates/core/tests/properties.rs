use irrmoon::exact::CycNum;
use irrmoon::modgroup::{genus, l2p_order, Psl2pElt, Psl2pGroup};
use irrmoon::qseries::QSeries;
use num_rational::Rational64;
use proptest::prelude::*;
use std::collections::BTreeMap;

const CONDUCTORS: [u64; 9] = [1, 3, 4, 5, 7, 8, 12, 20, 28];
// prime to every conductor above
const UNITS: [i64; 6] = [1, -1, 11, 13, -17, 19];

fn cyc() -> impl Strategy<Value = CycNum> {
    (
        prop::sample::select(&CONDUCTORS[..]),
        prop::collection::vec((-6i64..=6, 1i64..=4, 0i64..28), 0..5),
    )
        .prop_map(|(n, terms)| {
            let parts: Vec<CycNum> = terms
                .into_iter()
                .map(|(a, d, e)| &CycNum::from_frac(a, d) * &CycNum::root_of_unity(n, e))
                .collect();
            CycNum::sum(&parts)
        })
}

fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec(cyc(), 1..6).prop_map(|cs| {
        let mut terms: BTreeMap<i64, CycNum> = cs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (k as i64, c))
            .collect();
        // unit constant term so the series is invertible
        terms.insert(0, &terms[&0] + &CycNum::from_int(7));
        if terms[&0].is_zero() {
            terms.insert(0, CycNum::one());
        }
        QSeries::from_parts(1, terms, Some(Rational64::from_integer(6)))
    })
}

fn elt(p: u64) -> impl Strategy<Value = Psl2pElt> {
    prop::collection::vec((any::<bool>(), 0i64..20), 0..12).prop_map(move |word| {
        let s = Psl2pElt::from_signed(p, [0, -1, 1, 0]);
        let t = Psl2pElt::from_signed(p, [1, 1, 0, 1]);
        word.into_iter()
            .fold(Psl2pElt::identity(p), |x, (use_s, k)| {
                if use_s {
                    x.mul(&s)
                } else {
                    x.mul(&t.pow(k))
                }
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyc_ring_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn cyc_inverse(a in cyc()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert_eq!((&CycNum::one() / &a).unwrap(), a.inv().unwrap());
    }

    #[test]
    fn galois_is_a_field_automorphism(a in cyc(), b in cyc(), k in prop::sample::select(&UNITS[..])) {
        prop_assert_eq!((&a * &b).galois(k).unwrap(), &a.galois(k).unwrap() * &b.galois(k).unwrap());
        prop_assert_eq!((&a + &b).galois(k).unwrap(), &a.galois(k).unwrap() + &b.galois(k).unwrap());
        prop_assert_eq!(a.galois(-1).unwrap(), a.conj());
    }

    #[test]
    fn complex_embedding_is_multiplicative(a in cyc(), b in cyc()) {
        let (za, zb) = (a.to_complex(), b.to_complex());
        let z = (&a * &b).to_complex();
        prop_assert!((z - za * zb).norm() <= 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn cyc_text_round_trip(a in cyc()) {
        prop_assert_eq!(irrmoon::exact::parse_cyc(&a.raw()).unwrap(), a.clone());
        prop_assert_eq!(irrmoon::exact::parse_cyc(&a.pretty()).unwrap(), a);
    }

    #[test]
    fn series_inverse(s in series()) {
        let one = s.mul(&s.inv().unwrap());
        prop_assert!(one.agrees_with(&QSeries::constant(CycNum::one())));
        prop_assert_eq!(one.trunc(), s.trunc());
    }

    #[test]
    fn series_ring(a in series(), b in series(), k in prop::sample::select(&UNITS[..])) {
        prop_assert!(a.mul(&b).agrees_with(&b.mul(&a)));
        prop_assert!(a.mul(&b).galois(k).unwrap().agrees_with(&a.galois(k).unwrap().mul(&b.galois(k).unwrap())));
        prop_assert!(a.add(&b).sub(&b).agrees_with(&a));
    }

    #[test]
    fn psl_canonical_form(x in elt(13)) {
        let neg = x.entries().map(|v| -(v as i64));
        prop_assert_eq!(Psl2pElt::from_signed(13, neg), x);
        prop_assert_eq!(Psl2pElt::new(13, x.entries()), x);
    }

    #[test]
    fn psl_element_laws(x in elt(7), y in elt(7)) {
        prop_assert!(x.mul(&x.inv()).is_identity());
        prop_assert!(x.pow(x.order() as i64).is_identity());
        prop_assert_eq!(l2p_order(7) as u64 % x.order(), 0);
        prop_assert_eq!(x.mul(&y).inv(), y.inv().mul(&x.inv()));
    }

    #[test]
    fn subgroup_index_and_genus(gens in prop::collection::vec(elt(5), 0..3)) {
        let g = Psl2pGroup::generate(5, &gens).unwrap();
        prop_assert_eq!(l2p_order(5) % g.order(), 0);
        let d = genus(&g).unwrap();
        prop_assert_eq!(d.index * g.order(), l2p_order(5));
        prop_assert!(d.genus >= 0);
        // Riemann-Hurwitz over the j-line
        prop_assert_eq!(12 * (d.genus - 1), d.index as i64 - 3 * d.e2 as i64 - 4 * d.e3 as i64 - 6 * d.e_inf as i64);
    }
}
