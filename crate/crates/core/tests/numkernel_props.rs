use eiscurve_core::numkernel::{exp_series, ratio, series_mul, CyclotomicNumber, Rational, TruncatedSeries};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| ratio(n, d))
}

fn order() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 9, 12, 15])
}

fn raw_poly(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 0..len)
}

fn cyclotomic() -> impl Strategy<Value = CyclotomicNumber> {
    order().prop_flat_map(|m| raw_poly(2 * m as usize + 2).prop_map(move |raw| CyclotomicNumber::normalize(m, raw)))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::from_integer(0.into()); (a.len() + b.len()).saturating_sub(1)];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn series(prec: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
    prop::collection::vec(rational(), prec).prop_map(|c| TruncatedSeries::new(c).unwrap())
}

proptest! {
    #[test]
    fn rational_ring_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn cyclotomic_ring_axioms(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn cyclotomic_inverse(a in cyclotomic()) {
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(&a * &inv, CyclotomicNumber::one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn normalize_is_idempotent_and_multiplicative(
        m in order(),
        a in raw_poly(30),
        b in raw_poly(30),
    ) {
        let na = CyclotomicNumber::normalize(m, a.clone());
        let again = CyclotomicNumber::normalize(m, na.coeffs().to_vec());
        prop_assert_eq!(&again, &na);
        let nb = CyclotomicNumber::normalize(m, b.clone());
        prop_assert_eq!(CyclotomicNumber::normalize(m, poly_mul(&a, &b)), &na * &nb);
    }

    #[test]
    fn series_product_commutes_and_associates(f in series(8), g in series(8), h in series(8)) {
        prop_assert_eq!(series_mul(&f, &g), series_mul(&g, &f));
        prop_assert_eq!(series_mul(&series_mul(&f, &g), &h), series_mul(&f, &series_mul(&g, &h)));
    }

    #[test]
    fn exp_is_a_homomorphism(a in rational(), b in rational(), pa in 1usize..10, pb in 1usize..10) {
        let lhs = series_mul(&exp_series(&a, pa).unwrap(), &exp_series(&b, pb).unwrap());
        prop_assert_eq!(lhs, exp_series(&(a + b), pa.min(pb)).unwrap());
    }
}
