use eiscurve_core::dirichlet::{characters_mod, gen_bernoulli, primitive_characters_up_to};

#[test]
fn evaluation_is_multiplicative_in_the_character() {
    for n in 1..=24u64 {
        let chars = characters_mod(n).unwrap();
        for chi in &chars {
            for psi in &chars {
                let prod = chi.mul(psi);
                for a in -(n as i64)..=(2 * n as i64) {
                    assert_eq!(prod.eval(a), &chi.eval(a) * &psi.eval(a), "N={n} a={a}");
                }
            }
        }
    }
}

#[test]
fn bernoulli_parity_vanishing() {
    for psi in primitive_characters_up_to(12) {
        for k in 2..=12u32 {
            let parity = if k % 2 == 0 { 1 } else { -1 };
            if psi.sign() != parity {
                assert!(gen_bernoulli(k, &psi).unwrap().value.is_zero(), "k={k} {psi:?}");
            }
        }
    }
}

#[test]
fn character_counts_match_totient() {
    for n in 1..=60u64 {
        let chars = characters_mod(n).unwrap();
        assert_eq!(chars.len() as u64, eiscurve_core::numkernel::arith::euler_phi(n));
        let primitive = chars.iter().filter(|c| c.is_primitive()).count();
        // number of primitive characters mod n is the Dirichlet convolution of phi with mu
        let expected: i64 = eiscurve_core::numkernel::arith::divisors(n)
            .into_iter()
            .map(|d| mobius(n / d) * eiscurve_core::numkernel::arith::euler_phi(d) as i64)
            .sum();
        assert_eq!(primitive as i64, expected, "N={n}");
    }
}

fn mobius(n: u64) -> i64 {
    let f = eiscurve_core::numkernel::arith::factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}
