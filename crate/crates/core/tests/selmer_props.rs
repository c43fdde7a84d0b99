use eiscurve_core::dirichlet::primitive_characters_up_to;
use eiscurve_core::selmer::{
    char_dual_twist, local_cond_dim, local_h0, selmer_dimension, DualTerm, GaloisCharacter,
    LocalCondition, Place, SelmerProblem,
};
use proptest::prelude::*;

fn character() -> impl Strategy<Value = GaloisCharacter> {
    let chars = primitive_characters_up_to(16);
    (prop::sample::select(chars), -4i64..5, prop::sample::select(vec![3u64, 5, 7, 11]))
        .prop_filter_map("conductor prime to p", |(chi, j, p)| GaloisCharacter::new(&chi, j, p).ok())
}

fn place() -> impl Strategy<Value = Place> {
    prop_oneof![
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_map(Place::Prime),
        Just(Place::Infinity),
    ]
}

fn condition() -> impl Strategy<Value = LocalCondition> {
    prop::sample::select(vec![
        LocalCondition::Zero,
        LocalCondition::Unramified,
        LocalCondition::Crystalline,
        LocalCondition::Full,
    ])
}

proptest! {
    #[test]
    fn unramified_condition_has_h0_dimension(eta in character(), v in place()) {
        prop_assert_eq!(local_cond_dim(v, LocalCondition::Unramified, &eta).unwrap(), local_h0(v, &eta));
    }

    #[test]
    fn dual_twist_is_an_involution(eta in character()) {
        prop_assert_eq!(char_dual_twist(&char_dual_twist(&eta)), eta);
    }

    #[test]
    fn ledger_sums_to_dimension(
        eta in character(),
        extra in prop::collection::vec(prop::sample::select(vec![2u64, 13, 17]), 0..2),
        picks in prop::collection::vec(condition(), 8),
        assume in prop::option::of(0u64..3),
    ) {
        let mut sigma = vec![Place::Prime(eta.p()), Place::Infinity];
        for (q, _) in eiscurve_core::numkernel::arith::factorize(eta.conductor()) {
            sigma.push(Place::Prime(q));
        }
        for q in extra {
            sigma.push(Place::Prime(q));
        }
        sigma.sort();
        sigma.dedup();
        let list: Vec<_> = sigma.iter().copied().zip(picks).collect();
        let Ok(problem) = SelmerProblem::new(eta, sigma, &list) else {
            return Ok(());
        };
        let r = selmer_dimension(&problem, assume);
        let parts: Vec<_> = r.ledger_values();
        match r.dual_term() {
            DualTerm::Unknown => prop_assert_eq!(r.dimension(), None),
            _ => {
                let sum: i64 = parts.iter().map(|v| v.unwrap()).sum();
                prop_assert_eq!(r.dimension(), Some(sum));
            }
        }
        prop_assert_eq!(r.ledger().len(), 3 + problem.sigma().len());
    }
}
