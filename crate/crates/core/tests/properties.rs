use proptest::prelude::*;

use ohno_star::algebra::{harmonic_indices, shuffle_indices};
use ohno_star::index::Index;
use ohno_star::modp::{eval_fmzv_p, eval_side_p};

fn index(max_depth: usize, max_part: u32) -> impl Strategy<Value = Index> {
    prop::collection::vec(1..=max_part, 0..=max_depth).prop_map(|v| Index::new(v).unwrap())
}

fn nonempty(max_depth: usize, max_part: u32) -> impl Strategy<Value = Index> {
    prop::collection::vec(1..=max_part, 1..=max_depth).prop_map(|v| Index::new(v).unwrap())
}

proptest! {
    #[test]
    fn text_round_trip(k in index(8, 9)) {
        prop_assert_eq!(k.to_text().parse::<Index>().unwrap(), k.clone());
        prop_assert_eq!(k.to_string().parse::<Index>().unwrap(), k);
    }

    #[test]
    fn dualities_are_involutions(k in nonempty(7, 6)) {
        let h = k.hoffman_dual().unwrap();
        prop_assert_eq!(h.weight(), k.weight());
        prop_assert_eq!(h.hoffman_dual().unwrap(), k.clone());
        let p = k.raise_last().unwrap();
        let d = p.dagger().unwrap();
        prop_assert_eq!(d.depth() + p.depth(), p.weight() as usize);
        prop_assert_eq!(d.dagger().unwrap(), p);
    }

    #[test]
    fn bridge_identity(k in nonempty(7, 6)) {
        let lhs = k.raise_last().unwrap().dagger().unwrap();
        let rhs = k.hoffman_dual().unwrap().reverse().raise_last().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn products_commute(k in index(3, 4), l in index(3, 4)) {
        prop_assert_eq!(shuffle_indices(&k, &l), shuffle_indices(&l, &k));
        prop_assert_eq!(harmonic_indices(&k, &l), harmonic_indices(&l, &k));
    }

    #[test]
    fn star_values_multiply_under_harmonic_product(
        k in index(3, 3),
        l in index(3, 3),
        p in prop::sample::select(vec![13u64, 17, 19, 23, 29, 31, 37]),
    ) {
        let product = harmonic_indices(&k, &l);
        let lhs = eval_side_p(&product, true, p).unwrap();
        let rhs = eval_fmzv_p(&k, p, true).unwrap() * eval_fmzv_p(&l, p, true).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn finite_hoffman_duality(k in nonempty(5, 3), p in prop::sample::select(vec![17u64, 19, 23, 29])) {
        let lhs = eval_fmzv_p(&k, p, true).unwrap();
        let rhs = eval_fmzv_p(&k.hoffman_dual().unwrap(), p, true).unwrap();
        prop_assert_eq!(lhs, -rhs);
    }
}
