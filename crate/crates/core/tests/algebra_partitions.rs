use dessin_core::algebra::{elementary_symmetric, factorial, int, Monomial, VPoly};
use dessin_core::partition::{partitions_of, DiagramBox, Partition};
use num_bigint::BigInt;
use proptest::prelude::*;

fn arb_vpoly(arity: usize) -> impl Strategy<Value = VPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, arity), -4i64..=4), 0..5).prop_map(
        move |terms| VPoly::from_terms(arity, terms.into_iter().map(|(e, c)| (Monomial::new(e), int(c)))),
    )
}

fn arb_partition(max: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=max, 0..=max).prop_map(Partition::from_unsorted)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_vpoly(3), b in arb_vpoly(3), c in arb_vpoly(3)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn text_is_canonical(a in arb_vpoly(2), b in arb_vpoly(2)) {
        prop_assert_eq!((&a + &b).to_text(), (&b + &a).to_text());
    }

    #[test]
    fn transpose_is_an_involution(p in arb_partition(6)) {
        prop_assert_eq!(p.transpose().transpose(), p.clone());
        prop_assert_eq!(p.transpose().size(), p.size());
    }

    #[test]
    fn text_round_trip(p in arb_partition(7)) {
        let back: Partition = p.to_text().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn product_of_linear_factors() {
    for r in 1..=5 {
        let n = r + 1;
        let x = VPoly::var(n, r);
        let mut lhs = VPoly::one(n);
        for i in 0..r {
            lhs = &lhs * &(&x + &VPoly::var(n, i));
        }
        let mut rhs = VPoly::zero(n);
        for j in 0..=r {
            let ej = elementary_symmetric(r, j).embed(n, &(0..r).collect::<Vec<_>>());
            rhs += &(&x.pow((r - j) as u32) * &ej);
        }
        assert_eq!(lhs, rhs, "r = {r}");
    }
}

#[test]
fn transpose_on_all_small_partitions() {
    for d in 0..=10 {
        for p in partitions_of(d, None) {
            assert_eq!(p.transpose().transpose(), p);
        }
    }
}

#[test]
fn class_and_dimension_sums() {
    for d in 0..=8 {
        let parts = partitions_of(d, None);
        let dims: BigInt = parts.iter().map(|l| l.dim_irrep().pow(2)).sum();
        assert_eq!(dims, factorial(d), "d = {d}");
        let classes: BigInt = parts.iter().map(|l| factorial(d) / l.z_factor()).sum();
        assert_eq!(classes, factorial(d), "d = {d}");
    }
}

#[test]
fn addable_box_contents() {
    for d in 0..=10 {
        for lambda in partitions_of(d, None) {
            let l = lambda.length();
            for b in lambda.addable_boxes() {
                let expected = if b.row <= l {
                    lambda.row(b.row) as i64 + 1 - b.row as i64
                } else {
                    -(l as i64)
                };
                assert_eq!(b.content(), expected, "{lambda} {b:?}");
                let grown = lambda.add_box(b);
                assert_eq!(grown.size(), d + 1);
                assert!(grown.removable_boxes().contains(&b));
                assert_eq!(grown.remove_box(b), lambda);
            }
        }
    }
}

#[test]
fn hook_lengths_of_a_staircase() {
    let p = Partition::new(vec![3, 2, 1]).unwrap();
    assert_eq!(p.hook_length(DiagramBox::new(1, 1)).unwrap(), 5);
    assert_eq!(p.hook_product(), BigInt::from(45));
    assert_eq!(p.dim_irrep(), BigInt::from(16));
}
