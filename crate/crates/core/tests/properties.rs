use fungraph::algebra::{product, scalar, sum, sum_all};
use fungraph::division::{quotients, DEFAULT_BOUND};
use fungraph::witness::{build_witness, verify_witness, Branch};
use fungraph::{FunctionalDigraph, SumOfCycles};
use proptest::prelude::*;

fn digraph(max: usize) -> impl Strategy<Value = FunctionalDigraph> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(0..n, n)).prop_map(|succ| {
        FunctionalDigraph::from_successors(succ).unwrap()
    })
}

/// Vertex 0 is the fixed point and every other vertex points to a smaller one.
fn f1_digraph(max: usize) -> impl Strategy<Value = FunctionalDigraph> {
    (1..=max)
        .prop_flat_map(|n| (1..n).map(|v| 0..v).collect::<Vec<_>>())
        .prop_map(|tail| {
            let mut succ = vec![0];
            succ.extend(tail);
            FunctionalDigraph::from_successors(succ).unwrap()
        })
}

fn with_permutation(max: usize) -> impl Strategy<Value = (FunctionalDigraph, Vec<usize>)> {
    digraph(max).prop_flat_map(|x| {
        let n = x.len();
        (Just(x), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels((x, perm) in with_permutation(12)) {
        let y = x.relabel(&perm).unwrap();
        prop_assert_eq!(x.canonical_form(), y.canonical_form());
        prop_assert!(x.is_isomorphic(&y));
    }

    #[test]
    fn canonical_representative_is_isomorphic(x in digraph(10)) {
        let rep = x.canonical_form().to_digraph();
        prop_assert_eq!(rep.len(), x.len());
        prop_assert_eq!(rep.canonical_form(), x.canonical_form());
    }

    #[test]
    fn literal_round_trip(x in digraph(10)) {
        let parsed: FunctionalDigraph = x.to_string().parse().unwrap();
        prop_assert_eq!(parsed, x);
    }

    #[test]
    fn product_size_and_commutativity(a in digraph(6), b in digraph(6)) {
        let ab = product(&a, &b);
        prop_assert_eq!(ab.len(), a.len() * b.len());
        prop_assert!(ab.is_isomorphic(&product(&b, &a)));
        prop_assert!(sum(&a, &b).is_isomorphic(&sum(&b, &a)));
    }

    #[test]
    fn product_distributes(a in digraph(4), b in digraph(4), c in digraph(4)) {
        let lhs = product(&a, &sum(&b, &c));
        let rhs = sum(&product(&a, &b), &product(&a, &c));
        prop_assert!(lhs.is_isomorphic(&rhs));
        prop_assert!(product(&product(&a, &b), &c).is_isomorphic(&product(&a, &product(&b, &c))));
    }

    #[test]
    fn cyclic_part_of_product(a in digraph(7), b in digraph(7)) {
        let lhs = product(&a, &b).cyclic_part();
        prop_assert_eq!(lhs, a.cyclic_part().product(&b.cyclic_part()));
    }

    #[test]
    fn scalar_is_repeated_sum(a in digraph(5), k in 0usize..4) {
        let repeated = sum_all(std::iter::repeat(&a).take(k));
        prop_assert!(scalar(k, &a).is_isomorphic(&repeated));
    }

    #[test]
    fn components_sum_back(x in digraph(12)) {
        let comps = x.components();
        prop_assert_eq!(comps.len(), x.component_count());
        let whole = sum_all(comps.iter().map(|c| &c.digraph));
        prop_assert!(whole.is_isomorphic(&x));
        for c in &comps {
            prop_assert!(c.digraph.is_connected());
            prop_assert_eq!(c.cycle_vertices.len(), c.cycle_len);
        }
    }

    #[test]
    fn depth_drops_along_edges(x in f1_digraph(12)) {
        let prof = x.height_profile().unwrap();
        prop_assert_eq!(prof.depth[prof.fixed_point], 0);
        for v in (0..x.len()).filter(|&v| v != prof.fixed_point) {
            prop_assert_eq!(prof.depth[x.succ(v)] + 1, prof.depth[v]);
        }
        prop_assert!(x.truncate(prof.height).unwrap().is_isomorphic(&x));
        prop_assert_eq!(x.truncate(0).unwrap().len(), 1);
    }

    #[test]
    fn sum_of_cycles_round_trip(lengths in prop::collection::vec(1usize..8, 0..5)) {
        let s = SumOfCycles::from_lengths(lengths).unwrap();
        prop_assert_eq!(SumOfCycles::from_digraph(&s.to_digraph()).unwrap(), s);
    }

    #[test]
    fn products_have_their_factor_as_quotient(x in digraph(4), y in digraph(3)) {
        let a = product(&x, &y);
        let q = quotients(&x, &a, DEFAULT_BOUND).unwrap();
        prop_assert!(q.exhaustive);
        prop_assert!(q.quotients.iter().any(|z| z.is_isomorphic(&y)));
        for z in &q.quotients {
            prop_assert!(product(&x, z).is_isomorphic(&a));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_verify((x, perm) in with_permutation(5)) {
        prop_assume!(x.len() > 1);
        let r = build_witness(&x, DEFAULT_BOUND).unwrap();
        let expected = if !x.is_connected() {
            Branch::D
        } else if x.components()[0].cycle_len > 1 {
            Branch::C
        } else {
            Branch::F1
        };
        prop_assert_eq!(r.branch, expected);
        // Relabelling X does not change the shape of the witness.
        let s = build_witness(&x.relabel(&perm).unwrap(), DEFAULT_BOUND).unwrap();
        prop_assert!(r.a.is_isomorphic(&s.a) && r.b.is_isomorphic(&s.b) && r.y.is_isomorphic(&s.y));
        prop_assert!(verify_witness(r, DEFAULT_BOUND).is_ok());
    }
}
