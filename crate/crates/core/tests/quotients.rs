mod common;

use common::{normal_closure_element, random_element, random_triples};
use nilrand::heiscalc::{basis_change_reduce, heis_conj, heis_inv, heis_mul, MalcevTriple};
use nilrand::quotients::{
    build_finite_quotient, classify_one_relator, element_order_census, heis_quotient_order,
    identify_small_group, DescriptorKind,
};
use nilrand::randwalk::RngStream;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

fn order_key(rels: &[MalcevTriple]) -> (BigInt, BigInt, Option<BigInt>) {
    let q = heis_quotient_order(rels).unwrap();
    (q.delta, q.gamma, q.order)
}

#[test]
fn nielsen_moves_preserve_order_data() {
    let mut rng = RngStream::new(2024, 0);
    for _ in 0..1000 {
        let r = rng.random_range(2..=5);
        let len = rng.random_range(10..=50);
        let mut rels = random_triples(&mut rng, r, len);
        let before = order_key(&rels);
        for _ in 0..20 {
            let i = rng.random_range(0..r);
            match rng.random_range(0..3) {
                0 => {
                    let j = rng.random_range(0..r);
                    rels.swap(i, j);
                }
                1 => rels[i] = heis_inv(&rels[i]),
                _ => {
                    let j = (i + rng.random_range(1..r)) % r;
                    let h = random_element(&mut rng, 20);
                    rels[i] = heis_mul(&rels[i], &heis_conj(&rels[j], &h));
                }
            }
        }
        assert_eq!(order_key(&rels), before);
    }
}

#[test]
fn single_relator_gamma_is_the_center_order() {
    let mut rng = RngStream::new(7, 0);
    for _ in 0..10_000 {
        let len = rng.random_range(2..=1000);
        let t = random_triples(&mut rng, 1, len).remove(0);
        if t.is_identity() {
            continue;
        }
        let g = classify_one_relator(&t).unwrap();
        let q = heis_quotient_order(std::slice::from_ref(&t)).unwrap();
        let expected = match g.kind {
            DescriptorKind::CentralRelator => t.c.abs(),
            DescriptorKind::Generic => g.d.clone(),
        };
        assert_eq!(q.gamma, expected, "{t}");
        assert!(q.order.is_none());
    }
}

#[test]
fn classification_is_invariant_under_basis_change() {
    let mut rng = RngStream::new(8, 0);
    for _ in 0..2000 {
        let len = rng.random_range(2..=200);
        let t = random_triples(&mut rng, 1, len).remove(0);
        if t.a.is_zero() && t.b.is_zero() {
            continue;
        }
        let (d, mu) = basis_change_reduce(&t).unwrap();
        let a = classify_one_relator(&t).unwrap();
        let b = classify_one_relator(&MalcevTriple::new(0, d, mu)).unwrap();
        assert!(a.same_group(&b), "{t}");
        assert_eq!(&a.torsion_pair.0 * &a.torsion_pair.1, &a.d * &a.d);
        assert!(a.d.is_multiple_of(&a.dd) && a.mu.is_multiple_of(&a.dd));
    }
}

/// Random relator sets with finite quotients of order at most `max`.
fn finite_samples(count: usize, max: u64, seed: u64) -> Vec<Vec<MalcevTriple>> {
    let mut rng = RngStream::new(seed, 0);
    let mut out = Vec::new();
    while out.len() < count {
        let r = rng.random_range(2..=4);
        let len = rng.random_range(4..=12);
        let rels = random_triples(&mut rng, r, len);
        if let Some(n) = heis_quotient_order(&rels).unwrap().order {
            if n <= BigInt::from(max) && n > BigInt::one() {
                out.push(rels);
            }
        }
    }
    out
}

#[test]
fn finite_tables_are_groups_of_the_predicted_order() {
    let mut rng = RngStream::new(99, 1);
    let mut nonabelian = 0;
    for rels in finite_samples(200, 200, 31) {
        let t = build_finite_quotient(&rels).unwrap();
        let q = &t.meta;
        assert_eq!(BigInt::from(t.order()), &q.delta * &q.gamma);
        t.check_axioms(10_000, &mut rng).unwrap();
        for g in &rels {
            assert_eq!(t.index_of(g), t.identity(), "relator {g} survives");
        }
        let (a, b) = t.generator_images();
        assert_eq!(t.closure(&[a, b]).len(), t.order());
        let census = element_order_census(&t);
        assert_eq!(census.values().sum::<usize>(), t.order());
        assert!(census.keys().all(|o| t.order() % o == 0));
        assert_eq!(t.is_abelian(), q.gamma.is_one());
        if !q.gamma.is_one() {
            nonabelian += 1;
            let n = q.order.clone().unwrap();
            assert!(n.is_multiple_of(&(&q.d * &q.d * &q.d)));
        }
    }
    assert!(nonabelian > 0);
}

#[test]
fn canonical_reduction_is_well_defined() {
    let samples = finite_samples(50, 400, 5);
    let mut rng = RngStream::new(6, 0);
    for i in 0..1000 {
        let rels = &samples[i % samples.len()];
        let t = build_finite_quotient(rels).unwrap();
        let g = random_element(&mut rng, 40);
        let factors = rng.random_range(1..=5);
        let n = normal_closure_element(&mut rng, rels, factors);
        assert_eq!(t.canonical(&heis_mul(&g, &n)), t.canonical(&g));
        assert_eq!(t.canonical(&heis_mul(&n, &g)), t.canonical(&g));
    }
}

#[test]
fn order_eight_names() {
    let d4 = build_finite_quotient(&[MalcevTriple::new(2, 0, 0), MalcevTriple::new(0, 2, 0)]).unwrap();
    let q8 = build_finite_quotient(&[MalcevTriple::new(2, 0, 1), MalcevTriple::new(0, 2, 1)]).unwrap();
    assert_eq!(identify_small_group(&d4), "D4");
    assert_eq!(identify_small_group(&q8), "Q8");
    // Every nonabelian order-8 quotient from short random relators is one of the two.
    for rels in finite_samples(400, 8, 12) {
        let t = build_finite_quotient(&rels).unwrap();
        if t.order() == 8 && !t.is_abelian() {
            let name = identify_small_group(&t);
            assert!(name == "D4" || name == "Q8", "{name}");
        }
        if t.is_abelian() {
            let name = identify_small_group(&t);
            let product: usize = name
                .split('x')
                .map(|f| f.trim_start_matches('Z').parse::<usize>().unwrap())
                .product();
            assert_eq!(product, t.order());
        }
    }
}

#[test]
fn abelian_quotient_order_matches_cokernel() {
    let mut rng = RngStream::new(4, 0);
    for _ in 0..500 {
        let rels = random_triples(&mut rng, 3, 30);
        let q = heis_quotient_order(&rels).unwrap();
        if let Some(n) = &q.order {
            assert_eq!(n, &(&q.delta * &q.gamma));
            assert!(q.d.is_zero() || q.d.is_multiple_of(&q.gamma));
            assert!(n.to_u64().is_some());
        }
    }
}
