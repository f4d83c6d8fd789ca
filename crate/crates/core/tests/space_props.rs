use proptest::prelude::*;

use coinfock::partitions::{Permutation, IndexSet};
use coinfock::rng::seeded;
use coinfock::space::{ComponentVector, FockSpace, FockVector, Lattice, SectorSpace, WeightedVector};

fn sector(l: usize, n: usize) -> std::sync::Arc<SectorSpace> {
    SectorSpace::canonical(Lattice::new(l).unwrap(), n).unwrap()
}

fn arb_shape() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=4, 0usize..=3, any::<u64>())
}

proptest! {
    #[test]
    fn decompose_is_an_isometry_with_left_inverse((l, n, seed) in arb_shape()) {
        let s = sector(l, n);
        let mut rng = seeded(seed);
        let a = WeightedVector::<f64>::random(&s, &mut rng);
        let b = WeightedVector::<f64>::random(&s, &mut rng);
        let (ca, cb) = (a.decompose(), b.decompose());
        prop_assert!((ca.inner_product(&cb).unwrap() - a.inner_product(&b).unwrap()).norm() < 1e-12);
        prop_assert!(ca.inconsistency() < 1e-15);
        let back = ca.recompose();
        prop_assert_eq!(back.amplitudes(), a.amplitudes());
    }

    #[test]
    fn inner_product_is_hermitian_and_positive((l, n, seed) in arb_shape()) {
        let s = sector(l, n);
        let mut rng = seeded(seed);
        let a = ComponentVector::<f64>::random(&s, &mut rng);
        let b = ComponentVector::<f64>::random(&s, &mut rng);
        let ab = a.inner_product(&b).unwrap();
        let ba = b.inner_product(&a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-13);
        prop_assert!(a.norm_sqr() > 0.0);
        prop_assert!(ab.norm() <= a.norm() * b.norm() + 1e-12);
    }

    #[test]
    fn symmetrize_is_an_orthogonal_projection((l, n, seed) in arb_shape()) {
        let s = sector(l, n);
        let mut rng = seeded(seed);
        let a = ComponentVector::<f64>::random(&s, &mut rng);
        let b = ComponentVector::<f64>::random(&s, &mut rng);
        let pa = a.symmetrize();
        prop_assert!(pa.asymmetry() < 1e-13);
        prop_assert!(pa.symmetrize().sub(&pa).unwrap().max_abs() < 1e-13);
        let lhs = pa.inner_product(&b).unwrap();
        let rhs = a.inner_product(&b.symmetrize()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn permutations_act_unitarily(
        (l, n, seed, images) in (1usize..=3, 1usize..=4, any::<u64>())
            .prop_flat_map(|(l, n, s)| (Just(l), Just(n), Just(s), Just((1..=n).collect::<Vec<_>>()).prop_shuffle()))
    ) {
        let s = sector(l, n);
        let sigma = Permutation::from_images(&IndexSet::range(n), images).unwrap();
        let mut rng = seeded(seed);
        let a = ComponentVector::<f64>::random(&s, &mut rng);
        let b = ComponentVector::<f64>::random(&s, &mut rng);
        let ua = a.permute(&sigma).unwrap();
        let ub = b.permute(&sigma).unwrap();
        prop_assert!((ua.inner_product(&ub).unwrap() - a.inner_product(&b).unwrap()).norm() < 1e-12);
        let back = ua.permute(&sigma.inverse()).unwrap();
        prop_assert!(back.sub(&a).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn fock_vectors_round_trip_through_flat_storage(seed in any::<u64>()) {
        let space = FockSpace::new(Lattice::new(2).unwrap(), 3).unwrap();
        let v = FockVector::<f64>::random_symmetric(&space, &mut seeded(seed));
        let flat = v.to_flat();
        prop_assert_eq!(flat.len(), space.dim());
        let w = FockVector::from_flat(&space, &flat).unwrap();
        prop_assert!((w.inner_product(&v).unwrap().re - v.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn component_dimensions_count_partitions_times_sites() {
    // Σ_P L^{|P|} = Σ_k S(n, k) L^k, checked against direct enumeration
    for l in 1..=3usize {
        for n in 0..=4 {
            let s = sector(l, n);
            let direct: usize = s.partitions().iter().map(|p| l.pow(p.len() as u32)).sum();
            assert_eq!(s.component_dim(), direct);
            assert_eq!(s.config_dim(), l.pow(n as u32));
        }
    }
}

#[test]
fn truncation_is_enforced() {
    let space = FockSpace::new(Lattice::new(2).unwrap(), 2).unwrap();
    assert!(space.sector(3).is_err());
    assert!(Lattice::new(0).is_err());
}
