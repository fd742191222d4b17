use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use monoscheme::cone::fan::gallery;
use monoscheme::lattice::{ints, sub_vec, RowLattice};
use monoscheme::monoid::{AffineMonoid, Ambient};
use monoscheme::scheme::{base_change_presentation, cohomology_demo, scheme_points, SubgroupPair};

#[test]
fn one_point_per_cone_ordered_by_faces() {
    for (name, fan) in gallery::all() {
        let pts = scheme_points(&fan).unwrap();
        assert_eq!(pts.len(), fan.cones().len(), "{name}");
        assert_eq!(pts.points.iter().collect::<BTreeSet<_>>().len(), pts.len(), "{name}");
        let cones = fan.cones();
        let expected: BTreeSet<(usize, usize)> = (0..pts.len())
            .flat_map(|i| (0..pts.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                let (tau, sigma) = (&cones[pts.points[i]], &cones[pts.points[j]]);
                i != j && sigma.faces().contains(tau)
            })
            .collect();
        let got: BTreeSet<(usize, usize)> = pts.specialization.iter().copied().collect();
        assert_eq!(got, expected, "{name}");
    }
}

fn monoid() -> impl Strategy<Value = AffineMonoid> {
    prop::collection::vec((-2i64..4, -2i64..4), 1..5).prop_map(|gens| {
        let gens: Vec<Vec<i64>> = gens.into_iter().map(|(x, y)| vec![x, y]).collect();
        let refs: Vec<&[i64]> = gens.iter().map(|g| g.as_slice()).collect();
        AffineMonoid::from_i64(2, &[], &refs).unwrap()
    })
}

proptest! {
    #[test]
    fn binomials_present_every_relation(a in monoid()) {
        let p = base_change_presentation(&a);
        let k = a.num_generators();
        prop_assert_eq!(p.variables, k);
        let mut rows = Vec::new();
        for b in &p.relations {
            prop_assert!(b.holds_in(&a));
            let lhs: Vec<BigInt> = (0..2).map(|i| (0..k).map(|j| &b.lhs[j] * &a.generator(j)[i]).sum()).collect();
            let rhs: Vec<BigInt> = (0..2).map(|i| (0..k).map(|j| &b.rhs[j] * &a.generator(j)[i]).sum()).collect();
            prop_assert_eq!(lhs, rhs);
            rows.push(sub_vec(&b.lhs, &b.rhs));
        }
        // every small relation is a combination of the listed ones
        let span = RowLattice::new(&rows, k);
        for code in 0..5usize.pow(k as u32) {
            let c: Vec<BigInt> = (0..k).map(|j| BigInt::from(((code / 5usize.pow(j as u32)) % 5) as i64 - 2)).collect();
            let image: Vec<BigInt> = (0..2).map(|i| (0..k).map(|j| &c[j] * &a.generator(j)[i]).sum()).collect();
            if image.iter().all(|x| x == &BigInt::from(0)) {
                prop_assert!(span.contains(&c));
            }
        }
    }

    #[test]
    fn cohomology_of_plane_quotients(v in prop::collection::vec(-4i64..5, 4)) {
        let det = v[0] * v[3] - v[1] * v[2];
        prop_assume!(det != 0);
        let pair = SubgroupPair {
            ambient: Ambient::free(2),
            a_generators: vec![ints(&v[..2]), ints(&v[2..])],
            b_generators: None,
        };
        let r = cohomology_demo(&pair).unwrap();
        prop_assert_eq!(&r.c_order, &BigInt::from(det).abs());
        prop_assert!(r.exact());
        prop_assert!(r.flip_is_inversion);
        let lattice = RowLattice::new(&pair.a_generators, 2);
        let two_torsion = lattice.contains(&ints(&[2, 0])) && lattice.contains(&ints(&[0, 2]));
        prop_assert_eq!(r.flip_is_identity, two_torsion);
    }
}

#[test]
fn cyclic_quotients_up_to_twelve() {
    for n in 1..=12i64 {
        let pair = SubgroupPair { ambient: Ambient::free(1), a_generators: vec![ints(&[n])], b_generators: None };
        let r = cohomology_demo(&pair).unwrap();
        assert_eq!(r.c_order, BigInt::from(n));
        assert!(r.exact() && r.flip_is_inversion, "n = {n}");
        assert_eq!(r.flip_is_identity, n <= 2);
    }
}

#[test]
fn subgroups_inside_torsion() {
    // A = 0 inside B = Z/2 x Z/2
    let pair = SubgroupPair {
        ambient: Ambient::new(0, vec![BigInt::from(2), BigInt::from(2)]).unwrap(),
        a_generators: vec![],
        b_generators: None,
    };
    let r = cohomology_demo(&pair).unwrap();
    assert_eq!(r.c_order, BigInt::from(4));
    assert!(r.exact() && r.flip_is_identity);
}
