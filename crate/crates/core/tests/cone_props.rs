use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use monoscheme::cone::fan::{dual_monoid, gallery};
use monoscheme::cone::{hilbert_basis, Cone};
use monoscheme::lattice::{dot, rank, sub_vec};
use monoscheme::monoid::{AffineMonoid, Ambient};

fn cone(dim: usize, max_rays: usize) -> impl Strategy<Value = Option<Cone>> {
    prop::collection::vec(prop::collection::vec(-2i64..=3, dim), 1..=max_rays).prop_map(move |rays| {
        let refs: Vec<&[i64]> = rays.iter().map(|r| r.as_slice()).collect();
        Cone::from_i64(dim, &refs).ok()
    })
}

fn full_cone(dim: usize, max_rays: usize) -> impl Strategy<Value = Cone> {
    cone(dim, max_rays).prop_filter("full-dimensional pointed cone", move |c| c.as_ref().is_some_and(|c| c.dim() == dim)).prop_map(Option::unwrap)
}

/// Every lattice point `y` of the dual cone with `l(y) <= bound`, where `l`
/// is the sum of the rays of the (full-dimensional) primal cone.
fn small_members(sigma: &Cone, bound: &BigInt) -> Vec<Vec<BigInt>> {
    let n = sigma.lattice_rank();
    let dual = sigma.dual_cone();
    let ell: Vec<BigInt> = (0..n).map(|i| sigma.rays().iter().map(|r| r[i].clone()).sum()).collect();
    // the polytope {y in dual : l(y) <= bound} is the hull of 0 and the
    // rays scaled to l = bound; bound every coordinate by those vertices
    let mut box_size = 0i64;
    for r in &dual.rays {
        let lr = dot(r, &ell);
        for x in r {
            let c = (x.abs() * bound / &lr).to_i64().unwrap() + 1;
            box_size = box_size.max(c);
        }
    }
    let side = (2 * box_size + 1) as usize;
    let mut out = Vec::new();
    for code in 0..side.pow(n as u32) {
        let y: Vec<BigInt> =
            (0..n).map(|i| BigInt::from(((code / side.pow(i as u32)) % side) as i64 - box_size)).collect();
        if dual.contains(&y) && dot(&y, &ell) <= *bound {
            out.push(y);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_dual(c in cone(3, 4)) {
        let Some(sigma) = c else { return Ok(()) };
        prop_assert_eq!(sigma.dual_cone().dual_of_dual().unwrap(), sigma);
    }

    #[test]
    fn dual_faces_have_complementary_dimension(c in cone(3, 4)) {
        let Some(sigma) = c else { return Ok(()) };
        let faces = sigma.faces();
        prop_assert_eq!(faces.len(), sigma.dual_cone().faces_as_generator_sets().len());
        prop_assert_eq!(faces.len(), dual_monoid(&sigma).primes().len());
        for tau in &faces {
            prop_assert_eq!(rank(&sigma.dual_face(tau), 3), 3 - tau.dim());
        }
    }

    #[test]
    fn hilbert_basis_is_irreducible_and_generating(sigma in full_cone(3, 4)) {
        let hb = hilbert_basis(&sigma.dual_cone());
        let n = sigma.lattice_rank();
        let ell: Vec<BigInt> = (0..n).map(|i| sigma.rays().iter().map(|r| r[i].clone()).sum()).collect();
        let top = hb.iter().map(|h| dot(h, &ell)).max().unwrap();
        let members = small_members(&sigma, &top);
        let dual = sigma.dual_cone();
        for h in &hb {
            prop_assert!(dual.contains(h));
            for y in &members {
                let rest = sub_vec(h, y);
                let splits = !y.iter().all(Zero::is_zero) && !rest.iter().all(Zero::is_zero) && dual.contains(&rest);
                prop_assert!(!splits, "{:?} = {:?} + {:?}", h, y, rest);
            }
        }
        let monoid = AffineMonoid::new(Ambient::free(n), hb.clone()).unwrap();
        for y in &members {
            prop_assert!(monoid.membership(y).unwrap());
        }
    }
}

#[test]
fn gluing_inclusions_compose() {
    for (name, fan) in gallery::all() {
        let glue = fan.gluing_data().unwrap();
        let find = |t: usize, s: usize| glue.iter().find(|g| g.face == t && g.cone == s).unwrap();
        for g in &glue {
            for h in glue.iter().filter(|h| h.cone == g.face) {
                // h.face ≤ g.face ≤ g.cone
                let direct = find(h.face, g.cone);
                let composite = g.inclusion.then(&h.inclusion).unwrap();
                assert_eq!(composite.images(), direct.inclusion.images(), "{name}");
                let sm = composite.spectrum_map().unwrap();
                assert_eq!(sm, direct.inclusion.spectrum_map().unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn quadric_dual_basis() {
    let sigma = Cone::from_i64(2, &[&[1, 0], &[1, 2]]).unwrap();
    let mut hb = hilbert_basis(&sigma.dual_cone());
    hb.sort();
    let expected: Vec<Vec<BigInt>> = [[0, 1], [1, 0], [2, -1]].iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    assert_eq!(hb, expected);
}
