use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use monoscheme::monoid::AffineMonoid;
use monoscheme::valuation::{extend_valuation, homs_to_cplus, valuations, FiniteExtension, ValuationHom};

/// Pointed monoids in `N^2`, optionally with a `Z/2` or `Z/3` summand.
fn monoid() -> impl Strategy<Value = AffineMonoid> {
    (prop::collection::vec((0i64..4, 0i64..4, 0i64..3), 1..5), 0usize..3).prop_filter_map(
        "nonzero generators",
        |(gens, t)| {
            let torsion: Vec<i64> = [vec![], vec![2], vec![3]][t].clone();
            let gens: Vec<Vec<i64>> = gens
                .into_iter()
                .filter(|&(x, y, _)| (x, y) != (0, 0))
                .map(|(x, y, r)| if torsion.is_empty() { vec![x, y] } else { vec![x, y, r % torsion[0]] })
                .collect();
            if gens.is_empty() {
                return None;
            }
            let refs: Vec<&[i64]> = gens.iter().map(|g| g.as_slice()).collect();
            AffineMonoid::from_i64(2, &torsion, &refs).ok()
        },
    )
}

fn value(v: &ValuationHom, c: &[BigInt]) -> BigInt {
    v.values.iter().zip(c).map(|(x, y)| x * y).sum()
}

/// Equal sums of generators get equal values.
fn respects_relations(a: &AffineMonoid, v: &ValuationHom) -> bool {
    let k = a.num_generators();
    let amb = a.ambient();
    let coeffs: Vec<Vec<BigInt>> =
        (0..3usize.pow(k as u32)).map(|code| (0..k).map(|i| BigInt::from((code / 3usize.pow(i as u32)) % 3)).collect()).collect();
    let sum = |c: &[BigInt]| a.generators().iter().zip(c).fold(amb.zero(), |s, (g, n)| amb.add(&s, &amb.scale(n, g)));
    let sums: Vec<Vec<BigInt>> = coeffs.iter().map(|c| sum(c)).collect();
    (0..coeffs.len()).all(|i| (0..i).all(|j| sums[i] != sums[j] || value(v, &coeffs[i]) == value(v, &coeffs[j])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn valuations_are_minimal(a in monoid()) {
        let homs = homs_to_cplus(&a);
        let vals = valuations(&a);
        for v in &vals {
            prop_assert!(!v.is_trivial());
            prop_assert!(v.values.iter().all(|x| *x >= BigInt::zero()));
            prop_assert!(respects_relations(&a, v));
            for u in &vals {
                prop_assert!(u == v || !u.leq(v), "{} ≤ {}", u, v);
            }
        }
        for h in homs.hilbert_basis.iter().filter(|h| !h.is_trivial()) {
            prop_assert!(respects_relations(&a, h));
            prop_assert!(vals.iter().any(|v| v.leq(h)), "{} dominates no valuation", h);
        }
    }

    #[test]
    fn extensions_restrict_to_powers(sup in monoid(), mults in prop::collection::vec(1i64..4, 4)) {
        let amb = sup.ambient().clone();
        let gens = sup.generators().iter().zip(mults.iter().cycle()).map(|(g, &m)| amb.scale(&BigInt::from(m), g)).collect();
        let sub = AffineMonoid::new(amb, gens).unwrap();
        let Ok(ext) = FiniteExtension::new(sub.clone(), sup.clone()) else { return Ok(()) };
        for v in valuations(&sub) {
            let r = extend_valuation(&v, &ext).unwrap();
            prop_assert!(r.is_hom && r.restricts);
            prop_assert!(respects_relations(&sup, &r.w));
            for (j, g) in sub.generators().iter().enumerate() {
                let c = sup.decompose(g).unwrap().unwrap();
                prop_assert_eq!(value(&r.w, &c), &r.k * &v.values[j]);
            }
            let order: BigInt = r.steps.iter().map(|s| s.order.clone()).product();
            prop_assert_eq!(order, ext.quotient_order());
        }
    }
}
