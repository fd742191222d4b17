use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use monoscheme::cone::fan::{gallery, Fan};
use monoscheme::cone::Cone;
use monoscheme::zeta::{point_count_oracle, zeta_exponents, zeta_polynomial_fan};

/// A complete fan in the plane from primitive rays whose consecutive angles
/// are all less than a half turn.
fn complete_plane_fan() -> impl Strategy<Value = Option<Fan>> {
    prop::collection::vec((-4i64..=4, -4i64..=4), 3..8).prop_map(|vs| {
        let mut rays: Vec<(i64, i64)> = vs
            .into_iter()
            .filter(|&(x, y)| (x, y) != (0, 0))
            .map(|(x, y)| {
                let g = x.gcd(&y);
                (x / g, y / g)
            })
            .collect();
        rays.sort_by(|a, b| (a.1 as f64).atan2(a.0 as f64).partial_cmp(&(b.1 as f64).atan2(b.0 as f64)).unwrap());
        rays.dedup();
        let k = rays.len();
        if k < 3 {
            return None;
        }
        let cross = |a: (i64, i64), b: (i64, i64)| a.0 * b.1 - a.1 * b.0;
        if (0..k).any(|i| cross(rays[i], rays[(i + 1) % k]) <= 0) {
            return None;
        }
        let cones = (0..k)
            .map(|i| {
                let (a, b) = (rays[i], rays[(i + 1) % k]);
                Cone::from_i64(2, &[&[a.0, a.1], &[b.0, b.1]]).unwrap()
            })
            .collect();
        Some(Fan::closed_under_faces(2, cones).0)
    })
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_k f_{n-k} C(k, j) (-1)^{k-j}`, the coefficient of `x^j` after regrouping.
fn regrouped(f: &[usize], n: usize, j: usize) -> BigInt {
    (j..=n)
        .map(|k| {
            let sign = if (k - j).is_multiple_of(2) { 1 } else { -1 };
            BigInt::from(f[n - k]) * binomial(k, j) * sign
        })
        .sum()
}

fn check_fan(fan: &Fan) -> Result<(), TestCaseError> {
    let n = fan.lattice_rank();
    let f = fan.f_vector().unwrap().0;
    let poly = zeta_polynomial_fan(fan).unwrap();
    let c = zeta_exponents(fan).unwrap().0;
    prop_assert_eq!(c.len(), n + 1);
    prop_assert_eq!(&c[n], &BigInt::from(1));
    prop_assert_eq!(f[0], 1);
    prop_assert_eq!(poly.eval(&BigInt::from(1)), BigInt::from(f[n]));
    prop_assert_eq!(c.iter().sum::<BigInt>(), BigInt::from(f[n]));
    for j in 0..=n {
        prop_assert_eq!(&poly.coefficient(j), &c[j]);
        prop_assert_eq!(&regrouped(&f, n, j), &c[j]);
    }
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let q = BigInt::from(q);
        prop_assert_eq!(poly.eval(&q), point_count_oracle(fan, &q).unwrap());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complete_plane_fans(fan in complete_plane_fan()) {
        let Some(fan) = fan else { return Ok(()) };
        check_fan(&fan)?;
        // a complete plane fan with k rays has x^2 + (k - 2) x + 1 points
        let k = fan.f_vector().unwrap().0[1] as i64;
        let poly = zeta_polynomial_fan(&fan).unwrap();
        for x in 0..6i64 {
            prop_assert_eq!(poly.eval(&BigInt::from(x)), BigInt::from(x * x + (k - 2) * x + 1));
        }
    }
}

#[test]
fn gallery_fans() {
    for (name, fan) in gallery::all() {
        check_fan(&fan).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
