//! Binomial presentations of Z[A].

use monoscheme::monoid::AffineMonoid;
use monoscheme::scheme::base_change_presentation;

fn main() -> monoscheme::Result<()> {
    let monoids = [
        ("quadric", AffineMonoid::from_i64(2, &[], &[&[1, 0], &[1, 1], &[1, 2]])?),
        ("<2,3>", AffineMonoid::from_i64(1, &[], &[&[2], &[3]])?),
        ("N + Z/3", AffineMonoid::from_i64(1, &[3], &[&[1, 0], &[0, 1]])?),
    ];
    for (name, a) in monoids {
        println!("{name}:\n{}", base_change_presentation(&a));
    }
    Ok(())
}
