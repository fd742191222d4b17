//! Spectra of a monoid and a finite-index submonoid agree.

use monoscheme::etale::{finite_index_spec_bijection, finite_index_witness};
use monoscheme::monoid::AffineMonoid;

fn main() -> monoscheme::Result<()> {
    let plane = AffineMonoid::from_i64(2, &[], &[&[1, 0], &[0, 1]])?;
    let even = AffineMonoid::from_i64(2, &[], &[&[2, 0], &[1, 1], &[0, 2]])?;
    let numerical = AffineMonoid::from_i64(1, &[], &[&[2], &[3]])?;
    for (name, a, b) in [("even sum in N^2", &plane, &even), ("<2,3> in C+", &AffineMonoid::c_plus(), &numerical)] {
        let Some(n) = finite_index_witness(b, a, 12)? else {
            println!("{name}: no witness");
            continue;
        };
        let r = finite_index_spec_bijection(a, b, n)?;
        println!("{name}: N = {n}, p -> p ∩ B is {:?}, inverse {:?}, bijective = {}", r.psi, r.inverse, r.bijective);
    }
    Ok(())
}
