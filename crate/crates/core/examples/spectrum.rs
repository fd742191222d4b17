//! Prime ideals, localizations and units of a few monoids.

use monoscheme::monoid::AffineMonoid;

fn show(name: &str, a: &AffineMonoid) -> monoscheme::Result<()> {
    let spec = a.primes();
    println!("{name}: {} primes, units {:?}", spec.len(), a.units().generators);
    for (i, p) in spec.primes().iter().enumerate() {
        let local = a.localize(p)?;
        println!(
            "  p{i} = ({:?})  face dim {}  A_p generated by {} elements",
            spec.ideal_generators(i),
            p.face_dim,
            local.num_generators()
        );
    }
    println!("  order: {:?}", spec.order());
    Ok(())
}

fn main() -> monoscheme::Result<()> {
    show("C+", &AffineMonoid::c_plus())?;
    show("N^2", &AffineMonoid::from_i64(2, &[], &[&[1, 0], &[0, 1]])?)?;
    show("quadric", &AffineMonoid::from_i64(2, &[], &[&[1, 0], &[1, 1], &[1, 2]])?)?;
    show("N + Z/2", &AffineMonoid::from_i64(1, &[2], &[&[1, 0], &[0, 1]])?)?;
    Ok(())
}
