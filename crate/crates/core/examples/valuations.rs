//! Valuations and their extension along finite extensions.

use monoscheme::monoid::AffineMonoid;
use monoscheme::valuation::{homs_to_cplus, valuation_correspondence, valuations, FiniteExtension};

fn main() -> monoscheme::Result<()> {
    let quadric = AffineMonoid::from_i64(2, &[], &[&[1, 0], &[1, 1], &[1, 2]])?;
    let homs = homs_to_cplus(&quadric);
    println!("Hom(quadric, C+) Hilbert basis: {:?}", homs.hilbert_basis.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    println!("V(quadric): {:?}", valuations(&quadric).iter().map(|v| v.to_string()).collect::<Vec<_>>());

    let plane = AffineMonoid::from_i64(2, &[], &[&[1, 0], &[0, 1]])?;
    let extensions = [
        ("2N in N", AffineMonoid::from_i64(1, &[], &[&[2]])?, AffineMonoid::c_plus()),
        ("Z/4 torsion", AffineMonoid::from_i64(1, &[4], &[&[2, 0]])?, AffineMonoid::from_i64(1, &[4], &[&[1, 1], &[0, 2]])?),
        ("index 4 in N^2", AffineMonoid::from_i64(2, &[], &[&[4, 0], &[2, 1], &[0, 2]])?, plane),
    ];
    for (name, sub, sup) in extensions {
        let ext = FiniteExtension::new(sub, sup)?;
        let corr = valuation_correspondence(&ext)?;
        println!("{name}: B/A = {:?}, bijective = {}", ext.quotient_invariants(), corr.bijective);
        for (v, r) in &corr.pairs {
            println!("  {v} -> {} with k = {}, valuation = {}", r.w, r.k, r.is_valuation);
        }
    }
    Ok(())
}
