//! Pointed modules over C+: flatness, tensor products, strong morphisms.

use monoscheme::monoid::AffineMonoid;
use monoscheme::pointed::{enumerate_modules, is_flat_bruteforce, tensor, PointedModule};

fn main() -> monoscheme::Result<()> {
    let base = AffineMonoid::c_plus();
    // C+/(t^3) and a 3-cycle with a stationary basepoint
    let truncated = PointedModule::free_truncated(1, 3, 0);
    let cycle = PointedModule::from_maps(vec![vec![0, 2, 3, 1]])?;
    for (name, f) in [("C+/(t^3)", &truncated), ("3-cycle", &cycle)] {
        println!("{name}: every generator acts injectively = {}", f.is_flat());
        for bound in [4, 5] {
            let brute = is_flat_bruteforce(f, &base, bound)?;
            println!(
                "  injections into modules of size <= {bound}: {} checked, all preserved = {}, witness = {:?}",
                brute.injections_checked,
                brute.flat,
                brute.witness.map(|w| w.collision)
            );
        }
    }
    let product = tensor(&truncated, &cycle)?;
    println!("C+/(t^3) ⊗ 3-cycle has {} elements", product.len());

    for size in 1..=4 {
        let all = enumerate_modules(&base, size);
        let flat = all.iter().filter(|m| m.is_flat()).count();
        println!("size {size}: {} modules, {flat} flat", all.len());
    }
    Ok(())
}
