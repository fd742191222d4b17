//! Dual cones, faces and Hilbert bases.

use monoscheme::cone::fan::dual_monoid;
use monoscheme::cone::{hilbert_basis, Cone};
use monoscheme::lattice::rank;

fn main() -> monoscheme::Result<()> {
    let cones = [
        Cone::from_i64(2, &[&[1, 0], &[1, 2]])?,
        Cone::from_i64(2, &[&[1, 0], &[-1, 5]])?,
        Cone::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 2]])?,
        Cone::from_i64(2, &[&[1, 1]])?,
    ];
    for sigma in &cones {
        let dual = sigma.dual_cone();
        let hb = hilbert_basis(&dual);
        println!("{sigma}");
        println!("  dual rays {:?}, lineality {:?}", dual.rays, dual.lineality);
        println!("  Hilbert basis {:?}", hb);
        for tau in sigma.faces() {
            let f = sigma.dual_face(&tau);
            println!("  face {tau}: dual face of dimension {}", rank(&f, sigma.lattice_rank()));
        }
        println!("  primes of A_sigma: {}", dual_monoid(sigma).primes().len());
    }
    Ok(())
}
