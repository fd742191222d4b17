//! Étale maps and étale coverings of F1.

use num_bigint::BigInt;

use monoscheme::etale::{check_etale, etale_coverings_f1};
use monoscheme::lattice::ints;
use monoscheme::monoid::{AffineMonoid, MonoidHom};

fn main() -> monoscheme::Result<()> {
    let line = AffineMonoid::c_plus();
    let square = MonoidHom::new(line.clone(), line.clone(), vec![ints(&[2])])?;
    let z6 = AffineMonoid::finite_group(&[BigInt::from(6)])?;
    let torsion = AffineMonoid::from_i64(1, &[6], &[&[1, 0], &[0, 1]])?;
    let z3 = AffineMonoid::finite_group(&[BigInt::from(3)])?;
    let doubling = MonoidHom::new(z3, z6, vec![ints(&[2])])?;
    let with_torsion = MonoidHom::new(line, torsion, vec![ints(&[1, 0])])?;
    for (name, f) in [("t -> t^2", &square), ("Z/3 -> Z/6", &doubling), ("C+ -> C+ x Z/6", &with_torsion)] {
        let r = check_etale(f, 12, 8)?;
        println!("{name}: etale = {}, covering = {}, reasons = {:?}", r.etale, r.covering, r.reasons);
    }
    for c in etale_coverings_f1(12)? {
        let witness = c.violation.map(|(n, k)| format!(" ({k} solutions of {n}x = 0)")).unwrap_or_default();
        println!("F1 -> {:?}: covering = {}{witness}", c.invariants, c.covering);
    }
    Ok(())
}
