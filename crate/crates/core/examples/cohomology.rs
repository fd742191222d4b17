//! Cohomology of constant sheaves on the three-point space.

use num_bigint::BigInt;

use monoscheme::lattice::ints;
use monoscheme::monoid::Ambient;
use monoscheme::scheme::{cohomology_demo, SubgroupPair};

fn main() -> monoscheme::Result<()> {
    for n in 2..=6 {
        let pair = SubgroupPair { ambient: Ambient::free(1), a_generators: vec![ints(&[n])], b_generators: None };
        println!("Z/{n}: {}", cohomology_demo(&pair)?.summary());
    }
    let klein = SubgroupPair {
        ambient: Ambient::new(0, vec![BigInt::from(2), BigInt::from(2)])?,
        a_generators: vec![],
        b_generators: None,
    };
    println!("Z/2 x Z/2: {}", cohomology_demo(&klein)?.summary());
    Ok(())
}
