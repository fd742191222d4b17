//! Point counts and zeta factorizations of the standard toric varieties.

use num_bigint::BigInt;

use monoscheme::cone::fan::gallery;
use monoscheme::zeta::{point_count_oracle, zeta_exponents, zeta_factored, zeta_polynomial_fan};

fn main() -> monoscheme::Result<()> {
    for (name, fan) in gallery::all() {
        let n = zeta_polynomial_fan(&fan)?;
        let c = zeta_exponents(&fan)?;
        let counts: Vec<String> = [2, 3, 4, 5, 7, 8, 9]
            .iter()
            .map(|&q| point_count_oracle(&fan, &BigInt::from(q)).map(|x| x.to_string()))
            .collect::<monoscheme::Result<_>>()?;
        println!("{name:8} N(x) = {n:14} c = {:?}", c.0.iter().map(|x| x.to_string()).collect::<Vec<_>>());
        println!("         zeta(s) = {}   N(2..9) = {}", zeta_factored(&fan)?.render(), counts.join(" "));
    }
    Ok(())
}
