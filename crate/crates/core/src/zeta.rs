//! Zeta polynomials of toric varieties from the face counts of their fans,
//! the exponents of the factored zeta function, and an independent
//! point-counting oracle based on the torus-orbit decomposition.

use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::cone::fan::Fan;
use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{kernel_lattice, IntegerMatrix};

/// A polynomial with integer coefficients, lowest degree first, no trailing
/// zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPolynomial::new(vec![c])
    }

    /// `(x - 1)^k`, expanded with the binomial theorem.
    pub fn x_minus_one_pow(k: usize) -> Self {
        let kb = BigInt::from(k);
        IntPolynomial::new(
            (0..=k)
                .map(|i| {
                    let c = binomial(kb.clone(), BigInt::from(i));
                    if (k - i).is_multiple_of(2) {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coefficient(i) + other.coefficient(i)).collect())
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, other: &IntPolynomial) -> IntPolynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

/// Compact rendering such as `x^2+x+1` or `x-1`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let mag = match (j, a.is_one()) {
                (0, _) => a.to_string(),
                (1, true) => "x".to_string(),
                (1, false) => format!("{a}x"),
                (_, true) => format!("x^{j}"),
                (_, false) => format!("{a}x^{j}"),
            };
            write!(f, "{sign}{mag}")?;
            first = false;
        }
        Ok(())
    }
}

/// `N(x) = sum_k f_k (x-1)^(n-k)` for face or cone counts `f`.
fn counting_polynomial(f: &[usize], n: usize) -> IntPolynomial {
    f.iter().enumerate().fold(IntPolynomial::zero(), |acc, (k, fk)| {
        &acc + &IntPolynomial::x_minus_one_pow(n - k).scale(&BigInt::from(*fk))
    })
}

/// Zeta polynomial of the affine toric variety of a single cone.
pub fn zeta_polynomial_cone(sigma: &Cone) -> IntPolynomial {
    let n = sigma.lattice_rank();
    let mut f = vec![0; n + 1];
    for face in sigma.faces() {
        f[face.dim()] += 1;
    }
    counting_polynomial(&f, n)
}

/// `N_Δ(x)` from the f-vector of a valid fan.
pub fn zeta_polynomial_fan(fan: &Fan) -> Result<IntPolynomial> {
    let f = fan.f_vector()?;
    Ok(counting_polynomial(&f.0, fan.lattice_rank()))
}

/// Exponents `c_0, ..., c_n` with `ζ(s) = s^c_0 (s-1)^c_1 ... (s-n)^c_n`,
/// from the closed formula `c_j = sum_{k=j}^n f_{n-k} (-1)^{k+j} C(k, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaExponents(pub Vec<BigInt>);

pub fn zeta_exponents(fan: &Fan) -> Result<ZetaExponents> {
    let f = fan.f_vector()?;
    let n = fan.lattice_rank();
    let c = (0..=n)
        .map(|j| {
            (j..=n).fold(BigInt::zero(), |acc, k| {
                let term = BigInt::from(f.get(n - k)) * binomial(BigInt::from(k), BigInt::from(j));
                if (k + j) % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            })
        })
        .collect();
    Ok(ZetaExponents(c))
}

/// `ζ(s)` as a list of `(root, multiplicity)` pairs with nonzero
/// multiplicity; negative multiplicities are denominator factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFactorization {
    pub factors: Vec<(usize, BigInt)>,
}

impl ZetaFactorization {
    pub fn from_exponents(c: &ZetaExponents) -> Self {
        ZetaFactorization {
            factors: c.0.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(j, e)| (j, e.clone())).collect(),
        }
    }

    /// Renders e.g. `s(s-1)^2(s-2)` or `(s-1)/s`.
    pub fn render(&self) -> String {
        let factor = |j: usize, e: &BigInt| {
            let base = if j == 0 { "s".to_string() } else { format!("(s-{j})") };
            if e.is_one() {
                base
            } else {
                format!("{base}^{e}")
            }
        };
        let num: Vec<String> =
            self.factors.iter().filter(|(_, e)| e.is_positive()).map(|(j, e)| factor(*j, e)).collect();
        let den: Vec<String> =
            self.factors.iter().filter(|(_, e)| e.is_negative()).map(|(j, e)| factor(*j, &-e)).collect();
        let num = if num.is_empty() { "1".to_string() } else { num.concat() };
        match den.len() {
            0 => num,
            1 => format!("{num}/{}", den[0]),
            _ => format!("{num}/({})", den.concat()),
        }
    }
}

impl fmt::Display for ZetaFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn zeta_factored(fan: &Fan) -> Result<ZetaFactorization> {
    Ok(ZetaFactorization::from_exponents(&zeta_exponents(fan)?))
}

/// Number of `F_q`-points counted orbit by orbit: the orbit of a cone `σ`
/// is a torus of rank `rank(σ^⊥ ∩ M)`, contributing `(q-1)` to that power.
pub fn point_count_oracle(fan: &Fan, q: &BigInt) -> Result<BigInt> {
    if *q < BigInt::from(2) {
        return Err(Error::Unsupported(format!("q = {q} must be at least 2")));
    }
    fan.validate()?;
    let n = fan.lattice_rank();
    let base: BigInt = q - 1;
    Ok(fan
        .cones()
        .iter()
        .map(|sigma| {
            let orth = kernel_lattice(&IntegerMatrix::from_rows(n, sigma.rays())).rows();
            num_traits::pow(base.clone(), orth)
        })
        .sum::<BigInt>())
}
