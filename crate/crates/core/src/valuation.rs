//! Homomorphisms to the free monoid `C+ = {1, t, t^2, ...}`, valuations
//! (minimal nontrivial ones), and extension of valuations along extensions
//! `A ⊆ B` with finite quotient `gp(B)/gp(A)`.
//!
//! A homomorphism `v : A -> C+` is stored by its exponents on the generators
//! of `A`: `v(g_j) = t^(values[j])`. Such a vector defines a homomorphism
//! exactly when it is nonnegative and vanishes on the relation lattice of the
//! generators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cone::hilbert::lattice_cone_generators;
use crate::cone::polyhedral::ConeDuality;
use crate::error::{Error, Result};
use crate::lattice::{dot, kernel_lattice, IntegerMatrix, QuotientMap};
use crate::monoid::AffineMonoid;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValuationHom {
    pub values: Vec<BigInt>,
}

impl ValuationHom {
    pub fn new(values: Vec<BigInt>) -> Self {
        ValuationHom { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        ValuationHom { values: values.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Nonnegative on generators and compatible with all relations.
    pub fn validate(&self, a: &AffineMonoid) -> Result<()> {
        if self.values.len() != a.num_generators() {
            return Err(Error::InvalidValuation(format!(
                "{} values for {} generators",
                self.values.len(),
                a.num_generators()
            )));
        }
        if let Some(j) = self.values.iter().position(|x| x.is_negative()) {
            return Err(Error::InvalidValuation(format!("negative value on generator {j}")));
        }
        if let Some(r) = a.relations().iter().find(|r| !dot(r, &self.values).is_zero()) {
            return Err(Error::InvalidValuation(format!("relation {r:?} is not respected")));
        }
        Ok(())
    }

    /// Exponent of `v(x)` for `x` in the group of `a` (extended additively).
    pub fn eval(&self, a: &AffineMonoid, x: &[BigInt]) -> Result<BigInt> {
        let c = a
            .group_coordinates(x)?
            .ok_or_else(|| Error::InvalidValuation("element is outside the group of the monoid".into()))?;
        Ok(dot(&c, &self.values))
    }

    /// `self <= other` pointwise; generators suffice since both are additive
    /// and every element is a sum of generators.
    pub fn leq(&self, other: &ValuationHom) -> bool {
        self.values.iter().zip(&other.values).all(|(x, y)| x <= y)
    }

    pub fn scale(&self, k: &BigInt) -> ValuationHom {
        ValuationHom { values: self.values.iter().map(|x| x * k).collect() }
    }
}

impl fmt::Display for ValuationHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `Hom(A, C+)` as a monoid: its Hilbert basis, listed as homomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomsToCPlus {
    /// lattice basis of the functionals on the group of `A`, written as
    /// value vectors on the generators
    pub lattice: Vec<Vec<BigInt>>,
    pub hilbert_basis: Vec<ValuationHom>,
}

pub fn homs_to_cplus(a: &AffineMonoid) -> HomsToCPlus {
    let k = a.num_generators();
    // value vectors of homomorphisms gp(A) -> Z: integer vectors orthogonal
    // to the relation lattice
    let lattice = if a.relations().is_empty() {
        IntegerMatrix::identity(k).row_vectors()
    } else {
        kernel_lattice(&IntegerMatrix::from_rows(k, a.relations())).row_vectors()
    };
    let s = lattice.len();
    // c in Z^s gives values c.W; nonnegativity is c.w_j >= 0 for each column
    let columns: Vec<Vec<BigInt>> = (0..k).map(|j| lattice.iter().map(|row| row[j].clone()).collect()).collect();
    let cone = ConeDuality::new(s, &columns);
    let w = IntegerMatrix::from_rows(k, &lattice);
    let mut hilbert_basis: Vec<ValuationHom> = lattice_cone_generators(s, cone.dual_rays(), cone.dual_lineality())
        .into_iter()
        .map(|c| ValuationHom::new(w.left_apply(&c)))
        .filter(|v| !v.is_trivial())
        .collect();
    hilbert_basis.sort();
    hilbert_basis.dedup();
    HomsToCPlus { lattice, hilbert_basis }
}

/// Minimal nontrivial homomorphisms. A minimal one is indecomposable, so it
/// lies in the Hilbert basis; there it is minimal iff it dominates no other
/// basis element.
pub fn valuations(a: &AffineMonoid) -> Vec<ValuationHom> {
    let hb = homs_to_cplus(a).hilbert_basis;
    hb.iter().filter(|v| !hb.iter().any(|u| u != *v && u.leq(v))).cloned().collect()
}

pub fn is_valuation(a: &AffineMonoid, v: &ValuationHom) -> bool {
    v.validate(a).is_ok() && valuations(a).contains(v)
}

/// `A ⊆ B` with `gp(B)/gp(A)` finite and `A = B ∩ gp(A)`.
#[derive(Clone, Debug)]
pub struct FiniteExtension {
    sub: AffineMonoid,
    sup: AffineMonoid,
    quotient: QuotientMap,
}

impl FiniteExtension {
    /// Checks that `1 -> A -> B -> F -> 1` is exact with `F` finite.
    pub fn new(sub: AffineMonoid, sup: AffineMonoid) -> Result<FiniteExtension> {
        if sub.ambient() != sup.ambient() {
            return Err(Error::NotExact("ambient groups differ".into()));
        }
        if !sub.is_submonoid_of(&sup) {
            return Err(Error::NotExact("A is not contained in B".into()));
        }
        let k = sup.num_generators();
        let mut rel: Vec<Vec<BigInt>> = sup.relations().to_vec();
        for g in sub.generators() {
            rel.push(sup.group_coordinates(g)?.expect("A lies in B"));
        }
        let quotient = QuotientMap::new(&IntegerMatrix::from_rows(k, &rel), k);
        if quotient.structure().rank > 0 {
            return Err(Error::InfiniteQuotient);
        }
        let ext = FiniteExtension { sub, sup, quotient };
        for x in ext.preimage_generators(0)? {
            if !ext.sub.membership(&x)? {
                return Err(Error::NotExact(format!(
                    "{} lies in B and in the group of A but not in A",
                    ext.sup.format_element(&x)
                )));
            }
        }
        Ok(ext)
    }

    pub fn sub(&self) -> &AffineMonoid {
        &self.sub
    }

    pub fn sup(&self) -> &AffineMonoid {
        &self.sup
    }

    /// Invariant factors of `F = gp(B)/gp(A)`.
    pub fn quotient_invariants(&self) -> &[BigInt] {
        &self.quotient.structure().torsion
    }

    pub fn quotient_order(&self) -> BigInt {
        self.quotient.structure().torsion_order()
    }

    /// Class in `F` (one residue per invariant factor).
    pub fn class(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .sup
            .group_coordinates(x)?
            .ok_or_else(|| Error::NotExact("element is outside the group of B".into()))?;
        Ok(self.quotient.classify(&c))
    }

    /// Generators of the submonoid of `B` mapping into `F_i`, the subgroup
    /// spanned by the first `i` cyclic factors. A minimal zero-sum sequence
    /// in `F/F_i` has at most `|F/F_i|` terms, which bounds the search.
    fn preimage_generators(&self, i: usize) -> Result<Vec<Vec<BigInt>>> {
        let inv = self.quotient_invariants();
        let bound: BigInt = inv[i..].iter().product();
        let bound = bound.to_usize().ok_or_else(|| Error::Unsupported("quotient is too large".into()))?;
        let amb = self.sup.ambient();
        let classes: Vec<Vec<BigInt>> =
            self.sup.generators().iter().map(|g| self.class(g)).collect::<Result<Vec<_>>>()?;
        let in_target = |c: &[BigInt]| c[i..].iter().zip(&inv[i..]).all(|(x, d)| x.mod_floor(d).is_zero());
        let mut minimal: Vec<Vec<usize>> = Vec::new();
        for total in 1..=bound {
            for n in compositions(classes.len(), total) {
                if minimal.iter().any(|m| m.iter().zip(&n).all(|(a, b)| a <= b)) {
                    continue;
                }
                let mut c = vec![BigInt::zero(); inv.len()];
                for (nj, cj) in n.iter().zip(&classes) {
                    for (x, y) in c.iter_mut().zip(cj) {
                        *x += BigInt::from(*nj) * y;
                    }
                }
                if in_target(&c) {
                    minimal.push(n);
                }
            }
        }
        Ok(minimal
            .iter()
            .map(|n| {
                let mut x = amb.zero();
                for (nj, g) in n.iter().zip(self.sup.generators()) {
                    x = amb.add(&x, &amb.scale(&BigInt::from(*nj), g));
                }
                x
            })
            .collect())
    }
}

/// All `n in N^k` with `sum n = total`.
fn compositions(k: usize, total: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(k - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One cyclic step `B_i ⊆ B_{i+1}` of the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionStep {
    /// order `l` of the cyclic quotient
    pub order: BigInt,
    /// chosen element whose class generates the quotient
    pub b0: Vec<BigInt>,
    /// `v(l b0) = t^n`
    pub n: BigInt,
    /// `k = l / gcd(l, n)`
    pub k: BigInt,
    /// `w(b0) = t^e` with `e = n / gcd(l, n)`, so that `w(l b0) = v(l b0)^k`
    pub e: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedValuation {
    /// values on the generators of `B`
    pub w: ValuationHom,
    pub k: BigInt,
    pub steps: Vec<ExtensionStep>,
    /// `w` is a homomorphism `B -> C+`
    pub is_hom: bool,
    /// `w|_A = k v` on every generator of `A`
    pub restricts: bool,
    /// `w` is minimal, i.e. lies in `V(B)`
    pub is_valuation: bool,
}

/// Extends `v` on `A` to `w` on `B` with `w|_A = v^k`. The quotient is
/// split into cyclic steps `B_i ⊆ B_{i+1}`; on each, with `b0` generating
/// the cyclic quotient of order `l` and `v(l b0) = t^n`, set `g = gcd(l, n)`,
/// `k = l/g` and `w(j b0 + a) = t^(j n/g) v(a)^k`.
pub fn extend_valuation(v: &ValuationHom, ext: &FiniteExtension) -> Result<ExtendedValuation> {
    v.validate(&ext.sub)?;
    if v.is_trivial() {
        return Err(Error::InvalidValuation("the trivial homomorphism is not a valuation".into()));
    }
    let inv = ext.quotient_invariants().to_vec();
    let amb = ext.sup.ambient().clone();
    let mut current = ext.sub.clone();
    let mut cur_v = v.clone();
    let mut total_k = BigInt::one();
    let mut steps = Vec::new();
    for (i, l) in inv.iter().enumerate() {
        let next = if i + 1 == inv.len() {
            ext.sup.clone()
        } else {
            AffineMonoid::new(amb.clone(), ext.preimage_generators(i + 1)?)?
        };
        let residue = |x: &[BigInt]| -> Result<BigInt> { Ok(ext.class(x)?[i].mod_floor(l)) };
        let b0 = find_generator(&next, l, &residue)?;
        let r0 = residue(&b0)?;
        let r0_inv = mod_inverse(&r0, l);
        let lb0 = amb.scale(l, &b0);
        let n = cur_v.eval(&current, &lb0)?;
        let g = l.gcd(&n);
        let k = l / &g;
        let e = &n / &g;
        let values = next
            .generators()
            .iter()
            .map(|h| {
                let j = (residue(h)? * &r0_inv).mod_floor(l);
                let a = amb.sub(h, &amb.scale(&j, &b0));
                Ok(&j * &e + &k * cur_v.eval(&current, &a)?)
            })
            .collect::<Result<Vec<_>>>()?;
        steps.push(ExtensionStep { order: l.clone(), b0, n, k: k.clone(), e });
        total_k *= &k;
        current = next;
        cur_v = ValuationHom::new(values);
    }
    if inv.is_empty() {
        let values =
            ext.sup.generators().iter().map(|h| v.eval(&ext.sub, h)).collect::<Result<Vec<_>>>()?;
        cur_v = ValuationHom::new(values);
    }
    let w = cur_v;
    let is_hom = w.validate(&ext.sup).is_ok();
    let restricts = ext
        .sub
        .generators()
        .iter()
        .zip(&v.values)
        .all(|(a, va)| w.eval(&ext.sup, a).map(|x| x == &total_k * va).unwrap_or(false));
    let is_valuation = is_hom && valuations(&ext.sup).contains(&w);
    Ok(ExtendedValuation { w, k: total_k, steps, is_hom, restricts, is_valuation })
}

/// An element of `m` whose residue generates `Z/l`: some sum of at most
/// `l` generators has this property when the generators' residues span.
fn find_generator(
    m: &AffineMonoid,
    l: &BigInt,
    residue: &dyn Fn(&[BigInt]) -> Result<BigInt>,
) -> Result<Vec<BigInt>> {
    let amb = m.ambient();
    let height = l.to_usize().ok_or_else(|| Error::Unsupported("quotient is too large".into()))?;
    for total in 1..=height {
        for n in compositions(m.num_generators(), total) {
            let mut x = amb.zero();
            for (nj, g) in n.iter().zip(m.generators()) {
                x = amb.add(&x, &amb.scale(&BigInt::from(*nj), g));
            }
            if residue(&x)?.gcd(l).is_one() {
                return Ok(x);
            }
        }
    }
    Err(Error::NotExact("B does not surject onto the quotient".into()))
}

fn mod_inverse(r: &BigInt, l: &BigInt) -> BigInt {
    let e = r.extended_gcd(l);
    e.x.mod_floor(l)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationCorrespondence {
    /// `(v, w)` pairs
    pub pairs: Vec<(ValuationHom, ExtendedValuation)>,
    pub target: Vec<ValuationHom>,
    pub bijective: bool,
}

/// Extends every valuation of `A` and compares the results with `V(B)`
/// computed directly.
pub fn valuation_correspondence(ext: &FiniteExtension) -> Result<ValuationCorrespondence> {
    let source = valuations(&ext.sub);
    let target = valuations(&ext.sup);
    let pairs = source
        .into_iter()
        .map(|v| Ok((v.clone(), extend_valuation(&v, ext)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut images: Vec<ValuationHom> = pairs.iter().map(|(_, e)| e.w.clone()).collect();
    images.sort();
    let injective = images.windows(2).all(|w| w[0] != w[1]);
    let mut sorted_target = target.clone();
    sorted_target.sort();
    let bijective = injective && images == sorted_target;
    Ok(ValuationCorrespondence { pairs, target, bijective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ints;

    fn m(d: usize, t: &[i64], g: &[&[i64]]) -> AffineMonoid {
        AffineMonoid::from_i64(d, t, g).unwrap()
    }

    #[test]
    fn homs_examples() {
        let h = homs_to_cplus(&AffineMonoid::c_plus());
        assert_eq!(h.hilbert_basis, vec![ValuationHom::from_i64(&[1])]);
        let z = m(1, &[], &[&[1], &[-1]]);
        assert!(homs_to_cplus(&z).hilbert_basis.is_empty());
        let orthant = m(2, &[], &[&[1, 0], &[0, 1]]);
        assert_eq!(
            homs_to_cplus(&orthant).hilbert_basis,
            vec![ValuationHom::from_i64(&[0, 1]), ValuationHom::from_i64(&[1, 0])]
        );
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuations(&AffineMonoid::c_plus()), vec![ValuationHom::from_i64(&[1])]);
        assert_eq!(valuations(&m(2, &[], &[&[1, 0], &[0, 1]])).len(), 2);
        assert!(valuations(&m(1, &[], &[&[1], &[-1]])).is_empty());
        // quadric cone: the functional x is pointwise minimal besides the two rays
        let q = m(2, &[], &[&[1, 0], &[1, 1], &[1, 2]]);
        let v = valuations(&q);
        assert_eq!(
            v,
            vec![
                ValuationHom::from_i64(&[0, 1, 2]),
                ValuationHom::from_i64(&[1, 1, 1]),
                ValuationHom::from_i64(&[2, 1, 0])
            ]
        );
        // with torsion
        let t = m(1, &[2], &[&[1, 0], &[0, 1]]);
        assert_eq!(valuations(&t), vec![ValuationHom::from_i64(&[1, 0])]);
    }

    #[test]
    fn extension_of_index_two() {
        let a = m(1, &[], &[&[2]]);
        let b = AffineMonoid::c_plus();
        let ext = FiniteExtension::new(a, b).unwrap();
        let r = extend_valuation(&ValuationHom::from_i64(&[1]), &ext).unwrap();
        assert_eq!(r.k, BigInt::from(2));
        assert_eq!(r.w, ValuationHom::from_i64(&[1]));
        assert!(r.restricts && r.is_hom && r.is_valuation);
    }

    #[test]
    fn split_extension() {
        let a = m(1, &[2], &[&[1, 0]]);
        let b = m(1, &[2], &[&[1, 0], &[0, 1]]);
        let ext = FiniteExtension::new(a, b).unwrap();
        let r = extend_valuation(&ValuationHom::from_i64(&[1]), &ext).unwrap();
        assert_eq!(r.steps[0].n, BigInt::zero());
        assert_eq!(r.k, BigInt::one());
        assert_eq!(r.w, ValuationHom::from_i64(&[1, 0]));
    }

    #[test]
    fn extension_of_order_four_with_n_two() {
        // A = {(x, y) in N^2 : x + 2y = 0 mod 4}
        let a = m(2, &[], &[&[4, 0], &[2, 1], &[0, 2]]);
        let b = m(2, &[], &[&[1, 0], &[0, 1]]);
        let ext = FiniteExtension::new(a, b).unwrap();
        assert_eq!(ext.quotient_invariants(), ints(&[4]).as_slice());
        let v = ValuationHom::from_i64(&[2, 1, 0]);
        let r = extend_valuation(&v, &ext).unwrap();
        assert_eq!(r.steps[0].n, BigInt::from(2));
        assert_eq!(r.k, BigInt::from(2));
        assert_eq!(r.w, ValuationHom::from_i64(&[1, 0]));
        assert!(r.is_valuation);
        // [1,1,1] is minimal on A but extends to [1,2], which is not minimal on N^2
        let corr = valuation_correspondence(&ext).unwrap();
        assert!(!corr.bijective);
        let (_, odd) = corr.pairs.iter().find(|(v, _)| v == &ValuationHom::from_i64(&[1, 1, 1])).unwrap();
        assert_eq!((odd.w.clone(), odd.k.clone()), (ValuationHom::from_i64(&[1, 2]), BigInt::from(4)));
        assert!(odd.restricts && !odd.is_valuation);
    }

    #[test]
    fn order_four_with_torsion() {
        // b0 = (1; 1), t = (0; 2) in Z + Z/4, a = 2 b0 + t = (2; 0)
        let a = m(1, &[4], &[&[2, 0]]);
        let b = m(1, &[4], &[&[1, 1], &[0, 2]]);
        let ext = FiniteExtension::new(a, b).unwrap();
        assert_eq!(ext.quotient_invariants(), ints(&[4]).as_slice());
        let r = extend_valuation(&ValuationHom::from_i64(&[1]), &ext).unwrap();
        assert_eq!((r.steps[0].n.clone(), r.k.clone()), (BigInt::from(2), BigInt::from(2)));
        assert_eq!(r.w, ValuationHom::from_i64(&[1, 0]));
        assert!(valuation_correspondence(&ext).unwrap().bijective);
    }

    #[test]
    fn non_exact_sequences_are_rejected() {
        // A = <2, 3> misses nothing of gp(A) ∩ B? 1 is in gp(A) and B but not A
        let a = m(1, &[], &[&[2], &[3]]);
        assert!(matches!(FiniteExtension::new(a, AffineMonoid::c_plus()), Err(Error::NotExact(_))));
        let a = m(2, &[], &[&[1, 0]]);
        let b = m(2, &[], &[&[1, 0], &[0, 1]]);
        assert!(matches!(FiniteExtension::new(a, b), Err(Error::InfiniteQuotient)));
    }

    #[test]
    fn two_step_extension() {
        // F = Z/2 x Z/2: A = 2N^2 inside N^2
        let a = m(2, &[], &[&[2, 0], &[0, 2]]);
        let b = m(2, &[], &[&[1, 0], &[0, 1]]);
        let ext = FiniteExtension::new(a, b).unwrap();
        assert_eq!(ext.quotient_invariants(), ints(&[2, 2]).as_slice());
        let corr = valuation_correspondence(&ext).unwrap();
        assert!(corr.bijective);
        for (_, e) in &corr.pairs {
            assert_eq!(e.k, BigInt::from(2));
            assert!(e.restricts);
        }
    }
}
