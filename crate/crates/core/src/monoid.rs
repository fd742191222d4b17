//! Finitely generated integral monoids inside `Z^d ⊕ Z/m_1 ⊕ ... ⊕ Z/m_t`,
//! their prime spectra, face localizations and homomorphisms.
//!
//! Elements of the ambient group are flat vectors: `d` free coordinates
//! followed by one residue per torsion modulus, normalized into `[0, m_i)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cone::polyhedral::ConeDuality;
use crate::error::{Error, Result};
use crate::lattice::{
    abelian_group_structure, dot, hnf, ints, kernel_lattice, nonzero_rows, AbelianGroupStructure, IntegerMatrix,
    RowLattice,
};

/// The group `Z^d ⊕ ⊕ Z/m_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ambient {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl Ambient {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Ambient> {
        if let Some(m) = torsion.iter().find(|m| !m.is_positive()) {
            return Err(Error::InvalidMonoid(format!("torsion modulus {m} must be positive")));
        }
        Ok(Ambient { free_rank, torsion })
    }

    pub fn free(free_rank: usize) -> Ambient {
        Ambient { free_rank, torsion: Vec::new() }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Length of an element vector.
    pub fn width(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.width()]
    }

    pub fn normalize(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.width() {
            return Err(Error::DimensionMismatch { expected: self.width(), found: x.len() });
        }
        Ok(self.reduce(x.to_vec()))
    }

    fn reduce(&self, mut x: Vec<BigInt>) -> Vec<BigInt> {
        for (xi, m) in x[self.free_rank..].iter_mut().zip(&self.torsion) {
            *xi = xi.mod_floor(m);
        }
        x
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.reduce(x.iter().zip(y).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.reduce(x.iter().zip(y).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.reduce(x.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt, x: &[BigInt]) -> Vec<BigInt> {
        self.reduce(x.iter().map(|a| k * a).collect())
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.reduce(x.to_vec()).iter().all(Zero::is_zero)
    }

    pub fn free_part<'a>(&self, x: &'a [BigInt]) -> &'a [BigInt] {
        &x[..self.free_rank]
    }

    /// Rows `m_i e_{d+i}` spanning the kernel of `Z^{d+t} -> ambient`.
    pub fn relation_rows(&self) -> Vec<Vec<BigInt>> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut r = vec![BigInt::zero(); self.width()];
                r[self.free_rank + i] = m.clone();
                r
            })
            .collect()
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        let rel = IntegerMatrix::from_rows(self.width(), &self.relation_rows());
        abelian_group_structure(&rel, self.width())
    }
}

/// A finitely generated submonoid of an ambient group. Cancellative by
/// construction. Generator order is significant: homomorphisms, prime
/// ideals and valuations refer to generators by index.
#[derive(Clone, Debug)]
pub struct AffineMonoid {
    ambient: Ambient,
    generators: Vec<Vec<BigInt>>,
    geometry: OnceLock<Geometry>,
}

#[derive(Clone, Debug)]
struct Geometry {
    cone: ConeDuality,
    faces: Vec<BTreeSet<usize>>,
    units: BTreeSet<usize>,
    weight: Vec<BigInt>,
    unit_lattice: RowLattice,
    group_lattice: RowLattice,
    relations: Vec<Vec<BigInt>>,
}

impl PartialEq for AffineMonoid {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.generators == other.generators
    }
}

impl Eq for AffineMonoid {}

impl AffineMonoid {
    pub fn new(ambient: Ambient, generators: Vec<Vec<BigInt>>) -> Result<AffineMonoid> {
        let generators = generators.iter().map(|g| ambient.normalize(g)).collect::<Result<Vec<_>>>()?;
        Ok(AffineMonoid { ambient, generators, geometry: OnceLock::new() })
    }

    /// Convenience constructor: `torsion` moduli and flat generator vectors.
    pub fn from_i64(free_rank: usize, torsion: &[i64], generators: &[&[i64]]) -> Result<AffineMonoid> {
        let ambient = Ambient::new(free_rank, ints(torsion))?;
        AffineMonoid::new(ambient, generators.iter().map(|g| ints(g)).collect())
    }

    /// The trivial monoid `{0}`, i.e. F1.
    pub fn trivial() -> AffineMonoid {
        AffineMonoid::new(Ambient::free(0), Vec::new()).expect("empty monoid is valid")
    }

    /// The free monoid on one generator.
    pub fn c_plus() -> AffineMonoid {
        AffineMonoid::from_i64(1, &[], &[&[1]]).expect("valid")
    }

    /// A finite abelian group `⊕ Z/d_i`, generated by its standard basis.
    pub fn finite_group(moduli: &[BigInt]) -> Result<AffineMonoid> {
        let ambient = Ambient::new(0, moduli.to_vec())?;
        let gens = (0..moduli.len())
            .map(|i| {
                let mut e = vec![BigInt::zero(); moduli.len()];
                e[i] = BigInt::one();
                e
            })
            .collect();
        AffineMonoid::new(ambient, gens)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn generator(&self, j: usize) -> &[BigInt] {
        &self.generators[j]
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    fn geometry(&self) -> &Geometry {
        self.geometry.get_or_init(|| {
            let d = self.ambient.free_rank;
            let free: Vec<Vec<BigInt>> = self.generators.iter().map(|g| g[..d].to_vec()).collect();
            let cone = ConeDuality::new(d, &free);
            let faces = cone.face_lattice();
            let units = cone.lineality_generators();
            let weight = cone.positive_functional();
            let width = self.ambient.width();
            let torsion_rows = self.ambient.relation_rows();

            let mut unit_rows: Vec<Vec<BigInt>> = units.iter().map(|&j| self.generators[j].clone()).collect();
            unit_rows.extend(torsion_rows.iter().cloned());
            let unit_lattice = RowLattice::new(&unit_rows, width);

            let mut all_rows = self.generators.clone();
            all_rows.extend(torsion_rows);
            let group_lattice = RowLattice::new(&all_rows, width);

            let k = self.generators.len();
            let kernel = kernel_lattice(&IntegerMatrix::from_rows(width, &all_rows).transpose());
            let projected: Vec<Vec<BigInt>> = kernel.row_vectors().iter().map(|r| r[..k].to_vec()).collect();
            let relations = nonzero_rows(&hnf(&IntegerMatrix::from_rows(k, &projected)).0).row_vectors();

            Geometry { cone, faces, units, weight, unit_lattice, group_lattice, relations }
        })
    }

    /// Real cone spanned by the free parts of the generators.
    pub fn cone(&self) -> &ConeDuality {
        &self.geometry().cone
    }

    /// A lattice basis of `{x in Z^k : sum x_j g_j = 0}`.
    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.geometry().relations
    }

    fn check(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.ambient.normalize(x)
    }

    pub fn membership(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.decompose(x)?.is_some())
    }

    /// Coefficients `c` with `x = sum c_j g_j`. Coefficients of non-unit
    /// generators are nonnegative; unit generators may carry negative
    /// coefficients, since their inverses lie in the monoid anyway.
    pub fn decompose(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let x = self.check(x)?;
        let geo = self.geometry();
        let d = self.ambient.free_rank;
        let target = dot(&geo.weight, &x[..d]);
        if target.is_negative() || !geo.cone.contains(&x[..d]) {
            return Ok(None);
        }
        let nonunit: Vec<usize> = (0..self.generators.len()).filter(|j| !geo.units.contains(j)).collect();
        let weights: Vec<BigInt> = nonunit.iter().map(|&j| dot(&geo.weight, &self.generators[j][..d])).collect();
        let mut counts = vec![BigInt::zero(); nonunit.len()];
        let mut search = Search { monoid: self, geo, nonunit: &nonunit, weights: &weights, counts: &mut counts };
        Ok(search.run(0, x, target))
    }

    /// The subgroup generated by the generators, as an abstract group.
    pub fn quotient_group(&self) -> AbelianGroupStructure {
        let k = self.generators.len();
        abelian_group_structure(&IntegerMatrix::from_rows(k, self.relations()), k)
    }

    /// Is `x` in the subgroup generated by the monoid?
    pub fn in_group(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.geometry().group_lattice.contains(&self.check(x)?))
    }

    /// Integer coefficients expressing `x` in terms of the generators, if `x`
    /// lies in the generated group.
    pub fn group_coordinates(&self, x: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let x = self.check(x)?;
        let k = self.generators.len();
        Ok(self.geometry().group_lattice.solve(&x).map(|c| c[..k].to_vec()))
    }

    pub fn units(&self) -> Units {
        let generators = self.geometry().units.clone();
        let sub = AffineMonoid::new(
            self.ambient.clone(),
            generators.iter().map(|&j| self.generators[j].clone()).collect(),
        )
        .expect("generators already normalized");
        Units { generators, group: sub.quotient_group() }
    }

    pub fn maximal_ideal(&self) -> MaximalIdeal {
        let units = &self.geometry().units;
        MaximalIdeal { generators: (0..self.generators.len()).filter(|j| !units.contains(j)).collect() }
    }

    pub fn is_group(&self) -> bool {
        self.geometry().units.len() == self.generators.len()
    }

    pub fn is_unit(&self, x: &[BigInt]) -> Result<bool> {
        let x = self.check(x)?;
        let d = self.ambient.free_rank;
        let geo = self.geometry();
        Ok(geo.cone.dual_rays().iter().all(|r| dot(r, &x[..d]).is_zero()) && self.membership(&x)?)
    }

    /// All prime ideals, generic point first and the maximal ideal last.
    pub fn primes(&self) -> Spectrum {
        let geo = self.geometry();
        let primes = geo
            .faces
            .iter()
            .map(|f| PrimeIdeal { face_generators: f.clone(), face_dim: geo.cone.face_dim(f) })
            .collect();
        Spectrum { num_generators: self.generators.len(), primes }
    }

    pub fn is_prime(&self, p: &PrimeIdeal) -> bool {
        self.geometry().faces.contains(&p.face_generators)
    }

    pub fn prime_index(&self, face: &BTreeSet<usize>) -> Option<usize> {
        self.geometry().faces.iter().position(|f| f == face)
    }

    /// Does the element lie in the face of the monoid belonging to `p`
    /// (equivalently, outside the ideal `p`)? Assumes `x` is a member.
    pub fn in_face(&self, p: &PrimeIdeal, x: &[BigInt]) -> bool {
        let d = self.ambient.free_rank;
        self.geometry().cone.in_span(&p.face_generators, &x[..d])
    }

    /// `S_p^{-1} A`: adjoin the negatives of the face generators.
    pub fn localize(&self, p: &PrimeIdeal) -> Result<AffineMonoid> {
        if !self.is_prime(p) {
            return Err(Error::NotAPrime);
        }
        let mut gens = self.generators.clone();
        gens.extend(p.face_generators.iter().map(|&j| self.ambient.neg(&self.generators[j])));
        AffineMonoid::new(self.ambient.clone(), gens)
    }

    /// The group completion `A_∅`.
    pub fn group_completion(&self) -> AffineMonoid {
        let generic = self.primes().generic().clone();
        self.localize(&generic).expect("generic prime exists")
    }

    /// Number of connected components of the complex points: the order of
    /// the torsion of the quotient group.
    pub fn component_count(&self) -> BigInt {
        self.quotient_group().torsion_order()
    }

    /// Every generator of `self` lies in `other` (same ambient).
    pub fn is_submonoid_of(&self, other: &AffineMonoid) -> bool {
        self.ambient == other.ambient
            && self.generators.iter().all(|g| other.membership(g).expect("same ambient"))
    }

    /// Equality as subsets of the ambient group.
    pub fn same_monoid(&self, other: &AffineMonoid) -> bool {
        self.is_submonoid_of(other) && other.is_submonoid_of(self)
    }
}

struct Search<'a> {
    monoid: &'a AffineMonoid,
    geo: &'a Geometry,
    nonunit: &'a [usize],
    weights: &'a [BigInt],
    counts: &'a mut Vec<BigInt>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, rest: Vec<BigInt>, budget: BigInt) -> Option<Vec<BigInt>> {
        let amb = &self.monoid.ambient;
        let d = amb.free_rank;
        if i == self.nonunit.len() {
            if !budget.is_zero() {
                return None;
            }
            let c = self.geo.unit_lattice.solve(&rest)?;
            let mut out = vec![BigInt::zero(); self.monoid.generators.len()];
            for (&j, cj) in self.geo.units.iter().zip(&c) {
                out[j] = cj.clone();
            }
            for (&j, n) in self.nonunit.iter().zip(self.counts.iter()) {
                out[j] = n.clone();
            }
            return Some(out);
        }
        if !self.geo.cone.contains(&rest[..d]) {
            return None;
        }
        let g = &self.monoid.generators[self.nonunit[i]];
        let w = &self.weights[i];
        let max = &budget / w;
        let mut n = BigInt::zero();
        let mut rest = rest;
        let mut budget = budget;
        while n <= max {
            self.counts[i] = n.clone();
            if let Some(found) = self.run(i + 1, rest.clone(), budget.clone()) {
                return Some(found);
            }
            rest = amb.sub(&rest, g);
            budget -= w;
            n += 1;
        }
        self.counts[i] = BigInt::zero();
        None
    }
}

impl fmt::Display for AffineMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| self.format_element(g)).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

impl AffineMonoid {
    /// `(a,b)` for free elements, `(a,b; r)` with residues after a semicolon.
    pub fn format_element(&self, x: &[BigInt]) -> String {
        let d = self.ambient.free_rank;
        let free: Vec<String> = x[..d].iter().map(ToString::to_string).collect();
        if self.ambient.torsion.is_empty() {
            format!("({})", free.join(","))
        } else {
            let tors: Vec<String> = x[d..].iter().map(ToString::to_string).collect();
            format!("({}; {})", free.join(","), tors.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Units {
    /// generators lying in the unit group
    pub generators: BTreeSet<usize>,
    pub group: AbelianGroupStructure,
}

/// `m_A`, the ideal generated by the non-unit generators (empty for groups).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalIdeal {
    pub generators: BTreeSet<usize>,
}

impl MaximalIdeal {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A prime ideal, stored as the generators of its complementary face.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub face_generators: BTreeSet<usize>,
    /// dimension of the face of the real cone
    pub face_dim: usize,
}

impl PrimeIdeal {
    /// Generators lying in the ideal.
    pub fn ideal_generators(&self, num_generators: usize) -> BTreeSet<usize> {
        (0..num_generators).filter(|j| !self.face_generators.contains(j)).collect()
    }

    /// `self ⊆ other` as ideals.
    pub fn is_contained_in(&self, other: &PrimeIdeal) -> bool {
        self.face_generators.is_superset(&other.face_generators)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    num_generators: usize,
    primes: Vec<PrimeIdeal>,
}

impl Spectrum {
    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The zero ideal.
    pub fn generic(&self) -> &PrimeIdeal {
        &self.primes[0]
    }

    /// The maximal ideal.
    pub fn closed(&self) -> &PrimeIdeal {
        self.primes.last().expect("spectrum is never empty")
    }

    /// Strict inclusions `(i, j)` with `p_i ⊊ p_j`.
    pub fn order(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, p) in self.primes.iter().enumerate() {
            for (j, q) in self.primes.iter().enumerate() {
                if i != j && p.is_contained_in(q) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn ideal_generators(&self, i: usize) -> BTreeSet<usize> {
        self.primes[i].ideal_generators(self.num_generators)
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidHom {
    source: AffineMonoid,
    target: AffineMonoid,
    images: Vec<Vec<BigInt>>,
}

impl MonoidHom {
    pub fn new(source: AffineMonoid, target: AffineMonoid, images: Vec<Vec<BigInt>>) -> Result<MonoidHom> {
        if images.len() != source.num_generators() {
            return Err(Error::InvalidHom(format!(
                "{} images given for {} generators",
                images.len(),
                source.num_generators()
            )));
        }
        let images = images.iter().map(|y| target.ambient.normalize(y)).collect::<Result<Vec<_>>>()?;
        for (j, y) in images.iter().enumerate() {
            if !target.membership(y)? {
                return Err(Error::InvalidHom(format!(
                    "image {} of generator {j} is not in the target",
                    target.format_element(y)
                )));
            }
        }
        for rel in source.relations() {
            let mut sum = target.ambient.zero();
            for (c, y) in rel.iter().zip(&images) {
                sum = target.ambient.add(&sum, &target.ambient.scale(c, y));
            }
            if !target.ambient.is_zero(&sum) {
                return Err(Error::InvalidHom(format!("relation {rel:?} is not respected")));
            }
        }
        Ok(MonoidHom { source, target, images })
    }

    pub fn identity(a: &AffineMonoid) -> MonoidHom {
        MonoidHom { source: a.clone(), target: a.clone(), images: a.generators.clone() }
    }

    /// Inclusion of a submonoid in the same ambient group.
    pub fn inclusion(sub: &AffineMonoid, sup: &AffineMonoid) -> Result<MonoidHom> {
        if sub.ambient != sup.ambient {
            return Err(Error::NotSubmonoid("ambient groups differ".into()));
        }
        if !sub.is_submonoid_of(sup) {
            return Err(Error::NotSubmonoid("a generator is not a member".into()));
        }
        Ok(MonoidHom { source: sub.clone(), target: sup.clone(), images: sub.generators.clone() })
    }

    pub fn source(&self) -> &AffineMonoid {
        &self.source
    }

    pub fn target(&self) -> &AffineMonoid {
        &self.target
    }

    pub fn images(&self) -> &[Vec<BigInt>] {
        &self.images
    }

    /// Image of an element of the group generated by the source.
    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .source
            .group_coordinates(x)?
            .ok_or_else(|| Error::InvalidHom("element is outside the source group".into()))?;
        Ok(self.apply_coefficients(&c))
    }

    /// `sum c_j f(g_j)`.
    pub fn apply_coefficients(&self, c: &[BigInt]) -> Vec<BigInt> {
        let amb = &self.target.ambient;
        let mut sum = amb.zero();
        for (cj, y) in c.iter().zip(&self.images) {
            sum = amb.add(&sum, &amb.scale(cj, y));
        }
        sum
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MonoidHom) -> Result<MonoidHom> {
        if self.target != next.source {
            return Err(Error::InvalidHom("composition of incompatible homomorphisms".into()));
        }
        let images = self.images.iter().map(|y| next.apply(y)).collect::<Result<Vec<_>>>()?;
        Ok(MonoidHom { source: self.source.clone(), target: next.target.clone(), images })
    }

    /// For each prime of the target (by index), the index of its preimage
    /// among the primes of the source.
    pub fn spectrum_map(&self) -> Result<Vec<usize>> {
        let target_primes = self.target.primes();
        target_primes
            .primes()
            .iter()
            .map(|q| {
                let pre: BTreeSet<usize> =
                    (0..self.images.len()).filter(|&j| self.target.in_face(q, &self.images[j])).collect();
                self.source.prime_index(&pre).ok_or(Error::BrokenHom)
            })
            .collect()
    }
}
