//! Rational polyhedral cones, their faces and duals, Hilbert bases of
//! dual-cone monoids, and fans.

pub mod fan;
pub mod hilbert;
pub mod polyhedral;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{dot, ints, is_zero_vec, neg_vec, primitive, rank};
use polyhedral::ConeDuality;

/// A proper (line-free) rational polyhedral cone in `N = Z^n`, stored by its
/// primitive extreme rays in sorted order. Two cones are equal exactly when
/// their ray sets are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cone {
    lattice_rank: usize,
    rays: Vec<Vec<BigInt>>,
}

impl Cone {
    /// Normalizes the given generators to primitive extreme rays. Zero vectors
    /// are ignored; redundant generators are dropped.
    pub fn new(lattice_rank: usize, generators: Vec<Vec<BigInt>>) -> Result<Cone> {
        for g in &generators {
            if g.len() != lattice_rank {
                return Err(Error::DimensionMismatch { expected: lattice_rank, found: g.len() });
            }
        }
        let mut gens: Vec<Vec<BigInt>> =
            generators.iter().filter(|g| !is_zero_vec(g)).map(|g| primitive(g)).collect();
        gens.sort();
        gens.dedup();
        let duality = ConeDuality::new(lattice_rank, &gens);
        if !duality.is_pointed() {
            return Err(Error::NotProper);
        }
        let rays = gens
            .into_iter()
            .filter(|g| {
                let mut active: Vec<Vec<BigInt>> =
                    duality.dual_rays().iter().filter(|r| dot(r, g).is_zero()).cloned().collect();
                active.extend(duality.dual_lineality().iter().cloned());
                rank(&active, lattice_rank) + 1 == lattice_rank
            })
            .collect();
        Ok(Cone { lattice_rank, rays })
    }

    pub fn from_i64(lattice_rank: usize, rays: &[&[i64]]) -> Result<Cone> {
        Cone::new(lattice_rank, rays.iter().map(|r| ints(r)).collect())
    }

    pub fn zero(lattice_rank: usize) -> Cone {
        Cone { lattice_rank, rays: Vec::new() }
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        rank(&self.rays, self.lattice_rank)
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn duality(&self) -> ConeDuality {
        ConeDuality::new(self.lattice_rank, &self.rays)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.duality().contains(x)
    }

    /// All faces, from the zero cone up to the cone itself, sorted by
    /// dimension and then by rays.
    pub fn faces(&self) -> Vec<Cone> {
        let duality = self.duality();
        let mut faces: Vec<Cone> = duality
            .face_lattice()
            .into_iter()
            .map(|f| Cone { lattice_rank: self.lattice_rank, rays: f.iter().map(|&i| self.rays[i].clone()).collect() })
            .collect();
        faces.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.rays.cmp(&b.rays)));
        faces
    }

    /// Is `self` a face of `other`?
    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.faces().contains(self)
    }

    /// Rays of `self` are a subset of rays of `other`.
    pub fn is_subcone_by_rays(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.rays.contains(r))
    }

    /// `self ∩ other` as a cone.
    pub fn intersection(&self, other: &Cone) -> Result<Cone> {
        if self.lattice_rank != other.lattice_rank {
            return Err(Error::DimensionMismatch { expected: self.lattice_rank, found: other.lattice_rank });
        }
        let mut inequalities = self.duality().dual_generators();
        inequalities.extend(other.duality().dual_generators());
        let d = ConeDuality::new(self.lattice_rank, &inequalities);
        Cone::new(self.lattice_rank, d.dual_generators())
    }

    /// The dual cone in `M = Hom(N, Z)`.
    pub fn dual_cone(&self) -> DualCone {
        let duality = self.duality();
        DualCone {
            lattice_rank: self.lattice_rank,
            inequalities: self.rays.clone(),
            rays: duality.dual_rays().to_vec(),
            lineality: duality.dual_lineality().to_vec(),
        }
    }

    /// The face of the dual cone orthogonal to the face `tau` of `self`,
    /// described by the dual-cone generators vanishing on `tau`.
    pub fn dual_face(&self, tau: &Cone) -> Vec<Vec<BigInt>> {
        self.dual_cone()
            .generators()
            .into_iter()
            .filter(|a| tau.rays.iter().all(|r| dot(a, r).is_zero()))
            .collect()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_vec(r))?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn fmt_vec(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Dual cone `{a in M_R : a(x) >= 0 for x in the cone}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualCone {
    pub lattice_rank: usize,
    /// inequality normals: the rays of the primal cone
    pub inequalities: Vec<Vec<BigInt>>,
    /// primitive extreme rays of the pointed part
    pub rays: Vec<Vec<BigInt>>,
    /// lattice basis of the lineality space
    pub lineality: Vec<Vec<BigInt>>,
}

impl DualCone {
    /// Rays followed by plus and minus each lineality vector.
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(neg_vec(l));
        }
        out
    }

    pub fn contains(&self, a: &[BigInt]) -> bool {
        self.inequalities.iter().all(|r| !dot(a, r).is_negative())
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// The cone generated by the dual, as a set of generators for the
    /// double dual computation.
    pub fn dual_of_dual(&self) -> Result<Cone> {
        let d = ConeDuality::new(self.lattice_rank, &self.generators());
        Cone::new(self.lattice_rank, d.dual_generators())
    }

    pub fn faces_as_generator_sets(&self) -> Vec<BTreeSet<usize>> {
        ConeDuality::new(self.lattice_rank, &self.generators()).face_lattice()
    }
}

/// Generators of the monoid `A = dual ∩ M`: the Hilbert basis when the dual is
/// pointed; otherwise plus/minus a basis of the lineality lattice together
/// with lifts of the Hilbert basis of the pointed quotient.
pub fn hilbert_basis(dual: &DualCone) -> Vec<Vec<BigInt>> {
    hilbert::lattice_cone_generators(dual.lattice_rank, &dual.rays, &dual.lineality)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[&[i64]]) -> Vec<Vec<BigInt>> {
        x.iter().map(|r| ints(r)).collect()
    }

    #[test]
    fn construction_normalizes() {
        let c = Cone::from_i64(2, &[&[2, 0], &[0, 3], &[1, 1]]).unwrap();
        assert_eq!(c.rays(), v(&[&[0, 1], &[1, 0]]).as_slice());
        assert!(matches!(Cone::from_i64(1, &[&[1], &[-1]]), Err(Error::NotProper)));
        assert!(matches!(Cone::from_i64(2, &[&[1, 0, 0]]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dual_examples() {
        let orthant = Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(orthant.dual_cone().rays, v(&[&[0, 1], &[1, 0]]));

        let zero = Cone::zero(2);
        let d = zero.dual_cone();
        let mut g = d.generators();
        g.sort();
        assert_eq!(g, v(&[&[-1, 0], &[0, -1], &[0, 1], &[1, 0]]));

        let quadric = Cone::from_i64(2, &[&[1, 0], &[1, 2]]).unwrap();
        assert_eq!(quadric.dual_cone().rays, v(&[&[0, 1], &[2, -1]]));
        assert_eq!(quadric.dual_cone().dual_of_dual().unwrap(), quadric);
    }

    #[test]
    fn face_examples() {
        let ray = Cone::from_i64(1, &[&[1]]).unwrap();
        assert_eq!(ray.faces(), vec![Cone::zero(1), ray.clone()]);
        let orthant = Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(orthant.faces().len(), 4);
        let quadric = Cone::from_i64(2, &[&[1, 0], &[1, 2]]).unwrap();
        let faces = quadric.faces();
        assert_eq!(faces.len(), 4);
        assert_eq!(faces.iter().map(Cone::dim).collect::<Vec<_>>(), vec![0, 1, 1, 2]);
        assert_eq!(Cone::zero(3).faces(), vec![Cone::zero(3)]);
    }

    #[test]
    fn hilbert_examples() {
        let orthant = Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(hilbert_basis(&orthant.dual_cone()), v(&[&[0, 1], &[1, 0]]));
        let quadric = Cone::from_i64(2, &[&[1, 0], &[1, 2]]).unwrap();
        assert_eq!(hilbert_basis(&quadric.dual_cone()), v(&[&[0, 1], &[1, 0], &[2, -1]]));
        let ray = Cone::from_i64(1, &[&[1]]).unwrap();
        assert_eq!(hilbert_basis(&ray.dual_cone()), v(&[&[1]]));
    }

    #[test]
    fn intersection_of_overlapping_cones() {
        let orthant = Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        let thin = Cone::from_i64(2, &[&[1, 0], &[1, 1]]).unwrap();
        assert_eq!(orthant.intersection(&thin).unwrap(), thin);
        assert!(!thin.is_face_of(&orthant));
        let left = Cone::from_i64(2, &[&[0, 1], &[-1, 0]]).unwrap();
        assert_eq!(orthant.intersection(&left).unwrap(), Cone::from_i64(2, &[&[0, 1]]).unwrap());
    }
}
