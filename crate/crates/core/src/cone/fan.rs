//! Fans: finite collections of cones closed under faces and meeting along
//! common faces. Each cone carries the monoid of lattice points of its dual,
//! and face inclusions give the gluing maps between these monoids.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use super::{hilbert_basis, Cone};
use crate::error::{Error, Result};
use crate::lattice::dot;
use crate::monoid::{AffineMonoid, Ambient, MonoidHom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    lattice_rank: usize,
    cones: Vec<Cone>,
}

/// One way in which a collection of cones fails to be a fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    MissingZeroCone,
    RankMismatch { cone: Cone },
    MissingFace { cone: Cone, face: Cone },
    BadIntersection { first: Cone, second: Cone, intersection: Cone },
}

impl fmt::Display for FanViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanViolation::MissingZeroCone => write!(f, "the zero cone is missing"),
            FanViolation::RankMismatch { cone } => {
                write!(f, "{cone} lives in a lattice of rank {}", cone.lattice_rank())
            }
            FanViolation::MissingFace { cone, face } => write!(f, "face {face} of {cone} is missing"),
            FanViolation::BadIntersection { first, second, intersection } => write!(
                f,
                "{first} ∩ {second} = {intersection} is not a face of both cones"
            ),
        }
    }
}

/// Number of cones of each dimension `0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn get(&self, j: usize) -> usize {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Fan {
    /// The cones exactly as given (deduplicated, sorted); no validation.
    pub fn new(lattice_rank: usize, cones: Vec<Cone>) -> Fan {
        let mut cones = cones;
        cones.sort_by(cone_order);
        cones.dedup();
        Fan { lattice_rank, cones }
    }

    /// The given cones together with all their faces. Also returns how many
    /// cones had to be added.
    pub fn closed_under_faces(lattice_rank: usize, cones: Vec<Cone>) -> (Fan, usize) {
        let given: BTreeSet<Cone> = cones.iter().cloned().collect();
        let mut all = given.clone();
        all.insert(Cone::zero(lattice_rank));
        for c in &given {
            all.extend(c.faces());
        }
        let added = all.len() - given.len();
        (Fan::new(lattice_rank, all.into_iter().collect()), added)
    }

    /// Builds the face closure of the cones spanned by the given ray lists.
    pub fn from_i64(lattice_rank: usize, cones: &[&[&[i64]]]) -> Result<Fan> {
        let cones = cones.iter().map(|rays| Cone::from_i64(lattice_rank, rays)).collect::<Result<Vec<_>>>()?;
        Ok(Fan::closed_under_faces(lattice_rank, cones).0)
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn index_of(&self, c: &Cone) -> Option<usize> {
        self.cones.iter().position(|x| x == c)
    }

    /// Cones that are not proper faces of other cones in the fan.
    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| !self.cones.iter().any(|d| d != *c && c.is_subcone_by_rays(d) && c.is_face_of(d)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let v = validate_fan(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidFan(v))
        }
    }

    pub fn f_vector(&self) -> Result<FVector> {
        self.validate()?;
        let mut f = vec![0; self.lattice_rank + 1];
        for c in &self.cones {
            f[c.dim()] += 1;
        }
        Ok(FVector(f))
    }

    /// For every pair `tau ≤ sigma` in the fan, the inclusion `A_sigma ⊆
    /// A_tau`, checked to be the localization of `A_sigma` at the prime
    /// belonging to `tau`.
    pub fn gluing_data(&self) -> Result<Vec<Gluing>> {
        self.validate()?;
        let monoids: Vec<AffineMonoid> = self.cones.iter().map(dual_monoid).collect();
        let mut out = Vec::new();
        for (s, sigma) in self.cones.iter().enumerate() {
            let faces = sigma.faces();
            for (t, tau) in self.cones.iter().enumerate() {
                if !faces.contains(tau) {
                    continue;
                }
                out.push(Gluing::build(t, tau, &monoids[t], s, &monoids[s])?);
            }
        }
        Ok(out)
    }
}

fn cone_order(a: &Cone, b: &Cone) -> std::cmp::Ordering {
    a.dim().cmp(&b.dim()).then_with(|| a.rays().cmp(b.rays()))
}

/// Every missing face and every pair of cones meeting badly.
pub fn validate_fan(fan: &Fan) -> Vec<FanViolation> {
    let mut out = Vec::new();
    let n = fan.lattice_rank;
    let bad_rank: Vec<&Cone> = fan.cones.iter().filter(|c| c.lattice_rank() != n).collect();
    for c in &bad_rank {
        out.push(FanViolation::RankMismatch { cone: (*c).clone() });
    }
    if !bad_rank.is_empty() {
        return out;
    }
    if !fan.cones.contains(&Cone::zero(n)) {
        out.push(FanViolation::MissingZeroCone);
    }
    let faces: Vec<Vec<Cone>> = fan.cones.iter().map(Cone::faces).collect();
    for (c, fs) in fan.cones.iter().zip(&faces) {
        for f in fs {
            if !f.is_zero() && !fan.cones.contains(f) {
                out.push(FanViolation::MissingFace { cone: c.clone(), face: f.clone() });
            }
        }
    }
    for i in 0..fan.cones.len() {
        for j in i + 1..fan.cones.len() {
            let (a, b) = (&fan.cones[i], &fan.cones[j]);
            let meet = a.intersection(b).expect("same rank");
            if !faces[i].contains(&meet) || !faces[j].contains(&meet) {
                out.push(FanViolation::BadIntersection { first: a.clone(), second: b.clone(), intersection: meet });
            }
        }
    }
    out
}

/// `A_sigma = dual(sigma) ∩ M`, generated by its Hilbert basis.
pub fn dual_monoid(sigma: &Cone) -> AffineMonoid {
    AffineMonoid::new(Ambient::free(sigma.lattice_rank()), hilbert_basis(&sigma.dual_cone()))
        .expect("Hilbert basis vectors have the lattice rank")
}

/// The prime of `A_sigma` belonging to a face `tau`: its complementary face
/// is generated by the generators vanishing on `tau`.
pub fn face_prime_generators(a_sigma: &AffineMonoid, tau: &Cone) -> BTreeSet<usize> {
    (0..a_sigma.num_generators())
        .filter(|&j| tau.rays().iter().all(|r| dot(a_sigma.generator(j), r).is_zero()))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Gluing {
    /// index of the face `tau` in the fan
    pub face: usize,
    /// index of the cone `sigma` in the fan
    pub cone: usize,
    /// `A_sigma -> A_tau`
    pub inclusion: MonoidHom,
    /// index of the prime of `A_sigma` at which `A_tau` is the localization
    pub prime: usize,
}

impl Gluing {
    fn build(t: usize, tau: &Cone, a_tau: &AffineMonoid, s: usize, a_sigma: &AffineMonoid) -> Result<Gluing> {
        let inclusion = MonoidHom::inclusion(a_sigma, a_tau)?;
        let face = face_prime_generators(a_sigma, tau);
        let prime = a_sigma.prime_index(&face).ok_or(Error::NotAPrime)?;
        let p = a_sigma.primes().primes()[prime].clone();
        let local = a_sigma.localize(&p)?;
        if !local.same_monoid(a_tau) {
            return Err(Error::InvalidMonoid(format!(
                "A_tau for {tau} is not the localization of A_sigma at the face prime"
            )));
        }
        Ok(Gluing { face: t, cone: s, inclusion, prime })
    }
}

/// Standard example fans.
pub mod gallery {
    use super::Fan;

    /// The torus `G_m^n`: only the zero cone.
    pub fn torus(n: usize) -> Fan {
        Fan::from_i64(n, &[]).expect("valid")
    }

    pub fn affine_line() -> Fan {
        Fan::from_i64(1, &[&[&[1]]]).expect("valid")
    }

    pub fn affine_plane() -> Fan {
        Fan::from_i64(2, &[&[&[1, 0], &[0, 1]]]).expect("valid")
    }

    pub fn projective_line() -> Fan {
        Fan::from_i64(1, &[&[&[1]], &[&[-1]]]).expect("valid")
    }

    pub fn projective_plane() -> Fan {
        Fan::from_i64(2, &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, -1]], &[&[-1, -1], &[1, 0]]]).expect("valid")
    }

    pub fn p1_times_p1() -> Fan {
        Fan::from_i64(
            2,
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, 0]], &[&[-1, 0], &[0, -1]], &[&[0, -1], &[1, 0]]],
        )
        .expect("valid")
    }

    /// Hirzebruch surface `F_a`: rays (1,0), (0,1), (-1,a), (0,-1).
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::from_i64(
            2,
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[-1, a]], &[&[-1, a], &[0, -1]], &[&[0, -1], &[1, 0]]],
        )
        .expect("valid")
    }

    /// The affine chart of the quadric cone: cone{(1,0),(1,2)}.
    pub fn quadric_chart() -> Fan {
        Fan::from_i64(2, &[&[&[1, 0], &[1, 2]]]).expect("valid")
    }

    /// Named gallery entries.
    pub fn all() -> Vec<(&'static str, Fan)> {
        vec![
            ("A1", affine_line()),
            ("A2", affine_plane()),
            ("P1", projective_line()),
            ("P2", projective_plane()),
            ("P1xP1", p1_times_p1()),
            ("F2", hirzebruch(2)),
            ("quadric", quadric_chart()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::gallery::*;
    use super::*;
    use crate::lattice::ints;

    #[test]
    fn gallery_fans_are_valid() {
        for (name, fan) in all() {
            assert!(validate_fan(&fan).is_empty(), "{name}");
        }
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let cones = vec![
            Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap(),
            Cone::from_i64(2, &[&[1, 0], &[1, 1]]).unwrap(),
        ];
        let (fan, _) = Fan::closed_under_faces(2, cones);
        let v = validate_fan(&fan);
        assert!(v.iter().any(|x| matches!(x,
            FanViolation::BadIntersection { intersection, .. }
                if *intersection == Cone::from_i64(2, &[&[1, 0], &[1, 1]]).unwrap())));
        assert!(matches!(fan.f_vector(), Err(Error::InvalidFan(_))));
    }

    #[test]
    fn missing_faces_are_reported() {
        let fan = Fan::new(2, vec![Cone::zero(2), Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap()]);
        assert_eq!(validate_fan(&fan).len(), 2);
        let (closed, added) = Fan::closed_under_faces(2, vec![Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap()]);
        assert_eq!(added, 3);
        assert!(validate_fan(&closed).is_empty());
    }

    #[test]
    fn f_vectors() {
        assert_eq!(projective_line().f_vector().unwrap(), FVector(vec![1, 2]));
        assert_eq!(projective_plane().f_vector().unwrap(), FVector(vec![1, 3, 3]));
        assert_eq!(affine_line().f_vector().unwrap(), FVector(vec![1, 1]));
        assert_eq!(hirzebruch(2).f_vector().unwrap(), FVector(vec![1, 4, 4]));
    }

    #[test]
    fn gluing_of_projective_line() {
        let fan = projective_line();
        let g = fan.gluing_data().unwrap();
        // three identities plus two inclusions into the torus chart
        assert_eq!(g.len(), 5);
        let zero = fan.index_of(&Cone::zero(1)).unwrap();
        let into_torus: Vec<&Gluing> = g.iter().filter(|x| x.face == zero && x.cone != zero).collect();
        assert_eq!(into_torus.len(), 2);
        for x in into_torus {
            assert!(x.inclusion.target().is_group());
        }
    }

    #[test]
    fn gluing_of_orthant_edge() {
        let fan = affine_plane();
        let sigma = fan.index_of(&Cone::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap()).unwrap();
        let tau = fan.index_of(&Cone::from_i64(2, &[&[0, 1]]).unwrap()).unwrap();
        let g = fan.gluing_data().unwrap();
        let edge = g.iter().find(|x| x.face == tau && x.cone == sigma).unwrap();
        let target = edge.inclusion.target();
        assert!(target.membership(&ints(&[-1, 0])).unwrap());
        assert!(!target.membership(&ints(&[0, -1])).unwrap());
    }

    #[test]
    fn maximal_cones_of_p2() {
        assert_eq!(projective_plane().maximal_cones().len(), 3);
    }
}
