//! Double description for cones given by generators.
//!
//! For a finite set of generators `g_i` in `Z^d` this computes the dual cone
//! `{a : a.g_i >= 0}` as a lineality lattice plus primitive extreme rays, and
//! from it the facets and the full face lattice of the primal cone. Works for
//! cones that are neither pointed nor full-dimensional.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lattice::{
    dot, kernel_lattice, neg_vec, primitive, primitive_from_rational, rank, scale_vec, solve_rational,
    sub_vec, IntegerMatrix,
};

/// A cone `C = cone(generators)` together with its dual `C^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDuality {
    dim: usize,
    generators: Vec<Vec<BigInt>>,
    /// lattice basis of `{a : a.g = 0 for all generators}`
    dual_lineality: Vec<Vec<BigInt>>,
    /// primitive extreme rays of the dual, orthogonal to `dual_lineality`
    dual_rays: Vec<Vec<BigInt>>,
}

impl ConeDuality {
    pub fn new(dim: usize, generators: &[Vec<BigInt>]) -> Self {
        for g in generators {
            assert_eq!(g.len(), dim, "generator length must equal the ambient dimension");
        }
        let (_, rays) = double_description(dim, generators);
        let dual_lineality = kernel_lattice(&IntegerMatrix::from_rows(dim, generators)).row_vectors();
        let mut dual_rays: Vec<Vec<BigInt>> =
            rays.iter().map(|r| project_out(r, &dual_lineality, dim)).collect();
        dual_rays.sort();
        dual_rays.dedup();
        ConeDuality { dim, generators: generators.to_vec(), dual_lineality, dual_rays }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn dual_lineality(&self) -> &[Vec<BigInt>] {
        &self.dual_lineality
    }

    pub fn dual_rays(&self) -> &[Vec<BigInt>] {
        &self.dual_rays
    }

    /// Dual rays followed by plus and minus each lineality vector.
    pub fn dual_generators(&self) -> Vec<Vec<BigInt>> {
        let mut out = self.dual_rays.clone();
        for l in &self.dual_lineality {
            out.push(l.clone());
            out.push(neg_vec(l));
        }
        out
    }

    /// Is `x` in `cone(generators)`?
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.dual_lineality.iter().all(|l| dot(l, x).is_zero())
            && self.dual_rays.iter().all(|r| !dot(r, x).is_negative())
    }

    /// Is `a` nonnegative on every generator?
    pub fn dual_contains(&self, a: &[BigInt]) -> bool {
        self.generators.iter().all(|g| !dot(a, g).is_negative())
    }

    /// Is `x` in the linear span of the generators indexed by `face`?
    pub fn in_span(&self, face: &BTreeSet<usize>, x: &[BigInt]) -> bool {
        let mut vs: Vec<Vec<BigInt>> = face.iter().map(|&i| self.generators[i].clone()).collect();
        let r = rank(&vs, self.dim);
        vs.push(x.to_vec());
        rank(&vs, self.dim) == r
    }

    /// Dimension of the cone.
    pub fn cone_dim(&self) -> usize {
        rank(&self.generators, self.dim)
    }

    /// Pointed means the only linear subspace inside the cone is zero.
    pub fn is_pointed(&self) -> bool {
        rank(&self.dual_generators(), self.dim) == self.dim
    }

    /// Generators in the lineality space `C ∩ -C`.
    pub fn lineality_generators(&self) -> BTreeSet<usize> {
        (0..self.generators.len())
            .filter(|&i| self.dual_rays.iter().all(|r| dot(r, &self.generators[i]).is_zero()))
            .collect()
    }

    /// A functional vanishing on the lineality space and strictly positive on
    /// every other generator.
    pub fn positive_functional(&self) -> Vec<BigInt> {
        let mut a = vec![BigInt::zero(); self.dim];
        for r in &self.dual_rays {
            for (x, y) in a.iter_mut().zip(r) {
                *x += y;
            }
        }
        a
    }

    /// Generator sets of the facets, one per extreme dual ray.
    pub fn facets(&self) -> Vec<BTreeSet<usize>> {
        self.dual_rays
            .iter()
            .map(|r| (0..self.generators.len()).filter(|&i| dot(r, &self.generators[i]).is_zero()).collect())
            .collect()
    }

    /// Every face of the cone, as the set of generators it contains. Sorted by
    /// decreasing dimension, so the whole cone comes first and the lineality
    /// space last.
    pub fn face_lattice(&self) -> Vec<BTreeSet<usize>> {
        let facets = self.facets();
        let all: BTreeSet<usize> = (0..self.generators.len()).collect();
        let mut seen = BTreeSet::from([all.clone()]);
        let mut stack = vec![all];
        while let Some(f) = stack.pop() {
            for h in &facets {
                let g: BTreeSet<usize> = f.intersection(h).copied().collect();
                if seen.insert(g.clone()) {
                    stack.push(g);
                }
            }
        }
        let mut faces: Vec<(usize, BTreeSet<usize>)> =
            seen.into_iter().map(|f| (self.face_dim(&f), f)).collect();
        faces.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| b.1.len().cmp(&a.1.len())).then_with(|| a.1.cmp(&b.1)));
        faces.into_iter().map(|(_, f)| f).collect()
    }

    pub fn face_dim(&self, face: &BTreeSet<usize>) -> usize {
        let vs: Vec<Vec<BigInt>> = face.iter().map(|&i| self.generators[i].clone()).collect();
        rank(&vs, self.dim)
    }
}

/// Double description with lineality handling. Returns a rational basis of
/// the lineality space and the extreme rays modulo it.
fn double_description(dim: usize, constraints: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut lin: Vec<Vec<BigInt>> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    let mut processed: Vec<&[BigInt]> = Vec::new();

    for a in constraints {
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        if let Some(idx) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.swap_remove(idx);
            let mut s0 = dot(a, &l0);
            if s0.is_negative() {
                l0 = neg_vec(&l0);
                s0 = -s0;
            }
            for v in lin.iter_mut().chain(rays.iter_mut()) {
                let t = dot(a, v);
                if !t.is_zero() {
                    *v = primitive(&sub_vec(&scale_vec(&s0, v), &scale_vec(&t, &l0)));
                }
            }
            rays.push(l0);
        } else {
            let vals: Vec<BigInt> = rays.iter().map(|r| dot(a, r)).collect();
            let zero_sets: Vec<Vec<bool>> = rays
                .iter()
                .map(|r| processed.iter().map(|c| dot(c, r).is_zero()).collect())
                .collect();
            let mut next: Vec<Vec<BigInt>> =
                rays.iter().zip(&vals).filter(|(_, v)| !v.is_negative()).map(|(r, _)| r.clone()).collect();
            for p in 0..rays.len() {
                if !vals[p].is_positive() {
                    continue;
                }
                for n in 0..rays.len() {
                    if !vals[n].is_negative() {
                        continue;
                    }
                    let common: Vec<bool> = zero_sets[p].iter().zip(&zero_sets[n]).map(|(x, y)| *x && *y).collect();
                    let blocked = (0..rays.len()).any(|r| {
                        r != p && r != n && common.iter().zip(&zero_sets[r]).all(|(c, z)| !*c || *z)
                    });
                    if !blocked {
                        let v = sub_vec(&scale_vec(&vals[p], &rays[n]), &scale_vec(&vals[n], &rays[p]));
                        next.push(primitive(&v));
                    }
                }
            }
            next.sort();
            next.dedup();
            rays = next;
        }
        processed.push(a);
    }
    (lin, rays)
}

/// Representative of `r` modulo span(`lin`) that is orthogonal to `lin`,
/// scaled to a primitive integer vector.
fn project_out(r: &[BigInt], lin: &[Vec<BigInt>], dim: usize) -> Vec<BigInt> {
    if lin.is_empty() {
        return primitive(r);
    }
    let gram: Vec<Vec<BigInt>> = lin.iter().map(|a| lin.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: Vec<BigInt> = lin.iter().map(|l| dot(l, r)).collect();
    let t = solve_rational(&gram, lin.len(), &rhs).expect("gram matrix of a basis is invertible");
    let mut out: Vec<num_rational::BigRational> =
        r.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect();
    for (ti, l) in t.iter().zip(lin) {
        for (o, li) in out.iter_mut().zip(l) {
            *o -= ti * num_rational::BigRational::from_integer(li.clone());
        }
    }
    debug_assert_eq!(out.len(), dim);
    primitive_from_rational(&out)
}
