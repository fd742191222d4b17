//! Hilbert bases of lattice-point monoids of rational cones.
//!
//! The pointed full-dimensional case follows Gordan's lemma: every lattice
//! point of the cone is a nonnegative combination of some linearly
//! independent set of extreme rays, hence a sum of those rays and a lattice
//! point of their half-open fundamental parallelepiped. Collecting rays and
//! parallelepiped points over all such simplicial subcones gives a finite
//! generating set, which is then reduced to its irreducible elements.
//!
//! Lineality is split off first: the lattice of the lineality space is
//! completed to a basis of `Z^n`, and the pointed quotient is handled on the
//! complementary coordinates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::polyhedral::ConeDuality;
use crate::lattice::{
    dot, is_zero_vec, neg_vec, saturation, snf, solve_combination, solve_rational, sub_vec,
    unimodular_inverse, IntegerMatrix,
};

/// Generating set of `(cone(rays) + span(lineality)) ∩ Z^dim`.
///
/// Minimal when the cone is pointed. Otherwise it is plus/minus a lattice
/// basis of the lineality space followed by lifts of the Hilbert basis of the
/// pointed quotient.
pub fn lattice_cone_generators(dim: usize, rays: &[Vec<BigInt>], lineality: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let lin = if lineality.is_empty() { Vec::new() } else { saturation(lineality, dim) };
    if lin.is_empty() {
        return pointed_generators(dim, rays);
    }
    let s = lin.len();
    // Smith form of the saturated lineality basis is [I | 0]; rows of v^-1
    // give a basis of Z^dim whose first s rows span the lineality lattice.
    let (_, _, v) = snf(&IntegerMatrix::from_rows(dim, &lin));
    let w = unimodular_inverse(&v);
    let quotient = |x: &[BigInt]| -> Vec<BigInt> { v.left_apply(x)[s..].to_vec() };
    let projected: Vec<Vec<BigInt>> = rays.iter().map(|r| quotient(r)).filter(|r| !is_zero_vec(r)).collect();
    let lifted = pointed_generators(dim - s, &projected).into_iter().map(|y| {
        let mut c = vec![BigInt::zero(); s];
        c.extend(y);
        w.left_apply(&c)
    });
    let mut out = Vec::new();
    for i in 0..s {
        let l = w.row(i).to_vec();
        out.push(neg_vec(&l));
        out.push(l);
    }
    out.extend(lifted);
    out
}

/// Hilbert basis of a pointed cone (any dimension) in `Z^dim`.
fn pointed_generators(dim: usize, rays: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rays.is_empty() {
        return Vec::new();
    }
    let span = saturation(rays, dim);
    if span.len() == dim {
        return full_dimensional(dim, rays);
    }
    // restrict to the saturated lattice spanned by the cone
    let k = span.len();
    let coords: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|r| solve_combination(&span, dim, r).expect("ray lies in its own saturated span"))
        .collect();
    let basis = IntegerMatrix::from_rows(dim, &span);
    full_dimensional(k, &coords).into_iter().map(|c| basis.left_apply(&c)).collect()
}

fn full_dimensional(dim: usize, rays: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let duality = ConeDuality::new(dim, rays);
    let extreme = extreme_rays(&duality);
    let normals = duality.dual_rays().to_vec();
    let in_cone = |x: &[BigInt]| normals.iter().all(|a| !dot(a, x).is_negative());

    let mut candidates: Vec<Vec<BigInt>> = extreme.clone();
    for subset in independent_subsets(&extreme, dim) {
        candidates.extend(parallelepiped_points(&subset, dim));
    }
    candidates.retain(|c| !is_zero_vec(c));
    candidates.sort();
    candidates.dedup();

    let mut basis: Vec<Vec<BigInt>> = candidates
        .iter()
        .filter(|x| !candidates.iter().any(|y| y != *x && in_cone(&sub_vec(x, y))))
        .cloned()
        .collect();
    basis.sort();
    basis
}

/// Primitive extreme rays of a pointed cone from its duality data.
fn extreme_rays(duality: &ConeDuality) -> Vec<Vec<BigInt>> {
    let dim = duality.dim();
    let mut out: Vec<Vec<BigInt>> = duality
        .generators()
        .iter()
        .filter(|g| !is_zero_vec(g))
        .filter(|g| {
            let mut active: Vec<Vec<BigInt>> =
                duality.dual_rays().iter().filter(|r| dot(r, g).is_zero()).cloned().collect();
            active.extend(duality.dual_lineality().iter().cloned());
            crate::lattice::rank(&active, dim) + 1 == dim
        })
        .map(|g| crate::lattice::primitive(g))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn independent_subsets(rays: &[Vec<BigInt>], dim: usize) -> Vec<Vec<Vec<BigInt>>> {
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn walk(
        rays: &[Vec<BigInt>],
        dim: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<BigInt>>>,
    ) {
        if chosen.len() == dim {
            let vs: Vec<Vec<BigInt>> = chosen.iter().map(|&i| rays[i].clone()).collect();
            if crate::lattice::rank(&vs, dim) == dim {
                out.push(vs);
            }
            return;
        }
        for i in start..rays.len() {
            chosen.push(i);
            walk(rays, dim, i + 1, chosen, out);
            chosen.pop();
        }
    }
    walk(rays, dim, 0, &mut chosen, &mut out);
    out
}

/// Lattice points of `{sum t_i b_i : 0 <= t_i < 1}` for a basis `b`.
fn parallelepiped_points(basis: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let b = IntegerMatrix::from_rows(dim, basis);
    // Z^dim / rowspan(b) is isomorphic to sum Z/d_i via x -> x v
    let (s, _, v) = snf(&b);
    let v_inv = unimodular_inverse(&v);
    let moduli = s.diagonal();
    let mut out = Vec::new();
    let mut counter = vec![BigInt::zero(); dim];
    loop {
        let y = v_inv.left_apply(&counter);
        let t = solve_rational(basis, dim, &y).expect("basis spans Z^dim rationally");
        let frac: Vec<BigRational> = t.iter().map(|x| x - x.floor()).collect();
        let mut p = vec![BigRational::zero(); dim];
        for (fi, row) in frac.iter().zip(basis) {
            for (pj, bj) in p.iter_mut().zip(row) {
                *pj += fi * BigRational::from_integer(bj.clone());
            }
        }
        out.push(p.iter().map(|x| x.to_integer()).collect());
        // odometer over prod [0, d_i)
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            counter[i] += 1;
            if counter[i] < moduli[i] {
                break;
            }
            counter[i] = BigInt::zero();
            i += 1;
        }
    }
}
