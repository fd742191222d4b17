//! Predicates on monoid extensions and homomorphisms: algebraic and strictly
//! algebraic extensions, local, unramified, finite, flat and étale maps, the
//! spectrum bijection for finite-index submonoids, and the étale coverings
//! of `spec F1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{kernel_lattice, IntegerMatrix};
use crate::monoid::{AffineMonoid, MonoidHom};

/// How a single element of the larger monoid relates to the smaller one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algebraicity {
    /// least `n >= 1` with `n b` in the submonoid
    Exponent(u64),
    /// some multiple lies in the submonoid, but none up to the search bound
    ExceedsBound,
    /// no multiple lies in the submonoid
    NotAlgebraic,
}

/// One entry per generator of the larger monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionWitness(pub Vec<Algebraicity>);

impl ExtensionWitness {
    pub fn is_algebraic(&self) -> bool {
        self.0.iter().all(|a| *a != Algebraicity::NotAlgebraic)
    }

    /// Exponents, if every one was found within the bound.
    pub fn exponents(&self) -> Option<Vec<u64>> {
        self.0
            .iter()
            .map(|a| match a {
                Algebraicity::Exponent(n) => Some(*n),
                _ => None,
            })
            .collect()
    }
}

fn require_submonoid(a: &AffineMonoid, b: &AffineMonoid) -> Result<()> {
    if a.ambient() != b.ambient() {
        return Err(Error::NotSubmonoid("ambient groups differ".into()));
    }
    if let Some(g) = a.generators().iter().find(|g| !b.membership(g).expect("same ambient")) {
        return Err(Error::NotSubmonoid(format!("generator {} is not in the larger monoid", a.format_element(g))));
    }
    Ok(())
}

/// Is every element of `b` algebraic over `a`? Exponents are searched up to
/// `bound`; beyond that, a generator counts as algebraic exactly when its
/// free part lies in the real cone of `a` (clearing denominators of a
/// nonnegative rational combination and then killing the torsion
/// difference gives a multiple inside `a`).
pub fn is_algebraic(a: &AffineMonoid, b: &AffineMonoid, bound: u64) -> Result<ExtensionWitness> {
    require_submonoid(a, b)?;
    let amb = a.ambient();
    let d = amb.free_rank();
    let witness = b
        .generators()
        .iter()
        .map(|y| {
            let mut multiple = amb.zero();
            for n in 1..=bound {
                multiple = amb.add(&multiple, y);
                if a.membership(&multiple).expect("same ambient") {
                    return Algebraicity::Exponent(n);
                }
            }
            if a.cone().contains(&y[..d]) {
                Algebraicity::ExceedsBound
            } else {
                Algebraicity::NotAlgebraic
            }
        })
        .collect();
    Ok(ExtensionWitness(witness))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictReport {
    pub strict: bool,
    /// largest `n` examined
    pub checked_up_to: u64,
    /// `(n, number of solutions of n x = a)` for the first failure
    pub violation: Option<(u64, BigInt)>,
}

/// `x^n = a` has at most `n` solutions in `b` for all `a` in `a` and all
/// `n`. In a cancellative monoid the solutions of `n x = a` differ by
/// `n`-torsion of the group of `b`, and for `a` deep enough inside `a` all
/// of these translates lie in `b`; so the worst case count is
/// `prod gcd(n, d_i)` over the torsion invariants `d_i` of the group of `b`.
/// A failure needs non-cyclic torsion and then already occurs at a prime
/// dividing `d_1`, so checking `n` up to `max(bound, d_t)` is exhaustive.
pub fn is_strictly_algebraic(a: &AffineMonoid, b: &AffineMonoid, bound: u64) -> Result<StrictReport> {
    let w = is_algebraic(a, b, bound)?;
    if !w.is_algebraic() {
        return Err(Error::NotSubmonoid("extension is not algebraic".into()));
    }
    let group = b.quotient_group();
    let largest = group.torsion.last().and_then(|d| d.to_u64()).unwrap_or(1);
    let top = bound.max(largest);
    for n in 1..=top {
        let count = group.torsion_solutions(&BigInt::from(n));
        if count > BigInt::from(n) {
            return Ok(StrictReport { strict: false, checked_up_to: n, violation: Some((n, count)) });
        }
    }
    Ok(StrictReport { strict: true, checked_up_to: top, violation: None })
}

/// Number of solutions of `n x = target` in a finite group `b`, by listing
/// its elements. Independent check of the torsion count.
pub fn count_solutions_finite(b: &AffineMonoid, n: u64, target: &[BigInt]) -> Result<usize> {
    if !b.is_group() || !b.quotient_group().is_finite() {
        return Err(Error::Unsupported("element listing needs a finite group".into()));
    }
    let amb = b.ambient();
    let mut elems = BTreeSet::from([amb.zero()]);
    let mut frontier = vec![amb.zero()];
    while let Some(x) = frontier.pop() {
        for g in b.generators() {
            let y = amb.add(&x, g);
            if elems.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let target = amb.normalize(target)?;
    Ok(elems.iter().filter(|x| amb.scale(&BigInt::from(n), x) == target).count())
}

/// The submonoid of the target generated by the images.
pub fn image_monoid(f: &MonoidHom) -> AffineMonoid {
    AffineMonoid::new(f.target().ambient().clone(), f.images().to_vec()).expect("images are normalized")
}

/// No non-unit generator maps to a unit; equivalently `f(m_A) ⊆ m_B`.
pub fn is_local(f: &MonoidHom) -> bool {
    f.source()
        .maximal_ideal()
        .generators
        .iter()
        .all(|&j| !f.target().is_unit(&f.images()[j]).expect("images live in the target"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnramifiedReport {
    pub unramified: bool,
    pub ideal_generated: bool,
    pub units_injective: bool,
    pub finite: bool,
    pub strictly_algebraic: bool,
    pub reasons: Vec<String>,
}

/// Kernel of `f` restricted to the unit group of the source is trivial.
fn units_injective(f: &MonoidHom) -> bool {
    let src = f.source();
    let units: Vec<usize> = src.units().generators.into_iter().collect();
    if units.is_empty() {
        return true;
    }
    let tgt = f.target().ambient();
    let mut rows: Vec<Vec<BigInt>> = units.iter().map(|&j| f.images()[j].clone()).collect();
    rows.extend(tgt.relation_rows());
    let kernel = kernel_lattice(&IntegerMatrix::from_rows(tgt.width(), &rows).transpose());
    let amb = src.ambient();
    kernel.row_vectors().iter().all(|k| {
        let mut sum = amb.zero();
        for (c, &j) in k.iter().zip(&units) {
            sum = amb.add(&sum, &amb.scale(c, src.generator(j)));
        }
        amb.is_zero(&sum)
    })
}

/// The three conditions for a local homomorphism to be unramified:
/// `f(m_A)B = m_B`, `f` injective on units, and `B` a finite strictly
/// algebraic extension of `f(A)`.
pub fn is_unramified(f: &MonoidHom, bound: u64) -> Result<UnramifiedReport> {
    if !is_local(f) {
        return Err(Error::NotLocal);
    }
    let b = f.target();
    let amb = b.ambient();
    let m_a = f.source().maximal_ideal().generators;
    let ideal_generated = b.maximal_ideal().generators.iter().all(|&h| {
        m_a.iter().any(|&g| b.membership(&amb.sub(b.generator(h), &f.images()[g])).expect("same ambient"))
    });
    let units_injective = units_injective(f);
    let image = image_monoid(f);
    let w = is_algebraic(&image, b, bound)?;
    let finite = w.is_algebraic();
    let strictly_algebraic = finite && is_strictly_algebraic(&image, b, bound)?.strict;

    let mut reasons = Vec::new();
    if !ideal_generated {
        reasons.push("φ(m_A)B ≠ m_B".to_string());
    }
    if !units_injective {
        reasons.push("φ is not injective on units".to_string());
    }
    if !finite {
        reasons.push("B is not finite over φ(A)".to_string());
    } else if !strictly_algebraic {
        reasons.push("B/φ(A) is not strictly algebraic".to_string());
    }
    Ok(UnramifiedReport {
        unramified: reasons.is_empty(),
        ideal_generated,
        units_injective,
        finite,
        strictly_algebraic,
        reasons,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteReport {
    pub finite: bool,
    /// `B` is the union of the orbits `r + f(A)` (known when every exponent
    /// was found within the bound)
    pub representatives: Option<Vec<Vec<BigInt>>>,
    pub witness: ExtensionWitness,
}

/// `B` is a finitely generated `A`-module: a finite union of orbits
/// `r + f(A)`. This holds exactly when `B` is algebraic over `f(A)`; with
/// exponents `n_j` for the generators `h_j`, the sums `sum r_j h_j` with
/// `0 <= r_j < n_j` represent all orbits.
pub fn is_finite(f: &MonoidHom, bound: u64) -> Result<FiniteReport> {
    let b = f.target();
    let image = image_monoid(f);
    let witness = is_algebraic(&image, b, bound)?;
    let finite = witness.is_algebraic();
    let representatives = if finite { witness.exponents().map(|n| orbit_representatives(b, &n)) } else { None };
    Ok(FiniteReport { finite, representatives, witness })
}

fn orbit_representatives(b: &AffineMonoid, n: &[u64]) -> Vec<Vec<BigInt>> {
    let amb = b.ambient();
    let mut reps = BTreeSet::new();
    let mut counter = vec![0u64; n.len()];
    loop {
        let mut x = amb.zero();
        for (r, g) in counter.iter().zip(b.generators()) {
            x = amb.add(&x, &amb.scale(&BigInt::from(*r), g));
        }
        reps.insert(x);
        let mut i = 0;
        loop {
            if i == n.len() {
                return reps.into_iter().collect();
            }
            counter[i] += 1;
            if counter[i] < n[i] {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// Always true here: `B` is generated over `f(A)` by its own generators.
pub fn is_finite_type(f: &MonoidHom) -> (bool, Vec<Vec<BigInt>>) {
    (true, f.target().generators().to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatReport {
    pub flat: bool,
    /// elements of `B` that are sums of at most this many generators were
    /// examined
    pub truncation_height: usize,
    pub carrier_size: usize,
}

/// Elements of `b` that are sums of at most `height` generators.
pub fn truncated_carrier(b: &AffineMonoid, height: usize) -> Vec<Vec<BigInt>> {
    let amb = b.ambient();
    let mut all = BTreeSet::from([amb.zero()]);
    let mut layer = vec![amb.zero()];
    for _ in 0..height {
        let mut next = Vec::new();
        for x in &layer {
            for g in b.generators() {
                let y = amb.add(x, g);
                if all.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        layer = next;
    }
    all.into_iter().collect()
}

/// `B` is flat over `A` when every element of `A` acts injectively on `B`;
/// checked for each generator of `A` on a truncated carrier of `B`.
pub fn is_flat(f: &MonoidHom, height: usize) -> FlatReport {
    let b = f.target();
    let amb = b.ambient();
    let carrier = truncated_carrier(b, height);
    let flat = f.images().iter().all(|y| {
        let shifted: BTreeSet<Vec<BigInt>> = carrier.iter().map(|x| amb.add(x, y)).collect();
        shifted.len() == carrier.len()
    });
    FlatReport { flat, truncation_height: height, carrier_size: carrier.len() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleReport {
    pub etale: bool,
    pub covering: bool,
    pub flat: FlatReport,
    pub unramified: UnramifiedReport,
    pub finite: FiniteReport,
    pub reasons: Vec<String>,
}

/// Flat and unramified; a covering if also finite.
pub fn check_etale(f: &MonoidHom, bound: u64, height: usize) -> Result<EtaleReport> {
    let unramified = is_unramified(f, bound)?;
    let flat = is_flat(f, height);
    let finite = is_finite(f, bound)?;
    let mut reasons = unramified.reasons.clone();
    if !flat.flat {
        reasons.push("B is not flat over A".into());
    }
    let etale = flat.flat && unramified.unramified;
    let covering = etale && finite.finite;
    if etale && !finite.finite {
        reasons.push("B is not finite over A".into());
    }
    Ok(EtaleReport { etale, covering, flat, unramified, finite, reasons })
}

pub fn is_etale(f: &MonoidHom, bound: u64, height: usize) -> Result<bool> {
    Ok(check_etale(f, bound, height)?.etale)
}

pub fn is_etale_covering(f: &MonoidHom, bound: u64, height: usize) -> Result<bool> {
    Ok(check_etale(f, bound, height)?.covering)
}

/// `f_q : A_{f^-1(q)} -> B_q` for the prime of the target with index `q`.
pub fn localize_hom(f: &MonoidHom, q: usize) -> Result<MonoidHom> {
    let p = f.spectrum_map()?[q];
    let src_prime = f.source().primes().primes()[p].clone();
    let tgt_prime = f.target().primes().primes()[q].clone();
    let src = f.source().localize(&src_prime)?;
    let tgt = f.target().localize(&tgt_prime)?;
    let amb = tgt.ambient().clone();
    let mut images = f.images().to_vec();
    images.extend(src_prime.face_generators.iter().map(|&j| amb.neg(&f.images()[j])));
    MonoidHom::new(src, tgt, images)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecBijection {
    /// `psi[i]`: index in `spec B` of `p_i ∩ B` for the prime `p_i` of `A`
    pub psi: Vec<usize>,
    /// `inverse[j]`: index in `spec A` of `{x : N x in q_j}`
    pub inverse: Vec<usize>,
    pub bijective: bool,
}

impl SpecBijection {
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.psi.iter().copied().enumerate().collect()
    }
}

/// For `b ⊆ a` with `N x in b` for every generator `x` of `a`, the map
/// `p -> p ∩ b` on spectra and its inverse `q -> {x in a : N x in q}`.
pub fn finite_index_spec_bijection(a: &AffineMonoid, b: &AffineMonoid, n: u64) -> Result<SpecBijection> {
    require_submonoid(b, a)?;
    if n == 0 {
        return Err(Error::InvalidWitness("N must be positive".into()));
    }
    let amb = a.ambient();
    let nb = BigInt::from(n);
    let multiples: Vec<Vec<BigInt>> = a.generators().iter().map(|x| amb.scale(&nb, x)).collect();
    for (x, m) in a.generators().iter().zip(&multiples) {
        if !b.membership(m)? {
            return Err(Error::InvalidWitness(format!("{n} * {} is not in the submonoid", a.format_element(x))));
        }
    }
    let spec_a = a.primes();
    let spec_b = b.primes();
    let psi = spec_a
        .primes()
        .iter()
        .map(|p| {
            let face: BTreeSet<usize> =
                (0..b.num_generators()).filter(|&j| a.in_face(p, b.generator(j))).collect();
            b.prime_index(&face).ok_or(Error::BrokenHom)
        })
        .collect::<Result<Vec<_>>>()?;
    let inverse = spec_b
        .primes()
        .iter()
        .map(|q| {
            let face: BTreeSet<usize> = (0..a.num_generators()).filter(|&i| b.in_face(q, &multiples[i])).collect();
            a.prime_index(&face).ok_or(Error::BrokenHom)
        })
        .collect::<Result<Vec<_>>>()?;
    let bijective = psi.len() == inverse.len()
        && psi.iter().enumerate().all(|(i, &j)| inverse[j] == i)
        && inverse.iter().enumerate().all(|(j, &i)| psi[i] == j);
    Ok(SpecBijection { psi, inverse, bijective })
}

/// Invariant-factor chains `d_1 | d_2 | ... | d_t` (each `>= 2`) of all
/// finite abelian groups of order at most `bound`, the trivial group first.
pub fn finite_abelian_groups(bound: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, order: u64, bound: u64, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        let last = prefix.last().copied().unwrap_or(1);
        let mut d = if prefix.is_empty() { 2 } else { last };
        while order * d <= bound {
            if d % last == 0 {
                prefix.push(d);
                extend(prefix, order * d, bound, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, bound, &mut out);
    out.sort_by_key(|g| (g.iter().product::<u64>(), g.len(), g.clone()));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringCheck {
    pub invariants: Vec<u64>,
    pub order: u64,
    pub cyclic: bool,
    pub covering: bool,
    pub reasons: Vec<String>,
    /// `(n, solutions of n x = 0)` when strict algebraicity fails
    pub violation: Option<(u64, BigInt)>,
}

/// Runs the étale-covering test on `F1 -> G` for every finite abelian group
/// of order at most `degree_bound`.
pub fn etale_coverings_f1(degree_bound: u64) -> Result<Vec<CoveringCheck>> {
    let f1 = AffineMonoid::trivial();
    finite_abelian_groups(degree_bound)
        .into_iter()
        .map(|inv| {
            let moduli: Vec<BigInt> = inv.iter().map(|&d| BigInt::from(d)).collect();
            let g = AffineMonoid::finite_group(&moduli)?;
            let f = MonoidHom::new(f1.clone(), g.clone(), Vec::new())?;
            let order = inv.iter().product::<u64>();
            let report = check_etale(&f, degree_bound.max(1), 1)?;
            let violation = is_strictly_algebraic(&image_monoid(&f), &g, degree_bound.max(1))?.violation;
            Ok(CoveringCheck {
                cyclic: inv.len() <= 1,
                order,
                invariants: inv,
                covering: report.covering,
                reasons: report.reasons,
                violation,
            })
        })
        .collect()
}

/// The smallest `N` with `N x` in `b` for every generator `x` of `a`, if
/// one exists with `N <= bound`: the lcm of the generator exponents.
pub fn finite_index_witness(b: &AffineMonoid, a: &AffineMonoid, bound: u64) -> Result<Option<u64>> {
    let w = is_algebraic(b, a, bound)?;
    let Some(exps) = w.exponents() else { return Ok(None) };
    let n = exps.iter().fold(1u64, |acc, &e| acc.lcm(&e));
    let amb = a.ambient();
    for cand in 1..=n {
        let c = BigInt::from(cand);
        if a.generators().iter().all(|x| b.membership(&amb.scale(&c, x)).expect("same ambient")) {
            return Ok(Some(cand));
        }
    }
    Ok(Some(n))
}

impl UnramifiedReport {
    pub fn summary(&self) -> String {
        if self.unramified {
            "unramified".into()
        } else {
            self.reasons.join("; ")
        }
    }
}
