//! Gluing affine charts of a fan into a point set, presenting `Z[A]` by
//! binomials, and the three-point space whose cohomology sequence is not
//! natural over the field with one element.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;

use crate::cone::fan::{dual_monoid, Fan};
use crate::error::{Error, Result};
use crate::lattice::{hnf, IntegerMatrix, QuotientMap, RowLattice};
use crate::monoid::{AffineMonoid, Ambient, PrimeIdeal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    /// index of the cone in the fan
    pub cone: usize,
    pub primes: Vec<PrimeIdeal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemePoints {
    pub charts: Vec<Chart>,
    /// for every chart and every prime of it, the global point it lands on
    pub identification: Vec<Vec<usize>>,
    /// global point `i` is the orbit point of cone `points[i]`
    pub points: Vec<usize>,
    /// `(i, j)`: point `j` is a proper specialization of point `i`
    pub specialization: Vec<(usize, usize)>,
}

impl SchemePoints {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Glues the spectra of the charts `A_σ = σ^∨ ∩ M` along the localizations
/// `A_σ -> A_τ` for faces `τ ≤ σ`. Each class of identified primes is named
/// by the unique cone whose chart contributes its closed point.
pub fn scheme_points(fan: &Fan) -> Result<SchemePoints> {
    let gluings = fan.gluing_data()?;
    let cones = fan.cones();
    let monoids: Vec<AffineMonoid> = cones.iter().map(dual_monoid).collect();
    let charts: Vec<Chart> = monoids
        .iter()
        .enumerate()
        .map(|(i, a)| Chart { cone: i, primes: a.primes().primes().to_vec() })
        .collect();
    let mut offset = Vec::with_capacity(charts.len());
    let mut total = 0;
    for c in &charts {
        offset.push(total);
        total += c.primes.len();
    }
    let mut uf = UnionFind::<usize>::new(total);
    for g in &gluings {
        for (q, p) in g.inclusion.spectrum_map()?.into_iter().enumerate() {
            uf.union(offset[g.face] + q, offset[g.cone] + p);
        }
    }
    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut points = Vec::new();
    for (i, c) in charts.iter().enumerate() {
        let root = uf.find(offset[i] + c.primes.len() - 1);
        if class_of_root.insert(root, points.len()).is_some() {
            return Err(Error::Unsupported(format!("closed points of two charts are glued together at cone {i}")));
        }
        points.push(i);
    }
    let identification = charts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            (0..c.primes.len())
                .map(|p| {
                    class_of_root
                        .get(&uf.find(offset[i] + p))
                        .copied()
                        .ok_or_else(|| Error::Unsupported(format!("prime {p} of chart {i} names no cone")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut order = BTreeSet::new();
    for (i, a) in monoids.iter().enumerate() {
        for (p, q) in a.primes().order() {
            order.insert((identification[i][p], identification[i][q]));
        }
    }
    Ok(SchemePoints { charts, identification, points, specialization: order.into_iter().collect() })
}

/// `x^lhs = x^rhs` with exponent vectors over the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    pub lhs: Vec<BigInt>,
    pub rhs: Vec<BigInt>,
}

impl Binomial {
    fn from_relation(u: &[BigInt]) -> Binomial {
        let flip = u.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
        let u: Vec<BigInt> = if flip { u.iter().map(|x| -x).collect() } else { u.to_vec() };
        Binomial {
            lhs: u.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() }).collect(),
            rhs: u.iter().map(|x| if x.is_negative() { -x } else { BigInt::zero() }).collect(),
        }
    }

    /// Both monomials evaluate to the same element of the monoid.
    pub fn holds_in(&self, a: &AffineMonoid) -> bool {
        let amb = a.ambient();
        let eval = |e: &[BigInt]| {
            e.iter().zip(a.generators()).fold(amb.zero(), |acc, (k, g)| amb.add(&acc, &amb.scale(k, g)))
        };
        eval(&self.lhs) == eval(&self.rhs)
    }
}

fn monomial(e: &[BigInt]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, k)| !k.is_zero())
        .map(|(j, k)| if k == &BigInt::from(1) { format!("x{j}") } else { format!("x{j}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", monomial(&self.lhs), monomial(&self.rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialPresentation {
    pub variables: usize,
    pub relations: Vec<Binomial>,
    pub label: &'static str,
}

pub const LATTICE_BASIS_LABEL: &str = "lattice-basis presentation (saturation not performed)";

/// `Z[A]` as `Z[x_0, ..., x_{k-1}]` modulo one binomial per basis vector of
/// the relation lattice of the generators.
pub fn base_change_presentation(a: &AffineMonoid) -> BinomialPresentation {
    BinomialPresentation {
        variables: a.num_generators(),
        relations: a.relations().iter().map(|u| Binomial::from_relation(u)).collect(),
        label: LATTICE_BASIS_LABEL,
    }
}

impl fmt::Display for BinomialPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.variables).map(|j| format!("x{j}")).collect();
        writeln!(f, "Z[{}]", vars.join(","))?;
        if self.relations.is_empty() {
            writeln!(f, "  no relations")?;
        }
        for r in &self.relations {
            writeln!(f, "  {r}")?;
        }
        write!(f, "{}", self.label)
    }
}

/// Input of the three-point space example: `A ⊆ B` inside `Z^r + ⊕ Z/m_i`.
/// Without `b_generators`, `B` is the whole ambient group.
#[derive(Clone, Debug)]
pub struct SubgroupPair {
    pub ambient: Ambient,
    pub a_generators: Vec<Vec<BigInt>>,
    pub b_generators: Option<Vec<Vec<BigInt>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    /// invariant factors of `C = B/A`
    pub c_invariants: Vec<BigInt>,
    pub c_order: BigInt,
    /// exactness of `0 -> A -> B -> C×C -> (C×C)/Δ -> 0` at `A`, `B`, `C×C`
    /// and `(C×C)/Δ`
    pub exact_at: [bool; 4],
    /// the swap of `x+` and `x-` fixes every global section of `F` and `G`
    pub flip_trivial_on_sections: bool,
    /// the swap preserves the diagonal and induces `c -> -c` on `H^1`
    pub flip_is_inversion: bool,
    /// inversion is the identity exactly when `C` is 2-torsion
    pub flip_is_identity: bool,
}

impl CohomologyReport {
    pub fn exact(&self) -> bool {
        self.exact_at.iter().all(|&e| e)
    }

    pub fn summary(&self) -> String {
        let exact = if self.exact() { "exact" } else { "not exact" };
        let flip = match (self.flip_is_inversion, self.flip_is_identity) {
            (true, true) => "flip = inversion = identity",
            (true, false) => "flip = inversion",
            _ => "flip is not inversion",
        };
        format!("{exact}; {flip}")
    }
}

/// Largest `|C|` the demo enumerates.
const MAX_QUOTIENT: u64 = 4096;

/// Builds the sheaves `F ⊆ G = B` and `H = G/F` on the three-point space,
/// computes the long exact sequence and checks it position by position,
/// then checks the induced action of the swap `x+ <-> x-`.
pub fn cohomology_demo(pair: &SubgroupPair) -> Result<CohomologyReport> {
    let amb = &pair.ambient;
    let norm = |v: &[Vec<BigInt>]| v.iter().map(|x| amb.normalize(x)).collect::<Result<Vec<_>>>();
    let a_gens = norm(&pair.a_generators).map_err(|e| Error::NotSubgroup(e.to_string()))?;
    let b_gens = match &pair.b_generators {
        Some(b) => norm(b).map_err(|e| Error::NotSubgroup(e.to_string()))?,
        None => (0..amb.width())
            .map(|i| {
                let mut e = amb.zero();
                e[i] = BigInt::from(1);
                amb.normalize(&e)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let w = amb.width();
    let tors = amb.relation_rows();
    let mut b_rows = b_gens.clone();
    b_rows.extend(tors.iter().cloned());
    let b_lattice = RowLattice::new(&b_rows, w);
    // B-coordinates of every A generator; failure means A is not inside B
    let k = b_gens.len();
    let coords = a_gens
        .iter()
        .map(|g| {
            b_lattice
                .solve(g)
                .map(|c| c[..k].to_vec())
                .ok_or_else(|| Error::NotSubgroup(format!("generator {g:?} of A is not in B")))
        })
        .collect::<Result<Vec<_>>>()?;
    // relations among the B generators in the ambient group
    let mut b_rel_rows = Vec::new();
    let rel_source = IntegerMatrix::from_rows(w, &b_rows);
    let (h, u) = hnf(&rel_source);
    for i in 0..h.rows() {
        if h.row(i).iter().all(Zero::is_zero) {
            b_rel_rows.push(u.row(i)[..k].to_vec());
        }
    }
    let mut c_rel = b_rel_rows.clone();
    c_rel.extend(coords.iter().cloned());
    let qmap = QuotientMap::new(&IntegerMatrix::from_rows(k, &c_rel), k);
    if qmap.structure().rank > 0 {
        return Err(Error::InfiniteQuotient);
    }
    let inv = qmap.structure().torsion.clone();
    let c_order = qmap.structure().torsion_order();
    let n = c_order.to_u64().filter(|&n| n <= MAX_QUOTIENT).ok_or_else(|| {
        Error::Unsupported(format!("|B/A| = {c_order} exceeds {MAX_QUOTIENT}"))
    })?;

    let c = CyclicProduct { moduli: inv.clone() };
    let elements = c.elements();
    debug_assert_eq!(elements.len() as u64, n);
    // sections over the opens: F(U) = B, F(U±) = A, G = B everywhere,
    // H(U) = B/B = 0, H(U±) = C; a global section is a compatible pair over
    // U+ and U-, so H^0(F) = A, H^0(G) = B, H^0(H) = C × C.
    let quotient = |x: &[BigInt]| c.reduce(&qmap.classify(x));
    let b_basis: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let mut e = vec![BigInt::zero(); k];
            e[i] = BigInt::from(1);
            e
        })
        .collect();

    // exactness at A: A -> B is an inclusion of subgroups of the ambient group
    let injective = a_gens.iter().zip(&coords).all(|(g, c)| {
        let image = c.iter().zip(&b_gens).fold(amb.zero(), |acc, (k, b)| amb.add(&acc, &amb.scale(k, b)));
        &image == g
    });
    // exactness at C × C: image of B is the diagonal, which is the kernel of
    // (x, y) -> x - y
    let mut image: BTreeSet<(Vec<BigInt>, Vec<BigInt>)> = BTreeSet::new();
    image.insert((c.zero(), c.zero()));
    let steps: Vec<(Vec<BigInt>, Vec<BigInt>)> =
        b_basis.iter().map(|e| (quotient(e), quotient(e))).collect();
    let mut frontier: Vec<(Vec<BigInt>, Vec<BigInt>)> = image.iter().cloned().collect();
    while let Some((x, y)) = frontier.pop() {
        for (s, t) in &steps {
            let next = (c.add(&x, s), c.add(&y, t));
            if image.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    // exactness at B: A dies in C, and B reaches all |B/A| classes, so the
    // kernel is no larger than A
    let reached: BTreeSet<&Vec<BigInt>> = image.iter().map(|(x, _)| x).collect();
    let at_b = coords.iter().all(|x| c.is_zero(&quotient(x))) && reached.len() as u64 == n;
    let delta = |x: &[BigInt], y: &[BigInt]| c.sub(x, y);
    let mut at_cc = true;
    for x in &elements {
        for y in &elements {
            let in_kernel = c.is_zero(&delta(x, y));
            if in_kernel != image.contains(&(x.clone(), y.clone())) {
                at_cc = false;
            }
        }
    }
    // exactness at H^1: (x, y) -> x - y is onto C
    let hits: BTreeSet<Vec<BigInt>> = elements.iter().map(|x| delta(x, &c.zero())).collect();
    let surjective = hits.len() == elements.len();

    // the swap acts on global sections (s+, s-) by (s-, s+)
    let flip_trivial_on_sections = b_basis.iter().all(|e| {
        let section = (e.clone(), e.clone());
        (section.1.clone(), section.0.clone()) == section
    });
    // the swap sends (x, y) in C × C to (y, x); it must preserve the diagonal
    // and induce c -> -c on (C × C)/Δ, identified with C by (x, y) -> x - y
    let flip_is_inversion = elements.iter().all(|x| {
        elements.iter().all(|y| {
            let d = delta(x, y);
            let swapped = delta(y, x);
            (!c.is_zero(&d) || c.is_zero(&swapped)) && swapped == c.neg(&d)
        })
    });
    let flip_is_identity = elements.iter().all(|x| c.neg(x) == *x);
    Ok(CohomologyReport {
        c_invariants: inv,
        c_order,
        exact_at: [injective, at_b, at_cc, surjective],
        flip_trivial_on_sections,
        flip_is_inversion,
        flip_is_identity,
    })
}

/// `⊕ Z/d_i` with elements as residue vectors.
struct CyclicProduct {
    moduli: Vec<BigInt>,
}

impl CyclicProduct {
    fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.moduli.len()]
    }

    fn reduce(&self, x: &[BigInt]) -> Vec<BigInt> {
        x.iter().zip(&self.moduli).map(|(a, d)| a.mod_floor(d)).collect()
    }

    fn add(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    fn sub(&self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    fn neg(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.reduce(&x.iter().map(|a| -a).collect::<Vec<_>>())
    }

    fn is_zero(&self, x: &[BigInt]) -> bool {
        x.iter().all(Zero::is_zero)
    }

    fn elements(&self) -> Vec<Vec<BigInt>> {
        self.moduli.iter().fold(vec![Vec::new()], |acc, d| {
            let d = d.to_u64().expect("bounded quotient");
            acc.into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |r| {
                        let mut v = prefix.clone();
                        v.push(BigInt::from(r));
                        v
                    })
                })
                .collect()
        })
    }
}
