//! Exact integer linear algebra: Hermite and Smith normal forms, integer
//! kernels and the structure of finitely generated abelian groups.
//!
//! Everything here works over [`BigInt`]; nothing is ever rounded.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        IntegerMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` is needed to describe a matrix
    /// with zero rows.
    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            entries.extend(r.iter().cloned());
        }
        IntegerMatrix::new(rows.len(), cols, entries)
    }

    pub fn from_i64_rows(cols: usize, rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| ints(r)).collect();
        IntegerMatrix::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntegerMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * &self[(i, j)];
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// True when the matrix is diagonal (off-diagonal entries all zero).
    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.entries[src * self.cols + j] * k;
            self.entries[dst * self.cols + j] += s;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.entries[i * self.cols + src] * k;
            self.entries[i * self.cols + dst] += s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;
    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form.
///
/// Returns `(h, u)` with `u` unimodular and `u * m == h`. Pivots are positive
/// and every entry above a pivot lies in `[0, pivot)`. Zero rows sit at the
/// bottom.
pub fn hnf(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        loop {
            // smallest nonzero magnitude at or below pivot_row
            let best = (pivot_row..m.rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(pivot_row, best);
            u.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..m.rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
                h.add_row_multiple(i, pivot_row, &-&q);
                u.add_row_multiple(i, pivot_row, &-&q);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        let p = h[(pivot_row, col)].clone();
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&p);
            h.add_row_multiple(i, pivot_row, &-&q);
            u.add_row_multiple(i, pivot_row, &-&q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form.
///
/// Returns `(s, u, v)` with `u`, `v` unimodular, `u * m * v == s`, `s`
/// diagonal with nonnegative entries and `s[i][i]` dividing `s[i+1][i+1]`.
pub fn snf(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        let pivot = (t..m.rows)
            .flat_map(|i| (t..m.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !s[(i, j)].is_zero())
            .min_by(|&a, &b| s[a].abs().cmp(&s[b].abs()));
        let Some((pi, pj)) = pivot else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..m.rows {
            if s[(i, t)].is_zero() {
                continue;
            }
            let q = s[(i, t)].div_floor(&s[(t, t)]);
            s.add_row_multiple(i, t, &-&q);
            u.add_row_multiple(i, t, &-&q);
            if !s[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..m.cols {
            if s[(t, j)].is_zero() {
                continue;
            }
            let q = s[(t, j)].div_floor(&s[(t, t)]);
            s.add_col_multiple(j, t, &-&q);
            v.add_col_multiple(j, t, &-&q);
            if !s[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // pivot must divide the remaining block
        let offender = (t + 1..m.rows)
            .flat_map(|i| (t + 1..m.cols).map(move |j| (i, j)))
            .find(|&(i, j)| !s[(i, j)].is_multiple_of(&s[(t, t)]));
        if let Some((i, _)) = offender {
            s.add_row_multiple(t, i, &BigInt::one());
            u.add_row_multiple(t, i, &BigInt::one());
            continue;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (s, u, v)
}

/// A lattice basis (as rows) of `{x in Z^cols : m x = 0}`, in Hermite normal
/// form.
pub fn kernel_lattice(m: &IntegerMatrix) -> IntegerMatrix {
    let (h, u) = hnf(&m.transpose());
    let kernel_rows: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    let basis = IntegerMatrix::from_rows(m.cols, &kernel_rows);
    nonzero_rows(&hnf(&basis).0)
}

/// Keeps only the nonzero rows of a matrix.
pub fn nonzero_rows(m: &IntegerMatrix) -> IntegerMatrix {
    let rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| m.row(i).to_vec())
        .filter(|r| !is_zero_vec(r))
        .collect();
    IntegerMatrix::from_rows(m.cols(), &rows)
}

/// Rank `r` and torsion invariants `d1 | d2 | ...` (each at least 2) of a
/// finitely generated abelian group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AbelianGroupStructure {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupStructure {
    pub fn free(rank: usize) -> Self {
        AbelianGroupStructure { rank, torsion: Vec::new() }
    }

    /// Order of the finite part `F`.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Finite part is cyclic (possibly trivial).
    pub fn has_cyclic_torsion(&self) -> bool {
        self.torsion.len() <= 1
    }

    /// Number of `x` with `n x = 0` in the finite part.
    pub fn torsion_solutions(&self, n: &BigInt) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, d| acc * n.gcd(d))
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 { "Z".to_string() } else { format!("Z^{}", self.rank) });
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Structure of `Z^generators / rowspan(relations)`.
pub fn abelian_group_structure(relations: &IntegerMatrix, generators: usize) -> AbelianGroupStructure {
    assert_eq!(relations.cols(), generators, "relations must have one column per generator");
    let (s, _, _) = snf(relations);
    let diag = s.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion = diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect();
    AbelianGroupStructure { rank: generators - nonzero, torsion }
}

/// Class map onto `Z^generators / rowspan(relations)` in Smith coordinates.
///
/// `classify` sends an integer vector to its coordinates in
/// `Z^rank x Z/d1 x ... x Z/dt`; two vectors have equal images exactly when
/// they differ by an element of the relation lattice.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    structure: AbelianGroupStructure,
    v: IntegerMatrix,
    /// positions in `x v` carrying torsion moduli, paired with the modulus
    torsion_positions: Vec<(usize, BigInt)>,
    free_positions: Vec<usize>,
    /// `v` inverse, used to lift class coordinates back
    v_inverse: IntegerMatrix,
}

impl QuotientMap {
    pub fn new(relations: &IntegerMatrix, generators: usize) -> Self {
        assert_eq!(relations.cols(), generators);
        let (s, _, v) = snf(relations);
        let diag = s.diagonal();
        let mut torsion_positions = Vec::new();
        let mut free_positions = Vec::new();
        for j in 0..generators {
            match diag.get(j) {
                Some(d) if d.is_zero() => free_positions.push(j),
                None => free_positions.push(j),
                Some(d) if d.is_one() => {}
                Some(d) => torsion_positions.push((j, d.clone())),
            }
        }
        let structure = AbelianGroupStructure {
            rank: free_positions.len(),
            torsion: torsion_positions.iter().map(|(_, d)| d.clone()).collect(),
        };
        let v_inverse = unimodular_inverse(&v);
        QuotientMap { structure, v, torsion_positions, free_positions, v_inverse }
    }

    pub fn structure(&self) -> &AbelianGroupStructure {
        &self.structure
    }

    /// Free coordinates followed by torsion residues in `[0, d)`.
    pub fn classify(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.v.left_apply(x);
        let mut out: Vec<BigInt> = self.free_positions.iter().map(|&j| y[j].clone()).collect();
        out.extend(self.torsion_positions.iter().map(|(j, d)| y[*j].mod_floor(d)));
        out
    }

    /// An integer vector whose class has the given coordinates.
    pub fn lift(&self, class: &[BigInt]) -> Vec<BigInt> {
        let mut y = vec![BigInt::zero(); self.v.rows()];
        let mut it = class.iter();
        for &j in &self.free_positions {
            y[j] = it.next().expect("class too short").clone();
        }
        for (j, _) in &self.torsion_positions {
            y[*j] = it.next().expect("class too short").clone();
        }
        self.v_inverse.left_apply(&y)
    }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntegerMatrix) -> IntegerMatrix {
    assert!(m.is_square());
    let (h, u) = hnf(m);
    assert!(h == IntegerMatrix::identity(m.rows()), "matrix is not unimodular");
    u
}

/// Rank over the rationals of a list of vectors of length `dim`.
pub fn rank(vectors: &[Vec<BigInt>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let (h, _) = hnf(&IntegerMatrix::from_rows(dim, vectors));
    (0..h.rows()).filter(|&i| !is_zero_vec(h.row(i))).count()
}

/// Integer coefficients `c` with `sum c_i rows[i] == target`, if any exist.
pub fn solve_combination(rows: &[Vec<BigInt>], dim: usize, target: &[BigInt]) -> Option<Vec<BigInt>> {
    RowLattice::new(rows, dim).solve(target)
}

/// The lattice spanned by a list of row vectors, kept in Hermite form so that
/// repeated membership queries are cheap.
#[derive(Clone, Debug)]
pub struct RowLattice {
    dim: usize,
    h: IntegerMatrix,
    u: IntegerMatrix,
}

impl RowLattice {
    pub fn new(rows: &[Vec<BigInt>], dim: usize) -> Self {
        let (h, u) = hnf(&IntegerMatrix::from_rows(dim, rows));
        RowLattice { dim, h, u }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, target: &[BigInt]) -> bool {
        self.reduce(target).is_some()
    }

    /// Coefficients with respect to the original rows.
    pub fn solve(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.reduce(target)?;
        Some(self.u.left_apply(&y))
    }

    /// Coefficients with respect to the Hermite basis.
    fn reduce(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(target.len(), self.dim);
        let h = &self.h;
        let mut rest = target.to_vec();
        let mut y = vec![BigInt::zero(); h.rows()];
        let mut col = 0;
        for i in 0..h.rows() {
            while col < self.dim && h[(i, col)].is_zero() {
                if !rest[col].is_zero() {
                    return None;
                }
                col += 1;
            }
            if col == self.dim {
                break;
            }
            let p = &h[(i, col)];
            if !rest[col].is_multiple_of(p) {
                return None;
            }
            let q = &rest[col] / p;
            for j in col..self.dim {
                rest[j] -= &q * &h[(i, j)];
            }
            y[i] = q;
            col += 1;
        }
        is_zero_vec(&rest).then_some(y)
    }
}

/// Basis of the saturation `span_Q(vectors) ∩ Z^dim`.
pub fn saturation(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let perp = kernel_lattice(&IntegerMatrix::from_rows(dim, vectors));
    kernel_lattice(&perp).row_vectors()
}

/// Rational solution `x` of `x * rows == target` when `rows` are linearly
/// independent and `target` lies in their span.
pub fn solve_rational(rows: &[Vec<BigInt>], dim: usize, target: &[BigInt]) -> Option<Vec<BigRational>> {
    let k = rows.len();
    // augmented system: columns are the unknowns, one equation per coordinate
    let mut a: Vec<Vec<BigRational>> = (0..dim)
        .map(|j| {
            let mut eq: Vec<BigRational> =
                (0..k).map(|i| BigRational::from_integer(rows[i][j].clone())).collect();
            eq.push(BigRational::from_integer(target[j].clone()));
            eq
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..dim).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..dim {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=k {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..dim).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][k].clone();
    }
    Some(x)
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_vec(a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| -x).collect()
}

pub fn scale_vec(k: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|x| k * x).collect()
}

/// gcd of the entries (zero for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides out the content; the zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators of a rational vector and makes it primitive.
pub fn primitive_from_rational(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&scaled)
}
