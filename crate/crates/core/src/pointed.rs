//! Finite pointed modules over an affine monoid: a finite set with a
//! stationary basepoint and one action map per monoid generator.
//!
//! The tensor product here is the pointed (smash) tensor: pairs are
//! identified along `(g m, n) ~ (m, g n)`, and every pair with a basepoint
//! coordinate is identified with the basepoint. With this convention the
//! monoid with an adjoined basepoint is a unit for the tensor product.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::monoid::AffineMonoid;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModule {
    labels: Vec<String>,
    basepoint: usize,
    /// `actions[g][x]` is the image of `x` under generator `g`
    actions: Vec<Vec<usize>>,
}

impl PointedModule {
    /// Checks only the shape of the data: maps are total and the basepoint
    /// is stationary. Use [`PointedModule::validate`] for compatibility with
    /// a monoid.
    pub fn new(labels: Vec<String>, basepoint: usize, actions: Vec<Vec<usize>>) -> Result<PointedModule> {
        let n = labels.len();
        if basepoint >= n {
            return Err(Error::InvalidModule("basepoint is not in the carrier".into()));
        }
        let distinct: HashSet<&String> = labels.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidModule("duplicate labels".into()));
        }
        for (g, act) in actions.iter().enumerate() {
            if act.len() != n || act.iter().any(|&y| y >= n) {
                return Err(Error::InvalidModule(format!("action of generator {g} is not a map on the carrier")));
            }
            if act[basepoint] != basepoint {
                return Err(Error::InvalidModule(format!("generator {g} moves the basepoint")));
            }
        }
        Ok(PointedModule { labels, basepoint, actions })
    }

    /// Builds a module with labels `*`, `1`, `2`, ... and basepoint 0.
    pub fn from_maps(actions: Vec<Vec<usize>>) -> Result<PointedModule> {
        let n = actions.first().map_or(1, Vec::len);
        let labels = (0..n).map(|i| if i == 0 { "*".to_string() } else { i.to_string() }).collect();
        PointedModule::new(labels, 0, actions)
    }

    /// The one-point module.
    pub fn point(generators: usize) -> PointedModule {
        PointedModule { labels: vec!["*".into()], basepoint: 0, actions: vec![vec![0]; generators] }
    }

    /// Checks that the actions commute and satisfy the lattice-basis
    /// binomials of the monoid's relations.
    pub fn validate(&self, base: &AffineMonoid) -> Result<()> {
        if self.actions.len() != base.num_generators() {
            return Err(Error::InvalidModule(format!(
                "{} actions for {} generators",
                self.actions.len(),
                base.num_generators()
            )));
        }
        for g in 0..self.actions.len() {
            for h in g + 1..self.actions.len() {
                if (0..self.len()).any(|x| self.act(g, self.act(h, x)) != self.act(h, self.act(g, x))) {
                    return Err(Error::InvalidModule(format!("actions of generators {g} and {h} do not commute")));
                }
            }
        }
        for rel in base.relations() {
            for x in 0..self.len() {
                let plus = self.apply_monomial(rel.iter().map(|c| if c.is_positive() { c.clone() } else { BigInt::zero() }), x);
                let minus =
                    self.apply_monomial(rel.iter().map(|c| if c.is_negative() { -c } else { BigInt::zero() }), x);
                if plus != minus {
                    return Err(Error::InvalidModule(format!("relation {rel:?} fails at {}", self.labels[x])));
                }
            }
        }
        Ok(())
    }

    fn apply_monomial(&self, exps: impl Iterator<Item = BigInt>, x: usize) -> usize {
        exps.enumerate().fold(x, |y, (g, e)| self.power(g, y, &e))
    }

    /// `g^e x`, using the eventual periodicity of `g`'s orbit for large `e`.
    pub fn power(&self, g: usize, x: usize, e: &BigInt) -> usize {
        let mut seen = BTreeMap::new();
        let mut orbit = Vec::new();
        let mut y = x;
        while !seen.contains_key(&y) {
            seen.insert(y, orbit.len());
            orbit.push(y);
            y = self.act(g, y);
        }
        let start = seen[&y];
        let period = orbit.len() - start;
        match e.to_usize() {
            Some(e) if e < orbit.len() => orbit[e],
            _ => {
                let shift = (e - BigInt::from(start)).mod_floor(&BigInt::from(period));
                orbit[start + shift.to_usize().expect("below period")]
            }
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.actions
    }

    pub fn num_generators(&self) -> usize {
        self.actions.len()
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.actions[g][x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Flatness criterion for integral monoids: every generator acts
    /// injectively.
    pub fn is_flat(&self) -> bool {
        self.actions.iter().all(|act| act.iter().collect::<HashSet<_>>().len() == act.len())
    }

    /// Smallest subset containing `xs` and the basepoint that is closed under
    /// the actions.
    pub fn submodule_closure(&self, xs: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::from([self.basepoint]);
        let mut queue: VecDeque<usize> = xs.into_iter().collect();
        while let Some(x) = queue.pop_front() {
            if out.insert(x) {
                queue.extend(self.actions.iter().map(|a| a[x]));
            }
        }
        out
    }

    pub fn is_submodule(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.basepoint) && set.iter().all(|&x| self.actions.iter().all(|a| set.contains(&a[x])))
    }

    /// All submodules (subsets containing the basepoint and closed under the
    /// actions).
    pub fn submodules(&self) -> Vec<BTreeSet<usize>> {
        let others: Vec<usize> = (0..self.len()).filter(|&x| x != self.basepoint).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1 << others.len()) {
            let mut set = BTreeSet::from([self.basepoint]);
            set.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
            if self.is_submodule(&set) {
                out.push(set);
            }
        }
        out
    }

    /// The submodule on `set`, with its inclusion.
    pub fn restrict(&self, set: &BTreeSet<usize>) -> Result<(PointedModule, PointedMorphism)> {
        if !self.is_submodule(set) {
            return Err(Error::InvalidModule("subset is not a submodule".into()));
        }
        let elems: Vec<usize> = set.iter().copied().collect();
        let pos = |x: usize| elems.binary_search(&x).expect("closed");
        let sub = PointedModule {
            labels: elems.iter().map(|&x| self.labels[x].clone()).collect(),
            basepoint: pos(self.basepoint),
            actions: self.actions.iter().map(|a| elems.iter().map(|&x| pos(a[x])).collect()).collect(),
        };
        let map = elems.clone();
        Ok((sub.clone(), PointedMorphism { source: sub, target: self.clone(), map }))
    }

    /// Rees quotient `M / K` collapsing a submodule to the basepoint, with
    /// the projection.
    pub fn collapse(&self, set: &BTreeSet<usize>) -> Result<(PointedModule, PointedMorphism)> {
        if !self.is_submodule(set) {
            return Err(Error::InvalidModule("subset is not a submodule".into()));
        }
        let mut proj = vec![0; self.len()];
        let mut labels = vec![self.labels[self.basepoint].clone()];
        for x in 0..self.len() {
            if !set.contains(&x) {
                proj[x] = labels.len();
                labels.push(self.labels[x].clone());
            }
        }
        let mut actions = vec![vec![0; labels.len()]; self.actions.len()];
        for (g, a) in self.actions.iter().enumerate() {
            for x in 0..self.len() {
                actions[g][proj[x]] = proj[a[x]];
            }
        }
        let quotient = PointedModule { labels, basepoint: 0, actions };
        Ok((quotient.clone(), PointedMorphism { source: self.clone(), target: quotient, map: proj }))
    }

    /// Wedge sum: disjoint union with the basepoints identified.
    pub fn direct_sum(&self, other: &PointedModule) -> Result<PointedModule> {
        if self.num_generators() != other.num_generators() {
            return Err(Error::InvalidModule("modules over different monoids".into()));
        }
        let mut labels = vec![format!("{}", self.labels[self.basepoint])];
        let mut left = vec![0; self.len()];
        let mut right = vec![0; other.len()];
        for x in (0..self.len()).filter(|&x| x != self.basepoint) {
            left[x] = labels.len();
            labels.push(format!("{}.0", self.labels[x]));
        }
        for x in (0..other.len()).filter(|&x| x != other.basepoint) {
            right[x] = labels.len();
            labels.push(format!("{}.1", other.labels[x]));
        }
        let mut actions = vec![vec![0; labels.len()]; self.num_generators()];
        for g in 0..self.num_generators() {
            for x in 0..self.len() {
                actions[g][left[x]] = left[self.act(g, x)];
            }
            for x in 0..other.len() {
                actions[g][right[x]] = right[other.act(g, x)];
            }
        }
        PointedModule::new(labels, 0, actions)
    }

    /// The finite monoid itself with an adjoined basepoint; requires the
    /// monoid to be a finite group.
    pub fn regular(base: &AffineMonoid) -> Result<PointedModule> {
        let g = base.quotient_group();
        if !base.is_group() || !g.is_finite() {
            return Err(Error::Unsupported("the regular module is finite only for finite groups".into()));
        }
        let amb = base.ambient();
        let mut elems = vec![amb.zero()];
        let mut index: BTreeMap<Vec<BigInt>, usize> = BTreeMap::from([(amb.zero(), 0)]);
        let mut i = 0;
        while i < elems.len() {
            for gen in base.generators() {
                let y = amb.add(&elems[i], gen);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut labels = vec!["*".to_string()];
        labels.extend(elems.iter().map(|x| base.format_element(x)));
        let actions = base
            .generators()
            .iter()
            .map(|gen| {
                let mut a = vec![0];
                a.extend(elems.iter().map(|x| index[&amb.add(x, gen)] + 1));
                a
            })
            .collect();
        debug_assert_eq!(n + 1, labels.len());
        PointedModule::new(labels, 0, actions)
    }

    /// The free monoid on `k` generators with an adjoined basepoint,
    /// truncated by `t_i^(height + period) = t_i^height`. Acting on any
    /// module whose generators all satisfy that identity, this behaves like
    /// the untruncated monoid. With `period == 0` the identity is
    /// `t_i^height = *` instead.
    pub fn free_truncated(k: usize, height: usize, period: usize) -> PointedModule {
        let side = height + period;
        let count = side.pow(k as u32);
        let digits = |mut i: usize| {
            let mut d = vec![0; k];
            for x in d.iter_mut() {
                *x = i % side;
                i /= side;
            }
            d
        };
        let index = |d: &[usize]| d.iter().rev().fold(0, |acc, &x| acc * side + x);
        let mut labels = vec!["*".to_string()];
        labels.extend((0..count).map(|i| {
            let d = digits(i);
            let parts: Vec<String> = d.iter().map(ToString::to_string).collect();
            format!("t^({})", parts.join(","))
        }));
        let actions = (0..k)
            .map(|g| {
                let mut a = vec![0];
                a.extend((0..count).map(|i| {
                    let mut d = digits(i);
                    if d[g] + 1 < side {
                        d[g] += 1;
                    } else if period == 0 {
                        return 0;
                    } else {
                        d[g] = height;
                    }
                    index(&d) + 1
                }));
                a
            })
            .collect();
        PointedModule { labels, basepoint: 0, actions }
    }

    /// A finite stand-in for the monoid with an adjoined basepoint, exact
    /// for tensoring with `module`: the regular module for finite groups, a
    /// truncation of the free monoid otherwise.
    pub fn unit_for(base: &AffineMonoid, module: &PointedModule) -> Result<PointedModule> {
        if base.is_group() && base.quotient_group().is_finite() {
            return PointedModule::regular(base);
        }
        if !base.relations().is_empty() {
            return Err(Error::Unsupported("truncated regular module needs a free monoid".into()));
        }
        let n = module.len().max(1);
        let period = (1..=n).fold(1usize, |acc, i| acc.lcm(&i));
        Ok(PointedModule::free_truncated(base.num_generators(), n, period))
    }

    /// Relabel as `*`, `1`, `2`, ... with the basepoint first, using the
    /// given order on the remaining elements.
    fn relabeled(&self, order: &[usize]) -> Vec<Vec<usize>> {
        let mut pos = vec![0; self.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i + 1;
        }
        pos[self.basepoint] = 0;
        self.actions
            .iter()
            .map(|a| {
                let mut out = vec![0; self.len()];
                out[0] = 0;
                for &x in order {
                    out[pos[x]] = pos[a[x]];
                }
                out
            })
            .collect()
    }

    /// Canonical form of the isomorphism class: the lexicographically least
    /// relabeled action table. Exhaustive over orderings, so meant for small
    /// carriers.
    pub fn canonical_form(&self) -> Vec<Vec<usize>> {
        let mut others: Vec<usize> = (0..self.len()).filter(|&x| x != self.basepoint).collect();
        let mut best: Option<Vec<Vec<usize>>> = None;
        permute(&mut others, 0, &mut |order| {
            let t = self.relabeled(order);
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        });
        best.unwrap_or_else(|| self.relabeled(&[]))
    }
}

fn permute(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, f);
        v.swap(i, j);
    }
}

impl fmt::Display for PointedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(", "))?;
        for (g, a) in self.actions.iter().enumerate() {
            let parts: Vec<String> = (0..self.len())
                .filter(|&x| x != self.basepoint)
                .map(|x| format!("{}->{}", self.labels[x], self.labels[a[x]]))
                .collect();
            write!(f, " g{g}: {}", parts.join(" "))?;
        }
        Ok(())
    }
}

/// An equivariant, basepoint-preserving map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedMorphism {
    source: PointedModule,
    target: PointedModule,
    map: Vec<usize>,
}

impl PointedMorphism {
    pub fn new(source: PointedModule, target: PointedModule, map: Vec<usize>) -> Result<PointedMorphism> {
        if map.len() != source.len() || map.iter().any(|&y| y >= target.len()) {
            return Err(Error::InvalidMorphism("not a map between the carriers".into()));
        }
        if source.num_generators() != target.num_generators() {
            return Err(Error::InvalidMorphism("modules over different monoids".into()));
        }
        if map[source.basepoint] != target.basepoint {
            return Err(Error::InvalidMorphism("basepoint is not preserved".into()));
        }
        for g in 0..source.num_generators() {
            if let Some(x) = (0..source.len()).find(|&x| map[source.act(g, x)] != target.act(g, map[x])) {
                return Err(Error::InvalidMorphism(format!(
                    "not equivariant for generator {g} at {}",
                    source.labels[x]
                )));
            }
        }
        Ok(PointedMorphism { source, target, map })
    }

    pub fn identity(m: &PointedModule) -> PointedMorphism {
        PointedMorphism { source: m.clone(), target: m.clone(), map: (0..m.len()).collect() }
    }

    pub fn source(&self) -> &PointedModule {
        &self.source
    }

    pub fn target(&self) -> &PointedModule {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        self.map.iter().collect::<HashSet<_>>().len() == self.map.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.map.iter().collect::<HashSet<_>>().len() == self.target.len()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn then(&self, next: &PointedMorphism) -> Result<PointedMorphism> {
        if self.target != next.source {
            return Err(Error::InvalidMorphism("composition of incompatible morphisms".into()));
        }
        Ok(PointedMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map: self.map.iter().map(|&x| next.map[x]).collect(),
        })
    }

    /// Preimage of the target basepoint, with its inclusion.
    pub fn kernel(&self) -> (PointedModule, PointedMorphism) {
        let set: BTreeSet<usize> = (0..self.source.len()).filter(|&x| self.map[x] == self.target.basepoint).collect();
        self.source.restrict(&set).expect("preimage of the basepoint is a submodule")
    }

    /// Target with the image collapsed to the basepoint, with the projection.
    pub fn cokernel(&self) -> (PointedModule, PointedMorphism) {
        let set: BTreeSet<usize> = self.map.iter().copied().collect();
        self.target.collapse(&set).expect("image is a submodule")
    }

    /// `ker(coker f)` with its inclusion into the target.
    pub fn image(&self) -> (PointedModule, PointedMorphism) {
        self.cokernel().1.kernel()
    }

    /// `coker(ker f)` with the projection from the source.
    pub fn coimage(&self) -> (PointedModule, PointedMorphism) {
        self.kernel().1.cokernel()
    }

    /// The natural map `coim(f) -> im(f)`.
    pub fn comparison(&self) -> PointedMorphism {
        let (coim, proj) = self.coimage();
        let (im, incl) = self.image();
        let mut map = vec![usize::MAX; coim.len()];
        for x in 0..self.source.len() {
            let y = self.map[x];
            let pos = incl.map.iter().position(|&z| z == y).expect("f(x) lies in the image");
            map[proj.map[x]] = pos;
        }
        PointedMorphism::new(coim, im, map).expect("comparison map is a morphism")
    }

    /// The comparison `coim(f) -> im(f)` is an isomorphism.
    pub fn is_strong(&self) -> bool {
        self.comparison().is_isomorphism()
    }
}

/// `M ⊗ N` together with the class of every pair `(m, n)`, indexed
/// `m * |N| + n`.
pub fn tensor_with_classes(m: &PointedModule, n: &PointedModule) -> Result<(PointedModule, Vec<usize>)> {
    if m.num_generators() != n.num_generators() {
        return Err(Error::InvalidModule("modules over different monoids".into()));
    }
    let (a, b) = (m.len(), n.len());
    let idx = |i: usize, j: usize| i * b + j;
    let mut uf = UnionFind::<usize>::new(a * b);
    let base = idx(m.basepoint, n.basepoint);
    for i in 0..a {
        uf.union(idx(i, n.basepoint), base);
    }
    for j in 0..b {
        uf.union(idx(m.basepoint, j), base);
    }
    for g in 0..m.num_generators() {
        for i in 0..a {
            for j in 0..b {
                uf.union(idx(m.act(g, i), j), idx(i, n.act(g, j)));
            }
        }
    }
    let mut class_of_root = BTreeMap::new();
    let mut reps = Vec::new();
    class_of_root.insert(uf.find(base), 0);
    reps.push(base);
    let mut classes = vec![0; a * b];
    for p in 0..a * b {
        let r = uf.find(p);
        let c = *class_of_root.entry(r).or_insert_with(|| {
            reps.push(p);
            reps.len() - 1
        });
        classes[p] = c;
    }
    let labels = reps.iter().map(|&p| format!("{}⊗{}", m.labels[p / b], n.labels[p % b])).collect();
    let actions = (0..m.num_generators())
        .map(|g| reps.iter().map(|&p| classes[idx(m.act(g, p / b), p % b)]).collect())
        .collect();
    Ok((PointedModule { labels, basepoint: 0, actions }, classes))
}

pub fn tensor(m: &PointedModule, n: &PointedModule) -> Result<PointedModule> {
    Ok(tensor_with_classes(m, n)?.0)
}

/// `F ⊗ f : F ⊗ X -> F ⊗ Y`.
pub fn tensor_morphism(f: &PointedModule, g: &PointedMorphism) -> Result<PointedMorphism> {
    let (fx, cx) = tensor_with_classes(f, &g.source)?;
    let (fy, cy) = tensor_with_classes(f, &g.target)?;
    let (bx, by) = (g.source.len(), g.target.len());
    let mut map = vec![0; fx.len()];
    for i in 0..f.len() {
        for j in 0..bx {
            map[cx[i * bx + j]] = cy[i * by + g.map[j]];
        }
    }
    PointedMorphism::new(fx, fy, map)
}

/// An equivariant pointed bijection `a -> b`, if one exists.
pub fn find_isomorphism(a: &PointedModule, b: &PointedModule) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.num_generators() != b.num_generators() {
        return None;
    }
    let (ca, cb) = refine_colors(a, b);
    let mut ca_sorted = ca.clone();
    let mut cb_sorted = cb.clone();
    ca_sorted.sort();
    cb_sorted.sort();
    if ca_sorted != cb_sorted {
        return None;
    }
    let mut f = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    if !assign(a, b, &mut f, &mut used, a.basepoint, b.basepoint) {
        return None;
    }
    search(a, b, &ca, &cb, f, used)
}

fn search(
    a: &PointedModule,
    b: &PointedModule,
    ca: &[usize],
    cb: &[usize],
    f: Vec<usize>,
    used: Vec<bool>,
) -> Option<Vec<usize>> {
    let Some(x) = (0..a.len()).find(|&x| f[x] == usize::MAX) else {
        return Some(f);
    };
    for y in (0..b.len()).filter(|&y| !used[y] && cb[y] == ca[x]) {
        let mut f2 = f.clone();
        let mut used2 = used.clone();
        if assign(a, b, &mut f2, &mut used2, x, y) {
            if let Some(done) = search(a, b, ca, cb, f2, used2) {
                return Some(done);
            }
        }
    }
    None
}

/// Set `f(x) = y` and propagate along the actions.
fn assign(a: &PointedModule, b: &PointedModule, f: &mut [usize], used: &mut [bool], x: usize, y: usize) -> bool {
    let mut queue = VecDeque::from([(x, y)]);
    while let Some((x, y)) = queue.pop_front() {
        if f[x] != usize::MAX {
            if f[x] != y {
                return false;
            }
            continue;
        }
        if used[y] {
            return false;
        }
        f[x] = y;
        used[y] = true;
        for g in 0..a.num_generators() {
            queue.push_back((a.act(g, x), b.act(g, y)));
        }
    }
    true
}

/// Joint color refinement: elements that can correspond under an
/// isomorphism get equal colors.
fn refine_colors(a: &PointedModule, b: &PointedModule) -> (Vec<usize>, Vec<usize>) {
    let init = |m: &PointedModule| (0..m.len()).map(|x| usize::from(x == m.basepoint)).collect::<Vec<_>>();
    let (mut ca, mut cb) = (init(a), init(b));
    loop {
        let sig = |m: &PointedModule, c: &[usize], x: usize| {
            let fwd: Vec<usize> = (0..m.num_generators()).map(|g| c[m.act(g, x)]).collect();
            let back: Vec<Vec<usize>> = (0..m.num_generators())
                .map(|g| {
                    let mut v: Vec<usize> = (0..m.len()).filter(|&z| m.act(g, z) == x).map(|z| c[z]).collect();
                    v.sort();
                    v
                })
                .collect();
            (c[x], fwd, back)
        };
        let sa: Vec<_> = (0..a.len()).map(|x| sig(a, &ca, x)).collect();
        let sb: Vec<_> = (0..b.len()).map(|x| sig(b, &cb, x)).collect();
        let palette: BTreeSet<_> = sa.iter().chain(&sb).cloned().collect();
        let palette: Vec<_> = palette.into_iter().collect();
        let color = |s: &_| palette.binary_search(s).expect("in palette");
        let na: Vec<usize> = sa.iter().map(color).collect();
        let nb: Vec<usize> = sb.iter().map(color).collect();
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if classes(&na) + classes(&nb) == classes(&ca) + classes(&cb) {
            return (na, nb);
        }
        ca = na;
        cb = nb;
    }
}

pub fn is_isomorphic(a: &PointedModule, b: &PointedModule) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Every module with exactly `size` elements over `base`, one per
/// isomorphism class.
pub fn enumerate_modules(base: &AffineMonoid, size: usize) -> Vec<PointedModule> {
    let k = base.num_generators();
    if k == 0 {
        let labels = (0..size).map(|i| if i == 0 { "*".to_string() } else { i.to_string() }).collect();
        return vec![PointedModule { labels, basepoint: 0, actions: Vec::new() }];
    }
    let maps = pointed_maps(size);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut choice = vec![0usize; k];
    loop {
        let actions: Vec<Vec<usize>> = choice.iter().map(|&c| maps[c].clone()).collect();
        if let Ok(m) = PointedModule::from_maps(actions) {
            if m.validate(base).is_ok() && seen.insert(m.canonical_form()) {
                out.push(m);
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            choice[i] += 1;
            if choice[i] < maps.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// All maps on `0..size` fixing 0.
fn pointed_maps(size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; size];
    fn walk(i: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == size {
            out.push(cur.clone());
            return;
        }
        for y in 0..size {
            cur[i] = y;
            walk(i + 1, size, cur, out);
        }
    }
    if size > 0 {
        walk(1, size, &mut cur, &mut out);
    }
    out
}

/// Evidence that tensoring with a module does not preserve an injection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessWitness {
    pub sub: PointedModule,
    pub sup: PointedModule,
    /// inclusion `sub -> sup`
    pub inclusion: Vec<usize>,
    /// two distinct elements of `F ⊗ sub` with the same image
    pub collision: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub flat: bool,
    pub modules_checked: usize,
    pub injections_checked: usize,
    pub witness: Option<FlatnessWitness>,
}

/// Flatness by definition: `F ⊗ -` preserves every injection `X -> Y` with
/// `|Y| <= size_bound`. Every injection is isomorphic to the inclusion of a
/// submodule, so it suffices to run over modules `Y` up to isomorphism and
/// their submodules.
pub fn is_flat_bruteforce(f: &PointedModule, base: &AffineMonoid, size_bound: usize) -> Result<FlatnessReport> {
    f.validate(base)?;
    let mut report = FlatnessReport { flat: true, modules_checked: 0, injections_checked: 0, witness: None };
    for size in 1..=size_bound {
        for y in enumerate_modules(base, size) {
            report.modules_checked += 1;
            for set in y.submodules() {
                let (_, incl) = y.restrict(&set)?;
                report.injections_checked += 1;
                let t = tensor_morphism(f, &incl)?;
                if !t.is_injective() {
                    let (p, q) = first_collision(&t);
                    report.flat = false;
                    report.witness = Some(FlatnessWitness {
                        sub: incl.source.clone(),
                        sup: y.clone(),
                        inclusion: incl.map.clone(),
                        collision: (t.source.labels[p].clone(), t.source.labels[q].clone()),
                    });
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

fn first_collision(t: &PointedMorphism) -> (usize, usize) {
    let mut seen = BTreeMap::new();
    for (x, &y) in t.map.iter().enumerate() {
        if let Some(&p) = seen.get(&y) {
            return (p, x);
        }
        seen.insert(y, x);
    }
    unreachable!("map is not injective")
}
