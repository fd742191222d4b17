//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails or exceeds its time budget.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monoscheme::cone::fan::{dual_monoid, gallery};
use monoscheme::cone::{hilbert_basis, Cone};
use monoscheme::etale::{count_solutions_finite, etale_coverings_f1, finite_index_spec_bijection};
use monoscheme::lattice::{ints, rank};
use monoscheme::monoid::{AffineMonoid, Ambient};
use monoscheme::pointed::{enumerate_modules, is_flat_bruteforce, is_isomorphic, tensor, PointedModule};
use monoscheme::scheme::{cohomology_demo, SubgroupPair};
use monoscheme::valuation::{extend_valuation, valuations, FiniteExtension, ValuationHom};
use monoscheme::zeta::{point_count_oracle, zeta_exponents, zeta_factored, zeta_polynomial_fan};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn m(d: usize, t: &[i64], g: &[&[i64]]) -> AffineMonoid {
    AffineMonoid::from_i64(d, t, g).unwrap()
}

/// Closed-form point counts of the gallery varieties over F_q.
fn closed_form_count(name: &str, q: i64) -> i64 {
    match name {
        "A1" => q,
        "A2" => q * q,
        "P1" => q + 1,
        "P2" => q * q + q + 1,
        "P1xP1" | "F2" => (q + 1) * (q + 1),
        // the quadric cone x z = y^2 has q^2 points over every F_q
        "quadric" => q * q,
        _ => unreachable!(),
    }
}

/// Solutions of `x z = y^2` over the prime field `F_p`, counted directly.
fn quadric_points_prime(p: i64) -> i64 {
    let mut count = 0;
    for x in 0..p {
        for y in 0..p {
            for z in 0..p {
                if (x * z - y * y).rem_euclid(p) == 0 {
                    count += 1;
                }
            }
        }
    }
    count
}

fn criterion_1() -> Outcome {
    let expected_zeta = [
        ("A1", "(s-1)"),
        ("A2", "(s-2)"),
        ("P1", "s(s-1)"),
        ("P2", "s(s-1)(s-2)"),
        ("P1xP1", "s(s-1)^2(s-2)"),
        ("F2", "s(s-1)^2(s-2)"),
    ];
    let qs = [2i64, 3, 4, 5, 7, 8, 9];
    let gallery = gallery::all();
    for (name, zeta) in expected_zeta {
        let fan = &gallery.iter().find(|(n, _)| *n == name).unwrap().1;
        let poly = zeta_polynomial_fan(fan).unwrap();
        let c = zeta_exponents(fan).unwrap();
        for (j, cj) in c.0.iter().enumerate() {
            check(poly.coefficient(j) == *cj, || format!("{name}: c_{j} = {cj} but coefficient is {}", poly.coefficient(j)))?;
        }
        let rendered = zeta_factored(fan).unwrap().render();
        check(rendered == zeta, || format!("{name}: zeta = {rendered}, expected {zeta}"))?;
        for q in qs {
            let qb = BigInt::from(q);
            let n_q = poly.eval(&qb);
            let orbits = point_count_oracle(fan, &qb).unwrap();
            let closed = BigInt::from(closed_form_count(name, q));
            check(n_q == orbits && n_q == closed, || {
                format!("{name}, q = {q}: N(q) = {n_q}, orbit count = {orbits}, closed form = {closed}")
            })?;
        }
    }
    for p in [2, 3, 5, 7] {
        check(quadric_points_prime(p) == closed_form_count("quadric", p), || format!("quadric count over F_{p}"))?;
    }
    Ok(format!("{} fans, q in {qs:?}", expected_zeta.len()))
}

fn criterion_2() -> Outcome {
    let mut cones = 0;
    let mut faces_checked = 0;
    for (name, fan) in gallery::all() {
        let n = fan.lattice_rank();
        for sigma in fan.cones() {
            cones += 1;
            let faces = sigma.faces();
            let primes = dual_monoid(sigma).primes().len();
            check(primes == faces.len(), || format!("{name}: {} faces but {primes} primes", faces.len()))?;
            for tau in &faces {
                faces_checked += 1;
                let dual_face = sigma.dual_face(tau);
                let dim = rank(&dual_face, n);
                check(dim == n - tau.dim(), || format!("{name}: dual face of a {}-face has dim {dim}", tau.dim()))?;
            }
        }
    }
    Ok(format!("{cones} cones, {faces_checked} faces"))
}

fn criterion_3() -> Outcome {
    // (A, B ⊆ A, N with N A ⊆ B)
    let pairs = vec![
        ("<2,3> in C+", AffineMonoid::c_plus(), m(1, &[], &[&[2], &[3]]), 2),
        ("even sum in N^2", m(2, &[], &[&[1, 0], &[0, 1]]), m(2, &[], &[&[2, 0], &[1, 1], &[0, 2]]), 2),
        ("<(2,0),(0,1)> in N^2", m(2, &[], &[&[1, 0], &[0, 1]]), m(2, &[], &[&[2, 0], &[0, 1]]), 2),
        (
            "index 3 in N^2",
            m(2, &[], &[&[1, 0], &[0, 1]]),
            m(2, &[], &[&[3, 0], &[2, 1], &[1, 2], &[0, 3]]),
            3,
        ),
        ("quadric edge", m(2, &[], &[&[1, 0], &[1, 1], &[1, 2]]), m(2, &[], &[&[1, 0], &[1, 2]]), 2),
        ("torsion", m(1, &[2], &[&[1, 0], &[0, 1]]), m(1, &[2], &[&[1, 0]]), 2),
    ];
    for (name, a, b, n) in &pairs {
        let r = finite_index_spec_bijection(a, b, *n).map_err(|e| format!("{name}: {e}"))?;
        let spec_a = a.primes();
        let spec_b = b.primes();
        check(spec_a.len() == spec_b.len(), || format!("{name}: |spec A| = {}, |spec B| = {}", spec_a.len(), spec_b.len()))?;
        for (i, &j) in r.psi.iter().enumerate() {
            check(r.inverse[j] == i, || format!("{name}: inverse(psi(p{i})) = p{}", r.inverse[j]))?;
            // p ∩ B read off generator by generator: a generator of B lies in
            // the prime exactly when it leaves the face
            let p = &spec_a.primes()[i];
            let in_p: BTreeSet<usize> =
                (0..b.num_generators()).filter(|&k| !a.in_face(p, b.generator(k))).collect();
            check(in_p == spec_b.ideal_generators(j), || format!("{name}: psi(p{i}) is not p{i} ∩ B"))?;
        }
        for (j, &i) in r.inverse.iter().enumerate() {
            check(r.psi[i] == j, || format!("{name}: psi(inverse(q{j})) = q{}", r.psi[i]))?;
        }
        check(r.bijective, || format!("{name}: not reported bijective"))?;
    }
    Ok(format!("{} pairs", pairs.len()))
}

fn flat_disagreements(base: &AffineMonoid, size_bound: usize) -> (usize, Vec<PointedModule>) {
    let mut total = 0;
    let mut bad = Vec::new();
    for size in 1..=4 {
        for f in enumerate_modules(base, size) {
            total += 1;
            let brute = is_flat_bruteforce(&f, base, size_bound).unwrap();
            if brute.flat != f.is_flat() {
                bad.push(f);
            }
        }
    }
    (total, bad)
}

fn criterion_4() -> Outcome {
    let bases = [("C+", AffineMonoid::c_plus()), ("N^2", m(2, &[], &[&[1, 0], &[0, 1]]))];
    let mut total = 0;
    let mut failures = Vec::new();
    let mut resolved_at_5 = true;
    for (name, base) in &bases {
        let (count, bad) = flat_disagreements(base, 4);
        total += count;
        for f in bad {
            resolved_at_5 &= is_flat_bruteforce(&f, base, 5).unwrap().flat == f.is_flat();
            failures.push(format!("{name} {:?}", f.actions()));
        }
    }
    if failures.is_empty() {
        Ok(format!("{total} modules"))
    } else {
        Err(format!(
            "{} of {total} modules disagree with injections of size <= 4: {}; with size <= 5 {}",
            failures.len(),
            failures.join(", "),
            if resolved_at_5 { "all agree" } else { "some still disagree" }
        ))
    }
}

fn criterion_5() -> Outcome {
    let base = AffineMonoid::c_plus();
    let modules: Vec<PointedModule> = (1..=4).flat_map(|k| enumerate_modules(&base, k)).collect();
    for x in &modules {
        let unit = PointedModule::unit_for(&base, x).unwrap();
        check(is_isomorphic(&tensor(&unit, x).unwrap(), x), || format!("A ⊗ M ≇ M for {:?}", x.actions()))?;
    }
    let mut products = Vec::new();
    for x in &modules {
        for y in &modules {
            let xy = tensor(x, y).unwrap();
            check(is_isomorphic(&xy, &tensor(y, x).unwrap()), || {
                format!("M ⊗ N ≇ N ⊗ M for {:?}, {:?}", x.actions(), y.actions())
            })?;
            products.push(xy);
        }
    }
    let n = modules.len();
    let mut triples = 0;
    for (i, x) in modules.iter().enumerate() {
        for (j, y) in modules.iter().enumerate() {
            let xy = &products[i * n + j];
            for (k, z) in modules.iter().enumerate() {
                let left = tensor(xy, z).unwrap();
                let right = tensor(x, &products[j * n + k]).unwrap();
                check(is_isomorphic(&left, &right), || {
                    format!("associativity fails for {:?}, {:?}, {:?}", x.actions(), y.actions(), z.actions())
                })?;
                triples += 1;
            }
        }
    }
    Ok(format!("{n} modules, {triples} triples"))
}

fn criterion_6() -> Outcome {
    let checks = etale_coverings_f1(12).unwrap();
    let accepted: Vec<u64> = checks.iter().filter(|c| c.covering).map(|c| c.order).collect();
    check(accepted == (1..=12).collect::<Vec<_>>(), || format!("accepted orders {accepted:?}"))?;
    let mut rejected = 0;
    for c in &checks {
        check(c.covering == c.cyclic, || format!("{:?}: covering = {}", c.invariants, c.covering))?;
        if c.cyclic {
            continue;
        }
        rejected += 1;
        let (n, count) = c.violation.clone().ok_or_else(|| format!("{:?}: no violation witness", c.invariants))?;
        // list the group and count solutions of n x = 0 directly
        let moduli: Vec<BigInt> = c.invariants.iter().map(|&d| BigInt::from(d)).collect();
        let g = AffineMonoid::finite_group(&moduli).unwrap();
        let listed = count_solutions_finite(&g, n, &vec![BigInt::zero(); moduli.len()]).unwrap();
        check(BigInt::from(listed) == count && listed as u64 > n, || {
            format!("{:?}: witness n = {n} claims {count} solutions, listing finds {listed}", c.invariants)
        })?;
    }
    Ok(format!("12 cyclic groups accepted, {rejected} non-cyclic rejected"))
}

/// Homomorphisms to C+ by brute force: integer value vectors in a box that
/// come from a linear functional on the free parts of the generators.
fn brute_valuations(a: &AffineMonoid, max_value: i64) -> Vec<ValuationHom> {
    let d = a.ambient().free_rank();
    let free: Vec<Vec<BigInt>> = a.generators().iter().map(|g| g[..d].to_vec()).collect();
    let k = free.len();
    let base_rank = rank(&free, d);
    let is_hom = |w: &[i64]| {
        let rows: Vec<Vec<BigInt>> = free
            .iter()
            .zip(w)
            .map(|(g, &x)| {
                let mut r = g.clone();
                r.push(BigInt::from(x));
                r
            })
            .collect();
        rank(&rows, d + 1) == base_rank
    };
    let mut homs: Vec<Vec<i64>> = Vec::new();
    let mut w = vec![0i64; k];
    loop {
        if w.iter().any(|&x| x != 0) && is_hom(&w) {
            homs.push(w.clone());
        }
        let mut i = 0;
        while i < k && w[i] == max_value {
            w[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        w[i] += 1;
    }
    let leq = |u: &[i64], v: &[i64]| u.iter().zip(v).all(|(x, y)| x <= y);
    let mut out: Vec<ValuationHom> = homs
        .iter()
        .filter(|v| !homs.iter().any(|u| u != *v && leq(u, v)))
        .map(|v| ValuationHom::from_i64(v))
        .collect();
    out.sort();
    out
}

/// Writes `x` as a nonnegative combination of generators, by search.
fn combination(a: &AffineMonoid, x: &[BigInt], max_coeff: i64) -> Option<Vec<i64>> {
    let k = a.num_generators();
    let amb = a.ambient();
    let mut c = vec![0i64; k];
    loop {
        let sum = c.iter().zip(a.generators()).fold(amb.zero(), |acc, (n, g)| amb.add(&acc, &amb.scale(&BigInt::from(*n), g)));
        if sum == amb.normalize(x).unwrap() {
            return Some(c);
        }
        let mut i = 0;
        while i < k && c[i] == max_coeff {
            c[i] = 0;
            i += 1;
        }
        if i == k {
            return None;
        }
        c[i] += 1;
    }
}

fn value(v: &ValuationHom, c: &[i64]) -> BigInt {
    v.values.iter().zip(c).map(|(x, n)| x * BigInt::from(*n)).sum()
}

fn criterion_7() -> Outcome {
    let ext = |sub: AffineMonoid, sup: AffineMonoid| FiniteExtension::new(sub, sup).unwrap();
    let cases = vec![
        ("<2> in N", ext(m(1, &[], &[&[2]]), AffineMonoid::c_plus())),
        ("split Z/2", ext(m(1, &[2], &[&[1, 0]]), m(1, &[2], &[&[1, 0], &[0, 1]]))),
        ("<3> in N", ext(m(1, &[], &[&[3]]), AffineMonoid::c_plus())),
        ("<4> in N", ext(m(1, &[], &[&[4]]), AffineMonoid::c_plus())),
        ("Z/4 with n = 2", ext(m(1, &[4], &[&[2, 0]]), m(1, &[4], &[&[1, 1], &[0, 2]]))),
        ("<6> in N", ext(m(1, &[], &[&[6]]), AffineMonoid::c_plus())),
        ("<(6,0),(0,1)> in N^2", ext(m(2, &[], &[&[6, 0], &[0, 1]]), m(2, &[], &[&[1, 0], &[0, 1]]))),
    ];
    let mut orders = BTreeSet::new();
    let mut extended = 0;
    for (name, e) in &cases {
        let inv = e.quotient_invariants();
        check(inv.len() == 1, || format!("{name}: quotient {inv:?} is not cyclic"))?;
        let l = inv[0].clone();
        orders.insert(l.to_u64().unwrap());
        let va = brute_valuations(e.sub(), 6);
        let vb = brute_valuations(e.sup(), 6);
        check(va == valuations(e.sub()), || format!("{name}: V(A) differs from brute force"))?;
        check(vb == valuations(e.sup()), || format!("{name}: V(B) differs from brute force"))?;
        let mut images = Vec::new();
        for v in &va {
            let r = extend_valuation(v, e).map_err(|err| format!("{name}: {err}"))?;
            extended += 1;
            let step = &r.steps[0];
            // n = v(l b0), recomputed from a decomposition of l b0 in A
            let lb0 = e.sup().ambient().scale(&l, &step.b0);
            let c = combination(e.sub(), &lb0, 12).ok_or_else(|| format!("{name}: l b0 not found in A"))?;
            let n = value(v, &c);
            let k = &l / l.gcd(&n);
            check(step.n == n && r.k == k, || format!("{name}: n = {}, k = {} but expected n = {n}, k = {k}", step.n, r.k))?;
            for (j, g) in e.sub().generators().iter().enumerate() {
                let cb = combination(e.sup(), g, 12).ok_or_else(|| format!("{name}: generator of A not found in B"))?;
                check(value(&r.w, &cb) == &k * &v.values[j], || format!("{name}: w|A != v^k on generator {j}"))?;
            }
            images.push(r.w);
        }
        images.sort();
        let distinct: BTreeSet<&ValuationHom> = images.iter().collect();
        check(distinct.len() == images.len() && images == vb, || {
            format!("{name}: V(A) -> V(B) is not a bijection: {images:?} vs {vb:?}")
        })?;
    }
    check(orders == BTreeSet::from([2, 3, 4, 6]), || format!("orders covered: {orders:?}"))?;
    // not every cyclic extension behaves this way; report the known exception
    let plane = ext(m(2, &[], &[&[4, 0], &[2, 1], &[0, 2]]), m(2, &[], &[&[1, 0], &[0, 1]]));
    let corr = monoscheme::valuation::valuation_correspondence(&plane).map_err(|e| e.to_string())?;
    Ok(format!(
        "{} extensions, {extended} valuations extended, l in {orders:?} (note: <(4,0),(2,1),(0,2)> in N^2 has bijective = {})",
        cases.len(),
        corr.bijective
    ))
}

fn criterion_8() -> Outcome {
    for n in 2..=12i64 {
        let pair = SubgroupPair { ambient: Ambient::free(1), a_generators: vec![ints(&[n])], b_generators: None };
        let r = cohomology_demo(&pair).unwrap();
        check(r.c_order == BigInt::from(n), || format!("n = {n}: |C| = {}", r.c_order))?;
        check(r.exact() && r.flip_is_inversion, || format!("n = {n}: {r:?}"))?;
        // direct check with residues: b -> (b, b), (x, y) -> x - y, flip (y, x)
        let image: BTreeSet<(i64, i64)> = (0..n).map(|b| (b, b)).collect();
        for x in 0..n {
            for y in 0..n {
                let d = (x - y).rem_euclid(n);
                check((d == 0) == image.contains(&(x, y)), || format!("n = {n}: exactness at C x C"))?;
                check((y - x).rem_euclid(n) == (-d).rem_euclid(n), || format!("n = {n}: flip"))?;
            }
        }
        check(r.flip_is_identity == (n == 2), || format!("n = {n}: inversion identity flag"))?;
    }
    Ok("C = Z/2 .. Z/12".into())
}

/// Irreducible elements of `σ^∨ ∩ Z^2` from a bounding box.
fn brute_hilbert_2d(r1: [i64; 2], r2: [i64; 2]) -> BTreeSet<Vec<i64>> {
    let inside = |x: [i64; 2]| x[0] * r1[0] + x[1] * r1[1] >= 0 && x[0] * r2[0] + x[1] * r2[1] >= 0;
    // primitive inward normals of the two edges span the dual cone
    let normal = |a: [i64; 2], other: [i64; 2]| {
        let mut n = [-a[1], a[0]];
        if n[0] * other[0] + n[1] * other[1] < 0 {
            n = [a[1], -a[0]];
        }
        let g = n[0].gcd(&n[1]);
        [n[0] / g, n[1] / g]
    };
    let u1 = normal(r1, r2);
    let u2 = normal(r2, r1);
    let b = u1[0].abs() + u2[0].abs() + u1[1].abs() + u2[1].abs();
    let members: Vec<[i64; 2]> = (-b..=b)
        .flat_map(|x| (-b..=b).map(move |y| [x, y]))
        .filter(|&p| p != [0, 0] && inside(p))
        .collect();
    let set: BTreeSet<[i64; 2]> = members.iter().copied().collect();
    members
        .iter()
        .filter(|&&x| !members.iter().any(|&y| y != x && inside([x[0] - y[0], x[1] - y[1]]) && set.contains(&y) && [x[0] - y[0], x[1] - y[1]] != [0, 0]))
        .map(|x| x.to_vec())
        .collect()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20081);
    let mut cones = vec![([1i64, 0], [1i64, 2])];
    while cones.len() < 6 {
        let mut v = || [rng.gen_range(-10..=10i64), rng.gen_range(-10..=10i64)];
        let (a, b) = (v(), v());
        if a[0] * b[1] - a[1] * b[0] != 0 {
            cones.push((a, b));
        }
    }
    for (r1, r2) in &cones {
        let sigma = Cone::from_i64(2, &[r1, r2]).unwrap();
        let hb: BTreeSet<Vec<i64>> =
            hilbert_basis(&sigma.dual_cone()).iter().map(|x| x.iter().map(|c| c.to_i64().unwrap()).collect()).collect();
        let brute = brute_hilbert_2d(*r1, *r2);
        check(hb == brute, || format!("cone {r1:?}, {r2:?}: {hb:?} vs {brute:?}"))?;
    }
    let quadric: BTreeSet<Vec<i64>> = [vec![0, 1], vec![1, 0], vec![2, -1]].into_iter().collect();
    check(brute_hilbert_2d([1, 0], [1, 2]) == quadric, || "quadric dual basis".into())?;
    Ok(format!("quadric plus {} random cones", cones.len() - 1))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "zeta exponents and point counts", Duration::from_secs(1), criterion_1),
        (2, "faces, primes and dual face dimensions", Duration::from_secs(1), criterion_2),
        (3, "spectra of finite-index submonoids", Duration::from_secs(1), criterion_3),
        (4, "flatness: injectivity vs injection test", Duration::from_secs(60), criterion_4),
        (5, "tensor unit, commutativity, associativity", Duration::from_secs(60), criterion_5),
        (6, "etale coverings of F1 up to degree 12", Duration::from_secs(5), criterion_6),
        (7, "extension of valuations", Duration::from_secs(1), criterion_7),
        (8, "three-point space cohomology", Duration::from_secs(1), criterion_8),
        (9, "Hilbert bases against brute force", Duration::from_secs(10), criterion_9),
    ];
    let mut failed = 0;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took longer than {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {id} {status} {name} [{elapsed:.2?}]: {detail}");
    }
    println!("{failed} of 9 criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
