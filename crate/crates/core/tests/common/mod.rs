//! Independent oracles: small-integer linear algebra on i128 and a quotient
//! complex for free actions. Nothing here calls the library's algebra.
#![allow(dead_code)]

pub mod numeric;

use std::collections::BTreeSet;

use bredon_core::arrangement::EquivariantComplex;
use bredon_core::exactla::IntMatrix;

pub type Mat = Vec<Vec<i128>>;

pub fn to_mat(m: &IntMatrix) -> Mat {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| i128::try_from(x).unwrap()).collect()).collect()
}

pub fn from_mat(m: &Mat, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(m.len(), cols, |i, j| m[i][j].into())
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Invariant factors by repeated smallest-pivot gcd reduction.
pub fn naive_invariant_factors(m: &Mat, cols: usize) -> Vec<i128> {
    let mut a = m.clone();
    let rows = a.len();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let p = a[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let f = a[i][t] / p;
            for j in t..cols {
                a[i][j] -= f * a[t][j];
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let f = a[t][j] / p;
            for i in t..rows {
                a[i][j] -= f * a[i][t];
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest; otherwise fold an offending row in
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

fn det(m: &Mat) -> i128 {
    // fraction-free Gaussian elimination
    let n = m.len();
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// d_k = gcd of all k×k minors, for k = 1.. while nonzero.
pub fn determinantal_divisors(m: &Mat, cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        let rs = subsets(rows, k);
        let cs = subsets(cols, k);
        for r in &rs {
            for c in &cs {
                let sub: Mat = r.iter().map(|&i| c.iter().map(|&j| m[i][j]).collect()).collect();
                g = gcd(g, det(&sub));
                if g == 1 {
                    break;
                }
            }
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            break;
        }
        out.push(g);
    }
    out
}

/// Rank over Q.
pub fn rank(m: &Mat, cols: usize) -> usize {
    let mut a = m.clone();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let (x, y) = (a[r][c], a[i][c]);
                let g = gcd(x, y);
                for j in 0..cols {
                    a[i][j] = a[i][j] * (x / g) - a[r][j] * (y / g);
                }
                let h = a[i].iter().fold(0, |h, &v| gcd(h, v));
                if h > 1 {
                    for v in a[i].iter_mut() {
                        *v /= h;
                    }
                }
            }
        }
        r += 1;
    }
    r
}

/// |Z^n / (column span of m + N·Z^n)|, by enumerating the span mod N.
pub fn quotient_size_mod(m: &Mat, n: usize, cols: usize, modulus: i128) -> u64 {
    let norm = |v: Vec<i128>| v.into_iter().map(|x| x.rem_euclid(modulus)).collect::<Vec<_>>();
    let gens: Vec<Vec<i128>> = (0..cols).map(|j| norm((0..n).map(|i| m[i][j]).collect())).collect();
    let mut seen: BTreeSet<Vec<i128>> = BTreeSet::from([vec![0; n]]);
    let mut stack = vec![vec![0; n]];
    while let Some(v) = stack.pop() {
        for g in &gens {
            let w = norm(v.iter().zip(g).map(|(a, b)| a + b).collect());
            if seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    (modulus as u64).pow(n as u32) / seen.len() as u64
}

/// Cellular cochain complex of X/W for a free action: one cell per orbit,
/// coboundary entries summed over the orbit with orientation signs.
pub fn quotient_coboundaries(c: &EquivariantComplex) -> (Vec<usize>, Vec<Mat>) {
    let g = c.group();
    let n = c.dim();
    let reps: Vec<Vec<usize>> = (0..=n).map(|k| c.orbits(k).iter().map(|o| o[0]).collect()).collect();
    // which orbit each cell lies in, and the sign relating it to w·rep
    let mut place: Vec<Vec<(usize, i128)>> = (0..=n).map(|k| vec![(usize::MAX, 0); c.count(k)]).collect();
    for k in 0..=n {
        for (oi, &r) in reps[k].iter().enumerate() {
            for w in g.elements() {
                let (z, s) = c.act(w, k, r);
                place[k][z] = (oi, s as i128);
            }
        }
    }
    let mut ds = Vec::new();
    for k in 0..n {
        let mut d = vec![vec![0i128; reps[k].len()]; reps[k + 1].len()];
        for (zi, &z) in reps[k + 1].iter().enumerate() {
            for y in 0..c.count(k) {
                let e = i128::try_from(&c.incidence(k)[(y, z)]).unwrap();
                if e != 0 {
                    let (yi, s) = place[k][y];
                    d[zi][yi] += e * s;
                }
            }
        }
        ds.push(d);
    }
    (reps.iter().map(Vec::len).collect(), ds)
}

/// (rank, torsion) of ker(d_out)/im(d_in) from naive invariant factors.
pub fn naive_cohomology(dims: &[usize], ds: &[Mat], j: usize) -> (usize, Vec<i128>) {
    let n = dims[j];
    let r_out = if j < ds.len() { rank(&ds[j], n) } else { 0 };
    let (r_in, torsion) = if j > 0 {
        let f = naive_invariant_factors(&ds[j - 1], dims[j - 1]);
        (f.len(), f.into_iter().filter(|&d| d > 1).collect())
    } else {
        (0, Vec::new())
    };
    (n - r_out - r_in, torsion)
}

/// Finite group generated by permutations, in breadth-first order.
pub fn perm_group(gens: &[Vec<usize>]) -> bredon_core::groups::Group {
    use std::collections::BTreeMap;
    let n = gens[0].len();
    let id: Vec<usize> = (0..n).collect();
    let mut elems = vec![id.clone()];
    let mut index = BTreeMap::from([(id, 0usize)]);
    let mut head = 0;
    while head < elems.len() {
        for g in gens {
            let y: Vec<usize> = (0..n).map(|i| g[elems[head][i]]).collect();
            if !index.contains_key(&y) {
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
        head += 1;
    }
    let mut table = Vec::new();
    for a in &elems {
        for b in &elems {
            let ab: Vec<usize> = (0..n).map(|i| a[b[i]]).collect();
            table.push(index[&ab]);
        }
    }
    let gi = gens.iter().map(|g| index[g]).collect();
    bredon_core::groups::Group::from_table(elems.len(), table, gi).unwrap()
}

fn cycle(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|i| (i + k) % n).collect()
}

/// Small groups of order at most 16 as permutation groups.
pub fn small_groups() -> Vec<(&'static str, bredon_core::groups::Group)> {
    let refl = |n: usize| (0..n).map(|i| (n - i) % n).collect::<Vec<_>>();
    let prod = |a: Vec<usize>, b: Vec<usize>| {
        let (na, nb) = (a.len(), b.len());
        let mut g: Vec<usize> = a.clone();
        g.extend(b.iter().map(|&x| x + na));
        let _ = nb;
        g
    };
    let id = |n: usize| (0..n).collect::<Vec<_>>();
    // quaternion group acting on itself: i ↦ left multiplication
    let q8_i = vec![2, 3, 1, 0, 6, 7, 5, 4];
    let q8_j = vec![4, 5, 7, 6, 1, 0, 2, 3];
    vec![
        ("C1", perm_group(&[id(1)])),
        ("C2", perm_group(&[cycle(2, 1)])),
        ("C3", perm_group(&[cycle(3, 1)])),
        ("C4", perm_group(&[cycle(4, 1)])),
        ("C2xC2", perm_group(&[prod(cycle(2, 1), id(2)), prod(id(2), cycle(2, 1))])),
        ("S3", perm_group(&[cycle(3, 1), refl(3)])),
        ("C6", perm_group(&[cycle(6, 1)])),
        ("D8", perm_group(&[cycle(4, 1), refl(4)])),
        ("Q8", perm_group(&[q8_i, q8_j])),
        ("C2xC4", perm_group(&[prod(cycle(2, 1), id(4)), prod(id(2), cycle(4, 1))])),
        ("C8", perm_group(&[cycle(8, 1)])),
        ("D16", perm_group(&[cycle(8, 1), refl(8)])),
        ("D8xC2", perm_group(&[prod(cycle(4, 1), id(2)), prod(refl(4), id(2)), prod(id(4), cycle(2, 1))])),
    ]
}
