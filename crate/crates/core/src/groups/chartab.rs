//! Exact character tables.
//!
//! Ordinary tables are found by diagonalizing the class-multiplication
//! matrices modulo a prime p ≡ 1 (mod exponent) and lifting each character
//! value back to Z[ζ_e] through its eigenvalue multiplicities. The result is
//! then checked against the orthogonality relations in exact arithmetic.
//! Twisted tables are the part of the central extension's table on which the
//! central μ_m acts tautologically.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{Cocycle, Group};
use crate::cyclo::Cyclo;
use crate::error::{invalid, violated, Error, Result};
use crate::exactla::IntMatrix;

pub const DEFAULT_ORDER_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub degree: usize,
    /// One value per element of the table's group, aligned with `CharTable::elements`.
    pub values: Vec<Cyclo>,
}

/// Irreducible (twisted) characters of a subgroup of some ambient group.
#[derive(Clone, Debug)]
pub struct CharTable {
    /// Ambient indices of the subgroup's elements, sorted.
    pub elements: Vec<usize>,
    /// Conjugacy classes carrying the table: all classes for an ordinary
    /// table, the γ-regular ones for a twisted table.
    pub classes: Vec<Vec<usize>>,
    pub irr: Vec<Character>,
}

impl CharTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn len(&self) -> usize {
        self.irr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irr.is_empty()
    }

    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    /// χ_i at the ambient element `g`.
    pub fn value(&self, i: usize, g: usize) -> &Cyclo {
        &self.irr[i].values[self.position(g).expect("element outside the table's group")]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.irr.iter().map(|c| c.degree).collect()
    }
}

/// (1/|H|) Σ_{h∈H} f(h) · conj(g(h)), required to be an integer.
fn inner(elems: &[usize], f: impl Fn(usize) -> Cyclo, g: impl Fn(usize) -> Cyclo) -> Result<i64> {
    let mut acc = Cyclo::zero(1);
    for &h in elems {
        acc = acc.add(&f(h).mul(&g(h).conj()));
    }
    acc.div_int(elems.len() as i64)
        .and_then(|x| x.as_int())
        .ok_or_else(|| violated!("character inner product is not an integer"))
}

/// Ordinary irreducible characters of `g` as (degree, value per element),
/// values in Z[ζ_e] for the exponent e.
pub fn ordinary_irreducibles(g: &Group) -> Result<Vec<Character>> {
    let n = g.order();
    if n == 1 {
        return Ok(vec![Character { degree: 1, values: vec![Cyclo::int(1, 1)] }]);
    }
    let classes = g.classes();
    let r = classes.len();
    let mut class_of = vec![0usize; n];
    for (k, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = k;
        }
    }
    let e = g.exponent();
    let p = pick_prime(e, 2 * n as u64 + 1);
    let z = primitive_root(p).pow_mod((p - 1) / e as u64, p);

    // M_i[j][k] = #{x ∈ K_i : x⁻¹ g_k ∈ K_j}
    let mut mats = vec![vec![vec![0u64; r]; r]; r];
    for (i, ci) in classes.iter().enumerate() {
        for (k, ck) in classes.iter().enumerate() {
            for &x in ci {
                let y = g.mul(g.inv(x), ck[0]);
                mats[i][class_of[y]][k] += 1;
            }
        }
    }
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![identity_rows(r)];
    for m in mats.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
            } else {
                next.extend(split(&s, m, p)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(violated!("class matrices did not split into {r} common eigenvectors"));
    }

    let inv_class: Vec<usize> = classes.iter().map(|c| class_of[g.inv(c[0])]).collect();
    let mut out = Vec::with_capacity(r);
    for s in spaces {
        let mut w = s[0].clone();
        let lead = inv_mod(w[0], p).ok_or_else(|| violated!("degenerate central character"))?;
        for x in w.iter_mut() {
            *x = *x * lead % p;
        }
        let mut sum = 0u64;
        for k in 0..r {
            let term = w[k] * w[inv_class[k]] % p * inv_mod(classes[k].len() as u64 % p, p).unwrap() % p;
            sum = (sum + term) % p;
        }
        let d2 = (n as u64 % p) * inv_mod(sum, p).ok_or_else(|| violated!("degenerate degree"))? % p;
        let d = (1..=n as u64)
            .take_while(|d| d * d <= n as u64)
            .find(|d| d * d % p == d2)
            .ok_or_else(|| violated!("no character degree matches"))?;
        let chi_mod: Vec<u64> =
            (0..r).map(|k| d * w[k] % p * inv_mod(classes[k].len() as u64 % p, p).unwrap() % p).collect();
        let mut class_vals = Vec::with_capacity(r);
        for c in &classes {
            let x = c[0];
            let o = g.element_order(x);
            let zo = z.pow_mod((e / o) as u64, p);
            let mut coeffs = vec![0i64; e];
            for j in 0..o {
                let mut acc = 0u64;
                let mut pw = 0usize;
                for l in 0..o {
                    let root = zo.pow_mod(((o - (j * l) % o) % o) as u64, p);
                    acc = (acc + chi_mod[class_of[pw]] * root) % p;
                    pw = g.mul(pw, x);
                }
                let mult = acc * inv_mod(o as u64 % p, p).unwrap() % p;
                if mult > d {
                    return Err(violated!("eigenvalue multiplicity {mult} exceeds degree {d}"));
                }
                coeffs[j * (e / o)] += mult as i64;
            }
            class_vals.push(Cyclo::from_coeffs(e, coeffs));
        }
        let values = (0..n).map(|x| class_vals[class_of[x]].clone()).collect();
        out.push(Character { degree: d as usize, values });
    }
    sort_characters(&mut out);
    check_ordinary(g, &classes, &out)?;
    Ok(out)
}

/// Degree ascending, then values descending so that the trivial character
/// leads.
fn sort_characters(chars: &mut [Character]) {
    chars.sort_by(|a, b| {
        let key = |c: &Character| -> Vec<Vec<i64>> { c.values.iter().map(|v| v.canonical()).collect() };
        a.degree.cmp(&b.degree).then_with(|| key(b).cmp(&key(a)))
    });
}

fn check_ordinary(g: &Group, classes: &[Vec<usize>], chars: &[Character]) -> Result<()> {
    let all: Vec<usize> = g.elements().collect();
    let mut sq = 0;
    for (i, a) in chars.iter().enumerate() {
        sq += a.degree * a.degree;
        for (j, b) in chars.iter().enumerate() {
            let ip = inner(&all, |x| a.values[x].clone(), |x| b.values[x].clone())?;
            if ip != (i == j) as i64 {
                return Err(violated!("row orthogonality fails for characters {i}, {j}"));
            }
        }
    }
    if sq != g.order() || chars.len() != classes.len() {
        return Err(violated!("degrees do not account for the group order"));
    }
    Ok(())
}

/// Irreducible γ-characters of the subgroup on `elems` (sorted ambient
/// indices, containing 0). `cap` bounds the subgroup order.
pub fn character_table(g: &Group, elems: &[usize], gamma: &Cocycle, cap: usize) -> Result<CharTable> {
    if elems.len() > cap {
        return Err(Error::GroupTooLarge { order: elems.len(), cap });
    }
    let h = g.subgroup(elems)?;
    let local = gamma.restrict(elems);
    local.validate(&h)?;
    let m = local.modulus() as usize;

    let irr: Vec<Character> = if local.is_trivial() {
        ordinary_irreducibles(&h)?
    } else {
        let ext = local.central_extension(&h);
        let zeta = Cyclo::root(m, 1);
        let mut out = Vec::new();
        for c in ordinary_irreducibles(&ext)? {
            // (1, identity) has index 1 in the extension
            if c.values[1] == zeta.scale(c.degree as i64) {
                out.push(Character { degree: c.degree, values: (0..h.order()).map(|x| c.values[x * m].clone()).collect() });
            }
        }
        sort_characters(&mut out);
        out
    };

    let classes: Vec<Vec<usize>> = g
        .classes_within(elems)
        .into_iter()
        .filter(|c| {
            let x = c[0];
            elems.iter().all(|&y| g.mul(x, y) != g.mul(y, x) || gamma.exponent(x, y) == gamma.exponent(y, x))
        })
        .collect();

    let table = CharTable { elements: elems.to_vec(), classes, irr };
    let sq: usize = table.irr.iter().map(|c| c.degree * c.degree).sum();
    if sq != elems.len() {
        return Err(violated!("Σ d² = {sq} for a group of order {}", elems.len()));
    }
    if table.irr.len() != table.classes.len() {
        return Err(violated!(
            "{} twisted irreducibles but {} γ-regular classes",
            table.irr.len(),
            table.classes.len()
        ));
    }
    for i in 0..table.len() {
        for j in 0..table.len() {
            let ip = inner(elems, |x| table.value(i, x).clone(), |x| table.value(j, x).clone())?;
            if ip != (i == j) as i64 {
                return Err(violated!("twisted orthogonality fails for characters {i}, {j}"));
            }
        }
    }
    Ok(table)
}

/// Rows index irreducibles of `small`, columns those of `big`; entry (i, j) is
/// the multiplicity of small_i in the restriction of big_j.
pub fn restriction_matrix(big: &CharTable, small: &CharTable) -> Result<IntMatrix> {
    if small.elements.iter().any(|x| big.position(*x).is_none()) {
        return Err(invalid!("restriction to a set that is not a subgroup of the table's group"));
    }
    let mut m = IntMatrix::zeros(small.len(), big.len());
    for j in 0..big.len() {
        for i in 0..small.len() {
            let k = inner(&small.elements, |x| big.value(j, x).clone(), |x| small.value(i, x).clone())?;
            if k < 0 {
                return Err(violated!("negative restriction multiplicity"));
            }
            m[(i, j)] = BigInt::from(k);
        }
        let deg: i64 = (0..small.len()).map(|i| i64::try_from(&m[(i, j)]).unwrap() * small.irr[i].degree as i64).sum();
        if deg != big.irr[j].degree as i64 {
            return Err(violated!("restriction does not preserve degree"));
        }
    }
    Ok(m)
}

/// Matrix of π ↦ ʷπ from the irreducibles of `src` (group H) to those of
/// `dst` (group wHw⁻¹), where
/// ʷπ(v) = conj(γ(w⁻¹,w)) γ(w⁻¹,v) γ(w⁻¹v,w) π(w⁻¹vw).
pub fn conjugation_matrix(g: &Group, gamma: &Cocycle, w: usize, src: &CharTable, dst: &CharTable) -> Result<IntMatrix> {
    if g.conjugate_subgroup(w, &src.elements) != dst.elements {
        return Err(invalid!("stabilizer mismatch: target is not the conjugate subgroup"));
    }
    let wi = g.inv(w);
    let twist = |v: usize| -> Cyclo {
        gamma
            .value(wi, w)
            .conj()
            .mul(&gamma.value(wi, v))
            .mul(&gamma.value(g.mul(wi, v), w))
    };
    let mut m = IntMatrix::zeros(dst.len(), src.len());
    for j in 0..src.len() {
        let image = |v: usize| twist(v).mul(src.value(j, g.mul(g.mul(wi, v), w)));
        let mut hits = 0;
        for i in 0..dst.len() {
            let k = inner(&dst.elements, image, |x| dst.value(i, x).clone())?;
            if k != 0 {
                m[(i, j)] = BigInt::from(k);
                hits += k;
            }
        }
        if hits != 1 {
            return Err(violated!("conjugate of an irreducible is not irreducible"));
        }
    }
    Ok(m)
}

/// Irreducibles π of the table's group with π(v) = conj(ι(v))·id on the normal
/// subgroup `normal`; `iota` lists ι on `normal` in the same order.
pub fn lying_over_basis(
    g: &Group,
    gamma: &Cocycle,
    table: &CharTable,
    normal: &[usize],
    iota: &[Cyclo],
) -> Result<Vec<usize>> {
    if normal.len() != iota.len() {
        return Err(invalid!("ι must be given on every element of the normal subgroup"));
    }
    if !g.is_subgroup(normal) || normal.iter().any(|x| table.position(*x).is_none()) {
        return Err(invalid!("lying-over subgroup is not a subgroup of the table's group"));
    }
    if !g.is_normal_in(normal, &table.elements) {
        return Err(invalid!("lying-over subgroup is not normal"));
    }
    let at: BTreeMap<usize, &Cyclo> = normal.iter().copied().zip(iota).collect();
    // ι(u)ι(v) = conj(γ(u,v)) ι(uv)
    for &u in normal {
        for &v in normal {
            if at[&u].mul(at[&v]) != gamma.value(u, v).conj().mul(at[&g.mul(u, v)]) {
                return Err(invalid!("ι is not a one-dimensional conj(γ)-character on the normal subgroup"));
            }
        }
    }
    // stability: ι(wvw⁻¹) = ι(v) γ(wv,w⁻¹) γ(w,v) conj(γ(w,w⁻¹))
    for &w in &table.elements {
        let wi = g.inv(w);
        for &v in normal {
            let rhs = at[&v]
                .mul(&gamma.value(g.mul(w, v), wi))
                .mul(&gamma.value(w, v))
                .mul(&gamma.value(w, wi).conj());
            if *at[&g.conj(w, v)] != rhs {
                return Err(invalid!("ι is not stable under conjugation by element {w}"));
            }
        }
    }
    Ok((0..table.len())
        .filter(|&i| {
            let d = table.irr[i].degree as i64;
            normal.iter().zip(iota).all(|(&v, io)| *table.value(i, v) == io.conj().scale(d))
        })
        .collect())
}

fn identity_rows(r: usize) -> Vec<Vec<u64>> {
    (0..r).map(|i| (0..r).map(|j| (i == j) as u64).collect()).collect()
}

/// Splits an invariant subspace (rows in reduced echelon form) into the
/// eigenspaces of `m` acting on column vectors.
fn split(basis: &[Vec<u64>], m: &[Vec<u64>], p: u64) -> Result<Vec<Vec<Vec<u64>>>> {
    let d = basis.len();
    let r = m.len();
    let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
    // matrix of m in the basis: coordinates of m·b_i are its pivot entries
    let mut rep = vec![vec![0u64; d]; d];
    for (i, b) in basis.iter().enumerate() {
        let img: Vec<u64> = (0..r).map(|row| (0..r).map(|k| m[row][k] * b[k] % p).sum::<u64>() % p).collect();
        for (j, &pv) in pivots.iter().enumerate() {
            rep[j][i] = img[pv];
        }
    }
    let poly = char_poly(&rep, p);
    let mut out = Vec::new();
    let mut total = 0;
    for lambda in 0..p {
        let val = poly.iter().rev().fold(0u64, |acc, &c| (acc * lambda + c) % p);
        if val != 0 {
            continue;
        }
        let shifted: Vec<Vec<u64>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { (rep[i][j] + p - lambda) % p } else { rep[i][j] }).collect())
            .collect();
        let ns = nullspace_mod(&shifted, p);
        total += ns.len();
        let vecs: Vec<Vec<u64>> = ns
            .iter()
            .map(|c| (0..r).map(|k| (0..d).map(|i| c[i] * basis[i][k] % p).sum::<u64>() % p).collect())
            .collect();
        out.push(rref_mod(vecs, p));
    }
    if total != d {
        return Err(violated!("class matrix is not diagonalizable modulo {p}"));
    }
    Ok(out)
}

/// Characteristic polynomial det(λI − a), constant term first (Faddeev–LeVerrier).
fn char_poly(a: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    let mut mk = vec![vec![0u64; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0u64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0u64;
                for l in 0..n {
                    s = (s + a[i][l] * mk[l][j]) % p;
                }
                next[i][j] = s;
            }
            next[i][i] = (next[i][i] + coeffs[n - k + 1]) % p;
        }
        mk = next;
        let mut tr = 0u64;
        for i in 0..n {
            for l in 0..n {
                tr = (tr + a[i][l] * mk[l][i]) % p;
            }
        }
        let kinv = inv_mod(k as u64 % p, p).unwrap();
        coeffs[n - k] = (p - tr) % p * kinv % p;
    }
    coeffs
}

fn rref_mod(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p).unwrap();
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + p - rows[r][j] * f % p) % p;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn nullspace_mod(a: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, |r| r.len());
    let red = rref_mod(a.to_vec(), p);
    let piv: Vec<usize> = red.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (row, &pc) in red.iter().zip(&piv) {
            v[pc] = (p - row[free]) % p;
        }
        out.push(v);
    }
    out
}

trait PowMod {
    fn pow_mod(self, e: u64, p: u64) -> u64;
}

impl PowMod for u64 {
    fn pow_mod(self, mut e: u64, p: u64) -> u64 {
        let mut base = self % p;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (a % p != 0).then(|| a.pow_mod(p - 2, p))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Smallest prime p ≡ 1 (mod e) with p > floor.
fn pick_prime(e: usize, floor: u64) -> u64 {
    let e = e as u64;
    let mut p = (floor / e + 1) * e + 1;
    while !is_prime(p) {
        p += e;
    }
    p
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p).find(|&g| factors.iter().all(|&q| g.pow_mod((p - 1) / q, p) != 1)).unwrap()
}
