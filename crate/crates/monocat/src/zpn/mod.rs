//! Exact linear algebra over Z/(p^n).
//!
//! A finite module is stored as a list of cyclic exponents `a_j`, i.e. the
//! module `⊕ Z/p^{a_j}`. Elements are coordinate vectors with `x_j` in
//! `[0, p^{a_j})`. A morphism is a [`ZpnMatrix`] whose `(i, j)` entry is the
//! image of the `j`-th generator in the `i`-th coordinate.

pub mod lin;

use serde::{Deserialize, Serialize};

use crate::error::{input, internal, Error, Result};
use lin::{Augmented, Rows};

pub const MAX_N: u32 = 6;
pub const MAX_MODULUS: i64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingParams {
    p: i64,
    n: u32,
    pows: [i64; (MAX_N + 1) as usize],
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl RingParams {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return input(format!("p = {p} is not prime"));
        }
        if !(1..=MAX_N).contains(&n) {
            return input(format!("n = {n} outside 1..={MAX_N}"));
        }
        let mut pows = [0i64; (MAX_N + 1) as usize];
        let mut acc: i64 = 1;
        for (k, slot) in pows.iter_mut().enumerate() {
            if k as u32 <= n {
                *slot = acc;
                if k as u32 == n && acc > MAX_MODULUS {
                    return input(format!("p^n = {p}^{n} exceeds 2^31"));
                }
                acc = acc.saturating_mul(p as i64);
            }
        }
        Ok(RingParams { p: p as i64, n, pows })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> i64 {
        self.pows[self.n as usize]
    }

    /// `p^k` for `k <= n`; larger exponents give 0 (= p^n in the ring).
    pub fn pow(&self, k: u32) -> i64 {
        if k >= self.n {
            if k == self.n {
                self.modulus()
            } else {
                0
            }
        } else {
            self.pows[k as usize]
        }
    }

    pub fn reduce(&self, x: i64) -> i64 {
        x.rem_euclid(self.modulus())
    }

    pub fn mul(&self, a: i64, b: i64) -> i64 {
        (a.rem_euclid(self.modulus()) * b.rem_euclid(self.modulus())).rem_euclid(self.modulus())
    }

    /// p-adic valuation of `x` in the ring, `n` for zero.
    pub fn val(&self, x: i64) -> u32 {
        let mut x = self.reduce(x);
        if x == 0 {
            return self.n;
        }
        let mut k = 0;
        while x % self.p == 0 {
            x /= self.p;
            k += 1;
        }
        k
    }

    pub fn inv_unit(&self, u: i64) -> i64 {
        let m = self.modulus();
        let (mut a, mut b) = (self.reduce(u), m);
        let (mut x0, mut x1) = (1i64, 0i64);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        debug_assert_eq!(a, 1, "not a unit");
        x0.rem_euclid(m)
    }
}

/// Isomorphism type of a finite Z/(p^n)-module: weakly decreasing exponents in `[1, n]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>, n: u32) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return input(format!("partition {parts:?} is not weakly decreasing"));
        }
        if parts.iter().any(|&a| a == 0 || a > n) {
            return input(format!("partition {parts:?} has a part outside [1, {n}]"));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&a| a > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn zero() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Composition length, the sum of the parts.
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Reduces `x` coordinatewise into `[0, p^{a_j})`.
pub fn reduce_elem(r: &RingParams, parts: &[u32], x: &[i64]) -> Vec<i64> {
    x.iter()
        .zip(parts)
        .map(|(&v, &a)| v.rem_euclid(r.pow(a)))
        .collect()
}

/// Exponent of the additive order of `x`.
pub fn order_exp(r: &RingParams, parts: &[u32], x: &[i64]) -> u32 {
    x.iter()
        .zip(parts)
        .map(|(&v, &a)| {
            let v = v.rem_euclid(r.pow(a));
            if v == 0 {
                0
            } else {
                a - r.val(v)
            }
        })
        .max()
        .unwrap_or(0)
}

/// A morphism `⊕ Z/p^{src_j} → ⊕ Z/p^{tgt_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZpnMatrix {
    params: RingParams,
    src: Vec<u32>,
    tgt: Vec<u32>,
    data: Vec<i64>,
}

impl ZpnMatrix {
    /// Builds a morphism, reducing entries and checking the divisibility
    /// condition `p^{max(0, tgt_i - src_j)} | entry(i, j)`.
    pub fn new(params: RingParams, src: Vec<u32>, tgt: Vec<u32>, rows: &[Vec<i64>]) -> Result<Self> {
        if rows.len() != tgt.len() || rows.iter().any(|row| row.len() != src.len()) {
            return input(format!(
                "matrix shape does not match {}x{} module types",
                tgt.len(),
                src.len()
            ));
        }
        Self::from_fn(params, src, tgt, |i, j| rows[i][j])
    }

    pub fn from_fn(
        params: RingParams,
        src: Vec<u32>,
        tgt: Vec<u32>,
        f: impl Fn(usize, usize) -> i64,
    ) -> Result<Self> {
        let n = params.n();
        if src.iter().chain(&tgt).any(|&a| a == 0 || a > n) {
            return input(format!("module parts must lie in [1, {n}]"));
        }
        let mut data = Vec::with_capacity(src.len() * tgt.len());
        for (i, &b) in tgt.iter().enumerate() {
            for (j, &a) in src.iter().enumerate() {
                let x = f(i, j).rem_euclid(params.pow(b));
                let need = b.saturating_sub(a);
                if x % params.pow(need) != 0 {
                    return input(format!(
                        "entry ({i},{j}) = {x} of a map Z/p^{a} -> Z/p^{b} is not divisible by p^{need}"
                    ));
                }
                data.push(x);
            }
        }
        Ok(ZpnMatrix { params, src, tgt, data })
    }

    pub fn zero(params: RingParams, src: Vec<u32>, tgt: Vec<u32>) -> Self {
        let data = vec![0; src.len() * tgt.len()];
        ZpnMatrix { params, src, tgt, data }
    }

    pub fn identity(params: RingParams, parts: Vec<u32>) -> Self {
        let m = parts.len();
        let mut id = Self::zero(params, parts.clone(), parts);
        for i in 0..m {
            id.data[i * m + i] = 1;
        }
        id
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn src(&self) -> &[u32] {
        &self.src
    }

    pub fn tgt(&self) -> &[u32] {
        &self.tgt
    }

    pub fn rows(&self) -> usize {
        self.tgt.len()
    }

    pub fn cols(&self) -> usize {
        self.src.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.src.len() + j]
    }

    pub fn to_rows(&self) -> Rows {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows()).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let r = &self.params;
        (0..self.rows())
            .map(|i| {
                let mut s = 0i64;
                for (j, &xj) in x.iter().enumerate() {
                    s = r.reduce(s + r.mul(self.get(i, j), xj));
                }
                s.rem_euclid(r.pow(self.tgt[i]))
            })
            .collect()
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &ZpnMatrix) -> Result<ZpnMatrix> {
        if self.src != f.tgt {
            return internal(format!(
                "composition type mismatch {:?} vs {:?}",
                self.src, f.tgt
            ));
        }
        let r = self.params;
        Self::from_fn(r, f.src.clone(), self.tgt.clone(), |i, j| {
            let mut s = 0i64;
            for k in 0..self.cols() {
                s = r.reduce(s + r.mul(self.get(i, k), f.get(k, j)));
            }
            s
        })
    }

    pub fn add(&self, other: &ZpnMatrix) -> Result<ZpnMatrix> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &ZpnMatrix) -> Result<ZpnMatrix> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &ZpnMatrix, sign: i64) -> Result<ZpnMatrix> {
        if self.src != other.src || self.tgt != other.tgt {
            return internal("sum of morphisms of different types");
        }
        Self::from_fn(self.params, self.src.clone(), self.tgt.clone(), |i, j| {
            self.get(i, j) + sign * other.get(i, j)
        })
    }

    pub fn scale(&self, c: i64) -> ZpnMatrix {
        let mut out = self.clone();
        for (k, x) in out.data.iter_mut().enumerate() {
            let i = k / self.src.len().max(1);
            *x = self.params.mul(*x, c).rem_euclid(self.params.pow(self.tgt[i]));
        }
        out
    }

    /// Entries scaled into Λ: row `i` multiplied by `p^{n - tgt_i}`.
    fn lifted_rows(&self) -> Rows {
        let r = &self.params;
        (0..self.rows())
            .map(|i| {
                let s = r.pow(r.n() - self.tgt[i]);
                (0..self.cols()).map(|j| r.mul(self.get(i, j), s)).collect()
            })
            .collect()
    }

    /// The transposed lifted matrix, so that source elements act as row vectors.
    fn lifted_transpose(&self) -> Rows {
        let l = self.lifted_rows();
        (0..self.cols())
            .map(|j| (0..self.rows()).map(|i| l[i][j]).collect())
            .collect()
    }

    /// Submodule of the source killed by the map.
    pub fn kernel(&self) -> Sub {
        let r = &self.params;
        let aug = Augmented::new(r, &self.lifted_transpose(), self.rows());
        let gens: Rows = aug
            .kernel()
            .iter()
            .map(|y| reduce_elem(r, &self.src, y))
            .collect();
        Sub::span(*r, self.src.clone(), &gens)
    }

    pub fn image(&self) -> Sub {
        let gens: Rows = (0..self.cols()).map(|j| self.column(j)).collect();
        Sub::span(self.params, self.tgt.clone(), &gens)
    }

    /// Lexicographically smallest `x` with `self(x) = b`, if any.
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        self.solver().solve(b)
    }

    /// Precomputed solver for repeated right-hand sides.
    pub fn solver(&self) -> Solver {
        let r = self.params;
        Solver {
            aug: Augmented::new(&r, &self.lifted_transpose(), self.rows()),
            params: r,
            src: self.src.clone(),
            tgt: self.tgt.clone(),
        }
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        let s = self.solver();
        (0..self.rows()).all(|i| {
            let mut e = vec![0; self.rows()];
            e[i] = 1;
            s.solve(&e).is_some()
        })
    }

    /// Sub-block with the given rows and columns (in that order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ZpnMatrix {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        ZpnMatrix {
            params: self.params,
            src: cols.iter().map(|&j| self.src[j]).collect(),
            tgt: rows.iter().map(|&i| self.tgt[i]).collect(),
            data,
        }
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &ZpnMatrix) -> Result<ZpnMatrix> {
        if self.tgt != other.tgt {
            return internal("hstack with different targets");
        }
        let c1 = self.cols();
        let src = [self.src.clone(), other.src.clone()].concat();
        Self::from_fn(self.params, src, self.tgt.clone(), |i, j| {
            if j < c1 {
                self.get(i, j)
            } else {
                other.get(i, j - c1)
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &ZpnMatrix) -> Result<ZpnMatrix> {
        if self.src != other.src {
            return internal("vstack with different sources");
        }
        let r1 = self.rows();
        let tgt = [self.tgt.clone(), other.tgt.clone()].concat();
        Self::from_fn(self.params, self.src.clone(), tgt, |i, j| {
            if i < r1 {
                self.get(i, j)
            } else {
                other.get(i - r1, j)
            }
        })
    }

    pub fn block_diag(&self, other: &ZpnMatrix) -> ZpnMatrix {
        let (r1, c1) = (self.rows(), self.cols());
        let src = [self.src.clone(), other.src.clone()].concat();
        let tgt = [self.tgt.clone(), other.tgt.clone()].concat();
        let mut out = ZpnMatrix::zero(self.params, src, tgt);
        let w = out.cols();
        for i in 0..out.rows() {
            for j in 0..w {
                out.data[i * w + j] = match (i < r1, j < c1) {
                    (true, true) => self.get(i, j),
                    (false, false) => other.get(i - r1, j - c1),
                    _ => 0,
                };
            }
        }
        out
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, x: i64) {
        let w = self.src.len();
        self.data[i * w + j] = x.rem_euclid(self.params.pow(self.tgt[i]));
    }

    /// Checks the divisibility invariant of every entry.
    pub fn is_well_formed(&self) -> bool {
        let r = &self.params;
        (0..self.rows()).all(|i| {
            (0..self.cols()).all(|j| {
                let x = self.get(i, j);
                let b = self.tgt[i];
                (0..r.pow(b)).contains(&x) && x % r.pow(b.saturating_sub(self.src[j])) == 0
            })
        })
    }
}

/// Cached Howell data for solving `f(x) = b` against one map.
pub struct Solver {
    aug: Augmented,
    params: RingParams,
    src: Vec<u32>,
    tgt: Vec<u32>,
}

impl Solver {
    pub fn solve(&self, b: &[i64]) -> Option<Vec<i64>> {
        let r = &self.params;
        let lifted: Vec<i64> = b
            .iter()
            .zip(&self.tgt)
            .map(|(&x, &a)| r.mul(x, r.pow(r.n() - a)))
            .collect();
        self.aug
            .solve(r, &lifted)
            .map(|y| reduce_elem(r, &self.src, &y))
    }
}

/// A submodule given by an injective map from a direct sum of cyclic modules.
///
/// `embed` has source `parts` (weakly decreasing) and target `ambient`; its
/// columns are generators whose orders are exactly the parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sub {
    pub ambient: Vec<u32>,
    pub embed: ZpnMatrix,
}

impl Sub {
    /// The submodule generated by `gens`, with a cyclic basis.
    pub fn span(params: RingParams, ambient: Vec<u32>, gens: &[Vec<i64>]) -> Sub {
        let r = &params;
        let gens: Rows = gens.iter().map(|g| reduce_elem(r, &ambient, g)).collect();
        let g = gens.len();
        // Relations among the generators: y with sum y_k gens_k = 0 in the ambient.
        let lifted: Rows = gens
            .iter()
            .map(|x| {
                x.iter()
                    .zip(&ambient)
                    .map(|(&v, &a)| r.mul(v, r.pow(r.n() - a)))
                    .collect()
            })
            .collect();
        let rel = Augmented::new(r, &lifted, ambient.len()).kernel();
        let sm = lin::smith(r, &rel, g);
        let mut cyc: Vec<(u32, Vec<i64>)> = Vec::new();
        for t in 0..g {
            let e = sm.exps[t];
            if e == 0 {
                continue;
            }
            let mut col = vec![0i64; ambient.len()];
            for (k, gen) in gens.iter().enumerate() {
                let c = sm.vinv[t][k];
                if c != 0 {
                    for (slot, &v) in col.iter_mut().zip(gen) {
                        *slot = r.reduce(*slot + r.mul(c, v));
                    }
                }
            }
            let col = reduce_elem(r, &ambient, &col);
            debug_assert_eq!(order_exp(r, &ambient, &col), e);
            cyc.push((e, col));
        }
        cyc.sort_by_key(|c| std::cmp::Reverse(c.0));
        let parts: Vec<u32> = cyc.iter().map(|c| c.0).collect();
        let embed = ZpnMatrix::from_fn(params, parts, ambient.clone(), |i, j| cyc[j].1[i])
            .expect("generator columns are well-formed");
        Sub { ambient, embed }
    }

    pub fn whole(params: RingParams, ambient: Vec<u32>) -> Sub {
        let embed = ZpnMatrix::identity(params, ambient.clone());
        Sub { ambient, embed }
    }

    pub fn zero(params: RingParams, ambient: Vec<u32>) -> Sub {
        Sub {
            embed: ZpnMatrix::zero(params, Vec::new(), ambient.clone()),
            ambient,
        }
    }

    pub fn parts(&self) -> &[u32] {
        self.embed.src()
    }

    pub fn partition(&self) -> Partition {
        Partition(self.parts().to_vec())
    }

    pub fn params(&self) -> &RingParams {
        self.embed.params()
    }

    pub fn is_zero(&self) -> bool {
        self.parts().is_empty()
    }

    /// Exponent of the order of the submodule.
    pub fn order_exp(&self) -> u32 {
        self.parts().iter().sum()
    }

    pub fn gens(&self) -> Rows {
        (0..self.embed.cols()).map(|j| self.embed.column(j)).collect()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.embed.solve(x).is_some()
    }

    pub fn contains_sub(&self, other: &Sub) -> bool {
        let s = self.embed.solver();
        other.gens().iter().all(|g| s.solve(g).is_some())
    }

    pub fn same_as(&self, other: &Sub) -> bool {
        self.ambient == other.ambient
            && self.order_exp() == other.order_exp()
            && self.contains_sub(other)
    }

    /// Image of this submodule under `f`.
    pub fn map(&self, f: &ZpnMatrix) -> Result<Sub> {
        let img = f.compose(&self.embed)?;
        Ok(img.image())
    }

    /// Preimage of this submodule under `f: X → ambient`.
    pub fn preimage(&self, f: &ZpnMatrix) -> Result<Sub> {
        if f.tgt() != self.ambient.as_slice() {
            return internal("preimage along a map into a different module");
        }
        let neg = self.embed.scale(-1);
        let joint = f.hstack(&neg)?;
        let k = joint.kernel();
        let nx = f.cols();
        let gens: Rows = k.gens().iter().map(|g| g[..nx].to_vec()).collect();
        Ok(Sub::span(*f.params(), f.src().to_vec(), &gens))
    }

    pub fn sum(&self, other: &Sub) -> Sub {
        let mut gens = self.gens();
        gens.extend(other.gens());
        Sub::span(*self.params(), self.ambient.clone(), &gens)
    }
}

/// Generators `e_ij` of `Hom(⊕Z/p^{a_j}, ⊕Z/p^{b_i})`, each with its order exponent.
///
/// Generator `(i, j)` is multiplication by `p^{max(0, b_i - a_j)}` from the
/// `j`-th summand to the `i`-th, of order `p^{min(a_j, b_i)}`. Listed row-major.
pub fn hom_basis(params: RingParams, src: &[u32], tgt: &[u32]) -> Vec<(ZpnMatrix, u32)> {
    let mut out = Vec::with_capacity(src.len() * tgt.len());
    for (i, &b) in tgt.iter().enumerate() {
        for (j, &a) in src.iter().enumerate() {
            let mut m = ZpnMatrix::zero(params, src.to_vec(), tgt.to_vec());
            m.set(i, j, params.pow(b.saturating_sub(a)));
            out.push((m, a.min(b)));
        }
    }
    out
}

/// Howell normal form of a raw matrix over Z/(p^n) and a transform `u` with `h = u · a`.
///
/// The form may have more rows than `a`; `u` then has one row per row of `h`.
pub fn howell_form(params: RingParams, a: &[Vec<i64>]) -> Result<(Rows, Rows)> {
    let q = params.modulus();
    if a.iter().flatten().any(|&x| !(0..q).contains(&x)) {
        return input("matrix entries must be reduced into [0, p^n)");
    }
    let ncols = a.first().map_or(0, |r| r.len());
    if a.iter().any(|row| row.len() != ncols) {
        return input("ragged matrix");
    }
    let aug = Augmented::new(&params, a, ncols);
    let mut h = Vec::new();
    let mut u = Vec::new();
    for (row, &c) in aug.h.rows.iter().zip(&aug.h.pivots) {
        if c < ncols {
            h.push(row[..ncols].to_vec());
            u.push(row[ncols..].to_vec());
        }
    }
    Ok((h, u))
}

/// Cokernel of a relation matrix (one relation per row) as a direct sum of cyclic modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub partition: Partition,
    pub smith: lin::Smith,
    /// For each cyclic summand (in partition order), its expression in the original generators.
    pub summand_gens: Rows,
    /// For each original generator, its coordinates in the cyclic decomposition.
    pub gen_coords: Rows,
}

pub fn presentation_to_partition(params: RingParams, relations: &[Vec<i64>], ngens: usize) -> Presentation {
    let r = &params;
    let sm = lin::smith(r, relations, ngens);
    let mut keep: Vec<usize> = (0..ngens).filter(|&t| sm.exps[t] > 0).collect();
    keep.sort_by(|&a, &b| sm.exps[b].cmp(&sm.exps[a]));
    let parts: Vec<u32> = keep.iter().map(|&t| sm.exps[t]).collect();
    let summand_gens = keep.iter().map(|&t| sm.vinv[t].clone()).collect();
    let gen_coords = (0..ngens)
        .map(|k| {
            let row: Vec<i64> = keep.iter().map(|&t| sm.v[k][t]).collect();
            reduce_elem(r, &parts, &row)
        })
        .collect();
    Presentation {
        partition: Partition(parts),
        smith: sm,
        summand_gens,
        gen_coords,
    }
}

/// Intersection of two submodules of the same ambient module.
pub fn submodule_intersection(a: &Sub, b: &Sub) -> Result<Sub> {
    if a.ambient != b.ambient {
        return Err(Error::Input("submodules of different modules".into()));
    }
    let joint = a.embed.hstack(&b.embed.scale(-1))?;
    let k = joint.kernel();
    let na = a.embed.cols();
    let gens: Rows = k
        .gens()
        .iter()
        .map(|g| a.embed.apply(&g[..na]))
        .collect();
    Ok(Sub::span(*a.params(), a.ambient.clone(), &gens))
}
