//! Endomorphism algebras, indecomposability certificates, Krull–Schmidt
//! decomposition and isomorphism tests.

pub mod fp;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{internal, Error, Result};
use crate::quiver::{hom_space, HomSpace, Quiver, Rep, RepMorphism};
use crate::zpn::{Partition, Sub, ZpnMatrix};
use fp::{rref, FpAlgebra, Vector};

/// Order of a finite algebra below which idempotents are searched exhaustively
/// once the randomized search gives up.
pub const EXHAUSTIVE_THRESHOLD: u128 = 1 << 20;

const RANDOM_TRIES: usize = 64;
const FITTING_TRIES: usize = 2;

/// `End(M)` with its reduction `E/pE` over F_p.
pub struct EndAlgebra {
    pub rep: Rep,
    pub hom: HomSpace,
    pub algebra: FpAlgebra,
}

impl EndAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// The endomorphism with the given integer coordinates.
    pub fn element(&self, coords: &[i64]) -> RepMorphism {
        self.hom.combine(coords, &self.rep, &self.rep)
    }
}

pub fn end_ring(m: &Rep) -> Result<EndAlgebra> {
    let hom = hom_space(m, m)?;
    let p = m.params().p();
    let d = hom.len();
    let coords_mod_p = |f: &RepMorphism| -> Result<Vector> {
        let c = hom
            .coords(f)
            .ok_or_else(|| Error::Internal("endomorphism without coordinates".into()))?;
        Ok(c.into_iter().map(|x| x.rem_euclid(p)).collect())
    };
    let mut table = Vec::with_capacity(d);
    for a in 0..d {
        let mut row = Vec::with_capacity(d);
        for b in 0..d {
            row.push(coords_mod_p(&hom.gens[a].compose(&hom.gens[b])?)?);
        }
        table.push(row);
    }
    let one = coords_mod_p(&RepMorphism::identity(m))?;
    Ok(EndAlgebra {
        rep: m.clone(),
        hom,
        algebra: FpAlgebra { p, table, one },
    })
}

/// Dimensions certifying (non-)locality of `E/pE`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityCert {
    pub dim_end: usize,
    pub dim_radical: usize,
    pub dim_semisimple: usize,
    pub dim_center: usize,
    pub center_is_field: bool,
    pub seed: u64,
}

pub struct IndecCheck {
    pub indecomposable: bool,
    pub cert: LocalityCert,
    /// A verified idempotent `e = e ∘ e`, neither zero nor the identity.
    pub idempotent: Option<RepMorphism>,
}

/// Decides whether `E(M)/J` is a field, returning a nontrivial idempotent of `End(M)` otherwise.
pub fn is_indecomposable(m: &Rep, seed: u64) -> Result<IndecCheck> {
    if m.is_zero() {
        return Err(Error::Precondition("zero representation".into()));
    }
    let end = end_ring(m)?;
    let a = &end.algebra;
    let rad = a.radical();
    let quot = a.quotient(&rad);
    let q = &quot.algebra;
    let center = q.center();
    let fixed = q.frobenius_fixed(&center);
    let cert = LocalityCert {
        dim_end: a.dim(),
        dim_radical: rad.len(),
        dim_semisimple: q.dim(),
        dim_center: center.len(),
        center_is_field: fixed.len() == 1,
        seed,
    };
    if cert.center_is_field && q.dim() == center.len() {
        return Ok(IndecCheck {
            indecomposable: true,
            cert,
            idempotent: None,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bar = if !cert.center_is_field {
        let y = fixed
            .iter()
            .find(|y| rref(q.p, &[q.one.clone(), (*y).clone()], q.dim()).0.len() == 2)
            .ok_or_else(|| Error::Internal("no non-scalar Frobenius-fixed element".into()))?;
        idempotent_from_fixed(q, y)?
    } else {
        find_idempotent(q, &mut rng)?
    };
    let lifted = quot.lift(&bar, a.dim());
    let e = lift_idempotent(&end, &lifted)?;
    Ok(IndecCheck {
        indecomposable: false,
        cert,
        idempotent: Some(e),
    })
}

/// `1 - (y - λ)^{p-1}` for a root `λ` of the minimal polynomial of `y`, where `y^p = y`.
fn idempotent_from_fixed(q: &FpAlgebra, y: &[i64]) -> Result<Vector> {
    let lambda = q
        .fixed_point_value(y)
        .ok_or_else(|| Error::Internal("minimal polynomial without root".into()))?;
    let u = q.sub(y, &q.scale(lambda, &q.one));
    Ok(q.sub(&q.one, &q.pow(&u, (q.p - 1) as u64)))
}

fn is_nontrivial_idempotent(q: &FpAlgebra, e: &[i64]) -> bool {
    !q.is_zero(e) && e != q.one.as_slice() && q.mul(e, e) == e
}

/// Nontrivial idempotent of a semisimple algebra whose center is a field but
/// which is not itself commutative: search random subalgebras `F_p[x]`.
fn find_idempotent(q: &FpAlgebra, rng: &mut ChaCha8Rng) -> Result<Vector> {
    let try_element = |x: &[i64]| -> Option<Vector> {
        let sub = q.generated(x);
        let fixed = q.frobenius_fixed(&sub);
        let y = fixed
            .iter()
            .find(|y| rref(q.p, &[q.one.clone(), (*y).clone()], q.dim()).0.len() == 2)?;
        idempotent_from_fixed(q, y).ok().filter(|e| is_nontrivial_idempotent(q, e))
    };
    for _ in 0..RANDOM_TRIES {
        let x: Vector = (0..q.dim()).map(|_| rng.gen_range(0..q.p)).collect();
        if let Some(e) = try_element(&x) {
            return Ok(e);
        }
    }
    let size = (q.p as u128).checked_pow(q.dim() as u32);
    if size.is_some_and(|s| s <= EXHAUSTIVE_THRESHOLD) {
        let mut x = vec![0i64; q.dim()];
        loop {
            if is_nontrivial_idempotent(q, &x) {
                return Ok(x);
            }
            let mut k = 0;
            while k < x.len() && x[k] == q.p - 1 {
                x[k] = 0;
                k += 1;
            }
            if k == x.len() {
                break;
            }
            x[k] += 1;
        }
    }
    internal("no idempotent found in a non-local semisimple quotient")
}

/// Lifts an idempotent of `E/J` (given by a preimage in `E/pE`) to an exact
/// idempotent of `End(M)` by iterating `u ↦ 3u² - 2u³`.
fn lift_idempotent(end: &EndAlgebra, coords: &[i64]) -> Result<RepMorphism> {
    let mut u = end.element(coords);
    for _ in 0..64 {
        let u2 = u.compose(&u)?;
        if u2 == u {
            return Ok(u);
        }
        let u3 = u2.compose(&u)?;
        u = u2.scale(3).sub(&u3.scale(2))?;
    }
    internal("idempotent lifting did not converge")
}

/// Indecomposable summand with the maps realizing it inside the ambient rep.
#[derive(Clone, Debug)]
pub struct Piece {
    pub rep: Rep,
    pub inj: RepMorphism,
    pub proj: RepMorphism,
}

/// Splits `m = im ψ ⊕ ker ψ` for an endomorphism `ψ` with `M = im ψ ⊕ ker ψ`.
fn split(m: &Rep, psi: &RepMorphism) -> Result<(Piece, Piece)> {
    let r = *m.params();
    let nv = m.quiver().vertex_count();
    let im: Vec<Sub> = psi.maps.iter().map(ZpnMatrix::image).collect();
    let ker: Vec<Sub> = psi.maps.iter().map(ZpnMatrix::kernel).collect();
    let restrict = |subs: &[Sub]| -> Result<Rep> {
        let mut maps = Vec::new();
        for (a, &(s, t)) in m.quiver().arrows().iter().enumerate() {
            let img = m.map(a).compose(&subs[s].embed)?;
            let solver = subs[t].embed.solver();
            let cols: Vec<Vector> = (0..img.cols())
                .map(|j| solver.solve(&img.column(j)))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Internal("split summand is not a subrepresentation".into()))?;
            maps.push(ZpnMatrix::from_fn(
                r,
                subs[s].parts().to_vec(),
                subs[t].parts().to_vec(),
                |i, j| cols[j][i],
            )?);
        }
        Rep::new(m.quiver().clone(), r, subs.iter().map(Sub::partition).collect(), maps)
    };
    let x = restrict(&im)?;
    let y = restrict(&ker)?;
    let mut px = Vec::with_capacity(nv);
    let mut py = Vec::with_capacity(nv);
    for v in 0..nv {
        let both = im[v].embed.hstack(&ker[v].embed)?;
        let solver = both.solver();
        let parts = m.module(v).parts().to_vec();
        let cols: Vec<Vector> = (0..parts.len())
            .map(|k| {
                let mut e = vec![0; parts.len()];
                e[k] = 1;
                solver.solve(&e)
            })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Internal("image and kernel do not span".into()))?;
        let nx = im[v].parts().len();
        px.push(ZpnMatrix::from_fn(r, parts.clone(), im[v].parts().to_vec(), |i, j| cols[j][i])?);
        py.push(ZpnMatrix::from_fn(r, parts, ker[v].parts().to_vec(), |i, j| cols[j][nx + i])?);
    }
    let piece = |rep: Rep, subs: &[Sub], proj: Vec<ZpnMatrix>| Piece {
        rep,
        inj: RepMorphism {
            maps: subs.iter().map(|s| s.embed.clone()).collect(),
        },
        proj: RepMorphism { maps: proj },
    };
    Ok((piece(x, &im, px), piece(y, &ker, py)))
}

fn power(f: &RepMorphism, mut e: u32, m: &Rep) -> Result<RepMorphism> {
    let mut acc = RepMorphism::identity(m);
    let mut base = f.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.compose(&base)?;
        }
        base = base.compose(&base)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Indecomposable summand class with multiplicity and its certificate.
#[derive(Clone, Debug)]
pub struct Summand {
    pub rep: Rep,
    pub multiplicity: usize,
    pub cert: LocalityCert,
}

/// A Krull–Schmidt decomposition with explicit mutually inverse maps.
#[derive(Clone, Debug)]
pub struct DecompositionCert {
    pub seed: u64,
    pub summands: Vec<Summand>,
    /// Every indecomposable piece, sorted by canonical key; `Σ inj ∘ proj = id`.
    pub pieces: Vec<Piece>,
}

/// Sort key used to order summands: total length, then vertex partitions.
pub fn canonical_key(m: &Rep) -> (u32, Vec<Vec<u32>>) {
    (
        m.total_length(),
        m.modules().iter().map(|p| p.parts().to_vec()).collect(),
    )
}

pub fn decompose(m: &Rep, seed: u64) -> Result<DecompositionCert> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut todo = vec![Piece {
        rep: m.clone(),
        inj: RepMorphism::identity(m),
        proj: RepMorphism::identity(m),
    }];
    let mut leaves: Vec<(Piece, LocalityCert)> = Vec::new();
    while let Some(piece) = todo.pop() {
        if piece.rep.is_zero() {
            continue;
        }
        let x = &piece.rep;
        let mut parts = None;
        let end = end_ring(x)?;
        for _ in 0..FITTING_TRIES {
            if end.hom.is_empty() {
                break;
            }
            let coords: Vec<i64> = end
                .hom
                .orders
                .iter()
                .map(|&o| rng.gen_range(0..x.params().pow(o)))
                .collect();
            let psi = power(&end.element(&coords), x.total_length(), x)?;
            if !psi.is_zero() && !psi.is_iso() {
                parts = Some(split(x, &psi)?);
                break;
            }
        }
        if parts.is_none() {
            let check = is_indecomposable(x, rng.gen())?;
            match check.idempotent {
                None => {
                    leaves.push((piece, check.cert));
                    continue;
                }
                Some(e) => parts = Some(split(x, &e)?),
            }
        }
        let (a, b) = parts.expect("set above");
        for sub in [a, b] {
            todo.push(Piece {
                inj: piece.inj.compose(&sub.inj)?,
                proj: sub.proj.compose(&piece.proj)?,
                rep: sub.rep,
            });
        }
    }
    leaves.sort_by_key(|(p, _)| canonical_key(&p.rep));
    verify_pieces(m, leaves.iter().map(|(p, _)| p))?;
    let mut summands: Vec<Summand> = Vec::new();
    for (piece, cert) in &leaves {
        let found = summands
            .iter()
            .position(|s| indecomposables_isomorphic(&s.rep, &piece.rep).unwrap_or(false));
        match found {
            Some(k) => summands[k].multiplicity += 1,
            None => summands.push(Summand {
                rep: piece.rep.clone(),
                multiplicity: 1,
                cert: cert.clone(),
            }),
        }
    }
    Ok(DecompositionCert {
        seed,
        summands,
        pieces: leaves.into_iter().map(|(p, _)| p).collect(),
    })
}

fn verify_pieces<'a>(m: &Rep, pieces: impl Iterator<Item = &'a Piece> + Clone) -> Result<()> {
    let mut total = RepMorphism::zero(m, m);
    for (i, a) in pieces.clone().enumerate() {
        if !a.inj.is_morphism(&a.rep, m) || !a.proj.is_morphism(m, &a.rep) {
            return internal("summand maps are not morphisms");
        }
        total = total.add(&a.inj.compose(&a.proj)?)?;
        for (j, b) in pieces.clone().enumerate() {
            let c = b.proj.compose(&a.inj)?;
            let ok = if i == j { c == RepMorphism::identity(&a.rep) } else { c.is_zero() };
            if !ok {
                return internal("summand projections are not orthogonal");
            }
        }
    }
    if total != RepMorphism::identity(m) {
        return internal("summand maps do not sum to the identity");
    }
    Ok(())
}

/// Isomorphism test for two indecomposables: some basis pair `(f, g)` has
/// `g ∘ f` invertible. Exact because non-units of a local ring form an ideal.
pub fn indecomposables_isomorphic(x: &Rep, y: &Rep) -> Result<bool> {
    if !x.same_shape(y) {
        return Err(Error::QuiverMismatch);
    }
    if x.modules() != y.modules() {
        return Ok(false);
    }
    let fwd = hom_space(x, y)?;
    let back = hom_space(y, x)?;
    for f in &fwd.gens {
        for g in &back.gens {
            if g.compose(f)?.is_iso() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn is_isomorphic(m: &Rep, n: &Rep, seed: u64) -> Result<bool> {
    if !m.same_shape(n) {
        return Err(Error::QuiverMismatch);
    }
    if m.modules() != n.modules() {
        return Ok(false);
    }
    let a = decompose(m, seed)?;
    let b = decompose(n, seed)?;
    if a.summands.len() != b.summands.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.summands.len()];
    for s in &a.summands {
        let mut hit = false;
        for (k, t) in b.summands.iter().enumerate() {
            if !used[k] && s.multiplicity == t.multiplicity && indecomposables_isomorphic(&s.rep, &t.rep)? {
                used[k] = true;
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Removes the summands `0 → N` of an A₂ representation.
///
/// Returns the sum of the remaining summands and the partition of the removed part.
pub fn strip_y(m: &Rep, seed: u64) -> Result<(Rep, Partition)> {
    if m.quiver() != &Quiver::linear_a(2) {
        return Err(Error::Precondition("strip_Y needs the A2 quiver".into()));
    }
    let cert = decompose(m, seed)?;
    let mut keep = Rep::zero(m.quiver().clone(), *m.params());
    let mut stripped = Vec::new();
    for piece in &cert.pieces {
        if piece.rep.module(0).is_empty() {
            stripped.extend_from_slice(piece.rep.module(1).parts());
        } else {
            keep = keep.direct_sum(&piece.rep)?.0;
        }
    }
    Ok((keep, Partition::from_unsorted(stripped)))
}
