//! Injective envelopes and the Mimo construction: the minimal right
//! approximation of a representation by one in the monomorphism category.

use rand::RngCore;

use crate::decomp::is_indecomposable;
use crate::error::{internal, Error, Result};
use crate::quiver::{hat_lift, random_map, hom_space, is_injective_object, stable_restrict, vectorize, Rep, RepMorphism};
use crate::zpn::{Partition, RingParams, ZpnMatrix};

/// The envelope `⊕ Z/p^{a_k} → ⊕ Z/p^n`, `k`-th summand by `p^{n - a_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeData {
    pub source: Partition,
    pub envelope: Partition,
    pub embedding: ZpnMatrix,
}

pub fn injective_envelope(params: RingParams, m: &Partition) -> EnvelopeData {
    let n = params.n();
    let envelope = Partition::from_unsorted(vec![n; m.len()]);
    let embedding = ZpnMatrix::from_fn(params, m.parts().to_vec(), envelope.parts().to_vec(), |i, j| {
        if i == j {
            params.pow(n - m.parts()[j])
        } else {
            0
        }
    })
    .expect("p^{n-a} is a valid entry");
    EnvelopeData {
        source: m.clone(),
        envelope,
        embedding,
    }
}

/// Some `e: U → J` with `e ∘ kappa = target`, where `kappa: K → U` and `target: K → J`.
pub fn extend_through(kappa: &ZpnMatrix, target: &ZpnMatrix) -> Option<ZpnMatrix> {
    let r = *kappa.params();
    let n = r.n();
    let u = kappa.tgt().to_vec();
    let j = target.tgt().to_vec();
    let nk = kappa.cols();
    let mut rows = Vec::with_capacity(j.len());
    for (row, &c) in j.iter().enumerate() {
        // e(row, x) = p^{max(0, c - a_x)} w_x with w_x ∈ Z/p^{min(a_x, c)}; lift the
        // condition Σ_x e(row, x) kappa(x, col) = target(row, col) into Z/p^n.
        let parts: Vec<u32> = u.iter().map(|&a| a.min(c)).collect();
        let lift = r.pow(n - c);
        let l = ZpnMatrix::from_fn(r, parts, vec![n; nk], |col, x| {
            let s = r.pow(c.saturating_sub(u[x]));
            r.mul(r.mul(lift, s), kappa.get(x, col))
        })
        .ok()?;
        let rhs: Vec<i64> = (0..nk).map(|col| r.mul(lift, target.get(row, col))).collect();
        let w = l.solve(&rhs)?;
        rows.push(
            w.iter()
                .zip(&u)
                .map(|(&wx, &a)| r.mul(wx, r.pow(c.saturating_sub(a))))
                .collect::<Vec<i64>>(),
        );
    }
    ZpnMatrix::new(r, u, j, &rows).ok()
}

/// Mimo of `m` with the projection onto `m`.
///
/// `M'_i = M_i ⊕ ⊕_{t(q) = i} J_{s(q)}` over all paths `q`, trivial ones included,
/// where `J_i` is the envelope of the kernel `K_i` of the incoming map at `i`.
pub fn mimo(m: &Rep) -> Result<(Rep, RepMorphism)> {
    mimo_with_lifts(m, None)
}

/// Mimo with each lift `e_i` shifted by a random map vanishing on `K_i`.
pub fn mimo_random_lift(m: &Rep, rng: &mut dyn RngCore) -> Result<(Rep, RepMorphism)> {
    mimo_with_lifts(m, Some(rng))
}

fn mimo_with_lifts(m: &Rep, mut noise: Option<&mut dyn RngCore>) -> Result<(Rep, RepMorphism)> {
    let q = m.quiver();
    let r = *m.params();
    let nv = q.vertex_count();
    let mut env = Vec::with_capacity(nv);
    let mut lifts = Vec::with_capacity(nv);
    for i in 0..nv {
        let inc = m.incoming_map(i);
        let k = inc.kernel();
        let data = injective_envelope(r, &k.partition());
        let no_lift = || Error::Internal(format!("no lift through the envelope at vertex {i}"));
        let mut e = extend_through(&k.embed, &data.embedding).ok_or_else(no_lift)?;
        if let Some(rng) = noise.as_deref_mut() {
            let f = random_map(r, inc.src(), data.envelope.parts(), rng);
            let fix = extend_through(&k.embed, &f.compose(&k.embed)?).ok_or_else(no_lift)?;
            e = e.add(&f.sub(&fix)?)?;
        }
        env.push(data.envelope);
        lifts.push(e);
    }
    // Offsets of the path blocks inside M'_i.
    let paths = q.paths();
    let mut offset = vec![0usize; paths.len()];
    let mut layout: Vec<Vec<u32>> = (0..nv).map(|i| m.module(i).parts().to_vec()).collect();
    for (k, p) in paths.iter().enumerate() {
        offset[k] = layout[p.target].len();
        layout[p.target].extend_from_slice(env[p.source].parts());
    }
    let mut maps = Vec::with_capacity(q.arrows().len());
    for (beta, &(j, i)) in q.arrows().iter().enumerate() {
        let mut h = ZpnMatrix::zero(r, layout[j].clone(), layout[i].clone());
        let hb = m.map(beta);
        for a in 0..hb.rows() {
            for b in 0..hb.cols() {
                h.set(a, b, hb.get(a, b));
            }
        }
        // The component of e_i on the summand M_j of arrow beta lands in the trivial-path block at i.
        let trivial = paths
            .iter()
            .position(|p| p.len == 0 && p.source == i)
            .ok_or_else(|| Error::Internal("missing trivial path".into()))?;
        let mut col = 0;
        for a in q.incoming(i) {
            let w = m.module(q.arrows()[a].0).len();
            if a == beta {
                for row in 0..env[i].len() {
                    for x in 0..w {
                        h.set(offset[trivial] + row, x, lifts[i].get(row, col + x));
                    }
                }
            }
            col += w;
        }
        for (k, p) in paths.iter().enumerate() {
            if p.target != j {
                continue;
            }
            let ext = q.extend_path(p, beta);
            for d in 0..env[p.source].len() {
                h.set(offset[ext] + d, offset[k] + d, 1);
            }
        }
        maps.push(h);
    }
    let (out, perm) = Rep::from_layout(q.clone(), r, layout, maps)?;
    let proj = RepMorphism {
        maps: (0..nv)
            .map(|v| {
                let len = m.module(v).len();
                ZpnMatrix::from_fn(r, out.module(v).parts().to_vec(), m.module(v).parts().to_vec(), |a, b| {
                    i64::from(perm[v][b] == a && a < len)
                })
            })
            .collect::<Result<_>>()?,
    };
    if let Some(w) = out.mono_witness() {
        return Err(Error::Internal(format!("Mimo output not mono at vertex {}", w.vertex)));
    }
    if !proj.is_morphism(&out, m) {
        return internal("Mimo projection is not a morphism");
    }
    Ok((out, proj))
}

/// Whether every morphism from each probe into `target` factors through `g: source → target`.
pub fn is_right_approximation(g: &RepMorphism, source: &Rep, target: &Rep, probes: &[Rep]) -> Result<bool> {
    if !g.is_morphism(source, target) {
        return Err(Error::Input("g is not a morphism between the given reps".into()));
    }
    let r = *target.params();
    for t in probes {
        if let Some(w) = t.mono_witness() {
            return Err(Error::NotMono(w.vertex));
        }
        let into = hom_space(t, target)?;
        let through = hom_space(t, source)?;
        let cols: Vec<Vec<i64>> = through
            .gens
            .iter()
            .map(|f| g.compose(f).map(|gf| vectorize(&r, &gf)))
            .collect::<Result<_>>()?;
        let dim = vectorize(&r, &RepMorphism::zero(t, target)).len();
        let sys = ZpnMatrix::from_fn(r, through.orders.clone(), vec![r.n(); dim], |i, l| cols[l][i])?;
        let solver = sys.solver();
        if into.gens.iter().any(|h| solver.solve(&vectorize(&r, h)).is_none()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stable restriction, hat lift, then Mimo; the result is isomorphic to `m`.
pub fn mimo_inverse_roundtrip(m: &Rep, seed: u64) -> Result<Rep> {
    if !m.is_mono() {
        return Err(Error::Precondition("input is not mono".into()));
    }
    if is_injective_object(m) {
        return Err(Error::Precondition("input is injective".into()));
    }
    if !is_indecomposable(m, seed)?.indecomposable {
        return Err(Error::Precondition("input is decomposable".into()));
    }
    Ok(mimo(&hat_lift(&stable_restrict(m)))?.0)
}
