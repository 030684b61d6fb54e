use rand::Rng;

use super::Quiver;
use crate::error::{input, internal, Error, Result};
use crate::zpn::{Partition, RingParams, Solver, Sub, ZpnMatrix};

/// A representation `(M_i, h_α)` with every `M_i` a sorted direct sum of cyclic modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    quiver: Quiver,
    params: RingParams,
    modules: Vec<Partition>,
    maps: Vec<ZpnMatrix>,
}

/// Vertex where the incoming map fails to be injective, with a nonzero kernel element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoWitness {
    pub vertex: usize,
    pub element: Vec<i64>,
}

impl Rep {
    pub fn new(quiver: Quiver, params: RingParams, modules: Vec<Partition>, maps: Vec<ZpnMatrix>) -> Result<Self> {
        if modules.len() != quiver.vertex_count() {
            return input(format!(
                "{} vertex modules for a quiver with {} vertices",
                modules.len(),
                quiver.vertex_count()
            ));
        }
        if maps.len() != quiver.arrows().len() {
            return input(format!(
                "{} arrow maps for a quiver with {} arrows",
                maps.len(),
                quiver.arrows().len()
            ));
        }
        if modules.iter().flat_map(|m| m.parts()).any(|&a| a > params.n()) {
            return input(format!("module part exceeds n = {}", params.n()));
        }
        for (k, (&(s, t), h)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if h.params() != &params {
                return Err(Error::QuiverMismatch);
            }
            if h.src() != modules[s].parts() || h.tgt() != modules[t].parts() {
                return input(format!("map of arrow {k} does not match its endpoint modules"));
            }
        }
        Ok(Rep {
            quiver,
            params,
            modules,
            maps,
        })
    }

    /// Builds a representation from arbitrary-order vertex modules, sorting the
    /// parts of each vertex decreasingly (stable) and permuting the maps to match.
    ///
    /// Returns the permutation per vertex: `perm[v][new] = old`.
    pub fn from_layout(
        quiver: Quiver,
        params: RingParams,
        layout: Vec<Vec<u32>>,
        maps: Vec<ZpnMatrix>,
    ) -> Result<(Self, Vec<Vec<usize>>)> {
        if layout.len() != quiver.vertex_count() || maps.len() != quiver.arrows().len() {
            return input("layout does not match the quiver");
        }
        let perm: Vec<Vec<usize>> = layout
            .iter()
            .map(|parts| {
                let mut idx: Vec<usize> = (0..parts.len()).filter(|&k| parts[k] > 0).collect();
                idx.sort_by(|&a, &b| parts[b].cmp(&parts[a]));
                idx
            })
            .collect();
        let modules: Vec<Partition> = layout
            .iter()
            .zip(&perm)
            .map(|(parts, idx)| Partition::from_unsorted(idx.iter().map(|&k| parts[k]).collect()))
            .collect();
        let mut out = Vec::with_capacity(maps.len());
        for (k, (&(s, t), h)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if h.src() != layout[s].as_slice() || h.tgt() != layout[t].as_slice() {
                return input(format!("map of arrow {k} does not match the layout"));
            }
            out.push(h.select(&perm[t], &perm[s]));
        }
        Ok((Self::new(quiver, params, modules, out)?, perm))
    }

    pub fn zero(quiver: Quiver, params: RingParams) -> Self {
        let modules = vec![Partition::zero(); quiver.vertex_count()];
        let maps = vec![ZpnMatrix::zero(params, Vec::new(), Vec::new()); quiver.arrows().len()];
        Rep {
            quiver,
            params,
            modules,
            maps,
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn module(&self, v: usize) -> &Partition {
        &self.modules[v]
    }

    pub fn modules(&self) -> &[Partition] {
        &self.modules
    }

    pub fn map(&self, arrow: usize) -> &ZpnMatrix {
        &self.maps[arrow]
    }

    pub fn maps(&self) -> &[ZpnMatrix] {
        &self.maps
    }

    /// Sum of the composition lengths of all vertex modules.
    pub fn total_length(&self) -> u32 {
        self.modules.iter().map(Partition::length).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(Partition::is_empty)
    }

    pub fn same_shape(&self, other: &Rep) -> bool {
        self.quiver == other.quiver && self.params == other.params
    }

    /// `⊕_{t(α)=v} M_{s(α)} → M_v`, summands in (source, arrow index) order.
    pub fn incoming_map(&self, v: usize) -> ZpnMatrix {
        let mut out = ZpnMatrix::zero(self.params, Vec::new(), self.modules[v].parts().to_vec());
        for a in self.quiver.incoming(v) {
            out = out.hstack(&self.maps[a]).expect("targets agree");
        }
        out
    }

    pub fn mono_witness(&self) -> Option<MonoWitness> {
        (0..self.quiver.vertex_count()).find_map(|v| {
            let k = self.incoming_map(v).kernel();
            k.gens().into_iter().next().map(|element| MonoWitness { vertex: v, element })
        })
    }

    pub fn is_mono(&self) -> bool {
        self.mono_witness().is_none()
    }

    /// `self ⊕ other` in sorted layout, with `perm[v][new] = old` where old
    /// indices of `other` are offset by the size of `self` at that vertex.
    pub fn direct_sum(&self, other: &Rep) -> Result<(Rep, Vec<Vec<usize>>)> {
        if !self.same_shape(other) {
            return Err(Error::QuiverMismatch);
        }
        let layout = self
            .modules
            .iter()
            .zip(&other.modules)
            .map(|(a, b)| [a.parts(), b.parts()].concat())
            .collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(f, g)| f.block_diag(g)).collect();
        Rep::from_layout(self.quiver.clone(), self.params, layout, maps)
    }

    /// Sum of `k` copies.
    pub fn power(&self, k: usize) -> Result<Rep> {
        let mut out = Rep::zero(self.quiver.clone(), self.params);
        for _ in 0..k {
            out = out.direct_sum(self)?.0;
        }
        Ok(out)
    }
}

/// A morphism of representations, one matrix per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepMorphism {
    pub maps: Vec<ZpnMatrix>,
}

impl RepMorphism {
    pub fn identity(m: &Rep) -> Self {
        let maps = m
            .modules
            .iter()
            .map(|p| ZpnMatrix::identity(m.params, p.parts().to_vec()))
            .collect();
        RepMorphism { maps }
    }

    pub fn zero(m: &Rep, n: &Rep) -> Self {
        let maps = m
            .modules
            .iter()
            .zip(&n.modules)
            .map(|(a, b)| ZpnMatrix::zero(m.params, a.parts().to_vec(), b.parts().to_vec()))
            .collect();
        RepMorphism { maps }
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &RepMorphism) -> Result<RepMorphism> {
        let maps = self
            .maps
            .iter()
            .zip(&f.maps)
            .map(|(g, f)| g.compose(f))
            .collect::<Result<_>>()?;
        Ok(RepMorphism { maps })
    }

    pub fn add(&self, other: &RepMorphism) -> Result<RepMorphism> {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(RepMorphism { maps })
    }

    pub fn sub(&self, other: &RepMorphism) -> Result<RepMorphism> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> RepMorphism {
        RepMorphism {
            maps: self.maps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(ZpnMatrix::is_zero)
    }

    /// Checks types, well-formedness, and `φ_t ∘ h_α = h'_α ∘ φ_s` for every arrow.
    pub fn is_morphism(&self, m: &Rep, n: &Rep) -> bool {
        if !m.same_shape(n) || self.maps.len() != m.modules.len() {
            return false;
        }
        let typed = self.maps.iter().enumerate().all(|(v, f)| {
            f.params() == &m.params
                && f.src() == m.modules[v].parts()
                && f.tgt() == n.modules[v].parts()
                && f.is_well_formed()
        });
        typed
            && m.quiver.arrows().iter().enumerate().all(|(a, &(s, t))| {
                let l = self.maps[t].compose(&m.maps[a]);
                let r = n.maps[a].compose(&self.maps[s]);
                matches!((l, r), (Ok(l), Ok(r)) if l == r)
            })
    }

    /// Bijective at every vertex.
    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(|f| f.src() == f.tgt() && f.is_injective())
    }
}

/// Flattens `φ` into Λ-coordinates: entry `(v, i, j)` becomes `p^{n-b_i} φ_v(i, j)`.
pub fn vectorize(params: &RingParams, phi: &RepMorphism) -> Vec<i64> {
    let mut out = Vec::new();
    for f in &phi.maps {
        for i in 0..f.rows() {
            let s = params.pow(params.n() - f.tgt()[i]);
            out.extend((0..f.cols()).map(|j| params.mul(f.get(i, j), s)));
        }
    }
    out
}

/// `Hom(M, N)` as a finite abelian group: `gens[l]` has order `p^{orders[l]}`
/// and every morphism is `Σ t_l gens[l]` for unique `t_l ∈ [0, p^{orders[l]})`.
pub struct HomSpace {
    pub params: RingParams,
    pub gens: Vec<RepMorphism>,
    pub orders: Vec<u32>,
    vec_map: ZpnMatrix,
    solver: Solver,
}

impl HomSpace {
    /// Exponent of the group order.
    pub fn order_exp(&self) -> u32 {
        self.orders.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The injective map `⊕ Z/p^{orders} → Λ^E` sending coordinates to vectorized morphisms.
    pub fn vec_map(&self) -> &ZpnMatrix {
        &self.vec_map
    }

    pub fn coords(&self, phi: &RepMorphism) -> Option<Vec<i64>> {
        self.solver.solve(&vectorize(&self.params, phi))
    }

    pub fn combine(&self, t: &[i64], m: &Rep, n: &Rep) -> RepMorphism {
        let mut out = RepMorphism::zero(m, n);
        for (g, &c) in self.gens.iter().zip(t) {
            if c != 0 {
                out = out.add(&g.scale(c)).expect("same types");
            }
        }
        out
    }
}

pub fn hom_space(m: &Rep, n: &Rep) -> Result<HomSpace> {
    if !m.same_shape(n) {
        return Err(Error::QuiverMismatch);
    }
    let r = m.params;
    let nv = m.quiver.vertex_count();
    // Coefficient slots: φ_v(i, j) = c · p^{max(0, b_i - a_j)}, c ∈ Z/p^{min(a_j, b_i)}.
    let mut offset = vec![0usize; nv + 1];
    let mut parts = Vec::new();
    let mut scale = Vec::new();
    for v in 0..nv {
        for &b in n.modules[v].parts() {
            for &a in m.modules[v].parts() {
                parts.push(a.min(b));
                scale.push(r.pow(b.saturating_sub(a)));
            }
        }
        offset[v + 1] = parts.len();
    }
    let slot = |v: usize, i: usize, j: usize| offset[v] + i * m.modules[v].len() + j;
    let mut eqs: Vec<Vec<i64>> = Vec::new();
    for (a, &(s, t)) in m.quiver.arrows().iter().enumerate() {
        let (h, h2) = (&m.maps[a], &n.maps[a]);
        for (i, &b) in n.modules[t].parts().iter().enumerate() {
            let lift = r.pow(r.n() - b);
            for j in 0..m.modules[s].len() {
                let mut row = vec![0i64; parts.len()];
                for k in 0..m.modules[t].len() {
                    let c = slot(t, i, k);
                    row[c] = r.reduce(row[c] + r.mul(scale[c], h.get(k, j)));
                }
                for l in 0..n.modules[s].len() {
                    let c = slot(s, l, j);
                    row[c] = r.reduce(row[c] - r.mul(h2.get(i, l), scale[c]));
                }
                eqs.push(row.into_iter().map(|x| r.mul(x, lift)).collect());
            }
        }
    }
    let tgt = vec![r.n(); eqs.len()];
    let constraints = ZpnMatrix::from_fn(r, parts.clone(), tgt, |e, c| eqs[e][c])
        .or_else(|e| internal(format!("hom constraint matrix malformed: {e}")))?;
    let kernel = constraints.kernel();
    let orders = kernel.parts().to_vec();
    let gens: Vec<RepMorphism> = kernel
        .gens()
        .iter()
        .map(|c| {
            let maps = (0..nv)
                .map(|v| {
                    let (src, tgt) = (m.modules[v].parts().to_vec(), n.modules[v].parts().to_vec());
                    ZpnMatrix::from_fn(r, src, tgt, |i, j| {
                        let k = slot(v, i, j);
                        r.mul(c[k], scale[k])
                    })
                    .expect("slot scaling respects divisibility")
                })
                .collect();
            RepMorphism { maps }
        })
        .collect();
    let cols: Vec<Vec<i64>> = gens.iter().map(|g| vectorize(&r, g)).collect();
    let dim = cols.first().map_or_else(|| vectorize(&r, &RepMorphism::zero(m, n)).len(), Vec::len);
    let vec_map = ZpnMatrix::from_fn(r, orders.clone(), vec![r.n(); dim], |i, l| cols[l][i])
        .or_else(|e| internal(format!("vectorized generator malformed: {e}")))?;
    let solver = vec_map.solver();
    Ok(HomSpace {
        params: r,
        gens,
        orders,
        vec_map,
        solver,
    })
}

/// `f_!(X)` at vertex `i`: one copy of `X` at `k` per path `i → k`.
pub fn f_shriek(quiver: &Quiver, params: RingParams, x: &Partition, i: usize) -> Result<Rep> {
    let nv = quiver.vertex_count();
    if i >= nv {
        return input(format!("vertex {i} out of range"));
    }
    let paths = quiver.paths_from(i);
    // Position of each path among the paths with the same target.
    let mut slot = vec![0usize; paths.len()];
    let mut count = vec![0usize; nv];
    for (k, p) in paths.iter().enumerate() {
        slot[k] = count[p.target];
        count[p.target] += 1;
    }
    let w = x.len();
    let layout: Vec<Vec<u32>> = (0..nv).map(|v| x.parts().repeat(count[v])).collect();
    let mut maps: Vec<ZpnMatrix> = quiver
        .arrows()
        .iter()
        .map(|&(s, t)| ZpnMatrix::zero(params, layout[s].clone(), layout[t].clone()))
        .collect();
    for (k, p) in paths.iter().enumerate() {
        for (a, &(s, _)) in quiver.arrows().iter().enumerate() {
            if s != p.target {
                continue;
            }
            let q = quiver.extend_path(p, a);
            let qk = paths.iter().position(|pp| **pp == quiver.paths()[q]).expect("path from i");
            for d in 0..w {
                maps[a].set(slot[qk] * w + d, slot[k] * w + d, 1);
            }
        }
    }
    Ok(Rep::from_layout(quiver.clone(), params, layout, maps)?.0)
}

/// Mono with every vertex module free over Z/(p^n).
pub fn is_injective_object(m: &Rep) -> bool {
    let n = m.params.n();
    m.modules.iter().all(|p| p.parts().iter().all(|&a| a == n)) && m.is_mono()
}

/// `Hom(M, N)` and its subgroup of maps factoring through an injective object.
pub struct StableHom {
    pub hom: HomSpace,
    /// Submodule of the coordinate group `⊕ Z/p^{hom.orders}`.
    pub ideal: Sub,
}

impl StableHom {
    /// Exponent of the order of `Hom(M, N) / I(M, N)`.
    pub fn quotient_exp(&self) -> u32 {
        self.hom.order_exp() - self.ideal.order_exp()
    }

    pub fn factors_through_injective(&self, phi: &RepMorphism) -> bool {
        self.hom.coords(phi).is_some_and(|c| self.ideal.contains(&c))
    }
}

/// Computes `I(M, N)` as the span of all `g ∘ f` with `f: M → f_!Λ(i)` and
/// `g: f_!Λ(i) → N`; every injective object is a sum of such `f_!Λ(i)`.
pub fn stable_hom(m: &Rep, n: &Rep) -> Result<StableHom> {
    let hom = hom_space(m, n)?;
    let r = m.params;
    let lam = Partition::new(vec![r.n()], r.n())?;
    let mut coords = Vec::new();
    for i in 0..m.quiver.vertex_count() {
        let inj = f_shriek(&m.quiver, r, &lam, i)?;
        let into = hom_space(m, &inj)?;
        let out = hom_space(&inj, n)?;
        for f in &into.gens {
            for g in &out.gens {
                let c = hom
                    .coords(&g.compose(f)?)
                    .ok_or_else(|| Error::Internal("composite is not a morphism".into()))?;
                coords.push(c);
            }
        }
    }
    let ideal = Sub::span(r, hom.orders.clone(), &coords);
    Ok(StableHom { hom, ideal })
}

/// A representative of an object modulo injectives: no vertex part equals `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableRep {
    pub quiver: Quiver,
    pub params: RingParams,
    pub modules: Vec<Partition>,
    pub maps: Vec<ZpnMatrix>,
}

impl StableRep {
    pub fn is_zero(&self) -> bool {
        self.modules.iter().all(Partition::is_empty)
    }
}

/// Splits off the order-`p^n` summands at every vertex and keeps the blocks
/// of the arrow maps between the remaining coordinates.
pub fn stable_restrict(m: &Rep) -> StableRep {
    let n = m.params.n();
    let keep: Vec<Vec<usize>> = m
        .modules
        .iter()
        .map(|p| (0..p.len()).filter(|&k| p.parts()[k] < n).collect())
        .collect();
    let modules = m
        .modules
        .iter()
        .zip(&keep)
        .map(|(p, idx)| Partition::from_unsorted(idx.iter().map(|&k| p.parts()[k]).collect()))
        .collect();
    let maps = m
        .quiver
        .arrows()
        .iter()
        .zip(&m.maps)
        .map(|(&(s, t), h)| h.select(&keep[t], &keep[s]))
        .collect();
    StableRep {
        quiver: m.quiver.clone(),
        params: m.params,
        modules,
        maps,
    }
}

/// The representation with the same modules and the stored representative maps.
pub fn hat_lift(s: &StableRep) -> Rep {
    Rep::new(s.quiver.clone(), s.params, s.modules.clone(), s.maps.clone()).expect("stable data is consistent")
}

impl Rep {
    /// Seeded random representation with at most `max_parts` cyclic summands per vertex.
    pub fn random(quiver: &Quiver, params: RingParams, max_parts: usize, rng: &mut (impl Rng + ?Sized)) -> Rep {
        let n = params.n();
        let modules: Vec<Partition> = (0..quiver.vertex_count())
            .map(|_| {
                let k = rng.gen_range(0..=max_parts);
                Partition::from_unsorted((0..k).map(|_| rng.gen_range(1..=n)).collect())
            })
            .collect();
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| random_map(params, modules[s].parts(), modules[t].parts(), rng))
            .collect();
        Rep::new(quiver.clone(), params, modules, maps).expect("random data is consistent")
    }

    /// Seeded random representation whose incoming maps are all injective.
    ///
    /// Built vertex by vertex in topological order: each vertex receives the
    /// direct sum of its predecessors plus random extra summands, and the
    /// incoming map is an injective random map.
    pub fn random_mono(quiver: &Quiver, params: RingParams, max_extra: usize, rng: &mut (impl Rng + ?Sized)) -> Rep {
        loop {
            let m = Rep::random(quiver, params, max_extra, rng);
            if m.is_mono() {
                return m;
            }
            if let Some(fixed) = mono_envelope_random(&m, max_extra, rng) {
                return fixed;
            }
        }
    }
}

/// A random morphism `⊕Z/p^{src} → ⊕Z/p^{tgt}`.
pub fn random_map(params: RingParams, src: &[u32], tgt: &[u32], rng: &mut (impl Rng + ?Sized)) -> ZpnMatrix {
    let vals: Vec<Vec<i64>> = tgt
        .iter()
        .map(|&b| {
            src.iter()
                .map(|&a| {
                    let need = b.saturating_sub(a);
                    rng.gen_range(0..params.pow(b - need)) * params.pow(need)
                })
                .collect()
        })
        .collect();
    ZpnMatrix::new(params, src.to_vec(), tgt.to_vec(), &vals).expect("random entries respect divisibility")
}

fn mono_envelope_random(m: &Rep, max_extra: usize, rng: &mut (impl Rng + ?Sized)) -> Option<Rep> {
    let q = m.quiver();
    let r = *m.params();
    let order = q.topological_order()?;
    let mut modules: Vec<Vec<u32>> = vec![Vec::new(); q.vertex_count()];
    let mut maps: Vec<Option<ZpnMatrix>> = vec![None; q.arrows().len()];
    for &v in &order {
        let inc = q.incoming(v);
        let mut parts: Vec<u32> = inc.iter().flat_map(|&a| modules[q.arrows()[a].0].clone()).collect();
        let extra = rng.gen_range(0..=max_extra);
        parts.extend((0..extra).map(|_| rng.gen_range(1..=r.n())));
        // Incoming summands embed as coordinates; a random automorphism mixes them.
        let mut col = 0;
        for &a in &inc {
            let s = q.arrows()[a].0;
            let mut h = ZpnMatrix::zero(r, modules[s].clone(), parts.clone());
            for k in 0..modules[s].len() {
                h.set(col + k, k, 1);
            }
            col += modules[s].len();
            maps[a] = Some(h);
        }
        let mix = random_unipotent(r, &parts, rng);
        for &a in &inc {
            let h = maps[a].take().expect("set above");
            maps[a] = Some(mix.compose(&h).ok()?);
        }
        modules[v] = parts;
    }
    let maps = maps.into_iter().collect::<Option<Vec<_>>>()?;
    Rep::from_layout(q.clone(), r, modules, maps).ok().map(|x| x.0)
}

/// Identity plus a random strictly lower-triangular endomorphism.
fn random_unipotent(r: RingParams, parts: &[u32], rng: &mut (impl Rng + ?Sized)) -> ZpnMatrix {
    let mut m = random_map(r, parts, parts, rng);
    for i in 0..parts.len() {
        for j in i..parts.len() {
            m.set(i, j, i64::from(i == j));
        }
    }
    m
}
