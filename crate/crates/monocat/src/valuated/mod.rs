//! Finite p-valuated groups as filtrations `B = B(0) ⊇ B(1) ⊇ … ⊇ B(n) = 0`,
//! the functor Φ from submodule pairs, and valuated trees.

mod tree;

pub use tree::{
    canonical_sum, enumerate_irretractable_trees, enumerate_irretractable_trees_with, is_irretractable, m_of_t,
    s_of_t, s_of_gamma, tree_hull, tree_iso, Hull, Retractability, TreeJson, ValuatedTree,
};

use crate::decomp::{is_isomorphic, strip_y};
use crate::error::{Error, Result};
use crate::quiver::{Quiver, Rep};
use crate::zpn::{reduce_elem, Partition, RingParams, Sub, ZpnMatrix};

#[derive(Clone, Debug)]
pub struct ValuatedGroup {
    params: RingParams,
    ambient: Partition,
    /// `levels[i - 1] = B(i)` for `1 <= i <= n - 1`.
    levels: Vec<Sub>,
}

impl ValuatedGroup {
    /// Checks `B(i+1) ⊆ B(i)` and `p·B(i) ⊆ B(i+1)`.
    pub fn new(params: RingParams, ambient: Partition, levels: Vec<Sub>) -> Result<Self> {
        let n = params.n();
        if levels.len() != n.saturating_sub(1) as usize {
            return Err(Error::Input(format!("expected {} filtration levels", n.saturating_sub(1))));
        }
        if ambient.parts().iter().any(|&a| a > n) {
            return Err(Error::Input("ambient part exceeds n".into()));
        }
        if levels.iter().any(|s| s.ambient != ambient.parts()) {
            return Err(Error::Input("filtration level in a different ambient".into()));
        }
        let b = ValuatedGroup {
            params,
            ambient,
            levels,
        };
        for i in 0..n {
            let here = b.level(i);
            let next = b.level(i + 1);
            if !here.contains_sub(&next) {
                return Err(Error::Input(format!("B({}) is not contained in B({i})", i + 1)));
            }
            if !next.contains_sub(&b.times_p(&here)) {
                return Err(Error::Input(format!("p·B({i}) is not contained in B({})", i + 1)));
            }
        }
        Ok(b)
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn ambient(&self) -> &Partition {
        &self.ambient
    }

    /// `B(i)` for any `i >= 0`; `B(0)` is everything and `B(i)` vanishes for `i >= n`.
    pub fn level(&self, i: u32) -> Sub {
        let amb = self.ambient.parts().to_vec();
        if i == 0 {
            Sub::whole(self.params, amb)
        } else if i >= self.params.n() {
            Sub::zero(self.params, amb)
        } else {
            self.levels[i as usize - 1].clone()
        }
    }

    fn times_p(&self, s: &Sub) -> Sub {
        let gens: Vec<Vec<i64>> = s
            .gens()
            .iter()
            .map(|g| g.iter().map(|&x| self.params.mul(x, self.params.p())).collect())
            .collect();
        Sub::span(self.params, self.ambient.parts().to_vec(), &gens)
    }

    /// `p^i · B(0)`.
    pub fn p_power_part(&self, i: u32) -> Sub {
        let amb = self.ambient.parts();
        let gens: Vec<Vec<i64>> = (0..amb.len())
            .map(|k| (0..amb.len()).map(|l| if l == k { self.params.pow(i) } else { 0 }).collect())
            .collect();
        Sub::span(self.params, amb.to_vec(), &gens)
    }

    /// `v(x) = max{i : x ∈ B(i)}`, `None` for `x = 0`.
    pub fn valuation(&self, x: &[i64]) -> Option<u32> {
        if self.is_zero_elem(x) {
            return None;
        }
        (1..self.params.n()).take_while(|&i| self.level(i).contains(x)).last().or(Some(0))
    }

    /// p-height in `B(0)`, `None` for `x = 0`.
    pub fn height(&self, x: &[i64]) -> Option<u32> {
        if self.is_zero_elem(x) {
            return None;
        }
        (1..self.params.n()).take_while(|&i| self.p_power_part(i).contains(x)).last().or(Some(0))
    }

    fn is_zero_elem(&self, x: &[i64]) -> bool {
        reduce_elem(&self.params, self.ambient.parts(), x).iter().all(|&c| c == 0)
    }

    /// Same ambient and the same subgroups at every level.
    pub fn same_filtration(&self, other: &ValuatedGroup) -> bool {
        self.ambient == other.ambient && (1..self.params.n()).all(|i| self.level(i).same_as(&other.level(i)))
    }

    fn check_morphism(&self, f: &ZpnMatrix, tgt: &ValuatedGroup) -> Result<()> {
        if f.src() != self.ambient.parts() || f.tgt() != tgt.ambient.parts() {
            return Err(Error::Input("map shape does not match the valuated groups".into()));
        }
        for i in 1..self.params.n() {
            if !tgt.level(i).contains_sub(&self.level(i).map(f)?) {
                return Err(Error::Input(format!("map lowers the valuation at level {i}")));
            }
        }
        Ok(())
    }
}

/// Φ of a mono A₂ representation `h: M₁ → M₂`: `B(i) = h⁻¹(pⁱ M₂)`.
pub fn phi(m: &Rep) -> Result<ValuatedGroup> {
    if m.quiver() != &Quiver::linear_a(2) {
        return Err(Error::QuiverMismatch);
    }
    if let Some(w) = m.mono_witness() {
        return Err(Error::NotMono(w.vertex));
    }
    let r = *m.params();
    let h = m.map(0);
    let tgt = ValuatedGroup {
        params: r,
        ambient: m.module(1).clone(),
        levels: Vec::new(),
    };
    let levels = (1..r.n())
        .map(|i| tgt.p_power_part(i).preimage(h))
        .collect::<Result<Vec<_>>>()?;
    ValuatedGroup::new(r, m.module(0).clone(), levels)
}

/// Injective and `f⁻¹(B'(i)) = B(i)` at every level.
pub fn is_inflation(f: &ZpnMatrix, src: &ValuatedGroup, tgt: &ValuatedGroup) -> Result<bool> {
    src.check_morphism(f, tgt)?;
    if !f.is_injective() {
        return Ok(false);
    }
    for i in 1..src.params.n() {
        if !src.level(i).contains_sub(&tgt.level(i).preimage(f)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f(B(i)) = B'(i)` at every level, including `i = 0`.
pub fn is_deflation(f: &ZpnMatrix, src: &ValuatedGroup, tgt: &ValuatedGroup) -> Result<bool> {
    src.check_morphism(f, tgt)?;
    for i in 0..src.params.n() {
        if !src.level(i).map(f)?.contains_sub(&tgt.level(i)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `B(i) = pⁱ·B` for every `i`.
pub fn is_injective_vg(b: &ValuatedGroup) -> bool {
    (1..b.params.n()).all(|i| b.level(i).same_as(&b.p_power_part(i)))
}

/// Isomorphism of `b` and `c` decided on realizations `m`, `mc` with `Φ(m) = b`, `Φ(mc) = c`.
pub fn vg_iso(b: &ValuatedGroup, m: &Rep, c: &ValuatedGroup, mc: &Rep, seed: u64) -> Result<bool> {
    if !phi(m)?.same_filtration(b) || !phi(mc)?.same_filtration(c) {
        return Err(Error::Input("realization does not match the valuated group".into()));
    }
    let (x, _) = strip_y(m, seed)?;
    let (y, _) = strip_y(mc, seed)?;
    is_isomorphic(&x, &y, seed)
}
