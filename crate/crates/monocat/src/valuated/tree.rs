//! Finite valuated trees, the simply presented groups `S(T)`, the hull
//! filtration, and the submodule realization `M_T`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::ValuatedGroup;
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::quiver::{Quiver, Rep};
use crate::zpn::{presentation_to_partition, reduce_elem, Partition, RingParams, Sub, ZpnMatrix};

/// A finite forest over the root `*`.
///
/// Elements are `1..=m`; `parent[x - 1]` is the image of `x` under `p`, with `0`
/// standing for `*`. Valuations are single digits so that the parenthesized
/// notation stays unambiguous.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValuatedTree {
    parent: Vec<usize>,
    valuation: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub n: u32,
    pub parent: Vec<usize>,
    pub valuation: Vec<u32>,
}

fn schema_one() -> u32 {
    1
}

#[derive(Clone, Debug)]
struct Node {
    v: u32,
    children: Vec<Node>,
}

impl ValuatedTree {
    pub fn new(parent: Vec<usize>, valuation: Vec<u32>) -> Result<Self> {
        let m = parent.len();
        if valuation.len() != m {
            return Err(Error::Input("parent and valuation lengths differ".into()));
        }
        if let Some(&v) = valuation.iter().find(|&&v| v > 9) {
            return Err(Error::Input(format!("valuation {v} is not a single digit")));
        }
        for x in 1..=m {
            let mut y = x;
            for _ in 0..=m {
                if y == 0 {
                    break;
                }
                let py = *parent
                    .get(y - 1)
                    .filter(|&&q| q <= m)
                    .ok_or_else(|| Error::Input(format!("parent of {y} out of range")))?;
                if py != 0 && valuation[py - 1] <= valuation[y - 1] {
                    return Err(Error::Input(format!("valuation does not increase from {y} to {py}")));
                }
                y = py;
            }
            if y != 0 {
                return Err(Error::Input(format!("element {x} does not reach the root")));
            }
        }
        Ok(ValuatedTree { parent, valuation })
    }

    pub fn empty() -> Self {
        ValuatedTree {
            parent: Vec::new(),
            valuation: Vec::new(),
        }
    }

    /// Number of elements other than `*`.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, x: usize) -> usize {
        if x == 0 {
            0
        } else {
            self.parent[x - 1]
        }
    }

    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn valuation(&self, x: usize) -> Option<u32> {
        if x == 0 {
            None
        } else {
            Some(self.valuation[x - 1])
        }
    }

    pub fn valuations(&self) -> &[u32] {
        &self.valuation
    }

    pub fn max_value(&self) -> Option<u32> {
        self.valuation.iter().copied().max()
    }

    /// Children of every element, the root included, in increasing order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len() + 1];
        for (k, &q) in self.parent.iter().enumerate() {
            out[q].push(k + 1);
        }
        out
    }

    /// Number of steps to the root; roots of the forest have depth 1.
    pub fn depth(&self, x: usize) -> usize {
        let mut d = 0;
        let mut y = x;
        while y != 0 {
            y = self.parent[y - 1];
            d += 1;
        }
        d
    }

    /// p-height: the length of the longest chain ending at `x`.
    pub fn heights(&self) -> Vec<u32> {
        let mut h = vec![0u32; self.len() + 1];
        let mut order: Vec<usize> = (1..=self.len()).collect();
        order.sort_by_key(|&x| std::cmp::Reverse(self.depth(x)));
        for x in order {
            let q = self.parent[x - 1];
            if q != 0 {
                h[q] = h[q].max(h[x] + 1);
            }
        }
        h
    }

    /// Elements ordered from the root outwards.
    fn top_down(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..=self.len()).collect();
        order.sort_by_key(|&x| (self.depth(x), x));
        order
    }

    fn to_nodes(&self) -> Vec<Node> {
        let ch = self.children();
        fn build(t: &ValuatedTree, ch: &[Vec<usize>], x: usize) -> Node {
            Node {
                v: t.valuation[x - 1],
                children: ch[x].iter().map(|&c| build(t, ch, c)).collect(),
            }
        }
        ch[0].iter().map(|&x| build(self, &ch, x)).collect()
    }

    fn from_nodes(roots: &[Node]) -> Self {
        let mut parent = Vec::new();
        let mut valuation = Vec::new();
        let mut queue: std::collections::VecDeque<(usize, &Node)> = roots.iter().map(|r| (0, r)).collect();
        while let Some((q, node)) = queue.pop_front() {
            parent.push(q);
            valuation.push(node.v);
            let me = parent.len();
            queue.extend(node.children.iter().map(|c| (me, c)));
        }
        ValuatedTree { parent, valuation }
    }

    /// Parses the parenthesized notation, e.g. `"210"`, `"3(2)(10)"` or `"(1)(0)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Ok(Self::empty());
        }
        let mut pos = 0;
        let roots = parse_forest(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Input(format!("unexpected '{}' at position {pos} in tree", chars[pos])));
        }
        let t = Self::from_nodes(&roots);
        Self::new(t.parent, t.valuation)
    }

    /// Canonical parenthesized notation; equal exactly for isomorphic trees.
    pub fn encoding(&self) -> String {
        encode_forest(&self.to_nodes())
    }

    /// `(size, encoding)`, the catalog ordering.
    pub fn sort_key(&self) -> (usize, String) {
        (self.len(), self.encoding())
    }

    /// The same tree with the canonical element numbering.
    pub fn canonical(&self) -> Self {
        let mut roots = self.to_nodes();
        sort_nodes(&mut roots);
        Self::from_nodes(&roots)
    }

    pub fn to_json(&self, n: u32) -> TreeJson {
        TreeJson {
            schema: 1,
            n,
            parent: self.parent.clone(),
            valuation: self.valuation.clone(),
        }
    }

    pub fn from_json(j: &TreeJson) -> Result<(Self, u32)> {
        if j.schema != 1 {
            return Err(Error::Input(format!("unsupported schema {}", j.schema)));
        }
        let t = Self::new(j.parent.clone(), j.valuation.clone())?;
        t.check_bound(j.n)?;
        Ok((t, j.n))
    }

    /// Every valuation is at most `n - 1`.
    pub fn check_bound(&self, n: u32) -> Result<()> {
        match self.max_value() {
            Some(v) if v + 1 > n => Err(Error::Input(format!("valuation {v} exceeds n - 1 = {}", n.saturating_sub(1)))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for ValuatedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl std::str::FromStr for ValuatedTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn parse_forest(c: &[char], pos: &mut usize) -> Result<Vec<Node>> {
    match c.get(*pos) {
        Some('(') => {
            let mut out = Vec::new();
            while c.get(*pos) == Some(&'(') {
                *pos += 1;
                out.extend(parse_forest(c, pos)?);
                if c.get(*pos) != Some(&')') {
                    return Err(Error::Input(format!("expected ')' at position {pos} in tree")));
                }
                *pos += 1;
            }
            Ok(out)
        }
        Some(d) if d.is_ascii_digit() => {
            let v = d.to_digit(10).unwrap_or(0);
            *pos += 1;
            let children = match c.get(*pos) {
                Some(x) if *x == '(' || x.is_ascii_digit() => parse_forest(c, pos)?,
                _ => Vec::new(),
            };
            Ok(vec![Node { v, children }])
        }
        Some(x) => Err(Error::Input(format!("unexpected '{x}' at position {pos} in tree"))),
        None => Err(Error::Input("tree ends unexpectedly".into())),
    }
}

fn node_size(n: &Node) -> usize {
    1 + n.children.iter().map(node_size).sum::<usize>()
}

fn encode_node(n: &Node) -> String {
    let mut s = n.v.to_string();
    s.push_str(&encode_forest(&n.children));
    s
}

fn encode_forest(nodes: &[Node]) -> String {
    let mut parts: Vec<(usize, String)> = nodes.iter().map(|c| (node_size(c), encode_node(c))).collect();
    parts.sort();
    match parts.len() {
        0 => String::new(),
        1 => parts.pop().map(|p| p.1).unwrap_or_default(),
        _ => parts.iter().map(|p| format!("({})", p.1)).collect(),
    }
}

fn sort_nodes(nodes: &mut [Node]) {
    for n in nodes.iter_mut() {
        sort_nodes(&mut n.children);
    }
    nodes.sort_by_cached_key(|n| (node_size(n), encode_node(n)));
}

pub fn tree_iso(a: &ValuatedTree, b: &ValuatedTree) -> bool {
    a.len() == b.len() && a.encoding() == b.encoding()
}

/// Rewrites an integer combination of the elements `1..=m` into the unique
/// form with coefficients in `[0, p)`, using `p·[x] = [p(x)]` and `[*] = 0`.
pub fn canonical_sum(t: &ValuatedTree, p: i64, coeffs: &[i64]) -> Vec<i64> {
    let mut c = coeffs.to_vec();
    c.resize(t.len(), 0);
    let mut order: Vec<usize> = (1..=t.len()).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(t.depth(x)));
    for x in order {
        let carry = c[x - 1].div_euclid(p);
        c[x - 1] = c[x - 1].rem_euclid(p);
        let q = t.parent(x);
        if q != 0 {
            c[q - 1] += carry;
        }
    }
    c
}

/// Outcome of the retraction search; the witness lists `r(x)` for `x = 0..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Retractability {
    pub irretractable: bool,
    pub witness: Option<Vec<usize>>,
}

/// Searches all idempotent endomorphisms for one other than the identity and
/// the collapse onto `*`.
pub fn is_irretractable(t: &ValuatedTree) -> Retractability {
    let m = t.len();
    let order = t.top_down();
    let ch = t.children();
    let mut r = vec![usize::MAX; m + 1];
    r[0] = 0;
    let found = search(t, &ch, &order, 0, &mut r);
    Retractability {
        irretractable: found.is_none(),
        witness: found,
    }
}

fn search(t: &ValuatedTree, ch: &[Vec<usize>], order: &[usize], k: usize, r: &mut Vec<usize>) -> Option<Vec<usize>> {
    if k == order.len() {
        let identity = (0..r.len()).all(|x| r[x] == x);
        let collapse = r.iter().all(|&y| y == 0);
        return (!identity && !collapse).then(|| r.clone());
    }
    let x = order[k];
    let image_of_parent = r[t.parent(x)];
    let v = t.valuation[x - 1];
    let mut cands: Vec<usize> = ch[image_of_parent].clone();
    if image_of_parent == 0 {
        cands.push(0);
    }
    for z in cands {
        if z != 0 && t.valuation[z - 1] < v {
            continue;
        }
        // Idempotence: r(z) = z once z is assigned, and nothing already sent to x may move x.
        if z != 0 && z != x && r[z] != usize::MAX && r[z] != z {
            continue;
        }
        if z != x && order[..k].iter().any(|&y| r[y] == x) {
            continue;
        }
        r[x] = z;
        if let Some(w) = search(t, ch, order, k + 1, r) {
            return Some(w);
        }
    }
    r[x] = usize::MAX;
    None
}

/// The hull `T_{n-1}` with the inclusion `γ`; elements of `T` keep their numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    pub tree: ValuatedTree,
    /// `gamma[x - 1]` is the image of `x`.
    pub gamma: Vec<usize>,
}

/// Adds, for `i = 1..n-1`, a chain `(x,0) → … → (x,i-1) → x` above every `x`
/// with `v(x) = i` and height below `i`.
pub fn tree_hull(t: &ValuatedTree, n: u32) -> Result<Hull> {
    t.check_bound(n)?;
    let m = t.len();
    let mut parent = t.parent.clone();
    let mut valuation = t.valuation.clone();
    for i in 1..n {
        let cur = ValuatedTree {
            parent: parent.clone(),
            valuation: valuation.clone(),
        };
        let h = cur.heights();
        for x in 1..=m {
            if t.valuation[x - 1] != i || h[x] >= i {
                continue;
            }
            let base = parent.len();
            // (x, k) gets number base + k + 1.
            for k in 0..i {
                parent.push(if k + 1 < i { base + k as usize + 2 } else { x });
                valuation.push(k);
            }
        }
    }
    Ok(Hull {
        tree: ValuatedTree { parent, valuation },
        gamma: (1..=m).collect(),
    })
}

/// `S(T)` together with the coordinates of every `[x]` in its cyclic decomposition.
struct Simple {
    group: ValuatedGroup,
    coords: Vec<Vec<i64>>,
    summand_gens: Vec<Vec<i64>>,
}

fn simple(t: &ValuatedTree, params: RingParams) -> Result<Simple> {
    t.check_bound(params.n())?;
    let m = t.len();
    let relations: Vec<Vec<i64>> = (1..=m)
        .map(|x| {
            let mut row = vec![0i64; m];
            row[x - 1] = params.p();
            let q = t.parent(x);
            if q != 0 {
                row[q - 1] = params.reduce(-1);
            }
            row
        })
        .collect();
    let pres = presentation_to_partition(params, &relations, m);
    let ambient = pres.partition.parts().to_vec();
    let levels = (1..params.n())
        .map(|i| {
            let gens: Vec<Vec<i64>> = (1..=m)
                .filter(|&x| t.valuation[x - 1] >= i)
                .map(|x| pres.gen_coords[x - 1].clone())
                .collect();
            Sub::span(params, ambient.clone(), &gens)
        })
        .collect();
    Ok(Simple {
        group: ValuatedGroup::new(params, pres.partition.clone(), levels)?,
        coords: pres.gen_coords,
        summand_gens: pres.summand_gens,
    })
}

/// The simply presented group `S(T)`; `B(i)` is spanned by the `[x]` with `v(x) >= i`.
pub fn s_of_t(t: &ValuatedTree, params: RingParams) -> Result<ValuatedGroup> {
    Ok(simple(t, params)?.group)
}

/// `S(T)`, `S(T_{n-1})` and the matrix of `S(γ)` between their cyclic decompositions.
pub fn s_of_gamma(t: &ValuatedTree, params: RingParams) -> Result<(ValuatedGroup, ValuatedGroup, ZpnMatrix)> {
    let hull = tree_hull(t, params.n())?;
    let src = simple(t, params)?;
    let tgt = simple(&hull.tree, params)?;
    let sp = src.group.ambient().parts().to_vec();
    let tp = tgt.group.ambient().parts().to_vec();
    let cols: Vec<Vec<i64>> = src
        .summand_gens
        .iter()
        .map(|g| {
            let mut img = vec![0i64; tp.len()];
            for (x, &c) in g.iter().enumerate() {
                let y = &tgt.coords[hull.gamma[x] - 1];
                for (slot, &e) in img.iter_mut().zip(y) {
                    *slot = params.reduce(*slot + params.mul(c, e));
                }
            }
            reduce_elem(&params, &tp, &img)
        })
        .collect();
    let f = ZpnMatrix::from_fn(params, sp, tp, |i, j| cols[j][i])?;
    Ok((src.group, tgt.group, f))
}

/// `M_T`: the map `S(γ): S(T) → S(T_{n-1})` as an object of `sub(Z/(p^n))`.
pub fn m_of_t(t: &ValuatedTree, params: RingParams) -> Result<Rep> {
    let (src, tgt, f) = s_of_gamma(t, params)?;
    let n = params.n();
    let rep = Rep::new(
        Quiver::linear_a(2),
        params,
        vec![
            Partition::new(src.ambient().parts().to_vec(), n)?,
            Partition::new(tgt.ambient().parts().to_vec(), n)?,
        ],
        vec![f],
    )?;
    if let Some(w) = rep.mono_witness() {
        return Err(Error::Internal(format!("S(γ) is not injective at vertex {}", w.vertex)));
    }
    Ok(rep)
}

/// All irretractable trees with at most `max_nodes` elements and values below `n`,
/// one per isomorphism class, sorted by [`ValuatedTree::sort_key`].
pub fn enumerate_irretractable_trees(n: u32, max_nodes: usize) -> Vec<ValuatedTree> {
    enumerate_irretractable_trees_with(n, max_nodes, Exec::default(), &|_, _| {})
}

/// As [`enumerate_irretractable_trees`], reporting `(node count, candidates)` before each size.
///
/// Only connected trees are generated: a forest with two or more components
/// retracts onto any one of them.
pub fn enumerate_irretractable_trees_with(
    n: u32,
    max_nodes: usize,
    exec: Exec,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Vec<ValuatedTree> {
    let by_size = rooted_trees(n, max_nodes);
    let mut out = Vec::new();
    for (size, trees) in by_size.iter().enumerate().skip(1) {
        progress(size, trees.len());
        let keep = exec.map(trees, |t| is_irretractable(t).irretractable);
        out.extend(trees.iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t.clone()));
    }
    out.sort_by_cached_key(|t| t.sort_key());
    out.dedup_by(|a, b| a.encoding() == b.encoding());
    out
}

/// `out[s]`: every rooted valuated tree with `s` elements, one per isomorphism class.
fn rooted_trees(n: u32, max_nodes: usize) -> Vec<Vec<ValuatedTree>> {
    // Nested form, indexed by size; each list holds (root value, node).
    let mut nested: Vec<Vec<Node>> = vec![Vec::new(); max_nodes + 1];
    for size in 1..=max_nodes {
        for v in 0..n {
            // Candidate children: smaller trees with root value below v, in a fixed order.
            let pool: Vec<(usize, &Node)> = (1..size)
                .flat_map(|s| nested[s].iter().filter(|c| c.v < v).map(move |c| (s, c)))
                .collect();
            let mut picks = Vec::new();
            let mut found = Vec::new();
            multisets(&pool, 0, size - 1, &mut picks, &mut found);
            let new: Vec<Node> = found
                .into_iter()
                .map(|idx| Node {
                    v,
                    children: idx.iter().map(|&k| pool[k].1.clone()).collect(),
                })
                .collect();
            nested[size].extend(new);
        }
    }
    nested
        .iter()
        .map(|list| list.iter().map(|node| ValuatedTree::from_nodes(std::slice::from_ref(node)).canonical()).collect())
        .collect()
}

fn multisets(
    pool: &[(usize, &Node)],
    start: usize,
    remaining: usize,
    picks: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        out.push(picks.clone());
        return;
    }
    for k in start..pool.len() {
        if pool[k].0 <= remaining {
            picks.push(k);
            multisets(pool, k, remaining - pool[k].0, picks, out);
            picks.pop();
        }
    }
}
