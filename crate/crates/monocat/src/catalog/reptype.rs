use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::Quiver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeNote {
    Tame,
    Open,
    Wild,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepTypeVerdict {
    pub finite: bool,
    /// Filled for infinite type when every component is of type A.
    pub note: Option<TypeNote>,
}

/// Type of a connected simply-laced graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DynkinType {
    A(usize),
    D(usize),
    E(usize),
    NotDynkin,
}

/// Connected components of the underlying graph as (vertices, arrow indices).
fn components(q: &Quiver) -> Vec<(Vec<usize>, Vec<usize>)> {
    let nv = q.vertex_count();
    let mut comp = vec![usize::MAX; nv];
    let mut out = Vec::new();
    for start in 0..nv {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[start] = id;
        let mut stack = vec![start];
        let mut verts = Vec::new();
        while let Some(v) = stack.pop() {
            verts.push(v);
            for &(s, t) in q.arrows() {
                let w = if s == v {
                    t
                } else if t == v {
                    s
                } else {
                    continue;
                };
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        verts.sort_unstable();
        out.push((verts, Vec::new()));
    }
    for (k, &(s, _)) in q.arrows().iter().enumerate() {
        out[comp[s]].1.push(k);
    }
    out
}

fn classify(q: &Quiver, verts: &[usize], arrows: &[usize]) -> DynkinType {
    let m = verts.len();
    // A connected graph is a tree iff it has m - 1 edges; loops and parallel arrows count as edges.
    if arrows.len() + 1 != m {
        return DynkinType::NotDynkin;
    }
    let edges: Vec<(usize, usize)> = arrows.iter().map(|&k| q.arrows()[k]).collect();
    let degree = |v: usize| edges.iter().filter(|&&(s, t)| s == v || t == v).count();
    let branch: Vec<usize> = verts.iter().copied().filter(|&v| degree(v) >= 3).collect();
    if branch.is_empty() {
        return DynkinType::A(m);
    }
    if branch.len() > 1 || degree(branch[0]) > 3 {
        return DynkinType::NotDynkin;
    }
    let c = branch[0];
    let mut arms: Vec<usize> = edges
        .iter()
        .filter_map(|&(s, t)| {
            if s == c {
                Some(t)
            } else if t == c {
                Some(s)
            } else {
                None
            }
        })
        .map(|first| {
            let (mut prev, mut cur, mut len) = (c, first, 1);
            loop {
                let next = edges.iter().find_map(|&(s, t)| {
                    if s == cur && t != prev {
                        Some(t)
                    } else if t == cur && s != prev {
                        Some(s)
                    } else {
                        None
                    }
                });
                match next {
                    Some(w) => {
                        prev = cur;
                        cur = w;
                        len += 1;
                    }
                    None => return len,
                }
            }
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, k] => DynkinType::D(k + 3),
        [1, 2, k @ 2..=4] => DynkinType::E(k + 4),
        _ => DynkinType::NotDynkin,
    }
}

/// Dynkin type of each connected component of the underlying graph.
pub fn dynkin_type(q: &Quiver) -> Vec<DynkinType> {
    components(q).iter().map(|(v, a)| classify(q, v, a)).collect()
}

const FINITE_A: [(u32, usize); 5] = [(3, 2), (4, 2), (5, 2), (3, 3), (3, 4)];

fn a_note(n: u32, m: usize) -> TypeNote {
    match (n, m) {
        (4, 3) | (3, 5) => TypeNote::Tame,
        (6, 2) => TypeNote::Open,
        _ => TypeNote::Wild,
    }
}

/// Representation type of `mono(Q, Z/(p^n))`.
pub fn rep_type(q: &Quiver, n: u32) -> Result<RepTypeVerdict> {
    if n == 0 {
        return Err(Error::Input("n must be at least 1".into()));
    }
    if q.topological_order().is_none() {
        return Err(Error::Input("quiver has a directed cycle".into()));
    }
    let types = dynkin_type(q);
    let finite_part = |t: &DynkinType| match *t {
        _ if n == 1 => true,
        DynkinType::A(1) => true,
        DynkinType::NotDynkin => false,
        _ if n == 2 => true,
        DynkinType::A(m) => FINITE_A.contains(&(n, m)),
        _ => false,
    };
    if types.iter().all(finite_part) {
        return Ok(RepTypeVerdict {
            finite: true,
            note: None,
        });
    }
    let all_a = types.iter().all(|t| matches!(t, DynkinType::A(_)));
    let note = if all_a {
        types
            .iter()
            .filter(|t| !finite_part(t))
            .map(|t| match *t {
                DynkinType::A(m) => a_note(n, m),
                _ => unreachable!(),
            })
            .max()
    } else {
        None
    };
    Ok(RepTypeVerdict { finite: false, note })
}
