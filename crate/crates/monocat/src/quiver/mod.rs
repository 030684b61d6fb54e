//! Finite acyclic quivers and their representations over Z/(p^n).

mod rep;

pub use rep::{
    f_shriek, hat_lift, hom_space, is_injective_object, random_map, stable_hom, stable_restrict,
    vectorize,
    HomSpace, MonoWitness, Rep, RepMorphism, StableHom, StableRep,
};

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

/// A path: `arrows` composed left to right starting at `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    pub len: usize,
    pub source: usize,
    pub arrows: Vec<usize>,
    pub target: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    labels: Option<Vec<String>>,
    #[serde(skip)]
    paths: OnceLock<Vec<Path>>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= vertices || t >= vertices) {
            return input(format!("arrow {s}->{t} leaves the vertex range 0..{vertices}"));
        }
        let q = Quiver {
            vertices,
            arrows,
            labels: None,
            paths: OnceLock::new(),
        };
        if q.topological_order().is_none() {
            return input("quiver has a directed cycle");
        }
        Ok(q)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vertices {
            return input("label count differs from vertex count");
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Linearly oriented A_m: `0 -> 1 -> ... -> m-1`.
    pub fn linear_a(m: usize) -> Self {
        Self::new(m, (1..m).map(|i| (i - 1, i)).collect()).expect("acyclic")
    }

    /// D_m with the fork pointing at the last vertex: `0 -> m-1`, `1 -> m-1`,
    /// and the chain `2 -> 3 -> ... -> m-1`. For m = 4 this is three arrows into vertex 3.
    pub fn d(m: usize) -> Result<Self> {
        if m < 4 {
            return input("D_m needs m >= 4");
        }
        let mut arrows = vec![(0, m - 1), (1, m - 1)];
        arrows.extend((2..m - 1).map(|i| (i, i + 1)));
        Self::new(m, arrows)
    }

    /// E_m oriented towards the branch vertex 3, arms `{0}`, `{1, 2}`, `{4, .., m-1}`.
    pub fn e(m: usize) -> Result<Self> {
        if !(6..=8).contains(&m) {
            return input("E_m needs m in 6..=8");
        }
        let mut arrows = vec![(0, 3), (1, 2), (2, 3), (4, 3)];
        arrows.extend((5..m).map(|i| (i, i - 1)));
        Self::new(m, arrows)
    }

    /// Parses `a2`..`a9`, `d4`..`d9`, `e6`..`e8`.
    pub fn shorthand(name: &str) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        let (kind, num) = name.split_at(1.min(name.len()));
        let m: usize = num
            .parse()
            .map_err(|_| crate::Error::Input(format!("unknown quiver shorthand {name:?}")))?;
        match kind {
            "a" if (1..=9).contains(&m) => Ok(Self::linear_a(m)),
            "d" if (4..=9).contains(&m) => Self::d(m),
            "e" => Self::e(m),
            _ => input(format!("unknown quiver shorthand {name:?}")),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.vertices];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).rev().collect();
        let mut order = Vec::with_capacity(self.vertices);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.push(t);
                    }
                }
            }
        }
        (order.len() == self.vertices).then_some(order)
    }

    /// Arrows ending at `v`, sorted by (source, arrow index).
    pub fn incoming(&self, v: usize) -> Vec<usize> {
        let mut a: Vec<usize> = (0..self.arrows.len()).filter(|&k| self.arrows[k].1 == v).collect();
        a.sort_by_key(|&k| (self.arrows[k].0, k));
        a
    }

    /// All paths including trivial ones, in length-then-lexicographic order.
    pub fn paths(&self) -> &[Path] {
        self.paths.get_or_init(|| {
            let mut all: Vec<Path> = (0..self.vertices)
                .map(|v| Path {
                    len: 0,
                    source: v,
                    arrows: Vec::new(),
                    target: v,
                })
                .collect();
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for p in &frontier {
                    for (k, &(s, t)) in self.arrows.iter().enumerate() {
                        if s == p.target {
                            let mut arrows = p.arrows.clone();
                            arrows.push(k);
                            next.push(Path {
                                len: p.len + 1,
                                source: p.source,
                                arrows,
                                target: t,
                            });
                        }
                    }
                }
                all.extend(next.iter().cloned());
                frontier = next;
            }
            all.sort();
            all
        })
    }

    pub fn paths_from(&self, v: usize) -> Vec<&Path> {
        self.paths().iter().filter(|p| p.source == v).collect()
    }

    pub fn paths_to(&self, v: usize) -> Vec<&Path> {
        self.paths().iter().filter(|p| p.target == v).collect()
    }

    /// Index into [`Quiver::paths`] of `arrow · p`.
    pub fn extend_path(&self, p: &Path, arrow: usize) -> usize {
        let mut arrows = p.arrows.clone();
        arrows.push(arrow);
        let q = Path {
            len: p.len + 1,
            source: p.source,
            arrows,
            target: self.arrows[arrow].1,
        };
        self.paths().binary_search(&q).expect("path exists")
    }
}
