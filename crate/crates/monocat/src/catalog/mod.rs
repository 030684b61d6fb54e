//! The indecomposables of `sub(Z/(p^n))` for `n <= 5` and of a D₄ quiver over
//! Z/(p²), built from the bundled fixtures, with verification drivers and the
//! representation-type table.

mod reptype;

pub use reptype::{dynkin_type, rep_type, DynkinType, RepTypeVerdict, TypeNote};

use serde::{Deserialize, Serialize};

use crate::decomp::{indecomposables_isomorphic, is_indecomposable, is_isomorphic, LocalityCert};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::quiver::{f_shriek, Quiver, Rep};
use crate::valuated::{enumerate_irretractable_trees, m_of_t, tree_iso, ValuatedTree};
use crate::zpn::{Partition, RingParams, ZpnMatrix};

const SUB_FIXTURE: &str = include_str!("../../data/sub.json");
const D4_FIXTURE: &str = include_str!("../../data/d4_n2.json");

/// Tree size bound used when enumerating irretractable trees for the catalogs.
pub const TREE_BOUND: usize = 7;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubFixture {
    schema: u32,
    entries: Vec<SubRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubRecord {
    name: String,
    #[serde(default)]
    tree: Option<String>,
    source: Vec<u32>,
    target: Vec<u32>,
    matrix: Vec<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct D4Fixture {
    schema: u32,
    quiver: String,
    n: u32,
    entries: Vec<D4Record>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct D4Record {
    name: String,
    modules: Vec<Vec<u32>>,
    maps: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntrySource {
    /// Built by `m_of_t`; the fixture matrix is kept as a duplicate to compare against.
    Tree { tree: String },
    /// Given only by a fixture matrix.
    Matrix,
    /// An object `0 → N`.
    Y,
    /// `f_!(Λ(i))`.
    Injective { vertex: usize },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub source: EntrySource,
    pub rep: Rep,
    /// The fixture matrix when the payload was built another way.
    pub explicit: Option<Rep>,
}

/// Expands one block token for a map `Z/p^a → Z/p^b`.
///
/// Tokens: `0`, `1`, `i` (inclusion), `pi` (projection), `p`, `p.i`, `p.pi`.
pub fn token_value(r: &RingParams, token: &str, a: u32, b: u32) -> Result<i64> {
    let need = |ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(Error::Input(format!("token '{token}' does not fit Z/p^{a} -> Z/p^{b}")))
        }
    };
    match token {
        "0" => Ok(0),
        "1" => need(b <= a).map(|_| 1),
        "i" => need(a <= b).map(|_| r.pow(b - a)),
        "pi" => need(a >= b).map(|_| 1),
        "p" => Ok(r.p()),
        "p.i" => need(a <= b).map(|_| r.pow(b - a + 1)),
        "p.pi" => need(a >= b).map(|_| r.p()),
        _ => Err(Error::Input(format!("unknown token '{token}'"))),
    }
}

/// A matrix of tokens, one row per target summand.
pub fn token_matrix(r: RingParams, src: &[u32], tgt: &[u32], rows: &[Vec<String>]) -> Result<ZpnMatrix> {
    if rows.len() != tgt.len() {
        return Err(Error::Input(format!("expected {} matrix rows", tgt.len())));
    }
    let mut vals = Vec::with_capacity(tgt.len());
    for (i, &b) in tgt.iter().enumerate() {
        let row = &rows[i];
        if row.len() != src.len() {
            return Err(Error::Input(format!("row {i} has {} entries, expected {}", row.len(), src.len())));
        }
        vals.push(
            row.iter()
                .zip(src)
                .map(|(t, &a)| token_value(&r, t, a, b))
                .collect::<Result<Vec<i64>>>()?,
        );
    }
    ZpnMatrix::new(r, src.to_vec(), tgt.to_vec(), &vals)
}

fn sub_fixture() -> Result<SubFixture> {
    let f: SubFixture = serde_json::from_str(SUB_FIXTURE).map_err(|e| Error::Internal(format!("sub fixture: {e}")))?;
    if f.schema != 1 {
        return Err(Error::Internal("sub fixture schema".into()));
    }
    Ok(f)
}

/// Every indecomposable of `sub(Z/(p^n))`, `1 <= n <= 5`, in fixture order.
pub fn build_catalog(n: u32, p: u64) -> Result<Vec<CatalogEntry>> {
    if !(1..=5).contains(&n) {
        return Err(Error::Unsupported(format!("no catalog for n = {n}")));
    }
    let r = RingParams::new(p, n)?;
    let q = Quiver::linear_a(2);
    let mut out = Vec::new();
    for rec in sub_fixture()?.entries {
        let top = rec.source.iter().chain(&rec.target).copied().max().unwrap_or(0);
        if top > n {
            continue;
        }
        let h = token_matrix(r, &rec.source, &rec.target, &rec.matrix)?;
        let (explicit, _) = Rep::from_layout(q.clone(), r, vec![rec.source.clone(), rec.target.clone()], vec![h])?;
        let entry = match rec.tree {
            Some(t) => {
                let tree = ValuatedTree::parse(&t)?;
                CatalogEntry {
                    name: rec.name,
                    source: EntrySource::Tree { tree: t },
                    rep: m_of_t(&tree, r)?,
                    explicit: Some(explicit),
                }
            }
            None => CatalogEntry {
                name: rec.name,
                source: if rec.source.is_empty() {
                    EntrySource::Y
                } else {
                    EntrySource::Matrix
                },
                rep: explicit,
                explicit: None,
            },
        };
        out.push(entry);
    }
    Ok(out)
}

/// The 12 non-injective indecomposables of `mono(D₄, Z/(p²))` and the four `f_!(Λ(i))`.
pub fn build_d4_catalog(p: u64) -> Result<Vec<CatalogEntry>> {
    let f: D4Fixture = serde_json::from_str(D4_FIXTURE).map_err(|e| Error::Internal(format!("d4 fixture: {e}")))?;
    if f.schema != 1 {
        return Err(Error::Internal("d4 fixture schema".into()));
    }
    let q = Quiver::shorthand(&f.quiver)?;
    let r = RingParams::new(p, f.n)?;
    let lambda = Partition::new(vec![f.n], f.n)?;
    let mut out = Vec::new();
    for rec in f.entries {
        if rec.maps.len() != q.arrows().len() || rec.modules.len() != q.vertex_count() {
            return Err(Error::Internal(format!("fixture entry {} does not fit the quiver", rec.name)));
        }
        let maps = q
            .arrows()
            .iter()
            .zip(&rec.maps)
            .map(|(&(s, t), rows)| token_matrix(r, &rec.modules[s], &rec.modules[t], rows))
            .collect::<Result<Vec<_>>>()?;
        let (explicit, _) = Rep::from_layout(q.clone(), r, rec.modules.clone(), maps)?;
        let injective = rec
            .name
            .strip_prefix("f!(L(")
            .and_then(|s| s.strip_suffix("))"))
            .and_then(|s| s.parse::<usize>().ok());
        out.push(match injective {
            Some(v) => CatalogEntry {
                name: rec.name,
                source: EntrySource::Injective { vertex: v },
                rep: f_shriek(&q, r, &lambda, v - 1)?,
                explicit: Some(explicit),
            },
            None => CatalogEntry {
                name: rec.name,
                source: EntrySource::Matrix,
                rep: explicit,
                explicit: None,
            },
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    #[serde(flatten)]
    pub source: EntrySource,
    pub modules: Vec<Vec<u32>>,
    pub mono: bool,
    pub indecomposable: bool,
    pub cert: Option<LocalityCert>,
    /// Whether the fixture duplicate is isomorphic to the payload, when there is one.
    pub matches_explicit: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogReport {
    pub schema: u32,
    pub catalog: String,
    pub p: u64,
    pub n: u32,
    pub seed: u64,
    pub total: usize,
    pub certified_indecomposable: usize,
    pub pairwise_distinct: bool,
    /// Irretractable trees found by enumeration, when the catalog has tree entries.
    pub enumerated_trees: Option<usize>,
    pub tree_entries: Option<usize>,
    /// Entries outside 𝒴 not isomorphic to any `M_T` of an enumerated tree.
    pub not_simply_presented: Option<Vec<String>>,
    pub entries: Vec<EntryReport>,
    pub failures: Vec<String>,
    pub pass: bool,
}

impl CatalogReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "catalog {} (p = {}, n = {}, seed = {}): {}\n",
            self.catalog,
            self.p,
            self.n,
            self.seed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        s.push_str(&format!(
            "  entries {}, certified indecomposable {}, pairwise distinct {}\n",
            self.total, self.certified_indecomposable, self.pairwise_distinct
        ));
        if let (Some(e), Some(t)) = (self.enumerated_trees, self.tree_entries) {
            s.push_str(&format!("  irretractable trees {e}, tree entries {t}\n"));
        }
        if let Some(ns) = &self.not_simply_presented {
            s.push_str(&format!("  not simply presented: {}\n", if ns.is_empty() { "none".into() } else { ns.join(", ") }));
        }
        for e in &self.entries {
            s.push_str(&format!(
                "  {:<14} mono {:<5} indecomposable {:<5} explicit {}\n",
                e.name,
                e.mono,
                e.indecomposable,
                e.matches_explicit.map_or("-".to_string(), |b| b.to_string())
            ));
        }
        for f in &self.failures {
            s.push_str(&format!("  failure: {f}\n"));
        }
        s
    }
}

fn entry_report(e: &CatalogEntry, seed: u64) -> Result<EntryReport> {
    let mono = e.rep.is_mono();
    let (indecomposable, cert) = if e.rep.is_zero() {
        (false, None)
    } else {
        let c = is_indecomposable(&e.rep, seed)?;
        (c.indecomposable, Some(c.cert))
    };
    let matches_explicit = match &e.explicit {
        Some(x) => Some(x.is_mono() && is_isomorphic(&e.rep, x, seed)?),
        None => None,
    };
    Ok(EntryReport {
        name: e.name.clone(),
        source: e.source.clone(),
        modules: e.rep.modules().iter().map(|p| p.parts().to_vec()).collect(),
        mono,
        indecomposable,
        cert,
        matches_explicit,
    })
}

/// Names of the isomorphic pairs among entries already certified indecomposable.
fn isomorphic_pairs(entries: &[CatalogEntry], exec: Exec) -> Result<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|i| (i + 1..entries.len()).map(move |j| (i, j)))
        .collect();
    let hits = exec.map(&pairs, |&(i, j)| indecomposables_isomorphic(&entries[i].rep, &entries[j].rep));
    let mut out = Vec::new();
    for (pair, hit) in pairs.into_iter().zip(hits) {
        if hit? {
            out.push(pair);
        }
    }
    Ok(out)
}

fn common_checks(
    name: String,
    entries: &[CatalogEntry],
    r: RingParams,
    exec: Exec,
    seed: u64,
) -> Result<CatalogReport> {
    let reports = exec
        .map(entries, |e| entry_report(e, seed))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    for e in &reports {
        if !e.mono {
            failures.push(format!("{} is not mono", e.name));
        }
        if !e.indecomposable {
            failures.push(format!("{} is not indecomposable", e.name));
        }
        if e.matches_explicit == Some(false) {
            failures.push(format!("{} differs from its fixture matrix", e.name));
        }
    }
    let iso = isomorphic_pairs(entries, exec)?;
    for &(i, j) in &iso {
        failures.push(format!("{} is isomorphic to {}", entries[i].name, entries[j].name));
    }
    Ok(CatalogReport {
        schema: 1,
        catalog: name,
        p: r.p() as u64,
        n: r.n(),
        seed,
        total: entries.len(),
        certified_indecomposable: reports.iter().filter(|e| e.mono && e.indecomposable).count(),
        pairwise_distinct: iso.is_empty(),
        enumerated_trees: None,
        tree_entries: None,
        not_simply_presented: None,
        entries: reports,
        failures,
        pass: false,
    })
}

/// Checks the `sub(Z/(p^n))` catalog: every entry mono and indecomposable,
/// pairwise non-isomorphic, tree entries equal to their fixture matrices, the
/// tree entries exactly the enumerated irretractable trees, and the entries not
/// realized by a tree.
pub fn verify_catalog(n: u32, p: u64, exec: Exec, seed: u64) -> Result<CatalogReport> {
    let r = RingParams::new(p, n)?;
    let entries = build_catalog(n, p)?;
    let mut report = common_checks(format!("sub(Z/p^{n})"), &entries, r, exec, seed)?;
    let trees = enumerate_irretractable_trees(n, TREE_BOUND);
    let tree_entries: Vec<ValuatedTree> = entries
        .iter()
        .filter_map(|e| match &e.source {
            EntrySource::Tree { tree } => ValuatedTree::parse(tree).ok(),
            _ => None,
        })
        .collect();
    if trees.len() != tree_entries.len() {
        report.failures.push(format!(
            "{} irretractable trees but {} tree entries",
            trees.len(),
            tree_entries.len()
        ));
    }
    for t in &trees {
        let hits = tree_entries.iter().filter(|u| tree_iso(t, u)).count();
        if hits != 1 {
            report.failures.push(format!("tree {t} matches {hits} entries"));
        }
    }
    let realized = exec
        .map(&trees, |t| m_of_t(t, r))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut not_sp = Vec::new();
    for e in &entries {
        if matches!(e.source, EntrySource::Y) {
            continue;
        }
        let hits = exec.map(&realized, |m| indecomposables_isomorphic(&e.rep, m));
        let mut any = false;
        for h in hits {
            any |= h?;
        }
        if !any {
            not_sp.push(e.name.clone());
        }
    }
    let expected: Vec<&str> = if n == 5 { vec!["M_F", "M_T"] } else { Vec::new() };
    if not_sp != expected {
        report
            .failures
            .push(format!("entries without a tree: {not_sp:?}, expected {expected:?}"));
    }
    report.enumerated_trees = Some(trees.len());
    report.tree_entries = Some(tree_entries.len());
    report.not_simply_presented = Some(not_sp);
    report.pass = report.failures.is_empty();
    Ok(report)
}

/// Checks the D₄ catalog: all entries mono and pairwise non-isomorphic, the
/// non-injective ones indecomposable, and the injectives equal to `f_!(Λ(i))`.
pub fn verify_d4_catalog(p: u64, exec: Exec, seed: u64) -> Result<CatalogReport> {
    let entries = build_d4_catalog(p)?;
    let r = *entries
        .first()
        .map(|e| e.rep.params())
        .ok_or_else(|| Error::Internal("empty D4 fixture".into()))?;
    let mut report = common_checks("mono(D4, Z/p^2)".into(), &entries, r, exec, seed)?;
    report.pass = report.failures.is_empty();
    Ok(report)
}
