use monocat::decomp::{is_indecomposable, is_isomorphic, strip_y};
use monocat::quiver::{Quiver, Rep};
use monocat::valuated::{
    canonical_sum, enumerate_irretractable_trees, is_deflation, is_inflation, is_injective_vg, is_irretractable,
    m_of_t, phi, s_of_gamma, s_of_t, tree_hull, tree_iso, vg_iso, ValuatedGroup, ValuatedTree,
};
use monocat::zpn::Sub;
use monocat::{Partition, RingParams, ZpnMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rp(p: u64, n: u32) -> RingParams {
    RingParams::new(p, n).unwrap()
}

fn tree(s: &str) -> ValuatedTree {
    ValuatedTree::parse(s).unwrap()
}

fn a2(r: RingParams, m1: &[u32], m2: &[u32], rows: &[Vec<i64>]) -> Rep {
    let h = ZpnMatrix::new(r, m1.to_vec(), m2.to_vec(), rows).unwrap();
    let part = |v: &[u32]| Partition::new(v.to_vec(), r.n()).unwrap();
    Rep::new(Quiver::linear_a(2), r, vec![part(m1), part(m2)], vec![h]).unwrap()
}

fn random_tree(rng: &mut ChaCha8Rng, m: usize) -> ValuatedTree {
    let parent: Vec<usize> = (1..=m).map(|x| rng.gen_range(0..x)).collect();
    let mut v = vec![0u32; m];
    for x in (1..=m).rev() {
        let below = (x + 1..=m).filter(|&c| parent[c - 1] == x).map(|c| v[c - 1] + 1).max().unwrap_or(0);
        v[x - 1] = below + rng.gen_range(0..2);
    }
    ValuatedTree::new(parent, v).unwrap()
}

fn relabel(t: &ValuatedTree, rng: &mut ChaCha8Rng) -> ValuatedTree {
    let m = t.len();
    let mut perm: Vec<usize> = (1..=m).collect();
    for i in (1..m).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    // new label of x is perm[x - 1]
    let mut parent = vec![0; m];
    let mut val = vec![0; m];
    for x in 1..=m {
        let q = t.parent(x);
        parent[perm[x - 1] - 1] = if q == 0 { 0 } else { perm[q - 1] };
        val[perm[x - 1] - 1] = t.valuation(x).unwrap();
    }
    ValuatedTree::new(parent, val).unwrap()
}

/// All idempotent endomorphisms by exhaustive enumeration of maps `{1..m} → {0..m}`.
fn brute_nontrivial_retractions(t: &ValuatedTree) -> usize {
    let m = t.len();
    let total = (m + 1).pow(m as u32);
    let val = |x: usize| t.valuation(x).map_or(u32::MAX, |v| v);
    let mut count = 0;
    for code in 0..total {
        let mut r = vec![0usize; m + 1];
        let mut c = code;
        for slot in r.iter_mut().skip(1) {
            *slot = c % (m + 1);
            c /= m + 1;
        }
        let ok = (1..=m).all(|x| r[t.parent(x)] == t.parent(r[x]) && val(r[x]) >= val(x))
            && (0..=m).all(|x| r[r[x]] == r[x]);
        let identity = (0..=m).all(|x| r[x] == x);
        let collapse = r.iter().all(|&y| y == 0);
        if ok && !identity && !collapse {
            count += 1;
        }
    }
    count
}

/// Rewrites one random reducible coefficient at a time.
fn random_rewrite(t: &ValuatedTree, p: i64, coeffs: &[i64], rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut c = coeffs.to_vec();
    loop {
        let bad: Vec<usize> = (0..c.len()).filter(|&k| !(0..p).contains(&c[k])).collect();
        if bad.is_empty() {
            return c;
        }
        let k = bad[rng.gen_range(0..bad.len())];
        let step = if c[k] >= p { 1 } else { -1 };
        c[k] -= step * p;
        let q = t.parent(k + 1);
        if q != 0 {
            c[q - 1] += step;
        }
    }
}

fn kernel_of_p_power_size(t: &ValuatedTree, p: i64, k: u32) -> usize {
    let m = t.len();
    let mut count = 0;
    for code in 0..(p as usize).pow(m as u32) {
        let mut c = code;
        let b: Vec<i64> = (0..m)
            .map(|_| {
                let d = (c % p as usize) as i64;
                c /= p as usize;
                d * p.pow(k)
            })
            .collect();
        if canonical_sum(t, p, &b).iter().all(|&x| x == 0) {
            count += 1;
        }
    }
    count
}

#[test]
fn parse_and_encode() {
    assert!(tree_iso(&tree("3(2)(10)"), &tree("3(10)(2)")));
    assert!(!tree_iso(&tree("21"), &tree("20")));
    assert_eq!(tree("3 ( 1 ) ( 0 )").encoding(), "3(0)(1)");
    assert_eq!(tree("43(2)(10)").len(), 5);
    assert_eq!(tree("(1)(0)").children()[0].len(), 2);
    assert_eq!(tree("210").encoding(), "210");
    assert!(ValuatedTree::parse("12").is_err());
    assert!(ValuatedTree::parse("3(2").is_err());
    assert!(ValuatedTree::parse("3x").is_err());
    let t = tree("4(30)(21)");
    let (back, n) = ValuatedTree::from_json(&t.to_json(5)).unwrap();
    assert_eq!((back, n), (t.clone(), 5));
    assert!(ValuatedTree::from_json(&t.to_json(4)).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let m = rng.gen_range(1..9);
        let t = random_tree(&mut rng, m);
        assert!(tree_iso(&t, &relabel(&t, &mut rng)));
        assert!(tree_iso(&t, &ValuatedTree::parse(&t.encoding()).unwrap()));
    }
}

#[test]
fn canonical_sums() {
    let t = tree("10");
    // Element 2 is the leaf with value 0.
    assert_eq!(canonical_sum(&t, 2, &[0, 2]), vec![1, 0]);
    assert_eq!(canonical_sum(&t, 3, &[0, 0]), vec![0, 0]);
    assert_eq!(canonical_sum(&tree("210"), 2, &[0, 0, 3]), vec![0, 1, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let m = rng.gen_range(1..8);
        let t = random_tree(&mut rng, m);
        let p = [2i64, 3, 5][rng.gen_range(0..3)];
        let raw: Vec<i64> = (0..m).map(|_| rng.gen_range(-30..30)).collect();
        assert_eq!(canonical_sum(&t, p, &raw), random_rewrite(&t, p, &raw, &mut rng));
    }
}

#[test]
fn irretractability_examples() {
    assert!(is_irretractable(&tree("21")).irretractable);
    assert!(is_irretractable(&tree("3(2)(10)")).irretractable);
    let t = tree("3(0)(0)");
    let res = is_irretractable(&t);
    assert!(!res.irretractable);
    let w = res.witness.unwrap();
    assert_eq!(w[1], 1);
    assert!(w[2] == w[3] && w[2] != 0);
    assert!(!is_irretractable(&tree("(1)(0)")).irretractable);
}

#[test]
fn irretractability_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..300 {
        let m = rng.gen_range(1..6);
        let t = random_tree(&mut rng, m);
        let res = is_irretractable(&t);
        assert_eq!(res.irretractable, brute_nontrivial_retractions(&t) == 0, "{t}");
    }
}

#[test]
fn simple_groups_match_rewriting_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for _ in 0..60 {
        let m = rng.gen_range(1..6);
        let t = random_tree(&mut rng, m);
        let n = t.max_value().unwrap() + 1;
        if n > 6 {
            continue;
        }
        let p = [2i64, 3][rng.gen_range(0..2)];
        let b = s_of_t(&t, rp(p as u64, n)).unwrap();
        assert_eq!(b.ambient().length() as usize, m);
        for k in 1..=n {
            let expect: u32 = b.ambient().parts().iter().map(|&a| a.min(k)).sum();
            assert_eq!(kernel_of_p_power_size(&t, p, k), (p as usize).pow(expect), "{t} p={p} k={k}");
        }
        for i in 1..n {
            let above = t.valuations().iter().filter(|&&v| v >= i).count() as u32;
            assert_eq!(b.level(i).order_exp(), above);
        }
    }
}

#[test]
fn s_of_t_examples() {
    let r = rp(2, 3);
    let b = s_of_t(&tree("1"), r).unwrap();
    assert_eq!(b.ambient().parts(), &[1]);
    assert_eq!(b.valuation(&[1]), Some(1));
    assert!(!is_injective_vg(&b));
    let b = s_of_t(&tree("10"), r).unwrap();
    assert_eq!(b.ambient().parts(), &[2]);
    assert_eq!(b.valuation(&[1]), Some(0));
    assert_eq!(b.valuation(&[2]), Some(1));
    assert!(is_injective_vg(&b));
    let b = s_of_t(&tree("3(1)(0)"), rp(2, 4)).unwrap();
    assert_eq!(b.ambient().parts(), &[2, 1]);
}

#[test]
fn phi_examples() {
    let r = rp(2, 3);
    let b = phi(&a2(r, &[2], &[3], &[vec![2]])).unwrap();
    assert_eq!(b.ambient().parts(), &[2]);
    assert_eq!(b.valuation(&[1]), Some(1));
    assert_eq!(b.valuation(&[2]), Some(2));
    assert_eq!(b.valuation(&[0]), None);
    let b = phi(&a2(r, &[], &[3], &[vec![]])).unwrap();
    assert!(b.ambient().is_empty());
    let b = phi(&a2(r, &[1], &[1], &[vec![1]])).unwrap();
    assert_eq!(b.valuation(&[1]), Some(0));
    assert!(phi(&a2(r, &[2], &[1], &[vec![1]])).is_err());
}

#[test]
fn phi_is_additive_and_satisfies_the_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let q = Quiver::linear_a(2);
    let r = rp(2, 3);
    for _ in 0..20 {
        let m = Rep::random_mono(&q, r, 1, &mut rng);
        let k = Rep::random_mono(&q, r, 1, &mut rng);
        let (s, perm) = m.direct_sum(&k).unwrap();
        let bs = phi(&s).unwrap();
        let (bm, bk) = (phi(&m).unwrap(), phi(&k).unwrap());
        let amb = bs.ambient().parts().to_vec();
        let len_m = m.module(0).len();
        for i in 1..3 {
            // perm[0][new] = old position in the concatenation m ⊕ k.
            let place = |g: &[i64], off: usize| {
                let mut x = vec![0i64; amb.len()];
                for (new, &old) in perm[0].iter().enumerate() {
                    if old >= off && old - off < g.len() {
                        x[new] = g[old - off];
                    }
                }
                x
            };
            let mut gens: Vec<Vec<i64>> = bm.level(i).gens().iter().map(|g| place(g, 0)).collect();
            gens.extend(bk.level(i).gens().iter().map(|g| place(g, len_m)));
            assert!(bs.level(i).same_as(&Sub::span(r, amb.clone(), &gens)));
        }
        for _ in 0..10 {
            let x: Vec<i64> = amb.iter().map(|&a| rng.gen_range(0..r.pow(a))).collect();
            let y: Vec<i64> = amb.iter().map(|&a| rng.gen_range(0..r.pow(a))).collect();
            let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let px: Vec<i64> = x.iter().map(|a| 2 * a).collect();
            let (vx, vy, vs) = (bs.valuation(&x), bs.valuation(&y), bs.valuation(&sum));
            let inf = |v: Option<u32>| v.unwrap_or(u32::MAX);
            assert!(inf(vs) >= inf(vx).min(inf(vy)));
            if vx.is_some() {
                assert!(inf(bs.valuation(&px)) > inf(vx));
            }
        }
    }
}

#[test]
fn inflation_and_deflation() {
    let r = rp(2, 2);
    let whole = |parts: Vec<u32>| Sub::whole(r, parts);
    let zero = |parts: Vec<u32>| Sub::zero(r, parts);
    let high = ValuatedGroup::new(r, Partition::new(vec![1], 2).unwrap(), vec![whole(vec![1])]).unwrap();
    let low = ValuatedGroup::new(r, Partition::new(vec![1], 2).unwrap(), vec![zero(vec![1])]).unwrap();
    let id = ZpnMatrix::identity(r, vec![1]);
    assert!(is_inflation(&id, &high, &high).unwrap());
    assert!(is_deflation(&id, &high, &high).unwrap());
    assert!(!is_inflation(&id, &low, &high).unwrap());
    assert!(is_inflation(&id, &high, &low).is_err());
    let zero_map = ZpnMatrix::zero(r, vec![1], vec![1]);
    assert!(!is_deflation(&zero_map, &high, &high).unwrap());

    // S("10") onto its quotient by the socle, with the inherited valuation.
    let s10 = s_of_t(&tree("10"), r).unwrap();
    let quotient = ValuatedGroup::new(r, Partition::new(vec![1], 2).unwrap(), vec![zero(vec![1])]).unwrap();
    let proj = ZpnMatrix::new(r, vec![2], vec![1], &[vec![1]]).unwrap();
    // Level-wise images by enumeration.
    let surjective = (0..2u32).all(|i| {
        let imgs: std::collections::BTreeSet<i64> = (0..4)
            .filter(|&x| s10.level(i).contains(&[x]))
            .map(|x| proj.apply(&[x])[0])
            .collect();
        (0..2).filter(|&y| quotient.level(i).contains(&[y])).all(|y| imgs.contains(&y))
    });
    assert_eq!(is_deflation(&proj, &s10, &quotient).unwrap(), surjective);
    assert!(surjective);
}

#[test]
fn hull_examples() {
    let t = tree("4(1)(2)");
    let hull = tree_hull(&t, 5).unwrap();
    assert_eq!(hull.tree.len(), 3 + 1 + 2 + 4);
    let h = hull.tree.heights();
    for x in 1..=hull.tree.len() {
        assert_eq!(hull.tree.valuation(x), Some(h[x]));
    }
    for x in 1..=3 {
        assert_eq!(hull.tree.valuation(hull.gamma[x - 1]), t.valuation(x));
    }
    let chain = tree("210");
    assert_eq!(tree_hull(&chain, 3).unwrap().tree, chain);
    let single = tree_hull(&tree("2"), 3).unwrap();
    assert_eq!(single.tree.len(), 3);
    assert_eq!(single.tree.encoding(), "210");
    assert!(tree_hull(&tree("3"), 3).is_err());
}

#[test]
fn m_of_t_examples() {
    for p in [2, 3] {
        let r = rp(p, 3);
        let pp = p as i64;
        assert!(is_isomorphic(&m_of_t(&tree("21"), r).unwrap(), &a2(r, &[2], &[3], &[vec![pp]]), 0).unwrap());
        let m20 = a2(r, &[2], &[3, 1], &[vec![pp], vec![1]]);
        assert!(is_isomorphic(&m_of_t(&tree("20"), r).unwrap(), &m20, 0).unwrap());
        assert!(is_isomorphic(&m_of_t(&tree("0"), r).unwrap(), &a2(r, &[1], &[1], &[vec![1]]), 0).unwrap());
    }
}

#[test]
fn simply_presented_realizations() {
    let r = rp(2, 4);
    for t in enumerate_irretractable_trees(4, 6) {
        let m = m_of_t(&t, r).unwrap();
        let b = s_of_t(&t, r).unwrap();
        assert!(phi(&m).unwrap().same_filtration(&b), "{t}");
        let (src, hull, f) = s_of_gamma(&t, r).unwrap();
        assert!(is_injective_vg(&hull), "{t}");
        assert!(is_inflation(&f, &src, &hull).unwrap(), "{t}");
        assert!(is_indecomposable(&m, 0).unwrap().indecomposable, "{t}");
        assert!(strip_y(&m, 0).unwrap().1.is_empty(), "{t}");
        assert!(vg_iso(&b, &m, &b, &m, 0).unwrap());
    }
    // Retractable trees give decomposable realizations.
    for s in ["3(0)(0)", "(1)(0)", "3(1)(0)"] {
        assert!(!is_indecomposable(&m_of_t(&tree(s), r).unwrap(), 0).unwrap().indecomposable, "{s}");
    }
}

#[test]
fn vg_iso_ignores_y_summands() {
    let r = rp(2, 3);
    let m = m_of_t(&tree("20"), r).unwrap();
    let (mx, _) = m.direct_sum(&a2(r, &[], &[2], &[vec![]])).unwrap();
    let (b, bx) = (phi(&m).unwrap(), phi(&mx).unwrap());
    assert!(vg_iso(&b, &m, &bx, &mx, 0).unwrap());
    let other = m_of_t(&tree("21"), r).unwrap();
    assert!(!vg_iso(&b, &m, &phi(&other).unwrap(), &other, 0).unwrap());
    assert!(vg_iso(&b, &other, &b, &m, 0).is_err());
}

#[test]
fn enumeration_small_cases() {
    let names: Vec<String> = enumerate_irretractable_trees(3, 7).iter().map(|t| t.encoding()).collect();
    assert_eq!(names, ["0", "1", "2", "10", "20", "21", "210"]);
    let four = enumerate_irretractable_trees(4, 7);
    assert_eq!(four.len(), 16);
    assert!(four.iter().any(|t| tree_iso(t, &tree("3(2)(10)"))));
}
