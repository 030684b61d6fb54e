use monocat::decomp::{decompose, is_isomorphic};
use monocat::mimo::{
    extend_through, injective_envelope, is_right_approximation, mimo, mimo_inverse_roundtrip, mimo_random_lift,
};
use monocat::quiver::{f_shriek, is_injective_object, Quiver, Rep, RepMorphism};
use monocat::{Partition, RingParams, ZpnMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rp(p: u64, n: u32) -> RingParams {
    RingParams::new(p, n).unwrap()
}

fn part(v: &[u32], n: u32) -> Partition {
    Partition::new(v.to_vec(), n).unwrap()
}

fn a2(r: RingParams, m1: &[u32], m2: &[u32], rows: &[Vec<i64>]) -> Rep {
    let h = ZpnMatrix::new(r, m1.to_vec(), m2.to_vec(), rows).unwrap();
    Rep::new(Quiver::linear_a(2), r, vec![part(m1, r.n()), part(m2, r.n())], vec![h]).unwrap()
}

#[test]
fn envelope_examples() {
    let r = rp(2, 3);
    let e = injective_envelope(r, &part(&[1], 3));
    assert_eq!(e.embedding.get(0, 0), 4);
    assert!(injective_envelope(r, &Partition::zero()).envelope.is_empty());
    let e = injective_envelope(r, &part(&[2, 1], 3));
    assert_eq!(e.envelope.parts(), &[3, 3]);
    assert_eq!(e.embedding.to_rows(), vec![vec![2, 0], vec![0, 4]]);
    assert!(e.embedding.is_injective());
}

#[test]
fn extension_restricts_to_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let r = rp(3, 3);
    for _ in 0..50 {
        let src = monocat::quiver::random_map(r, &[3, 2, 1], &[2, 2, 1], &mut rng);
        let k = src.kernel();
        let env = injective_envelope(r, &k.partition());
        let e = extend_through(&k.embed, &env.embedding).expect("injective targets extend");
        assert_eq!(e.compose(&k.embed).unwrap(), env.embedding);
    }
}

#[test]
fn mimo_examples() {
    let r = rp(2, 3);
    let m = a2(r, &[1], &[], &[]);
    let (out, proj) = mimo(&m).unwrap();
    assert_eq!(out, a2(r, &[1], &[3], &[vec![4]]));
    assert!(proj.is_morphism(&out, &m));
    let m2 = a2(r, &[2], &[3, 1], &[vec![2], vec![1]]);
    let (out, proj) = mimo(&m2).unwrap();
    assert_eq!(out, m2);
    assert_eq!(proj, RepMorphism::identity(&m2));
}

#[test]
fn mimo_contract_on_random_reps() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let quivers = [
        Quiver::linear_a(2),
        Quiver::linear_a(3),
        Quiver::new(3, vec![(0, 1), (2, 1)]).unwrap(),
        Quiver::d(4).unwrap(),
    ];
    for q in &quivers {
        for n in 1..=3 {
            let r = rp(2, n);
            let probes: Vec<Rep> = (0..4).map(|_| Rep::random_mono(q, r, 1, &mut rng)).collect();
            for _ in 0..6 {
                let m = Rep::random(q, r, 2, &mut rng);
                let (out, proj) = mimo(&m).unwrap();
                assert!(out.is_mono());
                assert!(is_right_approximation(&proj, &out, &m, &probes).unwrap());
                let (again, _) = mimo(&out).unwrap();
                assert_eq!(again, out);
                let (other, _) = mimo_random_lift(&m, &mut rng).unwrap();
                assert!(is_isomorphic(&other, &out, 0).unwrap());
            }
        }
    }
}

#[test]
fn mimo_has_no_injective_summand_in_the_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let q = Quiver::linear_a(3);
    let r = rp(2, 2);
    for _ in 0..10 {
        let m = Rep::random(&q, r, 2, &mut rng);
        let (out, proj) = mimo(&m).unwrap();
        for piece in decompose(&out, 0).unwrap().pieces {
            if is_injective_object(&piece.rep) {
                assert!(!proj.compose(&piece.inj).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn right_approximation_examples() {
    let r = rp(2, 3);
    let m2 = a2(r, &[1], &[3], &[vec![4]]);
    let m0 = a2(r, &[1], &[1], &[vec![1]]);
    let id = RepMorphism::identity(&m2);
    assert!(is_right_approximation(&id, &m2, &m2, &[m0.clone(), m2.clone()]).unwrap());
    let x3 = a2(r, &[], &[3], &[vec![]]);
    let g = RepMorphism {
        maps: vec![
            ZpnMatrix::zero(r, vec![], vec![1]),
            ZpnMatrix::identity(r, vec![3]),
        ],
    };
    assert!(!is_right_approximation(&g, &x3, &m2, &[m0]).unwrap());
    let bad = a2(r, &[2], &[1], &[vec![1]]);
    assert!(is_right_approximation(&id, &m2, &m2, &[bad]).is_err());
}

#[test]
fn roundtrip_examples() {
    let r = rp(2, 3);
    let m20 = a2(r, &[2], &[3, 1], &[vec![2], vec![1]]);
    assert!(is_isomorphic(&mimo_inverse_roundtrip(&m20, 0).unwrap(), &m20, 0).unwrap());
    let m0 = a2(r, &[1], &[1], &[vec![1]]);
    assert_eq!(mimo_inverse_roundtrip(&m0, 0).unwrap(), m0);
    let inj = f_shriek(&Quiver::linear_a(2), r, &part(&[3], 3), 0).unwrap();
    assert!(mimo_inverse_roundtrip(&inj, 0).is_err());
}
