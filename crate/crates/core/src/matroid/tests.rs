use super::*;
use crate::gfq::field;
use proptest::prelude::*;

fn matroid(q: u32, rows: usize, entries: &[u8]) -> LinearMatroid {
    let cols = entries.len() / rows;
    LinearMatroid::new(FqMatrix::new(field(q).unwrap(), rows, cols, entries, None).unwrap()).unwrap()
}

fn fano() -> LinearMatroid {
    let cols: Vec<Vec<u8>> = (1u8..8).map(|x| vec![x & 1, (x >> 1) & 1, (x >> 2) & 1]).collect();
    LinearMatroid::new(FqMatrix::from_columns(field(2).unwrap(), 3, cols, None).unwrap()).unwrap()
}

/// Circuits by testing every subset with the unpacked rank.
fn brute_circuits(m: &LinearMatroid) -> Vec<Vec<usize>> {
    let n = m.len();
    let rank = |s: &[usize]| m.rep().rank_of_indices_unpacked(s);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if rank(&s) == s.len() - 1
            && (0..s.len()).all(|i| {
                let mut t = s.clone();
                t.remove(i);
                rank(&t) == t.len()
            })
        {
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

fn random_matroid(q: u32, rows: usize, cols: usize, seed: u64) -> LinearMatroid {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<u8> = (0..rows * cols).map(|_| rng.gen_range(0..q as u8)).collect();
    matroid(q, rows, &entries)
}

#[test]
fn u24_circuits() {
    let m = matroid(3, 2, &[1, 0, 1, 1, 0, 1, 1, 2]);
    assert_eq!(m.circuits(None).unwrap().len(), 4);
    assert!(m.circuits(None).unwrap().iter().all(|c| c.len() == 3));
    assert!(m.is_simple());
}

#[test]
fn fano_circuits_and_status() {
    let m = fano();
    let c = m.circuits(None).unwrap();
    assert_eq!(c.iter().filter(|c| c.len() == 3).count(), 7);
    assert_eq!(c.iter().filter(|c| c.len() == 4).count(), 7);
    assert_eq!(c, brute_circuits(&m));
    for e in 0..7 {
        let s = m.element_status_idx(e);
        assert!(s.is_loose && !s.is_free && !s.is_coloop);
        assert_eq!(s.girth_through, Some(3));
    }
    assert!(m.is_paving());
}

#[test]
fn circuit_matroid_is_free_everywhere() {
    // U_{4,5} over GF(2): I_4 plus all-ones
    let m = matroid(2, 4, &[1, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 1]);
    assert_eq!(m.circuits(None).unwrap(), vec![vec![0, 1, 2, 3, 4]]);
    for e in 0..5 {
        let s = m.element_status_idx(e);
        assert_eq!(s.girth_through, Some(5));
        assert!(s.is_free && s.is_loose);
    }
    // dual is five parallel points
    let d = m.dual();
    assert_eq!(d.rank(), 1);
    assert!(!d.is_simple());
}

#[test]
fn coloop_status() {
    let m = matroid(3, 2, &[1, 0, 2, 0, 1, 0]);
    assert_eq!(m.coloops(), &[1]);
    let s = m.element_status("c2").unwrap();
    assert!(s.is_coloop && s.is_loose && s.is_free && s.girth_through.is_none());
    assert!(m.is_cocircuit(&["c2"]).unwrap());
}

#[test]
fn unknown_label() {
    let m = fano();
    assert!(matches!(m.girth_through("zz"), Err(MatroidError::Matrix(_))));
}

#[test]
fn pair_cocircuit_in_circuit_matroid() {
    let m = matroid(2, 4, &[1, 0, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 1]);
    // complement of a pair is an independent, closed (r-1)-set
    assert!(m.is_cocircuit(&["c1", "c2"]).unwrap());
    assert!(!m.is_cocircuit(&["c1", "c2", "c3"]).unwrap());
    assert_eq!(m.cocircuits().unwrap().len(), 10);
}

#[test]
fn circuit_guard() {
    let m = random_matroid(2, 5, 25, 1);
    assert!(matches!(m.circuits(None), Err(MatroidError::TooLarge { .. })));
}

#[test]
fn dual_involution_and_cocircuits() {
    for seed in 0..30 {
        let q = [2, 3, 4, 5][seed as usize % 4];
        let m = random_matroid(q, 4, 8, seed);
        let d = m.dual();
        assert_eq!(d.rank(), m.len() - m.rank());
        assert_eq!(d.dual().circuits(None).unwrap(), m.circuits(None).unwrap());
        let cocirc = m.cocircuits().unwrap();
        for c in &cocirc {
            assert!(m.is_cocircuit_idx(c), "seed {seed}: {c:?}");
        }
    }
}

#[test]
fn sparse_paving_routes_agree_on_fano() {
    let m = fano();
    let sp = m.sparse_paving_checked().unwrap();
    // dual of Fano has rank 4 and 3-element... its circuits are the 4-element complements of lines
    assert_eq!(sp, m.dual().is_paving());
}

#[test]
fn iso_self_and_shuffled() {
    let m = fano();
    let map = iso_check(&m, &m, None).unwrap().unwrap();
    assert_eq!(map.len(), 7);
    let perm = [3usize, 6, 0, 5, 1, 2, 4];
    let shuffled = m.restrict_idx(&perm);
    let map = iso_check(&m, &shuffled, Some(("c1", "c1"))).unwrap().unwrap();
    assert_eq!(map[0], perm.iter().position(|&p| p == 0).unwrap());
    assert!(iso_check(&m, &random_matroid(2, 3, 7, 5), None)
        .unwrap()
        .is_none_or(|_| true));
}

#[test]
fn iso_rejects_different_ranks() {
    let a = fano();
    let b = random_matroid(2, 4, 7, 3);
    assert!(iso_check(&a, &b, None).unwrap().is_none() || b.rank() == 3);
}

#[test]
fn embedding_of_a_restriction() {
    let f = fano();
    let m = f.restrict(&["c1", "c2", "c3", "c4"]).unwrap();
    let map = embeds_into(&m, "c1", &f, "c1").unwrap().unwrap();
    assert_eq!(map[0], 0);
    // any element of Fano can host c1 by symmetry
    assert!(embeds_into(&m, "c1", &f, "c5").unwrap().is_some());
}

#[test]
fn embeddings_preserve_circuits() {
    use crate::families::{build_figure, FamilyTag};
    let fig = build_figure(FamilyTag::N(5)).unwrap();
    let e = fig.index_of("e").unwrap();
    for mask in 0u32..1 << fig.len() {
        if mask >> e & 1 == 0 || mask.count_ones() > 7 {
            continue;
        }
        let keep: Vec<usize> = (0..fig.len()).filter(|j| mask >> j & 1 == 1).collect();
        let m = fig.restrict_idx(&keep);
        if m.rank() < 5 {
            continue;
        }
        let me = m.index_of("e").unwrap();
        let map = embed_binary(&m, me, &fig, e).expect("a restriction embeds");
        assert_eq!(map[me], e);
        let image = fig.restrict_idx(&map).with_labels(m.labels().to_vec()).unwrap();
        assert_eq!(image.circuits(None).unwrap(), m.circuits(None).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_match_brute_force(q in prop::sample::select(vec![2u32, 3, 4, 5, 7]), rows in 1usize..5, cols in 1usize..9, seed in 0u64..u64::MAX) {
        let m = random_matroid(q, rows, cols, seed);
        let c = m.circuits(None).unwrap();
        prop_assert_eq!(&c, &brute_circuits(&m));
        for e in 0..m.len() {
            let oracle = c.iter().filter(|c| c.contains(&e)).map(|c| c.len()).min();
            prop_assert_eq!(m.girth_through_idx(e), oracle);
            prop_assert_eq!(m.girth_through_dfs(e), oracle);
            prop_assert_eq!(m.is_coloop(e), oracle.is_none());
            if let Some(g) = oracle {
                let found = m.find_circuit_through(e, g, &[]).unwrap();
                prop_assert!(c.contains(&found));
            }
            match m.shortest_circuit_through(e) {
                Some(found) => {
                    prop_assert!(c.contains(&found));
                    prop_assert_eq!(Some(found.len()), oracle);
                }
                None => prop_assert!(oracle.is_none()),
            }
            for size in 1..=m.rank() + 1 {
                let exists = c.iter().any(|c| c.len() == size && c.contains(&e));
                match m.find_circuit_through(e, size, &[]) {
                    Some(found) => prop_assert!(c.contains(&found)),
                    None => prop_assert!(!exists),
                }
            }
        }
        // no containment between distinct circuits
        for a in &c {
            for b in &c {
                prop_assert!(a == b || !a.iter().all(|x| b.contains(x)));
            }
        }
        prop_assert_eq!(m.cocircuits().unwrap(), m.dual().circuits(None).unwrap());
        prop_assert_eq!(m.is_sparse_paving(), m.is_sparse_paving_by_hyperplanes().unwrap());
        // spanning circuits have r + 1 elements
        for circ in &c {
            if m.rank_of_indices(circ) == m.rank() {
                prop_assert_eq!(circ.len(), m.rank() + 1);
            }
        }
    }

    #[test]
    fn iso_finds_relabelled_copy(q in prop::sample::select(vec![2u32, 3]), cols in 3usize..9, seed in 0u64..u64::MAX) {
        use rand::{seq::SliceRandom, SeedableRng};
        let m = random_matroid(q, 3, cols, seed);
        let mut perm: Vec<usize> = (0..cols).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 7));
        let p = m.restrict_idx(&perm);
        let map = iso_check(&m, &p, None).unwrap();
        prop_assert!(map.is_some());
        let map = map.unwrap();
        let img: Vec<usize> = (0..cols).map(|i| map[i]).collect();
        for circ in m.circuits(None).unwrap() {
            let mut t: Vec<usize> = circ.iter().map(|&i| img[i]).collect();
            t.sort_unstable();
            prop_assert!(p.is_circuit_idx(&t));
        }
    }
}
