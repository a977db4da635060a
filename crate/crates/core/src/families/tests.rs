use super::*;
use crate::matroid::iso_check;

fn figure(tag: FamilyTag) -> LinearMatroid {
    build_figure(tag).unwrap()
}

#[test]
fn figure_sizes() {
    for r in 4..=10 {
        assert_eq!(figure(FamilyTag::M(r)).len(), 2 * r);
        assert_eq!(figure(FamilyTag::N(r)).len(), 2 * r - 1);
        assert_eq!(figure(FamilyTag::L(r)).len(), r + 4);
        assert_eq!(figure(FamilyTag::J(r)).len(), r + 4);
        for tag in [FamilyTag::M(r), FamilyTag::N(r), FamilyTag::L(r), FamilyTag::J(r)] {
            let m = figure(tag);
            assert_eq!(m.rank(), r);
            assert!(m.is_simple(), "{tag} not simple");
            assert!(m.coloops().is_empty(), "{tag} has coloops");
        }
    }
}

#[test]
fn rank_guards() {
    assert!(matches!(
        build_figure(FamilyTag::M(2)),
        Err(FamilyError::RankOutOfRange { .. })
    ));
    assert!(matches!(
        build_figure(FamilyTag::J(3)),
        Err(FamilyError::RankOutOfRange { .. })
    ));
    assert!(figure(FamilyTag::M(3)).is_simple());
    assert_eq!(figure(FamilyTag::M(3)).len(), 6);
}

#[test]
fn designated_element_is_loose() {
    for r in 5..=9 {
        for tag in [FamilyTag::L(r), FamilyTag::J(r), FamilyTag::N(r)] {
            let m = figure(tag);
            let s = m.element_status("e").unwrap();
            assert!(s.is_loose && !s.is_free, "{tag}: {s:?}");
        }
        let m = figure(FamilyTag::M(r));
        assert_eq!(m.girth_through("e").unwrap(), Some(r));
    }
}

/// Brute-force girth of e in M_4 over all subsets of its 8 columns.
#[test]
fn m4_girth_brute_force() {
    let m = figure(FamilyTag::M(4));
    let e = m.index_of("e").unwrap();
    let mut best = usize::MAX;
    for mask in 1u32..256 {
        if mask >> e & 1 == 0 {
            continue;
        }
        let s: Vec<usize> = (0..8).filter(|&i| mask >> i & 1 == 1).collect();
        if m.is_circuit_idx(&s) {
            best = best.min(s.len());
        }
    }
    assert_eq!(best, 4);
    assert_eq!(m.girth_through("e").unwrap(), Some(4));
}

#[test]
fn structural_matches_figure() {
    for r in 4..=10 {
        for tag in [FamilyTag::L(r), FamilyTag::J(r), FamilyTag::M(r), FamilyTag::N(r)] {
            let fig = figure(tag);
            let (st, e) = build_structural(tag).unwrap();
            let e = e.unwrap();
            assert_eq!(st.rank(), r, "{tag}");
            let map = iso_check(&fig, &st, Some(("e", &e))).unwrap();
            assert!(map.is_some(), "{tag}: structural build differs from figure");
        }
    }
}

#[test]
fn structural_p_and_n_sizes() {
    let (p, _) = build_structural(FamilyTag::P(5)).unwrap();
    assert_eq!((p.rank(), p.len()), (5, 9));
    let (n6, _) = build_structural(FamilyTag::N(6)).unwrap();
    assert_eq!((n6.rank(), n6.len()), (6, 11));
    let (l5, _) = build_structural(FamilyTag::L(5)).unwrap();
    assert_eq!((l5.rank(), l5.len()), (5, 9));
    assert_eq!(build_figure(FamilyTag::P(2)).unwrap().len(), 3);
}

#[test]
fn m_is_self_dual() {
    for r in 3..=6 {
        let m = figure(FamilyTag::M(r));
        assert!(iso_check(&m, &m.dual(), None).unwrap().is_some(), "M_{r}");
    }
}

#[test]
fn series_substitution_properties() {
    let fano = build_named(FamilyTag::Fano).unwrap();
    let same = series_substitute(&fano, "c3", 1).unwrap();
    assert_eq!(same.circuits(None).unwrap(), fano.circuits(None).unwrap());
    for r in 4..8 {
        let l = series_substitute(&fano, "c1", r - 2).unwrap();
        assert_eq!((l.rank(), l.len()), (r, r + 4));
        let class: Vec<usize> = l
            .indices_of(&(1..=r - 2).map(|i| format!("c1_{i}")).collect::<Vec<_>>())
            .unwrap();
        for c in l.circuits(None).unwrap() {
            let hits = class.iter().filter(|x| c.contains(x)).count();
            assert!(hits == 0 || hits == class.len());
        }
    }
    let coloop = LinearMatroid::new(FqMatrix::identity(field(2).unwrap(), 2, None).unwrap()).unwrap();
    assert!(matches!(
        series_substitute(&coloop, "c1", 2),
        Err(FamilyError::Coloop(_))
    ));
}

#[test]
fn two_sum_rank_and_freeness() {
    let u24 = uniform(2, 4, 3)
        .unwrap()
        .with_labels(vec!["u1".into(), "u2".into(), "u3".into(), "u4".into()])
        .unwrap();
    for r in 2..7 {
        let c = build_named(FamilyTag::Circuit { r, q: 3 }).unwrap();
        let s = two_sum(&c, &u24, "b1", "u1").unwrap();
        assert_eq!(s.rank(), r + 1);
        assert!(s.element_status("e").unwrap().is_free);
        let p = parallel_connection(&c, &u24, "b1", "u1").unwrap();
        assert_eq!(p.rank(), r + 1);
        assert_eq!(p.len(), c.len() + 3);
    }
    let fano = build_named(FamilyTag::Fano).unwrap();
    assert!(matches!(
        parallel_connection(&fano, &fano, "c1", "c1"),
        Err(FamilyError::LabelCollision(_))
    ));
}

#[test]
fn named_matroids() {
    let ag = build_named(FamilyTag::Ag32).unwrap();
    assert_eq!((ag.rank(), ag.len()), (4, 8));
    assert!(ag.circuits(None).unwrap().iter().all(|c| c.len() == 4));
    assert!(ag.sparse_paving_checked().unwrap());

    let g = build_named(FamilyTag::Golay12).unwrap();
    assert_eq!((g.rank(), g.len()), (6, 12));
    assert!(g.is_paving());
    let c = g.circuits(None).unwrap();
    assert!(c.iter().all(|c| c.len() == 6 || c.len() == 7));
    assert_eq!(c.iter().filter(|c| c.len() == 6).count(), 132);
    assert!((0..12).all(|e| g.girth_through_idx(e) == Some(6)));

    assert!(matches!(uniform(2, 5, 3), Err(FamilyError::NotRepresentable { .. })));
    let u = uniform(3, 5, 4).unwrap();
    assert!(u.circuits(None).unwrap().iter().all(|c| c.len() == 4));
    assert_eq!(u.circuits(None).unwrap().len(), 5);
    for q in [2, 3] {
        let c = uniform(5, 6, q).unwrap();
        assert_eq!(c.circuits(None).unwrap(), vec![(0..6).collect::<Vec<_>>()]);
    }
}

/// The code is self-dual, so size-6 circuits are the supports of weight-6
/// codewords; count those supports directly from the code.
#[test]
fn golay_block_count_oracle() {
    let g = build_named(FamilyTag::Golay12).unwrap();
    let f = field(3).unwrap();
    let rep = g.rep();
    let mut supports = std::collections::HashSet::new();
    for msg in 1..729usize {
        let mut word = vec![0u8; 12];
        let mut m = msg;
        for i in 0..6 {
            let c = (m % 3) as u8;
            m /= 3;
            for j in 0..12 {
                word[j] = f.add(word[j], f.mul(c, rep.get(i, j)));
            }
        }
        let s: Vec<usize> = (0..12).filter(|&j| word[j] != 0).collect();
        if s.len() == 6 {
            supports.insert(s);
        }
    }
    assert_eq!(supports.len(), 132);
}

#[test]
fn series_pair_is_cocircuit() {
    let fano = build_named(FamilyTag::Fano).unwrap();
    let m = series_pair_extension(&fano, &[1, 1, 0], "e", "f").unwrap();
    assert_eq!(m.rank(), 4);
    assert!(m.is_cocircuit(&["e", "f"]).unwrap());
}

#[test]
fn tag_round_trip() {
    for s in [
        "L5",
        "J6",
        "M4",
        "N7",
        "P3",
        "Fano",
        "AG32",
        "Golay12",
        "U2,4@3",
        "Circuit5@3",
    ] {
        let t: FamilyTag = s.parse().unwrap();
        assert_eq!(t.to_string().parse::<FamilyTag>().unwrap(), t);
    }
    assert!("Q5".parse::<FamilyTag>().is_err());
}
