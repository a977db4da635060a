use super::*;
use crate::families::{
    build_figure, build_named, build_structural, series_pair_extension, two_sum, uniform, FamilyTag,
};
use crate::gfq::field;
use crate::lanes::{Gf3Lanes, Lanes};
use crate::matvec::FqMatrix;

fn projective_space(q: u32, r: usize) -> LinearMatroid {
    let f = field(q).unwrap();
    let mut cols = Vec::new();
    for idx in 1..(q as usize).pow(r as u32) {
        let mut c = vec![0u8; r];
        let mut x = idx;
        for slot in c.iter_mut() {
            *slot = (x % q as usize) as u8;
            x /= q as usize;
        }
        // keep one representative per point: leading nonzero entry 1
        if c.iter().find(|&&a| a != 0) == Some(&1) {
            cols.push(c);
        }
    }
    LinearMatroid::new(FqMatrix::from_columns(f, r, cols, None).unwrap()).unwrap()
}

#[test]
fn figures_classify_as_themselves() {
    for r in 4..=7 {
        for (tag, family) in [
            (FamilyTag::L(r), BinaryFamily::Lr),
            (FamilyTag::J(r), BinaryFamily::Jr),
            (FamilyTag::M(r), BinaryFamily::MrRestriction),
            (FamilyTag::N(r), BinaryFamily::NrRestriction),
        ] {
            let m = build_figure(tag).unwrap();
            let v = classify_binary_loose(&m, "e").unwrap();
            assert_eq!(v.family, family, "{tag}");
            assert_eq!(v.witness[m.index_of("e").unwrap()], r);
        }
    }
    let m = build_figure(FamilyTag::M(6)).unwrap();
    let v = classify_binary_loose(&m, "e").unwrap();
    assert_eq!(v.case, LooseCase::SpanningCase);
    assert_eq!(v.witness, (0..m.len()).collect::<Vec<_>>());
}

#[test]
fn structural_builds_classify_into_their_family() {
    for r in 4..=7 {
        for (tag, family) in [
            (FamilyTag::L(r), BinaryFamily::Lr),
            (FamilyTag::J(r), BinaryFamily::Jr),
            (FamilyTag::M(r), BinaryFamily::MrRestriction),
            (FamilyTag::N(r), BinaryFamily::NrRestriction),
        ] {
            let (m, e) = build_structural(tag).unwrap();
            let v = classify_binary_loose(&m, &e.unwrap()).unwrap();
            assert_eq!(v.family, family, "{tag}");
        }
    }
}

#[test]
fn binary_circuit_is_an_m_restriction() {
    let m = build_named(FamilyTag::Circuit { r: 6, q: 2 }).unwrap();
    for e in m.labels() {
        let v = classify_binary_loose(&m, e).unwrap();
        assert_eq!(v.family, BinaryFamily::MrRestriction);
        assert_eq!(v.case, LooseCase::SpanningCase);
    }
}

#[test]
fn binary_preconditions_and_non_loose_elements() {
    let pg = projective_space(2, 4);
    assert_eq!(pg.len(), 15);
    assert!(matches!(
        classify_binary_loose(&pg, "c1"),
        Err(ClassifyError::Precondition(_))
    ));
    for e in 0..pg.len() {
        assert!(binary_structure(&pg, e).is_err());
    }
    let u = uniform(2, 4, 3).unwrap();
    assert!(matches!(
        classify_binary_loose(&u, "c1"),
        Err(ClassifyError::Precondition(_))
    ));
}

#[test]
fn size_bound_matches_piecewise_statement() {
    assert_eq!(ternary_size_bound(5), 70);
    assert_eq!(ternary_size_bound(10), 157);
    assert_eq!(ternary_size_bound(11), 175);
    assert_eq!(ternary_size_bound(7), 105);
    for r in 2..=20usize {
        let r2 = r as i64;
        let piecewise = if r > 10 {
            (41 * r2 - 101) / 2
        } else {
            (35 * r2 - 35) / 2
        };
        assert_eq!(ternary_size_bound(r) as i64, piecewise, "r = {r}");
    }
}

/// Every vector of GF(3)^r in index order that keeps the matroid simple and
/// `e = (0, 1, .., 1)` loose.
fn greedy_ternary(r: usize) -> LinearMatroid {
    let f = field(3).unwrap();
    let mut cols: Vec<Vec<u8>> = (0..r).map(|i| (0..r).map(|k| (i == k) as u8).collect()).collect();
    let mut e = vec![1u8; r];
    e[0] = 0;
    cols.push(e);
    let n0 = cols.len();
    let mut labels = crate::matvec::default_labels(n0);
    labels[r] = "e".into();
    for idx in 1..3usize.pow(r as u32) {
        let v = Gf3Lanes::from_index(f, r, idx).unpack(f, r);
        if v.iter().find(|&&a| a != 0) != Some(&1) || cols.contains(&v) {
            continue;
        }
        cols.push(v);
        labels.push(format!("x{idx}"));
        let m = LinearMatroid::new(FqMatrix::from_columns(f, r, cols.clone(), Some(labels.clone())).unwrap()).unwrap();
        if !m.is_loose(r) {
            cols.pop();
            labels.pop();
        }
    }
    LinearMatroid::new(FqMatrix::from_columns(f, r, cols, Some(labels)).unwrap()).unwrap()
}

#[test]
fn ternary_census_on_a_greedy_extension() {
    for r in 5..=6 {
        let m = greedy_ternary(r);
        assert!(m.coloops().is_empty());
        let c = ternary_census(&m, "e").unwrap();
        assert!(c.violations.is_empty());
        assert_eq!(c.total(), m.len() - r - 1);
        assert!(m.len() <= ternary_size_bound(r));
        assert!(c.max_same_sign <= 2);
    }
}

#[test]
fn census_of_bare_column_is_empty() {
    let f = field(3).unwrap();
    let m = FqMatrix::new(
        f,
        5,
        6,
        &[
            1, 0, 0, 0, 0, 0, //
            0, 1, 0, 0, 0, 1, //
            0, 0, 1, 0, 0, 1, //
            0, 0, 0, 1, 0, 1, //
            0, 0, 0, 0, 1, 1,
        ],
        None,
    )
    .unwrap();
    let rep = m.standard_rep(&["c1", "c2", "c3", "c4", "c5"]).unwrap();
    let c = census_of_rep(&rep, "c6");
    assert_eq!(c.total(), 0);
    assert!(c.violations.is_empty());
}

#[test]
fn census_catches_three_equal_roots() {
    let m = greedy_ternary(5);
    let rep = census_standard_rep(&m, "e").unwrap();
    let bad = rep.base().with_column(vec![1, 1, 1, 1, 0], "bad").unwrap();
    let labels: Vec<String> = rep.basis_order().to_vec();
    let rep = bad.standard_rep(&labels).unwrap();
    let c = census_of_rep(&rep, "e");
    assert!(!c.violations.is_empty());
}

#[test]
fn census_requires_non_free_element() {
    let m = build_named(FamilyTag::Circuit { r: 5, q: 3 }).unwrap();
    assert!(matches!(ternary_census(&m, "e"), Err(ClassifyError::Precondition(_))));
}

#[test]
fn two_loose_examples() {
    let ag = build_named(FamilyTag::Ag32).unwrap();
    let v = two_loose_audit(&ag, ag.label(0), ag.label(1)).unwrap();
    assert_eq!(v, TwoLooseVerdict::RankOk { spanning_one: false });

    let k = build_figure(FamilyTag::M(5)).unwrap();
    let v_col = k.rep().column_by_label("e").unwrap().to_vec();
    let n = k.delete(&["e"]).unwrap();
    let m = series_pair_extension(&n, &v_col, "s", "t").unwrap();
    assert_eq!(m.rank(), 6);
    assert_eq!(two_loose_audit(&m, "s", "t").unwrap(), TwoLooseVerdict::CocircuitPair);

    let u = build_named(FamilyTag::Circuit { r: 11, q: 3 }).unwrap();
    let n = u.delete(&["e"]).unwrap();
    let m = series_pair_extension(&n, &[1; 11], "s", "t").unwrap();
    assert_eq!(m.rank(), 12);
    assert_eq!(two_loose_audit(&m, "s", "t").unwrap(), TwoLooseVerdict::CocircuitPair);

    assert!(matches!(
        two_loose_audit(&ag, "c1", "c1"),
        Err(ClassifyError::Precondition(_))
    ));
}

#[test]
fn two_loose_spanning_one_at_low_rank() {
    // Fano: rank 3 = 2q - 1, spanning circuits through one of a pair exist
    let fano = build_named(FamilyTag::Fano).unwrap();
    let v = two_loose_audit(&fano, "c1", "c2").unwrap();
    assert_eq!(v, TwoLooseVerdict::RankOk { spanning_one: true });
}

#[test]
fn free_structure_examples() {
    let u = build_named(FamilyTag::Circuit { r: 5, q: 2 }).unwrap();
    assert_eq!(free_structure_check(&u, "e").unwrap(), FreeStructure::BinaryCircuit);
    let u24 = uniform(2, 4, 3).unwrap();
    assert_eq!(free_structure_check(&u24, "c1").unwrap(), FreeStructure::U24);
    let ag = build_named(FamilyTag::Ag32).unwrap();
    assert_eq!(free_structure_check(&ag, "c1").unwrap(), FreeStructure::NotFree);

    let mut m = build_named(FamilyTag::Circuit { r: 5, q: 3 }).unwrap();
    for (k, d) in ["b1", "b3"].iter().enumerate() {
        let labels = (1..=4).map(|i| format!("u{k}_{i}")).collect();
        let copy = uniform(2, 4, 3).unwrap().with_labels(labels).unwrap();
        m = two_sum(&m, &copy, d, &format!("u{k}_1")).unwrap();
    }
    assert_eq!(m.rank(), 7);
    assert!(m.is_free(m.index_of("e").unwrap()));
    match free_structure_check(&m, "e").unwrap() {
        FreeStructure::TwoSumTree { d, circuit } => {
            assert_eq!(d.len(), 2);
            assert_eq!(circuit.len(), 6);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn paving_examples() {
    let ag = build_named(FamilyTag::Ag32).unwrap();
    let a = paving_audit(&ag).unwrap();
    assert_eq!(
        (a.rank, a.size, a.sparse_paving, a.spanning_circuit),
        (4, 8, true, false)
    );
    assert_eq!(a.branch, PavingBranch::SparsePaving);

    let g = build_named(FamilyTag::Golay12).unwrap();
    let a = paving_audit(&g).unwrap();
    assert_eq!((a.rank, a.size, a.spanning_circuit), (6, 12, false));

    let c = build_named(FamilyTag::Circuit { r: 7, q: 2 }).unwrap();
    assert_eq!(paving_audit(&c).unwrap().branch, PavingBranch::Circuit);

    let m = build_figure(FamilyTag::M(5)).unwrap();
    assert!(matches!(paving_audit(&m), Err(ClassifyError::Precondition(_))));
}

#[test]
fn falsification_carries_a_replayable_matrix() {
    let pg = projective_space(2, 4);
    let err = binary_structure(&pg, 0).unwrap_err();
    let fal = falsify(&pg, "test", err.detail, err.elements);
    let back = crate::io::MatrixFile::parse(&fal.matrix).unwrap();
    assert_eq!(back.matrix, *pg.rep());
}

#[test]
fn free_shape_rejects_a_triangle_through_the_basepoint() {
    let c = build_named(FamilyTag::Circuit { r: 5, q: 3 }).unwrap();
    let m = LinearMatroid::new(c.rep().with_column(vec![1, 1, 0, 0, 0], "x").unwrap()).unwrap();
    assert!(!m.is_free(m.index_of("e").unwrap()));
    assert!(matches!(free_shape(&m, "e"), Err(ClassifyError::Falsification(_))));
    let m4 = build_figure(FamilyTag::M(4)).unwrap();
    assert!(matches!(free_shape(&m4, "e"), Err(ClassifyError::Falsification(_))));
}
