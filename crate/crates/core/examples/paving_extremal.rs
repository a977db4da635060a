//! The extremal paving matroids: AG(3,2) and the rank-6 ternary Golay
//! matroid.

use loosemat::classify::paving_audit;
use loosemat::families::{build_named, FamilyTag};

fn main() {
    for tag in [FamilyTag::Ag32, FamilyTag::Golay12] {
        let m = build_named(tag).unwrap();
        let a = paving_audit(&m).unwrap();
        let girth = (0..m.len()).filter_map(|e| m.girth_through_idx(e)).min();
        println!(
            "{tag}: GF({}) rank {} size {} girth {:?} branch {:?} sparse paving {} spanning circuit {}",
            a.q, a.rank, a.size, girth, a.branch, a.sparse_paving, a.spanning_circuit
        );
        let circuits = m.circuits(Some(m.rank())).unwrap();
        println!(
            "  {} non-spanning circuits, all hyperplanes: {}",
            circuits.len(),
            circuits.iter().all(|c| m.hyperplane_check_idx(c))
        );
    }

    // dropping a point from AG(3,2) keeps it paving
    let ag = build_named(FamilyTag::Ag32).unwrap();
    let sub = ag.restrict_idx(&(1..8).collect::<Vec<_>>());
    println!(
        "AG(3,2) minus a point: paving {} sparse paving {}",
        sub.is_paving(),
        sub.is_sparse_paving()
    );
}
