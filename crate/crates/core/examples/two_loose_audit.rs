//! Pairs of loose elements: a series pair above 2q and a low-rank pair.

use loosemat::classify::two_loose_audit;
use loosemat::families::{build_named, series_pair_extension, FamilyTag};

fn main() {
    for q in [2u8, 3] {
        // a circuit of rank 2q + 2; its all-ones column is loose
        let r = 2 * q as usize + 2;
        let c = build_named(FamilyTag::Circuit { r, q }).unwrap();
        let n = c.delete(&["e"]).unwrap();
        let v = vec![1u8; r];
        let m = series_pair_extension(&n, &v, "e", "f").unwrap();
        let verdict = two_loose_audit(&m, "e", "f").unwrap();
        println!("GF({q}) rank {}: {:?} -> {}", m.rank(), m.labels(), verdict.name());
        println!("  {{e, f}} is a cocircuit: {}", m.is_cocircuit(&["e", "f"]).unwrap());
    }

    // the Fano plane: rank 3 <= 2q, every pair is loose
    let fano = build_named(FamilyTag::Fano).unwrap();
    let (a, b) = (fano.label(0).to_string(), fano.label(1).to_string());
    println!("Fano {a},{b}: {}", two_loose_audit(&fano, &a, &b).unwrap().name());
}
