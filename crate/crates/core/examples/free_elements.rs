//! Free elements: binary circuits, U_{2,4}, and ternary 2-sum trees.

use loosemat::classify::{free_structure_check, FreeStructure};
use loosemat::families::{build_named, two_sum, uniform, FamilyTag};

fn main() {
    let c = build_named(FamilyTag::Circuit { r: 5, q: 2 }).unwrap();
    println!("binary 6-circuit: {:?}", free_structure_check(&c, "e").unwrap());

    let u = uniform(2, 4, 3).unwrap();
    println!("U_{{2,4}}: {:?}", free_structure_check(&u, "c1").unwrap());

    // 2-sum U_{2,4} copies onto b1 and b3 of a ternary 6-circuit
    let mut m = build_named(FamilyTag::Circuit { r: 5, q: 3 }).unwrap();
    for k in [1, 3] {
        let labels = (1..=4).map(|i| format!("u{k}_{i}")).collect();
        let copy = uniform(2, 4, 3).unwrap().with_labels(labels).unwrap();
        m = two_sum(&m, &copy, &format!("b{k}"), &format!("u{k}_1")).unwrap();
    }
    println!(
        "tree: rank {} size {} e free {}",
        m.rank(),
        m.len(),
        m.is_free(m.index_of("e").unwrap())
    );
    match free_structure_check(&m, "e").unwrap() {
        FreeStructure::TwoSumTree { d, circuit } => {
            println!(
                "  recovered {} copies over the circuit {{{}}}",
                d.len(),
                circuit.join(", ")
            );
        }
        other => println!("  {other:?}"),
    }
}
