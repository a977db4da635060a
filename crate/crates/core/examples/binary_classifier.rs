//! Classifies loose elements of binary matroids: restrictions of the
//! figures, a one-point extension, and a non-loose element.

use loosemat::classify::{classify_binary_loose, ClassifyError};
use loosemat::families::{build_figure, FamilyTag};
use loosemat::matroid::LinearMatroid;

fn show(name: &str, m: &LinearMatroid, e: &str) {
    match classify_binary_loose(m, e) {
        Ok(v) => println!("{name:<28} {} rank {} ({:?})", v.family.name(), v.rank, v.case),
        Err(ClassifyError::Precondition(p)) => println!("{name:<28} not classified: {p}"),
        Err(other) => println!("{name:<28} {other}"),
    }
}

fn main() {
    for r in 3..=7 {
        for tag in [FamilyTag::L(r), FamilyTag::J(r), FamilyTag::M(r), FamilyTag::N(r)] {
            if let Ok(m) = build_figure(tag) {
                show(&tag.to_string(), &m, "e");
            }
        }
    }

    // drop g1 from M6: still a restriction of M6
    let m6 = build_figure(FamilyTag::M(6)).unwrap();
    show("M6 \\ g1", &m6.delete(&["g1"]).unwrap(), "e");

    // an extra point on a short line through e kills looseness
    let ext = m6.rep().with_column(vec![1, 1, 0, 0, 0, 0], "x").unwrap();
    let ext = LinearMatroid::new(ext).unwrap();
    println!("girth through e in M6 + x: {:?}", ext.girth_through("e").unwrap());
    show("M6 + x", &ext, "e");
}
