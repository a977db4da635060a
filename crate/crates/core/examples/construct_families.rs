//! Builds every named matroid and prints its size, rank and the status of
//! its designated element.
//!
//!     cargo run --example construct_families -- 6

use loosemat::families::{build_figure, build_named, build_structural, FamilyTag};
use loosemat::io::MatrixFile;
use loosemat::matroid::iso_check;

fn main() {
    let r: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);

    println!(
        "{:<12} {:>4} {:>4} {:>6} {:>6} {:>5}",
        "family", "n", "rank", "girth", "loose", "free"
    );
    for tag in [FamilyTag::L(r), FamilyTag::J(r), FamilyTag::M(r), FamilyTag::N(r)] {
        let m = build_figure(tag).unwrap();
        let e = m.index_of("e").unwrap();
        println!(
            "{:<12} {:>4} {:>4} {:>6} {:>6} {:>5}",
            tag.to_string(),
            m.len(),
            m.rank(),
            m.girth_through_idx(e).map_or("-".into(), |g| g.to_string()),
            m.is_loose(e),
            m.is_free(e)
        );

        // same matroid from its defining construction
        let (s, se) = build_structural(tag).unwrap();
        let anchored = iso_check(&s, &m, Some((se.as_deref().unwrap(), "e"))).unwrap();
        assert!(anchored.is_some(), "{tag}");
    }

    for tag in [
        FamilyTag::Fano,
        FamilyTag::Ag32,
        FamilyTag::Golay12,
        FamilyTag::Uniform { m: 2, n: 4, q: 3 },
    ] {
        let m = build_named(tag).unwrap();
        println!("{:<12} {:>4} {:>4}   GF({})", tag.to_string(), m.len(), m.rank(), m.q());
    }

    println!(
        "\n{}",
        MatrixFile::new(build_figure(FamilyTag::M(r)).unwrap().rep().clone())
            .with_designated("e", "e")
            .print()
    );
}
