//! Reads a matrix file (or uses AG(3,2)) and prints the JSON analysis
//! report, circuits included.
//!
//!     cargo run --example analyze_matrix -- path/to/file.txt

use loosemat::families::{build_named, FamilyTag};
use loosemat::io::MatrixFile;
use loosemat::matroid::LinearMatroid;
use loosemat::report::{analyze, Report};

fn main() {
    let file = match std::env::args().nth(1) {
        Some(p) => MatrixFile::parse(&std::fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{p}: {e}")),
        None => MatrixFile::new(build_named(FamilyTag::Ag32).unwrap().rep().clone()),
    };
    let m = LinearMatroid::new(file.matrix.clone()).unwrap();
    let element = file.designated("e").map(str::to_string);
    let report = analyze(&m, &file.designated, m.len() <= 16, element.as_deref()).unwrap();
    println!("{}", Report::new("analyze", &[], report).to_json());
}
