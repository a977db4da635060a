//! Grows a ternary matroid around a loose element and prints the column
//! census against the size bound.

use loosemat::classify::{ternary_census, ternary_size_bound};
use loosemat::gfq::field;
use loosemat::matroid::LinearMatroid;
use loosemat::matvec::FqMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let r = 6;
    let f = field(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    let mut cols: Vec<Vec<u8>> = (0..r).map(|i| (0..r).map(|k| (i == k) as u8).collect()).collect();
    let mut labels: Vec<String> = (1..=r).map(|i| format!("b{i}")).collect();
    cols.push((0..r).map(|k| (k > 0) as u8).collect());
    labels.push("e".into());

    // greedily keep random columns while e stays loose
    for k in 0..2000 {
        let v: Vec<u8> = (0..r).map(|_| rng.gen_range(0..3)).collect();
        let mut c = cols.clone();
        c.push(v.clone());
        let mut l = labels.clone();
        l.push(format!("g{k}"));
        let Ok(m) = LinearMatroid::new(FqMatrix::from_columns(f, r, c, Some(l.clone())).unwrap()) else {
            continue;
        };
        if m.is_simple() && m.is_loose(m.index_of("e").unwrap()) {
            cols.push(v);
            labels = l;
        }
    }
    let m = LinearMatroid::new(FqMatrix::from_columns(f, r, cols, Some(labels)).unwrap()).unwrap();
    println!("rank {} size {} (bound {})", m.rank(), m.len(), ternary_size_bound(r));
    println!("e free: {}", m.is_free(m.index_of("e").unwrap()));

    match ternary_census(&m, "e") {
        Ok(c) => {
            println!("basis {}", c.basis.join(" "));
            println!("top-zero columns {}", c.top_zero_count);
            for (h, n) in c.type_counts.iter().enumerate() {
                println!("type {h}: {n}");
            }
            println!("violations: {:?}", c.violations);
        }
        Err(e) => println!("{e}"),
    }
}
