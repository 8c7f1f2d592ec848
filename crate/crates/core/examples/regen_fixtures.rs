//! Rediscovers the shipped grid patterns and rewrites `fixtures/patterns/v1`.

use std::fs;
use std::path::Path;

use detcode::grid::{search_pattern, verify_pattern, PatternSearchOptions};
use detcode::{Density, Lattice};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/patterns/v1");
    fs::create_dir_all(&dir).unwrap();
    let cases = [
        (Lattice::Ladder, (4, 2), Density::new(3, 4), None),
        (Lattice::Hex, (4, 2), Density::new(3, 4), None),
        (Lattice::Sqr, (18, 3), Density::new(11, 18), Some((6, 1))),
        (Lattice::Tri, (15, 3), Density::new(8, 15), Some((5, 1))),
        (Lattice::Kng, (2, 2), Density::new(1, 2), None),
    ];
    for (lattice, period, target, symmetry) in cases {
        let opts = PatternSearchOptions { symmetry, workers: 1, time_limit: None };
        let p = search_pattern(lattice, period, target, &opts).unwrap().expect("pattern exists");
        let report = verify_pattern(&p);
        assert!(report.passed);
        let stem = lattice.name().to_lowercase();
        fs::write(dir.join(format!("{stem}.pat")), p.to_string()).unwrap();
        fs::write(dir.join(format!("{stem}.report.json")), serde_json::to_string_pretty(&report).unwrap() + "\n").unwrap();
        println!("{lattice}: {} cells, density {}", report.cells, report.density);
    }
}
