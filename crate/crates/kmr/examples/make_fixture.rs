//! Regenerates the bundled synthetic fixture pair in `data/`:
//! scenario 1, master seed 1, n = 120 per series.
//!
//! Run from the repository root: `cargo run -p kmr --example make_fixture`

use std::path::Path;

use kmr::csv::write_series_csv;
use kmr_core::ScenarioSpec;

fn main() {
    let mut spec = ScenarioSpec::new(1, 1, 1);
    spec.n1 = 120;
    spec.n2 = 120;
    let (d1, d2, _) = kmr_core::gen_run(&spec, 0).expect("generation cannot fail for scenario 1");
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    std::fs::create_dir_all(&dir).unwrap();
    write_series_csv(&dir.join("target.csv"), d1.times(), d1.values()).unwrap();
    write_series_csv(&dir.join("source.csv"), d2.times(), d2.values()).unwrap();
    println!("wrote {}", dir.display());
}
