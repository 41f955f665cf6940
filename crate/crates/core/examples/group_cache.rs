//! Builds SL2(F_p) tables and round-trips them through the on-disk cache.

use nodevar::ffcount::{GroupTable, CACHE_ENV};

fn main() {
    let dir = std::env::temp_dir().join("nodevar-example-cache");
    for p in [3, 5, 7, 11] {
        let t = GroupTable::load_or_build_in(p, &dir).unwrap();
        println!("SL2(F_{p}): order {}, {} conjugacy classes", t.order(), t.classes().len());
    }
    println!("cache directory: {} (override with {CACHE_ENV})", dir.display());
}
