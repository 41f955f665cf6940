//! Exhaustive stratum classification over F_p, next to the strata formulas.

use nodevar::ffcount::{count_strata, GroupTable, DEFAULT_CAP};
use nodevar::repvar::strata_jordan;
use nodevar::topology::HolonomyClass;

fn main() {
    for p in [3, 5] {
        let g = GroupTable::load_or_build(p).unwrap();
        for s in 0..=1 {
            let hs = vec![HolonomyClass::JordanPlus; s];
            let counts = count_strata(&g, 1, 0, &hs, DEFAULT_CAP).unwrap();
            let formulas = strata_jordan(1, 1, s as u32).unwrap();
            println!("p={p} g=1 J+ x{s}: {counts:?}");
            for (st, e) in formulas.strata() {
                println!("  {:>8} formula at p: {}", st.to_string(), e.eval_at_i64(p as i64).unwrap());
            }
        }
    }
}
