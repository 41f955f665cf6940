//! Classes of the reducible strata and their printed totals.

use nodevar::repvar::{strata_jordan, strata_nopar, strata_semisimple, StrataReport};
use nodevar::topology::parse_eigenvalues;

fn show(label: &str, r: &StrataReport) {
    println!("{label}");
    for (s, e) in r.strata() {
        println!("  {:>8}: {e}", s.to_string());
    }
    println!("  sum     : {}", r.reducible_total);
    println!("  printed : {} ({})", r.quoted_total, if r.quoted_total_agrees() { "agrees" } else { "differs" });
}

fn main() {
    show("g=1 b=2, no punctures", &strata_nopar(1, 2).unwrap());
    show("g=1 b=1, two J+", &strata_jordan(1, 1, 2).unwrap());
    show("g=1 b=1, D_2 D_2", &strata_semisimple(1, 1, &parse_eigenvalues("2,2").unwrap()).unwrap());
}
