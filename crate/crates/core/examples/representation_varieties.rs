//! Virtual classes of representation varieties, by puncture type.

use nodevar::repvar::{rep_jordan, rep_mixed, rep_nodal, rep_semisimple, rep_smooth};
use nodevar::topology::{parse_eigenvalues, NodeSurface};

fn main() {
    println!("Rep(Σ_1)            = {}", rep_smooth(1).unwrap());
    let ns: NodeSurface = "g=1;branches=3".parse().unwrap();
    println!("Rep({ns})  = {}", rep_nodal(&ns).unwrap());
    for s in 1..=3 {
        println!("Rep(Σ_1, J+ x{s})     = {}", rep_jordan(1, 1, s).unwrap());
    }
    let eigs = parse_eigenvalues("2,2").unwrap();
    println!("Rep(Σ_1, D_2, D_2)   = {}", rep_semisimple(1, 1, &eigs).unwrap());
    let par = "t=1;j-=1".parse().unwrap();
    println!("Rep(Σ_1, -Id, J-)    = {}", rep_mixed(&NodeSurface::smooth(1), &par).unwrap());
}
