//! Node-surfaces, puncture data and its reduction.

use nodevar::topology::{alpha_pm, NodeSurface, ParabolicStructure};

fn main() {
    for s in ["g=1", "g=2;branches=3", "g=1;branches=2,2"] {
        let ns: NodeSurface = s.parse().unwrap();
        println!("{ns}: free rank {}, b_eff {}", ns.free_rank(), ns.b_eff());
    }
    for p in ["t=2;j+=1", "j-=1;ss=2,3", "t=1", "t=1;ss=2,1/2"] {
        let par: ParabolicStructure = p.parse().unwrap();
        let red = par.reduce().unwrap();
        let a = alpha_pm(&red.eigenvalues).unwrap();
        println!(
            "{par}  sigma={:+}  ->  {}  twisted={}  alpha=({}, {})",
            par.sigma(),
            red.to_parabolic(),
            red.twisted,
            a.alpha_plus,
            a.alpha_minus
        );
    }
}
