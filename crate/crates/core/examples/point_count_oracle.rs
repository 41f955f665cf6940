//! Checks formulas against exact homomorphism counts into SL2(F_p).

use nodevar::ffcount::{verify, OracleParams};
use nodevar::repvar::rep_mixed;
use nodevar::topology::{NodeSurface, ParabolicStructure};

fn main() {
    let cases = [("g=1", ""), ("g=2;branches=2", ""), ("g=1", "j+=2"), ("g=1", "ss=F7:2,4"), ("g=1", "ss=F7:3"), ("g=1", "t=1")];
    for (s, p) in cases {
        let ns: NodeSurface = s.parse().unwrap();
        let par: ParabolicStructure = p.parse().unwrap();
        let expr = rep_mixed(&ns, &par).unwrap();
        let params = OracleParams { genus: ns.genus(), nu: ns.free_rank(), parabolic: par.clone() };
        let report = verify(&expr, &params, &[3, 5, 7]).unwrap();
        println!("{ns} [{p}]");
        for r in &report.records {
            let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            println!(
                "  p={} {:?}: formula {} count {} {}",
                r.prime,
                r.status,
                show(r.expected.as_ref().map(ToString::to_string)),
                show(r.actual.as_ref().map(ToString::to_string)),
                r.note.clone().unwrap_or_default()
            );
        }
    }
}
