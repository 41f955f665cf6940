//! Character-variety classes: stratified assembly against closed forms.

use nodevar::charvar::{char, Route};
use nodevar::topology::NodeSurface;

fn main() {
    let cases = [("g=1", ""), ("g=1;branches=2", ""), ("g=2", "j+=2"), ("g=1", "ss=2,3"), ("g=1", "j+=1;ss=2"), ("g=2", "t=1")];
    for (s, p) in cases {
        let ns: NodeSurface = s.parse().unwrap();
        let r = char(&ns, &p.parse().unwrap(), Route::Both).unwrap();
        println!("{ns} [{p}] case={:?}", r.case);
        if let Some(c) = &r.closed_form {
            println!("  closed    : {c}");
        }
        match (&r.assembled, &r.difference) {
            (Some(a), Some(d)) if d.is_zero() => println!("  assembled : {a} (agrees)"),
            (Some(a), Some(d)) => println!("  assembled : {a}\n  difference: {d}"),
            _ => println!("  assembled : none for this case"),
        }
    }
}
