//! Exact arithmetic in the localized ring and the three output formats.

use nodevar::gring::constants::class_sl2;
use nodevar::gring::MotiveExpr;

fn main() {
    let q = MotiveExpr::q();
    let g = class_sl2();
    let x = (&q * &q + MotiveExpr::from_int(1)).div_units(0, 1, 1);
    println!("[SL2]       = {g}");
    println!("x           = {x}");
    println!("x * (q^2-1) = {}", &x * &(&q * &q - MotiveExpr::one()));
    println!("latex       = {}", x.to_latex());
    println!("json        = {}", x.to_json_value());
    println!("x at q=5    = {}", x.eval_at_i64(5).unwrap());
    println!("E([SL2])    = {}", g.e_polynomial().unwrap());
    let inv = g.pow(-2).unwrap();
    println!("[SL2]^-2    = {inv}");
}
