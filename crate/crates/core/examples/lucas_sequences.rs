//! Fibonacci-type and Lucas-type terms, the norm identity, and the
//! companion-matrix form of a_n and b_n.

use lucas_pell::lucas::{companion_power, gen_fib_a, gen_fib_b, lucas_uv, Companion};
use lucas_pell::LucasParams;
use num_bigint::BigInt;

fn main() {
    let fib = LucasParams::new(1, -1);
    for n in [10, 100, 1000] {
        let t = lucas_uv(&fib, n);
        println!(
            "F_{n} has {} digits, norm identity holds: {}",
            t.u_value.to_string().len(),
            t.satisfies_norm(&fib)
        );
    }

    let a = BigInt::from(3);
    let terms: Vec<String> = (0..8).map(|n| gen_fib_a(&a, n).to_string()).collect();
    println!("a-sequence for a = 3: {}", terms.join(", "));
    let b = BigInt::from(4);
    let terms: Vec<String> = (0..8).map(|n| gen_fib_b(&b, n).to_string()).collect();
    println!("b-sequence for b = 4: {}", terms.join(", "));

    let m = companion_power(&Companion::Ma(a.clone()), 6).unwrap();
    println!("M_3^6 = {m}, trace {}", m.trace());
}
