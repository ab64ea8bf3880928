//! Deciding whether a number is a term of a_n or b_n from a square test.

use lucas_pell::pell::{is_gen_fib_a, is_gen_fib_b};
use num_bigint::BigInt;

fn main() {
    let a = BigInt::from(1);
    for n in [144u64, 145, 832_040, 1_000_000] {
        let v = is_gen_fib_a(&BigInt::from(n), &a).unwrap();
        match v.index {
            Some(k) => println!(
                "{n} = F_{k}, witness {} ({:?} index)",
                v.square_witness.unwrap(),
                v.parity.unwrap()
            ),
            None => println!("{n} is not a Fibonacci number"),
        }
    }

    let b = BigInt::from(6);
    for n in [35u64, 204, 205] {
        let v = is_gen_fib_b(&BigInt::from(n), &b).unwrap();
        println!("{n} in b-sequence for b = 6: {} {:?}", v.is_member, v.index);
    }
}
