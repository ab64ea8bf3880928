//! Fundamental solutions of u^2 - d v^2 = ±4 and the solutions they generate.

use lucas_pell::pell::{compose, fundamentals, solutions_iter, PellProblem, PellSign};
use num_bigint::BigInt;

fn main() {
    for d in [5, 13, 21, 61, 94] {
        let d = BigInt::from(d);
        let f = fundamentals(&d).unwrap();
        match &f.minus {
            Some(beta) => {
                let square = compose(&d, beta, beta).unwrap();
                println!(
                    "d = {d}: alpha = {}, beta = {beta}, beta^2 = {square}",
                    f.plus
                );
            }
            None => println!("d = {d}: alpha = {}, -4 unsolvable", f.plus),
        }
    }

    let problem = PellProblem::new(13, PellSign::Minus).unwrap();
    let sols = solutions_iter(&problem, 5).unwrap();
    let shown: Vec<String> = sols.iter().map(ToString::to_string).collect();
    println!("u^2 - 13 v^2 = -4: {}", shown.join(" "));
}
