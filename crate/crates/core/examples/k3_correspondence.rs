//! The lattice actions on L_m(a) and L(b) and the correspondence between
//! sequence terms, Pell solutions and (lattice, isometry) pairs.

use lucas_pell::k3::{
    classify_case_a, classify_case_b, correspondence_roundtrip, CorrespondenceInput, Flavor,
};
use num_bigint::BigInt;

fn main() {
    for (m, a) in [(2, 1), (3, 3), (5, 2)] {
        let case = classify_case_a(&BigInt::from(m), &BigInt::from(a)).unwrap();
        println!(
            "L_{m}({a}): n = {}, g = {}, trace {}, {}",
            case.n, case.action.g, case.action.trace, case.omega_sign
        );
    }
    let case = classify_case_b(&BigInt::from(4), 3).unwrap();
    println!(
        "L(4), n = 3: g = {}, trace {}, {}",
        case.action.g, case.action.trace, case.omega_sign
    );

    let c = correspondence_roundtrip(&CorrespondenceInput::PellY {
        flavor: Flavor::A(BigInt::from(1)),
        y: BigInt::from(144),
    })
    .unwrap();
    println!(
        "y = 144: index {}, Pell {}, m = {:?}, trace {}",
        c.index,
        c.pell,
        c.pair.m.map(|m| m.to_string()),
        c.pair.trace
    );
}
