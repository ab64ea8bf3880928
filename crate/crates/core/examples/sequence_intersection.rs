//! Common terms of two Lucas V-sequences through simultaneous Pell equations.

use lucas_pell::intersection::{intersect, IntersectOptions, PellSystem, SystemFlavor};
use num_bigint::BigInt;

fn main() {
    let systems = [
        (SystemFlavor::PlusPlus, 1, 4),
        (SystemFlavor::PlusPlus, 1, 2),
        (SystemFlavor::MinusMinus, 4, 14),
        (SystemFlavor::Mixed, 1, 7),
    ];
    for (flavor, p1, p2) in systems {
        let system = PellSystem::new(flavor, p1, p2).unwrap();
        let r = intersect(&system, 6, &IntersectOptions::default()).unwrap();
        let xs: Vec<String> = r.xs().iter().map(ToString::to_string).collect();
        println!("{system}: {} [{}]", r.verdict, xs.join(", "));
    }

    let system = PellSystem::new(SystemFlavor::OppositeSigns, 1, 2).unwrap();
    let opts = IntersectOptions {
        x_bound: Some(BigInt::from(1_000_000)),
        ..IntersectOptions::default()
    };
    let r = intersect(&system, 0, &opts).unwrap();
    for t in &r.solutions {
        println!("{system}: {t}");
    }
}
