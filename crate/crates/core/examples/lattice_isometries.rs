//! Invariants of [[2a, b], [b, 2c]]: the SO+ generator, its action on the
//! discriminant group, and roots.

use lucas_pell::lattice::{find_roots, so_plus_generator, Lattice2, RootTarget};
use lucas_pell::oracle::enumerate_disc_group;

fn main() {
    for (a, b, c) in [(1, 3, -1), (2, 5, -3), (1, 1, -1), (1, 3, 2)] {
        let l = Lattice2::new(a, b, c).unwrap();
        println!(
            "{l}: disc {}, D = {}, signature {}",
            l.disc(),
            l.pell_d(),
            l.signature()
        );
        match so_plus_generator(&l).unwrap() {
            Some(g) => println!(
                "  generator {} trace {} acts as {} on A(L)",
                g.g, g.trace, g.disc_action
            ),
            None => println!("  SO+ is trivial"),
        }
        let group = enumerate_disc_group(&l).unwrap();
        println!(
            "  A(L) = Z/{} x Z/{}",
            group.invariant_factors[0], group.invariant_factors[1]
        );
        println!(
            "  -2 vector: {:?}",
            find_roots(&l, RootTarget::MinusTwo).unwrap()
        );
        println!(
            "  isotropic vector: {:?}",
            find_roots(&l, RootTarget::Zero).unwrap()
        );
    }
}
