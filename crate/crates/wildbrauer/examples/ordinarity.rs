//! Point counts and the ordinarity criterion for K3 reductions.
//!
//! A smooth quartic reduction Y over F_{p^n} is ordinary iff
//! |Y(F_{p^n})| is not 1 mod p; the counts here are exact chart-normalized
//! enumerations, and each verdict is cross-checked at doubled depth.
//!
//! Run with: cargo run --release --example ordinarity

use wildbrauer::scenarios;
use wildbrauer::surface::is_ordinary_k3;

fn main() {
    let cases = [
        ("x^3y + y^3z + z^3w + w^3x + xyzw", scenarios::quartic_eq16(), 2u64, vec![1usize, 2]),
        ("x^3y + y^3z + z^3w + w^4 + xyzw", scenarios::family_fibre_odd(), 2, vec![1, 2]),
        ("x^3y + y^3z + z^3w + w^4", scenarios::family_fibre_2mod4(), 2, vec![1, 2]),
        ("x^3y + y^3z + z^3w + w^4 + xzw^2", scenarios::family_fibre_0mod4(), 2, vec![1, 2]),
        ("x^4 - 4y^4 - z^4 - w^4", scenarios::diagonal_quartic_5(), 5, vec![1, 2]),
        ("x^4 - y^4 - 4z^4 + w^4 (over F_9)", scenarios::diagonal_quartic_3(), 3, vec![2, 4]),
    ];
    println!("=== ordinarity by point counting ===\n");
    for (name, f, p, depths) in cases {
        match is_ordinary_k3(&f, p, &depths) {
            Ok(rep) => {
                println!("{name}  (p = {p})");
                for ((n, c), r) in rep.counts.iter().zip(rep.residues.iter()) {
                    println!("    |Y(F_{p}^{n})| = {c}   = {r} mod {p}");
                }
                println!("    verdict: {:?}\n", rep.verdict);
            }
            Err(e) => println!("{name}: error {e}\n"),
        }
    }
}
