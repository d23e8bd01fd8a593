//! Tame residues of quaternion symbols along divisors: the square-class
//! formula (-1)^{v(a)v(b)} a^{v(b)} / b^{v(a)} and sampling probes over
//! finite fields.
//!
//! The probes gather evidence that a residue class is trivial by evaluating
//! it at divisor points; all-squares is evidence, not proof, except where a
//! rational parametrization makes it exact.
//!
//! Run with: cargo run --release --example tame_residues

use wildbrauer::brauer::{family_divisors, residue_probe, tame_residue, DivisorDatum};
use wildbrauer::finite_field::FieldCtx;

fn main() {
    println!("=== the residue formula on valuation data ===");
    for (va, vb) in [(0i64, 0i64), (1, 1), (0, -1), (-2, 1)] {
        let d = DivisorDatum {
            label: format!("(va, vb) = ({va}, {vb})"),
            va,
            vb,
            sampler: Box::new(|_| vec![]),
        };
        let r = tame_residue(&d);
        println!(
            "    {}: class of (-1)^{} * a^{} * b^{}",
            d.label, r.sign_exponent, r.a_exponent, r.b_exponent
        );
    }

    let fields = vec![
        FieldCtx::new(3, 1, None).unwrap(),
        FieldCtx::new(5, 1, None).unwrap(),
        FieldCtx::new(3, 2, None).unwrap(),
        FieldCtx::new(7, 1, None).unwrap(),
    ];

    println!("\n=== probing the family divisors ===");
    for d in [family_divisors::d1(), family_divisors::d2(1)] {
        println!("    {}", d.label);
        match residue_probe(&d, &fields) {
            Ok(reports) => {
                for r in reports {
                    println!(
                        "        F_{}: {}/{} sampled values are squares (all: {})",
                        r.field_order, r.squares, r.samples, r.all_squares
                    );
                }
            }
            Err(e) => println!("        {e}"),
        }
    }

    println!("\n=== a falsifying sampler ===");
    let bad = family_divisors::constant_nonresidue();
    let reports = residue_probe(&bad, &fields[..2]).unwrap();
    for r in reports {
        println!(
            "    F_{}: all squares: {} (a constant non-residue is detected)",
            r.field_order, r.all_squares
        );
    }
}
