//! Hensel lifting of smooth seeds and residue-disc evaluation scans: the
//! weak-approximation counterexample on the quartic
//! x^3y + y^3z + z^3w + w^3x + xyzw = 0 over Q_2, and the family surfaces
//! where the evaluation map is non-constant iff a^2 is not 0 mod 4.
//!
//! Run with: cargo run --release --example lift_and_evaluate

use wildbrauer::brauer::scan_evaluation;
use wildbrauer::padic::LocalField;
use wildbrauer::scenarios;
use wildbrauer::surface::smooth_seeds;

fn main() {
    let f = scenarios::quartic_eq16();
    let ctx = scenarios::f2();
    let seeds = smooth_seeds(&f, &ctx).unwrap();
    println!("=== smooth seeds on the reduction mod 2 ===");
    for (pt, free) in &seeds.seeds {
        println!("    {pt:?}  free coordinate {}", ["x", "y", "z", "w"][*free]);
    }
    println!("    ({} seeds, {} visible singular points)\n", seeds.seeds.len(), seeds.singular_points.len());

    println!("=== evaluation scan of ((z^3+w^2x+xyz)/x^3, -z/x) over Q_2 ===");
    let rep = scan_evaluation(
        &scenarios::symbol_eq16(),
        &[],
        &f,
        LocalField::qp(2),
        4,   // disc depth
        12,  // precision 2^12
        500, // budget
        0,   // seed
    )
    .unwrap();
    println!("    evaluated {} points: {} with value 0, {} with value 1/2", rep.points_evaluated, rep.zeros, rep.halves);
    println!("    verdict: {:?}", rep.verdict);
    if let (Some(z), Some(h)) = (&rep.witness_zero, &rep.witness_half) {
        println!("    witnesses: 0 at {z}");
        println!("               1/2 at {h}");
    }

    println!("\n=== the family x^3y + y^3z + z^3w - w^4 + a^2 xyzw - (2/a) xzw^2 ===");
    for alpha in [1i64, 2] {
        let rep = scan_evaluation(
            &scenarios::symbol_family(alpha),
            &[scenarios::symbol_family_rewritten(alpha)],
            &scenarios::family_surface(alpha),
            LocalField::qp(2),
            4,
            12,
            500,
            0,
        )
        .unwrap();
        println!(
            "    a = {alpha}: {} zeros, {} halves over {} points -> {:?}",
            rep.zeros, rep.halves, rep.points_evaluated, rep.verdict
        );
    }
    println!("\nnote: a scan never claims constancy, only bounded-search silence");
}
