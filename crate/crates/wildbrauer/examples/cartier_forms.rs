//! Cartier calculus on differential forms in characteristic p: the basic
//! operators on F_2(u,v), and the chart 2-forms of the quartic surfaces with
//! their exact/logarithmic classification.
//!
//! A closed form is exact iff its Cartier image vanishes and logarithmic iff
//! the Cartier operator fixes it; on a K3 reduction the global 2-form is
//! Cartier-fixed precisely in the ordinary case.
//!
//! Run with: cargo run --release --example cartier_forms

use wildbrauer::forms::{DiffForm, FunctionFieldCtx, RatFunc};
use wildbrauer::fpoly::{U, V};
use wildbrauer::scenarios;

fn describe(name: &str, form: &DiffForm) {
    match form.classify() {
        Ok(c) => println!(
            "    {name}: closed {}, exact {}, logarithmic {}",
            c.closed, c.exact, c.logarithmic
        ),
        Err(e) => println!("    {name}: {e}"),
    }
}

fn main() {
    println!("=== basic forms over F_2(u,v) ===");
    let ctx = FunctionFieldCtx::rational(&scenarios::f2(), "u", "v");
    let u = RatFunc::var(&ctx, U);
    let v = RatFunc::var(&ctx, V);
    let duv = DiffForm::two_form(&ctx, RatFunc::one(&ctx));
    describe("du^dv", &duv);
    let log = u.dlog().unwrap().wedge(&v.dlog().unwrap()).unwrap();
    describe("dlog u ^ dlog v", &log);
    let mid = DiffForm::two_form(&ctx, u.mul(&v));
    describe("uv du^dv", &mid);
    println!(
        "    C(uv du^dv) = {:?}",
        mid.cartier().unwrap()
    );
    println!(
        "    C^-1(du^dv) = {:?} (roundtrips to du^dv)",
        duv.inverse_cartier()
    );

    println!("\n=== chart 2-forms of the quartic surfaces ===");
    let surfaces = [
        ("eq16 (ordinary)", scenarios::quartic_eq16()),
        ("family odd (ordinary)", scenarios::family_fibre_odd()),
        ("family 2mod4 (non-ordinary)", scenarios::family_fibre_2mod4()),
        ("family 0mod4 (non-ordinary)", scenarios::family_fibre_0mod4()),
    ];
    for (name, f) in surfaces {
        let chart = scenarios::chart_x_w(&f);
        let omega = chart.omega(&f, 0, 3).unwrap();
        describe(name, &omega);
    }

    println!("\n=== chart consistency on the eq16 quartic ===");
    let f = scenarios::quartic_eq16();
    let chart = scenarios::chart_x_w(&f);
    let base = chart.omega(&f, 0, 3).unwrap();
    for (p2, q2) in [(0usize, 2usize), (1, 3), (2, 3)] {
        let other = chart.omega(&f, p2, q2).unwrap();
        println!(
            "    omega_(0,3) == omega_({p2},{q2}): {}",
            other == base
        );
    }
}
