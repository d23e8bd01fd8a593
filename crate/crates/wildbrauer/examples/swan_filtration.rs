//! Swan-conductor filtration arithmetic: local shapes, filtration levels of
//! cyclic symbols, refined-Swan-conductor pairs, the tensor-power and
//! base-change laws, level-zero residues, and the ramification verdict grid.
//!
//! Run with: cargo run --release --example swan_filtration

use wildbrauer::finite_field::FFElement;
use wildbrauer::forms::{DiffForm, FunctionFieldCtx, RatFunc};
use wildbrauer::fpoly::{U, V};
use wildbrauer::scenarios;
use wildbrauer::swan::{
    base_change_rsw, cyclic_filt_level, residue_fil0, role_verdict, tensor_power_rsw,
    transcendence_witness, CyclicSymbolData, K3Hypotheses, ReductionType, RswPair, SecondSlot,
};

fn main() {
    println!("=== local shapes ===");
    for (label, shape) in [
        ("(p=2, e=1, pi=2)", scenarios::shape_2_1()),
        ("(p=2, e=2, pi^2=2)", scenarios::shape_2_2()),
        ("(p=3, e=2, pi=zeta-1)", scenarios::shape_3_2()),
    ] {
        println!(
            "    {label}: e' = {:?}, u-bar = {}, c-bar = {}",
            shape.e_prime,
            shape.u_bar,
            shape
                .c_bar
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or("absent".into())
        );
    }

    println!("\n=== filtration levels of (1 + pi^m x, y) at shape (2,2), e' = 4 ===");
    let shape22 = scenarios::shape_2_2();
    let rational = FunctionFieldCtx::rational(&scenarios::f2(), "s", "t");
    for m in 0..=4u32 {
        let s = CyclicSymbolData {
            m,
            x_bar: RatFunc::var(&rational, U),
            second_slot: SecondSlot::UnitLift(RatFunc::var(&rational, V)),
        };
        println!("    m = {m} -> fil_{}", cyclic_filt_level(&s, &shape22).unwrap());
    }

    println!("\n=== refined Swan conductor of the eq16 symbol ===");
    let f = scenarios::quartic_eq16();
    let chart = scenarios::chart_x_w(&f);
    let pair = scenarios::rsw_eq16(&chart).unwrap();
    println!(
        "    level {}: alpha nonzero {}, beta zero {}, transcendence witness {}",
        pair.level,
        !pair.alpha.is_zero(),
        pair.beta.is_zero(),
        transcendence_witness(&pair)
    );

    println!("\n=== tensor-power law at level e' (logarithmic alpha dies) ===");
    let ctx = FunctionFieldCtx::rational(&scenarios::f2(), "u", "v");
    let u = RatFunc::var(&ctx, U);
    let v = RatFunc::var(&ctx, V);
    let omega = u.dlog().unwrap().wedge(&v.dlog().unwrap()).unwrap();
    let p0 = RswPair::new(2, omega, DiffForm::zero(&ctx, 1)).unwrap();
    let shape21 = scenarios::shape_2_1();
    let dropped = tensor_power_rsw(&p0, &shape21).unwrap();
    println!(
        "    (dlog u ^ dlog v, 0) at level 2 -> level {} with alpha zero: {}",
        dropped.level,
        dropped.alpha.is_zero()
    );

    println!("\n=== base change scales the level ===");
    let p1 = RswPair::new(
        2,
        RatFunc::var(&ctx, U)
            .dlog()
            .unwrap()
            .wedge(&RatFunc::var(&ctx, V).dlog().unwrap())
            .unwrap(),
        DiffForm::zero(&ctx, 1),
    )
    .unwrap();
    let bc = base_change_rsw(&p1, 3, &FFElement::one(&scenarios::f2())).unwrap();
    println!("    level 2 under e_ext = 3 -> level {}", bc.level);

    println!("\n=== level-zero residues ===");
    let ctx_t = FunctionFieldCtx::rational(&scenarios::f2(), "t", "s");
    let shape = scenarios::shape_2_1();
    let cases = [
        (
            "unit second slot",
            CyclicSymbolData {
                m: 2,
                x_bar: RatFunc::var(&ctx_t, U),
                second_slot: SecondSlot::UnitLift(RatFunc::var(&ctx_t, V)),
            },
        ),
        (
            "uniformiser slot, x = t",
            CyclicSymbolData {
                m: 2,
                x_bar: RatFunc::var(&ctx_t, U),
                second_slot: SecondSlot::Uniformiser,
            },
        ),
    ];
    for (label, s) in cases {
        let r = residue_fil0(&s, &shape).unwrap();
        println!(
            "    {label}: zero residue {}, placement {:?}",
            r.zero_residue, r.ev
        );
    }

    println!("\n=== verdict grid (can the prime play a role?) ===");
    println!("    p  e  ordinary      non-ordinary");
    for p in [2u64, 3, 5] {
        for e in 1..=6u32 {
            let vo = role_verdict(p, e, ReductionType::Ordinary, K3Hypotheses::k3()).unwrap();
            let vn = role_verdict(p, e, ReductionType::NonOrdinary, K3Hypotheses::k3()).unwrap();
            println!("    {p}  {e}  {:<12?}  {:?}", vo.verdict, vn.verdict);
        }
    }
}
