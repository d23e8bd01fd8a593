//! Acceptance suite: the pinned exit criteria of the project, one test per
//! criterion, each printing a single PASS/FAIL line. All arithmetic is
//! exact; expected values are frozen from independent oracles (brute-force
//! enumeration, modular isotropy search, symbolic substitution).
//!
//! Timing bounds are asserted in optimized builds and reported otherwise:
//! run with `cargo test --release --test acceptance -- --nocapture`.

use num_bigint::BigInt;
use std::time::Instant;
use wildbrauer::brauer::{evaluate_symbol_at, scan_evaluation, ScanVerdict, SymbolPair};
use wildbrauer::finite_field::{FFElement, FieldCtx};
use wildbrauer::forms::{DiffForm, FunctionFieldCtx, RatFunc};
use wildbrauer::fpoly::{U, V};
use wildbrauer::kummer::{
    build_descent_matrix, descent_check, legendre_transform, two_torsion, CurveParams,
};
use wildbrauer::padic::{
    hensel_lift, hilbert_symbol, is_square, isotropy_oracle, LocalField, PadicValue, SymbolValue,
};
use wildbrauer::ratpoly::{q_int, RatPoly};
use wildbrauer::scenarios;
use wildbrauer::surface::{is_ordinary_k3, smooth_seeds, HomogeneousPoly, Ordinarity};
use wildbrauer::swan::{
    cyclic_filt_level, role_verdict, rsw_of_cyclic, CyclicSymbolData, K3Hypotheses, ReductionType,
    RoleVerdict, SecondSlot,
};

fn report(criterion: &str, pass: bool, seconds: f64, bound: f64, detail: &str) {
    let line = format!(
        "criterion {criterion}: {} ({seconds:.2}s, bound {bound}s) -- {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    println!("{line}");
    assert!(pass, "{line}");
    if !cfg!(debug_assertions) {
        assert!(seconds < bound, "time bound exceeded: {line}");
    }
}

#[test]
fn criterion_1_ordinarity_table() {
    let start = Instant::now();
    let cases: [(&str, HomogeneousPoly, u64, Vec<usize>, Ordinarity, u64); 6] = [
        (
            "eq16",
            scenarios::quartic_eq16(),
            2,
            vec![1, 2],
            Ordinarity::Ordinary,
            10,
        ),
        (
            "family odd",
            scenarios::family_fibre_odd(),
            2,
            vec![1, 2],
            Ordinarity::Ordinary,
            8,
        ),
        (
            "family 2mod4",
            scenarios::family_fibre_2mod4(),
            2,
            vec![1, 2],
            Ordinarity::NonOrdinary,
            9,
        ),
        (
            "family 0mod4",
            scenarios::family_fibre_0mod4(),
            2,
            vec![1, 2],
            Ordinarity::NonOrdinary,
            7,
        ),
        (
            "diag5",
            scenarios::diagonal_quartic_5(),
            5,
            vec![1, 2],
            Ordinarity::Ordinary,
            80,
        ),
        (
            "diag3/F9",
            scenarios::diagonal_quartic_3(),
            3,
            vec![2, 4],
            Ordinarity::NonOrdinary,
            280,
        ),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (name, f, p, depths, expect, first_count) in &cases {
        let t0 = Instant::now();
        let rep = is_ordinary_k3(f, *p, depths).expect("count");
        let dt = t0.elapsed().as_secs_f64();
        // depth stability is enforced by is_ordinary_k3 (verdicts for n and
        // 2n must agree or it errors); the frozen first count pins the oracle
        let ok = rep.verdict == *expect && rep.counts[0].1 == *first_count;
        if !cfg!(debug_assertions) {
            pass &= dt < 30.0;
        }
        pass &= ok;
        detail.push_str(&format!("{name}:{:?}@{dt:.2}s ", rep.verdict));
    }
    report("1 (ordinarity table)", pass, start.elapsed().as_secs_f64(), 200.0, &detail);
}

#[test]
fn criterion_2_kummer_pipeline() {
    let start = Instant::now();
    let e = CurveParams::new(1, 0, -7, 5).unwrap();
    let phi = e.two_division_poly();
    let mut pass =
        phi.iter().map(|c| c.to_string()).collect::<Vec<_>>() == ["-11", "-8", "11", "8"];
    let t = two_torsion(&e, 48).unwrap();
    let betas: Vec<String> = t
        .betas
        .iter()
        .map(|b| b.exact_parts().unwrap().0.to_string())
        .collect();
    let alphas: Vec<String> = t
        .alphas
        .iter()
        .map(|b| b.exact_parts().unwrap().0.to_string())
        .collect();
    pass &= betas == ["-11/8", "-1", "1"];
    pass &= alphas == ["7/4", "1", "-3"];
    let l = legendre_transform(&e, &t).unwrap();
    let g1 = l.gamma1.exact_parts().unwrap().0.to_string();
    let g2 = l.gamma2.exact_parts().unwrap().0.to_string();
    let oracle = l
        .gamma2_oracle
        .as_ref()
        .unwrap()
        .exact_parts()
        .unwrap()
        .0
        .to_string();
    pass &= g1 == "-3" && g2 == oracle;
    // the printed value -21 is a discrepancy against the recomputed gamma2
    let printed_discrepancy = g2 != "-21";
    pass &= printed_discrepancy;
    let m = build_descent_matrix(&l, &l);
    pass &= m.is_symmetric();
    let verdicts = descent_check(&m).unwrap();
    pass &= verdicts == [false; 4];
    // each row indeed contains a non-square
    for row in &m.entries {
        let has_nonsquare = row
            .iter()
            .any(|x| !is_square(x).map(|c| c.is_square).unwrap_or(true));
        pass &= has_nonsquare;
    }
    report(
        "2 (two-torsion pipeline)",
        pass,
        start.elapsed().as_secs_f64(),
        5.0,
        &format!("betas {betas:?}, gamma2 formula/oracle {g2}/{oracle}, printed -21 flagged: {printed_discrepancy}, verdicts {verdicts:?}"),
    );
}

#[test]
fn criterion_3_eq16_evaluation() {
    let start = Instant::now();
    let rep = scan_evaluation(
        &scenarios::symbol_eq16(),
        &[],
        &scenarios::quartic_eq16(),
        LocalField::qp(2),
        4,
        12,
        500,
        0,
    )
    .unwrap();
    let pass = rep.verdict == ScanVerdict::NonConstant
        && rep.points_evaluated >= 200
        && rep.zeros > 0
        && rep.halves > 0;
    report(
        "3 (evaluation scan, eq16)",
        pass,
        start.elapsed().as_secs_f64(),
        120.0,
        &format!("zeros {}, halves {}, evaluated {}", rep.zeros, rep.halves, rep.points_evaluated),
    );
}

#[test]
fn criterion_4_family_evaluation() {
    let start = Instant::now();
    let scan = |alpha: i64| {
        scan_evaluation(
            &scenarios::symbol_family(alpha),
            &[scenarios::symbol_family_rewritten(alpha)],
            &scenarios::family_surface(alpha),
            LocalField::qp(2),
            4,
            12,
            500,
            0,
        )
        .unwrap()
    };
    let r1 = scan(1);
    let r2 = scan(2);
    let pass = r1.verdict == ScanVerdict::NonConstant
        && r2.verdict == ScanVerdict::NoCounterexampleFound
        && r2.points_evaluated >= 200
        && r2.halves == 0;
    report(
        "4 (family evaluation)",
        pass,
        start.elapsed().also_secs(),
        240.0,
        &format!(
            "alpha=1: {}z/{}h; alpha=2: {}z/{}h over {} points",
            r1.zeros, r1.halves, r2.zeros, r2.halves, r2.points_evaluated
        ),
    );
}

trait Secs {
    fn also_secs(&self) -> f64;
}
impl Secs for std::time::Duration {
    fn also_secs(&self) -> f64 {
        self.as_secs_f64()
    }
}

#[test]
fn criterion_5_cartier_suite() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    // eq16 chart form is logarithmic
    let f = scenarios::quartic_eq16();
    let chart = scenarios::chart_x_w(&f);
    let omega = chart.omega(&f, 0, 3).unwrap();
    let c = omega.classify().unwrap();
    pass &= c.logarithmic && !c.exact;
    detail.push_str("eq16:log ");
    // chart consistency on two further chart pairs
    let o2 = chart.omega(&f, 0, 2).unwrap();
    let o3 = chart.omega(&f, 1, 3).unwrap();
    pass &= o2 == omega && o3 == omega;
    detail.push_str("consistency:2pairs ");
    // both non-ordinary fibres: Cartier kills the chart form
    for (name, fibre) in [
        ("2mod4", scenarios::family_fibre_2mod4()),
        ("0mod4", scenarios::family_fibre_0mod4()),
    ] {
        let ch = scenarios::chart_x_w(&fibre);
        let om = ch.omega(&fibre, 0, 3).unwrap();
        let cl = om.classify().unwrap();
        pass &= cl.exact && cl.cartier_image.as_ref().is_some_and(|i| i.is_zero());
        detail.push_str(&format!("{name}:C=0 "));
    }
    // the ordinary fibre: Cartier fixes the chart form
    let ford = scenarios::family_fibre_odd();
    let ch = scenarios::chart_x_w(&ford);
    let om = ch.omega(&ford, 0, 3).unwrap();
    pass &= om.classify().unwrap().logarithmic;
    detail.push_str("odd:C=id");
    report(
        "5 (Cartier suite)",
        pass,
        start.elapsed().as_secs_f64(),
        60.0,
        &detail,
    );
}

#[test]
fn criterion_6_hilbert_oracle_equivalence() {
    let start = Instant::now();
    let mut pass = true;
    let mut checked = 0usize;
    for (p, reps) in [
        (2u64, vec![1i64, -1, 2, -2, 5, -5, 10, -10]),
        (3, vec![1, 2, 3, 6]),
        (5, vec![1, 2, 5, 10]),
    ] {
        let f = LocalField::qp(p);
        let depth = 2 * f.e() as i64 + 3;
        let val = |a: i64| PadicValue::from_int(f, a);
        for &a in &reps {
            for &b in &reps {
                let h = hilbert_symbol(&val(a), &val(b)).unwrap();
                let o = isotropy_oracle(&val(a), &val(b), depth).unwrap();
                let agree = (h == SymbolValue::Zero) == o;
                pass &= agree;
                checked += 1;
                // symmetry
                pass &= h == hilbert_symbol(&val(b), &val(a)).unwrap();
                // (a, -a) = 0
                pass &= hilbert_symbol(&val(a), &val(-a)).unwrap() == SymbolValue::Zero;
                // bimultiplicativity over the grid
                for &b2 in &reps {
                    let lhs = hilbert_symbol(&val(a), &val(b * b2)).unwrap();
                    let rhs = hilbert_symbol(&val(a), &val(b)).unwrap()
                        + hilbert_symbol(&val(a), &val(b2)).unwrap();
                    pass &= lhs == rhs;
                }
                // square-scaling invariance
                let s2 = 9i64;
                pass &= hilbert_symbol(&val(a * s2), &val(b)).unwrap() == h;
            }
        }
    }
    report(
        "6 (Hilbert oracle equivalence)",
        pass,
        start.elapsed().as_secs_f64(),
        60.0,
        &format!("{checked} formula/oracle pairs agreed across Q_2, Q_3, Q_5"),
    );
}

#[test]
fn criterion_7_swan_suite() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    // fil_0 placement of the 0mod4 ramified symbol (p=2, e=2, e'=4, m=4)
    let shape22 = scenarios::shape_2_2();
    let rational = FunctionFieldCtx::rational(&scenarios::f2(), "s", "t");
    let s0 = CyclicSymbolData {
        m: 4,
        x_bar: RatFunc::var(&rational, U),
        second_slot: SecondSlot::UnitLift(RatFunc::var(&rational, V)),
    };
    pass &= cyclic_filt_level(&s0, &shape22).unwrap() == 0;
    detail.push_str("fil0 ");
    // eq16: rsw_2 = (omega, 0), omega the chart form; c-bar scaling keeps it
    // logarithmic
    let f = scenarios::quartic_eq16();
    let chart = scenarios::chart_x_w(&f);
    let pair = scenarios::rsw_eq16(&chart).unwrap();
    let omega = chart.omega(&f, 0, 3).unwrap();
    pass &= pair.level == 2 && pair.alpha == omega && pair.beta.is_zero();
    pass &= pair.alpha.classify().unwrap().logarithmic;
    detail.push_str("eq16:(w,0)@2 ");
    // the 3-adic product scenario: nonzero pair at level 3, logarithmic
    let (ctx3, y, v) = scenarios::product_curve_field();
    let x = RatFunc::var(&ctx3, U);
    let u = RatFunc::var(&ctx3, V);
    let s3 = CyclicSymbolData {
        m: 0,
        x_bar: v.sub(&u),
        second_slot: SecondSlot::UnitLift(y.sub(&x)),
    };
    let pair3 = rsw_of_cyclic(&s3, &scenarios::shape_3_2(), &ctx3).unwrap();
    pass &= pair3.level == 3 && !pair3.alpha.is_zero() && pair3.beta.is_zero();
    pass &= pair3.alpha.classify().unwrap().logarithmic;
    detail.push_str("prod3:(w,0)@3 ");
    // 2mod4 case: m=2 at shape (2,2), level 2, alpha = d((xy/z^2) dlog(z/x))
    let fibre = scenarios::family_fibre_2mod4();
    let ch = scenarios::chart_x_w(&fibre);
    let xy = ch.eval_homogeneous(&RatPoly::term(q_int(1), [1, 1, 0, 0])).unwrap();
    let z2 = ch.eval_homogeneous(&RatPoly::term(q_int(1), [0, 0, 2, 0])).unwrap();
    let fb = xy.mul(&z2.inv().unwrap());
    let s2 = CyclicSymbolData {
        m: 2,
        x_bar: fb,
        second_slot: SecondSlot::UnitLift(ch.coordinate(2).clone()),
    };
    let pair2 = rsw_of_cyclic(&s2, &shape22, &ch.ctx).unwrap();
    let om2 = ch.omega(&fibre, 0, 3).unwrap();
    pass &= pair2.level == 2 && pair2.alpha == om2 && pair2.beta.is_zero();
    detail.push_str("2mod4:(w,0)@2 ");
    // every produced pair satisfies the (alpha, beta) invariants; the RswPair
    // constructor enforces them, re-check explicitly here
    for (pr, p_char) in [(&pair, 2u64), (&pair3, 3), (&pair2, 2)] {
        pass &= pr.alpha.d().unwrap().is_zero();
        let scal = FFElement::from_int(pr.alpha.ctx().ground(), (pr.level as i64) % p_char as i64);
        pass &= pr.beta.d().unwrap() == pr.alpha.scale_const(&scal);
    }
    detail.push_str("invariants");
    report(
        "7 (Swan suite)",
        pass,
        start.elapsed().as_secs_f64(),
        10.0,
        &detail,
    );
}

#[test]
fn criterion_8_verdict_grid() {
    let start = Instant::now();
    let mut pass = true;
    let hyp = K3Hypotheses::k3();
    let mut count = 0;
    for p in [2u64, 3, 5] {
        for e in 1..=6u32 {
            for red in [ReductionType::Ordinary, ReductionType::NonOrdinary] {
                let v = role_verdict(p, e, red, hyp).unwrap();
                let expect = match red {
                    ReductionType::Ordinary => {
                        if e % (p as u32 - 1) != 0 {
                            RoleVerdict::CannotPlayRole
                        } else {
                            RoleVerdict::Possible
                        }
                    }
                    ReductionType::NonOrdinary => {
                        if e < p as u32 {
                            RoleVerdict::CannotPlayRole
                        } else {
                            RoleVerdict::Possible
                        }
                    }
                };
                pass &= v.verdict == expect;
                count += 1;
            }
        }
    }
    // witnessed-possible triples are never contradicted
    let witnessed = [
        (2u64, 1u32, ReductionType::Ordinary),
        (2, 2, ReductionType::NonOrdinary),
        (3, 2, ReductionType::Ordinary),
        (5, 4, ReductionType::Ordinary),
        (3, 4, ReductionType::NonOrdinary),
    ];
    for (p, e, red) in witnessed {
        pass &= role_verdict(p, e, red, hyp).unwrap().verdict == RoleVerdict::Possible;
    }
    report(
        "8 (verdict grid)",
        pass,
        start.elapsed().as_secs_f64(),
        1.0,
        &format!("{count} grid cells + 5 witnessed triples"),
    );
}

/// Deterministic generator for random-ish rational functions.
struct Mix(u64);
impl Mix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
    fn ratfunc(&mut self, ctx: &std::sync::Arc<FunctionFieldCtx>) -> RatFunc {
        let g = ctx.ground();
        let mut num = wildbrauer::fpoly::FPoly::zero(g);
        for _ in 0..3 {
            let c = FFElement::from_index(g, (self.next() as usize) % g.order());
            let e = [
                (self.next() % 3) as u16,
                (self.next() % 3) as u16,
                if ctx.extension_data().is_some() {
                    (self.next() % 2) as u16
                } else {
                    0
                },
            ];
            num.add_term(c, e);
        }
        let mut den = wildbrauer::fpoly::FPoly::zero(g);
        for _ in 0..2 {
            let c = FFElement::from_index(g, (self.next() as usize) % g.order());
            let e = [(self.next() % 2) as u16, (self.next() % 2) as u16, 0];
            den.add_term(c, e);
        }
        if den.is_zero() {
            den = wildbrauer::fpoly::FPoly::one(g);
        }
        RatFunc::from_quotient(ctx, num, den)
    }
}

#[test]
fn criterion_9_property_suites() {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    // finite-field axioms to order 81 are covered exhaustively by the unit
    // suite; spot-check the largest context here as a guard
    {
        let ctx = FieldCtx::new(3, 4, None).unwrap();
        let a = FFElement::from_index(&ctx, 37);
        let b = FFElement::from_index(&ctx, 66);
        pass &= a.mul(&b) == b.mul(&a);
        pass &= a.mul(&a.inv().unwrap()).is_one();
        detail.push_str("F81 ");
    }
    // d.d = 0, Cartier/inverse-Cartier roundtrip, classifiers: 100 random
    // forms per context
    let f2 = scenarios::f2();
    let f3 = scenarios::f3();
    let chart = scenarios::chart_x_w(&scenarios::quartic_eq16());
    let contexts = [
        FunctionFieldCtx::rational(&f2, "u", "v"),
        FunctionFieldCtx::rational(&f3, "u", "v"),
        chart.ctx.clone(),
    ];
    let mut rng = Mix(7);
    for ctx in &contexts {
        for _ in 0..100 {
            let g = rng.ratfunc(ctx);
            if g.is_zero() {
                continue;
            }
            // d o d = 0
            let dd = g.d().unwrap().d().unwrap();
            pass &= dd.is_zero();
            // every exact form classifies as exact
            let dg = g.d().unwrap();
            if !dg.is_zero() {
                let cl = dg.classify().unwrap();
                pass &= cl.closed && cl.exact && !cl.logarithmic || dg.is_zero();
            }
            // dlog wedges classify logarithmic
            let h = rng.ratfunc(ctx);
            if !h.is_zero() {
                let w2 = g.dlog().unwrap().wedge(&h.dlog().unwrap()).unwrap();
                if !w2.is_zero() {
                    pass &= w2.classify().unwrap().logarithmic;
                }
            }
            // Cartier roundtrip on 1- and 2-forms
            let one_form = DiffForm::one_form(ctx, g.clone(), RatFunc::zero(ctx));
            let rt = one_form.inverse_cartier().cartier().unwrap();
            pass &= rt == one_form;
            let two_form = DiffForm::two_form(ctx, g.clone());
            pass &= two_form.inverse_cartier().cartier().unwrap() == two_form;
        }
    }
    detail.push_str("forms:3x100 ");
    // Hensel residual guarantees on all lifted points of the eq16 scan
    {
        let f = scenarios::quartic_eq16();
        let field = LocalField::qp(2);
        let ctx = scenarios::f2();
        let seeds = smooth_seeds(&f, &ctx).unwrap();
        let mut lifted_count = 0;
        for (pt, free) in seeds.seeds.iter().take(6) {
            for j in 0..4u64 {
                let lead = pt.leading_index();
                let params: Vec<usize> =
                    (0..4).filter(|&k| k != lead && k != *free).collect();
                let lifts = vec![
                    (params[0], BigInt::from(pt.coords[params[0]].coeffs()[0] as u64 + 2 * j)),
                    (params[1], BigInt::from(pt.coords[params[1]].coeffs()[0] as u64)),
                ];
                if let Ok(point) = hensel_lift(&f, pt, *free, &lifts, field, 12) {
                    // v(f(P)) >= N and reduction equals the seed
                    let fp = wildbrauer::padic::eval_poly(f.poly(), &point.coords, field).unwrap();
                    let ok = match fp.valuation() {
                        Ok(None) => true,
                        Ok(Some(vv)) => vv >= 12,
                        Err(_) => true, // zero to working precision
                    };
                    pass &= ok;
                    for k in 0..4 {
                        let res = point.coords[k].residue_mod_p().unwrap();
                        pass &= res == pt.coords[k].coeffs()[0] as u64;
                    }
                    lifted_count += 1;
                }
            }
        }
        pass &= lifted_count > 0;
        detail.push_str(&format!("hensel:{lifted_count} "));
    }
    // evaluation invariance under projective rescaling and square twists
    {
        let f = scenarios::quartic_eq16();
        let sym = scenarios::symbol_eq16();
        let ctx = scenarios::f2();
        let field = LocalField::qp(2);
        let seeds = smooth_seeds(&f, &ctx).unwrap();
        let mut checked = 0;
        for (pt, free) in seeds.seeds.iter() {
            let lead = pt.leading_index();
            let params: Vec<usize> = (0..4).filter(|&k| k != lead && k != *free).collect();
            for j in 0..4u64 {
            let lifts = vec![
                (params[0], BigInt::from(pt.coords[params[0]].coeffs()[0] as u64 + 2 * j)),
                (params[1], BigInt::from(pt.coords[params[1]].coeffs()[0] as u64 + 2 * (j / 2))),
            ];
            if let Ok(point) = hensel_lift(&f, pt, *free, &lifts, field, 12) {
                if let Ok(base) = evaluate_symbol_at(&sym, &point) {
                    // rescale projectively by 5
                    let mut scaled = point.clone();
                    let s = PadicValue::from_int(field, 5);
                    for c in scaled.coords.iter_mut() {
                        *c = c.mul(&s).unwrap();
                    }
                    pass &= evaluate_symbol_at(&sym, &scaled).unwrap() == base;
                    // twist g by ((x+z)/x)^2
                    let twist_num = HomogeneousPoly::new(sym.g_num.poly().mul(
                        &RatPoly::from_terms([
                            (q_int(1), [2, 0, 0, 0]),
                            (q_int(2), [1, 0, 1, 0]),
                            (q_int(1), [0, 0, 2, 0]),
                        ]),
                    ))
                    .unwrap();
                    let twist_den = HomogeneousPoly::new(
                        sym.g_den.poly().mul(&RatPoly::term(q_int(1), [2, 0, 0, 0])),
                    )
                    .unwrap();
                    let twisted = SymbolPair::new(
                        sym.f_num.clone(),
                        sym.f_den.clone(),
                        twist_num,
                        twist_den,
                    )
                    .unwrap();
                    if let Ok(tv) = evaluate_symbol_at(&twisted, &point) {
                        pass &= tv == base;
                    }
                    checked += 1;
                }
            }
            }
        }
        pass &= checked >= 10;
        detail.push_str(&format!("invariance:{checked}"));
    }
    report(
        "9 (property suites)",
        pass,
        start.elapsed().as_secs_f64(),
        120.0,
        &detail,
    );
}
