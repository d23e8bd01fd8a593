//! Evaluation of quaternion symbol algebras at p-adic points of surfaces,
//! residue-disc scans for non-constancy of the evaluation map, and tame
//! residues of symbols along divisors.
//!
//! A scan never claims constancy: the verdict vocabulary separates a
//! witnessed non-constant pair from bounded-search silence.

use crate::finite_field::{FFElement, FieldCtx};
use crate::padic::{
    eval_poly, hensel_lift, hilbert_symbol, LocalField, PadicError, SymbolValue,
};
pub use crate::padic::PadicSurfacePoint;
use crate::surface::{smooth_seeds, HomogeneousPoly, SurfaceError};
use num_bigint::BigInt;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BrauerError {
    DegreeMismatch,
    SymbolUndefinedAtPoint,
    InsufficientPrecision,
    NoSmoothSeeds,
    EmptySample,
    Padic(PadicError),
    Surface(SurfaceError),
}

impl fmt::Display for BrauerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BrauerError::DegreeMismatch => {
                write!(f, "numerator/denominator degrees differ; not a function on P^3")
            }
            BrauerError::SymbolUndefinedAtPoint => {
                write!(f, "symbol entry vanishes or is unreadable at the point")
            }
            BrauerError::InsufficientPrecision => write!(f, "insufficient precision"),
            BrauerError::NoSmoothSeeds => write!(f, "no smooth seeds on the reduction"),
            BrauerError::EmptySample => write!(f, "empty divisor sample"),
            BrauerError::Padic(e) => write!(f, "{e}"),
            BrauerError::Surface(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BrauerError {}

impl From<PadicError> for BrauerError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::InsufficientPrecision => BrauerError::InsufficientPrecision,
            other => BrauerError::Padic(other),
        }
    }
}

impl From<SurfaceError> for BrauerError {
    fn from(e: SurfaceError) -> Self {
        BrauerError::Surface(e)
    }
}

/// Quaternion symbol (f, g) of two degree-zero functions on P^3, each given
/// as a ratio of homogeneous polynomials of matching degree.
#[derive(Debug, Clone)]
pub struct SymbolPair {
    pub f_num: HomogeneousPoly,
    pub f_den: HomogeneousPoly,
    pub g_num: HomogeneousPoly,
    pub g_den: HomogeneousPoly,
}

impl SymbolPair {
    pub fn new(
        f_num: HomogeneousPoly,
        f_den: HomogeneousPoly,
        g_num: HomogeneousPoly,
        g_den: HomogeneousPoly,
    ) -> Result<SymbolPair, BrauerError> {
        if f_num.degree() != f_den.degree() || g_num.degree() != g_den.degree() {
            return Err(BrauerError::DegreeMismatch);
        }
        Ok(SymbolPair {
            f_num,
            f_den,
            g_num,
            g_den,
        })
    }
}

/// Evaluate the symbol at a point: the Hilbert symbol of (f(P), g(P)).
/// Fails with `SymbolUndefinedAtPoint` when either function vanishes exactly
/// or its square class is not readable at the point's precision.
pub fn evaluate_symbol_at(
    a: &SymbolPair,
    point: &PadicSurfacePoint,
) -> Result<SymbolValue, BrauerError> {
    let field = point.coords[0].field();
    let parts = [
        eval_poly(a.f_num.poly(), &point.coords, field)?,
        eval_poly(a.f_den.poly(), &point.coords, field)?,
        eval_poly(a.g_num.poly(), &point.coords, field)?,
        eval_poly(a.g_den.poly(), &point.coords, field)?,
    ];
    for v in &parts {
        if v.is_exact_zero() {
            return Err(BrauerError::SymbolUndefinedAtPoint);
        }
        match v.valuation() {
            Ok(Some(val)) => {
                // need margin to read the square class of the quotient
                let guard = if field.p() == 2 { 3 } else { 1 };
                if !v.is_exact() && val > point.precision - guard {
                    return Err(BrauerError::SymbolUndefinedAtPoint);
                }
            }
            Ok(None) => return Err(BrauerError::SymbolUndefinedAtPoint),
            Err(_) => return Err(BrauerError::SymbolUndefinedAtPoint),
        }
    }
    let fv = parts[0].div(&parts[1])?;
    let gv = parts[2].div(&parts[3])?;
    Ok(hilbert_symbol(&fv, &gv)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ScanVerdict {
    NonConstant,
    NoCounterexampleFound,
}

/// Result of a residue-disc evaluation scan.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EvalReport {
    /// (point digest, value) samples; capped to keep reports small.
    pub samples: Vec<(String, SymbolValue)>,
    pub zeros: u64,
    pub halves: u64,
    pub skipped: u64,
    pub points_evaluated: u64,
    pub verdict: ScanVerdict,
    /// digests of one witness per value, when seen
    pub witness_zero: Option<String>,
    pub witness_half: Option<String>,
}

/// Scan evaluation of a symbol over residue discs of depth `disc_depth`,
/// lifting one representative per disc to `precision` and evaluating. When a
/// symbol entry is undefined at a point, the registered equivalent
/// representations are tried before the point is skipped.
#[allow(clippy::too_many_arguments)]
pub fn scan_evaluation(
    symbol: &SymbolPair,
    equivalents: &[SymbolPair],
    f: &HomogeneousPoly,
    field: LocalField,
    disc_depth: u32,
    precision: i64,
    budget: u64,
    seed_rotation: u64,
) -> Result<EvalReport, BrauerError> {
    let p = field.p();
    let ctx = FieldCtx::new(p, 1, None).map_err(SurfaceError::Field)?;
    let seeds = smooth_seeds(f, &ctx)?;
    if seeds.seeds.is_empty() {
        return Err(BrauerError::NoSmoothSeeds);
    }
    let mut report = EvalReport {
        samples: vec![],
        zeros: 0,
        halves: 0,
        skipped: 0,
        points_evaluated: 0,
        verdict: ScanVerdict::NoCounterexampleFound,
        witness_zero: None,
        witness_half: None,
    };
    // lifts per parameter coordinate: residue + p*j for j < p^{depth-1}
    let reps_per_coord: u64 = p.pow(disc_depth.saturating_sub(1));
    let nseeds = seeds.seeds.len() as u64;
    'outer: for si in 0..nseeds {
        let (point, free) = &seeds.seeds[((si + seed_rotation) % nseeds) as usize];
        let lead = point.leading_index();
        let params: Vec<usize> = (0..4).filter(|&k| k != lead && k != *free).collect();
        for j0 in 0..reps_per_coord {
            for j1 in 0..reps_per_coord {
                if report.points_evaluated >= budget {
                    break 'outer;
                }
                let lifts: Vec<(usize, BigInt)> = vec![
                    (
                        params[0],
                        BigInt::from(point.coords[params[0]].coeffs()[0] as u64 + p * j0),
                    ),
                    (
                        params[1],
                        BigInt::from(point.coords[params[1]].coeffs()[0] as u64 + p * j1),
                    ),
                ];
                let lifted = match hensel_lift(f, point, *free, &lifts, field, precision) {
                    Ok(pt) => pt,
                    Err(_) => {
                        report.skipped += 1;
                        continue;
                    }
                };
                let digest = format!(
                    "seed{:?}:free{}:d({},{})",
                    point
                        .coords
                        .iter()
                        .map(|c| c.coeffs()[0])
                        .collect::<Vec<_>>(),
                    free,
                    j0,
                    j1
                );
                let mut value = evaluate_symbol_at(symbol, &lifted);
                if value.is_err() {
                    for alt in equivalents {
                        value = evaluate_symbol_at(alt, &lifted);
                        if value.is_ok() {
                            break;
                        }
                    }
                }
                match value {
                    Ok(v) => {
                        report.points_evaluated += 1;
                        match v {
                            SymbolValue::Zero => {
                                report.zeros += 1;
                                if report.witness_zero.is_none() {
                                    report.witness_zero = Some(digest.clone());
                                }
                            }
                            SymbolValue::Half => {
                                report.halves += 1;
                                if report.witness_half.is_none() {
                                    report.witness_half = Some(digest.clone());
                                }
                            }
                        }
                        if report.samples.len() < 32 {
                            report.samples.push((digest, v));
                        }
                    }
                    Err(_) => {
                        report.skipped += 1;
                    }
                }
            }
        }
    }
    if report.zeros > 0 && report.halves > 0 {
        report.verdict = ScanVerdict::NonConstant;
    }
    Ok(report)
}

/// Divisor-side data of a symbol (a, b): the valuations of a and b along the
/// divisor and a sampler yielding residue-field values of the unit parts at
/// points of the divisor.
pub struct DivisorDatum {
    pub label: String,
    pub va: i64,
    pub vb: i64,
    /// yields (a-unit, b-unit) residue values at sampled divisor points
    #[allow(clippy::type_complexity)]
    pub sampler: Box<dyn Fn(&Arc<FieldCtx>) -> Vec<(FFElement, FFElement)>>,
}

/// The tame-residue square class along a divisor, as exponent data
/// (-1)^{va vb} a^{vb} / b^{va} together with sampled class values.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TameResidue {
    pub sign_exponent: i64,
    pub a_exponent: i64,
    pub b_exponent: i64,
}

pub fn tame_residue(d: &DivisorDatum) -> TameResidue {
    TameResidue {
        sign_exponent: (d.va * d.vb).rem_euclid(2),
        a_exponent: d.vb,
        b_exponent: -d.va,
    }
}

/// Evaluate the tame residue value at one sampled pair of unit residues.
pub fn tame_residue_value(
    d: &DivisorDatum,
    a_unit: &FFElement,
    b_unit: &FFElement,
) -> Result<FFElement, BrauerError> {
    if a_unit.is_zero() || b_unit.is_zero() {
        return Err(BrauerError::SymbolUndefinedAtPoint);
    }
    let ctx = a_unit.ctx();
    let sign = if (d.va * d.vb).rem_euclid(2) == 1 {
        FFElement::from_int(ctx, -1)
    } else {
        FFElement::one(ctx)
    };
    let pow_signed = |x: &FFElement, e: i64| -> FFElement {
        let q1 = ctx.order() as i64 - 1;
        let e = e.rem_euclid(q1.max(1));
        x.pow(e as u64)
    };
    Ok(sign
        .mul(&pow_signed(a_unit, d.vb))
        .mul(&pow_signed(b_unit, -d.va)))
}

/// Sampling evidence about a residue class over a list of finite fields.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ProbeReport {
    pub field_order: usize,
    pub samples: usize,
    pub squares: usize,
    pub all_squares: bool,
}

/// Evaluate the residue expression at all sampled divisor points over each
/// field; all-squares is evidence (not proof) of a trivial residue class.
pub fn residue_probe(
    d: &DivisorDatum,
    fields: &[Arc<FieldCtx>],
) -> Result<Vec<ProbeReport>, BrauerError> {
    let mut out = Vec::new();
    for ctx in fields {
        let samples = (d.sampler)(ctx);
        if samples.is_empty() {
            return Err(BrauerError::EmptySample);
        }
        let mut squares = 0usize;
        for (au, bu) in &samples {
            let v = tame_residue_value(d, au, bu)?;
            if v.is_square() {
                squares += 1;
            }
        }
        out.push(ProbeReport {
            field_order: ctx.order(),
            samples: samples.len(),
            squares,
            all_squares: squares == samples.len(),
        });
    }
    Ok(out)
}

/// The divisors of the quartic family surface along which the standard
/// symbol ((z^2 + a^2 xy)/z^2, -z/x) needs residues, with samplers drawn
/// from their F_q points. `alpha_sq` is the residue of the parameter square.
pub mod family_divisors {
    use super::*;

    /// D1: {x = 0, y^3 z + z^3 w + w^4 = 0}, local parameter x. For the
    /// symbol (f/z^2, -z/x): v(f/z^2) = 0 and v(-z/x) = -1, so the residue
    /// is the class of (f/z^2)^{-1}, which restricts to 1 since f = z^2 on D1.
    pub fn d1() -> DivisorDatum {
        DivisorDatum {
            label: "D1: x=0, y^3 z + z^3 w + w^4 = 0".into(),
            va: 0,
            vb: -1,
            sampler: Box::new(move |ctx| {
                let mut out = vec![];
                let q = ctx.order();
                // points (0 : 1 : z : w) on the curve slice
                for zi in 0..q {
                    for wi in 0..q {
                        let y = FFElement::one(ctx);
                        let z = FFElement::from_index(ctx, zi);
                        let w = FFElement::from_index(ctx, wi);
                        let c = y.pow(3).mul(&z).add(&z.pow(3).mul(&w)).add(&w.pow(4));
                        if !c.is_zero() || z.is_zero() {
                            continue;
                        }
                        // a-unit: f/z^2 restricts to 1 on D1
                        let au = FFElement::one(ctx);
                        // b-unit: (-z/x) * x = -z
                        let bu = z.neg();
                        out.push((au, bu));
                    }
                }
                out
            }),
        }
    }

    /// D2: {z = 0, x^3 y = w^4} with local parameter z along the divisor;
    /// (va, vb) = (-2, 1) for (f/z^2, -z/x) and the residue value is
    /// a^2 y / x = (a w^2/x^2)^2, a square on the nose.
    pub fn d2(alpha_sq: i64) -> DivisorDatum {
        DivisorDatum {
            label: "D2: z=0, x^3 y = w^4".into(),
            va: -2,
            vb: 1,
            sampler: Box::new(move |ctx| {
                let mut out = vec![];
                let q = ctx.order();
                let a2 = FFElement::from_int(ctx, alpha_sq);
                if a2.is_zero() {
                    return out;
                }
                // points (1 : w^4 : 0 : w)
                for wi in 0..q {
                    let w = FFElement::from_index(ctx, wi);
                    let y = w.pow(4);
                    if y.is_zero() {
                        continue;
                    }
                    // a-unit: f/z^2 has unit part f*z^{-2}... along z -> 0 the
                    // unit of f = z^2 + a^2 x y is a^2 x y (x = 1)
                    let au = a2.mul(&y);
                    // b-unit: (-z/x)*z^{-1} = -1/x = -1
                    let bu = FFElement::from_int(ctx, -1);
                    out.push((au, bu));
                }
                out
            }),
        }
    }

    /// A degenerate sampler yielding a fixed non-residue, to falsify the
    /// all-squares verdict.
    pub fn constant_nonresidue() -> DivisorDatum {
        DivisorDatum {
            label: "constant non-residue".into(),
            va: 0,
            vb: 1,
            sampler: Box::new(|ctx| {
                // find a non-square unit when one exists (odd q)
                let mut nr = FFElement::one(ctx);
                for i in 1..ctx.order() {
                    let c = FFElement::from_index(ctx, i);
                    if !c.is_square() {
                        nr = c;
                        break;
                    }
                }
                vec![(nr, FFElement::one(ctx)); 4]
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::FieldCtx;
    use crate::ratpoly::q_int;
    use crate::surface::tests_support::ex57;

    fn q2() -> LocalField {
        LocalField::qp(2)
    }

    pub(crate) fn ex57_symbol() -> SymbolPair {
        // A = ((z^3 + w^2 x + xyz)/x^3, -z/x)
        SymbolPair::new(
            HomogeneousPoly::from_int_terms(&[(1, [0, 0, 3, 0]), (1, [1, 0, 0, 2]), (1, [1, 1, 1, 0])])
                .unwrap(),
            HomogeneousPoly::from_int_terms(&[(1, [3, 0, 0, 0])]).unwrap(),
            HomogeneousPoly::from_int_terms(&[(-1, [0, 0, 1, 0])]).unwrap(),
            HomogeneousPoly::from_int_terms(&[(1, [1, 0, 0, 0])]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn degree_mismatch_rejected() {
        let x = HomogeneousPoly::from_int_terms(&[(1, [1, 0, 0, 0])]).unwrap();
        let x2 = HomogeneousPoly::from_int_terms(&[(1, [2, 0, 0, 0])]).unwrap();
        assert!(matches!(
            SymbolPair::new(x.clone(), x2, x.clone(), x.clone()),
            Err(BrauerError::DegreeMismatch)
        ));
    }

    #[test]
    fn evaluation_at_exact_point() {
        // the exact point (1:0:1:0) on the Ex 5.7 surface: f = 1, g = -1,
        // and (1,-1) = 0
        let f = ex57();
        let ctx = FieldCtx::new(2, 1, None).unwrap();
        let seed = crate::surface::ProjPointFq {
            coords: [
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
            ],
        };
        let pt = hensel_lift(&f, &seed, 1, &[], q2(), 12).unwrap();
        let v = evaluate_symbol_at(&ex57_symbol(), &pt).unwrap();
        assert_eq!(v, SymbolValue::Zero);
    }

    #[test]
    fn trivial_symbol_evaluates_zero() {
        // f_num = f_den makes the first slot 1
        let f = ex57();
        let ctx = FieldCtx::new(2, 1, None).unwrap();
        let seed = crate::surface::ProjPointFq {
            coords: [
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
            ],
        };
        let pt = hensel_lift(&f, &seed, 1, &[], q2(), 12).unwrap();
        let x3 = HomogeneousPoly::from_int_terms(&[(1, [3, 0, 0, 0])]).unwrap();
        let sym = SymbolPair::new(
            x3.clone(),
            x3,
            HomogeneousPoly::from_int_terms(&[(-1, [0, 0, 1, 0])]).unwrap(),
            HomogeneousPoly::from_int_terms(&[(1, [1, 0, 0, 0])]).unwrap(),
        )
        .unwrap();
        assert_eq!(evaluate_symbol_at(&sym, &pt).unwrap(), SymbolValue::Zero);
    }

    #[test]
    fn projective_rescaling_invariance() {
        let f = ex57();
        let ctx = FieldCtx::new(2, 1, None).unwrap();
        let seed = crate::surface::ProjPointFq {
            coords: [
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
            ],
        };
        let pt = hensel_lift(&f, &seed, 1, &[], q2(), 12).unwrap();
        let sym = ex57_symbol();
        let base = evaluate_symbol_at(&sym, &pt).unwrap();
        for s in [3i64, 5, -7] {
            let mut scaled = pt.clone();
            let sc = crate::padic::PadicValue::from_rational(q2(), q_int(s));
            for c in scaled.coords.iter_mut() {
                *c = c.mul(&sc).unwrap();
            }
            assert_eq!(evaluate_symbol_at(&sym, &scaled).unwrap(), base);
        }
    }

    #[test]
    fn square_twist_invariance() {
        // multiplying g by the square of a function nonvanishing at P leaves
        // the value unchanged
        let f = ex57();
        let ctx = FieldCtx::new(2, 1, None).unwrap();
        let seed = crate::surface::ProjPointFq {
            coords: [
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
            ],
        };
        let pt = hensel_lift(&f, &seed, 1, &[], q2(), 12).unwrap();
        let sym = ex57_symbol();
        let base = evaluate_symbol_at(&sym, &pt).unwrap();
        // twist: g -> g * ((x+z)/x)^2
        let twisted = SymbolPair::new(
            sym.f_num.clone(),
            sym.f_den.clone(),
            HomogeneousPoly::new(
                sym.g_num
                    .poly()
                    .mul(&crate::ratpoly::RatPoly::from_terms([
                        (q_int(1), [2, 0, 0, 0]),
                        (q_int(2), [1, 0, 1, 0]),
                        (q_int(1), [0, 0, 2, 0]),
                    ])),
            )
            .unwrap(),
            HomogeneousPoly::new(
                sym.g_den
                    .poly()
                    .mul(&crate::ratpoly::RatPoly::term(q_int(1), [2, 0, 0, 0])),
            )
            .unwrap(),
        )
        .unwrap();
        assert_eq!(evaluate_symbol_at(&twisted, &pt).unwrap(), base);
    }

    #[test]
    fn tame_residue_formula_cases() {
        let mk = |va, vb| DivisorDatum {
            label: "t".into(),
            va,
            vb,
            sampler: Box::new(|_| vec![]),
        };
        let r = tame_residue(&mk(0, 0));
        assert_eq!((r.sign_exponent, r.a_exponent, r.b_exponent), (0, 0, 0));
        let r = tame_residue(&mk(1, 1));
        assert_eq!((r.sign_exponent, r.a_exponent, r.b_exponent), (1, 1, -1));
        let r = tame_residue(&mk(0, -1));
        assert_eq!((r.sign_exponent, r.a_exponent, r.b_exponent), (0, -1, 0));
        // (va,vb)=(1,1): residue class of -a/b
        let ctx = FieldCtx::new(5, 1, None).unwrap();
        let a = FFElement::from_int(&ctx, 3);
        let b = FFElement::from_int(&ctx, 2);
        let v = tame_residue_value(&mk(1, 1), &a, &b).unwrap();
        let expect = a.mul(&b.inv().unwrap()).neg();
        assert_eq!(v, expect);
    }

    #[test]
    fn probe_detects_squares_and_nonsquares() {
        // D2 of the family: residue values are squares on the nose
        let d2 = family_divisors::d2(1);
        let fields = vec![
            FieldCtx::new(3, 1, None).unwrap(),
            FieldCtx::new(5, 1, None).unwrap(),
            FieldCtx::new(3, 2, None).unwrap(),
        ];
        let reports = residue_probe(&d2, &fields).unwrap();
        for r in &reports {
            assert!(r.all_squares, "q={}", r.field_order);
        }
        // constant non-residue fails over odd fields
        let bad = family_divisors::constant_nonresidue();
        let reports = residue_probe(&bad, &fields[..1]).unwrap();
        assert!(!reports[0].all_squares);
    }
}
