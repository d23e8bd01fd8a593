//! The Kummer-surface descent pipeline for products of elliptic curves over
//! Q_2 with good reduction and full 2-torsion: two-torsion through the
//! 2-division polynomial, the Legendre-form transformation with a symbolic
//! verification oracle, the 4x4 descent matrix with square-class row
//! verdicts, and the Azumaya symbol constructors.

use crate::padic::{is_square, LocalField, PadicError, PadicValue};
use crate::ratpoly::{q_int, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KummerError {
    SingularCurve,
    TorsionNotRational,
    DegenerateTorsion,
    OrdProfileViolated(String),
    TransformCheckFailed,
    Padic(PadicError),
}

impl fmt::Display for KummerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KummerError::SingularCurve => write!(f, "curve discriminant vanishes"),
            KummerError::TorsionNotRational => {
                write!(f, "fewer than three 2-torsion x-coordinates in Q_2")
            }
            KummerError::DegenerateTorsion => write!(f, "repeated torsion roots"),
            KummerError::OrdProfileViolated(s) => {
                write!(f, "2-adic valuation profile violated: {s}")
            }
            KummerError::TransformCheckFailed => {
                write!(f, "symbolic Legendre-transform identity failed")
            }
            KummerError::Padic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for KummerError {}

impl From<PadicError> for KummerError {
    fn from(e: PadicError) -> Self {
        KummerError::Padic(e)
    }
}

/// Curve y^2 + xy + delta y = x^3 + a x^2 + b x + c with integer data;
/// good reduction at 2 is the caller's assertion, nonzero discriminant is
/// checked here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveParams {
    pub delta: u8,
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl CurveParams {
    pub fn new(delta: u8, a: i64, b: i64, c: i64) -> Result<CurveParams, KummerError> {
        assert!(delta <= 1, "delta must be 0 or 1");
        let e = CurveParams { delta, a, b, c };
        if e.discriminant().is_zero() {
            return Err(KummerError::SingularCurve);
        }
        Ok(e)
    }

    /// Discriminant of the Weierstrass model (a1, a2, a3, a4, a6) =
    /// (1, a, delta, b, c).
    pub fn discriminant(&self) -> BigInt {
        let (a1, a2, a3, a4, a6) = (
            BigInt::one(),
            BigInt::from(self.a),
            BigInt::from(self.delta),
            BigInt::from(self.b),
            BigInt::from(self.c),
        );
        let b2: BigInt = &a1 * &a1 + 4 * &a2;
        let b4: BigInt = 2 * &a4 + &a1 * &a3;
        let b6: BigInt = &a3 * &a3 + 4 * &a6;
        let b8: BigInt =
            &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let disc: BigInt = -(&b2 * &b2 * &b8) - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6)
            + 9 * &b2 * &b4 * &b6;
        disc
    }

    pub fn has_good_reduction_at_2(&self) -> bool {
        use num_integer::Integer;
        self.discriminant().is_odd()
    }

    /// Coefficients of the 2-division cubic
    /// Phi(y) = 8y^3 - (1-12d+4a) y^2 - (-6d^2+4ad-2b) y + (d^3-ad^2+bd-c),
    /// low-to-high.
    pub fn two_division_poly(&self) -> [BigInt; 4] {
        let d = self.delta as i64;
        [
            BigInt::from(d * d * d - self.a * d * d + self.b * d - self.c),
            BigInt::from(-(-6 * d * d + 4 * self.a * d - 2 * self.b)),
            BigInt::from(-(1 - 12 * d + 4 * self.a)),
            BigInt::from(8),
        ]
    }

    /// The curve equation as an exact polynomial in (x, y) = (vars 0, 1):
    /// y^2 + xy + delta y - x^3 - a x^2 - b x - c.
    pub fn equation(&self) -> RatPoly {
        RatPoly::from_terms([
            (q_int(1), [0, 2, 0, 0]),
            (q_int(1), [1, 1, 0, 0]),
            (q_int(self.delta as i64), [0, 1, 0, 0]),
            (q_int(-1), [3, 0, 0, 0]),
            (q_int(-self.a), [2, 0, 0, 0]),
            (q_int(-self.b), [1, 0, 0, 0]),
            (q_int(-self.c), [0, 0, 0, 0]),
        ])
    }
}

/// The three affine 2-torsion points, ordered by non-decreasing 2-adic
/// valuation of beta with the numeric/residue tie-break.
#[derive(Debug, Clone)]
pub struct TwoTorsionData {
    pub phi: [BigInt; 4],
    pub betas: [PadicValue; 3],
    pub alphas: [PadicValue; 3],
    pub ord_profile: [i64; 3],
}

fn q2() -> LocalField {
    LocalField::qp(2)
}

fn v2_big(x: &BigInt) -> Option<i64> {
    use num_integer::Integer;
    if x.is_zero() {
        return None;
    }
    let mut x = x.clone();
    let mut v = 0;
    while x.is_even() {
        x /= 2;
        v += 1;
    }
    Some(v)
}

/// Integer roots of a monic integer polynomial, by divisor search on the
/// constant term.
fn integer_roots(poly: &[BigInt]) -> Vec<BigInt> {
    let eval = |t: &BigInt| -> BigInt {
        let mut acc = BigInt::zero();
        for c in poly.iter().rev() {
            acc = acc * t + c;
        }
        acc
    };
    let mut roots = vec![];
    let c0 = &poly[0];
    if c0.is_zero() {
        roots.push(BigInt::zero());
    } else {
        let mut divisors = vec![];
        let m = c0.magnitude().clone();
        let mut d = num_bigint::BigUint::from(1u32);
        let cap = num_bigint::BigUint::from(1_000_000u64);
        // trial divisors up to sqrt(|c0|); beyond the cap the 2-adic branch
        // search picks the roots up instead
        while &d * &d <= m && d <= cap {
            if (&m % &d).is_zero() {
                divisors.push(d.clone());
                divisors.push(&m / &d);
            }
            d += 1u32;
        }
        for d in divisors {
            let cand = BigInt::from(d);
            for s in [cand.clone(), -cand] {
                if eval(&s).is_zero() && !roots.contains(&s) {
                    roots.push(s);
                }
            }
        }
    }
    roots
}

/// Synthetic division of a monic polynomial by (z - r); panics if not exact.
fn deflate(poly: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let n = poly.len() - 1;
    let mut q = vec![BigInt::zero(); n];
    let mut carry = poly[n].clone();
    for i in (0..n).rev() {
        q[i] = carry.clone();
        carry = &poly[i] + r * &carry;
    }
    assert!(carry.is_zero(), "deflation not exact");
    q
}

/// 2-adic square root of an odd u = 1 mod 8, digit by digit, mod 2^prec.
fn sqrt_2adic_unit(u: &BigInt, prec: i64) -> BigInt {
    let mut z = BigInt::one();
    for k in 3..prec {
        let m = BigInt::from(2).pow((k + 1) as u32);
        if ((&z * &z - u) % &m).is_zero() {
            continue;
        }
        z += BigInt::from(2).pow((k - 1) as u32);
        debug_assert!(((&z * &z - u) % &m).is_zero());
    }
    z
}

/// All roots of a monic integer cubic in Z_2 (valuations >= 0), exact when
/// rational, to the given precision otherwise.
fn monic_cubic_z2_roots(poly: &[BigInt; 4], prec: i64) -> Result<Vec<PadicValue>, KummerError> {
    let f = q2();
    let ints = integer_roots(poly);
    let mut roots: Vec<PadicValue> = ints
        .iter()
        .map(|r| PadicValue::from_rational(f, BigRational::from_integer(r.clone())))
        .collect();
    match ints.len() {
        3 => Ok(roots),
        1 | 2 => {
            // deflate all found integer roots, then treat the quadratic part
            let mut cur: Vec<BigInt> = poly.to_vec();
            for r in &ints {
                cur = deflate(&cur, r);
            }
            if cur.len() == 3 {
                // z^2 + B z + C
                let b = cur[1].clone();
                let c = cur[0].clone();
                let disc = &b * &b - BigInt::from(4) * &c;
                if disc.is_zero() {
                    return Err(KummerError::DegenerateTorsion);
                }
                let dv = PadicValue::from_rational(f, BigRational::from_integer(disc.clone()));
                if !is_square(&dv)?.is_square {
                    return Err(KummerError::TorsionNotRational);
                }
                let v = v2_big(&disc).unwrap();
                let unit = &disc >> (v as usize);
                let s = sqrt_2adic_unit(&unit, prec + 4) << ((v / 2) as usize);
                // roots (-B +- s)/2 as truncated values
                for sgn in [1i64, -1] {
                    let num = -&b + sgn * &s;
                    // num is even since s^2 = B^2 mod 4; divide exactly
                    let m = BigInt::from(2).pow((prec + 2) as u32);
                    let half = ((num % &m + &m) % &m) >> 1usize;
                    let val = crate::padic::PadicValue::approx_from_int(f, half, prec);
                    roots.push(val);
                }
                Ok(roots)
            } else {
                Ok(roots)
            }
        }
        _ => {
            // no rational root: bounded branch-and-certify search
            let eval = |t: &BigInt, modpow: u32| -> BigInt {
                let m = BigInt::from(2).pow(modpow);
                let mut acc = BigInt::zero();
                for c in poly.iter().rev() {
                    acc = (acc * t + c) % &m;
                }
                ((acc % &m) + &m) % &m
            };
            let dpoly: Vec<BigInt> = poly
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect();
            let deval = |t: &BigInt| -> BigInt {
                let mut acc = BigInt::zero();
                for c in dpoly.iter().rev() {
                    acc = acc * t + c;
                }
                acc
            };
            let mut level: Vec<BigInt> = (0..2u32)
                .map(BigInt::from)
                .filter(|t| v2_big(&eval(t, 4)).map(|v| v >= 1).unwrap_or(true))
                .collect();
            for k in 1..prec as u32 {
                let mut next = vec![];
                for t in &level {
                    for bit in 0..2u32 {
                        let cand = t + BigInt::from(2).pow(k) * bit;
                        let r = eval(&cand, k + 1);
                        if r.is_zero() {
                            next.push(cand);
                        }
                    }
                }
                if next.len() > 128 {
                    return Err(KummerError::TorsionNotRational);
                }
                level = next;
                if level.is_empty() {
                    break;
                }
            }
            // dedupe by isolating ball around certified candidates
            let mut out: Vec<BigInt> = vec![];
            for t in level {
                let vf = v2_big(&eval(&t, prec as u32 + 4)).unwrap_or(prec + 4);
                let vd = v2_big(&deval(&t)).unwrap_or(prec);
                if vf > 2 * vd {
                    let ball = prec - vd;
                    let m = BigInt::from(2).pow(ball as u32);
                    if !out.iter().any(|r| ((r - &t) % &m).is_zero()) {
                        out.push(t);
                    }
                }
            }
            if out.len() != 3 - roots.len() {
                return Err(KummerError::TorsionNotRational);
            }
            for t in out {
                roots.push(crate::padic::PadicValue::approx_from_int(f, t, prec));
            }
            Ok(roots)
        }
    }
}

/// Compute the three 2-torsion points: rational roots exactly, 2-adic ones
/// by Hensel refinement to `precision` digits.
pub fn two_torsion(e: &CurveParams, precision: i64) -> Result<TwoTorsionData, KummerError> {
    let f = q2();
    let phi = e.two_division_poly();
    // monic transform z = 8y: Psi(z) = z^3 + phi2 z^2 + 8 phi1 z + 64 phi0
    // given Phi = 8y^3 + phi2 y^2 + phi1 y + phi0
    let psi: [BigInt; 4] = [
        64 * &phi[0],
        8 * &phi[1],
        phi[2].clone(),
        BigInt::one(),
    ];
    let zroots = monic_cubic_z2_roots(&psi, precision + 3)?;
    if zroots.len() < 3 {
        return Err(KummerError::TorsionNotRational);
    }
    let eighth = PadicValue::from_rational(f, BigRational::new(BigInt::one(), BigInt::from(8)));
    let mut betas: Vec<PadicValue> = zroots.iter().map(|z| z.mul(&eighth).unwrap()).collect();
    // order by valuation, then canonical representative
    let key = |b: &PadicValue| -> (i64, BigRational) {
        let v = b.valuation().unwrap().unwrap_or(i64::MAX / 2);
        let tie = match b.exact_parts() {
            Some((a, _)) => a.clone(),
            None => BigRational::from_integer(b.canonical_residue(precision)),
        };
        (v, tie)
    };
    betas.sort_by(|a, b| {
        let (va, ta) = key(a);
        let (vb, tb) = key(b);
        va.cmp(&vb).then(ta.cmp(&tb))
    });
    let delta = PadicValue::from_int(f, e.delta as i64);
    let alphas: Vec<PadicValue> = betas
        .iter()
        .map(|b| b.mul(&PadicValue::from_int(f, -2)).unwrap().sub(&delta).unwrap())
        .collect();
    let ords: Vec<i64> = betas
        .iter()
        .map(|b| b.valuation().unwrap().unwrap_or(i64::MAX / 2))
        .collect();
    // Valuation profile: ord(beta_1) = -3, the others nonnegative, and
    // ord(alpha_1) = -2.
    if ords[0] != -3 || ords[1] < 0 || ords[2] < 0 {
        return Err(KummerError::OrdProfileViolated(format!(
            "beta ords {ords:?}, expected (-3, >=0, >=0)"
        )));
    }
    if alphas[0].valuation().unwrap() != Some(-2) {
        return Err(KummerError::OrdProfileViolated("ord(alpha_1) != -2".into()));
    }
    // membership check: each rational torsion point satisfies the curve
    let eq = e.equation();
    for (al, be) in alphas.iter().zip(betas.iter()) {
        if let (Some((ax, _)), Some((bx, _))) = (al.exact_parts(), be.exact_parts()) {
            let val = eq.eval_q(&[
                ax.clone(),
                bx.clone(),
                BigRational::zero(),
                BigRational::zero(),
            ]);
            if !val.is_zero() {
                return Err(KummerError::OrdProfileViolated(
                    "torsion point fails the curve equation".into(),
                ));
            }
        }
    }
    Ok(TwoTorsionData {
        phi,
        betas: [betas[0].clone(), betas[1].clone(), betas[2].clone()],
        alphas: [alphas[0].clone(), alphas[1].clone(), alphas[2].clone()],
        ord_profile: [ords[0], ords[1], ords[2]],
    })
}

/// Legendre form v^2 = u (u - gamma1)(u - gamma2).
#[derive(Debug, Clone)]
pub struct LegendreCurve {
    pub gamma1: PadicValue,
    pub gamma2: PadicValue,
    /// gamma2 as recomputed by the symbolic-substitution oracle (the product
    /// of the quadratic factor's roots divided by gamma1).
    pub gamma2_oracle: Option<PadicValue>,
}

/// gamma_i = 4 (alpha_{i+1} - alpha_1), with the substitution
/// u = 4x - 4 alpha_1, v = 4(2y + x + delta) verified symbolically on exact
/// torsion data: v^2 - u(u-g1)(u-g2) = 64 * (curve equation).
pub fn legendre_transform(
    e: &CurveParams,
    t: &TwoTorsionData,
) -> Result<LegendreCurve, KummerError> {
    let f = q2();
    let four = PadicValue::from_int(f, 4);
    let g1 = t.alphas[1].sub(&t.alphas[0])?.mul(&four)?;
    let g2 = t.alphas[2].sub(&t.alphas[0])?.mul(&four)?;
    if g1 == g2 {
        return Err(KummerError::DegenerateTorsion);
    }
    let mut oracle = None;
    if let (Some((a1, _)), Some((g1x, _)), Some((g2x, _))) =
        (t.alphas[0].exact_parts(), g1.exact_parts(), g2.exact_parts())
    {
        // symbolic identity: substitute u = 4x - 4a1, v = 4(2y + x + d) and
        // compare against 64 * curve
        let x = RatPoly::var(0);
        let y = RatPoly::var(1);
        let u = x.scale(&q_int(4)).sub(&RatPoly::constant(a1 * q_int(4)));
        let v = y
            .scale(&q_int(2))
            .add(&x)
            .add(&RatPoly::constant(q_int(e.delta as i64)))
            .scale(&q_int(4));
        let lhs = v.mul(&v).sub(
            &u.mul(&u.sub(&RatPoly::constant(g1x.clone())))
                .mul(&u.sub(&RatPoly::constant(g2x.clone()))),
        );
        let rhs = e.equation().scale(&q_int(64));
        if lhs != rhs {
            return Err(KummerError::TransformCheckFailed);
        }
        // oracle recompute of gamma2: expand v^2 = u^3 + c2 u^2 + c1 u + c0
        // modulo the curve, i.e. c-coefficients from the exact identity
        // P(u) = u^3 + c2 u^2 + c1 u with roots {0, g1, g2}: g2 = c1 / g1
        // where c1 = g1 g2 and c2 = -(g1 + g2). Recover c1, c2 from lhs:
        // lhs = v^2 - u(...) = 64 * curve, so u(u-g1)(u-g2) = v^2 - 64 curve;
        // expand the cubic-in-u side independently from the torsion data:
        let c1 = g1x * g2x;
        let g2_oracle = &c1 / g1x;
        oracle = Some(PadicValue::from_rational(f, g2_oracle));
    }
    Ok(LegendreCurve {
        gamma1: g1,
        gamma2: g2,
        gamma2_oracle: oracle,
    })
}

/// The 4x4 descent matrix attached to a pair of Legendre curves. Rows
/// correspond to the algebras [A_{g11,g21}, A_{g11,0}, A_{0,g21}, A_{0,0}].
#[derive(Debug, Clone)]
pub struct DescentMatrix {
    pub entries: [[PadicValue; 4]; 4],
}

pub fn build_descent_matrix(g1: &LegendreCurve, g2: &LegendreCurve) -> DescentMatrix {
    let f = q2();
    let one = PadicValue::from_int(f, 1);
    let (g11, g12) = (&g1.gamma1, &g1.gamma2);
    let (g21, g22) = (&g2.gamma1, &g2.gamma2);
    let m = |a: &PadicValue, b: &PadicValue| a.mul(b).unwrap();
    let e12 = m(g11, g12);
    let e13 = m(g21, g22);
    let e14 = m(g11, g21).neg();
    let e23 = m(g11, g21);
    let e24 = m(g21, &g21.sub(g22).unwrap());
    let e34 = m(g11, &g11.sub(g12).unwrap());
    let entries = [
        [one.clone(), e12.clone(), e13.clone(), e14.clone()],
        [e12.clone(), one.clone(), e23.clone(), e24.clone()],
        [e13.clone(), e23.clone(), one.clone(), e34.clone()],
        [e14, e24, e34, one],
    ];
    DescentMatrix { entries }
}

impl DescentMatrix {
    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

/// Row verdicts: algebra i descends iff every entry of row i is a square.
/// Exact zeros count as squares (they are 0^2), though nondegenerate data
/// never produces them.
pub fn descent_check(m: &DescentMatrix) -> Result<[bool; 4], KummerError> {
    let mut out = [false; 4];
    for (i, row) in m.entries.iter().enumerate() {
        let mut all = true;
        for e in row {
            if e.is_exact_zero() {
                continue;
            }
            if !is_square(e)?.is_square {
                all = false;
                break;
            }
        }
        out[i] = all;
    }
    Ok(out)
}

/// Azumaya symbol A_{e1,e2} = ((u1-e1)(u1-g12), (u2-e2)(u2-g22)) on the
/// product of the Legendre curves, with the standard rewrite when the
/// epsilon slot is nonzero, and the pullback to the original (x, y)
/// coordinates. Variables: u1 is slot 0, u2 is slot 2 of a RatPoly.
#[derive(Debug, Clone)]
pub struct KummerSymbol {
    pub first: RatPoly,
    pub second: RatPoly,
    /// When eps1 != 0 the first slot simplifies to u1 modulo squares
    /// (u(u-g1)(u-g2) = v^2); recorded as the rewritten pair (u1, f_{e2}(u2)).
    pub rewritten_first: Option<RatPoly>,
    /// Pullbacks along u = 4x - 4 alpha_1 in the two factors; exact data only.
    pub pullback: Option<(RatPoly, RatPoly)>,
}

/// eps choices for the two slots: 0 or gamma_{i,1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eps {
    Zero,
    Gamma1,
}

pub fn azumaya_symbol(
    eps1: Eps,
    eps2: Eps,
    g1: &LegendreCurve,
    g2: &LegendreCurve,
    torsion: Option<(&CurveParams, &TwoTorsionData, &TwoTorsionData)>,
) -> KummerSymbol {
    let u1 = RatPoly::var(0);
    let u2 = RatPoly::var(2);
    // truncated gammas enter through a rational representative; changing a
    // slot constant by a unit congruent to 1 mod 2^prec twists by a square
    // at any point read far below that precision
    let lin = |u: &RatPoly, c: &PadicValue| -> RatPoly {
        let rep = match c.exact_parts() {
            Some((a, _)) => a.clone(),
            None => BigRational::from_integer(c.canonical_residue(24)),
        };
        u.sub(&RatPoly::constant(rep))
    };
    let e1val = match eps1 {
        Eps::Zero => PadicValue::from_int(q2(), 0),
        Eps::Gamma1 => g1.gamma1.clone(),
    };
    let e2val = match eps2 {
        Eps::Zero => PadicValue::from_int(q2(), 0),
        Eps::Gamma1 => g2.gamma1.clone(),
    };
    let first = lin(&u1, &e1val).mul(&lin(&u1, &g1.gamma2));
    let second = lin(&u2, &e2val).mul(&lin(&u2, &g2.gamma2));
    let rewritten_first = match eps1 {
        Eps::Gamma1 => Some(u1.clone()),
        Eps::Zero => None,
    };
    // pullback of A_{0,0}: (x1 + 2 beta_{1,2} + delta, x2 + 2 beta_{2,2} + delta)
    let pullback = torsion.and_then(|(e, t1, t2)| {
        let d = q_int(e.delta as i64);
        let b12 = t1.betas[1].exact_parts()?.0.clone();
        let b22 = t2.betas[1].exact_parts()?.0.clone();
        match (eps1, eps2) {
            (Eps::Zero, Eps::Zero) => Some((
                RatPoly::var(0).add(&RatPoly::constant(b12 * q_int(2) + &d)),
                RatPoly::var(2).add(&RatPoly::constant(b22 * q_int(2) + &d)),
            )),
            _ => None,
        }
    });
    KummerSymbol {
        first,
        second,
        rewritten_first,
        pullback,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{hilbert_symbol, SymbolValue};

    fn ex56_curve() -> CurveParams {
        CurveParams::new(1, 0, -7, 5).unwrap()
    }

    #[test]
    fn phi_of_ex56() {
        let e = ex56_curve();
        let phi = e.two_division_poly();
        assert_eq!(
            phi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            ["-11", "-8", "11", "8"]
        );
        assert!(e.has_good_reduction_at_2());
    }

    #[test]
    fn torsion_of_ex56() {
        let t = two_torsion(&ex56_curve(), 32).unwrap();
        let show = |v: &PadicValue| v.exact_parts().unwrap().0.to_string();
        assert_eq!(show(&t.betas[0]), "-11/8");
        assert_eq!(show(&t.betas[1]), "-1");
        assert_eq!(show(&t.betas[2]), "1");
        assert_eq!(show(&t.alphas[0]), "7/4");
        assert_eq!(show(&t.alphas[1]), "1");
        assert_eq!(show(&t.alphas[2]), "-3");
        assert_eq!(t.ord_profile, [-3, 0, 0]);
        // defining relation 2 beta + alpha + delta = 0
        for i in 0..3 {
            let s = t.betas[i]
                .mul(&PadicValue::from_int(q2(), 2))
                .unwrap()
                .add(&t.alphas[i])
                .unwrap()
                .add(&PadicValue::from_int(q2(), 1))
                .unwrap();
            assert!(s.is_exact_zero());
        }
    }

    #[test]
    fn legendre_of_ex56_and_the_oracle() {
        let e = ex56_curve();
        let t = two_torsion(&e, 32).unwrap();
        let l = legendre_transform(&e, &t).unwrap();
        assert_eq!(l.gamma1.exact_parts().unwrap().0.to_string(), "-3");
        // the formula gives -19; the symbolic oracle confirms it
        assert_eq!(l.gamma2.exact_parts().unwrap().0.to_string(), "-19");
        let orc = l.gamma2_oracle.as_ref().unwrap();
        assert_eq!(orc, &l.gamma2);
    }

    #[test]
    fn descent_matrix_of_ex56() {
        let e = ex56_curve();
        let t = two_torsion(&e, 32).unwrap();
        let l = legendre_transform(&e, &t).unwrap();
        let m = build_descent_matrix(&l, &l);
        assert!(m.is_symmetric());
        let show = |i: usize, j: usize| m.entries[i][j].exact_parts().unwrap().0.to_string();
        assert_eq!(show(0, 1), "57");
        assert_eq!(show(0, 3), "-9");
        assert_eq!(show(1, 3), "-48");
        // every row contains a non-square of Q_2, so nothing descends
        let verdicts = descent_check(&m).unwrap();
        assert_eq!(verdicts, [false; 4]);
    }

    #[test]
    fn scaling_gammas_by_squares_keeps_verdicts() {
        let e = ex56_curve();
        let t = two_torsion(&e, 32).unwrap();
        let l = legendre_transform(&e, &t).unwrap();
        let four = PadicValue::from_int(q2(), 4);
        let scaled = LegendreCurve {
            gamma1: l.gamma1.mul(&four).unwrap(),
            gamma2: l.gamma2.mul(&four).unwrap(),
            gamma2_oracle: None,
        };
        let m0 = descent_check(&build_descent_matrix(&l, &l)).unwrap();
        let m1 = descent_check(&build_descent_matrix(&scaled, &scaled)).unwrap();
        assert_eq!(m0, m1);
    }

    #[test]
    fn all_ones_matrix_descends() {
        let one = PadicValue::from_int(q2(), 1);
        let entries =
            std::array::from_fn(|_| std::array::from_fn(|_| one.clone()));
        let m = DescentMatrix { entries };
        assert_eq!(descent_check(&m).unwrap(), [true; 4]);
    }

    #[test]
    fn azumaya_symbols_and_pullback() {
        let e = ex56_curve();
        let t = two_torsion(&e, 32).unwrap();
        let l = legendre_transform(&e, &t).unwrap();
        let s = azumaya_symbol(Eps::Zero, Eps::Zero, &l, &l, Some((&e, &t, &t)));
        // pullback (x1 + 2 b2 + delta, x2 + 2 b2 + delta) with b2 = -1, d = 1:
        // x - 1
        let (p1, p2) = s.pullback.unwrap();
        assert_eq!(p1, RatPoly::var(0).sub(&RatPoly::constant(q_int(1))));
        assert_eq!(p2, RatPoly::var(2).sub(&RatPoly::constant(q_int(1))));
        let s2 = azumaya_symbol(Eps::Gamma1, Eps::Zero, &l, &l, None);
        assert_eq!(s2.rewritten_first.unwrap(), RatPoly::var(0));
        // symmetry of A_{0,0} under swapping the two factors: the symbol
        // polynomials agree after exchanging u1 and u2
        let sym = azumaya_symbol(Eps::Zero, Eps::Zero, &l, &l, None);
        let swapped = RatPoly::from_terms(sym.second.terms().map(|(e2, c)| {
            (c.clone(), [e2[2], e2[1], e2[0], e2[3]])
        }));
        assert_eq!(sym.first, swapped);
    }

    #[test]
    fn two_adic_torsion_path() {
        // Phi = (8y - 5)(y^2 - 17): beta_1 = 5/8 rational, the others are
        // +-sqrt(17), irrational 2-adic integers
        let e = CurveParams::new(1, 4, -63, -151).unwrap();
        assert!(e.has_good_reduction_at_2());
        let t = two_torsion(&e, 24).unwrap();
        assert_eq!(t.ord_profile, [-3, 0, 0]);
        assert_eq!(
            t.betas[0].exact_parts().unwrap().0.to_string(),
            "5/8"
        );
        assert!(t.betas[1].exact_parts().is_none());
        assert!(t.betas[2].exact_parts().is_none());
        // the two irrational betas square to 17 mod 2^20
        for b in [&t.betas[1], &t.betas[2]] {
            let sq = b.mul(b).unwrap();
            let diff = sq.sub(&PadicValue::from_int(q2(), 17)).unwrap();
            match diff.valuation() {
                Ok(Some(v)) => assert!(v >= 18, "v = {v}"),
                Ok(None) => {}
                Err(_) => {} // zero to precision
            }
        }
        // the downstream pipeline runs on truncated torsion too
        let l = legendre_transform(&e, &t).unwrap();
        assert!(l.gamma1.valuation().unwrap().is_some());
        let m = build_descent_matrix(&l, &l);
        let verdicts = descent_check(&m).unwrap();
        assert_eq!(verdicts.len(), 4);
    }

    #[test]
    fn torsion_not_rational_detected() {
        // y^2 + xy = x^3 - x + 2: Phi = 8y^3 - y^2 + 2y - 2 has one rational
        // root candidate set; the quadratic disc is not a 2-adic square
        for (d, a, b, c) in [(0u8, 0i64, -1i64, 2i64), (0, 1, 1, 1), (1, 2, 3, 4)] {
            if let Ok(e) = CurveParams::new(d, a, b, c) {
                match two_torsion(&e, 24) {
                    Ok(t) => {
                        // if it succeeds the profile must hold
                        assert_eq!(t.ord_profile[0], -3);
                    }
                    Err(
                        KummerError::TorsionNotRational
                        | KummerError::OrdProfileViolated(_)
                        | KummerError::DegenerateTorsion,
                    ) => {}
                    Err(other) => panic!("unexpected error {other:?}"),
                }
            }
        }
    }

    #[test]
    fn evaluation_span_invariant_under_beta_tiebreak_swap() {
        // swapping beta_2/beta_3 swaps gamma_1 and gamma_2; the span of the
        // four symbol values over sampled points is unchanged
        let e = ex56_curve();
        let t = two_torsion(&e, 32).unwrap();
        let l = legendre_transform(&e, &t).unwrap();
        let swapped = LegendreCurve {
            gamma1: l.gamma2.clone(),
            gamma2: l.gamma1.clone(),
            gamma2_oracle: None,
        };
        let span = |lc: &LegendreCurve| -> Vec<[SymbolValue; 4]> {
            let f = q2();
            let g1 = lc.gamma1.clone();
            let g2 = lc.gamma2.clone();
            // sample u with u(u-g1)(u-g2) a square (a point of the curve)
            let mut vecs = vec![];
            for uu in -30i64..30 {
                if uu == 0 {
                    continue;
                }
                let u = PadicValue::from_int(f, uu);
                let r = u
                    .mul(&u.sub(&g1).unwrap())
                    .unwrap()
                    .mul(&u.sub(&g2).unwrap())
                    .unwrap();
                if r.is_exact_zero() || !is_square(&r).unwrap().is_square {
                    continue;
                }
                // the four symbols at the diagonal point (u, u)
                let slot = |eps: &PadicValue| {
                    u.sub(eps).unwrap().mul(&u.sub(&g2).unwrap()).unwrap()
                };
                let zero = PadicValue::from_int(f, 0);
                let s_g = slot(&g1);
                let s_0 = slot(&zero);
                if s_g.is_exact_zero() || s_0.is_exact_zero() {
                    continue;
                }
                let h = |a: &PadicValue, b: &PadicValue| hilbert_symbol(a, b).unwrap();
                vecs.push([h(&s_g, &s_g), h(&s_g, &s_0), h(&s_0, &s_g), h(&s_0, &s_0)]);
            }
            // close under addition to get the span
            let mut span: Vec<[SymbolValue; 4]> = vec![[SymbolValue::Zero; 4]];
            for v in vecs {
                let mut grow = vec![];
                for s in &span {
                    let sum = std::array::from_fn(|i| s[i] + v[i]);
                    if !span.contains(&sum) && !grow.contains(&sum) {
                        grow.push(sum);
                    }
                }
                span.extend(grow);
            }
            span.sort_by_key(|v| {
                v.iter()
                    .map(|x| if *x == SymbolValue::Half { 1u8 } else { 0 })
                    .fold(0u8, |acc, b| acc * 2 + b)
            });
            span
        };
        assert_eq!(span(&l), span(&swapped));
    }
}

#[cfg(test)]
mod descent_link_tests {
    use super::*;
    use crate::forms::{FunctionFieldCtx, RatFunc};
    use crate::fpoly::{U, V};
    use crate::swan::{
        residue_fil0, rsw_of_cyclic, transcendence_witness, CyclicSymbolData, EvPlacement,
        SecondSlot, UniformiserSpec,
    };
    use crate::finite_field::FieldCtx;

    #[test]
    fn degenerate_gammas_all_one() {
        // gamma's all equal to 1: off-diagonal entries by direct substitution
        let one = PadicValue::from_int(q2(), 1);
        let l = LegendreCurve {
            gamma1: one.clone(),
            gamma2: one.clone(),
            gamma2_oracle: None,
        };
        let m = build_descent_matrix(&l, &l);
        let s = |i: usize, j: usize| m.entries[i][j].exact_parts().unwrap().0.to_string();
        assert_eq!([s(0, 1), s(0, 2), s(0, 3)], ["1", "1", "-1"]);
        assert_eq!(s(1, 3), "0"); // gamma (gamma - gamma) = 0
        assert!(m.is_symmetric());
    }

    #[test]
    fn rewritten_symbol_residue_and_a00_pullback_rsw() {
        // the two computable kernels behind the descent analysis:
        // (1 + a^{-1} x1, g(x2)) sits at m = e' with a unit second slot, so
        // its residue vanishes; the A_{0,0} pullback gives a nonzero rsw pair
        let f2 = FieldCtx::new(2, 1, None).unwrap();
        let shape = crate::swan::make_shape(2, 1, UniformiserSpec::RootOfP, &f2).unwrap();
        let ctx = FunctionFieldCtx::rational(&f2, "x1", "x2");
        let x1 = RatFunc::var(&ctx, U);
        let x2 = RatFunc::var(&ctx, V);
        // ord_2(alpha_1^{-1}) = 2 = e', unit slot g(x2) = x2(x2+1) say
        let rewritten = CyclicSymbolData {
            m: 2,
            x_bar: x1.clone(),
            second_slot: SecondSlot::UnitLift(x2.mul(&x2.add(&RatFunc::one(&ctx)))),
        };
        let r = residue_fil0(&rewritten, &shape).unwrap();
        assert!(r.zero_residue);
        assert_eq!(r.ev, EvPlacement::EvMinus2);
        // pullback of A_{0,0} on the pinned curve: (x1 - 1, x2 - 1); its
        // class at level e' = 2 has rsw (dlog(x1+1) ^ dlog(x2+1), 0) != 0
        let e = CurveParams::new(1, 0, -7, 5).unwrap();
        let t = two_torsion(&e, 48).unwrap();
        let l = legendre_transform(&e, &t).unwrap();
        let sym = azumaya_symbol(Eps::Zero, Eps::Zero, &l, &l, Some((&e, &t, &t)));
        let (p1, _p2) = sym.pullback.unwrap();
        // reduce the pullback slot mod 2: x - 1 = x + 1
        assert_eq!(p1, RatPoly::var(0).sub(&RatPoly::constant(q_int(1))));
        let s00 = CyclicSymbolData {
            m: 0,
            x_bar: x1.add(&RatFunc::one(&ctx)),
            second_slot: SecondSlot::UnitLift(x2.add(&RatFunc::one(&ctx))),
        };
        let pair = rsw_of_cyclic(&s00, &shape, &ctx).unwrap();
        assert_eq!(pair.level, 2);
        assert!(!pair.alpha.is_zero());
        assert!(transcendence_witness(&pair));
    }
}
