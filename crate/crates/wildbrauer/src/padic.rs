//! Exact p-adic arithmetic over Q_p and quadratic extensions: valuations and
//! unit parts, square classes, Hilbert symbols with a brute-force isotropy
//! oracle, and Hensel lifting of smooth surface points.
//!
//! Exact rationals are the backbone; truncated values appear only as Newton
//! outputs, and square-class decisions on them demand an explicit precision
//! margin rather than ever rounding.

use crate::ratpoly::RatPoly;
use crate::surface::{HomogeneousPoly, ProjPointFq};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::ops::Add;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PadicError {
    ZeroValue,
    InsufficientPrecision,
    DepthTooSmall { required: i64 },
    NewtonStall,
    InvalidField(String),
    FieldMismatch,
    Unsupported(String),
}

impl fmt::Display for PadicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PadicError::ZeroValue => write!(f, "operation undefined at zero"),
            PadicError::InsufficientPrecision => write!(f, "insufficient p-adic precision"),
            PadicError::DepthTooSmall { required } => {
                write!(f, "search depth too small; need at least {required}")
            }
            PadicError::NewtonStall => write!(f, "Newton residual failed to increase"),
            PadicError::InvalidField(s) => write!(f, "invalid local field: {s}"),
            PadicError::FieldMismatch => write!(f, "operands from different local fields"),
            PadicError::Unsupported(s) => write!(f, "unsupported: {s}"),
        }
    }
}

impl std::error::Error for PadicError {}

/// Q_p or a quadratic extension Q_p(sqrt(d)), d squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalField {
    p: u64,
    /// None for Q_p itself.
    d: Option<i64>,
    e: u32,
}

fn vp_i(p: u64, x: &BigInt) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = x.div_rem(&p);
        if r.is_zero() {
            v += 1;
            x = q;
        } else {
            return Some(v);
        }
    }
}

/// p-adic valuation of a nonzero rational.
pub fn vp_q(p: u64, x: &BigRational) -> Option<i64> {
    Some(vp_i(p, x.numer())? - vp_i(p, x.denom()).unwrap())
}

fn squarefree(d: i64) -> bool {
    let mut m = d.unsigned_abs();
    let mut f = 2u64;
    while f * f <= m {
        if m.is_multiple_of(f * f) {
            return false;
        }
        while m.is_multiple_of(f) {
            m /= f;
        }
        f += 1;
    }
    true
}

impl LocalField {
    pub fn qp(p: u64) -> LocalField {
        LocalField { p, d: None, e: 1 }
    }

    /// Q_p(sqrt(d)). Rejected when d is a square in Q_p (no genuine extension).
    pub fn quadratic(p: u64, d: i64) -> Result<LocalField, PadicError> {
        if d == 0 || d == 1 || !squarefree(d) {
            return Err(PadicError::InvalidField(format!("d={d} not squarefree")));
        }
        let vd = vp_i(p, &BigInt::from(d)).unwrap();
        // squarefree, so v_p(d) is 0 or 1
        let e = if vd == 1 {
            2
        } else if p == 2 && d.rem_euclid(4) == 3 {
            // 2 ramifies in Q(sqrt d) for d = 3 mod 4 as well
            2
        } else {
            1
        };
        if e == 1 {
            // unramified requires the unit d to be a non-square mod p (mod 8 for p=2)
            let is_sq = if p == 2 {
                d.rem_euclid(8) == 1
            } else {
                let r = (d.rem_euclid(p as i64)) as u64;
                r != 0 && mod_pow_u64(r, (p - 1) / 2, p) == 1
            };
            if is_sq {
                return Err(PadicError::InvalidField(format!(
                    "d={d} is a square in Q_{p}; not a quadratic extension"
                )));
            }
        }
        Ok(LocalField { p, d: Some(d), e })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    /// Absolute ramification index; also the normalized valuation of p.
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn is_qp(&self) -> bool {
        self.d.is_none()
    }
    pub fn disc(&self) -> Option<i64> {
        self.d
    }

    /// The fixed uniformiser as an exact element.
    pub fn uniformiser(&self) -> PadicValue {
        match (self.d, self.e) {
            (None, _) => PadicValue::from_rational(*self, q_of_int(self.p as i64)),
            (Some(d), 2) => {
                if d % self.p as i64 == 0 {
                    PadicValue::exact(*self, BigRational::zero(), BigRational::one())
                } else {
                    // p = 2, d = 3 mod 4: pi = 1 + sqrt(d)
                    PadicValue::exact(*self, BigRational::one(), BigRational::one())
                }
            }
            (Some(_), _) => PadicValue::from_rational(*self, q_of_int(self.p as i64)),
        }
    }
}

fn q_of_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mod_pow_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn mod_inv_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(((g.x % m) + m) % m)
    } else {
        None
    }
}

fn big_pow(p: u64, e: u64) -> BigInt {
    BigInt::from(p).pow(e as u32)
}

/// Truncated Q_p value with explicit precision bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Approx {
    /// pi^val * unit, unit known modulo p^relprec (and a unit there).
    Unit { val: i64, unit: BigInt, relprec: i64 },
    /// Congruent to 0 modulo pi^abs; valuation unknown beyond that.
    ZeroToPrec { abs: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// a + b*sqrt(d); b = 0 over Q_p.
    Exact { a: BigRational, b: BigRational },
    Approx(Approx),
}

/// Element of a local field: exact rational (or quadratic-irrational) value,
/// or a truncated approximation carrying valuation and precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicValue {
    field: LocalField,
    repr: Repr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum UnitClass {
    /// Unit residue mod p (p odd).
    ModP(u64),
    /// Unit residue mod 8 (p = 2).
    Mod8(u8),
    /// Residue-field class of the unit part in a quadratic extension.
    ExtResidue(u64),
}

/// Square-class datum of a nonzero local value.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SquareClass {
    pub is_square: bool,
    pub valuation_parity: Parity,
    pub unit_class: UnitClass,
}

/// Value of a quaternion symbol in Q/Z: 0 or 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SymbolValue {
    Zero,
    Half,
}

impl Add for SymbolValue {
    type Output = SymbolValue;
    fn add(self, rhs: SymbolValue) -> SymbolValue {
        if self == rhs {
            SymbolValue::Zero
        } else {
            SymbolValue::Half
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolValue::Zero => write!(f, "0"),
            SymbolValue::Half => write!(f, "1/2"),
        }
    }
}

impl PadicValue {
    pub fn exact(field: LocalField, a: BigRational, b: BigRational) -> PadicValue {
        if field.is_qp() {
            assert!(b.is_zero(), "Q_p value with sqrt part");
        }
        PadicValue {
            field,
            repr: Repr::Exact { a, b },
        }
    }

    pub fn from_rational(field: LocalField, a: BigRational) -> PadicValue {
        PadicValue::exact(field, a, BigRational::zero())
    }

    pub fn from_int(field: LocalField, n: i64) -> PadicValue {
        PadicValue::from_rational(field, q_of_int(n))
    }

    /// Truncated unit-form value pi^val * unit known mod p^relprec (Q_p only).
    pub fn approx_unit(field: LocalField, val: i64, unit: BigInt, relprec: i64) -> PadicValue {
        assert!(field.is_qp());
        let m = big_pow(field.p, relprec as u64);
        let unit = ((unit % &m) + &m) % &m;
        assert!(!(&unit % BigInt::from(field.p)).is_zero(), "unit part not a unit");
        PadicValue {
            field,
            repr: Repr::Approx(Approx::Unit { val, unit, relprec }),
        }
    }

    pub fn approx_zero(field: LocalField, abs: i64) -> PadicValue {
        PadicValue {
            field,
            repr: Repr::Approx(Approx::ZeroToPrec { abs }),
        }
    }

    /// Truncated value from an integer residue known mod p^abs.
    pub fn approx_from_int(field: LocalField, residue: BigInt, abs: i64) -> PadicValue {
        approx_from_residue(field, residue, abs)
    }

    /// Representative of the unit part modulo p^prec, for ordering and
    /// display; exact values are decomposed first.
    pub fn canonical_residue(&self, prec: i64) -> BigInt {
        let m = big_pow(self.field.p, prec.max(1) as u64);
        match &self.repr {
            Repr::Exact { a, b } => {
                if a.is_zero() && b.is_zero() {
                    return BigInt::zero();
                }
                if b.is_zero() {
                    let v = vp_q(self.field.p, a).unwrap();
                    let pv = if v >= 0 {
                        BigRational::from_integer(big_pow(self.field.p, v as u64))
                    } else {
                        BigRational::new(BigInt::one(), big_pow(self.field.p, (-v) as u64))
                    };
                    let u = a / pv;
                    let d = ((u.denom() % &m) + &m) % &m;
                    let n = ((u.numer() % &m) + &m) % &m;
                    match mod_inv_big(&d, &m) {
                        Some(di) => (n * di) % &m,
                        None => BigInt::zero(),
                    }
                } else {
                    BigInt::zero()
                }
            }
            Repr::Approx(Approx::Unit { unit, .. }) => ((unit % &m) + &m) % &m,
            Repr::Approx(Approx::ZeroToPrec { .. }) => BigInt::zero(),
        }
    }

    pub fn field(&self) -> LocalField {
        self.field
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(&self.repr, Repr::Exact { a, b } if a.is_zero() && b.is_zero())
    }

    pub fn exact_parts(&self) -> Option<(&BigRational, &BigRational)> {
        match &self.repr {
            Repr::Exact { a, b } => Some((a, b)),
            _ => None,
        }
    }

    /// Normalized valuation (v(pi) = 1, v(p) = e). None when the value is 0,
    /// or Err when only a lower bound is known.
    pub fn valuation(&self) -> Result<Option<i64>, PadicError> {
        match &self.repr {
            Repr::Exact { a, b } => {
                if a.is_zero() && b.is_zero() {
                    return Ok(None);
                }
                let e = self.field.e as i64;
                if b.is_zero() {
                    return Ok(Some(e * vp_q(self.field.p, a).unwrap()));
                }
                let d = q_of_int(self.field.d.unwrap());
                let norm = a * a - d * b * b;
                if norm.is_zero() {
                    // cannot happen: d squarefree, not a rational square
                    unreachable!("norm of nonzero quadratic element vanished");
                }
                let vn = vp_q(self.field.p, &norm).unwrap();
                // v(x) = e * v_p(N(x)) / 2
                let num = e * vn;
                debug_assert_eq!(num % 2, 0, "norm valuation parity");
                Ok(Some(num / 2))
            }
            Repr::Approx(Approx::Unit { val, .. }) => Ok(Some(*val)),
            Repr::Approx(Approx::ZeroToPrec { .. }) => Err(PadicError::InsufficientPrecision),
        }
    }

    fn check_field(&self, other: &PadicValue) -> Result<(), PadicError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PadicError::FieldMismatch)
        }
    }

    /// Exact-to-approx coercion at the given relative precision (Q_p only).
    fn to_approx(&self, relprec: i64) -> Result<Approx, PadicError> {
        match &self.repr {
            Repr::Approx(a) => Ok(a.clone()),
            Repr::Exact { a, b } => {
                if !b.is_zero() {
                    return Err(PadicError::Unsupported(
                        "approximate arithmetic in quadratic extensions".into(),
                    ));
                }
                if a.is_zero() {
                    return Ok(Approx::ZeroToPrec { abs: i64::MAX / 4 });
                }
                let p = self.field.p;
                let v = vp_q(p, a).unwrap();
                // unit part a / p^v has unit numerator and denominator
                let pv = if v >= 0 {
                    BigRational::from_integer(big_pow(p, v as u64))
                } else {
                    BigRational::new(BigInt::one(), big_pow(p, (-v) as u64))
                };
                let u = a / pv;
                let m = big_pow(p, relprec as u64);
                let den_inv = mod_inv_big(&(u.denom() % &m), &m)
                    .ok_or(PadicError::InsufficientPrecision)?;
                let r = ((u.numer() % &m) * den_inv % &m + &m) % &m;
                Ok(Approx::Unit {
                    val: v,
                    unit: r,
                    relprec,
                })
            }
        }
    }

    pub fn add(&self, other: &PadicValue) -> Result<PadicValue, PadicError> {
        self.check_field(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Exact { a: a1, b: b1 }, Repr::Exact { a: a2, b: b2 }) => Ok(PadicValue::exact(
                self.field,
                a1 + a2,
                b1 + b2,
            )),
            _ => {
                let p = self.field.p;
                let (x, y) = (self.clone(), other.clone());
                let ax = x.to_approx(default_rel(&x)?)?;
                let ay = y.to_approx(default_rel(&y)?)?;
                // shift negative valuations into the integral range first
                let vmin = approx_val_floor(&ax).min(approx_val_floor(&ay)).min(0);
                let ax = approx_shift(ax, -vmin);
                let ay = approx_shift(ay, -vmin);
                let abs_x = abs_prec(&ax);
                let abs_y = abs_prec(&ay);
                let abs = abs_x.min(abs_y);
                let rx = residue_mod(&ax, p, abs);
                let ry = residue_mod(&ay, p, abs);
                let m = big_pow(p, abs.max(0) as u64);
                let s = (rx + ry) % &m;
                let sum = approx_from_residue(self.field, s, abs);
                // undo the shift
                match sum.repr {
                    Repr::Approx(a) => {
                        let shifted = approx_shift(a, vmin);
                        Ok(PadicValue {
                            field: self.field,
                            repr: Repr::Approx(shifted),
                        })
                    }
                    other => Ok(PadicValue {
                        field: self.field,
                        repr: other,
                    }),
                }
            }
        }
    }

    pub fn neg(&self) -> PadicValue {
        match &self.repr {
            Repr::Exact { a, b } => PadicValue::exact(self.field, -a.clone(), -b.clone()),
            Repr::Approx(Approx::Unit { val, unit, relprec }) => {
                let m = big_pow(self.field.p, *relprec as u64);
                PadicValue {
                    field: self.field,
                    repr: Repr::Approx(Approx::Unit {
                        val: *val,
                        unit: (&m - unit % &m) % &m,
                        relprec: *relprec,
                    }),
                }
            }
            Repr::Approx(z) => PadicValue {
                field: self.field,
                repr: Repr::Approx(z.clone()),
            },
        }
    }

    pub fn sub(&self, other: &PadicValue) -> Result<PadicValue, PadicError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicValue) -> Result<PadicValue, PadicError> {
        self.check_field(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Exact { a: a1, b: b1 }, Repr::Exact { a: a2, b: b2 }) => {
                let (a, b) = match self.field.d {
                    None => (a1 * a2, BigRational::zero()),
                    Some(d) => {
                        let d = q_of_int(d);
                        (a1 * a2 + &d * b1 * b2, a1 * b2 + a2 * b1)
                    }
                };
                Ok(PadicValue::exact(self.field, a, b))
            }
            _ => {
                if self.is_exact_zero() || other.is_exact_zero() {
                    return Ok(PadicValue::from_int(self.field, 0));
                }
                let ax = self.to_approx(default_rel(self)?)?;
                let ay = other.to_approx(default_rel(other)?)?;
                match (ax, ay) {
                    (
                        Approx::Unit { val: v1, unit: u1, relprec: r1 },
                        Approx::Unit { val: v2, unit: u2, relprec: r2 },
                    ) => {
                        let r = r1.min(r2);
                        let m = big_pow(self.field.p, r as u64);
                        Ok(PadicValue {
                            field: self.field,
                            repr: Repr::Approx(Approx::Unit {
                                val: v1 + v2,
                                unit: u1 * u2 % m,
                                relprec: r,
                            }),
                        })
                    }
                    (Approx::ZeroToPrec { abs }, other) | (other, Approx::ZeroToPrec { abs }) => {
                        let bound = match other {
                            Approx::Unit { val, .. } => abs + val,
                            Approx::ZeroToPrec { abs: a2 } => abs + a2,
                        };
                        Ok(PadicValue::approx_zero(self.field, bound))
                    }
                }
            }
        }
    }

    pub fn inv(&self) -> Result<PadicValue, PadicError> {
        match &self.repr {
            Repr::Exact { a, b } => {
                if a.is_zero() && b.is_zero() {
                    return Err(PadicError::ZeroValue);
                }
                match self.field.d {
                    None => Ok(PadicValue::from_rational(
                        self.field,
                        BigRational::one() / a.clone(),
                    )),
                    Some(d) => {
                        let d = q_of_int(d);
                        let n = a * a - &d * b * b;
                        Ok(PadicValue::exact(self.field, a / &n, -(b / &n)))
                    }
                }
            }
            Repr::Approx(Approx::Unit { val, unit, relprec }) => {
                let m = big_pow(self.field.p, *relprec as u64);
                let inv = mod_inv_big(unit, &m).ok_or(PadicError::InsufficientPrecision)?;
                Ok(PadicValue {
                    field: self.field,
                    repr: Repr::Approx(Approx::Unit {
                        val: -val,
                        unit: inv,
                        relprec: *relprec,
                    }),
                })
            }
            Repr::Approx(Approx::ZeroToPrec { .. }) => Err(PadicError::InsufficientPrecision),
        }
    }

    pub fn div(&self, other: &PadicValue) -> Result<PadicValue, PadicError> {
        self.mul(&other.inv()?)
    }

    pub fn pow_i(&self, e: i64) -> Result<PadicValue, PadicError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = PadicValue::from_int(self.field, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Residue of a valuation->=0 value in the residue field, as an integer
    /// class mod p (residue field F_p cases only).
    pub fn residue_mod_p(&self) -> Result<u64, PadicError> {
        let p = self.field.p;
        match &self.repr {
            Repr::Exact { a, b } => {
                let ra = rational_mod_p(a, p)?;
                if b.is_zero() {
                    return Ok(ra);
                }
                match (self.field.d, self.field.e) {
                    (Some(d), 2) => {
                        if d % p as i64 == 0 {
                            Ok(ra)
                        } else {
                            // pi = 1 + sqrt d: sqrt d = pi - 1 = -1 mod pi
                            let rb = rational_mod_p(b, p)?;
                            Ok((ra + (p - 1) * rb) % p)
                        }
                    }
                    _ => Err(PadicError::Unsupported(
                        "residue in extension with non-prime residue field".into(),
                    )),
                }
            }
            Repr::Approx(Approx::Unit { val, unit, .. }) => {
                if *val > 0 {
                    Ok(0)
                } else if *val == 0 {
                    Ok((unit % BigInt::from(p)).to_u64().unwrap())
                } else {
                    Err(PadicError::ZeroValue)
                }
            }
            Repr::Approx(Approx::ZeroToPrec { abs }) => {
                if *abs >= 1 {
                    Ok(0)
                } else {
                    Err(PadicError::InsufficientPrecision)
                }
            }
        }
    }
}

fn rational_mod_p(a: &BigRational, p: u64) -> Result<u64, PadicError> {
    let pb = BigInt::from(p);
    let d = ((a.denom() % &pb) + &pb) % &pb;
    if d.is_zero() {
        return Err(PadicError::ZeroValue);
    }
    let n = ((a.numer() % &pb) + &pb) % &pb;
    let dinv = mod_inv_big(&d, &pb).unwrap();
    Ok(((n * dinv) % &pb).to_u64().unwrap())
}

fn default_rel(v: &PadicValue) -> Result<i64, PadicError> {
    match &v.repr {
        Repr::Exact { .. } => Ok(64),
        Repr::Approx(Approx::Unit { relprec, .. }) => Ok(*relprec),
        Repr::Approx(Approx::ZeroToPrec { .. }) => Ok(8),
    }
}

fn abs_prec(a: &Approx) -> i64 {
    match a {
        Approx::Unit { val, relprec, .. } => val + relprec,
        Approx::ZeroToPrec { abs } => *abs,
    }
}

fn approx_val_floor(a: &Approx) -> i64 {
    match a {
        Approx::Unit { val, .. } => *val,
        Approx::ZeroToPrec { abs } => *abs,
    }
}

/// Multiply by pi^shift: exact on the valuation bookkeeping.
fn approx_shift(a: Approx, shift: i64) -> Approx {
    match a {
        Approx::Unit { val, unit, relprec } => Approx::Unit {
            val: val + shift,
            unit,
            relprec,
        },
        Approx::ZeroToPrec { abs } => Approx::ZeroToPrec { abs: abs + shift },
    }
}

fn residue_mod(a: &Approx, p: u64, abs: i64) -> BigInt {
    match a {
        Approx::Unit { val, unit, .. } => {
            if *val >= abs {
                BigInt::zero()
            } else if *val >= 0 {
                let m = big_pow(p, abs as u64);
                unit * big_pow(p, *val as u64) % m
            } else {
                panic!("negative-valuation approximation used additively; scale first")
            }
        }
        Approx::ZeroToPrec { .. } => BigInt::zero(),
    }
}

fn approx_from_residue(field: LocalField, r: BigInt, abs: i64) -> PadicValue {
    let p = field.p;
    if r.is_zero() {
        return PadicValue::approx_zero(field, abs);
    }
    let v = vp_i(p, &r).unwrap();
    if v >= abs {
        return PadicValue::approx_zero(field, abs);
    }
    let unit = r / big_pow(p, v as u64);
    PadicValue::approx_unit(field, v, unit, abs - v)
}

/// x = pi^v * unit with unit of valuation 0.
pub fn decompose(x: &PadicValue) -> Result<(i64, PadicValue), PadicError> {
    let v = x.valuation()?.ok_or(PadicError::ZeroValue)?;
    let pi = x.field.uniformiser();
    let unit = x.mul(&pi.pow_i(-v)?)?;
    debug_assert_eq!(unit.valuation()?, Some(0));
    Ok((v, unit))
}

fn unit_class_qp(field: LocalField, unit: &PadicValue) -> Result<(bool, UnitClass), PadicError> {
    let p = field.p;
    if p == 2 {
        // read the unit mod 8
        let m = BigInt::from(8);
        let r = match &unit.repr {
            Repr::Exact { a, .. } => {
                let d = ((a.denom() % &m) + &m) % &m;
                let n = ((a.numer() % &m) + &m) % &m;
                (n * mod_inv_big(&d, &m).unwrap()) % &m
            }
            Repr::Approx(Approx::Unit { unit, relprec, .. }) => {
                if *relprec < 3 {
                    return Err(PadicError::InsufficientPrecision);
                }
                unit % &m
            }
            _ => return Err(PadicError::InsufficientPrecision),
        };
        let r = r.to_u8().unwrap();
        Ok((r == 1, UnitClass::Mod8(r)))
    } else {
        let r = match &unit.repr {
            Repr::Exact { a, .. } => rational_mod_p(a, p)?,
            Repr::Approx(Approx::Unit { unit, relprec, .. }) => {
                if *relprec < 1 {
                    return Err(PadicError::InsufficientPrecision);
                }
                (unit % BigInt::from(p)).to_u64().unwrap()
            }
            _ => return Err(PadicError::InsufficientPrecision),
        };
        let is_sq = mod_pow_u64(r, (p - 1) / 2, p) == 1;
        Ok((is_sq, UnitClass::ModP(r)))
    }
}

/// Square-class decision. Over Q_p by valuation parity and unit class; over a
/// quadratic extension by the bounded isotropy search with Hensel margin.
pub fn is_square(x: &PadicValue) -> Result<SquareClass, PadicError> {
    if x.is_exact_zero() {
        return Err(PadicError::ZeroValue);
    }
    let (v, unit) = decompose(x)?;
    let parity = if v % 2 == 0 { Parity::Even } else { Parity::Odd };
    if x.field.is_qp() {
        let (unit_sq, class) = unit_class_qp(x.field, &unit)?;
        Ok(SquareClass {
            is_square: parity == Parity::Even && unit_sq,
            valuation_parity: parity,
            unit_class: class,
        })
    } else {
        let res = unit.residue_mod_p()?;
        let unit_sq = ext_unit_is_square(&unit)?;
        Ok(SquareClass {
            is_square: parity == Parity::Even && unit_sq,
            valuation_parity: parity,
            unit_class: UnitClass::ExtResidue(res),
        })
    }
}

/// Representatives of O/pi^depth for a quadratic extension, as exact values.
fn ext_residue_reps(field: LocalField, depth: i64) -> Vec<PadicValue> {
    let p = field.p;
    let (ka, kb) = if field.e == 2 {
        ((depth + 1) / 2, depth / 2)
    } else {
        (depth, depth)
    };
    let ma = big_pow(p, ka as u64).to_i64().unwrap();
    let mb = big_pow(p, kb as u64).to_i64().unwrap();
    let mut out = Vec::with_capacity((ma * mb) as usize);
    for a in 0..ma {
        for b in 0..mb {
            out.push(PadicValue::exact(field, q_of_int(a), q_of_int(b)));
        }
    }
    out
}

/// Bounded search for z with z^2 = u (u a unit) with certified Hensel margin.
fn ext_unit_is_square(u: &PadicValue) -> Result<bool, PadicError> {
    let field = u.field;
    let e = field.e as i64;
    let depth = 2 * e + 3;
    for z in ext_residue_reps(field, depth) {
        if z.is_exact_zero() {
            continue;
        }
        let r = z.mul(&z)?.sub(u)?;
        let vr = match r.valuation()? {
            None => return Ok(true), // exact root
            Some(v) => v,
        };
        // Newton criterion: v(z^2-u) > 2 v(2z) = 2e (z a unit)
        if let Some(vz) = z.valuation()? {
            if vz == 0 && vr > 2 * e {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Bounded isotropy search: does z^2 = a x^2 + b y^2 have a primitive solution
/// modulo pi^depth satisfying the Hensel margin? At depth >= 2e+3 this decides
/// solvability over the field.
pub fn isotropy_oracle(a: &PadicValue, b: &PadicValue, depth: i64) -> Result<bool, PadicError> {
    if a.is_exact_zero() || b.is_exact_zero() {
        return Err(PadicError::ZeroValue);
    }
    let field = a.field;
    a.check_field(b)?;
    let required = 2 * field.e as i64 + 3;
    if depth < required {
        return Err(PadicError::DepthTooSmall { required });
    }
    // squares are invariant under scaling by squares: normalize v in {0,1}
    let norm = |x: &PadicValue| -> Result<PadicValue, PadicError> {
        let (v, _) = decompose(x)?;
        let pi = field.uniformiser();
        x.mul(&pi.pow_i(-2 * v.div_euclid(2))?)
    };
    let a = norm(a)?;
    let b = norm(b)?;
    // z^2 = a x^2 solvable when a is a square; likewise b; z = 0 branch when
    // -ab is a square
    if is_square(&a)?.is_square || is_square(&b)?.is_square {
        return Ok(true);
    }
    let mab = a.mul(&b)?.neg();
    if is_square(&mab)?.is_square {
        return Ok(true);
    }
    if field.is_qp() {
        qp_isotropy_search(&a, &b, depth)
    } else {
        ext_isotropy_search(&a, &b, depth)
    }
}

fn qp_isotropy_search(a: &PadicValue, b: &PadicValue, depth: i64) -> Result<bool, PadicError> {
    let p = a.field.p;
    let guard = if p == 2 { 3 } else { 1 };
    let (ar, _) = a.exact_parts().ok_or(PadicError::Unsupported(
        "oracle needs exact arguments".into(),
    ))?;
    let (br, _) = b.exact_parts().unwrap();
    // scale by the square of the common denominator: integer form
    let dd = num_integer::lcm(ar.denom().clone(), br.denom().clone());
    let scale = BigRational::from_integer(&dd * &dd);
    let ai = (ar * &scale).to_integer();
    let bi = (br * &scale).to_integer();
    let m = big_pow(p, depth as u64);
    // i128 fast path
    let (ai128, bi128, m128) = (ai.to_i128(), bi.to_i128(), m.to_i128());
    if let (Some(ai), Some(bi), Some(m)) = (ai128, bi128, m128) {
        if m < (1 << 40) && ai.unsigned_abs() < (1 << 40) && bi.unsigned_abs() < (1 << 40) {
            for x in 0..m {
                let ax2 = ai.wrapping_mul(x).wrapping_mul(x);
                for y in 0..m {
                    if x % p as i128 == 0 && y % p as i128 == 0 {
                        continue;
                    }
                    let t = ax2 + bi * y * y;
                    if t == 0 {
                        continue;
                    }
                    let mut v = 0i64;
                    let mut u = t;
                    while u % p as i128 == 0 {
                        u /= p as i128;
                        v += 1;
                    }
                    if v % 2 != 0 || v > depth - guard {
                        continue;
                    }
                    let sq = if p == 2 {
                        u.rem_euclid(8) == 1
                    } else {
                        let r = u.rem_euclid(p as i128) as u64;
                        mod_pow_u64(r, (p - 1) / 2, p) == 1
                    };
                    if sq {
                        return Ok(true);
                    }
                }
            }
            return Ok(false);
        }
    }
    // general BigInt fallback
    let mi = m.to_i64().ok_or(PadicError::Unsupported("depth too large".into()))?;
    for x in 0..mi {
        for y in 0..mi {
            if x % p as i64 == 0 && y % p as i64 == 0 {
                continue;
            }
            let t = &ai * x * x + &bi * y * y;
            if t.is_zero() {
                continue;
            }
            let v = vp_i(p, &t).unwrap();
            if v % 2 != 0 || v > depth - guard {
                continue;
            }
            let u = &t / big_pow(p, v as u64);
            let sq = if p == 2 {
                let eight = BigInt::from(8);
                (((&u % &eight) + &eight) % &eight).is_one()
            } else {
                let r = (((&u % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p))
                    .to_u64()
                    .unwrap();
                mod_pow_u64(r, (p - 1) / 2, p) == 1
            };
            if sq {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn ext_isotropy_search(a: &PadicValue, b: &PadicValue, depth: i64) -> Result<bool, PadicError> {
    let field = a.field;
    let reps = ext_residue_reps(field, depth);
    let guard = 2 * field.e as i64 + 1;
    for x in &reps {
        let ax2 = a.mul(x)?.mul(x)?;
        for y in &reps {
            // skip pairs that are both non-units
            let xv = x.valuation()?;
            let yv = y.valuation()?;
            if xv != Some(0) && yv != Some(0) {
                continue;
            }
            let t = ax2.add(&b.mul(y)?.mul(y)?)?;
            if t.is_exact_zero() {
                continue; // covered by the -ab branch
            }
            let vt = t.valuation()?.unwrap();
            if vt % 2 != 0 || vt > depth - guard {
                continue;
            }
            let (_, ut) = decompose(&t)?;
            if ext_unit_is_square(&ut)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Hilbert symbol (a,b): 0 iff z^2 = a x^2 + b y^2 is solvable. Over Q_p the
/// standard unit-class formulas; over quadratic extensions the isotropy
/// oracle. The two routes are required to agree over Q_p and the test suite
/// enforces it on square-class representative grids.
pub fn hilbert_symbol(a: &PadicValue, b: &PadicValue) -> Result<SymbolValue, PadicError> {
    if a.is_exact_zero() || b.is_exact_zero() {
        return Err(PadicError::ZeroValue);
    }
    a.check_field(b)?;
    let field = a.field;
    if !field.is_qp() {
        let sol = isotropy_oracle(a, b, 2 * field.e as i64 + 3)?;
        return Ok(if sol { SymbolValue::Zero } else { SymbolValue::Half });
    }
    let p = field.p;
    let (va, ua) = decompose(a)?;
    let (vb, ub) = decompose(b)?;
    let exponent = if p == 2 {
        let ra = read_unit_mod(&ua, 8)?;
        let rb = read_unit_mod(&ub, 8)?;
        let eps = |u: u64| (u as i64 - 1) / 2 % 2;
        let om = |u: u64| ((u * u - 1) / 8 % 2) as i64;
        (eps(ra) * eps(rb) + va * om(rb) + vb * om(ra)).rem_euclid(2)
    } else {
        let ra = read_unit_mod(&ua, p)?;
        let rb = read_unit_mod(&ub, p)?;
        let leg = |u: u64| if mod_pow_u64(u, (p - 1) / 2, p) == 1 { 0i64 } else { 1 };
        let eps_p = ((p - 1) / 2 % 2) as i64;
        (va * vb * eps_p + va * leg(rb) + vb * leg(ra)).rem_euclid(2)
    };
    Ok(if exponent == 0 {
        SymbolValue::Zero
    } else {
        SymbolValue::Half
    })
}

fn read_unit_mod(u: &PadicValue, m: u64) -> Result<u64, PadicError> {
    let mb = BigInt::from(m);
    match &u.repr {
        Repr::Exact { a, .. } => {
            let d = ((a.denom() % &mb) + &mb) % &mb;
            let n = ((a.numer() % &mb) + &mb) % &mb;
            let di = mod_inv_big(&d, &mb).ok_or(PadicError::InsufficientPrecision)?;
            Ok(((n * di) % &mb).to_u64().unwrap())
        }
        Repr::Approx(Approx::Unit { unit, relprec, .. }) => {
            let need = if m == 8 { 3 } else { 1 };
            if *relprec < need {
                return Err(PadicError::InsufficientPrecision);
            }
            Ok((((unit % &mb) + &mb) % &mb).to_u64().unwrap())
        }
        _ => Err(PadicError::InsufficientPrecision),
    }
}

/// A point of the surface to finite precision: f(P) = 0 mod pi^precision.
#[derive(Debug, Clone)]
pub struct PadicSurfacePoint {
    pub coords: [PadicValue; 4],
    pub surface: HomogeneousPoly,
    pub precision: i64,
}

/// Evaluate a rational polynomial at local-field arguments.
pub fn eval_poly(
    poly: &RatPoly,
    args: &[PadicValue; 4],
    field: LocalField,
) -> Result<PadicValue, PadicError> {
    let mut acc = PadicValue::from_int(field, 0);
    for (e, c) in poly.terms() {
        let mut t = PadicValue::from_rational(field, c.clone());
        for (v, arg) in args.iter().enumerate() {
            if e[v] > 0 {
                t = t.mul(&arg.pow_i(e[v] as i64)?)?;
            }
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

/// Newton-lift a smooth seed to a surface point with f(P) = 0 mod p^N.
///
/// The seed's leading coordinate becomes an exact 1; `params` fixes exact
/// integer lifts for the remaining two coordinates (they must reduce to the
/// seed); the `free_index` coordinate is solved for. Q_p only.
pub fn hensel_lift(
    f: &HomogeneousPoly,
    seed: &ProjPointFq,
    free_index: usize,
    params: &[(usize, BigInt)],
    field: LocalField,
    precision: i64,
) -> Result<PadicSurfacePoint, PadicError> {
    if !field.is_qp() {
        return Err(PadicError::Unsupported(
            "disc lifting over quadratic extensions".into(),
        ));
    }
    let p = field.p;
    let ctx = seed.coords[0].ctx();
    if ctx.p() != p || ctx.degree() != 1 {
        return Err(PadicError::InvalidField(
            "seed must live over the prime residue field".into(),
        ));
    }
    let lead = seed.leading_index();
    if free_index == lead {
        return Err(PadicError::InvalidField("free index equals leading index".into()));
    }
    // assemble fixed coordinates
    let mut fixed: [Option<BigRational>; 4] = [None, None, None, None];
    fixed[lead] = Some(BigRational::one());
    for (idx, lift) in params {
        if *idx == lead || *idx == free_index {
            return Err(PadicError::InvalidField("parameter index clashes".into()));
        }
        let res = seed.coords[*idx].coeffs()[0] as i64;
        if ((lift - BigInt::from(res)) % BigInt::from(p)) != BigInt::zero() {
            return Err(PadicError::InvalidField(
                "parameter lift does not reduce to the seed".into(),
            ));
        }
        fixed[*idx] = Some(BigRational::from_integer(lift.clone()));
    }
    for v in 0..4 {
        if v != free_index && fixed[v].is_none() {
            // default lift: the residue representative
            fixed[v] = Some(q_of_int(seed.coords[v].coeffs()[0] as i64));
        }
    }
    // univariate g(t) = f(..., t, ...)
    let deg = f.degree() as usize;
    let mut coeffs = vec![BigRational::zero(); deg + 1];
    for (e, c) in f.poly().terms() {
        let mut t = c.clone();
        for v in 0..4 {
            if v != free_index {
                let base = fixed[v].as_ref().unwrap();
                for _ in 0..e[v] {
                    t *= base;
                }
            }
        }
        coeffs[e[free_index] as usize] += t;
    }
    // clear denominators (must be a p-unit overall)
    let mut l = BigInt::one();
    for c in &coeffs {
        l = num_integer::lcm(l, c.denom().clone());
    }
    if (&l % BigInt::from(p)).is_zero() {
        return Err(PadicError::InvalidField(
            "surface coefficients not p-integral".into(),
        ));
    }
    let gi: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let dgi: Vec<BigInt> = gi
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let t0 = BigInt::from(seed.coords[free_index].coeffs()[0] as i64);
    // Jacobian valuation j is fixed along the iteration; the quadratic
    // Hensel criterion v(g) > 2j must hold at the seed
    let exact_eval = |cs: &[BigInt], t: &BigInt| -> BigInt {
        let mut acc = BigInt::zero();
        for c in cs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    };
    let j = vp_i(p, &exact_eval(&dgi, &t0)).unwrap_or(precision);
    let g0v = vp_i(p, &exact_eval(&gi, &t0)).unwrap_or(precision + 2 * j + 2);
    if g0v < 1 {
        return Err(PadicError::InvalidField("seed is not on the surface".into()));
    }
    if g0v <= 2 * j {
        return Err(PadicError::NewtonStall);
    }
    let work = precision + 2 * j + 2;
    let m = big_pow(p, work as u64);
    let horner = |cs: &[BigInt], t: &BigInt| -> BigInt {
        let mut acc = BigInt::zero();
        for c in cs.iter().rev() {
            acc = (acc * t + c) % &m;
        }
        ((acc % &m) + &m) % &m
    };
    // Newton with the derivative's p-part divided out:
    // t <- t - (g(t)/p^j) * inv(g'(t)/p^j)
    let target = precision + j;
    let mut t = t0;
    let mut last_v = vp_i(p, &horner(&gi, &t)).unwrap_or(work);
    for _ in 0..(2 * precision + 8) {
        let gt = horner(&gi, &t);
        if gt.is_zero() {
            break;
        }
        let vt = vp_i(p, &gt).unwrap();
        if vt >= target {
            break;
        }
        let dgt = horner(&dgi, &t);
        let vd = vp_i(p, &dgt).ok_or(PadicError::NewtonStall)?;
        if vd != j {
            return Err(PadicError::NewtonStall);
        }
        let unit = &dgt / big_pow(p, j as u64);
        let inv = mod_inv_big(&unit, &m).ok_or(PadicError::NewtonStall)?;
        let step = (&gt / big_pow(p, j as u64)) * inv;
        t = ((&t - step) % &m + &m) % &m;
        let vnew = vp_i(p, &horner(&gi, &t)).unwrap_or(work);
        if vnew <= last_v && vnew < target {
            return Err(PadicError::NewtonStall);
        }
        last_v = vnew;
    }
    // exact root detection: try the plain integer value
    let mut exact_root = None;
    {
        let texact = &t;
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * BigRational::from_integer(texact.clone()) + c;
        }
        if acc.is_zero() {
            exact_root = Some(BigRational::from_integer(texact.clone()));
        }
    }
    let free_val = match exact_root {
        Some(r) => PadicValue::from_rational(field, r),
        None => {
            let mp = big_pow(p, precision as u64);
            approx_from_residue(field, ((&t % &mp) + &mp) % &mp, precision)
        }
    };
    let mut coords: [PadicValue; 4] = [
        PadicValue::from_int(field, 0),
        PadicValue::from_int(field, 0),
        PadicValue::from_int(field, 0),
        PadicValue::from_int(field, 0),
    ];
    for (v, coord) in coords.iter_mut().enumerate() {
        if v == free_index {
            *coord = free_val.clone();
        } else {
            *coord = PadicValue::from_rational(field, fixed[v].clone().unwrap());
        }
    }
    // residual check
    let fp = eval_poly(f.poly(), &coords, field)?;
    let ok = match fp.valuation() {
        Ok(None) => true,
        Ok(Some(v)) => v >= precision,
        Err(_) => true, // zero to precision
    };
    if !ok {
        return Err(PadicError::NewtonStall);
    }
    Ok(PadicSurfacePoint {
        coords,
        surface: f.clone(),
        precision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::{FFElement, FieldCtx};
    use crate::ratpoly::q_frac;

    fn q2() -> LocalField {
        LocalField::qp(2)
    }

    #[test]
    fn decompose_examples() {
        let (v, u) = decompose(&PadicValue::from_int(q2(), 8)).unwrap();
        assert_eq!(v, 3);
        assert_eq!(u, PadicValue::from_int(q2(), 1));

        let x = PadicValue::from_rational(q2(), q_frac(-11, 8));
        let (v, u) = decompose(&x).unwrap();
        assert_eq!(v, -3);
        assert_eq!(u, PadicValue::from_int(q2(), -11));

        // sqrt(2)-generator in Q_2(sqrt 2) has normalized valuation 1
        let f = LocalField::quadratic(2, 2).unwrap();
        let s = PadicValue::exact(f, BigRational::zero(), BigRational::one());
        let (v, u) = decompose(&s).unwrap();
        assert_eq!(v, 1);
        assert_eq!(u.valuation().unwrap(), Some(0));

        assert_eq!(
            decompose(&PadicValue::from_int(q2(), 0)).unwrap_err(),
            PadicError::ZeroValue
        );
    }

    #[test]
    fn square_classes_over_q2() {
        assert!(is_square(&PadicValue::from_int(q2(), 4)).unwrap().is_square);
        assert!(!is_square(&PadicValue::from_int(q2(), 2)).unwrap().is_square);
        // 63 = 7 mod 8: not a square
        let c = is_square(&PadicValue::from_int(q2(), 63)).unwrap();
        assert!(!c.is_square);
        assert_eq!(c.unit_class, UnitClass::Mod8(7));
        assert!(is_square(&PadicValue::from_int(q2(), 57)).unwrap().is_square);
        assert!(is_square(&PadicValue::from_int(q2(), 17)).unwrap().is_square);
    }

    #[test]
    fn isotropy_trivial_cases() {
        let one = PadicValue::from_int(q2(), 1);
        let b = PadicValue::from_int(q2(), -6);
        assert!(isotropy_oracle(&one, &b, 7).unwrap());
        // a + b a nonzero square: (1,1,sqrt(a+b))
        let a = PadicValue::from_int(q2(), 3);
        let b2 = PadicValue::from_int(q2(), 6);
        assert!(isotropy_oracle(&a, &b2, 7).unwrap());
        assert_eq!(
            isotropy_oracle(&a, &b2, 3).unwrap_err(),
            PadicError::DepthTooSmall { required: 5 }
        );
    }

    #[test]
    fn oracle_frozen_values() {
        // computed by the independent brute-force search before the build
        let q3 = LocalField::qp(3);
        let q5 = LocalField::qp(5);
        let cases: [(LocalField, i64, i64, bool); 6] = [
            (q2(), -1, -1, false),
            (q2(), 2, 3, false),
            (q2(), -2, -5, true),
            (q3, 3, 3, false),
            (q3, -1, -1, true),
            (q5, 2, 5, false),
        ];
        for (f, a, b, expect) in cases {
            let depth = 2 * f.e() as i64 + 3;
            assert_eq!(
                isotropy_oracle(
                    &PadicValue::from_int(f, a),
                    &PadicValue::from_int(f, b),
                    depth
                )
                .unwrap(),
                expect,
                "oracle({a},{b}) over Q_{}",
                f.p()
            );
        }
    }

    #[test]
    fn hilbert_symbol_matches_frozen_grid() {
        // frozen p=2 grid over representatives [1,-1,2,-2,5,-5,10,-10]
        let reps = [1i64, -1, 2, -2, 5, -5, 10, -10];
        let grid: [[u8; 8]; 8] = [
            [0, 0, 0, 0, 0, 0, 0, 0],
            [0, 1, 0, 1, 0, 1, 0, 1],
            [0, 0, 0, 0, 1, 1, 1, 1],
            [0, 1, 0, 1, 1, 0, 1, 0],
            [0, 0, 1, 1, 0, 0, 1, 1],
            [0, 1, 1, 0, 0, 1, 1, 0],
            [0, 0, 1, 1, 1, 1, 0, 0],
            [0, 1, 1, 0, 1, 0, 0, 1],
        ];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                let h = hilbert_symbol(
                    &PadicValue::from_int(q2(), a),
                    &PadicValue::from_int(q2(), b),
                )
                .unwrap();
                let expect = if grid[i][j] == 0 {
                    SymbolValue::Zero
                } else {
                    SymbolValue::Half
                };
                assert_eq!(h, expect, "(a,b)=({a},{b})");
            }
        }
    }

    #[test]
    fn hilbert_spot_values() {
        // frozen against the brute-force isotropy search
        let q3 = LocalField::qp(3);
        let q5 = LocalField::qp(5);
        let cases = [
            (q2(), 2i64, 3i64, SymbolValue::Half),
            (q2(), -1, -1, SymbolValue::Half),
            (q2(), 1, 7, SymbolValue::Zero),
            (q3, 3, 3, SymbolValue::Half),
            (q5, 2, 5, SymbolValue::Half),
            (q5, 5, 5, SymbolValue::Zero),
        ];
        for (f, a, b, expect) in cases {
            assert_eq!(
                hilbert_symbol(&PadicValue::from_int(f, a), &PadicValue::from_int(f, b)).unwrap(),
                expect,
                "({a},{b}) over Q_{}",
                f.p()
            );
        }
    }

    #[test]
    fn hilbert_trivial_identities() {
        let f = q2();
        for a in [3i64, -5, 10, 7] {
            let av = PadicValue::from_int(f, a);
            assert_eq!(
                hilbert_symbol(&PadicValue::from_int(f, 1), &av).unwrap(),
                SymbolValue::Zero
            );
            assert_eq!(hilbert_symbol(&av, &av.neg()).unwrap(), SymbolValue::Zero);
        }
    }

    #[test]
    fn hensel_sqrt_17() {
        // X^2 - 17 from seed 1 over Q_2: root = 9 mod 32
        let _f = HomogeneousPoly::from_int_terms(&[(1, [2, 0, 0, 0]), (-17, [0, 2, 0, 0])]).unwrap();
        // embed as x^2 - 17 y^2, seed (1 : 1), solve for x... need leading != free
        let ctx = FieldCtx::new(2, 1, None).unwrap();
        let seed = ProjPointFq {
            coords: [
                FFElement::one(&ctx),
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
                FFElement::zero(&ctx),
            ],
        };
        // leading coordinate is x; lift with y free fails (dg/dy = -34y even);
        // so solve for x by making y the lead: swap roles via params
        let g = HomogeneousPoly::from_int_terms(&[(-17, [2, 0, 0, 0]), (1, [0, 2, 0, 0])]).unwrap();
        let lifted = hensel_lift(&g, &seed, 1, &[], q2(), 5).unwrap();
        let x1 = &lifted.coords[1];
        let v = x1.valuation().unwrap();
        assert_eq!(v, Some(0));
        // residue mod 32 must be 9 or 23 (Newton from seed 1 gives 9)
        match &x1.repr {
            Repr::Approx(Approx::Unit { unit, .. }) => {
                assert_eq!((unit % BigInt::from(32)).to_u64().unwrap(), 9);
            }
            Repr::Exact { a, .. } => panic!("unexpected exact root {a}"),
            _ => panic!("unreadable root"),
        }
    }

    #[test]
    fn hensel_exact_point_ex57() {
        let f = crate::surface::tests_support::ex57();
        let ctx = FieldCtx::new(2, 1, None).unwrap();
        let seed = ProjPointFq {
            coords: [
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
            ],
        };
        let lifted = hensel_lift(&f, &seed, 1, &[], q2(), 12).unwrap();
        // f(1, y, 1, 0) = y + y^3 vanishes at y = 0 exactly
        assert!(lifted.coords[1].is_exact_zero());
    }

    #[test]
    fn hensel_rejects_off_surface_seed() {
        // (1:0:0:0) does not lie on {x+y+z+w = 0} mod 2
        let f = HomogeneousPoly::from_int_terms(&[
            (1, [1, 0, 0, 0]),
            (1, [0, 1, 0, 0]),
            (1, [0, 0, 1, 0]),
            (1, [0, 0, 0, 1]),
        ])
        .unwrap();
        let ctx = FieldCtx::new(2, 1, None).unwrap();
        let seed = ProjPointFq {
            coords: [
                FFElement::one(&ctx),
                FFElement::zero(&ctx),
                FFElement::zero(&ctx),
                FFElement::zero(&ctx),
            ],
        };
        assert!(hensel_lift(&f, &seed, 2, &[], q2(), 8).is_err());
    }

    #[test]
    fn quadratic_field_construction() {
        let f = LocalField::quadratic(2, 2).unwrap();
        assert_eq!(f.e(), 2);
        let f3 = LocalField::quadratic(2, 3).unwrap();
        assert_eq!(f3.e(), 2); // 2 ramifies for d = 3 mod 4
        let f5 = LocalField::quadratic(2, 5).unwrap();
        assert_eq!(f5.e(), 1); // unramified
        assert!(LocalField::quadratic(2, 17).is_err()); // square in Q_2
        assert!(LocalField::quadratic(2, 12).is_err()); // not squarefree
    }

    #[test]
    fn ext_squares() {
        // over Q_2(sqrt 2): 2 = pi^2 * unit... v(2) = 2, and 2 = (sqrt2)^2 is a square
        let f = LocalField::quadratic(2, 2).unwrap();
        let two = PadicValue::from_int(f, 2);
        assert!(is_square(&two).unwrap().is_square);
        // -1 is not a square there (residue field F_2, norm considerations);
        // verified by the bounded search
        let m1 = PadicValue::from_int(f, -1);
        assert!(!is_square(&m1).unwrap().is_square);
        // 7 = -1 mod 8 is not a square in Q_2 but (1+sqrt2)^2 * u with u = 1 mod pi^5...
        // just check consistency: squares of field elements are squares
        let t = PadicValue::exact(f, q_of_int(3), q_of_int(1));
        assert!(is_square(&t.mul(&t).unwrap()).unwrap().is_square);
    }

    #[test]
    fn approx_arithmetic_tracks_precision() {
        let f = q2();
        let a = PadicValue::approx_unit(f, 0, BigInt::from(9), 10);
        let b = PadicValue::from_int(f, -9);
        let s = a.add(&b).unwrap();
        // 9 - 9 = 0 to precision 10
        assert!(matches!(
            s.repr,
            Repr::Approx(Approx::ZeroToPrec { abs }) if abs == 10
        ));
        assert_eq!(s.valuation().unwrap_err(), PadicError::InsufficientPrecision);
        let p = a.mul(&a).unwrap();
        assert_eq!(p.valuation().unwrap(), Some(0));
    }
}
