//! Exact arithmetic in F_p and F_{p^n} for small p and n.
//!
//! A [`FieldCtx`] fixes the prime, the extension degree and a verified-irreducible
//! modulus; elements are immutable coefficient vectors reduced against that
//! context. Contexts are passed explicitly, there is no global registry.

use std::fmt;
use std::sync::Arc;

/// Supported characteristics.
pub const SUPPORTED_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Largest extension degree with a built-in modulus.
pub const MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    UnsupportedSize { p: u64, n: usize },
    ReducibleModulus,
    DivisionByZero,
    ContextMismatch,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::UnsupportedSize { p, n } => {
                write!(f, "unsupported field size p={p}, n={n}")
            }
            FieldError::ReducibleModulus => write!(f, "modulus polynomial is reducible"),
            FieldError::DivisionByZero => write!(f, "division by zero field element"),
            FieldError::ContextMismatch => write!(f, "operands belong to different field contexts"),
        }
    }
}

impl std::error::Error for FieldError {}

/// Context for F_{p^n}: modulus is monic of degree n, stored low-to-high
/// including the leading 1. For n = 1 the modulus is just `t`.
#[derive(Debug)]
pub struct FieldCtx {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
    q: usize,
    mul_table: Option<Vec<u16>>,
    inv_table: Option<Vec<u16>>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}
impl Eq for FieldCtx {}

fn builtin_modulus(p: u64, n: usize) -> Option<Vec<u64>> {
    // low-to-high with leading coefficient included
    match (p, n) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),          // t^2+t+1
        (2, 3) => Some(vec![1, 1, 0, 1]),       // t^3+t+1
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),    // t^4+t+1
        (3, 2) => Some(vec![1, 0, 1]),          // t^2+1
        (3, 4) => Some(vec![1, 0, 1, 1, 1]),    // t^4+t^3+t^2+1
        (5, 2) => Some(vec![2, 0, 1]),          // t^2+2
        _ => None,
    }
}

// small univariate helpers over F_p, vectors low-to-high, trimmed
fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

fn prem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    // m monic
    let mut r = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + (p - c % p) * mc) % p;
            }
        }
        r.pop();
        ptrim(&mut r);
    }
    r
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        // make b monic for prem
        let lead = *b.last().unwrap();
        let inv = mod_inv_u64(lead, p);
        let bm: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
        let r = prem(&a, &bm, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

/// Irreducibility of a monic degree-n polynomial over F_p: gcd with t^{p^k} - t
/// must be constant for all k <= n/2.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    if n == 1 {
        return true;
    }
    // t^{p^k} mod m by iterating the p-th power map on t
    let mut tp = vec![0, 1]; // t
    for _k in 1..=(n / 2) {
        // raise to p-th power mod m
        let mut acc = vec![1u64];
        let mut base = tp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = prem(&pmul(&acc, &base, p), m, p);
            }
            base = prem(&pmul(&base, &base, p), m, p);
            e >>= 1;
        }
        tp = acc;
        // gcd(m, tp - t)
        let mut diff = tp.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        ptrim(&mut diff);
        let g = pgcd(m, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Build F_{p^n}. With `modulus` omitted, a built-in irreducible is used
    /// (available for n = 1 and the small pairs that occur in practice).
    /// The modulus, given or built-in, is verified irreducible.
    pub fn new(p: u64, n: usize, modulus: Option<&[u64]>) -> Result<Arc<FieldCtx>, FieldError> {
        if !SUPPORTED_PRIMES.contains(&p) || n == 0 || n > MAX_DEGREE {
            return Err(FieldError::UnsupportedSize { p, n });
        }
        let modulus = match modulus {
            Some(m) => {
                let mut m: Vec<u64> = m.iter().map(|&c| c % p).collect();
                ptrim(&mut m);
                if m.len() != n + 1 {
                    return Err(FieldError::ReducibleModulus);
                }
                // normalize monic
                let inv = mod_inv_u64(*m.last().unwrap(), p);
                m.iter_mut().for_each(|c| *c = *c * inv % p);
                m
            }
            None => builtin_modulus(p, n).ok_or(FieldError::UnsupportedSize { p, n })?,
        };
        if !is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus);
        }
        let q = (p as usize).pow(n as u32);
        let mut ctx = FieldCtx {
            p,
            n,
            modulus,
            q,
            mul_table: None,
            inv_table: None,
        };
        if q <= 256 {
            ctx.build_tables();
        }
        Ok(Arc::new(ctx))
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let ca = self.unpack(a);
            for b in a..q {
                let cb = self.unpack(b);
                let prod = self.mul_raw(&ca, &cb);
                let idx = self.pack(&prod);
                mul[a * q + b] = idx as u16;
                mul[b * q + a] = idx as u16;
            }
        }
        let mut inv = vec![0u16; q];
        for a in 1..q {
            for b in 1..q {
                if mul[a * q + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        self.mul_table = Some(mul);
        self.inv_table = Some(inv);
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn order(&self) -> usize {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub(crate) fn pack(&self, coeffs: &[u8; 4]) -> usize {
        let mut x = 0usize;
        for i in (0..self.n).rev() {
            x = x * self.p as usize + coeffs[i] as usize;
        }
        x
    }

    pub(crate) fn unpack(&self, mut idx: usize) -> [u8; 4] {
        let mut c = [0u8; 4];
        for slot in c.iter_mut().take(self.n) {
            *slot = (idx % self.p as usize) as u8;
            idx /= self.p as usize;
        }
        c
    }

    fn mul_raw(&self, a: &[u8; 4], b: &[u8; 4]) -> [u8; 4] {
        let p = self.p;
        let n = self.n;
        let mut prod = [0u64; 7];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] += a[i] as u64 * b[j] as u64;
            }
        }
        prod.iter_mut().for_each(|c| *c %= p);
        for d in (n..(2 * n - 1).max(n)).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for (i, &mc) in self.modulus.iter().enumerate().take(n) {
                    prod[d - n + i] = (prod[d - n + i] + (p - c) * mc) % p;
                }
            }
        }
        let mut out = [0u8; 4];
        for i in 0..n {
            out[i] = prod[i] as u8;
        }
        out
    }
}

/// Element of F_{p^n}: canonical reduced coefficient vector over its context.
#[derive(Clone)]
pub struct FFElement {
    ctx: Arc<FieldCtx>,
    coeffs: [u8; 4],
}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FF({})", self)
    }
}

impl fmt::Display for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.n == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for i in 0..self.ctx.n {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "t")?,
                1 => write!(f, "{c}t")?,
                _ if c == 1 => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.coeffs == other.coeffs
    }
}
impl Eq for FFElement {}

impl FFElement {
    pub fn new(ctx: &Arc<FieldCtx>, coeffs: &[u64]) -> FFElement {
        let mut c = [0u8; 4];
        for (i, &x) in coeffs.iter().enumerate().take(ctx.n) {
            c[i] = (x % ctx.p) as u8;
        }
        FFElement {
            ctx: Arc::clone(ctx),
            coeffs: c,
        }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> FFElement {
        FFElement {
            ctx: Arc::clone(ctx),
            coeffs: [0; 4],
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> FFElement {
        FFElement::from_int(ctx, 1)
    }

    /// Image of an integer under Z -> F_p -> F_{p^n}.
    pub fn from_int(ctx: &Arc<FieldCtx>, k: i64) -> FFElement {
        let p = ctx.p as i64;
        let r = ((k % p) + p) % p;
        let mut c = [0u8; 4];
        c[0] = r as u8;
        FFElement {
            ctx: Arc::clone(ctx),
            coeffs: c,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs[..self.ctx.n]
    }

    /// Packed index in [0, q), the base-p digit encoding of the coefficients.
    pub fn index(&self) -> usize {
        self.ctx.pack(&self.coeffs)
    }

    pub fn from_index(ctx: &Arc<FieldCtx>, idx: usize) -> FFElement {
        FFElement {
            ctx: Arc::clone(ctx),
            coeffs: ctx.unpack(idx % ctx.q),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; 4]
    }

    pub fn is_one(&self) -> bool {
        self.index() == 1
    }

    fn check_ctx(&self, other: &FFElement) -> Result<(), FieldError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &FFElement) -> FFElement {
        self.check_ctx(other).expect("field context mismatch");
        let p = self.ctx.p as u8;
        let mut c = [0u8; 4];
        for i in 0..self.ctx.n {
            c[i] = (self.coeffs[i] + other.coeffs[i]) % p;
        }
        FFElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: c,
        }
    }

    pub fn neg(&self) -> FFElement {
        let p = self.ctx.p as u8;
        let mut c = [0u8; 4];
        for i in 0..self.ctx.n {
            c[i] = (p - self.coeffs[i]) % p;
        }
        FFElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: c,
        }
    }

    pub fn sub(&self, other: &FFElement) -> FFElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FFElement) -> FFElement {
        self.check_ctx(other).expect("field context mismatch");
        if let Some(t) = &self.ctx.mul_table {
            let idx = t[self.index() * self.ctx.q + other.index()];
            return FFElement::from_index(&self.ctx, idx as usize);
        }
        FFElement {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.ctx.mul_raw(&self.coeffs, &other.coeffs),
        }
    }

    pub fn inv(&self) -> Result<FFElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.ctx.inv_table {
            return Ok(FFElement::from_index(&self.ctx, t[self.index()] as usize));
        }
        Ok(self.pow(self.ctx.q as u64 - 2))
    }

    pub fn div(&self, other: &FFElement) -> Result<FFElement, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> FFElement {
        let mut r = FFElement::one(&self.ctx);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// a -> a^p, the arithmetic Frobenius of the context.
    pub fn frobenius(&self) -> FFElement {
        self.pow(self.ctx.p)
    }

    /// Inverse of Frobenius; the unique p-th root.
    pub fn pth_root(&self) -> FFElement {
        let mut r = self.clone();
        for _ in 1..self.ctx.n {
            r = r.frobenius();
        }
        r
    }

    /// Whether the element is a square in F_q^x (true for 0 as well).
    pub fn is_square(&self) -> bool {
        if self.is_zero() || self.ctx.p == 2 {
            return true;
        }
        self.pow((self.ctx.q as u64 - 1) / 2).is_one()
    }
}
