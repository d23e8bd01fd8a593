//! Sparse polynomials over a small finite field in up to three variables
//! (u, v and an extension generator w), with exact division and a bivariate
//! gcd used to keep rational-function representations reduced.

use crate::finite_field::{FFElement, FieldCtx};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub type FExps = [u16; 3];

pub const U: usize = 0;
pub const V: usize = 1;
pub const W: usize = 2;

#[derive(Clone, PartialEq, Eq)]
pub struct FPoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<FExps, FFElement>,
}

impl fmt::Debug for FPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&["u", "v", "w"]))
    }
}

impl FPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> FPoly {
        FPoly {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> FPoly {
        FPoly::constant(FFElement::one(ctx))
    }

    pub fn constant(c: FFElement) -> FPoly {
        let ctx = Arc::clone(c.ctx());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0], c);
        }
        FPoly { ctx, terms }
    }

    pub fn var(ctx: &Arc<FieldCtx>, v: usize) -> FPoly {
        let mut e = [0u16; 3];
        e[v] = 1;
        FPoly::term(FFElement::one(ctx), e)
    }

    pub fn term(c: FFElement, e: FExps) -> FPoly {
        let ctx = Arc::clone(c.ctx());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        FPoly { ctx, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (FFElement, FExps)>>(
        ctx: &Arc<FieldCtx>,
        it: I,
    ) -> FPoly {
        let mut p = FPoly::zero(ctx);
        for (c, e) in it {
            p.add_term(c, e);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn add_term(&mut self, c: FFElement, e: FExps) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&[0, 0, 0]))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&FExps, &FFElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self, var: usize) -> i64 {
        self.terms
            .keys()
            .map(|e| e[var] as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn add(&self, other: &FPoly) -> FPoly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(c.clone(), *e);
        }
        out
    }

    pub fn neg(&self) -> FPoly {
        FPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &FPoly) -> FPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FPoly) -> FPoly {
        let mut out = FPoly::zero(&self.ctx);
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                out.add_term(c1.mul(c2), [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]]);
            }
        }
        out
    }

    pub fn scale(&self, c: &FFElement) -> FPoly {
        if c.is_zero() {
            return FPoly::zero(&self.ctx);
        }
        FPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(e, x)| (*e, x.mul(c))).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> FPoly {
        let mut r = FPoly::one(&self.ctx);
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

    pub fn derivative(&self, var: usize) -> FPoly {
        let mut out = FPoly::zero(&self.ctx);
        let p = self.ctx.p() as i64;
        for (e, c) in self.terms.iter() {
            if e[var] > 0 {
                let k = FFElement::from_int(&self.ctx, e[var] as i64 % p);
                if !k.is_zero() {
                    let mut e2 = *e;
                    e2[var] -= 1;
                    out.add_term(c.mul(&k), e2);
                }
            }
        }
        out
    }

    /// Coefficient of w^k as a polynomial in u, v.
    pub fn w_coefficient(&self, k: u16) -> FPoly {
        FPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[W] == k)
                .map(|(e, c)| ([e[0], e[1], 0], c.clone()))
                .collect(),
        }
    }

    pub fn is_w_free(&self) -> bool {
        self.terms.keys().all(|e| e[W] == 0)
    }

    pub fn mul_w_pow(&self, k: u16) -> FPoly {
        FPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| ([e[0], e[1], e[2] + k], c.clone()))
                .collect(),
        }
    }

    /// Leading coefficient with respect to w (a u,v-polynomial).
    pub fn w_leading(&self) -> FPoly {
        let d = self.degree(W);
        if d < 0 {
            FPoly::zero(&self.ctx)
        } else {
            self.w_coefficient(d as u16)
        }
    }

    /// Exact division; None when the division is not exact.
    pub fn div_exact(&self, d: &FPoly) -> Option<FPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let mut q = FPoly::zero(&self.ctx);
        let (elt, dc) = d.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let dc_inv = dc.inv().ok()?;
        while !r.is_zero() {
            let (ert, rc) = {
                let (e, c) = r.terms.iter().next_back().unwrap();
                (*e, c.clone())
            };
            if ert[0] < elt[0] || ert[1] < elt[1] || ert[2] < elt[2] {
                return None;
            }
            let e = [ert[0] - elt[0], ert[1] - elt[1], ert[2] - elt[2]];
            let c = rc.mul(&dc_inv);
            let t = FPoly::term(c.clone(), e);
            q.add_term(c, e);
            r = r.sub(&t.mul(d));
        }
        Some(q)
    }

    /// Substitute u -> u^p, v -> v^p and take p-th roots of coefficients;
    /// defined when every exponent is divisible by p (w must not occur).
    pub fn pth_root(&self) -> Option<FPoly> {
        let p = self.ctx.p() as u16;
        let mut out = FPoly::zero(&self.ctx);
        for (e, c) in self.terms.iter() {
            if e[W] != 0 || e[U] % p != 0 || e[V] % p != 0 {
                return None;
            }
            out.add_term(c.pth_root(), [e[U] / p, e[V] / p, 0]);
        }
        Some(out)
    }

    pub fn display(&self, vars: &[&str; 3]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.cmp(a.0));
        let mut s = String::new();
        for (i, (e, c)) in items.iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            let mono: Vec<String> = (0..3)
                .filter(|&v| e[v] > 0)
                .map(|v| {
                    if e[v] == 1 {
                        vars[v].to_string()
                    } else {
                        format!("{}^{}", vars[v], e[v])
                    }
                })
                .collect();
            let mono = mono.join("*");
            if mono.is_empty() {
                s.push_str(&format!("{c}"));
            } else if c.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("({c})*{mono}"));
            }
        }
        s
    }
}

// ---- univariate helpers over F_q (vectors low-to-high, trimmed) ----

fn uni_trim(v: &mut Vec<FFElement>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn uni_gcd(a: &[FFElement], b: &[FFElement], _ctx: &Arc<FieldCtx>) -> Vec<FFElement> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    uni_trim(&mut a);
    uni_trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lead_inv = b.last().unwrap().inv().unwrap();
        while a.len() >= b.len() && !a.is_empty() {
            let f = a.last().unwrap().mul(&lead_inv);
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                let t = a[shift + i].sub(&f.mul(bc));
                a[shift + i] = t;
            }
            uni_trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if a.is_empty() {
        return a;
    }
    let inv = a.last().unwrap().inv().unwrap();
    a.iter().map(|c| c.mul(&inv)).collect::<Vec<_>>()
}

fn fpoly_to_uni_u(p: &FPoly) -> Vec<FFElement> {
    let d = p.degree(U).max(-1);
    let mut out = vec![FFElement::zero(p.ctx()); (d + 1) as usize];
    for (e, c) in p.terms() {
        debug_assert!(e[V] == 0 && e[W] == 0);
        out[e[U] as usize] = c.clone();
    }
    out
}

fn uni_u_to_fpoly(v: &[FFElement], ctx: &Arc<FieldCtx>) -> FPoly {
    FPoly::from_terms(
        ctx,
        v.iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), [i as u16, 0, 0])),
    )
}

/// Representation of a u,v-polynomial as a vector in v with F_q[u] coefficients.
fn vrep(p: &FPoly) -> Vec<FPoly> {
    let d = p.degree(V);
    if d < 0 {
        return vec![];
    }
    let mut out = vec![FPoly::zero(p.ctx()); (d + 1) as usize];
    for (e, c) in p.terms() {
        debug_assert!(e[W] == 0);
        out[e[V] as usize].add_term(c.clone(), [e[U], 0, 0]);
    }
    out
}

fn vrep_to_fpoly(v: &[FPoly], ctx: &Arc<FieldCtx>) -> FPoly {
    let mut out = FPoly::zero(ctx);
    for (i, c) in v.iter().enumerate() {
        for (e, x) in c.terms() {
            out.add_term(x.clone(), [e[U], i as u16, 0]);
        }
    }
    out
}

fn vrep_content(v: &[FPoly], ctx: &Arc<FieldCtx>) -> FPoly {
    let mut g: Vec<FFElement> = vec![];
    for c in v {
        if c.is_zero() {
            continue;
        }
        g = uni_gcd(&g, &fpoly_to_uni_u(c), ctx);
    }
    uni_u_to_fpoly(&g, ctx)
}

/// Gcd of two polynomials in u, v only (w-free), monic-normalized in the
/// sense that the leading coefficient of the leading v-coefficient is 1.
pub fn gcd_uv(a: &FPoly, b: &FPoly) -> FPoly {
    let ctx = Arc::clone(a.ctx());
    debug_assert!(a.is_w_free() && b.is_w_free());
    if a.is_zero() {
        return normalize_uv(b);
    }
    if b.is_zero() {
        return normalize_uv(a);
    }
    if a.is_constant() || b.is_constant() {
        return FPoly::one(&ctx);
    }
    if a.degree(V) <= 0 && b.degree(V) <= 0 {
        let g = uni_gcd(&fpoly_to_uni_u(a), &fpoly_to_uni_u(b), &ctx);
        return uni_u_to_fpoly(&g, &ctx);
    }
    // primitive-part Euclid in v over F_q[u]
    let va = vrep(a);
    let vb = vrep(b);
    let ca = vrep_content(&va, &ctx);
    let cb = vrep_content(&vb, &ctx);
    let cg = gcd_uv(&ca, &cb);
    let prim = |p: &FPoly, c: &FPoly| p.div_exact(c).expect("content divides");
    let mut big = prim(a, &ca);
    let mut small = prim(b, &cb);
    if big.degree(V) < small.degree(V) {
        std::mem::swap(&mut big, &mut small);
    }
    loop {
        if small.is_zero() {
            break;
        }
        let r = pseudo_rem_v(&big, &small);
        big = small;
        small = match r {
            None => FPoly::zero(&ctx),
            Some(r) if r.is_zero() => FPoly::zero(&ctx),
            Some(r) => {
                let rv = vrep(&r);
                let rc = vrep_content(&rv, &ctx);
                r.div_exact(&rc).expect("content divides")
            }
        };
    }
    let gv = vrep(&big);
    let gc = vrep_content(&gv, &ctx);
    let gp = big.div_exact(&gc).expect("content divides");
    normalize_uv(&cg.mul(&gp))
}

fn normalize_uv(p: &FPoly) -> FPoly {
    if p.is_zero() {
        return p.clone();
    }
    let (_, lc) = p.terms.iter().next_back().unwrap();
    p.scale(&lc.inv().unwrap())
}

/// lc(b)^(da-db+1) * a mod b with respect to v; None if deg_v b < 0.
fn pseudo_rem_v(a: &FPoly, b: &FPoly) -> Option<FPoly> {
    let da = a.degree(V);
    let db = b.degree(V);
    if db < 0 {
        return None;
    }
    if da < db {
        return Some(a.clone());
    }
    let bv = vrep(b);
    let lb = bv.last().unwrap().clone();
    let mut r = vrep(a);
    while r.len() as i64 > db {
        let lr = r.last().unwrap().clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        let shift = r.len() - 1 - db as usize;
        // r = lb * r - lr * v^shift * b
        for coeff in r.iter_mut() {
            *coeff = coeff.mul(&lb);
        }
        for (i, bc) in bv.iter().enumerate() {
            let t = r[shift + i].sub(&lr.mul(bc));
            r[shift + i] = t;
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    Some(vrep_to_fpoly(&r, a.ctx()))
}

/// Gcd of a w-free denominator with the full w-coefficient content of a
/// numerator; the common factor of a (num, den) pair in reduced position.
pub fn common_factor(num: &FPoly, den: &FPoly) -> FPoly {
    let ctx = Arc::clone(num.ctx());
    let mut g = den.clone();
    let dw = num.degree(W);
    for k in 0..=dw.max(0) {
        if g.is_constant() {
            return FPoly::one(&ctx);
        }
        let c = num.w_coefficient(k as u16);
        if !c.is_zero() {
            g = gcd_uv(&g, &c);
        }
    }
    if num.is_zero() {
        return normalize_uv(den);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<FieldCtx> {
        FieldCtx::new(2, 1, None).unwrap()
    }
    fn f3() -> Arc<FieldCtx> {
        FieldCtx::new(3, 1, None).unwrap()
    }

    #[test]
    fn mul_and_div_exact() {
        let ctx = f3();
        let u = FPoly::var(&ctx, U);
        let v = FPoly::var(&ctx, V);
        let a = u.add(&v).pow(3);
        let b = u.add(&v);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, u.add(&v).pow(2));
        assert!(a.add(&FPoly::one(&ctx)).div_exact(&b).is_none());
        // frobenius: (u+v)^3 = u^3 + v^3 over F_3
        let expect = FPoly::from_terms(
            &ctx,
            [
                (FFElement::one(&ctx), [3, 0, 0]),
                (FFElement::one(&ctx), [0, 3, 0]),
            ],
        );
        assert_eq!(a, expect);
    }

    #[test]
    fn gcd_bivariate() {
        let ctx = f2();
        let u = FPoly::var(&ctx, U);
        let v = FPoly::var(&ctx, V);
        let one = FPoly::one(&ctx);
        let a = u.add(&v); // u+v
        let b = u.add(&one); // u+1
        let p1 = a.mul(&b);
        let p2 = a.mul(&a).mul(&u);
        let g = gcd_uv(&p1, &p2);
        assert_eq!(g, a);
        assert_eq!(gcd_uv(&b, &u), one);
    }

    #[test]
    fn gcd_with_content() {
        let ctx = f3();
        let u = FPoly::var(&ctx, U);
        let v = FPoly::var(&ctx, V);
        let one = FPoly::one(&ctx);
        // a = u(u+v)^2, b = u^2 (u+v)(v+1)
        let a = u.mul(&u.add(&v).pow(2));
        let b = u.pow(2).mul(&u.add(&v)).mul(&v.add(&one));
        let g = gcd_uv(&a, &b);
        assert_eq!(g, u.mul(&u.add(&v)));
    }

    #[test]
    fn pth_root_of_pth_power() {
        let ctx = f3();
        let u = FPoly::var(&ctx, U);
        let v = FPoly::var(&ctx, V);
        let f = u.add(&v.pow(2)).add(&FPoly::one(&ctx));
        let f3 = f.pow(3);
        assert_eq!(f3.pth_root().unwrap(), f);
        assert!(f.pth_root().is_none());
    }
}
