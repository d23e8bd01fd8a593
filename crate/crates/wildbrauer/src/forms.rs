//! Differential forms over function fields of characteristic p: rational
//! fields F_q(u,v) and monogenic separable extensions F_q(u,v)[w]/(m), with
//! the de Rham differential, wedge products, the Cartier and inverse Cartier
//! operators, exactness/logarithmicity classification, and the chart 2-forms
//! of quartic surfaces.
//!
//! Cartier computations run through the decomposition g = sum g_ij^p u^i v^j
//! over the subfield of p-th powers; the reduced powers {w^{pk} mod m} serve
//! as a basis of that subfield over F_q(u^p, v^p)-coefficient data, so the
//! only linear solve is a d x d basis change cached per context.

use crate::finite_field::{FFElement, FieldCtx};
use crate::fpoly::{common_factor, gcd_uv, FPoly, U, V, W};
use crate::ratpoly::RatPoly;
use crate::surface::HomogeneousPoly;
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormsError {
    ZeroDLog,
    ContextMismatch,
    NotClosed,
    NotSeparable,
    InseparableChart,
    DivisionByZero,
    /// The modulus factored during an inversion; the context is not a field.
    ReducibleModulus,
    DegreeMismatch(String),
}

impl fmt::Display for FormsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormsError::ZeroDLog => write!(f, "dlog of zero"),
            FormsError::ContextMismatch => write!(f, "forms from different function fields"),
            FormsError::NotClosed => write!(f, "form is not closed"),
            FormsError::NotSeparable => write!(f, "extension polynomial is not separable"),
            FormsError::InseparableChart => {
                write!(f, "chart partial vanishes identically; choose another chart")
            }
            FormsError::DivisionByZero => write!(f, "division by zero rational function"),
            FormsError::ReducibleModulus => write!(f, "modulus is reducible; not a field"),
            FormsError::DegreeMismatch(s) => write!(f, "degree mismatch: {s}"),
        }
    }
}

impl std::error::Error for FormsError {}

/// Monogenic extension data: minimal polynomial of w over F_q(u,v), stored
/// with polynomial coefficients.
#[derive(Debug, Clone)]
pub struct Extension {
    pub min_poly: FPoly,
    pub degree: u16,
}

/// Function field context: F_q(u,v) or F_q(u,v)[w]/(m). The pair (u, v) is a
/// p-basis; separability of m guarantees that in the extended case.
pub struct FunctionFieldCtx {
    ground: Arc<FieldCtx>,
    var_names: [String; 3],
    ext: Option<Extension>,
    decomp: OnceLock<DecompData>,
}

impl fmt::Debug for FunctionFieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FunctionFieldCtx(F_{}({},{})",
            self.ground.order(),
            self.var_names[0],
            self.var_names[1]
        )?;
        if let Some(e) = &self.ext {
            write!(f, "[{}]/(m), deg m = {}", self.var_names[2], e.degree)?;
        }
        write!(f, ")")
    }
}

impl PartialEq for FunctionFieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground
            && self.var_names == other.var_names
            && match (&self.ext, &other.ext) {
                (None, None) => true,
                (Some(a), Some(b)) => a.min_poly == b.min_poly,
                _ => false,
            }
    }
}
impl Eq for FunctionFieldCtx {}

struct DecompData {
    /// Inverse of the basis-change matrix [coeff of w^c in w^{p k} mod m].
    binv: Vec<Vec<Frac>>,
}

// ---------------------------------------------------------------------------
// fractions of w-free polynomials
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
struct Frac {
    n: FPoly,
    d: FPoly,
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.n, self.d)
    }
}

impl Frac {
    fn new(n: FPoly, d: FPoly) -> Frac {
        assert!(!d.is_zero(), "zero denominator");
        let mut f = Frac { n, d };
        f.reduce();
        f
    }
    fn zero(ctx: &Arc<FieldCtx>) -> Frac {
        Frac {
            n: FPoly::zero(ctx),
            d: FPoly::one(ctx),
        }
    }
    fn one(ctx: &Arc<FieldCtx>) -> Frac {
        Frac {
            n: FPoly::one(ctx),
            d: FPoly::one(ctx),
        }
    }
    fn from_poly(n: FPoly) -> Frac {
        let d = FPoly::one(n.ctx());
        Frac { n, d }
    }
    fn reduce(&mut self) {
        if self.n.is_zero() {
            self.d = FPoly::one(self.n.ctx());
            return;
        }
        let g = gcd_uv(&self.n, &self.d);
        if !g.is_constant() {
            self.n = self.n.div_exact(&g).unwrap();
            self.d = self.d.div_exact(&g).unwrap();
        }
        // normalize: monic denominator
        let lc = {
            let (_, c) = self.d.terms().next_back().unwrap();
            c.clone()
        };
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            self.n = self.n.scale(&inv);
            self.d = self.d.scale(&inv);
        }
    }
    fn is_zero(&self) -> bool {
        self.n.is_zero()
    }
    fn add(&self, o: &Frac) -> Frac {
        Frac::new(
            self.n.mul(&o.d).add(&o.n.mul(&self.d)),
            self.d.mul(&o.d),
        )
    }
    fn sub(&self, o: &Frac) -> Frac {
        Frac::new(
            self.n.mul(&o.d).sub(&o.n.mul(&self.d)),
            self.d.mul(&o.d),
        )
    }
    fn mul(&self, o: &Frac) -> Frac {
        Frac::new(self.n.mul(&o.n), self.d.mul(&o.d))
    }
    fn inv(&self) -> Result<Frac, FormsError> {
        if self.is_zero() {
            return Err(FormsError::DivisionByZero);
        }
        Ok(Frac::new(self.d.clone(), self.n.clone()))
    }
}

// univariate polynomials in w with Frac coefficients, low-to-high
type WPoly = Vec<Frac>;

fn wtrim(p: &mut WPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn wpoly_of(f: &FPoly) -> WPoly {
    let d = f.degree(W);
    let mut out = Vec::new();
    for k in 0..=d.max(-1) {
        out.push(Frac::from_poly(f.w_coefficient(k as u16)));
    }
    wtrim(&mut out);
    out
}

fn wpoly_mul(a: &WPoly, b: &WPoly, ctx: &Arc<FieldCtx>) -> WPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Frac::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    wtrim(&mut out);
    out
}

/// Remainder of a by the monic-normalized b (b is made monic internally).
fn wpoly_rem(a: &WPoly, b: &WPoly) -> WPoly {
    let mut r = a.clone();
    wtrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b.last().unwrap().inv().unwrap();
    let bm: WPoly = b.iter().map(|c| c.mul(&lead_inv)).collect();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        if !lr.is_zero() {
            for (i, bc) in bm.iter().enumerate() {
                r[shift + i] = r[shift + i].sub(&lr.mul(bc));
            }
        }
        r.pop();
        wtrim(&mut r);
    }
    r
}

/// Extended gcd of a with the modulus m; returns s with s*a = g mod m and g.
fn wpoly_ext_gcd(a: &WPoly, m: &WPoly, ctx: &Arc<FieldCtx>) -> (WPoly, WPoly) {
    // (g, s): standard Euclid carrying the first Bezout coefficient
    let mut r0 = m.clone();
    let mut r1 = a.clone();
    let mut s0: WPoly = vec![];
    let mut s1: WPoly = vec![Frac::one(ctx)];
    wtrim(&mut r1);
    while !r1.is_empty() {
        // q = r0 div r1 (monic-normalized division)
        let lead_inv = r1.last().unwrap().inv().unwrap();
        let r1m: WPoly = r1.iter().map(|c| c.mul(&lead_inv)).collect();
        let mut q: WPoly = vec![Frac::zero(ctx); r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        wtrim(&mut rem);
        while rem.len() >= r1.len() && !rem.is_empty() {
            let lr = rem.last().unwrap().clone();
            let shift = rem.len() - r1.len();
            if !lr.is_zero() {
                let qc = lr.mul(&lead_inv);
                q[shift] = q[shift].add(&qc);
                for (i, bc) in r1m.iter().enumerate() {
                    rem[shift + i] = rem[shift + i].sub(&lr.mul(bc));
                }
            }
            rem.pop();
            wtrim(&mut rem);
        }
        wtrim(&mut q);
        // (r0, r1) <- (r1, r0 - q r1); (s0, s1) likewise
        let qs1 = wpoly_mul(&q, &s1, ctx);
        let mut s2 = s0.clone();
        s2.resize(s2.len().max(qs1.len()), Frac::zero(ctx));
        for (i, c) in qs1.iter().enumerate() {
            s2[i] = s2[i].sub(c);
        }
        wtrim(&mut s2);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

// ---------------------------------------------------------------------------
// rational functions of the context
// ---------------------------------------------------------------------------

/// Element of the function field: numerator reduced mod m in w, denominator
/// w-free, pair in lowest terms with monic denominator.
#[derive(Clone)]
pub struct RatFunc {
    ctx: Arc<FunctionFieldCtx>,
    num: FPoly,
    den: FPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.ctx.var_names();
        let vars = [names[0].as_str(), names[1].as_str(), names[2].as_str()];
        if self.den.is_constant() {
            write!(f, "{}", self.num.display(&vars))
        } else {
            write!(f, "({})/({})", self.num.display(&vars), self.den.display(&vars))
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx
            && self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}
impl Eq for RatFunc {}

impl FunctionFieldCtx {
    /// Pure rational function field F_q(u, v).
    pub fn rational(
        ground: &Arc<FieldCtx>,
        u_name: &str,
        v_name: &str,
    ) -> Arc<FunctionFieldCtx> {
        Arc::new(FunctionFieldCtx {
            ground: Arc::clone(ground),
            var_names: [u_name.into(), v_name.into(), "_w".into()],
            ext: None,
            decomp: OnceLock::new(),
        })
    }

    /// Extension F_q(u,v)[w]/(m); m must be separable in w.
    pub fn extension(
        ground: &Arc<FieldCtx>,
        names: [&str; 3],
        min_poly: FPoly,
    ) -> Result<Arc<FunctionFieldCtx>, FormsError> {
        let d = min_poly.degree(W);
        if d < 1 {
            return Err(FormsError::DegreeMismatch("extension degree must be >= 1".into()));
        }
        let dm = min_poly.derivative(W);
        if dm.is_zero() {
            return Err(FormsError::NotSeparable);
        }
        // squarefree check: gcd_w(m, m') must be constant
        let ctx = Arc::clone(ground);
        let g = {
            let (g, _) = wpoly_ext_gcd(&wpoly_of(&dm), &wpoly_of(&min_poly), &ctx);
            g
        };
        if g.len() > 1 {
            return Err(FormsError::NotSeparable);
        }
        Ok(Arc::new(FunctionFieldCtx {
            ground: Arc::clone(ground),
            var_names: [names[0].into(), names[1].into(), names[2].into()],
            ext: Some(Extension {
                min_poly,
                degree: d as u16,
            }),
            decomp: OnceLock::new(),
        }))
    }

    pub fn ground(&self) -> &Arc<FieldCtx> {
        &self.ground
    }
    pub fn p(&self) -> u64 {
        self.ground.p()
    }
    pub fn var_names(&self) -> &[String; 3] {
        &self.var_names
    }
    pub fn extension_data(&self) -> Option<&Extension> {
        self.ext.as_ref()
    }

    fn decomp_data(&self) -> &DecompData {
        self.decomp.get_or_init(|| {
            let ext = self.ext.as_ref().expect("decomp data needs an extension");
            let d = ext.degree as usize;
            let p = self.p() as u32;
            let m = wpoly_of(&ext.min_poly);
            let g = &self.ground;
            // R_k = w^{p k} mod m
            let mut b = vec![vec![Frac::zero(g); d]; d]; // b[c][k]
            let mut wp = vec![Frac::one(g)]; // w^0
            for k in 0..d {
                for (c, fr) in wp.iter().enumerate() {
                    b[c][k] = fr.clone();
                }
                if k + 1 < d {
                    // multiply by w^p and reduce
                    let mut shifted = vec![Frac::zero(g); p as usize];
                    shifted.extend(wp.iter().cloned());
                    wp = wpoly_rem(&shifted, &m);
                }
            }
            let binv = frac_matrix_inverse(b, g);
            DecompData { binv }
        })
    }
}

/// Gauss-Jordan inverse over the fraction field of F_q[u,v].
fn frac_matrix_inverse(mut a: Vec<Vec<Frac>>, ctx: &Arc<FieldCtx>) -> Vec<Vec<Frac>> {
    let n = a.len();
    let mut inv: Vec<Vec<Frac>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Frac::one(ctx) } else { Frac::zero(ctx) })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("basis matrix is invertible");
        a.swap(col, piv);
        inv.swap(col, piv);
        let pinv = a[col][col].inv().unwrap();
        for j in 0..n {
            a[col][j] = a[col][j].mul(&pinv);
            inv[col][j] = inv[col][j].mul(&pinv);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = a[r][j].sub(&f.mul(&a[col][j]));
                    inv[r][j] = inv[r][j].sub(&f.mul(&inv[col][j]));
                }
            }
        }
    }
    inv
}

impl RatFunc {
    fn normalized(ctx: &Arc<FunctionFieldCtx>, mut num: FPoly, mut den: FPoly) -> RatFunc {
        assert!(!den.is_zero(), "zero denominator");
        debug_assert!(den.is_w_free());
        // reduce numerator mod m when extended
        if let Some(ext) = &ctx.ext {
            let d = ext.degree as i64;
            while num.degree(W) >= d {
                let lead = num.w_leading();
                let shift = (num.degree(W) - d) as u16;
                let ml = ext.min_poly.w_leading();
                // num = ml*num - lead*w^shift*m ; den scales by ml
                num = num.mul(&ml).sub(&lead.mul_w_pow(shift).mul(&ext.min_poly));
                if !ml.is_constant() {
                    den = den.mul(&ml);
                } else {
                    // constant leading coefficient: fold into num directly
                    let c = {
                        let (_, c) = ml.terms().next_back().unwrap();
                        c.clone()
                    };
                    let cinv = c.inv().unwrap();
                    num = num.scale(&cinv);
                }
            }
        }
        if num.is_zero() {
            return RatFunc {
                ctx: Arc::clone(ctx),
                num,
                den: FPoly::one(ctx.ground()),
            };
        }
        let g = common_factor(&num, &den);
        if !g.is_constant() {
            num = num.div_w_coeffwise(&g).expect("common factor divides");
            den = den.div_exact(&g).expect("common factor divides");
        }
        let lc = {
            let (_, c) = den.terms().next_back().unwrap();
            c.clone()
        };
        if !lc.is_one() {
            let invc = lc.inv().unwrap();
            num = num.scale(&invc);
            den = den.scale(&invc);
        }
        RatFunc {
            ctx: Arc::clone(ctx),
            num,
            den,
        }
    }

    pub fn zero(ctx: &Arc<FunctionFieldCtx>) -> RatFunc {
        RatFunc {
            ctx: Arc::clone(ctx),
            num: FPoly::zero(ctx.ground()),
            den: FPoly::one(ctx.ground()),
        }
    }

    pub fn one(ctx: &Arc<FunctionFieldCtx>) -> RatFunc {
        RatFunc::from_poly(ctx, FPoly::one(ctx.ground()))
    }

    pub fn from_poly(ctx: &Arc<FunctionFieldCtx>, num: FPoly) -> RatFunc {
        RatFunc::normalized(ctx, num, FPoly::one(ctx.ground()))
    }

    pub fn from_quotient(ctx: &Arc<FunctionFieldCtx>, num: FPoly, den: FPoly) -> RatFunc {
        RatFunc::normalized(ctx, num, den)
    }

    pub fn constant(ctx: &Arc<FunctionFieldCtx>, c: FFElement) -> RatFunc {
        RatFunc::from_poly(ctx, FPoly::constant(c))
    }

    pub fn from_int(ctx: &Arc<FunctionFieldCtx>, k: i64) -> RatFunc {
        RatFunc::constant(ctx, FFElement::from_int(ctx.ground(), k))
    }

    pub fn var(ctx: &Arc<FunctionFieldCtx>, v: usize) -> RatFunc {
        RatFunc::from_poly(ctx, FPoly::var(ctx.ground(), v))
    }

    pub fn ctx(&self) -> &Arc<FunctionFieldCtx> {
        &self.ctx
    }
    pub fn num(&self) -> &FPoly {
        &self.num
    }
    pub fn den(&self) -> &FPoly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    fn check_ctx(&self, other: &RatFunc) -> Result<(), FormsError> {
        if *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(FormsError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        self.check_ctx(other).expect("context mismatch");
        RatFunc::normalized(
            &self.ctx,
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            ctx: Arc::clone(&self.ctx),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        self.check_ctx(other).expect("context mismatch");
        RatFunc::normalized(
            &self.ctx,
            self.num.mul(&other.num),
            self.den.mul(&other.den),
        )
    }

    pub fn scale(&self, c: &FFElement) -> RatFunc {
        RatFunc {
            ctx: Arc::clone(&self.ctx),
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc, FormsError> {
        if self.is_zero() {
            return Err(FormsError::DivisionByZero);
        }
        if self.num.is_w_free() {
            return Ok(RatFunc::normalized(
                &self.ctx,
                self.den.clone(),
                self.num.clone(),
            ));
        }
        // invert num modulo m via extended gcd over F_q(u,v)[w]
        let ext = self.ctx.ext.as_ref().unwrap();
        let g = self.ctx.ground();
        let m = wpoly_of(&ext.min_poly);
        let a = wpoly_of(&self.num);
        let (gcd, s) = wpoly_ext_gcd(&a, &m, g);
        if gcd.len() != 1 {
            return Err(FormsError::ReducibleModulus);
        }
        // s * num = gcd (a nonzero u,v-fraction) mod m  =>  num^{-1} = s / gcd
        let ginv = gcd[0].inv().unwrap();
        let mut out = RatFunc::zero(&self.ctx);
        for (k, c) in s.iter().enumerate() {
            let cc = c.mul(&ginv);
            let t = RatFunc::from_quotient(&self.ctx, cc.n.mul_w_pow(k as u16), cc.d.clone());
            out = out.add(&t);
        }
        // self = num/den, so 1/self = den * num^{-1}
        Ok(out.mul(&RatFunc::from_poly(&self.ctx, self.den.clone())))
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, FormsError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        let mut r = RatFunc::one(&self.ctx);
        let mut b = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        r
    }

    /// Partial derivative treating u, v, w as independent symbols.
    fn partial_raw(&self, var: usize) -> RatFunc {
        // (n/d)' = (n' d - n d')/d^2
        let n = &self.num;
        let d = &self.den;
        RatFunc::normalized(
            &self.ctx,
            n.derivative(var).mul(d).sub(&n.mul(&d.derivative(var))),
            d.mul(d),
        )
    }

    /// Total derivative coefficients (c_u, c_v) with dw eliminated through
    /// dm = 0, i.e. dw = -(m_u du + m_v dv)/m_w.
    pub fn d(&self) -> Result<DiffForm, FormsError> {
        let cu;
        let cv;
        match &self.ctx.ext {
            None => {
                cu = self.partial_raw(U);
                cv = self.partial_raw(V);
            }
            Some(ext) => {
                let fw = self.partial_raw(W);
                if fw.is_zero() {
                    cu = self.partial_raw(U);
                    cv = self.partial_raw(V);
                } else {
                    let mu = RatFunc::from_poly(&self.ctx, ext.min_poly.derivative(U));
                    let mv = RatFunc::from_poly(&self.ctx, ext.min_poly.derivative(V));
                    let mw = RatFunc::from_poly(&self.ctx, ext.min_poly.derivative(W));
                    let mw_inv = mw.inv()?;
                    cu = self
                        .partial_raw(U)
                        .sub(&fw.mul(&mu).mul(&mw_inv));
                    cv = self
                        .partial_raw(V)
                        .sub(&fw.mul(&mv).mul(&mw_inv));
                }
            }
        }
        Ok(DiffForm::one_form(&self.ctx, cu, cv))
    }

    /// dlog f = df / f.
    pub fn dlog(&self) -> Result<DiffForm, FormsError> {
        if self.is_zero() {
            return Err(FormsError::ZeroDLog);
        }
        let d = self.d()?;
        d.scale_fn(&self.inv()?)
    }

    /// Frobenius image f^p.
    pub fn frobenius_pow(&self) -> RatFunc {
        self.pow(self.ctx.p() as u32)
    }

    /// Coordinates g_ij with self = sum g_ij^p u^i v^j, 0 <= i,j < p.
    pub fn pth_power_coords(&self) -> Vec<Vec<RatFunc>> {
        let p = self.ctx.p() as usize;
        let g = self.ctx.ground();
        let mut out = vec![vec![RatFunc::zero(&self.ctx); p]; p];
        if self.is_zero() {
            return out;
        }
        // g = N D^{p-1} / D^p: decompose G = N D^{p-1}, divide coords by D
        let big_g = self.num.mul(&self.den.pow(self.ctx.p() as u32 - 1));
        let den = &self.den;
        match &self.ctx.ext {
            None => {
                let coords = decompose_uv_poly(&big_g, g, p);
                for i in 0..p {
                    for j in 0..p {
                        if !coords[i][j].is_zero() {
                            out[i][j] = RatFunc::from_quotient(
                                &self.ctx,
                                coords[i][j].clone(),
                                den.clone(),
                            );
                        }
                    }
                }
            }
            Some(ext) => {
                let d = ext.degree as usize;
                let data = self.ctx.decomp_data();
                // gamma = Binv * (w-coefficients of G)
                let gw = wpoly_of(&big_g);
                let mut gamma = vec![Frac::zero(g); d];
                for (k, gk) in gamma.iter_mut().enumerate() {
                    for (c, gc) in gw.iter().enumerate() {
                        if !gc.is_zero() {
                            *gk = gk.add(&data.binv[k][c].mul(gc));
                        }
                    }
                }
                for (k, gk) in gamma.iter().enumerate() {
                    if gk.is_zero() {
                        continue;
                    }
                    // gamma_k = A/B: decompose A*B^{p-1}, coords get /B then *w^k
                    let t = gk.n.mul(&gk.d.pow(self.ctx.p() as u32 - 1));
                    let coords = decompose_uv_poly(&t, g, p);
                    for i in 0..p {
                        for j in 0..p {
                            if coords[i][j].is_zero() {
                                continue;
                            }
                            let part = RatFunc::from_quotient(
                                &self.ctx,
                                coords[i][j].mul_w_pow(k as u16),
                                gk.d.mul(den),
                            );
                            out[i][j] = out[i][j].add(&part);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Decompose a u,v-polynomial as sum T_ij^p u^i v^j by grouping exponents
/// modulo p; exact in characteristic p.
fn decompose_uv_poly(gp: &FPoly, ground: &Arc<FieldCtx>, p: usize) -> Vec<Vec<FPoly>> {
    let mut buckets = vec![vec![FPoly::zero(ground); p]; p];
    for (e, c) in gp.terms() {
        debug_assert_eq!(e[W], 0, "decompose_uv_poly needs a w-free input");
        let i = (e[U] as usize) % p;
        let j = (e[V] as usize) % p;
        buckets[i][j].add_term(
            c.pth_root(),
            [
                ((e[U] as usize - i) / p) as u16,
                ((e[V] as usize - j) / p) as u16,
                0,
            ],
        );
    }
    buckets
}

impl FPoly {
    /// Divide every w-coefficient by the w-free divisor.
    fn div_w_coeffwise(&self, g: &FPoly) -> Option<FPoly> {
        let mut out = FPoly::zero(self.ctx());
        let dw = self.degree(W);
        for k in 0..=dw.max(0) {
            let c = self.w_coefficient(k as u16);
            if c.is_zero() {
                continue;
            }
            let q = c.div_exact(g)?;
            for (e, x) in q.terms() {
                out.add_term(x.clone(), [e[U], e[V], k as u16]);
            }
        }
        Some(out)
    }
}

// ---------------------------------------------------------------------------
// differential forms
// ---------------------------------------------------------------------------

/// A differential form of degree 0, 1 or 2: coordinates against du, dv and
/// du^dv, with dw always eliminated via the minimal polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffForm {
    ctx: Arc<FunctionFieldCtx>,
    degree: u8,
    comps: Vec<RatFunc>,
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.ctx.var_names();
        match self.degree {
            0 => write!(f, "{:?}", self.comps[0]),
            1 => write!(
                f,
                "({:?}) d{} + ({:?}) d{}",
                self.comps[0], n[0], self.comps[1], n[1]
            ),
            _ => write!(f, "({:?}) d{}^d{}", self.comps[0], n[0], n[1]),
        }
    }
}

/// Outcome of the closed/exact/logarithmic classification.
#[derive(Debug, Clone)]
pub struct FormClass {
    pub closed: bool,
    pub exact: bool,
    pub logarithmic: bool,
    pub cartier_image: Option<DiffForm>,
}

impl DiffForm {
    pub fn function(ctx: &Arc<FunctionFieldCtx>, f: RatFunc) -> DiffForm {
        DiffForm {
            ctx: Arc::clone(ctx),
            degree: 0,
            comps: vec![f],
        }
    }

    pub fn one_form(ctx: &Arc<FunctionFieldCtx>, cu: RatFunc, cv: RatFunc) -> DiffForm {
        DiffForm {
            ctx: Arc::clone(ctx),
            degree: 1,
            comps: vec![cu, cv],
        }
    }

    pub fn two_form(ctx: &Arc<FunctionFieldCtx>, c: RatFunc) -> DiffForm {
        DiffForm {
            ctx: Arc::clone(ctx),
            degree: 2,
            comps: vec![c],
        }
    }

    pub fn zero(ctx: &Arc<FunctionFieldCtx>, degree: u8) -> DiffForm {
        let n = if degree == 1 { 2 } else { 1 };
        DiffForm {
            ctx: Arc::clone(ctx),
            degree,
            comps: vec![RatFunc::zero(ctx); n],
        }
    }

    /// Raw one-form data c_u du + c_v dv + c_w dw, reduced to the (du, dv)
    /// basis through dm = 0.
    pub fn reduce_to_base(
        ctx: &Arc<FunctionFieldCtx>,
        cu: RatFunc,
        cv: RatFunc,
        cw: RatFunc,
    ) -> Result<DiffForm, FormsError> {
        if cw.is_zero() {
            return Ok(DiffForm::one_form(ctx, cu, cv));
        }
        let ext = ctx.ext.as_ref().ok_or(FormsError::ContextMismatch)?;
        let mu = RatFunc::from_poly(ctx, ext.min_poly.derivative(U));
        let mv = RatFunc::from_poly(ctx, ext.min_poly.derivative(V));
        let mw_inv = RatFunc::from_poly(ctx, ext.min_poly.derivative(W)).inv()?;
        Ok(DiffForm::one_form(
            ctx,
            cu.sub(&cw.mul(&mu).mul(&mw_inv)),
            cv.sub(&cw.mul(&mv).mul(&mw_inv)),
        ))
    }

    pub fn ctx(&self) -> &Arc<FunctionFieldCtx> {
        &self.ctx
    }
    pub fn degree(&self) -> u8 {
        self.degree
    }
    pub fn components(&self) -> &[RatFunc] {
        &self.comps
    }
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn check_deg(&self, other: &DiffForm) -> Result<(), FormsError> {
        if self.degree != other.degree || *self.ctx != *other.ctx {
            return Err(FormsError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm, FormsError> {
        self.check_deg(other)?;
        Ok(DiffForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(other.comps.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm, FormsError> {
        self.check_deg(other)?;
        Ok(DiffForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(other.comps.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
        })
    }

    pub fn neg(&self) -> DiffForm {
        DiffForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Multiply by a function.
    pub fn scale_fn(&self, f: &RatFunc) -> Result<DiffForm, FormsError> {
        Ok(DiffForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.mul(f)).collect(),
        })
    }

    /// Multiply by a ground-field constant.
    pub fn scale_const(&self, c: &FFElement) -> DiffForm {
        DiffForm {
            ctx: Arc::clone(&self.ctx),
            degree: self.degree,
            comps: self.comps.iter().map(|x| x.scale(c)).collect(),
        }
    }

    /// Exterior derivative.
    pub fn d(&self) -> Result<DiffForm, FormsError> {
        match self.degree {
            0 => self.comps[0].d(),
            1 => {
                // d(a du + b dv) = (D_u b - D_v a) du^dv
                let da = self.comps[0].d()?;
                let db = self.comps[1].d()?;
                Ok(DiffForm::two_form(
                    &self.ctx,
                    db.comps[0].sub(&da.comps[1]),
                ))
            }
            _ => Ok(DiffForm::zero(&self.ctx, 2)), // top degree in two variables
        }
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm, FormsError> {
        if *self.ctx != *other.ctx {
            return Err(FormsError::ContextMismatch);
        }
        match (self.degree, other.degree) {
            (0, _) => other.scale_fn(&self.comps[0]),
            (_, 0) => self.scale_fn(&other.comps[0]),
            (1, 1) => Ok(DiffForm::two_form(
                &self.ctx,
                self.comps[0]
                    .mul(&other.comps[1])
                    .sub(&self.comps[1].mul(&other.comps[0])),
            )),
            _ => Ok(DiffForm::zero(&self.ctx, 2)), // degree > 2 vanishes
        }
    }

    pub fn is_closed(&self) -> Result<bool, FormsError> {
        Ok(self.d()?.is_zero())
    }

    /// Cartier operator on closed forms. For 2-forms C(g du^dv) =
    /// g_{p-1,p-1} du^dv; 1-forms reduce to the 2-form case by wedging with
    /// dlog v and dlog u; 0-forms take the p-th root.
    pub fn cartier(&self) -> Result<DiffForm, FormsError> {
        if !self.is_closed()? {
            return Err(FormsError::NotClosed);
        }
        let p = self.ctx.p() as usize;
        match self.degree {
            0 => {
                let coords = self.comps[0].pth_power_coords();
                for (i, row) in coords.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        if (i, j) != (0, 0) && !c.is_zero() {
                            return Err(FormsError::NotClosed);
                        }
                    }
                }
                Ok(DiffForm::function(&self.ctx, coords[0][0].clone()))
            }
            1 => {
                let u = RatFunc::var(&self.ctx, U);
                let v = RatFunc::var(&self.ctx, V);
                // a = v * C2(P/v), b = u * C2(Q/u)
                let a = {
                    let t = self.comps[0].div(&v)?;
                    t.pth_power_coords()[p - 1][p - 1].mul(&v)
                };
                let b = {
                    let t = self.comps[1].div(&u)?;
                    t.pth_power_coords()[p - 1][p - 1].mul(&u)
                };
                Ok(DiffForm::one_form(&self.ctx, a, b))
            }
            _ => {
                let g = self.comps[0].pth_power_coords()[p - 1][p - 1].clone();
                Ok(DiffForm::two_form(&self.ctx, g))
            }
        }
    }

    /// Inverse Cartier operator, as a representative modulo exact forms:
    /// C^{-1}(a du + b dv) = a^p u^{p-1} du + b^p v^{p-1} dv and
    /// C^{-1}(g du^dv) = g^p (uv)^{p-1} du^dv.
    pub fn inverse_cartier(&self) -> DiffForm {
        let p = self.ctx.p() as u32;
        let u = RatFunc::var(&self.ctx, U);
        let v = RatFunc::var(&self.ctx, V);
        match self.degree {
            0 => DiffForm::function(&self.ctx, self.comps[0].pow(p)),
            1 => DiffForm::one_form(
                &self.ctx,
                self.comps[0].pow(p).mul(&u.pow(p - 1)),
                self.comps[1].pow(p).mul(&v.pow(p - 1)),
            ),
            _ => DiffForm::two_form(
                &self.ctx,
                self.comps[0].pow(p).mul(&u.pow(p - 1)).mul(&v.pow(p - 1)),
            ),
        }
    }

    /// Closed/exact/logarithmic classification: exact iff closed with
    /// vanishing Cartier image, logarithmic iff closed and Cartier-fixed.
    pub fn classify(&self) -> Result<FormClass, FormsError> {
        let closed = self.is_closed()?;
        if !closed {
            return Ok(FormClass {
                closed,
                exact: false,
                logarithmic: false,
                cartier_image: None,
            });
        }
        let c = self.cartier()?;
        Ok(FormClass {
            closed,
            exact: c.is_zero(),
            logarithmic: c == *self,
            cartier_image: Some(c),
        })
    }
}

// ---------------------------------------------------------------------------
// chart 2-forms of quartic surfaces
// ---------------------------------------------------------------------------

/// Dehomogenization of a surface on the chart x_p = 1, with the coordinate
/// x_q adjoined as the extension generator and the other two as u, v.
pub struct SurfaceChart {
    pub ctx: Arc<FunctionFieldCtx>,
    pub chart_p: usize,
    pub chart_q: usize,
    /// role[k]: the original coordinate x_k as an element of the field.
    coord_fns: [RatFunc; 4],
}

impl SurfaceChart {
    /// Dehomogenize `f` at x_p = 1 with extension variable x_q; the two
    /// remaining coordinates in ascending index order become u and v.
    pub fn new(
        f: &HomogeneousPoly,
        ground: &Arc<FieldCtx>,
        chart_p: usize,
        chart_q: usize,
    ) -> Result<SurfaceChart, FormsError> {
        assert!(chart_p != chart_q && chart_p < 4 && chart_q < 4);
        let others: Vec<usize> = (0..4).filter(|&k| k != chart_p && k != chart_q).collect();
        let (iu, iv) = (others[0], others[1]);
        // map coordinate k -> variable slot
        let slot_of = |k: usize| -> Option<usize> {
            if k == iu {
                Some(U)
            } else if k == iv {
                Some(V)
            } else if k == chart_q {
                Some(W)
            } else {
                None
            }
        };
        let reduce_c = |c: &num_rational::BigRational| -> Result<FFElement, FormsError> {
            let p = ground.p();
            let pb = num_bigint::BigInt::from(p);
            use num_traits::{ToPrimitive, Zero};
            if (c.denom() % &pb).is_zero() {
                return Err(FormsError::DegreeMismatch(
                    "coefficient not p-integral".into(),
                ));
            }
            let n = (((c.numer() % &pb) + &pb) % &pb).to_i64().unwrap();
            let d = (((c.denom() % &pb) + &pb) % &pb).to_i64().unwrap();
            let nf = FFElement::from_int(ground, n);
            let df = FFElement::from_int(ground, d);
            Ok(nf.mul(&df.inv().map_err(|_| FormsError::DivisionByZero)?))
        };
        let mut m = FPoly::zero(ground);
        for (e, c) in f.poly().terms() {
            let cf = reduce_c(c)?;
            if cf.is_zero() {
                continue;
            }
            let mut ex = [0u16; 3];
            for k in 0..4 {
                if let Some(s) = slot_of(k) {
                    ex[s] += e[k];
                }
            }
            m.add_term(cf, ex);
        }
        let names_all = ["x", "y", "z", "w"];
        let ctx = FunctionFieldCtx::extension(
            ground,
            [names_all[iu], names_all[iv], names_all[chart_q]],
            m,
        )
        .map_err(|e| match e {
            FormsError::NotSeparable => FormsError::InseparableChart,
            other => other,
        })?;
        let coord_fns = [
            SurfaceChart::coord(&ctx, 0, chart_p, iu, iv, chart_q),
            SurfaceChart::coord(&ctx, 1, chart_p, iu, iv, chart_q),
            SurfaceChart::coord(&ctx, 2, chart_p, iu, iv, chart_q),
            SurfaceChart::coord(&ctx, 3, chart_p, iu, iv, chart_q),
        ];
        Ok(SurfaceChart {
            ctx,
            chart_p,
            chart_q,
            coord_fns,
        })
    }

    fn coord(
        ctx: &Arc<FunctionFieldCtx>,
        k: usize,
        p: usize,
        iu: usize,
        iv: usize,
        _q: usize,
    ) -> RatFunc {
        if k == p {
            RatFunc::one(ctx)
        } else if k == iu {
            RatFunc::var(ctx, U)
        } else if k == iv {
            RatFunc::var(ctx, V)
        } else {
            RatFunc::var(ctx, W)
        }
    }

    /// The original homogeneous coordinate x_k / x_p as a field element.
    pub fn coordinate(&self, k: usize) -> &RatFunc {
        &self.coord_fns[k]
    }

    /// Evaluate a homogeneous polynomial g at the chart coordinates, i.e. the
    /// function g / x_p^{deg g} on the surface.
    pub fn eval_homogeneous(&self, g: &RatPoly) -> Result<RatFunc, FormsError> {
        let ground = self.ctx.ground();
        let mut acc = RatFunc::zero(&self.ctx);
        for (e, c) in g.terms() {
            let p = ground.p();
            let pb = num_bigint::BigInt::from(p);
            use num_traits::{ToPrimitive, Zero};
            if (c.denom() % &pb).is_zero() {
                return Err(FormsError::DegreeMismatch(
                    "coefficient not p-integral".into(),
                ));
            }
            let n = (((c.numer() % &pb) + &pb) % &pb).to_i64().unwrap();
            let d = (((c.denom() % &pb) + &pb) % &pb).to_i64().unwrap();
            let cf = FFElement::from_int(ground, n).mul(
                &FFElement::from_int(ground, d)
                    .inv()
                    .map_err(|_| FormsError::DivisionByZero)?,
            );
            if cf.is_zero() {
                continue;
            }
            let mut t = RatFunc::constant(&self.ctx, cf);
            for k in 0..4 {
                if e[k] > 0 {
                    t = t.mul(&self.coord_fns[k].pow(e[k] as u32));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// The chart 2-form of a quartic surface: for a permutation {p,q,i,j},
    /// omega_{p,q} = d(x_i/x_p) ^ d(x_j/x_p) / ((1/x_p^3) dF/dx_q), built
    /// against this chart's coordinates. Pass this chart's own q for the
    /// canonical form, or another chart pair for consistency checks.
    pub fn omega(&self, f: &HomogeneousPoly, p2: usize, q2: usize) -> Result<DiffForm, FormsError> {
        assert!(p2 != q2 && p2 < 4 && q2 < 4);
        let others: Vec<usize> = (0..4).filter(|&k| k != p2 && k != q2).collect();
        let (i, j) = (others[0], others[1]);
        let xp = &self.coord_fns[p2];
        let xp_inv = xp.inv()?;
        let di = self.coord_fns[i].mul(&xp_inv).d()?;
        let dj = self.coord_fns[j].mul(&xp_inv).d()?;
        let numerator = di.wedge(&dj)?;
        let dfq = f.derivative(q2);
        let denom = self.eval_homogeneous(&dfq)?.mul(&xp_inv.pow(3));
        if denom.is_zero() {
            return Err(FormsError::InseparableChart);
        }
        numerator.scale_fn(&denom.inv()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2ctx() -> Arc<FunctionFieldCtx> {
        let g = FieldCtx::new(2, 1, None).unwrap();
        FunctionFieldCtx::rational(&g, "u", "v")
    }

    fn f3ctx() -> Arc<FunctionFieldCtx> {
        let g = FieldCtx::new(3, 1, None).unwrap();
        FunctionFieldCtx::rational(&g, "u", "v")
    }

    #[test]
    fn leibniz_and_ddzero() {
        let ctx = f2ctx();
        let u = RatFunc::var(&ctx, U);
        let v = RatFunc::var(&ctx, V);
        let uv = u.mul(&v);
        let duv = uv.d().unwrap();
        // d(uv) = v du + u dv
        assert_eq!(duv.components()[0], v);
        assert_eq!(duv.components()[1], u);
        assert!(duv.d().unwrap().is_zero());
    }

    #[test]
    fn dlog_wedge() {
        let ctx = f3ctx();
        let u = RatFunc::var(&ctx, U);
        let v = RatFunc::var(&ctx, V);
        let w2 = u.dlog().unwrap().wedge(&v.dlog().unwrap()).unwrap();
        // (1/(uv)) du^dv
        let expect = RatFunc::one(&ctx).div(&u.mul(&v)).unwrap();
        assert_eq!(w2.components()[0], expect);
    }

    #[test]
    fn cartier_two_forms_char2() {
        let ctx = f2ctx();
        let u = RatFunc::var(&ctx, U);
        let v = RatFunc::var(&ctx, V);
        let duv = |c: RatFunc| DiffForm::two_form(&ctx, c);
        // C(uv du^dv) = du^dv
        let c1 = duv(u.mul(&v)).cartier().unwrap();
        assert_eq!(c1, duv(RatFunc::one(&ctx)));
        // C(du^dv) = 0 (exact)
        let c2 = duv(RatFunc::one(&ctx)).cartier().unwrap();
        assert!(c2.is_zero());
        // C((1/(uv)) du^dv) = itself (logarithmic)
        let log = duv(RatFunc::one(&ctx).div(&u.mul(&v)).unwrap());
        let c3 = log.cartier().unwrap();
        assert_eq!(c3, log);
    }

    #[test]
    fn inverse_cartier_formulas() {
        for ctx in [f2ctx(), f3ctx()] {
            let p = ctx.p() as u32;
            let u = RatFunc::var(&ctx, U);
            let du = RatFunc::var(&ctx, U).d().unwrap();
            // C^{-1}(du) = u^{p-1} du mod exact
            let ic = du.inverse_cartier();
            assert_eq!(ic.components()[0], u.pow(p - 1));
            // C^{-1}(dlog u) = dlog u: u^{-p} * u^{p-1} = u^{-1}
            let dlogu = RatFunc::var(&ctx, U).dlog().unwrap();
            let icl = dlogu.inverse_cartier();
            assert_eq!(icl.components()[0], u.inv().unwrap());
            // roundtrip C(C^{-1}(omega)) = omega on 2-forms
            let v = RatFunc::var(&ctx, V);
            let omega = DiffForm::two_form(&ctx, u.add(&v.pow(2)));
            assert_eq!(omega.inverse_cartier().cartier().unwrap(), omega);
        }
    }

    #[test]
    fn cartier_one_forms() {
        for ctx in [f2ctx(), f3ctx()] {
            let p = ctx.p() as u32;
            let u = RatFunc::var(&ctx, U);
            // u^{p-1} du is closed with C = du
            let form = DiffForm::one_form(&ctx, u.pow(p - 1), RatFunc::zero(&ctx));
            let c = form.cartier().unwrap();
            assert_eq!(c.components()[0], RatFunc::one(&ctx));
            assert!(c.components()[1].is_zero());
            // dlog u is fixed
            let dl = u.dlog().unwrap();
            assert_eq!(dl.cartier().unwrap(), dl);
            // du is exact: C = 0
            let du = u.d().unwrap();
            assert!(du.cartier().unwrap().is_zero());
        }
    }

    #[test]
    fn classification_examples() {
        let ctx = f2ctx();
        let u = RatFunc::var(&ctx, U);
        let v = RatFunc::var(&ctx, V);
        // du^dv: exact, not logarithmic
        let c = DiffForm::two_form(&ctx, RatFunc::one(&ctx)).classify().unwrap();
        assert!(c.closed && c.exact && !c.logarithmic);
        // dlog u ^ dlog v: logarithmic
        let l = u
            .dlog()
            .unwrap()
            .wedge(&v.dlog().unwrap())
            .unwrap()
            .classify()
            .unwrap();
        assert!(l.closed && !l.exact && l.logarithmic);
        // uv du^dv: closed, neither
        let n = DiffForm::two_form(&ctx, u.mul(&v)).classify().unwrap();
        assert!(n.closed && !n.exact && !n.logarithmic);
    }

    #[test]
    fn extension_field_inverse_and_decomposition() {
        // F_2(u,v)[w]/(w^3 + v w + u): separable (m_w = v)
        let g = FieldCtx::new(2, 1, None).unwrap();
        let m = FPoly::from_terms(
            &g,
            [
                (FFElement::one(&g), [0, 0, 3]),
                (FFElement::one(&g), [0, 1, 1]),
                (FFElement::one(&g), [1, 0, 0]),
            ],
        );
        let ctx = FunctionFieldCtx::extension(&g, ["u", "v", "w"], m).unwrap();
        let w = RatFunc::var(&ctx, W);
        let winv = w.inv().unwrap();
        assert_eq!(w.mul(&winv), RatFunc::one(&ctx));
        // p-th power decomposition roundtrip on a nontrivial element
        let u = RatFunc::var(&ctx, U);
        let v = RatFunc::var(&ctx, V);
        let f = w.mul(&u).add(&v.inv().unwrap()).add(&w.pow(2));
        let coords = f.pth_power_coords();
        let p = ctx.p() as u32;
        let mut recon = RatFunc::zero(&ctx);
        for (i, row) in coords.iter().enumerate() {
            for (j, gij) in row.iter().enumerate() {
                let t = gij
                    .pow(p)
                    .mul(&u.pow(i as u32))
                    .mul(&v.pow(j as u32));
                recon = recon.add(&t);
            }
        }
        assert_eq!(recon, f);
    }

    #[test]
    fn reduce_to_base_eliminates_dw() {
        // F_2(u,v)[w]/(w^3 + v w + u): dw = -(m_u du + m_v dv)/m_w, so the
        // raw data (0, 0, 1) must agree with d(w)
        let g = FieldCtx::new(2, 1, None).unwrap();
        let m = FPoly::from_terms(
            &g,
            [
                (FFElement::one(&g), [0, 0, 3]),
                (FFElement::one(&g), [0, 1, 1]),
                (FFElement::one(&g), [1, 0, 0]),
            ],
        );
        let ctx = FunctionFieldCtx::extension(&g, ["u", "v", "w"], m).unwrap();
        let raw = DiffForm::reduce_to_base(
            &ctx,
            RatFunc::zero(&ctx),
            RatFunc::zero(&ctx),
            RatFunc::one(&ctx),
        )
        .unwrap();
        let dw = RatFunc::var(&ctx, W).d().unwrap();
        assert_eq!(raw, dw);
    }

    #[test]
    fn separability_rejected() {
        // w^2 + u over F_2: m_w = 0
        let g = FieldCtx::new(2, 1, None).unwrap();
        let m = FPoly::from_terms(
            &g,
            [
                (FFElement::one(&g), [0, 0, 2]),
                (FFElement::one(&g), [1, 0, 0]),
            ],
        );
        assert!(matches!(
            FunctionFieldCtx::extension(&g, ["u", "v", "w"], m),
            Err(FormsError::NotSeparable)
        ));
    }
}
