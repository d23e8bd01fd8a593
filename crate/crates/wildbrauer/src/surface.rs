//! Projective hypersurfaces in P^3 over small finite fields: exact point
//! counting by chart-normalized enumeration, ordinarity of K3 reductions via
//! the counting criterion, and smooth seed points for later p-adic lifting.

use crate::finite_field::{FFElement, FieldCtx, FieldError};
use crate::ratpoly::{Exps, RatPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

pub const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    ZeroPolynomial,
    NotHomogeneous,
    /// Coefficient denominator divisible by p; no reduction mod p exists.
    BadReduction { p: u64 },
    /// The counting criterion disagrees across depths.
    InconsistentDepths,
    Field(FieldError),
}

impl fmt::Display for SurfaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceError::ZeroPolynomial => write!(f, "zero polynomial does not define a surface"),
            SurfaceError::NotHomogeneous => write!(f, "polynomial is not homogeneous"),
            SurfaceError::BadReduction { p } => {
                write!(f, "coefficient denominator divisible by {p}")
            }
            SurfaceError::InconsistentDepths => write!(
                f,
                "ordinarity criterion disagrees across depths; smooth-K3 assertion failed"
            ),
            SurfaceError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SurfaceError {}

impl From<FieldError> for SurfaceError {
    fn from(e: FieldError) -> Self {
        SurfaceError::Field(e)
    }
}

/// Homogeneous polynomial in x, y, z, w with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    poly: RatPoly,
    degree: u32,
}

impl fmt::Debug for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.display(&VAR_NAMES))
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.display(&VAR_NAMES))
    }
}

impl HomogeneousPoly {
    pub fn new(poly: RatPoly) -> Result<HomogeneousPoly, SurfaceError> {
        if poly.is_zero() {
            return Err(SurfaceError::ZeroPolynomial);
        }
        if !poly.is_homogeneous() {
            return Err(SurfaceError::NotHomogeneous);
        }
        let degree = poly.total_degree().unwrap();
        Ok(HomogeneousPoly { poly, degree })
    }

    /// Build from integer-coefficient terms (coefficient, [i,j,k,l]).
    pub fn from_int_terms(terms: &[(i64, Exps)]) -> Result<HomogeneousPoly, SurfaceError> {
        HomogeneousPoly::new(RatPoly::from_terms(
            terms
                .iter()
                .map(|(c, e)| (BigRational::from_integer(BigInt::from(*c)), *e)),
        ))
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn derivative(&self, var: usize) -> RatPoly {
        self.poly.derivative(var)
    }

    /// Reduce coefficient-wise into the given field (through F_p).
    pub fn reduce(&self, ctx: &Arc<FieldCtx>) -> Result<ReducedSurface, SurfaceError> {
        let p = ctx.p();
        let to_ff = |c: &BigRational| -> Result<FFElement, SurfaceError> {
            let pb = BigInt::from(p);
            if (c.denom() % &pb).is_zero() {
                return Err(SurfaceError::BadReduction { p });
            }
            let n = c.numer() % &pb;
            let d = c.denom() % &pb;
            let n = ((n.clone() % &pb) + &pb) % &pb;
            let d = ((d.clone() % &pb) + &pb) % &pb;
            let n = n.to_u64().unwrap();
            let d = d.to_u64().unwrap();
            let nf = FFElement::from_int(ctx, n as i64);
            let df = FFElement::from_int(ctx, d as i64);
            Ok(nf.mul(&df.inv()?))
        };
        let mut terms = Vec::new();
        for (e, c) in self.poly.terms() {
            let cf = to_ff(c)?;
            if !cf.is_zero() {
                terms.push((cf, *e));
            }
        }
        let mut partials: Vec<Vec<(FFElement, Exps)>> = Vec::new();
        for v in 0..4 {
            let d = self.poly.derivative(v);
            let mut dt = Vec::new();
            for (e, c) in d.terms() {
                let cf = to_ff(c)?;
                if !cf.is_zero() {
                    dt.push((cf, *e));
                }
            }
            partials.push(dt);
        }
        Ok(ReducedSurface { terms, partials })
    }
}

/// A surface reduced to a fixed finite field, with its partials, ready for
/// fast chart enumeration through packed element indices.
pub struct ReducedSurface {
    terms: Vec<(FFElement, Exps)>,
    partials: Vec<Vec<(FFElement, Exps)>>,
}

/// Normalized projective point: first nonzero coordinate equals 1.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjPointFq {
    pub coords: [FFElement; 4],
}

impl fmt::Debug for ProjPointFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}:{}:{}:{})",
            self.coords[0], self.coords[1], self.coords[2], self.coords[3]
        )
    }
}

impl ProjPointFq {
    /// Index of the leading (first nonzero) coordinate.
    pub fn leading_index(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).unwrap()
    }
}

/// Evaluator over packed indices with precomputed power tables per exponent.
struct FastEval {
    q: usize,
    /// pow[e][idx] = element(idx)^e, for every exponent appearing in the terms
    pow: Vec<Vec<u16>>,
    /// terms as (coeff index, exps)
    terms: Vec<(usize, Exps)>,
    /// additive table idx: add[a*q + b]
    add: Vec<u16>,
    mul: Vec<u16>,
}

impl FastEval {
    fn new(ctx: &Arc<FieldCtx>, terms: &[(FFElement, Exps)]) -> FastEval {
        let q = ctx.order();
        let max_e = terms
            .iter()
            .flat_map(|(_, e)| e.iter())
            .copied()
            .max()
            .unwrap_or(0) as usize;
        let mut pow = vec![vec![0u16; q]; max_e + 1];
        for idx in 0..q {
            let a = FFElement::from_index(ctx, idx);
            let mut acc = FFElement::one(ctx);
            pow[0][idx] = acc.index() as u16;
            for row in pow.iter_mut().skip(1) {
                acc = acc.mul(&a);
                row[idx] = acc.index() as u16;
            }
        }
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            let fa = FFElement::from_index(ctx, a);
            for b in 0..q {
                let fb = FFElement::from_index(ctx, b);
                add[a * q + b] = fa.add(&fb).index() as u16;
                mul[a * q + b] = fa.mul(&fb).index() as u16;
            }
        }
        FastEval {
            q,
            pow,
            terms: terms.iter().map(|(c, e)| (c.index(), *e)).collect(),
            add,
            mul,
        }
    }

    #[inline]
    fn eval(&self, p: [usize; 4]) -> usize {
        let q = self.q;
        let mut acc = 0usize;
        for (c, e) in &self.terms {
            let mut t = *c;
            for v in 0..4 {
                if e[v] > 0 {
                    t = self.mul[t * q + self.pow[e[v] as usize][p[v]] as usize] as usize;
                }
            }
            acc = self.add[acc * q + t] as usize;
        }
        acc
    }
}

/// Visit every projective point exactly once: x=1 first (y,z,w free), then
/// x=0,y=1, then x=y=0,z=1, then (0:0:0:1).
fn for_each_projective_point<F: FnMut([usize; 4])>(q: usize, mut f: F) {
    for y in 0..q {
        for z in 0..q {
            for w in 0..q {
                f([1, y, z, w]);
            }
        }
    }
    for z in 0..q {
        for w in 0..q {
            f([0, 1, z, w]);
        }
    }
    for w in 0..q {
        f([0, 0, 1, w]);
    }
    f([0, 0, 0, 1]);
}

/// Exact number of projective points of {f = 0} in P^3(F_q).
pub fn count_points(f: &HomogeneousPoly, ctx: &Arc<FieldCtx>) -> Result<u64, SurfaceError> {
    let red = f.reduce(ctx)?;
    let ev = FastEval::new(ctx, &red.terms);
    let mut cnt = 0u64;
    for_each_projective_point(ctx.order(), |p| {
        if ev.eval(p) == 0 {
            cnt += 1;
        }
    });
    Ok(cnt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Ordinarity {
    Ordinary,
    NonOrdinary,
}

/// Counting-criterion report: a K3 reduction is ordinary iff every listed
/// count is not congruent to 1 mod p.
#[derive(Debug, Clone, serde::Serialize)]
pub struct OrdinarityReport {
    pub counts: Vec<(usize, u64)>,
    pub residues: Vec<u64>,
    pub verdict: Ordinarity,
}

/// Decide ordinarity of the reduction of {f=0} (asserted smooth K3) at p,
/// counting points over F_{p^n} for each n in `depths`.
pub fn is_ordinary_k3(
    f: &HomogeneousPoly,
    p: u64,
    depths: &[usize],
) -> Result<OrdinarityReport, SurfaceError> {
    assert!(!depths.is_empty(), "depths must be non-empty");
    let mut counts = Vec::new();
    let mut residues = Vec::new();
    for &n in depths {
        let ctx = FieldCtx::new(p, n, None)?;
        let c = count_points(f, &ctx)?;
        counts.push((n, c));
        residues.push(c % p);
    }
    let ordinary: Vec<bool> = residues.iter().map(|&r| r != 1).collect();
    if ordinary.iter().any(|&o| o) && ordinary.iter().any(|&o| !o) {
        return Err(SurfaceError::InconsistentDepths);
    }
    Ok(OrdinarityReport {
        counts,
        residues,
        verdict: if ordinary[0] {
            Ordinarity::Ordinary
        } else {
            Ordinarity::NonOrdinary
        },
    })
}

/// Seed points for Hensel lifting: every F_q-point of {f=0} together with the
/// index of a non-leading coordinate whose partial derivative is a unit there.
/// Points where all partials vanish are reported separately as visible
/// singularities (a warning, not an error).
#[derive(Debug)]
pub struct SeedReport {
    pub seeds: Vec<(ProjPointFq, usize)>,
    pub singular_points: Vec<ProjPointFq>,
}

pub fn smooth_seeds(f: &HomogeneousPoly, ctx: &Arc<FieldCtx>) -> Result<SeedReport, SurfaceError> {
    let red = f.reduce(ctx)?;
    let ev = FastEval::new(ctx, &red.terms);
    let dev: Vec<FastEval> = (0..4).map(|v| FastEval::new(ctx, &red.partials[v])).collect();
    let mut seeds = Vec::new();
    let mut singular = Vec::new();
    for_each_projective_point(ctx.order(), |p| {
        if ev.eval(p) != 0 {
            return;
        }
        let lead = p.iter().position(|&c| c != 0).unwrap();
        let point = ProjPointFq {
            coords: [
                FFElement::from_index(ctx, p[0]),
                FFElement::from_index(ctx, p[1]),
                FFElement::from_index(ctx, p[2]),
                FFElement::from_index(ctx, p[3]),
            ],
        };
        // Euler's relation forces the leading partial to vanish whenever all
        // non-leading ones do, so searching non-leading indices loses nothing.
        let mut free = None;
        for v in 0..4 {
            if v != lead && dev[v].eval(p) != 0 {
                free = Some(v);
                break;
            }
        }
        match free {
            Some(v) => seeds.push((point, v)),
            None => {
                if (0..4).all(|v| dev[v].eval(p) == 0) {
                    singular.push(point);
                } else {
                    // only the leading partial survives; cannot happen on f=0
                    singular.push(point);
                }
            }
        }
    });
    Ok(SeedReport {
        seeds,
        singular_points: singular,
    })
}


#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<FieldCtx> {
        FieldCtx::new(2, 1, None).unwrap()
    }

    fn ex57_surface() -> HomogeneousPoly {
        super::tests_support::ex57()
    }

    #[test]
    fn zero_poly_rejected() {
        assert_eq!(
            HomogeneousPoly::new(RatPoly::zero()).unwrap_err(),
            SurfaceError::ZeroPolynomial
        );
    }

    #[test]
    fn hyperplane_count_is_p2_plus_p_plus_1() {
        let f = HomogeneousPoly::from_int_terms(&[(1, [1, 0, 0, 0])]).unwrap();
        assert_eq!(count_points(&f, &f2()).unwrap(), 7);
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(count_points(&f, &f4).unwrap(), 16 + 4 + 1);
    }

    #[test]
    fn quartic_monomial_over_f3() {
        // x^4 has the same zero locus as the hyperplane x = 0
        let f = HomogeneousPoly::from_int_terms(&[(1, [4, 0, 0, 0])]).unwrap();
        let f3 = FieldCtx::new(3, 1, None).unwrap();
        assert_eq!(count_points(&f, &f3).unwrap(), 13);
    }

    #[test]
    fn ex57_count_matches_enumeration_oracle() {
        // frozen by an independent brute-force enumeration
        let f = ex57_surface();
        assert_eq!(count_points(&f, &f2()).unwrap(), 10);
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(count_points(&f, &f4).unwrap(), 34);
    }

    #[test]
    fn full_enumeration_cross_check() {
        // chart-normalized count of {f=0} agrees with counting all nonzero
        // 4-tuples and dividing orbit sizes by q-1
        let f = ex57_surface();
        for (p, n) in [(2u64, 1usize), (3, 1), (2, 2)] {
            let ctx = FieldCtx::new(p, n, None).unwrap();
            let q = ctx.order();
            let red = f.reduce(&ctx).unwrap();
            let ev = FastEval::new(&ctx, &red.terms);
            let mut affine = 0u64;
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        for d in 0..q {
                            if (a, b, c, d) != (0, 0, 0, 0) && ev.eval([a, b, c, d]) == 0 {
                                affine += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(affine % (q as u64 - 1).max(1), 0);
            assert_eq!(
                affine / (q as u64 - 1).max(1),
                count_points(&f, &ctx).unwrap()
            );
        }
    }

    #[test]
    fn count_invariant_under_variable_permutation() {
        let f = ex57_surface();
        let base = count_points(&f, &f2()).unwrap();
        // a transposition and a 4-cycle generate S_4; spot check several
        let perms: [[usize; 4]; 4] = [[1, 0, 2, 3], [3, 0, 1, 2], [2, 3, 0, 1], [0, 3, 2, 1]];
        for perm in perms {
            let g = RatPoly::from_terms(f.poly().terms().map(|(e, c)| {
                let mut e2 = [0u16; 4];
                for v in 0..4 {
                    e2[perm[v]] = e[v];
                }
                (c.clone(), e2)
            }));
            let g = HomogeneousPoly::new(g).unwrap();
            assert_eq!(count_points(&g, &f2()).unwrap(), base);
        }
    }

    #[test]
    fn ordinarity_paper_surfaces() {
        let ord = |f: &HomogeneousPoly, p: u64, depths: &[usize]| {
            is_ordinary_k3(f, p, depths).unwrap().verdict
        };
        assert_eq!(ord(&ex57_surface(), 2, &[1, 2]), Ordinarity::Ordinary);
        let t_odd = HomogeneousPoly::from_int_terms(&[
            (1, [3, 1, 0, 0]),
            (1, [0, 3, 1, 0]),
            (1, [0, 0, 3, 1]),
            (1, [0, 0, 0, 4]),
            (1, [1, 1, 1, 1]),
        ])
        .unwrap();
        assert_eq!(ord(&t_odd, 2, &[1, 2]), Ordinarity::Ordinary);
        let t_2mod4 = HomogeneousPoly::from_int_terms(&[
            (1, [3, 1, 0, 0]),
            (1, [0, 3, 1, 0]),
            (1, [0, 0, 3, 1]),
            (1, [0, 0, 0, 4]),
        ])
        .unwrap();
        assert_eq!(ord(&t_2mod4, 2, &[1, 2]), Ordinarity::NonOrdinary);
    }

    #[test]
    fn seeds_on_hyperplane_all_carry_index_x() {
        let f = HomogeneousPoly::from_int_terms(&[(1, [1, 0, 0, 0])]).unwrap();
        let rep = smooth_seeds(&f, &f2()).unwrap();
        assert_eq!(rep.seeds.len(), 7);
        assert!(rep.seeds.iter().all(|(_, v)| *v == 0));
        assert!(rep.singular_points.is_empty());
    }

    #[test]
    fn fermat_quartic_char2_has_no_seeds() {
        let f = HomogeneousPoly::from_int_terms(&[
            (1, [4, 0, 0, 0]),
            (1, [0, 4, 0, 0]),
            (1, [0, 0, 4, 0]),
            (1, [0, 0, 0, 4]),
        ])
        .unwrap();
        let rep = smooth_seeds(&f, &f2()).unwrap();
        assert!(rep.seeds.is_empty());
        assert!(!rep.singular_points.is_empty());
    }

    #[test]
    fn ex57_seed_at_1010_is_free_in_y() {
        let f = ex57_surface();
        let rep = smooth_seeds(&f, &f2()).unwrap();
        let ctx = f2();
        let target: Vec<u8> = vec![1, 0, 1, 0];
        let found = rep.seeds.iter().find(|(pt, _)| {
            pt.coords
                .iter()
                .map(|c| c.coeffs()[0])
                .collect::<Vec<u8>>()
                == target
        });
        let (_, free) = found.expect("(1:0:1:0) must be a smooth seed");
        assert_eq!(*free, 1, "dF/dy = x^3 + y^2 z + xzw evaluates to 1 there");
        let _ = ctx;
    }
}
