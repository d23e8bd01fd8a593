//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! At most four variables, exponents in an array key. This is the shared
//! backbone for surface equations in x,y,z,w and for the symbolic curve
//! substitutions in the Kummer pipeline.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub type Exps = [u16; 4];

/// Polynomial in up to four variables over Q, canonically sparse
/// (zero coefficients are never stored).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    terms: BTreeMap<Exps, BigRational>,
}

pub fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RatPoly {
    pub fn zero() -> RatPoly {
        RatPoly::default()
    }

    pub fn constant(c: BigRational) -> RatPoly {
        let mut p = RatPoly::default();
        if !c.is_zero() {
            p.terms.insert([0; 4], c);
        }
        p
    }

    pub fn var(i: usize) -> RatPoly {
        let mut e = [0u16; 4];
        e[i] = 1;
        RatPoly::term(BigRational::one(), e)
    }

    pub fn term(c: BigRational, e: Exps) -> RatPoly {
        let mut p = RatPoly::default();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (BigRational, Exps)>>(it: I) -> RatPoly {
        let mut p = RatPoly::default();
        for (c, e) in it {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, c: BigRational, e: Exps) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exps) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self
            .terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(c.clone(), *e);
        }
        out
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        let mut out = RatPoly::default();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(c1 * c2, e);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> RatPoly {
        let mut r = RatPoly::constant(BigRational::one());
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

    pub fn derivative(&self, var: usize) -> RatPoly {
        let mut out = RatPoly::default();
        for (e, c) in self.terms.iter() {
            if e[var] > 0 {
                let mut e2 = *e;
                e2[var] -= 1;
                out.add_term(c * q_int(e[var] as i64), e2);
            }
        }
        out
    }

    /// Substitute polynomials for the variables.
    pub fn substitute(&self, subs: &[RatPoly; 4]) -> RatPoly {
        let mut out = RatPoly::default();
        for (e, c) in self.terms.iter() {
            let mut t = RatPoly::constant(c.clone());
            for (v, sub) in subs.iter().enumerate() {
                if e[v] > 0 {
                    t = t.mul(&sub.pow(e[v] as u32));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluate with rational arguments.
    pub fn eval_q(&self, args: &[BigRational; 4]) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in self.terms.iter() {
            let mut t = c.clone();
            for (v, a) in args.iter().enumerate() {
                for _ in 0..e[v] {
                    t *= a;
                }
            }
            acc += t;
        }
        acc
    }

    /// Least common multiple of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = num_integer::lcm(l, c.denom().clone());
        }
        l
    }

    /// Pretty print with the given variable names.
    pub fn display(&self, vars: &[&str; 4]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        // print highest-degree terms first, stable order
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|a, b| b.0.cmp(a.0));
        for (i, (e, c)) in items.iter().enumerate() {
            let mono: Vec<String> = (0..4)
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
            let c_abs = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {} ", sign));
            }
            if mono.is_empty() {
                s.push_str(&format!("{}", c_abs));
            } else if c_abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{}*{}", c_abs, mono));
            }
        }
        s
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&["x", "y", "z", "w"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let x = RatPoly::var(0);
        let y = RatPoly::var(1);
        let f = x.add(&y).pow(2);
        let expect = RatPoly::from_terms([
            (q_int(1), [2, 0, 0, 0]),
            (q_int(2), [1, 1, 0, 0]),
            (q_int(1), [0, 2, 0, 0]),
        ]);
        assert_eq!(f, expect);
        assert_eq!(f.derivative(0), x.add(&y).scale(&q_int(2)));
        assert!(f.is_homogeneous());
        assert_eq!(f.total_degree(), Some(2));
    }

    #[test]
    fn substitution() {
        // (x+y)^2 with x -> x - y gives x^2
        let f = RatPoly::var(0).add(&RatPoly::var(1)).pow(2);
        let subs = [
            RatPoly::var(0).sub(&RatPoly::var(1)),
            RatPoly::var(1),
            RatPoly::var(2),
            RatPoly::var(3),
        ];
        assert_eq!(f.substitute(&subs), RatPoly::var(0).pow(2));
    }
}
