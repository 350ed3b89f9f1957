//! Univariate polynomials over Q, integer characteristic polynomials, and
//! Sturm-sequence root isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Poly::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Canonical Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm(&self) -> SturmChain {
        let mut chain = vec![self.clone()];
        let d = self.derivative();
        if !d.is_zero() {
            chain.push(d);
            loop {
                let n = chain.len();
                let r = chain[n - 2].div_rem(&chain[n - 1]).1;
                if r.is_zero() {
                    break;
                }
                chain.push(r.scale(&-BigRational::one()));
            }
        }
        SturmChain { chain }
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> BigRational {
        let Some(lead) = self.leading() else {
            return BigRational::one();
        };
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::from_integer(2.into())
    }
}

fn sign(x: &BigRational) -> Ordering {
    x.cmp(&BigRational::zero())
}

fn count_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut changes = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// A Sturm chain for a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<Poly>,
}

impl SturmChain {
    pub fn variations(&self, x: &BigRational) -> usize {
        count_changes(self.chain.iter().map(|p| sign(&p.eval(x))))
    }

    pub fn variations_pos_inf(&self) -> usize {
        count_changes(self.chain.iter().map(|p| sign(p.leading().unwrap())))
    }

    pub fn variations_neg_inf(&self) -> usize {
        count_changes(self.chain.iter().map(|p| {
            let s = sign(p.leading().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Number of distinct roots in the half-open interval `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }

    /// Number of distinct roots strictly greater than `a`.
    pub fn count_above(&self, a: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations_pos_inf())
    }

    pub fn count_all(&self) -> usize {
        self.variations_neg_inf().saturating_sub(self.variations_pos_inf())
    }
}

/// Rational interval `(lo, hi]` holding exactly one root (the largest), with no
/// root above `hi`, narrowed until `hi - lo <= width`.
pub fn isolate_largest_root(p: &Poly, width: &BigRational) -> Option<(BigRational, BigRational)> {
    let sf = p.squarefree();
    let chain = sf.sturm();
    if chain.count_all() == 0 {
        return None;
    }
    let bound = sf.root_bound();
    let mut lo = -bound.clone();
    let mut hi = bound;
    let two = BigRational::from_integer(2.into());
    loop {
        let inside = chain.count(&lo, &hi);
        if inside == 1 && &hi - &lo <= *width {
            return Some((lo, hi));
        }
        let mid = (&lo + &hi) / &two;
        if chain.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Characteristic polynomial `det(xI - A)` of a square integer matrix, lowest
/// degree first, by the Faddeev–LeVerrier recurrence with exact division.
pub fn char_poly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        let am = mat_mul(a, &next);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let (q, r) = (-trace).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev–LeVerrier division must be exact");
        coeffs[n - k] = q;
        m = next;
    }
    coeffs
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let p = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); p]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * &b[k][j];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn ints(v: &[i64]) -> Vec<Vec<BigInt>> {
        let n = (v.len() as f64).sqrt() as usize;
        (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(v[i * n + j])).collect())
            .collect()
    }

    #[test]
    fn char_poly_small() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let p = char_poly(&ints(&[2, 1, 1, 2]));
        assert_eq!(p, vec![3.into(), BigInt::from(-4), 1.into()]);
        let p = char_poly(&ints(&[0, 1, 0, 1, 0, 1, 0, 1, 0]));
        assert_eq!(p, vec![0.into(), BigInt::from(-2), 0.into(), 1.into()]);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x-2)
        let p = Poly::from_i64(&[-2, 5, -4, 1]);
        assert_eq!(p.squarefree(), Poly::from_i64(&[2, -3, 1]));
        let q = Poly::from_i64(&[-1, 1]);
        assert_eq!(p.gcd(&q), q);
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x-5)
        let p = Poly::from_i64(&[-10, 17, -8, 1]);
        let s = p.sturm();
        assert_eq!(s.count_all(), 3);
        assert_eq!(s.count(&r(0), &r(2)), 2);
        assert_eq!(s.count(&r(1), &r(2)), 1);
        assert_eq!(s.count_above(&r(5)), 0);
        assert_eq!(s.count_above(&r(4)), 1);
    }

    #[test]
    fn largest_root_isolated() {
        // x^2 - 2
        let p = Poly::from_i64(&[-2, 0, 1]);
        let w = BigRational::new(1.into(), 1_000_000.into());
        let (lo, hi) = isolate_largest_root(&p, &w).unwrap();
        assert!(p.eval(&lo) < r(0) && p.eval(&hi) > r(0));
        assert!(&hi - &lo <= w);
        assert!(isolate_largest_root(&Poly::from_i64(&[1, 0, 1]), &w).is_none());
    }

    #[test]
    fn division_identity() {
        let p = Poly::from_i64(&[3, 0, -2, 7, 1]);
        let d = Poly::from_i64(&[1, 2, 1]);
        let (q, rem) = p.div_rem(&d);
        let back: Vec<BigRational> = {
            let mut out = vec![BigRational::zero(); 5];
            for (i, a) in q.coeffs().iter().enumerate() {
                for (j, b) in d.coeffs().iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            for (i, c) in rem.coeffs().iter().enumerate() {
                out[i] += c;
            }
            out
        };
        assert_eq!(Poly::new(back), p);
    }
}
