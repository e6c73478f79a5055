//! Dense univariate polynomials over a field-like scalar type.
//!
//! Coefficients are stored in ascending degree order and the trailing
//! (highest) stored coefficient is nonzero unless the polynomial is zero.
//! Works for both binary64 complex scalars and exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Scalar requirements for polynomial arithmetic: a commutative field
/// with clonable elements.
pub trait Field:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
}

impl<T> Field for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + std::ops::Div<Output = T>
{
}

#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: T) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    /// `z` itself.
    pub fn ident() -> Self {
        Poly::from_coeffs(vec![T::zero(), T::one()])
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[T]) -> Self {
        let mut p = Poly::one();
        for r in roots {
            p = &p * &Poly::from_coeffs(vec![-r.clone(), T::one()]);
        }
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        let mut k = T::one();
        for c in &self.coeffs[1..] {
            out.push(c.clone() * k.clone());
            k = k + T::one();
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, s: &T) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Euclidean division: `self = b * quotient + remainder` with
    /// `deg remainder < deg b`. Exact for exact scalars.
    pub fn divrem(&self, b: &Poly<T>) -> Result<(Poly<T>, Poly<T>)> {
        if b.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead = b.coeffs[db].clone();
        let mut rem = self.coeffs.clone();
        let dq = rem.len() - 1 - db;
        let mut quo = vec![T::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let q = rem[k + db].clone() / lead.clone();
            quo[k] = q.clone();
            for j in 0..=db {
                rem[k + j] = rem[k + j].clone() - q.clone() * b.coeffs[j].clone();
            }
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    /// Quotient by the linear factor `z - c`, discarding the remainder
    /// (which is `self(c)`, zero when `c` is a root).
    pub fn div_linear(&self, c: &T) -> Poly<T> {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() - 1];
        let mut acc = T::zero();
        for k in (0..self.coeffs.len() - 1).rev() {
            acc = self.coeffs[k + 1].clone() + acc * c.clone();
            out[k] = acc.clone();
        }
        Poly::from_coeffs(out)
    }
}

/// Lagrange interpolation through `(nodes[i], values[i])`.
///
/// Nodes must be pairwise distinct; the colliding pair is named otherwise.
pub fn lagrange_interpolate<T: Field + fmt::Debug>(nodes: &[T], values: &[T]) -> Result<Poly<T>> {
    assert_eq!(nodes.len(), values.len(), "nodes/values length mismatch");
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            if nodes[i] == nodes[j] {
                return Err(Error::RepeatedNode(i, j, format!("{:?}", nodes[i])));
            }
        }
    }
    let mut acc = Poly::zero();
    for i in 0..nodes.len() {
        let mut basis = Poly::one();
        let mut denom = T::one();
        for j in 0..nodes.len() {
            if j == i {
                continue;
            }
            basis = &basis * &Poly::from_coeffs(vec![-nodes[j].clone(), T::one()]);
            denom = denom * (nodes[i].clone() - nodes[j].clone());
        }
        acc = &acc + &basis.scale(&(values[i].clone() / denom));
    }
    Ok(acc)
}

impl<T: Field> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        Poly::from_coeffs(out)
    }
}

impl<T: Field> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - rhs.coeff(k));
        }
        Poly::from_coeffs(out)
    }
}

impl<T: Field> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<T: Field> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Field + fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{c:?}*z^{k}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly<crate::scalars::C> {
    /// Max-norm of the coefficient vector.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// All complex roots by the Durand-Kerner iteration (deterministic
    /// starting circle). Intended for the small degrees of this crate.
    pub fn complex_roots(&self) -> Vec<crate::scalars::C> {
        use crate::scalars::C;
        let n = match self.degree() {
            None | Some(0) => return vec![],
            Some(n) => n,
        };
        if n == 1 {
            return vec![-self.coeffs[0] / self.coeffs[1]];
        }
        let lead = self.coeffs[n];
        let monic: Vec<C> = self.coeffs.iter().map(|c| c / lead).collect();
        let radius = 1.0
            + monic[..n]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        let mut z: Vec<C> = (0..n)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.39;
                C::new(radius * angle.cos(), radius * angle.sin())
            })
            .collect();
        let eval = |x: C| -> C {
            let mut acc = C::new(0.0, 0.0);
            for c in monic.iter().rev() {
                acc = acc * x + c;
            }
            acc
        };
        for _ in 0..200 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let mut denom = C::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        denom *= z[i] - z[j];
                    }
                }
                let step = eval(z[i]) / denom;
                z[i] -= step;
                moved = moved.max(step.norm());
            }
            if moved < 1e-14 * radius {
                break;
            }
        }
        z
    }

    /// True when the leading coefficient is 1 within `tol` and the degree
    /// matches.
    pub fn is_monic_of_degree(&self, d: usize, tol: f64) -> bool {
        self.degree() == Some(d)
            && (self.coeffs[d] - crate::scalars::C::new(1.0, 0.0)).norm() <= tol
    }

    pub fn from_real_coeffs(cs: &[f64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&x| crate::scalars::C::new(x, 0.0)).collect())
    }

    /// Largest imaginary part over all coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{frac, Fraction, C};

    fn rp(cs: &[f64]) -> Poly<C> {
        Poly::from_real_coeffs(cs)
    }

    #[test]
    fn divrem_long_division_oracle() {
        // (z^3 - z - 3/8) / (z + 1/2) = z^2 - z/2 - 3/4, remainder 0;
        // expected values from long division by hand.
        let a = rp(&[-0.375, -1.0, 0.0, 1.0]);
        let b = rp(&[0.5, 1.0]);
        let (q, r) = a.divrem(&b).unwrap();
        let expect = rp(&[-0.75, -0.5, 1.0]);
        assert!((&q - &expect).norm_inf() < 1e-15);
        assert!(r.norm_inf() < 1e-15);
    }

    #[test]
    fn divrem_unit_and_degree_order() {
        let p = rp(&[1.0, 2.0, 3.0]);
        let (q, r) = p.divrem(&Poly::one()).unwrap();
        assert_eq!(q, p);
        assert!(r.is_zero());

        // z^2 / z^3 -> (0, z^2)
        let z2 = rp(&[0.0, 0.0, 1.0]);
        let z3 = rp(&[0.0, 0.0, 0.0, 1.0]);
        let (q, r) = z2.divrem(&z3).unwrap();
        assert!(q.is_zero());
        assert_eq!(r, z2);
    }

    #[test]
    fn divrem_zero_divisor_rejected() {
        let p = rp(&[1.0]);
        assert!(matches!(p.divrem(&Poly::zero()), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn divrem_exact_over_fractions() {
        // Reconstruction a = b*q + r must be bitwise exact for rationals.
        let a: Poly<Fraction> = Poly::from_coeffs(vec![frac(1, 3), frac(-2, 7), frac(5, 2), frac(1, 1)]);
        let b: Poly<Fraction> = Poly::from_coeffs(vec![frac(-1, 4), frac(2, 3)]);
        let (q, r) = a.divrem(&b).unwrap();
        let back = &(&b * &q) + &r;
        assert_eq!(back, a);
        assert!(r.deg0() < b.deg0() || r.is_zero());
    }

    #[test]
    fn lagrange_line_and_single_node() {
        let p = lagrange_interpolate(
            &[C::new(0.0, 0.0), C::new(1.0, 0.0)],
            &[C::new(1.0, 0.0), C::new(3.0, 0.0)],
        )
        .unwrap();
        assert!((&p - &rp(&[1.0, 2.0])).norm_inf() < 1e-14);

        let c = lagrange_interpolate(&[C::new(4.5, 0.0)], &[C::new(-7.0, 0.0)]).unwrap();
        assert!((&c - &rp(&[-7.0])).norm_inf() < 1e-14);
    }

    #[test]
    fn lagrange_parabola_vandermonde_oracle() {
        // nodes (0,1,2), values (0,1,4): solving the 3x3 Vandermonde system
        // by hand gives exactly z^2.
        let p = lagrange_interpolate(
            &[C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(2.0, 0.0)],
            &[C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(4.0, 0.0)],
        )
        .unwrap();
        assert!((&p - &rp(&[0.0, 0.0, 1.0])).norm_inf() < 1e-13);
    }

    #[test]
    fn lagrange_repeated_nodes_named() {
        let err = lagrange_interpolate(
            &[C::new(2.0, 0.0), C::new(3.0, 0.0), C::new(2.0, 0.0)],
            &[C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
        )
        .unwrap_err();
        match err {
            Error::RepeatedNode(i, j, _) => assert_eq!((i, j), (0, 2)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn div_linear_matches_divrem() {
        let p = rp(&[2.0, -3.0, 0.5, 1.0]);
        let c = C::new(1.25, 0.0);
        let q = p.div_linear(&c);
        let (q2, _r) = p.divrem(&rp(&[-1.25, 1.0])).unwrap();
        assert!((&q - &q2).norm_inf() < 1e-14);
    }

    #[test]
    fn from_roots_expands() {
        let p = Poly::from_roots(&[C::new(1.0, 0.0), C::new(-2.0, 0.0)]);
        // (z-1)(z+2) = z^2 + z - 2
        assert!((&p - &rp(&[-2.0, 1.0, 1.0])).norm_inf() < 1e-14);
    }

    #[test]
    fn complex_roots_reproduce_inputs() {
        let roots = [C::new(1.5, 0.0), C::new(-0.25, 1.0), C::new(-0.25, -1.0), C::new(4.0, 0.0)];
        let p = Poly::from_roots(&roots);
        let mut found = p.complex_roots();
        for r in roots {
            let idx = found
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - r).norm().total_cmp(&(b.1 - r).norm()))
                .map(|(i, _)| i)
                .unwrap();
            assert!((found[idx] - r).norm() < 1e-9, "missing root {r}");
            found.remove(idx);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn divrem_reconstructs_dividend(
                a in proptest::collection::vec(-5.0f64..5.0, 1..7),
                b in proptest::collection::vec(-5.0f64..5.0, 1..5),
            ) {
                let pa = Poly::from_real_coeffs(&a);
                let pb = Poly::from_real_coeffs(&b);
                prop_assume!(!pb.is_zero());
                prop_assume!(pb.leading().map(|l| l.norm() > 0.2).unwrap_or(false));
                let (q, r) = pa.divrem(&pb).unwrap();
                let back = &(&pb * &q) + &r;
                // Relative to the working magnitudes: ill-conditioned
                // divisors amplify the quotient.
                let scale = pa
                    .norm_inf()
                    .max(pb.norm_inf() * q.norm_inf())
                    .max(1.0);
                prop_assert!((&back - &pa).norm_inf() <= 1e-12 * scale);
                prop_assert!(r.is_zero() || r.deg0() < pb.deg0());
            }
        }
    }
}
