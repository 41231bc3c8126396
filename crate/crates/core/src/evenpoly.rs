//! Sparse even polynomials in `x`, stored by exponent.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::lambdas::LambdaTable;

/// Relative size of the division remainder that is still accepted as zero.
pub const REMAINDER_TOL: f64 = 1e-9;

/// `sum c_k x^k` over even `k >= 0`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvenPoly {
    coeffs: BTreeMap<u32, f64>,
}

impl EvenPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(0, c)
    }

    /// `c x^exponent`; panics on an odd exponent.
    pub fn monomial(exponent: u32, c: f64) -> Self {
        assert!(exponent.is_multiple_of(2), "odd exponent {exponent}");
        let mut p = Self::zero();
        p.add_term(exponent, c);
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            if e % 2 != 0 {
                return Err(Error::OddExponent(e));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exponent: u32, c: f64) {
        let slot = self.coeffs.entry(exponent).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest exponent present, 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// Smallest exponent present, 0 for the zero polynomial.
    pub fn lowest_exponent(&self) -> u32 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    pub fn coeff(&self, exponent: u32) -> f64 {
        self.coeffs.get(&exponent).copied().unwrap_or(0.0)
    }

    pub fn leading_coeff(&self) -> f64 {
        self.coeffs.values().next_back().copied().unwrap_or(0.0)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, f64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * factor))).expect("even exponents")
    }

    /// Horner evaluation in `u = x^2`, skipping absent powers with `powi`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_in_square(x * x)
    }

    /// Evaluates with `u = x^2` supplied directly.
    pub fn eval_in_square(&self, u: f64) -> f64 {
        let mut iter = self.coeffs.iter().rev();
        let Some((&top, &c_top)) = iter.next() else {
            return 0.0;
        };
        let mut acc = c_top;
        let mut k = top / 2;
        for (&e, &c) in iter {
            let j = e / 2;
            acc = acc * u.powi((k - j) as i32) + c;
            k = j;
        }
        acc * u.powi(k as i32)
    }

    pub fn derivative_at(&self, x: f64) -> f64 {
        self.terms()
            .filter(|&(e, _)| e > 0)
            .map(|(e, c)| e as f64 * c * x.powi(e as i32 - 1))
            .sum()
    }

    /// Returns `s` with `q(x) = (A^2 - x^2) s(x)`.
    ///
    /// Synthetic division in `u = x^2` by `(A^2 - u)`, from the top
    /// coefficient down. The remainder must vanish to within
    /// [`REMAINDER_TOL`] of the largest coefficient magnitude.
    pub fn divide_by_a2_minus_x2(&self, amplitude: f64) -> Result<EvenPoly> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let a2 = amplitude * amplitude;
        let top = self.degree() / 2;
        // s has half-degrees 0..top-1; s_{k-1} = a2 s_k - q_k
        let mut s = vec![0.0; top as usize];
        let mut carry = 0.0;
        for k in (1..=top).rev() {
            carry = a2 * carry - self.coeff(2 * k);
            s[(k - 1) as usize] = carry;
        }
        let remainder = self.coeff(0) - a2 * carry;
        let scale = self.coeffs.values().fold(0.0_f64, |m, c| m.max(c.abs()));
        if remainder.abs() > REMAINDER_TOL * scale {
            return Err(Error::NonzeroRemainder { remainder, scale });
        }
        Self::from_terms(s.into_iter().enumerate().map(|(j, c)| (2 * j as u32, c)))
    }

    /// Replaces each `x^{2k}` by `A^{2k} lambda_{2k}` and sums.
    pub fn lambda_substitute(&self, amplitude: f64, table: &LambdaTable) -> Result<f64> {
        self.terms().try_fold(0.0, |acc, (e, c)| {
            let lambda = table.get(e / 2).ok_or(Error::MissingLambda(e))?;
            Ok(acc + c * amplitude.powi(e as i32) * lambda)
        })
    }
}

impl Add for &EvenPoly {
    type Output = EvenPoly;
    fn add(self, rhs: &EvenPoly) -> EvenPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Neg for &EvenPoly {
    type Output = EvenPoly;
    fn neg(self) -> EvenPoly {
        self.scale(-1.0)
    }
}

impl Sub for &EvenPoly {
    type Output = EvenPoly;
    fn sub(self, rhs: &EvenPoly) -> EvenPoly {
        self + &(-rhs)
    }
}

impl Mul for &EvenPoly {
    type Output = EvenPoly;
    fn mul(self, rhs: &EvenPoly) -> EvenPoly {
        let mut out = EvenPoly::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambdas::{lambda_closed, LambdaTable};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn poly(terms: &[(u32, f64)]) -> EvenPoly {
        EvenPoly::from_terms(terms.iter().copied()).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly(&[(2, 0.5)]).eval(2.0), 2.0);
        assert_eq!(poly(&[(2, 0.5), (4, 0.25)]).eval(1.0), 0.75);
        assert_eq!(poly(&[(0, 3.5), (6, 2.0)]).eval(0.0), 3.5);
        assert_eq!(EvenPoly::zero().eval(4.0), 0.0);
        assert_eq!(poly(&[(1000, 1.0)]).eval(1.0), 1.0);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(poly(&[(2, 0.5)]).derivative_at(3.0), 3.0);
        assert_eq!(poly(&[(4, 0.25)]).derivative_at(2.0), 8.0);
        assert_eq!(poly(&[(0, 1.0), (2, 0.5), (8, 3.0)]).derivative_at(0.0), 0.0);
    }

    #[test]
    fn canonical_form() {
        let p = poly(&[(2, 1.0), (4, 2.0)]);
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
        assert_eq!(poly(&[(2, 1.0), (2, -1.0), (4, 1.0)]).len(), 1);
        assert_eq!(EvenPoly::from_terms([(3, 1.0)]), Err(Error::OddExponent(3)));
    }

    #[test]
    fn divide_harmonic() {
        // (4 - x^2)/2 over (4 - x^2)
        let q = poly(&[(0, 2.0), (2, -0.5)]);
        assert_eq!(q.divide_by_a2_minus_x2(2.0).unwrap(), EvenPoly::constant(0.5));
    }

    #[test]
    fn divide_pure_quartic() {
        let q = poly(&[(0, 0.25), (4, -0.25)]);
        assert_eq!(q.divide_by_a2_minus_x2(1.0).unwrap(), poly(&[(0, 0.25), (2, 0.25)]));
    }

    #[test]
    fn divide_pure_sextic_by_reconstruction() {
        // (A^6 - x^6)/6 with A = 2: S = (1/6) sum_j x^{2j} A^{2(2-j)}
        let q = poly(&[(0, 64.0 / 6.0), (6, -1.0 / 6.0)]);
        let s = q.divide_by_a2_minus_x2(2.0).unwrap();
        let expected = poly(&[(0, 16.0 / 6.0), (2, 4.0 / 6.0), (4, 1.0 / 6.0)]);
        for e in [0, 2, 4] {
            assert_relative_eq!(s.coeff(e), expected.coeff(e), max_relative = 1e-15);
        }
        let back = &poly(&[(0, 4.0), (2, -1.0)]) * &s;
        for (e, c) in q.terms() {
            assert_relative_eq!(back.coeff(e), c, max_relative = 1e-12);
        }
    }

    #[test]
    fn divide_rejects_nonvanishing() {
        let q = poly(&[(0, 1.0), (2, -0.5)]);
        assert!(matches!(q.divide_by_a2_minus_x2(1.0), Err(Error::NonzeroRemainder { .. })));
    }

    #[test]
    fn substitute_examples() {
        let general = LambdaTable::general();
        assert_eq!(EvenPoly::constant(1.0).lambda_substitute(7.0, &general).unwrap(), 1.0);
        assert_eq!(poly(&[(2, 1.0)]).lambda_substitute(2.0, &general).unwrap(), 2.0);
        let l4 = poly(&[(4, 1.0)]).lambda_substitute(1.0, &general).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert_relative_eq!(l4, (pi2 - 6.0) / pi2, max_relative = 1e-15);
        assert_relative_eq!(l4, 0.392_072_898_145_973_4, max_relative = 1e-15);
        let special = LambdaTable::harmonic_special();
        assert_eq!(
            poly(&[(6, 1.0)]).lambda_substitute(1.0, &special),
            Err(Error::MissingLambda(6))
        );
    }

    fn arb_poly() -> impl Strategy<Value = EvenPoly> {
        prop::collection::vec((0u32..=6, -3.0f64..3.0), 1..6)
            .prop_map(|t| EvenPoly::from_terms(t.into_iter().map(|(k, c)| (2 * k, c))).unwrap())
    }

    proptest! {
        #[test]
        fn division_round_trip(p in arb_poly(), amplitude in 0.2f64..3.0) {
            // force q(A) = 0 by subtracting p(A)
            let q = &p - &EvenPoly::constant(p.eval(amplitude));
            let s = q.divide_by_a2_minus_x2(amplitude).unwrap();
            let back = &EvenPoly::from_terms([(0, amplitude * amplitude), (2, -1.0)]).unwrap() * &s;
            let scale = q.terms().fold(0.0_f64, |m, (_, c)| m.max(c.abs()));
            for e in (0..=q.degree().max(back.degree())).step_by(2) {
                prop_assert!((back.coeff(e) - q.coeff(e)).abs() <= 1e-12 * scale.max(1e-300));
            }
        }

        #[test]
        fn substitution_is_linear(p in arb_poly(), r in arb_poly(), a in -2.0f64..2.0, b in -2.0f64..2.0, amp in 0.1f64..2.0) {
            let table = LambdaTable::general();
            let combo = &p.scale(a) + &r.scale(b);
            let lhs = combo.lambda_substitute(amp, &table).unwrap();
            let rhs = a * p.lambda_substitute(amp, &table).unwrap() + b * r.lambda_substitute(amp, &table).unwrap();
            let mag: f64 = p.terms().chain(r.terms())
                .map(|(e, c)| (c * amp.powi(e as i32) * lambda_closed(e / 2)).abs())
                .sum::<f64>() * (a.abs() + b.abs()) + 1e-300;
            prop_assert!((lhs - rhs).abs() <= 1e-14 * mag);
        }

        #[test]
        fn derivative_matches_central_difference(
            terms in prop::collection::vec((1u32..=6, -2.0f64..2.0), 1..6),
            x in -3.0f64..3.0,
        ) {
            let p = EvenPoly::from_terms(terms.into_iter().map(|(k, c)| (2 * k, c))).unwrap();
            let h = 1e-6;
            let fd = (p.eval(x + h) - p.eval(x - h)) / (2.0 * h);
            let exact = p.derivative_at(x);
            // absolute floor covers points where the derivative nearly vanishes
            let scale: f64 = p.terms().map(|(e, c)| (e as f64 * c * x.abs().max(1.0).powi(e as i32 - 1)).abs()).sum();
            prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(scale * 1e-3));
        }
    }
}
