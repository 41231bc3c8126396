//! Even polynomial potentials and the kinematics of a particle bound in them.
//!
//! Units have rest mass and `c` equal to one, so the total energy at
//! amplitude `A` is `1 + phi(A)` and the speed at `x` follows from
//! `(1 - v^2)^(-1/2) = phi(A) - phi(x) + 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evenpoly::EvenPoly;
use crate::lambdas::LambdaTable;
use crate::scaled::ScaledReal;

/// Relative tolerance for recognizing family coefficients `1/(2n)`.
const FAMILY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `x^2/2`
    Harmonic,
    /// `x^2/2 + x^{2m}/2m`
    Augmented(u32),
    /// `sum_{n=1}^{m} x^{2n}/2n`
    Sum(u32),
    /// `x^{2m}/2m`
    Pure(u32),
    Generic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Harmonic => write!(f, "harmonic"),
            Family::Augmented(m) => write!(f, "aug:{m}"),
            Family::Sum(m) => write!(f, "sum:{m}"),
            Family::Pure(m) => write!(f, "pure:{m}"),
            Family::Generic => write!(f, "generic"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    poly: EvenPoly,
    family: Family,
    m: u32,
}

fn check_m(family: &'static str, m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::BadM { family, m });
    }
    Ok(())
}

fn inv_2n(n: u32) -> f64 {
    1.0 / (2.0 * n as f64)
}

impl Potential {
    pub fn harmonic() -> Self {
        Potential {
            poly: EvenPoly::monomial(2, 0.5),
            family: Family::Harmonic,
            m: 1,
        }
    }

    pub fn augmented(m: u32) -> Result<Self> {
        check_m("augmented", m)?;
        let poly = EvenPoly::from_terms([(2, 0.5), (2 * m, inv_2n(m))])?;
        Ok(Potential {
            poly,
            family: Family::Augmented(m),
            m,
        })
    }

    pub fn sum(m: u32) -> Result<Self> {
        check_m("sum", m)?;
        let poly = EvenPoly::from_terms((1..=m).map(|n| (2 * n, inv_2n(n))))?;
        Ok(Potential {
            poly,
            family: Family::Sum(m),
            m,
        })
    }

    pub fn pure(m: u32) -> Result<Self> {
        check_m("pure", m)?;
        Ok(Potential {
            poly: EvenPoly::monomial(2 * m, inv_2n(m)),
            family: Family::Pure(m),
            m,
        })
    }

    pub fn from_family(family: Family) -> Result<Self> {
        match family {
            Family::Harmonic => Ok(Self::harmonic()),
            Family::Augmented(m) => Self::augmented(m),
            Family::Sum(m) => Self::sum(m),
            Family::Pure(m) => Self::pure(m),
            Family::Generic => Err(Error::EmptyPotential),
        }
    }

    /// Explicit `(exponent, coefficient)` terms. The result is always tagged
    /// [`Family::Generic`]; see [`Potential::structure`].
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        Self::from_poly(EvenPoly::from_terms(terms)?)
    }

    pub fn from_poly(poly: EvenPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::EmptyPotential);
        }
        let c0 = poly.coeff(0);
        if c0 != 0.0 {
            return Err(Error::NonZeroConstant(c0));
        }
        if poly.leading_coeff() <= 0.0 {
            return Err(Error::NonPositiveLeading);
        }
        let m = poly.degree() / 2;
        Ok(Potential {
            poly,
            family: Family::Generic,
            m,
        })
    }

    pub fn poly(&self) -> &EvenPoly {
        &self.poly
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Half of the leading exponent.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Family recognized from the coefficients, regardless of how the
    /// potential was constructed.
    pub fn structure(&self) -> Family {
        if self.family != Family::Generic {
            return self.family;
        }
        let close = |e: u32, want: f64| (self.poly.coeff(e) - want).abs() <= FAMILY_TOL * want;
        let m = self.m;
        let n_terms = self.poly.len() as u32;
        if m == 1 && close(2, 0.5) {
            Family::Harmonic
        } else if m >= 2 && n_terms == 2 && close(2, 0.5) && close(2 * m, inv_2n(m)) {
            Family::Augmented(m)
        } else if m >= 3 && n_terms == m && (1..=m).all(|n| close(2 * n, inv_2n(n))) {
            Family::Sum(m)
        } else if m >= 2 && n_terms == 1 && close(2 * m, inv_2n(m)) {
            Family::Pure(m)
        } else {
            Family::Generic
        }
    }

    /// `Some(c)` when the potential is exactly `c x^2`.
    pub fn quadratic_only(&self) -> Option<f64> {
        (self.m == 1).then(|| self.poly.coeff(2))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.poly.derivative_at(x)
    }

    pub fn total_energy(&self, amplitude: f64) -> Result<f64> {
        check_amplitude(amplitude)?;
        Ok(1.0 + self.eval(amplitude))
    }

    /// Speed at position `x` for a particle turning at `amplitude`.
    pub fn velocity_at(&self, amplitude: f64, x: f64) -> Result<f64> {
        check_amplitude(amplitude)?;
        if x.abs() > amplitude {
            return Err(Error::OutOfRange { x, amplitude });
        }
        let gamma = self.eval(amplitude) - self.eval(x) + 1.0;
        Ok((1.0 - 1.0 / (gamma * gamma)).max(0.0).sqrt())
    }

    /// Speed at the origin: `sqrt(phi(A) (2 + phi(A))) / (1 + phi(A))`.
    pub fn max_velocity(&self, amplitude: f64) -> Result<f64> {
        check_amplitude(amplitude)?;
        let p = self.eval(amplitude);
        if p > 1.0 {
            let gamma = 1.0 + p;
            return Ok((1.0 - 1.0 / (gamma * gamma)).sqrt());
        }
        Ok((p * (2.0 + p)).sqrt() / (1.0 + p))
    }

    pub fn qs_pair(&self, amplitude: f64) -> Result<QsPair> {
        check_positive(amplitude)?;
        let q = &EvenPoly::constant(self.eval(amplitude)) - &self.poly;
        let s = q.divide_by_a2_minus_x2(amplitude)?;
        Ok(QsPair { q, s, amplitude })
    }

    /// Overflow-safe form of the Q/S decomposition, see [`ScaledQs`].
    pub fn scaled_qs(&self, amplitude: f64) -> Result<ScaledQs> {
        ScaledQs::new(self, amplitude)
    }
}

pub(crate) fn check_amplitude(amplitude: f64) -> Result<()> {
    if amplitude < 0.0 || amplitude.is_nan() {
        return Err(Error::NegativeAmplitude(amplitude));
    }
    Ok(())
}

pub(crate) fn check_positive(amplitude: f64) -> Result<()> {
    check_amplitude(amplitude)?;
    if amplitude == 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    Ok(())
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family != Family::Generic {
            return write!(f, "{}", self.family);
        }
        let mut first = true;
        for (e, c) in self.poly.terms() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}:{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Potential {
    type Err = Error;

    /// `harmonic | aug:m | sum:m | pure:m | exp:coeff[,exp:coeff...]`
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::ParsePotential(s.to_string());
        if s == "harmonic" {
            return Ok(Self::harmonic());
        }
        if let Some((head, tail)) = s.split_once(':') {
            let ctor: Option<fn(u32) -> Result<Self>> = match head {
                "aug" => Some(Self::augmented),
                "sum" => Some(Self::sum),
                "pure" => Some(Self::pure),
                _ => None,
            };
            if let Some(ctor) = ctor {
                return ctor(tail.trim().parse().map_err(|_| bad())?);
            }
        }
        let mut terms = Vec::new();
        for item in s.split(',') {
            let (e, c) = item.split_once(':').ok_or_else(bad)?;
            let e: u32 = e.trim().parse().map_err(|_| bad())?;
            let c: f64 = c.trim().parse().map_err(|_| bad())?;
            if !c.is_finite() {
                return Err(bad());
            }
            terms.push((e, c));
        }
        Self::from_terms(terms)
    }
}

/// `Q(x) = phi(A) - phi(x)` and `S(x) = Q(x)/(A^2 - x^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QsPair {
    pub q: EvenPoly,
    pub s: EvenPoly,
    pub amplitude: f64,
}

impl QsPair {
    /// `R(x) = S (Q + 2) / (Q + 1)^2`, the kernel of the period integral.
    pub fn kernel(&self, x: f64) -> f64 {
        let q = self.q.eval(x);
        self.s.eval(x) * (q + 2.0) / ((q + 1.0) * (q + 1.0))
    }
}

/// Q and S in the scaled variable `y = x/A`, normalized by the largest term
/// `M = max_k |c_k| A^{2k}` of the potential at the amplitude:
///
/// ```text
/// Q(x) = M q(y),   S(x) = (M / A^2) s(y),   q(y) = (1 - y^2) s(y)
/// ```
///
/// Every coefficient of `q` and `s` is of order one or smaller, so
/// evaluation stays in double range for any degree and amplitude; only `M`
/// is carried as a [`ScaledReal`].
#[derive(Debug, Clone)]
pub struct ScaledQs {
    amplitude: f64,
    scale: ScaledReal,
    q: EvenPoly,
    s: EvenPoly,
}

impl ScaledQs {
    fn new(potential: &Potential, amplitude: f64) -> Result<Self> {
        check_positive(amplitude)?;
        let a = ScaledReal::new(amplitude);
        let terms: Vec<(u32, ScaledReal)> = potential
            .poly()
            .terms()
            .map(|(e, c)| (e, a.powi(e) * c))
            .collect();
        let scale = terms
            .iter()
            .map(|&(_, t)| t.abs())
            .fold(ScaledReal::ZERO, |m, t| if t > m { t } else { m });
        let normalized: Vec<(u32, f64)> = terms
            .iter()
            .map(|&(e, t)| (e, (t / scale).to_f64_saturating()))
            .collect();
        let total: f64 = normalized.iter().map(|&(_, c)| c).sum();
        let q = EvenPoly::from_terms(
            std::iter::once((0, total)).chain(normalized.iter().map(|&(e, c)| (e, -c))),
        )?;
        let s = q.divide_by_a2_minus_x2(1.0)?;
        Ok(ScaledQs {
            amplitude,
            scale,
            q,
            s,
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// The normalizing magnitude `M`.
    pub fn scale(&self) -> ScaledReal {
        self.scale
    }

    /// Normalized `q(y)`.
    pub fn q_normalized(&self) -> &EvenPoly {
        &self.q
    }

    /// Normalized `s(y)`.
    pub fn s_normalized(&self) -> &EvenPoly {
        &self.s
    }

    fn s_factor(&self) -> ScaledReal {
        self.scale / ScaledReal::new(self.amplitude).powi(2)
    }

    /// `Q` and `S` at `x = A cos(theta)`. `Q` is formed as
    /// `A^2 sin^2(theta) S` so it keeps full relative accuracy near the
    /// turning point.
    pub fn q_s_at_theta(&self, theta: f64) -> (ScaledReal, ScaledReal) {
        let (sin, cos) = theta.sin_cos();
        let s_norm = self.s.eval_in_square(cos * cos);
        let q = self.scale * (sin * sin * s_norm);
        let s = self.s_factor() * s_norm;
        (q, s)
    }

    /// `R = S (Q + 2) / (Q + 1)^2` at `x = A cos(theta)`.
    pub fn kernel_at_theta(&self, theta: f64) -> ScaledReal {
        let (q, s) = self.q_s_at_theta(theta);
        let q1 = q + 1.0;
        s * (q + 2.0) / (q1 * q1)
    }

    /// `Q` with every `x^{2k}` replaced by `A^{2k} lambda_{2k}`.
    pub fn q_lambda(&self, table: &LambdaTable) -> Result<ScaledReal> {
        Ok(self.scale * self.q.lambda_substitute(1.0, table)?)
    }

    /// `S` with every `x^{2k}` replaced by `A^{2k} lambda_{2k}`.
    pub fn s_lambda(&self, table: &LambdaTable) -> Result<ScaledReal> {
        Ok(self.s_factor() * self.s.lambda_substitute(1.0, table)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constructors() {
        let h = Potential::harmonic();
        assert_eq!(h.m(), 1);
        assert_eq!(h.poly(), &EvenPoly::monomial(2, 0.5));

        let s3 = Potential::sum(3).unwrap();
        assert_eq!(s3.m(), 3);
        assert_eq!(
            s3.poly(),
            &EvenPoly::from_terms([(2, 0.5), (4, 0.25), (6, 1.0 / 6.0)]).unwrap()
        );

        let q: Potential = "4:0.25".parse().unwrap();
        assert_eq!(q.family(), Family::Generic);
        assert_eq!(q.m(), 2);
        assert_eq!(q.structure(), Family::Pure(2));
        assert_eq!(q.poly(), Potential::pure(2).unwrap().poly());
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(Potential::augmented(1), Err(Error::BadM { family: "augmented", m: 1 }));
        assert!(matches!(Potential::sum(0), Err(Error::BadM { .. })));
        assert!(matches!(Potential::pure(1), Err(Error::BadM { .. })));
        assert_eq!("3:1".parse::<Potential>(), Err(Error::OddExponent(3)));
        assert_eq!("2:1,4:-1".parse::<Potential>(), Err(Error::NonPositiveLeading));
        assert_eq!("2:0".parse::<Potential>(), Err(Error::EmptyPotential));
        assert_eq!("0:1,2:1".parse::<Potential>(), Err(Error::NonZeroConstant(1.0)));
        assert!(matches!("quartic".parse::<Potential>(), Err(Error::ParsePotential(_))));
        assert!(matches!("aug:x".parse::<Potential>(), Err(Error::ParsePotential(_))));
    }

    #[test]
    fn parse_grammar() {
        assert_eq!("harmonic".parse::<Potential>().unwrap(), Potential::harmonic());
        assert_eq!("aug:3".parse::<Potential>().unwrap(), Potential::augmented(3).unwrap());
        assert_eq!("sum:4".parse::<Potential>().unwrap(), Potential::sum(4).unwrap());
        assert_eq!("pure:5".parse::<Potential>().unwrap(), Potential::pure(5).unwrap());
        let g: Potential = "2:0.3, 8:3".parse().unwrap();
        assert_eq!(g.m(), 4);
        assert_eq!(g.to_string(), "2:0.3,8:3");
        assert_eq!(g.structure(), Family::Generic);
    }

    #[test]
    fn structural_recognition() {
        let cases = [
            ("2:0.5", Family::Harmonic),
            ("2:0.5,8:0.125", Family::Augmented(4)),
            ("2:0.5,4:0.25,6:0.16666666666666666", Family::Sum(3)),
            ("2:0.5,4:0.25", Family::Augmented(2)),
            ("2:1", Family::Generic),
        ];
        for (s, want) in cases {
            assert_eq!(s.parse::<Potential>().unwrap().structure(), want, "{s}");
        }
        assert_eq!("2:0.7".parse::<Potential>().unwrap().quadratic_only(), Some(0.7));
    }

    #[test]
    fn energy() {
        assert_eq!(Potential::harmonic().total_energy(2.0).unwrap(), 3.0);
        assert_eq!(Potential::sum(4).unwrap().total_energy(0.0).unwrap(), 1.0);
        assert_eq!(Potential::pure(2).unwrap().total_energy(1.0).unwrap(), 1.25);
        assert_eq!(
            Potential::harmonic().total_energy(-1.0),
            Err(Error::NegativeAmplitude(-1.0))
        );
    }

    #[test]
    fn velocities() {
        let h = Potential::harmonic();
        assert_eq!(h.velocity_at(1.5, 1.5).unwrap(), 0.0);
        assert_relative_eq!(h.velocity_at(1.0, 0.0).unwrap(), 5f64.sqrt() / 3.0, max_relative = 1e-15);
        assert!(matches!(h.velocity_at(1.0, 1.1), Err(Error::OutOfRange { .. })));
        assert_eq!(h.max_velocity(0.0).unwrap(), 0.0);
        assert!((h.max_velocity(1.0).unwrap() - 5f64.sqrt() / 3.0).abs() <= 1e-15);
        // 1 - v ~ 1/(2 phi^2) = 2e-12 at A = 1e3
        let v = h.max_velocity(1e3).unwrap();
        assert!(v < 1.0);
        assert_relative_eq!(1.0 - v, 2.0e-12, max_relative = 1e-3);
        let p = Potential::sum(3).unwrap();
        for a in [0.3, 1.0, 2.0] {
            assert_relative_eq!(p.max_velocity(a).unwrap(), p.velocity_at(a, 0.0).unwrap(), max_relative = 1e-14);
        }
    }

    #[test]
    fn velocity_decreases_outward() {
        for p in [Potential::harmonic(), Potential::pure(3).unwrap(), Potential::sum(4).unwrap()] {
            for a in [0.2, 1.0, 1.7] {
                let v: Vec<f64> = (0..=50).map(|i| p.velocity_at(a, a * i as f64 / 50.0).unwrap()).collect();
                assert!(v.windows(2).all(|w| w[1] < w[0]), "{p} at {a}");
                assert!(v.iter().all(|&x| x < 1.0));
            }
        }
    }

    #[test]
    fn qs_examples() {
        let h = Potential::harmonic().qs_pair(2.0).unwrap();
        assert_eq!(h.q.eval(1.0), 1.5);
        assert_eq!(h.s, EvenPoly::constant(0.5));

        let a = Potential::augmented(2).unwrap().qs_pair(1.0).unwrap();
        assert_eq!(a.q.eval(0.0), 0.75);
        assert_eq!(a.s.eval(0.0), 0.75);

        let p = Potential::pure(2).unwrap().qs_pair(1.0).unwrap();
        assert_eq!(p.s, EvenPoly::from_terms([(0, 0.25), (2, 0.25)]).unwrap());
        assert_eq!(p.s.degree(), 2);
    }

    #[test]
    fn qs_reconstruction_for_families() {
        for p in [
            Potential::harmonic(),
            Potential::augmented(5).unwrap(),
            Potential::sum(6).unwrap(),
            Potential::pure(4).unwrap(),
        ] {
            for a in [0.3, 1.0, 2.5] {
                let qs = p.qs_pair(a).unwrap();
                assert_eq!(qs.s.degree(), 2 * p.m() - 2);
                let back = &EvenPoly::from_terms([(0, a * a), (2, -1.0)]).unwrap() * &qs.s;
                let scale = qs.q.terms().fold(0.0_f64, |m, (_, c)| m.max(c.abs()));
                for e in (0..=2 * p.m()).step_by(2) {
                    assert!((back.coeff(e) - qs.q.coeff(e)).abs() <= 1e-12 * scale);
                }
            }
        }
    }

    #[test]
    fn scaled_qs_matches_plain() {
        for p in [Potential::harmonic(), Potential::sum(4).unwrap(), Potential::pure(3).unwrap()] {
            for a in [0.1, 1.3, 4.0] {
                let plain = p.qs_pair(a).unwrap();
                let scaled = p.scaled_qs(a).unwrap();
                for theta in [0.0, 0.2, 1.0, 1.5] {
                    let x = a * f64::cos(theta);
                    let (q, s) = scaled.q_s_at_theta(theta);
                    assert_relative_eq!(s.to_f64().unwrap(), plain.s.eval(x), max_relative = 1e-13);
                    let qv = q.to_f64().unwrap();
                    assert!((qv - plain.q.eval(x)).abs() <= 1e-13 * p.eval(a));
                    assert_relative_eq!(
                        scaled.kernel_at_theta(theta).to_f64().unwrap(),
                        plain.kernel(x),
                        max_relative = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn scaled_qs_survives_huge_degree() {
        let p = Potential::augmented(500).unwrap();
        let qs = p.scaled_qs(100.0).unwrap();
        assert!((qs.scale().ln() - (1000.0 * 100f64.ln() - 1000f64.ln())).abs() < 1e-10);
        let r = qs.kernel_at_theta(1.0);
        assert!(r.to_f64().unwrap().is_finite() && r.to_f64().unwrap() > 0.0);
    }
}
