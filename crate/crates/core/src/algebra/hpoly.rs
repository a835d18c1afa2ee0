//! Homogeneous polynomials in the two pencil indeterminates `(mu, lambda)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::roots;
use super::scalar::Scalar;
use super::upoly::{self, UPoly};
use crate::error::{Error, Result};

/// `sum_j coeffs[j] * mu^(degree - j) * lambda^j`.
///
/// The zero polynomial is stored as a single zero coefficient (degree 0).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomoPoly2 {
    coeffs: Vec<Scalar>,
}

impl HomoPoly2 {
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "homogeneous polynomial needs a coefficient"
        );
        if coeffs.iter().all(Scalar::is_zero) {
            return HomoPoly2::zero();
        }
        HomoPoly2 { coeffs }
    }

    pub fn zero() -> Self {
        HomoPoly2 {
            coeffs: vec![Scalar::ZERO],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        HomoPoly2::new(vec![c])
    }

    pub fn one() -> Self {
        HomoPoly2::constant(Scalar::ONE)
    }

    /// `mu * x + lambda`.
    pub fn linear(x: &Scalar) -> Self {
        HomoPoly2::new(vec![x.clone(), Scalar::ONE])
    }

    /// `mu^k`.
    pub fn mu_power(k: usize) -> Self {
        let mut coeffs = vec![Scalar::ZERO; k + 1];
        coeffs[0] = Scalar::ONE;
        HomoPoly2 { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Multiplicity of `mu` as a factor.
    pub fn mu_multiplicity(&self) -> usize {
        match upoly::degree(&self.coeffs) {
            Some(d) => self.degree() - d,
            None => 0,
        }
    }

    /// Set `mu = 1`.
    pub fn dehomogenize(&self) -> UPoly {
        upoly::trim(self.coeffs.clone())
    }

    /// Inverse of [`dehomogenize`](Self::dehomogenize) at a given total degree.
    pub fn homogenize(p: &[Scalar], degree: usize) -> Self {
        let p = upoly::trim(p.to_vec());
        if p.is_empty() {
            return HomoPoly2::zero();
        }
        assert!(p.len() <= degree + 1, "degree too small to homogenize");
        let mut coeffs = p;
        coeffs.resize(degree + 1, Scalar::ZERO);
        HomoPoly2 { coeffs }
    }

    pub fn eval(&self, mu: &Scalar, lambda: &Scalar) -> Scalar {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| &(c * &mu.pow((d - j) as u32)) * &lambda.pow(j as u32))
            .sum()
    }

    pub fn mul(&self, other: &HomoPoly2) -> HomoPoly2 {
        if self.is_zero() || other.is_zero() {
            return HomoPoly2::zero();
        }
        let mut coeffs = vec![Scalar::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if !a.is_zero() && !b.is_zero() {
                    let p = a * b;
                    coeffs[i + j] += &p;
                }
            }
        }
        HomoPoly2 { coeffs }
    }

    pub fn pow(&self, e: usize) -> HomoPoly2 {
        (0..e).fold(HomoPoly2::one(), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, k: &Scalar) -> HomoPoly2 {
        HomoPoly2::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Exact quotient, `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &HomoPoly2) -> Option<HomoPoly2> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(HomoPoly2::zero());
        }
        if divisor.degree() > self.degree() {
            return None;
        }
        if divisor.mu_multiplicity() > self.mu_multiplicity() {
            return None;
        }
        let q = upoly::div_exact(&self.dehomogenize(), &divisor.dehomogenize())?;
        Some(HomoPoly2::homogenize(&q, self.degree() - divisor.degree()))
    }

    /// Scale so the coefficient of the highest power of `lambda` present is
    /// one (for a pure `mu^k` that is the `mu^k` coefficient).
    pub fn normalize(&self) -> HomoPoly2 {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self
            .coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .expect("nonzero polynomial");
        let inv = lead.inv().expect("nonzero");
        HomoPoly2 {
            coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.is_zero()
            || self
                .coeffs
                .iter()
                .rev()
                .find(|c| !c.is_zero())
                .is_some_and(Scalar::is_one)
    }
}

/// Greatest common divisor, normalized with [`HomoPoly2::normalize`].
/// `gcd(p, 0) = normalize(p)`.
pub fn hpoly_gcd(p: &HomoPoly2, q: &HomoPoly2) -> HomoPoly2 {
    if p.is_zero() {
        return q.normalize();
    }
    if q.is_zero() {
        return p.normalize();
    }
    let mu = p.mu_multiplicity().min(q.mu_multiplicity());
    let g = upoly::gcd(&p.dehomogenize(), &q.dehomogenize());
    let d = upoly::degree(&g).unwrap_or(0);
    HomoPoly2::homogenize(&g, d + mu)
}

/// A divisor location on the projective line: `Finite(x)` stands for the
/// factor `mu*x + lambda`, `Infinity` for a power of `mu`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum ProjectivePoint {
    Finite(Scalar),
    Infinity,
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectivePoint::Finite(x) => write!(f, "{x}"),
            ProjectivePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// `p = constant * mu^mu_power * prod (mu*x + lambda)^m * residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactorization {
    pub constant: Scalar,
    pub mu_power: usize,
    /// `(x, multiplicity)` sorted by `x`.
    pub roots: Vec<(Scalar, usize)>,
    /// Normalized cofactor with no linear factor over `Q(i)`.
    pub residual: HomoPoly2,
}

impl LinearFactorization {
    pub fn fully_factored(&self) -> bool {
        self.residual.is_constant()
    }

    pub fn expand(&self) -> HomoPoly2 {
        let mut acc = HomoPoly2::mu_power(self.mu_power).scale(&self.constant);
        for (x, m) in &self.roots {
            acc = acc.mul(&HomoPoly2::linear(x).pow(*m));
        }
        acc.mul(&self.residual)
    }
}

pub fn hpoly_linear_factorization(p: &HomoPoly2) -> Result<LinearFactorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mu_power = p.mu_multiplicity();
    let f = p.dehomogenize();
    let constant = f.last().expect("nonzero").clone();
    let (lambda_roots, residual) = roots::gaussian_rational_roots(&f);
    // lambda = r  <=>  factor (lambda - r) = (mu*(-r) + lambda)
    let mut roots: Vec<(Scalar, usize)> = lambda_roots.into_iter().map(|(r, m)| (-r, m)).collect();
    roots.sort();
    let rd = upoly::degree(&residual).unwrap_or(0);
    Ok(LinearFactorization {
        constant,
        mu_power,
        roots,
        residual: HomoPoly2::homogenize(&residual, rd),
    })
}

const MU: &str = "mu";
const LAMBDA: &str = "lambda";

fn monomial(d: usize, j: usize) -> String {
    let mut parts = Vec::new();
    match d - j {
        0 => {}
        1 => parts.push(MU.to_string()),
        e => parts.push(format!("{MU}^{e}")),
    }
    match j {
        0 => {}
        1 => parts.push(LAMBDA.to_string()),
        e => parts.push(format!("{LAMBDA}^{e}")),
    }
    parts.join("*")
}

impl fmt::Display for HomoPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.degree();
        let mut terms = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = monomial(d, j);
            let term = match (mono.is_empty(), c.is_one(), (-c).is_one()) {
                (true, _, _) => format!("({c})"),
                (false, true, _) => mono,
                (false, _, true) => format!("-{mono}"),
                _ => format!("({c})*{mono}"),
            };
            terms.push(term);
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for HomoPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(cs: &[i64]) -> HomoPoly2 {
        HomoPoly2::new(cs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    // mu*lambda = [0, 1, 0]; lambda^2 = [0, 0, 1]
    #[test]
    fn gcd_examples() {
        assert_eq!(hpoly_gcd(&hp(&[0, 1, 0]), &hp(&[0, 0, 1])), hp(&[0, 1]));
        let p = hp(&[3, 0, 6]);
        assert_eq!(hpoly_gcd(&p, &HomoPoly2::zero()), p.normalize());
        assert_eq!(
            hpoly_gcd(&HomoPoly2::mu_power(3), &HomoPoly2::mu_power(2)),
            HomoPoly2::mu_power(2)
        );
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        // mu^2 - lambda^2 and mu + lambda
        let a = hp(&[1, 0, -1]);
        let b = hp(&[1, 1]);
        let g = hpoly_gcd(&a, &b);
        assert_eq!(g, hp(&[1, 1]));
        // oracle: g divides both exactly, cofactors are coprime
        let qa = a.div_exact(&g).unwrap();
        let qb = b.div_exact(&g).unwrap();
        assert!(hpoly_gcd(&qa, &qb).is_constant());
    }

    #[test]
    fn factorization_examples() {
        let f = hpoly_linear_factorization(&hp(&[0, 1, 0])).unwrap();
        assert_eq!(f.mu_power, 1);
        assert_eq!(f.roots, vec![(Scalar::ZERO, 1)]);
        assert!(f.fully_factored());

        // lambda (mu + lambda)(2 mu + lambda)
        let p = HomoPoly2::linear(&Scalar::ZERO)
            .mul(&HomoPoly2::linear(&Scalar::ONE))
            .mul(&HomoPoly2::linear(&Scalar::from_int(2)));
        let f = hpoly_linear_factorization(&p).unwrap();
        assert_eq!(f.mu_power, 0);
        let xs: Vec<_> = f.roots.iter().map(|(x, m)| (x.to_string(), *m)).collect();
        assert_eq!(
            xs,
            [
                ("0".to_string(), 1),
                ("1".to_string(), 1),
                ("2".to_string(), 1)
            ]
        );
        assert!(f.fully_factored());
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn irrational_residual_reported() {
        // mu^2 + 2 lambda^2: roots lambda/mu = +-i/sqrt(2)
        let p = hp(&[1, 0, 2]);
        let f = hpoly_linear_factorization(&p).unwrap();
        assert!(!f.fully_factored());
        assert!(f.roots.is_empty());
        assert_eq!(f.expand(), p);
        assert_eq!(
            hpoly_linear_factorization(&HomoPoly2::zero()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(hp(&[0, 1, 0]).to_string(), "mu*lambda");
        assert_eq!(hp(&[2, 0, -1]).to_string(), "-lambda^2 + (2)*mu^2");
    }
}
