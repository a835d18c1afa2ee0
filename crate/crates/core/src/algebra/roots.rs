//! Exact Gaussian-rational roots of univariate polynomials.
//!
//! Candidates come from two sources: rational reconstruction of
//! floating-point root approximations, and the rational root theorem over
//! `Z[i]` (numerator divides the trailing coefficient, denominator divides the
//! leading one). Every candidate is confirmed by exact evaluation before it
//! is accepted, so floating point only ever affects speed, never results.

use malachite_base::num::arithmetic::traits::Lcm;
use malachite_base::num::basic::traits::One;
use malachite_base::num::conversion::traits::SaturatingFrom;
use malachite_base::num::logic::traits::SignificantBits;
use malachite_q::Rational;
use num_complex::Complex64;

use super::scalar::Scalar;
use super::upoly::{self, UPoly};

/// Upper bound on rational-root-theorem candidates tried per factor.
const MAX_DIVISOR_CANDIDATES: usize = 400_000;

/// Roots of `p` with multiplicities (sorted by the canonical order) and the
/// monic cofactor that has no Gaussian-rational root.
pub fn gaussian_rational_roots(p: &[Scalar]) -> (Vec<(Scalar, usize)>, UPoly) {
    let f = upoly::monic(p);
    assert!(!f.is_empty(), "roots of the zero polynomial");
    let mut roots = Vec::new();
    let mut residual = vec![Scalar::ONE];
    for (factor, k) in upoly::squarefree_decomposition(&f) {
        let (found, rest) = roots_of_squarefree(&factor);
        roots.extend(found.into_iter().map(|r| (r, k)));
        for _ in 0..k {
            residual = upoly::mul(&residual, &rest);
        }
    }
    roots.sort();
    (roots, residual)
}

fn roots_of_squarefree(f: &[Scalar]) -> (Vec<Scalar>, UPoly) {
    let mut g = upoly::monic(f);
    let mut roots = Vec::new();
    let deflate = |g: &mut UPoly, roots: &mut Vec<Scalar>, r: Scalar| {
        *g = upoly::div_exact(g, &[-&r, Scalar::ONE]).expect("verified root divides");
        roots.push(r);
    };
    if g.first().is_some_and(Scalar::is_zero) {
        deflate(&mut g, &mut roots, Scalar::ZERO);
    }
    if upoly::degree(&g).unwrap_or(0) >= 2 {
        for z in approximate_roots(&g) {
            if upoly::degree(&g).unwrap_or(0) < 2 {
                break;
            }
            if let Some(r) = reconstruct(&g, z) {
                deflate(&mut g, &mut roots, r);
            }
        }
    }
    if upoly::degree(&g).unwrap_or(0) >= 2 {
        for r in divisor_candidate_roots(&g) {
            if !upoly::eval(&g, &r).is_zero() {
                continue;
            }
            deflate(&mut g, &mut roots, r);
            if upoly::degree(&g).unwrap_or(0) < 2 {
                break;
            }
        }
    }
    if upoly::degree(&g) == Some(1) {
        let r = -&(&g[0] / &g[1]);
        deflate(&mut g, &mut roots, r);
    }
    (roots, g)
}

/// Aberth-Ehrlich simultaneous iteration on a monic polynomial.
fn approximate_roots(p: &[Scalar]) -> Vec<Complex64> {
    let c: Vec<Complex64> = p.iter().map(Scalar::to_complex64).collect();
    let n = c.len() - 1;
    if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Vec::new();
    }
    let radius = (0..n)
        .map(|k| c[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-3)
        * 1.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..800 {
        let mut worst = 0.0_f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let repulse: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulse);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                worst = worst.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

/// Continued-fraction convergents `(num, den)` of `x` with `den <= max_den`.
fn convergents(x: f64, max_den: i128) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    if !x.is_finite() || x.abs() > 1e15 {
        return out;
    }
    let (mut h0, mut h1) = (1_i128, x.floor() as i128);
    let (mut k0, mut k1) = (0_i128, 1_i128);
    out.push((h1, k1));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-13 {
            break;
        }
        let y = 1.0 / frac;
        let a = y.floor();
        if !a.is_finite() || a > 1e12 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den {
            break;
        }
        out.push((h2, k2));
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        frac = y - y.floor();
    }
    out
}

fn reconstruct(p: &[Scalar], z: Complex64) -> Option<Scalar> {
    let tol = 1e-7 * (1.0 + z.norm());
    let close = |v: f64| {
        let mut cs: Vec<(i128, i128)> = convergents(v, 1 << 40)
            .into_iter()
            .filter(|&(h, k)| (h as f64 / k as f64 - v).abs() <= tol)
            .collect();
        if v.abs() <= tol && !cs.contains(&(0, 1)) {
            cs.insert(0, (0, 1));
        }
        cs.truncate(6);
        cs
    };
    let res = close(z.re);
    let ims = close(z.im);
    for &(rh, rk) in &res {
        for &(ih, ik) in &ims {
            let cand = Scalar::new(
                Rational::from_signeds(rh, rk),
                Rational::from_signeds(ih, ik),
            );
            if upoly::eval(p, &cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

// ---- rational root theorem over Z[i] ----

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct GaussInt {
    re: i128,
    im: i128,
}

impl GaussInt {
    fn mul(self, o: GaussInt) -> Option<GaussInt> {
        let re = self
            .re
            .checked_mul(o.re)?
            .checked_sub(self.im.checked_mul(o.im)?)?;
        let im = self
            .re
            .checked_mul(o.im)?
            .checked_add(self.im.checked_mul(o.re)?)?;
        Some(GaussInt { re, im })
    }

    fn norm(self) -> Option<i128> {
        self.re
            .checked_mul(self.re)?
            .checked_add(self.im.checked_mul(self.im)?)
    }

    fn div_exact(self, o: GaussInt) -> Option<GaussInt> {
        let n = o.norm()?;
        let re = self
            .re
            .checked_mul(o.re)?
            .checked_add(self.im.checked_mul(o.im)?)?;
        let im = self
            .im
            .checked_mul(o.re)?
            .checked_sub(self.re.checked_mul(o.im)?)?;
        (re % n == 0 && im % n == 0).then(|| GaussInt {
            re: re / n,
            im: im / n,
        })
    }
}

/// Gaussian primes dividing `a` (one associate each) with multiplicities.
/// `None` when the norm is too large to factor by trial division.
fn gaussian_factor(a: GaussInt) -> Option<Vec<(GaussInt, u32)>> {
    let mut n = a.norm()?;
    let mut rational_primes = Vec::new();
    let mut d: i128 = 2;
    let mut steps = 0u32;
    while d * d <= n {
        if n % d == 0 {
            rational_primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
        steps += 1;
        if steps > 2_000_000 {
            return None;
        }
    }
    if n > 1 {
        rational_primes.push(n);
    }
    let mut out = Vec::new();
    for p in rational_primes {
        let mut gaussian_primes = Vec::new();
        if p == 2 {
            gaussian_primes.push(GaussInt { re: 1, im: 1 });
        } else if p % 4 == 3 {
            gaussian_primes.push(GaussInt { re: p, im: 0 });
        } else {
            let mut y = 1;
            loop {
                if y * y > p {
                    return None;
                }
                let x2 = p - y * y;
                let x = (x2 as f64).sqrt().round() as i128;
                if x * x == x2 {
                    gaussian_primes.push(GaussInt { re: x, im: y });
                    gaussian_primes.push(GaussInt { re: x, im: -y });
                    break;
                }
                y += 1;
            }
        }
        for pi in gaussian_primes {
            let mut rest = a;
            let mut e = 0;
            while let Some(q) = rest.div_exact(pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((pi, e));
            }
        }
    }
    Some(out)
}

fn divisors(a: GaussInt) -> Option<Vec<GaussInt>> {
    let mut out = vec![GaussInt { re: 1, im: 0 }];
    for (pi, e) in gaussian_factor(a)? {
        let mut next = Vec::new();
        for d in &out {
            let mut acc = *d;
            next.push(acc);
            for _ in 0..e {
                acc = acc.mul(pi)?;
                next.push(acc);
            }
        }
        out = next;
        if out.len() > MAX_DIVISOR_CANDIDATES {
            return None;
        }
    }
    Some(out)
}

fn to_gauss(s: &Scalar) -> Option<GaussInt> {
    let part = |q: &Rational| -> Option<i128> {
        let (n, d) = q.numerator_and_denominator_ref();
        if *d != 1u32 || n.significant_bits() > 60 {
            return None;
        }
        let v = i128::saturating_from(n);
        Some(if *q < 0u32 { -v } else { v })
    };
    Some(GaussInt {
        re: part(s.re())?,
        im: part(s.im())?,
    })
}

/// Candidates `u * d0 / dn` for unit `u`, `d0 | p(0)`, `dn | lead(p)` after
/// clearing denominators. Empty if the coefficients are too large to factor.
fn divisor_candidate_roots(p: &[Scalar]) -> Vec<Scalar> {
    let mut l = malachite_nz::natural::Natural::ONE;
    for c in p {
        l = l.lcm(c.re().denominator_ref());
        l = l.lcm(c.im().denominator_ref());
    }
    let scale = Scalar::from(Rational::from(l));
    let scaled: Vec<Scalar> = p.iter().map(|c| c * &scale).collect();
    let (Some(a0), Some(an)) = (
        to_gauss(&scaled[0]),
        to_gauss(scaled.last().expect("nonempty")),
    ) else {
        return Vec::new();
    };
    let (Some(d0), Some(dn)) = (divisors(a0), divisors(an)) else {
        return Vec::new();
    };
    if d0.len().saturating_mul(dn.len()).saturating_mul(4) > MAX_DIVISOR_CANDIDATES {
        return Vec::new();
    }
    let units = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut out = Vec::new();
    for a in &d0 {
        for b in &dn {
            for &(ur, ui) in &units {
                let Some(num) = a.mul(GaussInt { re: ur, im: ui }) else {
                    continue;
                };
                let to_s = |g: GaussInt| Scalar::new(Rational::from(g.re), Rational::from(g.im));
                out.push(&to_s(num) / &to_s(*b));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(roots: &[Scalar]) -> UPoly {
        roots.iter().fold(vec![Scalar::ONE], |acc, r| {
            upoly::mul(&acc, &[-r, Scalar::ONE])
        })
    }

    #[test]
    fn finds_gaussian_roots_with_multiplicity() {
        let rs = [
            Scalar::gaussian(1, 2, -3, 4),
            Scalar::gaussian(1, 2, -3, 4),
            Scalar::from_int(0),
            Scalar::gaussian(-7, 3, 0, 1),
            Scalar::I,
        ];
        let (roots, residual) = gaussian_rational_roots(&from_roots(&rs));
        assert_eq!(residual, vec![Scalar::ONE]);
        let mut expect = vec![
            (Scalar::gaussian(-7, 3, 0, 1), 1),
            (Scalar::ZERO, 1),
            (Scalar::I, 1),
            (Scalar::gaussian(1, 2, -3, 4), 2),
        ];
        expect.sort();
        assert_eq!(roots, expect);
    }

    #[test]
    fn irreducible_quadratic_is_left_alone() {
        // x^2 - 2
        let (roots, residual) =
            gaussian_rational_roots(&[Scalar::from_int(-2), Scalar::ZERO, Scalar::ONE]);
        assert!(roots.is_empty());
        assert_eq!(upoly::degree(&residual), Some(2));
    }

    #[test]
    fn divisor_search_alone_finds_roots() {
        // (x - 3/2)(x + 2i)(x - 5)
        let p = from_roots(&[
            Scalar::from_ratio(3, 2),
            Scalar::gaussian(0, 1, -2, 1),
            Scalar::from_int(5),
        ]);
        let cands = divisor_candidate_roots(&p);
        let hits: Vec<_> = cands
            .into_iter()
            .filter(|c| upoly::eval(&p, c).is_zero())
            .collect();
        assert_eq!(hits.len(), 3);
    }

    #[test]
    fn convergents_hit_simple_fractions() {
        assert!(convergents(0.375, 1000).contains(&(3, 8)));
        assert!(convergents(-1.5, 1000).contains(&(-3, 2)));
    }
}
