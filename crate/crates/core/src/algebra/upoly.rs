//! Univariate polynomials over `Q(i)` as ascending coefficient vectors.
//! The empty vector is the zero polynomial; everything returned is trimmed.

use super::scalar::Scalar;

pub type UPoly = Vec<Scalar>;

pub fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Scalar]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn monic(p: &[Scalar]) -> UPoly {
    let p = trim(p.to_vec());
    let Some(lead) = p.last() else {
        return p;
    };
    if lead.is_one() {
        return p;
    }
    let inv = lead.inv().expect("nonzero lead");
    p.iter().map(|c| c * &inv).collect()
}

pub fn mul(a: &[Scalar], b: &[Scalar]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                let p = x * y;
                out[i + j] += &p;
            }
        }
    }
    trim(out)
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x - y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => Scalar::ZERO,
        })
        .collect();
    trim(out)
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &[Scalar], b: &[Scalar]) -> (UPoly, UPoly) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), r);
    }
    let inv = b[db].inv().expect("nonzero lead");
    let mut q = vec![Scalar::ZERO; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &r[k + db] * &inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                let d = &c * bj;
                r[k + j] -= &d;
            }
        }
        q[k] = c;
    }
    (trim(q), trim(r))
}

/// Exact division; `None` if `b` does not divide `a`.
pub fn div_exact(a: &[Scalar], b: &[Scalar]) -> Option<UPoly> {
    let (q, r) = divrem(a, b);
    r.is_empty().then_some(q)
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &[Scalar], b: &[Scalar]) -> UPoly {
    let mut x = monic(a);
    let mut y = monic(b);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = monic(&r);
    }
    monic(&x)
}

pub fn derivative(p: &[Scalar]) -> UPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Scalar::from_int(k as i64))
            .collect(),
    )
}

pub fn eval(p: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::ZERO;
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// The polynomial of degree `< xs.len()` through `(xs[k], ys[k])`, via Newton
/// divided differences. Nodes must be distinct.
pub fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> UPoly {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &xs[i] - &xs[i - j];
            coef[i] = &num * &den.inv().expect("distinct nodes");
        }
    }
    let mut out: UPoly = Vec::new();
    for k in (0..n).rev() {
        // out = out * (x - xs[k]) + coef[k]
        out = mul(&out, &[-&xs[k], Scalar::ONE]);
        if out.is_empty() {
            out.push(Scalar::ZERO);
        }
        out[0] += &coef[k];
    }
    trim(out)
}

/// Yun's square-free decomposition of a nonzero polynomial:
/// `monic(p) = prod f_k^k`, returned as `(f_k, k)` for nonconstant `f_k`.
pub fn squarefree_decomposition(p: &[Scalar]) -> Vec<(UPoly, usize)> {
    let f = monic(p);
    assert!(!f.is_empty(), "square-free decomposition of zero");
    if degree(&f) == Some(0) {
        return Vec::new();
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = div_exact(&f, &a0).expect("gcd divides");
    let c = div_exact(&df, &a0).expect("gcd divides");
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut k = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let a = gcd(&b, &d);
        if degree(&a).unwrap_or(0) > 0 {
            out.push((a.clone(), k));
        }
        let nb = div_exact(&b, &a).expect("gcd divides");
        let nc = div_exact(&d, &a).expect("gcd divides");
        d = sub(&nc, &derivative(&nb));
        b = nb;
        k += 1;
    }
    out
}
