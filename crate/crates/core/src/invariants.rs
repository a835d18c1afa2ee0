//! Strict-equivalence invariants of a pencil: normal rank, minimal indices,
//! invariant polynomials and elementary divisors.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    hpoly_gcd, hpoly_linear_factorization, HomoPoly2, Matrix, ProjectivePoint, Scalar, Vector,
};
use crate::error::{Error, Result};
use crate::pencil::Pencil;

/// Complete invariants under strict equivalence `P -> B P C^T`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct KroneckerInvariants {
    pub normal_rank: usize,
    /// Column (right) minimal indices, ascending, zeros included.
    pub right_minimal_indices: Vec<usize>,
    /// Row (left) minimal indices, ascending, zeros included.
    pub left_minimal_indices: Vec<usize>,
    /// Finite elementary divisors `(mu*x + lambda)^e`: `x -> ascending e`.
    pub finite_divisors: BTreeMap<Scalar, Vec<usize>>,
    /// Degrees of the infinite elementary divisors `mu^e`, ascending.
    pub infinite_divisors: Vec<usize>,
}

impl KroneckerInvariants {
    /// Number of zero right minimal indices (`g`).
    pub fn zero_right(&self) -> usize {
        self.right_minimal_indices
            .iter()
            .filter(|&&e| e == 0)
            .count()
    }

    /// Number of zero left minimal indices (`h`).
    pub fn zero_left(&self) -> usize {
        self.left_minimal_indices
            .iter()
            .filter(|&&e| e == 0)
            .count()
    }

    /// Size of the regular part.
    pub fn regular_size(&self) -> usize {
        self.finite_divisors.values().flatten().sum::<usize>()
            + self.infinite_divisors.iter().sum::<usize>()
    }

    /// Elementary divisor degrees per point, finite points first in
    /// canonical order, infinity last.
    pub fn points(&self) -> Vec<(ProjectivePoint, Vec<usize>)> {
        let mut out: Vec<_> = self
            .finite_divisors
            .iter()
            .map(|(x, d)| (ProjectivePoint::Finite(x.clone()), d.clone()))
            .collect();
        if !self.infinite_divisors.is_empty() {
            out.push((ProjectivePoint::Infinity, self.infinite_divisors.clone()));
        }
        out
    }

    /// Row and column counts implied by the block structure.
    pub fn implied_shape(&self) -> (usize, usize) {
        let l = self.regular_size();
        let se: usize = self.right_minimal_indices.iter().sum();
        let sn: usize = self.left_minimal_indices.iter().sum();
        let rows = se + sn + self.left_minimal_indices.len() + l;
        let cols = se + self.right_minimal_indices.len() + sn + l;
        (rows, cols)
    }

    /// Internal consistency for an `m x n` pencil.
    pub fn is_consistent(&self, m: usize, n: usize) -> bool {
        let r = self.normal_rank;
        let se: usize = self.right_minimal_indices.iter().sum();
        let sn: usize = self.left_minimal_indices.iter().sum();
        r <= m.min(n)
            && self.right_minimal_indices.len() == n - r
            && self.left_minimal_indices.len() == m - r
            && se + sn + self.regular_size() == r
            && self.implied_shape() == (m, n)
            && self.finite_divisors.values().all(|d| !d.is_empty())
    }
}

/// Maximum rank of `R + t S` over sample points; exact because a nonzero
/// `r x r` minor has at most `r` roots in `t`, and `mu = 0` adds only `S`.
pub fn normal_rank(p: &Pencil) -> usize {
    let cap = p.rows().min(p.cols());
    let mut best = 0;
    for t in 0..=(cap as i64 + 1) {
        let rk = p.eval(&Scalar::ONE, &Scalar::from_int(t)).rank();
        best = best.max(rk);
        if best == cap {
            break;
        }
    }
    best
}

/// Block band matrix whose kernel holds the polynomial kernel vectors of
/// degree `d`: block column `j` carries `R` in block row `j` and `S` in
/// block row `j + 1`.
pub(crate) fn band_matrix(p: &Pencil, d: usize) -> Matrix {
    let (m, n) = p.shape();
    let mut t = Matrix::zeros((d + 2) * m, (d + 1) * n);
    for j in 0..=d {
        t.set_block(j * m, j * n, p.r());
        t.set_block((j + 1) * m, j * n, p.s());
    }
    t
}

/// Column minimal indices for a pencil of known normal rank.
fn right_indices_with_rank(p: &Pencil, r: usize) -> Result<Vec<usize>> {
    let (m, n) = p.shape();
    let target = n - r;
    let mut out = Vec::with_capacity(target);
    if target == 0 {
        return Ok(out);
    }
    if m == 0 {
        return Ok(vec![0; n]);
    }
    // k_d = dim ker T_d = sum over indices <= d of (d - eps + 1)
    let (mut prev_k, mut prev_delta) = (0usize, 0usize);
    for d in 0..=r + 1 {
        let t = band_matrix(p, d);
        let k = (d + 1) * n - t.rank();
        let delta = k - prev_k;
        let count = delta - prev_delta;
        out.extend(std::iter::repeat_n(d, count));
        if out.len() >= target {
            out.truncate(target);
            return Ok(out);
        }
        prev_k = k;
        prev_delta = delta;
    }
    Err(Error::Internal(
        "minimal index search did not terminate".into(),
    ))
}

/// `(right, left)` minimal indices, each ascending with zeros included.
pub fn minimal_indices(p: &Pencil) -> Result<(Vec<usize>, Vec<usize>)> {
    let r = normal_rank(p);
    Ok((
        right_indices_with_rank(p, r)?,
        right_indices_with_rank(&p.transpose(), r)?,
    ))
}

/// A minimal-degree polynomial kernel vector `x_0 mu^d + ... + x_d lambda^d`
/// of a pencil with nontrivial right kernel, as `(d, [x_0, ..., x_d])`.
pub(crate) fn minimal_kernel_vector(p: &Pencil, max_degree: usize) -> Option<(usize, Vec<Vector>)> {
    let n = p.cols();
    for d in 0..=max_degree {
        let t = band_matrix(p, d);
        if let Some(v) = t.nullspace_basis().into_iter().next() {
            let parts = v.chunks(n).map(|c| c.to_vec()).collect();
            return Some((d, parts));
        }
    }
    None
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Normalized gcd of all `i x i` minors, or zero if they all vanish.
fn minor_gcd(p: &Pencil, i: usize) -> HomoPoly2 {
    let mut g = HomoPoly2::zero();
    let rows = combinations(p.rows(), i);
    let cols = combinations(p.cols(), i);
    for rs in &rows {
        for cs in &cols {
            let d = p.submatrix(rs, cs).determinant();
            if d.is_zero() {
                continue;
            }
            g = hpoly_gcd(&g, &d);
            if g.is_constant() {
                return g;
            }
        }
    }
    g
}

/// Invariant polynomials `E_1 | ... | E_r` from gcds of minors
/// `D_i`, with `E_i = D_i / D_(i-1)` and `D_0 = 1`. Cost grows with the
/// number of minors, so this suits small pencils.
pub fn invariant_polynomials(p: &Pencil) -> Vec<HomoPoly2> {
    let r = normal_rank(p);
    let mut out = Vec::with_capacity(r);
    let mut prev = HomoPoly2::one();
    for i in 1..=r {
        let d = minor_gcd(p, i);
        let e = d.div_exact(&prev).expect("D_(i-1) divides D_i").normalize();
        out.push(e);
        prev = d;
    }
    out
}

/// Ascending degrees per finite point.
pub type FiniteDivisors = BTreeMap<Scalar, Vec<usize>>;

/// Elementary divisors read off the invariant polynomials, as
/// `(finite x -> ascending degrees, ascending infinite degrees)`.
pub fn elementary_divisors(invariant_polys: &[HomoPoly2]) -> Result<(FiniteDivisors, Vec<usize>)> {
    let mut finite: BTreeMap<Scalar, Vec<usize>> = BTreeMap::new();
    let mut infinite = Vec::new();
    for e in invariant_polys {
        let f = hpoly_linear_factorization(e)?;
        if !f.fully_factored() {
            return Err(Error::IrrationalSpectrum {
                factor: f.residual.to_string(),
            });
        }
        if f.mu_power > 0 {
            infinite.push(f.mu_power);
        }
        for (x, m) in f.roots {
            finite.entry(x).or_default().push(m);
        }
    }
    for d in finite.values_mut() {
        d.sort_unstable();
    }
    infinite.sort_unstable();
    Ok((finite, infinite))
}

/// Invariants through gcds of minors. Exponential in the pencil size; used
/// as an independent check on [`kronecker_invariants`].
pub fn kronecker_invariants_by_minors(p: &Pencil) -> Result<KroneckerInvariants> {
    let r = normal_rank(p);
    let (right, left) = (
        right_indices_with_rank(p, r)?,
        right_indices_with_rank(&p.transpose(), r)?,
    );
    let (finite, infinite) = elementary_divisors(&invariant_polynomials(p))?;
    Ok(KroneckerInvariants {
        normal_rank: r,
        right_minimal_indices: right,
        left_minimal_indices: left,
        finite_divisors: finite,
        infinite_divisors: infinite,
    })
}

/// Block lower-triangular Toeplitz matrix with `p0` on the diagonal and
/// `p1` below it, `k x k` blocks.
fn toeplitz(p0: &Matrix, p1: &Matrix, k: usize) -> Matrix {
    let (m, n) = p0.shape();
    let mut t = Matrix::zeros(k * m, k * n);
    for j in 0..k {
        t.set_block(j * m, j * n, p0);
        if j + 1 < k {
            t.set_block((j + 1) * m, j * n, p1);
        }
    }
    t
}

/// Partition of the elementary divisor degrees at one point from the local
/// expansion `P = p0 + t p1`. With `d_k = k r - rank T_k` one has
/// `#{e >= k} = d_k - d_(k-1)`; the search stops once the degrees account
/// for `multiplicity`, the order of the point in `D_r`.
fn local_partition(p0: &Matrix, p1: &Matrix, r: usize, multiplicity: usize) -> Result<Vec<usize>> {
    let mut at_least = Vec::new();
    let (mut prev_d, mut total) = (0usize, 0usize);
    for k in 1..=multiplicity {
        let d = k * r - toeplitz(p0, p1, k).rank();
        let c = d - prev_d;
        if c == 0 {
            break;
        }
        at_least.push(c);
        total += c;
        prev_d = d;
        if total >= multiplicity {
            break;
        }
    }
    if total != multiplicity {
        return Err(Error::Internal(format!(
            "local degrees sum to {total}, expected {multiplicity}"
        )));
    }
    let mut degrees = Vec::new();
    for (k, &c) in at_least.iter().enumerate() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        degrees.extend(std::iter::repeat_n(k + 1, c - next));
    }
    degrees.sort_unstable();
    Ok(degrees)
}

/// `D_r`, the gcd of the maximal minors, as the gcd of determinants of
/// random `r x r` compressions `U P V`. Each compression determinant is a
/// combination of maximal minors (Cauchy-Binet) so `D_r` divides it; the
/// loop ends once the gcd has the degree `D_r` is known to have.
fn top_minor_gcd(p: &Pencil, r: usize, degree: usize) -> Result<HomoPoly2> {
    let (m, n) = p.shape();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut g = HomoPoly2::zero();
    for attempt in 0..64 {
        let spread = 3 + attempt as i64;
        let u = Matrix::from_fn(r, m, |_, _| {
            Scalar::from_int(rng.gen_range(-spread..=spread))
        });
        let v = Matrix::from_fn(n, r, |_, _| {
            Scalar::from_int(rng.gen_range(-spread..=spread))
        });
        let det = p.transform_raw(&u, &v).determinant();
        if det.is_zero() {
            continue;
        }
        g = hpoly_gcd(&g, &det);
        if g.degree() == degree {
            return Ok(g);
        }
    }
    Err(Error::Internal("maximal minor gcd did not converge".into()))
}

/// Complete strict-equivalence invariants.
///
/// Minimal indices come from kernel dimensions of band matrices. For the
/// regular part, `D_r` is obtained from random compressions, factored into
/// linear forms, and the degrees at each point are read from ranks of local
/// Toeplitz matrices. Fails with [`Error::IrrationalSpectrum`] when `D_r` has
/// an irreducible factor of degree above one over `Q(i)`.
pub fn kronecker_invariants(p: &Pencil) -> Result<KroneckerInvariants> {
    let r = normal_rank(p);
    let right = right_indices_with_rank(p, r)?;
    let left = right_indices_with_rank(&p.transpose(), r)?;
    let singular: usize = right.iter().sum::<usize>() + left.iter().sum::<usize>();
    let l = r
        .checked_sub(singular)
        .ok_or_else(|| Error::Internal("minimal indices exceed normal rank".into()))?;
    let mut finite = BTreeMap::new();
    let mut infinite = Vec::new();
    if l > 0 {
        let d = top_minor_gcd(p, r, l)?;
        let f = hpoly_linear_factorization(&d)?;
        if !f.fully_factored() {
            return Err(Error::IrrationalSpectrum {
                factor: f.residual.to_string(),
            });
        }
        for (x, mult) in &f.roots {
            // mu*x + lambda vanishes at (mu, lambda) = (1, -x)
            let p0 = p.eval(&Scalar::ONE, &-x);
            finite.insert(x.clone(), local_partition(&p0, p.s(), r, *mult)?);
        }
        if f.mu_power > 0 {
            infinite = local_partition(p.s(), p.r(), r, f.mu_power)?;
        }
    }
    Ok(KroneckerInvariants {
        normal_rank: r,
        right_minimal_indices: right,
        left_minimal_indices: left,
        finite_divisors: finite,
        infinite_divisors: infinite,
    })
}
