//! Constructive reduction to the Kronecker canonical form and strict
//! equivalence with explicit witnesses.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Scalar, SpanBuilder, Vector};
use crate::error::{Error, Result};
use crate::invariants::{kronecker_invariants, minimal_kernel_vector, KroneckerInvariants};
use crate::pencil::Pencil;

/// `B (mu R + lambda S) C^T = mu K.R + lambda K.S` with `B`, `C` invertible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalDecomposition {
    pub b: Matrix,
    pub c: Matrix,
    pub k: Pencil,
    pub inv: KroneckerInvariants,
}

/// Block-diagonal canonical pencil in the fixed order: zero block, `L_eps`
/// by ascending `eps`, `L_nu^T` by ascending `nu`, `N` by ascending degree,
/// `M` by eigenvalue then degree.
pub fn canonical_pencil(inv: &KroneckerInvariants, m: usize, n: usize) -> Result<Pencil> {
    if !inv.is_consistent(m, n) {
        return Err(Error::DimensionMismatch(format!(
            "invariants do not describe a {m}x{n} pencil"
        )));
    }
    let mut blocks = vec![Pencil::zeros(inv.zero_left(), inv.zero_right())];
    blocks.extend(
        inv.right_minimal_indices
            .iter()
            .filter(|&&e| e > 0)
            .map(|&e| Pencil::l_block(e)),
    );
    blocks.extend(
        inv.left_minimal_indices
            .iter()
            .filter(|&&e| e > 0)
            .map(|&e| Pencil::lt_block(e)),
    );
    blocks.extend(inv.infinite_divisors.iter().map(|&e| Pencil::n_block(e)));
    for (x, degrees) in &inv.finite_divisors {
        blocks.extend(degrees.iter().map(|&e| Pencil::m_block(x, e)));
    }
    Ok(Pencil::block_diag(&blocks))
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum BlockKind {
    ZeroColumn,
    ZeroRow,
    L(usize),
    LT(usize),
    N(usize),
    M(Scalar, usize),
}

impl BlockKind {
    fn rank(&self) -> u8 {
        match self {
            BlockKind::ZeroColumn | BlockKind::ZeroRow => 0,
            BlockKind::L(_) => 1,
            BlockKind::LT(_) => 2,
            BlockKind::N(_) => 3,
            BlockKind::M(..) => 4,
        }
    }

    fn canonical_cmp(&self, other: &BlockKind) -> Ordering {
        use BlockKind::*;
        self.rank()
            .cmp(&other.rank())
            .then_with(|| match (self, other) {
                (L(a), L(b)) | (LT(a), LT(b)) | (N(a), N(b)) => a.cmp(b),
                (M(x, a), M(y, b)) => x.cmp(y).then(a.cmp(b)),
                _ => Ordering::Equal,
            })
    }
}

/// A diagonal block of the working pencil at a row/column offset.
struct Placed {
    kind: BlockKind,
    row: usize,
    col: usize,
    rows: usize,
    cols: usize,
}

/// `left * W * right = diag(L_eps, rest)`.
struct Peel {
    left: Matrix,
    right: Matrix,
    eps: usize,
    rest: Pencil,
}

/// `[[I_top, off], [0, I]]`.
fn upper_unipotent(top: usize, off: &Matrix) -> Matrix {
    debug_assert_eq!(off.rows(), top);
    let size = top + off.cols();
    let mut u = Matrix::identity(size);
    u.set_block(0, top, off);
    u
}

/// Splits an `L_eps` block off a pencil with nontrivial right kernel, using
/// a polynomial kernel vector of minimal degree.
fn peel_right(w: &Pencil) -> Result<Peel> {
    let (m, n) = w.shape();
    let (eps, xs) = minimal_kernel_vector(w, m)
        .ok_or_else(|| Error::Internal("no polynomial kernel vector".into()))?;
    let ts: Vec<Vector> = xs
        .into_iter()
        .enumerate()
        .map(|(j, x)| {
            if j % 2 == 1 {
                x.iter().map(|v| -v).collect()
            } else {
                x
            }
        })
        .collect();
    let fs: Vec<Vector> = ts[..eps].iter().map(|t| w.s().mul_vec(t)).collect();

    let mut col_span = SpanBuilder::new(n);
    let mut row_span = SpanBuilder::new(m);
    if !ts.iter().all(|t| col_span.insert(t)) || !fs.iter().all(|f| row_span.insert(f)) {
        return Err(Error::Internal("kernel chain is not independent".into()));
    }
    let t = Matrix::from_columns(n, &[ts, col_span.complement_units()].concat());
    let f = Matrix::from_columns(m, &[fs, row_span.complement_units()].concat());
    let f_inv = f.inverse().expect("basis matrix is invertible");
    let moved = w.transform_raw(&f_inv, &t);

    let k = n - eps - 1;
    let q = m - eps;
    let rest = moved.block(eps, eps + 1, q, k);
    let d = moved.block(0, eps + 1, eps, k);
    let (mut left, mut right) = (f_inv, t);
    if !d.is_zero() {
        let (x, y) = solve_coupling(eps, &d, &rest)?;
        left = &upper_unipotent(eps, &y) * &left;
        right = &right * &upper_unipotent(eps + 1, &x);
    }
    Ok(Peel {
        left,
        right,
        eps,
        rest,
    })
}

/// Solves `L_eps X + Y W* = -D` as an identity of pencils, for
/// `X: (eps+1) x k` and `Y: eps x q`.
fn solve_coupling(eps: usize, d: &Pencil, rest: &Pencil) -> Result<(Matrix, Matrix)> {
    let (q, k) = rest.shape();
    let nx = (eps + 1) * k;
    let ny = eps * q;
    let xi = |i: usize, j: usize| i * k + j;
    let yi = |i: usize, j: usize| nx + i * q + j;
    let mut a = Matrix::zeros(2 * eps * k, nx + ny);
    let mut rhs = Vec::with_capacity(2 * eps * k);
    let mut row = 0;
    for (lift, coeff, dm) in [(1usize, rest.r(), d.r()), (0usize, rest.s(), d.s())] {
        for i in 0..eps {
            for j in 0..k {
                // R_L = [0 I] picks row i+1 of X, S_L = [I 0] picks row i
                a[(row, xi(i + lift, j))] = Scalar::ONE;
                for c in 0..q {
                    a[(row, yi(i, c))] = coeff[(c, j)].clone();
                }
                rhs.push(-&dm[(i, j)]);
                row += 1;
            }
        }
    }
    let sol = a
        .solve(&rhs)
        .ok_or_else(|| Error::Internal("coupling equations are inconsistent".into()))?;
    let x = Matrix::from_fn(eps + 1, k, |i, j| sol[xi(i, j)].clone());
    let y = Matrix::from_fn(eps, q, |i, j| sol[yi(i, j)].clone());
    Ok((x, y))
}

/// Columns of a Jordan basis of `a` restricted to the eigenvalue `x`:
/// chains `[B^(e-1) v, ..., B v, v]` with `B = a - x I`, longest first.
fn jordan_chains(a: &Matrix, x: &Scalar, degrees: &[usize]) -> Result<Vec<(usize, Vec<Vector>)>> {
    let n = a.rows();
    let b = a.sub(&Matrix::identity(n).scale(x));
    let top = degrees.iter().copied().max().unwrap_or(0);
    let mut powers = vec![Matrix::identity(n)];
    for j in 1..=top {
        let next = &powers[j - 1] * &b;
        powers.push(next);
    }
    let kernels: Vec<Vec<Vector>> = powers.iter().map(Matrix::nullspace_basis).collect();
    let mut heads: Vec<(usize, Vector)> = Vec::new();
    for level in (1..=top).rev() {
        let mut span = SpanBuilder::new(n);
        for v in &kernels[level - 1] {
            span.insert(v);
        }
        for (l, h) in &heads {
            span.insert(&powers[l - level].mul_vec(h));
        }
        for v in &kernels[level] {
            if span.insert(v) {
                heads.push((level, v.clone()));
            }
        }
    }
    let mut found: Vec<usize> = heads.iter().map(|(l, _)| *l).collect();
    found.sort_unstable();
    let mut want = degrees.to_vec();
    want.sort_unstable();
    if found != want {
        return Err(Error::Internal(format!(
            "Jordan structure at {x} is {found:?}, expected {want:?}"
        )));
    }
    Ok(heads
        .into_iter()
        .map(|(l, h)| {
            let chain = (0..l).rev().map(|p| powers[p].mul_vec(&h)).collect();
            (l, chain)
        })
        .collect())
}

/// Reduces a regular pencil. Returns `(left, right, blocks)` with
/// `left * W * right` block diagonal in the listed block order.
fn reduce_regular(
    w: &Pencil,
    inv: &KroneckerInvariants,
) -> Result<(Matrix, Matrix, Vec<BlockKind>)> {
    let l = w.rows();
    let shift = (0..=l as i64)
        .map(Scalar::from_int)
        .find(|c| w.eval(&Scalar::ONE, c).det() != Scalar::ZERO)
        .ok_or_else(|| Error::Internal("regular part is singular".into()))?;
    let w0_inv = w.eval(&Scalar::ONE, &shift).inverse().expect("nonsingular");
    // W0^-1 (mu R + lambda S) = mu (I - c K) + lambda K
    let k = &w0_inv * w.s();
    let mut kl = Matrix::identity(l);
    for _ in 0..l {
        kl = &kl * &k;
    }
    let image: Vec<Vector> = {
        let mut span = SpanBuilder::new(l);
        (0..l)
            .map(|j| kl.column(j))
            .filter(|v| span.insert(v))
            .collect()
    };
    let kernel = kl.nullspace_basis();
    let f = image.len();
    let v = Matrix::from_columns(l, &[image, kernel].concat());
    let v_inv = v.inverse().expect("Fitting decomposition spans");
    let kv = &(&v_inv * &k) * &v;
    let k1 = kv.block(0, 0, f, f);
    let k0 = kv.block(f, f, l - f, l - f);

    let k1_inv = k1.inverse().expect("invertible on the image part");
    let a = k1_inv.sub(&Matrix::identity(f).scale(&shift));
    let unit = Matrix::identity(l - f).sub(&k0.scale(&shift));
    let unit_inv = unit.inverse().expect("unipotent");
    let nil = &unit_inv * &k0;

    let mut blocks = Vec::new();
    let mut qa_cols = Vec::new();
    for (x, degrees) in &inv.finite_divisors {
        for (e, chain) in jordan_chains(&a, x, degrees)? {
            blocks.push(BlockKind::M(x.clone(), e));
            qa_cols.extend(chain);
        }
    }
    let mut qn_cols = Vec::new();
    for (e, chain) in jordan_chains(&nil, &Scalar::ZERO, &inv.infinite_divisors)? {
        blocks.push(BlockKind::N(e));
        qn_cols.extend(chain);
    }
    let qa = Matrix::from_columns(f, &qa_cols);
    let qn = Matrix::from_columns(l - f, &qn_cols);
    let q = Matrix::block_diag(&[qa.clone(), qn.clone()]);
    let q_inv = Matrix::block_diag(&[
        qa.inverse()
            .ok_or_else(|| Error::Internal("finite Jordan basis".into()))?,
        qn.inverse()
            .ok_or_else(|| Error::Internal("infinite Jordan basis".into()))?,
    ]);
    let scale = Matrix::block_diag(&[k1_inv, unit_inv]);
    let left = &(&(&q_inv * &scale) * &v_inv) * &w0_inv;
    let right = &v * &q;
    Ok((left, right, blocks))
}

/// Invertible `T` whose first columns span the common kernel of `R` and `S`.
fn common_kernel_basis(p: &Pencil) -> Matrix {
    let n = p.cols();
    let kernel = Matrix::vstack(p.r(), p.s()).nullspace_basis();
    let mut span = SpanBuilder::new(n);
    for v in &kernel {
        span.insert(v);
    }
    let rest = span.complement_units();
    Matrix::from_columns(n, &[kernel, rest].concat())
}

fn embed(size: usize, offset: usize, local: &Matrix) -> Matrix {
    let mut g = Matrix::identity(size);
    g.set_block(offset, offset, local);
    g
}

fn permutation(order: &[usize]) -> Matrix {
    // row i of the result picks entry order[i]
    let n = order.len();
    let mut p = Matrix::zeros(n, n);
    for (i, &j) in order.iter().enumerate() {
        p[(i, j)] = Scalar::ONE;
    }
    p
}

fn identity_decomposition(p: &Pencil, inv: KroneckerInvariants) -> CanonicalDecomposition {
    CanonicalDecomposition {
        b: Matrix::identity(p.rows()),
        c: Matrix::identity(p.cols()),
        k: p.clone(),
        inv,
    }
}

/// Reduces `p` to canonical form with exact transformation matrices.
pub fn reduce_to_canonical(p: &Pencil) -> Result<CanonicalDecomposition> {
    let inv = kronecker_invariants(p)?;
    reduce_with_invariants(p, inv)
}

pub(crate) fn reduce_with_invariants(
    p: &Pencil,
    inv: KroneckerInvariants,
) -> Result<CanonicalDecomposition> {
    let (m, n) = p.shape();
    let target = canonical_pencil(&inv, m, n)?;
    if *p == target {
        return Ok(identity_decomposition(p, inv));
    }

    // current = bt * p * ct, kept block diagonal on the processed part
    let mut bt = Matrix::identity(m);
    let mut ct = Matrix::identity(n);
    let mut placed = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    let mut work = p.clone();

    // zero columns and rows in bulk: common kernels of R and S
    let g = inv.zero_right();
    if g > 0 {
        let right = common_kernel_basis(&work);
        ct = &ct * &right;
        work = work.transform_raw(&Matrix::identity(m), &right);
        work = work.block(0, g, m, n - g);
        for j in 0..g {
            placed.push(Placed {
                kind: BlockKind::ZeroColumn,
                row: 0,
                col: j,
                rows: 0,
                cols: 1,
            });
        }
        c0 = g;
    }
    let h = inv.zero_left();
    if h > 0 {
        let left = common_kernel_basis(&work.transpose()).transpose();
        bt = &left * &bt;
        work = work.transform_raw(&left, &Matrix::identity(work.cols()));
        work = work.block(h, 0, m - h, work.cols());
        for i in 0..h {
            placed.push(Placed {
                kind: BlockKind::ZeroRow,
                row: i,
                col: c0,
                rows: 1,
                cols: 0,
            });
        }
        r0 = h;
    }

    for _ in g..inv.right_minimal_indices.len() {
        let peel = peel_right(&work)?;
        bt = &embed(m, r0, &peel.left) * &bt;
        ct = &ct * &embed(n, c0, &peel.right);
        let kind = if peel.eps == 0 {
            BlockKind::ZeroColumn
        } else {
            BlockKind::L(peel.eps)
        };
        placed.push(Placed {
            kind,
            row: r0,
            col: c0,
            rows: peel.eps,
            cols: peel.eps + 1,
        });
        r0 += peel.eps;
        c0 += peel.eps + 1;
        work = peel.rest;
    }
    for _ in h..inv.left_minimal_indices.len() {
        let peel = peel_right(&work.transpose())?;
        // right^T W left^T = diag(L_nu^T, rest^T)
        bt = &embed(m, r0, &peel.right.transpose()) * &bt;
        ct = &ct * &embed(n, c0, &peel.left.transpose());
        let kind = if peel.eps == 0 {
            BlockKind::ZeroRow
        } else {
            BlockKind::LT(peel.eps)
        };
        placed.push(Placed {
            kind,
            row: r0,
            col: c0,
            rows: peel.eps + 1,
            cols: peel.eps,
        });
        r0 += peel.eps + 1;
        c0 += peel.eps;
        work = peel.rest.transpose();
    }
    if work.rows() > 0 {
        let (left, right, kinds) = reduce_regular(&work, &inv)?;
        bt = &embed(m, r0, &left) * &bt;
        ct = &ct * &embed(n, c0, &right);
        for kind in kinds {
            let e = match &kind {
                BlockKind::N(e) | BlockKind::M(_, e) => *e,
                _ => unreachable!(),
            };
            placed.push(Placed {
                kind,
                row: r0,
                col: c0,
                rows: e,
                cols: e,
            });
            r0 += e;
            c0 += e;
        }
    }

    placed.sort_by(|a, b| a.kind.canonical_cmp(&b.kind));
    let row_order: Vec<usize> = placed.iter().flat_map(|b| b.row..b.row + b.rows).collect();
    let col_order: Vec<usize> = placed.iter().flat_map(|b| b.col..b.col + b.cols).collect();
    let b = &permutation(&row_order) * &bt;
    let c = (&ct * &permutation(&col_order).transpose()).transpose();
    let k = p.transform(&b, &c);
    if k != target {
        return Err(Error::Internal(
            "reduction did not reach the canonical form".into(),
        ));
    }
    Ok(CanonicalDecomposition { b, c, k, inv })
}

/// The first invariant on which two pencils differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantField {
    Dimensions,
    NormalRank,
    RightMinimalIndices,
    LeftMinimalIndices,
    ElementaryDivisors,
}

impl fmt::Display for InvariantField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvariantField::Dimensions => "dimensions",
            InvariantField::NormalRank => "normal rank",
            InvariantField::RightMinimalIndices => "right minimal indices",
            InvariantField::LeftMinimalIndices => "left minimal indices",
            InvariantField::ElementaryDivisors => "elementary divisors",
        })
    }
}

pub(crate) fn first_difference(
    a: &KroneckerInvariants,
    b: &KroneckerInvariants,
) -> Option<InvariantField> {
    if a.normal_rank != b.normal_rank {
        Some(InvariantField::NormalRank)
    } else if a.right_minimal_indices != b.right_minimal_indices {
        Some(InvariantField::RightMinimalIndices)
    } else if a.left_minimal_indices != b.left_minimal_indices {
        Some(InvariantField::LeftMinimalIndices)
    } else if a.finite_divisors != b.finite_divisors || a.infinite_divisors != b.infinite_divisors {
        Some(InvariantField::ElementaryDivisors)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StrictEquivalence {
    /// `b * P * c^T = Q`.
    Equivalent {
        b: Matrix,
        c: Matrix,
    },
    NotEquivalent(InvariantField),
}

/// Decides strict equivalence; a positive answer carries a verified witness.
pub fn strict_equiv(p: &Pencil, q: &Pencil) -> Result<StrictEquivalence> {
    if p.shape() != q.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols()
        )));
    }
    let ip = kronecker_invariants(p)?;
    let iq = kronecker_invariants(q)?;
    if let Some(field) = first_difference(&ip, &iq) {
        return Ok(StrictEquivalence::NotEquivalent(field));
    }
    let dp = reduce_with_invariants(p, ip)?;
    let dq = reduce_with_invariants(q, iq)?;
    let (b, c) = compose_to(&dp, &dq)?;
    if p.transform(&b, &c) != *q {
        return Err(Error::Internal("strict equivalence witness failed".into()));
    }
    Ok(StrictEquivalence::Equivalent { b, c })
}

/// `(B, C)` with `B P C^T = Q` from decompositions of `P` and `Q` that share
/// a canonical form.
pub(crate) fn compose_to(
    dp: &CanonicalDecomposition,
    dq: &CanonicalDecomposition,
) -> Result<(Matrix, Matrix)> {
    let bq_inv =
        dq.b.inverse()
            .ok_or_else(|| Error::Internal("singular B".into()))?;
    let cq_inv =
        dq.c.inverse()
            .ok_or_else(|| Error::Internal("singular C".into()))?;
    Ok((&bq_inv * &dp.b, &cq_inv * &dp.c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn pencil(r: &[&[i64]], s: &[&[i64]]) -> Pencil {
        Pencil::new(Matrix::from_ints(r), Matrix::from_ints(s)).unwrap()
    }

    fn check(dec: &CanonicalDecomposition, p: &Pencil) {
        assert_eq!(p.transform(&dec.b, &dec.c), dec.k);
        assert!(!dec.b.det().is_zero());
        assert!(!dec.c.det().is_zero());
        assert_eq!(
            dec.k,
            canonical_pencil(&dec.inv, p.rows(), p.cols()).unwrap()
        );
    }

    #[test]
    fn ghz_is_a_fixed_point() {
        let p = pencil(&[&[1, 0], &[0, 0]], &[&[0, 0], &[0, 1]]);
        let dec = reduce_to_canonical(&p).unwrap();
        assert_eq!(dec.k, p);
        assert_eq!(dec.b, Matrix::identity(2));
    }

    #[test]
    fn single_blocks() {
        let inv = KroneckerInvariants {
            normal_rank: 1,
            right_minimal_indices: vec![1],
            left_minimal_indices: vec![],
            finite_divisors: BTreeMap::new(),
            infinite_divisors: vec![],
        };
        let k = canonical_pencil(&inv, 1, 2).unwrap();
        assert_eq!(k, Pencil::l_block(1));
        assert!(canonical_pencil(&inv, 2, 2).is_err());
    }

    #[test]
    fn reduces_scrambled_pencils() {
        let x = Scalar::from_ratio(2, 3);
        let k = Pencil::block_diag(&[
            Pencil::l_block(1),
            Pencil::lt_block(0),
            Pencil::l_block(0),
            Pencil::lt_block(2),
            Pencil::m_block(&x, 2),
            Pencil::n_block(2),
            Pencil::m_block(&Scalar::ONE, 1),
        ]);
        let (m, n) = k.shape();
        let b0 = Matrix::from_fn(m, m, |i, j| {
            Scalar::from_int(((i * 7 + j * 3) % 5) as i64 - 2 + i64::from(i == j) * 4)
        });
        let c0 = Matrix::from_fn(n, n, |i, j| {
            Scalar::from_int(((i * 5 + j * 11) % 7) as i64 - 3 + i64::from(i == j) * 6)
        });
        assert!(!b0.det().is_zero() && !c0.det().is_zero());
        let p = k.transform(&b0, &c0);
        let dec = reduce_to_canonical(&p).unwrap();
        check(&dec, &p);
        assert_eq!(dec.inv, kronecker_invariants(&k).unwrap());
    }

    #[test]
    fn strict_equivalence_verdicts() {
        let ghz = pencil(&[&[1, 0], &[0, 0]], &[&[0, 0], &[0, 1]]);
        let w = pencil(&[&[0, 1], &[1, 0]], &[&[1, 0], &[0, 0]]);
        assert_eq!(
            strict_equiv(&ghz, &w).unwrap(),
            StrictEquivalence::NotEquivalent(InvariantField::ElementaryDivisors)
        );
        let a = pencil(&[&[0, 1]], &[&[1, 0]]);
        let b = pencil(&[&[1, 0]], &[&[0, 1]]);
        match strict_equiv(&a, &b).unwrap() {
            StrictEquivalence::Equivalent { b: bb, c } => assert_eq!(a.transform(&bb, &c), b),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_pencil_reduces_to_zero_block() {
        let z = Pencil::zeros(2, 3);
        let dec = reduce_to_canonical(&z).unwrap();
        assert_eq!(dec.k, z);
        assert_eq!(dec.c, Matrix::identity(3));
    }
}
