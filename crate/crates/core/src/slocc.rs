//! Three-qubit-like states in `2 x m x n`, their pencils, Alice's action by
//! linear fractional transformations, and the SLOCC equivalence decision.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, ProjectivePoint, Scalar};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::invariants::{kronecker_invariants, minimal_indices, KroneckerInvariants};
use crate::kronecker::{compose_to, reduce_with_invariants};
use crate::pencil::Pencil;

/// A nonzero state `|0>|R> + |1>|S>` with `R[j][k] = a[0][j][k]` and
/// `S[j][k] = a[1][j][k]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct State {
    pencil: Pencil,
}

/// On-disk form: `{"dims": [2, m, n], "amplitudes": a[i][j][k]}`.
#[derive(Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 3],
    pub amplitudes: Vec<Vec<Vec<Scalar>>>,
}

impl TryFrom<StateFile> for State {
    type Error = Error;
    fn try_from(f: StateFile) -> Result<Self> {
        let [two, m, n] = f.dims;
        let shape_ok = two == 2
            && f.amplitudes.len() == 2
            && f.amplitudes
                .iter()
                .all(|slice| slice.len() == m && slice.iter().all(|row| row.len() == n));
        if !shape_ok {
            return Err(Error::DimensionMismatch(format!(
                "amplitudes do not match dims [{two}, {m}, {n}]"
            )));
        }
        State::from_amplitudes(f.amplitudes)
    }
}

impl From<State> for StateFile {
    fn from(s: State) -> Self {
        let (m, n) = s.dims();
        StateFile {
            dims: [2, m, n],
            amplitudes: s.amplitudes(),
        }
    }
}

impl State {
    pub fn new(r: Matrix, s: Matrix) -> Result<Self> {
        pencil_to_state(&Pencil::new(r, s)?)
    }

    /// From `a[i][j][k]` with `i` in `{0, 1}`.
    pub fn from_amplitudes(a: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        if a.len() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "first tensor factor has dimension {}, expected 2",
                a.len()
            )));
        }
        let mut it = a.into_iter();
        let r =
            Matrix::try_from(it.next().expect("two slices")).map_err(Error::DimensionMismatch)?;
        let s =
            Matrix::try_from(it.next().expect("two slices")).map_err(Error::DimensionMismatch)?;
        State::new(r, s)
    }

    pub fn amplitudes(&self) -> Vec<Vec<Vec<Scalar>>> {
        vec![self.pencil.r().to_rows(), self.pencil.s().to_rows()]
    }

    pub fn dims(&self) -> (usize, usize) {
        self.pencil.shape()
    }

    pub fn pencil(&self) -> &Pencil {
        &self.pencil
    }

    /// Basis-state superposition `sum |i j k>` with unit amplitudes.
    pub fn from_basis(m: usize, n: usize, terms: &[(usize, usize, usize)]) -> Result<Self> {
        let mut a = vec![vec![vec![Scalar::ZERO; n]; m]; 2];
        for &(i, j, k) in terms {
            if i >= 2 || j >= m || k >= n {
                return Err(Error::DimensionMismatch(format!(
                    "basis state |{i}{j}{k}> outside 2x{m}x{n}"
                )));
            }
            a[i][j][k] = &a[i][j][k] + &Scalar::ONE;
        }
        State::from_amplitudes(a)
    }

    /// `|000> + |111>`.
    pub fn ghz() -> Self {
        State::from_basis(2, 2, &[(0, 0, 0), (1, 1, 1)]).expect("valid")
    }

    /// `|001> + |010> + |100>`.
    pub fn w() -> Self {
        State::from_basis(2, 2, &[(0, 0, 1), (0, 1, 0), (1, 0, 0)]).expect("valid")
    }

    /// `k` times the state; `None` for `k = 0`.
    pub fn scaled(&self, k: &Scalar) -> Option<State> {
        (!k.is_zero()).then(|| State {
            pencil: Pencil::new(self.pencil.r().scale(k), self.pencil.s().scale(k))
                .expect("same shape"),
        })
    }

    /// The scalar `k` with `self = k * other`, if any.
    pub fn ratio_to(&self, other: &State) -> Option<Scalar> {
        if self.dims() != other.dims() {
            return None;
        }
        let (a, b) = (self.flat(), other.flat());
        let idx = b.iter().position(|x| !x.is_zero())?;
        let k = &a[idx] / &b[idx];
        a.iter().zip(&b).all(|(x, y)| *x == &k * y).then_some(k)
    }

    fn flat(&self) -> Vec<Scalar> {
        self.pencil
            .r()
            .entries()
            .iter()
            .chain(self.pencil.s().entries())
            .cloned()
            .collect()
    }
}

pub fn state_to_pencil(s: &State) -> Pencil {
    s.pencil.clone()
}

/// Fails with [`Error::ZeroState`] on the zero pencil.
pub fn pencil_to_state(p: &Pencil) -> Result<State> {
    if p.is_zero() {
        return Err(Error::ZeroState);
    }
    Ok(State { pencil: p.clone() })
}

/// `(rA, rB, rC)`: `rA = dim span{R, S}`, `rB = m - h`, `rC = n - g` with
/// `g`, `h` the numbers of zero right and left minimal indices.
pub fn local_ranks(s: &State) -> (usize, usize, usize) {
    let p = s.pencil();
    let (m, n) = p.shape();
    let ra = Matrix::flatten_rows(&[p.r(), p.s()]).rank();
    let (right, left) = minimal_indices(p).expect("minimal indices exist for every pencil");
    let g = right.iter().filter(|&&e| e == 0).count();
    let h = left.iter().filter(|&&e| e == 0).count();
    (ra, m - h, n - g)
}

/// Alice's invertible `[[a, b], [c, d]]`, acting on the indeterminates as
/// `(mu, lambda) -> (a mu + b lambda, c mu + d lambda)` and on divisor
/// points as `x -> (a x + c) / (b x + d)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Lft {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl fmt::Display for Lft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

impl Lft {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        let t = Lft { a, b, c, d };
        if t.det().is_zero() {
            return Err(Error::DegenerateTriple(format!("singular LFT {t}")));
        }
        Ok(t)
    }

    pub fn identity() -> Self {
        Lft {
            a: Scalar::ONE,
            b: Scalar::ZERO,
            c: Scalar::ZERO,
            d: Scalar::ONE,
        }
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(vec![
            vec![self.a.clone(), self.b.clone()],
            vec![self.c.clone(), self.d.clone()],
        ])
    }

    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        Lft::new(
            m[(0, 0)].clone(),
            m[(0, 1)].clone(),
            m[(1, 0)].clone(),
            m[(1, 1)].clone(),
        )
    }

    /// Applying `self` and then `next`; on pencils the matrices multiply as
    /// `self.matrix() * next.matrix()`.
    pub fn then(&self, next: &Lft) -> Lft {
        Lft::from_matrix(&(&self.matrix() * &next.matrix())).expect("product of invertibles")
    }

    pub fn inverse(&self) -> Lft {
        Lft::from_matrix(&self.matrix().inverse().expect("invertible")).expect("invertible")
    }

    /// Scales so the first nonzero of `(a, b, c, d)` is one.
    pub fn normalized(&self) -> Lft {
        let lead = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("invertible LFT has a nonzero entry")
            .inv()
            .expect("nonzero");
        Lft {
            a: &self.a * &lead,
            b: &self.b * &lead,
            c: &self.c * &lead,
            d: &self.d * &lead,
        }
    }

    pub fn apply_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        match p {
            ProjectivePoint::Infinity => {
                if self.b.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite(&self.a / &self.b)
                }
            }
            ProjectivePoint::Finite(x) => {
                let den = &(&self.b * x) + &self.d;
                if den.is_zero() {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite(&(&(&self.a * x) + &self.c) / &den)
                }
            }
        }
    }

    /// Image of a finite point when it stays finite.
    fn apply_finite(&self, x: &Scalar) -> Option<Scalar> {
        match self.apply_point(&ProjectivePoint::Finite(x.clone())) {
            ProjectivePoint::Finite(y) => Some(y),
            ProjectivePoint::Infinity => None,
        }
    }

    /// Transforms a pencil: `P'(mu, lambda) = P(a mu + b lambda, c mu + d lambda)`.
    pub fn apply_pencil(&self, p: &Pencil) -> Pencil {
        let r = Matrix::lin_comb(&self.a, p.r(), &self.c, p.s());
        let s = Matrix::lin_comb(&self.b, p.r(), &self.d, p.s());
        Pencil::new(r, s).expect("same shape")
    }
}

/// Local operators `(A, B, C)`; as a SLOCC witness all three are invertible.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SloccWitness {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
}

impl SloccWitness {
    pub fn identity(m: usize, n: usize) -> Self {
        SloccWitness {
            a: Matrix::identity(2),
            b: Matrix::identity(m),
            c: Matrix::identity(n),
        }
    }

    pub fn is_invertible(&self) -> bool {
        [&self.a, &self.b, &self.c]
            .iter()
            .all(|x| x.is_square() && !x.det().is_zero())
    }

    /// Applying `self` and then `next`.
    pub fn then(&self, next: &SloccWitness) -> SloccWitness {
        SloccWitness {
            a: &self.a * &next.a,
            b: &next.b * &self.b,
            c: &next.c * &self.c,
        }
    }

    pub fn inverse(&self) -> Option<SloccWitness> {
        Some(SloccWitness {
            a: self.a.inverse()?,
            b: self.b.inverse()?,
            c: self.c.inverse()?,
        })
    }
}

/// `R' = a B R C^T + c B S C^T`, `S' = b B R C^T + d B S C^T` for arbitrary
/// (possibly singular or rectangular) local maps.
pub fn apply_local_maps(p: &Pencil, a: &Matrix, b: &Matrix, c: &Matrix) -> Result<Pencil> {
    if a.shape() != (2, 2) || b.cols() != p.rows() || c.cols() != p.cols() {
        return Err(Error::DimensionMismatch(format!(
            "local maps {:?}, {:?}, {:?} do not act on a 2x{}x{} state",
            a.shape(),
            b.shape(),
            c.shape(),
            p.rows(),
            p.cols()
        )));
    }
    let moved = p.transform(b, c);
    Ok(Lft {
        a: a[(0, 0)].clone(),
        b: a[(0, 1)].clone(),
        c: a[(1, 0)].clone(),
        d: a[(1, 1)].clone(),
    }
    .apply_pencil(&moved))
}

pub fn apply_slocc(s: &State, w: &SloccWitness) -> Result<State> {
    let (m, n) = s.dims();
    if w.b.shape() != (m, m) || w.c.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "witness of shape {:?}/{:?} applied to a 2x{m}x{n} state",
            w.b.shape(),
            w.c.shape()
        )));
    }
    pencil_to_state(&apply_local_maps(s.pencil(), &w.a, &w.b, &w.c)?)
}

/// Invariants after Alice applies `t`: minimal indices unchanged, divisor
/// points moved by the Moebius map, degrees kept.
pub fn transform_invariants(inv: &KroneckerInvariants, t: &Lft) -> KroneckerInvariants {
    let mut finite: BTreeMap<Scalar, Vec<usize>> = BTreeMap::new();
    let mut infinite = Vec::new();
    for (point, degrees) in inv.points() {
        match t.apply_point(&point) {
            ProjectivePoint::Finite(y) => finite.entry(y).or_default().extend(degrees),
            ProjectivePoint::Infinity => infinite.extend(degrees),
        }
    }
    for d in finite.values_mut() {
        d.sort_unstable();
    }
    infinite.sort_unstable();
    KroneckerInvariants {
        normal_rank: inv.normal_rank,
        right_minimal_indices: inv.right_minimal_indices.clone(),
        left_minimal_indices: inv.left_minimal_indices.clone(),
        finite_divisors: finite,
        infinite_divisors: infinite,
    }
}

/// `(1, 1, 0, d)` for the first `d = 1, 2, ...` that keeps every finite
/// point finite; infinity moves to `1`.
pub fn regularizing_lft(inv: &KroneckerInvariants) -> Lft {
    let d = (1..)
        .map(Scalar::from_int)
        .find(|d| inv.finite_divisors.keys().all(|x| !(x + d).is_zero()))
        .expect("finitely many points to avoid");
    Lft {
        a: Scalar::ONE,
        b: Scalar::ONE,
        c: Scalar::ZERO,
        d,
    }
}

fn det3(m: [[&Scalar; 3]; 3]) -> Scalar {
    let t = |a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar| &(a * b) - &(c * d);
    let a = m[0][0] * &t(m[1][1], m[2][2], m[1][2], m[2][1]);
    let b = m[0][1] * &t(m[1][0], m[2][2], m[1][2], m[2][0]);
    let c = m[0][2] * &t(m[1][0], m[2][1], m[1][1], m[2][0]);
    &(&a - &b) + &c
}

/// The unique LFT with `(a x_i + c) / (b x_i + d) = y_i`, from four 3x3
/// determinants, normalized so its first nonzero coefficient is one.
pub fn lft_from_three_pairs(pairs: &[(Scalar, Scalar); 3]) -> Result<Lft> {
    for i in 0..3 {
        for j in i + 1..3 {
            if pairs[i].0 == pairs[j].0 || pairs[i].1 == pairs[j].1 {
                return Err(Error::DegenerateTriple(format!(
                    "pairs {i} and {j} repeat a point"
                )));
            }
        }
    }
    let one = Scalar::ONE;
    let xy: Vec<Scalar> = pairs.iter().map(|(x, y)| x * y).collect();
    let col = |k: usize| -> [&Scalar; 3] {
        match k {
            0 => [&xy[0], &xy[1], &xy[2]],
            1 => [&pairs[0].0, &pairs[1].0, &pairs[2].0],
            2 => [&pairs[0].1, &pairs[1].1, &pairs[2].1],
            _ => [&one, &one, &one],
        }
    };
    let minor = |a: usize, b: usize, c: usize| {
        let (ca, cb, cc) = (col(a), col(b), col(c));
        det3([
            [ca[0], cb[0], cc[0]],
            [ca[1], cb[1], cc[1]],
            [ca[2], cb[2], cc[2]],
        ])
    };
    // a x + c - b x y - d y = 0 for each pair; the kernel of the rows
    // [x, xy, 1, y] is given by the signed maximal minors
    let a = minor(0, 2, 3);
    let c = minor(0, 1, 2);
    let b = minor(1, 2, 3);
    let d = minor(0, 1, 3);
    let t = Lft::new(a, b, c, d)?.normalized();
    for (x, y) in pairs {
        if t.apply_finite(x).as_ref() != Some(y) {
            return Err(Error::Internal(
                "three-point LFT does not interpolate".into(),
            ));
        }
    }
    Ok(t)
}

/// Why two states are not SLOCC equivalent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mismatch {
    Dimensions,
    NormalRank,
    RightMinimalIndices,
    LeftMinimalIndices,
    /// Different numbers of distinct divisor points or different degree
    /// signatures.
    ElementaryDivisors,
    /// Signatures agree but no LFT maps one point set onto the other.
    NoMatchingLft,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mismatch::Dimensions => "dimensions",
            Mismatch::NormalRank => "normal rank",
            Mismatch::RightMinimalIndices => "right minimal indices",
            Mismatch::LeftMinimalIndices => "left minimal indices",
            Mismatch::ElementaryDivisors => "elementary divisors",
            Mismatch::NoMatchingLft => "no LFT matches the elementary divisors",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquivVerdict {
    Equivalent(SloccWitness),
    NotEquivalent(Mismatch),
}

type Signature = Vec<usize>;

/// Finite points of regularized invariants with their degree signatures.
fn finite_points(inv: &KroneckerInvariants) -> Vec<(Scalar, Signature)> {
    debug_assert!(inv.infinite_divisors.is_empty());
    inv.finite_divisors
        .iter()
        .map(|(x, d)| (x.clone(), d.clone()))
        .collect()
}

fn signature_multiset(points: &[(Scalar, Signature)]) -> Vec<Signature> {
    let mut v: Vec<Signature> = points.iter().map(|(_, s)| s.clone()).collect();
    v.sort();
    v
}

/// Integers not among `taken`, in increasing order.
fn fresh_points(taken: &[Scalar], count: usize) -> Vec<Scalar> {
    (0..)
        .map(Scalar::from_int)
        .filter(|x| !taken.contains(x))
        .take(count)
        .collect()
}

/// An LFT carrying the points of `xs` onto those of `ys` with matching
/// signatures, if one exists. Both sides are finite point sets of equal
/// size with equal signature multisets.
fn match_points(
    xs: &[(Scalar, Signature)],
    ys: &[(Scalar, Signature)],
    mode: ExecMode,
) -> Result<Option<Lft>> {
    if xs.len() < 3 {
        // any k <= 3 distinct points can be sent to any k distinct points
        let mut xs = xs.to_vec();
        let mut ys = ys.to_vec();
        xs.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        ys.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        if xs.is_empty() {
            return Ok(Some(Lft::identity()));
        }
        let mut px: Vec<Scalar> = xs.iter().map(|p| p.0.clone()).collect();
        let mut py: Vec<Scalar> = ys.iter().map(|p| p.0.clone()).collect();
        let missing = 3 - px.len();
        px.extend(fresh_points(&px, missing));
        py.extend(fresh_points(&py, missing));
        let pairs = [
            (px[0].clone(), py[0].clone()),
            (px[1].clone(), py[1].clone()),
            (px[2].clone(), py[2].clone()),
        ];
        return lft_from_three_pairs(&pairs).map(Some);
    }
    let target: BTreeMap<&Scalar, &Signature> = ys.iter().map(|(y, s)| (y, s)).collect();
    let mut trios = Vec::new();
    for (i, (y1, s1)) in ys.iter().enumerate() {
        if *s1 != xs[0].1 {
            continue;
        }
        for (j, (y2, s2)) in ys.iter().enumerate() {
            if j == i || *s2 != xs[1].1 {
                continue;
            }
            for (k, (y3, s3)) in ys.iter().enumerate() {
                if k == i || k == j || *s3 != xs[2].1 {
                    continue;
                }
                trios.push([y1.clone(), y2.clone(), y3.clone()]);
            }
        }
    }
    let found = exec::find_map_first(mode, &trios, |trio| {
        let pairs = [
            (xs[0].0.clone(), trio[0].clone()),
            (xs[1].0.clone(), trio[1].clone()),
            (xs[2].0.clone(), trio[2].clone()),
        ];
        let t = lft_from_three_pairs(&pairs).ok()?;
        let perfect = xs.iter().all(|(x, sig)| {
            t.apply_finite(x)
                .is_some_and(|y| target.get(&y).is_some_and(|s| *s == sig))
        });
        perfect.then_some(t)
    });
    Ok(found)
}

/// Decides SLOCC equivalence of two states and returns a verified witness.
pub fn slocc_equivalent(s1: &State, s2: &State) -> Result<EquivVerdict> {
    slocc_equivalent_with(s1, s2, ExecMode::default())
}

pub fn slocc_equivalent_with(s1: &State, s2: &State, mode: ExecMode) -> Result<EquivVerdict> {
    if s1.dims() != s2.dims() {
        return Err(Error::DimensionMismatch(format!(
            "2x{}x{} vs 2x{}x{}",
            s1.dims().0,
            s1.dims().1,
            s2.dims().0,
            s2.dims().1
        )));
    }
    // (I) invariants, then regularize both sides
    let inv1 = kronecker_invariants(s1.pencil())?;
    let inv2 = kronecker_invariants(s2.pencil())?;
    if inv1.normal_rank != inv2.normal_rank {
        return Ok(EquivVerdict::NotEquivalent(Mismatch::NormalRank));
    }
    if inv1.right_minimal_indices != inv2.right_minimal_indices {
        return Ok(EquivVerdict::NotEquivalent(Mismatch::RightMinimalIndices));
    }
    if inv1.left_minimal_indices != inv2.left_minimal_indices {
        return Ok(EquivVerdict::NotEquivalent(Mismatch::LeftMinimalIndices));
    }
    let t1 = regularizing_lft(&inv1);
    let t2 = regularizing_lft(&inv2);
    let reg1 = transform_invariants(&inv1, &t1);
    let reg2 = transform_invariants(&inv2, &t2);
    let xs = finite_points(&reg1);
    let ys = finite_points(&reg2);
    if xs.len() != ys.len() || signature_multiset(&xs) != signature_multiset(&ys) {
        return Ok(EquivVerdict::NotEquivalent(Mismatch::ElementaryDivisors));
    }

    // (II) match the point sets
    let Some(t) = match_points(&xs, &ys, mode)? else {
        return Ok(EquivVerdict::NotEquivalent(Mismatch::NoMatchingLft));
    };

    // (III) Alice moves s1's points onto s2's regularized points; Bob and
    // Charlie come from the shared canonical form
    let alice = t1.then(&t);
    let moved = alice.apply_pencil(s1.pencil());
    let target = t2.apply_pencil(s2.pencil());
    let moved_inv = transform_invariants(&inv1, &alice);
    if moved_inv != reg2 {
        return Err(Error::Internal("matched invariants disagree".into()));
    }
    let d1 = reduce_with_invariants(&moved, moved_inv)?;
    let d2 = reduce_with_invariants(&target, reg2)?;
    let (b, c) = compose_to(&d1, &d2)?;
    let witness = SloccWitness {
        a: &alice.matrix() * &t2.inverse().matrix(),
        b,
        c,
    };
    let image = apply_slocc(s1, &witness)?;
    if image.ratio_to(s2).is_none() || !witness.is_invertible() {
        return Err(Error::Internal("SLOCC witness failed verification".into()));
    }
    Ok(EquivVerdict::Equivalent(witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn ghz_and_w_pencils() {
        let g = state_to_pencil(&State::ghz());
        assert_eq!(g.r(), &Matrix::from_ints(&[&[1, 0], &[0, 0]]));
        assert_eq!(g.s(), &Matrix::from_ints(&[&[0, 0], &[0, 1]]));
        let w = state_to_pencil(&State::w());
        assert_eq!(w.r(), &Matrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(w.s(), &Matrix::from_ints(&[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn local_ranks_of_small_states() {
        assert_eq!(local_ranks(&State::ghz()), (2, 2, 2));
        let ab = State::from_basis(2, 2, &[(0, 0, 0), (1, 1, 0)]).unwrap();
        assert_eq!(local_ranks(&ab), (2, 2, 1));
        let bc = State::from_basis(2, 2, &[(0, 0, 0), (0, 1, 1)]).unwrap();
        assert_eq!(local_ranks(&bc), (1, 2, 2));
    }

    #[test]
    fn alice_hadamard_on_ghz() {
        let w = SloccWitness {
            a: Matrix::from_ints(&[&[1, 1], &[1, -1]]),
            b: Matrix::identity(2),
            c: Matrix::identity(2),
        };
        let out = apply_slocc(&State::ghz(), &w).unwrap();
        assert_eq!(out.pencil().r(), &Matrix::identity(2));
        assert_eq!(out.pencil().s(), &Matrix::from_ints(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn lft_examples() {
        let t = lft_from_three_pairs(&[(s(0), s(0)), (s(1), s(1)), (s(2), s(2))]).unwrap();
        assert_eq!(t, Lft::identity());
        let t = lft_from_three_pairs(&[(s(1), s(2)), (s(2), s(3)), (s(3), s(4))]).unwrap();
        assert_eq!(t, Lft::new(s(1), s(0), s(1), s(1)).unwrap());
        assert!(matches!(
            lft_from_three_pairs(&[(s(0), s(0)), (s(1), s(1)), (s(1), s(2))]),
            Err(Error::DegenerateTriple(_))
        ));
    }

    #[test]
    fn regularization_scan() {
        let ghz = kronecker_invariants(State::ghz().pencil()).unwrap();
        let t = regularizing_lft(&ghz);
        assert_eq!(t, Lft::new(s(1), s(1), s(0), s(1)).unwrap());
        let reg = transform_invariants(&ghz, &t);
        assert!(reg.infinite_divisors.is_empty());
        assert_eq!(reg.finite_divisors.len(), 2);

        let mut inv = ghz.clone();
        inv.finite_divisors = BTreeMap::from([(s(-1), vec![1])]);
        assert_eq!(regularizing_lft(&inv).d, s(2));
    }

    #[test]
    fn ghz_versus_w() {
        assert_eq!(
            slocc_equivalent(&State::ghz(), &State::w()).unwrap(),
            EquivVerdict::NotEquivalent(Mismatch::ElementaryDivisors)
        );
    }

    #[test]
    fn ghz_versus_alice_image() {
        let other =
            State::new(Matrix::identity(2), Matrix::from_ints(&[&[1, 0], &[0, -1]])).unwrap();
        match slocc_equivalent(&State::ghz(), &other).unwrap() {
            EquivVerdict::Equivalent(w) => {
                assert!(apply_slocc(&State::ghz(), &w)
                    .unwrap()
                    .ratio_to(&other)
                    .is_some())
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn state_file_round_trip() {
        let f: StateFile = State::w().into();
        assert_eq!(f.dims, [2, 2, 2]);
        assert_eq!(State::try_from(f).unwrap(), State::w());
        let bad = StateFile {
            dims: [2, 3, 2],
            amplitudes: State::w().amplitudes(),
        };
        assert!(State::try_from(bad).is_err());
    }
}
