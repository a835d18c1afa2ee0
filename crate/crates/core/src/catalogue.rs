//! Finite SLOCC classes of `2 x m x n` states: enumeration, tensor rank,
//! classification, and the search for non-invertible conversions.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix, Scalar, SpanBuilder};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::invariants::{kronecker_invariants, normal_rank, KroneckerInvariants};
use crate::kronecker::canonical_pencil;
use crate::pencil::Pencil;
use crate::slocc::{
    apply_local_maps, pencil_to_state, regularizing_lft, slocc_equivalent_with,
    transform_invariants, EquivVerdict, SloccWitness, State,
};

/// Tensor rank of a pencil from its invariants, after moving every divisor
/// to a finite point: `sum (eps + 1) + sum (nu + 1) + l + delta` over the
/// nonzero minimal indices, where `delta` counts invariant polynomials with
/// a nonlinear elementary divisor.
pub fn tensor_rank_of_invariants(inv: &KroneckerInvariants) -> usize {
    let inv = transform_invariants(inv, &regularizing_lft(inv));
    let singular: usize = inv
        .right_minimal_indices
        .iter()
        .chain(&inv.left_minimal_indices)
        .filter(|&&e| e > 0)
        .map(|e| e + 1)
        .sum();
    // the i-th largest degree at every point lands in the same invariant
    // polynomial, so delta is the largest per-point count of degrees >= 2
    let delta = inv
        .finite_divisors
        .values()
        .map(|d| d.iter().filter(|&&e| e >= 2).count())
        .max()
        .unwrap_or(0);
    singular + inv.regular_size() + delta
}

pub fn tensor_rank(s: &State) -> Result<usize> {
    Ok(tensor_rank_of_invariants(&kronecker_invariants(
        s.pencil(),
    )?))
}

/// Block structure of a finite class with its zero blocks stripped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Structure {
    /// Positive right minimal indices, ascending.
    right: Vec<usize>,
    /// Positive left minimal indices, ascending.
    left: Vec<usize>,
    /// One entry per divisor point: its degrees, ascending. Sorted into
    /// canonical point order.
    signatures: Vec<Vec<usize>>,
}

impl Structure {
    fn from_invariants(inv: &KroneckerInvariants) -> Self {
        let positive = |v: &[usize]| v.iter().copied().filter(|&e| e > 0).collect::<Vec<_>>();
        let mut signatures: Vec<Vec<usize>> = inv.points().into_iter().map(|(_, d)| d).collect();
        sort_signatures(&mut signatures);
        Structure {
            right: positive(&inv.right_minimal_indices),
            left: positive(&inv.left_minimal_indices),
            signatures,
        }
    }

    fn rows(&self) -> usize {
        self.right.iter().sum::<usize>()
            + self.left.iter().map(|v| v + 1).sum::<usize>()
            + self.regular_size()
    }

    fn cols(&self) -> usize {
        self.right.iter().map(|e| e + 1).sum::<usize>()
            + self.left.iter().sum::<usize>()
            + self.regular_size()
    }

    fn regular_size(&self) -> usize {
        self.signatures.iter().flatten().sum()
    }

    /// Invariants with `h x g` zero block and points `0, 1, 2, ...`.
    fn invariants(&self, m: usize, n: usize) -> KroneckerInvariants {
        let h = m - self.rows();
        let g = n - self.cols();
        let mut right = vec![0; g];
        right.extend(&self.right);
        let mut left = vec![0; h];
        left.extend(&self.left);
        let finite_divisors: BTreeMap<Scalar, Vec<usize>> = self
            .signatures
            .iter()
            .enumerate()
            .map(|(i, d)| (Scalar::from_int(i as i64), d.clone()))
            .collect();
        let normal_rank = self.right.iter().sum::<usize>()
            + self.left.iter().sum::<usize>()
            + self.regular_size();
        KroneckerInvariants {
            normal_rank,
            right_minimal_indices: right,
            left_minimal_indices: left,
            finite_divisors,
            infinite_divisors: Vec::new(),
        }
    }

    fn label(&self, m: usize, n: usize) -> String {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let mut parts = Vec::new();
        let (h, g) = (m - self.rows(), n - self.cols());
        if h > 0 || g > 0 {
            parts.push(format!("zero[{h}x{g}]"));
        }
        if !self.right.is_empty() {
            parts.push(format!("eps[{}]", list(&self.right)));
        }
        if !self.left.is_empty() {
            parts.push(format!("nu[{}]", list(&self.left)));
        }
        for (point, degrees) in self.signatures.iter().enumerate() {
            for e in degrees.iter().rev() {
                parts.push(format!("M{e}({point})"));
            }
        }
        parts.join("+")
    }
}

/// Canonical point order: larger total degree first, then the degree
/// multiset in descending lexicographic order.
fn sort_signatures(signatures: &mut [Vec<usize>]) {
    for d in signatures.iter_mut() {
        d.sort_unstable();
    }
    signatures.sort_by(|a, b| {
        let ta: usize = a.iter().sum();
        let tb: usize = b.iter().sum();
        let da: Vec<usize> = a.iter().rev().copied().collect();
        let db: Vec<usize> = b.iter().rev().copied().collect();
        tb.cmp(&ta).then(db.cmp(&da))
    });
}

/// A finite SLOCC class in `2 x m x n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub m: usize,
    pub n: usize,
    /// Invariants with divisor points normalized to `0, 1, 2`.
    pub inv: KroneckerInvariants,
    pub local_ranks: (usize, usize, usize),
    pub tensor_rank: usize,
    pub label: String,
    pub aliases: Vec<String>,
}

impl ClassDescriptor {
    fn from_structure(st: &Structure, m: usize, n: usize) -> Self {
        let inv = st.invariants(m, n);
        let rep = canonical_pencil(&inv, m, n).expect("structure fits");
        let ra = Matrix::flatten_rows(&[rep.r(), rep.s()]).rank();
        let local_ranks = (ra, st.rows(), st.cols());
        let tensor_rank = tensor_rank_of_invariants(&inv);
        ClassDescriptor {
            m,
            n,
            label: st.label(m, n),
            aliases: aliases(st, local_ranks),
            inv,
            local_ranks,
            tensor_rank,
        }
    }

    fn structure(&self) -> Structure {
        Structure::from_invariants(&self.inv)
    }

    /// The canonical pencil of the class as a state.
    pub fn representative(&self) -> State {
        pencil_to_state(&self.representative_pencil()).expect("nonzero class")
    }

    pub fn representative_pencil(&self) -> Pencil {
        canonical_pencil(&self.inv, self.m, self.n).expect("consistent descriptor")
    }

    /// The representative without its zero rows and columns.
    fn essential_pencil(&self) -> Pencil {
        let st = self.structure();
        let inv = st.invariants(st.rows(), st.cols());
        canonical_pencil(&inv, st.rows(), st.cols()).expect("consistent structure")
    }

    fn zero_block(&self) -> (usize, usize) {
        (self.inv.zero_left(), self.inv.zero_right())
    }
}

impl fmt::Display for ClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.local_ranks;
        write!(f, "{} ({a},{b},{c}) rank {}", self.label, self.tensor_rank)?;
        if !self.aliases.is_empty() {
            write!(f, " [{}]", self.aliases.join(", "))?;
        }
        Ok(())
    }
}

fn aliases(st: &Structure, ranks: (usize, usize, usize)) -> Vec<String> {
    let mut out = Vec::new();
    match ranks {
        (1, 1, 1) => out.push("A:B:C".to_string()),
        (2, 2, 1) => out.push("AB:C".to_string()),
        (2, 1, 2) => out.push("AC:B".to_string()),
        (1, b, c) if b == c && b >= 2 => out.push("A:BC".to_string()),
        _ => {}
    }
    if st.right.is_empty() && st.left.is_empty() {
        if st.signatures == vec![vec![1], vec![1]] {
            out.push("GHZ".to_string());
        } else if st.signatures == vec![vec![2]] {
            out.push("W".to_string());
        }
    }
    out
}

/// Normalized descriptor of a state's class.
pub fn classify(s: &State) -> Result<ClassDescriptor> {
    let inv = kronecker_invariants(s.pencil())?;
    let (m, n) = s.dims();
    let points = inv.points().len();
    if points > 3 {
        return Err(Error::InfiniteFamilies(format!(
            "{points} distinct divisor points; classes with four or more points form continuous families"
        )));
    }
    Ok(ClassDescriptor::from_structure(
        &Structure::from_invariants(&inv),
        m,
        n,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalogue {
    pub m: usize,
    pub n: usize,
    pub classes: Vec<ClassDescriptor>,
}

impl Catalogue {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn find(&self, d: &ClassDescriptor) -> Option<usize> {
        self.classes.iter().position(|c| c == d)
    }
}

/// Partitions of `n` into parts `<= max`, each as a descending list.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Ascending multisets of positive integers with weighted size at most
/// `budget`, each part `p` costing `cost(p)`.
fn multisets(budget: usize, min_part: usize, cost: &dyn Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for p in min_part..=budget {
        if cost(p) > budget {
            break;
        }
        for mut rest in multisets(budget - cost(p), p, cost) {
            rest.insert(0, p);
            out.push(rest);
        }
    }
    out
}

/// Multisets of signatures (point groups) of total degree `l` on at most
/// `max_points` points, in canonical order.
fn signature_sets(l: usize, max_points: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(
        left: usize,
        points: usize,
        bound: Option<&Vec<usize>>,
        all: &[Vec<usize>],
        acc: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if left == 0 {
            let mut s = acc.clone();
            sort_signatures(&mut s);
            out.push(s);
            return;
        }
        if points == 0 {
            return;
        }
        for sig in all {
            // enumerate nonincreasing sequences to avoid repeats
            if bound.is_some_and(|b| sig > b) {
                continue;
            }
            let t: usize = sig.iter().sum();
            if t > left {
                continue;
            }
            acc.push(sig.clone());
            rec(left - t, points - 1, Some(sig), all, acc, out);
            acc.pop();
        }
    }
    let all: Vec<Vec<usize>> = (1..=l)
        .flat_map(|t| partitions(t, t))
        .map(|mut p| {
            p.reverse();
            p
        })
        .collect();
    let mut out = Vec::new();
    rec(l, max_points, None, &all, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// All finite classes of `2 x m x n` states, or
/// [`Error::InfiniteFamilies`] when a regular part with four distinct
/// points fits.
pub fn enumerate_classes(m: usize, n: usize) -> Result<Catalogue> {
    enumerate_classes_with(m, n, ExecMode::default())
}

pub fn enumerate_classes_with(m: usize, n: usize, mode: ExecMode) -> Result<Catalogue> {
    if m == 0 || n == 0 {
        return Err(Error::DimensionMismatch(format!("empty system 2x{m}x{n}")));
    }
    if m.min(n) >= 4 {
        return Err(Error::InfiniteFamilies(
            "M1(x1)+M1(x2)+M1(x3)+M1(x4): a 4x4 regular part with four distinct points, \
             whose cross-ratio is an SLOCC invariant"
                .to_string(),
        ));
    }
    let mut structures = Vec::new();
    let rights = multisets(n, 1, &|e| e + 1);
    for right in &rights {
        let (r_rows, r_cols): (usize, usize) =
            (right.iter().sum(), right.iter().map(|e| e + 1).sum());
        if r_rows > m || r_cols > n {
            continue;
        }
        for left in multisets(m - r_rows, 1, &|v| v + 1) {
            let rows = r_rows + left.iter().map(|v| v + 1).sum::<usize>();
            let cols = r_cols + left.iter().sum::<usize>();
            if rows > m || cols > n {
                continue;
            }
            let lmax = (m - rows).min(n - cols);
            for l in 0..=lmax {
                for signatures in signature_sets(l, 3) {
                    let st = Structure {
                        right: right.clone(),
                        left: left.clone(),
                        signatures,
                    };
                    if st.rows() > 0 {
                        structures.push(st);
                    }
                }
            }
        }
    }
    let mut classes = exec::map(mode, &structures, |st| {
        ClassDescriptor::from_structure(st, m, n)
    });
    classes.sort_by(|a, b| {
        (a.local_ranks, a.tensor_rank, &a.label).cmp(&(b.local_ranks, b.tensor_rank, &b.label))
    });
    Ok(Catalogue { m, n, classes })
}

/// Why a conversion is impossible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    /// Some local rank of the target exceeds the source's.
    LocalRankIncrease { party: char },
    /// The target's tensor rank exceeds the source's.
    TensorRankIncrease,
    /// Equal local ranks force invertible local maps, so only the source
    /// class itself is reachable.
    NoLocalRankDrop,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::LocalRankIncrease { party } => {
                write!(f, "local rank of {party} increases")
            }
            Obstruction::TensorRankIncrease => write!(f, "tensor rank increases"),
            Obstruction::NoLocalRankDrop => {
                write!(f, "no local rank drops between distinct classes")
            }
        }
    }
}

/// Local maps `(A, B, C)`, possibly singular or rectangular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalMaps {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
}

/// A verified conversion from a source representative to a target one.
///
/// Indices refer to rows and columns of the source representative pencil.
/// Each kept row (column) receives the listed multiples of the deleted rows
/// (columns), in the order of `deleted_rows` (`deleted_columns`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionWitness {
    /// `(v1, v2)` when Alice projects onto `v1 R + v2 S`.
    pub alice_projection: Option<(Scalar, Scalar)>,
    pub deleted_rows: Vec<usize>,
    pub row_coefficients: Vec<Vec<Scalar>>,
    pub deleted_columns: Vec<usize>,
    pub column_coefficients: Vec<Vec<Scalar>>,
    /// Invertible maps taking the modified subpencil to the target class.
    pub residual: SloccWitness,
    /// End-to-end maps: `maps(src representative) = scale * dst representative`.
    pub maps: LocalMaps,
    pub scale: Scalar,
    /// Candidates examined before the hit.
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvertVerdict {
    Convertible(Box<ConversionWitness>),
    Obstructed(Obstruction),
    /// The search budget ran out without a witness or an obstruction.
    Undecided {
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvertOptions {
    /// Maximum number of candidates examined.
    pub budget: usize,
    pub seed: u64,
    /// Use tensor-rank increase as an obstruction.
    pub tensor_rank_obstruction: bool,
    /// Within the structured grid, prefer a candidate whose invariants equal
    /// the target representative's exactly over the first one in the
    /// target class.
    pub prefer_exact: bool,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            budget: 10_000,
            seed: 0,
            tensor_rank_obstruction: true,
            prefer_exact: true,
        }
    }
}

/// Coefficient grid tried before random sampling, in order.
pub fn coefficient_grid() -> Vec<Scalar> {
    [
        (0, 1),
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (1, 2),
        (-1, 2),
        (3, 2),
        (-3, 2),
    ]
    .into_iter()
    .map(|(a, b)| Scalar::from_ratio(a, b))
    .collect()
}

/// Index vectors in `{0..=level}^len` whose maximum is `level`, in
/// lexicographic order.
struct LevelVectors {
    level: usize,
    current: Option<Vec<usize>>,
}

impl LevelVectors {
    fn new(len: usize, level: usize) -> Self {
        let start = if len == 0 {
            (level == 0).then(Vec::new)
        } else {
            Some(vec![0; len])
        };
        let mut it = LevelVectors {
            level,
            current: start,
        };
        if it.current.as_ref().is_some_and(|v| !it.accept(v)) {
            it.advance();
        }
        it
    }

    fn accept(&self, v: &[usize]) -> bool {
        v.iter().copied().max().unwrap_or(0) == self.level
    }

    fn advance(&mut self) {
        loop {
            let Some(v) = self.current.as_mut() else {
                return;
            };
            let Some(pos) = v.iter().rposition(|&x| x < self.level) else {
                self.current = None;
                return;
            };
            v[pos] += 1;
            for x in v.iter_mut().skip(pos + 1) {
                *x = 0;
            }
            let v = self.current.as_ref().expect("set above").clone();
            if self.accept(&v) {
                return;
            }
        }
    }
}

impl Iterator for LevelVectors {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            acc.push(i);
            rec(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A deletion of `deleted` among `total` indices: the `kept x total` map
/// sending each kept index `j` to `e_j + sum coeff[j][i] e_deleted[i]`.
fn deletion_map(total: usize, deleted: &[usize], coeffs: &[Vec<Scalar>]) -> Matrix {
    let kept: Vec<usize> = (0..total).filter(|i| !deleted.contains(i)).collect();
    let mut m = Matrix::zeros(kept.len(), total);
    for (row, &j) in kept.iter().enumerate() {
        m[(row, j)] = Scalar::ONE;
        for (i, &d) in deleted.iter().enumerate() {
            m[(row, d)] = coeffs[row][i].clone();
        }
    }
    m
}

fn split_coefficients(flat: &[Scalar], kept: usize, deleted: usize) -> Vec<Vec<Scalar>> {
    (0..kept)
        .map(|j| flat[j * deleted..(j + 1) * deleted].to_vec())
        .collect()
}

/// A concrete candidate: Alice projection, row and column deletions with
/// coefficients.
struct Candidate {
    alice: Option<(Scalar, Scalar)>,
    deleted_rows: Vec<usize>,
    row_coefficients: Vec<Vec<Scalar>>,
    deleted_columns: Vec<usize>,
    column_coefficients: Vec<Vec<Scalar>>,
}

enum Hit {
    Exact,
    Class,
}

struct Search<'a> {
    src: &'a Pencil,
    dst: &'a Pencil,
    dst_inv: KroneckerInvariants,
    dst_structure: Structure,
}

impl Search<'_> {
    /// Applies the candidate to the essential source pencil.
    fn subpencil(&self, c: &Candidate) -> Option<(Pencil, Matrix, Matrix, Matrix)> {
        let (rows, cols) = self.src.shape();
        let (a, base) = match &c.alice {
            Some((v1, v2)) => {
                let a = Matrix::from_rows(vec![
                    vec![Scalar::ZERO, v1.clone()],
                    vec![Scalar::ZERO, v2.clone()],
                ]);
                let p = Pencil::new(Matrix::zeros(rows, cols), self.src.eval(v1, v2)).ok()?;
                (a, p)
            }
            None => (Matrix::identity(2), self.src.clone()),
        };
        let b = deletion_map(rows, &c.deleted_rows, &c.row_coefficients);
        let cm = deletion_map(cols, &c.deleted_columns, &c.column_coefficients);
        Some((base.transform(&b, &cm), a, b, cm))
    }

    fn check(&self, p: &Pencil) -> Option<Hit> {
        if p.is_zero() || normal_rank(p) != self.dst_inv.normal_rank {
            return None;
        }
        let inv = kronecker_invariants(p).ok()?;
        if inv == self.dst_inv {
            return Some(Hit::Exact);
        }
        let same =
            inv.points().len() <= 3 && Structure::from_invariants(&inv) == self.dst_structure;
        same.then_some(Hit::Class)
    }

    /// Residual SLOCC witness for a hit; builds the full conversion.
    fn finish(
        &self,
        cand: Candidate,
        src_desc: &ClassDescriptor,
        dst_desc: &ClassDescriptor,
        samples: usize,
    ) -> Result<ConversionWitness> {
        let (sub, a1, b1, c1) = self
            .subpencil(&cand)
            .ok_or_else(|| Error::Internal("candidate vanished".into()))?;
        let sub_state = pencil_to_state(&sub)?;
        let dst_state = pencil_to_state(self.dst)?;
        let residual = match slocc_equivalent_with(&sub_state, &dst_state, ExecMode::Sequential)? {
            EquivVerdict::Equivalent(w) => w,
            EquivVerdict::NotEquivalent(why) => {
                return Err(Error::Internal(format!(
                    "matched candidate is not equivalent: {why}"
                )))
            }
        };
        let a = &a1 * &residual.a;
        let b = &residual.b * &b1;
        let c = &residual.c * &c1;
        // embed the essential maps next to the zero blocks
        let (sh, sg) = src_desc.zero_block();
        let (dh, dg) = dst_desc.zero_block();
        let mut b_full = Matrix::zeros(dst_desc.m, src_desc.m);
        b_full.set_block(dh, sh, &b);
        let mut c_full = Matrix::zeros(dst_desc.n, src_desc.n);
        c_full.set_block(dg, sg, &c);
        let image = apply_local_maps(&src_desc.representative_pencil(), &a, &b_full, &c_full)?;
        let scale = pencil_to_state(&image)?
            .ratio_to(&dst_desc.representative())
            .ok_or_else(|| Error::Internal("conversion witness failed verification".into()))?;
        let shift = |v: Vec<usize>, by: usize| v.into_iter().map(|i| i + by).collect();
        Ok(ConversionWitness {
            alice_projection: cand.alice,
            deleted_rows: shift(cand.deleted_rows, sh),
            row_coefficients: cand.row_coefficients,
            deleted_columns: shift(cand.deleted_columns, sg),
            column_coefficients: cand.column_coefficients,
            residual,
            maps: LocalMaps {
                a,
                b: b_full,
                c: c_full,
            },
            scale,
            samples,
        })
    }
}

/// Picks `k` rows and `k` columns of `m` with a nonsingular minor.
fn nonsingular_minor(m: &Matrix, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut rows = Vec::new();
    let mut span = SpanBuilder::new(m.cols());
    for i in 0..m.rows() {
        if rows.len() == k {
            break;
        }
        if span.insert(m.row(i)) {
            rows.push(i);
        }
    }
    let sub = m.submatrix(&rows, &(0..m.cols()).collect::<Vec<_>>());
    let mut cols = Vec::new();
    let mut span = SpanBuilder::new(rows.len());
    for j in 0..sub.cols() {
        if cols.len() == k {
            break;
        }
        if span.insert(&sub.column(j)) {
            cols.push(j);
        }
    }
    (rows.len() == k && cols.len() == k).then_some((rows, cols))
}

fn complement(total: usize, kept: &[usize]) -> Vec<usize> {
    (0..total).filter(|i| !kept.contains(i)).collect()
}

/// Searches for a non-invertible SLOCC conversion from `src` to `dst`.
pub fn convertibility(
    src: &ClassDescriptor,
    dst: &ClassDescriptor,
    budget: usize,
    seed: u64,
) -> ConvertVerdict {
    convertibility_with(
        src,
        dst,
        &ConvertOptions {
            budget,
            seed,
            ..ConvertOptions::default()
        },
    )
}

pub fn convertibility_with(
    src: &ClassDescriptor,
    dst: &ClassDescriptor,
    opts: &ConvertOptions,
) -> ConvertVerdict {
    let (sa, sb, sc) = src.local_ranks;
    let (da, db, dc) = dst.local_ranks;
    for (party, s, d) in [('A', sa, da), ('B', sb, db), ('C', sc, dc)] {
        if d > s {
            return ConvertVerdict::Obstructed(Obstruction::LocalRankIncrease { party });
        }
    }
    if opts.tensor_rank_obstruction && dst.tensor_rank > src.tensor_rank {
        return ConvertVerdict::Obstructed(Obstruction::TensorRankIncrease);
    }
    let same_class = src.structure() == dst.structure();
    if src.local_ranks == dst.local_ranks && !same_class {
        return ConvertVerdict::Obstructed(Obstruction::NoLocalRankDrop);
    }
    match search(src, dst, opts) {
        Ok(Some(w)) => ConvertVerdict::Convertible(Box::new(w)),
        _ => ConvertVerdict::Undecided {
            samples: opts.budget,
        },
    }
}

fn search(
    src: &ClassDescriptor,
    dst: &ClassDescriptor,
    opts: &ConvertOptions,
) -> Result<Option<ConversionWitness>> {
    let src_p = src.essential_pencil();
    let dst_p = dst.essential_pencil();
    let dst_inv = kronecker_invariants(&dst_p)?;
    let search = Search {
        src: &src_p,
        dst: &dst_p,
        dst_structure: Structure::from_invariants(&dst_inv),
        dst_inv,
    };
    let (rb, rc) = src_p.shape();
    let (kb, kc) = (rb - dst_p.rows(), rc - dst_p.cols());
    let grid = coefficient_grid();
    let mut samples = 0usize;

    if src.local_ranks.0 == 2 && dst.local_ranks.0 == 1 {
        // Alice projects onto one matrix of the pencil; its rank must reach
        // the target's Schmidt rank
        let k = dst_p.rows();
        let pairs: Vec<(Scalar, Scalar)> = (0..grid.len())
            .flat_map(|level| {
                LevelVectors::new(2, level).map(|ix| (grid[ix[0]].clone(), grid[ix[1]].clone()))
            })
            .filter(|(a, b)| !(a.is_zero() && b.is_zero()))
            .collect();
        for (v1, v2) in pairs {
            if samples >= opts.budget {
                return Ok(None);
            }
            samples += 1;
            let m = src_p.eval(&v1, &v2);
            let Some((rows, cols)) = nonsingular_minor(&m, k) else {
                continue;
            };
            let deleted_rows = complement(rb, &rows);
            let deleted_columns = complement(rc, &cols);
            let cand = Candidate {
                alice: Some((v1, v2)),
                row_coefficients: vec![vec![Scalar::ZERO; deleted_rows.len()]; k],
                column_coefficients: vec![vec![Scalar::ZERO; deleted_columns.len()]; k],
                deleted_rows,
                deleted_columns,
            };
            let (sub, ..) = search.subpencil(&cand).expect("projection exists");
            if search.check(&sub).is_some() {
                return search.finish(cand, src, dst, samples).map(Some);
            }
        }
        return Ok(None);
    }

    let row_sets = subsets(rb, kb);
    let col_sets = subsets(rc, kc);
    let n_row_coeffs = kb * (rb - kb);
    let n_col_coeffs = kc * (rc - kc);
    let make = |dr: &Vec<usize>, dc: &Vec<usize>, flat: &[Scalar]| Candidate {
        alice: None,
        deleted_rows: dr.clone(),
        row_coefficients: split_coefficients(&flat[..n_row_coeffs], rb - kb, kb),
        deleted_columns: dc.clone(),
        column_coefficients: split_coefficients(&flat[n_row_coeffs..], rc - kc, kc),
    };
    let mut first_class_hit: Option<(Candidate, usize)> = None;
    for level in 0..grid.len() {
        for dr in &row_sets {
            for dc in &col_sets {
                for ix in LevelVectors::new(n_row_coeffs + n_col_coeffs, level) {
                    if samples >= opts.budget {
                        return finish_class_hit(&search, first_class_hit, src, dst);
                    }
                    samples += 1;
                    let flat: Vec<Scalar> = ix.iter().map(|&i| grid[i].clone()).collect();
                    let cand = make(dr, dc, &flat);
                    let Some((sub, ..)) = search.subpencil(&cand) else {
                        continue;
                    };
                    match search.check(&sub) {
                        Some(Hit::Exact) => {
                            return search.finish(cand, src, dst, samples).map(Some)
                        }
                        Some(Hit::Class) if !opts.prefer_exact => {
                            return search.finish(cand, src, dst, samples).map(Some)
                        }
                        Some(Hit::Class) if first_class_hit.is_none() => {
                            first_class_hit = Some((cand, samples))
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    if first_class_hit.is_some() {
        return finish_class_hit(&search, first_class_hit, src, dst);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    while samples < opts.budget {
        samples += 1;
        let dr = &row_sets[rng.gen_range(0..row_sets.len())];
        let dc = &col_sets[rng.gen_range(0..col_sets.len())];
        let flat: Vec<Scalar> = (0..n_row_coeffs + n_col_coeffs)
            .map(|_| Scalar::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
            .collect();
        let cand = make(dr, dc, &flat);
        let Some((sub, ..)) = search.subpencil(&cand) else {
            continue;
        };
        if search.check(&sub).is_some() {
            return search.finish(cand, src, dst, samples).map(Some);
        }
    }
    Ok(None)
}

fn finish_class_hit(
    search: &Search<'_>,
    hit: Option<(Candidate, usize)>,
    src: &ClassDescriptor,
    dst: &ClassDescriptor,
) -> Result<Option<ConversionWitness>> {
    match hit {
        Some((cand, samples)) => search.finish(cand, src, dst, samples).map(Some),
        None => Ok(None),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyEdge {
    pub src: usize,
    pub dst: usize,
    pub witness: ConversionWitness,
}

/// Conversion graph over a catalogue: nodes index into `nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hierarchy {
    pub nodes: Vec<ClassDescriptor>,
    pub edges: Vec<HierarchyEdge>,
    pub undecided: Vec<(usize, usize)>,
}

impl Hierarchy {
    /// Drops edges implied by a two-step path.
    pub fn transitive_reduction(&self) -> Hierarchy {
        let has = |a: usize, b: usize| self.edges.iter().any(|e| e.src == a && e.dst == b);
        let edges = self
            .edges
            .iter()
            .filter(|e| {
                !(0..self.nodes.len())
                    .any(|k| k != e.src && k != e.dst && has(e.src, k) && has(k, e.dst))
            })
            .cloned()
            .collect();
        Hierarchy {
            nodes: self.nodes.clone(),
            edges,
            undecided: self.undecided.clone(),
        }
    }
}

/// Pairwise convertibility over the catalogue of `2 x m x n`.
pub fn hierarchy(m: usize, n: usize, budget: usize, seed: u64) -> Result<Hierarchy> {
    hierarchy_with(
        m,
        n,
        &ConvertOptions {
            budget,
            seed,
            prefer_exact: false,
            ..ConvertOptions::default()
        },
        ExecMode::default(),
    )
}

pub fn hierarchy_with(
    m: usize,
    n: usize,
    opts: &ConvertOptions,
    mode: ExecMode,
) -> Result<Hierarchy> {
    let cat = enumerate_classes_with(m, n, mode)?;
    let k = cat.classes.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let verdicts = exec::map(mode, &pairs, |&(i, j)| {
        convertibility_with(&cat.classes[i], &cat.classes[j], opts)
    });
    let mut edges = Vec::new();
    let mut undecided = Vec::new();
    for (&(i, j), v) in pairs.iter().zip(verdicts) {
        match v {
            ConvertVerdict::Convertible(w) => edges.push(HierarchyEdge {
                src: i,
                dst: j,
                witness: *w,
            }),
            ConvertVerdict::Undecided { .. } => undecided.push((i, j)),
            ConvertVerdict::Obstructed(_) => {}
        }
    }
    Ok(Hierarchy {
        nodes: cat.classes,
        edges,
        undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_ranks_of_named_states() {
        assert_eq!(tensor_rank(&State::ghz()).unwrap(), 2);
        assert_eq!(tensor_rank(&State::w()).unwrap(), 3);
        let l3 = pencil_to_state(&Pencil::l_block(3)).unwrap();
        assert_eq!(tensor_rank(&l3).unwrap(), 4);
        let product = State::from_basis(3, 6, &[(0, 0, 0)]).unwrap();
        assert_eq!(tensor_rank(&product).unwrap(), 1);
    }

    #[test]
    fn partitions_and_signatures() {
        assert_eq!(partitions(4, 4).len(), 5);
        // l = 2 on <= 3 points: [1][1], [2], [1,1]
        assert_eq!(signature_sets(2, 3).len(), 3);
        // l = 3: [1][1][1], [2][1], [1,1][1], [3], [2,1], [1,1,1]
        assert_eq!(signature_sets(3, 3).len(), 6);
    }

    #[test]
    fn level_vectors_cover_the_grid_once() {
        let all: Vec<Vec<usize>> = (0..3).flat_map(|l| LevelVectors::new(2, l)).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(LevelVectors::new(0, 0).count(), 1);
        assert_eq!(LevelVectors::new(0, 1).count(), 0);
    }

    #[test]
    fn small_catalogues() {
        let c = enumerate_classes(2, 2).unwrap();
        assert_eq!(c.count(), 6);
        let names: Vec<&str> = c
            .classes
            .iter()
            .flat_map(|d| d.aliases.iter().map(String::as_str))
            .collect();
        for a in ["A:B:C", "AB:C", "AC:B", "A:BC", "GHZ", "W"] {
            assert!(names.contains(&a), "{a} missing");
        }
        assert_eq!(enumerate_classes(2, 4).unwrap().count(), 9);
        assert!(matches!(
            enumerate_classes(4, 4),
            Err(Error::InfiniteFamilies(_))
        ));
    }

    #[test]
    fn classify_named_states() {
        let g = classify(&State::ghz()).unwrap();
        assert_eq!(
            (g.aliases.clone(), g.tensor_rank),
            (vec!["GHZ".to_string()], 2)
        );
        let w = classify(&State::w()).unwrap();
        assert_eq!(
            (w.aliases.clone(), w.tensor_rank),
            (vec!["W".to_string()], 3)
        );
        let p = classify(&State::from_basis(2, 2, &[(0, 0, 0)]).unwrap()).unwrap();
        assert_eq!((p.local_ranks, p.tensor_rank), ((1, 1, 1), 1));
    }

    #[test]
    fn ghz_converts_to_bipartite_classes() {
        let c = enumerate_classes(2, 2).unwrap();
        let by = |a: &str| {
            c.classes
                .iter()
                .find(|d| d.aliases.iter().any(|x| x == a))
                .unwrap()
        };
        match convertibility(by("GHZ"), by("AB:C"), 1000, 0) {
            ConvertVerdict::Convertible(w) => assert_eq!(w.deleted_columns.len(), 1),
            v => panic!("{v:?}"),
        }
        assert!(matches!(
            convertibility(by("GHZ"), by("A:BC"), 1000, 0),
            ConvertVerdict::Convertible(_)
        ));
        assert_eq!(
            convertibility(by("GHZ"), by("W"), 1000, 0),
            ConvertVerdict::Obstructed(Obstruction::TensorRankIncrease)
        );
        assert_eq!(
            convertibility(by("W"), by("GHZ"), 1000, 0),
            ConvertVerdict::Obstructed(Obstruction::NoLocalRankDrop)
        );
        assert_eq!(
            convertibility(by("AB:C"), by("AC:B"), 1000, 0),
            ConvertVerdict::Obstructed(Obstruction::LocalRankIncrease { party: 'C' })
        );
    }
}
