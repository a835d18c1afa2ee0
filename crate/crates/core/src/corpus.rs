//! Seeded random corpora: canonical pencils with scrambled bases, random
//! invertible matrices and Gaussian-rational scalars.

use std::collections::BTreeMap;

use rand::Rng;

use crate::algebra::{Matrix, Scalar};
use crate::invariants::KroneckerInvariants;
use crate::pencil::Pencil;
use crate::slocc::SloccWitness;

/// A small Gaussian rational; real with probability one half.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let re = Scalar::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    if rng.gen_bool(0.5) {
        re
    } else {
        let im = Scalar::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
        &re + &(&im * &Scalar::I)
    }
}

/// Random invertible matrix with small integer entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| Scalar::from_int(rng.gen_range(-3..=3)));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Random invariants of a pencil of at most `max_rows x max_cols`, with
/// at least one row and one column. Eigenvalues are drawn from a pool of
/// three so repeated points are common.
pub fn random_invariants<R: Rng>(
    rng: &mut R,
    max_rows: usize,
    max_cols: usize,
) -> (KroneckerInvariants, usize, usize) {
    let pool: Vec<Scalar> = (0..3).map(|_| random_scalar(rng)).collect();
    loop {
        let mut inv = KroneckerInvariants {
            normal_rank: 0,
            right_minimal_indices: Vec::new(),
            left_minimal_indices: Vec::new(),
            finite_divisors: BTreeMap::new(),
            infinite_divisors: Vec::new(),
        };
        let blocks = rng.gen_range(1..=5);
        for _ in 0..blocks {
            match rng.gen_range(0..6) {
                0 => inv.right_minimal_indices.push(rng.gen_range(0..=3)),
                1 => inv.left_minimal_indices.push(rng.gen_range(0..=3)),
                2 => inv.infinite_divisors.push(rng.gen_range(1..=3)),
                _ => {
                    let x = pool[rng.gen_range(0..pool.len())].clone();
                    inv.finite_divisors
                        .entry(x)
                        .or_default()
                        .push(rng.gen_range(1..=3));
                }
            }
        }
        inv.right_minimal_indices.sort_unstable();
        inv.left_minimal_indices.sort_unstable();
        inv.infinite_divisors.sort_unstable();
        for d in inv.finite_divisors.values_mut() {
            d.sort_unstable();
        }
        inv.normal_rank = inv.right_minimal_indices.iter().sum::<usize>()
            + inv.left_minimal_indices.iter().sum::<usize>()
            + inv.regular_size();
        let (m, n) = inv.implied_shape();
        if (1..=max_rows).contains(&m) && (1..=max_cols).contains(&n) {
            return (inv, m, n);
        }
    }
}

/// A canonical pencil scrambled by random invertible `B0`, `C0`, together
/// with its generating invariants.
pub fn random_scrambled_pencil<R: Rng>(
    rng: &mut R,
    max_rows: usize,
    max_cols: usize,
) -> (Pencil, KroneckerInvariants) {
    let (inv, m, n) = random_invariants(rng, max_rows, max_cols);
    let k = crate::kronecker::canonical_pencil(&inv, m, n).expect("consistent by construction");
    let b0 = random_invertible(rng, m);
    let c0 = random_invertible(rng, n);
    (k.transform(&b0, &c0), inv)
}

/// Random pencil with small integer entries.
pub fn random_pencil<R: Rng>(rng: &mut R, m: usize, n: usize) -> Pencil {
    let mut f = || Matrix::from_fn(m, n, |_, _| Scalar::from_int(rng.gen_range(-2..=2)));
    let r = f();
    let s = f();
    Pencil::new(r, s).expect("equal shapes")
}

/// Random invertible local operators for a `2 x m x n` state.
pub fn random_witness<R: Rng>(rng: &mut R, m: usize, n: usize) -> SloccWitness {
    SloccWitness {
        a: random_invertible(rng, 2),
        b: random_invertible(rng, m),
        c: random_invertible(rng, n),
    }
}

fn fresh_point(inv: &KroneckerInvariants) -> Scalar {
    (0..)
        .map(Scalar::from_int)
        .find(|x| !inv.finite_divisors.contains_key(x))
        .expect("finitely many points")
}

/// Invariants of the same shape describing a different SLOCC class: the
/// minimal indices, the normal rank or the multiset of degree signatures
/// changes. `None` for `1 x 1`, where the only other tensor is zero.
pub fn perturb_class(inv: &KroneckerInvariants) -> Option<KroneckerInvariants> {
    let mut out = inv.clone();
    fn split(d: &mut Vec<usize>) -> Option<()> {
        let pos = d.iter().position(|&e| e >= 2)?;
        d[pos] -= 1;
        d.push(1);
        d.sort_unstable();
        Some(())
    }
    fn merge(d: &mut Vec<usize>) -> Option<()> {
        if d.iter().filter(|&&e| e == 1).count() < 2 {
            return None;
        }
        let pos = d.iter().position(|&e| e == 1).expect("counted");
        d.remove(pos);
        let pos = d.iter().position(|&e| e == 1).expect("counted");
        d[pos] = 2;
        d.sort_unstable();
        Some(())
    }
    for op in [split as fn(&mut Vec<usize>) -> Option<()>, merge] {
        if out.finite_divisors.values_mut().any(|d| op(d).is_some())
            || op(&mut out.infinite_divisors).is_some()
        {
            return Some(out);
        }
    }
    // every point is now simple
    let x = fresh_point(inv);
    let add_point =
        |o: &mut KroneckerInvariants| o.finite_divisors.entry(x.clone()).or_default().push(1);
    let remove_point = |o: &mut KroneckerInvariants| {
        if let Some(x) = o.finite_divisors.keys().next().cloned() {
            o.finite_divisors.remove(&x);
        } else {
            o.infinite_divisors.clear();
        }
    };
    let l = inv.regular_size();
    if let Some(pos) = out.right_minimal_indices.iter().position(|&e| e > 0) {
        out.right_minimal_indices[pos] -= 1;
        out.right_minimal_indices.sort_unstable();
        add_point(&mut out);
    } else if let Some(pos) = out.left_minimal_indices.iter().position(|&e| e > 0) {
        out.left_minimal_indices[pos] -= 1;
        out.left_minimal_indices.sort_unstable();
        add_point(&mut out);
    } else if l > 0 && out.zero_right() > 0 {
        // M1 and a zero column merge into L1
        remove_point(&mut out);
        out.right_minimal_indices[0] = 1;
        out.right_minimal_indices.sort_unstable();
    } else if l > 0 && out.zero_left() > 0 {
        remove_point(&mut out);
        out.left_minimal_indices[0] = 1;
        out.left_minimal_indices.sort_unstable();
    } else if out.zero_right() > 0 && out.zero_left() > 0 {
        out.right_minimal_indices.remove(0);
        out.left_minimal_indices.remove(0);
        out.normal_rank += 1;
        add_point(&mut out);
    } else if l >= 2 {
        // distinct simple points only: collide two of them
        remove_point(&mut out);
        let y = out.finite_divisors.keys().next().cloned();
        match y {
            Some(y) => out.finite_divisors.get_mut(&y).expect("present").push(1),
            None => out.infinite_divisors.push(1),
        }
    } else {
        return None;
    }
    Some(out)
}
