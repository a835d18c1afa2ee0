//! Matrix pencils `mu*R + lambda*S` and the canonical building blocks.

use serde::{Deserialize, Serialize};

use crate::algebra::upoly;
use crate::algebra::{HomoPoly2, Matrix, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawPencil", into = "RawPencil")]
pub struct Pencil {
    r: Matrix,
    s: Matrix,
}

#[derive(Serialize, Deserialize)]
struct RawPencil {
    #[serde(rename = "R")]
    r: Matrix,
    #[serde(rename = "S")]
    s: Matrix,
}

impl TryFrom<RawPencil> for Pencil {
    type Error = Error;
    fn try_from(raw: RawPencil) -> Result<Self> {
        Pencil::new(raw.r, raw.s)
    }
}

impl From<Pencil> for RawPencil {
    fn from(p: Pencil) -> Self {
        RawPencil { r: p.r, s: p.s }
    }
}

impl Pencil {
    pub fn new(r: Matrix, s: Matrix) -> Result<Self> {
        if r.shape() != s.shape() {
            return Err(Error::DimensionMismatch(format!(
                "R is {}x{} but S is {}x{}",
                r.rows(),
                r.cols(),
                s.rows(),
                s.cols()
            )));
        }
        Ok(Pencil { r, s })
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Pencil {
            r: Matrix::zeros(m, n),
            s: Matrix::zeros(m, n),
        }
    }

    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn s(&self) -> &Matrix {
        &self.s
    }

    pub fn rows(&self) -> usize {
        self.r.rows()
    }

    pub fn cols(&self) -> usize {
        self.r.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.r.shape()
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// The scalar matrix `mu*R + lambda*S`.
    pub fn eval(&self, mu: &Scalar, lambda: &Scalar) -> Matrix {
        Matrix::lin_comb(mu, &self.r, lambda, &self.s)
    }

    pub fn transpose(&self) -> Pencil {
        Pencil {
            r: self.r.transpose(),
            s: self.s.transpose(),
        }
    }

    /// `B (mu R + lambda S) C^T`.
    pub fn transform(&self, b: &Matrix, c: &Matrix) -> Pencil {
        let ct = c.transpose();
        self.transform_raw(b, &ct)
    }

    /// `left (mu R + lambda S) right`.
    pub fn transform_raw(&self, left: &Matrix, right: &Matrix) -> Pencil {
        Pencil {
            r: &(left * &self.r) * right,
            s: &(left * &self.s) * right,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Pencil {
        Pencil {
            r: self.r.submatrix(rows, cols),
            s: self.s.submatrix(rows, cols),
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Pencil {
        Pencil {
            r: self.r.block(r0, c0, rows, cols),
            s: self.s.block(r0, c0, rows, cols),
        }
    }

    pub fn block_diag(blocks: &[Pencil]) -> Pencil {
        let rs: Vec<Matrix> = blocks.iter().map(|b| b.r.clone()).collect();
        let ss: Vec<Matrix> = blocks.iter().map(|b| b.s.clone()).collect();
        Pencil {
            r: Matrix::block_diag(&rs),
            s: Matrix::block_diag(&ss),
        }
    }

    /// `L_eps`: `eps x (eps+1)`, lambda on the diagonal, mu on the superdiagonal.
    pub fn l_block(eps: usize) -> Pencil {
        let mut p = Pencil::zeros(eps, eps + 1);
        for i in 0..eps {
            p.s[(i, i)] = Scalar::ONE;
            p.r[(i, i + 1)] = Scalar::ONE;
        }
        p
    }

    /// `L_nu^T`: `(nu+1) x nu`.
    pub fn lt_block(nu: usize) -> Pencil {
        Pencil::l_block(nu).transpose()
    }

    /// `N^e = mu I + lambda H`.
    pub fn n_block(e: usize) -> Pencil {
        let mut p = Pencil {
            r: Matrix::identity(e),
            s: Matrix::zeros(e, e),
        };
        for i in 0..e.saturating_sub(1) {
            p.s[(i, i + 1)] = Scalar::ONE;
        }
        p
    }

    /// `M^e(x) = (mu x + lambda) I + mu H`.
    pub fn m_block(x: &Scalar, e: usize) -> Pencil {
        let mut p = Pencil {
            r: Matrix::identity(e).scale(x),
            s: Matrix::identity(e),
        };
        for i in 0..e.saturating_sub(1) {
            p.r[(i, i + 1)] = Scalar::ONE;
        }
        p
    }

    /// Determinant of a square pencil as a homogeneous polynomial of degree
    /// `n`, by exact interpolation of `det(R + t S)` at `n + 1` points.
    pub fn determinant(&self) -> HomoPoly2 {
        assert_eq!(
            self.rows(),
            self.cols(),
            "determinant of a non-square pencil"
        );
        let n = self.rows();
        let xs: Vec<Scalar> = (0..=n as i64).map(Scalar::from_int).collect();
        let ys: Vec<Scalar> = xs
            .iter()
            .map(|t| self.eval(&Scalar::ONE, t).det())
            .collect();
        HomoPoly2::homogenize(&upoly::interpolate(&xs, &ys), n)
    }

    /// Entry `(i, j)` as a linear form.
    pub fn entry(&self, i: usize, j: usize) -> HomoPoly2 {
        HomoPoly2::new(vec![self.r[(i, j)].clone(), self.s[(i, j)].clone()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_blocks_have_expected_determinants() {
        let x = Scalar::from_int(3);
        // (mu*3 + lambda)^2
        assert_eq!(
            Pencil::m_block(&x, 2).determinant(),
            HomoPoly2::linear(&x).pow(2)
        );
        assert_eq!(Pencil::n_block(3).determinant(), HomoPoly2::mu_power(3));
        let l1 = Pencil::l_block(1);
        assert_eq!(l1.shape(), (1, 2));
        assert_eq!(l1.entry(0, 0), HomoPoly2::linear(&Scalar::ZERO));
        assert_eq!(l1.entry(0, 1), HomoPoly2::mu_power(1));
        assert_eq!(Pencil::lt_block(2).shape(), (3, 2));
        assert_eq!(Pencil::l_block(0).shape(), (0, 1));
    }

    #[test]
    fn ghz_determinant() {
        let p = Pencil::new(
            Matrix::from_ints(&[&[1, 0], &[0, 0]]),
            Matrix::from_ints(&[&[0, 0], &[0, 1]]),
        )
        .unwrap();
        // mu * lambda
        assert_eq!(
            p.determinant(),
            HomoPoly2::new(vec![Scalar::ZERO, Scalar::ONE, Scalar::ZERO])
        );
    }

    #[test]
    fn mismatched_shapes_rejected() {
        let e = Pencil::new(Matrix::zeros(2, 2), Matrix::zeros(2, 3));
        assert!(matches!(e, Err(Error::DimensionMismatch(_))));
    }
}
