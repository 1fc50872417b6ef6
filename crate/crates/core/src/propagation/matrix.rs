use std::ops::Mul;

use num_complex::Complex64;

/// 2×2 complex matrix acting on `(b_s, b_i†)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferMatrix {
    pub m: [[Complex64; 2]; 2],
}

impl TransferMatrix {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            m: [[one, zero], [zero, one]],
        }
    }

    /// `[[1, f], [f*, 1]]`.
    pub fn element(f: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self {
            m: [[one, f], [f.conj(), one]],
        }
    }

    pub fn new(t11: Complex64, t12: Complex64, t21: Complex64, t22: Complex64) -> Self {
        Self {
            m: [[t11, t12], [t21, t22]],
        }
    }

    /// Zero-based entry access; `get(0, 1)` is T(1,2).
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    /// `element(f) · self` without forming the element matrix.
    pub fn apply_element(&self, f: Complex64) -> Self {
        let [[a, b], [c, d]] = self.m;
        let fc = f.conj();
        Self {
            m: [[a + f * c, b + f * d], [fc * a + c, fc * b + d]],
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Expected photon number `|T(1,2)|²` for vacuum input.
    pub fn photons(&self) -> f64 {
        self.m[0][1].norm_sqr()
    }

    pub fn gain(&self) -> f64 {
        self.m[0][0].norm()
    }

    /// `|T(1,1)|² − |T(1,2)|² − 1`, zero for an exact Bogoliubov map.
    pub fn bogoliubov_defect(&self) -> f64 {
        self.m[0][0].norm_sqr() - self.m[0][1].norm_sqr() - 1.0
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: Self) -> Self {
        let a = self.m;
        let b = rhs.m;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        TransferMatrix { m: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn element_determinant(re in -1.0f64..1.0, im in -1.0f64..1.0) {
            let f = Complex64::new(re, im);
            let d = TransferMatrix::element(f).determinant();
            prop_assert!((d - Complex64::new(1.0 - f.norm_sqr(), 0.0)).norm() < 1e-14);
        }

        #[test]
        fn apply_element_matches_product(
            a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0
        ) {
            let t = TransferMatrix::element(Complex64::new(a, b));
            let f = Complex64::new(c, d);
            let left = TransferMatrix::element(f) * t;
            prop_assert!(left.max_abs_diff(&t.apply_element(f)) < 1e-15);
        }
    }
}
