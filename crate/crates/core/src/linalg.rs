//! Fixed-size dense complex matrices for two- and three-level propagators.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat<const N: usize>(pub [[C64; N]; N]);

pub type Mat2 = Mat<2>;
pub type Mat3 = Mat<3>;

impl<const N: usize> Mat<N> {
    pub fn zeros() -> Self {
        Mat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn diag(entries: [C64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, e) in entries.into_iter().enumerate() {
            m.0[i][i] = e;
        }
        m
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        Mat(rows.map(|row| row.map(|x| C64::new(x, 0.0))))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[j][i] = self.0[i][j].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[j][i] = self.0[i][j];
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|e| *e *= s);
        m
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Row-sum (infinity) norm.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|e| e.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// max |(U†U − 1)_ij|.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::identity()).max_abs()
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [ZERO; N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    /// Matrix exponential by scaling and squaring with a Taylor series summed
    /// until the next term falls below 1e-16 relative to the partial sum.
    pub fn expm(&self) -> Self {
        let norm = self.norm_inf();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = self.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
        let mut sum = Self::identity();
        let mut term = Self::identity();
        for k in 1..=40 {
            term = (term * a).scale(C64::new(1.0 / k as f64, 0.0));
            sum = sum + term;
            if term.max_abs() <= 1e-16 * sum.max_abs() {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl<const N: usize> Default for Mat<N> {
    fn default() -> Self {
        Self::identity()
    }
}

impl<const N: usize> Index<(usize, usize)> for Mat<N> {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Mat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

/// Pauli matrices.
pub mod pauli {
    use super::{Mat2, C64, I, ZERO};

    pub fn x() -> Mat2 {
        Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn y() -> Mat2 {
        super::Mat([[ZERO, -I], [I, ZERO]])
    }

    pub fn z() -> Mat2 {
        Mat2::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// exp(i φ n̂·σ) for the (not necessarily unit) vector `v = φ n̂`.
    pub fn exp_i(v: [f64; 3]) -> Mat2 {
        let phi = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if phi == 0.0 {
            return Mat2::identity();
        }
        let (s, c) = phi.sin_cos();
        let [nx, ny, nz] = v.map(|x| x / phi);
        // cos φ · 1 + i sin φ (nx σx + ny σy + nz σz)
        super::Mat([
            [C64::new(c, s * nz), C64::new(s * ny, s * nx)],
            [C64::new(-s * ny, s * nx), C64::new(c, -s * nz)],
        ])
    }
}
