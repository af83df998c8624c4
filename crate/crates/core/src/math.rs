//! Small fixed-size linear algebra: 3-vectors, 3x3 matrices and a dense
//! 6x6 solver for the shooting Jacobian.

use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);
    pub const E1: Vec3 = Vec3([1.0, 0.0, 0.0]);
    pub const E2: Vec3 = Vec3([0.0, 1.0, 0.0]);
    pub const E3: Vec3 = Vec3([0.0, 0.0, 1.0]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.dot(self))
    }

    pub fn scale(&self, k: f64) -> Vec3 {
        Vec3([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    /// Returns `None` for a zero-length vector.
    pub fn normalized(&self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self.scale(1.0 / n))
        } else {
            None
        }
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        self.scale(k)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

/// Row-major 3x3 matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn diag(d: Vec3) -> Mat3 {
        Mat3([[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]])
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Mat3 {
        Mat3([
            [c0[0], c1[0], c2[0]],
            [c0[1], c1[1], c2[1]],
            [c0[2], c1[2], c2[2]],
        ])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        let a = &self.0;
        Mat3([
            [a[0][0], a[1][0], a[2][0]],
            [a[0][1], a[1][1], a[2][1]],
            [a[0][2], a[1][2], a[2][2]],
        ])
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let a = &self.0;
        Vec3([
            a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
        ])
    }

    /// `self^T * v` without forming the transpose.
    pub fn tmul_vec(&self, v: &Vec3) -> Vec3 {
        let a = &self.0;
        Vec3([
            a[0][0] * v[0] + a[1][0] * v[1] + a[2][0] * v[2],
            a[0][1] * v[0] + a[1][1] * v[1] + a[2][1] * v[2],
            a[0][2] * v[0] + a[1][2] * v[1] + a[2][2] * v[2],
        ])
    }

    pub fn mul_mat(&self, b: &Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.0[i][k] * b.0[k][j]).sum();
            }
        }
        Mat3(out)
    }

    pub fn scale(&self, k: f64) -> Mat3 {
        let mut out = self.0;
        out.iter_mut().flatten().for_each(|c| *c *= k);
        Mat3(out)
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    pub fn frobenius(&self) -> f64 {
        sqrt(self.0.iter().flatten().map(|c| c * c).sum())
    }

    /// `‖RᵀR − I‖_F`.
    pub fn orthogonality_error(&self) -> f64 {
        let g = self.transpose().mul_mat(self);
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let d = g.0[i][j] - if i == j { 1.0 } else { 0.0 };
                acc += d * d;
            }
        }
        sqrt(acc)
    }

    /// Projects back onto SO(3): normalize the first column, rebuild the
    /// third from the cross product with the second, then close the frame.
    pub fn reorthonormalized(&self) -> Option<Mat3> {
        let x = self.col(0).normalized()?;
        let z = x.cross(&self.col(1)).normalized()?;
        let y = z.cross(&x);
        Some(Mat3::from_cols(x, y, z))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|c| c.is_finite())
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self.0;
        for (r, ro) in out.iter_mut().zip(o.0.iter()) {
            for (c, co) in r.iter_mut().zip(ro.iter()) {
                *c += co;
            }
        }
        Mat3(out)
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + o.scale(-1.0)
    }
}

/// Skew-symmetric map: `hat(v) * w == v × w`.
pub fn hat(v: Vec3) -> Mat3 {
    let [x, y, z] = v.0;
    Mat3([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
}

/// Solves `a x = b` for a 6x6 system by Gaussian elimination with partial
/// pivoting. Returns `None` when a pivot falls below `pivot_tol` times the
/// largest entry of `a`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve6(mut a: [[f64; 6]; 6], mut b: [f64; 6], pivot_tol: f64) -> Option<[f64; 6]> {
    let scale = a.iter().flatten().fold(0.0_f64, |m, v| m.max(abs(*v)));
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    for col in 0..6 {
        let (piv, pval) = (col..6)
            .map(|r| (r, abs(a[r][col])))
            .fold(
                (col, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pval <= pivot_tol * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..6 {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..6 {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; 6];
    for r in (0..6).rev() {
        let tail: f64 = (r + 1..6).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    if x.iter().all(|v| v.is_finite()) {
        Some(x)
    } else {
        None
    }
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;

    #[test]
    fn hat_of_zero_is_zero() {
        assert_eq!(hat(Vec3::ZERO), Mat3::ZERO);
    }

    #[test]
    fn hat_of_e1() {
        assert_eq!(
            hat(Vec3::E1).0,
            [[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]
        );
    }

    #[test]
    fn hat_is_skew() {
        let s = hat(Vec3::new(0.3, -1.2, 2.5));
        assert_eq!(s + s.transpose(), Mat3::ZERO);
    }

    #[test]
    fn reorthonormalize_keeps_rotation() {
        let r = Mat3([[1.0, 1e-3, 0.0], [0.0, 1.0, 2e-3], [-1e-3, 0.0, 1.0]]);
        let q = r.reorthonormalized().unwrap();
        assert!(q.orthogonality_error() < 1e-14);
        assert!((q.det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn solve6_recovers_known_solution() {
        let mut a = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                a[i][j] = 1.0 / (1.0 + i as f64 + j as f64) + if i == j { 2.0 } else { 0.0 };
            }
        }
        let x = [1.0, -2.0, 3.0, 0.5, -0.25, 4.0];
        let mut b = [0.0; 6];
        for i in 0..6 {
            b[i] = (0..6).map(|j| a[i][j] * x[j]).sum();
        }
        let got = solve6(a, b, 1e-14).unwrap();
        for i in 0..6 {
            assert!((got[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn solve6_rejects_singular() {
        let mut a = [[0.0; 6]; 6];
        for i in 0..5 {
            a[i][i] = 1.0;
        }
        assert!(solve6(a, [1.0; 6], 1e-14).is_none());
    }
}
