use std::fmt;

use rug::{Complex, Float};

use crate::combinatorics::binom_int;
use crate::error::{Error, Result};

/// Dense complex matrix at a fixed binary precision, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    prec: u32,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        ComplexMatrix {
            rows,
            cols,
            prec,
            data: vec![Complex::new(prec); rows * cols],
        }
    }

    pub fn identity(dim: usize, prec: u32) -> Self {
        let mut m = Self::zeros(dim, dim, prec);
        for i in 0..dim {
            m[(i, i)] = Complex::with_val(prec, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>, prec: u32) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            prec,
            data: rows
                .into_iter()
                .flatten()
                .map(|z| Complex::with_val(prec, z))
                .collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows, self.prec);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone().conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let prec = self.prec.max(other.prec);
        let mut out = Self::zeros(self.rows, other.cols, prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.real().is_zero() && a.imag().is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = Complex::with_val(prec, a * &other[(k, j)]);
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> Float {
        let mut best = Float::with_val(self.prec, 0);
        for z in &self.data {
            let a = Float::with_val(self.prec, z.abs_ref());
            if a > best {
                best = a;
            }
        }
        best
    }

    /// Frobenius norm, an upper bound on the operator 2-norm.
    pub fn frobenius(&self) -> Float {
        let mut acc = Float::with_val(self.prec, 0);
        for z in &self.data {
            acc += Float::with_val(self.prec, z.norm_ref());
        }
        acc.sqrt()
    }

    pub fn determinant_2x2(&self) -> Result<Complex> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::DimensionMismatch("expected a 2x2 matrix".into()));
        }
        let ad = Complex::with_val(self.prec, &self[(0, 0)] * &self[(1, 1)]);
        let bc = Complex::with_val(self.prec, &self[(0, 1)] * &self[(1, 0)]);
        Ok(ad - bc)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = &self[(i, j)];
                    format!("{:.12}{:+.12}i", z.real().to_f64(), z.imag().to_f64())
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A validated 2×2 special unitary matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Su2 {
    m: ComplexMatrix,
}

impl Su2 {
    /// Accepts `u` when `‖u†u - I‖` and `|det u - 1|` are at most `2^-40`.
    pub fn new(u: ComplexMatrix) -> Result<Self> {
        if u.rows() != 2 || u.cols() != 2 {
            return Err(Error::DimensionMismatch("SU(2) element must be 2x2".into()));
        }
        let prec = u.prec();
        let tol = Float::with_val(prec, Float::i_exp(1, -40));
        let dev = u.adjoint().mul(&u)?.sub(&ComplexMatrix::identity(2, prec))?.max_abs();
        let det = u.determinant_2x2()? - Complex::with_val(prec, 1);
        let det_dev = Float::with_val(prec, det.abs_ref());
        if dev > tol || det_dev > tol {
            let worst = if dev > det_dev { dev } else { det_dev };
            return Err(Error::NotSpecialUnitary(format!("{:.3e}", worst.to_f64())));
        }
        Ok(Su2 { m: u })
    }

    pub fn identity(prec: u32) -> Self {
        Su2 {
            m: ComplexMatrix::identity(2, prec),
        }
    }

    /// The unit quaternion `w + xi + yj + zk` as `[[w - iz, -ix - y], [-ix + y, w + iz]]`.
    /// The input is normalized first.
    pub fn from_quaternion(q: [Float; 4], prec: u32) -> Result<Self> {
        let [w, x, y, z] = q.map(|v| Float::with_val(prec, v));
        let norm = Float::with_val(prec, &w * &w + &x * &x)
            + Float::with_val(prec, &y * &y + &z * &z);
        if norm.is_zero() {
            return Err(Error::Precondition("zero quaternion".into()));
        }
        let s = norm.sqrt();
        let (w, x, y, z) = (w / &s, x / &s, y / &s, z / &s);
        let c = |re: Float, im: Float| Complex::with_val(prec, (re, im));
        let rows = vec![
            vec![
                c(w.clone(), Float::with_val(prec, -&z)),
                c(Float::with_val(prec, -&y), Float::with_val(prec, -&x)),
            ],
            vec![c(y, Float::with_val(prec, -&x)), c(w, z)],
        ];
        Self::new(ComplexMatrix::from_rows(rows, prec)?)
    }

    /// `cos(θ/2)·I - i·sin(θ/2)·(n·σ)` for a (not necessarily unit) axis `n`.
    pub fn from_axis_angle(axis: [Float; 3], angle: &Float, prec: u32) -> Result<Self> {
        let half = Float::with_val(prec, angle / 2u32);
        let (sin, cos) = half.sin_cos(Float::new(prec));
        let [nx, ny, nz] = axis.map(|v| Float::with_val(prec, v));
        let norm = (Float::with_val(prec, &nx * &nx) + Float::with_val(prec, &ny * &ny)
            + Float::with_val(prec, &nz * &nz))
        .sqrt();
        if norm.is_zero() {
            return Err(Error::Precondition("zero rotation axis".into()));
        }
        let scale = Float::with_val(prec, &sin / &norm);
        Self::from_quaternion(
            [
                cos,
                Float::with_val(prec, &nx * &scale),
                Float::with_val(prec, &ny * &scale),
                Float::with_val(prec, &nz * &scale),
            ],
            prec,
        )
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn prec(&self) -> u32 {
        self.m.prec()
    }

    pub fn mul(&self, other: &Su2) -> Su2 {
        Su2 {
            m: self.m.mul(&other.m).expect("2x2 times 2x2"),
        }
    }
}

/// Spin-`J` representation matrix of `u`, rows and columns ordered by
/// descending projection `m = J, J-1, …, -J`, so that `J = 1/2` gives `u`.
///
/// Entries come from expanding `(a x + c y)^(J+m) (b x + d y)^(J-m)` over
/// the monomials `x^(J+m') y^(J-m')` and rescaling to the orthonormal basis.
pub fn wigner_d(two_j: u32, u: &Su2, precision_bits: u32) -> ComplexMatrix {
    let prec = precision_bits.max(53);
    let n = two_j as usize;
    let um = u.matrix();
    let entry = |i, j| Complex::with_val(prec, &um[(i, j)]);
    let powers = |z: Complex| {
        let mut v = Vec::with_capacity(n + 1);
        let mut acc = Complex::with_val(prec, 1);
        for _ in 0..=n {
            v.push(acc.clone());
            acc *= &z;
        }
        v
    };
    let pa = powers(entry(0, 0));
    let pb = powers(entry(0, 1));
    let pc = powers(entry(1, 0));
    let pd = powers(entry(1, 1));
    let tj = i64::from(two_j);
    let mut out = ComplexMatrix::zeros(n + 1, n + 1, prec);
    for row in 0..=n {
        let pp = tj - row as i64; // J + m'
        for col in 0..=n {
            let p = tj - col as i64; // J + m
            let mut acc = Complex::new(prec);
            for k in 0..=p {
                let l = pp - p + k;
                if l < 0 || l > tj - p {
                    continue;
                }
                let coeff = binom_int(p, k) * binom_int(tj - p, l);
                let mut term = Complex::with_val(prec, &pa[(p - k) as usize] * &pc[k as usize]);
                term *= &pb[l as usize];
                term *= &pd[(tj - p - l) as usize];
                term *= Float::with_val(prec, &coeff);
                acc += term;
            }
            let ratio = Float::with_val(prec, binom_int(tj, p))
                / Float::with_val(prec, binom_int(tj, pp));
            acc *= ratio.sqrt();
            out[(row, col)] = acc;
        }
    }
    out
}
