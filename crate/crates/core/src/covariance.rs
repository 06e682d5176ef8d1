//! Group covariance of AE and spin codes under finite subgroups of SU(2).
//!
//! A code is covariant when every Wigner matrix `D(u)` maps the codespace
//! into itself. The residual reported per element is `‖DΠD† − Π‖₂`, which
//! for equal-rank projectors equals the largest singular value of
//! `(I − Π)·D·V` with `V` an orthonormal basis of the codespace.

use std::fmt;

use rug::float::Constant;
use rug::{Complex, Float};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::angular::{wigner_d, ComplexMatrix, Su2};
use crate::codes::{CodeBasis, CodeKind};
use crate::error::{Error, Result};

/// Used by [`logical_action`], which has no tolerance argument.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Closure enumeration gives up past this many elements.
const MAX_GROUP_ORDER: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupFamily {
    BinaryOctahedral,
    BinaryIcosahedral,
    BinaryDihedral,
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupFamily::BinaryOctahedral => "2O",
            GroupFamily::BinaryIcosahedral => "2I",
            GroupFamily::BinaryDihedral => "BD",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    family: GroupFamily,
    order_param: u32,
}

impl GroupSpec {
    pub fn binary_octahedral() -> Self {
        GroupSpec {
            family: GroupFamily::BinaryOctahedral,
            order_param: 0,
        }
    }

    pub fn binary_icosahedral() -> Self {
        GroupSpec {
            family: GroupFamily::BinaryIcosahedral,
            order_param: 0,
        }
    }

    /// Generated by `iX`, `iZ` and `diag(e^{-iπ/2b}, e^{iπ/2b})`.
    pub fn binary_dihedral(b: u32) -> Result<Self> {
        if b == 0 {
            return Err(Error::Precondition("binary dihedral parameter must be positive".into()));
        }
        Ok(GroupSpec {
            family: GroupFamily::BinaryDihedral,
            order_param: b,
        })
    }

    /// Accepts `2o`, `2i` and `bd` (case-insensitive); `b` is used for `bd`.
    pub fn parse(name: &str, b: Option<u32>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "2o" => Ok(Self::binary_octahedral()),
            "2i" => Ok(Self::binary_icosahedral()),
            "bd" => Self::binary_dihedral(b.unwrap_or(4)),
            other => Err(Error::Precondition(format!("unknown group {other:?}"))),
        }
    }

    pub fn family(&self) -> GroupFamily {
        self.family
    }

    pub fn order_param(&self) -> u32 {
        self.order_param
    }

    pub fn expected_order(&self) -> usize {
        match self.family {
            GroupFamily::BinaryOctahedral => 48,
            GroupFamily::BinaryIcosahedral => 120,
            GroupFamily::BinaryDihedral => 8 * self.order_param as usize,
        }
    }

    pub fn name(&self) -> String {
        match self.family {
            GroupFamily::BinaryDihedral => format!("BD(b={})", self.order_param),
            f => f.to_string(),
        }
    }

    /// Named generators at the given precision.
    pub fn generators(&self, prec: u32) -> Result<Vec<(String, Su2)>> {
        let f = |v: f64| Float::with_val(prec, v);
        let c = |re: Float, im: Float| Complex::with_val(prec, (re, im));
        match self.family {
            GroupFamily::BinaryOctahedral => {
                let half = f(0.5);
                let r = Float::with_val(prec, 2u32).sqrt().recip();
                Ok(vec![
                    (
                        "(1+i+j+k)/2".into(),
                        Su2::from_quaternion([half.clone(), half.clone(), half.clone(), half], prec)?,
                    ),
                    (
                        "(1+i)/sqrt2".into(),
                        Su2::from_quaternion([r.clone(), r, f(0.0), f(0.0)], prec)?,
                    ),
                ])
            }
            GroupFamily::BinaryIcosahedral => {
                let angle = Float::with_val(prec, Constant::Pi) * 2u32 / 5u32;
                let s5 = Float::with_val(prec, 5u32).sqrt();
                let axis = [Float::with_val(prec, -2) / &s5, f(0.0), s5.recip()];
                Ok(vec![
                    (
                        "rot(z,2pi/5)".into(),
                        Su2::from_axis_angle([f(0.0), f(0.0), f(1.0)], &angle, prec)?,
                    ),
                    ("rot(n,2pi/5)".into(), Su2::from_axis_angle(axis, &angle, prec)?),
                ])
            }
            GroupFamily::BinaryDihedral => {
                let zero = || f(0.0);
                let one = || f(1.0);
                let ix = ComplexMatrix::from_rows(
                    vec![vec![c(zero(), zero()), c(zero(), one())], vec![c(zero(), one()), c(zero(), zero())]],
                    prec,
                )?;
                let iz = ComplexMatrix::from_rows(
                    vec![vec![c(zero(), one()), c(zero(), zero())], vec![c(zero(), zero()), c(zero(), -one())]],
                    prec,
                )?;
                let phi = Float::with_val(prec, Constant::Pi) / (2 * self.order_param);
                let (s, co) = phi.sin_cos(Float::new(prec));
                let rot = ComplexMatrix::from_rows(
                    vec![
                        vec![c(co.clone(), Float::with_val(prec, -&s)), c(zero(), zero())],
                        vec![c(zero(), zero()), c(co, s)],
                    ],
                    prec,
                )?;
                Ok(vec![
                    ("iX".into(), Su2::new(ix)?),
                    ("iZ".into(), Su2::new(iz)?),
                    (format!("diag(e^-ipi/{0},e^ipi/{0})", 2 * self.order_param), Su2::new(rot)?),
                ])
            }
        }
    }

    /// All group elements, by closure of the generators under multiplication.
    pub fn enumerate(&self, prec: u32) -> Result<Vec<Su2>> {
        let gens: Vec<Su2> = self.generators(prec)?.into_iter().map(|(_, g)| g).collect();
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        let same = |a: &Su2, b: &Su2| {
            a.matrix().sub(b.matrix()).expect("2x2").max_abs() < tol
        };
        let mut elems = vec![Su2::identity(prec)];
        let mut frontier = 0;
        while frontier < elems.len() {
            let e = elems[frontier].clone();
            frontier += 1;
            for g in &gens {
                let p = e.mul(g);
                if !elems.iter().any(|x| same(x, &p)) {
                    elems.push(p);
                    if elems.len() > MAX_GROUP_ORDER {
                        return Err(Error::Precondition(format!(
                            "{} generates more than {MAX_GROUP_ORDER} elements",
                            self.name()
                        )));
                    }
                }
            }
        }
        Ok(elems)
    }

    /// Checks that closure enumeration yields the expected order.
    pub fn validate(&self, prec: u32) -> Result<usize> {
        let order = self.enumerate(prec)?.len();
        if order != self.expected_order() {
            return Err(Error::Precondition(format!(
                "{} closes at {order} elements, expected {}",
                self.name(),
                self.expected_order()
            )));
        }
        Ok(order)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("GroupSpec", 4)?;
        st.serialize_field("family", &self.family.to_string())?;
        st.serialize_field("order_param", &self.order_param)?;
        st.serialize_field("order", &self.expected_order())?;
        let names: Vec<String> = self
            .generators(64)
            .map(|g| g.into_iter().map(|(n, _)| n).collect())
            .unwrap_or_default();
        st.serialize_field("generators", &names)?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct CovarianceReport {
    pub group: GroupSpec,
    pub group_order: usize,
    pub precision_bits: u32,
    pub tolerance: f64,
    pub max_residual: Float,
    pub pass: bool,
    pub per_generator: Vec<(String, Float)>,
}

fn render(v: &Float) -> String {
    format!("{:.6e}", v.to_f64())
}

impl Serialize for CovarianceReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CovarianceReport", 7)?;
        st.serialize_field("group", &self.group)?;
        st.serialize_field("group_order", &self.group_order)?;
        st.serialize_field("precision_bits", &self.precision_bits)?;
        st.serialize_field("tolerance", &self.tolerance)?;
        st.serialize_field("max_residual", &render(&self.max_residual))?;
        st.serialize_field("pass", &self.pass)?;
        let per: serde_json::Map<String, serde_json::Value> = self
            .per_generator
            .iter()
            .map(|(n, r)| (n.clone(), serde_json::Value::String(render(r))))
            .collect();
        st.serialize_field("per_generator", &per)?;
        st.end()
    }
}

/// Code vectors as columns, rows in descending-m order to match [`wigner_d`].
fn code_columns(c: &CodeBasis, prec: u32) -> ComplexMatrix {
    let dim = c.two_j() as usize + 1;
    let mut m = ComplexMatrix::zeros(dim, c.dimension(), prec);
    for (col, v) in c.basis().iter().enumerate() {
        for (idx, e) in v.iter().enumerate() {
            m[(dim - 1 - idx, col)] = Complex::with_val(prec, e.to_float(prec));
        }
    }
    m
}

/// Modified Gram-Schmidt on the columns of `v`.
pub fn orthonormalize(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    let prec = v.prec();
    let mut out = v.clone();
    for j in 0..v.cols() {
        for i in 0..j {
            let mut dot = Complex::new(prec);
            for r in 0..v.rows() {
                dot += Complex::with_val(prec, out[(r, i)].conj_ref()) * &out[(r, j)];
            }
            for r in 0..v.rows() {
                let sub = Complex::with_val(prec, &dot * &out[(r, i)]);
                out[(r, j)] -= sub;
            }
        }
        let mut norm = Float::new(prec);
        for r in 0..v.rows() {
            norm += Float::with_val(prec, out[(r, j)].norm_ref());
        }
        let norm = norm.sqrt();
        if norm < Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2)) {
            return Err(Error::Precondition("code vectors are linearly dependent".into()));
        }
        for r in 0..v.rows() {
            out[(r, j)] /= &norm;
        }
    }
    Ok(out)
}

/// Largest eigenvalue of a real symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
fn symmetric_max_eigenvalue(mut a: Vec<Vec<Float>>, prec: u32) -> Float {
    let n = a.len();
    if n == 0 {
        return Float::new(prec);
    }
    let scale = a.iter().flatten().fold(Float::new(prec), |m, v| {
        let av = Float::with_val(prec, v.abs_ref());
        if av > m { av } else { m }
    });
    let eps = Float::with_val(prec, &scale * Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 4)));
    for _sweep in 0..100 {
        let mut off = Float::new(prec);
        for p in 0..n {
            for q in p + 1..n {
                let v = Float::with_val(prec, a[p][q].abs_ref());
                if v > off {
                    off = v;
                }
            }
        }
        if off <= eps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].is_zero() {
                    continue;
                }
                let theta = Float::with_val(prec, &a[q][q] - &a[p][p]) / Float::with_val(prec, &a[p][q] * 2u32);
                let root = (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
                let mut t = (Float::with_val(prec, theta.abs_ref()) + root).recip();
                if theta.is_sign_negative() {
                    t = -t;
                }
                let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
                let s = Float::with_val(prec, &t * &c);
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p].clone(), row[q].clone());
                    row[p] = Float::with_val(prec, &c * &akp) - Float::with_val(prec, &s * &akq);
                    row[q] = Float::with_val(prec, &s * &akp) + Float::with_val(prec, &c * &akq);
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k].clone(), a[q][k].clone());
                    a[p][k] = Float::with_val(prec, &c * &apk) - Float::with_val(prec, &s * &aqk);
                    a[q][k] = Float::with_val(prec, &s * &apk) + Float::with_val(prec, &c * &aqk);
                }
            }
        }
    }
    (0..n).map(|i| a[i][i].clone()).fold(Float::with_val(prec, f64::NEG_INFINITY), |m, v| if v > m { v } else { m })
}

/// Largest singular value of a complex matrix.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<Float> {
    let prec = m.prec();
    let g = m.adjoint().mul(m)?;
    let k = g.rows();
    // real embedding [[Re, -Im], [Im, Re]] of the Hermitian Gram matrix
    let mut a = vec![vec![Float::new(prec); 2 * k]; 2 * k];
    for i in 0..k {
        for j in 0..k {
            let re = g[(i, j)].real().clone();
            let im = g[(i, j)].imag().clone();
            a[i][j] = re.clone();
            a[i + k][j + k] = re;
            a[i][j + k] = Float::with_val(prec, -&im);
            a[i + k][j] = im;
        }
    }
    let lam = symmetric_max_eigenvalue(a, prec);
    Ok(if lam.is_sign_negative() { Float::new(prec) } else { lam.sqrt() })
}

/// `‖(I − VV†)·D·V‖₂` for orthonormal columns `V`.
pub fn subspace_residual(v: &ComplexMatrix, d: &ComplexMatrix) -> Result<Float> {
    let w = d.mul(v)?;
    let proj = v.mul(&v.adjoint().mul(&w)?)?;
    spectral_norm(&w.sub(&proj)?)
}

fn check_inputs(c: &CodeBasis, tolerance: f64, prec: u32) -> Result<()> {
    if c.kind() == CodeKind::Pi {
        return Err(Error::WrongKind {
            expected: "AE or SPIN".into(),
            found: c.kind().to_string(),
        });
    }
    let floor = Float::with_val(64, Float::i_exp(1, 20 - prec as i32));
    if tolerance.is_nan() || tolerance < floor {
        return Err(Error::Precondition(format!(
            "tolerance {tolerance:e} is below 2^(20-{prec})"
        )));
    }
    Ok(())
}

fn build_report(
    c: &CodeBasis,
    g: &GroupSpec,
    tolerance: f64,
    prec: u32,
    elements: Vec<(String, Su2)>,
    group_order: usize,
) -> Result<CovarianceReport> {
    let v = orthonormalize(&code_columns(c, prec))?;
    let mut per = Vec::with_capacity(elements.len());
    let mut max = Float::new(prec);
    for (name, u) in elements {
        let r = subspace_residual(&v, &wigner_d(c.two_j(), &u, prec))?;
        if r > max {
            max = r.clone();
        }
        per.push((name, r));
    }
    let pass = max.to_f64() <= tolerance;
    Ok(CovarianceReport {
        group: g.clone(),
        group_order,
        precision_bits: prec,
        tolerance,
        max_residual: max,
        pass,
        per_generator: per,
    })
}

/// Residual of every generator against the codespace; the group is
/// validated by closure enumeration first.
pub fn check_covariance(
    c: &CodeBasis,
    g: &GroupSpec,
    tolerance: f64,
    precision_bits: u32,
) -> Result<CovarianceReport> {
    check_inputs(c, tolerance, precision_bits)?;
    let order = g.validate(precision_bits)?;
    let gens = g.generators(precision_bits)?;
    build_report(c, g, tolerance, precision_bits, gens, order)
}

/// Like [`check_covariance`] but over every group element.
pub fn check_covariance_full(
    c: &CodeBasis,
    g: &GroupSpec,
    tolerance: f64,
    precision_bits: u32,
) -> Result<CovarianceReport> {
    check_inputs(c, tolerance, precision_bits)?;
    let elems = g.enumerate(precision_bits)?;
    let order = elems.len();
    if order != g.expected_order() {
        return Err(Error::Precondition(format!("{} closes at {order} elements", g.name())));
    }
    let named = elems.into_iter().enumerate().map(|(i, u)| (format!("g{i}"), u)).collect();
    build_report(c, g, tolerance, precision_bits, named, order)
}

/// `L[i][j] = ⟨c_i|D(u)|c_j⟩` in the orthonormalized code basis. Rejects
/// `u` whose covariance residual exceeds [`DEFAULT_TOLERANCE`].
pub fn logical_action(c: &CodeBasis, u: &Su2, precision_bits: u32) -> Result<ComplexMatrix> {
    check_inputs(c, DEFAULT_TOLERANCE, precision_bits)?;
    let v = orthonormalize(&code_columns(c, precision_bits))?;
    let d = wigner_d(c.two_j(), u, precision_bits);
    let r = subspace_residual(&v, &d)?;
    if r.to_f64() > DEFAULT_TOLERANCE {
        return Err(Error::NotCovariant(format!("residual {}", render(&r))));
    }
    v.adjoint().mul(&d.mul(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_closed_form() {
        let prec = 128;
        let f = |v: f64| Float::with_val(prec, v);
        // eigenvalues of [[2,1,0],[1,2,0],[0,0,-5]] are 3, 1, -5
        let a = vec![
            vec![f(2.0), f(1.0), f(0.0)],
            vec![f(1.0), f(2.0), f(0.0)],
            vec![f(0.0), f(0.0), f(-5.0)],
        ];
        let lam = symmetric_max_eigenvalue(a, prec);
        assert!(Float::with_val(prec, lam - 3u32).abs() < 1e-35);
    }

    #[test]
    fn group_orders() {
        let prec = 128;
        assert_eq!(GroupSpec::binary_octahedral().validate(prec).unwrap(), 48);
        assert_eq!(GroupSpec::binary_icosahedral().validate(prec).unwrap(), 120);
        for b in 1..=5 {
            assert_eq!(GroupSpec::binary_dihedral(b).unwrap().validate(prec).unwrap(), 8 * b as usize);
        }
    }
}
