//! Transition and rotation error operators as exact sparse matrices.
//!
//! `E^{r,δJ}_{δm}` sends `|J, m⟩` to `C^{J+δJ, m+δm}_{J,m; r,δm} |J+δJ, m+δm⟩`.
//! Its proportionality constant is fixed to 1: correctability depends only on
//! the span of the error set.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::angular::{clebsch_gordan, CgIndex, HalfInt};
use crate::error::{Error, Result};
use crate::exactnum::{RadicalSum, SqrtRational, Surd};

/// One operator `E^{r,δJ}_{δm}` acting on the spin-`source_two_j/2` sector.
#[derive(Clone, Debug)]
pub struct ErrorOp {
    r: u32,
    delta_j: i32,
    delta_m: i32,
    source_two_j: u32,
    entries: BTreeMap<usize, SqrtRational>,
    surds: BTreeMap<usize, Surd>,
}

impl ErrorOp {
    pub fn new(source_two_j: u32, r: u32, delta_j: i32, delta_m: i32) -> Result<Self> {
        let ri = r as i32;
        if delta_j.abs() > ri || delta_m.abs() > ri {
            return Err(Error::Precondition(format!(
                "need |dJ|, |dm| <= r, got r={r} dJ={delta_j} dm={delta_m}"
            )));
        }
        let tj = i64::from(source_two_j);
        let target_tj = tj + 2 * i64::from(delta_j);
        if target_tj < 0 {
            return Err(Error::Precondition(format!(
                "target momentum negative for two_J={source_two_j}, dJ={delta_j}"
            )));
        }
        let mut entries = BTreeMap::new();
        let mut surds = BTreeMap::new();
        for s in 0..=tj {
            let tm = 2 * s - tj;
            let target_tm = tm + 2 * i64::from(delta_m);
            if target_tm.abs() > target_tj {
                continue;
            }
            let idx = CgIndex::from_twice(tj, tm, 2 * i64::from(r), 2 * i64::from(delta_m), target_tj, target_tm);
            let amp = clebsch_gordan(&idx);
            if !amp.is_zero() {
                surds.insert(s as usize, amp.to_surd());
                entries.insert(s as usize, amp);
            }
        }
        Ok(ErrorOp {
            r,
            delta_j,
            delta_m,
            source_two_j,
            entries,
            surds,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn delta_j(&self) -> i32 {
        self.delta_j
    }

    pub fn delta_m(&self) -> i32 {
        self.delta_m
    }

    pub fn source_two_j(&self) -> u32 {
        self.source_two_j
    }

    pub fn target_two_j(&self) -> u32 {
        (i64::from(self.source_two_j) + 2 * i64::from(self.delta_j)) as u32
    }

    /// Target index of source index `s`, i.e. `s + δm + δJ`.
    pub fn target_index(&self, s: usize) -> usize {
        (s as i64 + i64::from(self.delta_m) + i64::from(self.delta_j)) as usize
    }

    /// Nonzero amplitudes keyed by source index.
    pub fn entries(&self) -> &BTreeMap<usize, SqrtRational> {
        &self.entries
    }

    pub fn amplitude(&self, s: usize) -> SqrtRational {
        self.entries.get(&s).cloned().unwrap_or_else(SqrtRational::zero)
    }

    /// Dense `(target_two_j+1) × (source_two_j+1)` matrix.
    pub fn dense(&self) -> Vec<Vec<SqrtRational>> {
        let mut m = vec![
            vec![SqrtRational::zero(); self.source_two_j as usize + 1];
            self.target_two_j() as usize + 1
        ];
        for (s, a) in &self.entries {
            m[self.target_index(*s)][*s] = a.clone();
        }
        m
    }

    pub fn tag(&self) -> String {
        format!("E(r={},dJ={},dm={})", self.r, self.delta_j, self.delta_m)
    }

    pub(crate) fn apply_surds(&self, v: &BTreeMap<usize, Surd>) -> SectorVector {
        let mut entries = BTreeMap::new();
        for (s, c) in v {
            if let Some(a) = self.surds.get(s) {
                entries.insert(self.target_index(*s), a.mul(c));
            }
        }
        SectorVector {
            two_j: self.target_two_j(),
            entries,
        }
    }
}

impl Serialize for ErrorOp {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Amp {
            source_m: String,
            target_m: String,
            sign: i32,
            radicand_num: String,
            radicand_den: String,
        }
        let sj = i64::from(self.source_two_j);
        let tj = i64::from(self.target_two_j());
        let amps: Vec<Amp> = self
            .entries
            .iter()
            .map(|(s, a)| Amp {
                source_m: HalfInt::from_twice(2 * *s as i64 - sj).to_string(),
                target_m: HalfInt::from_twice(2 * self.target_index(*s) as i64 - tj).to_string(),
                sign: a.sign().as_i32(),
                radicand_num: a.radicand().numer().to_string(),
                radicand_den: a.radicand().denom().to_string(),
            })
            .collect();
        let mut st = serializer.serialize_struct("ErrorOp", 5)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("delta_J", &self.delta_j)?;
        st.serialize_field("delta_m", &self.delta_m)?;
        st.serialize_field("source_two_J", &self.source_two_j)?;
        st.serialize_field("amplitudes", &amps)?;
        st.end()
    }
}

/// All operators up to order `t`.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorSet {
    pub t: u32,
    pub spin: bool,
    pub source_two_j: u32,
    pub ops: Vec<ErrorOp>,
}

impl ErrorSet {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

fn check_size(two_j: u32, t: u32) -> Result<()> {
    if two_j < 2 * t {
        return Err(Error::Precondition(format!(
            "two_J = {two_j} is smaller than 2t = {}",
            2 * t
        )));
    }
    Ok(())
}

/// Every `E^{r,δJ}_{δm}` with `|δJ|, |δm| <= r <= t`; `Σ_r (2r+1)²` operators.
pub fn build_ae_error_set(two_j: u32, t: u32) -> Result<ErrorSet> {
    check_size(two_j, t)?;
    let mut ops = Vec::new();
    for r in 0..=t {
        let ri = r as i32;
        for dj in -ri..=ri {
            for dm in -ri..=ri {
                ops.push(ErrorOp::new(two_j, r, dj, dm)?);
            }
        }
    }
    Ok(ErrorSet {
        t,
        spin: false,
        source_two_j: two_j,
        ops,
    })
}

/// The `δJ = 0` operators; `Σ_r (2r+1)` of them.
pub fn build_spin_error_set(two_j: u32, t: u32) -> Result<ErrorSet> {
    check_size(two_j, t)?;
    let mut ops = Vec::new();
    for r in 0..=t {
        let ri = r as i32;
        for dm in -ri..=ri {
            ops.push(ErrorOp::new(two_j, r, 0, dm)?);
        }
    }
    Ok(ErrorSet {
        t,
        spin: true,
        source_two_j: two_j,
        ops,
    })
}

/// Memoizes AE error sets by `(two_j, t)`.
#[derive(Default)]
pub struct ErrorSetCache {
    sets: HashMap<(u32, u32), Arc<ErrorSet>>,
}

impl ErrorSetCache {
    pub fn ae(&mut self, two_j: u32, t: u32) -> Result<Arc<ErrorSet>> {
        if let Some(s) = self.sets.get(&(two_j, t)) {
            return Ok(Arc::clone(s));
        }
        let s = Arc::new(build_ae_error_set(two_j, t)?);
        self.sets.insert((two_j, t), Arc::clone(&s));
        Ok(s)
    }
}

/// A vector in the spin-`two_j/2` sector, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorVector {
    pub two_j: u32,
    pub entries: BTreeMap<usize, Surd>,
}

impl SectorVector {
    pub fn from_coefficients(two_j: u32, v: &[SqrtRational]) -> Self {
        SectorVector {
            two_j,
            entries: sparse_surds(v),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Surd::is_zero)
    }

    pub fn dense(&self) -> Vec<SqrtRational> {
        let mut out = vec![SqrtRational::zero(); self.two_j as usize + 1];
        for (i, s) in &self.entries {
            out[*i] = s.to_sqrt_rational();
        }
        out
    }
}

pub(crate) fn sparse_surds(v: &[SqrtRational]) -> BTreeMap<usize, Surd> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.to_surd()))
        .collect()
}

/// Applies `op` to a coefficient vector of the source sector.
pub fn apply(op: &ErrorOp, v: &[SqrtRational]) -> Result<SectorVector> {
    if v.len() != op.source_two_j as usize + 1 {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for an operator on two_J = {}",
            v.len(),
            op.source_two_j
        )));
    }
    Ok(op.apply_surds(&sparse_surds(v)))
}

/// Inner product of two sector vectors; vectors in different sectors are
/// orthogonal.
pub fn sector_inner(a: &SectorVector, b: &SectorVector) -> RadicalSum {
    let mut acc = RadicalSum::zero();
    if a.two_j != b.two_j {
        return acc;
    }
    let (small, large) = if a.entries.len() <= b.entries.len() {
        (a, b)
    } else {
        (b, a)
    };
    for (i, x) in &small.entries {
        if let Some(y) = large.entries.get(i) {
            acc.add_product(x, y);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::fixture;

    #[test]
    fn counts() {
        assert_eq!(build_ae_error_set(7, 0).unwrap().len(), 1);
        assert_eq!(build_ae_error_set(7, 1).unwrap().len(), 10);
        assert_eq!(build_ae_error_set(21, 2).unwrap().len(), 35);
        assert_eq!(build_spin_error_set(7, 1).unwrap().len(), 4);
        assert_eq!(build_spin_error_set(7, 0).unwrap().len(), 1);
        assert!(build_ae_error_set(3, 2).is_err());
    }

    #[test]
    fn order_zero_is_identity() {
        let set = build_ae_error_set(7, 0).unwrap();
        let op = &set.ops[0];
        assert_eq!(op.entries().len(), 8);
        assert!(op.entries().values().all(|a| *a == SqrtRational::one()));
        let c = fixture("J7half").unwrap();
        let out = apply(op, &c.basis()[0]).unwrap();
        assert_eq!(out.dense(), c.basis()[0]);
    }

    #[test]
    fn raising_top_state_vanishes() {
        let op = ErrorOp::new(5, 1, 0, 1).unwrap();
        let mut v = vec![SqrtRational::zero(); 6];
        v[5] = SqrtRational::one();
        assert!(apply(&op, &v).unwrap().is_zero());
    }

    #[test]
    fn length_mismatch_rejected() {
        let op = ErrorOp::new(5, 1, 0, 1).unwrap();
        assert!(apply(&op, &[SqrtRational::one()]).is_err());
    }

    #[test]
    fn spin_ops_are_ae_ops_with_zero_shift() {
        let ae = build_ae_error_set(9, 2).unwrap();
        for op in build_spin_error_set(9, 2).unwrap().ops {
            assert!(ae.ops.iter().any(|o| o.r() == op.r()
                && o.delta_j() == 0
                && o.delta_m() == op.delta_m()
                && o.entries() == op.entries()));
        }
    }
}
