//! Dense exact simplex over ℚ, used to pick the lexicographically smallest
//! point of `{x >= 0 : A x = b}`.
//!
//! Bland's rule is used throughout, so no cycling guard is needed.

use rug::Rational;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    active: Vec<bool>,
}

impl Tableau {
    fn ncols(&self) -> usize {
        self.active.len()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c] == 0 {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if *pv != 0 {
                    *v -= Rational::from(&f * pv);
                }
            }
            self.rhs[i] -= Rational::from(&f * &pivot_rhs);
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = cost.to_vec();
        for (i, &bi) in self.basis.iter().enumerate() {
            if cost[bi] == 0 {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                if self.rows[i][j] != 0 {
                    *dj -= Rational::from(&cost[bi] * &self.rows[i][j]);
                }
            }
        }
        d
    }

    /// Minimizes `cost · x` over the active columns; returns the reduced costs
    /// at the optimum. The objectives used here are bounded below by zero.
    fn minimize(&mut self, cost: &[Rational]) -> Vec<Rational> {
        loop {
            let d = self.reduced_costs(cost);
            let entering = (0..self.ncols())
                .find(|&j| self.active[j] && !self.basis.contains(&j) && d[j] < 0);
            let Some(c) = entering else {
                return d;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c] <= 0 {
                    continue;
                }
                let ratio = Rational::from(&self.rhs[i] / &self.rows[i][c]);
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let (r, _) = best.expect("objective is bounded below by zero");
            self.pivot(r, c);
        }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(Rational::new(), |acc, (&b, v)| acc + Rational::from(&cost[b] * v))
    }
}

/// Returns the lexicographically smallest `x >= 0` with `A x = b` in the
/// variable order `0, 1, …`, or `None` when the system is infeasible.
pub(crate) fn lexicographic_min(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    let nvars = a.first().map_or(0, Vec::len);
    let ncols = nvars + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = *bi < 0;
        let mut r: Vec<Rational> = row
            .iter()
            .map(|v| if flip { Rational::from(-v) } else { v.clone() })
            .collect();
        r.resize(ncols, Rational::new());
        r[nvars + i] = Rational::from(1);
        rows.push(r);
        rhs.push(if flip { Rational::from(-bi) } else { bi.clone() });
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (nvars..ncols).collect(),
        active: vec![true; ncols],
    };

    // Phase I: drive the artificial variables to zero.
    let mut cost = vec![Rational::new(); ncols];
    for c in cost.iter_mut().skip(nvars) {
        *c = Rational::from(1);
    }
    tab.minimize(&cost);
    if tab.objective(&cost) != 0 {
        return None;
    }
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= nvars {
            match (0..nvars).find(|&j| tab.active[j] && tab.rows[i][j] != 0) {
                Some(j) => tab.pivot(i, j),
                None => {
                    // redundant equation
                    tab.rows.remove(i);
                    tab.rhs.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for j in nvars..ncols {
        tab.active[j] = false;
    }

    // Minimize each variable in turn, restricting to the optimal face.
    for v in 0..nvars {
        let mut cost = vec![Rational::new(); ncols];
        cost[v] = Rational::from(1);
        let d = tab.minimize(&cost);
        for (j, dj) in d.iter().enumerate().take(nvars) {
            if tab.active[j] && !tab.basis.contains(&j) && *dj > 0 {
                tab.active[j] = false;
            }
        }
    }

    let mut x = vec![Rational::new(); nvars];
    for (i, &bi) in tab.basis.iter().enumerate() {
        if bi < nvars {
            x[bi] = tab.rhs[i].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn unique_solution() {
        // x + y = 1, x - y = 0
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let x = lexicographic_min(&a, &[q(1), q(0)]).unwrap();
        assert_eq!(x, vec![Rational::from((1, 2)), Rational::from((1, 2))]);
    }

    #[test]
    fn picks_lexicographic_vertex() {
        // x + y + z = 1: smallest x is 0, then smallest y is 0, so z = 1
        let a = vec![vec![q(1), q(1), q(1)]];
        assert_eq!(lexicographic_min(&a, &[q(1)]).unwrap(), vec![q(0), q(0), q(1)]);
        // 2x - 2z = 1 forces x >= 1/2, reached only with z = 0
        let a = vec![vec![q(1), q(1), q(1)], vec![q(2), q(0), q(-2)]];
        let x = lexicographic_min(&a, &[q(1), q(1)]).unwrap();
        let half = Rational::from((1, 2));
        assert_eq!(x, vec![half.clone(), half, q(0)]);
    }

    #[test]
    fn infeasible_and_redundant() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert!(lexicographic_min(&a, &[q(1), q(2)]).is_none());
        let x = lexicographic_min(&a, &[q(1), q(1)]).unwrap();
        assert_eq!(x, vec![q(0), q(1)]);
        // negative solution only
        let a = vec![vec![q(1)]];
        assert!(lexicographic_min(&a, &[q(-1)]).is_none());
    }
}
