//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems are stated as `maximize c·x` over variables that are either
//! non-negative or free, subject to `≤`, `=` and `≥` rows. The optimum
//! carries one dual value per row, signed for the maximization convention:
//! `≤` rows have duals `≥ 0`, `≥` rows duals `≤ 0`, `=` rows free.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    free: Vec<bool>,
    objective: Vec<Rational>,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub enum LpResult {
    Optimal {
        x: Vec<Rational>,
        duals: Vec<Rational>,
        objective: Rational,
    },
    /// Phase one could not reach zero; `ray` holds the phase-one duals.
    Infeasible {
        ray: Vec<Rational>,
    },
    Unbounded,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a non-negative variable and returns its index.
    pub fn add_var(&mut self, objective: Rational) -> usize {
        self.free.push(false);
        self.objective.push(objective);
        self.free.len() - 1
    }

    /// Adds an unrestricted variable and returns its index.
    pub fn add_free_var(&mut self, objective: Rational) -> usize {
        self.free.push(true);
        self.objective.push(objective);
        self.free.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) {
        debug_assert!(coeffs.iter().all(|(j, _)| *j < self.free.len()));
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn solve(&self) -> LpResult {
        Tableau::from_program(self).run(self)
    }
}

struct Tableau {
    m: usize,
    /// Standard-form structural columns (split free vars + slacks).
    n_std: usize,
    /// Columns `n_std..n_std + m` are the artificial identity block; they
    /// always hold `B⁻¹` (times the row sign flips).
    cells: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Sign applied to each row so the right-hand side is non-negative.
    row_sign: Vec<Rational>,
    /// For each program variable: (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
    cost: Vec<Rational>,
}

impl Tableau {
    fn from_program(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let mut var_cols = Vec::with_capacity(lp.free.len());
        let mut col = 0;
        for &free in &lp.free {
            if free {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            } else {
                var_cols.push((col, None));
                col += 1;
            }
        }
        let slack_start = col;
        let n_slack = lp
            .rows
            .iter()
            .filter(|r| r.relation != Relation::Eq)
            .count();
        let n_std = slack_start + n_slack;
        let width = n_std + m;
        let mut cells = vec![vec![Rational::zero(); width]; m];
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let mut slack = slack_start;
        for (i, row) in lp.rows.iter().enumerate() {
            for (j, a) in &row.coeffs {
                let (p, n) = var_cols[*j];
                cells[i][p] += a;
                if let Some(n) = n {
                    cells[i][n] -= a;
                }
            }
            match row.relation {
                Relation::Le => {
                    cells[i][slack] = Rational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    cells[i][slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            let sign = if row.rhs.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            };
            if sign.is_negative() {
                for c in cells[i].iter_mut().take(n_std) {
                    *c = -c.clone();
                }
            }
            rhs.push(&row.rhs * &sign);
            row_sign.push(sign);
            cells[i][n_std + i] = Rational::one();
        }
        let mut cost = vec![Rational::zero(); width];
        for (j, c) in lp.objective.iter().enumerate() {
            let (p, n) = var_cols[j];
            cost[p] = c.clone();
            if let Some(n) = n {
                cost[n] = -c.clone();
            }
        }
        Tableau {
            m,
            n_std,
            cells,
            rhs,
            basis: (n_std..n_std + m).collect(),
            row_sign,
            var_cols,
            cost,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.cells[r][c];
        for v in self.cells[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.cells[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.m {
            if i == r || self.cells[i][c].is_zero() {
                continue;
            }
            let factor = self.cells[i][c].clone();
            for (v, p) in self.cells[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B⁻¹ A_j` for the given cost vector.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let width = self.n_std + self.m;
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate().take(width) {
                let a = &self.cells[i][j];
                if !a.is_zero() {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    /// Runs Bland-rule iterations with `cost`; columns at or beyond `limit`
    /// may not enter. Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[Rational], limit: usize) -> bool {
        let mut d = self.reduced_costs(cost);
        loop {
            let Some(enter) = (0..limit).find(|&j| d[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                let a = &self.cells[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter);
            let factor = d[enter].clone();
            for (dj, a) in d.iter_mut().zip(&self.cells[r]) {
                if !a.is_zero() {
                    *dj -= &factor * a;
                }
            }
        }
    }

    /// `c_B B⁻¹`, mapped back through the row sign flips.
    fn duals(&self, cost: &[Rational]) -> Vec<Rational> {
        (0..self.m)
            .map(|i| {
                let mut y = Rational::zero();
                for (k, &b) in self.basis.iter().enumerate() {
                    let a = &self.cells[k][self.n_std + i];
                    if !a.is_zero() && !cost[b].is_zero() {
                        y += &cost[b] * a;
                    }
                }
                y * &self.row_sign[i]
            })
            .collect()
    }

    fn run(mut self, lp: &LinearProgram) -> LpResult {
        let width = self.n_std + self.m;
        let mut phase1 = vec![Rational::zero(); width];
        for c in phase1.iter_mut().skip(self.n_std) {
            *c = -Rational::one();
        }
        let bounded = self.optimize(&phase1, self.n_std);
        debug_assert!(bounded, "phase one is bounded by construction");
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| b >= self.n_std)
            .map(|(_, v)| v.clone())
            .sum();
        if infeasibility.is_positive() {
            return LpResult::Infeasible {
                ray: self.duals(&phase1),
            };
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..self.m {
            if self.basis[r] < self.n_std {
                continue;
            }
            if let Some(c) = (0..self.n_std).find(|&j| !self.cells[r][j].is_zero()) {
                self.pivot(r, c);
            }
        }
        let cost = self.cost.clone();
        if !self.optimize(&cost, self.n_std) {
            return LpResult::Unbounded;
        }
        let mut col_value = vec![Rational::zero(); width];
        for (i, &b) in self.basis.iter().enumerate() {
            col_value[b] = self.rhs[i].clone();
        }
        let x: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(p, n)| match n {
                Some(n) => &col_value[p] - &col_value[n],
                None => col_value[p].clone(),
            })
            .collect();
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpResult::Optimal {
            duals: self.duals(&cost),
            x,
            objective,
        }
    }
}
