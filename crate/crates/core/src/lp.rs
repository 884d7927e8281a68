//! Dense two-phase primal simplex over exact rationals.
//!
//! Pivoting follows Bland's rule (lowest-index entering column, lowest-index
//! leaving basic variable on ratio ties), so the method terminates on
//! degenerate problems.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

/// `constraints` over `num_vars` nonnegative variables.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "coefficient vector length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn is_feasible(&self) -> bool {
        Tableau::phase_one(self).is_some()
    }

    pub fn solve(&self, objective: &[Rational], sense: Sense) -> LpOutcome {
        assert_eq!(objective.len(), self.num_vars, "objective length");
        let Some(mut tableau) = Tableau::phase_one(self) else {
            return LpOutcome::Infeasible;
        };
        let mut cost = vec![Rational::zero(); tableau.width()];
        for (j, c) in objective.iter().enumerate() {
            cost[j] = match sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => -c.clone(),
            };
        }
        if !tableau.optimize(&cost) {
            return LpOutcome::Unbounded;
        }
        let point = tableau.primal(self.num_vars);
        let value: Rational = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        LpOutcome::Optimal { value, point }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Columns at or beyond this index are artificial and may not re-enter.
    first_artificial: usize,
    total: usize,
    allow_artificial: bool,
}

impl Tableau {
    fn width(&self) -> usize {
        self.total
    }

    fn rhs(&self, i: usize) -> &Rational {
        self.rows[i].last().expect("rhs column")
    }

    /// Builds the initial tableau and drives the artificial variables to
    /// zero. Returns `None` when the constraint system is infeasible.
    fn phase_one(lp: &LinearProgram) -> Option<Tableau> {
        let n = lp.num_vars;
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (
                        c.coeffs.iter().map(|a| -a).collect(),
                        flipped,
                        -c.rhs.clone(),
                    )
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();

        let slack_count = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Eq)
            .count();
        let artificial_count = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let first_artificial = n + slack_count;
        let total = first_artificial + artificial_count;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut slack = n;
        let mut artificial = first_artificial;
        for (coeffs, relation, rhs) in normalized {
            let mut row = vec![Rational::zero(); total + 1];
            row[..n].clone_from_slice(&coeffs);
            row[total] = rhs;
            match relation {
                Relation::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                    row[artificial] = Rational::from_integer(1.into());
                    basis.push(artificial);
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = Rational::from_integer(1.into());
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            rows.push(row);
        }

        let mut tableau = Tableau {
            rows,
            basis,
            first_artificial,
            total,
            allow_artificial: true,
        };
        if artificial_count > 0 {
            let mut cost = vec![Rational::zero(); total];
            for c in cost.iter_mut().skip(first_artificial) {
                *c = Rational::from_integer(1.into());
            }
            let bounded = tableau.optimize(&cost);
            debug_assert!(bounded, "phase one is bounded below by zero");
            let infeasibility: Rational = tableau
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= first_artificial)
                .map(|(i, _)| tableau.rhs(i).clone())
                .sum();
            if !infeasibility.is_zero() {
                return None;
            }
            tableau.expel_artificials();
        }
        tableau.allow_artificial = false;
        Some(tableau)
    }

    /// Pivots remaining zero-valued artificial variables out of the basis,
    /// dropping rows that turn out to be redundant.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            let entering = (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero());
            match entering {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    /// Minimizes `cost · x` from the current basic feasible solution.
    /// Returns false if the objective is unbounded below.
    fn optimize(&mut self, cost: &[Rational]) -> bool {
        let limit = if self.allow_artificial {
            cost.len()
        } else {
            self.first_artificial
        };
        loop {
            let entering = (0..limit).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced =
                    self.basis
                        .iter()
                        .enumerate()
                        .fold(cost[j].clone(), |acc, (i, &b)| {
                            if self.rows[i][j].is_zero() || cost[b].is_zero() {
                                acc
                            } else {
                                acc - &cost[b] * &self.rows[i][j]
                            }
                        });
                reduced.is_negative()
            });
            let Some(j) = entering else {
                return true;
            };

            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leaving {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((i, _)) = leaving else {
                return false;
            };
            self.pivot(i, j);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v /= &pivot;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    fn primal(&self, num_vars: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                x[b] = self.rhs(i).clone();
            }
        }
        x
    }
}
