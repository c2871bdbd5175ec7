//! Exact linear programming: dense two-phase tableau simplex over [`Rational`]
//! with Bland's rule, so it terminates on degenerate problems.
//!
//! All decision variables are free; they are split internally as `x = p - q`.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    rows: Vec<(Vec<Rational>, Relation, Rational)>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
        }
    }

    /// Sets the objective to maximize.
    pub fn maximize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn constraint(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs, rel, rhs));
        self
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective)
    }
}

struct Tableau {
    // rows[i] has `cols` coefficients followed by the right-hand side
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
    first_artificial: usize,
    num_vars: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.rows.len();
        let slack_count = lp.rows.iter().filter(|r| r.1 != Relation::Eq).count();
        let first_slack = 2 * n;
        let first_artificial = first_slack + slack_count;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = first_slack;
        let mut artificials = 0;
        let mut pending = Vec::new();
        for (coeffs, rel, rhs) in &lp.rows {
            let flip = rhs.is_negative();
            let sign = |x: &Rational| if flip { -x.clone() } else { x.clone() };
            let rel = match (rel, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => *r,
            };
            let mut row = vec![Rational::zero(); first_artificial];
            for (j, c) in coeffs.iter().enumerate() {
                row[j] = sign(c);
                row[n + j] = -sign(c);
            }
            let needs_artificial = match rel {
                Relation::Le => {
                    row[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                    false
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                    basis.push(usize::MAX);
                    true
                }
                Relation::Eq => {
                    basis.push(usize::MAX);
                    true
                }
            };
            if needs_artificial {
                pending.push(rows.len());
                artificials += 1;
            }
            row.push(sign(rhs));
            rows.push(row);
        }

        let cols = first_artificial + artificials;
        for row in rows.iter_mut() {
            let rhs = row.pop().unwrap();
            row.resize(cols, Rational::zero());
            row.push(rhs);
        }
        for (k, &i) in pending.iter().enumerate() {
            rows[i][first_artificial + k] = Rational::one();
            basis[i] = first_artificial + k;
        }

        Tableau {
            rows,
            basis,
            cols,
            first_artificial,
            num_vars: n,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over the columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        reduced -= &cost[b] * &self.rows[i][j];
                    }
                }
                reduced.is_positive()
            });
            let Some(c) = entering else { return true };

            let rhs = self.cols;
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }

    fn run(mut self, objective: &[Rational]) -> LpOutcome {
        let rhs = self.cols;
        if self.first_artificial < self.cols {
            let mut cost = vec![Rational::zero(); self.cols];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = -Rational::one();
            }
            self.optimize(&cost, self.cols);
            let infeasibility: Rational = self
                .basis
                .iter()
                .zip(&self.rows)
                .filter(|(&b, _)| b >= self.first_artificial)
                .map(|(_, row)| row[rhs].clone())
                .sum();
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible;
            }
            // Drive zero-valued artificials out of the basis; drop redundant rows.
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => self.pivot(i, j),
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }

        let n = self.num_vars;
        let mut cost = vec![Rational::zero(); self.cols];
        for j in 0..n {
            cost[j] = objective[j].clone();
            cost[n + j] = -objective[j].clone();
        }
        if !self.optimize(&cost, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![Rational::zero(); self.first_artificial];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.first_artificial {
                values[b] = self.rows[i][rhs].clone();
            }
        }
        let point: Vec<Rational> = (0..n).map(|j| &values[j] - &values[n + j]).collect();
        let value = point
            .iter()
            .zip(objective)
            .fold(Rational::zero(), |acc, (x, c)| acc + x * c);
        LpOutcome::Optimal { value, point }
    }
}
