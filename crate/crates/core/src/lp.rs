//! Dense two-phase simplex over exact rationals.
//!
//! Every optimization in the crate runs through this solver so that optima,
//! witnesses and membership certificates re-verify exactly. Bland's rule is
//! used for both the entering and leaving choice, which guarantees
//! termination and makes the returned vertex a deterministic function of the
//! problem as built.

use crate::error::Error;
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub cmp: Cmp,
    pub rhs: Rat,
}

/// A linear program `maximize c·x` subject to row constraints; variables are
/// free unless flagged nonnegative.
#[derive(Clone, Debug)]
pub struct Lp {
    pub num_vars: usize,
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub nonneg: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl Lp {
    pub fn new(num_vars: usize) -> Self {
        Lp {
            num_vars,
            objective: vec![Rat::zero(); num_vars],
            constraints: Vec::new(),
            nonneg: vec![false; num_vars],
        }
    }

    pub fn set_objective(&mut self, coeffs: Vec<Rat>) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.objective = coeffs;
    }

    pub fn add(&mut self, coeffs: Vec<Rat>, cmp: Cmp, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, cmp, rhs });
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn solve(&self) -> Result<LpOutcome, Error> {
        Tableau::build(self).solve()
    }
}

/// Maximizes, then (if optimal) refines the optimizer to the lexicographically
/// least point of the optimal face over the listed variables, in order.
pub fn solve_lex_min(lp: &Lp, order: &[usize]) -> Result<LpOutcome, Error> {
    let first = lp.solve()?;
    let (value, mut point) = match first {
        LpOutcome::Optimal { value, point } => (value, point),
        other => return Ok(other),
    };
    let mut work = lp.clone();
    work.add(lp.objective.clone(), Cmp::Eq, value.clone());
    for &var in order {
        let mut objective = vec![Rat::zero(); work.num_vars];
        objective[var] = Rat::integer(-1);
        work.set_objective(objective);
        match work.solve()? {
            LpOutcome::Optimal { point: p, .. } => {
                let mut pin = vec![Rat::zero(); work.num_vars];
                pin[var] = Rat::one();
                work.add(pin, Cmp::Eq, p[var].clone());
                point = p;
            }
            _ => {
                return Err(Error::Internal(
                    "lexicographic refinement lost feasibility".into(),
                ))
            }
        }
    }
    Ok(LpOutcome::Optimal { value, point })
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    cost: Vec<Rat>,
    value: Rat,
    banned: Vec<bool>,
    // column layout bookkeeping
    num_orig: usize,
    plus_col: Vec<usize>,
    minus_col: Vec<Option<usize>>,
    artificial_start: usize,
    phase2_cost: Vec<Rat>,
}

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let m = lp.constraints.len();
        // Structural columns: one per nonnegative var, two per free var.
        let mut plus_col = Vec::with_capacity(lp.num_vars);
        let mut minus_col = Vec::with_capacity(lp.num_vars);
        let mut ncols = 0usize;
        for j in 0..lp.num_vars {
            plus_col.push(ncols);
            ncols += 1;
            if lp.nonneg[j] {
                minus_col.push(None);
            } else {
                minus_col.push(Some(ncols));
                ncols += 1;
            }
        }
        let structural = ncols;

        // Normalize rows to rhs >= 0 and record slack/artificial needs.
        // A `>= 0` row flips to `<= 0` so its slack can start basic and no
        // artificial is needed.
        let mut norm: Vec<(Vec<Rat>, Cmp, Rat)> = Vec::with_capacity(m);
        for c in &lp.constraints {
            if c.rhs.is_negative() || (c.rhs.is_zero() && matches!(c.cmp, Cmp::Ge)) {
                let coeffs: Vec<Rat> = c.coeffs.iter().map(|v| -v).collect();
                let cmp = match c.cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
                norm.push((coeffs, cmp, -&c.rhs));
            } else {
                norm.push((c.coeffs.clone(), c.cmp, c.rhs.clone()));
            }
        }
        let num_slack = norm
            .iter()
            .filter(|(_, cmp, _)| !matches!(cmp, Cmp::Eq))
            .count();
        let num_art = norm
            .iter()
            .filter(|(_, cmp, _)| !matches!(cmp, Cmp::Le))
            .count();
        let artificial_start = structural + num_slack;
        let total = artificial_start + num_art;

        let mut rows = vec![vec![Rat::zero(); total]; m];
        let mut rhs = Vec::with_capacity(m);
        let mut basis = vec![usize::MAX; m];
        let mut slack_at = structural;
        let mut art_at = artificial_start;
        for (i, (coeffs, cmp, b)) in norm.iter().enumerate() {
            for j in 0..lp.num_vars {
                if coeffs[j].is_zero() {
                    continue;
                }
                rows[i][plus_col[j]] = coeffs[j].clone();
                if let Some(mc) = minus_col[j] {
                    rows[i][mc] = -&coeffs[j];
                }
            }
            match cmp {
                Cmp::Le => {
                    rows[i][slack_at] = Rat::one();
                    basis[i] = slack_at;
                    slack_at += 1;
                }
                Cmp::Ge => {
                    rows[i][slack_at] = Rat::integer(-1);
                    slack_at += 1;
                    rows[i][art_at] = Rat::one();
                    basis[i] = art_at;
                    art_at += 1;
                }
                Cmp::Eq => {
                    rows[i][art_at] = Rat::one();
                    basis[i] = art_at;
                    art_at += 1;
                }
            }
            rhs.push(b.clone());
        }

        // Phase-2 cost over all columns (zero on slack/artificial).
        let mut phase2_cost = vec![Rat::zero(); total];
        for j in 0..lp.num_vars {
            phase2_cost[plus_col[j]] = lp.objective[j].clone();
            if let Some(mc) = minus_col[j] {
                phase2_cost[mc] = -&lp.objective[j];
            }
        }

        Tableau {
            rows,
            rhs,
            basis,
            cost: vec![Rat::zero(); total],
            value: Rat::zero(),
            banned: vec![false; total],
            num_orig: lp.num_vars,
            plus_col,
            minus_col,
            artificial_start,
            phase2_cost,
        }
    }

    fn ncols(&self) -> usize {
        self.cost.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        self.rhs[row] *= &inv;
        let ncols = self.ncols();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..ncols {
                let delta = &factor * &self.rows[row][j];
                self.rows[i][j] -= &delta;
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[i] -= &delta;
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for j in 0..ncols {
                let delta = &factor * &self.rows[row][j];
                self.cost[j] -= &delta;
            }
            let delta = &factor * &self.rhs[row];
            self.value += &delta;
        }
        self.basis[row] = col;
    }

    /// Bland-rule iterations until optimal (Ok(true)) or unbounded (Ok(false)).
    fn run(&mut self) -> bool {
        loop {
            let entering = (0..self.ncols())
                .find(|&j| !self.banned[j] && self.cost[j].is_positive());
            let col = match entering {
                Some(c) => c,
                None => return true,
            };
            let mut leave: Option<usize> = None;
            let mut best: Option<Rat> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][col];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && self.basis[i] < self.basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
            match leave {
                Some(row) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn solve(mut self) -> Result<LpOutcome, Error> {
        let num_art = self.ncols() - self.artificial_start;
        if num_art > 0 {
            // Phase 1: maximize minus the sum of artificials. Reduced costs
            // for the initial basis are the column sums over artificial rows.
            for j in 0..self.ncols() {
                let mut s = Rat::zero();
                for i in 0..self.rows.len() {
                    if self.basis[i] >= self.artificial_start {
                        s += &self.rows[i][j];
                    }
                }
                self.cost[j] = s;
            }
            for j in self.artificial_start..self.ncols() {
                self.cost[j] = Rat::zero();
            }
            let mut v = Rat::zero();
            for i in 0..self.rows.len() {
                if self.basis[i] >= self.artificial_start {
                    v -= &self.rhs[i];
                }
            }
            self.value = v;
            let finished = self.run();
            debug_assert!(finished, "phase 1 is bounded above by zero");
            if self.value.is_negative() {
                return Ok(LpOutcome::Infeasible);
            }
            // Drive remaining zero-level artificials out of the basis.
            for i in 0..self.rows.len() {
                if self.basis[i] < self.artificial_start {
                    continue;
                }
                let replacement = (0..self.artificial_start)
                    .find(|&j| !self.rows[i][j].is_zero());
                if let Some(col) = replacement {
                    self.pivot(i, col);
                }
                // A row with no structural entry is redundant; its artificial
                // stays basic at level zero and the ban below freezes it.
            }
            for j in self.artificial_start..self.ncols() {
                self.banned[j] = true;
            }
        }

        // Phase 2: rebuild reduced costs for the real objective.
        let mut cost = self.phase2_cost.clone();
        let mut value = Rat::zero();
        for i in 0..self.rows.len() {
            let cb = self.phase2_cost[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for (cost_j, row_j) in cost.iter_mut().zip(&self.rows[i]) {
                let delta = &cb * row_j;
                *cost_j -= &delta;
            }
            let delta = &cb * &self.rhs[i];
            value += &delta;
        }
        self.cost = cost;
        self.value = value;
        if !self.run() {
            return Ok(LpOutcome::Unbounded);
        }

        let mut col_val = vec![Rat::zero(); self.ncols()];
        for i in 0..self.rows.len() {
            col_val[self.basis[i]] = self.rhs[i].clone();
        }
        let mut point = Vec::with_capacity(self.num_orig);
        for j in 0..self.num_orig {
            let mut v = col_val[self.plus_col[j]].clone();
            if let Some(mc) = self.minus_col[j] {
                v -= &col_val[mc];
            }
            point.push(v);
        }
        Ok(LpOutcome::Optimal {
            value: self.value,
            point,
        })
    }
}
