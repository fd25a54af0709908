//! Thin wrappers over the LP (`minilp`) and QP (`quadprog`) backends.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
    pub rows: Vec<(Vec<f64>, Cmp, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, bounds: Vec<(f64, f64)>) -> Self {
        LinearProgram { objective, bounds, rows: vec![] }
    }

    pub fn row(&mut self, coeffs: Vec<f64>, cmp: Cmp, rhs: f64) {
        self.rows.push((coeffs, cmp, rhs));
    }

    /// Maximize the objective.
    pub fn maximize(&self) -> LpOutcome {
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = self
            .objective
            .iter()
            .zip(&self.bounds)
            .map(|(&c, &b)| p.add_var(c, b))
            .collect();
        for (coeffs, cmp, rhs) in &self.rows {
            let expr: Vec<_> = vars
                .iter()
                .zip(coeffs)
                .filter(|(_, &c)| c != 0.0)
                .map(|(&v, &c)| (v, c))
                .collect();
            let op = match cmp {
                Cmp::Le => ComparisonOp::Le,
                Cmp::Ge => ComparisonOp::Ge,
                Cmp::Eq => ComparisonOp::Eq,
            };
            p.add_constraint(expr.as_slice(), op, *rhs);
        }
        match p.solve() {
            Ok(sol) => LpOutcome::Optimal {
                value: sol.objective(),
                x: vars.iter().map(|&v| *sol.var_value(v)).collect(),
            },
            Err(minilp::Error::Infeasible) => LpOutcome::Infeasible,
            Err(minilp::Error::Unbounded) => LpOutcome::Unbounded,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

/// Minimize `|x|^2` subject to `eq_rows x = eq_rhs` and `le_rows x <= le_rhs`.
/// `None` when infeasible.
pub fn min_norm_qp(
    n: usize,
    eq_rows: &[Vec<f64>],
    eq_rhs: &[f64],
    le_rows: &[Vec<f64>],
    le_rhs: &[f64],
) -> Option<QpSolution> {
    min_quadratic_qp(&identity(n), &vec![0.0; n], eq_rows, eq_rhs, le_rows, le_rhs)
}

fn identity(n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    q
}

/// Minimize `1/2 x'Qx + c'x` (Q row-major, positive definite) under linear
/// equalities and inequalities. `None` when infeasible.
pub fn min_quadratic_qp(
    q: &[f64],
    c: &[f64],
    eq_rows: &[Vec<f64>],
    eq_rhs: &[f64],
    le_rows: &[Vec<f64>],
    le_rhs: &[f64],
) -> Option<QpSolution> {
    let mut qmat = q.to_vec();
    let mut amat = Vec::new();
    let mut bvec = Vec::new();
    for (r, b) in eq_rows.iter().zip(eq_rhs) {
        amat.extend_from_slice(r);
        bvec.push(*b);
    }
    for (r, b) in le_rows.iter().zip(le_rhs) {
        amat.extend_from_slice(r);
        bvec.push(*b);
    }
    match quadprog::solve_qp(&mut qmat, c, &amat, &bvec, eq_rows.len(), false) {
        Ok(sol) => Some(QpSolution { objective: sol.obj, x: sol.sol }),
        Err(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_simple_max() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0], vec![(0.0, f64::INFINITY); 2]);
        lp.row(vec![1.0, 2.0], Cmp::Le, 4.0);
        lp.row(vec![3.0, 1.0], Cmp::Le, 6.0);
        match lp.maximize() {
            LpOutcome::Optimal { value, .. } => assert!((value - 2.8).abs() < 1e-9),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn qp_projection_onto_line() {
        // min |x|^2 s.t. x + y = 2 -> (1,1)
        let s = min_norm_qp(2, &[vec![1.0, 1.0]], &[2.0], &[], &[]).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-12 && (s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qp_infeasible() {
        let r = min_norm_qp(1, &[vec![1.0]], &[1.0], &[vec![1.0]], &[0.0]);
        assert!(r.is_none());
    }
}
