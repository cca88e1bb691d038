//! Exact rational LP solver producing vertex (basic) optimal solutions.
//!
//! Dense two-phase tableau simplex with Bland's rule, over
//! arbitrary-precision rationals. Every inequality is a `>=` row; variable
//! upper bounds are folded in as explicit rows, so the solved cone is
//! `{x : A x >= b, l <= x <= u}` with all bounds finite. Infeasibility comes
//! back with an exact certificate: a nonnegative combination of rows and
//! bounds that sums to the zero functional yet demands a positive value.
//!
//! A row-generation driver ([`solve_with_separation`]) wraps the solver for
//! systems whose rows are produced on demand by a separation callback; the
//! returned point is a vertex of the relaxed system that the callback
//! certifies feasible for the full one, hence a vertex of the full system.

use crate::error::Error;
use crate::rat::{fmt_rat, Rat};
use num_traits::{One, Zero};

/// One `>=` constraint with a sparse coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, Rat)>,
    pub rhs: Rat,
}

impl LpRow {
    pub fn new(mut coeffs: Vec<(usize, Rat)>, rhs: Rat) -> Self {
        coeffs.retain(|(_, c)| !c.is_zero());
        coeffs.sort_by_key(|(j, _)| *j);
        LpRow { coeffs, rhs }
    }

    /// Left-hand side value at `x`.
    pub fn lhs_at(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (j, c) in &self.coeffs {
            acc += c * &x[*j];
        }
        acc
    }

    /// `lhs - rhs` at `x`; negative means violated.
    pub fn slack_at(&self, x: &[Rat]) -> Rat {
        self.lhs_at(x) - &self.rhs
    }
}

/// Minimization problem with finite box bounds and `>=` rows.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub objective: Vec<Rat>,
    pub lower: Vec<Rat>,
    pub upper: Vec<Rat>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    /// Problem with the given objective and `[0, 1]` bounds on every
    /// variable.
    pub fn unit_box(objective: Vec<Rat>) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            lower: vec![Rat::zero(); n],
            upper: vec![Rat::one(); n],
            rows: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, row: LpRow) {
        self.rows.push(row);
    }

    fn validate(&self) -> Result<(), Error> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::Invalid("bounds length mismatch".into()));
        }
        for j in 0..n {
            if self.lower[j] > self.upper[j] {
                return Err(Error::Invalid(format!(
                    "variable {j} has lower bound above upper bound"
                )));
            }
        }
        for row in &self.rows {
            if row.coeffs.iter().any(|(j, _)| *j >= n) {
                return Err(Error::Invalid("row references unknown variable".into()));
            }
        }
        Ok(())
    }

    /// Human-readable inequality dump, for debugging.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let term = |j: usize, c: &Rat| format!("{} x{}", fmt_rat(c), j);
        out.push_str("minimize ");
        let obj: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| term(j, c))
            .collect();
        out.push_str(if obj.is_empty() { "0" } else { "" });
        out.push_str(&obj.join(" + "));
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let lhs: Vec<String> = row.coeffs.iter().map(|(j, c)| term(*j, c)).collect();
            out.push_str(&format!(
                "r{i}: {} >= {}\n",
                if lhs.is_empty() { "0".into() } else { lhs.join(" + ") },
                fmt_rat(&row.rhs)
            ));
        }
        for j in 0..self.num_vars() {
            out.push_str(&format!(
                "{} <= x{} <= {}\n",
                fmt_rat(&self.lower[j]),
                j,
                fmt_rat(&self.upper[j])
            ));
        }
        out
    }
}

/// Which constraints hold with equality at a basic solution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActiveSet {
    pub rows: Vec<usize>,
    pub at_lower: Vec<usize>,
    pub at_upper: Vec<usize>,
}

/// A vertex of the constraint system: satisfies everything exactly, and the
/// active constraints have full column rank (verified by exact elimination).
#[derive(Clone, Debug)]
pub struct BasicSolution {
    pub values: Vec<Rat>,
    pub objective: Rat,
    pub active: ActiveSet,
}

/// Exact proof that the system is empty: nonnegative weights on rows, lower
/// bounds (`x_j >= l_j`), and upper bounds (`-x_j >= -u_j`) whose combined
/// functional is zero while the combined right-hand side is positive.
#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub row_weights: Vec<Rat>,
    pub lower_weights: Vec<Rat>,
    pub upper_weights: Vec<Rat>,
}

impl FarkasCertificate {
    /// Re-checks the certificate against the problem it refutes.
    pub fn verify(&self, p: &LpProblem) -> bool {
        let n = p.num_vars();
        if self.row_weights.len() != p.rows.len()
            || self.lower_weights.len() != n
            || self.upper_weights.len() != n
        {
            return false;
        }
        let nonneg = self.row_weights.iter().all(|w| !w.is_negative())
            && self.lower_weights.iter().all(|w| !w.is_negative())
            && self.upper_weights.iter().all(|w| !w.is_negative());
        if !nonneg {
            return false;
        }
        let mut combined = vec![Rat::zero(); n];
        for (w, row) in self.row_weights.iter().zip(&p.rows) {
            for (j, c) in &row.coeffs {
                combined[*j] += w * c;
            }
        }
        for j in 0..n {
            combined[j] += &self.lower_weights[j];
            combined[j] -= &self.upper_weights[j];
        }
        if combined.iter().any(|c| !c.is_zero()) {
            return false;
        }
        let mut value = Rat::zero();
        for (w, row) in self.row_weights.iter().zip(&p.rows) {
            value += w * &row.rhs;
        }
        for j in 0..n {
            value += &self.lower_weights[j] * &p.lower[j];
            value -= &self.upper_weights[j] * &p.upper[j];
        }
        value.is_positive()
    }
}

use num_traits::Signed;

/// Outcome of an LP solve.
#[derive(Clone, Debug)]
pub enum LpOutcome {
    Optimal(BasicSolution),
    Infeasible(FarkasCertificate),
}

/// Solves the problem to a basic (vertex) optimum, or proves infeasibility.
pub fn solve_basic(p: &LpProblem) -> Result<LpOutcome, Error> {
    p.validate()?;
    let n = p.num_vars();
    if n == 0 {
        for (i, row) in p.rows.iter().enumerate() {
            if row.rhs.is_positive() {
                let mut row_weights = vec![Rat::zero(); p.rows.len()];
                row_weights[i] = Rat::one();
                return Ok(LpOutcome::Infeasible(FarkasCertificate {
                    row_weights,
                    lower_weights: vec![],
                    upper_weights: vec![],
                }));
            }
        }
        return Ok(LpOutcome::Optimal(BasicSolution {
            values: vec![],
            objective: Rat::zero(),
            active: ActiveSet::default(),
        }));
    }

    // Shift to z = x - l >= 0 and fold upper bounds in as rows:
    //   rows:  a . z >= b - a . l          (original rows)
    //          -z_j  >= -(u_j - l_j)       (upper bounds)
    let num_orig = p.rows.len();
    let mut mat: Vec<Vec<Rat>> = Vec::with_capacity(num_orig + n);
    let mut rhs: Vec<Rat> = Vec::with_capacity(num_orig + n);
    for row in &p.rows {
        let mut dense = vec![Rat::zero(); n];
        let mut shift = row.rhs.clone();
        for (j, c) in &row.coeffs {
            dense[*j] = c.clone();
            shift -= c * &p.lower[*j];
        }
        mat.push(dense);
        rhs.push(shift);
    }
    for j in 0..n {
        let mut dense = vec![Rat::zero(); n];
        dense[j] = -Rat::one();
        mat.push(dense);
        rhs.push(&p.lower[j] - &p.upper[j]);
    }

    match simplex_two_phase(&mat, &rhs, &p.objective) {
        SimplexEnd::Optimal(z) => {
            let values: Vec<Rat> = z.iter().zip(&p.lower).map(|(zi, li)| zi + li).collect();
            finish_solution(p, values).map(LpOutcome::Optimal)
        }
        SimplexEnd::Infeasible(y) => {
            // Split the expanded-system multipliers back into row and bound
            // weights; lower-bound weights close the zero-functional gap.
            let row_weights: Vec<Rat> = y[..num_orig].to_vec();
            let upper_weights: Vec<Rat> = y[num_orig..].to_vec();
            let mut lower_weights = vec![Rat::zero(); n];
            for j in 0..n {
                let mut acc = &upper_weights[j] - Rat::zero();
                for (w, row) in row_weights.iter().zip(&p.rows) {
                    for (jj, c) in &row.coeffs {
                        if *jj == j {
                            acc -= w * c;
                        }
                    }
                }
                lower_weights[j] = acc;
            }
            let cert = FarkasCertificate {
                row_weights,
                lower_weights,
                upper_weights,
            };
            if !cert.verify(p) {
                return Err(Error::Contract(
                    "infeasibility certificate failed verification".into(),
                ));
            }
            Ok(LpOutcome::Infeasible(cert))
        }
        SimplexEnd::Stuck(msg) => Err(Error::Contract(msg)),
    }
}

/// Checks the solution exactly and records the verified active set.
fn finish_solution(p: &LpProblem, values: Vec<Rat>) -> Result<BasicSolution, Error> {
    let n = p.num_vars();
    let mut active = ActiveSet::default();
    for (i, row) in p.rows.iter().enumerate() {
        let slack = row.slack_at(&values);
        if slack.is_negative() {
            return Err(Error::Contract(format!("solver returned point violating row {i}")));
        }
        if slack.is_zero() {
            active.rows.push(i);
        }
    }
    for j in 0..n {
        if values[j] < p.lower[j] || values[j] > p.upper[j] {
            return Err(Error::Contract(format!("solver returned point outside bounds at {j}")));
        }
        if values[j] == p.lower[j] {
            active.at_lower.push(j);
        }
        if values[j] == p.upper[j] {
            active.at_upper.push(j);
        }
    }
    // Vertex check: active constraints must span all n directions.
    let mut basis_rows: Vec<Vec<Rat>> = Vec::new();
    for &i in &active.rows {
        let mut dense = vec![Rat::zero(); n];
        for (j, c) in &p.rows[i].coeffs {
            dense[*j] = c.clone();
        }
        basis_rows.push(dense);
    }
    for &j in active.at_lower.iter().chain(&active.at_upper) {
        let mut dense = vec![Rat::zero(); n];
        dense[j] = Rat::one();
        basis_rows.push(dense);
    }
    if matrix_rank(basis_rows) != n {
        return Err(Error::Contract(
            "returned point is not basic: active constraints are rank-deficient".into(),
        ));
    }
    let mut objective = Rat::zero();
    for j in 0..n {
        objective += &p.objective[j] * &values[j];
    }
    Ok(BasicSolution { values, objective, active })
}

/// Exact rank by Gaussian elimination; consumes the rows.
pub fn matrix_rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let scale = rows[rank][col].clone();
        for c in col..ncols {
            let v = rows[rank][c].clone() / &scale;
            rows[rank][c] = v;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

enum SimplexEnd {
    /// Optimal z >= 0 for `min c.z, M z >= d`.
    Optimal(Vec<Rat>),
    /// Dual multipliers y >= 0 with yM <= 0, yd > 0 over the given rows.
    Infeasible(Vec<Rat>),
    Stuck(String),
}

/// Two-phase dense tableau simplex for `min c.z  s.t.  M z >= d, z >= 0`.
fn simplex_two_phase(mat: &[Vec<Rat>], rhs: &[Rat], objective: &[Rat]) -> SimplexEnd {
    let m = mat.len();
    let n = objective.len();
    let cols = n + 2 * m; // z | slack | artificial
    // Row i: sigma_i * (M_i z - s_i) + a_i = sigma_i d_i, with sigma making
    // the right side nonnegative.
    let mut tab: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut b: Vec<Rat> = Vec::with_capacity(m);
    let mut sigma: Vec<Rat> = Vec::with_capacity(m);
    for i in 0..m {
        let s = if rhs[i].is_negative() { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); cols];
        for j in 0..n {
            row[j] = &s * &mat[i][j];
        }
        row[n + i] = -s.clone();
        row[n + m + i] = Rat::one();
        tab.push(row);
        b.push(&s * &rhs[i]);
        sigma.push(s);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n + m + i).collect();

    // Phase 1: drive the artificial total to zero.
    let phase1_cost: Vec<Rat> = (0..cols)
        .map(|j| if j >= n + m { Rat::one() } else { Rat::zero() })
        .collect();
    let mut reduced = reduced_costs(&phase1_cost, &tab, &basis);
    if let Err(msg) = pivot_until_optimal(&mut tab, &mut b, &mut basis, &mut reduced, cols) {
        return SimplexEnd::Stuck(msg);
    }
    let infeas: Rat = basis
        .iter()
        .zip(&b)
        .filter(|(&j, _)| j >= n + m)
        .map(|(_, bi)| bi.clone())
        .sum();
    if infeas.is_positive() {
        // pi_i = 1 - reduced cost of artificial column i; y = sigma * pi.
        let y: Vec<Rat> = (0..m)
            .map(|i| &sigma[i] * (Rat::one() - &reduced[n + m + i]))
            .collect();
        return SimplexEnd::Infeasible(y);
    }

    // Pivot leftover artificials out (or drop redundant rows).
    let mut r = 0;
    while r < tab.len() {
        if basis[r] >= n + m {
            if let Some(j) = (0..n + m).find(|&j| !tab[r][j].is_zero()) {
                pivot(&mut tab, &mut b, &mut basis, &mut reduced, r, j);
            } else {
                tab.remove(r);
                b.remove(r);
                basis.remove(r);
                continue;
            }
        }
        r += 1;
    }

    // Phase 2 on the original objective (artificial columns barred).
    let phase2_cost: Vec<Rat> = (0..cols)
        .map(|j| if j < n { objective[j].clone() } else { Rat::zero() })
        .collect();
    let mut reduced = reduced_costs(&phase2_cost, &tab, &basis);
    if let Err(msg) = pivot_until_optimal(&mut tab, &mut b, &mut basis, &mut reduced, n + m) {
        return SimplexEnd::Stuck(msg);
    }

    let mut z = vec![Rat::zero(); n];
    for (r, &j) in basis.iter().enumerate() {
        if j < n {
            z[j] = b[r].clone();
        }
    }
    SimplexEnd::Optimal(z)
}

fn reduced_costs(cost: &[Rat], tab: &[Vec<Rat>], basis: &[usize]) -> Vec<Rat> {
    let mut reduced = cost.to_vec();
    for (r, &jb) in basis.iter().enumerate() {
        if !cost[jb].is_zero() {
            let w = cost[jb].clone();
            for (rj, tj) in reduced.iter_mut().zip(&tab[r]) {
                *rj -= &w * tj;
            }
        }
    }
    reduced
}

/// Bland's rule pivoting until no allowed column prices out negative.
fn pivot_until_optimal(
    tab: &mut Vec<Vec<Rat>>,
    b: &mut Vec<Rat>,
    basis: &mut Vec<usize>,
    reduced: &mut Vec<Rat>,
    allowed_cols: usize,
) -> Result<(), String> {
    loop {
        let Some(enter) = (0..allowed_cols).find(|&j| reduced[j].is_negative()) else {
            return Ok(());
        };
        // Ratio test; ties resolved toward the smallest basic index.
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..tab.len() {
            if tab[r][enter].is_positive() {
                let ratio = &b[r] / &tab[r][enter];
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio || (ratio == lratio && basis[r] < basis[lr]) {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        let Some((leave_row, _)) = leave else {
            return Err("simplex found an unbounded direction in a bounded system".into());
        };
        pivot(tab, b, basis, reduced, leave_row, enter);
    }
}

fn pivot(
    tab: &mut [Vec<Rat>],
    b: &mut [Rat],
    basis: &mut [usize],
    reduced: &mut [Rat],
    r: usize,
    c: usize,
) {
    let scale = tab[r][c].clone();
    for v in tab[r].iter_mut() {
        if !v.is_zero() {
            *v /= &scale;
        }
    }
    b[r] /= &scale;
    // Split borrows: copy the pivot row once.
    let pivot_row = tab[r].clone();
    let pivot_rhs = b[r].clone();
    for rr in 0..tab.len() {
        if rr != r && !tab[rr][c].is_zero() {
            let factor = tab[rr][c].clone();
            for (t, pv) in tab[rr].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    let delta = &factor * pv;
                    *t -= delta;
                }
            }
            b[rr] -= &factor * &pivot_rhs;
        }
    }
    if !reduced[c].is_zero() {
        let factor = reduced[c].clone();
        for (t, pv) in reduced.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                let delta = &factor * pv;
                *t -= delta;
            }
        }
    }
    basis[r] = c;
}

/// Hard stop for the row-generation loop; the row universes used here are
/// finite and far smaller.
const MAX_SEPARATION_ROUNDS: usize = 100_000;

/// Cutting-plane loop: solve a relaxation, ask the separation callback for
/// violated rows, re-solve until the callback certifies feasibility.
///
/// The callback must return at least one genuinely violated row whenever its
/// input is infeasible for the full system, and only rows valid for it.
/// Returns the outcome together with the accumulated relaxation.
pub fn solve_with_separation<F>(
    mut problem: LpProblem,
    mut separate: F,
) -> Result<(LpOutcome, LpProblem), Error>
where
    F: FnMut(&[Rat]) -> Result<Vec<LpRow>, Error>,
{
    for _ in 0..MAX_SEPARATION_ROUNDS {
        let outcome = solve_basic(&problem)?;
        let sol = match outcome {
            LpOutcome::Optimal(s) => s,
            // The relaxation is a superset of the full system, so its
            // infeasibility certificate stands.
            LpOutcome::Infeasible(cert) => return Ok((LpOutcome::Infeasible(cert), problem)),
        };
        let new_rows = separate(&sol.values)?;
        if new_rows.is_empty() {
            return Ok((LpOutcome::Optimal(sol), problem));
        }
        let mut added = 0;
        for row in new_rows {
            if !row.slack_at(&sol.values).is_negative() {
                return Err(Error::Contract(
                    "separation returned a row the current point satisfies".into(),
                ));
            }
            if !problem.rows.contains(&row) {
                problem.add_row(row);
                added += 1;
            }
        }
        if added == 0 {
            return Err(Error::Contract(
                "separation made no progress: all returned rows already present".into(),
            ));
        }
    }
    Err(Error::Contract("separation loop exceeded its round budget".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn row(coeffs: &[(usize, i64)], rhs: (i64, i64)) -> LpRow {
        LpRow::new(
            coeffs.iter().map(|&(j, c)| (j, rat_int(c))).collect(),
            rat(rhs.0, rhs.1),
        )
    }

    #[test]
    fn one_variable_min_at_row_bound() {
        let mut p = LpProblem::unit_box(vec![rat_int(1)]);
        p.add_row(row(&[(0, 1)], (1, 3)));
        let LpOutcome::Optimal(sol) = solve_basic(&p).unwrap() else {
            panic!("feasible")
        };
        assert_eq!(sol.values[0], rat(1, 3));
        assert_eq!(sol.objective, rat(1, 3));
        assert_eq!(sol.active.rows, vec![0]);
    }

    #[test]
    fn empty_box_system_yields_certificate() {
        // x >= 2 against 0 <= x <= 1.
        let mut p = LpProblem::unit_box(vec![rat_int(0)]);
        p.add_row(row(&[(0, 1)], (2, 1)));
        let LpOutcome::Infeasible(cert) = solve_basic(&p).unwrap() else {
            panic!("must be infeasible")
        };
        assert!(cert.verify(&p));
    }

    #[test]
    fn contradictory_rows_yield_certificate() {
        // x >= 2 and -x >= -1 with wide bounds.
        let p = LpProblem {
            objective: vec![rat_int(0)],
            lower: vec![rat_int(-10)],
            upper: vec![rat_int(10)],
            rows: vec![row(&[(0, 1)], (2, 1)), row(&[(0, -1)], (-1, 1))],
        };
        let LpOutcome::Infeasible(cert) = solve_basic(&p).unwrap() else {
            panic!("must be infeasible")
        };
        assert!(cert.verify(&p));
    }

    #[test]
    fn maximization_via_negated_objective() {
        // max x + y s.t. x + y <= 3/2 on the unit box, i.e. min -(x+y).
        let mut p = LpProblem::unit_box(vec![rat_int(-1), rat_int(-1)]);
        p.add_row(row(&[(0, -1), (1, -1)], (-3, 2)));
        let LpOutcome::Optimal(sol) = solve_basic(&p).unwrap() else {
            panic!()
        };
        assert_eq!(sol.objective, rat(-3, 2));
    }

    #[test]
    fn zero_variable_problems() {
        let p = LpProblem {
            objective: vec![],
            lower: vec![],
            upper: vec![],
            rows: vec![LpRow::new(vec![], rat_int(1))],
        };
        assert!(matches!(solve_basic(&p).unwrap(), LpOutcome::Infeasible(_)));
        let p2 = LpProblem {
            objective: vec![],
            lower: vec![],
            upper: vec![],
            rows: vec![LpRow::new(vec![], rat_int(-1))],
        };
        assert!(matches!(solve_basic(&p2).unwrap(), LpOutcome::Optimal(_)));
    }

    /// Oracle: optimal objective by enumerating all candidate vertices
    /// (every n-subset of constraints, solved exactly).
    fn vertex_enumeration_optimum(p: &LpProblem) -> Option<Rat> {
        let n = p.num_vars();
        let mut constraints: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for r in &p.rows {
            let mut dense = vec![Rat::zero(); n];
            for (j, c) in &r.coeffs {
                dense[*j] = c.clone();
            }
            constraints.push((dense, r.rhs.clone()));
        }
        for j in 0..n {
            let mut lo = vec![Rat::zero(); n];
            lo[j] = Rat::one();
            constraints.push((lo.clone(), p.lower[j].clone()));
            constraints.push((lo, p.upper[j].clone()));
        }
        let total = constraints.len();
        let mut best: Option<Rat> = None;
        let mut pick = vec![0usize; n];
        fn recurse(
            start: usize,
            depth: usize,
            pick: &mut Vec<usize>,
            total: usize,
            n: usize,
            constraints: &[(Vec<Rat>, Rat)],
            p: &LpProblem,
            best: &mut Option<Rat>,
        ) {
            if depth == n {
                // Solve the square system exactly.
                let mut a: Vec<Vec<Rat>> = pick
                    .iter()
                    .map(|&i| {
                        let mut row = constraints[i].0.clone();
                        row.push(constraints[i].1.clone());
                        row
                    })
                    .collect();
                // Gaussian elimination with partial pivoting by first nonzero.
                let mut cols_used = Vec::new();
                for col in 0..n {
                    let Some(r) =
                        (cols_used.len()..n).find(|&r| !a[r][col].is_zero())
                    else {
                        continue;
                    };
                    a.swap(cols_used.len(), r);
                    let lead = cols_used.len();
                    let s = a[lead][col].clone();
                    for v in a[lead].iter_mut() {
                        *v /= &s;
                    }
                    for rr in 0..n {
                        if rr != lead && !a[rr][col].is_zero() {
                            let f = a[rr][col].clone();
                            let src = a[lead].clone();
                            for (t, sv) in a[rr].iter_mut().zip(&src) {
                                *t -= &f * sv;
                            }
                        }
                    }
                    cols_used.push(col);
                }
                if cols_used.len() < n {
                    return; // singular pick
                }
                let mut x = vec![Rat::zero(); n];
                for (lead, &col) in cols_used.iter().enumerate() {
                    x[col] = a[lead][n].clone();
                }
                // Feasibility.
                for r in &p.rows {
                    if r.slack_at(&x).is_negative() {
                        return;
                    }
                }
                for j in 0..n {
                    if x[j] < p.lower[j] || x[j] > p.upper[j] {
                        return;
                    }
                }
                let mut obj = Rat::zero();
                for j in 0..n {
                    obj += &p.objective[j] * &x[j];
                }
                match best {
                    None => *best = Some(obj),
                    Some(b) => {
                        if obj < *b {
                            *best = Some(obj);
                        }
                    }
                }
                return;
            }
            for i in start..total {
                pick[depth] = i;
                recurse(i + 1, depth + 1, pick, total, n, constraints, p, best);
            }
        }
        recurse(0, 0, &mut pick, total, n, &constraints, p, &mut best);
        best
    }

    #[test]
    fn random_lps_match_vertex_enumeration_oracle() {
        let mut rng = StdRng::seed_from_u64(41);
        for case in 0..60 {
            let n = rng.gen_range(1..=4);
            let num_rows = rng.gen_range(0..=6);
            let mut p = LpProblem {
                objective: (0..n).map(|_| rat(rng.gen_range(-4..5), 1)).collect(),
                lower: (0..n).map(|_| rat(rng.gen_range(-2..1), 1)).collect(),
                upper: (0..n).map(|_| rat(rng.gen_range(1..4), 1)).collect(),
                rows: Vec::new(),
            };
            for _ in 0..num_rows {
                let mut coeffs: Vec<(usize, Rat)> = Vec::new();
                for j in 0..n {
                    if rng.gen_bool(0.7) {
                        coeffs.push((j, rat(rng.gen_range(-3..4), 1)));
                    }
                }
                let rhs = rat(rng.gen_range(-4..4), rng.gen_range(1..3));
                p.add_row(LpRow::new(coeffs, rhs));
            }
            let got = solve_basic(&p).unwrap();
            let oracle = vertex_enumeration_optimum(&p);
            match (got, oracle) {
                (LpOutcome::Optimal(sol), Some(best)) => {
                    assert_eq!(sol.objective, best, "case {case}");
                }
                (LpOutcome::Infeasible(cert), None) => {
                    assert!(cert.verify(&p), "case {case}");
                }
                (LpOutcome::Optimal(sol), None) => {
                    panic!("case {case}: solver found {:?}, oracle says empty", sol.values)
                }
                (LpOutcome::Infeasible(_), Some(b)) => {
                    panic!("case {case}: solver says empty, oracle found {b}")
                }
            }
        }
    }

    #[test]
    fn row_order_does_not_change_the_optimum() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..20 {
            let n = rng.gen_range(2..5);
            let mut p = LpProblem::unit_box(
                (0..n).map(|_| rat(rng.gen_range(0..5), 1)).collect(),
            );
            for _ in 0..rng.gen_range(1..6) {
                let mut coeffs: Vec<(usize, Rat)> = Vec::new();
                for j in 0..n {
                    if rng.gen_bool(0.6) {
                        coeffs.push((j, rat(rng.gen_range(0..3), 1)));
                    }
                }
                p.add_row(LpRow::new(coeffs, rat(rng.gen_range(0..2), 1)));
            }
            let first = solve_basic(&p).unwrap();
            let mut shuffled = p.clone();
            shuffled.rows.reverse();
            let second = solve_basic(&shuffled).unwrap();
            match (first, second) {
                (LpOutcome::Optimal(a), LpOutcome::Optimal(b)) => {
                    assert_eq!(a.objective, b.objective);
                }
                (LpOutcome::Infeasible(_), LpOutcome::Infeasible(_)) => {}
                _ => panic!("feasibility must not depend on row order"),
            }
        }
    }

    #[test]
    fn separation_with_all_rows_up_front_matches_direct_solve() {
        let mut p = LpProblem::unit_box(vec![rat_int(2), rat_int(3)]);
        let hidden = vec![
            row(&[(0, 1), (1, 1)], (1, 1)),
            row(&[(0, 1)], (1, 4)),
        ];
        let mut full = p.clone();
        for r in &hidden {
            full.add_row(r.clone());
        }
        let LpOutcome::Optimal(direct) = solve_basic(&full).unwrap() else {
            panic!()
        };
        p.rows.clear();
        let hidden2 = hidden.clone();
        let (outcome, relaxation) = solve_with_separation(p, move |x| {
            Ok(hidden2
                .iter()
                .filter(|r| r.slack_at(x).is_negative())
                .cloned()
                .collect())
        })
        .unwrap();
        let LpOutcome::Optimal(generated) = outcome else { panic!() };
        assert_eq!(direct.objective, generated.objective);
        assert!(relaxation.rows.len() <= hidden.len());
    }

    #[test]
    fn active_set_is_rank_verified() {
        let mut p = LpProblem::unit_box(vec![rat_int(1), rat_int(1)]);
        p.add_row(row(&[(0, 1), (1, 1)], (1, 1)));
        let LpOutcome::Optimal(sol) = solve_basic(&p).unwrap() else {
            panic!()
        };
        let active_count =
            sol.active.rows.len() + sol.active.at_lower.len() + sol.active.at_upper.len();
        assert!(active_count >= 2, "a vertex of a 2d system needs 2 active constraints");
    }

    #[test]
    fn dump_is_readable() {
        let mut p = LpProblem::unit_box(vec![rat_int(5)]);
        p.add_row(row(&[(0, 1)], (1, 6)));
        let text = p.dump();
        assert!(text.contains("minimize"));
        assert!(text.contains(">= 1/6"));
    }
}
