//! Exact feasibility for small linear systems over rationals.
//!
//! Phase I of the primal simplex method on a dense tableau with Bland's rule,
//! so it always terminates. Finds `x >= 0` satisfying every constraint or
//! proves none exists.

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Returns a basic feasible point (a vertex of the feasible polyhedron) of
/// `{x >= 0 : constraints}`, or `None` when the system is infeasible.
pub fn find_feasible_point(num_vars: usize, constraints: &[Constraint]) -> Option<Vec<Rational>> {
    // Flip rows so every right-hand side is nonnegative.
    let rows: Vec<(Vec<Rational>, Relation, Rational)> = constraints
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), num_vars, "constraint width mismatch");
            if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|x| -x).collect(), flipped, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let num_rows = rows.len();
    let num_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let num_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = num_vars + num_slack + num_art;
    let art_start = num_vars + num_slack;

    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(num_rows);
    let mut basis = Vec::with_capacity(num_rows);
    let (mut next_slack, mut next_art) = (num_vars, art_start);
    for (coeffs, rel, rhs) in &rows {
        let mut row = vec![Rational::zero(); width + 1];
        row[..num_vars].clone_from_slice(coeffs);
        row[width] = rhs.clone();
        match rel {
            Relation::Le => {
                row[next_slack] = Rational::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rational::one();
                next_slack += 1;
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        tab.push(row);
    }

    // Reduced costs of the phase-I objective: minimize the sum of artificials.
    let mut cost = vec![Rational::zero(); width + 1];
    for c in cost.iter_mut().take(width).skip(art_start) {
        *c = Rational::one();
    }
    for (r, &b) in basis.iter().enumerate() {
        if b >= art_start {
            for (c, v) in cost.iter_mut().zip(&tab[r]) {
                *c = &*c - v;
            }
        }
    }

    while let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..num_rows {
            if tab[r][enter].is_positive() {
                let ratio = &tab[r][width] / &tab[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Phase I is bounded below by 0, so an entering column always has a
        // positive entry.
        let (pr, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut tab, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    // -cost[width] is the phase-I objective value.
    if !cost[width].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); num_vars];
    for (r, &b) in basis.iter().enumerate() {
        if b < num_vars {
            x[b] = tab[r][width].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<Rational>], cost: &mut [Rational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip().expect("pivot element is nonzero");
    for v in tab[pr].iter_mut() {
        *v = &*v * &inv;
    }
    let prow = tab[pr].clone();
    for (r, row) in tab.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v = &*v - &(&f * p);
            }
        }
    }
    if !cost[pc].is_zero() {
        let f = cost[pc].clone();
        for (v, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v = &*v - &(&f * p);
            }
        }
    }
}
