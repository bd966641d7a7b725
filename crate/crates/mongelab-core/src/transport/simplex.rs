//! Transportation simplex over a dense cost matrix.
//!
//! The basis is maintained as a spanning tree on the bipartite node set
//! (sources then targets). Entering and leaving variables follow Bland's
//! lowest-index rule, which prevents cycling and makes the pivot sequence
//! deterministic for a fixed input ordering.

use crate::error::{Error, Result};
use crate::tol;

/// Final solver state; kept so the uniqueness probe can inspect reduced
/// costs and force alternative vertices.
#[derive(Debug, Clone)]
pub struct SimplexState {
    pub m: usize,
    pub n: usize,
    cost: Vec<f64>,
    basic: Vec<bool>,
    mass: Vec<f64>,
    pub potentials_source: Vec<f64>,
    pub potentials_target: Vec<f64>,
    pub pivots: u64,
}

impl SimplexState {
    pub fn mass(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.n + j]
    }

    pub fn is_basic(&self, i: usize, j: usize) -> bool {
        self.basic[i * self.n + j]
    }

    pub fn reduced_cost(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.n + j] - self.potentials_source[i] - self.potentials_target[j]
    }

    pub fn objective(&self) -> f64 {
        let mut total = 0.0;
        for idx in 0..self.mass.len() {
            if self.basic[idx] && self.mass[idx] > 0.0 {
                total += self.mass[idx] * self.cost[idx];
            }
        }
        total
    }

    /// Entries with mass above the floor, in row-major order.
    pub fn support(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.n {
                let v = self.mass[i * self.n + j];
                if v > tol::MASS_FLOOR {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn basis_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.n {
                if self.basic[i * self.n + j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when some basis cell carries no mass.
    pub fn degenerate(&self) -> bool {
        (0..self.mass.len()).any(|idx| self.basic[idx] && self.mass[idx] <= tol::MASS_FLOOR)
    }
}

/// Solves the transportation problem for the given supplies, demands and
/// dense cost matrix (row-major m x n). Infinite costs must be pre-screened
/// by the caller; they are handled here through a dominating finite
/// surrogate, and a plan that still uses such a cell is reported infeasible
/// by the caller's post-check.
pub fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<SimplexState> {
    let m = supply.len();
    let n = demand.len();
    assert_eq!(cost.len(), m * n);
    let sum_s: f64 = supply.iter().sum();
    let sum_d: f64 = demand.iter().sum();
    if (sum_s - sum_d).abs() > tol::MARGINAL {
        return Err(Error::Infeasible(format!(
            "marginal totals differ: {sum_s} vs {sum_d}"
        )));
    }

    let mut state = northwest_corner(supply, demand, cost);
    optimize(&mut state)?;
    Ok(state)
}

/// Northwest-corner initial basic feasible solution with exactly m+n-1
/// basic cells (degenerate zero-mass cells are inserted on ties).
fn northwest_corner(supply: &[f64], demand: &[f64], cost: &[f64]) -> SimplexState {
    let m = supply.len();
    let n = demand.len();
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let mut basic = vec![false; m * n];
    let mut mass = vec![0.0; m * n];
    let (mut i, mut j) = (0usize, 0usize);
    loop {
        let q = a[i].min(b[j]).max(0.0);
        basic[i * n + j] = true;
        mass[i * n + j] = q;
        a[i] -= q;
        b[j] -= q;
        if i == m - 1 && j == n - 1 {
            break;
        }
        // advance exactly one index per step so the basis stays a tree
        if (a[i] <= b[j] && i < m - 1) || j == n - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    SimplexState {
        m,
        n,
        cost: cost.to_vec(),
        basic,
        mass,
        potentials_source: vec![0.0; m],
        potentials_target: vec![0.0; n],
        pivots: 0,
    }
}

/// Solves u_i + v_j = c_ij over the basis tree (u_0 fixed to zero).
fn compute_potentials(state: &mut SimplexState) -> Result<()> {
    let (m, n) = (state.m, state.n);
    // adjacency over nodes 0..m (sources) and m..m+n (targets)
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + n];
    for i in 0..m {
        for j in 0..n {
            if state.basic[i * n + j] {
                adj[i].push(m + j);
                adj[m + j].push(i);
            }
        }
    }
    let mut known = vec![false; m + n];
    let mut u = vec![0.0; m];
    let mut v = vec![0.0; n];
    let mut stack = vec![0usize];
    known[0] = true;
    while let Some(node) = stack.pop() {
        for &next in &adj[node] {
            if known[next] {
                continue;
            }
            known[next] = true;
            if next >= m {
                let (i, j) = (node, next - m);
                v[j] = state.cost[i * n + j] - u[i];
            } else {
                let (i, j) = (next, node - m);
                u[i] = state.cost[i * n + j] - v[j];
            }
            stack.push(next);
        }
    }
    if known.iter().any(|k| !k) {
        return Err(Error::Numerical("basis is not a spanning tree".into()));
    }
    state.potentials_source = u;
    state.potentials_target = v;
    Ok(())
}

/// Lowest-index entering cell with reduced cost below the optimality
/// tolerance, if any.
fn entering_cell(state: &SimplexState) -> Option<(usize, usize)> {
    for i in 0..state.m {
        for j in 0..state.n {
            if !state.basic[i * state.n + j] && state.reduced_cost(i, j) < -tol::OPTIMALITY {
                return Some((i, j));
            }
        }
    }
    None
}

/// The unique cycle created by adding `(ei, ej)` to the basis tree, as a
/// list of cells starting with the entering one and alternating signs
/// (+, -, +, ...).
fn pivot_cycle(state: &SimplexState, ei: usize, ej: usize) -> Result<Vec<(usize, usize)>> {
    let (m, n) = (state.m, state.n);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + n];
    for i in 0..m {
        for j in 0..n {
            if state.basic[i * n + j] {
                adj[i].push(m + j);
                adj[m + j].push(i);
            }
        }
    }
    // path from source node ei to target node m+ej through the tree
    let mut parent = vec![usize::MAX; m + n];
    let mut seen = vec![false; m + n];
    seen[ei] = true;
    let mut queue = std::collections::VecDeque::from([ei]);
    while let Some(node) = queue.pop_front() {
        if node == m + ej {
            break;
        }
        for &next in &adj[node] {
            if !seen[next] {
                seen[next] = true;
                parent[next] = node;
                queue.push_back(next);
            }
        }
    }
    if !seen[m + ej] {
        return Err(Error::Numerical("pivot target unreachable in basis tree".into()));
    }
    let mut nodes = vec![m + ej];
    while *nodes.last().unwrap() != ei {
        nodes.push(parent[*nodes.last().unwrap()]);
    }
    nodes.reverse(); // ei ... m+ej
    let mut cells = vec![(ei, ej)];
    // walk back from m+ej to ei; consecutive nodes alternate sides
    for w in nodes.windows(2).rev() {
        let (a, b) = (w[0], w[1]);
        let cell = if a < m { (a, b - m) } else { (b, a - m) };
        cells.push(cell);
    }
    Ok(cells)
}

fn optimize(state: &mut SimplexState) -> Result<()> {
    let max_pivots = 20_000u64 + 200 * (state.m as u64 + state.n as u64).pow(2);
    compute_potentials(state)?;
    while let Some((ei, ej)) = entering_cell(state) {
        pivot(state, ei, ej)?;
        compute_potentials(state)?;
        if state.pivots > max_pivots {
            return Err(Error::Numerical("pivot limit exceeded".into()));
        }
    }
    Ok(())
}

/// Performs one pivot with `(ei, ej)` entering. Exposed so the uniqueness
/// probe can force zero-reduced-cost cells into the basis.
pub fn pivot(state: &mut SimplexState, ei: usize, ej: usize) -> Result<()> {
    let n = state.n;
    let cells = pivot_cycle(state, ei, ej)?;
    // odd positions lose mass
    let mut theta = f64::INFINITY;
    let mut leaving: Option<(usize, usize)> = None;
    for (pos, &(i, j)) in cells.iter().enumerate() {
        if pos % 2 == 1 {
            let v = state.mass[i * n + j];
            let better = v < theta - tol::MASS_FLOOR
                || ((v - theta).abs() <= tol::MASS_FLOOR
                    && leaving.map_or(true, |(li, lj)| (i, j) < (li, lj)));
            if better {
                theta = v;
                leaving = Some((i, j));
            }
        }
    }
    let (li, lj) = leaving.ok_or_else(|| Error::Numerical("pivot cycle has no leaving cell".into()))?;
    for (pos, &(i, j)) in cells.iter().enumerate() {
        if pos % 2 == 0 {
            state.mass[i * n + j] += theta;
        } else {
            state.mass[i * n + j] -= theta;
        }
    }
    state.basic[ei * n + ej] = true;
    state.basic[li * n + lj] = false;
    state.mass[li * n + lj] = 0.0;
    // clip negatives introduced by floating-point subtraction
    for &(i, j) in &cells {
        let v = &mut state.mass[i * n + j];
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    state.pivots += 1;
    Ok(())
}

/// Forces a nonbasic cell into the basis (one pivot), then re-optimises.
/// Used to search for alternative optimal vertices.
pub fn force_basic_and_reoptimize(state: &SimplexState, i: usize, j: usize) -> Result<SimplexState> {
    let mut alt = state.clone();
    if !alt.basic[i * alt.n + j] {
        pivot(&mut alt, i, j)?;
    }
    optimize(&mut alt)?;
    Ok(alt)
}
