//! Positive diagonal rescaling of monomial groups.
//!
//! A monomial group is bounded exactly when some positive diagonal `B = diag(d)` makes every
//! `B g B^-1` a signed permutation matrix. Writing `g e_i = a_i e_{p(i)}`, the conjugate sends
//! `e_i` to `a_i d_{p(i)} / d_i e_{p(i)}`, so we need
//!
//! ```text
//! log d_{p(i)} - log d_i = -log |a_i|
//! ```
//!
//! for every generator and index. These are potential differences along the edges of a
//! multigraph on the indices; they are solvable iff the log-weights sum to zero around every
//! cycle, i.e. every cycle's coefficient magnitudes multiply to one. A spanning forest fixes
//! the potentials and each remaining edge is checked.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::matrix::{check_tol, monomial_decompose, Matrix, MonomialForm};

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingResult {
    /// Diagonal of `B`; the least index of each connected component gets `1`.
    pub d: Vec<f64>,
    /// `B g B^-1` for each generator, entries in `{0, -1, 1}`.
    pub normalized_generators: Vec<Matrix>,
    /// Connected components of the index graph (orbits of the permutation parts).
    pub components: Vec<Vec<usize>>,
}

impl ScalingResult {
    pub fn basis_change(&self) -> Matrix {
        Matrix::from_diagonal(&self.d)
    }
}

/// An edge whose constraint contradicts the spanning-forest potentials.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction {
    pub generator: usize,
    /// Edge `from -> to` with `g e_from = a e_to`.
    pub from: usize,
    pub to: usize,
    /// `log |a|`.
    pub log_weight: f64,
    /// Sum of log-weights around the closed cycle; zero for a bounded group.
    pub discrepancy: f64,
    /// Indices visited by the cycle, starting at `from`.
    pub cycle: Vec<usize>,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.from == self.to {
            write!(
                f,
                "self-loop at index {}, log-weight {} (generator {})",
                self.from + 1,
                self.log_weight,
                self.generator + 1
            )
        } else {
            let path: Vec<String> = self
                .cycle
                .iter()
                .chain(self.cycle.first())
                .map(|i| (i + 1).to_string())
                .collect();
            write!(
                f,
                "cycle {} has log magnitude product {} (closing edge {} -> {} of generator {})",
                path.join(" -> "),
                self.discrepancy,
                self.from + 1,
                self.to + 1,
                self.generator + 1
            )
        }
    }
}

struct Edge {
    generator: usize,
    from: usize,
    to: usize,
    w: f64,
}

fn decompose_all(spec: &GroupSpec, tol: f64) -> Result<Vec<MonomialForm>> {
    spec.generators()
        .iter()
        .enumerate()
        .map(|(index, g)| monomial_decompose(g, tol).ok_or(Error::NotMonomial { index }))
        .collect()
}

/// Finds `B = diag(d)` with every `B g B^-1` a (signed) permutation matrix.
///
/// Fails with [`Error::UnboundedGroup`] when the log-weights around some cycle do not cancel,
/// which means the generated group is unbounded.
pub fn positive_scaling(spec: &GroupSpec, tol: f64) -> Result<ScalingResult> {
    check_tol(tol)?;
    let forms = decompose_all(spec, tol)?;
    let (d, components) = solve_potentials(spec.dim(), &forms, tol)?;
    let normalized_generators = spec.generators().iter().map(|g| conjugate(g, &d, tol)).collect();
    Ok(ScalingResult { d, normalized_generators, components })
}

/// Scales the absolute values `|g|` (a non-negative monomial group, the image of the
/// entrywise absolute value homomorphism) and conjugates the signed generators by the same `B`.
/// Signs commute with the diagonal scaling, so the results are signed permutation matrices.
pub fn signed_normalize(spec: &GroupSpec, tol: f64) -> Result<ScalingResult> {
    check_tol(tol)?;
    decompose_all(spec, tol)?;
    let magnitudes = GroupSpec::new(
        spec.name(),
        spec.dim(),
        spec.generators().iter().map(|g| g.map(f64::abs)).collect(),
        0.0,
    )?;
    let scaled = positive_scaling(&magnitudes, tol)?;
    let normalized_generators = spec.generators().iter().map(|g| conjugate(g, &scaled.d, tol)).collect();
    Ok(ScalingResult { normalized_generators, ..scaled })
}

fn solve_potentials(n: usize, forms: &[MonomialForm], tol: f64) -> Result<(Vec<f64>, Vec<Vec<usize>>)> {
    let edges: Vec<Edge> = forms
        .iter()
        .enumerate()
        .flat_map(|(generator, f)| {
            f.perm.iter().zip(&f.coeffs).enumerate().map(move |(from, (&to, &a))| Edge {
                generator,
                from,
                to,
                w: a.abs().ln(),
            })
        })
        .collect();

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        incident[e.from].push(k);
        if e.to != e.from {
            incident[e.to].push(k);
        }
    }

    let mut potential: Vec<Option<f64>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut components = Vec::new();
    for root in 0..n {
        if potential[root].is_some() {
            continue;
        }
        potential[root] = Some(0.0);
        let mut component = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let pu = potential[u].unwrap();
            for &k in &incident[u] {
                let e = &edges[k];
                let (v, pv) = if e.from == u { (e.to, pu - e.w) } else { (e.from, pu + e.w) };
                if potential[v].is_none() {
                    potential[v] = Some(pv);
                    parent[v] = Some(u);
                    depth[v] = depth[u] + 1;
                    component.push(v);
                    queue.push_back(v);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    let potential: Vec<f64> = potential.into_iter().map(Option::unwrap).collect();

    for e in &edges {
        let discrepancy = potential[e.to] - potential[e.from] + e.w;
        if discrepancy.abs() > tol {
            let cycle = tree_cycle(e.from, e.to, &parent, &depth);
            return Err(Error::UnboundedGroup(Box::new(Obstruction {
                generator: e.generator,
                from: e.from,
                to: e.to,
                log_weight: e.w,
                discrepancy,
                cycle,
            })));
        }
    }
    Ok((potential.iter().map(|p| p.exp()).collect(), components))
}

/// The closed walk `from -> to` (the offending edge) followed by the tree path back to `from`.
fn tree_cycle(from: usize, to: usize, parent: &[Option<usize>], depth: &[usize]) -> Vec<usize> {
    if from == to {
        return vec![from];
    }
    let (mut a, mut b) = (to, from);
    let mut up_from_to = vec![a];
    let mut up_from_from = vec![b];
    while depth[a] > depth[b] {
        a = parent[a].unwrap();
        up_from_to.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b].unwrap();
        up_from_from.push(b);
    }
    while a != b {
        a = parent[a].unwrap();
        b = parent[b].unwrap();
        up_from_to.push(a);
        up_from_from.push(b);
    }
    // both lists end at the common ancestor
    up_from_from.pop();
    let mut cycle = vec![from];
    cycle.extend(up_from_to.into_iter().filter(|&i| i != from));
    cycle.extend(up_from_from.into_iter().rev().filter(|&i| i != from));
    cycle
}

fn conjugate(g: &Matrix, d: &[f64], tol: f64) -> Matrix {
    let n = g.dim();
    let mut out = Matrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            let mut v = d[r] * g.get(r, c) / d[c];
            if v.abs() <= tol {
                v = 0.0;
            } else if (v.abs() - 1.0).abs() <= tol {
                v = v.signum();
            }
            out.set(r, c, v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::examples::*;
    use crate::DEFAULT_TOL;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = DEFAULT_TOL;

    fn spec(gens: Vec<Matrix>) -> GroupSpec {
        GroupSpec::new("t", gens[0].dim(), gens, TOL).unwrap()
    }

    fn unbounded(r: Result<ScalingResult>) -> Obstruction {
        match r {
            Err(Error::UnboundedGroup(o)) => *o,
            other => panic!("expected UnboundedGroup, got {other:?}"),
        }
    }

    #[test]
    fn z2_scaled_becomes_swap() {
        let r = positive_scaling(&spec(vec![z2_scaled()]), TOL).unwrap();
        assert_abs_diff_eq!(r.d[0], 1.0);
        assert_abs_diff_eq!(r.d[1], 2.0, epsilon = 1e-12);
        assert!(r.normalized_generators[0].approx_eq(&swap2(), 1e-12));
    }

    #[test]
    fn paper_gauge_gives_same_conjugate() {
        // diag(1/sqrt2, sqrt2) differs from diag(1, 2) by a global factor
        let b = Matrix::from_diagonal(&[1.0 / 2f64.sqrt(), 2f64.sqrt()]);
        let binv = Matrix::from_diagonal(&[2f64.sqrt(), 1.0 / 2f64.sqrt()]);
        let conj = &(&b * &z2_scaled()) * &binv;
        assert!(conj.approx_eq(&swap2(), 1e-12));
    }

    #[test]
    fn permutations_are_fixed() {
        let g = GroupSpec::symmetric(4);
        let r = positive_scaling(&g, TOL).unwrap();
        assert_eq!(r.d, vec![1.0; 4]);
        assert_eq!(r.normalized_generators, g.generators());
        assert_eq!(r.components, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn diagonal_self_loop() {
        let o = unbounded(positive_scaling(&spec(vec![Matrix::from_diagonal(&[2.0, 0.5])]), TOL));
        assert_eq!((o.from, o.to), (0, 0));
        assert_abs_diff_eq!(o.log_weight, 2f64.ln());
        assert!(o.to_string().starts_with("self-loop at index 1, log-weight 0.693"));
    }

    #[test]
    fn m_cycle_obstruction() {
        let o = unbounded(positive_scaling(&spec(vec![m3()]), TOL));
        // |2 * (-1/2) * 2| = 2 around the 3-cycle
        assert_abs_diff_eq!(o.discrepancy.abs(), 2f64.ln(), epsilon = 1e-12);
        let mut c = o.cycle.clone();
        c.sort_unstable();
        assert_eq!(c, vec![0, 1, 2]);
        assert!(matches!(signed_normalize(&spec(vec![m3()]), TOL), Err(Error::UnboundedGroup(_))));
    }

    #[test]
    fn one_dimensional_scaling_is_unbounded() {
        let g = spec(vec![Matrix::from_rows(&[[2.0]]).unwrap()]);
        assert!(matches!(positive_scaling(&g, TOL), Err(Error::UnboundedGroup(_))));
    }

    #[test]
    fn signed_examples() {
        let r = signed_normalize(&spec(vec![s3()]), TOL).unwrap();
        assert_eq!(r.d, vec![1.0; 3]);
        assert_eq!(r.normalized_generators[0], s3());

        let g = Matrix::from_rows(&[[0.0, -2.0], [0.5, 0.0]]).unwrap();
        let r = signed_normalize(&spec(vec![g]), TOL).unwrap();
        assert_abs_diff_eq!(r.d[1] / r.d[0], 2.0, epsilon = 1e-12);
        let expected = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert_eq!(r.normalized_generators[0], expected);
    }

    #[test]
    fn not_monomial_is_rejected() {
        let g = spec(vec![Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap()]);
        assert!(matches!(positive_scaling(&g, TOL), Err(Error::NotMonomial { index: 0 })));
        assert!(matches!(signed_normalize(&g, TOL), Err(Error::NotMonomial { index: 0 })));
    }

    #[test]
    fn disconnected_components_are_gauged_separately() {
        // swap on {0,1} scaled by 3, and a fixed point 2
        let g = Matrix::from_rows(&[[0.0, 3.0, 0.0], [1.0 / 3.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let r = positive_scaling(&spec(vec![g]), TOL).unwrap();
        assert_eq!(r.components, vec![vec![0, 1], vec![2]]);
        assert_eq!(r.d[0], 1.0);
        assert_eq!(r.d[2], 1.0);
        assert_abs_diff_eq!(r.d[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn longer_cycle_is_reported_with_path() {
        // two generators each consistent alone, inconsistent together
        let a = Matrix::from_rows(&[[0.0, 0.0, 1.0], [2.0, 0.0, 0.0], [0.0, 0.5, 0.0]]).unwrap();
        let b = Matrix::permutation(&[1, 0, 2]);
        assert!(positive_scaling(&spec(vec![a.clone()]), TOL).is_ok());
        let o = unbounded(positive_scaling(&spec(vec![a, b]), TOL));
        assert_eq!(o.generator, 1);
        assert_eq!(o.cycle, vec![0, 1]);
        assert!(o.to_string().starts_with("cycle 1 -> 2 -> 1"));
        assert!(o.discrepancy.abs() > TOL);
    }
}
