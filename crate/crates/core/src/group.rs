//! Matrix groups given by generators, and breadth-first closure of finite ones.

use std::collections::HashMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matrix::{check_tol, monomial_decompose, Matrix};

/// A matrix group `rho(G)` encoded by a list of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    name: String,
    n: usize,
    generators: Vec<Matrix>,
}

impl GroupSpec {
    /// Validates that every generator is a finite, invertible `n x n` matrix.
    pub fn new(name: impl Into<String>, n: usize, generators: Vec<Matrix>, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for (index, g) in generators.iter().enumerate() {
            if g.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
            }
            if !g.is_finite() {
                return Err(Error::NonFinite { index });
            }
            let det = g.det();
            if det.abs() <= tol {
                return Err(Error::NotInvertible { index, det });
            }
        }
        Ok(GroupSpec { name: name.into(), n, generators })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Permutation matrices of `S_n`, generated by `(0 1)` and the `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        GroupSpec { name: format!("sym{n}"), n, generators: symmetric_generators(n) }
    }

    /// Cyclic shift `e_i -> e_{i+1 mod n}`.
    pub fn cyclic(n: usize) -> Self {
        let generators = if n > 1 { vec![Matrix::permutation(&cycle_images(n))] } else { Vec::new() };
        GroupSpec { name: format!("cyclic{n}"), n, generators }
    }

    /// Signed permutation matrices: `S_n` together with the sign flip of the first coordinate.
    pub fn signed_symmetric(n: usize) -> Self {
        let mut generators = symmetric_generators(n);
        let mut flip = vec![1.0; n];
        flip[0] = -1.0;
        generators.push(Matrix::from_diagonal(&flip));
        GroupSpec { name: format!("signed-sym{n}"), n, generators }
    }

    /// The cyclic shift with the coefficient of the last column negated.
    pub fn signed_cyclic(n: usize) -> Self {
        let mut g = Matrix::permutation(&cycle_images(n));
        g.set(0, n - 1, -1.0);
        GroupSpec { name: format!("signed-cyclic{n}"), n, generators: vec![g] }
    }

    /// The planar rotation by `2 pi / k`, generating `C_k`.
    pub fn rotation(k: usize) -> Self {
        let mut g = Matrix::rotation_2d(TAU / k as f64);
        // sin/cos of multiples of pi/2 leave ~1e-16 residue
        for r in 0..2 {
            for c in 0..2 {
                let v = g.get(r, c);
                if v.abs() < 1e-15 {
                    g.set(r, c, 0.0);
                }
            }
        }
        GroupSpec { name: format!("rotation{k}"), n: 2, generators: vec![g] }
    }

    pub fn all_monomial(&self, tol: f64) -> bool {
        self.generators.iter().all(|g| monomial_decompose(g, tol).is_some())
    }
}

fn cycle_images(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn symmetric_generators(n: usize) -> Vec<Matrix> {
    match n {
        0 | 1 => Vec::new(),
        2 => vec![Matrix::permutation(&[1, 0])],
        _ => {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            vec![Matrix::permutation(&swap), Matrix::permutation(&cycle_images(n))]
        }
    }
}

/// Elements of `<generators>` in breadth-first discovery order.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    pub elements: Vec<Matrix>,
    /// `false` when the cap was hit or a product overflowed; the group may be infinite.
    pub complete: bool,
}

impl ClosureResult {
    pub fn order(&self) -> Option<usize> {
        self.complete.then_some(self.elements.len())
    }
}

/// Deduplicating store: a 1-D weighted projection buckets candidates so that
/// only neighbouring buckets need an exact max-abs comparison.
struct ElementIndex {
    weights: Vec<f64>,
    width: f64,
    buckets: HashMap<i64, Vec<usize>>,
}

impl ElementIndex {
    fn new(n: usize, tol: f64) -> Self {
        // weights in [0.5, 1), fixed so ordering stays reproducible
        let weights: Vec<f64> = (0..n * n)
            .map(|k| 0.5 + 0.5 * ((k as f64 + 1.0) * 0.618_033_988_749_895).fract())
            .collect();
        let spread: f64 = weights.iter().sum();
        ElementIndex { weights, width: (spread * tol).max(1e-300), buckets: HashMap::new() }
    }

    fn key(&self, m: &Matrix) -> i64 {
        let p: f64 = m.as_slice().iter().zip(&self.weights).map(|(a, w)| a * w).sum();
        (p / self.width).floor() as i64
    }

    fn find(&self, m: &Matrix, elements: &[Matrix], tol: f64) -> Option<usize> {
        let k = self.key(m);
        [k.saturating_sub(1), k, k.saturating_add(1)]
            .iter()
            .filter_map(|b| self.buckets.get(b))
            .flatten()
            .copied()
            .find(|&i| elements[i].approx_eq(m, tol))
    }

    fn insert(&mut self, m: &Matrix, index: usize) {
        self.buckets.entry(self.key(m)).or_default().push(index);
    }
}

/// Breadth-first closure of `spec` under left multiplication by the generators.
///
/// Discovery order is fixed: elements are expanded in insertion order and, for each,
/// the generators are applied in list order. Two matrices are identified when their
/// max-abs difference is at most `tol`.
pub fn close_group(spec: &GroupSpec, cap: usize, tol: f64) -> ClosureResult {
    let n = spec.dim();
    let identity = Matrix::identity(n);
    let mut index = ElementIndex::new(n, tol);
    let mut elements = vec![identity.clone()];
    index.insert(&identity, 0);
    if cap == 0 {
        return ClosureResult { elements: Vec::new(), complete: false };
    }

    let mut head = 0;
    while head < elements.len() {
        for g in spec.generators() {
            let product = g * &elements[head];
            if !product.is_finite() {
                return ClosureResult { elements, complete: false };
            }
            if index.find(&product, &elements, tol).is_none() {
                if elements.len() == cap {
                    return ClosureResult { elements, complete: false };
                }
                index.insert(&product, elements.len());
                elements.push(product);
            }
        }
        head += 1;
    }
    ClosureResult { elements, complete: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::examples::*;
    use crate::{DEFAULT_CLOSURE_CAP, DEFAULT_TOL};

    fn spec(gens: Vec<Matrix>) -> GroupSpec {
        let n = gens[0].dim();
        GroupSpec::new("t", n, gens, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn swap_closes_to_two() {
        let c = close_group(&spec(vec![swap2()]), DEFAULT_CLOSURE_CAP, DEFAULT_TOL);
        assert!(c.complete);
        assert_eq!(c.elements.len(), 2);
        assert_eq!(c.elements[0], Matrix::identity(2));
    }

    #[test]
    fn s3_has_six_elements() {
        let t = Matrix::permutation(&[1, 0, 2]);
        let c3 = Matrix::permutation(&[1, 2, 0]);
        let c = close_group(&spec(vec![t, c3]), DEFAULT_CLOSURE_CAP, DEFAULT_TOL);
        assert!(c.complete);
        assert_eq!(c.order(), Some(6));
    }

    #[test]
    fn m_generates_an_infinite_group() {
        let c = close_group(&spec(vec![m3()]), 100, DEFAULT_TOL);
        assert!(!c.complete);
        assert_eq!(c.elements.len(), 100);
    }

    #[test]
    fn overflow_stops_closure() {
        let g = Matrix::from_diagonal(&[1e200]);
        let c = close_group(&spec(vec![g]), 100, DEFAULT_TOL);
        assert!(!c.complete);
        assert!(c.elements.iter().all(Matrix::is_finite));
    }

    #[test]
    fn builtins() {
        let sizes = [
            (GroupSpec::symmetric(4), 24),
            (GroupSpec::cyclic(5), 5),
            (GroupSpec::signed_symmetric(3), 48),
            (GroupSpec::signed_cyclic(3), 6),
            (GroupSpec::rotation(4), 4),
            (GroupSpec::rotation(6), 6),
            (GroupSpec::symmetric(1), 1),
        ];
        for (g, order) in sizes {
            let c = close_group(&g, DEFAULT_CLOSURE_CAP, DEFAULT_TOL);
            assert_eq!(c.order(), Some(order), "{}", g.name());
        }
    }

    #[test]
    fn validation() {
        let singular = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(
            GroupSpec::new("x", 2, vec![singular], DEFAULT_TOL),
            Err(Error::NotInvertible { index: 0, .. })
        ));
        assert!(matches!(
            GroupSpec::new("x", 3, vec![swap2()], DEFAULT_TOL),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
        let nan = Matrix::from_diagonal(&[f64::NAN, 1.0]);
        assert!(matches!(GroupSpec::new("x", 2, vec![nan], DEFAULT_TOL), Err(Error::NonFinite { .. })));
    }
}
