//! Permutation representations: orbits, tensor-power actions, orbit bases of equivariant
//! linear maps and invariant biases, and end-to-end equivariance checks of layered networks.

use std::collections::{HashSet, VecDeque};

use petgraph::unionfind::UnionFind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::activations::{random_nonzero_vector, ActivationFn};
use crate::error::{Error, Result};
use crate::matrix::{check_tol, monomial_decompose, Matrix};

/// Upper bound on the points of any action or pair set built here.
pub const MAX_POINTS: usize = 1_000_000;

/// A bijection on `{0, .., m-1}`, stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &i in &images {
            if i >= m || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection on 0..{m}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(m: usize) -> Self {
        Perm((0..m).collect())
    }

    /// `i -> i + 1 mod m`.
    pub fn cycle(m: usize) -> Self {
        Perm((0..m).map(|i| (i + 1) % m).collect())
    }

    pub fn transposition(m: usize, a: usize, b: usize) -> Self {
        let mut p: Vec<usize> = (0..m).collect();
        p.swap(a, b);
        Perm(p)
    }

    /// Reads a 0/1 permutation matrix (`M e_i = e_{p(i)}`).
    pub fn from_matrix(m: &Matrix, tol: f64) -> Option<Self> {
        let f = monomial_decompose(m, tol)?;
        f.is_permutation(tol).then_some(Perm(f.perm))
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::permutation(&self.0)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self after other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, j)| i == *j).count()
    }

    /// `(g x)_{p(i)} = x_i`.
    pub fn act_on(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for (i, &v) in x.iter().enumerate() {
            y[self.0[i]] = v;
        }
        y
    }
}

/// Generators `(0 1)` and `(0 1 .. n-1)` of `S_n`.
pub fn symmetric_generators(n: usize) -> Vec<Perm> {
    match n {
        0 | 1 => Vec::new(),
        2 => vec![Perm::transposition(2, 0, 1)],
        _ => vec![Perm::transposition(n, 0, 1), Perm::cycle(n)],
    }
}

pub fn cyclic_generators(n: usize) -> Vec<Perm> {
    if n > 1 {
        vec![Perm::cycle(n)]
    } else {
        Vec::new()
    }
}

/// A group acting on `m` points through the listed generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PermAction {
    m: usize,
    generators: Vec<Perm>,
    label: String,
}

impl PermAction {
    pub fn new(label: impl Into<String>, m: usize, generators: Vec<Perm>) -> Result<Self> {
        if m > MAX_POINTS {
            return Err(Error::SizeExceeded { points: m as u128, max: MAX_POINTS });
        }
        if let Some(g) = generators.iter().find(|g| g.len() != m) {
            return Err(Error::InvalidPermutation(format!(
                "generator acts on {} points, action has {m}",
                g.len()
            )));
        }
        Ok(PermAction { m, generators, label: label.into() })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generator_matrices(&self) -> Vec<Matrix> {
        self.generators.iter().map(Perm::to_matrix).collect()
    }

    /// All group elements by breadth-first composition, or `None` past `cap` elements.
    pub fn enumerate_group(&self, cap: usize) -> Option<Vec<Perm>> {
        let id = Perm::identity(self.m);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in &self.generators {
                let p = g.compose(&elements[k]);
                if seen.insert(p.clone()) {
                    if elements.len() == cap {
                        return None;
                    }
                    elements.push(p);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        Some(elements)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    /// Blocks with sorted members, ordered by least member.
    pub orbits: Vec<Vec<usize>>,
    pub orbit_sizes: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

fn partition(points: usize, mut link: impl FnMut(&mut UnionFind<usize>)) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(points);
    link(&mut uf);
    let mut block_of_root = vec![usize::MAX; points];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for p in 0..points {
        let r = uf.find_mut(p);
        if block_of_root[r] == usize::MAX {
            block_of_root[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of_root[r]].push(p);
    }
    blocks
}

/// Orbits of the action.
pub fn orbits(a: &PermAction) -> OrbitDecomposition {
    let orbits = partition(a.m, |uf| {
        for g in &a.generators {
            for i in 0..a.m {
                uf.union(i, g.apply(i));
            }
        }
    });
    let orbit_sizes = orbits.iter().map(Vec::len).collect();
    OrbitDecomposition { orbits, orbit_sizes }
}

fn checked_power(n: usize, k: usize) -> Result<usize> {
    let points = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if points > MAX_POINTS as u128 {
        return Err(Error::SizeExceeded { points, max: MAX_POINTS });
    }
    Ok(points as usize)
}

/// Index of `(i_1, .., i_k)` in `n^k`: little-endian mixed radix, `sum_j i_j n^(j-1)`.
pub fn tuple_index(tuple: &[usize], n: usize) -> usize {
    tuple.iter().rev().fold(0, |acc, &i| acc * n + i)
}

pub fn index_tuple(mut index: usize, n: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let i = index % n;
            index /= n;
            i
        })
        .collect()
}

/// The diagonal action of `gens` on `k`-tuples over `{0, .., n-1}`.
pub fn tensor_action(n: usize, k: usize, gens: &[Perm]) -> Result<PermAction> {
    if n == 0 || k == 0 {
        return Err(Error::ShapeMismatch(format!("tensor action needs n, k >= 1 (n = {n}, k = {k})")));
    }
    let size = checked_power(n, k)?;
    if let Some(g) = gens.iter().find(|g| g.len() != n) {
        return Err(Error::InvalidPermutation(format!("generator acts on {} points, expected {n}", g.len())));
    }
    let lifted = gens
        .iter()
        .map(|g| {
            let mut images = vec![0usize; size];
            let mut digits = vec![0usize; k];
            for (idx, image) in images.iter_mut().enumerate() {
                *image = digits.iter().rev().fold(0, |acc, &d| acc * n + g.apply(d));
                // increment the little-endian counter
                for d in digits.iter_mut() {
                    *d += 1;
                    if *d < n {
                        break;
                    }
                    *d = 0;
                }
                debug_assert!(idx + 1 == size || tuple_index(&digits, n) == idx + 1);
            }
            Perm(images)
        })
        .collect();
    PermAction::new(format!("tensor(n={n}, k={k})"), size, lifted)
}

/// Orbit indicators on `dim_out x dim_in`, each stored as its sorted `(row, col)` support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerBasis {
    pub dim_in: usize,
    pub dim_out: usize,
    pub elements: Vec<Vec<(usize, usize)>>,
}

impl LayerBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Row-major 0/1 matrix of element `k`.
    pub fn dense(&self, k: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim_out * self.dim_in];
        for &(r, c) in &self.elements[k] {
            out[r * self.dim_in + c] = 1.0;
        }
        out
    }
}

/// Orbits of the simultaneous action on `(out, in)` pairs, one indicator per orbit.
///
/// The `i`-th generators of `a_in` and `a_out` must represent the same group element.
pub fn equivariant_basis(a_in: &PermAction, a_out: &PermAction) -> Result<LayerBasis> {
    if a_in.generators.len() != a_out.generators.len() {
        return Err(Error::GeneratorCountMismatch { left: a_in.generators.len(), right: a_out.generators.len() });
    }
    let (dim_in, dim_out) = (a_in.m, a_out.m);
    let pairs = dim_in as u128 * dim_out as u128;
    if pairs > MAX_POINTS as u128 {
        return Err(Error::SizeExceeded { points: pairs, max: MAX_POINTS });
    }
    let blocks = partition(dim_in * dim_out, |uf| {
        for (gi, go) in a_in.generators.iter().zip(&a_out.generators) {
            for o in 0..dim_out {
                let row = go.apply(o) * dim_in;
                for i in 0..dim_in {
                    uf.union(o * dim_in + i, row + gi.apply(i));
                }
            }
        }
    });
    let elements = blocks
        .into_iter()
        .map(|b| b.into_iter().map(|p| (p / dim_in, p % dim_in)).collect())
        .collect();
    Ok(LayerBasis { dim_in, dim_out, elements })
}

/// One indicator vector per orbit; together they span the fixed vectors of the action.
pub fn invariant_basis(a: &PermAction) -> Vec<Vec<f64>> {
    orbits(a)
        .orbits
        .iter()
        .map(|block| {
            let mut v = vec![0.0; a.m];
            for &i in block {
                v[i] = 1.0;
            }
            v
        })
        .collect()
}

/// Every point fixed by every generator: a direct sum of trivial representations.
pub fn is_trivial_rep(a: &PermAction) -> bool {
    a.generators.iter().all(Perm::is_identity)
}

/// `x -> W x + v` with `W` in the span of a [`LayerBasis`] and `v` in the span of orbit indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineEquivariantLayer {
    dim_in: usize,
    dim_out: usize,
    weights: Vec<f64>,
    bias_weights: Vec<f64>,
    w: Vec<f64>,
    v: Vec<f64>,
}

impl AffineEquivariantLayer {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias_weights(&self) -> &[f64] {
        &self.bias_weights
    }

    /// Row-major `dim_out x dim_in` weight matrix.
    pub fn weight_matrix(&self) -> &[f64] {
        &self.w
    }

    pub fn bias(&self) -> &[f64] {
        &self.v
    }

    /// Overwrites one entry of the materialized weight matrix, leaving the basis span.
    pub fn set_weight_entry(&mut self, row: usize, col: usize, value: f64) {
        self.w[row * self.dim_in + col] = value;
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim_in, "layer input has the wrong length");
        self.w
            .chunks(self.dim_in)
            .zip(&self.v)
            .map(|(row, b)| row.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + b)
            .collect()
    }
}

/// Materializes `W = sum_k weights[k] B_k` and `v = sum_j bias_weights[j] u_j`.
pub fn build_affine_layer(
    basis: &LayerBasis,
    weights: &[f64],
    bias_basis: &[Vec<f64>],
    bias_weights: &[f64],
) -> Result<AffineEquivariantLayer> {
    if weights.len() != basis.len() {
        return Err(Error::CountMismatch { what: "layer weights", expected: basis.len(), found: weights.len() });
    }
    if bias_weights.len() != bias_basis.len() {
        return Err(Error::CountMismatch {
            what: "bias weights",
            expected: bias_basis.len(),
            found: bias_weights.len(),
        });
    }
    if let Some(u) = bias_basis.iter().find(|u| u.len() != basis.dim_out) {
        return Err(Error::ShapeMismatch(format!(
            "bias basis vector of length {} for output dimension {}",
            u.len(),
            basis.dim_out
        )));
    }
    let mut w = vec![0.0; basis.dim_out * basis.dim_in];
    for (support, &c) in basis.elements.iter().zip(weights) {
        for &(r, col) in support {
            w[r * basis.dim_in + col] += c;
        }
    }
    let mut v = vec![0.0; basis.dim_out];
    for (u, &c) in bias_basis.iter().zip(bias_weights) {
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi += c * ui;
        }
    }
    Ok(AffineEquivariantLayer {
        dim_in: basis.dim_in,
        dim_out: basis.dim_out,
        weights: weights.to_vec(),
        bias_weights: bias_weights.to_vec(),
        w,
        v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageKind {
    Layer,
    Activation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageViolation {
    /// 1-based index of the layer, or of the layer the activation follows.
    pub stage: usize,
    pub kind: StageKind,
    pub trial: usize,
    pub generator: usize,
    pub x: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkReport {
    pub pass: bool,
    pub trials: usize,
    pub worst_residual: f64,
    /// First violation by trial, then generator, then stage.
    pub violation: Option<StageViolation>,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (x, y)| {
        let d = (x - y).abs();
        if d.is_nan() { f64::INFINITY } else { acc.max(d) }
    })
}

/// Checks `Phi(g x) = g Phi(x)` stage by stage for
/// `Phi = L_m . f_{m-1} . L_{m-1} . ... . f_1 . L_1`, where `actions[s]` describes how each
/// generator acts on the input of layer `s + 1` (and `actions[m]` on the output).
pub fn validate_network(
    layers: &[AffineEquivariantLayer],
    acts: &[ActivationFn],
    actions: &[PermAction],
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<NetworkReport> {
    check_tol(tol)?;
    if layers.is_empty() {
        return Err(Error::ShapeMismatch("network has no layers".into()));
    }
    if acts.len() + 1 != layers.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} layers need {} activations, got {}",
            layers.len(),
            layers.len() - 1,
            acts.len()
        )));
    }
    if actions.len() != layers.len() + 1 {
        return Err(Error::ShapeMismatch(format!(
            "{} layers need {} actions, got {}",
            layers.len(),
            layers.len() + 1,
            actions.len()
        )));
    }
    for (s, layer) in layers.iter().enumerate() {
        if layer.dim_in != actions[s].m || layer.dim_out != actions[s + 1].m {
            return Err(Error::ShapeMismatch(format!(
                "layer {} maps {} -> {} but actions have {} -> {} points",
                s + 1,
                layer.dim_in,
                layer.dim_out,
                actions[s].m,
                actions[s + 1].m
            )));
        }
    }
    let gens = actions[0].generators.len();
    if let Some(a) = actions.iter().find(|a| a.generators.len() != gens) {
        return Err(Error::GeneratorCountMismatch { left: gens, right: a.generators.len() });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut violation: Option<StageViolation> = None;
    for trial in 0..trials {
        let x = random_nonzero_vector(&mut rng, actions[0].m, 10.0);
        for g in 0..gens {
            let mut h = x.clone();
            let mut hg = actions[0].generators[g].act_on(&x);
            let mut record = |stage: usize, kind: StageKind, h: &[f64], hg: &[f64]| {
                let expected = actions[stage].generators[g].act_on(h);
                let residual = max_abs_diff(hg, &expected);
                worst = worst.max(residual);
                if residual > tol && violation.is_none() {
                    violation = Some(StageViolation { stage, kind, trial, generator: g, x: x.clone(), residual });
                }
            };
            for (s, layer) in layers.iter().enumerate() {
                h = layer.apply(&h);
                hg = layer.apply(&hg);
                record(s + 1, StageKind::Layer, &h, &hg);
                if let Some(f) = acts.get(s) {
                    h = f.apply(&h);
                    hg = f.apply(&hg);
                    record(s + 1, StageKind::Activation, &h, &hg);
                }
            }
        }
    }
    Ok(NetworkReport { pass: violation.is_none(), trials, worst_residual: worst, violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(n: usize) -> PermAction {
        PermAction::new(format!("S{n}"), n, symmetric_generators(n)).unwrap()
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbits(&natural(3)).orbits, vec![vec![0, 1, 2]]);
        let a = PermAction::new("swap", 4, vec![Perm::transposition(4, 0, 1)]).unwrap();
        let o = orbits(&a);
        assert_eq!(o.orbits, vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(o.orbit_sizes, vec![2, 1, 1]);
        let pairs = tensor_action(3, 2, &symmetric_generators(3)).unwrap();
        let o = orbits(&pairs);
        // diagonal (0,0)=0, (1,1)=4, (2,2)=8
        assert_eq!(o.orbits, vec![vec![0, 4, 8], vec![1, 2, 3, 5, 6, 7]]);
    }

    #[test]
    fn tensor_examples() {
        let t = tensor_action(3, 1, &symmetric_generators(3)).unwrap();
        assert_eq!(t.generators(), natural(3).generators());
        let t = tensor_action(2, 2, &[Perm::transposition(2, 0, 1)]).unwrap();
        // (0,0)<->(1,1), (0,1)<->(1,0)
        assert_eq!(t.generators()[0].images(), &[3, 2, 1, 0]);
        assert!(matches!(tensor_action(10, 7, &[]), Err(Error::SizeExceeded { .. })));
        assert!(matches!(tensor_action(1000, 3, &[]), Err(Error::SizeExceeded { .. })));
    }

    #[test]
    fn tuple_encoding_is_little_endian() {
        assert_eq!(tuple_index(&[1, 0], 3), 1);
        assert_eq!(tuple_index(&[0, 1], 3), 3);
        assert_eq!(tuple_index(&[2, 1, 1], 3), 2 + 3 + 9);
        for idx in 0..27 {
            assert_eq!(tuple_index(&index_tuple(idx, 3, 3), 3), idx);
        }
        let t = tensor_action(3, 3, &[Perm::cycle(3)]).unwrap();
        let g = &t.generators()[0];
        for idx in 0..27 {
            let tuple: Vec<usize> = index_tuple(idx, 3, 3).iter().map(|&i| (i + 1) % 3).collect();
            assert_eq!(g.apply(idx), tuple_index(&tuple, 3));
        }
    }

    #[test]
    fn basis_examples() {
        let b = equivariant_basis(&natural(3), &natural(3)).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b.elements[0], vec![(0, 0), (1, 1), (2, 2)]);

        let pairs = tensor_action(4, 2, &symmetric_generators(4)).unwrap();
        assert_eq!(equivariant_basis(&pairs, &pairs).unwrap().len(), 15);

        let trivial = PermAction::new("trivial", 2, Vec::new()).unwrap();
        assert_eq!(equivariant_basis(&trivial, &trivial).unwrap().len(), 4);

        assert!(matches!(
            equivariant_basis(&trivial, &natural(3)),
            Err(Error::GeneratorCountMismatch { left: 0, right: 2 })
        ));
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(invariant_basis(&natural(3)), vec![vec![1.0; 3]]);
        let a = PermAction::new("swap", 3, vec![Perm::transposition(3, 0, 1)]).unwrap();
        assert_eq!(invariant_basis(&a), vec![vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        let pairs = tensor_action(3, 2, &symmetric_generators(3)).unwrap();
        assert_eq!(invariant_basis(&pairs).len(), 2);
    }

    #[test]
    fn trivial_rep_examples() {
        assert!(is_trivial_rep(&PermAction::new("none", 5, Vec::new()).unwrap()));
        assert!(!is_trivial_rep(&PermAction::new("swap", 2, vec![Perm::transposition(2, 0, 1)]).unwrap()));
        assert!(!is_trivial_rep(&natural(3)));
        assert!(is_trivial_rep(&PermAction::new("id", 3, vec![Perm::identity(3)]).unwrap()));
    }

    #[test]
    fn deep_sets_layer() {
        let b = equivariant_basis(&natural(3), &natural(3)).unwrap();
        let layer = build_affine_layer(&b, &[2.0, 0.5], &[], &[]).unwrap();
        let expected = [2.0, 0.5, 0.5, 0.5, 2.0, 0.5, 0.5, 0.5, 2.0];
        assert_eq!(layer.weight_matrix(), &expected);

        let zero = build_affine_layer(&b, &[0.0, 0.0], &invariant_basis(&natural(3)), &[0.0]).unwrap();
        assert_eq!(zero.apply(&[1.0, -2.0, 3.0]), vec![0.0; 3]);

        let trivial = PermAction::new("trivial", 2, Vec::new()).unwrap();
        let tb = equivariant_basis(&trivial, &trivial).unwrap();
        let e11 = build_affine_layer(&tb, &[1.0, 0.0, 0.0, 0.0], &[], &[]).unwrap();
        assert_eq!(e11.weight_matrix(), &[1.0, 0.0, 0.0, 0.0]);

        assert!(matches!(build_affine_layer(&b, &[1.0], &[], &[]), Err(Error::CountMismatch { .. })));
        assert!(matches!(
            build_affine_layer(&b, &[1.0, 1.0], &[vec![1.0; 2]], &[1.0]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn network_validation() {
        let a = natural(3);
        let b = equivariant_basis(&a, &a).unwrap();
        let bias = invariant_basis(&a);
        let l1 = build_affine_layer(&b, &[1.5, -0.3], &bias, &[0.2]).unwrap();
        let l2 = build_affine_layer(&b, &[-0.7, 0.9], &bias, &[-1.0]).unwrap();
        let actions = vec![a.clone(), a.clone(), a.clone()];
        let r = validate_network(&[l1.clone(), l2.clone()], &[ActivationFn::Relu], &actions, 100, 1e-9, 3).unwrap();
        assert!(r.pass, "{r:?}");

        let mut bad = l1.clone();
        bad.set_weight_entry(0, 1, 5.0);
        let r = validate_network(&[bad, l2.clone()], &[ActivationFn::Relu], &actions, 100, 1e-9, 3).unwrap();
        let v = r.violation.unwrap();
        assert_eq!((v.stage, v.kind), (1, StageKind::Layer));

        assert!(matches!(
            validate_network(&[l1.clone(), l2.clone()], &[], &actions, 1, 1e-9, 0),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            validate_network(&[l1, l2], &[ActivationFn::Relu], &actions[..2], 1, 1e-9, 0),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn identity_network_passes() {
        let a = natural(4);
        let trivial_basis = equivariant_basis(&a, &a).unwrap();
        let id = build_affine_layer(&trivial_basis, &[1.0, 0.0], &[], &[]).unwrap();
        let r = validate_network(
            &[id.clone(), id.clone(), id],
            &[ActivationFn::Identity, ActivationFn::Identity],
            &[a.clone(), a.clone(), a.clone(), a],
            20,
            0.0,
            9,
        )
        .unwrap();
        assert!(r.pass);
    }

    #[test]
    fn group_enumeration() {
        assert_eq!(natural(4).enumerate_group(1000).unwrap().len(), 24);
        assert!(natural(6).enumerate_group(100).is_none());
        assert_eq!(PermAction::new("none", 3, Vec::new()).unwrap().enumerate_group(10).unwrap().len(), 1);
    }

    #[test]
    fn perm_validation() {
        assert!(Perm::new(vec![0, 0]).is_err());
        assert!(Perm::new(vec![2, 0]).is_err());
        assert!(Perm::new(vec![1, 2, 0]).is_ok());
        let p = Perm::from_matrix(&crate::matrix::examples::p3(), 1e-9).unwrap();
        assert_eq!(p.images(), &[1, 2, 0]);
        assert!(Perm::from_matrix(&crate::matrix::examples::s3(), 1e-9).is_none());
        assert!(PermAction::new("bad", 3, vec![Perm::cycle(4)]).is_err());
    }
}
