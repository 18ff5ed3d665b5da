//! Scalar activations, the `b`-multiplicative construction from profiles on `[1, b]`,
//! numeric family-membership tests and point-wise equivariance checks.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{check_tol, Matrix};
use crate::tclass::ActivationFamily;
use crate::DEFAULT_TOL;

/// Default number of samples for [`EtaProfile::from_fn`].
pub const DEFAULT_PROFILE_SAMPLES: usize = 17;

/// Writes `x = b^n * y` with `y` in `[1, b)`.
///
/// Inputs within `DEFAULT_TOL` (relative) of a power of `b` snap to `y = 1`.
pub fn decompose_scale(x: f64, b: f64) -> Result<(i32, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::NonPositiveInput(x));
    }
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::InvalidBase(b));
    }
    Ok(decompose_unchecked(x, b))
}

fn decompose_unchecked(x: f64, b: f64) -> (i32, f64) {
    let mut n = (x.ln() / b.ln()).floor() as i32;
    let mut y = x / b.powi(n);
    // floor of a rounded log can be off by one either way
    if y < 1.0 - DEFAULT_TOL {
        n -= 1;
        y = x / b.powi(n);
    } else if y >= b * (1.0 + DEFAULT_TOL) {
        n += 1;
        y = x / b.powi(n);
    }
    if (y - 1.0).abs() <= DEFAULT_TOL {
        y = 1.0;
    } else if (y - b).abs() <= DEFAULT_TOL * b {
        n += 1;
        y = 1.0;
    }
    (n, y)
}

/// A continuous profile on `[1, b]`, stored as samples and interpolated piecewise-linearly.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaProfile {
    b: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl EtaProfile {
    /// Sample abscissae must increase strictly from `1` to `b`; the end points are accepted
    /// within `DEFAULT_TOL` and stored exactly.
    pub fn new(b: f64, samples: &[(f64, f64)]) -> Result<Self> {
        if !(b > 1.0) || !b.is_finite() {
            return Err(Error::InvalidBase(b));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidProfile("need at least two samples".into()));
        }
        if samples.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidProfile("samples must be finite".into()));
        }
        let mut xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
        let last = xs.len() - 1;
        if (xs[0] - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvalidProfile(format!("first abscissa must be 1, got {}", xs[0])));
        }
        if (xs[last] - b).abs() > DEFAULT_TOL * b {
            return Err(Error::InvalidProfile(format!("last abscissa must be b = {b}, got {}", xs[last])));
        }
        xs[0] = 1.0;
        xs[last] = b;
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("abscissae must be strictly increasing".into()));
        }
        Ok(EtaProfile { b, xs, ys })
    }

    /// Samples `eta` at `count` evenly spaced points of `[1, b]`.
    pub fn from_fn(b: f64, count: usize, eta: impl Fn(f64) -> f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidProfile("need at least two samples".into()));
        }
        let samples: Vec<(f64, f64)> = (0..count)
            .map(|k| {
                let x = if k + 1 == count { b } else { 1.0 + (b - 1.0) * k as f64 / (count - 1) as f64 };
                (x, eta(x))
            })
            .collect();
        EtaProfile::new(b, &samples)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Piecewise-linear interpolation; arguments are clamped to `[1, b]`.
    pub fn eval(&self, y: f64) -> f64 {
        let y = y.clamp(1.0, self.b);
        let k = self.xs.partition_point(|&x| x <= y);
        if k == 0 {
            return self.ys[0];
        }
        if k == self.xs.len() {
            return self.ys[k - 1];
        }
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        y0 + (y1 - y0) * (y - x0) / (x1 - x0)
    }

    /// `|eta(b) - b eta(1)|`.
    pub fn endpoint_residual(&self) -> f64 {
        (self.ys[self.ys.len() - 1] - self.b * self.ys[0]).abs()
    }

    pub fn lipschitz(&self) -> f64 {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| ((y[1] - y[0]) / (x[1] - x[0])).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.ys.iter().fold(0.0, |m, y| m.max(y.abs()))
    }
}

/// A `b`-multiplicative activation assembled from profiles on `[1, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaActivation {
    b: f64,
    plus: EtaProfile,
    minus: Option<EtaProfile>,
    signed: bool,
}

impl EtaActivation {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn plus(&self) -> &EtaProfile {
        &self.plus
    }

    pub fn minus(&self) -> Option<&EtaProfile> {
        self.minus.as_ref()
    }

    pub fn signed(&self) -> bool {
        self.signed
    }

    /// `f(x) = b^n eta+(x / b^n)` for `x > 0` and `f(0) = 0`. Negative inputs use the odd
    /// extension when signed and `b^n eta-(-x / b^n)` otherwise.
    pub fn eval(&self, x: f64) -> f64 {
        if x > 0.0 {
            branch(&self.plus, x)
        } else if x < 0.0 {
            match (&self.minus, self.signed) {
                (_, true) => -branch(&self.plus, -x),
                (Some(minus), false) => branch(minus, -x),
                (None, false) => unreachable!("unsigned activation without a negative profile"),
            }
        } else {
            0.0
        }
    }

    /// The family this construction belongs to by design.
    pub fn family(&self) -> ActivationFamily {
        if self.signed {
            ActivationFamily::PMBMultiplicative { b: self.b }
        } else {
            ActivationFamily::BMultiplicative { b: self.b }
        }
    }
}

fn branch(eta: &EtaProfile, x: f64) -> f64 {
    let (n, y) = decompose_unchecked(x, eta.b);
    eta.b.powi(n) * eta.eval(y)
}

/// Builds the activation of a `b`- or `+-b`-multiplicative function from its profiles.
///
/// `signed = true` takes the odd extension of the positive branch and forbids `eta_minus`;
/// `signed = false` requires `eta_minus` for the negative half-line.
pub fn build_eta_activation(
    b: f64,
    eta_plus: EtaProfile,
    eta_minus: Option<EtaProfile>,
    signed: bool,
    tol: f64,
) -> Result<ActivationFn> {
    check_tol(tol)?;
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::InvalidBase(b));
    }
    match (&eta_minus, signed) {
        (Some(_), true) => {
            return Err(Error::InvalidProfile("a signed activation takes no negative profile".into()))
        }
        (None, false) => {
            return Err(Error::InvalidProfile("an unsigned activation needs a negative profile".into()))
        }
        _ => {}
    }
    for eta in std::iter::once(&eta_plus).chain(eta_minus.as_ref()) {
        if (eta.b - b).abs() > DEFAULT_TOL * b {
            return Err(Error::InvalidProfile(format!("profile spans [1, {}] but b = {b}", eta.b)));
        }
        let residual = eta.endpoint_residual();
        if residual > tol {
            return Err(Error::EndpointViolation { residual, tol });
        }
    }
    Ok(ActivationFn::EtaMultiplicative(EtaActivation { b, plus: eta_plus, minus: eta_minus, signed }))
}

/// A scalar activation applied coordinatewise.
#[derive(Clone)]
pub enum ActivationFn {
    Identity,
    Relu,
    Tanh,
    Custom { name: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
    EtaMultiplicative(EtaActivation),
}

impl ActivationFn {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ActivationFn::Custom { name: name.into(), f: Arc::new(f) }
    }

    pub fn name(&self) -> String {
        match self {
            ActivationFn::Identity => "identity".into(),
            ActivationFn::Relu => "relu".into(),
            ActivationFn::Tanh => "tanh".into(),
            ActivationFn::Custom { name, .. } => name.clone(),
            ActivationFn::EtaMultiplicative(e) => {
                let sign = if e.signed { "signed" } else { "unsigned" };
                format!("eta({sign}, b={})", e.b)
            }
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ActivationFn::Identity => x,
            ActivationFn::Relu => x.max(0.0),
            ActivationFn::Tanh => x.tanh(),
            ActivationFn::Custom { f, .. } => f(x),
            ActivationFn::EtaMultiplicative(e) => e.eval(x),
        }
    }

    /// The induced point-wise map on vectors.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|&v| self.eval(v)).collect()
    }
}

impl fmt::Debug for ActivationFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActivationFn::EtaMultiplicative(e) => f.debug_tuple("EtaMultiplicative").field(e).finish(),
            other => write!(f, "{}", other.name()),
        }
    }
}

/// Symmetric log-spaced sample points `+-x` with `|x|` in `[min_abs, max_abs]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipGrid {
    pub min_abs: f64,
    pub max_abs: f64,
    pub per_side: usize,
}

impl Default for MembershipGrid {
    /// Six decades, `1e-3 ..= 1e3`.
    fn default() -> Self {
        MembershipGrid { min_abs: 1e-3, max_abs: 1e3, per_side: 241 }
    }
}

impl MembershipGrid {
    pub fn magnitudes(&self) -> Vec<f64> {
        log_space(self.min_abs, self.max_abs, self.per_side)
    }

    pub fn points(&self) -> Vec<f64> {
        let mags = self.magnitudes();
        mags.iter().rev().map(|m| -m).chain(mags.iter().copied()).collect()
    }
}

fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|k| if k + 1 == count { hi } else { (a + (b - a) * k as f64 / (count - 1) as f64).exp() })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub member: bool,
    pub worst_residual: f64,
    /// Grid point realizing the worst residual, when there is one.
    pub worst_x: Option<f64>,
}

struct Worst {
    residual: f64,
    x: Option<f64>,
}

impl Worst {
    fn new() -> Self {
        Worst { residual: 0.0, x: None }
    }

    fn update(&mut self, x: f64, residual: f64) {
        // NaN residuals count as failures
        if residual > self.residual || (residual.is_nan() && !self.residual.is_nan()) {
            self.residual = residual;
            self.x = Some(x);
        }
    }
}

/// Tests the defining identity of `family` on the sample grid.
pub fn check_family_membership(
    f: &ActivationFn,
    family: &ActivationFamily,
    grid: &MembershipGrid,
    tol: f64,
) -> MembershipReport {
    let mags = grid.magnitudes();
    let points = grid.points();
    let mut worst = Worst::new();
    match *family {
        ActivationFamily::Continuous => {}
        ActivationFamily::OddContinuous => odd_residuals(f, &mags, &mut worst),
        ActivationFamily::Semilinear => {
            worst.update(0.0, f.eval(0.0).abs());
            for side in [1.0, -1.0] {
                let xs: Vec<f64> = mags.iter().map(|m| side * m).collect();
                let slope = lsq_slope(f, &xs);
                for &x in &xs {
                    worst.update(x, (f.eval(x) - slope * x).abs());
                }
            }
        }
        ActivationFamily::BMultiplicative { b } => mult_residuals(f, b, &points, &mut worst),
        ActivationFamily::PMBMultiplicative { b } => {
            mult_residuals(f, b, &points, &mut worst);
            odd_residuals(f, &mags, &mut worst);
        }
        ActivationFamily::AffineOnly => {
            let mut xs = points.clone();
            xs.push(0.0);
            let (slope, intercept) = lsq_affine(f, &xs);
            for &x in &xs {
                worst.update(x, (f.eval(x) - slope * x - intercept).abs());
            }
        }
        ActivationFamily::LinearOnly => {
            let slope = lsq_slope(f, &points);
            worst.update(0.0, f.eval(0.0).abs());
            for &x in &points {
                worst.update(x, (f.eval(x) - slope * x).abs());
            }
        }
    }
    MembershipReport { member: worst.residual <= tol, worst_residual: worst.residual, worst_x: worst.x }
}

fn odd_residuals(f: &ActivationFn, mags: &[f64], worst: &mut Worst) {
    worst.update(0.0, f.eval(0.0).abs());
    for &x in mags {
        worst.update(x, (f.eval(-x) + f.eval(x)).abs());
    }
}

fn mult_residuals(f: &ActivationFn, b: f64, points: &[f64], worst: &mut Worst) {
    for &x in points {
        worst.update(x, (f.eval(b * x) - b * f.eval(x)).abs());
    }
}

fn lsq_slope(f: &ActivationFn, xs: &[f64]) -> f64 {
    let (num, den) = xs.iter().fold((0.0, 0.0), |(n, d), &x| (n + x * f.eval(x), d + x * x));
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn lsq_affine(f: &ActivationFn, xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / m;
    let ys: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let mean_y = ys.iter().sum::<f64>() / m;
    let (sxy, sxx) = xs.iter().zip(&ys).fold((0.0, 0.0), |(sxy, sxx), (&x, &y)| {
        (sxy + (x - mean_x) * (y - mean_y), sxx + (x - mean_x) * (x - mean_x))
    });
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    (slope, mean_y - slope * mean_x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub matrix_index: usize,
    pub x: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivarianceReport {
    pub pass: bool,
    pub trials: usize,
    pub worst_residual: f64,
    /// The failing check with the lowest trial index, then lowest matrix index.
    pub counterexample: Option<Counterexample>,
}

/// Random vector with components uniform in `[-range, range]`, exact zeros redrawn.
pub(crate) fn random_nonzero_vector(rng: &mut ChaCha8Rng, len: usize, range: f64) -> Vec<f64> {
    (0..len)
        .map(|_| loop {
            let v: f64 = rng.gen_range(-range..=range);
            if v != 0.0 {
                break v;
            }
        })
        .collect()
}

/// Checks `f(M x) = M f(x)` (with `f` applied coordinatewise) for every matrix on `trials`
/// seeded random vectors with components in `[-10, 10]`.
///
/// Checking generators is enough: if `f` commutes with `A` and `B` it commutes with `AB`
/// and with `A^-1`.
pub fn verify_pointwise_equivariance(
    f: &ActivationFn,
    mats: &[Matrix],
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<EquivarianceReport> {
    check_tol(tol)?;
    if trials == 0 {
        return Err(Error::CountMismatch { what: "trials", expected: 1, found: 0 });
    }
    let n = match mats.first() {
        Some(m) => m.dim(),
        None => return Ok(EquivarianceReport { pass: true, trials, worst_residual: 0.0, counterexample: None }),
    };
    if let Some(bad) = mats.iter().find(|m| m.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut counterexample = None;
    for trial in 0..trials {
        let x = random_nonzero_vector(&mut rng, n, 10.0);
        let fx = f.apply(&x);
        for (matrix_index, m) in mats.iter().enumerate() {
            let lhs = f.apply(&m.mul_vec(&x));
            let rhs = m.mul_vec(&fx);
            let residual = lhs.iter().zip(&rhs).fold(0.0f64, |acc, (a, b)| {
                let d = (a - b).abs();
                if d.is_nan() { f64::INFINITY } else { acc.max(d) }
            });
            worst = worst.max(residual);
            if residual > tol && counterexample.is_none() {
                counterexample = Some(Counterexample { trial, matrix_index, x: x.clone(), residual });
            }
        }
    }
    Ok(EquivarianceReport { pass: counterexample.is_none(), trials, worst_residual: worst, counterexample })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Sampling grid for exporting an activation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExportGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl ExportGrid {
    /// Sample points in increasing order. A linear grid that crosses zero always contains `0`.
    /// Log grids need `min` and `max` of the same sign and non-zero.
    pub fn points(&self) -> Result<Vec<f64>> {
        let bad = |msg: &str| Err(Error::InvalidProfile(format!("grid: {msg}")));
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return bad("need finite min <= max");
        }
        if self.count == 0 {
            return bad("count must be positive");
        }
        let mut pts = match self.spacing {
            Spacing::Linear => {
                if self.count == 1 {
                    vec![self.min]
                } else {
                    let step = (self.max - self.min) / (self.count - 1) as f64;
                    (0..self.count)
                        .map(|k| if k + 1 == self.count { self.max } else { self.min + step * k as f64 })
                        .collect()
                }
            }
            Spacing::Log => {
                if self.min > 0.0 {
                    log_space(self.min, self.max, self.count)
                } else if self.max < 0.0 {
                    let mut v: Vec<f64> = log_space(-self.max, -self.min, self.count).iter().map(|m| -m).collect();
                    v.reverse();
                    v
                } else {
                    return bad("log spacing needs min and max of the same sign, both non-zero");
                }
            }
        };
        // snap float noise around zero, then make sure zero is present
        for p in pts.iter_mut() {
            if p.abs() <= 1e-12 * (self.max - self.min).abs() {
                *p = 0.0;
            }
        }
        if self.min < 0.0 && self.max > 0.0 && !pts.contains(&0.0) {
            let at = pts.partition_point(|&p| p < 0.0);
            pts.insert(at, 0.0);
        }
        Ok(pts)
    }
}

/// `(x, f(x))` rows over the grid.
pub fn sample_activation(f: &ActivationFn, grid: &ExportGrid) -> Result<Vec<(f64, f64)>> {
    Ok(grid.points()?.into_iter().map(|x| (x, f.eval(x))).collect())
}
