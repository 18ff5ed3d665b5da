//! The multiplicative group generated by row subset sums, its classification among the
//! subgroups of the non-zero reals, and the dual correspondence with activation families.
//!
//! A point-wise map `f` applied coordinatewise commutes with a matrix group only if
//! `f - f(0)` is `T`-multiplicative for the group `T` generated by every sum of a subset
//! of entries taken from one row of one matrix. The subgroups of `R*` are:
//!
//! | `T`                 | maximal family (monomial groups)        |
//! |---------------------|-----------------------------------------|
//! | `{1}`               | continuous                              |
//! | `{+-1}`             | odd continuous                          |
//! | `<b^n>`             | `b`-multiplicative                      |
//! | `<+-b^n>`           | `+-b`-multiplicative                    |
//! | dense in `R>0`      | semilinear                              |
//! | dense in `R*`       | affine (unit-row groups) or linear      |
//!
//! Non-monomial groups only admit affine maps (if every row sums to one) or linear maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::group::{close_group, GroupSpec};
use crate::matrix::{check_tol, is_unit_row, monomial_decompose, Matrix};
use crate::{DEFAULT_CLOSURE_CAP, DEFAULT_TOL};

/// Largest dimension for exhaustive subset enumeration over non-monomial rows.
pub const MAX_SUBSET_DIM: usize = 20;

/// Default step budget for the real GCD.
pub const DEFAULT_GCD_ITER: usize = 64;

/// Budget on `elements * n * 2^n` before subset sums fall back from the closure to the generators.
const CLOSURE_SUBSET_BUDGET: u128 = 1 << 26;

/// Generators of the multiplicative group `T`, distinct within tolerance, in first-seen order.
#[derive(Debug, Clone, PartialEq)]
pub struct TGenerators {
    values: Vec<f64>,
}

impl TGenerators {
    /// Drops entries within `tol` of zero and merges values within `tol` of each other.
    pub fn new(values: impl IntoIterator<Item = f64>, tol: f64) -> Self {
        let raw: Vec<f64> = values.into_iter().filter(|v| v.abs() > tol).collect();
        TGenerators { values: dedup_first_seen(&raw, tol) }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn dedup_first_seen(raw: &[f64], tol: f64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]).then(a.cmp(&b)));
    // chains of neighbours within tol collapse onto their earliest member
    let mut keep = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut first = order[i];
        let mut j = i + 1;
        while j < order.len() && raw[order[j]] - raw[order[j - 1]] <= tol {
            first = first.min(order[j]);
            j += 1;
        }
        keep.push(first);
        i = j;
    }
    keep.sort_unstable();
    keep.into_iter().map(|k| raw[k]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SubgroupClass {
    Trivial,
    PlusMinusOne,
    PowersOfB { b: f64 },
    SignedPowersOfB { b: f64 },
    DensePositive,
    Dense,
}

impl SubgroupClass {
    pub fn name(&self) -> &'static str {
        match self {
            SubgroupClass::Trivial => "Trivial",
            SubgroupClass::PlusMinusOne => "PlusMinusOne",
            SubgroupClass::PowersOfB { .. } => "PowersOfB",
            SubgroupClass::SignedPowersOfB { .. } => "SignedPowersOfB",
            SubgroupClass::DensePositive => "DensePositive",
            SubgroupClass::Dense => "Dense",
        }
    }

    pub fn base(&self) -> Option<f64> {
        match *self {
            SubgroupClass::PowersOfB { b } | SubgroupClass::SignedPowersOfB { b } => Some(b),
            _ => None,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, SubgroupClass::DensePositive | SubgroupClass::Dense)
    }

    pub fn has_negatives(&self) -> bool {
        matches!(
            self,
            SubgroupClass::PlusMinusOne | SubgroupClass::SignedPowersOfB { .. } | SubgroupClass::Dense
        )
    }
}

impl fmt::Display for SubgroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base() {
            Some(b) => write!(f, "{}(b={b})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// A maximal admissible family of point-wise activations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ActivationFamily {
    Continuous,
    OddContinuous,
    Semilinear,
    BMultiplicative { b: f64 },
    PMBMultiplicative { b: f64 },
    AffineOnly,
    LinearOnly,
}

impl ActivationFamily {
    pub const KINDS: [&'static str; 7] = [
        "Continuous",
        "OddContinuous",
        "Semilinear",
        "BMultiplicative",
        "PMBMultiplicative",
        "AffineOnly",
        "LinearOnly",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ActivationFamily::Continuous => "Continuous",
            ActivationFamily::OddContinuous => "OddContinuous",
            ActivationFamily::Semilinear => "Semilinear",
            ActivationFamily::BMultiplicative { .. } => "BMultiplicative",
            ActivationFamily::PMBMultiplicative { .. } => "PMBMultiplicative",
            ActivationFamily::AffineOnly => "AffineOnly",
            ActivationFamily::LinearOnly => "LinearOnly",
        }
    }

    pub fn base(&self) -> Option<f64> {
        match *self {
            ActivationFamily::BMultiplicative { b } | ActivationFamily::PMBMultiplicative { b } => Some(b),
            _ => None,
        }
    }

    /// Parses a kind name; multiplicative kinds need `b`.
    pub fn from_name(name: &str, b: Option<f64>) -> Option<Self> {
        let fam = match name {
            "Continuous" => ActivationFamily::Continuous,
            "OddContinuous" => ActivationFamily::OddContinuous,
            "Semilinear" => ActivationFamily::Semilinear,
            "BMultiplicative" => ActivationFamily::BMultiplicative { b: b.filter(|b| *b > 1.0)? },
            "PMBMultiplicative" => ActivationFamily::PMBMultiplicative { b: b.filter(|b| *b > 1.0)? },
            "AffineOnly" => ActivationFamily::AffineOnly,
            "LinearOnly" => ActivationFamily::LinearOnly,
            _ => return None,
        };
        Some(fam)
    }

    /// Set inclusion of function families: `self` is contained in `other`.
    ///
    /// Multiplicative families shrink as their base group grows, so `b`-multiplicative
    /// functions are `b^k`-multiplicative for every integer `k >= 1`.
    pub fn is_subfamily_of(&self, other: &ActivationFamily, tol: f64) -> bool {
        use ActivationFamily::*;
        let power_of = |big: f64, small: f64| {
            let k = big.ln() / small.ln();
            k >= 1.0 - tol && (k - k.round()).abs() <= tol
        };
        match (*self, *other) {
            (_, Continuous) => true,
            (LinearOnly, _) => true,
            (AffineOnly, AffineOnly) => true,
            (OddContinuous, OddContinuous) => true,
            (Semilinear, Semilinear) | (Semilinear, BMultiplicative { .. }) => true,
            (BMultiplicative { b }, BMultiplicative { b: c }) => power_of(c, b),
            (PMBMultiplicative { b }, PMBMultiplicative { b: c }) => power_of(c, b),
            (PMBMultiplicative { b }, BMultiplicative { b: c }) => power_of(c, b),
            (PMBMultiplicative { .. }, OddContinuous) => true,
            _ => false,
        }
    }
}

impl fmt::Display for ActivationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base() {
            Some(b) => write!(f, "{}(b={b})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Structural summary of a matrix group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupClassification {
    pub monomial: bool,
    pub non_negative: bool,
    pub unit_row: bool,
    pub tclass: SubgroupClass,
}

/// Where the subset sums feeding `T` were taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TSource {
    /// Monomial generators: `T` is generated by their non-zero entries.
    MonomialGenerators,
    /// Non-monomial group with a complete closure of the given order.
    Closure { order: usize },
    /// Non-monomial group whose closure was incomplete or too large; generators only.
    GeneratorsOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupAnalysis {
    pub classification: GroupClassification,
    pub t_generators: TGenerators,
    pub t_source: TSource,
}

/// All non-zero row subset sums `sum_{j in S} M_ij` over the given matrices.
///
/// When every matrix is monomial a row's subset sums are `0` or its single entry, so the
/// non-zero entries are returned directly (column order, matrix by matrix).
pub fn subset_sum_generators(mats: &[Matrix], tol: f64) -> Result<TGenerators> {
    check_tol(tol)?;
    let forms: Option<Vec<_>> = mats.iter().map(|m| monomial_decompose(m, tol)).collect();
    if let Some(forms) = forms {
        return Ok(TGenerators::new(forms.into_iter().flat_map(|f| f.coeffs), tol));
    }
    let n = mats.iter().map(Matrix::dim).max().unwrap_or(0);
    if n > MAX_SUBSET_DIM {
        return Err(Error::DimensionTooLarge { n, max: MAX_SUBSET_DIM });
    }
    let mut raw = Vec::new();
    for m in mats {
        for row in m.rows() {
            push_row_subset_sums(row, tol, &mut raw);
        }
    }
    Ok(TGenerators::new(raw, tol))
}

/// Gray-code walk over the `2^n` subsets of a row, one addition per step.
fn push_row_subset_sums(row: &[f64], tol: f64, out: &mut Vec<f64>) {
    let n = row.len();
    let mut sum = 0.0;
    let mut member = vec![false; n];
    let mut row_sums = Vec::with_capacity(1 << n);
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        member[bit] = !member[bit];
        if member[bit] {
            sum += row[bit];
        } else {
            sum -= row[bit];
        }
        if sum.abs() > tol {
            row_sums.push(sum);
        }
    }
    // per-row dedup keeps the combined list small for wide rows
    out.extend(dedup_first_seen(&row_sums, tol));
}

/// Classifies `<gens>` among the subgroups of `R*`.
///
/// Discrete versus dense is decided by a real GCD of `|log |v||` computed by repeated
/// subtraction, with remainders at or below `tol` treated as zero. Running out of the
/// `max_iter` step budget, or a GCD that collapses to `tol`, classifies as dense. This is a
/// heuristic: density cannot be certified from finite floating-point data.
pub fn classify_subgroup(gens: &TGenerators, tol: f64, max_iter: usize) -> SubgroupClass {
    let negative = gens.values().iter().any(|v| *v < 0.0);
    let logs: Vec<f64> = gens
        .values()
        .iter()
        .map(|v| v.abs().ln().abs())
        .filter(|l| *l > tol)
        .collect();

    let Some((&first, rest)) = logs.split_first() else {
        return if negative { SubgroupClass::PlusMinusOne } else { SubgroupClass::Trivial };
    };
    let dense = if negative { SubgroupClass::Dense } else { SubgroupClass::DensePositive };

    let mut budget = max_iter;
    let mut g = first;
    for &l in rest {
        match subtractive_gcd(g, l, tol, &mut budget) {
            Some(next) => g = next,
            None => return dense,
        }
    }
    if g <= tol {
        return dense;
    }
    let commensurable = logs.iter().all(|&l| {
        let k = (l / g).round();
        (l - k * g).abs() <= tol * l.max(1.0)
    });
    if !commensurable {
        return dense;
    }

    // prefer an exact input magnitude over exp(g) when one realizes the generator
    let b = gens
        .values()
        .iter()
        .map(|v| v.abs().max(1.0 / v.abs()))
        .find(|m| (m.ln() - g).abs() <= tol * g.max(1.0))
        .unwrap_or_else(|| g.exp());
    if negative {
        SubgroupClass::SignedPowersOfB { b }
    } else {
        SubgroupClass::PowersOfB { b }
    }
}

fn subtractive_gcd(a: f64, b: f64, tol: f64, budget: &mut usize) -> Option<f64> {
    let (mut hi, mut lo) = if a >= b { (a, b) } else { (b, a) };
    loop {
        if lo <= tol {
            return Some(hi);
        }
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let r = hi - lo;
        (hi, lo) = if r >= lo { (r, lo) } else { (lo, r) };
    }
}

/// [`analyze_group`] with default parameters, returning only the classification.
pub fn classify_group(spec: &GroupSpec, tol: f64) -> Result<GroupClassification> {
    analyze_group(spec, tol, DEFAULT_GCD_ITER, DEFAULT_CLOSURE_CAP).map(|a| a.classification)
}

/// Classifies a group and reports the `T` generators used.
///
/// For monomial groups `T` is computed from the generators, which multiplicatively generate
/// every entry of every group element. Non-monomial groups use the full closure when it is
/// complete and small enough for subset enumeration, else the generators alone.
pub fn analyze_group(spec: &GroupSpec, tol: f64, max_iter: usize, cap: usize) -> Result<GroupAnalysis> {
    check_tol(tol)?;
    let gens = spec.generators();
    let forms: Option<Vec<_>> = gens.iter().map(|g| monomial_decompose(g, tol)).collect();
    let monomial = forms.is_some();
    // a generator with a negative coefficient is itself a group element with a negative entry
    let non_negative = forms
        .as_ref()
        .is_some_and(|fs| fs.iter().all(|f| f.coeffs.iter().all(|a| *a > 0.0)));
    let unit_row = gens.iter().all(|g| is_unit_row(g, tol));

    let (t_generators, t_source) = if monomial {
        (subset_sum_generators(gens, tol)?, TSource::MonomialGenerators)
    } else {
        let n = spec.dim();
        if n > MAX_SUBSET_DIM {
            return Err(Error::DimensionTooLarge { n, max: MAX_SUBSET_DIM });
        }
        let closure = close_group(spec, cap, tol);
        let work = closure.elements.len() as u128 * n as u128 * (1u128 << n);
        if closure.complete && work <= CLOSURE_SUBSET_BUDGET {
            let order = closure.elements.len();
            (subset_sum_generators(&closure.elements, tol)?, TSource::Closure { order })
        } else {
            (subset_sum_generators(gens, tol)?, TSource::GeneratorsOnly)
        }
    };
    let tclass = classify_subgroup(&t_generators, tol, max_iter);
    Ok(GroupAnalysis {
        classification: GroupClassification { monomial, non_negative, unit_row, tclass },
        t_generators,
        t_source,
    })
}

/// The maximal activation family admitted by a classified group.
pub fn maximal_family(c: &GroupClassification) -> ActivationFamily {
    if c.monomial {
        match c.tclass {
            SubgroupClass::Trivial => return ActivationFamily::Continuous,
            SubgroupClass::PlusMinusOne => return ActivationFamily::OddContinuous,
            SubgroupClass::DensePositive if c.non_negative => return ActivationFamily::Semilinear,
            SubgroupClass::PowersOfB { b } => return ActivationFamily::BMultiplicative { b },
            SubgroupClass::SignedPowersOfB { b } => return ActivationFamily::PMBMultiplicative { b },
            // dense T forces linearity on the centered activation
            SubgroupClass::DensePositive | SubgroupClass::Dense => {}
        }
    }
    if c.unit_row {
        ActivationFamily::AffineOnly
    } else {
        ActivationFamily::LinearOnly
    }
}

/// The structural label of the maximal group admitted by `family`.
pub fn maximal_group_label(family: &ActivationFamily) -> GroupClassification {
    let (monomial, non_negative, unit_row, tclass) = match *family {
        ActivationFamily::Continuous => (true, true, true, SubgroupClass::Trivial),
        ActivationFamily::OddContinuous => (true, false, false, SubgroupClass::PlusMinusOne),
        ActivationFamily::Semilinear => (true, true, false, SubgroupClass::DensePositive),
        ActivationFamily::BMultiplicative { b } => (true, true, false, SubgroupClass::PowersOfB { b }),
        ActivationFamily::PMBMultiplicative { b } => {
            (true, false, false, SubgroupClass::SignedPowersOfB { b })
        }
        ActivationFamily::AffineOnly => (false, false, true, SubgroupClass::Dense),
        ActivationFamily::LinearOnly => (false, false, false, SubgroupClass::Dense),
    };
    GroupClassification { monomial, non_negative, unit_row, tclass }
}

/// Human-readable name of the maximal group for `family` in dimension `n`.
pub fn maximal_group_name(family: &ActivationFamily, n: usize) -> String {
    match *family {
        ActivationFamily::Continuous => format!("permutation matrices P_{n}"),
        ActivationFamily::OddContinuous => format!("signed permutation matrices of size {n}"),
        ActivationFamily::Semilinear => format!("non-negative monomial matrices of size {n}"),
        ActivationFamily::BMultiplicative { b } => format!("{b}-monomial matrices of size {n}"),
        ActivationFamily::PMBMultiplicative { b } => format!("+-{b}-monomial matrices of size {n}"),
        ActivationFamily::AffineOnly => format!("unit-row invertible matrices R_{n}"),
        ActivationFamily::LinearOnly => format!("GL_{n}(R)"),
    }
}

/// A finitely generated subgroup of the maximal group for `family`, large enough that its
/// own maximal family is `family` again. Needs `n >= 2`.
pub fn maximal_group_witness(family: &ActivationFamily, n: usize) -> Result<GroupSpec> {
    if n < 2 {
        return Err(Error::ShapeMismatch(format!("witness groups need n >= 2, got {n}")));
    }
    let mut gens = GroupSpec::symmetric(n).generators().to_vec();
    let scaled = |d0: f64| {
        let mut d = vec![1.0; n];
        d[0] = d0;
        Matrix::from_diagonal(&d)
    };
    match *family {
        ActivationFamily::Continuous => {}
        ActivationFamily::OddContinuous => gens.push(scaled(-1.0)),
        ActivationFamily::Semilinear => {
            gens.push(scaled(2.0));
            gens.push(scaled(3.0));
        }
        ActivationFamily::BMultiplicative { b } => gens.push(scaled(b)),
        ActivationFamily::PMBMultiplicative { b } => gens.push(scaled(-b)),
        ActivationFamily::AffineOnly => {
            let mut a = Matrix::identity(n);
            a.set(0, 0, 0.5);
            a.set(0, 1, 0.5);
            a.set(1, 0, 0.25);
            a.set(1, 1, 0.75);
            gens.push(a);
        }
        ActivationFamily::LinearOnly => {
            let mut shear = Matrix::identity(n);
            shear.set(0, 1, 1.0);
            gens.push(shear);
        }
    }
    GroupSpec::new(format!("maximal-{}", family.name()), n, gens, DEFAULT_TOL)
}
