//! Observation series, variable-type inference and test selection.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::indep::TestKind;

/// Largest number of categories an integer-valued series may have and still
/// be treated as categorical.
pub const MAX_CATEGORIES: usize = 20;

/// A named sequence of finite real observations (length ≥ 2).
///
/// Discrete variables are carried as reals too; categories are integer codes.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSeries {
    name: String,
    values: Vec<f64>,
}

impl ObservationSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        validate_values(&values)?;
        Ok(Self {
            name: name.into(),
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

fn validate_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    if values.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: values.len(),
        });
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarType {
    Categorical,
    Binary,
    Numerical,
}

impl VarType {
    pub fn is_discrete(self) -> bool {
        !matches!(self, VarType::Numerical)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairType {
    Categorical,
    Binary,
    Numerical,
    Mixed,
}

impl PairType {
    pub const ALL: [PairType; 4] = [
        PairType::Categorical,
        PairType::Binary,
        PairType::Numerical,
        PairType::Mixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PairType::Categorical => "Categorical",
            PairType::Binary => "Binary",
            PairType::Numerical => "Numerical",
            PairType::Mixed => "Mixed",
        }
    }
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PairType::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or(Error::InvalidParameter("unknown pair type"))
    }
}

/// Infers the type of a single series.
///
/// Two distinct values make it binary. Integer-valued series with at most
/// `min(20, ceil(n / 10))` distinct values are categorical. Everything else is
/// numerical.
pub fn infer_var_type(values: &[f64]) -> Result<VarType> {
    if values.is_empty() {
        return Err(Error::EmptySeries);
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let distinct = sorted.len();
    if distinct == 2 {
        return Ok(VarType::Binary);
    }
    let limit = MAX_CATEGORIES.min(values.len().div_ceil(10));
    let integral = sorted.iter().all(|v| libm::trunc(*v) == *v);
    if integral && distinct <= limit {
        Ok(VarType::Categorical)
    } else {
        Ok(VarType::Numerical)
    }
}

pub fn infer_pair_type(a: VarType, b: VarType) -> PairType {
    match (a, b) {
        (VarType::Numerical, VarType::Numerical) => PairType::Numerical,
        (VarType::Numerical, _) | (_, VarType::Numerical) => PairType::Mixed,
        (VarType::Binary, VarType::Binary) => PairType::Binary,
        _ => PairType::Categorical,
    }
}

/// Two aligned series together with their joint type.
#[derive(Debug, Clone, PartialEq)]
pub struct VariablePair {
    pub a: ObservationSeries,
    pub b: ObservationSeries,
    pub pair_type: PairType,
}

impl VariablePair {
    pub fn new(a: ObservationSeries, b: ObservationSeries) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let pair_type = infer_pair_type(infer_var_type(a.values())?, infer_var_type(b.values())?);
        Ok(Self { a, b, pair_type })
    }

    pub fn from_values(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(
            ObservationSeries::new("A", a)?,
            ObservationSeries::new("B", b)?,
        )
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// Maps each pair type to the independence test used for it.
///
/// The default picks, per stratum, whichever test scored the higher
/// benchmark accuracy: TIC for categorical and binary pairs, χ² for
/// numerical and mixed pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TestPolicy {
    tests: [TestKind; 4],
}

impl Default for TestPolicy {
    fn default() -> Self {
        Self {
            tests: [TestKind::Tic, TestKind::Tic, TestKind::Chi2, TestKind::Chi2],
        }
    }
}

impl TestPolicy {
    /// Uses `kind` for every pair type.
    pub fn uniform(kind: TestKind) -> Self {
        Self { tests: [kind; 4] }
    }

    pub fn with(mut self, pair_type: PairType, kind: TestKind) -> Self {
        self.set(pair_type, kind);
        self
    }

    pub fn set(&mut self, pair_type: PairType, kind: TestKind) {
        self.tests[pair_type as usize] = kind;
    }

    pub fn select(&self, pair_type: PairType) -> TestKind {
        self.tests[pair_type as usize]
    }

    pub fn entries(&self) -> impl Iterator<Item = (PairType, TestKind)> + '_ {
        PairType::ALL.into_iter().map(|t| (t, self.select(t)))
    }
}

/// Test selected by the default policy.
pub fn select_test(pair_type: PairType) -> TestKind {
    TestPolicy::default().select(pair_type)
}
