//! The solved families: Minc compositions, two-rowed plane partitions,
//! anti-lecture-hall compositions, and (truncated) lecture hall partitions.
//! Each is available as a constraint system and through several series
//! routes that must agree.

pub mod alhc;
pub mod minc;
pub mod tlhp;
pub mod tworow;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::oracle;
use crate::series::{specialize, SeriesError, SpecializationMap, TruncatedSeries};
use crate::solver::{SolveError, Solver};
use crate::system::{Constraint, ConstraintSystem, Relation, VarTable};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}` (expected minc, tworow, alhc, tlhp or lhp)")]
    UnknownFamily(String),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: Family, reason: String },
    #[error("mode {mode} is not available for {family}")]
    UnsupportedMode { family: Family, mode: Mode },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    RatFn(#[from] tworow::RatFnError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Minc,
    Tworow,
    Alhc,
    Tlhp,
    Lhp,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Minc,
        Family::Tworow,
        Family::Alhc,
        Family::Tlhp,
        Family::Lhp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Minc => "minc",
            Family::Tworow => "tworow",
            Family::Alhc => "alhc",
            Family::Tlhp => "tlhp",
            Family::Lhp => "lhp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

/// How a family series is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// The family's base recurrence (bivariate where it has one).
    Recurrence,
    /// The iterated form of the recurrence (alhc, tlhp).
    Iterated,
    /// The `s`-free recurrence for `A_n(q,q)` (alhc).
    Univariate,
    /// The closed product formula.
    Closed,
    /// Direct enumeration of compositions (minc).
    Brute,
    /// Oracle enumeration of the family's constraint system.
    Oracle,
    /// The automatic solver on the family's constraint system.
    Solver,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Recurrence => "recurrence",
            Mode::Iterated => "iterated",
            Mode::Univariate => "univariate",
            Mode::Closed => "closed",
            Mode::Brute => "brute",
            Mode::Oracle => "oracle",
            Mode::Solver => "solver",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = FamilyError;
    /// Accepts the names above, plus `jsum` for `iterated`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "recurrence" => Mode::Recurrence,
            "iterated" | "jsum" => Mode::Iterated,
            "univariate" => Mode::Univariate,
            "closed" => Mode::Closed,
            "brute" => Mode::Brute,
            "oracle" => Mode::Oracle,
            "solver" => Mode::Solver,
            _ => return Err(FamilyError::UnknownMode(s.to_string())),
        })
    }
}

/// A family with its parameters. `n` is optional only for `minc`, where
/// omitting it means "all lengths".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

impl FamilySpec {
    pub fn new(family: Family, n: Option<usize>, k: Option<usize>) -> Self {
        FamilySpec { family, n, k }
    }

    pub fn minc_all() -> Self {
        Self::new(Family::Minc, None, None)
    }

    pub fn minc(n: usize) -> Self {
        Self::new(Family::Minc, Some(n), None)
    }

    pub fn tworow(n: usize) -> Self {
        Self::new(Family::Tworow, Some(n), None)
    }

    pub fn alhc(n: usize) -> Self {
        Self::new(Family::Alhc, Some(n), None)
    }

    pub fn lhp(n: usize) -> Self {
        Self::new(Family::Lhp, Some(n), None)
    }

    pub fn tlhp(n: usize, k: usize) -> Self {
        Self::new(Family::Tlhp, Some(n), Some(k))
    }

    fn invalid(&self, reason: impl Into<String>) -> FamilyError {
        FamilyError::InvalidParams {
            family: self.family,
            reason: reason.into(),
        }
    }

    /// `n`, required to be at least `min`.
    fn need_n(&self, min: usize) -> Result<usize, FamilyError> {
        match self.n {
            Some(n) if n >= min => Ok(n),
            Some(n) => Err(self.invalid(format!("n must be at least {min}, got {n}"))),
            None => Err(self.invalid("--n is required")),
        }
    }

    /// `(n, k)` with `1 ≤ k ≤ n`.
    fn need_nk(&self) -> Result<(usize, usize), FamilyError> {
        let n = self.need_n(1)?;
        match self.k {
            Some(k) if (1..=n).contains(&k) => Ok((n, k)),
            Some(k) => Err(self.invalid(format!("k must satisfy 1 <= k <= n = {n}, got {k}"))),
            None => Err(self.invalid("--k is required")),
        }
    }

    fn reject_k(&self) -> Result<(), FamilyError> {
        match (self.family, self.k) {
            (Family::Tlhp, _) | (_, None) => Ok(()),
            _ => Err(self.invalid("--k only applies to tlhp")),
        }
    }
}

fn geq_row(n: usize, terms: &[(usize, i64)], constant: i64) -> Constraint {
    let mut coeffs = vec![BigInt::from(0); n];
    for &(v, c) in terms {
        coeffs[v] += c;
    }
    Constraint::new(coeffs, BigInt::from(constant), Relation::Geq)
}

/// The family's defining constraint system.
pub fn family_system(spec: &FamilySpec) -> Result<ConstraintSystem, FamilyError> {
    spec.reject_k()?;
    let (vars, rows) = match spec.family {
        Family::Minc => {
            // λ_i ≥ λ_{i+1}/2, every part positive
            let n = spec.need_n(1)?;
            let mut rows: Vec<Constraint> = (0..n - 1)
                .map(|i| geq_row(n, &[(i, 2), (i + 1, -1)], 0))
                .collect();
            rows.extend((0..n).map(|i| geq_row(n, &[(i, 1)], -1)));
            (VarTable::numbered("l", n), rows)
        }
        Family::Tworow => {
            let n = spec.need_n(1)?;
            let mut names = Vec::with_capacity(2 * n);
            for i in 1..=n {
                names.push(format!("a{i}"));
                names.push(format!("b{i}"));
            }
            let (a, b) = (|i: usize| 2 * i, |i: usize| 2 * i + 1);
            let mut rows: Vec<Constraint> = (0..n)
                .map(|i| geq_row(2 * n, &[(a(i), 1), (b(i), -1)], 0))
                .collect();
            for i in 0..n - 1 {
                rows.push(geq_row(2 * n, &[(a(i), 1), (a(i + 1), -1)], 0));
                rows.push(geq_row(2 * n, &[(b(i), 1), (b(i + 1), -1)], 0));
            }
            (VarTable::new(names).expect("distinct names"), rows)
        }
        Family::Alhc => {
            // λ_i/i ≥ λ_{i+1}/(i+1)
            let n = spec.need_n(1)?;
            let rows = (1..n)
                .map(|i| geq_row(n, &[(i - 1, i as i64 + 1), (i, -(i as i64))], 0))
                .collect();
            (VarTable::numbered("l", n), rows)
        }
        Family::Lhp => {
            // λ_i/(n−i+1) ≥ λ_{i+1}/(n−i)
            let n = spec.need_n(1)?;
            let rows = (1..n)
                .map(|i| {
                    let (hi, lo) = ((n - i + 1) as i64, (n - i) as i64);
                    geq_row(n, &[(i - 1, lo), (i, -hi)], 0)
                })
                .collect();
            (VarTable::numbered("l", n), rows)
        }
        Family::Tlhp => {
            let (n, k) = spec.need_nk()?;
            let mut rows: Vec<Constraint> = (1..k)
                .map(|i| {
                    let (hi, lo) = ((n - i + 1) as i64, (n - i) as i64);
                    geq_row(k, &[(i - 1, lo), (i, -hi)], 0)
                })
                .collect();
            rows.push(geq_row(k, &[(k - 1, 1)], -1));
            (VarTable::numbered("l", k), rows)
        }
    };
    Ok(ConstraintSystem::new(Arc::new(vars), rows).expect("arities match by construction"))
}

/// The family's counting series to `q^weight` by the chosen route.
pub fn family_series(
    spec: &FamilySpec,
    weight: usize,
    mode: Mode,
) -> Result<TruncatedSeries, FamilyError> {
    spec.reject_k()?;
    let unsupported = || FamilyError::UnsupportedMode {
        family: spec.family,
        mode,
    };
    match mode {
        Mode::Oracle => return Ok(oracle::count_series(&family_system(spec)?, weight)),
        Mode::Solver => {
            let s = family_system(spec)?;
            let f = Solver::from_env().solve(&s)?;
            return Ok(specialize(
                &f,
                &SpecializationMap::all_q(s.num_vars()),
                weight,
            )?);
        }
        _ => {}
    }
    Ok(match spec.family {
        Family::Minc => match (mode, spec.n) {
            (Mode::Recurrence, None) => minc::nu_series(weight),
            (Mode::Recurrence, Some(n)) => minc::fixed_length_series(n, weight),
            (Mode::Closed, None) => minc::closed_series(weight),
            (Mode::Brute, None) => minc::brute_series(weight),
            _ => return Err(unsupported()),
        },
        Family::Tworow => {
            let n = spec.need_n(1)?;
            match mode {
                Mode::Recurrence => tworow::recurrence_series(n, weight)?,
                Mode::Closed => tworow::closed_series(n, weight)?,
                _ => return Err(unsupported()),
            }
        }
        Family::Alhc => {
            let n = spec.need_n(0)?;
            match mode {
                Mode::Recurrence => alhc::recurrence_series(n, weight),
                Mode::Iterated => alhc::iterated_series(n, weight),
                Mode::Univariate => alhc::univariate_series(n, weight)?,
                Mode::Closed => alhc::closed_series(n, weight)?,
                _ => return Err(unsupported()),
            }
        }
        Family::Tlhp => {
            let (n, k) = spec.need_nk()?;
            match mode {
                Mode::Recurrence => tlhp::recurrence_series(n, k, weight),
                Mode::Iterated => tlhp::jsum_series(n, k, weight)?,
                Mode::Closed => tlhp::closed_series(n, k, weight)?,
                _ => return Err(unsupported()),
            }
        }
        Family::Lhp => {
            let n = spec.need_n(1)?;
            match mode {
                // subtracting n − i + 1 from λ_i maps L̄_{n,n} onto L_n
                Mode::Recurrence => {
                    let shift = n * (n + 1) / 2;
                    tlhp::recurrence_series(n, n, weight + shift)
                        .unshift_q(shift)
                        .expect("L̄_{n,n} has valuation C(n+1,2)")
                }
                Mode::Closed => tlhp::lhp_closed(n, weight),
                _ => return Err(unsupported()),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systems_display() {
        let a2 = family_system(&FamilySpec::alhc(2)).unwrap();
        assert_eq!(a2.nonbasic(), &[Constraint::geq([2, -1], 0)]);
        let l1 = family_system(&FamilySpec::lhp(1)).unwrap();
        assert!(l1.nonbasic().is_empty());
        let l3 = family_system(&FamilySpec::lhp(3)).unwrap();
        assert_eq!(
            l3.nonbasic(),
            &[
                Constraint::geq([2, -3, 0], 0),
                Constraint::geq([0, 1, -2], 0)
            ]
        );
        let t = family_system(&FamilySpec::tlhp(3, 2)).unwrap();
        assert_eq!(
            t.nonbasic(),
            &[Constraint::geq([2, -3], 0), Constraint::geq([0, 1], -1)]
        );
    }

    #[test]
    fn minc_system_parts_positive() {
        let s = family_system(&FamilySpec::minc(3)).unwrap();
        assert_eq!(s.nonbasic().len(), 5);
        assert!(s.contains(&[1, 2, 4]));
        assert!(!s.contains(&[1, 3, 1]));
        assert!(!s.contains(&[1, 1, 0]));
    }

    #[test]
    fn params_checked() {
        assert!(family_system(&FamilySpec::tlhp(2, 3)).is_err());
        assert!(family_system(&FamilySpec::new(Family::Alhc, Some(2), Some(1))).is_err());
        assert!(family_series(&FamilySpec::minc_all(), 5, Mode::Iterated).is_err());
    }

    #[test]
    fn mode_aliases() {
        assert_eq!("jsum".parse::<Mode>().unwrap(), Mode::Iterated);
        for m in [
            "recurrence",
            "iterated",
            "univariate",
            "closed",
            "brute",
            "oracle",
            "solver",
        ] {
            assert_eq!(m.parse::<Mode>().unwrap().name(), m);
        }
        assert!("nope".parse::<Mode>().is_err());
    }

    #[test]
    fn lhp_routes() {
        for n in 1..=4 {
            let spec = FamilySpec::lhp(n);
            let closed = family_series(&spec, 12, Mode::Closed).unwrap();
            assert_eq!(family_series(&spec, 12, Mode::Recurrence).unwrap(), closed);
            assert_eq!(family_series(&spec, 12, Mode::Oracle).unwrap(), closed);
        }
    }
}
