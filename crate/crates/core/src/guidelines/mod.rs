//! The five guidelines as rewrite steps on constraint systems, with the
//! implication checker that certifies guideline 3.

pub mod fm;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

pub use fm::{implied, rationally_feasible, ImplicationResult, ImplicationStatus};

use crate::gfalg::{GfError, Monomial, RationalGF};
use crate::system::{Constraint, ConstraintSystem, Relation, SystemError, VarId, VarTable};

#[derive(Debug, Error)]
pub enum GuidelineError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("guideline 1 needs t >= 0, got {0}")]
    NegativeThreshold(i64),
    #[error("substitution needs [{0}], which could not be certified; pass `assume` to override")]
    MissingCertificate(String),
    #[error("nonbasic constraint index {index} out of range (system has {len})")]
    NoSuchConstraint { index: usize, len: usize },
    #[error("guideline 5 needs an inequality, got an equality")]
    RemoveEquality,
}

/// Evidence for a guideline-3 side condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Fourier–Motzkin refuted `S ∪ {¬c}`.
    Implied,
    /// The caller asserted the implication.
    UserOverride,
}

/// One applied guideline, kept for traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationStep {
    G1 {
        var: VarId,
        t: i64,
    },
    G2 {
        components: Vec<Vec<VarId>>,
    },
    G3 {
        i: VarId,
        a: i64,
        j: VarId,
        certificate: Certificate,
    },
    G4 {
        c: Constraint,
    },
    G5 {
        c: Constraint,
    },
}

impl DerivationStep {
    pub fn display<'a>(&'a self, vars: &'a VarTable) -> StepDisplay<'a> {
        StepDisplay { step: self, vars }
    }
}

pub struct StepDisplay<'a> {
    step: &'a DerivationStep,
    vars: &'a VarTable,
}

impl fmt::Display for StepDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.vars;
        match self.step {
            DerivationStep::G1 { var, t } => write!(f, "g1 {} >= {}", v.name(*var), t),
            DerivationStep::G2 { components } => {
                let parts: Vec<String> = components
                    .iter()
                    .map(|c| {
                        let names: Vec<&str> = c.iter().map(|&x| v.name(x)).collect();
                        format!("{{{}}}", names.join(" "))
                    })
                    .collect();
                write!(f, "g2 {}", parts.join(" "))
            }
            DerivationStep::G3 {
                i,
                a,
                j,
                certificate,
            } => {
                let how = match certificate {
                    Certificate::Implied => "implied",
                    Certificate::UserOverride => "assumed",
                };
                write!(
                    f,
                    "g3 {0} <- {0} + {1}*{2} ({3}); then x_{2} <- x_{2}*x_{0}^{1}",
                    v.name(*i),
                    a,
                    v.name(*j),
                    how
                )
            }
            DerivationStep::G4 { c } => write!(f, "g4 {}", c.display(v)),
            DerivationStep::G5 { c } => write!(f, "g5 remove {}", c.display(v)),
        }
    }
}

/// The generating-function side of a guideline-3 step: apply
/// `x_j ← x_j x_i^a` to the transformed system's GF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostSubstitution {
    pub j: VarId,
    pub i: VarId,
    pub a: i64,
}

impl PostSubstitution {
    pub fn apply(&self, f: &RationalGF) -> Result<RationalGF, GfError> {
        if self.a == 0 {
            return Ok(f.clone());
        }
        f.substitute(self.j, self.i, self.a)
    }
}

/// Guideline 1: `[λ_v ≥ t]` has generating function `x_v^t / (1 − x_v)`.
pub fn apply_g1(vars: Arc<VarTable>, v: VarId, t: i64) -> Result<RationalGF, GuidelineError> {
    if t < 0 {
        return Err(GuidelineError::NegativeThreshold(t));
    }
    let n = vars.len();
    if v >= n {
        return Err(SystemError::VarOutOfRange(v).into());
    }
    let num = Monomial::unit(n).with_exp(v, t);
    Ok(RationalGF::simple(vars, num, vec![Monomial::var(n, v)])?)
}

/// A connected component of a system: the subsystem over its own variable
/// table, and where each of its variables sits in the parent table.
#[derive(Debug, Clone)]
pub struct Component {
    pub system: ConstraintSystem,
    pub embedding: Vec<VarId>,
}

/// Guideline 2: splits `s` into connected components of the graph on
/// variables in which two variables are adjacent when some nonbasic
/// constraint mentions both. Variable-free constraints go with the first
/// component.
pub fn apply_g2(s: &ConstraintSystem) -> Vec<Component> {
    let n = s.num_vars();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for c in s.nonbasic() {
        let mut support = c
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(v, _)| v);
        if let Some(first) = support.next() {
            for v in support {
                let (a, b) = (find(&mut parent, first), find(&mut parent, v));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<VarId>> = Vec::new();
    let mut group_of = vec![usize::MAX; n];
    for v in 0..n {
        let root = find(&mut parent, v);
        if group_of[root] == usize::MAX {
            group_of[root] = groups.len();
            groups.push(Vec::new());
        }
        group_of[v] = group_of[root];
        groups[group_of[v]].push(v);
    }
    let mut constraints: Vec<Vec<Constraint>> = vec![Vec::new(); groups.len()];
    for c in s.nonbasic() {
        let g = c
            .coeffs
            .iter()
            .position(|x| !x.is_zero())
            .map_or(0, |v| group_of[v]);
        let local = &groups[g];
        constraints[g].push(Constraint::new(
            local.iter().map(|&v| c.coeffs[v].clone()).collect(),
            c.constant.clone(),
            c.relation,
        ));
    }
    groups
        .into_iter()
        .zip(constraints)
        .map(|(vars, cs)| {
            let table = Arc::new(s.vars().subset(&vars));
            let basics = vars.iter().map(|&v| s.basic(v)).collect();
            let system = ConstraintSystem::with_basics(table, cs, basics)
                .expect("component arities match by construction");
            Component {
                system,
                embedding: vars,
            }
        })
        .collect()
}

/// Product of component generating functions, lifted back to `full`.
pub fn combine_components(
    full: Arc<VarTable>,
    parts: &[(Component, RationalGF)],
) -> Result<RationalGF, GfError> {
    let mut acc = RationalGF::one(full.clone());
    for (comp, gf) in parts {
        acc = acc.mul(&gf.embed(full.clone(), &comp.embedding)?)?;
    }
    Ok(acc)
}

/// `[λ_i − aλ_j ≥ 0]`.
pub fn g3_side_condition(n: usize, i: VarId, a: i64, j: VarId) -> Constraint {
    let mut coeffs = vec![BigInt::zero(); n];
    coeffs[i] = BigInt::from(1);
    coeffs[j] = BigInt::from(-a);
    Constraint::new(coeffs, BigInt::zero(), Relation::Geq)
}

/// Guideline 3: with `[λ_i − aλ_j ≥ 0]` implied by `s`, replace `λ_i` by
/// `λ_i + aλ_j`. The caller applies the returned post-substitution to the
/// new system's GF.
pub fn apply_g3(
    s: &ConstraintSystem,
    i: VarId,
    a: i64,
    j: VarId,
    assume: bool,
) -> Result<(ConstraintSystem, PostSubstitution, DerivationStep), GuidelineError> {
    let n = s.num_vars();
    if i >= n {
        return Err(SystemError::VarOutOfRange(i).into());
    }
    if j >= n {
        return Err(SystemError::VarOutOfRange(j).into());
    }
    if i == j {
        return Err(SystemError::SameVariable(i).into());
    }
    let side = g3_side_condition(n, i, a, j);
    let certificate = if implied(s, &side).is_implied() {
        Certificate::Implied
    } else if assume {
        Certificate::UserOverride
    } else {
        return Err(GuidelineError::MissingCertificate(
            side.display(s.vars()).to_string(),
        ));
    };
    let next = s.substitute(i, &BigInt::from(a), j)?;
    Ok((
        next,
        PostSubstitution { j, i, a },
        DerivationStep::G3 {
            i,
            a,
            j,
            certificate,
        },
    ))
}

/// Guideline 4: `F_S = F_{S ∪ {c}} + F_{S ∪ {¬c}}`.
pub fn apply_g4(
    s: &ConstraintSystem,
    c: &Constraint,
) -> Result<(ConstraintSystem, ConstraintSystem), GuidelineError> {
    let neg = c.negate()?;
    Ok((s.with_constraint(c.clone())?, s.with_constraint(neg)?))
}

/// Guideline 5: for the nonbasic constraint `c` at `index`,
/// `F_S = F_{S − {c}} − F_{(S − {c}) ∪ {¬c}}`.
pub fn apply_g5(
    s: &ConstraintSystem,
    index: usize,
) -> Result<(ConstraintSystem, ConstraintSystem, Constraint), GuidelineError> {
    let len = s.nonbasic().len();
    let c = s
        .nonbasic()
        .get(index)
        .cloned()
        .ok_or(GuidelineError::NoSuchConstraint { index, len })?;
    if c.relation == Relation::Eq {
        return Err(GuidelineError::RemoveEquality);
    }
    let rest = s.without_nonbasic(index);
    let neg = c.negate()?;
    let other = rest.with_constraint(neg)?;
    Ok((rest, other, c))
}
