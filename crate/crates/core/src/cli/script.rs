//! Derivation scripts: guideline steps applied by hand.
//!
//! The script works on a stack of goals, each a system with a sign and the
//! guideline-3 substitutions still owed to its generating function. Every
//! command acts on the goal on top of the stack:
//!
//! ```text
//! g4 <constraint>         split into S ∪ {c} and S ∪ {¬c}
//! g5 remove <k>           drop nonbasic constraint k (1-based), subtracting (S − c) ∪ {¬c}
//! g3 <i> <a> <j> [assume] λ_i ← λ_i + aλ_j, side condition checked by FM
//! g2                      solve each connected component and multiply
//! g1                      close a goal whose constraints are all λ_v ≥ t
//! solve                   close the goal with the automatic solver
//! ```
//!
//! Variables are named or given by 1-based index. Goals left open when
//! the script ends are solved automatically.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::parse::{parse_constraint_line, ParseError};
use crate::gfalg::{GfError, RationalGF};
use crate::guidelines::{
    apply_g1, apply_g2, apply_g3, apply_g4, apply_g5, combine_components, DerivationStep,
    GuidelineError, PostSubstitution,
};
use crate::solver::{SolveError, Solver};
use crate::system::{Basic, ConstraintSystem, Relation, VarId, VarTable};

#[derive(Debug, Error)]
pub enum ScriptError {
    #[error("script line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("script {0}")]
    Parse(#[from] ParseError),
    #[error("script line {line}: {source}")]
    Guideline { line: usize, source: GuidelineError },
    #[error("script line {line}: {source}")]
    Solve { line: usize, source: SolveError },
    #[error("script line {line}: {source}")]
    Gf { line: usize, source: GfError },
    #[error("script line {line}: no open goal")]
    NoGoal { line: usize },
    #[error("script line {line}: g1 needs every nonbasic constraint to be a lower bound on one variable")]
    NotG1Shape { line: usize },
}

impl ScriptError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            ScriptError::Solve {
                source: SolveError::BudgetExhausted(_),
                ..
            }
        )
    }
}

#[derive(Debug, Clone)]
struct Goal {
    id: String,
    system: ConstraintSystem,
    negative: bool,
    posts: Vec<PostSubstitution>,
}

/// The result of a script: one trace line per step, and the GF.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub trace: Vec<String>,
    pub steps: Vec<DerivationStep>,
    pub gf: RationalGF,
}

struct Runner<'a> {
    solver: &'a Solver,
    vars: Arc<VarTable>,
    stack: Vec<Goal>,
    total: RationalGF,
    trace: Vec<String>,
    steps: Vec<DerivationStep>,
}

fn var_ref(vars: &VarTable, tok: &str, line: usize) -> Result<VarId, ScriptError> {
    if let Some(v) = vars.index_of(tok) {
        return Ok(v);
    }
    match tok.parse::<usize>() {
        Ok(k) if k >= 1 && k <= vars.len() => Ok(k - 1),
        _ => Err(ScriptError::Syntax {
            line,
            msg: format!("unknown variable `{tok}`"),
        }),
    }
}

impl Runner<'_> {
    fn log(&mut self, id: &str, text: impl std::fmt::Display) {
        self.trace.push(format!("[{id}] {text}"));
    }

    fn record(&mut self, id: &str, step: DerivationStep) {
        let text = step.display(&self.vars).to_string();
        self.log(id, text);
        self.steps.push(step);
    }

    fn close(&mut self, goal: &Goal, f: RationalGF, line: usize) -> Result<(), ScriptError> {
        let gf_err = |source| ScriptError::Gf { line, source };
        let mut f = f;
        for p in goal.posts.iter().rev() {
            f = p.apply(&f).map_err(gf_err)?;
        }
        if goal.negative {
            f = f.neg();
        }
        self.total = self.total.add(&f).map_err(gf_err)?;
        Ok(())
    }

    fn solve_goal(&mut self, goal: Goal, line: usize) -> Result<(), ScriptError> {
        let f = self
            .solver
            .solve(&goal.system)
            .map_err(|source| ScriptError::Solve { line, source })?;
        self.log(&goal.id, "solve");
        self.close(&goal, f, line)
    }

    fn g1(&mut self, goal: Goal, line: usize) -> Result<(), ScriptError> {
        let n = self.vars.len();
        let mut lower: Vec<BigInt> = vec![BigInt::zero(); n];
        for c in goal.system.nonbasic() {
            let support: Vec<usize> = (0..n).filter(|&v| !c.coeffs[v].is_zero()).collect();
            let ok =
                c.relation == Relation::Geq && support.len() == 1 && c.coeffs[support[0]].is_one();
            if !ok {
                return Err(ScriptError::NotG1Shape { line });
            }
            let t = -&c.constant;
            if t > lower[support[0]] {
                lower[support[0]] = t;
            }
        }
        let mut f = RationalGF::one(self.vars.clone());
        for (v, low) in lower.iter().enumerate() {
            if goal.system.basic(v) == Basic::Zero {
                if low.is_positive() {
                    f = RationalGF::zero(self.vars.clone());
                }
                continue;
            }
            let t = low.to_i64().ok_or(ScriptError::NotG1Shape { line })?;
            let g = apply_g1(self.vars.clone(), v, t)
                .map_err(|source| ScriptError::Guideline { line, source })?;
            f = f
                .mul(&g)
                .map_err(|source| ScriptError::Gf { line, source })?;
            let step = DerivationStep::G1 { var: v, t };
            self.record(&goal.id, step);
        }
        self.close(&goal, f, line)
    }

    fn g2(&mut self, goal: Goal, line: usize) -> Result<(), ScriptError> {
        let comps = apply_g2(&goal.system);
        let step = DerivationStep::G2 {
            components: comps.iter().map(|c| c.embedding.clone()).collect(),
        };
        self.record(&goal.id, step);
        let mut parts = Vec::new();
        for c in comps {
            let f = self
                .solver
                .solve(&c.system)
                .map_err(|source| ScriptError::Solve { line, source })?;
            parts.push((c, f));
        }
        let f = combine_components(self.vars.clone(), &parts)
            .map_err(|source| ScriptError::Gf { line, source })?;
        self.close(&goal, f, line)
    }

    fn child(goal: &Goal, k: usize, system: ConstraintSystem, flip: bool) -> Goal {
        Goal {
            id: format!("{}.{k}", goal.id),
            system,
            negative: goal.negative ^ flip,
            posts: goal.posts.clone(),
        }
    }

    fn command(&mut self, text: &str, line: usize) -> Result<(), ScriptError> {
        let words: Vec<&str> = text.split_whitespace().collect();
        let syntax = |msg: &str| ScriptError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let guideline = |source| ScriptError::Guideline { line, source };
        let goal = self.stack.pop().ok_or(ScriptError::NoGoal { line })?;
        match words[0] {
            "solve" if words.len() == 1 => self.solve_goal(goal, line),
            "g1" if words.len() == 1 => self.g1(goal, line),
            "g2" if words.len() == 1 => self.g2(goal, line),
            "g4" => {
                let body = text.trim_start()[2..].trim();
                let raw = parse_constraint_line(body, line, &self.vars)?;
                if raw.len() != 1 {
                    return Err(syntax("g4 takes a single constraint"));
                }
                let c = raw[0].to_constraint();
                let (yes, no) = apply_g4(&goal.system, &c).map_err(guideline)?;
                let step = DerivationStep::G4 { c };
                self.record(&goal.id, step);
                self.stack.push(Self::child(&goal, 2, no, false));
                self.stack.push(Self::child(&goal, 1, yes, false));
                Ok(())
            }
            "g5" => {
                if words.len() != 3 || words[1] != "remove" {
                    return Err(syntax("expected `g5 remove <k>`"));
                }
                let k: usize = words[2]
                    .parse()
                    .map_err(|_| syntax("constraint index must be a positive integer"))?;
                if k == 0 {
                    return Err(syntax("constraint indices start at 1"));
                }
                let (rest, other, c) = apply_g5(&goal.system, k - 1).map_err(guideline)?;
                let step = DerivationStep::G5 { c };
                self.record(&goal.id, step);
                self.stack.push(Self::child(&goal, 2, other, true));
                self.stack.push(Self::child(&goal, 1, rest, false));
                Ok(())
            }
            "g3" => {
                let assume = match words.len() {
                    4 => false,
                    5 if words[4] == "assume" => true,
                    _ => return Err(syntax("expected `g3 <i> <a> <j> [assume]`")),
                };
                let i = var_ref(&self.vars, words[1], line)?;
                let a: i64 = words[2]
                    .parse()
                    .map_err(|_| syntax("g3 multiplier must be an integer"))?;
                let j = var_ref(&self.vars, words[3], line)?;
                let (next, post, step) =
                    apply_g3(&goal.system, i, a, j, assume).map_err(guideline)?;
                self.record(&goal.id, step);
                let mut g = goal;
                g.system = next;
                g.posts.push(post);
                self.stack.push(g);
                Ok(())
            }
            other => Err(syntax(&format!("unknown or malformed command `{other}`"))),
        }
    }
}

/// Runs `script` on `system`.
pub fn run_script(
    system: &ConstraintSystem,
    script: &str,
    solver: &Solver,
) -> Result<Derivation, ScriptError> {
    let vars = system.vars().clone();
    let mut r = Runner {
        solver,
        vars: vars.clone(),
        stack: vec![Goal {
            id: "1".into(),
            system: system.clone(),
            negative: false,
            posts: Vec::new(),
        }],
        total: RationalGF::zero(vars),
        trace: Vec::new(),
        steps: Vec::new(),
    };
    let mut last = 0;
    for (idx, l) in script.lines().enumerate() {
        let text = l.split('#').next().unwrap_or("").trim();
        last = idx + 1;
        if text.is_empty() {
            continue;
        }
        r.command(text, idx + 1)?;
    }
    while let Some(goal) = r.stack.pop() {
        r.solve_goal(goal, last)?;
    }
    Ok(Derivation {
        trace: r.trace,
        steps: r.steps,
        gf: r.total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse::parse_file;
    use crate::oracle::count_series;
    use crate::series::{specialize, SpecializationMap};

    fn agrees(sys: &str, script: &str) -> Derivation {
        let s = parse_file(sys).unwrap();
        let d = run_script(&s, script, &Solver::default()).unwrap();
        let got = specialize(&d.gf, &SpecializationMap::all_q(s.num_vars()), 10).unwrap();
        assert_eq!(got, count_series(&s, 10), "{script}");
        d
    }

    #[test]
    fn empty_script_solves() {
        let d = agrees("vars: a b\na >= b/2 >= 0\n", "");
        assert_eq!(d.trace, vec!["[1] solve"]);
    }

    #[test]
    fn g3_then_g1() {
        // a >= 2b: a <- a + 2b leaves a basics-only system
        let d = agrees("vars: a b\na >= 2*b\n", "g3 a 2 b\ng1\n");
        assert!(d.trace[0].starts_with("[1] g3 a <- a + 2*b (implied)"));
        assert_eq!(d.gf.to_string(), "+ 1 / (1 - a) (1 - a^2*b)\n");
    }

    #[test]
    fn g4_and_g2() {
        agrees(
            "vars: a b c\na >= b\nc >= 1\n",
            "g4 a >= b + 1\ng2\nsolve\n",
        );
    }

    #[test]
    fn uncertified_g3_is_refused() {
        let s = parse_file("vars: a b\n").unwrap();
        let err = run_script(&s, "g3 1 1 2\n", &Solver::default()).unwrap_err();
        assert!(matches!(
            err,
            ScriptError::Guideline {
                source: GuidelineError::MissingCertificate(_),
                ..
            }
        ));
    }

    #[test]
    fn bad_lines() {
        let s = parse_file("vars: a\n").unwrap();
        assert!(matches!(
            run_script(&s, "frobnicate\n", &Solver::default()),
            Err(ScriptError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            run_script(&s, "solve\nsolve\n", &Solver::default()),
            Err(ScriptError::NoGoal { line: 2 })
        ));
    }
}
