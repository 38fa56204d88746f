//! Operational semantics in three layers.
//!
//! A process is first checked for deterministic stability: while it has an
//! unguarded internal choice it can only move by non-deterministic
//! transitions, one choice at a time. A deterministically stable process
//! with unguarded probabilistic choices resolves all of them at once into a
//! distribution. Only a process that is stable in both senses performs timed
//! actions.
//!
//! Every function here works on arbitrary terms, canonical or not. A `Seq`
//! whose left operand has terminated behaves as its right operand, and
//! variables are unfolded on demand.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::ast::{ActionName, AstError, DefinitionEnv, Process};
use crate::canon::Canonicalizer;
use crate::numeric::{Probability, Rate};

pub const DEFAULT_MAX_UNFOLD: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TransitionLabel {
    /// Resolution of one internal choice; the path names the operand sides
    /// taken from the root down to the choice, e.g. `L.R`.
    NdBranch(String),
    Prob(Probability),
    Action(ActionName, Rate),
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransitionLabel::NdBranch(path) => write!(f, "nd:{}", path),
            TransitionLabel::Prob(p) => write!(f, "p={}", p),
            TransitionLabel::Action(a, r) => write!(f, "{},{}", a, r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    NdUnstable,
    ProbUnstable,
    ActionEnabled,
    Deadlock,
    Success,
}

impl NodeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeKind::NdUnstable => "nd",
            NodeKind::ProbUnstable => "prob",
            NodeKind::ActionEnabled => "action",
            NodeKind::Deadlock => "deadlock",
            NodeKind::Success => "success",
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, NodeKind::Deadlock | NodeKind::Success)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("unguarded recursion through `{0}`")]
    UnguardedRecursion(String),
    #[error(transparent)]
    Unbound(#[from] AstError),
    #[error("{operation} does not apply to `{process}`")]
    NotApplicable { operation: &'static str, process: String },
}

type Result<T> = std::result::Result<T, SemanticsError>;

/// Replaces a variable at the root by its body until the root is not a
/// variable. Each replacement costs one unit of `budget`.
pub fn unfold(p: &Process, env: &DefinitionEnv, budget: usize) -> Result<Process> {
    let mut current = p;
    let mut budget = budget;
    while let Process::Var(name) = current {
        if budget == 0 {
            return Err(SemanticsError::UnguardedRecursion(name.clone()));
        }
        budget -= 1;
        current = env.lookup(name)?;
    }
    Ok(current.clone())
}

/// Minimum of the two rates, `inf` being the passive top element.
pub fn sync_rate(a: Rate, b: Rate) -> Rate {
    a.min(b)
}

pub fn is_det_stable(p: &Process, env: &DefinitionEnv) -> Result<bool> {
    Semantics::new(env, DEFAULT_MAX_UNFOLD).is_det_stable(p)
}

pub fn is_prob_stable(p: &Process, env: &DefinitionEnv) -> Result<bool> {
    Semantics::new(env, DEFAULT_MAX_UNFOLD).is_prob_stable(p)
}

pub fn nd_successors(p: &Process, env: &DefinitionEnv) -> Result<Vec<(TransitionLabel, Process)>> {
    Semantics::new(env, DEFAULT_MAX_UNFOLD).nd_successors(p)
}

pub fn prob_successors(p: &Process, env: &DefinitionEnv) -> Result<Vec<(TransitionLabel, Process)>> {
    Semantics::new(env, DEFAULT_MAX_UNFOLD).prob_successors(p)
}

pub fn action_successors(p: &Process, env: &DefinitionEnv) -> Result<Vec<(TransitionLabel, Process)>> {
    Semantics::new(env, DEFAULT_MAX_UNFOLD).action_successors(p)
}

pub fn classify(p: &Process, env: &DefinitionEnv) -> Result<NodeKind> {
    Semantics::new(env, DEFAULT_MAX_UNFOLD).classify(p)
}

/// Rejects definitions reachable from the root that can reach themselves
/// without passing through a prefix. Occurrences on the right of `;` count
/// as guarded here; the rules catch the remaining cases when they unfold.
pub fn check_guarded(env: &DefinitionEnv) -> Result<()> {
    fn active_vars<'a>(p: &'a Process, out: &mut Vec<&'a str>) {
        match p {
            Process::Nil | Process::Prefix(..) => {}
            Process::Var(name) => out.push(name),
            Process::Seq(l, _) => active_vars(l, out),
            Process::IntChoice(l, r)
            | Process::ExtChoice(l, r)
            | Process::ProbChoice(_, l, r)
            | Process::Par(_, l, r) => {
                active_vars(l, out);
                active_vars(r, out);
            }
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }

    fn visit<'a>(name: &'a str, env: &'a DefinitionEnv, marks: &mut HashMap<&'a str, Mark>) -> Result<()> {
        match marks.get(name) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Active) => return Err(SemanticsError::UnguardedRecursion(name.to_string())),
            None => {}
        }
        marks.insert(name, Mark::Active);
        let mut vars = Vec::new();
        active_vars(env.lookup(name)?, &mut vars);
        for var in vars {
            visit(var, env, marks)?;
        }
        marks.insert(name, Mark::Done);
        Ok(())
    }

    let mut reachable = vec![env.root()];
    let mut seen: HashSet<&str> = reachable.iter().copied().collect();
    while let Some(name) = reachable.pop() {
        env.lookup(name)?.for_each_var(&mut |var| {
            if seen.insert(var) {
                reachable.push(var);
            }
        });
    }
    let mut names: Vec<&str> = seen.into_iter().collect();
    names.sort_unstable();
    let mut marks = HashMap::new();
    for name in names {
        visit(name, env, &mut marks)?;
    }
    Ok(())
}

type Stack = Vec<String>;

pub struct Semantics<'e> {
    env: &'e DefinitionEnv,
    max_unfold: usize,
    canon: Canonicalizer<'e>,
}

impl<'e> Semantics<'e> {
    pub fn new(env: &'e DefinitionEnv, max_unfold: usize) -> Self {
        Semantics {
            env,
            max_unfold,
            canon: Canonicalizer::new(env, max_unfold),
        }
    }

    pub fn env(&self) -> &'e DefinitionEnv {
        self.env
    }

    pub fn is_det_stable(&self, p: &Process) -> Result<bool> {
        self.det_stable(p, &mut Vec::new())
    }

    pub fn is_prob_stable(&self, p: &Process) -> Result<bool> {
        self.prob_stable(p, &mut Vec::new())
    }

    pub fn classify(&self, p: &Process) -> Result<NodeKind> {
        if !self.is_det_stable(p)? {
            Ok(NodeKind::NdUnstable)
        } else if !self.is_prob_stable(p)? {
            Ok(NodeKind::ProbUnstable)
        } else if self.terminated(p) {
            Ok(NodeKind::Success)
        } else if !self.actions(p, &mut Vec::new())?.is_empty() {
            Ok(NodeKind::ActionEnabled)
        } else {
            Ok(NodeKind::Deadlock)
        }
    }

    /// Classifies `p` and computes the successors of the layer it is in.
    pub fn step(&self, p: &Process) -> Result<(NodeKind, Vec<(TransitionLabel, Process)>)> {
        if !self.is_det_stable(p)? {
            return Ok((NodeKind::NdUnstable, self.nd_unchecked(p)?));
        }
        if !self.is_prob_stable(p)? {
            return Ok((NodeKind::ProbUnstable, self.prob_unchecked(p)?));
        }
        if self.terminated(p) {
            return Ok((NodeKind::Success, Vec::new()));
        }
        let moves = self.action_unchecked(p)?;
        let kind = if moves.is_empty() {
            NodeKind::Deadlock
        } else {
            NodeKind::ActionEnabled
        };
        Ok((kind, moves))
    }

    pub fn nd_successors(&self, p: &Process) -> Result<Vec<(TransitionLabel, Process)>> {
        if self.is_det_stable(p)? {
            return Err(not_applicable("nd_successors", p));
        }
        self.nd_unchecked(p)
    }

    pub fn prob_successors(&self, p: &Process) -> Result<Vec<(TransitionLabel, Process)>> {
        if !self.is_det_stable(p)? || self.is_prob_stable(p)? {
            return Err(not_applicable("prob_successors", p));
        }
        self.prob_unchecked(p)
    }

    pub fn action_successors(&self, p: &Process) -> Result<Vec<(TransitionLabel, Process)>> {
        if !self.is_det_stable(p)? || !self.is_prob_stable(p)? {
            return Err(not_applicable("action_successors", p));
        }
        self.action_unchecked(p)
    }

    fn nd_unchecked(&self, p: &Process) -> Result<Vec<(TransitionLabel, Process)>> {
        Ok(self
            .nd(p, &mut Vec::new())?
            .into_iter()
            .map(|(path, q)| (TransitionLabel::NdBranch(path), q))
            .collect())
    }

    fn prob_unchecked(&self, p: &Process) -> Result<Vec<(TransitionLabel, Process)>> {
        Ok(self
            .resolve(p, &mut Vec::new())?
            .into_iter()
            .map(|(prob, q)| (TransitionLabel::Prob(prob), q))
            .collect())
    }

    fn action_unchecked(&self, p: &Process) -> Result<Vec<(TransitionLabel, Process)>> {
        Ok(self
            .actions(p, &mut Vec::new())?
            .into_iter()
            .map(|(a, r, q)| (TransitionLabel::Action(a, r), q))
            .collect())
    }

    /// True when `p` canonicalizes to `0`.
    pub fn terminated(&self, p: &Process) -> bool {
        self.canon.canonicalize(p).is_nil()
    }

    /// Runs `f` on the body of `name`, failing if `name` is already being
    /// unfolded further up in the same unguarded context.
    fn enter<T>(&self, name: &str, stack: &mut Stack, f: impl FnOnce(&Self, &'e Process, &mut Stack) -> Result<T>) -> Result<T> {
        if stack.iter().any(|n| n == name) || stack.len() >= self.max_unfold {
            return Err(SemanticsError::UnguardedRecursion(name.to_string()));
        }
        let body = self.env.lookup(name)?;
        stack.push(name.to_string());
        let result = f(self, body, stack);
        stack.pop();
        result
    }

    fn det_stable(&self, p: &Process, stack: &mut Stack) -> Result<bool> {
        match p {
            Process::Nil | Process::Prefix(..) => Ok(true),
            Process::IntChoice(..) => Ok(false),
            Process::ExtChoice(l, r) | Process::ProbChoice(_, l, r) | Process::Par(_, l, r) => {
                Ok(self.det_stable(l, stack)? && self.det_stable(r, stack)?)
            }
            Process::Seq(l, r) => {
                if self.terminated(l) {
                    self.det_stable(r, stack)
                } else {
                    self.det_stable(l, stack)
                }
            }
            Process::Var(name) => self.enter(name, stack, |s, body, stack| s.det_stable(body, stack)),
        }
    }

    fn prob_stable(&self, p: &Process, stack: &mut Stack) -> Result<bool> {
        match p {
            Process::Nil | Process::Prefix(..) => Ok(true),
            Process::ProbChoice(..) => Ok(false),
            Process::ExtChoice(l, r) | Process::IntChoice(l, r) | Process::Par(_, l, r) => {
                Ok(self.prob_stable(l, stack)? && self.prob_stable(r, stack)?)
            }
            Process::Seq(l, r) => {
                if self.terminated(l) {
                    self.prob_stable(r, stack)
                } else {
                    self.prob_stable(l, stack)
                }
            }
            Process::Var(name) => self.enter(name, stack, |s, body, stack| s.prob_stable(body, stack)),
        }
    }

    fn nd(&self, p: &Process, stack: &mut Stack) -> Result<Vec<(String, Process)>> {
        let side = |side: &str, moves: Vec<(String, Process)>, wrap: &dyn Fn(Process) -> Process| {
            moves
                .into_iter()
                .map(|(path, q)| (format!("{}.{}", side, path), wrap(q)))
                .collect::<Vec<_>>()
        };
        match p {
            Process::Nil | Process::Prefix(..) => Ok(Vec::new()),
            Process::IntChoice(l, r) => Ok(vec![("L".to_string(), (**l).clone()), ("R".to_string(), (**r).clone())]),
            Process::ExtChoice(l, r) => {
                let mut out = side("L", self.nd_if_unstable(l, stack)?, &|q| Process::ext_choice(q, (**r).clone()));
                out.extend(side("R", self.nd_if_unstable(r, stack)?, &|q| Process::ext_choice((**l).clone(), q)));
                Ok(out)
            }
            Process::ProbChoice(prob, l, r) => {
                let mut out = side("L", self.nd_if_unstable(l, stack)?, &|q| {
                    Process::prob_choice(prob.clone(), q, (**r).clone())
                });
                out.extend(side("R", self.nd_if_unstable(r, stack)?, &|q| {
                    Process::prob_choice(prob.clone(), (**l).clone(), q)
                }));
                Ok(out)
            }
            Process::Par(sync, l, r) => {
                let mut out = side("L", self.nd_if_unstable(l, stack)?, &|q| {
                    Process::par(sync.clone(), q, (**r).clone())
                });
                out.extend(side("R", self.nd_if_unstable(r, stack)?, &|q| {
                    Process::par(sync.clone(), (**l).clone(), q)
                }));
                Ok(out)
            }
            Process::Seq(l, r) => {
                if self.terminated(l) {
                    Ok(side("R", self.nd(r, stack)?, &|q| q))
                } else {
                    Ok(side("L", self.nd(l, stack)?, &|q| Process::seq(q, (**r).clone())))
                }
            }
            Process::Var(name) => self.enter(name, stack, |s, body, stack| s.nd(body, stack)),
        }
    }

    fn nd_if_unstable(&self, p: &Process, stack: &mut Stack) -> Result<Vec<(String, Process)>> {
        if self.det_stable(p, stack)? {
            Ok(Vec::new())
        } else {
            self.nd(p, stack)
        }
    }

    /// Resolves every unguarded probabilistic choice, returning the
    /// distribution over resolved processes. Zero-probability branches are
    /// dropped.
    fn resolve(&self, p: &Process, stack: &mut Stack) -> Result<Vec<(Probability, Process)>> {
        if self.prob_stable(p, stack)? {
            return Ok(vec![(Probability::one(), p.clone())]);
        }
        let product = |this: &Self,
                       l: &Process,
                       r: &Process,
                       stack: &mut Stack,
                       wrap: &dyn Fn(Process, Process) -> Process|
         -> Result<Vec<(Probability, Process)>> {
            let left = this.resolve(l, stack)?;
            let right = this.resolve(r, stack)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for (pl, ql) in &left {
                for (pr, qr) in &right {
                    out.push((pl * pr, wrap(ql.clone(), qr.clone())));
                }
            }
            Ok(out)
        };
        match p {
            Process::ProbChoice(prob, l, r) => {
                let mut out = Vec::new();
                for (weight, branch) in [(prob.clone(), l), (prob.complement(), r)] {
                    if weight.is_zero() {
                        continue;
                    }
                    for (q, resolved) in self.resolve(branch, stack)? {
                        out.push((&weight * &q, resolved));
                    }
                }
                Ok(out)
            }
            Process::ExtChoice(l, r) => product(self, l, r, stack, &Process::ext_choice),
            Process::Par(sync, l, r) => product(self, l, r, stack, &|a, b| Process::par(sync.clone(), a, b)),
            Process::Seq(l, r) => {
                if self.terminated(l) {
                    self.resolve(r, stack)
                } else {
                    Ok(self
                        .resolve(l, stack)?
                        .into_iter()
                        .map(|(q, resolved)| (q, Process::seq(resolved, (**r).clone())))
                        .collect())
                }
            }
            Process::Var(name) => self.enter(name, stack, |s, body, stack| s.resolve(body, stack)),
            Process::Nil | Process::Prefix(..) | Process::IntChoice(..) => Ok(vec![(Probability::one(), p.clone())]),
        }
    }

    fn actions(&self, p: &Process, stack: &mut Stack) -> Result<Vec<(ActionName, Rate, Process)>> {
        match p {
            Process::Nil => Ok(Vec::new()),
            Process::Prefix(a, r, q) => Ok(vec![(a.clone(), *r, (**q).clone())]),
            Process::ExtChoice(l, r) => {
                let mut out = self.actions(l, stack)?;
                out.extend(self.actions(r, stack)?);
                Ok(out)
            }
            Process::Par(sync, l, r) => {
                let left = self.actions(l, stack)?;
                let right = self.actions(r, stack)?;
                let mut out = Vec::new();
                for (a, rate, q) in &left {
                    if !sync.contains(a) {
                        out.push((a.clone(), *rate, Process::par(sync.clone(), q.clone(), (**r).clone())));
                    }
                }
                for (a, rate, q) in &right {
                    if !sync.contains(a) {
                        out.push((a.clone(), *rate, Process::par(sync.clone(), (**l).clone(), q.clone())));
                    }
                }
                for (a, ra, ql) in left.iter().filter(|(a, ..)| sync.contains(a)) {
                    for (_, rb, qr) in right.iter().filter(|(b, ..)| b == a) {
                        out.push((a.clone(), sync_rate(*ra, *rb), Process::par(sync.clone(), ql.clone(), qr.clone())));
                    }
                }
                Ok(out)
            }
            Process::Seq(l, r) => {
                if self.terminated(l) {
                    self.actions(r, stack)
                } else {
                    Ok(self
                        .actions(l, stack)?
                        .into_iter()
                        .map(|(a, rate, q)| (a, rate, Process::seq(q, (**r).clone())))
                        .collect())
                }
            }
            Process::Var(name) => self.enter(name, stack, |s, body, stack| s.actions(body, stack)),
            Process::IntChoice(..) | Process::ProbChoice(..) => Err(not_applicable("action_successors", p)),
        }
    }
}

fn not_applicable(operation: &'static str, p: &Process) -> SemanticsError {
    SemanticsError::NotApplicable {
        operation,
        process: p.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_process_str, parse_program};

    fn env() -> DefinitionEnv {
        DefinitionEnv::single(Process::Nil).unwrap()
    }

    fn p(source: &str) -> Process {
        parse_process_str(source).unwrap()
    }

    fn rate(v: f64) -> Rate {
        Rate::finite(v).unwrap()
    }

    fn prob(text: &str) -> Probability {
        Probability::parse(text).unwrap()
    }

    fn act(name: &str, r: Rate) -> TransitionLabel {
        TransitionLabel::Action(ActionName::new(name).unwrap(), r)
    }

    fn nd(path: &str) -> TransitionLabel {
        TransitionLabel::NdBranch(path.to_string())
    }

    const CASE_STUDY: &str = "\
E = <a,0.1>.b.(<c,0.2>.f||{f,i}<d,0.3>.f||{f,i}<e,0.4>.f)
C = <g,0.5>.h.<i,0.6>
R = j.<i,0.7>
L = <k,0.8>
M = E;(C*{0.25}L)||{i}R
";

    #[test]
    fn unfold_resolves_root_variables() {
        let env = parse_program(CASE_STUDY).unwrap();
        assert_eq!(unfold(&Process::var("E"), &env, 64).unwrap(), env.lookup("E").unwrap().clone());
        assert_eq!(unfold(&Process::Nil, &env, 0).unwrap(), Process::Nil);
        let env = parse_program("P = P").unwrap();
        assert_eq!(
            unfold(&Process::var("P"), &env, 64),
            Err(SemanticsError::UnguardedRecursion("P".into()))
        );
    }

    #[test]
    fn det_stability() {
        assert!(!is_det_stable(&p("a.0-b.0"), &env()).unwrap());
        assert!(is_det_stable(&p("<a,0.3>.(b.0-c.0)"), &env()).unwrap());
        assert!(!is_det_stable(&p("(a.0-b.0);c.0"), &env()).unwrap());
        assert!(is_det_stable(&p("a.0;(b.0-c.0)"), &env()).unwrap());
        let env = parse_program(CASE_STUDY).unwrap();
        assert!(is_det_stable(&Process::var("M"), &env).unwrap());
    }

    #[test]
    fn prob_stability() {
        let env = parse_program(CASE_STUDY).unwrap();
        assert!(!is_prob_stable(&p("C*{0.25}L"), &env).unwrap());
        assert!(is_prob_stable(&p("<g,0.5>.(a.0*{0.5}b.0)"), &env).unwrap());
        assert!(!is_prob_stable(&p("(C*{0.25}L)||{i}R"), &env).unwrap());
        // The probabilistic choice waits until the encoding phase is over.
        assert!(is_prob_stable(&Process::var("M"), &env).unwrap());
    }

    #[test]
    fn internal_choice_branches() {
        assert_eq!(
            nd_successors(&p("a.0-b.0"), &env()).unwrap(),
            vec![(nd("L"), p("a.0")), (nd("R"), p("b.0"))]
        );
        assert_eq!(
            nd_successors(&p("(a.0-b.0)||{}c.0"), &env()).unwrap(),
            vec![(nd("L.L"), p("a.0||{}c.0")), (nd("L.R"), p("b.0||{}c.0"))]
        );
        let seq = nd_successors(&p("(a.0-b.0);c.0"), &env()).unwrap();
        assert_eq!(seq.iter().map(|(_, q)| q.clone()).collect::<Vec<_>>(), vec![p("a.0;c.0"), p("b.0;c.0")]);
    }

    #[test]
    fn internal_choices_resolve_one_at_a_time() {
        let moves = nd_successors(&p("(a.0-b.0)+(c.0-d.0)"), &env()).unwrap();
        assert_eq!(
            moves,
            vec![
                (nd("L.L"), p("a.0+(c.0-d.0)")),
                (nd("L.R"), p("b.0+(c.0-d.0)")),
                (nd("R.L"), p("(a.0-b.0)+c.0")),
                (nd("R.R"), p("(a.0-b.0)+d.0")),
            ]
        );
        assert!(matches!(
            nd_successors(&p("a.0"), &env()),
            Err(SemanticsError::NotApplicable { .. })
        ));
    }

    #[test]
    fn probabilistic_resolution() {
        let case_study = parse_program(CASE_STUDY).unwrap();
        assert_eq!(
            prob_successors(&p("C*{0.25}L"), &case_study).unwrap(),
            vec![
                (TransitionLabel::Prob(prob("0.25")), p("C")),
                (TransitionLabel::Prob(prob("0.75")), p("L")),
            ]
        );
        assert_eq!(
            prob_successors(&p("a.0*{1}b.0"), &env()).unwrap(),
            vec![(TransitionLabel::Prob(prob("1")), p("a.0"))]
        );
        let both = prob_successors(&p("(a.0*{0.5}b.0)||{}(c.0*{0.5}d.0)"), &env()).unwrap();
        assert_eq!(
            both,
            vec![
                (TransitionLabel::Prob(prob("0.25")), p("a.0||{}c.0")),
                (TransitionLabel::Prob(prob("0.25")), p("a.0||{}d.0")),
                (TransitionLabel::Prob(prob("0.25")), p("b.0||{}c.0")),
                (TransitionLabel::Prob(prob("0.25")), p("b.0||{}d.0")),
            ]
        );
    }

    #[test]
    fn nested_probabilistic_choices_resolve_together() {
        let moves = prob_successors(&p("(a.0*{0.5}b.0)*{0.2}c.0"), &env()).unwrap();
        let labels: Vec<String> = moves.iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(labels, vec!["p=0.1", "p=0.1", "p=0.8"]);
    }

    #[test]
    fn actions_of_syntax_tree_example() {
        let moves = action_successors(&p("<a,0.3>.0||{a,c}<b,inf>.0"), &env()).unwrap();
        assert_eq!(moves, vec![(act("b", Rate::Infinite), p("<a,0.3>.0||{a,c}0"))]);
    }

    #[test]
    fn single_action() {
        assert_eq!(
            action_successors(&p("<k,0.8>"), &env()).unwrap(),
            vec![(act("k", rate(0.8)), Process::Nil)]
        );
    }

    #[test]
    fn external_choice_keeps_both_alternatives() {
        assert_eq!(
            action_successors(&p("<a,1>.0+<a,2>.0"), &env()).unwrap(),
            vec![(act("a", rate(1.0)), Process::Nil), (act("a", rate(2.0)), Process::Nil)]
        );
    }

    #[test]
    fn synchronisation_uses_minimum_rate() {
        assert_eq!(
            action_successors(&p("<i,0.6>.0||{i}<i,0.7>.0"), &env()).unwrap(),
            vec![(act("i", rate(0.6)), p("0||{i}0"))]
        );
        assert_eq!(
            action_successors(&p("<s,0.3>.0||{s}s.0"), &env()).unwrap(),
            vec![(act("s", rate(0.3)), p("0||{s}0"))]
        );
    }

    #[test]
    fn sync_rate_law() {
        assert_eq!(sync_rate(rate(0.3), Rate::Infinite), rate(0.3));
        assert_eq!(sync_rate(Rate::Infinite, Rate::Infinite), Rate::Infinite);
        assert_eq!(sync_rate(rate(0.2), rate(0.5)), rate(0.2));
        let rates = [rate(0.1), rate(0.5), rate(2.0), Rate::Infinite];
        for a in rates {
            assert_eq!(sync_rate(a, Rate::Infinite), a);
            for b in rates {
                assert_eq!(sync_rate(a, b), sync_rate(b, a));
                for c in rates {
                    assert_eq!(sync_rate(sync_rate(a, b), c), sync_rate(a, sync_rate(b, c)));
                }
            }
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&Process::Nil, &env()).unwrap(), NodeKind::Success);
        assert_eq!(classify(&p("<a,1>.0||{a}0"), &env()).unwrap(), NodeKind::Deadlock);
        assert_eq!(classify(&p("a.0-b.0"), &env()).unwrap(), NodeKind::NdUnstable);
        assert_eq!(classify(&p("a.0*{0.5}b.0"), &env()).unwrap(), NodeKind::ProbUnstable);
        assert_eq!(classify(&p("a.0"), &env()).unwrap(), NodeKind::ActionEnabled);
        // Terminated operands count as success even before canonicalization.
        assert_eq!(classify(&p("0||{a}0"), &env()).unwrap(), NodeKind::Success);
    }

    #[test]
    fn sequential_composition_continues_after_termination() {
        assert_eq!(
            action_successors(&p("(0||{}0);a.0"), &env()).unwrap(),
            vec![(act("a", Rate::Infinite), Process::Nil)]
        );
        assert_eq!(
            action_successors(&p("a.0;b.0"), &env()).unwrap(),
            vec![(act("a", Rate::Infinite), p("0;b.0"))]
        );
    }

    #[test]
    fn unguarded_recursion_is_reported() {
        for source in ["P = P", "P = P+a.0", "P = 0;P", "P = P*{0.5}a.0"] {
            let env = parse_program(source).unwrap();
            let err = Semantics::new(&env, DEFAULT_MAX_UNFOLD).step(&Process::var("P")).unwrap_err();
            assert!(matches!(err, SemanticsError::UnguardedRecursion(_)), "{}: {:?}", source, err);
        }
    }

    #[test]
    fn static_guardedness_check() {
        for source in ["P = P", "P = Q||{}a.0\nQ = P-b.0", "main = X\nX = a.0+Y\nY = X*{0.5}b.0"] {
            let env = parse_program(source).unwrap();
            assert!(matches!(check_guarded(&env), Err(SemanticsError::UnguardedRecursion(_))), "{}", source);
        }
        for source in ["P = a.P", "P = a.0;P", "P = a.Q+b.0\nQ = P||{}P", "X = X\nmain = a.0"] {
            let env = parse_program(source).unwrap();
            assert_eq!(check_guarded(&env), Ok(()), "{}", source);
        }
    }

    #[test]
    fn guarded_recursion_unfolds_once() {
        let env = parse_program("P = a.P").unwrap();
        assert_eq!(
            action_successors(&Process::var("P"), &env).unwrap(),
            vec![(act("a", Rate::Infinite), Process::var("P"))]
        );
        let env = parse_program("P = a.0;P").unwrap();
        assert_eq!(
            action_successors(&Process::var("P"), &env).unwrap(),
            vec![(act("a", Rate::Infinite), p("0;P"))]
        );
    }

    #[test]
    fn labels_render() {
        assert_eq!(nd("L.R").to_string(), "nd:L.R");
        assert_eq!(TransitionLabel::Prob(prob("0.25")).to_string(), "p=0.25");
        assert_eq!(act("b", Rate::Infinite).to_string(), "b,inf");
        assert_eq!(act("k", rate(0.8)).to_string(), "k,0.8");
    }
}
