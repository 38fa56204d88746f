//! Canonical forms for state identity.
//!
//! Rewrites, applied bottom-up to a fixed point:
//!
//! * `Seq(0,Q)` becomes `Q`;
//! * `Par(A,0,0)` becomes `0`;
//! * `P-P` becomes `P`, and `P+P` becomes `P` when `P` is stable;
//! * operands of `-`, `+` and `||` are ordered by key, and `P*{r}Q` with
//!   `key(Q) < key(P)` becomes `Q*{1-r}P`;
//! * `P*{1}Q` becomes `P`, `P*{0}Q` becomes `Q`.
//!
//! Process variables in active position (not under a prefix and not on the
//! right of `;`) are replaced by their canonical bodies. A variable whose
//! unfolding runs into itself without passing a prefix is left symbolic; the
//! semantics reports it as unguarded recursion.

use std::fmt;

use crate::ast::{DefinitionEnv, Process};
use crate::semantics::DEFAULT_MAX_UNFOLD;

/// Pretty-printed canonical form. Equal keys mean equal canonical forms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Key of a process taken as is, without rewriting.
    pub fn syntactic(p: &Process) -> Self {
        CanonicalKey(p.to_string())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn canonicalize(p: &Process, env: &DefinitionEnv) -> Process {
    Canonicalizer::new(env, DEFAULT_MAX_UNFOLD).canonicalize(p)
}

pub fn canonical_key(p: &Process, env: &DefinitionEnv) -> CanonicalKey {
    CanonicalKey(canonicalize(p, env).to_string())
}

/// Raised while unfolding `name` reaches `name` again.
struct Cycle(String);

pub struct Canonicalizer<'e> {
    env: &'e DefinitionEnv,
    max_unfold: usize,
}

impl<'e> Canonicalizer<'e> {
    pub fn new(env: &'e DefinitionEnv, max_unfold: usize) -> Self {
        Canonicalizer { env, max_unfold }
    }

    pub fn canonicalize(&self, p: &Process) -> Process {
        let mut stack = Vec::new();
        match self.canon(p, false, &mut stack) {
            Ok(q) => q,
            // Only variables push frames and each frame catches its own cycle.
            Err(_) => unreachable!("cycle escaped its variable frame"),
        }
    }

    pub fn key(&self, p: &Process) -> CanonicalKey {
        CanonicalKey(self.canonicalize(p).to_string())
    }

    fn canon(&self, p: &Process, guarded: bool, stack: &mut Vec<String>) -> Result<Process, Cycle> {
        Ok(match p {
            Process::Nil => Process::Nil,
            Process::Var(name) => {
                if guarded {
                    return Ok(p.clone());
                }
                if stack.iter().any(|n| n == name) {
                    return Err(Cycle(name.clone()));
                }
                let body = match self.env.get(name) {
                    Some(body) if stack.len() < self.max_unfold => body,
                    _ => return Ok(p.clone()),
                };
                stack.push(name.clone());
                let result = self.canon(body, false, stack);
                stack.pop();
                match result {
                    Ok(q) => q,
                    Err(Cycle(ref at)) if at == name => p.clone(),
                    Err(cycle) => return Err(cycle),
                }
            }
            Process::Prefix(a, r, q) => Process::prefix(a.clone(), *r, self.canon(q, true, stack)?),
            Process::Seq(l, r) => {
                let left = self.canon(l, guarded, stack)?;
                if left.is_nil() {
                    self.canon(r, guarded, stack)?
                } else {
                    Process::seq(left, self.canon(r, true, stack)?)
                }
            }
            Process::Par(sync, l, r) => {
                let (left, right) = (self.canon(l, guarded, stack)?, self.canon(r, guarded, stack)?);
                if left.is_nil() && right.is_nil() {
                    Process::Nil
                } else {
                    let (left, right) = ordered(left, right);
                    Process::par(sync.clone(), left, right)
                }
            }
            Process::IntChoice(l, r) => {
                let (left, right) = (self.canon(l, guarded, stack)?, self.canon(r, guarded, stack)?);
                if left == right {
                    left
                } else {
                    let (left, right) = ordered(left, right);
                    Process::int_choice(left, right)
                }
            }
            Process::ExtChoice(l, r) => {
                let (left, right) = (self.canon(l, guarded, stack)?, self.canon(r, guarded, stack)?);
                if left == right && is_stable(&left) {
                    left
                } else {
                    let (left, right) = ordered(left, right);
                    Process::ext_choice(left, right)
                }
            }
            Process::ProbChoice(prob, l, r) => {
                if prob.is_one() {
                    return self.canon(l, guarded, stack);
                }
                if prob.is_zero() {
                    return self.canon(r, guarded, stack);
                }
                let (left, right) = (self.canon(l, guarded, stack)?, self.canon(r, guarded, stack)?);
                if right.to_string() < left.to_string() {
                    Process::prob_choice(prob.complement(), right, left)
                } else {
                    Process::prob_choice(prob.clone(), left, right)
                }
            }
        })
    }
}

fn ordered(left: Process, right: Process) -> (Process, Process) {
    if right.to_string() < left.to_string() {
        (right, left)
    } else {
        (left, right)
    }
}

/// No unresolved internal or probabilistic choice in active position. Only
/// meaningful on canonical terms, where an active variable is a cyclic one.
fn is_stable(p: &Process) -> bool {
    match p {
        Process::Nil | Process::Prefix(..) => true,
        Process::Var(_) | Process::IntChoice(..) | Process::ProbChoice(..) => false,
        Process::ExtChoice(l, r) | Process::Par(_, l, r) => is_stable(l) && is_stable(r),
        Process::Seq(l, _) => is_stable(l),
    }
}
