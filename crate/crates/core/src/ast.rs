//! Process syntax trees and named definitions.
//!
//! The tree is layered by binding strength: sequential composition is the
//! loosest operator and sits closest to the root, then parallel composition,
//! then the three choices, then prefix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::numeric::{Probability, Rate};

/// Name of an action, `[A-Za-z_][A-Za-z0-9_]*` minus the keyword `inf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionName(String);

impl ActionName {
    pub fn new(name: impl Into<String>) -> Result<Self, AstError> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(ActionName(name))
        } else {
            Err(AstError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "inf"
}

/// Synchronisation set of a parallel composition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SyncSet(BTreeSet<ActionName>);

impl SyncSet {
    pub fn new() -> Self {
        SyncSet(BTreeSet::new())
    }

    pub fn contains(&self, name: &ActionName) -> bool {
        self.0.contains(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ActionName> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<ActionName> for SyncSet {
    fn from_iter<I: IntoIterator<Item = ActionName>>(iter: I) -> Self {
        SyncSet(iter.into_iter().collect())
    }
}

impl fmt::Display for SyncSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, name) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", name)?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Process {
    /// The terminated process `0`.
    Nil,
    Var(String),
    Prefix(ActionName, Rate, Box<Process>),
    /// `P;Q`
    Seq(Box<Process>, Box<Process>),
    /// Internal choice, `P-Q`.
    IntChoice(Box<Process>, Box<Process>),
    /// External choice, `P+Q`.
    ExtChoice(Box<Process>, Box<Process>),
    /// `P*{r}Q`: left with probability `r`, right with `1-r`.
    ProbChoice(Probability, Box<Process>, Box<Process>),
    /// `P||{A}Q`
    Par(SyncSet, Box<Process>, Box<Process>),
}

impl Process {
    pub fn var(name: impl Into<String>) -> Self {
        Process::Var(name.into())
    }

    pub fn prefix(action: ActionName, rate: Rate, continuation: Process) -> Self {
        Process::Prefix(action, rate, Box::new(continuation))
    }

    pub fn seq(left: Process, right: Process) -> Self {
        Process::Seq(Box::new(left), Box::new(right))
    }

    pub fn int_choice(left: Process, right: Process) -> Self {
        Process::IntChoice(Box::new(left), Box::new(right))
    }

    pub fn ext_choice(left: Process, right: Process) -> Self {
        Process::ExtChoice(Box::new(left), Box::new(right))
    }

    pub fn prob_choice(prob: Probability, left: Process, right: Process) -> Self {
        Process::ProbChoice(prob, Box::new(left), Box::new(right))
    }

    pub fn par(sync: SyncSet, left: Process, right: Process) -> Self {
        Process::Par(sync, Box::new(left), Box::new(right))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Nil)
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil | Process::Var(_) => 1,
            Process::Prefix(_, _, p) => 1 + p.size(),
            Process::Seq(p, q)
            | Process::IntChoice(p, q)
            | Process::ExtChoice(p, q)
            | Process::ProbChoice(_, p, q)
            | Process::Par(_, p, q) => 1 + p.size() + q.size(),
        }
    }

    /// Calls `f` on every variable name occurring in the tree.
    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Process::Nil => {}
            Process::Var(name) => f(name),
            Process::Prefix(_, _, p) => p.for_each_var(f),
            Process::Seq(p, q)
            | Process::IntChoice(p, q)
            | Process::ExtChoice(p, q)
            | Process::ProbChoice(_, p, q)
            | Process::Par(_, p, q) => {
                p.for_each_var(f);
                q.for_each_var(f);
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            Process::Seq(..) => 0,
            Process::Par(..) => 1,
            Process::IntChoice(..) | Process::ExtChoice(..) | Process::ProbChoice(..) => 2,
            Process::Prefix(..) => 3,
            Process::Nil | Process::Var(_) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Process::Nil => f.write_str("0"),
            Process::Var(name) => f.write_str(name),
            Process::Prefix(action, Rate::Infinite, p) => {
                write!(f, "{}.", action)?;
                p.write_at(f, 3)
            }
            Process::Prefix(action, rate, p) => {
                write!(f, "<{},{}>.", action, rate)?;
                p.write_at(f, 3)
            }
            Process::Seq(p, q) => {
                p.write_at(f, 1)?;
                f.write_str(";")?;
                q.write_at(f, 0)
            }
            Process::Par(sync, p, q) => {
                p.write_at(f, 1)?;
                write!(f, "||{}", sync)?;
                q.write_at(f, 2)
            }
            Process::IntChoice(p, q) => {
                p.write_at(f, 2)?;
                f.write_str("-")?;
                q.write_at(f, 3)
            }
            Process::ExtChoice(p, q) => {
                p.write_at(f, 2)?;
                f.write_str("+")?;
                q.write_at(f, 3)
            }
            Process::ProbChoice(r, p, q) => {
                p.write_at(f, 2)?;
                write!(f, "*{{{}}}", r)?;
                q.write_at(f, 3)
            }
        }
    }
}

/// Prints in tool syntax with the minimal parentheses the grammar needs.
impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

pub fn pretty_print(p: &Process) -> String {
    p.to_string()
}

/// Identical trees: same constructors, names, numeric values and sync sets.
pub fn structural_equal(p: &Process, q: &Process) -> bool {
    p == q
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AstError {
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("unbound process variable `{0}`")]
    UnboundVariable(String),
}

/// Named process definitions plus the name of the process to analyse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionEnv {
    bindings: BTreeMap<String, Process>,
    root: String,
}

impl DefinitionEnv {
    /// Fails if the root or any variable referenced from a body is unbound.
    pub fn new(bindings: BTreeMap<String, Process>, root: impl Into<String>) -> Result<Self, AstError> {
        let root = root.into();
        if !bindings.contains_key(&root) {
            return Err(AstError::UnboundVariable(root));
        }
        let mut missing = None;
        for body in bindings.values() {
            body.for_each_var(&mut |name| {
                if missing.is_none() && !bindings.contains_key(name) {
                    missing = Some(name.to_string());
                }
            });
        }
        match missing {
            Some(name) => Err(AstError::UnboundVariable(name)),
            None => Ok(DefinitionEnv { bindings, root }),
        }
    }

    /// Environment with a single definition `main = p`.
    pub fn single(p: Process) -> Result<Self, AstError> {
        let mut bindings = BTreeMap::new();
        bindings.insert("main".to_string(), p);
        Self::new(bindings, "main")
    }

    pub fn with_root(mut self, root: &str) -> Result<Self, AstError> {
        if !self.bindings.contains_key(root) {
            return Err(AstError::UnboundVariable(root.to_string()));
        }
        self.root = root.to_string();
        Ok(self)
    }

    pub fn root(&self) -> &str {
        &self.root
    }

    pub fn root_process(&self) -> &Process {
        &self.bindings[&self.root]
    }

    pub fn lookup(&self, name: &str) -> Result<&Process, AstError> {
        self.bindings
            .get(name)
            .ok_or_else(|| AstError::UnboundVariable(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<&Process> {
        self.bindings.get(name)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&str, &Process)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }
}

pub fn lookup<'e>(env: &'e DefinitionEnv, name: &str) -> Result<&'e Process, AstError> {
    env.lookup(name)
}
