//! Breadth-first construction of the labelled transition system.
//!
//! Starting from the root definition, every discovered state is classified
//! and expanded by the rule layer it belongs to. Successors are reduced to
//! their canonical form and looked up by key, so a state reached twice is
//! stored once. Exploration stops at the fixed point where the frontier is
//! empty, or when the state limit is hit.

use std::collections::{HashMap, VecDeque};

use crate::ast::{DefinitionEnv, Process};
use crate::canon::{CanonicalKey, Canonicalizer};
use crate::semantics::{check_guarded, NodeKind, Semantics, SemanticsError, TransitionLabel, DEFAULT_MAX_UNFOLD};

/// How states are identified when deduplicating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StateIdentity {
    /// By canonical form.
    #[default]
    Canonical,
    /// By the printed term exactly as produced by the rules.
    Syntactic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildConfig {
    pub max_states: usize,
    pub max_unfold: usize,
    pub identity: StateIdentity,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            max_states: 100_000,
            max_unfold: DEFAULT_MAX_UNFOLD,
            identity: StateIdentity::Canonical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtsNode {
    pub id: usize,
    pub process: Process,
    pub key: CanonicalKey,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtsEdge {
    pub source: usize,
    pub target: usize,
    pub label: TransitionLabel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lts {
    pub nodes: Vec<LtsNode>,
    pub edges: Vec<LtsEdge>,
    /// Set when the state limit cut exploration short.
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LtsStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub deadlock_count: usize,
    pub success_count: usize,
    pub truncated: bool,
}

impl Lts {
    pub const ROOT: usize = 0;

    pub fn root(&self) -> &LtsNode {
        &self.nodes[Self::ROOT]
    }

    pub fn outgoing(&self, id: usize) -> impl Iterator<Item = &LtsEdge> {
        self.edges.iter().filter(move |e| e.source == id)
    }

    pub fn stats(&self) -> LtsStats {
        let count = |kind| self.nodes.iter().filter(|n| n.kind == kind).count();
        LtsStats {
            node_count: self.nodes.len(),
            edge_count: self.edges.len(),
            deadlock_count: count(NodeKind::Deadlock),
            success_count: count(NodeKind::Success),
            truncated: self.truncated,
        }
    }
}

pub fn stats(lts: &Lts) -> LtsStats {
    lts.stats()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("invalid build configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InsertError {
    #[error("state limit reached")]
    StateLimit,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

pub fn build_lts(env: &DefinitionEnv, config: BuildConfig) -> Result<Lts, BuildError> {
    LtsBuilder::new(env, config)?.run()
}

pub struct LtsBuilder<'e> {
    semantics: Semantics<'e>,
    canon: Canonicalizer<'e>,
    config: BuildConfig,
    lts: Lts,
    index: HashMap<CanonicalKey, usize>,
    frontier: VecDeque<(usize, Vec<(TransitionLabel, Process)>)>,
}

impl<'e> LtsBuilder<'e> {
    pub fn new(env: &'e DefinitionEnv, config: BuildConfig) -> Result<Self, BuildError> {
        if config.max_states == 0 {
            return Err(BuildError::InvalidConfig("max_states must be positive"));
        }
        if config.max_unfold == 0 {
            return Err(BuildError::InvalidConfig("max_unfold must be positive"));
        }
        Ok(LtsBuilder {
            semantics: Semantics::new(env, config.max_unfold),
            canon: Canonicalizer::new(env, config.max_unfold),
            config,
            lts: Lts {
                nodes: Vec::new(),
                edges: Vec::new(),
                truncated: false,
            },
            index: HashMap::new(),
            frontier: VecDeque::new(),
        })
    }

    pub fn lts(&self) -> &Lts {
        &self.lts
    }

    /// Looks `p` up by key, adding it as a new classified state if absent.
    /// Returns the node id and whether it was newly added.
    pub fn find_or_insert(&mut self, p: Process) -> Result<(usize, bool), InsertError> {
        let process = match self.config.identity {
            StateIdentity::Canonical => self.canon.canonicalize(&p),
            StateIdentity::Syntactic => p,
        };
        let key = CanonicalKey::syntactic(&process);
        if let Some(&id) = self.index.get(&key) {
            return Ok((id, false));
        }
        if self.lts.nodes.len() >= self.config.max_states {
            return Err(InsertError::StateLimit);
        }
        let (kind, moves) = self.semantics.step(&process)?;
        let id = self.lts.nodes.len();
        self.index.insert(key.clone(), id);
        self.lts.nodes.push(LtsNode { id, process, key, kind });
        self.frontier.push_back((id, moves));
        Ok((id, true))
    }

    pub fn run(mut self) -> Result<Lts, BuildError> {
        check_guarded(self.semantics.env())?;
        let root = Process::var(self.semantics.env().root());
        match self.find_or_insert(root) {
            Ok(_) => {}
            Err(InsertError::Semantics(e)) => return Err(e.into()),
            Err(InsertError::StateLimit) => unreachable!("max_states is positive"),
        }
        while let Some((source, moves)) = self.frontier.pop_front() {
            let mut edges: Vec<LtsEdge> = Vec::new();
            for (label, successor) in moves {
                let target = match self.find_or_insert(successor) {
                    Ok((id, _)) => id,
                    Err(InsertError::StateLimit) => {
                        self.lts.truncated = true;
                        continue;
                    }
                    Err(InsertError::Semantics(e)) => return Err(e.into()),
                };
                add_edge(&mut edges, LtsEdge { source, target, label });
            }
            self.lts.edges.extend(edges);
        }
        Ok(self.lts)
    }
}

/// Probabilistic edges into the same target are merged by adding their
/// probabilities; any other repeated edge is dropped.
fn add_edge(edges: &mut Vec<LtsEdge>, edge: LtsEdge) {
    if let TransitionLabel::Prob(p) = &edge.label {
        for existing in edges.iter_mut().filter(|e| e.target == edge.target) {
            if let TransitionLabel::Prob(q) = &existing.label {
                let sum = q.checked_add(p).expect("branch probabilities of one node add up to at most 1");
                existing.label = TransitionLabel::Prob(sum);
                return;
            }
        }
    } else if edges.iter().any(|e| e.target == edge.target && e.label == edge.label) {
        return;
    }
    edges.push(edge);
}
