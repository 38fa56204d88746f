//! Generators and reference checkers shared by the integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use proptest::prelude::*;
use proptest::sample::subsequence;
use rosa_core::{
    parse_program, ActionName, DefinitionEnv, Lts, NodeKind, Probability, Process, Rate, SyncSet, TransitionLabel,
};

pub const ACTIONS: [&str; 3] = ["a", "b", "c"];
pub const VARS: [&str; 3] = ["P", "Q", "Xy"];

/// Recursive definitions that random guarded terms may refer to.
pub const GUARDED_DEFS: &str = "X = <a,2>.X\nY = b.(X*{0.5}(c.Y-0))";

pub fn action() -> impl Strategy<Value = ActionName> {
    prop::sample::select(ACTIONS.to_vec()).prop_map(|a| ActionName::new(a).unwrap())
}

pub fn rate() -> impl Strategy<Value = Rate> {
    prop_oneof![
        1 => Just(Rate::Infinite),
        3 => (1u32..=400).prop_map(|n| Rate::finite(f64::from(n) / 4.0).unwrap()),
    ]
}

pub fn probability() -> impl Strategy<Value = Probability> {
    (0u32..=20).prop_map(|n| Probability::parse(&(f64::from(n) / 20.0).to_string()).unwrap())
}

/// Probability strictly between 0 and 1.
pub fn proper_probability() -> impl Strategy<Value = Probability> {
    (1u32..20).prop_map(|n| Probability::parse(&(f64::from(n) / 20.0).to_string()).unwrap())
}

pub fn sync_set() -> impl Strategy<Value = SyncSet> {
    subsequence(ACTIONS.to_vec(), 0..=ACTIONS.len())
        .prop_map(|names| names.into_iter().map(|a| ActionName::new(a).unwrap()).collect())
}

fn combine(
    inner: impl Strategy<Value = Process> + Clone + 'static,
    prob: impl Strategy<Value = Probability> + 'static,
) -> impl Strategy<Value = Process> {
    prop_oneof![
        (action(), rate(), inner.clone()).prop_map(|(a, r, p)| Process::prefix(a, r, p)),
        (inner.clone(), inner.clone()).prop_map(|(p, q)| Process::seq(p, q)),
        (inner.clone(), inner.clone()).prop_map(|(p, q)| Process::int_choice(p, q)),
        (inner.clone(), inner.clone()).prop_map(|(p, q)| Process::ext_choice(p, q)),
        (prob, inner.clone(), inner.clone()).prop_map(|(r, p, q)| Process::prob_choice(r, p, q)),
        (sync_set(), inner.clone(), inner).prop_map(|(a, p, q)| Process::par(a, p, q)),
    ]
}

/// Arbitrary syntax trees over free variables, for syntax-level checks.
pub fn any_process() -> impl Strategy<Value = Process> {
    let leaf = prop_oneof![
        Just(Process::Nil),
        prop::sample::select(VARS.to_vec()).prop_map(Process::var),
    ];
    leaf.prop_recursive(6, 64, 2, |inner| combine(inner, probability()))
}

/// Terms whose variables only occur under a prefix and refer to
/// [`GUARDED_DEFS`], with depth at most `depth`.
pub fn guarded_process(depth: u32) -> impl Strategy<Value = Process> {
    let leaf = prop_oneof![
        2 => Just(Process::Nil),
        2 => (action(), rate()).prop_map(|(a, r)| Process::prefix(a, r, Process::Nil)),
        1 => (action(), rate(), prop::sample::select(vec!["X", "Y"]))
            .prop_map(|(a, r, v)| Process::prefix(a, r, Process::var(v))),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| combine(inner, probability()))
}

/// Guarded terms that contain at least one probabilistic choice at the top.
pub fn probabilistic_process(depth: u32) -> impl Strategy<Value = Process> {
    (proper_probability(), guarded_process(depth), guarded_process(depth), sync_set(), guarded_process(depth))
        .prop_map(|(r, p, q, a, other)| Process::par(a, Process::prob_choice(r, p, q), other))
}

/// [`GUARDED_DEFS`] plus `main = p` as the root.
pub fn env_with(p: Process) -> DefinitionEnv {
    let defs = parse_program(GUARDED_DEFS).unwrap();
    let mut bindings: BTreeMap<String, Process> =
        defs.bindings().map(|(name, body)| (name.to_string(), body.clone())).collect();
    bindings.insert("main".to_string(), p);
    DefinitionEnv::new(bindings, "main").unwrap()
}

fn action_layer(kind: NodeKind) -> bool {
    matches!(kind, NodeKind::ActionEnabled | NodeKind::Deadlock | NodeKind::Success)
}

type Dist = Vec<(usize, f64)>;
type Lifted = Vec<Vec<(usize, i64)>>;

/// Probabilistic strong bisimilarity of the two roots, where internal and
/// probabilistic steps are folded into the action they lead to.
///
/// Every node is mapped to the set of distributions over action-layer nodes
/// it can resolve to. Action-layer nodes are then split by kind and by the
/// distributions their action edges reach, lifted to the current classes,
/// until the partition is stable.
pub fn bisimilar(left: &Lts, right: &Lts) -> bool {
    let offset = left.nodes.len();
    let kinds: Vec<NodeKind> = left.nodes.iter().chain(&right.nodes).map(|n| n.kind).collect();
    let mut out: Vec<Vec<(String, usize, f64)>> = vec![Vec::new(); kinds.len()];
    for (base, lts) in [(0, left), (offset, right)] {
        for e in &lts.edges {
            let (label, weight) = match &e.label {
                TransitionLabel::Prob(p) => (String::new(), p.to_f64()),
                other => (other.to_string(), 1.0),
            };
            out[base + e.source].push((label, base + e.target, weight));
        }
    }

    let mut memo: HashMap<usize, Vec<Dist>> = HashMap::new();
    let mut resolving = HashSet::new();
    for s in 0..kinds.len() {
        resolutions(s, &kinds, &out, &mut memo, &mut resolving);
    }

    let layer: Vec<usize> = (0..kinds.len()).filter(|&s| action_layer(kinds[s])).collect();
    let mut class: Vec<usize> = kinds.iter().map(|k| *k as usize).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<(usize, Vec<(String, Lifted)>), usize> = HashMap::new();
        let mut next = class.clone();
        for &s in &layer {
            let mut signature: Vec<(String, Lifted)> = out[s]
                .iter()
                .map(|(label, t, _)| (label.clone(), lift(&memo[t], &class)))
                .collect();
            signature.sort();
            signature.dedup();
            let fresh = ids.len();
            next[s] = *ids.entry((class[s], signature)).or_insert(fresh);
        }
        class = next;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }
    lift(&memo[&Lts::ROOT], &class) == lift(&memo[&offset], &class)
}

fn resolutions(
    s: usize,
    kinds: &[NodeKind],
    out: &[Vec<(String, usize, f64)>],
    memo: &mut HashMap<usize, Vec<Dist>>,
    resolving: &mut HashSet<usize>,
) -> Vec<Dist> {
    if let Some(d) = memo.get(&s) {
        return d.clone();
    }
    assert!(resolving.insert(s), "cycle of internal steps through node {}", s);
    let result = match kinds[s] {
        NodeKind::NdUnstable => {
            let mut all = Vec::new();
            for (_, t, _) in &out[s] {
                all.extend(resolutions(*t, kinds, out, memo, resolving));
            }
            all
        }
        NodeKind::ProbUnstable => {
            let mut partial: Vec<Dist> = vec![Vec::new()];
            for (_, t, p) in &out[s] {
                let options = resolutions(*t, kinds, out, memo, resolving);
                partial = partial
                    .iter()
                    .flat_map(|d| {
                        options.iter().map(move |o| {
                            let mut merged = d.clone();
                            merged.extend(o.iter().map(|(n, q)| (*n, q * p)));
                            merged
                        })
                    })
                    .collect();
            }
            partial
        }
        _ => vec![vec![(s, 1.0)]],
    };
    resolving.remove(&s);
    memo.insert(s, result.clone());
    result
}

fn lift(dists: &[Dist], class: &[usize]) -> Lifted {
    let mut lifted: Lifted = dists
        .iter()
        .map(|d| {
            let mut per_class: BTreeMap<usize, f64> = BTreeMap::new();
            for (n, p) in d {
                *per_class.entry(class[*n]).or_default() += p;
            }
            per_class.into_iter().map(|(c, p)| (c, (p * 1e9).round() as i64)).collect()
        })
        .collect();
    lifted.sort();
    lifted.dedup();
    lifted
}

/// Number of internal choices the non-deterministic layer can resolve in `p`.
pub fn active_internal_choices(p: &Process, env: &DefinitionEnv) -> usize {
    fn go(p: &Process, env: &DefinitionEnv, depth: usize) -> usize {
        assert!(depth < 64, "unguarded unfolding");
        match p {
            Process::Nil | Process::Prefix(..) => 0,
            Process::IntChoice(..) => 1,
            Process::ExtChoice(l, r) | Process::ProbChoice(_, l, r) | Process::Par(_, l, r) => {
                go(l, env, depth) + go(r, env, depth)
            }
            Process::Seq(l, r) => {
                if rosa_core::canonicalize(l, env).is_nil() {
                    go(r, env, depth)
                } else {
                    go(l, env, depth)
                }
            }
            Process::Var(name) => go(env.get(name).expect("bound variable"), env, depth + 1),
        }
    }
    go(p, env, 0)
}

/// Terms with no unresolved choice in active position.
pub fn stable_process(depth: u32) -> impl Strategy<Value = Process> {
    let leaf = prop_oneof![
        Just(Process::Nil),
        (action(), rate()).prop_map(|(a, r)| Process::prefix(a, r, Process::Nil)),
    ];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (action(), rate(), guarded_process(2)).prop_map(|(a, r, p)| Process::prefix(a, r, p)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Process::ext_choice(p, q)),
            (sync_set(), inner.clone(), inner).prop_map(|(a, p, q)| Process::par(a, p, q)),
        ]
    })
}
