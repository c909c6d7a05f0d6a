//! Finitely presented trees over finite sequences of naturals.
//!
//! A tree is either an explicit finite set of nodes or a regular tree: the
//! set of label sequences a deterministic guarded automaton can read, every
//! state accepting. Regular trees make membership, extendibility and the
//! set of infinite paths exactly computable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type StateId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Guard {
    Exact(u64),
    Range(u64, u64),
    AtLeast(u64),
}

impl Guard {
    pub fn matches(&self, label: u64) -> bool {
        match *self {
            Guard::Exact(n) => label == n,
            Guard::Range(lo, hi) => lo <= label && label <= hi,
            Guard::AtLeast(lo) => label >= lo,
        }
    }

    pub fn lo(&self) -> u64 {
        match *self {
            Guard::Exact(n) => n,
            Guard::Range(lo, _) | Guard::AtLeast(lo) => lo,
        }
    }

    /// Largest matching label, `None` when unbounded.
    pub fn hi(&self) -> Option<u64> {
        match *self {
            Guard::Exact(n) => Some(n),
            Guard::Range(_, hi) => Some(hi),
            Guard::AtLeast(_) => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.hi().is_some()
    }

    fn overlaps(&self, other: &Guard) -> bool {
        let hi_a = self.hi().unwrap_or(u64::MAX);
        let hi_b = other.hi().unwrap_or(u64::MAX);
        self.lo() <= hi_b && other.lo() <= hi_a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: StateId,
    pub guard: Guard,
    pub to: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("invalid tree: {0}")]
    Invalid(String),
    #[error("{0:?} is not a node of the tree")]
    NotANode(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "lowercase")]
enum TreeJson {
    Explicit { nodes: Vec<Vec<u64>> },
    Regular { states: Vec<StateId>, start: StateId, edges: Vec<Edge> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    Explicit(BTreeSet<Vec<u64>>),
    Regular(Automaton),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Automaton {
    states: Vec<StateId>,
    start: StateId,
    /// Outgoing edges per state, sorted by guard lower bound.
    out: BTreeMap<StateId, Vec<Edge>>,
    /// States from which an infinite run exists.
    productive: BTreeSet<StateId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct TreeSpec {
    repr: Repr,
}

impl TryFrom<TreeJson> for TreeSpec {
    type Error = TreeError;

    fn try_from(json: TreeJson) -> Result<Self, TreeError> {
        match json {
            TreeJson::Explicit { nodes } => TreeSpec::explicit(nodes),
            TreeJson::Regular { states, start, edges } => TreeSpec::regular(states, start, edges),
        }
    }
}

impl From<TreeSpec> for TreeJson {
    fn from(t: TreeSpec) -> Self {
        match t.repr {
            Repr::Explicit(nodes) => TreeJson::Explicit { nodes: nodes.into_iter().collect() },
            Repr::Regular(a) => {
                TreeJson::Regular { states: a.states, start: a.start, edges: a.out.into_values().flatten().collect() }
            }
        }
    }
}

/// Child labels of a node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Children {
    Finite(Vec<u64>),
    /// Every label from `from` on is a child, plus the finitely many `listed`
    /// labels below it.
    Infinite {
        listed: Vec<u64>,
        from: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Level {
    Nodes(Vec<Vec<u64>>),
    Overflow,
}

/// An eventually periodic infinite sequence `stem cycle cycle ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathDesc {
    pub stem: Vec<u64>,
    pub cycle: Vec<u64>,
}

impl PathDesc {
    pub fn new(stem: Vec<u64>, cycle: Vec<u64>) -> Self {
        assert!(!cycle.is_empty(), "a path description needs a nonempty cycle");
        PathDesc { stem, cycle }
    }

    pub fn constant(x: u64) -> Self {
        PathDesc::new(Vec::new(), vec![x])
    }

    pub fn at(&self, i: usize) -> u64 {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<u64> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Shortest stem and primitive cycle describing the same sequence.
    pub fn canonical(&self) -> Self {
        let mut cycle = self.cycle.clone();
        let n = cycle.len();
        if let Some(p) = (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| cycle[i] == cycle[i % p])) {
            cycle.truncate(p);
        }
        let mut stem = self.stem.clone();
        while stem.last().is_some_and(|x| Some(x) == cycle.last()) {
            stem.pop();
            cycle.rotate_right(1);
        }
        PathDesc { stem, cycle }
    }
}

impl fmt::Display for PathDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({})({})^w", show(&self.stem), show(&self.cycle))
    }
}

/// Parses `(stem)(cycle)^w`, or `(cycle)^w` for an empty stem.
impl std::str::FromStr for PathDesc {
    type Err = TreeError;

    fn from_str(text: &str) -> Result<Self, TreeError> {
        let bad = || TreeError::Invalid(format!("cannot read path {text:?}; expected (stem)(cycle)^w"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact.strip_suffix("^w").or_else(|| compact.strip_suffix("^ω")).ok_or_else(bad)?;
        let mut groups = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let inner = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = inner.find(')').ok_or_else(bad)?;
            let items = &inner[..close];
            let values = if items.is_empty() {
                Vec::new()
            } else {
                items.split(',').map(|x| x.parse::<u64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?
            };
            groups.push(values);
            rest = &inner[close + 1..];
        }
        let (stem, cycle) = match groups.len() {
            1 => (Vec::new(), groups.pop().unwrap()),
            2 => {
                let cycle = groups.pop().unwrap();
                (groups.pop().unwrap(), cycle)
            }
            _ => return Err(bad()),
        };
        if cycle.is_empty() {
            return Err(bad());
        }
        Ok(PathDesc::new(stem, cycle))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Paths {
    Finite(Vec<PathDesc>),
    InfinitelyMany,
    /// An unbounded guard lies on a cycle: infinitely many paths, with
    /// infinite branching recurring along them.
    Unbounded,
}

impl TreeSpec {
    /// A finite tree from its nodes. The set must contain the empty sequence
    /// and be closed under prefixes.
    pub fn explicit<I>(nodes: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let nodes: BTreeSet<Vec<u64>> = nodes.into_iter().collect();
        if !nodes.contains(&Vec::new()) {
            return Err(TreeError::Invalid("the empty sequence is missing".into()));
        }
        for node in &nodes {
            if let Some((_, parent)) = node.split_last() {
                if !nodes.contains(parent) {
                    return Err(TreeError::Invalid(format!("{node:?} lacks its parent")));
                }
            }
        }
        Ok(TreeSpec { repr: Repr::Explicit(nodes) })
    }

    pub fn regular<I>(states: Vec<StateId>, start: StateId, edges: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let known: BTreeSet<StateId> = states.iter().copied().collect();
        if known.len() != states.len() {
            return Err(TreeError::Invalid("duplicate state".into()));
        }
        if !known.contains(&start) {
            return Err(TreeError::Invalid(format!("unknown start state {start}")));
        }
        let mut out: BTreeMap<StateId, Vec<Edge>> = known.iter().map(|&s| (s, Vec::new())).collect();
        for e in edges {
            if !known.contains(&e.from) || !known.contains(&e.to) {
                return Err(TreeError::Invalid(format!("edge {e:?} names an unknown state")));
            }
            if let Guard::Range(lo, hi) = e.guard {
                if lo > hi {
                    return Err(TreeError::Invalid(format!("empty range {lo}..{hi}")));
                }
            }
            let list = out.get_mut(&e.from).expect("known state");
            if list.iter().any(|other| other.guard.overlaps(&e.guard)) {
                return Err(TreeError::Invalid(format!("guards at state {} overlap", e.from)));
            }
            list.push(e);
        }
        for list in out.values_mut() {
            list.sort_by_key(|e| e.guard.lo());
        }
        let productive = productive_states(&out);
        Ok(TreeSpec { repr: Repr::Regular(Automaton { states, start, out, productive }) })
    }

    pub fn from_json(text: &str) -> Result<Self, TreeError> {
        serde_json::from_str(text).map_err(|e| TreeError::Invalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serialization cannot fail")
    }

    pub fn is_regular(&self) -> bool {
        matches!(self.repr, Repr::Regular(_))
    }

    fn state_of(&self, a: &Automaton, node: &[u64]) -> Option<StateId> {
        let mut state = a.start;
        for &label in node {
            state = a.out[&state].iter().find(|e| e.guard.matches(label))?.to;
        }
        Some(state)
    }

    pub fn member(&self, node: &[u64]) -> bool {
        match &self.repr {
            Repr::Explicit(nodes) => nodes.contains(node),
            Repr::Regular(a) => self.state_of(a, node).is_some(),
        }
    }

    pub fn children(&self, node: &[u64]) -> Result<Children, TreeError> {
        let not_a_node = || TreeError::NotANode(node.to_vec());
        match &self.repr {
            Repr::Explicit(nodes) => {
                if !nodes.contains(node) {
                    return Err(not_a_node());
                }
                let mut start = node.to_vec();
                start.push(0);
                let labels = nodes
                    .range(start..)
                    .take_while(|n| n.len() > node.len() && n.starts_with(node))
                    .filter(|n| n.len() == node.len() + 1)
                    .map(|n| n[node.len()])
                    .collect();
                Ok(Children::Finite(labels))
            }
            Repr::Regular(a) => {
                let state = self.state_of(a, node).ok_or_else(not_a_node)?;
                let mut listed = Vec::new();
                for e in &a.out[&state] {
                    match e.guard.hi() {
                        Some(hi) => listed.extend(e.guard.lo()..=hi),
                        None => return Ok(Children::Infinite { listed, from: e.guard.lo() }),
                    }
                }
                Ok(Children::Finite(listed))
            }
        }
    }

    /// All nodes of length `d` in lexicographic order, or `Overflow` when the
    /// level is infinite or wider than `width_cap`.
    pub fn nodes_at_depth(&self, d: usize, width_cap: usize) -> Level {
        let mut level = vec![Vec::new()];
        for _ in 0..d {
            let mut next = Vec::new();
            for node in &level {
                match self.children(node).expect("levels consist of nodes") {
                    Children::Finite(labels) => {
                        for l in labels {
                            let mut child = node.clone();
                            child.push(l);
                            next.push(child);
                        }
                    }
                    Children::Infinite { .. } => return Level::Overflow,
                }
                if next.len() > width_cap {
                    return Level::Overflow;
                }
            }
            level = next;
        }
        Level::Nodes(level)
    }

    /// Nodes of length `d` all of whose labels are at most `max_label`.
    pub fn nodes_at_depth_upto(&self, d: usize, max_label: u64) -> Vec<Vec<u64>> {
        let mut level = vec![Vec::new()];
        for _ in 0..d {
            let mut next = Vec::new();
            for node in &level {
                let labels: Vec<u64> = match self.children(node).expect("levels consist of nodes") {
                    Children::Finite(labels) => labels.into_iter().filter(|&l| l <= max_label).collect(),
                    Children::Infinite { listed, from } => {
                        listed.into_iter().filter(|&l| l <= max_label).chain(from..=max_label).collect()
                    }
                };
                for l in labels {
                    let mut child = node.clone();
                    child.push(l);
                    next.push(child);
                }
            }
            level = next;
        }
        level
    }

    /// Whether the tree has infinitely many nodes of length `d`.
    pub fn level_is_infinite(&self, d: usize) -> bool {
        let a = match &self.repr {
            Repr::Explicit(_) => return false,
            Repr::Regular(a) => a,
        };
        // alive[r]: states from which a run of r more labels exists.
        let mut alive: Vec<BTreeSet<StateId>> = vec![a.states.iter().copied().collect()];
        for r in 1..=d {
            let prev = &alive[r - 1];
            let next = a.states.iter().copied().filter(|s| a.out[s].iter().any(|e| prev.contains(&e.to))).collect();
            alive.push(next);
        }
        let mut frontier = BTreeSet::from([a.start]);
        for k in 0..d {
            let rest = d - k - 1;
            if frontier.iter().any(|s| a.out[s].iter().any(|e| !e.guard.is_bounded() && alive[rest].contains(&e.to))) {
                return true;
            }
            frontier = frontier.iter().flat_map(|s| a.out[s].iter().map(|e| e.to)).collect();
        }
        false
    }

    /// Whether the infinite sequence `path` runs through the tree.
    pub fn contains_path(&self, path: &PathDesc) -> bool {
        let a = match &self.repr {
            Repr::Explicit(_) => return false,
            Repr::Regular(a) => a,
        };
        let step = |state: StateId, label: u64| a.out[&state].iter().find(|e| e.guard.matches(label)).map(|e| e.to);
        let mut state = a.start;
        for &l in &path.stem {
            match step(state, l) {
                Some(s) => state = s,
                None => return false,
            }
        }
        let mut seen = BTreeSet::new();
        while seen.insert(state) {
            for &l in &path.cycle {
                match step(state, l) {
                    Some(s) => state = s,
                    None => return false,
                }
            }
        }
        true
    }

    /// Whether `node` lies on an infinite path. Exact for both variants: an
    /// explicit tree is finite, and a regular node extends iff its state
    /// reaches a cycle.
    pub fn ext(&self, node: &[u64]) -> Result<bool, TreeError> {
        match &self.repr {
            Repr::Explicit(nodes) if nodes.contains(node) => Ok(false),
            Repr::Explicit(_) => Err(TreeError::NotANode(node.to_vec())),
            Repr::Regular(a) => {
                let state = self.state_of(a, node).ok_or_else(|| TreeError::NotANode(node.to_vec()))?;
                Ok(a.productive.contains(&state))
            }
        }
    }

    /// Recursively bounded: no node has infinitely many children.
    pub fn is_rb(&self) -> bool {
        match &self.repr {
            Repr::Explicit(_) => true,
            Repr::Regular(a) => reachable(a, a.start).iter().all(|s| a.out[s].iter().all(|e| e.guard.is_bounded())),
        }
    }

    /// Lengths of the longest node, `None` if the tree is infinite.
    pub fn height(&self) -> Option<usize> {
        match &self.repr {
            Repr::Explicit(nodes) => nodes.iter().map(Vec::len).max(),
            Repr::Regular(a) => {
                let live = reachable(a, a.start);
                let cyclic = live.iter().any(|s| a.productive.contains(s));
                if cyclic {
                    return None;
                }
                // Acyclic: longest path in the DAG of reachable states.
                let mut memo = BTreeMap::new();
                Some(longest(a, a.start, &mut memo))
            }
        }
    }

    /// The infinite paths through the tree.
    pub fn paths(&self) -> Paths {
        let a = match &self.repr {
            Repr::Explicit(_) => return Paths::Finite(Vec::new()),
            Repr::Regular(a) => a,
        };
        if !a.productive.contains(&a.start) {
            return Paths::Finite(Vec::new());
        }
        // Only edges into productive states continue infinite paths.
        let live: BTreeSet<StateId> = reachable_by(a, a.start, |e| a.productive.contains(&e.to));
        let live_edges = |s: StateId| a.out[&s].iter().filter(|e| a.productive.contains(&e.to));
        let on_cycle = |e: &Edge| reachable_by(a, e.to, |f| a.productive.contains(&f.to)).contains(&e.from);
        let mut branching_cyclic = false;
        let mut infinite_labels = false;
        for &s in &live {
            for e in live_edges(s) {
                if !e.guard.is_bounded() {
                    if on_cycle(e) {
                        return Paths::Unbounded;
                    }
                    infinite_labels = true;
                }
            }
        }
        if infinite_labels {
            return Paths::InfinitelyMany;
        }
        for &c in live.iter().filter(|&&s| on_some_cycle(a, s)) {
            for s in reachable_by(a, c, |e| a.productive.contains(&e.to)) {
                let options: u64 = live_edges(s).map(|e| e.guard.hi().unwrap() - e.guard.lo() + 1).sum();
                if options >= 2 {
                    branching_cyclic = true;
                }
            }
        }
        if branching_cyclic {
            return Paths::InfinitelyMany;
        }
        let mut found = BTreeSet::new();
        let mut states = Vec::new();
        let mut labels = Vec::new();
        collect_paths(a, a.start, &mut states, &mut labels, &mut found);
        Paths::Finite(found.into_iter().collect())
    }
}

fn on_some_cycle(a: &Automaton, s: StateId) -> bool {
    a.out[&s]
        .iter()
        .filter(|e| a.productive.contains(&e.to))
        .any(|e| reachable_by(a, e.to, |f| a.productive.contains(&f.to)).contains(&s))
}

fn collect_paths(
    a: &Automaton,
    state: StateId,
    states: &mut Vec<StateId>,
    labels: &mut Vec<u64>,
    found: &mut BTreeSet<PathDesc>,
) {
    if let Some(pos) = states.iter().position(|&s| s == state) {
        found.insert(PathDesc::new(labels[..pos].to_vec(), labels[pos..].to_vec()).canonical());
        return;
    }
    states.push(state);
    for e in a.out[&state].iter().filter(|e| a.productive.contains(&e.to)) {
        let hi = e.guard.hi().expect("unbounded guards are handled before");
        for label in e.guard.lo()..=hi {
            labels.push(label);
            collect_paths(a, e.to, states, labels, found);
            labels.pop();
        }
    }
    states.pop();
}

fn reachable(a: &Automaton, from: StateId) -> BTreeSet<StateId> {
    reachable_by(a, from, |_| true)
}

fn reachable_by(a: &Automaton, from: StateId, keep: impl Fn(&Edge) -> bool) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for e in a.out[&s].iter().filter(|e| keep(e)) {
            if seen.insert(e.to) {
                queue.push_back(e.to);
            }
        }
    }
    seen
}

// Greatest fixpoint: states with an edge into the set.
fn productive_states(out: &BTreeMap<StateId, Vec<Edge>>) -> BTreeSet<StateId> {
    let mut set: BTreeSet<StateId> = out.keys().copied().collect();
    loop {
        let next: BTreeSet<StateId> =
            set.iter().copied().filter(|s| out[s].iter().any(|e| set.contains(&e.to))).collect();
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

fn longest(a: &Automaton, s: StateId, memo: &mut BTreeMap<StateId, usize>) -> usize {
    if let Some(&d) = memo.get(&s) {
        return d;
    }
    let d = a.out[&s].iter().map(|e| 1 + longest(a, e.to, memo)).max().unwrap_or(0);
    memo.insert(s, d);
    d
}

/// A few standard trees.
pub mod examples {
    use super::*;

    fn edge(from: StateId, guard: Guard, to: StateId) -> Edge {
        Edge { from, guard, to }
    }

    /// Every finite sequence over `{0, 1}`.
    pub fn binary() -> TreeSpec {
        TreeSpec::regular(vec![0], 0, [edge(0, Guard::Range(0, 1), 0)]).unwrap()
    }

    /// The single path `0^ω` and its prefixes.
    pub fn only_zeros() -> TreeSpec {
        TreeSpec::regular(vec![0], 0, [edge(0, Guard::Exact(0), 0)]).unwrap()
    }

    /// Root with a child for every label, each followed by zeros.
    pub fn unbounded_root() -> TreeSpec {
        TreeSpec::regular(vec![0, 1], 0, [edge(0, Guard::AtLeast(0), 1), edge(1, Guard::Exact(0), 1)]).unwrap()
    }

    /// Every finite sequence of naturals.
    pub fn full() -> TreeSpec {
        TreeSpec::regular(vec![0], 0, [edge(0, Guard::AtLeast(0), 0)]).unwrap()
    }

    pub fn single_leaf() -> TreeSpec {
        TreeSpec::explicit([vec![], vec![0]]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    fn edge(from: StateId, guard: Guard, to: StateId) -> Edge {
        Edge { from, guard, to }
    }

    #[test]
    fn membership() {
        let t = binary();
        assert!(t.member(&[]));
        assert!(t.member(&[0, 1, 1, 0]));
        assert!(!t.member(&[0, 2]));
        assert!(single_leaf().member(&[]));
        assert!(!single_leaf().member(&[1]));
    }

    #[test]
    fn children_examples() {
        assert_eq!(binary().children(&[1, 0]).unwrap(), Children::Finite(vec![0, 1]));
        assert_eq!(unbounded_root().children(&[]).unwrap(), Children::Infinite { listed: vec![], from: 0 });
        assert_eq!(single_leaf().children(&[0]).unwrap(), Children::Finite(vec![]));
        assert_eq!(single_leaf().children(&[1]), Err(TreeError::NotANode(vec![1])));
    }

    #[test]
    fn levels() {
        match binary().nodes_at_depth(3, 100) {
            Level::Nodes(n) => assert_eq!(n.len(), 8),
            Level::Overflow => panic!(),
        }
        assert_eq!(single_leaf().nodes_at_depth(2, 100), Level::Nodes(vec![]));
        assert_eq!(unbounded_root().nodes_at_depth(1, 100), Level::Overflow);
        assert_eq!(binary().nodes_at_depth(4, 10), Level::Overflow);
    }

    #[test]
    fn extendibility() {
        assert!(binary().ext(&[1, 1, 0]).unwrap());
        assert!(!single_leaf().ext(&[0]).unwrap());
        assert!(only_zeros().ext(&[0, 0]).unwrap());
        let dead_end = TreeSpec::regular(
            vec![0, 1, 2],
            0,
            [edge(0, Guard::Exact(0), 0), edge(0, Guard::Exact(1), 1), edge(1, Guard::Range(0, 3), 2)],
        )
        .unwrap();
        assert!(!dead_end.ext(&[0, 1]).unwrap());
        assert!(!dead_end.ext(&[1, 2]).unwrap());
        assert!(dead_end.ext(&[0, 0]).unwrap());
        assert_eq!(dead_end.paths(), Paths::Finite(vec![PathDesc::constant(0)]));
    }

    #[test]
    fn path_sets() {
        assert_eq!(only_zeros().paths(), Paths::Finite(vec![PathDesc::constant(0)]));
        assert_eq!(binary().paths(), Paths::InfinitelyMany);
        assert_eq!(single_leaf().paths(), Paths::Finite(vec![]));
        assert_eq!(unbounded_root().paths(), Paths::InfinitelyMany);
        assert_eq!(full().paths(), Paths::Unbounded);
        // Two branches at the root, then (1 2)^ω and 3^ω.
        let two = TreeSpec::regular(
            vec![0, 1, 2, 3],
            0,
            [
                edge(0, Guard::Exact(0), 1),
                edge(0, Guard::Exact(5), 3),
                edge(1, Guard::Exact(1), 2),
                edge(2, Guard::Exact(2), 1),
                edge(3, Guard::Exact(3), 3),
            ],
        )
        .unwrap();
        assert_eq!(
            two.paths(),
            Paths::Finite(vec![PathDesc::new(vec![0], vec![1, 2]), PathDesc::new(vec![5], vec![3])])
        );
    }

    #[test]
    fn branching_after_a_cycle_gives_infinitely_many() {
        // 0^n 1 1 1 ... for every n, plus 0^ω.
        let t = TreeSpec::regular(
            vec![0, 1],
            0,
            [edge(0, Guard::Exact(0), 0), edge(0, Guard::Exact(1), 1), edge(1, Guard::Exact(1), 1)],
        )
        .unwrap();
        assert_eq!(t.paths(), Paths::InfinitelyMany);
    }

    #[test]
    fn canonical_descriptions() {
        let p = PathDesc::new(vec![1, 0, 1], vec![0, 1, 0, 1]).canonical();
        assert_eq!(p, PathDesc::new(vec![], vec![1, 0]));
        assert_eq!(p.prefix(5), vec![1, 0, 1, 0, 1]);
        let q = PathDesc::new(vec![2, 0, 1], vec![0, 1]).canonical();
        assert_eq!(q, PathDesc::new(vec![2], vec![0, 1]));
    }

    #[test]
    fn validation() {
        assert!(TreeSpec::explicit([vec![0]]).is_err());
        assert!(TreeSpec::explicit([vec![], vec![0, 1]]).is_err());
        let overlap = TreeSpec::regular(vec![0], 0, [edge(0, Guard::Range(0, 3), 0), edge(0, Guard::AtLeast(3), 0)]);
        assert!(overlap.is_err());
        assert!(TreeSpec::regular(vec![0], 1, []).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"variant":"regular","states":[0,1],"start":0,"edges":[{"from":0,"guard":{"range":[0,1]},"to":1},{"from":1,"guard":{"atLeast":2},"to":0},{"from":1,"guard":{"exact":0},"to":1}]}"#;
        let t = TreeSpec::from_json(text).unwrap();
        assert!(t.member(&[1, 7, 0]));
        assert_eq!(TreeSpec::from_json(&t.to_json()).unwrap(), t);
        let e = TreeSpec::from_json(r#"{"variant":"explicit","nodes":[[],[0],[0,3]]}"#).unwrap();
        assert_eq!(e.height(), Some(2));
        assert!(TreeSpec::from_json(r#"{"variant":"explicit","nodes":[[0]]}"#).is_err());
    }

    #[test]
    fn boundedness() {
        assert!(binary().is_rb());
        assert!(!unbounded_root().is_rb());
        assert!(single_leaf().is_rb());
    }

    #[test]
    fn path_text_round_trips() {
        for text in ["(0)^w", "()(0,1)^w", "(2,1)(0)^w", " (1, 0) ( 0 , 1 )^ω"] {
            let p: PathDesc = text.parse().unwrap();
            assert_eq!(p.to_string().parse::<PathDesc>().unwrap(), p);
        }
        assert_eq!("(0,1)^w".parse::<PathDesc>().unwrap(), PathDesc::new(vec![], vec![0, 1]));
        for bad in ["", "(0)", "()^w", "(a)^w", "(0)(1)(2)^w", "(0^w"] {
            assert!(bad.parse::<PathDesc>().is_err(), "{bad}");
        }
    }
}
