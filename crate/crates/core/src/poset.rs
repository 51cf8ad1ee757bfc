//! Finite posets given by their Hasse diagram, chains, order complexes and the
//! three structural properties the index computations require.
//!
//! Elements are identified by opaque strings. Internally every element is an
//! index into the identifier list sorted lexicographically, so "index order"
//! and "identifier order" coincide everywhere in this crate.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Chain counts above this trigger a warning; enumeration is exponential.
pub const CHAIN_SOFT_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    // lt[a * n + b] iff a < b
    lt: Vec<bool>,
    topo: Vec<usize>,
}

impl Poset {
    /// Builds a poset from its cover relation, rejecting anything that is not a
    /// Hasse diagram.
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Self> {
        let mut ids: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].clone()));
        }
        let index: HashMap<String, usize> = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };

        let n = ids.len();
        let mut pairs = Vec::with_capacity(covers.len());
        let mut seen = BTreeSet::new();
        for (a, b) in covers {
            let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
            if a == b {
                return Err(Error::CycleDetected(ids[a].clone()));
            }
            if seen.insert((a, b)) {
                pairs.push((a, b));
            }
        }

        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &pairs {
            up[a].push(b);
            down[b].push(a);
        }
        up.iter_mut().for_each(|v| v.sort_unstable());
        down.iter_mut().for_each(|v| v.sort_unstable());

        let topo = topological_order(&up, &down).map_err(|i| Error::CycleDetected(ids[i].clone()))?;

        // Reachability, filled in reverse topological order.
        let mut lt = vec![false; n * n];
        for &a in topo.iter().rev() {
            for &b in &up[a] {
                lt[a * n + b] = true;
                for c in 0..n {
                    if lt[b * n + c] {
                        lt[a * n + c] = true;
                    }
                }
            }
        }

        let poset = Poset {
            ids,
            index,
            up,
            down,
            lt,
            topo,
        };
        for &(a, b) in &pairs {
            if (0..n).any(|c| poset.lt(a, c) && poset.lt(c, b)) {
                return Err(Error::NonCoverEdge(poset.ids[a].clone(), poset.ids[b].clone()));
            }
        }
        Ok(poset)
    }

    /// Builds a poset from an arbitrary (not necessarily transitive or reduced)
    /// strict order relation by taking its transitive closure and reducing it
    /// to covers.
    pub fn from_relation<S: AsRef<str>>(elements: &[S], relation: &[(S, S)]) -> Result<Self> {
        let covers = transitive_reduction(elements, relation)?;
        let elements: Vec<&str> = elements.iter().map(AsRef::as_ref).collect();
        let covers: Vec<(&str, &str)> = covers.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Self::new(&elements, &covers)
    }

    pub fn from_doc(doc: &PosetDoc) -> Result<Self> {
        Self::new(&doc.elements, &doc.covers)
    }

    pub fn to_doc(&self) -> PosetDoc {
        PosetDoc {
            elements: self.ids.clone(),
            covers: self
                .cover_pairs()
                .map(|(a, b)| (self.ids[a].clone(), self.ids[b].clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.up[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.down[a]
    }

    /// All cover pairs `(a, b)` with `a ≺ b`, sorted.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up
            .iter()
            .enumerate()
            .flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b)))
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.up[a].binary_search(&b).is_ok()
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.lt[a * self.len() + b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.lt(b, a)
    }

    /// `a ≤ b` by identifier.
    pub fn leq_ids(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn is_minimal(&self, a: usize) -> bool {
        self.down[a].is_empty()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.is_minimal(a)).collect()
    }

    /// Some linear extension of the order (Kahn's algorithm, smallest index first).
    pub fn topological_order(&self) -> &[usize] {
        &self.topo
    }

    /// `{x | x < a}`, in index order.
    pub fn strict_down_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lt(x, a)).collect()
    }

    /// `{x | x ≤ a}`, in index order.
    pub fn closed_down_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.leq(x, a)).collect()
    }

    /// `{x | a < x}`, in index order.
    pub fn strict_up_set(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.lt(a, x)).collect()
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }
}

/// Kahn's algorithm; on a cycle returns an element lying on or above it.
fn topological_order(up: &[Vec<usize>], down: &[Vec<usize>]) -> std::result::Result<Vec<usize>, usize> {
    let n = up.len();
    let mut indeg: Vec<usize> = down.iter().map(Vec::len).collect();
    let mut ready: BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(a) = ready.pop_first() {
        order.push(a);
        for &b in &up[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.insert(b);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).find(|&i| indeg[i] > 0).expect("some element is stuck"))
    }
}

/// Reduces a strict order relation (given by any generating set of pairs) to
/// its cover relation.
pub fn transitive_reduction<S: AsRef<str>>(elements: &[S], relation: &[(S, S)]) -> Result<Vec<(String, String)>> {
    let ids: Vec<&str> = elements.iter().map(AsRef::as_ref).collect();
    let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = ids.len();
    let mut lt = vec![false; n * n];
    for (a, b) in relation {
        let a = *index
            .get(a.as_ref())
            .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
        let b = *index
            .get(b.as_ref())
            .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
        lt[a * n + b] = true;
    }
    // Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if lt[i * n + k] {
                for j in 0..n {
                    if lt[k * n + j] {
                        lt[i * n + j] = true;
                    }
                }
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| lt[i * n + i]) {
        return Err(Error::CycleDetected(ids[i].to_string()));
    }
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt[a * n + b] && !(0..n).any(|c| lt[a * n + c] && lt[c * n + b]) {
                covers.push((ids[a].to_string(), ids[b].to_string()));
            }
        }
    }
    Ok(covers)
}

/// A non-empty chain, members ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    members: Vec<usize>,
}

impl Chain {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// One less than the number of members.
    pub fn length(&self) -> usize {
        self.members.len() - 1
    }

    pub fn sign(&self) -> i64 {
        sign(self.length())
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(&x)
    }

    pub fn top(&self) -> usize {
        *self.members.last().expect("chains are non-empty")
    }
}

pub(crate) fn sign(len: usize) -> i64 {
    if len.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Visits every non-empty chain of `subset` exactly once, passing its members
/// in descending order. Tops are taken in index order and each chain is
/// extended downward depth-first, again in index order.
pub fn for_each_chain<F: FnMut(&[usize])>(poset: &Poset, subset: &[usize], mut visit: F) {
    let mut s: Vec<usize> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut stack = Vec::new();
    let mut count = 0usize;
    let mut warned = false;
    for &top in &s {
        stack.push(top);
        descend(poset, &s, &mut stack, &mut |c| {
            count += 1;
            if count > CHAIN_SOFT_LIMIT && !warned {
                warned = true;
                log::warn!("chain enumeration exceeded {CHAIN_SOFT_LIMIT} chains");
            }
            visit(c)
        });
        stack.pop();
    }
}

fn descend<F: FnMut(&[usize])>(poset: &Poset, s: &[usize], stack: &mut Vec<usize>, visit: &mut F) {
    visit(stack);
    let bottom = *stack.last().unwrap();
    for &x in s {
        if poset.lt(x, bottom) {
            stack.push(x);
            descend(poset, s, stack, visit);
            stack.pop();
        }
    }
}

/// All non-empty chains contained in `subset`.
pub fn enumerate_chains(poset: &Poset, subset: &[usize]) -> Vec<Chain> {
    let mut out = Vec::new();
    for_each_chain(poset, subset, |desc| {
        out.push(Chain {
            members: desc.iter().rev().copied().collect(),
        });
    });
    out
}

/// `Σ (-1)^|C|` over the chains of `subset` accepted by `keep`.
pub fn signed_chain_sum<F: FnMut(&[usize]) -> bool>(poset: &Poset, subset: &[usize], mut keep: F) -> i64 {
    let mut total = 0;
    for_each_chain(poset, subset, |desc| {
        if keep(desc) {
            total += sign(desc.len() - 1);
        }
    });
    total
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: Vec<String>,
    /// Each simplex is a sorted list of vertex indices.
    pub simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// Number of simplices of each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    /// Inclusion-maximal simplices, sorted.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .simplices
            .iter()
            .filter(|s| {
                !self
                    .simplices
                    .iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.binary_search(v).is_ok()))
            })
            .cloned()
            .collect();
        out.sort();
        out
    }
}

/// The order complex: one simplex per non-empty chain.
pub fn order_complex(poset: &Poset) -> SimplicialComplex {
    let simplices = enumerate_chains(poset, &poset.all())
        .into_iter()
        .map(|c| {
            let mut m = c.members;
            m.sort_unstable();
            m
        })
        .collect();
    SimplicialComplex {
        vertices: poset.ids().to_vec(),
        simplices,
    }
}

pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    complex.simplices.iter().map(|s| sign(s.len() - 1)).sum()
}

/// `χ(Δ(S))` for the subposet on `subset`, computed from chains directly.
pub fn chain_euler_characteristic(poset: &Poset, subset: &[usize]) -> i64 {
    signed_chain_sum(poset, subset, |_| true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoWideVerdict {
    /// A cover chain `a ≺ b ≺ c` with no other middle element.
    pub witness: Option<(usize, usize, usize)>,
}

impl TwoWideVerdict {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn is_two_wide(poset: &Poset) -> TwoWideVerdict {
    for a in 0..poset.len() {
        for &b in poset.upper_covers(a) {
            for &c in poset.upper_covers(b) {
                let middles = poset.upper_covers(a).iter().filter(|&&d| poset.is_cover(d, c)).count();
                if middles < 2 {
                    return TwoWideVerdict {
                        witness: Some((a, b, c)),
                    };
                }
            }
        }
    }
    TwoWideVerdict { witness: None }
}

/// Two lower covers of `element` that force different grades on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingConflict {
    pub element: usize,
    pub via: usize,
    pub conflicting: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityRank {
    values: Vec<u8>,
}

impl ParityRank {
    pub fn get(&self, a: usize) -> u8 {
        self.values[a]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// `(-1)^μ(a)`.
    pub fn sign(&self, a: usize) -> i64 {
        sign(self.values[a] as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankFunction {
    values: Vec<usize>,
    max_rank: usize,
}

impl RankFunction {
    pub fn get(&self, a: usize) -> usize {
        self.values[a]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn parity(&self) -> ParityRank {
        ParityRank {
            values: self.values.iter().map(|r| (r % 2) as u8).collect(),
        }
    }
}

/// Propagates grades upward along covers: minimal elements get 0 and each
/// cover applies `step`. Fails at the first element whose lower covers disagree.
fn propagate_grades<T: Copy + Eq + Default>(
    poset: &Poset,
    step: impl Fn(T) -> T,
) -> std::result::Result<Vec<T>, GradingConflict> {
    let mut values = vec![T::default(); poset.len()];
    for &x in poset.topological_order() {
        let lower = poset.lower_covers(x);
        let Some(&first) = lower.first() else { continue };
        let v = step(values[first]);
        if let Some(&other) = lower.iter().find(|&&l| step(values[l]) != v) {
            return Err(GradingConflict {
                element: x,
                via: first,
                conflicting: other,
            });
        }
        values[x] = v;
    }
    Ok(values)
}

pub fn compute_parity_rank(poset: &Poset) -> std::result::Result<ParityRank, GradingConflict> {
    let values = propagate_grades::<u8>(poset, |v| 1 - v)?;
    Ok(ParityRank { values })
}

pub fn compute_rank_function(poset: &Poset) -> std::result::Result<RankFunction, GradingConflict> {
    let values = propagate_grades::<usize>(poset, |v| v + 1)?;
    let max_rank = values.iter().copied().max().unwrap_or(0);
    Ok(RankFunction { values, max_rank })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerViolation {
    pub element: usize,
    pub chi: i64,
    pub required: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownwardEulerianVerdict {
    pub violations: Vec<EulerViolation>,
}

impl DownwardEulerianVerdict {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `χ(Δ(P_{<a})) = (-1)^{μ(a)+1} + 1` at every non-minimal `a`.
pub fn is_downward_eulerian(poset: &Poset, mu: &ParityRank) -> DownwardEulerianVerdict {
    let violations = (0..poset.len())
        .filter(|&a| !poset.is_minimal(a))
        .filter_map(|a| {
            let chi = chain_euler_characteristic(poset, &poset.strict_down_set(a));
            let required = sign(mu.get(a) as usize + 1) + 1;
            (chi != required).then_some(EulerViolation {
                element: a,
                chi,
                required,
            })
        })
        .collect();
    DownwardEulerianVerdict { violations }
}

/// The three structural properties with their witnesses, by identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub two_wide: bool,
    pub two_wide_witness: Option<[String; 3]>,
    pub parity_graded: bool,
    /// `[element, via, conflicting]`: two lower covers of `element` forcing
    /// different parities.
    pub parity_conflict: Option<[String; 3]>,
    /// Absent when there is no parity rank function to check against.
    pub downward_eulerian: Option<bool>,
    pub eulerian_violations: Vec<EulerViolationDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerViolationDoc {
    pub element: String,
    pub chi: i64,
    pub required: i64,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.two_wide && self.parity_graded && self.downward_eulerian == Some(true)
    }
}

pub fn check_properties(poset: &Poset) -> PropertyReport {
    let name = |i: usize| poset.id(i).to_string();
    let two_wide = is_two_wide(poset);
    let parity = compute_parity_rank(poset);
    let eulerian = parity.as_ref().ok().map(|mu| is_downward_eulerian(poset, mu));
    PropertyReport {
        two_wide: two_wide.holds(),
        two_wide_witness: two_wide.witness.map(|(a, b, c)| [name(a), name(b), name(c)]),
        parity_graded: parity.is_ok(),
        parity_conflict: parity
            .as_ref()
            .err()
            .map(|c| [name(c.element), name(c.via), name(c.conflicting)]),
        downward_eulerian: eulerian.as_ref().map(DownwardEulerianVerdict::holds),
        eulerian_violations: eulerian
            .map(|v| {
                v.violations
                    .into_iter()
                    .map(|v| EulerViolationDoc {
                        element: name(v.element),
                        chi: v.chi,
                        required: v.required,
                    })
                    .collect()
            })
            .unwrap_or_default(),
    }
}
