//! Finite Ramsey machinery: monochromatic-subset search on set colorings,
//! the ordered-pair triple-witness predicate, and the exhaustive
//! (symmetry-reduced) minimal-N search.
//!
//! The triple-witness predicate asks for i < j < k with
//! `c(i,j) = c(i,k)` and `c(k,i) = c(k,j)`. It is invariant under alphabet
//! relabeling but not under index relabeling (the ordered pairs see the
//! order), so the exhaustive search canonicalizes letters by first
//! appearance and prunes branches already containing a witness.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::de;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Total map on ordered pairs (i, j), i != j, into {0, .., a-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    n: usize,
    alphabet: u64,
    values: Vec<u64>, // flat n*n, diagonal unused
}

impl Coloring {
    pub fn new(n: usize, alphabet: u64, pairs: &[(usize, usize, u64)]) -> Result<Self, Error> {
        if n < 2 {
            return Err(Error::Precondition("coloring needs n >= 2".into()));
        }
        if alphabet == 0 {
            return Err(Error::Precondition("alphabet must be >= 1".into()));
        }
        let mut values = vec![u64::MAX; n * n];
        for &(i, j, c) in pairs {
            if i == j || i >= n || j >= n {
                return Err(Error::Precondition(format!(
                    "pair ({i},{j}) is not an off-diagonal pair below {n}"
                )));
            }
            if c >= alphabet {
                return Err(Error::Precondition(format!(
                    "color {c} outside the alphabet of size {alphabet}"
                )));
            }
            if values[i * n + j] != u64::MAX {
                return Err(Error::Precondition(format!("pair ({i},{j}) given twice")));
            }
            values[i * n + j] = c;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && values[i * n + j] == u64::MAX {
                    return Err(Error::Precondition(format!(
                        "pair ({i},{j}) missing: the coloring must be total"
                    )));
                }
            }
        }
        Ok(Coloring {
            n,
            alphabet,
            values,
        })
    }

    /// Builds from a function on ordered pairs.
    pub fn from_fn(
        n: usize,
        alphabet: u64,
        f: impl Fn(usize, usize) -> u64,
    ) -> Result<Self, Error> {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    pairs.push((i, j, f(i, j)));
                }
            }
        }
        Coloring::new(n, alphabet, &pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i != j && i < self.n && j < self.n);
        self.values[i * self.n + j]
    }
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut pairs = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    pairs.push((i, j, self.get(i, j)));
                }
            }
        }
        let mut s = serializer.serialize_struct("Coloring", 3)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("a", &self.alphabet)?;
        s.serialize_field("values", &pairs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            a: u64,
            values: Vec<(usize, usize, u64)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Coloring::new(raw.n, raw.a, &raw.values).map_err(de::Error::custom)
    }
}

/// Total map on p-element subsets of {0,..,n-1} into {0,..,q-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetColoring {
    n: usize,
    p: usize,
    q: u64,
    values: BTreeMap<Vec<usize>, u64>,
}

impl SetColoring {
    pub fn new(
        n: usize,
        p: usize,
        q: u64,
        entries: &[(Vec<usize>, u64)],
    ) -> Result<Self, Error> {
        if p == 0 || p > n {
            return Err(Error::Precondition(format!(
                "subset size {p} out of range for n = {n}"
            )));
        }
        if q == 0 {
            return Err(Error::Precondition("q must be >= 1".into()));
        }
        let mut values = BTreeMap::new();
        for (set, color) in entries {
            let mut key = set.clone();
            key.sort_unstable();
            key.dedup();
            if key.len() != p || key.iter().any(|&v| v >= n) {
                return Err(Error::Precondition(format!(
                    "{set:?} is not a {p}-subset of 0..{n}"
                )));
            }
            if *color >= q {
                return Err(Error::Precondition(format!(
                    "color {color} outside alphabet of size {q}"
                )));
            }
            if values.insert(key, *color).is_some() {
                return Err(Error::Precondition(format!("{set:?} given twice")));
            }
        }
        let expected = binomial(n, p);
        if values.len() as u128 != expected {
            return Err(Error::Precondition(format!(
                "expected {expected} subsets, got {}",
                values.len()
            )));
        }
        Ok(SetColoring { n, p, q, values })
    }

    pub fn from_fn(
        n: usize,
        p: usize,
        q: u64,
        f: impl Fn(&[usize]) -> u64,
    ) -> Result<Self, Error> {
        let entries: Vec<(Vec<usize>, u64)> = (0..n)
            .combinations(p)
            .map(|set| {
                let c = f(&set);
                (set, c)
            })
            .collect();
        SetColoring::new(n, p, q, &entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn get(&self, set: &[usize]) -> u64 {
        self.values[set]
    }
}

impl Serialize for SetColoring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let entries: Vec<(&Vec<usize>, u64)> =
            self.values.iter().map(|(k, v)| (k, *v)).collect();
        let mut s = serializer.serialize_struct("SetColoring", 4)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("q", &self.q)?;
        s.serialize_field("values", &entries)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for SetColoring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            p: usize,
            q: u64,
            values: Vec<(Vec<usize>, u64)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        SetColoring::new(raw.n, raw.p, raw.q, &raw.values).map_err(de::Error::custom)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Indices i < j < k certifying `c(i,j) = c(i,k)` and `c(k,i) = c(k,j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl TripleWitness {
    pub fn validate(&self, c: &Coloring) -> bool {
        self.i < self.j
            && self.j < self.k
            && self.k < c.n()
            && c.get(self.i, self.j) == c.get(self.i, self.k)
            && c.get(self.k, self.i) == c.get(self.k, self.j)
    }
}

/// Lexicographically first r-subset B with ψ constant on its p-subsets.
pub fn find_monochromatic(psi: &SetColoring, r: usize) -> Result<Option<Vec<usize>>, Error> {
    if r < psi.p() || r > psi.n() {
        return Err(Error::Precondition(format!(
            "need p <= r <= n, got p = {}, r = {}, n = {}",
            psi.p(),
            r,
            psi.n()
        )));
    }
    for b in (0..psi.n()).combinations(r) {
        let mut color = None;
        let mut constant = true;
        for sub in b.iter().copied().combinations(psi.p()) {
            let c = psi.get(&sub);
            match color {
                None => color = Some(c),
                Some(prev) if prev == c => {}
                Some(_) => {
                    constant = false;
                    break;
                }
            }
        }
        if constant {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Lexicographically first triple witness, or None.
pub fn lemma22_witness(c: &Coloring) -> Option<TripleWitness> {
    let n = c.n();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if c.get(i, j) == c.get(i, k) && c.get(k, i) == c.get(k, j) {
                    return Some(TripleWitness { i, j, k });
                }
            }
        }
    }
    None
}

/// Runs the two-step proof recipe: build the triple coloring
/// `phi({i<j<k}) = (c(i,j), c(k,j))`, find a phi-monochromatic 5-set, and
/// return its middle triple. The returned triple always re-validates; a
/// validation failure is an internal error, not a data condition.
pub fn proof_pipeline_check(c: &Coloring) -> Result<Option<TripleWitness>, Error> {
    if c.n() < 5 {
        return Ok(None);
    }
    let a = c.alphabet();
    let q = a
        .checked_mul(a)
        .ok_or_else(|| Error::Resource("alphabet squared overflows".into()))?;
    let phi = SetColoring::from_fn(c.n(), 3, q, |set| {
        let (i, j, k) = (set[0], set[1], set[2]);
        c.get(i, j) * a + c.get(k, j)
    })?;
    let Some(b) = find_monochromatic(&phi, 5)? else {
        return Ok(None);
    };
    let witness = TripleWitness {
        i: b[1],
        j: b[2],
        k: b[3],
    };
    if !witness.validate(c) {
        return Err(Error::Internal(format!(
            "pipeline produced an invalid witness {witness:?} from 5-set {b:?}"
        )));
    }
    Ok(Some(witness))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MinNOutcome {
    /// Every coloring at `min_n` has a witness; `counterexample` is the
    /// lexicographically least canonical witness-free coloring at `min_n - 1`.
    Found {
        min_n: usize,
        counterexample: Coloring,
    },
    /// Some coloring at n_max still lacks a witness.
    Exhausted {
        n_max: usize,
        counterexample: Coloring,
    },
    /// The node budget ran out; every n <= last_complete was decided (each
    /// had a counterexample).
    CapExceeded { last_complete: usize },
}

enum Search {
    Counterexample(Vec<u64>),
    NoneExists,
    CapHit,
}

/// Smallest N <= n_max such that every coloring of N x N minus the diagonal
/// with the given alphabet admits a triple witness, by exhaustive search with
/// first-appearance letter canonicalization and early witness pruning. Once
/// some N verifies, every larger N does too: a witness-free coloring at N+1
/// restricts to a witness-free coloring on its first N indices.
///
/// The node cap applies per board size. For N >= 5 the search runs in
/// parallel over canonical assignment prefixes with fixed per-branch budget
/// slices and ordered reduction, so the outcome does not depend on the
/// degree of parallelism; the returned counterexample is the
/// lexicographically least canonical one (cap permitting).
pub fn lemma22_min_n(alphabet: u64, n_max: usize, node_cap: u64) -> Result<MinNOutcome, Error> {
    if alphabet == 0 || alphabet > 64 {
        return Err(Error::Precondition(
            "alphabet must be between 1 and 64 for the exhaustive search".into(),
        ));
    }
    if n_max < 3 {
        return Err(Error::Precondition("n_max must be >= 3".into()));
    }
    // N = 2 has no triples at all, so any coloring is witness-free.
    let mut last_counterexample =
        Coloring::from_fn(2, alphabet, |_, _| 0).expect("two-point coloring");
    for n in 3..=n_max {
        let outcome = if n >= 5 {
            search_counterexample_parallel(n, alphabet, node_cap)
        } else {
            let mut budget = node_cap;
            search_counterexample(n, alphabet, &mut budget)
        };
        match outcome {
            Search::NoneExists => {
                return Ok(MinNOutcome::Found {
                    min_n: n,
                    counterexample: last_counterexample,
                })
            }
            Search::Counterexample(values) => {
                let coloring = coloring_from_flat(n, alphabet, &values);
                debug_assert!(lemma22_witness(&coloring).is_none());
                last_counterexample = coloring;
            }
            Search::CapHit => {
                return Ok(MinNOutcome::CapExceeded {
                    last_complete: n - 1,
                })
            }
        }
    }
    Ok(MinNOutcome::Exhausted {
        n_max,
        counterexample: last_counterexample,
    })
}

/// Canonical partial assignments of the first `depth` pairs (letters
/// canonical, no witness among completed triples), with their used-letter
/// counts, in lexicographic order.
fn canonical_prefixes(
    n: usize,
    alphabet: u64,
    order: &[(usize, usize)],
    depth: usize,
) -> Vec<(Vec<u64>, u64)> {
    let mut out = Vec::new();
    let mut values = vec![u64::MAX; n * n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        at: usize,
        depth: usize,
        order: &[(usize, usize)],
        values: &mut Vec<u64>,
        n: usize,
        alphabet: u64,
        used: u64,
        out: &mut Vec<(Vec<u64>, u64)>,
    ) {
        if at == depth {
            out.push((values.clone(), used));
            return;
        }
        let (x, y) = order[at];
        let limit = alphabet.min(used + 1);
        for val in 0..limit {
            values[x * n + y] = val;
            let creates_witness = x > y && {
                let (j, k) = (y, x);
                (0..j).any(|i| {
                    values[i * n + j] == values[i * n + k]
                        && values[k * n + i] == values[k * n + j]
                })
            };
            if !creates_witness {
                rec(at + 1, depth, order, values, n, alphabet, used.max(val + 1), out);
            }
        }
        values[x * n + y] = u64::MAX;
    }
    rec(0, depth, order, &mut values, n, alphabet, 0, &mut out);
    out
}

fn search_counterexample_parallel(n: usize, alphabet: u64, node_cap: u64) -> Search {
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicBool, Ordering};

    let order = pair_order(n);
    let depth = order.len().min(12);
    let prefixes = canonical_prefixes(n, alphabet, &order, depth);
    if prefixes.is_empty() {
        // Every prefix already forces a witness.
        return Search::NoneExists;
    }
    let slice = node_cap / prefixes.len() as u64;
    let cap_hit = AtomicBool::new(false);
    let found = prefixes
        .into_par_iter()
        .find_map_first(|(mut values, used)| {
            let mut budget = slice;
            match dfs_from(
                depth, &order, &mut values, n, alphabet, used, &mut budget,
            ) {
                Search::Counterexample(v) => Some(v),
                Search::NoneExists => None,
                Search::CapHit => {
                    cap_hit.store(true, Ordering::Relaxed);
                    None
                }
            }
        });
    match found {
        Some(values) => Search::Counterexample(values),
        None if cap_hit.load(Ordering::Relaxed) => Search::CapHit,
        None => Search::NoneExists,
    }
}

fn coloring_from_flat(n: usize, alphabet: u64, flat: &[u64]) -> Coloring {
    Coloring::from_fn(n, alphabet, |i, j| flat[i * n + j]).expect("search output is total")
}

/// Pair assignment order: for each vertex v, the pairs (u,v) then (v,u) for
/// u < v. A triple (i,j,k) is fully colored exactly when (k,j) is assigned,
/// so the witness check on assignment stays O(n).
fn pair_order(n: usize) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(n * (n - 1));
    for v in 1..n {
        for u in 0..v {
            order.push((u, v));
            order.push((v, u));
        }
    }
    order
}

fn search_counterexample(n: usize, alphabet: u64, nodes_left: &mut u64) -> Search {
    let order = pair_order(n);
    let mut values = vec![u64::MAX; n * n];
    dfs_from(0, &order, &mut values, n, alphabet, 0, nodes_left)
}

#[allow(clippy::too_many_arguments)]
fn dfs_from(
    depth: usize,
    order: &[(usize, usize)],
    values: &mut Vec<u64>,
    n: usize,
    alphabet: u64,
    used_count: u64,
    nodes_left: &mut u64,
) -> Search {
    if depth == order.len() {
        return Search::Counterexample(values.clone());
    }
    let (x, y) = order[depth];
    // Letters are canonical by first appearance: the letters used so far
    // are exactly 0..used_count, and one fresh letter may be opened.
    let limit = alphabet.min(used_count + 1);
    for val in 0..limit {
        if *nodes_left == 0 {
            return Search::CapHit;
        }
        *nodes_left -= 1;
        values[x * n + y] = val;
        // Assigning a backward pair (k,j) completes the triples (i,j,k)
        // for every i < j; prune if one of them is a witness.
        let creates_witness = x > y && {
            let (j, k) = (y, x);
            (0..j).any(|i| {
                values[i * n + j] == values[i * n + k]
                    && values[k * n + i] == values[k * n + j]
            })
        };
        if !creates_witness {
            let next_used = used_count.max(val + 1);
            match dfs_from(depth + 1, order, values, n, alphabet, next_used, nodes_left) {
                Search::NoneExists => {}
                other => {
                    values[x * n + y] = u64::MAX;
                    return other;
                }
            }
        }
    }
    values[x * n + y] = u64::MAX;
    Search::NoneExists
}
