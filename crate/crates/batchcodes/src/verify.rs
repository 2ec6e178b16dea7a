//! Recovery sets and decision procedures for the batch, PIR and
//! asynchronous-batch properties.
//!
//! A recovery set for information symbol `i` is a set of codeword
//! coordinates whose columns sum to the unit vector `e_i` over GF(2).
//! Only inclusion-minimal sets are enumerated; any assignment built from
//! larger sets can be shrunk to one built from minimal sets.
//!
//! The strict asynchronous property is decided as: for every query there
//! must exist a disjoint assignment that survives any single completion
//! followed by any newcomer — the retrieval system chooses how to serve a
//! query, and must be able to choose robustly before knowing which request
//! finishes first or what arrives next. Quantifying over *all* assignments
//! instead would be unsatisfiable even for codes that clearly support
//! asynchronous retrieval: almost every such code admits some adversarial
//! service configuration that corners a future newcomer. The newcomer
//! check itself is algebraic (span membership over the untouched columns),
//! so it ranges over all recovery sets, not only enumerated ones.

use std::collections::HashMap;

use itertools::Itertools;

use crate::code::GeneratorMatrix;
use crate::error::{Error, Result};
use crate::gf2::{BitVec, Echelon};

/// One recovery set: coordinates summing to `e_target` over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RecoverySet {
    pub target: usize,
    pub coords: Vec<usize>, // sorted ascending
}

impl RecoverySet {
    /// Re-checks the defining column-sum identity, independently of the
    /// enumerator that produced the set.
    pub fn verify(&self, g: &GeneratorMatrix) -> bool {
        let mut acc = BitVec::zeros(g.k());
        for &c in &self.coords {
            if c >= g.n() {
                return false;
            }
            acc.xor_with(g.column(c));
        }
        acc == BitVec::unit(g.k(), self.target)
    }

    fn mask(&self, n: usize) -> BitVec {
        BitVec::from_ones(n, &self.coords)
    }
}

/// A multiset query of `t` information symbols, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Query {
    indices: Vec<usize>,
}

impl Query {
    pub fn new(k: usize, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidInput("query must have t >= 1".into()));
        }
        for &i in &indices {
            if i >= k {
                return Err(Error::IndexOutOfRange { index: i, bound: k });
            }
        }
        indices.sort_unstable();
        Ok(Query { indices })
    }

    pub fn uniform(index: usize, t: usize) -> Self {
        Query {
            indices: vec![index; t],
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn t(&self) -> usize {
        self.indices.len()
    }
}

/// Sets aligned with the positions of a query, pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryAssignment {
    pub sets: Vec<RecoverySet>,
}

impl RecoveryAssignment {
    /// Full validity check: alignment, column sums and pairwise disjointness.
    pub fn is_valid_for(&self, g: &GeneratorMatrix, q: &Query) -> bool {
        if self.sets.len() != q.t() {
            return false;
        }
        let mut used = BitVec::zeros(g.n());
        for (set, &target) in self.sets.iter().zip(q.indices()) {
            if set.target != target || !set.verify(g) {
                return false;
            }
            let m = set.mask(g.n());
            if used.intersects(&m) {
                return false;
            }
            used.or_with(&m);
        }
        true
    }

    pub fn total_size(&self) -> usize {
        self.sets.iter().map(|s| s.coords.len()).sum()
    }
}

/// Explicit search budgets. Exceeding `max_nodes` is a hard error, never a
/// silently truncated answer.
#[derive(Clone, Debug)]
pub struct SearchLimits {
    /// Cap on enumerated recovery-set size; `None` means unbounded (up to n).
    pub max_set_size: Option<usize>,
    /// Cap on explored search nodes across one verifier call.
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_set_size: None,
            max_nodes: 10_000_000,
        }
    }
}

/// Search-effort metadata returned by the verifiers.
#[derive(Clone, Debug, Default)]
pub struct SearchCost {
    pub nodes: u64,
    /// Set when the a-priori query space exceeds the node budget.
    pub space_warning: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BatchReport {
    pub holds: bool,
    pub counterexample: Option<Query>,
    pub cost: SearchCost,
}

#[derive(Clone, Debug)]
pub struct PirReport {
    pub holds: bool,
    pub counterexample: Option<usize>,
    pub cost: SearchCost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsyncMode {
    /// Still-running queries keep their recovery sets; only the newcomer's
    /// set is chosen freshly.
    Strict,
    /// The remaining sets may be re-chosen jointly with the newcomer's.
    Relaxed,
}

#[derive(Clone, Debug)]
pub struct AsyncWitness {
    pub query: Query,
    pub assignment: RecoveryAssignment,
    /// Position (into the sorted query) whose retrieval completed.
    pub completed_pos: usize,
    /// Newcomer symbol that cannot be served from untouched servers.
    pub newcomer: usize,
}

#[derive(Clone, Debug)]
pub struct AsyncReport {
    pub holds: bool,
    pub witness: Option<AsyncWitness>,
    /// Set when the precondition failed: the code is not even a batch code.
    pub not_batch: Option<Query>,
    pub cost: SearchCost,
}

/// All minimal recovery sets for `target` of size at most `max_size`,
/// sorted by size then lexicographically.
///
/// Depth-first search over coordinate subsets in increasing order, pruned by
/// (a) span feasibility of the residual against the remaining columns,
/// (b) containment of an already-found set, and (c) the size cap. Found
/// supersets of later discoveries are filtered out at the end.
pub fn enumerate_recovery_sets(
    g: &GeneratorMatrix,
    target: usize,
    max_size: usize,
    limits: &SearchLimits,
) -> Result<Vec<RecoverySet>> {
    if target >= g.k() {
        return Err(Error::IndexOutOfRange {
            index: target,
            bound: g.k(),
        });
    }
    let mut nodes = 0u64;
    let sets = enumerate_impl(g, target, max_size, limits, &mut nodes)?;
    Ok(sets
        .into_iter()
        .map(|(coords, _)| RecoverySet { target, coords })
        .collect())
}

fn enumerate_impl(
    g: &GeneratorMatrix,
    target: usize,
    max_size: usize,
    limits: &SearchLimits,
    nodes: &mut u64,
) -> Result<Vec<(Vec<usize>, BitVec)>> {
    let n = g.n();
    let k = g.k();
    let goal = BitVec::unit(k, target);
    let max_size = max_size.min(limits.max_set_size.unwrap_or(n)).min(n);

    // suffix[j] = span of columns j..n.
    let mut suffix = vec![Echelon::new(); n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1].clone();
        suffix[j].insert(g.column(j));
    }

    struct Dfs<'a> {
        g: &'a GeneratorMatrix,
        suffix: Vec<Echelon>,
        max_size: usize,
        limit: u64,
        found: Vec<(Vec<usize>, BitVec)>,
    }

    impl Dfs<'_> {
        fn run(
            &mut self,
            start: usize,
            chosen: &mut Vec<usize>,
            chosen_mask: &BitVec,
            residual: &BitVec,
            nodes: &mut u64,
        ) -> Result<()> {
            if residual.is_zero() {
                self.found.push((chosen.clone(), chosen_mask.clone()));
                return Ok(());
            }
            if chosen.len() == self.max_size {
                return Ok(());
            }
            for j in start..self.g.n() {
                *nodes += 1;
                if *nodes > self.limit {
                    return Err(Error::BudgetExceeded {
                        context: "enumerating recovery sets".into(),
                        limit: self.limit,
                    });
                }
                let mut next_residual = residual.clone();
                next_residual.xor_with(self.g.column(j));
                if !self.suffix[j + 1].contains(&next_residual) {
                    continue;
                }
                let mut next_mask = chosen_mask.clone();
                next_mask.set(j, true);
                if self.found.iter().any(|(_, fm)| fm.is_subset_of(&next_mask)) {
                    continue;
                }
                chosen.push(j);
                self.run(j + 1, chosen, &next_mask, &next_residual, nodes)?;
                chosen.pop();
            }
            Ok(())
        }
    }

    let mut dfs = Dfs {
        g,
        suffix,
        max_size,
        limit: limits.max_nodes,
        found: Vec::new(),
    };
    dfs.run(0, &mut Vec::new(), &BitVec::zeros(n), &goal, nodes)?;

    let mut found = dfs.found;
    found.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let mut kept: Vec<(Vec<usize>, BitVec)> = Vec::new();
    for cand in found {
        if kept.iter().any(|(_, km)| km.is_subset_of(&cand.1)) {
            continue;
        }
        kept.push(cand);
    }
    Ok(kept)
}

#[derive(Clone)]
struct CachedSet {
    coords: Vec<usize>,
    mask: BitVec,
}

struct TargetSets {
    complete_to: usize,
    sets: Vec<CachedSet>,
}

/// Shared search state: per-target minimal-set lists grown on demand, plus
/// the node budget counter.
struct SearchCtx<'a> {
    g: &'a GeneratorMatrix,
    limits: &'a SearchLimits,
    cache: Vec<Option<TargetSets>>,
    nodes: u64,
}

impl<'a> SearchCtx<'a> {
    fn new(g: &'a GeneratorMatrix, limits: &'a SearchLimits) -> Self {
        SearchCtx {
            g,
            limits,
            cache: (0..g.k()).map(|_| None).collect(),
            nodes: 0,
        }
    }

    /// Largest set size ever needed for completeness of existence checks:
    /// in any disjoint t-assignment the other t-1 sets take at least one
    /// coordinate each.
    fn size_cap(&self, t: usize) -> usize {
        let hard = self.g.n().saturating_sub(t.saturating_sub(1)).max(1);
        hard.min(self.limits.max_set_size.unwrap_or(self.g.n()))
    }

    fn ensure(&mut self, target: usize, size: usize) -> Result<()> {
        let need = size.min(self.g.n());
        let have = self.cache[target].as_ref().map_or(0, |t| t.complete_to);
        if have >= need {
            return Ok(());
        }
        let sets = enumerate_impl(self.g, target, need, self.limits, &mut self.nodes)?;
        self.cache[target] = Some(TargetSets {
            complete_to: need,
            sets: sets
                .into_iter()
                .map(|(coords, mask)| CachedSet { coords, mask })
                .collect(),
        });
        Ok(())
    }

    fn sets(&self, target: usize) -> &[CachedSet] {
        &self.cache[target].as_ref().expect("ensure() ran").sets
    }

    fn charge(&mut self, context: &str) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::BudgetExceeded {
                context: context.into(),
                limit: self.limits.max_nodes,
            });
        }
        Ok(())
    }

    /// First disjoint assignment for `q` in smallest-sets-first backtracking
    /// order, growing the candidate lists lazily.
    fn first_assignment(&mut self, q: &Query) -> Result<Option<RecoveryAssignment>> {
        let cap = self.size_cap(q.t());
        let mut size = 2usize.min(cap);
        loop {
            for &target in q.indices() {
                self.ensure(target, size)?;
            }
            if let Some(picks) = self.backtrack_first(q)? {
                return Ok(Some(self.assignment_from_picks(q, &picks)));
            }
            if size >= cap {
                // Exhausted the completeness threshold: the answer "none" is
                // sound only if nothing was capped away by configuration.
                let hard = self.g.n().saturating_sub(q.t().saturating_sub(1)).max(1);
                if cap < hard {
                    return Err(Error::BudgetExceeded {
                        context: "recovery-set size cap below completeness threshold".into(),
                        limit: cap as u64,
                    });
                }
                return Ok(None);
            }
            size = (size * 2).min(cap);
        }
    }

    fn assignment_from_picks(&self, q: &Query, picks: &[usize]) -> RecoveryAssignment {
        let sets = q
            .indices()
            .iter()
            .zip(picks)
            .map(|(&target, &idx)| RecoverySet {
                target,
                coords: self.sets(target)[idx].coords.clone(),
            })
            .collect();
        RecoveryAssignment { sets }
    }

    fn backtrack_first(&mut self, q: &Query) -> Result<Option<Vec<usize>>> {
        let t = q.t();
        let mut picks = vec![usize::MAX; t];
        let mut used = BitVec::zeros(self.g.n());
        if self.backtrack_pos(q, 0, &mut picks, &mut used)? {
            Ok(Some(picks))
        } else {
            Ok(None)
        }
    }

    fn backtrack_pos(
        &mut self,
        q: &Query,
        pos: usize,
        picks: &mut Vec<usize>,
        used: &mut BitVec,
    ) -> Result<bool> {
        if pos == q.t() {
            return Ok(true);
        }
        let target = q.indices()[pos];
        // Equal targets take strictly increasing set indices; queries are
        // multisets, so permuted assignments are the same assignment.
        let start = if pos > 0 && q.indices()[pos - 1] == target {
            picks[pos - 1] + 1
        } else {
            0
        };
        let count = self.sets(target).len();
        for idx in start..count {
            self.charge("searching for a disjoint assignment")?;
            let mask = self.sets(target)[idx].mask.clone();
            if used.intersects(&mask) {
                continue;
            }
            picks[pos] = idx;
            used.or_with(&mask);
            if self.backtrack_pos(q, pos + 1, picks, used)? {
                return Ok(true);
            }
            used.xor_with(&mask);
            picks[pos] = usize::MAX;
        }
        Ok(false)
    }

    /// Searches assignments of `q` in smallest-sets-first order for one
    /// that is replacement-robust. Returns the robust assignment, or the
    /// first assignment together with its first violating (position,
    /// newcomer) pair when none is robust.
    #[allow(clippy::type_complexity)]
    fn robust_assignment(
        &mut self,
        q: &Query,
    ) -> Result<std::result::Result<RecoveryAssignment, (RecoveryAssignment, usize, usize)>> {
        let cap = self.size_cap(q.t());
        let mut first_violation: Option<(RecoveryAssignment, usize, usize)> = None;
        let mut size = 2usize.min(cap);
        loop {
            for &target in q.indices() {
                self.ensure(target, size)?;
            }
            let mut robust: Option<RecoveryAssignment> = None;
            let mut picks = vec![usize::MAX; q.t()];
            let mut used = BitVec::zeros(self.g.n());
            self.robust_search(
                q,
                0,
                &mut picks,
                &mut used,
                &mut robust,
                &mut first_violation,
            )?;
            if let Some(a) = robust {
                return Ok(Ok(a));
            }
            if size >= cap {
                let hard = self.g.n().saturating_sub(q.t().saturating_sub(1)).max(1);
                if cap < hard {
                    return Err(Error::BudgetExceeded {
                        context: "recovery-set size cap below completeness threshold".into(),
                        limit: cap as u64,
                    });
                }
                let v = first_violation.expect("a batch code serves every query somehow");
                return Ok(Err(v));
            }
            size = (size * 2).min(cap);
        }
    }

    #[allow(clippy::type_complexity)]
    fn robust_search(
        &mut self,
        q: &Query,
        pos: usize,
        picks: &mut Vec<usize>,
        used: &mut BitVec,
        robust: &mut Option<RecoveryAssignment>,
        first_violation: &mut Option<(RecoveryAssignment, usize, usize)>,
    ) -> Result<()> {
        if robust.is_some() {
            return Ok(());
        }
        if pos == q.t() {
            let assignment = self.assignment_from_picks(q, picks);
            match self.robustness_violation(q, picks)? {
                None => *robust = Some(assignment),
                Some((j, newcomer)) => {
                    if first_violation.is_none() {
                        *first_violation = Some((assignment, j, newcomer));
                    }
                }
            }
            return Ok(());
        }
        let target = q.indices()[pos];
        let start = if pos > 0 && q.indices()[pos - 1] == target {
            picks[pos - 1] + 1
        } else {
            0
        };
        for idx in start..self.sets(target).len() {
            self.charge("searching for a robust assignment")?;
            let mask = self.sets(target)[idx].mask.clone();
            if used.intersects(&mask) {
                continue;
            }
            picks[pos] = idx;
            used.or_with(&mask);
            self.robust_search(q, pos + 1, picks, used, robust, first_violation)?;
            used.xor_with(&mask);
            picks[pos] = usize::MAX;
            if robust.is_some() {
                return Ok(());
            }
        }
        Ok(())
    }

    /// First (completed position, newcomer) pair that breaks the
    /// assignment, or `None` when every replacement is servable from the
    /// untouched columns.
    fn robustness_violation(
        &mut self,
        q: &Query,
        picks: &[usize],
    ) -> Result<Option<(usize, usize)>> {
        let n = self.g.n();
        let k = self.g.k();
        let t = q.t();
        let masks: Vec<BitVec> = q
            .indices()
            .iter()
            .zip(picks)
            .map(|(&target, &idx)| {
                self.cache[target].as_ref().expect("ensured").sets[idx]
                    .mask
                    .clone()
            })
            .collect();
        let mut seen_unions: Vec<BitVec> = Vec::with_capacity(t);
        for j in 0..t {
            let mut blocked = BitVec::zeros(n);
            for (idx, m) in masks.iter().enumerate() {
                if idx != j {
                    blocked.or_with(m);
                }
            }
            if seen_unions.contains(&blocked) {
                continue;
            }
            seen_unions.push(blocked.clone());
            let mut span = Echelon::new();
            for col in 0..n {
                if !blocked.get(col) {
                    span.insert(self.g.column(col));
                }
            }
            for newcomer in 0..k {
                self.charge("checking newcomer recoverability")?;
                if !span.contains(&BitVec::unit(k, newcomer)) {
                    return Ok(Some((j, newcomer)));
                }
            }
        }
        Ok(None)
    }
}

fn all_queries(k: usize, t: usize) -> impl Iterator<Item = Query> {
    (0..k)
        .combinations_with_replacement(t)
        .map(|indices| Query { indices })
}

fn multiset_space(k: usize, t: usize) -> f64 {
    // C(k + t - 1, t)
    let mut acc = 1f64;
    for i in 0..t {
        acc = acc * (k + i) as f64 / (i + 1) as f64;
    }
    acc
}

fn space_warning(k: usize, t: usize, limits: &SearchLimits) -> Option<String> {
    let space = multiset_space(k, t);
    if space > limits.max_nodes as f64 {
        Some(format!(
            "query space of {space:.3e} multisets exceeds the node budget {}",
            limits.max_nodes
        ))
    } else {
        None
    }
}

/// Finds a disjoint assignment of minimal recovery sets for `q`, or `None`.
/// Deterministic: smallest-sets-first backtracking, lexicographic tie-break.
pub fn find_disjoint_assignment(
    g: &GeneratorMatrix,
    q: &Query,
    limits: &SearchLimits,
) -> Result<Option<RecoveryAssignment>> {
    let mut ctx = SearchCtx::new(g, limits);
    ctx.first_assignment(q)
}

/// Decides the batch property: every multiset of `t` information symbols
/// must admit pairwise disjoint recovery sets.
pub fn is_batch_code(g: &GeneratorMatrix, t: usize, limits: &SearchLimits) -> Result<BatchReport> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    let mut ctx = SearchCtx::new(g, limits);
    let report = batch_with_ctx(&mut ctx, t)?;
    Ok(report)
}

fn batch_with_ctx(ctx: &mut SearchCtx, t: usize) -> Result<BatchReport> {
    let k = ctx.g.k();
    let warning = space_warning(k, t, ctx.limits);
    for q in all_queries(k, t) {
        if ctx.first_assignment(&q)?.is_none() {
            return Ok(BatchReport {
                holds: false,
                counterexample: Some(q),
                cost: SearchCost {
                    nodes: ctx.nodes,
                    space_warning: warning,
                },
            });
        }
    }
    Ok(BatchReport {
        holds: true,
        counterexample: None,
        cost: SearchCost {
            nodes: ctx.nodes,
            space_warning: warning,
        },
    })
}

/// Decides the PIR property: batch restricted to uniform queries
/// `(x_i, ..., x_i)`.
pub fn is_pir_code(g: &GeneratorMatrix, t: usize, limits: &SearchLimits) -> Result<PirReport> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    let mut ctx = SearchCtx::new(g, limits);
    for i in 0..g.k() {
        let q = Query::uniform(i, t);
        if ctx.first_assignment(&q)?.is_none() {
            return Ok(PirReport {
                holds: false,
                counterexample: Some(i),
                cost: SearchCost {
                    nodes: ctx.nodes,
                    space_warning: None,
                },
            });
        }
    }
    Ok(PirReport {
        holds: true,
        counterexample: None,
        cost: SearchCost {
            nodes: ctx.nodes,
            space_warning: None,
        },
    })
}

/// Decides the asynchronous-batch property.
///
/// Strict mode: still-running requests keep their recovery sets, so the
/// serving assignment must be chosen robustly up front. For every query
/// there must exist a disjoint assignment such that for every completed
/// position and every newcomer symbol, the newcomer is recoverable from
/// coordinates untouched by the remaining sets. The newcomer check is
/// algebraic (span membership), so it ranges over all recovery sets.
/// On failure the witness is the first assignment (smallest-sets-first
/// order) of the first failing query, with its first violating
/// (completed position, newcomer) pair.
///
/// Relaxed mode: the remaining sets may be re-chosen jointly with the
/// newcomer's, so only servability of the replaced multiset is required.
pub fn is_asynchronous_batch_code(
    g: &GeneratorMatrix,
    t: usize,
    mode: AsyncMode,
    limits: &SearchLimits,
) -> Result<AsyncReport> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    let mut ctx = SearchCtx::new(g, limits);
    let batch = batch_with_ctx(&mut ctx, t)?;
    if !batch.holds {
        return Ok(AsyncReport {
            holds: false,
            witness: None,
            not_batch: batch.counterexample,
            cost: SearchCost {
                nodes: ctx.nodes,
                space_warning: batch.cost.space_warning,
            },
        });
    }
    let warning = batch.cost.space_warning;
    let k = g.k();

    match mode {
        AsyncMode::Strict => {
            for q in all_queries(k, t) {
                if let Err((assignment, j, newcomer)) = ctx.robust_assignment(&q)? {
                    return Ok(AsyncReport {
                        holds: false,
                        witness: Some(AsyncWitness {
                            query: q,
                            assignment,
                            completed_pos: j,
                            newcomer,
                        }),
                        not_batch: None,
                        cost: SearchCost {
                            nodes: ctx.nodes,
                            space_warning: warning,
                        },
                    });
                }
            }
        }
        AsyncMode::Relaxed => {
            let mut memo: HashMap<Vec<usize>, bool> = HashMap::new();
            for q in all_queries(k, t) {
                for j in 0..t {
                    if j > 0 && q.indices()[j] == q.indices()[j - 1] {
                        continue;
                    }
                    for newcomer in 0..k {
                        ctx.charge("checking replacement queries")?;
                        let mut replaced = q.indices().to_vec();
                        replaced.remove(j);
                        replaced.push(newcomer);
                        replaced.sort_unstable();
                        let servable = match memo.get(&replaced) {
                            Some(&v) => v,
                            None => {
                                let q2 = Query {
                                    indices: replaced.clone(),
                                };
                                let v = ctx.first_assignment(&q2)?.is_some();
                                memo.insert(replaced.clone(), v);
                                v
                            }
                        };
                        if !servable {
                            let assignment = ctx
                                .first_assignment(&q)?
                                .expect("batch property verified above");
                            return Ok(AsyncReport {
                                holds: false,
                                witness: Some(AsyncWitness {
                                    query: q,
                                    assignment,
                                    completed_pos: j,
                                    newcomer,
                                }),
                                not_batch: None,
                                cost: SearchCost {
                                    nodes: ctx.nodes,
                                    space_warning: warning,
                                },
                            });
                        }
                    }
                }
            }
        }
    }

    Ok(AsyncReport {
        holds: true,
        witness: None,
        not_batch: None,
        cost: SearchCost {
            nodes: ctx.nodes,
            space_warning: warning,
        },
    })
}
