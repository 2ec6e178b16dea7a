//! Deterministic discrete-event simulation of batch retrieval from a coded
//! server farm with heterogeneous response times.
//!
//! Each admitted request occupies the servers of one recovery set until it
//! completes; servers held by distinct in-flight requests are disjoint at
//! every instant. Asynchronous mode admits the next request as soon as any
//! completion frees a slot, provided a recovery set disjoint from the
//! still-running ones exists; otherwise it records a stall and retries at
//! the next completion. Synchronous mode admits whole batches.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::code::GeneratorMatrix;
use crate::constructions;
use crate::error::{Error, Result};
use crate::formats;
use crate::gf2::{BitVec, Echelon};
use crate::verify::{enumerate_recovery_sets, RecoverySet, SearchLimits};

/// Where the simulated code comes from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeRef {
    /// One of the named constructions: "example1", "simplex", "t3:m",
    /// "efr:m:r".
    Builtin { builtin: String },
    /// Path to a matrix file (text or JSON).
    File { file: PathBuf },
    /// Inline matrix rows as 0/1 strings.
    Inline { rows: Vec<String> },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LatencyModel {
    /// Every read takes exactly `value` time units.
    Deterministic { value: f64 },
    /// Independent exponential with the given mean.
    Exponential { mean: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Synchronous,
    Asynchronous,
}

/// Simulation input. Workload entries are 1-based information-symbol
/// indices; a fixed seed yields a byte-identical trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub code: CodeRef,
    pub t: usize,
    pub workload: Vec<usize>,
    pub latency: LatencyModel,
    pub mode: SimMode,
    pub seed: u64,
    /// When set, a blocked admission may re-plan the recovery sets of the
    /// still-running requests jointly with the newcomer's instead of
    /// stalling. Off by default: running requests keep their servers.
    #[serde(default)]
    pub relaxed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Admit,
    Complete,
    Stall,
    /// Relaxed mode only: a running request switched to a fresh set.
    Replan,
}

/// One trace event. `query` is the 0-based request sequence number;
/// `servers` are 1-based codeword coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub query: usize,
    pub servers: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TraceStats {
    pub completed: usize,
    pub stalls: usize,
    pub makespan: f64,
    /// Mean of (completion - admission) over completed requests.
    pub mean_completion: f64,
    /// Time-averaged fraction of busy servers.
    pub mean_occupancy: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RetrievalTrace {
    pub events: Vec<Event>,
    pub stats: TraceStats,
}

pub fn resolve_code(code: &CodeRef) -> Result<GeneratorMatrix> {
    match code {
        CodeRef::Builtin { builtin } => builtin_code(builtin),
        CodeRef::File { file } => formats::read_matrix_file(file),
        CodeRef::Inline { rows } => formats::matrix_from_row_strings(rows),
    }
}

fn builtin_code(name: &str) -> Result<GeneratorMatrix> {
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["example1"] => Ok(constructions::example1_code()),
        ["simplex"] => Ok(constructions::simplex_code()),
        ["t3", m] => {
            let m: usize = m
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad builtin {name}")))?;
            Ok(constructions::construct_t3(m)?.1)
        }
        ["efr", m, r] => {
            let m: usize = m
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad builtin {name}")))?;
            let r: usize = r
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad builtin {name}")))?;
            Ok(constructions::grid_line_code(m, r)?.1)
        }
        _ => Err(Error::InvalidInput(format!("unknown builtin code {name}"))),
    }
}

/// Per-symbol candidate recovery sets, grown lazily by size.
struct SchedulerPool<'a> {
    g: &'a GeneratorMatrix,
    limits: SearchLimits,
    lists: Vec<Vec<RecoverySet>>,
    complete_to: Vec<usize>,
}

impl<'a> SchedulerPool<'a> {
    fn new(g: &'a GeneratorMatrix) -> Self {
        SchedulerPool {
            g,
            limits: SearchLimits::default(),
            lists: vec![Vec::new(); g.k()],
            complete_to: vec![0; g.k()],
        }
    }

    /// Smallest (size, then lexicographic) recovery set for `symbol`
    /// avoiding `busy`, or None when no recovery set at all avoids it.
    fn pick(&mut self, symbol: usize, busy: &BitVec) -> Result<Option<Vec<usize>>> {
        // Algebraic existence first: the symbol must lie in the span of
        // the free columns, otherwise no recovery set can avoid `busy`.
        let mut span = Echelon::new();
        let mut free = 0usize;
        for col in 0..self.g.n() {
            if !busy.get(col) {
                span.insert(self.g.column(col));
                free += 1;
            }
        }
        if !span.contains(&BitVec::unit(self.g.k(), symbol)) {
            return Ok(None);
        }
        // A disjoint set exists and its support fits inside the free
        // coordinates; grow the candidate list until it shows up.
        let mut size = 2usize.min(free.max(1));
        loop {
            if self.complete_to[symbol] < size {
                self.lists[symbol] = enumerate_recovery_sets(self.g, symbol, size, &self.limits)?;
                self.complete_to[symbol] = size;
            }
            for set in &self.lists[symbol] {
                let mask = BitVec::from_ones(self.g.n(), &set.coords);
                if !mask.intersects(busy) {
                    return Ok(Some(set.coords.clone()));
                }
            }
            if size >= free {
                return Err(Error::InvalidInput(
                    "span check promised a recovery set that enumeration did not find".into(),
                ));
            }
            size = (size * 2).min(free);
        }
    }
}

struct Running {
    query: usize,
    servers: Vec<usize>, // 0-based
    admitted: f64,
    finish: f64,
}

struct Engine<'a> {
    g: &'a GeneratorMatrix,
    pool: SchedulerPool<'a>,
    rng: ChaCha8Rng,
    latency: LatencyModel,
    busy: BitVec,
    running: Vec<Running>,
    events: Vec<Event>,
    time: f64,
    last_time: f64,
    occupancy_integral: f64,
    completion_spans: Vec<f64>,
    stalls: usize,
}

impl<'a> Engine<'a> {
    fn new(g: &'a GeneratorMatrix, latency: LatencyModel, seed: u64) -> Self {
        Engine {
            g,
            pool: SchedulerPool::new(g),
            rng: ChaCha8Rng::seed_from_u64(seed),
            latency,
            busy: BitVec::zeros(g.n()),
            running: Vec::new(),
            events: Vec::new(),
            time: 0.0,
            last_time: 0.0,
            occupancy_integral: 0.0,
            completion_spans: Vec::new(),
            stalls: 0,
        }
    }

    fn advance_to(&mut self, t: f64) {
        self.occupancy_integral += self.busy.count_ones() as f64 * (t - self.last_time);
        self.last_time = t;
        self.time = t;
    }

    fn sample_latency(&mut self) -> f64 {
        match self.latency {
            LatencyModel::Deterministic { value } => value,
            LatencyModel::Exponential { mean } => Exp::new(1.0 / mean)
                .expect("positive mean")
                .sample(&mut self.rng),
        }
    }

    /// Admits request `query` for `symbol` if a disjoint set exists.
    fn try_admit(&mut self, query: usize, symbol: usize) -> Result<bool> {
        let Some(coords) = self.pool.pick(symbol, &self.busy)? else {
            return Ok(false);
        };
        debug_assert!(
            coords.iter().all(|&c| !self.busy.get(c)),
            "scheduler invariant: assigned servers must be free"
        );
        // One read per server, sampled in ascending server order.
        let mut finish = self.time;
        for &c in &coords {
            self.busy.set(c, true);
            let l = self.sample_latency();
            if l > finish - self.time {
                finish = self.time + l;
            }
        }
        self.events.push(Event {
            time: self.time,
            kind: EventKind::Admit,
            query,
            servers: coords.iter().map(|&c| c + 1).collect(),
        });
        self.running.push(Running {
            query,
            servers: coords,
            admitted: self.time,
            finish,
        });
        Ok(true)
    }

    /// Completes the earliest-finishing request (ties: lowest request id).
    fn complete_next(&mut self) -> Option<usize> {
        let idx = self
            .running
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.finish.total_cmp(&b.finish).then(a.query.cmp(&b.query)))
            .map(|(i, _)| i)?;
        let done = self.running.swap_remove(idx);
        self.advance_to(done.finish);
        for &c in &done.servers {
            self.busy.set(c, false);
        }
        self.completion_spans.push(done.finish - done.admitted);
        self.events.push(Event {
            time: done.finish,
            kind: EventKind::Complete,
            query: done.query,
            servers: done.servers.iter().map(|&c| c + 1).collect(),
        });
        Some(done.query)
    }

    fn record_stall(&mut self, query: usize) {
        self.stalls += 1;
        self.events.push(Event {
            time: self.time,
            kind: EventKind::Stall,
            query,
            servers: Vec::new(),
        });
    }

    /// Relaxed scheduling: re-chooses the sets of all running requests
    /// jointly with the newcomer's. Finish times are kept (the work in
    /// flight is idealized as transferable); server occupancy changes.
    fn try_replan_admit(
        &mut self,
        query: usize,
        symbol: usize,
        workload: &[usize],
    ) -> Result<bool> {
        // Consumers sorted by (symbol, request id); the newcomer sorts last
        // among its symbol. The assignment positions follow the same sorted
        // multiset, so a straight zip matches targets.
        let mut consumers: Vec<(usize, usize, Option<usize>)> = self
            .running
            .iter()
            .enumerate()
            .map(|(i, r)| (workload[r.query], r.query, Some(i)))
            .collect();
        consumers.push((symbol, usize::MAX, None));
        consumers.sort_unstable();

        let symbols: Vec<usize> = consumers.iter().map(|c| c.0).collect();
        let q = crate::verify::Query::new(self.g.k(), symbols)?;
        let Some(assignment) =
            crate::verify::find_disjoint_assignment(self.g, &q, &SearchLimits::default())?
        else {
            return Ok(false);
        };

        let mut newcomer_set = None;
        let mut reassigned: Vec<(usize, Vec<usize>)> = Vec::new();
        for (consumer, set) in consumers.into_iter().zip(assignment.sets) {
            debug_assert_eq!(consumer.0, set.target);
            match consumer.2 {
                Some(i) => reassigned.push((i, set.coords)),
                None => newcomer_set = Some(set.coords),
            }
        }
        let newcomer_set = newcomer_set.expect("newcomer consumer present");

        self.busy = BitVec::zeros(self.g.n());
        for (i, coords) in reassigned {
            for &c in &coords {
                self.busy.set(c, true);
            }
            if self.running[i].servers != coords {
                self.running[i].servers = coords;
                self.events.push(Event {
                    time: self.time,
                    kind: EventKind::Replan,
                    query: self.running[i].query,
                    servers: self.running[i].servers.iter().map(|&c| c + 1).collect(),
                });
            }
        }
        let mut finish = self.time;
        for &c in &newcomer_set {
            self.busy.set(c, true);
            let l = self.sample_latency();
            if l > finish - self.time {
                finish = self.time + l;
            }
        }
        self.events.push(Event {
            time: self.time,
            kind: EventKind::Admit,
            query,
            servers: newcomer_set.iter().map(|&c| c + 1).collect(),
        });
        self.running.push(Running {
            query,
            servers: newcomer_set,
            admitted: self.time,
            finish,
        });
        Ok(true)
    }
}

/// Runs the simulation described by `cfg`.
pub fn simulate(cfg: &SimConfig) -> Result<RetrievalTrace> {
    let g = resolve_code(&cfg.code)?;
    if cfg.t == 0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    match cfg.latency {
        LatencyModel::Deterministic { value } if !(value.is_finite() && value >= 0.0) => {
            return Err(Error::InvalidInput(
                "deterministic latency must be finite and non-negative".into(),
            ));
        }
        LatencyModel::Exponential { mean } if !(mean.is_finite() && mean > 0.0) => {
            return Err(Error::InvalidInput(
                "exponential latency mean must be finite and positive".into(),
            ));
        }
        _ => {}
    }
    let mut workload = Vec::with_capacity(cfg.workload.len());
    for &w in &cfg.workload {
        if w == 0 || w > g.k() {
            return Err(Error::IndexOutOfRange {
                index: w,
                bound: g.k() + 1,
            });
        }
        workload.push(w - 1);
    }

    let mut warnings = Vec::new();
    match crate::verify::is_batch_code(&g, cfg.t, &SearchLimits::default()) {
        Ok(r) if !r.holds => warnings.push(format!(
            "code is not a batch code at t = {}; stalls are expected",
            cfg.t
        )),
        Err(e) => warnings.push(format!("batch precondition not checked: {e}")),
        _ => {}
    }

    let mut engine = Engine::new(&g, cfg.latency, cfg.seed);
    let mut next = 0usize; // next workload position to admit

    match cfg.mode {
        SimMode::Asynchronous => {
            let first_batch = cfg.t.min(workload.len());
            while next < first_batch {
                if !engine.try_admit(next, workload[next])? {
                    return Err(Error::UnsatisfiableFirstBatch);
                }
                next += 1;
            }
            while !engine.running.is_empty() {
                engine.complete_next();
                while engine.running.len() < cfg.t && next < workload.len() {
                    let admitted = engine.try_admit(next, workload[next])?
                        || (cfg.relaxed
                            && engine.try_replan_admit(next, workload[next], &workload)?);
                    if admitted {
                        next += 1;
                    } else {
                        engine.record_stall(next);
                        break;
                    }
                }
            }
        }
        SimMode::Synchronous => {
            while next < workload.len() {
                // Admit one batch at the current instant.
                let mut admitted_any = false;
                while engine.running.len() < cfg.t && next < workload.len() {
                    if engine.try_admit(next, workload[next])? {
                        next += 1;
                        admitted_any = true;
                    } else if admitted_any {
                        // Batch closed early; leftover item waits.
                        engine.record_stall(next);
                        break;
                    } else {
                        return Err(Error::UnsatisfiableFirstBatch);
                    }
                }
                // Wait for the whole batch.
                while !engine.running.is_empty() {
                    engine.complete_next();
                }
            }
        }
    }

    let makespan = engine.time;
    let completed = engine.completion_spans.len();
    let mean_completion = if completed == 0 {
        0.0
    } else {
        engine.completion_spans.iter().sum::<f64>() / completed as f64
    };
    let mean_occupancy = if makespan > 0.0 {
        engine.occupancy_integral / (makespan * g.n() as f64)
    } else {
        0.0
    };
    Ok(RetrievalTrace {
        events: engine.events,
        stats: TraceStats {
            completed,
            stalls: engine.stalls,
            makespan,
            mean_completion,
            mean_occupancy,
            warnings,
        },
    })
}
