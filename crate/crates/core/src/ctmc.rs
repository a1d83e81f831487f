//! Continuous-time rewiring processes on `[n]`.
//!
//! Events come from competing exponential clocks. Every pair carries a
//! set-to-0 clock of rate `c0` and a set-to-1 clock of rate `c1`; global
//! atom `k` fires at rate `lambda_k` times the probability that its map is
//! not the identity on `[n]`, and its map is then drawn conditioned on being
//! non-identity. The event stream does not depend on the current state, so
//! one stream can drive any number of initial conditions.
//!
//! Random numbers are consumed per event in a fixed order: one exponential
//! waiting time, one uniform selecting the channel, then either one uniform
//! pair index (local events) or the conditioned map draw (global events).

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{check_same_order, Error, Result};
use crate::graph::{distance, Graph, PairArray, Permutation, RewiringMap};
use crate::measures::{er_transition_prob, EdgeCounts, RewiringMeasureSpec};
use crate::pairs::{pair_count, pair_index, pair_of};
use crate::verify::CheckReport;

/// Largest order with a dense generator.
pub const MAX_GENERATOR_ORDER: usize = 4;
/// Largest order for which [`jump_rate_brute_force`] enumerates maps.
pub const MAX_BRUTE_FORCE_ORDER: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub enum EventKind {
    /// Single-edge update setting the pair `(i, j)`, `i < j`, to `bit`.
    Local { pair: (usize, usize), bit: bool },
    /// Global rewiring by atom `component` (0-based position in the spec).
    Global { component: usize, map: RewiringMap },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
}

impl Event {
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        match &self.kind {
            EventKind::Local { pair: (i, j), bit } => {
                if *j >= g.order() {
                    return Err(Error::DimensionMismatch {
                        left: j + 1,
                        right: g.order(),
                    });
                }
                let mut next = g.clone();
                next.set_edge(*i, *j, *bit);
                Ok(next)
            }
            EventKind::Global { map, .. } => map.apply(g),
        }
    }

    /// The rewiring map of this event on `[n]`.
    pub fn map(&self, n: usize) -> RewiringMap {
        match &self.kind {
            EventKind::Local { pair: (i, j), bit } => RewiringMap::single_edge_update(n, *i, *j, *bit),
            EventKind::Global { map, .. } => map.clone(),
        }
    }
}

/// Event totals of the process restricted to `[n]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateSummary {
    pub n: usize,
    pub c0: f64,
    pub c1: f64,
    /// `n(n-1)/2 (c0 + c1)`.
    pub local_total: f64,
    /// Per-atom event rate `lambda_k (1 - ((1 - p0) p1)^(n(n-1)/2))`.
    pub global_rates: Vec<f64>,
    /// Per-atom acceptance probability of the non-identity rejection step.
    pub acceptance: Vec<f64>,
    pub global_total: f64,
    #[serde(skip)]
    atoms: Vec<(f64, f64, f64)>,
}

impl RateSummary {
    pub fn total(&self) -> f64 {
        self.local_total + self.global_total
    }

    /// Rate at which the state `g` actually changes.
    pub fn effective_rate(&self, g: &Graph) -> f64 {
        let EdgeCounts { n0, n1 } = EdgeCounts::of(g);
        let local = self.c1 * n0 as f64 + self.c0 * n1 as f64;
        let global: f64 = self
            .atoms
            .iter()
            .map(|&(rate, p0, p1)| rate * (1.0 - (1.0 - p0).powi(n0 as i32) * p1.powi(n1 as i32)))
            .sum();
        local + global
    }
}

pub fn rate_summary(spec: &RewiringMeasureSpec, n: usize) -> RateSummary {
    let pairs = pair_count(n) as f64;
    let acceptance: Vec<f64> = spec.global().iter().map(|a| a.limit.nonidentity_prob(n)).collect();
    let global_rates: Vec<f64> = spec.global().iter().zip(&acceptance).map(|(a, p)| a.rate * p).collect();
    RateSummary {
        n,
        c0: spec.c0(),
        c1: spec.c1(),
        local_total: pairs * (spec.c0() + spec.c1()),
        global_total: global_rates.iter().sum(),
        global_rates,
        acceptance,
        atoms: spec
            .global()
            .iter()
            .map(|a| (a.rate, a.limit.p0(), a.limit.p1()))
            .collect(),
    }
}

/// Draws successive events of the process on `[n]`.
#[derive(Clone, Debug)]
pub struct EventSampler {
    spec: RewiringMeasureSpec,
    rates: RateSummary,
    clock: Option<Exp<f64>>,
}

impl EventSampler {
    pub fn new(spec: &RewiringMeasureSpec, n: usize) -> Result<Self> {
        let rates = rate_summary(spec, n);
        let total = rates.total();
        if !total.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rate",
                value: total,
                reason: "total event rate must be finite",
            });
        }
        let clock = if total > 0.0 {
            Some(Exp::new(total).map_err(|_| Error::InvalidParameter {
                name: "rate",
                value: total,
                reason: "invalid exponential rate",
            })?)
        } else {
            None
        };
        Ok(EventSampler {
            spec: spec.clone(),
            rates,
            clock,
        })
    }

    pub fn rates(&self) -> &RateSummary {
        &self.rates
    }

    /// The first event after time `now`; `None` when nothing can happen.
    pub fn next<R: Rng + ?Sized>(&self, now: f64, rng: &mut R) -> Result<Option<Event>> {
        let Some(clock) = self.clock else {
            return Ok(None);
        };
        let time = now + clock.sample(rng);
        let n = self.rates.n;
        let pairs = pair_count(n);
        let mut u = rng.random::<f64>() * self.rates.total();
        let local0 = pairs as f64 * self.rates.c0;
        let local1 = pairs as f64 * self.rates.c1;
        let kind = if pairs > 0 && (u < local0 + local1 || self.rates.global_total <= 0.0) {
            let bit = u >= local0;
            let (i, j) = pair_of(rng.random_range(0..pairs));
            EventKind::Local { pair: (i, j), bit }
        } else {
            u -= local0 + local1;
            let positive: Vec<usize> = (0..self.rates.global_rates.len())
                .filter(|&k| self.rates.global_rates[k] > 0.0)
                .collect();
            let mut component = *positive.last().expect("a global channel has positive rate");
            for &k in &positive {
                if u < self.rates.global_rates[k] {
                    component = k;
                    break;
                }
                u -= self.rates.global_rates[k];
            }
            let map = self.spec.global()[component].limit.sample_nonidentity(n, rng)?;
            EventKind::Global { component, map }
        };
        Ok(Some(Event { time, kind }))
    }
}

/// Events on `[n]` in `(0, horizon]`.
pub fn sample_events<R: Rng + ?Sized>(
    spec: &RewiringMeasureSpec,
    n: usize,
    horizon: f64,
    rng: &mut R,
) -> Result<Vec<Event>> {
    check_horizon(horizon)?;
    let sampler = EventSampler::new(spec, n)?;
    let mut events = Vec::new();
    let mut now = 0.0;
    while let Some(e) = sampler.next(now, rng)? {
        if e.time > horizon {
            break;
        }
        now = e.time;
        events.push(e);
    }
    Ok(events)
}

fn check_horizon(horizon: f64) -> Result<()> {
    if horizon >= 0.0 && horizon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "horizon",
            value: horizon,
            reason: "must be finite and nonnegative",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CtmcTrajectory {
    pub initial: Graph,
    pub events: Vec<Event>,
    pub horizon: f64,
    /// States at the requested grid times.
    pub snapshots: Vec<(f64, Graph)>,
}

impl CtmcTrajectory {
    /// Builds a trajectory from an event stream, taking snapshots at `grid`.
    pub fn from_events(initial: Graph, events: Vec<Event>, horizon: f64, grid: &[f64]) -> Result<Self> {
        check_horizon(horizon)?;
        let mut traj = CtmcTrajectory {
            initial,
            events,
            horizon,
            snapshots: Vec::new(),
        };
        let mut snapshots = Vec::with_capacity(grid.len());
        for &t in grid {
            if !(0.0..=horizon).contains(&t) {
                return Err(Error::InvalidParameter {
                    name: "snapshot time",
                    value: t,
                    reason: "must lie in [0, horizon]",
                });
            }
            snapshots.push((t, traj.state_at(t)?));
        }
        traj.snapshots = snapshots;
        Ok(traj)
    }

    pub fn order(&self) -> usize {
        self.initial.order()
    }

    /// Initial state followed by the state after each event.
    pub fn replay(&self) -> Result<Vec<Graph>> {
        let mut states = Vec::with_capacity(self.events.len() + 1);
        states.push(self.initial.clone());
        for e in &self.events {
            let next = e.apply(states.last().expect("nonempty"))?;
            states.push(next);
        }
        Ok(states)
    }

    /// State at time `t` (right-continuous).
    pub fn state_at(&self, t: f64) -> Result<Graph> {
        let mut g = self.initial.clone();
        for e in self.events.iter().take_while(|e| e.time <= t) {
            g = e.apply(&g)?;
        }
        Ok(g)
    }

    pub fn final_state(&self) -> Result<Graph> {
        self.state_at(f64::INFINITY)
    }

    /// Time average of the edge density over `[0, horizon]`.
    pub fn time_average_edge_density(&self) -> Result<f64> {
        let pairs = self.initial.pair_count();
        if pairs == 0 || self.horizon == 0.0 {
            return Ok(self.initial.edge_count() as f64 / pairs.max(1) as f64);
        }
        let mut g = self.initial.clone();
        let mut last = 0.0;
        let mut area = 0.0;
        for e in &self.events {
            area += (e.time - last) * g.edge_count() as f64;
            g = e.apply(&g)?;
            last = e.time;
        }
        area += (self.horizon - last) * g.edge_count() as f64;
        Ok(area / (self.horizon * pairs as f64))
    }

    /// The restriction to `[m]`: events acting as the identity there are
    /// deleted and the remaining maps restricted.
    pub fn restrict(&self, m: usize) -> Result<CtmcTrajectory> {
        let grid: Vec<f64> = self.snapshots.iter().map(|(t, _)| *t).collect();
        CtmcTrajectory::from_events(
            self.initial.restrict(m)?,
            restrict_events(&self.events, m)?,
            self.horizon,
            &grid,
        )
    }

    /// JSON-lines event log.
    pub fn write_event_log<W: Write>(&self, mut out: W) -> Result<()> {
        for e in &self.events {
            serde_json::to_writer(&mut out, &EventRecord::from_event(e))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn simulate_ctmc<R: Rng + ?Sized>(
    g0: &Graph,
    spec: &RewiringMeasureSpec,
    horizon: f64,
    grid: &[f64],
    rng: &mut R,
) -> Result<CtmcTrajectory> {
    let events = sample_events(spec, g0.order(), horizon, rng)?;
    CtmcTrajectory::from_events(g0.clone(), events, horizon, grid)
}

/// Thins an event stream on `[n]` to `[m]`.
pub fn restrict_events(events: &[Event], m: usize) -> Result<Vec<Event>> {
    let mut out = Vec::new();
    for e in events {
        match &e.kind {
            EventKind::Local { pair: (_, j), .. } => {
                if *j < m {
                    out.push(e.clone());
                }
            }
            EventKind::Global { component, map } => {
                let small = map.restrict(m)?;
                if !small.is_identity() {
                    out.push(Event {
                        time: e.time,
                        kind: EventKind::Global {
                            component: *component,
                            map: small,
                        },
                    });
                }
            }
        }
    }
    Ok(out)
}

/// One line of the event log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub t: f64,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pair: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bit: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub component: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub map: Option<String>,
}

impl EventRecord {
    pub fn from_event(e: &Event) -> Self {
        match &e.kind {
            EventKind::Local { pair: (i, j), bit } => EventRecord {
                t: e.time,
                kind: "local".into(),
                pair: Some([i + 1, j + 1]),
                bit: Some(u8::from(*bit)),
                component: None,
                map: None,
            },
            EventKind::Global { component, map } => EventRecord {
                t: e.time,
                kind: "global".into(),
                pair: None,
                bit: None,
                component: Some(*component),
                map: Some(map.to_hex()),
            },
        }
    }

    pub fn to_event(&self, n: usize) -> Result<Event> {
        let kind = match (self.kind.as_str(), self.pair, self.bit, self.component, &self.map) {
            ("local", Some([i, j]), Some(bit @ 0..=1), None, None) if 1 <= i && i < j && j <= n => EventKind::Local {
                pair: (i - 1, j - 1),
                bit: bit == 1,
            },
            ("global", None, None, Some(component), Some(hex)) => EventKind::Global {
                component,
                map: RewiringMap::from_hex(n, hex)?,
            },
            _ => return Err(Error::InvalidArray(format!("malformed event record at t = {}", self.t))),
        };
        Ok(Event { time: self.t, kind })
    }
}

/// Parses an event log for a process on `[n]`.
pub fn parse_event_log(text: &str, n: usize) -> Result<Vec<Event>> {
    let mut events: Vec<Event> = Vec::new();
    for (idx, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let rec: EventRecord =
            serde_json::from_str(line).map_err(|e| Error::parse(idx + 1, e.to_string()))?;
        let event = rec.to_event(n).map_err(|e| Error::parse(idx + 1, e.to_string()))?;
        if events.last().is_some_and(|prev| prev.time >= event.time) {
            return Err(Error::parse(idx + 1, "event times must increase strictly"));
        }
        events.push(event);
    }
    Ok(events)
}

fn single_pair_difference(g: &Graph, g2: &Graph) -> Option<bool> {
    let mut diff = (0..g.pair_count()).filter(|&k| g.pair(k) != g2.pair(k));
    let k = diff.next()?;
    diff.next().is_none().then(|| g2.pair(k))
}

fn check_jump(g: &Graph, g2: &Graph) -> Result<()> {
    check_same_order(g.order(), g2.order())?;
    if g == g2 {
        return Err(Error::InvalidArray(
            "jump rates are defined between distinct states".into(),
        ));
    }
    Ok(())
}

/// Rate of jumping from `g` straight to `g2 != g`.
pub fn jump_rate(spec: &RewiringMeasureSpec, g: &Graph, g2: &Graph) -> Result<f64> {
    check_jump(g, g2)?;
    let mut rate = 0.0;
    for atom in spec.global() {
        rate += atom.rate * er_transition_prob(atom.limit.p0(), atom.limit.p1(), g, g2)?;
    }
    Ok(rate + local_rate(spec, g, g2))
}

fn local_rate(spec: &RewiringMeasureSpec, g: &Graph, g2: &Graph) -> f64 {
    match single_pair_difference(g, g2) {
        Some(true) => spec.c1(),
        Some(false) => spec.c0(),
        None => 0.0,
    }
}

/// [`jump_rate`] by summing over every map on `[n]`, `n <= 3`.
pub fn jump_rate_brute_force(spec: &RewiringMeasureSpec, g: &Graph, g2: &Graph) -> Result<f64> {
    check_jump(g, g2)?;
    let n = g.order();
    if n > MAX_BRUTE_FORCE_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_BRUTE_FORCE_ORDER,
            what: "brute-force jump rates",
        });
    }
    let mut rate = 0.0;
    for w in RewiringMap::all(n) {
        if w.apply(g)? == *g2 {
            rate += spec.global().iter().map(|a| a.rate * a.limit.density(&w)).sum::<f64>();
        }
    }
    for k in 0..pair_count(n) {
        let (i, j) = pair_of(k);
        for (bit, c) in [(false, spec.c0()), (true, spec.c1())] {
            if RewiringMap::single_edge_update(n, i, j, bit).apply(g)? == *g2 {
                rate += c;
            }
        }
    }
    Ok(rate)
}

fn check_generator_order(n: usize) -> Result<()> {
    if n > MAX_GENERATOR_ORDER {
        Err(Error::OrderTooLarge {
            n,
            max: MAX_GENERATOR_ORDER,
            what: "dense generators",
        })
    } else {
        Ok(())
    }
}

/// Generator row of `g`, indexed by [`Graph::index`]. The diagonal is minus
/// the sum of the off-diagonal entries taken in increasing order, so it only
/// depends on the multiset of rates.
pub fn generator_row(spec: &RewiringMeasureSpec, g: &Graph) -> Result<Vec<f64>> {
    let n = g.order();
    check_generator_order(n)?;
    let me = g.index().expect("small order") as usize;
    let mut row: Vec<f64> = Graph::all(n)
        .map(|h| if h == *g { Ok(0.0) } else { jump_rate(spec, g, &h) })
        .collect::<Result<_>>()?;
    let mut off: Vec<f64> = row.clone();
    off.sort_by(f64::total_cmp);
    row[me] = -off.iter().sum::<f64>();
    Ok(row)
}

/// Dense generator over all graphs of order `n <= 4`.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl Generator {
    pub fn new(spec: &RewiringMeasureSpec, n: usize) -> Result<Self> {
        check_generator_order(n)?;
        let rows = Graph::all(n).map(|g| generator_row(spec, &g)).collect::<Result<_>>()?;
        Ok(Generator { n, rows })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.rows[from][to]
    }

    pub fn rate(&self, from: &Graph, to: &Graph) -> f64 {
        self.get(from.index().expect("small") as usize, to.index().expect("small") as usize)
    }

    pub fn max_row_sum(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().sum::<f64>().abs())
            .fold(0.0, f64::max)
    }
}

/// Checks `Q_m(G, G') = sum over G''|[m] = G' of Q_n(G*, G'')` for every
/// extension `G*` of `G`, diagonal included.
pub fn verify_generator_consistency(
    spec: &RewiringMeasureSpec,
    m: usize,
    n: usize,
    tolerance: f64,
) -> Result<CheckReport> {
    if m == 0 || m >= n {
        return Err(Error::BadRestriction { m, n });
    }
    let small = Generator::new(spec, m)?;
    let big = Generator::new(spec, n)?;
    let mut report = CheckReport::new("generator-consistency", format!("m={m}, n={n}"), tolerance);
    let mask = (1usize << pair_count(m)) - 1;
    for from in 0..big.size() {
        let g = from & mask;
        for g2 in 0..small.size() {
            let lumped: f64 = (0..big.size()).filter(|to| to & mask == g2).map(|to| big.get(from, to)).sum();
            report.observe((small.get(g, g2) - lumped).abs(), || {
                format!("G*={:?}, G'={:?}", Graph::from_index(n, from as u64), Graph::from_index(m, g2 as u64))
            });
        }
    }
    Ok(report)
}

/// Checks `Q(G, G') = Q(G^σ, G'^σ)` for every permutation, exactly.
pub fn verify_generator_exchangeability(spec: &RewiringMeasureSpec, n: usize) -> Result<CheckReport> {
    let q = Generator::new(spec, n)?;
    let mut report = CheckReport::new("generator-exchangeability", format!("n={n}"), 0.0);
    let states: Vec<Graph> = Graph::all(n).collect();
    for sigma in Permutation::all(n) {
        let image: Vec<usize> = states
            .iter()
            .map(|g| Ok(g.permute(&sigma)?.index().expect("small") as usize))
            .collect::<Result<_>>()?;
        for a in 0..states.len() {
            for b in 0..states.len() {
                let diff = (q.get(a, b) - q.get(image[a], image[b])).abs();
                report.observe(diff, || format!("sigma={sigma:?}, G={:?}, G'={:?}", states[a], states[b]));
            }
        }
    }
    Ok(report)
}

/// Two trajectories driven by one event stream.
#[derive(Clone, Debug, PartialEq)]
pub struct CoupledRun {
    pub first: CtmcTrajectory,
    pub second: CtmcTrajectory,
    /// Distance at time 0 and after every event.
    pub distances: Vec<f64>,
}

impl CoupledRun {
    pub fn max_distance(&self) -> f64 {
        self.distances.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.distances.windows(2).all(|w| w[1] <= w[0])
    }
}

pub fn couple<R: Rng + ?Sized>(
    g0: &Graph,
    h0: &Graph,
    spec: &RewiringMeasureSpec,
    horizon: f64,
    rng: &mut R,
) -> Result<CoupledRun> {
    check_same_order(g0.order(), h0.order())?;
    let events = sample_events(spec, g0.order(), horizon, rng)?;
    let first = CtmcTrajectory::from_events(g0.clone(), events.clone(), horizon, &[])?;
    let second = CtmcTrajectory::from_events(h0.clone(), events, horizon, &[])?;
    let distances = first
        .replay()?
        .iter()
        .zip(second.replay()?.iter())
        .map(|(a, b)| distance(a, b))
        .collect::<Result<_>>()?;
    Ok(CoupledRun {
        first,
        second,
        distances,
    })
}

/// First time the process started at `g0` sits at `target`, or `None` if
/// that does not happen by `max_time` or no event can occur.
pub fn hitting_time<R: Rng + ?Sized>(
    g0: &Graph,
    target: &Graph,
    spec: &RewiringMeasureSpec,
    max_time: f64,
    rng: &mut R,
) -> Result<Option<f64>> {
    check_same_order(g0.order(), target.order())?;
    if g0 == target {
        return Ok(Some(0.0));
    }
    let sampler = EventSampler::new(spec, g0.order())?;
    let mut g = g0.clone();
    let mut now = 0.0;
    while let Some(e) = sampler.next(now, rng)? {
        if e.time > max_time {
            return Ok(None);
        }
        now = e.time;
        g = e.apply(&g)?;
        if g == *target {
            return Ok(Some(now));
        }
    }
    Ok(None)
}

/// Time for the pure set-to-1 process at rate `c1` to fill `[n]` from the
/// empty graph.
pub fn absorption_time<R: Rng + ?Sized>(n: usize, c1: f64, rng: &mut R) -> Result<f64> {
    let spec = RewiringMeasureSpec::local(0.0, c1)?;
    if pair_count(n) > 0 && c1 == 0.0 {
        return Err(Error::InvalidParameter {
            name: "c1",
            value: c1,
            reason: "must be positive for absorption",
        });
    }
    Ok(hitting_time(&Graph::empty(n), &Graph::complete(n), &spec, f64::INFINITY, rng)?
        .expect("a positive set-to-1 rate always fills the graph"))
}

/// Number of times the pair `(i, j)` changes status along the trajectory.
pub fn flip_count(traj: &CtmcTrajectory, i: usize, j: usize) -> Result<usize> {
    let k = pair_index(i, j);
    let states = traj.replay()?;
    Ok(states.windows(2).filter(|w| w[0].pair(k) != w[1].pair(k)).count())
}
