//! Discrete-time rewiring chains.
//!
//! A chain moves by applying i.i.d. random rewiring maps. For orders up to
//! [`MAX_EXACT_ORDER`] the full transition matrix is materialized, indexed
//! by [`Graph::index`] (the packed pair bits read as a binary number), and
//! the structural properties of kernel families are checked exhaustively.

use std::fmt::Write as _;
use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_same_order, Error, Result};
use crate::graph::{Graph, PairArray, Permutation, RewiringMap};
use crate::measures::{EdgeCounts, MapLaw, TransitionLaw};
use crate::pairs::pair_count;
use crate::verify::CheckReport;

/// Largest order with a dense kernel (64 states).
pub const MAX_EXACT_ORDER: usize = 4;

/// Power iteration stops once `||pi P - pi||_1` falls below this.
pub const STATIONARY_RESIDUAL: f64 = 1e-12;
pub const STATIONARY_MAX_ITERATIONS: usize = 1_000_000;

/// States of a simulated chain, `states[m]` after `m` steps.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteTrajectory {
    pub states: Vec<Graph>,
    /// `maps[m - 1]` produced `states[m]` from `states[m - 1]`.
    pub maps: Option<Vec<RewiringMap>>,
    pub seed: Option<u64>,
}

/// One line of the trajectory JSON-lines format (1-based edges).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub m: usize,
    pub edges: Vec<[usize; 2]>,
    pub stat: EdgeCounts,
}

impl TrajectoryRecord {
    pub fn from_graph(m: usize, g: &Graph) -> Self {
        TrajectoryRecord {
            m,
            edges: g.edges().map(|(i, j)| [i + 1, j + 1]).collect(),
            stat: EdgeCounts::of(g),
        }
    }

    /// Rebuilds the graph; the order is recovered from `n0 + n1 = n(n-1)/2`.
    pub fn to_graph(&self) -> Result<Graph> {
        let pairs = self.stat.n0 + self.stat.n1;
        let n = (1..)
            .take_while(|&n| pair_count(n) <= pairs)
            .last()
            .filter(|&n| pair_count(n) == pairs)
            .ok_or_else(|| Error::InvalidArray(format!("{pairs} pairs is not n(n-1)/2")))?;
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&[i, j]| (i.wrapping_sub(1), j.wrapping_sub(1)))
            .collect();
        let g = Graph::from_edges(n, &edges)?;
        if g.edge_count() != self.stat.n1 {
            return Err(Error::InvalidArray(format!(
                "record {} lists {} edges but n1 = {}",
                self.m,
                g.edge_count(),
                self.stat.n1
            )));
        }
        Ok(g)
    }
}

#[derive(Serialize)]
struct MapRecord<'a> {
    m: usize,
    map: &'a str,
}

impl DiscreteTrajectory {
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for (m, g) in self.states.iter().enumerate() {
            serde_json::to_writer(&mut out, &TrajectoryRecord::from_graph(m, g))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Recorded maps as `{"m": step, "map": hex}` lines.
    pub fn write_maps_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for (idx, w) in self.maps.iter().flatten().enumerate() {
            let hex = w.to_hex();
            serde_json::to_writer(&mut out, &MapRecord { m: idx + 1, map: &hex })?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// One chain step: draws `W` and returns `(W(g), W)`.
pub fn step<L: MapLaw, R: Rng + ?Sized>(g: &Graph, law: &L, rng: &mut R) -> Result<(Graph, RewiringMap)> {
    let w = law.sample_map(g.order(), rng)?;
    check_same_order(w.order(), g.order())?;
    Ok((w.apply(g)?, w))
}

pub fn simulate<L: MapLaw, R: Rng + ?Sized>(
    g0: &Graph,
    law: &L,
    steps: usize,
    rng: &mut R,
    record_maps: bool,
) -> Result<DiscreteTrajectory> {
    let mut states = Vec::with_capacity(steps + 1);
    let mut maps = record_maps.then(|| Vec::with_capacity(steps));
    states.push(g0.clone());
    for _ in 0..steps {
        let (next, w) = step(states.last().expect("nonempty"), law, rng)?;
        states.push(next);
        if let Some(maps) = maps.as_mut() {
            maps.push(w);
        }
    }
    Ok(DiscreteTrajectory {
        states,
        maps,
        seed: None,
    })
}

fn check_exact_order(n: usize) -> Result<()> {
    if n > MAX_EXACT_ORDER {
        Err(Error::OrderTooLarge {
            n,
            max: MAX_EXACT_ORDER,
            what: "dense kernels",
        })
    } else {
        Ok(())
    }
}

/// Dense transition matrix over all graphs of order `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactKernel {
    n: usize,
    size: usize,
    probs: Vec<f64>,
}

impl ExactKernel {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of states, `2^(n(n-1)/2)`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.probs[from * self.size + to]
    }

    pub fn set(&mut self, from: usize, to: usize, p: f64) {
        self.probs[from * self.size + to] = p;
    }

    pub fn prob(&self, from: &Graph, to: &Graph) -> f64 {
        self.get(state_index(from), state_index(to))
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.probs[from * self.size..(from + 1) * self.size]
    }

    /// Largest `|row sum - 1|`.
    pub fn max_row_error(&self) -> f64 {
        (0..self.size)
            .map(|r| (self.row(r).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `row,col,probability` CSV with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,probability\n");
        for r in 0..self.size {
            for c in 0..self.size {
                let _ = writeln!(out, "{r},{c},{:.16e}", self.get(r, c));
            }
        }
        out
    }
}

impl TransitionLaw for ExactKernel {
    fn transition_prob(&self, from: &Graph, to: &Graph) -> f64 {
        self.prob(from, to)
    }
}

fn state_index(g: &Graph) -> usize {
    g.index().expect("dense kernels have small order") as usize
}

/// Materializes `law` on all graphs of order `n <= 4`.
pub fn exact_kernel<L: TransitionLaw + ?Sized>(law: &L, n: usize) -> Result<ExactKernel> {
    check_exact_order(n)?;
    let states: Vec<Graph> = Graph::all(n).collect();
    let size = states.len();
    let mut probs = Vec::with_capacity(size * size);
    for g in &states {
        for h in &states {
            probs.push(law.transition_prob(g, h));
        }
    }
    Ok(ExactKernel { n, size, probs })
}

/// Kernel defined directly by a law on maps: `P(G, G') = sum of map_prob(W)`
/// over all `W` with `W(G) = G'`.
pub fn kernel_from_map_law(map_prob: impl Fn(&RewiringMap) -> f64, n: usize) -> Result<ExactKernel> {
    check_exact_order(n)?;
    let states: Vec<Graph> = Graph::all(n).collect();
    let size = states.len();
    let mut kernel = ExactKernel {
        n,
        size,
        probs: vec![0.0; size * size],
    };
    for w in RewiringMap::all(n) {
        let p = map_prob(&w);
        if p == 0.0 {
            continue;
        }
        for (from, g) in states.iter().enumerate() {
            let to = state_index(&w.apply(g)?);
            kernel.probs[from * size + to] += p;
        }
    }
    Ok(kernel)
}

/// Result of [`stationary_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct Stationary {
    /// Probability of each state, indexed like the kernel.
    pub dist: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    /// False when the kernel has more than one closed communicating class,
    /// in which case `dist` is one of several fixed points.
    pub unique: bool,
}

/// Left fixed point of the kernel by lazy power iteration from the uniform
/// law. The lazy kernel `(P + I) / 2` has the same fixed points and no
/// periodicity.
pub fn stationary_solve(k: &ExactKernel) -> Result<Stationary> {
    let size = k.size;
    let mut pi = vec![1.0 / size as f64; size];
    let mut next = vec![0.0; size];
    let mut residual = f64::INFINITY;
    for iteration in 0..=STATIONARY_MAX_ITERATIONS {
        next.iter_mut().for_each(|x| *x = 0.0);
        for (from, &mass) in pi.iter().enumerate() {
            if mass != 0.0 {
                for (to, &p) in k.row(from).iter().enumerate() {
                    next[to] += mass * p;
                }
            }
        }
        residual = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        if residual < STATIONARY_RESIDUAL {
            let total: f64 = pi.iter().sum();
            pi.iter_mut().for_each(|x| *x /= total);
            return Ok(Stationary {
                dist: pi,
                residual,
                iterations: iteration,
                unique: closed_class_count(k) == 1,
            });
        }
        for (p, q) in pi.iter_mut().zip(&next) {
            *p = 0.5 * (*p + q);
        }
    }
    Err(Error::NotConverged {
        iterations: STATIONARY_MAX_ITERATIONS,
        residual,
    })
}

/// Number of closed communicating classes of the positive-entry graph.
fn closed_class_count(k: &ExactKernel) -> usize {
    let size = k.size;
    let reach: Vec<Vec<bool>> = (0..size)
        .map(|s| {
            let mut seen = vec![false; size];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for (y, &p) in k.row(x).iter().enumerate() {
                    if p > 0.0 && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        })
        .collect();
    // a state is recurrent when everything it reaches reaches back; each
    // closed class is counted once through its smallest member
    (0..size)
        .filter(|&s| {
            (0..size).all(|t| !reach[s][t] || reach[t][s]) && (0..s).all(|t| !(reach[s][t] && reach[t][s]))
        })
        .count()
}

/// Checks `P_m(G, G') = sum over G''|[m] = G' of P_n(G*, G'')` for every
/// `G, G'` of order `m` and every extension `G*` of `G` to order `n`.
pub fn verify_consistency<L: TransitionLaw + ?Sized>(
    law: &L,
    m: usize,
    n: usize,
    tolerance: f64,
) -> Result<CheckReport> {
    if m == 0 || m >= n {
        return Err(Error::BadRestriction { m, n });
    }
    check_exact_order(n)?;
    let mut report = CheckReport::new("consistency", format!("m={m}, n={n}"), tolerance);
    let big: Vec<Graph> = Graph::all(n).collect();
    for g in Graph::all(m) {
        for g2 in Graph::all(m) {
            let small = law.transition_prob(&g, &g2);
            for ext in big.iter().filter(|x| x.restrict(m).map_or(false, |r| r == g)) {
                let lumped: f64 = big
                    .iter()
                    .filter(|x| x.restrict(m).map_or(false, |r| r == g2))
                    .map(|x| law.transition_prob(ext, x))
                    .sum();
                report.observe((small - lumped).abs(), || format!("G={g:?}, G'={g2:?}, G*={ext:?}"));
            }
        }
    }
    Ok(report)
}

/// Checks `P(G, G') = P(G^σ, G'^σ)` for all permutations of `[n]`.
pub fn verify_exchangeability<L: TransitionLaw + ?Sized>(law: &L, n: usize) -> Result<CheckReport> {
    check_exact_order(n)?;
    let mut report = CheckReport::new("exchangeability", format!("n={n}"), 0.0);
    let states: Vec<Graph> = Graph::all(n).collect();
    for sigma in Permutation::all(n) {
        let moved: Vec<Graph> = states.iter().map(|g| g.permute(&sigma)).collect::<Result<_>>()?;
        for (a, pa) in states.iter().zip(&moved) {
            for (b, pb) in states.iter().zip(&moved) {
                let diff = (law.transition_prob(a, b) - law.transition_prob(pa, pb)).abs();
                report.observe(diff, || format!("sigma={sigma:?}, G={a:?}, G'={b:?}"));
            }
        }
    }
    Ok(report)
}

/// Checks `pi(G) P(G, G') = pi(G') P(G', G)` for all pairs of order `n`.
pub fn verify_detailed_balance<L: TransitionLaw + ?Sized>(
    law: &L,
    measure: impl Fn(&Graph) -> f64,
    n: usize,
    tolerance: f64,
) -> Result<CheckReport> {
    check_exact_order(n)?;
    let mut report = CheckReport::new("detailed-balance", format!("n={n}"), tolerance);
    let states: Vec<Graph> = Graph::all(n).collect();
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            let diff = (measure(a) * law.transition_prob(a, b) - measure(b) * law.transition_prob(b, a)).abs();
            report.observe(diff, || format!("G={a:?}, G'={b:?}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{
        er_graph_prob, er_transition_prob, IidEdgeLimit, KernelSpec, PointMass, ReversibleParams,
    };
    use crate::rng::root_rng;

    #[test]
    fn step_with_point_masses() {
        let mut rng = root_rng(1);
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let id = PointMass(RewiringMap::identity(4));
        assert_eq!(step(&g, &id, &mut rng).unwrap(), (g.clone(), RewiringMap::identity(4)));
        let flip = IidEdgeLimit::new(1.0, 0.0).unwrap();
        let (next, w) = step(&g, &flip, &mut rng).unwrap();
        assert_eq!(next, g.complement());
        assert_eq!(w, RewiringMap::complement_map(4));
        assert!(step(&Graph::empty(3), &id, &mut rng).is_err());
    }

    #[test]
    fn simulate_edge_cases() {
        let mut rng = root_rng(2);
        let g0 = Graph::complete(4);
        let law = KernelSpec::er(0.2, 0.5).unwrap();
        let t = simulate(&g0, &law, 0, &mut rng, true).unwrap();
        assert_eq!(t.states, vec![g0.clone()]);
        let dead = IidEdgeLimit::new(0.0, 0.0).unwrap();
        let t = simulate(&g0, &dead, 5, &mut rng, false).unwrap();
        assert!(t.states[1..].iter().all(|g| *g == Graph::empty(4)));
    }

    #[test]
    fn recorded_maps_replay_states() {
        let mut rng = root_rng(3);
        let law = KernelSpec::mixed(1.0, 2.0, 0.5, 1.5).unwrap();
        let t = simulate(&Graph::empty(6), &law, 50, &mut rng, true).unwrap();
        let maps = t.maps.as_ref().unwrap();
        for m in 1..t.states.len() {
            assert_eq!(maps[m - 1].apply(&t.states[m - 1]).unwrap(), t.states[m]);
        }
    }

    #[test]
    fn simulation_is_deterministic() {
        let law = KernelSpec::reversible(1.0, 2.0, 0.5).unwrap();
        let run = || simulate(&Graph::empty(5), &law, 30, &mut root_rng(77), true).unwrap();
        assert_eq!(run(), run());
    }

    #[test]
    fn jsonl_records_round_trip() {
        let mut rng = root_rng(4);
        let t = simulate(&Graph::empty(4), &KernelSpec::er(0.5, 0.5).unwrap(), 3, &mut rng, true).unwrap();
        let mut buf = Vec::new();
        t.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with(r#"{"m":0,"edges":[],"stat":{"n0":6,"n1":0}}"#));
        for (line, g) in text.lines().zip(&t.states) {
            let rec: TrajectoryRecord = serde_json::from_str(line).unwrap();
            assert_eq!(&rec.to_graph().unwrap(), g);
        }
        let mut maps = Vec::new();
        t.write_maps_jsonl(&mut maps).unwrap();
        assert_eq!(String::from_utf8(maps).unwrap().lines().count(), 3);
    }

    #[test]
    fn exact_kernel_single_pair() {
        let k = exact_kernel(&KernelSpec::er(0.3, 0.6).unwrap(), 2).unwrap();
        let expect = [[0.7, 0.3], [0.4, 0.6]];
        for (r, row) in expect.iter().enumerate() {
            for (c, &p) in row.iter().enumerate() {
                assert!((k.get(r, c) - p).abs() < 1e-15);
            }
        }
        assert!(exact_kernel(&KernelSpec::er(0.3, 0.6).unwrap(), 5).is_err());
    }

    #[test]
    fn exact_kernel_matches_map_sum() {
        for spec in [
            KernelSpec::er(0.2, 0.5).unwrap(),
            KernelSpec::er(1.0, 0.0).unwrap(),
            KernelSpec::mixed(1.0, 2.0, 0.5, 1.5).unwrap(),
        ] {
            for n in 1..=3 {
                let closed = exact_kernel(&spec, n).unwrap();
                let brute = kernel_from_map_law(|w| spec.map_prob(w), n).unwrap();
                for r in 0..closed.size() {
                    for c in 0..closed.size() {
                        assert!((closed.get(r, c) - brute.get(r, c)).abs() < 1e-12);
                    }
                }
                assert!(closed.max_row_error() < 1e-12);
            }
        }
    }

    #[test]
    fn csv_dump_has_seventeen_digits() {
        let k = exact_kernel(&KernelSpec::er(0.3, 0.6).unwrap(), 2).unwrap();
        let csv = k.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("row,col,probability"));
        let first = lines.next().unwrap();
        assert_eq!(first, "0,0,6.9999999999999996e-1");
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn stationary_of_er_chain() {
        let k = exact_kernel(&KernelSpec::er(0.2, 0.5).unwrap(), 3).unwrap();
        let st = stationary_solve(&k).unwrap();
        assert!(st.unique);
        assert!(st.residual < STATIONARY_RESIDUAL);
        for g in Graph::all(3) {
            let want = er_graph_prob(2.0 / 7.0, &g);
            assert!((st.dist[state_index(&g)] - want).abs() < 1e-10);
        }
    }

    #[test]
    fn stationary_of_reversible_chain() {
        let params = ReversibleParams::new(1.0, 2.0, 0.5).unwrap();
        let k = exact_kernel(&KernelSpec::Reversible(params), 3).unwrap();
        let st = stationary_solve(&k).unwrap();
        for g in Graph::all(3) {
            assert!((st.dist[state_index(&g)] - params.stationary_prob(&g)).abs() < 1e-10);
        }
    }

    #[test]
    fn stationary_flags_degenerate_kernels() {
        let id = exact_kernel(&KernelSpec::er(0.0, 1.0).unwrap(), 3).unwrap();
        let st = stationary_solve(&id).unwrap();
        assert!(!st.unique);
        assert!(st.dist.iter().all(|&p| (p - 0.125).abs() < 1e-15));
        let flip = exact_kernel(&KernelSpec::er(1.0, 0.0).unwrap(), 3).unwrap();
        let st = stationary_solve(&flip).unwrap();
        assert!(!st.unique);
        assert!(st.residual < STATIONARY_RESIDUAL);
        let absorbing = exact_kernel(&KernelSpec::er(0.0, 0.0).unwrap(), 3).unwrap();
        let st = stationary_solve(&absorbing).unwrap();
        assert!(st.unique);
        assert!((st.dist[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn consistency_of_closed_forms() {
        for spec in [
            KernelSpec::er(0.2, 0.5).unwrap(),
            KernelSpec::mixed(1.0, 2.0, 0.5, 1.5).unwrap(),
        ] {
            let r = verify_consistency(&spec, 2, 3, 1e-12).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(verify_consistency(&KernelSpec::er(0.2, 0.5).unwrap(), 3, 3, 1e-12).is_err());
    }

    #[test]
    fn consistency_detects_corruption() {
        let spec = KernelSpec::er(0.2, 0.5).unwrap();
        let target = Graph::from_index(3, 5);
        let corrupted = |g: &Graph, h: &Graph| {
            let p = spec.prob(g, h).unwrap();
            if g.order() == 3 && g.index() == Some(0) && *h == target {
                p + 1e-3
            } else {
                p
            }
        };
        let r = verify_consistency(&corrupted, 2, 3, 1e-12).unwrap();
        assert!(!r.passed);
        assert!((r.max_violation - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn exchangeability_checks() {
        for spec in [
            KernelSpec::er(0.2, 0.5).unwrap(),
            KernelSpec::mixed(1.0, 2.0, 0.5, 1.5).unwrap(),
            KernelSpec::reversible(1.0, 2.0, 0.5).unwrap(),
        ] {
            assert!(verify_exchangeability(&spec, 3).unwrap().passed);
        }
        // edge {1,2} is favoured
        let biased = |g: &Graph, h: &Graph| {
            let base = er_transition_prob(0.2, 0.5, g, h).unwrap();
            if h.has_edge(0, 1) {
                base * 1.5
            } else {
                base
            }
        };
        assert!(!verify_exchangeability(&biased, 3).unwrap().passed);
        assert!(verify_exchangeability(&biased, 2).unwrap().passed);
    }

    #[test]
    fn detailed_balance_checks() {
        let params = ReversibleParams::new(1.0, 2.0, 0.5).unwrap();
        let spec = KernelSpec::Reversible(params);
        let r = verify_detailed_balance(&spec, |g| params.stationary_prob(g), 3, 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
        let mixed = KernelSpec::mixed(1.0, 2.0, 0.5, 1.5).unwrap();
        let r = verify_detailed_balance(&mixed, |g| er_graph_prob(0.5, g), 3, 1e-12).unwrap();
        assert!(!r.passed && r.max_violation > 1e-6);
        let iid = KernelSpec::er(0.3, 0.3).unwrap();
        let r = verify_detailed_balance(&iid, |g| er_graph_prob(0.3, g), 3, 1e-12).unwrap();
        assert!(r.passed);
    }
}
