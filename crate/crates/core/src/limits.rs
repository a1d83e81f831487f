//! Motif densities, limit vectors and convergence of densities.
//!
//! Motifs are labeled arrays of order `m`, identified by their
//! [`PairArray::code`]. The density of a motif `f` in an array `x` of order
//! `n` is the fraction of injections `psi: [m] -> [n]` whose induced
//! sub-array `x^psi` equals `f`.
//!
//! Exact enumeration is used for `m <= 2` at any order (every injection of
//! two points sees a single pair, so the counts follow from the per-pair
//! symbol histogram), and for `m <= 4` when `n <= 12`. Everything else is
//! estimated from uniformly sampled injections.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{PairArray, RewiringMap};
use crate::measures::IidEdgeLimit;
use crate::pairs::{pair_count, pair_of};
use crate::verify::CheckReport;

pub const MAX_EXACT_MOTIF_ORDER: usize = 4;
pub const MAX_EXACT_HOST_ORDER: usize = 12;
/// Sample count used when a caller asks for densities beyond the exact cap.
pub const DEFAULT_MONTE_CARLO_SAMPLES: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityMode {
    Exact,
    MonteCarlo,
}

impl DensityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityMode::Exact => "exact",
            DensityMode::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub motif: u64,
    pub order: usize,
    pub mode: DensityMode,
    pub value: f64,
    /// Number of sampled injections; `None` in exact mode.
    pub sample_count: Option<u64>,
}

impl DensityEstimate {
    /// Binomial standard error of a Monte Carlo estimate, zero when exact.
    pub fn standard_error(&self) -> f64 {
        match self.sample_count {
            Some(s) if s > 0 => (self.value * (1.0 - self.value) / s as f64).sqrt(),
            _ => 0.0,
        }
    }
}

/// `n (n - 1) ... (n - m + 1)` as a float.
pub fn falling_factorial(n: usize, m: usize) -> f64 {
    (0..m).map(|i| n.saturating_sub(i) as f64).product()
}

fn check_orders(m: usize, n: usize) -> Result<()> {
    if m > n {
        Err(Error::BadRestriction { m, n })
    } else {
        Ok(())
    }
}

/// Whether order-`m` densities in an order-`n` host are computed exactly.
pub fn exact_allowed(m: usize, n: usize) -> bool {
    m <= 2 || (m <= MAX_EXACT_MOTIF_ORDER && n <= MAX_EXACT_HOST_ORDER)
}

fn check_exact(m: usize, n: usize) -> Result<()> {
    check_orders(m, n)?;
    if exact_allowed(m, n) {
        Ok(())
    } else if m > MAX_EXACT_MOTIF_ORDER {
        Err(Error::OrderTooLarge {
            n: m,
            max: MAX_EXACT_MOTIF_ORDER,
            what: "exact motif densities",
        })
    } else {
        Err(Error::OrderTooLarge {
            n,
            max: MAX_EXACT_HOST_ORDER,
            what: "exact injection counting",
        })
    }
}

fn induced_code<T: PairArray>(x: &T, psi: &[usize]) -> usize {
    let mut code = 0u64;
    for k in (0..pair_count(psi.len())).rev() {
        let (i, j) = pair_of(k);
        code = code * T::ALPHABET + x.symbol_at(psi[i], psi[j]);
    }
    code as usize
}

fn histogram_len<T: PairArray>(m: usize) -> usize {
    T::count_of_order(m).expect("motif order within the exact cap") as usize
}

/// Number of injections of `[m]` into `x` inducing each motif of order `m`,
/// indexed by motif code.
pub fn injection_histogram<T: PairArray>(x: &T, m: usize) -> Result<Vec<u64>> {
    let n = x.order();
    check_exact(m, n)?;
    let mut hist = vec![0u64; histogram_len::<T>(m)];
    if m <= 1 {
        hist[0] = falling_factorial(n, m) as u64;
        return Ok(hist);
    }
    if m == 2 {
        for k in 0..pair_count(n) {
            hist[x.symbol(k) as usize] += 2;
        }
        return Ok(hist);
    }
    let mut psi = Vec::with_capacity(m);
    enumerate_injections(n, m, &mut psi, &mut |psi| hist[induced_code(x, psi)] += 1);
    Ok(hist)
}

fn enumerate_injections(n: usize, m: usize, psi: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if psi.len() == m {
        visit(psi);
        return;
    }
    for v in 0..n {
        if !psi.contains(&v) {
            psi.push(v);
            enumerate_injections(n, m, psi, visit);
            psi.pop();
        }
    }
}

/// Number of injections `psi` with `x^psi = f`.
pub fn count_injections<T: PairArray>(f: &T, x: &T) -> Result<u64> {
    let hist = injection_histogram(x, f.order())?;
    Ok(hist[f.code().expect("motif within the exact cap") as usize])
}

fn random_injection<R: Rng + ?Sized>(n: usize, m: usize, psi: &mut Vec<usize>, rng: &mut R) {
    psi.clear();
    while psi.len() < m {
        let v = rng.random_range(0..n);
        if !psi.contains(&v) {
            psi.push(v);
        }
    }
}

/// Counts of the motifs induced by `samples` uniform random injections.
pub fn sampled_histogram<T: PairArray, R: Rng + ?Sized>(
    x: &T,
    m: usize,
    samples: u64,
    rng: &mut R,
) -> Result<Vec<u64>> {
    check_orders(m, x.order())?;
    let len = T::count_of_order(m).ok_or(Error::OrderTooLarge {
        n: m,
        max: 8,
        what: "motif histograms",
    })? as usize;
    let mut hist = vec![0u64; len];
    let mut psi = Vec::with_capacity(m);
    for _ in 0..samples {
        random_injection(x.order(), m, &mut psi, rng);
        hist[induced_code(x, &psi)] += 1;
    }
    Ok(hist)
}

/// Exact density `ind(f, x) / n^(m falling)`.
pub fn density_exact<T: PairArray>(f: &T, x: &T) -> Result<DensityEstimate> {
    let m = f.order();
    let count = count_injections(f, x)?;
    Ok(DensityEstimate {
        motif: f.code().expect("small motif"),
        order: m,
        mode: DensityMode::Exact,
        value: count as f64 / falling_factorial(x.order(), m),
        sample_count: None,
    })
}

/// Fraction of `samples` uniform injections that induce `f`.
pub fn density_monte_carlo<T: PairArray, R: Rng + ?Sized>(
    f: &T,
    x: &T,
    samples: u64,
    rng: &mut R,
) -> Result<DensityEstimate> {
    let m = f.order();
    check_orders(m, x.order())?;
    if samples == 0 {
        return Err(Error::InvalidParameter {
            name: "samples",
            value: 0.0,
            reason: "must be positive",
        });
    }
    let mut psi = Vec::with_capacity(m);
    let mut hits = 0u64;
    for _ in 0..samples {
        random_injection(x.order(), m, &mut psi, rng);
        if psi_matches(f, x, &psi) {
            hits += 1;
        }
    }
    Ok(DensityEstimate {
        motif: f.code().unwrap_or(u64::MAX),
        order: m,
        mode: DensityMode::MonteCarlo,
        value: hits as f64 / samples as f64,
        sample_count: Some(samples),
    })
}

fn psi_matches<T: PairArray>(f: &T, x: &T, psi: &[usize]) -> bool {
    (0..pair_count(psi.len())).all(|k| {
        let (i, j) = pair_of(k);
        x.symbol_at(psi[i], psi[j]) == f.symbol(k)
    })
}

/// Exact density when allowed, otherwise a Monte Carlo estimate.
pub fn density<T: PairArray, R: Rng + ?Sized>(
    f: &T,
    x: &T,
    samples: u64,
    rng: &mut R,
) -> Result<DensityEstimate> {
    if exact_allowed(f.order(), x.order()) {
        density_exact(f, x)
    } else {
        density_monte_carlo(f, x, samples, rng)
    }
}

/// Densities of every motif of order `m` in `x`.
pub fn motif_densities<T: PairArray, R: Rng + ?Sized>(
    x: &T,
    m: usize,
    samples: u64,
    rng: &mut R,
) -> Result<Vec<DensityEstimate>> {
    let (hist, mode, total, sample_count) = if exact_allowed(m, x.order()) {
        let hist = injection_histogram(x, m)?;
        (hist, DensityMode::Exact, falling_factorial(x.order(), m), None)
    } else {
        let hist = sampled_histogram(x, m, samples, rng)?;
        (hist, DensityMode::MonteCarlo, samples as f64, Some(samples))
    };
    Ok(hist
        .into_iter()
        .enumerate()
        .map(|(code, c)| DensityEstimate {
            motif: code as u64,
            order: m,
            mode,
            value: c as f64 / total,
            sample_count,
        })
        .collect())
}

/// `motif_id,order,mode,value,sample_count` CSV.
pub fn densities_csv(estimates: &[DensityEstimate]) -> String {
    let mut out = String::from("motif_id,order,mode,value,sample_count\n");
    for e in estimates {
        let samples = e.sample_count.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{:.16e},{}", e.motif, e.order, e.mode.as_str(), e.value, samples);
    }
    out
}

/// Densities of all motifs of orders `1..=max_order`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitVector {
    alphabet: u64,
    /// `entries[m - 1][code]`.
    entries: Vec<Vec<f64>>,
}

impl LimitVector {
    pub fn from_entries(alphabet: u64, entries: Vec<Vec<f64>>) -> Result<Self> {
        for (idx, row) in entries.iter().enumerate() {
            let want = alphabet.checked_pow(pair_count(idx + 1) as u32).unwrap_or(0) as usize;
            if row.len() != want {
                return Err(Error::InvalidArray(format!(
                    "order {} needs {want} entries, got {}",
                    idx + 1,
                    row.len()
                )));
            }
        }
        Ok(LimitVector { alphabet, entries })
    }

    pub fn max_order(&self) -> usize {
        self.entries.len()
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn order(&self, m: usize) -> &[f64] {
        &self.entries[m - 1]
    }

    pub fn get(&self, m: usize, code: u64) -> f64 {
        self.entries[m - 1][code as usize]
    }

    /// Largest `|sum of order-m entries - 1|`.
    pub fn normalization_error(&self) -> f64 {
        self.entries
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Exact limit vector up to `max_order`.
pub fn limit_vector<T: PairArray>(x: &T, max_order: usize) -> Result<LimitVector> {
    let n = x.order();
    let entries = (1..=max_order)
        .map(|m| {
            let hist = injection_histogram(x, m)?;
            let total = falling_factorial(n, m);
            Ok(hist.into_iter().map(|c| c as f64 / total).collect())
        })
        .collect::<Result<_>>()?;
    Ok(LimitVector {
        alphabet: T::ALPHABET,
        entries,
    })
}

/// Limit vector with sampled injections wherever exact counting is capped.
pub fn limit_vector_monte_carlo<T: PairArray, R: Rng + ?Sized>(
    x: &T,
    max_order: usize,
    samples: u64,
    rng: &mut R,
) -> Result<LimitVector> {
    let entries = (1..=max_order)
        .map(|m| Ok(motif_densities(x, m, samples, rng)?.into_iter().map(|d| d.value).collect()))
        .collect::<Result<_>>()?;
    Ok(LimitVector {
        alphabet: T::ALPHABET,
        entries,
    })
}

/// `sum_m 2^-m sum_motifs |u - v|` over the common orders.
pub fn limit_metric(u: &LimitVector, v: &LimitVector) -> Result<f64> {
    if u.max_order() != v.max_order() {
        return Err(Error::DimensionMismatch {
            left: u.max_order(),
            right: v.max_order(),
        });
    }
    if u.alphabet != v.alphabet {
        return Err(Error::InvalidArray("limit vectors of graphs and maps".into()));
    }
    Ok(u.entries
        .iter()
        .zip(&v.entries)
        .enumerate()
        .map(|(idx, (a, b))| {
            let scale = 0.5f64.powi(idx as i32 + 1);
            scale * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
        })
        .sum())
}

/// The two structural identities of a candidate limit evaluator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitStructureReport {
    /// `u(V) = sum of u(V*)` over the one-vertex extensions `V*` of `V`.
    pub projective: CheckReport,
    /// `sum of u(V)` over order `n` equals 1.
    pub normalization: CheckReport,
}

impl LimitStructureReport {
    pub fn passed(&self) -> bool {
        self.projective.passed && self.normalization.passed
    }
}

pub const MAX_STRUCTURE_ORDER: usize = 3;

/// Checks both identities at order `n <= 3` by exhaustive summation.
pub fn check_limit_structure<T: PairArray + 'static>(
    evaluator: impl Fn(&T) -> f64,
    n: usize,
    tolerance: f64,
) -> Result<LimitStructureReport> {
    if n == 0 || n > MAX_STRUCTURE_ORDER {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_STRUCTURE_ORDER,
            what: "limit structure checks",
        });
    }
    let params = format!("n={n}");
    let mut projective = CheckReport::new("projectivity", params.clone(), tolerance);
    let base = T::count_of_order(n).expect("small order");
    let extensions = T::ALPHABET.pow(n as u32);
    let mut total = 0.0;
    for code in 0..base {
        let v = T::from_code(n, code);
        let value = evaluator(&v);
        total += value;
        let lumped: f64 = (0..extensions)
            .map(|e| evaluator(&T::from_code(n + 1, code + e * base)))
            .sum();
        projective.observe((value - lumped).abs(), || format!("V={v:?}"));
    }
    let mut normalization = CheckReport::new("normalization", params, tolerance);
    normalization.observe((total - 1.0).abs(), || format!("total={total}"));
    Ok(LimitStructureReport {
        projective,
        normalization,
    })
}

/// Failure budget `2 exp(-eps^2 n / (2 m^2))` of the bounded-differences
/// inequality for an order-`m` density at order `n`.
pub fn azuma_budget(epsilon: f64, n: usize, m: usize) -> f64 {
    2.0 * (-epsilon * epsilon * n as f64 / (2.0 * (m * m) as f64)).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub density: f64,
    pub deviation: f64,
    pub within_epsilon: bool,
    pub azuma_budget: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub motif: u64,
    pub order: usize,
    pub target: f64,
    pub epsilon: f64,
    pub rows: Vec<ConvergenceRow>,
    /// More deviations beyond `epsilon` than the summed (capped) budgets allow.
    pub excess: bool,
}

fn check_schedule(m: usize, schedule: &[usize]) -> Result<usize> {
    let max_n = *schedule
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidArray("empty order schedule".into()))?;
    let min_n = *schedule.iter().min().expect("nonempty");
    check_orders(m, min_n)?;
    Ok(max_n)
}

/// Draws one map at the largest order of `schedule` and compares the density
/// of `motif` in each leading restriction with its limit value.
pub fn convergence_check<R: Rng + ?Sized>(
    lim: &IidEdgeLimit,
    motif: &RewiringMap,
    schedule: &[usize],
    epsilon: f64,
    rng: &mut R,
) -> Result<ConvergenceReport> {
    let m = motif.order();
    let max_n = check_schedule(m, schedule)?;
    let w = lim.sample(max_n, rng);
    let target = lim.density(motif);
    let mut rows = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let d = density(motif, &w.restrict(n)?, DEFAULT_MONTE_CARLO_SAMPLES, rng)?.value;
        let deviation = (d - target).abs();
        rows.push(ConvergenceRow {
            n,
            density: d,
            deviation,
            within_epsilon: deviation <= epsilon,
            azuma_budget: azuma_budget(epsilon, n, m),
        });
    }
    let failures = rows.iter().filter(|r| !r.within_epsilon).count() as f64;
    let allowed: f64 = rows.iter().map(|r| r.azuma_budget.min(1.0)).sum();
    Ok(ConvergenceReport {
        motif: motif.code().unwrap_or(u64::MAX),
        order: m,
        target,
        epsilon,
        rows,
        excess: failures > allowed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StudyRow {
    pub n: usize,
    pub repetitions: usize,
    /// Repetitions in which every motif density was within `epsilon`.
    pub successes: usize,
    pub max_deviation: f64,
    /// Per-motif budget times the number of motifs, capped at 1.
    pub azuma_budget: f64,
    pub exceeds_budget: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub order: usize,
    pub epsilon: f64,
    /// `(motif code, limit value)` for every motif of the order.
    pub targets: Vec<(u64, f64)>,
    pub rows: Vec<StudyRow>,
}

/// Repeats the convergence comparison for all order-`m` map motifs at once.
/// Each repetition draws one map at the largest order and restricts it.
pub fn convergence_study<R: Rng + ?Sized>(
    lim: &IidEdgeLimit,
    m: usize,
    schedule: &[usize],
    epsilon: f64,
    repetitions: usize,
    rng: &mut R,
) -> Result<ConvergenceStudy> {
    let max_n = check_schedule(m, schedule)?;
    let targets: Vec<(u64, f64)> = RewiringMap::all(m).map(|v| (v.code().expect("small"), lim.density(&v))).collect();
    let mut rows: Vec<StudyRow> = schedule
        .iter()
        .map(|&n| StudyRow {
            n,
            repetitions,
            successes: 0,
            max_deviation: 0.0,
            azuma_budget: (targets.len() as f64 * azuma_budget(epsilon, n, m)).min(1.0),
            exceeds_budget: false,
        })
        .collect();
    for _ in 0..repetitions {
        let w = lim.sample(max_n, rng);
        for row in rows.iter_mut() {
            let dens = motif_densities(&w.restrict(row.n)?, m, DEFAULT_MONTE_CARLO_SAMPLES, rng)?;
            let worst = dens
                .iter()
                .zip(&targets)
                .map(|(d, (_, t))| (d.value - t).abs())
                .fold(0.0, f64::max);
            row.max_deviation = row.max_deviation.max(worst);
            if worst <= epsilon {
                row.successes += 1;
            }
        }
    }
    for row in rows.iter_mut() {
        let failure_rate = (row.repetitions - row.successes) as f64 / row.repetitions.max(1) as f64;
        row.exceeds_budget = failure_rate > row.azuma_budget;
    }
    Ok(ConvergenceStudy {
        order: m,
        epsilon,
        targets,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::rng::root_rng;

    fn edge() -> Graph {
        Graph::complete(2)
    }

    fn path() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn injection_counts() {
        assert_eq!(count_injections(&edge(), &Graph::complete(3)).unwrap(), 6);
        assert_eq!(count_injections(&edge(), &path()).unwrap(), 4);
        assert_eq!(count_injections(&Graph::empty(2), &Graph::empty(2)).unwrap(), 2);
        assert_eq!(count_injections(&path(), &path()).unwrap(), 2);
        assert!(count_injections(&path(), &edge()).is_err());
    }

    #[test]
    fn order_three_counts_match_brute_force() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]).unwrap();
        let hist = injection_histogram(&g, 3).unwrap();
        assert_eq!(hist.iter().sum::<u64>(), 60);
        let triangle = Graph::complete(3);
        let by_hand = (0..5)
            .flat_map(|a| (0..5).flat_map(move |b| (0..5).map(move |c| (a, b, c))))
            .filter(|&(a, b, c)| a != b && b != c && a != c)
            .filter(|&(a, b, c)| g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c))
            .count() as u64;
        assert_eq!(hist[triangle.code().unwrap() as usize], by_hand);
    }

    #[test]
    fn densities() {
        assert_eq!(density_exact(&edge(), &Graph::complete(3)).unwrap().value, 1.0);
        let d = density_exact(&edge(), &path()).unwrap();
        assert!((d.value - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.mode, DensityMode::Exact);
        assert_eq!(d.sample_count, None);
        let big = Graph::empty(13);
        assert!(density_exact(&Graph::empty(3), &big).is_err());
        assert!(density_exact(&edge(), &big).is_ok());
    }

    #[test]
    fn exact_and_sampled_agree() {
        let mut rng = root_rng(5);
        let lim = IidEdgeLimit::new(0.3, 0.7).unwrap();
        let w = lim.sample(8, &mut rng);
        for code in [0u64, 5, 17, 42] {
            let f = RewiringMap::from_code(3, code);
            let exact = density_exact(&f, &w).unwrap().value;
            let mc = density_monte_carlo(&f, &w, 100_000, &mut rng).unwrap();
            let se = (exact * (1.0 - exact) / 1e5).sqrt().max(1e-9);
            assert!((mc.value - exact).abs() <= 3.0 * se + 1e-12, "code {code}: {exact} vs {}", mc.value);
        }
    }

    #[test]
    fn order_sums_are_one() {
        let mut rng = root_rng(6);
        let w = IidEdgeLimit::new(0.4, 0.6).unwrap().sample(7, &mut rng);
        let lv = limit_vector(&w, 4).unwrap();
        assert!(lv.normalization_error() < 1e-9);
        for m in 1..=4 {
            let hist = injection_histogram(&w, m).unwrap();
            assert_eq!(hist.iter().sum::<u64>() as f64, falling_factorial(7, m));
        }
        let lv = limit_vector(&Graph::complete(6), 2).unwrap();
        assert_eq!(lv.order(2), &[0.0, 1.0]);
    }

    #[test]
    fn metric_properties() {
        let mut rng = root_rng(7);
        let lim = IidEdgeLimit::new(0.3, 0.7).unwrap();
        let vs: Vec<LimitVector> = (0..3).map(|_| limit_vector(&lim.sample(6, &mut rng), 3).unwrap()).collect();
        assert_eq!(limit_metric(&vs[0], &vs[0]).unwrap(), 0.0);
        let ab = limit_metric(&vs[0], &vs[1]).unwrap();
        assert_eq!(ab, limit_metric(&vs[1], &vs[0]).unwrap());
        assert!(limit_metric(&vs[0], &vs[2]).unwrap() <= ab + limit_metric(&vs[1], &vs[2]).unwrap() + 1e-15);
        let short = limit_vector(&lim.sample(6, &mut rng), 2).unwrap();
        assert!(limit_metric(&vs[0], &short).is_err());
    }

    #[test]
    fn structure_of_iid_limits() {
        let lim = IidEdgeLimit::new(0.4, 0.6).unwrap();
        for n in 1..=3 {
            let r = check_limit_structure(|v: &RewiringMap| lim.density(v), n, 1e-12).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(check_limit_structure(|v: &RewiringMap| lim.density(v), 4, 1e-12).is_err());
    }

    #[test]
    fn structure_fault_injection() {
        let lim = IidEdgeLimit::new(0.4, 0.6).unwrap();
        let id = RewiringMap::identity(2);
        let r = check_limit_structure(
            |v: &RewiringMap| {
                let p = lim.density(v);
                if *v == id {
                    p * 0.99
                } else {
                    p
                }
            },
            2,
            1e-12,
        )
        .unwrap();
        assert!(!r.normalization.passed);
        let deficit = 0.01 * lim.density(&id);
        assert!((r.normalization.max_violation - deficit).abs() < 1e-12);
    }

    #[test]
    fn point_mass_limits_are_valid() {
        let mut rng = root_rng(8);
        let w = IidEdgeLimit::new(0.5, 0.5).unwrap().sample(6, &mut rng);
        for n in 1..=3 {
            let eval = |v: &RewiringMap| if w.restrict(v.order()).unwrap() == *v { 1.0 } else { 0.0 };
            assert!(check_limit_structure(eval, n, 1e-12).unwrap().passed());
        }
    }

    #[test]
    fn azuma_budgets() {
        assert!((azuma_budget(0.1, 200, 2) - 2.0 * (-0.25f64).exp()).abs() < 1e-15);
        assert!((azuma_budget(0.1, 2000, 2) - 2.0 * (-2.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn convergence_deterministic_and_identity() {
        let mut rng = root_rng(9);
        let full = IidEdgeLimit::new(1.0, 1.0).unwrap();
        let r = convergence_check(&full, &RewiringMap::constant(2, true, true), &[10, 50, 200], 0.1, &mut rng).unwrap();
        assert!(r.rows.iter().all(|row| row.deviation == 0.0));
        assert!(!r.excess);
        let lim = IidEdgeLimit::new(0.1, 0.9).unwrap();
        let r = convergence_check(&lim, &RewiringMap::identity(2), &[200, 2000], 0.1, &mut rng).unwrap();
        assert!((r.target - 0.81).abs() < 1e-15);
        assert!(r.rows[1].within_epsilon);
        assert!(convergence_check(&lim, &RewiringMap::identity(3), &[2], 0.1, &mut rng).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut rng = root_rng(10);
        let d = motif_densities(&path(), 2, 10, &mut rng).unwrap();
        let csv = densities_csv(&d);
        assert_eq!(csv.lines().next(), Some("motif_id,order,mode,value,sample_count"));
        assert!(csv.contains("1,2,exact,6.6666666666666663e-1,"));
        let big = Graph::complete(20);
        let d = motif_densities(&big, 3, 100, &mut rng).unwrap();
        assert!(densities_csv(&d).contains(",3,monte-carlo,1.0000000000000000e0,100"));
    }
}
