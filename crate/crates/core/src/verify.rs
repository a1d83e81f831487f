//! Verification reports and the exhaustive verification suite.

use serde::Serialize;

use crate::chain;
use crate::ctmc;
use crate::error::{Error, Result};
use crate::graph::{distance, Graph, PairArray, Permutation, RewiringMap};
use crate::limits;
use crate::measures::{
    self, GlobalAtom, IidEdgeLimit, KernelSpec, ReversibleParams, RewiringMeasureSpec, TransitionLaw,
};
use crate::rng::stream_rng;

/// Outcome of one exhaustive property check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub property: String,
    pub parameters: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub worst_case: Option<String>,
    pub passed: bool,
}

impl CheckReport {
    pub fn new(property: impl Into<String>, parameters: impl Into<String>, tolerance: f64) -> Self {
        CheckReport {
            property: property.into(),
            parameters: parameters.into(),
            max_violation: 0.0,
            tolerance,
            cases: 0,
            worst_case: None,
            passed: true,
        }
    }

    /// Records one case. A zero tolerance demands exact equality.
    pub fn observe(&mut self, violation: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        let violation = if violation.is_nan() { f64::INFINITY } else { violation };
        if violation > self.max_violation {
            self.max_violation = violation;
            self.worst_case = Some(describe());
        }
        self.passed = self.max_violation == 0.0 || self.max_violation < self.tolerance;
    }
}

/// Outcome of a named collection of checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<CheckReport>,
    pub passed: bool,
}

impl VerifyReport {
    fn new(suite: &str, seed: u64, cases: Vec<CheckReport>) -> Self {
        let passed = cases.iter().all(|c| c.passed);
        VerifyReport {
            suite: suite.to_string(),
            seed,
            cases,
            passed,
        }
    }

    /// One `PASS`/`FAIL` line per case.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!(
                "{} {} [{}] max violation {:e} (tolerance {:e}, {} cases)\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.property,
                c.parameters,
                c.max_violation,
                c.tolerance,
                c.cases
            ));
        }
        out
    }
}

pub const SUITES: [&str; 4] = ["default", "discrete", "limits", "ctmc"];

const TOL: f64 = 1e-12;

/// Runs a named suite. `default` runs every check; the others run the
/// checks of one component.
pub fn run_suite(name: &str, seed: u64) -> Result<VerifyReport> {
    let cases = match name {
        "default" => {
            let mut all = discrete_cases()?;
            all.extend(limit_cases()?);
            all.extend(ctmc_cases(seed)?);
            all
        }
        "discrete" => discrete_cases()?,
        "limits" => limit_cases()?,
        "ctmc" => ctmc_cases(seed)?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(VerifyReport::new(name, seed, cases))
}

fn suite_kernels() -> Result<Vec<KernelSpec>> {
    Ok(vec![
        KernelSpec::er(0.2, 0.5)?,
        KernelSpec::mixed(1.0, 2.0, 0.5, 1.5)?,
        KernelSpec::Reversible(ReversibleParams::symmetric(1.0, 0.5)?),
        KernelSpec::reversible(1.0, 2.0, 0.5)?,
    ])
}

fn labeled(mut r: CheckReport, label: &str) -> CheckReport {
    r.parameters = format!("{label}, {}", r.parameters);
    r
}

fn discrete_cases() -> Result<Vec<CheckReport>> {
    let mut cases = Vec::new();
    for k in suite_kernels()? {
        let label = format!("{k:?}");
        for (m, n) in [(1, 2), (2, 3), (1, 3)] {
            cases.push(labeled(chain::verify_consistency(&k, m, n, TOL)?, &label));
        }
        cases.push(labeled(chain::verify_exchangeability(&k, 3)?, &label));
        let brute = chain::kernel_from_map_law(|w| k.map_prob(w), 3)?;
        let mut agree = CheckReport::new("kernel-matches-map-law", label.clone(), TOL);
        for g in Graph::all(3) {
            for h in Graph::all(3) {
                agree.observe((k.transition_prob(&g, &h) - brute.prob(&g, &h)).abs(), || {
                    format!("G={g:?}, G'={h:?}")
                });
            }
        }
        cases.push(agree);
    }
    for params in [ReversibleParams::new(1.0, 2.0, 0.5)?, ReversibleParams::symmetric(1.0, 0.5)?] {
        let spec = KernelSpec::Reversible(params);
        cases.push(labeled(
            chain::verify_detailed_balance(&spec, |g| params.stationary_prob(g), 3, TOL)?,
            &format!("{params:?}"),
        ));
    }
    let k = chain::exact_kernel(&KernelSpec::er(0.2, 0.5)?, 3)?;
    let st = chain::stationary_solve(&k)?;
    let q = measures::stationary_q(0.2, 0.5)?;
    let mut fixed = CheckReport::new("stationary-law", "er(0.2, 0.5), n=3", 1e-10);
    for (idx, g) in Graph::all(3).enumerate() {
        fixed.observe((st.dist[idx] - measures::er_graph_prob(q, &g)).abs(), || format!("G={g:?}"));
    }
    cases.push(fixed);
    Ok(cases)
}

fn limit_cases() -> Result<Vec<CheckReport>> {
    let mut cases = Vec::new();
    for (p0, p1) in [(0.4, 0.6), (0.3, 0.7), (0.0, 1.0), (1.0, 1.0)] {
        let lim = IidEdgeLimit::new(p0, p1)?;
        for n in 1..=limits::MAX_STRUCTURE_ORDER {
            let r = limits::check_limit_structure(|v: &RewiringMap| lim.density(v), n, TOL)?;
            let label = format!("iid({p0}, {p1})");
            cases.push(labeled(r.projective, &label));
            cases.push(labeled(r.normalization, &label));
        }
    }
    let mut perm = CheckReport::new("density-permutation-invariance", "n=5, order 3", 0.0);
    let w = RewiringMap::from_code(5, 0x9_a5c3);
    let base = limits::injection_histogram(&w, 3)?;
    for sigma in Permutation::all(5) {
        let moved = limits::injection_histogram(&w.permute(&sigma)?, 3)?;
        let diff = base.iter().zip(&moved).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0);
        perm.observe(diff as f64, || format!("sigma={sigma:?}"));
    }
    cases.push(perm);
    Ok(cases)
}

fn suite_measures() -> Result<Vec<RewiringMeasureSpec>> {
    let atom = |rate, p0, p1| -> Result<GlobalAtom> {
        Ok(GlobalAtom {
            rate,
            limit: IidEdgeLimit::new(p0, p1)?,
        })
    };
    Ok(vec![
        RewiringMeasureSpec::local(1.0, 2.0)?,
        RewiringMeasureSpec::new(vec![atom(1.0, 0.3, 0.7)?], 0.0, 0.0)?,
        RewiringMeasureSpec::new(vec![atom(1.0, 0.1, 0.9)?, atom(0.5, 0.3, 0.7)?], 1.0, 2.0)?,
    ])
}

fn ctmc_cases(seed: u64) -> Result<Vec<CheckReport>> {
    let mut cases = Vec::new();
    for (idx, spec) in suite_measures()?.iter().enumerate() {
        let label = format!("measure #{idx}");
        cases.push(labeled(ctmc::verify_generator_consistency(spec, 2, 3, TOL)?, &label));
        cases.push(labeled(ctmc::verify_generator_exchangeability(spec, 3)?, &label));
        let mut brute = CheckReport::new("jump-rate-brute-force", format!("{label}, n=3"), TOL);
        for g in Graph::all(3) {
            for h in Graph::all(3).filter(|h| *h != g) {
                let diff = (ctmc::jump_rate(spec, &g, &h)? - ctmc::jump_rate_brute_force(spec, &g, &h)?).abs();
                brute.observe(diff, || format!("G={g:?}, G'={h:?}"));
            }
        }
        cases.push(brute);
        let q = ctmc::Generator::new(spec, 3)?;
        let mut rows = CheckReport::new("generator-row-sums", format!("{label}, n=3"), TOL);
        rows.observe(q.max_row_sum(), || "worst row".into());
        cases.push(rows);
    }
    let spec = suite_measures()?.pop().expect("nonempty");
    let mut rng = stream_rng(seed, 0);
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 3), (2, 4)])?;
    let h = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)])?;
    let start = distance(&g, &h)?;
    let run = ctmc::couple(&g, &h, &spec, 50.0, &mut rng)?;
    let mut lipschitz = CheckReport::new("coupling-lipschitz", format!("n=5, {} events", run.distances.len() - 1), 0.0);
    for (k, d) in run.distances.iter().enumerate() {
        lipschitz.observe((d - start).max(0.0), || format!("after event {k}"));
    }
    cases.push(lipschitz);
    let mut monotone = CheckReport::new("coupling-nonincreasing", "n=5", 0.0);
    for (k, w) in run.distances.windows(2).enumerate() {
        monotone.observe((w[1] - w[0]).max(0.0), || format!("event {}", k + 1));
    }
    cases.push(monotone);
    let grid = [0.0, 1.0, 2.0, 5.0];
    let traj = ctmc::simulate_ctmc(&g, &spec, 5.0, &grid, &mut stream_rng(seed, 1))?;
    let again = ctmc::CtmcTrajectory::from_events(g.clone(), traj.events.clone(), 5.0, &grid)?;
    let mut replay = CheckReport::new("replay-determinism", "n=5", 0.0);
    for ((t, a), (_, b)) in traj.snapshots.iter().zip(&again.snapshots) {
        replay.observe(if a == b { 0.0 } else { 1.0 }, || format!("t={t}"));
    }
    cases.push(replay);
    Ok(cases)
}
