//! Parametric rewiring laws and closed-form transition kernels.
//!
//! Everything here is a function of the pair-transition counts between two
//! graphs ([`PairStat`]) or the edge counts of one graph ([`EdgeCounts`]),
//! both of which are invariant under joint relabeling of vertices.

use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{check_same_order, Error, Result};
use crate::graph::{Graph, RewiringMap};
use crate::pairs::pair_count;

/// Maximum number of rejection attempts when conditioning a sampled map on
/// being non-identity.
pub const MAX_REJECTION_ATTEMPTS: usize = 1_000_000;

/// Rising factorials with more factors than this are evaluated through
/// log-gamma differences.
const DIRECT_PRODUCT_LIMIT: usize = 40;

/// Counts `n_rs` of pairs with status `r` in the first graph and `s` in the
/// second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairStat {
    pub n00: usize,
    pub n01: usize,
    pub n10: usize,
    pub n11: usize,
}

impl PairStat {
    /// Statistic of the reversed pair `(g2, g)`: `n'_rs = n_sr`.
    pub fn transposed(self) -> PairStat {
        PairStat {
            n00: self.n00,
            n01: self.n10,
            n10: self.n01,
            n11: self.n11,
        }
    }

    pub fn total(&self) -> usize {
        self.n00 + self.n01 + self.n10 + self.n11
    }
}

/// Non-edge and edge counts of a single graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub n0: usize,
    pub n1: usize,
}

impl EdgeCounts {
    pub fn of(g: &Graph) -> Self {
        let n1 = g.edge_count();
        EdgeCounts {
            n0: g.pair_count() - n1,
            n1,
        }
    }
}

pub fn pair_stat(g: &Graph, g2: &Graph) -> Result<PairStat> {
    check_same_order(g.order(), g2.order())?;
    let (mut n01, mut n10, mut n11) = (0, 0, 0);
    for (&a, &b) in g.bits().words().iter().zip(g2.bits().words()) {
        n11 += (a & b).count_ones() as usize;
        n10 += (a & !b).count_ones() as usize;
        n01 += (!a & b).count_ones() as usize;
    }
    Ok(PairStat {
        n00: g.pair_count() - n01 - n10 - n11,
        n01,
        n10,
        n11,
    })
}

/// `x (x+1) ... (x+k-1)`, with `x^{↑0} = 1`.
pub fn rising_factorial(x: f64, k: usize) -> f64 {
    if k <= DIRECT_PRODUCT_LIMIT {
        (0..k).map(|i| x + i as f64).product()
    } else {
        ln_rising_factorial(x, k).exp()
    }
}

pub fn ln_rising_factorial(x: f64, k: usize) -> f64 {
    if k <= DIRECT_PRODUCT_LIMIT {
        (0..k).map(|i| (x + i as f64).ln()).sum()
    } else {
        ln_gamma(x + k as f64) - ln_gamma(x)
    }
}

/// `prod num_i^{↑k_i} / prod den_j^{↑k_j}`, direct for short products and in
/// log space otherwise.
fn rising_ratio(num: &[(f64, usize)], den: &[(f64, usize)]) -> f64 {
    let total: usize = num.iter().chain(den).map(|&(_, k)| k).sum();
    if total <= 2 * DIRECT_PRODUCT_LIMIT {
        let top: f64 = num.iter().map(|&(x, k)| rising_factorial(x, k)).product();
        let bottom: f64 = den.iter().map(|&(x, k)| rising_factorial(x, k)).product();
        top / bottom
    } else {
        let top: f64 = num.iter().map(|&(x, k)| ln_rising_factorial(x, k)).sum();
        let bottom: f64 = den.iter().map(|&(x, k)| ln_rising_factorial(x, k)).sum();
        (top - bottom).exp()
    }
}

fn bernoulli_power(p: f64, ones: usize, zeros: usize) -> f64 {
    // 0^0 = 1 keeps the boundary cases exact
    p.powi(ones as i32) * (1.0 - p).powi(zeros as i32)
}

/// Erdős–Rényi probability `p^{n1} (1-p)^{n0}`.
pub fn er_graph_prob(p: f64, g: &Graph) -> f64 {
    let c = EdgeCounts::of(g);
    bernoulli_power(p, c.n1, c.n0)
}

/// Beta(a, b) mixture of Erdős–Rényi laws: `a^{↑n1} b^{↑n0} / (a+b)^{↑N}`.
pub fn beta_mixed_graph_prob(a: f64, b: f64, g: &Graph) -> f64 {
    let c = EdgeCounts::of(g);
    rising_ratio(&[(a, c.n1), (b, c.n0)], &[(a + b, c.n0 + c.n1)])
}

/// `(p0, p1)`-Erdős–Rényi transition probability
/// `p0^{n01} (1-p0)^{n00} p1^{n11} (1-p1)^{n10}`.
pub fn er_transition_prob(p0: f64, p1: f64, g: &Graph, g2: &Graph) -> Result<f64> {
    let s = pair_stat(g, g2)?;
    Ok(er_transition_from_stat(p0, p1, &s))
}

fn er_transition_from_stat(p0: f64, p1: f64, s: &PairStat) -> f64 {
    bernoulli_power(p0, s.n01, s.n00) * bernoulli_power(p1, s.n11, s.n10)
}

/// Mixed Erdős–Rényi transition probability
/// `a0^{↑n01} b0^{↑n00} a1^{↑n11} b1^{↑n10} / ((a0+b0)^{↑(n00+n01)} (a1+b1)^{↑(n10+n11)})`.
pub fn mixed_transition_prob(params: &BetaMixedKernelParams, g: &Graph, g2: &Graph) -> Result<f64> {
    let s = pair_stat(g, g2)?;
    Ok(params.prob_from_stat(&s))
}

/// Stationary edge probability `q = p0 / (1 - p1 + p0)` of the
/// `(p0, p1)`-Erdős–Rényi chain for `0 < p0, p1 < 1`.
pub fn stationary_q(p0: f64, p1: f64) -> Result<f64> {
    if !(p0 > 0.0 && p0 < 1.0 && p1 > 0.0 && p1 < 1.0) {
        return Err(Error::DegenerateParameters { p0, p1 });
    }
    Ok(p0 / (1.0 - p1 + p0))
}

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: p,
            reason: "must lie in [0, 1]",
        })
    }
}

fn check_positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: x,
            reason: "must be finite and strictly positive",
        })
    }
}

/// Dissociated rewiring law with i.i.d. entries: `w0 ~ Bernoulli(p0)` and
/// `w1 ~ Bernoulli(p1)` independently on every pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IidEdgeLimit {
    p0: f64,
    p1: f64,
}

impl IidEdgeLimit {
    pub fn new(p0: f64, p1: f64) -> Result<Self> {
        check_probability("p0", p0)?;
        check_probability("p1", p1)?;
        Ok(IidEdgeLimit { p0, p1 })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    /// Probability of the single-pair entry `(w0, w1)`.
    pub fn cell_prob(&self, w0: bool, w1: bool) -> f64 {
        let a = if w0 { self.p0 } else { 1.0 - self.p0 };
        let b = if w1 { self.p1 } else { 1.0 - self.p1 };
        a * b
    }

    /// Probability of the identity entry `(0, 1)` on one pair.
    pub fn identity_prob(&self) -> f64 {
        self.cell_prob(false, true)
    }

    /// Probability that the restriction to `[n]` is not the identity.
    pub fn nonidentity_prob(&self, n: usize) -> f64 {
        1.0 - self.identity_prob().powi(pair_count(n) as i32)
    }

    /// Probability of the map `v` (of any order) under this law.
    pub fn density(&self, v: &RewiringMap) -> f64 {
        let counts = v.symbol_counts();
        let cells = [
            self.cell_prob(false, false),
            self.cell_prob(true, false),
            self.cell_prob(false, true),
            self.cell_prob(true, true),
        ];
        counts
            .iter()
            .zip(cells)
            .map(|(&c, p)| p.powi(c as i32))
            .product()
    }

    /// Draws a map on `[n]`; one uniform per pair, in pair order.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> RewiringMap {
        let c00 = self.cell_prob(false, false);
        let c10 = c00 + self.cell_prob(true, false);
        let c01 = c10 + self.cell_prob(false, true);
        let mut w = RewiringMap::constant(n, false, false);
        for k in 0..pair_count(n) {
            let u: f64 = rng.random();
            let entry = if u < c00 {
                (false, false)
            } else if u < c10 {
                (true, false)
            } else if u < c01 {
                (false, true)
            } else {
                (true, true)
            };
            w.set_pair(k, entry);
        }
        w
    }

    /// Draws a map on `[n]` conditioned on not being the identity, by
    /// rejection.
    pub fn sample_nonidentity<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<RewiringMap> {
        if pair_count(n) == 0 {
            return Err(Error::ImpossibleConditioning(format!(
                "order {n} has only the identity map"
            )));
        }
        if self.identity_prob() >= 1.0 {
            return Err(Error::ImpossibleConditioning(
                "(p0, p1) = (0, 1) always yields the identity".into(),
            ));
        }
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            let w = self.sample(n, rng);
            if !w.is_identity() {
                return Ok(w);
            }
        }
        Err(Error::ImpossibleConditioning(format!(
            "no non-identity map after {MAX_REJECTION_ATTEMPTS} attempts (acceptance {:e})",
            self.nonidentity_prob(n)
        )))
    }

    /// Convenience wrapper matching the `condition_nonidentity` flag.
    pub fn sample_rewiring<R: Rng + ?Sized>(
        &self,
        n: usize,
        condition_nonidentity: bool,
        rng: &mut R,
    ) -> Result<RewiringMap> {
        if condition_nonidentity {
            self.sample_nonidentity(n, rng)
        } else {
            Ok(self.sample(n, rng))
        }
    }
}

/// Beta parameters of the mixed Erdős–Rényi kernel: `p0 ~ Beta(a0, b0)`
/// drives absent pairs and `p1 ~ Beta(a1, b1)` drives present pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaMixedKernelParams {
    pub a0: f64,
    pub b0: f64,
    pub a1: f64,
    pub b1: f64,
}

impl BetaMixedKernelParams {
    pub fn new(a0: f64, b0: f64, a1: f64, b1: f64) -> Result<Self> {
        check_positive("a0", a0)?;
        check_positive("b0", b0)?;
        check_positive("a1", a1)?;
        check_positive("b1", b1)?;
        Ok(BetaMixedKernelParams { a0, b0, a1, b1 })
    }

    pub fn prob_from_stat(&self, s: &PairStat) -> f64 {
        rising_ratio(
            &[(self.a0, s.n01), (self.b0, s.n00), (self.a1, s.n11), (self.b1, s.n10)],
            &[(self.a0 + self.b0, s.n00 + s.n01), (self.a1 + self.b1, s.n10 + s.n11)],
        )
    }

    /// Probability of the map `w` under the Beta mixture of i.i.d.-edge laws.
    pub fn map_prob(&self, w: &RewiringMap) -> f64 {
        let [_, c10, c01, c11] = w.symbol_counts();
        let total = w.pair_count();
        let w0_on = c10 + c11;
        let w1_on = c01 + c11;
        rising_ratio(
            &[
                (self.a0, w0_on),
                (self.b0, total - w0_on),
                (self.a1, w1_on),
                (self.b1, total - w1_on),
            ],
            &[(self.a0 + self.b0, total), (self.a1 + self.b1, total)],
        )
    }

    /// Draws `(p0, p1)` from the Beta pair and then an i.i.d.-edge map.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> RewiringMap {
        let p0 = Beta::new(self.a0, self.b0).expect("validated").sample(rng);
        let p1 = Beta::new(self.a1, self.b1).expect("validated").sample(rng);
        IidEdgeLimit { p0, p1 }.sample(n, rng)
    }
}

/// The reversible special case `(a0, b0) = (beta, alpha)`,
/// `(a1, b1) = (alpha', beta)` of the mixed kernel.
///
/// With `alpha' = alpha` this is the symmetric kernel `P_{alpha,beta}`
/// whose pair-transition weights are `alpha^{↑n00} beta^{↑n01}
/// alpha^{↑n11} beta^{↑n10}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReversibleParams {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta: f64,
}

impl ReversibleParams {
    pub fn new(alpha: f64, alpha_prime: f64, beta: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("alpha_prime", alpha_prime)?;
        check_positive("beta", beta)?;
        Ok(ReversibleParams {
            alpha,
            alpha_prime,
            beta,
        })
    }

    /// The symmetric kernel `P_{alpha,beta}`.
    pub fn symmetric(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, alpha, beta)
    }

    pub fn as_mixed(&self) -> BetaMixedKernelParams {
        BetaMixedKernelParams {
            a0: self.beta,
            b0: self.alpha,
            a1: self.alpha_prime,
            b1: self.beta,
        }
    }

    /// Law the kernel is reversible against:
    /// `(alpha+beta)^{↑n0} (alpha'+beta)^{↑n1} / (alpha+alpha'+2 beta)^{↑N}`,
    /// i.e. the Beta mixture with edge parameter `alpha'+beta` and non-edge
    /// parameter `alpha+beta`.
    pub fn stationary_prob(&self, g: &Graph) -> f64 {
        beta_mixed_graph_prob(self.alpha_prime + self.beta, self.alpha + self.beta, g)
    }
}

/// Probability of a transition `g -> g2` under a law on graphs-to-graphs.
pub trait TransitionLaw {
    fn transition_prob(&self, from: &Graph, to: &Graph) -> f64;
}

impl<F: Fn(&Graph, &Graph) -> f64> TransitionLaw for F {
    fn transition_prob(&self, from: &Graph, to: &Graph) -> f64 {
        self(from, to)
    }
}

/// A law on rewiring maps of every order that can be sampled.
pub trait MapLaw {
    fn sample_map<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<RewiringMap>;
}

impl MapLaw for IidEdgeLimit {
    fn sample_map<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<RewiringMap> {
        Ok(self.sample(n, rng))
    }
}

/// Point mass at one fixed map.
#[derive(Clone, Debug, PartialEq)]
pub struct PointMass(pub RewiringMap);

impl MapLaw for PointMass {
    fn sample_map<R: Rng + ?Sized>(&self, n: usize, _rng: &mut R) -> Result<RewiringMap> {
        check_same_order(self.0.order(), n)?;
        Ok(self.0.clone())
    }
}

/// The closed-form discrete-time kernels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum KernelSpec {
    Er(IidEdgeLimit),
    Mixed(BetaMixedKernelParams),
    Reversible(ReversibleParams),
}

impl KernelSpec {
    pub fn er(p0: f64, p1: f64) -> Result<Self> {
        Ok(KernelSpec::Er(IidEdgeLimit::new(p0, p1)?))
    }

    pub fn mixed(a0: f64, b0: f64, a1: f64, b1: f64) -> Result<Self> {
        Ok(KernelSpec::Mixed(BetaMixedKernelParams::new(a0, b0, a1, b1)?))
    }

    pub fn reversible(alpha: f64, alpha_prime: f64, beta: f64) -> Result<Self> {
        Ok(KernelSpec::Reversible(ReversibleParams::new(alpha, alpha_prime, beta)?))
    }

    pub fn prob(&self, g: &Graph, g2: &Graph) -> Result<f64> {
        let s = pair_stat(g, g2)?;
        Ok(match self {
            KernelSpec::Er(l) => er_transition_from_stat(l.p0, l.p1, &s),
            KernelSpec::Mixed(m) => m.prob_from_stat(&s),
            KernelSpec::Reversible(r) => r.as_mixed().prob_from_stat(&s),
        })
    }

    /// Probability of drawing the map `w` as one step's rewiring map.
    pub fn map_prob(&self, w: &RewiringMap) -> f64 {
        match self {
            KernelSpec::Er(l) => l.density(w),
            KernelSpec::Mixed(m) => m.map_prob(w),
            KernelSpec::Reversible(r) => r.as_mixed().map_prob(w),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Er(_) => "er",
            KernelSpec::Mixed(_) => "mixed",
            KernelSpec::Reversible(_) => "reversible",
        }
    }
}

impl TransitionLaw for KernelSpec {
    fn transition_prob(&self, from: &Graph, to: &Graph) -> f64 {
        self.prob(from, to).expect("transition between graphs of different order")
    }
}

impl MapLaw for KernelSpec {
    fn sample_map<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<RewiringMap> {
        Ok(match self {
            KernelSpec::Er(l) => l.sample(n, rng),
            KernelSpec::Mixed(m) => m.sample(n, rng),
            KernelSpec::Reversible(r) => r.as_mixed().sample(n, rng),
        })
    }
}

/// One atom of the global rewiring measure: rate `lambda` on an i.i.d.-edge
/// limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalAtom {
    pub rate: f64,
    pub limit: IidEdgeLimit,
}

/// Jump measure of a continuous-time rewiring process: a finite atomic
/// mixture of i.i.d.-edge rewiring measures plus single-edge updates at
/// rate `c0` (set to 0) and `c1` (set to 1) per pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewiringMeasureSpec {
    global: Vec<GlobalAtom>,
    c0: f64,
    c1: f64,
}

impl RewiringMeasureSpec {
    pub fn new(global: Vec<GlobalAtom>, c0: f64, c1: f64) -> Result<Self> {
        for atom in &global {
            check_positive("lambda", atom.rate)?;
            if atom.limit.identity_prob() >= 1.0 {
                return Err(Error::InvalidParameter {
                    name: "p0",
                    value: atom.limit.p0,
                    reason: "an atom with (p0, p1) = (0, 1) only produces the identity",
                });
            }
        }
        for (name, c) in [("c0", c0), ("c1", c1)] {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value: c,
                    reason: "must be finite and nonnegative",
                });
            }
        }
        Ok(RewiringMeasureSpec { global, c0, c1 })
    }

    pub fn local(c0: f64, c1: f64) -> Result<Self> {
        Self::new(Vec::new(), c0, c1)
    }

    pub fn empty() -> Self {
        RewiringMeasureSpec {
            global: Vec::new(),
            c0: 0.0,
            c1: 0.0,
        }
    }

    pub fn global(&self) -> &[GlobalAtom] {
        &self.global
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }
}
