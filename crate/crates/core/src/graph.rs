//! Graphs, rewiring maps and their algebra.
//!
//! Both kinds are symmetric arrays over the pairs of `[n]` with an empty
//! diagonal, stored as packed bit-planes in the pair order of
//! [`crate::pairs`]. A [`Graph`] has one plane; a [`RewiringMap`] has two,
//! `w0` (the new status of an absent edge) and `w1` (the new status of a
//! present edge).

use std::fmt;

use crate::error::{check_same_order, Error, Result};
use crate::pairs::{pair_count, pair_index, pair_of, pairs, PairBits};

/// Common interface of symmetric pair-indexed arrays.
///
/// Each pair carries a symbol in `0..ALPHABET`; for graphs the symbol is the
/// edge bit, for rewiring maps it is `w0 + 2 * w1`. The integer code of a
/// whole array is `sum_k symbol(k) * ALPHABET^k` over pair indices `k`, so
/// restricting to `[m]` keeps the low-order digits.
pub trait PairArray: Clone + PartialEq + fmt::Debug {
    const ALPHABET: u64;

    fn order(&self) -> usize;

    /// Symbol at pair index `k`.
    fn symbol(&self, k: usize) -> u64;

    /// Symbol at the pair `{i, j}`; the diagonal is always symbol 0.
    fn symbol_at(&self, i: usize, j: usize) -> u64 {
        if i == j {
            0
        } else {
            self.symbol(pair_index(i, j))
        }
    }

    /// The array built from its per-pair symbols.
    fn from_symbols(n: usize, symbols: impl Iterator<Item = u64>) -> Self;

    /// Leading `m x m` sub-array.
    fn restrict(&self, m: usize) -> Result<Self>;

    /// Lowest pair index at which the two arrays differ.
    fn first_difference(&self, other: &Self) -> Option<usize> {
        (0..pair_count(self.order())).find(|&k| self.symbol(k) != other.symbol(k))
    }

    /// Number of distinct arrays of order `m`, if it fits in a `u64`.
    fn count_of_order(m: usize) -> Option<u64> {
        let bits = Self::ALPHABET.trailing_zeros() as usize * pair_count(m);
        (bits < 64).then(|| 1u64 << bits)
    }

    /// Integer code; `None` when it does not fit in a `u64`.
    fn code(&self) -> Option<u64> {
        Self::count_of_order(self.order())?;
        let mut code = 0u64;
        for k in (0..pair_count(self.order())).rev() {
            code = code * Self::ALPHABET + self.symbol(k);
        }
        Some(code)
    }

    fn from_code(n: usize, code: u64) -> Self {
        let mut rest = code;
        Self::from_symbols(
            n,
            (0..pair_count(n)).map(move |_| {
                let s = rest % Self::ALPHABET;
                rest /= Self::ALPHABET;
                s
            }),
        )
    }

    /// `result[i][j] = self[sigma(i)][sigma(j)]`.
    fn permute(&self, sigma: &Permutation) -> Result<Self> {
        check_same_order(self.order(), sigma.len())?;
        Ok(Self::from_symbols(
            self.order(),
            pairs(self.order()).map(|(i, j)| self.symbol_at(sigma.image(i), sigma.image(j))),
        ))
    }

    /// Every array of order `m`, in code order. Panics if there are more
    /// than `2^63` of them.
    fn all(m: usize) -> Box<dyn Iterator<Item = Self>>
    where
        Self: 'static,
    {
        let count = Self::count_of_order(m).expect("too many arrays to enumerate");
        Box::new((0..count).map(move |c| Self::from_code(m, c)))
    }
}

/// A simple undirected graph on `[n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    bits: PairBits,
}

impl Graph {
    /// The empty graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            bits: PairBits::zeros(pair_count(n)),
        }
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        Graph {
            n,
            bits: PairBits::ones(pair_count(n)),
        }
    }

    /// Graph from 0-based edges; rejects self-loops and out-of-range labels.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in edges {
            if i == j {
                return Err(Error::InvalidArray(format!("self-loop at vertex {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidArray(format!(
                    "edge ({i}, {j}) out of range for order {n}"
                )));
            }
            g.bits.set(pair_index(i, j), true);
        }
        Ok(g)
    }

    /// Graph from a full adjacency matrix, validating symmetry and the
    /// zero diagonal.
    pub fn from_adjacency<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut g = Graph::empty(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidArray(format!("row {i} has length {}", row.len())));
            }
            for (j, &x) in row.iter().enumerate() {
                if x > 1 {
                    return Err(Error::InvalidArray(format!("entry ({i}, {j}) = {x} is not 0/1")));
                }
                if i == j && x != 0 {
                    return Err(Error::InvalidArray(format!("nonzero diagonal at {i}")));
                }
                if x != rows[j].as_ref().get(i).copied().unwrap_or(u8::MAX) {
                    return Err(Error::InvalidArray(format!("asymmetric at ({i}, {j})")));
                }
                if i < j && x == 1 {
                    g.bits.set(pair_index(i, j), true);
                }
            }
        }
        Ok(g)
    }

    /// Graph whose packed pair bits equal the binary digits of `index`.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(pair_count(n) <= 64, "order {n} has no u64 index");
        Graph {
            n,
            bits: PairBits::from_u64(pair_count(n), index),
        }
    }

    /// Dense state index (packed pair bits), defined for `n <= 11`.
    pub fn index(&self) -> Option<u64> {
        self.bits.to_u64()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.bits.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.bits.get(pair_index(i, j))
    }

    pub fn set_edge(&mut self, i: usize, j: usize, on: bool) {
        assert_ne!(i, j, "self-loops are not allowed");
        self.bits.set(pair_index(i, j), on);
    }

    /// Status of the pair with index `k`.
    pub fn pair(&self, k: usize) -> bool {
        self.bits.get(k)
    }

    pub fn set_pair(&mut self, k: usize, on: bool) {
        self.bits.set(k, on);
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones()
    }

    /// 0-based edges `(i, j)`, `i < j`, in pair order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.ones_iter().map(pair_of)
    }

    pub fn complement(&self) -> Graph {
        Graph {
            n: self.n,
            bits: self.bits.not(),
        }
    }

    pub(crate) fn bits(&self) -> &PairBits {
        &self.bits
    }
}

impl PairArray for Graph {
    const ALPHABET: u64 = 2;

    fn order(&self) -> usize {
        self.n
    }

    fn symbol(&self, k: usize) -> u64 {
        self.bits.get(k) as u64
    }

    fn from_symbols(n: usize, symbols: impl Iterator<Item = u64>) -> Self {
        let mut g = Graph::empty(n);
        for (k, s) in symbols.enumerate().take(pair_count(n)) {
            g.bits.set(k, s == 1);
        }
        g
    }

    fn restrict(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n {
            return Err(Error::BadRestriction { m, n: self.n });
        }
        Ok(Graph {
            n: m,
            bits: self.bits.prefix(pair_count(m)),
        })
    }

    fn first_difference(&self, other: &Self) -> Option<usize> {
        self.bits.first_difference(&other.bits)
    }

    fn code(&self) -> Option<u64> {
        self.bits.to_u64()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges().map(|(i, j)| (i + 1, j + 1)).collect();
        write!(f, "Graph(n={}, edges={:?})", self.n, edges)
    }
}

/// A rewiring map on `[n]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RewiringMap {
    n: usize,
    w0: PairBits,
    w1: PairBits,
}

impl RewiringMap {
    /// The identity map: every entry `(0, 1)`.
    pub fn identity(n: usize) -> Self {
        RewiringMap {
            n,
            w0: PairBits::zeros(pair_count(n)),
            w1: PairBits::ones(pair_count(n)),
        }
    }

    /// Every off-diagonal entry equal to `(w0, w1)`.
    pub fn constant(n: usize, w0: bool, w1: bool) -> Self {
        let plane = |b: bool| {
            if b {
                PairBits::ones(pair_count(n))
            } else {
                PairBits::zeros(pair_count(n))
            }
        };
        RewiringMap {
            n,
            w0: plane(w0),
            w1: plane(w1),
        }
    }

    /// Map that complements every pair.
    pub fn complement_map(n: usize) -> Self {
        Self::constant(n, true, false)
    }

    /// Single-edge update: sets pair `{i, j}` to `bit` and fixes all others.
    pub fn single_edge_update(n: usize, i: usize, j: usize, bit: bool) -> Self {
        let mut w = Self::identity(n);
        w.set_entry(i, j, (bit, bit));
        w
    }

    /// Map from a full matrix of `(w0, w1)` entries, validating symmetry and
    /// the `(0, 0)` diagonal.
    pub fn from_entries<R: AsRef<[(u8, u8)]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut w = RewiringMap::constant(n, false, false);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidArray(format!("row {i} has length {}", row.len())));
            }
            for (j, &(a, b)) in row.iter().enumerate() {
                if a > 1 || b > 1 {
                    return Err(Error::InvalidArray(format!("entry ({i}, {j}) is not a bit pair")));
                }
                if i == j && (a, b) != (0, 0) {
                    return Err(Error::InvalidArray(format!("diagonal entry at {i} is not (0,0)")));
                }
                if rows[j].as_ref().get(i) != Some(&(a, b)) {
                    return Err(Error::InvalidArray(format!("asymmetric at ({i}, {j})")));
                }
                if i < j {
                    w.set_entry(i, j, (a == 1, b == 1));
                }
            }
        }
        Ok(w)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.w0.len()
    }

    /// `(w0, w1)` at `{i, j}`; `(false, false)` on the diagonal.
    pub fn entry(&self, i: usize, j: usize) -> (bool, bool) {
        if i == j {
            (false, false)
        } else {
            self.pair(pair_index(i, j))
        }
    }

    /// `(w0, w1)` at pair index `k`.
    pub fn pair(&self, k: usize) -> (bool, bool) {
        (self.w0.get(k), self.w1.get(k))
    }

    pub fn set_entry(&mut self, i: usize, j: usize, value: (bool, bool)) {
        assert_ne!(i, j, "diagonal entries are fixed at (0,0)");
        self.set_pair(pair_index(i, j), value);
    }

    pub fn set_pair(&mut self, k: usize, (a, b): (bool, bool)) {
        self.w0.set(k, a);
        self.w1.set(k, b);
    }

    pub fn is_identity(&self) -> bool {
        self.w0.count_ones() == 0 && self.w1.count_ones() == self.w1.len()
    }

    /// Number of pairs carrying each symbol `w0 + 2*w1`.
    pub fn symbol_counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for (w, (&a, &b)) in self.w0.words().iter().zip(self.w1.words()).enumerate() {
            let valid = if (w + 1) * 64 <= self.w0.len() {
                u64::MAX
            } else {
                (1u64 << (self.w0.len() % 64)) - 1
            };
            counts[0] += (!a & !b & valid).count_ones() as usize;
            counts[1] += (a & !b).count_ones() as usize;
            counts[2] += (!a & b).count_ones() as usize;
            counts[3] += (a & b).count_ones() as usize;
        }
        counts
    }

    /// The rewiring of `g` by this map.
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        check_same_order(self.n, g.n)?;
        Ok(Graph {
            n: self.n,
            bits: g.bits.zip_with(&self.w0, &self.w1, |g, w0, w1| (w0 & !g) | (w1 & g)),
        })
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &RewiringMap) -> Result<RewiringMap> {
        check_same_order(self.n, inner.n)?;
        let pick = |sel: &PairBits| sel.zip_with(&self.w0, &self.w1, |s, a, b| (a & !s) | (b & s));
        Ok(RewiringMap {
            n: self.n,
            w0: pick(&inner.w0),
            w1: pick(&inner.w1),
        })
    }

    /// Lowercase hex of the map code, one byte per four pairs, least
    /// significant byte first. Pair `k` occupies bits `2k` (`w0`) and
    /// `2k + 1` (`w1`).
    pub fn to_hex(&self) -> String {
        let nbytes = self.pair_count().div_ceil(4);
        let mut out = String::with_capacity(2 * nbytes);
        for b in 0..nbytes {
            let mut byte = 0u8;
            for slot in 0..4 {
                let k = 4 * b + slot;
                if k < self.pair_count() {
                    let (a, c) = self.pair(k);
                    byte |= ((a as u8) | ((c as u8) << 1)) << (2 * slot);
                }
            }
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Parses [`RewiringMap::to_hex`] output for a map of order `n`.
    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let np = pair_count(n);
        if hex.len() != 2 * np.div_ceil(4) {
            return Err(Error::InvalidArray(format!(
                "hex map of length {} does not match order {n}",
                hex.len()
            )));
        }
        let mut w = RewiringMap::constant(n, false, false);
        for b in 0..np.div_ceil(4) {
            let byte = u8::from_str_radix(&hex[2 * b..2 * b + 2], 16)
                .map_err(|e| Error::InvalidArray(format!("bad hex: {e}")))?;
            for slot in 0..4 {
                let k = 4 * b + slot;
                let sym = (byte >> (2 * slot)) & 3;
                if k < np {
                    w.set_pair(k, (sym & 1 == 1, sym & 2 == 2));
                } else if sym != 0 {
                    return Err(Error::InvalidArray("nonzero padding in hex map".into()));
                }
            }
        }
        Ok(w)
    }
}

impl PairArray for RewiringMap {
    const ALPHABET: u64 = 4;

    fn order(&self) -> usize {
        self.n
    }

    fn symbol(&self, k: usize) -> u64 {
        self.w0.get(k) as u64 | ((self.w1.get(k) as u64) << 1)
    }

    fn from_symbols(n: usize, symbols: impl Iterator<Item = u64>) -> Self {
        let mut w = RewiringMap::constant(n, false, false);
        for (k, s) in symbols.enumerate().take(pair_count(n)) {
            w.set_pair(k, (s & 1 == 1, s & 2 == 2));
        }
        w
    }

    fn restrict(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.n {
            return Err(Error::BadRestriction { m, n: self.n });
        }
        Ok(RewiringMap {
            n: m,
            w0: self.w0.prefix(pair_count(m)),
            w1: self.w1.prefix(pair_count(m)),
        })
    }

    fn first_difference(&self, other: &Self) -> Option<usize> {
        match (
            self.w0.first_difference(&other.w0),
            self.w1.first_difference(&other.w1),
        ) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

impl fmt::Debug for RewiringMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RewiringMap(n={}, hex={})", self.n, self.to_hex())
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &RewiringMap, inner: &RewiringMap) -> Result<RewiringMap> {
    outer.compose(inner)
}

/// Finite-order ultrametric `1 / max{k : x|[k] = y|[k]}`, with
/// `distance(x, x) = 0`.
pub fn distance<T: PairArray>(x: &T, y: &T) -> Result<f64> {
    check_same_order(x.order(), y.order())?;
    Ok(match x.first_difference(y) {
        None => 0.0,
        // arrays agree on [j] but not on [j + 1], where j is the larger
        // 0-based vertex of the first differing pair
        Some(k) => 1.0 / pair_of(k).1 as f64,
    })
}

/// A permutation of `[n]`, stored as 0-based images.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArray(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation { images })
    }

    /// From 1-based images, e.g. `[3, 2, 1]` for the transposition `(1 3)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidArray("0 in a 1-based permutation".into()));
        }
        Self::new(images.iter().map(|x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn display_graph() -> Graph {
        Graph::from_adjacency(&[
            [0, 1, 1, 0, 1],
            [1, 0, 0, 0, 1],
            [1, 0, 0, 1, 0],
            [0, 0, 1, 0, 0],
            [1, 1, 0, 0, 0],
        ])
        .unwrap()
    }

    #[test]
    fn adjacency_validation() {
        assert!(Graph::from_adjacency(&[[0u8, 1], [0, 0]]).is_err());
        assert!(Graph::from_adjacency(&[[1u8, 0], [0, 0]]).is_err());
        assert!(Graph::from_adjacency(&[[0u8, 2], [2, 0]]).is_err());
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
        assert!(RewiringMap::from_entries(&[[(1, 0), (0, 0)], [(0, 0), (0, 0)]]).is_err());
    }

    #[test]
    fn identity_and_complement_maps() {
        let g = display_graph();
        assert_eq!(RewiringMap::identity(5).apply(&g).unwrap(), g);
        assert_eq!(RewiringMap::complement_map(5).apply(&g).unwrap(), g.complement());
        assert!(RewiringMap::identity(5).apply(&Graph::empty(4)).is_err());
    }

    #[test]
    fn complement_examples() {
        let g = display_graph();
        assert_eq!(Graph::empty(4).complement(), Graph::complete(4));
        assert_eq!(g.complement().complement(), g);
        let c = g.complement();
        let row: Vec<bool> = (0..5).map(|j| c.has_edge(0, j)).collect();
        assert_eq!(row, vec![false, false, false, true, false]);
    }

    #[test]
    fn compose_identity_and_absorbing() {
        let w = RewiringMap::from_code(4, 0xabc);
        let id = RewiringMap::identity(4);
        assert_eq!(id.compose(&w).unwrap(), w);
        assert_eq!(w.compose(&id).unwrap(), w);
        let ones = RewiringMap::constant(4, true, true);
        assert_eq!(ones.compose(&w).unwrap(), ones);
    }

    #[test]
    fn restriction_examples() {
        let g = display_graph();
        assert_eq!(g.restrict(5).unwrap(), g);
        assert_eq!(Graph::complete(5).restrict(3).unwrap(), Graph::complete(3));
        assert!(g.restrict(6).is_err());
        assert!(g.restrict(0).is_err());
    }

    #[test]
    fn distance_examples() {
        let g = display_graph();
        assert_eq!(distance(&g, &g).unwrap(), 0.0);
        let mut h = g.clone();
        h.set_edge(0, 1, !g.has_edge(0, 1));
        assert_eq!(distance(&g, &h).unwrap(), 1.0);
        let mut h = g.clone();
        h.set_edge(3, 4, !g.has_edge(3, 4));
        h.set_edge(1, 3, !g.has_edge(1, 3));
        assert!((distance(&g, &h).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(distance(&g, &Graph::empty(4)).is_err());
    }

    #[test]
    fn permute_path() {
        // path 1-2-3 under (1 3) is path 3-2-1
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let sigma = Permutation::from_one_based(&[3, 2, 1]).unwrap();
        let p = path.permute(&sigma).unwrap();
        assert_eq!(p, path);
        assert!(p.has_edge(2, 1) && p.has_edge(1, 0) && !p.has_edge(0, 2));
        let star = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let moved = star.permute(&sigma).unwrap();
        assert_eq!(moved.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(star.permute(&Permutation::identity(3)).unwrap(), star);
    }

    #[test]
    fn permutations_enumerated() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 24);
        assert_eq!(Permutation::all(1).len(), 1);
        assert!(Permutation::new(vec![0, 0]).is_err());
        let s = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(s.inverse().image(s.image(1)), 1);
    }

    #[test]
    fn codes_round_trip() {
        for c in 0..64 {
            assert_eq!(Graph::from_code(4, c).code(), Some(c));
            assert_eq!(Graph::from_index(4, c).index(), Some(c));
        }
        for c in [0u64, 1, 77, 4095] {
            assert_eq!(RewiringMap::from_code(4, c).code(), Some(c));
        }
        assert_eq!(RewiringMap::identity(2).code(), Some(2));
    }

    #[test]
    fn hex_round_trip() {
        let w = RewiringMap::from_code(5, 0x5_a3c7);
        assert_eq!(RewiringMap::from_hex(5, &w.to_hex()).unwrap(), w);
        assert_eq!(RewiringMap::identity(2).to_hex(), "02");
        assert!(RewiringMap::from_hex(2, "06").is_err());
    }

    #[test]
    fn symbol_counts_match_pairs() {
        let w = RewiringMap::from_code(4, 0b11_10_01_00_10_11);
        let mut expect = [0; 4];
        for k in 0..6 {
            expect[w.symbol(k) as usize] += 1;
        }
        assert_eq!(w.symbol_counts(), expect);
        assert_eq!(RewiringMap::identity(70).symbol_counts(), [0, 0, 2415, 0]);
    }

    #[test]
    fn order_one_is_total() {
        let g = Graph::empty(1);
        let w = RewiringMap::identity(1);
        assert_eq!(w.apply(&g).unwrap(), g);
        assert_eq!(distance(&g, &g.complement()).unwrap(), 0.0);
        assert_eq!(Graph::all(1).count(), 1);
        assert_eq!(RewiringMap::all(1).count(), 1);
        assert!(w.is_identity());
    }
}
