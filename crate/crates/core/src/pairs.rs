//! Packed storage for symmetric pair-indexed arrays.
//!
//! Unordered vertex pairs `{i, j}` with `i < j` (0-based) are numbered
//! column by column: `(0,1), (0,2), (1,2), (0,3), (1,3), (2,3), ...`, so pair
//! `(i, j)` has index `j(j-1)/2 + i`. In 1-based labels this is the order
//! `(1,2), (1,3), (2,3), (1,4), ...`. The first `m(m-1)/2` pairs are exactly
//! the pairs inside `[m]`, which makes restriction a prefix operation.

/// Number of unordered pairs on `n` vertices.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Index of the unordered pair `{i, j}`, `i != j`.
#[inline]
pub fn pair_index(i: usize, j: usize) -> usize {
    debug_assert_ne!(i, j, "diagonal has no pair index");
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    hi * (hi - 1) / 2 + lo
}

/// Inverse of [`pair_index`]: returns `(i, j)` with `i < j`.
#[inline]
pub fn pair_of(k: usize) -> (usize, usize) {
    // largest j with j(j-1)/2 <= k
    let mut j = (((8 * k + 1) as f64).sqrt() as usize + 1) / 2;
    while j * (j - 1) / 2 > k {
        j -= 1;
    }
    while (j + 1) * j / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

/// Iterator over all pairs `(i, j)`, `i < j < n`, in index order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

/// A fixed-length bitset. Bits at positions `>= len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PairBits {
    len: usize,
    words: Vec<u64>,
}

impl PairBits {
    pub fn zeros(len: usize) -> Self {
        PairBits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut bits = PairBits {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        bits.mask_tail();
        bits
    }

    /// Low `len` bits of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut bits = Self::zeros(len);
        if let Some(w) = bits.words.first_mut() {
            *w = value;
        }
        bits.mask_tail();
        bits
    }

    /// The bits as an integer; `None` when `len > 64`.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, k: usize) -> bool {
        debug_assert!(k < self.len);
        (self.words[k / 64] >> (k % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, k: usize, value: bool) {
        debug_assert!(k < self.len);
        let mask = 1u64 << (k % 64);
        if value {
            self.words[k / 64] |= mask;
        } else {
            self.words[k / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Bitwise combination of up to three equal-length bitsets.
    pub fn zip_with(&self, a: &PairBits, b: &PairBits, f: impl Fn(u64, u64, u64) -> u64) -> Self {
        debug_assert!(self.len == a.len && self.len == b.len);
        let words = self
            .words
            .iter()
            .zip(&a.words)
            .zip(&b.words)
            .map(|((&x, &y), &z)| f(x, y, z))
            .collect();
        let mut out = PairBits {
            len: self.len,
            words,
        };
        out.mask_tail();
        out
    }

    pub fn not(&self) -> Self {
        let mut out = PairBits {
            len: self.len,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.mask_tail();
        out
    }

    /// The first `len` bits.
    pub fn prefix(&self, len: usize) -> Self {
        assert!(len <= self.len);
        let mut out = PairBits {
            len,
            words: self.words[..len.div_ceil(64)].to_vec(),
        };
        out.mask_tail();
        out
    }

    /// Position of the lowest bit where `self` and `other` differ.
    pub fn first_difference(&self, other: &PairBits) -> Option<usize> {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(w, (a, b))| {
                let x = a ^ b;
                (x != 0).then(|| w * 64 + x.trailing_zeros() as usize)
            })
    }

    /// Indices of set bits in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}
