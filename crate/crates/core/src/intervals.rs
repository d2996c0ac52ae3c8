//! Interval cardinalities `re(x, y) = |{z in D_n : x <= z <= y}|`.
//!
//! [`re_scan`] is the definition applied literally. [`IntervalCounter`]
//! evaluates the same quantity through the pair decomposition
//!
//! ```text
//! re_n(x0.x1, y0.y1) = sum over z0 in D_{n-1}, x0 <= z0 <= y0, of re_{n-1}(x1 | z0, y1)
//! ```
//!
//! with dense tables for `n <= 4` and a sharded memo above that. An empty
//! interval counts as 0.

use std::sync::Arc;

use dashmap::DashMap;

use crate::budget::{self, Budget};
use crate::error::{Error, Result};
use crate::layer::{Layer, LayerStack, UpSets};
use crate::mbf::{word, Mbf};

/// Highest level kept as a dense table inside [`IntervalCounter`].
pub const DENSE_VARS: usize = 4;

/// Highest level [`IntervalCounter`] evaluates.
pub const MAX_INTERVAL_VARS: usize = 6;

/// Highest level a [`FullTable`] can hold in 16-bit cells.
pub const MAX_FULL_TABLE_VARS: usize = 5;

fn check_pair(layer_n: usize, x: &Mbf, y: &Mbf) -> Result<()> {
    for m in [x, y] {
        if m.n() != layer_n {
            return Err(Error::WidthMismatch {
                left: layer_n,
                right: m.n(),
            });
        }
    }
    Ok(())
}

/// Linear scan of the layer.
pub fn re_scan(layer: &Layer, x: &Mbf, y: &Mbf) -> Result<u64> {
    check_pair(layer.n(), x, y)?;
    Ok(re_scan_words(layer, x.word(), y.word()))
}

pub fn re_scan_words(layer: &Layer, x: u64, y: u64) -> u64 {
    layer
        .elements()
        .iter()
        .filter(|&&z| word::leq(x, z) && word::leq(z, y))
        .count() as u64
}

/// Dense `d_n x d_n` table of interval counts, indexed by layer ordinals.
#[derive(Clone, Debug)]
pub struct FullTable {
    layer: Arc<Layer>,
    counts: Vec<u16>,
}

impl FullTable {
    pub fn n(&self) -> usize {
        self.layer.n()
    }

    pub fn layer(&self) -> &Arc<Layer> {
        &self.layer
    }

    /// Count by ordinals.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.layer.len() + j] as u64
    }

    /// Row of `re(x_i, .)` by ordinal of `y`.
    #[inline]
    pub fn row(&self, i: usize) -> &[u16] {
        let d = self.layer.len();
        &self.counts[i * d..(i + 1) * d]
    }

    /// Count by words; both must be elements of the layer.
    #[inline]
    pub fn get(&self, x: u64, y: u64) -> u64 {
        self.at(self.layer.ordinal(x), self.layer.ordinal(y))
    }
}

/// `re(x, top)` for a list of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpwardTable {
    pub n: usize,
    pub entries: Vec<(Mbf, u64)>,
}

impl UpwardTable {
    pub fn get(&self, x: &Mbf) -> Option<u64> {
        self.entries.iter().find(|(e, _)| e == x).map(|&(_, c)| c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableMode {
    Full,
    Upward,
    OnDemand,
}

/// Interval data in one of its three storage modes.
#[derive(Debug)]
pub enum IntervalTable {
    Full(FullTable),
    Upward(UpwardTable),
    OnDemand(IntervalCounter),
}

impl IntervalTable {
    pub fn mode(&self) -> TableMode {
        match self {
            Self::Full(_) => TableMode::Full,
            Self::Upward(_) => TableMode::Upward,
            Self::OnDemand(_) => TableMode::OnDemand,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Full(t) => t.n(),
            Self::Upward(t) => t.n,
            Self::OnDemand(c) => c.n(),
        }
    }

    /// `None` when the stored mode does not cover the pair.
    pub fn get(&self, x: &Mbf, y: &Mbf) -> Option<u64> {
        if x.n() != self.n() || y.n() != self.n() {
            return None;
        }
        match self {
            Self::Full(t) => {
                let i = t.layer.index_of(x.word())?;
                let j = t.layer.index_of(y.word())?;
                Some(t.at(i, j))
            }
            Self::Upward(t) => (y.word() == word::mask(t.n)).then(|| t.get(x)).flatten(),
            Self::OnDemand(c) => Some(c.count(x.word(), y.word())),
        }
    }
}

/// Memoized evaluation of `re` on `D_n`, `n <= 6`.
#[derive(Debug)]
pub struct IntervalCounter {
    n: usize,
    stack: LayerStack,
    up_sets: Vec<UpSets>,
    dense: Vec<FullTable>,
    memo: Vec<DashMap<(u64, u64), u64>>,
    memo_cap: usize,
}

impl IntervalCounter {
    pub fn new(n: usize) -> Result<Self> {
        Self::within(n, &Budget::unlimited(), usize::MAX)
    }

    /// Builds the lower layers and dense tables; memo growth stops at `memo_cap` entries per level.
    pub fn within(n: usize, budget: &Budget, memo_cap: usize) -> Result<Self> {
        if n > MAX_INTERVAL_VARS {
            return Err(Error::WidthOverflow {
                n,
                max: MAX_INTERVAL_VARS,
            });
        }
        let stack_n = if n <= DENSE_VARS { n } else { n - 1 };
        budget.check(
            format!("interval evaluation on D_{n}"),
            budget::layer_bytes(stack_n),
        )?;
        let stack = LayerStack::generate_within(stack_n, budget)?;
        Self::from_stack(n, stack, memo_cap)
    }

    /// Reuses an existing stack, which must reach `D_{n-1}` (or `D_n` when `n <= 4`).
    pub fn from_stack(n: usize, mut stack: LayerStack, memo_cap: usize) -> Result<Self> {
        let stack_n = if n <= DENSE_VARS { n } else { n - 1 };
        if stack.n() < stack_n {
            return Err(Error::WidthMismatch {
                left: stack_n,
                right: stack.n(),
            });
        }
        stack.truncate(stack_n);
        let dense_top = n.min(DENSE_VARS);
        let up_sets = (0..=dense_top.min(stack_n))
            .map(|k| stack.layer(k).up_sets())
            .collect::<Result<Vec<_>>>()?;
        let mut counter = Self {
            n,
            stack,
            up_sets,
            dense: Vec::new(),
            memo: (0..=n).map(|_| DashMap::new()).collect(),
            memo_cap,
        };
        for k in 0..=dense_top {
            let layer = counter.stack.layer(k).clone();
            let table = counter.build_full(&layer);
            counter.dense.push(table);
        }
        Ok(counter)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stack(&self) -> &LayerStack {
        &self.stack
    }

    /// Dense table for level `k <= min(n, 4)`.
    pub fn dense(&self, k: usize) -> Option<&FullTable> {
        self.dense.get(k)
    }

    /// Total memoized entries across levels.
    pub fn memo_len(&self) -> usize {
        self.memo.iter().map(DashMap::len).sum()
    }

    /// `re(x, y)` on `D_n` for monotone words `x`, `y`.
    pub fn re_fast(&self, x: &Mbf, y: &Mbf) -> Result<u64> {
        check_pair(self.n, x, y)?;
        Ok(self.count(x.word(), y.word()))
    }

    #[inline]
    pub fn count(&self, x: u64, y: u64) -> u64 {
        self.count_level(self.n, x, y)
    }

    /// `re` on level `k <= n`.
    pub fn count_level(&self, k: usize, x: u64, y: u64) -> u64 {
        if !word::leq(x, y) {
            return 0;
        }
        if k == 0 {
            return y - x + 1;
        }
        if let Some(t) = self.dense.get(k) {
            return t.get(x, y);
        }
        if let Some(v) = self.memo[k].get(&(x, y)) {
            return *v;
        }
        let v = self.split_sum(k, x, y);
        if self.memo[k].len() < self.memo_cap {
            self.memo[k].insert((x, y), v);
        }
        v
    }

    /// One step of the pair recursion at level `k`, without consulting level-`k` caches.
    fn split_sum(&self, k: usize, x: u64, y: u64) -> u64 {
        let half = 1 << (k - 1);
        let low = word::mask(k - 1);
        let (x0, x1) = (x & low, x >> half);
        let (y0, y1) = (y & low, y >> half);
        let lower = self.stack.layer(k - 1);
        match self.up_sets.get(k - 1) {
            Some(ups) => ups
                .up(lower.ordinal(x0))
                .iter()
                .map(|&j| lower.elements()[j as usize])
                .filter(|&z0| word::leq(z0, y0))
                .map(|z0| self.count_level(k - 1, x1 | z0, y1))
                .sum(),
            None => lower
                .elements()
                .iter()
                .filter(|&&z0| word::leq(x0, z0) && word::leq(z0, y0))
                .map(|&z0| self.count_level(k - 1, x1 | z0, y1))
                .sum(),
        }
    }

    fn build_full(&self, layer: &Arc<Layer>) -> FullTable {
        let k = layer.n();
        let d = layer.len();
        let ups = if let Some(u) = self.up_sets.get(k) {
            u.clone()
        } else {
            layer.up_sets().expect("full tables are built for n <= 5")
        };
        let mut counts = vec![0u16; d * d];
        for (i, &x) in layer.elements().iter().enumerate() {
            for &j in ups.up(i) {
                let y = layer.elements()[j as usize];
                let v = if k == 0 {
                    y - x + 1
                } else {
                    self.split_sum(k, x, y)
                };
                counts[i * d + j as usize] = v as u16;
            }
        }
        FullTable {
            layer: layer.clone(),
            counts,
        }
    }

    /// Dense table for the top level. Only `n <= 5` fits in 16-bit cells.
    pub fn full_table(&self, layer: &Arc<Layer>, budget: &Budget) -> Result<FullTable> {
        if layer.n() != self.n {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: layer.n(),
            });
        }
        if let Some(t) = self.dense.get(self.n) {
            return Ok(t.clone());
        }
        if self.n > MAX_FULL_TABLE_VARS {
            return Err(Error::Budget {
                what: format!("dense interval table for D_{}", self.n),
                needed_mb: (budget::full_table_bytes(self.n) >> 20) as u64,
                budget_mb: budget.bytes() >> 20,
            });
        }
        budget.check(
            format!("dense interval table for D_{}", self.n),
            budget::full_table_bytes(self.n) + budget::up_sets_bytes(self.n),
        )?;
        Ok(self.build_full(layer))
    }

    /// `re(x, top)` for each given element.
    pub fn upward_table<'a>(
        &self,
        elements: impl IntoIterator<Item = &'a Mbf>,
    ) -> Result<UpwardTable> {
        let top = word::mask(self.n);
        let entries = elements
            .into_iter()
            .map(|e| {
                if e.n() != self.n {
                    return Err(Error::WidthMismatch {
                        left: self.n,
                        right: e.n(),
                    });
                }
                Ok((*e, self.count(e.word(), top)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UpwardTable { n: self.n, entries })
    }
}

/// Upward table over a list of elements (a layer or class representatives).
pub fn build_upward_table(elements: &[Mbf], n: usize, budget: &Budget) -> Result<UpwardTable> {
    let counter = IntervalCounter::within(n, budget, usize::MAX)?;
    counter.upward_table(elements)
}
