//! Materialized layers `D_n`, built bottom-up by the pair construction.
//!
//! Every element of `D_n` is a concatenation `g0 . g1` with `g0 <= g1` in
//! `D_{n-1}`; `g0` occupies the low `2^(n-1)` positions. Layers are kept as
//! single words, so only `n <= 6` can be materialized.

use std::sync::Arc;

use crate::budget::{self, Budget};
use crate::error::{Error, Result};
use crate::mbf::{word, Mbf, WORD_VARS};

/// Largest layer that fits the single-word representation.
pub const MAX_LAYER_VARS: usize = WORD_VARS;

/// Largest layer for which up-set adjacency (`d_{n+1}` entries) is built.
pub const MAX_UP_SETS_VARS: usize = 5;

const ABSENT: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum LayerIndex {
    /// Direct table over all `2^(2^n)` words, `n <= 4`.
    Direct(Vec<u32>),
    /// Two direct lookups in the lower layer, then a pair table.
    Pairs {
        lower: Vec<u32>,
        lower_len: usize,
        table: Vec<u32>,
    },
    /// Binary search over the sorted elements.
    Sorted,
}

/// All of `D_n`, ascending by integer value, with ordinal lookup.
#[derive(Clone, Debug)]
pub struct Layer {
    n: usize,
    elements: Vec<u64>,
    index: LayerIndex,
}

impl Layer {
    /// `D_0 = {0, 1}`.
    fn base() -> Self {
        Self::with_index(0, vec![0, 1], None)
    }

    fn with_index(n: usize, elements: Vec<u64>, lower: Option<&Layer>) -> Self {
        let half = 1usize << n.saturating_sub(1);
        let index = if n <= 4 {
            let mut direct = vec![ABSENT; 1 << (1 << n)];
            for (i, &e) in elements.iter().enumerate() {
                direct[e as usize] = i as u32;
            }
            LayerIndex::Direct(direct)
        } else if n == 5 {
            let owned;
            let lower = match lower {
                Some(l) => l,
                None => {
                    owned = generate_layer(4).expect("D_4 is always available");
                    &owned
                }
            };
            let LayerIndex::Direct(direct) = &lower.index else {
                unreachable!("D_4 uses a direct index")
            };
            let lower_len = lower.len();
            let mut table = vec![ABSENT; lower_len * lower_len];
            let low_mask = word::mask(n - 1);
            for (i, &e) in elements.iter().enumerate() {
                let i0 = direct[(e & low_mask) as usize] as usize;
                let i1 = direct[(e >> half) as usize] as usize;
                table[i0 * lower_len + i1] = i as u32;
            }
            LayerIndex::Pairs {
                lower: direct.clone(),
                lower_len,
                table,
            }
        } else {
            LayerIndex::Sorted
        };
        Self { n, elements, index }
    }

    /// Pair construction from `D_{n-1}`.
    pub fn from_lower(lower: &Layer) -> Result<Self> {
        let n = lower.n + 1;
        if n > MAX_LAYER_VARS {
            return Err(Error::Budget {
                what: format!("materializing D_{n}"),
                needed_mb: (budget::layer_bytes(n) >> 20).min(u64::MAX as u128) as u64,
                budget_mb: 0,
            });
        }
        let half = 1 << lower.n;
        let mut elements = Vec::new();
        if lower.n <= MAX_UP_SETS_VARS {
            let ups = lower.up_sets()?;
            elements.reserve(ups.total());
            for (i, &g0) in lower.elements.iter().enumerate() {
                elements.extend(
                    ups.up(i)
                        .iter()
                        .map(|&j| g0 | lower.elements[j as usize] << half),
                );
            }
        } else {
            for (i, &g0) in lower.elements.iter().enumerate() {
                for &g1 in &lower.elements[i..] {
                    if word::leq(g0, g1) {
                        elements.push(g0 | g1 << half);
                    }
                }
            }
        }
        elements.sort_unstable();
        Ok(Self::with_index(n, elements, Some(lower)))
    }

    /// Builds a layer from a loaded element list, checking that it is exactly `D_n`.
    pub fn from_elements(n: usize, elements: Vec<u64>) -> Result<Self> {
        if n > MAX_LAYER_VARS {
            return Err(Error::WidthOverflow {
                n,
                max: MAX_LAYER_VARS,
            });
        }
        if let Some(&bad) = elements.iter().find(|&&e| !word::is_monotone(n, e)) {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{bad:x} is not a monotone function of {n} variables"),
            });
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse {
                line: 0,
                msg: "layer elements are not strictly ascending".into(),
            });
        }
        if (elements.len() as u128) != budget::DEDEKIND[n] {
            return Err(Error::Parse {
                line: 0,
                msg: format!(
                    "layer n={n} has {} elements, expected {}",
                    elements.len(),
                    budget::DEDEKIND[n]
                ),
            });
        }
        Ok(Self::with_index(n, elements, None))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> Mbf {
        Mbf::from_word_unchecked(self.n, self.elements[i])
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Mbf> + '_ {
        self.elements
            .iter()
            .map(move |&e| Mbf::from_word_unchecked(self.n, e))
    }

    pub fn top(&self) -> u64 {
        word::mask(self.n)
    }

    /// Ordinal of a word in the layer, if present.
    #[inline]
    pub fn index_of(&self, x: u64) -> Option<usize> {
        let i = match &self.index {
            LayerIndex::Direct(direct) => *direct.get(x as usize)?,
            LayerIndex::Pairs {
                lower,
                lower_len,
                table,
            } => {
                let half = 1 << (self.n - 1);
                let i0 = *lower.get((x & word::mask(self.n - 1)) as usize)?;
                let i1 = *lower.get((x >> half) as usize)?;
                if i0 == ABSENT || i1 == ABSENT {
                    return None;
                }
                table[i0 as usize * lower_len + i1 as usize]
            }
            LayerIndex::Sorted => return self.elements.binary_search(&x).ok(),
        };
        (i != ABSENT).then_some(i as usize)
    }

    /// Ordinal of a word known to be in the layer.
    #[inline]
    pub fn ordinal(&self, x: u64) -> usize {
        match self.index_of(x) {
            Some(i) => i,
            None => panic!("{x:x} is not an element of D_{}", self.n),
        }
    }

    pub fn position(&self, x: &Mbf) -> Result<Option<usize>> {
        if x.n() != self.n {
            return Err(Error::WidthMismatch {
                left: self.n,
                right: x.n(),
            });
        }
        Ok(self.index_of(x.word()))
    }

    /// For every element, the ordinals of the elements above it.
    pub fn up_sets(&self) -> Result<UpSets> {
        if self.n > MAX_UP_SETS_VARS {
            return Err(Error::Budget {
                what: format!("up-set adjacency of D_{}", self.n),
                needed_mb: (budget::up_sets_bytes(self.n) >> 20) as u64,
                budget_mb: 0,
            });
        }
        Ok(UpSets::build(&self.elements))
    }
}

/// Up-set adjacency: `up(i)` lists the ordinals `j` with `e_i <= e_j`, ascending.
///
/// `x <= y` implies `x <= y` as integers, so each list starts at `i` itself.
#[derive(Clone, Debug)]
pub struct UpSets {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl UpSets {
    fn build(elements: &[u64]) -> Self {
        let mut offsets = Vec::with_capacity(elements.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for (i, &x) in elements.iter().enumerate() {
            targets.extend(
                (i..elements.len())
                    .filter(|&j| word::leq(x, elements[j]))
                    .map(|j| j as u32),
            );
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    #[inline]
    pub fn up(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Number of comparable pairs.
    pub fn total(&self) -> usize {
        self.targets.len()
    }
}

/// Layers `D_0..=D_n`.
#[derive(Clone, Debug)]
pub struct LayerStack {
    layers: Vec<Arc<Layer>>,
}

impl LayerStack {
    pub fn generate(n: usize) -> Result<Self> {
        Self::generate_within(n, &Budget::unlimited())
    }

    pub fn generate_within(n: usize, budget: &Budget) -> Result<Self> {
        if n > MAX_LAYER_VARS {
            budget.check(format!("materializing D_{n}"), budget::layer_bytes(n))?;
            return Err(Error::Budget {
                what: format!("materializing D_{n}"),
                needed_mb: (budget::layer_bytes(n) >> 20).min(u64::MAX as u128) as u64,
                budget_mb: budget.bytes() >> 20,
            });
        }
        budget.check(format!("materializing D_{n}"), budget::layer_bytes(n))?;
        let mut layers = vec![Arc::new(Layer::base())];
        for _ in 0..n {
            let next = Layer::from_lower(layers.last().expect("non-empty"))?;
            layers.push(Arc::new(next));
        }
        Ok(Self { layers })
    }

    pub fn n(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, n: usize) -> &Arc<Layer> {
        &self.layers[n]
    }

    pub fn top(&self) -> &Arc<Layer> {
        self.layers.last().expect("non-empty")
    }

    /// Keeps `D_0..=D_n`.
    pub fn truncate(&mut self, n: usize) {
        self.layers.truncate(n + 1);
    }
}

/// Builds `D_n` by repeated pair construction.
pub fn generate_layer(n: usize) -> Result<Layer> {
    let stack = LayerStack::generate(n)?;
    Ok(Arc::unwrap_or_clone(
        stack.layers.into_iter().last().expect("non-empty"),
    ))
}

/// Counts the self-dual elements of a layer.
pub fn count_self_dual(layer: &Layer) -> u128 {
    let n = layer.n();
    layer
        .elements()
        .iter()
        .filter(|&&x| word::dual(n, x) == x)
        .count() as u128
}

/// `lambda_n` by generating `D_n` and testing every element.
pub fn self_dual_brute(n: usize, budget: &Budget) -> Result<u128> {
    if n > MAX_LAYER_VARS {
        budget.check(
            format!("brute enumeration of D_{n}"),
            budget::layer_bytes(n),
        )?;
    }
    let stack = LayerStack::generate_within(n, budget)?;
    Ok(count_self_dual(stack.top()))
}
