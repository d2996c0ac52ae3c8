//! The action of `S_n` on `D_n` by relabelling input variables.
//!
//! A permutation of variables induces a permutation of bit positions by
//! permuting the binary digits of each position index. Classes are found by
//! enumerating every image of each not-yet-visited element while walking the
//! layer in ascending order, so the first element seen of each orbit is its
//! minimum and becomes the representative.

use crate::error::{Error, Result};
use crate::layer::Layer;
use crate::mbf::{Mbf, MAX_VARS, WORDS, WORD_VARS};

/// A bijection on the variables `1..=n`, with its induced map on positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariablePermutation {
    /// 0-based: variable `j` is sent to `mapping[j]`.
    mapping: Vec<u8>,
    position_map: Vec<u16>,
}

impl VariablePermutation {
    pub fn identity(n: usize) -> Self {
        Self::from_zero_based((0..n as u8).collect())
    }

    /// `images[j - 1]` is the image of variable `j`, both 1-based.
    pub fn from_mapping(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n > MAX_VARS {
            return Err(Error::WidthOverflow { n, max: MAX_VARS });
        }
        let mut seen = vec![false; n];
        for &v in images {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("{images:?} is not a permutation of 1..={n}"),
                });
            }
        }
        Ok(Self::from_zero_based(
            images.iter().map(|&v| (v - 1) as u8).collect(),
        ))
    }

    /// Swaps variables `i` and `j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("transposition ({i} {j}) outside 1..={n}"),
            });
        }
        images.swap(i - 1, j - 1);
        Self::from_mapping(&images)
    }

    fn from_zero_based(mapping: Vec<u8>) -> Self {
        let n = mapping.len();
        let position_map = (0..1usize << n)
            .map(|i| {
                mapping
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| i >> j & 1 == 1)
                    .fold(0u16, |acc, (_, &to)| acc | 1 << to)
            })
            .collect();
        Self {
            mapping,
            position_map,
        }
    }

    pub fn n(&self) -> usize {
        self.mapping.len()
    }

    /// 1-based images of the variables.
    pub fn images(&self) -> Vec<usize> {
        self.mapping.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn position_map(&self) -> &[u16] {
        &self.position_map
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::WidthMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(Self::from_zero_based(
            other
                .mapping
                .iter()
                .map(|&v| self.mapping[v as usize])
                .collect(),
        ))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (j, &to) in self.mapping.iter().enumerate() {
            inv[to as usize] = j as u8;
        }
        Self::from_zero_based(inv)
    }

    /// Moves the value at position `i` to `position_map[i]`.
    pub fn apply(&self, g: &Mbf) -> Result<Mbf> {
        if g.n() != self.n() {
            return Err(Error::WidthMismatch {
                left: self.n(),
                right: g.n(),
            });
        }
        if g.n() <= WORD_VARS {
            return Ok(Mbf::from_word_unchecked(g.n(), self.apply_word(g.word())));
        }
        let mut bits = [0u64; WORDS];
        for (w, &src) in g.bits().iter().enumerate() {
            let mut rest = src;
            while rest != 0 {
                let i = w * 64 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let to = self.position_map[i] as usize;
                bits[to / 64] |= 1 << (to % 64);
            }
        }
        Mbf::new(g.n(), bits)
    }

    /// Single-word action, `n <= 6`.
    #[inline]
    pub fn apply_word(&self, x: u64) -> u64 {
        let mut out = 0;
        let mut rest = x;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.position_map[i];
        }
        out
    }
}

/// All `n!` permutations with precomputed position maps.
#[derive(Clone, Debug)]
pub struct SymmetricGroup {
    n: usize,
    perms: Vec<VariablePermutation>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::WidthOverflow { n, max: MAX_VARS });
        }
        let mut perms = Vec::new();
        let mut current: Vec<u8> = (0..n as u8).collect();
        permutations(&mut current, 0, &mut perms);
        Ok(Self { n, perms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &[VariablePermutation] {
        &self.perms
    }

    /// Distinct images of `g`, ascending.
    pub fn orbit(&self, g: &Mbf) -> Result<Vec<Mbf>> {
        let mut out = self
            .perms
            .iter()
            .map(|p| p.apply(g))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    fn orbit_words(&self, x: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self.perms.iter().map(|p| p.apply_word(x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn orbit_size(&self, g: &Mbf) -> Result<usize> {
        Ok(self.orbit(g)?.len())
    }

    /// Minimal orbit element.
    pub fn canonical(&self, g: &Mbf) -> Result<Mbf> {
        Ok(self.orbit(g)?[0])
    }
}

fn permutations(current: &mut Vec<u8>, k: usize, out: &mut Vec<VariablePermutation>) {
    if k == current.len() {
        out.push(VariablePermutation::from_zero_based(current.clone()));
        return;
    }
    for i in k..current.len() {
        current.swap(k, i);
        permutations(current, k + 1, out);
        current.swap(k, i);
    }
}

/// One equivalence class: its minimal element and its size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitClass {
    pub representative: Mbf,
    pub gamma: u64,
}

/// Number of distinct images of `g` under all variable permutations.
pub fn orbit_size(g: &Mbf) -> Result<usize> {
    SymmetricGroup::new(g.n())?.orbit_size(g)
}

/// Minimal element of the orbit of `g`.
pub fn canonical(g: &Mbf) -> Result<Mbf> {
    SymmetricGroup::new(g.n())?.canonical(g)
}

/// Partitions a layer into orbits, sorted by representative.
pub fn classify(layer: &Layer) -> Result<Vec<OrbitClass>> {
    let n = layer.n();
    let group = SymmetricGroup::new(n)?;
    let mut visited = vec![false; layer.len()];
    let mut classes = Vec::new();
    for (i, &x) in layer.elements().iter().enumerate() {
        if visited[i] {
            continue;
        }
        let images = group.orbit_words(x);
        debug_assert_eq!(images[0], x);
        for &y in &images {
            visited[layer.ordinal(y)] = true;
        }
        classes.push(OrbitClass {
            representative: Mbf::from_word_unchecked(n, x),
            gamma: images.len() as u64,
        });
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layer::generate_layer;

    fn m(s: &str) -> Mbf {
        Mbf::parse_bits(s).unwrap()
    }

    #[test]
    fn swap_moves_positions() {
        let swap = VariablePermutation::transposition(2, 1, 2).unwrap();
        assert_eq!(swap.apply(&m("0011")).unwrap(), m("0101"));
        let id = VariablePermutation::identity(2);
        assert_eq!(id.apply(&m("0011")).unwrap(), m("0011"));
        assert!(swap.apply(&m("01")).is_err());
    }

    #[test]
    fn position_maps_preserve_popcount() {
        for p in SymmetricGroup::new(4).unwrap().perms() {
            let mut seen = [false; 16];
            for (i, &to) in p.position_map().iter().enumerate() {
                assert_eq!((i as u16).count_ones(), to.count_ones());
                assert!(!std::mem::replace(&mut seen[to as usize], true));
            }
        }
    }

    #[test]
    fn group_sizes() {
        let sizes: Vec<usize> = (0..=5)
            .map(|n| SymmetricGroup::new(n).unwrap().perms().len())
            .collect();
        assert_eq!(sizes, [1, 1, 2, 6, 24, 120]);
    }

    #[test]
    fn classes_of_d2() {
        let classes = classify(&generate_layer(2).unwrap()).unwrap();
        let gammas: Vec<u64> = classes.iter().map(|c| c.gamma).collect();
        assert_eq!(gammas, [1, 1, 2, 1, 1]);
        assert_eq!(classes[2].representative, m("0101"));
        let d0 = classify(&generate_layer(0).unwrap()).unwrap();
        assert_eq!(d0.len(), 2);
        assert!(d0.iter().all(|c| c.gamma == 1));
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&m("0001")).unwrap(), 1);
        assert_eq!(orbit_size(&m("0011")).unwrap(), 2);
        assert_eq!(orbit_size(&Mbf::top(5).unwrap()).unwrap(), 1);
        // one variable out of seven, as a wide vector
        let mut bits = [0u64; WORDS];
        for i in 0..128 {
            if i & 1 == 1 {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        let x1 = Mbf::new(7, bits).unwrap();
        assert_eq!(orbit_size(&x1).unwrap(), 7);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(VariablePermutation::from_mapping(&[1, 1]).is_err());
        assert!(VariablePermutation::from_mapping(&[0, 1]).is_err());
        assert!(VariablePermutation::transposition(3, 1, 4).is_err());
    }

    #[test]
    fn inverse_undoes() {
        let p = VariablePermutation::from_mapping(&[2, 3, 1]).unwrap();
        let id = p.compose(&p.inverse()).unwrap();
        assert_eq!(id, VariablePermutation::identity(3));
    }
}
