//! Independent oracles for the derived example values.
//!
//! Everything here recomputes from first principles (function evaluation on
//! input vectors, full pairwise order checks, linear scans) rather than going
//! through the word-level paths the library uses.

use std::collections::BTreeSet;

use selfdual::budget::Budget;
use selfdual::intervals::{re_scan, IntervalCounter};
use selfdual::layer::generate_layer;
use selfdual::mbf::{is_monotone, Mbf};
use selfdual::orbits::{classify, orbit_size, VariablePermutation};

fn m(s: &str) -> Mbf {
    Mbf::parse_bits(s).unwrap()
}

/// Truth table as a map from input vectors (bit `j` = variable `j + 1`).
fn eval(g: &[bool], input: usize) -> bool {
    g[input]
}

/// All monotone tables of `n` variables by the O(4^n) definition.
fn monotone_tables(n: usize) -> Vec<Vec<bool>> {
    let w = 1usize << n;
    (0u64..1 << w)
        .map(|v| (0..w).map(|i| v >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|g| (0..w).all(|x| (0..w).all(|y| x & y != x || !eval(g, x) || eval(g, y))))
        .collect()
}

fn as_int(g: &[bool]) -> u64 {
    g.iter().enumerate().map(|(i, &b)| (b as u64) << i).sum()
}

/// `(g . pi)(x)`: evaluate `g` on the input with its variables relabelled.
fn permute_table(g: &[bool], n: usize, perm: &[usize]) -> Vec<bool> {
    let w = 1usize << n;
    let mut out = vec![false; w];
    for (x, &value) in g.iter().enumerate() {
        let mut y = 0;
        for (j, &to) in perm.iter().enumerate() {
            if x >> j & 1 == 1 {
                y |= 1 << to;
            }
        }
        out[y] = value;
    }
    out
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn dedekind_numbers_by_definition() {
    // frozen from the pairwise filter: d_0..d_4 = 2, 3, 6, 20, 168
    let counts: Vec<usize> = (0..=4).map(|n| monotone_tables(n).len()).collect();
    assert_eq!(counts, [2, 3, 6, 20, 168]);
    for n in 0..=4 {
        let expected: Vec<u64> = {
            let mut v: Vec<u64> = monotone_tables(n).iter().map(|g| as_int(g)).collect();
            v.sort();
            v
        };
        assert_eq!(generate_layer(n).unwrap().elements(), expected.as_slice());
    }
    assert_eq!(generate_layer(5).unwrap().len(), 7581);
    assert_eq!(generate_layer(6).unwrap().len(), 7_828_354);
}

#[test]
fn order_example_by_scan() {
    let (x, y) = (m("0011"), m("0101"));
    let scan = (0..4).all(|i| !x.bit(i) || y.bit(i));
    assert!(!scan);
    assert_eq!(x.leq(&y).unwrap(), scan);
}

#[test]
fn non_monotone_example_by_pairwise_check() {
    let g = [false, true, false, false]; // "0100"
    let pairwise = (0..4).all(|x| (0..4).all(|y| x & y != x || !g[x] || g[y]));
    assert!(!pairwise);
    assert!(!is_monotone(2, &[as_int(&g), 0, 0, 0]));
}

#[test]
fn join_meet_examples_are_monotone() {
    let j = m("0011").join(&m("0101")).unwrap();
    let k = m("0011").meet(&m("0101")).unwrap();
    assert_eq!(j.to_bit_string(), "0111");
    assert_eq!(k.to_bit_string(), "0001");
    assert!(is_monotone(2, j.bits()) && is_monotone(2, k.bits()));
}

#[test]
fn swap_example_by_evaluation() {
    // g = 0011 as a table, swap variables 1 and 2
    let g = [false, false, true, true];
    let swapped = permute_table(&g, 2, &[1, 0]);
    assert_eq!(swapped, [false, true, false, true]);
    let p = VariablePermutation::transposition(2, 1, 2).unwrap();
    assert_eq!(p.apply(&m("0011")).unwrap(), m("0101"));
}

/// Orbits by evaluating `g . pi` for every permutation and collecting distinct tables.
fn naive_classes(n: usize) -> Vec<(u64, usize)> {
    let perms = all_perms(n);
    let layer = generate_layer(n).unwrap();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &x in layer.elements() {
        let g: Vec<bool> = (0..1usize << n).map(|i| x >> i & 1 == 1).collect();
        let orbit: BTreeSet<u64> = perms
            .iter()
            .map(|p| as_int(&permute_table(&g, n, p)))
            .collect();
        let rep = *orbit.iter().next().unwrap();
        if seen.insert(rep) {
            out.push((rep, orbit.len()));
        }
    }
    out.sort();
    out
}

#[test]
fn class_counts_by_naive_orbits() {
    let naive: Vec<usize> = (0..=5).map(|n| naive_classes(n).len()).collect();
    // frozen from the naive enumeration
    assert_eq!(naive, [2, 3, 5, 10, 30, 210]);
    for n in 0..=5 {
        let got: Vec<(u64, usize)> = classify(&generate_layer(n).unwrap())
            .unwrap()
            .iter()
            .map(|c| (c.representative.word(), c.gamma as usize))
            .collect();
        assert_eq!(got, naive_classes(n), "n={n}");
    }
    let d2: Vec<usize> = naive_classes(2).iter().map(|c| c.1).collect();
    assert_eq!(d2, [1, 1, 2, 1, 1]);
}

#[test]
fn orbit_size_examples() {
    assert_eq!(orbit_size(&m("0001")).unwrap(), 1);
    assert_eq!(orbit_size(&m("0011")).unwrap(), 2);
}

#[test]
fn interval_examples_by_scan() {
    let d2 = generate_layer(2).unwrap();
    let counter = IntervalCounter::new(2).unwrap();
    for (x, y, expected) in [
        ("0000", "1111", 6),
        ("0101", "1111", 3),
        ("0001", "0111", 4),
        ("0011", "0101", 0),
    ] {
        assert_eq!(re_scan(&d2, &m(x), &m(y)).unwrap(), expected);
        assert_eq!(counter.re_fast(&m(x), &m(y)).unwrap(), expected);
    }
}

#[test]
fn brute_values_by_definition() {
    // self-dual tables counted on the definitional enumeration: 0, 1, 2, 4, 12
    for (n, expected) in [0u128, 1, 2, 4, 12].into_iter().enumerate() {
        let w = 1usize << n;
        let count = monotone_tables(n)
            .iter()
            .filter(|g| (0..w).all(|i| g[i] != g[w - 1 - i]))
            .count() as u128;
        assert_eq!(count, expected);
        assert_eq!(
            selfdual::self_dual_brute(n, &Budget::unlimited()).unwrap(),
            expected
        );
    }
}
