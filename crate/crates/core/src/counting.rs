//! Exact counts of self-dual monotone Boolean functions.
//!
//! Each method views `D_{n+k}` as monotone maps `B^k -> D_n` and counts the
//! self-dual ones from data on the base layer `D_n`:
//!
//! * `plus2`: sum over classes `b` of `gamma(b) * re(b | b*, top)`.
//! * `plus3`: `lambda_n` plus, over classes `a <= a*` with weight below
//!   `2^(n-1)`, `gamma(a) * G(a)` where `G(a)` sums `re(a, c & b*)` over
//!   `a <= b <= c <= a*`.
//! * `plus4`: over classes `a` and all `b, c`, the sum over `h` above
//!   `a|b|c|a*|b*|c*` of four interval counts into `h`.
//! * `plus4c`: `lambda_n` plus, over classes `h >= h*` with weight above
//!   `2^(n-1)`, `gamma(h) * F(h)` where `F(h)` is the same four-factor
//!   product summed over `a, b, c` in `[h*, h]`.
//!
//! Per-class contributions are computed in parallel and merged by exact
//! 128-bit addition, so the result does not depend on scheduling.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;

use crate::budget::{self, Budget};
use crate::error::{Error, Result};
use crate::intervals::{FullTable, IntervalCounter};
use crate::layer::{count_self_dual, Layer, LayerStack, UpSets, MAX_LAYER_VARS, MAX_UP_SETS_VARS};
use crate::mbf::word;
use crate::orbits::{classify, OrbitClass};

/// Known values `lambda_0..=lambda_9`.
pub const LAMBDA_TABLE: [u128; 10] = [
    0,
    1,
    2,
    4,
    12,
    81,
    2_646,
    1_422_564,
    229_809_982_112,
    423_295_099_074_735_261_880,
];

pub fn known_lambda(n: usize) -> Option<u128> {
    LAMBDA_TABLE.get(n).copied()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Brute,
    Plus2,
    Plus3,
    Plus4,
    Plus4c,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Brute,
        Method::Plus2,
        Method::Plus3,
        Method::Plus4,
        Method::Plus4c,
    ];

    /// `n_target - base_n`.
    pub fn offset(self) -> usize {
        match self {
            Method::Brute => 0,
            Method::Plus2 => 2,
            Method::Plus3 => 3,
            Method::Plus4 | Method::Plus4c => 4,
        }
    }

    /// Largest base layer the method runs on.
    pub fn max_base(self) -> usize {
        match self {
            Method::Brute | Method::Plus2 => MAX_LAYER_VARS,
            Method::Plus3 | Method::Plus4 | Method::Plus4c => MAX_UP_SETS_VARS,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Plus2 => "plus2",
            Method::Plus3 => "plus3",
            Method::Plus4 => "plus4",
            Method::Plus4c => "plus4c",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method {s:?}; expected brute|plus2|plus3|plus4|plus4c"))
    }
}

/// Where a base value `lambda_n` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseSource {
    /// Counted on the materialized base layer.
    Brute,
    /// Taken from [`LAMBDA_TABLE`].
    Table,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaResult {
    pub n_target: usize,
    pub method: Method,
    pub value: u128,
    pub base_n: usize,
    pub seconds: f64,
    /// `lambda_{base_n}` and its provenance, for the methods that add it.
    pub base_lambda: Option<(u128, BaseSource)>,
}

impl LambdaResult {
    /// `lambda n=<n> method=<m> value=<decimal> base_n=<n> seconds=<float>`.
    pub fn record(&self) -> String {
        format!(
            "lambda n={} method={} value={} base_n={} seconds={:.3}",
            self.n_target, self.method, self.value, self.base_n, self.seconds
        )
    }

    /// Compares against [`LAMBDA_TABLE`]; targets beyond the table pass.
    pub fn verify(&self) -> Result<()> {
        match known_lambda(self.n_target) {
            Some(expected) if expected != self.value => Err(Error::Verification {
                n_target: self.n_target,
                method: self.method,
                expected,
                got: self.value,
            }),
            _ => Ok(()),
        }
    }
}

/// Sums exactly, refusing on 128-bit overflow.
pub fn exact_sum<I: IntoIterator<Item = u128>>(terms: I) -> Result<u128> {
    terms
        .into_iter()
        .try_fold(0u128, |acc, t| acc.checked_add(t))
        .ok_or(Error::Overflow)
}

/// Everything the counting methods need about a base layer `D_n`.
#[derive(Debug)]
pub struct BaseSpace {
    n: usize,
    stack: LayerStack,
    classes: Vec<OrbitClass>,
    counter: IntervalCounter,
    up_sets: OnceLock<UpSets>,
    full: OnceLock<FullTable>,
    budget: Budget,
}

impl BaseSpace {
    /// Generates `D_0..=D_n`, classifies `D_n` and sets up interval evaluation.
    pub fn prepare(n: usize, budget: &Budget) -> Result<Self> {
        let stack = LayerStack::generate_within(n, budget)?;
        let classes = classify(stack.top())?;
        Self::from_parts(stack, classes, budget)
    }

    pub fn from_parts(
        stack: LayerStack,
        classes: Vec<OrbitClass>,
        budget: &Budget,
    ) -> Result<Self> {
        let n = stack.n();
        let gamma_total: u64 = classes.iter().map(|c| c.gamma).sum();
        if gamma_total as usize != stack.top().len()
            || classes.iter().any(|c| c.representative.n() != n)
        {
            return Err(Error::Parse {
                line: 0,
                msg: format!("classes do not partition D_{n}"),
            });
        }
        let counter = IntervalCounter::from_stack(n, stack.clone(), usize::MAX)?;
        Ok(Self {
            n,
            stack,
            classes,
            counter,
            up_sets: OnceLock::new(),
            full: OnceLock::new(),
            budget: *budget,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layer(&self) -> &Arc<Layer> {
        self.stack.top()
    }

    pub fn classes(&self) -> &[OrbitClass] {
        &self.classes
    }

    pub fn counter(&self) -> &IntervalCounter {
        &self.counter
    }

    /// `lambda_n` counted on the base layer.
    pub fn base_lambda(&self) -> u128 {
        count_self_dual(self.layer())
    }

    pub fn up_sets(&self) -> Result<&UpSets> {
        if let Some(u) = self.up_sets.get() {
            return Ok(u);
        }
        self.budget.check(
            format!("up-set adjacency of D_{}", self.n),
            budget::up_sets_bytes(self.n),
        )?;
        let built = self.layer().up_sets()?;
        Ok(self.up_sets.get_or_init(|| built))
    }

    pub fn full_table(&self) -> Result<&FullTable> {
        if let Some(t) = self.full.get() {
            return Ok(t);
        }
        let built = self.counter.full_table(self.layer(), &self.budget)?;
        Ok(self.full.get_or_init(|| built))
    }

    /// Ordinals of the elements in `[lo, hi]`, ascending.
    fn interval(&self, lo: u64, hi: u64) -> Result<Vec<u32>> {
        let layer = self.layer();
        let Some(i) = layer.index_of(lo) else {
            return Ok(Vec::new());
        };
        Ok(self
            .up_sets()?
            .up(i)
            .iter()
            .copied()
            .filter(|&j| word::leq(layer.elements()[j as usize], hi))
            .collect())
    }
}

fn half_weight_cmp(n: usize, x: u64) -> std::cmp::Ordering {
    // compares weight(x) with 2^(n-1) without fractions at n = 0
    (2 * word::weight(x) as u64).cmp(&(1u64 << n))
}

/// Per-class terms of the `plus2` sum.
pub fn plus2_terms(space: &BaseSpace) -> Vec<u128> {
    let n = space.n;
    let top = word::mask(n);
    space
        .classes
        .par_iter()
        .map(|c| {
            let b = c.representative.word();
            c.gamma as u128 * space.counter.count(b | word::dual(n, b), top) as u128
        })
        .collect()
}

/// Unweighted `plus2` sum over every element of `D_n`.
pub fn plus2_unfolded(space: &BaseSpace) -> Result<u128> {
    let n = space.n;
    let top = word::mask(n);
    exact_sum(
        space
            .layer()
            .elements()
            .iter()
            .map(|&b| space.counter.count(b | word::dual(n, b), top) as u128),
    )
}

pub fn lambda_plus2(space: &BaseSpace) -> Result<LambdaResult> {
    let start = Instant::now();
    let value = exact_sum(plus2_terms(space))?;
    Ok(LambdaResult {
        n_target: space.n + 2,
        method: Method::Plus2,
        value,
        base_n: space.n,
        seconds: start.elapsed().as_secs_f64(),
        base_lambda: None,
    })
}

/// Loop order for the `plus3` inner count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Plus3Order {
    /// Choose `b <= c` first, then count `d` in `[a, c & b*]`.
    #[default]
    PairsFirst,
    /// Choose `d` first, then count pairs `b <= c` with `b <= d*` and `c >= d`.
    MiddleFirst,
}

/// `G(a)`: self-dual maps `B^3 -> D_n` with bottom value `a`.
pub fn plus3_g(space: &BaseSpace, a: u64, order: Plus3Order) -> Result<u128> {
    let n = space.n;
    let layer = space.layer();
    let elems = layer.elements();
    let a_dual = word::dual(n, a);
    if !word::leq(a, a_dual) {
        return Ok(0);
    }
    let ups = space.up_sets()?;
    let span = space.interval(a, a_dual)?;
    match order {
        Plus3Order::PairsFirst => {
            let ai = layer.ordinal(a);
            // re(a, y) for every y, zero outside the up-set of a
            let mut row = vec![0u64; layer.len()];
            for &j in ups.up(ai) {
                row[j as usize] = space.counter.count(a, elems[j as usize]);
            }
            let total = span
                .par_iter()
                .map(|&bi| {
                    let b_dual = word::dual(n, elems[bi as usize]);
                    ups.up(bi as usize)
                        .iter()
                        .map(|&ci| elems[ci as usize])
                        .filter(|&c| word::leq(c, a_dual))
                        .map(|c| row[layer.ordinal(c & b_dual)] as u128)
                        .sum::<u128>()
                })
                .sum();
            Ok(total)
        }
        Plus3Order::MiddleFirst => {
            let total = span
                .par_iter()
                .map(|&di| {
                    let d = elems[di as usize];
                    let d_dual = word::dual(n, d);
                    span.iter()
                        .map(|&bi| elems[bi as usize])
                        .filter(|&b| word::leq(b, d_dual))
                        .map(|b| {
                            ups.up(layer.ordinal(b))
                                .iter()
                                .map(|&ci| elems[ci as usize])
                                .filter(|&c| word::leq(c, a_dual) && word::leq(d, c))
                                .count() as u128
                        })
                        .sum::<u128>()
                })
                .sum();
            Ok(total)
        }
    }
}

/// Per-class terms of the refined `plus3` sum (excluding the `lambda_n` offset).
pub fn plus3_terms(space: &BaseSpace, order: Plus3Order) -> Result<Vec<u128>> {
    let n = space.n;
    space
        .classes
        .iter()
        .map(|c| {
            let a = c.representative.word();
            if half_weight_cmp(n, a).is_lt() && word::leq(a, word::dual(n, a)) {
                Ok(c.gamma as u128 * plus3_g(space, a, order)?)
            } else {
                Ok(0)
            }
        })
        .collect()
}

/// Sum over every class with `a <= a*`, without splitting off the self-dual ones.
pub fn plus3_unrefined(space: &BaseSpace, order: Plus3Order) -> Result<u128> {
    let n = space.n;
    let terms = space
        .classes
        .iter()
        .filter(|c| {
            let a = c.representative.word();
            word::leq(a, word::dual(n, a))
        })
        .map(|c| Ok(c.gamma as u128 * plus3_g(space, c.representative.word(), order)?))
        .collect::<Result<Vec<_>>>()?;
    exact_sum(terms)
}

pub fn lambda_plus3(space: &BaseSpace) -> Result<LambdaResult> {
    lambda_plus3_ordered(space, Plus3Order::default())
}

pub fn lambda_plus3_ordered(space: &BaseSpace, order: Plus3Order) -> Result<LambdaResult> {
    let start = Instant::now();
    let base = space.base_lambda();
    let value = exact_sum(std::iter::once(base).chain(plus3_terms(space, order)?))?;
    Ok(LambdaResult {
        n_target: space.n + 3,
        method: Method::Plus3,
        value,
        base_n: space.n,
        seconds: start.elapsed().as_secs_f64(),
        base_lambda: Some((base, BaseSource::Brute)),
    })
}

/// The four lower bounds `a|b|c`, `a|b*|c*`, `b|a*|c*`, `c|a*|b*`.
#[inline]
fn four_bounds(n: usize, a: u64, b: u64, c: u64) -> [u64; 4] {
    let (ad, bd, cd) = (word::dual(n, a), word::dual(n, b), word::dual(n, c));
    [a | b | c, a | bd | cd, b | ad | cd, c | ad | bd]
}

/// The four-factor product summed over `h` above all bounds.
#[inline]
fn product_over_tops(layer: &Layer, table: &FullTable, ups: &UpSets, bounds: [u64; 4]) -> u128 {
    let rows = bounds.map(|x| table.row(layer.ordinal(x)));
    let floor = bounds[0] | bounds[1] | bounds[2] | bounds[3];
    ups.up(layer.ordinal(floor))
        .iter()
        .map(|&h| {
            let h = h as usize;
            rows.iter().map(|r| r[h] as u64).product::<u64>() as u128
        })
        .sum()
}

/// Unweighted `plus4` inner sum for one bottom-row element `a`, over all `b, c`.
pub fn plus4_inner(space: &BaseSpace, a: u64) -> Result<u128> {
    let n = space.n;
    let layer = space.layer();
    let elems = layer.elements();
    let table = space.full_table()?;
    let ups = space.up_sets()?;
    // the summand is symmetric in (b, c): count b < c twice
    Ok((0..elems.len())
        .into_par_iter()
        .map(|bi| {
            let b = elems[bi];
            let mut s = product_over_tops(layer, table, ups, four_bounds(n, a, b, b));
            for &c in &elems[bi + 1..] {
                s += 2 * product_over_tops(layer, table, ups, four_bounds(n, a, b, c));
            }
            s
        })
        .sum())
}

/// Per-class terms of the `plus4` sum.
pub fn plus4_terms(space: &BaseSpace) -> Result<Vec<u128>> {
    space
        .classes
        .iter()
        .map(|class| Ok(class.gamma as u128 * plus4_inner(space, class.representative.word())?))
        .collect()
}

pub fn lambda_plus4(space: &BaseSpace) -> Result<LambdaResult> {
    let start = Instant::now();
    let value = exact_sum(plus4_terms(space)?)?;
    Ok(LambdaResult {
        n_target: space.n + 4,
        method: Method::Plus4,
        value,
        base_n: space.n,
        seconds: start.elapsed().as_secs_f64(),
        base_lambda: None,
    })
}

#[inline]
fn product_at(layer: &Layer, table: &FullTable, hi: usize, bounds: [u64; 4]) -> u64 {
    bounds
        .iter()
        .map(|&x| table.at(layer.ordinal(x), hi))
        .product()
}

/// `F(h)`: self-dual maps `B^4 -> D_n` with top value `h` and bottom `h*`.
pub fn plus4c_f(space: &BaseSpace, h: u64) -> Result<u128> {
    let n = space.n;
    let layer = space.layer();
    let elems = layer.elements();
    let table = space.full_table()?;
    let h_dual = word::dual(n, h);
    let hi = layer.ordinal(h);
    let span = space.interval(h_dual, h)?;
    // the product is symmetric in (a, b, c): enumerate a <= b <= c and weight by arrangements
    let total = (0..span.len())
        .into_par_iter()
        .map(|i| {
            let a = elems[span[i] as usize];
            let mut s = 0u128;
            for j in i..span.len() {
                let b = elems[span[j] as usize];
                for k in j..span.len() {
                    let c = elems[span[k] as usize];
                    let arrangements = match (i == j, j == k) {
                        (true, true) => 1,
                        (false, false) => 6,
                        _ => 3,
                    };
                    s += arrangements
                        * product_at(layer, table, hi, four_bounds(n, a, b, c)) as u128;
                }
            }
            s
        })
        .sum();
    Ok(total)
}

/// `F(h)` with `a, b, c` over all of `D_n`; out-of-range terms vanish.
pub fn plus4c_f_widened(space: &BaseSpace, h: u64) -> Result<u128> {
    let n = space.n;
    let layer = space.layer();
    let table = space.full_table()?;
    let hi = layer.ordinal(h);
    let mut s = 0u128;
    for &a in layer.elements() {
        for &b in layer.elements() {
            for &c in layer.elements() {
                let bounds = four_bounds(n, a, b, c);
                if bounds.iter().all(|&x| word::leq(x, h)) {
                    s += product_at(layer, table, hi, bounds) as u128;
                }
            }
        }
    }
    Ok(s)
}

/// Per-class terms of the `plus4c` sum (excluding the `lambda_n` offset).
pub fn plus4c_terms(space: &BaseSpace) -> Result<Vec<u128>> {
    let n = space.n;
    space
        .classes
        .iter()
        .map(|c| {
            let h = c.representative.word();
            if half_weight_cmp(n, h).is_gt() && word::leq(word::dual(n, h), h) {
                Ok(c.gamma as u128 * plus4c_f(space, h)?)
            } else {
                Ok(0)
            }
        })
        .collect()
}

pub fn lambda_plus4c(space: &BaseSpace) -> Result<LambdaResult> {
    let start = Instant::now();
    let base = space.base_lambda();
    let value = exact_sum(std::iter::once(base).chain(plus4c_terms(space)?))?;
    Ok(LambdaResult {
        n_target: space.n + 4,
        method: Method::Plus4c,
        value,
        base_n: space.n,
        seconds: start.elapsed().as_secs_f64(),
        base_lambda: Some((base, BaseSource::Brute)),
    })
}

/// Rough peak memory of a method on base layer `n`.
pub fn estimate_bytes(method: Method, base_n: usize) -> u128 {
    let layer = budget::layer_bytes(base_n);
    match method {
        Method::Brute => layer,
        Method::Plus2 => {
            layer.saturating_add(budget::DEDEKIND.get(base_n).copied().unwrap_or(u128::MAX))
        }
        Method::Plus3 => layer.saturating_add(budget::up_sets_bytes(base_n)),
        Method::Plus4 | Method::Plus4c => layer
            .saturating_add(budget::up_sets_bytes(base_n))
            .saturating_add(budget::full_table_bytes(base_n)),
    }
}

/// Runs one method for `lambda_{n_target}` without verification.
pub fn compute_lambda(n_target: usize, method: Method, budget: &Budget) -> Result<LambdaResult> {
    let Some(base_n) = n_target.checked_sub(method.offset()) else {
        return Err(Error::Unsupported {
            method,
            n_target,
            reason: format!("needs n_target >= {}", method.offset()),
        });
    };
    let what = format!("{method} for lambda_{n_target} on D_{base_n}");
    budget.check(what.clone(), estimate_bytes(method, base_n))?;
    if base_n > method.max_base() {
        return Err(Error::Budget {
            what,
            needed_mb: (estimate_bytes(method, base_n) >> 20).min(u64::MAX as u128) as u64,
            budget_mb: budget.bytes() >> 20,
        });
    }
    let start = Instant::now();
    let mut result = if method == Method::Brute {
        let stack = LayerStack::generate_within(base_n, budget)?;
        LambdaResult {
            n_target,
            method,
            value: count_self_dual(stack.top()),
            base_n,
            seconds: 0.0,
            base_lambda: None,
        }
    } else {
        let space = BaseSpace::prepare(base_n, budget)?;
        match method {
            Method::Plus2 => lambda_plus2(&space)?,
            Method::Plus3 => lambda_plus3(&space)?,
            Method::Plus4 => lambda_plus4(&space)?,
            Method::Plus4c => lambda_plus4c(&space)?,
            Method::Brute => unreachable!(),
        }
    };
    result.seconds = start.elapsed().as_secs_f64();
    Ok(result)
}

/// Computes `lambda_{n_target}` and, when `verify` is set, rejects any
/// disagreement with [`LAMBDA_TABLE`].
pub fn lambda_any(
    n_target: usize,
    method: Method,
    budget: &Budget,
    verify: bool,
) -> Result<LambdaResult> {
    let result = compute_lambda(n_target, method, budget)?;
    if verify {
        result.verify()?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> BaseSpace {
        BaseSpace::prepare(n, &Budget::unlimited()).unwrap()
    }

    #[test]
    fn plus2_small() {
        assert_eq!(lambda_plus2(&space(0)).unwrap().value, 2);
        assert_eq!(lambda_plus2(&space(2)).unwrap().value, 12);
    }

    #[test]
    fn plus3_small() {
        assert_eq!(lambda_plus3(&space(0)).unwrap().value, 4);
        assert_eq!(lambda_plus3(&space(2)).unwrap().value, 81);
    }

    #[test]
    fn plus4_small() {
        assert_eq!(lambda_plus4(&space(0)).unwrap().value, 12);
        assert_eq!(lambda_plus4(&space(2)).unwrap().value, 2646);
    }

    #[test]
    fn plus4c_small() {
        assert_eq!(lambda_plus4c(&space(1)).unwrap().value, 81);
        assert_eq!(lambda_plus4c(&space(0)).unwrap().value, 12);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("plus5".parse::<Method>().is_err());
    }

    #[test]
    fn record_format() {
        let r = LambdaResult {
            n_target: 9,
            method: Method::Plus4,
            value: LAMBDA_TABLE[9],
            base_n: 5,
            seconds: 1.5,
            base_lambda: None,
        };
        assert_eq!(
            r.record(),
            "lambda n=9 method=plus4 value=423295099074735261880 base_n=5 seconds=1.500"
        );
        assert!(r.verify().is_ok());
        let bad = LambdaResult { value: 1, ..r };
        assert!(matches!(bad.verify(), Err(Error::Verification { .. })));
    }

    #[test]
    fn unsupported_and_refused() {
        assert!(matches!(
            compute_lambda(1, Method::Plus2, &Budget::unlimited()),
            Err(Error::Unsupported { .. })
        ));
        assert!(matches!(
            compute_lambda(9, Method::Plus2, &Budget::default()),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            compute_lambda(9, Method::Plus3, &Budget::unlimited()),
            Err(Error::Budget { .. })
        ));
        assert!(matches!(
            compute_lambda(6, Method::Brute, &Budget::from_mb(1)),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn overflow_is_refused() {
        assert_eq!(exact_sum([1, 2, 3]).unwrap(), 6);
        assert!(matches!(exact_sum([u128::MAX, 1]), Err(Error::Overflow)));
    }
}
