//! Invariant suites runnable from the command line.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::{Budget, DEDEKIND};
use crate::counting::{
    exact_sum, lambda_plus3_ordered, plus2_terms, plus2_unfolded, plus3_unrefined, plus4c_f,
    plus4c_f_widened, BaseSpace, Plus3Order, LAMBDA_TABLE,
};
use crate::error::Result;
use crate::intervals::{re_scan_words, IntervalCounter};
use crate::layer::{generate_layer, LayerStack};
use crate::mbf::{is_monotone, word, Mbf};
use crate::orbits::{classify, SymmetricGroup};

/// Number of random `D_5` pairs compared in the interval suite.
pub const RANDOM_D5_PAIRS: usize = 10_000;

const SEED: u64 = 0x5e1f_d0a1;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn line(&self) -> String {
        format!(
            "{} {} ({:.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn run(name: &'static str, f: impl FnOnce() -> Outcome) -> SuiteReport {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    SuiteReport {
        name,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn dual_identities(max_n: usize) -> Outcome {
    let top = max_n.min(4);
    let mut pairs = 0usize;
    for n in 0..=top {
        let layer = generate_layer(n).map_err(|e| e.to_string())?;
        for x in layer.iter() {
            ensure(x.dual().dual() == x, || format!("x** != x for {x}"))?;
            for y in layer.iter() {
                pairs += 1;
                let le = lift(x.leq(&y))?;
                if le {
                    ensure(lift(y.dual().leq(&x.dual()))?, || {
                        format!("order not reversed for {x} <= {y}")
                    })?;
                }
                let join = lift(x.join(&y))?;
                let meet = lift(x.meet(&y))?;
                ensure(join.dual() == lift(x.dual().meet(&y.dual()))?, || {
                    format!("(x|y)* for {x},{y}")
                })?;
                ensure(meet.dual() == lift(x.dual().join(&y.dual()))?, || {
                    format!("(x&y)* for {x},{y}")
                })?;
                ensure(
                    is_monotone(n, join.bits()) && is_monotone(n, meet.bits()),
                    || format!("join/meet not monotone for {x},{y}"),
                )?;
            }
        }
    }
    Ok(format!("D_0..D_{top}, {pairs} pairs"))
}

fn self_dual_weight(max_n: usize) -> Outcome {
    let top = max_n.min(4);
    let mut counts = Vec::new();
    for (n, &lambda) in LAMBDA_TABLE.iter().enumerate().take(top + 1) {
        let layer = generate_layer(n).map_err(|e| e.to_string())?;
        let mut count = 0u128;
        for x in layer.iter() {
            if x.is_self_dual() {
                count += 1;
                ensure(2 * x.weight() as usize == 1 << n, || {
                    format!("self-dual {x} has weight {}", x.weight())
                })?;
            }
            if lift(x.leq(&x.dual()))? {
                ensure(2 * x.weight() as usize <= 1 << n, || {
                    format!("{x} <= x* but heavy")
                })?;
            }
        }
        ensure(count == lambda, || format!("lambda_{n}: found {count}"))?;
        counts.push(count);
    }
    Ok(format!("self-dual counts {counts:?}"))
}

fn generation(max_n: usize) -> Outcome {
    let top = max_n.min(4);
    for n in 0..=top {
        let layer = generate_layer(n).map_err(|e| e.to_string())?;
        let filtered: Vec<u64> = (0u64..1 << (1 << n))
            .filter(|&v| is_monotone(n, &[v, 0, 0, 0]))
            .collect();
        ensure(layer.elements() == filtered.as_slice(), || {
            format!("D_{n} differs from filter")
        })?;
    }
    let pair_top = max_n.min(5);
    let stack = lift(LayerStack::generate(pair_top))?;
    for n in 0..pair_top {
        let lower = stack.layer(n);
        let pairs = lower
            .elements()
            .iter()
            .map(|&x| {
                lower
                    .elements()
                    .iter()
                    .filter(|&&y| word::leq(x, y))
                    .count()
            })
            .sum::<usize>();
        ensure(pairs == stack.layer(n + 1).len(), || {
            format!("pairs of D_{n} != d_{}", n + 1)
        })?;
    }
    for n in 0..=pair_top {
        let layer = stack.layer(n);
        ensure(
            layer
                .elements()
                .iter()
                .all(|&x| layer.index_of(word::dual(n, x)).is_some()),
            || format!("D_{n} not closed under duality"),
        )?;
    }
    Ok(format!(
        "filter agreement to n={top}, pair counts to n={pair_top}"
    ))
}

fn equivariance(max_n: usize) -> Outcome {
    let top = max_n.min(3);
    for n in 0..=top {
        let layer = generate_layer(n).map_err(|e| e.to_string())?;
        let group = lift(SymmetricGroup::new(n))?;
        for p in group.perms() {
            for g in layer.iter() {
                ensure(
                    lift(p.apply(&g.dual()))? == lift(p.apply(&g))?.dual(),
                    || format!("pi(g*) != pi(g)* for {g}"),
                )?;
            }
            for q in group.perms() {
                let pq = lift(p.compose(q))?;
                for g in layer.iter() {
                    ensure(
                        lift(pq.apply(&g))? == lift(p.apply(&lift(q.apply(&g))?))?,
                        || format!("action law fails on {g}"),
                    )?;
                }
            }
        }
    }
    let sd_top = max_n.min(4);
    for n in 0..=sd_top {
        let layer = generate_layer(n).map_err(|e| e.to_string())?;
        let group = lift(SymmetricGroup::new(n))?;
        for x in layer.iter().filter(Mbf::is_self_dual) {
            for y in lift(group.orbit(&x))? {
                ensure(y.is_self_dual(), || {
                    format!("{y} in the orbit of {x} is not self-dual")
                })?;
            }
        }
    }
    Ok(format!(
        "S_n x D_n to n={top}, self-dual orbits to n={sd_top}"
    ))
}

fn orbit_sums(max_n: usize) -> Outcome {
    let top = max_n.min(5);
    let stack = lift(LayerStack::generate(top))?;
    let mut counts = Vec::new();
    for (n, &d) in DEDEKIND.iter().enumerate().take(top + 1) {
        let layer = stack.layer(n);
        let classes = lift(classify(layer))?;
        let total: u128 = classes.iter().map(|c| c.gamma as u128).sum();
        ensure(total == d, || format!("gammas of D_{n} sum to {total}"))?;
        if n <= 4 {
            let group = lift(SymmetricGroup::new(n))?;
            for c in &classes {
                for p in group.perms() {
                    let moved = lift(p.apply(&c.representative))?;
                    ensure(lift(group.canonical(&moved))? == c.representative, || {
                        format!("canonical form of {moved} is not {}", c.representative)
                    })?;
                }
            }
        }
        counts.push(classes.len());
    }
    Ok(format!("class counts {counts:?}"))
}

fn interval_oracle(max_n: usize) -> Outcome {
    let top = max_n.min(3);
    let mut compared = 0usize;
    for n in 0..=top {
        let counter = lift(IntervalCounter::new(n))?;
        let layer = generate_layer(n).map_err(|e| e.to_string())?;
        for &x in layer.elements() {
            for &y in layer.elements() {
                let fast = counter.count(x, y);
                ensure(fast == re_scan_words(&layer, x, y), || {
                    format!("re({x:x},{y:x}) differs")
                })?;
                ensure(
                    fast == counter.count(word::dual(n, y), word::dual(n, x)),
                    || format!("duality symmetry fails on ({x:x},{y:x})"),
                )?;
                compared += 1;
            }
        }
    }
    if max_n >= 5 {
        let counter = lift(IntervalCounter::new(5))?;
        let layer = generate_layer(5).map_err(|e| e.to_string())?;
        let e = layer.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for i in 0..RANDOM_D5_PAIRS {
            let x = e[rng.gen_range(0..e.len())];
            let y = e[rng.gen_range(0..e.len())];
            // half of the pairs are forced comparable
            let (x, y) = if i % 2 == 0 { (x & y, y) } else { (x, y) };
            ensure(counter.count(x, y) == re_scan_words(&layer, x, y), || {
                format!("re({x:x},{y:x}) differs on D_5")
            })?;
            compared += 1;
        }
    }
    Ok(format!("{compared} pairs"))
}

fn plus2_folding(max_n: usize) -> Outcome {
    let top = max_n.min(4);
    for n in 0..=top {
        let space = lift(BaseSpace::prepare(n, &Budget::unlimited()))?;
        let folded = lift(exact_sum(plus2_terms(&space)))?;
        let unfolded = lift(plus2_unfolded(&space))?;
        ensure(folded == unfolded && folded == LAMBDA_TABLE[n + 2], || {
            format!("base {n}: folded {folded}, unfolded {unfolded}")
        })?;
    }
    Ok(format!("bases 0..={top}"))
}

fn plus3_refinement(max_n: usize) -> Outcome {
    let top = max_n.min(3);
    for n in 0..=top {
        let space = lift(BaseSpace::prepare(n, &Budget::unlimited()))?;
        let mut values = Vec::new();
        for order in [Plus3Order::PairsFirst, Plus3Order::MiddleFirst] {
            values.push(lift(plus3_unrefined(&space, order))?);
            values.push(lift(lambda_plus3_ordered(&space, order))?.value);
        }
        ensure(values.iter().all(|&v| v == LAMBDA_TABLE[n + 3]), || {
            format!("base {n}: unrefined/refined x orders gave {values:?}")
        })?;
    }
    Ok(format!("bases 0..={top}, both loop orders"))
}

fn plus4c_widening(max_n: usize) -> Outcome {
    let top = max_n.min(2);
    let mut checked = 0;
    for n in 0..=top {
        let space = lift(BaseSpace::prepare(n, &Budget::unlimited()))?;
        for &h in space.layer().elements() {
            if !word::leq(word::dual(n, h), h) {
                continue;
            }
            let narrow = lift(plus4c_f(&space, h))?;
            let wide = lift(plus4c_f_widened(&space, h))?;
            ensure(narrow == wide, || {
                format!("F({h:x}) on D_{n}: {narrow} vs {wide}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} tops h >= h*"))
}

fn shard_order(max_n: usize) -> Outcome {
    let n = max_n.min(4);
    let space = lift(BaseSpace::prepare(n, &Budget::unlimited()))?;
    let terms = plus2_terms(&space);
    let reference = lift(exact_sum(terms.iter().copied()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..32 {
        let mut shuffled = terms.clone();
        shuffled.shuffle(&mut rng);
        let chunk = rng.gen_range(1..=shuffled.len().max(1));
        let partials = shuffled
            .chunks(chunk)
            .map(|c| exact_sum(c.iter().copied()))
            .collect::<Result<Vec<_>>>();
        let merged = lift(exact_sum(lift(partials)?))?;
        ensure(merged == reference, || {
            format!("shuffled merge gave {merged}")
        })?;
    }
    Ok(format!("32 shuffles of {} class terms", terms.len()))
}

/// Runs every suite, scaling exhaustive ranges by `max_n`.
pub fn selfcheck(max_n: usize) -> Vec<SuiteReport> {
    vec![
        run("dual-identities", || dual_identities(max_n)),
        run("self-dual-weight", || self_dual_weight(max_n)),
        run("generation", || generation(max_n)),
        run("equivariance", || equivariance(max_n)),
        run("orbit-sums", || orbit_sums(max_n)),
        run("interval-oracle", || interval_oracle(max_n)),
        run("plus2-folding", || plus2_folding(max_n)),
        run("plus3-refinement", || plus3_refinement(max_n)),
        run("plus4c-widening", || plus4c_widening(max_n)),
        run("shard-order", || shard_order(max_n)),
    ]
}
