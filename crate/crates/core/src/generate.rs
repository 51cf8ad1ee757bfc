//! Seeded instance generators. Output is a pure function of the seed and
//! parameters.

use std::collections::BTreeSet;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cw_ingest::ComplexSpec;
use crate::error::{Error, Result};
use crate::morse::MorseFunction;
use crate::poset::Poset;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexParams {
    /// At least 1.
    pub n_vertices: usize,
    /// Largest simplex dimension; clamped to `n_vertices - 1`.
    pub dimension: usize,
    /// In `[0, 1]`: the number of random simplices drawn is
    /// `round(density * n_vertices)`.
    pub density: f64,
}

/// A random simplicial complex on vertices `1..=n`: random simplices of
/// dimension `1..=dimension`, plus every vertex not covered by one.
pub fn gen_complex(seed: u64, params: ComplexParams) -> ComplexSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.n_vertices.max(1);
    let top = params.dimension.min(n - 1);
    let density = params.density.clamp(0.0, 1.0);
    let draws = if top == 0 {
        0
    } else {
        (density * n as f64).round() as usize
    };

    let mut simplices: BTreeSet<Vec<usize>> = BTreeSet::new();
    for _ in 0..draws {
        let d = rng.gen_range(1..=top);
        let mut s = index::sample(&mut rng, n, d + 1).into_vec();
        s.sort_unstable();
        simplices.insert(s);
    }
    for v in 0..n {
        if !simplices.iter().any(|s| s.contains(&v)) {
            simplices.insert(vec![v]);
        }
    }
    let maximal: Vec<&Vec<usize>> = simplices
        .iter()
        .filter(|s| {
            !simplices
                .iter()
                .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
        })
        .collect();
    ComplexSpec::Simplicial {
        maximal_simplices: maximal
            .iter()
            .map(|s| s.iter().map(|v| (v + 1).to_string()).collect())
            .collect(),
    }
}

/// The Hasse diagram with matched covers reversed; `None` if it has a cycle.
fn modified_order(poset: &Poset, partner: &[Option<usize>], rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let n = poset.len();
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for (a, b) in poset.cover_pairs() {
        let (from, to) = if partner[a] == Some(b) { (b, a) } else { (a, b) };
        succ[from].push(to);
        indeg[to] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let x = ready.swap_remove(rng.gen_range(0..ready.len()));
        order.push(x);
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.push(y);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// A discrete Morse function whose ordinary elements are exactly the matched
/// ones. `matching` lists cover pairs `(a, b)`, `a ≺ b`; it must be a
/// matching and acyclic (reversing its pairs in the Hasse diagram leaves no
/// directed cycle). Values increase along every unmatched cover and are
/// non-increasing along matched ones; incomparable elements may tie.
pub fn morse_from_matching(seed: u64, poset: &Poset, matching: &[(usize, usize)]) -> Result<MorseFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let partner = partners(poset, matching)?;
    let order = modified_order(poset, &partner, &mut rng)
        .ok_or_else(|| Error::MalformedSpec("matching is not acyclic".into()))?;
    Ok(assign_values(poset, &partner, &order, &mut rng))
}

fn partners(poset: &Poset, matching: &[(usize, usize)]) -> Result<Vec<Option<usize>>> {
    let mut partner = vec![None; poset.len()];
    for &(a, b) in matching {
        if !poset.is_cover(a, b) {
            return Err(Error::NotACover(poset.id(a).into(), poset.id(b).into()));
        }
        for x in [a, b] {
            if partner[x].is_some() {
                return Err(Error::MalformedSpec(format!("`{}` is matched twice", poset.id(x))));
            }
        }
        partner[a] = Some(b);
        partner[b] = Some(a);
    }
    Ok(partner)
}

fn assign_values(poset: &Poset, partner: &[Option<usize>], order: &[usize], rng: &mut ChaCha8Rng) -> MorseFunction {
    let n = poset.len();
    let mut v: Vec<i64> = vec![0; n];
    let mut running = 0i64;
    for &x in order {
        let mut lo = 0i64;
        for &l in poset.lower_covers(x) {
            // unmatched lower cover: strictly above it
            if partner[x] != Some(l) {
                lo = lo.max(v[l] + 1);
            }
        }
        if let Some(p) = partner[x] {
            if poset.is_cover(x, p) {
                // x is the lower half of its pair: at least the upper half's value
                lo = lo.max(v[p] + i64::from(rng.gen_bool(0.5)));
            }
        }
        let jitter = rng.gen_range(0..=running + 1);
        v[x] = lo.max(jitter);
        running = running.max(v[x]);
    }
    let denom = rational::from_int(rng.gen_range(1..=3));
    MorseFunction::new(
        v.into_iter()
            .map(|x| rational::from_int(x) / &denom)
            .collect::<Vec<Rational>>(),
    )
}

/// A random acyclic matching (each cover kept with probability one half if
/// it stays a matching and stays acyclic), turned into values by
/// [`morse_from_matching`]'s rule.
pub fn gen_morse(seed: u64, poset: &Poset) -> MorseFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covers: Vec<(usize, usize)> = poset.cover_pairs().collect();
    covers.shuffle(&mut rng);
    let mut partner = vec![None; poset.len()];
    for (a, b) in covers {
        if partner[a].is_some() || partner[b].is_some() || !rng.gen_bool(0.5) {
            continue;
        }
        partner[a] = Some(b);
        partner[b] = Some(a);
        if modified_order(poset, &partner, &mut rng.clone()).is_none() {
            partner[a] = None;
            partner[b] = None;
        }
    }
    let order = modified_order(poset, &partner, &mut rng).expect("matching kept acyclic");
    assign_values(poset, &partner, &order, &mut rng)
}
