//! Combinatorial Banchoff indices: signed chain counts, the three chain-sum
//! identities on downward Eulerian posets, the predicted index of each
//! element and the per-poset verification report.

use serde::Serialize;

use crate::error::{Error, Hypothesis, Result};
use crate::morse::{classify, normalize, validate_morse, Classification, MorseFunction};
use crate::poset::{
    compute_parity_rank, euler_characteristic, is_downward_eulerian, is_two_wide, order_complex, signed_chain_sum,
    ParityRank, Poset,
};

/// A signed chain sum alongside the value the identity predicts for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSum {
    pub sum: i64,
    pub expected: i64,
}

impl ChainSum {
    pub fn holds(&self) -> bool {
        self.sum == self.expected
    }
}

fn require_cover(poset: &Poset, a: usize, b: usize) -> Result<()> {
    if poset.is_cover(a, b) {
        Ok(())
    } else {
        Err(Error::NotACover(poset.id(a).to_string(), poset.id(b).to_string()))
    }
}

/// `Σ (-1)^|C|` over chains of `P_{≤b}` containing `b`; expected `(-1)^μ(b)`.
pub fn chain_sum_top(poset: &Poset, mu: &ParityRank, b: usize) -> ChainSum {
    let sum = signed_chain_sum(poset, &poset.closed_down_set(b), |desc| desc[0] == b);
    ChainSum {
        sum,
        expected: mu.sign(b),
    }
}

/// The same sum through the memoized recursion `S(b) = 1 - Σ_{x<b} S(x)`,
/// which strips `b` from each chain it tops.
pub fn chain_sum_top_recursive(poset: &Poset, b: usize) -> i64 {
    let mut memo = vec![None; poset.len()];
    top_sum_rec(poset, b, &mut memo)
}

fn top_sum_rec(poset: &Poset, b: usize, memo: &mut Vec<Option<i64>>) -> i64 {
    if let Some(v) = memo[b] {
        return v;
    }
    let below: i64 = poset
        .strict_down_set(b)
        .into_iter()
        .map(|x| top_sum_rec(poset, x, memo))
        .sum();
    let v = 1 - below;
    memo[b] = Some(v);
    v
}

/// `Σ (-1)^|C|` over chains of `P_{≤b}` containing `b` but not `a`, for
/// `a ≺ b`; expected 0.
pub fn chain_sum_excluding(poset: &Poset, a: usize, b: usize) -> Result<ChainSum> {
    require_cover(poset, a, b)?;
    let sum = signed_chain_sum(poset, &poset.closed_down_set(b), |desc| {
        desc[0] == b && !desc.contains(&a)
    });
    Ok(ChainSum { sum, expected: 0 })
}

/// `Σ (-1)^|C|` over chains of `P_{≤b}` containing `a`, for `a ≺ b`;
/// expected 0.
pub fn chain_sum_lower(poset: &Poset, a: usize, b: usize) -> Result<ChainSum> {
    require_cover(poset, a, b)?;
    let sum = signed_chain_sum(poset, &poset.closed_down_set(b), |desc| desc.contains(&a));
    Ok(ChainSum { sum, expected: 0 })
}

/// First pair of comparable elements with equal values.
pub fn comparable_tie(poset: &Poset, g: &MorseFunction) -> Option<(usize, usize)> {
    poset
        .all()
        .into_iter()
        .flat_map(|a| poset.strict_up_set(a).into_iter().map(move |b| (a, b)))
        .find(|&(a, b)| g.get(a) == g.get(b))
}

/// `Σ (-1)^|C|` over chains `C ∋ b` on which `g` attains its maximum at `b`.
pub fn combinatorial_index(poset: &Poset, g: &MorseFunction, b: usize) -> Result<i64> {
    if let Some((x, y)) = comparable_tie(poset, g) {
        return Err(Error::NonGeneralFunction(
            poset.id(x).to_string(),
            poset.id(y).to_string(),
            crate::rational::format(g.get(x)),
        ));
    }
    Ok(index_of_general(poset, g, b))
}

fn index_of_general(poset: &Poset, g: &MorseFunction, b: usize) -> i64 {
    let star: Vec<usize> = poset
        .all()
        .into_iter()
        .filter(|&x| x == b || (poset.comparable(x, b) && g.get(x) < g.get(b)))
        .collect();
    signed_chain_sum(poset, &star, |desc| desc.contains(&b))
}

/// `(-1)^μ(b)` for critical `b`, 0 for ordinary `b`.
pub fn predicted_index(classification: &Classification, mu: &ParityRank, b: usize) -> i64 {
    if classification.is_critical(b) {
        mu.sign(b)
    } else {
        0
    }
}

/// Checks the three structural hypotheses and returns the parity rank.
pub fn check_hypotheses(poset: &Poset) -> Result<ParityRank> {
    if !is_two_wide(poset).holds() {
        return Err(Error::HypothesisViolated(Hypothesis::TwoWide));
    }
    let mu = compute_parity_rank(poset).map_err(|_| Error::HypothesisViolated(Hypothesis::ParityGraded))?;
    if !is_downward_eulerian(poset, &mu).holds() {
        return Err(Error::HypothesisViolated(Hypothesis::DownwardEulerian));
    }
    Ok(mu)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementIndex {
    pub element: String,
    pub computed: i64,
    pub predicted: i64,
    pub critical: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexTotals {
    pub sum: i64,
    pub chi: i64,
    pub n0: usize,
    pub n1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub elements: Vec<ElementIndex>,
    pub totals: IndexTotals,
}

/// Result of [`verify_representation`], keeping the normalized function
/// so callers can feed it to the geometric side.
#[derive(Debug, Clone)]
pub struct Verified {
    pub report: IndexReport,
    pub normalized: MorseFunction,
    pub classification: Classification,
    pub parity: ParityRank,
}

/// Normalizes `f`, computes every combinatorial index and checks it against
/// the predicted index, then checks `Σ index = χ(Δ(P)) = N₀ - N₁`.
pub fn verify_representation(poset: &Poset, f: &MorseFunction) -> Result<Verified> {
    let mu = check_hypotheses(poset)?;
    if !validate_morse(poset, f)?.is_valid() {
        return Err(Error::HypothesisViolated(Hypothesis::DiscreteMorse));
    }
    let classification = classify(poset, f)?;
    let g = normalize(poset, f)?;

    let mut elements = Vec::with_capacity(poset.len());
    for b in 0..poset.len() {
        let computed = combinatorial_index(poset, &g, b)?;
        let predicted = predicted_index(&classification, &mu, b);
        if computed != predicted {
            return Err(Error::Mismatch {
                element: poset.id(b).to_string(),
                computed,
                predicted,
            });
        }
        elements.push(ElementIndex {
            element: poset.id(b).to_string(),
            computed,
            predicted,
            critical: classification.is_critical(b),
        });
    }
    let counts = critical_counts(&classification, &mu);
    let chi = euler_characteristic(&order_complex(poset));
    let sum = elements.iter().map(|e| e.computed).sum();
    if sum != chi {
        return Err(Error::IdentityViolated {
            identity: "sum of indices = χ",
            lhs: sum,
            rhs: chi,
        });
    }
    if counts.0 as i64 - counts.1 as i64 != chi {
        return Err(Error::IdentityViolated {
            identity: "N0 - N1 = χ",
            lhs: counts.0 as i64 - counts.1 as i64,
            rhs: chi,
        });
    }
    Ok(Verified {
        report: IndexReport {
            elements,
            totals: IndexTotals {
                sum,
                chi,
                n0: counts.0,
                n1: counts.1,
            },
        },
        normalized: g,
        classification,
        parity: mu,
    })
}

fn critical_counts(classification: &Classification, mu: &ParityRank) -> (usize, usize) {
    classification
        .critical_set()
        .into_iter()
        .fold((0, 0), |(n0, n1), b| match mu.get(b) {
            0 => (n0 + 1, n1),
            _ => (n0, n1 + 1),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MorseCounts {
    pub n0: usize,
    pub n1: usize,
    pub chi: i64,
}

/// Critical elements counted by parity; checks `N₀ - N₁ = χ(Δ(P))`.
pub fn morse_counts(poset: &Poset, f: &MorseFunction, mu: &ParityRank) -> Result<MorseCounts> {
    let checked = check_hypotheses(poset)?;
    debug_assert_eq!(&checked, mu);
    let classification = classify(poset, f)?;
    let (n0, n1) = critical_counts(&classification, mu);
    let chi = euler_characteristic(&order_complex(poset));
    if n0 as i64 - n1 as i64 != chi {
        return Err(Error::IdentityViolated {
            identity: "N0 - N1 = χ",
            lhs: n0 as i64 - n1 as i64,
            rhs: chi,
        });
    }
    Ok(MorseCounts { n0, n1, chi })
}
