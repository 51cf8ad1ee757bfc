//! Face posets of simplicial and cell complexes.
//!
//! Simplicial faces are named by their sorted vertex ids joined with `,`.
//! Cellular descriptions only carry boundary lists, so the three poset-level
//! properties are reported for them; regularity itself cannot be checked.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::chain_index::check_hypotheses;
use crate::error::{Error, Result};
use crate::morse::{classify, MorseFunction};
use crate::poset::{
    check_properties, compute_rank_function, euler_characteristic, order_complex, sign, ParityRank, Poset,
    PropertyReport, RankFunction,
};
use crate::rational;

/// Simplices above this dimension are refused (their face count is `2^(d+1)`).
pub const MAX_SIMPLEX_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplexSpec {
    Simplicial { maximal_simplices: Vec<Vec<String>> },
    Cellular { cells: Vec<CellSpec> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSpec {
    pub id: String,
    pub dim: usize,
    #[serde(default)]
    pub boundary: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FacePoset {
    pub poset: Poset,
    pub rank: RankFunction,
    pub parity: ParityRank,
}

impl FacePoset {
    fn from_poset(poset: Poset) -> Result<Self> {
        let rank = compute_rank_function(&poset)
            .map_err(|c| Error::RankConflict(poset.id(c.element).to_string(), "lower covers disagree".into()))?;
        let parity = rank.parity();
        Ok(FacePoset { poset, rank, parity })
    }
}

pub fn face_id<S: AsRef<str>>(vertices: &[S]) -> String {
    vertices.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(",")
}

pub fn face_poset_simplicial(spec: &ComplexSpec) -> Result<FacePoset> {
    let ComplexSpec::Simplicial { maximal_simplices } = spec else {
        return Err(Error::MalformedSpec("expected a simplicial complex".into()));
    };
    let mut faces: BTreeSet<Vec<&str>> = BTreeSet::new();
    for simplex in maximal_simplices {
        let mut vs: Vec<&str> = simplex.iter().map(String::as_str).collect();
        vs.sort_unstable();
        if vs.is_empty() {
            return Err(Error::MalformedSpec("empty simplex".into()));
        }
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSpec(format!(
                "repeated vertex in simplex [{}]",
                face_id(&vs)
            )));
        }
        if let Some(v) = vs.iter().find(|v| v.contains(',') || v.is_empty()) {
            return Err(Error::MalformedSpec(format!(
                "vertex id `{v}` is empty or contains ','"
            )));
        }
        if vs.len() > MAX_SIMPLEX_DIM + 1 {
            return Err(Error::MalformedSpec(format!(
                "simplex of dimension {} is too large",
                vs.len() - 1
            )));
        }
        for mask in 1u32..(1 << vs.len()) {
            faces.insert(
                vs.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| *v)
                    .collect(),
            );
        }
    }
    let elements: Vec<String> = faces.iter().map(|f| face_id(f)).collect();
    let mut covers = Vec::new();
    for f in faces.iter().filter(|f| f.len() > 1) {
        for skip in 0..f.len() {
            let facet: Vec<&str> = f
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, v)| *v)
                .collect();
            covers.push((face_id(&facet), face_id(f)));
        }
    }
    FacePoset::from_poset(Poset::new(&elements, &covers)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct CellularReport {
    pub properties: PropertyReport,
    /// Always false: boundary lists cannot certify a regular CW complex.
    pub verified_regular_cw: bool,
}

pub fn face_poset_cellular(spec: &ComplexSpec) -> Result<(FacePoset, CellularReport)> {
    let ComplexSpec::Cellular { cells } = spec else {
        return Err(Error::MalformedSpec("expected a cellular complex".into()));
    };
    let mut dims: HashMap<&str, usize> = HashMap::new();
    for c in cells {
        if dims.insert(c.id.as_str(), c.dim).is_some() {
            return Err(Error::MalformedSpec(format!("cell `{}` declared twice", c.id)));
        }
    }
    let mut relation = Vec::new();
    for c in cells {
        for b in &c.boundary {
            let d = *dims
                .get(b.as_str())
                .ok_or_else(|| Error::MalformedSpec(format!("cell `{}` has undeclared boundary cell `{b}`", c.id)))?;
            if d >= c.dim {
                return Err(Error::MalformedSpec(format!(
                    "boundary cell `{b}` of `{}` has dimension {d}, not below {}",
                    c.id, c.dim
                )));
            }
            relation.push((b.as_str(), c.id.as_str()));
        }
    }
    let elements: Vec<&str> = cells.iter().map(|c| c.id.as_str()).collect();
    let poset = Poset::from_relation(&elements, &relation)?;
    let face = FacePoset::from_poset(poset)?;
    for (i, id) in face.poset.ids().iter().enumerate() {
        let declared = dims[id.as_str()];
        if face.rank.get(i) != declared {
            return Err(Error::RankConflict(
                id.clone(),
                format!(
                    "declared dimension {declared} but its position in the poset gives rank {}",
                    face.rank.get(i)
                ),
            ));
        }
    }
    let properties = check_properties(&face.poset);
    Ok((
        face,
        CellularReport {
            properties,
            verified_regular_cw: false,
        },
    ))
}

/// Either kind of description.
pub fn face_poset(spec: &ComplexSpec) -> Result<FacePoset> {
    match spec {
        ComplexSpec::Simplicial { .. } => face_poset_simplicial(spec),
        ComplexSpec::Cellular { .. } => face_poset_cellular(spec).map(|(f, _)| f),
    }
}

/// The function assigning each cell its dimension.
pub fn dimension_morse(rank: &RankFunction) -> MorseFunction {
    MorseFunction::new(rank.values().iter().map(|&r| rational::from_int(r as i64)).collect())
}

/// `Σ (-1)^dim` over the cells themselves.
pub fn cell_euler_characteristic(rank: &RankFunction) -> i64 {
    rank.values().iter().map(|&r| sign(r)).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorseInequalityReport {
    /// Critical cells per dimension, `M_0 … M_r`.
    pub counts: Vec<usize>,
    pub alternating_sum: i64,
    pub chi: i64,
}

/// Counts critical cells by dimension and checks `Σ (-1)^i M_i = χ`.
pub fn morse_inequality_report(poset: &Poset, rank: &RankFunction, f: &MorseFunction) -> Result<MorseInequalityReport> {
    check_hypotheses(poset)?;
    let classification = classify(poset, f)?;
    let mut counts = vec![0; rank.max_rank() + 1];
    for b in classification.critical_set() {
        counts[rank.get(b)] += 1;
    }
    let alternating_sum = counts.iter().enumerate().map(|(i, &m)| sign(i) * m as i64).sum();
    let chi = euler_characteristic(&order_complex(poset));
    if alternating_sum != chi {
        return Err(Error::IdentityViolated {
            identity: "Σ (-1)^i M_i = χ",
            lhs: alternating_sum,
            rhs: chi,
        });
    }
    Ok(MorseInequalityReport {
        counts,
        alternating_sum,
        chi,
    })
}

/// The order complex as a simplicial description: one vertex per element
/// (named by its index) and the maximal chains as maximal simplices.
pub fn barycentric_spec(poset: &Poset) -> ComplexSpec {
    let maximal_simplices = order_complex(poset)
        .facets()
        .into_iter()
        .map(|s| s.into_iter().map(|v| format!("v{v}")).collect())
        .collect();
    ComplexSpec::Simplicial { maximal_simplices }
}
