//! Embedding the order complex in k-space with prescribed first coordinates,
//! and the Banchoff index of each vertex for projection onto the first axis.
//!
//! Everything here is exact: coordinates are rationals and every comparison
//! of heights is a comparison of rationals.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chain_index::combinatorial_index;
use crate::error::{Error, Result};
use crate::morse::MorseFunction;
use crate::poset::{order_complex, sign, Poset};
use crate::rational::{self, Rational};

/// Points `ψ(p)` for every element `p`, one row per element (index order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    ids: Vec<String>,
    coordinates: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingDoc {
    pub dimension: usize,
    pub coordinates: BTreeMap<String, Vec<String>>,
}

impl Embedding {
    pub fn dimension(&self) -> usize {
        self.ids.len()
    }

    pub fn point(&self, a: usize) -> &[Rational] {
        &self.coordinates[a]
    }

    /// Projection onto the first axis.
    pub fn height(&self, a: usize) -> &Rational {
        &self.coordinates[a][0]
    }

    pub fn to_doc(&self) -> EmbeddingDoc {
        EmbeddingDoc {
            dimension: self.dimension(),
            coordinates: self
                .ids
                .iter()
                .zip(&self.coordinates)
                .map(|(id, p)| (id.clone(), p.iter().map(rational::format).collect()))
                .collect(),
        }
    }

    /// `element,coord_1,...,coord_k`, one row per element in identifier order.
    /// Face identifiers such as `1,2` come out quoted.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("element".to_string()).chain((1..=self.dimension()).map(|j| format!("coord_{j}")));
        w.write_record(header).expect("in-memory write");
        for (id, p) in self.ids.iter().zip(&self.coordinates) {
            w.write_record(std::iter::once(id.clone()).chain(p.iter().map(rational::format)))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    /// Rank of the matrix whose rows are `ψ(p_i) - ψ(p_k)`, `i < k`.
    pub fn difference_rank(&self) -> usize {
        let Some(last) = self.coordinates.last() else { return 0 };
        let rows: Vec<Vec<Rational>> = self.coordinates[..self.coordinates.len() - 1]
            .iter()
            .map(|p| p.iter().zip(last).map(|(a, b)| a - b).collect())
            .collect();
        rank(rows)
    }

    pub fn is_affinely_independent(&self) -> bool {
        self.dimension() == 0 || self.difference_rank() == self.dimension() - 1
    }
}

/// Exact Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = Rational::one() / &rows[r][c];
        let pivot_row: Vec<Rational> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        rows[r] = pivot_row;
        r += 1;
    }
    r
}

/// Places the elements `p_1, …, p_k` (identifier order) at
/// `ψ(p_i) = g(p_i)·e_1 + e_{i+1}` for `i < k` and `ψ(p_k) = g(p_k)·e_1`.
pub fn embed_vertices(poset: &Poset, g: &MorseFunction) -> Result<Embedding> {
    let k = poset.len();
    if k == 0 {
        return Err(Error::EmptyPoset);
    }
    if g.len() < k {
        return Err(Error::MissingValue(poset.id(g.len()).to_string()));
    }
    let coordinates = (0..k)
        .map(|i| {
            let mut p = vec![Rational::zero(); k];
            p[0] = g.get(i).clone();
            if i + 1 < k {
                p[i + 1] = Rational::one();
            }
            p
        })
        .collect();
    Ok(Embedding {
        ids: poset.ids().to_vec(),
        coordinates,
    })
}

/// The order complex realized on an embedding.
#[derive(Debug, Clone)]
pub struct GeometricComplex {
    pub embedding: Embedding,
    /// Sorted vertex-index lists, one per simplex.
    pub simplices: Vec<Vec<usize>>,
}

/// Attaches the simplices of `Δ(P)` to the embedded vertices and checks that
/// no edge is horizontal for the first-axis projection.
pub fn realize_complex(poset: &Poset, embedding: Embedding) -> Result<GeometricComplex> {
    assert_eq!(
        poset.ids(),
        embedding.ids.as_slice(),
        "embedding built over a different poset"
    );
    let simplices = order_complex(poset).simplices;
    for s in simplices.iter().filter(|s| s.len() == 2) {
        let (a, b) = (s[0], s[1]);
        if embedding.height(a) == embedding.height(b) {
            return Err(Error::NotGeneral(
                poset.id(a).to_string(),
                poset.id(b).to_string(),
                rational::format(embedding.height(a)),
            ));
        }
    }
    Ok(GeometricComplex { embedding, simplices })
}

impl GeometricComplex {
    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.embedding
            .ids
            .binary_search_by(|x| x.as_str().cmp(id))
            .map_err(|_| Error::UnknownElement(id.to_string()))
    }
}

/// `Σ (-1)^dim s` over simplices `s` of the closed star of `v` whose highest
/// point under the first-axis projection is `v`.
pub fn geometric_index(gc: &GeometricComplex, v: usize) -> i64 {
    let h = gc.embedding.height(v);
    gc.simplices
        .iter()
        .filter(|s| s.contains(&v))
        .filter(|s| s.iter().all(|&u| u == v || gc.embedding.height(u) < h))
        .map(|s| sign(s.len() - 1))
        .sum()
}

pub fn geometric_index_of(gc: &GeometricComplex, id: &str) -> Result<i64> {
    Ok(geometric_index(gc, gc.vertex(id)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexPair {
    pub element: String,
    pub geometric: i64,
    pub combinatorial: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub indices: Vec<IndexPair>,
    pub first_mismatch: Option<IndexPair>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Embeds with `g`, realizes `Δ(P)` and compares both index computations at
/// every element.
pub fn cross_check(poset: &Poset, g: &MorseFunction) -> Result<CrossCheck> {
    let gc = realize_complex(poset, embed_vertices(poset, g)?)?;
    let mut indices = Vec::with_capacity(poset.len());
    for b in 0..poset.len() {
        indices.push(IndexPair {
            element: poset.id(b).to_string(),
            geometric: geometric_index(&gc, b),
            combinatorial: combinatorial_index(poset, g, b)?,
        });
    }
    let first_mismatch = indices.iter().find(|p| p.geometric != p.combinatorial).cloned();
    Ok(CrossCheck {
        indices,
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::normalize;
    use crate::poset::fixtures::*;
    use crate::poset::{compute_rank_function, euler_characteristic};
    use crate::rational::{from_int, parse};

    fn dims(p: &Poset) -> MorseFunction {
        let rho = compute_rank_function(p).unwrap();
        MorseFunction::from_integers(&rho.values().iter().map(|&r| r as i64).collect::<Vec<_>>())
    }

    #[test]
    fn single_point() {
        let s = singleton();
        let emb = embed_vertices(&s, &MorseFunction::from_integers(&[7])).unwrap();
        assert_eq!(emb.point(0), &[from_int(7)]);
        assert!(emb.is_affinely_independent());
        let gc = realize_complex(&s, emb).unwrap();
        assert_eq!(gc.simplices.len(), 1);
        assert_eq!(geometric_index(&gc, 0), 1);
    }

    #[test]
    fn edge_embedding() {
        let e = edge();
        let g = MorseFunction::from_integers(&[0, 2, 1]);
        let emb = embed_vertices(&e, &g).unwrap();
        assert_eq!(emb.dimension(), 3);
        let heights: Vec<_> = (0..3).map(|i| emb.height(i).clone()).collect();
        assert_eq!(heights, [from_int(0), from_int(2), from_int(1)]);
        assert_eq!(emb.difference_rank(), 2);
        let gc = realize_complex(&e, emb).unwrap();
        let idx: Vec<i64> = (0..3).map(|v| geometric_index(&gc, v)).collect();
        assert_eq!(idx, [1, 0, 0]);
        assert_eq!(geometric_index_of(&gc, "a").unwrap(), 1);
        assert!(matches!(geometric_index_of(&gc, "q"), Err(Error::UnknownElement(_))));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let r = |s: &str| parse(s).unwrap();
        assert_eq!(rank(vec![vec![r("1"), r("2")], vec![r("2"), r("4")]]), 1);
        assert_eq!(rank(vec![vec![r("1/2"), r("0")], vec![r("0"), r("3")]]), 2);
        assert_eq!(rank(vec![]), 0);
    }

    #[test]
    fn horizontal_edge_is_rejected() {
        let e = edge();
        let g = MorseFunction::from_integers(&[1, 0, 1]);
        let emb = embed_vertices(&e, &g).unwrap();
        assert!(matches!(realize_complex(&e, emb), Err(Error::NotGeneral(a, b, _)) if a == "a" && b == "e"));
        assert!(matches!(
            embed_vertices(&Poset::new::<&str>(&[], &[]).unwrap(), &MorseFunction::new(vec![])),
            Err(Error::EmptyPoset)
        ));
    }

    #[test]
    fn triangle_geometric_indices() {
        let t = triangle();
        let g = normalize(&t, &dims(&t)).unwrap();
        let gc = realize_complex(&t, embed_vertices(&t, &g).unwrap()).unwrap();
        let expect = [
            ("1", 1),
            ("2", 1),
            ("3", 1),
            ("12", -1),
            ("13", -1),
            ("23", -1),
            ("t", 1),
        ];
        for (id, want) in expect {
            assert_eq!(geometric_index_of(&gc, id).unwrap(), want, "{id}");
        }
        let total: i64 = (0..t.len()).map(|v| geometric_index(&gc, v)).sum();
        assert_eq!(total, euler_characteristic(&order_complex(&t)));
    }

    #[test]
    fn cross_checks() {
        let s = singleton();
        let c = cross_check(&s, &MorseFunction::from_integers(&[0])).unwrap();
        assert!(c.agrees());
        assert_eq!((c.indices[0].geometric, c.indices[0].combinatorial), (1, 1));

        let p = two_squares();
        let g = normalize(&p, &dims(&p)).unwrap();
        assert!(cross_check(&p, &g).unwrap().agrees());
    }

    #[test]
    fn exports() {
        let e = edge();
        let emb = embed_vertices(&e, &MorseFunction::from_integers(&[0, 2, 1])).unwrap();
        let json = serde_json::to_string(&emb.to_doc()).unwrap();
        assert_eq!(
            json,
            r#"{"dimension":3,"coordinates":{"a":["0","1","0"],"b":["2","0","1"],"e":["1","0","0"]}}"#
        );
        assert_eq!(
            emb.to_csv(),
            "element,coord_1,coord_2,coord_3\na,0,1,0\nb,2,0,1\ne,1,0,0\n"
        );
        let p = Poset::new(&["1", "1,2"], &[("1", "1,2")]).unwrap();
        let csv = embed_vertices(&p, &MorseFunction::from_integers(&[0, 1]))
            .unwrap()
            .to_csv();
        assert_eq!(csv, "element,coord_1,coord_2\n1,0,1\n\"1,2\",1,0\n");
    }
}
