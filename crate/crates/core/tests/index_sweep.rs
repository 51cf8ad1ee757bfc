use morsepoly::chain_index::{
    chain_sum_excluding, chain_sum_lower, chain_sum_top, chain_sum_top_recursive, check_hypotheses,
    verify_representation,
};
use morsepoly::cw_ingest::{face_poset_simplicial, morse_inequality_report};
use morsepoly::generate::{gen_complex, gen_morse, ComplexParams};
use morsepoly::geometry::{cross_check, embed_vertices};
use morsepoly::poset::{check_properties, enumerate_chains, Poset};
use morsepoly::MorseFunction;

fn face_poset(seed: u64) -> morsepoly::cw_ingest::FacePoset {
    let params = ComplexParams {
        n_vertices: 3 + (seed % 3) as usize,
        dimension: 1 + (seed % 3) as usize,
        density: 0.3 + 0.1 * (seed % 6) as f64,
    };
    face_poset_simplicial(&gen_complex(seed, params)).unwrap()
}

fn sign(len: usize) -> i64 {
    if len.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Index straight from the definition: every chain of the whole poset that
/// contains `b` and has `b` as its highest value under `g`.
fn index_oracle(p: &Poset, g: &MorseFunction, b: usize) -> i64 {
    enumerate_chains(p, &p.all())
        .iter()
        .filter(|c| c.contains(b) && c.members().iter().all(|&x| x == b || g.get(x) < g.get(b)))
        .map(|c| sign(c.members().len() - 1))
        .sum()
}

#[test]
fn generated_face_posets_satisfy_hypotheses() {
    for seed in 0..120 {
        let fp = face_poset(seed);
        let report = check_properties(&fp.poset);
        assert!(report.all_hold(), "seed {seed}: {report:?}");
        assert_eq!(check_hypotheses(&fp.poset).unwrap(), fp.parity);
    }
}

#[test]
fn chain_identities_on_face_posets() {
    for seed in 0..120 {
        let fp = face_poset(seed);
        let p = &fp.poset;
        assert!(p.len() <= 40, "seed {seed}: {} elements", p.len());
        for b in 0..p.len() {
            let top = chain_sum_top(p, &fp.parity, b);
            assert!(top.holds(), "seed {seed}, top at {}", p.id(b));
            assert_eq!(chain_sum_top_recursive(p, b), top.sum);
            for &a in p.lower_covers(b) {
                assert!(chain_sum_excluding(p, a, b).unwrap().holds(), "seed {seed}");
                assert!(chain_sum_lower(p, a, b).unwrap().holds(), "seed {seed}");
            }
        }
    }
}

#[test]
fn indices_match_definition_and_geometry() {
    for seed in 0..120 {
        let fp = face_poset(seed);
        let p = &fp.poset;
        let f = gen_morse(seed ^ 0x5eed, p);
        let v = verify_representation(p, &f).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        for (b, e) in v.report.elements.iter().enumerate() {
            assert_eq!(
                e.computed,
                index_oracle(p, &v.normalized, b),
                "seed {seed}, {}",
                e.element
            );
        }
        let cc = cross_check(p, &v.normalized).unwrap();
        assert!(cc.agrees(), "seed {seed}: {:?}", cc.first_mismatch);
        let emb = embed_vertices(p, &v.normalized).unwrap();
        assert!(emb.is_affinely_independent(), "seed {seed}");
        for b in 0..p.len() {
            assert_eq!(emb.height(b), v.normalized.get(b));
        }
        let ineq = morse_inequality_report(p, &fp.rank, &f).unwrap();
        assert_eq!(ineq.alternating_sum, v.report.totals.chi);
        assert_eq!(
            ineq.counts.iter().sum::<usize>(),
            v.report.totals.n0 + v.report.totals.n1
        );
    }
}
