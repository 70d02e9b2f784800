//! Cross-module invariants: the per-family structure of the pair-partition
//! bijection, exhaustive mixed-cumulant vanishing, and serialization
//! round-trip properties.

use proptest::prelude::*;

use freembed_core::calculus::{
    mixed_cumulant_vanishing_check, CumulantSpec, FreeProductMoments, Word,
};
use freembed_core::oracle::{bijection_f, enumerate_b, odd_first_block_count, word_stats};
use freembed_core::{Caps, GroundSet, PairPartition, SetPartition};

fn caps() -> Caps {
    Caps::default()
}

/// Every word over {1..m} of length up to max_len.
fn all_words(max_len: usize, m: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for k in 1..=max_len {
        let count = m.pow(k as u32);
        for mut idx in 0..count {
            let mut letters = Vec::with_capacity(k);
            for _ in 0..k {
                letters.push(idx % m + 1);
                idx /= m;
            }
            out.push(Word::new(letters).unwrap());
        }
    }
    out
}

/// Apply the bijection to one family's sub-pair-partition: restrict to the
/// doubled position set, relabel to {1..2T}, map through, and label the
/// result by the family's positions.
fn bijection_on_family(p: &PairPartition, interlaced: &[u32], positions: &[usize]) -> SetPartition {
    let sub_ground = GroundSet::new(interlaced.to_vec()).unwrap();
    let restricted = p.underlying().restrict(&sub_ground).unwrap();
    let relabeled = PairPartition::new(restricted.relabel_to_contiguous()).unwrap();
    let image = bijection_f(&relabeled).unwrap();
    image
        .relabel(|l| positions[(l - 1) as usize] as u32)
        .unwrap()
}

#[test]
fn bijection_decomposes_family_by_family() {
    let c = caps();
    for w in all_words(5, 3) {
        let stats = word_stats(&w);
        for members in enumerate_b(&w, &c).unwrap().values() {
            for p in members {
                let image = bijection_f(p).unwrap();
                let mut union_blocks: Vec<Vec<u32>> = Vec::new();
                for f in 1..=stats.family_count() {
                    if stats.count(f) == 0 {
                        continue;
                    }
                    let part = bijection_on_family(p, stats.interlaced(f), stats.positions(f));
                    // The family image lands inside the family's positions
                    // with as many blocks as the family has odd-first pairs.
                    let sub_ground =
                        GroundSet::new(stats.interlaced(f).to_vec()).unwrap();
                    let restricted = PairPartition::new(
                        p.underlying()
                            .restrict(&sub_ground)
                            .unwrap(),
                    )
                    .unwrap();
                    assert_eq!(
                        part.block_count(),
                        odd_first_block_count(&restricted),
                        "word {w}, family {f}, pi = {p}"
                    );
                    union_blocks.extend(part.blocks().iter().cloned());
                }
                let union = SetPartition::new(
                    GroundSet::contiguous(w.len()),
                    union_blocks,
                )
                .unwrap();
                assert_eq!(union, image, "word {w}, pi = {p}");
            }
        }
    }
}

#[test]
fn mixed_cumulants_vanish_exhaustively() {
    let c = caps();
    let specs = [
        CumulantSpec::MarchenkoPastur,
        CumulantSpec::Semicircular,
        CumulantSpec::MarchenkoPastur,
    ];
    let oracle = FreeProductMoments {
        specs: &specs,
        caps: &c,
    };
    for w in all_words(6, 3) {
        if w.letters().iter().min() == w.letters().iter().max() {
            continue; // single-family words carry no mixed cumulant
        }
        let got = mixed_cumulant_vanishing_check(&oracle, &w, &c).unwrap();
        assert!(got.is_zero(), "word {w} left {got}");
    }
}

/// A random (not necessarily non-crossing) set partition of {1..n}.
fn arb_partition(max_n: usize) -> impl Strategy<Value = SetPartition> {
    (1..=max_n)
        .prop_flat_map(|n| {
            proptest::collection::vec(0..n, n).prop_map(move |assignment| {
                let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); n];
                for (i, &b) in assignment.iter().enumerate() {
                    blocks[b].push(i as u32 + 1);
                }
                blocks.retain(|b| !b.is_empty());
                SetPartition::new(GroundSet::contiguous(n), blocks).unwrap()
            })
        })
}

proptest! {
    /// Text form round-trips bit-exactly.
    #[test]
    fn partition_text_round_trip(p in arb_partition(9)) {
        let text = p.to_string();
        let back: SetPartition = text.parse().unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }

    /// JSON form round-trips bit-exactly.
    #[test]
    fn partition_json_round_trip(p in arb_partition(9)) {
        let json = serde_json::to_string(&p).unwrap();
        let back: SetPartition = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    /// The three moment routes agree on random words.
    #[test]
    fn moment_routes_agree(letters in proptest::collection::vec(1..=3usize, 1..=5)) {
        let c = caps();
        let w = Word::new(letters).unwrap();
        let report = freembed_core::oracle::word_report(&w, &c).unwrap();
        prop_assert!(report.agree, "word {}: {:?}", w, report);
    }
}
