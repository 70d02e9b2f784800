//! Word-level machinery for products of free Marchenko-Pastur variables:
//! per-family position statistics, the block-profile classes of admissible
//! partitions and pair partitions, the chain-following bijection between
//! them, Kreweras parity counts, and two independent closed forms for the
//! mixed moment that must agree with [`free_mixed_moment`].
//!
//! [`free_mixed_moment`]: crate::calculus::free_mixed_moment

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::calculus::{free_mixed_moment, CumulantSpec, MomentSpec, Word};
use crate::error::{Error, Result};
use crate::partition::{enumerate_nc2, kreweras, nc_lattice, GroundSet, PairPartition, SetPartition};
use crate::poly::{RationalFn, YPoly};
use crate::Caps;

/// Position statistics of a word: per-family index sets, their sizes, and
/// the doubled index sets used on the pair-partition side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordStats {
    word: Word,
    /// `positions[i]` lists the 1-based positions carrying family `i + 1`.
    positions: Vec<Vec<usize>>,
    /// `counts[i]` is the number of such positions.
    counts: Vec<usize>,
    /// `interlaced[i]` doubles each position `j` into `2j - 1, 2j`.
    interlaced: Vec<Vec<u32>>,
}

impl WordStats {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn family_count(&self) -> usize {
        self.positions.len()
    }

    /// 1-based positions of family `f`.
    pub fn positions(&self, f: usize) -> &[usize] {
        &self.positions[f - 1]
    }

    pub fn count(&self, f: usize) -> usize {
        self.counts[f - 1]
    }

    /// Doubled positions of family `f` inside `{1..2k}`.
    pub fn interlaced(&self, f: usize) -> &[u32] {
        &self.interlaced[f - 1]
    }
}

/// Exact per-family index sets and counts for a word.
pub fn word_stats(w: &Word) -> WordStats {
    let m = w.max_label();
    let mut positions = vec![Vec::new(); m];
    let mut interlaced = vec![Vec::new(); m];
    for (idx, &l) in w.letters().iter().enumerate() {
        let j = idx + 1;
        positions[l - 1].push(j);
        interlaced[l - 1].push(2 * j as u32 - 1);
        interlaced[l - 1].push(2 * j as u32);
    }
    let counts = positions.iter().map(|p| p.len()).collect();
    WordStats {
        word: w.clone(),
        positions,
        counts,
        interlaced,
    }
}

/// Per-family block profile of an admissible partition.
///
/// `counts[i]` holds `t_i + 1`: on the partition side, the number of blocks
/// the partition puts inside family `i + 1`'s positions; on the
/// pair-partition side, the number of its family blocks whose smaller
/// element is odd. Families absent from the word contribute zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct BlockProfile {
    counts: Vec<usize>,
}

impl BlockProfile {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    /// The raw `t_i + 1` values.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// The `t_i` values; `-1` marks a family absent from the word.
    pub fn t_values(&self) -> Vec<i64> {
        self.counts.iter().map(|&c| c as i64 - 1).collect()
    }

    /// Sum of the `t_i + 1` values.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

impl fmt::Display for BlockProfile {
    /// Rendered as the tuple of `t_i` values, e.g. `(0,1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.t_values().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

/// All non-crossing partitions of the word's positions whose blocks each
/// stay inside one family, grouped by per-family block counts.
pub fn enumerate_a(w: &Word, caps: &Caps) -> Result<BTreeMap<BlockProfile, Vec<SetPartition>>> {
    let k = w.len();
    if k > caps.nc {
        return Err(Error::SizeCap { size: k, cap: caps.nc });
    }
    let m = w.max_label();
    let mut out: BTreeMap<BlockProfile, Vec<SetPartition>> = BTreeMap::new();
    'outer: for p in nc_lattice(k, caps)?.iter() {
        let mut counts = vec![0usize; m];
        for block in p.blocks() {
            let fam = w.letters()[(block[0] - 1) as usize];
            if block
                .iter()
                .any(|&x| w.letters()[(x - 1) as usize] != fam)
            {
                continue 'outer;
            }
            counts[fam - 1] += 1;
        }
        out.entry(BlockProfile::new(counts))
            .or_default()
            .push(p.clone());
    }
    Ok(out)
}

/// Number of blocks whose smaller element is odd, in natural integer order.
pub fn odd_first_block_count(p: &PairPartition) -> usize {
    p.pairs().filter(|&(a, _)| a % 2 == 1).count()
}

/// All non-crossing pair partitions of the doubled positions whose blocks
/// each stay inside one family's doubled set, grouped by per-family counts
/// of odd-first blocks.
pub fn enumerate_b(w: &Word, caps: &Caps) -> Result<BTreeMap<BlockProfile, Vec<PairPartition>>> {
    let k = w.len();
    if 2 * k > caps.nc2 {
        return Err(Error::SizeCap {
            size: 2 * k,
            cap: caps.nc2,
        });
    }
    let m = w.max_label();
    // Family of each doubled position 1..2k.
    let family_of = |x: u32| w.letters()[((x + 1) / 2 - 1) as usize];
    let mut out: BTreeMap<BlockProfile, Vec<PairPartition>> = BTreeMap::new();
    'outer: for p in enumerate_nc2(&GroundSet::contiguous(2 * k), caps)? {
        let mut counts = vec![0usize; m];
        for (a, b) in p.pairs() {
            if family_of(a) != family_of(b) {
                continue 'outer;
            }
            if a % 2 == 1 {
                counts[family_of(a) - 1] += 1;
            }
        }
        out.entry(BlockProfile::new(counts)).or_default().push(p);
    }
    Ok(out)
}

/// Chain-following bijection from non-crossing pair partitions of `{1..2k}`
/// onto non-crossing partitions of `{1..k}`.
///
/// Every block of the result is grown from one odd-first block: starting at
/// an odd element `2j - 1`, follow its even partner `2i`, record `i`, and
/// continue with the partner of `2i - 1` until the chain reaches `2j`.
pub fn bijection_f(p: &PairPartition) -> Result<SetPartition> {
    if !p.ground().is_contiguous_from_one() {
        return Err(Error::Domain(
            "the bijection expects ground set {1..2k}".into(),
        ));
    }
    if !p.is_noncrossing() {
        return Err(Error::Domain("the bijection expects a non-crossing input".into()));
    }
    let n = p.ground().len();
    let k = n / 2;
    let mut partner = vec![0u32; n + 1];
    for (a, b) in p.pairs() {
        partner[a as usize] = b;
        partner[b as usize] = a;
    }
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    for (a, _) in p.pairs().filter(|&(a, _)| a % 2 == 1) {
        // a = 2j - 1; the chain closes on reaching its even mate 2j.
        let close = a + 1;
        let mut block = Vec::new();
        let mut current = partner[a as usize];
        loop {
            if current % 2 != 0 {
                return Err(Error::Inconsistent(format!(
                    "chain from {a} stepped onto odd element {current}"
                )));
            }
            block.push(current / 2);
            if current == close {
                break;
            }
            if block.len() > k {
                return Err(Error::Inconsistent(format!("chain from {a} fails to close")));
            }
            current = partner[(current - 1) as usize];
        }
        blocks.push(block);
    }
    let result = SetPartition::new(GroundSet::contiguous(k), blocks)
        .map_err(|e| Error::Inconsistent(format!("chains do not partition the half-index set: {e}")))?;
    if !result.is_noncrossing() {
        return Err(Error::Inconsistent("bijection produced a crossing partition".into()));
    }
    Ok(result)
}

/// Parity counts of the Kreweras complement blocks of a non-crossing pair
/// partition of `{1..2k}`, with the complement taken on barred points placed
/// before their mates (equivalently, the after-mate complement with labels
/// advanced by one modulo `2k`). Every complement block is all-even or
/// all-odd; the counts `(even, odd)` sum to `k + 1`.
pub fn kreweras_parity_counts(p: &PairPartition, caps: &Caps) -> Result<(usize, usize)> {
    if !p.ground().is_contiguous_from_one() {
        return Err(Error::Domain(
            "parity counts expect ground set {1..2k}".into(),
        ));
    }
    let n = p.ground().len() as u32;
    let complement = kreweras(p.underlying(), caps)?;
    let mut even = 0usize;
    let mut odd = 0usize;
    for block in complement.blocks() {
        // Advance labels by one modulo n before reading parity.
        let parities: Vec<u32> = block.iter().map(|&x| (x % n + 1) % 2).collect();
        if parities.iter().all(|&b| b == 0) {
            even += 1;
        } else if parities.iter().all(|&b| b == 1) {
            odd += 1;
        } else {
            return Err(Error::StructureViolation(format!(
                "complement block {block:?} mixes parities"
            )));
        }
    }
    Ok((even, odd))
}

/// Closed-form mixed moment of free Marchenko-Pastur variables: the sum over
/// block profiles of the class size times `y^(k - sum of (t_i + 1))`.
///
/// The exponent follows the per-block product `y^(T_i - t_i - 1)` over
/// families; see the erratum note in the crate README for the sign of the
/// profile sum.
pub fn lemma2_moment(w: &Word, caps: &Caps) -> Result<YPoly> {
    let k = w.len();
    let classes = enumerate_a(w, caps)?;
    let mut acc = YPoly::zero();
    for (profile, members) in &classes {
        let exponent = (k - profile.total()) as u32;
        acc = &acc + &YPoly::monomial(exponent, members.len() as i64);
    }
    Ok(acc)
}

/// Symbolic evaluation of the embedding proof's right-hand side: for each
/// admissible pair partition, weight the corner-projection moments by the
/// Kreweras parity counts, scale by `(1 + y)^(k+1) / y`, and reduce. The
/// reduction must land on a polynomial, which equals [`lemma2_moment`].
pub fn theorem2_rhs(w: &Word, caps: &Caps) -> Result<YPoly> {
    let k = w.len();
    let upper = MomentSpec::UpperCorner.phi(1)?; // y / (1 + y)
    let lower = MomentSpec::LowerCorner.phi(1)?; // 1 / (1 + y)
    let mut acc = RationalFn::zero();
    for members in enumerate_b(w, caps)?.values() {
        for p in members {
            let (even, odd) = kreweras_parity_counts(p, caps)?;
            let term = lower.pow(even as u32).mul(&upper.pow(odd as u32));
            acc = acc.add(&term);
        }
    }
    let one_plus_y = &YPoly::one() + &YPoly::y();
    let scale = RationalFn::new(one_plus_y.pow(k as u32 + 1), YPoly::y())?;
    let total = acc.mul(&scale);
    total.as_polynomial().ok_or_else(|| {
        Error::StructureViolation(format!(
            "embedding sum for word {w} did not reduce to a polynomial: {total}"
        ))
    })
}

/// Per-profile class sizes on both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileCount {
    #[serde(rename = "A")]
    pub a: usize,
    #[serde(rename = "B")]
    pub b: usize,
}

/// Machine-readable report for one word: the three moment routes and the
/// per-profile class sizes.
#[derive(Clone, Debug, Serialize)]
pub struct WordReport {
    pub word: Vec<usize>,
    pub lemma2: YPoly,
    pub free_mixed: YPoly,
    pub theorem2_rhs: YPoly,
    pub profile_counts: BTreeMap<String, ProfileCount>,
    pub agree: bool,
}

/// Compute all three routes for a word of Marchenko-Pastur families and
/// compare them exactly.
pub fn word_report(w: &Word, caps: &Caps) -> Result<WordReport> {
    let specs = vec![CumulantSpec::MarchenkoPastur; w.max_label()];
    let lemma2 = lemma2_moment(w, caps)?;
    let free_mixed = free_mixed_moment(&specs, w, caps)?;
    let rhs = theorem2_rhs(w, caps)?;
    let a_classes = enumerate_a(w, caps)?;
    let b_classes = enumerate_b(w, caps)?;
    let mut profile_counts: BTreeMap<String, ProfileCount> = BTreeMap::new();
    for (profile, members) in &a_classes {
        profile_counts
            .entry(profile.to_string())
            .or_insert(ProfileCount { a: 0, b: 0 })
            .a = members.len();
    }
    for (profile, members) in &b_classes {
        profile_counts
            .entry(profile.to_string())
            .or_insert(ProfileCount { a: 0, b: 0 })
            .b = members.len();
    }
    let agree = lemma2 == free_mixed && lemma2 == rhs;
    Ok(WordReport {
        word: w.letters().to_vec(),
        lemma2,
        free_mixed,
        theorem2_rhs: rhs,
        profile_counts,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_nc;

    fn caps() -> Caps {
        Caps::default()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn pp(s: &str) -> PairPartition {
        PairPartition::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn word_stats_examples() {
        let st = word_stats(&w("1,2,1,2"));
        assert_eq!(st.positions(1), &[1, 3]);
        assert_eq!(st.positions(2), &[2, 4]);
        assert_eq!((st.count(1), st.count(2)), (2, 2));
        assert_eq!(st.interlaced(1), &[1, 2, 5, 6]);
        assert_eq!(st.interlaced(2), &[3, 4, 7, 8]);

        let st = word_stats(&w("1,1,1"));
        assert_eq!(st.positions(1), &[1, 2, 3]);
        assert_eq!(st.count(1), 3);

        let st = word_stats(&w("2,1"));
        assert_eq!(st.positions(1), &[2]);
        assert_eq!(st.positions(2), &[1]);
    }

    #[test]
    fn word_stats_positions_partition_the_word() {
        for letters in [vec![1, 2, 3, 1], vec![2, 2], vec![3, 1, 3]] {
            let word = Word::new(letters).unwrap();
            let st = word_stats(&word);
            let mut all: Vec<usize> = (1..=st.family_count())
                .flat_map(|f| st.positions(f).to_vec())
                .collect();
            all.sort_unstable();
            assert_eq!(all, (1..=word.len()).collect::<Vec<_>>());
            let total: usize = (1..=st.family_count()).map(|f| st.count(f)).sum();
            assert_eq!(total, word.len());
        }
    }

    #[test]
    fn enumerate_a_examples() {
        let classes = enumerate_a(&w("1,2,1,2"), &caps()).unwrap();
        let get = |t: &[i64]| {
            classes
                .iter()
                .find(|(p, _)| p.t_values() == t)
                .map(|(_, v)| v.len())
                .unwrap_or(0)
        };
        assert_eq!(get(&[1, 1]), 1);
        assert_eq!(get(&[0, 1]), 1);
        assert_eq!(get(&[1, 0]), 1);
        assert_eq!(get(&[0, 0]), 0); // the crossing candidate is excluded
        let total: usize = classes.values().map(|v| v.len()).sum();
        assert_eq!(total, 3);
        // The (0,1) class is exactly {{1,3},{2},{4}}.
        let c01 = classes
            .iter()
            .find(|(p, _)| p.t_values() == [0, 1])
            .unwrap()
            .1;
        assert_eq!(c01[0], "{{1,3},{2},{4}}".parse().unwrap());

        let classes = enumerate_a(&w("1,1"), &caps()).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.values().all(|v| v.len() == 1));

        let classes = enumerate_a(&w("1,2"), &caps()).unwrap();
        assert_eq!(classes.len(), 1);
        let (profile, members) = classes.iter().next().unwrap();
        assert_eq!(profile.t_values(), vec![0, 0]);
        assert_eq!(members.len(), 1);
    }

    #[test]
    fn enumerate_b_examples() {
        let classes = enumerate_b(&w("1,1"), &caps()).unwrap();
        let find = |t: &[i64]| {
            classes
                .iter()
                .find(|(p, _)| p.t_values() == t)
                .map(|(_, v)| v.clone())
                .unwrap_or_default()
        };
        assert_eq!(find(&[1]), vec![pp("{{1,2},{3,4}}")]);
        assert_eq!(find(&[0]), vec![pp("{{1,4},{2,3}}")]);

        let classes = enumerate_b(&w("1,2"), &caps()).unwrap();
        assert_eq!(classes.len(), 1);
        let (profile, members) = classes.iter().next().unwrap();
        assert_eq!(profile.t_values(), vec![0, 0]);
        assert_eq!(members, &vec![pp("{{1,2},{3,4}}")]);

        let classes = enumerate_b(&w("1"), &caps()).unwrap();
        assert_eq!(classes.len(), 1);
        let (profile, members) = classes.iter().next().unwrap();
        assert_eq!(profile.t_values(), vec![0]);
        assert_eq!(members, &vec![pp("{{1,2}}")]);
    }

    #[test]
    fn bijection_examples() {
        assert_eq!(
            bijection_f(&pp("{{1,2},{3,4}}")).unwrap(),
            "{{1},{2}}".parse().unwrap()
        );
        assert_eq!(
            bijection_f(&pp("{{1,4},{2,3}}")).unwrap(),
            "{{1,2}}".parse().unwrap()
        );
        assert_eq!(bijection_f(&pp("{{1,2}}")).unwrap(), "{{1}}".parse().unwrap());
    }

    #[test]
    fn bijection_is_bijective_on_full_lattices() {
        for k in 1..=5usize {
            let all = enumerate_nc2(&GroundSet::contiguous(2 * k), &caps()).unwrap();
            let mut images = std::collections::HashSet::new();
            for p in &all {
                let img = bijection_f(p).unwrap();
                assert!(img.is_noncrossing());
                assert!(images.insert(img), "image repeated for {p}");
            }
            let targets = enumerate_nc(&GroundSet::contiguous(k), &caps()).unwrap();
            assert_eq!(images.len(), targets.len());
            for t in targets {
                assert!(images.contains(&t));
            }
        }
    }

    #[test]
    fn bijection_block_count_tracks_odd_first_blocks() {
        for k in 1..=5usize {
            for p in enumerate_nc2(&GroundSet::contiguous(2 * k), &caps()).unwrap() {
                let img = bijection_f(&p).unwrap();
                assert_eq!(img.block_count(), odd_first_block_count(&p), "p = {p}");
            }
        }
    }

    #[test]
    fn parity_count_examples() {
        assert_eq!(kreweras_parity_counts(&pp("{{1,2}}"), &caps()).unwrap(), (1, 1));
        assert_eq!(
            kreweras_parity_counts(&pp("{{1,2},{3,4}}"), &caps()).unwrap(),
            (2, 1)
        );
        assert_eq!(
            kreweras_parity_counts(&pp("{{1,4},{2,3}}"), &caps()).unwrap(),
            (1, 2)
        );
    }

    /// Independent route: complement computed directly on the interlacing
    /// with barred points before their mates.
    fn parity_counts_by_direct_search(p: &PairPartition) -> (usize, usize) {
        let n = p.ground().len();
        let candidates = enumerate_nc(&GroundSet::contiguous(n), &caps()).unwrap();
        let admissible: Vec<&SetPartition> = candidates
            .iter()
            .filter(|sigma| {
                // Position 2x-1 holds barred x, position 2x holds x.
                let mut blocks: Vec<Vec<u32>> = p
                    .underlying()
                    .blocks()
                    .iter()
                    .map(|b| b.iter().map(|&x| 2 * x).collect())
                    .collect();
                blocks.extend(
                    sigma
                        .blocks()
                        .iter()
                        .map(|b| b.iter().map(|&x| 2 * x - 1).collect::<Vec<u32>>()),
                );
                SetPartition::new(GroundSet::contiguous(2 * n), blocks)
                    .unwrap()
                    .is_noncrossing()
            })
            .collect();
        let best = admissible.iter().min_by_key(|s| s.block_count()).unwrap();
        for sigma in &admissible {
            assert!(crate::leq(sigma, best).unwrap());
        }
        let even = best
            .blocks()
            .iter()
            .filter(|b| b.iter().all(|&x| x % 2 == 0))
            .count();
        let odd = best
            .blocks()
            .iter()
            .filter(|b| b.iter().all(|&x| x % 2 == 1))
            .count();
        assert_eq!(even + odd, best.block_count(), "mixed parity block");
        (even, odd)
    }

    #[test]
    fn parity_counts_match_direct_search() {
        for k in 1..=4usize {
            for p in enumerate_nc2(&GroundSet::contiguous(2 * k), &caps()).unwrap() {
                assert_eq!(
                    kreweras_parity_counts(&p, &caps()).unwrap(),
                    parity_counts_by_direct_search(&p),
                    "p = {p}"
                );
            }
        }
    }

    #[test]
    fn parity_counts_sum_and_match_profiles() {
        // For the single-family word of length k, the even count is the
        // number of odd-first blocks and the totals are k + 1.
        for k in 1..=6usize {
            for p in enumerate_nc2(&GroundSet::contiguous(2 * k), &caps()).unwrap() {
                let (even, odd) = kreweras_parity_counts(&p, &caps()).unwrap();
                assert_eq!(even + odd, k + 1);
                assert_eq!(even, odd_first_block_count(&p), "p = {p}");
            }
        }
    }

    #[test]
    fn lemma2_examples() {
        let c = caps();
        assert_eq!(
            lemma2_moment(&w("1,1"), &c).unwrap(),
            YPoly::from_coeffs([(0, 1), (1, 1)])
        );
        assert_eq!(lemma2_moment(&w("1,2"), &c).unwrap(), YPoly::one());
        assert_eq!(
            lemma2_moment(&w("1,2,1,2"), &c).unwrap(),
            YPoly::from_coeffs([(0, 1), (1, 2)])
        );
    }

    #[test]
    fn lemma2_constant_word_matches_pure_moments() {
        let c = caps();
        for k in 1..=6usize {
            let word = Word::new(vec![1; k]).unwrap();
            assert_eq!(
                lemma2_moment(&word, &c).unwrap(),
                crate::calculus::moments_from_cumulants(&CumulantSpec::MarchenkoPastur, k, &c)
                    .unwrap()
            );
        }
    }

    #[test]
    fn theorem2_rhs_examples() {
        let c = caps();
        assert_eq!(
            theorem2_rhs(&w("1,1"), &c).unwrap(),
            YPoly::from_coeffs([(0, 1), (1, 1)])
        );
        assert_eq!(theorem2_rhs(&w("1,2"), &c).unwrap(), YPoly::one());
        assert_eq!(
            theorem2_rhs(&w("1,2,1,2"), &c).unwrap(),
            YPoly::from_coeffs([(0, 1), (1, 2)])
        );
    }

    #[test]
    fn three_routes_agree_on_small_words() {
        let c = caps();
        for letters in [
            vec![1],
            vec![1, 1],
            vec![1, 2],
            vec![2, 2, 2],
            vec![1, 2, 1],
            vec![1, 2, 1, 2],
            vec![1, 1, 2, 2],
            vec![1, 2, 3, 1],
        ] {
            let word = Word::new(letters).unwrap();
            let report = word_report(&word, &c).unwrap();
            assert!(report.agree, "word {word}: {report:?}");
        }
    }

    #[test]
    fn profile_classes_have_matching_sizes() {
        let c = caps();
        for letters in [vec![1, 2, 1, 2], vec![1, 1, 2], vec![1, 2, 3, 1]] {
            let word = Word::new(letters).unwrap();
            let a = enumerate_a(&word, &c).unwrap();
            let b = enumerate_b(&word, &c).unwrap();
            let a_sizes: BTreeMap<&BlockProfile, usize> =
                a.iter().map(|(p, v)| (p, v.len())).collect();
            let b_sizes: BTreeMap<&BlockProfile, usize> =
                b.iter().map(|(p, v)| (p, v.len())).collect();
            assert_eq!(a_sizes, b_sizes, "word {word}");
        }
    }

    #[test]
    fn word_report_serializes() {
        let report = word_report(&w("1,2,1,2"), &caps()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["word"], serde_json::json!([1, 2, 1, 2]));
        assert_eq!(json["agree"], serde_json::json!(true));
        assert!(json["profile_counts"]["(0,1)"]["A"].is_u64());
        assert_eq!(json["lemma2"]["coeffs"]["1"], serde_json::json!(2));
    }
}
