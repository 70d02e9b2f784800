//! Non-crossing set partitions of finite ordered ground sets: enumeration,
//! the refinement order and its Möbius function, pair partitions, and the
//! Kreweras complement.
//!
//! Partitions are kept in canonical form (blocks ordered by their minimum
//! element, elements ascending within a block), which makes equality,
//! hashing, and enumeration order well-defined.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::Caps;

/// A finite ordered ground set: strictly increasing positive integers.
///
/// Only the relative order of the elements matters for the partition lattice;
/// arbitrary labels are supported so that sub-ground-sets such as the
/// per-family position sets of a word can be partitioned directly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct GroundSet {
    elements: Vec<u32>,
}

impl GroundSet {
    /// Build a ground set from strictly increasing positive labels.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::Domain("ground-set labels must be positive".into()));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "ground-set labels must be strictly increasing".into(),
            ));
        }
        Ok(Self { elements })
    }

    /// The ground set `{1, ..., n}`.
    pub fn contiguous(n: usize) -> Self {
        Self {
            elements: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Zero-based rank of `x` within the ground set.
    pub fn index_of(&self, x: u32) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }

    /// True when the labels are exactly `1..=n`.
    pub fn is_contiguous_from_one(&self) -> bool {
        self.elements
            .iter()
            .enumerate()
            .all(|(i, &x)| x == i as u32 + 1)
    }
}

impl TryFrom<Vec<u32>> for GroundSet {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<GroundSet> for Vec<u32> {
    fn from(g: GroundSet) -> Self {
        g.elements
    }
}

/// A set partition of a [`GroundSet`] in canonical form.
///
/// Invariants: blocks are nonempty, pairwise disjoint, cover the ground set,
/// are internally ascending, and are ordered by their minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    ground: GroundSet,
    blocks: Vec<Vec<u32>>,
}

impl SetPartition {
    /// Validate and canonicalize a partition of the given ground set.
    pub fn new(ground: GroundSet, mut blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen: Vec<u32> = Vec::with_capacity(ground.len());
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::MalformedPartition("empty block".into()));
            }
            block.sort_unstable();
            if block.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedPartition(format!(
                    "repeated element in block {block:?}"
                )));
            }
            for &x in block.iter() {
                if !ground.contains(x) {
                    return Err(Error::MalformedPartition(format!(
                        "element {x} is not in the ground set"
                    )));
                }
            }
            seen.extend_from_slice(block);
        }
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedPartition("overlapping blocks".into()));
        }
        if seen.len() != ground.len() {
            return Err(Error::MalformedPartition(
                "blocks do not cover the ground set".into(),
            ));
        }
        blocks.sort_unstable();
        Ok(Self { ground, blocks })
    }

    /// Partition whose ground set is the union of the given blocks.
    pub fn from_blocks(blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut all: Vec<u32> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedPartition("overlapping blocks".into()));
        }
        Self::new(GroundSet::new(all)?, blocks)
    }

    /// Construct without validation. Caller guarantees canonical form.
    fn new_unchecked(ground: GroundSet, blocks: Vec<Vec<u32>>) -> Self {
        Self { ground, blocks }
    }

    /// The all-singletons partition (the minimum of the refinement order).
    pub fn singletons(ground: GroundSet) -> Self {
        let blocks = ground.elements().iter().map(|&x| vec![x]).collect();
        Self::new_unchecked(ground, blocks)
    }

    /// The one-block partition (the maximum of the refinement order).
    pub fn full(ground: GroundSet) -> Self {
        let blocks = if ground.is_empty() {
            Vec::new()
        } else {
            vec![ground.elements().to_vec()]
        };
        Self::new_unchecked(ground, blocks)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the block containing `x`.
    pub fn block_index_of(&self, x: u32) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    /// Map every element through `f`, preserving the relative order.
    /// `f` must be strictly increasing on the current labels.
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> Result<Self> {
        let ground = GroundSet::new(self.ground.elements().iter().map(|&x| f(x)).collect())?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| f(x)).collect())
            .collect();
        Self::new(ground, blocks)
    }

    /// Order-preserving relabeling onto `{1..s}`.
    pub fn relabel_to_contiguous(&self) -> Self {
        let ground = self.ground.clone();
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&x| ground.index_of(x).expect("element in ground") as u32 + 1)
                    .collect()
            })
            .collect();
        Self::new_unchecked(GroundSet::contiguous(self.ground.len()), blocks)
    }

    /// Blocks restricted to a subset of the ground set (empty intersections
    /// dropped). The result partitions `subset` only if every block of
    /// `self` lies inside or outside it.
    pub fn restrict(&self, subset: &GroundSet) -> Result<Self> {
        let blocks: Vec<Vec<u32>> = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|&x| subset.contains(x)).collect())
            .filter(|b: &Vec<u32>| !b.is_empty())
            .collect();
        Self::new(subset.clone(), blocks)
    }

    /// Non-crossing test: no `a < b < c < d` in the ground order with `a, c`
    /// in one block and `b, d` in another.
    ///
    /// Implemented as a single left-to-right scan with a stack of open
    /// blocks, which is equivalent to the quadruple condition.
    pub fn is_noncrossing(&self) -> bool {
        let n = self.ground.len();
        let mut block_of = vec![usize::MAX; n];
        for (bi, block) in self.blocks.iter().enumerate() {
            for &x in block {
                block_of[self.ground.index_of(x).expect("element in ground")] = bi;
            }
        }
        let mut remaining: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        let mut open = vec![false; self.blocks.len()];
        let mut stack: Vec<usize> = Vec::with_capacity(self.blocks.len());
        for pos in 0..n {
            let b = block_of[pos];
            if !open[b] {
                open[b] = true;
                stack.push(b);
            } else if stack.last() != Some(&b) {
                return false;
            }
            remaining[b] -= 1;
            if remaining[b] == 0 {
                stack.pop();
            }
        }
        true
    }
}

/// Free-function form of [`SetPartition::is_noncrossing`].
pub fn is_noncrossing(p: &SetPartition) -> bool {
    p.is_noncrossing()
}

// ---------------------------------------------------------------------------
// Text and JSON forms
// ---------------------------------------------------------------------------

impl fmt::Display for SetPartition {
    /// Text form `{{1,2},{3}}` in canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("partition literal must be braced: {s:?}")))?;
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        let mut current: Option<Vec<u32>> = None;
        let mut num = String::new();
        let flush_num = |num: &mut String, cur: &mut Option<Vec<u32>>| -> Result<()> {
            if !num.is_empty() {
                let v: u32 = num
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element {num:?}")))?;
                cur.as_mut()
                    .ok_or_else(|| Error::Parse("element outside a block".into()))?
                    .push(v);
                num.clear();
            }
            Ok(())
        };
        for ch in inner.chars() {
            match ch {
                '{' => {
                    if current.is_some() {
                        return Err(Error::Parse("nested block brace".into()));
                    }
                    current = Some(Vec::new());
                }
                '}' => {
                    flush_num(&mut num, &mut current)?;
                    let block =
                        current.take().ok_or_else(|| Error::Parse("unmatched '}'".into()))?;
                    blocks.push(block);
                }
                ',' => flush_num(&mut num, &mut current)?,
                c if c.is_ascii_digit() => num.push(c),
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected character {c:?}"))),
            }
        }
        if current.is_some() || !num.is_empty() {
            return Err(Error::Parse("unterminated block".into()));
        }
        Self::from_blocks(blocks)
    }
}

impl Serialize for SetPartition {
    /// JSON form: array of arrays of integers in canonical order.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<u32>>::deserialize(deserializer)?;
        SetPartition::from_blocks(blocks).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Pair partitions
// ---------------------------------------------------------------------------

/// A set partition all of whose blocks have exactly two elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SetPartition", into = "SetPartition")]
pub struct PairPartition {
    underlying: SetPartition,
}

impl PairPartition {
    pub fn new(underlying: SetPartition) -> Result<Self> {
        if underlying.ground().len() % 2 != 0 {
            return Err(Error::Domain(
                "pair partitions need an even ground set".into(),
            ));
        }
        if let Some(b) = underlying.blocks().iter().find(|b| b.len() != 2) {
            return Err(Error::Domain(format!(
                "block {b:?} does not have exactly two elements"
            )));
        }
        Ok(Self { underlying })
    }

    pub fn from_pairs(pairs: Vec<(u32, u32)>) -> Result<Self> {
        let blocks = pairs.into_iter().map(|(a, b)| vec![a, b]).collect();
        Self::new(SetPartition::from_blocks(blocks)?)
    }

    pub fn underlying(&self) -> &SetPartition {
        &self.underlying
    }

    pub fn ground(&self) -> &GroundSet {
        self.underlying.ground()
    }

    /// Blocks as ordered pairs `(min, max)`.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.underlying.blocks().iter().map(|b| (b[0], b[1]))
    }

    /// Partner of `x` within its block.
    pub fn partner(&self, x: u32) -> Option<u32> {
        self.underlying
            .blocks()
            .iter()
            .find(|b| b[0] == x || b[1] == x)
            .map(|b| if b[0] == x { b[1] } else { b[0] })
    }

    pub fn is_noncrossing(&self) -> bool {
        self.underlying.is_noncrossing()
    }
}

impl TryFrom<SetPartition> for PairPartition {
    type Error = Error;
    fn try_from(p: SetPartition) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PairPartition> for SetPartition {
    fn from(p: PairPartition) -> Self {
        p.underlying
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.underlying.fmt(f)
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Visit every non-crossing partition of `elems` (strictly increasing).
///
/// The callback receives blocks ordered by minimum element with ascending
/// elements. Visit order is deterministic but not lexicographic; collectors
/// sort afterwards.
fn visit_noncrossing(elems: &[u32], f: &mut impl FnMut(&[Vec<u32>])) {
    fn rec(
        elems: &[u32],
        pos: usize,
        blocks: &mut Vec<Vec<u32>>,
        open: &mut Vec<usize>,
        f: &mut impl FnMut(&[Vec<u32>]),
    ) {
        if pos == elems.len() {
            f(blocks);
            return;
        }
        let x = elems[pos];
        // Start a new block.
        blocks.push(vec![x]);
        open.push(blocks.len() - 1);
        rec(elems, pos + 1, blocks, open, f);
        open.pop();
        blocks.pop();
        // Join an open block at depth d; blocks opened after it close.
        for d in (0..open.len()).rev() {
            let bi = open[d];
            let saved: Vec<usize> = open.drain(d + 1..).collect();
            blocks[bi].push(x);
            rec(elems, pos + 1, blocks, open, f);
            blocks[bi].pop();
            open.extend(saved);
        }
    }
    let mut blocks = Vec::new();
    let mut open = Vec::new();
    rec(elems, 0, &mut blocks, &mut open, f);
}

/// All non-crossing partitions of the ground set, sorted lexicographically
/// on canonical form. The count is the Catalan number of the ground size.
pub fn enumerate_nc(ground: &GroundSet, caps: &Caps) -> Result<Vec<SetPartition>> {
    if ground.len() > caps.nc {
        return Err(Error::SizeCap {
            size: ground.len(),
            cap: caps.nc,
        });
    }
    if ground.is_contiguous_from_one() {
        return Ok(nc_lattice(ground.len(), caps)?.as_ref().clone());
    }
    let mut out = Vec::new();
    visit_noncrossing(ground.elements(), &mut |blocks| {
        out.push(SetPartition::new_unchecked(ground.clone(), blocks.to_vec()));
    });
    out.sort_unstable();
    Ok(out)
}

/// Shared, sorted enumeration of `NC(n)` on `{1..n}`.
///
/// Small lattices are cached behind an `Arc` since the moment/cumulant sums
/// iterate them repeatedly; the cache is guarded by a mutex and safe for
/// concurrent callers.
pub(crate) fn nc_lattice(n: usize, caps: &Caps) -> Result<Arc<Vec<SetPartition>>> {
    if n > caps.nc {
        return Err(Error::SizeCap { size: n, cap: caps.nc });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<SetPartition>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let ground = GroundSet::contiguous(n);
    let mut out = Vec::new();
    visit_noncrossing(ground.elements(), &mut |blocks| {
        out.push(SetPartition::new_unchecked(ground.clone(), blocks.to_vec()));
    });
    out.sort_unstable();
    let arc = Arc::new(out);
    cache.lock().unwrap().insert(n, arc.clone());
    Ok(arc)
}

/// All non-crossing pair partitions of the ground set, sorted. The count is
/// the Catalan number of half the ground size.
pub fn enumerate_nc2(ground: &GroundSet, caps: &Caps) -> Result<Vec<PairPartition>> {
    if ground.len() % 2 != 0 {
        return Err(Error::Domain(format!(
            "pair partitions need an even ground set, got size {}",
            ground.len()
        )));
    }
    if ground.len() > caps.nc2 {
        return Err(Error::SizeCap {
            size: ground.len(),
            cap: caps.nc2,
        });
    }
    fn rec(elems: &[u32]) -> Vec<Vec<(u32, u32)>> {
        if elems.is_empty() {
            return vec![Vec::new()];
        }
        let a = elems[0];
        let mut out = Vec::new();
        // The mate must leave an even span on each side.
        for j in (1..elems.len()).step_by(2) {
            let b = elems[j];
            for inner in rec(&elems[1..j]) {
                for outer in rec(&elems[j + 1..]) {
                    let mut v = Vec::with_capacity(elems.len() / 2);
                    v.push((a, b));
                    v.extend_from_slice(&inner);
                    v.extend_from_slice(&outer);
                    out.push(v);
                }
            }
        }
        out
    }
    let mut out: Vec<PairPartition> = rec(ground.elements())
        .into_iter()
        .map(|pairs| {
            let blocks = pairs.into_iter().map(|(a, b)| vec![a, b]).collect();
            PairPartition {
                underlying: SetPartition::new(ground.clone(), blocks)
                    .expect("generated pairing is a valid partition"),
            }
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Refinement order and Möbius function
// ---------------------------------------------------------------------------

/// Refinement order: true iff every block of `p` is contained in a block of
/// `q`. Errors when the ground sets differ.
pub fn leq(p: &SetPartition, q: &SetPartition) -> Result<bool> {
    if p.ground() != q.ground() {
        return Err(Error::Domain("ground-set mismatch in refinement test".into()));
    }
    let ground = q.ground();
    let mut block_of = vec![usize::MAX; ground.len()];
    for (bi, block) in q.blocks().iter().enumerate() {
        for &x in block {
            block_of[ground.index_of(x).expect("element in ground")] = bi;
        }
    }
    let pos = |x: u32| ground.index_of(x).expect("element in ground");
    Ok(p.blocks().iter().all(|block| {
        let first = block_of[pos(block[0])];
        block.iter().all(|&x| block_of[pos(x)] == first)
    }))
}

/// Möbius function of the interval `[s, p]` in the non-crossing partition
/// lattice: the standard incidence-algebra kernel, computed by its defining
/// recursion `mu(s, s) = 1`, `mu(s, p) = -sum over s <= r < p of mu(s, r)`,
/// where `r` runs over non-crossing partitions only.
pub fn mobius(s: &SetPartition, p: &SetPartition, caps: &Caps) -> Result<i64> {
    if s.ground() != p.ground() {
        return Err(Error::Domain("ground-set mismatch in Möbius interval".into()));
    }
    if !s.is_noncrossing() || !p.is_noncrossing() {
        return Err(Error::Domain("Möbius arguments must be non-crossing".into()));
    }
    if !leq(s, p)? {
        return Err(Error::Domain(
            "Möbius interval requires the first argument to refine the second".into(),
        ));
    }
    if s.ground().len() > caps.nc {
        return Err(Error::SizeCap {
            size: s.ground().len(),
            cap: caps.nc,
        });
    }
    // Materialize the interval [s, p], finest first. q < r implies q has
    // strictly more blocks, so sorting by descending block count is a
    // topological order for the recursion.
    let mut interval: Vec<SetPartition> = Vec::new();
    visit_noncrossing(s.ground().elements(), &mut |blocks| {
        let r = SetPartition::new_unchecked(s.ground().clone(), blocks.to_vec());
        if leq(s, &r).expect("same ground") && leq(&r, p).expect("same ground") {
            interval.push(r);
        }
    });
    interval.sort_by(|a, b| b.block_count().cmp(&a.block_count()));
    let mut mu: HashMap<&SetPartition, i64> = HashMap::with_capacity(interval.len());
    for (i, r) in interval.iter().enumerate() {
        if r == s {
            mu.insert(r, 1);
            continue;
        }
        let mut acc: i64 = 0;
        for q in &interval[..i] {
            if q != r && leq(q, r).expect("same ground") {
                acc += mu[q];
            }
        }
        mu.insert(r, -acc);
    }
    Ok(mu[p])
}

/// Möbius values against the one-block partition for every element of
/// `NC(k)`, cached per size since the inversion sums reuse them heavily.
/// Built by the same defining recursion as [`mobius`].
pub(crate) fn mobius_to_top(k: usize, caps: &Caps) -> Result<Arc<HashMap<SetPartition, i64>>> {
    if k > caps.nc {
        return Err(Error::SizeCap { size: k, cap: caps.nc });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<HashMap<SetPartition, i64>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let cached = cache.lock().unwrap().get(&k).cloned();
    if let Some(hit) = cached {
        return Ok(hit);
    }
    let top = SetPartition::full(GroundSet::contiguous(k));
    let mut table = HashMap::new();
    for sigma in nc_lattice(k, caps)?.iter() {
        table.insert(sigma.clone(), mobius(sigma, &top, caps)?);
    }
    let arc = Arc::new(table);
    cache.lock().unwrap().insert(k, arc.clone());
    Ok(arc)
}

// ---------------------------------------------------------------------------
// Kreweras complement
// ---------------------------------------------------------------------------

/// Kreweras complement of a non-crossing partition.
///
/// Interlace a barred copy after each point (`1, 1', 2, 2', ..., n, n'`) and
/// return the refinement-largest partition of the barred points whose union
/// with the input stays non-crossing, reported back on the original labels.
///
/// Computed by the definition: scan all candidates, keep the admissible
/// ones, take the unique coarsest, and certify that it dominates every
/// other admissible candidate. Results are memoized by canonical form.
pub fn kreweras(p: &SetPartition, caps: &Caps) -> Result<SetPartition> {
    if !p.is_noncrossing() {
        return Err(Error::Domain(
            "Kreweras complement requires a non-crossing partition".into(),
        ));
    }
    let n = p.ground().len();
    if n > caps.nc {
        return Err(Error::SizeCap { size: n, cap: caps.nc });
    }
    if n == 0 {
        return Ok(p.clone());
    }

    let canon = p.relabel_to_contiguous();
    static CACHE: OnceLock<Mutex<HashMap<SetPartition, SetPartition>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let cached = cache.lock().unwrap().get(&canon).cloned();
    let complement = match cached {
        Some(hit) => hit,
        None => {
            let computed = kreweras_uncached(&canon)?;
            cache
                .lock()
                .unwrap()
                .insert(canon.clone(), computed.clone());
            computed
        }
    };
    // Report on the input's own labels.
    let elems = p.ground().elements();
    complement.relabel(|x| elems[(x - 1) as usize])
}

fn kreweras_uncached(p: &SetPartition) -> Result<SetPartition> {
    let n = p.ground().len();
    let barred: Vec<u32> = (1..=n as u32).collect();

    // Block id of the original partition per unbarred point.
    let mut p_block = vec![0usize; n];
    for (bi, block) in p.blocks().iter().enumerate() {
        for &x in block {
            p_block[(x - 1) as usize] = bi;
        }
    }
    let p_blocks = p.block_count();

    // Scratch for the interlaced non-crossing scan over 2n points:
    // position 2i holds unbarred i+1, position 2i+1 holds barred i+1.
    let mut remaining: Vec<usize> = Vec::new();
    let mut open: Vec<bool> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut admissible = |sigma: &[Vec<u32>]| -> bool {
        let total = p_blocks + sigma.len();
        remaining.clear();
        remaining.extend(p.blocks().iter().map(|b| b.len()));
        remaining.extend(sigma.iter().map(|b| b.len()));
        open.clear();
        open.resize(total, false);
        stack.clear();
        let mut sigma_block = vec![0usize; n];
        for (bi, block) in sigma.iter().enumerate() {
            for &x in block {
                sigma_block[(x - 1) as usize] = p_blocks + bi;
            }
        }
        for pos in 0..2 * n {
            let b = if pos % 2 == 0 {
                p_block[pos / 2]
            } else {
                sigma_block[pos / 2]
            };
            if !open[b] {
                open[b] = true;
                stack.push(b);
            } else if stack.last() != Some(&b) {
                return false;
            }
            remaining[b] -= 1;
            if remaining[b] == 0 {
                stack.pop();
            }
        }
        true
    };

    // Pass 1: coarsest admissible candidate; a tie would deny uniqueness.
    let mut best: Option<Vec<Vec<u32>>> = None;
    let mut tied = false;
    visit_noncrossing(&barred, &mut |sigma| {
        if !admissible(sigma) {
            return;
        }
        match &best {
            Some(b) if sigma.len() > b.len() => {}
            Some(b) if sigma.len() == b.len() => {
                if sigma != b.as_slice() {
                    tied = true;
                }
            }
            _ => {
                best = Some(sigma.to_vec());
                tied = false;
            }
        }
    });
    let best = best.ok_or_else(|| {
        Error::Inconsistent("no admissible complement candidate (singletons always qualify)".into())
    })?;
    if tied {
        return Err(Error::Inconsistent(
            "admissible set has no unique coarsest element".into(),
        ));
    }
    let best_part = SetPartition::new_unchecked(GroundSet::contiguous(n), best);

    // Pass 2: certify maximality against every admissible candidate.
    let mut dominated = true;
    visit_noncrossing(&barred, &mut |sigma| {
        if !dominated || !admissible(sigma) {
            return;
        }
        let cand = SetPartition::new_unchecked(GroundSet::contiguous(n), sigma.to_vec());
        if !leq(&cand, &best_part).expect("same ground") {
            dominated = false;
        }
    });
    if !dominated {
        return Err(Error::Inconsistent(
            "coarsest admissible candidate is not a maximum".into(),
        ));
    }
    Ok(best_part)
}

/// Catalan number `C(k) = binom(2k, k) / (k + 1)`.
pub fn catalan(k: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as u64
}
