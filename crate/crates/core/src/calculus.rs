//! Moment-cumulant calculus over the non-crossing partition lattice:
//! block-multiplicative extensions of moments and cumulants, the transforms
//! between the two, mixed moments of free families, the vanishing test for
//! mixed cumulants, and the alternating two-family moment formula.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{kreweras, mobius_to_top, nc_lattice, SetPartition};
use crate::poly::{RationalFn, YPoly};
use crate::Caps;

/// A word of 1-based family labels, one per position of a product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Domain("words must have at least one letter".into()));
        }
        if letters.iter().any(|&l| l == 0) {
            return Err(Error::Domain("family labels are 1-based".into()));
        }
        Ok(Self { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// Largest family label appearing in the word.
    pub fn max_label(&self) -> usize {
        self.letters.iter().copied().max().unwrap_or(0)
    }
}

impl TryFrom<Vec<usize>> for Word {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Word> for Vec<usize> {
    fn from(w: Word) -> Self {
        w.letters
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses comma-separated 1-based labels, e.g. `"1,2,1,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad family label {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

// ---------------------------------------------------------------------------
// Per-family specifications
// ---------------------------------------------------------------------------

/// Free-cumulant sequence of a single family, valued in [`YPoly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CumulantSpec {
    /// kappa_2 = 1, every other cumulant 0.
    Semicircular,
    /// kappa_k = y^(k-1).
    MarchenkoPastur,
    /// The unit: kappa_1 = 1, every higher cumulant 0.
    Unit,
    /// Explicit sequence `kappa[k-1]` up to the working degree.
    Custom { label: String, kappa: Vec<YPoly> },
}

impl CumulantSpec {
    pub fn label(&self) -> &str {
        match self {
            Self::Semicircular => "semicircular",
            Self::MarchenkoPastur => "marchenko-pastur",
            Self::Unit => "unit",
            Self::Custom { label, .. } => label,
        }
    }

    /// `kappa_order`, for `order >= 1`.
    pub fn kappa(&self, order: usize) -> Result<YPoly> {
        if order == 0 {
            return Err(Error::Domain("cumulant orders start at 1".into()));
        }
        Ok(match self {
            Self::Semicircular => {
                if order == 2 {
                    YPoly::one()
                } else {
                    YPoly::zero()
                }
            }
            Self::MarchenkoPastur => YPoly::y_pow(order as u32 - 1),
            Self::Unit => {
                if order == 1 {
                    YPoly::one()
                } else {
                    YPoly::zero()
                }
            }
            Self::Custom { label, kappa } => kappa
                .get(order - 1)
                .cloned()
                .ok_or_else(|| {
                    Error::Domain(format!(
                        "cumulant spec {label:?} defined only up to order {}",
                        kappa.len()
                    ))
                })?,
        })
    }
}

/// Single-family moment sequence, valued in exact rational functions of `y`
/// since the corner-projection moments are not polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MomentSpec {
    /// phi_r = y / (1 + y) for every r: the large-corner projection limit.
    UpperCorner,
    /// phi_r = 1 / (1 + y) for every r: the complementary projection limit.
    LowerCorner,
    /// phi_r = 1 for every r.
    Unit,
    /// Explicit sequence `phi[r-1]`.
    Custom { label: String, phi: Vec<RationalFn> },
}

impl MomentSpec {
    pub fn label(&self) -> &str {
        match self {
            Self::UpperCorner => "upper-corner",
            Self::LowerCorner => "lower-corner",
            Self::Unit => "unit",
            Self::Custom { label, .. } => label,
        }
    }

    /// `phi_order`, for `order >= 1`.
    pub fn phi(&self, order: usize) -> Result<RationalFn> {
        if order == 0 {
            return Err(Error::Domain("moment orders start at 1".into()));
        }
        let one_plus_y = &YPoly::one() + &YPoly::y();
        Ok(match self {
            Self::UpperCorner => RationalFn::new(YPoly::y(), one_plus_y)?,
            Self::LowerCorner => RationalFn::new(YPoly::one(), one_plus_y)?,
            Self::Unit => RationalFn::one(),
            Self::Custom { label, phi } => phi
                .get(order - 1)
                .cloned()
                .ok_or_else(|| {
                    Error::Domain(format!(
                        "moment spec {label:?} defined only up to order {}",
                        phi.len()
                    ))
                })?,
        })
    }

    /// Moment spec of a single family derived from its cumulants, defined up
    /// to `max_order`.
    pub fn from_cumulants(spec: &CumulantSpec, max_order: usize, caps: &Caps) -> Result<Self> {
        let phi = (1..=max_order)
            .map(|k| Ok(RationalFn::from_poly(moments_from_cumulants(spec, k, caps)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::Custom {
            label: format!("moments of {}", spec.label()),
            phi,
        })
    }
}

// ---------------------------------------------------------------------------
// Multiplicative extensions
// ---------------------------------------------------------------------------

fn check_positions(p: &SetPartition, families: &[usize], spec_count: usize) -> Result<()> {
    if families.len() != p.ground().len() {
        return Err(Error::Domain(format!(
            "{} positions for a ground set of size {}",
            families.len(),
            p.ground().len()
        )));
    }
    if let Some(&f) = families.iter().find(|&&f| f == 0 || f > spec_count) {
        return Err(Error::Domain(format!(
            "family label {f} outside 1..={spec_count}"
        )));
    }
    Ok(())
}

/// Family shared by every position of `block`, or a mixed-block error.
fn block_family(
    p: &SetPartition,
    block: &[u32],
    families: &[usize],
) -> Result<usize> {
    let fam = |x: u32| families[p.ground().index_of(x).expect("element in ground")];
    let first = fam(block[0]);
    if block.iter().any(|&x| fam(x) != first) {
        return Err(Error::MixedBlock(block.to_vec()));
    }
    Ok(first)
}

/// Block-multiplicative moment extension: the product over blocks of the
/// block's family moment at the block size. Each position carries the family
/// label selecting its evaluator; blocks mixing families are rejected.
pub fn phi_pi(
    p: &SetPartition,
    families: &[usize],
    specs: &[MomentSpec],
) -> Result<RationalFn> {
    check_positions(p, families, specs.len())?;
    let mut acc = RationalFn::one();
    for block in p.blocks() {
        let f = block_family(p, block, families)?;
        acc = acc.mul(&specs[f - 1].phi(block.len())?);
    }
    Ok(acc)
}

/// Block-multiplicative cumulant extension: the product over blocks of the
/// block's family cumulant at the block size. Equals the Möbius-sum form on
/// single-family blocks by multiplicativity; mixed blocks are rejected here
/// (they are handled by vanishing in [`free_mixed_moment`]).
pub fn kappa_pi(
    p: &SetPartition,
    families: &[usize],
    specs: &[CumulantSpec],
) -> Result<YPoly> {
    check_positions(p, families, specs.len())?;
    let mut acc = YPoly::one();
    for block in p.blocks() {
        let f = block_family(p, block, families)?;
        acc = &acc * &specs[f - 1].kappa(block.len())?;
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Moment <-> cumulant transforms
// ---------------------------------------------------------------------------

fn check_symbolic_order(k: usize, caps: &Caps) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("orders start at 1".into()));
    }
    if k > caps.symbolic {
        return Err(Error::SizeCap {
            size: k,
            cap: caps.symbolic,
        });
    }
    Ok(())
}

/// `phi_k` of a single family: the sum of `kappa_pi` over all non-crossing
/// partitions of `{1..k}`.
pub fn moments_from_cumulants(spec: &CumulantSpec, k: usize, caps: &Caps) -> Result<YPoly> {
    check_symbolic_order(k, caps)?;
    let families = vec![1usize; k];
    let specs = std::slice::from_ref(spec);
    let mut acc = YPoly::zero();
    for p in nc_lattice(k, caps)?.iter() {
        acc = &acc + &kappa_pi(p, &families, specs)?;
    }
    Ok(acc)
}

/// `kappa_k` of a single family by Möbius inversion over the non-crossing
/// lattice: the sum of `phi_sigma * mu(sigma, 1_k)`.
pub fn cumulants_from_moments(spec: &MomentSpec, k: usize, caps: &Caps) -> Result<RationalFn> {
    check_symbolic_order(k, caps)?;
    let families = vec![1usize; k];
    let specs = std::slice::from_ref(spec);
    let mu_top = mobius_to_top(k, caps)?;
    let mut acc = RationalFn::zero();
    for sigma in nc_lattice(k, caps)?.iter() {
        let mu = mu_top[sigma];
        let term = phi_pi(sigma, &families, specs)?;
        acc = acc.add(&term.mul(&RationalFn::from_poly(YPoly::constant(mu))));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Free mixed moments
// ---------------------------------------------------------------------------

/// Mixed moment of free families given by their cumulant specs: the sum over
/// non-crossing partitions whose blocks each stay inside one family's
/// position set of the product of per-family cumulants. Partitions with a
/// mixed block contribute zero by free independence.
pub fn free_mixed_moment(specs: &[CumulantSpec], w: &Word, caps: &Caps) -> Result<YPoly> {
    let k = w.len();
    check_symbolic_order(k, caps)?;
    if w.max_label() > specs.len() {
        return Err(Error::Domain(format!(
            "word uses family {} but only {} specs were given",
            w.max_label(),
            specs.len()
        )));
    }
    let mut acc = YPoly::zero();
    'outer: for p in nc_lattice(k, caps)?.iter() {
        let mut term = YPoly::one();
        for block in p.blocks() {
            let f = match block_family(p, block, w.letters()) {
                Ok(f) => f,
                Err(Error::MixedBlock(_)) => continue 'outer,
                Err(e) => return Err(e),
            };
            term = &term * &specs[f - 1].kappa(block.len())?;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Joint-moment oracle: supplies the mixed moment of any subword.
pub trait JointMoments {
    fn moment(&self, letters: &[usize]) -> Result<YPoly>;
}

/// Oracle backed by [`free_mixed_moment`]: the families are genuinely free.
pub struct FreeProductMoments<'a> {
    pub specs: &'a [CumulantSpec],
    pub caps: &'a Caps,
}

impl JointMoments for FreeProductMoments<'_> {
    fn moment(&self, letters: &[usize]) -> Result<YPoly> {
        free_mixed_moment(self.specs, &Word::new(letters.to_vec())?, self.caps)
    }
}

/// Oracle for classically independent commuting families: every mixed moment
/// factorizes into per-family pure moments by letter counts.
pub struct ClassicalProductMoments<'a> {
    pub specs: &'a [CumulantSpec],
    pub caps: &'a Caps,
}

impl JointMoments for ClassicalProductMoments<'_> {
    fn moment(&self, letters: &[usize]) -> Result<YPoly> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &l in letters {
            if l == 0 || l > self.specs.len() {
                return Err(Error::Domain(format!("family label {l} out of range")));
            }
            *counts.entry(l).or_insert(0) += 1;
        }
        let mut acc = YPoly::one();
        for (f, c) in counts {
            acc = &acc * &moments_from_cumulants(&self.specs[f - 1], c, self.caps)?;
        }
        Ok(acc)
    }
}

/// The order-`k` mixed free cumulant of the word's variables, recovered from
/// a joint-moment oracle by Möbius inversion over `NC(k)`.
///
/// For an oracle describing genuinely free families and a word using at
/// least two of them, the result is the zero polynomial; the value is
/// returned so callers can assert either outcome.
pub fn mixed_cumulant_vanishing_check(
    oracle: &dyn JointMoments,
    w: &Word,
    caps: &Caps,
) -> Result<YPoly> {
    let k = w.len();
    check_symbolic_order(k, caps)?;
    let mu_top = mobius_to_top(k, caps)?;
    let mut memo: HashMap<Vec<usize>, YPoly> = HashMap::new();
    let mut acc = YPoly::zero();
    for sigma in nc_lattice(k, caps)?.iter() {
        let mut term = YPoly::constant(mu_top[sigma]);
        for block in sigma.blocks() {
            let sub: Vec<usize> = block
                .iter()
                .map(|&x| w.letters()[(x - 1) as usize])
                .collect();
            let m = match memo.get(&sub) {
                Some(m) => m.clone(),
                None => {
                    let m = oracle.moment(&sub)?;
                    memo.insert(sub, m.clone());
                    m
                }
            };
            term = &term * &m;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Alternating two-family moment: for a word `a b a b ...` with `n`
/// occurrences of each variable, the sum over `pi` in `NC(n)` of
/// `kappa_pi` of the `a` family times `phi` over the Kreweras complement's
/// blocks for the `b` family. With a semicircular `a` only pair partitions
/// survive, so odd `n` yields zero.
pub fn alternating_two_family_moment(
    a: &CumulantSpec,
    b: &MomentSpec,
    n: usize,
    caps: &Caps,
) -> Result<RationalFn> {
    check_symbolic_order(n, caps)?;
    let families = vec![1usize; n];
    let a_specs = std::slice::from_ref(a);
    let mut acc = RationalFn::zero();
    for p in nc_lattice(n, caps)?.iter() {
        let ka = kappa_pi(p, &families, a_specs)?;
        if ka.is_zero() {
            continue;
        }
        let complement = kreweras(p, caps)?;
        let mut term = RationalFn::from_poly(ka);
        for block in complement.blocks() {
            term = term.mul(&b.phi(block.len())?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}
