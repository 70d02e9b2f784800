//! Finite-size random-matrix verification: Wigner and sample covariance
//! ensembles, the block embedding identity, corner-projection traces, and
//! seeded Monte Carlo estimates of normalized trace moments of sample
//! covariance words compared against the symbolic oracle.
//!
//! Replicates are pure functions of (config, replicate index): each draws
//! from its own ChaCha stream, so parallel and serial execution produce the
//! same numbers, and the final reduction is a fixed-order serial sum.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calculus::Word;
use crate::error::{Error, Result};
use crate::oracle::lemma2_moment;
use crate::poly::Frac;
use crate::Caps;

// ---------------------------------------------------------------------------
// Dense matrices
// ---------------------------------------------------------------------------

/// Dense row-major matrix of f64.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Dot product with four accumulators; the summation order is fixed so runs
/// are bit-reproducible.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let chunks = n / 4;
    let (mut s0, mut s1, mut s2, mut s3) = (0.0f64, 0.0, 0.0, 0.0);
    for i in 0..chunks {
        let j = 4 * i;
        s0 += a[j] * b[j];
        s1 += a[j + 1] * b[j + 1];
        s2 += a[j + 2] * b[j + 2];
        s3 += a[j + 3] * b[j + 3];
    }
    let mut tail = 0.0;
    for j in 4 * chunks..n {
        tail += a[j] * b[j];
    }
    ((s0 + s1) + (s2 + s3)) + tail
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    /// `self * rhs` via row-dots against the transposed right factor.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let rt = rhs.transpose();
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let a = self.row(i);
            for j in 0..rhs.cols {
                out.data[i * rhs.cols + j] = dot(a, rt.row(j));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// `Tr(a * b)` without materializing the product, summing diagonal entries
/// in index order (identical to tracing the full product).
pub fn trace_mul(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.cols != b.rows || a.rows != b.cols {
        return Err(Error::DimensionMismatch(format!(
            "trace of {}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let bt = b.transpose();
    let mut acc = 0.0;
    for j in 0..a.rows {
        acc += dot(a.row(j), bt.row(j));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

/// Entry law for matrix ensembles: mean 0, variance 1, all moments finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryLaw {
    StandardGaussian,
    Rademacher,
}

impl EntryLaw {
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match self {
            Self::StandardGaussian => rng.sample(StandardNormal),
            Self::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

impl std::fmt::Display for EntryLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::StandardGaussian => write!(f, "gaussian"),
            Self::Rademacher => write!(f, "rademacher"),
        }
    }
}

impl std::str::FromStr for EntryLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "standard-gaussian" | "normal" => Ok(Self::StandardGaussian),
            "rademacher" | "sign" => Ok(Self::Rademacher),
            other => Err(Error::Parse(format!("unknown entry law {other:?}"))),
        }
    }
}

/// Real symmetric matrix with independent law-distributed entries on and
/// above the diagonal, mirrored below.
pub fn gen_wigner(size: usize, law: EntryLaw, rng: &mut impl Rng) -> Matrix {
    let mut w = Matrix::zeros(size, size);
    for i in 0..size {
        for j in i..size {
            let v = law.sample(rng);
            w.set(i, j, v);
            w.set(j, i, v);
        }
    }
    w
}

/// A `p x n` matrix of independent standardized entries together with its
/// sample covariance matrix `S = X X^T / n` (exactly symmetric).
pub fn sample_cov(p: usize, n: usize, law: EntryLaw, rng: &mut impl Rng) -> (Matrix, Matrix) {
    let mut x = Matrix::zeros(p, n);
    for i in 0..p {
        for j in 0..n {
            x.set(i, j, law.sample(rng));
        }
    }
    let inv_n = 1.0 / n as f64;
    let mut s = Matrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let v = dot(x.row(i), x.row(j)) * inv_n;
            s.set(i, j, v);
            s.set(j, i, v);
        }
    }
    (x, s)
}

/// Block embedding `[[w_p, x], [x^T, w_n]]`: a symmetric matrix of order
/// `p + n` that is itself a Wigner matrix when its blocks are.
pub fn embed(x: &Matrix, w_p: &Matrix, w_n: &Matrix) -> Result<Matrix> {
    let (p, n) = (x.rows(), x.cols());
    if w_p.rows() != p || w_p.cols() != p || w_n.rows() != n || w_n.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "embedding blocks {}x{}, {}x{} around a {}x{} rectangle",
            w_p.rows(),
            w_p.cols(),
            w_n.rows(),
            w_n.cols(),
            p,
            n
        )));
    }
    let total = p + n;
    let mut out = Matrix::zeros(total, total);
    for i in 0..p {
        for j in 0..p {
            out.set(i, j, w_p.get(i, j));
        }
        for j in 0..n {
            out.set(i, p + j, x.get(i, j));
            out.set(p + j, i, x.get(i, j));
        }
    }
    for i in 0..n {
        for j in 0..n {
            out.set(p + i, p + j, w_n.get(i, j));
        }
    }
    Ok(out)
}

/// The corner projections of order `p + n`: `diag(I_p, 0)` and `diag(0, I_n)`.
pub fn corner_projections(p: usize, n: usize) -> (Matrix, Matrix) {
    let total = p + n;
    let mut upper = Matrix::zeros(total, total);
    let mut lower = Matrix::zeros(total, total);
    for i in 0..p {
        upper.set(i, i, 1.0);
    }
    for i in 0..n {
        lower.set(p + i, p + i, 1.0);
    }
    (upper, lower)
}

/// Outcome of one embedding-identity check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    pub p: usize,
    pub n: usize,
    pub law: EntryLaw,
    pub seed: u64,
    pub max_abs_deviation: f64,
    pub max_entry: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Check the exact block identity
/// `diag(S, 0) = ((n+p)/n) * P_up * (W/sqrt(n+p)) * P_low * (W/sqrt(n+p)) * P_up`
/// on one seeded draw, building both sides from the same `X` and Wigner
/// blocks. Only float roundoff remains; the contract is
/// `deviation <= 1e-12 * (1 + max entry magnitude)`.
pub fn verify_embedding_identity(p: usize, n: usize, law: EntryLaw, seed: u64) -> Result<EmbeddingCheck> {
    if p == 0 || n == 0 {
        return Err(Error::Config("matrix dimensions must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, s) = sample_cov(p, n, law, &mut rng);
    let w_p = gen_wigner(p, law, &mut rng);
    let w_n = gen_wigner(n, law, &mut rng);
    let w = embed(&x, &w_p, &w_n)?;

    let total = p + n;
    let mut lhs = Matrix::zeros(total, total);
    for i in 0..p {
        for j in 0..p {
            lhs.set(i, j, s.get(i, j));
        }
    }

    let (upper, lower) = corner_projections(p, n);
    let scaled = w.scale(1.0 / (total as f64).sqrt());
    let rhs = upper
        .mul(&scaled)?
        .mul(&lower)?
        .mul(&scaled)?
        .mul(&upper)?
        .scale(total as f64 / n as f64);

    let max_abs_deviation = lhs.max_abs_diff(&rhs);
    let max_entry = lhs.max_abs().max(rhs.max_abs());
    let tolerance = 1e-12 * (1.0 + max_entry);
    Ok(EmbeddingCheck {
        p,
        n,
        law,
        seed,
        max_abs_deviation,
        max_entry,
        tolerance,
        passed: max_abs_deviation <= tolerance,
    })
}

/// Normalized traces of powers of the corner projections:
/// `(n+p)^{-1} Tr(P_up^r) = p/(n+p)` and `(n+p)^{-1} Tr(P_low^r) = n/(n+p)`,
/// exactly and independently of `r >= 1` since both are idempotent.
pub fn corner_projection_moments(p: usize, n: usize, r: usize) -> Result<(Frac, Frac)> {
    if p == 0 || n == 0 {
        return Err(Error::Config("matrix dimensions must be at least 1".into()));
    }
    if r == 0 {
        return Err(Error::Domain("powers start at 1".into()));
    }
    let total = (p + n) as i128;
    Ok((
        Frac::new(p as i128, total),
        Frac::new(n as i128, total),
    ))
}

// ---------------------------------------------------------------------------
// Monte Carlo trace moments
// ---------------------------------------------------------------------------

/// Configuration of one Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub p: usize,
    pub n: usize,
    /// Number of independent sample-covariance families to draw.
    pub m: usize,
    pub word: Word,
    pub replicates: usize,
    pub seed: u64,
    pub law: EntryLaw,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.n == 0 {
            return Err(Error::Config("matrix dimensions must be at least 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::Config("at least one replicate is required".into()));
        }
        if self.m == 0 || self.word.max_label() > self.m {
            return Err(Error::Config(format!(
                "word {} uses family {} but m = {}",
                self.word,
                self.word.max_label(),
                self.m
            )));
        }
        Ok(())
    }

    /// Aspect ratio `y = p / n` of this configuration.
    pub fn aspect_ratio(&self) -> f64 {
        self.p as f64 / self.n as f64
    }
}

/// One Monte Carlo estimate with its oracle comparison and config echo.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub p: usize,
    pub n: usize,
    pub y: f64,
    pub m: usize,
    pub word: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub law: EntryLaw,
    pub estimate: f64,
    pub std_error: f64,
    pub oracle: f64,
    pub abs_error: f64,
    pub rel_error: f64,
}

impl SimReport {
    /// Stable CSV column order.
    pub fn csv_header() -> &'static str {
        "p,n,y,word,replicates,seed,estimate,std_error,oracle,abs_error,rel_error"
    }

    pub fn csv_row(&self) -> String {
        let word = self
            .word
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{},{},{},\"{}\",{},{},{},{},{},{},{}",
            self.p,
            self.n,
            self.y,
            word,
            self.replicates,
            self.seed,
            self.estimate,
            self.std_error,
            self.oracle,
            self.abs_error,
            self.rel_error
        )
    }
}

/// Render reports as a CSV document with header.
pub fn reports_to_csv(reports: &[SimReport]) -> String {
    let mut out = String::from(SimReport::csv_header());
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Normalized trace of one replicate's word product, drawn from the stream
/// derived from (seed, replicate index).
fn replicate_trace(cfg: &SimConfig, replicate: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(replicate);
    // Family matrices are drawn in fixed order 1..=m regardless of the word.
    let mats: Vec<Matrix> = (0..cfg.m)
        .map(|_| sample_cov(cfg.p, cfg.n, cfg.law, &mut rng).1)
        .collect();
    let letters = cfg.word.letters();
    let trace = if letters.len() == 1 {
        mats[letters[0] - 1].trace()
    } else {
        // Left-to-right product of all but the last factor, then the trace
        // of the product against the last factor.
        let mut acc = mats[letters[0] - 1].clone();
        for &l in &letters[1..letters.len() - 1] {
            acc = acc.mul(&mats[l - 1])?;
        }
        trace_mul(&acc, &mats[letters[letters.len() - 1] - 1])?
    };
    let value = trace / cfg.p as f64;
    if !value.is_finite() {
        return Err(Error::Replicate {
            index: replicate,
            message: format!("trace is not finite: {value}"),
        });
    }
    Ok(value)
}

/// Monte Carlo estimate of `p^{-1} E Tr` of the word product of sample
/// covariance matrices, against the symbolic oracle at `y = p/n`.
///
/// Replicates run in parallel but are reduced in fixed index order, so the
/// report is identical for identical configs.
pub fn mc_trace_moment(cfg: &SimConfig, caps: &Caps) -> Result<SimReport> {
    cfg.validate()?;
    if cfg.replicates < 2 {
        return Err(Error::Config(
            "at least two replicates are needed for a standard error".into(),
        ));
    }
    let values: Vec<f64> = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| replicate_trace(cfg, r))
        .collect::<Result<Vec<_>>>()?;
    let count = values.len() as f64;
    let mean: f64 = values.iter().sum::<f64>() / count;
    let var: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0);
    let std_error = (var / count).sqrt();
    let y = cfg.aspect_ratio();
    let oracle = lemma2_moment(&cfg.word, caps)?.eval_f64(y);
    let abs_error = (mean - oracle).abs();
    let rel_error = if oracle != 0.0 {
        abs_error / oracle.abs()
    } else {
        f64::NAN
    };
    Ok(SimReport {
        p: cfg.p,
        n: cfg.n,
        y,
        m: cfg.m,
        word: cfg.word.letters().to_vec(),
        replicates: cfg.replicates,
        seed: cfg.seed,
        law: cfg.law,
        estimate: mean,
        std_error,
        oracle,
        abs_error,
        rel_error,
    })
}

/// Run the same word along a ladder of dimensions sharing one aspect ratio
/// (within 1%), one report per rung.
pub fn convergence_study(
    word: &Word,
    ladder: &[(usize, usize)],
    replicates: usize,
    seed: u64,
    law: EntryLaw,
    caps: &Caps,
) -> Result<Vec<SimReport>> {
    if ladder.is_empty() {
        return Err(Error::Config("empty dimension ladder".into()));
    }
    let y0 = ladder[0].0 as f64 / ladder[0].1 as f64;
    for &(p, n) in ladder {
        if p == 0 || n == 0 {
            return Err(Error::Config("matrix dimensions must be at least 1".into()));
        }
        let y = p as f64 / n as f64;
        if (y - y0).abs() > 0.01 * y0 {
            return Err(Error::Config(format!(
                "ladder entry {p}x{n} has aspect ratio {y}, inconsistent with {y0}"
            )));
        }
    }
    let m = word.max_label();
    ladder
        .iter()
        .map(|&(p, n)| {
            mc_trace_moment(
                &SimConfig {
                    p,
                    n,
                    m,
                    word: word.clone(),
                    replicates,
                    seed,
                    law,
                },
                caps,
            )
        })
        .collect()
}
