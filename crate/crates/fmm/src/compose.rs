//! Tensor composition of schemes and the recursive fast multiplier built on
//! it.
//!
//! Composing an `<a,b,c>:r1` scheme with a `<d,e,f>:r2` scheme yields an
//! `<ad,be,cf>:r1*r2` scheme whose coefficient matrices are Kronecker
//! products of the factors' matrices. The recursive multiplier applies a
//! list of schemes level by level (zero-padding as needed) and falls back to
//! the naive kernel at a cutoff.

use crate::catalog;
use crate::matrix::{Matrix, MatrixError};
use crate::ring::{instantiate, LaurentCoeff, Ring, RingError};
use crate::scheme::{BilinearScheme, FmmaSignature, ProductTriple, SchemeError};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComposeError {
    #[error(
        "Laurent exponent {0} outside [-4,4] in composition; \
         instantiate L to a concrete value before composing"
    )]
    LaurentOverflow(i32),
    #[error("empty plan with dimensions {0}x{1}x{2} above cutoff {3}")]
    EmptyPlan(usize, usize, usize, usize),
    #[error("bad plan `{0}`: {1}")]
    PlanParse(String, String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn kron(
    x: &Matrix<LaurentCoeff>,
    y: &Matrix<LaurentCoeff>,
) -> Result<Matrix<LaurentCoeff>, ComposeError> {
    let m = Matrix::from_fn(x.rows() * y.rows(), x.cols() * y.cols(), |i, j| {
        x.get(i / y.rows(), j / y.cols())
            .mul(y.get(i % y.rows(), j % y.cols()))
    });
    if let Some((_, _, bad)) = m.entries().find(|(_, _, v)| !v.within_bounds()) {
        let e = bad
            .terms()
            .map(|(e, _)| e)
            .find(|e| e.abs() > crate::ring::MAX_LAURENT_EXP)
            .unwrap_or(0);
        return Err(ComposeError::LaurentOverflow(e));
    }
    Ok(m)
}

/// Kronecker composition: `<a,b,c>:r1` with `<d,e,f>:r2` gives
/// `<ad,be,cf>:r1*r2`. Outer-major product order; block index mapping is
/// row-major, `(i, i') -> i*d + i'`.
pub fn compose(
    outer: &BilinearScheme,
    inner: &BilinearScheme,
) -> Result<BilinearScheme, ComposeError> {
    let (so, si) = (outer.signature(), inner.signature());
    let mut products = Vec::with_capacity(so.r * si.r);
    for po in outer.products() {
        for pi in inner.products() {
            products.push(ProductTriple {
                alpha: kron(&po.alpha, &pi.alpha)?,
                beta: kron(&po.beta, &pi.beta)?,
                gamma: kron(&po.gamma, &pi.gamma)?,
            });
        }
    }
    Ok(BilinearScheme::new(
        FmmaSignature {
            a: so.a * si.a,
            b: so.b * si.b,
            c: so.c * si.c,
            r: so.r * si.r,
        },
        products,
        format!("compose({},{})", outer.name(), inner.name()),
        format!(
            "Kronecker composition of [{}] with [{}]",
            outer.provenance(),
            inner.provenance()
        ),
    )?)
}

/// A recursion strategy: schemes applied outermost-first, then the naive
/// kernel at or below the cutoff dimension. When the dimensions still exceed
/// the cutoff after all levels are spent, the last level repeats.
#[derive(Clone, Debug)]
pub struct RecursionPlan {
    levels: Vec<BilinearScheme>,
    cutoff: usize,
}

impl RecursionPlan {
    /// Default cutoff below which the naive kernel wins on addition
    /// overhead; a tunable, not a claim.
    pub const DEFAULT_CUTOFF: usize = 8;

    pub fn new(levels: Vec<BilinearScheme>, cutoff: usize) -> Self {
        Self {
            levels,
            cutoff: cutoff.max(1),
        }
    }

    /// Plain naive multiplication, no recursion.
    pub fn naive() -> Self {
        Self {
            levels: Vec::new(),
            cutoff: usize::MAX,
        }
    }

    /// Parse the CLI plan syntax: comma-separated catalog names plus an
    /// optional `cutoff=N`, e.g. `makarov99,strassen,cutoff=4`; or `naive`.
    pub fn parse(s: &str) -> Result<Self, ComposeError> {
        let err = |msg: String| ComposeError::PlanParse(s.to_string(), msg);
        if s.trim() == "naive" {
            return Ok(Self::naive());
        }
        let mut levels = Vec::new();
        let mut cutoff = Self::DEFAULT_CUTOFF;
        for part in s.split(',') {
            let part = part.trim();
            if let Some(n) = part.strip_prefix("cutoff=") {
                cutoff = n
                    .parse()
                    .map_err(|_| err(format!("bad cutoff `{n}`")))?;
                if cutoff == 0 {
                    return Err(err("cutoff must be positive".into()));
                }
            } else {
                levels.push(
                    catalog::by_name(part)
                        .ok_or_else(|| err(format!("unknown catalog scheme `{part}`")))?,
                );
            }
        }
        if levels.is_empty() {
            return Err(err("no schemes named (use `naive` for the naive plan)".into()));
        }
        Ok(Self::new(levels, cutoff))
    }

    pub fn levels(&self) -> &[BilinearScheme] {
        &self.levels
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn describe(&self) -> String {
        if self.levels.is_empty() {
            return "naive".into();
        }
        let names: Vec<&str> = self.levels.iter().map(|s| s.name()).collect();
        format!("{},cutoff={}", names.join(","), self.cutoff)
    }

    fn level(&self, depth: usize) -> Option<&BilinearScheme> {
        if self.levels.is_empty() {
            None
        } else {
            Some(&self.levels[depth.min(self.levels.len() - 1)])
        }
    }
}

/// Exact count of bilinear multiplications `recursive_multiply` performs on
/// an `n x n` by `n x n` product, computed without executing.
pub fn multiplication_count(plan: &RecursionPlan, n: usize) -> u128 {
    count_rec(plan, 0, n, n, n)
}

fn count_rec(plan: &RecursionPlan, depth: usize, m: usize, k: usize, n: usize) -> u128 {
    if m.max(k).max(n) <= plan.cutoff {
        return (m * k * n) as u128;
    }
    match plan.level(depth) {
        None => (m * k * n) as u128,
        Some(scheme) => {
            let sig = scheme.signature();
            sig.r as u128
                * count_rec(
                    plan,
                    depth + 1,
                    m.div_ceil(sig.a),
                    k.div_ceil(sig.b),
                    n.div_ceil(sig.c),
                )
        }
    }
}

/// Instantiated sparse view of one product, reused across recursive calls.
struct SparseProduct<T> {
    alpha: Vec<(usize, usize, T)>,
    beta: Vec<(usize, usize, T)>,
    gamma: Vec<(usize, usize, T)>,
}

struct PlanCtx<'a, R: Ring> {
    ring: &'a R,
    plan: &'a RecursionPlan,
    levels: Vec<(FmmaSignature, Vec<SparseProduct<R::Elem>>)>,
}

impl<'a, R: Ring> PlanCtx<'a, R> {
    fn new(ring: &'a R, plan: &'a RecursionPlan) -> Self {
        let levels = plan
            .levels
            .iter()
            .map(|scheme| {
                let sparse = scheme
                    .products()
                    .iter()
                    .map(|p| {
                        let nz = |m: &Matrix<LaurentCoeff>| {
                            m.entries()
                                .filter(|(_, _, v)| !v.is_zero())
                                .map(|(i, j, v)| (i, j, instantiate(v, ring)))
                                .filter(|(_, _, v)| !ring.is_zero(v))
                                .collect::<Vec<_>>()
                        };
                        SparseProduct {
                            alpha: nz(&p.alpha),
                            beta: nz(&p.beta),
                            gamma: nz(&p.gamma),
                        }
                    })
                    .collect();
                (scheme.signature(), sparse)
            })
            .collect();
        Self { ring, plan, levels }
    }

    fn multiply(
        &self,
        depth: usize,
        a: &Matrix<R::Elem>,
        b: &Matrix<R::Elem>,
    ) -> Result<(Matrix<R::Elem>, u128), ComposeError> {
        let (m, k, n) = (a.rows(), a.cols(), b.cols());
        if m.max(k).max(n) <= self.plan.cutoff {
            return Ok((a.naive_multiply(self.ring, b)?, (m * k * n) as u128));
        }
        if self.levels.is_empty() {
            return Err(ComposeError::EmptyPlan(m, k, n, self.plan.cutoff));
        }
        let idx = depth.min(self.levels.len() - 1);
        let (sig, products) = &self.levels[idx];
        let ring = self.ring;
        let zero = ring.zero();
        // block sizes after zero-padding to multiples of the level's shape
        let (pa, pb, pc) = (m.div_ceil(sig.a), k.div_ceil(sig.b), n.div_ceil(sig.c));
        let results: Vec<(Matrix<R::Elem>, u128)> = products
            .par_iter()
            .map(|p| {
                let mut asub = Matrix::zero(ring, pa, pb);
                for (i, j, coeff) in &p.alpha {
                    let block = a.submatrix(i * pa, j * pb, pa, pb, &zero);
                    asub = asub.add(ring, &block.scale(ring, coeff)).expect("same shape");
                }
                let mut bsub = Matrix::zero(ring, pb, pc);
                for (i, j, coeff) in &p.beta {
                    let block = b.submatrix(i * pb, j * pc, pb, pc, &zero);
                    bsub = bsub.add(ring, &block.scale(ring, coeff)).expect("same shape");
                }
                self.multiply(depth + 1, &asub, &bsub)
            })
            .collect::<Result<_, _>>()?;
        let mut c = Matrix::zero(ring, m, n);
        let mut count = 0u128;
        for (p, (prod, sub_count)) in products.iter().zip(&results) {
            count += sub_count;
            for (bi, bj, coeff) in &p.gamma {
                let scaled = prod.scale(ring, coeff);
                // write back only the in-range part of the padded block
                for (i, j, v) in scaled.entries() {
                    let (ci, cj) = (bi * pa + i, bj * pc + j);
                    if ci < m && cj < n {
                        c.set(ci, cj, ring.add(c.get(ci, cj), v));
                    }
                }
            }
        }
        Ok((c, count))
    }
}

/// Multiply with the plan's recursion and report the number of bilinear
/// multiplications actually performed.
pub fn recursive_multiply_counted<R: Ring>(
    ring: &R,
    a: &Matrix<R::Elem>,
    b: &Matrix<R::Elem>,
    plan: &RecursionPlan,
) -> Result<(Matrix<R::Elem>, u128), ComposeError> {
    if a.cols() != b.rows() {
        return Err(MatrixError::DimMismatch(format!(
            "multiply: {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        ))
        .into());
    }
    PlanCtx::new(ring, plan).multiply(0, a, b)
}

pub fn recursive_multiply<R: Ring>(
    ring: &R,
    a: &Matrix<R::Elem>,
    b: &Matrix<R::Elem>,
    plan: &RecursionPlan,
) -> Result<Matrix<R::Elem>, ComposeError> {
    recursive_multiply_counted(ring, a, b, plan).map(|(c, _)| c)
}
