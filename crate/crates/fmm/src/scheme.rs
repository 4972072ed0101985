//! The bilinear-scheme data model, its evaluator, its exact verifiers, and
//! its accounting.
//!
//! A scheme of rank `r` for the shape `<a,b,c>` computes `C = A * B` as
//! `C = sum_rho gamma_rho * (<alpha_rho, A> * <beta_rho, B>)` where
//! `<M, X> = sum_ij M[i][j] * X[i][j]`. Correctness is never assumed: it is
//! proved either symbolically in `L` (the Brent equations) or exhaustively on
//! standard-basis pairs.

use crate::matrix::{Matrix, MatrixError};
use crate::ring::{instantiate, LaurentCoeff, PrimeField, Ring, RingError};
use num_rational::BigRational;
use rayon::prelude::*;
use std::fmt;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("expected {expected} products, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("product {index}: {which} matrix is {rows}x{cols}, expected {want_rows}x{want_cols}")]
    ShapeMismatch {
        index: usize,
        which: &'static str,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("product {index}: {which} factor is identically zero")]
    ZeroFactor { index: usize, which: &'static str },
    #[error("product {index}: {0}", .source)]
    Coefficient {
        index: usize,
        #[source]
        source: RingError,
    },
    #[error("scheme parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Operand shapes `<a x b> * <b x c>` and the number of coefficient
/// multiplications `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FmmaSignature {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub r: usize,
}

impl fmt::Display for FmmaSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}:{}", self.a, self.b, self.c, self.r)
    }
}

/// One bilinear product: `<alpha, A> * <beta, B>`, recombined via `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTriple {
    pub alpha: Matrix<LaurentCoeff>,
    pub beta: Matrix<LaurentCoeff>,
    pub gamma: Matrix<LaurentCoeff>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearScheme {
    signature: FmmaSignature,
    products: Vec<ProductTriple>,
    name: String,
    provenance: String,
}

impl BilinearScheme {
    pub fn new(
        signature: FmmaSignature,
        products: Vec<ProductTriple>,
        name: impl Into<String>,
        provenance: impl Into<String>,
    ) -> Result<Self, SchemeError> {
        if products.len() != signature.r {
            return Err(SchemeError::RankMismatch {
                expected: signature.r,
                found: products.len(),
            });
        }
        let (a, b, c) = (signature.a, signature.b, signature.c);
        for (idx, p) in products.iter().enumerate() {
            let index = idx + 1;
            for (which, m, wr, wc) in [
                ("alpha", &p.alpha, a, b),
                ("beta", &p.beta, b, c),
                ("gamma", &p.gamma, a, c),
            ] {
                if (m.rows(), m.cols()) != (wr, wc) {
                    return Err(SchemeError::ShapeMismatch {
                        index,
                        which,
                        rows: m.rows(),
                        cols: m.cols(),
                        want_rows: wr,
                        want_cols: wc,
                    });
                }
                if let Some((_, _, bad)) = m.entries().find(|(_, _, v)| !v.within_bounds()) {
                    let e = bad.min_exp().filter(|e| e.abs() > 4).or(bad.max_exp());
                    return Err(SchemeError::Coefficient {
                        index,
                        source: RingError::ExponentOutOfRange(e.unwrap_or(0)),
                    });
                }
            }
            for (which, m) in [("alpha", &p.alpha), ("beta", &p.beta)] {
                if m.entries().all(|(_, _, v)| v.is_zero()) {
                    return Err(SchemeError::ZeroFactor { index, which });
                }
            }
        }
        Ok(Self {
            signature,
            products,
            name: name.into(),
            provenance: provenance.into(),
        })
    }

    pub fn signature(&self) -> FmmaSignature {
        self.signature
    }

    pub fn products(&self) -> &[ProductTriple] {
        &self.products
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn count_multiplications(&self) -> usize {
        self.signature.r
    }

    /// Additions after instantiating `L` in the given ring: nonzero terms
    /// minus one per linear form, plus the output combination additions.
    pub fn count_additions<R: Ring>(&self, ring: &R) -> usize {
        let nnz = |m: &Matrix<LaurentCoeff>| {
            m.entries()
                .filter(|(_, _, v)| !ring.is_zero(&instantiate(v, ring)))
                .count()
        };
        let mut adds = 0;
        for p in &self.products {
            adds += nnz(&p.alpha).saturating_sub(1);
            adds += nnz(&p.beta).saturating_sub(1);
        }
        for m in 0..self.signature.a {
            for n in 0..self.signature.c {
                let contributors = self
                    .products
                    .iter()
                    .filter(|p| !ring.is_zero(&instantiate(p.gamma.get(m, n), ring)))
                    .count();
                adds += contributors.saturating_sub(1);
            }
        }
        adds
    }

    /// Run the scheme on concrete operands with exactly `r` ring
    /// multiplications between input-dependent quantities (multiplications by
    /// instantiated coefficients are scalar multiplications by known
    /// constants and do not count toward `r`).
    pub fn evaluate<R: Ring>(
        &self,
        ring: &R,
        a: &Matrix<R::Elem>,
        b: &Matrix<R::Elem>,
    ) -> Result<Matrix<R::Elem>, SchemeError> {
        let sig = self.signature;
        if (a.rows(), a.cols()) != (sig.a, sig.b) || (b.rows(), b.cols()) != (sig.b, sig.c) {
            return Err(MatrixError::DimMismatch(format!(
                "scheme {} applied to {}x{} by {}x{}",
                sig,
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            ))
            .into());
        }
        let mut c = Matrix::zero(ring, sig.a, sig.c);
        for p in &self.products {
            let la = linear_form(ring, &p.alpha, a);
            let lb = linear_form(ring, &p.beta, b);
            let prod = ring.mul(&la, &lb); // the one counted multiplication
            for (m, n, g) in p.gamma.entries() {
                if g.is_zero() {
                    continue;
                }
                let term = ring.mul(&instantiate(g, ring), &prod);
                c.set(m, n, ring.add(c.get(m, n), &term));
            }
        }
        Ok(c)
    }

    /// Exhaustive check on all standard-basis operand pairs `(e_ij, e_kl)`:
    /// the result must be `delta_jk * e_il`. Requires an exact ring.
    pub fn verify_basis_oracle<R: Ring>(&self, ring: &R) -> Result<BasisReport, SchemeError> {
        if !ring.is_exact() {
            return Err(RingError::InexactRing(ring.name(), "verify_basis_oracle".into()).into());
        }
        let sig = self.signature;
        let pairs: Vec<(usize, usize, usize, usize)> = (0..sig.a)
            .flat_map(|i| {
                (0..sig.b).flat_map(move |j| {
                    (0..sig.b).flat_map(move |k| (0..sig.c).map(move |l| (i, j, k, l)))
                })
            })
            .collect();
        let mut failures: Vec<BasisFailure> = pairs
            .par_iter()
            .filter_map(|&(i, j, k, l)| {
                let ea = Matrix::basis_unit(ring, sig.a, sig.b, i, j);
                let eb = Matrix::basis_unit(ring, sig.b, sig.c, k, l);
                let got = self.evaluate(ring, &ea, &eb).expect("shapes conform");
                let want = if j == k {
                    Matrix::basis_unit(ring, sig.a, sig.c, i, l)
                } else {
                    Matrix::zero(ring, sig.a, sig.c)
                };
                let residual = got.sub(ring, &want).expect("same shape");
                if residual.entries().all(|(_, _, v)| ring.is_zero(v)) {
                    None
                } else {
                    Some(BasisFailure {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        l: l + 1,
                        residual: crate::matrix::serialize_matrix(ring, &residual),
                    })
                }
            })
            .collect();
        failures.sort_by_key(|f| (f.i, f.j, f.k, f.l));
        Ok(BasisReport {
            total: pairs.len(),
            failures,
        })
    }

    /// Symbolic proof: the Brent equations
    /// `sum_rho alpha[i,j] * beta[k,l] * gamma[m,n] = delta_jk delta_im delta_ln`
    /// as identities of Laurent polynomials in `L` (no sampling).
    pub fn verify_brent(&self) -> BrentReport {
        let sig = self.signature;
        let (a, b, c) = (sig.a, sig.b, sig.c);
        let mut tensor = vec![LaurentCoeff::zero(); a * b * b * c * a * c];
        let flat = |i: usize, j: usize, k: usize, l: usize, m: usize, n: usize| {
            ((((i * b + j) * b + k) * c + l) * a + m) * c + n
        };
        for p in &self.products {
            for (i, j, va) in p.alpha.entries() {
                if va.is_zero() {
                    continue;
                }
                for (k, l, vb) in p.beta.entries() {
                    if vb.is_zero() {
                        continue;
                    }
                    let ab = va.mul(vb);
                    for (m, n, vc) in p.gamma.entries() {
                        if vc.is_zero() {
                            continue;
                        }
                        let t = &mut tensor[flat(i, j, k, l, m, n)];
                        *t = t.add(&ab.mul(vc));
                    }
                }
            }
        }
        let one = LaurentCoeff::one();
        let zero = LaurentCoeff::zero();
        let mut failures = Vec::new();
        for i in 0..a {
            for j in 0..b {
                for k in 0..b {
                    for l in 0..c {
                        for m in 0..a {
                            for n in 0..c {
                                let got = &tensor[flat(i, j, k, l, m, n)];
                                let want = if j == k && i == m && l == n { &one } else { &zero };
                                let residual = got.sub(want);
                                if !residual.is_zero() {
                                    failures.push(BrentFailure {
                                        indices: (i + 1, j + 1, k + 1, l + 1, m + 1, n + 1),
                                        residual,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        BrentReport {
            total: a * b * b * c * a * c,
            failures,
        }
    }

    /// Numeric Brent check over `F_p` at the given `L` values; sound up to
    /// polynomial identity testing, used where full symbolic expansion of a
    /// large composite would be wasteful.
    pub fn verify_brent_sampled(&self, p: u64, ells: &[u64]) -> Result<BrentSampledReport, SchemeError> {
        let sig = self.signature;
        let (a, b, c) = (sig.a, sig.b, sig.c);
        let flat = |i: usize, j: usize, k: usize, l: usize, m: usize, n: usize| {
            ((((i * b + j) * b + k) * c + l) * a + m) * c + n
        };
        let mut failures = 0usize;
        for &ell in ells {
            let ring = PrimeField::new(p, BigRational::from_integer(ell.into()))?;
            let mut tensor = vec![0u64; a * b * b * c * a * c];
            for prod in &self.products {
                let nz = |mat: &Matrix<LaurentCoeff>| -> Vec<(usize, usize, u64)> {
                    mat.entries()
                        .filter(|(_, _, v)| !v.is_zero())
                        .map(|(i, j, v)| (i, j, instantiate(v, &ring)))
                        .collect()
                };
                let (alphas, betas, gammas) = (nz(&prod.alpha), nz(&prod.beta), nz(&prod.gamma));
                for &(i, j, va) in &alphas {
                    for &(k, l, vb) in &betas {
                        let ab = ring.mul(&va, &vb);
                        for &(m, n, vc) in &gammas {
                            let t = &mut tensor[flat(i, j, k, l, m, n)];
                            *t = ring.add(t, &ring.mul(&ab, &vc));
                        }
                    }
                }
            }
            for i in 0..a {
                for j in 0..b {
                    for k in 0..b {
                        for l in 0..c {
                            for m in 0..a {
                                for n in 0..c {
                                    let want = u64::from(j == k && i == m && l == n);
                                    if tensor[flat(i, j, k, l, m, n)] != want {
                                        failures += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(BrentSampledReport {
            identities: a * b * b * c * a * c,
            samples: ells.len(),
            failures,
        })
    }
}

fn linear_form<R: Ring>(ring: &R, coeffs: &Matrix<LaurentCoeff>, x: &Matrix<R::Elem>) -> R::Elem {
    let mut acc = ring.zero();
    for (i, j, c) in coeffs.entries() {
        if c.is_zero() {
            continue;
        }
        acc = ring.add(&acc, &ring.mul(&instantiate(c, ring), x.get(i, j)));
    }
    acc
}

#[derive(Clone, Debug)]
pub struct BasisFailure {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct BasisReport {
    pub total: usize,
    pub failures: Vec<BasisFailure>,
}

impl BasisReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct BrentFailure {
    /// 1-based (i, j, k, l, m, n).
    pub indices: (usize, usize, usize, usize, usize, usize),
    pub residual: LaurentCoeff,
}

#[derive(Clone, Debug)]
pub struct BrentReport {
    pub total: usize,
    pub failures: Vec<BrentFailure>,
}

impl BrentReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct BrentSampledReport {
    pub identities: usize,
    pub samples: usize,
    pub failures: usize,
}

impl BrentSampledReport {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

/// Canonical, deterministic serialization: products in stored order, matrix
/// entries row-major, Laurent terms by ascending exponent.
pub fn serialize_scheme(scheme: &BilinearScheme) -> String {
    let sig = scheme.signature;
    let mut out = String::new();
    let _ = writeln!(out, "FMMA {} {} {} {}", sig.a, sig.b, sig.c, sig.r);
    let _ = writeln!(out, "name: {}", scheme.name);
    let _ = writeln!(out, "provenance: {}", scheme.provenance);
    for (idx, p) in scheme.products.iter().enumerate() {
        let _ = writeln!(out, "product {}", idx + 1);
        for (label, m) in [("alpha", &p.alpha), ("beta", &p.beta), ("gamma", &p.gamma)] {
            let _ = writeln!(out, "{label}");
            let _ = writeln!(out, "{} {}", m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if j > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "{}", m.get(i, j));
                }
                out.push('\n');
            }
        }
    }
    out
}

pub fn parse_scheme(input: &str) -> Result<BilinearScheme, SchemeError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    let err = |line: usize, msg: String| SchemeError::Parse { line, msg };

    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let sig = match toks.as_slice() {
        ["FMMA", a, b, c, r] => {
            let parse = |s: &str| -> Result<usize, SchemeError> {
                s.parse()
                    .map_err(|_| err(hline, format!("bad integer `{s}` in header")))
            };
            FmmaSignature {
                a: parse(a)?,
                b: parse(b)?,
                c: parse(c)?,
                r: parse(r)?,
            }
        }
        _ => return Err(err(hline, format!("bad header `{header}` (expected `FMMA a b c r`)"))),
    };

    let mut field = |key: &str| -> Result<String, SchemeError> {
        let (lno, l) = lines
            .next()
            .ok_or_else(|| err(0, format!("missing `{key}:` line")))?;
        l.strip_prefix(key)
            .and_then(|rest| rest.strip_prefix(':'))
            .map(|v| v.trim().to_string())
            .ok_or_else(|| err(lno, format!("expected `{key}: ...`, found `{l}`")))
    };
    let name = field("name")?;
    let provenance = field("provenance")?;

    let mut products = Vec::new();
    while let Some(&(lno, l)) = lines.peek() {
        let Some(num) = l.strip_prefix("product ") else {
            return Err(err(lno, format!("expected `product <n>`, found `{l}`")));
        };
        let expected = products.len() + 1;
        if num.trim().parse::<usize>() != Ok(expected) {
            return Err(err(lno, format!("expected `product {expected}`, found `{l}`")));
        }
        lines.next();
        let mut mats = Vec::with_capacity(3);
        for (label, wr, wc) in [
            ("alpha", sig.a, sig.b),
            ("beta", sig.b, sig.c),
            ("gamma", sig.a, sig.c),
        ] {
            let (lno, l) = lines
                .next()
                .ok_or_else(|| err(0, format!("missing `{label}` section")))?;
            if l != label {
                return Err(err(lno, format!("expected `{label}`, found `{l}`")));
            }
            let (dlno, dims) = lines
                .next()
                .ok_or_else(|| err(0, "missing matrix dimensions".into()))?;
            let d: Vec<usize> = dims
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<_, _>>()
                .map_err(|_| err(dlno, format!("bad dimensions `{dims}`")))?;
            if d != [wr, wc] {
                return Err(err(
                    dlno,
                    format!("{label} is {dims}, expected {wr} {wc}"),
                ));
            }
            let mut rows = Vec::with_capacity(wr);
            for _ in 0..wr {
                let (rlno, row) = lines
                    .next()
                    .ok_or_else(|| err(0, format!("{label}: input ended mid-matrix")))?;
                let entries: Vec<LaurentCoeff> = row
                    .split_whitespace()
                    .map(LaurentCoeff::parse)
                    .collect::<Result<_, _>>()
                    .map_err(|e| err(rlno, e.to_string()))?;
                if entries.len() != wc {
                    return Err(err(
                        rlno,
                        format!("{label}: expected {wc} entries, found {}", entries.len()),
                    ));
                }
                rows.push(entries);
            }
            mats.push(Matrix::from_rows(rows)?);
        }
        let gamma = mats.pop().unwrap();
        let beta = mats.pop().unwrap();
        let alpha = mats.pop().unwrap();
        products.push(ProductTriple { alpha, beta, gamma });
    }
    BilinearScheme::new(sig, products, name, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RationalField;
    use num_bigint::BigInt;
    use num_traits::One;

    fn lc(n: i64) -> LaurentCoeff {
        LaurentCoeff::from_int(n)
    }

    fn trivial_1x1x1() -> BilinearScheme {
        BilinearScheme::new(
            FmmaSignature { a: 1, b: 1, c: 1, r: 1 },
            vec![ProductTriple {
                alpha: Matrix::from_rows(vec![vec![lc(1)]]).unwrap(),
                beta: Matrix::from_rows(vec![vec![lc(1)]]).unwrap(),
                gamma: Matrix::from_rows(vec![vec![lc(1)]]).unwrap(),
            }],
            "scalar",
            "test",
        )
        .unwrap()
    }

    #[test]
    fn scalar_scheme_passes_brent() {
        let report = trivial_1x1x1().verify_brent();
        assert!(report.pass());
        assert_eq!(report.total, 1);
    }

    #[test]
    fn empty_scheme_fails_brent_at_the_single_identity() {
        let s = BilinearScheme::new(
            FmmaSignature { a: 1, b: 1, c: 1, r: 0 },
            vec![],
            "empty",
            "test",
        )
        .unwrap();
        let report = s.verify_brent();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].indices, (1, 1, 1, 1, 1, 1));
    }

    #[test]
    fn rank_mismatch_message() {
        let err = BilinearScheme::new(
            FmmaSignature { a: 1, b: 1, c: 1, r: 7 },
            vec![],
            "bad",
            "test",
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "expected 7 products, found 0");
    }

    #[test]
    fn zero_factor_rejected() {
        let err = BilinearScheme::new(
            FmmaSignature { a: 1, b: 1, c: 1, r: 1 },
            vec![ProductTriple {
                alpha: Matrix::from_rows(vec![vec![lc(0)]]).unwrap(),
                beta: Matrix::from_rows(vec![vec![lc(1)]]).unwrap(),
                gamma: Matrix::from_rows(vec![vec![lc(1)]]).unwrap(),
            }],
            "bad",
            "test",
        )
        .unwrap_err();
        assert!(matches!(err, SchemeError::ZeroFactor { index: 1, which: "alpha" }));
    }

    #[test]
    fn out_of_range_exponent_rejected() {
        let err = BilinearScheme::new(
            FmmaSignature { a: 1, b: 1, c: 1, r: 1 },
            vec![ProductTriple {
                alpha: Matrix::from_rows(vec![vec![LaurentCoeff::term(BigInt::one(), 5)]]).unwrap(),
                beta: Matrix::from_rows(vec![vec![lc(1)]]).unwrap(),
                gamma: Matrix::from_rows(vec![vec![lc(1)]]).unwrap(),
            }],
            "bad",
            "test",
        )
        .unwrap_err();
        assert!(err.to_string().contains("exponent 5"), "{err}");
    }

    #[test]
    fn round_trip_trivial_scheme() {
        let s = trivial_1x1x1();
        let text = serialize_scheme(&s);
        let back = parse_scheme(&text).unwrap();
        assert_eq!(back, s);
        assert!(back.verify_brent().pass());
    }

    #[test]
    fn basis_oracle_on_scalar_scheme() {
        let ring = RationalField::new(BigRational::one()).unwrap();
        let report = trivial_1x1x1().verify_basis_oracle(&ring).unwrap();
        assert!(report.pass());
        assert_eq!(report.total, 1);
    }

    #[test]
    fn inexact_ring_rejected_by_oracle() {
        let ring = crate::ring::F64Ring::new(1.0).unwrap();
        assert!(trivial_1x1x1().verify_basis_oracle(&ring).is_err());
    }
}
