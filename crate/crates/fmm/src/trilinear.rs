//! Sparse trilinear-form algebra over the parameters `L` and `j`.
//!
//! A trilinear form is a polynomial in the formal variables `a_ij`, `b_kl`,
//! `c_mn` each of whose monomials contains exactly one variable of each
//! letter. A bilinear scheme of rank `r` for `<a,b,c>` is exact precisely
//! when its expanded trilinear form equals the matrix-multiplication tensor
//! `sum a_ij b_jk c_ik`. This module also verifies the four-into-two
//! factorization of parameterized trilinear terms that saves two bilinear
//! products in the 5x5x5 construction.

use crate::ring::LaurentCoeff;
use crate::scheme::BilinearScheme;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact polynomial in the two parameters `L` (Laurent) and `j` (ordinary),
/// with rational coefficients. Canonical: no zero coefficients stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamPoly {
    /// (L exponent, j degree) -> coefficient
    terms: BTreeMap<(i32, u32), BigRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coeff: BigRational, ell_exp: i32, j_deg: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((ell_exp, j_deg), coeff);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::term(BigRational::from_integer(n.into()), 0, 0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The parameter `j`.
    pub fn jay() -> Self {
        Self::term(BigRational::one(), 0, 1)
    }

    pub fn from_laurent(c: &LaurentCoeff) -> Self {
        let mut out = Self::zero();
        for (e, coeff) in c.terms() {
            out = out.add(&Self::term(BigRational::from_integer(coeff.clone()), e, 0));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        Self { terms }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(i32, u32), BigRational> = BTreeMap::new();
        for ((e1, d1), c1) in &self.terms {
            for ((e2, d2), c2) in &other.terms {
                let entry = terms
                    .entry((e1 + e2, d1 + d2))
                    .or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    /// Substitute a rational value for `j` (`L` stays symbolic).
    pub fn eval_j(&self, j: &BigRational) -> Self {
        let mut out = Self::zero();
        for ((e, d), c) in &self.terms {
            let mut v = c.clone();
            for _ in 0..*d {
                v *= j;
            }
            out = out.add(&Self::term(v, *e, 0));
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((e, d), c) in &self.terms {
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let mag = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (*e == 0 && *d == 0) {
                parts.push(if mag.denom().is_one() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                });
            }
            match e {
                0 => {}
                1 => parts.push("L".into()),
                _ => parts.push(format!("L^{e}")),
            }
            match d {
                0 => {}
                1 => parts.push("j".into()),
                _ => parts.push(format!("j^{d}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// A monomial: one a-variable, one b-variable, one c-variable (1-based
/// index pairs).
pub type MonoKey = ((u8, u8), (u8, u8), (u8, u8));

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrilinearForm {
    terms: BTreeMap<MonoKey, ParamPoly>,
}

/// A formal linear combination of same-letter variables, e.g.
/// `j*(a55 - a51)`: building block for trilinear products.
pub type LinearForm = Vec<((u8, u8), ParamPoly)>;

impl TrilinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, key: MonoKey, coeff: &ParamPoly) {
        let entry = self.terms.entry(key).or_default();
        *entry = entry.add(coeff);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, &c.neg());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonoKey, &ParamPoly)> {
        self.terms.iter()
    }

    /// Expand `(a-form) * (b-form) * (c-form)` into monomials.
    pub fn from_product(a: &LinearForm, b: &LinearForm, c: &LinearForm) -> Self {
        let mut out = Self::zero();
        for (av, ac) in a {
            for (bv, bc) in b {
                let ab = ac.mul(bc);
                for (cv, cc) in c {
                    out.add_term((*av, *bv, *cv), &ab.mul(cc));
                }
            }
        }
        out
    }

    /// Substitute a rational value for `j` in every coefficient.
    pub fn eval_j(&self, j: &BigRational) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, &c.eval_j(j));
        }
        out
    }
}

impl fmt::Display for TrilinearForm {
    /// Debug dump: one sorted monomial per line,
    /// `coeff * a(i,j)*b(k,l)*c(m,n)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((a, b, c), coeff) in &self.terms {
            writeln!(
                f,
                "{} * a({},{})*b({},{})*c({},{})",
                coeff, a.0, a.1, b.0, b.1, c.0, c.1
            )?;
        }
        Ok(())
    }
}

/// Expand a scheme into its trilinear form:
/// `sum_rho (sum alpha a_ij)(sum beta b_kl)(sum gamma c_mn)`.
pub fn scheme_to_trilinear(scheme: &BilinearScheme) -> TrilinearForm {
    let mut out = TrilinearForm::zero();
    for p in scheme.products() {
        let lift = |m: &crate::matrix::Matrix<LaurentCoeff>| -> LinearForm {
            m.entries()
                .filter(|(_, _, v)| !v.is_zero())
                .map(|(i, j, v)| (((i + 1) as u8, (j + 1) as u8), ParamPoly::from_laurent(v)))
                .collect()
        };
        out = out.add(&TrilinearForm::from_product(
            &lift(&p.alpha),
            &lift(&p.beta),
            &lift(&p.gamma),
        ));
    }
    out
}

/// The matrix-multiplication tensor `<a,b,c>`: `sum a_ij b_jk c_ik`, with
/// unit coefficients; exactly `a*b*c` terms.
pub fn target_tensor(a: usize, b: usize, c: usize) -> TrilinearForm {
    let mut out = TrilinearForm::zero();
    let one = ParamPoly::one();
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                out.add_term(
                    (
                        (i as u8, j as u8),
                        (j as u8, k as u8),
                        (i as u8, k as u8),
                    ),
                    &one,
                );
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct FactorizationReport {
    pub lhs_products: usize,
    pub rhs_products: usize,
    /// LHS minus RHS; empty iff the identity holds.
    pub difference: TrilinearForm,
}

impl FactorizationReport {
    pub fn pass(&self) -> bool {
        self.difference.is_zero()
    }
}

fn var(i: u8, j: u8, coeff: ParamPoly) -> ((u8, u8), ParamPoly) {
    ((i, j), coeff)
}

/// The four parameterized trilinear terms whose sum collapses to two
/// factorized products (symbolically in `j`), the source of the 101 -> 99
/// saving.
pub fn factorization_sides() -> (TrilinearForm, TrilinearForm, usize, usize) {
    let j = ParamPoly::jay();
    let one = ParamPoly::one();
    let one_minus_j = one.sub(&j);
    let one_minus_2j = one.sub(&j).sub(&j);

    let b54: LinearForm = vec![var(5, 4, one.clone())];
    let b52_plus_b54: LinearForm = vec![var(5, 2, one.clone()), var(5, 4, one.clone())];
    let c54_minus_c52: LinearForm = vec![var(5, 4, one.clone()), var(5, 2, one.neg())];
    let c52: LinearForm = vec![var(5, 2, one.clone())];

    let lhs_terms = [
        // j*(a55 - a51 - a52 - a35) * b54 * (c54 - c52)
        TrilinearForm::from_product(
            &vec![
                var(5, 5, j.clone()),
                var(5, 1, j.neg()),
                var(5, 2, j.neg()),
                var(3, 5, j.neg()),
            ],
            &b54,
            &c54_minus_c52,
        ),
        // j*(a55 - a53 - a54 - a15) * (b52 + b54) * c52
        TrilinearForm::from_product(
            &vec![
                var(5, 5, j.clone()),
                var(5, 3, j.neg()),
                var(5, 4, j.neg()),
                var(1, 5, j.neg()),
            ],
            &b52_plus_b54,
            &c52,
        ),
        // (1-j)*(a52 - a45) * b54 * (c54 - c52)
        TrilinearForm::from_product(
            &vec![var(5, 2, one_minus_j.clone()), var(4, 5, one_minus_j.neg())],
            &b54,
            &c54_minus_c52,
        ),
        // (1-j)*(a54 - a25) * (b52 + b54) * c52
        TrilinearForm::from_product(
            &vec![var(5, 4, one_minus_j.clone()), var(2, 5, one_minus_j.neg())],
            &b52_plus_b54,
            &c52,
        ),
    ];
    let rhs_terms = [
        // ((a55 - a51 - a35)*j + (1-2j)*a52 - (1-j)*a45) * b54 * (c54 - c52)
        TrilinearForm::from_product(
            &vec![
                var(5, 5, j.clone()),
                var(5, 1, j.neg()),
                var(3, 5, j.neg()),
                var(5, 2, one_minus_2j.clone()),
                var(4, 5, one_minus_j.neg()),
            ],
            &b54,
            &c54_minus_c52,
        ),
        // ((a55 - a53 - a15)*j + (1-2j)*a54 - (1-j)*a25) * (b52 + b54) * c52
        TrilinearForm::from_product(
            &vec![
                var(5, 5, j.clone()),
                var(5, 3, j.neg()),
                var(1, 5, j.neg()),
                var(5, 4, one_minus_2j),
                var(2, 5, one_minus_j.neg()),
            ],
            &b52_plus_b54,
            &c52,
        ),
    ];
    let lhs = lhs_terms.iter().fold(TrilinearForm::zero(), |s, t| s.add(t));
    let rhs = rhs_terms.iter().fold(TrilinearForm::zero(), |s, t| s.add(t));
    (lhs, rhs, lhs_terms.len(), rhs_terms.len())
}

/// Check the four-term and two-term sides are identically equal as
/// polynomials in the a/b/c variables and in `j` (never sampled).
pub fn verify_factorization_identity() -> FactorizationReport {
    let (lhs, rhs, lhs_products, rhs_products) = factorization_sides();
    FactorizationReport {
        lhs_products,
        rhs_products,
        difference: lhs.sub(&rhs),
    }
}
