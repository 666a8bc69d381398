//! Exact linear algebra over `Q(v)` by fraction-free (Bareiss) elimination.
//!
//! Rows are first multiplied by a power of `v` so every entry is an honest
//! polynomial in `Z[v]`; that never changes rank or solutions. Elimination runs
//! in Gauss-Jordan form so every pivot ends up equal to one common value `d`,
//! which makes solutions and kernel vectors readable straight off the matrix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{LaurentError, LaurentPoly};

/// Row-major matrix of Laurent polynomials.
pub type LaurentMatrix = Vec<Vec<LaurentPoly>>;

/// Polynomial in `v` with big integer coefficients, ascending, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ZPoly(Vec<BigInt>);

impl ZPoly {
    fn zero() -> Self {
        ZPoly(Vec::new())
    }

    fn one() -> Self {
        ZPoly(vec![BigInt::from(1)])
    }

    fn trimmed(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly(c)
    }

    fn from_laurent(p: &LaurentPoly, shift: i32) -> Self {
        let Some(deg) = p.degree() else { return Self::zero() };
        let mut c = vec![BigInt::zero(); (deg + shift + 1) as usize];
        for (e, x) in p.terms() {
            c[(e + shift) as usize] = BigInt::from(x);
        }
        Self::trimmed(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn spread(&self) -> usize {
        let val = self.0.iter().take_while(|x| x.is_zero()).count();
        self.0.len() - 1 - val
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::trimmed(c)
    }

    fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.0.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in o.0.iter().enumerate() {
            c[i] -= b;
        }
        Self::trimmed(c)
    }

    fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|x| -x).collect())
    }

    /// Exact quotient in `Z[v]`, `None` when `d` does not divide `self`.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.0.len() < d.0.len() {
            return None;
        }
        let mut rem = self.0.clone();
        let lead = d.0.last().unwrap();
        let mut q = vec![BigInt::zero(); self.0.len() - d.0.len() + 1];
        for k in (0..q.len()).rev() {
            let top = &rem[k + d.0.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (quo, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, x) in d.0.iter().enumerate() {
                rem[k + i] -= &quo * x;
            }
            q[k] = quo;
        }
        rem.iter().all(|x| x.is_zero()).then(|| Self::trimmed(q))
    }

    fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    fn to_laurent(&self, shift: i32) -> Result<LaurentPoly, LaurentError> {
        let mut c = Vec::with_capacity(self.0.len());
        for x in &self.0 {
            c.push(x.to_i64().ok_or(LaurentError::CoefficientOverflow)?);
        }
        Ok(LaurentPoly::from_dense(-shift, c))
    }
}

/// Result of a fraction-free Gauss-Jordan sweep.
struct Echelon {
    m: Vec<Vec<ZPoly>>,
    pivots: Vec<usize>,
    d: ZPoly,
    /// Original index of each row after swapping.
    perm: Vec<usize>,
    odd_swaps: bool,
}

fn to_zmatrix(a: &[Vec<LaurentPoly>]) -> Vec<Vec<ZPoly>> {
    a.iter()
        .map(|row| {
            let shift = row.iter().filter_map(|p| p.valuation()).min().unwrap_or(0);
            row.iter().map(|p| ZPoly::from_laurent(p, -shift)).collect()
        })
        .collect()
}

/// Eliminates on columns `0..pivot_cols`; further columns ride along.
fn eliminate(mut m: Vec<Vec<ZPoly>>, pivot_cols: usize) -> Echelon {
    let rows = m.len();
    let mut prev = ZPoly::one();
    let mut pivots = Vec::new();
    let mut perm: Vec<usize> = (0..rows).collect();
    let mut odd_swaps = false;
    for c in 0..pivot_cols {
        let r = pivots.len();
        if r == rows {
            break;
        }
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c].spread(), i))
        else {
            continue;
        };
        if p != r {
            m.swap(r, p);
            perm.swap(r, p);
            odd_swaps = !odd_swaps;
        }
        let piv = m[r][c].clone();
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            for (j, x) in row.iter_mut().enumerate() {
                if j == c {
                    continue;
                }
                let num = piv.mul(x).sub(&factor.mul(&pivot_row[j]));
                *x = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination produced an inexact quotient");
            }
            row[c] = ZPoly::zero();
        }
        prev = piv;
        pivots.push(c);
    }
    Echelon { m, pivots, d: prev, perm, odd_swaps }
}

/// Rank over `Q(v)`.
pub fn rank(a: &[Vec<LaurentPoly>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    eliminate(to_zmatrix(a), cols).pivots.len()
}

/// Row and column indices of a nonsingular maximal minor.
pub fn rank_profile(a: &[Vec<LaurentPoly>]) -> (Vec<usize>, Vec<usize>) {
    let cols = a.first().map_or(0, Vec::len);
    let e = eliminate(to_zmatrix(a), cols);
    let mut rows: Vec<usize> = e.perm[..e.pivots.len()].to_vec();
    rows.sort_unstable();
    (rows, e.pivots)
}

/// Determinant of a square matrix.
pub fn determinant(a: &[Vec<LaurentPoly>]) -> Result<LaurentPoly, LaurentError> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "determinant needs a square matrix");
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let shift: i32 = a.iter().map(|row| row.iter().filter_map(|p| p.valuation()).min().unwrap_or(0)).sum();
    let e = eliminate(to_zmatrix(a), n);
    if e.pivots.len() < n {
        return Ok(LaurentPoly::zero());
    }
    let d = e.d.to_laurent(0)?.shift(shift);
    Ok(if e.odd_swaps { -d } else { d })
}

/// `A^-1 = num / den` for a nonsingular square `A`, kept with big coefficients.
#[derive(Clone, Debug)]
pub struct RationalInverse {
    num: Vec<Vec<ZPoly>>,
    den: ZPoly,
    /// Column `j` of `num` is in units of `v^col_shift[j]`.
    col_shift: Vec<i32>,
}

impl RationalInverse {
    /// Inverts `a`, returning `None` when it is singular.
    pub fn new(a: &[Vec<LaurentPoly>]) -> Result<Option<Self>, LaurentError> {
        let n = a.len();
        assert!(a.iter().all(|r| r.len() == n), "inverse needs a square matrix");
        // Rows are rescaled by v^-shift so that S A is polynomial; (S A)^-1 S = A^-1.
        let shifts: Vec<i32> =
            a.iter().map(|row| row.iter().filter_map(|p| p.valuation()).min().unwrap_or(0)).collect();
        let aug: Vec<Vec<ZPoly>> = a
            .iter()
            .zip(&shifts)
            .enumerate()
            .map(|(i, (row, &sh))| {
                let mut r: Vec<ZPoly> = row.iter().map(|p| ZPoly::from_laurent(p, -sh)).collect();
                r.extend((0..n).map(|j| if i == j { ZPoly::one() } else { ZPoly::zero() }));
                r
            })
            .collect();
        let e = eliminate(aug, n);
        if e.pivots.len() < n {
            return Ok(None);
        }
        let num = e.m.iter().map(|row| row[n..].to_vec()).collect();
        Ok(Some(RationalInverse { num, den: e.d, col_shift: shifts.iter().map(|s| -s).collect() }))
    }

    /// The common denominator as a Laurent polynomial.
    pub fn denominator(&self) -> Result<LaurentPoly, LaurentError> {
        self.den.to_laurent(0)
    }

    /// Expands each coordinate of `A^-1 b` as a series in `v^-1`, keeping exponents `> bound`.
    ///
    /// Returns `(y, c)` with `A^-1 b = y / c` up to the discarded tail; `c` is a positive integer.
    pub fn series_solve(&self, b: &[LaurentPoly], bound: i32) -> Result<(Vec<LaurentPoly>, i64), LaurentError> {
        let mut out: Vec<(i32, Vec<BigRational>)> = Vec::with_capacity(self.num.len());
        let dtop = self.den.0.len() as i32 - 1;
        let lead = BigRational::from_integer(self.den.0.last().cloned().unwrap_or_else(|| BigInt::from(1)));
        for row in &self.num {
            // numerator as a Laurent polynomial with big coefficients: (low, coeffs)
            let mut acc: BTreeMap<i32, BigInt> = Default::default();
            for ((p, bj), &sh) in row.iter().zip(b).zip(&self.col_shift) {
                if p.is_zero() || bj.is_zero() {
                    continue;
                }
                for (i, x) in p.0.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (e, c) in bj.terms() {
                        *acc.entry(i as i32 + e + sh).or_insert_with(BigInt::zero) += x * BigInt::from(c);
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            let Some((&top, _)) = acc.iter().next_back() else {
                out.push((0, Vec::new()));
                continue;
            };
            // Long division from the top: quotient exponents top - dtop, top - dtop - 1, ...
            let qtop = top - dtop;
            let mut rem: BTreeMap<i32, BigRational> =
                acc.into_iter().map(|(e, c)| (e, BigRational::from_integer(c))).collect();
            let mut q = Vec::new();
            let mut e = qtop;
            while e > bound {
                let t = rem.get(&(e + dtop)).cloned().unwrap_or_else(BigRational::zero) / &lead;
                if !t.is_zero() {
                    for (k, x) in self.den.0.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        *rem.entry(e + k as i32).or_insert_with(BigRational::zero) -=
                            &t * BigRational::from_integer(x.clone());
                    }
                }
                q.push(t);
                e -= 1;
            }
            out.push((qtop, q));
        }
        let c = out
            .iter()
            .flat_map(|(_, q)| q.iter().map(|x| x.denom().clone()))
            .fold(BigInt::from(1), |acc, d| acc.lcm(&d));
        let ci = c.to_i64().ok_or(LaurentError::CoefficientOverflow)?;
        let ys = out
            .into_iter()
            .map(|(qtop, q)| {
                let terms = q
                    .iter()
                    .enumerate()
                    .map(|(k, x)| {
                        let y = (x * BigRational::from_integer(c.clone())).to_integer();
                        Ok((qtop - k as i32, y.to_i64().ok_or(LaurentError::CoefficientOverflow)?))
                    })
                    .collect::<Result<Vec<_>, LaurentError>>()?;
                Ok(LaurentPoly::from_terms(terms))
            })
            .collect::<Result<Vec<_>, LaurentError>>()?;
        Ok((ys, ci))
    }
}

/// Rank over `Q` after substituting the given value for `v`.
pub fn rank_at(a: &[Vec<LaurentPoly>], v: &BigRational) -> Result<usize, LaurentError> {
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|row| row.iter().map(|p| p.specialize(v)).collect())
        .collect::<Result<_, _>>()?;
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        let pivot_row: Vec<BigRational> = m[r].iter().map(|x| x * &inv).collect();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        m[r] = pivot_row;
        r += 1;
        if r == m.len() {
            break;
        }
    }
    Ok(r)
}

/// Solution of `A x = b` over `Q(v)`: `x_i = numerators[i] / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub numerators: Vec<LaurentPoly>,
    pub denominator: LaurentPoly,
}

impl Solution {
    /// The coordinates as Laurent polynomials, when every quotient is exact in `Z[v, v^-1]`.
    pub fn as_laurent(&self) -> Option<Vec<LaurentPoly>> {
        let dval = self.denominator.valuation()?;
        let d = ZPoly::from_laurent(&self.denominator, -dval);
        self.numerators
            .iter()
            .map(|n| {
                let nval = n.valuation().unwrap_or(0);
                let q = ZPoly::from_laurent(n, -nval).div_exact(&d)?;
                q.to_laurent(dval - nval).ok()
            })
            .collect()
    }
}

/// Solves `A x = b`; `Ok(None)` when the system is inconsistent. Free variables are set to zero.
pub fn solve(a: &[Vec<LaurentPoly>], b: &[LaurentPoly]) -> Result<Option<Solution>, LaurentError> {
    assert_eq!(a.len(), b.len(), "right-hand side length must match the row count");
    let n = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<LaurentPoly>> = a
        .iter()
        .zip(b)
        .map(|(row, x)| row.iter().cloned().chain(std::iter::once(x.clone())).collect())
        .collect();
    let e = eliminate(to_zmatrix(&aug), n);
    let r = e.pivots.len();
    if e.m.iter().skip(r).any(|row| !row[n].is_zero()) {
        return Ok(None);
    }
    let mut nums = vec![ZPoly::zero(); n];
    for (i, &c) in e.pivots.iter().enumerate() {
        nums[c] = e.m[i][n].clone();
    }
    let g = nums.iter().fold(e.d.content(), |g, x| g.gcd(&x.content()));
    let d = if r == 0 { ZPoly::one() } else { e.d.clone() };
    let g = if r == 0 || g.is_zero() { BigInt::from(1) } else { g };
    let sign = if d.0.last().is_some_and(|x| x.is_negative()) { -g.clone() } else { g };
    let norm = |p: &ZPoly| ZPoly(p.0.iter().map(|x| x / &sign).collect());
    Ok(Some(Solution {
        numerators: nums.iter().map(|p| norm(p).to_laurent(0)).collect::<Result<_, _>>()?,
        denominator: norm(&d).to_laurent(0)?,
    }))
}

/// A basis of the right kernel `{x : A x = 0}` with polynomial entries.
pub fn nullspace(a: &[Vec<LaurentPoly>]) -> Result<Vec<Vec<LaurentPoly>>, LaurentError> {
    let n = a.first().map_or(0, Vec::len);
    let e = eliminate(to_zmatrix(a), n);
    let mut basis = Vec::new();
    for f in (0..n).filter(|c| !e.pivots.contains(c)) {
        let mut x = vec![ZPoly::zero(); n];
        x[f] = e.d.clone();
        for (i, &c) in e.pivots.iter().enumerate() {
            x[c] = e.m[i][f].neg();
        }
        let g = x.iter().fold(BigInt::zero(), |g, p| g.gcd(&p.content()));
        let x: Vec<LaurentPoly> = x
            .iter()
            .map(|p| ZPoly(p.0.iter().map(|c| c / &g).collect()).to_laurent(0))
            .collect::<Result<_, _>>()?;
        basis.push(x);
    }
    Ok(basis)
}
