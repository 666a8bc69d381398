//! Linear algebra over truncated Laurent series in `u = v^-1`, modulo a prime.
//!
//! A windowed vector of the periodic module only knows its coefficients above
//! `v^-floor`, i.e. as series in `u` modulo `u^floor`. [`Series`] carries that
//! absolute precision through every operation, and [`SeriesSystem`] eliminates
//! with pivots of least `u`-valuation, so precision is lost only by the pivot
//! valuations. Working modulo a prime keeps coefficients small; a pivot that is
//! nonzero mod `p` is nonzero over `Z`, so ranks found here are lower bounds for
//! the rank over `Q((u))`. Candidate solutions are lifted to symmetric integer
//! representatives and must be checked exactly by the caller.

use super::LaurentPoly;

/// The Mersenne prime `2^61 - 1`.
pub const MODULUS: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    assert!(a != 0, "inverse of zero mod p");
    powmod(a, MODULUS - 2)
}

fn reduce(x: i64) -> u64 {
    x.rem_euclid(MODULUS as i64) as u64
}

fn lift(x: u64) -> i64 {
    if x > MODULUS / 2 {
        x as i64 - MODULUS as i64
    } else {
        x as i64
    }
}

/// `sum_{low <= k < prec} c_k u^k`, exact modulo `u^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    low: i32,
    coeffs: Vec<u64>,
    prec: i32,
}

impl Series {
    /// The zero series known modulo `u^prec`.
    pub fn zero(prec: i32) -> Self {
        Series { low: prec, coeffs: Vec::new(), prec }
    }

    /// Reads a Laurent polynomial whose terms are exact above `v^-floor`.
    pub fn from_laurent(p: &LaurentPoly, floor: i32) -> Self {
        let Some(deg) = p.degree() else { return Self::zero(floor) };
        let low = -deg;
        if low >= floor {
            return Self::zero(floor);
        }
        let mut coeffs = vec![0; (floor - low) as usize];
        for (e, c) in p.terms() {
            let k = -e;
            if k < floor {
                coeffs[(k - low) as usize] = reduce(c);
            }
        }
        Series { low, coeffs, prec: floor }.normalized()
    }

    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = self.prec;
        }
        self
    }

    pub fn precision(&self) -> i32 {
        self.prec
    }

    /// Least exponent with a known nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        (!self.coeffs.is_empty()).then_some(self.low)
    }

    /// Valuation, or the precision when no coefficient is known to be nonzero.
    fn val_or_prec(&self) -> i32 {
        self.valuation().unwrap_or(self.prec)
    }

    fn coeff(&self, k: i32) -> u64 {
        if k < self.low {
            return 0;
        }
        self.coeffs.get((k - self.low) as usize).copied().unwrap_or(0)
    }

    fn with_terms(low: i32, prec: i32, f: impl Fn(i32) -> u64) -> Self {
        if low >= prec {
            return Self::zero(prec);
        }
        let coeffs = (low..prec).map(f).collect();
        Series { low, coeffs, prec }.normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let low = self.low.min(o.low);
        Self::with_terms(low, prec, |k| submod(self.coeff(k), o.coeff(k)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (va, vb) = (self.val_or_prec(), o.val_or_prec());
        let prec = (self.prec + vb).min(o.prec + va);
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Self::zero(prec);
        }
        let low = va + vb;
        let n = (prec - low).max(0) as usize;
        let mut c = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= n {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = addmod(c[i + j], mulmod(a, b));
            }
        }
        Series { low, coeffs: c, prec }.normalized()
    }

    /// `self / o`; `o` must have a known nonzero coefficient.
    pub fn div(&self, o: &Self) -> Self {
        let kb = o.valuation().expect("division by a series not known to be nonzero");
        let va = self.val_or_prec();
        let prec = (self.prec - kb).min(va + o.prec - 2 * kb);
        if self.coeffs.is_empty() {
            return Self::zero(prec);
        }
        let low = va - kb;
        let n = (prec - low).max(0) as usize;
        let inv = invmod(o.coeffs[0]);
        let mut rem: Vec<u64> = (0..n).map(|i| self.coeffs.get(i).copied().unwrap_or(0)).collect();
        let mut q = vec![0u64; n];
        for i in 0..n {
            let t = mulmod(rem[i], inv);
            q[i] = t;
            if t == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().skip(1) {
                if i + j >= n {
                    break;
                }
                rem[i + j] = submod(rem[i + j], mulmod(t, b));
            }
        }
        Series { low, coeffs: q, prec }.normalized()
    }

    /// Symmetric integer lift of the known part, as a polynomial in `v`.
    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.coeffs.iter().enumerate().map(|(i, &c)| (-(self.low + i as i32), lift(c))),
        )
    }
}

/// Forward elimination of a matrix of series, replayable on right-hand sides.
#[derive(Clone, Debug)]
pub struct SeriesSystem {
    /// Reduced rows in pivot order, then the remaining rows.
    m: Vec<Vec<Series>>,
    perm: Vec<usize>,
    pivots: Vec<usize>,
    /// For pivot step `t`: the row position swapped into place and the multipliers used below it.
    ops: Vec<(usize, Vec<(usize, Series)>)>,
}

impl SeriesSystem {
    /// Eliminates `a` (rows by columns), choosing pivots of least valuation.
    pub fn new(mut m: Vec<Vec<Series>>) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut perm: Vec<usize> = (0..rows).collect();
        let mut pivots = Vec::new();
        let mut ops = Vec::new();
        for c in 0..cols {
            let r = pivots.len();
            if r == rows {
                break;
            }
            let Some(p) = (r..rows)
                .filter_map(|i| m[i][c].valuation().map(|v| (v, i)))
                .min()
                .map(|(_, i)| i)
            else {
                continue;
            };
            m.swap(r, p);
            perm.swap(r, p);
            let piv_row = m[r].clone();
            let mut mults = Vec::new();
            for (j, row) in m.iter_mut().enumerate().skip(r + 1) {
                if row[c].valuation().is_none() {
                    continue;
                }
                let f = row[c].div(&piv_row[c]);
                for k in c + 1..cols {
                    row[k] = row[k].sub(&f.mul(&piv_row[k]));
                }
                let junk = row[c].sub(&f.mul(&piv_row[c]));
                row[c] = Series::zero(junk.prec);
                mults.push((j, f));
            }
            ops.push((p, mults));
            pivots.push(c);
        }
        SeriesSystem { m, perm, pivots, ops }
    }

    /// Number of pivots certified nonzero.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    /// Original indices of the pivot rows.
    pub fn pivot_rows(&self) -> Vec<usize> {
        self.perm[..self.pivots.len()].to_vec()
    }

    /// Solves for the pivot columns by back substitution; free columns are zero.
    pub fn solve(&self, b: &[Series]) -> Vec<Option<Series>> {
        let mut b = b.to_vec();
        for (t, (p, mults)) in self.ops.iter().enumerate() {
            b.swap(t, *p);
            for (j, f) in mults {
                b[*j] = b[*j].sub(&f.mul(&b[t]));
            }
        }
        let cols = self.m.first().map_or(0, Vec::len);
        let mut x: Vec<Option<Series>> = vec![None; cols];
        for (t, &c) in self.pivots.iter().enumerate().rev() {
            let mut acc = b[t].clone();
            for &c2 in &self.pivots[t + 1..] {
                if let Some(xc) = &x[c2] {
                    acc = acc.sub(&self.m[t][c2].mul(xc));
                }
            }
            x[c] = Some(acc.div(&self.m[t][c]));
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn series_arithmetic_round_trips() {
        // (1 - v^-1)(1 + v^-1) = 1 - v^-2
        let a = Series::from_laurent(&lp(&[(0, 1), (-1, -1)]), 10);
        let b = Series::from_laurent(&lp(&[(0, 1), (-1, 1)]), 10);
        let c = a.mul(&b);
        assert_eq!(c.to_laurent(), lp(&[(0, 1), (-2, -1)]));
        let q = c.div(&b);
        assert_eq!(q.to_laurent(), lp(&[(0, 1), (-1, -1)]));
        assert_eq!(q.precision(), 10);
    }

    #[test]
    fn geometric_series_from_division() {
        let one = Series::from_laurent(&LaurentPoly::one(), 8);
        let d = Series::from_laurent(&lp(&[(0, 1), (-1, 1)]), 8);
        let q = one.div(&d);
        let expect = LaurentPoly::from_terms((0..8).map(|k| (-k, if k % 2 == 0 { 1 } else { -1 })));
        assert_eq!(q.to_laurent(), expect);
    }

    #[test]
    fn division_by_high_valuation_costs_precision() {
        let a = Series::from_laurent(&LaurentPoly::one(), 10);
        let b = Series::from_laurent(&lp(&[(-3, 1)]), 10);
        let q = a.div(&b);
        assert_eq!(q.to_laurent(), lp(&[(3, 1)]));
        assert_eq!(q.precision(), 4);
    }

    #[test]
    fn solves_random_systems_with_laurent_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (rows, cols) = (6, 4);
            let a: Vec<Vec<LaurentPoly>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| lp(&[(0, rng.gen_range(-2..=2)), (-1, rng.gen_range(-2..=2)), (-3, rng.gen_range(-1..=1))]))
                        .collect()
                })
                .collect();
            let x: Vec<LaurentPoly> = (0..cols).map(|_| lp(&[(rng.gen_range(-2..=1), rng.gen_range(-3..=3))])).collect();
            let b: Vec<LaurentPoly> = a
                .iter()
                .map(|row| row.iter().zip(&x).fold(LaurentPoly::zero(), |s, (p, y)| &s + &(p * y)))
                .collect();
            let floor = 30;
            let sa: Vec<Vec<Series>> =
                a.iter().map(|r| r.iter().map(|p| Series::from_laurent(p, floor)).collect()).collect();
            let sys = SeriesSystem::new(sa);
            if sys.rank() < cols {
                continue;
            }
            let sb: Vec<Series> = b.iter().map(|p| Series::from_laurent(p, floor)).collect();
            let sol = sys.solve(&sb);
            for (s, xi) in sol.iter().zip(&x) {
                let s = s.as_ref().unwrap();
                assert!(s.precision() > 10);
                assert_eq!(s.to_laurent().keep_above(-s.precision()), xi.keep_above(-s.precision()));
            }
        }
    }

    #[test]
    fn rank_sees_dependent_columns() {
        let a = [
            vec![lp(&[(0, 1)]), lp(&[(0, 2)])],
            vec![lp(&[(-1, 1)]), lp(&[(-1, 2)])],
            vec![lp(&[(0, 3)]), lp(&[(0, 6)])],
        ];
        let sa: Vec<Vec<Series>> =
            a.iter().map(|r| r.iter().map(|p| Series::from_laurent(p, 12)).collect()).collect();
        assert_eq!(SeriesSystem::new(sa).rank(), 1);
    }
}
