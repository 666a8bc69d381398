//! Rank-one p-adic Schwartz calculus on `X(k) = k^2 \ {0}` for `SL_2`.
//!
//! Functions are finite combinations of box indicators `chi_{pi^a O x pi^b O}`
//! with coefficients in `Z[v, v^-1]`, where `q = v^2`. Distinct boxes are linearly
//! independent, so the sparse map of boxes is already a canonical form.
//!
//! Conventions: `SL_2(k)` acts on column vectors, the basepoint is `(1, 0)`, and
//! the Iwahori subgroup `I` consists of the integral matrices that are upper
//! triangular mod `pi`. Then `I (pi^n, 0) = pi^n O^x x pi^{n+1} O` is the orbit of
//! `A_{2n}` and `I (0, pi^n) = pi^n O x pi^n O^x` is the orbit of `A_{2n-1}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::alcove::AffineElt;
use crate::coxeter::CartanDatum;
use crate::laurent::LaurentPoly;
use crate::periodic::{PeriodicError, PeriodicModule, PeriodicVec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("p-adic calculus is only implemented in type A1, got {0}")]
    WrongType(String),
    #[error("box ({a}, {b}) is not Iwahori-invariant")]
    NotInvariant { a: i64, b: i64 },
    #[error("no affine generator s{0} in type A1")]
    BadGenerator(usize),
    #[error("valuation of a coset image is not determined by valuations alone")]
    Ambiguous,
    #[error(transparent)]
    Periodic(#[from] PeriodicError),
}

type Result<T> = std::result::Result<T, PadicError>;

fn q_pow(k: i64) -> LaurentPoly {
    LaurentPoly::v_pow(2 * k as i32)
}

/// `sum coeff * chi_{pi^a O x pi^b O}` over finitely many boxes `(a, b)`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BoxFunction {
    boxes: BTreeMap<(i64, i64), LaurentPoly>,
}

impl BoxFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `chi_{pi^a O x pi^b O}`.
    pub fn indicator(a: i64, b: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(a, b, &LaurentPoly::one());
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), LaurentPoly)>) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in terms {
            out.add_term(a, b, &c);
        }
        out
    }

    pub fn add_term(&mut self, a: i64, b: i64, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.boxes.entry((a, b)) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeff(&self, a: i64, b: i64) -> LaurentPoly {
        self.boxes.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &LaurentPoly)> {
        self.boxes.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentPoly::from(-1)))
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        Self::from_terms(self.terms().map(|(k, x)| (k, x * c)))
    }

    /// Value at a point whose coordinates have valuations `vx`, `vy` (`None` for zero).
    pub fn eval(&self, vx: Option<i64>, vy: Option<i64>) -> LaurentPoly {
        let inside = |v: Option<i64>, a: i64| v.is_none_or(|v| v >= a);
        let mut out = LaurentPoly::zero();
        for ((a, b), c) in self.terms() {
            if inside(vx, a) && inside(vy, b) {
                out += c;
            }
        }
        out
    }

    /// The first box that is not Iwahori-invariant, if any.
    pub fn non_invariant_box(&self) -> Option<(i64, i64)> {
        self.terms().map(|(k, _)| k).find(|(a, b)| b - a != 0 && b - a != 1)
    }
}

impl fmt::Debug for BoxFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|((a, b), c)| format!("({c})chi[{a},{b}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for BoxFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms().map(|((a, b), c)| (a, b, c)))
    }
}

/// Additive character of conductor `n` with normalizing constant `q^norm_exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterSpec {
    pub conductor: i64,
    pub norm_exp: i64,
}

impl CharacterSpec {
    /// Conductor one, normalized by `q`: the choice under which `Psi` intertwines.
    pub const PSI1: CharacterSpec = CharacterSpec { conductor: 1, norm_exp: 1 };
    /// Conductor zero, unnormalized: the usual choice in the literature.
    pub const PSI0: CharacterSpec = CharacterSpec { conductor: 0, norm_exp: 0 };

    pub fn new(conductor: i64, norm_exp: i64) -> Self {
        CharacterSpec { conductor, norm_exp }
    }

    /// Image box and scalar exponent of `q` for the box `(a, b)`.
    fn on_box(&self, a: i64, b: i64) -> ((i64, i64), i64) {
        ((self.conductor - b, self.conductor - a), self.norm_exp - a - b)
    }
}

/// `chi_{a,b} -> c q^{-a-b} chi_{n-b, n-a}`, from the pairing `x1 x2' - x2 x1'`
/// and `int_{pi^a O} psi_n(u x) dx = q^-a chi_{pi^{n-a} O}(u)`.
pub fn fourier(f: &BoxFunction, spec: CharacterSpec) -> BoxFunction {
    BoxFunction::from_terms(f.terms().map(|((a, b), c)| {
        let (img, e) = spec.on_box(a, b);
        (img, c * &q_pow(e))
    }))
}

/// Indicator of the Iwahori orbit attached to the rank-one alcove `A_m`.
pub fn orbit_indicator_index(m: i64) -> BoxFunction {
    let mut out = BoxFunction::zero();
    let one = LaurentPoly::one();
    let minus = LaurentPoly::from(-1);
    if m % 2 == 0 {
        let n = m / 2;
        out.add_term(n, n + 1, &one);
        out.add_term(n + 1, n + 1, &minus);
    } else {
        let n = (m + 1).div_euclid(2);
        out.add_term(n, n, &one);
        out.add_term(n, n + 1, &minus);
    }
    out
}

fn require_a1(d: &CartanDatum) -> Result<()> {
    if d.rank() == 1 {
        Ok(())
    } else {
        Err(PadicError::WrongType(d.label().to_string()))
    }
}

/// Indicator of `I x U(k)` for an element `x` of the affine Weyl group of type A1.
pub fn orbit_indicator(d: &CartanDatum, x: &AffineElt) -> Result<BoxFunction> {
    require_a1(d)?;
    Ok(orbit_indicator_index(d.rank1_index(&d.alcove(x.clone()))))
}

/// A box function known exactly above a per-box bound.
///
/// It is the image under `Psi` of a truncated vector, possibly followed by Fourier
/// transforms. An alcove `A_m` contributes `c (-v)^m` with `c` exact above `v^-floor`,
/// so the boxes it touches are exact above `v^{m - floor}`.
#[derive(Clone, Debug)]
pub struct CertifiedBoxes {
    boxes: BoxFunction,
    floor: i32,
    transforms: Vec<CharacterSpec>,
}

impl CertifiedBoxes {
    /// An exactly known function.
    pub fn exact(boxes: BoxFunction) -> Self {
        CertifiedBoxes { boxes, floor: i32::MAX, transforms: Vec::new() }
    }

    pub fn boxes(&self) -> &BoxFunction {
        &self.boxes
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    /// Coefficient terms of box `(a, b)` strictly above `v^bound` are exact; `None` means exact.
    pub fn bound(&self, a: i64, b: i64) -> Option<i64> {
        let (mut a, mut b) = (a, b);
        let mut shift = 0;
        for spec in self.transforms.iter().rev() {
            let (src_a, src_b) = (spec.conductor - b, spec.conductor - a);
            shift += 2 * spec.on_box(src_a, src_b).1;
            (a, b) = (src_a, src_b);
        }
        let top = match b - a {
            1 => 2 * a,
            0 => 2 * a - 1,
            _ => return None,
        };
        Some(top - i64::from(self.floor) + shift)
    }

    pub fn fourier(&self, spec: CharacterSpec) -> Self {
        let mut transforms = self.transforms.clone();
        transforms.push(spec);
        CertifiedBoxes { boxes: fourier(&self.boxes, spec), floor: self.floor, transforms }
    }

    /// First box where the two functions differ above both bounds.
    pub fn certified_difference(&self, other: &Self) -> Option<((i64, i64), LaurentPoly)> {
        let diff = self.boxes.sub(&other.boxes);
        let found = diff.terms().find_map(|((a, b), c)| {
            let bound = match (self.bound(a, b), other.bound(a, b)) {
                (None, None) => None,
                (x, y) => x.max(y),
            };
            let kept = match bound {
                Some(bd) => c.keep_above(i32::try_from(bd).unwrap_or(i32::MAX)),
                None => c.clone(),
            };
            (!kept.is_zero()).then_some(((a, b), kept))
        });
        found
    }

    pub fn eq_certified(&self, other: &Self) -> bool {
        self.certified_difference(other).is_none()
    }
}

/// `Psi(A_x) = (-v)^{d(A_e, A_x)} chi_{I x U(k)}`, extended linearly.
pub fn psi(pm: &PeriodicModule, m: &PeriodicVec) -> Result<CertifiedBoxes> {
    let d = pm.datum();
    require_a1(d)?;
    let base = d.base_alcove();
    let minus_v = LaurentPoly::monomial(-1, 1);
    let minus_v_inv = LaurentPoly::monomial(-1, -1);
    let mut boxes = BoxFunction::zero();
    for (a, c) in m.terms() {
        let dist = d.distance(&base, a);
        let step = if dist >= 0 { &minus_v } else { &minus_v_inv };
        let mut coeff = c.clone();
        for _ in 0..dist.unsigned_abs() {
            coeff = &coeff * step;
        }
        boxes = boxes.add(&orbit_indicator_index(d.rank1_index(a)).scale(&coeff));
    }
    Ok(CertifiedBoxes { boxes, floor: m.floor(), transforms: Vec::new() })
}

/// A polynomial in `t` and `pi^{+-1}`: `(t power, pi power) -> integer coefficient`.
type Entry2 = BTreeMap<(u32, i64), i64>;
type SymMat = [[Entry2; 2]; 2];

fn ent(terms: &[(i64, u32, i64)]) -> Entry2 {
    let mut e = Entry2::new();
    for &(c, t, p) in terms {
        *e.entry((t, p)).or_insert(0) += c;
    }
    e.retain(|_, c| *c != 0);
    e
}

fn mat_mul(x: &SymMat, y: &SymMat) -> SymMat {
    let mut out: SymMat = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            let mut e = Entry2::new();
            for k in 0..2 {
                for (&(t1, p1), c1) in &x[i][k] {
                    for (&(t2, p2), c2) in &y[k][j] {
                        *e.entry((t1 + t2, p1 + p2)).or_insert(0) += c1 * c2;
                    }
                }
            }
            e.retain(|_, c| *c != 0);
            out[i][j] = e;
        }
    }
    out
}

/// `g^-1` for the coset representatives `g_t` of `I s I / I`, as polynomials in `t`.
fn coset_rep_inverse(s: usize) -> Result<SymMat> {
    match s {
        // g_t = u(t) s1, u(t) = [[1, t], [0, 1]], s1 = [[0, -1], [1, 0]].
        1 => {
            let s_inv = [[ent(&[]), ent(&[(1, 0, 0)])], [ent(&[(-1, 0, 0)]), ent(&[])]];
            let u = [[ent(&[(1, 0, 0)]), ent(&[(-1, 1, 0)])], [ent(&[]), ent(&[(1, 0, 0)])]];
            Ok(mat_mul(&s_inv, &u))
        }
        // g_t = l(pi t) s0, l(x) = [[1, 0], [x, 1]], s0 = [[0, -pi^-1], [pi, 0]].
        0 => {
            let s_inv = [[ent(&[]), ent(&[(1, 0, -1)])], [ent(&[(-1, 0, 1)]), ent(&[])]];
            let l = [[ent(&[(1, 0, 0)]), ent(&[])], [ent(&[(-1, 1, 1)]), ent(&[(1, 0, 0)])]];
            Ok(mat_mul(&s_inv, &l))
        }
        _ => Err(PadicError::BadGenerator(s)),
    }
}

/// Valuations of `g (x, y)` for `t` zero or a unit (`t_unit`), units elsewhere unspecified.
fn apply_valuations(g: &SymMat, p: [Option<i64>; 2], t_unit: bool) -> Result<[Option<i64>; 2]> {
    let mut out = [None, None];
    for (i, row) in g.iter().enumerate() {
        let mut vals = Vec::new();
        for (e, pv) in row.iter().zip(p) {
            let Some(k) = pv else { continue };
            for (&(t, pie), &c) in e {
                if t > 0 && !t_unit {
                    continue;
                }
                if c.abs() != 1 {
                    return Err(PadicError::Ambiguous);
                }
                vals.push(pie + k);
            }
        }
        if let Some(&lo) = vals.iter().min() {
            if vals.iter().filter(|&&x| x == lo).count() > 1 {
                return Err(PadicError::Ambiguous);
            }
            out[i] = Some(lo);
        }
    }
    Ok(out)
}

/// A point of the orbit of `A_m`.
fn orbit_point(m: i64) -> [Option<i64>; 2] {
    if m % 2 == 0 {
        [Some(m / 2), None]
    } else {
        [None, Some((m + 1).div_euclid(2))]
    }
}

fn coset_sum_with(s: usize, f: &BoxFunction, twist: Option<&SymMat>) -> Result<BoxFunction> {
    if let Some((a, b)) = f.non_invariant_box() {
        return Err(PadicError::NotInvariant { a, b });
    }
    let mut g = coset_rep_inverse(s)?;
    if let Some(h_inv) = twist {
        g = mat_mul(h_inv, &g);
    }
    if f.is_zero() {
        return Ok(BoxFunction::zero());
    }
    let q = q_pow(1);
    let q_minus_1 = &q - &LaurentPoly::one();
    let value = |m: i64| -> Result<LaurentPoly> {
        let p = orbit_point(m);
        let [x0, y0] = apply_valuations(&g, p, false)?;
        let [x1, y1] = apply_valuations(&g, p, true)?;
        Ok(&f.eval(x0, y0) + &(&f.eval(x1, y1) * &q_minus_1))
    };
    // The representatives move valuations by at most one, so outside this band the
    // result is zero (far out) or constant (near the origin).
    let amin = f.terms().map(|((a, _), _)| a).min().unwrap_or(0);
    let amax = f.terms().map(|((a, _), _)| a).max().unwrap_or(0);
    let (lo, hi) = (2 * (amin - 3) - 1, 2 * (amax + 3));
    let mut out = BoxFunction::zero();
    for m in lo..hi {
        out = out.add(&orbit_indicator_index(m).scale(&value(m)?));
    }
    let tail = value(hi)?;
    debug_assert_eq!(tail, value(hi + 1)?);
    debug_assert!(value(lo - 1)?.is_zero());
    out.add_term(hi / 2, hi / 2 + 1, &tail);
    Ok(out)
}

/// `(chi_{IsI} * f)(x) = sum_t f(g_t^-1 x)` over the `q` cosets `g_t I` in `I s I`.
pub fn coset_sum(s: usize, f: &BoxFunction) -> Result<BoxFunction> {
    coset_sum_with(s, f, None)
}

/// The Hecke operator `T_s`, whose inverse is `-v^-1 chi_{IsI} *`.
pub fn convolve(s: usize, f: &BoxFunction) -> Result<BoxFunction> {
    let inv = coset_sum(s, f)?.scale(&LaurentPoly::monomial(-1, -1));
    Ok(inv.add(&f.scale(&LaurentPoly::v_minus_inv())))
}

/// A function on the two Bruhat cells of `X(F_q) = F_q^2 \ {0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFunction {
    pub e: LaurentPoly,
    pub s1: LaurentPoly,
}

impl CellFunction {
    /// `tr(Delta_w) = (-v^-1)^{l(w)} chi_w`.
    pub fn trace_delta(s1: bool) -> Self {
        if s1 {
            CellFunction { e: LaurentPoly::zero(), s1: LaurentPoly::monomial(-1, -1) }
        } else {
            CellFunction { e: LaurentPoly::one(), s1: LaurentPoly::zero() }
        }
    }
}

/// `iota_! p^*`: pull back along reduction mod `pi` and extend by zero.
pub fn eisenstein_lift(cells: &CellFunction) -> BoxFunction {
    orbit_indicator_index(0).scale(&cells.e).add(&orbit_indicator_index(-1).scale(&cells.s1))
}

/// Where `fourier . Psi` and `Psi . theta` first disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntertwineWitness {
    /// The tested vector, `A_n` or the spherical vector `A_-1^#`.
    pub vector: String,
    pub a: i64,
    pub b: i64,
    pub difference: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntertwineReport {
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<IntertwineWitness>,
}

/// Compares `fourier(Psi(m))` with `Psi(theta(m))`, first for `A_-1^#` (whose image
/// is a multiple of `chi_{O x O}`), then for every `A_n` with `|n| <= radius`.
pub fn intertwine_check(pm: &PeriodicModule, spec: CharacterSpec, radius: i64, floor: i32) -> Result<IntertwineReport> {
    let d = pm.datum();
    require_a1(d)?;
    let mut vectors = vec![("A_-1^#".to_string(), pm.sharp_rank1(-1, floor)?)];
    vectors.extend((-radius..=radius).map(|n| (format!("A_{n}"), PeriodicVec::basis(d.rank1_alcove(n), floor))));
    let mut checked = 0;
    for (name, m) in vectors {
        let lhs = psi(pm, &m)?.fourier(spec);
        let rhs = psi(pm, &pm.theta(1, &m))?;
        checked += 1;
        if let Some(((a, b), difference)) = lhs.certified_difference(&rhs) {
            let witness = IntertwineWitness { vector: name, a, b, difference };
            return Ok(IntertwineReport { holds: false, checked, witness: Some(witness) });
        }
    }
    Ok(IntertwineReport { holds: true, checked, witness: None })
}
