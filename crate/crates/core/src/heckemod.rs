//! The finite Hecke algebra as a model of `K_0`.
//!
//! Elements are stored in the normalized standard basis `T~_w = v^{-l(w)} T_w`,
//! with `T~_s^2 = 1 + (v - v^-1) T~_s`. The canonical basis is
//! `C_w = sum_{x <= w} (-1)^{l(w)-l(x)} v^{l(x)-l(w)} P_{x,w}(v^2) T~_{x^-1}^-1`,
//! so `C_s = T~_s - v`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::coxeter::{CartanDatum, CoxeterError, WeylElt};
use crate::laurent::LaurentPoly;

/// Element of the Hecke algebra in the `T~` basis.
///
/// `floor`, when present, says the coefficients are exact only above `v^-floor`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct HeckeElt {
    terms: BTreeMap<WeylElt, LaurentPoly>,
    pub floor: Option<i32>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (WeylElt, LaurentPoly)>) -> Self {
        let mut h = Self::zero();
        for (w, c) in terms {
            h.add_term(w, &c);
        }
        h
    }

    pub fn add_term(&mut self, w: WeylElt, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn coeff(&self, w: &WeylElt) -> LaurentPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylElt, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::from_terms(self.terms.iter().map(|(w, x)| (w.clone(), x * c)));
        out.floor = self.floor.map(|f| f - c.degree().unwrap_or(0));
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out.floor = min_floor(self.floor, other.floor);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&LaurentPoly::from(-1)))
    }

    /// Drops every coefficient term at or below `v^-floor`.
    pub fn truncate(&self, floor: i32) -> Self {
        let mut out =
            Self::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.truncate_floor(floor))));
        out.floor = Some(floor);
        out
    }

    /// Equality of all coefficient terms above the weaker of the two floors.
    pub fn eq_certified(&self, other: &Self) -> bool {
        match min_floor(self.floor, other.floor) {
            None => self == other,
            Some(f) => self.truncate(f).terms == other.truncate(f).terms,
        }
    }
}

fn min_floor(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl fmt::Debug for HeckeElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(w, c)| format!("({c})T~[{}]", w.name())).collect();
        write!(f, "{}", parts.join(" + "))?;
        if let Some(fl) = self.floor {
            write!(f, " [floor {fl}]")?;
        }
        Ok(())
    }
}

impl Serialize for HeckeElt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HeckeElt", 3)?;
        st.serialize_field("basis", "T~")?;
        st.serialize_field("floor", &self.floor)?;
        let terms: Vec<(&WeylElt, &LaurentPoly)> = self.terms.iter().collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// The Hecke algebra of a finite Weyl group, with a memoized canonical basis.
pub struct HeckeAlgebra {
    datum: CartanDatum,
    c_cache: Mutex<HashMap<WeylElt, HeckeElt>>,
}

impl HeckeAlgebra {
    pub fn new(datum: &CartanDatum) -> Self {
        Self { datum: datum.clone(), c_cache: Mutex::new(HashMap::new()) }
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn one(&self) -> HeckeElt {
        self.tilde_t(&self.datum.identity())
    }

    /// `T~_w`.
    pub fn tilde_t(&self, w: &WeylElt) -> HeckeElt {
        HeckeElt::from_terms([(w.clone(), LaurentPoly::one())])
    }

    /// `T~_w^-1 = T~_{s_k}^-1 ... T~_{s_1}^-1` for `w = s_1 ... s_k`.
    pub fn tilde_t_inv(&self, w: &WeylElt) -> HeckeElt {
        let mut h = self.one();
        for s in w.word().into_iter().rev() {
            h = self.right_mul_gen_inv(&h, s);
        }
        h
    }

    /// `h T~_s`.
    pub fn right_mul_gen(&self, h: &HeckeElt, s: usize) -> HeckeElt {
        let d = &self.datum;
        let mut out = HeckeElt::zero();
        for (w, c) in h.terms() {
            let ws = d.right_mul_gen(w, s);
            out.add_term(ws.clone(), c);
            if ws.length() < w.length() {
                out.add_term(w.clone(), &(c * &LaurentPoly::v_minus_inv()));
            }
        }
        out.floor = h.floor.map(|f| f - 1);
        out
    }

    /// `T~_s h`.
    pub fn left_mul_gen(&self, s: usize, h: &HeckeElt) -> HeckeElt {
        let d = &self.datum;
        let mut out = HeckeElt::zero();
        for (w, c) in h.terms() {
            let sw = d.left_mul_gen(s, w);
            out.add_term(sw.clone(), c);
            if sw.length() < w.length() {
                out.add_term(w.clone(), &(c * &LaurentPoly::v_minus_inv()));
            }
        }
        out.floor = h.floor.map(|f| f - 1);
        out
    }

    /// `h T~_s^-1 = h T~_s - (v - v^-1) h`.
    fn right_mul_gen_inv(&self, h: &HeckeElt, s: usize) -> HeckeElt {
        let mut out = self.right_mul_gen(h, s);
        for (w, c) in h.terms() {
            out.add_term(w.clone(), &-(c * &LaurentPoly::v_minus_inv()));
        }
        out
    }

    pub fn mult(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (w, c) in b.terms() {
            let mut part = a.clone();
            part.floor = None;
            for s in w.word() {
                part = self.right_mul_gen(&part, s);
            }
            out = out.add(&part.scale(c));
        }
        out.floor = match (a.floor, b.floor) {
            (None, None) => None,
            _ => {
                // A coefficient loses at most the top degree of the other factor's entries.
                let top = |h: &HeckeElt| {
                    h.terms().filter_map(|(w, c)| c.degree().map(|d| d + w.length() as i32)).max().unwrap_or(0)
                };
                min_floor(a.floor.map(|f| f - top(b)), b.floor.map(|f| f - top(a)))
            }
        };
        out
    }

    /// Bar involution: `v -> v^-1`, `T~_w -> T~_{w^-1}^-1`.
    pub fn bar(&self, h: &HeckeElt) -> HeckeElt {
        let d = &self.datum;
        let mut out = HeckeElt::zero();
        for (w, c) in h.terms() {
            out = out.add(&self.tilde_t_inv(&d.inverse(w)).scale(&c.bar()));
        }
        out
    }

    /// `C_w`.
    pub fn c_basis(&self, w: &WeylElt) -> Result<HeckeElt, CoxeterError> {
        if let Some(c) = self.c_cache.lock().unwrap().get(w) {
            return Ok(c.clone());
        }
        let d = &self.datum;
        let lw = w.length() as i32;
        let mut out = HeckeElt::zero();
        for x in d.enumerate()? {
            if !d.bruhat_leq(x, w) {
                continue;
            }
            let lx = x.length() as i32;
            let p = LaurentPoly::from_q_poly(&d.kl_polynomial(x, w)?);
            let sign = if (lw - lx) % 2 == 0 { 1 } else { -1 };
            let coeff = p.shift(lx - lw).scale(sign);
            out = out.add(&self.tilde_t_inv(&d.inverse(x)).scale(&coeff));
        }
        self.c_cache.lock().unwrap().insert(w.clone(), out.clone());
        Ok(out)
    }

    /// Coordinates of `h` in the `C` basis.
    pub fn expand_in_c(&self, h: &HeckeElt) -> Result<BTreeMap<WeylElt, LaurentPoly>, CoxeterError> {
        let mut rest = h.clone();
        rest.floor = None;
        let mut out = BTreeMap::new();
        // C_w = T~_w + lower terms, so peel off the longest support element.
        while let Some((w, c)) = rest.terms().max_by(|a, b| a.0.cmp(b.0)).map(|(w, c)| (w.clone(), c.clone())) {
            rest = rest.sub(&self.c_basis(&w)?.scale(&c));
            out.insert(w, c);
        }
        Ok(out)
    }

    /// Coordinates of `h` in the basis `[Delta_w]`, which is unitriangular over `T~`.
    pub fn expand_in_delta(&self, h: &HeckeElt) -> BTreeMap<WeylElt, LaurentPoly> {
        let mut rest = h.clone();
        rest.floor = None;
        let mut out = BTreeMap::new();
        while let Some((w, c)) = rest.terms().max_by(|a, b| a.0.cmp(b.0)).map(|(w, c)| (w.clone(), c.clone())) {
            rest = rest.sub(&self.delta_class(&w).scale(&c));
            out.insert(w, c);
        }
        out
    }

    /// `[Delta_w] = bar(T~_w)`.
    pub fn delta_class(&self, w: &WeylElt) -> HeckeElt {
        self.bar(&self.tilde_t(w))
    }

    /// `[nabla_w] = T~_w`.
    pub fn nabla_class(&self, w: &WeylElt) -> HeckeElt {
        self.tilde_t(w)
    }

    /// `[IC_w] = C_w`.
    pub fn ic_class(&self, w: &WeylElt) -> Result<HeckeElt, CoxeterError> {
        self.c_basis(w)
    }

    /// The half Tate twist `(m/2)`: multiplication by `v^-m`.
    pub fn twist(&self, h: &HeckeElt, m: i32) -> HeckeElt {
        h.scale(&LaurentPoly::v_pow(-m))
    }

    /// `phi_s(h) = h v^-1 T~_s`.
    pub fn phi_s(&self, h: &HeckeElt, s: usize) -> HeckeElt {
        let mut out = self.right_mul_gen(h, s).scale(&LaurentPoly::v_pow(-1));
        out.floor = h.floor;
        out
    }

    /// The `C`-expansion of `h` is supported on `{w : l(ws) < l(w)}`.
    pub fn k_s_membership(&self, h: &HeckeElt, s: usize) -> Result<bool, CoxeterError> {
        let d = &self.datum;
        Ok(self.expand_in_c(h)?.keys().all(|w| d.is_right_descent(w, s)))
    }

    /// `T~_s h`.
    pub fn left_action(&self, s: usize, h: &HeckeElt) -> HeckeElt {
        self.left_mul_gen(s, h)
    }
}
