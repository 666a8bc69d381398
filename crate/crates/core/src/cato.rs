//! Simple objects of Kazhdan-Laumon category O, combinatorially.
//!
//! Up to Tate twist a simple object is `j_{z!*}(IC_w)`, determined by `w` and the
//! right coset `P(w) z`, where `P(w)` is generated by the right ascents of `w`.
//! Its restriction to the stratum `y` is `IC_w` when `y` lies in `P(w) z` and zero
//! otherwise.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::alcove::{AffineElt, Alcove};
use crate::coxeter::{CartanDatum, CoxeterError, WeylElt};
use crate::heckemod::{HeckeAlgebra, HeckeElt};
use crate::laurent::LaurentPoly;

/// The simple object `j_{z!*}(IC_w)`, with `z` the minimal element of `P(w) z`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleKL {
    w: WeylElt,
    z: WeylElt,
}

impl SimpleKL {
    pub fn w(&self) -> &WeylElt {
        &self.w
    }

    pub fn z(&self) -> &WeylElt {
        &self.z
    }
}

impl fmt::Debug for SimpleKL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "j_{}!*(IC_{})", self.z.name(), self.w.name())
    }
}

impl Serialize for SimpleKL {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SimpleKL", 2)?;
        st.serialize_field("w", &self.w)?;
        st.serialize_field("z", &self.z)?;
        st.end()
    }
}

/// Restriction of a simple object to one stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    Zero,
    Ic(WeylElt),
}

impl Restriction {
    /// The class in the Hecke algebra: `C_w` or zero.
    pub fn class(&self, hecke: &HeckeAlgebra) -> Result<HeckeElt, CoxeterError> {
        match self {
            Restriction::Zero => Ok(HeckeElt::zero()),
            Restriction::Ic(w) => hecke.ic_class(w),
        }
    }
}

/// Finite combination of simple classes with Laurent coefficients (the twists).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct K0Vec {
    terms: BTreeMap<SimpleKL, LaurentPoly>,
}

impl K0Vec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, s: SimpleKL, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(s) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&SimpleKL, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Serialize for K0Vec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<(&SimpleKL, &LaurentPoly)> = self.terms.iter().collect();
        terms.serialize(s)
    }
}

/// Canonical representative of `j_{z!*}(IC_w)`.
pub fn classify(d: &CartanDatum, z: &WeylElt, w: &WeylElt) -> SimpleKL {
    SimpleKL { w: w.clone(), z: d.min_coset_rep(d.p_of(w), z) }
}

/// The strata where the simple object is nonzero: the coset `P(w) z`, sorted.
pub fn support(d: &CartanDatum, s: &SimpleKL) -> Result<Vec<WeylElt>, CoxeterError> {
    Ok(d.parabolic_elements(d.p_of(&s.w))?.iter().map(|p| d.mult(p, &s.z)).collect::<BTreeSet<_>>().into_iter().collect())
}

/// `j_y^*` of the simple object.
pub fn restrict(d: &CartanDatum, s: &SimpleKL, y: &WeylElt) -> Restriction {
    if d.min_coset_rep(d.p_of(&s.w), y) == s.z {
        Restriction::Ic(s.w.clone())
    } else {
        Restriction::Zero
    }
}

/// `j_y^*` of a combination of simples, as an element of the Hecke algebra.
pub fn restrict_vec(hecke: &HeckeAlgebra, v: &K0Vec, y: &WeylElt) -> Result<HeckeElt, CoxeterError> {
    let d = hecke.datum();
    let mut out = HeckeElt::zero();
    for (s, c) in v.terms() {
        out = out.add(&restrict(d, s, y).class(hecke)?.scale(c));
    }
    Ok(out)
}

/// The functor `F_z`: `(w, P(w) y) -> (w, P(w) y z^-1)`.
pub fn f_action(d: &CartanDatum, z: &WeylElt, s: &SimpleKL) -> SimpleKL {
    classify(d, &d.mult(&s.z, &d.inverse(z)), &s.w)
}

/// Every simple object, grouped by `w` in enumeration order, cosets by minimal representative.
pub fn simples(d: &CartanDatum) -> Result<Vec<SimpleKL>, CoxeterError> {
    let mut out = Vec::new();
    for w in d.enumerate()? {
        for z in d.coset_min_reps(d.p_of(w))?.reps {
            out.push(SimpleKL { w: w.clone(), z });
        }
    }
    Ok(out)
}

/// `|P(w)\W|` for every `w`.
pub fn count_breakdown(d: &CartanDatum) -> Result<Vec<(WeylElt, usize)>, CoxeterError> {
    let elems = d.enumerate()?;
    elems
        .iter()
        .map(|w| {
            let p = d.parabolic_elements(d.p_of(w))?.len();
            Ok((w.clone(), elems.len() / p))
        })
        .collect()
}

/// Number of simple objects, `sum_w |P(w)\W|`.
pub fn count(d: &CartanDatum) -> Result<usize, CoxeterError> {
    Ok(count_breakdown(d)?.iter().map(|(_, n)| n).sum())
}

/// Orbits of the simples under `F`, each sorted, ordered by their least member.
pub fn orbits(d: &CartanDatum) -> Result<Vec<Vec<SimpleKL>>, CoxeterError> {
    let elems = d.enumerate()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in simples(d)? {
        if seen.contains(&s) {
            continue;
        }
        let orbit: BTreeSet<SimpleKL> = elems.iter().map(|z| f_action(d, z, &s)).collect();
        seen.extend(orbit.iter().cloned());
        out.push(orbit.into_iter().collect());
    }
    out.sort();
    Ok(out)
}

/// The alcove indexing the image of a simple object: `z^-1 * A_w`.
pub fn eta_prime_alcove(d: &CartanDatum, s: &SimpleKL) -> Alcove {
    d.star(&d.inverse(&s.z), &d.alcove_w(&s.w))
}

/// `i(w t_lambda) = w t_{-lambda}`.
pub fn semiinf_index(d: &CartanDatum, x: &AffineElt) -> AffineElt {
    d.semiinf_involution(x)
}

/// Display name: `e`, `s1s2`, and `w0` for a longest element of length at least 2.
pub fn element_name(d: &CartanDatum, w: &WeylElt) -> String {
    if w.length() >= 2 && *w == d.longest() {
        "w0".into()
    } else {
        w.name()
    }
}

/// Restrictions of every simple to every stratum.
#[derive(Clone, Debug)]
pub struct RestrictionTable {
    pub columns: Vec<WeylElt>,
    pub rows: Vec<(SimpleKL, Vec<Restriction>)>,
}

impl RestrictionTable {
    /// Rows are grouped by `w`, ordered by length and then by the word of `w^-1`;
    /// within a group, and across columns, elements go by length and then word.
    pub fn new(d: &CartanDatum) -> Result<Self, CoxeterError> {
        let columns = d.enumerate()?.to_vec();
        let mut ws = columns.clone();
        ws.sort_by_key(|w| (w.length(), d.inverse(w).word()));
        let mut rows = Vec::new();
        for w in &ws {
            for z in d.coset_min_reps(d.p_of(w))?.reps {
                let s = SimpleKL { w: w.clone(), z };
                let cells = columns.iter().map(|y| restrict(d, &s, y)).collect();
                rows.push((s, cells));
            }
        }
        Ok(RestrictionTable { columns, rows })
    }

    /// CSV with cells `0` or `IC_<w>`.
    pub fn to_csv(&self, d: &CartanDatum) -> String {
        let mut out = String::from("simple");
        for y in &self.columns {
            out.push_str(&format!(",j_{}^*", element_name(d, y)));
        }
        out.push('\n');
        for (s, cells) in &self.rows {
            out.push_str(&format!("j_{}!*(IC_{})", element_name(d, &s.z), element_name(d, &s.w)));
            for c in cells {
                match c {
                    Restriction::Zero => out.push_str(",0"),
                    Restriction::Ic(w) => out.push_str(&format!(",IC_{}", element_name(d, w))),
                }
            }
            out.push('\n');
        }
        out
    }
}
