//! Alcoves for the affine Weyl group.
//!
//! The alcove with coordinate `x` is the one reached from `A+` by letting `x` act
//! through wall crossings; geometrically it is `x^-1(A+)`, where `(w, lambda)`
//! acts by `u -> w(u) + lambda` with `lambda` in the coroot lattice. In
//! coordinates, crossing the wall of type `s` is left multiplication
//! `x -> s x` ([`CartanDatum::cross`]) and the mirror in `<alpha_i, u> = 0` is
//! right multiplication `x -> x s_i` ([`CartanDatum::right_reflect`]).
//!
//! Barycenters are kept as integer vectors scaled by a fixed denominator so that
//! band coordinates need only integer floor division.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::coxeter::{CartanDatum, GenSet, WeylElt};

/// Element `(w, lambda)` of the affine Weyl group, acting by `u -> w(u) + lambda`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElt {
    pub w: WeylElt,
    /// Coroot-lattice coordinates.
    pub lambda: Vec<i64>,
}

impl AffineElt {
    pub fn finite(w: WeylElt) -> Self {
        let r = (w.matrix().len() as f64).sqrt() as usize;
        AffineElt { w, lambda: vec![0; r] }
    }

    pub fn is_finite(&self) -> bool {
        self.lambda.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for AffineElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.w, self.lambda)
    }
}

impl Serialize for AffineElt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Alcove", 2)?;
        st.serialize_field("word", &self.w)?;
        st.serialize_field("translation", &self.lambda)?;
        st.end()
    }
}

/// An alcove, stored with both its coordinate and the geometric map `x^-1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alcove {
    coord: AffineElt,
    geo: AffineElt,
}

impl Alcove {
    pub fn coord(&self) -> &AffineElt {
        &self.coord
    }

    /// The affine map carrying `A+` onto this alcove.
    pub fn geometric(&self) -> &AffineElt {
        &self.geo
    }

    pub fn is_fundamental(&self) -> bool {
        self.coord.is_finite()
    }
}

impl fmt::Debug for Alcove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A{:?}", self.coord)
    }
}

impl Serialize for Alcove {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coord.serialize(s)
    }
}

impl CartanDatum {
    /// Common denominator for scaled barycenters.
    pub fn bary_denominator(&self) -> i64 {
        let r = self.rank() as i64;
        let marks = self.highest_root();
        let lcm = marks.iter().fold(1i64, |a, &m| a.lcm(&m));
        let det_den = (1..=self.rank())
            .flat_map(|i| self.coweight(i).iter().map(|q| *q.denom()).collect::<Vec<_>>())
            .fold(1i64, |a, d| a.lcm(&d));
        (r + 1) * lcm * det_den
    }

    /// Barycenter of `A+` times [`Self::bary_denominator`]: the average of `0` and `omega_i^vee / m_i`.
    fn base_bary_scaled(&self) -> Vec<i64> {
        let r = self.rank();
        let d = self.bary_denominator();
        let marks = self.highest_root();
        let mut acc = vec![Rational64::zero(); r];
        for i in 1..=r {
            for (a, c) in acc.iter_mut().zip(self.coweight(i)) {
                *a += c / marks[i - 1];
            }
        }
        acc.iter()
            .map(|q| {
                let x = q * d / (r as i64 + 1);
                assert!(x.is_integer());
                x.to_integer()
            })
            .collect()
    }

    /// Scaled barycenter of an alcove.
    pub fn barycenter_scaled(&self, a: &Alcove) -> Vec<i64> {
        let d = self.bary_denominator();
        let mut b = self.act_coroot(&a.geo.w, &self.base_bary_scaled());
        for (x, l) in b.iter_mut().zip(&a.geo.lambda) {
            *x += d * l;
        }
        b
    }

    /// Exact barycenter in coroot coordinates.
    pub fn barycenter(&self, a: &Alcove) -> Vec<Rational64> {
        let d = self.bary_denominator();
        self.barycenter_scaled(a).into_iter().map(|x| Rational64::new(x, d)).collect()
    }

    /// Vertices in coroot coordinates: the images of `0` and `omega_i^vee / m_i`.
    pub fn vertices(&self, a: &Alcove) -> Vec<Vec<Rational64>> {
        let r = self.rank();
        let marks = self.highest_root();
        let mut base = vec![vec![Rational64::zero(); r]];
        for i in 1..=r {
            base.push(self.coweight(i).iter().map(|c| c / marks[i - 1]).collect());
        }
        base.iter()
            .map(|p| {
                let mut x = self.act_coroot_rational(&a.geo.w, p);
                for (c, l) in x.iter_mut().zip(&a.geo.lambda) {
                    *c += l;
                }
                x
            })
            .collect()
    }

    /// The alcove with coordinate `x`.
    pub fn alcove(&self, x: AffineElt) -> Alcove {
        Alcove { geo: self.affine_inverse(&x), coord: x }
    }

    /// The alcove `g(A+)`.
    pub fn alcove_geometric(&self, g: AffineElt) -> Alcove {
        Alcove { coord: self.affine_inverse(&g), geo: g }
    }

    /// `A_w` for `w` in the finite Weyl group.
    pub fn alcove_w(&self, w: &WeylElt) -> Alcove {
        self.alcove(AffineElt::finite(w.clone()))
    }

    /// The fundamental alcove `A_e = A+`.
    pub fn base_alcove(&self) -> Alcove {
        self.alcove_w(&self.identity())
    }

    pub fn affine_identity(&self) -> AffineElt {
        AffineElt::finite(self.identity())
    }

    /// Pure translation `t_lambda`.
    pub fn translation(&self, lambda: &[i64]) -> AffineElt {
        AffineElt { w: self.identity(), lambda: lambda.to_vec() }
    }

    /// Affine generator: `0` is the reflection in `<theta, u> = 1`, otherwise `s_i`.
    pub fn affine_gen(&self, s: usize) -> AffineElt {
        if s == 0 {
            AffineElt {
                w: self.reflection(self.highest_root()),
                lambda: self.highest_coroot().to_vec(),
            }
        } else {
            AffineElt::finite(self.s(s))
        }
    }

    /// `(w1, l1)(w2, l2) = (w1 w2, w1(l2) + l1)`.
    pub fn compose(&self, x: &AffineElt, y: &AffineElt) -> AffineElt {
        let mut lambda = self.act_coroot(&x.w, &y.lambda);
        for (a, b) in lambda.iter_mut().zip(&x.lambda) {
            *a += b;
        }
        AffineElt { w: self.mult(&x.w, &y.w), lambda }
    }

    pub fn affine_inverse(&self, x: &AffineElt) -> AffineElt {
        let wi = self.inverse(&x.w);
        let lambda = self.act_coroot(&wi, &x.lambda).into_iter().map(|c| -c).collect();
        AffineElt { w: wi, lambda }
    }

    /// Affine length: the number of hyperplanes separating `A+` and `A_x`.
    pub fn affine_length(&self, x: &AffineElt) -> usize {
        self.alcove_length(&self.alcove(x.clone()))
    }

    pub fn alcove_length(&self, a: &Alcove) -> usize {
        self.bands(a).iter().map(|k| if *k < 0 { (-k) as usize } else { *k as usize }).sum()
    }

    /// Neighbor across the wall of type `s`: coordinate `s x`.
    pub fn cross(&self, a: &Alcove, s: usize) -> Alcove {
        let g = self.affine_gen(s);
        Alcove { coord: self.compose(&g, &a.coord), geo: self.compose(&a.geo, &g) }
    }

    /// Mirror image in `<alpha_i, u> = 0`: coordinate `x s_i`.
    pub fn right_reflect(&self, a: &Alcove, i: usize) -> Alcove {
        let g = self.affine_gen(i);
        Alcove { coord: self.compose(&a.coord, &g), geo: self.compose(&g, &a.geo) }
    }

    /// Mirror image in the hyperplane `<beta, u> = k`.
    pub fn reflect_across(&self, a: &Alcove, beta: &[i64], k: i64) -> Alcove {
        let lambda = self.coroot(beta).into_iter().map(|c| c * k).collect();
        let refl = AffineElt { w: self.reflection(beta), lambda };
        Alcove { coord: self.compose(&a.coord, &self.affine_inverse(&refl)), geo: self.compose(&refl, &a.geo) }
    }

    /// The alcove `A + mu`.
    pub fn translate(&self, a: &Alcove, mu: &[i64]) -> Alcove {
        let lambda = a.geo.lambda.iter().zip(mu).map(|(x, y)| x + y).collect();
        self.alcove_geometric(AffineElt { w: a.geo.w.clone(), lambda })
    }

    /// Band coordinate `k_beta(A)`: `k < <beta, x> < k + 1` on `A`.
    pub fn band(&self, a: &Alcove, beta: &[i64]) -> i64 {
        let b = self.barycenter_scaled(a);
        Integer::div_floor(&self.pair(beta, &b), &self.bary_denominator())
    }

    /// Band coordinates for every positive root, in the datum's root order.
    pub fn bands(&self, a: &Alcove) -> Vec<i64> {
        let b = self.barycenter_scaled(a);
        let d = self.bary_denominator();
        self.positive_roots().iter().map(|beta| Integer::div_floor(&self.pair(beta, &b), &d)).collect()
    }

    /// `k_beta(B) - k_beta(A)`.
    pub fn distance_alpha(&self, a: &Alcove, b: &Alcove, beta: &[i64]) -> i64 {
        self.band(b, beta) - self.band(a, beta)
    }

    /// Signed count of hyperplanes crossed upward going from `A` to `B`.
    pub fn distance(&self, a: &Alcove, b: &Alcove) -> i64 {
        let ka = self.bands(a);
        let kb = self.bands(b);
        kb.iter().zip(&ka).map(|(x, y)| x - y).sum()
    }

    /// The affine generators `s` for which `A` lies above `sA`.
    pub fn lset(&self, a: &Alcove) -> GenSet {
        (0..=self.rank()).filter(|&s| self.distance(&self.cross(a, s), a) == 1).collect()
    }

    /// Coefficients `floor(<alpha_i, bary>)` of the box coweight in the `omega^vee` basis.
    pub fn box_coweight(&self, a: &Alcove) -> Vec<i64> {
        (1..=self.rank()).map(|i| self.band(a, &self.simple_root(i))).collect()
    }

    /// Coroot coordinates of `sum c_i omega_i^vee`.
    pub fn coweight_to_coroot(&self, c: &[i64]) -> Vec<Rational64> {
        let mut out = vec![Rational64::zero(); self.rank()];
        for (i, &ci) in c.iter().enumerate() {
            for (o, w) in out.iter_mut().zip(self.coweight(i + 1)) {
                *o += w * ci;
            }
        }
        out
    }

    /// The `*`-action: translate by `z(gamma) - gamma` for the box coweight `gamma` of `A`.
    pub fn star(&self, z: &WeylElt, a: &Alcove) -> Alcove {
        let gamma = self.coweight_to_coroot(&self.box_coweight(a));
        let zg = self.act_coroot_rational(z, &gamma);
        let mu: Vec<i64> = zg
            .iter()
            .zip(&gamma)
            .map(|(x, y)| {
                let d = x - y;
                assert!(d.is_integer(), "z(gamma) - gamma left the coroot lattice");
                d.to_integer()
            })
            .collect();
        self.translate(a, &mu)
    }

    /// `epsilon_z(x)`: coordinate of `z * A_x`.
    pub fn epsilon(&self, z: &WeylElt, x: &AffineElt) -> AffineElt {
        self.star(z, &self.alcove(x.clone())).coord
    }

    /// Reflection chain `[A^0, A^1, ...]` of length `len` along the simple root `alpha_i`.
    pub fn theta_chain(&self, a: &Alcove, i: usize, len: usize) -> Vec<Alcove> {
        let alpha = self.simple_root(i);
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return out;
        }
        let mut cur = self.right_reflect(a, i);
        out.push(cur.clone());
        while out.len() < len {
            let k = self.band(&cur, &alpha);
            cur = self.reflect_across(&cur, &alpha, k + 1);
            out.push(cur.clone());
        }
        out
    }

    /// `A_n`, the interval `(n, n + 1)` of `<alpha, .>` values, in type A1.
    pub fn rank1_alcove(&self, n: i64) -> Alcove {
        assert_eq!(self.rank(), 1, "rank-1 alcove labels need type A1");
        // A_{2m} = A+ + m alpha^vee, A_{2m-1} = s1(A+) + m alpha^vee.
        let (w, m) = if n.rem_euclid(2) == 0 { (self.identity(), n / 2) } else { (self.s(1), (n + 1) / 2) };
        self.alcove_geometric(AffineElt { w, lambda: vec![m] })
    }

    /// The label `n` of a type A1 alcove `A_n`.
    pub fn rank1_index(&self, a: &Alcove) -> i64 {
        self.band(a, &[1])
    }

    /// Membership in `Xi_fin = {A_w : w in W}`.
    pub fn in_xi_fin(&self, a: &Alcove) -> bool {
        a.is_fundamental()
    }

    /// `A` is not fundamental and lies in a Weyl chamber whose closure contains the
    /// coroot of some root in `roots`.
    pub fn in_xi_plus(&self, a: &Alcove, roots: &[Vec<i64>]) -> bool {
        if self.in_xi_fin(a) {
            return false;
        }
        let b = self.barycenter_scaled(a);
        roots.iter().any(|alpha| {
            let cor = self.coroot(alpha);
            self.positive_roots()
                .iter()
                .all(|beta| self.pair(beta, &b).signum() * self.pair(beta, &cor).signum() >= 0)
        })
    }

    /// `i(w t_lambda) = w t_{-lambda}`, where `w t_lambda = (w, w(lambda))`.
    pub fn semiinf_involution(&self, x: &AffineElt) -> AffineElt {
        AffineElt { w: x.w.clone(), lambda: x.lambda.iter().map(|c| -c).collect() }
    }

    /// Writes `x = w t_nu` and returns `nu`.
    pub fn right_translation_part(&self, x: &AffineElt) -> Vec<i64> {
        self.act_coroot(&self.inverse(&x.w), &x.lambda)
    }

    /// Every `epsilon_y(x) = w t_nu` has `nu <= 0` in dominance order.
    pub fn in_w_leq(&self, x: &AffineElt) -> bool {
        let elems = self.enumerate().expect("W_<= needs an enumerable group");
        elems.iter().all(|y| {
            let nu = self.right_translation_part(&self.epsilon(y, x));
            nu.iter().all(|&c| c <= 0)
        })
    }

    /// The orbit of `{i(w)}` under `x -> epsilon_z(x)`.
    pub fn w_prime(&self) -> HashSet<AffineElt> {
        let elems = self.enumerate().expect("W' needs an enumerable group");
        let mut out = HashSet::new();
        for w in elems {
            let iw = self.semiinf_involution(&AffineElt::finite(w.clone()));
            for z in elems {
                out.insert(self.epsilon(z, &iw));
            }
        }
        out
    }

    pub fn in_w_prime(&self, x: &AffineElt) -> bool {
        self.w_prime().contains(x)
    }

    /// Alcoves at most `radius` hyperplanes away from `A+`, sorted.
    pub fn window(&self, radius: usize) -> Vec<Alcove> {
        let start = self.base_alcove();
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for s in 0..=self.rank() {
                let b = self.cross(&a, s);
                if self.alcove_length(&b) <= radius && seen.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
        }
        let mut out: Vec<Alcove> = seen.into_iter().collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;


    fn random_alcove(d: &CartanDatum, rng: &mut ChaCha8Rng) -> Alcove {
        let mut a = d.base_alcove();
        for _ in 0..rng.gen_range(0..40) {
            a = d.cross(&a, rng.gen_range(0..=d.rank()));
        }
        a
    }

    #[test]
    fn a1_dictionary() {
        let d = CartanDatum::named("A1").unwrap();
        for n in -8..8 {
            assert_eq!(d.rank1_index(&d.rank1_alcove(n)), n);
        }
        assert_eq!(d.alcove_w(&d.s(1)), d.rank1_alcove(-1));
        assert_eq!(d.alcove(d.affine_gen(0)), d.rank1_alcove(1));
        assert_eq!(d.cross(&d.rank1_alcove(0), 1), d.rank1_alcove(-1));
        assert_eq!(d.cross(&d.rank1_alcove(1), 1), d.rank1_alcove(2));
        assert_eq!(d.right_reflect(&d.rank1_alcove(5), 1), d.rank1_alcove(-6));
        assert_eq!(d.right_reflect(&d.rank1_alcove(0), 1), d.rank1_alcove(-1));
        assert_eq!(d.distance(&d.rank1_alcove(0), &d.rank1_alcove(3)), 3);
        assert_eq!(d.lset(&d.rank1_alcove(0)), GenSet::empty().with(1));
        assert_eq!(d.lset(&d.rank1_alcove(1)), GenSet::empty().with(0));
        for n in -6..6 {
            assert_eq!(d.lset(&d.rank1_alcove(n)).contains(1), n % 2 == 0);
            assert_eq!(d.box_coweight(&d.rank1_alcove(n)), vec![n]);
            assert_eq!(d.star(&d.s(1), &d.rank1_alcove(n)), d.rank1_alcove(-n));
        }
        let chain = d.theta_chain(&d.rank1_alcove(0), 1, 5);
        let idx: Vec<i64> = chain.iter().map(|a| d.rank1_index(a)).collect();
        assert_eq!(idx, vec![-1, 0, 1, 2, 3]);
        // epsilon_{s1}(s0) = s1, since s1 * A_1 = A_{-1}.
        assert_eq!(d.epsilon(&d.s(1), &d.affine_gen(0)), AffineElt::finite(d.s(1)));
    }

    #[test]
    fn a2_examples() {
        let d = CartanDatum::named("A2").unwrap();
        let ae = d.base_alcove();
        let s1 = d.alcove_w(&d.s(1));
        assert_eq!(d.right_reflect(&ae, 1), s1);
        assert_eq!(d.lset(&ae), GenSet::empty().with(1).with(2));
        assert_eq!(d.box_coweight(&ae), vec![0, 0]);
        assert_eq!(d.box_coweight(&s1), vec![-1, 0]);
        assert_eq!(d.star(&d.s(2), &s1), s1);
        assert_eq!(d.star(&d.s(1), &s1), d.translate(&s1, &[1, 0]));
        // s0 crosses the wall <theta, u> = 1.
        let c = d.cross(&ae, 0);
        assert_eq!(d.band(&c, d.highest_root()), 1);
        assert_eq!(d.distance(&ae, &c), 1);
        let chain = d.theta_chain(&ae, 1, 3);
        assert_eq!(chain[0], s1);
        assert_eq!(chain[1], ae);
        assert!(!d.in_xi_fin(&chain[2]));
    }

    #[test]
    fn vertices_average_to_the_barycenter() {
        for t in ["A2", "B2", "G2"] {
            let d = CartanDatum::named(t).unwrap();
            for a in d.window(4) {
                let vs = d.vertices(&a);
                for (i, b) in d.barycenter(&a).iter().enumerate() {
                    let sum: Rational64 = vs.iter().map(|v| v[i]).sum();
                    assert_eq!(sum / 3, *b);
                }
            }
        }
    }

    #[test]
    fn distance_to_fundamental_alcoves_is_minus_length() {
        for t in ["A2", "B2", "G2", "A3"] {
            let d = CartanDatum::named(t).unwrap();
            for w in d.enumerate().unwrap() {
                assert_eq!(d.distance(&d.base_alcove(), &d.alcove_w(w)), -(w.length() as i64));
            }
        }
    }

    #[test]
    fn geometric_invariants_on_random_alcoves() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in ["A2", "B2", "G2"] {
            let d = CartanDatum::named(t).unwrap();
            let den = d.bary_denominator();
            for _ in 0..100 {
                let a = random_alcove(&d, &mut rng);
                let b = random_alcove(&d, &mut rng);
                let c = random_alcove(&d, &mut rng);
                // Barycenter strictly inside every band.
                let bary = d.barycenter_scaled(&a);
                for beta in d.positive_roots() {
                    let k = d.band(&a, beta);
                    let p = d.pair(beta, &bary);
                    assert!(k * den < p && p < (k + 1) * den);
                }
                assert_eq!(d.distance(&a, &b) + d.distance(&b, &c), d.distance(&a, &c));
                assert_eq!(d.distance(&a, &b), -d.distance(&b, &a));
                for s in 0..=d.rank() {
                    let n = d.cross(&a, s);
                    assert_eq!(d.cross(&n, s), a);
                    assert_eq!(d.distance(&a, &n).abs(), 1);
                    assert!(d.lset(&a).contains(s) ^ d.lset(&n).contains(s));
                    for i in 1..=d.rank() {
                        assert_eq!(d.right_reflect(&d.cross(&a, s), i), d.cross(&d.right_reflect(&a, i), s));
                    }
                }
                let g = d.box_coweight(&a);
                let shifted = d.translate(&a, &[1; 8][..d.rank()]);
                let mu_cw: Vec<i64> = (1..=d.rank()).map(|i| d.pair(&d.simple_root(i), &vec![1; d.rank()])).collect();
                let expect: Vec<i64> = g.iter().zip(&mu_cw).map(|(x, y)| x + y).collect();
                assert_eq!(d.box_coweight(&shifted), expect);
                for i in 1..=d.rank() {
                    let chain = d.theta_chain(&a, i, 6);
                    let alpha = d.simple_root(i);
                    for (n, x) in chain.iter().enumerate() {
                        assert_eq!(d.band(x, &alpha) - d.band(&chain[0], &alpha), n as i64);
                    }
                }
            }
        }
    }

    #[test]
    fn star_is_an_action_with_parabolic_stabilizers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in ["A2", "B2", "G2"] {
            let d = CartanDatum::named(t).unwrap();
            let els = d.enumerate().unwrap().to_vec();
            for _ in 0..50 {
                let a = random_alcove(&d, &mut rng);
                let z1 = &els[rng.gen_range(0..els.len())];
                let z2 = &els[rng.gen_range(0..els.len())];
                assert_eq!(d.star(z1, &d.star(z2, &a)), d.star(&d.mult(z1, z2), &a));
                assert_eq!(d.epsilon(&d.s(1), &d.epsilon(&d.s(1), a.coord())), *a.coord());
            }
            for w in &els {
                let aw = d.alcove_w(w);
                let stab: GenSet = (1..=d.rank()).filter(|&s| d.star(&d.s(s), &aw) == aw).collect();
                assert_eq!(stab, d.p_of(w), "{t} {w:?}");
                let stab_size = els.iter().filter(|z| d.star(z, &aw) == aw).count();
                assert_eq!(stab_size, d.parabolic_elements(d.p_of(w)).unwrap().len());
            }
        }
    }

    #[test]
    fn xi_plus_is_independent_of_reduced_word() {
        for t in ["A2", "B2", "G2"] {
            let d = CartanDatum::named(t).unwrap();
            let win = d.window(8);
            for v in d.enumerate().unwrap() {
                let words = d.reduced_words(v);
                let sets: Vec<Vec<bool>> = words
                    .iter()
                    .map(|wd| {
                        let r = d.reflection_subset(wd).unwrap();
                        win.iter().map(|a| d.in_xi_plus(a, &r)).collect()
                    })
                    .collect();
                assert!(sets.windows(2).all(|p| p[0] == p[1]), "{t} {v:?}");
            }
            assert!(win.iter().all(|a| !d.in_xi_plus(a, &[])));
            assert_eq!(win.iter().filter(|a| d.in_xi_fin(a)).count(), d.order().unwrap());
        }
    }

    #[test]
    fn theta_chain_tail_lies_in_xi_plus() {
        for t in ["A2", "B2"] {
            let d = CartanDatum::named(t).unwrap();
            for w in d.enumerate().unwrap() {
                for i in 1..=d.rank() {
                    let chain = d.theta_chain(&d.alcove_w(w), i, 8);
                    for a in &chain[2..] {
                        assert!(d.in_xi_plus(a, &[d.simple_root(i)]), "{t} {w:?} s{i}");
                    }
                }
            }
        }
    }

    #[test]
    fn involution_and_w_prime() {
        for t in ["A1", "A2", "B2"] {
            let d = CartanDatum::named(t).unwrap();
            let x = AffineElt { w: d.s(1), lambda: vec![2; d.rank()] };
            assert_eq!(d.semiinf_involution(&d.semiinf_involution(&x)), x);
            let wp = d.w_prime();
            assert!(wp.len() <= d.order().unwrap().pow(2));
            for w in d.enumerate().unwrap() {
                assert!(wp.contains(&AffineElt::finite(w.clone())));
            }
            assert!(d.in_w_leq(&d.affine_identity()));
            for x in &wp {
                assert!(d.in_w_leq(x), "{t} {x:?}");
            }
        }
    }
}
