//! Verification suites. Each check aggregates many cases and keeps the first counterexample.

use klo_core::cato;
use klo_core::padic::{self, BoxFunction, CellFunction, CertifiedBoxes, CharacterSpec, PadicError};
use klo_core::periodic::{PeriodicError, SolveOutcome};
use klo_core::{CartanDatum, CoxeterError, HeckeAlgebra, LaurentPoly, PeriodicModule, PeriodicVec, WeylElt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::RunConfig;
use crate::report::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    A1,
    Star,
    M0,
    Hecke,
    Kls,
    Padic,
    All,
}

/// A suite could not be run at all (as opposed to a failed identity).
#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error("{0}; rerun with a larger --floor")]
    Floor(PeriodicError),
    #[error(transparent)]
    Periodic(PeriodicError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

impl From<PeriodicError> for SuiteError {
    fn from(e: PeriodicError) -> Self {
        match e {
            PeriodicError::FloorExhausted(_) | PeriodicError::Uncertified { .. } => SuiteError::Floor(e),
            e => SuiteError::Periodic(e),
        }
    }
}

type Result<T> = std::result::Result<T, SuiteError>;

/// Range of rank-one alcove indices used by the A1 and p-adic suites.
fn rank1_span(cfg: &RunConfig) -> i64 {
    cfg.radius.max(10) as i64
}

fn first<T>(slot: &mut Option<T>, value: impl FnOnce() -> T) {
    if slot.is_none() {
        *slot = Some(value());
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::A1 => a1(cfg),
        Suite::Star => star(cfg),
        Suite::M0 => m0(cfg),
        Suite::Hecke => hecke(cfg),
        Suite::Kls => kls(cfg),
        Suite::Padic => padic_suite(cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in [Suite::A1, Suite::Star, Suite::M0, Suite::Hecke, Suite::Kls, Suite::Padic] {
                if s == Suite::M0 && cfg.datum.rank() > 2 {
                    continue;
                }
                out.extend(run(s, cfg)?);
            }
            Ok(out)
        }
    }
}

/// The rank-one formulas for `T~_{s1}` and `theta` on `A_n` and `A_n^#`, and the telescoping identity.
pub fn a1(cfg: &RunConfig) -> Result<Vec<Check>> {
    let d = CartanDatum::named("A1")?;
    let pm = PeriodicModule::new(&d);
    let f = cfg.floor;
    let span = rank1_span(cfg);
    let alc = |n: i64| PeriodicVec::basis(d.rank1_alcove(n), f);
    let sharp = |n: i64| pm.sharp_rank1(n, f);
    let v = LaurentPoly::v();
    let v_inv = LaurentPoly::v_pow(-1);
    let (mut w_alc, mut w_sharp, mut w_theta, mut w_tele, mut w_star) = (None, None, None, None, None);
    for n in -span..=span {
        let got = pm.hecke_apply(1, &alc(n))?;
        let want = if n.rem_euclid(2) == 1 {
            PeriodicVec::basis(d.rank1_alcove(n + 1), f - 1)
        } else {
            PeriodicVec::from_terms([(d.rank1_alcove(n - 1), LaurentPoly::one()), (d.rank1_alcove(n), LaurentPoly::v_minus_inv())], f - 1)
        };
        if !got.eq_certified(&want) {
            first(&mut w_alc, || json!({"n": n, "got": format!("{got:?}")}));
        }

        let got = pm.hecke_apply(1, &sharp(n)?)?;
        let want = if n.rem_euclid(2) == 1 {
            sharp(n)?.scale(&-&v_inv)
        } else {
            sharp(n)?.scale(&v).add(&sharp(n - 1)?).add(&sharp(n + 1)?)
        };
        if let Some((a, c)) = got.certified_difference(&want) {
            first(&mut w_sharp, || json!({"n": n, "alcove": format!("{a:?}"), "difference": c.to_string()}));
        }

        let got = pm.theta(1, &sharp(n)?);
        if let Some((a, c)) = got.certified_difference(&sharp(-n)?) {
            first(&mut w_theta, || json!({"n": n, "alcove": format!("{a:?}"), "difference": c.to_string()}));
        }

        let rebuilt = sharp(n)?.add(&sharp(n + 1)?.scale(&v_inv));
        if let Some((a, c)) = alc(n).certified_difference(&rebuilt) {
            first(&mut w_tele, || json!({"n": n, "alcove": format!("{a:?}"), "difference": c.to_string()}));
        }

        if d.star(&d.s(1), &d.rank1_alcove(n)) != d.rank1_alcove(-n) {
            first(&mut w_star, || json!({"n": n}));
        }
    }
    Ok(vec![
        Check::from_witness("a1.hecke_on_alcoves", Some(f - 1), w_alc),
        Check::from_witness("a1.hecke_on_sharps", Some(f - 1), w_sharp),
        Check::from_witness("a1.theta_on_sharps", Some(f), w_theta),
        Check::from_witness("a1.sharp_telescoping", Some(f), w_tele),
        Check::from_witness("a1.star_reflection", None, w_star),
    ])
}

/// The `*`-action: action law on random alcoves, stabilizers, and `s1 * A_n = A_-n` in A1.
pub fn star(cfg: &RunConfig) -> Result<Vec<Check>> {
    let d = &cfg.datum;
    let elems = d.enumerate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut w_law, mut w_stab, mut w_a1) = (None, None, None);
    for _ in 0..200 {
        let mut a = d.base_alcove();
        for _ in 0..rng.gen_range(0..=3 * cfg.radius) {
            a = d.cross(&a, rng.gen_range(0..=d.rank()));
        }
        let z1 = &elems[rng.gen_range(0..elems.len())];
        let z2 = &elems[rng.gen_range(0..elems.len())];
        if d.star(z1, &d.star(z2, &a)) != d.star(&d.mult(z1, z2), &a) || d.star(&d.identity(), &a) != a {
            first(&mut w_law, || json!({"alcove": format!("{a:?}"), "z1": z1.name(), "z2": z2.name()}));
        }
    }
    for w in elems {
        let aw = d.alcove_w(w);
        let mut stab: Vec<WeylElt> = elems.iter().filter(|z| d.star(z, &aw) == aw).cloned().collect();
        let mut p = d.parabolic_elements(d.p_of(w))?;
        stab.sort();
        p.sort();
        if stab != p {
            first(&mut w_stab, || json!({"w": w.name(), "stabilizer": stab.iter().map(WeylElt::name).collect::<Vec<_>>()}));
        }
    }
    let a1 = CartanDatum::named("A1")?;
    for n in -10..=10 {
        if a1.star(&a1.s(1), &a1.rank1_alcove(n)) != a1.rank1_alcove(-n) {
            first(&mut w_a1, || json!({"n": n}));
        }
    }
    let t = cfg.type_label();
    Ok(vec![
        Check::from_witness(&format!("star.{t}.action_law"), None, w_law),
        Check::from_witness(&format!("star.{t}.stabilizer_is_p_of_w"), None, w_stab),
        Check::from_witness("star.A1.reflection", None, w_a1),
    ])
}

/// Window rank of the generators `theta_z(A_w)` and closure of their span.
pub fn m0(cfg: &RunConfig) -> Result<Vec<Check>> {
    let d = &cfg.datum;
    let t = d.label().to_string();
    let pm = PeriodicModule::new(d);
    let expected = cato::count(d)?;
    let gens: Vec<PeriodicVec> = pm.m0_generators(cfg.floor)?.into_iter().map(|g| g.vector).collect();
    let mut checks = Vec::new();
    let count_witness = (gens.len() != expected).then(|| json!({"generators": gens.len(), "simples": expected}));
    checks.push(Check::from_witness(&format!("m0.{t}.generator_count"), None, count_witness));

    let sys = pm.generator_system(&gens, cfg.radius)?;
    let rank = sys.rank();
    let rank_witness = (rank != expected).then(|| json!({"rank": rank, "expected": expected, "window": sys.window().len()}));
    checks.push(Check::from_witness(&format!("m0.{t}.window_rank"), Some(cfg.floor), rank_witness));
    let at_v = sys.rank_at(&cfg.v_value)?;
    let at_v_witness = (at_v != expected).then(|| json!({"rank": at_v, "v": cfg.v_value.to_string()}));
    checks.push(Check::from_witness(&format!("m0.{t}.rank_at_v"), Some(cfg.floor), at_v_witness));

    for (kind, apply) in [("hecke", true), ("theta", false)] {
        let mut witness = None;
        let mut floor = i32::MAX;
        for (k, g) in gens.iter().enumerate() {
            for s in 1..=d.rank() {
                let image = if apply { pm.hecke_apply(s, g)? } else { pm.theta(s, g) };
                match sys.solve(&image)? {
                    SolveOutcome::Consistent(c) => floor = floor.min(c.floor),
                    SolveOutcome::Inconsistent { alcove, residual, floor } => first(&mut witness, || {
                        json!({"generator": k, "s": s, "alcove": format!("{alcove:?}"), "residual": residual.to_string(), "floor": floor})
                    }),
                }
            }
        }
        checks.push(Check::from_witness(&format!("m0.{t}.{kind}_closure"), Some(floor), witness));
    }
    Ok(checks)
}

/// Braid multiplicity `m_ij` from the Cartan matrix.
fn braid_order(d: &CartanDatum, i: usize, j: usize) -> usize {
    let c = d.cartan();
    match c[i - 1][j - 1] * c[j - 1][i - 1] {
        0 => 2,
        1 => 3,
        2 => 4,
        _ => 6,
    }
}

/// Hecke and theta identities on the periodic module.
pub fn hecke(cfg: &RunConfig) -> Result<Vec<Check>> {
    let d = &cfg.datum;
    let t = d.label().to_string();
    let pm = PeriodicModule::new(d);
    let h = pm.hecke();
    let f = cfg.floor;
    let elems = d.enumerate()?;
    let vv = LaurentPoly::v_minus_inv();
    let (mut w_quad, mut w_left, mut w_braid, mut w_je) = (None, None, None, None);
    for w in elems {
        let m = pm.alcove_vec(w, f);
        for s in 0..=d.rank() {
            let tm = pm.hecke_apply(s, &m)?;
            let ttm = pm.hecke_apply(s, &tm)?;
            if let Some((a, c)) = ttm.certified_difference(&tm.scale(&vv).add(&m)) {
                first(&mut w_quad, || json!({"w": w.name(), "s": s, "alcove": format!("{a:?}"), "difference": c.to_string()}));
            }
        }
        for s in 1..=d.rank() {
            let lhs = pm.j_e(&pm.hecke_apply(s, &m)?);
            if !lhs.eq_certified(&h.left_action(s, &h.delta_class(w))) {
                first(&mut w_left, || json!({"w": w.name(), "s": s}));
            }
        }
        for i in 1..=d.rank() {
            for j in i + 1..=d.rank() {
                let len = braid_order(d, i, j);
                let word_a: Vec<usize> = (0..len).map(|k| if k % 2 == 0 { i } else { j }).collect();
                let word_b: Vec<usize> = (0..len).map(|k| if k % 2 == 0 { j } else { i }).collect();
                let x = pm.theta_along(&word_a, &m);
                let y = pm.theta_along(&word_b, &m);
                if let Some((a, c)) = x.certified_difference(&y) {
                    first(&mut w_braid, || json!({"w": w.name(), "i": i, "j": j, "alcove": format!("{a:?}"), "difference": c.to_string()}));
                }
            }
        }
    }
    // j_e(theta_z(A_w)) = [Delta_w] v^-l(z) T~_{z^-1}; all z in small groups, l(z) <= 2 otherwise.
    let max_len = if elems.len() <= 6 { usize::MAX } else { 2 };
    let mut je_floor = f;
    for w in elems {
        for z in elems.iter().filter(|z| z.length() <= max_len) {
            let lhs = pm.j_e(&pm.theta_word(z, &pm.alcove_vec(w, f)));
            je_floor = je_floor.min(lhs.floor.unwrap_or(f));
            let rhs = h.mult(&h.delta_class(w), &h.tilde_t(&d.inverse(z))).scale(&LaurentPoly::v_pow(-(z.length() as i32)));
            if !lhs.eq_certified(&rhs) {
                first(&mut w_je, || json!({"w": w.name(), "z": z.name()}));
            }
        }
    }
    Ok(vec![
        Check::from_witness(&format!("hecke.{t}.quadratic_relation"), Some(f - 2), w_quad),
        Check::from_witness(&format!("hecke.{t}.finite_part_is_left_multiplication"), Some(f - 1 - d.longest().length() as i32), w_left),
        Check::from_witness(&format!("hecke.{t}.theta_braid_relations"), Some(f), w_braid),
        Check::from_witness(&format!("hecke.{t}.je_of_theta"), Some(je_floor), w_je),
    ])
}

/// Bar invariance of `C_w` and `phi_s(C_w) - C_w in K_s` for right ascents `s`.
pub fn kls(cfg: &RunConfig) -> Result<Vec<Check>> {
    let d = &cfg.datum;
    let t = d.label().to_string();
    let h = HeckeAlgebra::new(d);
    let (mut w_bar, mut w_ks) = (None, None);
    for w in d.enumerate()? {
        let c = h.c_basis(w)?;
        if h.bar(&c) != c {
            first(&mut w_bar, || json!({"w": w.name()}));
        }
        for s in (1..=d.rank()).filter(|&s| !d.is_right_descent(w, s)) {
            if !h.k_s_membership(&h.phi_s(&c, s).sub(&c), s)? {
                first(&mut w_ks, || json!({"w": w.name(), "s": s}));
            }
        }
    }
    Ok(vec![
        Check::from_witness(&format!("kls.{t}.bar_invariance"), None, w_bar),
        Check::from_witness(&format!("kls.{t}.k_s_criterion"), None, w_ks),
    ])
}

fn box_witness(f: &BoxFunction, g: &BoxFunction) -> Option<Value> {
    (f != g).then(|| json!({"got": f, "expected": g}))
}

/// The rank-one p-adic identities, including the negative test for the conductor-zero character.
pub fn padic_suite(cfg: &RunConfig) -> Result<Vec<Check>> {
    let d = CartanDatum::named("A1")?;
    let pm = PeriodicModule::new(&d);
    let f = cfg.floor;
    let span = rank1_span(cfg);
    let chi = BoxFunction::indicator;
    let q = LaurentPoly::v_pow(2);
    let p1 = CharacterSpec::PSI1;
    let mut checks = Vec::new();

    let mut w_values = box_witness(&padic::fourier(&chi(0, 1), p1), &chi(0, 1));
    w_values = w_values.or_else(|| box_witness(&padic::fourier(&chi(0, 0), p1), &chi(1, 1).scale(&q)));
    for k in -5..=5 {
        let want = chi(-k, 1 - k).scale(&LaurentPoly::v_pow(-4 * k as i32));
        w_values = w_values.or_else(|| box_witness(&padic::fourier(&chi(k, k + 1), p1), &want));
    }
    checks.push(Check::from_witness("padic.fourier_values", None, w_values));

    let mut w_inv = None;
    for a in -5..=5 {
        for b in -5..=5 {
            if padic::fourier(&padic::fourier(&chi(a, b), p1), p1) != chi(a, b) {
                first(&mut w_inv, || json!({"a": a, "b": b}));
            }
        }
    }
    checks.push(Check::from_witness("padic.fourier_involution", None, w_inv));

    let witness_json = |r: padic::IntertwineReport| r.witness.map(|w| serde_json::to_value(w).expect("witness serializes"));
    let good = padic::intertwine_check(&pm, p1, span, f)?;
    checks.push(Check::from_witness("padic.intertwine_psi1", Some(f), witness_json(good)));
    let bad = padic::intertwine_check(&pm, CharacterSpec::PSI0, span, f)?;
    checks.push(Check::expect_failure("padic.intertwine_psi0_negative", Some(f), witness_json(bad)));
    let unnormalized = padic::intertwine_check(&pm, CharacterSpec::new(1, 0), span, f)?;
    checks.push(Check::expect_failure("padic.intertwine_unnormalized_negative", Some(f), witness_json(unnormalized)));

    let mut w_eis = None;
    for (is_s1, n) in [(false, 0), (true, -1)] {
        let lifted = padic::eisenstein_lift(&CellFunction::trace_delta(is_s1));
        let delta = padic::psi(&pm, &PeriodicVec::basis(d.rank1_alcove(n), f))?;
        if let Some(w) = box_witness(&lifted, delta.boxes()) {
            first(&mut w_eis, || w);
        }
    }
    checks.push(Check::from_witness("padic.eisenstein_lift_of_standards", None, w_eis));

    let sharp = padic::psi(&pm, &pm.sharp_rank1(0, f)?)?;
    let tele = sharp.certified_difference(&CertifiedBoxes::exact(chi(0, 1))).map(|((a, b), c)| json!({"a": a, "b": b, "difference": c.to_string()}));
    checks.push(Check::from_witness("padic.psi_of_sharp_telescopes", Some(f), tele));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vv = LaurentPoly::v_minus_inv();
    let mut w_quad = None;
    for _ in 0..20 {
        let mut g = BoxFunction::zero();
        for _ in 0..rng.gen_range(1..5) {
            let a = rng.gen_range(-4..=4);
            g.add_term(a, a + rng.gen_range(0..=1), &LaurentPoly::monomial(rng.gen_range(-3..=3), rng.gen_range(-2..=2)));
        }
        for s in [0, 1] {
            let tg = padic::convolve(s, &g)?;
            let ttg = padic::convolve(s, &tg)?;
            if let Some(w) = box_witness(&ttg, &tg.scale(&vv).add(&g)) {
                first(&mut w_quad, || w);
            }
        }
    }
    checks.push(Check::from_witness("padic.transported_quadratic_relation", None, w_quad));

    let mut w_transport = None;
    for n in -span..=span {
        let m = PeriodicVec::basis(d.rank1_alcove(n), f);
        for s in [0, 1] {
            let lhs = padic::psi(&pm, &pm.hecke_apply(s, &m)?)?;
            let rhs = padic::convolve(s, padic::psi(&pm, &m)?.boxes())?;
            if lhs.boxes() != &rhs {
                first(&mut w_transport, || json!({"n": n, "s": s}));
            }
        }
    }
    checks.push(Check::from_witness("padic.psi_intertwines_hecke", None, w_transport));
    Ok(checks)
}
