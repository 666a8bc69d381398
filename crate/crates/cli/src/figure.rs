//! Rank-two alcove pictures of the simple objects.
//!
//! Every alcove within the window is drawn. The images `z^-1 * A_w` of the simples
//! are filled with one color per `F`-orbit, the fundamental alcoves are stroked in
//! bold, and `A_e` is tagged. Coordinates come from the coroot Gram matrix, so
//! the picture is metrically faithful; output is byte-stable for a fixed input.

use std::collections::BTreeMap;
use std::fmt::Write;

use klo_core::cato::{self, SimpleKL};
use klo_core::{Alcove, CartanDatum, CoxeterError};
use num_rational::Rational64;
use num_traits::ToPrimitive;

/// Fill colors, indexed by orbit in order of least member; orbit 0 holds `A_e`.
const PALETTE: [&str; 12] = [
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8", "#98df8a",
];

const SCALE: f64 = 60.0;
const MARGIN: f64 = 20.0;

#[derive(Clone, Debug)]
pub struct FigureCell {
    pub alcove: Alcove,
    /// Vertices in coroot coordinates.
    pub vertices: Vec<Vec<Rational64>>,
    pub barycenter: Vec<Rational64>,
    /// The simple object indexed by this alcove, with its orbit number.
    pub shade: Option<(SimpleKL, usize)>,
    pub fundamental: bool,
    pub base: bool,
}

#[derive(Clone, Debug)]
pub struct Figure {
    pub label: String,
    pub cells: Vec<FigureCell>,
    pub orbit_sizes: Vec<usize>,
}

impl Figure {
    /// Requires rank 2; draws the window of `radius` together with every shaded alcove.
    pub fn build(d: &CartanDatum, radius: usize) -> Result<Option<Self>, CoxeterError> {
        if d.rank() != 2 {
            return Ok(None);
        }
        let orbits = cato::orbits(d)?;
        let mut shade: BTreeMap<Alcove, (SimpleKL, usize)> = BTreeMap::new();
        for (k, orbit) in orbits.iter().enumerate() {
            for s in orbit {
                shade.insert(cato::eta_prime_alcove(d, s), (s.clone(), k));
            }
        }
        let mut alcoves = d.window(radius);
        alcoves.extend(shade.keys().cloned());
        alcoves.sort();
        alcoves.dedup();
        let base = d.base_alcove();
        let cells = alcoves
            .into_iter()
            .map(|a| FigureCell {
                vertices: d.vertices(&a),
                barycenter: d.barycenter(&a),
                shade: shade.get(&a).cloned(),
                fundamental: a.is_fundamental(),
                base: a == base,
                alcove: a,
            })
            .collect();
        Ok(Some(Figure { label: d.label().to_string(), cells, orbit_sizes: orbits.iter().map(Vec::len).collect() }))
    }

    pub fn shaded(&self) -> impl Iterator<Item = &FigureCell> {
        self.cells.iter().filter(|c| c.shade.is_some())
    }
}

/// Euclidean images of the two simple coroots, from the Gram matrix
/// `(a_i^v, a_j^v) = 2 C_ij / |a_i|^2`.
fn coroot_frame(d: &CartanDatum) -> [[f64; 2]; 2] {
    let c = d.cartan();
    let len1 = 2.0;
    let len2 = if c[0][1] == 0 { 2.0 } else { 2.0 * c[1][0] as f64 / c[0][1] as f64 };
    let g11 = 2.0 * c[0][0] as f64 / len1;
    let g12 = 2.0 * c[0][1] as f64 / len1;
    let g22 = 2.0 * c[1][1] as f64 / len2;
    let e1 = [g11.sqrt(), 0.0];
    let e2 = [g12 / g11.sqrt(), (g22 - g12 * g12 / g11).sqrt()];
    [e1, e2]
}

fn rational_list(xs: &[Rational64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn render_svg(d: &CartanDatum, fig: &Figure) -> String {
    let [e1, e2] = coroot_frame(d);
    let to_plane = |u: &[Rational64]| {
        let (a, b) = (u[0].to_f64().unwrap_or(0.0), u[1].to_f64().unwrap_or(0.0));
        (a * e1[0] + b * e2[0], -(a * e1[1] + b * e2[1]))
    };
    let pts: Vec<(f64, f64)> = fig.cells.iter().flat_map(|c| c.vertices.iter().map(|v| to_plane(v))).collect();
    let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let px = |p: (f64, f64)| ((p.0 - min_x) * SCALE + MARGIN, (p.1 - min_y) * SCALE + MARGIN);
    let points = |c: &FigureCell| {
        c.vertices
            .iter()
            .map(|v| {
                let (x, y) = px(to_plane(v));
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let width = (max_x - min_x) * SCALE + 2.0 * MARGIN;
    let height = (max_y - min_y) * SCALE + 2.0 * MARGIN;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.3} {height:.3}" data-type="{}" data-shaded="{}">"#,
        fig.label,
        fig.shaded().count()
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for c in &fig.cells {
        let coroot = rational_list(&c.barycenter);
        match &c.shade {
            Some((s, k)) => {
                let _ = writeln!(
                    out,
                    r##"<polygon class="alcove shaded" points="{}" fill="{}" stroke="#555" stroke-width="0.6" data-orbit="{k}" data-simple="{},{}" data-coroot="{coroot}"/>"##,
                    points(c),
                    PALETTE[k % PALETTE.len()],
                    cato::element_name(d, s.w()),
                    cato::element_name(d, s.z()),
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    r##"<polygon class="alcove" points="{}" fill="none" stroke="#bbb" stroke-width="0.6" data-coroot="{coroot}"/>"##,
                    points(c)
                );
            }
        }
    }
    for c in fig.cells.iter().filter(|c| c.fundamental) {
        let _ = writeln!(out, r#"<polygon class="fundamental" points="{}" fill="none" stroke="black" stroke-width="2.5"/>"#, points(c));
    }
    if let Some(c) = fig.cells.iter().find(|c| c.base) {
        let (x, y) = px(to_plane(&c.barycenter));
        let _ = writeln!(out, r#"<text class="tag" x="{x:.3}" y="{y:.3}" font-size="12" text-anchor="middle" dominant-baseline="middle">A_e</text>"#);
    }
    out.push_str("</svg>\n");
    out
}
