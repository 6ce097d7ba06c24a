//! Euclidean charts of the boundary and SVG figures. This is the only
//! floating-point code in the crate: everything up to the final square
//! roots is exact.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::lorentz::{dot_mixed, dot_rational, dot_unchecked, is_isotropic, norm2};
use crate::packing::{enumerate, EnumerateOptions, Window};
use crate::vector::{check_rho, LatticeVector, RationalVector};

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Orthonormal coordinates on the boundary with `E` at infinity and `F` at
/// the origin.
///
/// For an isotropic `x` normalized to `x̃⊙E = −1`, the coordinates are
/// `x̃⊙b_i/|b_i|` for an exactly orthogonal basis `b_i` of
/// `{E, F}^⊥`; then `|x − y|² = −2 x̃⊙ỹ`, the Euclidean distance with `E`
/// at infinity.
#[derive(Debug, Clone)]
pub struct EuclideanChart {
    pub e: LatticeVector,
    pub f: LatticeVector,
    basis: Vec<RationalVector>,
    /// `1/|b_i|`.
    inv_norms: Vec<f64>,
}

/// Rational basis of `{x : v⊙x = 0 for every v}`.
fn complement(vs: &[LatticeVector]) -> Vec<RationalVector> {
    let rho = vs[0].rho();
    let rows: Vec<Vec<BigRational>> = vs
        .iter()
        .map(|v| {
            (0..rho)
                .map(|j| BigRational::from_integer(dot_unchecked(v, &LatticeVector::e(rho, j + 1))))
                .collect()
        })
        .collect();
    nullspace(&rows, rho).into_iter().map(RationalVector::new).collect()
}

/// Default origin: the tangency point `e_1 + e_ρ`, or the first `e_i + e_j`
/// not on the ray of `E`.
fn default_origin(e: &LatticeVector) -> Option<LatticeVector> {
    let rho = e.rho();
    let mut pairs = vec![(1, rho)];
    for i in 1..=rho {
        for j in i + 1..=rho {
            pairs.push((i, j));
        }
    }
    pairs.into_iter().map(|(i, j)| &LatticeVector::e(rho, i) + &LatticeVector::e(rho, j)).find(|f| !dot_unchecked(f, e).is_zero())
}

impl EuclideanChart {
    pub fn new(e: &LatticeVector) -> Result<Self> {
        let f = default_origin(e).ok_or_else(|| Error::Degenerate("no origin for this perspective".into()))?;
        Self::with_origin(e, &f, None)
    }

    /// Chart with origin `f`. If `first` is given (it must be orthogonal to
    /// `E` and `F`), it becomes the first basis direction.
    pub fn with_origin(e: &LatticeVector, f: &LatticeVector, first: Option<&LatticeVector>) -> Result<Self> {
        let rho = e.rho();
        check_rho(rho)?;
        for v in [e, f] {
            if !is_isotropic(v) {
                return Err(Error::NotIsotropic(v.to_string()));
            }
        }
        if dot_unchecked(e, f).is_zero() {
            return Err(Error::Degenerate("origin lies on the ray of E".into()));
        }
        let mut raw: Vec<RationalVector> = Vec::new();
        if let Some(p) = first {
            if !(dot_unchecked(p, e).is_zero() && dot_unchecked(p, f).is_zero()) {
                return Err(Error::Degenerate(format!("{p} is not orthogonal to E and F")));
            }
            raw.push(p.to_rational());
        }
        raw.extend(complement(&[e.clone(), f.clone()]));
        let mut basis: Vec<RationalVector> = Vec::new();
        for v in raw {
            let mut w = v;
            for b in &basis {
                let k = dot_rational(&w, b) / dot_rational(b, b);
                w = w.add_scaled(&-k, b);
            }
            if !w.is_zero() && basis.len() < rho - 2 {
                basis.push(w);
            }
        }
        if basis.len() != rho - 2 {
            return Err(Error::Degenerate("complement of span{E, F} has the wrong dimension".into()));
        }
        let inv_norms = basis.iter().map(|b| 1.0 / to_f64(&dot_rational(b, b)).sqrt()).collect();
        Ok(Self {
            e: e.clone(),
            f: f.clone(),
            basis,
            inv_norms,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `(v⊙b_i)/s` as floats.
    fn coords(&self, v: &LatticeVector, s: &BigInt) -> Vec<f64> {
        self.basis
            .iter()
            .zip(&self.inv_norms)
            .map(|(b, inv)| to_f64(&(dot_mixed(v, b) / BigRational::from_integer(s.clone()))) * inv)
            .collect()
    }

    /// Chart coordinates of an isotropic vector.
    pub fn point(&self, x: &LatticeVector) -> Result<Vec<f64>> {
        if !is_isotropic(x) {
            return Err(Error::NotIsotropic(x.to_string()));
        }
        let xe = -dot_unchecked(x, &self.e);
        if xe.is_zero() {
            return Err(Error::Degenerate("the point at infinity has no chart coordinates".into()));
        }
        Ok(self.coords(x, &xe))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Shape {
    Circle { center: Vec<f64>, radius: f64 },
    /// `{x : normal·x = offset}`; `normal` points into the sphere's side.
    Plane { normal: Vec<f64>, offset: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircleDatum {
    pub vector: LatticeVector,
    pub curvature: BigInt,
    pub curvature_sign: i8,
    pub shape: Shape,
}

/// Euclidean data of `H_m` in the chart: the center `E + 2k·m` has
/// coordinates `(m⊙b_i)/k` and the radius is `1/|k|`; planes get their unit
/// normal `(m⊙b_i)` and offset `(F⊙m)/(F⊙E)`.
pub fn sphere_to_datum(m: &LatticeVector, chart: &EuclideanChart) -> Result<CircleDatum> {
    if !norm2(m).eq(&BigInt::from(1)) {
        return Err(Error::NotSpacelike(format!("{m} has m⊙m ≠ 1")));
    }
    let k = -dot_unchecked(m, &chart.e);
    let sign = match k.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    };
    let shape = if k.is_zero() {
        let normal = chart.coords(m, &BigInt::from(1));
        let offset = BigRational::new(dot_unchecked(&chart.f, m), dot_unchecked(&chart.f, &chart.e));
        Shape::Plane {
            normal,
            offset: to_f64(&offset),
        }
    } else {
        Shape::Circle {
            center: chart.coords(m, &k),
            radius: 1.0 / to_f64(&BigRational::from_integer(k.clone())).abs(),
        }
    };
    Ok(CircleDatum {
        vector: m.clone(),
        curvature: k,
        curvature_sign: sign,
        shape,
    })
}

/// Cross-section of `H_m` by the plane `H_p` (`p⊙E = 0`), in a chart whose
/// first basis direction is `p`. `H_m` meets `H_p` in a proper circle iff
/// `(m⊙p)² < p⊙p`; the section has radius `√(1 − (m⊙p)²/(p⊙p))/k`.
pub fn slice_datum(m: &LatticeVector, p: &LatticeVector, chart: &EuclideanChart) -> Result<Option<CircleDatum>> {
    let d = sphere_to_datum(m, chart)?;
    let Shape::Circle { center, radius } = &d.shape else {
        return Ok(None);
    };
    let mp = dot_unchecked(m, p);
    let pp = norm2(p);
    if &mp * &mp >= pp {
        return Ok(None);
    }
    let t = BigRational::new(&mp * &mp, pp);
    let r = radius * (1.0 - to_f64(&t)).sqrt();
    Ok(Some(CircleDatum {
        shape: Shape::Circle {
            center: center[1..].to_vec(),
            radius: r,
        },
        ..d
    }))
}

fn sort_key(a: &CircleDatum, b: &CircleDatum) -> Ordering {
    let pos = |d: &CircleDatum| match &d.shape {
        Shape::Circle { center, .. } => center.clone(),
        Shape::Plane { normal, offset } => {
            let mut v = normal.clone();
            v.push(*offset);
            v
        }
    };
    a.curvature.cmp(&b.curvature).then_with(|| {
        pos(a)
            .iter()
            .zip(pos(b).iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// SVG y points down. `0 − y` avoids writing `-0`.
fn flip(y: f64) -> f64 {
    0.0 - y
}

/// SVG 1.1 for planar data. The viewBox covers the circles with a 5%
/// margin (lines are clipped to it); stroke width is 0.5% of the extent.
/// The y axis is flipped so that the picture is upright.
pub fn emit_svg(data: &[CircleDatum]) -> Result<String> {
    if data.is_empty() {
        return Err(Error::EmptyRender);
    }
    for d in data {
        let dim = match &d.shape {
            Shape::Circle { center, .. } => center.len(),
            Shape::Plane { normal, .. } => normal.len(),
        };
        if dim != 2 {
            return Err(Error::DimensionMismatch { left: 2, right: dim });
        }
    }
    let mut data = data.to_vec();
    data.sort_by(sort_key);

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for d in &data {
        match &d.shape {
            Shape::Circle { center, radius } => {
                x0 = x0.min(center[0] - radius);
                x1 = x1.max(center[0] + radius);
                y0 = y0.min(center[1] - radius);
                y1 = y1.max(center[1] + radius);
            }
            Shape::Plane { normal, offset } => {
                let (px, py) = (normal[0] * offset, normal[1] * offset);
                x0 = x0.min(px);
                x1 = x1.max(px);
                y0 = y0.min(py);
                y1 = y1.max(py);
            }
        }
    }
    let extent = (x1 - x0).max(y1 - y0).max(1e-9);
    let pad = 0.05 * extent;
    let (vx, vy, vw, vh) = (x0 - pad, -y1 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let stroke = 0.005 * extent;
    let reach = 2.0 * (vw + vh);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx} {vy} {vw} {vh}" fill="none" stroke="black" stroke-width="{stroke}">"#
    );
    for d in &data {
        match &d.shape {
            Shape::Circle { center, radius } => {
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{}" cy="{}" r="{}" data-k="{}"/>"#,
                    center[0], flip(center[1]), radius, d.curvature
                );
            }
            Shape::Plane { normal, offset } => {
                let (px, py) = (normal[0] * offset, normal[1] * offset);
                let (tx, ty) = (-normal[1], normal[0]);
                let _ = writeln!(
                    out,
                    r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" data-k="0"/>"#,
                    px - reach * tx,
                    flip(py - reach * ty),
                    px + reach * tx,
                    flip(py + reach * ty)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// A rendered figure and the data behind it.
#[derive(Debug, Clone, Serialize)]
pub struct Figure {
    pub rho: usize,
    pub kmax: i64,
    pub data: Vec<CircleDatum>,
    #[serde(skip)]
    pub svg: String,
}

/// Horizontal extent of a figure, in cell margins.
pub const FIGURE_MARGIN: i64 = 2;

/// The strip packing for ρ = 4, or its cross-section by `H_{v_45}` for
/// ρ = 5, with curvatures up to `kmax` over a few translation periods.
pub fn render_packing(rho: usize, kmax: i64) -> Result<Figure> {
    let mut opts = EnumerateOptions::new(kmax);
    opts.window = Window::Margin {
        numer: FIGURE_MARGIN,
        denom: 1,
    };
    let e = LatticeVector::strip_point(rho);
    let records = match rho {
        4 | 5 => enumerate(rho, &opts)?.records,
        _ => {
            return Err(Error::Degenerate(format!(
                "figures exist for rho 4 (strip) and 5 (cross-section), not {rho}"
            )))
        }
    };
    let data: Vec<CircleDatum> = if rho == 4 {
        // First axis along the strip, orthogonal to the plane e_4.
        let f = default_origin(&e).expect("strip point has an origin");
        let along = complement(&[e.clone(), f.clone(), LatticeVector::e(4, 4)])[0].clear_denominators();
        let chart = EuclideanChart::with_origin(&e, &f, Some(&along))?;
        records.par_iter().map(|r| sphere_to_datum(&r.vector, &chart)).collect::<Result<_>>()?
    } else {
        let p = LatticeVector::v(5, 4, 5);
        let f = &LatticeVector::e(5, 1) + &LatticeVector::e(5, 2);
        let chart = EuclideanChart::with_origin(&e, &f, Some(&p))?;
        records
            .par_iter()
            .map(|r| slice_datum(&r.vector, &p, &chart))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect()
    };
    let svg = emit_svg(&data)?;
    let mut data = data;
    data.sort_by(sort_key);
    Ok(Figure { rho, kmax, data, svg })
}

/// `|d − (r₁ + r₂)|` or `|d − |r₁ − r₂||` for two circles, whichever is
/// smaller; `|dist(center, line) − r|` for a circle and a line; `None` for
/// two lines.
pub fn tangency_residual(a: &Shape, b: &Shape) -> Option<f64> {
    match (a, b) {
        (Shape::Circle { center: c1, radius: r1 }, Shape::Circle { center: c2, radius: r2 }) => {
            let d = c1.iter().zip(c2).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
            Some((d - (r1 + r2)).abs().min((d - (r1 - r2).abs()).abs()))
        }
        (Shape::Circle { center, radius }, Shape::Plane { normal, offset })
        | (Shape::Plane { normal, offset }, Shape::Circle { center, radius }) => {
            let s: f64 = center.iter().zip(normal).map(|(x, n)| x * n).sum();
            Some(((s - offset).abs() - radius).abs())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{center, euclid_dist2};

    #[test]
    fn strip_lines_are_parallel() {
        let chart = EuclideanChart::new(&LatticeVector::strip_point(4)).unwrap();
        let a = sphere_to_datum(&LatticeVector::e(4, 3), &chart).unwrap();
        let b = sphere_to_datum(&LatticeVector::e(4, 4), &chart).unwrap();
        let (Shape::Plane { normal: n1, offset: o1 }, Shape::Plane { normal: n2, offset: o2 }) = (&a.shape, &b.shape) else {
            panic!("expected planes");
        };
        // Opposite inward normals, one unit apart.
        assert!((n1[0] + n2[0]).abs() < 1e-12 && (n1[1] + n2[1]).abs() < 1e-12);
        assert!(((o1 + o2).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn e1_has_radius_half_and_touches_both_lines() {
        let chart = EuclideanChart::new(&LatticeVector::strip_point(4)).unwrap();
        let c = sphere_to_datum(&LatticeVector::e(4, 1), &chart).unwrap();
        let Shape::Circle { radius, .. } = c.shape else { panic!() };
        assert!((radius - 0.5).abs() < 1e-15);
        for j in [3, 4] {
            let l = sphere_to_datum(&LatticeVector::e(4, j), &chart).unwrap();
            assert!(tangency_residual(&c.shape, &l.shape).unwrap() < 1e-12);
        }
    }

    #[test]
    fn chart_matches_exact_distance() {
        let e = LatticeVector::strip_point(5);
        let chart = EuclideanChart::new(&e).unwrap();
        let ms: Vec<LatticeVector> = (1..=3).map(|i| LatticeVector::e(5, i)).collect();
        let pts: Vec<LatticeVector> = ms.iter().map(|m| center(m, &e).unwrap()).collect();
        for a in &pts {
            for b in &pts {
                let exact = to_f64(&euclid_dist2(a, b, &e).unwrap());
                let pa = chart.point(a).unwrap();
                let pb = chart.point(b).unwrap();
                let d2: f64 = pa.iter().zip(&pb).map(|(x, y)| (x - y) * (x - y)).sum();
                assert!((d2 - exact).abs() <= 1e-12 * exact.max(1.0));
            }
        }
    }

    #[test]
    fn empty_render_is_an_error() {
        assert_eq!(emit_svg(&[]), Err(Error::EmptyRender));
    }

    #[test]
    fn rho5_section_big_spheres_have_radius_half() {
        let fig = render_packing(5, 8).unwrap();
        let big: Vec<&CircleDatum> = fig.data.iter().filter(|d| d.curvature == BigInt::from(2)).collect();
        assert!(!big.is_empty());
        for d in big {
            let Shape::Circle { radius, .. } = d.shape else { panic!() };
            assert!(radius <= 0.5 + 1e-12);
        }
        assert!(fig.svg.starts_with("<?xml"));
    }
}
