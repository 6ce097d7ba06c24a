use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lorentz::is_isotropic;
use crate::vector::{check_rho, LatticeVector};

use super::descent::height_base;
use super::fast::FastVec;
use super::group::{build_group, GeneratorSet};

/// Which part of the orbit is reported.
///
/// In the strip perspective every curvature level is an infinite
/// translation family, so a finite window is needed. The cell is the union
/// of the prism's images under the permutations of `e_1 … e_{ρ−2}` (the
/// transposition walls generate them): its walls are `w_ab = e_a − e_b + E`
/// for `a ≠ b ≤ ρ−2`, the images of the `u`-face. A sphere is kept when
/// `w_ab⊙c̃ ≤ margin` for its normalized center `c̃` (`c̃⊙E = −1`). The
/// two boundary planes are always kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Window {
    Cell,
    /// The cell widened by a rational margin.
    Margin { numer: i64, denom: i64 },
    /// Every retained record inside the final height bound; stabilization
    /// is still judged on the cell.
    Explored,
}

#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    pub kmax: i64,
    /// `None` for the strip perspective `E = e_{ρ−1} + e_ρ`.
    pub perspective: Option<LatticeVector>,
    pub window: Window,
    /// Starting search bound: the cell margin in the strip perspective
    /// (default 1), the height `h` otherwise (default 8). It grows by the
    /// same amount each round until stable.
    pub initial_bound: Option<i64>,
    /// Consecutive deepenings that must leave the retained set unchanged.
    pub stable_rounds: usize,
    /// Explored-state cap; hitting it sets the truncation flag.
    pub node_cap: usize,
}

impl EnumerateOptions {
    pub fn new(kmax: i64) -> Self {
        Self {
            kmax,
            perspective: None,
            window: Window::Cell,
            initial_bound: None,
            stable_rounds: 2,
            node_cap: 8_000_000,
        }
    }
}

/// A sphere `H_m` of the packing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SphereRecord {
    pub vector: LatticeVector,
    pub curvature: i64,
    /// `h(m) = −(Q_1+3E)⊙m`.
    pub height: i64,
    /// Generator labels applied to `e_ρ`, first to last.
    pub word: Vec<String>,
}

/// What the growing search bound measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Distance of the normalized center past the cell walls.
    CellMargin,
    Height,
}

#[derive(Debug, Clone, Serialize)]
pub struct Enumeration {
    pub rho: usize,
    pub perspective: LatticeVector,
    pub kmax: i64,
    pub window: Window,
    pub records: Vec<SphereRecord>,
    pub bound_kind: BoundKind,
    /// Final value of the search bound.
    pub bound: i64,
    pub explored: usize,
    pub stabilized: bool,
    pub truncated: bool,
}

struct Node {
    v: FastVec,
    parent: u32,
    gen: u8,
    curvature: i64,
    height: i64,
    /// Cell excess `(num, den)`; `None` for planes.
    excess: Option<(i64, i64)>,
}

/// Position of a normalized center `c̃ = (E + 2k·m)/(2k²)` against the
/// cell walls `w_ab = e_a − e_b + E`.
struct Cell {
    e: FastVec,
    rho: usize,
}

impl Cell {
    /// `max_{a≠b} w_ab⊙c̃` as `(num, 2k²)`, `None` for planes. Since
    /// `e_a⊙c = 2c_a − Σc`, the maximum is `2(max c_a − min c_a) + E⊙c`
    /// over `a ≤ ρ−2`.
    fn excess(&self, v: &FastVec, k: i64) -> Result<Option<(i64, i64)>> {
        if k == 0 {
            return Ok(None);
        }
        let c = self.e.add_scaled(2 * k, v)?;
        let head = &c.coords()[..self.rho - 2];
        let spread = head.iter().max().unwrap() - head.iter().min().unwrap();
        let num = (2 * spread).checked_add(self.e.dot(&c)?).ok_or_else(|| Error::Degenerate("overflow".into()))?;
        Ok(Some((num, 2 * k * k)))
    }
}

/// How far the center of `H_m` lies past the cell walls in the strip
/// perspective (`≤ 0` inside the cell); `None` for planes.
pub fn cell_excess(m: &LatticeVector) -> Result<Option<num_rational::BigRational>> {
    let rho = m.rho();
    check_rho(rho)?;
    let e = FastVec::from_lattice(&LatticeVector::strip_point(rho))?;
    let v = FastVec::from_lattice(m)?;
    let cell = Cell { e, rho };
    Ok(cell
        .excess(&v, -e.dot(&v)?)?
        .map(|(num, den)| num_rational::BigRational::new(num.into(), den.into())))
}

fn within(excess: Option<(i64, i64)>, numer: i64, denom: i64) -> bool {
    match excess {
        None => true,
        Some((num, den)) => num as i128 * denom as i128 <= numer as i128 * den as i128,
    }
}

/// Breadth-first closure of `{e_ρ}` under `Γ_ρ`.
///
/// States with curvature outside `0 … kmax` (`≤ kmax` off the strip) are
/// dropped. In the strip perspective a state is expanded only while its
/// center lies within margin `M` of the cell; off the strip, while
/// `h ≤ M`. `M` grows in equal steps, resuming parked states, until the
/// retained set has not changed for `stable_rounds` steps. Levels expand in
/// parallel and merge serially in frontier order, so the output does not
/// depend on the thread count.
pub fn enumerate(rho: usize, opts: &EnumerateOptions) -> Result<Enumeration> {
    check_rho(rho)?;
    if opts.kmax < 0 {
        return Err(Error::Parse {
            input: opts.kmax.to_string(),
            reason: "kmax must be non-negative".into(),
        });
    }
    let strip = LatticeVector::strip_point(rho);
    let perspective = opts.perspective.clone().unwrap_or_else(|| strip.clone());
    if perspective.rho() != rho {
        return Err(Error::DimensionMismatch {
            left: rho,
            right: perspective.rho(),
        });
    }
    if !is_isotropic(&perspective) {
        return Err(Error::NotIsotropic(perspective.to_string()));
    }
    let is_strip = perspective == strip;
    let group = build_group(rho)?;
    let e = FastVec::from_lattice(&perspective)?;
    let base = FastVec::from_lattice(&height_base(rho))?;
    let window = if is_strip { opts.window.clone() } else { Window::Explored };
    let bound_kind = if is_strip { BoundKind::CellMargin } else { BoundKind::Height };
    let cell = Cell { e, rho };

    let keep = |k: i64| k <= opts.kmax && (!is_strip || k >= 0);
    let make = |v: FastVec, parent: u32, gen: u8| -> Result<Node> {
        let curvature = -e.dot(&v)?;
        Ok(Node {
            v,
            parent,
            gen,
            curvature,
            height: -base.dot(&v)?,
            excess: if is_strip { cell.excess(&v, curvature)? } else { None },
        })
    };
    let reachable = |n: &Node, bound: i64| match bound_kind {
        BoundKind::Height => n.height <= bound,
        BoundKind::CellMargin => within(n.excess, bound, 1),
    };
    let in_window = |window: &Window, n: &Node, bound: i64| {
        keep(n.curvature)
            && reachable(n, bound)
            && match *window {
                Window::Explored => true,
                Window::Cell => within(n.excess, 0, 1),
                Window::Margin { numer, denom } => within(n.excess, numer, denom),
            }
    };
    // The explored set keeps growing by translations, so stabilization is
    // judged on the cell whenever there is one.
    let judged = if is_strip && window == Window::Explored { Window::Cell } else { window.clone() };

    let root = FastVec::from_lattice(&LatticeVector::e(rho, rho))?;
    let mut nodes = vec![make(root, u32::MAX, u8::MAX)?];
    let mut index: FxHashMap<FastVec, u32> = FxHashMap::default();
    index.insert(root, 0);
    let mut bound = opts
        .initial_bound
        .unwrap_or(if is_strip { 1 } else { 8 })
        .max(1);
    let step = bound;
    let mut frontier: Vec<u32> = Vec::new();
    let mut parked: Vec<u32> = vec![0];
    let mut previous: Option<usize> = None;
    let mut stable = 0;
    let mut truncated = false;
    let mut stabilized = false;

    loop {
        let mut still = Vec::new();
        for id in parked {
            if reachable(&nodes[id as usize], bound) {
                frontier.push(id);
            } else {
                still.push(id);
            }
        }
        parked = still;
        while !frontier.is_empty() && !truncated {
            let children: Vec<Vec<Node>> = frontier
                .par_iter()
                .map(|&id| -> Result<Vec<Node>> {
                    let v = nodes[id as usize].v;
                    let mut out = Vec::with_capacity(group.len());
                    for (gi, g) in group.generators.iter().enumerate() {
                        let w = g.apply_fast(&v)?;
                        if keep(-e.dot(&w)?) && !index.contains_key(&w) {
                            out.push(make(w, id, gi as u8)?);
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;
            let mut next = Vec::new();
            for node in children.into_iter().flatten() {
                let w = node.v;
                if index.contains_key(&w) {
                    continue;
                }
                let id = nodes.len() as u32;
                if reachable(&node, bound) {
                    next.push(id);
                } else {
                    parked.push(id);
                }
                index.insert(w, id);
                nodes.push(node);
                if nodes.len() >= opts.node_cap {
                    truncated = true;
                    break;
                }
            }
            frontier = next;
        }
        if truncated {
            break;
        }
        // Only ever grows, so an equal count means an unchanged set.
        let count = nodes.par_iter().filter(|n| in_window(&judged, n, bound)).count();
        if previous == Some(count) {
            stable += 1;
            if stable >= opts.stable_rounds {
                stabilized = true;
                break;
            }
        } else {
            stable = 0;
        }
        previous = Some(count);
        if parked.is_empty() {
            // Nothing left to resume: the closure is complete.
            stabilized = true;
            break;
        }
        bound = bound.checked_add(step).ok_or(Error::IterationCap(nodes.len()))?;
    }

    let mut records = Vec::new();
    for n in &nodes {
        if in_window(&window, n, bound) {
            records.push(SphereRecord {
                vector: n.v.to_lattice(),
                curvature: n.curvature,
                height: n.height,
                word: word_of(&nodes, &group, n),
            });
        }
    }
    records.sort_by(|a, b| (a.curvature, &a.vector).cmp(&(b.curvature, &b.vector)));
    Ok(Enumeration {
        rho,
        perspective,
        kmax: opts.kmax,
        window,
        records,
        bound_kind,
        bound,
        explored: nodes.len(),
        stabilized,
        truncated,
    })
}

fn word_of(nodes: &[Node], group: &GeneratorSet, n: &Node) -> Vec<String> {
    let mut word = Vec::new();
    let mut cur = n;
    while cur.parent != u32::MAX {
        word.push(group.generators[cur.gen as usize].label.clone());
        cur = &nodes[cur.parent as usize];
    }
    word.reverse();
    word
}

impl Enumeration {
    /// `curvature,vector,word_length` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("curvature,vector,word_length\n");
        for r in &self.records {
            out.push_str(&format!("{},\"{}\",{}\n", r.curvature, r.vector, r.word.len()));
        }
        out
    }

    pub fn curvatures(&self) -> Vec<i64> {
        self.records.iter().map(|r| r.curvature).collect()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use num_bigint::BigInt;

    use super::*;
    use crate::domain::build_faces;
    use crate::lorentz::{dot, norm2};

    #[test]
    fn planes_match_brute_force_words() {
        let g = build_group(4).unwrap();
        let e = LatticeVector::strip_point(4);
        let mut seen = BTreeSet::from([LatticeVector::e(4, 4)]);
        let mut layer = vec![LatticeVector::e(4, 4)];
        for _ in 0..6 {
            let mut next = Vec::new();
            for m in &layer {
                for gen in &g.generators {
                    let w = gen.apply(m);
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        let planes: BTreeSet<LatticeVector> = seen
            .into_iter()
            .filter(|m| dot(m, &e).unwrap() == BigInt::from(0))
            .collect();
        let out = enumerate(4, &EnumerateOptions::new(0)).unwrap();
        let got: BTreeSet<LatticeVector> = out.records.into_iter().map(|r| r.vector).collect();
        assert_eq!(got, planes);
    }

    /// Every explored sphere whose center lies in the prism is in the cell,
    /// and every curvature level met anywhere is met in the cell.
    #[test]
    fn cell_covers_the_prism() {
        for (rho, kmax) in [(4, 40), (5, 12), (6, 10)] {
            let cell = enumerate(rho, &EnumerateOptions::new(kmax)).unwrap();
            let mut opts = EnumerateOptions::new(kmax);
            opts.window = Window::Explored;
            let all = enumerate(rho, &opts).unwrap();
            let in_cell: BTreeSet<&LatticeVector> = cell.records.iter().map(|r| &r.vector).collect();
            let e = LatticeVector::strip_point(rho);
            let faces = build_faces(rho).unwrap();
            for r in all.records.iter().filter(|r| r.curvature > 0) {
                let c = e.add_scaled(&BigInt::from(2 * r.curvature), &r.vector);
                let in_prism = faces[..rho - 2]
                    .iter()
                    .all(|f| dot(&f.vector, &c).unwrap() <= BigInt::from(0));
                assert!(!in_prism || in_cell.contains(&r.vector), "rho {rho}: {}", r.vector);
            }
            let levels = |x: &Enumeration| x.curvatures().into_iter().collect::<BTreeSet<_>>();
            assert_eq!(levels(&all), levels(&cell), "rho {rho}");
        }
    }

    #[test]
    fn kmax_zero_gives_the_two_planes() {
        let out = enumerate(4, &EnumerateOptions::new(0)).unwrap();
        let v: Vec<String> = out.records.iter().map(|r| r.vector.to_string()).collect();
        assert_eq!(v, ["0,0,0,1", "0,0,1,0"]);
        assert!(out.stabilized);
    }

    #[test]
    fn records_are_unit_and_in_range() {
        let out = enumerate(5, &EnumerateOptions::new(10)).unwrap();
        let e = LatticeVector::strip_point(5);
        for r in &out.records {
            assert_eq!(norm2(&r.vector), BigInt::from(1));
            let k = -dot(&r.vector, &e).unwrap();
            assert_eq!(k, BigInt::from(r.curvature));
            assert!((0..=10).contains(&r.curvature));
        }
    }

    #[test]
    fn words_reproduce_vectors() {
        let g = build_group(6).unwrap();
        let out = enumerate(6, &EnumerateOptions::new(8)).unwrap();
        for r in &out.records {
            let word: Vec<usize> = r
                .word
                .iter()
                .map(|l| g.labels().iter().position(|x| x == l).unwrap())
                .collect();
            assert_eq!(g.apply_word(&word, &LatticeVector::e(6, 6)), r.vector);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| enumerate(5, &EnumerateOptions::new(12)).unwrap().records)
        };
        assert_eq!(run(1), run(4));
    }
}
