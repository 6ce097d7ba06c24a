//! Coxeter-graph data for reflective generator sets, read off exactly from
//! pairwise products.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::domain::{build_faces, FaceKind};
use crate::error::{Error, Result};
use crate::lorentz::{dot, norm2, reflect_integral};
use crate::vector::{check_rho, LatticeVector};

/// Relation between the mirrors of two reflections.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Relation {
    /// `n⊙m = 0`: commuting reflections, no edge.
    Orthogonal,
    /// Mirrors meeting at angle `π/k`, `k ∈ {3, 4, 6}`.
    Order { k: u32 },
    /// `q = 1`: mirrors meeting at infinity.
    Parallel,
    /// `q > 1`: disjoint mirrors.
    Ultraparallel {
        #[serde(serialize_with = "display")]
        weight: BigRational,
    },
    /// `0 < q < 1` but not `cos²(π/k)` for `k ∈ {3, 4, 6}`.
    NonCrystallographic {
        #[serde(serialize_with = "display")]
        q: BigRational,
    },
}

fn display<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl Relation {
    pub fn is_edge(&self) -> bool {
        *self != Relation::Orthogonal
    }
}

/// `q = (n⊙m)² / ((n⊙n)(m⊙m))`.
pub fn cos2(n: &LatticeVector, m: &LatticeVector) -> Result<BigRational> {
    let nn = norm2(n);
    let mm = norm2(m);
    for (v, s) in [(n, &nn), (m, &mm)] {
        if !s.is_positive() {
            return Err(Error::NotSpacelike(format!("{v} (self-product {s})")));
        }
    }
    let nm = dot(n, m)?;
    Ok(BigRational::new(&nm * &nm, nn * mm))
}

pub fn pair_relation(n: &LatticeVector, m: &LatticeVector) -> Result<Relation> {
    let q = cos2(n, m)?;
    let frac = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    Ok(if q.is_zero() {
        Relation::Orthogonal
    } else if q == frac(1, 4) {
        Relation::Order { k: 3 }
    } else if q == frac(1, 2) {
        Relation::Order { k: 4 }
    } else if q == frac(3, 4) {
        Relation::Order { k: 6 }
    } else if q.is_one() {
        Relation::Parallel
    } else if q > BigRational::one() {
        Relation::Ultraparallel { weight: q }
    } else {
        Relation::NonCrystallographic { q }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub label: String,
    pub vector: LatticeVector,
    pub self_product: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxeterGraph {
    pub name: String,
    pub nodes: Vec<Node>,
    /// Every non-orthogonal pair, `i < j`.
    pub edges: Vec<Edge>,
    /// Free-form remarks, e.g. how a demo vector was obtained.
    pub notes: Vec<String>,
}

impl CoxeterGraph {
    pub fn from_vectors(name: &str, nodes: &[(String, LatticeVector)]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..nodes.len())
            .flat_map(|i| (i + 1..nodes.len()).map(move |j| (i, j)))
            .collect();
        let relations: Vec<Relation> = pairs
            .par_iter()
            .map(|&(i, j)| pair_relation(&nodes[i].1, &nodes[j].1))
            .collect::<Result<_>>()?;
        let edges = pairs
            .into_iter()
            .zip(relations)
            .filter(|(_, r)| r.is_edge())
            .map(|((i, j), relation)| Edge { i, j, relation })
            .collect();
        Ok(Self {
            name: name.to_string(),
            nodes: nodes
                .iter()
                .map(|(label, v)| Node {
                    label: label.clone(),
                    vector: v.clone(),
                    self_product: norm2(v),
                })
                .collect(),
            edges,
            notes: Vec::new(),
        })
    }

    pub fn relation(&self, i: usize, j: usize) -> Relation {
        let (i, j) = (i.min(j), i.max(j));
        self.edges
            .iter()
            .find(|e| e.i == i && e.j == j)
            .map(|e| e.relation.clone())
            .unwrap_or(Relation::Orthogonal)
    }

    pub fn self_products(&self) -> Vec<BigInt> {
        self.nodes.iter().map(|n| n.self_product.clone()).collect()
    }

    /// Graphviz rendering. Order-3 edges are plain, order 4 and 6 carry
    /// their label, parallel edges are bold and ultraparallel ones dashed
    /// with the weight `q`.
    pub fn to_dot(&self) -> String {
        let mut out = format!("graph \"{}\" {{\n  node [shape=circle];\n", self.name);
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\", xlabel=\"{}\"];", n.label, n.self_product);
        }
        for e in &self.edges {
            let attrs = match &e.relation {
                Relation::Orthogonal => continue,
                Relation::Order { k: 3 } => String::new(),
                Relation::Order { k } => format!(" [label=\"{k}\"]"),
                Relation::Parallel => " [style=bold, label=\"∞\"]".to_string(),
                Relation::Ultraparallel { weight } => format!(" [style=dashed, label=\"{weight}\"]"),
                Relation::NonCrystallographic { q } => format!(" [style=dotted, label=\"q={q}\"]"),
            };
            let _ = writeln!(out, "  n{} -- n{}{attrs};", e.i, e.j);
        }
        out.push_str("}\n");
        out
    }
}

/// Graph on the reflection faces `F_1 … F_{ρ+1}` (and the extra dome at
/// ρ = 10), labelled by face index.
pub fn graph_for(rho: usize) -> Result<CoxeterGraph> {
    check_rho(rho)?;
    let nodes: Vec<(String, LatticeVector)> = build_faces(rho)?
        .into_iter()
        .filter(|f| f.kind == FaceKind::Reflection)
        .map(|f| (f.index.to_string(), f.vector))
        .collect();
    CoxeterGraph::from_vectors(&format!("Gamma_{rho}"), &nodes)
}

fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_slice(c)
}

/// The Viète mirrors `s_i` at ρ = 4: entries 1 except −1 at position `i`.
pub fn viete_vector(i: usize) -> LatticeVector {
    let mut c = [1i64; 4];
    c[i - 1] = -1;
    lv(&c)
}

/// `Γ_Ap = ⟨R_{s_1}, …, R_{s_4}⟩`.
pub fn apollonian_graph() -> Result<CoxeterGraph> {
    let nodes: Vec<_> = (1..=4).map(|i| (format!("s_{i}"), viete_vector(i))).collect();
    CoxeterGraph::from_vectors("Gamma_Ap", &nodes)
}

/// `Γ = ⟨R_{v_12}, R_{v_34}, R_{v_14}, R_{s_2}⟩`, the full symmetry group
/// of the ρ = 4 packing.
pub fn symmetry_graph() -> Result<CoxeterGraph> {
    let nodes = vec![
        ("v_12".to_string(), LatticeVector::v(4, 1, 2)),
        ("v_34".to_string(), LatticeVector::v(4, 3, 4)),
        ("v_14".to_string(), LatticeVector::v(4, 1, 4)),
        ("s_2".to_string(), viete_vector(2)),
    ];
    CoxeterGraph::from_vectors("Gamma", &nodes)
}

/// The mirror `w` of the index-two subgroup `Γ′`: `w = R_{s_2}(v_12)`.
///
/// `Γ → ℤ/2` sending `R_{s_2} ↦ 1` and the transpositions to 0 is well
/// defined because `s_2` is orthogonal to `v_34` and `v_14`; its kernel is
/// generated by the three transpositions and `R_{s_2} R_{v_12} R_{s_2} =
/// R_w`. Since `R_{s_2}` fixes `e_4`, `Γ′·e_4 = Γ·e_4`. In the strip
/// perspective `w` is the vertical line through the tangency of `e_1` with
/// the other curvature-2 neighbour `R_{s_2}(e_2)`.
pub fn gamma_prime_w() -> Result<LatticeVector> {
    reflect_integral(&viete_vector(2), &LatticeVector::v(4, 1, 2))
}

/// `Γ′ = ⟨R_{v_12}, R_{v_34}, R_{v_14}, R_w⟩`.
pub fn gamma_prime_graph() -> Result<CoxeterGraph> {
    let w = gamma_prime_w()?;
    let nodes = vec![
        ("v_12".to_string(), LatticeVector::v(4, 1, 2)),
        ("v_34".to_string(), LatticeVector::v(4, 3, 4)),
        ("v_14".to_string(), LatticeVector::v(4, 1, 4)),
        ("w".to_string(), w.clone()),
    ];
    let mut g = CoxeterGraph::from_vectors("Gamma_prime", &nodes)?;
    g.notes.push(format!("w = R_s2(v_12) = ({w})"));
    Ok(g)
}
