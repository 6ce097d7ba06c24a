use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::domain::{build_faces, edge_dome_point, solve_vertices};
use crate::error::{Error, Result};
use crate::lorentz::{dot_unchecked, norm2};
use crate::vector::{check_rho, LatticeVector, RationalVector};

use super::fast::FastVec;
use super::group::GeneratorSet;

pub const DEFAULT_STEP_CAP: usize = 1_000_000;

/// `Q_1 + 3E` with `Q_1 = R_{e_1}(E) = E + 4e_1`.
pub fn height_base(rho: usize) -> LatticeVector {
    let e = LatticeVector::strip_point(rho);
    let q1 = e.add_scaled(&BigInt::from(4), &LatticeVector::e(rho, 1));
    q1.add_scaled(&BigInt::from(3), &e)
}

/// `h(m) = −(Q_1 + 3E)⊙m`.
pub fn height(m: &LatticeVector) -> Result<BigInt> {
    check_rho(m.rho())?;
    Ok(-dot_unchecked(&height_base(m.rho()), m))
}

/// A timelike lattice point strictly inside every face of the fundamental
/// domain.
///
/// `Q_1 + 3E` lies on several vertical walls, which makes it useless for
/// breaking ties between wall reflections; this point is the sum of the
/// normalized vertices of the (cut) prism, lifted along `E` until it clears
/// every dome.
pub fn interior_point(rho: usize) -> Result<LatticeVector> {
    check_rho(rho)?;
    let faces = build_faces(rho)?;
    let (q, qp) = solve_vertices(rho)?;
    let e = LatticeVector::strip_point(rho);
    let mut points: Vec<LatticeVector> = Vec::new();
    match rho {
        9 | 10 => {
            // Keep the side of the cutting wall through P_1 and E.
            let (wall, kept, cut): (usize, Vec<usize>, Vec<usize>) = if rho == 9 {
                (11, vec![1, 5, 6, 7], vec![2, 3, 4])
            } else {
                (13, vec![1, 5, 6, 7, 8], vec![2, 3, 4])
            };
            let wall = &faces[wall - 1];
            for side in [&q, &qp] {
                for &i in &kept {
                    points.push(side[i - 1].clone());
                }
                for &a in &cut {
                    for &b in &kept {
                        let p = edge_dome_point(&side[a - 1], &side[b - 1], wall, &e, &side[a - 1])?;
                        points.push(p.to_lattice_ray().ok_or_else(|| {
                            Error::Degenerate("irrational crossing of a vertical wall".into())
                        })?);
                    }
                }
            }
        }
        _ => points.extend(q.iter().chain(&qp).cloned()),
    }
    let mut sum = RationalVector::new(vec![BigRational::zero(); rho]);
    for p in &points {
        let pe = dot_unchecked(p, &e);
        sum = sum.add_scaled(&BigRational::new(BigInt::from(-1), pe), &p.to_rational());
    }
    let base = sum.clear_denominators();
    let mut t = BigInt::one();
    for _ in 0..200 {
        let cand = base.add_scaled(&t, &e);
        let strict = faces
            .iter()
            .all(|f| dot_unchecked(&f.vector, &cand).is_negative());
        if strict && norm2(&cand).is_negative() {
            return Ok(cand);
        }
        t *= 2;
    }
    Err(Error::Degenerate("no strictly interior point found".into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descent {
    pub terminal: LatticeVector,
    /// Generator indices in the order applied to `m`.
    pub word: Vec<usize>,
    pub labels: Vec<String>,
}

/// Descent state shared by [`descend`] and [`find_cluster`].
pub struct Descender<'a> {
    group: &'a GeneratorSet,
    e: FastVec,
    interior: FastVec,
    pub step_cap: usize,
}

impl<'a> Descender<'a> {
    pub fn new(group: &'a GeneratorSet) -> Result<Self> {
        let rho = group.rho;
        Ok(Self {
            group,
            e: FastVec::from_lattice(&LatticeVector::strip_point(rho))?,
            interior: FastVec::from_lattice(&interior_point(rho)?)?,
            step_cap: DEFAULT_STEP_CAP,
        })
    }

    /// `(curvature, −P_int⊙m)`, compared lexicographically.
    fn key(&self, m: &FastVec) -> Result<(i64, i64)> {
        Ok((-self.e.dot(m)?, -self.interior.dot(m)?))
    }

    /// Repeatedly applies the generator giving the smallest key, as long as
    /// it is strictly smaller than the current one; ties go to the lowest
    /// generator index.
    pub fn descend(&self, m: &LatticeVector) -> Result<Descent> {
        let mut cur = FastVec::from_lattice(m)?;
        let mut key = self.key(&cur)?;
        let mut word = Vec::new();
        loop {
            if word.len() >= self.step_cap {
                return Err(Error::IterationCap(self.step_cap));
            }
            let mut best: Option<(usize, FastVec, (i64, i64))> = None;
            for (i, g) in self.group.generators.iter().enumerate() {
                let next = g.apply_fast(&cur)?;
                let k = self.key(&next)?;
                if k < key && best.as_ref().is_none_or(|(_, _, bk)| k < *bk) {
                    best = Some((i, next, k));
                }
            }
            let Some((i, next, k)) = best else { break };
            word.push(i);
            cur = next;
            key = k;
        }
        Ok(Descent {
            terminal: cur.to_lattice(),
            labels: self.group.word_labels(&word),
            word,
        })
    }
}

pub fn descend(group: &GeneratorSet, m: &LatticeVector) -> Result<Descent> {
    Descender::new(group)?.descend(m)
}

/// `ρ` mutually tangent spheres, with the word carrying the base cluster
/// onto them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub members: Vec<LatticeVector>,
    pub word: Vec<String>,
}

impl Cluster {
    /// Every pairwise product is exactly −1 and every member has `m⊙m = 1`.
    pub fn is_mutually_tangent(&self) -> bool {
        let one = BigInt::one();
        let minus = -BigInt::one();
        self.members.iter().enumerate().all(|(i, a)| {
            norm2(a) == one
                && self.members[i + 1..]
                    .iter()
                    .all(|b| dot_unchecked(a, b) == minus)
        })
    }

    pub fn contains(&self, m: &LatticeVector) -> bool {
        self.members.contains(m)
    }
}

pub fn base_cluster(rho: usize) -> Vec<LatticeVector> {
    (1..=rho).map(|i| LatticeVector::e(rho, i)).collect()
}

/// Certifies `m ∈ Γ·e_ρ` by descending to the base cluster, and returns
/// the image of the base cluster under the inverse word.
///
/// When greedy descent stalls away from the base cluster, a bounded
/// breadth-first search from the terminal looks for a short word to one of
/// `e_1 … e_ρ` without raising the curvature.
pub fn find_cluster(group: &GeneratorSet, m: &LatticeVector) -> Result<Cluster> {
    let rho = group.rho;
    check_rho(m.rho())?;
    if norm2(m) != BigInt::one() {
        return Err(Error::NotCertified(format!("{m} has m⊙m ≠ 1")));
    }
    let d = Descender::new(group)?;
    let descent = d.descend(m)?;
    let base = base_cluster(rho);
    let mut word = descent.word.clone();
    if !base.contains(&descent.terminal) {
        word.extend(search_to_base(group, &descent.terminal, 200_000)?);
    }
    // w(m) ∈ base, so m = w⁻¹(base member); generators are involutions.
    let inverse: Vec<usize> = word.iter().rev().copied().collect();
    let members: Vec<LatticeVector> = base.iter().map(|b| group.apply_word(&inverse, b)).collect();
    let cluster = Cluster {
        members,
        word: group.word_labels(&inverse),
    };
    if !cluster.contains(m) || !cluster.is_mutually_tangent() {
        return Err(Error::NotCertified(format!("cluster for {m} failed verification")));
    }
    Ok(cluster)
}

fn search_to_base(group: &GeneratorSet, start: &LatticeVector, cap: usize) -> Result<Vec<usize>> {
    let rho = group.rho;
    let e = FastVec::from_lattice(&LatticeVector::strip_point(rho))?;
    let base: Vec<FastVec> = base_cluster(rho)
        .iter()
        .map(FastVec::from_lattice)
        .collect::<Result<_>>()?;
    let s = FastVec::from_lattice(start)?;
    let k0 = -e.dot(&s)?;
    let mut parent: HashMap<FastVec, (FastVec, usize)> = HashMap::new();
    let mut queue = VecDeque::from([s]);
    parent.insert(s, (s, usize::MAX));
    while let Some(cur) = queue.pop_front() {
        if base.contains(&cur) {
            let mut word = Vec::new();
            let mut at = cur;
            while at != s {
                let (p, g) = parent[&at];
                word.push(g);
                at = p;
            }
            word.reverse();
            return Ok(word);
        }
        for (i, g) in group.generators.iter().enumerate() {
            let next = g.apply_fast(&cur)?;
            if -e.dot(&next)? > k0 || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, (cur, i));
            if parent.len() > cap {
                return Err(Error::NotCertified(format!(
                    "no word from {start} to the base cluster within {cap} states"
                )));
            }
            queue.push_back(next);
        }
    }
    Err(Error::NotCertified(format!("{start} is not connected to the base cluster")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::group::build_group;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_slice(c)
    }

    #[test]
    fn heights_rho4() {
        // Q_1 + 3E = (4,0,4,4).
        assert_eq!(height_base(4), lv(&[4, 0, 4, 4]));
        assert_eq!(height(&lv(&[0, 0, 0, 1])).unwrap(), BigInt::from(4));
        assert_eq!(height(&lv(&[0, 1, 0, 0])).unwrap(), BigInt::from(12));
        assert_eq!(height(&lv(&[2, -1, 2, 2])).unwrap(), BigInt::from(12));
    }

    #[test]
    fn interior_points_are_strict() {
        for rho in 4..=10 {
            let p = interior_point(rho).unwrap();
            assert!(norm2(&p).is_negative());
            for f in build_faces(rho).unwrap() {
                assert!(dot_unchecked(&f.vector, &p).is_negative(), "rho {rho} {}", f.label());
            }
        }
    }

    #[test]
    fn base_members_are_terminal() {
        let g = build_group(5).unwrap();
        let d = descend(&g, &LatticeVector::e(5, 5)).unwrap();
        assert!(d.word.is_empty());
        assert_eq!(d.terminal, LatticeVector::e(5, 5));
    }

    #[test]
    fn cluster_for_rho4_example() {
        let g = build_group(4).unwrap();
        let m = lv(&[2, -1, 2, 2]);
        let c = find_cluster(&g, &m).unwrap();
        assert!(c.contains(&m));
        assert!(c.is_mutually_tangent());
        assert_eq!(c.members.len(), 4);
        let base = find_cluster(&g, &LatticeVector::e(4, 4)).unwrap();
        assert_eq!(base.members, base_cluster(4));
    }
}
