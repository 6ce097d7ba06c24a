use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lorentz::{dot_unchecked, norm2, BilinearForm};
use crate::vector::LatticeVector;

use super::descent::{base_cluster, Cluster};
use super::fast::FastVec;
use super::group::GeneratorSet;

/// A distinct pair with `m⊙m′ > −1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub a: LatticeVector,
    pub b: LatticeVector,
    pub product: BigInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct PackingReport {
    pub rho: usize,
    pub records: usize,
    pub pairs: u64,
    pub tangent_pairs: u64,
    pub disjoint_pairs: u64,
    pub violations: Vec<PairViolation>,
    pub negative_curvatures: usize,
    pub even_parity: usize,
    pub non_unit: usize,
    pub passed: bool,
    pub first_failure: Option<String>,
}

/// Checks Property (a) on every distinct pair, non-negative curvature in
/// perspective `e`, `m⊙m = 1`, and oddness of `m⊙e_ρ`.
pub fn verify_packing(vectors: &[LatticeVector], e: &LatticeVector) -> Result<PackingReport> {
    let rho = e.rho();
    let fast: Vec<FastVec> = vectors.iter().map(FastVec::from_lattice).collect::<Result<_>>()?;
    let er = FastVec::from_lattice(&LatticeVector::e(rho, rho))?;
    let ef = FastVec::from_lattice(e)?;

    // Per-row counts: (tangent, disjoint, violations).
    let rows: Vec<(u64, u64, Vec<(usize, usize, i64)>)> = (0..fast.len())
        .into_par_iter()
        .map(|i| -> Result<_> {
            let (mut t, mut d, mut bad) = (0, 0, Vec::new());
            for j in i + 1..fast.len() {
                let p = fast[i].dot(&fast[j])?;
                match p.cmp(&-1) {
                    std::cmp::Ordering::Equal => t += 1,
                    std::cmp::Ordering::Less => d += 1,
                    std::cmp::Ordering::Greater => bad.push((i, j, p)),
                }
            }
            Ok((t, d, bad))
        })
        .collect::<Result<_>>()?;

    let mut report = PackingReport {
        rho,
        records: vectors.len(),
        pairs: 0,
        tangent_pairs: 0,
        disjoint_pairs: 0,
        violations: Vec::new(),
        negative_curvatures: 0,
        even_parity: 0,
        non_unit: 0,
        passed: true,
        first_failure: None,
    };
    for (t, d, bad) in rows {
        report.tangent_pairs += t;
        report.disjoint_pairs += d;
        report.pairs += t + d + bad.len() as u64;
        for (i, j, p) in bad {
            report.violations.push(PairViolation {
                a: vectors[i].clone(),
                b: vectors[j].clone(),
                product: p.into(),
            });
        }
    }
    let mut failures = Vec::new();
    if let Some(v) = report.violations.first() {
        failures.push(format!("{} ⊙ {} = {} > -1", v.a, v.b, v.product));
    }
    for (m, f) in vectors.iter().zip(&fast) {
        if f.dot(f)? != 1 {
            report.non_unit += 1;
            failures.push(format!("{m} has m⊙m ≠ 1"));
        }
        if -ef.dot(f)? < 0 {
            report.negative_curvatures += 1;
            failures.push(format!("{m} has negative curvature"));
        }
        if f.dot(&er)? % 2 == 0 {
            report.even_parity += 1;
            failures.push(format!("{m} has even m⊙e_ρ"));
        }
    }
    report.passed = failures.is_empty();
    report.first_failure = failures.into_iter().next();
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct DescartesReport {
    pub rho: usize,
    pub curvatures: Vec<BigInt>,
    /// `kᵗJ⁻¹k`.
    #[serde(serialize_with = "display")]
    pub value: BigRational,
    pub inverse_verified: bool,
    /// `((Σk)², 2Σk²)` at ρ = 4.
    pub classical: Option<(BigInt, BigInt)>,
    pub passed: bool,
}

/// `J·J⁻¹ = I` for the closed-form inverse.
pub fn inverse_is_exact(rho: usize) -> Result<bool> {
    let form = BilinearForm::new(rho)?;
    let inv = form.inverse();
    let gram = form.gram();
    Ok((0..rho).all(|i| {
        (0..rho).all(|j| {
            let s: BigRational = (0..rho)
                .map(|k| BigRational::from_integer(gram[i][k].clone()) * &inv[k][j])
                .sum();
            s == if i == j { BigRational::one() } else { BigRational::zero() }
        })
    }))
}

/// The generalized Descartes relation `kᵗJ⁻¹k = 0` for the curvatures
/// `k_i = −m_i⊙E` of a tangent cluster, plus the classical identity at ρ = 4.
pub fn descartes_check(cluster: &Cluster, e: &LatticeVector) -> Result<DescartesReport> {
    let rho = e.rho();
    if cluster.members.len() != rho {
        return Err(Error::DimensionMismatch {
            left: rho,
            right: cluster.members.len(),
        });
    }
    if !cluster.is_mutually_tangent() {
        return Err(Error::NotCertified("cluster is not mutually tangent".into()));
    }
    let k: Vec<BigInt> = cluster.members.iter().map(|m| -dot_unchecked(m, e)).collect();
    let inv = BilinearForm::new(rho)?.inverse();
    let mut value = BigRational::zero();
    for (i, ki) in k.iter().enumerate() {
        for (j, kj) in k.iter().enumerate() {
            value += &inv[i][j] * BigRational::from_integer(ki * kj);
        }
    }
    let classical = (rho == 4).then(|| {
        let s: BigInt = k.iter().sum();
        let q: BigInt = k.iter().map(|x| x * x).sum();
        (&s * &s, q * 2)
    });
    let inverse_verified = inverse_is_exact(rho)?;
    let passed = value.is_zero() && inverse_verified && classical.as_ref().is_none_or(|(a, b)| a == b);
    Ok(DescartesReport {
        rho,
        curvatures: k,
        value,
        inverse_verified,
        classical,
        passed,
    })
}

fn display<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn random_word(rng: &mut ChaCha8Rng, gens: usize, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    let mut word: Vec<usize> = Vec::with_capacity(len);
    while word.len() < len {
        let g = rng.gen_range(0..gens);
        // Skip immediate cancellations; every generator is an involution.
        if word.last() != Some(&g) {
            word.push(g);
        }
    }
    word
}

/// Images of the base cluster under `count` random words of length at most
/// `max_len`, seeded for reproducibility.
pub fn random_clusters(group: &GeneratorSet, count: usize, max_len: usize, seed: u64) -> Vec<Cluster> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = base_cluster(group.rho);
    (0..count)
        .map(|_| {
            let word = random_word(&mut rng, group.len(), max_len);
            Cluster {
                members: base.iter().map(|b| group.apply_word(&word, b)).collect(),
                word: group.word_labels(&word),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ParityReport {
    pub rho: usize,
    pub samples: usize,
    pub even: usize,
    pub non_unit: usize,
    pub negative_curvature: usize,
    pub passed: bool,
}

/// Samples `γ·e_ρ` for random words `γ` and checks `m⊙m = 1`, `m⊙e_ρ`
/// odd and `−m⊙E ≥ 0` exactly.
pub fn parity_sample(group: &GeneratorSet, samples: usize, max_len: usize, seed: u64) -> ParityReport {
    let rho = group.rho;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let er = LatticeVector::e(rho, rho);
    let e = LatticeVector::strip_point(rho);
    let words: Vec<Vec<usize>> = (0..samples)
        .map(|_| random_word(&mut rng, group.len(), max_len))
        .collect();
    let flags: Vec<(bool, bool, bool)> = words
        .par_iter()
        .map(|w| {
            let m = group.apply_word(w, &er);
            (
                dot_unchecked(&m, &er).is_even(),
                norm2(&m) != BigInt::one(),
                dot_unchecked(&m, &e).is_positive(),
            )
        })
        .collect();
    let count = |f: fn(&(bool, bool, bool)) -> bool| flags.iter().filter(|x| f(x)).count();
    let even = count(|x| x.0);
    let non_unit = count(|x| x.1);
    let negative_curvature = count(|x| x.2);
    ParityReport {
        rho,
        samples,
        even,
        non_unit,
        negative_curvature,
        passed: even == 0 && non_unit == 0 && negative_curvature == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::group::build_group;

    #[test]
    fn base_pair_is_tangent() {
        let r = verify_packing(&base_cluster(5), &LatticeVector::strip_point(5)).unwrap();
        assert!(r.passed);
        assert_eq!(r.tangent_pairs, 10);
    }

    #[test]
    fn overlapping_pair_is_reported() {
        let a = LatticeVector::from_slice(&[0, 0, 0, 1]);
        let b = LatticeVector::from_slice(&[-2, -2, -2, 1]);
        assert_eq!(norm2(&b), BigInt::one());
        let r = verify_packing(&[a, b], &LatticeVector::strip_point(4)).unwrap();
        assert!(!r.passed);
        assert_eq!(r.violations[0].product, BigInt::from(7));
    }

    #[test]
    fn strip_seed_descartes() {
        let c = Cluster {
            members: base_cluster(4),
            word: vec![],
        };
        let r = descartes_check(&c, &LatticeVector::strip_point(4)).unwrap();
        assert_eq!(r.curvatures, [2, 2, 0, 0].map(BigInt::from));
        assert_eq!(r.classical, Some((BigInt::from(16), BigInt::from(16))));
        assert!(r.passed);
    }

    #[test]
    fn inverse_closed_form() {
        for rho in 4..=10 {
            assert!(inverse_is_exact(rho).unwrap());
        }
    }

    #[test]
    fn random_clusters_are_tangent() {
        let g = build_group(6).unwrap();
        for c in random_clusters(&g, 20, 12, 7) {
            assert!(c.is_mutually_tangent());
        }
    }

    #[test]
    fn parity_small() {
        let g = build_group(9).unwrap();
        assert!(parity_sample(&g, 200, 20, 1).passed);
    }
}
