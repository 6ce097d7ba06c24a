use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::lorentz::{
    canonical_ray, dot_unchecked, midpoint, norm2, phi_matrix, reflect, reflect_integral,
};
use crate::surd::SurdVector;
use crate::vector::{check_rho, signum, LatticeVector};

use super::checks::{edge_covered, edge_dome_point, face2_covered, vertex_side, CheckResult};
use super::faces::{build_faces, special, u_face_equation, Face, FaceKind, FaceRole};
use super::vertices::{prism_kernel_dimension, solve_vertices};

#[derive(Debug, Clone, Serialize)]
pub struct FaceEntry {
    pub label: String,
    pub name: String,
    pub role: FaceRole,
    pub kind: FaceKind,
    pub vector: LatticeVector,
    pub self_product: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Vertices {
    #[serde(rename = "Q")]
    pub q: Vec<LatticeVector>,
    #[serde(rename = "Qprime")]
    pub qprime: Vec<LatticeVector>,
}

/// A fully evaluated fundamental-domain case.
#[derive(Debug, Clone, Serialize)]
pub struct DomainCase {
    pub rho: usize,
    #[serde(skip)]
    pub faces: Vec<Face>,
    #[serde(rename = "faces")]
    pub face_entries: Vec<FaceEntry>,
    pub vertices: Vertices,
    pub special_points: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
}

impl DomainCase {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn face(&self, index: usize) -> &Face {
        &self.faces[index - 1]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "rho = {}", self.rho);
        for f in &self.face_entries {
            let _ = writeln!(
                out,
                "  {:<5} {:<10} ({})  self-product {}",
                f.label, f.name, f.vector, f.self_product
            );
        }
        for (i, (q, qp)) in self.vertices.q.iter().zip(&self.vertices.qprime).enumerate() {
            let _ = writeln!(out, "  Q_{} = ({q})   Q_{}' = ({qp})", i + 1, i + 1);
        }
        for (k, v) in &self.special_points {
            let _ = writeln!(out, "  {k} = {v}");
        }
        for c in &self.checks {
            let tag = match c.verdict {
                super::checks::Verdict::Pass => "pass",
                super::checks::Verdict::Fail => "FAIL",
                super::checks::Verdict::PaperDiscrepancy => "paper-discrepancy",
            };
            let _ = writeln!(out, "  [{tag}] {}: {}", c.name, c.value);
        }
        out
    }
}

/// Builds the case for `rho` and runs its whole checklist.
pub fn run_case(rho: usize) -> Result<DomainCase> {
    check_rho(rho)?;
    let faces = build_faces(rho)?;
    let (q, qp) = solve_vertices(rho)?;
    let mut ctx = Ctx {
        rho,
        e: LatticeVector::strip_point(rho),
        faces,
        q,
        qp,
        checks: Vec::new(),
        special: BTreeMap::new(),
    };
    ctx.common()?;
    match rho {
        4..=8 => ctx.single_dome(),
        9 => ctx.rho9()?,
        _ => ctx.rho10()?,
    }
    let face_entries = ctx
        .faces
        .iter()
        .map(|f| FaceEntry {
            label: f.label(),
            name: f.name.clone(),
            role: f.role,
            kind: f.kind,
            vector: f.vector.clone(),
            self_product: f.self_product().to_string(),
        })
        .collect();
    Ok(DomainCase {
        rho,
        face_entries,
        faces: ctx.faces,
        vertices: Vertices { q: ctx.q, qprime: ctx.qp },
        special_points: ctx.special,
        checks: ctx.checks,
    })
}

struct Ctx {
    rho: usize,
    e: LatticeVector,
    faces: Vec<Face>,
    q: Vec<LatticeVector>,
    qp: Vec<LatticeVector>,
    checks: Vec<CheckResult>,
    special: BTreeMap<String, String>,
}

fn sign_name(s: i8) -> &'static str {
    match s {
        1 => "> 0",
        -1 => "< 0",
        _ => "= 0",
    }
}

impl Ctx {
    fn f(&self, i: usize) -> &Face {
        &self.faces[i - 1]
    }

    fn qn(&self, i: usize) -> &LatticeVector {
        &self.q[i - 1]
    }

    fn qpn(&self, i: usize) -> &LatticeVector {
        &self.qp[i - 1]
    }

    /// Labelled prism vertices in table order.
    fn labelled_vertices(&self) -> Vec<(String, LatticeVector)> {
        let mut out: Vec<(String, LatticeVector)> = self
            .q
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("Q_{}", i + 1), v.clone()))
            .collect();
        out.extend(
            self.qp
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("Q_{}'", i + 1), v.clone())),
        );
        out
    }

    fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    /// Records `face⊙v` with the expected sign (`None` for "≥ 0").
    fn side(&mut self, face: usize, label: &str, v: &LatticeVector, expect: Option<i8>) {
        let f = self.f(face);
        let value = dot_unchecked(&f.vector, v);
        let s = signum(&value);
        let ok = match expect {
            Some(e) => s == e,
            None => s >= 0,
        };
        let rel = match expect {
            Some(e) => sign_name(e),
            None => ">= 0",
        };
        let name = format!("{}⊙{label} {rel}", f.label());
        self.push(CheckResult::new(name, vec![f.vector.to_string(), v.to_string()], value, ok));
    }

    fn side_nonpos(&mut self, face: usize, label: &str, v: &LatticeVector) {
        let f = self.f(face);
        let value = dot_unchecked(&f.vector, v);
        let name = format!("{}⊙{label} <= 0", f.label());
        let ok = !value.is_positive();
        self.push(CheckResult::new(name, vec![f.vector.to_string(), v.to_string()], value, ok));
    }

    fn side_surd(&mut self, face: usize, label: &str, p: &SurdVector, expect_nonneg: bool) {
        let f = self.f(face);
        let value = p.dot_lattice(&f.vector);
        let s = value.signum();
        let ok = if expect_nonneg { s >= 0 } else { s < 0 };
        let name = format!("{}⊙{label} {}", f.label(), if expect_nonneg { ">= 0" } else { "< 0" });
        self.push(CheckResult::new(name, vec![f.vector.to_string(), p.to_string()], value, ok));
    }

    fn equal(&mut self, name: String, got: &LatticeVector, want: &LatticeVector) {
        self.push(CheckResult::new(name, vec![want.to_string()], got, got == want));
    }

    fn common(&mut self) -> Result<()> {
        let rho = self.rho;
        let n_faces = match rho {
            9 => 12,
            10 => 14,
            _ => rho + 1,
        };
        self.push(CheckResult::new(
            "face count",
            vec![],
            self.faces.len(),
            self.faces.len() == n_faces,
        ));
        for i in 1..=self.faces.len() {
            let f = self.f(i).clone();
            let nn = f.self_product();
            let ok = if i <= rho + 1 {
                nn == BigInt::from(if i == rho { 1 } else { 4 })
            } else {
                nn.is_positive()
            };
            self.push(CheckResult::new(
                format!("{}⊙{} self-product", f.label(), f.label()),
                vec![f.vector.to_string()],
                nn,
                ok,
            ));
            if f.kind == FaceKind::Reflection {
                let integral = crate::lorentz::reflection_matrix(&f.vector).is_ok();
                self.push(CheckResult::new(
                    format!("{} reflection is integral", f.label()),
                    vec![f.vector.to_string()],
                    integral,
                    integral,
                ));
            }
        }
        let e = self.e.clone();
        for i in 1..=rho {
            self.side(i, "E", &e, Some(0));
        }
        let dim = prism_kernel_dimension(rho)?;
        self.push(CheckResult::new(
            "common solutions of F_1 … F_ρ form the ray of E",
            vec![e.to_string()],
            format!("dimension {dim}"),
            dim == 1,
        ));
        let u = self.f(rho - 2).vector.clone();
        let ok = (1..=rho).all(|i| {
            let x = LatticeVector::e(rho, i);
            dot_unchecked(&u, &x) == u_face_equation(&x) * -2
        });
        self.push(CheckResult::new(
            "u-face equation equals −½ u⊙x",
            vec![u.to_string()],
            ok,
            ok,
        ));
        // Q_1 + 3E lies in the closed H⁻ of every face.
        let interior = self.qn(1).add_scaled(&BigInt::from(3), &e);
        for i in 1..=self.faces.len() {
            self.side_nonpos(i, "(Q_1+3E)", &interior);
        }
        for (label, v) in self.labelled_vertices() {
            let isotropic = norm2(&v).is_zero();
            let d = dot_unchecked(&v, &LatticeVector::ones(rho));
            self.push(CheckResult::new(
                format!("{label} isotropic, primitive, {label}⊙D < 0"),
                vec![v.to_string()],
                &v,
                isotropic && v.is_primitive() && d.is_negative(),
            ));
        }
        Ok(())
    }

    /// ρ ≤ 8: the dome `F_{ρ+1}` covers every prism vertex.
    fn single_dome(&mut self) {
        let rho = self.rho;
        let dome = rho + 1;
        let e = self.e.clone();
        self.side(dome, "E", &e, Some(-1));
        let mut on_dome = Vec::new();
        for (label, v) in self.labelled_vertices() {
            self.side(dome, &label, &v, None);
            if vertex_side(self.f(dome), &v) == 0 {
                on_dome.push(label);
            }
        }
        let expected: Vec<String> = if rho == 8 { vec!["Q_4".into()] } else { vec![] };
        let ok = on_dome == expected;
        self.push(CheckResult::new(
            "vertices on the dome (cusps besides E)",
            vec![],
            format!("[{}]", on_dome.join(", ")),
            ok,
        ));
        if rho == 8 {
            self.special.insert("cusp".into(), self.qn(4).to_string());
        }
    }

    fn phi_checks(&mut self, p1: &LatticeVector, p2: &LatticeVector) {
        let e = self.e.clone();
        for (name, a, b) in [("φ_{P_1,E}", p1, &e), ("φ_{P_1,P_2}", p1, p2)] {
            let (ok, value) = match phi_matrix(a, b) {
                Ok(m) => {
                    let good = m.preserves_form() && m.is_involution() && m.preserves_future_cone();
                    (good, format!("integral, form-preserving: {good}"))
                }
                Err(err) => (false, err.to_string()),
            };
            self.push(CheckResult::new(
                format!("{name} ∈ O⁺(Λ)"),
                vec![a.to_string(), b.to_string()],
                value,
                ok,
            ));
        }
    }

    /// `P_2` is the midpoint, with `P_1` at infinity, of the centers of
    /// `e_ρ` and `f`, which have equal curvature there.
    fn p2_derivation(&mut self, p1: &LatticeVector, f: &LatticeVector, p2: &LatticeVector) -> Result<()> {
        let rho = self.rho;
        let er = LatticeVector::e(rho, rho);
        let ff = norm2(f);
        self.push(CheckResult::new("f⊙f = 1", vec![f.to_string()], &ff, ff == BigInt::from(1)));
        let ke = -dot_unchecked(&er, p1);
        let kf = -dot_unchecked(f, p1);
        self.push(CheckResult::new(
            format!("e_{rho} and f have equal positive curvature from P_1"),
            vec![er.to_string(), f.to_string(), p1.to_string()],
            format!("{ke} and {kf}"),
            ke == kf && ke.is_positive(),
        ));
        let c1 = reflect_integral(&er, p1)?;
        let c2 = reflect_integral(f, p1)?;
        let mid = midpoint(&c1, &c2, p1)?;
        self.equal("P_2 = midpoint of R_{e_ρ}(P_1), R_f(P_1) with P_1 at infinity".into(), &mid, p2);
        Ok(())
    }

    fn rho9(&mut self) -> Result<()> {
        let e = self.e.clone();
        let (q4, q5) = (self.qn(4).clone(), self.qn(5).clone());
        self.side(10, "E", &e, Some(-1));
        for (label, v) in self.labelled_vertices() {
            let expect = if label == "Q_4" || label == "Q_5" { Some(-1) } else { None };
            self.side(10, &label, &v, expect);
        }
        let p1 = midpoint(&q4, &q5, &e)?;
        let p2 = special::p2_rho9();
        let f = special::f_rho9();
        self.special.insert("P_1".into(), p1.to_string());
        self.special.insert("P_2".into(), p2.to_string());
        self.special.insert("f".into(), f.to_string());
        self.side(10, "P_1", &p1, Some(0));
        let printed: Vec<String> = special::P1_RHO9_PRINTED.iter().map(i64::to_string).collect();
        self.push(CheckResult::discrepancy(
            "P_1 as printed has 8 entries; midpoint of Q_4Q_5 computed",
            vec![printed.join(",")],
            &p1,
        ));
        self.phi_checks(&p1, &p2);
        self.p2_derivation(&p1, &f, &p2)?;

        // F_11 = H_{n_1} through P_1 and E.
        self.side(11, "E", &e, Some(0));
        self.side(11, "P_1", &p1, Some(0));
        let n1q4 = dot_unchecked(&self.f(11).vector, &q4);
        if n1q4.is_zero() {
            self.side(11, "Q_4", &q4, Some(0));
        } else {
            self.push(CheckResult::discrepancy(
                "n_1⊙Q_4 = 0 as printed",
                vec![self.f(11).vector.to_string(), q4.to_string()],
                n1q4,
            ));
        }
        for (label, v) in self.labelled_vertices() {
            let idx: usize = label[2..3].parse().expect("vertex index");
            let expect = match idx {
                1 => 0,
                2..=4 => 1,
                _ => -1,
            };
            self.side(11, &label, &v, Some(expect));
        }

        // The piece outside F_10 around Q_4 lies beyond F_11.
        let dome = self.f(10).clone();
        for (apex, apex_label, wall) in [(4usize, "Q_4", 11usize), (5, "Q_5", 12)] {
            let a = self.qn(apex).clone();
            for i in 1..=7 {
                let (b, tag) = if i == apex {
                    (self.qpn(apex).clone(), format!("{apex_label}'"))
                } else {
                    (self.qn(i).clone(), format!("Q_{i}"))
                };
                let p = edge_dome_point(&a, &b, &dome, &e, &a)?;
                let label = format!("P_{apex}{i}");
                let on = p.dot_lattice(&dome.vector).is_zero() && p.self_dot().is_zero();
                self.push(CheckResult::new(
                    format!("{label} on F_10 along {apex_label}{tag}"),
                    vec![a.to_string(), b.to_string()],
                    &p,
                    on,
                ));
                self.special.insert(label.clone(), p.to_string());
                if (apex, i) == (4, 5) || (apex, i) == (5, 4) {
                    let ok = p.to_lattice_ray().as_ref() == Some(&p1);
                    self.push(CheckResult::new(format!("{label} = P_1"), vec![p1.to_string()], &p, ok));
                }
                self.side_surd(wall, &label, &p, true);
            }
            self.side(wall, apex_label, &a, Some(1));
        }
        self.side(12, "E", &e, Some(-1));
        self.side(12, "P_1", &p1, Some(0));
        self.side(12, "P_2", &p2, Some(0));
        let n1 = self.f(11).vector.clone();
        let n2 = self.f(12).vector.clone();
        let lhs = dot_unchecked(&n1, &n2).pow(2);
        let rhs = norm2(&n1) * norm2(&n2);
        self.push(CheckResult::new(
            "F_11 and F_12 tangent: (n_1⊙n_2)² = (n_1⊙n_1)(n_2⊙n_2)",
            vec![n1.to_string(), n2.to_string()],
            format!("{lhs} vs {rhs}"),
            lhs == rhs,
        ));
        Ok(())
    }

    fn rho10(&mut self) -> Result<()> {
        let e = self.e.clone();
        // F_11 = v_{1,9} covers all but Q_4, Q_5, Q_6; Q_5' on it.
        self.side(11, "E", &e, Some(-1));
        for (label, v) in self.labelled_vertices() {
            let expect = match label.as_str() {
                "Q_4" | "Q_5" | "Q_6" => Some(-1),
                "Q_5'" => Some(0),
                _ => None,
            };
            self.side(11, &label, &v, expect);
        }
        // F_12 = H_n is centered at Q_5 and passes through Q_5'.
        let (q5, q5p) = (self.qn(5).clone(), self.qpn(5).clone());
        self.side(12, "E", &e, Some(-1));
        self.side(12, "Q_5'", &q5p, Some(0));
        let c = canonical_ray(&reflect(&self.f(12).vector, &e)?.clear_denominators());
        self.equal("center of F_12 from E is Q_5".into(), &c, &canonical_ray(&q5));

        let p1 = midpoint(self.qn(4), self.qn(6), &e)?;
        self.equal("P_1 = midpoint of Q_4Q_6".into(), &p1, &special::p1_rho10());
        let p2 = special::p2_rho10();
        let f = special::f_rho10();
        self.special.insert("P_1".into(), p1.to_string());
        self.special.insert("P_2".into(), p2.to_string());
        self.special.insert("f".into(), f.to_string());
        self.side(11, "P_1", &p1, Some(0));
        self.side(12, "P_1", &p1, Some(0));
        self.phi_checks(&p1, &p2);
        self.p2_derivation(&p1, &f, &p2)?;

        // F_13 = H_{n_1} cuts the prism.
        self.side(13, "E", &e, Some(0));
        self.side(13, "P_1", &p1, Some(0));
        for (label, v) in self.labelled_vertices() {
            let idx: usize = label[2..3].parse().expect("vertex index");
            let expect = match idx {
                2..=4 => 1,
                1 | 5 => 0,
                _ => -1,
            };
            self.side(13, &label, &v, Some(expect));
        }
        let e10 = LatticeVector::e(10, 10);
        let v910 = LatticeVector::v(10, 9, 10);
        self.side(13, "e_10", &e10, Some(0));
        self.side(13, "v_{9,10}", &v910, Some(0));
        self.side(14, "E", &e, Some(-1));
        self.side(14, "P_1", &p1, Some(0));
        self.side(14, "P_2", &p2, Some(0));

        // Vertices of the cut prism.
        let wall = self.f(13).clone();
        let mut top: Vec<(String, LatticeVector)> = Vec::new();
        let mut bottom: Vec<(String, LatticeVector)> = Vec::new();
        for i in [1usize, 5, 6, 7, 8] {
            top.push((format!("Q_{i}"), self.qn(i).clone()));
            bottom.push((format!("Q_{i}'"), self.qpn(i).clone()));
        }
        for i in 6..=8 {
            for j in 2..=4 {
                for prime in [false, true] {
                    let (a, b) = if prime {
                        (self.qpn(i).clone(), self.qpn(j).clone())
                    } else {
                        (self.qn(i).clone(), self.qn(j).clone())
                    };
                    let mark = if prime { "'" } else { "" };
                    let label = format!("P_{i}{j}{mark}");
                    let p = edge_dome_point(&a, &b, &wall, &e, &a)?;
                    let Some(v) = p.to_lattice_ray() else {
                        self.push(CheckResult::new(format!("{label} rational"), vec![], &p, false));
                        continue;
                    };
                    let on = dot_unchecked(&wall.vector, &v).is_zero() && norm2(&v).is_zero();
                    self.push(CheckResult::new(
                        format!("{label} on F_13 and isotropic"),
                        vec![a.to_string(), b.to_string()],
                        &v,
                        on,
                    ));
                    self.special.insert(label.clone(), v.to_string());
                    // Top vertices sit on F_9, bottom ones on F_10.
                    self.side(if prime { 10 } else { 9 }, &label, &v, Some(0));
                    if prime {
                        bottom.push((label, v));
                    } else {
                        top.push((label, v));
                    }
                }
            }
        }
        let all: Vec<(String, LatticeVector)> = top.iter().chain(&bottom).cloned().collect();
        self.push(CheckResult::new(
            "cut prism has 28 vertices",
            vec![],
            all.len(),
            all.len() == 28,
        ));
        for (label, v) in &all {
            let expect = match label.as_str() {
                "Q_5" | "Q_6" => Some(-1),
                _ => None,
            };
            self.side(11, label, v, expect);
            self.side_nonpos(13, label, v);
        }
        let q6 = self.qn(6).clone();
        self.side(12, "Q_5", &q5, Some(1));
        self.side(14, "Q_6", &q6, Some(1));
        self.side(12, "Q_6", &q6, Some(-1));

        // S: top vertices covered by F_11.
        let s: Vec<(String, LatticeVector)> = top
            .iter()
            .filter(|(l, _)| l != "Q_5" && l != "Q_6")
            .cloned()
            .collect();
        self.push(CheckResult::new(
            "S has 12 members",
            vec![],
            s.iter().map(|(l, _)| l.as_str()).collect::<Vec<_>>().join(" "),
            s.len() == 12,
        ));
        let (f11, f12, f14) = (self.f(11).clone(), self.f(12).clone(), self.f(14).clone());
        let q6p = self.qpn(6).clone();
        let with = |extra: (&str, &LatticeVector)| {
            let mut v = s.clone();
            v.push((extra.0.to_string(), extra.1.clone()));
            v
        };
        let s5 = with(("Q_5'", &q5p));
        let s6 = with(("Q_6'", &q6p));
        for (label, a) in &s5 {
            let mut r = edge_covered(&q5, a, &e, &f12, &f11)?;
            r.name = format!("edge Q_5{label} covered by F_12,F_11: {}", r.name);
            self.push(r);
        }
        for (label, a) in &s6 {
            let mut r = edge_covered(&q6, a, &e, &f14, &f11)?;
            r.name = format!("edge Q_6{label} covered by F_14,F_11: {}", r.name);
            self.push(r);
        }
        let mut r = edge_covered(&q5, &q6, &e, &f12, &f14)?;
        r.name = format!("edge Q_5Q_6: {}", r.name);
        self.push(r);
        let mut faces2 = s.clone();
        faces2.push(("Q_5'".into(), q5p.clone()));
        faces2.push(("Q_6'".into(), q6p.clone()));
        for (label, a) in &faces2 {
            let mut r = face2_covered(&q5, &q6, a, &e, &f12, &f14, &f11)?;
            r.name = format!("2-face Q_5Q_6{label}: {}", r.name);
            self.push(r);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::checks::Verdict;

    #[test]
    fn small_cases_pass() {
        for rho in 4..=8 {
            let case = run_case(rho).unwrap();
            let bad: Vec<_> = case.failures().collect();
            assert!(bad.is_empty(), "rho {rho}: {bad:#?}");
        }
    }

    #[test]
    fn rho8_has_one_cusp() {
        let case = run_case(8).unwrap();
        assert_eq!(case.special_points.get("cusp"), Some(&case.vertices.q[3].to_string()));
    }

    #[test]
    fn rho9_passes_with_discrepancies() {
        let case = run_case(9).unwrap();
        let bad: Vec<_> = case.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
        let d: Vec<_> = case
            .checks
            .iter()
            .filter(|c| c.verdict == Verdict::PaperDiscrepancy)
            .collect();
        assert_eq!(d.len(), 2);
        assert!(d.iter().any(|c| c.value == "168"));
    }

    #[test]
    fn rho10_passes() {
        let case = run_case(10).unwrap();
        let bad: Vec<_> = case.failures().collect();
        assert!(bad.is_empty(), "{bad:#?}");
    }

    #[test]
    fn deterministic() {
        assert_eq!(run_case(9).unwrap().checks, run_case(9).unwrap().checks);
    }
}
