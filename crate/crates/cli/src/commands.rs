use std::fmt::Write as _;

use apollonian::coxeter::{self, CoxeterGraph};
use apollonian::domain::{run_case, solve_vertices, Verdict};
use apollonian::lorentz::norm2;
use apollonian::packing::{
    build_group, default_kmax, descartes_check, enumerate as run_enumerate, find_cluster, random_clusters,
    verify_packing, EnumerateOptions, Window,
};
use apollonian::render::render_packing;
use apollonian::LatticeVector;
use num_bigint::BigInt;
use serde::Serialize;

use crate::{Failure, Format, GraphArg, Outcome, WindowArg};

pub struct Ctx {
    pub rho: Option<usize>,
    pub kmax: Option<i64>,
    pub perspective: Option<String>,
    pub format: Option<Format>,
    pub seed: u64,
}

impl Ctx {
    fn rho(&self) -> Result<usize, Failure> {
        self.rho.ok_or_else(|| Failure::Usage("--rho is required".into()))
    }

    fn kmax(&self, rho: usize) -> i64 {
        self.kmax.unwrap_or_else(|| default_kmax(rho))
    }

    /// The requested format if allowed, else the first allowed one.
    fn format(&self, allowed: &[Format]) -> Result<Format, Failure> {
        match self.format {
            None => Ok(allowed[0]),
            Some(f) if allowed.contains(&f) => Ok(f),
            Some(f) => Err(Failure::Usage(format!(
                "format {f:?} is not available here; choose one of {allowed:?}"
            ))),
        }
    }

    fn no_perspective(&self) -> Result<(), Failure> {
        match self.perspective {
            Some(_) => Err(Failure::Usage("--perspective only applies to enumerate".into())),
            None => Ok(()),
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn parse_vector(s: &str) -> Result<LatticeVector, Failure> {
    Ok(s.parse::<LatticeVector>()?)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    rho: usize,
    kmax: i64,
    records: usize,
    stabilized: bool,
    domain: &'a apollonian::domain::DomainCase,
    packing: &'a apollonian::packing::PackingReport,
    passed: bool,
}

pub fn verify(ctx: &Ctx) -> Result<Outcome, Failure> {
    ctx.no_perspective()?;
    let rho = ctx.rho()?;
    let kmax = ctx.kmax(rho);
    let format = ctx.format(&[Format::Json, Format::Text])?;
    let case = run_case(rho)?;
    let out = run_enumerate(rho, &EnumerateOptions::new(kmax))?;
    let vectors: Vec<LatticeVector> = out.records.iter().map(|r| r.vector.clone()).collect();
    let packing = verify_packing(&vectors, &LatticeVector::strip_point(rho))?;

    let mut first_failure = case.failures().next().map(|c| format!("{}: {}", c.name, c.value));
    if first_failure.is_none() {
        first_failure = packing.first_failure.clone();
    }
    if first_failure.is_none() && (out.truncated || !out.stabilized) {
        first_failure = Some("enumeration did not stabilize".into());
    }
    let notes = case
        .checks
        .iter()
        .filter(|c| c.verdict == Verdict::PaperDiscrepancy)
        .map(|c| format!("discrepancy: {}: {}", c.name, c.value))
        .collect();

    let body = match format {
        Format::Json => json(&VerifyReport {
            rho,
            kmax,
            records: out.records.len(),
            stabilized: out.stabilized,
            domain: &case,
            packing: &packing,
            passed: first_failure.is_none(),
        }),
        _ => {
            let mut s = case.to_text();
            let _ = writeln!(
                s,
                "packing kmax={kmax}: {} records, {} pairs, {} tangent, {} disjoint, {} overlapping",
                packing.records,
                packing.pairs,
                packing.tangent_pairs,
                packing.disjoint_pairs,
                packing.violations.len()
            );
            let _ = writeln!(s, "{}", if first_failure.is_none() { "PASS" } else { "FAIL" });
            s
        }
    };
    Ok(Outcome {
        body,
        first_failure,
        notes,
    })
}

pub fn vertices(ctx: &Ctx) -> Result<Outcome, Failure> {
    ctx.no_perspective()?;
    let rho = ctx.rho()?;
    let format = ctx.format(&[Format::Text, Format::Json])?;
    let (q, qp) = solve_vertices(rho)?;
    let body = match format {
        Format::Json => json(&apollonian::domain::cases::Vertices { q, qprime: qp }),
        _ => {
            let mut s = String::new();
            for (i, v) in q.iter().enumerate() {
                let _ = writeln!(s, "Q_{}=({v})", i + 1);
            }
            for (i, v) in qp.iter().enumerate() {
                let _ = writeln!(s, "Q_{}'=({v})", i + 1);
            }
            s
        }
    };
    Ok(Outcome {
        body,
        first_failure: None,
        notes: vec![],
    })
}

pub fn enumerate(ctx: &Ctx, window: WindowArg, margin: i64) -> Result<Outcome, Failure> {
    let rho = ctx.rho()?;
    let format = ctx.format(&[Format::Csv, Format::Json])?;
    let mut opts = EnumerateOptions::new(ctx.kmax(rho));
    opts.perspective = ctx.perspective.as_deref().map(parse_vector).transpose()?;
    opts.window = match window {
        WindowArg::Cell => Window::Cell,
        WindowArg::Margin => Window::Margin { numer: margin, denom: 1 },
        WindowArg::Explored => Window::Explored,
    };
    let out = run_enumerate(rho, &opts)?;
    let first_failure = if out.truncated {
        Some(format!("search truncated after {} nodes", out.explored))
    } else if !out.stabilized {
        Some("search did not stabilize".into())
    } else {
        None
    };
    let body = match format {
        Format::Json => json(&out),
        _ => out.to_csv(),
    };
    Ok(Outcome {
        body,
        first_failure,
        notes: vec![],
    })
}

#[derive(Serialize)]
struct ClusterReport {
    vector: LatticeVector,
    members: Vec<LatticeVector>,
    curvatures: Vec<BigInt>,
    word: Vec<String>,
    mutually_tangent: bool,
    contains_vector: bool,
}

pub fn cluster(ctx: &Ctx, vector: &str) -> Result<Outcome, Failure> {
    ctx.no_perspective()?;
    let format = ctx.format(&[Format::Json, Format::Text])?;
    let m = parse_vector(vector)?;
    let rho = m.rho();
    if !(4..=10).contains(&rho) {
        return Err(apollonian::Error::RhoOutOfRange(rho).into());
    }
    if ctx.rho.is_some_and(|r| r != rho) {
        return Err(Failure::Usage(format!("--vector has {rho} entries but --rho is {}", ctx.rho.unwrap())));
    }
    if norm2(&m) != BigInt::from(1) {
        return Err(Failure::Usage(format!("({m}) is not a unit vector")));
    }
    let group = build_group(rho)?;
    let c = find_cluster(&group, &m)?;
    let e = LatticeVector::strip_point(rho);
    let report = ClusterReport {
        curvatures: c.members.iter().map(|x| -apollonian::lorentz::dot(x, &e).expect("same rank")).collect(),
        mutually_tangent: c.is_mutually_tangent(),
        contains_vector: c.contains(&m),
        vector: m,
        members: c.members,
        word: c.word,
    };
    let first_failure = match (report.mutually_tangent, report.contains_vector) {
        (true, true) => None,
        (false, _) => Some("cluster is not mutually tangent".into()),
        (_, false) => Some("cluster does not contain the vector".into()),
    };
    let body = match format {
        Format::Json => json(&report),
        _ => {
            let mut s = String::new();
            for (v, k) in report.members.iter().zip(&report.curvatures) {
                let _ = writeln!(s, "({v})  k={k}");
            }
            let _ = writeln!(s, "word: {}", report.word.join(" "));
            s
        }
    };
    Ok(Outcome {
        body,
        first_failure,
        notes: vec![],
    })
}

pub fn coxeter(ctx: &Ctx, graph: GraphArg) -> Result<Outcome, Failure> {
    ctx.no_perspective()?;
    let format = ctx.format(&[Format::Dot, Format::Json])?;
    let g: CoxeterGraph = match graph {
        GraphArg::Faces => coxeter::graph_for(ctx.rho()?)?,
        GraphArg::Apollonian => coxeter::apollonian_graph()?,
        GraphArg::Gamma => coxeter::symmetry_graph()?,
        GraphArg::GammaPrime => coxeter::gamma_prime_graph()?,
    };
    let body = match format {
        Format::Json => json(&g),
        _ => g.to_dot(),
    };
    Ok(Outcome {
        body,
        first_failure: None,
        notes: g.notes.clone(),
    })
}

pub fn render(ctx: &Ctx) -> Result<Outcome, Failure> {
    ctx.no_perspective()?;
    let rho = ctx.rho()?;
    if !(rho == 4 || rho == 5) {
        return Err(Failure::Usage("render supports --rho 4 and --rho 5".into()));
    }
    let format = ctx.format(&[Format::Svg, Format::Json])?;
    let fig = render_packing(rho, ctx.kmax(rho))?;
    let body = match format {
        Format::Json => json(&fig),
        _ => fig.svg,
    };
    Ok(Outcome {
        body,
        first_failure: None,
        notes: vec![],
    })
}

#[derive(Serialize)]
struct DescartesSummary {
    rho: usize,
    seed: u64,
    samples: usize,
    max_len: usize,
    passed: usize,
    failed: usize,
    reports: Vec<apollonian::packing::DescartesReport>,
}

pub fn descartes(ctx: &Ctx, samples: usize, max_len: usize) -> Result<Outcome, Failure> {
    ctx.no_perspective()?;
    let rho = ctx.rho()?;
    let format = ctx.format(&[Format::Json, Format::Text])?;
    let group = build_group(rho)?;
    let e = LatticeVector::strip_point(rho);
    let reports = random_clusters(&group, samples, max_len, ctx.seed)
        .iter()
        .map(|c| descartes_check(c, &e))
        .collect::<Result<Vec<_>, _>>()?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    let first_failure = reports
        .iter()
        .find(|r| !r.passed)
        .map(|r| format!("curvatures {:?} give kJ⁻¹k = {}", r.curvatures, r.value));
    let body = match format {
        Format::Json => json(&DescartesSummary {
            rho,
            seed: ctx.seed,
            samples,
            max_len,
            passed: samples - failed,
            failed,
            reports,
        }),
        _ => {
            let mut s = String::new();
            for r in &reports {
                let ks: Vec<String> = r.curvatures.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "k=({}) value={} {}", ks.join(","), r.value, if r.passed { "ok" } else { "FAIL" });
            }
            let _ = writeln!(s, "{} of {samples} clusters pass", samples - failed);
            s
        }
    };
    Ok(Outcome {
        body,
        first_failure,
        notes: vec![],
    })
}
