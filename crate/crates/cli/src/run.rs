use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use weilkit::algebra::galois_group;
use weilkit::bundle::{
    coefficient_point_ring, normal_compat, rank_check, restrict_bundle, restrict_zero_section, total_space, Bundle,
};
use weilkit::points::{
    adjunction_bijection, enumerate_points, galois_point_count, norm_open_points, tensor_point_ring, FiniteRing,
    TestAlgebra,
};
use weilkit::scheme::{is_closed_embedding, is_etale_morphism, is_smooth, AffineScheme};
use weilkit::thom::{gysin_shadow, step2_check, thom_compare, thom_naturality};
use weilkit::weilres::{
    affine_shadow, base_change_compat, fiber_product_compat, restrict_morphism, restrict_open, restrict_relative,
    restrict_scheme, triangle_identities,
};
use weilkit::{Config, Error};

use crate::session::{Action, Command, Session, Status, Target};

/// Outcome of one command. `timing_ms` is the only field that varies between
/// runs; [`Report::golden`] leaves it out.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect: Option<Status>,
    pub witnesses: Value,
    pub timing_ms: u64,
}

impl Report {
    /// The status this command was declared to end with.
    pub fn expected(&self) -> Status {
        self.expect.unwrap_or(Status::Verified)
    }

    /// Whether the run went as declared; skipped counts as verified.
    pub fn as_expected(&self) -> bool {
        match self.expected() {
            Status::Verified => matches!(self.status, Status::Verified | Status::Skipped),
            s => self.status == s,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("reports serialize")
    }

    pub fn golden(&self) -> Value {
        let mut v = self.to_json();
        v.as_object_mut().expect("report is an object").remove("timing_ms");
        v
    }
}

/// Failures that are not answers: the command could not be evaluated as
/// written.
#[derive(Debug, Error)]
#[error("{command}: {source}")]
pub struct RunError {
    pub command: String,
    #[source]
    pub source: Error,
}

fn status_of(verified: bool) -> Status {
    if verified {
        Status::Verified
    } else {
        Status::Refuted
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("witness payloads serialize")
}

/// Sub-results for one test algebra, some of which may be inadmissible.
struct PerAlgebra {
    entries: Vec<Value>,
    verified: bool,
    ran: usize,
}

impl PerAlgebra {
    fn new() -> Self {
        PerAlgebra {
            entries: Vec::new(),
            verified: true,
            ran: 0,
        }
    }

    fn push(&mut self, verified: bool, payload: Value) {
        self.ran += 1;
        self.verified &= verified;
        self.entries.push(payload);
    }

    /// Records `r`, turning the errors that mark an inadmissible algebra into
    /// a skip entry.
    fn record<T: Serialize>(
        &mut self,
        algebra: &TestAlgebra,
        r: weilkit::Result<T>,
        verified: impl Fn(&T) -> bool,
    ) -> weilkit::Result<()> {
        match r {
            Ok(rep) => {
                self.push(verified(&rep), to_value(&rep));
                Ok(())
            }
            Err(e @ (Error::NotLocalAlgebra | Error::NonLocalTensor | Error::RingMismatch(_))) => {
                self.entries.push(json!({"algebra": algebra.to_string(), "skipped": e.to_string()}));
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    fn status(&self) -> Status {
        if self.ran == 0 {
            Status::Skipped
        } else {
            status_of(self.verified)
        }
    }
}

fn build(a: &TestAlgebra, x: &AffineScheme) -> weilkit::Result<Arc<FiniteRing>> {
    a.build(x.coef()).map(Arc::new)
}

pub fn run_command(session: &Session, command: &Command) -> Result<Report, RunError> {
    let start = Instant::now();
    let outcome = execute(&session.config, &command.action);
    let (status, witnesses) = match outcome {
        Ok(r) => r,
        Err(e) if e.is_budget() => (Status::BudgetExceeded, json!({"error": e.to_string()})),
        Err(source) => {
            return Err(RunError {
                command: command.text.clone(),
                source,
            })
        }
    };
    Ok(Report {
        command: command.text.clone(),
        status,
        expect: command.expect,
        witnesses,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs every command of the session in order.
pub fn run_session(session: &Session) -> Result<Vec<Report>, RunError> {
    session.commands.iter().map(|c| run_command(session, c)).collect()
}

fn execute(cfg: &Config, action: &Action) -> weilkit::Result<(Status, Value)> {
    let cap = cfg.gb_degree_cap;
    match action {
        Action::Restrict(x) => {
            let r = restrict_scheme(x, cap)?;
            Ok((
                Status::Verified,
                json!({
                    "degree": r.expansion().degree(),
                    "source_vars": x.vars(),
                    "vars": r.scheme().vars(),
                    "generators": r.scheme().display_generators(),
                    "pruned": r.pruned(),
                }),
            ))
        }
        Action::Points { x, algebra } => {
            let a = build(algebra, x)?;
            let pr = tensor_point_ring(&a, x.coef())?;
            let pts = enumerate_points(x, &pr, cfg.point_budget, cfg.strategy)?;
            let ring = pr.ring();
            let sample: Vec<Vec<String>> = pts
                .points
                .iter()
                .take(10)
                .map(|p| p.iter().map(|&e| ring.display(e)).collect())
                .collect();
            Ok((
                Status::Verified,
                json!({
                    "algebra": algebra.to_string(),
                    "ring": ring.name(),
                    "count": pts.len(),
                    "evaluated": pts.evaluated,
                    "sample": sample,
                }),
            ))
        }
        Action::Verify(t) => verify(cfg, t),
    }
}

fn verify(cfg: &Config, target: &Target) -> weilkit::Result<(Status, Value)> {
    let cap = cfg.gb_degree_cap;
    match target {
        Target::Adjunction { x, algebras } => {
            let mut acc = PerAlgebra::new();
            for a in algebras {
                let r = adjunction_bijection(x, &build(a, x)?, cfg);
                acc.record(a, r, |r| r.verified())?;
            }
            Ok((acc.status(), json!({ "results": acc.entries })))
        }
        Target::Triangles { x, y } => {
            let y = match y {
                Some(y) => y.clone(),
                None => restrict_scheme(x, cap)?.scheme().clone(),
            };
            let rep = triangle_identities(x, &y, cap)?;
            Ok((status_of(rep.verified()), json!({"test_scheme": y.vars(), "checks": rep.checks})))
        }
        Target::BaseChange { x, t } => {
            let rep = base_change_compat(x, t, cap)?;
            Ok((status_of(rep.verified()), to_value(&rep)))
        }
        Target::FiberProduct { f, g } => {
            let rep = fiber_product_compat(f, g, cap)?;
            Ok((status_of(rep.verified()), to_value(&rep)))
        }
        Target::PreservesClosed(f) => {
            let before = is_closed_embedding(f, cap)?;
            let rx = restrict_scheme(f.source(), cap)?;
            let ry = restrict_scheme(f.target(), cap)?;
            let rf = restrict_morphism(f, &rx, &ry, cap)?;
            let after = is_closed_embedding(&rf, cap)?;
            Ok((
                status_of(before.closed_embedding && after.closed_embedding),
                json!({"morphism": before, "restricted": after}),
            ))
        }
        Target::PreservesSmooth(x) => {
            let dim = x.dimension(cap)?.max(0) as usize;
            let before = is_smooth(x, dim, cap)?;
            let rx = restrict_scheme(x, cap)?;
            let after = is_smooth(rx.scheme(), dim * rx.expansion().degree(), cap)?;
            Ok((
                status_of(before.smooth && after.smooth),
                json!({"scheme": before, "restricted": after}),
            ))
        }
        Target::PreservesEtale(y) => {
            let before = is_etale_morphism(y, cap)?;
            let after = is_etale_morphism(&*restrict_relative(y, cap)?, cap)?;
            Ok((
                status_of(before.etale && after.etale),
                json!({"morphism": before, "restricted": after}),
            ))
        }
        Target::Bundle(e) => bundle(cfg, e),
        Target::ZeroSection(e) => {
            let rep = restrict_zero_section(e, cfg)?;
            Ok((status_of(rep.verified()), to_value(&rep)))
        }
        Target::Normal { x, equations, algebras } => {
            let rings = algebras.iter().map(|a| build(a, x)).collect::<weilkit::Result<Vec<_>>>()?;
            let rep = normal_compat(x, equations, &rings, cfg)?;
            Ok((status_of(rep.verified()), to_value(&rep)))
        }
        Target::Thom { e, algebras } => {
            let mut acc = PerAlgebra::new();
            let mut naturality = PerAlgebra::new();
            for a in algebras {
                let ring = build(a, e.base())?;
                acc.record(a, thom_compare(e, &ring, cfg), |r| r.verified())?;
                if ring.dim() > 1 {
                    naturality.record(a, thom_naturality(e, &ring, cfg), |r| r.verified())?;
                }
            }
            let status = match (acc.status(), naturality.status()) {
                (Status::Refuted, _) | (_, Status::Refuted) => Status::Refuted,
                (s, _) => s,
            };
            Ok((status, json!({"results": acc.entries, "naturality": naturality.entries})))
        }
        Target::Step2 { e, algebras } => {
            let mut acc = PerAlgebra::new();
            for a in algebras {
                acc.record(a, step2_check(e, &build(a, e.base())?, cfg), |r| r.verified())?;
            }
            Ok((acc.status(), json!({ "results": acc.entries })))
        }
        Target::GysinShadow { x, equations, algebras } => {
            let mut acc = PerAlgebra::new();
            for a in algebras {
                acc.record(a, gysin_shadow(x, equations, &build(a, x)?, cfg), |r| r.verified())?;
            }
            Ok((acc.status(), json!({ "results": acc.entries })))
        }
        Target::GaloisSplit(x) => {
            let group = match galois_group(x.coef(), cfg.height_bound) {
                Ok(g) => g,
                Err(e @ Error::NotGalois { .. }) => return Ok((Status::Skipped, json!({"skipped": e.to_string()}))),
                Err(e) => return Err(e),
            };
            let rep = weilkit::weilres::galois_decomposition(x, &group, cap)?;
            let mut verified = rep.verified();
            let counts = if x.base_field().is_finite() {
                let c = galois_point_count(x, &group, cfg)?;
                verified &= c.verified();
                to_value(&c)
            } else {
                Value::Null
            };
            Ok((status_of(verified), json!({"decomposition": rep, "counts": counts})))
        }
        Target::NormOpen { x, g, algebras } => {
            let (_, rep) = restrict_open(x, g, cap)?;
            let mut acc = PerAlgebra::new();
            for a in algebras {
                acc.record(a, norm_open_points(x, g, &build(a, x)?, cfg), |r| r.verified())?;
            }
            let status = match (rep.verified(), algebras.is_empty()) {
                (false, _) => Status::Refuted,
                (true, true) => Status::Verified,
                (true, false) => acc.status(),
            };
            Ok((status, json!({"presentation": rep, "results": acc.entries})))
        }
        Target::AffineShadow { x, upto } => {
            let reps = (1..=*upto).map(|n| affine_shadow(x, n, cap)).collect::<weilkit::Result<Vec<_>>>()?;
            let verified = reps.iter().all(|r| r.verified());
            Ok((status_of(verified), json!({ "results": reps })))
        }
    }
}

fn bundle(cfg: &Config, e: &Bundle) -> weilkit::Result<(Status, Value)> {
    let rb = match restrict_bundle(e, cfg) {
        Ok(rb) => rb,
        Err(err @ (Error::NotIdempotent { .. } | Error::RankMismatch { .. })) => {
            return Ok((Status::Refuted, json!({"error": err.to_string()})))
        }
        Err(err) => return Err(err),
    };
    let total = total_space(e, cfg)?;
    let mut verified = rb.verified() && total.verified();
    let points = if rb.bundle.base().base_field().is_finite() {
        let pr = coefficient_point_ring(rb.bundle.base())?;
        let (n, check) = rank_check(&rb.bundle, &pr, cfg)?;
        verified &= check.passed;
        json!({"count": n, "check": check})
    } else {
        Value::Null
    };
    Ok((
        status_of(verified),
        json!({
            "ambient": e.ambient(),
            "rank": e.rank(),
            "restricted_ambient": rb.bundle.ambient(),
            "restricted_rank": rb.bundle.rank(),
            "restricted_matrix": rb.bundle.display_matrix(),
            "checks": rb.checks,
            "total_space": total.checks,
            "restricted_total_space": rb.total.checks,
            "compat": rb.compat,
            "rank_at_points": points,
        }),
    ))
}
