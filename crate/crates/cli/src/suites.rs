use rayon::prelude::*;
use serde_json::{json, Value};

use cuspidal::arith::{factorize, primes_up_to, SemigroupPair};
use cuspidal::equivariant::{
    certify_sigma, certify_truncated, compare_x_vs_y, CertificateReport, CheckStatus, Verdict,
};
use cuspidal::hochschild::oracle_report;
use cuspidal::ktheory::{factor_identities, k_group_report, valuation_check, KGroupReport};
use cuspidal::picard::{image_congruence_cp, psi_kernel, VirtualRep};

use crate::report::{CaseResult, Status, VerifyReport};
use crate::{Cache, CliError, CliResult};

pub fn pair(a: u64, b: u64) -> CliResult<SemigroupPair> {
    SemigroupPair::new(a, b).map_err(|e| CliError::Config(e.to_string()))
}

/// Runs `f` on every parameter set with at most `jobs` threads, in input order.
pub fn run_parallel<P, F>(jobs: usize, params: &[P], f: F) -> CliResult<Vec<CaseResult>>
where
    P: Sync,
    F: Fn(&P) -> CaseResult + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(pool.install(|| params.par_iter().map(&f).collect()))
}

fn cached<F: FnOnce() -> CaseResult>(cache: &Cache, kind: &str, params: Value, f: F) -> CaseResult {
    cache.get_or_compute(kind, &params, || {
        let r = f();
        let store = !r.summary.starts_with("error:");
        (r, store)
    })
}

fn certificate_case(id: String, r: CertificateReport) -> CaseResult {
    let status = match r.verdict {
        Verdict::Certified => Status::Pass,
        Verdict::Partial if r.checks.iter().all(|c| c.status != CheckStatus::Fail) => Status::Pass,
        _ => Status::Fail,
    };
    let failed: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| c.status != CheckStatus::Pass)
        .map(|c| c.name.as_str())
        .collect();
    let summary = match r.verdict {
        Verdict::Certified => "certified".to_string(),
        Verdict::Partial => format!("partial (skipped: {})", failed.join(", ")),
        Verdict::Failed => format!("failed: {}", failed.join(", ")),
    };
    CaseResult {
        id,
        status,
        summary,
        witness: serde_json::to_value(&r).unwrap_or(Value::Null),
    }
}

pub fn sigma_case(cache: &Cache, sg: SemigroupPair, m: u64) -> CaseResult {
    let id = format!("sigma({}, {}, {m})", sg.a(), sg.b());
    cached(cache, "verify-sigma", json!({"a": sg.a(), "b": sg.b(), "m": m}), || {
        match certify_sigma(sg, m) {
            Ok(r) => certificate_case(id, r),
            Err(e) => CaseResult::error(id, e),
        }
    })
}

pub fn truncated_case(cache: &Cache, a: u64, s: u64) -> CaseResult {
    let id = format!("truncated(a={a}, s={s})");
    cached(cache, "verify-truncated", json!({"a": a, "s": s}), || match certify_truncated(a, s) {
        Ok(r) => certificate_case(id, r),
        Err(e) => CaseResult::error(id, e),
    })
}

/// X-vs-Y certificates over all fixed-point levels plus the small-complex oracle.
pub fn compare_case(cache: &Cache, sg: SemigroupPair, m: u64, prime: Option<u64>) -> CaseResult {
    let id = format!("compare({}, {}, {m})", sg.a(), sg.b());
    let params = json!({"a": sg.a(), "b": sg.b(), "m": m, "prime": prime});
    cached(cache, "verify-compare", params, || {
        let bundle = match compare_x_vs_y(sg, m, prime) {
            Ok(b) => b,
            Err(e) => return CaseResult::error(id, e),
        };
        let oracle = match oracle_report(sg, m) {
            Ok(o) => o,
            Err(e) => return CaseResult::error(id, e),
        };
        let ok = bundle.all_certified() && oracle.equal;
        let levels: Vec<String> = bundle
            .levels
            .iter()
            .map(|l| format!("{}^{}:{}", l.p, l.i, if l.report.is_certified() { "ok" } else { "FAIL" }))
            .collect();
        CaseResult {
            id,
            status: if ok { Status::Pass } else { Status::Fail },
            summary: format!(
                "levels [{}], oracle {}",
                levels.join(" "),
                if oracle.equal { "agrees" } else { "DISAGREES" }
            ),
            witness: json!({ "compare": bundle, "oracle": oracle }),
        }
    })
}

/// Valuation cross-check at every prime `p <= abi` and the four product identities.
pub fn kgroup_case(cache: &Cache, sg: SemigroupPair, i: u64) -> CaseResult {
    let id = format!("kgroups({}, {}, i={i})", sg.a(), sg.b());
    cached(cache, "verify-kgroups", json!({"a": sg.a(), "b": sg.b(), "i": i}), || {
        let run = || -> cuspidal::Result<CaseResult> {
            let mut bad = Vec::new();
            let primes = primes_up_to(sg.ab() * i);
            for &p in &primes {
                if !valuation_check(sg, i, p)?.holds {
                    bad.push(format!("p={p}"));
                }
            }
            let ids = factor_identities(sg, i)?;
            if !ids.all() {
                bad.push("product identities".into());
            }
            Ok(CaseResult {
                id: id.clone(),
                status: if bad.is_empty() { Status::Pass } else { Status::Fail },
                summary: if bad.is_empty() {
                    format!("{} primes, product identities hold", primes.len())
                } else {
                    format!("mismatch at {}", bad.join(", "))
                },
                witness: json!({ "primes": primes.len(), "identities": ids }),
            })
        };
        run().unwrap_or_else(|e| CaseResult::error(id.clone(), e))
    })
}

pub fn kgroup_rows(sg: SemigroupPair, i_min: u64, i_max: u64) -> CliResult<Vec<KGroupReport>> {
    (i_min..=i_max).map(|i| Ok(k_group_report(sg, i)?)).collect()
}

fn is_prime_power(m: u64) -> bool {
    m > 1 && factorize(m).len() == 1
}

/// Injectivity of the dimension-function map on prime powers, the `C_5` kernel
/// element and the parity description of the `C_p` image.
pub fn picard_cases(m_max: u64, primes: &[u64]) -> Vec<CaseResult> {
    let mut out = Vec::new();
    for m in (2..=m_max).filter(|&m| is_prime_power(m)) {
        let id = format!("kernel(m={m})");
        out.push(match psi_kernel(m) {
            Ok(k) => {
                let expect_zero = matches!(m, 2..=4);
                CaseResult {
                    id,
                    status: if k.is_empty() == expect_zero { Status::Pass } else { Status::Fail },
                    summary: format!("rank {}{}", k.len(), if expect_zero { ", injective expected" } else { "" }),
                    witness: serde_json::to_value(&k).unwrap_or(Value::Null),
                }
            }
            Err(e) => CaseResult::error(id, e),
        });
    }
    if m_max >= 5 {
        out.push(c5_case());
    }
    for &p in primes {
        let id = format!("image_parity(p={p})");
        out.push(match image_congruence_cp(p) {
            Ok(ok) => CaseResult {
                id,
                status: if ok { Status::Pass } else { Status::Fail },
                summary: if ok { "x ≡ y mod 2".into() } else { "parity lattice differs".into() },
                witness: Value::Null,
            },
            Err(e) => CaseResult::error(id, e),
        });
    }
    out
}

fn c5_case() -> CaseResult {
    let id = "kernel_generator(m=5)".to_string();
    let run = || -> cuspidal::Result<(bool, Vec<VirtualRep>)> {
        let mut x = VirtualRep::zero(5)?;
        x.add_plane(1, 1);
        x.add_plane(2, -1);
        let k = psi_kernel(5)?;
        let ok = k.len() == 1 && (k[0] == x || k[0] == x.scale(-1));
        Ok((ok, k))
    };
    match run() {
        Ok((ok, k)) => CaseResult {
            id,
            status: if ok { Status::Pass } else { Status::Fail },
            summary: "spanned by C(1) - C(2)".into(),
            witness: serde_json::to_value(&k).unwrap_or(Value::Null),
        },
        Err(e) => CaseResult::error(id, e),
    }
}

pub fn report(suite: &str, cases: Vec<CaseResult>) -> VerifyReport {
    VerifyReport::new(suite, cases)
}
