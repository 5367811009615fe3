//! Runs the ten acceptance criteria and prints one line per criterion.
//! Exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigUint;

use cuspidal::arith::{factorize, primes_up_to, SemigroupPair};
use cuspidal::equivariant::{certify_sigma, certify_truncated, compare_x_vs_y, CheckStatus};
use cuspidal::hochschild::{generator_chain, generator_count, is_cycle, oracle_equiv, tau_witness_r0};
use cuspidal::ktheory::{factor_identities, k_group_report, valuation_crosscheck};
use cuspidal::picard::{
    canonical_cd, image_congruence_cp, lambda_weights, lambda_weights_with, psi_kernel, VirtualRep,
};
use cuspidal::simplicial::truncated_cell_count;

const PAIRS: [(u64, u64); 4] = [(2, 3), (2, 5), (3, 4), (3, 5)];

fn sg(a: u64, b: u64) -> SemigroupPair {
    SemigroupPair::new(a, b).unwrap()
}

fn m_max(a: u64, b: u64) -> u64 {
    if (a, b) == (2, 3) {
        28
    } else {
        24
    }
}

/// `Err` carries the first failing case.
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_cuspidal"))
        .args(["kgroups", "--a", "3", "--b", "5", "--i-max", "1", "--format", "csv", "--no-cache"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&o.stdout);
    let row = text.lines().nth(1).ok_or("no row")?.to_string();
    let cols: Vec<&str> = row.split(',').collect();
    ensure(o.status.success(), || "non-zero exit".into())?;
    ensure(cols.get(2) == Some(&"113400"), || format!("row {row}"))?;
    ensure(cols.get(3) == Some(&"2^3·3^4·5^2·7"), || format!("row {row}"))?;
    let r = k_group_report(sg(3, 5), 1).map_err(|e| e.to_string())?;
    ensure(r.odd_order == Some(BigUint::from(113400u32)), || "library order differs".into())?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("|K_1| = 113400 = 2^3·3^4·5^2·7 via the binary in {:.0} ms", elapsed.as_secs_f64() * 1e3))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for (a, b) in PAIRS {
        for i in 1..=25 {
            for p in primes_up_to(a * b * i) {
                let ok = valuation_crosscheck(sg(a, b), i, p).map_err(|e| e.to_string())?;
                ensure(ok, || format!("({a},{b}) i={i} p={p}"))?;
                n += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{n} (pair, i, p) cases in {:.1} s", elapsed.as_secs_f64()))
}

fn c3() -> Outcome {
    for (a, b) in PAIRS {
        for i in 1..=25 {
            let f = factor_identities(sg(a, b), i).map_err(|e| e.to_string())?;
            ensure(f.all(), || format!("({a},{b}) i={i}: {f:?}"))?;
        }
    }
    Ok("4 pairs × i ≤ 25, all four identities".into())
}

fn c4() -> Outcome {
    let mut n = 0;
    for (a, b) in PAIRS {
        let s = sg(a, b);
        for m in (1..=m_max(a, b)).filter(|&m| s.contains(m as i64)) {
            let r = certify_sigma(s, m).map_err(|e| format!("({a},{b},{m}): {e}"))?;
            ensure(r.is_certified(), || format!("({a},{b},{m}): {:?}", r.checks))?;
            n += 1;
        }
    }
    Ok(format!("{n} complexes certified, checks (i) to (iv)"))
}

fn c5() -> Outcome {
    let mut n = 0;
    let mut reduced = 0;
    for a in 2..=5 {
        for s in 1..=25 {
            let r = certify_truncated(a, s).map_err(|e| format!("a={a} s={s}: {e}"))?;
            let c = r.check("degrees_ranks_torsion").ok_or("missing check")?;
            ensure(c.status == CheckStatus::Pass, || format!("a={a} s={s}: {}", c.detail))?;
            let d = 2 * ((s - 1) / a) + u64::from(s % a == 0);
            ensure(c.detail.contains(&format!("[({d}, ")), || format!("a={a} s={s}: degree {d} expected, {}", c.detail))?;
            if truncated_cell_count(a, s) > cuspidal::equivariant::TRUNCATED_FULL_MAX_CELLS {
                reduced += 1;
            }
            n += 1;
        }
    }
    Ok(format!("{n} complexes, {reduced} through the reduced subcomplex"))
}

fn c6() -> Outcome {
    let mut n = 0;
    for (a, b) in PAIRS {
        for m in 1..=m_max(a, b) {
            let ok = oracle_equiv(sg(a, b), m).map_err(|e| format!("({a},{b},{m}): {e}"))?;
            ensure(ok, || format!("({a},{b},{m})"))?;
            n += 1;
        }
    }
    Ok(format!("{n} (pair, m) agree in every degree"))
}

fn c7() -> Outcome {
    let mut n = 0;
    for (a, b) in PAIRS {
        let s = sg(a, b);
        for m in 1..=40 {
            let Some(count) = generator_count(s, m) else { continue };
            for q in 1..=count {
                let c = generator_chain(s, m, Some(q)).map_err(|e| e.to_string())?;
                ensure(is_cycle(s, &c), || format!("({a},{b},{m}) q={q}"))?;
                n += 1;
            }
        }
    }
    for (a, b, m) in [(2, 3, 6), (2, 5, 10), (3, 4, 12), (3, 5, 15)] {
        let w = tau_witness_r0(sg(a, b), m).map_err(|e| e.to_string())?;
        ensure(w.holds, || format!("witness ({a},{b},{m})"))?;
    }
    Ok(format!("{n} generator cycles, 4 rotation witnesses"))
}

fn c8() -> Outcome {
    let mut cases: Vec<(u64, u64, u64)> = (1..=18).filter(|m| m % 2 == 0 || m % 3 == 0).map(|m| (2, 3, m)).collect();
    cases.extend([(3, 5, 15), (3, 5, 30)]);
    let mut levels = 0;
    for (a, b, m) in cases {
        let bundle = compare_x_vs_y(sg(a, b), m, None).map_err(|e| format!("({a},{b},{m}): {e}"))?;
        ensure(bundle.all_certified(), || format!("({a},{b},{m})"))?;
        levels += bundle.levels.len();
    }
    Ok(format!("{levels} fixed-point levels certified"))
}

fn c9() -> Outcome {
    for m in (2..=32u64).filter(|&m| factorize(m).len() == 1) {
        let k = psi_kernel(m).map_err(|e| e.to_string())?;
        ensure(k.is_empty() == matches!(m, 2..=4), || format!("m={m}: kernel rank {}", k.len()))?;
    }
    let mut x = VirtualRep::zero(5).map_err(|e| e.to_string())?;
    x.add_plane(1, 1);
    x.add_plane(2, -1);
    let k = psi_kernel(5).map_err(|e| e.to_string())?;
    ensure(k.len() == 1 && (k[0] == x || k[0] == x.scale(-1)), || format!("m=5 kernel {k:?}"))?;
    for p in [3, 5, 7, 11] {
        ensure(image_congruence_cp(p).map_err(|e| e.to_string())?, || format!("p={p}"))?;
    }
    Ok("injective exactly at 2, 3, 4; C(1) - C(2) at m = 5; parity for p ≤ 11".into())
}

fn c10() -> Outcome {
    let mut pairs: Vec<(u64, u64)> = PAIRS.to_vec();
    pairs.push((4, 7));
    for &(a, b) in &pairs {
        let s = sg(a, b);
        let (c, d) = canonical_cd(s);
        for m in 0..=500u64 {
            let mi = m as i64;
            ensure(s.reps_nonneg(mi) == s.ell(mi + (a + b) as i64), || format!("shift ({a},{b}) m={m}"))?;
            if m >= 1 {
                let f = m / (a * b);
                let r = s.reps_nonneg(mi);
                ensure(r == f || r == f + 1, || format!("Popoviciu ({a},{b}) m={m}"))?;
                let w = lambda_weights(s, m).map_err(|e| e.to_string())?;
                ensure(w.len() as u64 == s.ell(mi), || format!("|λ| ({a},{b}) m={m}"))?;
                let base = VirtualRep::from_weights(m, &w).map_err(|e| e.to_string())?;
                for k in -3i64..=3 {
                    let moved = lambda_weights_with(s, m, c + k * a as i64, d + k * b as i64);
                    let moved = VirtualRep::from_weights(m, &moved).map_err(|e| e.to_string())?;
                    ensure(moved == base, || format!("(c,d) choice ({a},{b}) m={m} k={k}"))?;
                }
                for (p, n) in factorize(m) {
                    for e in 1..=n {
                        let q = p.pow(e);
                        let fixed = w.iter().filter(|&&nu| nu % q as i64 == 0).count();
                        let below = lambda_weights(s, m / q).map_err(|e| e.to_string())?.len();
                        ensure(fixed == below, || format!("fixed points ({a},{b}) m={m} p^{e}={q}"))?;
                    }
                }
            }
        }
        for i in 1..=25 {
            let mi = s.m_set(i).map_err(|e| e.to_string())?;
            ensure(mi.len() as u64 == (a - 1) * (b - 1) / 2, || format!("|M_{i}| ({a},{b})"))?;
            ensure(s.count_ell_equal(i) == a * b, || format!("count ℓ = {i} ({a},{b})"))?;
        }
    }
    Ok(format!("{} pairs, m ≤ 500, i ≤ 25", pairs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("K-order reproduction", c1),
        ("valuation identity", c2),
        ("factor identities", c3),
        ("homology of Σ(a, b, m)", c4),
        ("truncated family", c5),
        ("oracle equivalence", c6),
        ("cycles and witnesses", c7),
        ("recognition hypothesis", c8),
        ("Picard claims", c9),
        ("property suites", c10),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (j, (name, f)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2}", j + 1);
        if let Some(filt) = &filter {
            if !label.contains(filt.as_str()) && !name.contains(filt.as_str()) {
                continue;
            }
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{label}  PASS  {name}: {detail} [{secs:.1} s]"),
            Err(why) => {
                failed += 1;
                println!("{label}  FAIL  {name}: {why} [{secs:.1} s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
