//! The predicted `Z[C_m]`-modules for the homology of `Σ(a, b, m)`, the
//! truncated complexes and `Y_β`, and a certificate comparing a computed
//! homology module (ranks, torsion, rotation matrix) with a prediction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, SemigroupPair};
use crate::dense::{kernel_basis, snf, IntMatrix};
use crate::homology::{homology, GradedHomology, HomologyOptions};
use crate::picard::{divisors, lambda_weights, VirtualRep};
use crate::simplicial::{build_truncated, build_truncated_reduced, build_x, fixed_subcomplex, truncated_cell_count};
use crate::sparse::Chain;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleCase {
    /// `Z[C_m/C_m] = Z` with trivial action.
    FullQuotient,
    /// Kernel of `Z[C_m/C_{m/a}] -> Z`.
    KernelA,
    /// Kernel of `Z[C_m/C_{m/b}] -> Z`.
    KernelB,
    /// Kernel of `Z[C_m/C_{m/ab}] -> Z[C_m/C_{m/a}] ⊕ Z[C_m/C_{m/b}]`.
    IteratedKernel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    pub case: ModuleCase,
    pub a: u64,
    pub b: u64,
    pub m: u64,
    pub rank: usize,
    /// `+1`, or `-1` when the generator also reverses an orientation.
    pub twist: i8,
    /// Column `j` is `τ e_j`.
    pub tau_matrix: Vec<Vec<i64>>,
}

fn shift_matrix(n: usize) -> IntMatrix {
    let mut s = IntMatrix::zeros(n, n);
    for j in 0..n {
        s.set((j + 1) % n, j, BigInt::one());
    }
    s
}

/// Rotation on the integral kernel of `map`, a map out of `Z[Z/n]` commuting
/// with the shift.  The kernel is saturated, so `K` has an integral left inverse.
fn restricted_shift(n: usize, map: &IntMatrix) -> IntMatrix {
    let k = kernel_basis(map);
    if k.cols() == 0 {
        return IntMatrix::zeros(0, 0);
    }
    let f = snf(&k);
    // U K V = [I; 0], so V [I 0] U is a left inverse
    let r = f.rank;
    let left = f.v.mul(&f.u.block(0..r, 0..f.u.cols()));
    left.mul(&shift_matrix(n)).mul(&k)
}

fn projection(n: usize, q: usize) -> IntMatrix {
    let mut p = IntMatrix::zeros(q, n);
    for j in 0..n {
        p.set(j % q, j, BigInt::one());
    }
    p
}

fn vstack(top: &IntMatrix, bottom: &IntMatrix) -> IntMatrix {
    let mut rows = top.to_rows();
    rows.extend(bottom.to_rows());
    IntMatrix::from_rows(&rows)
}

/// The rotation on the permutation model of the module, in a kernel basis.
pub fn permutation_model(case: ModuleCase, a: u64, b: u64) -> IntMatrix {
    match case {
        ModuleCase::FullQuotient => IntMatrix::identity(1),
        ModuleCase::KernelA => restricted_shift(a as usize, &projection(a as usize, 1)),
        ModuleCase::KernelB => restricted_shift(b as usize, &projection(b as usize, 1)),
        ModuleCase::IteratedKernel => {
            let n = (a * b) as usize;
            let map = vstack(&projection(n, a as usize), &projection(n, b as usize));
            restricted_shift(n, &map)
        }
    }
}

/// `τ e_i = e_{i+1}` for `i < N = (a-1)(b-1)` and
/// `τ e_N = Σ (-e_{w+1} + e_{w+2})` over `w ∈ [0, N-2]` with `w = 0` or `w ∈ ⟨a, b⟩`.
pub fn e_basis_matrix(sg: SemigroupPair) -> IntMatrix {
    let n = sg.genus2() as usize;
    let mut t = IntMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        t.set(i + 1, i, BigInt::one());
    }
    for w in 0..n.saturating_sub(1) {
        if w == 0 || sg.contains(w as i64) {
            let c1 = t.get(w, n - 1) - 1;
            t.set(w, n - 1, c1);
            let c2 = t.get(w + 1, n - 1) + 1;
            t.set(w + 1, n - 1, c2);
        }
    }
    t
}

impl ModuleDescriptor {
    /// `b` is ignored for `FullQuotient` and `KernelA`; the divisibility
    /// required by the case is checked.
    pub fn new(case: ModuleCase, a: u64, b: u64, m: u64, twist: i8) -> Result<Self> {
        if m == 0 || a < 2 || !(twist == 1 || twist == -1) {
            return Err(Error::InvalidParameter(format!(
                "module descriptor ({case:?}, a={a}, b={b}, m={m}, twist={twist})"
            )));
        }
        let needs = |d: u64| -> Result<()> {
            if d < 2 || !m.is_multiple_of(d) {
                Err(Error::NotDivisor { d, m })
            } else {
                Ok(())
            }
        };
        let base = match case {
            ModuleCase::FullQuotient => IntMatrix::identity(1),
            ModuleCase::KernelA => {
                needs(a)?;
                permutation_model(case, a, b)
            }
            ModuleCase::KernelB => {
                needs(b)?;
                permutation_model(case, a, b)
            }
            ModuleCase::IteratedKernel => {
                let sg = SemigroupPair::new(a, b)?;
                needs(sg.ab())?;
                e_basis_matrix(sg)
            }
        };
        let tau = base.to_i64_rows().ok_or(Error::Overflow("module descriptor"))?;
        let tau_matrix = tau
            .iter()
            .map(|r| r.iter().map(|&x| x * twist as i64).collect())
            .collect::<Vec<Vec<i64>>>();
        let d = Self {
            case,
            a,
            b,
            m,
            rank: tau_matrix.len(),
            twist,
            tau_matrix,
        };
        if d.rank != d.expected_rank() {
            return Err(Error::Inconsistent(format!("{case:?} has rank {}", d.rank)));
        }
        if !d.tau().pow(m).sub(&IntMatrix::identity(d.rank)).is_zero() {
            return Err(Error::Inconsistent(format!("τ^{m} ≠ 1 on {case:?}")));
        }
        Ok(d)
    }

    pub fn expected_rank(&self) -> usize {
        (match self.case {
            ModuleCase::FullQuotient => 1,
            ModuleCase::KernelA => self.a - 1,
            ModuleCase::KernelB => self.b - 1,
            ModuleCase::IteratedKernel => (self.a - 1) * (self.b - 1),
        }) as usize
    }

    pub fn tau(&self) -> IntMatrix {
        IntMatrix::from_i64(self.rank, self.rank, &self.tau_matrix.concat())
    }

    /// The twisted permutation-model matrix, used for the fixed-rank predictions.
    pub fn model(&self) -> IntMatrix {
        let p = permutation_model(self.case, self.a, self.b);
        let mut out = IntMatrix::zeros(p.rows(), p.cols());
        for i in 0..p.rows() {
            for j in 0..p.cols() {
                out.set(i, j, p.get(i, j) * self.twist as i64);
            }
        }
        out
    }

    /// `rank ker(τ^d - 1)` in the permutation model.
    pub fn fixed_rank(&self, d: u64) -> usize {
        fixed_rank(&self.model(), d)
    }
}

pub fn fixed_rank(t: &IntMatrix, d: u64) -> usize {
    let n = t.rows();
    n - t.pow(d).sub(&IntMatrix::identity(n)).rank()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedHomology {
    pub modules: Vec<(usize, ModuleDescriptor)>,
}

impl PredictedHomology {
    pub fn empty() -> Self {
        Self { modules: Vec::new() }
    }

    fn single(degree: usize, d: ModuleDescriptor) -> Self {
        Self {
            modules: vec![(degree, d)],
        }
    }

    pub fn total_rank(&self) -> usize {
        self.modules.iter().map(|(_, d)| d.rank).sum()
    }

    pub fn at(&self, degree: usize) -> Option<&ModuleDescriptor> {
        self.modules.iter().find(|(q, _)| *q == degree).map(|(_, d)| d)
    }
}

/// Reduced homology of `Σ(a, b, m)` by the four-case table.
pub fn predict_sigma(sg: SemigroupPair, m: u64) -> Result<PredictedHomology> {
    if m == 0 || !sg.contains(m as i64) {
        return Ok(PredictedHomology::empty());
    }
    let l = sg.ell(m as i64) as usize;
    let (a, b) = (sg.a(), sg.b());
    let (case, degree) = match (m.is_multiple_of(a), m.is_multiple_of(b)) {
        (false, false) => (ModuleCase::FullQuotient, 2 * l - 1),
        (true, false) => (ModuleCase::KernelA, 2 * l),
        (false, true) => (ModuleCase::KernelB, 2 * l),
        (true, true) => (ModuleCase::IteratedKernel, 2 * l + 1),
    };
    Ok(PredictedHomology::single(degree, ModuleDescriptor::new(case, a, b, m, 1)?))
}

/// Homology of the truncated complex `X_{s,a}`: `Z` in degree `2d` when `a ∤ s`,
/// and the augmentation kernel of `Z[C_s/C_{s/a}]` in degree `2d + 1` when `a | s`,
/// with `d = ⌊(s-1)/a⌋`.
pub fn predict_truncated(a: u64, s: u64) -> Result<PredictedHomology> {
    if a < 2 || s == 0 {
        return Err(Error::InvalidParameter(format!("truncated complex needs a >= 2, s >= 1 (a={a}, s={s})")));
    }
    let d = ((s - 1) / a) as usize;
    Ok(if s.is_multiple_of(a) {
        PredictedHomology::single(2 * d + 1, ModuleDescriptor::new(ModuleCase::KernelA, a, 1, s, 1)?)
    } else {
        PredictedHomology::single(2 * d, ModuleDescriptor::new(ModuleCase::FullQuotient, a, 1, s, 1)?)
    })
}

/// Reduced homology of `Y_β`, read off the cofiber sequences: the
/// augmentations `Z[C_m/C_{m/a}] -> Z` are onto, so each cofiber shifts the
/// kernel up one degree.
pub fn predict_ybeta(beta: &VirtualRep, sg: SemigroupPair, m: u64) -> Result<PredictedHomology> {
    if !beta.is_actual() {
        return Err(Error::InvalidParameter("Y_β needs an actual representation".into()));
    }
    if beta.m != m {
        return Err(Error::InvalidParameter(format!("β is a C_{} representation, not C_{m}", beta.m)));
    }
    let dim = beta.real_dimension() as usize;
    let twist = beta.orientation_character();
    let (a, b) = (sg.a(), sg.b());
    let (case, degree) = match (m.is_multiple_of(a), m.is_multiple_of(b)) {
        (false, false) => (ModuleCase::FullQuotient, dim),
        (true, false) => (ModuleCase::KernelA, dim + 1),
        (false, true) => (ModuleCase::KernelB, dim + 1),
        (true, true) => (ModuleCase::IteratedKernel, dim + 2),
    };
    Ok(PredictedHomology::single(degree, ModuleDescriptor::new(case, a, b, m, twist)?))
}

/// Computed homology in a form `certify` consumes, with an optional degree shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedDegree {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    pub tau: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedHomology {
    pub order: u64,
    pub degrees: Vec<ObservedDegree>,
}

impl ObservedHomology {
    pub fn from_homology(h: &GradedHomology, shift: usize) -> Self {
        Self {
            order: h.order,
            degrees: h
                .degrees
                .iter()
                .filter(|d| d.rank > 0 || !d.torsion.is_empty())
                .map(|d| ObservedDegree {
                    degree: d.degree + shift,
                    rank: d.rank,
                    torsion: d.torsion.clone(),
                    tau: d.tau.clone(),
                })
                .collect(),
        }
    }

    /// Homology whose only nonzero group is the descriptor's module.
    pub fn from_descriptor(degree: usize, d: &ModuleDescriptor) -> Self {
        let model = d.model().to_i64_rows().expect("small permutation model");
        Self {
            order: d.m,
            degrees: vec![ObservedDegree {
                degree,
                rank: d.rank,
                torsion: Vec::new(),
                tau: Some(model),
            }],
        }
    }

    pub fn at(&self, degree: usize) -> Option<&ObservedDegree> {
        self.degrees.iter().find(|d| d.degree == degree)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Partial,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub subject: String,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
}

impl CertificateReport {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks (i) to (iii) all pass.
    pub fn structure_passes(&self) -> bool {
        ["degrees_ranks_torsion", "characteristic_polynomial", "fixed_ranks"]
            .iter()
            .all(|n| self.check(n).map(|c| c.status) == Some(CheckStatus::Pass))
    }
}

fn check(name: &str, ok: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail,
    }
}

fn to_matrix(t: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64(t.len(), t.len(), &t.concat())
}

/// Whether the `τ`-orbit of `v` spans `Z^n` (all invariant factors 1).
pub fn orbit_spans(t: &IntMatrix, order: u64, v: &[BigInt]) -> bool {
    let n = t.rows();
    if v.len() != n {
        return false;
    }
    if n == 0 {
        return true;
    }
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    let mut x = v.to_vec();
    for _ in 0..order.max(1).min(n as u64 + 1) {
        cols.push(x.clone());
        x = t.mul_vec(&x);
    }
    let m = IntMatrix::from_rows(&cols).transpose();
    let f = snf(&m);
    f.rank == n && f.invariant_factors().iter().all(|d| d.abs().is_one())
}

/// A vector whose orbit spans, among basis vectors and sums/differences of two.
pub fn find_orbit_generator(t: &IntMatrix, order: u64) -> Option<Vec<BigInt>> {
    let n = t.rows();
    let unit = |i: usize| -> Vec<BigInt> { (0..n).map(|k| BigInt::from((k == i) as i64)).collect() };
    let mut candidates = Vec::new();
    for i in 0..n {
        candidates.push(unit(i));
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1i64, -1] {
                let mut v = unit(i);
                v[j] = BigInt::from(s);
                candidates.push(v);
            }
        }
    }
    candidates.into_iter().find(|v| orbit_spans(t, order, v))
}

/// Coordinates of the class of a cycle in the computed basis, via the dual cocycles.
pub fn class_coordinates(h: &GradedHomology, degree: usize, chain: &Chain) -> Result<Vec<BigInt>> {
    let d = h
        .degrees
        .get(degree)
        .ok_or_else(|| Error::InvalidParameter(format!("no homology in degree {degree}")))?;
    if d.cocycles.len() != d.rank {
        return Err(Error::InvalidParameter("homology computed without generators".into()));
    }
    Ok(d
        .cocycles
        .iter()
        .map(|phi| {
            let mut s = BigInt::zero();
            let (mut i, mut j) = (0, 0);
            while i < phi.len() && j < chain.len() {
                match phi[i].0.cmp(&chain[j].0) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        s += BigInt::from(phi[i].1) * BigInt::from(chain[j].1);
                        i += 1;
                        j += 1;
                    }
                }
            }
            s
        })
        .collect())
}

/// How a generator for check (iv) was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitGenerator {
    /// Class coordinates of an explicit cycle, per degree.
    Supplied(Vec<(usize, Vec<BigInt>)>),
    /// Search among small vectors in the computed basis.
    Search,
    None,
}

/// Checks (i) degrees, ranks, no torsion; (ii) characteristic polynomials;
/// (iii) `rank ker(T^d - 1)` for every `d | m`; (iv) a `τ`-orbit spanning the lattice.
pub fn certify(
    subject: &str,
    observed: &ObservedHomology,
    predicted: &PredictedHomology,
    generator: &OrbitGenerator,
) -> CertificateReport {
    let mut checks = Vec::new();

    let mut obs_support: Vec<(usize, usize)> = observed
        .degrees
        .iter()
        .filter(|d| d.rank > 0 || !d.torsion.is_empty())
        .map(|d| (d.degree, d.rank))
        .collect();
    obs_support.sort_unstable();
    let mut pred_support: Vec<(usize, usize)> = predicted.modules.iter().map(|(q, d)| (*q, d.rank)).collect();
    pred_support.sort_unstable();
    let torsion: Vec<(usize, Vec<BigInt>)> = observed
        .degrees
        .iter()
        .filter(|d| !d.torsion.is_empty())
        .map(|d| (d.degree, d.torsion.clone()))
        .collect();
    let shape_ok = obs_support == pred_support && torsion.is_empty();
    checks.push(check(
        "degrees_ranks_torsion",
        shape_ok,
        format!("observed (degree, rank) {obs_support:?}, predicted {pred_support:?}, torsion {torsion:?}"),
    ));

    let mut taus = Vec::new();
    let mut missing_tau = false;
    for (q, desc) in &predicted.modules {
        match observed.at(*q).and_then(|d| d.tau.as_ref()) {
            Some(t) if t.len() == desc.rank => taus.push((*q, desc, to_matrix(t))),
            _ => missing_tau = true,
        }
    }

    if !shape_ok || missing_tau {
        let why = if shape_ok { "no rotation matrix" } else { "shape mismatch" };
        for name in ["characteristic_polynomial", "fixed_ranks", "orbit_spans"] {
            checks.push(Check {
                name: name.to_string(),
                status: if shape_ok { CheckStatus::Skipped } else { CheckStatus::Fail },
                detail: why.to_string(),
            });
        }
        return finish(subject, checks);
    }

    let mut cp_ok = true;
    let mut cp_detail = Vec::new();
    for (q, desc, t) in &taus {
        let a = t.charpoly();
        let b = desc.tau().charpoly();
        cp_ok &= a == b;
        cp_detail.push(format!("degree {q}: {}", fmt_poly(&a)));
    }
    checks.push(check("characteristic_polynomial", cp_ok, cp_detail.join("; ")));

    let mut fr_ok = true;
    let mut fr_detail = Vec::new();
    for (q, desc, t) in &taus {
        for d in divisors(desc.m) {
            let (x, y) = (fixed_rank(t, d), desc.fixed_rank(d));
            fr_ok &= x == y;
            if x != y {
                fr_detail.push(format!("degree {q}, d={d}: observed {x}, predicted {y}"));
            }
        }
    }
    if fr_ok {
        fr_detail.push("all divisors agree".into());
    }
    checks.push(check("fixed_ranks", fr_ok, fr_detail.join("; ")));

    let orbit = match generator {
        OrbitGenerator::None => Check {
            name: "orbit_spans".into(),
            status: if taus.is_empty() { CheckStatus::Pass } else { CheckStatus::Skipped },
            detail: if taus.is_empty() { "nothing to span".into() } else { "no generator supplied".into() },
        },
        OrbitGenerator::Supplied(gens) => {
            let mut ok = true;
            for (q, desc, t) in &taus {
                ok &= gens
                    .iter()
                    .find(|(d, _)| d == q)
                    .is_some_and(|(_, v)| orbit_spans(t, desc.m, v));
            }
            check("orbit_spans", ok, "orbit of the supplied cycle".into())
        }
        OrbitGenerator::Search => {
            let mut ok = true;
            let mut found = Vec::new();
            for (q, desc, t) in &taus {
                match find_orbit_generator(t, desc.m) {
                    Some(v) => found.push(format!("degree {q}: {v:?}")),
                    None => ok = false,
                }
            }
            check("orbit_spans", ok, format!("searched generator {}", found.join("; ")))
        }
    };
    checks.push(orbit);
    finish(subject, checks)
}

fn finish(subject: &str, checks: Vec<Check>) -> CertificateReport {
    let verdict = if checks.iter().any(|c| c.status == CheckStatus::Fail) {
        Verdict::Failed
    } else if checks.iter().all(|c| c.status == CheckStatus::Pass) {
        Verdict::Certified
    } else {
        Verdict::Partial
    };
    CertificateReport {
        subject: subject.to_string(),
        verdict,
        checks,
    }
}

fn fmt_poly(c: &[BigInt]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| match k {
            0 => format!("{x}"),
            1 => format!("{x}t"),
            _ => format!("{x}t^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub p: u64,
    pub i: u32,
    pub m_prime: u64,
    pub report: CertificateReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareBundle {
    pub a: u64,
    pub b: u64,
    pub m: u64,
    pub levels: Vec<LevelReport>,
}

impl CompareBundle {
    pub fn all_certified(&self) -> bool {
        self.levels.iter().all(|l| l.report.is_certified())
    }
}

/// Largest `m'` for which `X(a, b, m')` is built directly rather than read off `Σ`.
pub const DIRECT_X_MAX: u64 = 16;

/// Reduced homology of `X(a, b, m)` with its rotation action.
pub fn x_homology(sg: SemigroupPair, m: u64) -> Result<ObservedHomology> {
    if m <= DIRECT_X_MAX {
        let x = build_x(sg, m)?;
        return Ok(ObservedHomology::from_homology(&homology(&x, HomologyOptions::with_action())?, 0));
    }
    let sigma = fixed_subcomplex(sg, m, 1)?.complex;
    Ok(ObservedHomology::from_homology(&homology(&sigma, HomologyOptions::with_action())?, 1))
}

/// For each prime `p | m` (or the given one) and each `0 <= i <= ν_p(m)`, the
/// homology of `X(a, b, m/p^{n-i})`, the `C_{p^{n-i}}`-fixed points, against
/// `Y` built from the fixed points of `λ(a, b, m)`.
pub fn compare_x_vs_y(sg: SemigroupPair, m: u64, p: Option<u64>) -> Result<CompareBundle> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let primes: Vec<(u64, u32)> = match p {
        Some(p) => {
            if !crate::arith::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            vec![(p, crate::arith::nu_u64(p, m)? as u32)]
        }
        None => factorize(m),
    };
    let lambda = VirtualRep::from_weights(m, &lambda_weights(sg, m)?)?;
    let mut levels = Vec::new();
    let mut plan: Vec<(u64, u32, u64)> = Vec::new();
    if primes.is_empty() {
        plan.push((1, 0, m));
    }
    for (p, n) in primes {
        for i in 0..=n {
            plan.push((p, i, m / p.pow(n - i)));
        }
    }
    for (p, i, m_prime) in plan {
        let beta = lambda.fixed_points(m / m_prime)?;
        let direct = VirtualRep::from_weights(m_prime, &lambda_weights(sg, m_prime)?)?;
        if beta != direct {
            return Err(Error::Inconsistent(format!(
                "fixed points of λ(a, b, {m}) differ from λ(a, b, {m_prime})"
            )));
        }
        let predicted = predict_ybeta(&beta, sg, m_prime)?;
        let observed = x_homology(sg, m_prime)?;
        let report = certify(
            &format!("X({}, {}, {m_prime}) vs Y", sg.a(), sg.b()),
            &observed,
            &predicted,
            &OrbitGenerator::Search,
        );
        levels.push(LevelReport { p, i, m_prime, report });
    }
    Ok(CompareBundle {
        a: sg.a(),
        b: sg.b(),
        m,
        levels,
    })
}

/// Homology of `Σ(a, b, m)` with its rotation against the four-case table,
/// using the translated generator cycle for check (iv).
pub fn certify_sigma(sg: SemigroupPair, m: u64) -> Result<CertificateReport> {
    let sigma = fixed_subcomplex(sg, m, 1)?.complex;
    let h = homology(&sigma, HomologyOptions::with_action())?;
    let predicted = predict_sigma(sg, m)?;
    let generator = if predicted.modules.is_empty() {
        OrbitGenerator::None
    } else {
        let (q, v) = crate::hochschild::generator_class(sg, m, &sigma, &h)?;
        OrbitGenerator::Supplied(vec![(q, v)])
    };
    Ok(certify(
        &format!("Σ({}, {}, {m})", sg.a(), sg.b()),
        &ObservedHomology::from_homology(&h, 0),
        &predicted,
        &generator,
    ))
}

/// Largest cell count for which the full truncated complex (with rotation) is built.
pub const TRUNCATED_FULL_MAX_CELLS: u64 = 200_000;

/// Homology of `X_{s,a}` against its prediction.  Past
/// `TRUNCATED_FULL_MAX_CELLS` only ranks are available, and the report is partial.
pub fn certify_truncated(a: u64, s: u64) -> Result<CertificateReport> {
    let predicted = predict_truncated(a, s)?;
    let subject = format!("X_{{{s},{a}}}");
    if truncated_cell_count(a, s) <= TRUNCATED_FULL_MAX_CELLS {
        let x = build_truncated(a, s)?;
        let h = homology(&x, HomologyOptions::with_action())?;
        return Ok(certify(&subject, &ObservedHomology::from_homology(&h, 0), &predicted, &OrbitGenerator::Search));
    }
    let x = build_truncated_reduced(a, s)?;
    let h = homology(&x, HomologyOptions::ranks_only())?;
    Ok(certify(&subject, &ObservedHomology::from_homology(&h, 0), &predicted, &OrbitGenerator::None))
}

/// Whether two square matrices are conjugate by an integral matrix mapping a
/// cyclic vector of one to a cyclic vector of the other (a sufficient test).
pub fn cyclic_conjugate(s: &IntMatrix, t: &IntMatrix, order: u64) -> bool {
    if s.rows() != t.rows() || s.charpoly() != t.charpoly() {
        return false;
    }
    let n = s.rows();
    let (Some(v), Some(w)) = (find_orbit_generator(s, order), find_orbit_generator(t, order)) else {
        return false;
    };
    // both are Z[t]/(χ) with the cyclic vector sent to 1 once the orbit of
    // length n is a Z-basis
    let krylov = |a: &IntMatrix, v: &[BigInt]| -> IntMatrix {
        let mut cols = Vec::new();
        let mut x = v.to_vec();
        for _ in 0..n {
            cols.push(x.clone());
            x = a.mul_vec(&x);
        }
        IntMatrix::from_rows(&cols).transpose()
    };
    let ks = krylov(s, &v);
    let kt = krylov(t, &w);
    ks.det().abs().is_one() && kt.det().abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sg(a: u64, b: u64) -> SemigroupPair {
        SemigroupPair::new(a, b).unwrap()
    }

    #[test]
    fn e_basis_for_two_three() {
        let t = e_basis_matrix(sg(2, 3));
        assert_eq!(t.to_i64_rows().unwrap(), vec![vec![0, -1], vec![1, 1]]);
    }

    #[test]
    fn descriptors_have_order_m_and_model_invariants() {
        for &(a, b) in &[(2, 3), (2, 5), (3, 4), (3, 5), (4, 5)] {
            let ab = a * b;
            let it = ModuleDescriptor::new(ModuleCase::IteratedKernel, a, b, 2 * ab, 1).unwrap();
            let model = it.model();
            assert_eq!(it.tau().charpoly(), model.charpoly());
            for d in divisors(2 * ab) {
                assert_eq!(fixed_rank(&it.tau(), d), it.fixed_rank(d));
            }
            assert!(cyclic_conjugate(&it.tau(), &model, ab));
            let ka = ModuleDescriptor::new(ModuleCase::KernelA, a, b, a * 7, 1).unwrap();
            assert_eq!(ka.rank, a as usize - 1);
            assert_eq!(ka.fixed_rank(a), a as usize - 1);
            assert_eq!(ka.fixed_rank(1), 0);
        }
        assert!(ModuleDescriptor::new(ModuleCase::KernelA, 2, 3, 5, 1).is_err());
    }

    #[test]
    fn predictions_match_examples() {
        let p = predict_sigma(sg(2, 3), 5).unwrap();
        assert_eq!(p.modules.len(), 1);
        assert_eq!((p.modules[0].0, p.modules[0].1.case), (1, ModuleCase::FullQuotient));
        let p = predict_sigma(sg(2, 3), 6).unwrap();
        assert_eq!((p.modules[0].0, p.modules[0].1.rank), (1, 2));
        assert!(predict_sigma(sg(3, 5), 7).unwrap().modules.is_empty());

        assert_eq!(predict_truncated(2, 5).unwrap().modules[0].0, 4);
        let t = predict_truncated(3, 3).unwrap();
        assert_eq!((t.modules[0].0, t.modules[0].1.rank), (1, 2));
        let t = predict_truncated(5, 1).unwrap();
        assert_eq!((t.modules[0].0, t.modules[0].1.rank), (0, 1));

        let l5 = VirtualRep::from_weights(5, &lambda_weights(sg(2, 3), 5).unwrap()).unwrap();
        assert_eq!(predict_ybeta(&l5, sg(2, 3), 5).unwrap().modules[0].0, 2);
        let zero = VirtualRep::zero(4).unwrap();
        let y = predict_ybeta(&zero, sg(2, 3), 4).unwrap();
        assert_eq!((y.modules[0].0, y.modules[0].1.case), (1, ModuleCase::KernelA));
        let l6 = VirtualRep::from_weights(6, &[]).unwrap();
        let y = predict_ybeta(&l6, sg(2, 3), 6).unwrap();
        assert_eq!((y.modules[0].0, y.modules[0].1.case), (2, ModuleCase::IteratedKernel));
        assert!(predict_ybeta(&zero.minus(&VirtualRep::trivial(4, 1).unwrap()).unwrap(), sg(2, 3), 4).is_err());
    }

    #[test]
    fn certify_is_reflexive() {
        for &(a, b) in &[(2, 3), (3, 4), (2, 5)] {
            for (case, m) in [
                (ModuleCase::FullQuotient, 7),
                (ModuleCase::KernelA, a * 5),
                (ModuleCase::KernelB, b * 7),
                (ModuleCase::IteratedKernel, a * b),
            ] {
                let d = ModuleDescriptor::new(case, a, b, m, 1).unwrap();
                let pred = PredictedHomology::single(3, d.clone());
                let obs = ObservedHomology::from_descriptor(3, &d);
                let r = certify("self", &obs, &pred, &OrbitGenerator::Search);
                assert!(r.is_certified(), "{r:?}");
            }
        }
    }

    #[test]
    fn certify_rejects_rank_mismatch() {
        let d = ModuleDescriptor::new(ModuleCase::FullQuotient, 2, 3, 5, 1).unwrap();
        let pred = PredictedHomology::single(1, d);
        let obs = ObservedHomology {
            order: 5,
            degrees: vec![ObservedDegree {
                degree: 1,
                rank: 2,
                torsion: vec![],
                tau: Some(vec![vec![1, 0], vec![0, 1]]),
            }],
        };
        let r = certify("bad", &obs, &pred, &OrbitGenerator::Search);
        assert_eq!(r.verdict, Verdict::Failed);
        assert_eq!(r.check("degrees_ranks_torsion").unwrap().status, CheckStatus::Fail);
    }

    #[test]
    fn sigma_small_cases_certify() {
        let s = sg(2, 3);
        for m in [5, 6, 12] {
            let c = fixed_subcomplex(s, m, 1).unwrap().complex;
            let h = homology(&c, HomologyOptions::with_action()).unwrap();
            let r = certify("Σ", &ObservedHomology::from_homology(&h, 0), &predict_sigma(s, m).unwrap(), &OrbitGenerator::Search);
            assert!(r.is_certified(), "m={m}: {r:?}");
        }
    }

    #[test]
    fn compare_examples() {
        let b = compare_x_vs_y(sg(2, 3), 6, Some(2)).unwrap();
        assert_eq!(b.levels.iter().map(|l| l.m_prime).collect::<Vec<_>>(), vec![3, 6]);
        assert!(b.all_certified(), "{b:?}");
        let b = compare_x_vs_y(sg(2, 3), 5, None).unwrap();
        assert_eq!(b.levels.len(), 2);
        assert!(b.all_certified());
        let b = compare_x_vs_y(sg(2, 3), 1, None).unwrap();
        assert!(b.all_certified());
    }
}
