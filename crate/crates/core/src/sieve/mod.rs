//! Arithmetic feasibility sieve over the subgroup catalog.
//!
//! For each applicable `(line, q)` the sieve enumerates every divisor `k` of
//! the k-bound `|Out(X)|·|H0|` and keeps those for which a nontrivial
//! symmetric `(v, k, λ)` design is arithmetically possible:
//!
//! 1. `(v-1) | k(k-1)`, giving `λ = k(k-1)/(v-1)`;
//! 2. `λ < k` and `λv < k²`;
//! 3. `4λ(v-1)+1` is a perfect square;
//! 4. `k | λ·D` for every known subdegree divisor `D` (with `D` replaced by
//!    `gcd(D, v-1)` for the parabolic prime-power subdegree);
//! 5. for non-parabolic lines, `gcd(p, v-1) = 1` (Tits), checked once per case.
//!
//! Lines 11–16 are first passed through the cube bound
//! `|X| <= |Out(X)|²·|H0|³`.
//!
//! Nothing here assumes `λ >= 4`; small-λ parameters are filtered against
//! the known designs at classification time.

pub mod tables;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{cases_for, out_order, socle_order, CatalogError, SubgroupCase};
use crate::exactmath::{divisors, factorize, gcd, is_perfect_square, prime_powers_in_box, Factorization, PrimePower};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ParamError {
    #[error("k(k-1) != λ(v-1)")]
    Fisher,
    #[error("design is trivial (need 2 < k < v-1)")]
    Trivial,
    #[error("λv >= k²")]
    LambdaBound,
    #[error("4λ(v-1)+1 is not a square")]
    NotSquare,
}

/// Parameters of a nontrivial symmetric design.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DesignParams {
    v: BigUint,
    k: BigUint,
    lambda: BigUint,
}

impl DesignParams {
    pub fn new(v: BigUint, k: BigUint, lambda: BigUint) -> Result<Self, ParamError> {
        let one = BigUint::one();
        if v < BigUint::from(4u32) || k <= BigUint::from(2u32) || k >= &v - &one {
            return Err(ParamError::Trivial);
        }
        if &k * (&k - &one) != &lambda * (&v - &one) {
            return Err(ParamError::Fisher);
        }
        if &lambda * &v >= &k * &k {
            return Err(ParamError::LambdaBound);
        }
        if !is_perfect_square(&(BigUint::from(4u32) * &lambda * (&v - &one) + &one)) {
            return Err(ParamError::NotSquare);
        }
        Ok(DesignParams { v, k, lambda })
    }

    pub fn from_u64(v: u64, k: u64, lambda: u64) -> Result<Self, ParamError> {
        DesignParams::new(v.into(), k.into(), lambda.into())
    }

    pub fn v(&self) -> &BigUint {
        &self.v
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    pub fn lambda(&self) -> &BigUint {
        &self.lambda
    }

    /// `(v, k, λ)` as machine integers, when they fit.
    pub fn as_u64(&self) -> Option<(u64, u64, u64)> {
        Some((self.v.to_u64()?, self.k.to_u64()?, self.lambda.to_u64()?))
    }

    /// `(v, v-k, v-2k+λ)`.
    pub fn complement(&self) -> DesignParams {
        let k2 = &self.v - &self.k;
        let l2 = &self.v + &self.lambda - BigUint::from(2u32) * &self.k;
        DesignParams { v: self.v.clone(), k: k2, lambda: l2 }
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.v, self.k, self.lambda)
    }
}

/// Why a divisor, or a whole case, was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    /// `k` outside `(2, v-1)` or `λ = k(k-1)/(v-1)` not integral.
    NoKDivisor,
    LambdaBoundFail,
    SquareFail,
    SubdegFail,
    TitsFail,
    CubePrefilter,
}

impl Reason {
    pub fn code(&self) -> &'static str {
        match self {
            Reason::NoKDivisor => "NO_K_DIVISOR",
            Reason::SquareFail => "SQUARE_FAIL",
            Reason::SubdegFail => "SUBDEG_FAIL",
            Reason::LambdaBoundFail => "LAMBDA_BOUND_FAIL",
            Reason::TitsFail => "TITS_FAIL",
            Reason::CubePrefilter => "CUBE_PREFILTER",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Eliminated,
    Survivor,
    Unresolved,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Eliminated => "eliminated",
            Status::Survivor => "survivor",
            Status::Unresolved => "unresolved",
        })
    }
}

/// One subdegree constraint as evaluated on a candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdegreeCheck {
    /// The catalog value `D`.
    pub divisor: BigUint,
    /// What was actually used: `gcd(D, v-1)` on parabolic lines, else `D`.
    pub applied: BigUint,
    /// `λ·applied / k`.
    pub multiplier: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    /// `2k-1`, the square root of `4λ(v-1)+1`.
    pub square_root: BigUint,
    /// `gcd(p, v-1)` when the Tits condition applies.
    pub tits_gcd: Option<BigUint>,
    pub subdegree: Vec<SubdegreeCheck>,
    /// Set on unresolved candidates.
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub params: DesignParams,
    pub trace: Trace,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub k: BigUint,
    pub reason: Reason,
}

/// Result of the divisor stage for one `(v, k_bound)` pair.
#[derive(Debug, Clone, Default)]
pub struct Feasibility {
    pub candidates: Vec<(DesignParams, Trace)>,
    pub rejections: Vec<Rejection>,
    /// The whole case failed `gcd(p, v-1) = 1`.
    pub tits_failed: bool,
}

/// Divisor enumeration under constraints 1–5; see the module docs.
pub fn feasible_candidates(
    v: &BigUint,
    k_bound: &BigUint,
    subdeg: &[BigUint],
    p: u64,
    parabolic: bool,
) -> Feasibility {
    feasible_candidates_factored(v, &factorize(k_bound), subdeg, p, parabolic)
}

pub fn feasible_candidates_factored(
    v: &BigUint,
    k_bound: &Factorization,
    subdeg: &[BigUint],
    p: u64,
    parabolic: bool,
) -> Feasibility {
    let vm1 = v - 1u32;
    let all = divisors(k_bound);
    let mut out = Feasibility::default();

    let tits_gcd = (!parabolic).then(|| gcd(&BigUint::from(p), &vm1));
    if tits_gcd.as_ref().is_some_and(|g| !g.is_one()) {
        out.tits_failed = true;
        out.rejections = all
            .into_iter()
            .map(|k| Rejection { k, reason: Reason::TitsFail })
            .collect();
        return out;
    }

    let applied: Vec<BigUint> = subdeg
        .iter()
        .map(|d| if parabolic { gcd(d, &vm1) } else { d.clone() })
        .collect();

    for k in all {
        match check_divisor(k.clone(), v, &vm1, subdeg, &applied) {
            Ok((params, mut trace)) => {
                trace.tits_gcd = tits_gcd.clone();
                out.candidates.push((params, trace));
            }
            Err(reason) => out.rejections.push(Rejection { k, reason }),
        }
    }
    out
}

fn check_divisor(
    k: BigUint,
    v: &BigUint,
    vm1: &BigUint,
    subdeg: &[BigUint],
    applied: &[BigUint],
) -> Result<(DesignParams, Trace), Reason> {
    let one = BigUint::one();
    if k <= BigUint::from(2u32) || k >= *vm1 {
        return Err(Reason::NoKDivisor);
    }
    let num = &k * (&k - &one);
    if !(&num % vm1).is_zero() {
        return Err(Reason::NoKDivisor);
    }
    let lambda = num / vm1;
    if lambda >= k || &lambda * v >= &k * &k {
        return Err(Reason::LambdaBoundFail);
    }
    let disc = BigUint::from(4u32) * &lambda * vm1 + &one;
    if !is_perfect_square(&disc) {
        return Err(Reason::SquareFail);
    }
    let mut checks = Vec::with_capacity(subdeg.len());
    for (d, a) in subdeg.iter().zip(applied) {
        let prod = &lambda * a;
        if !(&prod % &k).is_zero() {
            return Err(Reason::SubdegFail);
        }
        checks.push(SubdegreeCheck { divisor: d.clone(), applied: a.clone(), multiplier: prod / &k });
    }
    let square_root = BigUint::from(2u32) * &k - &one;
    let params = DesignParams { v: v.clone(), k, lambda };
    Ok((params, Trace { square_root, tits_gcd: None, subdegree: checks, note: None }))
}

/// `|X| <= |Out(X)|² · |H0|³`; true means the case survives to the divisor stage.
pub fn cube_prefilter(case: &SubgroupCase) -> Result<bool, CatalogError> {
    let h0 = case.h0_order()?;
    let out = BigUint::from(out_order(&case.q));
    Ok(socle_order(&case.q) <= &out * &out * h0.pow(3u32))
}

/// Parameter triples realised by known designs with socle `PSU_4(2)`.
pub const KNOWN_TRIPLES: [(u64, u64, u64); 3] = [(36, 15, 6), (40, 27, 18), (45, 12, 3)];

pub fn is_known_design(q: &PrimePower, params: &DesignParams) -> bool {
    q.q() == 2 && params.as_u64().is_some_and(|t| KNOWN_TRIPLES.contains(&t))
}

fn unresolved_note(case: &SubgroupCase) -> String {
    match (case.line, case.q.q()) {
        (6, 4) => "arithmetically feasible; nonexistence needs the subdegrees of the \
                   degree-41600 coset action, which are not computed here"
            .into(),
        (13 | 14, _) => "survives the cube bound with |H0| = max(d,2)·|core|/d; \
                         arithmetically feasible"
            .into(),
        _ => "arithmetically feasible; no divisibility certificate of nonexistence".into(),
    }
}

/// Outcome for one `(line, q)`.
#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub case: SubgroupCase,
    pub v: BigUint,
    pub k_bound: BigUint,
    pub status: Status,
    /// Case-level reason; `None` unless eliminated.
    pub reason: Option<Reason>,
    pub candidates: Vec<Candidate>,
    pub rejections: Vec<Rejection>,
}

impl CaseOutcome {
    pub fn line(&self) -> u8 {
        self.case.line
    }

    pub fn q(&self) -> &PrimePower {
        &self.case.q
    }

    /// Number of rejected divisors per reason.
    pub fn rejection_counts(&self) -> BTreeMap<Reason, usize> {
        let mut m = BTreeMap::new();
        for r in &self.rejections {
            *m.entry(r.reason).or_insert(0) += 1;
        }
        m
    }

    fn sort_key(&self) -> (u8, u64, u64) {
        (self.case.line, self.case.q.q(), self.case.subfield.map_or(0, |s| s.q0.q()))
    }
}

/// Runs the full pipeline on one case.
pub fn scan_case(case: &SubgroupCase) -> Result<CaseOutcome, CatalogError> {
    let v = case.point_count()?;
    let k_bound = case.k_divisor_bound()?;
    let mut outcome = CaseOutcome {
        case: *case,
        v: v.clone(),
        k_bound,
        status: Status::Eliminated,
        reason: None,
        candidates: Vec::new(),
        rejections: Vec::new(),
    };
    if case.line >= 11 && !cube_prefilter(case)? {
        outcome.reason = Some(Reason::CubePrefilter);
        return Ok(outcome);
    }
    let feas = feasible_candidates_factored(
        &v,
        &case.k_bound_factorization()?,
        &case.subdegree_divisors(),
        case.q.p(),
        case.parabolic(),
    );
    outcome.rejections = feas.rejections;
    if feas.tits_failed {
        outcome.reason = Some(Reason::TitsFail);
        return Ok(outcome);
    }
    outcome.candidates = feas
        .candidates
        .into_iter()
        .map(|(params, mut trace)| {
            let status = if is_known_design(&case.q, &params) {
                Status::Survivor
            } else {
                trace.note = Some(unresolved_note(case));
                Status::Unresolved
            };
            Candidate { params, trace, status }
        })
        .collect();
    if outcome.candidates.is_empty() {
        // Report the deepest stage any divisor reached.
        outcome.reason = Some(
            outcome
                .rejections
                .iter()
                .map(|r| r.reason)
                .max()
                .unwrap_or(Reason::NoKDivisor),
        );
    } else if outcome.candidates.iter().all(|c| c.status == Status::Survivor) {
        outcome.status = Status::Survivor;
    } else {
        outcome.status = Status::Unresolved;
    }
    Ok(outcome)
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub p_max: u64,
    pub a_max: u32,
    pub line_filter: Option<u8>,
    /// Sorted by `(line, q, q0)`.
    pub outcomes: Vec<CaseOutcome>,
}

/// A candidate together with where it was found.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Located {
    pub line: u8,
    pub q: u64,
    pub params: DesignParams,
}

impl ScanReport {
    fn collect(&self, status: Status) -> Vec<Located> {
        self.outcomes
            .iter()
            .flat_map(|o| {
                o.candidates.iter().filter(move |c| c.status == status).map(move |c| Located {
                    line: o.case.line,
                    q: o.case.q.q(),
                    params: c.params.clone(),
                })
            })
            .collect()
    }

    pub fn survivors(&self) -> Vec<Located> {
        self.collect(Status::Survivor)
    }

    pub fn unresolved(&self) -> Vec<Located> {
        self.collect(Status::Unresolved)
    }

    pub fn outcome(&self, line: u8, q: u64) -> Option<&CaseOutcome> {
        self.outcomes.iter().find(|o| o.case.line == line && o.case.q.q() == q)
    }
}

/// Scans every applicable line (or just `line`) for `p <= p_max`, `a <= a_max`.
///
/// Cases run in parallel; the result is sorted, so serial and parallel runs
/// agree exactly.
pub fn scan(p_max: u64, a_max: u32, line: Option<u8>) -> Result<ScanReport, CatalogError> {
    let cases: Vec<SubgroupCase> = prime_powers_in_box(p_max, a_max)
        .iter()
        .flat_map(cases_for)
        .filter(|c| line.is_none_or(|l| c.line == l))
        .collect();
    let mut outcomes = cases
        .par_iter()
        .map(scan_case)
        .collect::<Result<Vec<_>, _>>()?;
    outcomes.sort_by_key(CaseOutcome::sort_key);
    Ok(ScanReport { p_max, a_max, line_filter: line, outcomes })
}

pub fn scan_all(p_max: u64, a_max: u32) -> Result<ScanReport, CatalogError> {
    scan(p_max, a_max, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn triples(f: &Feasibility) -> Vec<(u64, u64, u64)> {
        f.candidates.iter().map(|(p, _)| p.as_u64().unwrap()).collect()
    }

    #[test]
    fn line_one_at_two() {
        let f = feasible_candidates(&big(45), &big(1152), &[big(64)], 2, true);
        assert_eq!(triples(&f), vec![(45, 12, 3)]);
        let t = &f.candidates[0].1;
        assert_eq!(t.subdegree[0].applied, big(4));
        assert_eq!(t.subdegree[0].multiplier, big(1));
        assert_eq!(t.square_root, big(23));
    }

    #[test]
    fn line_eight_at_two() {
        let f = feasible_candidates(&big(36), &big(1440), &[], 2, false);
        assert_eq!(triples(&f), vec![(36, 15, 6)]);
        assert_eq!(f.candidates[0].1.tits_gcd, Some(big(1)));
    }

    #[test]
    fn line_two_at_two_is_empty() {
        let f = feasible_candidates(&big(27), &big(1920), &[big(64)], 2, true);
        assert!(f.candidates.is_empty());
        // Every divisor of 1920 is accounted for.
        assert_eq!(f.rejections.len(), 32);
    }

    #[test]
    fn line_three_at_two() {
        let f = feasible_candidates(&big(40), &big(1296), &[big(27)], 2, false);
        assert_eq!(triples(&f), vec![(40, 27, 18)]);
    }

    #[test]
    fn tits_failure_eliminates_whole_case() {
        // v-1 = 44 is even and p = 2 on a non-parabolic line.
        let f = feasible_candidates(&big(45), &big(1152), &[], 2, false);
        assert!(f.tits_failed);
        assert!(f.candidates.is_empty());
        assert!(f.rejections.iter().all(|r| r.reason == Reason::TitsFail));
    }

    #[test]
    fn subdegree_rejection_is_traced() {
        // Without the subdegree constraint line 1 at q=2 would admit nothing
        // else, so use a made-up D that kills (45,12,3).
        let f = feasible_candidates(&big(45), &big(1152), &[big(5)], 2, false);
        assert!(f.tits_failed);
        let f = feasible_candidates(&big(45), &big(1152), &[big(5)], 3, false);
        assert!(f.candidates.is_empty());
        assert!(f
            .rejections
            .iter()
            .any(|r| r.k == big(12) && r.reason == Reason::SubdegFail));
    }

    #[test]
    fn design_params_invariants() {
        assert!(DesignParams::from_u64(36, 15, 6).is_ok());
        assert_eq!(DesignParams::from_u64(36, 15, 7), Err(ParamError::Fisher));
        assert_eq!(DesignParams::from_u64(5, 4, 3), Err(ParamError::Trivial));
        assert_eq!(DesignParams::from_u64(7, 2, 0), Err(ParamError::Trivial));
        let c = DesignParams::from_u64(40, 13, 4).unwrap().complement();
        assert_eq!(c.as_u64(), Some((40, 27, 18)));
    }

    #[test]
    fn cube_prefilter_examples() {
        let pp = |q| PrimePower::from_value(q).unwrap();
        assert!(cube_prefilter(&SubgroupCase::new(11, pp(7), None).unwrap()).unwrap());
        assert!(!cube_prefilter(&SubgroupCase::new(16, pp(17), None).unwrap()).unwrap());
        assert!(cube_prefilter(&SubgroupCase::new(12, pp(3), None).unwrap()).unwrap());
    }

    #[test]
    fn scan_case_examples() {
        let pp = |q| PrimePower::from_value(q).unwrap();
        let o = scan_case(&SubgroupCase::new(6, pp(4), None).unwrap()).unwrap();
        assert_eq!(o.status, Status::Unresolved);
        assert_eq!(o.candidates[0].params.as_u64(), Some((41600, 2448, 144)));
        assert!(o.candidates[0].trace.note.is_some());

        let o = scan_case(&SubgroupCase::new(8, pp(2), None).unwrap()).unwrap();
        assert_eq!(o.status, Status::Survivor);
        assert_eq!(o.candidates[0].params.as_u64(), Some((36, 15, 6)));

        let o = scan_case(&SubgroupCase::new(4, pp(5), None).unwrap()).unwrap();
        assert_eq!(o.status, Status::Eliminated);
        assert_eq!(o.reason, Some(Reason::NoKDivisor));
        assert_eq!(o.v, big(5687500));
        assert_eq!(o.k_bound, big(10368));
    }
}
