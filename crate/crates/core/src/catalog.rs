//! Maximal subgroups `H` of almost simple groups with socle `PSU_4(q)`,
//! reduced to their numerical shadows.
//!
//! Each of the sixteen lines records the order of the written structure at
//! the `SU` level. The order of `H0 = H ∩ X` is that number divided by
//! `d = gcd(4, q+1)`, and the point count is `|X| / |H0|`. Every quantity is
//! kept as a product of small pieces so the sieve can factor the k-bound
//! without running rho on a 100-bit number.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactmath::{factorize, gcd_u64, is_prime_u64, Factorization, PrimePower};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("line {line} at q={q}: d={d} does not divide the SU-level order")]
    CenterNotDivisible { line: u8, q: u64, d: u64 },
    #[error("line {line} at q={q}: |H0| does not divide |X|")]
    IndexNotIntegral { line: u8, q: u64 },
    #[error("line {line} does not apply at q={q}")]
    NotApplicable { line: u8, q: u64 },
    #[error("no such line: {0}")]
    UnknownLine(u8),
}

/// `q = q0^r` with `r` an odd prime, the data carried by line 7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subfield {
    pub q0: PrimePower,
    pub r: u32,
}

/// Static description of one line.
pub struct LineSpec {
    pub line: u8,
    /// Structure of the preimage of `H ∩ X` in `SU_4(q)`.
    pub label: &'static str,
    pub parabolic: bool,
    pub novelty_note: Option<&'static str>,
}

pub const LINES: [LineSpec; 16] = [
    LineSpec { line: 1, label: "E_q^{1+4}:SU_2(q):(q^2-1)", parabolic: true, novelty_note: None },
    LineSpec { line: 2, label: "E_q^4:SL_2(q^2):(q-1)", parabolic: true, novelty_note: None },
    LineSpec { line: 3, label: "GU_3(q)", parabolic: false, novelty_note: None },
    LineSpec { line: 4, label: "(q+1)^3:S_4", parabolic: false, novelty_note: Some("novelty if q=3") },
    LineSpec { line: 5, label: "SU_2(q)^2:(q+1).2", parabolic: false, novelty_note: None },
    LineSpec { line: 6, label: "SL_2(q^2).(q-1).2", parabolic: false, novelty_note: None },
    LineSpec { line: 7, label: "SU_4(q0)", parabolic: false, novelty_note: None },
    LineSpec { line: 8, label: "Sp_4(q).gcd(2,q+1)", parabolic: false, novelty_note: None },
    LineSpec { line: 9, label: "SO_4^+(q).d", parabolic: false, novelty_note: None },
    LineSpec { line: 10, label: "SO_4^-(q).d", parabolic: false, novelty_note: None },
    LineSpec { line: 11, label: "(4o2^{1+4}).S_6", parabolic: false, novelty_note: None },
    LineSpec { line: 12, label: "(4o2^{1+4}).A_6", parabolic: false, novelty_note: None },
    LineSpec { line: 13, label: "d o 2.PSL_2(7)", parabolic: false, novelty_note: Some("novelty") },
    LineSpec { line: 14, label: "d o 2.A_7", parabolic: false, novelty_note: None },
    LineSpec { line: 15, label: "4_2.PSL_3(4)", parabolic: false, novelty_note: None },
    LineSpec { line: 16, label: "d o 2.PSU_4(2)", parabolic: false, novelty_note: None },
];

pub fn line_spec(line: u8) -> Result<&'static LineSpec, CatalogError> {
    LINES
        .get(usize::from(line).wrapping_sub(1))
        .ok_or(CatalogError::UnknownLine(line))
}

/// `d = gcd(4, q+1)`.
pub fn center_order(q: &PrimePower) -> u64 {
    gcd_u64(4, q.q() + 1)
}

/// `|PSU_4(q)| = q^6 (q^2-1)(q^3+1)(q^4-1) / gcd(4, q+1)`.
pub fn socle_order(q: &PrimePower) -> BigUint {
    let qq = q.big();
    let one = BigUint::one();
    let num = qq.pow(6u32)
        * (qq.pow(2u32) - &one)
        * (qq.pow(3u32) + &one)
        * (qq.pow(4u32) - &one);
    num / center_order(q)
}

/// `|Out(PSU_4(q))| = 2a · gcd(4, q+1)`.
pub fn out_order(q: &PrimePower) -> u64 {
    2 * u64::from(q.a()) * center_order(q)
}

/// A product `∏ base^exp` with small bases.
#[derive(Debug, Clone, Default)]
struct Pieces(Vec<(BigUint, u32)>);

impl Pieces {
    fn push(mut self, base: impl Into<BigUint>, exp: u32) -> Self {
        self.0.push((base.into(), exp));
        self
    }

    fn value(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, (b, e)| acc * b.pow(*e))
    }

    fn factorization(&self) -> Factorization {
        self.0
            .iter()
            .fold(Factorization::one(), |acc, (b, e)| acc.mul(&factorize(b).pow(*e)))
    }
}

fn q_minus(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e) - 1u32
}

fn q_plus(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e) + 1u32
}

/// One applicable line at one `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubgroupCase {
    pub line: u8,
    pub q: PrimePower,
    pub subfield: Option<Subfield>,
}

impl SubgroupCase {
    /// Checks applicability before constructing. Line 7 needs `subfield`.
    pub fn new(line: u8, q: PrimePower, subfield: Option<Subfield>) -> Result<Self, CatalogError> {
        line_spec(line)?;
        let ok = if line == 7 {
            subfield.is_some_and(|s| subfield_decompositions(&q).contains(&s))
        } else {
            subfield.is_none() && applies(line, &q)
        };
        if !ok {
            return Err(CatalogError::NotApplicable { line, q: q.q() });
        }
        Ok(SubgroupCase { line, q, subfield })
    }

    pub fn spec(&self) -> &'static LineSpec {
        &LINES[usize::from(self.line) - 1]
    }

    pub fn structure_label(&self) -> String {
        match self.subfield {
            Some(s) => format!("SU_4({})", s.q0.q()),
            None => self.spec().label.to_string(),
        }
    }

    pub fn parabolic(&self) -> bool {
        self.spec().parabolic
    }

    fn su_pieces(&self) -> Pieces {
        let q = self.q.q();
        let d = center_order(&self.q);
        let p = Pieces::default();
        match self.line {
            1 => p.push(q, 6).push(q_minus(q, 2), 2),
            2 => p.push(q, 6).push(q_minus(q, 4), 1).push(q - 1, 1),
            3 => p.push(q, 3).push(q_minus(q, 2), 1).push(q_plus(q, 3), 1).push(q + 1, 1),
            4 => p.push(24u32, 1).push(q + 1, 3),
            5 => p.push(2u32, 1).push(q, 2).push(q_minus(q, 2), 2).push(q + 1, 1),
            6 => p.push(2u32, 1).push(q, 2).push(q_minus(q, 4), 1).push(q - 1, 1),
            7 => {
                let q0 = self.subfield.expect("line 7 carries q0").q0.q();
                p.push(q0, 6)
                    .push(q_minus(q0, 4), 1)
                    .push(q_plus(q0, 3), 1)
                    .push(q_minus(q0, 2), 1)
            }
            8 => p.push(gcd_u64(2, q + 1), 1).push(q, 4).push(q_minus(q, 2), 1).push(q_minus(q, 4), 1),
            9 => p.push(d, 1).push(q, 2).push(q_minus(q, 2), 2),
            10 => p.push(d, 1).push(q, 2).push(q_minus(q, 4), 1),
            // (4∘2^{1+4}) has order 64.
            11 => p.push(64u32, 1).push(720u32, 1),
            12 => p.push(64u32, 1).push(360u32, 1),
            // d∘2 has order max(d, 2).
            13 => p.push(d.max(2), 1).push(168u32, 1),
            14 => p.push(d.max(2), 1).push(2520u32, 1),
            15 => p.push(4u32, 1).push(20160u32, 1),
            16 => p.push(d.max(2), 1).push(25920u32, 1),
            _ => unreachable!("line validated on construction"),
        }
    }

    /// Order of the written structure before the centre is factored out.
    pub fn su_level_order(&self) -> BigUint {
        self.su_pieces().value()
    }

    /// `|H0| = su_level_order / d`.
    pub fn h0_order(&self) -> Result<BigUint, CatalogError> {
        let su = self.su_level_order();
        let d = center_order(&self.q);
        if !(&su % d).is_zero() {
            return Err(CatalogError::CenterNotDivisible { line: self.line, q: self.q.q(), d });
        }
        Ok(su / d)
    }

    /// `v = |X| / |H0|`.
    pub fn point_count(&self) -> Result<BigUint, CatalogError> {
        let h0 = self.h0_order()?;
        let x = socle_order(&self.q);
        if !(&x % &h0).is_zero() {
            return Err(CatalogError::IndexNotIntegral { line: self.line, q: self.q.q() });
        }
        Ok(x / h0)
    }

    /// `2a · gcd(4, q+1) · |H0|`, i.e. `|Out(X)| · |H0|`.
    pub fn k_divisor_bound(&self) -> Result<BigUint, CatalogError> {
        Ok(self.h0_order()? * out_order(&self.q))
    }

    /// Factorization of [`Self::k_divisor_bound`], assembled from the pieces.
    pub fn k_bound_factorization(&self) -> Result<Factorization, CatalogError> {
        self.h0_order()?;
        // 2a·d·(su/d) = 2a·su
        let f = self
            .su_pieces()
            .push(2u32, 1)
            .push(self.q.a(), 1)
            .factorization();
        Ok(f)
    }

    /// Known divisors `D` of some subdegree. For the parabolic lines this is
    /// `q^6`, which the sieve reduces to `gcd(q^6, v-1)`.
    pub fn subdegree_divisors(&self) -> Vec<BigUint> {
        let q = self.q.q();
        match self.line {
            1 | 2 => vec![BigUint::from(q).pow(6u32)],
            3 => vec![BigUint::from(q + 1) * q_plus(q, 3)],
            5 => vec![BigUint::from(2u32) * q_minus(q, 2).pow(2u32)],
            6 => vec![BigUint::from(2u32) * q_minus(q, 4)],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for SubgroupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} ({}) at q={}", self.line, self.structure_label(), self.q)
    }
}

fn applies(line: u8, q: &PrimePower) -> bool {
    let (p, a, qv) = (q.p(), q.a(), q.q());
    let prime_field = a == 1;
    match line {
        1..=4 | 8 => true,
        5 => qv >= 3,
        6 => qv >= 4,
        7 => !subfield_decompositions(q).is_empty(),
        9 => qv >= 5 && q.is_odd(),
        10 => q.is_odd(),
        11 => prime_field && p % 8 == 7,
        12 => prime_field && p % 8 == 3,
        13 => prime_field && matches!(p % 7, 3 | 5 | 6) && p != 3,
        14 => prime_field && matches!(p % 7, 3 | 5 | 6),
        15 => qv == 3,
        16 => prime_field && p % 6 == 5,
        _ => false,
    }
}

/// Every way to write `q = q0^r` with `r` an odd prime.
pub fn subfield_decompositions(q: &PrimePower) -> Vec<Subfield> {
    (3..=q.a())
        .filter(|r| is_prime_u64(u64::from(*r)) && q.a() % r == 0)
        .filter_map(|r| {
            PrimePower::new(q.p(), q.a() / r).map(|q0| Subfield { q0, r })
        })
        .collect()
}

/// All lines applicable at `q`, ordered by line then subfield.
pub fn cases_for(q: &PrimePower) -> Vec<SubgroupCase> {
    let mut out = Vec::new();
    for spec in &LINES {
        if spec.line == 7 {
            for s in subfield_decompositions(q) {
                out.push(SubgroupCase { line: 7, q: *q, subfield: Some(s) });
            }
        } else if applies(spec.line, q) {
            out.push(SubgroupCase { line: spec.line, q: *q, subfield: None });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::from_value(q).unwrap()
    }

    fn case(line: u8, q: u64) -> SubgroupCase {
        let q = pp(q);
        let sub = (line == 7).then(|| subfield_decompositions(&q)[0]);
        SubgroupCase::new(line, q, sub).unwrap()
    }

    fn lines(q: u64) -> Vec<u8> {
        cases_for(&pp(q)).iter().map(|c| c.line).collect()
    }

    #[test]
    fn socle_orders() {
        assert_eq!(socle_order(&pp(2)), BigUint::from(25920u32));
        assert_eq!(socle_order(&pp(3)), BigUint::from(3265920u32));
        assert_eq!(socle_order(&pp(4)), BigUint::from(1018368000u64));
    }

    #[test]
    fn out_orders() {
        assert_eq!(out_order(&pp(2)), 2);
        assert_eq!(out_order(&pp(3)), 8);
        assert_eq!(out_order(&pp(4)), 4);
    }

    #[test]
    fn applicable_lines() {
        assert_eq!(lines(2), vec![1, 2, 3, 4, 8]);
        let l3 = lines(3);
        for l in [4, 5, 12, 14, 15] {
            assert!(l3.contains(&l), "line {l} missing at q=3");
        }
        for l in [6, 9, 13] {
            assert!(!l3.contains(&l), "line {l} present at q=3");
        }
        let c8 = cases_for(&pp(8));
        let l7 = c8.iter().find(|c| c.line == 7).unwrap();
        assert_eq!(l7.subfield.unwrap().q0.q(), 2);
        assert_eq!(l7.subfield.unwrap().r, 3);
    }

    #[test]
    fn line_seven_multiple_decompositions() {
        // 2^15 = (2^5)^3 = (2^3)^5
        let q = PrimePower::new(2, 15).unwrap();
        let subs: Vec<(u64, u32)> = cases_for(&q)
            .iter()
            .filter_map(|c| c.subfield)
            .map(|s| (s.q0.q(), s.r))
            .collect();
        assert_eq!(subs, vec![(32, 3), (8, 5)]);
        assert!(subfield_decompositions(&pp(4)).is_empty());
        assert!(subfield_decompositions(&pp(9)).is_empty());
    }

    #[test]
    fn point_counts() {
        assert_eq!(case(1, 2).point_count().unwrap(), BigUint::from(45u32));
        assert_eq!(case(4, 3).point_count().unwrap(), BigUint::from(8505u32));
        assert_eq!(case(6, 4).point_count().unwrap(), BigUint::from(41600u32));
        let at_two: Vec<u64> = [1, 2, 3, 4, 8]
            .iter()
            .map(|l| u64::try_from(case(*l, 2).point_count().unwrap()).unwrap())
            .collect();
        assert_eq!(at_two, vec![45, 27, 40, 40, 36]);
    }

    #[test]
    fn k_bounds() {
        assert_eq!(case(8, 2).k_divisor_bound().unwrap(), BigUint::from(1440u32));
        assert_eq!(case(4, 3).k_divisor_bound().unwrap(), BigUint::from(3072u32));
        assert_eq!(case(4, 8).k_divisor_bound().unwrap(), BigUint::from(104976u32));
    }

    #[test]
    fn k_bound_factorization_matches_value() {
        for q in [2, 3, 4, 5, 7, 8, 9, 25, 27, 125, 169] {
            for c in cases_for(&pp(q)) {
                assert_eq!(
                    c.k_bound_factorization().unwrap().value(),
                    c.k_divisor_bound().unwrap(),
                    "{c}"
                );
            }
        }
    }

    #[test]
    fn subdegree_data() {
        assert_eq!(case(3, 2).subdegree_divisors(), vec![BigUint::from(27u32)]);
        assert_eq!(case(6, 4).subdegree_divisors(), vec![BigUint::from(510u32)]);
        assert!(case(9, 5).subdegree_divisors().is_empty());
        assert_eq!(case(1, 2).subdegree_divisors(), vec![BigUint::from(64u32)]);
    }

    #[test]
    fn line_thirteen_never_at_three() {
        assert!(SubgroupCase::new(13, pp(3), None).is_err());
        assert!(SubgroupCase::new(14, pp(3), None).is_ok());
    }

    #[test]
    fn line_six_stabilizer_order_at_four() {
        assert_eq!(case(6, 4).h0_order().unwrap(), BigUint::from(24480u32));
    }

    #[test]
    fn rejects_bad_construction() {
        assert_eq!(
            SubgroupCase::new(17, pp(2), None),
            Err(CatalogError::UnknownLine(17))
        );
        assert!(SubgroupCase::new(7, pp(8), None).is_err());
        assert!(SubgroupCase::new(5, pp(2), None).is_err());
    }
}
