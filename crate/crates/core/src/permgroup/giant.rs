//! Recognition of the alternating group on all points but one.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::{Perm, Sign};
use crate::permgroup::blocks::{primitivity, Primitivity};
use crate::permgroup::bsgs::{factorial, schreier_sims, SchreierSimsConfig};
use crate::permgroup::orbits::{check_degrees, orbits, restrict};
use crate::permgroup::random::ProductReplacement;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertifyMethod {
    /// Exact chain order when the degree is within the chain limit,
    /// otherwise the Jordan test.
    Auto,
    Bsgs,
    Jordan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyConfig {
    pub method: CertifyMethod,
    pub chain: SchreierSimsConfig,
    /// Random elements tried when looking for a prime cycle.
    pub jordan_attempts: usize,
    pub seed: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            method: CertifyMethod::Bsgs,
            chain: SchreierSimsConfig::default(),
            jordan_attempts: 2000,
            seed: 0x6a6f7264616e,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Alternating,
    NotAlternating,
    /// The Jordan test found no usable prime cycle within its attempts.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AltCertificate {
    pub verdict: Verdict,
    /// `"bsgs-exact"` or `"jordan"`.
    pub method: &'static str,
    /// Exact group order, when a chain was built.
    pub order: Option<BigUint>,
    pub detail: String,
}

impl AltCertificate {
    pub fn is_alternating(&self) -> bool {
        self.verdict == Verdict::Alternating
    }
}

/// Decides whether `gens` generate the full alternating group on
/// `0..degree` minus `fixed`. Every generator must fix `fixed` and be even.
pub fn certify_alternating(
    degree: usize,
    gens: &[Perm],
    fixed: u32,
    config: &CertifyConfig,
) -> Result<AltCertificate> {
    check_degrees(degree, gens)?;
    if fixed as usize >= degree {
        return Err(Error::IndexOutOfRange {
            index: u64::from(fixed),
            order: degree as u64,
        });
    }
    for (index, g) in gens.iter().enumerate() {
        if g.image(fixed) != fixed {
            return Err(Error::GeneratorMovesPoint {
                index,
                point: fixed,
            });
        }
        if g.sign() == Sign::Odd {
            return Err(Error::OddGenerator { index });
        }
    }
    let use_chain = match config.method {
        CertifyMethod::Bsgs => true,
        CertifyMethod::Jordan => false,
        CertifyMethod::Auto => degree <= config.chain.max_degree,
    };
    if use_chain {
        by_chain(degree, gens, config)
    } else {
        Ok(by_jordan(degree, gens, fixed, config))
    }
}

fn by_chain(degree: usize, gens: &[Perm], config: &CertifyConfig) -> Result<AltCertificate> {
    let chain = schreier_sims(degree, gens, &config.chain)?;
    let order = chain.order();
    let target = factorial(degree - 1) / 2u32;
    let verdict = if order == target {
        Verdict::Alternating
    } else {
        Verdict::NotAlternating
    };
    Ok(AltCertificate {
        verdict,
        method: "bsgs-exact",
        detail: format!(
            "base length {}, chain verified by {}",
            chain.base().len(),
            chain.verification().as_str()
        ),
        order: Some(order),
    })
}

fn by_jordan(degree: usize, gens: &[Perm], fixed: u32, config: &CertifyConfig) -> AltCertificate {
    let finish = |verdict, detail: String| AltCertificate {
        verdict,
        method: "jordan",
        order: None,
        detail,
    };
    let points: Vec<u32> = (0..degree as u32).filter(|&p| p != fixed).collect();
    let d = points.len();
    let local = restrict(gens, &points).expect("generators fix the removed point");
    let transitive = orbits(d, &local)
        .map(|o| o.is_transitive())
        .unwrap_or(false);
    if !transitive {
        return finish(
            Verdict::NotAlternating,
            "not transitive on the remaining points".into(),
        );
    }
    match primitivity(d, &local) {
        Ok(Primitivity::Primitive) => {}
        Ok(Primitivity::Imprimitive { system, .. }) => {
            return finish(
                Verdict::NotAlternating,
                format!("imprimitive: blocks of size {}", system.block_size()),
            );
        }
        Err(e) => return finish(Verdict::NotAlternating, e.to_string()),
    }
    let mut random = ProductReplacement::new(d, &local, config.seed);
    for attempt in 1..=config.jordan_attempts {
        let g = random.next_element();
        if let Some(p) = isolated_prime_cycle(&g, d) {
            return finish(
                Verdict::Alternating,
                format!(
                    "transitive and primitive on {d} points; element {attempt} powers to a {p}-cycle"
                ),
            );
        }
    }
    finish(
        Verdict::Inconclusive,
        format!(
            "no prime cycle found in {} random elements",
            config.jordan_attempts
        ),
    )
}

/// Finds a prime `p ≤ d − 3` such that `g` has exactly one cycle of length
/// `p` and no other cycle length divisible by `p`, and checks that the
/// corresponding power of `g` is a `p`-cycle.
fn isolated_prime_cycle(g: &Perm, d: usize) -> Option<u32> {
    let cycles = g.cycles();
    for (idx, c) in cycles.iter().enumerate() {
        let p = c.len();
        if p < 2 || p + 3 > d || !is_prime(p) {
            continue;
        }
        let others = cycles.iter().enumerate().filter(|&(j, _)| j != idx);
        if others.clone().any(|(_, o)| o.len() % p == 0) {
            continue;
        }
        let exponent = others.fold(BigUint::from(1u32), |acc, (_, o)| {
            acc.lcm(&BigUint::from(o.len()))
        });
        let shift = (exponent % p).to_usize().unwrap_or(0);
        let mut images: Vec<u32> = (0..d as u32).collect();
        for (pos, &q) in c.iter().enumerate() {
            images[q as usize] = c[(pos + shift) % p];
        }
        let power = Perm::from_images(images).ok()?;
        // Same map as g^exponent: every other cycle length divides it.
        let lengths = power.cycle_lengths();
        let moved: Vec<_> = lengths.iter().filter(|&&l| l > 1).collect();
        if moved == [&p] && !BigUint::from(shift).is_zero() {
            return Some(p as u32);
        }
    }
    None
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, pts: &[u32]) -> Perm {
        Perm::from_cycles(n, &[pts]).unwrap()
    }

    fn alt_gens(n: usize) -> Vec<Perm> {
        // Fix point 0; A_{n-1} on 1..n for odd n-1.
        let long: Vec<u32> = (1..n as u32).collect();
        vec![cycle(n, &[1, 2, 3]), cycle(n, &long)]
    }

    #[test]
    fn both_methods_recognize_alternating() {
        let gens = alt_gens(14);
        for method in [CertifyMethod::Bsgs, CertifyMethod::Jordan] {
            let config = CertifyConfig {
                method,
                ..Default::default()
            };
            let cert = certify_alternating(14, &gens, 0, &config).unwrap();
            assert!(cert.is_alternating(), "{method:?}: {}", cert.detail);
        }
    }

    #[test]
    fn cyclic_group_is_not_alternating() {
        // A 9-cycle on 1..10 is even and has blocks of size 3.
        let long: Vec<u32> = (1..10).collect();
        let gens = vec![cycle(10, &long)];
        for method in [CertifyMethod::Bsgs, CertifyMethod::Jordan] {
            let config = CertifyConfig {
                method,
                ..Default::default()
            };
            let cert = certify_alternating(10, &gens, 0, &config).unwrap();
            assert_eq!(cert.verdict, Verdict::NotAlternating, "{method:?}");
        }
    }

    #[test]
    fn prime_cycle_is_inconclusive_for_jordan() {
        // Primitive, but no element has a short prime cycle.
        let long: Vec<u32> = (1..12).collect();
        let gens = vec![cycle(12, &long)];
        let jordan = CertifyConfig {
            method: CertifyMethod::Jordan,
            jordan_attempts: 50,
            ..Default::default()
        };
        let cert = certify_alternating(12, &gens, 0, &jordan).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        let exact = certify_alternating(12, &gens, 0, &CertifyConfig::default()).unwrap();
        assert_eq!(exact.verdict, Verdict::NotAlternating);
        assert_eq!(exact.order, Some(BigUint::from(11u32)));
    }

    #[test]
    fn preconditions() {
        let config = CertifyConfig::default();
        let g = cycle(6, &[0, 1, 2]);
        assert_eq!(
            certify_alternating(6, &[g], 0, &config),
            Err(Error::GeneratorMovesPoint { index: 0, point: 0 })
        );
        let odd = cycle(6, &[1, 2]);
        assert_eq!(
            certify_alternating(6, &[odd], 0, &config),
            Err(Error::OddGenerator { index: 0 })
        );
    }

    #[test]
    fn primes() {
        let small: Vec<usize> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
