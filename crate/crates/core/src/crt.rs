//! Chinese remaindering into the symmetric range.

use crate::arith;
use crate::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Largest prime used by the multi-modular drivers.
pub const PRIME_START: u64 = 1 << 62;

/// Combine residues modulo pairwise distinct primes; the result lies in
/// `(-M/2, M/2]` for `M` the product of the primes.
pub fn crt_combine(residues: &[(u64, u64)]) -> Result<BigInt, Error> {
    let mut acc = CrtAccumulator::<()>::new();
    for &(v, p) in residues {
        let mut m = BTreeMap::new();
        m.insert((), v);
        acc.add(p, &m)?;
    }
    Ok(acc.lift().remove(&()).unwrap_or_default())
}

fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let half: BigInt = m >> 1;
    if x > &half {
        x - m
    } else {
        x.clone()
    }
}

/// Incremental Garner reconstruction of many integers at once; a key absent
/// from a prime's map is read as residue 0.
#[derive(Clone, Debug)]
pub struct CrtAccumulator<K: Ord + Clone> {
    pub modulus: BigInt,
    pub primes: Vec<u64>,
    values: BTreeMap<K, BigInt>,
}

impl<K: Ord + Clone> Default for CrtAccumulator<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> CrtAccumulator<K> {
    pub fn new() -> Self {
        CrtAccumulator { modulus: BigInt::one(), primes: Vec::new(), values: BTreeMap::new() }
    }

    pub fn add(&mut self, p: u64, residues: &BTreeMap<K, u64>) -> Result<(), Error> {
        if self.primes.contains(&p) {
            return Err(Error::Input(format!("prime {p} used twice")));
        }
        let pb = BigInt::from(p);
        let m_mod_p = self.modulus.mod_floor(&pb).to_u64().unwrap();
        let inv = arith::invmod(m_mod_p, p).ok_or(Error::NotInvertible(p))?;
        let mut keys: Vec<K> = self.values.keys().cloned().collect();
        for k in residues.keys() {
            if !self.values.contains_key(k) {
                keys.push(k.clone());
            }
        }
        for k in keys {
            let x = self.values.get(&k).cloned().unwrap_or_default();
            let r = residues.get(&k).copied().unwrap_or(0) % p;
            let xm = x.mod_floor(&pb).to_u64().unwrap();
            let t = arith::mulmod(arith::submod(r, xm, p), inv, p);
            let nx = x + &self.modulus * BigInt::from(t);
            if nx.is_zero() {
                self.values.remove(&k);
            } else {
                self.values.insert(k, nx);
            }
        }
        self.modulus *= pb;
        self.primes.push(p);
        Ok(())
    }

    /// Current symmetric-range values, zeros dropped.
    pub fn lift(&self) -> BTreeMap<K, BigInt> {
        self.values
            .iter()
            .map(|(k, v)| (k.clone(), symmetric(v, &self.modulus)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// True when the lifted values reduce to `residues` modulo `p`.
    pub fn agrees_with(&self, p: u64, residues: &BTreeMap<K, u64>) -> bool {
        let pb = BigInt::from(p);
        let lifted = self.lift();
        for (k, v) in &lifted {
            let r = v.mod_floor(&pb).to_u64().unwrap();
            if residues.get(k).copied().unwrap_or(0) != r {
                return false;
            }
        }
        residues.iter().all(|(k, &r)| r == 0 || lifted.contains_key(k))
    }

    /// Natural log of the modulus.
    pub fn log_modulus(&self) -> f64 {
        crate::poly::bigint_ln(&self.modulus)
    }
}

/// Result of a multi-modular reconstruction.
#[derive(Clone, Debug)]
pub struct Reconstruction<K: Ord + Clone> {
    pub values: BTreeMap<K, BigInt>,
    pub primes: Vec<u64>,
}

/// Number of word primes near `PRIME_START` whose product exceeds
/// `e^(nats)` twice over, plus one.
pub fn primes_for_height(nats: f64) -> usize {
    let per = (PRIME_START as f64).ln() - 0.1;
    ((nats + std::f64::consts::LN_2) / per).ceil().max(1.0) as usize + 1
}

/// Run `job` modulo word primes descending from `PRIME_START` (skipping
/// those rejected by `accept`), in parallel batches, starting with
/// `initial` primes and adding more until one extra prime agrees with the
/// lift.
pub fn reconstruct_stable<K, F>(initial: usize, accept: impl Fn(u64) -> bool, job: F) -> Result<Reconstruction<K>, Error>
where
    K: Ord + Clone + Send,
    F: Fn(u64) -> Result<BTreeMap<K, u64>, Error> + Sync,
{
    let mut acc = CrtAccumulator::<K>::new();
    let mut next = PRIME_START;
    let mut batch = initial.max(1) + 1;
    loop {
        let mut primes = Vec::with_capacity(batch);
        while primes.len() < batch {
            next = arith::prev_prime(next);
            if accept(next) {
                primes.push(next);
            }
        }
        let results: Vec<Result<BTreeMap<K, u64>, Error>> = primes.par_iter().map(|&p| job(p)).collect();
        for (p, r) in primes.into_iter().zip(results) {
            let r = r?;
            if acc.primes.len() >= initial && acc.agrees_with(p, &r) {
                let primes = acc.primes.clone();
                return Ok(Reconstruction { values: acc.lift(), primes });
            }
            acc.add(p, &r)?;
        }
        batch = (initial / 4).max(2);
        if acc.primes.len() > 64 * initial.max(4) {
            return Err(Error::Numerical(format!("no stable lift after {} primes", acc.primes.len())));
        }
    }
}
