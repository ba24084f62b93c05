//! Modular forms of weight 2k written in the basis
//! `P_{w,j} = E6^eps E4^{m-3j} Delta^j`.

use crate::qseries::QSeries;
use crate::ring::{Algebra, Ring};
use crate::Error;
use std::collections::BTreeMap;

/// Exponents `(i6, i4, i12)` with `2 i4 + 3 i6 + 6 i12 = k`, ordered by i12.
pub fn weight_exponents(k: u32) -> Result<Vec<(u32, u32, u32)>, Error> {
    if k <= 1 {
        return Err(Error::Input(format!("no forms of weight {}", 2 * k)));
    }
    let (eps, m) = eps_m(k);
    Ok((0..=m / 3).map(|j| (eps, m - 3 * j, j)).collect())
}

/// `(eps, m)` with `k = 2 k0 + eps` and `m = k0 - eps`.
pub fn eps_m(k: u32) -> (u32, u32) {
    let eps = k % 2;
    let k0 = k / 2;
    (eps, k0 - eps)
}

/// Index of the last basis element for weight `w`.
pub fn j_max(w: u32) -> u32 {
    let (_, m) = eps_m(w / 2);
    m / 3
}

/// Basis of the weight-`w` forms, as series or as values at a point.
#[derive(Clone, Debug)]
pub struct WeightBasis<T> {
    pub w: u32,
    pub eps: u32,
    pub m: u32,
    pub j_max: u32,
    pub entries: Vec<T>,
}

/// `P_{w,0..j_max}` from E4, E6, Delta in any structure with a product.
/// Uses about `3 j_max + 2` products.
pub fn build_basis_with<T: Clone>(w: u32, e4: &T, e6: &T, d: &T, one: T, mul: impl Fn(&T, &T) -> T) -> WeightBasis<T> {
    let (eps, m) = eps_m(w / 2);
    let jm = m / 3;
    let r0 = m - 3 * jm;
    let mut base = if eps == 1 { e6.clone() } else { one.clone() };
    for _ in 0..r0 {
        base = mul(&base, e4);
    }
    let e4_3 = if jm > 0 { Some(mul(&mul(e4, e4), e4)) } else { None };
    // q_j = base * (E4^3)^{jm - j}, walking j downward
    let mut q = vec![base; jm as usize + 1];
    for j in (0..jm as usize).rev() {
        q[j] = mul(&q[j + 1], e4_3.as_ref().unwrap());
    }
    let mut entries = Vec::with_capacity(jm as usize + 1);
    let mut dpow: Option<T> = None;
    for (j, qj) in q.into_iter().enumerate() {
        if j == 0 {
            entries.push(qj);
            continue;
        }
        dpow = Some(match dpow {
            None => d.clone(),
            Some(x) => mul(&x, d),
        });
        entries.push(mul(&qj, dpow.as_ref().unwrap()));
    }
    WeightBasis { w, eps, m, j_max: jm, entries }
}

pub fn build_basis<R: Ring>(w: u32, e4: &QSeries<R>, e6: &QSeries<R>, d: &QSeries<R>) -> Result<WeightBasis<QSeries<R>>, Error> {
    let jm = j_max(w) as usize;
    let order = e4.coeffs.len().min(e6.coeffs.len()).min(d.coeffs.len());
    if order <= jm {
        return Err(Error::Order(format!("weight {w} needs order > {jm}, have {order}")));
    }
    let one = QSeries::one(e4.ring.clone(), order);
    Ok(build_basis_with(w, e4, e6, d, one, |a, b| a.mul(b)))
}

/// Values `P_{w,j}` at one sample point, in the order of [`weight_exponents`].
pub fn point_rows<A: Algebra>(alg: &A, one: A::T, w: u32, e4: &A::T, e6: &A::T, d: &A::T) -> Vec<A::T> {
    build_basis_with(w, e4, e6, d, one, |a, b| alg.mul(a, b)).entries
}

/// Coefficients of `f` in the basis of weight `w`, by the subtraction
/// cascade; fails if the remainder is not zero.
pub fn express_form<R: Ring>(f: &QSeries<R>, basis: &WeightBasis<QSeries<R>>) -> Result<Vec<R::T>, Error> {
    let ring = &f.ring;
    let n = f.coeffs.len().min(basis.entries.first().map(|e| e.coeffs.len()).unwrap_or(0));
    if n <= basis.j_max as usize {
        return Err(Error::Order(format!("series of order {n} cannot separate {} basis forms", basis.j_max + 1)));
    }
    let mut g: Vec<R::T> = f.coeffs[..n].to_vec();
    let mut out = Vec::with_capacity(basis.entries.len());
    for (j, p) in basis.entries.iter().enumerate() {
        let c = g[j].clone();
        if !ring.is_zero(&c) {
            for (gi, pi) in g.iter_mut().zip(p.coeffs.iter()).skip(j) {
                *gi = ring.sub(gi, &ring.mul(&c, pi));
            }
        }
        out.push(c);
    }
    if g.iter().any(|x| !ring.is_zero(x)) {
        return Err(Error::Numerical(format!("form of weight {} is not in the span of its basis", basis.w)));
    }
    Ok(out)
}

/// Key of a shared-grid product `E6^eps E4^x Delta^y`.
pub type GridKey = (u32, u32, u32);

/// Products needed by all weights `2 k r`, `r = 1..psi`, each obtained
/// from an earlier grid point (or an input) by one product.
#[derive(Clone, Debug)]
pub struct SharedGrid<T> {
    pub values: BTreeMap<GridKey, T>,
    pub multiplications: usize,
}

pub fn grid_keys(psi: u32, k: u32) -> Vec<GridKey> {
    let mut keys = std::collections::BTreeSet::new();
    for r in 1..=psi {
        if k * r <= 1 {
            continue;
        }
        for (e, x, y) in weight_exponents(k * r).unwrap() {
            keys.insert((e, x, y));
        }
    }
    keys.into_iter().collect()
}

pub fn build_shared_grid<T: Clone>(psi: u32, k: u32, e4: &T, e6: &T, d: &T, one: T, mul: impl Fn(&T, &T) -> T) -> SharedGrid<T> {
    let count = std::cell::Cell::new(0usize);
    let mul = |a: &T, b: &T| {
        count.set(count.get() + 1);
        mul(a, b)
    };
    let mut keys = grid_keys(psi, k);
    keys.sort_by_key(|&(e, x, y)| (e, y, x));
    let mut values: BTreeMap<GridKey, T> = BTreeMap::new();
    let mut e4_pows: Vec<T> = vec![one.clone(), e4.clone()];
    let lookup = |values: &BTreeMap<GridKey, T>, key: GridKey| -> Option<T> {
        if key == (0, 0, 0) {
            return Some(one.clone());
        }
        values.get(&key).cloned()
    };
    for (e, x, y) in keys {
        let key = (e, x, y);
        let v = if key == (0, 1, 0) {
            e4.clone()
        } else if key == (1, 0, 0) {
            e6.clone()
        } else if key == (0, 0, 1) {
            d.clone()
        } else {
            let mut found = None;
            for s in 1..=x.min(3) {
                if let Some(p) = lookup(&values, (e, x - s, y)) {
                    while e4_pows.len() <= s as usize {
                        let nx = mul(e4_pows.last().unwrap(), e4);
                        e4_pows.push(nx);
                    }
                    found = Some(mul(&p, &e4_pows[s as usize]));
                    break;
                }
            }
            if found.is_none() && y > 0 {
                if let Some(p) = lookup(&values, (e, x, y - 1)) {
                    found = Some(mul(&p, d));
                }
            }
            if found.is_none() && e == 1 {
                if let Some(p) = lookup(&values, (0, x, y)) {
                    found = Some(mul(&p, e6));
                }
            }
            found.unwrap_or_else(|| {
                let mut v = if e == 1 { e6.clone() } else { one.clone() };
                for _ in 0..x {
                    v = mul(&v, e4);
                }
                for _ in 0..y {
                    v = mul(&v, d);
                }
                v
            })
        };
        values.insert(key, v);
    }
    SharedGrid { values, multiplications: count.get() }
}
