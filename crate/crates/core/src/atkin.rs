//! The l-isogenous curve over F_p from `U_l` alone, using first and second
//! partial derivatives of `U(kappa, E4, E6)` at a root.

use crate::arith::{addmod, from_i64, invmod, mulmod, negmod, powmod, submod};
use crate::poly::{poly3_derivative, poly3_eval, Poly3, TriPoly};
use crate::ring::PrimeField;
use crate::volcano::roots_mod_p;
use crate::Error;

/// Small helper for F_p arithmetic with readable call sites.
#[derive(Clone, Copy, Debug)]
struct Fp(u64);

impl Fp {
    fn c(&self, v: i64) -> u64 {
        from_i64(v, self.0)
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        addmod(a, b, self.0)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        submod(a, b, self.0)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.0)
    }
    fn neg(&self, a: u64) -> u64 {
        negmod(a, self.0)
    }
    fn sum(&self, xs: &[u64]) -> u64 {
        xs.iter().fold(0, |s, &x| self.add(s, x))
    }
    fn prod(&self, xs: &[u64]) -> u64 {
        xs.iter().fold(1 % self.0, |s, &x| self.mul(s, x))
    }
    fn inv(&self, a: u64) -> Result<u64, Error> {
        invmod(a % self.0, self.0).ok_or(Error::NotInvertible(a))
    }
    fn ell_pow(&self, ell: u64, e: u32) -> u64 {
        self.prod(&vec![ell % self.0; e as usize])
    }
}

/// Values of U and its partials at a point `(kappa, E4, E6)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PartialSet {
    pub u: u64,
    pub dk: u64,
    pub d4: u64,
    pub d6: u64,
    pub dkk: u64,
    pub dk4: u64,
    pub dk6: u64,
    pub d44: u64,
    pub d46: u64,
    pub d66: u64,
}

/// `U` with Delta eliminated and its derivatives, reduced mod p once.
#[derive(Clone, Debug)]
pub struct UPartials {
    pub p: u64,
    pub ell: u64,
    polys: [Poly3<u64>; 10],
}

impl UPartials {
    pub fn new(u: &TriPoly, p: u64) -> Result<UPartials, Error> {
        if p < 5 || 1728 % p == 0 {
            return Err(Error::NotInvertible(1728));
        }
        if p <= u.ell + 1 {
            return Err(Error::Input(format!("prime {p} too small for l = {}", u.ell)));
        }
        let f = PrimeField::new(p);
        let base = u.reduce_mod(p).substitute_delta(&f)?;
        let d = |q: &Poly3<u64>, v: usize| poly3_derivative(&f, q, v);
        let dk = d(&base, 0);
        let d4 = d(&base, 1);
        let d6 = d(&base, 2);
        let polys = [
            base.clone(),
            dk.clone(),
            d4.clone(),
            d6.clone(),
            d(&dk, 0),
            d(&dk, 1),
            d(&dk, 2),
            d(&d4, 1),
            d(&d4, 2),
            d(&d6, 2),
        ];
        Ok(UPartials { p, ell: u.ell, polys })
    }

    pub fn at(&self, kappa: u64, e4: u64, e6: u64) -> PartialSet {
        let f = PrimeField::new(self.p);
        let x = [kappa % self.p, e4 % self.p, e6 % self.p];
        let v: Vec<u64> = self.polys.iter().map(|q| poly3_eval(&f, q, &x)).collect();
        PartialSet { u: v[0], dk: v[1], d4: v[2], d6: v[3], dkk: v[4], dk4: v[5], dk6: v[6], d44: v[7], d46: v[8], d66: v[9] }
    }

    /// `U(X, E4, E6)` as a polynomial in X, constant term first.
    pub fn univariate(&self, e4: u64, e6: u64) -> Vec<u64> {
        let f = Fp(self.p);
        let mut out = Vec::new();
        for (k, c) in &self.polys[0] {
            let r = k[0] as usize;
            if out.len() <= r {
                out.resize(r + 1, 0);
            }
            let t = f.mul(*c, f.mul(powmod(e4, k[1] as u64, self.p), powmod(e6, k[2] as u64, self.p)));
            out[r] = f.add(out[r], t);
        }
        out
    }
}

pub fn partials_at(u: &TriPoly, kappa: u64, e4: u64, e6: u64, p: u64) -> Result<PartialSet, Error> {
    Ok(UPartials::new(u, p)?.at(kappa, e4, e6))
}

/// Residuals of the four homogeneity relations at a point; all zero for a
/// weighted-homogeneous U.
pub fn euler_residuals(ell: u64, kappa: u64, e4: u64, e6: u64, ps: &PartialSet, p: u64) -> [u64; 4] {
    let f = Fp(p);
    let lin = |a: u64, b: u64, c: u64| f.sum(&[f.mul(kappa, a), f.mul(f.c(2), f.mul(e4, b)), f.mul(f.c(3), f.mul(e6, c))]);
    let l = ell % p;
    [
        f.sub(f.mul(f.add(l, 1), ps.u), lin(ps.dk, ps.d4, ps.d6)),
        f.sub(f.mul(l, ps.dk), lin(ps.dkk, ps.dk4, ps.dk6)),
        f.sub(f.mul(f.sub(l, 1), ps.d4), lin(ps.dk4, ps.d44, ps.d46)),
        f.sub(f.mul(f.sub(l, 2 % p), ps.d6), lin(ps.dk6, ps.d46, ps.d66)),
    ]
}

fn check_dk(ps: &PartialSet, kappa: u64) -> Result<(), Error> {
    if ps.dk == 0 {
        return Err(Error::Degenerate(format!("d/dkappa U vanishes at kappa = {kappa}")));
    }
    Ok(())
}

/// `E4(q^l)` at the isogenous curve.
pub fn e4_tilde(ell: u64, kappa: u64, e4: u64, e6: u64, ps: &PartialSet, p: u64) -> Result<u64, Error> {
    check_dk(ps, kappa)?;
    let f = Fp(p);
    let l = ell % p;
    let inner = f.add(f.mul(f.c(3), f.prod(&[e4, e4, ps.d6])), f.mul(f.c(2), f.mul(e6, ps.d4)));
    let num = f.sub(f.prod(&[f.c(4), l, inner]), f.mul(ps.dk, f.add(f.prod(&[l, l, e4]), f.prod(&[f.c(4), kappa, kappa]))));
    let den = f.mul(f.ell_pow(ell, 4), ps.dk);
    Ok(f.neg(f.mul(num, f.inv(den)?)))
}

/// Coefficients `[n0, n1, n2, n3]` of `N = sum n_i l^i`.
pub fn n_coefficients(kappa: u64, e4: u64, e6: u64, ps: &PartialSet, p: u64) -> [u64; 4] {
    let f = Fp(p);
    let (dk, d4, d6) = (ps.dk, ps.d4, ps.d6);
    let dk2 = f.mul(dk, dk);
    let dk3 = f.mul(dk2, dk);
    let e4_2 = f.mul(e4, e4);
    let e4_4 = f.mul(e4_2, e4_2);
    let t4 = f.sum(&[f.prod(&[d6, d6, ps.dkk]), f.neg(f.prod(&[f.c(2), d6, dk, ps.dk6])), f.mul(ps.d66, dk2)]);
    let t2 = f.sum(&[
        f.prod(&[f.c(24), e6, d4, f.sub(f.mul(d6, ps.dkk), f.mul(dk, ps.dk6))]),
        f.prod(&[f.c(24), e6, dk, f.sub(f.mul(ps.d46, dk), f.mul(d6, ps.dk4))]),
        f.prod(&[f.c(10), d4, dk2]),
    ]);
    let t1 = f.prod(&[f.c(3), dk2, f.sub(f.prod(&[f.c(7), e6, d6]), f.mul(kappa, dk))]);
    let t0 = f.prod(&[f.c(8), e6, e6, f.sum(&[f.prod(&[d4, d4, ps.dkk]), f.neg(f.prod(&[f.c(2), d4, dk, ps.dk4])), f.mul(ps.d44, dk2)])]);
    let c2 = f.sum(&[f.prod(&[f.c(18), t4, e4_4]), f.mul(t2, e4_2), f.mul(t1, e4), t0]);
    let inner = f.add(f.mul(f.c(3), f.prod(&[e4_2, d6])), f.mul(f.c(2), f.mul(e6, d4)));
    [
        f.neg(f.prod(&[f.c(8), dk3, kappa, kappa, kappa])),
        f.prod(&[f.c(12), dk2, kappa, inner]),
        c2,
        f.neg(f.mul(e6, dk3)),
    ]
}

/// `E6(q^l)` at the isogenous curve.
pub fn e6_tilde(ell: u64, kappa: u64, e4: u64, e6: u64, ps: &PartialSet, p: u64) -> Result<u64, Error> {
    check_dk(ps, kappa)?;
    let f = Fp(p);
    let n = n_coefficients(kappa, e4, e6, ps, p);
    let l = ell % p;
    let nv = n.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, l), c));
    let den = f.mul(f.ell_pow(ell, 6), f.prod(&[ps.dk, ps.dk, ps.dk]));
    Ok(f.neg(f.mul(nv, f.inv(den)?)))
}

/// Derivatives under `q d/dq` of `(E2, E4, E6)` in terms of the values.
fn ramanujan(f: Fp, e2: u64, e4: u64, e6: u64) -> (u64, u64, u64) {
    let i12 = f.inv(12).unwrap();
    let i3 = f.inv(3).unwrap();
    let i2 = f.inv(2).unwrap();
    (
        f.mul(f.sub(f.mul(e2, e2), e4), i12),
        f.mul(f.sub(f.mul(e2, e4), e6), i3),
        f.mul(f.sub(f.mul(e2, e6), f.mul(e4, e4)), i2),
    )
}

fn second_e2(f: Fp, e2: u64, e4: u64, e6: u64) -> u64 {
    let (d2, d4, _) = ramanujan(f, e2, e4, e6);
    f.mul(f.sub(f.mul(f.c(2), f.mul(e2, d2)), d4), f.inv(12).unwrap())
}

/// First differentiated relation `kappa' dU/dkappa + E4' dU/dE4 + E6' dU/dE6`
/// as a quadratic in the free value E2, given a candidate `E4(q^l)`.
/// Returns `[C0, C1, C2]`.
pub fn e2_quadratic(ell: u64, kappa: u64, e4: u64, e6: u64, e4t: u64, ps: &PartialSet, p: u64) -> Result<[u64; 3], Error> {
    let f = Fp(p);
    let rel = |e2: u64| -> Result<u64, Error> {
        let k1 = kappa_first(f, ell, kappa, e2, e4, e6, e4t)?;
        let (_, d4, d6) = ramanujan(f, e2, e4, e6);
        Ok(f.sum(&[f.mul(k1, ps.dk), f.mul(d4, ps.d4), f.mul(d6, ps.d6)]))
    };
    let (y0, y1, y2) = (rel(0)?, rel(1)?, rel(2)?);
    let i2 = f.inv(2)?;
    let c2 = f.mul(f.add(f.sub(y2, f.mul(f.c(2), y1)), y0), i2);
    let c1 = f.sub(f.sub(y1, y0), c2);
    Ok([y0, c1, c2])
}

fn e2_tilde(f: Fp, ell: u64, kappa: u64, e2: u64) -> Result<u64, Error> {
    let l = ell % f.0;
    let il = f.inv(l)?;
    Ok(f.mul(f.add(f.prod(&[f.c(2), kappa, il]), e2), il))
}

fn kappa_first(f: Fp, ell: u64, kappa: u64, e2: u64, e4: u64, e6: u64, e4t: u64) -> Result<u64, Error> {
    let l = ell % f.0;
    let et2 = e2_tilde(f, ell, kappa, e2)?;
    let (d2, _, _) = ramanujan(f, e2, e4, e6);
    let (dt2, _, _) = ramanujan(f, et2, e4t, 0);
    Ok(f.prod(&[l, f.inv(2)?, f.sub(f.prod(&[l, l, dt2]), d2)]))
}

/// `E6(q^l)` re-derived by differentiating `U(kappa, E4, E6) = 0` twice and
/// solving the resulting linear relation, for a chosen value of E2.
pub fn e6_tilde_by_construction(ell: u64, kappa: u64, e4: u64, e6: u64, e2: u64, ps: &PartialSet, p: u64) -> Result<u64, Error> {
    let f = Fp(p);
    let e4t = e4_tilde(ell, kappa, e4, e6, ps, p)?;
    let l = ell % p;
    let eval = |e6t: u64| -> Result<u64, Error> {
        let et2 = e2_tilde(f, ell, kappa, e2)?;
        let k1 = kappa_first(f, ell, kappa, e2, e4, e6, e4t)?;
        let (d2, d4, d6) = ramanujan(f, e2, e4, e6);
        let dd2 = second_e2(f, e2, e4, e6);
        let ddt2 = second_e2(f, et2, e4t, e6t);
        let k2 = f.prod(&[l, f.inv(2)?, f.sub(f.prod(&[l, l, l, ddt2]), dd2)]);
        let dd4 = f.mul(f.sub(f.add(f.mul(d2, e4), f.mul(e2, d4)), d6), f.inv(3)?);
        let dd6 = f.mul(f.sub(f.add(f.mul(d2, e6), f.mul(e2, d6)), f.prod(&[f.c(2), e4, d4])), f.inv(2)?);
        Ok(f.sum(&[
            f.mul(k2, ps.dk),
            f.mul(k1, f.sum(&[f.mul(k1, ps.dkk), f.mul(d4, ps.dk4), f.mul(d6, ps.dk6)])),
            f.mul(dd4, ps.d4),
            f.mul(d4, f.sum(&[f.mul(k1, ps.dk4), f.mul(d4, ps.d44), f.mul(d6, ps.d46)])),
            f.mul(dd6, ps.d6),
            f.mul(d6, f.sum(&[f.mul(k1, ps.dk6), f.mul(d4, ps.d46), f.mul(d6, ps.d66)])),
        ]))
    };
    let r0 = eval(0)?;
    let slope = f.sub(eval(1)?, r0);
    if slope == 0 {
        return Err(Error::Degenerate("second relation independent of E6(q^l)".into()));
    }
    Ok(f.neg(f.mul(r0, f.inv(slope)?)))
}

/// One isogenous curve found from a root of U.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsogenousCurve {
    pub kappa: u64,
    pub a_star: u64,
    pub b_star: u64,
    /// sum of the `(l-1)/2` kernel abscissas; equals `kappa`
    pub kappa1: u64,
}

pub fn isogenous_at_root(up: &UPartials, kappa: u64, e4: u64, e6: u64) -> Result<IsogenousCurve, Error> {
    let (p, ell) = (up.p, up.ell);
    let f = Fp(p);
    let ps = up.at(kappa, e4, e6);
    let e4t = e4_tilde(ell, kappa, e4, e6, &ps, p)?;
    let e6t = e6_tilde(ell, kappa, e4, e6, &ps, p)?;
    Ok(IsogenousCurve {
        kappa,
        a_star: f.neg(f.prod(&[f.c(3), f.ell_pow(ell, 4), e4t])),
        b_star: f.neg(f.prod(&[f.c(2), f.ell_pow(ell, 6), e6t])),
        kappa1: kappa,
    })
}

/// Every F_p-root of `U_l(X, -A/3, -B/2)` with its isogenous curve; roots
/// where `dU/dkappa` vanishes carry an error.
pub fn isogenous_from_u(ell: u64, a: u64, b: u64, u: &TriPoly, p: u64) -> Result<Vec<(u64, Result<IsogenousCurve, Error>)>, Error> {
    let f = Fp(p);
    let a = a % p;
    let b = b % p;
    let disc = f.add(f.prod(&[f.c(4), a, a, a]), f.prod(&[f.c(27), b, b]));
    if disc == 0 {
        return Err(Error::Input(format!("singular curve [{a}, {b}] mod {p}")));
    }
    if a == 0 || b == 0 {
        return Err(Error::Input("j = 0 or 1728 is not supported".into()));
    }
    if u.ell != ell {
        return Err(Error::Input(format!("polynomial has l = {}, expected {ell}", u.ell)));
    }
    let up = UPartials::new(u, p)?;
    let e4 = f.mul(f.neg(a), f.inv(3)?);
    let e6 = f.mul(f.neg(b), f.inv(2)?);
    let roots = roots_mod_p(&up.univariate(e4, e6), p, 0);
    Ok(roots.into_iter().map(|k| (k, isogenous_at_root(&up, k, e4, e6))).collect())
}
