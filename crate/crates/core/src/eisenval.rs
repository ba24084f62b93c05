//! Arbitrary-precision evaluation of E2, E4, E6, Delta and j on the
//! imaginary axis, through the series `T_2k` and through theta constants,
//! plus the batch evaluation at the conjugates `z zeta_l^h`.

use crate::Error;
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use std::collections::BTreeMap;

pub const RM: RoundingMode = RoundingMode::ToEven;

fn consts() -> Consts {
    Consts::new().expect("constant cache")
}

pub fn from_i64(v: i64, prec: usize) -> BigFloat {
    BigFloat::from_i64(v, prec)
}

/// Parse a decimal literal such as `1.1` exactly to the precision.
pub fn from_decimal(s: &str, prec: usize) -> Result<BigFloat, Error> {
    let x = BigFloat::parse(s, Radix::Dec, prec, RM, &mut consts());
    if x.is_nan() {
        return Err(Error::Input(format!("not a number: {s}")));
    }
    Ok(x)
}

/// Nearest f64 (lossy; for reporting and bounds only).
pub fn to_f64(x: &BigFloat) -> f64 {
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    if x.is_zero() {
        return 0.0;
    }
    let top = *words.last().unwrap() as f64;
    let v = top * 2f64.powi(e - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `log2 |x|`, finite for any nonzero value; `-inf` at zero.
pub fn log2_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    match x.as_raw_parts() {
        Some((words, _, _, e, _)) => (*words.last().unwrap() as f64).log2() - 64.0 + e as f64,
        None => f64::NAN,
    }
}

/// Exact conversion of an integral value.
pub fn to_bigint(x: &BigFloat) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::from(0));
    }
    let (words, _, sign, e, _) = x.as_raw_parts()?;
    let mut m = BigInt::from_slice(BigSign::Plus, &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<u32>>());
    let shift = e as i64 - 64 * words.len() as i64;
    if shift >= 0 {
        m <<= shift as usize;
    } else {
        let s = (-shift) as usize;
        if m.trailing_zeros().unwrap_or(0) < s as u64 {
            return None;
        }
        m >>= s;
    }
    Some(if sign == Sign::Neg { -m } else { m })
}

pub fn from_bigint(v: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = v.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_i64(0, prec);
    }
    let x = BigFloat::from_words(&digits, if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos }, 64 * digits.len() as i32);
    let mut y = x;
    let _ = y.set_precision(prec.max(64 * digits.len()), RM);
    y
}

/// Nearest integer and the distance to it.
pub fn round_nearest(x: &BigFloat, prec: usize) -> Option<(BigInt, f64)> {
    let half = BigFloat::from_f64(0.5, prec);
    let r = x.add(&half, prec.max(64), RM).floor();
    let dist = to_f64(&x.sub(&r, prec, RM).abs());
    Some((to_bigint(&r)?, dist))
}

/// Decimal text with the given number of significant digits.
pub fn format_decimal(x: &BigFloat, digits: usize) -> String {
    let prec = ((digits as f64) * std::f64::consts::LOG2_10) as usize + 16;
    let mut y = x.clone();
    let _ = y.set_precision(prec.max(64), RM);
    let text = y.format(Radix::Dec, RM, &mut consts()).unwrap_or_else(|_| "NaN".into());
    round_mantissa(&text, digits.max(1))
}

// `[-]d.ddd[e+N]` rounded half-up to `digits` significant digits.
fn round_mantissa(text: &str, digits: usize) -> String {
    let (mant, exp) = text.split_once('e').map_or((text, None), |(m, e)| (m, Some(e)));
    let (sign, body) = mant.strip_prefix('-').map_or(("", mant), |b| ("-", b));
    let mut ds: Vec<u8> = body.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    if ds.is_empty() || body.find('.') != Some(1) || ds.len() <= digits {
        return text.to_string();
    }
    let up = ds[digits] >= 5;
    ds.truncate(digits);
    let mut e: i64 = exp.and_then(|e| e.parse().ok()).unwrap_or(0);
    if up {
        let mut i = digits;
        loop {
            if i == 0 {
                ds.insert(0, 1);
                ds.pop();
                e += 1;
                break;
            }
            i -= 1;
            if ds[i] == 9 {
                ds[i] = 0;
            } else {
                ds[i] += 1;
                break;
            }
        }
    }
    let mut out = format!("{sign}{}", ds[0]);
    if ds.len() > 1 {
        out.push('.');
        out.extend(ds[1..].iter().map(|d| char::from(b'0' + d)));
    }
    if exp.is_some() {
        out.push_str(&format!("e{}{}", if e < 0 { '-' } else { '+' }, e.abs()));
    }
    out
}

/// Complex number with big-float parts.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Complex { re, im }
    }

    pub fn real(re: BigFloat, prec: usize) -> Self {
        Complex { re, im: BigFloat::from_i64(0, prec) }
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Complex::real(BigFloat::from_i64(v, prec), prec)
    }

    pub fn add(&self, o: &Complex, p: usize) -> Complex {
        Complex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    pub fn sub(&self, o: &Complex, p: usize) -> Complex {
        Complex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    pub fn mul(&self, o: &Complex, p: usize) -> Complex {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Complex { re, im }
    }

    pub fn mul_real(&self, x: &BigFloat, p: usize) -> Complex {
        Complex { re: self.re.mul(x, p, RM), im: self.im.mul(x, p, RM) }
    }

    pub fn div(&self, o: &Complex, p: usize) -> Complex {
        let n = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let conj = Complex { re: o.re.clone(), im: o.im.neg() };
        let t = self.mul(&conj, p);
        Complex { re: t.re.div(&n, p, RM), im: t.im.div(&n, p, RM) }
    }

    pub fn powi(&self, e: u32, p: usize) -> Complex {
        let mut r = Complex::from_i64(1, p);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, p);
            }
            b = b.mul(&b, p);
            e >>= 1;
        }
        r
    }

    pub fn abs_f64(&self) -> f64 {
        to_f64(&self.re).hypot(to_f64(&self.im))
    }
}

/// Working precision, the level l and the table `xi_h = zeta_l^h`.
pub struct EvalContext {
    pub prec: usize,
    pub ell: u64,
    pub xi: Vec<Complex>,
    cc: Consts,
}

impl Clone for EvalContext {
    fn clone(&self) -> Self {
        EvalContext { prec: self.prec, ell: self.ell, xi: self.xi.clone(), cc: consts() }
    }
}

impl EvalContext {
    pub fn new(prec: usize, ell: u64) -> Self {
        let mut cc = consts();
        let p = prec + 32;
        let two_pi = cc.pi(p, RM).mul(&from_i64(2, p), p, RM);
        let xi = (0..ell.max(1))
            .map(|h| {
                let a = two_pi.mul(&from_i64(h as i64, p), p, RM).div(&from_i64(ell as i64, p), p, RM);
                Complex::new(a.cos(prec, RM, &mut cc), a.sin(prec, RM, &mut cc))
            })
            .collect();
        EvalContext { prec, ell, xi, cc }
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.prec, RM)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.prec, RM, &mut self.cc)
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(self.prec, RM, &mut self.cc)
    }

    /// `exp(-2 pi rho / d)`.
    pub fn nome(&mut self, rho: &BigFloat, d: u64) -> BigFloat {
        let p = self.prec + 32;
        let a = self.cc.pi(p, RM).mul(&from_i64(-2, p), p, RM).mul(rho, p, RM).div(&from_i64(d as i64, p), p, RM);
        a.exp(self.prec, RM, &mut self.cc)
    }
}

/// Known powers `q^a`, extended one product at a time.
#[derive(Clone, Debug)]
pub struct PowerTable<T> {
    pub values: BTreeMap<u64, T>,
    pub multiplications: usize,
    pub fallbacks: usize,
}

impl<T: Clone> PowerTable<T> {
    pub fn new(q: T) -> Self {
        PowerTable { values: [(1, q)].into_iter().collect(), multiplications: 0, fallbacks: 0 }
    }
}

/// `q^c` from the table by `c = 2a`, `c = a + b` or `c = 2a + b`, falling
/// back to binary powering of `q`; the result is stored.
pub fn find_power_in_table<T: Clone>(t: &mut PowerTable<T>, c: u64, mul: impl Fn(&T, &T) -> T) -> T {
    if let Some(v) = t.values.get(&c) {
        return v.clone();
    }
    let keys: Vec<u64> = t.values.keys().copied().collect();
    let mut found = None;
    if c % 2 == 0 {
        if let Some(a) = t.values.get(&(c / 2)) {
            found = Some(mul(a, a));
            t.multiplications += 1;
        }
    }
    if found.is_none() {
        for &a in keys.iter().rev() {
            if a < c && t.values.contains_key(&(c - a)) {
                found = Some(mul(&t.values[&a], &t.values[&(c - a)]));
                t.multiplications += 1;
                break;
            }
        }
    }
    if found.is_none() {
        'outer: for &a in keys.iter().rev() {
            if 2 * a < c && t.values.contains_key(&(c - 2 * a)) {
                let sq = mul(&t.values[&a], &t.values[&a]);
                found = Some(mul(&sq, &t.values[&(c - 2 * a)]));
                t.multiplications += 2;
                break 'outer;
            }
        }
    }
    let v = found.unwrap_or_else(|| {
        t.fallbacks += 1;
        let mut r: Option<T> = None;
        let mut b = t.values[&1].clone();
        let mut e = c;
        while e > 0 {
            if e & 1 == 1 {
                r = Some(match r {
                    None => b.clone(),
                    Some(x) => mul(&x, &b),
                });
            }
            e >>= 1;
            if e > 0 {
                b = mul(&b, &b);
            }
        }
        r.unwrap()
    });
    t.values.insert(c, v.clone());
    v
}

fn term_bound_log(n: f64, ln_q: f64, kmax: u32) -> f64 {
    let k = 2.0 * kmax as f64;
    let a = (6.0 * n - 1.0).ln() * k;
    let b = (6.0 * n + 1.0).ln() * k;
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln() + n * (3.0 * n - 1.0) / 2.0 * ln_q
}

/// Smallest `N >= 1` whose term bound `((6N-1)^2k + (6N+1)^2k) |q|^(N(3N-1)/2)`
/// is below `target_error`; the `T_2k` sums then run over `n < N`.
pub fn truncation_terms(abs_q: f64, target_error: f64, kmax: u32) -> Result<usize, Error> {
    if !(abs_q > 0.0 && abs_q < 1.0) {
        return Err(Error::Input(format!("|q| = {abs_q} is not in (0, 1)")));
    }
    if target_error <= 0.0 {
        return Err(Error::Input("target error must be positive".into()));
    }
    Ok(truncation_terms_log(abs_q.ln(), target_error.ln(), kmax))
}

/// Same as [`truncation_terms`] with natural logs of `|q|` and of the target.
pub fn truncation_terms_log(ln_q: f64, ln_target: f64, kmax: u32) -> usize {
    let mut n = 1usize;
    while term_bound_log(n as f64, ln_q, kmax) >= ln_target {
        n += 1;
    }
    n
}

/// Terms needed at a precision of `bits`, with a margin.
pub fn terms_for_precision(ln_q: f64, bits: usize, kmax: u32) -> usize {
    truncation_terms_log(ln_q, -((bits + 16) as f64) * std::f64::consts::LN_2, kmax)
}

/// Pentagonal exponents `n(3n-1)/2`, `n(3n+1)/2` with the weights
/// `(6n-1)^2`, `(6n+1)^2`, for `n < n_terms`.
fn pentagonal_terms(n_terms: usize) -> Vec<(u64, u64, bool)> {
    let mut out = Vec::new();
    let mut c = 0u64;
    for n in 1..n_terms as u64 {
        c += 3 * n - 2;
        out.push((c, (6 * n - 1) * (6 * n - 1), n % 2 == 1));
        out.push((c + n, (6 * n + 1) * (6 * n + 1), n % 2 == 1));
    }
    out
}

/// `T_0(q), T_2(q), ..., T_2kmax(q)` for real q sharing one power table;
/// the leading 1 is added last.
pub fn evaluate_many_t(q: &BigFloat, n_terms: usize, kmax: u32, prec: usize) -> Vec<BigFloat> {
    let mut t = vec![from_i64(0, prec); kmax as usize + 1];
    let mut table = PowerTable::new(q.clone());
    for (c, w, neg) in pentagonal_terms(n_terms) {
        let mut x = find_power_in_table(&mut table, c, |a, b| a.mul(b, prec, RM));
        if neg {
            x = x.neg();
        }
        let wf = BigFloat::from_u64(w, 64);
        for (k, tk) in t.iter_mut().enumerate() {
            *tk = tk.add(&x, prec, RM);
            if k < kmax as usize {
                x = x.mul(&wf, prec, RM);
            }
        }
    }
    let one = from_i64(1, prec);
    t.iter().map(|x| x.add(&one, prec, RM)).collect()
}

/// `T_2k(z zeta_l^h)` for `k <= kmax`, `0 <= h < l`, as `out[k][h]`.
pub fn evaluate_conjugate_values(ctx: &EvalContext, z: &BigFloat, n_terms: usize, kmax: u32) -> Vec<Vec<Complex>> {
    let prec = ctx.prec;
    let ell = ctx.ell.max(1);
    let zero = Complex::from_i64(0, prec);
    let mut t = vec![vec![zero; ell as usize]; kmax as usize + 1];
    let mut table = PowerTable::new(z.clone());
    for (c, w, neg) in pentagonal_terms(n_terms) {
        let mut x = find_power_in_table(&mut table, c, |a, b| a.mul(b, prec, RM));
        if neg {
            x = x.neg();
        }
        let wf = BigFloat::from_u64(w, 64);
        for (k, row) in t.iter_mut().enumerate() {
            for (h, v) in row.iter_mut().enumerate() {
                let e = ((h as u64) * c) % ell;
                *v = if e == 0 { Complex::new(v.re.add(&x, prec, RM), v.im.clone()) } else { v.add(&ctx.xi[e as usize].mul_real(&x, prec), prec) };
            }
            if k < kmax as usize {
                x = x.mul(&wf, prec, RM);
            }
        }
    }
    let one = Complex::from_i64(1, prec);
    t.iter().map(|row| row.iter().map(|v| v.add(&one, prec)).collect()).collect()
}

/// `(E2, E4, E6)` from `T_0, T_2, T_4, T_6`.
pub fn eisenstein_from_t(t: &[Complex], prec: usize) -> Result<(Complex, Complex, Complex), Error> {
    if t.len() < 4 {
        return Err(Error::Input("need T_0 .. T_6".into()));
    }
    if t[0].re.is_zero() && t[0].im.is_zero() {
        return Err(Error::Degenerate("T_0 vanishes".into()));
    }
    let c = |v: i64| Complex::from_i64(v, prec);
    let e2 = t[1].div(&t[0], prec);
    let r4 = t[2].div(&t[0], prec);
    let r6 = t[3].div(&t[0], prec);
    let e2sq = e2.mul(&e2, prec);
    let e4 = e2sq.mul(&c(3), prec).sub(&r4, prec).div(&c(2), prec);
    let e6 = r6.sub(&e2sq.mul(&e2, prec).mul(&c(15), prec), prec).add(&e2.mul(&e4, prec).mul(&c(30), prec), prec).div(&c(16), prec);
    Ok((e2, e4, e6))
}

/// Real version of [`eisenstein_from_t`].
pub fn eisenstein_from_t_real(t: &[BigFloat], prec: usize) -> Result<(BigFloat, BigFloat, BigFloat), Error> {
    let c: Vec<Complex> = t.iter().map(|x| Complex::real(x.clone(), prec)).collect();
    let (a, b, d) = eisenstein_from_t(&c, prec)?;
    Ok((a.re, b.re, d.re))
}

/// E2, E4, E6, Delta, j at one point.
#[derive(Clone, Debug)]
pub struct PointValues {
    pub e2: BigFloat,
    pub e4: BigFloat,
    pub e6: BigFloat,
    pub delta: BigFloat,
    pub j: BigFloat,
}

pub fn delta_from_e46(e4: &BigFloat, e6: &BigFloat, prec: usize) -> BigFloat {
    let e43 = e4.mul(e4, prec, RM).mul(e4, prec, RM);
    e43.sub(&e6.mul(e6, prec, RM), prec, RM).div(&from_i64(1728, prec), prec, RM)
}

/// Values at real `q` in (0, 1) by the T-series.
pub fn values_at_q(q: &BigFloat, prec: usize) -> Result<PointValues, Error> {
    let ln_q = log2_abs(q) * std::f64::consts::LN_2;
    if q.is_zero() || q.is_negative() || !(ln_q < 0.0) {
        return Err(Error::Input("q must lie in (0, 1)".into()));
    }
    let wp = prec + 32;
    let n = terms_for_precision(ln_q, wp, 3);
    let t = evaluate_many_t(q, n, 3, wp);
    let (e2, e4, e6) = eisenstein_from_t_real(&t, wp)?;
    let delta = delta_from_e46(&e4, &e6, wp);
    let e43 = e4.mul(&e4, wp, RM).mul(&e4, wp, RM);
    let j = e43.div(&delta, wp, RM);
    let r = |x: BigFloat| {
        let mut y = x;
        let _ = y.set_precision(prec, RM);
        y
    };
    Ok(PointValues { e2: r(e2), e4: r(e4), e6: r(e6), delta: r(delta), j: r(j) })
}

/// Values at `tau = i rho`.
pub fn values_at_rho(rho: &BigFloat, prec: usize) -> Result<PointValues, Error> {
    let mut ctx = EvalContext::new(prec + 32, 1);
    let q = ctx.nome(rho, 1);
    values_at_q(&q, prec)
}

/// `(theta_2, theta_3, theta_4)` at real `q1` in (0, 1), with `q = q1^2`.
pub fn theta_values(q1: &BigFloat, prec: usize) -> (BigFloat, BigFloat, BigFloat) {
    let wp = prec + 32;
    let mut cc = consts();
    let ln_q1 = log2_abs(q1) * std::f64::consts::LN_2;
    let target = -((wp + 8) as f64) * std::f64::consts::LN_2;
    let one = from_i64(1, wp);
    let two = from_i64(2, wp);
    // theta_3, theta_4: 1 + 2 sum (+-1)^n q1^(n^2)
    let mut t3 = from_i64(0, wp);
    let mut t4 = from_i64(0, wp);
    let mut table = PowerTable::new(q1.clone());
    let mut n = 1u64;
    while ((n * n) as f64) * ln_q1 > target {
        let x = find_power_in_table(&mut table, n * n, |a, b| a.mul(b, wp, RM));
        t3 = t3.add(&x, wp, RM);
        t4 = if n % 2 == 1 { t4.sub(&x, wp, RM) } else { t4.add(&x, wp, RM) };
        n += 1;
    }
    let t3 = one.add(&t3.mul(&two, wp, RM), wp, RM);
    let t4 = one.add(&t4.mul(&two, wp, RM), wp, RM);
    // theta_2 = 2 q1^(1/4) sum_{n >= 0} q1^(n(n+1))
    let mut s = one.clone();
    let mut n = 1u64;
    let mut t2table = PowerTable::new(q1.clone());
    while ((n * (n + 1)) as f64) * ln_q1 > target {
        let x = find_power_in_table(&mut t2table, n * (n + 1), |a, b| a.mul(b, wp, RM));
        s = s.add(&x, wp, RM);
        n += 1;
    }
    let quarter = q1.ln(wp, RM, &mut cc).div(&from_i64(4, wp), wp, RM).exp(wp, RM, &mut cc);
    let t2 = quarter.mul(&s, wp, RM).mul(&two, wp, RM);
    (t2, t3, t4)
}

/// `(E4, E6, Delta)` from theta constants `a, b, c`.
pub fn e46_from_theta(a: &BigFloat, b: &BigFloat, c: &BigFloat, prec: usize) -> (BigFloat, BigFloat, BigFloat) {
    let p4 = |x: &BigFloat| x.powi(4, prec, RM);
    let (a4, b4, c4) = (p4(a), p4(b), p4(c));
    let sq = |x: &BigFloat| x.mul(x, prec, RM);
    let two = from_i64(2, prec);
    let e4 = sq(&a4).add(&sq(&b4), prec, RM).add(&sq(&c4), prec, RM).div(&two, prec, RM);
    let e6 = a4
        .add(&b4, prec, RM)
        .mul(&b4.add(&c4, prec, RM), prec, RM)
        .mul(&c4.sub(&a4, prec, RM), prec, RM)
        .div(&two, prec, RM);
    let abc = a.mul(b, prec, RM).mul(c, prec, RM).div(&two, prec, RM);
    let d = abc.powi(8, prec, RM);
    (e4, e6, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: usize = 256;

    fn rel(a: &BigFloat, b: &BigFloat) -> f64 {
        let d = to_f64(&a.sub(b, P + 64, RM).abs());
        let m = to_f64(&b.abs()).max(1e-300);
        (d / m).max(1e-300).log2()
    }

    fn rho(s: &str) -> BigFloat {
        from_decimal(s, P + 64).unwrap()
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(round_mantissa("9.99951e+2", 4), "1.000e+3");
        assert_eq!(round_mantissa("-1.23449e-5", 4), "-1.234e-5");
        assert_eq!(round_mantissa("1.5", 4), "1.5");
        assert_eq!(format_decimal(&from_i64(1728, 128), 6), "1.728e+3");
    }

    #[test]
    fn bigint_round_trip() {
        for v in [0i64, 1, -7, 1000320, -534159360, i64::MAX] {
            let b = BigInt::from(v);
            assert_eq!(to_bigint(&from_bigint(&b, 128)), Some(b));
        }
        let big = BigInt::from(10).pow(50) - 3;
        assert_eq!(to_bigint(&from_bigint(&big, 256)), Some(big.clone()));
        assert_eq!(to_bigint(&from_bigint(&(-big.clone()), 256)), Some(-big));
        assert_eq!(to_bigint(&BigFloat::from_f64(2.5, 64)), None);
        let (r, d) = round_nearest(&BigFloat::from_f64(1000319.99993, 128), 128).unwrap();
        assert_eq!(r, BigInt::from(1000320));
        assert!(d < 1e-3);
        assert_eq!(round_nearest(&BigFloat::from_f64(-534159360.0002, 128), 128).unwrap().0, BigInt::from(-534159360));
        assert!((to_f64(&BigFloat::from_f64(-3.25, 64)) + 3.25).abs() < 1e-15);
    }

    #[test]
    fn truncation_examples() {
        let q = (-2.0 * std::f64::consts::PI).exp();
        let n = truncation_terms(q, 2f64.powi(-100), 3).unwrap();
        assert!((3..10).contains(&n), "{n}");
        assert_eq!(truncation_terms(q, 2.0, 1).unwrap(), 1);
        assert!(truncation_terms(1.0, 0.1, 1).is_err());
        let mut last = usize::MAX;
        for e in [1e-60, 1e-40, 1e-20, 1e-5] {
            let m = truncation_terms(q, e, 3).unwrap();
            assert!(m <= last);
            last = m;
        }
        assert!(truncation_terms(0.5, 1e-30, 3).unwrap() >= truncation_terms(0.1, 1e-30, 3).unwrap());
    }

    #[test]
    fn power_table_patterns() {
        let mut t = PowerTable::new(1u128);
        t.values.insert(2, 2);
        t.values.insert(5, 5);
        let mul = |a: &u128, b: &u128| a + b;
        assert_eq!(find_power_in_table(&mut t, 7, mul), 7);
        assert_eq!(t.multiplications, 1);
        let mut t = PowerTable::new(3u128);
        assert_eq!(find_power_in_table(&mut t, 2, |a, b| a * b), 9);
        let mut t = PowerTable::new(1u128);
        for (c, _, _) in pentagonal_terms(21) {
            assert_eq!(find_power_in_table(&mut t, c, |a, b| a + b), c as u128);
        }
        assert_eq!(t.fallbacks, 0);
        assert_eq!(t.values.len(), 40);
    }

    #[test]
    fn t0_is_euler_product() {
        let q = BigFloat::from_f64(0.05, P);
        let n = terms_for_precision(0.05f64.ln(), P, 0);
        let t = evaluate_many_t(&q, n, 0, P);
        let mut prod = from_i64(1, P);
        let mut qn = q.clone();
        let one = from_i64(1, P);
        for _ in 0..400 {
            prod = prod.mul(&one.sub(&qn, P, RM), P, RM);
            qn = qn.mul(&q, P, RM);
        }
        assert!(rel(&t[0], &prod) < -(P as f64) + 16.0);
    }

    #[test]
    fn t2_head() {
        let q = BigFloat::from_f64(1e-6, P);
        let t = evaluate_many_t(&q, 3, 1, P);
        // 1 - 25 q - 49 q^2 + 121 q^5 + ...
        let expect = 1.0 - 25e-6 - 49e-12;
        assert!((to_f64(&t[1]) - expect).abs() < 1e-15);
    }

    #[test]
    fn e2_ratio_matches_series() {
        let mut ctx = EvalContext::new(P + 32, 1);
        let q = ctx.nome(&rho("1.3"), 1);
        let v = values_at_q(&q, P).unwrap();
        let mut s = from_i64(0, P + 32);
        let mut qn = q.clone();
        for n in 1..200u64 {
            let d: u64 = (1..=n).filter(|d| n % d == 0).sum();
            s = s.add(&qn.mul(&BigFloat::from_u64(d, 64), P + 32, RM), P + 32, RM);
            qn = qn.mul(&q, P + 32, RM);
        }
        let e2 = from_i64(1, P).sub(&s.mul(&from_i64(24, P), P + 32, RM), P + 32, RM);
        assert!(rel(&v.e2, &e2) < -(P as f64) + 8.0);
    }

    #[test]
    fn special_values_at_i() {
        let v = values_at_rho(&rho("1"), P).unwrap();
        assert!(to_f64(&v.e6.abs()) < 2f64.powi(-(P as i32) + 8));
        let mut ctx = EvalContext::new(P, 1);
        let three_over_pi = from_i64(3, P).div(&ctx.pi(), P, RM);
        assert!(rel(&v.e2, &three_over_pi) < -(P as f64) + 8.0);
        assert!(rel(&v.j, &from_i64(1728, P)) < -(P as f64) + 12.0);
        let far = values_at_rho(&rho("40"), P).unwrap();
        assert!((to_f64(&far.e4) - 1.0).abs() < 1e-100);
        assert!((to_f64(&far.e6) - 1.0).abs() < 1e-100);
    }

    #[test]
    fn rows_at_rho_1_1() {
        let v = values_at_rho(&rho("1.1"), P).unwrap();
        let e43 = v.e4.powi(3, P, RM);
        assert!((to_f64(&e43) / 1.912407642 - 1.0).abs() < 1e-9);
        assert!((to_f64(&v.delta) / 0.0009726854527956 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_identities() {
        let mut ctx = EvalContext::new(P + 32, 1);
        let q1 = ctx.nome(&rho("1.1"), 2);
        let (a, b, c) = theta_values(&q1, P);
        let lhs = b.powi(4, P, RM);
        let rhs = c.powi(4, P, RM).add(&a.powi(4, P, RM), P, RM);
        assert!(rel(&lhs, &rhs) < -(P as f64) + 8.0);
        let q1 = ctx.nome(&rho("30"), 2);
        let (a, b, c) = theta_values(&q1, P);
        let one = from_i64(1, P);
        assert!(to_f64(&a) < 1e-9);
        assert!(to_f64(&b.sub(&one, P, RM).abs()) < 1e-40 && to_f64(&c.sub(&one, P, RM).abs()) < 1e-40);
    }

    #[test]
    fn monotone_on_imaginary_axis() {
        let mut prev: Option<PointValues> = None;
        for i in 0..=6 {
            let r = from_decimal(&format!("{}", 1.0 + 0.5 * i as f64), 128).unwrap();
            let v = values_at_rho(&r, 128).unwrap();
            if let Some(p) = prev {
                assert!(to_f64(&v.e4) < to_f64(&p.e4));
                assert!(to_f64(&v.e6) > to_f64(&p.e6));
                assert!(to_f64(&v.e2) > to_f64(&p.e2));
            }
            prev = Some(v);
        }
    }

    #[test]
    fn precision_doubling() {
        let a = values_at_rho(&from_decimal("1.3", 192).unwrap(), 128).unwrap();
        let b = values_at_rho(&from_decimal("1.3", 320).unwrap(), 256).unwrap();
        assert!(to_f64(&a.e4.sub(&b.e4, 256, RM).abs()) < 2f64.powi(-120));
    }

    #[test]
    fn conjugates_sum_to_decimation() {
        let ell = 5u64;
        let ctx = EvalContext::new(P, ell);
        let mut c2 = EvalContext::new(P + 32, 1);
        let z = c2.nome(&rho("1.2"), ell);
        let n = terms_for_precision(to_f64(&z).ln(), P, 1);
        let t = evaluate_conjugate_values(&ctx, &z, n, 1);
        let direct = evaluate_many_t(&z, n, 1, P);
        assert!(rel(&t[1][0].re, &direct[1]) < -(P as f64) + 4.0);
        // sum over h keeps the terms with l | exponent: l * (1 + sum over those)
        let mut sum = Complex::from_i64(0, P);
        for h in 0..ell as usize {
            sum = sum.add(&t[0][h], P);
        }
        let mut expect = from_i64(1, P);
        let mut c = 0u64;
        for n in 1..n as u64 {
            c += 3 * n - 2;
            for e in [c, c + n] {
                if e % ell == 0 {
                    let x = z.powi(e as usize, P, RM);
                    expect = if n % 2 == 1 { expect.sub(&x, P, RM) } else { expect.add(&x, P, RM) };
                }
            }
        }
        expect = expect.mul(&from_i64(ell as i64, P), P, RM);
        assert!(rel(&sum.re, &expect) < -(P as f64) + 8.0);
        assert!(to_f64(&sum.im.abs()) < 2f64.powi(-(P as i32) + 8));
        assert_eq!(ctx.xi.len(), ell as usize);
        for x in &ctx.xi {
            assert!((x.abs_f64() - 1.0).abs() < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(5))]
        #[test]
        fn theta_path_agrees(r in 1.0f64..3.0) {
            let p = 192;
            let rho = BigFloat::from_f64(r, p + 64);
            let v = values_at_rho(&rho, p).unwrap();
            let mut ctx = EvalContext::new(p + 32, 1);
            let q1 = ctx.nome(&rho, 2);
            let (a, b, c) = theta_values(&q1, p);
            let (e4, e6, d) = e46_from_theta(&a, &b, &c, p);
            for (x, y) in [(e4, v.e4), (e6, v.e6), (d, v.delta)] {
                let diff = to_f64(&x.sub(&y, p, RM).abs()) / to_f64(&y.abs());
                prop_assert!(diff < 2f64.powi(-(p as i32) + 12), "{}", diff);
            }
        }
    }
}
