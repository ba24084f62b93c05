//! U, V, W by evaluation at points `tau = rho i` and interpolation: each
//! power sum `sigma_t` is a form of weight `w t`, so its coordinates in the
//! basis `P_{wt, j}` solve a small real linear system built from the values
//! at a few nodes.

use crate::eisenval::{
    eisenstein_from_t, evaluate_conjugate_values, from_decimal, from_i64, log2_abs, round_nearest, terms_for_precision,
    values_at_q, Complex, EvalContext, RM,
};
use crate::formbasis::{j_max, weight_exponents, point_rows};
use crate::fricke_series::polynomial_from_forms;
use crate::poly::{Family, Form};
use crate::ring::{Algebra, Integers};
use crate::{arith, Error, TriPoly};
use astro_float::BigFloat;
use num_bigint::BigInt;
use rayon::prelude::*;

/// Rounding tolerance for recovered integers.
pub const DEFAULT_TOL: f64 = 0.01;
pub const DEFAULT_GUARD_BITS: usize = 64;
const MAX_ATTEMPTS: usize = 6;
const MAX_RHO: f64 = 5.0;

/// Real `f64` field for [`point_rows`] on big floats.
#[derive(Clone, Copy, Debug)]
struct Reals {
    prec: usize,
}

impl Algebra for Reals {
    type T = BigFloat;
    fn zero(&self) -> BigFloat {
        from_i64(0, self.prec)
    }
    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }
    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }
    fn neg(&self, a: &BigFloat) -> BigFloat {
        a.neg()
    }
    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }
    fn div_small(&self, a: &BigFloat, k: u64) -> Option<BigFloat> {
        (k != 0).then(|| a.div(&BigFloat::from_u64(k, 64), self.prec, RM))
    }
    fn is_zero(&self, a: &BigFloat) -> bool {
        a.is_zero()
    }
}

/// Rows of one system `L_t` with their right-hand sides.
#[derive(Clone, Debug)]
pub struct SystemAccumulator {
    pub unknowns: usize,
    pub rows: Vec<Vec<BigFloat>>,
    pub rhs: Vec<BigFloat>,
    pub solution: Option<Vec<BigFloat>>,
}

/// Outcome of an elimination attempt.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    /// Solution and `log2` of the largest relative residual over rows not
    /// used as pivots (`None` for a square system).
    Solved { x: Vec<BigFloat>, residual_log2: Option<f64> },
    NeedMoreRows,
}

impl SystemAccumulator {
    pub fn new(unknowns: usize) -> Self {
        SystemAccumulator { unknowns, rows: Vec::new(), rhs: Vec::new(), solution: None }
    }

    pub fn push(&mut self, row: Vec<BigFloat>, rhs: BigFloat) {
        assert_eq!(row.len(), self.unknowns, "row length");
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn is_solved(&self) -> bool {
        self.solution.is_some()
    }
}

fn max_abs(v: &[BigFloat]) -> Option<BigFloat> {
    v.iter().map(|x| x.abs()).filter(|x| !x.is_zero()).max_by(|a, b| a.cmp(b).unwrap_or(0).cmp(&0))
}

/// Gaussian elimination with row and column equilibration and partial
/// pivoting over all accumulated rows. A pivot below `2^(-prec/2)` of its
/// scale counts as singular.
pub fn solve_accumulated(s: &SystemAccumulator, prec: usize) -> SolveOutcome {
    let n = s.unknowns;
    let m = s.rows.len();
    if m < n {
        return SolveOutcome::NeedMoreRows;
    }
    let p = prec;
    let mut a: Vec<Vec<BigFloat>> = Vec::with_capacity(m);
    let mut b: Vec<BigFloat> = Vec::with_capacity(m);
    for (row, r) in s.rows.iter().zip(&s.rhs) {
        let Some(sc) = max_abs(row) else { continue };
        a.push(row.iter().map(|x| x.div(&sc, p, RM)).collect());
        b.push(r.div(&sc, p, RM));
    }
    let mut col_scale = Vec::with_capacity(n);
    for j in 0..n {
        let col: Vec<BigFloat> = a.iter().map(|r| r[j].clone()).collect();
        let Some(sc) = max_abs(&col) else { return SolveOutcome::NeedMoreRows };
        for r in a.iter_mut() {
            r[j] = r[j].div(&sc, p, RM);
        }
        col_scale.push(sc);
    }
    let threshold = -(prec as f64) / 2.0;
    let mut order: Vec<usize> = (0..a.len()).collect();
    let mut used = 0usize;
    for j in 0..n {
        let best = (used..order.len()).max_by(|&x, &y| {
            let (ax, ay) = (a[order[x]][j].abs(), a[order[y]][j].abs());
            ax.cmp(&ay).unwrap_or(0).cmp(&0)
        });
        let Some(best) = best else { return SolveOutcome::NeedMoreRows };
        if log2_abs(&a[order[best]][j]) < threshold {
            return SolveOutcome::NeedMoreRows;
        }
        order.swap(used, best);
        let pr = order[used];
        let piv = a[pr][j].clone();
        for &r in &order[used + 1..] {
            if a[r][j].is_zero() {
                continue;
            }
            let f = a[r][j].div(&piv, p, RM);
            for k in j..n {
                let t = f.mul(&a[pr][k], p, RM);
                a[r][k] = a[r][k].sub(&t, p, RM);
            }
            let t = f.mul(&b[pr], p, RM);
            b[r] = b[r].sub(&t, p, RM);
        }
        used += 1;
    }
    let mut y = vec![from_i64(0, p); n];
    for j in (0..n).rev() {
        let r = order[j];
        let mut acc = b[r].clone();
        for k in j + 1..n {
            acc = acc.sub(&a[r][k].mul(&y[k], p, RM), p, RM);
        }
        y[j] = acc.div(&a[r][j], p, RM);
    }
    let x: Vec<BigFloat> = y.iter().zip(&col_scale).map(|(v, sc)| v.div(sc, p, RM)).collect();
    let mut residual: Option<f64> = None;
    for (row, r) in s.rows.iter().zip(&s.rhs) {
        let mut acc = from_i64(0, p);
        let mut scale = log2_abs(r);
        for (c, v) in row.iter().zip(&x) {
            let t = c.mul(v, p, RM);
            scale = scale.max(log2_abs(&t));
            acc = acc.add(&t, p, RM);
        }
        let rel = log2_abs(&acc.sub(r, p, RM)) - scale;
        residual = Some(residual.map_or(rel, |x: f64| x.max(rel)));
    }
    let residual_log2 = if m > n { residual } else { None };
    SolveOutcome::Solved { x, residual_log2 }
}

/// Nearest integers, failing when any entry is farther than `tol` from one.
pub fn round_to_integers(v: &[BigFloat], tol: f64) -> Result<Vec<BigInt>, Error> {
    if !(tol > 0.0 && tol < 0.5) {
        return Err(Error::Input(format!("tolerance {tol} not in (0, 0.5)")));
    }
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            let prec = x.mantissa_max_bit_len().unwrap_or(64).max(64);
            let (r, d) = round_nearest(x, prec).ok_or_else(|| Error::Numerical(format!("entry {i} is not finite")))?;
            if d > tol {
                return Err(Error::Numerical(format!("entry {i} is {d:.3} away from an integer")));
            }
            Ok(r)
        })
        .collect()
}

/// Values at one node: `(E4, E6, Delta)` at `q` and the real power sums
/// `sigma_1..sigma_{l+1}` of the scaled roots.
#[derive(Clone, Debug)]
pub struct NodeValues {
    pub rho: BigFloat,
    pub e4: BigFloat,
    pub e6: BigFloat,
    pub delta: BigFloat,
    pub sigma: Vec<BigFloat>,
}

/// Roots at `tau = rho i` for U, V or W and their power sums.
pub fn node_values(ell: u64, family: Family, rho: &BigFloat, prec: usize) -> Result<NodeValues, Error> {
    let wp = prec + 32;
    let mut ctx = EvalContext::new(wp, ell);
    let z = ctx.nome(rho, ell);
    let q = z.powi(ell as usize, wp, RM);
    let ql = q.powi(ell as usize, wp, RM);
    let at_q = values_at_q(&q, wp)?;
    let at_ql = values_at_q(&ql, wp)?;
    let ln_z = log2_abs(&z) * std::f64::consts::LN_2;
    let n = terms_for_precision(ln_z, wp, 3);
    let t = evaluate_conjugate_values(&ctx, &z, n, 3);
    let mut conj_e = Vec::with_capacity(ell as usize);
    for h in 0..ell as usize {
        let col: Vec<Complex> = (0..4).map(|k| t[k][h].clone()).collect();
        conj_e.push(eisenstein_from_t(&col, wp)?);
    }
    let l = from_i64(ell as i64, wp);
    let (dist, conj): (BigFloat, Vec<Complex>) = match family {
        Family::U => {
            let factor = if ell == 2 { from_i64(1, wp) } else { BigFloat::from_f64(0.5, wp) };
            let f_q = at_q.e2.sub(&l.mul(&at_ql.e2, wp, RM), wp, RM);
            let dist = f_q.mul(&l, wp, RM).mul(&factor, wp, RM).neg();
            let shift = Complex::real(l.mul(&at_q.e2, wp, RM), wp);
            let conj = conj_e.iter().map(|(e2, _, _)| e2.sub(&shift, wp).mul_real(&factor, wp)).collect();
            (dist, conj)
        }
        Family::V => {
            let c = from_i64(-3, wp);
            let dist = at_ql.e4.mul(&l.powi(4, wp, RM), wp, RM).mul(&c, wp, RM);
            (dist, conj_e.iter().map(|(_, e4, _)| e4.mul_real(&c, wp)).collect())
        }
        Family::W => {
            let c = from_i64(-2, wp);
            let dist = at_ql.e6.mul(&l.powi(6, wp, RM), wp, RM).mul(&c, wp, RM);
            (dist, conj_e.iter().map(|(_, _, e6)| e6.mul_real(&c, wp)).collect())
        }
        _ => return Err(Error::Input(format!("family {} has no float method", family.as_str()))),
    };
    let mut sigma = Vec::with_capacity(ell as usize + 1);
    let mut dp = from_i64(1, wp);
    let mut cp: Vec<Complex> = vec![Complex::from_i64(1, wp); conj.len()];
    for _ in 0..=ell {
        dp = dp.mul(&dist, wp, RM);
        let mut s = Complex::real(dp.clone(), wp);
        for (c, r) in cp.iter_mut().zip(&conj) {
            *c = c.mul(r, wp);
            s = s.add(c, wp);
        }
        if !s.im.is_zero() && log2_abs(&s.im) - log2_abs(&s.re).max(0.0) > -(prec as f64) / 2.0 {
            return Err(Error::Numerical("power sum has an imaginary part".into()));
        }
        sigma.push(s.re);
    }
    Ok(NodeValues { rho: rho.clone(), e4: at_q.e4, e6: at_q.e6, delta: at_q.delta, sigma })
}

/// Tunables of the float method.
#[derive(Clone, Debug)]
pub struct FloatParams {
    pub guard_bits: usize,
    /// decimal text, parsed exactly
    pub rho_step: String,
    pub tol: f64,
}

impl Default for FloatParams {
    fn default() -> Self {
        FloatParams { guard_bits: DEFAULT_GUARD_BITS, rho_step: "0.1".into(), tol: DEFAULT_TOL }
    }
}

/// Result with the precision that succeeded.
#[derive(Clone, Debug)]
pub struct FloatRun {
    pub poly: TriPoly,
    pub prec: usize,
    pub attempts: usize,
    pub nodes: usize,
}

/// `ceil(w (l + 1) log2 l)`.
pub fn base_precision(ell: u64, w: u32) -> usize {
    (w as f64 * (ell as f64 + 1.0) * (ell as f64).log2()).ceil() as usize
}

fn check_args(ell: u64, family: Family) -> Result<u32, Error> {
    if !arith::is_prime(ell) {
        return Err(Error::Input(format!("{ell} is not prime")));
    }
    match family {
        Family::U | Family::V | Family::W => Ok(family.x_weight()),
        _ => Err(Error::Input(format!("family {} has no float method", family.as_str()))),
    }
}

/// One attempt at a fixed precision.
pub fn compute_fricke_float_at(ell: u64, family: Family, prec: usize, params: &FloatParams) -> Result<(TriPoly, usize), Error> {
    let w = check_args(ell, family)?;
    let n = ell as u32 + 1;
    let step = from_decimal(&params.rho_step, prec + 64)?;
    let step_f = params.rho_step.parse::<f64>().map_err(|_| Error::Input(format!("bad rho step {}", params.rho_step)))?;
    if !(step_f > 0.0) {
        return Err(Error::Input("rho step must be positive".into()));
    }
    let mut systems: Vec<Option<SystemAccumulator>> = (1..=n)
        .map(|t| (w * t > 2).then(|| SystemAccumulator::new(j_max(w * t) as usize + 1)))
        .collect();
    let max_unknowns = systems.iter().flatten().map(|s| s.unknowns).max().unwrap_or(1);
    let rho_limit = (1.0 + 0.1 * 3.0 * max_unknowns as f64).max(1.0 + step_f * (max_unknowns + 1) as f64).min(MAX_RHO);
    let one = from_i64(1, prec + 64);
    let rho_at = |i: usize| one.add(&step.mul(&from_i64(i as i64, 64), prec + 64, RM), prec + 64, RM);
    let reals = Reals { prec };
    let mut nodes: Vec<NodeValues> = Vec::new();
    let mut next = 1usize;
    let max_index = ((rho_limit - 1.0) / step_f + 1e-9).floor() as usize;
    let mut batch = max_unknowns + 1;
    loop {
        let pending = systems.iter().flatten().any(|s| !s.is_solved());
        if !pending {
            break;
        }
        if next > max_index {
            return Err(Error::Numerical(format!("systems still singular at rho = {rho_limit:.1}")));
        }
        batch = batch.min(max_index + 1 - next);
        let fresh: Vec<NodeValues> =
            (next..next + batch).into_par_iter().map(|i| node_values(ell, family, &rho_at(i), prec)).collect::<Result<_, _>>()?;
        next += batch;
        for nv in &fresh {
            if let Some(first) = nv.sigma.first() {
                if w == 2 {
                    let scale = log2_abs(&nv.sigma[1]) / 2.0;
                    if log2_abs(first) - scale > -(prec as f64) / 2.0 {
                        return Err(Error::Numerical("sigma_1 does not vanish".into()));
                    }
                }
            }
            for (t, sys) in systems.iter_mut().enumerate() {
                let Some(sys) = sys else { continue };
                if sys.is_solved() {
                    continue;
                }
                let row = point_rows(&reals, from_i64(1, prec), w * (t as u32 + 1), &nv.e4, &nv.e6, &nv.delta);
                sys.push(row, nv.sigma[t].clone());
            }
        }
        nodes.extend(fresh);
        for sys in systems.iter_mut().flatten() {
            if sys.is_solved() || sys.rows.len() < sys.unknowns + 1 {
                continue;
            }
            match solve_accumulated(sys, prec) {
                SolveOutcome::Solved { x, residual_log2 } => {
                    if let Some(r) = residual_log2 {
                        if r > -(prec as f64) / 4.0 {
                            return Err(Error::Numerical(format!("residual 2^{r:.0} at {prec} bits")));
                        }
                    }
                    sys.solution = Some(x);
                }
                SolveOutcome::NeedMoreRows => {}
            }
        }
        batch = 2;
    }
    let mut forms: Vec<Form<BigInt>> = Vec::with_capacity(n as usize);
    for (t, sys) in systems.iter().enumerate() {
        let mut f = Form::new();
        if let Some(sys) = sys {
            let ints = round_to_integers(sys.solution.as_ref().unwrap(), params.tol)?;
            for ((i6, i4, i12), c) in weight_exponents(w * (t as u32 + 1) / 2)?.into_iter().zip(ints) {
                if c != BigInt::from(0) {
                    f.insert([i4, i6, i12], c);
                }
            }
        }
        forms.push(f);
    }
    let poly = polynomial_from_forms(&Integers, &forms, family, ell, w)?;
    Ok((poly, nodes.len()))
}

/// U, V or W from numerical values, doubling the guard bits on failure.
pub fn compute_fricke_float(ell: u64, family: Family, params: &FloatParams) -> Result<FloatRun, Error> {
    let w = check_args(ell, family)?;
    let base = base_precision(ell, w);
    let mut guard = params.guard_bits.max(16);
    let mut last = None;
    for attempt in 1..=MAX_ATTEMPTS {
        let prec = base + guard;
        match compute_fricke_float_at(ell, family, prec, params) {
            Ok((poly, nodes)) => return Ok(FloatRun { poly, prec, attempts: attempt, nodes }),
            Err(e @ (Error::Input(_) | Error::Io(_))) => return Err(e),
            Err(e) => last = Some(e),
        }
        guard *= 2;
    }
    Err(Error::Numerical(format!("no stable result after {MAX_ATTEMPTS} attempts: {}", last.map(|e| e.to_string()).unwrap_or_default())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenval::to_f64;
    use crate::fricke_series::compute_fricke_integers;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 128)
    }

    #[test]
    fn rounding() {
        assert_eq!(round_to_integers(&[bf(1000319.99993)], 0.01).unwrap(), vec![BigInt::from(1000320)]);
        assert!(round_to_integers(&[bf(0.4)], 0.01).is_err());
        assert_eq!(round_to_integers(&[bf(-534159360.0002)], 0.01).unwrap(), vec![BigInt::from(-534159360)]);
        assert!(round_to_integers(&[bf(1.0)], 0.6).is_err());
    }

    #[test]
    fn identity_and_duplicates() {
        let mut s = SystemAccumulator::new(2);
        s.push(vec![bf(1.0), bf(0.0)], bf(3.0));
        s.push(vec![bf(1.0), bf(0.0)], bf(3.0));
        assert!(matches!(solve_accumulated(&s, 128), SolveOutcome::NeedMoreRows));
        s.push(vec![bf(0.0), bf(1.0)], bf(-5.0));
        match solve_accumulated(&s, 128) {
            SolveOutcome::Solved { x, residual_log2 } => {
                assert_eq!(to_f64(&x[0]), 3.0);
                assert_eq!(to_f64(&x[1]), -5.0);
                assert!(residual_log2.unwrap() < -100.0);
            }
            _ => panic!("identity system"),
        }
        let mut one = SystemAccumulator::new(1);
        assert!(matches!(solve_accumulated(&one, 64), SolveOutcome::NeedMoreRows));
        one.push(vec![bf(2.0)], bf(7.0));
        assert!(matches!(solve_accumulated(&one, 64), SolveOutcome::Solved { residual_log2: None, .. }));
    }

    #[test]
    fn l6_rows_for_u5() {
        let prec = 256;
        let mut s = SystemAccumulator::new(2);
        for (r, row0, row1, rhs) in [("1.1", 1.912407642, 0.0009726854527956, 1393450.57337539139), ("1.2", 1.435895343, 0.0005247501300701, 1156054.63606077432)] {
            let nv = node_values(5, Family::U, &from_decimal(r, prec + 64).unwrap(), prec).unwrap();
            let row = point_rows(&Reals { prec }, from_i64(1, prec), 12, &nv.e4, &nv.e6, &nv.delta);
            assert!((to_f64(&row[0]) / row0 - 1.0).abs() < 1e-9);
            assert!((to_f64(&row[1]) / row1 - 1.0).abs() < 1e-12);
            assert!((to_f64(&nv.sigma[5]) / rhs - 1.0).abs() < 1e-15);
            assert!(to_f64(&nv.sigma[0].abs()) < 1e-60);
            s.push(row, nv.sigma[5].clone());
        }
        let SolveOutcome::Solved { x, .. } = solve_accumulated(&s, prec) else { panic!() };
        assert_eq!(round_to_integers(&x, 1e-3).unwrap(), vec![BigInt::from(1000320), BigInt::from(-534159360)]);
    }

    #[test]
    fn u5_float_matches_series() {
        let run = compute_fricke_float(5, Family::U, &FloatParams::default()).unwrap();
        assert_eq!(run.poly.canonical(), compute_fricke_integers(5, Family::U).unwrap().canonical());
        assert_eq!(run.prec, base_precision(5, 2) + 64);
    }

    #[test]
    fn small_levels_all_families() {
        for (ell, fam) in [(3, Family::U), (3, Family::W), (5, Family::V), (7, Family::W)] {
            let run = compute_fricke_float(ell, fam, &FloatParams::default()).unwrap();
            assert_eq!(run.poly.canonical(), compute_fricke_integers(ell, fam).unwrap().canonical(), "l={ell} {fam:?}");
        }
    }

    #[test]
    fn deterministic() {
        let p = FloatParams::default();
        let a = compute_fricke_float_at(5, Family::V, 400, &p).unwrap();
        let b = compute_fricke_float_at(5, Family::V, 400, &p).unwrap();
        assert_eq!(a.0.terms, b.0.terms);
        assert!(compute_fricke_float(4, Family::U, &p).is_err());
        assert!(compute_fricke_float(5, Family::A, &p).is_err());
    }
}
