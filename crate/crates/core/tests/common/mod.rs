#![allow(dead_code)]

use astro_float::RoundingMode;
use fricke::arith::{self, mul_full, negmod};
use fricke::atkin::{e4_tilde, isogenous_from_u, partials_at, UPartials};
use fricke::eisenval::{e46_from_theta, from_decimal, theta_values, to_f64, values_at_rho, EvalContext};
use fricke::fricke_float::{compute_fricke_float, node_values, FloatParams};
use fricke::fricke_series::{compute_fricke_exact, compute_numerators_series, compute_phi_exact, express_weight, power_sums_u, FormTag, DEFAULT_ORDER_GUARD};
use fricke::newton::{coefficients_to_newton, newton_to_coefficients};
use fricke::poly::{parse_ab, parse_tri, poly3_derivative, Poly3};
use fricke::qseries::{delta_series, eisenstein_series, QSeries};
use fricke::ring::{Algebra, Integers, PrimeField, Rationals, Ring};
use fricke::volcano::{
    compute_family_mod, compute_volcano_exact, crater_js, numerator_rank, partial_volcano, site_power_sums, sigma_forms_mod, volcano_params,
    ClassPoly, Curve, VolcanoSite, VOLCANO_PRIME_START,
};
use fricke::{Family, TriPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn exact(ell: u64, fam: Family) -> Result<TriPoly, String> {
    compute_fricke_exact(ell, fam, DEFAULT_ORDER_GUARD).map_err(err)
}

fn same(a: &TriPoly, b: &TriPoly) -> bool {
    a.canonical().terms == b.canonical().terms
}

// ---- exact fixtures ----

pub const U2_AB: &str = "X^3 + A*X + B";
pub const U3_AB: &str = "X^4 + 2*A*X^2 + 4*B*X - 1/3*A^2";
pub const U5_E4: &str = "X^6 - 60*E4*X^4 - 320*E6*X^3 - 720*E4^2*X^2 - 768*E4*E6*X - 320*E4^3 + 552960*D";
pub const U5_AB: &str = "X^6 + 20*X^4*A + 160*X^3*B - 80*X^2*A^2 - 128*X*A*B - 80*B^2";
pub const W3: &str = "X^4 + 1464*E6*X^3 + 8760*E4^3*X^2 - 1185643008*D*X^2 + 17504*E4^3*E6*X - 152195991552*D*E6*X \
                      + 11664*E4^6 - 1790914074624*D*E4^3 - 20889728069861376*D^2";
pub const A3: &str = "-252*E4*X^3 - 720*E6*X^2 - 684*E4^2*X - 216*E4*E6";
pub const B3: &str = "-1464*E6*X^3 - 4368*E4^2*X^2 - 4344*E4*E6*X - 1440*E4^3 + 746496*D";
pub const A5: &str = "-1890*E4*X^5 - 18720*E6*X^4 - 74160*E4^2*X^3 - 146880*E4*E6*X^2 - 145440*E4^3*X + 199065600*D*X - 57600*E4^2*E6";
pub const B5: &str = "-31260*E6*X^5 - 312480*E4^2*X^4 - 1249440*E4*E6*X^3 - 2497920*E4^3*X^2 + 763084800*D*X^2 - 2496960*E4^2*E6*X \
                      - 998400*E4^4 + 1725235200*D*E4";
pub const PHI6_E4: &str = include_str!("../data/phi6_e4.txt");

pub fn check_ab(ell: u64, fam: Family, want: &str) -> Check {
    let got = exact(ell, fam)?.to_ab_form().map_err(err)?;
    let want = parse_ab(want, fam, ell).map_err(err)?;
    ensure!(got.terms == want.terms, "{}_{ell} in (X, A, B): got {got}", fam.as_str());
    Ok(format!("{}_{ell}", fam.as_str()))
}

pub fn check_tri(got: &TriPoly, want: &str) -> Check {
    let w = parse_tri(want, got.family, got.ell).map_err(err)?;
    ensure!(same(got, &w), "{}_{}: got {got}", got.family.as_str(), got.ell);
    Ok(format!("{}_{}", got.family.as_str(), got.ell))
}

pub fn numerators(ell: u64) -> Result<(TriPoly, TriPoly), String> {
    compute_numerators_series(ell, &exact(ell, Family::U)?).map_err(err)
}

pub fn criterion1() -> Check {
    let mut done = vec![check_ab(2, Family::U, U2_AB)?, check_ab(3, Family::U, U3_AB)?, check_ab(5, Family::U, U5_AB)?];
    done.push(check_tri(&exact(5, Family::U)?, U5_E4)?);
    done.push(check_tri(&exact(3, Family::W)?, W3)?);
    for (ell, a, b) in [(3, A3, B3), (5, A5, B5)] {
        let (na, nb) = numerators(ell)?;
        done.push(check_tri(&na, a)?);
        done.push(check_tri(&nb, b)?);
    }
    let phi = compute_phi_exact(6, FormTag::E4, DEFAULT_ORDER_GUARD).map_err(err)?;
    ensure!(phi.terms.len() == 35, "Phi[E4(6 tau)] has {} terms", phi.terms.len());
    done.push(check_tri(&phi, PHI6_E4)?);
    Ok(format!("{} polynomials equal", done.len()))
}

// ---- cross-method agreement ----

pub fn cross_method(ell: u64, fam: Family) -> Check {
    let s = exact(ell, fam)?;
    let f = compute_fricke_float(ell, fam, &FloatParams::default()).map_err(err)?;
    ensure!(same(&s, &f.poly), "float differs from series for {}_{ell}", fam.as_str());
    let cp = ClassPoly::builtin_for(ell).map_err(err)?;
    let v = compute_volcano_exact(ell, fam, &cp, VOLCANO_PRIME_START, 1).map_err(err)?;
    ensure!(same(&s, &v.poly), "volcano CRT differs from series for {}_{ell}", fam.as_str());
    for &p in v.primes.iter().take(2) {
        let vp = volcano_params(ell, cp.disc, p).ok_or("volcano prime lost its parameters")?;
        let m = compute_family_mod(&vp, &cp, fam, 2).map_err(err)?;
        ensure!(same(&s.reduce_mod(p), &m), "volcano mod {p} differs for {}_{ell}", fam.as_str());
    }
    Ok(format!("{}_{ell}: {} volcano primes, float {} bits", fam.as_str(), v.primes.len(), f.prec))
}

pub fn criterion2() -> Check {
    let mut n = 0;
    for ell in [5, 7, 11, 13] {
        for fam in [Family::U, Family::V, Family::W] {
            cross_method(ell, fam)?;
            n += 1;
        }
    }
    Ok(format!("{n} (l, family) pairs agree across series, float and volcano"))
}

// ---- worked examples ----

pub fn sigma6_coefficients() -> Check {
    let order = 12;
    let set = power_sums_u(5, order, Integers).map_err(err)?;
    let e4 = eisenstein_series(2, order, Integers);
    let e6 = eisenstein_series(3, order, Integers);
    let d = delta_series(order, Integers);
    let form = express_weight(&set.sums[5], 12, &e4, &e6, &d).map_err(err)?;
    let c4 = form.get(&[3, 0, 0]).cloned().unwrap_or_default();
    let cd = form.get(&[0, 0, 1]).cloned().unwrap_or_default();
    ensure!(c4 == BigInt::from(1000320) && cd == BigInt::from(-534159360) && form.len() == 2, "sigma_6 = {form:?}");
    Ok("sigma_6 = 1000320 E4^3 - 534159360 D".into())
}

/// Printed rows `(rho, E4^3, Delta, sigma_6)`.
pub const L6_ROWS: [(&str, f64, f64, f64); 2] =
    [("1.1", 1.912407642, 0.0009726854527956, 1393450.57337539139), ("1.2", 1.435895343, 0.0005247501300701, 1156054.63606077432)];

pub fn l6_rows() -> Check {
    let prec = 256;
    for (r, row0, row1, rhs) in L6_ROWS {
        let nv = node_values(5, Family::U, &from_decimal(r, prec + 64).map_err(err)?, prec).map_err(err)?;
        let e4 = to_f64(&nv.e4);
        let got = [e4 * e4 * e4, to_f64(&nv.delta), to_f64(&nv.sigma[5])];
        for (g, w) in got.iter().zip([row0, row1, rhs]) {
            ensure!((g / w - 1.0).abs() < 1e-6, "rho = {r}: {g} vs {w}");
        }
    }
    Ok("rows at rho = 1.1, 1.2 within 1e-6".into())
}

pub const P1811: u64 = 1811;
pub const JD_1811: [u64; 7] = [313, 1073, 1288, 1312, 1402, 1767, 1808];
pub const POWER_SUMS_1811: [((u64, u64), [u64; 6]); 7] = [
    ((1582, 902), [0, 105, 1680, 1379, 756, 772]),
    ((1662, 405), [0, 527, 1188, 90, 748, 888]),
    ((1451, 1331), [0, 1723, 403, 350, 293, 583]),
    ((1013, 747), [0, 1133, 18, 1594, 1738, 105]),
    ((224, 753), [0, 95, 760, 1790, 1603, 27]),
    ((1128, 1504), [0, 155, 669, 1424, 1130, 522]),
    ((91, 725), [0, 1793, 1523, 589, 1233, 134]),
];
/// Table of neighbours `(A*, B*, kappa_1)` for the seven curves, in order.
pub const NEIGHBOURS_1811: [[(u64, u64, u64); 6]; 7] = [
    [(594, 422, 226), (1543, 911, 1542), (937, 1244, 1283), (1333, 561, 1691), (879, 342, 1212), (757, 1578, 1290)],
    [(1770, 433, 529), (1439, 1411, 1536), (259, 355, 1810), (382, 1793, 1733), (1472, 543, 433), (413, 1603, 1203)],
    [(1096, 1433, 743), (1371, 1367, 98), (1105, 1195, 207), (1657, 1699, 787), (811, 812, 1769), (779, 1311, 18)],
    [(1691, 473, 1705), (509, 342, 1245), (1642, 417, 1406), (127, 765, 1519), (905, 1464, 145), (1277, 254, 1224)],
    [(1485, 892, 1566), (823, 1106, 908), (397, 1451, 1729), (131, 673, 450), (654, 1798, 1353), (1805, 1025, 1238)],
    [(1275, 1672, 1176), (1409, 761, 1362), (907, 1757, 309), (824, 1267, 781), (578, 1320, 1208), (1168, 1207, 597)],
    [(1184, 542, 1284), (1753, 297, 859), (1440, 1524, 1268), (421, 410, 517), (1626, 1013, 245), (198, 159, 1260)],
];

pub fn sites_1811(seed: u64) -> Result<Vec<VolcanoSite>, String> {
    let cp = ClassPoly::builtin(-71).ok_or("missing H_-71")?;
    let vp = volcano_params(5, -71, P1811).ok_or("1811 is not a volcano prime")?;
    partial_volcano(&vp, &cp, seed).map_err(err)
}

pub fn volcano_1811() -> Check {
    let cp = ClassPoly::builtin(-71).ok_or("missing H_-71")?;
    ensure!(crater_js(&cp, P1811, 1).map_err(err)? == JD_1811.to_vec(), "H_D roots differ");
    let sites = sites_1811(1)?;
    let mut got: Vec<((u64, u64), Vec<u64>)> = Vec::new();
    for s in &sites {
        got.push(((s.curve.a, s.curve.b), site_power_sums(s, Family::U).map_err(err)?));
        let i = POWER_SUMS_1811.iter().position(|r| r.0 == (s.curve.a, s.curve.b)).ok_or("curve not in the table")?;
        let mut want = NEIGHBOURS_1811[i].to_vec();
        let mut nb: Vec<(u64, u64, u64)> = s.isogenies.iter().map(|r| (r.a_star, r.b_star, r.root())).collect();
        want.sort();
        nb.sort();
        ensure!(nb == want, "neighbours of {:?} differ", s.curve);
    }
    got.sort();
    let mut want: Vec<((u64, u64), Vec<u64>)> = POWER_SUMS_1811.iter().map(|(c, v)| (*c, v.to_vec())).collect();
    want.sort();
    ensure!(got == want, "power-sum array differs");
    let forms = sigma_forms_mod(&sites, 5, Family::U, P1811).map_err(err)?;
    let f = |v: &[([u32; 3], u64)]| v.iter().copied().collect::<BTreeMap<_, _>>();
    let expect = [
        f(&[([1, 0, 0], 120)]),
        f(&[([0, 1, 0], 960)]),
        f(&[([2, 0, 0], 1025)]),
        f(&[([1, 1, 0], 235)]),
        f(&[([3, 0, 0], 648), ([0, 0, 1], 523)]),
    ];
    ensure!(forms[1..6] == expect, "sigma forms differ: {:?}", &forms[1..]);
    Ok("H_D roots, power sums, neighbour table and sigma_2..sigma_6 at p = 1811".into())
}

pub fn atkin_1009() -> Check {
    let p = 1009;
    let (e4, e6, _) = Curve::new(1, 3, p).map_err(err)?.forms();
    let u = exact(5, Family::U)?;
    let ps = partials_at(&u, 584, e4, e6, p).map_err(err)?;
    ensure!((ps.dk, ps.d4, ps.d6) == (905, 779, 140), "partials {:?}", ps);
    ensure!(e4_tilde(5, 584, e4, e6, &ps, p).map_err(err)? == 497, "E4~");
    let rows = isogenous_from_u(5, 1, 3, &u, p).map_err(err)?;
    let hit = rows.iter().find(|r| r.0 == 584).ok_or("584 is not a root")?;
    let c = hit.1.as_ref().map_err(err)?;
    ensure!((c.a_star, c.b_star) == (441, 997), "A*, B* = {}, {}", c.a_star, c.b_star);
    Ok("partials (905, 779, 140), E4~ 497, A* 441, B* 997".into())
}

pub fn criterion3() -> Check {
    let parts = [sigma6_coefficients()?, l6_rows()?, volcano_1811()?, atkin_1009()?];
    Ok(parts.join("; "))
}

// ---- heights ----

/// `(l, table value, tolerance)`; the l = 3 entry is printed to two decimals.
pub const U_HEIGHTS: [(u64, f64, f64); 8] = [
    (3, 0.32, 0.005),
    (5, 0.526, 0.002),
    (7, 0.640, 0.002),
    (11, 0.670, 0.002),
    (13, 0.688, 0.002),
    (17, 0.690, 0.002),
    (19, 0.695, 0.002),
    (23, 0.698, 0.002),
];
/// `(l, [V, W, A, B])`
pub const VWAB_HEIGHTS: [(u64, [f64; 4]); 4] = [
    (5, [3.266, 4.336, 1.063, 1.268]),
    (7, [3.050, 4.207, 0.973, 1.167]),
    (11, [2.939, 3.979, 0.896, 1.016]),
    (13, [2.856, 3.969, 0.864, 0.983]),
];

pub fn height(t: &TriPoly) -> Result<f64, String> {
    t.to_ab_form().and_then(|a| a.relative_height()).map_err(err)
}

pub fn criterion4() -> Check {
    let mut worst: f64 = 0.0;
    for (ell, want, tol) in U_HEIGHTS {
        let h = height(&exact(ell, Family::U)?)?;
        ensure!((h - want).abs() <= tol, "H~(U_{ell}) = {h:.4}, table {want}");
        worst = worst.max((h - want).abs());
    }
    for (ell, want) in VWAB_HEIGHTS {
        let (a, b) = numerators(ell)?;
        let got = [height(&exact(ell, Family::V)?)?, height(&exact(ell, Family::W)?)?, height(&a)?, height(&b)?];
        for (name, (g, w)) in ["V", "W", "A", "B"].iter().zip(got.iter().zip(want)) {
            ensure!((g - w).abs() <= 0.002, "H~({name}_{ell}) = {g:.4}, table {w}");
            worst = worst.max((g - w).abs());
        }
    }
    Ok(format!("24 heights, largest deviation {worst:.4}"))
}

// ---- property suites ----

pub fn ramanujan_and_f7(order: usize) -> Check {
    let z = Integers;
    let e2 = eisenstein_series(1, order, z);
    let e4 = eisenstein_series(2, order, z);
    let e6 = eisenstein_series(3, order, z);
    ensure!(e4.q_derivative().scale_i64(3) == e2.mul(&e4).sub(&e6).truncate(order), "3qE4' = E2E4 - E6");
    ensure!(e6.q_derivative().scale_i64(2) == e2.mul(&e6).sub(&e4.square()).truncate(order), "2qE6' = E2E6 - E4^2");
    ensure!(e2.q_derivative().scale_i64(12) == e2.square().sub(&e4).truncate(order), "12qE2' = E2^2 - E4");
    let e2_7 = eisenstein_series(1, order / 7 + 1, z).expand(7).truncate(order);
    let lhs = e2.sub(&e2_7.scale_i64(7));
    let mut theta = vec![0i64; order];
    for m in -10i64..=10 {
        for n in -10i64..=10 {
            let e = m * m + m * n + 2 * n * n;
            if (e as usize) < order {
                theta[e as usize] += 1;
            }
        }
    }
    let th = QSeries::from_i64s(z, &theta);
    // constant terms force the sign: 1 - 7 = -6
    ensure!(lhs == th.square().scale_i64(-6).truncate(order), "F_7 identity");
    Ok(format!("Ramanujan system and F_7 identity to order {order}"))
}

fn euler_defect(f: &Poly3<BigRational>, deg: i64) -> bool {
    let q = Rationals;
    let mut acc: BTreeMap<[u32; 3], BigRational> = f.iter().map(|(k, v)| (*k, q.mul_i64(v, -deg))).collect();
    for (var, w) in [(0usize, 1i64), (1, 2), (2, 3)] {
        for (k, v) in poly3_derivative(&q, f, var) {
            let mut nk = k;
            nk[var] += 1;
            let e = acc.entry(nk).or_insert_with(|| q.zero());
            *e = q.add(e, &q.mul_i64(&v, w));
        }
    }
    acc.values().any(|v| !q.is_zero(v))
}

pub fn euler_identities(max_ell: u64) -> Check {
    let q = Rationals;
    let mut n = 0;
    for ell in (2..=max_ell).filter(|&l| arith::is_prime(l)) {
        let base = exact(ell, Family::U)?.substitute_delta(&q).map_err(err)?;
        let l = ell as i64;
        ensure!(!euler_defect(&base, l + 1), "(l+1)U identity fails for l = {ell}");
        ensure!(!euler_defect(&poly3_derivative(&q, &base, 0), l), "d_kappa identity fails for l = {ell}");
        ensure!(!euler_defect(&poly3_derivative(&q, &base, 1), l - 1), "d_4 identity fails for l = {ell}");
        ensure!(!euler_defect(&poly3_derivative(&q, &base, 2), l - 2), "d_6 identity fails for l = {ell}");
        n += 1;
    }
    Ok(format!("homogeneity identities exact for {n} levels"))
}

pub fn newton_round_trips(cases: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = PrimeField::new(1811);
    let q = Rationals;
    for _ in 0..cases {
        let n = rng.gen_range(1..=14);
        let c: Vec<u64> = (0..n).map(|_| rng.gen_range(0..1811)).collect();
        let p = coefficients_to_newton(&f, &c, |x, k| f.mul_i64(x, k as i64));
        ensure!(newton_to_coefficients(&f, &p).map_err(err)? == c, "mod 1811 round trip");
        let c: Vec<BigRational> = (0..n).map(|_| q.from_i64(rng.gen_range(-10_000..10_000))).collect();
        let p = coefficients_to_newton(&q, &c, |x, k| q.mul_i64(x, k as i64));
        ensure!(newton_to_coefficients(&q, &p).map_err(err)? == c, "rational round trip");
    }
    Ok(format!("{cases} Newton round trips"))
}

/// Per-site product of `X - root` against `U(X)` at the site, and the
/// difference formulas for `A - A*` and `B - B*` on every isogeny.
pub fn volcano_identities(sites: &[VolcanoSite], u: &TriPoly, p: u64) -> Check {
    let up = UPartials::new(u, p).map_err(err)?;
    let f = PrimeField::new(p);
    let mut isogenies = 0;
    for s in sites {
        let (e4, e6, _) = s.forms();
        let mut prod = vec![1u64];
        for r in &s.isogenies {
            prod = mul_full(&prod, &[negmod(r.root(), p), 1], p);
        }
        let mut uu = up.univariate(e4, e6);
        while uu.last() == Some(&0) {
            uu.pop();
        }
        ensure!(prod == uu, "root product differs from U at {:?}", s.curve);
        let (a, b) = (s.curve.a, s.curve.b);
        for r in &s.isogenies {
            let k = r.kappa;
            let da = f.mul_i64(&f.add(&f.mul_i64(&k[2], 6), &f.mul_i64(&f.mul(&a, &k[0]), 2)), 5);
            let db = f.mul_i64(&[f.mul_i64(&k[3], 10), f.mul_i64(&f.mul(&a, &k[1]), 6), f.mul_i64(&f.mul(&b, &k[0]), 4)].iter().fold(0, |s, x| f.add(&s, x)), 7);
            ensure!(f.sub(&a, &r.a_star) == da, "A - A* formula fails on {:?}", s.curve);
            ensure!(f.sub(&b, &r.b_star) == db, "B - B* formula fails on {:?}", s.curve);
            isogenies += 1;
        }
    }
    Ok(format!("{} sites, {isogenies} isogenies", sites.len()))
}

pub fn theta_vs_t(prec: usize, rhos: &[&str]) -> Check {
    let rm = RoundingMode::ToEven;
    let mut worst = f64::INFINITY;
    for r in rhos {
        let rho = from_decimal(r, prec + 64).map_err(err)?;
        let v = values_at_rho(&rho, prec).map_err(err)?;
        let mut ctx = EvalContext::new(prec + 32, 1);
        let q1 = ctx.nome(&rho, 2);
        let (a, b, c) = theta_values(&q1, prec);
        let (e4, e6, d) = e46_from_theta(&a, &b, &c, prec);
        for (x, y) in [(e4, &v.e4), (e6, &v.e6), (d, &v.delta)] {
            let rel = to_f64(&x.sub(y, prec, rm).abs()).abs() / to_f64(&y.abs());
            let bits = if rel == 0.0 { prec as f64 } else { -rel.log2() };
            ensure!(bits >= (prec - 12) as f64, "rho = {r}: only {bits:.1} bits agree");
            worst = worst.min(bits);
        }
    }
    Ok(format!("theta and T paths agree to {:.0} of {prec} bits", worst.min(prec as f64)))
}

pub fn primal_deficiency_11() -> Check {
    let cp = ClassPoly::builtin_for(11).map_err(err)?;
    let vp = fricke::volcano::volcano_primes(11, cp.disc, VOLCANO_PRIME_START, 1, &Default::default()).remove(0);
    let sites = partial_volcano(&vp, &cp, 1).map_err(err)?;
    let u = exact(11, Family::U)?.reduce_mod(vp.p);
    let mut out = Vec::new();
    for which in [Family::A, Family::B] {
        let (r, n) = numerator_rank(&sites[..2], 11, &u, which, vp.p, false).map_err(err)?;
        ensure!(r < n, "primal {} system has full rank {r}", which.as_str());
        let (rd, nd) = numerator_rank(&sites[..2], 11, &u, which, vp.p, true).map_err(err)?;
        ensure!(rd == nd, "dual {} system has rank {rd} < {nd}", which.as_str());
        out.push(format!("{}: primal {r}/{n}, dual {rd}/{nd}", which.as_str()));
    }
    Ok(out.join(", "))
}

pub fn criterion5() -> Check {
    let mut parts = vec![ramanujan_and_f7(50)?, euler_identities(13)?, newton_round_trips(50)?];
    let u5 = exact(5, Family::U)?.reduce_mod(P1811);
    parts.push(volcano_identities(&sites_1811(1)?, &u5, P1811)?);
    let cp = ClassPoly::builtin_for(13).map_err(err)?;
    let vp = fricke::volcano::volcano_primes(13, cp.disc, VOLCANO_PRIME_START, 1, &Default::default()).remove(0);
    let u13 = exact(13, Family::U)?.reduce_mod(vp.p);
    parts.push(volcano_identities(&partial_volcano(&vp, &cp, 1).map_err(err)?, &u13, vp.p)?);
    parts.push(theta_vs_t(256, &["1.1", "1.3", "1.7", "2.5"])?);
    parts.push(primal_deficiency_11()?);
    Ok(parts.join("; "))
}

// ---- scale ----

pub fn criterion6() -> Check {
    let start = std::time::Instant::now();
    let h = height(&exact(101, Family::U)?)?;
    ensure!((h - 0.778).abs() <= 0.005, "H~(U_101) = {h:.4}");
    Ok(format!("H~(U_101) = {h:.4} in {:.1} s", start.elapsed().as_secs_f64()))
}
