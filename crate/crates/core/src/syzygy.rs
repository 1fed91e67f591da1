//! Reading Betti tables: property `N_{d,p}`, regularity, projective dimension
//! and depth, and the Betti-number identities for projections.
//!
//! Tables store absolute internal degrees `d`; the slope `j = d - i` only
//! appears at the boundaries of these functions, through
//! [`slope_to_internal`].

use std::fmt;

use crate::error::{Error, Result};
use crate::koszul::{slope_to_internal, BettiTable};
use crate::poly::binomial;

/// Outcome of a check. `Inconclusive` means the table does not determine the
/// answer, never that the property fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
        }
    }

    /// Fail dominates inconclusive, which dominates pass.
    pub fn and(self, other: Status) -> Status {
        self.max(other)
    }

    pub fn all(it: impl IntoIterator<Item = Status>) -> Status {
        it.into_iter().fold(Status::Pass, Status::and)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Nonzero and unknown entries of column `i` with internal degree in `lo..=hi`
/// (`hi = None`: unbounded above).
#[derive(Clone, Debug, Default)]
struct Scan {
    nonzero: Vec<(u32, u64)>,
    unknown: Option<u32>,
}

fn scan(b: &BettiTable, i: u32, lo: u32, hi: Option<u32>) -> Scan {
    let mut out = Scan::default();
    if i as usize > b.col_bound {
        return out;
    }
    let lo = lo.max(i);
    let top = match (hi, b.row_bound) {
        (Some(h), Some(r)) => h.min(i + r),
        (Some(h), None) => h,
        (None, Some(r)) => i + r,
        (None, None) => {
            out.unknown = Some(b.window.max_d.max(lo) + 1);
            b.window.max_d
        }
    };
    for m in lo..=top {
        match b.get(i, m) {
            Some(0) => {}
            Some(v) => out.nonzero.push((m, v)),
            None => {
                out.unknown.get_or_insert(m);
            }
        }
    }
    if let Some(u) = out.unknown {
        // keep the smallest unknown degree
        let first = (lo..=top).find(|&m| b.get(i, m).is_none()).unwrap_or(u);
        out.unknown = Some(first.min(u));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdpReport {
    pub d: u32,
    pub p: u32,
    pub status: Status,
    /// First nonzero `β_{i,m}` with `m ≥ d + i`: `(i, m, β)`.
    pub witness: Option<(u32, u32, u64)>,
    /// First entry of the tested region the table does not determine.
    pub unknown: Option<(u32, u32)>,
}

impl fmt::Display for NdpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N_{{{},{}}}: {}", self.d, self.p, self.status)?;
        if let Some((i, m, v)) = self.witness {
            write!(f, " (witness beta_{{{i},{m}}} = {v})")?;
        } else if let Some((i, m)) = self.unknown {
            write!(f, " (beta_{{{i},{m}}} not determined)")?;
        }
        Ok(())
    }
}

impl NdpReport {
    pub fn to_tsv(&self) -> String {
        let w = match (self.witness, self.unknown) {
            (Some((i, m, v)), _) => format!("{i},{m},{v}"),
            (None, Some((i, m))) => format!("{i},{m},?"),
            _ => "-".into(),
        };
        format!("N_{},{}\t{}\t{}\n", self.d, self.p, self.status, w)
    }
}

/// Property `N_{d,p}`: `β_{i,m} = 0` for all `i ≤ p` and `m ≥ d + i`.
pub fn check_ndp(b: &BettiTable, d: u32, p: u32) -> NdpReport {
    let mut witness = None;
    let mut unknown = None;
    for i in 0..=p {
        let s = scan(b, i, d + i, None);
        if witness.is_none() {
            if let Some(&(m, v)) = s.nonzero.first() {
                witness = Some((i, m, v));
            }
        }
        if unknown.is_none() {
            unknown = s.unknown.map(|m| (i, m));
        }
    }
    let status = if witness.is_some() {
        Status::Fail
    } else if unknown.is_some() {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    NdpReport { d, p, status, witness, unknown }
}

/// `β_{i,m} = 0` for `1 ≤ i ≤ p` unless `m = i + d - 1`.
pub fn check_linear_to_step(b: &BettiTable, d: u32, p: u32) -> Status {
    let mut st = check_ndp(b, d, p).status;
    for i in 1..=p {
        let lo = scan(b, i, i, Some((i + d).saturating_sub(2)));
        if !lo.nonzero.is_empty() {
            st = st.and(Status::Fail);
        } else if lo.unknown.is_some() {
            st = st.and(Status::Inconclusive);
        }
    }
    st
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Regularity {
    /// `max {d - i : β_{i,d} ≠ 0}` over known entries; `None` for the zero module.
    pub value: Option<u32>,
    /// No unknown entry could raise the value.
    pub certified: bool,
}

impl fmt::Display for Regularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.value.map_or("-inf".to_string(), |v| v.to_string());
        if self.certified {
            write!(f, "{v}")
        } else {
            write!(f, ">= {v}")
        }
    }
}

pub fn regularity(b: &BettiTable) -> Regularity {
    let value = b.nonzero().map(|((i, d), _)| d - i).max();
    let from = value.map_or(0, |v| v + 1);
    let certified = match b.row_bound {
        None => false,
        Some(r) => (0..=b.col_bound as u32).all(|i| (from..=r).all(|j| b.get(i, slope_to_internal(i, j)).is_some())),
    };
    Regularity { value, certified }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PdDepth {
    pub pd: u32,
    /// `N - pd` (Auslander–Buchsbaum).
    pub depth: i64,
    /// When false `pd` is only a lower bound and `depth` an upper bound.
    pub certified: bool,
}

impl fmt::Display for PdDepth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.certified {
            write!(f, "pd {} depth {}", self.pd, self.depth)
        } else {
            write!(f, "pd >= {} depth <= {}", self.pd, self.depth)
        }
    }
}

/// Projective dimension and depth over a ring with `n_vars` variables.
pub fn pd_depth(b: &BettiTable, n_vars: usize) -> PdDepth {
    let pd = b.max_nonzero_i().unwrap_or(0);
    let certified = match b.row_bound {
        None => pd as usize >= b.col_bound,
        Some(r) => (pd + 1..=b.col_bound as u32).all(|i| (i..=i + r).all(|d| b.get(i, d).is_some())),
    };
    PdDepth { pd, depth: n_vars as i64 - pd as i64, certified }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRow {
    pub i: u32,
    pub lhs: Option<i64>,
    pub rhs: Option<i64>,
}

impl IdentityRow {
    pub fn residual(&self) -> Option<i64> {
        Some(self.lhs? - self.rhs?)
    }
}

fn rows_status(rows: &[IdentityRow]) -> Status {
    Status::all(rows.iter().map(|r| match r.residual() {
        Some(0) => Status::Pass,
        Some(_) => Status::Fail,
        None => Status::Inconclusive,
    }))
}

fn signed(b: &BettiTable, i: u32, d: u32) -> Option<i64> {
    b.get(i, d).map(|v| v as i64)
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor23Report {
    pub d: u32,
    pub p: u32,
    /// `β^{S_1}_{i,i+d-1}` against `(-1)^i + Σ_{j ≤ i} (-1)^{i+j} β^R_{j,j+d-1}`.
    pub rows: Vec<IdentityRow>,
    /// `Tor_0^{S_1}` is one-dimensional in each degree `0..d` and zero above.
    pub generators: Status,
    pub status: Status,
}

/// Betti numbers over `S_1` of an ideal that is `d`-linear to step `p` over `R`.
pub fn check_cor23(b_r: &BettiTable, b_s1: &BettiTable, d: u32, p: u32) -> Result<Cor23Report> {
    if d == 0 {
        return Err(Error::Hypothesis("generation degree must be positive".into()));
    }
    match check_linear_to_step(b_r, d, p) {
        Status::Pass => {}
        Status::Fail => return Err(Error::Hypothesis(format!("ideal is not {d}-linear to step {p}"))),
        Status::Inconclusive => return Err(Error::Hypothesis(format!("table does not certify {d}-linearity to step {p}"))),
    }
    let rows: Vec<IdentityRow> = (1..p)
        .map(|i| {
            let lhs = signed(b_s1, i, slope_to_internal(i, d - 1));
            let rhs = (1..=i).try_fold(sign(i), |acc, j| Some(acc + sign(i + j) * signed(b_r, j, slope_to_internal(j, d - 1))?));
            IdentityRow { i, lhs, rhs }
        })
        .collect();
    let mut generators = Status::all((0..d).map(|m| match b_s1.get(0, m) {
        Some(1) => Status::Pass,
        Some(_) => Status::Fail,
        None => Status::Inconclusive,
    }));
    let above = scan(b_s1, 0, d, None);
    if !above.nonzero.is_empty() {
        generators = generators.and(Status::Fail);
    } else if above.unknown.is_some() {
        generators = generators.and(Status::Inconclusive);
    }
    let status = rows_status(&rows).and(generators);
    Ok(Cor23Report { d, p, rows, generators, status })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm26Report {
    pub d: u32,
    pub p: u32,
    pub t: u32,
    /// `(degree, measured, expected)` for `Tor_0` in degrees `0..d`.
    pub tor0: Vec<(u32, Option<u64>, u64)>,
    /// Nonzero entries outside the predicted shape: `(i, m, β)`.
    pub violations: Vec<(u32, u32, u64)>,
    pub status: Status,
}

/// Shape of the table of `R/I` over `S_t` when `I` satisfies `N_{d,p}`:
/// `Tor_0` in degrees `0..d` of dimensions `C(m+t-1, t-1)`, and `Tor_α`
/// concentrated in degree `α + d - 1` for `1 ≤ α ≤ p - t`.
pub fn check_thm26_shape(b: &BettiTable, d: u32, p: u32, t: u32) -> Result<Thm26Report> {
    if t == 0 || t > p {
        return Err(Error::Range(format!("need 1 <= t <= p, got t = {t}, p = {p}")));
    }
    if d == 0 {
        return Err(Error::Range("generation degree must be positive".into()));
    }
    let mut status = Status::Pass;
    let mut tor0 = Vec::new();
    for m in 0..d {
        let expected = binomial((m + t - 1) as usize, (t - 1) as usize) as u64;
        let got = b.get(0, m);
        status = status.and(match got {
            Some(v) if v == expected => Status::Pass,
            Some(_) => Status::Fail,
            None => Status::Inconclusive,
        });
        tor0.push((m, got, expected));
    }
    let mut violations = Vec::new();
    let mut record = |i: u32, s: Scan, status: &mut Status| {
        for (m, v) in s.nonzero {
            violations.push((i, m, v));
            *status = status.and(Status::Fail);
        }
        if s.unknown.is_some() {
            *status = status.and(Status::Inconclusive);
        }
    };
    record(0, scan(b, 0, d, None), &mut status);
    for a in 1..=p - t {
        let target = a + d - 1;
        record(a, scan(b, a, a, Some(target - 1)), &mut status);
        record(a, scan(b, a, target + 1, None), &mut status);
    }
    Ok(Thm26Report { d, p, t, tor0, violations, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SecantBound {
    pub p: u32,
    /// `β_{p+1,p+3}`, reported separately from the bound.
    pub beta: u64,
    pub bound: u64,
}

/// `p + 2 + min(p + 1, β_{p+1,p+3})` for a table satisfying `N_{2,p}` and `N_{3,p+1}`.
pub fn secant_bound_thm29c(b: &BettiTable, p: u32) -> Result<SecantBound> {
    let n2 = check_ndp(b, 2, p);
    let n3 = check_ndp(b, 3, p + 1);
    if n2.status != Status::Pass || n3.status != Status::Pass {
        return Err(Error::Hypothesis(format!("{n2}; {n3}")));
    }
    let beta = b
        .get(p + 1, slope_to_internal(p + 1, 2))
        .ok_or_else(|| Error::Hypothesis(format!("beta_{{{},{}}} not determined", p + 1, p + 3)))?;
    let bound = (p as u64) + 2 + beta.min(p as u64 + 1);
    Ok(SecantBound { p, beta, bound })
}

/// Right-hand side of the projection identity at step `i`:
/// `C(n-s-1, i+1) + (-1)^i + Σ_{1 ≤ j ≤ i+1} (-1)^{i+j} β^R_{j,j+1}(R/I_X)`.
pub fn remark42_rhs(b_x: &BettiTable, n: u32, s: i64, i: u32) -> Option<i64> {
    let top = n as i64 - s - 1;
    let c = if top < 0 { 0 } else { binomial(top as usize, i as usize + 1) as i64 };
    (1..=i + 1).try_fold(c + sign(i), |acc, j| Some(acc + sign(i + j) * signed(b_x, j, slope_to_internal(j, 1))?))
}

/// `β_{i,i+2}(S/I_Y) - β_{i+1,i+2}(S/I_Y)` against [`remark42_rhs`] for each `i`.
pub fn check_remark42(b_y: &BettiTable, b_x: &BettiTable, n: u32, s: i64, range: std::ops::RangeInclusive<u32>) -> Vec<IdentityRow> {
    range
        .map(|i| {
            let lhs = (|| Some(signed(b_y, i, slope_to_internal(i, 2))? - signed(b_y, i + 1, slope_to_internal(i + 1, 1))?))();
            IdentityRow { i, lhs, rhs: remark42_rhs(b_x, n, s, i) }
        })
        .collect()
}

/// A positive right-hand side at `i = 1` forces cubic generators of `I_Y`.
pub fn forces_cubic_generators(b_x: &BettiTable, n: u32, s: i64) -> Option<bool> {
    remark42_rhs(b_x, n, s, 1).map(|v| v > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldKind, PrimeField};
    use crate::groebner::Ideal;
    use crate::koszul::{betti_numbers, BettiWindow};
    use crate::poly::{MonomialOrder, Ring};
    use std::collections::BTreeMap;

    fn table(label: &str, nvars: usize, max_i: u32, max_d: u32, nz: &[((u32, u32), u64)]) -> BettiTable {
        let mut e = BTreeMap::new();
        for i in 0..=max_i {
            for d in i..=max_d {
                e.insert((i, d), 0);
            }
        }
        for &(k, v) in nz {
            e.insert(k, v);
        }
        BettiTable::from_entries(label, FieldKind::Prime(32003), nvars, BettiWindow::new(max_i, max_d), e)
    }

    fn ring(n: usize) -> Ring<PrimeField> {
        Ring::with_prefix(PrimeField::default_field(), "x", n, MonomialOrder::Deglex)
    }

    fn tc_table() -> BettiTable {
        let i = Ideal::from_strs(ring(4), &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]).unwrap();
        betti_numbers(&i, 0, BettiWindow::new(4, 6), None).unwrap()
    }

    #[test]
    fn ndp_examples() {
        let tc = tc_table();
        assert_eq!(check_ndp(&tc, 2, 2).status, Status::Pass);
        let cubic = Ideal::from_strs(ring(3), &["x0^3 + x1^3 + x2^3"]).unwrap();
        let b = betti_numbers(&cubic, 0, BettiWindow::new(3, 6), None).unwrap();
        let r = check_ndp(&b, 2, 1);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witness, Some((1, 3, 1)));
        assert!(r.to_string().contains("witness"));
    }

    #[test]
    fn uncertified_region_is_inconclusive_not_fail() {
        let b = table("R", 4, 2, 3, &[((0, 0), 1), ((1, 2), 3), ((2, 3), 2)]);
        let r = check_ndp(&b, 2, 2);
        assert_eq!(r.status, Status::Inconclusive);
        assert!(r.witness.is_none());
        assert_eq!(Status::Inconclusive.exit_code(), 2);
        let reg = regularity(&b);
        assert_eq!(reg, Regularity { value: Some(1), certified: false });
        assert_eq!(reg.to_string(), ">= 1");
    }

    #[test]
    fn regularity_and_depth_examples() {
        let zero = Ideal::zero(ring(3));
        let b = betti_numbers(&zero, 0, BettiWindow::new(3, 4), None).unwrap();
        assert_eq!(regularity(&b), Regularity { value: Some(0), certified: true });
        assert_eq!(pd_depth(&b, 3), PdDepth { pd: 0, depth: 3, certified: true });
        let tc = tc_table();
        assert_eq!(regularity(&tc), Regularity { value: Some(1), certified: true });
        assert_eq!(pd_depth(&tc, 4), PdDepth { pd: 2, depth: 2, certified: true });
    }

    #[test]
    fn regularity_never_decreases_with_larger_windows() {
        let i = Ideal::from_strs(ring(3), &["x0^2", "x0*x1", "x1^4", "x2^3*x0"]).unwrap();
        let mut last: Option<u32> = None;
        for max_d in 2..=9 {
            let b = betti_numbers(&i, 0, BettiWindow::new(3, max_d), None).unwrap();
            let r = regularity(&b);
            if let (Some(prev), Some(v)) = (last, r.value) {
                assert!(v >= prev);
            }
            last = r.value;
        }
        let b = betti_numbers(&i, 0, BettiWindow::new(3, 9), None).unwrap();
        assert!(regularity(&b).certified);
    }

    #[test]
    fn cor23_formula_on_eagon_northcott_values() {
        // rational normal quartic: 2-linear with β_{i,i+1} = 6, 8, 3
        let br = table("R", 5, 4, 7, &[((0, 0), 1), ((1, 2), 6), ((2, 3), 8), ((3, 4), 3)]).with_bounds(Some(1), 3);
        let bs = table("S_1", 4, 4, 7, &[((0, 0), 1), ((0, 1), 1), ((1, 2), 5), ((2, 3), 3)]).with_bounds(Some(1), 3);
        let rep = check_cor23(&br, &bs, 2, 3).unwrap();
        assert_eq!(rep.rows.iter().map(|r| (r.lhs, r.rhs)).collect::<Vec<_>>(), vec![(Some(5), Some(5)), (Some(3), Some(3))]);
        assert_eq!(rep.generators, Status::Pass);
        assert_eq!(rep.status, Status::Pass);
        let cubic = table("R", 3, 2, 5, &[((0, 0), 1), ((1, 3), 1)]).with_bounds(Some(2), 1);
        assert!(matches!(check_cor23(&cubic, &bs, 2, 1), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn thm26_generator_dimensions() {
        let b = table("S_2", 3, 3, 6, &[((0, 0), 1), ((0, 1), 2), ((1, 2), 4)]).with_bounds(Some(1), 3);
        let rep = check_thm26_shape(&b, 2, 3, 2).unwrap();
        assert_eq!(rep.tor0, vec![(0, Some(1), 1), (1, Some(2), 2)]);
        assert_eq!(rep.status, Status::Pass);
        let bad = table("S_1", 3, 3, 6, &[((0, 0), 1), ((0, 1), 1), ((1, 3), 2)]).with_bounds(Some(2), 3);
        let rep = check_thm26_shape(&bad, 2, 3, 1).unwrap();
        assert_eq!(rep.status, Status::Fail);
        assert_eq!(rep.violations, vec![(1, 3, 2)]);
        assert!(check_thm26_shape(&b, 2, 3, 0).is_err());
    }

    #[test]
    fn secant_bound_formula() {
        // N_{2,2} with a single β_{3,5}
        let b = table("R", 6, 4, 9, &[((0, 0), 1), ((1, 2), 5), ((2, 3), 5), ((3, 5), 1), ((3, 4), 2)]).with_bounds(Some(2), 4);
        assert_eq!(secant_bound_thm29c(&b, 2).unwrap(), SecantBound { p: 2, beta: 1, bound: 5 });
        let lin = table("R", 4, 3, 8, &[((0, 0), 1), ((1, 2), 3), ((2, 3), 2)]).with_bounds(Some(1), 3);
        assert_eq!(secant_bound_thm29c(&lin, 1).unwrap().bound, 3);
        let cubic = table("R", 3, 2, 5, &[((0, 0), 1), ((1, 3), 1)]).with_bounds(Some(2), 1);
        assert_eq!(secant_bound_thm29c(&cubic, 0).unwrap(), SecantBound { p: 0, beta: 1, bound: 3 });
        assert!(secant_bound_thm29c(&cubic, 1).is_err());
    }

    #[test]
    fn remark42_on_scroll_strata_numbers() {
        let bx = table("R", 9, 6, 8, &[((0, 0), 1), ((1, 2), 15), ((2, 3), 40), ((3, 4), 45), ((4, 5), 24), ((5, 6), 5)]);
        for (s, cubics, syz, expected) in [(-1i64, 10u64, 8u64, 2i64), (0, 3, 8, -5), (1, 1, 12, -11), (2, 0, 16, -16)] {
            let by = table("S", 8, 3, 5, &[((1, 3), cubics), ((2, 3), syz)]);
            let rows = check_remark42(&by, &bx, 8, s, 1..=1);
            assert_eq!(rows[0].rhs, Some(expected));
            assert_eq!(rows[0].residual(), Some(0));
        }
        assert_eq!(forces_cubic_generators(&bx, 8, -1), Some(true));
        assert_eq!(forces_cubic_generators(&bx, 8, 2), Some(false));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn ndp_is_monotone_in_p(entries in proptest::collection::vec(((0u32..5, 0u32..4), 0u64..3), 0..12), d in 1u32..4, p in 0u32..5) {
            let nz: Vec<((u32, u32), u64)> = entries.into_iter().map(|((i, j), v)| ((i, i + j), v)).collect();
            let b = table("R", 5, 5, 9, &nz).with_bounds(Some(4), 5);
            if check_ndp(&b, d, p).status == Status::Pass {
                for q in 0..=p {
                    proptest::prop_assert_eq!(check_ndp(&b, d, q).status, Status::Pass);
                }
            }
        }
    }
}
