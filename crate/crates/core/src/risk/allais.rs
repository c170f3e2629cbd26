//! The common-ratio pattern under rank-dependent weighting, and the
//! weighted-versus-linear probability curve.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::prefcore::{bisect_monotone, tk_weight, Cell, Lottery, RiskModel, Table, DEFAULT_TOL};

/// Prizes of the common-ratio lotteries, best first.
pub const ALLAIS_PRIZES: [f64; 3] = [4000.0, 3000.0, 0.0];

/// Mixture weight on the sure 3000 of the amended lottery.
pub const AMENDED_WEIGHT: f64 = 0.27;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CptParams {
    pub value_exponent: f64,
    pub weight_exponent: f64,
}

impl Default for CptParams {
    fn default() -> Self {
        Self {
            value_exponent: 0.54,
            weight_exponent: 0.74,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllaisReport {
    pub params: CptParams,
    pub u_a: f64,
    pub u_b: f64,
    pub u_c: f64,
    pub u_d: f64,
    /// `0.27 B + 0.73 * 0`.
    pub u_d_amended: f64,
    pub b_over_a: bool,
    pub c_over_d: bool,
    pub amended_over_c: bool,
    /// Weight `lambda` at which `lambda B + (1 - lambda) 0 ~ C`.
    pub lambda_star: f64,
}

impl AllaisReport {
    pub fn pattern_holds(&self) -> bool {
        self.b_over_a && self.c_over_d && self.amended_over_c
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["lottery", "p_4000", "p_3000", "p_0", "value"]);
        let rows = [
            (0usize, [0.8, 0.0, 0.2], self.u_a),
            (1, [0.0, 1.0, 0.0], self.u_b),
            (2, [0.2, 0.0, 0.8], self.u_c),
            (3, [0.0, 0.25, 0.75], self.u_d),
            (
                4,
                [0.0, AMENDED_WEIGHT, 1.0 - AMENDED_WEIGHT],
                self.u_d_amended,
            ),
        ];
        for (i, p, v) in rows {
            t.push(vec![
                Cell::from(i),
                p[0].into(),
                p[1].into(),
                p[2].into(),
                v.into(),
            ]);
        }
        t
    }
}

pub fn allais_report(params: CptParams) -> Result<AllaisReport> {
    let model = RiskModel::Cpt {
        prizes: ALLAIS_PRIZES.to_vec(),
        value_exponent: params.value_exponent,
        weight_exponent: params.weight_exponent,
    };
    model.validate()?;
    let value = |p: [f64; 3]| -> Result<f64> { Ok(model.value(&Lottery::new(p.to_vec())?)) };
    let u_a = value([0.8, 0.0, 0.2])?;
    let u_b = value([0.0, 1.0, 0.0])?;
    let u_c = value([0.2, 0.0, 0.8])?;
    let u_d = value([0.0, 0.25, 0.75])?;
    let u_d_amended = value([0.0, AMENDED_WEIGHT, 1.0 - AMENDED_WEIGHT])?;
    let lambda_star = bisect_monotone(
        |l| model.value(&Lottery::degenerate(3, 1).mix(&Lottery::degenerate(3, 2), l)) - u_c,
        0.0,
        1.0,
        DEFAULT_TOL,
    )?;
    Ok(AllaisReport {
        params,
        u_a,
        u_b,
        u_c,
        u_d,
        u_d_amended,
        b_over_a: u_b > u_a,
        c_over_d: u_c > u_d,
        amended_over_c: u_d_amended > u_c,
        lambda_star,
    })
}

/// Weighted probability `g(p)` against the linear `p` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1 {
    pub table: Table,
    /// `max |g(p) - p|` after refinement.
    pub max_deviation: f64,
    pub argmax: f64,
}

/// Tolerance of the golden-section refinement of the maximizer.
const REFINE_TOL: f64 = 1e-12;

pub fn figure1_data(resolution: usize, weight_exponent: f64) -> Figure1 {
    assert!(resolution >= 1001, "resolution must be at least 1001");
    let diff = |p: f64| tk_weight(p, weight_exponent) - p;
    let mut table = Table::new(&["p", "cpt_value", "eu_value", "difference"]);
    let mut best = (0.0f64, 0.0f64);
    for i in 0..resolution {
        let p = if i == resolution - 1 {
            1.0
        } else {
            i as f64 / (resolution - 1) as f64
        };
        let d = diff(p);
        table.push(vec![
            p.into(),
            tk_weight(p, weight_exponent).into(),
            p.into(),
            d.into(),
        ]);
        if d.abs() > best.1 {
            best = (p, d.abs());
        }
    }
    let h = 1.0 / (resolution - 1) as f64;
    let (lo, hi) = ((best.0 - h).max(0.0), (best.0 + h).min(1.0));
    let x = golden_max(|p| diff(p).abs(), lo, hi, REFINE_TOL);
    let refined = diff(x).abs();
    let (argmax, max_deviation) = if refined > best.1 { (x, refined) } else { best };
    Figure1 {
        table,
        max_deviation,
        argmax,
    }
}

/// Golden-section search for the maximizer of a unimodal `f` on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amended_lottery_reverses_the_second_choice() {
        let r = allais_report(CptParams::default()).unwrap();
        assert!(r.pattern_holds());
        assert!(r.lambda_star > 0.25 && r.lambda_star < 0.27);
    }

    #[test]
    fn curve_vanishes_at_endpoints() {
        let fig = figure1_data(1001, 0.74);
        let diffs = fig.table.column("difference").unwrap();
        assert_eq!(diffs[0], 0.0);
        assert_eq!(*diffs.last().unwrap(), 0.0);
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let x = golden_max(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
    }
}
