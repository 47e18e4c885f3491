//! Brute-force grid maximizers.
//!
//! These evaluate the objectives directly from the model's response
//! functions and never touch the first-order conditions, so they can check
//! the closed forms and root finders independently.

use crate::error::{Error, Result};
use crate::hub::ParametricHubModel;
use crate::model::TransactionTerms;
use crate::response::Response;

const MAX_GRID_POINTS: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    low: f64,
    high: f64,
    step: f64,
    intervals: usize,
}

impl GridSpec {
    pub fn new(low: f64, high: f64, step: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && low < high) {
            return Err(Error::InvalidGrid("bounds must satisfy low < high"));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid("step must be positive"));
        }
        let span = (high - low) / step;
        if span > MAX_GRID_POINTS {
            return Err(Error::InvalidGrid("more than 1e7 grid steps"));
        }
        // tolerate a last point that misses `high` by rounding only
        let intervals = libm::floor(span + 1e-9) as usize;
        Ok(GridSpec {
            low,
            high,
            step,
            intervals,
        })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// `low + i·step` for `i = 0..=floor((high - low)/step)`.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.intervals).map(move |i| self.low + i as f64 * self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMax {
    pub x_hat: f64,
    pub value: f64,
}

/// First point with the largest value; ties keep the smaller `x`.
fn argmax<I, F>(points: I, mut objective: F) -> Result<GridMax>
where
    I: Iterator<Item = f64>,
    F: FnMut(f64) -> f64,
{
    let mut best: Option<GridMax> = None;
    for x in points {
        let value = objective(x);
        if !value.is_finite() {
            return Err(Error::EvaluationFailure { at: x });
        }
        if best.is_none_or(|b| value > b.value) {
            best = Some(GridMax { x_hat: x, value });
        }
    }
    best.ok_or(Error::InvalidGrid("empty grid"))
}

fn hub_utility<N: Response, V: Response, T: Response>(m: &ParametricHubModel<N, V, T>, x: f64) -> f64 {
    let n = m.n_of_x.eval(x);
    m.v_c_of_n.eval(n) - n * x - m.t_c_of_n.eval(n)
}

/// Maximizes total welfare `W^C(X) + ∫_low^X n(u) du` on the grid, with the
/// integral accumulated by trapezoids of one grid step.
pub fn grid_max_welfare<N, V, T>(model: &ParametricHubModel<N, V, T>, g: &GridSpec) -> Result<GridMax>
where
    N: Response,
    V: Response,
    T: Response,
{
    let mut surplus = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    argmax(g.points(), |x| {
        let n = model.n_of_x.eval(x);
        if let Some((px, pn)) = prev {
            surplus += 0.5 * (x - px) * (n + pn);
        }
        prev = Some((x, n));
        hub_utility(model, x) + surplus
    })
}

/// Maximizes the hub's utility `V^C(n(X)) - n(X)·X - T^C(n(X))` on the grid.
pub fn grid_max_consumer<N, V, T>(model: &ParametricHubModel<N, V, T>, g: &GridSpec) -> Result<GridMax>
where
    N: Response,
    V: Response,
    T: Response,
{
    argmax(g.points(), |x| hub_utility(model, x))
}

/// Fee on the grid maximizing `min(W^P, W^C)`.
pub fn grid_equal_split(terms: &TransactionTerms, g: &GridSpec, eps: f64) -> Result<f64> {
    let net = (terms.v_c + terms.v_p) - (terms.t_c + terms.t_p);
    if !(net > eps) {
        return Err(Error::Infeasible { deficit: -net });
    }
    let best = argmax(g.points(), |x| {
        let w_p = terms.v_p + x - terms.t_p;
        let w_c = terms.v_c - x - terms.t_c;
        w_p.min(w_c)
    })?;
    Ok(best.x_hat)
}
