//! Hub-and-spoke configurations: one consumer (the hub) transacting with `n`
//! providers.

use core::cell::Cell;
use core::ops::RangeInclusive;

use alloc::vec::Vec;

use crate::bargaining::FeeSolution;
use crate::error::{Error, Result};
use crate::response::Response;
use crate::roots::{bisect, central_difference, Bisection};

/// Uniform hub: every provider brings the same terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubParams {
    pub v_p: f64,
    pub t_p: f64,
    /// Consumer value per provider.
    pub v_c: f64,
    /// Consumer cost per provider.
    pub t_c: f64,
    /// Hub's ex-ante investment.
    pub i_c: f64,
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubFeeSolution {
    /// Per-provider solution; `w_c` is the hub's surplus per provider after
    /// amortizing the investment.
    pub fee: FeeSolution,
    /// `i_c / n`
    pub amortized_investment: f64,
    /// `n·(v_c - x - t_c) - i_c`
    pub hub_net: f64,
}

/// Equal-split fee with the investment amortized over the providers:
/// `½[(v_c - v_p) - (t_c - t_p + i_c/n)]`.
pub fn uniform_hub_fee(p: &HubParams, eps: f64) -> Result<HubFeeSolution> {
    if p.n == 0 {
        return Err(Error::Precondition("hub needs at least one provider"));
    }
    let n = p.n as f64;
    let amortized = p.i_c / n;
    let net = (p.v_c + p.v_p) - (p.t_c + p.t_p + amortized);
    if !(net > eps) {
        return Err(Error::Infeasible { deficit: -net });
    }
    let x_star = 0.5 * ((p.v_c - p.v_p) - (p.t_c - p.t_p + amortized));
    let w_p = p.v_p + x_star - p.t_p;
    let w_c = p.v_c - x_star - p.t_c - amortized;
    Ok(HubFeeSolution {
        fee: FeeSolution {
            x_star,
            w_p,
            w_c,
            is_subsidy: x_star < 0.0,
            bargaining_range: (p.t_p - p.v_p, p.v_c - p.t_c - amortized),
        },
        amortized_investment: amortized,
        hub_net: n * (p.v_c - x_star - p.t_c) - p.i_c,
    })
}

/// Averaged hub terms with provider count left free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubAverages {
    pub v_c: f64,
    pub t_c: f64,
    pub t_p: f64,
    pub i_c: f64,
}

impl HubAverages {
    /// Net contribution of one more provider, `v_c - t_c - t_p`.
    pub fn per_provider_margin(&self) -> f64 {
        self.v_c - self.t_c - self.t_p
    }

    /// `n·(v_c - t_c) - n·t_p - i_c`
    pub fn margin(&self, n: u64) -> f64 {
        let n = n as f64;
        n * (self.v_c - self.t_c) - n * self.t_p - self.i_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProviderThreshold {
    /// `i_c / (v_c - t_c - t_p)`; infinite when the per-provider margin is
    /// not positive.
    pub n_tilde: f64,
    /// Smallest provider count with a strictly positive hub margin.
    pub n_min: Option<u64>,
}

pub fn provider_threshold(avg: &HubAverages, eps: f64) -> ProviderThreshold {
    let d = avg.per_provider_margin();
    if !(d > eps) {
        return ProviderThreshold {
            n_tilde: f64::INFINITY,
            n_min: None,
        };
    }
    let n_tilde = avg.i_c / d;
    let start = libm::ceil(n_tilde).max(1.0);
    if start >= u64::MAX as f64 {
        return ProviderThreshold { n_tilde, n_min: None };
    }
    let mut n = start as u64;
    while !(avg.margin(n) > eps) {
        n += 1;
    }
    ProviderThreshold {
        n_tilde,
        n_min: Some(n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub n: u64,
    pub margin: f64,
    pub feasible: bool,
}

/// Hub margin for each provider count in `n_range`.
pub fn hub_feasibility_curve(avg: &HubAverages, n_range: RangeInclusive<u64>, eps: f64) -> Vec<CurvePoint> {
    n_range
        .map(|n| {
            let margin = avg.margin(n);
            CurvePoint {
                n,
                margin,
                feasible: margin > eps,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Use the analytic derivative where the response provides one.
    #[default]
    Analytic,
    /// Always use central differences.
    CentralDifference,
}

/// Hub whose provider count responds to the fee, `n = n(X)`, with consumer
/// value and cost depending on `n`.
#[derive(Debug, Clone, Copy)]
pub struct ParametricHubModel<N, V, T> {
    pub n_of_x: N,
    pub v_c_of_n: V,
    pub t_c_of_n: T,
    pub v_p: f64,
    pub t_p: f64,
    pub derivative_mode: DerivativeMode,
}

impl<N: Response, V: Response, T: Response> ParametricHubModel<N, V, T> {
    pub fn supply(&self, x: f64) -> f64 {
        self.n_of_x.eval(x)
    }

    /// `n'(X)`
    pub fn supply_slope(&self, x: f64) -> f64 {
        derive(&self.n_of_x, x, self.derivative_mode)
    }

    /// `d/dn (V^C - T^C)` at `n`.
    pub fn marginal_net_value(&self, n: f64) -> f64 {
        derive(&self.v_c_of_n, n, self.derivative_mode) - derive(&self.t_c_of_n, n, self.derivative_mode)
    }

    /// Hub utility `V^C(n(X)) - n(X)·X - T^C(n(X))`.
    pub fn consumer_utility(&self, x: f64) -> f64 {
        let n = self.supply(x);
        self.v_c_of_n.eval(n) - n * x - self.t_c_of_n.eval(n)
    }

    /// Surplus of a single provider, `v_p + X - t_p`.
    pub fn provider_surplus(&self, x: f64) -> f64 {
        self.v_p + x - self.t_p
    }

    /// Aggregate provider surplus `∫ n(u) du` over `[from, to]` by the
    /// composite trapezoid rule.
    pub fn aggregate_provider_surplus(&self, from: f64, to: f64, panels: usize) -> f64 {
        let panels = panels.max(1);
        let h = (to - from) / panels as f64;
        let inner = (1..panels).fold(0.0, |acc, i| acc + self.supply(from + i as f64 * h));
        h * (0.5 * (self.supply(from) + self.supply(to)) + inner)
    }

    /// Total welfare at `x` with provider surplus measured from `from`.
    pub fn total_welfare(&self, x: f64, from: f64) -> f64 {
        self.consumer_utility(x) + self.aggregate_provider_surplus(from, x, WELFARE_PANELS)
    }
}

const WELFARE_PANELS: usize = 10_000;
const SUPPLY_SAMPLES: usize = 100;

fn derive<R: Response>(r: &R, x: f64, mode: DerivativeMode) -> f64 {
    match mode {
        DerivativeMode::Analytic => r
            .derivative(x)
            .unwrap_or_else(|| central_difference(|v| r.eval(v), x)),
        DerivativeMode::CentralDifference => central_difference(|v| r.eval(v), x),
    }
}

/// Samples the bracket: `n(X)` must be finite, non-negative and
/// non-decreasing, and strictly increasing beyond `eps` when `elastic`.
fn check_supply<N, V, T>(model: &ParametricHubModel<N, V, T>, bracket: (f64, f64), elastic: bool, eps: f64) -> Result<()>
where
    N: Response,
    V: Response,
    T: Response,
{
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Precondition("bracket must satisfy low < high"));
    }
    let mut prev: Option<f64> = None;
    for i in 0..=SUPPLY_SAMPLES {
        let x = lo + (hi - lo) * (i as f64 / SUPPLY_SAMPLES as f64);
        let n = model.supply(x);
        if !n.is_finite() {
            return Err(Error::EvaluationFailure { at: x });
        }
        if n < -eps || prev.is_some_and(|p| n < p - eps) {
            return Err(Error::InvalidSupply { at: x });
        }
        prev = Some(n);
        if elastic {
            let slope = model.supply_slope(x);
            if !(slope > eps) {
                return Err(Error::InelasticSupply { at: x, slope });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareOptimum {
    pub x_star: f64,
    pub n: f64,
    /// Condition value at the root.
    pub residual: f64,
    pub iterations: usize,
    /// `v_p + X - t_p > eps` at the solved fee (a warning only).
    pub provider_participation: bool,
}

/// Welfare-maximizing fee: solves `X = d/dn (V^C - T^C)` at `n = n(X)`.
pub fn welfare_max_fee<N, V, T>(model: &ParametricHubModel<N, V, T>, bracket: (f64, f64), eps: f64) -> Result<WelfareOptimum>
where
    N: Response,
    V: Response,
    T: Response,
{
    check_supply(model, bracket, false, eps)?;
    let condition = |x: f64| model.marginal_net_value(model.supply(x)) - x;
    let root = bisect(condition, bracket.0, bracket.1, &Bisection::default())?;
    Ok(WelfareOptimum {
        x_star: root.x,
        n: model.supply(root.x),
        residual: root.residual,
        iterations: root.iterations,
        provider_participation: model.provider_surplus(root.x) > eps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityOptimum {
    pub x_star: f64,
    pub n: f64,
    /// `n'(X)` at the solution.
    pub supply_slope: f64,
    /// `d/dn (V^C - T^C)` at the solution.
    pub marginal_value: f64,
    /// Supply elasticity `X·n'(X)/n(X)`.
    pub eta_p: f64,
    /// `(X - marginal)/X + 1/eta_p`; zero when the Lerner form holds.
    pub lerner_residual: f64,
    pub residual: f64,
    pub iterations: usize,
    pub provider_participation: bool,
}

/// Hub-utility-maximizing fee: solves
/// `X = d/dn (V^C - T^C)|_{n(X)} - n(X)/n'(X)`.
///
/// Requires `n'(X) > eps` across the bracket.
pub fn utility_max_fee<N, V, T>(model: &ParametricHubModel<N, V, T>, bracket: (f64, f64), eps: f64) -> Result<UtilityOptimum>
where
    N: Response,
    V: Response,
    T: Response,
{
    check_supply(model, bracket, true, eps)?;
    let inelastic = Cell::new(None);
    let condition = |x: f64| {
        let slope = model.supply_slope(x);
        if !(slope > eps) {
            inelastic.set(Some(Error::InelasticSupply { at: x, slope }));
            return f64::NAN;
        }
        let n = model.supply(x);
        model.marginal_net_value(n) - n / slope - x
    };
    let root = bisect(condition, bracket.0, bracket.1, &Bisection::default());
    if let Some(e) = inelastic.take() {
        return Err(e);
    }
    let root = root?;
    let x = root.x;
    let n = model.supply(x);
    let slope = model.supply_slope(x);
    let marginal = model.marginal_net_value(n);
    let eta_p = x * slope / n;
    Ok(UtilityOptimum {
        x_star: x,
        n,
        supply_slope: slope,
        marginal_value: marginal,
        eta_p,
        lerner_residual: (x - marginal) / x + 1.0 / eta_p,
        residual: root.residual,
        iterations: root.iterations,
        provider_participation: model.provider_surplus(x) > eps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelfareAnalysis {
    pub x_star_w: f64,
    pub x_star_c: f64,
    pub n_at_w: f64,
    pub n_at_c: f64,
    pub eta_p: f64,
    pub lerner_residual: f64,
    /// Total welfare at `x_star_w`, provider surplus integrated from the
    /// bracket's lower end.
    pub total_welfare: f64,
    /// Hub utility at `x_star_c`.
    pub consumer_utility: f64,
    pub welfare: WelfareOptimum,
    pub utility: UtilityOptimum,
}

/// Both optima of a parametric hub on the same bracket.
pub fn analyze_welfare<N, V, T>(model: &ParametricHubModel<N, V, T>, bracket: (f64, f64), eps: f64) -> Result<WelfareAnalysis>
where
    N: Response,
    V: Response,
    T: Response,
{
    let welfare = welfare_max_fee(model, bracket, eps)?;
    let utility = utility_max_fee(model, bracket, eps)?;
    Ok(WelfareAnalysis {
        x_star_w: welfare.x_star,
        x_star_c: utility.x_star,
        n_at_w: welfare.n,
        n_at_c: utility.n,
        eta_p: utility.eta_p,
        lerner_residual: utility.lerner_residual,
        total_welfare: model.total_welfare(welfare.x_star, bracket.0),
        consumer_utility: model.consumer_utility(utility.x_star),
        welfare,
        utility,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedRecovery {
    /// `v_c - t_c - ½ΣW`
    pub x_star: f64,
    /// `(v_c + v_p) - (t_c + t_p)`
    pub sigma_w: f64,
    /// `½[(v_c - v_p) - (t_c - t_p)]`
    pub closed_form: f64,
}

/// Utility-maximizing fee of a linearized hub where `n'(X*) = 2n*/ΣW`,
/// evaluated for averaged terms.
pub fn linearized_recovery(avg: &crate::model::TransactionTerms, eps: f64) -> Result<LinearizedRecovery> {
    let sigma_w = (avg.v_c + avg.v_p) - (avg.t_c + avg.t_p);
    if !(sigma_w > eps) {
        return Err(Error::Infeasible { deficit: -sigma_w });
    }
    Ok(LinearizedRecovery {
        x_star: avg.v_c - avg.t_c - 0.5 * sigma_w,
        sigma_w,
        closed_form: 0.5 * ((avg.v_c - avg.v_p) - (avg.t_c - avg.t_p)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoverableBound {
    /// Smallest `n <= n_max` with `alpha(n) - beta(n) - i_c > eps`.
    pub threshold: Option<u64>,
    /// Largest `alpha(n) - beta(n)` seen on `1..=n_max` (or up to the
    /// threshold) and where it occurred.
    pub best_net: f64,
    pub best_at: u64,
}

/// Scans cumulative consumer value `alpha(n)` against cumulative provider
/// cost `beta(n)` for the first provider count that recovers `i_c`.
///
/// A bounded `alpha - beta` may never recover the investment; `best_net`
/// then reports the ceiling reached.
pub fn recoverable_value_bound<A, B>(alpha: A, beta: B, i_c: f64, n_max: u64, eps: f64) -> RecoverableBound
where
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let mut best = RecoverableBound {
        threshold: None,
        best_net: f64::NEG_INFINITY,
        best_at: 0,
    };
    for n in 1..=n_max {
        let net = alpha(n as f64) - beta(n as f64);
        if net > best.best_net {
            best.best_net = net;
            best.best_at = n;
        }
        if net - i_c > eps {
            best.threshold = Some(n);
            break;
        }
    }
    best
}
