//! Averaged feasibility of `n` consumers and `m` providers, the `(n, m)`
//! viability region and engagement preferences.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Averages of an ecosystem without provider-side fringe benefits.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ViabilityParams {
    pub v_c: f64,
    pub t_c: f64,
    pub i_c: f64,
    pub t_p: f64,
}

impl ViabilityParams {
    /// `n·(v_c - t_c - i_c) - m·t_p`
    pub fn margin(&self, n: u64, m: u64) -> f64 {
        n as f64 * (self.v_c - self.t_c - self.i_c) - m as f64 * self.t_p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AverageProfile {
    pub n: u64,
    pub m: u64,
    pub averages: ViabilityParams,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub margin: f64,
    pub feasible: bool,
}

pub fn general_feasibility(p: &AverageProfile, eps: f64) -> Margin {
    let margin = p.averages.margin(p.n, p.m);
    Margin {
        margin,
        feasible: margin > eps,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionCell {
    pub n: u64,
    pub m: u64,
    pub margin: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViabilityRegion {
    /// Sorted by `n`, then `m`.
    pub cells: Vec<RegionCell>,
    /// Slope of the boundary line `m = slope·n + intercept`; infinite when
    /// providers carry no cost.
    pub boundary_slope: f64,
    pub boundary_intercept: f64,
}

impl ViabilityRegion {
    /// Feasible cells of row `n`, in increasing `m`.
    pub fn row(&self, n: u64) -> impl Iterator<Item = &RegionCell> {
        self.cells.iter().filter(move |c| c.n == n)
    }
}

/// Evaluates every integer cell of `[0, n_max] × [0, m_max]`.
pub fn viability_region(params: &ViabilityParams, n_max: u64, m_max: u64, eps: f64) -> Result<ViabilityRegion> {
    if n_max < 1 || m_max < 1 {
        return Err(Error::Precondition("n_max and m_max must be at least 1"));
    }
    let mut cells = Vec::with_capacity(((n_max + 1) * (m_max + 1)) as usize);
    for n in 0..=n_max {
        for m in 0..=m_max {
            let margin = params.margin(n, m);
            cells.push(RegionCell {
                n,
                m,
                margin,
                feasible: margin > eps,
            });
        }
    }
    let boundary_slope = if params.t_p > 0.0 {
        (params.v_c - params.t_c - params.i_c) / params.t_p
    } else {
        f64::INFINITY
    };
    Ok(ViabilityRegion {
        cells,
        boundary_slope,
        boundary_intercept: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    Ecosystem,
    /// Strictly worse off or indifferent; the standard mechanism is kept.
    Standard,
}

/// A consumer choosing between ecosystem-based and standard exchange at the
/// same value and fee.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConsumerChoice {
    pub v_c: f64,
    pub x: f64,
    pub t_c_eco: f64,
    pub t_c_std: f64,
}

/// The consumer's value and fee cancel; only the cost comparison remains.
pub fn consumer_engagement(choice: &ConsumerChoice, eps: f64) -> Preference {
    if choice.t_c_eco < choice.t_c_std - eps {
        Preference::Ecosystem
    } else {
        Preference::Standard
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProviderChoice {
    pub v_p_eco: f64,
    pub v_p_std: f64,
    pub t_p_eco: f64,
    pub t_p_std: f64,
}

/// Sign pattern of (value increment, cost increment) when moving to the
/// ecosystem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngagementCase {
    /// More value, lower cost.
    A,
    /// More value, higher cost: preferred only if value outgrows cost.
    B,
    /// No more value, lower cost.
    C,
    /// No more value, higher cost.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProviderEngagement {
    pub case: EngagementCase,
    pub prefers_ecosystem: bool,
    pub delta_v: f64,
    pub delta_t: f64,
}

/// Classifies a provider's move to the ecosystem. Either increment within
/// `eps` of zero is reported as [`Error::AmbiguousCase`].
pub fn provider_engagement(choice: &ProviderChoice, eps: f64) -> Result<ProviderEngagement> {
    let delta_v = choice.v_p_eco - choice.v_p_std;
    let delta_t = choice.t_p_eco - choice.t_p_std;
    if delta_v.abs() <= eps || delta_t.abs() <= eps || delta_v.is_nan() || delta_t.is_nan() {
        return Err(Error::AmbiguousCase { delta_v, delta_t });
    }
    let case = match (delta_v > 0.0, delta_t > 0.0) {
        (true, false) => EngagementCase::A,
        (true, true) => EngagementCase::B,
        (false, false) => EngagementCase::C,
        (false, true) => EngagementCase::D,
    };
    Ok(ProviderEngagement {
        case,
        prefers_ecosystem: delta_v > delta_t + eps,
        delta_v,
        delta_t,
    })
}
