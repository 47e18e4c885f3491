//! Federator fees, the Gaia-X vs data-space fee comparison and the structure
//! classifier.

use core::fmt;

use crate::error::{Error, Result};
use crate::model::{Ecosystem, TransactionTerms};

/// Fixed per-transaction fees charged by a federator, and its own cost.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FederatorTerms {
    pub f_p: f64,
    pub f_c: f64,
    pub t_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FederatorAdjustment {
    /// Terms with `t_p + f_p` and `t_c + f_c` as transaction costs.
    pub terms: TransactionTerms,
    /// `f_p + f_c - t_f`
    pub federator_margin: f64,
    pub federator_feasible: bool,
}

/// Folds federator fees into the transaction costs. Every other operation
/// applies unchanged to the adjusted terms.
pub fn federator_adjust(terms: &TransactionTerms, fed: &FederatorTerms, eps: f64) -> FederatorAdjustment {
    let adjusted = TransactionTerms {
        t_p: terms.t_p + fed.f_p,
        t_c: terms.t_c + fed.f_c,
        ..*terms
    };
    let federator_margin = fed.f_p + fed.f_c - fed.t_f;
    FederatorAdjustment {
        terms: adjusted,
        federator_margin,
        federator_feasible: federator_margin > eps,
    }
}

/// Inputs of the Gaia-X vs data-space comparison. Values are identical
/// across mechanisms; Gaia-X consumer costs are `alpha·t_p_g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonParams {
    /// `v_c - v_p`
    pub delta_v: f64,
    pub t_p_g: f64,
    pub alpha: f64,
    /// Data-space to Gaia-X provider cost ratio; only used to derive `t_d`.
    pub beta: Option<f64>,
    /// Symmetric data-space cost.
    pub t_d: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    /// `½[ΔV + (1 - α)·t_p_g]`
    pub x_g: f64,
    /// `½ΔV`
    pub x_d: f64,
    /// `x_g - x_d`
    pub premium: f64,
    /// `α·t_p_g`
    pub t_c_g: f64,
    /// Given, or `β·t_p_g`. Informational: symmetric costs cancel in `x_d`.
    pub t_d: Option<f64>,
}

/// Equal-split fees under Gaia-X (asymmetric costs) and a data space
/// (symmetric costs), assuming equal bargaining power on both sides.
pub fn compare_gaiax_dataspace(p: &ComparisonParams) -> Result<Comparison> {
    if !(p.alpha > 0.0 && p.alpha < 1.0) {
        return Err(Error::Precondition("alpha must lie in (0, 1)"));
    }
    if p.beta.is_some_and(|b| !(b > 0.0)) {
        return Err(Error::Precondition("beta must be positive"));
    }
    let x_g = 0.5 * (p.delta_v + (1.0 - p.alpha) * p.t_p_g);
    let x_d = 0.5 * p.delta_v;
    Ok(Comparison {
        x_g,
        x_d,
        premium: x_g - x_d,
        t_c_g: p.alpha * p.t_p_g,
        t_d: p.t_d.or(p.beta.map(|b| b * p.t_p_g)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    /// Structure alone cannot tell an ecosystem from a market arrangement.
    Indeterminate,
    /// Some provider draws value beyond the fee.
    EcosystemProper,
    /// Providers are paid only through fees.
    MarketArrangement,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::Indeterminate => "indeterminate",
            Structure::EcosystemProper => "ecosystem-proper",
            Structure::MarketArrangement => "market-arrangement",
        })
    }
}

/// Without value information the answer is always
/// [`Structure::Indeterminate`]. With values visible, any edge with
/// `v_p > eps` is taken as evidence of a shared value proposition.
pub fn classify_structure(eco: &Ecosystem, value_visible: bool, eps: f64) -> Structure {
    if !value_visible {
        Structure::Indeterminate
    } else if eco.edges.iter().any(|e| e.terms.v_p > eps) {
        Structure::EcosystemProper
    } else {
        Structure::MarketArrangement
    }
}
