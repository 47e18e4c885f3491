//! First-best equal-split fees.
//!
//! With full information and no outside options both sides know the open
//! bargaining interval `(t_p - v_p, v_c - t_c)` for the fee and settle on its
//! midpoint, which splits the net total value equally.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{edge_surplus, Ecosystem, TransactionTerms};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeeSolution {
    pub x_star: f64,
    pub w_p: f64,
    pub w_c: f64,
    /// The provider pays the consumer (`x_star < 0`).
    pub is_subsidy: bool,
    /// Open interval of fees satisfying both participation conditions.
    pub bargaining_range: (f64, f64),
}

/// Equal-split fee `½[(v_c - v_p) - (t_c - t_p)]` of a single transaction.
///
/// Fails with [`Error::Infeasible`] unless `v_c + v_p > t_c + t_p + eps`.
/// Any fee already present on `terms` is ignored.
pub fn two_actor_fee(terms: &TransactionTerms, eps: f64) -> Result<FeeSolution> {
    let net = terms.net_total();
    if !(net > eps) {
        return Err(Error::Infeasible { deficit: -net });
    }
    let x_star = 0.5 * ((terms.v_c - terms.v_p) - (terms.t_c - terms.t_p));
    let s = edge_surplus(&terms.with_fee(x_star))?;
    Ok(FeeSolution {
        x_star,
        w_p: s.w_p,
        w_c: s.w_c,
        is_subsidy: x_star < 0.0,
        bargaining_range: (terms.t_p - terms.v_p, terms.v_c - terms.t_c),
    })
}

/// Sets every edge fee to its independent two-actor solution.
///
/// If any edge is infeasible nothing is solved and all failing edges are
/// listed in canonical order.
pub fn solve_all_fees(eco: &Ecosystem, eps: f64) -> Result<Ecosystem> {
    let failing: Vec<_> = eco
        .canonical_edges()
        .into_iter()
        .filter(|e| two_actor_fee(&e.terms, eps).is_err())
        .map(|e| e.key())
        .collect();
    if !failing.is_empty() {
        return Err(Error::InfeasibleEdges(failing));
    }
    let mut solved = eco.clone();
    for e in &mut solved.edges {
        let fee = two_actor_fee(&e.terms, eps)?;
        e.terms.x = Some(fee.x_star);
    }
    Ok(solved)
}

/// Links of the chain `v_c > x > t_p` that must hold when the provider draws
/// no value of its own from the transaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainLink {
    ValueOverCost,
    ValueOverFee,
    FeeOverCost,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsidyChain {
    pub fee: f64,
    /// `v_c > t_p`
    pub value_over_cost: bool,
    /// `v_c > x`
    pub value_over_fee: bool,
    /// `x > t_p`; false means the provider's participation fails.
    pub fee_over_cost: bool,
    pub first_violation: Option<ChainLink>,
}

impl SubsidyChain {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks the chain `v_c > x > t_p` for a transaction with `v_p = 0`.
///
/// `fee` defaults to the two-actor solution.
pub fn subsidization_check(terms: &TransactionTerms, fee: Option<f64>, eps: f64) -> Result<SubsidyChain> {
    if terms.v_p != 0.0 {
        return Err(Error::Precondition("subsidization check requires v_p = 0"));
    }
    let fee = match fee {
        Some(x) => x,
        None => two_actor_fee(terms, eps)?.x_star,
    };
    let value_over_cost = terms.v_c > terms.t_p;
    let value_over_fee = terms.v_c > fee;
    let fee_over_cost = fee > terms.t_p;
    let first_violation = [
        (value_over_cost, ChainLink::ValueOverCost),
        (value_over_fee, ChainLink::ValueOverFee),
        (fee_over_cost, ChainLink::FeeOverCost),
    ]
    .into_iter()
    .find(|(ok, _)| !ok)
    .map(|(_, link)| link);
    Ok(SubsidyChain {
        fee,
        value_over_cost,
        value_over_fee,
        fee_over_cost,
        first_violation,
    })
}
