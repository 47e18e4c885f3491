//! Ecosystem structure, per-edge surpluses and internal feasibility.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{EdgeKey, Error, Result};

/// Values, costs and fee of one provider -> consumer transaction.
///
/// Values and costs are non-negative period aggregates on the common utility
/// scale. A negative fee is a subsidy paid by the provider.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TransactionTerms {
    pub v_p: f64,
    pub v_c: f64,
    pub t_p: f64,
    pub t_c: f64,
    pub x: Option<f64>,
}

impl TransactionTerms {
    pub fn new(v_p: f64, v_c: f64, t_p: f64, t_c: f64) -> Self {
        TransactionTerms {
            v_p,
            v_c,
            t_p,
            t_c,
            x: None,
        }
    }

    pub fn with_fee(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    /// Net total value `(v_p + v_c) - (t_p + t_c)`; the fee cancels.
    pub fn net_total(&self) -> f64 {
        (self.v_p + self.v_c) - (self.t_p + self.t_c)
    }

    /// `v_c - v_p`.
    pub fn value_gap(&self) -> f64 {
        self.v_c - self.v_p
    }

    fn problems(&self) -> Vec<TermProblem> {
        let mut out = Vec::new();
        for (field, v) in [("v_p", self.v_p), ("v_c", self.v_c)] {
            if !v.is_finite() {
                out.push(TermProblem::NonFinite(field));
            } else if v < 0.0 {
                out.push(TermProblem::NegativeValue(field));
            }
        }
        for (field, v) in [("t_p", self.t_p), ("t_c", self.t_c)] {
            if !v.is_finite() {
                out.push(TermProblem::NonFinite(field));
            } else if v < 0.0 {
                out.push(TermProblem::NegativeCost(field));
            }
        }
        if let Some(x) = self.x {
            if !x.is_finite() {
                out.push(TermProblem::NonFinite("x"));
            }
        }
        out
    }
}

enum TermProblem {
    NonFinite(&'static str),
    NegativeValue(&'static str),
    NegativeCost(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Provider,
    Consumer,
}

/// Natural projection of the per-edge value and cost pairs onto one role:
/// `(v_p, t_p)` for the provider, `(v_c, t_c)` for the consumer.
pub fn project(terms: &TransactionTerms, role: Role) -> (f64, f64) {
    match role {
        Role::Provider => (terms.v_p, terms.t_p),
        Role::Consumer => (terms.v_c, terms.t_c),
    }
}

/// Net values of both sides of one transaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeSurplus {
    pub w_p: f64,
    pub w_c: f64,
    /// `w_p + w_c`.
    pub margin: f64,
}

/// Evaluates both participation conditions of a transaction at its fee.
pub fn edge_surplus(terms: &TransactionTerms) -> Result<EdgeSurplus> {
    let x = terms.x.ok_or(Error::MissingFee)?;
    let w_p = terms.v_p + x - terms.t_p;
    let w_c = terms.v_c - x - terms.t_c;
    Ok(EdgeSurplus {
        w_p,
        w_c,
        margin: w_p + w_c,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Participant {
    pub id: String,
    /// Ex-ante investment, only counted for participants acting as consumers.
    pub investment: f64,
}

impl Participant {
    pub fn new(id: impl Into<String>, investment: f64) -> Self {
        Participant {
            id: id.into(),
            investment,
        }
    }
}

/// A directed provider -> consumer relation with its terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub provider: String,
    pub consumer: String,
    pub terms: TransactionTerms,
}

impl Edge {
    pub fn new(provider: impl Into<String>, consumer: impl Into<String>, terms: TransactionTerms) -> Self {
        Edge {
            provider: provider.into(),
            consumer: consumer.into(),
            terms,
        }
    }

    pub fn key(&self) -> EdgeKey {
        (self.provider.clone(), self.consumer.clone())
    }

    fn key_ref(&self) -> (&str, &str) {
        (&self.provider, &self.consumer)
    }
}

/// Participants, relations and per-edge terms for one time window.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ecosystem {
    pub participants: Vec<Participant>,
    pub edges: Vec<Edge>,
    /// Opaque label of the aggregation window.
    pub time_window: String,
}

impl Ecosystem {
    pub fn new(participants: Vec<Participant>, edges: Vec<Edge>) -> Self {
        Ecosystem {
            participants,
            edges,
            time_window: String::new(),
        }
    }

    /// Edges sorted by `(provider, consumer)`.
    pub fn canonical_edges(&self) -> Vec<&Edge> {
        let mut edges: Vec<&Edge> = self.edges.iter().collect();
        edges.sort_by(|a, b| a.key_ref().cmp(&b.key_ref()));
        edges
    }

    /// Ids acting as provider on at least one edge.
    pub fn providers(&self) -> BTreeSet<&str> {
        self.edges.iter().map(|e| e.provider.as_str()).collect()
    }

    /// Ids acting as consumer on at least one edge.
    pub fn consumers(&self) -> BTreeSet<&str> {
        self.edges.iter().map(|e| e.consumer.as_str()).collect()
    }

    pub fn participant(&self, id: &str) -> Option<&Participant> {
        self.participants.iter().find(|p| p.id == id)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DuplicateParticipant(String),
    InvalidInvestment(String),
    UnknownParticipant { edge: EdgeKey, id: String },
    DuplicateEdge(EdgeKey),
    SelfLoop(String),
    NegativeValue { edge: EdgeKey, field: &'static str },
    NegativeTransactionCost { edge: EdgeKey, field: &'static str },
    NonFinite { edge: EdgeKey, field: &'static str },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateParticipant(id) => write!(f, "duplicate participant {id}"),
            Violation::InvalidInvestment(id) => {
                write!(f, "negative or non-finite investment for {id}")
            }
            Violation::UnknownParticipant { edge, id } => {
                write!(f, "unknown participant {id} on edge {}->{}", edge.0, edge.1)
            }
            Violation::DuplicateEdge(edge) => write!(f, "duplicate edge {}->{}", edge.0, edge.1),
            Violation::SelfLoop(id) => write!(f, "self-loop on {id}"),
            Violation::NegativeValue { edge, field } => {
                write!(f, "negative value {field} on edge {}->{}", edge.0, edge.1)
            }
            Violation::NegativeTransactionCost { edge, field } => write!(
                f,
                "negative transaction cost {field} on edge {}->{}",
                edge.0, edge.1
            ),
            Violation::NonFinite { edge, field } => {
                write!(f, "non-finite {field} on edge {}->{}", edge.0, edge.1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every structural problem of `eco`; an empty report means valid.
pub fn validate_ecosystem(eco: &Ecosystem) -> ValidationReport {
    let mut violations = Vec::new();
    let mut ids = BTreeSet::new();
    for p in &eco.participants {
        if !ids.insert(p.id.as_str()) {
            violations.push(Violation::DuplicateParticipant(p.id.clone()));
        }
        if !(p.investment.is_finite() && p.investment >= 0.0) {
            violations.push(Violation::InvalidInvestment(p.id.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for e in &eco.edges {
        for id in [&e.provider, &e.consumer] {
            if !ids.contains(id.as_str()) {
                violations.push(Violation::UnknownParticipant {
                    edge: e.key(),
                    id: id.clone(),
                });
            }
        }
        if e.provider == e.consumer {
            violations.push(Violation::SelfLoop(e.provider.clone()));
        }
        if !seen.insert(e.key_ref()) {
            violations.push(Violation::DuplicateEdge(e.key()));
        }
        for problem in e.terms.problems() {
            let edge = e.key();
            violations.push(match problem {
                TermProblem::NonFinite(field) => Violation::NonFinite { edge, field },
                TermProblem::NegativeValue(field) => Violation::NegativeValue { edge, field },
                TermProblem::NegativeCost(field) => {
                    Violation::NegativeTransactionCost { edge, field }
                }
            });
        }
    }
    ValidationReport { violations }
}

/// Sum of `valuation` over `edges`, taken in canonical `(provider, consumer)`
/// order so the result does not depend on the iteration order of the input.
pub fn sigma<'a, I, F>(edges: I, valuation: F) -> f64
where
    I: IntoIterator<Item = &'a Edge>,
    F: Fn(&Edge) -> f64,
{
    let mut sorted: Vec<&Edge> = edges.into_iter().collect();
    sorted.sort_by(|a, b| a.key_ref().cmp(&b.key_ref()));
    sorted.iter().fold(0.0, |acc, e| acc + valuation(e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeReport {
    pub provider: String,
    pub consumer: String,
    /// Fee-independent net total of the edge.
    pub margin: f64,
    /// Present when the edge carries a fee.
    pub surplus: Option<EdgeSurplus>,
    /// Both participation conditions hold; `None` without a fee.
    pub participation_met: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    /// `Σ[R, V^P - T^P]`.
    pub provider_sum: f64,
    /// `Σ[R, V^C - T^C]`.
    pub consumer_sum: f64,
    /// Summed investments of consumers, zero unless requested.
    pub investments: f64,
    pub total_margin: f64,
    pub per_edge: Vec<EdgeReport>,
    /// Every edge has a fee and both of its participation conditions hold.
    pub all_participation_met: bool,
    pub internally_feasible: bool,
}

/// Ecosystem-wide master equation: the summed net benefits of all relations
/// (minus consumer investments when requested) must be positive.
pub fn internal_feasibility(eco: &Ecosystem, include_investments: bool, eps: f64) -> FeasibilityReport {
    let provider_sum = sigma(&eco.edges, |e| e.terms.v_p - e.terms.t_p);
    let consumer_sum = sigma(&eco.edges, |e| e.terms.v_c - e.terms.t_c);
    let investments = if include_investments {
        eco.consumers()
            .iter()
            .filter_map(|id| eco.participant(id))
            .fold(0.0, |acc, p| acc + p.investment)
    } else {
        0.0
    };
    let total_margin = provider_sum + consumer_sum - investments;

    let per_edge: Vec<EdgeReport> = eco
        .canonical_edges()
        .into_iter()
        .map(|e| {
            let surplus = edge_surplus(&e.terms).ok();
            EdgeReport {
                provider: e.provider.clone(),
                consumer: e.consumer.clone(),
                margin: e.terms.net_total(),
                surplus,
                participation_met: surplus.map(|s| s.w_p > eps && s.w_c > eps),
            }
        })
        .collect();
    let all_participation_met = per_edge.iter().all(|r| r.participation_met == Some(true));

    FeasibilityReport {
        provider_sum,
        consumer_sum,
        investments,
        total_margin,
        per_edge,
        all_participation_met,
        internally_feasible: total_margin > eps,
    }
}
