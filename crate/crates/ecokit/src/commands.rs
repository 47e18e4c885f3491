//! Command dispatch and text reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use ecokit_core::bargaining::{solve_all_fees, two_actor_fee, FeeSolution};
use ecokit_core::extensions::{classify_structure, compare_gaiax_dataspace, federator_adjust};
use ecokit_core::hub::{analyze_welfare, hub_feasibility_curve, provider_threshold, uniform_hub_fee};
use ecokit_core::model::{internal_feasibility, validate_ecosystem};
use ecokit_core::oracle::{grid_max_consumer, grid_max_welfare, GridSpec};
use ecokit_core::viability::{general_feasibility, viability_region};
use ecokit_core::Ecosystem;

use crate::format::{num, write_curve_csv, write_region_csv};
use crate::scenario::{
    Body, CompareBody, EcosystemBody, FederatorBody, HubBody, Kind, ParametricHubBody, Scenario, ViabilityBody,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Check,
    SolveFees,
    Hub,
    Viability,
    Compare,
    Classify,
}

/// Result category of a run; the discriminant is the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Solved = 0,
    Infeasible = 1,
    InputError = 2,
    NumericalFailure = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// CSV destination for commands that emit tables.
    pub out: Option<PathBuf>,
    /// `(low, high, step)` for the grid oracles.
    pub grid: Option<(f64, f64, f64)>,
    pub n_range: Option<RangeInclusive<u64>>,
    pub eps: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            out: None,
            grid: None,
            n_range: None,
            eps: ecokit_core::EPS,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Model(#[from] ecokit_core::Error),
    #[error("command {command:?} does not accept {kind:?} scenarios")]
    Unsupported { command: Command, kind: Kind },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl RunError {
    pub fn status(&self) -> Status {
        match self {
            RunError::Model(ecokit_core::Error::Infeasible { .. } | ecokit_core::Error::InfeasibleEdges(_)) => {
                Status::Infeasible
            }
            RunError::Model(e) if e.is_numerical() => Status::NumericalFailure,
            _ => Status::InputError,
        }
    }
}

/// Runs `command` on `scenario`, writing the report to `out` and errors to
/// `err`.
pub fn run(command: Command, scenario: &Scenario, opts: &RunOptions, out: &mut dyn Write, err: &mut dyn Write) -> Status {
    match dispatch(command, scenario, opts, out) {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status()
        }
    }
}

fn dispatch(command: Command, scenario: &Scenario, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    use Body as B;
    use Command as C;
    match (command, &scenario.body) {
        (C::Check, B::Ecosystem(b)) => check_ecosystem(b, opts, out),
        (C::Check, B::Hub(b)) => check_hub(b, opts, out),
        (C::Check, B::Viability(b)) => check_viability(b, opts, out),
        (C::Check | C::SolveFees, B::Federator(b)) => federator(b, opts, out),
        (C::Check | C::Hub, B::ParametricHub(b)) => parametric_hub(b, opts, out),
        (C::Check | C::Compare, B::Compare(b)) => compare(b, out),
        (C::SolveFees, B::Ecosystem(b)) => solve_fees(b, opts, out),
        (C::SolveFees | C::Hub, B::Hub(b)) => hub(b, opts, out),
        (C::Viability, B::Viability(b)) => viability(b, opts, out),
        (C::Classify, B::Ecosystem(b)) => classify(b, opts, out),
        (command, _) => Err(RunError::Unsupported {
            command,
            kind: scenario.kind(),
        }),
    }
}

fn status(feasible: bool) -> Status {
    if feasible {
        Status::Solved
    } else {
        Status::Infeasible
    }
}

fn valid_ecosystem(b: &EcosystemBody) -> Result<Ecosystem, RunError> {
    let eco = b.to_ecosystem();
    let report = validate_ecosystem(&eco);
    if report.is_valid() {
        Ok(eco)
    } else {
        let problems: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        Err(RunError::Input(format!("invalid ecosystem: {}", problems.join("; "))))
    }
}

fn open_out(opts: &RunOptions) -> Result<Option<BufWriter<File>>, RunError> {
    Ok(match &opts.out {
        Some(path) => Some(BufWriter::new(File::create(path)?)),
        None => None,
    })
}

fn write_fee(out: &mut dyn Write, label: &str, s: &FeeSolution) -> io::Result<()> {
    writeln!(out, "{label}fee x* = {}", num(s.x_star))?;
    writeln!(
        out,
        "{label}bargaining range = ({}, {})",
        num(s.bargaining_range.0),
        num(s.bargaining_range.1)
    )?;
    writeln!(out, "{label}provider surplus w_p = {}", num(s.w_p))?;
    writeln!(out, "{label}consumer surplus w_c = {}", num(s.w_c))?;
    if s.is_subsidy {
        writeln!(out, "{label}subsidy: provider pays consumer")?;
    }
    Ok(())
}

fn check_ecosystem(b: &EcosystemBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let eco = valid_ecosystem(b)?;
    let r = internal_feasibility(&eco, b.include_investments, opts.eps);
    writeln!(out, "edges = {}", r.per_edge.len())?;
    for e in &r.per_edge {
        let participation = match e.participation_met {
            Some(true) => "met",
            Some(false) => "violated",
            None => "no fee",
        };
        writeln!(
            out,
            "  {} -> {}: margin {} (participation {participation})",
            e.provider,
            e.consumer,
            num(e.margin)
        )?;
    }
    writeln!(out, "provider net sum = {}", num(r.provider_sum))?;
    writeln!(out, "consumer net sum = {}", num(r.consumer_sum))?;
    writeln!(out, "consumer investments = {}", num(r.investments))?;
    writeln!(out, "total margin = {}", num(r.total_margin))?;
    writeln!(out, "all participation conditions met = {}", r.all_participation_met)?;
    writeln!(out, "internally feasible = {}", r.internally_feasible)?;
    Ok(status(r.internally_feasible))
}

fn check_hub(b: &HubBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let avg = b.averages();
    let margin = avg.margin(b.n);
    let t = provider_threshold(&avg, opts.eps);
    writeln!(out, "providers n = {}", b.n)?;
    writeln!(out, "hub margin = {}", num(margin))?;
    writeln!(out, "threshold n~ = {}", num(t.n_tilde))?;
    match t.n_min {
        Some(n) => writeln!(out, "minimum providers = {n}")?,
        None => writeln!(out, "minimum providers = none")?,
    }
    let feasible = margin > opts.eps;
    writeln!(out, "feasible = {feasible}")?;
    Ok(status(feasible))
}

fn hub(b: &HubBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let avg = b.averages();
    let fee = uniform_hub_fee(&b.params(), opts.eps);
    match &fee {
        Ok(s) => {
            write_fee(out, "", &s.fee)?;
            writeln!(out, "amortized investment = {}", num(s.amortized_investment))?;
            writeln!(out, "hub net = {}", num(s.hub_net))?;
        }
        Err(e) => writeln!(out, "uniform fee: {e}")?,
    }
    let t = provider_threshold(&avg, opts.eps);
    writeln!(out, "threshold n~ = {}", num(t.n_tilde))?;
    match t.n_min {
        Some(n) => writeln!(out, "minimum providers = {n}")?,
        None => writeln!(out, "minimum providers = none")?,
    }
    let range = opts.n_range.clone().unwrap_or(1..=b.n.max(1));
    let curve = hub_feasibility_curve(&avg, range, opts.eps);
    writeln!(out, "curve:")?;
    for p in &curve {
        writeln!(out, "  n = {}: margin {} feasible {}", p.n, num(p.margin), p.feasible)?;
    }
    if let Some(w) = open_out(opts)? {
        write_curve_csv(&curve, w)?;
    }
    Ok(status(fee.is_ok()))
}

fn parametric_hub(b: &ParametricHubBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let model = b.model().map_err(|e| RunError::Input(e.to_string()))?;
    let bracket = (b.bracket[0], b.bracket[1]);
    let a = analyze_welfare(&model, bracket, opts.eps)?;
    writeln!(out, "welfare-maximizing fee x*_W = {}", num(a.x_star_w))?;
    writeln!(out, "providers at x*_W = {}", num(a.n_at_w))?;
    writeln!(out, "total welfare at x*_W = {}", num(a.total_welfare))?;
    writeln!(out, "utility-maximizing fee x*_C = {}", num(a.x_star_c))?;
    writeln!(out, "providers at x*_C = {}", num(a.n_at_c))?;
    writeln!(out, "n'(x*_C) = {}", num(a.utility.supply_slope))?;
    writeln!(out, "marginal net value at x*_C = {}", num(a.utility.marginal_value))?;
    writeln!(out, "hub utility at x*_C = {}", num(a.consumer_utility))?;
    writeln!(out, "supply elasticity eta_P = {}", num(a.eta_p))?;
    writeln!(out, "Lerner residual = {}", num(a.lerner_residual))?;
    if !a.welfare.provider_participation {
        writeln!(out, "warning: provider participation fails at x*_W")?;
    }
    if !a.utility.provider_participation {
        writeln!(out, "warning: provider participation fails at x*_C")?;
    }
    if let Some((low, high, step)) = opts.grid {
        let g = GridSpec::new(low, high, step)?;
        let w = grid_max_welfare(&model, &g)?;
        let c = grid_max_consumer(&model, &g)?;
        let agree = |x: f64, y: f64| (x - y).abs() <= step;
        writeln!(out, "grid x^_W = {} (agrees: {})", num(w.x_hat), agree(w.x_hat, a.x_star_w))?;
        writeln!(out, "grid x^_C = {} (agrees: {})", num(c.x_hat), agree(c.x_hat, a.x_star_c))?;
    }
    Ok(Status::Solved)
}

fn check_viability(b: &ViabilityBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let p = b
        .profile()
        .ok_or_else(|| RunError::Input("check on a viability scenario needs n and m".into()))?;
    let r = general_feasibility(&p, opts.eps);
    writeln!(out, "consumers n = {}, providers m = {}", p.n, p.m)?;
    writeln!(out, "margin = {}", num(r.margin))?;
    writeln!(out, "feasible = {}", r.feasible)?;
    Ok(status(r.feasible))
}

fn viability(b: &ViabilityBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let region = viability_region(&b.params(), b.n_max, b.m_max, opts.eps)?;
    writeln!(out, "grid n = 0..={}, m = 0..={}", b.n_max, b.m_max)?;
    writeln!(out, "boundary slope = {}", num(region.boundary_slope))?;
    writeln!(out, "boundary intercept = {}", num(region.boundary_intercept))?;
    let feasible = region.cells.iter().filter(|c| c.feasible).count();
    writeln!(out, "feasible cells = {feasible} of {}", region.cells.len())?;
    if let Some(w) = open_out(opts)? {
        write_region_csv(&region, w)?;
    }
    match b.profile() {
        Some(p) => {
            let r = general_feasibility(&p, opts.eps);
            writeln!(out, "margin at n = {}, m = {}: {}", p.n, p.m, num(r.margin))?;
            Ok(status(r.feasible))
        }
        None => Ok(Status::Solved),
    }
}

fn solve_fees(b: &EcosystemBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let eco = valid_ecosystem(b)?;
    let solved = match solve_all_fees(&eco, opts.eps) {
        Ok(s) => s,
        Err(e @ ecokit_core::Error::InfeasibleEdges(_)) => {
            writeln!(out, "{e}")?;
            return Ok(Status::Infeasible);
        }
        Err(e) => return Err(e.into()),
    };
    let mut csv_out = open_out(opts)?.map(csv::Writer::from_writer);
    if let Some(w) = csv_out.as_mut() {
        w.write_record(["provider", "consumer", "fee", "w_p", "w_c", "subsidy"])?;
    }
    for e in solved.canonical_edges() {
        let s = two_actor_fee(&e.terms, opts.eps)?;
        writeln!(out, "{} -> {}:", e.provider, e.consumer)?;
        write_fee(out, "  ", &s)?;
        if let Some(w) = csv_out.as_mut() {
            w.write_record([
                e.provider.clone(),
                e.consumer.clone(),
                num(s.x_star),
                num(s.w_p),
                num(s.w_c),
                s.is_subsidy.to_string(),
            ])?;
        }
    }
    if let Some(mut w) = csv_out {
        w.flush()?;
    }
    let r = internal_feasibility(&solved, b.include_investments, opts.eps);
    writeln!(out, "total margin = {}", num(r.total_margin))?;
    writeln!(out, "internally feasible = {}", r.internally_feasible)?;
    Ok(status(r.internally_feasible && r.all_participation_met))
}

fn federator(b: &FederatorBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let adj = federator_adjust(&b.terms(), &b.federator(), opts.eps);
    writeln!(out, "adjusted provider cost = {}", num(adj.terms.t_p))?;
    writeln!(out, "adjusted consumer cost = {}", num(adj.terms.t_c))?;
    writeln!(out, "net total value = {}", num(adj.terms.net_total()))?;
    writeln!(out, "federator margin = {}", num(adj.federator_margin))?;
    writeln!(out, "federator feasible = {}", adj.federator_feasible)?;
    let fee = two_actor_fee(&adj.terms, opts.eps)?;
    write_fee(out, "", &fee)?;
    Ok(status(adj.federator_feasible))
}

fn compare(b: &CompareBody, out: &mut dyn Write) -> Result<Status, RunError> {
    let c = compare_gaiax_dataspace(&b.params())?;
    writeln!(out, "Gaia-X fee x*_g = {}", num(c.x_g))?;
    writeln!(out, "data space fee x*_d = {}", num(c.x_d))?;
    writeln!(out, "premium = {}", num(c.premium))?;
    writeln!(out, "Gaia-X consumer cost = {}", num(c.t_c_g))?;
    if let Some(t_d) = c.t_d {
        writeln!(out, "data space cost = {}", num(t_d))?;
    }
    writeln!(out, "note: assumes equal bargaining power of provider and consumer")?;
    Ok(Status::Solved)
}

fn classify(b: &EcosystemBody, opts: &RunOptions, out: &mut dyn Write) -> Result<Status, RunError> {
    let eco = valid_ecosystem(b)?;
    let s = classify_structure(&eco, b.value_visible, opts.eps);
    writeln!(out, "structure = {s}")?;
    if b.value_visible {
        writeln!(
            out,
            "note: ecosystem-proper means some provider has positive own value v_p; this is a proxy for a shared value proposition"
        )?;
    } else {
        writeln!(out, "note: the relation graph alone cannot separate an ecosystem from a market arrangement")?;
    }
    Ok(Status::Solved)
}

/// Parses `low:high:step`.
pub fn parse_grid(s: &str) -> Result<(f64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [low, high, step] = parts.as_slice() else {
        return Err(format!("expected low:high:step, got {s:?}"));
    };
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((p(low)?, p(high)?, p(step)?))
}

/// Parses `a..b` (inclusive); a leading `n=` is accepted.
pub fn parse_n_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let s = s.trim();
    let s = s.strip_prefix("n=").unwrap_or(s);
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

/// Feasibility tolerance from the `ECOKIT_EPS` value, if set.
pub fn eps_from(value: Option<&str>) -> Result<f64, String> {
    match value {
        None => Ok(ecokit_core::EPS),
        Some(v) => match v.trim().parse::<f64>() {
            Ok(eps) if eps.is_finite() && eps >= 0.0 => Ok(eps),
            _ => Err(format!("ECOKIT_EPS must be a non-negative number, got {v:?}")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_range_parsing() {
        assert_eq!(parse_grid("0:10:0.001").unwrap(), (0.0, 10.0, 0.001));
        assert!(parse_grid("0:10").is_err());
        assert_eq!(parse_n_range("18..22").unwrap(), 18..=22);
        assert_eq!(parse_n_range("n=18..22").unwrap(), 18..=22);
        assert_eq!(parse_n_range("1..=3").unwrap(), 1..=3);
        assert!(parse_n_range("5..2").is_err());
    }

    #[test]
    fn eps_parsing() {
        assert_eq!(eps_from(None).unwrap(), 1e-9);
        assert_eq!(eps_from(Some("1e-6")).unwrap(), 1e-6);
        assert!(eps_from(Some("abc")).is_err());
        assert!(eps_from(Some("-1")).is_err());
    }

    #[test]
    fn error_statuses_are_distinct() {
        let infeasible = RunError::Model(ecokit_core::Error::Infeasible { deficit: 1.0 });
        let numerical = RunError::Model(ecokit_core::Error::NonConvergence { iterations: 200, width: 1.0 });
        let input = RunError::Input("x".into());
        assert_eq!(infeasible.status(), Status::Infeasible);
        assert_eq!(numerical.status(), Status::NumericalFailure);
        assert_eq!(input.status(), Status::InputError);
    }
}
