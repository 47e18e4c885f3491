//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p ecokit --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ecokit::format::write_region_csv;
use ecokit_core::bargaining::{subsidization_check, two_actor_fee};
use ecokit_core::extensions::{compare_gaiax_dataspace, federator_adjust, ComparisonParams, FederatorTerms};
use ecokit_core::hub::{
    analyze_welfare, hub_feasibility_curve, linearized_recovery, provider_threshold, uniform_hub_fee,
    DerivativeMode, HubAverages, HubParams, ParametricHubModel,
};
use ecokit_core::model::internal_feasibility;
use ecokit_core::oracle::{grid_max_consumer, grid_max_welfare, GridSpec};
use ecokit_core::response::Family;
use ecokit_core::viability::{viability_region, ViabilityParams};
use ecokit_core::{Ecosystem, Edge, Participant, TransactionTerms, EPS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_terms(r: &mut ChaCha8Rng) -> TransactionTerms {
    TransactionTerms::new(
        r.gen_range(0.0..100.0),
        r.gen_range(0.0..100.0),
        r.gen_range(0.0..100.0),
        r.gen_range(0.0..100.0),
    )
}

fn feasible_terms(r: &mut ChaCha8Rng) -> TransactionTerms {
    loop {
        let t = random_terms(r);
        if t.v_c + t.v_p > t.t_c + t.t_p {
            return t;
        }
    }
}

fn equal_split_law() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = two_actor_fee(&feasible_terms(&mut r), EPS).map_err(|e| e.to_string())?;
        worst = worst.max((s.w_p - s.w_c).abs());
    }
    let elapsed = start.elapsed();
    ensure(worst <= 1e-9, || format!("max |w_p - w_c| = {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("max |w_p - w_c| = {worst:e}, {elapsed:?}"))
}

fn range_iff_feasibility() -> Outcome {
    let mut r = rng(2);
    let mut solved = 0;
    for _ in 0..1000 {
        let t = random_terms(&mut r);
        let feasible = t.v_c + t.v_p > t.t_c + t.t_p;
        match two_actor_fee(&t, EPS) {
            Ok(s) => {
                ensure(feasible, || format!("solved infeasible {t:?}"))?;
                let (lo, hi) = s.bargaining_range;
                ensure(lo == t.t_p - t.v_p && hi == t.v_c - t.t_c, || format!("range {lo}, {hi} for {t:?}"))?;
                ensure(lo < s.x_star && s.x_star < hi, || format!("x* = {} outside ({lo}, {hi})", s.x_star))?;
                solved += 1;
            }
            Err(_) => ensure(!feasible, || format!("rejected feasible {t:?}"))?,
        }
    }
    Ok(format!("{solved} solved, {} infeasible", 1000 - solved))
}

fn egalitarian_zero_fee() -> Outcome {
    let mut r = rng(3);
    let mut n = 0;
    while n < 100 {
        let v = r.gen_range(0.0..100.0);
        let c = r.gen_range(0.0..100.0);
        let t = TransactionTerms::new(v, v, c, c);
        if 2.0 * v <= 2.0 * c + EPS {
            continue;
        }
        let x = two_actor_fee(&t, EPS).map_err(|e| e.to_string())?.x_star;
        ensure(x.abs() <= 1e-12, || format!("x* = {x} for {t:?}"))?;
        n += 1;
    }
    Ok("100 symmetric instances, x* = 0".into())
}

fn hub_amortization_identity() -> Outcome {
    let mut r = rng(4);
    let mut sets = 0;
    let mut worst: f64 = 0.0;
    while sets < 100 {
        let t = random_terms(&mut r);
        let i_c = r.gen_range(0.0..100.0);
        if t.net_total() - i_c <= 1e-6 {
            continue;
        }
        let base = two_actor_fee(&t, EPS).map_err(|e| e.to_string())?.x_star;
        for n in [1u64, 10, 100, 1_000_000] {
            let p = HubParams {
                v_p: t.v_p,
                t_p: t.t_p,
                v_c: t.v_c,
                t_c: t.t_c,
                i_c,
                n,
            };
            let x = uniform_hub_fee(&p, EPS).map_err(|e| e.to_string())?.fee.x_star;
            let gap = (x - base) - (-i_c / (2.0 * n as f64));
            worst = worst.max(gap.abs());
        }
        sets += 1;
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:e}"))
}

fn threshold_correctness() -> Outcome {
    let avg = HubAverages {
        v_c: 10.0,
        t_c: 1.0,
        t_p: 3.0,
        i_c: 120.0,
    };
    let t = provider_threshold(&avg, EPS);
    ensure(t.n_tilde == 20.0 && t.n_min == Some(21), || format!("{t:?}"))?;
    let curve = hub_feasibility_curve(&avg, 19..=21, EPS);
    let margins: Vec<f64> = curve.iter().map(|p| p.margin).collect();
    ensure(margins == [-6.0, 0.0, 6.0], || format!("margins {margins:?}"))?;
    Ok("n~ = 20, n_min = 21, margins -6, 0, 6".into())
}

fn worked_parametric_model() -> Outcome {
    let start = Instant::now();
    let model = ParametricHubModel {
        n_of_x: Family::Linear {
            intercept: 0.0,
            slope: 2.0,
        },
        v_c_of_n: Family::QuadraticValue {
            linear: 20.0,
            quadratic: 0.5,
        },
        t_c_of_n: Family::Linear {
            intercept: 0.0,
            slope: 2.0,
        },
        v_p: 0.0,
        t_p: 1.0,
        derivative_mode: DerivativeMode::Analytic,
    };
    let a = analyze_welfare(&model, (0.1, 10.0), EPS).map_err(|e| e.to_string())?;
    ensure((a.x_star_w - 6.0).abs() <= 1e-8, || format!("x*_W = {}", a.x_star_w))?;
    ensure((a.x_star_c - 4.5).abs() <= 1e-8, || format!("x*_C = {}", a.x_star_c))?;
    ensure((a.eta_p - 1.0).abs() <= 1e-8, || format!("eta_P = {}", a.eta_p))?;
    ensure(a.lerner_residual.abs() <= 1e-6, || format!("Lerner residual {}", a.lerner_residual))?;
    let step = 1e-3;
    let g = GridSpec::new(0.0, 10.0, step).map_err(|e| e.to_string())?;
    let w = grid_max_welfare(&model, &g).map_err(|e| e.to_string())?;
    let c = grid_max_consumer(&model, &g).map_err(|e| e.to_string())?;
    ensure((w.x_hat - a.x_star_w).abs() <= step, || format!("grid x^_W = {}", w.x_hat))?;
    ensure((c.x_hat - a.x_star_c).abs() <= step, || format!("grid x^_C = {}", c.x_hat))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(2), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "x*_W = {}, x*_C = {}, eta_P = {}, residual {:e}, {elapsed:?}",
        a.x_star_w, a.x_star_c, a.eta_p, a.lerner_residual
    ))
}

fn linearization_recovery() -> Outcome {
    let mut r = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let t = loop {
            let t = feasible_terms(&mut r);
            if t.net_total() > EPS {
                break t;
            }
        };
        let l = linearized_recovery(&t, EPS).map_err(|e| e.to_string())?;
        let closed = 0.5 * ((t.v_c - t.v_p) - (t.t_c - t.t_p));
        worst = worst.max((l.x_star - closed).abs());
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:e}"))
}

fn subsidization_chain() -> Outcome {
    let mut r = rng(8);
    let mut n = 0;
    while n < 1000 {
        let mut t = random_terms(&mut r);
        t.v_p = 0.0;
        if t.net_total() <= EPS {
            continue;
        }
        let chain = subsidization_check(&t, None, EPS).map_err(|e| e.to_string())?;
        ensure(t.v_c > chain.fee && chain.fee > t.t_p, || format!("chain fails for {t:?}: {chain:?}"))?;
        ensure(chain.holds(), || format!("{chain:?}"))?;
        n += 1;
    }
    Ok("1000 instances, v_c > x* > t_p".into())
}

fn federator_invariance() -> Outcome {
    let mut r = rng(9);
    let mut worst_fee: f64 = 0.0;
    let mut worst_margin: f64 = 0.0;
    let mut n = 0;
    while n < 1000 {
        let t = feasible_terms(&mut r);
        let f = r.gen_range(0.0..20.0);
        let fed = FederatorTerms {
            f_p: f,
            f_c: f,
            t_f: r.gen_range(0.0..40.0),
        };
        let adj = federator_adjust(&t, &fed, EPS);
        if adj.terms.net_total() <= EPS {
            continue;
        }
        let before = two_actor_fee(&t, EPS).map_err(|e| e.to_string())?.x_star;
        let after = two_actor_fee(&adj.terms, EPS).map_err(|e| e.to_string())?.x_star;
        worst_fee = worst_fee.max((before - after).abs());
        worst_margin = worst_margin.max((t.net_total() - adj.terms.net_total() - (fed.f_p + fed.f_c)).abs());
        n += 1;
    }
    ensure(worst_fee <= 1e-12, || format!("fee deviation {worst_fee:e}"))?;
    ensure(worst_margin <= 1e-12, || format!("margin deviation {worst_margin:e}"))?;
    Ok(format!("fee deviation {worst_fee:e}, margin deviation {worst_margin:e}"))
}

fn gaiax_premium() -> Outcome {
    let mut r = rng(10);
    let mut worst: f64 = 0.0;
    for alpha in [0.01, 0.05, 0.1] {
        for _ in 0..100 {
            let delta_v = r.gen_range(-50.0..50.0);
            let t_p_g = r.gen_range(0.0..50.0);
            let c = compare_gaiax_dataspace(&ComparisonParams {
                delta_v,
                t_p_g,
                alpha,
                beta: None,
                t_d: None,
            })
            .map_err(|e| e.to_string())?;
            worst = worst.max((c.premium - 0.5 * (1.0 - alpha) * t_p_g).abs());
            let v_p = 100.0;
            let t = TransactionTerms::new(v_p, v_p + delta_v, t_p_g, alpha * t_p_g);
            let x = two_actor_fee(&t, EPS).map_err(|e| e.to_string())?.x_star;
            worst = worst.max((x - c.x_g).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:e}"))?;
    Ok(format!("max deviation {worst:e}"))
}

fn viability_region_structure() -> Outcome {
    let params = ViabilityParams {
        v_c: 10.0,
        t_c: 1.0,
        i_c: 2.0,
        t_p: 3.0,
    };
    let region = viability_region(&params, 30, 80, EPS).map_err(|e| e.to_string())?;
    for n in 0..=30u64 {
        let row: Vec<_> = region.row(n).collect();
        for c in &row {
            // m < 7n/3 without rounding
            let expected = 3 * c.m < 7 * n;
            ensure(c.feasible == expected, || format!("cell ({n}, {}) feasible = {}", c.m, c.feasible))?;
        }
        let changes = row.windows(2).filter(|w| w[0].feasible != w[1].feasible).count();
        ensure(changes <= 1, || format!("row {n} has {changes} sign changes"))?;
    }

    let mut first = Vec::new();
    let mut second = Vec::new();
    write_region_csv(&region, &mut first).map_err(|e| e.to_string())?;
    write_region_csv(&region, &mut second).map_err(|e| e.to_string())?;
    ensure(first == second, || "in-process CSV differs between runs".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let scenario = dir.path().join("region.toml");
    std::fs::write(
        &scenario,
        "schema_version = \"1\"\nkind = \"viability\"\n\n[body]\nv_c = 10.0\nt_c = 1.0\ni_c = 2.0\nt_p = 3.0\nn_max = 30\nm_max = 80\n",
    )
    .map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_ecokit"))
            .args(["viability", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .env_remove("ECOKIT_EPS")
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("ecokit exited with {status}"))?;
        files.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(files[0] == files[1], || "CLI CSV differs between runs".into())?;
    ensure(files[0] == first, || "CLI CSV differs from library CSV".into())?;

    let mut reader = csv::Reader::from_reader(files[0].as_slice());
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    ensure(header.iter().eq(["n", "m", "margin", "feasible"]), || format!("header {header:?}"))?;
    let rows = reader.records().count();
    ensure(rows == 31 * 81, || format!("{rows} rows"))?;
    Ok(format!("31 rows checked against m < 7n/3, {} CSV bytes stable", files[0].len()))
}

fn fee_cancellation() -> Outcome {
    let mut r = rng(12);
    let ids: Vec<String> = (0..20).map(|i| format!("a{i:02}")).collect();
    let participants = ids
        .iter()
        .map(|id| Participant::new(id.clone(), r.gen_range(0.0..10.0)))
        .collect();
    let mut edges = Vec::new();
    while edges.len() < 50 {
        let p = r.gen_range(0..ids.len());
        let c = r.gen_range(0..ids.len());
        if p == c || edges.iter().any(|e: &Edge| e.provider == ids[p] && e.consumer == ids[c]) {
            continue;
        }
        let t = random_terms(&mut r).with_fee(r.gen_range(-100.0..100.0));
        edges.push(Edge::new(ids[p].clone(), ids[c].clone(), t));
    }
    let eco = Ecosystem::new(participants, edges);
    let base = internal_feasibility(&eco, true, EPS).total_margin;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mut shuffled = eco.clone();
        for e in &mut shuffled.edges {
            e.terms.x = Some(r.gen_range(-1000.0..1000.0));
        }
        let m = internal_feasibility(&shuffled, true, EPS).total_margin;
        worst = worst.max((m - base).abs() / base.abs().max(1.0));
    }
    ensure(worst <= 1e-12, || format!("max relative deviation {worst:e}"))?;
    Ok(format!("total margin {base}, max relative deviation {worst:e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1 equal-split law", equal_split_law),
        ("2 range iff feasibility", range_iff_feasibility),
        ("3 egalitarian zero fee", egalitarian_zero_fee),
        ("4 hub amortization identity", hub_amortization_identity),
        ("5 threshold correctness", threshold_correctness),
        ("6 worked parametric model", worked_parametric_model),
        ("7 linearization recovery", linearization_recovery),
        ("8 subsidization chain", subsidization_chain),
        ("9 federator symmetric-fee invariance", federator_invariance),
        ("10 Gaia-X premium identity", gaiax_premium),
        ("11 viability region structure", viability_region_structure),
        ("12 fee cancellation", fee_cancellation),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
