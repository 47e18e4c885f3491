use ecokit::scenario::{
    Body, CompareBody, EcosystemBody, EdgeSpec, FamilyName, FunctionSpec, HubBody, ParametricHubBody,
    ParticipantSpec, ViabilityBody, DerivativeSpec,
};
use ecokit::{parse_scenario, Scenario};
use proptest::prelude::*;

fn value() -> impl Strategy<Value = f64> {
    0.0..1e3f64
}

fn hub() -> impl Strategy<Value = Body> {
    (value(), value(), value(), value(), value(), 1u64..10_000)
        .prop_map(|(v_p, t_p, v_c, t_c, i_c, n)| Body::Hub(HubBody { v_p, t_p, v_c, t_c, i_c, n }))
}

fn viability() -> impl Strategy<Value = Body> {
    (value(), value(), value(), value(), prop::option::of((0u64..100, 0u64..100)), 1u64..50, 1u64..50).prop_map(
        |(v_c, t_c, i_c, t_p, nm, n_max, m_max)| {
            Body::Viability(ViabilityBody {
                v_c,
                t_c,
                i_c,
                t_p,
                n: nm.map(|p| p.0),
                m: nm.map(|p| p.1),
                n_max,
                m_max,
            })
        },
    )
}

fn compare() -> impl Strategy<Value = Body> {
    (-1e3..1e3f64, value(), 0.001..0.999f64, prop::option::of(0.01..2.0f64), prop::option::of(value())).prop_map(
        |(delta_v, t_p_g, alpha, beta, t_d)| Body::Compare(CompareBody { delta_v, t_p_g, alpha, beta, t_d }),
    )
}

fn ecosystem() -> impl Strategy<Value = Body> {
    (
        prop::collection::vec(value(), 2..6),
        prop::collection::vec((value(), value(), value(), value(), prop::option::of(-1e3..1e3f64)), 0..6),
        any::<bool>(),
        "[a-z0-9-]{0,8}",
    )
        .prop_map(|(investments, edges, flag, window)| {
            let k = investments.len();
            let participants = investments
                .iter()
                .enumerate()
                .map(|(i, &investment)| ParticipantSpec { id: format!("p{i}"), investment })
                .collect();
            let edges = edges
                .into_iter()
                .enumerate()
                .map(|(i, (v_p, v_c, t_p, t_c, x))| EdgeSpec {
                    provider: format!("p{}", i % k),
                    consumer: format!("p{}", (i + 1) % k),
                    v_p,
                    v_c,
                    t_p,
                    t_c,
                    x,
                })
                .collect();
            Body::Ecosystem(EcosystemBody {
                time_window: window,
                include_investments: flag,
                value_visible: !flag,
                participants,
                edges,
            })
        })
}

fn parametric() -> impl Strategy<Value = Body> {
    (value(), value(), value(), value(), any::<bool>()).prop_map(|(a, b, c, d, numeric)| {
        Body::ParametricHub(ParametricHubBody {
            n_of_x: FunctionSpec { family: FamilyName::Linear, coefficients: vec![a, b] },
            v_c_of_n: FunctionSpec { family: FamilyName::QuadraticValue, coefficients: vec![c, 0.5] },
            t_c_of_n: FunctionSpec { family: FamilyName::Saturating, coefficients: vec![d] },
            v_p: a,
            t_p: b,
            derivative: if numeric { DerivativeSpec::CentralDifference } else { DerivativeSpec::Analytic },
            bracket: [0.0, c + 1.0],
        })
    })
}

proptest! {
    #[test]
    fn serialize_then_load_is_identity(body in prop_oneof![hub(), viability(), compare(), ecosystem(), parametric()]) {
        let s = Scenario { schema_version: "1".into(), body };
        let text = s.to_toml_string().unwrap();
        let again = parse_scenario(&text).unwrap();
        prop_assert_eq!(s, again);
    }
}
