use cascade_noise::apd::{apd_to_cascade, step_excess_noise_ratio, step_stats, total_excess_noise, StaircaseApd};
use cascade_noise::engine::*;
use cascade_noise::{rel_close, validate, Network, Power, Stage};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn stage(max_gain_exp: f64) -> impl Strategy<Value = Stage> {
    (
        -1.0..max_gain_exp,
        prop_oneof![Just(0.0), 0.0..1e6_f64],
        prop_oneof![Just(0.0), 0.0..1e6_f64],
    )
        .prop_map(|(g, ni, ne)| Stage::new(10f64.powf(g), ni, ne))
}

fn network() -> impl Strategy<Value = Network> {
    (1e-3..1e6_f64, 1e-3..1e6_f64, prop::collection::vec(stage(4.0), 1..=12))
        .prop_map(|(s, n, stages)| Network::new(s, n, stages).unwrap())
}

/// Gains restricted to [1, 1e4].
fn amplifying_network() -> impl Strategy<Value = Network> {
    (1e-3..1e6_f64, 1e-3..1e6_f64, prop::collection::vec((0.0..4.0_f64, 0.0..1e6_f64), 1..=12)).prop_map(
        |(s, n, stages)| {
            let stages = stages
                .into_iter()
                .map(|(g, ne)| Stage::new(10f64.powf(g), 0.0, ne))
                .collect();
            Network::new(s, n, stages).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn product_base_and_snr_totals_agree(net in network()) {
        let product = total_product_composition(&net).unwrap().value();
        let base = total_base_corrected(&net).unwrap().value();
        let snr = snr_ratio_total(&net).unwrap().value();
        prop_assert!(rel_close(product, base, TOL), "{product} vs {base}");
        prop_assert!(rel_close(product, snr, TOL), "{product} vs {snr}");
    }

    #[test]
    fn friis_composition_matches_friis_base(net in network()) {
        let comp = total_friis_composition(&net).unwrap().value();
        let base = total_base_friis(&net).unwrap().value();
        prop_assert!(rel_close(comp, base, TOL), "{comp} vs {base}");
    }

    #[test]
    fn friis_and_corrected_totals_coincide_without_internal_noise(net in network()) {
        let net = net.without_internal_noise();
        let friis = total_friis_composition(&net).unwrap().value();
        let product = total_product_composition(&net).unwrap().value();
        prop_assert!(rel_close(friis, product, TOL), "{friis} vs {product}");
    }

    #[test]
    fn first_stage_formulas_agree(net in network()) {
        let net = net.without_internal_noise();
        let a = stage_factor_corrected(&net, 1).unwrap().value();
        let b = stage_factor_friis(&net, 1).unwrap().value();
        prop_assert!(rel_close(a, b, TOL));
    }

    #[test]
    fn recursion_matches_direct_form(net in network()) {
        for x in 1..=net.len() {
            let direct = stage_factor_corrected(&net, x).unwrap().value();
            let rec = stage_factor_corrected_recursive(&net, x).unwrap().value();
            prop_assert!(rel_close(direct, rec, TOL), "stage {x}: {direct} vs {rec}");
        }
    }

    #[test]
    fn stage_input_noise_matches_trace(net in network()) {
        let trace = propagate(&net).unwrap();
        prop_assert_eq!(stage_input_noise(&net, 1).unwrap().0, net.input_noise.0);
        for x in 1..=net.len() {
            let ni = stage_input_noise(&net, x).unwrap().0;
            prop_assert!(rel_close(ni, trace.nodes[x - 1].noise.0, TOL));
            let f = stage_factor_corrected(&net, x).unwrap().value();
            prop_assert!(rel_close(f, trace.stage_snr_ratio(x).unwrap(), TOL));
        }
    }

    #[test]
    fn trace_invariants(net in network()) {
        let trace = propagate(&net).unwrap();
        prop_assert_eq!(trace.nodes.len(), net.len() + 1);
        let mut gain = 1.0;
        for (x, s) in net.stages.iter().enumerate() {
            gain *= s.power_gain;
            let node = trace.nodes[x + 1];
            prop_assert!(rel_close(node.signal.0, net.input_signal.0 * gain, TOL));
            let expect = trace.nodes[x].noise.0 * s.power_gain + s.added_noise();
            prop_assert_eq!(node.noise.0, expect);
        }
    }

    #[test]
    fn factors_never_drop_below_unity(net in network()) {
        let r = build_report(&net).unwrap();
        for s in &r.per_stage {
            prop_assert!(s.friis.value() >= 1.0 && s.corrected.value() >= 1.0);
        }
        let t = r.totals;
        for f in [t.base_friis, t.base_corrected, t.friis_composition, t.product_composition] {
            prop_assert!(f.excess() >= 0.0 && f.value() >= 1.0);
        }
        // the SNR ratio is measured, not composed, so it carries rounding
        prop_assert!(t.snr_ratio.value() >= 1.0 - TOL);
        prop_assert!(r.check_identities(TOL).is_ok());
    }

    #[test]
    fn corrected_never_exceeds_friis_for_amplifying_stages(net in amplifying_network()) {
        for x in 2..=net.len() {
            let c = stage_factor_corrected(&net, x).unwrap();
            let f = stage_factor_friis(&net, x).unwrap();
            prop_assert!(c.excess() <= f.excess() * (1.0 + TOL), "stage {x}: {c} > {f}");
        }
    }

    #[test]
    fn identical_stages_decay(g in 0.0..4.0_f64, ext in 1e-3..1e6_f64, ni in 1e-3..1e6_f64, n in 2usize..=12) {
        let net = Network::new(1.0, ni, vec![Stage::new(10f64.powf(g), 0.0, ext); n]).unwrap();
        let excess: Vec<f64> = (1..=n).map(|x| stage_factor_corrected(&net, x).unwrap().excess()).collect();
        prop_assert!(excess.windows(2).all(|w| w[1] < w[0]), "{excess:?}");
    }

    #[test]
    fn second_stage_input_noise_is_not_the_source_noise(ni in 1e-3..1e3_f64, g in 0.1..1e4_f64, nint in 0.0..1e3_f64, ext in 1e-3..1e3_f64) {
        let net = Network::new(1.0, ni, vec![Stage::new(g, nint, ext), Stage::new(2.0, 0.0, 1.0)]).unwrap();
        let ni2 = stage_input_noise(&net, 2).unwrap().0;
        prop_assert!(rel_close(ni2, ni * g + nint + ext, TOL));
        prop_assert!(ni2 != ni);
    }

    #[test]
    fn validated_networks_are_accepted_everywhere(net in network()) {
        prop_assert!(validate(&net).is_empty());
        prop_assert!(build_report(&net).is_ok());
        for x in 1..=net.len() {
            prop_assert!(stage_factor_corrected_recursive(&net, x).is_ok());
        }
    }

    #[test]
    fn step_excess_noise_forms_agree(p in 0.0..=1.0_f64) {
        let s = step_stats(p).unwrap();
        prop_assert!((s.excess_noise.value() - step_excess_noise_ratio(p)).abs() <= 1e-15);
        prop_assert!((s.second_moment - (s.mean_gain * s.mean_gain + s.variance)).abs() <= 1e-15);
    }

    #[test]
    fn apd_cascade_correspondence(steps in prop::collection::vec(0.0..=1.0_f64, 1..=10), ni in 1e-3..1e3_f64) {
        let apd = StaircaseApd::new(steps.clone()).unwrap();
        let net = apd_to_cascade(&apd, Power::new(1.0), Power::new(ni)).unwrap();
        for (x, &p) in steps.iter().enumerate() {
            let stage = stage_factor_corrected(&net, x + 1).unwrap().value();
            let step = step_stats(p).unwrap().excess_noise.value();
            prop_assert!(rel_close(stage, step, TOL));
            prop_assert_eq!(net.stages[x].external_noise.0, 0.0);
        }
        let total = total_product_composition(&net).unwrap().value();
        prop_assert!(rel_close(total, total_excess_noise(&apd).value(), TOL));
    }

    #[test]
    fn endpoint_probabilities_are_noiseless(bits in prop::collection::vec(any::<bool>(), 1..=20)) {
        let steps = bits.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect();
        let apd = StaircaseApd::new(steps).unwrap();
        prop_assert_eq!(total_excess_noise(&apd).value(), 1.0);
    }
}

#[test]
fn dominance_needs_internal_noise_excluded() {
    // A stage with only internal noise is invisible to Friis' stage-wise
    // factor, so the corrected factor can exceed it.
    let net = Network::new(1.0, 1.0, vec![Stage::ideal(1.0), Stage::new(1.0, 10.0, 0.0)]).unwrap();
    assert_eq!(stage_factor_friis(&net, 2).unwrap().value(), 1.0);
    assert_eq!(stage_factor_corrected(&net, 2).unwrap().value(), 11.0);
}

#[test]
fn long_chains_up_to_the_cap() {
    let net = Network::new(1.0, 1.0, vec![Stage::new(1.001, 0.01, 0.01); 10_000]).unwrap();
    let r = build_report(&net).unwrap();
    assert!(r.check_identities(1e-9).is_ok());
}
