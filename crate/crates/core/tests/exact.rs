use dvrp_core::exact::{brute_force_opt, solve_bounded, solve_bounded_with, solve_with_tours, stored_profiles, DpOptions, Pruning};
use dvrp_core::generators::{gen_random_from, DistancePolicy, Stream};
use dvrp_core::instance::{normalize, parse_instance, NormalizedInstance, RoutingInstance, TreeInstance};

const MODES: [Pruning; 3] = [Pruning::None, Pruning::EqualLength, Pruning::Subsumption];

fn sample(rng: &mut Stream, max_terminals: u64) -> RoutingInstance {
    let n = rng.between(1, max_terminals) as usize;
    let w = rng.between(1, 9);
    gen_random_from(rng, n, w, DistancePolicy::default()).unwrap()
}

/// Small enough bound that the unpruned table stays manageable.
fn small(rng: &mut Stream) -> RoutingInstance {
    loop {
        let inst = sample(rng, 6);
        if inst.distance_bound() <= 30 {
            return inst;
        }
    }
}

fn opt(inst: &impl TreeInstance) -> usize {
    brute_force_opt(inst).unwrap().unwrap().tour_count
}

#[test]
fn matches_brute_force_in_every_mode() {
    let mut rng = Stream::new(11);
    for _ in 0..150 {
        let inst = small(&mut rng);
        let norm = normalize(&inst).unwrap();
        let expected = opt(&inst);
        for pruning in MODES {
            let got = solve_bounded_with(&norm, 6, DpOptions { pruning, ..DpOptions::default() });
            assert_eq!(got, Some(expected), "{pruning:?}\n{}", dvrp_core::serialize_instance(&inst));
        }
    }
}

#[test]
fn pruned_table_matches_brute_force_on_larger_instances() {
    let mut rng = Stream::new(17);
    for _ in 0..150 {
        let inst = sample(&mut rng, 10);
        assert_eq!(solve_bounded(&normalize(&inst).unwrap(), 10), Some(opt(&inst)));
    }
}

#[test]
fn budget_threshold() {
    let mut rng = Stream::new(12);
    for _ in 0..80 {
        let inst = sample(&mut rng, 7);
        let norm = normalize(&inst).unwrap();
        let best = opt(&inst);
        for gamma in 1..=8 {
            let expected = (gamma >= best).then_some(best);
            assert_eq!(solve_bounded(&norm, gamma), expected, "gamma {gamma}");
        }
    }
}

fn check_tours(norm: &NormalizedInstance, tours: &[Vec<usize>]) {
    let mut covered = vec![false; norm.vertex_count()];
    for tour in tours {
        assert!(norm.tree().closed_walk_length(tour.iter().copied()) <= norm.distance_bound());
        for &v in tour {
            assert!(norm.is_terminal(v));
            covered[v] = true;
        }
    }
    assert!(norm.terminals().iter().all(|&v| covered[v]));
}

#[test]
fn reconstructed_tours_are_optimal_solutions() {
    let mut rng = Stream::new(13);
    for _ in 0..100 {
        let inst = sample(&mut rng, 8);
        let norm = normalize(&inst).unwrap();
        let tours = solve_with_tours(&norm, 8).unwrap();
        assert_eq!(tours.len(), opt(&inst));
        check_tours(&norm, &tours);
    }
}

#[test]
fn stored_profiles_are_sorted_and_capped() {
    let mut rng = Stream::new(14);
    for _ in 0..60 {
        let norm = normalize(&small(&mut rng)).unwrap();
        let gamma = 5;
        for pruning in MODES {
            let opts = DpOptions { pruning, ..DpOptions::default() };
            for (v, profiles) in stored_profiles(&norm, gamma, opts).iter().enumerate() {
                let cap = norm.distance_bound().saturating_sub(2 * norm.tree().depth(v));
                for p in profiles {
                    assert!(p.len() <= gamma);
                    assert!(p.windows(2).all(|w| w[0] <= w[1]), "{p:?}");
                    assert!(p.iter().all(|&x| x <= cap));
                }
            }
        }
    }
}

#[test]
fn subsumption_keeps_fewest_profiles() {
    let mut rng = Stream::new(15);
    for _ in 0..40 {
        let norm = normalize(&small(&mut rng)).unwrap();
        let count = |pruning| {
            stored_profiles(&norm, 6, DpOptions { pruning, ..DpOptions::default() })
                .iter()
                .map(Vec::len)
                .sum::<usize>()
        };
        let (none, equal, sub) = (count(Pruning::None), count(Pruning::EqualLength), count(Pruning::Subsumption));
        assert!(sub <= equal && equal <= none, "{none} {equal} {sub}");
    }
}

#[test]
fn normal_form_keeps_the_optimum() {
    let mut rng = Stream::new(16);
    for _ in 0..150 {
        let inst = sample(&mut rng, 8);
        let norm = normalize(&inst).unwrap();
        assert!(norm.invariant_violations().is_empty(), "{:?}", norm.invariant_violations());
        assert_eq!(opt(&norm), opt(&inst));
    }
}

#[test]
fn infeasible_terminal() {
    let inst = parse_instance("dvrp 1\nD 9\nroot 0\nedge 1 0 5\nterminals 1\n").unwrap();
    assert_eq!(brute_force_opt(&inst).unwrap(), None);
}

#[test]
fn terminal_inner_vertex() {
    let inst = parse_instance("dvrp 1\nD 12\nroot 0\nedge 1 0 2\nedge 2 1 4\nedge 3 1 4\nterminals 1 2 3\n").unwrap();
    let norm = normalize(&inst).unwrap();
    assert_eq!(solve_bounded(&norm, 3), Some(2));
}
