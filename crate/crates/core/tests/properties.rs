use proptest::collection::vec;
use proptest::prelude::*;

use tcand::exec::Execution;
use tcand::format::{parse_instance, write_instance};
use tcand::graph::solve_simple;
use tcand::lp::{build_layered_lp, build_one_round_lp, lp_lower_bound, solve_lp};
use tcand::oracle::{exact_rbsc, exact_tcand, exact_tcand_with};
use tcand::redblue::{rbsc_greedy, rbsc_to_tcand, tcand_to_rbsc, RbscInstance, RbscSet};
use tcand::rounding::{monte_carlo, round_deterministic, round_randomized_d};
use tcand::{AttrSet, Fd, FdSet, Instance};

type RawFds = Vec<(Vec<usize>, usize)>;

fn raw_fds(n: usize, max_lhs: usize, max_m: usize) -> impl Strategy<Value = RawFds> {
    vec(
        (
            proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 0..=max_lhs.min(n)),
            0..n,
        ),
        0..=max_m,
    )
}

fn fd_set(n: usize, raw: &RawFds) -> FdSet {
    FdSet::new(n, raw.iter().map(|(l, r)| Fd::new(l.iter().copied(), *r))).unwrap()
}

/// Instances with `n <= max_n` and rounds in `1..=max_rounds`.
fn instances(max_n: usize, max_rounds: usize) -> impl Strategy<Value = Instance> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            (
                Just(n),
                raw_fds(n, 3, 2 * n),
                vec(any::<bool>(), n),
                1..=max_rounds.min(n),
            )
        })
        .prop_map(|(n, raw, marks, rounds)| {
            let targets: AttrSet = (0..n).filter(|&i| marks[i]).collect();
            Instance::full(fd_set(n, &raw), targets)
                .unwrap()
                .with_rounds(rounds)
                .unwrap()
        })
}

fn rbsc_instances() -> impl Strategy<Value = RbscInstance> {
    (0..5usize, 1..5usize)
        .prop_flat_map(|(r, b)| {
            let set = (
                proptest::sample::subsequence((0..r).collect::<Vec<_>>(), 0..=r),
                proptest::sample::subsequence((0..b).collect::<Vec<_>>(), 0..=b),
            );
            (Just(r), Just(b), vec(set, 1..7))
        })
        .prop_map(|(r, b, sets)| {
            RbscInstance::unnamed(
                r,
                b,
                sets.into_iter().map(|(x, y)| RbscSet::new(x, y)).collect(),
            )
            .unwrap()
        })
}

fn naive_closure(fds: &FdSet, x: &AttrSet) -> AttrSet {
    let mut cur = x.clone();
    loop {
        let next = fds.one_step_closure(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_a_closure_operator(
        (n, raw, xs, ys) in (1..12usize).prop_flat_map(|n| (
            Just(n),
            raw_fds(n, 3, 20),
            vec(0..n, 0..n),
            vec(0..n, 0..n),
        ))
    ) {
        let fds = fd_set(n, &raw);
        let x: AttrSet = xs.into_iter().collect();
        let y = x.union(&ys.into_iter().collect());
        let cx = fds.closure(&x);
        prop_assert_eq!(&cx, &naive_closure(&fds, &x));
        prop_assert!(x.is_subset(&cx));
        prop_assert!(cx.is_subset(&fds.closure(&y)));
        prop_assert_eq!(&fds.closure(&cx), &cx);
        let mut prev = x.clone();
        for d in 0..=n {
            let bd = fds.bounded_closure(&x, d);
            prop_assert!(prev.is_subset(&bd));
            prop_assert!(bd.is_subset(&cx));
            prev = bd;
        }
        prop_assert_eq!(prev, cx);
    }

    #[test]
    fn lp_bounds_the_optimum(inst in instances(9, 3)) {
        let opt = exact_tcand(&inst).unwrap();
        prop_assert!(inst.is_feasible(&opt));
        let model = build_layered_lp(&inst);
        let sol = solve_lp(&model).unwrap();
        prop_assert!(model.max_violation(&sol.values) <= 1e-7);
        prop_assert!(sol.objective <= opt.len() as f64 + 1e-7);
    }

    #[test]
    fn more_rounds_never_cost_more(inst in instances(9, 1)) {
        let mut prev = exact_tcand(&inst).unwrap().len();
        let mut prev_lp = lp_lower_bound(&inst).unwrap();
        for d in 2..=inst.n().min(4) {
            let next = inst.clone().with_rounds(d).unwrap();
            let size = exact_tcand(&next).unwrap().len();
            let lp = lp_lower_bound(&next).unwrap();
            prop_assert!(size <= prev);
            prop_assert!(lp <= prev_lp + 1e-7);
            prev = size;
            prev_lp = lp;
        }
    }

    #[test]
    fn one_round_lps_agree(inst in instances(9, 1)) {
        let layered = lp_lower_bound(&inst).unwrap();
        let one = solve_lp(&build_one_round_lp(&inst).unwrap()).unwrap().objective;
        prop_assert!((layered - one).abs() <= 1e-7, "{} vs {}", layered, one);
    }

    #[test]
    fn deterministic_rounding_is_feasible(inst in instances(10, 3)) {
        let r = round_deterministic(&inst).unwrap();
        prop_assert!(inst.is_feasible(&r.attrs));
        let f = inst.fds().stats().f;
        let factor = ((f + 1) as f64).powi(inst.rounds() as i32);
        prop_assert!(r.attrs.len() as f64 <= factor * r.lp_objective + 1e-6);
    }

    #[test]
    fn randomized_rounding_is_reproducible(inst in instances(10, 3), seed in any::<u64>()) {
        let a = round_randomized_d(&inst, seed, 2.0).unwrap();
        prop_assert_eq!(a, round_randomized_d(&inst, seed, 2.0).unwrap());
    }

    #[test]
    fn sequential_and_parallel_agree(inst in instances(10, 1)) {
        prop_assert_eq!(
            exact_tcand_with(&inst, Execution::Sequential).unwrap(),
            exact_tcand_with(&inst, Execution::Parallel).unwrap()
        );
        prop_assert_eq!(
            monte_carlo(&inst, 2.0, 20, Execution::Sequential).unwrap(),
            monte_carlo(&inst, 2.0, 20, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn text_format_round_trips(inst in instances(10, 3)) {
        let text = write_instance(&inst);
        prop_assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn one_round_tcand_maps_to_red_blue(inst in instances(10, 1)) {
        let opt = exact_tcand(&inst).unwrap();
        let red = tcand_to_rbsc(&inst).unwrap();
        let cover = exact_rbsc(&red.rb).unwrap();
        prop_assert_eq!(cover.cost, opt.len());

        let x = red.cover_to_attrs(&cover.sets);
        prop_assert!(inst.is_feasible(&x));
        prop_assert_eq!(x.len(), cover.cost);

        let back = red.attrs_to_cover(&opt);
        let (cost, covers) = red.rb.evaluate(&back);
        prop_assert!(covers);
        prop_assert!(cost <= opt.len());
    }

    #[test]
    fn red_blue_maps_to_one_round_tcand(rb in rbsc_instances()) {
        let Ok(cover) = exact_rbsc(&rb) else {
            prop_assert!(rb.check_coverable().is_err());
            return Ok(());
        };
        let red = rbsc_to_tcand(&rb).unwrap();
        let opt = exact_tcand(&red.inst).unwrap();
        prop_assert_eq!(opt.len(), cover.cost);

        let x = red.cover_to_attrs(&rb, &cover.sets);
        prop_assert!(red.inst.is_feasible(&x));
        prop_assert_eq!(x.len(), cover.cost);

        let back = red.attrs_to_cover(&rb, &opt);
        let (cost, covers) = rb.evaluate(&back);
        prop_assert!(covers);
        prop_assert!(cost <= opt.len());

        let greedy = rbsc_greedy(&rb).unwrap();
        prop_assert!(rb.evaluate(&greedy.sets).1);
        prop_assert!(greedy.cost >= cover.cost);
    }

    #[test]
    fn simple_solver_is_feasible(
        (n, edges, marks) in (1..12usize).prop_flat_map(|n| (
            Just(n),
            vec((0..n, 0..n), 0..=2 * n),
            vec(any::<bool>(), n),
        ))
    ) {
        let fds = FdSet::new(n, edges.iter().map(|&(u, v)| Fd::new([u], v))).unwrap();
        let targets: AttrSet = (0..n).filter(|&i| marks[i]).collect();
        let inst = Instance::full(fds, targets).unwrap();
        let sol = solve_simple(&inst).unwrap();
        prop_assert!(inst.is_feasible(&sol.attrs));
        prop_assert!(sol.attrs.len() <= sol.sources);
        let opt = exact_tcand(&inst).unwrap().len();
        prop_assert!(sol.attrs.len() >= opt);
    }
}
