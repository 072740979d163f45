use cantor_calculus::cantor_set::{build_prefractal, CantorParams};
use cantor_calculus::fractal_calculus::{worked, IntegrationLadder};
use cantor_calculus::mass_staircase::{Normalization, StaircaseEvaluator, Subdivision};
use cantor_calculus::{CantorCalculus, ConjugateFunction, GridFunction};
use proptest::prelude::*;

type Outer = fn(f64) -> f64;

fn calculus(xi: f64, depth: u32) -> CantorCalculus {
    let params = CantorParams::proportional(xi, depth).unwrap();
    CantorCalculus::new(build_prefractal(params).unwrap(), StaircaseEvaluator::new(params).unwrap()).unwrap()
}

fn grid(xi: f64, depth: u32, values: &[f64]) -> (GridFunction, StaircaseEvaluator) {
    let params = CantorParams::proportional(xi, depth).unwrap();
    let set = build_prefractal(params).unwrap();
    let n = set.endpoints().len();
    let vals = values.iter().cycle().take(n).copied().collect();
    (GridFunction::from_values(set, vals).unwrap(), StaircaseEvaluator::new(params).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lower_below_upper_on_any_subdivision(
        xi in 0.1f64..0.9,
        depth in 1u32..=6,
        values in prop::collection::vec(-5.0f64..5.0, 8..64),
        mut cuts in prop::collection::vec(0.0f64..1.0, 0..20),
    ) {
        let (f, ev) = grid(xi, depth, &values);
        cuts.extend([0.0, 1.0]);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let q = Subdivision::new(cuts).unwrap();
        let (lo, hi) = (f.lower_sum(&q, &ev), f.upper_sum(&q, &ev));
        prop_assert!(lo <= hi + 1e-12);
        // the aligned sums are the lower and upper integrals
        let exact = f.darboux(0.0, 1.0, &ev).unwrap();
        prop_assert!(lo <= exact.lower + 1e-9);
        prop_assert!(exact.upper <= hi + 1e-9);
        prop_assert!(exact.lower <= exact.upper + 1e-12);
    }

    #[test]
    fn refinement_tightens_sums(
        xi in 0.1f64..0.9,
        depth in 1u32..=6,
        values in prop::collection::vec(-5.0f64..5.0, 8..64),
        cuts in prop::collection::vec(0.001f64..0.999, 1..10),
        extra in prop::collection::vec(0.001f64..0.999, 1..10),
    ) {
        let (f, ev) = grid(xi, depth, &values);
        let mut pts = vec![0.0, 1.0];
        pts.extend(cuts);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let q = Subdivision::new(pts).unwrap();
        let r = q.refine(&extra);
        prop_assert!(f.lower_sum(&q, &ev) <= f.lower_sum(&r, &ev) + 1e-9);
        prop_assert!(f.upper_sum(&r, &ev) <= f.upper_sum(&q, &ev) + 1e-9);
    }

    #[test]
    fn integral_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, v in 0.0f64..0.5, w in 0.5f64..1.0) {
        let calc = calculus(1.0 / 3.0, 8);
        let f = ConjugateFunction::new(|u: f64| u * u);
        let h = ConjugateFunction::new(f64::cos);
        let combo = ConjugateFunction::linear_combination(a, &f, b, &h);
        let lhs = calc.integral(&combo, v, w).unwrap();
        let rhs = a * calc.integral(&f, v, w).unwrap() + b * calc.integral(&h, v, w).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn derivative_of_staircase_is_characteristic() {
    let id = ConjugateFunction::identity();
    for depth in 0..=10 {
        let calc = calculus(1.0 / 3.0, depth);
        for i in 0..=400 {
            let x = i as f64 / 400.0;
            assert_eq!(calc.derivative(&id, x), calc.characteristic(x), "depth {depth}, x {x}");
        }
        // the grid quotient of S over its own support is 1 on every interval
        let s = calc.sample(|x| calc.staircase().eval(x)).unwrap();
        for iv in calc.support().intervals() {
            let d = s.derivative(calc.staircase(), 0.5 * (iv.left + iv.right)).unwrap();
            assert!((d - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn sampled_integrals_converge_to_conjugate_integrals() {
    let calc = calculus(1.0 / 3.0, 4);
    let ev = calc.staircase().clone();
    let outers: [(&str, Outer); 3] = [("u", |u| u), ("u^2", |u| u * u), ("sin", f64::sin)];
    for (name, g) in outers {
        let f = ConjugateFunction::new(g);
        let exact = calc.integral(&f, 0.0, 1.0).unwrap();
        let sums = calc
            .integrate_sampled(|x| g(ev.eval(x)), 0.0, 1.0, IntegrationLadder::default())
            .unwrap();
        assert!(sums.lower <= exact + 1e-9 && exact <= sums.upper + 1e-9, "{name}");
        assert!((sums.value() - exact).abs() < 1e-3, "{name}: {} vs {exact}", sums.value());
    }
}

#[test]
fn fundamental_theorem_on_subintervals() {
    let calc = calculus(1.0 / 3.0, 12);
    let f = ConjugateFunction::new(|u: f64| u.powi(3) - u).with_derivative(|u| 3.0 * u * u - 1.0);
    for (v, w) in [(0.0, 1.0), (0.1, 0.9), (0.25, 0.75), (0.0, 1.0 / 3.0)] {
        assert!(calc.ftc_residual(&f, v, w).unwrap() < 1e-7, "[{v}, {w}]");
    }
}

#[test]
fn worked_examples_agree_across_methods() {
    let (calc, f) = worked::sine_example(Normalization::InverseGamma, 10).unwrap();
    let conj = calc.integral(&f, 0.0, 1.0).unwrap();
    assert!(conj.abs() < 1e-12);
    let (calc, f) = worked::square_example(Normalization::InverseGamma, 10).unwrap();
    let conj = calc.integral(&f, 0.0, 1.0).unwrap();
    let total = calc.staircase().total_mass();
    assert!((conj - total.powi(3) / 3.0).abs() < 1e-12);
}

#[test]
fn non_integrable_grid_is_reported() {
    // alternating endpoint values never close the gap
    let (f, ev) = grid(1.0 / 3.0, 6, &[0.0, 1.0]);
    assert!(f.integral(0.0, 1.0, &ev, 1e-3).is_err());
    assert!(f.darboux(0.5, 0.5, &ev).is_err());
}
