use qtm_core::numerics::Complex64;
use qtm_core::qtm::*;

fn config(state: usize, head: i64, tape: &[usize]) -> Configuration {
    let mut c = Configuration::new(state, head);
    for (i, &s) in tape.iter().enumerate() {
        c.write(i as i64, s);
    }
    c
}

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn both_test_machines_are_well_formed() {
    for ring in [3, 4, 5] {
        assert_eq!(
            validate(&machines::move_right(), ring, 1e-10).unwrap(),
            Verdict::WellFormed
        );
        assert_eq!(
            validate(&machines::hadamard_walk(), ring, 1e-10).unwrap(),
            Verdict::WellFormed
        );
    }
}

#[test]
fn heavy_row_and_collision_are_violations() {
    let mut heavy = QtmSpec::new(1, 0, 2).unwrap();
    heavy
        .add_transition(0, 0, 0, 0, Move::Right, Amplitude::from_f64(1.0, 0.0))
        .unwrap();
    heavy
        .add_transition(0, 1, 0, 1, Move::Right, Amplitude::from_f64(1.0, 1.0))
        .unwrap();
    assert!(matches!(
        validate(&heavy, 3, 1e-10).unwrap(),
        Verdict::Violation(_)
    ));

    let mut merge = QtmSpec::new(1, 0, 2).unwrap();
    merge
        .add_transition(0, 0, 0, 0, Move::Right, Amplitude::from_f64(1.0, 0.0))
        .unwrap();
    merge
        .add_transition(0, 1, 0, 0, Move::Right, Amplitude::from_f64(1.0, 0.0))
        .unwrap();
    assert!(matches!(
        validate(&merge, 3, 1e-10).unwrap(),
        Verdict::Violation(_)
    ));
}

#[test]
fn move_right_steps() {
    let spec = machines::move_right();
    let s = step(&spec, &Superposition::basis(config(0, 0, &[1, 2])));
    assert_eq!(s.len(), 1);
    assert_eq!(
        s.amplitude(&config(0, 1, &[1, 2])),
        Complex64::new(1.0, 0.0)
    );
    let r = run(&spec, &[1, 2], 1).unwrap();
    assert_eq!(r, s);
}

#[test]
fn hadamard_walk_one_and_two_steps() {
    let spec = machines::hadamard_walk();
    let s = step(&spec, &Superposition::basis(config(0, 0, &[1])));
    assert_eq!(s.len(), 2);
    assert!((s.amplitude(&config(0, 1, &[1])) - H).norm() < 1e-15);
    assert!((s.amplitude(&config(0, 1, &[2])) - H).norm() < 1e-15);

    // Composing the rows by hand: every branch reads a 0, so all signs are +.
    let two = run(&spec, &[1, 1], 2).unwrap();
    assert_eq!(two.len(), 4);
    for tape in [[1, 1], [1, 2], [2, 1], [2, 2]] {
        assert!((two.amplitude(&config(0, 2, &tape)) - 0.5).norm() < 1e-15);
    }
    // On "01" the second cell reads a 1 and the (1,1) branch flips sign.
    let mixed = run(&spec, &[1, 2], 2).unwrap();
    assert!((mixed.amplitude(&config(0, 2, &[2, 2])) + 0.5).norm() < 1e-15);
    assert!((mixed.amplitude(&config(0, 2, &[1, 2])) + 0.5).norm() < 1e-15);
    assert!((mixed.amplitude(&config(0, 2, &[1, 1])) - 0.5).norm() < 1e-15);
}

#[test]
fn runs_preserve_norm_and_stay_in_window() {
    let spec = machines::hadamard_walk();
    for t in 1..=4 {
        let s = run(&spec, &[1, 2], t).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let d = measure_window(&s, t).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn window_measurements() {
    let spec = machines::hadamard_walk();
    let point = measure_window(&Superposition::basis(config(0, 0, &[2])), 1).unwrap();
    assert_eq!(point.len(), 1);
    assert_eq!(point.probability(&[0, 2, 0]), 1.0);
    let d = measure_window(&run(&spec, &[1], 1).unwrap(), 1).unwrap();
    assert_eq!(d.len(), 2);
    assert!((d.probability(&[0, 1, 0]) - 0.5).abs() < 1e-15);
    assert!((d.probability(&[0, 2, 0]) - 0.5).abs() < 1e-15);
}

#[test]
fn leaving_the_window_is_reported() {
    let s = Superposition::basis(config(0, 3, &[]));
    assert_eq!(
        measure_window(&s, 2),
        Err(QtmError::SupportEscape { cell: 3 })
    );
}

#[test]
fn total_variation() {
    let mut a = WindowDistribution::default();
    a.add(vec![1], 0.5);
    a.add(vec![2], 0.5);
    let mut b = WindowDistribution::default();
    b.add(vec![1], 1.0);
    assert!((a.tv_distance(&b) - 0.5).abs() < 1e-15);
    assert_eq!(a.tv_distance(&a), 0.0);
}

#[test]
fn content_hash_ignores_construction_order() {
    let a = machines::hadamard_walk();
    let text = a.canonical_text();
    assert_eq!(a.content_hash(), machines::hadamard_walk().content_hash());
    assert_ne!(a.content_hash(), machines::move_right().content_hash());
    assert!(text.contains("delta"));
}
