mod common;

use std::sync::Arc;

use common::random_unitary;
use num_complex::Complex64;
use qtm_core::circsim::*;
use qtm_core::decompose::{synthesize, Angle, Gate, GateSeq};
use qtm_core::qtm::{machines, measure_window, run, QtmSpec};
use qtm_core::yao::{
    compile, encode_cells, encode_input, CompiledCircuit, Compiler, G1Gate, Marker, Precision,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn cnot_and_rotation_on_basis_states() {
    let mut s = SparseState::basis(2, 0b10);
    s.apply_gate(&Gate::Cnot {
        control: 0,
        target: 1,
    })
    .unwrap();
    assert_eq!(s, SparseState::basis(2, 0b11));

    let theta = 0.3;
    let mut r = SparseState::basis(1, 0);
    r.apply_gate(&Gate::R {
        wire: 0,
        angle: Angle::from_f64(theta),
    })
    .unwrap();
    assert!((r.get(0) - theta.cos()).norm() < 1e-15);
    assert!((r.get(1) - theta.sin()).norm() < 1e-15);
}

#[test]
fn bad_bindings_are_rejected() {
    let mut s = SparseState::basis(2, 0);
    assert_eq!(
        s.apply_gate(&Gate::Cnot {
            control: 1,
            target: 1
        }),
        Err(SimError::BadBinding { wire: 1, wires: 2 })
    );
    assert_eq!(
        s.apply_gate(&Gate::P {
            wire: 2,
            angle: Angle::from_f64(1.0)
        }),
        Err(SimError::BadBinding { wire: 2, wires: 2 })
    );
    let circ = CompiledCircuit::from_gates(GateSeq::new(3));
    let opts = SimOptions::default();
    let err = run_from(
        &circ,
        SparseState::basis(2, 0),
        Mode::Elementary,
        &opts,
        &mut ImageCache::new(),
    );
    assert_eq!(
        err.unwrap_err(),
        SimError::InputWidth {
            expected: 3,
            got: 2
        }
    );
}

#[test]
fn empty_circuit_leaves_the_state() {
    let circ = CompiledCircuit::from_gates(GateSeq::new(4));
    let out = run_circuit(&circ, 0b1010, Mode::Elementary).unwrap();
    assert_eq!(out, SparseState::basis(4, 0b1010));
}

#[test]
fn g1_maps_an_encoded_w_to_its_v() {
    let spec = machines::hadamard_walk();
    let (_, circ) = compile(&spec, 1, 1).unwrap();
    let layout = *circ.layout().unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let w = encode_cells(&layout, 0, |cell| {
        (
            1,
            if cell == 0 {
                Marker::Head
            } else {
                Marker::Idle
            },
        )
    });
    let g1_only = CompiledCircuit::new(
        circ.wires(),
        None,
        circ.provenance().clone(),
        circ.blocks()[..1].to_vec(),
    );
    let out = run_circuit(&g1_only, w, Mode::Elementary).unwrap();
    let v = |sigma| {
        encode_cells(&layout, 0, |cell| match cell {
            0 => (sigma, Marker::Idle),
            1 => (1, Marker::Arrived),
            _ => (1, Marker::Idle),
        })
    };
    let want = SparseState::from_terms(layout.wires(), [(v(1), c(h, 0.0)), (v(2), c(h, 0.0))]);
    assert!(out.max_abs_diff(&want) <= 1e-10);
}

#[test]
fn one_round_moves_the_move_right_head() {
    let spec = machines::move_right();
    let (_, circ) = compile(&spec, 1, 1).unwrap();
    let layout = *circ.layout().unwrap();
    let out = run_circuit(
        &circ,
        encode_input(&[1], &layout, 0).unwrap(),
        Mode::Elementary,
    )
    .unwrap();
    let want = encode_cells(&layout, 0, |cell| {
        (
            if cell == 0 { 1 } else { 0 },
            if cell == 1 {
                Marker::Head
            } else {
                Marker::Idle
            },
        )
    });
    assert!(out.max_abs_diff(&SparseState::basis(layout.wires(), want)) <= 1e-10);
}

#[test]
fn dictionary_and_elementary_modes_agree() {
    let (_, circ) = compile(&machines::hadamard_walk(), 2, 2).unwrap();
    let layout = *circ.layout().unwrap();
    for x in [vec![], vec![1], vec![2, 1]] {
        let key = encode_input(&x, &layout, 0).unwrap();
        let a = run_circuit(&circ, key, Mode::Dictionary).unwrap();
        let b = run_circuit(&circ, key, Mode::Elementary).unwrap();
        assert!(a.fidelity(&b) >= 1.0 - 1e-10);
    }
}

#[test]
fn output_distribution_matches_machine() {
    let spec = machines::hadamard_walk();
    let (_, circ) = compile(&spec, 1, 1).unwrap();
    let layout = *circ.layout().unwrap();
    let point = output_distribution(&SparseState::basis(layout.wires(), 0), &layout).unwrap();
    assert_eq!(point.len(), 1);
    assert_eq!(point.probability(&[0, 0, 0]), 1.0);
    let out = run_circuit(
        &circ,
        encode_input(&[1], &layout, 0).unwrap(),
        Mode::Elementary,
    )
    .unwrap();
    let d = output_distribution(&out, &layout).unwrap();
    assert_eq!(d.len(), 2);
    assert!((d.probability(&[0, 1, 0]) - 0.5).abs() < 1e-10);
    assert!((d.probability(&[0, 2, 0]) - 0.5).abs() < 1e-10);
    assert!(d.tv_distance(&measure_window(&run(&spec, &[1], 1).unwrap(), 1).unwrap()) < 1e-10);
}

#[test]
fn runs_preserve_norm() {
    let (_, circ) = compile(&machines::hadamard_walk(), 3, 3).unwrap();
    let layout = *circ.layout().unwrap();
    let out = run_circuit(
        &circ,
        encode_input(&[1, 2, 1], &layout, 0).unwrap(),
        Mode::Elementary,
    )
    .unwrap();
    assert!((out.norm_sqr() - 1.0).abs() <= 1e-10);
}

#[test]
fn support_cap_is_enforced() {
    let mut seq = GateSeq::new(4);
    for w in 0..4 {
        seq.push(Gate::R {
            wire: w,
            angle: Angle::from_f64(0.7),
        });
    }
    let circ = CompiledCircuit::from_gates(seq);
    let opts = SimOptions {
        support_cap: 8,
        ..SimOptions::default()
    };
    let err = run_from(
        &circ,
        SparseState::basis(4, 0),
        Mode::Elementary,
        &opts,
        &mut ImageCache::new(),
    );
    assert_eq!(err.unwrap_err(), SimError::SupportCap { size: 16, cap: 8 });
}

#[test]
fn forbidden_marker_is_reported() {
    let (_, circ) = compile(&machines::move_right(), 1, 1).unwrap();
    let layout = *circ.layout().unwrap();
    let key = encode_cells(&layout, 0, |cell| {
        (
            0,
            if cell == -1 {
                Marker::Forbidden
            } else {
                Marker::Idle
            },
        )
    });
    let err = run_circuit(&circ, key, Mode::Dictionary).unwrap_err();
    assert!(matches!(err, SimError::ForbiddenMarker { cell: -1, .. }));
}

#[test]
fn dictionary_mode_needs_the_matrix() {
    let compiler = Compiler::new(&machines::move_right(), Precision::Fast).unwrap();
    let (_, circ) = compiler.compile(1, 1).unwrap();
    let bare = Arc::new(G1Gate::new(compiler.g1().gates().clone(), None, 64));
    let stripped = circ.with_g1(bare);
    let layout = *circ.layout().unwrap();
    let key = encode_input(&[], &layout, 0).unwrap();
    assert_eq!(
        run_circuit(&stripped, key, Mode::Dictionary).unwrap_err(),
        SimError::MissingUnitary
    );
    assert!(run_circuit(&stripped, key, Mode::Elementary).is_ok());
}

#[test]
fn perturbed_angle_is_seen_by_the_matrix() {
    let u = random_unitary(4, 3);
    let mut seq = synthesize(&u).unwrap();
    let idx = seq
        .gates()
        .iter()
        .position(|g| matches!(g, Gate::R { .. }))
        .unwrap();
    let a = seq.gates_mut()[idx].angle_mut().unwrap();
    *a = a.perturbed(0.1);
    let m = materialize_sparse(&seq, PRUNE).unwrap();
    let base = materialize_sparse(&synthesize(&u).unwrap(), PRUNE).unwrap();
    let worst = (0..4)
        .flat_map(|j| {
            let (a, b) = (m.column(j), base.column(j));
            a.iter().map(move |(k, z)| {
                (z - b.iter().find(|(i, _)| i == k).map_or(c(0.0, 0.0), |p| p.1)).norm()
            })
        })
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

fn sparse_dense_gap(circ: &CompiledCircuit, input: usize) -> f64 {
    let sparse = run_circuit(circ, input as u128, Mode::Elementary).unwrap();
    run_dense(circ, input).unwrap().max_abs_diff(&sparse)
}

#[test]
fn sparse_and_dense_simulators_agree() {
    for dim in [2, 4, 8] {
        let circ =
            CompiledCircuit::from_gates(synthesize(&random_unitary(dim, dim as u64)).unwrap());
        for input in 0..dim {
            assert!(sparse_dense_gap(&circ, input) <= 1e-12);
        }
    }
    let specs: [QtmSpec; 2] = [machines::move_right(), machines::hadamard_walk()];
    for spec in specs {
        let (_, circ) = compile(&spec, 2, 1).unwrap();
        let layout = *circ.layout().unwrap();
        assert!(circ.wires() <= 12);
        for x in [vec![], vec![1], vec![2, 1]] {
            let key = encode_input(&x, &layout, 0).unwrap() as usize;
            assert!(sparse_dense_gap(&circ, key) <= 1e-12);
        }
    }
    assert!(matches!(
        run_dense(&CompiledCircuit::from_gates(GateSeq::new(17)), 0),
        Err(SimError::TooWide(17))
    ));
}
