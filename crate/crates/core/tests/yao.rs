use std::collections::BTreeMap;

use num_complex::Complex64;
use qtm_core::circsim::{run_circuit, Mode, SparseState};
use qtm_core::decompose::GateSeq;
use qtm_core::qtm::{machines, step, Amplitude, Configuration, Move, QtmSpec, Superposition};
use qtm_core::yao::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn basis(k: usize) -> BTreeMap<usize, Complex64> {
    BTreeMap::from([(k, Complex64::new(1.0, 0.0))])
}

fn fast(spec: &QtmSpec) -> Compiler {
    Compiler::new(spec, Precision::Fast).unwrap()
}

#[test]
fn wire_count_for_two_states_two_symbols() {
    let layout = WireLayout::new(2, 2, 2).unwrap();
    assert_eq!(layout.wires(), 16);
    assert_eq!(layout.cell_width(), 3);
    assert_eq!(layout.cell_range(), (-2, 2));
    assert_eq!(layout.g1_pins(1), vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
    assert_eq!(layout.g1_wires(), 10);
    assert_eq!(WireLayout::new(2, 2, 0), Err(YaoError::NoSteps));
}

#[test]
fn one_step_has_one_placement() {
    let (_, circ) = compile(&machines::move_right(), 1, 1).unwrap();
    let g1s = circ
        .blocks()
        .iter()
        .filter(|b| matches!(b, Block::G1 { .. }))
        .count();
    assert_eq!(g1s, 1);
    assert_eq!(circ.blocks().len(), 2);
    assert!(matches!(circ.blocks()[1], Block::G2 { .. }));
}

#[test]
fn g1_residuals_for_both_machines() {
    for spec in [machines::move_right(), machines::hadamard_walk()] {
        let c = fast(&spec);
        assert!(c.residuals().max() <= 1e-10, "{:?}", c.residuals());
        let u = c.g1().unitary().unwrap();
        assert!(u.unitarity_defect() <= 1e-12);
    }
}

#[test]
fn move_right_g1_is_a_permutation() {
    let spec = machines::move_right();
    let c = fast(&spec);
    let u = c.g1().unitary().unwrap();
    for j in 0..u.dim() {
        let col = u.column(j);
        assert_eq!(col.len(), 1, "column {j}");
        assert!((col[0].1 - 1.0).norm() < 1e-12);
    }
    let local = WireLayout::local(1, 3);
    for s1 in 0..3 {
        for s in 0..3 {
            for s3 in 0..3 {
                let w = local_index(
                    &local,
                    0,
                    [(s1, Marker::Idle), (s, Marker::Head), (s3, Marker::Idle)],
                );
                let v = local_index(
                    &local,
                    0,
                    [(s1, Marker::Idle), (s, Marker::Idle), (s3, Marker::Arrived)],
                );
                assert_eq!(u.apply(&basis(w)), basis(v));
            }
        }
    }
}

#[test]
fn untouched_basis_states_are_fixed() {
    let spec = machines::hadamard_walk();
    let u = fast(&spec).g1().unitary().unwrap().clone();
    let local = WireLayout::local(1, 3);
    let markers = [Marker::Idle, Marker::Head, Marker::Forbidden];
    let mut checked = 0;
    for m1 in markers {
        for m2 in [Marker::Idle, Marker::Forbidden] {
            for m3 in markers {
                let k = local_index(&local, 0, [(2, m1), (1, m2), (0, m3)]);
                assert_eq!(u.apply(&basis(k)), basis(k));
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 18);
    assert!(fixed_basis_states(&spec).contains(&local_index(&local, 0, [(0, Marker::Idle); 3])));
}

#[test]
fn hadamard_transition_images_are_orthonormal() {
    let pairs = transition_pairs::<f64>(&machines::hadamard_walk());
    assert_eq!(pairs.len(), 27);
    let dense: Vec<BTreeMap<usize, Complex64>> = pairs
        .iter()
        .map(|(_, v)| v.iter().map(|(k, z)| (*k, z.to_c64())).collect())
        .collect();
    for (i, a) in dense.iter().enumerate() {
        for (j, b) in dense.iter().enumerate() {
            let ip: Complex64 = a
                .iter()
                .map(|(k, x)| x.conj() * b.get(k).copied().unwrap_or_default())
                .sum();
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((ip - want).norm() <= 1e-12, "({i},{j}) {ip}");
        }
    }
}

#[test]
fn non_unitary_rows_fail_completion() {
    let mut spec = QtmSpec::new(1, 0, 2).unwrap();
    spec.add_transition(0, 0, 0, 0, Move::Right, Amplitude::from_f64(1.0, 0.0))
        .unwrap();
    spec.add_transition(0, 1, 0, 0, Move::Right, Amplitude::from_f64(1.0, 0.0))
        .unwrap();
    assert!(matches!(
        build_g1::<f64>(&spec),
        Err(YaoError::CompletionFailure(_))
    ));
}

fn g2_state(layout: &WireLayout, key: u128) -> u128 {
    let seq = build_g2(layout);
    let mut s = SparseState::basis(layout.wires(), key);
    for g in seq.gates() {
        s.apply_gate(g).unwrap();
    }
    assert_eq!(s.len(), 1);
    let key = s.iter().next().unwrap().0;
    key
}

#[test]
fn g2_swaps_markers_and_is_an_involution() {
    let layout = WireLayout::new(1, 3, 1).unwrap();
    let arrived = encode_cells(&layout, 0, |c| {
        (
            1,
            if c == 0 {
                Marker::Arrived
            } else {
                Marker::Idle
            },
        )
    });
    let head = encode_cells(&layout, 0, |c| {
        (1, if c == 0 { Marker::Head } else { Marker::Idle })
    });
    let idle = encode_cells(&layout, 0, |_| (2, Marker::Idle));
    assert_eq!(g2_state(&layout, arrived), head);
    assert_eq!(g2_state(&layout, idle), idle);
    for key in 0..1u128 << layout.wires() {
        assert_eq!(g2_state(&layout, g2_state(&layout, key)), key);
    }
}

#[test]
fn input_encoding() {
    let layout = WireLayout::new(1, 3, 2).unwrap();
    let empty = encode_input(&[], &layout, 0).unwrap();
    for c in -2..=2 {
        let want = if c == 0 { Marker::Head } else { Marker::Idle };
        assert_eq!(cell_contents(empty, &layout, c), (0, want));
    }
    assert_eq!(processor_state(empty, &layout), 0);
    let x = encode_input(&[1, 2], &layout, 0).unwrap();
    assert_eq!(decode_output(x, &layout).unwrap(), vec![0, 0, 1, 2, 0]);
    assert_eq!(decode_output(0, &layout).unwrap(), vec![0; 5]);
    assert_eq!(
        encode_input(&[1, 1, 1, 1], &layout, 0),
        Err(YaoError::InputTooLong { len: 4, max: 3 })
    );
    assert_eq!(
        encode_input(&[3], &layout, 0),
        Err(YaoError::UnknownSymbol(3))
    );
    let bad = encode_cells(&layout, 0, |c| (if c == 1 { 3 } else { 0 }, Marker::Idle));
    assert_eq!(
        decode_output(bad, &layout),
        Err(YaoError::BadSymbol {
            cell: 1,
            pattern: 3
        })
    );
    let conf = decode_configuration(x, &layout).unwrap().unwrap();
    assert_eq!(
        (conf.state, conf.head, conf.read(0), conf.read(1)),
        (0, 0, 1, 2)
    );
}

#[test]
fn move_right_run_keeps_the_tape() {
    let spec = machines::move_right();
    let (_, circ) = compile(&spec, 2, 3).unwrap();
    let layout = *circ.layout().unwrap();
    let out = run_circuit(
        &circ,
        encode_input(&[2, 1], &layout, 0).unwrap(),
        Mode::Dictionary,
    )
    .unwrap();
    assert_eq!(out.len(), 1);
    let (k, a) = out.iter().next().unwrap();
    assert!((a - 1.0).norm() < 1e-12);
    assert_eq!(
        decode_output(k, &layout).unwrap(),
        vec![0, 0, 0, 2, 1, 0, 0]
    );
    assert_eq!(decode_configuration(k, &layout).unwrap().unwrap().head, 3);
}

#[test]
fn dictionary_is_independent_of_length_and_steps() {
    for spec in [machines::move_right(), machines::hadamard_walk()] {
        let c = fast(&spec);
        let hash = c.dictionary().content_hash();
        for t in 1..=3 {
            for n in 1..=(t + 1).min(4) {
                let (d, circ) = c.compile(n, t).unwrap();
                assert_eq!(d.content_hash(), hash);
                assert_eq!(
                    circ.dictionary(&mut KeyCache::default()).content_hash(),
                    hash
                );
            }
        }
        assert_eq!(fast(&spec).dictionary().text(), c.dictionary().text());
    }
}

#[test]
fn long_inputs_are_rejected() {
    assert!(matches!(
        compile(&machines::move_right(), 3, 1),
        Err(YaoError::InputTooLong { len: 3, max: 2 })
    ));
}

#[test]
fn too_wide_g1_is_rejected() {
    let mut spec = QtmSpec::new(4, 0, 8).unwrap();
    for p in 0..4 {
        for s in 0..8 {
            spec.add_transition(p, s, p, s, Move::Right, Amplitude::from_f64(1.0, 0.0))
                .unwrap();
        }
    }
    assert!(matches!(
        Compiler::new(&spec, Precision::Fast),
        Err(YaoError::GateTooWide(17))
    ));
}

fn random_config(rng: &mut ChaCha8Rng, spec: &QtmSpec, t: i64) -> Configuration {
    let mut c = Configuration::new(rng.gen_range(0..spec.states()), rng.gen_range(1 - t..t));
    for cell in -t..=t {
        c.write(cell, rng.gen_range(0..spec.symbols()));
    }
    c
}

fn encoded(s: &Superposition, layout: &WireLayout) -> SparseState {
    SparseState::from_terms(
        layout.wires(),
        s.iter()
            .map(|(c, a)| (encode_configuration(c, layout).unwrap(), *a)),
    )
}

#[test]
fn one_round_of_the_circuit_is_one_machine_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in [machines::move_right(), machines::hadamard_walk()] {
        let (_, full) = compile(&spec, 1, 3).unwrap();
        let layout = *full.layout().unwrap();
        let round = CompiledCircuit::new(
            full.wires(),
            Some(layout),
            full.provenance().clone(),
            full.blocks()[..layout.placements() + 1].to_vec(),
        );
        for _ in 0..10 {
            let c = random_config(&mut rng, &spec, 3);
            let key = encode_configuration(&c, &layout).unwrap();
            let got = run_circuit(&round, key, Mode::Dictionary).unwrap();
            let want = encoded(&step(&spec, &Superposition::basis(c)), &layout);
            assert!(got.max_abs_diff(&want) <= 1e-10);
        }
    }
}

#[test]
fn gate_sequences_report_their_size() {
    let (_, circ) = compile(&machines::hadamard_walk(), 1, 2).unwrap();
    let g1 = fast(&machines::hadamard_walk()).g1().gates().len();
    assert_eq!(circ.gate_count(), 2 * (3 * g1 + 3 * 5));
    assert_eq!(CompiledCircuit::from_gates(GateSeq::new(3)).gate_count(), 0);
}

#[test]
fn gate_count_is_quadratic_in_steps() {
    for spec in [machines::move_right(), machines::hadamard_walk()] {
        let c = fast(&spec);
        let g1 = c.g1().gates().len();
        for t in 1..=4 {
            let (_, circ) = c.compile(1, t).unwrap();
            assert_eq!(
                circ.gate_count(),
                t * (2 * t - 1) * g1 + 3 * t * (2 * t + 1)
            );
            assert!(circ.gate_count() <= 2 * g1 * t * t + 9 * t * t);
        }
    }
}
