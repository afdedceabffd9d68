use alloc::vec::Vec;

use num_complex::Complex64;

use super::gates::{Angle, Gate, GateSeq};
use super::gray::{ControlledOp, CoreOp};
use crate::numerics::Real;

/// Fixed angles shared by every gate a synthesis run emits.
#[derive(Clone, Debug)]
pub struct Constants {
    pi: Angle,
    half_pi: Angle,
    quarter_pi: Angle,
    t: Angle,
    tdg: Angle,
}

impl Constants {
    pub fn new<R: Real>() -> Self {
        let pi = R::pi();
        Self {
            pi: Angle::from_real(&pi),
            half_pi: Angle::from_real(&pi.shift(-1)),
            quarter_pi: Angle::from_real(&pi.shift(-2)),
            t: Angle::from_real(&pi.shift(-2)),
            tdg: Angle::from_real(&pi.shift(-2).neg()),
        }
    }
}

/// Emits gates for controlled single-qubit operations onto a [`GateSeq`].
pub struct ControlledEmitter<'a> {
    out: &'a mut GateSeq,
    consts: &'a Constants,
}

impl<'a> ControlledEmitter<'a> {
    pub fn new(out: &'a mut GateSeq, consts: &'a Constants) -> Self {
        Self { out, consts }
    }

    fn wires(&self) -> usize {
        self.out.wires()
    }

    fn r(&mut self, wire: usize, angle: Angle) {
        self.out.push(Gate::R { wire, angle });
    }

    fn p(&mut self, wire: usize, angle: Angle) {
        self.out.push(Gate::P { wire, angle });
    }

    fn cnot(&mut self, control: usize, target: usize) {
        self.out.push(Gate::Cnot { control, target });
    }

    /// X = R(π/2)·P(π).
    pub fn x(&mut self, wire: usize) {
        self.p(wire, self.consts.pi.clone());
        self.r(wire, self.consts.half_pi.clone());
    }

    /// H = R(π/4)·P(π).
    pub fn h(&mut self, wire: usize) {
        self.p(wire, self.consts.pi.clone());
        self.r(wire, self.consts.quarter_pi.clone());
    }

    /// Emits `op`; negative controls are conjugated by X.
    pub fn emit<R: Real>(&mut self, op: &ControlledOp<R>) {
        let negative: Vec<usize> = op
            .controls
            .iter()
            .filter(|(_, v)| !v)
            .map(|&(w, _)| w)
            .collect();
        let controls: Vec<usize> = op.controls.iter().map(|&(w, _)| w).collect();
        for &w in &negative {
            self.x(w);
        }
        self.positive(op.target, &controls, &op.op);
        for &w in &negative {
            self.x(w);
        }
    }

    fn free_wires(&self, used: &[usize]) -> Vec<usize> {
        (0..self.wires()).filter(|w| !used.contains(w)).collect()
    }

    fn positive<R: Real>(&mut self, t: usize, ctl: &[usize], op: &CoreOp<R>) {
        let k = ctl.len();
        match op {
            CoreOp::Not => {
                let mut used = ctl.to_vec();
                used.push(t);
                let dirty = self.free_wires(&used);
                self.mcx(ctl, t, &dirty);
            }
            CoreOp::PhaseOnZero(theta) => {
                if k == 0 {
                    self.out.push(Gate::GPhase {
                        angle: Angle::from_real(theta),
                    });
                    self.p(t, Angle::from_real(&theta.neg()));
                } else {
                    self.x(t);
                    self.positive(t, ctl, &CoreOp::Phase(theta.clone()));
                    self.x(t);
                }
            }
            CoreOp::Rotation(theta) => match k {
                0 => self.r(t, Angle::from_real(theta)),
                1 => {
                    let half = theta.shift(-1);
                    self.r(t, Angle::from_real(&half));
                    self.cnot(ctl[0], t);
                    self.r(t, Angle::from_real(&half.neg()));
                    self.cnot(ctl[0], t);
                }
                _ => {
                    let (last, rest) = ctl.split_last().expect("k >= 2");
                    let half = theta.shift(-1);
                    let mut used = ctl.to_vec();
                    used.push(t);
                    let mut dirty = self.free_wires(&used);
                    dirty.insert(0, *last);
                    self.positive(t, &[*last], &CoreOp::Rotation(half.clone()));
                    self.mcx(rest, t, &dirty);
                    self.positive(t, &[*last], &CoreOp::Rotation(half.neg()));
                    self.mcx(rest, t, &dirty);
                }
            },
            CoreOp::Phase(theta) => match k {
                0 => self.p(t, Angle::from_real(theta)),
                1 => {
                    let c = ctl[0];
                    let half = Angle::from_real(&theta.shift(-1));
                    self.p(c, half.clone());
                    self.p(t, half);
                    self.cnot(c, t);
                    self.p(t, Angle::from_real(&theta.shift(-1).neg()));
                    self.cnot(c, t);
                }
                _ => {
                    // V = P(θ/2), V² = P(θ)
                    let (last, rest) = ctl.split_last().expect("k >= 2");
                    let half = theta.shift(-1);
                    let mut used = ctl.to_vec();
                    used.push(t);
                    let mut dirty = self.free_wires(&used);
                    dirty.insert(0, t);
                    self.positive(t, &[*last], &CoreOp::Phase(half.clone()));
                    self.mcx(rest, *last, &dirty);
                    self.positive(t, &[*last], &CoreOp::Phase(half.neg()));
                    self.mcx(rest, *last, &dirty);
                    self.positive(t, rest, &CoreOp::Phase(half));
                }
            },
        }
    }

    fn toffoli(&mut self, a: usize, b: usize, t: usize) {
        let (tg, td) = (self.consts.t.clone(), self.consts.tdg.clone());
        self.h(t);
        self.cnot(b, t);
        self.p(t, td.clone());
        self.cnot(a, t);
        self.p(t, tg.clone());
        self.cnot(b, t);
        self.p(t, td.clone());
        self.cnot(a, t);
        self.p(b, tg.clone());
        self.p(t, tg.clone());
        self.h(t);
        self.cnot(a, b);
        self.p(a, tg);
        self.p(b, td);
        self.cnot(a, b);
    }

    /// Multi-controlled NOT. `dirty` wires may hold any state and are restored.
    pub fn mcx(&mut self, ctl: &[usize], t: usize, dirty: &[usize]) {
        let k = ctl.len();
        match k {
            0 => self.x(t),
            1 => self.cnot(ctl[0], t),
            2 => self.toffoli(ctl[0], ctl[1], t),
            _ if dirty.len() >= k - 2 => self.ladder(ctl, &dirty[..k - 2], t),
            _ if !dirty.is_empty() => {
                let a = dirty[0];
                let others = &dirty[1..];
                let m1 = k.div_ceil(2);
                let (left, right) = ctl.split_at(m1);
                let mut right_a = right.to_vec();
                right_a.push(a);
                let mut dirty_left: Vec<usize> = right.to_vec();
                dirty_left.push(t);
                dirty_left.extend_from_slice(others);
                let mut dirty_right: Vec<usize> = left.to_vec();
                dirty_right.extend_from_slice(others);
                for _ in 0..2 {
                    self.mcx(left, a, &dirty_left);
                    self.mcx(&right_a, t, &dirty_right);
                }
            }
            _ => {
                self.h(t);
                let pi = self.consts.pi.clone();
                self.phase_by_angle(t, ctl, pi);
                self.h(t);
            }
        }
    }

    fn phase_by_angle(&mut self, t: usize, ctl: &[usize], angle: Angle) {
        match angle.exact() {
            Some(exact) => {
                let r = crate::numerics::Tracked::lift(exact.clone());
                self.positive(t, ctl, &CoreOp::Phase(r));
            }
            None => self.positive(t, ctl, &CoreOp::Phase(angle.value())),
        }
    }

    /// Toffoli ladder over `k - 2` dirty ancillas (4(k−2) Toffolis).
    fn ladder(&mut self, c: &[usize], a: &[usize], t: usize) {
        let k = c.len();
        let mut steps: Vec<(usize, usize, usize)> = Vec::with_capacity(k - 2);
        for m in (2..k).rev() {
            let target = if m == k - 1 { t } else { a[m - 1] };
            steps.push((c[m], a[m - 2], target));
        }
        let base = (c[0], c[1], a[0]);
        for round in 0..2 {
            let chain = &steps[round..];
            for &(x, y, z) in chain {
                self.toffoli(x, y, z);
            }
            self.toffoli(base.0, base.1, base.2);
            for &(x, y, z) in chain.iter().rev() {
                self.toffoli(x, y, z);
            }
        }
    }
}

/// `U = e^{iα} P(β) R(γ) P(δ)` as gates in application order on `wire`.
pub fn single_qubit_gates(u: [[Complex64; 2]; 2], wire: usize) -> Vec<Gate> {
    let c = u[0][0].norm();
    let s = u[1][0].norm();
    let gamma = libm::atan2(s, c);
    let (alpha, beta, delta) = if s <= 1e-15 {
        let alpha = u[0][0].arg();
        (alpha, 0.0, u[1][1].arg() - alpha)
    } else if c <= 1e-15 {
        let alpha = u[1][0].arg();
        (alpha, 0.0, (-u[0][1]).arg() - alpha)
    } else {
        let alpha = u[0][0].arg();
        (alpha, u[1][0].arg() - alpha, (-u[0][1]).arg() - alpha)
    };
    let mut seq = GateSeq::new(wire + 1);
    seq.push(Gate::P {
        wire,
        angle: Angle::from_f64(delta),
    });
    seq.push(Gate::R {
        wire,
        angle: Angle::from_f64(gamma),
    });
    seq.push(Gate::P {
        wire,
        angle: Angle::from_f64(beta),
    });
    seq.push(Gate::GPhase {
        angle: Angle::from_f64(alpha),
    });
    seq.gates().to_vec()
}
