//! Side-by-side comparison of a machine's window distribution with the
//! decoded output distribution of its compiled circuit.

use std::fmt;
use std::sync::Arc;

use qtm_core::circsim::{output_distribution, run_from, ImageCache, Mode, SimOptions, SparseState};
use qtm_core::qtm::{measure_window, run};
use qtm_core::yao::{encode_input, Compiler, G1Gate};

use crate::error::CliError;
use crate::symbols::Symbols;

#[derive(Clone, Debug, PartialEq)]
pub struct EquivRecord {
    pub input: Vec<usize>,
    pub steps: usize,
    /// Total-variation distance; 1 when the circuit's output could not be decoded.
    pub tv: f64,
    pub machine_support: usize,
    pub circuit_support: usize,
    pub gates: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivReport {
    pub records: Vec<EquivRecord>,
    pub tol: f64,
    pub mode: Mode,
}

impl EquivReport {
    pub fn passed(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.failure.is_none() && r.tv <= self.tol)
    }

    pub fn max_tv(&self) -> f64 {
        self.records.iter().map(|r| r.tv).fold(0.0, f64::max)
    }

    /// Human-readable report, one line per input then the verdict.
    pub fn render(&self, symbols: &Symbols) -> String {
        let mut s = String::new();
        for r in &self.records {
            let status = if r.failure.is_none() && r.tv <= self.tol {
                "pass"
            } else {
                "fail"
            };
            s.push_str(&format!(
                "input \"{}\" t {} tv {:.3e} support {}/{} gates {} {status}",
                symbols.render(&r.input),
                r.steps,
                r.tv,
                r.machine_support,
                r.circuit_support,
                r.gates
            ));
            if let Some(f) = &r.failure {
                s.push_str(&format!(" ({f})"));
            }
            s.push('\n');
        }
        let mode = match self.mode {
            Mode::Dictionary => "dictionary",
            Mode::Elementary => "elementary",
        };
        s.push_str(&format!(
            "verdict {} max-tv {:.3e} tol {:e} mode {mode}\n",
            if self.passed() { "pass" } else { "fail" },
            self.max_tv(),
            self.tol
        ));
        s
    }
}

/// Runs both pipelines on a set of inputs, optionally with a replacement G1.
pub struct Equivalence<'a> {
    compiler: &'a Compiler,
    g1: Option<Arc<G1Gate>>,
    opts: SimOptions,
    cache: ImageCache,
}

impl<'a> Equivalence<'a> {
    pub fn new(compiler: &'a Compiler) -> Self {
        Self {
            compiler,
            g1: None,
            opts: SimOptions::default(),
            cache: ImageCache::new(),
        }
    }

    pub fn with_options(mut self, opts: SimOptions) -> Self {
        self.opts = opts;
        self
    }

    /// Uses `g1` in every placement instead of the compiler's own.
    pub fn with_g1(mut self, g1: Arc<G1Gate>) -> Self {
        self.g1 = Some(g1);
        self
    }

    pub fn check(
        &mut self,
        inputs: &[Vec<usize>],
        steps: usize,
        mode: Mode,
        tol: f64,
    ) -> Result<EquivReport, CliError> {
        let spec = self.compiler.spec();
        let mut records = Vec::with_capacity(inputs.len());
        for x in inputs {
            let expected = measure_window(&run(spec, x, steps)?, steps)?;
            let machine_support = expected.len();
            let (_, circ) = self.compiler.compile(x.len(), steps)?;
            let circ = match &self.g1 {
                Some(g) => circ.with_g1(g.clone()),
                None => circ,
            };
            let layout = *circ.layout().expect("compiled circuits carry a layout");
            let key = encode_input(x, &layout, spec.initial())?;
            let start = SparseState::basis(circ.wires(), key);
            let outcome = run_from(&circ, start, mode, &self.opts, &mut self.cache)
                .and_then(|s| Ok((s.len(), output_distribution(&s, &layout)?)));
            let record = match outcome {
                Ok((circuit_support, got)) => EquivRecord {
                    input: x.clone(),
                    steps,
                    tv: expected.tv_distance(&got),
                    machine_support,
                    circuit_support,
                    gates: circ.gate_count(),
                    failure: None,
                },
                Err(e) => EquivRecord {
                    input: x.clone(),
                    steps,
                    tv: 1.0,
                    machine_support,
                    circuit_support: 0,
                    gates: circ.gate_count(),
                    failure: Some(e.to_string()),
                },
            };
            records.push(record);
        }
        Ok(EquivReport { records, tol, mode })
    }
}

/// Convenience wrapper over [`Equivalence`].
pub fn verify_equivalence(
    compiler: &Compiler,
    inputs: &[Vec<usize>],
    steps: usize,
    mode: Mode,
    tol: f64,
) -> Result<EquivReport, CliError> {
    Equivalence::new(compiler).check(inputs, steps, mode, tol)
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Symbols::default_for(
            self.records
                .iter()
                .flat_map(|r| r.input.iter().copied())
                .max()
                .map_or(1, |m| m + 1)
                .min(36),
        )
        .map_err(|_| fmt::Error)?;
        f.write_str(&self.render(&names))
    }
}
