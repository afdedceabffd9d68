//! Circuit code files.
//!
//! ```text
//! wires 12 t 1 qtm <sha256 of the machine>
//! n 1
//! machine states 1 q0=0 alphabet 3
//! symbols _ 0 1
//! dict
//! gate 0 cnot
//! gate 1 r 14488038916154245685/2^64
//! body
//! begin g1 0 1 2 3 4 5 6 7 8 9 10 11
//! apply 1 3
//! end
//! begin g2
//! apply 0 2 3
//! end
//! ```
//!
//! `n`, `machine` and `symbols` appear only for compiled machines; a
//! synthesized matrix has header `wires W t 0 qtm none` and a flat body.
//! Wires are 0-based; a G1 block lists its pins (processor wires, then the
//! three cells left to right).

use std::io::{self, Write};
use std::sync::Arc;

use num_bigint::BigInt;
use qtm_core::decompose::{Angle, Gate, GateKind, GateSeq};
use qtm_core::numerics::Dyadic;
use qtm_core::yao::{
    Block, CompiledCircuit, G1Gate, GateDictionary, GateKey, KeyCache, Provenance, WireLayout,
};

use crate::error::FormatError;
use crate::symbols::Symbols;

/// Machine data a compiled circuit needs to encode inputs and decode outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineInfo {
    pub states: usize,
    pub initial: usize,
    pub symbols: Symbols,
}

#[derive(Clone, Debug)]
pub struct CircuitFile {
    pub dict: GateDictionary,
    pub circuit: CompiledCircuit,
    pub machine: Option<MachineInfo>,
}

impl CircuitFile {
    /// Number of bits in each dictionary angle, if any entry has one.
    pub fn angle_bits(&self) -> Option<u32> {
        self.dict
            .entries()
            .iter()
            .find_map(|k| k.angle.as_ref().map(|d| d.exp))
    }
}

fn write_apply(
    out: &mut impl Write,
    dict: &GateDictionary,
    key: &GateKey,
    g: &Gate,
) -> io::Result<()> {
    let id = dict.id(key).ok_or_else(|| {
        io::Error::new(
            io::ErrorKind::InvalidInput,
            "gate missing from the dictionary",
        )
    })?;
    match g.wires().as_slice() {
        [] => writeln!(out, "apply {id}"),
        [a] => writeln!(out, "apply {id} {a}"),
        [a, b] => writeln!(out, "apply {id} {a} {b}"),
        _ => unreachable!("elementary gates have at most two wires"),
    }
}

/// Writes `circ` with dictionary `dict`; `cache` rounds angles of free gates.
pub fn write_circuit(
    out: &mut impl Write,
    dict: &GateDictionary,
    circ: &CompiledCircuit,
    machine: Option<&MachineInfo>,
    cache: &mut KeyCache,
) -> io::Result<()> {
    let p = circ.provenance();
    let hash = p.qtm_hash.as_deref().unwrap_or("none");
    writeln!(out, "wires {} t {} qtm {hash}", circ.wires(), p.steps)?;
    if let Some(n) = p.n {
        writeln!(out, "n {n}")?;
    }
    if let Some(m) = machine {
        writeln!(
            out,
            "machine states {} q0={} alphabet {}",
            m.states,
            m.initial,
            m.symbols.len()
        )?;
        writeln!(out, "{}", m.symbols.line())?;
    }
    writeln!(out, "dict")?;
    out.write_all(dict.text().as_bytes())?;
    writeln!(out, "body")?;
    let cnot = GateKey::cnot();
    // dictionary ids and local wires of each distinct G1, resolved once
    let mut resolved: Vec<(*const G1Gate, Vec<(usize, Vec<usize>)>)> = Vec::new();
    for block in circ.blocks() {
        match block {
            Block::G1 { pins, gate } => {
                let ptr = Arc::as_ptr(gate);
                let idx = match resolved.iter().position(|(p, _)| *p == ptr) {
                    Some(i) => i,
                    None => {
                        let mut ops = Vec::with_capacity(gate.keys().len());
                        for (g, k) in gate.gates().gates().iter().zip(gate.keys()) {
                            let id = dict.id(k).ok_or_else(|| {
                                io::Error::new(
                                    io::ErrorKind::InvalidInput,
                                    "gate missing from the dictionary",
                                )
                            })?;
                            ops.push((id, g.wires()));
                        }
                        resolved.push((ptr, ops));
                        resolved.len() - 1
                    }
                };
                let pins_text: Vec<String> = pins.iter().map(usize::to_string).collect();
                writeln!(out, "begin g1 {}", pins_text.join(" "))?;
                for (id, wires) in &resolved[idx].1 {
                    match wires.as_slice() {
                        [] => writeln!(out, "apply {id}")?,
                        [a] => writeln!(out, "apply {id} {}", pins[*a])?,
                        [a, b] => writeln!(out, "apply {id} {} {}", pins[*a], pins[*b])?,
                        _ => unreachable!("elementary gates have at most two wires"),
                    }
                }
                writeln!(out, "end")?;
            }
            Block::G2 { .. } => {
                writeln!(out, "begin g2")?;
                let mut res = Ok(());
                block.for_each_gate(|g| {
                    if res.is_ok() {
                        res = write_apply(out, dict, &cnot, g);
                    }
                });
                res?;
                writeln!(out, "end")?;
            }
            Block::Gates(seq) => {
                for g in seq.gates() {
                    write_apply(out, dict, &cache.key(g), g)?;
                }
            }
        }
    }
    Ok(())
}

/// The whole file as a string.
pub fn circuit_text(
    dict: &GateDictionary,
    circ: &CompiledCircuit,
    machine: Option<&MachineInfo>,
    cache: &mut KeyCache,
) -> String {
    let mut buf = Vec::new();
    write_circuit(&mut buf, dict, circ, machine, cache).expect("in-memory write");
    String::from_utf8(buf).expect("ascii output")
}

enum Section {
    Header,
    Dict,
    Body,
}

enum OpenBlock {
    G1 {
        pins: Vec<usize>,
        local: Vec<Option<usize>>,
        gates: GateSeq,
        keys: Vec<GateKey>,
    },
    G2 {
        gates: Vec<(usize, usize)>,
    },
}

fn num<T: std::str::FromStr>(tok: Option<&str>, what: &str, line: usize) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| FormatError::at(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| FormatError::at(line, format!("bad {what} {tok:?}")))
}

fn parse_dyadic(tok: &str, line: usize) -> Result<Dyadic, FormatError> {
    let bad = || FormatError::at(line, format!("angle {tok:?} is not of the form m/2^e"));
    let (m, e) = tok.split_once("/2^").ok_or_else(bad)?;
    let mantissa: BigInt = m.parse().map_err(|_| bad())?;
    let exp: u32 = e.parse().map_err(|_| bad())?;
    Ok(Dyadic::new(mantissa, exp))
}

fn gate_from_key(key: &GateKey, wires: &[usize]) -> Gate {
    let angle = || Angle::from_f64(key.radians().expect("parameterized gate"));
    match key.kind {
        GateKind::Cnot => Gate::Cnot {
            control: wires[0],
            target: wires[1],
        },
        GateKind::R => Gate::R {
            wire: wires[0],
            angle: angle(),
        },
        GateKind::P => Gate::P {
            wire: wires[0],
            angle: angle(),
        },
        GateKind::GPhase => Gate::GPhase { angle: angle() },
    }
}

fn swap_pairs(cnots: &[(usize, usize)], line: usize) -> Result<Vec<(usize, usize)>, FormatError> {
    if cnots.len() % 3 != 0 {
        return Err(FormatError::at(
            line,
            "g2 block is not a sequence of CNOT swaps",
        ));
    }
    cnots
        .chunks(3)
        .map(|c| match c {
            [(a, b), (b2, a2), (a3, b3)] if a == a2 && a == a3 && b == b2 && b == b3 => {
                Ok((*a, *b))
            }
            _ => Err(FormatError::at(
                line,
                "g2 block is not a sequence of CNOT swaps",
            )),
        })
        .collect()
}

pub fn parse_circuit(text: &str) -> Result<CircuitFile, FormatError> {
    let mut section = Section::Header;
    let mut wires: Option<usize> = None;
    let mut steps = 0usize;
    let mut qtm_hash: Option<String> = None;
    let mut n: Option<usize> = None;
    let mut machine: Option<(usize, usize, usize)> = None;
    let mut names: Option<Vec<char>> = None;
    let mut entries: Vec<GateKey> = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut free = None::<GateSeq>;
    let mut open: Option<OpenBlock> = None;
    let mut g1_seen: Vec<Arc<G1Gate>> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut toks = content.split_whitespace();
        let head = toks.next().unwrap_or("");
        match section {
            Section::Header => match head {
                "wires" => {
                    wires = Some(num(toks.next(), "wire count", line)?);
                    if toks.next() != Some("t") {
                        return Err(FormatError::at(line, "expected `wires W t T qtm HASH`"));
                    }
                    steps = num(toks.next(), "step count", line)?;
                    if toks.next() != Some("qtm") {
                        return Err(FormatError::at(line, "expected `wires W t T qtm HASH`"));
                    }
                    let h = toks
                        .next()
                        .ok_or_else(|| FormatError::at(line, "missing machine hash"))?;
                    qtm_hash = (h != "none").then(|| h.to_string());
                }
                "n" => n = Some(num(toks.next(), "input length", line)?),
                "machine" => {
                    if toks.next() != Some("states") {
                        return Err(FormatError::at(
                            line,
                            "expected `machine states Q q0=I alphabet M`",
                        ));
                    }
                    let q = num(toks.next(), "state count", line)?;
                    let q0 = toks
                        .next()
                        .and_then(|t| t.strip_prefix("q0="))
                        .ok_or_else(|| FormatError::at(line, "expected q0=<index>"))?;
                    let q0 = num(Some(q0), "initial state", line)?;
                    if toks.next() != Some("alphabet") {
                        return Err(FormatError::at(
                            line,
                            "expected `machine states Q q0=I alphabet M`",
                        ));
                    }
                    machine = Some((q, q0, num(toks.next(), "alphabet size", line)?));
                }
                "symbols" => {
                    let mut v = Vec::new();
                    for t in toks.by_ref() {
                        let mut cs = t.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => v.push(c),
                            _ => {
                                return Err(FormatError::at(
                                    line,
                                    "symbol names must be one character",
                                ))
                            }
                        }
                    }
                    names = Some(v);
                }
                "dict" => section = Section::Dict,
                other => {
                    return Err(FormatError::at(
                        line,
                        format!("unexpected {other:?} in header"),
                    ))
                }
            },
            Section::Dict => match head {
                "gate" => {
                    let id: usize = num(toks.next(), "gate id", line)?;
                    if id != entries.len() {
                        return Err(FormatError::at(
                            line,
                            format!("gate id {id} out of sequence"),
                        ));
                    }
                    let kind_tok = toks
                        .next()
                        .ok_or_else(|| FormatError::at(line, "missing gate kind"))?;
                    let kind = GateKind::from_name(kind_tok).ok_or_else(|| {
                        FormatError::at(line, format!("unknown gate kind {kind_tok:?}"))
                    })?;
                    let angle = match kind {
                        GateKind::Cnot => None,
                        _ => {
                            let t = toks
                                .next()
                                .ok_or_else(|| FormatError::at(line, "missing angle"))?;
                            Some(parse_dyadic(t, line)?)
                        }
                    };
                    let key = GateKey { kind, angle };
                    if entries.last().is_some_and(|prev| prev >= &key) {
                        return Err(FormatError::at(
                            line,
                            "dictionary entries must be distinct and sorted",
                        ));
                    }
                    entries.push(key);
                }
                "body" => section = Section::Body,
                other => {
                    return Err(FormatError::at(
                        line,
                        format!("unexpected {other:?} in dict"),
                    ))
                }
            },
            Section::Body => {
                let w = wires.ok_or_else(|| FormatError::at(line, "missing wires header"))?;
                match head {
                    "apply" => {
                        let id: usize = num(toks.next(), "gate id", line)?;
                        let key = entries.get(id).ok_or_else(|| {
                            FormatError::at(line, format!("gate id {id} is not in the dictionary"))
                        })?;
                        let mut gw = Vec::with_capacity(2);
                        for t in toks.by_ref() {
                            let x: usize = num(Some(t), "wire", line)?;
                            if x >= w {
                                return Err(FormatError::at(
                                    line,
                                    format!("wire {x} out of range 0..{w}"),
                                ));
                            }
                            gw.push(x);
                        }
                        if gw.len() != key.kind.arity() || (gw.len() == 2 && gw[0] == gw[1]) {
                            return Err(FormatError::at(
                                line,
                                format!("bad wires for a {} gate", key.kind),
                            ));
                        }
                        match &mut open {
                            Some(OpenBlock::G1 {
                                local, gates, keys, ..
                            }) => {
                                let lw: Option<Vec<usize>> = gw.iter().map(|&x| local[x]).collect();
                                let lw = lw.ok_or_else(|| {
                                    FormatError::at(line, "g1 gate touches an unpinned wire")
                                })?;
                                gates.push_raw(gate_from_key(key, &lw));
                                keys.push(key.clone());
                            }
                            Some(OpenBlock::G2 { gates }) => {
                                if key.kind != GateKind::Cnot {
                                    return Err(FormatError::at(line, "g2 blocks hold only CNOTs"));
                                }
                                gates.push((gw[0], gw[1]));
                            }
                            None => free
                                .get_or_insert_with(|| GateSeq::new(w))
                                .push_raw(gate_from_key(key, &gw)),
                        }
                    }
                    "begin" => {
                        if open.is_some() {
                            return Err(FormatError::at(line, "nested block"));
                        }
                        if let Some(seq) = free.take() {
                            blocks.push(Block::Gates(seq));
                        }
                        match toks.next() {
                            Some("g1") => {
                                let mut pins = Vec::new();
                                let mut local = vec![None; w];
                                for t in toks.by_ref() {
                                    let x: usize = num(Some(t), "pin", line)?;
                                    if x >= w || local[x].is_some() {
                                        return Err(FormatError::at(line, format!("bad pin {x}")));
                                    }
                                    local[x] = Some(pins.len());
                                    pins.push(x);
                                }
                                let gates = GateSeq::new(pins.len());
                                open = Some(OpenBlock::G1 {
                                    pins,
                                    local,
                                    gates,
                                    keys: Vec::new(),
                                });
                            }
                            Some("g2") => open = Some(OpenBlock::G2 { gates: Vec::new() }),
                            other => {
                                return Err(FormatError::at(
                                    line,
                                    format!("unknown block {other:?}"),
                                ))
                            }
                        }
                    }
                    "end" => match open.take() {
                        Some(OpenBlock::G1 {
                            pins, gates, keys, ..
                        }) => {
                            let gate = match g1_seen.iter().find(|g| g.gates() == &gates) {
                                Some(g) => g.clone(),
                                None => {
                                    let g = Arc::new(G1Gate::with_keys(gates, None, keys));
                                    g1_seen.push(g.clone());
                                    g
                                }
                            };
                            blocks.push(Block::G1 { pins, gate });
                        }
                        Some(OpenBlock::G2 { gates }) => blocks.push(Block::G2 {
                            pairs: swap_pairs(&gates, line)?,
                        }),
                        None => return Err(FormatError::at(line, "end without begin")),
                    },
                    other => {
                        return Err(FormatError::at(
                            line,
                            format!("unexpected {other:?} in body"),
                        ))
                    }
                }
            }
        }
        if toks.next().is_some() {
            return Err(FormatError::at(line, "trailing tokens"));
        }
    }
    if open.is_some() {
        return Err(FormatError::plain("unterminated block"));
    }
    if !matches!(section, Section::Body) {
        return Err(FormatError::plain("missing dict or body section"));
    }
    if let Some(seq) = free.take() {
        blocks.push(Block::Gates(seq));
    }
    let wires = wires.ok_or_else(|| FormatError::plain("missing wires header"))?;

    let machine = match machine {
        None => None,
        Some((states, initial, alphabet)) => {
            let symbols = match names {
                Some(v) if v.len() == alphabet => Symbols::new(v)?,
                Some(v) => {
                    return Err(FormatError::plain(format!(
                        "{} symbol names for {alphabet} symbols",
                        v.len()
                    )))
                }
                None => Symbols::default_for(alphabet)?,
            };
            Some(MachineInfo {
                states,
                initial,
                symbols,
            })
        }
    };
    let layout = match &machine {
        Some(m) => {
            let lay = WireLayout::new(m.states, m.symbols.len(), steps)
                .map_err(|e| FormatError::plain(e.to_string()))?;
            if lay.wires() != wires {
                return Err(FormatError::plain(format!(
                    "machine layout needs {} wires, header says {wires}",
                    lay.wires()
                )));
            }
            Some(lay)
        }
        None => None,
    };
    let provenance = Provenance { n, steps, qtm_hash };
    let circuit = CompiledCircuit::new(wires, layout, provenance, blocks);
    Ok(CircuitFile {
        dict: GateDictionary::from_keys(entries),
        circuit,
        machine,
    })
}
