use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::decompose::{Angle, Gate, GateKind};
use crate::numerics::Dyadic;
use crate::qtm::hex_digest;

/// Bits of the dyadic angle recorded for each dictionary entry.
pub const ANGLE_BITS: u32 = 64;

/// Identity of a dictionary gate: kind plus angle rounded to a dyadic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GateKey {
    pub kind: GateKind,
    pub angle: Option<Dyadic>,
}

impl GateKey {
    pub fn cnot() -> Self {
        Self {
            kind: GateKind::Cnot,
            angle: None,
        }
    }

    /// Angle in radians as the nearest `f64`.
    pub fn radians(&self) -> Option<f64> {
        self.angle.as_ref().map(Dyadic::to_f64)
    }
}

/// Rounds angles to `bits`-bit dyadics, memoizing certified values shared
/// between gates.
#[derive(Debug)]
pub struct KeyCache {
    bits: u32,
    dyadics: BTreeMap<usize, Dyadic>,
}

impl Default for KeyCache {
    fn default() -> Self {
        Self::new(ANGLE_BITS)
    }
}

impl KeyCache {
    pub fn new(bits: u32) -> Self {
        Self {
            bits,
            dyadics: BTreeMap::new(),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn angle(&mut self, a: &Angle) -> Dyadic {
        match a.exact() {
            Some(c) => {
                let bits = self.bits;
                self.dyadics
                    .entry(c.node_key())
                    .or_insert_with(|| c.approx(bits))
                    .clone()
            }
            None => Dyadic::from_f64(a.value())
                .expect("finite angle")
                .rescale(self.bits),
        }
    }

    pub fn key(&mut self, g: &Gate) -> GateKey {
        GateKey {
            kind: g.kind(),
            angle: g.angle().map(|a| self.angle(a)),
        }
    }
}

/// The distinct gates of a circuit family, in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateDictionary {
    entries: Vec<GateKey>,
}

impl GateDictionary {
    pub fn from_keys(keys: impl IntoIterator<Item = GateKey>) -> Self {
        let mut entries: Vec<GateKey> = keys.into_iter().collect();
        entries.sort();
        entries.dedup();
        Self { entries }
    }

    pub fn entries(&self) -> &[GateKey] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn id(&self, key: &GateKey) -> Option<usize> {
        self.entries.binary_search(key).ok()
    }

    pub fn get(&self, id: usize) -> Option<&GateKey> {
        self.entries.get(id)
    }

    /// One `gate <id> <kind> [<mantissa>/2^<bits>]` line per entry.
    pub fn text(&self) -> String {
        let mut s = String::new();
        for (id, k) in self.entries.iter().enumerate() {
            match &k.angle {
                None => writeln!(s, "gate {id} {}", k.kind),
                Some(d) => writeln!(s, "gate {id} {} {d}", k.kind),
            }
            .expect("string write");
        }
        s
    }

    /// SHA-256 of [`GateDictionary::text`], lowercase hex.
    pub fn content_hash(&self) -> String {
        hex_digest(self.text().as_bytes())
    }
}
